//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any blocking criterion fails.
//!
//! Criteria 2 to 6 run the full protocol on the Tecator CSV at
//! `data/tecator.csv`; set `NIRCAL_TECATOR` to use a different file.

use std::collections::HashSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nircal::active_learning::{select_spacefill, top_k, Strategy};
use nircal::dataset::{load_samples, move_samples, partition_from_sets, InitMethod, Sample, SampleSet, SPECTRUM_LEN};
use nircal::ensemble::bootstrap_resample;
use nircal::harness::{
    average_curves, averaged_samples_to_target, initial_partition, run_experiment_on, samples_to_target, write_report,
    CurveRow, ExperimentConfig, LearningCurve,
};
use nircal::neuralnet::{init_network, Architecture, Network, Scaler, TrainConfig};
use nircal::pca::fit_pca;
use nircal::rng::derive_seed;

const TARGET_RMSE: f64 = 3.5;

const GRAD_REL_TOL: f64 = 1e-5;
const GRAD_ABS_TOL: f64 = 1e-8;
const FD_STEP: f64 = 1e-5;
const ORTHONORMAL_TOL: f64 = 1e-8;
const EIGEN_REL_TOL: f64 = 1e-6;
const BOOTSTRAP_COVERAGE: f64 = 0.632;
const BOOTSTRAP_TOL: f64 = 0.01;

const HEADLINE_RANGE: (usize, usize) = (120, 175);
const HEADLINE_MIN_PAIRED_WINS: usize = 4;
const CONVERGENCE_TOL: f64 = 0.5;
const SPACEFILL_SLACK: usize = 10;
const TREND_SAMPLES: usize = 20;

struct Outcome {
    id: u8,
    name: &'static str,
    passed: bool,
    blocking: bool,
    detail: String,
}

fn data_path() -> PathBuf {
    std::env::var_os("NIRCAL_TECATOR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/tecator.csv"))
}

fn tecator() -> Result<SampleSet, String> {
    let path = data_path();
    let file = std::fs::File::open(&path).map_err(|e| format!("cannot open {}: {e}", path.display()))?;
    load_samples(std::io::BufReader::new(file)).map_err(|e| format!("{}: {e}", path.display()))
}

fn protocol(init_sizes: Vec<usize>, batch: usize, method: InitMethod, strategies: Vec<Strategy>) -> ExperimentConfig {
    ExperimentConfig {
        data_path: data_path(),
        val_size: 40,
        init_sizes,
        init_method: method,
        batch_size: batch,
        ensemble_size: 100,
        repeats: 5,
        strategies,
        master_seed: 42,
        target_rmse: Some(TARGET_RMSE),
        ..ExperimentConfig::default()
    }
}

fn fmt_target(n: Option<usize>) -> String {
    n.map_or("never".into(), |n| n.to_string())
}

fn repeat_points(curve: &LearningCurve, init: usize, strategy: Strategy, repeat: usize) -> Vec<(usize, f64)> {
    curve.rows_for(init, strategy).filter(|r| r.repeat == repeat).map(|r| (r.n_train, r.rmse_val)).collect()
}

// ---------------------------------------------------------------------------
// Criterion 1: property suite
// ---------------------------------------------------------------------------

fn mse_via_forward(net: &Network, batch: &[(Vec<f64>, Vec<f64>)]) -> f64 {
    batch
        .iter()
        .map(|(x, t)| net.forward(x).unwrap().iter().zip(t).map(|(y, t)| (y - t).powi(2)).sum::<f64>())
        .sum::<f64>()
        / batch.len() as f64
}

fn gradient_check(arch: &Architecture, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut net = init_network(arch, seed);
    let n_in = arch.inputs();
    let shift: Vec<f64> = (0..n_in).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let scale: Vec<f64> = (0..n_in).map(|_| rng.gen_range(0.5..2.0)).collect();
    net.set_scalers(
        Scaler::new(shift, scale).unwrap(),
        Scaler::new(vec![rng.gen_range(5.0..20.0)], vec![rng.gen_range(2.0..12.0)]).unwrap(),
    )
    .unwrap();
    for p in net.params_mut().iter_mut() {
        *p += rng.gen_range(-0.1..0.1);
    }
    let batch: Vec<(Vec<f64>, Vec<f64>)> = (0..8)
        .map(|_| ((0..n_in).map(|_| rng.gen_range(-2.0..2.0)).collect(), vec![rng.gen_range(0.0..50.0)]))
        .collect();

    let grad = net.gradient(&batch).map_err(|e| e.to_string())?;
    for (p, &g) in grad.iter().enumerate() {
        let mut plus = net.clone();
        plus.params_mut()[p] += FD_STEP;
        let mut minus = net.clone();
        minus.params_mut()[p] -= FD_STEP;
        let fd = (mse_via_forward(&plus, &batch) - mse_via_forward(&minus, &batch)) / (2.0 * FD_STEP);
        let err = (g - fd).abs();
        if err > GRAD_REL_TOL * fd.abs().max(g.abs()) && err > GRAD_ABS_TOL {
            return Err(format!("{arch} seed {seed} param {p}: analytic {} vs fd {fd}", grad[p]));
        }
    }
    Ok(())
}

/// Covariance assembled entry by entry, eigenvalues by power iteration with
/// deflation.
fn power_iteration_eigenvalues(spectra: &[Vec<f64>], k: usize) -> Vec<f64> {
    let n = spectra.len();
    let dim = spectra[0].len();
    let mean: Vec<f64> = (0..dim).map(|j| spectra.iter().map(|s| s[j]).sum::<f64>() / n as f64).collect();
    let mut cov = vec![vec![0.0; dim]; dim];
    for s in spectra {
        for a in 0..dim {
            for b in 0..dim {
                cov[a][b] += (s[a] - mean[a]) * (s[b] - mean[b]) / (n - 1) as f64;
            }
        }
    }
    let mut values = Vec::new();
    for _ in 0..k {
        let mut v: Vec<f64> = (0..dim).map(|i| 1.0 + (i as f64 * 0.37).cos()).collect();
        let mut lambda = 0.0;
        for _ in 0..50_000 {
            let w: Vec<f64> = (0..dim).map(|a| (0..dim).map(|b| cov[a][b] * v[b]).sum()).collect();
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
            let delta: f64 = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
            v = next;
            lambda = norm;
            if delta < 1e-14 {
                break;
            }
        }
        for a in 0..dim {
            for b in 0..dim {
                cov[a][b] -= lambda * v[a] * v[b];
            }
        }
        values.push(lambda);
    }
    values
}

fn pca_checks() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let factors: Vec<Vec<f64>> =
        (0..12).map(|f| (0..SPECTRUM_LEN).map(|c| ((c + 1) as f64 * (f + 1) as f64 / 23.0).sin()).collect()).collect();
    let spectra: Vec<Vec<f64>> = (0..20)
        .map(|_| {
            let w: Vec<f64> = (0..12).map(|f| rng.gen_range(-1.0..1.0) * 4.0 / (f as f64 + 1.0)).collect();
            (0..SPECTRUM_LEN).map(|c| 2.0 + factors.iter().zip(&w).map(|(fv, w)| fv[c] * w).sum::<f64>()).collect()
        })
        .collect();
    let model = fit_pca(&spectra, 10).map_err(|e| e.to_string())?;
    for (i, a) in model.components().iter().enumerate() {
        for (j, b) in model.components().iter().enumerate() {
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            if (dot - if i == j { 1.0 } else { 0.0 }).abs() > ORTHONORMAL_TOL {
                return Err(format!("components {i},{j} dot {dot}"));
            }
        }
    }
    let oracle = power_iteration_eigenvalues(&spectra, 10);
    for (i, (got, want)) in model.explained_variance().iter().zip(&oracle).enumerate() {
        if (got - want).abs() > EIGEN_REL_TOL * want.abs() {
            return Err(format!("eigenvalue {i}: {got} vs oracle {want}"));
        }
    }

    Ok(())
}

fn bootstrap_check() -> Result<f64, String> {
    let data: Vec<usize> = (0..200).collect();
    let mut total = 0.0;
    for s in 0..10_000u64 {
        let mut seen = [false; 200];
        for i in bootstrap_resample(&data, derive_seed(1, s)).map_err(|e| e.to_string())? {
            seen[i] = true;
        }
        total += seen.iter().filter(|&&b| b).count() as f64 / 200.0;
    }
    let mean = total / 10_000.0;
    if (mean - BOOTSTRAP_COVERAGE).abs() > BOOTSTRAP_TOL {
        return Err(format!("distinct fraction {mean}"));
    }
    Ok(mean)
}

fn best_subset(ids: &[usize], scores: &[f64], k: usize) -> Vec<usize> {
    let n = ids.len();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let total: f64 = members.iter().map(|&i| scores[i]).sum();
        let chosen: Vec<usize> = members.iter().map(|&i| ids[i]).collect();
        if best.as_ref().is_none_or(|(t, c)| total > *t || (total == *t && chosen < *c)) {
            best = Some((total, chosen));
        }
    }
    best.unwrap().1
}

fn synthetic_sample(id: usize, fat: f64) -> Sample {
    Sample::new(id, vec![2.0 + fat / 100.0; SPECTRUM_LEN], fat, None, None).unwrap()
}

fn spacefill_brute_force(training: &[f64], cands: &[(usize, f64)], n0: usize) -> Vec<usize> {
    fn extend(prefix: &mut Vec<usize>, n: usize, len: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for c in 0..n {
            if !prefix.contains(&c) {
                prefix.push(c);
                extend(prefix, n, len, out);
                prefix.pop();
            }
        }
    }
    let mut sequences = Vec::new();
    extend(&mut Vec::new(), cands.len(), n0.min(cands.len()), &mut sequences);
    let key = |seq: &Vec<usize>| -> Vec<(f64, i64)> {
        let mut placed = training.to_vec();
        seq.iter()
            .map(|&c| {
                let d = placed.iter().map(|p| (cands[c].1 - p).abs()).fold(f64::INFINITY, f64::min);
                placed.push(cands[c].1);
                (d, -(cands[c].0 as i64))
            })
            .collect()
    };
    let best = sequences
        .iter()
        .max_by(|a, b| {
            key(a)
                .iter()
                .zip(&key(b))
                .map(|(x, y)| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap();
    best.iter().map(|&c| cands[c].0).collect()
}

fn selector_checks() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for trial in 0..50 {
        let ids: Vec<usize> = (0..20).map(|i| i * 5 + trial).collect();
        let scores: Vec<f64> = (0..20).map(|_| (rng.gen_range(0..40) as f64) / 8.0).collect();
        let mut got = top_k(&ids, &scores, 5);
        got.sort_unstable();
        if got != best_subset(&ids, &scores, 5) {
            return Err(format!("top-k trial {trial} disagrees with subset enumeration"));
        }
    }
    for trial in 0..200 {
        let n_train = rng.gen_range(1..4);
        let n_cand = rng.gen_range(1..=5);
        let fats: Vec<f64> = (0..n_train + n_cand).map(|_| rng.gen_range(0..12) as f64 * 5.0).collect();
        let samples: Vec<Sample> = fats.iter().enumerate().map(|(i, &f)| synthetic_sample(i, f)).collect();
        let all = SampleSet::new(samples, "pool").unwrap();
        let p = partition_from_sets(SampleSet::empty(""), SampleSet::empty(""), all).unwrap();
        let p = move_samples(&p, &(0..n_train).collect::<Vec<_>>()).unwrap();
        let n0 = rng.gen_range(1..=5);
        let got = select_spacefill(&p.training, &p.buffer, n0).map_err(|e| e.to_string())?.chosen_ids;
        let cands: Vec<(usize, f64)> = p.buffer.iter().map(|s| (s.id, s.fat)).collect();
        let want = spacefill_brute_force(&fats[..n_train], &cands, n0);
        if got != want {
            return Err(format!("spacefill trial {trial}: {got:?} vs brute force {want:?}"));
        }
    }
    Ok(())
}

/// Spectra driven by three latent factors; fat follows the first.
fn synthetic_pool(n: usize, seed: u64) -> SampleSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n)
        .map(|id| {
            let z: [f64; 3] = [rng.gen_range(0.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let spectrum = (0..SPECTRUM_LEN)
                .map(|c| {
                    let t = c as f64 / SPECTRUM_LEN as f64;
                    2.5 + z[0] * (6.0 * t).sin()
                        + 0.3 * z[1] * t
                        + 0.2 * z[2] * (11.0 * t).cos()
                        + rng.gen_range(-0.005..0.005)
                })
                .collect();
            Sample::new(id, spectrum, 2.0 + 45.0 * z[0] + z[1], None, None).unwrap()
        })
        .collect();
    SampleSet::new(samples, "synthetic").unwrap()
}

fn determinism_check() -> Result<(), String> {
    let config = ExperimentConfig {
        init_sizes: vec![80],
        batch_size: 40,
        ensemble_size: 4,
        repeats: 2,
        strategies: vec![Strategy::Active, Strategy::Random, Strategy::Spacefill],
        prediction: TrainConfig { max_epochs: 20, ..TrainConfig::prediction() },
        ..protocol(vec![80], 40, InitMethod::Random, vec![])
    };
    let data = synthetic_pool(215, 9);
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let curve = run_experiment_on(&config, &data).map_err(|e| e.to_string())?;
        write_report(&curve, d.path()).map_err(|e| e.to_string())?;
    }
    for f in ["curves.csv", "curves_avg.csv", "selections.csv", "metadata.txt"] {
        let a = std::fs::read(dirs[0].path().join(f)).unwrap();
        let b = std::fs::read(dirs[1].path().join(f)).unwrap();
        if a != b {
            return Err(format!("{f} differs between reruns"));
        }
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let mut failures = Vec::new();
    for seed in 0..10 {
        for arch in [Architecture::prediction(10), Architecture::inversion()] {
            if let Err(e) = gradient_check(&arch, seed) {
                failures.push(e);
            }
        }
    }
    if let Err(e) = pca_checks() {
        failures.push(e);
    }
    let coverage = bootstrap_check().map_err(|e| failures.push(e)).ok();
    if let Err(e) = selector_checks() {
        failures.push(e);
    }
    if let Err(e) = determinism_check() {
        failures.push(e);
    }
    Outcome {
        id: 1,
        name: "property suite",
        passed: failures.is_empty(),
        blocking: true,
        detail: if failures.is_empty() {
            format!(
                "gradients (2 archs x 10 seeds), PCA, bootstrap coverage {:.4}, selectors, byte-identical reruns",
                coverage.unwrap_or(f64::NAN)
            )
        } else {
            failures.join("; ")
        },
    }
}

// ---------------------------------------------------------------------------
// Criteria 2, 3 and 6: init 80 (random), n0 = 5, active vs random
// ---------------------------------------------------------------------------

fn criterion_2(curve: &LearningCurve) -> Outcome {
    let mut wins = 0;
    let mut per_repeat = Vec::new();
    for r in 0..5 {
        let a = samples_to_target(&repeat_points(curve, 80, Strategy::Active, r), TARGET_RMSE);
        let b = samples_to_target(&repeat_points(curve, 80, Strategy::Random, r), TARGET_RMSE);
        let fewer = match (a, b) {
            (Some(a), Some(b)) => a < b,
            (Some(_), None) => true,
            _ => false,
        };
        wins += fewer as usize;
        per_repeat.push(format!("{}/{}", fmt_target(a), fmt_target(b)));
    }
    let avg = average_curves(&curve.rows);
    let active = averaged_samples_to_target(&avg, 80, Strategy::Active, TARGET_RMSE);
    let random = averaged_samples_to_target(&avg, 80, Strategy::Random, TARGET_RMSE);
    let in_range = active.is_some_and(|n| (HEADLINE_RANGE.0..=HEADLINE_RANGE.1).contains(&n));
    protocol_outcome(
        2,
        wins >= HEADLINE_MIN_PAIRED_WINS && in_range,
        format!(
            "paired wins {wins}/5 (need {HEADLINE_MIN_PAIRED_WINS}; active/random per repeat {}); averaged to-target active {} random {} (need active in [{}, {}])",
            per_repeat.join(" "),
            fmt_target(active),
            fmt_target(random),
            HEADLINE_RANGE.0,
            HEADLINE_RANGE.1
        ),
    )
}

fn final_mean(curve: &LearningCurve, init: usize, strategy: Strategy) -> (usize, f64) {
    let avg = average_curves(&curve.rows);
    let last = avg.iter().rfind(|a| a.init_size == init && a.strategy == strategy).unwrap();
    (last.n_train, last.mean)
}

fn criterion_3(curve: &LearningCurve) -> Outcome {
    let (na, a) = final_mean(curve, 80, Strategy::Active);
    let (nr, r) = final_mean(curve, 80, Strategy::Random);
    protocol_outcome(
        3,
        na == nr && (a - r).abs() < CONVERGENCE_TOL,
        format!("n_train {na}: active {a:.4} vs random {r:.4}, |diff| {:.4} (< {CONVERGENCE_TOL})", (a - r).abs()),
    )
}

fn criterion_6(curve: &LearningCurve, data: &SampleSet, config: &ExperimentConfig) -> Outcome {
    let mut satisfied = 0;
    let mut details = Vec::new();
    for r in 0..5 {
        let partition = initial_partition(config, data, 80, r).unwrap();
        let buffer_mean = partition.buffer.fats().iter().sum::<f64>() / partition.buffer.len() as f64;
        let rows: Vec<&CurveRow> = curve.rows_for(80, Strategy::Active).filter(|x| x.repeat == r).collect();
        let added: Vec<f64> = rows.iter().flat_map(|x| x.chosen_fats.iter().copied()).take(TREND_SAMPLES).collect();
        let added_mean = added.iter().sum::<f64>() / added.len() as f64;
        satisfied += (added_mean > buffer_mean) as usize;
        details.push(format!("{added_mean:.1}>{buffer_mean:.1}"));
    }
    protocol_outcome(
        6,
        satisfied * 2 > 5,
        format!("{satisfied}/5 repeats (first-20 mean vs buffer mean: {})", details.join(" ")),
    )
}

// ---------------------------------------------------------------------------
// Criterion 4: n0 = 20, init 40 and 80
// ---------------------------------------------------------------------------

fn criterion_4(curve: &LearningCurve) -> Outcome {
    let avg = average_curves(&curve.rows);
    let mut ok = true;
    let mut details = Vec::new();
    for init in [40, 80] {
        let a = averaged_samples_to_target(&avg, init, Strategy::Active, TARGET_RMSE);
        let r = averaged_samples_to_target(&avg, init, Strategy::Random, TARGET_RMSE);
        let pass = match (a, r) {
            (Some(_), None) => true,
            (Some(a), Some(r)) => r > a,
            _ => false,
        };
        ok &= pass;
        details.push(format!("init {init}: active {} random {}", fmt_target(a), fmt_target(r)));
    }
    protocol_outcome(4, ok, details.join("; "))
}

// ---------------------------------------------------------------------------
// Criterion 5: spacefill init 80, n0 = 5, active vs spacefill (non-blocking)
// ---------------------------------------------------------------------------

fn criterion_5(curve: &LearningCurve) -> Outcome {
    let avg = average_curves(&curve.rows);
    let a = averaged_samples_to_target(&avg, 80, Strategy::Active, TARGET_RMSE);
    let s = averaged_samples_to_target(&avg, 80, Strategy::Spacefill, TARGET_RMSE);
    let passed = match (a, s) {
        (Some(a), Some(s)) => a <= s + SPACEFILL_SLACK,
        (Some(_), None) => true,
        _ => false,
    };
    protocol_outcome(
        5,
        passed,
        format!(
            "to-target active {} spacefill {} (need active <= spacefill + {SPACEFILL_SLACK})",
            fmt_target(a),
            fmt_target(s)
        ),
    )
}

fn run_timed<T>(label: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    eprintln!("  [{label}: {:.1}s]", start.elapsed().as_secs_f64());
    out
}

const PROTOCOL_CRITERIA: [(u8, &str, bool); 5] = [
    (2, "headline: active reaches RMSE 3.5 sooner", true),
    (3, "convergence equivalence at full training size", true),
    (4, "large batch: random lags or never reaches 3.5", true),
    (5, "space-filling comparison (non-blocking)", false),
    (6, "sample trend: active adds high-fat samples first", true),
];

fn protocol_outcome(id: u8, passed: bool, detail: String) -> Outcome {
    let &(_, name, blocking) = PROTOCOL_CRITERIA.iter().find(|c| c.0 == id).expect("known criterion");
    Outcome { id, name, passed, blocking, detail }
}

fn protocol_criteria(data: &SampleSet) -> Vec<Outcome> {
    let mut outcomes = Vec::new();
    let headline_config = protocol(vec![80], 5, InitMethod::Random, vec![Strategy::Active, Strategy::Random]);
    let headline = run_timed("init 80, n0 5, active/random", || run_experiment_on(&headline_config, data)).unwrap();
    outcomes.push(criterion_2(&headline));
    outcomes.push(criterion_3(&headline));
    outcomes.push(criterion_6(&headline, data, &headline_config));

    let large_config = protocol(vec![40, 80], 20, InitMethod::Random, vec![Strategy::Active, Strategy::Random]);
    let large = run_timed("init 40/80, n0 20, active/random", || run_experiment_on(&large_config, data)).unwrap();
    outcomes.push(criterion_4(&large));

    let spacefill_config = protocol(vec![80], 5, InitMethod::Spacefill, vec![Strategy::Active, Strategy::Spacefill]);
    let spacefill =
        run_timed("spacefill init 80, n0 5, active/spacefill", || run_experiment_on(&spacefill_config, data)).unwrap();
    outcomes.push(criterion_5(&spacefill));
    outcomes
}

fn main() -> ExitCode {
    // Under `cargo test -- <filter>` only run when the filter names this suite.
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return ExitCode::SUCCESS;
    }

    let mut outcomes = vec![run_timed("criterion 1", criterion_1)];
    match tecator() {
        Ok(data) => {
            eprintln!("protocol runs on {} ({} samples)", data_path().display(), data.len());
            outcomes.extend(protocol_criteria(&data));
        }
        Err(e) => outcomes.extend(PROTOCOL_CRITERIA.iter().map(|&(id, name, blocking)| Outcome {
            id,
            name,
            passed: false,
            blocking,
            detail: e.clone(),
        })),
    }

    outcomes.sort_by_key(|o| o.id);
    let mut blocking_failures = 0;
    for o in &outcomes {
        let status = match (o.passed, o.blocking) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "DEVIATION",
        };
        println!("criterion {} [{status}] {}: {}", o.id, o.name, o.detail);
        blocking_failures += (!o.passed && o.blocking) as usize;
    }
    let ids: HashSet<u8> = outcomes.iter().map(|o| o.id).collect();
    assert_eq!(ids.len(), 6);
    if blocking_failures > 0 {
        println!("acceptance: {blocking_failures} blocking criteria failed");
        ExitCode::FAILURE
    } else {
        println!("acceptance: all blocking criteria passed");
        ExitCode::SUCCESS
    }
}
