//! Calibration samples and the validation / training / buffer partition.
//!
//! The CSV layout is `id,ch000,…,ch099,moisture,fat,protein`, one spectrum per
//! row. Moisture and protein may be left empty. Ids are reassigned `0..n` in
//! file order on load.

use std::collections::{HashMap, HashSet};
use std::io::{Read, Write};

use rand::seq::index;

use crate::rng::{self, stream};
use crate::{Error, Result};

/// Number of absorbance channels per spectrum.
pub const SPECTRUM_LEN: usize = 100;

/// Number of equal-width fat bins used by space-filling initialization.
pub const SPACEFILL_BINS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub id: usize,
    pub spectrum: Vec<f64>,
    pub fat: f64,
    pub moisture: Option<f64>,
    pub protein: Option<f64>,
}

impl Sample {
    pub fn new(id: usize, spectrum: Vec<f64>, fat: f64, moisture: Option<f64>, protein: Option<f64>) -> Result<Self> {
        if spectrum.len() != SPECTRUM_LEN {
            return Err(Error::dimension(SPECTRUM_LEN, spectrum.len(), "spectrum length"));
        }
        if let Some(ch) = spectrum.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("sample {id}: channel {ch} is not finite")));
        }
        if !fat.is_finite() || !(0.0..=100.0).contains(&fat) {
            return Err(Error::Numerical(format!("sample {id}: fat {fat} outside [0, 100]")));
        }
        Ok(Sample { id, spectrum, fat, moisture, protein })
    }
}

/// An ordered, id-unique collection of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    samples: Vec<Sample>,
    provenance: String,
}

impl SampleSet {
    pub fn new(samples: Vec<Sample>, provenance: impl Into<String>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(samples.len());
        for s in &samples {
            if !seen.insert(s.id) {
                return Err(Error::Invariant(format!("duplicate sample id {}", s.id)));
            }
        }
        Ok(SampleSet { samples, provenance: provenance.into() })
    }

    pub fn empty(provenance: impl Into<String>) -> Self {
        SampleSet { samples: Vec::new(), provenance: provenance.into() }
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Sample> {
        self.samples.iter()
    }

    pub fn ids(&self) -> Vec<usize> {
        self.samples.iter().map(|s| s.id).collect()
    }

    pub fn fats(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.fat).collect()
    }

    pub fn spectra(&self) -> Vec<&[f64]> {
        self.samples.iter().map(|s| s.spectrum.as_slice()).collect()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.samples.iter().any(|s| s.id == id)
    }

    fn relabel(mut self, provenance: &str) -> Self {
        self.provenance = provenance.to_string();
        self
    }
}

impl<'a> IntoIterator for &'a SampleSet {
    type Item = &'a Sample;
    type IntoIter = std::slice::Iter<'a, Sample>;

    fn into_iter(self) -> Self::IntoIter {
        self.samples.iter()
    }
}

/// Validation, training and buffer sets carved out of one source set.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub validation: SampleSet,
    pub training: SampleSet,
    pub buffer: SampleSet,
    total: usize,
}

impl Partition {
    /// Size of the source set the partition was created from.
    pub fn total(&self) -> usize {
        self.total
    }

    /// Checks pairwise disjointness and count conservation.
    pub fn check(&self) -> Result<()> {
        let sets = [&self.validation, &self.training, &self.buffer];
        let count: usize = sets.iter().map(|s| s.len()).sum();
        if count != self.total {
            return Err(Error::Invariant(format!("partition holds {count} samples, source had {}", self.total)));
        }
        let mut seen = HashSet::with_capacity(count);
        for set in sets {
            for s in set {
                if !seen.insert(s.id) {
                    return Err(Error::Invariant(format!("sample {} is in two sets", s.id)));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitMethod {
    Random,
    Spacefill,
}

impl std::str::FromStr for InitMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random" => Ok(InitMethod::Random),
            "spacefill" => Ok(InitMethod::Spacefill),
            other => Err(format!("unknown init method `{other}` (expected random or spacefill)")),
        }
    }
}

impl std::fmt::Display for InitMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InitMethod::Random => "random",
            InitMethod::Spacefill => "spacefill",
        })
    }
}

fn header() -> Vec<String> {
    let mut h = Vec::with_capacity(SPECTRUM_LEN + 4);
    h.push("id".to_string());
    h.extend((0..SPECTRUM_LEN).map(|i| format!("ch{i:03}")));
    h.extend(["moisture", "fat", "protein"].map(String::from));
    h
}

/// Reads samples from CSV. Ids are assigned in file order.
pub fn load_samples<R: Read>(source: R) -> Result<SampleSet> {
    let columns = header();
    let mut reader =
        csv::ReaderBuilder::new().has_headers(true).flexible(true).trim(csv::Trim::All).from_reader(source);

    let found = reader.headers()?.clone();
    if found.len() != columns.len() {
        return Err(Error::Parse {
            row: 0,
            column: None,
            message: format!("header has {} columns, expected {}", found.len(), columns.len()),
        });
    }

    let mut samples = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record?;
        if record.len() != columns.len() {
            return Err(Error::Parse {
                row,
                column: None,
                message: format!("expected {} fields, found {}", columns.len(), record.len()),
            });
        }
        let number = |col: usize| -> Result<f64> {
            let field = &record[col];
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Parse {
                    row,
                    column: Some(columns[col].clone()),
                    message: format!("`{field}` is not a finite number"),
                }),
            }
        };
        let optional = |col: usize| -> Result<Option<f64>> {
            if record[col].is_empty() {
                Ok(None)
            } else {
                number(col).map(Some)
            }
        };

        if record[0].parse::<u64>().is_err() {
            return Err(Error::Parse {
                row,
                column: Some("id".into()),
                message: format!("`{}` is not an integer id", &record[0]),
            });
        }
        let spectrum = (1..=SPECTRUM_LEN).map(number).collect::<Result<Vec<_>>>()?;
        let moisture = optional(SPECTRUM_LEN + 1)?;
        let fat = number(SPECTRUM_LEN + 2)?;
        let protein = optional(SPECTRUM_LEN + 3)?;
        let sample = Sample::new(samples.len(), spectrum, fat, moisture, protein).map_err(|e| Error::Parse {
            row,
            column: Some("fat".into()),
            message: e.to_string(),
        })?;
        samples.push(sample);
    }

    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    SampleSet::new(samples, "source")
}

/// Writes samples in the CSV layout read by [`load_samples`].
pub fn write_samples<W: Write>(set: &SampleSet, sink: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
    writer.write_record(header())?;
    for s in set {
        let mut row = Vec::with_capacity(SPECTRUM_LEN + 4);
        row.push(s.id.to_string());
        row.extend(s.spectrum.iter().map(|v| v.to_string()));
        row.push(s.moisture.map(|v| v.to_string()).unwrap_or_default());
        row.push(s.fat.to_string());
        row.push(s.protein.map(|v| v.to_string()).unwrap_or_default());
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Splits off `val_size` samples, drawn uniformly without replacement, as the
/// fixed validation set. Everything else goes to the buffer; both keep source
/// order.
pub fn split_validation(set: &SampleSet, val_size: usize, seed: u64) -> Result<Partition> {
    if val_size >= set.len() {
        return Err(Error::Size(format!("validation size {val_size} must be smaller than the set ({})", set.len())));
    }
    let mut rng = rng::rng(seed, stream::SPLIT);
    let chosen: HashSet<usize> = index::sample(&mut rng, set.len(), val_size).into_iter().collect();
    let (validation, buffer): (Vec<_>, Vec<_>) = set.samples.iter().enumerate().partition(|(i, _)| chosen.contains(i));
    let strip = |v: Vec<(usize, &Sample)>| v.into_iter().map(|(_, s)| s.clone()).collect();

    let partition = Partition {
        validation: SampleSet { samples: strip(validation), provenance: "validation".into() },
        training: SampleSet::empty("training"),
        buffer: SampleSet { samples: strip(buffer), provenance: "buffer".into() },
        total: set.len(),
    };
    partition.check()?;
    Ok(partition)
}

/// Moves `n_init` buffer samples into the (empty) training set.
pub fn draw_initial(partition: &Partition, n_init: usize, method: InitMethod, seed: u64) -> Result<Partition> {
    if !partition.training.is_empty() {
        return Err(Error::State(format!(
            "initial draw needs an empty training set, found {} samples",
            partition.training.len()
        )));
    }
    let buffer = &partition.buffer;
    if n_init > buffer.len() {
        return Err(Error::Size(format!("cannot draw {n_init} initial samples from a buffer of {}", buffer.len())));
    }
    let positions = match method {
        InitMethod::Random => {
            let mut rng = rng::rng(seed, stream::DRAW);
            index::sample(&mut rng, buffer.len(), n_init).into_vec()
        }
        InitMethod::Spacefill => spacefill_positions(&buffer.fats(), &buffer.ids(), n_init),
    };
    let ids: Vec<usize> = positions.iter().map(|&p| buffer.samples[p].id).collect();
    move_samples(partition, &ids)
}

/// Bin index of `fat` among [`SPACEFILL_BINS`] equal-width bins on `[lo, hi]`.
pub fn fat_bin(fat: f64, lo: f64, hi: f64) -> usize {
    let width = (hi - lo) / SPACEFILL_BINS as f64;
    if width <= 0.0 {
        return 0;
    }
    (((fat - lo) / width).floor().max(0.0) as usize).min(SPACEFILL_BINS - 1)
}

/// Positions chosen by cycling over the fat bins and taking, from each
/// non-empty bin, the unchosen sample closest to the bin center (ties to the
/// lower id).
fn spacefill_positions(fats: &[f64], ids: &[usize], n: usize) -> Vec<usize> {
    if fats.is_empty() || n == 0 {
        return Vec::new();
    }
    let lo = fats.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = fats.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / SPACEFILL_BINS as f64;

    let mut bins: Vec<Vec<usize>> = vec![Vec::new(); SPACEFILL_BINS];
    for (p, &fat) in fats.iter().enumerate() {
        bins[fat_bin(fat, lo, hi)].push(p);
    }
    for (b, members) in bins.iter_mut().enumerate() {
        let center = lo + (b as f64 + 0.5) * width;
        // Pop order: farthest first, so the closest sits at the end.
        members.sort_by(|&x, &y| {
            let dx = (fats[x] - center).abs();
            let dy = (fats[y] - center).abs();
            dy.total_cmp(&dx).then(ids[y].cmp(&ids[x]))
        });
    }

    let mut chosen = Vec::with_capacity(n);
    while chosen.len() < n {
        for members in bins.iter_mut() {
            if chosen.len() == n {
                break;
            }
            if let Some(p) = members.pop() {
                chosen.push(p);
            }
        }
    }
    chosen
}

/// Moves the listed samples from buffer to training, in the listed order.
/// Fails without side effects when any id is not in the buffer.
pub fn move_samples(partition: &Partition, ids: &[usize]) -> Result<Partition> {
    let position: HashMap<usize, usize> = partition.buffer.samples.iter().enumerate().map(|(p, s)| (s.id, p)).collect();
    let mut taken = HashSet::with_capacity(ids.len());
    for &id in ids {
        if !position.contains_key(&id) || !taken.insert(id) {
            return Err(Error::Membership(id));
        }
    }

    let mut training = partition.training.samples.clone();
    training.extend(ids.iter().map(|id| partition.buffer.samples[position[id]].clone()));
    let buffer = partition.buffer.samples.iter().filter(|s| !taken.contains(&s.id)).cloned().collect();

    let next = Partition {
        validation: partition.validation.clone(),
        training: SampleSet { samples: training, provenance: "training".into() },
        buffer: SampleSet { samples: buffer, provenance: "buffer".into() },
        total: partition.total,
    };
    next.check()?;
    Ok(next)
}

/// Builds a partition directly from three sets; used when restoring state.
pub fn partition_from_sets(validation: SampleSet, training: SampleSet, buffer: SampleSet) -> Result<Partition> {
    let total = validation.len() + training.len() + buffer.len();
    let p = Partition {
        validation: validation.relabel("validation"),
        training: training.relabel("training"),
        buffer: buffer.relabel("buffer"),
        total,
    };
    p.check()?;
    Ok(p)
}
