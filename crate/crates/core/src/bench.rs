//! Synthetic sequence-classification benchmark for comparing pooling methods.
//!
//! Datasets are generated from per-class temporal templates plus Gaussian
//! noise. Each method pools every sequence into a descriptor (L2-normalized
//! per part, parts concatenated) and a nearest-centroid classifier fitted on
//! the training half is scored on the test half.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{BasisSet, TimeCovariance};
use crate::error::{Error, Result};
use crate::formats;
use crate::linalg::Matrix;
use crate::pooling::{self, PooledDescriptor};
use crate::sequence::FeatureSequence;

/// Upper bound on the resampled length used for pooling.
pub const MAX_POOL_LENGTH: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    /// Distinct linear slopes per class.
    Trend,
    /// Pairs of classes where the second is the time reversal of the first.
    Reversal,
    /// Distinct oscillation rates per class.
    Frequency,
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trend" => Ok(Generator::Trend),
            "reversal" => Ok(Generator::Reversal),
            "frequency" => Ok(Generator::Frequency),
            other => Err(Error::value(format!("unknown generator `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthDatasetSpec {
    pub num_classes: usize,
    pub sequences_per_class: usize,
    pub d: usize,
    #[serde(rename = "T")]
    pub len: usize,
    pub noise_sigma: f64,
    pub generator: Generator,
    pub rng_seed: u64,
}

impl SynthDatasetSpec {
    pub fn validate(&self) -> Result<()> {
        if self.num_classes == 0 || self.sequences_per_class == 0 || self.d == 0 || self.len == 0 {
            return Err(Error::value("dataset counts must all be >= 1"));
        }
        if !(self.noise_sigma >= 0.0) || !self.noise_sigma.is_finite() {
            return Err(Error::value(format!(
                "noise sigma must be finite and >= 0, got {}",
                self.noise_sigma
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub sequence: FeatureSequence,
    pub label: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub spec: SynthDatasetSpec,
    /// Noise-free template of each class.
    pub templates: Vec<FeatureSequence>,
    pub train: Vec<Sample>,
    pub test: Vec<Sample>,
}

/// Time coordinate in [0, 1] for step `t` of `len`.
fn unit_time(t: usize, len: usize) -> f64 {
    if len > 1 {
        t as f64 / (len - 1) as f64
    } else {
        0.0
    }
}

fn template(rows: Vec<Vec<f64>>) -> FeatureSequence {
    FeatureSequence::from_rows(&rows).expect("templates are finite and nonempty")
}

fn make_templates(spec: &SynthDatasetSpec, rng: &mut ChaCha8Rng) -> Vec<FeatureSequence> {
    let (d, len, classes) = (spec.d, spec.len, spec.num_classes);
    match spec.generator {
        Generator::Trend => {
            let offsets: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let gains: Vec<f64> = (0..d).map(|_| rng.gen_range(0.5..1.5)).collect();
            (0..classes)
                .map(|c| {
                    let slope = if classes == 1 {
                        1.0
                    } else {
                        -1.0 + 2.0 * c as f64 / (classes - 1) as f64
                    };
                    template(
                        (0..d)
                            .map(|i| {
                                (0..len)
                                    .map(|t| offsets[i] + slope * gains[i] * unit_time(t, len))
                                    .collect()
                            })
                            .collect(),
                    )
                })
                .collect()
        }
        Generator::Reversal => {
            let mut out = Vec::with_capacity(classes);
            while out.len() < classes {
                // offset + signed ramp + symmetric bump: asymmetric in time
                let base = template(
                    (0..d)
                        .map(|_| {
                            let offset = rng.gen_range(-1.0..1.0);
                            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                            let slope = sign * rng.gen_range(0.5..1.5);
                            let bump = rng.gen_range(-0.5..0.5);
                            (0..len)
                                .map(|t| {
                                    let u = unit_time(t, len);
                                    offset + slope * u + bump * (PI * u).sin()
                                })
                                .collect()
                        })
                        .collect(),
                );
                let reversed = base.reversed();
                out.push(base);
                if out.len() < classes {
                    out.push(reversed);
                }
            }
            out
        }
        Generator::Frequency => {
            let params: Vec<(f64, f64, f64)> = (0..d)
                .map(|_| {
                    (
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(0.5..1.5),
                        rng.gen_range(0.0..2.0 * PI),
                    )
                })
                .collect();
            (0..classes)
                .map(|c| {
                    let cycles = (c + 1) as f64;
                    template(
                        params
                            .iter()
                            .map(|&(offset, amp, phase)| {
                                (0..len)
                                    .map(|t| {
                                        offset
                                            + amp
                                                * (2.0 * PI * cycles * unit_time(t, len) + phase)
                                                    .sin()
                                    })
                                    .collect()
                            })
                            .collect(),
                    )
                })
                .collect()
        }
    }
}

/// Generates a labeled dataset; identical specs give identical datasets.
///
/// Within each class the sequences are shuffled, then the first half
/// (rounded up) goes to training and the rest to testing.
pub fn generate(spec: &SynthDatasetSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let templates = make_templates(spec, &mut rng);
    let noise = Normal::new(0.0, spec.noise_sigma).map_err(|e| Error::value(e.to_string()))?;

    let mut train = Vec::new();
    let mut test = Vec::new();
    for (label, tmpl) in templates.iter().enumerate() {
        let mut samples: Vec<Sample> = (0..spec.sequences_per_class)
            .map(|_| {
                let values: Vec<f64> = tmpl
                    .matrix()
                    .as_slice()
                    .iter()
                    .map(|v| v + noise.sample(&mut rng))
                    .collect();
                Sample {
                    sequence: FeatureSequence::new(
                        Matrix::new(spec.d, spec.len, values).expect("template shape"),
                    )
                    .expect("finite samples"),
                    label,
                }
            })
            .collect();
        samples.shuffle(&mut rng);
        let n_train = spec.sequences_per_class.div_ceil(2);
        test.extend(samples.split_off(n_train));
        train.extend(samples);
    }
    Ok(Dataset {
        spec: spec.clone(),
        templates,
        train,
        test,
    })
}

/// One pooling operator inside a method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PoolPart {
    Mean,
    Max,
    Rank,
    /// DCT basis function, 1-based.
    Dct(usize),
    /// Learned eigen evolution function, 1-based.
    Eigen(usize),
}

impl fmt::Display for PoolPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PoolPart::Mean => f.write_str("mean"),
            PoolPart::Max => f.write_str("max"),
            PoolPart::Rank => f.write_str("rank"),
            PoolPart::Dct(j) => write!(f, "dct:{j}"),
            PoolPart::Eigen(j) => write!(f, "eigen:{j}"),
        }
    }
}

/// A pooling configuration: parts are pooled, normalized, then concatenated.
///
/// Syntax: parts joined by `+`, each one of `mean`, `max`, `rank`,
/// `dct:J`, `eigen:J`, or an index range `dct:A-B` / `eigen:A-B`.
/// For example `eigen:1-3+max` is EEP₁₊₂₊₃ fused with max pooling.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PoolMethod {
    parts: Vec<PoolPart>,
}

impl PoolMethod {
    pub fn new(parts: Vec<PoolPart>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::value("pooling method has no parts"));
        }
        Ok(PoolMethod { parts })
    }

    pub fn parts(&self) -> &[PoolPart] {
        &self.parts
    }

    /// Largest eigen index used, 0 when none.
    pub fn max_eigen_index(&self) -> usize {
        self.parts
            .iter()
            .filter_map(|p| match p {
                PoolPart::Eigen(j) => Some(*j),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for PoolMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, part) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{part}")?;
        }
        Ok(())
    }
}

fn parse_index(s: &str, whole: &str) -> Result<usize> {
    match s.parse::<usize>() {
        Ok(j) if j >= 1 => Ok(j),
        _ => Err(Error::value(format!(
            "bad basis index `{s}` in method `{whole}` (indices start at 1)"
        ))),
    }
}

impl FromStr for PoolMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        for token in s.split('+').map(str::trim) {
            let (name, arg) = match token.split_once(':') {
                Some((n, a)) => (n, Some(a)),
                None => (token, None),
            };
            match (name, arg) {
                ("mean", None) => parts.push(PoolPart::Mean),
                ("max", None) => parts.push(PoolPart::Max),
                ("rank", None) => parts.push(PoolPart::Rank),
                ("dct" | "eigen", Some(arg)) => {
                    let (lo, hi) = match arg.split_once('-') {
                        Some((a, b)) => (parse_index(a, s)?, parse_index(b, s)?),
                        None => {
                            let j = parse_index(arg, s)?;
                            (j, j)
                        }
                    };
                    if lo > hi {
                        return Err(Error::value(format!("empty index range in method `{s}`")));
                    }
                    for j in lo..=hi {
                        parts.push(if name == "dct" {
                            PoolPart::Dct(j)
                        } else {
                            PoolPart::Eigen(j)
                        });
                    }
                }
                _ => return Err(Error::value(format!(
                    "unknown pooling method `{token}` (expected mean, max, rank, dct:J or eigen:J)"
                ))),
            }
        }
        PoolMethod::new(parts)
    }
}

/// Bases shared by all methods during one evaluation.
pub struct PoolingContext {
    len: usize,
    eigen: Option<BasisSet>,
}

impl PoolingContext {
    /// Prepares pooling at `len` time steps, fitting an eigen basis with `eigen_k`
    /// functions on `training` when `eigen_k > 0`.
    pub fn new(len: usize, eigen_k: usize, training: &[FeatureSequence]) -> Result<Self> {
        let eigen = if eigen_k > 0 {
            if eigen_k > len {
                return Err(Error::value(format!(
                    "eigen index {eigen_k} exceeds pooling length {len}"
                )));
            }
            let cov = TimeCovariance::from_sequences(len, training)?;
            Some(cov.fit_eigen()?.take_basis(eigen_k)?)
        } else {
            None
        };
        Ok(PoolingContext { len, eigen })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Descriptor of an already resampled sequence.
    pub fn describe(&self, seq: &FeatureSequence, method: &PoolMethod) -> Result<PooledDescriptor> {
        let parts = method
            .parts()
            .iter()
            .map(|part| {
                let desc = match *part {
                    PoolPart::Mean => pooling::pool_mean(seq),
                    PoolPart::Max => pooling::pool_max(seq),
                    PoolPart::Rank => pooling::pool(seq, &BasisSet::rank(self.len)?, 1)?,
                    PoolPart::Dct(j) => {
                        if j > self.len {
                            return Err(Error::value(format!(
                                "dct index {j} exceeds pooling length {}",
                                self.len
                            )));
                        }
                        pooling::pool(seq, &BasisSet::dct(self.len, j)?, j)?
                    }
                    PoolPart::Eigen(j) => {
                        let basis = self
                            .eigen
                            .as_ref()
                            .ok_or_else(|| Error::State("no eigen basis was fitted".into()))?;
                        pooling::pool(seq, basis, j)?
                    }
                };
                Ok(pooling::l2_normalize(&desc))
            })
            .collect::<Result<Vec<_>>>()?;
        pooling::concat(&parts)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodResult {
    pub method: String,
    pub accuracy: f64,
    /// `confusion[true][predicted]` counts over the test set.
    pub confusion: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub spec: SynthDatasetSpec,
    pub results: Vec<MethodResult>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    spec: &'a SynthDatasetSpec,
    accuracy: BTreeMap<&'a str, f64>,
    confusion: BTreeMap<&'a str, &'a Vec<Vec<usize>>>,
}

impl BenchReport {
    pub fn accuracy(&self, method: &str) -> Option<f64> {
        self.results
            .iter()
            .find(|r| r.method == method)
            .map(|r| r.accuracy)
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        let json = ReportJson {
            spec: &self.spec,
            accuracy: self
                .results
                .iter()
                .map(|r| (r.method.as_str(), r.accuracy))
                .collect(),
            confusion: self
                .results
                .iter()
                .map(|r| (r.method.as_str(), &r.confusion))
                .collect(),
        };
        formats::to_json_bytes(&json)
    }

    /// Plain-text accuracy table.
    pub fn to_table(&self) -> String {
        let width = self
            .results
            .iter()
            .map(|r| r.method.len())
            .max()
            .unwrap_or(0)
            .max("method".len());
        let mut out = format!("{:<width$}  accuracy\n", "method");
        out.push_str(&format!("{}  --------\n", "-".repeat(width)));
        for r in &self.results {
            out.push_str(&format!("{:<width$}  {:.4}\n", r.method, r.accuracy));
        }
        out
    }
}

/// Index of the nearest centroid; exact ties go to the lowest class index.
pub fn nearest_centroid(centroids: &[Vec<f64>], x: &[f64]) -> usize {
    let mut best = 0;
    let mut best_dist = f64::INFINITY;
    for (c, centroid) in centroids.iter().enumerate() {
        let dist: f64 = centroid.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
        if dist < best_dist {
            best = c;
            best_dist = dist;
        }
    }
    best
}

/// Runs every method on the dataset.
pub fn evaluate(dataset: &Dataset, methods: &[PoolMethod]) -> Result<BenchReport> {
    if methods.is_empty() {
        return Err(Error::value("no pooling methods given"));
    }
    if dataset.train.is_empty() || dataset.test.is_empty() {
        return Err(Error::value("dataset needs nonempty train and test splits"));
    }
    let classes = dataset.spec.num_classes;
    let len = dataset.spec.len.min(MAX_POOL_LENGTH);

    let resample = |samples: &[Sample]| -> Result<Vec<FeatureSequence>> {
        samples
            .par_iter()
            .map(|s| pooling::sample_regular(&s.sequence, len))
            .collect()
    };
    let train = resample(&dataset.train)?;
    let test = resample(&dataset.test)?;

    let eigen_k = methods
        .iter()
        .map(PoolMethod::max_eigen_index)
        .max()
        .unwrap_or(0);
    let ctx = PoolingContext::new(len, eigen_k, &train)?;

    let results = methods
        .iter()
        .map(|method| {
            let describe = |seqs: &[FeatureSequence]| -> Result<Vec<Vec<f64>>> {
                seqs.par_iter()
                    .map(|s| ctx.describe(s, method).map(|d| d.values))
                    .collect()
            };
            let train_desc = describe(&train)?;
            let test_desc = describe(&test)?;
            let dim = train_desc[0].len();

            let mut sums = vec![vec![0.0; dim]; classes];
            let mut counts = vec![0usize; classes];
            for (desc, sample) in train_desc.iter().zip(&dataset.train) {
                counts[sample.label] += 1;
                for (s, v) in sums[sample.label].iter_mut().zip(desc) {
                    *s += v;
                }
            }
            let centroids: Vec<Vec<f64>> = sums
                .into_iter()
                .zip(&counts)
                .map(|(sum, &n)| {
                    if n == 0 {
                        // a class without training data can never win
                        vec![f64::INFINITY; dim]
                    } else {
                        sum.into_iter().map(|s| s / n as f64).collect()
                    }
                })
                .collect();

            let mut confusion = vec![vec![0usize; classes]; classes];
            for (desc, sample) in test_desc.iter().zip(&dataset.test) {
                confusion[sample.label][nearest_centroid(&centroids, desc)] += 1;
            }
            let correct: usize = (0..classes).map(|c| confusion[c][c]).sum();
            Ok(MethodResult {
                method: method.to_string(),
                accuracy: correct as f64 / dataset.test.len() as f64,
                confusion,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(BenchReport {
        spec: dataset.spec.clone(),
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(generator: Generator, noise: f64) -> SynthDatasetSpec {
        SynthDatasetSpec {
            num_classes: 2,
            sequences_per_class: 20,
            d: 6,
            len: 25,
            noise_sigma: noise,
            generator,
            rng_seed: 11,
        }
    }

    fn methods(list: &[&str]) -> Vec<PoolMethod> {
        list.iter().map(|m| m.parse().unwrap()).collect()
    }

    #[test]
    fn parse_methods() {
        let m: PoolMethod = "eigen:1-3+max".parse().unwrap();
        assert_eq!(
            m.parts(),
            &[
                PoolPart::Eigen(1),
                PoolPart::Eigen(2),
                PoolPart::Eigen(3),
                PoolPart::Max
            ]
        );
        assert_eq!(m.to_string(), "eigen:1+eigen:2+eigen:3+max");
        assert_eq!(m.max_eigen_index(), 3);
        assert_eq!("dct:2".parse::<PoolMethod>().unwrap().to_string(), "dct:2");
        for bad in ["", "median", "dct", "dct:0", "eigen:3-1", "max:2", "rank+"] {
            assert!(bad.parse::<PoolMethod>().is_err(), "{bad}");
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let s = spec(Generator::Frequency, 0.3);
        assert_eq!(generate(&s).unwrap(), generate(&s).unwrap());
        let mut other = s.clone();
        other.rng_seed += 1;
        assert_ne!(generate(&s).unwrap().train, generate(&other).unwrap().train);
    }

    #[test]
    fn split_sizes() {
        let mut s = spec(Generator::Trend, 0.1);
        s.sequences_per_class = 7;
        s.num_classes = 3;
        let ds = generate(&s).unwrap();
        assert_eq!(ds.train.len(), 12);
        assert_eq!(ds.test.len(), 9);
        for c in 0..3 {
            assert_eq!(ds.test.iter().filter(|x| x.label == c).count(), 3);
        }
    }

    #[test]
    fn reversal_templates_share_mean() {
        let ds = generate(&spec(Generator::Reversal, 0.0)).unwrap();
        assert_eq!(ds.templates[1], ds.templates[0].reversed());
        let a = pooling::pool_mean(&ds.templates[0]);
        let b = pooling::pool_mean(&ds.templates[1]);
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn trend_rank_descriptors_opposite() {
        let ds = generate(&spec(Generator::Trend, 0.0)).unwrap();
        let rank = BasisSet::rank(25).unwrap();
        let up = pooling::pool(&ds.templates[1], &rank, 1).unwrap();
        let down = pooling::pool(&ds.templates[0], &rank, 1).unwrap();
        for (u, d) in up.values.iter().zip(&down.values) {
            assert!(*u > 0.0 && *d < 0.0);
            assert!((u + d).abs() < 1e-9);
        }
    }

    #[test]
    fn single_class_is_perfect() {
        let mut s = spec(Generator::Frequency, 0.5);
        s.num_classes = 1;
        let ds = generate(&s).unwrap();
        let report = evaluate(
            &ds,
            &methods(&["mean", "max", "rank", "dct:2", "eigen:1-2"]),
        )
        .unwrap();
        assert!(report.results.iter().all(|r| r.accuracy == 1.0));
    }

    #[test]
    fn noiseless_reversal() {
        // T = 49 resamples to every other step, a grid symmetric under reversal
        for len in [25, 49] {
            let mut s = spec(Generator::Reversal, 0.0);
            s.len = len;
            check_noiseless_reversal(&generate(&s).unwrap());
        }
    }

    fn check_noiseless_reversal(ds: &Dataset) {
        let report = evaluate(ds, &methods(&["mean", "max", "dct:2", "eigen:2", "rank"])).unwrap();
        assert_eq!(report.accuracy("mean"), Some(0.5));
        assert_eq!(report.accuracy("max"), Some(0.5));
        // every test sample lands on class 0 by tie-break
        let mean = &report.results[0];
        assert_eq!(mean.confusion, vec![vec![10, 0], vec![10, 0]]);
        assert_eq!(report.accuracy("dct:2"), Some(1.0));
        assert_eq!(report.accuracy("eigen:2"), Some(1.0));
        assert_eq!(report.accuracy("rank"), Some(1.0));
    }

    #[test]
    fn duplicate_methods_agree() {
        let ds = generate(&spec(Generator::Frequency, 0.8)).unwrap();
        let report = evaluate(&ds, &methods(&["dct:1-3", "dct:1-3"])).unwrap();
        assert_eq!(report.results[0], report.results[1]);
    }

    #[test]
    fn scale_invariance_after_normalization() {
        let ds = generate(&spec(Generator::Frequency, 0.8)).unwrap();
        let scaled = Dataset {
            train: ds
                .train
                .iter()
                .map(|s| Sample {
                    sequence: s.sequence.scaled(7.5),
                    label: s.label,
                })
                .collect(),
            test: ds
                .test
                .iter()
                .map(|s| Sample {
                    sequence: s.sequence.scaled(7.5),
                    label: s.label,
                })
                .collect(),
            ..ds.clone()
        };
        let m = methods(&["mean", "max", "rank", "dct:2-3", "eigen:1-3"]);
        let a = evaluate(&ds, &m).unwrap();
        let b = evaluate(&scaled, &m).unwrap();
        for (x, y) in a.results.iter().zip(&b.results) {
            assert_eq!(x.accuracy, y.accuracy, "{}", x.method);
        }
    }

    #[test]
    fn report_json_is_stable() {
        let ds = generate(&spec(Generator::Trend, 0.4)).unwrap();
        let m = methods(&["mean", "rank"]);
        let a = evaluate(&ds, &m).unwrap().to_json().unwrap();
        let b = evaluate(&ds, &m).unwrap().to_json().unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.contains("\"accuracy\":{\"mean\":"));
        assert!(text.contains("\"generator\":\"trend\""));
    }

    #[test]
    fn confusion_rows_sum_to_class_counts() {
        let mut s = spec(Generator::Frequency, 1.0);
        s.num_classes = 3;
        let ds = generate(&s).unwrap();
        let report = evaluate(&ds, &methods(&["max", "dct:2-4"])).unwrap();
        for r in &report.results {
            for (c, row) in r.confusion.iter().enumerate() {
                let expected = ds.test.iter().filter(|x| x.label == c).count();
                assert_eq!(row.iter().sum::<usize>(), expected);
            }
            assert!((0.0..=1.0).contains(&r.accuracy));
        }
    }

    #[test]
    fn nearest_centroid_ties_go_low() {
        let centroids = vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![5.0, 5.0]];
        assert_eq!(nearest_centroid(&centroids, &[1.0, 0.0]), 0);
        assert_eq!(nearest_centroid(&centroids, &[5.0, 4.0]), 2);
    }

    #[test]
    fn invalid_spec_rejected() {
        let mut s = spec(Generator::Trend, -1.0);
        assert!(generate(&s).is_err());
        s.noise_sigma = 0.0;
        s.d = 0;
        assert!(generate(&s).is_err());
    }

    #[test]
    fn too_large_index_is_an_error() {
        let ds = generate(&spec(Generator::Trend, 0.1)).unwrap();
        assert!(evaluate(&ds, &methods(&["dct:26"])).is_err());
        assert!(evaluate(&ds, &methods(&["eigen:26"])).is_err());
        assert!(evaluate(&ds, &[]).is_err());
    }
}
