//! Distance statistics: the unitary Wigner-Dyson surmise, the Haar distance
//! law, deviation accumulation in pseudo-group products, decay fits, and
//! the random-target suite.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use statrs::function::erf::erf;

use crate::compiler::{CompileResult, Compiler, HashParams};
use crate::error::{Error, Result};
use crate::icosa::{IcosaGroup, ORDER};
use crate::pseudo::{closing_index, pseudo_product, visit_fine_quaternions, PseudoGroupTable};
use crate::search::{best_distance_profile, WordFamily};
use crate::su2::{
    distance_unchecked, haar_random, log_deviation, project_su2, stream_rng, HermitianDeviation,
    Quaternion, Unitary2,
};

/// Fewest samples accepted by [`fit_wd`].
pub const MIN_FIT_SAMPLES: usize = 100;
/// Bins in the exported histogram.
pub const HISTOGRAM_BINS: usize = 50;

const CSV_MAGIC: &str = "# braidhash-suite v1";

/// Unitary Wigner-Dyson surmise with mean `d_l`.
pub fn wd_pdf(d: f64, d_l: f64) -> f64 {
    if d < 0.0 {
        return 0.0;
    }
    let s = d / d_l;
    32.0 / (PI * PI) * s * s / d_l * (-4.0 / PI * s * s).exp()
}

pub fn wd_cdf(d: f64, d_l: f64) -> f64 {
    if d <= 0.0 {
        return 0.0;
    }
    let a = 4.0 / (PI * d_l * d_l);
    let c = 32.0 / (PI * PI * d_l.powi(3));
    let r = a.sqrt();
    let v = c * (PI.sqrt() / (4.0 * a * r) * erf(r * d) - d * (-a * d * d).exp() / (2.0 * a));
    v.clamp(0.0, 1.0)
}

/// Inverse of [`wd_cdf`], by bisection.
pub fn wd_quantile(p: f64, d_l: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, d_l);
    while wd_cdf(hi, d_l) < p {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if wd_cdf(mid, d_l) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Largest distance between two gates: `√2`.
pub fn max_distance() -> f64 {
    std::f64::consts::SQRT_2
}

/// Density of the distance from a fixed gate to a Haar-random one.
pub fn bf_haar_pdf(d: f64) -> f64 {
    if !(0.0..=max_distance()).contains(&d) {
        return 0.0;
    }
    let h = d / 2.0;
    4.0 / PI * d * d * (1.0 - h * h).max(0.0).sqrt()
}

pub fn bf_haar_cdf(d: f64) -> f64 {
    if d <= 0.0 {
        return 0.0;
    }
    if d >= max_distance() {
        return 1.0;
    }
    let u = (d / 2.0).asin();
    ((4.0 * u - (4.0 * u).sin()) / PI).clamp(0.0, 1.0)
}

/// Kolmogorov-Smirnov distance between the sample and a CDF.
pub fn ks_statistic(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SampleSet {
    pub values: Vec<f64>,
    pub metadata: BTreeMap<String, String>,
}

impl SampleSet {
    pub fn new(values: Vec<f64>) -> Self {
        SampleSet {
            values,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Raw samples, one per line with 9 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(CSV_MAGIC);
        s.push('\n');
        let _ = writeln!(s, "# count={}", self.values.len());
        for (k, v) in &self.metadata {
            if k != "count" {
                let _ = writeln!(s, "# {k}={v}");
            }
        }
        s.push_str("distance\n");
        for v in &self.values {
            let _ = writeln!(s, "{v:.8e}");
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l.trim_end() == CSV_MAGIC => {}
            _ => {
                return Err(Error::Parse {
                    position: 1,
                    token: text.lines().next().unwrap_or("").to_string(),
                    reason: format!("expected '{CSV_MAGIC}'"),
                })
            }
        }
        let mut set = SampleSet::default();
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() || line == "distance" {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                if let Some((k, v)) = meta.trim().split_once('=') {
                    set.metadata.insert(k.trim().into(), v.trim().into());
                }
                continue;
            }
            let v: f64 = line.parse().map_err(|_| Error::Parse {
                position: i + 1,
                token: line.to_string(),
                reason: "not a number".into(),
            })?;
            if !(0.0..=2.0).contains(&v) {
                return Err(Error::InvalidInput(format!(
                    "line {}: distance {v} outside [0, 2]",
                    i + 1
                )));
            }
            set.values.push(v);
        }
        Ok(set)
    }

    /// Histogram of [`HISTOGRAM_BINS`] uniform bins over `[0, 1.05·max]`.
    pub fn histogram(&self) -> Vec<(f64, f64, usize)> {
        let top = (self.max() * 1.05).max(f64::MIN_POSITIVE);
        let w = top / HISTOGRAM_BINS as f64;
        let mut counts = vec![0usize; HISTOGRAM_BINS];
        for &v in &self.values {
            let b = ((v / w) as usize).min(HISTOGRAM_BINS - 1);
            counts[b] += 1;
        }
        counts
            .into_iter()
            .enumerate()
            .map(|(i, c)| (i as f64 * w, (i + 1) as f64 * w, c))
            .collect()
    }

    /// Histogram as CSV, with the empirical density and the fitted surmise
    /// at each bin centre.
    pub fn histogram_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(CSV_MAGIC);
        s.push('\n');
        let _ = writeln!(s, "# histogram bins={HISTOGRAM_BINS} count={}", self.values.len());
        let n = self.values.len().max(1) as f64;
        let d_l = self.mean();
        s.push_str("lower,upper,count,density,wigner_dyson\n");
        for (lo, hi, c) in self.histogram() {
            let _ = writeln!(
                s,
                "{lo:.8e},{hi:.8e},{c},{:.8e},{:.8e}",
                c as f64 / (n * (hi - lo)),
                if d_l > 0.0 { wd_pdf(0.5 * (lo + hi), d_l) } else { 0.0 }
            );
        }
        s
    }
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.iter().sum::<f64>() / v.len() as f64
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WignerDysonFit {
    /// Sample mean, the only parameter of the surmise.
    pub d_l: f64,
    pub ks_stat: f64,
    pub sample_count: usize,
}

pub fn fit_wd(samples: &SampleSet) -> Result<WignerDysonFit> {
    if samples.len() < MIN_FIT_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_FIT_SAMPLES,
            got: samples.len(),
        });
    }
    let d_l = samples.mean();
    if !(d_l > 0.0) {
        return Ok(WignerDysonFit {
            d_l,
            ks_stat: 1.0,
            sample_count: samples.len(),
        });
    }
    Ok(WignerDysonFit {
        d_l,
        ks_stat: ks_statistic(&samples.values, |d| wd_cdf(d, d_l)),
        sample_count: samples.len(),
    })
}

/// Distances to the identity of the fine rotations built from `table`,
/// taking every `stride`-th one in enumeration order and dropping those
/// whose reduced braid word is empty.
pub fn fine_rotation_distances(
    table: &PseudoGroupTable,
    group: &IcosaGroup,
    n: usize,
    stride: usize,
) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if stride == 0 {
        return Err(Error::InvalidInput("stride must be at least 1".into()));
    }
    let per_lead = (ORDER as u64).pow(n as u32 - 1) as usize;
    let parts: Vec<Vec<f64>> = (0..ORDER)
        .into_par_iter()
        .map(|lead| {
            let mut out = Vec::new();
            let mut k = lead * per_lead;
            visit_fine_quaternions(table, group, n, lead, |ix, q| {
                if k.is_multiple_of(stride) {
                    let d = q.distance(&Quaternion::IDENTITY);
                    let trivial = d < 1e-9
                        && pseudo_product(table, ix).is_ok_and(|(w, _)| w.is_empty());
                    if !trivial {
                        out.push(d);
                    }
                }
                k += 1;
            });
            out
        })
        .collect();
    Ok(parts.concat())
}

/// First-order picture of one pseudo-group product.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviationAnalysis {
    /// Per entry: `log(g_i† g̃_i)`.
    pub deltas: Vec<HermitianDeviation>,
    /// `Σ_k Q_k Δ_k Q_k†` with `Q_k = g_1⋯g_k`.
    pub h_first: HermitianDeviation,
    /// Product of the table matrices.
    pub actual: Unitary2,
    /// `d(e^{i·h_first}, actual)`.
    pub residual: f64,
    /// Largest `‖Δ_k‖` (operator norm).
    pub max_delta: f64,
}

pub fn deviation_analysis(
    table: &PseudoGroupTable,
    group: &IcosaGroup,
    indices: &[usize],
) -> Result<DeviationAnalysis> {
    if indices.is_empty() {
        return Err(Error::InvalidInput("empty index tuple".into()));
    }
    let (last, head) = indices.split_last().expect("non-empty");
    if closing_index(group, head)? != *last {
        return Err(Error::InvalidInput(format!(
            "indices {indices:?} do not multiply to the identity"
        )));
    }
    let mut deltas = Vec::with_capacity(indices.len());
    let mut h = HermitianDeviation::zero();
    let mut prefix = Unitary2::IDENTITY;
    let mut actual = Unitary2::IDENTITY;
    for &i in indices {
        let exact = group.element_su2(i)?;
        let approx = table.entry(i)?;
        let d = log_deviation(&project_su2(&(exact.as_unitary().adjoint() * approx.matrix))?)?;
        prefix = prefix * *exact.as_unitary();
        h = h.add(&d.conjugated_by(&prefix));
        actual = actual * approx.matrix;
        deltas.push(d);
    }
    let max_delta = deltas.iter().map(HermitianDeviation::norm).fold(0.0, f64::max);
    Ok(DeviationAnalysis {
        residual: distance_unchecked(&h.exp_i(), &actual),
        deltas,
        h_first: h,
        actual,
        max_delta,
    })
}

/// `n` free indices drawn from `(seed, k)` plus their closing index.
pub fn random_closing_tuple(group: &IcosaGroup, n: usize, seed: u64, k: u64) -> Vec<usize> {
    use rand::Rng;
    let mut rng = stream_rng(seed, k);
    let mut ix: Vec<usize> = (0..n).map(|_| rng.gen_range(0..ORDER)).collect();
    ix.push(closing_index(group, &ix).expect("indices < 60"));
    ix
}

/// Decay length `ξ` from a least-squares fit of `ln d = c − L/ξ`.
pub fn decay_fit(lengths: &[usize], mean_dists: &[f64]) -> Result<f64> {
    if lengths.len() != mean_dists.len() {
        return Err(Error::InvalidInput("lengths and distances differ in size".into()));
    }
    if lengths.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: lengths.len(),
        });
    }
    if mean_dists.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::InvalidInput("distances must be positive".into()));
    }
    let x: Vec<f64> = lengths.iter().map(|&l| l as f64).collect();
    let y: Vec<f64> = mean_dists.iter().map(|d| d.ln()).collect();
    let (mx, my) = (mean(&x), mean(&y));
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("lengths must not all be equal".into()));
    }
    let slope = sxy / sxx;
    if !(slope < 0.0) {
        return Err(Error::InvalidInput(format!(
            "distances do not decay (slope {slope})"
        )));
    }
    Ok(-1.0 / slope)
}

/// Mean best exhaustive-search distance per length, and the fitted `ξ`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayExperiment {
    pub lengths: Vec<usize>,
    pub mean_dists: Vec<f64>,
    pub xi: f64,
    pub count: usize,
    pub seed: u64,
}

pub fn decay_experiment(
    lengths: &[usize],
    count: usize,
    seed: u64,
    family: WordFamily,
) -> Result<DecayExperiment> {
    let lmax = lengths.iter().copied().max().unwrap_or(0);
    let targets: Vec<Unitary2> = (0..count as u64)
        .map(|i| *haar_random(&mut stream_rng(seed, i)).as_unitary())
        .collect();
    let profile = best_distance_profile(&targets, lmax, family)?;
    let mean_dists: Vec<f64> = lengths
        .iter()
        .map(|&l| mean(&profile.iter().map(|row| row[l]).collect::<Vec<_>>()))
        .collect();
    Ok(DecayExperiment {
        xi: decay_fit(lengths, &mean_dists)?,
        lengths: lengths.to_vec(),
        mean_dists,
        count,
        seed,
    })
}

/// One compiled target of a suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteRow {
    pub index: u64,
    pub result: CompileResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub params: HashParams,
    pub seed: u64,
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    /// Distances after the last stage.
    pub fn final_samples(&self) -> SampleSet {
        self.stage_samples(usize::MAX)
    }

    /// Distances after history stage `k` (0 = preprocessed); the last stage
    /// when `k` is out of range.
    pub fn stage_samples(&self, k: usize) -> SampleSet {
        let values = self
            .rows
            .iter()
            .map(|r| {
                let h = &r.result.history;
                h[k.min(h.len() - 1)].dist
            })
            .collect();
        let p = &self.params;
        SampleSet::new(values)
            .with("seed", self.seed)
            .with(
                "params",
                format!(
                    "l={} m={} L={} n={} q={}",
                    p.coarse_length, p.coarse_factors, p.fine_length, p.fine_factors, p.iterations
                ),
            )
            .with("stage", if k == usize::MAX { "final".into() } else { k.to_string() })
    }

    pub fn max_wall_time(&self) -> std::time::Duration {
        self.rows
            .iter()
            .map(|r| r.result.total_wall_time())
            .max()
            .unwrap_or_default()
    }
}

/// The `i`-th Haar target of a suite.
pub fn suite_target(seed: u64, i: u64) -> Unitary2 {
    *haar_random(&mut stream_rng(seed, i)).as_unitary()
}

/// Compiles `count` Haar targets; target `i` comes from stream `(seed, i)`.
pub fn run_suite(compiler: &Compiler<'_>, count: usize, seed: u64) -> SuiteReport {
    let rows = (0..count as u64)
        .into_par_iter()
        .map(|i| SuiteRow {
            index: i,
            result: compiler.compile(&suite_target(seed, i)),
        })
        .collect();
    SuiteReport {
        params: *compiler.params(),
        seed,
        rows,
    }
}
