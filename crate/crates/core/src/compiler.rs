//! The hashing compiler.
//!
//! A target is first approximated by the best product of `m` coarse table
//! entries. Each refinement pass then multiplies that approximation on the
//! right by the best fine rotation: a product of `n + 1` entries of a finer
//! table whose exact group elements multiply to the identity. Only the
//! table errors survive in such a product, so the fine rotations form a
//! dense cloud around the identity.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::braid::{concat_reduce, BraidWord};
use crate::error::{Error, Result};
use crate::icosa::{IcosaGroup, ORDER};
use crate::pseudo::{pseudo_product, visit_fine_quaternions, PseudoGroupTable};
use crate::search::Band;
use crate::su2::{distance_unchecked, Quaternion, Unitary2};

/// Largest product order scanned by either stage (60⁴ ≈ 1.3·10⁷ candidates).
pub const MAX_FACTORS: usize = 4;

/// Parameters of the hashing pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HashParams {
    /// Word length of the coarse table.
    pub coarse_length: usize,
    /// Number of coarse entries multiplied by the preprocessor.
    pub coarse_factors: usize,
    /// Word length of the first refinement table.
    pub fine_length: usize,
    /// Free factors in a fine rotation (it has `fine_factors + 1` entries).
    pub fine_factors: usize,
    /// Number of refinement passes.
    pub iterations: usize,
}

impl Default for HashParams {
    fn default() -> Self {
        HashParams {
            coarse_length: 8,
            coarse_factors: 3,
            fine_length: 24,
            fine_factors: 3,
            iterations: 1,
        }
    }
}

impl HashParams {
    pub fn validate(&self) -> Result<()> {
        if self.coarse_factors == 0 || self.fine_factors == 0 || self.iterations == 0 {
            return Err(Error::InvalidInput(format!(
                "m, n and q must be at least 1 (got m={}, n={}, q={})",
                self.coarse_factors, self.fine_factors, self.iterations
            )));
        }
        for (name, k) in [("m", self.coarse_factors), ("n", self.fine_factors)] {
            if k > MAX_FACTORS {
                return Err(Error::ResourceLimit {
                    what: format!("{name}={k} product scan"),
                    attempted: (ORDER as u64).saturating_pow(k as u32),
                    limit: (ORDER as u64).pow(MAX_FACTORS as u32),
                });
            }
        }
        Ok(())
    }

    /// Candidates scanned by the preprocessor.
    pub fn coarse_candidates(&self) -> u64 {
        (ORDER as u64).pow(self.coarse_factors as u32)
    }

    /// Candidates scanned by each refinement pass.
    pub fn fine_candidates(&self) -> u64 {
        (ORDER as u64).pow(self.fine_factors as u32)
    }
}

/// Expected error reduction of one refinement pass with `n` free factors.
pub fn predicted_reduction(n: usize) -> f64 {
    (ORDER as f64).powf(n as f64 / 3.0) / ((n + 1) as f64).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    Preprocessed,
    /// Refinement pass `k` (starting at 1).
    Refined(usize),
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Stage::Preprocessed => f.write_str("preprocessed"),
            Stage::Refined(k) => write!(f, "refined-{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Approximation {
    pub word: BraidWord,
    pub matrix: Unitary2,
    pub dist: f64,
    pub stage: Stage,
    /// Summed length of the table words used, before junction reduction.
    pub raw_length: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StageRecord {
    pub stage: Stage,
    pub dist: f64,
    pub length: usize,
    pub wall_time: Duration,
    pub candidates: u64,
    /// False when the pass kept its input unchanged.
    pub improved: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompileResult {
    pub approximation: Approximation,
    pub history: Vec<StageRecord>,
    /// `m·l + Σ (n+1)·N_k`: the length if every table word had full length.
    pub nominal_length: usize,
}

impl CompileResult {
    pub fn raw_length(&self) -> usize {
        self.approximation.raw_length
    }

    pub fn reduced_length(&self) -> usize {
        self.approximation.word.length()
    }

    pub fn total_wall_time(&self) -> Duration {
        self.history.iter().map(|h| h.wall_time).sum()
    }

    pub fn total_candidates(&self) -> u64 {
        self.history.iter().map(|h| h.candidates).sum()
    }
}

/// Among index tuples tied on distance, the one whose reduced word is
/// shortest, then lexicographically smallest.
fn pick(
    table: &PseudoGroupTable,
    prefix: &BraidWord,
    tuples: impl IntoIterator<Item = Vec<usize>>,
) -> (BraidWord, Vec<usize>) {
    tuples
        .into_iter()
        .map(|ix| {
            let (w, _) = pseudo_product(table, &ix).expect("indices < 60");
            let w = concat_reduce(prefix, &w);
            (w.length(), w.to_string(), w, ix)
        })
        .min_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)))
        .map(|(_, _, w, ix)| (w, ix))
        .expect("at least one candidate")
}

fn raw_length(table: &PseudoGroupTable, ix: &[usize]) -> usize {
    ix.iter().map(|&i| table.entries()[i].word.length()).sum()
}

/// Best product of `m` coarse entries.
pub fn preprocess(target: &Unitary2, table: &PseudoGroupTable, m: usize) -> Result<Approximation> {
    if m == 0 || m > MAX_FACTORS {
        return Err(Error::InvalidInput(format!("m must be in 1..={MAX_FACTORS}")));
    }
    let t = target.to_quaternion();

    fn walk(
        table: &PseudoGroupTable,
        t: &Quaternion,
        m: usize,
        prefix: Quaternion,
        ix: &mut Vec<usize>,
        band: &mut Band<Vec<usize>>,
    ) {
        if ix.len() == m {
            band.offer(prefix.distance(t), || ix.clone());
            return;
        }
        for i in 0..ORDER {
            ix.push(i);
            walk(table, t, m, prefix * table.quaternion(i), ix, band);
            ix.pop();
        }
    }

    let band = (0..ORDER)
        .into_par_iter()
        .map(|lead| {
            let mut band = Band::new();
            let mut ix = vec![lead];
            walk(table, &t, m, table.quaternion(lead), &mut ix, &mut band);
            band
        })
        .reduce(Band::new, Band::merge);
    let (word, ix) = pick(
        table,
        &BraidWord::empty(),
        band.items.into_iter().map(|(_, ix)| ix),
    );
    let matrix = word.evaluate();
    Ok(Approximation {
        dist: distance_unchecked(&matrix, target),
        raw_length: raw_length(table, &ix),
        word,
        matrix,
        stage: Stage::Preprocessed,
    })
}

/// Best right correction of `current` by a fine rotation built from `table`
/// with `n` free factors. Never returns a worse approximation.
pub fn refine(
    target: &Unitary2,
    current: &Approximation,
    table: &PseudoGroupTable,
    group: &IcosaGroup,
    n: usize,
    pass: usize,
) -> Result<Approximation> {
    if n == 0 || n > MAX_FACTORS {
        return Err(Error::InvalidInput(format!("n must be in 1..={MAX_FACTORS}")));
    }
    // current·c ≈ T  ⇔  c ≈ current⁻¹·T
    let residual = current.matrix.to_quaternion().conj() * target.to_quaternion();
    let band = (0..ORDER)
        .into_par_iter()
        .map(|lead| {
            let mut band = Band::new();
            visit_fine_quaternions(table, group, n, lead, |ix, q| {
                band.offer(q.distance(&residual), || ix.to_vec());
            });
            band
        })
        .reduce(Band::new, Band::merge);
    let (word, ix) = pick(table, &current.word, band.items.into_iter().map(|(_, ix)| ix));
    let matrix = word.evaluate();
    let dist = distance_unchecked(&matrix, target);
    if dist > current.dist {
        return Ok(Approximation {
            stage: Stage::Refined(pass),
            ..current.clone()
        });
    }
    Ok(Approximation {
        raw_length: current.raw_length + raw_length(table, &ix),
        word,
        matrix,
        dist,
        stage: Stage::Refined(pass),
    })
}

/// A configured pipeline: the coarse table and one fine table per pass.
pub struct Compiler<'a> {
    group: &'a IcosaGroup,
    params: HashParams,
    coarse: &'a PseudoGroupTable,
    levels: Vec<&'a PseudoGroupTable>,
}

impl<'a> Compiler<'a> {
    /// `levels[k]` is the table used by refinement pass `k + 1`; at least
    /// `params.iterations` are required.
    pub fn new(
        group: &'a IcosaGroup,
        params: HashParams,
        coarse: &'a PseudoGroupTable,
        levels: &[&'a PseudoGroupTable],
    ) -> Result<Self> {
        params.validate()?;
        if coarse.nominal_length() != params.coarse_length {
            return Err(Error::Config(format!(
                "coarse table has N={} but l={}; build the N={} table",
                coarse.nominal_length(),
                params.coarse_length,
                params.coarse_length
            )));
        }
        match levels.first() {
            None => {
                return Err(Error::Config(format!(
                    "missing refinement table for N={}; build it first",
                    params.fine_length
                )))
            }
            Some(t) if t.nominal_length() != params.fine_length => {
                return Err(Error::Config(format!(
                    "first refinement table has N={} but L={}",
                    t.nominal_length(),
                    params.fine_length
                )))
            }
            _ => {}
        }
        if levels.len() < params.iterations {
            let missing: Vec<String> = (levels.len() + 1..=params.iterations)
                .map(|k| format!("level {k}"))
                .collect();
            return Err(Error::Config(format!(
                "q={} needs {} refinement tables; missing {} (bootstrap them level by level)",
                params.iterations,
                params.iterations,
                missing.join(", ")
            )));
        }
        let hash = group.hash_hex();
        for t in std::iter::once(&coarse).chain(levels.iter()) {
            if t.group_hash() != hash {
                return Err(Error::Config(format!(
                    "table N={} was built for group {} (expected {hash})",
                    t.nominal_length(),
                    t.group_hash()
                )));
            }
        }
        Ok(Compiler {
            group,
            params,
            coarse,
            levels: levels[..params.iterations].to_vec(),
        })
    }

    pub fn params(&self) -> &HashParams {
        &self.params
    }

    pub fn group(&self) -> &IcosaGroup {
        self.group
    }

    /// Table used by refinement pass `k` (starting at 1).
    pub fn level(&self, k: usize) -> Option<&PseudoGroupTable> {
        k.checked_sub(1).and_then(|i| self.levels.get(i)).copied()
    }

    pub fn nominal_length(&self) -> usize {
        self.params.coarse_factors * self.params.coarse_length
            + self
                .levels
                .iter()
                .map(|t| (self.params.fine_factors + 1) * t.nominal_length())
                .sum::<usize>()
    }

    pub fn preprocess(&self, target: &Unitary2) -> Approximation {
        preprocess(target, self.coarse, self.params.coarse_factors).expect("validated params")
    }

    pub fn compile(&self, target: &Unitary2) -> CompileResult {
        self.compile_passes(target, self.params.iterations)
    }

    /// [`Compiler::compile`] stopping after `passes` refinements.
    pub fn compile_passes(&self, target: &Unitary2, passes: usize) -> CompileResult {
        let start = Instant::now();
        let mut current = self.preprocess(target);
        let mut history = vec![StageRecord {
            stage: Stage::Preprocessed,
            dist: current.dist,
            length: current.word.length(),
            wall_time: start.elapsed(),
            candidates: self.params.coarse_candidates(),
            improved: true,
        }];
        for (k, table) in self.levels.iter().take(passes).enumerate() {
            let start = Instant::now();
            let next = refine(
                target,
                &current,
                table,
                self.group,
                self.params.fine_factors,
                k + 1,
            )
            .expect("validated params");
            history.push(StageRecord {
                stage: next.stage,
                dist: next.dist,
                length: next.word.length(),
                wall_time: start.elapsed(),
                candidates: self.params.fine_candidates(),
                improved: next.dist < current.dist,
            });
            current = next;
        }
        let nominal_length = self.params.coarse_factors * self.params.coarse_length
            + self
                .levels
                .iter()
                .take(passes)
                .map(|t| (self.params.fine_factors + 1) * t.nominal_length())
                .sum::<usize>();
        CompileResult {
            approximation: current,
            history,
            nominal_length,
        }
    }

    /// A finer table made by compiling every group element with this
    /// pipeline. Each entry keeps whichever of the compiled word and the
    /// last level's word is closer; `N` is the longest resulting word.
    pub fn bootstrap_table(&self) -> Result<PseudoGroupTable> {
        let source = *self.levels.last().expect("at least one level");
        let words: Vec<BraidWord> = (0..ORDER)
            .into_par_iter()
            .map(|i| {
                let existing = &source.entries()[i];
                if i == 0 {
                    return BraidWord::empty();
                }
                let target = *self.group.element_su2(i).expect("index < 60").as_unitary();
                let r = self.compile(&target);
                if r.approximation.dist < existing.dist {
                    r.approximation.word
                } else {
                    existing.word.clone()
                }
            })
            .collect();
        let n = words.iter().map(BraidWord::length).max().unwrap_or(0);
        PseudoGroupTable::from_words(self.group, n, words)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{build_table, TableMethod, WordFamily};
    use crate::su2::{haar_random, seeded_rng};
    use std::sync::OnceLock;

    fn fixture() -> &'static (IcosaGroup, PseudoGroupTable, PseudoGroupTable) {
        static F: OnceLock<(IcosaGroup, PseudoGroupTable, PseudoGroupTable)> = OnceLock::new();
        F.get_or_init(|| {
            let g = IcosaGroup::build();
            let t6 = build_table(&g, 6, TableMethod::Exhaustive, WordFamily::All).unwrap();
            let t10 = build_table(&g, 10, TableMethod::Exhaustive, WordFamily::All).unwrap();
            (g, t6, t10)
        })
    }

    fn params() -> HashParams {
        HashParams {
            coarse_length: 6,
            coarse_factors: 2,
            fine_length: 10,
            fine_factors: 2,
            iterations: 1,
        }
    }

    #[test]
    fn reduction_formula() {
        assert!((predicted_reduction(3) - 30.0).abs() < 1e-12);
        assert!((predicted_reduction(4) - 105.05).abs() < 5e-3);
        assert!((predicted_reduction(1) - 2.77).abs() < 5e-3);
    }

    #[test]
    fn params_validation() {
        assert!(HashParams::default().validate().is_ok());
        let mut p = HashParams::default();
        p.iterations = 0;
        assert!(matches!(p.validate(), Err(Error::InvalidInput(_))));
        p = HashParams::default();
        p.fine_factors = 5;
        assert!(matches!(p.validate(), Err(Error::ResourceLimit { .. })));
        assert_eq!(HashParams::default().fine_candidates(), 216_000);
    }

    #[test]
    fn single_factor_preprocess_finds_the_element() {
        let (g, t6, _) = fixture();
        for k in [0, 7, 33, 59] {
            let target = *g.element_su2(k).unwrap().as_unitary();
            let a = preprocess(&target, t6, 1).unwrap();
            assert_eq!(a.word, t6.entries()[k].word);
            assert!((a.dist - t6.entries()[k].dist).abs() < 1e-12);
        }
    }

    #[test]
    fn refine_never_worsens_and_stays_coherent() {
        let (g, t6, t10) = fixture();
        let mut rng = seeded_rng(5);
        for _ in 0..5 {
            let target = *haar_random(&mut rng).as_unitary();
            let a = preprocess(&target, t6, 2).unwrap();
            let b = refine(&target, &a, t10, g, 2, 1).unwrap();
            assert!(b.dist <= a.dist);
            assert!(b.matrix.max_abs_diff(&b.word.evaluate()) < 1e-12);
            assert_eq!(b.dist, distance_unchecked(&b.word.evaluate(), &target));
            assert!(b.raw_length <= a.raw_length + 3 * 10);
        }
        // an exact target is left alone
        let a = preprocess(&target_of(&mut rng), t6, 2).unwrap();
        let exact = Approximation { dist: 0.0, ..a.clone() };
        let b = refine(&a.matrix, &exact, t10, g, 2, 1).unwrap();
        assert_eq!(b.dist, 0.0);
        assert_eq!(b.word, a.word);
    }

    fn target_of(rng: &mut crate::su2::Prng) -> Unitary2 {
        *haar_random(rng).as_unitary()
    }

    #[test]
    fn compile_history_and_lengths() {
        let (g, t6, t10) = fixture();
        let c = Compiler::new(g, params(), t6, &[t10]).unwrap();
        assert_eq!(c.nominal_length(), 2 * 6 + 3 * 10);
        let mut rng = seeded_rng(8);
        for _ in 0..5 {
            let target = *haar_random(&mut rng).as_unitary();
            let r = c.compile(&target);
            assert_eq!(r.history.len(), 2);
            assert!(r.history[1].dist <= r.history[0].dist);
            assert_eq!(r.history[0].candidates, 3600);
            assert_eq!(r.total_candidates(), 3600 + 3600);
            assert!(r.reduced_length() <= r.raw_length());
            assert!(r.raw_length() <= r.nominal_length);
            let again = c.compile(&target);
            assert_eq!(again.approximation, r.approximation);
        }
    }

    #[test]
    fn compiler_reports_missing_tables() {
        let (g, t6, t10) = fixture();
        let mut p = params();
        p.iterations = 2;
        let err = Compiler::new(g, p, t6, &[t10]).err().unwrap();
        assert!(matches!(err, Error::Config(ref m) if m.contains("level 2")), "{err}");
        assert!(matches!(Compiler::new(g, params(), t6, &[]), Err(Error::Config(_))));
        assert!(matches!(Compiler::new(g, params(), t10, &[t10]), Err(Error::Config(_))));
    }

    #[test]
    fn bootstrap_improves_the_table() {
        let (g, t6, t10) = fixture();
        let c = Compiler::new(g, params(), t6, &[t10]).unwrap();
        let t2 = c.bootstrap_table().unwrap();
        assert!(t2.entries()[0].word.is_empty());
        for (a, b) in t2.entries().iter().zip(t10.entries()) {
            assert!(a.dist <= b.dist);
        }
        assert!(t2.mean_error() < t10.mean_error());
        assert_eq!(t2.nominal_length(), t2.max_word_length());
        let back = PseudoGroupTable::from_text(&t2.to_text(), g).unwrap();
        assert_eq!(back, t2);
        let p2 = HashParams { iterations: 2, ..params() };
        let c2 = Compiler::new(g, p2, t6, &[t10, &t2]).unwrap();
        let mut rng = seeded_rng(2);
        let target = *haar_random(&mut rng).as_unitary();
        let r = c2.compile(&target);
        assert_eq!(r.history.len(), 3);
        assert!(r.history[2].dist <= r.history[1].dist);
    }
}
