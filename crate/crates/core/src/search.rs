//! Best braid approximations of a target gate.
//!
//! Two engines search the same set (all canonical words of length ≤ L):
//!
//! * [`brute_force_best`] walks every word depth first, carrying the prefix
//!   product.
//! * [`mitm_best`] splits each word into two halves of length ≤ ⌈L/2⌉ and
//!   ≤ ⌊L/2⌋. Half-words are grouped by the gate they evaluate to (braid
//!   relations make most of them coincide) and indexed on a 4D grid over the
//!   unit quaternions, so a target is found by probing the cells around
//!   `h⁻¹·T` for each left half `h`.
//!
//! Both engines rank candidates the same way: distances within
//! [`TIE_BAND`] of the minimum count as tied, and ties go to the shorter word,
//! then the lexicographically smaller text form. The reported distance is
//! always recomputed from the returned word.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::braid::{block_quaternion, concat_reduce, fold_exponent, BraidWord, Generator};
use crate::error::{Error, Result};
use crate::icosa::{IcosaGroup, ORDER};
use crate::pseudo::PseudoGroupTable;
use crate::su2::{distance_unchecked, Quaternion, Unitary2};

/// Longest length accepted by the exhaustive engine over all exponents.
/// Smaller families are limited to the same word count.
pub const MAX_EXHAUSTIVE_LENGTH: usize = 16;
/// Longest length accepted by the meet-in-the-middle engine over all
/// exponents; other families are limited by [`MITM_WORD_LIMIT`] alone.
pub const MAX_MITM_LENGTH: usize = 26;
/// Half-table size limit (words).
pub const MITM_WORD_LIMIT: u64 = 4_000_000;
/// Distances closer than this are treated as equal when ranking.
pub const TIE_BAND: f64 = 1e-10;
/// Decay length used to scale the default search radius.
pub const DECAY_LENGTH: f64 = 7.3;

/// Which block exponents a search may use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum WordFamily {
    /// Every canonical exponent.
    #[default]
    All,
    /// Even exponents only: one anyon winds around a fixed pair.
    Weave,
}

impl WordFamily {
    /// Exponent choices in increasing cost; `5` stands for `±5`.
    pub fn exponents(self) -> &'static [i32] {
        match self {
            WordFamily::All => &[1, -1, 2, -2, 3, -3, 4, -4, 5],
            WordFamily::Weave => &[2, -2, 4, -4],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WordFamily::All => "all",
            WordFamily::Weave => "weave",
        }
    }

    pub fn contains(self, word: &BraidWord) -> bool {
        word.blocks()
            .iter()
            .all(|b| self.exponents().contains(&b.exponent))
    }

    /// Number of words of length exactly `len`.
    pub fn count_exact(self, len: usize) -> u64 {
        // g[L]: block sequences of total cost L after a fixed first generator
        let mut g = vec![0u64; len + 1];
        g[0] = 1;
        for l in 1..=len {
            g[l] = self
                .exponents()
                .iter()
                .map(|k| k.unsigned_abs() as usize)
                .filter(|&c| c <= l)
                .map(|c| g[l - c])
                .sum();
        }
        if len == 0 {
            1
        } else {
            2 * g[len]
        }
    }

    /// Number of words of length `0..=len`, including the empty word.
    pub fn count_upto(self, len: usize) -> u64 {
        (0..=len).map(|l| self.count_exact(l)).sum()
    }
}

impl std::fmt::Display for WordFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for WordFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(WordFamily::All),
            "weave" => Ok(WordFamily::Weave),
            _ => Err(Error::InvalidInput(format!(
                "unknown word family '{s}' (expected all or weave)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub word: BraidWord,
    pub dist: f64,
    pub nodes_visited: u64,
    pub wall_time: Duration,
}

/// Number of canonical words of length exactly `len`.
pub fn word_count_exact(len: usize) -> u64 {
    WordFamily::All.count_exact(len)
}

/// Number of canonical words of length `0..=len` (including the empty word).
pub fn word_count_upto(len: usize) -> u64 {
    WordFamily::All.count_upto(len)
}

/// Streams every canonical word of length `1..=lmax` once, depth first.
pub fn enumerate_words(lmax: usize) -> WordEnumerator {
    enumerate_family(lmax, WordFamily::All)
}

/// [`enumerate_words`] restricted to a word family.
pub fn enumerate_family(lmax: usize, family: WordFamily) -> WordEnumerator {
    let exps = family.exponents();
    WordEnumerator {
        exps,
        lmax,
        stack: Vec::new(),
        len: 0,
        started: false,
        done: lmax < exps[0].unsigned_abs() as usize,
    }
}

pub struct WordEnumerator {
    exps: &'static [i32],
    lmax: usize,
    stack: Vec<(Generator, usize)>,
    len: usize,
    started: bool,
    done: bool,
}

fn cost(k: i32) -> usize {
    k.unsigned_abs() as usize
}

impl WordEnumerator {
    fn cost(&self, choice: usize) -> usize {
        cost(self.exps[choice])
    }

    fn current(&self) -> BraidWord {
        BraidWord::from_blocks(
            self.stack
                .iter()
                .map(|&(g, c)| (g, self.exps[c] as i64)),
        )
    }
}

impl Iterator for WordEnumerator {
    type Item = BraidWord;

    fn next(&mut self) -> Option<BraidWord> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.stack.push((Generator::S1, 0));
            self.len = self.cost(0);
            return Some(self.current());
        }
        // descend
        if self.len + self.cost(0) <= self.lmax {
            let g = self.stack.last().expect("non-empty").0.other();
            self.stack.push((g, 0));
            self.len += self.cost(0);
            return Some(self.current());
        }
        // advance to the next sibling, backtracking as needed
        while let Some((g, c)) = self.stack.pop() {
            self.len -= self.cost(c);
            let next = c + 1;
            if next < self.exps.len() && self.len + self.cost(next) <= self.lmax {
                self.stack.push((g, next));
                self.len += self.cost(next);
                return Some(self.current());
            }
            if self.stack.is_empty() && g == Generator::S1 {
                self.stack.push((Generator::S2, 0));
                self.len = self.cost(0);
                return Some(self.current());
            }
        }
        self.done = true;
        None
    }
}

/// Keeps the candidates within [`TIE_BAND`] of the best distance seen.
#[derive(Clone, Debug)]
pub(crate) struct Band<T> {
    pub(crate) best: f64,
    pub(crate) items: Vec<(f64, T)>,
}

impl<T> Band<T> {
    pub(crate) fn new() -> Self {
        Band {
            best: f64::INFINITY,
            items: Vec::new(),
        }
    }

    #[inline]
    pub(crate) fn offer(&mut self, d: f64, item: impl FnOnce() -> T) {
        if d <= self.best + TIE_BAND {
            if d < self.best {
                self.best = d;
                let limit = d + TIE_BAND;
                self.items.retain(|(e, _)| *e <= limit);
            }
            self.items.push((d, item()));
        }
    }

    pub(crate) fn merge(mut self, other: Band<T>) -> Band<T> {
        for (d, t) in other.items {
            self.offer(d, || t);
        }
        self
    }
}

/// Picks the final word among near-tied candidates by length, then text,
/// and recomputes its distance.
fn resolve(candidates: impl IntoIterator<Item = BraidWord>, target: &Unitary2) -> (BraidWord, f64) {
    let mut shortest: Vec<BraidWord> = Vec::new();
    for w in candidates {
        match shortest.first().map(BraidWord::length) {
            Some(l) if w.length() > l => {}
            Some(l) if w.length() == l => shortest.push(w),
            _ => shortest = vec![w],
        }
    }
    let word = shortest
        .into_iter()
        .map(|w| (w.to_string(), w))
        .min_by(|a, b| a.0.cmp(&b.0))
        .map(|(_, w)| w)
        .expect("at least one candidate");
    let dist = distance_unchecked(&word.evaluate(), target);
    (word, dist)
}

/// Length of `concat_reduce(a, b)` without building it.
fn joined_length(a: &BraidWord, b: &BraidWord) -> usize {
    let (ab, bb) = (a.blocks(), b.blocks());
    let mut len = a.length() + b.length();
    let (mut i, mut j) = (ab.len(), 0);
    while i > 0 && j < bb.len() && ab[i - 1].generator == bb[j].generator {
        let (x, y) = (ab[i - 1].exponent, bb[j].exponent);
        len -= (x.unsigned_abs() + y.unsigned_abs()) as usize;
        let k = fold_exponent((x + y) as i64);
        if k != 0 {
            len += k.unsigned_abs() as usize;
            break;
        }
        i -= 1;
        j += 1;
    }
    len
}

/// Depth-first walk over words extending `stack`, calling `visit` on each
/// (including the starting word).
fn walk<F: FnMut(&[(Generator, i32)], usize, &Quaternion)>(
    exps: &[i32],
    stack: &mut Vec<(Generator, i32)>,
    len: usize,
    lmax: usize,
    prefix: Quaternion,
    visit: &mut F,
) {
    visit(stack, len, &prefix);
    let next_gen = match stack.last() {
        Some(&(g, _)) => g.other(),
        None => unreachable!("walks start from a one-block prefix"),
    };
    for &k in exps {
        let l = len + cost(k);
        if l > lmax {
            break;
        }
        stack.push((next_gen, k));
        walk(exps, stack, l, lmax, prefix * block_quaternion(next_gen, k), visit);
        stack.pop();
    }
}

/// Walks every word of the family with length `1..=lmax` below `root`.
fn walk_root<F: FnMut(&[(Generator, i32)], usize, &Quaternion)>(
    family: WordFamily,
    root: (Generator, i32),
    lmax: usize,
    visit: &mut F,
) {
    let (g, k) = root;
    let mut stack = vec![root];
    walk(
        family.exponents(),
        &mut stack,
        cost(k),
        lmax,
        block_quaternion(g, k),
        visit,
    );
}

/// The one-block roots of the word tree.
fn roots(lmax: usize, family: WordFamily) -> Vec<(Generator, i32)> {
    [Generator::S1, Generator::S2]
        .into_iter()
        .flat_map(|g| family.exponents().iter().map(move |&k| (g, k)))
        .filter(|&(_, k)| cost(k) <= lmax)
        .collect()
}

fn stack_word(stack: &[(Generator, i32)]) -> BraidWord {
    BraidWord::from_blocks(stack.iter().map(|&(g, k)| (g, k as i64)))
}

fn check_exhaustive(lmax: usize, family: WordFamily) -> Result<()> {
    let count = family.count_upto(lmax);
    if count > WordFamily::All.count_upto(MAX_EXHAUSTIVE_LENGTH) {
        return Err(Error::Refused(format!(
            "exhaustive search over {count} words (length {lmax}) exceeds the limit of \
             length {MAX_EXHAUSTIVE_LENGTH} over all exponents; use the meet-in-the-middle engine"
        )));
    }
    Ok(())
}

/// Exhaustive search over all canonical words of length ≤ `lmax`.
pub fn brute_force_best(target: &Unitary2, lmax: usize) -> Result<SearchResult> {
    Ok(brute_force_many(std::slice::from_ref(target), lmax)?
        .pop()
        .expect("one target"))
}

/// [`brute_force_best`] for several targets in a single walk.
pub fn brute_force_many(targets: &[Unitary2], lmax: usize) -> Result<Vec<SearchResult>> {
    brute_force_family(targets, lmax, WordFamily::All)
}

/// [`brute_force_many`] over one word family.
pub fn brute_force_family(
    targets: &[Unitary2],
    lmax: usize,
    family: WordFamily,
) -> Result<Vec<SearchResult>> {
    check_exhaustive(lmax, family)?;
    let start = Instant::now();
    let tq: Vec<Quaternion> = targets.iter().map(Unitary2::to_quaternion).collect();

    let per_root: Vec<(Vec<Band<BraidWord>>, u64)> = roots(lmax, family)
        .into_par_iter()
        .map(|root| {
            let mut bands: Vec<Band<BraidWord>> = tq.iter().map(|_| Band::new()).collect();
            let mut nodes = 0u64;
            walk_root(family, root, lmax, &mut |s, _, q| {
                nodes += 1;
                for (band, t) in bands.iter_mut().zip(&tq) {
                    band.offer(q.distance(t), || stack_word(s));
                }
            });
            (bands, nodes)
        })
        .collect();

    let mut nodes = 1u64; // the empty word
    let mut bands: Vec<Band<BraidWord>> = tq
        .iter()
        .map(|t| {
            let mut b = Band::new();
            b.offer(Quaternion::IDENTITY.distance(t), BraidWord::empty);
            b
        })
        .collect();
    for (root_bands, n) in per_root {
        nodes += n;
        bands = bands
            .into_iter()
            .zip(root_bands)
            .map(|(a, b)| a.merge(b))
            .collect();
    }
    let wall_time = start.elapsed();
    Ok(bands
        .into_iter()
        .zip(targets)
        .map(|(band, target)| {
            let (word, dist) = resolve(band.items.into_iter().map(|(_, w)| w), target);
            SearchResult {
                word,
                dist,
                nodes_visited: nodes,
                wall_time,
            }
        })
        .collect())
}

/// Best distance to each target among words of length ≤ L, for every
/// `L in 0..=lmax` (`profile[t][L]`).
pub fn best_distance_profile(
    targets: &[Unitary2],
    lmax: usize,
    family: WordFamily,
) -> Result<Vec<Vec<f64>>> {
    check_exhaustive(lmax, family)?;
    let tq: Vec<Quaternion> = targets.iter().map(Unitary2::to_quaternion).collect();
    let exact: Vec<Vec<f64>> = roots(lmax, family)
        .into_par_iter()
        .map(|root| {
            // best |dot| per (target, exact length)
            let mut best = vec![0.0f64; tq.len() * (lmax + 1)];
            walk_root(family, root, lmax, &mut |_, len, q| {
                for (t, tqt) in tq.iter().enumerate() {
                    let d = q.dot(tqt).abs();
                    let slot = &mut best[t * (lmax + 1) + len];
                    if d > *slot {
                        *slot = d;
                    }
                }
            });
            best
        })
        .collect();

    Ok(tq
        .iter()
        .enumerate()
        .map(|(t, tqt)| {
            let mut dot = Quaternion::IDENTITY.dot(tqt).abs();
            (0..=lmax)
                .map(|len| {
                    for part in &exact {
                        dot = dot.max(part[t * (lmax + 1) + len]);
                    }
                    (2.0 - 2.0 * dot.min(1.0)).max(0.0).sqrt()
                })
                .collect()
        })
        .collect())
}

/// Words packed as: first-generator bit, block count (5 bits), then one
/// 4-bit `exponent + 4` per block.
type PackedWord = u128;

fn pack(stack: &[(Generator, i32)]) -> PackedWord {
    let mut p: u128 = match stack.first() {
        Some((Generator::S2, _)) => 1,
        _ => 0,
    };
    p |= (stack.len() as u128) << 1;
    for (i, &(_, k)) in stack.iter().enumerate() {
        p |= ((k + 4) as u128) << (6 + 4 * i);
    }
    p
}

fn unpack(p: PackedWord) -> BraidWord {
    let mut g = if p & 1 == 1 { Generator::S2 } else { Generator::S1 };
    let n = ((p >> 1) & 0x1f) as usize;
    let mut w = BraidWord::empty();
    for i in 0..n {
        let k = ((p >> (6 + 4 * i)) & 0xf) as i64 - 4;
        w.push(g, k);
        g = g.other();
    }
    w
}

#[derive(Clone, Copy, Debug)]
struct HalfClass {
    quat: Quaternion,
    start: u32,
    end: u32,
    min_len: u8,
}

/// All words of a family with length ≤ `depth`, grouped by the gate they
/// evaluate to and bucketed on a 4D grid.
pub struct HalfTable {
    depth: usize,
    family: WordFamily,
    cell: f64,
    members: Vec<(u8, PackedWord)>,
    classes: Vec<HalfClass>,
    grid: FxHashMap<u64, Vec<u32>>,
}

fn cell_coord(v: f64, cell: f64) -> i32 {
    (v / cell).floor() as i32
}

fn cell_key(c: [i32; 4]) -> u64 {
    c.iter()
        .fold(0u64, |acc, &x| (acc << 16) | (x as i16 as u16 as u64))
}

impl HalfTable {
    /// Enumerates and indexes the half words. `cell` is the grid spacing in
    /// quaternion (= distance) units.
    pub fn build(depth: usize, cell: f64) -> Result<HalfTable> {
        HalfTable::build_family(depth, cell, WordFamily::All)
    }

    pub fn build_family(depth: usize, cell: f64, family: WordFamily) -> Result<HalfTable> {
        let count = family.count_upto(depth);
        if count > MITM_WORD_LIMIT {
            return Err(Error::ResourceLimit {
                what: format!("half table of depth {depth}"),
                attempted: count,
                limit: MITM_WORD_LIMIT,
            });
        }
        if !(cell > 1e-4) {
            return Err(Error::InvalidInput(format!("grid cell {cell} too small")));
        }
        let mut raw: Vec<([i64; 4], u8, PackedWord, Quaternion)> = roots(depth, family)
            .into_par_iter()
            .map(|root| {
                let mut out = Vec::new();
                walk_root(family, root, depth, &mut |s, len, q| {
                    let q = if q.w < 0.0 { q.neg() } else { *q };
                    out.push((quantize(&q), len as u8, pack(s), q));
                });
                out
            })
            .flatten()
            .collect();
        raw.push((quantize(&Quaternion::IDENTITY), 0, pack(&[]), Quaternion::IDENTITY));
        raw.par_sort_unstable_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));

        let mut members = Vec::with_capacity(raw.len());
        let mut classes: Vec<HalfClass> = Vec::new();
        let mut i = 0;
        while i < raw.len() {
            let mut j = i;
            while j < raw.len() && raw[j].0 == raw[i].0 {
                members.push((raw[j].1, raw[j].2));
                j += 1;
            }
            classes.push(HalfClass {
                quat: raw[i].3,
                start: i as u32,
                end: j as u32,
                min_len: raw[i].1,
            });
            i = j;
        }

        let mut grid: FxHashMap<u64, Vec<u32>> = FxHashMap::default();
        for (k, c) in classes.iter().enumerate() {
            let q = c.quat.components();
            let key = cell_key(q.map(|v| cell_coord(v, cell)));
            grid.entry(key).or_default().push(k as u32);
        }
        Ok(HalfTable {
            depth,
            family,
            cell,
            members,
            classes,
            grid,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn family(&self) -> WordFamily {
        self.family
    }

    pub fn word_count(&self) -> usize {
        self.members.len()
    }

    /// Number of distinct gates among the half words.
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Calls `f(class)` for every class within `radius` of `u` (up to sign),
    /// possibly with extra classes from the probed cells.
    fn probe<F: FnMut(u32)>(&self, u: &Quaternion, radius: f64, f: &mut F) {
        let mut probe_one = |q: [f64; 4]| {
            let lo = q.map(|v| cell_coord(v - radius, self.cell));
            let hi = q.map(|v| cell_coord(v + radius, self.cell));
            for a in lo[0]..=hi[0] {
                for b in lo[1]..=hi[1] {
                    for c in lo[2]..=hi[2] {
                        for d in lo[3]..=hi[3] {
                            if let Some(v) = self.grid.get(&cell_key([a, b, c, d])) {
                                for &k in v {
                                    f(k);
                                }
                            }
                        }
                    }
                }
            }
        };
        let q = u.components();
        if q[0] >= -radius {
            probe_one(q);
        }
        if q[0] <= radius {
            probe_one(u.neg().components());
        }
    }
}

fn quantize(q: &Quaternion) -> [i64; 4] {
    q.components().map(|v| (v * 1e9).round() as i64)
}

/// Initial radius for the meet-in-the-middle search at length `l`.
pub fn default_radius(l: usize) -> f64 {
    (-(l as f64) / DECAY_LENGTH).exp()
}

/// Half-table depth needed to reach length `l`. Weave words only split at
/// even positions, so their depth is rounded up to even.
pub fn mitm_depth(l: usize, family: WordFamily) -> Result<usize> {
    let depth = match family {
        WordFamily::All => l.div_ceil(2),
        WordFamily::Weave => l.div_ceil(4) * 2,
    };
    let words = family.count_upto(depth);
    if words > MITM_WORD_LIMIT {
        return Err(Error::ResourceLimit {
            what: format!("meet-in-the-middle half table for length {l}"),
            attempted: words,
            limit: MITM_WORD_LIMIT,
        });
    }
    Ok(depth)
}

fn default_cell(radius: f64) -> f64 {
    radius.clamp(2e-3, 0.5)
}

/// Meet-in-the-middle search over words of length ≤ `l`, starting from
/// `radius` and doubling it until a candidate is found.
pub fn mitm_best(target: &Unitary2, l: usize, radius: f64) -> Result<SearchResult> {
    let depth = mitm_depth(l, WordFamily::All)?;
    let table = HalfTable::build(depth, default_cell(radius))?;
    mitm_best_with(&table, target, l, radius)
}

/// [`mitm_best`] against a prebuilt half table, searching the table's word
/// family. The table must be at least [`mitm_depth`] deep.
pub fn mitm_best_with(
    table: &HalfTable,
    target: &Unitary2,
    l: usize,
    radius: f64,
) -> Result<SearchResult> {
    let depth = mitm_depth(l, table.family)?;
    if table.depth < depth {
        return Err(Error::InvalidInput(format!(
            "half table depth {} is below {depth}",
            table.depth
        )));
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidInput("radius must be positive".into()));
    }
    let start = Instant::now();
    let t = target.to_quaternion();
    if Quaternion::IDENTITY.distance(&t) == 0.0 {
        return Ok(SearchResult {
            word: BraidWord::empty(),
            dist: 0.0,
            nodes_visited: 0,
            wall_time: start.elapsed(),
        });
    }

    let mut radius = radius;
    let mut visited = 0u64;
    let band = loop {
        let (band, n) = table
            .classes
            .par_iter()
            .enumerate()
            .filter(|(_, c)| (c.min_len as usize) <= l)
            .fold(
                || (Band::<(u32, u32)>::new(), 0u64),
                |(mut band, mut n), (i, left)| {
                    let u = left.quat.conj() * t;
                    table.probe(&u, radius, &mut |k| {
                        let right = &table.classes[k as usize];
                        if left.min_len as usize + right.min_len as usize > l {
                            return;
                        }
                        n += 1;
                        let d = u.distance(&right.quat);
                        if d <= radius {
                            band.offer(d, || (i as u32, k));
                        }
                    });
                    (band, n)
                },
            )
            .reduce(
                || (Band::new(), 0),
                |(a, na), (b, nb)| (a.merge(b), na + nb),
            );
        visited += n;
        if !band.items.is_empty() {
            break band;
        }
        radius *= 2.0;
    };

    // Expand tied class pairs. Only the shortest joins survive, so the
    // reduced length is computed at the junction before building any word.
    let mut best_len = usize::MAX;
    let mut shortest: Vec<(PackedWord, PackedWord)> = Vec::new();
    for &(_, (a, b)) in &band.items {
        let side = |c: u32| {
            let c = &table.classes[c as usize];
            table.members[c.start as usize..c.end as usize]
                .iter()
                .map(|&(len, p)| (len as usize, p, unpack(p)))
                .collect::<Vec<_>>()
        };
        let (lefts, rights) = (side(a), side(b));
        for (la, pa, wa) in &lefts {
            for (lb, pb, wb) in &rights {
                if la + lb > l {
                    continue;
                }
                let len = joined_length(wa, wb);
                if len < best_len {
                    best_len = len;
                    shortest.clear();
                }
                if len == best_len {
                    shortest.push((*pa, *pb));
                }
            }
        }
    }
    shortest.sort_unstable();
    shortest.dedup();
    let words = shortest
        .into_iter()
        .map(|(a, b)| concat_reduce(&unpack(a), &unpack(b)));
    let (word, dist) = resolve(words, target);
    Ok(SearchResult {
        word,
        dist,
        nodes_visited: visited,
        wall_time: start.elapsed(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableMethod {
    Exhaustive,
    Mitm,
}

/// Word family used for group tables unless stated otherwise. Weaves give
/// tables whose errors match the scale the hashing stages are tuned for.
pub const TABLE_FAMILY: WordFamily = WordFamily::Weave;

/// Best word of the family with length ≤ `n` for each of the 60 group
/// elements.
pub fn build_table(
    group: &IcosaGroup,
    n: usize,
    method: TableMethod,
    family: WordFamily,
) -> Result<PseudoGroupTable> {
    let targets: Vec<Unitary2> = (0..ORDER)
        .map(|i| *group.element_su2(i).expect("index < 60").as_unitary())
        .collect();
    let mut words: Vec<BraidWord> = match method {
        TableMethod::Exhaustive => brute_force_family(&targets[1..], n, family)?
            .into_iter()
            .map(|r| r.word)
            .collect(),
        TableMethod::Mitm => {
            let depth = mitm_depth(n, family)?;
            let radius = default_radius(n);
            let half = HalfTable::build_family(depth, default_cell(radius), family)?;
            targets[1..]
                .iter()
                .map(|t| mitm_best_with(&half, t, n, radius).map(|r| r.word))
                .collect::<Result<_>>()?
        }
    };
    words.insert(0, BraidWord::empty());
    PseudoGroupTable::from_words(group, n, words)
}
