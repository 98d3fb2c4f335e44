//! Braid approximations of the 60 group elements and what can be built from them.
//!
//! A [`PseudoGroupTable`] holds one braid word per group element. Products of
//! table entries only approximately follow the group law; the fine-rotation
//! set collects products `g̃_{i1} ⋯ g̃_{in} g̃_j` whose exact counterparts close
//! to the identity, which leaves small rotations near `1`.
//!
//! Table files are line-oriented text:
//!
//! ```text
//! ICOSA-TABLE v1 N=<int> metric=<id> group-hash=<hex>
//! <index> <dist, 9 significant digits> <braid word>      (60 lines)
//! ```
//!
//! Matrices are never stored; they are recomputed from the words on load.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::braid::{concat_reduce, BraidWord};
use crate::error::{Error, Result};
use crate::icosa::{IcosaGroup, ORDER};
use crate::su2::{distance_unchecked, Quaternion, Unitary2, METRIC_ID};

const MAGIC: &str = "ICOSA-TABLE";
const VERSION: &str = "v1";
const STORED_DIST_TOL: f64 = 1e-9;

/// Environment variable naming the default table directory.
pub const TABLE_DIR_ENV: &str = "BRAIDHASH_TABLES";

#[derive(Clone, Debug, PartialEq)]
pub struct TableEntry {
    pub index: usize,
    pub word: BraidWord,
    pub matrix: Unitary2,
    pub dist: f64,
}

#[derive(Clone, Debug)]
pub struct PseudoGroupTable {
    nominal_length: usize,
    metric_id: String,
    group_hash: String,
    entries: Vec<TableEntry>,
    quats: Vec<Quaternion>,
}

impl PartialEq for PseudoGroupTable {
    fn eq(&self, o: &Self) -> bool {
        self.nominal_length == o.nominal_length
            && self.metric_id == o.metric_id
            && self.group_hash == o.group_hash
            && self.entries == o.entries
    }
}

impl PseudoGroupTable {
    /// Builds a table from one word per element; distances are computed here.
    pub fn from_words(
        group: &IcosaGroup,
        nominal_length: usize,
        words: Vec<BraidWord>,
    ) -> Result<Self> {
        if words.len() != ORDER {
            return Err(Error::InvalidInput(format!(
                "expected {ORDER} words, got {}",
                words.len()
            )));
        }
        if !words[0].is_empty() {
            return Err(Error::InvalidInput(
                "entry 0 (identity) must be the empty word".into(),
            ));
        }
        let entries: Vec<TableEntry> = words
            .into_iter()
            .enumerate()
            .map(|(index, word)| {
                let matrix = word.evaluate();
                let exact = group.element_su2(index).expect("index < 60");
                let dist = distance_unchecked(&matrix, exact.as_unitary());
                TableEntry {
                    index,
                    word,
                    matrix,
                    dist,
                }
            })
            .collect();
        let quats = entries.iter().map(|e| e.matrix.to_quaternion()).collect();
        Ok(PseudoGroupTable {
            nominal_length,
            metric_id: METRIC_ID.to_string(),
            group_hash: group.hash_hex(),
            entries,
            quats,
        })
    }

    pub fn nominal_length(&self) -> usize {
        self.nominal_length
    }

    pub fn metric_id(&self) -> &str {
        &self.metric_id
    }

    pub fn group_hash(&self) -> &str {
        &self.group_hash
    }

    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> Result<&TableEntry> {
        self.entries.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            size: ORDER,
        })
    }

    pub(crate) fn quaternion(&self, i: usize) -> Quaternion {
        self.quats[i]
    }

    /// Mean distance over the 59 nontrivial entries.
    pub fn mean_error(&self) -> f64 {
        self.entries[1..].iter().map(|e| e.dist).sum::<f64>() / (ORDER - 1) as f64
    }

    pub fn max_error(&self) -> f64 {
        self.entries.iter().map(|e| e.dist).fold(0.0, f64::max)
    }

    /// Longest word in the table.
    pub fn max_word_length(&self) -> usize {
        self.entries.iter().map(|e| e.word.length()).max().unwrap_or(0)
    }

    /// Serialises to the table file format.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{MAGIC} {VERSION} N={} metric={} group-hash={}\n",
            self.nominal_length, self.metric_id, self.group_hash
        );
        for e in &self.entries {
            let _ = writeln!(s, "{} {:.8e} {}", e.index, e.dist, e.word);
        }
        s
    }

    /// Parses and verifies a table file against `group`.
    pub fn from_text(text: &str, group: &IcosaGroup) -> Result<Self> {
        let corrupt = |entry: Option<usize>, reason: String| Error::CorruptTable { entry, reason };
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| corrupt(None, "empty file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 || fields[0] != MAGIC {
            return Err(corrupt(None, format!("bad header {header:?}")));
        }
        if fields[1] != VERSION {
            return Err(corrupt(None, format!("unsupported version {}", fields[1])));
        }
        let field = |i: usize, key: &str| -> Result<&str> {
            fields[i]
                .strip_prefix(key)
                .ok_or_else(|| corrupt(None, format!("expected {key}… in header")))
        };
        let nominal_length: usize = field(2, "N=")?
            .parse()
            .map_err(|_| corrupt(None, "N is not an integer".into()))?;
        let metric = field(3, "metric=")?;
        if metric != METRIC_ID {
            return Err(corrupt(
                None,
                format!("metric {metric} does not match {METRIC_ID}"),
            ));
        }
        let hash = field(4, "group-hash=")?;
        if hash != group.hash_hex() {
            return Err(corrupt(
                None,
                format!("group hash {hash} does not match {}", group.hash_hex()),
            ));
        }

        let mut words = Vec::with_capacity(ORDER);
        let mut stored = Vec::with_capacity(ORDER);
        for (i, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
            if i >= ORDER {
                return Err(corrupt(None, format!("more than {ORDER} entries")));
            }
            let mut parts = line.trim().splitn(3, ' ');
            let index: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| corrupt(Some(i), "missing index".into()))?;
            if index != i {
                return Err(corrupt(Some(i), format!("index {index} out of sequence")));
            }
            let dist: f64 = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| corrupt(Some(i), "missing distance".into()))?;
            let word: BraidWord = parts
                .next()
                .ok_or_else(|| corrupt(Some(i), "missing braid word".into()))?
                .parse()
                .map_err(|e| corrupt(Some(i), format!("{e}")))?;
            words.push(word);
            stored.push(dist);
        }
        if words.len() != ORDER {
            return Err(corrupt(
                None,
                format!("expected {ORDER} entries, found {}", words.len()),
            ));
        }
        if !words[0].is_empty() {
            return Err(corrupt(Some(0), "identity entry is not the empty word".into()));
        }
        let table = PseudoGroupTable::from_words(group, nominal_length, words)?;
        for (e, s) in table.entries.iter().zip(stored) {
            if !((e.dist - s).abs() <= STORED_DIST_TOL + 5e-9 * s.abs()) {
                return Err(corrupt(
                    Some(e.index),
                    format!(
                        "stored distance {s:.8e} but word evaluates to {:.8e}",
                        e.dist
                    ),
                ));
            }
        }
        Ok(table)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &Path, group: &IcosaGroup) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text, group)
    }
}

/// Default file name for a brute-force table of nominal length `n`.
pub fn table_file_name(n: usize) -> String {
    format!("icosa-N{n}.tbl")
}

/// Default file name for the bootstrapped refinement table of level `level` (≥ 2).
pub fn level_file_name(level: usize) -> String {
    format!("icosa-level{level}.tbl")
}

/// Table directory: explicit flag, then [`TABLE_DIR_ENV`], then `./tables`.
pub fn resolve_table_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    match std::env::var_os(TABLE_DIR_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from("tables"),
    }
}

/// The unique `j` with `g_{i1} ⋯ g_{in} g_j = e`.
pub fn closing_index(group: &IcosaGroup, indices: &[usize]) -> Result<usize> {
    let mut acc = 0;
    for &i in indices {
        acc = group.compose(acc, i)?;
    }
    group.inverse_index(acc)
}

/// Reduced concatenation of the entry words and the product of their matrices.
pub fn pseudo_product(
    table: &PseudoGroupTable,
    indices: &[usize],
) -> Result<(BraidWord, Unitary2)> {
    let mut word = BraidWord::empty();
    let mut matrix = Unitary2::IDENTITY;
    for &i in indices {
        let e = table.entry(i)?;
        word = concat_reduce(&word, &e.word);
        matrix = matrix * e.matrix;
    }
    Ok((word, matrix))
}

/// One element of the fine-rotation set.
#[derive(Clone, Debug, PartialEq)]
pub struct FineRotationCandidate {
    pub indices: Vec<usize>,
    pub word: BraidWord,
    pub matrix: Unitary2,
}

/// Streams all `60ⁿ` fine rotations in lexicographic order of `(i1, …, in)`.
pub fn enumerate_fine_rotations<'a>(
    table: &'a PseudoGroupTable,
    group: &'a IcosaGroup,
    n: usize,
) -> Result<FineRotations<'a>> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    Ok(FineRotations::new(table, group, n))
}

/// Iterator returned by [`enumerate_fine_rotations`]. Prefix products are
/// cached so each step costs one product per changed position.
pub struct FineRotations<'a> {
    table: &'a PseudoGroupTable,
    group: &'a IcosaGroup,
    indices: Vec<usize>,
    prefix_word: Vec<BraidWord>,
    prefix_matrix: Vec<Unitary2>,
    prefix_element: Vec<usize>,
    dirty_from: usize,
    done: bool,
}

impl<'a> FineRotations<'a> {
    fn new(table: &'a PseudoGroupTable, group: &'a IcosaGroup, n: usize) -> Self {
        FineRotations {
            table,
            group,
            indices: vec![0; n],
            prefix_word: vec![BraidWord::empty(); n + 1],
            prefix_matrix: vec![Unitary2::IDENTITY; n + 1],
            prefix_element: vec![0; n + 1],
            dirty_from: 0,
            done: false,
        }
    }
}

impl Iterator for FineRotations<'_> {
    type Item = FineRotationCandidate;

    fn next(&mut self) -> Option<FineRotationCandidate> {
        if self.done {
            return None;
        }
        let n = self.indices.len();
        for k in self.dirty_from..n {
            let e = &self.table.entries[self.indices[k]];
            self.prefix_word[k + 1] = concat_reduce(&self.prefix_word[k], &e.word);
            self.prefix_matrix[k + 1] = self.prefix_matrix[k] * e.matrix;
            self.prefix_element[k + 1] = self
                .group
                .compose_unchecked(self.prefix_element[k], self.indices[k]);
        }
        let j = self.group.inverse_unchecked(self.prefix_element[n]);
        let closing = &self.table.entries[j];
        let mut indices = self.indices.clone();
        indices.push(j);
        let item = FineRotationCandidate {
            indices,
            word: concat_reduce(&self.prefix_word[n], &closing.word),
            matrix: self.prefix_matrix[n] * closing.matrix,
        };

        // advance the odometer
        let mut pos = n;
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.indices[pos] += 1;
            if self.indices[pos] < ORDER {
                self.dirty_from = pos;
                break;
            }
            self.indices[pos] = 0;
        }
        Some(item)
    }
}

/// Visits the fine rotations with leading index `leading`, passing the index
/// tuple (including the closing index) and the SU(2) quaternion of the product.
pub(crate) fn visit_fine_quaternions<F>(
    table: &PseudoGroupTable,
    group: &IcosaGroup,
    n: usize,
    leading: usize,
    mut f: F,
) where
    F: FnMut(&[usize], Quaternion),
{
    fn walk<F: FnMut(&[usize], Quaternion)>(
        table: &PseudoGroupTable,
        group: &IcosaGroup,
        n: usize,
        depth: usize,
        prefix: Quaternion,
        element: usize,
        indices: &mut [usize],
        f: &mut F,
    ) {
        if depth == n {
            let j = group.inverse_unchecked(element);
            indices[n] = j;
            f(indices, prefix * table.quaternion(j));
            return;
        }
        for i in 0..ORDER {
            indices[depth] = i;
            walk(
                table,
                group,
                n,
                depth + 1,
                prefix * table.quaternion(i),
                group.compose_unchecked(element, i),
                indices,
                f,
            );
        }
    }
    let mut indices = vec![0; n + 1];
    indices[0] = leading;
    walk(
        table,
        group,
        n,
        1,
        table.quaternion(leading),
        leading,
        &mut indices,
        &mut f,
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2::distance;

    /// Small synthetic table: each element approximated by a fixed short word
    /// (quality is irrelevant for the structural checks here).
    fn toy_table(group: &IcosaGroup) -> PseudoGroupTable {
        let words: Vec<BraidWord> = (0..ORDER)
            .map(|i| {
                if i == 0 {
                    BraidWord::empty()
                } else {
                    let a = (i % 9) as i64 - 4;
                    let b = (i / 9) as i64 + 1;
                    format!("s1^{} s2^{}", if a == 0 { 5 } else { a }, b)
                        .parse()
                        .unwrap()
                }
            })
            .collect();
        PseudoGroupTable::from_words(group, 2, words).unwrap()
    }

    #[test]
    fn text_round_trip_and_format() {
        let g = IcosaGroup::build();
        let t = toy_table(&g);
        let text = t.to_text();
        assert_eq!(text.lines().count(), 61);
        assert!(text.starts_with("ICOSA-TABLE v1 N=2 metric=opnorm-phasemin group-hash="));
        let back = PseudoGroupTable::from_text(&text, &g).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn tampered_word_is_reported() {
        let g = IcosaGroup::build();
        let text = toy_table(&g).to_text();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let parts: Vec<&str> = lines[8].splitn(3, ' ').collect();
        lines[8] = format!("{} {} s2^3 s1^1", parts[0], parts[1]);
        let bad = lines.join("\n");
        match PseudoGroupTable::from_text(&bad, &g) {
            Err(Error::CorruptTable { entry, .. }) => assert_eq!(entry, Some(7)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn header_checks() {
        let g = IcosaGroup::build();
        let text = toy_table(&g).to_text();
        for (from, to) in [
            (" v1 ", " v2 "),
            ("metric=opnorm-phasemin", "metric=trace"),
            ("group-hash=", "group-hash=00"),
        ] {
            let bad = text.replacen(from, to, 1);
            assert!(matches!(
                PseudoGroupTable::from_text(&bad, &g),
                Err(Error::CorruptTable { entry: None, .. })
            ));
        }
        let truncated: String = text.lines().take(30).collect::<Vec<_>>().join("\n");
        assert!(PseudoGroupTable::from_text(&truncated, &g).is_err());
    }

    #[test]
    fn save_and_load() {
        let g = IcosaGroup::build();
        let t = toy_table(&g);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join(table_file_name(2));
        t.save(&path).unwrap();
        assert_eq!(PseudoGroupTable::load(&path, &g).unwrap(), t);
    }

    #[test]
    fn closing_index_examples() {
        let g = IcosaGroup::build();
        for i in 0..60 {
            assert_eq!(closing_index(&g, &[i]).unwrap(), g.inverse_index(i).unwrap());
            assert_eq!(closing_index(&g, &[i, g.inverse_index(i).unwrap()]).unwrap(), 0);
        }
        let mut rng = crate::su2::seeded_rng(1);
        use rand::Rng;
        for _ in 0..10_000 {
            let t = [rng.gen_range(0..60), rng.gen_range(0..60), rng.gen_range(0..60)];
            let j = closing_index(&g, &t).unwrap();
            let p = g.compose(g.compose(g.compose(t[0], t[1]).unwrap(), t[2]).unwrap(), j);
            assert_eq!(p.unwrap(), 0);
        }
        assert!(closing_index(&g, &[3, 60]).is_err());
    }

    #[test]
    fn pseudo_product_examples() {
        let g = IcosaGroup::build();
        let t = toy_table(&g);
        let (w, m) = pseudo_product(&t, &[5]).unwrap();
        assert_eq!(w, t.entries()[5].word);
        assert_eq!(m, t.entries()[5].matrix);
        let (w, _) = pseudo_product(&t, &[0, 9]).unwrap();
        assert_eq!(w, t.entries()[9].word);
        let (w, m) = pseudo_product(&t, &[3, 17, 42]).unwrap();
        assert!(w.evaluate().max_abs_diff(&m) < 1e-12);
        assert!(pseudo_product(&t, &[61]).is_err());
    }

    #[test]
    fn fine_rotations_n1() {
        let g = IcosaGroup::build();
        let t = toy_table(&g);
        let all: Vec<_> = enumerate_fine_rotations(&t, &g, 1).unwrap().collect();
        assert_eq!(all.len(), 60);
        for c in &all {
            let i = c.indices[0];
            assert_eq!(c.indices[1], g.inverse_index(i).unwrap());
            let expect = concat_reduce(&t.entries()[i].word, &t.entries()[c.indices[1]].word);
            assert_eq!(c.word, expect);
            let d = distance(&c.matrix, &Unitary2::IDENTITY).unwrap();
            assert!(d <= 2.0 * t.max_error() + 1e-12);
        }
        assert!(enumerate_fine_rotations(&t, &g, 0).is_err());
    }

    #[test]
    fn fine_rotations_n2_structure() {
        let g = IcosaGroup::build();
        let t = toy_table(&g);
        let mut closing_counts = [0usize; 60];
        let mut count = 0;
        let mut fast = Vec::new();
        for lead in 0..60 {
            visit_fine_quaternions(&t, &g, 2, lead, |idx, q| fast.push((idx.to_vec(), q)));
        }
        for (k, c) in enumerate_fine_rotations(&t, &g, 2).unwrap().enumerate() {
            count += 1;
            let mut acc = 0;
            for &i in &c.indices {
                acc = g.compose(acc, i).unwrap();
            }
            assert_eq!(acc, 0);
            closing_counts[c.indices[2]] += 1;
            assert!(c.word.evaluate().max_abs_diff(&c.matrix) < 1e-12);
            assert!(c.word.length() <= 3 * t.max_word_length());
            assert_eq!(fast[k].0, c.indices);
            assert!(fast[k].1.distance(&c.matrix.to_quaternion()) < 1e-12);
        }
        assert_eq!(count, 3600);
        assert!(closing_counts.iter().all(|&c| c == 60));
    }
}
