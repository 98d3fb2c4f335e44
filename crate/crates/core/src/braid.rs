//! Braid words over the two Fibonacci-anyon exchange generators.
//!
//! A word is stored as alternating blocks `σᵢᵏ`. Because `σᵢ¹⁰ = 1` in this
//! representation, exponents are kept in the canonical window `[−4, 5]`.
//! A word reads left to right as a left-to-right matrix product.
//!
//! Text form: blocks `s1^k` / `s2^k` separated by whitespace, `e` for the
//! empty word. `s1` alone is accepted as `s1^1` on input.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::su2::{Quaternion, Unitary2};

/// Order of each generator in the representation.
pub const GENERATOR_ORDER: i32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    S1,
    S2,
}

impl Generator {
    pub fn other(self) -> Generator {
        match self {
            Generator::S1 => Generator::S2,
            Generator::S2 => Generator::S1,
        }
    }

    fn slot(self) -> usize {
        match self {
            Generator::S1 => 0,
            Generator::S2 => 1,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Generator::S1 => "s1",
            Generator::S2 => "s2",
        }
    }
}

/// Folds an exponent into `[−4, 5]` using `σ¹⁰ = 1`.
pub fn fold_exponent(k: i64) -> i32 {
    let r = k.rem_euclid(GENERATOR_ORDER as i64) as i32;
    if r > 5 {
        r - GENERATOR_ORDER
    } else {
        r
    }
}

/// The exact matrices: `σ₁ = diag(e^{−4πi/5}, −e^{−2πi/5})` and
/// `σ₂ = [[−τe^{−iπ/5}, −√τ e^{2πi/5}], [−√τ e^{2πi/5}, −τ]]`, `τ = (√5 − 1)/2`.
fn base_matrix(g: Generator) -> Unitary2 {
    let e = |a: f64| Complex64::from_polar(1.0, a);
    match g {
        Generator::S1 => Unitary2::from_entries(
            e(-4.0 * PI / 5.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            -e(-2.0 * PI / 5.0),
        ),
        Generator::S2 => {
            let tau = (5f64.sqrt() - 1.0) / 2.0;
            let off = -tau.sqrt() * e(2.0 * PI / 5.0);
            Unitary2::from_entries(
                -tau * e(-PI / 5.0),
                off,
                off,
                Complex64::new(-tau, 0.0),
            )
        }
    }
}

struct PowerCache {
    matrices: [[Unitary2; 10]; 2],
    quaternions: [[Quaternion; 10]; 2],
}

fn powers() -> &'static PowerCache {
    static CACHE: OnceLock<PowerCache> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut matrices = [[Unitary2::IDENTITY; 10]; 2];
        for g in [Generator::S1, Generator::S2] {
            let s = base_matrix(g);
            let inv = s.adjoint();
            let mut acc = Unitary2::IDENTITY;
            for k in 1..=5 {
                acc = acc * s;
                matrices[g.slot()][(k + 4) as usize] = acc;
            }
            let mut acc = Unitary2::IDENTITY;
            for k in 1..=4 {
                acc = acc * inv;
                matrices[g.slot()][(4 - k) as usize] = acc;
            }
        }
        let mut quaternions = [[Quaternion::IDENTITY; 10]; 2];
        for s in 0..2 {
            for k in 0..10 {
                quaternions[s][k] = matrices[s][k].to_quaternion();
            }
        }
        PowerCache {
            matrices,
            quaternions,
        }
    })
}

/// `σᵍᵏ` for any integer power (computed from cached powers in `[−4, 5]`).
pub fn generator_matrix(g: Generator, power: i64) -> Unitary2 {
    let k = fold_exponent(power);
    powers().matrices[g.slot()][(k + 4) as usize]
}

pub(crate) fn block_quaternion(g: Generator, k: i32) -> Quaternion {
    powers().quaternions[g.slot()][(k + 4) as usize]
}

/// One block `σᵍᵏ` with `k ∈ [−4, 5] \ {0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub generator: Generator,
    pub exponent: i32,
}

impl Block {
    pub fn new(generator: Generator, exponent: i32) -> Self {
        Block {
            generator,
            exponent,
        }
    }

    pub fn cost(&self) -> usize {
        self.exponent.unsigned_abs() as usize
    }
}

/// A braid word in canonical alternating-block form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BraidWord {
    blocks: Vec<Block>,
}

impl BraidWord {
    pub fn empty() -> Self {
        BraidWord { blocks: Vec::new() }
    }

    /// Builds a canonical word from arbitrary `(generator, exponent)` pairs,
    /// merging neighbours and dropping blocks that fold to zero.
    pub fn from_blocks<I>(blocks: I) -> Self
    where
        I: IntoIterator<Item = (Generator, i64)>,
    {
        let mut w = BraidWord::empty();
        for (g, k) in blocks {
            w.push(g, k);
        }
        w
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Number of elementary crossings.
    pub fn length(&self) -> usize {
        self.blocks.iter().map(Block::cost).sum()
    }

    /// Appends `σᵍᵏ`, merging with the last block and cascading cancellations.
    pub fn push(&mut self, g: Generator, k: i64) {
        let mut k = fold_exponent(k);
        if k == 0 {
            return;
        }
        if let Some(last) = self.blocks.last_mut() {
            if last.generator == g {
                k = fold_exponent(last.exponent as i64 + k as i64);
                if k == 0 {
                    self.blocks.pop();
                } else {
                    last.exponent = k;
                }
                return;
            }
        }
        self.blocks.push(Block::new(g, k));
    }

    /// Reversed blocks with negated exponents.
    pub fn inverse(&self) -> BraidWord {
        BraidWord::from_blocks(
            self.blocks
                .iter()
                .rev()
                .map(|b| (b.generator, -(b.exponent as i64))),
        )
    }

    /// Left-to-right product of the block matrices.
    pub fn evaluate(&self) -> Unitary2 {
        self.blocks.iter().fold(Unitary2::IDENTITY, |acc, b| {
            acc * generator_matrix(b.generator, b.exponent as i64)
        })
    }

    /// [`BraidWord::evaluate`] as a unit quaternion, up to sign.
    pub fn evaluate_quaternion(&self) -> Quaternion {
        self.blocks.iter().fold(Quaternion::IDENTITY, |acc, b| {
            acc * block_quaternion(b.generator, b.exponent)
        })
    }

    /// Ordering used to break distance ties: shorter first, then the
    /// lexicographically smaller text form.
    pub fn tie_cmp(&self, other: &BraidWord) -> std::cmp::Ordering {
        self.length()
            .cmp(&other.length())
            .then_with(|| self.to_string().cmp(&other.to_string()))
    }
}

/// Concatenation followed by free reduction at the junction.
pub fn concat_reduce(w1: &BraidWord, w2: &BraidWord) -> BraidWord {
    let mut out = w1.clone();
    for b in &w2.blocks {
        out.push(b.generator, b.exponent as i64);
    }
    out
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return f.write_str("e");
        }
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}^{}", b.generator.label(), b.exponent)?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let err = |position: usize, token: &str, reason: &str| Error::Parse {
            position,
            token: token.to_string(),
            reason: reason.to_string(),
        };
        match tokens.as_slice() {
            [] => return Err(err(0, "", "empty input (use `e` for the empty word)")),
            ["e"] => return Ok(BraidWord::empty()),
            _ => {}
        }
        let mut w = BraidWord::empty();
        for (i, tok) in tokens.iter().enumerate() {
            let (head, exp) = match tok.split_once('^') {
                Some((h, e)) => (h, Some(e)),
                None => (*tok, None),
            };
            let g = match head {
                "s1" => Generator::S1,
                "s2" => Generator::S2,
                "e" => return Err(err(i, tok, "`e` must stand alone")),
                _ => return Err(err(i, tok, "expected s1 or s2")),
            };
            let k: i64 = match exp {
                None => 1,
                Some(e) => e
                    .parse()
                    .map_err(|_| err(i, tok, "exponent is not an integer"))?,
            };
            if k == 0 {
                return Err(err(i, tok, "zero exponent"));
            }
            w.push(g, k);
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2::distance;
    use proptest::prelude::*;

    const WEAVE_24: &str = "s1^-2 s2^2 s1^-4 s2^2 s1^-4 s2^2 s1^-4 s2^2 s1^-2";

    fn w(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    #[test]
    fn generator_entries() {
        let tau = (5f64.sqrt() - 1.0) / 2.0;
        let s1 = generator_matrix(Generator::S1, 1);
        let e = |a: f64| Complex64::from_polar(1.0, a);
        assert!((s1.entry(0, 0) - e(-0.8 * PI)).norm() < 1e-15);
        assert!((s1.entry(1, 1) + e(-0.4 * PI)).norm() < 1e-15);
        assert_eq!(s1.entry(0, 1).norm(), 0.0);
        let s2 = generator_matrix(Generator::S2, 1);
        assert!((s2.entry(0, 0) + tau * e(-0.2 * PI)).norm() < 1e-15);
        assert!((s2.entry(0, 1) + tau.sqrt() * e(0.4 * PI)).norm() < 1e-15);
        assert!((s2.entry(1, 0) + tau.sqrt() * e(0.4 * PI)).norm() < 1e-15);
        assert!((s2.entry(1, 1) + tau).norm() < 1e-15);
        for g in [Generator::S1, Generator::S2] {
            let p = generator_matrix(g, -1) * generator_matrix(g, 1);
            assert!(p.max_abs_diff(&Unitary2::IDENTITY) < 1e-15);
            assert!(generator_matrix(g, 1).unitarity_residual() < 1e-15);
        }
    }

    #[test]
    fn braid_relation_and_order_ten() {
        let a = w("s1 s2 s1").evaluate();
        let b = w("s2 s1 s2").evaluate();
        assert!(a.max_abs_diff(&b) < 1e-12);
        for g in [Generator::S1, Generator::S2] {
            let mut acc = Unitary2::IDENTITY;
            for _ in 0..10 {
                acc = acc * base_matrix(g);
            }
            assert!(acc.max_abs_diff(&Unitary2::IDENTITY) < 1e-12);
        }
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(BraidWord::empty().evaluate(), Unitary2::IDENTITY);
        // s1^10 folds away on construction; evaluate the literal product too.
        let ten = BraidWord {
            blocks: vec![Block::new(Generator::S1, 5), Block::new(Generator::S1, 5)],
        };
        assert!(ten.evaluate().max_abs_diff(&Unitary2::IDENTITY) < 1e-12);
        assert!(w("s1^10").is_empty());
    }

    #[test]
    fn weave_24_against_minus_ix() {
        let word = w(WEAVE_24);
        assert_eq!(word.length(), 24);
        assert_eq!(word.to_string(), WEAVE_24);
        let minus_ix = Unitary2::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 0.0),
        )
        .unwrap();
        let d = distance(&word.evaluate(), &minus_ix).unwrap();
        assert!((d - 0.0031).abs() <= 0.15 * 0.0031, "d = {d}");
    }

    #[test]
    fn concat_examples() {
        assert!(concat_reduce(&w("s1^2"), &w("s1^-2")).is_empty());
        assert_eq!(
            concat_reduce(&w("s1^-2 s2^2"), &w("s2^-2 s1^1")).to_string(),
            "s1^-1"
        );
        let r = concat_reduce(&w("s1^3"), &w("s1^3"));
        assert_eq!(r.to_string(), "s1^-4");
        assert_eq!(r.length(), 4);
    }

    #[test]
    fn inverse_examples() {
        assert!(BraidWord::empty().inverse().is_empty());
        assert_eq!(w("s1^-2 s2^2").inverse().to_string(), "s2^-2 s1^2");
        assert_eq!(w("s1^5").inverse().to_string(), "s1^5");
    }

    #[test]
    fn parse_examples_and_errors() {
        assert_eq!(w(WEAVE_24).length(), 24);
        assert!(w("e").is_empty());
        assert_eq!(w("s1^1 s1^1").to_string(), "s1^2");
        assert_eq!(w("s1^-5").to_string(), "s1^5");
        assert_eq!(w("s2^7").to_string(), "s2^-3");
        assert_eq!(w("s1^2 s2^3 s2^-3 s1^-2").to_string(), "e");
        for bad in ["", "s3^1", "s1^0", "s1^x", "s1^1 e", "x"] {
            assert!(bad.parse::<BraidWord>().is_err(), "{bad:?}");
        }
        match "s1^1 s2^0".parse::<BraidWord>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 1),
            other => panic!("{other:?}"),
        }
    }

    fn arb_word() -> impl Strategy<Value = BraidWord> {
        prop::collection::vec((any::<bool>(), -9i64..=9), 0..14).prop_map(|v| {
            BraidWord::from_blocks(v.into_iter().map(|(g, k)| {
                (if g { Generator::S1 } else { Generator::S2 }, k)
            }))
        })
    }

    fn is_canonical(w: &BraidWord) -> bool {
        w.blocks
            .windows(2)
            .all(|p| p[0].generator != p[1].generator)
            && w.blocks
                .iter()
                .all(|b| b.exponent != 0 && (-4..=5).contains(&b.exponent))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn text_round_trip(word in arb_word()) {
            prop_assert!(is_canonical(&word));
            let text = word.to_string();
            let back: BraidWord = text.parse().unwrap();
            prop_assert_eq!(&back, &word);
            prop_assert_eq!(back.to_string(), text);
        }

        #[test]
        fn concat_is_a_homomorphism(a in arb_word(), b in arb_word()) {
            let c = concat_reduce(&a, &b);
            prop_assert!(is_canonical(&c));
            prop_assert!(c.length() <= a.length() + b.length());
            let lhs = c.evaluate();
            let rhs = a.evaluate() * b.evaluate();
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn quaternion_evaluation_matches_matrix(a in arb_word()) {
            let q = a.evaluate_quaternion();
            let m = a.evaluate().to_quaternion();
            prop_assert!(q.distance(&m) < 1e-12);
        }

        #[test]
        fn inverse_is_adjoint(a in arb_word()) {
            let inv = a.inverse();
            prop_assert!(concat_reduce(&a, &inv).is_empty());
            prop_assert!(inv.evaluate().max_abs_diff(&a.evaluate().adjoint()) < 1e-12);
        }
    }
}
