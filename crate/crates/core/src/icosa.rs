//! The icosahedral rotation group in exact golden-ratio arithmetic.
//!
//! Elements are unit quaternions whose components lie in `{(a + b√5)/4}`,
//! taken modulo ±1 (so 60 rotations out of the 120 binary-icosahedral units).
//! The group is generated by closure from
//!
//! ```text
//!   r5 = (φ, 1, φ⁻¹, 0)/2   rotation by 72° about a five-fold axis
//!   r3 = (1, 1, 1, 1)/2     rotation by 120° about a three-fold axis
//! ```
//!
//! Index 0 is the identity; the remaining indices follow descending
//! lexicographic order of the canonical quaternions (first nonzero
//! component positive), which also puts the identity first.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::su2::{quaternion_to_su2, Quaternion, Su2Element};

/// Number of rotations in the group.
pub const ORDER: usize = 60;

/// `(a + b√5) / 4` with integer `a, b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct GoldenScalar {
    pub a: i64,
    pub b: i64,
}

impl GoldenScalar {
    pub const ZERO: GoldenScalar = GoldenScalar { a: 0, b: 0 };
    pub const ONE: GoldenScalar = GoldenScalar { a: 4, b: 0 };
    pub const HALF: GoldenScalar = GoldenScalar { a: 2, b: 0 };
    /// φ/2 = (1 + √5)/4
    pub const HALF_PHI: GoldenScalar = GoldenScalar { a: 1, b: 1 };
    /// 1/(2φ) = (√5 − 1)/4
    pub const HALF_INV_PHI: GoldenScalar = GoldenScalar { a: -1, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        GoldenScalar { a, b }
    }

    pub fn to_f64(self) -> f64 {
        (self.a as f64 + self.b as f64 * 5f64.sqrt()) / 4.0
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Exact sign of `a + b√5`.
    pub fn signum(self) -> i32 {
        let sa = self.a.signum();
        let sb = self.b.signum();
        if sa == sb || sb == 0 {
            return sa as i32;
        }
        if sa == 0 {
            return sb as i32;
        }
        // opposite signs: compare a² with 5b²
        let a2 = self.a as i128 * self.a as i128;
        let b2 = 5 * self.b as i128 * self.b as i128;
        match a2.cmp(&b2) {
            Ordering::Greater => sa as i32,
            Ordering::Less => sb as i32,
            Ordering::Equal => 0,
        }
    }

    pub fn neg(self) -> Self {
        GoldenScalar::new(-self.a, -self.b)
    }
}

impl std::ops::Add for GoldenScalar {
    type Output = GoldenScalar;
    fn add(self, o: GoldenScalar) -> GoldenScalar {
        GoldenScalar::new(self.a + o.a, self.b + o.b)
    }
}

impl std::ops::Sub for GoldenScalar {
    type Output = GoldenScalar;
    fn sub(self, o: GoldenScalar) -> GoldenScalar {
        GoldenScalar::new(self.a - o.a, self.b - o.b)
    }
}

impl PartialOrd for GoldenScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GoldenScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum().cmp(&0)
    }
}

/// Product of two quarter-lattice scalars, `(A + B√5)/16`, before the
/// division back onto the quarter lattice.
#[derive(Clone, Copy, Debug, Default)]
struct Sixteenths {
    a: i64,
    b: i64,
}

impl Sixteenths {
    fn product(x: GoldenScalar, y: GoldenScalar) -> Self {
        Sixteenths {
            a: x.a * y.a + 5 * x.b * y.b,
            b: x.a * y.b + x.b * y.a,
        }
    }

    fn add(self, o: Sixteenths) -> Self {
        Sixteenths {
            a: self.a + o.a,
            b: self.b + o.b,
        }
    }

    fn sub(self, o: Sixteenths) -> Self {
        Sixteenths {
            a: self.a - o.a,
            b: self.b - o.b,
        }
    }

    fn to_quarter(self) -> Option<GoldenScalar> {
        if self.a % 4 == 0 && self.b % 4 == 0 {
            Some(GoldenScalar::new(self.a / 4, self.b / 4))
        } else {
            None
        }
    }
}

/// A quaternion with golden-scalar components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GoldenQuaternion(pub [GoldenScalar; 4]);

impl GoldenQuaternion {
    pub const IDENTITY: GoldenQuaternion = GoldenQuaternion([
        GoldenScalar::ONE,
        GoldenScalar::ZERO,
        GoldenScalar::ZERO,
        GoldenScalar::ZERO,
    ]);

    /// Exact product using the same convention as [`Quaternion`]'s `Mul`.
    /// Returns `None` if the result leaves the quarter lattice.
    pub fn checked_mul(&self, o: &GoldenQuaternion) -> Option<GoldenQuaternion> {
        let [w1, x1, y1, z1] = self.0;
        let [w2, x2, y2, z2] = o.0;
        let p = Sixteenths::product;
        let w = p(w1, w2).sub(p(x1, x2)).sub(p(y1, y2)).sub(p(z1, z2));
        let x = p(w1, x2).add(p(x1, w2)).sub(p(y1, z2)).add(p(z1, y2));
        let y = p(w1, y2).add(p(y1, w2)).sub(p(z1, x2)).add(p(x1, z2));
        let z = p(w1, z2).add(p(z1, w2)).sub(p(x1, y2)).add(p(y1, x2));
        Some(GoldenQuaternion([
            w.to_quarter()?,
            x.to_quarter()?,
            y.to_quarter()?,
            z.to_quarter()?,
        ]))
    }

    pub fn conj(&self) -> Self {
        let [w, x, y, z] = self.0;
        GoldenQuaternion([w, x.neg(), y.neg(), z.neg()])
    }

    pub fn neg(&self) -> Self {
        let [w, x, y, z] = self.0;
        GoldenQuaternion([w.neg(), x.neg(), y.neg(), z.neg()])
    }

    /// Squared norm as an exact quarter-lattice scalar.
    pub fn norm_sqr(&self) -> Option<GoldenScalar> {
        self.0
            .iter()
            .fold(Sixteenths::default(), |acc, &c| {
                acc.add(Sixteenths::product(c, c))
            })
            .to_quarter()
    }

    /// The representative of `±q` whose first nonzero component is positive.
    pub fn canonical(&self) -> Self {
        match self.0.iter().find(|c| !c.is_zero()) {
            Some(c) if c.signum() < 0 => self.neg(),
            _ => *self,
        }
    }

    pub fn to_f64(&self) -> Quaternion {
        let [w, x, y, z] = self.0;
        Quaternion::normalized(w.to_f64(), x.to_f64(), y.to_f64(), z.to_f64())
    }

    /// Rotation order of the SO(3) image (1, 2, 3 or 5).
    fn rotation_order(&self) -> u32 {
        let w = self.canonical().0[0];
        let w_abs = if w.signum() < 0 { w.neg() } else { w };
        if w_abs == GoldenScalar::ONE {
            1
        } else if w_abs.is_zero() {
            2
        } else if w_abs == GoldenScalar::HALF {
            3
        } else if w_abs == GoldenScalar::HALF_PHI || w_abs == GoldenScalar::HALF_INV_PHI {
            5
        } else {
            0
        }
    }

    fn lex_cmp(&self, o: &Self) -> Ordering {
        self.0.iter().cmp(o.0.iter())
    }
}

impl fmt::Display for GoldenQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|c| format!("({}{:+}√5)/4", c.a, c.b))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IcosaElement {
    pub index: usize,
    pub quaternion: GoldenQuaternion,
    pub rotation_order: u32,
}

/// The 60 rotations with their exact Cayley and inverse tables.
#[derive(Clone, Debug)]
pub struct IcosaGroup {
    elements: Vec<IcosaElement>,
    table: Vec<[u8; ORDER]>,
    inverse: [u8; ORDER],
    su2: Vec<Su2Element>,
    quats: Vec<Quaternion>,
}

impl IcosaGroup {
    /// Generates the group by closure and builds all tables exactly.
    pub fn build() -> IcosaGroup {
        let h = GoldenScalar::HALF;
        let r5 = GoldenQuaternion([
            GoldenScalar::HALF_PHI,
            h,
            GoldenScalar::HALF_INV_PHI,
            GoldenScalar::ZERO,
        ]);
        let r3 = GoldenQuaternion([h, h, h, h]);
        let generators = [r5, r3];

        let mut found = vec![GoldenQuaternion::IDENTITY];
        let mut frontier = vec![GoldenQuaternion::IDENTITY];
        while let Some(q) = frontier.pop() {
            for g in &generators {
                let p = q
                    .checked_mul(g)
                    .expect("icosian product left the quarter lattice")
                    .canonical();
                if !found.contains(&p) {
                    found.push(p);
                    frontier.push(p);
                    assert!(found.len() <= ORDER, "closure exceeded {ORDER} elements");
                }
            }
        }
        assert_eq!(found.len(), ORDER, "closure stopped at {} elements", found.len());

        found.sort_by(|a, b| b.lex_cmp(a));
        assert_eq!(found[0], GoldenQuaternion::IDENTITY);

        let position: BTreeMap<[(i64, i64); 4], usize> = found
            .iter()
            .enumerate()
            .map(|(i, q)| (key(q), i))
            .collect();
        let lookup = |q: &GoldenQuaternion| -> usize {
            *position
                .get(&key(&q.canonical()))
                .expect("product is not a group element")
        };

        let mut table = vec![[0u8; ORDER]; ORDER];
        for (i, a) in found.iter().enumerate() {
            for (j, b) in found.iter().enumerate() {
                let p = a.checked_mul(b).expect("product left the quarter lattice");
                table[i][j] = lookup(&p) as u8;
            }
        }
        let mut inverse = [0u8; ORDER];
        for (i, a) in found.iter().enumerate() {
            inverse[i] = lookup(&a.conj()) as u8;
        }

        let elements: Vec<IcosaElement> = found
            .iter()
            .enumerate()
            .map(|(index, q)| IcosaElement {
                index,
                quaternion: *q,
                rotation_order: q.rotation_order(),
            })
            .collect();
        let quats: Vec<Quaternion> = found.iter().map(|q| q.to_f64()).collect();
        let su2 = quats
            .iter()
            .map(|q| quaternion_to_su2(q).expect("icosian is a unit quaternion"))
            .collect();

        IcosaGroup {
            elements,
            table,
            inverse,
            su2,
            quats,
        }
    }

    pub fn elements(&self) -> &[IcosaElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < ORDER {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                size: ORDER,
            })
        }
    }

    /// `k` with `g_i g_j = g_k`.
    pub fn compose(&self, i: usize, j: usize) -> Result<usize> {
        self.check(i)?;
        self.check(j)?;
        Ok(self.table[i][j] as usize)
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, i: usize, j: usize) -> usize {
        self.table[i][j] as usize
    }

    pub fn inverse_index(&self, i: usize) -> Result<usize> {
        self.check(i)?;
        Ok(self.inverse[i] as usize)
    }

    #[inline]
    pub(crate) fn inverse_unchecked(&self, i: usize) -> usize {
        self.inverse[i] as usize
    }

    /// The SU(2) matrix of the canonical quaternion of element `i`.
    pub fn element_su2(&self, i: usize) -> Result<Su2Element> {
        self.check(i)?;
        Ok(self.su2[i])
    }

    /// Unit quaternion of element `i` (sign as stored). Panics if `i >= 60`.
    pub fn element_quaternion(&self, i: usize) -> Quaternion {
        self.quats[i]
    }

    /// Short hex digest of the exact element list, tying data files to this indexing.
    pub fn hash_hex(&self) -> String {
        let mut h = Sha256::new();
        for e in &self.elements {
            for c in e.quaternion.0 {
                h.update(c.a.to_le_bytes());
                h.update(c.b.to_le_bytes());
            }
        }
        h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Number of elements of each rotation order.
    pub fn order_census(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for e in &self.elements {
            *m.entry(e.rotation_order).or_insert(0) += 1;
        }
        m
    }
}

fn key(q: &GoldenQuaternion) -> [(i64, i64); 4] {
    q.0.map(|c| (c.a, c.b))
}
