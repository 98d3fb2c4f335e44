//! 2×2 unitary algebra, the phase-blind distance and SU(2) sampling.
//!
//! A unit quaternion `(w, x, y, z)` stands for the SU(2) matrix
//!
//! ```text
//!   U = w·1 + i·(x·X + y·Y + z·Z) = [[ w + iz,  y + ix ],
//!                                    [-y + ix,  w - iz ]]
//! ```
//!
//! with `X, Y, Z` the Pauli matrices. Quaternion multiplication below is
//! defined so that it agrees with matrix multiplication under this map.
//!
//! The distance between two gates is the operator norm of their difference
//! after the best relative phase has been removed:
//!
//! ```text
//!   d(U, V) = min_φ ‖U − e^{iφ} V‖ = sqrt(2 − |Tr(U†V)|)
//! ```
//!
//! On SU(2) this is the chord length between the two closest quaternion
//! representatives, `min(|p − q|, |p + q|)`, which is how it is evaluated.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};

/// Tolerance for algebraic identities.
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Tolerance used when validating inputs.
pub const INPUT_TOL: f64 = 1e-9;

/// Identifier written into table files for the metric above.
pub const METRIC_ID: &str = "opnorm-phasemin";

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2×2 unitary matrix, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Unitary2 {
    m: [Complex64; 4],
}

impl fmt::Debug for Unitary2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{:.6}, {:.6}], [{:.6}, {:.6}]]",
            self.m[0], self.m[1], self.m[2], self.m[3]
        )
    }
}

impl Unitary2 {
    pub const IDENTITY: Unitary2 = Unitary2 {
        m: [ONE, ZERO, ZERO, ONE],
    };

    /// Builds a matrix from its entries, checking unitarity to [`INPUT_TOL`].
    pub fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Result<Self> {
        let u = Self::from_entries(a11, a12, a21, a22);
        let r = u.unitarity_residual();
        if !(r <= INPUT_TOL) {
            return Err(Error::InvalidInput(format!(
                "matrix is not unitary (residual {r:.3e})"
            )));
        }
        Ok(u)
    }

    pub(crate) const fn from_entries(
        a11: Complex64,
        a12: Complex64,
        a21: Complex64,
        a22: Complex64,
    ) -> Self {
        Unitary2 {
            m: [a11, a12, a21, a22],
        }
    }

    pub fn identity() -> Self {
        Self::IDENTITY
    }

    /// Diagonal unitary `diag(a, b)`.
    pub fn diagonal(a: Complex64, b: Complex64) -> Result<Self> {
        Self::new(a, ZERO, ZERO, b)
    }

    /// Entries in the order (a11, a12, a21, a22).
    pub fn entries(&self) -> [Complex64; 4] {
        self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[2 * row + col]
    }

    pub fn adjoint(&self) -> Self {
        let [a, b, c, d] = self.m;
        Self::from_entries(a.conj(), c.conj(), b.conj(), d.conj())
    }

    pub fn det(&self) -> Complex64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0] + self.m[3]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let [a, b, c, d] = self.m;
        Self::from_entries(a * s, b * s, c * s, d * s)
    }

    /// Largest entry of |U†U − 1| together with ||det U| − 1|.
    pub fn unitarity_residual(&self) -> f64 {
        let p = self.adjoint() * *self;
        let mut r: f64 = 0.0;
        for (k, z) in p.m.iter().enumerate() {
            let target = if k == 0 || k == 3 { ONE } else { ZERO };
            r = r.max((z - target).norm());
        }
        r.max((self.det().norm() - 1.0).abs())
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Unitary2) -> f64 {
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// The SU(2) part of this matrix as a unit quaternion, with the sign
    /// left as it falls out of the principal square root of the determinant.
    pub fn to_quaternion(&self) -> Quaternion {
        let s = self.det().sqrt();
        let q = self.scale(s.inv());
        let [a, b, c, d] = q.m;
        let w = 0.5 * (a.re + d.re);
        let z = 0.5 * (a.im - d.im);
        let y = 0.5 * (b.re - c.re);
        let x = 0.5 * (b.im + c.im);
        Quaternion::normalized(w, x, y, z)
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Unitary2) -> Unitary2 {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = rhs.m;
        Unitary2::from_entries(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }
}

impl Mul<&Unitary2> for &Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: &Unitary2) -> Unitary2 {
        *self * *rhs
    }
}

/// A unit quaternion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion {
    pub(crate) w: f64,
    pub(crate) x: f64,
    pub(crate) y: f64,
    pub(crate) z: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    /// Checked constructor: the norm must be 1 to within [`INPUT_TOL`].
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if !((n - 1.0).abs() <= INPUT_TOL) {
            return Err(Error::InvalidInput(format!(
                "quaternion norm {n} is not 1"
            )));
        }
        Ok(Quaternion { w, x, y, z })
    }

    /// Scales a nonzero 4-vector onto the unit sphere.
    pub fn normalized(w: f64, x: f64, y: f64, z: f64) -> Self {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        Quaternion {
            w: w / n,
            x: x / n,
            y: y / n,
            z: z / n,
        }
    }

    pub(crate) const fn raw(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn components(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conj(&self) -> Self {
        Quaternion::raw(self.w, -self.x, -self.y, -self.z)
    }

    pub fn neg(&self) -> Self {
        Quaternion::raw(-self.w, -self.x, -self.y, -self.z)
    }

    pub fn dot(&self, o: &Quaternion) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// Phase-blind distance between the gates represented by `self` and `o`.
    #[inline]
    pub fn distance(&self, o: &Quaternion) -> f64 {
        let s = if self.dot(o) >= 0.0 { -1.0 } else { 1.0 };
        let dw = self.w + s * o.w;
        let dx = self.x + s * o.x;
        let dy = self.y + s * o.y;
        let dz = self.z + s * o.z;
        (dw * dw + dx * dx + dy * dy + dz * dz).sqrt()
    }

    /// The matrix `w·1 + i(x·X + y·Y + z·Z)`.
    pub fn to_matrix(&self) -> Unitary2 {
        Unitary2::from_entries(
            Complex64::new(self.w, self.z),
            Complex64::new(self.y, self.x),
            Complex64::new(-self.y, self.x),
            Complex64::new(self.w, -self.z),
        )
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    /// Product matching matrix multiplication of the images: the vector part
    /// carries `−v1 × v2` because `(iX)(iY) = −iZ`.
    #[inline]
    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion::raw(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w - (self.y * o.z - self.z * o.y),
            self.w * o.y + self.y * o.w - (self.z * o.x - self.x * o.z),
            self.w * o.z + self.z * o.w - (self.x * o.y - self.y * o.x),
        )
    }
}

/// A unitary with determinant one.
///
/// Values returned by [`project_su2`] and [`haar_random`] also carry the
/// canonical sign: `Re Tr U > 0`, or when the trace is (numerically) purely
/// imaginary, the first of `a11, a12` with modulus above 1e-12 has argument
/// in `[0, π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2Element(Unitary2);

impl Su2Element {
    pub fn identity() -> Self {
        Su2Element(Unitary2::IDENTITY)
    }

    pub fn as_unitary(&self) -> &Unitary2 {
        &self.0
    }

    pub fn into_unitary(self) -> Unitary2 {
        self.0
    }

    pub fn to_quaternion(&self) -> Quaternion {
        let [a, b, c, d] = self.0.m;
        Quaternion::normalized(
            0.5 * (a.re + d.re),
            0.5 * (b.im + c.im),
            0.5 * (b.re - c.re),
            0.5 * (a.im - d.im),
        )
    }

    fn canonical(self) -> Self {
        if needs_flip(&self.0) {
            Su2Element(self.0.scale(-ONE))
        } else {
            self
        }
    }
}

fn needs_flip(u: &Unitary2) -> bool {
    let re_tr = u.trace().re;
    if re_tr.abs() > ALGEBRA_TOL {
        return re_tr < 0.0;
    }
    for z in [u.m[0], u.m[1]] {
        if z.norm() > ALGEBRA_TOL {
            let a = z.arg();
            return !(0.0..PI).contains(&a);
        }
    }
    false
}

/// Removes the global phase of `u`, returning the canonical SU(2) representative.
pub fn project_su2(u: &Unitary2) -> Result<Su2Element> {
    let r = u.unitarity_residual();
    if !(r <= INPUT_TOL) {
        return Err(Error::InvalidInput(format!(
            "matrix is not unitary (residual {r:.3e})"
        )));
    }
    let s = u.det().sqrt();
    Ok(Su2Element(u.scale(s.inv())).canonical())
}

/// `d(U, V) = min_φ ‖U − e^{iφ}V‖₂`, in `[0, √2]`.
pub fn distance(u: &Unitary2, v: &Unitary2) -> Result<f64> {
    for m in [u, v] {
        let r = m.unitarity_residual();
        if !(r <= INPUT_TOL) {
            return Err(Error::InvalidInput(format!(
                "matrix is not unitary (residual {r:.3e})"
            )));
        }
    }
    Ok(distance_unchecked(u, v))
}

/// [`distance`] without the unitarity check, for values known to be unitary.
pub fn distance_unchecked(u: &Unitary2, v: &Unitary2) -> f64 {
    u.to_quaternion().distance(&v.to_quaternion())
}

/// Maps a unit quaternion to `w·1 + i(x·X + y·Y + z·Z)` (no sign canonicalization).
pub fn quaternion_to_su2(q: &Quaternion) -> Result<Su2Element> {
    let q = Quaternion::new(q.w, q.x, q.y, q.z)?;
    Ok(Su2Element(q.to_matrix()))
}

/// The pseudo-random generator used throughout (xoshiro256++).
pub type Prng = Xoshiro256PlusPlus;

/// Generator seeded from a 64-bit seed (expanded with SplitMix64).
pub fn seeded_rng(seed: u64) -> Prng {
    Prng::seed_from_u64(seed)
}

/// Independent stream `index` derived from a master seed, so that per-item
/// work can be parallelised without sharing generator state.
pub fn stream_rng(seed: u64, index: u64) -> Prng {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    Prng::seed_from_u64(z ^ (z >> 31))
}

/// Haar-uniform SU(2) element: four standard normals normalised to a unit quaternion.
pub fn haar_random<R: Rng + ?Sized>(rng: &mut R) -> Su2Element {
    loop {
        let w: f64 = rng.sample(StandardNormal);
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        let z: f64 = rng.sample(StandardNormal);
        if w * w + x * x + y * y + z * z > 1e-24 {
            return Su2Element(Quaternion::normalized(w, x, y, z).to_matrix()).canonical();
        }
    }
}

/// A 2×2 Hermitian matrix `[[h11, h12], [conj(h12), h22]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermitianDeviation {
    h11: f64,
    h12: Complex64,
    h22: f64,
}

impl HermitianDeviation {
    pub fn zero() -> Self {
        HermitianDeviation {
            h11: 0.0,
            h12: ZERO,
            h22: 0.0,
        }
    }

    /// `t·1 + x·X + y·Y + z·Z`.
    pub fn from_pauli(t: f64, x: f64, y: f64, z: f64) -> Self {
        HermitianDeviation {
            h11: t + z,
            h12: Complex64::new(x, -y),
            h22: t - z,
        }
    }

    /// Checks `H = H†` to [`ALGEBRA_TOL`] and keeps the Hermitian part.
    pub fn from_matrix(m: [Complex64; 4]) -> Result<Self> {
        let skew = (m[0].im.abs())
            .max(m[3].im.abs())
            .max((m[1] - m[2].conj()).norm());
        if !(skew <= ALGEBRA_TOL) {
            return Err(Error::InvalidInput(format!(
                "matrix is not Hermitian (residual {skew:.3e})"
            )));
        }
        Ok(HermitianDeviation {
            h11: m[0].re,
            h12: 0.5 * (m[1] + m[2].conj()),
            h22: m[3].re,
        })
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.h11, 0.0),
            self.h12,
            self.h12.conj(),
            Complex64::new(self.h22, 0.0),
        ]
    }

    /// `(t, x, y, z)` with `H = t·1 + x·X + y·Y + z·Z`.
    pub fn pauli(&self) -> [f64; 4] {
        [
            0.5 * (self.h11 + self.h22),
            self.h12.re,
            -self.h12.im,
            0.5 * (self.h11 - self.h22),
        ]
    }

    /// Largest absolute eigenvalue.
    pub fn norm(&self) -> f64 {
        let [t, x, y, z] = self.pauli();
        t.abs() + (x * x + y * y + z * z).sqrt()
    }

    /// `e^{iH}`.
    pub fn exp_i(&self) -> Unitary2 {
        let [t, x, y, z] = self.pauli();
        let r = (x * x + y * y + z * z).sqrt();
        let q = if r > 0.0 {
            let s = r.sin() / r;
            Quaternion::raw(r.cos(), s * x, s * y, s * z)
        } else {
            Quaternion::IDENTITY
        };
        q.to_matrix().scale(Complex64::from_polar(1.0, t))
    }

    /// `U H U†`.
    pub fn conjugated_by(&self, u: &Unitary2) -> Self {
        let [a, b, c, d] = u.m;
        let [h0, h1, h2, h3] = self.entries();
        // U H
        let p0 = a * h0 + b * h2;
        let p1 = a * h1 + b * h3;
        let p2 = c * h0 + d * h2;
        let p3 = c * h1 + d * h3;
        // (U H) U†
        let r0 = p0 * a.conj() + p1 * b.conj();
        let r1 = p0 * c.conj() + p1 * d.conj();
        let r3 = p2 * c.conj() + p3 * d.conj();
        HermitianDeviation {
            h11: r0.re,
            h12: r1,
            h22: r3.re,
        }
    }

    pub fn add(&self, o: &HermitianDeviation) -> Self {
        HermitianDeviation {
            h11: self.h11 + o.h11,
            h12: self.h12 + o.h12,
            h22: self.h22 + o.h22,
        }
    }
}

/// Hermitian `H` with `e^{iH} = U` and eigenvalues in `(−π/2, π/2]`, for `d(1, U) < 1`.
///
/// Works in PSU(2): the sign of the quaternion is chosen with `w ≥ 0`.
pub fn log_deviation(u: &Su2Element) -> Result<HermitianDeviation> {
    let mut q = u.to_quaternion();
    let d = q.distance(&Quaternion::IDENTITY);
    if !(d < 1.0) {
        return Err(Error::OutOfDomain(format!(
            "deviation too large for the logarithm (d = {d:.6})"
        )));
    }
    if q.w < 0.0 {
        q = q.neg();
    }
    let r = (q.x * q.x + q.y * q.y + q.z * q.z).sqrt();
    if r == 0.0 {
        return Ok(HermitianDeviation::zero());
    }
    let angle = r.atan2(q.w);
    let s = angle / r;
    Ok(HermitianDeviation::from_pauli(0.0, s * q.x, s * q.y, s * q.z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{generator_matrix, Generator};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Largest singular value of a general 2×2 complex matrix, from the
    /// eigenvalues of `A†A = [[p, r], [r̄, q]]`.
    fn op_norm(m: [Complex64; 4]) -> f64 {
        let p = m[0].norm_sqr() + m[2].norm_sqr();
        let q = m[1].norm_sqr() + m[3].norm_sqr();
        let r = m[0].conj() * m[1] + m[2].conj() * m[3];
        let disc = ((p - q) * (p - q) + 4.0 * r.norm_sqr()).sqrt();
        (0.5 * (p + q + disc)).sqrt()
    }

    /// Independent oracle: scan the relative phase and minimise the operator norm.
    fn phase_scan_distance(u: &Unitary2, v: &Unitary2) -> f64 {
        let steps = 200_000;
        let eval = |phi: f64| {
            let e = Complex64::from_polar(1.0, phi);
            let a = u.entries();
            let b = v.entries();
            op_norm([a[0] - e * b[0], a[1] - e * b[1], a[2] - e * b[2], a[3] - e * b[3]])
        };
        let (mut best, mut arg) = (f64::MAX, 0.0);
        for k in 0..steps {
            let phi = 2.0 * PI * k as f64 / steps as f64;
            let d = eval(phi);
            if d < best {
                best = d;
                arg = phi;
            }
        }
        // golden-section polish around the best grid point
        let h = 2.0 * PI / steps as f64;
        let (mut lo, mut hi) = (arg - h, arg + h);
        for _ in 0..100 {
            let m1 = lo + (hi - lo) * 0.381966;
            let m2 = lo + (hi - lo) * 0.618034;
            if eval(m1) < eval(m2) {
                hi = m2
            } else {
                lo = m1
            }
        }
        eval(0.5 * (lo + hi)).min(best)
    }

    fn iz() -> Unitary2 {
        Unitary2::diagonal(c(0.0, 1.0), c(0.0, -1.0)).unwrap()
    }

    #[test]
    fn project_examples() {
        let id = project_su2(&Unitary2::IDENTITY).unwrap();
        assert!(id.as_unitary().max_abs_diff(&Unitary2::IDENTITY) < 1e-15);

        let p = project_su2(&iz()).unwrap();
        assert!(p.as_unitary().max_abs_diff(&iz()) < 1e-15);

        // det(σ₁) = e^{−iπ/5}, so σ₁ / e^{−iπ/10} up to sign.
        let s1 = generator_matrix(Generator::S1, 1);
        let det = s1.det();
        assert!((det - Complex64::from_polar(1.0, -PI / 5.0)).norm() < 1e-15);
        let expect = s1.scale(Complex64::from_polar(1.0, PI / 10.0));
        let got = *project_su2(&s1).unwrap().as_unitary();
        let diff = got
            .max_abs_diff(&expect)
            .min(got.max_abs_diff(&expect.scale(-ONE)));
        assert!(diff < 1e-14);
        assert!(got.trace().re > 0.0);
        assert!((got.det() - ONE).norm() < 1e-14);
    }

    #[test]
    fn project_rejects_non_unitary() {
        let m = Unitary2::from_entries(c(2.0, 0.0), ZERO, ZERO, ONE);
        assert!(matches!(project_su2(&m), Err(Error::InvalidInput(_))));
        assert!(Unitary2::new(c(1.0, 0.0), c(0.1, 0.0), ZERO, ONE).is_err());
    }

    #[test]
    fn distance_examples_against_phase_scan() {
        let id = Unitary2::IDENTITY;
        assert_eq!(distance(&id, &id).unwrap(), 0.0);
        let d = distance(&id, &iz()).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
        assert!((d - phase_scan_distance(&id, &iz())).abs() < 1e-9);

        let s1 = generator_matrix(Generator::S1, 1);
        let d = distance(&id, &s1).unwrap();
        let oracle = phase_scan_distance(&id, &s1);
        assert!((d - oracle).abs() < 1e-9, "{d} vs {oracle}");
        // closed form: eigenphase gap 3π/5 → 2 sin(3π/20)
        assert!((d - 2.0 * (3.0 * PI / 20.0).sin()).abs() < 1e-12);
    }

    #[test]
    fn distance_matches_phase_scan_on_random_pairs() {
        let mut rng = seeded_rng(7);
        for _ in 0..20 {
            let u = haar_random(&mut rng).into_unitary();
            let v = haar_random(&mut rng)
                .into_unitary()
                .scale(Complex64::from_polar(1.0, rng.gen::<f64>() * 6.0));
            let d = distance(&u, &v).unwrap();
            assert!((d - phase_scan_distance(&u, &v)).abs() < 1e-8);
        }
    }

    #[test]
    fn distance_is_sign_blind_for_quaternions() {
        let mut rng = seeded_rng(3);
        let q = haar_random(&mut rng).to_quaternion();
        let u = quaternion_to_su2(&q).unwrap().into_unitary();
        let v = quaternion_to_su2(&q.neg()).unwrap().into_unitary();
        assert!(u.max_abs_diff(&v.scale(-ONE)) < 1e-15);
        let w = haar_random(&mut rng).into_unitary();
        assert_eq!(distance(&(w * u), &(w * v)).unwrap(), 0.0);
    }

    #[test]
    fn distance_rejects_non_unitary() {
        let m = Unitary2::from_entries(c(2.0, 0.0), ZERO, ZERO, ONE);
        assert!(distance(&m, &Unitary2::IDENTITY).is_err());
    }

    #[test]
    fn quaternion_examples() {
        let id = quaternion_to_su2(&Quaternion::IDENTITY).unwrap();
        assert_eq!(*id.as_unitary(), Unitary2::IDENTITY);
        let z = quaternion_to_su2(&Quaternion::new(0.0, 0.0, 0.0, 1.0).unwrap()).unwrap();
        assert!(z.as_unitary().max_abs_diff(&iz()) < 1e-15);
        assert!(Quaternion::new(1.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn quaternion_product_matches_matrix_product() {
        let mut rng = seeded_rng(11);
        for _ in 0..100 {
            let p = haar_random(&mut rng).to_quaternion();
            let q = haar_random(&mut rng).to_quaternion();
            let lhs = (p * q).to_matrix();
            let rhs = p.to_matrix() * q.to_matrix();
            assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        }
    }

    #[test]
    fn haar_is_deterministic_and_unitary() {
        let mut a = seeded_rng(42);
        let u1 = haar_random(&mut a);
        let u2 = haar_random(&mut a);
        assert_ne!(u1, u2);
        for u in [u1, u2] {
            assert!(u.as_unitary().unitarity_residual() < 1e-12);
            assert!((u.as_unitary().det() - ONE).norm() < 1e-12);
        }
        let mut c1 = seeded_rng(42);
        let mut c2 = seeded_rng(42);
        for _ in 0..100 {
            assert_eq!(haar_random(&mut c1), haar_random(&mut c2));
        }
    }

    #[test]
    fn log_deviation_examples() {
        let h = log_deviation(&Su2Element::identity()).unwrap();
        assert_eq!(h.norm(), 0.0);

        let theta = 0.01f64;
        let u = Unitary2::diagonal(
            Complex64::from_polar(1.0, theta / 2.0),
            Complex64::from_polar(1.0, -theta / 2.0),
        )
        .unwrap();
        let h = log_deviation(&project_su2(&u).unwrap()).unwrap();
        let expect = HermitianDeviation::from_pauli(0.0, 0.0, 0.0, theta / 2.0);
        for (a, b) in h.entries().iter().zip(expect.entries().iter()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn log_deviation_round_trip() {
        let mut rng = seeded_rng(5);
        for _ in 0..1000 {
            let v: [f64; 3] = [rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5];
            let scale = 0.4 * rng.gen::<f64>();
            let h0 = HermitianDeviation::from_pauli(0.0, scale * v[0], scale * v[1], scale * v[2]);
            let u = project_su2(&h0.exp_i()).unwrap();
            let h = log_deviation(&u).unwrap();
            assert!(h.exp_i().max_abs_diff(u.as_unitary()) < 1e-10);
            let d = distance(&h.exp_i(), u.as_unitary()).unwrap();
            assert!(d < 1e-10);
        }
    }

    #[test]
    fn log_deviation_rejects_large_rotation() {
        let u = project_su2(&iz()).unwrap();
        assert!(matches!(log_deviation(&u), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn hermitian_check() {
        let bad = [ONE, c(0.0, 1.0), c(0.0, 1.0), ONE];
        assert!(HermitianDeviation::from_matrix(bad).is_err());
        let good = [ONE, c(0.3, 1.0), c(0.3, -1.0), c(-2.0, 0.0)];
        let h = HermitianDeviation::from_matrix(good).unwrap();
        assert!((h.norm() - (0.5 + (1.5f64.powi(2) + 1.09).sqrt())).abs() < 1e-12);
    }
}
