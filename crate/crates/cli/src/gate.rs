//! Target gate specifications.
//!
//! Accepted forms:
//! - a name: `X`, `Y`, `Z`, `H`, `T`, `iX`, `iY`, `iZ`, `-iX`
//! - `matrix:a,b,c,d,e,f,g,h` with the real and imaginary parts of
//!   `u11, u12, u21, u22` in that order
//! - `axis:nx,ny,nz:theta` for `exp(-i·theta/2·n·σ)`, theta in radians

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use braidhash::su2::Unitary2;
use braidhash::{Error, Result};
use num_complex::Complex64;

pub const NAMES: [&str; 9] = ["X", "Y", "Z", "H", "T", "iX", "iY", "iZ", "-iX"];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn named(name: &str) -> Option<Unitary2> {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let h = c(FRAC_1_SQRT_2, 0.0);
    let m = match name {
        "X" => [z, one, one, z],
        "Y" => [z, -i, i, z],
        "Z" => [one, z, z, -one],
        "H" => [h, h, h, -h],
        "T" => [one, z, z, Complex64::from_polar(1.0, FRAC_PI_4)],
        "iX" => [z, i, i, z],
        "iY" => [z, one, -one, z],
        "iZ" => [i, z, z, -i],
        "-iX" => [z, -i, -i, z],
        _ => return None,
    };
    Some(Unitary2::new(m[0], m[1], m[2], m[3]).expect("named gates are unitary"))
}

fn reals(text: &str, want: usize, what: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidInput(format!("{what}: expected {want} numbers, got {text:?}")))?;
    if v.len() != want {
        return Err(Error::InvalidInput(format!(
            "{what}: expected {want} numbers, got {}",
            v.len()
        )));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("{what}: non-finite value")));
    }
    Ok(v)
}

pub fn parse_gate(spec: &str) -> Result<Unitary2> {
    let spec = spec.trim();
    if let Some(u) = named(spec) {
        return Ok(u);
    }
    if let Some(rest) = spec.strip_prefix("matrix:") {
        let v = reals(rest, 8, "matrix")?;
        return Unitary2::new(c(v[0], v[1]), c(v[2], v[3]), c(v[4], v[5]), c(v[6], v[7]));
    }
    if let Some(rest) = spec.strip_prefix("axis:") {
        let (axis, angle) = rest
            .rsplit_once(':')
            .ok_or_else(|| Error::InvalidInput("axis: expected axis:nx,ny,nz:theta".into()))?;
        let n = reals(axis, 3, "axis")?;
        let theta: f64 = angle
            .trim()
            .parse()
            .ok()
            .filter(|t: &f64| t.is_finite())
            .ok_or_else(|| Error::InvalidInput(format!("axis: bad angle {angle:?}")))?;
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "axis: not a unit vector (norm {norm})"
            )));
        }
        let (s, co) = (theta / 2.0).sin_cos();
        let (x, y, zz) = (n[0] * s, n[1] * s, n[2] * s);
        return Unitary2::new(c(co, -zz), c(-y, -x), c(y, -x), c(co, zz));
    }
    Err(Error::InvalidInput(format!(
        "unknown gate {spec:?}; use one of {}, matrix:..., or axis:...",
        NAMES.join(", ")
    )))
}
