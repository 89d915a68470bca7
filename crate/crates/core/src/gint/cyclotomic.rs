use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::gaussian::GaussianInt;
use crate::error::{Error, Result};

/// Degree of `Q(ζ16)` over `Q`.
pub const DEGREE: usize = 8;

/// An element of the cyclotomic field `Q(ζ)`, `ζ = e^{iπ/8}`, stored in the power basis
/// `1, ζ, …, ζ⁷` (`ζ⁸ = −1`).
///
/// `Q(i)` is the subfield spanned by `1` and `ζ⁴ = i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactScalar {
    coeffs: [BigRational; DEGREE],
}

fn zero_coeffs() -> [BigRational; DEGREE] {
    std::array::from_fn(|_| BigRational::zero())
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Default for ExactScalar {
    fn default() -> Self {
        ExactScalar::zero()
    }
}

impl ExactScalar {
    pub fn from_coeffs(coeffs: [BigRational; DEGREE]) -> Self {
        ExactScalar { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational; DEGREE] {
        &self.coeffs
    }

    pub fn zero() -> Self {
        ExactScalar {
            coeffs: zero_coeffs(),
        }
    }

    pub fn one() -> Self {
        ExactScalar::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut coeffs = zero_coeffs();
        coeffs[0] = q;
        ExactScalar { coeffs }
    }

    pub fn from_int(n: i64) -> Self {
        ExactScalar::from_rational(BigRational::from_integer(n.into()))
    }

    /// `re + im·i` with rational parts.
    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        let mut coeffs = zero_coeffs();
        coeffs[0] = re;
        coeffs[4] = im;
        ExactScalar { coeffs }
    }

    /// `(re_n/re_d) + (im_n/im_d)·i`.
    pub fn gaussian_ratio(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> Self {
        ExactScalar::gaussian(ratio(re_n, re_d), ratio(im_n, im_d))
    }

    pub fn from_gaussian_int(z: &GaussianInt) -> Self {
        ExactScalar::gaussian(
            BigRational::from_integer(z.re.clone()),
            BigRational::from_integer(z.im.clone()),
        )
    }

    pub fn i() -> Self {
        ExactScalar::zeta_pow(4)
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(k: i64) -> Self {
        let k = k.rem_euclid(16) as usize;
        let mut coeffs = zero_coeffs();
        if k < DEGREE {
            coeffs[k] = BigRational::one();
        } else {
            coeffs[k - DEGREE] = -BigRational::one();
        }
        ExactScalar { coeffs }
    }

    /// `cos(π/8) = (ζ − ζ⁷)/2`.
    pub fn cos_pi_8() -> Self {
        let mut coeffs = zero_coeffs();
        coeffs[1] = ratio(1, 2);
        coeffs[7] = ratio(-1, 2);
        ExactScalar { coeffs }
    }

    /// `sin(π/8) = (ζ³ − ζ⁵)/2`.
    pub fn sin_pi_8() -> Self {
        let mut coeffs = zero_coeffs();
        coeffs[3] = ratio(1, 2);
        coeffs[5] = ratio(-1, 2);
        ExactScalar { coeffs }
    }

    /// `√2 = ζ² − ζ⁶`.
    pub fn sqrt2() -> Self {
        let mut coeffs = zero_coeffs();
        coeffs[2] = BigRational::one();
        coeffs[6] = -BigRational::one();
        ExactScalar { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// `true` iff the element lies in `Q(i)`.
    pub fn is_gaussian(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| k == 0 || k == 4 || c.is_zero())
    }

    /// `true` iff the element lies in `Z[i]`.
    pub fn is_gaussian_integer(&self) -> bool {
        self.is_gaussian() && self.coeffs[0].is_integer() && self.coeffs[4].is_integer()
    }

    /// Real and imaginary parts of a `Q(i)` element.
    pub fn gaussian_parts(&self) -> Option<(&BigRational, &BigRational)> {
        self.is_gaussian()
            .then(|| (&self.coeffs[0], &self.coeffs[4]))
    }

    pub fn to_gaussian_int(&self) -> Option<GaussianInt> {
        if !self.is_gaussian_integer() {
            return None;
        }
        Some(GaussianInt::new(
            self.coeffs[0].to_integer(),
            self.coeffs[4].to_integer(),
        ))
    }

    /// `|x|²` for an element of `Q(i)`.
    pub fn gaussian_abs_sq(&self) -> Option<BigRational> {
        let (re, im) = self.gaussian_parts()?;
        Some(re * re + im * im)
    }

    /// The element as a rational, if it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    /// lcm of the denominators of all eight coordinates.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Complex conjugation, `ζ ↦ ζ⁻¹ = −ζ⁷`.
    pub fn conj(&self) -> Self {
        let mut coeffs = zero_coeffs();
        coeffs[0] = self.coeffs[0].clone();
        for k in 1..DEGREE {
            coeffs[DEGREE - k] = -&self.coeffs[k];
        }
        ExactScalar { coeffs }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        ExactScalar {
            coeffs: std::array::from_fn(|k| &self.coeffs[k] * q),
        }
    }

    /// Multiplies by `ζ^k`.
    pub fn mul_zeta_pow(&self, k: i64) -> Self {
        let k = k.rem_euclid(16) as usize;
        let mut coeffs = zero_coeffs();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = (j + k) % 16;
            if t < DEGREE {
                coeffs[t] = c.clone();
            } else {
                coeffs[t - DEGREE] = -c;
            }
        }
        ExactScalar { coeffs }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some((re, im)) = self.gaussian_parts() {
            let n = re * re + im * im;
            return Ok(ExactScalar::gaussian(re / &n, -(im / &n)));
        }
        // Solve M·y = e0 where column j of M holds x·ζ^j.
        let mut m: Vec<Vec<BigRational>> = vec![zero_coeffs().to_vec(); DEGREE];
        for j in 0..DEGREE {
            let col = self.mul_zeta_pow(j as i64);
            for (row, c) in col.coeffs.into_iter().enumerate() {
                m[row][j] = c;
            }
        }
        let mut rhs = zero_coeffs().to_vec();
        rhs[0] = BigRational::one();
        let y = solve_rational(m, rhs).ok_or(Error::DivisionByZero)?;
        let mut coeffs = zero_coeffs();
        for (k, v) in y.into_iter().enumerate() {
            coeffs[k] = v;
        }
        Ok(ExactScalar { coeffs })
    }

    pub fn div(&self, rhs: &ExactScalar) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// Evaluates at `ζ = e^{iπ/8}` in double precision.
    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| zeta_float(k) * rational_to_f64(c))
            .sum()
    }

    /// The eight coordinates as `"p/q"` strings.
    pub fn to_strings(&self) -> [String; DEGREE] {
        std::array::from_fn(|k| format_rational(&self.coeffs[k]))
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        if items.len() != DEGREE {
            return Err(Error::InvalidInput(format!(
                "exact scalar needs {DEGREE} coordinates, got {}",
                items.len()
            )));
        }
        let mut coeffs = zero_coeffs();
        for (k, s) in items.iter().enumerate() {
            coeffs[k] = parse_rational(s.as_ref())?;
        }
        Ok(ExactScalar { coeffs })
    }
}

fn zeta_float(k: usize) -> Complex64 {
    Complex64::from_polar(1.0, k as f64 * std::f64::consts::PI / 8.0)
}

fn rational_to_f64(q: &BigRational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale down huge numerators/denominators before dividing
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// `"p/q"` in lowest terms (denominator always written).
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"` or `"p"`; the result is reduced.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = |e: String| Error::InvalidInput(format!("bad rational {s:?}: {e}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|e| bad(format!("{e}")))?;
    let d: BigInt = d.parse().map_err(|e| bad(format!("{e}")))?;
    if d.is_zero() {
        return Err(bad("zero denominator".into()));
    }
    Ok(BigRational::new(n, d))
}

/// Gauss-Jordan over `Q`; `None` if singular.
fn solve_rational(
    mut m: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        b.swap(col, p);
        let inv = m[col][col].recip();
        for j in col..n {
            m[col][j] = &m[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in col..n {
                let t = &f * &m[col][j];
                m[r][j] -= t;
            }
            let t = &f * &b[col];
            b[r] -= t;
        }
    }
    Some(b)
}

impl Add<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            coeffs: std::array::from_fn(|k| {
                if rhs.coeffs[k].is_zero() {
                    self.coeffs[k].clone()
                } else {
                    &self.coeffs[k] + &rhs.coeffs[k]
                }
            }),
        }
    }
}

impl Sub<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            coeffs: std::array::from_fn(|k| {
                if rhs.coeffs[k].is_zero() {
                    self.coeffs[k].clone()
                } else {
                    &self.coeffs[k] - &rhs.coeffs[k]
                }
            }),
        }
    }
}

impl Mul<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        let mut coeffs = zero_coeffs();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let p = a * b;
                if i + j < DEGREE {
                    coeffs[i + j] += p;
                } else {
                    coeffs[i + j - DEGREE] -= p;
                }
            }
        }
        ExactScalar { coeffs }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            coeffs: std::array::from_fn(|k| -&self.coeffs[k]),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "ζ^{k}")?,
                _ => write!(f, "{mag}·ζ^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        ExactScalar::from_strings(&items).map_err(serde::de::Error::custom)
    }
}
