use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Gaussian integer `re + im·i` with arbitrary-precision parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

/// One of the four units `i^k` of `Z[i]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Unit(u8);

impl Unit {
    pub const ONE: Unit = Unit(0);
    pub const I: Unit = Unit(1);
    pub const MINUS_ONE: Unit = Unit(2);
    pub const MINUS_I: Unit = Unit(3);

    /// The unit `i^k`, with `k` taken mod 4.
    pub fn from_power(k: i64) -> Self {
        Unit(k.rem_euclid(4) as u8)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn inverse(self) -> Self {
        Unit((4 - self.0) % 4)
    }

    pub fn to_gaussian(self) -> GaussianInt {
        match self.0 {
            0 => GaussianInt::from_i64(1, 0),
            1 => GaussianInt::from_i64(0, 1),
            2 => GaussianInt::from_i64(-1, 0),
            _ => GaussianInt::from_i64(0, -1),
        }
    }
}

impl Mul for Unit {
    type Output = Unit;
    fn mul(self, rhs: Unit) -> Unit {
        Unit((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["1", "i", "-1", "-i"][self.0 as usize])
    }
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        GaussianInt::new(re, im)
    }

    pub fn zero() -> Self {
        GaussianInt::default()
    }

    pub fn one() -> Self {
        GaussianInt::from_i64(1, 0)
    }

    pub fn i() -> Self {
        GaussianInt::from_i64(0, 1)
    }

    /// `1 + i`, the unique prime above 2 (up to units).
    pub fn one_plus_i() -> Self {
        GaussianInt::from_i64(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// `re² + im²`.
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        GaussianInt {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn times_unit(&self, u: Unit) -> Self {
        match u.power() {
            0 => self.clone(),
            1 => GaussianInt::new(-&self.im, self.re.clone()),
            2 => -self,
            _ => GaussianInt::new(self.im.clone(), -&self.re),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = GaussianInt::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Euclidean division `a = q·b + r` with `norm(r) < norm(b)`.
    ///
    /// The quotient rounds each part of `a/b` to the nearest integer, ties toward −∞.
    pub fn divmod(&self, b: &GaussianInt) -> Result<(GaussianInt, GaussianInt)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = b.norm();
        let num = self * &b.conj();
        let q = GaussianInt {
            re: round_half_down(&num.re, &n),
            im: round_half_down(&num.im, &n),
        };
        let r = self - &(&q * b);
        Ok((q, r))
    }

    /// Exact quotient `self / b`, or `None` if `b` does not divide `self`.
    pub fn checked_div(&self, b: &GaussianInt) -> Option<GaussianInt> {
        let (q, r) = self.divmod(b).ok()?;
        r.is_zero().then_some(q)
    }

    /// Writes `self = u·a'` with `a'` in the first quadrant (`re > 0`, `im ≥ 0`).
    pub fn unit_canonicalize(&self) -> Result<(Unit, GaussianInt)> {
        if self.is_zero() {
            return Err(Error::ZeroInput("unit_canonicalize"));
        }
        for k in 0..4 {
            let u = Unit::from_power(k);
            let rotated = self.times_unit(u.inverse());
            if rotated.re.is_positive() && !rotated.im.is_negative() {
                return Ok((u, rotated));
            }
        }
        unreachable!("every nonzero Gaussian integer has a first-quadrant associate")
    }

    /// The first-quadrant associate of `self`; zero maps to zero.
    pub fn canonical(&self) -> GaussianInt {
        match self.unit_canonicalize() {
            Ok((_, a)) => a,
            Err(_) => GaussianInt::zero(),
        }
    }

    /// `true` iff `self` divides `a`.
    pub fn divides(&self, a: &GaussianInt) -> Result<bool> {
        let (_, r) = a.divmod(self)?;
        Ok(r.is_zero())
    }
}

fn round_half_down(p: &BigInt, n: &BigInt) -> BigInt {
    // ceil((2p - n) / 2n) for n > 0
    let two_n: BigInt = n * 2;
    let t: BigInt = p * 2 - n;
    -((-t).div_floor(&two_n))
}

/// Greatest common divisor in its first-quadrant orientation.
pub fn gcd(a: &GaussianInt, b: &GaussianInt) -> Result<GaussianInt> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdOfZeros);
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = x.divmod(&y)?;
        x = y;
        y = r;
    }
    Ok(x.canonical())
}

/// Extended Euclid: returns `(g, s, t)` with `s·a + t·b = g = gcd(a, b)` (canonical `g`).
pub fn xgcd(a: &GaussianInt, b: &GaussianInt) -> Result<(GaussianInt, GaussianInt, GaussianInt)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdOfZeros);
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (GaussianInt::one(), GaussianInt::zero());
    let (mut t0, mut t1) = (GaussianInt::zero(), GaussianInt::one());
    while !r1.is_zero() {
        let (q, r) = r0.divmod(&r1)?;
        r0 = std::mem::replace(&mut r1, r);
        let s = &s0 - &(&q * &s1);
        s0 = std::mem::replace(&mut s1, s);
        let t = &t0 - &(&q * &t1);
        t0 = std::mem::replace(&mut t1, t);
    }
    let (u, g) = r0.unit_canonicalize()?;
    let inv = u.inverse();
    Ok((g, s0.times_unit(inv), t0.times_unit(inv)))
}

/// gcd of a non-empty list; zero entries are ignored unless all entries are zero.
pub fn gcd_many<'a, I>(items: I) -> Result<GaussianInt>
where
    I: IntoIterator<Item = &'a GaussianInt>,
{
    let mut acc: Option<GaussianInt> = None;
    for a in items {
        if a.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => a.canonical(),
            Some(g) if g.is_unit() => return Ok(g),
            Some(g) => gcd(&g, a)?,
        });
    }
    acc.ok_or(Error::GcdOfZeros)
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Serialize for GaussianInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GaussianInt", 2)?;
        st.serialize_field("re", &self.re.to_string())?;
        st.serialize_field("im", &self.im.to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for GaussianInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            re: String,
            im: String,
        }
        let raw = Raw::deserialize(d)?;
        let parse = |s: &str| {
            s.trim()
                .parse::<BigInt>()
                .map_err(|e| serde::de::Error::custom(format!("bad integer {s:?}: {e}")))
        };
        Ok(GaussianInt {
            re: parse(&raw.re)?,
            im: parse(&raw.im)?,
        })
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&GaussianInt> for &GaussianInt {
            type Output = GaussianInt;
            fn $method(self, rhs: &GaussianInt) -> GaussianInt {
                let f: fn(&GaussianInt, &GaussianInt) -> GaussianInt = $body;
                f(self, rhs)
            }
        }
        impl $tr<GaussianInt> for GaussianInt {
            type Output = GaussianInt;
            fn $method(self, rhs: GaussianInt) -> GaussianInt {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&GaussianInt> for GaussianInt {
            type Output = GaussianInt;
            fn $method(self, rhs: &GaussianInt) -> GaussianInt {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussianInt {
    re: &a.re + &b.re,
    im: &a.im + &b.im
});
forward_binop!(Sub, sub, |a, b| GaussianInt {
    re: &a.re - &b.re,
    im: &a.im - &b.im
});
forward_binop!(Mul, mul, |a, b| GaussianInt {
    re: &a.re * &b.re - &a.im * &b.im,
    im: &a.re * &b.im + &a.im * &b.re
});

impl AddAssign<&GaussianInt> for GaussianInt {
    fn add_assign(&mut self, rhs: &GaussianInt) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        -&self
    }
}
