use num_traits::ToPrimitive;

use crate::gint::{ExactScalar, GaussianInt};

/// An integral domain for fraction-free elimination. Operations return `None` on
/// overflow so fixed-width implementations can defer to an arbitrary-precision one.
pub trait BareissRing: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// `a·b − c·d`.
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self>;
    /// `self / d`, known to be exact.
    fn exact_div(&self, d: &Self) -> Option<Self>;
}

impl BareissRing for GaussianInt {
    fn zero() -> Self {
        GaussianInt::zero()
    }

    fn one() -> Self {
        GaussianInt::one()
    }

    fn is_zero(&self) -> bool {
        GaussianInt::is_zero(self)
    }

    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
        Some(&(a * b) - &(c * d))
    }

    fn exact_div(&self, d: &Self) -> Option<Self> {
        Some(self.checked_div(d).expect("Bareiss division is exact"))
    }
}

impl BareissRing for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }

    fn one() -> Self {
        ExactScalar::one()
    }

    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }

    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
        Some(&(a * b) - &(c * d))
    }

    fn exact_div(&self, d: &Self) -> Option<Self> {
        self.div(d).ok()
    }
}

/// A Gaussian integer with checked `i128` parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallGauss {
    pub re: i128,
    pub im: i128,
}

impl SmallGauss {
    pub fn from_gaussian(z: &GaussianInt) -> Option<Self> {
        Some(SmallGauss {
            re: z.re.to_i64()? as i128,
            im: z.im.to_i64()? as i128,
        })
    }

    fn mul(&self, o: &Self) -> Option<Self> {
        Some(SmallGauss {
            re: self
                .re
                .checked_mul(o.re)?
                .checked_sub(self.im.checked_mul(o.im)?)?,
            im: self
                .re
                .checked_mul(o.im)?
                .checked_add(self.im.checked_mul(o.re)?)?,
        })
    }
}

impl BareissRing for SmallGauss {
    fn zero() -> Self {
        SmallGauss { re: 0, im: 0 }
    }

    fn one() -> Self {
        SmallGauss { re: 1, im: 0 }
    }

    fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
        let (x, y) = (a.mul(b)?, c.mul(d)?);
        Some(SmallGauss {
            re: x.re.checked_sub(y.re)?,
            im: x.im.checked_sub(y.im)?,
        })
    }

    fn exact_div(&self, d: &Self) -> Option<Self> {
        let num = self.mul(&SmallGauss {
            re: d.re,
            im: -d.im,
        })?;
        let norm =
            d.re.checked_mul(d.re)?
                .checked_add(d.im.checked_mul(d.im)?)?;
        debug_assert!(num.re % norm == 0 && num.im % norm == 0);
        Some(SmallGauss {
            re: num.re / norm,
            im: num.im / norm,
        })
    }
}

/// Pivot columns of the matrix whose columns are `cols` (each of equal length), found by
/// fraction-free forward elimination with first-nonzero pivoting. `None` on overflow.
pub fn pivot_columns<R: BareissRing>(cols: &[&[R]]) -> Option<Vec<usize>> {
    let m = cols.len();
    let d = cols.first().map_or(0, |c| c.len());
    // row-major copy: d rows × m columns
    let mut a: Vec<Vec<R>> = (0..d)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    let mut prev = R::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..m {
        if r == d {
            break;
        }
        let Some(p) = (r..d).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..d {
            for j in c + 1..m {
                let t = R::mul_sub(&a[r][c], &a[i][j], &a[i][c], &a[r][j])?;
                a[i][j] = t.exact_div(&prev)?;
            }
        }
        for row in a.iter_mut().skip(r + 1) {
            row[c] = R::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Some(pivots)
}

pub fn rank<R: BareissRing>(cols: &[&[R]]) -> Option<usize> {
    pivot_columns(cols).map(|p| p.len())
}

/// `true` iff the last column lies in the span of the others.
pub fn last_in_span<R: BareissRing>(cols: &[&[R]]) -> Option<bool> {
    let last = cols.len().checked_sub(1)?;
    pivot_columns(cols).map(|p| p.last() != Some(&last))
}
