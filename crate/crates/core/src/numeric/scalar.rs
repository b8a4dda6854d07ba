use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::dual::Dual;
use super::matrix::{self, Mat};

/// Exact arbitrary-precision rational number, always reduced with positive denominator.
pub type Rational = BigRational;

/// Relative threshold under which a floating entry is treated as zero during elimination.
pub const ELIMINATION_EPS: f64 = 1e-11;

/// Field of coefficients the geometric routines run over.
///
/// Exact fields ([`Rational`]) make every identity test an exact equality;
/// the floating fields (`f64`, [`Complex64`], [`Dual`]) back the numerical
/// solvers and the automatic derivatives.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic in this field is exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_f64(v: f64) -> Self;
    fn is_zero(&self) -> bool;
    /// Absolute value (modulus for complex numbers, real part for duals).
    fn modulus(&self) -> f64;
    /// Real part as a double.
    fn to_f64(&self) -> f64;
    /// Square root within the field, `None` when it does not exist there.
    fn sqrt_checked(&self) -> Option<Self>;

    /// Zero test relative to a magnitude scale; exact fields ignore the scale.
    fn negligible(&self, scale: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.modulus() <= ELIMINATION_EPS * scale
        }
    }

    /// Puts a homogeneous vector in canonical form (first nonzero coordinate 1).
    fn normalize(v: &mut [Self]) {
        let scale = max_modulus(v);
        if let Some(p) = v.iter().position(|x| !x.negligible(scale)) {
            let pivot = v[p].clone();
            for x in v.iter_mut() {
                *x = x.clone() / pivot.clone();
            }
        }
    }

    fn rank_of(m: &Mat<Self>) -> usize {
        matrix::rref(m).1.len()
    }

    fn kernel_of(m: &Mat<Self>) -> Vec<Vec<Self>> {
        matrix::rref_kernel(m)
    }
}

pub(crate) fn max_modulus<T: Scalar>(v: &[T]) -> f64 {
    v.iter().map(Scalar::modulus).fold(0.0, f64::max)
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).unwrap_or_else(Zero::zero)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn modulus(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn sqrt_checked(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(BigRational::new(n, d))
        } else {
            None
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn modulus(&self) -> f64 {
        self.abs()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sqrt_checked(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn normalize(v: &mut [Self]) {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return;
        }
        let first = v.iter().copied().find(|x| x.abs() > 1e-14 * norm).unwrap_or(1.0);
        let s = first.signum() / norm;
        for x in v.iter_mut() {
            *x *= s;
        }
    }

    fn rank_of(m: &Mat<Self>) -> usize {
        matrix::numerical_rank(m, matrix::RANK_THRESHOLD)
    }

    fn kernel_of(m: &Mat<Self>) -> Vec<Vec<Self>> {
        matrix::svd_kernel(m, matrix::RANK_THRESHOLD)
    }
}

/// Exact complex rational `a + bi`; every `Complex64` converts to one without rounding.
pub type GaussianRational = num_complex::Complex<Rational>;

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        GaussianRational::new(<Rational as Scalar>::zero(), <Rational as Scalar>::zero())
    }
    fn one() -> Self {
        GaussianRational::new(<Rational as Scalar>::one(), <Rational as Scalar>::zero())
    }
    fn from_i64(v: i64) -> Self {
        GaussianRational::new(Rational::from_integer(BigInt::from(v)), <Rational as Scalar>::zero())
    }
    fn from_f64(v: f64) -> Self {
        GaussianRational::new(<Rational as Scalar>::from_f64(v), <Rational as Scalar>::zero())
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(&self.re) && Scalar::is_zero(&self.im)
    }
    fn modulus(&self) -> f64 {
        Scalar::modulus(&self.re).hypot(Scalar::modulus(&self.im))
    }
    fn to_f64(&self) -> f64 {
        Scalar::to_f64(&self.re)
    }
    /// Only square roots of nonnegative rational squares are found.
    fn sqrt_checked(&self) -> Option<Self> {
        if !Scalar::is_zero(&self.im) {
            return None;
        }
        self.re
            .sqrt_checked()
            .map(|r| GaussianRational::new(r, <Rational as Scalar>::zero()))
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn to_f64(&self) -> f64 {
        self.re
    }
    fn sqrt_checked(&self) -> Option<Self> {
        Some(self.sqrt())
    }

    fn normalize(v: &mut [Self]) {
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return;
        }
        let first = v
            .iter()
            .copied()
            .find(|x| x.norm() > 1e-14 * norm)
            .unwrap_or(Complex64::new(1.0, 0.0));
        let s = first.conj() / (first.norm() * norm);
        for x in v.iter_mut() {
            *x *= s;
        }
    }
}

impl Scalar for Dual {
    const EXACT: bool = false;

    fn zero() -> Self {
        Dual::constant(0.0)
    }
    fn one() -> Self {
        Dual::constant(1.0)
    }
    fn from_i64(v: i64) -> Self {
        Dual::constant(v as f64)
    }
    fn from_f64(v: f64) -> Self {
        Dual::constant(v)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.eps == 0.0
    }
    fn modulus(&self) -> f64 {
        self.re.abs()
    }
    fn to_f64(&self) -> f64 {
        self.re
    }
    fn sqrt_checked(&self) -> Option<Self> {
        (self.re > 0.0).then(|| {
            let r = self.re.sqrt();
            Dual::new(r, self.eps / (2.0 * r))
        })
    }
}

/// Converts an exact rational to the target field.
pub fn from_rational<T: Scalar>(q: &Rational) -> T {
    if T::EXACT {
        rational_to::<T>(q)
    } else {
        T::from_f64(Scalar::to_f64(q))
    }
}

fn rational_to<T: Scalar>(q: &Rational) -> T {
    big_to::<T>(q.numer()) / big_to::<T>(q.denom())
}

fn big_to<T: Scalar>(n: &BigInt) -> T {
    // Horner in base 2^32 keeps arbitrary size integers exact.
    let (sign, digits) = n.to_u32_digits();
    let base = T::from_i64(1 << 32);
    let mut acc = T::zero();
    for d in digits.iter().rev() {
        acc = acc * base.clone() + T::from_i64(*d as i64);
    }
    if sign == num_bigint::Sign::Minus {
        -acc
    } else {
        acc
    }
}

/// Builds a rational from an integer numerator and denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds an integral rational.
pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Serializes a rational as `"p/q"`.
pub fn rational_to_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}
