//! Scalars for character arithmetic.
//!
//! Character values are exact roots of unity. Sums of them are exact
//! Gaussian rationals as long as every root involved has order dividing 4;
//! anything else falls back to `f64` complex numbers that carry a running
//! absolute error bound.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Rational;

/// `e^{2πi k/m}` with `0 <= k < m` and `gcd(k, m) = 1` (or `k = 0, m = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    k: u64,
    m: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { k: 0, m: 1 };
    pub const MINUS_ONE: RootOfUnity = RootOfUnity { k: 1, m: 2 };

    pub fn new(k: u64, m: u64) -> Self {
        assert!(m > 0, "root of unity needs a positive order");
        let k = k % m;
        if k == 0 {
            return Self::ONE;
        }
        let g = k.gcd(&m);
        RootOfUnity { k: k / g, m: m / g }
    }

    pub fn numerator(&self) -> u64 {
        self.k
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn is_one(&self) -> bool {
        self.k == 0
    }

    pub fn conj(&self) -> Self {
        RootOfUnity::new(self.m - self.k, self.m)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let l = self.m.lcm(&other.m);
        RootOfUnity::new(self.k * (l / self.m) + other.k * (l / other.m), l)
    }

    pub fn pow(&self, e: u64) -> Self {
        let k = (self.k as u128 * e as u128 % self.m as u128) as u64;
        RootOfUnity::new(k, self.m)
    }

    pub fn to_complex(&self) -> Complex64 {
        match (self.k, self.m) {
            (0, 1) => Complex64::new(1.0, 0.0),
            (1, 2) => Complex64::new(-1.0, 0.0),
            (1, 4) => Complex64::new(0.0, 1.0),
            (3, 4) => Complex64::new(0.0, -1.0),
            (k, m) => Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / m as f64),
        }
    }

    /// `(re, im)` when the root is one of `1, i, -1, -i`.
    pub fn as_gaussian_unit(&self) -> Option<(i8, i8)> {
        match (self.k, self.m) {
            (0, 1) => Some((1, 0)),
            (1, 4) => Some((0, 1)),
            (1, 2) => Some((-1, 0)),
            (3, 4) => Some((0, -1)),
            _ => None,
        }
    }

    /// Position of this root among `1, i, -1, -i`.
    pub fn quarter_turns(&self) -> Option<u8> {
        match (self.k, self.m) {
            (0, 1) => Some(0),
            (1, 4) => Some(1),
            (1, 2) => Some(2),
            (3, 4) => Some(3),
            _ => None,
        }
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_gaussian_unit() {
            Some((1, 0)) => write!(f, "1"),
            Some((-1, 0)) => write!(f, "-1"),
            Some((0, 1)) => write!(f, "i"),
            Some((0, -1)) => write!(f, "-i"),
            _ => write!(f, "e(2πi·{}/{})", self.k, self.m),
        }
    }
}

/// Minimal field interface shared by the exact and approximate regimes.
pub trait Field: Clone + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    fn from_rational(v: &Rational) -> Self;
    /// Panics in the exact regime if the root's order does not divide 4.
    fn from_root(r: &RootOfUnity) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn from_i64(v: i64) -> Self {
        Self::from_bigint(&BigInt::from(v))
    }

    fn from_u64(v: u64) -> Self {
        Self::from_bigint(&BigInt::from(v))
    }

    fn from_char_value(v: Option<RootOfUnity>) -> Self {
        v.map_or_else(Self::zero, |r| Self::from_root(&r))
    }

    fn neg(&self) -> Self {
        Self::zero().sub(self)
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// `re + i·im` with exact rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_gaussian_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Field for GaussianRational {
    fn zero() -> Self {
        Self::real(Rational::zero())
    }
    fn one() -> Self {
        Self::real(Rational::one())
    }
    fn from_bigint(v: &BigInt) -> Self {
        Self::real(Rational::from_integer(v.clone()))
    }
    fn from_rational(v: &Rational) -> Self {
        Self::real(v.clone())
    }
    fn from_root(r: &RootOfUnity) -> Self {
        let (a, b) = r
            .as_gaussian_unit()
            .unwrap_or_else(|| panic!("root of order {} outside the exact regime", r.order()));
        GaussianRational::new(
            Rational::from_integer(a.into()),
            Rational::from_integer(b.into()),
        )
    }
    fn add(&self, o: &Self) -> Self {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn sub(&self, o: &Self) -> Self {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Self::real(&self.re * &o.re);
        }
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    fn div(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "division by zero");
        if o.im.is_zero() {
            return GaussianRational::new(&self.re / &o.re, &self.im / &o.re);
        }
        let n = o.norm();
        let num = self.mul(&o.conj());
        GaussianRational::new(num.re / &n, num.im / n)
    }
    fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -&self.im)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

/// A complex float with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxComplex {
    pub z: Complex64,
    pub err: f64,
}

/// Per-operation rounding allowance.
const ULP_SLACK: f64 = 4.0 * f64::EPSILON;

impl ApproxComplex {
    pub fn exact(z: Complex64) -> Self {
        ApproxComplex { z, err: 0.0 }
    }

    fn rounded(z: Complex64, err: f64) -> Self {
        ApproxComplex {
            z,
            err: err + ULP_SLACK * z.norm(),
        }
    }

    /// True if the disc around `self` of radius `tol + errors` contains `other`.
    pub fn close_to(&self, other: &ApproxComplex, tol: f64) -> bool {
        (self.z - other.z).norm() <= tol + self.err + other.err
    }
}

impl Field for ApproxComplex {
    fn zero() -> Self {
        Self::exact(Complex64::new(0.0, 0.0))
    }
    fn one() -> Self {
        Self::exact(Complex64::new(1.0, 0.0))
    }
    fn from_bigint(v: &BigInt) -> Self {
        let x = v.to_f64().unwrap_or(f64::INFINITY);
        Self::rounded(Complex64::new(x, 0.0), 0.0)
    }
    fn from_rational(v: &Rational) -> Self {
        let x = v.to_f64().unwrap_or(f64::NAN);
        Self::rounded(Complex64::new(x, 0.0), 0.0)
    }
    fn from_root(r: &RootOfUnity) -> Self {
        if r.as_gaussian_unit().is_some() {
            Self::exact(r.to_complex())
        } else {
            Self::rounded(r.to_complex(), 0.0)
        }
    }
    fn add(&self, o: &Self) -> Self {
        Self::rounded(self.z + o.z, self.err + o.err)
    }
    fn sub(&self, o: &Self) -> Self {
        Self::rounded(self.z - o.z, self.err + o.err)
    }
    fn mul(&self, o: &Self) -> Self {
        let err = self.z.norm() * o.err + o.z.norm() * self.err + self.err * o.err;
        Self::rounded(self.z * o.z, err)
    }
    fn div(&self, o: &Self) -> Self {
        let d = o.z.norm();
        assert!(d > o.err, "division by a value indistinguishable from zero");
        let q = self.z / o.z;
        // |a/b - a'/b'| <= (|a| e_b / |b| + e_a) / (|b| - e_b)
        let err = (q.norm() * o.err + self.err) / (d - o.err);
        Self::rounded(q, err)
    }
    fn conj(&self) -> Self {
        ApproxComplex {
            z: self.z.conj(),
            err: self.err,
        }
    }
    fn is_zero(&self) -> bool {
        self.z.norm() == 0.0 && self.err == 0.0
    }
}

/// Plain complex floats without error tracking, for bulk sweeps whose
/// tolerance dwarfs rounding.
impl Field for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_bigint(v: &BigInt) -> Self {
        Complex64::new(v.to_f64().unwrap_or(f64::INFINITY), 0.0)
    }
    fn from_rational(v: &Rational) -> Self {
        Complex64::new(v.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_u64(v: u64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_root(r: &RootOfUnity) -> Self {
        r.to_complex()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

/// A value produced by character arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactScalar {
    Zero,
    Unit(RootOfUnity),
    Gaussian(GaussianRational),
    Approx(ApproxComplex),
}

impl ExactScalar {
    pub fn from_char_value(v: Option<RootOfUnity>) -> Self {
        v.map_or(ExactScalar::Zero, ExactScalar::Unit)
    }

    pub fn from_rational(r: Rational) -> Self {
        if r.is_zero() {
            ExactScalar::Zero
        } else {
            ExactScalar::Gaussian(GaussianRational::real(r))
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            ExactScalar::Zero | ExactScalar::Gaussian(_) => true,
            ExactScalar::Unit(r) => r.as_gaussian_unit().is_some(),
            ExactScalar::Approx(_) => false,
        }
    }

    /// Exact value as a Gaussian rational, if available.
    pub fn to_gaussian(&self) -> Option<GaussianRational> {
        match self {
            ExactScalar::Zero => Some(GaussianRational::zero()),
            ExactScalar::Unit(r) => r
                .as_gaussian_unit()
                .map(|_| GaussianRational::from_root(r)),
            ExactScalar::Gaussian(g) => Some(g.clone()),
            ExactScalar::Approx(_) => None,
        }
    }

    /// Exact rational value, if the scalar is exact and real.
    pub fn to_rational(&self) -> Option<Rational> {
        self.to_gaussian()
            .filter(GaussianRational::is_real)
            .map(|g| g.re)
    }

    pub fn to_approx(&self) -> ApproxComplex {
        match self {
            ExactScalar::Zero => ApproxComplex::zero(),
            ExactScalar::Unit(r) => ApproxComplex::from_root(r),
            ExactScalar::Gaussian(g) => {
                ApproxComplex::from_rational(&g.re).add(&ApproxComplex::from_rational(&g.im).mul(
                    &ApproxComplex::exact(Complex64::new(0.0, 1.0)),
                ))
            }
            ExactScalar::Approx(a) => *a,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        self.to_approx().z
    }

    /// Error bound carried by the value (0 for exact values).
    pub fn error_bound(&self) -> f64 {
        match self {
            ExactScalar::Approx(a) => a.err,
            _ => 0.0,
        }
    }

    /// Exact equality when both sides are exact; otherwise equality up to
    /// `tol` plus the carried error bounds.
    pub fn agrees_with(&self, other: &ExactScalar, tol: f64) -> bool {
        match (self.to_gaussian(), other.to_gaussian()) {
            (Some(a), Some(b)) => a == b,
            _ => self.to_approx().close_to(&other.to_approx(), tol),
        }
    }

    fn normalize(self) -> Self {
        match self {
            ExactScalar::Gaussian(g) if g.is_zero() => ExactScalar::Zero,
            other => other,
        }
    }

    fn combine(
        &self,
        other: &Self,
        exact: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational,
        approx: impl Fn(&ApproxComplex, &ApproxComplex) -> ApproxComplex,
    ) -> Self {
        match (self.to_gaussian(), other.to_gaussian()) {
            (Some(a), Some(b)) => ExactScalar::Gaussian(exact(&a, &b)).normalize(),
            _ => ExactScalar::Approx(approx(&self.to_approx(), &other.to_approx())),
        }
    }
}

impl Field for ExactScalar {
    fn zero() -> Self {
        ExactScalar::Zero
    }
    fn one() -> Self {
        ExactScalar::Unit(RootOfUnity::ONE)
    }
    fn from_bigint(v: &BigInt) -> Self {
        Self::from_rational(Rational::from_integer(v.clone()))
    }
    fn from_rational(v: &Rational) -> Self {
        ExactScalar::from_rational(v.clone())
    }
    fn from_root(r: &RootOfUnity) -> Self {
        ExactScalar::Unit(*r)
    }
    fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (ExactScalar::Zero, x) | (x, ExactScalar::Zero) => x.clone(),
            _ => self.combine(o, GaussianRational::add, ApproxComplex::add),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn neg(&self) -> Self {
        match self {
            ExactScalar::Zero => ExactScalar::Zero,
            ExactScalar::Unit(r) => ExactScalar::Unit(r.mul(&RootOfUnity::MINUS_ONE)),
            ExactScalar::Gaussian(g) => ExactScalar::Gaussian(g.neg()),
            ExactScalar::Approx(a) => ExactScalar::Approx(ApproxComplex {
                z: -a.z,
                err: a.err,
            }),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (ExactScalar::Zero, _) | (_, ExactScalar::Zero) => ExactScalar::Zero,
            (ExactScalar::Unit(a), ExactScalar::Unit(b)) => ExactScalar::Unit(a.mul(b)),
            _ => self.combine(o, GaussianRational::mul, ApproxComplex::mul),
        }
    }
    fn div(&self, o: &Self) -> Self {
        match (self, o) {
            (ExactScalar::Zero, _) => ExactScalar::Zero,
            (ExactScalar::Unit(a), ExactScalar::Unit(b)) => ExactScalar::Unit(a.mul(&b.conj())),
            _ => self.combine(o, GaussianRational::div, ApproxComplex::div),
        }
    }
    fn conj(&self) -> Self {
        match self {
            ExactScalar::Zero => ExactScalar::Zero,
            ExactScalar::Unit(r) => ExactScalar::Unit(r.conj()),
            ExactScalar::Gaussian(g) => ExactScalar::Gaussian(g.conj()),
            ExactScalar::Approx(a) => ExactScalar::Approx(a.conj()),
        }
    }
    fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Zero => true,
            ExactScalar::Unit(_) => false,
            ExactScalar::Gaussian(g) => g.is_zero(),
            ExactScalar::Approx(a) => a.is_zero(),
        }
    }
}

fn fmt_rational(r: &Rational) -> String {
    crate::arith::format_rational(r)
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Zero => write!(f, "0"),
            ExactScalar::Unit(r) if r.as_gaussian_unit().is_some() => write!(f, "{r}"),
            ExactScalar::Gaussian(g) if g.im.is_zero() => write!(f, "{}", fmt_rational(&g.re)),
            ExactScalar::Gaussian(g) => {
                let sign = if g.im.is_negative() { '-' } else { '+' };
                let im = g.im.abs();
                let im = if im.is_one() {
                    String::new()
                } else {
                    fmt_rational(&im)
                };
                if g.re.is_zero() {
                    let lead = if sign == '-' { "-" } else { "" };
                    write!(f, "{lead}{im}i")
                } else {
                    write!(f, "{}{sign}{im}i", fmt_rational(&g.re))
                }
            }
            other => {
                let z = other.to_complex();
                if z.im == 0.0 {
                    write!(f, "{:.6}", z.re)
                } else {
                    write!(f, "{:.6}{:+.6}i", z.re, z.im)
                }
            }
        }
    }
}
