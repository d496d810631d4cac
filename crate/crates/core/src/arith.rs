//! Integer arithmetic: factorization, divisors, the Möbius function and
//! exact rationals.
//!
//! Arguments `n` are machine integers (`u64`); every quantity that grows
//! with powers of `n` is carried as a [`BigInt`] or [`Rational`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always stored in lowest terms.
pub type Rational = BigRational;

/// Trial division handles every prime below this bound.
const TRIAL_DIVISION_LIMIT: u64 = 1 << 20;

/// A positive integer together with its canonical prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactoredInteger {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn new(n: u64) -> Result<Self> {
        factorize(n)
    }

    pub fn one() -> Self {
        FactoredInteger {
            value: 1,
            factors: Vec::new(),
        }
    }

    /// Builds from `(prime, exponent)` pairs. Zero exponents are dropped and
    /// the pairs are sorted; primality is checked.
    pub fn from_factors(factors: impl IntoIterator<Item = (u64, u32)>) -> Result<Self> {
        let mut list: Vec<(u64, u32)> = factors.into_iter().filter(|&(_, e)| e > 0).collect();
        list.sort_unstable();
        let mut merged: Vec<(u64, u32)> = Vec::with_capacity(list.len());
        for (p, e) in list {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        let value = merged
            .iter()
            .fold(1u64, |acc, &(p, e)| acc * p.pow(e));
        Ok(FactoredInteger {
            value,
            factors: merged,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Exponent of `p` in this integer (0 if `p` does not divide it).
    pub fn exponent(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn divides(&self, n: u64) -> bool {
        n % self.value == 0
    }

    /// `self / d`, assuming `d` divides `self`.
    pub fn quotient(&self, d: &FactoredInteger) -> FactoredInteger {
        debug_assert!(self.value % d.value == 0);
        let factors = self
            .factors
            .iter()
            .filter_map(|&(p, e)| {
                let f = e - d.exponent(p);
                (f > 0).then_some((p, f))
            })
            .collect();
        FactoredInteger {
            value: self.value / d.value,
            factors,
        }
    }

    /// `self / m` for a plain integer divisor `m`.
    pub fn quotient_by(&self, m: u64) -> FactoredInteger {
        debug_assert!(m > 0 && self.value % m == 0);
        let mut factors = Vec::with_capacity(self.factors.len());
        let mut rest = m;
        for &(p, e) in &self.factors {
            let mut f = e;
            while f > 0 && rest % p == 0 {
                rest /= p;
                f -= 1;
            }
            if f > 0 {
                factors.push((p, f));
            }
        }
        FactoredInteger {
            value: self.value / m,
            factors,
        }
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Factors `n` by trial division up to 2^20 followed by Pollard's rho with
/// a deterministic Miller–Rabin test on the cofactors.
pub fn factorize(n: u64) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut factors = Vec::new();
    let mut rest = n;
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    // 6k ± 1 wheel
    let mut p = 7u64;
    let mut step = 4u64;
    while p < TRIAL_DIVISION_LIMIT && p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += step;
        step = 6 - step;
    }
    if rest > 1 {
        let mut large = Vec::new();
        split_large(rest, &mut large);
        large.sort_unstable();
        for q in large {
            match factors.last_mut() {
                Some((r, e)) if *r == q => *e += 1,
                _ => factors.push((q, 1)),
            }
        }
    }
    Ok(FactoredInteger { value: n, factors })
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    if let Some(r) = exact_sqrt(n) {
        split_large(r, out);
        split_large(r, out);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut result = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    result
}

/// Deterministic Miller–Rabin for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard's rho. `n` must be an odd composite.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let mut ys = y;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn exact_sqrt(n: u64) -> Option<u64> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

/// Integer square root, floor.
pub fn isqrt(n: u64) -> u64 {
    n.sqrt()
}

/// The Möbius function μ(n).
pub fn mobius(n: &FactoredInteger) -> i8 {
    if n.is_squarefree() {
        if n.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

/// δ_{d|n}: 1 if `d` divides `n`, else 0.
pub fn delta_divides(d: u64, n: u64) -> u32 {
    debug_assert!(d >= 1);
    u32::from(d != 0 && n % d == 0)
}

/// All positive divisors of `n` in ascending order.
pub fn divisors(n: &FactoredInteger) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, e) in &n.factors {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// All `d >= 1` with `d² | n`, ascending.
pub fn square_divisor_roots(n: &FactoredInteger) -> Vec<u64> {
    let halved = FactoredInteger {
        value: n
            .factors
            .iter()
            .fold(1u64, |acc, &(p, e)| acc * p.pow(e / 2)),
        factors: n
            .factors
            .iter()
            .filter(|&&(_, e)| e >= 2)
            .map(|&(p, e)| (p, e / 2))
            .collect(),
    };
    divisors(&halved)
}

/// Largest `e` with `p^e | n`.
pub fn ord_p(p: u64, n: &FactoredInteger) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(n.exponent(p))
}

/// Euler's totient of a factored integer.
pub fn totient(n: &FactoredInteger) -> u64 {
    n.factors
        .iter()
        .fold(1u64, |acc, &(p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// Parses `"p/q"`, `"-p/q"` or an integer literal into a reduced rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::BadRational(text.to_string());
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (trimmed, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Renders a rational as an integer or `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Returns the integer value of `r` if it has denominator 1.
pub fn rational_to_integer(r: &Rational) -> Option<BigInt> {
    r.is_integer().then(|| r.numer().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fac(n: u64) -> FactoredInteger {
        factorize(n).unwrap()
    }

    #[test]
    fn factorize_examples() {
        assert!(fac(1).factors().is_empty());
        assert_eq!(fac(12).factors(), &[(2, 2), (3, 1)]);
        assert_eq!(fac(9973).factors(), &[(9973, 1)]);
        assert_eq!(factorize(0), Err(Error::ZeroArgument));
    }

    #[test]
    fn factorize_large_composites() {
        // 2^20 < both primes, so Pollard's rho does the work.
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        assert_eq!(fac(p * q).factors(), &[(p, 1), (q, 1)]);
        assert_eq!(fac(p * p).factors(), &[(p, 2)]);
        let n = 2u64.pow(5) * 3 * 4_294_967_311;
        assert_eq!(fac(n).factors(), &[(2, 5), (3, 1), (4_294_967_311, 1)]);
        assert_eq!(fac(u64::MAX).value(), u64::MAX);
        let prod: u64 = fac(u64::MAX)
            .factors()
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product();
        assert_eq!(prod, u64::MAX);
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(&fac(1)), 1);
        assert_eq!(mobius(&fac(12)), 0);
        assert_eq!(mobius(&fac(30)), -1);
        assert_eq!(mobius(&fac(6)), 1);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_divides(4, 12), 1);
        assert_eq!(delta_divides(8, 12), 0);
        for n in 0..20 {
            assert_eq!(delta_divides(1, n), 1);
        }
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors(&fac(1)), vec![1]);
        assert_eq!(divisors(&fac(12)), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(&fac(97)), vec![1, 97]);
    }

    #[test]
    fn square_divisor_examples() {
        assert_eq!(square_divisor_roots(&fac(12)), vec![1, 2]);
        assert_eq!(square_divisor_roots(&fac(30)), vec![1]);
        assert_eq!(square_divisor_roots(&fac(144)), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn ord_p_examples() {
        assert_eq!(ord_p(2, &fac(12)), Ok(2));
        assert_eq!(ord_p(5, &fac(12)), Ok(0));
        assert_eq!(ord_p(3, &fac(81)), Ok(4));
        assert_eq!(ord_p(4, &fac(12)), Err(Error::NotPrime(4)));
    }

    #[test]
    fn quotients() {
        let n = fac(360);
        assert_eq!(n.quotient(&fac(12)), fac(30));
        assert_eq!(n.quotient_by(36), fac(10));
        assert_eq!(n.quotient_by(360), FactoredInteger::one());
    }

    #[test]
    fn rational_literals() {
        assert_eq!(
            parse_rational("7/2").unwrap(),
            Rational::new(7.into(), 2.into())
        );
        assert_eq!(parse_rational("-32").unwrap(), Rational::from_integer((-32).into()));
        assert_eq!(
            parse_rational("4/6").unwrap(),
            Rational::new(2.into(), 3.into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&parse_rational("-8/3").unwrap()), "-8/3");
        assert_eq!(format_rational(&parse_rational("10/5").unwrap()), "2");
    }

    #[test]
    fn from_factors_checks_primes() {
        assert_eq!(
            FactoredInteger::from_factors([(3, 1), (2, 2)]).unwrap(),
            fac(12)
        );
        assert_eq!(
            FactoredInteger::from_factors([(4, 1)]),
            Err(Error::NotPrime(4))
        );
    }
}
