//! Arithmetic in `F_p` for primes `p ≡ 1 (mod L)`, `L = lcm(1, …, 40)`, so
//! every root of unity of order `<= 40` has an image `ω^{kL/m}`. Reduction
//! `ℤ[ζ_L][1/M] → F_p` is a ring map whenever `p ∤ M`, which lets exact
//! cyclotomic identities be tested with word-sized arithmetic.
//!
//! Elements are kept in Montgomery form (`R = 2^64`); `p < 2^62` keeps every
//! intermediate below `2^127`.

use std::cell::RefCell;
use std::fmt;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rustc_hash::FxHashMap;

use crate::arith::Rational;
use crate::scalar::{Field, RootOfUnity};

/// `lcm(1, …, 40)`.
pub(crate) const ROOT_ORDER: u64 = 5_342_931_457_063_200;

pub(crate) trait Modulus: Copy + Eq + fmt::Debug + 'static {
    const P: u64;
    /// A primitive `ROOT_ORDER`-th root of unity mod `P` (plain residue).
    const OMEGA: u64;
    const NAME: &'static str;
    const INDEX: usize;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct P0;
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct P1;

impl Modulus for P0 {
    const P: u64 = 4_568_206_395_789_036_001;
    const OMEGA: u64 = 712_856_769_781_947_765;
    const NAME: &'static str = "p0";
    const INDEX: usize = 0;
}

impl Modulus for P1 {
    const P: u64 = 4_514_777_081_218_404_001;
    const OMEGA: u64 = 2_019_799_645_426_650_219;
    const NAME: &'static str = "p1";
    const INDEX: usize = 1;
}

/// `-p⁻¹ mod 2^64` by Newton iteration.
const fn neg_inverse(p: u64) -> u64 {
    let mut x: u64 = 1;
    let mut i = 0;
    while i < 6 {
        x = x.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(x)));
        i += 1;
    }
    x.wrapping_neg()
}

const fn r2(p: u64) -> u64 {
    let r = (1u128 << 64) % p as u128;
    ((r * r) % p as u128) as u64
}

thread_local! {
    static INVERSES: RefCell<FxHashMap<(usize, u64), u64>> = RefCell::new(FxHashMap::default());
}

struct Consts<M>(PhantomData<M>);

impl<M: Modulus> Consts<M> {
    const NINV: u64 = neg_inverse(M::P);
    const R2: u64 = r2(M::P);
}

#[inline]
fn redc<M: Modulus>(t: u128) -> u64 {
    let m = (t as u64).wrapping_mul(Consts::<M>::NINV);
    let u = ((t + m as u128 * M::P as u128) >> 64) as u64;
    if u >= M::P {
        u - M::P
    } else {
        u
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) struct Fp<M> {
    raw: u64,
    _m: PhantomData<M>,
}

impl<M: Modulus> Fp<M> {
    #[inline]
    pub(crate) fn from_raw(raw: u64) -> Self {
        Fp { raw, _m: PhantomData }
    }

    #[inline]
    pub(crate) fn raw(self) -> u64 {
        self.raw
    }

    pub(crate) fn new(v: u64) -> Self {
        Self::from_raw(redc::<M>((v % M::P) as u128 * Consts::<M>::R2 as u128))
    }

    pub(crate) fn value(self) -> u64 {
        redc::<M>(self.raw as u128)
    }

    #[inline]
    pub(crate) fn add_assign(&mut self, o: Self) {
        let s = self.raw + o.raw;
        self.raw = if s >= M::P { s - M::P } else { s };
    }

    #[inline]
    pub(crate) fn sub_assign(&mut self, o: Self) {
        self.raw = if self.raw >= o.raw {
            self.raw - o.raw
        } else {
            self.raw + M::P - o.raw
        };
    }

    #[inline]
    pub(crate) fn times(self, o: Self) -> Self {
        Self::from_raw(redc::<M>(self.raw as u128 * o.raw as u128))
    }

    fn power(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::new(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(base);
            }
            base = base.times(base);
            e >>= 1;
        }
        acc
    }

    /// Panics on zero. Inverses are cached: the same few roots of unity and
    /// prime powers are inverted over and over.
    pub(crate) fn inverse(self) -> Self {
        assert!(self.raw != 0, "division by zero in F_p");
        INVERSES.with(|cache| {
            let mut cache = cache.borrow_mut();
            if cache.len() > 1 << 20 {
                cache.clear();
            }
            let raw = *cache
                .entry((M::INDEX, self.raw))
                .or_insert_with(|| self.power(M::P - 2).raw);
            Self::from_raw(raw)
        })
    }

    /// Image of `e^{2πi k/m}`; `m` must divide `ROOT_ORDER`.
    pub(crate) fn root(k: u64, m: u64) -> Self {
        assert!(ROOT_ORDER % m == 0, "root of unity of order {m} has no image in F_p");
        Self::new(M::OMEGA).power((k % m) * (ROOT_ORDER / m))
    }
}

impl<M: Modulus> fmt::Debug for Fp<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value(), M::NAME)
    }
}

impl<M: Modulus> fmt::Display for Fp<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value(), M::NAME)
    }
}

impl<M: Modulus> Field for Fp<M> {
    fn zero() -> Self {
        Self::from_raw(0)
    }

    fn one() -> Self {
        Self::new(1)
    }

    fn from_bigint(v: &BigInt) -> Self {
        let r = (v % BigInt::from(M::P)).to_i128().expect("reduced");
        Self::new(r.rem_euclid(M::P as i128) as u64)
    }

    fn from_rational(v: &Rational) -> Self {
        Self::from_bigint(v.numer()).div(&Self::from_bigint(v.denom()))
    }

    fn from_root(r: &RootOfUnity) -> Self {
        Self::root(r.numerator(), r.order())
    }

    fn add(&self, other: &Self) -> Self {
        let mut s = *self;
        s.add_assign(*other);
        s
    }

    fn sub(&self, other: &Self) -> Self {
        let mut s = *self;
        s.sub_assign(*other);
        s
    }

    fn mul(&self, other: &Self) -> Self {
        self.times(*other)
    }

    fn div(&self, other: &Self) -> Self {
        self.times(other.inverse())
    }

    /// Complex conjugation, valid on images of roots of unity (and zero),
    /// which is all it is ever applied to.
    fn conj(&self) -> Self {
        if self.raw == 0 {
            *self
        } else {
            self.inverse()
        }
    }

    fn is_zero(&self) -> bool {
        self.raw == 0
    }

    fn from_u64(v: u64) -> Self {
        Self::new(v)
    }

    fn from_i64(v: i64) -> Self {
        let r = v.rem_euclid(M::P as i64) as u64;
        Self::new(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega_has_full_order<M: Modulus>() {
        let w = Fp::<M>::new(M::OMEGA);
        assert_eq!(w.power(ROOT_ORDER), Fp::one());
        for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            assert_ne!(w.power(ROOT_ORDER / q), Fp::one(), "order divides L/{q}");
        }
        assert_eq!((M::P - 1) % ROOT_ORDER, 0);
    }

    #[test]
    fn roots_have_the_right_order() {
        omega_has_full_order::<P0>();
        omega_has_full_order::<P1>();
    }

    #[test]
    fn field_ops_match_u128() {
        let p = P0::P as u128;
        let (a, b) = (123_456_789_012_345_678u64, 987_654_321_098_765_432u64);
        let (x, y) = (Fp::<P0>::new(a), Fp::<P0>::new(b));
        assert_eq!(x.mul(&y).value() as u128, a as u128 * b as u128 % p);
        assert_eq!(x.add(&y).value() as u128, (a as u128 + b as u128) % p);
        assert_eq!(x.sub(&y).value() as u128, (a as u128 + p - b as u128) % p);
        assert_eq!(x.div(&y).mul(&y), x);
        assert_eq!(Fp::<P0>::from_i64(-1).add(&Fp::one()), Fp::zero());
    }

    #[test]
    fn roots_and_conjugation() {
        let i = Fp::<P1>::root(1, 4);
        assert_eq!(i.mul(&i), Fp::from_i64(-1));
        let z = Fp::<P1>::root(2, 7);
        assert_eq!(z.mul(&z.conj()), Fp::one());
        assert_eq!(z.conj(), Fp::root(5, 7));
        let q = Rational::new(3.into(), 8.into());
        assert_eq!(Fp::<P1>::from_rational(&q).mul(&Fp::from_u64(8)), Fp::from_u64(3));
    }
}
