//! Twisted divisor sums `σ_h^{ψ,φ}(n) = Σ_{m|n} ψ(n/m) φ(m) m^h` and their
//! Möbius-weighted averages `Σ_{d²|n} μ(d) σ_h^{ψ,φ}(n/d²)`, both as literal
//! double sums and in closed product form.
//!
//! With `ψ` mod `N` and `φ` mod `M`, the primes of `n` fall into four classes:
//! `u` (dividing both `N` and `M`), `p` (`N` only), `q` (`M` only) and `r`
//! (neither). The closed form is a product of one factor per class member
//! times the prefactor `n₂^h φ(n₂)`.
//!
//! Values are exact Gaussian rationals when both characters take values in
//! `{0, ±1, ±i}`, and error-tracked complex floats otherwise.

use num_bigint::BigInt;
use num_traits::Pow;

use crate::arith::{divisors, factorize, mobius, square_divisor_roots, FactoredInteger};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::scalar::{ApproxComplex, ExactScalar, Field, GaussianRational};

/// The decomposition of `n` relative to the moduli `N` of `ψ` and `M` of `φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NSplit {
    pub n: FactoredInteger,
    /// `(u_s, c_s)` for primes dividing both `N` and `M`.
    pub u_part: Vec<(u64, u32)>,
    /// `(p_i, γ_i)` for primes dividing `N` but not `M`.
    pub p_part: Vec<(u64, u32)>,
    /// `(q_j, ν_j)` for primes dividing `M` but not `N`.
    pub q_part: Vec<(u64, u32)>,
    /// Largest divisor of `n` coprime to `NM`.
    pub n1: FactoredInteger,
    /// `n` without its `u` and `q` parts.
    pub n2: FactoredInteger,
    /// `n` without its `u` part.
    pub n3: FactoredInteger,
}

impl NSplit {
    /// Multiplies the parts back together.
    pub fn recompose(&self) -> u64 {
        let pw = |v: &[(u64, u32)]| v.iter().map(|&(p, e)| p.pow(e)).product::<u64>();
        pw(&self.u_part) * pw(&self.p_part) * pw(&self.q_part) * self.n1.value()
    }
}

/// Classifies the primes of `n`, `N` and `M`. Primes of `N` or `M` that do
/// not divide `n` are kept with exponent 0.
pub fn split(n: &FactoredInteger, big_n: u64, big_m: u64) -> Result<NSplit> {
    let fn_ = factorize(big_n)?;
    let fm = factorize(big_m)?;
    let in_n = |p: u64| big_n % p == 0;
    let in_m = |p: u64| big_m % p == 0;

    let mut primes: Vec<u64> = fn_.primes().chain(fm.primes()).collect();
    primes.sort_unstable();
    primes.dedup();

    let (mut u_part, mut p_part, mut q_part) = (Vec::new(), Vec::new(), Vec::new());
    for &l in &primes {
        let e = n.exponent(l);
        match (in_n(l), in_m(l)) {
            (true, true) => u_part.push((l, e)),
            (true, false) => p_part.push((l, e)),
            _ => q_part.push((l, e)),
        }
    }
    let keep = |pred: &dyn Fn(u64) -> bool| {
        FactoredInteger::from_factors(n.factors().iter().copied().filter(|&(p, _)| pred(p)))
            .expect("factors of n are prime")
    };
    let n1 = keep(&|p| !in_n(p) && !in_m(p));
    let n2 = keep(&|p| !in_m(p));
    let n3 = keep(&|p| !(in_n(p) && in_m(p)));
    Ok(NSplit {
        n: n.clone(),
        u_part,
        p_part,
        q_part,
        n1,
        n2,
        n3,
    })
}

/// True when both characters take values in `{0, ±1, ±i}`, so sums can be
/// carried exactly.
pub fn exact_regime(psi: &DirichletCharacter, phi: &DirichletCharacter) -> bool {
    psi.has_gaussian_values() && phi.has_gaussian_values()
}

fn big_pow(b: u64, e: u64) -> BigInt {
    Pow::pow(BigInt::from(b), e)
}

fn char_at<F: Field>(chi: &DirichletCharacter, m: u64) -> F {
    F::from_char_value(chi.value_u64(m))
}

fn run<T>(
    psi: &DirichletCharacter,
    phi: &DirichletCharacter,
    exact: impl FnOnce() -> T,
    approx: impl FnOnce() -> ApproxComplex,
) -> ExactScalar
where
    T: Into<GaussianRational>,
{
    if exact_regime(psi, phi) {
        let g: GaussianRational = exact().into();
        if g.is_zero() {
            ExactScalar::Zero
        } else {
            ExactScalar::Gaussian(g)
        }
    } else {
        ExactScalar::Approx(approx())
    }
}

fn factored(n: u64) -> Result<FactoredInteger> {
    factorize(n)
}

pub(crate) fn sigma_generic<F: Field>(
    psi: &DirichletCharacter,
    phi: &DirichletCharacter,
    h: u32,
    n: &FactoredInteger,
) -> F {
    let nv = n.value();
    divisors(n).into_iter().fold(F::zero(), |acc, m| {
        let w = match (psi.value_u64(nv / m), phi.value_u64(m)) {
            (Some(a), Some(b)) => a.mul(&b),
            _ => return acc,
        };
        acc.add(&F::from_root(&w).mul(&F::from_bigint(&big_pow(m, h as u64))))
    })
}

/// `σ_h^{ψ,φ}(n)`.
pub fn sigma_twisted(
    psi: &DirichletCharacter,
    phi: &DirichletCharacter,
    h: u32,
    n: u64,
) -> Result<ExactScalar> {
    let nf = factored(n)?;
    Ok(run(
        psi,
        phi,
        || sigma_generic::<GaussianRational>(psi, phi, h, &nf),
        || sigma_generic::<ApproxComplex>(psi, phi, h, &nf),
    ))
}

/// `σ_h^{ψ,φ}(n)` as an exact integer, for real characters.
pub fn sigma_twisted_integer(
    psi: &DirichletCharacter,
    phi: &DirichletCharacter,
    h: u32,
    n: &FactoredInteger,
) -> Option<BigInt> {
    if !(psi.is_real() && phi.is_real()) {
        return None;
    }
    let nv = n.value();
    let mut small: i128 = 0;
    let mut overflow = false;
    for m in divisors(n) {
        let s = match (psi.value_u64(nv / m), phi.value_u64(m)) {
            (Some(a), Some(b)) if a.mul(&b).is_one() => 1i128,
            (Some(_), Some(_)) => -1i128,
            _ => continue,
        };
        match (m as i128)
            .checked_pow(h)
            .and_then(|p| small.checked_add(s * p))
        {
            Some(v) => small = v,
            None => {
                overflow = true;
                break;
            }
        }
    }
    if !overflow {
        return Some(BigInt::from(small));
    }
    let mut acc = BigInt::from(0);
    for m in divisors(n) {
        match (psi.value_u64(nv / m), phi.value_u64(m)) {
            (Some(a), Some(b)) if a.mul(&b).is_one() => acc += big_pow(m, h as u64),
            (Some(_), Some(_)) => acc -= big_pow(m, h as u64),
            _ => {}
        }
    }
    Some(acc)
}

pub(crate) fn bruteforce_generic<F: Field>(
    psi: &DirichletCharacter,
    phi: &DirichletCharacter,
    h: u32,
    n: &FactoredInteger,
) -> F {
    let mut acc = F::zero();
    for d in square_divisor_roots(n) {
        let mu = mobius(&factorize(d).expect("d >= 1"));
        if mu == 0 {
            continue;
        }
        let inner: F = sigma_generic(psi, phi, h, &n.quotient_by(d * d));
        acc = if mu == 1 {
            acc.add(&inner)
        } else {
            acc.sub(&inner)
        };
    }
    acc
}

/// `Σ_{d²|n} μ(d) Σ_{m | n/d²} ψ(n/(m d²)) φ(m) m^h`, summed literally.
pub fn mobius_weighted_sum_bruteforce(
    psi: &DirichletCharacter,
    phi: &DirichletCharacter,
    h: u32,
    n: u64,
) -> Result<ExactScalar> {
    let nf = factored(n)?;
    Ok(run(
        psi,
        phi,
        || bruteforce_generic::<GaussianRational>(psi, phi, h, &nf),
        || bruteforce_generic::<ApproxComplex>(psi, phi, h, &nf),
    ))
}

fn delta(cond: bool) -> i64 {
    i64::from(cond)
}

/// `1 - δ_{u|n} - δ_{u²|n} + δ_{u³|n}` for `u^c ∥ n`.
pub(crate) fn u_factor(c: u32) -> i64 {
    1 - delta(c >= 1) - delta(c >= 2) + delta(c >= 3)
}

/// `1 - φ̄(p)²/p^{2h}` if `p² | n`, else 1.
pub(crate) fn p_factor<F: Field>(p: u64, gamma: u32, h: u32, phi_p: &F) -> F {
    if gamma < 2 {
        return F::one();
    }
    let num = phi_p.conj().pow(2);
    F::one().sub(&num.div(&F::from_u64(p).pow(2 * h as u64)))
}

/// `(1 - δ_{q²|n} ψ̄(q)²) ψ(q)^ν`.
pub(crate) fn q_factor<F: Field>(nu: u32, psi_q: &F) -> F {
    let head = if nu >= 2 {
        F::one().sub(&psi_q.conj().pow(2))
    } else {
        F::one()
    };
    head.mul(&psi_q.pow(nu as u64))
}

/// The bracket attached to a prime `r ∤ NM` with `r^λ ∥ n`:
/// `δ_{r²|n}(1 - ψ̄²)/(φ ψ̄ r^h)^λ · (1 - x^{λ-1})/(1 - x) + (1 + ψ φ̄ / r^h)`
/// with `x = φ(r) ψ̄(r) r^h`. The quotient is evaluated as the finite sum
/// `Σ_{j<λ-1} x^j`, which also gives `λ - 1` when `x = 1` (only possible for
/// `h = 0` and `φ(r) = ψ(r)`) and never divides by anything but `x`.
pub(crate) fn r_factor<F: Field>(r: u64, lambda: u32, h: u32, psi_r: &F, phi_r: &F) -> F {
    let rh = F::from_u64(r).pow(h as u64);
    let tail = F::one().add(&psi_r.mul(&phi_r.conj()).div(&rh));
    if lambda < 2 {
        return tail;
    }
    let psi_bar = psi_r.conj();
    let one_minus_psibar2 = F::one().sub(&psi_bar.mul(&psi_bar));
    if one_minus_psibar2.is_zero() {
        return tail;
    }
    let x = phi_r.mul(&psi_bar).mul(&rh);
    let mut geometric = F::zero();
    let mut xj = F::one();
    for _ in 0..lambda - 1 {
        geometric = geometric.add(&xj);
        xj = xj.mul(&x);
    }
    let head = one_minus_psibar2.div(&x.pow(lambda as u64)).mul(&geometric);
    head.add(&tail)
}

pub(crate) fn closed_generic<F: Field>(
    psi: &DirichletCharacter,
    phi: &DirichletCharacter,
    h: u32,
    s: &NSplit,
) -> F {
    let n2 = s.n2.value();
    let mut acc = F::from_bigint(&big_pow(n2, h as u64)).mul(&char_at::<F>(phi, n2));
    if acc.is_zero() {
        return acc;
    }
    for &(_, c) in &s.u_part {
        acc = acc.mul(&F::from_i64(u_factor(c)));
    }
    for &(p, gamma) in &s.p_part {
        let phi_p = char_at::<F>(phi, p);
        acc = acc.mul(&p_factor(p, gamma, h, &phi_p));
    }
    for &(q, nu) in &s.q_part {
        let psi_q = char_at::<F>(psi, q);
        acc = acc.mul(&q_factor(nu, &psi_q));
    }
    for &(r, lambda) in s.n1.factors() {
        let psi_r = psi.value_u64(r).expect("r is coprime to N");
        let phi_r = phi.value_u64(r).expect("r is coprime to M");
        let (a, b) = (F::from_root(&psi_r), F::from_root(&phi_r));
        acc = acc.mul(&r_factor(r, lambda, h, &a, &b));
    }
    acc
}

/// The closed product form of the Möbius-weighted sum.
pub fn mobius_weighted_sum_closed(
    psi: &DirichletCharacter,
    phi: &DirichletCharacter,
    h: u32,
    n: u64,
) -> Result<ExactScalar> {
    let nf = factored(n)?;
    let s = split(&nf, psi.modulus(), phi.modulus())?;
    Ok(run(
        psi,
        phi,
        || closed_generic::<GaussianRational>(psi, phi, h, &s),
        || closed_generic::<ApproxComplex>(psi, phi, h, &s),
    ))
}

pub(crate) fn real_generic<F: Field>(
    psi: &DirichletCharacter,
    phi: &DirichletCharacter,
    h: u32,
    s: &NSplit,
) -> F {
    // c(n) = φ(n₂) Π_u (…) Π_q (1 - δ_{q²|n}) ψ(q^ν) Π_{p²|n} (1 - φ̄(p²)/p^{2h})
    let n2 = s.n2.value();
    let mut c = char_at::<F>(phi, n2);
    for &(_, cs) in &s.u_part {
        c = c.mul(&F::from_i64(u_factor(cs)));
    }
    for &(q, nu) in &s.q_part {
        let head = F::from_i64(1 - delta(nu >= 2));
        c = c.mul(&head).mul(&char_at::<F>(psi, q.pow(nu)));
    }
    for &(p, gamma) in &s.p_part {
        if gamma >= 2 {
            let v = F::from_char_value(phi.value_u64(p * p)).conj();
            c = c.sub(&c.mul(&v.div(&F::from_u64(p).pow(2 * h as u64))));
        }
    }
    let mut acc = c.mul(&F::from_bigint(&big_pow(n2, h as u64)));
    // product over every prime dividing n; primes of N or M contribute 1
    for r in s.n.primes() {
        let t = match (psi.value_u64(r), phi.value_u64(r)) {
            (Some(a), Some(b)) => F::from_root(&a.mul(&b.conj())),
            _ => F::zero(),
        };
        acc = acc.mul(&F::one().add(&t.div(&F::from_bigint(&big_pow(r, h as u64)))));
    }
    acc
}

/// The specialization for real `ψ`: `c(n) n₂^h Π_{r|n} (1 + ψ(r) φ̄(r) / r^h)`.
pub fn mobius_weighted_sum_real(
    psi: &DirichletCharacter,
    phi: &DirichletCharacter,
    h: u32,
    n: u64,
) -> Result<ExactScalar> {
    if !psi.is_real() {
        return Err(Error::NotReal(psi.to_string()));
    }
    let nf = factored(n)?;
    let s = split(&nf, psi.modulus(), phi.modulus())?;
    Ok(run(
        psi,
        phi,
        || real_generic::<GaussianRational>(psi, phi, h, &s),
        || real_generic::<ApproxComplex>(psi, phi, h, &s),
    ))
}

/// `Σ_{d²|n} μ(d) δ_{t | n/d²} σ_h^{ψ,φ}(n/(t d²))`, which equals the closed
/// form at `n/t` when `t | n` and vanishes otherwise.
pub fn primitive_dilated_sum(
    psi: &DirichletCharacter,
    phi: &DirichletCharacter,
    h: u32,
    t: u64,
    n: u64,
) -> Result<ExactScalar> {
    if t == 0 {
        return Err(Error::ZeroDilation);
    }
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    if n % t != 0 {
        return Ok(ExactScalar::Zero);
    }
    mobius_weighted_sum_closed(psi, phi, h, n / t)
}

/// One prime's contribution to the closed form (prefactor included). The
/// class of `ℓ` is read off from which character values vanish.
pub(crate) fn local_factor<F: Field>(
    l: u64,
    e: u32,
    h: u32,
    psi_l: Option<&F>,
    phi_l: Option<&F>,
) -> F {
    let pre = |b: &F| F::from_u64(l).pow(h as u64 * e as u64).mul(&b.pow(e as u64));
    match (psi_l, phi_l) {
        (None, None) => F::from_i64(u_factor(e)),
        (None, Some(b)) => pre(b).mul(&p_factor(l, e, h, b)),
        (Some(a), None) => q_factor(e, a),
        (Some(a), Some(b)) => pre(b).mul(&r_factor(l, e, h, a, b)),
    }
}

/// One prime's contribution to the real-character form `c(n) n₂^h Π (…)`.
pub(crate) fn real_local_factor<F: Field>(
    l: u64,
    e: u32,
    h: u32,
    psi_l: Option<&F>,
    phi_l: Option<&F>,
) -> F {
    let pre = |b: &F| F::from_u64(l).pow(h as u64 * e as u64).mul(&b.pow(e as u64));
    match (psi_l, phi_l) {
        (None, None) => F::from_i64(u_factor(e)),
        (None, Some(b)) => {
            let mut v = pre(b);
            if e >= 2 {
                let t = b.pow(2).conj().div(&F::from_u64(l).pow(2 * h as u64));
                v = v.sub(&v.mul(&t));
            }
            v
        }
        (Some(a), None) => {
            if e >= 2 {
                F::zero()
            } else {
                a.clone()
            }
        }
        (Some(a), Some(b)) => {
            let t = a.mul(&b.conj()).div(&F::from_u64(l).pow(h as u64));
            pre(b).mul(&F::one().add(&t))
        }
    }
}

impl From<GaussianRational> for ExactScalar {
    fn from(g: GaussianRational) -> Self {
        if g.is_zero() {
            ExactScalar::Zero
        } else {
            ExactScalar::Gaussian(g)
        }
    }
}
