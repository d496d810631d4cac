//! Recovering Eisenstein coefficients of a theta series by exact linear
//! algebra over a basis of dilated twisted divisor sums.

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::arith::{divisors, factorize, FactoredInteger, Rational};
use crate::catalog::{FormulaSpec, FormulaTerm};
use crate::characters::{all_characters, enumerate_real_characters, DirichletCharacter};
use crate::error::{Error, Result};
use crate::linalg::{least_norm, mat_vec, solve, AffineSolution};
use crate::repnums::{rep_series, DiagonalForm, RepSeries};
use crate::scalar::ExactScalar;
use crate::twisted_sums::{sigma_twisted, sigma_twisted_integer};

/// `E_k^{ψ,φ}(tτ)`, or for `k = 2` and trivial `ψ, φ` the combination
/// `E₂(τ) − t E₂(tτ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisTriple {
    pub psi: DirichletCharacter,
    pub phi: DirichletCharacter,
    pub t: u64,
    pub k: u32,
}

impl BasisTriple {
    /// Whether this is the weight-2 trivial-pair combination.
    pub fn is_weight_two_trivial(&self) -> bool {
        self.k == 2 && self.psi.is_trivial() && self.phi.is_trivial()
    }

    pub fn is_real(&self) -> bool {
        self.psi.is_real() && self.phi.is_real()
    }
}

impl fmt::Display for BasisTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, t={}, k={})", self.psi, self.phi, self.t, self.k)
    }
}

/// Primitive characters of conductor exactly `u`, real ones in Kronecker
/// form, in a fixed order.
fn primitive_characters(u: u64, real_only: bool) -> Vec<DirichletCharacter> {
    if real_only {
        return enumerate_real_characters(u)
            .into_iter()
            .filter(|c| c.conductor() == u)
            .collect();
    }
    all_characters(u)
        .expect("u >= 1")
        .into_iter()
        .filter(|c| c.conductor() == u)
        .map(|c| {
            if c.is_real() && u > 1 {
                DirichletCharacter::kronecker(c.parity() as i64 * u as i64).expect("primitive real")
            } else if u == 1 {
                DirichletCharacter::trivial()
            } else {
                c
            }
        })
        .collect()
}

/// All admissible `(ψ, φ, t)` with `(ψφ)(−1) = (−1)^k` and `t·u·v | N`,
/// ordered by conductor of ψ, conductor of φ, character, then `t`. For
/// `k = 2` the trivial triple is dropped.
pub fn enumerate_triples(level: u64, k: u32, real_only: bool) -> Vec<BasisTriple> {
    if level == 0 {
        return Vec::new();
    }
    let nf = factorize(level).expect("level >= 1");
    let conductors = divisors(&nf);
    let chars: Vec<(u64, Vec<DirichletCharacter>)> = conductors
        .iter()
        .map(|&u| (u, primitive_characters(u, real_only)))
        .collect();
    let sign = if k % 2 == 0 { 1 } else { -1 };
    let mut out = Vec::new();
    for (u, psis) in &chars {
        for (v, phis) in &chars {
            if level % (u * v) != 0 {
                continue;
            }
            for psi in psis {
                for phi in phis {
                    if psi.parity() * phi.parity() != sign {
                        continue;
                    }
                    for &t in &conductors {
                        if level % (t * u * v) != 0 || (k == 2 && t * u * v == 1) {
                            continue;
                        }
                        out.push(BasisTriple {
                            psi: psi.clone(),
                            phi: phi.clone(),
                            t,
                            k,
                        });
                    }
                }
            }
        }
    }
    out
}

fn sigma_rational(psi: &DirichletCharacter, phi: &DirichletCharacter, h: u32, m: &FactoredInteger) -> Rational {
    Rational::from_integer(sigma_twisted_integer(psi, phi, h, m).expect("real characters"))
}

fn basis_rational(tr: &BasisTriple, n: &FactoredInteger) -> Rational {
    let h = tr.k - 1;
    let dilated = || {
        if n.value() % tr.t == 0 {
            sigma_rational(&tr.psi, &tr.phi, h, &n.quotient_by(tr.t))
        } else {
            Rational::zero()
        }
    };
    if tr.is_weight_two_trivial() {
        sigma_rational(&tr.psi, &tr.phi, 1, n) - Rational::from_integer(BigInt::from(tr.t)) * dilated()
    } else {
        dilated()
    }
}

/// Coefficient of `qⁿ` (without the uniform factor 2) of the basis element.
pub fn basis_coefficient(tr: &BasisTriple, n: u64) -> Result<ExactScalar> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let nf = factorize(n)?;
    if tr.is_real() {
        return Ok(ExactScalar::from_rational(basis_rational(tr, &nf)));
    }
    let h = tr.k - 1;
    if n % tr.t != 0 {
        return Ok(ExactScalar::Zero);
    }
    sigma_twisted(&tr.psi, &tr.phi, h, n / tr.t)
}

/// `4·lcm(a₁, …, a_r)`: a default candidate level, not a proven one.
pub fn infer_level(form: &DiagonalForm) -> u64 {
    4 * form.coefficients().iter().fold(1u64, |acc, &a| acc.lcm(&a))
}

/// Outcome of a fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub level: u64,
    pub k: u32,
    /// One entry per basis triple, in enumeration order; zero coefficients
    /// are kept.
    pub coefficients: Vec<(BasisTriple, Rational)>,
    /// The combination reproduces the target on training and validation.
    pub residual_ok: bool,
    pub train_range: (u64, u64),
    pub validated_range: (u64, u64),
    /// First validation index where the combination disagrees.
    pub first_mismatch: Option<u64>,
    /// Directions along which the solution is still free after validation;
    /// empty when the coefficients are pinned. `coefficients` is then the
    /// least-norm point of the solution set.
    pub free_directions: Vec<Vec<Rational>>,
}

impl FitResult {
    pub fn is_pinned(&self) -> bool {
        self.free_directions.is_empty()
    }

    /// Expands the fit into formula terms: the weight-2 trivial triple
    /// becomes `c·σ(n) − c·t·σ(n/t)`; equal terms are merged and zeros
    /// dropped.
    pub fn to_formula_spec(&self, label: &str, form: Option<DiagonalForm>) -> Result<FormulaSpec> {
        let mut order: Vec<(DirichletCharacter, DirichletCharacter, u64)> = Vec::new();
        let mut acc: HashMap<(DirichletCharacter, DirichletCharacter, u64), Rational> = HashMap::new();
        let mut push = |psi: &DirichletCharacter, phi: &DirichletCharacter, t: u64, c: Rational| {
            let key = (psi.clone(), phi.clone(), t);
            if !acc.contains_key(&key) {
                order.push(key.clone());
            }
            *acc.entry(key).or_insert_with(Rational::zero) += c;
        };
        for (tr, c) in &self.coefficients {
            if c.is_zero() {
                continue;
            }
            if tr.is_weight_two_trivial() {
                push(&tr.psi, &tr.phi, 1, c.clone());
                push(&tr.psi, &tr.phi, tr.t, -c * Rational::from_integer(BigInt::from(tr.t)));
            } else {
                push(&tr.psi, &tr.phi, tr.t, c.clone());
            }
        }
        let mut terms = Vec::new();
        for key in order {
            let c = acc.remove(&key).expect("recorded");
            if !c.is_zero() {
                terms.push(FormulaTerm::new(c, key.0, key.1, self.k - 1, key.2)?);
            }
        }
        FormulaSpec::new(label, terms, form)
    }

    pub fn value_at(&self, n: u64) -> Result<Rational> {
        let nf = factorize(n)?;
        Ok(self.coefficients.iter().map(|(tr, c)| c * basis_rational(tr, &nf)).sum())
    }
}

fn check_range(r: &RangeInclusive<u64>) -> Result<()> {
    if *r.start() == 0 || r.start() > r.end() {
        return Err(Error::BadRange(format!("{}..{}", r.start(), r.end())));
    }
    Ok(())
}

fn basis_rows(triples: &[BasisTriple], range: RangeInclusive<u64>) -> Vec<Vec<Rational>> {
    range
        .map(|n| {
            let nf = factorize(n).expect("n >= 1");
            triples.iter().map(|tr| basis_rational(tr, &nf)).collect()
        })
        .collect()
}

/// Fits `target` (indexed by `n`) as a rational combination of `triples`:
/// solve exactly on `train`, then use `validate` to check the solution and
/// to pin any remaining freedom.
pub fn fit_coefficients(
    triples: &[BasisTriple],
    level: u64,
    k: u32,
    target: &dyn Fn(u64) -> Rational,
    train: RangeInclusive<u64>,
    validate: RangeInclusive<u64>,
) -> Result<FitResult> {
    check_range(&train)?;
    check_range(&validate)?;
    if let Some(tr) = triples.iter().find(|tr| !tr.is_real()) {
        return Err(Error::NotReal(tr.to_string()));
    }
    let rows = (train.end() - train.start() + 1) as usize;
    if rows < triples.len() {
        return Err(Error::TrainingTooShort {
            rows,
            columns: triples.len(),
        });
    }
    let cols = triples.len();
    let a = basis_rows(triples, train.clone());
    let b: Vec<Rational> = train.clone().map(target).collect();
    let sol = solve(&a, &b, cols).ok_or(Error::InconsistentSystem { level })?;

    let av = basis_rows(triples, validate.clone());
    let bv: Vec<Rational> = validate.clone().map(target).collect();
    // Restrict to the training solution set: A_v (x₀ + K y) = b_v.
    let reduced: Vec<Vec<Rational>> = av
        .iter()
        .map(|row| sol.kernel.iter().map(|u| row.iter().zip(u).map(|(x, y)| x * y).sum()).collect())
        .collect();
    let ax0 = mat_vec(&av, &sol.particular);
    let rhs: Vec<Rational> = bv.iter().zip(&ax0).map(|(t, v)| t - v).collect();
    let (coeffs, free, residual_ok) = match solve(&reduced, &rhs, sol.kernel.len()) {
        Some(y) => {
            let mut x = sol.particular.clone();
            combine(&mut x, &y.particular, &sol.kernel);
            let free: Vec<Vec<Rational>> = y
                .kernel
                .iter()
                .map(|z| {
                    let mut d = vec![Rational::zero(); cols];
                    combine(&mut d, z, &sol.kernel);
                    d
                })
                .collect();
            let pinned = AffineSolution {
                particular: x,
                kernel: free.clone(),
            };
            (least_norm(&pinned), free, true)
        }
        None => (least_norm(&sol), Vec::new(), false),
    };
    let first_mismatch = mat_vec(&av, &coeffs)
        .iter()
        .zip(&bv)
        .position(|(v, t)| v != t)
        .map(|i| validate.start() + i as u64);
    Ok(FitResult {
        level,
        k,
        coefficients: triples.iter().cloned().zip(coeffs).collect(),
        residual_ok: residual_ok && first_mismatch.is_none(),
        train_range: (*train.start(), *train.end()),
        validated_range: (*validate.start(), *validate.end()),
        first_mismatch,
        free_directions: free,
    })
}

fn combine(x: &mut [Rational], y: &[Rational], basis: &[Vec<Rational>]) {
    for (yi, u) in y.iter().zip(basis) {
        for (xj, uj) in x.iter_mut().zip(u) {
            *xj += yi * uj;
        }
    }
}

/// Fits a theta series with the real-character basis of level `level` and
/// weight `k`.
pub fn fit(
    target: &RepSeries,
    level: u64,
    k: u32,
    train: RangeInclusive<u64>,
    validate: RangeInclusive<u64>,
) -> Result<FitResult> {
    if k < 2 {
        return Err(Error::WeightTooSmall(k));
    }
    let need = (*train.end()).max(*validate.end());
    if target.bound < need {
        return Err(Error::TargetTooShort(target.bound));
    }
    let triples = enumerate_triples(level, k, true);
    let values = |n: u64| Rational::from_integer(BigInt::from(target.counts[n as usize]));
    fit_coefficients(&triples, level, k, &values, train, validate)
}

/// Weight of a form's theta series; odd rank is rejected.
pub fn weight_of(form: &DiagonalForm) -> Result<u32> {
    if form.rank() % 2 == 1 {
        return Err(Error::OddRank(form.rank()));
    }
    let k = (form.rank() / 2) as u32;
    if k < 2 {
        return Err(Error::WeightTooSmall(k));
    }
    Ok(k)
}

/// [`fit`] for a form, computing its theta series; the level defaults to
/// [`infer_level`].
pub fn fit_form(
    form: &DiagonalForm,
    level: Option<u64>,
    train: RangeInclusive<u64>,
    validate: RangeInclusive<u64>,
) -> Result<FitResult> {
    let k = weight_of(form)?;
    check_range(&train)?;
    check_range(&validate)?;
    let level = level.unwrap_or_else(|| infer_level(form));
    let series = rep_series(form, (*train.end()).max(*validate.end()));
    fit(&series, level, k, train, validate)
}
