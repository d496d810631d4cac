//! Explicit formulas for representation numbers of diagonal forms.
//!
//! Each entry pairs a combination of dilated twisted divisor sums (equal to
//! `r_a(n)`) with a hand-written closed form for the primitive count
//! `r^p_a(n)`: a prefactor or case table times `n^h` times an Euler product
//! over the primes dividing `n`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, format_rational, parse_rational, FactoredInteger, Rational};
use crate::characters::{kronecker_symbol, DirichletCharacter};
use crate::error::{Error, Result};
use crate::repnums::{primitive_from_rep, DiagonalForm};
use crate::scalar::{ExactScalar, Field};
use crate::twisted_sums::{primitive_dilated_sum, sigma_twisted, sigma_twisted_integer};

/// `coefficient · δ_{t|n} · σ_h^{ψ,φ}(n/t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaTerm {
    pub coefficient: Rational,
    pub psi: DirichletCharacter,
    pub phi: DirichletCharacter,
    pub h: u32,
    pub t: u64,
}

impl FormulaTerm {
    pub fn new(
        coefficient: Rational,
        psi: DirichletCharacter,
        phi: DirichletCharacter,
        h: u32,
        t: u64,
    ) -> Result<Self> {
        if t == 0 {
            return Err(Error::ZeroDilation);
        }
        Ok(FormulaTerm {
            coefficient,
            psi,
            phi,
            h,
            t,
        })
    }

    fn is_real(&self) -> bool {
        self.psi.is_real() && self.phi.is_real()
    }

    /// Value at `n`; `n` must be positive.
    pub fn value(&self, n: &FactoredInteger) -> ExactScalar {
        let nv = n.value();
        if nv % self.t != 0 {
            return ExactScalar::Zero;
        }
        let m = n.quotient_by(self.t);
        let coeff = ExactScalar::from_rational(self.coefficient.clone());
        if self.is_real() {
            let s = sigma_twisted_integer(&self.psi, &self.phi, self.h, &m).expect("real characters");
            return coeff.mul(&ExactScalar::from_rational(Rational::from_integer(s)));
        }
        let s = sigma_twisted(&self.psi, &self.phi, self.h, m.value()).expect("n >= 1");
        coeff.mul(&s)
    }
}

/// A weight-homogeneous combination of [`FormulaTerm`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaSpec {
    terms: Vec<FormulaTerm>,
    label: String,
    form: Option<DiagonalForm>,
}

impl FormulaSpec {
    pub fn new(label: impl Into<String>, terms: Vec<FormulaTerm>, form: Option<DiagonalForm>) -> Result<Self> {
        let first = terms.first().ok_or(Error::EmptyFormula)?;
        for term in &terms {
            if term.t == 0 {
                return Err(Error::ZeroDilation);
            }
            if term.h != first.h {
                return Err(Error::MixedWeight {
                    first: first.h,
                    second: term.h,
                });
            }
        }
        Ok(FormulaSpec {
            terms,
            label: label.into(),
            form,
        })
    }

    pub fn terms(&self) -> &[FormulaTerm] {
        &self.terms
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn form(&self) -> Option<&DiagonalForm> {
        self.form.as_ref()
    }

    /// The common exponent `h` (weight minus one).
    pub fn h(&self) -> u32 {
        self.terms[0].h
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(FormulaTerm::is_real)
    }

    /// Serializes to the JSON exchange format.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("plain data")
    }

    fn to_raw(&self) -> RawSpec {
        RawSpec {
            label: self.label.clone(),
            h: self.h(),
            form: self.form.as_ref().map(|f| f.coefficients().to_vec()),
            terms: self
                .terms
                .iter()
                .map(|t| RawTerm {
                    coeff: format_rational(&t.coefficient),
                    psi: t.psi.to_string(),
                    phi: t.phi.to_string(),
                    t: t.t,
                    h: None,
                })
                .collect(),
        }
    }
}

impl Serialize for FormulaSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_raw().serialize(s)
    }
}

impl fmt::Display for FormulaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let c = format_rational(&t.coefficient);
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})·σ_{}^{{{},{}}}", t.h, t.psi, t.phi)?;
            if t.t == 1 {
                f.write_str("(n)")?;
            } else {
                write!(f, "(n/{})", t.t)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    label: String,
    h: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    form: Option<Vec<u64>>,
    terms: Vec<RawTerm>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    coeff: String,
    psi: String,
    phi: String,
    t: u64,
    // A per-term weight is tolerated as long as it agrees with the top level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h: Option<u32>,
}

/// Parses and validates a JSON formula document.
pub fn parse_formula_spec(text: &str) -> Result<FormulaSpec> {
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    if raw.label.trim().is_empty() {
        return Err(Error::Schema("label must be nonempty".into()));
    }
    if raw.terms.is_empty() {
        return Err(Error::EmptyFormula);
    }
    let form = raw.form.map(DiagonalForm::new).transpose()?;
    let mut terms = Vec::with_capacity(raw.terms.len());
    for t in raw.terms {
        let h = t.h.unwrap_or(raw.h);
        if h != raw.h {
            return Err(Error::MixedWeight {
                first: raw.h,
                second: h,
            });
        }
        terms.push(FormulaTerm::new(
            parse_rational(&t.coeff)?,
            t.psi.parse()?,
            t.phi.parse()?,
            h,
            t.t,
        )?);
    }
    FormulaSpec::new(raw.label, terms, form)
}

fn factored(n: u64) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    factorize(n)
}

/// `Σ_terms c · δ_{t|n} σ_h^{ψ,φ}(n/t)`, in whatever scalar regime the
/// characters require.
pub fn evaluate_formula_scalar(spec: &FormulaSpec, n: u64) -> Result<ExactScalar> {
    let nf = factored(n)?;
    Ok(spec
        .terms
        .iter()
        .fold(ExactScalar::Zero, |acc, t| acc.add(&t.value(&nf))))
}

/// [`evaluate_formula_scalar`] for specs with rational values.
pub fn evaluate_formula(spec: &FormulaSpec, n: u64) -> Result<Rational> {
    evaluate_formula_scalar(spec, n)?
        .to_rational()
        .ok_or(Error::NotRational(n))
}

/// Termwise primitive part: `Σ_terms c · Σ_{d²|n} μ(d) δ_{t|n/d²} σ(n/(t d²))`,
/// each inner sum taken in closed form.
pub fn primitive_eisenstein_part_scalar(spec: &FormulaSpec, n: u64) -> Result<ExactScalar> {
    let mut acc = ExactScalar::Zero;
    for t in &spec.terms {
        let v = primitive_dilated_sum(&t.psi, &t.phi, t.h, t.t, n)?;
        acc = acc.add(&ExactScalar::from_rational(t.coefficient.clone()).mul(&v));
    }
    Ok(acc)
}

pub fn primitive_eisenstein_part(spec: &FormulaSpec, n: u64) -> Result<Rational> {
    primitive_eisenstein_part_scalar(spec, n)?
        .to_rational()
        .ok_or(Error::NotRational(n))
}

/// `Σ_{d²|n} μ(d) evaluate_formula(spec, n/d²)`, straight from the definition.
pub fn primitive_by_definition(spec: &FormulaSpec, n: u64) -> Result<ExactScalar> {
    let nf = factored(n)?;
    let vals = |m: u64| evaluate_formula_scalar(spec, m).expect("m >= 1");
    Ok(primitive_from_rep(ScalarSum::from_fn(vals), &nf).0)
}

// `primitive_from_rep` wants `Zero + Add + Sub`; a thin wrapper supplies them.
#[derive(Clone)]
struct ScalarSum(ExactScalar);

impl ScalarSum {
    fn from_fn(f: impl Fn(u64) -> ExactScalar) -> impl Fn(u64) -> ScalarSum {
        move |m| ScalarSum(f(m))
    }
}

impl std::ops::Add for ScalarSum {
    type Output = ScalarSum;
    fn add(self, o: ScalarSum) -> ScalarSum {
        ScalarSum(self.0.add(&o.0))
    }
}

impl std::ops::Sub for ScalarSum {
    type Output = ScalarSum;
    fn sub(self, o: ScalarSum) -> ScalarSum {
        ScalarSum(self.0.sub(&o.0))
    }
}

impl Zero for ScalarSum {
    fn zero() -> Self {
        ScalarSum(ExactScalar::Zero)
    }
    fn is_zero(&self) -> bool {
        Field::is_zero(&self.0)
    }
}

pub type Evaluator = fn(&FactoredInteger) -> Rational;

/// Hand-written closed form for `r^p_a(n)`.
#[derive(Clone)]
pub struct PrimitiveClosedForm {
    pub label: &'static str,
    pub form: DiagonalForm,
    pub evaluator: Evaluator,
}

impl PrimitiveClosedForm {
    pub fn eval(&self, n: &FactoredInteger) -> Rational {
        (self.evaluator)(n)
    }
}

impl fmt::Debug for PrimitiveClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimitiveClosedForm")
            .field("label", &self.label)
            .field("form", &self.form)
            .finish_non_exhaustive()
    }
}

/// Which count a [`PrintedVariant`] claims to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantTarget {
    Representations,
    Primitive,
}

/// A literal reading of a typeset formula that differs from the stored one.
/// Verification reports whether it holds and, if not, the first failure.
#[derive(Clone)]
pub struct PrintedVariant {
    pub target: VariantTarget,
    pub description: &'static str,
    pub evaluator: Evaluator,
}

impl fmt::Debug for PrintedVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrintedVariant")
            .field("target", &self.target)
            .field("description", &self.description)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub spec: FormulaSpec,
    pub primitive: PrimitiveClosedForm,
    /// Level of the characters and dilations actually used.
    pub level: u64,
    pub variants: Vec<PrintedVariant>,
}

impl CatalogEntry {
    pub fn label(&self) -> &str {
        self.spec.label()
    }

    pub fn form(&self) -> &DiagonalForm {
        &self.primitive.form
    }
}

// ---- helpers for the closed forms ----

fn q(a: i64, b: i64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

fn z(a: i64) -> Rational {
    Rational::from_integer(BigInt::from(a))
}

fn kr(d: i64, m: u64) -> i64 {
    kronecker_symbol(d, m as i64) as i64
}

fn delta(k: u64, n: &FactoredInteger) -> Rational {
    z((n.value() % k == 0) as i64)
}

fn npow(n: &FactoredInteger, h: u32) -> Rational {
    Rational::from_integer(BigInt::from(n.value()).pow(h))
}

/// `Π_{p | n, p ∉ skip} (1 + χ_D(p)/p^h)`; `d = 1` is the trivial character.
fn euler(n: &FactoredInteger, d: i64, h: u32, skip: &[u64]) -> Rational {
    n.primes()
        .filter(|p| !skip.contains(p))
        .fold(Rational::one(), |acc, p| {
            let chi = if d == 1 { 1 } else { kr(d, p) };
            acc * (Rational::one() + Rational::new(BigInt::from(chi), BigInt::from(p).pow(h)))
        })
}

/// `χ_{d1}(ℓ^a) χ_{d2}(n/ℓ^a) / ℓ^a` with `ℓ^a ∥ n`.
fn split_term(n: &FactoredInteger, l: u64, d1: i64, d2: i64) -> Rational {
    let la = l.pow(n.exponent(l));
    Rational::new(
        BigInt::from(kr(d1, la) * kr(d2, n.value() / la)),
        BigInt::from(la),
    )
}

/// The four-way case table on `(ord₂ n, ord₃ n)` shared by several forms:
/// `a <= a_max, b <= 1` gives `f2·f3`, large `a` gives `c3·f3`, large `b`
/// gives `c2·f2`, both large gives `both`.
fn case_table(
    n: &FactoredInteger,
    a_max: u32,
    f2: impl Fn() -> Rational,
    f3: impl Fn() -> Rational,
    scale: Rational,
    c3: Rational,
    c2: Rational,
    both: Rational,
) -> Rational {
    let (a, b) = (n.exponent(2), n.exponent(3));
    match (a <= a_max, b <= 1) {
        (true, true) => scale * f2() * f3(),
        (false, true) => c3 * f3(),
        (true, false) => c2 * f2(),
        (false, false) => both,
    }
}

fn jacobi_primitive(n: &FactoredInteger) -> Rational {
    // 8(1 + ½δ₂ − δ₄ − ½δ₈) n Π_{2≠p|n}(1 + 1/p)
    let c = z(1) + q(1, 2) * delta(2, n) - delta(4, n) - q(1, 2) * delta(8, n);
    z(8) * c * npow(n, 1) * euler(n, 1, 1, &[2])
}

fn six_squares_d(n: u64) -> i64 {
    match (n % 4, n % 8) {
        (1, _) => 12,
        (3, _) => 20,
        (_, 0 | 2 | 4) => 15,
        _ => 17,
    }
}

fn six_squares_primitive(n: &FactoredInteger) -> Rational {
    z(six_squares_d(n.value())) * npow(n, 2) * euler(n, -4, 2, &[])
}

fn eight_squares_primitive(n: &FactoredInteger) -> Rational {
    let c = z(16) - z(2) * delta(2, n) + q(7, 2) * delta(4, n) + q(1, 2) * delta(8, n);
    c * npow(n, 3) * euler(n, 1, 3, &[2])
}

fn p1112(n: &FactoredInteger) -> Rational {
    let v = n.value();
    let d = match n.exponent(2) {
        0 => -2 * kr(8, v) + 8,
        1 => -kr(8, v / 2) + 8,
        _ => 6,
    };
    z(d) * npow(n, 1) * euler(n, 8, 1, &[])
}

fn p1113(n: &FactoredInteger) -> Rational {
    let d = case_table(
        n,
        1,
        || z(2) + split_term(n, 2, -3, -4),
        || z(3) - split_term(n, 3, -4, -3),
        z(1),
        q(3, 2),
        q(8, 3),
        z(4),
    );
    d * npow(n, 1) * euler(n, 12, 1, &[])
}

fn p1114(n: &FactoredInteger) -> Rational {
    let v = n.value();
    let c4 = z(kr(-4, v));
    let c4q = if v % 4 == 0 { z(kr(-4, v / 4)) } else { z(0) };
    let d = (z(4) + z(2) * &c4) + z(2) * delta(2, n)
        - (z(2) * &c4 + q(1, 2) * c4q + z(5)) * delta(4, n)
        + q(1, 2) * delta(8, n)
        - q(1, 2) * delta(16, n)
        - delta(32, n);
    d * npow(n, 1) * euler(n, 1, 1, &[2])
}

fn p1122(n: &FactoredInteger) -> Rational {
    let c = z(4) + delta(4, n) - z(3) * delta(8, n) - z(2) * delta(16, n);
    c * npow(n, 1) * euler(n, 1, 1, &[2])
}

fn d1115(n: &FactoredInteger) -> Rational {
    let v = n.value();
    match n.exponent(5) {
        0 => z(kr(5, v) + 5),
        1 => q(kr(5, v / 5), 5) + z(5),
        _ => q(24, 5),
    }
}

fn p1115_with(n: &FactoredInteger, delta8: Rational) -> Rational {
    let two = z(1) + q(1, 2) * delta(2, n) - q(3, 2) * delta(4, n) + delta8 * delta(8, n);
    d1115(n) * two * npow(n, 1) * euler(n, 5, 1, &[2])
}

fn p1115(n: &FactoredInteger) -> Rational {
    p1115_with(n, q(1, 2))
}

fn p1115_printed(n: &FactoredInteger) -> Rational {
    p1115_with(n, z(1))
}

fn p1123(n: &FactoredInteger) -> Rational {
    let d = case_table(
        n,
        1,
        || z(4) - split_term(n, 2, -3, -8),
        || z(3) + split_term(n, 3, -8, -3),
        q(1, 3),
        z(1),
        q(8, 9),
        q(8, 3),
    );
    d * npow(n, 1) * euler(n, 24, 1, &[])
}

fn p1124(n: &FactoredInteger) -> Rational {
    let v = n.value();
    let d = match n.exponent(2) {
        0 => z(4),
        1 => z(4 - kr(8, v / 2)),
        2 => z(3) - q(kr(8, v / 4), 2),
        _ => z(3),
    };
    d * npow(n, 1) * euler(n, 8, 1, &[])
}

fn p1222(n: &FactoredInteger) -> Rational {
    let v = n.value();
    let d = match n.exponent(2) {
        0 => -2 * kr(8, v) + 4,
        1 => -kr(8, v / 2) + 4,
        _ => 3,
    };
    z(d) * npow(n, 1) * euler(n, 8, 1, &[])
}

fn p1133(n: &FactoredInteger) -> Rational {
    let d = z(1) - q(1, 2) * delta(2, n) - q(2, 3) * delta(3, n)
        + q(1, 2) * delta(4, n)
        + q(1, 3) * delta(6, n)
        + q(1, 2) * delta(8, n)
        - q(1, 3) * delta(9, n)
        - q(1, 3) * delta(12, n)
        + q(1, 6) * delta(18, n)
        - q(1, 3) * delta(24, n)
        - q(1, 6) * delta(36, n)
        - q(1, 6) * delta(72, n);
    z(4) * d * npow(n, 1) * euler(n, 1, 1, &[2, 3])
}

fn p1126(n: &FactoredInteger) -> Rational {
    let d = case_table(
        n,
        2,
        || (z(1) - q(1, 4) * delta(4, n)) - delta(2, n) * split_term(n, 2, -3, -4),
        || z(3) + split_term(n, 3, -4, -3),
        z(1),
        q(3, 4),
        q(8, 3),
        z(2),
    );
    d * npow(n, 1) * euler(n, 12, 1, &[])
}

fn p1223(n: &FactoredInteger) -> Rational {
    let d = case_table(
        n,
        2,
        || (z(1) - q(1, 4) * delta(4, n)) + delta(2, n) * split_term(n, 2, -3, -4),
        || z(3) - split_term(n, 3, -4, -3),
        z(1),
        q(3, 4),
        q(8, 3),
        z(2),
    );
    d * npow(n, 1) * euler(n, 12, 1, &[])
}

fn p1224(n: &FactoredInteger) -> Rational {
    let c = z(2) - q(1, 2) * delta(4, n) + delta(8, n) - q(3, 2) * delta(16, n) - delta(32, n);
    c * npow(n, 1) * euler(n, 1, 1, &[2])
}

fn p1226(n: &FactoredInteger) -> Rational {
    let d = case_table(
        n,
        1,
        || z(2) + split_term(n, 2, -3, -8),
        || z(3) - split_term(n, 3, -8, -3),
        q(1, 3),
        q(1, 2),
        q(8, 9),
        q(4, 3),
    );
    d * npow(n, 1) * euler(n, 24, 1, &[])
}

fn p1244(n: &FactoredInteger) -> Rational {
    let v = n.value();
    let d = match n.exponent(2) {
        0 => z(2),
        1 => z(2 - kr(8, v / 2)),
        2 => q(3, 2) - q(kr(8, v / 4), 2),
        _ => q(3, 2),
    };
    d * npow(n, 1) * euler(n, 8, 1, &[])
}

fn p1246(n: &FactoredInteger) -> Rational {
    let d = case_table(
        n,
        3,
        || q(1, 2) - q(1, 8) * delta(4, n) - delta(4, n) * split_term(n, 2, -3, -4),
        || z(3) + split_term(n, 3, -4, -3),
        z(1),
        q(3, 8),
        q(8, 3),
        z(1),
    );
    d * npow(n, 1) * euler(n, 12, 1, &[])
}

/// `σ(m)` for `m >= 1`.
fn sigma1(m: u64) -> Rational {
    let one = DirichletCharacter::trivial();
    let mf = factorize(m).expect("m >= 1");
    Rational::from_integer(sigma_twisted_integer(&one, &one, 1, &mf).expect("real"))
}

fn dil_sigma(n: &FactoredInteger, t: u64, under: u64) -> Rational {
    if n.value() % under == 0 && n.value() % t == 0 {
        sigma1(n.value() / t)
    } else {
        z(0)
    }
}

/// The (1,1,3,3) formula with the `δ_{3|n}` term taken literally as
/// `σ(n/2)`; it is nonzero only when `6 | n` makes `n/2` integral.
fn r1133_printed(n: &FactoredInteger) -> Rational {
    z(4) * dil_sigma(n, 1, 1) - z(8) * dil_sigma(n, 2, 2) - z(12) * dil_sigma(n, 2, 3)
        + z(16) * dil_sigma(n, 4, 4)
        + z(24) * dil_sigma(n, 6, 6)
        - z(48) * dil_sigma(n, 12, 12)
}

// ---- the table ----

type TermRow = (i64, i64, i64, i64, u64);

fn character(d: i64) -> DirichletCharacter {
    if d == 1 {
        DirichletCharacter::trivial()
    } else {
        DirichletCharacter::kronecker(d).expect("fundamental discriminant")
    }
}

/// Rows are `(numerator, denominator, D_ψ, D_φ, t)`.
fn spec(label: &str, form: &[u64], h: u32, rows: &[TermRow]) -> FormulaSpec {
    let terms = rows
        .iter()
        .map(|&(a, b, dp, df, t)| {
            FormulaTerm::new(q(a, b), character(dp), character(df), h, t).expect("t >= 1")
        })
        .collect();
    FormulaSpec::new(label, terms, Some(DiagonalForm::new(form.to_vec()).expect("positive")))
        .expect("valid builtin")
}

fn entry(
    label: &'static str,
    form: &[u64],
    h: u32,
    level: u64,
    rows: &[TermRow],
    evaluator: Evaluator,
) -> CatalogEntry {
    let spec = spec(label, form, h, rows);
    CatalogEntry {
        primitive: PrimitiveClosedForm {
            label,
            form: spec.form().expect("set").clone(),
            evaluator,
        },
        spec,
        level,
        variants: Vec::new(),
    }
}

/// All built-in formulas, in a fixed order.
pub fn builtin_catalog() -> Vec<CatalogEntry> {
    let mut v = vec![
        // Jacobi: 8σ(n) − 32δ_{4|n}σ(n/4), i.e. 8 Σ_{m|n, 4∤m} m.
        entry("jacobi", &[1, 1, 1, 1], 1, 4, &[(8, 1, 1, 1, 1), (-32, 1, 1, 1, 4)], jacobi_primitive),
        entry(
            "six_squares",
            &[1, 1, 1, 1, 1, 1],
            2,
            4,
            &[(16, 1, -4, 1, 1), (-4, 1, 1, -4, 1)],
            six_squares_primitive,
        ),
        entry(
            "eight_squares",
            &[1, 1, 1, 1, 1, 1, 1, 1],
            3,
            4,
            &[(16, 1, 1, 1, 1), (-32, 1, 1, 1, 2), (256, 1, 1, 1, 4)],
            eight_squares_primitive,
        ),
        entry("q1112", &[1, 1, 1, 2], 1, 8, &[(-2, 1, 1, 8, 1), (8, 1, 8, 1, 1)], p1112),
        entry(
            "q1113",
            &[1, 1, 1, 3],
            1,
            12,
            &[(-1, 1, 1, 12, 1), (6, 1, 12, 1, 1), (3, 1, -3, -4, 1), (-2, 1, -4, -3, 1)],
            p1113,
        ),
        // (2χ₋₄(n) + 4)σ(n) splits as 2σ^{χ₋₄,χ₋₄}(n) + 4σ(n), since
        // χ₋₄(n/m)χ₋₄(m) = χ₋₄(n) for every m | n.
        entry(
            "q1114",
            &[1, 1, 1, 4],
            1,
            16,
            &[(2, 1, -4, -4, 1), (4, 1, 1, 1, 1), (-20, 1, 1, 1, 4), (24, 1, 1, 1, 8), (-32, 1, 1, 1, 16)],
            p1114,
        ),
        entry(
            "q1122",
            &[1, 1, 2, 2],
            1,
            8,
            &[(4, 1, 1, 1, 1), (-4, 1, 1, 1, 2), (8, 1, 1, 1, 4), (-32, 1, 1, 1, 8)],
            p1122,
        ),
        entry(
            "q1115",
            &[1, 1, 1, 5],
            1,
            20,
            &[
                (1, 1, 1, 5, 1),
                (-2, 1, 1, 5, 2),
                (-4, 1, 1, 5, 4),
                (5, 1, 5, 1, 1),
                (10, 1, 5, 1, 2),
                (-20, 1, 5, 1, 4),
            ],
            p1115,
        ),
        entry(
            "q1123",
            &[1, 1, 2, 3],
            1,
            24,
            &[(-1, 3, 1, 24, 1), (4, 1, 24, 1, 1), (-1, 1, -3, -8, 1), (4, 3, -8, -3, 1)],
            p1123,
        ),
        entry("q1124", &[1, 1, 2, 4], 1, 16, &[(-2, 1, 1, 8, 2), (4, 1, 8, 1, 1)], p1124),
        entry("q1222", &[1, 2, 2, 2], 1, 8, &[(-2, 1, 1, 8, 1), (4, 1, 8, 1, 1)], p1222),
        entry(
            "q1133",
            &[1, 1, 3, 3],
            1,
            12,
            &[
                (4, 1, 1, 1, 1),
                (-8, 1, 1, 1, 2),
                (-12, 1, 1, 1, 3),
                (16, 1, 1, 1, 4),
                (24, 1, 1, 1, 6),
                (-48, 1, 1, 1, 12),
            ],
            p1133,
        ),
        entry(
            "q1126",
            &[1, 1, 2, 6],
            1,
            24,
            &[(-1, 1, 1, 12, 2), (3, 1, 12, 1, 1), (3, 1, -3, -4, 2), (1, 1, -4, -3, 1)],
            p1126,
        ),
        entry(
            "q1223",
            &[1, 2, 2, 3],
            1,
            24,
            &[(-1, 1, 1, 12, 2), (3, 1, 12, 1, 1), (-3, 1, -3, -4, 2), (-1, 1, -4, -3, 1)],
            p1223,
        ),
        entry(
            "q1224",
            &[1, 2, 2, 4],
            1,
            16,
            &[(2, 1, 1, 1, 1), (-2, 1, 1, 1, 2), (8, 1, 1, 1, 8), (-32, 1, 1, 1, 16)],
            p1224,
        ),
        entry(
            "q1226",
            &[1, 2, 2, 6],
            1,
            24,
            &[(-1, 3, 1, 24, 1), (2, 1, 24, 1, 1), (1, 1, -3, -8, 1), (-2, 3, -8, -3, 1)],
            p1226,
        ),
        entry("q1244", &[1, 2, 4, 4], 1, 16, &[(-2, 1, 1, 8, 2), (2, 1, 8, 1, 1)], p1244),
        entry(
            "q1246",
            &[1, 2, 4, 6],
            1,
            48,
            &[(-1, 1, 1, 12, 4), (3, 2, 12, 1, 1), (-3, 1, -3, -4, 4), (1, 2, -4, -3, 1)],
            p1246,
        ),
    ];
    for e in &mut v {
        match e.label() {
            "q1115" => e.variants.push(PrintedVariant {
                target: VariantTarget::Primitive,
                description: "2-part (1 + ½δ_{2|n} − (3/2)δ_{4|n} + δ_{8|n}) with coefficient 1 on δ_{8|n}",
                evaluator: p1115_printed,
            }),
            "q1133" => e.variants.push(PrintedVariant {
                target: VariantTarget::Representations,
                description: "term −12·δ_{3|n}·σ(n/2) read literally",
                evaluator: r1133_printed,
            }),
            _ => {}
        }
    }
    v
}

/// Looks an entry up by label or by its form (`"1,1,1,1"`, any order).
pub fn find_entry(key: &str) -> Option<CatalogEntry> {
    let form = key.parse::<DiagonalForm>().ok().map(|f| f.canonical());
    builtin_catalog()
        .into_iter()
        .find(|e| e.label() == key || form.as_ref() == Some(&e.form().canonical()))
}

/// `8 Σ_{m|n, 4∤m} m`.
pub fn jacobi_restricted_sum(n: u64) -> Result<Rational> {
    let nf = factored(n)?;
    let s: u64 = crate::arith::divisors(&nf).into_iter().filter(|m| m % 4 != 0).sum();
    Ok(z(8) * Rational::from_integer(BigInt::from(s)))
}

/// Whether a rational is a nonnegative integer.
pub fn is_count(r: &Rational) -> bool {
    r.is_integer() && !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repnums::{count_primitive, rep_series};

    fn fac(n: u64) -> FactoredInteger {
        factorize(n).unwrap()
    }

    fn get(label: &str) -> CatalogEntry {
        find_entry(label).unwrap()
    }

    #[test]
    fn eighteen_entries_with_distinct_forms() {
        let cat = builtin_catalog();
        assert_eq!(cat.len(), 18);
        let mut forms: Vec<_> = cat.iter().map(|e| e.form().clone()).collect();
        forms.sort_by_key(|f| f.coefficients().to_vec());
        forms.dedup();
        assert_eq!(forms.len(), 18);
    }

    #[test]
    fn documented_values() {
        let jac = get("jacobi").spec;
        assert_eq!(evaluate_formula(&jac, 4).unwrap(), z(24));
        assert_eq!(evaluate_formula(&get("six_squares").spec, 2).unwrap(), z(60));
        assert_eq!(primitive_eisenstein_part(&jac, 4).unwrap(), z(16));
        assert_eq!(primitive_eisenstein_part(&jac, 8).unwrap(), z(0));
        for e in builtin_catalog() {
            let ones: Rational = e
                .spec
                .terms()
                .iter()
                .filter(|t| t.t == 1)
                .map(|t| t.coefficient.clone())
                .sum();
            assert_eq!(evaluate_formula(&e.spec, 1).unwrap(), ones, "{}", e.label());
        }
    }

    #[test]
    fn prefactor_tables() {
        for (n, d) in [(1, 12), (5, 12), (3, 20), (7, 20), (8, 15), (2, 15), (4, 15), (6, 17), (14, 17)] {
            assert_eq!(six_squares_d(n), d);
        }
        assert_eq!(d1115(&fac(25)), q(24, 5));
        assert_eq!(d1115(&fac(50)), q(24, 5));
        let p = get("q1224").primitive;
        // (2 − ½ + 1 − 3/2 − 1)·32·1 at n = 32
        assert_eq!(p.eval(&fac(32)), z(0));
        assert_eq!(p.eval(&fac(3)), z(2 * 3) * q(4, 3));
    }

    #[test]
    fn jacobi_restricted_shape_is_the_dilated_shape() {
        let jac = get("jacobi").spec;
        for n in 1..=3000 {
            assert_eq!(jacobi_restricted_sum(n).unwrap(), evaluate_formula(&jac, n).unwrap());
        }
    }

    #[test]
    fn entries_match_lattice_counts() {
        for e in builtin_catalog() {
            let bound = if e.form().rank() > 4 { 150 } else { 400 };
            let r = rep_series(e.form(), bound);
            for n in 1..=bound {
                let got = evaluate_formula(&e.spec, n).unwrap();
                assert_eq!(got, Rational::from_integer(r.counts[n as usize].into()), "{} n={n}", e.label());
                let rp = Rational::from_integer(count_primitive(e.form(), n).into());
                assert_eq!(e.primitive.eval(&fac(n)), rp, "{} primitive n={n}", e.label());
                assert_eq!(primitive_eisenstein_part(&e.spec, n).unwrap(), rp, "{} termwise n={n}", e.label());
            }
        }
    }

    #[test]
    fn printed_variants_fail_where_expected() {
        let e = get("q1115");
        let v = &e.variants[0];
        assert_eq!(v.target, VariantTarget::Primitive);
        let first = (1..).find(|&n| (v.evaluator)(&fac(n)) != e.primitive.eval(&fac(n))).unwrap();
        assert_eq!(first, 8);
        let e = get("q1133");
        let v = &e.variants[0];
        let first = (1..).find(|&n| (v.evaluator)(&fac(n)) != evaluate_formula(&e.spec, n).unwrap()).unwrap();
        assert_eq!(first, 3);
    }

    #[test]
    fn termwise_equals_definition() {
        for e in builtin_catalog().iter().take(6) {
            for n in 1..=300 {
                let a = primitive_eisenstein_part_scalar(&e.spec, n).unwrap();
                let b = primitive_by_definition(&e.spec, n).unwrap();
                assert!(a.agrees_with(&b, 0.0), "{} n={n}", e.label());
            }
        }
    }

    #[test]
    fn json_round_trip() {
        for e in builtin_catalog() {
            let text = e.spec.to_json();
            assert_eq!(parse_formula_spec(&text).unwrap(), e.spec);
        }
        let jac = parse_formula_spec(&get("jacobi").spec.to_json()).unwrap();
        assert_eq!(jac.terms().len(), 2);
    }

    #[test]
    fn json_diagnostics() {
        let doc = |terms: &str| format!(r#"{{"label":"x","h":1,"terms":[{terms}]}}"#);
        let t0 = doc(r#"{"coeff":"1","psi":"1","phi":"1","t":0}"#);
        assert_eq!(parse_formula_spec(&t0), Err(Error::ZeroDilation));
        assert_eq!(Error::ZeroDilation.to_string(), "dilation must be >= 1");
        let mixed = doc(r#"{"coeff":"1","psi":"1","phi":"1","t":1},{"coeff":"1","psi":"1","phi":"1","t":1,"h":2}"#);
        assert!(matches!(parse_formula_spec(&mixed), Err(Error::MixedWeight { first: 1, second: 2 })));
        assert!(parse_formula_spec(&mixed).unwrap_err().to_string().starts_with("mixed weight"));
        let bad_char = doc(r#"{"coeff":"1","psi":"chi5","phi":"1","t":1}"#);
        assert!(matches!(parse_formula_spec(&bad_char), Err(Error::UnknownCharacter(_))));
        let nonfund = doc(r#"{"coeff":"1","psi":"kron:12","phi":"kron:-12","t":1}"#);
        assert!(matches!(parse_formula_spec(&nonfund), Err(Error::NonFundamentalDiscriminant(-12))));
        assert!(matches!(parse_formula_spec(r#"{"label":"x"}"#), Err(Error::Schema(_))));
        assert!(matches!(parse_formula_spec(&doc(r#"{"coeff":3,"psi":"1","phi":"1","t":1}"#)), Err(Error::Schema(_))));
        assert_eq!(parse_formula_spec(&doc("")), Err(Error::EmptyFormula));
        let big = doc(r#"{"coeff":"1/0","psi":"1","phi":"1","t":1}"#);
        assert!(matches!(parse_formula_spec(&big), Err(Error::BadRational(_))));
    }

    #[test]
    fn general_character_specs_evaluate() {
        let doc = r#"{"label":"g","h":1,"terms":[{"coeff":"2","psi":"mod:5:1","phi":"1","t":1}]}"#;
        let s = parse_formula_spec(doc).unwrap();
        assert!(!s.is_real());
        // 2·(ψ(2)·1 + ψ(1)·2) with ψ(2) = i
        let v = evaluate_formula_scalar(&s, 2).unwrap();
        assert_eq!(v.to_string(), "4+2i");
        assert_eq!(evaluate_formula(&s, 2), Err(Error::NotRational(2)));
    }
}
