//! Representation numbers of diagonal quadratic forms, their primitive
//! counterparts, and Möbius-weighted twisted divisor sums.
//!
//! `r_a(n)` counts `x ∈ ℤ^k` with `Σ aᵢxᵢ² = n`; `r^p_a(n)` counts those with
//! `gcd(x) = 1`. The two are related by `r^p(n) = Σ_{d²|n} μ(d) r(n/d²)`,
//! and when `r_a` is a combination of twisted sums `σ_h^{ψ,φ}` the primitive
//! count has a product form, see [`twisted_sums`].

pub mod arith;
pub mod catalog;
pub mod characters;
pub mod eisenfit;
pub mod error;
pub mod linalg;
mod modp;
pub mod repnums;
pub mod scalar;
pub mod sweep;
pub mod twisted_sums;
pub mod verify;

pub use arith::{factorize, FactoredInteger, Rational};
pub use catalog::{
    builtin_catalog, evaluate_formula, find_entry, parse_formula_spec, primitive_eisenstein_part, CatalogEntry,
    FormulaSpec, FormulaTerm, PrimitiveClosedForm,
};
pub use characters::DirichletCharacter;
pub use eisenfit::{BasisTriple, FitResult};
pub use error::{Error, Result};
pub use repnums::{count_primitive, count_representations, rep_series, DiagonalForm, RepSeries};
pub use scalar::{ExactScalar, GaussianRational, RootOfUnity};
pub use twisted_sums::{
    mobius_weighted_sum_bruteforce, mobius_weighted_sum_closed, mobius_weighted_sum_real, sigma_twisted,
};
