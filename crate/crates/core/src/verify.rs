//! Exhaustive checks of catalog entries against the lattice-point oracles,
//! summarized in a deterministic report.

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{factorize, format_rational, Rational};
use crate::catalog::{evaluate_formula, is_count, primitive_eisenstein_part, CatalogEntry, VariantTarget};
use crate::error::{Error, Result};
use crate::repnums::{enumeration_table, primitive_by_inclusion_exclusion, primitive_from_rep, rep_series};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub n: u64,
    pub left: String,
    pub right: String,
}

/// One identity checked over the whole range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub checked: u64,
    pub failures: u64,
    pub first_counterexample: Option<Counterexample>,
}

impl CheckReport {
    fn new(name: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            checked: 0,
            failures: 0,
            first_counterexample: None,
        }
    }

    fn record(&mut self, n: u64, left: &Rational, right: &Rational) {
        self.record_with(n, left == right, || (format_rational(left), format_rational(right)));
    }

    fn record_with(&mut self, n: u64, ok: bool, shown: impl FnOnce() -> (String, String)) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first_counterexample.is_none() {
                let (left, right) = shown();
                self.first_counterexample = Some(Counterexample { n, left, right });
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Outcome for a typeset reading that differs from the stored formula.
/// Whether it holds is informational; it does not affect `passed`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VariantReport {
    pub description: String,
    pub target: &'static str,
    pub holds: bool,
    pub first_counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub label: String,
    pub form: String,
    pub level: u64,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
    pub variants: Vec<VariantReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub range: (u64, u64),
    pub all_passed: bool,
    pub entries: Vec<EntryReport>,
}

impl VerifyReport {
    pub fn new(range: (u64, u64), entries: Vec<EntryReport>) -> Self {
        VerifyReport {
            schema_version: SCHEMA_VERSION,
            range,
            all_passed: entries.iter().all(|e| e.passed),
            entries,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// Checks one entry on `lo..=hi`:
/// - formula vs. series convolution and vs. enumeration,
/// - printed primitive form vs. enumeration and vs. the Möbius transform of
///   the series,
/// - termwise primitive part vs. enumeration,
/// - inclusion–exclusion vs. Möbius transform,
/// - the primitive form is a nonnegative integer.
pub fn verify_entry(entry: &CatalogEntry, lo: u64, hi: u64) -> Result<EntryReport> {
    if lo == 0 || lo > hi {
        return Err(Error::BadRange(format!("{lo}..{hi}")));
    }
    let form = entry.form();
    let series = rep_series(form, hi);
    let table = enumeration_table(form, hi);
    let r = |m: u64| series.counts[m as usize] as i128;

    let mut by_series = CheckReport::new("r: formula = series");
    let mut by_loop = CheckReport::new("r: formula = enumeration");
    let mut closed_loop = CheckReport::new("r^p: closed form = enumeration");
    let mut closed_mobius = CheckReport::new("r^p: closed form = mobius(series)");
    let mut termwise = CheckReport::new("r^p: termwise primitive part = enumeration");
    let mut incl_excl = CheckReport::new("r^p: inclusion-exclusion = mobius(series)");
    let mut integral = CheckReport::new("r^p: closed form is a nonnegative integer");
    let mut variant_checks: Vec<CheckReport> = entry.variants.iter().map(|v| CheckReport::new(v.description)).collect();

    for n in lo..=hi {
        let nf = factorize(n)?;
        let f = evaluate_formula(&entry.spec, n)?;
        let rs = int(series.counts[n as usize]);
        by_series.record(n, &f, &rs);
        by_loop.record(n, &f, &int(table.counts[n as usize]));

        let rp_loop = int(table.primitive[n as usize]);
        let mob: i128 = primitive_from_rep(r, &nf);
        let ie: i128 = primitive_by_inclusion_exclusion(r, &nf);
        let closed = entry.primitive.eval(&nf);
        closed_loop.record(n, &closed, &rp_loop);
        closed_mobius.record(n, &closed, &int(mob));
        termwise.record(n, &primitive_eisenstein_part(&entry.spec, n)?, &rp_loop);
        incl_excl.record(n, &int(ie), &int(mob));
        integral.record_with(n, is_count(&closed), || (format_rational(&closed), "a count".into()));

        for (v, check) in entry.variants.iter().zip(&mut variant_checks) {
            let truth = match v.target {
                VariantTarget::Representations => &rs,
                VariantTarget::Primitive => &rp_loop,
            };
            check.record(n, &(v.evaluator)(&nf), truth);
        }
    }
    let checks = vec![by_series, by_loop, closed_loop, closed_mobius, termwise, incl_excl, integral];
    let variants = entry
        .variants
        .iter()
        .zip(variant_checks)
        .map(|(v, c)| VariantReport {
            description: v.description.to_string(),
            target: match v.target {
                VariantTarget::Representations => "r",
                VariantTarget::Primitive => "r^p",
            },
            holds: c.passed(),
            first_counterexample: c.first_counterexample,
        })
        .collect();
    Ok(EntryReport {
        label: entry.label().to_string(),
        form: form.to_string(),
        level: entry.level,
        passed: checks.iter().all(CheckReport::passed),
        checks,
        variants,
    })
}

/// [`verify_entry`] over several entries, in the given order.
pub fn verify_entries(entries: &[CatalogEntry], lo: u64, hi: u64) -> Result<VerifyReport> {
    let reports = entries.iter().map(|e| verify_entry(e, lo, hi)).collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::new((lo, hi), reports))
}
