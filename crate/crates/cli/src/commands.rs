use std::path::Path;

use anyhow::{anyhow, bail, Context};
use rayon::prelude::*;

use primrep::arith::{factorize, format_rational};
use primrep::catalog::{builtin_catalog, evaluate_formula, find_entry, CatalogEntry};
use primrep::eisenfit::fit_form;
use primrep::repnums::{count_primitive, count_representations, primitive_from_rep, rep_series};
use primrep::twisted_sums::{mobius_weighted_sum_bruteforce, mobius_weighted_sum_closed, mobius_weighted_sum_real};
use primrep::verify::{verify_entry, VerifyReport};
use primrep::{DiagonalForm, DirichletCharacter, Error, ExactScalar};

use crate::output::{Format, Table};
use crate::{Method, Oracle, Outcome, Span};

fn emit(table: &Table, format: Format) {
    print!("{}", table.render(format));
}

fn catalog_entry(form: &DiagonalForm) -> anyhow::Result<CatalogEntry> {
    let key = form.canonical().to_string();
    find_entry(&key).ok_or_else(|| anyhow!("no catalog formula for the form {key}"))
}

pub fn rep(form: &DiagonalForm, span: Span, primitive: bool, oracle: Oracle, format: Format) -> anyhow::Result<Outcome> {
    let ns: Vec<u64> = span.iter().collect();
    let values: Vec<String> = match oracle {
        Oracle::Loop => ns
            .par_iter()
            .map(|&n| {
                if primitive {
                    count_primitive(form, n)
                } else {
                    count_representations(form, n)
                }
                .to_string()
            })
            .collect(),
        Oracle::Series => {
            let series = rep_series(form, span.hi);
            let r = |m: u64| series.counts[m as usize] as i128;
            ns.par_iter()
                .map(|&n| {
                    if primitive {
                        primitive_from_rep::<i128, _>(r, &factorize(n).expect("n >= 1")).to_string()
                    } else {
                        series.counts[n as usize].to_string()
                    }
                })
                .collect()
        }
        Oracle::Formula => {
            let entry = catalog_entry(form)?;
            ns.par_iter()
                .map(|&n| {
                    let v = if primitive {
                        entry.primitive.eval(&factorize(n)?)
                    } else {
                        evaluate_formula(&entry.spec, n)?
                    };
                    Ok(format_rational(&v))
                })
                .collect::<primrep::Result<_>>()?
        }
    };
    let mut table = Table::new(&[if primitive { "r^p" } else { "r" }]);
    table.rows = ns.into_iter().zip(values).map(|(n, v)| (n, vec![v])).collect();
    emit(&table, format);
    Ok(Outcome::Ok)
}

pub fn verify(entry: &str, span: Span, report_path: Option<&Path>) -> anyhow::Result<Outcome> {
    let entries = if entry == "all" {
        builtin_catalog()
    } else {
        let found = find_entry(entry).or_else(|| entry.parse::<DiagonalForm>().ok().and_then(|f| catalog_entry(&f).ok()));
        vec![found.ok_or_else(|| anyhow!("unknown catalog entry {entry:?}"))?]
    };
    let reports = entries
        .par_iter()
        .map(|e| verify_entry(e, span.lo, span.hi))
        .collect::<primrep::Result<Vec<_>>>()?;
    let report = VerifyReport::new((span.lo, span.hi), reports);
    for e in &report.entries {
        let status = if e.passed { "PASS" } else { "FAIL" };
        println!("{status} {} ({}) level {} on {}..{}", e.label, e.form, e.level, span.lo, span.hi);
        for c in e.checks.iter().filter(|c| !c.passed()) {
            let at = c.first_counterexample.as_ref().expect("failing check has a counterexample");
            println!("  {}: {} failures, first n={} ({} vs {})", c.name, c.failures, at.n, at.left, at.right);
        }
        for v in &e.variants {
            match &v.first_counterexample {
                Some(c) => println!(
                    "  note: printed reading \"{}\" fails, first n={} ({} vs {} for {})",
                    v.description, c.n, c.left, c.right, v.target
                ),
                None => println!("  note: printed reading \"{}\" also holds on this range", v.description),
            }
        }
    }
    if let Some(path) = report_path {
        std::fs::write(path, report_json(&report)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if report.all_passed { Outcome::Ok } else { Outcome::Failed })
}

fn report_json(report: &VerifyReport) -> String {
    let mut s = report.to_json();
    s.push('\n');
    s
}

fn agree(a: &ExactScalar, b: &ExactScalar, n: u64, h: u32) -> bool {
    if a.is_exact() && b.is_exact() {
        a == b
    } else {
        a.agrees_with(b, 1e-9 * (n as f64).powi(h as i32).max(1.0))
    }
}

pub fn thm2(
    psi: &DirichletCharacter,
    phi: &DirichletCharacter,
    h: u32,
    span: Span,
    method: Method,
    format: Format,
) -> anyhow::Result<Outcome> {
    if method == Method::Real && !psi.is_real() {
        bail!("method real needs a real character psi, got {psi}");
    }
    let with_real = method == Method::Real || (method == Method::Both && psi.is_real());
    let columns: Vec<&str> = match method {
        Method::Brute => vec!["brute"],
        Method::Closed => vec!["closed"],
        Method::Real => vec!["real"],
        Method::Both if with_real => vec!["brute", "closed", "real", "equal"],
        Method::Both => vec!["brute", "closed", "equal"],
    };
    let ns: Vec<u64> = span.iter().collect();
    let rows = ns
        .par_iter()
        .map(|&n| -> primrep::Result<(u64, Vec<String>, bool)> {
            let mut vals = Vec::new();
            if matches!(method, Method::Brute | Method::Both) {
                vals.push(mobius_weighted_sum_bruteforce(psi, phi, h, n)?);
            }
            if matches!(method, Method::Closed | Method::Both) {
                vals.push(mobius_weighted_sum_closed(psi, phi, h, n)?);
            }
            if with_real {
                vals.push(mobius_weighted_sum_real(psi, phi, h, n)?);
            }
            let equal = vals.windows(2).all(|w| agree(&w[0], &w[1], n, h));
            let mut shown: Vec<String> = vals.iter().map(ToString::to_string).collect();
            if method == Method::Both {
                shown.push(if equal { "yes" } else { "no" }.to_string());
            }
            Ok((n, shown, equal))
        })
        .collect::<primrep::Result<Vec<_>>>()?;
    let all_equal = rows.iter().all(|r| r.2);
    let mut table = Table::new(&columns);
    table.rows = rows.into_iter().map(|(n, v, _)| (n, v)).collect();
    emit(&table, format);
    Ok(if all_equal { Outcome::Ok } else { Outcome::Failed })
}

pub fn fit(form: &DiagonalForm, level: Option<u64>, train: Span, validate: Span, out: Option<&Path>) -> anyhow::Result<Outcome> {
    let result = match fit_form(form, level, train.iter(), validate.iter()) {
        Ok(r) => r,
        Err(e @ Error::InconsistentSystem { .. }) => {
            eprintln!("fit failed: {e}");
            return Ok(Outcome::Failed);
        }
        Err(e) => return Err(e.into()),
    };
    for (triple, c) in result.coefficients.iter().filter(|(_, c)| *c != primrep::Rational::default()) {
        eprintln!("{triple}: {}", format_rational(c));
    }
    if !result.residual_ok {
        match result.first_mismatch {
            Some(n) => eprintln!("fit failed: the combination misses the target at n={n}"),
            None => eprintln!("fit failed: validation is inconsistent with the training solution"),
        }
        return Ok(Outcome::Failed);
    }
    if !result.is_pinned() {
        eprintln!(
            "fit not determined: the point above is the least-norm solution; free directions over the basis order:"
        );
        for d in &result.free_directions {
            let shown: Vec<String> = d.iter().map(format_rational).collect();
            eprintln!("  [{}]", shown.join(", "));
        }
        return Ok(Outcome::Failed);
    }
    let label = format!("fit {}", form);
    let spec = result.to_formula_spec(&label, Some(form.clone()))?;
    let mut json = spec.to_json();
    json.push('\n');
    match out {
        Some(path) => std::fs::write(path, json).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{json}"),
    }
    Ok(Outcome::Ok)
}

pub fn character(chi: &DirichletCharacter, length: Option<u64>, format: Format) -> anyhow::Result<Outcome> {
    let len = length.unwrap_or(chi.modulus());
    if len == 0 {
        bail!("table length must be at least 1");
    }
    let mut table = Table::new(&["value"]);
    table.rows = (0..len)
        .map(|m| (m, vec![chi.value_u64(m).map_or("0".to_string(), |r| r.to_string())]))
        .collect();
    emit(&table, format);
    Ok(Outcome::Ok)
}
