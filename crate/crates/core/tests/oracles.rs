//! Worked values checked against small independent oracles written here
//! (plain loops, no shared code with the library), plus the handful of
//! identities quoted verbatim from the source formulas.

use num_bigint::BigInt;
use num_traits::One;

use primrep::arith::{
    delta_divides, divisors, factorize, mobius, ord_p, parse_rational, square_divisor_roots, Rational,
};
use primrep::catalog::{evaluate_formula, find_entry, primitive_eisenstein_part};
use primrep::characters::{enumerate_real_characters, kronecker_symbol, DirichletCharacter};
use primrep::eisenfit::{basis_coefficient, enumerate_triples, infer_level, BasisTriple};
use primrep::repnums::{
    count_primitive, count_representations, primitive_by_inclusion_exclusion, primitive_from_rep,
    rep_from_primitive, rep_series, DiagonalForm,
};
use primrep::twisted_sums::{
    mobius_weighted_sum_bruteforce, mobius_weighted_sum_closed, mobius_weighted_sum_real, primitive_dilated_sum,
    sigma_twisted, split,
};
use primrep::ExactScalar;

fn chi(s: &str) -> DirichletCharacter {
    s.parse().unwrap()
}

fn form(a: &[u64]) -> DiagonalForm {
    DiagonalForm::new(a.to_vec()).unwrap()
}

fn q(a: i64) -> Rational {
    Rational::from_integer(a.into())
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `(count, primitive count)` by looping over every vector in the box.
fn naive_counts(a: &[u64], n: u64) -> (u64, u64) {
    fn go(a: &[u64], left: i64, g: i64, out: &mut (u64, u64)) {
        match a.split_first() {
            None => {
                if left == 0 {
                    out.0 += 1;
                    if g == 1 {
                        out.1 += 1;
                    }
                }
            }
            Some((&c, rest)) => {
                let c = c as i64;
                let mut x = 0i64;
                while c * x * x <= left {
                    for s in if x == 0 { vec![0] } else { vec![x, -x] } {
                        go(rest, left - c * s * s, gcd(g, s), out);
                    }
                    x += 1;
                }
            }
        }
    }
    let mut out = (0, 0);
    go(a, n as i64, 0, &mut out);
    out
}

fn naive_sigma(h: u32, n: u64) -> u64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d.pow(h)).sum()
}

fn mu(n: u64) -> i64 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        -sign
    } else {
        sign
    }
}

fn rational(v: &ExactScalar) -> Rational {
    v.to_rational().expect("real value")
}

#[test]
fn arith_examples() {
    assert!(factorize(1).unwrap().factors().is_empty());
    assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
    assert_eq!(factorize(9973).unwrap().factors(), &[(9973, 1)]);
    assert!(factorize(0).is_err());
    for n in 1..=500u64 {
        assert_eq!(i64::from(mobius(&factorize(n).unwrap())), mu(n), "mu({n})");
        let naive: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        assert_eq!(divisors(&factorize(n).unwrap()), naive);
        let sq: Vec<u64> = (1..=n).filter(|d| n % (d * d) == 0).collect();
        assert_eq!(square_divisor_roots(&factorize(n).unwrap()), sq);
    }
    assert_eq!(square_divisor_roots(&factorize(144).unwrap()), vec![1, 2, 3, 4, 6, 12]);
    assert_eq!((delta_divides(4, 12), delta_divides(8, 12)), (1, 0));
    assert_eq!(ord_p(3, &factorize(81).unwrap()).unwrap(), 4);
    assert_eq!(ord_p(5, &factorize(12).unwrap()).unwrap(), 0);
    assert_eq!(parse_rational("-7/2").unwrap(), Rational::new((-7).into(), 2.into()));
}

#[test]
fn kronecker_against_euler_criterion() {
    // for odd primes p ∤ D, (D/p) ≡ D^{(p-1)/2} (mod p)
    let primes = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43];
    for d in [-4i64, -3, -7, -8, 5, 8, 12, 13, -15, 24] {
        for &p in &primes {
            let k = kronecker_symbol(d, p as i64);
            if (d.rem_euclid(p as i64)) == 0 {
                assert_eq!(k, 0);
                continue;
            }
            let mut acc = 1u64;
            let base = d.rem_euclid(p as i64) as u64;
            for _ in 0..(p - 1) / 2 {
                acc = acc * base % p;
            }
            let euler = if acc == 1 { 1 } else { -1 };
            assert_eq!(i64::from(k), euler, "({d}/{p})");
        }
    }
    assert_eq!(kronecker_symbol(-4, 3), -1);
    assert_eq!(kronecker_symbol(8, 7), 1);
    assert_eq!(chi("kron:-4").parity(), -1);
    assert_eq!(chi("kron:8").parity(), 1);
}

#[test]
fn real_characters_are_the_fundamental_discriminants() {
    let names = |b| -> Vec<i64> {
        let mut v: Vec<i64> = enumerate_real_characters(b).iter().map(|c| c.discriminant().unwrap()).collect();
        v.sort_unstable();
        v
    };
    assert_eq!(names(1), vec![1]);
    assert_eq!(names(4), vec![-4, -3, 1]);
    assert_eq!(names(8), vec![-8, -7, -4, -3, 1, 5, 8]);
}

#[test]
fn representation_counts_against_naive_loops() {
    let forms: [&[u64]; 6] = [&[1, 1, 1, 1], &[1, 1, 1, 2], &[1, 2, 4, 6], &[1, 1, 3, 3], &[1, 1, 1, 1, 1, 1], &[2, 3]];
    for a in forms {
        let f = form(a);
        let series = rep_series(&f, 80);
        for n in 1..=80 {
            let (r, rp) = naive_counts(a, n);
            assert_eq!(count_representations(&f, n), r as u128, "{a:?} r({n})");
            assert_eq!(count_primitive(&f, n), rp as u128, "{a:?} r^p({n})");
            assert_eq!(series.counts[n as usize], r as u128);
        }
    }
    assert_eq!(count_representations(&form(&[1, 1, 1, 1]), 4), 24);
    assert_eq!(count_primitive(&form(&[1, 1, 1, 1]), 4), 16);
    assert_eq!(count_representations(&form(&[1; 6]), 2), 60);
    assert_eq!(rep_series(&form(&[1]), 4).counts, vec![1, 2, 0, 0, 2]);
    assert_eq!(rep_series(&form(&[1, 1, 1, 1]), 4).counts, vec![1, 8, 24, 32, 24]);
    assert_eq!(rep_series(&form(&[2]), 2).counts, vec![1, 0, 2]);
}

#[test]
fn transforms_on_four_squares() {
    let f = form(&[1, 1, 1, 1]);
    let r = |m: u64| count_representations(&f, m) as i64;
    let rp = |m: u64| count_primitive(&f, m) as i64;
    let n4 = factorize(4).unwrap();
    assert_eq!(primitive_from_rep(r, &n4), 16);
    assert_eq!(primitive_from_rep(r, &factorize(8).unwrap()), 0);
    assert_eq!(rep_from_primitive(rp, &n4), 24);
    assert_eq!(rep_from_primitive(rp, &factorize(16).unwrap()), 24);
    let n36 = factorize(36).unwrap();
    assert_eq!(primitive_by_inclusion_exclusion(r, &n36), primitive_from_rep(r, &n36));
    assert_eq!(primitive_by_inclusion_exclusion(r, &n4), r(4) - r(1));
}

#[test]
fn split_examples() {
    let s = split(&factorize(12).unwrap(), 4, 1).unwrap();
    assert!(s.u_part.is_empty() && s.q_part.is_empty());
    assert_eq!(s.p_part, vec![(2, 2)]);
    assert_eq!((s.n1.value(), s.n2.value(), s.n3.value()), (3, 12, 12));
    let s = split(&factorize(36).unwrap(), 4, 3).unwrap();
    assert_eq!((s.p_part.clone(), s.q_part.clone()), (vec![(2, 2)], vec![(3, 2)]));
    assert_eq!((s.n1.value(), s.n2.value(), s.n3.value()), (1, 4, 36));
    assert_eq!(s.recompose(), 36);
}

#[test]
fn twisted_sums_against_naive_divisor_loops() {
    let one = chi("1");
    for h in 0..=3u32 {
        for n in 1..=200u64 {
            assert_eq!(rational(&sigma_twisted(&one, &one, h, n).unwrap()), q(naive_sigma(h, n) as i64));
            // literal double sum with the trivial pair
            let lit: i64 = (1..=n)
                .filter(|d| n % (d * d) == 0)
                .map(|d| mu(d) * naive_sigma(h, n / (d * d)) as i64)
                .sum();
            let lit = q(lit);
            assert_eq!(rational(&mobius_weighted_sum_bruteforce(&one, &one, h, n).unwrap()), lit);
            assert_eq!(rational(&mobius_weighted_sum_closed(&one, &one, h, n).unwrap()), lit);
        }
    }
    // twisted by χ₋₄ in the first slot: Σ_{m|n} χ(n/m) m^h
    let k4 = chi("kron:-4");
    for n in 1..=200u64 {
        let naive: i64 = (1..=n)
            .filter(|m| n % m == 0)
            .map(|m| i64::from(kronecker_symbol(-4, (n / m) as i64)) * (m * m) as i64)
            .sum();
        assert_eq!(rational(&sigma_twisted(&k4, &one, 2, n).unwrap()), q(naive));
    }
    assert_eq!(rational(&sigma_twisted(&one, &one, 1, 6).unwrap()), q(12));
    assert_eq!(rational(&sigma_twisted(&k4, &one, 2, 2).unwrap()), q(4));
    assert_eq!(rational(&mobius_weighted_sum_bruteforce(&one, &one, 1, 12).unwrap()), q(24));
    assert_eq!(rational(&mobius_weighted_sum_bruteforce(&one, &one, 1, 4).unwrap()), q(6));
    let at12 = mobius_weighted_sum_bruteforce(&one, &k4, 2, 12).unwrap();
    assert_eq!(mobius_weighted_sum_real(&one, &k4, 2, 12).unwrap(), at12);
}

#[test]
fn dilated_sums() {
    let one = chi("1");
    assert_eq!(rational(&primitive_dilated_sum(&one, &one, 1, 4, 4).unwrap()), q(1));
    assert_eq!(rational(&primitive_dilated_sum(&one, &one, 1, 4, 16).unwrap()), q(6));
    assert_eq!(rational(&primitive_dilated_sum(&one, &one, 1, 4, 6).unwrap()), q(0));
}

#[test]
fn closed_form_examples_from_the_text() {
    // n·Π_{p|n}(1 + 1/p) and (1 − δ_{4|n}/16)·n²·Π_{p|n}(1 + χ₋₄(p)/p²)
    let one = chi("1");
    let k4 = chi("kron:-4");
    for n in 1..=500u64 {
        let nf = factorize(n).unwrap();
        let psi1: Rational = nf.primes().map(|p| Rational::one() + Rational::new(1.into(), p.into())).product();
        assert_eq!(rational(&mobius_weighted_sum_real(&one, &one, 1, n).unwrap()), q(n as i64) * psi1);
        let euler: Rational = nf
            .primes()
            .map(|p| Rational::one() + Rational::new(kronecker_symbol(-4, p as i64).into(), BigInt::from(p * p)))
            .product();
        let lead = Rational::one() - Rational::new(i64::from(n % 4 == 0).into(), 16.into());
        let want = lead * q((n * n) as i64) * euler;
        assert_eq!(rational(&mobius_weighted_sum_closed(&k4, &one, 2, n).unwrap()), want, "n={n}");
    }
}

#[test]
fn catalog_examples() {
    let jac = find_entry("jacobi").unwrap().spec;
    let six = find_entry("six_squares").unwrap().spec;
    assert_eq!(evaluate_formula(&jac, 4).unwrap(), q(24));
    assert_eq!(evaluate_formula(&six, 2).unwrap(), q(60));
    assert_eq!(primitive_eisenstein_part(&jac, 4).unwrap(), q(16));
    for m in 1..=200 {
        assert_eq!(primitive_eisenstein_part(&jac, 8 * m).unwrap(), q(0));
    }
    // any spec at n = 1: the sum of the undilated coefficients
    let at_one: Rational = jac.terms().iter().filter(|t| t.t == 1).map(|t| t.coefficient.clone()).sum();
    assert_eq!(evaluate_formula(&jac, 1).unwrap(), at_one);
}

#[test]
fn q1224_primitive_form() {
    // r^p = (2 − ½δ₄ + δ₈ − (3/2)δ₁₆ − δ₃₂)·n·Π_{p≠2, p|n}(1 + 1/p) for 1,2,2,4
    let e = find_entry("q1224").unwrap();
    let f = form(&[1, 2, 2, 4]);
    let half = |a: i64| Rational::new(a.into(), 2.into());
    for n in 1..=400u64 {
        let nf = factorize(n).unwrap();
        let d = |k: u64| q(delta_divides(k, n) as i64);
        let c = q(2) - half(1) * d(4) + d(8) - half(3) * d(16) - d(32);
        let euler: Rational = nf
            .primes()
            .filter(|&p| p != 2)
            .map(|p| Rational::one() + Rational::new(1.into(), p.into()))
            .product();
        let want = c * q(n as i64) * euler;
        assert_eq!(e.primitive.eval(&nf), want, "n={n}");
        assert_eq!(q(naive_counts(&[1, 2, 2, 4], n).1 as i64), want, "n={n}");
        assert_eq!(count_primitive(&f, n) as i64, naive_counts(&[1, 2, 2, 4], n).1 as i64);
    }
}

#[test]
fn q1115_prefactor_at_multiples_of_25() {
    // 1,1,1,5: r^p(n) = d₆(n)·(2-part)·n·Π_{2≠p|n}(1 + χ₅(p)/p) with d₆ = 24/5
    // when 25 | n; for odd n the 2-part is 1, so d₆ is read off the oracle
    let e = find_entry("q1115").unwrap();
    let series = rep_series(e.form(), 2000);
    let r = |m: u64| series.counts[m as usize] as i64;
    for n in (25..=2000u64).step_by(50) {
        let nf = factorize(n).unwrap();
        let rp = q(primitive_from_rep(r, &nf));
        assert_eq!(e.primitive.eval(&nf), rp, "n={n}");
        let euler: Rational = nf
            .primes()
            .filter(|&p| p != 2)
            .map(|p| Rational::one() + Rational::new(kronecker_symbol(5, p as i64).into(), p.into()))
            .product();
        assert_eq!(rp / (q(n as i64) * euler), Rational::new(24.into(), 5.into()), "n={n}");
    }
}

#[test]
fn eisenstein_basis_examples() {
    let names: Vec<String> = enumerate_triples(4, 2, true).iter().map(|t| t.to_string()).collect();
    assert_eq!(names, vec!["(1, 1, t=2, k=2)", "(1, 1, t=4, k=2)"]);
    assert!(enumerate_triples(1, 2, true).is_empty());
    for t in enumerate_triples(4, 3, true) {
        assert_eq!(t.psi.parity() * t.phi.parity(), -1);
    }
    let tr = BasisTriple {
        psi: chi("1"),
        phi: chi("1"),
        t: 4,
        k: 2,
    };
    assert_eq!(rational(&basis_coefficient(&tr, 4).unwrap()), q(3));
    let tr = BasisTriple {
        psi: chi("kron:-4"),
        phi: chi("1"),
        t: 1,
        k: 3,
    };
    assert_eq!(rational(&basis_coefficient(&tr, 2).unwrap()), q(4));
    assert_eq!(infer_level(&form(&[1, 1, 1, 1])), 4);
    assert_eq!(infer_level(&form(&[1, 1, 1, 2])), 8);
    assert_eq!(infer_level(&form(&[1, 1, 2, 6])), 24);
}
