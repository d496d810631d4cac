//! Representation numbers of diagonal forms `a₁x₁² + … + a_k x_k²`.
//!
//! Two independent oracles: a symmetry-reduced nested enumeration (which also
//! sees `gcd(x)` and so counts primitive solutions directly) and truncated
//! power-series convolution of the one-variable theta series. The Möbius
//! transforms between `r` and `r^p` live here too.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_integer::{Integer, Roots};
use num_traits::Zero;

use crate::arith::{mobius, square_divisor_roots, FactoredInteger};
use crate::error::{Error, Result};

/// Coefficient vector of a positive diagonal quadratic form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagonalForm {
    coefficients: Vec<u64>,
}

impl DiagonalForm {
    pub fn new(coefficients: Vec<u64>) -> Result<Self> {
        if coefficients.is_empty() || coefficients.contains(&0) {
            let text = coefficients
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",");
            return Err(Error::BadForm(text));
        }
        Ok(DiagonalForm { coefficients })
    }

    /// `k` copies of `x²`.
    pub fn sum_of_squares(k: usize) -> Self {
        DiagonalForm {
            coefficients: vec![1; k.max(1)],
        }
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    /// Number of variables `k`.
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// The same form with coefficients sorted ascending.
    pub fn canonical(&self) -> Self {
        let mut c = self.coefficients.clone();
        c.sort_unstable();
        DiagonalForm { coefficients: c }
    }

    /// `(a, multiplicity)` pairs, ascending in `a`.
    fn groups(&self) -> Vec<(u64, usize)> {
        let mut c = self.coefficients.clone();
        c.sort_unstable();
        let mut out: Vec<(u64, usize)> = Vec::new();
        for a in c {
            match out.last_mut() {
                Some((b, m)) if *b == a => *m += 1,
                _ => out.push((a, 1)),
            }
        }
        out
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for DiagonalForm {
    type Err = Error;

    /// Parses `"a1,a2,..."`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadForm(s.to_string());
        let coefficients = s
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        DiagonalForm::new(coefficients).map_err(|_| bad())
    }
}

impl serde::Serialize for DiagonalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coefficients.serialize(s)
    }
}

/// Truncated theta series: `counts[n] = r_a(n)` for `0 <= n <= bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepSeries {
    pub form: DiagonalForm,
    pub bound: u64,
    pub counts: Vec<u128>,
}

impl RepSeries {
    pub fn get(&self, n: u64) -> Option<u128> {
        self.counts.get(n as usize).copied()
    }
}

fn checked(a: u128, b: u128) -> u128 {
    a.checked_add(b).expect("representation count overflowed u128")
}

/// Theta series of the form up to `q^bound`, by iterated convolution.
pub fn rep_series(form: &DiagonalForm, bound: u64) -> RepSeries {
    let len = bound as usize + 1;
    let mut acc = vec![0u128; len];
    acc[0] = 1;
    for &a in form.coefficients() {
        let mut next = vec![0u128; len];
        let xmax = (bound / a).sqrt();
        for x in 0..=xmax {
            let s = (a * x * x) as usize;
            let mult = if x == 0 { 1 } else { 2 };
            for i in 0..len - s {
                if acc[i] != 0 {
                    next[i + s] = checked(next[i + s], mult * acc[i]);
                }
            }
        }
        acc = next;
    }
    RepSeries {
        form: form.clone(),
        bound,
        counts: acc,
    }
}

/// Enumerates representatives `x` of the orbits of sign changes and
/// permutations of equal coefficients, calling `visit(Q(x), orbit size,
/// gcd(x))` for each vector with `Q(x) <= bound` (or exactly `target`).
struct Enumerator<'a, F> {
    vars: Vec<(u64, bool)>, // (coefficient, starts a new group)
    group_left: Vec<usize>, // variables remaining in the group, including this one
    fact: Vec<u128>,
    bound: u64,
    target: Option<u64>,
    visit: &'a mut F,
    xs: Vec<u64>,
}

impl<F: FnMut(u64, u128, u64)> Enumerator<'_, F> {
    fn weight(&self) -> u128 {
        let mut w: u128 = 1;
        let mut i = 0;
        while i < self.vars.len() {
            let mut j = i + 1;
            while j < self.vars.len() && !self.vars[j].1 {
                j += 1;
            }
            // group [i, j): multinomial over runs of equal values
            let mut denom: u128 = 1;
            let mut run = 1;
            for t in i + 1..j {
                if self.xs[t] == self.xs[t - 1] {
                    run += 1;
                } else {
                    denom *= self.fact[run];
                    run = 1;
                }
            }
            denom *= self.fact[run];
            w *= self.fact[j - i] / denom;
            i = j;
        }
        let nonzero = self.xs.iter().filter(|&&x| x != 0).count();
        w << nonzero
    }

    fn go(&mut self, idx: usize, value: u64, g: u64) {
        let (a, fresh) = self.vars[idx];
        let lo = if fresh { 0 } else { self.xs[idx - 1] };
        let left = self.group_left[idx] as u64;
        let limit = self.target.unwrap_or(self.bound);
        if idx + 1 == self.vars.len() {
            if let Some(t) = self.target {
                let rem = t - value;
                if rem % a != 0 {
                    return;
                }
                let x = (rem / a).sqrt();
                if x * x * a == rem && x >= lo {
                    self.xs[idx] = x;
                    let w = self.weight();
                    (self.visit)(t, w, g.gcd(&x));
                }
                return;
            }
        }
        let mut x = lo;
        loop {
            let used = value + a * x * x * left;
            if used > limit {
                break;
            }
            self.xs[idx] = x;
            let v = value + a * x * x;
            if idx + 1 == self.vars.len() {
                let w = self.weight();
                (self.visit)(v, w, g.gcd(&x));
            } else {
                self.go(idx + 1, v, g.gcd(&x));
            }
            x += 1;
        }
    }
}

fn enumerate<F: FnMut(u64, u128, u64)>(
    form: &DiagonalForm,
    bound: u64,
    target: Option<u64>,
    visit: &mut F,
) {
    let mut vars = Vec::new();
    let mut group_left = Vec::new();
    for (a, m) in form.groups() {
        for i in 0..m {
            vars.push((a, i == 0));
            group_left.push(m - i);
        }
    }
    let k = vars.len();
    let mut fact = vec![1u128; k + 1];
    for i in 1..=k {
        fact[i] = fact[i - 1] * i as u128;
    }
    let mut e = Enumerator {
        vars,
        group_left,
        fact,
        bound,
        target,
        visit,
        xs: vec![0; k],
    };
    e.go(0, 0, 0);
}

/// `r_a(n)` by nested enumeration of `|x_i| <= sqrt(n / a_i)`.
pub fn count_representations(form: &DiagonalForm, n: u64) -> u128 {
    let mut total = 0u128;
    enumerate(form, n, Some(n), &mut |_, w, _| total = checked(total, w));
    total
}

/// `r^p_a(n)`: solutions with `gcd(x) = 1`. The zero vector has gcd 0, so
/// `n = 0` has no primitive representation.
pub fn count_primitive(form: &DiagonalForm, n: u64) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut total = 0u128;
    enumerate(form, n, Some(n), &mut |_, w, g| {
        if g == 1 {
            total = checked(total, w);
        }
    });
    total
}

/// Both counts for every `n <= bound` from one enumeration pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationTable {
    pub counts: Vec<u128>,
    pub primitive: Vec<u128>,
}

/// Tabulates `r_a(n)` and `r^p_a(n)` for `n <= bound` by enumeration.
pub fn enumeration_table(form: &DiagonalForm, bound: u64) -> EnumerationTable {
    let len = bound as usize + 1;
    let mut counts = vec![0u128; len];
    let mut primitive = vec![0u128; len];
    enumerate(form, bound, None, &mut |v, w, g| {
        counts[v as usize] = checked(counts[v as usize], w);
        if g == 1 {
            primitive[v as usize] = checked(primitive[v as usize], w);
        }
    });
    EnumerationTable { counts, primitive }
}

/// `Σ_{d² | n} μ(d) r(n/d²)`.
pub fn primitive_from_rep<T, F>(r: F, n: &FactoredInteger) -> T
where
    T: Zero + Add<Output = T> + Sub<Output = T>,
    F: Fn(u64) -> T,
{
    let mut acc = T::zero();
    for d in square_divisor_roots(n) {
        let df = crate::arith::factorize(d).expect("d >= 1");
        match mobius(&df) {
            1 => acc = acc + r(n.value() / (d * d)),
            -1 => acc = acc - r(n.value() / (d * d)),
            _ => {}
        }
    }
    acc
}

/// `Σ_{d² | n} r^p(n/d²)`.
pub fn rep_from_primitive<T, F>(rp: F, n: &FactoredInteger) -> T
where
    T: Zero + Add<Output = T>,
    F: Fn(u64) -> T,
{
    square_divisor_roots(n)
        .into_iter()
        .fold(T::zero(), |acc, d| acc + rp(n.value() / (d * d)))
}

/// `Σ_{S ⊆ primes(n)} (-1)^{|S|} r(n / Π_{p∈S} p²)`, skipping subsets whose
/// squared product does not divide `n`.
pub fn primitive_by_inclusion_exclusion<T, F>(r: F, n: &FactoredInteger) -> T
where
    T: Zero + Add<Output = T> + Sub<Output = T>,
    F: Fn(u64) -> T,
{
    let primes: Vec<u64> = n.primes().collect();
    let mut acc = T::zero();
    for mask in 0u64..(1 << primes.len()) {
        let mut sq: u128 = 1;
        for (j, &p) in primes.iter().enumerate() {
            if mask >> j & 1 == 1 {
                sq *= p as u128 * p as u128;
            }
        }
        if n.value() as u128 % sq != 0 {
            continue;
        }
        let term = r(n.value() / sq as u64);
        if mask.count_ones() % 2 == 0 {
            acc = acc + term;
        } else {
            acc = acc - term;
        }
    }
    acc
}
