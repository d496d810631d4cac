//! Bulk comparison of the Möbius-weighted twisted sum against its closed
//! forms over every pair of characters with bounded moduli.
//!
//! The literal double sum is tabulated for all `n <= bound` at once: first
//! `σ_h^{ψ,φ}` by looping over divisor pairs `k·m = n`, then the Möbius layer
//! over squarefree `d`. The closed forms are products of per-prime factors,
//! so they are tabulated by `C(n) = C(n / ℓ^e) · L(ℓ^e)` with `ℓ^e ∥ n`.
//!
//! Pairs whose characters take values in `{0, ±1, ±i}` are compared exactly
//! (Gaussian integers). The others are compared in `f64` with tolerance
//! `10⁻⁹·n^h`, or exactly modulo two primes `p ≡ 1 (mod lcm(1..40))`, or both.
//!
//! Why the modular comparison is a proof of equality: both sides lie in
//! `ℤ[ζ][1/D]`, with `D` a product of `2` and powers of primes `≤ bound`,
//! and reduction at a fixed prime `𝔭 | p` is a ring map. Applying the Galois
//! automorphism `ζ ↦ ζ^k` to both sides gives the same identity for the pair
//! `(ψ^k, φ^k)`, which is also swept (`ψ^k = ψ` for real `ψ`). So agreement
//! for every pair puts `D·(lhs − rhs)` in every prime above `p₀` and `p₁`,
//! hence in `p₀p₁·ℤ[ζ]`. For `n <= 3000`, `h <= 3` every conjugate of
//! `D·(lhs − rhs)` is below `10³⁰ < p₀p₁ ≈ 2·10³⁷` in absolute value, so its
//! norm can only be divisible by `(p₀p₁)^deg` if it is zero.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Roots;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rustc_hash::FxHashMap;

use crate::arith::{factorize, mobius};
use crate::characters::{all_characters, DirichletCharacter};
use crate::error::Result;
use crate::modp::{Fp, Modulus, P0, P1};
use crate::scalar::{Field, GaussianRational, RootOfUnity};
use crate::twisted_sums::{
    local_factor, mobius_weighted_sum_closed, mobius_weighted_sum_real, real_local_factor,
};

/// Scope of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    /// Characters of every modulus `1..=max_modulus` are paired.
    pub max_modulus: u64,
    /// Exponents `h = 0..=max_h`.
    pub max_h: u32,
    /// All `n` in `1..=bound`.
    pub bound: u64,
    pub psi: PsiFilter,
    /// How pairs with non-Gaussian values are compared.
    pub general: GeneralMode,
}

impl SweepOptions {
    /// All pairs; non-Gaussian pairs in floating point.
    pub fn new(max_modulus: u64, max_h: u32, bound: u64) -> Self {
        SweepOptions {
            max_modulus,
            max_h,
            bound,
            psi: PsiFilter::All,
            general: GeneralMode::Float,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiFilter {
    All,
    /// Only real `ψ` (any `φ`).
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneralMode {
    Float,
    /// Exact, modulo two large primes.
    Modular,
    Both,
}

/// Which identity a mismatch belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// Literal double sum vs general closed form.
    ClosedVsBrute,
    /// Real-character form vs general closed form.
    RealVsClosed,
    /// Real-character form vs literal double sum.
    RealVsBrute,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub identity: Identity,
    pub psi: String,
    pub phi: String,
    pub h: u32,
    pub n: u64,
    pub left: String,
    pub right: String,
}

/// Totals for a sweep. `mismatches` keeps the first few examples only.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepSummary {
    pub characters: usize,
    pub pairs: u64,
    pub exact_pairs: u64,
    pub float_pairs: u64,
    pub modular_pairs: u64,
    pub closed_checks: u64,
    pub real_checks_exact: u64,
    pub real_checks_float: u64,
    pub real_checks_modular: u64,
    pub mismatch_count: u64,
    pub mismatches: Vec<Mismatch>,
    /// Largest `|a - b| / n^h` seen on the float path.
    pub max_scaled_error: f64,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.mismatch_count == 0
    }

    fn record(&mut self, m: Mismatch) {
        self.mismatch_count += 1;
        if self.mismatches.len() < 16 {
            self.mismatches.push(m);
        }
    }
}

pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Exact Gaussian integer with checked arithmetic.
type Gi = (i128, i128);

fn gi_mul(a: Gi, b: Gi) -> Option<Gi> {
    let re = a.0.checked_mul(b.0)?.checked_sub(a.1.checked_mul(b.1)?)?;
    let im = a.0.checked_mul(b.1)?.checked_add(a.1.checked_mul(b.0)?)?;
    Some((re, im))
}

fn gi_from(g: &GaussianRational) -> Option<Gi> {
    if !g.is_gaussian_integer() {
        return None;
    }
    Some((g.re.numer().to_i128()?, g.im.numer().to_i128()?))
}

fn gi_to_string(g: Gi) -> String {
    match g {
        (re, 0) => re.to_string(),
        (0, im) => format!("{im}i"),
        (re, im) => format!("{re}{im:+}i"),
    }
}

/// Per-character data used by the inner loops.
struct CharData {
    chi: DirichletCharacter,
    /// `Some(j)` if `χ(m) = i^j`, for Gaussian characters.
    quarter: Option<Vec<u8>>,
    complex: Vec<Complex64>,
    nonzero: Vec<u32>,
    values: Vec<Option<RootOfUnity>>,
    /// Montgomery images of the values modulo each prime, when requested.
    fp: [Vec<u64>; 2],
}

const ZERO_Q: u8 = u8::MAX;

impl CharData {
    fn new(chi: DirichletCharacter, bound: u64) -> Self {
        let values: Vec<Option<RootOfUnity>> = (0..=bound).map(|m| chi.value_u64(m)).collect();
        let quarter = chi.has_gaussian_values().then(|| {
            values
                .iter()
                .map(|v| v.map_or(ZERO_Q, |r| r.quarter_turns().expect("gaussian")))
                .collect()
        });
        let complex = values
            .iter()
            .map(|v| v.map_or(Complex64::new(0.0, 0.0), |r| r.to_complex()))
            .collect();
        let nonzero = (1..=bound as u32)
            .filter(|&m| values[m as usize].is_some())
            .collect();
        CharData {
            chi,
            quarter,
            complex,
            nonzero,
            values,
            fp: [Vec::new(), Vec::new()],
        }
    }

    fn with_fp(mut self) -> Self {
        self.fp = [fp_table::<P0>(&self.values), fp_table::<P1>(&self.values)];
        self
    }

    fn fp<M: Modulus>(&self, m: usize) -> Fp<M> {
        Fp::from_raw(self.fp[M::INDEX][m])
    }
}

fn fp_table<M: Modulus>(values: &[Option<RootOfUnity>]) -> Vec<u64> {
    let mut cache: HashMap<RootOfUnity, u64> = HashMap::new();
    values
        .iter()
        .map(|v| match v {
            None => 0,
            Some(r) => *cache.entry(*r).or_insert_with(|| Fp::<M>::from_root(r).raw()),
        })
        .collect()
}

/// Factor structure of `1..=bound`: `n = rest · ℓ^e` with `ℓ` the smallest
/// prime of `n`, `ℓ^e ∥ n`.
struct Layout {
    bound: usize,
    prime_powers: Vec<(u64, u32)>,
    /// `(index into prime_powers, rest)` for `n >= 2`.
    peel: Vec<(usize, usize)>,
    /// `(d, μ(d))` for squarefree `d >= 2` with `d² <= bound`.
    mobius: Vec<(usize, i8)>,
}

impl Layout {
    fn new(bound: u64) -> Self {
        let b = bound as usize;
        let mut index: HashMap<u64, usize> = HashMap::new();
        let mut prime_powers = Vec::new();
        let mut peel = vec![(usize::MAX, 0); b + 1];
        for n in 2..=bound {
            let f = factorize(n).expect("n >= 2");
            let (l, e) = f.factors()[0];
            let q = l.pow(e);
            let idx = *index.entry(q).or_insert_with(|| {
                prime_powers.push((l, e));
                prime_powers.len() - 1
            });
            peel[n as usize] = (idx, (n / q) as usize);
        }
        let mobius = (2..=bound.sqrt())
            .filter_map(|d| {
                let mu = mobius(&factorize(d).expect("d >= 2"));
                (mu != 0).then_some((d as usize, mu))
            })
            .collect();
        Layout {
            bound: b,
            prime_powers,
            peel,
            mobius,
        }
    }
}

/// Memo of exact local factors, keyed by prime power, `h`, the class-and-value
/// codes of `ψ(ℓ)` and `φ(ℓ)`, and which form is being evaluated.
#[derive(Default)]
struct ExactMemo {
    map: FxHashMap<u64, Option<Gi>>,
}

/// Packs a memo key; `a`, `b` are at most 12-bit codes.
fn memo_key(pp: usize, h: u32, a: u64, b: u64, real: bool) -> u64 {
    (pp as u64) << 32 | (h as u64) << 28 | (real as u64) << 24 | a << 12 | b
}

/// 12-bit code of a character value: `0` for zero, else `64m + k` for
/// `e^{2πi k/m}`.
fn root_code(v: Option<RootOfUnity>) -> u64 {
    v.map_or(0, |r| 64 * r.order() + r.numerator())
}

impl ExactMemo {
    fn get(&mut self, layout: &Layout, pp: usize, h: u32, a: u8, b: u8, real: bool) -> Option<Gi> {
        *self.map.entry(memo_key(pp, h, a as u64, b as u64, real)).or_insert_with(|| {
            let (l, e) = layout.prime_powers[pp];
            let unit = |j: u8| {
                (j != ZERO_Q).then(|| GaussianRational::from_root(&RootOfUnity::new(j as u64, 4)))
            };
            let (x, y) = (unit(a), unit(b));
            let v: GaussianRational = if real {
                real_local_factor(l, e, h, x.as_ref(), y.as_ref())
            } else {
                local_factor(l, e, h, x.as_ref(), y.as_ref())
            };
            gi_from(&v)
        })
    }
}

fn m_pow_i64(bound: usize, max_h: u32) -> Vec<Vec<i64>> {
    (0..=max_h)
        .map(|h| (0..=bound).map(|m| (m as i64).pow(h)).collect())
        .collect()
}

/// Runs the sweep.
pub fn sweep_mobius_sums(opts: SweepOptions) -> Result<SweepSummary> {
    let layout = Layout::new(opts.bound);
    let modular = opts.general != GeneralMode::Float;
    let mut chars = Vec::new();
    for n in 1..=opts.max_modulus {
        for chi in all_characters(n)? {
            let data = CharData::new(chi, opts.bound);
            // Gaussian characters still meet non-Gaussian partners
            chars.push(if modular { data.with_fp() } else { data });
        }
    }
    let mut summary = SweepSummary {
        characters: chars.len(),
        ..Default::default()
    };
    let mut memo = ExactMemo::default();
    let mpow_i = m_pow_i64(layout.bound, opts.max_h);
    let mpow_f: Vec<Vec<f64>> = mpow_i
        .iter()
        .map(|row| row.iter().map(|&v| v as f64).collect())
        .collect();
    let mut scratch = Scratch::new(layout.bound, opts.max_h);
    let mut mod0 = ModularState::<P0>::new(&layout, opts.max_h);
    let mut mod1 = ModularState::<P1>::new(&layout, opts.max_h);

    for psi in &chars {
        if opts.psi == PsiFilter::Real && !psi.chi.is_real() {
            continue;
        }
        for phi in &chars {
            summary.pairs += 1;
            if psi.quarter.is_some() && phi.quarter.is_some() {
                summary.exact_pairs += 1;
                exact_pair(psi, phi, &layout, &mpow_i, &mut memo, &mut scratch, &mut summary);
                continue;
            }
            if opts.general != GeneralMode::Modular {
                summary.float_pairs += 1;
                float_pair(psi, phi, &layout, &mpow_f, &mut scratch, &mut summary);
            }
            if modular {
                summary.modular_pairs += 1;
                let checks = (layout.bound * (opts.max_h as usize + 1)) as u64;
                summary.closed_checks += checks;
                if psi.chi.is_real() {
                    summary.real_checks_modular += checks;
                }
                mod0.pair(psi, phi, &layout, &mut summary);
                mod1.pair(psi, phi, &layout, &mut summary);
            }
        }
    }
    Ok(summary)
}

/// Buffers and memoized local factors for the comparison modulo one prime.
struct ModularState<M: Modulus> {
    mpow: Vec<Vec<Fp<M>>>,
    sigma: Vec<Vec<Fp<M>>>,
    brute: Vec<Vec<Fp<M>>>,
    memo: FxHashMap<u64, Fp<M>>,
}

impl<M: Modulus> ModularState<M> {
    fn new(layout: &Layout, max_h: u32) -> Self {
        let b = layout.bound;
        let mpow = (0..=max_h)
            .map(|h| (0..=b).map(|m| Fp::new(m as u64).pow(h as u64)).collect())
            .collect();
        let zeros = vec![vec![Fp::zero(); b + 1]; max_h as usize + 1];
        ModularState {
            mpow,
            sigma: zeros.clone(),
            brute: zeros,
            memo: FxHashMap::default(),
        }
    }

    fn local(&mut self, layout: &Layout, pp: usize, h: u32, a: Option<RootOfUnity>, c: Option<RootOfUnity>, real: bool) -> Fp<M> {
        *self.memo.entry(memo_key(pp, h, root_code(a), root_code(c), real)).or_insert_with(|| {
            let (l, e) = layout.prime_powers[pp];
            let (x, y) = (a.map(|r| Fp::from_root(&r)), c.map(|r| Fp::from_root(&r)));
            if real {
                real_local_factor(l, e, h, x.as_ref(), y.as_ref())
            } else {
                local_factor(l, e, h, x.as_ref(), y.as_ref())
            }
        })
    }

    fn pair(&mut self, psi: &CharData, phi: &CharData, layout: &Layout, summary: &mut SweepSummary) {
        let b = layout.bound;
        let hs = self.mpow.len();
        for row in self.sigma.iter_mut() {
            row.iter_mut().for_each(|v| *v = Fp::zero());
        }
        let mut weights = vec![Fp::<M>::zero(); hs];
        for &m in &phi.nonzero {
            let m = m as usize;
            let fm = phi.fp::<M>(m);
            for (h, w) in weights.iter_mut().enumerate() {
                *w = fm.times(self.mpow[h][m]);
            }
            for &k in &psi.nonzero {
                let k = k as usize;
                let n = k * m;
                if n > b {
                    break;
                }
                let pk = psi.fp::<M>(k);
                for (h, row) in self.sigma.iter_mut().enumerate() {
                    row[n].add_assign(pk.times(weights[h]));
                }
            }
        }
        for h in 0..hs {
            self.brute[h].copy_from_slice(&self.sigma[h]);
            for &(d, mu) in &layout.mobius {
                let d2 = d * d;
                for j in 1..=b / d2 {
                    let s = self.sigma[h][j];
                    let cell = &mut self.brute[h][j * d2];
                    if mu == 1 {
                        cell.add_assign(s);
                    } else {
                        cell.sub_assign(s);
                    }
                }
            }
        }

        let real = psi.chi.is_real();
        let npp = layout.prime_powers.len();
        let mut closed = vec![Fp::<M>::zero(); b + 1];
        let mut realf = vec![Fp::<M>::zero(); b + 1];
        let mut local = vec![Fp::<M>::zero(); npp];
        let mut local_real = vec![Fp::<M>::zero(); npp];
        for h in 0..hs {
            let h32 = h as u32;
            for (pp, &(l, _)) in layout.prime_powers.iter().enumerate() {
                let (a, c) = (psi.values[l as usize], phi.values[l as usize]);
                local[pp] = self.local(layout, pp, h32, a, c, false);
                if real {
                    local_real[pp] = self.local(layout, pp, h32, a, c, true);
                }
            }
            closed[1] = Fp::one();
            realf[1] = Fp::one();
            for n in 2..=b {
                let (pp, rest) = layout.peel[n];
                closed[n] = closed[rest].times(local[pp]);
                if real {
                    realf[n] = realf[rest].times(local_real[pp]);
                }
            }
            for n in 1..=b {
                let lhs = self.brute[h][n];
                let rhs = closed[n];
                if lhs != rhs {
                    summary.record(fp_mismatch(Identity::ClosedVsBrute, psi, phi, h32, n, lhs, rhs));
                }
                if real {
                    let rv = realf[n];
                    if rv != rhs {
                        summary.record(fp_mismatch(Identity::RealVsClosed, psi, phi, h32, n, rv, rhs));
                    }
                    if rv != lhs {
                        summary.record(fp_mismatch(Identity::RealVsBrute, psi, phi, h32, n, rv, lhs));
                    }
                }
            }
        }
    }
}

fn fp_mismatch<M: Modulus>(
    identity: Identity,
    psi: &CharData,
    phi: &CharData,
    h: u32,
    n: usize,
    left: Fp<M>,
    right: Fp<M>,
) -> Mismatch {
    Mismatch {
        identity,
        psi: psi.chi.to_string(),
        phi: phi.chi.to_string(),
        h,
        n: n as u64,
        left: left.to_string(),
        right: right.to_string(),
    }
}

struct Scratch {
    gi: Vec<Vec<(i64, i64)>>,
    gi_brute: Vec<Vec<(i64, i64)>>,
    cf: Vec<Vec<Complex64>>,
    cf_brute: Vec<Vec<Complex64>>,
}

impl Scratch {
    fn new(bound: usize, max_h: u32) -> Self {
        let hs = max_h as usize + 1;
        Scratch {
            gi: vec![vec![(0, 0); bound + 1]; hs],
            gi_brute: vec![vec![(0, 0); bound + 1]; hs],
            cf: vec![vec![Complex64::new(0.0, 0.0); bound + 1]; hs],
            cf_brute: vec![vec![Complex64::new(0.0, 0.0); bound + 1]; hs],
        }
    }
}

fn exact_pair(
    psi: &CharData,
    phi: &CharData,
    layout: &Layout,
    mpow: &[Vec<i64>],
    memo: &mut ExactMemo,
    scratch: &mut Scratch,
    summary: &mut SweepSummary,
) {
    let b = layout.bound;
    let pq = psi.quarter.as_ref().expect("gaussian");
    let fq = phi.quarter.as_ref().expect("gaussian");
    let hs = mpow.len();

    // σ_h^{ψ,φ}(n) for all n, all h
    let sigma = &mut scratch.gi;
    for row in sigma.iter_mut() {
        row.iter_mut().for_each(|v| *v = (0, 0));
    }
    for &m in &phi.nonzero {
        let m = m as usize;
        let jm = fq[m];
        for &k in &psi.nonzero {
            let k = k as usize;
            let n = k * m;
            if n > b {
                break;
            }
            let j = (pq[k] + jm) & 3;
            for (h, row) in sigma.iter_mut().enumerate() {
                let v = mpow[h][m];
                let cell = &mut row[n];
                match j {
                    0 => cell.0 += v,
                    1 => cell.1 += v,
                    2 => cell.0 -= v,
                    _ => cell.1 -= v,
                }
            }
        }
    }
    // Möbius layer
    let brute = &mut scratch.gi_brute;
    for h in 0..hs {
        brute[h].copy_from_slice(&sigma[h]);
        for &(d, mu) in &layout.mobius {
            let d2 = d * d;
            for j in 1..=b / d2 {
                let s = sigma[h][j];
                let cell = &mut brute[h][j * d2];
                if mu == 1 {
                    cell.0 += s.0;
                    cell.1 += s.1;
                } else {
                    cell.0 -= s.0;
                    cell.1 -= s.1;
                }
            }
        }
    }

    let real = psi.chi.is_real();
    let npp = layout.prime_powers.len();
    let mut local: Vec<Option<Gi>> = vec![None; npp];
    let mut local_real: Vec<Option<Gi>> = vec![None; npp];
    for h in 0..hs {
        let h32 = h as u32;
        for (pp, &(l, _)) in layout.prime_powers.iter().enumerate() {
            let (a, c) = (pq[l as usize], fq[l as usize]);
            local[pp] = memo.get(layout, pp, h32, a, c, false);
            if real {
                local_real[pp] = memo.get(layout, pp, h32, a, c, true);
            }
        }
        let mut closed: Vec<Option<Gi>> = vec![None; b + 1];
        let mut realf: Vec<Option<Gi>> = vec![None; b + 1];
        closed[1] = Some((1, 0));
        realf[1] = Some((1, 0));
        for n in 2..=b {
            let (pp, rest) = layout.peel[n];
            closed[n] = closed[rest].zip(local[pp]).and_then(|(x, y)| gi_mul(x, y));
            if real {
                realf[n] = realf[rest].zip(local_real[pp]).and_then(|(x, y)| gi_mul(x, y));
            }
        }
        for n in 1..=b {
            summary.closed_checks += 1;
            let nn = n as u64;
            let lhs = Ok((brute[h][n].0 as i128, brute[h][n].1 as i128));
            let rhs = closed[n].ok_or(()).or_else(|_| slow(psi, phi, h32, nn, false));
            if rhs != lhs {
                summary.record(mismatch(Identity::ClosedVsBrute, psi, phi, h32, n, &lhs, &rhs));
            }
            if real {
                summary.real_checks_exact += 1;
                let rv = realf[n].ok_or(()).or_else(|_| slow(psi, phi, h32, nn, true));
                if rv != rhs {
                    summary.record(mismatch(Identity::RealVsClosed, psi, phi, h32, n, &rv, &rhs));
                }
                if rv != lhs {
                    summary.record(mismatch(Identity::RealVsBrute, psi, phi, h32, n, &rv, &lhs));
                }
            }
        }
    }
}

/// Exact evaluation outside the fast tables (overflow or a non-integral
/// factor); `Err` carries the rendered value when it is not a Gaussian
/// integer.
fn slow(
    psi: &CharData,
    phi: &CharData,
    h: u32,
    n: u64,
    real: bool,
) -> std::result::Result<Gi, String> {
    let v = if real {
        mobius_weighted_sum_real(&psi.chi, &phi.chi, h, n)
    } else {
        mobius_weighted_sum_closed(&psi.chi, &phi.chi, h, n)
    }
    .map_err(|e| e.to_string())?;
    v.to_gaussian()
        .as_ref()
        .and_then(gi_from)
        .ok_or_else(|| v.to_string())
}

fn render(v: &std::result::Result<Gi, String>) -> String {
    match v {
        Ok(g) => gi_to_string(*g),
        Err(s) => s.clone(),
    }
}

fn mismatch(
    identity: Identity,
    psi: &CharData,
    phi: &CharData,
    h: u32,
    n: usize,
    left: &std::result::Result<Gi, String>,
    right: &std::result::Result<Gi, String>,
) -> Mismatch {
    Mismatch {
        identity,
        psi: psi.chi.to_string(),
        phi: phi.chi.to_string(),
        h,
        n: n as u64,
        left: render(left),
        right: render(right),
    }
}

fn float_mismatch(
    identity: Identity,
    psi: &CharData,
    phi: &CharData,
    h: u32,
    n: usize,
    left: Complex64,
    right: Complex64,
) -> Mismatch {
    let show = |z: Complex64| format!("{:.6}{:+.6}i", z.re, z.im);
    Mismatch {
        identity,
        psi: psi.chi.to_string(),
        phi: phi.chi.to_string(),
        h,
        n: n as u64,
        left: show(left),
        right: show(right),
    }
}

fn float_pair(
    psi: &CharData,
    phi: &CharData,
    layout: &Layout,
    mpow: &[Vec<f64>],
    scratch: &mut Scratch,
    summary: &mut SweepSummary,
) {
    let b = layout.bound;
    let hs = mpow.len();
    let sigma = &mut scratch.cf;
    for row in sigma.iter_mut() {
        row.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
    }
    for &m in &phi.nonzero {
        let m = m as usize;
        let fm = phi.complex[m];
        for &k in &psi.nonzero {
            let k = k as usize;
            let n = k * m;
            if n > b {
                break;
            }
            let w = psi.complex[k] * fm;
            for (h, row) in sigma.iter_mut().enumerate() {
                row[n] += w * mpow[h][m];
            }
        }
    }
    let brute = &mut scratch.cf_brute;
    for h in 0..hs {
        brute[h].copy_from_slice(&sigma[h]);
        for &(d, mu) in &layout.mobius {
            let d2 = d * d;
            let sign = f64::from(mu);
            for j in 1..=b / d2 {
                brute[h][j * d2] += sigma[h][j] * sign;
            }
        }
    }

    // local factors for every prime power and h
    let npp = layout.prime_powers.len();
    let real = psi.chi.is_real();
    let mut local = vec![vec![Complex64::new(0.0, 0.0); npp]; hs];
    let mut local_real = vec![vec![Complex64::new(0.0, 0.0); npp]; hs];
    for (pp, &(l, e)) in layout.prime_powers.iter().enumerate() {
        let (a, c) = (psi.values[l as usize], phi.values[l as usize]);
        let ac = a.map(|_| psi.complex[l as usize]);
        let cc = c.map(|_| phi.complex[l as usize]);
        for h in 0..hs {
            local[h][pp] = local_factor(l, e, h as u32, ac.as_ref(), cc.as_ref());
            if real {
                local_real[h][pp] = real_local_factor(l, e, h as u32, ac.as_ref(), cc.as_ref());
            }
        }
    }

    let mut closed = vec![Complex64::new(0.0, 0.0); b + 1];
    let mut realf = vec![Complex64::new(0.0, 0.0); b + 1];
    for h in 0..hs {
        closed[1] = Complex64::new(1.0, 0.0);
        realf[1] = Complex64::new(1.0, 0.0);
        for n in 2..=b {
            let (pp, rest) = layout.peel[n];
            closed[n] = closed[rest] * local[h][pp];
            if real {
                realf[n] = realf[rest] * local_real[h][pp];
            }
        }
        for n in 1..=b {
            let scale = (n as f64).powi(h as i32);
            let tol = FLOAT_TOLERANCE * scale;
            summary.closed_checks += 1;
            let lhs = brute[h][n];
            let rhs = closed[n];
            let err = (lhs - rhs).norm();
            summary.max_scaled_error = summary.max_scaled_error.max(err / scale);
            if !(err <= tol) {
                summary.record(float_mismatch(Identity::ClosedVsBrute, psi, phi, h as u32, n, lhs, rhs));
            }
            if real {
                summary.real_checks_float += 1;
                let rv = realf[n];
                let e1 = (rv - rhs).norm();
                let e2 = (rv - lhs).norm();
                summary.max_scaled_error = summary.max_scaled_error.max(e1.max(e2) / scale);
                if !(e1 <= tol) {
                    summary.record(float_mismatch(Identity::RealVsClosed, psi, phi, h as u32, n, rv, rhs));
                }
                if !(e2 <= tol) {
                    summary.record(float_mismatch(Identity::RealVsBrute, psi, phi, h as u32, n, rv, lhs));
                }
            }
        }
    }
}

/// Exact brute-force value as a `BigInt` pair, for spot checks of the fast
/// tabulation.
pub fn brute_exact(psi: &DirichletCharacter, phi: &DirichletCharacter, h: u32, n: u64) -> Option<(BigInt, BigInt)> {
    let v = crate::twisted_sums::mobius_weighted_sum_bruteforce(psi, phi, h, n).ok()?;
    let g = v.to_gaussian()?;
    Some((g.re.to_integer(), g.im.to_integer()))
}
