//! Dirichlet characters with exact values.
//!
//! Real characters are Kronecker symbols `χ_D` for fundamental discriminants
//! `D`. General characters mod `N` are exponent vectors on a canonical set of
//! generators of `(Z/NZ)^*`, one block per prime power `p^e ∥ N`:
//!
//! * odd `p^e`: the smallest primitive root,
//! * `4`: the generator `-1`,
//! * `2^e` with `e >= 3`: the pair `(-1, 5)`,
//! * `2`: no generators.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_integer::Integer;

use crate::arith::{factorize, FactoredInteger};
use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, RootOfUnity};

/// The Kronecker symbol `(D/m)`, extended to all integers `m`.
pub fn kronecker_symbol(d: i64, m: i64) -> i8 {
    const TAB2: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    if m == 0 {
        return i8::from(d == 1 || d == -1);
    }
    let mut a = d as i128;
    let mut b = m as i128;
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let v = b.trailing_zeros();
    b >>= v;
    let mut k: i8 = if v % 2 == 0 { 1 } else { TAB2[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    // b is odd and positive from here on
    loop {
        if a == 0 {
            return if b == 1 { k } else { 0 };
        }
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= TAB2[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

fn is_squarefree(n: u64) -> bool {
    factorize(n).is_ok_and(|f| f.is_squarefree())
}

/// `D ≡ 1 (mod 4)` squarefree, or `D = 4m` with `m ≡ 2, 3 (mod 4)` squarefree.
/// `D = 1` (the trivial character) counts.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// One cyclic generator of a prime-power block.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Generator {
    residue: u64,
    order: u64,
}

/// The part of a general character living on `(Z/p^e Z)^*`.
#[derive(Debug, Clone)]
struct Component {
    p: u64,
    q: u64,
    generators: Vec<Generator>,
    exponents: Vec<u64>,
    /// Value of this component on every residue mod `q` (None on non-units).
    table: Arc<Vec<Option<RootOfUnity>>>,
}

fn smallest_primitive_root(p: u64, e: u32) -> u64 {
    let q = p.pow(e);
    let order = (p - 1) * p.pow(e - 1);
    let fac = factorize(order).expect("order is positive");
    (2..q)
        .find(|&g| {
            g % p != 0
                && fac
                    .primes()
                    .all(|r| mod_pow(g, order / r, q) != 1)
        })
        .expect("odd prime powers have primitive roots")
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

fn generators_for(p: u64, e: u32) -> Vec<Generator> {
    let q = p.pow(e);
    match (p, e) {
        (2, 1) => vec![],
        (2, 2) => vec![Generator { residue: 3, order: 2 }],
        (2, _) => vec![
            Generator {
                residue: q - 1,
                order: 2,
            },
            Generator {
                residue: 5,
                order: q / 4,
            },
        ],
        _ => vec![Generator {
            residue: smallest_primitive_root(p, e),
            order: (p - 1) * p.pow(e - 1),
        }],
    }
}

impl Component {
    fn new(p: u64, e: u32, exponents: Vec<u64>) -> Self {
        let q = p.pow(e);
        let generators = generators_for(p, e);
        debug_assert_eq!(generators.len(), exponents.len());
        let mut table = vec![None; q as usize];
        // Walk the group as a product of cyclic generator powers.
        let mut elements: Vec<(u64, RootOfUnity)> = vec![(1 % q, RootOfUnity::ONE)];
        for (g, &a) in generators.iter().zip(&exponents) {
            let step = RootOfUnity::new(a, g.order);
            let mut next = Vec::with_capacity(elements.len() * g.order as usize);
            for &(x, v) in &elements {
                let (mut y, mut w) = (x, v);
                for _ in 0..g.order {
                    next.push((y, w));
                    y = (y as u128 * g.residue as u128 % q as u128) as u64;
                    w = w.mul(&step);
                }
            }
            elements = next;
        }
        for (x, v) in elements {
            table[x as usize] = Some(v);
        }
        if q == 2 {
            table[1] = Some(RootOfUnity::ONE);
        }
        Component {
            p,
            q,
            generators,
            exponents,
            table: Arc::new(table),
        }
    }

    fn value(&self, m: u64) -> Option<RootOfUnity> {
        self.table[(m % self.q) as usize]
    }

    fn order(&self) -> u64 {
        self.generators
            .iter()
            .zip(&self.exponents)
            .fold(1, |acc, (g, &a)| acc.lcm(&(g.order / g.order.gcd(&a))))
    }

    fn conductor(&self) -> u64 {
        if self.exponents.iter().all(|&a| a == 0) {
            return 1;
        }
        if self.p == 2 {
            // exponents: [a] for 4, [a, b] for 2^e, e >= 3
            let five_order = if self.exponents.len() == 2 {
                let g = &self.generators[1];
                g.order / g.order.gcd(&self.exponents[1])
            } else {
                1
            };
            if five_order > 1 {
                return 4 * five_order;
            }
            return 4;
        }
        let ord = self.order();
        let mut v = 0;
        let mut o = ord;
        while o % self.p == 0 {
            o /= self.p;
            v += 1;
        }
        self.p.pow(1 + v)
    }
}

/// How a character is described.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CharacterKind {
    /// The Kronecker symbol `(D/·)` for a fundamental discriminant `D`.
    Real { discriminant: i64 },
    /// Exponent vector on the canonical generators, concatenated over the
    /// prime-power blocks of the modulus in increasing order of `p`.
    General { exponents: Vec<u64> },
}

/// A Dirichlet character modulo `N`.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    kind: CharacterKind,
    conductor: u64,
    components: Vec<Component>,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.kind == other.kind
    }
}

impl Eq for DirichletCharacter {}

impl std::hash::Hash for DirichletCharacter {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.modulus.hash(state);
        self.kind.hash(state);
    }
}

impl DirichletCharacter {
    /// The trivial character `1₁` modulo 1.
    pub fn trivial() -> Self {
        DirichletCharacter {
            modulus: 1,
            kind: CharacterKind::Real { discriminant: 1 },
            conductor: 1,
            components: Vec::new(),
        }
    }

    /// The primitive real character `χ_D`, modulo `|D|`.
    pub fn kronecker(d: i64) -> Result<Self> {
        if !is_fundamental_discriminant(d) {
            return Err(Error::NonFundamentalDiscriminant(d));
        }
        if d == 1 {
            return Ok(Self::trivial());
        }
        Ok(DirichletCharacter {
            modulus: d.unsigned_abs(),
            kind: CharacterKind::Real { discriminant: d },
            conductor: d.unsigned_abs(),
            components: Vec::new(),
        })
    }

    /// A general character from its exponent vector on the canonical generators.
    pub fn from_exponents(modulus: u64, exponents: &[u64]) -> Result<Self> {
        let fac = factorize(modulus)?;
        let bad = || Error::BadExponents {
            modulus,
            exponents: exponents.to_vec(),
        };
        let mut components = Vec::new();
        let mut rest = exponents;
        for &(p, e) in fac.factors() {
            let gens = generators_for(p, e);
            if rest.len() < gens.len() {
                return Err(bad());
            }
            let (mine, tail) = rest.split_at(gens.len());
            if mine.iter().zip(&gens).any(|(&a, g)| a >= g.order) {
                return Err(bad());
            }
            components.push(Component::new(p, e, mine.to_vec()));
            rest = tail;
        }
        if !rest.is_empty() {
            return Err(bad());
        }
        let conductor = components.iter().map(Component::conductor).product();
        Ok(DirichletCharacter {
            modulus,
            kind: CharacterKind::General {
                exponents: exponents.to_vec(),
            },
            conductor,
            components,
        })
    }

    /// The principal character modulo `N`.
    pub fn principal(modulus: u64) -> Result<Self> {
        let len = generator_orders(modulus)?.len();
        Self::from_exponents(modulus, &vec![0; len])
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn kind(&self) -> &CharacterKind {
        &self.kind
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    /// `χ(m)`, or `None` when `gcd(m, N) > 1`.
    pub fn value(&self, m: i64) -> Option<RootOfUnity> {
        match &self.kind {
            CharacterKind::Real { discriminant } => match kronecker_symbol(*discriminant, m) {
                1 => Some(RootOfUnity::ONE),
                -1 => Some(RootOfUnity::MINUS_ONE),
                _ => None,
            },
            CharacterKind::General { .. } => {
                let r = m.rem_euclid(self.modulus as i64) as u64;
                let mut acc = RootOfUnity::ONE;
                for c in &self.components {
                    acc = acc.mul(&c.value(r)?);
                }
                Some(acc)
            }
        }
    }

    /// `χ(m)` for a natural number argument.
    pub fn value_u64(&self, m: u64) -> Option<RootOfUnity> {
        match &self.kind {
            CharacterKind::General { .. } => {
                let r = m % self.modulus;
                let mut acc = RootOfUnity::ONE;
                for c in &self.components {
                    acc = acc.mul(&c.value(r)?);
                }
                Some(acc)
            }
            CharacterKind::Real { .. } => self.value((m % (self.modulus * 8)) as i64),
        }
    }

    pub fn evaluate(&self, m: i64) -> ExactScalar {
        ExactScalar::from_char_value(self.value(m))
    }

    /// The complex-conjugate character.
    pub fn conjugate(&self) -> Self {
        match &self.kind {
            CharacterKind::Real { .. } => self.clone(),
            CharacterKind::General { .. } => {
                let mut exponents = Vec::new();
                for c in &self.components {
                    for (g, &a) in c.generators.iter().zip(&c.exponents) {
                        exponents.push((g.order - a) % g.order);
                    }
                }
                Self::from_exponents(self.modulus, &exponents)
                    .expect("conjugate exponents are in range")
            }
        }
    }

    /// `χ(-1)`.
    pub fn parity(&self) -> i8 {
        match self.value(-1) {
            Some(r) if r == RootOfUnity::MINUS_ONE => -1,
            _ => 1,
        }
    }

    /// Multiplicative order of the character.
    pub fn order(&self) -> u64 {
        match &self.kind {
            CharacterKind::Real { discriminant: 1 } => 1,
            CharacterKind::Real { .. } => 2,
            CharacterKind::General { .. } => self
                .components
                .iter()
                .fold(1, |acc, c| acc.lcm(&c.order())),
        }
    }

    /// True if every value lies in `{0, ±1}`.
    pub fn is_real(&self) -> bool {
        self.order() <= 2
    }

    /// True if every value lies in `{0, ±1, ±i}`.
    pub fn has_gaussian_values(&self) -> bool {
        4 % self.order() == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Whether `ℓ` divides the modulus, i.e. `χ(ℓ) = 0` for primes `ℓ`.
    pub fn vanishes_at_prime(&self, l: u64) -> bool {
        self.modulus % l == 0
    }

    /// The Kronecker discriminant of a real primitive character.
    pub fn discriminant(&self) -> Option<i64> {
        match self.kind {
            CharacterKind::Real { discriminant } => Some(discriminant),
            CharacterKind::General { .. } => None,
        }
    }

    /// Value table `χ(0), …, χ(N-1)`.
    pub fn table(&self) -> Vec<Option<RootOfUnity>> {
        (0..self.modulus).map(|m| self.value_u64(m)).collect()
    }
}

/// Orders of the canonical generators of `(Z/NZ)^*`, in exponent-vector order.
pub fn generator_orders(modulus: u64) -> Result<Vec<u64>> {
    let fac: FactoredInteger = factorize(modulus)?;
    Ok(fac
        .factors()
        .iter()
        .flat_map(|&(p, e)| generators_for(p, e).into_iter().map(|g| g.order))
        .collect())
}

/// Every character modulo `N`, exponent vectors in lexicographic order.
pub fn all_characters(modulus: u64) -> Result<Vec<DirichletCharacter>> {
    let orders = generator_orders(modulus)?;
    let mut out = Vec::new();
    let mut exps = vec![0u64; orders.len()];
    loop {
        out.push(DirichletCharacter::from_exponents(modulus, &exps)?);
        // odometer increment, last coordinate fastest
        let mut i = orders.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
        }
    }
}

/// All primitive real characters of conductor at most `bound`: `1₁` followed
/// by `χ_D` for fundamental `D`, ordered by `(|D|, D)`.
pub fn enumerate_real_characters(bound: u64) -> Vec<DirichletCharacter> {
    let mut out = vec![DirichletCharacter::trivial()];
    for a in 2..=bound as i64 {
        for d in [-a, a] {
            if is_fundamental_discriminant(d) {
                out.push(DirichletCharacter::kronecker(d).expect("checked"));
            }
        }
    }
    out
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CharacterKind::Real { discriminant: 1 } => write!(f, "1"),
            CharacterKind::Real { discriminant } => write!(f, "kron:{discriminant}"),
            CharacterKind::General { exponents } => {
                let list: Vec<String> = exponents.iter().map(u64::to_string).collect();
                write!(f, "mod:{}:{}", self.modulus, list.join(","))
            }
        }
    }
}

impl FromStr for DirichletCharacter {
    type Err = Error;

    /// Accepts `1`, `kron:D` and `mod:N:e1,e2,...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let unknown = || Error::UnknownCharacter(s.to_string());
        if s == "1" {
            return Ok(Self::trivial());
        }
        if let Some(d) = s.strip_prefix("kron:") {
            let d: i64 = d.trim().parse().map_err(|_| unknown())?;
            return Self::kronecker(d);
        }
        if let Some(rest) = s.strip_prefix("mod:") {
            let (n, exps) = rest.split_once(':').unwrap_or((rest, ""));
            let n: u64 = n.trim().parse().map_err(|_| unknown())?;
            if n == 0 {
                return Err(unknown());
            }
            let exps = exps.trim();
            let exponents: Vec<u64> = if exps.is_empty() {
                Vec::new()
            } else {
                exps.split(',')
                    .map(|t| t.trim().parse().map_err(|_| unknown()))
                    .collect::<Result<_>>()?
            };
            return Self::from_exponents(n, &exponents);
        }
        Err(unknown())
    }
}

impl serde::Serialize for DirichletCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
