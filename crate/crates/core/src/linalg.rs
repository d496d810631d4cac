//! Exact solutions of rational linear systems by fraction-free (Bareiss)
//! elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::Rational;

/// Solution set `{ particular + Σ y_i kernel_i }` of `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    pub kernel: Vec<Vec<Rational>>,
}

impl AffineSolution {
    pub fn is_unique(&self) -> bool {
        self.kernel.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.particular.len() - self.kernel.len()
    }
}

/// Scales a rational row to a primitive integer row.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let den = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&den / x.denom())).collect()
}

/// Row echelon form of an integer matrix via Bareiss elimination; returns the
/// pivot columns. Only the first `pivot_cols` columns are eligible as pivots.
fn bareiss(m: &mut [Vec<BigInt>], pivot_cols: usize) -> Vec<usize> {
    let rows = m.len();
    let width = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..width {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                debug_assert!((&v % &prev).is_zero());
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        // Every trailing entry is now a minor of the input, so the division
        // by the previous pivot above is exact.
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// All solutions of `A x = b`, or `None` if the system is inconsistent.
/// `a` is row-major with `cols` columns; rows may be empty.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> Option<AffineSolution> {
    assert_eq!(a.len(), b.len());
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), cols);
            let mut full = row.clone();
            full.push(rhs.clone());
            integer_row(&full)
        })
        .collect();
    let pivots = bareiss(&mut m, cols);
    let rank = pivots.len();
    if m[rank..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let back = |rhs: &dyn Fn(usize) -> Rational, seed: &[(usize, Rational)]| {
        let mut x = vec![Rational::zero(); cols];
        for (j, v) in seed {
            x[*j] = v.clone();
        }
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let mut acc = rhs(r);
            for j in pc + 1..cols {
                if !m[r][j].is_zero() && !x[j].is_zero() {
                    acc -= Rational::from_integer(m[r][j].clone()) * &x[j];
                }
            }
            x[pc] = acc / Rational::from_integer(m[r][pc].clone());
        }
        x
    };
    let particular = back(&|r| Rational::from_integer(m[r][cols].clone()), &[]);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| back(&|_| Rational::zero(), &[(f, Rational::one())]))
        .collect();
    Some(AffineSolution { particular, kernel })
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The point of minimal Euclidean norm in the solution set.
pub fn least_norm(sol: &AffineSolution) -> Vec<Rational> {
    if sol.kernel.is_empty() {
        return sol.particular.clone();
    }
    let k = &sol.kernel;
    let gram: Vec<Vec<Rational>> = k.iter().map(|u| k.iter().map(|v| dot(u, v)).collect()).collect();
    let rhs: Vec<Rational> = k.iter().map(|u| -dot(u, &sol.particular)).collect();
    let y = solve(&gram, &rhs, k.len()).expect("Gram matrix of independent vectors is invertible");
    let mut x = sol.particular.clone();
    for (yi, u) in y.particular.iter().zip(k) {
        for (xj, uj) in x.iter_mut().zip(u) {
            *xj += yi * uj;
        }
    }
    x
}

/// `A x` for a row-major matrix.
pub fn mat_vec(a: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    a.iter().map(|row| dot(row, x)).collect()
}
