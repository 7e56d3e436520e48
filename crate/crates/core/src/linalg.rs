//! Exact linear algebra over the rationals.
//!
//! The elimination core is fraction-free (Bareiss): rows are scaled to
//! integers once, and every intermediate entry is a minor of the scaled
//! matrix, so divisions are exact and coefficient growth stays polynomial.

use num::{Integer, One, Signed, Zero};

use crate::{Int, Rat};

/// Row echelon form of an integer matrix together with its pivot columns.
struct Echelon {
    rows: Vec<Vec<Int>>,
    /// pivots[r] = column of the pivot in row r; strictly increasing.
    pivots: Vec<usize>,
    ncols: usize,
}

fn scale_rows_to_int(rows: &[Vec<Rat>]) -> Vec<Vec<Int>> {
    rows.iter()
        .map(|row| {
            let mut lcm = Int::one();
            for x in row {
                lcm = lcm.lcm(x.denom());
            }
            row.iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect()
}

/// Fraction-free Gaussian elimination (Bareiss) with row pivoting.
fn echelon(mut rows: Vec<Vec<Int>>, ncols: usize) -> Echelon {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut prev = Int::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        // Smallest nonzero entry in absolute value keeps the minors modest.
        let pivot_row = (r..nrows)
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| rows[i][c].abs());
        let Some(p) = pivot_row else { continue };
        rows.swap(r, p);
        for i in r + 1..nrows {
            if rows[i][c].is_zero() {
                // Still rescale so the whole row stays a minor of the input.
                for j in c + 1..ncols {
                    let val = &rows[r][c] * &rows[i][j];
                    debug_assert!((&val % &prev).is_zero());
                    rows[i][j] = val / &prev;
                }
            } else {
                for j in c + 1..ncols {
                    let val = &rows[r][c] * &rows[i][j] - &rows[i][c] * &rows[r][j];
                    debug_assert!((&val % &prev).is_zero());
                    rows[i][j] = val / &prev;
                }
                rows[i][c] = Int::zero();
            }
        }
        prev = rows[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon {
        rows,
        pivots,
        ncols,
    }
}

impl Echelon {
    /// Back-substitute one solution with the given values at the free columns.
    fn back_substitute(&self, free_values: &[(usize, Rat)]) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); self.ncols];
        for (c, v) in free_values {
            x[*c] = v.clone();
        }
        for (r, &pc) in self.pivots.iter().enumerate().rev() {
            let row = &self.rows[r];
            let mut acc = Rat::zero();
            for c in pc + 1..self.ncols {
                if !row[c].is_zero() && !x[c].is_zero() {
                    acc += Rat::from_integer(row[c].clone()) * &x[c];
                }
            }
            x[pc] = -acc / Rat::from_integer(row[pc].clone());
        }
        x
    }
}

/// Make a rational vector primitive: integer entries, content 1, first
/// nonzero entry positive. Deterministic representative for tests.
fn normalize_vector(v: &[Rat]) -> Vec<Rat> {
    let mut lcm = Int::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<Int> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = Int::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if !g.is_zero() {
        if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                g = -g;
            }
        }
        for x in &mut ints {
            *x = &*x / &g;
        }
    }
    ints.into_iter().map(Rat::from_integer).collect()
}

/// Exact basis of the right kernel of the matrix given by `rows`.
///
/// Returns one primitive integer vector per free column; an empty list means
/// full column rank.
pub fn kernel_basis(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let ech = echelon(scale_rows_to_int(rows), ncols);
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; ncols];
        for &c in &ech.pivots {
            s[c] = true;
        }
        s
    };
    let mut basis = Vec::new();
    for f in 0..ncols {
        if pivot_set[f] {
            continue;
        }
        let v = ech.back_substitute(&[(f, Rat::one())]);
        basis.push(normalize_vector(&v));
    }
    basis
}

/// Rank of the matrix given by `rows`.
pub fn rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    echelon(scale_rows_to_int(rows), ncols).pivots.len()
}

/// Outcome of solving a (possibly overdetermined) linear system exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// The system has exactly one solution; surplus rows were consistent.
    Unique(Vec<Rat>),
    /// The coefficient matrix does not have full column rank.
    RankDeficient { rank: usize },
    /// Some equation contradicts the others.
    Inconsistent,
}

/// Solve `rows * x = rhs` exactly, verifying every surplus equation.
pub fn solve(rows: &[Vec<Rat>], rhs: &[Rat], ncols: usize) -> SolveOutcome {
    assert_eq!(rows.len(), rhs.len());
    let augmented: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let ech = echelon(scale_rows_to_int(&augmented), ncols + 1);
    if ech.pivots.last() == Some(&ncols) {
        return SolveOutcome::Inconsistent;
    }
    if ech.pivots.len() < ncols {
        return SolveOutcome::RankDeficient {
            rank: ech.pivots.len(),
        };
    }
    // x solves the homogeneous augmented system with last coordinate -1.
    let v = ech.back_substitute(&[(ncols, -Rat::one())]);
    SolveOutcome::Unique(v[..ncols].to_vec())
}
