//! Fraction-free rank and kernel computation over the rationals.
//!
//! Rows are first scaled to integers. Elimination then works column by column,
//! taking as pivot the first remaining row (in original order) whose leading
//! entry sits in the current column, and replaces every other such row `r` by
//! `pivot[c] * r - r[c] * pivot` divided by its content. Rows stay sparse and
//! integral, and no rational arithmetic happens until back substitution.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Rational, Scalar, SparseMat};

/// Rank, kernel basis and pivot columns of a rational matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelImage {
    pub rank: usize,
    /// Dense kernel vectors of length `ncols`, primitive and integral.
    pub kernel_basis: Vec<Vec<Rational>>,
    pub pivot_columns: Vec<usize>,
}

impl KernelImage {
    pub fn kernel_dim(&self) -> usize {
        self.kernel_basis.len()
    }
}

type IntRow = Vec<(usize, BigInt)>;

fn integer_rows(m: &SparseMat<Rational>) -> Vec<IntRow> {
    let mut rows: Vec<Vec<(usize, &Rational)>> = vec![Vec::new(); m.nrows()];
    for (r, c, v) in m.entries() {
        rows[*r].push((*c, v));
    }
    rows.into_iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
            let mut out: IntRow = row
                .into_iter()
                .map(|(c, v)| (c, v.numer() * (&lcm / v.denom())))
                .collect();
            make_primitive(&mut out);
            out
        })
        .collect()
}

fn make_primitive(row: &mut IntRow) {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// `a * row - b * pivot`, both sparse and sorted by column.
fn combine(a: &BigInt, row: &IntRow, b: &BigInt, pivot: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map(|e| e.0);
        let cj = pivot.get(j).map(|e| e.0);
        let (c, v) = match (ci, cj) {
            (Some(x), Some(y)) if x == y => {
                let v = a * &row[i].1 - b * &pivot[j].1;
                i += 1;
                j += 1;
                (x, v)
            }
            (Some(x), Some(y)) if x < y => {
                i += 1;
                (x, a * &row[i - 1].1)
            }
            (Some(x), None) => {
                i += 1;
                (x, a * &row[i - 1].1)
            }
            (_, Some(y)) => {
                j += 1;
                (y, -(b * &pivot[j - 1].1))
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    make_primitive(&mut out);
    out
}

/// Row echelon form: pivot rows in ascending pivot-column order.
fn echelon(m: &SparseMat<Rational>) -> Vec<IntRow> {
    let mut active: Vec<IntRow> = integer_rows(m).into_iter().filter(|r| !r.is_empty()).collect();
    let mut pivots: Vec<IntRow> = Vec::new();
    for col in 0..m.ncols() {
        let Some(p) = active.iter().position(|r| r[0].0 == col) else {
            continue;
        };
        let pivot = active.remove(p);
        let a = &pivot[0].1;
        let mut next = Vec::with_capacity(active.len());
        for row in active.drain(..) {
            if row[0].0 == col {
                let reduced = combine(a, &row, &row[0].1, &pivot);
                if !reduced.is_empty() {
                    next.push(reduced);
                }
            } else {
                next.push(row);
            }
        }
        active = next;
        pivots.push(pivot);
    }
    debug_assert!(active.is_empty());
    pivots
}

/// Rank of a rational matrix.
pub fn rank(m: &SparseMat<Rational>) -> usize {
    echelon(m).len()
}

/// Rank, kernel basis and pivot columns of `m`.
pub fn rank_kernel(m: &SparseMat<Rational>) -> KernelImage {
    let rows = echelon(m);
    let ncols = m.ncols();
    let pivot_columns: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
    let mut is_pivot = vec![false; ncols];
    for &p in &pivot_columns {
        is_pivot[p] = true;
    }
    let mut kernel_basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![Rational::zero(); ncols];
        x[free] = Rational::one();
        for row in rows.iter().rev() {
            let (p, lead) = &row[0];
            let mut s = Rational::zero();
            for (c, v) in &row[1..] {
                if !x[*c].is_zero() {
                    s = &s + &(&Rational::from_integer(v.clone()) * &x[*c]);
                }
            }
            x[*p] = -(&s / &Rational::from_integer(lead.clone()));
        }
        kernel_basis.push(primitive_vector(x));
    }
    KernelImage {
        rank: rows.len(),
        kernel_basis,
        pivot_columns,
    }
}

/// Scales a nonzero rational vector to a primitive integer vector.
fn primitive_vector(x: Vec<Rational>) -> Vec<Rational> {
    let lcm = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = x.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let g = if g.is_zero() { BigInt::one() } else { g };
    let sign = match ints.iter().find(|v| !v.is_zero()) {
        Some(v) if v.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter()
        .map(|v| Rational::from_integer(v / &g * &sign))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> SparseMat<Rational> {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rational::integer(v)).collect())
            .collect();
        SparseMat::from_dense(&rows).unwrap()
    }

    #[test]
    fn identity_full_rank() {
        let k = rank_kernel(&SparseMat::identity(5));
        assert_eq!(k.rank, 5);
        assert_eq!(k.kernel_dim(), 0);
        assert_eq!(k.pivot_columns, [0, 1, 2, 3, 4]);
    }

    #[test]
    fn zero_matrix() {
        let k = rank_kernel(&SparseMat::<Rational>::zeros(3, 7));
        assert_eq!(k.rank, 0);
        assert_eq!(k.kernel_dim(), 7);
    }

    #[test]
    fn proportional_rows() {
        let k = rank_kernel(&mat(&[&[1, 2], &[2, 4]]));
        assert_eq!(k.rank, 1);
        assert_eq!(k.kernel_basis, [[Rational::integer(2), Rational::integer(-1)]]);
    }

    #[test]
    fn rational_entries() {
        let m = SparseMat::from_dense(&[
            vec![Rational::new(1, 2), Rational::new(1, 3)],
            vec![Rational::new(3, 2), Rational::integer(1)],
        ])
        .unwrap();
        let k = rank_kernel(&m);
        assert_eq!(k.rank, 1);
        assert_eq!(k.kernel_basis, [[Rational::integer(2), Rational::integer(-3)]]);
    }

    #[test]
    fn pivots_skip_dependent_columns() {
        let k = rank_kernel(&mat(&[&[0, 1, 2, 0], &[0, 2, 4, 1]]));
        assert_eq!(k.rank, 2);
        assert_eq!(k.pivot_columns, [1, 3]);
        assert_eq!(k.kernel_dim(), 2);
    }
}
