use alloc::vec;
use alloc::vec::Vec;

use super::Scalar;
use crate::error::{Error, Result};

/// Sparse matrix in coordinate form.
///
/// Entries are unique, nonzero, in bounds and sorted row-major; every
/// constructor re-establishes this, so structural equality is matrix equality.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMat<T> {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, T)>,
}

impl<T: Scalar> SparseMat<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMat {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMat {
            nrows: n,
            ncols: n,
            entries: (0..n).map(|i| (i, i, T::one())).collect(),
        }
    }

    /// Builds a matrix from arbitrary triplets; duplicates are summed and zeros dropped.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let mut raw: Vec<(usize, usize, T)> = Vec::new();
        for (r, c, v) in triplets {
            if r >= nrows || c >= ncols {
                return Err(Error::IndexOutOfRange {
                    what: if r >= nrows { "row" } else { "column" },
                    index: if r >= nrows { r as i64 } else { c as i64 },
                    min: 0,
                    max: if r >= nrows { nrows as i64 - 1 } else { ncols as i64 - 1 },
                });
            }
            raw.push((r, c, v));
        }
        raw.sort_by_key(|a| (a.0, a.1));
        let mut entries: Vec<(usize, usize, T)> = Vec::with_capacity(raw.len());
        for (r, c, v) in raw {
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 = last.2.add(&v),
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|e| !e.2.is_zero());
        Ok(SparseMat { nrows, ncols, entries })
    }

    pub fn from_dense(rows: &[Vec<T>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut trip = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    op: "from_dense",
                    left: (nrows, ncols),
                    right: (1, row.len()),
                });
            }
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    trip.push((r, c, v.clone()));
                }
            }
        }
        Ok(SparseMat {
            nrows,
            ncols,
            entries: trip,
        })
    }

    /// Column vector from dense entries.
    pub fn column_vector(values: &[T]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(r, v)| (r, 0, v.clone()))
            .collect();
        SparseMat {
            nrows: values.len(),
            ncols: 1,
            entries,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn entries(&self) -> &[(usize, usize, T)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&T> {
        self.entries
            .binary_search_by_key(&(row, col), |e| (e.0, e.1))
            .ok()
            .map(|i| &self.entries[i].2)
    }

    pub fn get_or_zero(&self, row: usize, col: usize) -> T {
        self.get(row, col).cloned().unwrap_or_else(T::zero)
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.ncols]; self.nrows];
        for (r, c, v) in &self.entries {
            out[*r][*c] = v.clone();
        }
        out
    }

    /// Offsets into `entries` where each row starts (length `nrows + 1`).
    fn row_offsets(&self) -> Vec<usize> {
        let mut offs = vec![0; self.nrows + 1];
        for (r, _, _) in &self.entries {
            offs[r + 1] += 1;
        }
        for i in 0..self.nrows {
            offs[i + 1] += offs[i];
        }
        offs
    }

    pub fn row(&self, r: usize) -> &[(usize, usize, T)] {
        let start = self.entries.partition_point(|e| e.0 < r);
        let end = self.entries.partition_point(|e| e.0 <= r);
        &self.entries[start..end]
    }

    /// Nonzero entries grouped by column: `cols[c]` lists `(row, value)` by ascending row.
    pub fn columns(&self) -> Vec<Vec<(usize, T)>> {
        let mut cols = vec![Vec::new(); self.ncols];
        for (r, c, v) in &self.entries {
            cols[*c].push((*r, v.clone()));
        }
        cols
    }

    pub fn mat_mul(&self, other: &SparseMat<T>) -> Result<SparseMat<T>> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch {
                op: "mat_mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let offs = other.row_offsets();
        let mut acc: Vec<Option<T>> = vec![None; other.ncols];
        let mut touched: Vec<usize> = Vec::new();
        let mut entries = Vec::new();
        let mut i = 0;
        while i < self.entries.len() {
            let r = self.entries[i].0;
            while i < self.entries.len() && self.entries[i].0 == r {
                let (_, k, a) = &self.entries[i];
                for (_, c, b) in &other.entries[offs[*k]..offs[k + 1]] {
                    let prod = a.mul(b);
                    match &mut acc[*c] {
                        Some(x) => *x = x.add(&prod),
                        slot @ None => {
                            *slot = Some(prod);
                            touched.push(*c);
                        }
                    }
                }
                i += 1;
            }
            touched.sort_unstable();
            for c in touched.drain(..) {
                if let Some(v) = acc[c].take() {
                    if !v.is_zero() {
                        entries.push((r, c, v));
                    }
                }
            }
        }
        Ok(SparseMat {
            nrows: self.nrows,
            ncols: other.ncols,
            entries,
        })
    }

    fn merge(&self, other: &SparseMat<T>, op: &'static str, sign: bool) -> Result<SparseMat<T>> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        let flip = |v: &T| if sign { v.clone() } else { v.neg() };
        while i < a.len() || j < b.len() {
            let ka = a.get(i).map(|e| (e.0, e.1));
            let kb = b.get(j).map(|e| (e.0, e.1));
            match (ka, kb) {
                (Some(x), Some(y)) if x == y => {
                    let v = if sign { a[i].2.add(&b[j].2) } else { a[i].2.sub(&b[j].2) };
                    if !v.is_zero() {
                        entries.push((x.0, x.1, v));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    entries.push(a[i].clone());
                    i += 1;
                }
                (Some(_), None) => {
                    entries.push(a[i].clone());
                    i += 1;
                }
                _ => {
                    entries.push((b[j].0, b[j].1, flip(&b[j].2)));
                    j += 1;
                }
            }
        }
        Ok(SparseMat {
            nrows: self.nrows,
            ncols: self.ncols,
            entries,
        })
    }

    pub fn add(&self, other: &SparseMat<T>) -> Result<SparseMat<T>> {
        self.merge(other, "add", true)
    }

    pub fn sub(&self, other: &SparseMat<T>) -> Result<SparseMat<T>> {
        self.merge(other, "sub", false)
    }

    pub fn scale(&self, s: &T) -> SparseMat<T> {
        let entries = self
            .entries
            .iter()
            .map(|(r, c, v)| (*r, *c, v.mul(s)))
            .filter(|e| !e.2.is_zero())
            .collect();
        SparseMat {
            nrows: self.nrows,
            ncols: self.ncols,
            entries,
        }
    }

    pub fn neg(&self) -> SparseMat<T> {
        let entries = self.entries.iter().map(|(r, c, v)| (*r, *c, v.neg())).collect();
        SparseMat {
            nrows: self.nrows,
            ncols: self.ncols,
            entries,
        }
    }

    pub fn transpose(&self) -> SparseMat<T> {
        let mut entries: Vec<_> = self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())).collect();
        entries.sort_by_key(|e| (e.0, e.1));
        SparseMat {
            nrows: self.ncols,
            ncols: self.nrows,
            entries,
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SparseMat<U> {
        let entries = self
            .entries
            .iter()
            .map(|(r, c, v)| (*r, *c, f(v)))
            .filter(|e| !e.2.is_zero())
            .collect();
        SparseMat {
            nrows: self.nrows,
            ncols: self.ncols,
            entries,
        }
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<SparseMat<T>> {
        let mut pos = vec![None; self.ncols];
        for (new, &old) in cols.iter().enumerate() {
            if old >= self.ncols {
                return Err(Error::IndexOutOfRange {
                    what: "column",
                    index: old as i64,
                    min: 0,
                    max: self.ncols as i64 - 1,
                });
            }
            pos[old] = Some(new);
        }
        let trip = self
            .entries
            .iter()
            .filter_map(|(r, c, v)| pos[*c].map(|nc| (*r, nc, v.clone())));
        SparseMat::from_triplets(self.nrows, cols.len(), trip)
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<SparseMat<T>> {
        Ok(self.transpose().select_columns(rows)?.transpose())
    }

    pub fn trace(&self) -> T {
        self.entries
            .iter()
            .filter(|e| e.0 == e.1)
            .fold(T::zero(), |acc, e| acc.add(&e.2))
    }

    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                op: "mul_vec",
                left: self.shape(),
                right: (x.len(), 1),
            });
        }
        let mut out = vec![T::zero(); self.nrows];
        for (r, c, v) in &self.entries {
            if !x[*c].is_zero() {
                out[*r] = out[*r].add(&v.mul(&x[*c]));
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation of matrices sharing a row count.
    pub fn stack_columns(ms: &[SparseMat<T>]) -> Result<SparseMat<T>> {
        let nrows = match ms.first() {
            Some(m) => m.nrows,
            None => return Ok(SparseMat::zeros(0, 0)),
        };
        let mut offset = 0;
        let mut trip = Vec::new();
        for m in ms {
            if m.nrows != nrows {
                return Err(Error::DimensionMismatch {
                    op: "stack_columns",
                    left: (nrows, offset),
                    right: m.shape(),
                });
            }
            trip.extend(m.entries.iter().map(|(r, c, v)| (*r, c + offset, v.clone())));
            offset += m.ncols;
        }
        SparseMat::from_triplets(nrows, offset, trip)
    }

    /// First coordinate (row-major) where the two matrices differ.
    pub fn first_difference(&self, other: &SparseMat<T>) -> Option<(usize, usize)> {
        if self.shape() != other.shape() {
            return Some((0, 0));
        }
        let diff = self.sub(other).ok()?;
        diff.entries.first().map(|e| (e.0, e.1))
    }

    pub fn is_symmetric(&self) -> bool {
        self.nrows == self.ncols && self.transpose() == *self
    }
}

/// `[a, b] = ab - ba`.
pub fn commutator<T: Scalar>(a: &SparseMat<T>, b: &SparseMat<T>) -> Result<SparseMat<T>> {
    a.mat_mul(b)?.sub(&b.mat_mul(a)?)
}

/// `{a, b} = ab + ba`.
pub fn anticommutator<T: Scalar>(a: &SparseMat<T>, b: &SparseMat<T>) -> Result<SparseMat<T>> {
    a.mat_mul(b)?.add(&b.mat_mul(a)?)
}
