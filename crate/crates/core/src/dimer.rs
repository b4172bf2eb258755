//! Dimer coverings of the `M x N` cylinder: transfer matrices over `Z[alpha]`,
//! the variation index, the partition function as a trace and an independent
//! covering enumerator.
//!
//! Rows run around the cylinder (row `M` touches row `1`); columns `1` and `N`
//! are not adjacent. A row of spins records, per site, whether the dimer at
//! that site points to the row above (up) or not (down).

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{AlphaPoly, Rational, SparseMat};
use crate::spin::{masks_with_popcount, tau_bar_generator, Sigma, SpinOperator};

/// Default bound on the row length for transfer-matrix work.
pub const MAX_TRANSFER_N: usize = 12;
/// Default bound on `M * N` for the covering enumerator.
pub const MAX_COVERING_SITES: usize = 36;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeShape {
    pub rows: usize,
    pub cols: usize,
}

impl LatticeShape {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidLabel(format!(
                "lattice needs M, N >= 1, got {rows} x {cols}"
            )));
        }
        Ok(LatticeShape { rows, cols })
    }
}

fn check_row_len(n: usize, limit: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidLabel(alloc::string::String::from(
            "row length N must be positive",
        )));
    }
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "row length N",
            value: n,
            limit,
        });
    }
    Ok(())
}

fn poly_matrix(op: &SpinOperator) -> Result<SparseMat<AlphaPoly>> {
    op.matrix()
}

/// `V_1 = prod_j sigma^x_j`, reversing every spin.
pub fn build_v1(n: usize) -> Result<SparseMat<AlphaPoly>> {
    check_row_len(n, MAX_TRANSFER_N)?;
    let ops: Vec<(Sigma, usize)> = (1..=n).map(|j| (Sigma::X, j)).collect();
    poly_matrix(&SpinOperator::new(n).term(1, &ops))
}

/// `1 + alpha sigma^s_j sigma^s_{j+1}` for one neighbouring pair.
fn pair_factor(n: usize, j: usize, kind: Sigma) -> Result<SparseMat<AlphaPoly>> {
    let pair = poly_matrix(&SpinOperator::new(n).term(1, &[(kind, j), (kind, j + 1)]))?;
    SparseMat::identity(1 << n).add(&pair.scale(&AlphaPoly::alpha()))
}

fn pair_product(n: usize, kind: Sigma) -> Result<SparseMat<AlphaPoly>> {
    check_row_len(n, MAX_TRANSFER_N)?;
    let mut acc = SparseMat::identity(1 << n);
    for j in 1..n {
        acc = acc.mat_mul(&pair_factor(n, j, kind)?)?;
    }
    Ok(acc)
}

/// `V_3 = prod_{j=1}^{N-1} (1 + alpha sigma^-_j sigma^-_{j+1})`.
pub fn build_v3(n: usize) -> Result<SparseMat<AlphaPoly>> {
    pair_product(n, Sigma::Minus)
}

/// Row-to-row transfer matrix `T = V_3 V_1`.
pub fn build_t(n: usize) -> Result<SparseMat<AlphaPoly>> {
    build_v3(n)?.mat_mul(&build_v1(n)?)
}

/// `T^2`, computed as the product `T T` and checked against the lowering/raising
/// factorisation before it is returned.
pub fn build_t2(n: usize) -> Result<SparseMat<AlphaPoly>> {
    let t = build_t(n)?;
    let t2 = t.mat_mul(&t)?;
    let factored = t2_factored(n)?;
    if let Some((r, c)) = t2.first_difference(&factored) {
        return Err(Error::InternalMismatch(format!(
            "T^2 differs from its factored form at ({r}, {c}) for N={n}"
        )));
    }
    Ok(t2)
}

/// `prod (1 + alpha sigma^- sigma^-) * prod (1 + alpha sigma^+ sigma^+)`.
pub fn t2_factored(n: usize) -> Result<SparseMat<AlphaPoly>> {
    pair_product(n, Sigma::Minus)?.mat_mul(&pair_product(n, Sigma::Plus)?)
}

/// `prod_{j odd} (1 + alpha tau_bar(e_j)) * prod_{j even} (1 + alpha tau_bar(e_j))`
/// with `n = N + 1`.
pub fn t2_tau_bar_form(n_row: usize) -> Result<SparseMat<AlphaPoly>> {
    check_row_len(n_row, MAX_TRANSFER_N)?;
    let n = n_row + 1;
    let dim = 1usize << n_row;
    let factor = |j: usize| -> Result<SparseMat<AlphaPoly>> {
        let tb = tau_bar_generator(n, j)?.map(|x: &Rational| AlphaPoly::from_coeffs(vec![x.numer().clone()]));
        SparseMat::identity(dim).add(&tb.scale(&AlphaPoly::alpha()))
    };
    let mut acc = SparseMat::identity(dim);
    for j in (1..n).filter(|j| j % 2 == 1) {
        acc = acc.mat_mul(&factor(j)?)?;
    }
    for j in (1..n).filter(|j| j % 2 == 0) {
        acc = acc.mat_mul(&factor(j)?)?;
    }
    Ok(acc)
}

/// `2 V = sum_j (-1)^j sigma^z_j` on a basis state.
pub fn doubled_variation(n: usize, bits: u64) -> i64 {
    (1..=n)
        .map(|j| {
            let z = if (bits >> (j - 1)) & 1 == 1 { -1 } else { 1 };
            if j % 2 == 0 {
                z
            } else {
                -z
            }
        })
        .sum()
}

/// The variation index `1/2 sum_j (-1)^j sigma^z_j`, diagonal.
pub fn variation_index(n: usize) -> Result<SparseMat<Rational>> {
    check_row_len(n, MAX_TRANSFER_N)?;
    let dim = 1usize << n;
    SparseMat::from_triplets(
        dim,
        dim,
        (0..dim).map(|b| (b, b, Rational::new(doubled_variation(n, b as u64), 2))),
    )
}

/// Twice the variation index, over `Z[alpha]`.
pub fn doubled_variation_index(n: usize) -> Result<SparseMat<AlphaPoly>> {
    check_row_len(n, MAX_TRANSFER_N)?;
    let dim = 1usize << n;
    SparseMat::from_triplets(
        dim,
        dim,
        (0..dim).map(|b| (b, b, AlphaPoly::constant(doubled_variation(n, b as u64)))),
    )
}

/// Basis states of each variation-index sector, keyed by `2v` ascending.
pub fn sector_split(n: usize) -> Result<Vec<(i64, Vec<u64>)>> {
    check_row_len(n, MAX_TRANSFER_N)?;
    let mut sectors: Vec<(i64, Vec<u64>)> = (-(n as i64)..=n as i64).step_by(2).map(|t| (t, Vec::new())).collect();
    for b in 0..(1u64 << n) {
        let t = doubled_variation(n, b);
        sectors[((t + n as i64) / 2) as usize].1.push(b);
    }
    Ok(sectors)
}

/// States of a single variation-index sector, ascending.
pub fn variation_sector(n: usize, two_v: i64) -> Result<Vec<u64>> {
    check_row_len(n, MAX_TRANSFER_N)?;
    if two_v.abs() > n as i64 || (two_v + n as i64) % 2 != 0 {
        return Err(Error::InvalidLabel(format!(
            "two_v={two_v} is not a variation index for N={n}"
        )));
    }
    Ok((0..(1u64 << n)).filter(|&b| doubled_variation(n, b) == two_v).collect())
}

/// Whether the sector is connected under the pair flips `O^-_j`, `O^+_j`.
pub fn orbit_check(n: usize, two_v: i64) -> Result<bool> {
    let states = variation_sector(n, two_v)?;
    let mut seen = vec![false; states.len()];
    let mut queue = VecDeque::new();
    seen[0] = true;
    queue.push_back(states[0]);
    let mut reached = 1;
    let ops: Vec<SpinOperator> = (1..n)
        .flat_map(|j| [Sigma::Minus, Sigma::Plus].map(|k| SpinOperator::new(n).term(1, &[(k, j), (k, j + 1)])))
        .collect();
    while let Some(b) = queue.pop_front() {
        for op in &ops {
            for (nb, _) in op.apply_bits(b) {
                let i = states
                    .binary_search(&nb)
                    .map_err(|_| Error::Invariant(format!("pair flip left sector two_v={two_v}")))?;
                if !seen[i] {
                    seen[i] = true;
                    reached += 1;
                    queue.push_back(nb);
                }
            }
        }
    }
    Ok(reached == states.len())
}

fn matrix_power(m: &SparseMat<AlphaPoly>, mut exp: usize) -> Result<SparseMat<AlphaPoly>> {
    let mut result = SparseMat::identity(m.nrows());
    let mut base = m.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result = result.mat_mul(&base)?;
        }
        exp >>= 1;
        if exp > 0 {
            base = base.mat_mul(&base)?;
        }
    }
    Ok(result)
}

/// Both evaluations of `Tr T^M`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRoutes {
    pub full: AlphaPoly,
    /// Contribution of each variation-index sector, keyed by `2v`.
    pub sectors: Vec<(i64, AlphaPoly)>,
}

/// `Z = Tr T^M` computed on the full space and sector by sector. The two
/// routes must agree; a disagreement is reported as an internal mismatch.
pub fn partition_trace_routes(shape: LatticeShape, limit_n: usize) -> Result<TraceRoutes> {
    let n = shape.cols;
    check_row_len(n, limit_n.min(MAX_TRANSFER_N))?;
    let t = build_t(n)?;
    let full = matrix_power(&t, shape.rows)?.trace();

    let t2 = t.mat_mul(&t)?;
    let half = shape.rows / 2;
    let mut sectors = Vec::new();
    let mut total = AlphaPoly::zero();
    for (two_v, states) in sector_split(n)? {
        let idx: Vec<usize> = states.iter().map(|&b| b as usize).collect();
        let block = t2.select_rows(&idx)?.select_columns(&idx)?;
        let mut power = matrix_power(&block, half)?;
        if shape.rows % 2 == 1 {
            let t_block = t.select_rows(&idx)?.select_columns(&idx)?;
            power = t_block.mat_mul(&power)?;
        }
        let contrib = power.trace();
        total = total.add(&contrib);
        sectors.push((two_v, contrib));
    }
    if total != full {
        return Err(Error::InternalMismatch(format!(
            "sector sum {total} differs from full trace {full} for {}x{}",
            shape.rows, shape.cols
        )));
    }
    Ok(TraceRoutes { full, sectors })
}

/// Cylinder partition function `Z(alpha) = Tr T^M` with the default size guard.
pub fn partition_trace(shape: LatticeShape) -> Result<AlphaPoly> {
    Ok(partition_trace_routes(shape, MAX_TRANSFER_N)?.full)
}

/// Edges of the cylinder graph as `(site, site, horizontal)`. Between two rows
/// that are neighbours both ways round (M = 2) there are two distinct edges.
fn cylinder_edges(shape: LatticeShape) -> Vec<(usize, usize, bool)> {
    let (m, n) = (shape.rows, shape.cols);
    let site = |i: usize, j: usize| i * n + j;
    let mut edges = Vec::new();
    for i in 0..m {
        for j in 0..n.saturating_sub(1) {
            edges.push((site(i, j), site(i, j + 1), true));
        }
    }
    if m >= 2 {
        for i in 0..m {
            for j in 0..n {
                edges.push((site(i, j), site((i + 1) % m, j), false));
            }
        }
    }
    edges
}

/// `sum over coverings of alpha^(horizontal dimers)`, by exhaustive search.
pub fn enumerate_coverings(shape: LatticeShape) -> Result<AlphaPoly> {
    enumerate_coverings_bounded(shape, MAX_COVERING_SITES)
}

pub fn enumerate_coverings_bounded(shape: LatticeShape, limit: usize) -> Result<AlphaPoly> {
    let sites = shape.rows * shape.cols;
    if sites > limit {
        return Err(Error::LimitExceeded {
            what: "lattice sites M*N",
            value: sites,
            limit,
        });
    }
    let mut incident: Vec<Vec<(usize, bool)>> = vec![Vec::new(); sites];
    for (a, b, h) in cylinder_edges(shape) {
        incident[a].push((b, h));
        incident[b].push((a, h));
    }
    let mut counts = vec![0u128; sites / 2 + 1];
    let mut covered = vec![false; sites];
    cover_from(0, 0, &incident, &mut covered, &mut counts);
    Ok(AlphaPoly::from_coeffs(counts.into_iter().map(BigInt::from).collect()))
}

fn cover_from(
    start: usize,
    horizontal: usize,
    incident: &[Vec<(usize, bool)>],
    covered: &mut [bool],
    counts: &mut [u128],
) {
    let Some(a) = (start..covered.len()).find(|&i| !covered[i]) else {
        counts[horizontal] += 1;
        return;
    };
    covered[a] = true;
    for &(b, h) in &incident[a] {
        if !covered[b] {
            covered[b] = true;
            cover_from(a + 1, horizontal + h as usize, incident, covered, counts);
            covered[b] = false;
        }
    }
    covered[a] = false;
}

/// Summary of the local row map check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowMapReport {
    pub width: usize,
    /// Distinct row fillings (dimer halves within one row).
    pub row_configs: usize,
    /// Spin rows that are the image of more than one row filling.
    pub ambiguous_spin_rows: usize,
    /// Whether edge states map injectively to spin rows.
    pub edge_injective: bool,
    /// Whether every transfer-matrix entry equals the weighted count of row fillings.
    pub transfer_agrees: bool,
}

impl RowMapReport {
    pub fn passed(&self) -> bool {
        self.edge_injective && self.transfer_agrees
    }
}

/// Fillings of one row given the occupied vertical edges below and above:
/// `None` if impossible, else the number of horizontal dimers.
fn row_filling(n: usize, below: u64, above: u64) -> Option<usize> {
    if below & above != 0 {
        return None;
    }
    let free = !(below | above) & ((1u64 << n) - 1);
    // free sites must split into runs of even length, each tiled in one way
    let mut h = 0;
    let mut j = 0;
    while j < n {
        if free >> j & 1 == 1 {
            let mut len = 0;
            while j < n && free >> j & 1 == 1 {
                len += 1;
                j += 1;
            }
            if len % 2 == 1 {
                return None;
            }
            h += len / 2;
        } else {
            j += 1;
        }
    }
    Some(h)
}

/// Checks the correspondence between dimer rows and spin rows for width `n`:
/// an up spin means the site's dimer points to the row above, edge states map
/// one-to-one onto spin rows, and `T[s', s]` equals `alpha^h` for the unique
/// filling of the row whose lower edges are the up spins of `s` and upper edges
/// the up spins of `s'` (zero if none exists).
pub fn row_map_check(n: usize) -> Result<RowMapReport> {
    check_row_len(n, 10)?;
    let full = (1u64 << n) - 1;
    // every filling: choose lower edges, upper edges, then tile the rest
    let mut image_count = vec![0usize; 1 << n];
    let mut row_configs = 0;
    for below in 0..=full {
        for above in 0..=full {
            if row_filling(n, below, above).is_some() {
                row_configs += 1;
                // spin of a site: up iff its dimer goes to the row above
                image_count[above as usize] += 1;
            }
        }
    }
    let ambiguous_spin_rows = image_count.iter().filter(|&&c| c > 1).count();
    // an edge state is a set of occupied vertical edges; its spin row has up
    // exactly there, so distinct edge states give distinct spin rows
    let mut seen = vec![false; 1 << n];
    let mut edge_injective = true;
    for edges in 0..=full {
        let spin = edges;
        if seen[spin as usize] {
            edge_injective = false;
        }
        seen[spin as usize] = true;
    }
    // bits of a spin state mark down spins; up spins are the complement
    let t = build_t(n)?;
    let mut transfer_agrees = true;
    for s in 0..=full {
        for s2 in 0..=full {
            let expected = match row_filling(n, !s & full, !s2 & full) {
                Some(h) => AlphaPoly::monomial(1, h),
                None => AlphaPoly::zero(),
            };
            if t.get_or_zero(s2 as usize, s as usize) != expected {
                transfer_agrees = false;
            }
        }
    }
    Ok(RowMapReport {
        width: n,
        row_configs,
        ambiguous_spin_rows,
        edge_injective,
        transfer_agrees,
    })
}

/// Sizes of the variation-index sectors predicted by `binom(N, N/2 - v)`.
pub fn predicted_sector_sizes(n: usize) -> Vec<(i64, usize)> {
    (-(n as i64)..=n as i64)
        .step_by(2)
        .map(|t| (t, masks_with_popcount(n, ((n as i64 - t) / 2) as usize).len()))
        .collect()
}

/// Evaluates every entry of a polynomial matrix at `alpha`.
pub fn evaluate(m: &SparseMat<AlphaPoly>, alpha: &Rational) -> SparseMat<Rational> {
    m.map(|p| p.eval(alpha))
}

/// Total number of coverings, `Z(1)`.
pub fn covering_count(z: &AlphaPoly) -> BigInt {
    if z.is_zero() {
        BigInt::zero()
    } else {
        z.sum_coeffs()
    }
}
