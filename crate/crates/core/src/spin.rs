//! Spin-1/2 chains on `n - 1` sites: the representations `tau` and `tau_bar`,
//! magnetisation sectors and the contragredience relation between them.
//!
//! A basis state is a bitmask where bit `j - 1` set means site `j` is spin-down,
//! so the all-up state is `0`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::{Rational, Scalar, SparseMat};

/// Largest number of sites for full-space matrices.
pub const MAX_SITES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sigma {
    Plus,
    Minus,
    Z,
    X,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinBasisState {
    pub n_sites: usize,
    pub bits: u64,
}

impl SpinBasisState {
    pub fn new(n_sites: usize, bits: u64) -> Result<Self> {
        if n_sites > MAX_SITES {
            return Err(Error::LimitExceeded {
                what: "spin sites",
                value: n_sites,
                limit: MAX_SITES,
            });
        }
        if bits >> n_sites != 0 {
            return Err(Error::Invariant(format!("bitmask {bits:#b} exceeds {n_sites} sites")));
        }
        Ok(SpinBasisState { n_sites, bits })
    }

    pub fn all_up(n_sites: usize) -> Self {
        SpinBasisState { n_sites, bits: 0 }
    }

    /// Whether site `j` (1-based) is down.
    pub fn is_down(&self, j: usize) -> bool {
        (self.bits >> (j - 1)) & 1 == 1
    }

    pub fn down_count(&self) -> usize {
        self.bits.count_ones() as usize
    }
}

impl fmt::Display for SpinBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 1..=self.n_sites {
            f.write_str(if self.is_down(j) { "↓" } else { "↑" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SpinBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{self}⟩")
    }
}

/// Parses arrows (`↑`, `↓`) or the ASCII letters `u`, `d`.
impl FromStr for SpinBasisState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        let mut n = 0;
        for ch in s.chars() {
            match ch {
                '↑' | 'u' | 'U' => {}
                '↓' | 'd' | 'D' => bits |= 1 << n,
                other => return Err(Error::Parse(format!("unexpected spin character {other:?}"))),
            }
            n += 1;
        }
        SpinBasisState::new(n, bits)
    }
}

/// Sparse linear combination of spin basis states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinVector {
    n_sites: usize,
    terms: BTreeMap<u64, Rational>,
}

impl SpinVector {
    pub fn zero(n_sites: usize) -> Self {
        SpinVector {
            n_sites,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(s: SpinBasisState) -> Self {
        let mut v = SpinVector::zero(s.n_sites);
        v.add_term(s.bits, Rational::one());
        v
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn add_term(&mut self, bits: u64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&bits) {
            Some(old) => old.add(&c),
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&bits);
        } else {
            self.terms.insert(bits, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (SpinBasisState, &Rational)> {
        let n = self.n_sites;
        self.terms
            .iter()
            .map(move |(b, c)| (SpinBasisState { n_sites: n, bits: *b }, c))
    }

    pub fn coeff(&self, bits: u64) -> Rational {
        self.terms.get(&bits).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Applies a Pauli operator to every term.
    pub fn apply(&self, kind: Sigma, site: usize) -> Result<SpinVector> {
        let mut out = SpinVector::zero(self.n_sites);
        for (s, c) in self.terms() {
            for (b, d) in apply_sigma(kind, site, s)?.terms {
                out.add_term(b, c * &d);
            }
        }
        Ok(out)
    }

    /// Dense coordinates in the given ordered basis; fails if a term lies outside it.
    pub fn coordinates(&self, basis: &[u64]) -> Result<Vec<Rational>> {
        let mut x = alloc::vec![Rational::zero(); basis.len()];
        for (b, c) in &self.terms {
            let i = basis.binary_search(b).map_err(|_| {
                Error::Invariant(format!(
                    "state {:?} outside the target basis",
                    SpinBasisState {
                        n_sites: self.n_sites,
                        bits: *b
                    }
                ))
            })?;
            x[i] = c.clone();
        }
        Ok(x)
    }
}

impl fmt::Display for SpinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (s, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *c == Rational::one() {
                write!(f, "|{s}⟩")?;
            } else {
                write!(f, "({c})|{s}⟩")?;
            }
        }
        Ok(())
    }
}

/// Action of one Pauli operator on a single site of a bitmask.
/// Returns `None` for a vanishing result, else the new bits and a sign.
fn sigma_on_bits(kind: Sigma, site: usize, n_sites: usize, bits: u64) -> Option<(u64, i64)> {
    if site == 0 || site > n_sites {
        return None;
    }
    let mask = 1u64 << (site - 1);
    let down = bits & mask != 0;
    match kind {
        Sigma::Minus if !down => Some((bits | mask, 1)),
        Sigma::Plus if down => Some((bits & !mask, 1)),
        Sigma::Minus | Sigma::Plus => None,
        Sigma::Z => Some((bits, if down { -1 } else { 1 })),
        Sigma::X => Some((bits ^ mask, 1)),
    }
}

/// `sigma^kind_site |s>`. Sites `0` and `n_sites + 1` are allowed for the ladder
/// operators and give zero.
pub fn apply_sigma(kind: Sigma, site: usize, s: SpinBasisState) -> Result<SpinVector> {
    let edge = s.n_sites + 1;
    let ladder = matches!(kind, Sigma::Plus | Sigma::Minus);
    if site > edge || (!ladder && (site == 0 || site == edge)) {
        return Err(Error::IndexOutOfRange {
            what: "spin site",
            index: site as i64,
            min: if ladder { 0 } else { 1 },
            max: if ladder { edge as i64 } else { s.n_sites as i64 },
        });
    }
    let mut v = SpinVector::zero(s.n_sites);
    if let Some((b, sign)) = sigma_on_bits(kind, site, s.n_sites, s.bits) {
        v.add_term(b, Rational::integer(sign));
    }
    Ok(v)
}

/// Integer combination of products of Pauli operators on a fixed chain.
///
/// Each product is written left to right as in operator notation; the
/// rightmost factor acts first. Ladder operators on the virtual sites `0`
/// and `n_sites + 1` vanish.
#[derive(Clone, Debug)]
pub struct SpinOperator {
    n_sites: usize,
    terms: Vec<(i64, Vec<(Sigma, usize)>)>,
}

impl SpinOperator {
    pub fn new(n_sites: usize) -> Self {
        SpinOperator {
            n_sites,
            terms: Vec::new(),
        }
    }

    pub fn term(mut self, coeff: i64, ops: &[(Sigma, usize)]) -> Self {
        self.terms.push((coeff, ops.to_vec()));
        self
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Image of a basis state as `(bits, coefficient)` pairs, unmerged.
    pub fn apply_bits(&self, bits: u64) -> Vec<(u64, i64)> {
        let mut out = Vec::new();
        'terms: for (coeff, ops) in &self.terms {
            let mut b = bits;
            let mut c = *coeff;
            for &(kind, site) in ops.iter().rev() {
                match sigma_on_bits(kind, site, self.n_sites, b) {
                    Some((nb, s)) => {
                        b = nb;
                        c *= s;
                    }
                    None => continue 'terms,
                }
            }
            out.push((b, c));
        }
        out
    }

    pub fn apply(&self, v: &SpinVector) -> SpinVector {
        let mut out = SpinVector::zero(self.n_sites);
        for (b, c) in &v.terms {
            for (nb, k) in self.apply_bits(*b) {
                out.add_term(nb, c * &Rational::integer(k));
            }
        }
        out
    }

    /// Matrix on the full `2^n_sites` space, built column by column.
    pub fn matrix<T: Scalar>(&self) -> Result<SparseMat<T>> {
        check_sites(self.n_sites)?;
        let dim = 1usize << self.n_sites;
        let mut trip = Vec::new();
        for col in 0..dim {
            for (row, c) in self.apply_bits(col as u64) {
                trip.push((row as usize, col, T::from_i64(c)));
            }
        }
        SparseMat::from_triplets(dim, dim, trip)
    }

    /// Matrix from the span of `source` to the span of `target` (both sorted bitmasks).
    /// Images leaving `target` are an error.
    pub fn block<T: Scalar>(&self, source: &[u64], target: &[u64]) -> Result<SparseMat<T>> {
        let mut trip = Vec::new();
        for (col, &b) in source.iter().enumerate() {
            for (nb, c) in self.apply_bits(b) {
                let row = target.binary_search(&nb).map_err(|_| {
                    Error::Invariant(format!(
                        "operator maps {:?} outside the target block",
                        SpinBasisState {
                            n_sites: self.n_sites,
                            bits: b
                        }
                    ))
                })?;
                trip.push((row, col, T::from_i64(c)));
            }
        }
        SparseMat::from_triplets(target.len(), source.len(), trip)
    }
}

fn check_sites(n_sites: usize) -> Result<()> {
    if n_sites > MAX_SITES {
        return Err(Error::LimitExceeded {
            what: "spin sites",
            value: n_sites,
            limit: MAX_SITES,
        });
    }
    Ok(())
}

fn check_generator(n: usize, j: usize) -> Result<()> {
    if n < 2 || j == 0 || j >= n {
        return Err(Error::IndexOutOfRange {
            what: "generator index j",
            index: j as i64,
            min: 1,
            max: n as i64 - 1,
        });
    }
    Ok(())
}

/// `sigma^-_{j-1} sigma^+_j + sigma^+_j sigma^-_{j+1}` on `n - 1` sites.
pub fn tau_operator(n: usize, j: usize) -> Result<SpinOperator> {
    check_generator(n, j)?;
    Ok(SpinOperator::new(n - 1)
        .term(1, &[(Sigma::Minus, j - 1), (Sigma::Plus, j)])
        .term(1, &[(Sigma::Plus, j), (Sigma::Minus, j + 1)]))
}

/// Twin of [`tau_operator`] with the odd sites reversed.
pub fn tau_bar_operator(n: usize, j: usize) -> Result<SpinOperator> {
    check_generator(n, j)?;
    let k = if j % 2 == 1 { Sigma::Minus } else { Sigma::Plus };
    Ok(SpinOperator::new(n - 1)
        .term(1, &[(k, j - 1), (k, j)])
        .term(1, &[(k, j), (k, j + 1)]))
}

/// Matrix of `tau(e_j)` on the full space of dimension `2^(n-1)`.
pub fn tau_generator(n: usize, j: usize) -> Result<SparseMat<Rational>> {
    tau_operator(n, j)?.matrix()
}

pub fn tau_bar_generator(n: usize, j: usize) -> Result<SparseMat<Rational>> {
    tau_bar_operator(n, j)?.matrix()
}

/// `U = prod_{j odd} sigma^x_j`, a permutation matrix with `U^2 = 1`.
pub fn u_matrix(n: usize) -> Result<SparseMat<Rational>> {
    let n_sites = n.saturating_sub(1);
    let ops: Vec<(Sigma, usize)> = (1..=n_sites).step_by(2).map(|j| (Sigma::X, j)).collect();
    SpinOperator::new(n_sites).term(1, &ops).matrix()
}

/// `H = -sum_j tau(e_j)`.
pub fn hamiltonian(n: usize) -> Result<SparseMat<Rational>> {
    if n < 2 {
        return Err(Error::InvalidLabel(format!("Hamiltonian needs n >= 2, got {n}")));
    }
    let mut op = SpinOperator::new(n - 1);
    for j in 1..n {
        for (c, ops) in tau_operator(n, j)?.terms {
            op = op.term(-c, &ops);
        }
    }
    op.matrix()
}

/// Total magnetisation `S^z = 1/2 sum_j sigma^z_j`.
pub fn sz_matrix(n: usize) -> Result<SparseMat<Rational>> {
    let n_sites = n.saturating_sub(1);
    check_sites(n_sites)?;
    let dim = 1usize << n_sites;
    let half = Rational::new(1, 2);
    SparseMat::from_triplets(
        dim,
        dim,
        (0..dim).map(|b| {
            let down = (b as u64).count_ones() as i64;
            (b, b, &Rational::integer(n_sites as i64 - 2 * down) * &half)
        }),
    )
}

/// Magnetisation sector `E_{n-1}^v`, carried as `two_v = 2v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectorLabel {
    pub n: usize,
    pub two_v: i64,
}

impl SectorLabel {
    pub fn new(n: usize, two_v: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLabel(String::from("n must be positive")));
        }
        let n_sites = (n - 1) as i64;
        if two_v.abs() > n_sites || (two_v - n_sites).rem_euclid(2) != 0 {
            return Err(Error::InvalidLabel(format!(
                "two_v={two_v} must satisfy |two_v| <= n-1={n_sites} and two_v = n-1 mod 2"
            )));
        }
        Ok(SectorLabel { n, two_v })
    }

    /// Every sector of the chain, by ascending `two_v`.
    pub fn all(n: usize) -> Result<Vec<SectorLabel>> {
        let m = n
            .checked_sub(1)
            .ok_or_else(|| Error::InvalidLabel(String::from("n must be positive")))? as i64;
        (-m..=m).step_by(2).map(|t| SectorLabel::new(n, t)).collect()
    }

    pub fn n_sites(&self) -> usize {
        self.n - 1
    }

    /// Number of down spins in the sector.
    pub fn down_count(&self) -> usize {
        ((self.n_sites() as i64 - self.two_v) / 2) as usize
    }

    pub fn dim(&self) -> usize {
        crate::binomial(self.n_sites() as u64, self.down_count() as u64) as usize
    }

    pub fn negated(&self) -> SectorLabel {
        SectorLabel {
            n: self.n,
            two_v: -self.two_v,
        }
    }

    /// The sector shifted by `delta_two_v`, if it exists.
    pub fn shifted(&self, delta_two_v: i64) -> Option<SectorLabel> {
        SectorLabel::new(self.n, self.two_v + delta_two_v).ok()
    }
}

impl fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_v % 2 == 0 {
            write!(f, "E_{}^{}", self.n - 1, self.two_v / 2)
        } else {
            write!(f, "E_{}^{}/2", self.n - 1, self.two_v)
        }
    }
}

/// All bitmasks of `n_sites` bits with `ones` bits set, ascending.
pub fn masks_with_popcount(n_sites: usize, ones: usize) -> Vec<u64> {
    if ones > n_sites {
        return Vec::new();
    }
    if ones == 0 {
        return alloc::vec![0];
    }
    let mut out = Vec::new();
    let mut x: u64 = (1u64 << ones) - 1;
    let limit = 1u64 << n_sites;
    while x < limit {
        out.push(x);
        // next larger integer with the same popcount
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

/// Basis of the sector by ascending bitmask.
pub fn sector_basis(label: &SectorLabel) -> Vec<SpinBasisState> {
    sector_masks(label)
        .into_iter()
        .map(|bits| SpinBasisState {
            n_sites: label.n_sites(),
            bits,
        })
        .collect()
}

pub fn sector_masks(label: &SectorLabel) -> Vec<u64> {
    masks_with_popcount(label.n_sites(), label.down_count())
}

/// Diagonal block of a full-space matrix on a sector. Rejects matrices that
/// couple different sectors, reporting the first such entry.
pub fn sector_restrict<T: Scalar>(m: &SparseMat<T>, label: &SectorLabel) -> Result<SparseMat<T>> {
    let dim = 1usize << label.n_sites();
    if m.shape() != (dim, dim) {
        return Err(Error::DimensionMismatch {
            op: "sector_restrict",
            left: m.shape(),
            right: (dim, dim),
        });
    }
    if let Some((r, c, _)) = m.entries().iter().find(|(r, c, _)| r.count_ones() != c.count_ones()) {
        return Err(Error::MixedSectors { row: *r, col: *c });
    }
    let idx: Vec<usize> = sector_masks(label).into_iter().map(|b| b as usize).collect();
    m.select_rows(&idx)?.select_columns(&idx)
}

/// `tau_v(e_j)`, built directly on the sector basis.
pub fn sector_tau(label: &SectorLabel, j: usize) -> Result<SparseMat<Rational>> {
    let masks = sector_masks(label);
    tau_operator(label.n, j)?.block(&masks, &masks)
}

/// `tau_v(e_j)` for `j = 1 .. n-1`.
pub fn sector_taus(label: &SectorLabel) -> Result<Vec<SparseMat<Rational>>> {
    let masks = sector_masks(label);
    (1..label.n)
        .map(|j| tau_operator(label.n, j)?.block(&masks, &masks))
        .collect()
}

/// Result of a matrix-identity check with an optional failure description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub checked: usize,
    pub failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Verifies `tau_{-v}(e_j) = F tau_v(e_j)^T F^{-1}` for every `j`, where `F`
/// reverses all spins and so maps `E^v` onto `E^{-v}`.
pub fn contragredient_check(n: usize, two_v: i64) -> Result<CheckOutcome> {
    let label = SectorLabel::new(n, two_v)?;
    let mirror = label.negated();
    let src = sector_masks(&label);
    let dst = sector_masks(&mirror);
    let full = (1u64 << label.n_sites()) - 1;
    let flip = SparseMat::from_triplets(
        dst.len(),
        src.len(),
        src.iter().enumerate().map(|(i, b)| {
            (
                dst.binary_search(&(b ^ full)).expect("flip stays in mirror sector"),
                i,
                Rational::one(),
            )
        }),
    )?;
    let flip_inv = flip.transpose();
    let mut checked = 0;
    for j in 1..n {
        let t = sector_tau(&label, j)?;
        let lhs = sector_tau(&mirror, j)?;
        let rhs = flip.mat_mul(&t.transpose())?.mat_mul(&flip_inv)?;
        checked += 1;
        if let Some((r, c)) = lhs.first_difference(&rhs) {
            return Ok(CheckOutcome {
                checked,
                failure: Some(format!("j={j}: entries differ at ({r}, {c})")),
            });
        }
    }
    Ok(CheckOutcome { checked, failure: None })
}
