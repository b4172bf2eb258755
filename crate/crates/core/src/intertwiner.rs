//! Intertwiners between the link modules and the spin sectors at `beta = 0`:
//! the spin-spin map `J`, the link-spin maps `h_v`, their composites
//! `h_{v,k} = J^k h_{v+2k}`, and a generic verifier.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::exact::{Rational, SparseMat};
use crate::link::{self, LinkState, LinkVector, ModuleLabel};
use crate::spin::{self, SectorLabel, Sigma, SpinOperator, SpinVector};
use crate::tl::BetaContext;

/// Source or target of an intertwiner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModuleDescriptor {
    Link(ModuleLabel),
    Sector(SectorLabel),
    /// The zero module of `TL_n`, e.g. a sector beyond the extreme magnetisation.
    Zero {
        n: usize,
    },
}

impl ModuleDescriptor {
    pub fn n(&self) -> usize {
        match self {
            ModuleDescriptor::Link(l) => l.n,
            ModuleDescriptor::Sector(s) => s.n,
            ModuleDescriptor::Zero { n } => *n,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ModuleDescriptor::Link(l) => l.dim(),
            ModuleDescriptor::Sector(s) => s.dim(),
            ModuleDescriptor::Zero { .. } => 0,
        }
    }

    /// Matrices of `e_1 .. e_{n-1}` at `beta = 0`.
    pub fn generator_matrices(&self) -> Result<Vec<SparseMat<Rational>>> {
        match self {
            ModuleDescriptor::Link(l) => link::rep_matrices(l, &BetaContext::zero()),
            ModuleDescriptor::Sector(s) => spin::sector_taus(s),
            ModuleDescriptor::Zero { n } => Ok((1..*n).map(|_| SparseMat::zeros(0, 0)).collect()),
        }
    }
}

impl fmt::Display for ModuleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleDescriptor::Link(l) => write!(f, "{l}"),
            ModuleDescriptor::Sector(s) => write!(f, "{s}"),
            ModuleDescriptor::Zero { n } => write!(f, "0 (n={n})"),
        }
    }
}

/// A linear map with its source and target modules.
#[derive(Clone, Debug, PartialEq)]
pub struct IntertwinerMatrix {
    pub matrix: SparseMat<Rational>,
    pub source: ModuleDescriptor,
    pub target: ModuleDescriptor,
}

impl IntertwinerMatrix {
    pub fn new(matrix: SparseMat<Rational>, source: ModuleDescriptor, target: ModuleDescriptor) -> Result<Self> {
        if matrix.shape() != (target.dim(), source.dim()) {
            return Err(Error::DimensionMismatch {
                op: "intertwiner shape",
                left: matrix.shape(),
                right: (target.dim(), source.dim()),
            });
        }
        Ok(IntertwinerMatrix { matrix, source, target })
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &IntertwinerMatrix) -> Result<IntertwinerMatrix> {
        if next.source != self.target {
            return Err(Error::Invariant(format!(
                "cannot compose: {} is not {}",
                self.target, next.source
            )));
        }
        IntertwinerMatrix::new(next.matrix.mat_mul(&self.matrix)?, self.source, next.target)
    }
}

/// First entry where `target(e_j) A` and `A source(e_j)` differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub generator: usize,
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e_{} at ({}, {})", self.generator, self.row, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntertwineReport {
    pub generators_checked: usize,
    pub witness: Option<Witness>,
}

impl IntertwineReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks `target[j] * a == a * source[j]` for every generator.
pub fn check_intertwine(
    a: &SparseMat<Rational>,
    source_reps: &[SparseMat<Rational>],
    target_reps: &[SparseMat<Rational>],
) -> Result<IntertwineReport> {
    if source_reps.len() != target_reps.len() {
        return Err(Error::SizeMismatch {
            expected: source_reps.len(),
            found: target_reps.len(),
        });
    }
    for (j, (s, t)) in source_reps.iter().zip(target_reps).enumerate() {
        if s.shape() != (a.ncols(), a.ncols()) || t.shape() != (a.nrows(), a.nrows()) {
            return Err(Error::DimensionMismatch {
                op: "check_intertwine",
                left: a.shape(),
                right: (t.nrows(), s.ncols()),
            });
        }
        let lhs = t.mat_mul(a)?;
        let rhs = a.mat_mul(s)?;
        if let Some((row, col)) = lhs.first_difference(&rhs) {
            return Ok(IntertwineReport {
                generators_checked: j + 1,
                witness: Some(Witness {
                    generator: j + 1,
                    row,
                    col,
                }),
            });
        }
    }
    Ok(IntertwineReport {
        generators_checked: source_reps.len(),
        witness: None,
    })
}

/// Builds the representation matrices from the descriptors and checks `a`.
pub fn check_intertwiner(a: &IntertwinerMatrix) -> Result<IntertwineReport> {
    check_intertwine(
        &a.matrix,
        &a.source.generator_matrices()?,
        &a.target.generator_matrices()?,
    )
}

/// `J = sum_{j=1}^{n-2} (-1)^(j-1) sigma^-_j sigma^-_{j+1}` on `n - 1` sites.
pub fn j_operator(n: usize) -> Result<SpinOperator> {
    if n == 0 {
        return Err(Error::InvalidLabel(String::from("n must be positive")));
    }
    let mut op = SpinOperator::new(n - 1);
    for j in 1..n.saturating_sub(1) {
        let sign = if j % 2 == 1 { 1 } else { -1 };
        op = op.term(sign, &[(Sigma::Minus, j), (Sigma::Minus, j + 1)]);
    }
    Ok(op)
}

/// `J : E^v -> E^{v-2}`; a `0 x dim E^v` matrix when the target sector is empty.
pub fn j_matrix(n: usize, two_v: i64) -> Result<IntertwinerMatrix> {
    let source = SectorLabel::new(n, two_v)?;
    let src = spin::sector_masks(&source);
    match source.shifted(-4) {
        Some(target) => {
            let m = j_operator(n)?.block(&src, &spin::sector_masks(&target))?;
            IntertwinerMatrix::new(m, ModuleDescriptor::Sector(source), ModuleDescriptor::Sector(target))
        }
        None => IntertwinerMatrix::new(
            SparseMat::zeros(0, src.len()),
            ModuleDescriptor::Sector(source),
            ModuleDescriptor::Zero { n },
        ),
    }
}

/// Source module of `h_v`: `W_n^{2v+1}`, or `V_n^{2v+1}` when no wavy layer fits.
pub fn h_source(n: usize, two_v: i64) -> Result<ModuleLabel> {
    SectorLabel::new(n, two_v)?;
    if two_v < -1 {
        return Err(Error::InvalidLabel(format!("h_v needs v >= -1/2, got two_v={two_v}")));
    }
    let d = (two_v + 1) as usize;
    if d + 2 <= n {
        ModuleLabel::composite(n, d)
    } else {
        ModuleLabel::standard(n, d)
    }
}

/// `prod t_{i,j} |u>` (times `sigma^-_{a-1}` for a wavy state), `t_{i,j} = sigma^-_{i-1} + sigma^-_j`.
pub fn h_image(w: &LinkState) -> SpinVector {
    let n_sites = w.n().saturating_sub(1);
    let mut v = SpinVector::basis(spin::SpinBasisState::all_up(n_sites));
    for (i, j) in w.arcs() {
        // 0-based (i, j) are nodes i+1, j+1
        let t = SpinOperator::new(n_sites)
            .term(1, &[(Sigma::Minus, i)])
            .term(1, &[(Sigma::Minus, j + 1)]);
        v = t.apply(&v);
    }
    if let Some(a) = w.wavy() {
        v = SpinOperator::new(n_sites).term(1, &[(Sigma::Minus, a)]).apply(&v);
    }
    v
}

fn map_from_images(
    states: &[LinkState],
    target: &SectorLabel,
    image: impl Fn(&LinkState) -> SpinVector,
) -> Result<SparseMat<Rational>> {
    let masks = spin::sector_masks(target);
    let mut trip = Vec::new();
    for (col, w) in states.iter().enumerate() {
        for (s, c) in image(w).terms() {
            let row = masks
                .binary_search(&s.bits)
                .map_err(|_| Error::Invariant(format!("image of {w} leaves {target}")))?;
            trip.push((row, col, c.clone()));
        }
    }
    SparseMat::from_triplets(masks.len(), states.len(), trip)
}

/// `h_v : W_n^{2v+1} -> E_{n-1}^v`.
pub fn h_matrix(n: usize, two_v: i64) -> Result<IntertwinerMatrix> {
    let label = h_source(n, two_v)?;
    let target = SectorLabel::new(n, two_v)?;
    let states = link::module_basis(&label)?;
    let m = map_from_images(&states, &target, h_image)?;
    IntertwinerMatrix::new(m, ModuleDescriptor::Link(label), ModuleDescriptor::Sector(target))
}

/// Checks the parameters of `h_{v,k}`: a valid sector `E^v` and `0 <= 2v + 4k + 1 <= n`.
fn check_vk(n: usize, two_v: i64, k: usize) -> Result<usize> {
    SectorLabel::new(n, two_v)?;
    let d = two_v + 4 * k as i64 + 1;
    if d < 0 || d > n as i64 {
        return Err(Error::IndexOutOfRange {
            what: "k (needs 0 <= 2v+4k+1 <= n)",
            index: k as i64,
            min: ((-1 - two_v).max(0) + 3) / 4,
            max: (n as i64 - 1 - two_v).div_euclid(4),
        });
    }
    Ok(d as usize)
}

/// `h_{v,k} = J^k h_{v+2k} : W_n^{2v+4k+1} -> E^v`.
pub fn h_vk_matrix(n: usize, two_v: i64, k: usize) -> Result<IntertwinerMatrix> {
    check_vk(n, two_v, k)?;
    let top = two_v + 4 * k as i64;
    let mut acc = h_matrix(n, top)?;
    for step in 0..k {
        acc = acc.then(&j_matrix(n, top - 4 * step as i64)?)?;
    }
    Ok(acc)
}

/// Restriction of [`h_vk_matrix`] to the standard submodule `V_n^{2v+4k+1}`.
pub fn h_vk_restricted(n: usize, two_v: i64, k: usize) -> Result<IntertwinerMatrix> {
    let d = check_vk(n, two_v, k)?;
    let full = h_vk_matrix(n, two_v, k)?;
    let lower = link::standard_dim(n, d);
    let cols: Vec<usize> = (0..lower).collect();
    IntertwinerMatrix::new(
        full.matrix.select_columns(&cols)?,
        ModuleDescriptor::Link(ModuleLabel::standard(n, d)?),
        full.target,
    )
}

/// `g_d : V_n^{d+2} -> V_n^d` with descriptors.
pub fn g_intertwiner(n: usize, d: usize) -> Result<IntertwinerMatrix> {
    let m = link::g_map(n, d)?;
    IntertwinerMatrix::new(
        m,
        ModuleDescriptor::Link(ModuleLabel::standard(n, d + 2)?),
        ModuleDescriptor::Link(ModuleLabel::standard(n, d)?),
    )
}

/// State with `p` nested arcs on nodes `1..2p` followed by `d` defects.
pub fn nested_state(p: usize, d: usize) -> LinkState {
    let n = 2 * p + d;
    let mut partner: Vec<usize> = (0..n).collect();
    for i in 0..p {
        partner[i] = 2 * p - 1 - i;
        partner[2 * p - 1 - i] = i;
    }
    LinkState::new(partner, None).expect("nested arcs are planar")
}

/// `<bra | h_{v,k}(w*)>` where `w*` is [`nested_state`] and the bra has `p`
/// up, `p + 2k` down and `d - 2k - 1` up spins.
pub fn matrix_element_factorial(n: usize, two_v: i64, k: usize) -> Result<Rational> {
    let d = check_vk(n, two_v, k)?;
    if two_v + 2 * k as i64 <= -1 {
        return Err(Error::InvalidLabel(format!(
            "matrix element needs v + k >= 0, got two_v={two_v}, k={k}"
        )));
    }
    let p = (n - d) / 2;
    let w = nested_state(p, d);
    let mut image = h_image(&w);
    let jop = j_operator(n)?;
    for _ in 0..k {
        image = jop.apply(&image);
    }
    let bra: u64 = ((1u64 << (p + 2 * k)) - 1) << p;
    Ok(image.coeff(bra))
}

/// `k!` as a rational.
pub fn factorial(k: usize) -> Rational {
    Rational::integer((1..=k as i64).product())
}

/// Outcome of evaluating `h_v(g_{2v+3}(w))` on the state with defects on the
/// first `2v+5` nodes and small arcs after them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HgEvaluation {
    pub computed: SpinVector,
    pub expected: SpinVector,
}

impl HgEvaluation {
    pub fn matches(&self) -> bool {
        self.computed == self.expected
    }

    pub fn nonzero(&self) -> bool {
        !self.computed.is_zero()
    }
}

/// Evaluates `h_v(g_{2v+3}(w))` for `n` even, `v >= 1/2`, `2v + 5 <= n` and
/// compares with `(-1)^(v+3/2) (s_{2v+2} - s_{2v+4}) s_{2v+3} s_{2v+5} ... s_{n-2} |u>`,
/// where `s_i` is `sigma^-_i`.
pub fn h_after_g(n: usize, two_v: i64) -> Result<HgEvaluation> {
    if n % 2 != 0 || two_v < 1 || two_v % 2 == 0 || two_v + 5 > n as i64 {
        return Err(Error::InvalidLabel(format!(
            "needs n even, v >= 1/2 and 2v+5 <= n, got n={n}, two_v={two_v}"
        )));
    }
    let defects = (two_v + 5) as usize;
    let mut partner: Vec<usize> = (0..n).collect();
    for a in (defects..n).step_by(2) {
        partner[a] = a + 1;
        partner[a + 1] = a;
    }
    let w = LinkState::new(partner, None)?;
    let image: LinkVector = link::g_image(&w);
    let n_sites = n - 1;
    let mut computed = SpinVector::zero(n_sites);
    for (state, c) in image.terms() {
        for (s, x) in h_image(&state.with_wavy()?).terms() {
            computed.add_term(s.bits, c * x);
        }
    }

    let tail: Vec<(Sigma, usize)> = ((two_v + 3) as usize..=n - 2)
        .step_by(2)
        .map(|i| (Sigma::Minus, i))
        .collect();
    let sign = if ((two_v + 3) / 2) % 2 == 0 { 1 } else { -1 };
    let mut first = alloc::vec![(Sigma::Minus, (two_v + 2) as usize)];
    first.extend_from_slice(&tail);
    let mut second = alloc::vec![(Sigma::Minus, (two_v + 4) as usize)];
    second.extend_from_slice(&tail);
    let op = SpinOperator::new(n_sites).term(sign, &first).term(-sign, &second);
    let expected = op.apply(&SpinVector::basis(spin::SpinBasisState::all_up(n_sites)));
    Ok(HgEvaluation { computed, expected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Scalar;

    fn spins(states: &[&str]) -> SpinVector {
        let mut v = SpinVector::zero(states[0].chars().count());
        for s in states {
            let b: spin::SpinBasisState = s.parse().unwrap();
            v.add_term(b.bits, Rational::one());
        }
        v
    }

    #[test]
    fn worked_h_images() {
        let w: LinkState = "|(())|".parse().unwrap();
        assert_eq!(h_image(&w), spins(&["↓↓↑↑↑", "↓↑↑↓↑", "↑↓↑↑↓", "↑↑↑↓↓"]));
        let wavy: LinkState = "|()||~".parse().unwrap();
        assert_eq!(h_image(&wavy), spins(&["↓↑↑↑↓", "↑↑↓↑↓"]));
    }

    #[test]
    fn j_small() {
        let j = j_matrix(3, 2).unwrap();
        assert_eq!(j.matrix.to_dense(), [[Rational::one()]]);
        let empty = j_matrix(4, -1).unwrap();
        assert_eq!(empty.matrix.shape(), (0, 3));
        assert_eq!(empty.target, ModuleDescriptor::Zero { n: 4 });
        assert!(check_intertwiner(&empty).unwrap().passed());
    }

    #[test]
    fn small_intertwiners() {
        for n in 2..=6 {
            for label in SectorLabel::all(n).unwrap() {
                assert!(check_intertwiner(&j_matrix(n, label.two_v).unwrap()).unwrap().passed());
                if label.two_v >= -1 {
                    let h = h_matrix(n, label.two_v).unwrap();
                    assert!(check_intertwiner(&h).unwrap().passed(), "h n={n} two_v={}", label.two_v);
                }
            }
        }
    }

    #[test]
    fn corrupted_h_is_caught() {
        let h = h_matrix(6, 1).unwrap();
        let (r, c, v) = h.matrix.entries()[3].clone();
        let bad = SparseMat::from_triplets(
            h.matrix.nrows(),
            h.matrix.ncols(),
            h.matrix
                .entries()
                .iter()
                .cloned()
                .chain([(r, c, v.neg().add(&v.neg()))]),
        )
        .unwrap();
        let bad = IntertwinerMatrix::new(bad, h.source, h.target).unwrap();
        let report = check_intertwiner(&bad).unwrap();
        assert!(report.witness.is_some());
    }

    #[test]
    fn factorial_elements() {
        assert_eq!(matrix_element_factorial(5, 0, 0).unwrap(), Rational::one());
        assert_eq!(matrix_element_factorial(5, 0, 1).unwrap(), Rational::one());
        assert_eq!(matrix_element_factorial(9, 0, 2).unwrap(), Rational::integer(2));
        assert!(matrix_element_factorial(8, -1, 0).is_err());
        assert!(matrix_element_factorial(5, 0, 2).is_err());
    }

    #[test]
    fn h_after_g_small() {
        let e = h_after_g(6, 1).unwrap();
        assert!(e.matches(), "{} vs {}", e.computed, e.expected);
        assert!(e.nonzero());
        assert!(h_after_g(6, 3).is_err());
    }
}
