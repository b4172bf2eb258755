//! Dimension predictions for irreducible and principal modules at `beta = 0`
//! and rank certificates for the decomposition of the spin sectors.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::exact::{rank, rank_kernel, Rational, SparseMat};
use crate::intertwiner::{h_matrix, h_vk_restricted, j_matrix};
use crate::link::standard_dim;
use crate::spin::{self, contragredient_check, SectorLabel};

/// Default upper bounds on `n` for theorem certificates.
pub const DEFAULT_ODD_BOUND: usize = 11;
pub const DEFAULT_EVEN_BOUND: usize = 10;

/// Label attached to every certificate: facts are ranks, not module isomorphisms.
pub const EVIDENCE_LEVEL: &str = "rank certificate";

fn binom_i(n: i64, k: i64) -> i64 {
    crate::binomial_signed(n, k) as i64
}

/// Dimension of the irreducible `I_n^d` at `beta = 0`.
///
/// Odd `n`: equals `dim V_n^d`. Even `n`: `binom(n-1, (n-d)/2) - binom(n-1, (n-d)/2 - 1)`
/// for `d = 2, 4, ..., n`.
pub fn irr_dim(n: usize, d: usize) -> Result<usize> {
    if d > n || (n - d) % 2 != 0 || n == 0 {
        return Err(Error::InvalidLabel(format!(
            "no irreducible I_{n}^{d}: need d <= n, n - d even"
        )));
    }
    if n % 2 == 1 {
        return Ok(standard_dim(n, d));
    }
    if d == 0 {
        return Err(Error::InvalidLabel(format!(
            "no irreducible I_{n}^0 at beta = 0 for even n"
        )));
    }
    let p = ((n - d) / 2) as i64;
    Ok((binom_i(n as i64 - 1, p) - binom_i(n as i64 - 1, p - 1)) as usize)
}

/// Composition factor dimensions of the principal module `P_n^d`, `n` even:
/// `I^{d-2}` (if `d > 2`), `I^d` twice, `I^{d+2}` (if `d < n`).
pub fn principal_dims(n: usize, d: usize) -> Result<Vec<usize>> {
    if n % 2 != 0 || d % 2 != 0 || d < 2 || d > n {
        return Err(Error::InvalidLabel(format!(
            "principal modules need n, d even with 2 <= d <= n, got n={n}, d={d}"
        )));
    }
    let mut out = Vec::new();
    if d > 2 {
        out.push(irr_dim(n, d - 2)?);
    }
    out.push(irr_dim(n, d)?);
    out.push(irr_dim(n, d)?);
    if d < n {
        out.push(irr_dim(n, d + 2)?);
    }
    Ok(out)
}

/// `dim E_{n-1}^v`.
pub fn sector_dim(n: usize, two_v: i64) -> Result<usize> {
    Ok(SectorLabel::new(n, two_v)?.dim())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumRule {
    pub n: usize,
    pub two_v: i64,
    pub sector_dim: usize,
    /// `(d, dim V_n^d)` for `d = 2|v| + 1 + 4i`.
    pub terms: Vec<(usize, usize)>,
}

impl SumRule {
    pub fn total(&self) -> usize {
        self.terms.iter().map(|t| t.1).sum()
    }

    pub fn holds(&self) -> bool {
        self.total() == self.sector_dim
    }
}

impl fmt::Display for SumRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", self.sector_dim)?;
        for (i, (_, dim)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{dim}")?;
        }
        Ok(())
    }
}

/// `dim E_{n-1}^v = sum_i dim V_n^{2|v|+4i+1}`.
pub fn sum_rule_check(n: usize, two_v: i64) -> Result<SumRule> {
    let label = SectorLabel::new(n, two_v)?;
    let mut terms = Vec::new();
    let mut d = two_v.unsigned_abs() as usize + 1;
    while d <= n {
        terms.push((d, standard_dim(n, d)));
        d += 4;
    }
    Ok(SumRule {
        n,
        two_v,
        sector_dim: label.dim(),
        terms,
    })
}

/// One exact integer comparison inside a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact {
    pub name: String,
    pub predicted: usize,
    pub computed: usize,
}

impl Fact {
    pub fn new(name: impl Into<String>, predicted: usize, computed: usize) -> Self {
        Fact {
            name: name.into(),
            predicted,
            computed,
        }
    }

    pub fn holds(&self) -> bool {
        self.predicted == self.computed
    }
}

/// Rank facts for one sector `E_{n-1}^v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub n: usize,
    pub two_v: i64,
    pub facts: Vec<Fact>,
}

impl RankCertificate {
    pub fn passed(&self) -> bool {
        self.facts.iter().all(Fact::holds)
    }

    /// First failing fact, if any.
    pub fn witness(&self) -> Option<&Fact> {
        self.facts.iter().find(|f| !f.holds())
    }

    fn push(&mut self, name: impl Into<String>, predicted: usize, computed: usize) {
        self.facts.push(Fact::new(name, predicted, computed));
    }
}

/// Negative sector: its dimension mirrors `E^{-v}` and `tau_v` is the
/// spin-reversed transpose of `tau_{-v}`.
fn mirrored_certificate(n: usize, two_v: i64) -> Result<RankCertificate> {
    let mut cert = RankCertificate {
        n,
        two_v,
        facts: Vec::new(),
    };
    cert.push("dim E^v = dim E^-v", sector_dim(n, -two_v)?, sector_dim(n, two_v)?);
    let outcome = contragredient_check(n, -two_v)?;
    cert.push(
        "generators similar to transposed mirror",
        n - 1,
        if outcome.passed() {
            outcome.checked
        } else {
            outcome.checked - 1
        },
    );
    Ok(cert)
}

fn check_bound(n: usize, bound: usize) -> Result<()> {
    if n > bound {
        return Err(Error::LimitExceeded {
            what: "n for theorem certificates",
            value: n,
            limit: bound,
        });
    }
    Ok(())
}

/// Certificates for odd `n`: every `E^v` with `v >= 0` is the direct sum of the
/// images of `h~_{v,k}`, each isomorphic to `V_n^{2v+4k+1}`.
pub fn verify_theorem_odd(n: usize) -> Result<Vec<RankCertificate>> {
    verify_theorem_odd_bounded(n, DEFAULT_ODD_BOUND)
}

pub fn verify_theorem_odd_bounded(n: usize, bound: usize) -> Result<Vec<RankCertificate>> {
    if n % 2 == 0 {
        return Err(Error::InvalidLabel(format!("verify_theorem_odd needs odd n, got {n}")));
    }
    check_bound(n, bound)?;
    let mut out = Vec::new();
    for label in SectorLabel::all(n)? {
        let two_v = label.two_v;
        if two_v < 0 {
            out.push(mirrored_certificate(n, two_v)?);
            continue;
        }
        let mut cert = RankCertificate {
            n,
            two_v,
            facts: Vec::new(),
        };
        let mut images = Vec::new();
        let mut total = 0;
        let mut k = 0;
        while two_v + 4 * k as i64 + 1 <= n as i64 {
            let d = (two_v + 4 * k as i64 + 1) as usize;
            let h = h_vk_restricted(n, two_v, k)?;
            let r = rank(&h.matrix);
            cert.push(format!("rank h~_(v,{k}) = dim V^{d}"), standard_dim(n, d), r);
            total += r;
            images.push(h.matrix);
            k += 1;
        }
        let stacked = SparseMat::stack_columns(&images)?;
        cert.push("rank of stacked images = sum of ranks", total, rank(&stacked));
        cert.push("rank of stacked images = dim E^v", label.dim(), rank(&stacked));
        out.push(cert);
    }
    Ok(out)
}

/// `rank [img | tau(e_1) img | ... | tau(e_{n-1}) img]`, equal to `rank img`
/// exactly when the column span is invariant.
fn invariant_span_rank(img: &SparseMat<Rational>, label: &SectorLabel) -> Result<usize> {
    let mut blocks = alloc::vec![img.clone()];
    for t in spin::sector_taus(label)? {
        blocks.push(t.mat_mul(img)?);
    }
    Ok(rank(&SparseMat::stack_columns(&blocks)?))
}

fn irr_sum(n: usize, from: usize) -> Result<usize> {
    let mut s = 0;
    let mut d = from;
    while d <= n {
        s += irr_dim(n, d)?;
        d += 2;
    }
    Ok(s)
}

/// Certificates for even `n`.
///
/// Bulk sectors `1/2 <= v <= (n-5)/2`: `J: E^{v+2} -> E^v` injective,
/// `dim ker h_v = dim I^{2v+3}`, `rank h~_v = dim I^{2v+1}`, `im h_v + im J = E^v`
/// with intersection of dimension `dim I^{2v+5}`, both images invariant.
/// Edge sectors `v = (n-3)/2, (n-1)/2` and negative `v` are handled separately.
pub fn verify_theorem_even(n: usize) -> Result<Vec<RankCertificate>> {
    verify_theorem_even_bounded(n, DEFAULT_EVEN_BOUND)
}

pub fn verify_theorem_even_bounded(n: usize, bound: usize) -> Result<Vec<RankCertificate>> {
    if n % 2 != 0 || n < 2 {
        return Err(Error::InvalidLabel(format!(
            "verify_theorem_even needs even n >= 2, got {n}"
        )));
    }
    check_bound(n, bound)?;
    let top = n as i64 - 1;
    let mut out = Vec::new();
    for label in SectorLabel::all(n)? {
        let two_v = label.two_v;
        if two_v < 0 {
            out.push(mirrored_certificate(n, two_v)?);
            continue;
        }
        let mut cert = RankCertificate {
            n,
            two_v,
            facts: Vec::new(),
        };
        let dim_e = label.dim();
        let d = (two_v + 1) as usize;
        cert.push("sum of dim I^d over d >= 2v+1", dim_e, irr_sum(n, d)?);
        if two_v == top {
            cert.push("dim E^v", 1, dim_e);
            cert.push("rank h_v", 1, rank(&h_matrix(n, two_v)?.matrix));
        } else if two_v == top - 2 {
            let h = h_matrix(n, two_v)?;
            let k = rank_kernel(&h.matrix);
            cert.push("dim ker h_v", 1, k.kernel_dim());
            cert.push("rank h_v = dim E^v", dim_e, k.rank);
            cert.push(
                format!("rank h~_v = dim I^{d}"),
                irr_dim(n, d)?,
                rank(&h_vk_restricted(n, two_v, 0)?.matrix),
            );
        } else {
            let h = h_matrix(n, two_v)?;
            let hk = rank_kernel(&h.matrix);
            let j = j_matrix(n, two_v + 4)?;
            let rank_j = rank(&j.matrix);
            let span = rank(&SparseMat::stack_columns(&[h.matrix.clone(), j.matrix.clone()])?);
            cert.push("rank J on E^(v+2) = dim E^(v+2)", sector_dim(n, two_v + 4)?, rank_j);
            cert.push(
                format!("dim ker h_v = dim I^{}", d + 2),
                irr_dim(n, d + 2)?,
                hk.kernel_dim(),
            );
            cert.push(
                format!("rank h~_v = dim I^{d}"),
                irr_dim(n, d)?,
                rank(&h_vk_restricted(n, two_v, 0)?.matrix),
            );
            cert.push("rank [h_v | J] = dim E^v", dim_e, span);
            cert.push(
                format!("dim (im h_v & im J) = dim I^{}", d + 4),
                irr_dim(n, d + 4)?,
                hk.rank + rank_j - span,
            );
            cert.push("im h_v invariant", hk.rank, invariant_span_rank(&h.matrix, &label)?);
            cert.push("im J invariant", rank_j, invariant_span_rank(&j.matrix, &label)?);
            cert.push(
                "dim E^v - rank h_v = sum dim I^d, d >= 2v+7",
                irr_sum(n, d + 6)?,
                dim_e - hk.rank,
            );
        }
        out.push(cert);
    }
    Ok(out)
}

/// Dispatches on the parity of `n`.
pub fn verify_theorem(n: usize, bound: usize) -> Result<Vec<RankCertificate>> {
    if n % 2 == 1 {
        verify_theorem_odd_bounded(n, bound)
    } else {
        verify_theorem_even_bounded(n, bound)
    }
}

/// Dimensions of every sector `E_{n-1}^v` with `v >= 0`, ascending in `v`.
pub fn sector_dims_nonnegative(n: usize) -> Result<Vec<(i64, usize)>> {
    Ok(SectorLabel::all(n)?
        .into_iter()
        .filter(|l| l.two_v >= 0)
        .map(|l| (l.two_v, l.dim()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn irreducible_dims() {
        assert_eq!(irr_dim(6, 4).unwrap(), 4);
        assert_eq!(irr_dim(6, 2).unwrap(), 5);
        assert_eq!(irr_dim(6, 6).unwrap(), 1);
        assert_eq!(irr_dim(7, 3).unwrap(), 14);
        assert!(irr_dim(6, 0).is_err());
        assert!(irr_dim(6, 3).is_err());
    }

    #[test]
    fn principal_sums() {
        for n in (2..=12).step_by(2) {
            for d in (2..=n).step_by(2) {
                let total: usize = principal_dims(n, d).unwrap().iter().sum();
                assert_eq!(total, standard_dim(n, d - 2) + standard_dim(n, d), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn quoted_sum_rules() {
        let r = sum_rule_check(8, 1).unwrap();
        assert_eq!(r.terms, [(2, 28), (6, 7)]);
        assert!(r.holds());
        let r = sum_rule_check(9, 0).unwrap();
        assert_eq!(r.terms.iter().map(|t| t.1).collect::<Vec<_>>(), [42, 27, 1]);
        assert_eq!(r.to_string(), "70 = 42+27+1");
        assert!(sum_rule_check(9, 8).unwrap().holds());
    }

    #[test]
    fn small_certificates() {
        for n in [3, 5] {
            for c in verify_theorem_odd(n).unwrap() {
                assert!(c.passed(), "{c:?}");
            }
        }
        for n in [2, 4, 6] {
            for c in verify_theorem_even(n).unwrap() {
                assert!(c.passed(), "{c:?}");
            }
        }
    }
}
