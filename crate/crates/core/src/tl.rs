//! Connectivities of the Temperley-Lieb algebra and their composition.
//!
//! A connectivity on `n` sites pairs the `2n` boundary nodes of a rectangle.
//! Endpoints are labelled around the boundary: bottom nodes `1..=n` from left
//! to right, then top nodes `n+1..=2n` from right to left. With this order a
//! pairing is planar exactly when its chords do not cross on a circle.
//!
//! Products follow the stacking convention `c1 * c2` = `c1` drawn under `c2`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write;

use crate::error::{Error, Result};
use crate::exact::{Rational, Scalar};
use crate::union_find::UnionFind;

/// Largest `n` accepted by [`enumerate_connectivities`].
pub const MAX_ENUMERATION_N: usize = 10;

/// Loop fugacity carried alongside diagram computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaContext {
    pub beta: Rational,
}

impl BetaContext {
    pub fn new(beta: Rational) -> Self {
        BetaContext { beta }
    }

    /// The dimer point.
    pub fn zero() -> Self {
        BetaContext {
            beta: Rational::integer(0),
        }
    }

    /// Weight of a diagram that closed `loops` loops.
    pub fn weight(&self, loops: usize) -> Rational {
        self.beta.pow(loops as u32)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Connectivity {
    n: usize,
    /// `partner[e]` for 0-based endpoint `e` (label `e + 1`).
    partner: Vec<usize>,
}

/// Connectivity with a rational coefficient; coefficient zero is the zero element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledConnectivity {
    pub connectivity: Connectivity,
    pub coefficient: Rational,
}

impl ScaledConnectivity {
    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }
}

impl Connectivity {
    pub fn n(&self) -> usize {
        self.n
    }

    /// 0-based endpoint of the bottom node at 1-based position `i`.
    pub fn bottom(&self, i: usize) -> usize {
        i - 1
    }

    /// 0-based endpoint of the top node at 1-based position `i`.
    pub fn top(&self, i: usize) -> usize {
        2 * self.n - i
    }

    pub fn partner(&self, endpoint: usize) -> usize {
        self.partner[endpoint]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLabel(String::from("connectivities need n >= 1")));
        }
        let partner = (0..2 * n).map(|e| 2 * n - 1 - e).collect();
        Ok(Connectivity { n, partner })
    }

    /// The generator `e_j`, `1 <= j <= n - 1`.
    pub fn generator(n: usize, j: usize) -> Result<Self> {
        if n < 2 || j == 0 || j >= n {
            return Err(Error::IndexOutOfRange {
                what: "generator index",
                index: j as i64,
                min: 1,
                max: n as i64 - 1,
            });
        }
        let mut c = Connectivity::identity(n)?;
        let (b1, b2) = (j - 1, j);
        let (t1, t2) = (c.top(j), c.top(j + 1));
        c.partner[b1] = b2;
        c.partner[b2] = b1;
        c.partner[t1] = t2;
        c.partner[t2] = t1;
        Ok(c)
    }

    /// Builds a connectivity from 1-based label pairs, validating planarity.
    pub fn from_label_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut partner = vec![usize::MAX; 2 * n];
        for &(a, b) in pairs {
            for x in [a, b] {
                if x == 0 || x > 2 * n {
                    return Err(Error::IndexOutOfRange {
                        what: "endpoint label",
                        index: x as i64,
                        min: 1,
                        max: 2 * n as i64,
                    });
                }
            }
            let (a, b) = (a - 1, b - 1);
            if a == b || partner[a] != usize::MAX || partner[b] != usize::MAX {
                return Err(Error::Invariant(format!(
                    "endpoint reused in pair ({}, {})",
                    a + 1,
                    b + 1
                )));
            }
            partner[a] = b;
            partner[b] = a;
        }
        if partner.iter().any(|&p| p == usize::MAX) {
            return Err(Error::Invariant(String::from("pairing does not cover every endpoint")));
        }
        let c = Connectivity { n, partner };
        if !c.is_planar() {
            return Err(Error::Invariant(String::from("pairing is not planar")));
        }
        Ok(c)
    }

    /// Same as [`from_label_pairs`](Self::from_label_pairs) with nodes named by side:
    /// `(false, i)` is bottom node `i`, `(true, i)` top node `i`, both 1-based left to right.
    pub fn from_node_pairs(n: usize, pairs: &[((bool, usize), (bool, usize))]) -> Result<Self> {
        let label = |(is_top, i): (bool, usize)| if is_top { 2 * n + 1 - i } else { i };
        let pairs: Vec<_> = pairs.iter().map(|&(a, b)| (label(a), label(b))).collect();
        Connectivity::from_label_pairs(n, &pairs)
    }

    /// Fixed-point-free involution whose chords do not cross.
    pub fn is_planar(&self) -> bool {
        pairing_is_noncrossing(&self.partner)
    }

    /// Number of strands joining the bottom edge to the top edge.
    pub fn through_lines(&self) -> usize {
        (0..self.n).filter(|&e| self.partner[e] >= self.n).count()
    }

    /// Sorted pair list of 1-based labels.
    pub fn label_pairs(&self) -> Vec<(usize, usize)> {
        (0..2 * self.n)
            .filter(|&e| e < self.partner[e])
            .map(|e| (e + 1, self.partner[e] + 1))
            .collect()
    }

    /// Pair list naming nodes as `b<i>` / `t<i>` with positions left to right.
    pub fn pretty(&self) -> String {
        let name = |e: usize| {
            if e < self.n {
                format!("b{}", e + 1)
            } else {
                format!("t{}", 2 * self.n - e)
            }
        };
        let mut s = format!("n={}; ", self.n);
        for (a, b) in self.label_pairs() {
            let _ = write!(s, "({},{})", name(a - 1), name(b - 1));
        }
        s
    }

    /// Stacks `self` under `other`; returns the product diagram and the number of closed loops.
    pub fn compose(&self, other: &Connectivity) -> Result<(Connectivity, usize)> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let n = self.n;
        let m = 2 * n;
        let mut uf = UnionFind::new(2 * m);
        for e in 0..m {
            uf.union(e, self.partner[e]);
            uf.union(m + e, m + other.partner[e]);
        }
        for p in 1..=n {
            uf.union(self.top(p), m + other.bottom(p));
        }
        // result endpoint e: bottom from self, top from other
        let node_of = |e: usize| if e < n { e } else { m + e };
        let mut root_owner = vec![usize::MAX; 2 * m];
        let mut partner = vec![0; m];
        for e in 0..m {
            let r = uf.find(node_of(e));
            if root_owner[r] == usize::MAX {
                root_owner[r] = e;
            } else {
                let f = root_owner[r];
                partner[e] = f;
                partner[f] = e;
            }
        }
        let loops = uf.component_count() - n;
        Ok((Connectivity { n, partner }, loops))
    }
}

pub(crate) fn pairing_is_noncrossing(partner: &[usize]) -> bool {
    let mut stack: Vec<usize> = Vec::new();
    for (i, &p) in partner.iter().enumerate() {
        if p == i || p >= partner.len() || partner[p] != i {
            return false;
        }
        if p > i {
            stack.push(i);
        } else if stack.pop() != Some(p) {
            return false;
        }
    }
    stack.is_empty()
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}; ", self.n)?;
        for (a, b) in self.label_pairs() {
            write!(f, "({a},{b})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// Left-to-right product of generators `e_{word[0]} e_{word[1]} ...`, weighted by `beta^loops`.
pub fn eval_word(n: usize, word: &[usize], ctx: &BetaContext) -> Result<ScaledConnectivity> {
    let mut acc = Connectivity::identity(n)?;
    let mut loops = 0;
    for &j in word {
        let g = Connectivity::generator(n, j)?;
        let (c, l) = acc.compose(&g)?;
        acc = c;
        loops += l;
    }
    Ok(ScaledConnectivity {
        connectivity: acc,
        coefficient: ctx.weight(loops),
    })
}

/// Total loop count of a generator word, independent of `beta`.
pub fn word_loops(n: usize, word: &[usize]) -> Result<(Connectivity, usize)> {
    let mut acc = Connectivity::identity(n)?;
    let mut loops = 0;
    for &j in word {
        let (c, l) = acc.compose(&Connectivity::generator(n, j)?)?;
        acc = c;
        loops += l;
    }
    Ok((acc, loops))
}

/// All connectivities on `n` sites, sorted by partner array.
pub fn enumerate_connectivities(n: usize) -> Result<Vec<Connectivity>> {
    if n > MAX_ENUMERATION_N {
        return Err(Error::LimitExceeded {
            what: "n",
            value: n,
            limit: MAX_ENUMERATION_N,
        });
    }
    if n == 0 {
        return Err(Error::InvalidLabel(String::from("connectivities need n >= 1")));
    }
    let mut conns: Vec<Connectivity> = noncrossing_matchings(0, 2 * n)
        .into_iter()
        .map(|pairs| {
            let mut partner = vec![0; 2 * n];
            for (a, b) in pairs {
                partner[a] = b;
                partner[b] = a;
            }
            Connectivity { n, partner }
        })
        .collect();
    conns.sort();
    conns.dedup();
    Ok(conns)
}

/// Non-crossing perfect matchings of the points `lo..hi`.
fn noncrossing_matchings(lo: usize, hi: usize) -> Vec<Vec<(usize, usize)>> {
    if lo >= hi {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for k in (lo + 1..hi).step_by(2) {
        let inside = noncrossing_matchings(lo + 1, k);
        let outside = noncrossing_matchings(k + 1, hi);
        for a in &inside {
            for b in &outside {
                let mut m = Vec::with_capacity(1 + a.len() + b.len());
                m.push((lo, k));
                m.extend_from_slice(a);
                m.extend_from_slice(b);
                out.push(m);
            }
        }
    }
    out
}

/// Catalan number `binom(2n, n) / (n + 1)`.
pub fn catalan(n: usize) -> u128 {
    crate::binomial(2 * n as u64, n as u64) / (n as u128 + 1)
}

/// The three families of defining relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `e_j^2 = beta e_j`
    Square,
    /// `e_j e_{j±1} e_j = e_j`
    Adjacent,
    /// `e_j e_k = e_k e_j` for `|j - k| > 1`
    Distant,
}

impl Relation {
    pub const ALL: [Relation; 3] = [Relation::Square, Relation::Adjacent, Relation::Distant];
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Square => "square",
            Relation::Adjacent => "adjacent",
            Relation::Distant => "distant",
        })
    }
}

/// Checks one relation family for generator `j` (1-based) on the matrices
/// `mats[i] = rep(e_{i+1})`. Returns the first partner generator that
/// violates it (`j` itself for [`Relation::Square`]).
pub fn relation_violation(
    mats: &[crate::exact::SparseMat<Rational>],
    beta: &Rational,
    j: usize,
    relation: Relation,
) -> Result<Option<usize>> {
    if j == 0 || j > mats.len() {
        return Err(Error::IndexOutOfRange {
            what: "generator",
            index: j as i64,
            min: 1,
            max: mats.len() as i64,
        });
    }
    let e = &mats[j - 1];
    match relation {
        Relation::Square => Ok((e.mat_mul(e)? != e.scale(beta)).then_some(j)),
        Relation::Adjacent => {
            for k in [j.wrapping_sub(1), j + 1] {
                if k == 0 || k > mats.len() {
                    continue;
                }
                if e.mat_mul(&mats[k - 1])?.mat_mul(e)? != *e {
                    return Ok(Some(k));
                }
            }
            Ok(None)
        }
        Relation::Distant => {
            for k in 1..=mats.len() {
                if k.abs_diff(j) > 1 && e.mat_mul(&mats[k - 1])? != mats[k - 1].mat_mul(e)? {
                    return Ok(Some(k));
                }
            }
            Ok(None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn identity_and_generator_pairings() {
        let id = Connectivity::identity(3).unwrap();
        assert_eq!(id.pretty(), "n=3; (b1,t1)(b2,t2)(b3,t3)");
        let e1 = Connectivity::generator(3, 1).unwrap();
        assert_eq!(e1.pretty(), "n=3; (b1,b2)(b3,t3)(t2,t1)");
        assert_eq!(e1.to_string(), "n=3; (1,2)(3,4)(5,6)");
        assert!(Connectivity::generator(3, 3).is_err());
        assert!(Connectivity::generator(3, 0).is_err());
    }

    #[test]
    fn generator_squares_to_one_loop() {
        let e = Connectivity::generator(2, 1).unwrap();
        let (c, loops) = e.compose(&e).unwrap();
        assert_eq!(c, e);
        assert_eq!(loops, 1);
    }

    #[test]
    fn identity_is_neutral() {
        for c in enumerate_connectivities(4).unwrap() {
            let id = Connectivity::identity(4).unwrap();
            assert_eq!(id.compose(&c).unwrap(), (c.clone(), 0));
            assert_eq!(c.compose(&id).unwrap(), (c.clone(), 0));
        }
    }

    #[test]
    fn braid_like_relation() {
        let ctx = BetaContext::new(Rational::integer(5));
        let r = eval_word(3, &[1, 2, 1], &ctx).unwrap();
        assert_eq!(r.connectivity, Connectivity::generator(3, 1).unwrap());
        assert_eq!(r.coefficient, Rational::integer(1));
    }

    #[test]
    fn empty_word_and_zero_beta() {
        let ctx = BetaContext::zero();
        let r = eval_word(4, &[], &ctx).unwrap();
        assert_eq!(r.connectivity, Connectivity::identity(4).unwrap());
        assert_eq!(r.coefficient, Rational::integer(1));
        assert!(eval_word(4, &[2, 2], &ctx).unwrap().is_zero());
        assert!(eval_word(4, &[4], &ctx).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_connectivities(1).unwrap().len(), 1);
        assert_eq!(enumerate_connectivities(3).unwrap().len(), 5);
        assert_eq!(enumerate_connectivities(7).unwrap().len(), 429);
        assert!(matches!(enumerate_connectivities(11), Err(Error::LimitExceeded { .. })));
    }

    #[test]
    fn rejects_crossing_pairs() {
        // (b1,t1) and (b2,t2) are fine; (b1,t2),(b2,t1) cross
        let bad = Connectivity::from_node_pairs(2, &[((false, 1), (true, 2)), ((false, 2), (true, 1))]);
        assert!(bad.is_err());
        let ok = Connectivity::from_node_pairs(2, &[((false, 1), (true, 1)), ((false, 2), (true, 2))]);
        assert_eq!(ok.unwrap(), Connectivity::identity(2).unwrap());
    }

    #[test]
    fn size_mismatch() {
        let a = Connectivity::identity(2).unwrap();
        let b = Connectivity::identity(3).unwrap();
        assert!(matches!(a.compose(&b), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn relation_violations_are_located() {
        use crate::exact::SparseMat;
        let one = SparseMat::identity(1);
        let zero = SparseMat::zeros(1, 1);
        // e_1 = 1, e_2 = 0 on a one-dimensional space, beta = 1
        let mats = vec![one.clone(), zero.clone(), one];
        let beta = Rational::one();
        assert_eq!(relation_violation(&mats, &beta, 1, Relation::Square).unwrap(), None);
        assert_eq!(
            relation_violation(&mats, &beta, 1, Relation::Adjacent).unwrap(),
            Some(2)
        );
        assert_eq!(relation_violation(&mats, &beta, 1, Relation::Distant).unwrap(), None);
        assert_eq!(relation_violation(&mats, &beta, 2, Relation::Square).unwrap(), None);
        assert!(relation_violation(&mats, &beta, 4, Relation::Square).is_err());
    }
}
