//! Link states, standard and composite modules, the maps `g_d` and the
//! restriction bijection `W_n^{d-2} <-> V_{n+1}^{d-1}`.
//!
//! Text form of a link state: `(` opens a half-arc, `)` closes it, `|` is a
//! defect and `~` the wavy (rightmost) defect of a composite-module state,
//! one character per node from left to right.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::{Rational, Scalar, SparseMat};
use crate::tl::{BetaContext, Connectivity};
use crate::union_find::UnionFind;

/// Link state on `n` nodes. Positions are 0-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkState {
    /// `partner[i] == i` marks a defect, otherwise the other end of the half-arc at `i`.
    partner: Vec<usize>,
    wavy: Option<usize>,
}

impl LinkState {
    /// Validates and wraps a partner array.
    pub fn new(partner: Vec<usize>, wavy: Option<usize>) -> Result<Self> {
        let n = partner.len();
        let mut stack: Vec<usize> = Vec::new();
        for i in 0..n {
            let p = partner[i];
            if p >= n || partner[p] != i {
                return Err(Error::Invariant(format!(
                    "partner array is not an involution at node {}",
                    i + 1
                )));
            }
            if p == i {
                if !stack.is_empty() {
                    return Err(Error::Invariant(format!(
                        "defect at node {} lies under a half-arc",
                        i + 1
                    )));
                }
            } else if p > i {
                stack.push(i);
            } else if stack.pop() != Some(p) {
                return Err(Error::Invariant(format!("half-arcs cross at node {}", i + 1)));
            }
        }
        let state = LinkState { partner, wavy: None };
        if let Some(a) = wavy {
            if state.defects().last() != Some(&a) {
                return Err(Error::Invariant(format!(
                    "wavy marker at node {} is not on the rightmost defect",
                    a + 1
                )));
            }
        }
        Ok(LinkState { wavy, ..state })
    }

    pub fn n(&self) -> usize {
        self.partner.len()
    }

    pub fn partner(&self, i: usize) -> usize {
        self.partner[i]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    pub fn wavy(&self) -> Option<usize> {
        self.wavy
    }

    pub fn is_defect(&self, i: usize) -> bool {
        self.partner[i] == i
    }

    pub fn defects(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.partner[i] == i).collect()
    }

    pub fn defect_count(&self) -> usize {
        (0..self.n()).filter(|&i| self.partner[i] == i).count()
    }

    /// Half-arcs as `(left, right)` 0-based pairs, by ascending left endpoint.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .filter(|&i| self.partner[i] > i)
            .map(|i| (i, self.partner[i]))
            .collect()
    }

    /// Same state with the wavy marker placed on the rightmost defect.
    pub fn with_wavy(&self) -> Result<Self> {
        let last = self
            .defects()
            .last()
            .copied()
            .ok_or_else(|| Error::Invariant(String::from("a wavy marker needs at least one defect")))?;
        Ok(LinkState {
            partner: self.partner.clone(),
            wavy: Some(last),
        })
    }

    pub fn without_wavy(&self) -> Self {
        LinkState {
            partner: self.partner.clone(),
            wavy: None,
        }
    }
}

impl fmt::Display for LinkState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &p) in self.partner.iter().enumerate() {
            let ch = if p == i {
                if self.wavy == Some(i) {
                    '~'
                } else {
                    '|'
                }
            } else if p > i {
                '('
            } else {
                ')'
            };
            fmt::Write::write_char(f, ch)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinkState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinkState({self})")
    }
}

impl FromStr for LinkState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        let mut partner = vec![0; chars.len()];
        let mut stack = Vec::new();
        let mut wavy = None;
        for (i, ch) in chars.iter().enumerate() {
            match ch {
                '(' => stack.push(i),
                ')' => {
                    let j = stack
                        .pop()
                        .ok_or_else(|| Error::Parse(format!("unmatched ')' in {s:?}")))?;
                    partner[i] = j;
                    partner[j] = i;
                }
                '|' | '~' => {
                    partner[i] = i;
                    if *ch == '~' {
                        if wavy.is_some() {
                            return Err(Error::Parse(format!("more than one wavy defect in {s:?}")));
                        }
                        wavy = Some(i);
                    }
                }
                other => return Err(Error::Parse(format!("unexpected character {other:?} in {s:?}"))),
            }
        }
        if !stack.is_empty() {
            return Err(Error::Parse(format!("unmatched '(' in {s:?}")));
        }
        LinkState::new(partner, wavy)
    }
}

/// Standard module `V_n^d` or composite module `W_n^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModuleKind {
    Standard,
    Composite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleLabel {
    pub n: usize,
    pub d: usize,
    pub kind: ModuleKind,
}

impl ModuleLabel {
    pub fn standard(n: usize, d: usize) -> Result<Self> {
        let l = ModuleLabel {
            n,
            d,
            kind: ModuleKind::Standard,
        };
        l.validate()?;
        Ok(l)
    }

    pub fn composite(n: usize, d: usize) -> Result<Self> {
        let l = ModuleLabel {
            n,
            d,
            kind: ModuleKind::Composite,
        };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<()> {
        check_nd(self.n, self.d)?;
        if self.kind == ModuleKind::Composite && self.d + 2 > self.n {
            return Err(Error::InvalidLabel(format!(
                "composite module W_{}^{} needs d <= n - 2",
                self.n, self.d
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            ModuleKind::Standard => standard_dim(self.n, self.d),
            ModuleKind::Composite => standard_dim(self.n, self.d) + standard_dim(self.n, self.d + 2),
        }
    }
}

impl fmt::Display for ModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            ModuleKind::Standard => 'V',
            ModuleKind::Composite => 'W',
        };
        write!(f, "{k}_{}^{}", self.n, self.d)
    }
}

fn check_nd(n: usize, d: usize) -> Result<()> {
    if d > n || (n - d) % 2 != 0 {
        return Err(Error::InvalidLabel(format!(
            "defect count d={d} must satisfy 0 <= d <= n={n} with n - d even"
        )));
    }
    Ok(())
}

/// `binom(n, (n-d)/2) - binom(n, (n-d)/2 - 1)`, zero for invalid `(n, d)`.
pub fn standard_dim(n: usize, d: usize) -> usize {
    if d > n || (n - d) % 2 != 0 {
        return 0;
    }
    let p = ((n - d) / 2) as i64;
    (crate::binomial_signed(n as i64, p) - crate::binomial_signed(n as i64, p - 1)) as usize
}

/// The link states `B_n^d`, sorted by partner array.
pub fn basis(n: usize, d: usize) -> Result<Vec<LinkState>> {
    check_nd(n, d)?;
    let mut out = Vec::new();
    let mut partner = vec![0; n];
    let mut stack = Vec::new();
    build_states(0, d, &mut partner, &mut stack, &mut out);
    out.sort();
    Ok(out)
}

fn build_states(
    pos: usize,
    defects_left: usize,
    partner: &mut Vec<usize>,
    stack: &mut Vec<usize>,
    out: &mut Vec<LinkState>,
) {
    let n = partner.len();
    let remaining = n - pos;
    if remaining == 0 {
        if stack.is_empty() && defects_left == 0 {
            out.push(LinkState {
                partner: partner.clone(),
                wavy: None,
            });
        }
        return;
    }
    // everything left must close open arcs or be defects/new arcs
    if stack.len() + defects_left > remaining {
        return;
    }
    if stack.is_empty() && defects_left > 0 {
        partner[pos] = pos;
        build_states(pos + 1, defects_left - 1, partner, stack, out);
    }
    if let Some(open) = stack.pop() {
        partner[pos] = open;
        partner[open] = pos;
        build_states(pos + 1, defects_left, partner, stack, out);
        stack.push(open);
    }
    stack.push(pos);
    build_states(pos + 1, defects_left, partner, stack, out);
    stack.pop();
}

/// Basis of a module in matrix order: for `W_n^d`, `B_n^d` then the wavy `B_n^{d+2}`.
pub fn module_basis(label: &ModuleLabel) -> Result<Vec<LinkState>> {
    label.validate()?;
    let mut b = basis(label.n, label.d)?;
    if label.kind == ModuleKind::Composite {
        for w in basis(label.n, label.d + 2)? {
            b.push(w.with_wavy()?);
        }
    }
    Ok(b)
}

/// Linear combination of link states.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinkVector {
    terms: BTreeMap<LinkState, Rational>,
}

impl LinkVector {
    pub fn zero() -> Self {
        LinkVector::default()
    }

    pub fn single(state: LinkState, coeff: Rational) -> Self {
        let mut v = LinkVector::zero();
        v.add_term(state, coeff);
        v
    }

    pub fn add_term(&mut self, state: LinkState, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(state);
        match entry {
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let v = o.get().add(&coeff);
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<LinkState, Rational> {
        &self.terms
    }

    pub fn coeff(&self, state: &LinkState) -> Rational {
        self.terms.get(state).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for LinkVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}){s}")?;
        }
        Ok(())
    }
}

/// Outcome of drawing a link state on top of a connectivity.
struct Glued {
    /// Resulting partner array read off the bottom nodes.
    partner: Vec<usize>,
    /// `(result position, source defect position)` for every surviving defect.
    defect_origin: Vec<(usize, usize)>,
    /// Pairs of source defects joined to each other.
    annihilated: Vec<(usize, usize)>,
    loops: usize,
}

fn glue(c: &Connectivity, w: &LinkState) -> Result<Glued> {
    let n = c.n();
    if w.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: w.n(),
        });
    }
    let m = 2 * n;
    let mut uf = UnionFind::new(m);
    for e in 0..m {
        uf.union(e, c.partner(e));
    }
    for (a, b) in w.arcs() {
        uf.union(c.top(a + 1), c.top(b + 1));
    }
    // strand ends: bottom nodes and the feet of defects
    let mut ends: Vec<Vec<End>> = vec![Vec::new(); m];
    for b in 0..n {
        let r = uf.find(c.bottom(b + 1));
        ends[r].push(End::Bottom(b));
    }
    for p in w.defects() {
        let r = uf.find(c.top(p + 1));
        ends[r].push(End::Defect(p));
    }
    let mut partner = vec![usize::MAX; n];
    let mut defect_origin = Vec::new();
    let mut annihilated = Vec::new();
    let mut strands = 0;
    for comp in ends.iter().filter(|e| !e.is_empty()) {
        strands += 1;
        match comp.as_slice() {
            [End::Bottom(a), End::Bottom(b)] => {
                partner[*a] = *b;
                partner[*b] = *a;
            }
            [End::Bottom(a), End::Defect(p)] | [End::Defect(p), End::Bottom(a)] => {
                partner[*a] = *a;
                defect_origin.push((*a, *p));
            }
            [End::Defect(p), End::Defect(q)] => annihilated.push(((*p).min(*q), (*p).max(*q))),
            _ => return Err(Error::Invariant(String::from("malformed strand while gluing"))),
        }
    }
    let loops = uf.component_count() - strands;
    Ok(Glued {
        partner,
        defect_origin,
        annihilated,
        loops,
    })
}

#[derive(Clone, Copy, Debug)]
enum End {
    Bottom(usize),
    Defect(usize),
}

/// Standard action `c w` on a state without wavy marker.
pub fn standard_act(c: &Connectivity, w: &LinkState, ctx: &BetaContext) -> Result<LinkVector> {
    if w.wavy.is_some() {
        return Err(Error::Invariant(String::from(
            "standard action applies to states without a wavy defect",
        )));
    }
    let g = glue(c, w)?;
    if !g.annihilated.is_empty() {
        return Ok(LinkVector::zero());
    }
    Ok(LinkVector::single(
        LinkState {
            partner: g.partner,
            wavy: None,
        },
        ctx.weight(g.loops),
    ))
}

/// Composite action: standard on plain states; on wavy states the wavy defect may be
/// closed against its neighbour, landing in the lower layer.
pub fn composite_act(c: &Connectivity, w: &LinkState, ctx: &BetaContext) -> Result<LinkVector> {
    let Some(a) = w.wavy else {
        return standard_act(c, w, ctx);
    };
    if w.defects().last() != Some(&a) {
        return Err(Error::Invariant(String::from(
            "wavy marker is not on the rightmost defect",
        )));
    }
    let g = glue(c, w)?;
    let weight = ctx.weight(g.loops);
    match g.annihilated.as_slice() {
        [] => {
            let pos = g
                .defect_origin
                .iter()
                .find(|(_, src)| *src == a)
                .map(|(pos, _)| *pos)
                .ok_or_else(|| Error::Invariant(String::from("wavy defect vanished")))?;
            let state = LinkState {
                partner: g.partner,
                wavy: Some(pos),
            };
            debug_assert_eq!(state.defects().last(), Some(&pos));
            Ok(LinkVector::single(state, weight))
        }
        [(p, q)] if *p == a || *q == a => Ok(LinkVector::single(
            LinkState {
                partner: g.partner,
                wavy: None,
            },
            weight,
        )),
        _ => Ok(LinkVector::zero()),
    }
}

/// Applies the module action of `label` to a basis state.
pub fn module_act(label: &ModuleLabel, c: &Connectivity, w: &LinkState, ctx: &BetaContext) -> Result<LinkVector> {
    match label.kind {
        ModuleKind::Standard => standard_act(c, w, ctx),
        ModuleKind::Composite => composite_act(c, w, ctx),
    }
}

fn index_of(states: &[LinkState]) -> BTreeMap<&LinkState, usize> {
    states.iter().enumerate().map(|(i, s)| (s, i)).collect()
}

/// Matrix of an arbitrary connectivity in the basis order of [`module_basis`].
pub fn rep_matrix_of(label: &ModuleLabel, c: &Connectivity, ctx: &BetaContext) -> Result<SparseMat<Rational>> {
    if c.n() != label.n {
        return Err(Error::SizeMismatch {
            expected: label.n,
            found: c.n(),
        });
    }
    let states = module_basis(label)?;
    let index = index_of(&states);
    let mut trip = Vec::new();
    for (col, w) in states.iter().enumerate() {
        for (s, coeff) in module_act(label, c, w, ctx)?.terms {
            let row = *index
                .get(&s)
                .ok_or_else(|| Error::Invariant(format!("image {s} lies outside {label}")))?;
            trip.push((row, col, coeff));
        }
    }
    SparseMat::from_triplets(states.len(), states.len(), trip)
}

/// Matrix of the generator `e_j` on the module `label`.
pub fn rep_matrix(label: &ModuleLabel, j: usize, ctx: &BetaContext) -> Result<SparseMat<Rational>> {
    label.validate()?;
    let c = Connectivity::generator(label.n, j)?;
    rep_matrix_of(label, &c, ctx)
}

/// All generator matrices `e_1 .. e_{n-1}` of a module.
pub fn rep_matrices(label: &ModuleLabel, ctx: &BetaContext) -> Result<Vec<SparseMat<Rational>>> {
    (1..label.n).map(|j| rep_matrix(label, j, ctx)).collect()
}

fn state_from_arcs(n: usize, arcs: &[(usize, usize)]) -> LinkState {
    let mut partner: Vec<usize> = (0..n).collect();
    for &(a, b) in arcs {
        partner[a] = b;
        partner[b] = a;
    }
    LinkState { partner, wavy: None }
}

fn check_even(n: usize) -> Result<()> {
    if n % 2 != 0 || n == 0 {
        return Err(Error::InvalidLabel(format!("n={n} must be even and positive")));
    }
    Ok(())
}

/// Alternating sum of the states with a single cap on nodes `(k, k+1)`, `k` odd.
pub fn y_state(n: usize) -> Result<LinkVector> {
    check_even(n)?;
    let mut v = LinkVector::zero();
    for k in (0..n).step_by(2) {
        let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
        v.add_term(state_from_arcs(n, &[(k, k + 1)]), Rational::integer(sign));
    }
    Ok(v)
}

/// Image of a state of `B_n^{d+2}` under `g_d`: consecutive defect pairs
/// `(1st, 2nd), (3rd, 4th), ...` capped with alternating signs.
pub fn g_image(w: &LinkState) -> LinkVector {
    let defects = w.defects();
    let arcs = w.arcs();
    let mut v = LinkVector::zero();
    for (t, pair) in defects.chunks_exact(2).enumerate() {
        let mut all = arcs.clone();
        all.push((pair[0], pair[1]));
        let sign = if t % 2 == 0 { 1 } else { -1 };
        v.add_term(state_from_arcs(w.n(), &all), Rational::integer(sign));
    }
    v
}

/// The intertwiner `g_d : V_n^{d+2} -> V_n^d` (n even, d even, `0 <= d <= n - 2`).
pub fn g_map(n: usize, d: usize) -> Result<SparseMat<Rational>> {
    check_even(n)?;
    if d % 2 != 0 || d + 2 > n {
        return Err(Error::InvalidLabel(format!(
            "g_d needs even d with 0 <= d <= n - 2, got d={d}, n={n}"
        )));
    }
    let source = basis(n, d + 2)?;
    let target = basis(n, d)?;
    let index = index_of(&target);
    let mut trip = Vec::new();
    for (col, w) in source.iter().enumerate() {
        for (s, c) in g_image(w).terms {
            trip.push((index[&s], col, c));
        }
    }
    SparseMat::from_triplets(target.len(), source.len(), trip)
}

/// Image in `W_n^{d-2}` of a state of `B_{n+1}^{d-1}` under restriction to `TL_n`.
pub fn restrict_state(w: &LinkState) -> Result<LinkState> {
    let n1 = w.n();
    if n1 < 2 || w.wavy.is_some() {
        return Err(Error::Invariant(String::from(
            "restriction expects a plain state on n+1 >= 2 nodes",
        )));
    }
    let last = n1 - 1;
    let p = w.partner[last];
    let mut partner: Vec<usize> = w.partner[..last].to_vec();
    if p == last {
        Ok(LinkState { partner, wavy: None })
    } else {
        partner[p] = p;
        Ok(LinkState { partner, wavy: Some(p) })
    }
}

/// Inverse of [`restrict_state`].
pub fn extend_state(w: &LinkState) -> LinkState {
    let n = w.n();
    let mut partner = w.partner.clone();
    match w.wavy {
        None => partner.push(n),
        Some(a) => {
            partner[a] = n;
            partner.push(a);
        }
    }
    LinkState { partner, wavy: None }
}

/// Bijection between the bases of `W_n^{d-2}` and `V_{n+1}^{d-1}`.
#[derive(Clone, Debug)]
pub struct RestrictionIso {
    pub n: usize,
    pub d: usize,
    /// `pairs[i] = (index in W_n^{d-2} basis, index in V_{n+1}^{d-1} basis)`.
    pub pairs: Vec<(usize, usize)>,
}

impl RestrictionIso {
    /// Permutation matrix sending `V_{n+1}^{d-1}` coordinates to `W_n^{d-2}` coordinates.
    pub fn matrix(&self) -> SparseMat<Rational> {
        let dim = self.pairs.len();
        SparseMat::from_triplets(dim, dim, self.pairs.iter().map(|&(w, v)| (w, v, Rational::one())))
            .expect("permutation indices are in range")
    }
}

/// `W_n^{d-2} ~ V_{n+1}^{d-1}` restricted to `TL_n`; requires `2 <= d <= n`, `n - d` even.
pub fn restriction_iso(n: usize, d: usize) -> Result<RestrictionIso> {
    if d < 2 || d > n || (n - d) % 2 != 0 {
        return Err(Error::InvalidLabel(format!(
            "restriction needs 2 <= d <= n with n - d even, got n={n}, d={d}"
        )));
    }
    let w_label = ModuleLabel::composite(n, d - 2)?;
    let w_basis = module_basis(&w_label)?;
    let v_basis = basis(n + 1, d - 1)?;
    let w_index = index_of(&w_basis);
    let mut pairs = Vec::with_capacity(v_basis.len());
    for (vi, v) in v_basis.iter().enumerate() {
        let r = restrict_state(v)?;
        let wi = *w_index
            .get(&r)
            .ok_or_else(|| Error::Invariant(format!("restricted state {r} not in {w_label}")))?;
        pairs.push((wi, vi));
    }
    if pairs.len() != w_basis.len() {
        return Err(Error::InternalMismatch(format!(
            "basis sizes differ: {} vs {}",
            w_basis.len(),
            pairs.len()
        )));
    }
    Ok(RestrictionIso { n, d, pairs })
}
