//! The `verify` suites. Each returns a report with one check per verified
//! identity; guard violations come back as errors.

use rayon::prelude::*;
use serde_json::json;
use tldimer_core::dimer::{
    self, build_t, build_t2, doubled_variation_index, enumerate_coverings, orbit_check, partition_trace_routes,
    row_map_check, sector_split, t2_tau_bar_form, LatticeShape, MAX_COVERING_SITES, MAX_TRANSFER_N,
};
use tldimer_core::exact::{anticommutator, commutator, rank, Rational, SparseMat};
use tldimer_core::intertwiner::{
    check_intertwiner, factorial, g_intertwiner, h_after_g, h_matrix, h_vk_matrix, h_vk_restricted, j_matrix,
    matrix_element_factorial, IntertwinerMatrix,
};
use tldimer_core::link::{self, ModuleLabel};
use tldimer_core::spin::{self, contragredient_check, SectorLabel};
use tldimer_core::structure::{self, irr_dim, EVIDENCE_LEVEL};
use tldimer_core::tl::{self, relation_violation, BetaContext, Connectivity, Relation};
use tldimer_core::{Error, Result};

use crate::report::{Check, Report};

pub const MAX_TL_N: usize = 10;
pub const MAX_TAU_N: usize = 14;
pub const MAX_INTERTWINER_N: usize = 12;
/// Widest row for the polynomial transfer-matrix identities.
pub const MAX_ALGEBRA_N: usize = 8;
/// Widest row for the row map check.
pub const MAX_ROW_MAP_N: usize = 8;

pub(crate) fn guard(what: &'static str, value: usize, min: usize, limit: usize) -> Result<()> {
    if value < min {
        return Err(Error::IndexOutOfRange {
            what,
            index: value as i64,
            min: min as i64,
            max: limit as i64,
        });
    }
    if value > limit {
        return Err(Error::LimitExceeded { what, value, limit });
    }
    Ok(())
}

/// `v` written as an integer or a half-integer.
pub fn half(two_v: i64) -> String {
    if two_v % 2 == 0 {
        (two_v / 2).to_string()
    } else {
        format!("{two_v}/2")
    }
}

pub fn listed_betas() -> Vec<Rational> {
    vec![
        Rational::integer(0),
        Rational::integer(1),
        Rational::integer(2),
        Rational::new(-3, 2),
    ]
}

/// Every standard and composite module on `n` sites.
pub fn module_labels(n: usize) -> Vec<ModuleLabel> {
    let mut out = Vec::new();
    for d in (n % 2..=n).step_by(2) {
        out.extend(ModuleLabel::standard(n, d));
        if d + 2 <= n {
            out.extend(ModuleLabel::composite(n, d));
        }
    }
    out
}

/// One check per relation family over all generators.
pub fn relation_checks(prefix: &str, mats: &[SparseMat<Rational>], beta: &Rational) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for family in Relation::ALL {
        let mut bad = None;
        for j in 1..=mats.len() {
            if let Some(k) = relation_violation(mats, beta, j, family)? {
                bad = Some(format!("e_{j} with e_{k}"));
                break;
            }
        }
        out.push(Check::holds(format!("{prefix} {family}"), bad.is_none(), bad));
    }
    Ok(out)
}

fn collect<T>(parts: Vec<Result<Vec<T>>>) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Defining relations in every standard and composite module at the listed
/// loop weights, the connectivity count, and the restriction isomorphisms.
pub fn tl_relations(n: usize) -> Result<Report> {
    guard("n", n, 2, MAX_TL_N)?;
    let mut report = Report::new("verify tl-relations").param("n", n);
    let jobs: Vec<(Rational, ModuleLabel)> = listed_betas()
        .into_iter()
        .flat_map(|b| module_labels(n).into_iter().map(move |l| (b.clone(), l)))
        .collect();
    let parts: Vec<Result<Vec<Check>>> = jobs
        .par_iter()
        .map(|(beta, label)| {
            let mats = link::rep_matrices(label, &BetaContext::new(beta.clone()))?;
            relation_checks(&format!("beta={beta} {label}"), &mats, beta)
        })
        .collect();
    report.extend(collect(parts)?);

    let count = tl::enumerate_connectivities(n)?.len();
    report.push(Check::compare(
        "connectivities = Catalan number",
        tl::catalan(n) as u64,
        count as u64,
    ));

    let ctx = BetaContext::zero();
    for d in (2..=n).filter(|d| (n - d) % 2 == 0) {
        let p = link::restriction_iso(n, d)?.matrix();
        let w = ModuleLabel::composite(n, d - 2)?;
        let big = ModuleLabel::standard(n + 1, d - 1)?;
        let mut bad = None;
        for j in 1..n {
            let lhs = link::rep_matrix(&w, j, &ctx)?.mat_mul(&p)?;
            let rhs = p.mat_mul(&link::rep_matrix(&big, j, &ctx)?)?;
            if lhs != rhs {
                bad = Some(format!("e_{j}"));
                break;
            }
        }
        report.push(Check::holds(
            format!("restriction {w} ~ {big} equivariant"),
            bad.is_none(),
            bad,
        ));
    }
    Ok(report)
}

/// The spin-chain representations on the full space and per sector.
pub fn tau(n: usize) -> Result<Report> {
    guard("n", n, 2, MAX_TAU_N)?;
    let mut report = Report::new("verify tau").param("n", n);
    let zero = Rational::integer(0);
    let tau: Vec<_> = (1..n)
        .into_par_iter()
        .map(|j| spin::tau_generator(n, j))
        .collect::<Result<_>>()?;
    let bar: Vec<_> = (1..n)
        .into_par_iter()
        .map(|j| spin::tau_bar_generator(n, j))
        .collect::<Result<_>>()?;
    for (name, mats) in [("tau", &tau), ("tau_bar", &bar)] {
        let parts: Vec<Result<Vec<Check>>> = Relation::ALL
            .iter()
            .flat_map(|&f| (1..n).map(move |j| (f, j)))
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&(family, j)| {
                let bad = relation_violation(mats, &zero, j, family)?;
                Ok(vec![Check::holds(
                    format!("{name} {family} e_{j}"),
                    bad.is_none(),
                    bad.map(|k| format!("with e_{k}")),
                )])
            })
            .collect();
        report.extend(collect(parts)?);
    }

    let u = spin::u_matrix(n)?;
    let mut bad = None;
    for j in 1..n {
        if u.mat_mul(&tau[j - 1])?.mat_mul(&u)? != bar[j - 1] {
            bad = Some(format!("e_{j}"));
            break;
        }
    }
    report.push(Check::holds("U tau U = tau_bar", bad.is_none(), bad));

    let sz = spin::sz_matrix(n)?;
    let h = spin::hamiltonian(n)?;
    report.push(Check::holds("hamiltonian symmetric", h.is_symmetric(), None));
    report.push(Check::holds("[H, S^z] = 0", commutator(&h, &sz)?.is_zero(), None));
    let mut bad = None;
    for (j, t) in tau.iter().enumerate() {
        if !commutator(t, &sz)?.is_zero() {
            bad = Some(format!("e_{}", j + 1));
            break;
        }
    }
    report.push(Check::holds("generators commute with S^z", bad.is_none(), bad));

    let parts: Vec<Result<Vec<Check>>> = SectorLabel::all(n)?
        .par_iter()
        .map(|label| {
            let mats = spin::sector_taus(label)?;
            let mut checks = relation_checks(&label.to_string(), &mats, &zero)?;
            let c = contragredient_check(n, label.two_v)?;
            checks.push(Check::holds(
                format!("{label} contragredient to {}", label.negated()),
                c.passed(),
                c.failure.clone(),
            ));
            Ok(checks)
        })
        .collect();
    report.extend(collect(parts)?);
    Ok(report)
}

/// Partition function routes for one shape and the transfer-matrix algebra
/// for its row width.
pub fn dimer(rows: usize, cols: usize) -> Result<Report> {
    let shape = LatticeShape::new(rows, cols)?;
    guard("cols", cols, 1, MAX_TRANSFER_N)?;
    guard("rows*cols", rows * cols, 1, MAX_COVERING_SITES)?;
    let mut report = Report::new("verify dimer").param("rows", rows).param("cols", cols);

    let (routes, oracle) = rayon::join(
        || partition_trace_routes(shape, MAX_TRANSFER_N),
        || enumerate_coverings(shape),
    );
    let oracle = oracle?;
    match routes {
        Ok(r) => {
            report.push(Check::holds("sector traces sum to full trace", true, None));
            report.push(Check::compare(
                "trace = enumeration",
                oracle.coeff_strings(),
                r.full.coeff_strings(),
            ));
            report.set_data("partition_function", r.full.coeff_strings());
            report.set_data("coverings", dimer::covering_count(&r.full).to_string());
            report.line(format!("Z = {}", r.full));
        }
        Err(Error::InternalMismatch(msg)) => {
            report.push(Check::holds("sector traces sum to full trace", false, Some(msg)));
        }
        Err(e) => return Err(e),
    }
    report.extend(transfer_algebra(cols)?);
    Ok(report)
}

/// Identities of `T` and `T^2` at row width `n`, the sector orbits and the row map.
pub fn transfer_algebra(n: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    if n <= MAX_ALGEBRA_N {
        let t = build_t(n)?;
        let t2 = build_t2(n)?;
        let v = doubled_variation_index(n)?;
        out.push(Check::holds(format!("T symmetric (N={n})"), t.is_symmetric(), None));
        let tau_form = t2_tau_bar_form(n)?;
        let diff = t2.first_difference(&tau_form).map(|(r, c)| format!("entry ({r}, {c})"));
        out.push(Check::holds(
            format!("T^2 = tau_bar product form (N={n})"),
            diff.is_none(),
            diff,
        ));
        out.push(Check::holds(
            format!("{{V, T}} = 0 (N={n})"),
            anticommutator(&v, &t)?.is_zero(),
            None,
        ));
        out.push(Check::holds(
            format!("[V, T^2] = 0 (N={n})"),
            commutator(&v, &t2)?.is_zero(),
            None,
        ));
    } else {
        out.push(Check::skipped(
            format!("transfer algebra (N={n})"),
            format!("row width above {MAX_ALGEBRA_N}"),
        ));
    }
    let orbits: Vec<Result<Check>> = sector_split(n)?
        .par_iter()
        .map(|(two_v, _)| {
            Ok(Check::holds(
                format!("sector v={} is one orbit (N={n})", half(*two_v)),
                orbit_check(n, *two_v)?,
                None,
            ))
        })
        .collect();
    for c in orbits {
        out.push(c?);
    }
    if n <= MAX_ROW_MAP_N {
        let r = row_map_check(n)?;
        out.push(Check::holds(
            format!("row map (N={n})"),
            r.passed(),
            Some(format!(
                "edge injective {}, transfer agrees {}",
                r.edge_injective, r.transfer_agrees
            )),
        ));
    } else {
        out.push(Check::skipped(
            format!("row map (N={n})"),
            format!("row width above {MAX_ROW_MAP_N}"),
        ));
    }
    Ok(out)
}

fn intertwine_check(name: String, a: &IntertwinerMatrix) -> Result<Check> {
    let r = check_intertwiner(a)?;
    Ok(Check::holds(name, r.passed(), r.witness.map(|w| w.to_string())))
}

/// Checks tied to one sector `E^v`: `J`, `h_v`, every `h_{v,k}` and its
/// restriction, the `k!` matrix elements, and the even-`n` special cases.
pub fn sector_intertwiner_checks(n: usize, two_v: i64) -> Result<Vec<Check>> {
    let label = SectorLabel::new(n, two_v)?;
    let mut out = vec![intertwine_check(format!("J on {label}"), &j_matrix(n, two_v)?)?];
    if two_v >= -1 {
        out.push(intertwine_check(format!("h_v into {label}"), &h_matrix(n, two_v)?)?);
    }
    let mut k = 0usize;
    loop {
        let d = two_v + 4 * k as i64 + 1;
        if d > n as i64 {
            break;
        }
        if d >= 0 {
            out.push(intertwine_check(
                format!("h_(v,{k}) into {label}"),
                &h_vk_matrix(n, two_v, k)?,
            )?);
            out.push(intertwine_check(
                format!("h~_(v,{k}) into {label}"),
                &h_vk_restricted(n, two_v, k)?,
            )?);
            if two_v + 2 * k as i64 >= 0 {
                out.push(Check::compare(
                    format!("matrix element of h_(v,{k}) into {label} = {k}!"),
                    factorial(k).to_string(),
                    matrix_element_factorial(n, two_v, k)?.to_string(),
                ));
            }
        }
        k += 1;
    }
    if n % 2 == 0 && two_v == -1 {
        let h = h_vk_restricted(n, -1, 0)?;
        out.push(Check::holds(
            format!("h_(-1/2) vanishes on V_{n}^0"),
            h.matrix.is_zero(),
            None,
        ));
    }
    if n % 2 == 0 && two_v >= 1 && two_v + 5 <= n as i64 {
        let e = h_after_g(n, two_v)?;
        out.push(Check::holds(
            format!("h_v g_(2v+3) closed form into {label}"),
            e.matches() && e.nonzero(),
            Some(format!("computed {}", e.computed)),
        ));
    }
    Ok(out)
}

/// `g_d` for every admissible `d` and the annihilation of `y_n` (even `n`).
pub fn link_intertwiner_checks(n: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    if n % 2 != 0 {
        return Ok(out);
    }
    for d in (0..=n - 2).step_by(2) {
        let g = g_intertwiner(n, d)?;
        out.push(intertwine_check(format!("g_{d} : V_{n}^{} -> V_{n}^{d}", d + 2), &g)?);
        out.push(Check::compare(
            format!("rank g_{d} = dim I_{n}^{}", d + 2),
            irr_dim(n, d + 2)?,
            rank(&g.matrix),
        ));
    }
    let y = link::y_state(n)?;
    let ctx = BetaContext::zero();
    let mut bad = None;
    for j in 1..n {
        let e = Connectivity::generator(n, j)?;
        let mut total = link::LinkVector::zero();
        for (w, c) in y.terms() {
            for (s, x) in link::standard_act(&e, w, &ctx)?.terms() {
                total.add_term(s.clone(), c * x);
            }
        }
        if !total.is_empty() {
            bad = Some(format!("e_{j}"));
            break;
        }
    }
    out.push(Check::holds(format!("e_j y_{n} = 0"), bad.is_none(), bad));
    Ok(out)
}

pub fn intertwiners(n: usize, two_v: Option<i64>) -> Result<Report> {
    guard("n", n, 1, MAX_INTERTWINER_N)?;
    let mut report = Report::new("verify intertwiners").param("n", n);
    let sectors: Vec<i64> = match two_v {
        Some(t) => {
            SectorLabel::new(n, t)?;
            report = report.param("two_v", t);
            vec![t]
        }
        None => SectorLabel::all(n)?.into_iter().map(|l| l.two_v).collect(),
    };
    let parts: Vec<Result<Vec<Check>>> = sectors.par_iter().map(|&t| sector_intertwiner_checks(n, t)).collect();
    report.extend(collect(parts)?);
    if two_v.is_none() {
        report.extend(link_intertwiner_checks(n)?);
    }
    Ok(report)
}

pub fn default_bound(n: usize) -> usize {
    if n % 2 == 1 {
        structure::DEFAULT_ODD_BOUND
    } else {
        structure::DEFAULT_EVEN_BOUND
    }
}

/// Rank certificates for every sector, one check per fact.
pub fn theorem(n: usize, bound: Option<usize>) -> Result<Report> {
    let bound = bound.unwrap_or_else(|| default_bound(n));
    guard("n", n, 1, bound)?;
    let mut report = Report::new("verify theorem").param("n", n).param("bound_n", bound);
    let certs = structure::verify_theorem(n, bound)?;
    let mut json_certs = Vec::new();
    for c in &certs {
        let label = SectorLabel::new(c.n, c.two_v)?;
        for f in &c.facts {
            report.push(Check::compare(format!("{label}: {}", f.name), f.predicted, f.computed));
        }
        let status = if c.passed() { "pass" } else { "fail" };
        report.line(format!("{label}: {status} ({} facts)", c.facts.len()));
        json_certs.push(json!({
            "n": c.n,
            "two_v": c.two_v,
            "facts": c.facts.iter().map(|f| json!({"name": f.name, "predicted": f.predicted, "computed": f.computed})).collect::<Vec<_>>(),
            "status": status,
        }));
    }
    report.set_data("certificates", json_certs);
    report.set_data("evidence_level", EVIDENCE_LEVEL);
    Ok(report)
}

/// Every suite at one size; the theorem suite is skipped above its bound.
pub fn all(n: usize, rows: usize, cols: usize, bound: Option<usize>) -> Result<Report> {
    let mut report = Report::new("verify all")
        .param("n", n)
        .param("rows", rows)
        .param("cols", cols);
    report.absorb("tl-relations: ", tl_relations(n.clamp(2, MAX_TL_N))?);
    report.absorb("tau: ", tau(n.clamp(2, MAX_TAU_N))?);
    report.absorb("dimer: ", dimer(rows, cols)?);
    report.absorb("intertwiners: ", intertwiners(n.min(MAX_INTERTWINER_N), None)?);
    let b = bound.unwrap_or_else(|| default_bound(n));
    if n <= b {
        report.absorb("theorem: ", theorem(n, Some(b))?);
    } else {
        report.push(Check::skipped("theorem", format!("n={n} above the bound {b}")));
    }
    Ok(report)
}
