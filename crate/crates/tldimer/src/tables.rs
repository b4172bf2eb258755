//! `dims`, `partition` and `enumerate`.

use serde_json::json;
use tldimer_core::dimer::{self, enumerate_coverings, partition_trace_routes, LatticeShape, MAX_TRANSFER_N};
use tldimer_core::exact::Rational;
use tldimer_core::link::{self, ModuleLabel};
use tldimer_core::spin::{self, SectorLabel};
use tldimer_core::structure::sum_rule_check;
use tldimer_core::tl;
use tldimer_core::Result;

use crate::report::{Check, Report};
use crate::suites::{guard, half};

pub const MAX_DIMS_N: usize = 20;
/// Above this `n` the tables come from the closed formulas alone.
pub const MAX_ENUMERATED_DIMS_N: usize = 10;
pub const MAX_LIST_N: usize = 12;

/// Both dimension panels for one `n`: sectors `E_{n-1}^v` with `v >= 0` and
/// standard modules `V_n^d`.
pub fn dims(n: usize) -> Result<Report> {
    guard("n", n, 1, MAX_DIMS_N)?;
    let mut report = Report::new("dims").param("n", n);
    let enumerated = n <= MAX_ENUMERATED_DIMS_N;

    let mut sectors = Vec::new();
    for label in SectorLabel::all(n)?.into_iter().filter(|l| l.two_v >= 0) {
        let dim = if enumerated {
            spin::sector_basis(&label).len()
        } else {
            label.dim()
        };
        if enumerated {
            report.push(Check::compare(
                format!("{label} enumeration = formula"),
                label.dim(),
                dim,
            ));
        }
        let rule = sum_rule_check(n, label.two_v)?;
        report.push(Check::holds(
            format!("sum rule {label}"),
            rule.holds(),
            Some(rule.to_string()),
        ));
        sectors.push((label.two_v, dim));
    }
    let mut standard = Vec::new();
    for d in (n % 2..=n).step_by(2) {
        let formula = link::standard_dim(n, d);
        let dim = if enumerated { link::basis(n, d)?.len() } else { formula };
        if enumerated {
            report.push(Check::compare(format!("V_{n}^{d} enumeration = formula"), formula, dim));
        }
        standard.push((d, dim));
    }

    let left: Vec<String> = sectors.iter().map(|(t, d)| format!("v={}:{d}", half(*t))).collect();
    let right: Vec<String> = standard.iter().map(|(d, x)| format!("d={d}:{x}")).collect();
    report.line(format!("dim E_{}^v  {}", n - 1, left.join("  ")));
    report.line(format!("dim V_{n}^d  {}", right.join("  ")));
    report.set_data("source", if enumerated { "enumeration" } else { "formula" });
    report.set_data(
        "sectors",
        sectors
            .iter()
            .map(|(t, d)| json!({"two_v": t, "dim": d}))
            .collect::<Vec<_>>(),
    );
    report.set_data(
        "standard",
        standard
            .iter()
            .map(|(d, x)| json!({"d": d, "dim": x}))
            .collect::<Vec<_>>(),
    );
    Ok(report)
}

/// `Z(alpha)` on the `rows x cols` cylinder, optionally at a value of
/// `alpha` and against the enumeration oracle.
pub fn partition(rows: usize, cols: usize, alpha: Option<Rational>, poly: bool, oracle: bool) -> Result<Report> {
    let shape = LatticeShape::new(rows, cols)?;
    guard("cols", cols, 1, MAX_TRANSFER_N)?;
    let mut report = Report::new("partition")
        .param("rows", rows)
        .param("cols", cols)
        .param("oracle", oracle);
    if let Some(a) = &alpha {
        report = report.param("alpha", a.to_string());
    }
    let routes = partition_trace_routes(shape, MAX_TRANSFER_N)?;
    let z = routes.full;
    report.push(Check::holds("sector traces sum to full trace", true, None));
    if poly || alpha.is_none() {
        report.line(format!("Z(alpha) = {z}"));
        report.set_data("polynomial", z.coeff_strings());
    }
    if let Some(a) = &alpha {
        let value = z.eval(a);
        report.line(format!("Z({a}) = {value}"));
        report.set_data("value", value.to_string());
    }
    let count = dimer::covering_count(&z).to_string();
    report.line(format!("coverings (alpha = 1): {count}"));
    report.set_data("coverings", count);
    if oracle {
        let e = enumerate_coverings(shape)?;
        report.line(format!("enumeration: {e}"));
        report.set_data("oracle", e.coeff_strings());
        report.push(Check::compare(
            "trace = enumeration",
            e.coeff_strings(),
            z.coeff_strings(),
        ));
    }
    Ok(report)
}

/// Link states of `V_n^d` or `W_n^d` in basis order.
pub fn enumerate_links(n: usize, d: usize, composite: bool) -> Result<Report> {
    guard("n", n, 0, MAX_LIST_N)?;
    let label = if composite {
        ModuleLabel::composite(n, d)?
    } else {
        ModuleLabel::standard(n, d)?
    };
    let states = link::module_basis(&label)?;
    let mut report = Report::new("enumerate links")
        .param("n", n)
        .param("d", d)
        .param("composite", composite);
    let items: Vec<String> = states.iter().map(|s| s.to_string()).collect();
    report.lines.extend(items.iter().cloned());
    report.push(Check::compare(format!("|basis of {label}|"), label.dim(), items.len()));
    report.set_data("items", items);
    Ok(report)
}

/// Spin basis states of `E_{n-1}^v`.
pub fn enumerate_sector(n: usize, two_v: i64) -> Result<Report> {
    guard("n", n, 1, MAX_LIST_N + 2)?;
    let label = SectorLabel::new(n, two_v)?;
    let basis = spin::sector_basis(&label);
    let mut report = Report::new("enumerate sector").param("n", n).param("two_v", two_v);
    report.lines.extend(basis.iter().map(|s| format!("{s}  {}", s.bits)));
    report.push(Check::compare(format!("|basis of {label}|"), label.dim(), basis.len()));
    report.set_data(
        "items",
        basis
            .iter()
            .map(|s| json!({"bits": s.bits, "n_sites": s.n_sites}))
            .collect::<Vec<_>>(),
    );
    Ok(report)
}

/// All connectivities on `n` sites.
pub fn enumerate_connectivities(n: usize) -> Result<Report> {
    let all = tl::enumerate_connectivities(n)?;
    let mut report = Report::new("enumerate connectivities").param("n", n);
    let items: Vec<String> = all.iter().map(|c| c.to_string()).collect();
    report.lines.extend(all.iter().map(|c| c.pretty()));
    report.push(Check::compare(
        "count = Catalan number",
        tl::catalan(n) as u64,
        items.len() as u64,
    ));
    report.set_data("items", items);
    Ok(report)
}
