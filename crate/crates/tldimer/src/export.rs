//! JSON export of intertwiner matrices as coordinate lists.

use serde::{Deserialize, Serialize};
use tldimer_core::intertwiner::{g_intertwiner, h_matrix, h_vk_matrix, j_matrix, IntertwinerMatrix};
use tldimer_core::spin::SectorLabel;
use tldimer_core::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixExport {
    pub name: String,
    pub source: String,
    pub target: String,
    /// `[rows, cols]`
    pub shape: [usize; 2],
    /// `(row, col, "p/q")`, row-major.
    pub entries: Vec<(usize, usize, String)>,
}

impl MatrixExport {
    pub fn new(name: impl Into<String>, a: &IntertwinerMatrix) -> MatrixExport {
        let (r, c) = a.matrix.shape();
        MatrixExport {
            name: name.into(),
            source: a.source.to_string(),
            target: a.target.to_string(),
            shape: [r, c],
            entries: a
                .matrix
                .entries()
                .iter()
                .map(|(i, j, x)| (*i, *j, x.to_string()))
                .collect(),
        }
    }
}

/// `J`, `h_v` and `h_{v,k}` for the chosen sectors, then `g_d` for even `n`.
pub fn intertwiner_exports(n: usize, two_v: Option<i64>) -> Result<Vec<MatrixExport>> {
    let sectors: Vec<i64> = match two_v {
        Some(t) => vec![SectorLabel::new(n, t)?.two_v],
        None => SectorLabel::all(n)?.into_iter().map(|l| l.two_v).collect(),
    };
    let mut out = Vec::new();
    for t in sectors {
        out.push(MatrixExport::new(format!("J two_v={t}"), &j_matrix(n, t)?));
        if t >= -1 {
            out.push(MatrixExport::new(format!("h two_v={t}"), &h_matrix(n, t)?));
        }
        let mut k = 1usize;
        while t + 4 * k as i64 + 1 <= n as i64 {
            if t + 4 * k as i64 + 1 >= 0 {
                out.push(MatrixExport::new(format!("h two_v={t} k={k}"), &h_vk_matrix(n, t, k)?));
            }
            k += 1;
        }
    }
    if two_v.is_none() && n % 2 == 0 {
        for d in (0..=n - 2).step_by(2) {
            out.push(MatrixExport::new(format!("g d={d}"), &g_intertwiner(n, d)?));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_match_entries() {
        let all = intertwiner_exports(6, None).unwrap();
        assert!(all.iter().any(|m| m.name == "g d=0"));
        for m in &all {
            assert!(m.entries.iter().all(|(r, c, _)| *r < m.shape[0] && *c < m.shape[1]));
        }
        let h = all.iter().find(|m| m.name == "h two_v=1").unwrap();
        assert_eq!(h.shape, [10, 14]);
        assert_eq!(h.target, "E_5^1/2");
    }
}
