use tldimer_core::exact::{commutator, rank, Rational, Scalar, SparseMat};
use tldimer_core::intertwiner::{
    check_intertwiner, factorial, g_intertwiner, h_after_g, h_image, h_matrix, h_vk_matrix, h_vk_restricted, j_matrix,
    j_operator, matrix_element_factorial, IntertwinerMatrix,
};
use tldimer_core::link::{self, LinkState, ModuleLabel};
use tldimer_core::spin::{tau_generator, SectorLabel};
use tldimer_core::structure::irr_dim;
use tldimer_core::tl::{BetaContext, Connectivity};

/// Expands the product over arcs directly: each arc on nodes `i < j` lowers
/// either site `i - 1` or site `j`; sites outside `1..n-1` and repeated sites kill the term.
fn h_oracle(w: &LinkState) -> Vec<(u64, i64)> {
    let n = w.n();
    let arcs = w.arcs();
    let mut out = std::collections::BTreeMap::new();
    'choice: for choice in 0u32..(1 << arcs.len()) {
        let mut bits = 0u64;
        let mut sites: Vec<usize> = arcs
            .iter()
            .enumerate()
            .map(|(k, &(i, j))| if choice >> k & 1 == 0 { i } else { j + 1 })
            .collect();
        if let Some(a) = w.wavy() {
            sites.push(a);
        }
        for s in sites {
            if s == 0 || s >= n || bits >> (s - 1) & 1 == 1 {
                continue 'choice;
            }
            bits |= 1 << (s - 1);
        }
        *out.entry(bits).or_insert(0) += 1;
    }
    out.into_iter().filter(|&(_, c)| c != 0).collect()
}

fn h_sectors(n: usize) -> Vec<i64> {
    SectorLabel::all(n)
        .unwrap()
        .into_iter()
        .map(|l| l.two_v)
        .filter(|&t| t >= -1)
        .collect()
}

fn assert_intertwines(a: &IntertwinerMatrix) {
    let report = check_intertwiner(a).unwrap();
    assert!(report.passed(), "{} -> {}: {:?}", a.source, a.target, report.witness);
}

#[test]
fn h_images_match_oracle() {
    for n in 1..=9 {
        for two_v in h_sectors(n) {
            let label = tldimer_core::intertwiner::h_source(n, two_v).unwrap();
            for w in link::module_basis(&label).unwrap() {
                let computed: Vec<(u64, i64)> = h_image(&w)
                    .terms()
                    .map(|(s, c)| (s.bits, c.numer().try_into().unwrap()))
                    .collect();
                assert_eq!(computed, h_oracle(&w), "{w}");
            }
        }
    }
}

#[test]
fn j_and_h_intertwine() {
    for n in 1..=10 {
        for label in SectorLabel::all(n).unwrap() {
            assert_intertwines(&j_matrix(n, label.two_v).unwrap());
        }
        for two_v in h_sectors(n) {
            assert_intertwines(&h_matrix(n, two_v).unwrap());
        }
    }
}

#[test]
fn composites_intertwine() {
    for n in 1..=10 {
        for label in SectorLabel::all(n).unwrap() {
            let two_v = label.two_v;
            for k in 0..=n {
                let d = two_v + 4 * k as i64 + 1;
                if d < 0 || d > n as i64 {
                    assert!(h_vk_matrix(n, two_v, k).is_err());
                    continue;
                }
                assert_intertwines(&h_vk_matrix(n, two_v, k).unwrap());
                assert_intertwines(&h_vk_restricted(n, two_v, k).unwrap());
            }
        }
    }
}

#[test]
fn g_intertwines() {
    for n in (2..=10).step_by(2) {
        for d in (0..=n - 2).step_by(2) {
            let g = g_intertwiner(n, d).unwrap();
            assert_intertwines(&g);
            assert_eq!(rank(&g.matrix), irr_dim(n, d + 2).unwrap(), "n={n} d={d}");
        }
    }
}

#[test]
fn j_commutes_with_generators() {
    for n in 2..=9 {
        let j: SparseMat<Rational> = j_operator(n).unwrap().matrix().unwrap();
        for g in 1..n {
            assert!(
                commutator(&j, &tau_generator(n, g).unwrap()).unwrap().is_zero(),
                "n={n} e_{g}"
            );
        }
    }
}

#[test]
fn factorial_matrix_elements() {
    for n in 1..=10 {
        for label in SectorLabel::all(n).unwrap() {
            let two_v = label.two_v;
            for k in 0..=n {
                let d = two_v + 4 * k as i64 + 1;
                if d < 0 || d > n as i64 || two_v + 2 * (k as i64) < 0 {
                    continue;
                }
                assert_eq!(
                    matrix_element_factorial(n, two_v, k).unwrap(),
                    factorial(k),
                    "n={n} two_v={two_v} k={k}"
                );
            }
        }
    }
}

#[test]
fn h_minus_half_kills_standard_part() {
    for n in (2..=10).step_by(2) {
        let h = h_vk_restricted(n, -1, 0).unwrap();
        assert!(h.matrix.is_zero(), "n={n}");
        assert!(!h_matrix(n, -1).unwrap().matrix.is_zero(), "n={n}");
    }
}

#[test]
fn h_after_g_closed_form() {
    for n in (6..=10).step_by(2) {
        for two_v in (1..).step_by(2).take_while(|t| t + 5 <= n as i64) {
            let e = h_after_g(n, two_v).unwrap();
            assert!(e.matches(), "n={n} two_v={two_v}");
            assert!(e.nonzero());
        }
    }
    assert!(h_after_g(7, 1).is_err());
}

#[test]
fn y_is_annihilated() {
    let ctx = BetaContext::zero();
    for n in [4, 6, 8, 10] {
        let y = link::y_state(n).unwrap();
        for j in 1..n {
            let e = Connectivity::generator(n, j).unwrap();
            let mut total = link::LinkVector::zero();
            for (w, c) in y.terms() {
                for (s, x) in link::standard_act(&e, w, &ctx).unwrap().terms() {
                    total.add_term(s.clone(), c * x);
                }
            }
            assert!(total.is_empty(), "n={n} e_{j}");
        }
    }
}

#[test]
fn perturbed_map_is_caught() {
    let h = h_matrix(7, 2).unwrap();
    let (r, c) = h.matrix.shape();
    let mut trip: Vec<_> = h.matrix.entries().to_vec();
    let free = (0..r * c)
        .map(|k| (k / c, k % c))
        .find(|&(i, j)| h.matrix.get_or_zero(i, j).is_zero())
        .unwrap();
    trip.push((free.0, free.1, Rational::integer(1)));
    let bad = IntertwinerMatrix::new(SparseMat::from_triplets(r, c, trip).unwrap(), h.source, h.target).unwrap();
    let report = check_intertwiner(&bad).unwrap();
    assert!(!report.passed());
    assert!(report.witness.is_some());
}

#[test]
fn empty_target_sector() {
    let j = j_matrix(5, -4).unwrap();
    assert_eq!(j.matrix.nrows(), 0);
    assert!(check_intertwiner(&j).unwrap().passed());
}

#[test]
fn h_source_shapes() {
    assert_eq!(
        tldimer_core::intertwiner::h_source(5, 2).unwrap(),
        ModuleLabel::composite(5, 3).unwrap()
    );
    assert_eq!(
        tldimer_core::intertwiner::h_source(5, 4).unwrap(),
        ModuleLabel::standard(5, 5).unwrap()
    );
    assert!(tldimer_core::intertwiner::h_source(5, -2).is_err());
}

fn spin_terms(v: &tldimer_core::spin::SpinVector) -> Vec<(String, Rational)> {
    let mut out: Vec<_> = v.terms().map(|(s, c)| (s.to_string(), c.clone())).collect();
    out.sort();
    out
}

fn expected(states: &[&str]) -> Vec<(String, Rational)> {
    let mut out: Vec<_> = states.iter().map(|s| (s.to_string(), Rational::integer(1))).collect();
    out.sort();
    out
}

#[test]
fn worked_h_half_images() {
    let arcs: LinkState = "|(())|".parse().unwrap();
    assert_eq!(
        spin_terms(&h_image(&arcs)),
        expected(&["↓↓↑↑↑", "↓↑↑↓↑", "↑↓↑↑↓", "↑↑↑↓↓"])
    );
    let wavy: LinkState = "|()||~".parse().unwrap();
    assert_eq!(spin_terms(&h_image(&wavy)), expected(&["↓↑↑↑↓", "↑↑↓↑↓"]));
}

#[test]
fn stacked_images_span_the_sector() {
    let j = j_matrix(6, 5).unwrap();
    let h = h_matrix(6, 1).unwrap();
    let stacked = SparseMat::stack_columns(&[j.matrix, h.matrix]).unwrap();
    assert_eq!(stacked.shape(), (10, 15));
    assert_eq!(rank(&stacked), 10);
}
