use tldimer_core::exact::{rank, Rational, SparseMat};
use tldimer_core::link::{self, LinkState};
use tldimer_core::spin::SectorLabel;
use tldimer_core::structure::{
    irr_dim, principal_dims, sector_dim, sum_rule_check, verify_theorem, verify_theorem_even, verify_theorem_odd,
    RankCertificate,
};

const SECTOR_TABLE: [&[usize]; 9] = [
    &[1],
    &[1],
    &[2, 1],
    &[3, 1],
    &[6, 4, 1],
    &[10, 5, 1],
    &[20, 15, 6, 1],
    &[35, 21, 7, 1],
    &[70, 56, 28, 8, 1],
];

const STANDARD_TABLE: [&[usize]; 9] = [
    &[1],
    &[1, 1],
    &[2, 1],
    &[2, 3, 1],
    &[5, 4, 1],
    &[5, 9, 5, 1],
    &[14, 14, 6, 1],
    &[14, 28, 20, 7, 1],
    &[42, 48, 27, 8, 1],
];

#[test]
fn dimension_tables_from_enumeration() {
    for n in 1..=9 {
        let sectors: Vec<usize> = SectorLabel::all(n)
            .unwrap()
            .into_iter()
            .filter(|l| l.two_v >= 0)
            .map(|l| tldimer_core::spin::sector_basis(&l).len())
            .collect();
        assert_eq!(sectors, SECTOR_TABLE[n - 1], "sectors n={n}");
        let standard: Vec<usize> = (n % 2..=n)
            .step_by(2)
            .map(|d| link::basis(n, d).unwrap().len())
            .collect();
        assert_eq!(standard, STANDARD_TABLE[n - 1], "standard n={n}");
    }
}

#[test]
fn sum_rules() {
    for n in 1..=14 {
        for l in SectorLabel::all(n).unwrap() {
            let rule = sum_rule_check(n, l.two_v).unwrap();
            assert!(rule.holds(), "{rule}");
            assert_eq!(rule.sector_dim, sector_dim(n, l.two_v).unwrap());
        }
    }
    assert_eq!(sum_rule_check(8, 1).unwrap().to_string(), "35 = 28+7");
    assert_eq!(sum_rule_check(9, 0).unwrap().to_string(), "70 = 42+27+1");
    assert_eq!(sum_rule_check(9, 8).unwrap().to_string(), "1 = 1");
}

/// Bilinear form on `V_n^d` at `beta = 0`: 1 when gluing two states closes no
/// loop and joins every defect of one state to a defect of the other.
fn gram_entry(a: &LinkState, b: &LinkState) -> i64 {
    let n = a.n();
    let mut visited = vec![false; n];
    for start in a.defects() {
        let mut node = start;
        visited[node] = true;
        loop {
            let across = b.partner(node);
            if across == node {
                break;
            }
            node = across;
            visited[node] = true;
            let back = a.partner(node);
            if back == node {
                return 0;
            }
            node = back;
            visited[node] = true;
        }
    }
    i64::from(visited.iter().all(|&v| v))
}

fn gram_rank(n: usize, d: usize) -> usize {
    let basis = link::basis(n, d).unwrap();
    let trip: Vec<_> = basis
        .iter()
        .enumerate()
        .flat_map(|(i, a)| basis.iter().enumerate().map(move |(j, b)| (i, j, gram_entry(a, b))))
        .filter(|t| t.2 != 0)
        .map(|(i, j, x)| (i, j, Rational::integer(x)))
        .collect();
    rank(&SparseMat::from_triplets(basis.len(), basis.len(), trip).unwrap())
}

#[test]
fn irreducible_dims_are_gram_ranks() {
    for n in 1..=10 {
        for d in (n % 2..=n).step_by(2).filter(|&d| d > 0) {
            assert_eq!(irr_dim(n, d).unwrap(), gram_rank(n, d), "n={n} d={d}");
        }
    }
}

#[test]
fn principal_dims_fill_composite_modules() {
    for n in (2..=12).step_by(2) {
        for d in (2..=n).step_by(2) {
            let total: usize = principal_dims(n, d).unwrap().iter().sum();
            let composite = link::ModuleLabel::composite(n, d - 2).unwrap().dim();
            assert_eq!(total, composite, "n={n} d={d}");
        }
    }
    assert!(principal_dims(7, 3).is_err());
}

fn assert_all_pass(certs: &[RankCertificate]) {
    for c in certs {
        assert!(c.passed(), "n={} two_v={}: {:?}", c.n, c.two_v, c.witness());
    }
}

fn computed(cert: &RankCertificate, prefix: &str) -> Vec<usize> {
    cert.facts
        .iter()
        .filter(|f| f.name.starts_with(prefix))
        .map(|f| f.computed)
        .collect()
}

#[test]
fn odd_certificates() {
    for n in [1, 3, 5, 7, 9, 11] {
        let certs = verify_theorem_odd(n).unwrap();
        assert_eq!(certs.len(), SectorLabel::all(n).unwrap().len());
        assert_all_pass(&certs);
    }
    let nine = verify_theorem_odd(9).unwrap();
    let v0 = nine.iter().find(|c| c.two_v == 0).unwrap();
    assert_eq!(computed(v0, "rank h~"), [42, 27, 1]);
    assert_eq!(computed(v0, "rank of stacked images = dim"), [70]);
    let seven = verify_theorem_odd(7).unwrap();
    let v0 = seven.iter().find(|c| c.two_v == 0).unwrap();
    assert_eq!(computed(v0, "rank h~"), [14, 6]);
    assert_eq!(computed(v0, "rank of stacked images = dim"), [20]);
    let v1 = seven.iter().find(|c| c.two_v == 2).unwrap();
    assert_eq!(computed(v1, "rank h~"), [14, 1]);
    let five = verify_theorem_odd(5).unwrap();
    assert_eq!(computed(five.iter().find(|c| c.two_v == 4).unwrap(), "rank h~"), [1]);
}

#[test]
fn even_certificates() {
    for n in [2, 4, 6, 8, 10] {
        let certs = verify_theorem_even(n).unwrap();
        assert_eq!(certs.len(), SectorLabel::all(n).unwrap().len());
        assert_all_pass(&certs);
    }
    let six = verify_theorem_even(6).unwrap();
    let half = six.iter().find(|c| c.two_v == 1).unwrap();
    assert_eq!(computed(half, "dim ker h_v"), [4]);
    assert_eq!(computed(half, "rank J"), [1]);
    assert_eq!(computed(half, "dim (im h_v & im J)"), [1]);
    let three_halves = six.iter().find(|c| c.two_v == 3).unwrap();
    assert_eq!(computed(three_halves, "dim ker h_v"), [1]);
    assert_eq!(computed(three_halves, "rank h_v = dim E^v"), [5]);
}

#[test]
fn bounds_and_parity_are_enforced() {
    assert!(verify_theorem(13, 11).is_err());
    assert!(verify_theorem_odd(4).is_err());
    assert!(verify_theorem_even(5).is_err());
}
