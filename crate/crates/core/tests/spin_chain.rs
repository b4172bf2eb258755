use tldimer_core::exact::{commutator, Rational, SparseMat};
use tldimer_core::spin::{
    contragredient_check, hamiltonian, sector_basis, sector_restrict, sector_tau, sz_matrix, tau_bar_generator,
    tau_generator, u_matrix, SectorLabel,
};

type Dense = Vec<Vec<i64>>;

fn kron(a: &Dense, b: &Dense) -> Dense {
    let (ra, ca, rb, cb) = (a.len(), a[0].len(), b.len(), b[0].len());
    let mut out = vec![vec![0; ca * cb]; ra * rb];
    for i in 0..ra {
        for j in 0..ca {
            for k in 0..rb {
                for l in 0..cb {
                    out[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn dmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![0; m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            if a[i][k] != 0 {
                for j in 0..m {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    out
}

fn dadd(a: &Dense, b: &Dense) -> Dense {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect())
        .collect()
}

/// Single-site operator on `sites` sites with the textbook tensor ordering:
/// site 1 is the most significant factor, basis vector index 0 = up.
fn embed(local: &Dense, site: usize, sites: usize) -> Dense {
    let id = vec![vec![1, 0], vec![0, 1]];
    let mut acc = vec![vec![1]];
    for s in 1..=sites {
        acc = kron(&acc, if s == site { local } else { &id });
    }
    acc
}

const PLUS: [[i64; 2]; 2] = [[0, 1], [0, 0]];
const MINUS: [[i64; 2]; 2] = [[0, 0], [1, 0]];
const X: [[i64; 2]; 2] = [[0, 1], [1, 0]];

fn op(local: [[i64; 2]; 2], site: usize, sites: usize) -> Dense {
    let dim = 1 << sites;
    if site == 0 || site > sites {
        return vec![vec![0; dim]; dim];
    }
    embed(&local.iter().map(|r| r.to_vec()).collect(), site, sites)
}

/// Converts a dense matrix in tensor ordering into the crate's bitmask ordering,
/// where bit `j-1` is site `j`.
fn to_bitmask_order(m: &Dense, sites: usize) -> SparseMat<Rational> {
    let perm = |idx: usize| -> usize {
        // tensor index: site 1 is the highest bit
        (0..sites).map(|s| ((idx >> (sites - 1 - s)) & 1) << s).sum()
    };
    let dim = 1 << sites;
    let mut trip = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            if m[i][j] != 0 {
                trip.push((perm(i), perm(j), Rational::integer(m[i][j])));
            }
        }
    }
    SparseMat::from_triplets(dim, dim, trip).unwrap()
}

fn tau_oracle(n: usize, j: usize) -> SparseMat<Rational> {
    let s = n - 1;
    let a = dmul(&op(MINUS, j - 1, s), &op(PLUS, j, s));
    let b = dmul(&op(PLUS, j, s), &op(MINUS, j + 1, s));
    to_bitmask_order(&dadd(&a, &b), s)
}

fn tau_bar_oracle(n: usize, j: usize) -> SparseMat<Rational> {
    let s = n - 1;
    let k = if j % 2 == 1 { MINUS } else { PLUS };
    let a = dmul(&op(k, j - 1, s), &op(k, j, s));
    let b = dmul(&op(k, j, s), &op(k, j + 1, s));
    to_bitmask_order(&dadd(&a, &b), s)
}

#[test]
fn tau_matches_tensor_oracle() {
    for n in 2..=8 {
        for j in 1..n {
            assert_eq!(tau_generator(n, j).unwrap(), tau_oracle(n, j), "n={n} j={j}");
            assert_eq!(tau_bar_generator(n, j).unwrap(), tau_bar_oracle(n, j), "n={n} j={j}");
        }
    }
}

#[test]
fn u_matches_tensor_oracle() {
    for n in 2..=7 {
        let s = n - 1;
        let mut u = vec![vec![1]];
        for site in 1..=s {
            let local: Dense = if site % 2 == 1 {
                X.iter().map(|r| r.to_vec()).collect()
            } else {
                vec![vec![1, 0], vec![0, 1]]
            };
            u = kron(&u, &local);
        }
        assert_eq!(u_matrix(n).unwrap(), to_bitmask_order(&u, s));
    }
}

fn zero_beta_relations(mats: &[SparseMat<Rational>]) -> bool {
    let k = mats.len();
    for i in 0..k {
        if !mats[i].mat_mul(&mats[i]).unwrap().is_zero() {
            return false;
        }
        for j in 0..k {
            match i.abs_diff(j) {
                1 => {
                    if mats[i].mat_mul(&mats[j]).unwrap().mat_mul(&mats[i]).unwrap() != mats[i] {
                        return false;
                    }
                }
                d if d > 1 && !commutator(&mats[i], &mats[j]).unwrap().is_zero() => {
                    return false;
                }
                _ => {}
            }
        }
    }
    true
}

#[test]
fn relations_full_space() {
    for n in 2..=10 {
        let tau: Vec<_> = (1..n).map(|j| tau_generator(n, j).unwrap()).collect();
        let bar: Vec<_> = (1..n).map(|j| tau_bar_generator(n, j).unwrap()).collect();
        assert!(zero_beta_relations(&tau), "tau n={n}");
        assert!(zero_beta_relations(&bar), "tau_bar n={n}");
    }
}

#[test]
fn relations_per_sector() {
    for n in 2..=12 {
        for label in SectorLabel::all(n).unwrap() {
            let mats: Vec<_> = (1..n).map(|j| sector_tau(&label, j).unwrap()).collect();
            assert!(zero_beta_relations(&mats), "{label}");
        }
    }
}

#[test]
fn tau_bar_is_conjugate_of_tau() {
    for n in 2..=9 {
        let u = u_matrix(n).unwrap();
        assert_eq!(u.mat_mul(&u).unwrap(), SparseMat::identity(1 << (n - 1)));
        for j in 1..n {
            let conj = u.mat_mul(&tau_generator(n, j).unwrap()).unwrap().mat_mul(&u).unwrap();
            assert_eq!(conj, tau_bar_generator(n, j).unwrap(), "n={n} j={j}");
        }
    }
}

#[test]
fn hamiltonian_properties() {
    for n in 2..=10 {
        let h = hamiltonian(n).unwrap();
        assert!(h.is_symmetric());
        assert!(commutator(&h, &sz_matrix(n).unwrap()).unwrap().is_zero());
    }
}

#[test]
fn generators_respect_sectors() {
    for n in 2..=8 {
        let sz = sz_matrix(n).unwrap();
        for j in 1..n {
            let t = tau_generator(n, j).unwrap();
            assert!(commutator(&t, &sz).unwrap().is_zero());
            for label in SectorLabel::all(n).unwrap() {
                assert_eq!(sector_restrict(&t, &label).unwrap(), sector_tau(&label, j).unwrap());
            }
        }
    }
}

#[test]
fn sector_dimensions() {
    for n in 1..=14 {
        let labels = SectorLabel::all(n).unwrap();
        let total: usize = labels.iter().map(|l| l.dim()).sum();
        assert_eq!(total, 1 << (n - 1));
        for l in &labels {
            assert_eq!(l.dim(), l.negated().dim());
        }
    }
    for n in 1..=10 {
        for l in SectorLabel::all(n).unwrap() {
            let b = sector_basis(&l);
            assert_eq!(b.len(), l.dim());
            assert!(b.windows(2).all(|w| w[0].bits < w[1].bits));
        }
    }
}

#[test]
fn contragredience_all_sectors() {
    for n in 1..=10 {
        for l in SectorLabel::all(n).unwrap() {
            assert!(contragredient_check(n, l.two_v).unwrap().passed(), "{l}");
        }
    }
}

#[test]
fn generator_range_is_checked() {
    assert!(tau_generator(4, 0).is_err());
    assert!(tau_generator(4, 4).is_err());
}
