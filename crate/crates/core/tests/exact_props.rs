use proptest::prelude::*;
use tldimer_core::exact::{rank, rank_kernel, AlphaPoly, Rational, Scalar, SparseMat};

const P: u128 = (1 << 61) - 1;

fn modp(x: i64) -> u128 {
    (x as i128).rem_euclid(P as i128) as u128
}

fn pow_mod(mut b: u128, mut e: u128) -> u128 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

/// Rank over F_p with p = 2^61 - 1. Entries here are tiny, so all minors
/// are far below p and the rank agrees with the rational rank.
fn rank_mod_p(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<u128>> = rows.iter().map(|r| r.iter().map(|&x| modp(x)).collect()).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let inv = pow_mod(m[r][c], P - 2);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c] * inv % P;
                for k in 0..ncols {
                    let sub = f * m[r][k] % P;
                    m[i][k] = (m[i][k] + P - sub) % P;
                }
            }
        }
        r += 1;
    }
    r
}

fn to_sparse(rows: &[Vec<i64>]) -> SparseMat<Rational> {
    let dense: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Rational::integer(x)).collect())
        .collect();
    SparseMat::from_dense(&dense).unwrap()
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        prop::collection::vec(
            prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], c),
            r,
        )
    })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..20).prop_map(|(p, q)| Rational::new(p, q))
}

fn poly() -> impl Strategy<Value = AlphaPoly> {
    prop::collection::vec(-5i64..5, 0..5).prop_map(|c| AlphaPoly::from_i64s(&c))
}

proptest! {
    #[test]
    fn rank_matches_modular_oracle(rows in small_matrix()) {
        prop_assert_eq!(rank(&to_sparse(&rows)), rank_mod_p(&rows));
    }

    #[test]
    fn rank_nullity_and_kernel(rows in small_matrix()) {
        let m = to_sparse(&rows);
        let k = rank_kernel(&m);
        prop_assert_eq!(k.rank + k.kernel_dim(), m.ncols());
        for v in &k.kernel_basis {
            let image = m.mul_vec(v).unwrap();
            prop_assert!(image.iter().all(|x| x.is_zero()));
            prop_assert!(v.iter().all(|x| x.is_integer()));
        }
        // the kernel vectors are independent
        if !k.kernel_basis.is_empty() {
            let stacked = SparseMat::from_dense(&k.kernel_basis).unwrap();
            prop_assert_eq!(rank(&stacked), k.kernel_dim());
        }
    }

    #[test]
    fn rank_of_transpose(rows in small_matrix()) {
        let m = to_sparse(&rows);
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a - &a, Rational::zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.recip(), Rational::one());
        }
        let text = a.to_string();
        prop_assert_eq!(text.parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn poly_ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(p.add(&q).add(&r), p.add(&q.add(&r)));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert!(p.sub(&p).is_zero());
        prop_assert_eq!(AlphaPoly::from_coeff_strings(&p.coeff_strings()).unwrap(), p.clone());
    }

    #[test]
    fn poly_evaluation_is_a_homomorphism(p in poly(), q in poly(), x in rational()) {
        prop_assert_eq!(p.mul(&q).eval(&x), &p.eval(&x) * &q.eval(&x));
        prop_assert_eq!(p.add(&q).eval(&x), &p.eval(&x) + &q.eval(&x));
    }

    #[test]
    fn sparse_product_matches_dense(a in small_matrix(), seed in prop::collection::vec(-3i64..=3, 36)) {
        let (r, c) = (a.len(), a[0].len());
        let b: Vec<Vec<i64>> = (0..c).map(|i| (0..4).map(|j| seed[(i * 4 + j) % seed.len()]).collect()).collect();
        let product = to_sparse(&a).mat_mul(&to_sparse(&b)).unwrap();
        for i in 0..r {
            for j in 0..4 {
                let expected: i64 = (0..c).map(|k| a[i][k] * b[k][j]).sum();
                prop_assert_eq!(product.get_or_zero(i, j), Rational::integer(expected));
            }
        }
    }
}

#[test]
fn rational_parsing() {
    assert_eq!("-3/2".parse::<Rational>().unwrap(), Rational::new(-3, 2));
    assert_eq!("4/2".parse::<Rational>().unwrap(), Rational::integer(2));
    assert!("1/0".parse::<Rational>().is_err());
    assert!("x".parse::<Rational>().is_err());
}

#[test]
fn polynomial_display() {
    assert_eq!(AlphaPoly::from_i64s(&[4, 0, 1]).to_string(), "4 + a^2");
    assert_eq!(AlphaPoly::from_i64s(&[4, 0, 1, 0, 0]).degree(), Some(2));
    assert_eq!(AlphaPoly::zero().degree(), None);
}
