use kch_core::augment::{enumerate_augmentations, Augmentation};
use kch_core::braid::BraidWord;
use kch_core::coeff::Var;
use kch_core::dga::{build_dga, DgaMode};
use kch_core::linhom::{homology, linearized_complex, linearized_homology};
use kch_core::ncpoly::Letter;
use kch_core::ring::{Integers, PrimeField, Ring};
use kch_core::snf::{matmul, smith_normal_form, verify_snf, Mat};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Rank over F_p by plain row reduction.
fn rank_mod_p(m: &[Vec<i64>], p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = (1..p).find(|y| a[rank][c] * y % p == 1).unwrap();
        for x in a[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..a.len() {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for k in 0..cols {
                    a[r][k] = (a[r][k] - f * a[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn to_mat(m: &[Vec<i64>]) -> Mat<BigInt> {
    let cols = m.first().map_or(0, |r| r.len());
    Mat::from_rows(m.len(), cols, m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
}

proptest! {
    #[test]
    fn snf_transforms_reproduce_the_matrix(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-9i64..10, 16)) {
        let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j]).collect()).collect();
        let mat = to_mat(&m);
        let s = smith_normal_form(&Integers, &mat);
        prop_assert!(verify_snf(&Integers, &mat, &s));
        // the number of invariant factors prime to p is the rank mod p
        for p in [2i64, 3, 5] {
            let units = s.factors.iter().filter(|x| (*x % BigInt::from(p)) != BigInt::from(0)).count();
            prop_assert_eq!(units, rank_mod_p(&m, p));
        }
    }
}

#[test]
fn boundaries_compose_to_zero_and_euler_characteristic() {
    for s in ["1 1 1", "-1 -1 -1", "1 -2 1 -2"] {
        let d = build_dga(&BraidWord::parse(s, None).unwrap(), DgaMode::topological()).unwrap();
        let sols = enumerate_augmentations(&d, 5).unwrap();
        assert!(!sols.is_empty());
        for eps in sols.iter().take(6) {
            let c = linearized_complex(&d, eps).unwrap();
            let f = PrimeField::new(5).unwrap();
            let comp = matmul(&f, c.boundary(1).unwrap(), c.boundary(2).unwrap());
            assert!(comp.data.iter().flatten().all(|x| *x == 0));
            let h = homology(&f, &c).unwrap();
            let chi_c = c.rank(0) as i64 - c.rank(1) as i64 + c.rank(2) as i64;
            let chi_h = h.free_rank(0) as i64 - h.free_rank(1) as i64 + h.free_rank(2) as i64;
            assert_eq!(chi_c, chi_h, "[{s}]");
        }
    }
}

fn trefoil_eps() -> Augmentation<Integers> {
    Augmentation {
        target: Integers,
        var_values: [(Var::Lambda(0), 1), (Var::Mu(0), -1), (Var::U, 1)].into_iter().map(|(v, x)| (v, BigInt::from(x))).collect(),
        chord_values: [(Letter::a(1, 2), -2), (Letter::a(2, 1), -2)].into_iter().map(|(v, x)| (v, BigInt::from(x))).collect(),
    }
}

#[test]
fn universal_coefficients_at_three_and_five() {
    let d = build_dga(&BraidWord::parse("1 1 1", None).unwrap(), DgaMode::topological()).unwrap();
    let hz = linearized_homology(&d, &trefoil_eps()).unwrap();
    for p in [3u64, 5] {
        let f = PrimeField::new(p).unwrap();
        let eps = trefoil_eps();
        let ep = Augmentation {
            target: f.clone(),
            var_values: eps.var_values.iter().map(|(k, v)| (*k, f.from_int(v))).collect(),
            chord_values: eps.chord_values.iter().map(|(k, v)| (*k, f.from_int(v))).collect(),
        };
        let hp = linearized_homology(&d, &ep).unwrap();
        for k in 0..3 {
            // dim H_k(F_p) = rank + #torsion divisible by p in degrees k and k-1
            let t = |j: usize| hz.torsion(j).iter().filter(|x| (*x % BigInt::from(p)) == BigInt::from(0)).count();
            let expect = hz.free_rank(k) + t(k) + if k > 0 { t(k - 1) } else { 0 };
            assert_eq!(hp.free_rank(k), expect, "p={p} degree {k}");
        }
    }
}

#[test]
fn stabilization_preserves_linearized_homology() {
    let d = build_dga(&BraidWord::parse("1 1 1", None).unwrap(), DgaMode::topological()).unwrap();
    let h = linearized_homology(&d, &trefoil_eps()).unwrap();
    for deg in [1, 2] {
        let mut eps = trefoil_eps();
        let s = d.stabilize(deg).unwrap();
        for g in s.generators_of_degree(0) {
            eps.chord_values.entry(g).or_insert_with(|| BigInt::from(0));
        }
        let hs = linearized_homology(&s, &eps).unwrap();
        for k in 0..3 {
            assert_eq!(hs.describe(k), h.describe(k), "stabilized in degree {deg}");
        }
    }
}
