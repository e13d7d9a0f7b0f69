//! Randomised invariants: Smith form, signature, determinant, Chow products.

use std::collections::BTreeMap;

use k3evenset_core::chow::{ci_is_k3, intersection_matrix, CompleteIntersection, MultiProjSpace};
use k3evenset_core::exactlin::{self, Int, IntMatrix, Rat};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec(-20i64..=20, r * c).prop_map(move |v| {
            IntMatrix::from_flat(r, c, v.into_iter().map(Int::from).collect()).unwrap()
        })
    })
}

fn square(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim).prop_flat_map(|n| {
        prop::collection::vec(-20i64..=20, n * n)
            .prop_map(move |v| IntMatrix::from_flat(n, n, v.into_iter().map(Int::from).collect()).unwrap())
    })
}

fn symmetric(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    square(max_dim).prop_map(|a| {
        let n = a.rows();
        let rows = (0..n).map(|i| (0..n).map(|j| a[(i.min(j), i.max(j))].clone()).collect()).collect();
        IntMatrix::from_rows(rows).unwrap()
    })
}

/// Row reduction over the rationals: (rank, determinant if square).
fn rational_elimination(a: &IntMatrix) -> (usize, Rat) {
    let mut m: Vec<Vec<Rat>> = a.row_vecs().into_iter().map(|r| r.into_iter().map(Rat::from_integer).collect()).collect();
    let (rows, cols) = (a.rows(), a.cols());
    let mut det = Rat::one();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            det = Rat::zero();
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            det = -det;
        }
        let pivot = m[rank][c].clone();
        det *= &pivot;
        for r in rank + 1..rows {
            let f = &m[r][c] / &pivot;
            for k in c..cols {
                let t = &f * &m[rank][k];
                m[r][k] -= t;
            }
        }
        rank += 1;
    }
    if rank < rows.min(cols) {
        det = Rat::zero();
    }
    (rank, det)
}

fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let mut e = IntMatrix::identity(n);
        let mut rows = e.row_vecs();
        rows[i][j] = Int::from(k);
        e = IntMatrix::from_rows(rows).unwrap();
        u = e.mul(&u).unwrap();
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smith_form_invariants(a in matrix(9)) {
        let s = exactlin::smith_normal_form(&a);
        prop_assert_eq!(s.left.mul(&a).unwrap().mul(&s.right).unwrap(), s.diag.clone());
        prop_assert!(exactlin::det(&s.left).unwrap().abs().is_one());
        prop_assert!(exactlin::det(&s.right).unwrap().abs().is_one());
        prop_assert_eq!(s.right.mul(&s.right_inv).unwrap(), IntMatrix::identity(a.cols()));
        let d = s.diagonal();
        for w in d.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        for x in &d {
            prop_assert!(x.is_positive());
        }
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j || i >= s.rank {
                    prop_assert!(s.diag[(i, j)].is_zero());
                }
            }
        }
        let (rank, _) = rational_elimination(&a);
        prop_assert_eq!(s.rank, rank);
        prop_assert_eq!(exactlin::rank(&a), rank);
    }

    #[test]
    fn determinant_matches_elimination_and_smith(a in square(9)) {
        let det = exactlin::det(&a).unwrap();
        let (_, oracle) = rational_elimination(&a);
        prop_assert_eq!(Rat::from_integer(det.clone()), oracle);
        let s = exactlin::smith_normal_form(&a);
        let prod = if s.rank == a.rows() { s.diagonal().iter().fold(Int::one(), |p, x| p * x) } else { Int::zero() };
        prop_assert_eq!(det.abs(), prod);
    }

    #[test]
    fn signature_is_a_congruence_invariant(
        a in symmetric(9),
        ops in prop::collection::vec((0usize..9, 0usize..9, -3i64..=3), 0..12),
    ) {
        let sig = exactlin::signature(&a).unwrap();
        let n = a.rows();
        prop_assert_eq!(sig.positive + sig.negative + sig.zero, n);
        prop_assert_eq!(sig.positive + sig.negative, rational_elimination(&a).0);
        let u = unimodular(n, &ops);
        let b = a.congruent(&u).unwrap();
        prop_assert_eq!(exactlin::signature(&b).unwrap(), sig);
        let neg = a.map(|x| -x);
        let s2 = exactlin::signature(&neg).unwrap();
        prop_assert_eq!((s2.positive, s2.negative), (sig.negative, sig.positive));
    }
}

/// Full expansion over Z without truncation, then read one coefficient.
fn chow_oracle(dims: &[usize], degrees: &[Vec<u32>], i: usize, j: usize) -> Int {
    let k = dims.len();
    let mut poly: BTreeMap<Vec<usize>, Int> = BTreeMap::new();
    poly.insert(vec![0; k], Int::one());
    let mut factors: Vec<Vec<u32>> = degrees.to_vec();
    for idx in [i, j] {
        let mut h = vec![0u32; k];
        h[idx] = 1;
        factors.push(h);
    }
    for f in &factors {
        let mut next: BTreeMap<Vec<usize>, Int> = BTreeMap::new();
        for (e, c) in &poly {
            for (t, &a) in f.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let mut e2 = e.clone();
                e2[t] += 1;
                *next.entry(e2).or_insert_with(Int::zero) += c * Int::from(a);
            }
        }
        poly = next;
    }
    poly.get(dims).cloned().unwrap_or_else(Int::zero)
}

fn k3_instance() -> impl Strategy<Value = (Vec<usize>, Vec<Vec<u32>>)> {
    prop::collection::vec(1usize..=4, 1..=3)
        .prop_filter("needs at least one hypersurface", |d| d.iter().sum::<usize>() >= 3)
        .prop_flat_map(|dims| {
            let m = dims.iter().sum::<usize>() - 2;
            let cols: Vec<_> = dims.iter().map(|&n| prop::collection::vec(0..m, n + 1)).collect();
            (Just(dims), Just(m), cols)
        })
        .prop_map(|(dims, m, cols)| {
            let mut degrees = vec![vec![0u32; dims.len()]; m];
            for (j, units) in cols.iter().enumerate() {
                for &slot in units {
                    degrees[slot][j] += 1;
                }
            }
            (dims, degrees)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn chow_matrix_matches_full_expansion((dims, degrees) in k3_instance()) {
        let ci = CompleteIntersection::new(MultiProjSpace::new(dims.clone()).unwrap(), degrees.clone()).unwrap();
        prop_assert!(ci_is_k3(&ci).unwrap());
        let m = intersection_matrix(&ci).unwrap();
        prop_assert!(m.is_symmetric());
        for i in 0..dims.len() {
            prop_assert!((&m[(i, i)] % Int::from(2)).is_zero());
            for j in 0..dims.len() {
                prop_assert_eq!(m[(i, j)].clone(), chow_oracle(&dims, &degrees, i, j));
            }
        }
    }
}
