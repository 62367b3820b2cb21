//! Randomized invariants of the tensor algebra, graphs and weights.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tmanifold::graph::{build_graphs, GraphSpec};
use tmanifold::manifold::lme_weights;
use tmanifold::spectral::{eig_f_symmetric, is_laplacian, transform_eigenvalues, EigenOrdering};
use tmanifold::tensor::{
    bcirc_oracle, from_transform, identity_tensor, read_t3b_from, t_product, t_transpose, to_transform, trace,
    write_t3b_to,
};
use tmanifold::trace_ratio::random_normal_tensor;
use tmanifold::Tensor3;

fn rand_tensor(n1: usize, n2: usize, n3: usize, seed: u64) -> Tensor3 {
    random_normal_tensor(n1, n2, n3, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn rel_err(a: &Tensor3, b: &Tensor3) -> f64 {
    a.sub(b).unwrap().frobenius_norm() / b.frobenius_norm().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn t_product_matches_block_circulant(n1 in 1usize..7, n2 in 1usize..7, m in 1usize..7, n3 in 1usize..9, seed: u64) {
        let a = rand_tensor(n1, n2, n3, seed);
        let b = rand_tensor(n2, m, n3, seed ^ 0x9e37);
        prop_assert!(rel_err(&t_product(&a, &b).unwrap(), &bcirc_oracle(&a, &b).unwrap()) <= 1e-12);
    }

    #[test]
    fn transform_round_trip(n1 in 1usize..6, n2 in 1usize..6, n3 in 1usize..10, seed: u64) {
        let a = rand_tensor(n1, n2, n3, seed);
        let back = from_transform(&to_transform(&a)).unwrap();
        prop_assert!(rel_err(&back, &a) <= 1e-13);
    }

    #[test]
    fn transpose_reverses_products(n in 1usize..6, n3 in 1usize..7, seed: u64) {
        let a = rand_tensor(n, n + 1, n3, seed);
        let b = rand_tensor(n + 1, n, n3, seed.wrapping_add(1));
        let lhs = t_transpose(&t_product(&a, &b).unwrap());
        let rhs = t_product(&t_transpose(&b), &t_transpose(&a)).unwrap();
        prop_assert!(rel_err(&lhs, &rhs) <= 1e-12);
        prop_assert_eq!(t_transpose(&t_transpose(&a)), a);
    }

    #[test]
    fn trace_and_norm_identities(n in 1usize..7, n3 in 1usize..7, seed: u64) {
        let a = rand_tensor(n, n, n3, seed);
        let first: f64 = (0..n).map(|i| a.get(i, i, 0)).sum();
        prop_assert!((trace(&a).unwrap() - first).abs() <= 1e-10 * (1.0 + first.abs()));
        let aat = t_product(&a, &t_transpose(&a)).unwrap();
        let norm2 = a.frobenius_norm().powi(2);
        prop_assert!((trace(&aat).unwrap() - norm2).abs() <= 1e-10 * norm2);
        prop_assert!(rel_err(&t_product(&a, &identity_tensor(n, n3)).unwrap(), &a) <= 1e-14);
    }

    #[test]
    fn t3b_round_trip(n1 in 1usize..5, n2 in 1usize..5, n3 in 1usize..5, seed: u64) {
        let a = rand_tensor(n1, n2, n3, seed);
        let mut buf = Vec::new();
        write_t3b_to(&mut buf, &a).unwrap();
        prop_assert_eq!(read_t3b_from(&buf[..]).unwrap(), a);
    }

    #[test]
    fn eigen_decomposition_reconstructs(n in 1usize..9, n3 in 1usize..6, seed: u64) {
        let b = rand_tensor(n, n, n3, seed);
        let a = b.add(&t_transpose(&b)).unwrap();
        let e = eig_f_symmetric(&a, EigenOrdering::Magnitude).unwrap();
        let v = &e.eigenslices;
        let rec = t_product(&t_product(v, &e.eigentubes.to_tensor().unwrap()).unwrap(), &t_transpose(v)).unwrap();
        prop_assert!(e.residual <= 1e-8 * a.frobenius_norm());
        prop_assert!(rec.sub(&a).unwrap().frobenius_norm() <= 1e-7 * a.frobenius_norm().max(1.0));
    }

    #[test]
    fn knn_graphs_are_symmetric_laplacians(n in 4usize..14, p in 1usize..4, n3 in 1usize..5, k in 1usize..4, seed: u64) {
        let x = rand_tensor(n, p, n3, seed);
        let g = build_graphs(&x, None, &GraphSpec::knn(k.min(n - 1))).unwrap().graph;
        prop_assert!(t_transpose(&g.w).sub(&g.w).unwrap().frobenius_norm() <= 1e-12);
        prop_assert!(is_laplacian(&g.lap, 1e-10));
        let eigs = transform_eigenvalues(&g.lap).unwrap();
        prop_assert!(eigs.iter().all(|e| e[0] >= -1e-10));
        let fw = to_transform(&g.w);
        for r in 0..n3 {
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(fw.get(i, j, r).norm() > 1e-12, fw.get(j, i, r).norm() > 1e-12);
                }
            }
        }
    }

    #[test]
    fn lme_weights_are_affine(n in 6usize..16, p in 1usize..4, n3 in 1usize..4, k in 2usize..5, seed: u64) {
        let x = rand_tensor(n, p, n3, seed);
        let w = lme_weights(&x, k, 1e-3).unwrap();
        for r in 0..n3 {
            for e in &w.weights[r] {
                prop_assert!((e.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
            }
        }
        let shift = rand_tensor(1, p, 1, seed ^ 7);
        let moved = Tensor3::from_fn(n, p, n3, |i, j, kk| x.get(i, j, kk) + shift.get(0, j, 0));
        let wm = lme_weights(&moved, k, 1e-3).unwrap();
        for r in 0..n3 {
            for i in 0..n {
                prop_assert_eq!(&w.neighbors[r][i], &wm.neighbors[r][i]);
                for (a, b) in w.weights[r][i].iter().zip(&wm.weights[r][i]) {
                    prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
                }
            }
        }
    }
}
