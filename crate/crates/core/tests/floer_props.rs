use floer_core::adjunct::{check_thm_a, check_thm_b, reduce, AdjunctionCase, Status};
use floer_core::floer::{
    associated_graded, build_floer, eigenvalue_table, split_atlas, verify_ranks, ArtinianAtlas, PerturbationProfile,
};
use floer_core::linalg::{SparseMatrix, SparseVec};
use proptest::prelude::*;

fn perturbed(g: u32, n: usize, seed: u64, index: u64) -> ArtinianAtlas {
    let p = PerturbationProfile::seeded(g, n, seed, index);
    split_atlas(build_floer(g, Some(n), Some(&p)).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pieces_are_a_complete_orthogonal_split(g in 1u32..=3, n in 2usize..=4, seed: u64, index in 0u64..1000) {
        let a = perturbed(g, n, seed, index);
        for k in 0..g {
            let q = &a.ring.full[k as usize].algebra;
            let ops: Vec<&SparseMatrix> = q.ring().vars().map(|v| q.op(v)).collect();
            for x in &ops {
                for y in &ops {
                    prop_assert_eq!(x.compose(y), y.compose(x));
                }
            }
            let pieces: Vec<_> = a.pieces.iter().filter(|p| p.k == k).map(|p| &p.full).collect();
            let proj: Vec<SparseMatrix> = pieces.iter().map(|p| p.projector(q).unwrap()).collect();
            let mut sum = SparseMatrix::zero(q.dim(), q.dim());
            for (i, p) in proj.iter().enumerate() {
                prop_assert_eq!(p.compose(p), p.clone());
                for (j, o) in proj.iter().enumerate() {
                    if i != j {
                        prop_assert!(p.compose(o).is_zero());
                    }
                }
                sum = sum.add(p);
            }
            prop_assert_eq!(sum, SparseMatrix::identity(q.dim()));
            for piece in &pieces {
                for v in piece.basis.vectors() {
                    for op in &ops {
                        prop_assert!(piece.contains(&op.apply(v)));
                    }
                }
            }
        }
    }

    #[test]
    fn ranks_and_eigenvalues_ignore_the_profile(g in 1u32..=3, seed: u64, index in 0u64..1000) {
        let a = perturbed(g, 3, seed, index);
        let base = split_atlas(build_floer(g, None, None).unwrap()).unwrap();
        let key = |a: &ArtinianAtlas| verify_ranks(a).unwrap().iter().map(|r| (r.k, r.r, r.rank, r.pass())).collect::<Vec<_>>();
        prop_assert_eq!(key(&a), key(&base));
        prop_assert!(key(&a).iter().all(|x| x.3));
        prop_assert_eq!(eigenvalue_table(&a), eigenvalue_table(&base));
    }

    #[test]
    fn graded_slices_add_up(g in 1u32..=3, seed: u64, index in 0u64..1000) {
        let a = perturbed(g, 2, seed, index);
        for k in 0..g {
            let q = &a.ring.full[k as usize].algebra;
            let all: Vec<SparseVec> = (0..q.dim()).map(SparseVec::unit).collect();
            let gamma = q.op_named("gamma").unwrap();
            let beta = q.op_named("beta").unwrap();
            let slices = associated_graded(&all, q.dim(), gamma, beta, None).unwrap();
            prop_assert_eq!(slices.iter().map(|s| s.dim).sum::<usize>(), q.dim());
        }
    }

    #[test]
    fn builds_are_deterministic(g in 1u32..=3, seed: u64, index in 0u64..1000) {
        let (x, y) = (perturbed(g, 2, seed, index), perturbed(g, 2, seed, index));
        for k in 0..g as usize {
            let (p, q) = (&x.ring.full[k].algebra, &y.ring.full[k].algebra);
            prop_assert_eq!(p.basis(), q.basis());
            for v in p.ring().vars() {
                prop_assert_eq!(p.op(v), q.op(v));
            }
        }
    }

    #[test]
    fn adjunction_beyond_the_sweep(g in 1u32..=40, s in 0i64..=60, k in -80i64..=80, db in 0u32..=80) {
        let c = AdjunctionCase { d_b: Some(db), ..AdjunctionCase::new(g, s, true, k) };
        let (red, _) = reduce(&c).unwrap();
        prop_assert_eq!(red.k_dot_sigma.abs() + red.self_int, k.abs() + s);
        let a = check_thm_a(&c).status;
        prop_assert_eq!(a == Status::Pass, k.abs() + s + db as i64 <= 2 * g as i64 - 2);
        let more = AdjunctionCase { d_b: Some(db + 1), ..c.clone() };
        prop_assert!(!(a == Status::Fail && check_thm_a(&more).status == Status::Pass));
        if db % 2 == 0 {
            let b = AdjunctionCase { d_k: Some(db / 2), b1_zero: true, ..c.clone() };
            prop_assert!(check_thm_b(&b).status != Status::Pass || a == Status::Pass);
        }
    }
}
