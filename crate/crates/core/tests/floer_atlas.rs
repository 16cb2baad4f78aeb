use floer_core::floer::{
    build_floer, build_full, build_reduced, eigenvalue_table, split_atlas, verify_gr_structure, verify_quotient_bounds,
    verify_ranks, verify_rewriting_degrees, PerturbationProfile, PieceReport,
};

fn assert_all(reps: &[PieceReport]) {
    for rep in reps {
        for c in &rep.checks {
            assert!(c.pass, "g={} k={:?} r={:?}: {} ({:?})", rep.genus, rep.k, rep.r, c.name, c.witness);
        }
    }
}

#[test]
fn unperturbed_reports_pass_through_genus_five() {
    for g in 1..=5 {
        let a = split_atlas(build_floer(g, None, None).unwrap()).unwrap();
        assert_all(&verify_ranks(&a).unwrap());
        assert_all(&verify_gr_structure(&a).unwrap());
        let (reps, patterns) = verify_rewriting_degrees(&a).unwrap();
        assert_all(&reps);
        // At t = 0 the relation is bbar^(d+1) itself.
        assert!(patterns.iter().all(|p| p.e == p.d + 1));
    }
}

#[test]
fn eigenvalue_table_genus_three() {
    // Hand-derived from alpha^3 = 16 alpha, beta = 8 - alpha^2 on Tbar_{2,0} extended one step:
    // r = 0 -> (0, 8), r = +-1 -> (+-4, -8), r = +-2 -> (+-8i, 8).
    let a = split_atlas(build_floer(3, None, None).unwrap()).unwrap();
    let got: Vec<(i32, String, String)> =
        eigenvalue_table(&a).into_iter().map(|(r, x, y)| (r, x.to_string(), y.to_string())).collect();
    let want = [(-2, "-8*i", "8"), (-1, "-4", "-8"), (0, "0", "8"), (1, "4", "-8"), (2, "8*i", "8")];
    let want: Vec<(i32, String, String)> = want.iter().map(|(r, x, y)| (*r, x.to_string(), y.to_string())).collect();
    assert_eq!(got, want);
}

#[test]
fn genus_three_piece_ranks() {
    let a = split_atlas(build_floer(3, None, None).unwrap()).unwrap();
    let reduced: Vec<usize> = a.pieces.iter().filter(|p| p.k == 0).map(|p| p.reduced.dim()).collect();
    assert_eq!(reduced, vec![1, 1, 2, 1, 1]);
    let full: Vec<usize> = a.pieces.iter().filter(|p| p.k == 0).map(|p| p.full.dim()).collect();
    // #{2i + j < gbar} for gbar = 1, 2, 3, 2, 1.
    assert_eq!(full, vec![1, 2, 4, 2, 1]);
    assert_eq!(full.iter().sum::<usize>(), 10);
}

#[test]
fn gamma_slices_genus_four() {
    let a = split_atlas(build_floer(4, None, None).unwrap()).unwrap();
    let reps = verify_gr_structure(&a).unwrap();
    let rep = reps.iter().find(|r| r.k == Some(0) && r.r == Some(1)).unwrap();
    let nil: Vec<Option<usize>> = rep.gr_slices.iter().map(|s| s.nilpotency).collect();
    assert_eq!(nil, vec![Some(2), Some(1), Some(1)]);
}

#[test]
fn t0_specialization_commutes() {
    for g in 1..=4 {
        let p = PerturbationProfile::seeded(g, 4, 11, 0);
        for k in 0..g {
            for (series, direct) in [
                (build_full(g, k, Some(4), Some(&p)).unwrap(), build_full(g, k, None, None).unwrap()),
                (build_reduced(g, k, Some(4), Some(&p)).unwrap(), build_reduced(g, k, None, None).unwrap()),
            ] {
                let s0 = series.algebra.specialize_t0().unwrap();
                let d = &direct.algebra;
                assert_eq!(s0.basis(), d.basis());
                for v in d.ring().vars() {
                    assert_eq!(s0.op(v), d.op(v), "g={g} k={k}");
                }
            }
        }
    }
}

#[test]
fn gamma_quotient_is_the_reduced_ring() {
    // T / gamma T and Tbar both have rank C(g-k+1, 2).
    for g in 1..=4 {
        for k in 0..g {
            let q = floer_core::floer::build_gamma_quotient(g, k, None, None).unwrap();
            let tb = build_reduced(g, k, None, None).unwrap();
            assert_eq!(q.rank().unwrap(), tb.rank().unwrap());
        }
    }
}

#[test]
fn perturbed_reports_match_unperturbed() {
    for g in 1..=4 {
        let base = split_atlas(build_floer(g, None, None).unwrap()).unwrap();
        for index in 0..3 {
            let p = PerturbationProfile::seeded(g, 4, 7, index);
            let a = split_atlas(build_floer(g, Some(4), Some(&p)).unwrap()).unwrap();
            let ranks = verify_ranks(&a).unwrap();
            assert_all(&ranks);
            assert_all(&verify_gr_structure(&a).unwrap());
            assert_all(&verify_rewriting_degrees(&a).unwrap().0);
            let key = |reps: &[PieceReport]| -> Vec<(Option<u32>, Option<i32>, usize)> {
                reps.iter().map(|r| (r.k, r.r, r.rank)).collect()
            };
            assert_eq!(key(&ranks), key(&verify_ranks(&base).unwrap()));
            assert_eq!(eigenvalue_table(&a), eigenvalue_table(&base));
        }
    }
}

#[test]
fn quotient_bounds_through_genus_four() {
    for g in 1..=4 {
        let reps = verify_quotient_bounds(g).unwrap();
        assert_eq!(reps.len(), 2 * g as usize - 1);
        assert_all(&reps);
    }
}
