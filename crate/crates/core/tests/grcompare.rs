use std::time::Instant;

use floer_core::floer::{build_floer, split_atlas};
use floer_core::grcompare::{compare, formula_profile, profile_floer, profile_sympow, GradedProfile};
use floer_core::sympow::macdonald_ideal;

fn shape(p: &GradedProfile) -> Vec<(u32, Vec<usize>)> {
    p.blocks.iter().map(|b| (b.k, b.slices.iter().map(|s| s.nilpotency.unwrap()).collect())).collect()
}

#[test]
fn hom_symm_through_genus_five() {
    let start = Instant::now();
    for g in 1..=5u32 {
        let a = split_atlas(build_floer(g, None, None).unwrap()).unwrap();
        let sym: Vec<GradedProfile> = (0..g).map(|d| profile_sympow(&macdonald_ideal(g, d).unwrap()).unwrap()).collect();
        for r in -(g as i32 - 1)..g as i32 {
            let d = g - r.unsigned_abs() - 1;
            let p = profile_floer(&a, r).unwrap();
            let q = &sym[d as usize];
            let c = compare(&p, q);
            assert!(c.equal, "g={g} r={r}: {:?}", c.witness);
            assert_eq!(shape(&p), formula_profile(d));
            assert_eq!(p.total_dim, p.block_dim());
            assert!(p.blocks.iter().all(|b| b.slices.iter().all(|s| s.cyclic && Some(s.dim) == s.nilpotency)));
        }
    }
    eprintln!("hom-symm g <= 5: {:?}", start.elapsed());
}

#[test]
fn worked_profiles() {
    // g = 3, r = 0, k = 0: indices (2, 1, 1); s^4 Sigma_5, k = 1: (2, 2, 1, 1).
    assert_eq!(formula_profile(2)[0], (0, vec![2, 1, 1]));
    assert_eq!(formula_profile(4)[1], (1, vec![2, 2, 1, 1]));
    let a = split_atlas(build_floer(4, None, None).unwrap()).unwrap();
    let p = profile_floer(&a, 3).unwrap();
    assert_eq!(shape(&p), vec![(0, vec![1])]);
}
