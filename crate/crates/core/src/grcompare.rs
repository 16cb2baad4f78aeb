//! `Gr_gamma H_r` against `Gr_theta H*(s^(g-|r|-1) Sigma)` as bigraded block data.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::primitive_dim;
use crate::floer::{associated_graded, beta0, ArtinianAtlas, ModuleSlice};
use crate::sympow::SymmetricProductRing;

/// One slice `f^i M / f^(i+1) M` of a multiplicity space, as a module over the cyclic generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProfileSlice {
    pub index: u32,
    pub dim: usize,
    pub nilpotency: Option<usize>,
    pub cyclic: bool,
}

impl From<&ModuleSlice> for ProfileSlice {
    fn from(s: &ModuleSlice) -> Self {
        ProfileSlice { index: s.index, dim: s.dim, nilpotency: s.nilpotency, cyclic: s.cyclic }
    }
}

/// The `Lambda^k_0`-isotypic part `Lambda^k_0 (x) M_k`, with `Gr M_k` given by the slices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProfileBlock {
    pub k: u32,
    pub primitive_dim: usize,
    pub slices: Vec<ProfileSlice>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GradedProfile {
    pub source: String,
    pub genus: u32,
    /// Dimension of the whole object, computed from its own construction.
    pub total_dim: usize,
    pub blocks: Vec<ProfileBlock>,
}

impl GradedProfile {
    /// `sum_k dim Lambda^k_0 * sum_i dim slice_i`.
    pub fn block_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.primitive_dim * b.slices.iter().map(|s| s.dim).sum::<usize>()).sum()
    }
}

/// `Gr_gamma H_r = sum_k Lambda^k_0 (x) Gr_gamma R_{g,k,r}` with `bbar` acting on each slice.
/// Needs an atlas built at `t = 0`.
pub fn profile_floer(a: &ArtinianAtlas, r: i32) -> Result<GradedProfile> {
    if a.ring.truncation.is_some() {
        return Err(Error::InvalidInput("profiles are taken at t = 0".into()));
    }
    let g = a.genus();
    if r.unsigned_abs() >= g {
        return Err(Error::OutOfRange(format!("r = {r} outside |r| < {g}")));
    }
    let mut blocks = Vec::new();
    for p in a.pieces.iter().filter(|p| p.r == r) {
        let q = &a.ring.full[p.k as usize].algebra;
        let gamma = q.op_named("gamma")?;
        let bbar = q.op_named("beta")?.shift(&beta0(r));
        let slices = associated_graded(p.full.basis.vectors(), q.dim(), gamma, &bbar, None)?;
        blocks.push(ProfileBlock {
            k: p.k,
            primitive_dim: a.ring.primitive_dims[p.k as usize],
            slices: slices.iter().map(ProfileSlice::from).collect(),
        });
    }
    let total_dim = a.h_rings.iter().find(|h| h.r == r).map_or(0, |h| h.rank());
    Ok(GradedProfile { source: format!("Gr_gamma H_{r}"), genus: g, total_dim, blocks })
}

/// `Gr_theta H*(s^d Sigma) = sum_k Lambda^k_0 (x) Gr_theta M_k`, `M_k` the highest-weight
/// multiplicity space, with `eta` acting on each slice.
pub fn profile_sympow(s: &SymmetricProductRing) -> Result<GradedProfile> {
    let mut blocks = Vec::new();
    for blk in s.highest_weight_blocks() {
        if blk.vectors.is_empty() {
            continue;
        }
        let slices = s.theta_slices(&blk)?;
        blocks.push(ProfileBlock {
            k: blk.k,
            primitive_dim: primitive_dim(s.genus, blk.k),
            slices: slices.iter().map(ProfileSlice::from).collect(),
        });
    }
    Ok(GradedProfile { source: format!("Gr_theta H*(s^{} Sigma)", s.d), genus: s.genus, total_dim: s.dim(), blocks })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub equal: bool,
    pub witness: Option<String>,
}

/// Equality as block data: same total dimension, and per `k` the same `Lambda^k_0` and the
/// same slices with the same nilpotency indices. Source labels are ignored.
pub fn compare(p: &GradedProfile, q: &GradedProfile) -> Comparison {
    let fail = |w: String| Comparison { equal: false, witness: Some(w) };
    if p.genus != q.genus {
        return fail(format!("genus {} vs {}", p.genus, q.genus));
    }
    if p.total_dim != q.total_dim {
        return fail(format!("total dimension {} vs {}", p.total_dim, q.total_dim));
    }
    if p.blocks.len() != q.blocks.len() {
        return fail(format!("{} blocks vs {}", p.blocks.len(), q.blocks.len()));
    }
    for (a, b) in p.blocks.iter().zip(&q.blocks) {
        if a != b {
            return fail(format!("block k = {}: {:?} vs block k = {}: {:?}", a.k, a.slices, b.k, b.slices));
        }
    }
    Comparison { equal: true, witness: None }
}

/// Expected profile from the bracket formula: block `k` of `H_r` (or of `s^d Sigma` with
/// `d = g - |r| - 1`) has slices `i = 0..=d-k` of dimension and nilpotency `[(d-k-i)/2] + 1`.
pub fn formula_profile(d: u32) -> Vec<(u32, Vec<usize>)> {
    (0..=d).map(|k| (k, (0..=d - k).map(|i| ((d - k - i) / 2 + 1) as usize).collect())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floer::{build_floer, split_atlas};
    use crate::sympow::macdonald_ideal;

    #[test]
    fn genus_two_r0_matches_surface() {
        let a = split_atlas(build_floer(2, None, None).unwrap()).unwrap();
        let p = profile_floer(&a, 0).unwrap();
        let q = profile_sympow(&macdonald_ideal(2, 1).unwrap()).unwrap();
        assert!(compare(&p, &q).equal, "{p:?}\n{q:?}");
        assert_eq!(p.total_dim, 6);
    }

    #[test]
    fn corrupted_profile_is_rejected() {
        let a = split_atlas(build_floer(3, None, None).unwrap()).unwrap();
        let p = profile_floer(&a, 0).unwrap();
        let mut bad = p.clone();
        bad.blocks[0].slices[0].nilpotency = Some(7);
        assert!(compare(&p, &p).equal);
        assert!(!compare(&p, &bad).equal);
    }
}
