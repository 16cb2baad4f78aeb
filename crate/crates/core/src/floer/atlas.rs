//! Every `T_{g,k}` and `Tbar_{g,k}` of one genus, their local pieces `R_{g,k,r}`, and the
//! verification reports built on them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::primitive_basis;
use crate::linalg::SparseVec;
use crate::report::Check;
use crate::scalar::Scalar;

use super::{
    alpha0, artinian_split, associated_graded, beta0, binom, build_full, build_reduced, coefficient_pattern,
    expected_full_rank, expected_piece_rank, expected_reduced_piece_rank, expected_reduced_rank, gamma_beta_basis,
    label_of, rewrite_support, standard_basis_claim, three_relations, FloerQuotient, HrModule, LocalPiece,
    ModuleSlice, PatternReport, PerturbationProfile,
};

/// Constant terms of the eigenvalues of `(alpha, beta, gamma)` on a piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eigenvalues {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub gamma: Scalar,
}

/// Report for one piece `R_{g,k,r}`, one ring `T_{g,k}` (`r` absent), or one `H_r` (`k` absent).
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PieceReport {
    pub genus: u32,
    pub k: Option<u32>,
    pub r: Option<i32>,
    /// Rank over the series ring.
    pub rank: usize,
    pub basis: Vec<String>,
    pub relations: Vec<String>,
    pub eigenvalues: Option<Eigenvalues>,
    pub gr_slices: Vec<ModuleSlice>,
    pub checks: Vec<Check>,
}

impl PieceReport {
    fn new(genus: u32, k: Option<u32>, r: Option<i32>, rank: usize) -> Self {
        PieceReport {
            genus,
            k,
            r,
            rank,
            basis: Vec::new(),
            relations: Vec::new(),
            eigenvalues: None,
            gr_slices: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// `T_{g,k}` and `Tbar_{g,k}` for `0 <= k < g` under one perturbation profile.
#[derive(Clone, Debug)]
pub struct FloerRing {
    pub genus: u32,
    pub truncation: Option<usize>,
    pub profile: Option<PerturbationProfile>,
    pub full: Vec<FloerQuotient>,
    pub reduced: Vec<FloerQuotient>,
    /// `dim Lambda^k_0`, indexed by `k`.
    pub primitive_dims: Vec<usize>,
}

/// Builds every component. Fails with `StructureMismatch` if a rank differs from
/// `C(g-k+2, 3)` or `C(g-k+1, 2)`.
pub fn build_floer(g: u32, truncation: Option<usize>, profile: Option<&PerturbationProfile>) -> Result<FloerRing> {
    let mut full = Vec::new();
    let mut reduced = Vec::new();
    for k in 0..g {
        let t = build_full(g, k, truncation, profile)?;
        let tb = build_reduced(g, k, truncation, profile)?;
        for (q, want) in [(&t, expected_full_rank(g, k)), (&tb, expected_reduced_rank(g, k))] {
            let got = q.rank()?;
            if got != want {
                return Err(Error::StructureMismatch(format!(
                    "{:?} quotient at g = {g}, k = {k} has rank {got}, expected {want}",
                    q.presentation
                )));
            }
        }
        full.push(t);
        reduced.push(tb);
    }
    let primitive_dims = (0..g).map(|k| primitive_basis(g, k).len()).collect();
    Ok(FloerRing { genus: g, truncation, profile: profile.cloned(), full, reduced, primitive_dims })
}

/// The pieces `R_{g,k,r}` and `Rbar_{g,k,r}` of one `(k, r)`.
#[derive(Clone, Debug)]
pub struct AtlasPiece {
    pub k: u32,
    pub r: i32,
    pub full: LocalPiece,
    pub reduced: LocalPiece,
}

/// One summand `Lambda^k_0 (x) R_{g,k,r}` of `H_r`, stored by dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HrShape {
    pub k: u32,
    pub primitive_dim: usize,
    pub piece_rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct HrDescriptor {
    pub r: i32,
    pub blocks: Vec<HrShape>,
}

impl HrDescriptor {
    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.primitive_dim * b.piece_rank).sum()
    }
}

#[derive(Clone, Debug)]
pub struct ArtinianAtlas {
    pub ring: FloerRing,
    /// Sorted by `(k, r)`.
    pub pieces: Vec<AtlasPiece>,
    pub h_rings: Vec<HrDescriptor>,
}

impl ArtinianAtlas {
    pub fn genus(&self) -> u32 {
        self.ring.genus
    }

    pub fn piece(&self, k: u32, r: i32) -> Option<&AtlasPiece> {
        self.pieces.iter().find(|p| p.k == k && p.r == r)
    }

    /// `N` for a build truncated at `t^N`, else 1: dimension over `Q(i)` per unit of rank.
    pub fn series_factor(&self) -> usize {
        self.ring.truncation.unwrap_or(1)
    }
}

/// Labels each generalized `alpha`-eigenspace by the `r` with constant term `alpha0(r)`.
fn labelled(q: &FloerQuotient) -> Result<Vec<(i32, LocalPiece)>> {
    let n = q.genus - q.k;
    let alpha = q.algebra.ring().var("alpha")?;
    let mut out = Vec::new();
    for p in artinian_split(&q.algebra, alpha, Some(2 * n as usize - 1))? {
        let r = label_of(&p.eigenvalue).ok_or_else(|| {
            Error::StructureMismatch(format!("alpha-eigenvalue {} on T_{{{},{}}} has no label", p.eigenvalue, q.genus, q.k))
        })?;
        if r.unsigned_abs() >= n {
            return Err(Error::StructureMismatch(format!("label r = {r} outside |r| < {n}")));
        }
        out.push((r, p));
    }
    out.sort_by_key(|(r, _)| *r);
    Ok(out)
}

/// Splits every component by `alpha` and pairs the full and reduced pieces.
pub fn split_atlas(f: FloerRing) -> Result<ArtinianAtlas> {
    let g = f.genus;
    let mut pieces = Vec::new();
    for k in 0..g {
        let full = labelled(&f.full[k as usize])?;
        let reduced = labelled(&f.reduced[k as usize])?;
        for ((r, a), (rb, b)) in full.into_iter().zip(reduced) {
            if r != rb {
                return Err(Error::StructureMismatch(format!("labels {r} and {rb} disagree at k = {k}")));
            }
            pieces.push(AtlasPiece { k, r, full: a, reduced: b });
        }
    }
    let factor = f.truncation.unwrap_or(1);
    let h_rings = (-(g as i32 - 1)..g as i32)
        .map(|r| HrDescriptor {
            r,
            blocks: pieces
                .iter()
                .filter(|p| p.r == r)
                .map(|p| HrShape { k: p.k, primitive_dim: f.primitive_dims[p.k as usize], piece_rank: p.full.dim() / factor })
                .collect(),
        })
        .collect();
    Ok(ArtinianAtlas { ring: f, pieces, h_rings })
}

fn piece_eigenvalues(p: &LocalPiece) -> Eigenvalues {
    Eigenvalues { alpha: p.even_eigenvalues[0].clone(), beta: p.even_eigenvalues[1].clone(), gamma: p.even_eigenvalues[2].clone() }
}

fn relations_of(a: &ArtinianAtlas, k: u32) -> Result<Vec<String>> {
    let q = &a.ring.full[k as usize].algebra;
    Ok(three_relations(q.ring(), a.genus(), a.genus() - k, a.ring.profile.as_ref())?.iter().map(|p| p.to_string()).collect())
}

fn gbar(g: u32, k: u32, r: i32) -> u32 {
    g - k - r.unsigned_abs()
}

fn basis_label(s: u32, i: u32, j: u32) -> String {
    let mut parts = Vec::new();
    if s > 0 {
        parts.push(format!("t^{s}"));
    }
    if i > 0 {
        parts.push(format!("bbar^{i}"));
    }
    if j > 0 {
        parts.push(format!("gamma^{j}"));
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Ranks, standard bases, eigenvalue labels and piece ranks for every `(k, r)`.
///
/// Per component: `rank T = C(g-k+2, 3)`, `rank Tbar = C(g-k+1, 2)`, the monomials
/// `alpha^a beta^b gamma^c` with `a + b + c < g - k` form a basis at `t = 0` and so do
/// `alpha^a beta^b`, `a + b < g - k` for `Tbar`, `gamma^(g-k) = 0`.
/// Per piece: the eigenvalue constant terms are `(alpha0(r), beta0(r), 0)` on both presentations,
/// `rank R = #{2i + j < gbar}` and `rank Rbar = [(gbar - 1)/2] + 1`.
pub fn verify_ranks(a: &ArtinianAtlas) -> Result<Vec<PieceReport>> {
    let g = a.genus();
    let factor = a.series_factor();
    let mut out = Vec::new();
    for k in 0..g {
        let t = &a.ring.full[k as usize];
        let tb = &a.ring.reduced[k as usize];
        let mut rep = PieceReport::new(g, Some(k), None, t.rank()?);
        rep.basis = t.algebra.specialize_t0()?.format_basis();
        rep.relations = relations_of(a, k)?;
        let want = expected_full_rank(g, k);
        rep.checks.push(Check::new("rank T = C(g-k+2,3)", rep.rank == want, || format!("rank {} != {want}", rep.rank)));
        let (got, want) = (tb.rank()?, expected_reduced_rank(g, k));
        rep.checks.push(Check::new("rank Tbar = C(g-k+1,2)", got == want, || format!("rank {got} != {want}")));
        let std = standard_basis_claim(t)?;
        rep.checks.push(Check::new("alpha^a beta^b gamma^c, a+b+c < g-k is a basis", std, || "dependent or too few".into()));
        let std = standard_basis_claim(tb)?;
        rep.checks.push(Check::new("alpha^a beta^b, a+b < g-k is a basis of Tbar", std, || "dependent or too few".into()));
        let q = &t.algebra;
        let gamma = q.op(q.ring().var("gamma")?);
        let top = (0..g - k).fold(q.unit().clone(), |v, _| gamma.apply(&v));
        rep.checks.push(Check::new("gamma^(g-k) = 0", top.is_zero(), || "gamma^(g-k) != 0".into()));
        out.push(rep);
    }
    for p in &a.pieces {
        let mut rep = PieceReport::new(g, Some(p.k), Some(p.r), p.full.dim() / factor);
        let ev = piece_eigenvalues(&p.full);
        let want = Eigenvalues { alpha: alpha0(p.r), beta: beta0(p.r), gamma: Scalar::ZERO };
        let evb = &p.reduced.even_eigenvalues;
        rep.checks.push(Check::new("eigenvalues (alpha, beta, gamma) = (alpha0(r), beta0(r), 0) mod t", ev == want, || {
            format!("({}, {}, {})", ev.alpha, ev.beta, ev.gamma)
        }));
        rep.checks.push(Check::new(
            "reduced eigenvalues (alpha, beta) = (alpha0(r), beta0(r)) mod t",
            evb[0] == want.alpha && evb[1] == want.beta,
            || format!("({}, {})", evb[0], evb[1]),
        ));
        rep.eigenvalues = Some(ev);
        let want = expected_piece_rank(g, p.k, p.r);
        rep.checks.push(Check::new("rank R = #{2i+j < gbar}", rep.rank * factor == p.full.dim() && rep.rank == want, || {
            format!("dimension {} for rank {want}", p.full.dim())
        }));
        let (dim, want) = (p.reduced.dim(), expected_reduced_piece_rank(g, p.k, p.r));
        rep.checks.push(Check::new("rank Rbar = [(gbar-1)/2]+1", dim == want * factor, || format!("dimension {dim} for rank {want}")));
        out.push(rep);
    }
    Ok(out)
}

/// `Gr_gamma` of every piece with the `bbar`-module structure of each slice, and `Gr_gamma T_{g,k}`.
///
/// Slice `i` of `Gr_gamma R_{g,k,r}` must have rank `[(gbar-i-1)/2]+1` and, at `t = 0`, be cyclic
/// over `bbar` with exactly that nilpotency index; slice `i` of `Gr_gamma T_{g,k}` has rank
/// `C(g-k-i+1, 2)`.
pub fn verify_gr_structure(a: &ArtinianAtlas) -> Result<Vec<PieceReport>> {
    let g = a.genus();
    let factor = a.series_factor();
    let mut out = Vec::new();
    for k in 0..g {
        let q = &a.ring.full[k as usize].algebra;
        let ring = q.ring();
        let gamma = q.op(ring.var("gamma")?);
        let beta = q.op(ring.var("beta")?);
        let series = match (ring.series_var(), ring.series_order()) {
            (Some(t), Some(n)) => Some((q.op(ring.var(&ring.even_names()[t])?), n)),
            _ => None,
        };
        let all: Vec<SparseVec> = (0..q.dim()).map(SparseVec::unit).collect();
        let slices = associated_graded(&all, q.dim(), gamma, beta, series)?;
        let mut rep = PieceReport::new(g, Some(k), None, q.dim() / factor);
        let n = g - k;
        let ranks: Vec<usize> = slices.iter().map(|s| s.rank).collect();
        let want: Vec<usize> = (0..n).map(|i| binom((n - i + 1) as i64, 2)).collect();
        rep.checks.push(Check::new("Gr_gamma T slice ranks C(g-k-i+1,2)", ranks == want, || format!("{ranks:?} != {want:?}")));
        rep.gr_slices = slices;
        out.push(rep);
        for p in a.pieces.iter().filter(|p| p.k == k) {
            let b0 = beta0(p.r);
            let bbar = beta.shift(&b0);
            let space = p.full.basis.vectors();
            let mut rep = PieceReport::new(g, Some(k), Some(p.r), p.full.dim() / factor);
            rep.eigenvalues = Some(piece_eigenvalues(&p.full));
            let slices = associated_graded(space, q.dim(), gamma, &bbar, series)?;
            let gb = gbar(g, k, p.r);
            let want: Vec<usize> = (0..gb).map(|i| ((gb - i - 1) / 2 + 1) as usize).collect();
            let ranks: Vec<usize> = slices.iter().map(|s| s.rank).collect();
            rep.checks.push(Check::new("Gr_gamma R slice ranks [(gbar-i-1)/2]+1", ranks == want, || {
                format!("{ranks:?} != {want:?}")
            }));
            if series.is_none() {
                let nil: Vec<Option<usize>> = slices.iter().map(|s| s.nilpotency).collect();
                let want_nil: Vec<Option<usize>> = want.iter().map(|&w| Some(w)).collect();
                rep.checks.push(Check::new("bbar nilpotency on slice i = [(gbar-i-1)/2]+1", nil == want_nil, || {
                    format!("{nil:?} != {want_nil:?}")
                }));
                let bad = slices.iter().find(|s| !s.cyclic).map(|s| s.index);
                rep.checks.push(Check::new("every slice is cyclic over bbar", bad.is_none(), || format!("slice {}", bad.unwrap())));
            }
            rep.gr_slices = slices;
            out.push(rep);
        }
    }
    Ok(out)
}

fn monomial_label(n: u32, m: u32) -> String {
    basis_label(0, n, m)
}

/// Rewriting in the basis `bbar^i gamma^j`, `2i + j < gbar`, of every piece.
///
/// At `t = 0`: for `2n + m >= gbar`, `bbar^n gamma^m e` is supported on `bbar^i gamma^j` with
/// `i + j >= n + m` and `j >= m`, and vanishes once `n + m >= gbar`. On every build: in the
/// relation `bbar^(d+1) e = P-part + sum c_ij bbar^i gamma^j e`, `c_ij = 0` when `i + j < e`,
/// `e` the multiplicity of the root `bbar = 0` of `P`.
pub fn verify_rewriting_degrees(a: &ArtinianAtlas) -> Result<(Vec<PieceReport>, Vec<PatternReport>)> {
    let g = a.genus();
    let factor = a.series_factor();
    let mut reports = Vec::new();
    let mut patterns = Vec::new();
    for p in &a.pieces {
        let q = &a.ring.full[p.k as usize].algebra;
        let b0 = beta0(p.r);
        let gb = gbar(g, p.k, p.r);
        let mut rep = PieceReport::new(g, Some(p.k), Some(p.r), p.full.dim() / factor);
        rep.eigenvalues = Some(piece_eigenvalues(&p.full));
        let (labels, basis) = gamma_beta_basis(q, &p.full, &b0, gb)?;
        rep.basis = labels.iter().map(|&(s, i, j)| basis_label(s, i, j)).collect();
        if a.ring.truncation.is_none() {
            let mut support_bad = None;
            let mut nil_bad = None;
            for n in 0..=gb {
                for m in 0..=gb {
                    if 2 * n + m < gb {
                        continue;
                    }
                    let support = rewrite_support(q, &p.full, &b0, (&labels, &basis), n, m)?;
                    if support_bad.is_none() && support.iter().any(|&(i, j)| i + j < n + m || j < m) {
                        support_bad = Some(format!("{} -> {support:?}", monomial_label(n, m)));
                    }
                    if nil_bad.is_none() && n + m >= gb && !support.is_empty() {
                        nil_bad = Some(monomial_label(n, m));
                    }
                }
            }
            rep.checks.push(Check::new(
                "bbar^n gamma^m (2n+m >= gbar) rewrites into i+j >= n+m, j >= m",
                support_bad.is_none(),
                || support_bad.clone().unwrap(),
            ));
            rep.checks.push(Check::new("bbar^n gamma^m = 0 when n+m >= gbar", nil_bad.is_none(), || nil_bad.clone().unwrap()));
        }
        let pattern = coefficient_pattern(q, &p.full, (g, p.k, p.r), &b0)?;
        rep.checks.push(Check::new("c_ij = 0 for i+j < e in bbar^(d+1)", pattern.pass, || {
            format!("e = {}, gamma terms {:?}", pattern.e, pattern.gamma_coeffs.iter().map(|c| (c.0, c.1)).collect::<Vec<_>>())
        }));
        patterns.push(pattern);
        reports.push(rep);
    }
    Ok((reports, patterns))
}

/// The three bounds on `H_r`, `|r| < g`, at `t = 0`: top-degree vanishing above `2(g-|r|-1)`,
/// `bbar^([l/2]+1) H_r` inside `(psi_1..psi_2g)`, and degree `l+1` monomials mapping into
/// `(psi_1..psi_l)`. `H_r` is materialized as a module, which is practical up to genus 5.
pub fn verify_quotient_bounds(g: u32) -> Result<Vec<PieceReport>> {
    let mut out = Vec::new();
    for r in -(g as i32 - 1)..g as i32 {
        let h = HrModule::build(g, r)?;
        let mut rep = PieceReport::new(g, None, Some(r), h.dim());
        rep.basis = h
            .block_dims()
            .iter()
            .map(|(k, p, n)| format!("Lambda^{k}_0 (x) R_{{{g},{k},{r}}}: {p} x {n}"))
            .collect();
        rep.checks.push(Check::new("H_r is cyclic over bbar and psi", h.is_cyclic(), || "unit does not generate".into()));
        for b in [h.check_top_degree(), h.check_beta_into_psi_ideal(), h.check_partial_psi_ideal()] {
            rep.checks.push(Check { name: b.name, pass: b.pass, witness: b.witness });
        }
        out.push(rep);
    }
    Ok(out)
}

/// `Tbar_{g,0}` eigenvalue constant terms `(alpha, beta)` in label order.
pub fn eigenvalue_table(a: &ArtinianAtlas) -> Vec<(i32, Scalar, Scalar)> {
    a.pieces
        .iter()
        .filter(|p| p.k == 0)
        .map(|p| (p.r, p.reduced.even_eigenvalues[0].clone(), p.reduced.even_eigenvalues[1].clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_one_is_a_point() {
        let a = split_atlas(build_floer(1, None, None).unwrap()).unwrap();
        assert_eq!(a.pieces.len(), 1);
        assert_eq!(a.h_rings[0].rank(), 1);
        for rep in verify_ranks(&a).unwrap() {
            assert!(rep.pass(), "{rep:?}");
        }
    }

    #[test]
    fn genus_three_gr() {
        let a = split_atlas(build_floer(3, None, None).unwrap()).unwrap();
        let reps = verify_gr_structure(&a).unwrap();
        assert!(reps.iter().all(|r| r.pass()));
        let t30 = &reps[0];
        assert_eq!(t30.gr_slices.iter().map(|s| s.rank).collect::<Vec<_>>(), vec![6, 3, 1]);
    }
}
