//! Associated graded modules for a nilpotent filtration, and the rewriting patterns of the
//! local pieces in the basis `bbar^i gamma^j`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Basis, Echelon, SparseMatrix, SparseVec};
use crate::polyring::{QuotientAlgebra, SuperMonomial};
use crate::scalar::{Scalar, TruncatedSeries};

use super::LocalPiece;

/// One slice `f^i V / f^(i+1) V` of an associated graded module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModuleSlice {
    pub index: u32,
    /// Dimension over `Q(i)`.
    pub dim: usize,
    /// Rank over the series ring; equals `dim` without a series variable.
    pub rank: usize,
    /// Whether the slice is generated by one element over the cyclic operator.
    pub cyclic: bool,
    /// Least `n` with `c^n` acting as zero on the slice; `None` if `c` is not nilpotent there.
    pub nilpotency: Option<usize>,
}

/// Inserts `vs` into `e`, keeping the vectors that were new directions.
fn independent(mut e: Echelon, vs: impl Iterator<Item = SparseVec>) -> (Echelon, Vec<SparseVec>) {
    let kept = vs.filter(|v| e.insert(v).is_some()).collect();
    (e, kept)
}

/// `Gr_f V` for the subspace spanned by `space`, with the module structure of `c` on each slice.
///
/// `series` is the multiplication by `t` when the ambient quotient has a series variable; slice
/// ranks are then ranks of free modules, and a non-free slice is a `StructureMismatch`.
pub fn associated_graded(
    space: &[SparseVec],
    ambient: usize,
    f: &SparseMatrix,
    c: &SparseMatrix,
    series: Option<(&SparseMatrix, usize)>,
) -> Result<Vec<ModuleSlice>> {
    // F_i as an echelon form plus an independent set of raw spanning vectors. Raw images stay
    // sparse; echelon rows fill in.
    let mut layers = vec![independent(Echelon::new(ambient), space.iter().cloned())];
    while layers[layers.len() - 1].0.rank() > 0 {
        if layers.len() > ambient + 1 {
            return Err(Error::NotNilpotent("filtration operator is not nilpotent on the subspace".into()));
        }
        let prev = &layers[layers.len() - 1].1;
        let next = independent(Echelon::new(ambient), prev.iter().map(|v| f.apply(v)));
        layers.push(next);
    }
    let mut out = Vec::new();
    for i in 0..layers.len() - 1 {
        let ((top, gens), floor) = (&layers[i], &layers[i + 1].0);
        let dim = top.rank() - floor.rank();
        // c F_i + F_(i+1) has codimension 1 in F_i exactly when the slice is cyclic.
        let mut e = floor.clone();
        for v in gens {
            e.insert(&c.apply(v));
        }
        let cyclic = top.rank() - e.rank() == 1;
        let rank = match series {
            None => dim,
            Some((t, n)) => {
                let mut e = floor.clone();
                for v in gens {
                    e.insert(&t.apply(v));
                }
                let mod_t = top.rank() - e.rank();
                if mod_t * n != dim {
                    return Err(Error::StructureMismatch(format!("slice {i} is not free over the series ring")));
                }
                mod_t
            }
        };
        // F_(i+1) is c-stable (c commutes with f), so c^n acts on the slice with rank
        // non-increasing in n; a step that keeps a nonzero rank means c is not nilpotent there.
        let mut cur = independent(floor.clone(), gens.iter().cloned()).1;
        let mut nilpotency = None;
        for n in 0..=dim {
            if cur.is_empty() {
                nilpotency = Some(n);
                break;
            }
            let next = independent(floor.clone(), cur.iter().map(|v| c.apply(v))).1;
            if next.len() == cur.len() {
                break;
            }
            cur = next;
        }
        out.push(ModuleSlice { index: i as u32, dim, rank, cyclic, nilpotency });
    }
    Ok(out)
}

/// The elements `t^s bbar^i gamma^j e` with `2i + j < gbar` and `s < N`, in that order, where
/// `bbar = beta - beta0` and `e` is the generator of `piece`. Fails unless they form a basis
/// of the piece.
pub fn gamma_beta_basis(
    q: &QuotientAlgebra,
    piece: &LocalPiece,
    beta0: &Scalar,
    gbar: u32,
) -> Result<(Vec<(u32, u32, u32)>, Basis)> {
    let ring = q.ring();
    let beta = q.op(ring.var("beta")?).shift(beta0);
    let gamma = q.op(ring.var("gamma")?);
    let n = ring.series_order().unwrap_or(1) as u32;
    let mut labels = Vec::new();
    let mut vecs = Vec::new();
    for s in 0..n {
        let ts = match ring.series_var() {
            Some(t) => {
                let mut m = SuperMonomial { even: vec![0; ring.n_even()], odd: 0 };
                m.even[t] = s;
                q.apply_monomial(&m, &piece.generator)
            }
            None => piece.generator.clone(),
        };
        let mut bi = ts;
        for i in 0..gbar.div_ceil(2) {
            let mut v = bi.clone();
            for j in 0..gbar - 2 * i {
                labels.push((s, i, j));
                vecs.push(v.clone());
                v = gamma.apply(&v);
            }
            bi = beta.apply(&bi);
        }
    }
    if vecs.len() != piece.dim() {
        return Err(Error::StructureMismatch(format!(
            "{} elements bbar^i gamma^j for a piece of dimension {}",
            vecs.len(),
            piece.dim()
        )));
    }
    let basis = Basis::new(q.dim(), vecs)
        .map_err(|i| Error::StructureMismatch(format!("bbar^i gamma^j element {:?} is dependent", labels[i])))?;
    Ok((labels, basis))
}

/// Coefficients of `bbar^(d+1) e` in the basis `bbar^i gamma^j e`, split into the monic
/// polynomial `P(bbar) = bbar^(d+1) - sum_i c_i0 bbar^i` and the `gamma` part.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PatternReport {
    pub genus: u32,
    pub k: u32,
    pub r: i32,
    pub gbar: u32,
    pub d: u32,
    /// Coefficients `p_0 .. p_d` of `P` below the leading `bbar^(d+1)`.
    pub p_coeffs: Vec<TruncatedSeries>,
    /// Multiplicity of the root `bbar = 0` of `P`.
    pub e: u32,
    /// Nonzero `c_ij`, `j > 0`, with `bbar^(d+1) = P-part + sum c_ij bbar^i gamma^j`.
    pub gamma_coeffs: Vec<(u32, u32, TruncatedSeries)>,
    /// `c_ij = 0` whenever `i + j < e`.
    pub pass: bool,
}

/// The relation `R_k` of the piece written in the `bbar^i gamma^j` basis, checked against the
/// vanishing pattern `c_ij = 0` for `i + j < e`.
pub fn coefficient_pattern(
    q: &QuotientAlgebra,
    piece: &LocalPiece,
    (genus, k, r): (u32, u32, i32),
    beta0: &Scalar,
) -> Result<PatternReport> {
    let gbar = genus - k - r.unsigned_abs();
    let d = (gbar - 1) / 2;
    let n = q.ring().series_order().unwrap_or(1);
    let (labels, basis) = gamma_beta_basis(q, piece, beta0, gbar)?;
    let beta = q.op(q.ring().var("beta")?).shift(beta0);
    let mut w = piece.generator.clone();
    for _ in 0..=d {
        w = beta.apply(&w);
    }
    let coords = basis.coordinates(&w).ok_or_else(|| Error::StructureMismatch("bbar^(d+1) e outside the piece".into()))?;
    let mut table: std::collections::BTreeMap<(u32, u32), Vec<Scalar>> = Default::default();
    for (idx, c) in coords.iter() {
        let (s, i, j) = labels[idx];
        table.entry((i, j)).or_insert_with(|| vec![Scalar::ZERO; n])[s as usize] = c.clone();
    }
    let series = |(i, j): (u32, u32)| {
        TruncatedSeries::from_coeffs(table.get(&(i, j)).cloned().unwrap_or_else(|| vec![Scalar::ZERO; n]), n)
    };
    // P = bbar^(d+1) - sum c_i0 bbar^i, so p_i = -c_i0.
    let p_coeffs: Vec<TruncatedSeries> = (0..=d).map(|i| series((i, 0)).scale(&-Scalar::ONE)).collect();
    let e = p_coeffs.iter().take_while(|p| p.is_zero()).count() as u32;
    let gamma_coeffs: Vec<(u32, u32, TruncatedSeries)> =
        table.keys().filter(|(_, j)| *j > 0).map(|&(i, j)| (i, j, series((i, j)))).filter(|x| !x.2.is_zero()).collect();
    let pass = gamma_coeffs.iter().all(|(i, j, _)| i + j >= e);
    Ok(PatternReport { genus, k, r, gbar, d, p_coeffs, e, gamma_coeffs, pass })
}

/// Support of `bbar^n gamma^m e` in the `t = 0` basis, as `(i, j)` pairs; used for the
/// same-or-higher-degree rewriting check.
pub fn rewrite_support(
    q0: &QuotientAlgebra,
    piece: &LocalPiece,
    beta0: &Scalar,
    (labels, basis): (&[(u32, u32, u32)], &Basis),
    n: u32,
    m: u32,
) -> Result<Vec<(u32, u32)>> {
    let beta = q0.op(q0.ring().var("beta")?).shift(beta0);
    let gamma = q0.op(q0.ring().var("gamma")?);
    let mut w = piece.generator.clone();
    for _ in 0..n {
        w = beta.apply(&w);
    }
    for _ in 0..m {
        w = gamma.apply(&w);
    }
    let coords = basis.coordinates(&w).ok_or_else(|| Error::StructureMismatch("element outside the piece".into()))?;
    Ok(coords.iter().map(|(idx, _)| (labels[idx].1, labels[idx].2)).collect())
}
