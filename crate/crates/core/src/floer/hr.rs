//! The piece `H_r = sum_k Lambda^k_0 (x) R_{g,k,r}` at `t = 0` as an explicit module over
//! `Lambda*(psi_1..psi_2g) (x) C[bbar]`.
//!
//! `psi_j` acts on `w (x) x` by decomposing `psi_j w = u_0 + L u_1` with `u_i` primitive, and
//! sending it to `u_0 (x) pi(x) + u_1 (x) (-gamma/2) x`, where `pi: T_{g,k} -> T_{g,k+1}` is the
//! quotient map and `gamma: T_{g,k} -> T_{g,k-1}` is multiplication. The construction is
//! certified: the `psi_j` anticommute, square to zero, commute with `bbar`, and
//! `-2 sum psi_i psi_(g+i)` equals the internal `gamma`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{primitive_basis, ExteriorElement, LefschetzSolver};
use crate::linalg::{Basis, Echelon, SparseMatrix, SparseVec};
use crate::polyring::{QuotientAlgebra, SuperPolynomial};
use crate::scalar::Scalar;

use super::{alpha0, artinian_split, beta0, build_full, LocalPiece};

/// One summand `Lambda^k_0 (x) R_{g,k,r}`; coordinates are `offset + p * piece_dim + c`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HrBlock {
    pub k: u32,
    pub primitive_dim: usize,
    pub piece_dim: usize,
    pub offset: usize,
}

/// Outcome of one bound check on `H_r`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundCheck {
    pub name: String,
    pub pass: bool,
    /// Number of monomials examined.
    pub checked: usize,
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct HrModule {
    pub genus: u32,
    pub r: i32,
    pub blocks: Vec<HrBlock>,
    dim: usize,
    beta_bar: SparseMatrix,
    gamma: SparseMatrix,
    psi: Vec<SparseMatrix>,
    unit: SparseVec,
}

struct BlockData {
    k: u32,
    q: QuotientAlgebra,
    piece: LocalPiece,
}

impl BlockData {
    fn coords(&self, v: &SparseVec) -> Result<SparseVec> {
        self.piece.basis.coordinates(v).ok_or_else(|| Error::StructureMismatch(format!("image leaves the piece of T_{{g,{}}}", self.k)))
    }

    /// Matrix of `x -> p * x` from this piece to the piece of `to`, via lift and normal form.
    fn map_to(&self, to: &BlockData, p: &SuperPolynomial) -> Result<SparseMatrix> {
        let cols = self
            .piece
            .basis
            .vectors()
            .iter()
            .map(|x| {
                // Both quotients live in structurally equal rings.
                let image = to.q.normal_form(&self.q.lift(x).checked_mul(p)?)?;
                to.coords(&image)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseMatrix::from_columns(to.piece.dim(), cols))
    }

    fn internal(&self, name: &str, shift: &Scalar) -> Result<SparseMatrix> {
        let op = self.q.op_named(name)?.shift(shift);
        let cols = self.piece.basis.vectors().iter().map(|x| self.coords(&op.apply(x))).collect::<Result<Vec<_>>>()?;
        Ok(SparseMatrix::from_columns(self.piece.dim(), cols))
    }
}

fn place(acc: &mut Vec<(usize, Scalar)>, offset: usize, n: usize, prim: &SparseVec, x: &SparseVec) {
    for (p, a) in prim.iter() {
        for (c, b) in x.iter() {
            acc.push((offset + p * n + c, a * b));
        }
    }
}

impl HrModule {
    /// Builds and certifies `H_r` for `|r| <= g - 1`.
    pub fn build(g: u32, r: i32) -> Result<HrModule> {
        if g == 0 || r.unsigned_abs() >= g {
            return Err(Error::OutOfRange(format!("r = {r} outside -(g-1)..=(g-1) for g = {g}")));
        }
        let top = g - r.unsigned_abs();
        let mut data = Vec::new();
        for k in 0..top {
            let q = build_full(g, k, None, None)?.algebra;
            let target = alpha0(r);
            let piece = artinian_split(&q, q.ring().var("alpha")?, None)?
                .into_iter()
                .find(|p| p.eigenvalue == target)
                .ok_or_else(|| Error::StructureMismatch(format!("no alpha-eigenvalue {target} on T_{{{g},{k}}}")))?;
            data.push(BlockData { k, q, piece });
        }
        let mut blocks = Vec::new();
        let mut offset = 0;
        for b in &data {
            let primitive_dim = primitive_basis(g, b.k).len();
            blocks.push(HrBlock { k: b.k, primitive_dim, piece_dim: b.piece.dim(), offset });
            offset += primitive_dim * b.piece.dim();
        }
        let dim = offset;
        let b0 = beta0(r);
        let mut beta_cols = vec![SparseVec::new(); dim];
        let mut gamma_cols = vec![SparseVec::new(); dim];
        for (b, blk) in data.iter().zip(&blocks) {
            let beta = b.internal("beta", &b0)?;
            let gamma = b.internal("gamma", &Scalar::ZERO)?;
            for p in 0..blk.primitive_dim {
                for c in 0..blk.piece_dim {
                    let col = blk.offset + p * blk.piece_dim + c;
                    let shift = |v: &SparseVec| v.remap(|i| Some(blk.offset + p * blk.piece_dim + i));
                    beta_cols[col] = shift(beta.col(c));
                    gamma_cols[col] = shift(gamma.col(c));
                }
            }
        }
        // Transition maps between neighbouring blocks.
        let ring = data[0].q.ring().clone();
        let one = SuperPolynomial::constant(&ring, Scalar::ONE);
        let half_gamma = SuperPolynomial::var(&ring, "gamma")?.scale(&Scalar::ratio(-1, 2));
        let up: Vec<Option<SparseMatrix>> =
            (0..data.len()).map(|i| data.get(i + 1).map(|n| data[i].map_to(n, &one)).transpose()).collect::<Result<_>>()?;
        let down: Vec<Option<SparseMatrix>> = (0..data.len())
            .map(|i| if i == 0 { Ok(None) } else { data[i].map_to(&data[i - 1], &half_gamma).map(Some) })
            .collect::<Result<_>>()?;
        let mut psi = Vec::new();
        for j in 1..=2 * g {
            let pj = ExteriorElement::psi(g, j)?;
            let mut cols = vec![SparseVec::new(); dim];
            for (bi, blk) in blocks.iter().enumerate() {
                let prim = primitive_basis(g, blk.k);
                let solver = LefschetzSolver::get(g, blk.k + 1);
                for (p, w) in prim.iter().enumerate() {
                    let parts = solver.decompose_coords(&pj.wedge(w)?.to_vec(blk.k + 1));
                    for c in 0..blk.piece_dim {
                        let mut acc = Vec::new();
                        for (i, u) in &parts {
                            let (tb, map) = match i {
                                0 => (bi + 1, &up[bi]),
                                1 => (bi.wrapping_sub(1), &down[bi]),
                                _ => return Err(Error::StructureMismatch("psi raised the Lefschetz level by 2".into())),
                            };
                            if let Some(map) = map {
                                let t = &blocks[tb];
                                place(&mut acc, t.offset, t.piece_dim, u, map.col(c));
                            }
                        }
                        cols[blk.offset + p * blk.piece_dim + c] = SparseVec::from_pairs(acc);
                    }
                }
            }
            psi.push(SparseMatrix::from_columns(dim, cols));
        }
        let first = &data[0];
        let e = first.coords(&first.piece.generator)?;
        let m = HrModule {
            genus: g,
            r,
            blocks,
            dim,
            beta_bar: SparseMatrix::from_columns(dim, beta_cols),
            gamma: SparseMatrix::from_columns(dim, gamma_cols),
            psi,
            unit: e,
        };
        m.certify()?;
        Ok(m)
    }

    fn certify(&self) -> Result<()> {
        let bad = |s: String| Err(Error::StructureMismatch(s));
        let n = self.psi.len();
        for i in 0..n {
            if self.psi[i].compose(&self.beta_bar) != self.beta_bar.compose(&self.psi[i]) {
                return bad(format!("psi_{} does not commute with bbar", i + 1));
            }
            for j in i..n {
                let s = self.psi[i].compose(&self.psi[j]).add(&self.psi[j].compose(&self.psi[i]));
                if !s.is_zero() {
                    return bad(format!("psi_{} and psi_{} do not anticommute", i + 1, j + 1));
                }
            }
        }
        let g = self.genus as usize;
        let mut theta = SparseMatrix::zero(self.dim, self.dim);
        for i in 0..g {
            theta = theta.add(&self.psi[i].compose(&self.psi[g + i]));
        }
        if theta.scale(&Scalar::from_int(-2)) != self.gamma {
            return bad("-2 sum psi_i psi_(g+i) differs from gamma".into());
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn beta_bar(&self) -> &SparseMatrix {
        &self.beta_bar
    }

    pub fn psi(&self, j: usize) -> &SparseMatrix {
        &self.psi[j - 1]
    }

    /// `l = g - |r| - 1`.
    pub fn level(&self) -> u32 {
        self.genus - self.r.unsigned_abs() - 1
    }

    /// Whether the monomials `bbar^n psi_S` applied to the unit span `H_r`. When they do, an
    /// element of the (supercommutative) algebra kills `H_r` iff it kills the unit, and maps
    /// `H_r` into a submodule iff it maps the unit there.
    pub fn is_cyclic(&self) -> bool {
        let mut e = Echelon::new(self.dim);
        let mut queue = vec![self.unit.clone()];
        e.insert(&self.unit);
        while let Some(v) = queue.pop() {
            for op in self.psi.iter().chain(std::iter::once(&self.beta_bar)) {
                let w = op.apply(&v);
                if e.insert(&w).is_some() {
                    queue.push(w);
                }
            }
        }
        e.rank() == self.dim
    }

    /// `psi_S e` for every subset `S` of size at most `max`, with `S` as 1-based indices.
    fn psi_orbit(&self, max: usize) -> Vec<(Vec<u32>, SparseVec)> {
        let mut out = vec![(Vec::new(), self.unit.clone())];
        let mut frontier = out.clone();
        for _ in 0..max {
            let mut next = Vec::new();
            for (s, v) in &frontier {
                // Prepend indices below the current minimum so each set appears once.
                let lim = s.first().map_or(self.psi.len() as u32, |&m| m - 1);
                for j in 1..=lim {
                    let w = self.psi(j as usize).apply(v);
                    let mut t = vec![j];
                    t.extend(s);
                    next.push((t, w));
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    fn witness(&self, n: u32, s: &[u32]) -> String {
        let mut out = if n > 0 { format!("bbar^{n}") } else { String::new() };
        for j in s {
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(&format!("psi_{j}"));
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }

    /// Every monomial of degree `> 2l` (with `d(bbar) = 2`, `d(psi) = 1`) acts as zero.
    /// Checks degrees `2l + 1` and `2l + 2`, which divide every higher monomial.
    pub fn check_top_degree(&self) -> BoundCheck {
        let l = self.level() as usize;
        let name = "monomials of degree > 2(g-|r|-1) act as zero".to_string();
        let mut checked = 0;
        for (s, v) in self.psi_orbit((2 * l + 2).min(self.psi.len())) {
            let n = (2 * l + 1).saturating_sub(s.len()).div_ceil(2) as u32;
            let w = (0..n).fold(v, |acc, _| self.beta_bar.apply(&acc));
            checked += 1;
            if !w.is_zero() {
                return BoundCheck { name, pass: false, checked, witness: Some(self.witness(n, &s)) };
            }
        }
        BoundCheck { name, pass: true, checked, witness: None }
    }

    fn ideal(&self, gens: impl Iterator<Item = usize>) -> Echelon {
        let mut e = Echelon::new(self.dim);
        for j in gens {
            for c in self.psi(j).columns() {
                e.insert(c);
            }
        }
        e
    }

    /// `bbar^([l/2] + 1)` maps `H_r` into `(psi_1, ..., psi_2g) H_r`.
    pub fn check_beta_into_psi_ideal(&self) -> BoundCheck {
        let d = self.level() / 2;
        let name = "bbar^(d+1) maps H_r into (psi_1..psi_2g)".to_string();
        let ideal = self.ideal(1..=self.psi.len());
        let w = (0..=d).fold(self.unit.clone(), |acc, _| self.beta_bar.apply(&acc));
        let pass = ideal.contains(&w);
        BoundCheck { name, pass, checked: 1, witness: (!pass).then(|| self.witness(d + 1, &[])) }
    }

    /// Every monomial of degree `l + 1` maps `H_r` into `(psi_1, ..., psi_l) H_r`.
    pub fn check_partial_psi_ideal(&self) -> BoundCheck {
        let l = self.level() as usize;
        let name = "degree l+1 monomials map H_r into (psi_1..psi_l)".to_string();
        let ideal = self.ideal(1..=l);
        let mut checked = 0;
        for (s, v) in self.psi_orbit((l + 1).min(self.psi.len())) {
            if !(l + 1 - s.len()).is_multiple_of(2) {
                continue;
            }
            let n = ((l + 1 - s.len()) / 2) as u32;
            let w = (0..n).fold(v, |acc, _| self.beta_bar.apply(&acc));
            checked += 1;
            if !ideal.contains(&w) {
                return BoundCheck { name, pass: false, checked, witness: Some(self.witness(n, &s)) };
            }
        }
        BoundCheck { name, pass: true, checked, witness: None }
    }

    /// Dimension of `Lambda^k_0 (x) R_{g,k,r}` summed over `k`, from the block data.
    pub fn block_dims(&self) -> Vec<(u32, usize, usize)> {
        self.blocks.iter().map(|b| (b.k, b.primitive_dim, b.piece_dim)).collect()
    }

    /// Basis of `H_r` restricted to the block `k`, as vectors of the module.
    pub fn block_basis(&self, k: u32) -> Option<Basis> {
        let b = self.blocks.iter().find(|b| b.k == k)?;
        let vs = (0..b.primitive_dim * b.piece_dim).map(|i| SparseVec::unit(b.offset + i)).collect();
        Basis::new(self.dim, vs).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_hr_modules() {
        // dim H_r = sum_k dim Lambda^k_0 * rank R_{g,k,r}.
        let h = HrModule::build(2, 0).unwrap();
        assert_eq!(h.dim(), 2 + 4);
        assert!(h.is_cyclic());
        let h = HrModule::build(3, 1).unwrap();
        assert_eq!(h.dim(), 2 + 6);
        assert!(h.check_top_degree().pass);
        assert!(h.check_beta_into_psi_ideal().pass);
        assert!(h.check_partial_psi_ideal().pass);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(HrModule::build(2, 2), Err(Error::OutOfRange(_))));
    }
}
