//! Artinian decomposition of a commutative quotient into local pieces.

use crate::error::{Error, Result};
use crate::linalg::{krylov_minpoly, Basis, Echelon, SparseMatrix, SparseVec, UniPoly};
use crate::polyring::{QuotientAlgebra, Var};
use crate::scalar::Scalar;

/// Generalized eigenspace of the splitting operator: the ideal generated by `generator`.
#[derive(Clone, Debug)]
pub struct LocalPiece {
    /// Constant term of the eigenvalue of the splitting operator.
    pub eigenvalue: Scalar,
    /// Constant-term eigenvalue of every even variable (in ring order) on this piece.
    pub even_eigenvalues: Vec<Scalar>,
    /// Unit multiple of the piece's idempotent, congruent to it mod `t`; without a series
    /// variable it is the idempotent.
    pub generator: SparseVec,
    /// Basis `m w` of the piece, `w` the generator and `m` running over `monomials`.
    pub basis: Basis,
    /// Indices of the quotient's basis monomials `t^j s` that give the piece basis.
    pub monomials: Vec<usize>,
    /// Dimension of the piece at `t = 0`.
    pub dim_t0: usize,
    /// Nilpotency index of `op - eigenvalue` on the piece at `t = 0`.
    pub nilpotency_t0: usize,
}

impl LocalPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.basis.contains(v)
    }

    /// The idempotent `e`: the element of the piece with `e w = w`, which exists and is
    /// unique because `w` is a unit of the piece.
    pub fn idempotent(&self, q: &QuotientAlgebra) -> Result<SparseVec> {
        let w = &self.generator;
        let w2 = q.mul(w, w);
        if w2 == *w {
            return Ok(w.clone());
        }
        let images = q.basis_images(&w2);
        let times_w: Vec<SparseVec> = self.monomials.iter().map(|&i| images[i].clone()).collect();
        let solve = Basis::new(q.dim(), times_w)
            .map_err(|_| Error::StructureMismatch("generator is not a unit of its piece".into()))?;
        let x = solve.coordinates(w).ok_or_else(|| Error::StructureMismatch("piece has no unit".into()))?;
        Ok(self.basis.combine(&x))
    }

    /// Matrix of the projector onto this piece.
    pub fn projector(&self, q: &QuotientAlgebra) -> Result<SparseMatrix> {
        let e = self.idempotent(q)?;
        Ok(SparseMatrix::from_columns(q.dim(), q.basis_images(&e)))
    }
}

/// Splits a commutative quotient by the generalized eigenspaces of a variable.
///
/// Eigenvalues come from the `t = 0` characteristic polynomial, whose CRT idempotents
/// `e0` split the `t = 0` quotient. Placing `e0` in the `t^0` coordinates gives an element
/// congruent to the idempotent mod `t`; its `N`-th power `w` lies in the generalized
/// eigenspace (checked), so it is a unit multiple of the idempotent and `Q w` is the piece. With `expected`, fails with
/// `EigenvalueCollision` when fewer distinct constant terms appear.
pub fn artinian_split(q: &QuotientAlgebra, op: Var, expected: Option<usize>) -> Result<Vec<LocalPiece>> {
    let Var::Even(name_idx) = op else {
        return Err(Error::InvalidInput("can only split by an even variable".into()));
    };
    let q0 = q.specialize_t0()?;
    if q0.dim() == 0 {
        return Ok(Vec::new());
    }
    let m0 = q0.op(op);
    let chi = m0.to_dense().charpoly();
    let roots = chi.roots();
    let total: usize = roots.iter().map(|r| r.1).sum();
    if total != q0.dim() {
        return Err(Error::NotSplit(format!("characteristic polynomial {:?} has only {} roots in Q(i)", chi.coeffs(), total)));
    }
    if let Some(n) = expected {
        if roots.len() < n {
            return Err(Error::EigenvalueCollision(format!("expected {n} distinct eigenvalues, found {}", roots.len())));
        }
    }
    let mu0 = krylov_minpoly(m0, q0.unit());
    let m_full = q.op(op);
    let ring = q.ring();
    let lifts = ring.series_order().unwrap_or(1);
    // Position of t^j s in the full basis, for s in the t = 0 basis.
    let lift_index = |s: usize, j: usize| -> usize {
        match ring.series_var() {
            None => s,
            Some(t) => {
                let mut m = q0.basis()[s].clone();
                m.even.insert(t, j as u32);
                q.index_of(&m).expect("product basis")
            }
        }
    };
    let mut pieces = Vec::new();
    let mut covered = 0;
    for (z, _) in &roots {
        let fz = UniPoly::linear(z).pow(mu0.root_multiplicity(z) as u32);
        let cof = mu0.divrem(&fz).0;
        // u * cof = 1 mod fz.
        let (g, u, _) = cof.xgcd(&fz);
        debug_assert!(g == UniPoly::one());
        let crt = u.mul(&cof).rem(&mu0);

        // t = 0: the CRT polynomial is the idempotent.
        let idem0 = crt.apply(m0, q0.unit());
        let mut ech0 = Echelon::new(q0.dim());
        let mut chosen = Vec::new();
        for (i, v) in q0.basis_images(&idem0).iter().enumerate() {
            if ech0.insert(v).is_some() {
                chosen.push(i);
            }
        }
        let dim_t0 = chosen.len();
        let mut even_eigenvalues = Vec::new();
        for i in 0..q0.ring().n_even() {
            even_eigenvalues.push(piece_eigenvalue(&q0, i, &idem0, dim_t0)?);
        }
        debug_assert!(even_eigenvalues[name_idx] == *z);
        let shifted = m0.shift(z);
        let mut nilpotency_t0 = 0;
        let mut cur = idem0.clone();
        // Nilpotency of (op - z) on the ideal e Q0 equals that on its generator e.
        while !cur.is_zero() {
            cur = shifted.apply(&cur);
            nilpotency_t0 += 1;
        }

        // The t = 0 idempotent placed in the t^0 coordinates is congruent to the idempotent
        // mod t; its N-th power kills the other pieces.
        let lifted = SparseVec::from_pairs(idem0.iter().map(|(i, c)| (lift_index(i, 0), c.clone())).collect());
        let mut w = lifted.clone();
        for _ in 1..lifts {
            w = q.mul(&w, &lifted);
        }
        // (op - z) is nilpotent on the piece with index at most nilpotency_t0 * N.
        let shifted_full = m_full.shift(z);
        let mut cur = w.clone();
        for _ in 0..nilpotency_t0 * lifts {
            cur = shifted_full.apply(&cur);
        }
        if !cur.is_zero() {
            return Err(Error::StructureMismatch(format!("lifted idempotent at {z} is not in its eigenspace")));
        }
        // By Nakayama the t^j s w with s w independent mod t form a basis of Q w.
        let images = q.basis_images(&w);
        let monomials: Vec<usize> =
            (0..lifts).flat_map(|j| chosen.iter().map(move |&s| (s, j))).map(|(s, j)| lift_index(s, j)).collect();
        let vecs: Vec<SparseVec> = monomials.iter().map(|&i| images[i].clone()).collect();
        let basis = Basis::new(q.dim(), vecs)
            .map_err(|_| Error::StructureMismatch(format!("piece at {z} is not free over the series ring")))?;
        covered += basis.len();
        pieces.push(LocalPiece { eigenvalue: z.clone(), even_eigenvalues, generator: w, basis, monomials, dim_t0, nilpotency_t0 });
    }
    // Generalized eigenspaces for distinct eigenvalues are independent.
    if covered != q.dim() {
        return Err(Error::StructureMismatch("pieces do not fill the quotient".into()));
    }
    Ok(pieces)
}

/// The single eigenvalue of variable `i` on the piece generated by `idem`; errors if it has several.
fn piece_eigenvalue(q0: &QuotientAlgebra, i: usize, idem: &SparseVec, dim: usize) -> Result<Scalar> {
    let m = q0.op(Var::Even(i));
    // Trace of m restricted to e Q0: sum over basis s of the s-coordinate of m (s e).
    let mut tr = Scalar::ZERO;
    for (j, v) in q0.basis_images(idem).iter().enumerate() {
        tr += &m.apply(v).get(j);
    }
    let lam = tr.checked_div(&Scalar::from_int(dim as i64))?;
    let shifted = m.shift(&lam);
    let mut cur = idem.clone();
    for _ in 0..=dim {
        cur = shifted.apply(&cur);
    }
    if !cur.is_zero() {
        return Err(Error::StructureMismatch(format!("variable {i} has several eigenvalues on a piece")));
    }
    Ok(lam)
}

/// `dim ker (M - z)^n` with `n` the size of `M`: an independent route to piece dimensions.
pub fn generalized_eigenspace_dim(m: &SparseMatrix, z: &Scalar) -> usize {
    let n = m.nrows();
    let p = UniPoly::linear(z).pow(n as u32);
    n - p.eval_matrix(m).rank()
}
