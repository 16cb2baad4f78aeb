//! Exact linear algebra over Q(i): sparse vectors and matrices, incremental echelon forms,
//! characteristic and minimal polynomials, and root isolation.

mod dense;
mod echelon;
mod poly;
mod sparse;

pub use dense::DenseMatrix;
pub use echelon::{Basis, Echelon};
pub use poly::UniPoly;
pub use sparse::{SparseMatrix, SparseVec};

/// Minimal monic polynomial `p` with `p(A) v = 0`, from the Krylov sequence of `v`.
pub fn krylov_minpoly(a: &SparseMatrix, v: &SparseVec) -> UniPoly {
    let mut ech = Echelon::with_tracking(a.nrows());
    let mut cur = v.clone();
    loop {
        match ech.insert_tracked(&cur) {
            Ok(_) => cur = a.apply(&cur),
            Err(rel) => {
                let n = ech.inserted();
                return UniPoly::from_coeffs((0..n).map(|k| rel.get(k)).collect());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn krylov_of_jordan_block() {
        // Single Jordan block for eigenvalue 2, size 3; e_0 is cyclic.
        let s = Scalar::from_int;
        let a = DenseMatrix::from_rows(vec![
            vec![s(2), s(0), s(0)],
            vec![s(1), s(2), s(0)],
            vec![s(0), s(1), s(2)],
        ])
        .to_sparse();
        let p = krylov_minpoly(&a, &SparseVec::unit(0));
        assert_eq!(p, UniPoly::linear(&s(2)).pow(3));
        assert_eq!(krylov_minpoly(&a, &SparseVec::unit(2)), UniPoly::linear(&s(2)));
    }
}
