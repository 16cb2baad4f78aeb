use super::UniPoly;
use crate::scalar::Scalar;

/// Row-major dense matrix, used for small exact computations such as characteristic polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![Scalar::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        DenseMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = &out.data[i * out.cols + j] + &(a * b);
                        out.data[i * out.cols + j] = cur;
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::ZERO;
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Characteristic polynomial `det(x I - A)` by Hessenberg reduction. Exact, O(n^3).
    pub fn charpoly(&self) -> UniPoly {
        assert_eq!(self.rows, self.cols, "charpoly of a non-square matrix");
        let n = self.rows;
        let mut h = self.clone();
        // Similarity transform to upper Hessenberg form.
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h.get(i, m - 1).is_zero()) else {
                continue;
            };
            if i != m {
                h.swap_rows(i, m);
                h.swap_cols(i, m);
            }
            let piv = h.get(m, m - 1).clone();
            for i in m + 1..n {
                if h.get(i, m - 1).is_zero() {
                    continue;
                }
                let u = h.get(i, m - 1) / &piv;
                for j in 0..n {
                    let v = h.get(i, j) - &(&u * h.get(m, j));
                    h.set(i, j, v);
                }
                for r in 0..n {
                    let v = h.get(r, m) + &(&u * h.get(r, i));
                    h.set(r, m, v);
                }
            }
        }
        // p_{m+1} = (x - h_mm) p_m - sum_{i<m} h_im (prod_{j=i+1..m} h_{j,j-1}) p_i
        let mut p: Vec<UniPoly> = vec![UniPoly::one()];
        for m in 0..n {
            let mut next = p[m].mul(&UniPoly::from_coeffs(vec![-h.get(m, m), Scalar::ONE]));
            let mut prod = Scalar::ONE;
            for i in (0..m).rev() {
                prod = &prod * h.get(i + 1, i);
                if prod.is_zero() {
                    break;
                }
                let c = &prod * h.get(i, m);
                if !c.is_zero() {
                    next = next.sub(&p[i].scale(&c));
                }
            }
            p.push(next);
        }
        p.pop().unwrap()
    }

    pub fn to_sparse(&self) -> super::SparseMatrix {
        let cols = (0..self.cols)
            .map(|j| super::SparseVec::from_dense(&(0..self.rows).map(|i| self.get(i, j).clone()).collect::<Vec<_>>()))
            .collect();
        super::SparseMatrix::from_columns(self.rows, cols)
    }

    pub fn rank(&self) -> usize {
        self.to_sparse().rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn charpoly_companion() {
        // Companion matrix of x^3 - 2x^2 + 3x - 5.
        let m = DenseMatrix::from_rows(vec![
            vec![s(0), s(0), s(5)],
            vec![s(1), s(0), s(-3)],
            vec![s(0), s(1), s(2)],
        ]);
        assert_eq!(m.charpoly(), UniPoly::from_coeffs(vec![s(-5), s(3), s(-2), s(1)]));
    }

    proptest! {
        #[test]
        fn cayley_hamilton(entries in proptest::collection::vec(-3i64..4, 16)) {
            let m = DenseMatrix::from_rows(entries.chunks(4).map(|r| r.iter().map(|&x| s(x)).collect()).collect());
            let p = m.charpoly();
            prop_assert_eq!(p.degree(), Some(4));
            prop_assert_eq!(p.coeff(3), -m.trace());
            let sp = m.to_sparse();
            prop_assert!(p.eval_matrix(&sp).is_zero());
        }
    }
}
