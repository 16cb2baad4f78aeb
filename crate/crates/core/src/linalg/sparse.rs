use crate::scalar::Scalar;

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    idx: Vec<u32>,
    val: Vec<Scalar>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { idx: vec![i as u32], val: vec![Scalar::ONE] }
    }

    /// Builds from arbitrary (index, value) pairs, summing duplicates.
    pub fn from_pairs(mut pairs: Vec<(usize, Scalar)>) -> Self {
        pairs.sort_by_key(|p| p.0);
        let mut out = SparseVec::new();
        for (i, v) in pairs {
            if out.idx.last() == Some(&(i as u32)) {
                let last = out.val.last_mut().unwrap();
                *last += v;
            } else {
                out.idx.push(i as u32);
                out.val.push(v);
            }
        }
        out.prune();
        out
    }

    pub fn from_dense(d: &[Scalar]) -> Self {
        let mut out = SparseVec::new();
        for (i, v) in d.iter().enumerate() {
            if !v.is_zero() {
                out.idx.push(i as u32);
                out.val.push(v.clone());
            }
        }
        out
    }

    /// Drains a dense accumulator into a sparse vector, leaving zeros behind.
    pub fn take_dense(d: &mut [Scalar]) -> Self {
        let mut out = SparseVec::new();
        for (i, v) in d.iter_mut().enumerate() {
            if !v.is_zero() {
                out.idx.push(i as u32);
                out.val.push(std::mem::take(v));
            }
        }
        out
    }

    fn prune(&mut self) {
        let mut k = 0;
        for j in 0..self.idx.len() {
            if !self.val[j].is_zero() {
                self.idx.swap(k, j);
                self.val.swap(k, j);
                k += 1;
            }
        }
        self.idx.truncate(k);
        self.val.truncate(k);
    }

    pub fn to_dense(&self, n: usize) -> Vec<Scalar> {
        let mut d = vec![Scalar::ZERO; n];
        self.scatter_into(&mut d, &Scalar::ONE);
        d
    }

    /// `d += c * self`.
    pub fn scatter_into(&self, d: &mut [Scalar], c: &Scalar) {
        if c.is_one() {
            for (i, v) in self.iter() {
                d[i] += v;
            }
        } else {
            for (i, v) in self.iter() {
                d[i] += &(v * c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.idx.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.idx.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.idx.iter().map(|&i| i as usize).zip(self.val.iter())
    }

    pub fn get(&self, i: usize) -> Scalar {
        match self.idx.binary_search(&(i as u32)) {
            Ok(k) => self.val[k].clone(),
            Err(_) => Scalar::ZERO,
        }
    }

    pub fn first(&self) -> Option<(usize, &Scalar)> {
        self.iter().next()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.idx.last().map(|&i| i as usize)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { idx: self.idx.clone(), val: self.val.iter().map(|v| v * c).collect() }
    }

    /// `self + c * other` by merging.
    pub fn add_scaled(&self, other: &SparseVec, c: &Scalar) -> Self {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = SparseVec::new();
        let (mut a, mut b) = (0, 0);
        while a < self.idx.len() || b < other.idx.len() {
            let ia = self.idx.get(a).copied().unwrap_or(u32::MAX);
            let ib = other.idx.get(b).copied().unwrap_or(u32::MAX);
            let (i, v) = if ia < ib {
                a += 1;
                (ia, self.val[a - 1].clone())
            } else if ib < ia {
                b += 1;
                (ib, &other.val[b - 1] * c)
            } else {
                a += 1;
                b += 1;
                (ia, &self.val[a - 1] + &(&other.val[b - 1] * c))
            };
            if !v.is_zero() {
                out.idx.push(i);
                out.val.push(v);
            }
        }
        out
    }

    pub fn add(&self, other: &SparseVec) -> Self {
        self.add_scaled(other, &Scalar::ONE)
    }

    pub fn sub(&self, other: &SparseVec) -> Self {
        self.add_scaled(other, &-Scalar::ONE)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::ONE)
    }

    /// Relabels indices through `map`; entries mapped to `None` are dropped.
    pub fn remap(&self, map: impl Fn(usize) -> Option<usize>) -> Self {
        SparseVec::from_pairs(self.iter().filter_map(|(i, v)| map(i).map(|j| (j, v.clone()))).collect())
    }
}

/// Column-major sparse matrix; column `j` is the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, cols: vec![SparseVec::new(); ncols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix { nrows: n, cols: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn from_columns(nrows: usize, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.max_index().is_none_or(|m| m < nrows)));
        SparseMatrix { nrows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.cols[j].get(i)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = vec![Scalar::ZERO; self.nrows];
        for (j, x) in v.iter() {
            self.cols[j].scatter_into(&mut acc, x);
        }
        SparseVec::take_dense(&mut acc)
    }

    /// `self * other`.
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), other.nrows, "dimension mismatch in compose");
        SparseMatrix { nrows: self.nrows, cols: other.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(other, &Scalar::ONE)
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(other, &-Scalar::ONE)
    }

    pub fn add_scaled(&self, other: &SparseMatrix, c: &Scalar) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols()), (other.nrows, other.ncols()));
        SparseMatrix {
            nrows: self.nrows,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.add_scaled(b, c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> SparseMatrix {
        SparseMatrix { nrows: self.nrows, cols: self.cols.iter().map(|a| a.scale(c)).collect() }
    }

    /// `self - c * I`.
    pub fn shift(&self, c: &Scalar) -> SparseMatrix {
        self.add_scaled(&SparseMatrix::identity(self.nrows), &-c)
    }

    pub fn pow(&self, e: u32) -> SparseMatrix {
        let mut acc = SparseMatrix::identity(self.nrows);
        for _ in 0..e {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut pairs: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c.iter() {
                pairs[i].push((j, v.clone()));
            }
        }
        SparseMatrix { nrows: self.ncols(), cols: pairs.into_iter().map(SparseVec::from_pairs).collect() }
    }

    pub fn to_dense(&self) -> super::DenseMatrix {
        let mut m = super::DenseMatrix::zero(self.nrows, self.ncols());
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c.iter() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        let mut e = super::Echelon::new(self.nrows);
        for c in &self.cols {
            e.insert(c);
        }
        e.rank()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut e = super::Echelon::with_tracking(self.nrows);
        self.cols.iter().filter_map(|c| e.insert_tracked(c).err()).collect()
    }

    /// Keeps only the listed rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut pos = vec![None; self.nrows];
        for (k, &r) in rows.iter().enumerate() {
            pos[r] = Some(k);
        }
        SparseMatrix {
            nrows: rows.len(),
            cols: cols.iter().map(|&j| self.cols[j].remap(|i| pos[i])).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn merge_cancels() {
        let a = SparseVec::from_pairs(vec![(0, s(1)), (3, s(2))]);
        let b = SparseVec::from_pairs(vec![(3, s(1)), (5, s(1))]);
        let c = a.add_scaled(&b, &s(-2));
        assert_eq!(c, SparseVec::from_pairs(vec![(0, s(1)), (5, s(-2))]));
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = SparseMatrix::from_columns(
            2,
            vec![
                SparseVec::from_pairs(vec![(0, s(1)), (1, s(2))]),
                SparseVec::from_pairs(vec![(0, s(2)), (1, s(4))]),
                SparseVec::new(),
            ],
        );
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(m.apply(&v).is_zero());
        }
        assert_eq!(m.rank(), 1);
    }
}
