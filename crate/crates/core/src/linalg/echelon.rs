use super::SparseVec;
use crate::scalar::Scalar;

/// Incremental row echelon form over Q(i).
///
/// Each stored row has a distinct pivot (its first nonzero index) normalized to 1.
/// Rows are not fully reduced: reduction sweeps pivots in increasing column order,
/// which is enough because a row only has entries at or after its own pivot.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<SparseVec>,
    pivot_row: Vec<Option<u32>>,
    /// When present, `track[k]` expresses row `k` in terms of inserted vectors.
    track: Option<Vec<SparseVec>>,
    inserted: usize,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), pivot_row: vec![None; dim], track: None, inserted: 0 }
    }

    /// Also records how each row arises from the inserted vectors.
    pub fn with_tracking(dim: usize) -> Self {
        Echelon { track: Some(Vec::new()), ..Self::new(dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).filter(|&c| self.pivot_row[c].is_some())
    }

    pub fn non_pivots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).filter(|&c| self.pivot_row[c].is_none())
    }

    /// Subtracts pivot rows from `dense`; returns the multipliers used, by row.
    fn sweep(&self, dense: &mut [Scalar], mut on_row: impl FnMut(usize, &Scalar)) {
        for col in 0..self.dim {
            if dense[col].is_zero() {
                continue;
            }
            if let Some(k) = self.pivot_row[col] {
                let c = std::mem::take(&mut dense[col]);
                let row = &self.rows[k as usize];
                let neg = -&c;
                for (j, v) in row.iter().skip(1) {
                    dense[j] += &(v * &neg);
                }
                on_row(k as usize, &c);
            }
        }
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut dense = v.to_dense(self.dim);
        self.sweep(&mut dense, |_, _| {});
        SparseVec::take_dense(&mut dense)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns its new pivot column, or `None` if it was already in the span.
    pub fn insert(&mut self, v: &SparseVec) -> Option<usize> {
        if self.track.is_some() {
            return self.insert_tracked(v).ok();
        }
        self.inserted += 1;
        let mut dense = v.to_dense(self.dim);
        self.sweep(&mut dense, |_, _| {});
        self.push_row(dense, None)
    }

    /// Tracked insertion. `Ok(pivot)` for a new direction; `Err(relation)` otherwise, where
    /// `relation` is a combination of inserted vectors (coefficient 1 on `v`) that vanishes.
    pub fn insert_tracked(&mut self, v: &SparseVec) -> Result<usize, SparseVec> {
        assert!(self.track.is_some(), "tracking not enabled");
        let me = self.inserted;
        self.inserted += 1;
        let mut dense = v.to_dense(self.dim);
        let mut comb = vec![Scalar::ZERO; self.inserted];
        comb[me] = Scalar::ONE;
        let track = self.track.as_ref().unwrap();
        self.sweep(&mut dense, |k, c| {
            let neg = -c;
            track[k].scatter_into(&mut comb, &neg);
        });
        let comb = SparseVec::from_dense(&comb);
        match self.push_row(dense, Some(comb.clone())) {
            Some(p) => Ok(p),
            None => Err(comb),
        }
    }

    fn push_row(&mut self, mut dense: Vec<Scalar>, comb: Option<SparseVec>) -> Option<usize> {
        let p = dense.iter().position(|x| !x.is_zero())?;
        let inv = dense[p].inv().expect("nonzero pivot");
        for x in dense[p..].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        self.pivot_row[p] = Some(self.rows.len() as u32);
        self.rows.push(SparseVec::from_dense(&dense));
        if let (Some(t), Some(c)) = (self.track.as_mut(), comb) {
            t.push(c.scale(&inv));
        }
        Some(p)
    }

    /// Coefficients expressing `v` in the inserted vectors, if `v` is in the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        let track = self.track.as_ref().expect("tracking not enabled");
        let mut dense = v.to_dense(self.dim);
        let mut comb = vec![Scalar::ZERO; self.inserted];
        self.sweep(&mut dense, |k, c| track[k].scatter_into(&mut comb, c));
        dense.iter().all(Scalar::is_zero).then(|| SparseVec::from_dense(&comb))
    }
}

/// A fixed list of independent vectors with exact coordinate extraction.
#[derive(Clone, Debug)]
pub struct Basis {
    vectors: Vec<SparseVec>,
    ech: Echelon,
}

impl Basis {
    /// Fails with the index of the first dependent vector.
    pub fn new(dim: usize, vectors: Vec<SparseVec>) -> Result<Self, usize> {
        let mut ech = Echelon::with_tracking(dim);
        for (i, v) in vectors.iter().enumerate() {
            if ech.insert_tracked(v).is_err() {
                return Err(i);
            }
        }
        Ok(Basis { vectors, ech })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ech.dim()
    }

    pub fn vectors(&self) -> &[SparseVec] {
        &self.vectors
    }

    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        self.ech.coordinates(v)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.ech.contains(v)
    }

    pub fn combine(&self, coords: &SparseVec) -> SparseVec {
        let mut acc = vec![Scalar::ZERO; self.ech.dim()];
        for (i, c) in coords.iter() {
            self.vectors[i].scatter_into(&mut acc, c);
        }
        SparseVec::take_dense(&mut acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_vecs() -> impl Strategy<Value = Vec<Vec<i64>>> {
        proptest::collection::vec(proptest::collection::vec(-2i64..3, 5), 1..8)
    }

    fn to_sparse(v: &[i64]) -> SparseVec {
        SparseVec::from_dense(&v.iter().map(|&x| Scalar::from_int(x)).collect::<Vec<_>>())
    }

    proptest! {
        #[test]
        fn coordinates_reconstruct(vs in arb_vecs(), probe in proptest::collection::vec(-3i64..4, 8)) {
            let vs: Vec<SparseVec> = vs.iter().map(|v| to_sparse(v)).collect();
            let mut e = Echelon::with_tracking(5);
            let mut indep = Vec::new();
            for v in &vs {
                match e.insert_tracked(v) {
                    Ok(_) => indep.push(v.clone()),
                    Err(rel) => {
                        let mut acc = SparseVec::new();
                        for (i, c) in rel.iter() {
                            acc = acc.add_scaled(&vs[i], c);
                        }
                        prop_assert!(acc.is_zero());
                    }
                }
            }
            let mut target = SparseVec::new();
            for (v, &c) in vs.iter().zip(&probe) {
                target = target.add_scaled(v, &Scalar::from_int(c));
            }
            let coords = e.coordinates(&target).expect("in span");
            let mut acc = SparseVec::new();
            for (i, c) in coords.iter() {
                acc = acc.add_scaled(&vs[i], c);
            }
            prop_assert_eq!(acc, target);
            prop_assert_eq!(e.rank(), indep.len());
        }
    }
}
