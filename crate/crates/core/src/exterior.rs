//! Exterior algebra on `psi_1..psi_2g` with the symplectic pairing `psi_i <-> psi_(g+i)`,
//! the Lefschetz element `L = sum_i psi_i psi_(g+i)`, and primitive decompositions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::{Basis, Echelon, SparseMatrix, SparseVec};
use crate::scalar::Scalar;

/// Set of odd indices, bit `i - 1` for `psi_i`. Supports up to 32 odd generators.
pub type ExteriorMonomial = u32;

/// Sign of `psi_a * psi_b` rewritten in increasing order, or `None` if they share a factor.
pub fn product_sign(a: ExteriorMonomial, b: ExteriorMonomial) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    // Count pairs (x in a, y in b) with x > y.
    let mut inversions = 0;
    let mut bb = b;
    while bb != 0 {
        let y = bb.trailing_zeros();
        inversions += (a >> (y + 1)).count_ones();
        bb &= bb - 1;
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Indices (1-based) of the factors of a monomial, increasing.
pub fn indices(m: ExteriorMonomial) -> Vec<u32> {
    (0..32).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect()
}

pub fn monomial_of(ix: &[u32]) -> ExteriorMonomial {
    ix.iter().fold(0, |m, &i| m | 1 << (i - 1))
}

/// Element of `Lambda^* H^1` for a surface of genus `g`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExteriorElement {
    g: u32,
    terms: BTreeMap<ExteriorMonomial, Scalar>,
}

impl ExteriorElement {
    pub fn zero(g: u32) -> Self {
        ExteriorElement { g, terms: BTreeMap::new() }
    }

    pub fn one(g: u32) -> Self {
        Self::monomial(g, 0, Scalar::ONE)
    }

    pub fn monomial(g: u32, m: ExteriorMonomial, c: Scalar) -> Self {
        let mut e = Self::zero(g);
        if !c.is_zero() {
            e.terms.insert(m, c);
        }
        e
    }

    /// `psi_i`, `1 <= i <= 2g`.
    pub fn psi(g: u32, i: u32) -> Result<Self> {
        if i == 0 || i > 2 * g {
            return Err(Error::OutOfRange(format!("psi_{i} in genus {g}")));
        }
        Ok(Self::monomial(g, 1 << (i - 1), Scalar::ONE))
    }

    /// `L = sum psi_i psi_(g+i)`.
    pub fn lefschetz(g: u32) -> Self {
        let mut e = Self::zero(g);
        for i in 1..=g {
            e.terms.insert(monomial_of(&[i, g + i]), Scalar::ONE);
        }
        e
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn terms(&self) -> &BTreeMap<ExteriorMonomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree if homogeneous and nonzero.
    pub fn degree(&self) -> Option<u32> {
        let mut ds = self.terms.keys().map(|m| m.count_ones());
        let d = ds.next()?;
        ds.all(|e| e == d).then_some(d)
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.g != o.g {
            return Err(Error::GenusMismatch(self.g, o.g));
        }
        Ok(())
    }

    pub fn add_scaled(&self, o: &Self, c: &Scalar) -> Result<Self> {
        self.check(o)?;
        let mut out = self.clone();
        for (m, v) in &o.terms {
            out.add_term(*m, v * c);
        }
        Ok(out)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.add_scaled(o, &Scalar::ONE)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.g);
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }

    fn add_term(&mut self, m: ExteriorMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert(Scalar::ZERO);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn wedge(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut out = Self::zero(self.g);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if let Some(s) = product_sign(*a, *b) {
                    let c = x * y;
                    out.add_term(a | b, if s > 0 { c } else { -c });
                }
            }
        }
        Ok(out)
    }

    pub fn times_lefschetz(&self) -> Self {
        self.wedge(&Self::lefschetz(self.g)).expect("same genus")
    }

    /// Coordinates in the monomial basis of `Lambda^k`.
    pub fn to_vec(&self, k: u32) -> SparseVec {
        let ix = degree_index(self.g, k);
        SparseVec::from_pairs(
            self.terms
                .iter()
                .filter(|(m, _)| m.count_ones() == k)
                .map(|(m, v)| (ix.position[m], v.clone()))
                .collect(),
        )
    }

    pub fn from_vec(g: u32, k: u32, v: &SparseVec) -> Self {
        let ix = degree_index(g, k);
        let mut out = Self::zero(g);
        for (i, c) in v.iter() {
            out.add_term(ix.monomials[i], c.clone());
        }
        out
    }

    /// Image under a generator of `Sp(2g, Z)` acting on `H^1`.
    pub fn apply_symplectic_generator(&self, s: SymplecticGenerator) -> Result<Self> {
        let images = s.images(self.g)?;
        let mut out = Self::zero(self.g);
        for (m, c) in &self.terms {
            let mut acc = Self::monomial(self.g, 0, c.clone());
            for i in indices(*m) {
                acc = acc.wedge(&images[(i - 1) as usize])?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }
}

impl fmt::Debug for ExteriorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExteriorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono = if *m == 0 {
                    "1".to_string()
                } else {
                    indices(*m).iter().map(|i| format!("psi{i}")).collect::<Vec<_>>().join("*")
                };
                format!("({c})*{mono}")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Generators of `Sp(2g, Z)` in the basis `psi_1..psi_2g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymplecticGenerator {
    /// `psi_i -> psi_(g+i)`, `psi_(g+i) -> -psi_i`.
    Swap(u32),
    /// `psi_(g+i) -> psi_(g+i) + psi_i`.
    Transvection(u32),
    /// `psi_i -> psi_i + psi_j`, `psi_(g+j) -> psi_(g+j) - psi_(g+i)`, for `i != j`.
    Mix(u32, u32),
}

impl SymplecticGenerator {
    /// A generating set of `Sp(2g, Z)`.
    pub fn all(g: u32) -> Vec<SymplecticGenerator> {
        let mut v = Vec::new();
        for i in 1..=g {
            v.push(SymplecticGenerator::Swap(i));
            v.push(SymplecticGenerator::Transvection(i));
            for j in 1..=g {
                if i != j {
                    v.push(SymplecticGenerator::Mix(i, j));
                }
            }
        }
        v
    }

    fn images(self, g: u32) -> Result<Vec<ExteriorElement>> {
        let mut img: Vec<ExteriorElement> = (1..=2 * g).map(|i| ExteriorElement::psi(g, i)).collect::<Result<_>>()?;
        let psi = |i| ExteriorElement::psi(g, i);
        let bad = |i: u32| i == 0 || i > g;
        match self {
            SymplecticGenerator::Swap(i) => {
                if bad(i) {
                    return Err(Error::OutOfRange(format!("{self:?}")));
                }
                img[(i - 1) as usize] = psi(g + i)?;
                img[(g + i - 1) as usize] = psi(i)?.scale(&-Scalar::ONE);
            }
            SymplecticGenerator::Transvection(i) => {
                if bad(i) {
                    return Err(Error::OutOfRange(format!("{self:?}")));
                }
                img[(g + i - 1) as usize] = psi(g + i)?.add(&psi(i)?)?;
            }
            SymplecticGenerator::Mix(i, j) => {
                if bad(i) || bad(j) || i == j {
                    return Err(Error::OutOfRange(format!("{self:?}")));
                }
                img[(i - 1) as usize] = psi(i)?.add(&psi(j)?)?;
                img[(g + j - 1) as usize] = psi(g + j)?.add_scaled(&psi(g + i)?, &-Scalar::ONE)?;
            }
        }
        Ok(img)
    }
}

/// Monomials of a fixed degree in increasing mask order.
pub struct DegreeIndex {
    pub monomials: Vec<ExteriorMonomial>,
    pub position: HashMap<ExteriorMonomial, usize>,
}

type Cache<K, V> = OnceLock<Mutex<HashMap<K, Arc<V>>>>;

fn cached<K: std::hash::Hash + Eq + Copy, V>(cache: &'static Cache<K, V>, key: K, make: impl FnOnce() -> V) -> Arc<V> {
    let map = cache.get_or_init(Default::default);
    if let Some(v) = map.lock().unwrap().get(&key) {
        return v.clone();
    }
    let v = Arc::new(make());
    map.lock().unwrap().entry(key).or_insert(v).clone()
}

pub fn degree_index(g: u32, k: u32) -> Arc<DegreeIndex> {
    static CACHE: Cache<(u32, u32), DegreeIndex> = OnceLock::new();
    cached(&CACHE, (g, k), || {
        let monomials: Vec<u32> = (0u32..1 << (2 * g)).filter(|m| m.count_ones() == k).collect();
        let position = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        DegreeIndex { monomials, position }
    })
}

/// `dim Lambda^k_0 = C(2g, k) - C(2g, k - 2)` for `k <= g`, else 0.
pub fn primitive_dim(g: u32, k: u32) -> usize {
    if k > g {
        return 0;
    }
    let c = |n: u32, r: i64| if r < 0 { 0 } else { binom(n as u64, r as u64) };
    (c(2 * g, k as i64) - c(2 * g, k as i64 - 2)) as usize
}

pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Basis of `Lambda^k_0 = ker(L^(g-k+1))` on `Lambda^k`, memoized per `(g, k)`.
pub fn primitive_basis(g: u32, k: u32) -> Arc<Vec<ExteriorElement>> {
    static CACHE: Cache<(u32, u32), Vec<ExteriorElement>> = OnceLock::new();
    cached(&CACHE, (g, k), || {
        if k > g {
            return Vec::new();
        }
        let src = degree_index(g, k);
        let tgt_deg = k + 2 * (g - k + 1);
        if tgt_deg > 2 * g {
            return src.monomials.iter().map(|&m| ExteriorElement::monomial(g, m, Scalar::ONE)).collect();
        }
        let cols = src
            .monomials
            .iter()
            .map(|&m| {
                let mut e = ExteriorElement::monomial(g, m, Scalar::ONE);
                for _ in 0..g - k + 1 {
                    e = e.times_lefschetz();
                }
                e.to_vec(tgt_deg)
            })
            .collect();
        let op = SparseMatrix::from_columns(degree_index(g, tgt_deg).monomials.len(), cols);
        op.kernel().iter().map(|v| ExteriorElement::from_vec(g, k, v)).collect()
    })
}

/// Lefschetz decomposition `w = sum_i L^i w_i` with `w_i` primitive of degree `deg w - 2i`.
pub struct LefschetzSolver {
    g: u32,
    m: u32,
    basis: Basis,
    /// `(i, offset)` for each block of the basis `L^i * primitive_basis(g, m - 2i)`.
    blocks: Vec<(u32, usize)>,
}

impl LefschetzSolver {
    pub fn get(g: u32, m: u32) -> Arc<LefschetzSolver> {
        static CACHE: Cache<(u32, u32), LefschetzSolver> = OnceLock::new();
        cached(&CACHE, (g, m), || {
            let mut vectors = Vec::new();
            let mut blocks = Vec::new();
            for i in 0..=m / 2 {
                let p = m - 2 * i;
                // L^i kills Lambda^p_0 once i > g - p.
                if p + i > g {
                    continue;
                }
                blocks.push((i, vectors.len()));
                for w in primitive_basis(g, p).iter() {
                    let mut e = w.clone();
                    for _ in 0..i {
                        e = e.times_lefschetz();
                    }
                    vectors.push(e.to_vec(m));
                }
            }
            let dim = degree_index(g, m).monomials.len();
            assert_eq!(vectors.len(), dim, "Lefschetz blocks do not fill Lambda^{m}");
            let basis = Basis::new(dim, vectors).expect("Lefschetz decomposition is a basis");
            LefschetzSolver { g, m, basis, blocks }
        })
    }

    /// Components `(i, coordinates of w_i in primitive_basis(g, m - 2i))`, nonzero ones only.
    pub fn decompose_coords(&self, w: &SparseVec) -> Vec<(u32, SparseVec)> {
        let coords = self.basis.coordinates(w).expect("basis spans Lambda^m");
        let mut out = Vec::new();
        for (b, &(i, off)) in self.blocks.iter().enumerate() {
            let end = self.blocks.get(b + 1).map_or(self.basis.len(), |x| x.1);
            let part = coords.remap(|j| (off..end).contains(&j).then(|| j - off));
            if !part.is_zero() {
                out.push((i, part));
            }
        }
        out
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn genus(&self) -> u32 {
        self.g
    }
}

/// Lefschetz decomposition of a homogeneous element, as explicit primitive components.
pub fn lefschetz_decompose(w: &ExteriorElement) -> Result<Vec<(u32, ExteriorElement)>> {
    let Some(m) = w.degree() else {
        return if w.is_zero() { Ok(Vec::new()) } else { Err(Error::InvalidInput("inhomogeneous element".into())) };
    };
    let g = w.genus();
    let solver = LefschetzSolver::get(g, m);
    Ok(solver
        .decompose_coords(&w.to_vec(m))
        .into_iter()
        .map(|(i, c)| {
            let prim = primitive_basis(g, m - 2 * i);
            let mut e = ExteriorElement::zero(g);
            for (j, v) in c.iter() {
                e = e.add_scaled(&prim[j], v).unwrap();
            }
            (i, e)
        })
        .collect())
}

/// Whether `w` lies in the span of the given homogeneous elements of degree `k`.
pub fn in_span(g: u32, k: u32, span: &[ExteriorElement], w: &ExteriorElement) -> bool {
    let mut e = Echelon::new(degree_index(g, k).monomials.len());
    for s in span {
        e.insert(&s.to_vec(k));
    }
    e.contains(&w.to_vec(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn anticommutation() {
        let a = ExteriorElement::psi(3, 2).unwrap();
        let b = ExteriorElement::psi(3, 5).unwrap();
        assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().scale(&-Scalar::ONE));
        assert!(a.wedge(&a).unwrap().is_zero());
    }

    #[test]
    fn genus_mismatch() {
        let a = ExteriorElement::psi(2, 1).unwrap();
        let b = ExteriorElement::psi(3, 1).unwrap();
        assert_eq!(a.wedge(&b), Err(Error::GenusMismatch(2, 3)));
        assert!(ExteriorElement::psi(2, 5).is_err());
    }

    #[test]
    fn lefschetz_power_top() {
        // L^g = g! * psi_1 psi_(g+1) ... psi_g psi_2g; nonzero, and L^(g+1) = 0.
        let g = 3;
        let mut e = ExteriorElement::one(g);
        for _ in 0..g {
            e = e.times_lefschetz();
        }
        assert_eq!(e.terms().len(), 1);
        assert!(e.times_lefschetz().is_zero());
    }

    #[test]
    fn primitive_dimensions() {
        for g in 1..=5 {
            for k in 0..=g {
                assert_eq!(primitive_basis(g, k).len(), primitive_dim(g, k), "g={g} k={k}");
            }
        }
        assert_eq!(primitive_dim(2, 2), 5);
    }

    #[test]
    fn highest_weight_vector_is_primitive() {
        for g in 1..=4 {
            for k in 0..=g {
                let w = ExteriorElement::monomial(g, monomial_of(&(1..=k).collect::<Vec<_>>()), Scalar::ONE);
                assert!(in_span(g, k, &primitive_basis(g, k), &w));
            }
        }
    }

    #[test]
    fn psi_times_primitive_has_two_components() {
        let g = 3;
        for w in primitive_basis(g, 2).iter() {
            for j in 1..=2 * g {
                let parts = lefschetz_decompose(&ExteriorElement::psi(g, j).unwrap().wedge(w).unwrap()).unwrap();
                assert!(parts.iter().all(|(i, _)| *i <= 1));
            }
        }
    }

    fn arb_elem(g: u32, k: u32) -> impl Strategy<Value = ExteriorElement> {
        let n = degree_index(g, k).monomials.len();
        proptest::collection::vec(-2i64..3, n).prop_map(move |cs| {
            let v = SparseVec::from_dense(&cs.iter().map(|&c| Scalar::from_int(c)).collect::<Vec<_>>());
            ExteriorElement::from_vec(g, k, &v)
        })
    }

    proptest! {
        #[test]
        fn decomposition_reconstructs(w in (1u32..=3).prop_flat_map(|g| (0..=2 * g).prop_flat_map(move |k| arb_elem(g, k)))) {
            let parts = lefschetz_decompose(&w).unwrap();
            let mut acc = ExteriorElement::zero(w.genus());
            for (i, p) in &parts {
                prop_assert!(p.degree().is_none_or(|d| d <= w.genus()));
                let mut e = p.clone();
                for _ in 0..*i { e = e.times_lefschetz(); }
                acc = acc.add(&e).unwrap();
            }
            prop_assert_eq!(acc, w);
        }

        #[test]
        fn symplectic_generators_fix_lefschetz(g in 1u32..=3, pick in 0usize..100) {
            let gens = SymplecticGenerator::all(g);
            let s = gens[pick % gens.len()];
            let l = ExteriorElement::lefschetz(g);
            prop_assert_eq!(l.apply_symplectic_generator(s).unwrap(), l);
        }
    }
}
