//! Supercommutative polynomial rings `Q(i)[even vars] (x) Lambda[odd vars]`, optionally over
//! `Q(i)[t]/t^N`, and their finite-rank quotients with explicit multiplication operators.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exterior::{product_sign, ExteriorMonomial};
use crate::linalg::{Echelon, SparseMatrix, SparseVec};
use crate::scalar::{Scalar, TruncatedSeries};

/// Weighted degree of every generator, by name.
pub type GradingTable = BTreeMap<String, u32>;

/// A variable of a [`SuperRing`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Even(usize),
    Odd(usize),
}

/// Ambient ring. The series variable, if any, is the last even variable and has weight 0.
#[derive(Debug, PartialEq, Eq)]
pub struct SuperRing {
    even: Vec<String>,
    even_w: Vec<u32>,
    odd: Vec<String>,
    odd_w: Vec<u32>,
    /// Truncation order `N` of the series variable.
    series: Option<usize>,
    /// Amount by which each power of the series variable lowers the filtration degree.
    series_drop: u32,
}

/// Even exponents (in ring order) and a set of odd factors, read in increasing index order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SuperMonomial {
    pub even: Vec<u32>,
    pub odd: ExteriorMonomial,
}

impl SuperRing {
    /// Builds a ring; names must be distinct and weights of non-series variables positive.
    pub fn new(even: &[(&str, u32)], odd: &[(&str, u32)], series: Option<(&str, usize)>) -> Result<Arc<SuperRing>> {
        let mut names: Vec<&str> = even.iter().chain(odd).map(|v| v.0).collect();
        if let Some((t, n)) = series {
            if n == 0 {
                return Err(Error::InvalidInput("series truncation order must be positive".into()));
            }
            names.push(t);
        }
        let mut sorted = names.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(Error::VariableMismatch("duplicate variable names".into()));
        }
        if even.iter().chain(odd).any(|v| v.1 == 0) {
            return Err(Error::InvalidInput("only the series variable may have weight 0".into()));
        }
        if odd.len() > 32 {
            return Err(Error::OutOfRange("at most 32 odd variables".into()));
        }
        let mut r = SuperRing {
            even: even.iter().map(|v| v.0.to_string()).collect(),
            even_w: even.iter().map(|v| v.1).collect(),
            odd: odd.iter().map(|v| v.0.to_string()).collect(),
            odd_w: odd.iter().map(|v| v.1).collect(),
            series: None,
            series_drop: 0,
        };
        if let Some((t, n)) = series {
            r.even.push(t.to_string());
            r.even_w.push(0);
            r.series = Some(n);
        }
        Ok(Arc::new(r))
    }

    /// Like [`SuperRing::new`] with a series variable whose powers lower the filtration degree
    /// by `drop` each. Choose `drop` so every perturbation term of a relation has filtration
    /// degree at most that of its `t = 0` leading part; the filtered quotient engine then
    /// behaves as at `t = 0`.
    pub fn new_filtered(even: &[(&str, u32)], odd: &[(&str, u32)], series: (&str, usize), drop: u32) -> Result<Arc<SuperRing>> {
        let r = Self::new(even, odd, Some(series))?;
        let mut r = Arc::try_unwrap(r).expect("fresh ring");
        r.series_drop = drop;
        Ok(Arc::new(r))
    }

    pub fn n_even(&self) -> usize {
        self.even.len()
    }

    pub fn n_odd(&self) -> usize {
        self.odd.len()
    }

    pub fn even_names(&self) -> &[String] {
        &self.even
    }

    pub fn odd_names(&self) -> &[String] {
        &self.odd
    }

    pub fn series_order(&self) -> Option<usize> {
        self.series
    }

    /// Index of the series variable among even variables.
    pub fn series_var(&self) -> Option<usize> {
        self.series.map(|_| self.even.len() - 1)
    }

    pub fn grading(&self) -> GradingTable {
        self.even.iter().zip(&self.even_w).chain(self.odd.iter().zip(&self.odd_w)).map(|(n, w)| (n.clone(), *w)).collect()
    }

    pub fn var(&self, name: &str) -> Result<Var> {
        if let Some(i) = self.even.iter().position(|n| n == name) {
            return Ok(Var::Even(i));
        }
        if let Some(i) = self.odd.iter().position(|n| n == name) {
            return Ok(Var::Odd(i));
        }
        Err(Error::VariableMismatch(format!("unknown variable {name:?}")))
    }

    pub fn weight(&self, v: Var) -> u32 {
        match v {
            Var::Even(i) => self.even_w[i],
            Var::Odd(i) => self.odd_w[i],
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.even.len()).map(Var::Even).chain((0..self.odd.len()).map(Var::Odd))
    }

    pub fn max_weight(&self) -> u32 {
        self.even_w.iter().chain(&self.odd_w).copied().max().unwrap_or(1).max(1)
    }

    pub fn one(&self) -> SuperMonomial {
        SuperMonomial { even: vec![0; self.even.len()], odd: 0 }
    }

    pub fn degree(&self, m: &SuperMonomial) -> u32 {
        let e: u32 = m.even.iter().zip(&self.even_w).map(|(a, w)| a * w).sum();
        let o: u32 = (0..self.odd.len()).filter(|i| m.odd >> i & 1 == 1).map(|i| self.odd_w[i]).sum();
        e + o
    }

    fn t_exp(&self, m: &SuperMonomial) -> u32 {
        self.series_var().map_or(0, |i| m.even[i])
    }

    /// Weighted degree minus `drop` per power of the series variable.
    fn filt_degree(&self, m: &SuperMonomial) -> i64 {
        self.degree(m) as i64 - (self.series_drop * self.t_exp(m)) as i64
    }

    fn filt_degree_poly(&self, p: &SuperPolynomial) -> i64 {
        p.terms.keys().map(|m| self.filt_degree(m)).max().unwrap_or(0)
    }

    /// Product `a * b` as `(sign, monomial)`; `None` when it vanishes.
    pub fn mul_monomials(&self, a: &SuperMonomial, b: &SuperMonomial) -> Option<(i32, SuperMonomial)> {
        let s = product_sign(a.odd, b.odd)?;
        let even: Vec<u32> = a.even.iter().zip(&b.even).map(|(x, y)| x + y).collect();
        if let (Some(n), Some(t)) = (self.series, self.series_var()) {
            if even[t] as usize >= n {
                return None;
            }
        }
        Some((s, SuperMonomial { even, odd: a.odd | b.odd }))
    }

    pub fn var_monomial(&self, v: Var) -> SuperMonomial {
        let mut m = self.one();
        match v {
            Var::Even(i) => m.even[i] = 1,
            Var::Odd(i) => m.odd = 1 << i,
        }
        m
    }

    /// Elimination order: larger keys become pivots. Filtration degree first, then lower
    /// `t`-adic valuation, then lexicographic on the other even exponents, then the odd set.
    fn pivot_key(&self, m: &SuperMonomial) -> (i64, Reverse<u32>, Vec<u32>, ExteriorMonomial) {
        let mut e = m.even.clone();
        if let Some(t) = self.series_var() {
            e.remove(t);
        }
        (self.filt_degree(m), Reverse(self.t_exp(m)), e, m.odd)
    }

    /// Reporting order for bases: by `t` power, then degree, then earlier variables first.
    fn basis_key(&self, m: &SuperMonomial) -> (u32, u32, Reverse<Vec<u32>>, ExteriorMonomial) {
        let mut e = m.even.clone();
        if let Some(t) = self.series_var() {
            e.remove(t);
        }
        (self.t_exp(m), self.degree(m), Reverse(e), m.odd)
    }

    /// Exponent vectors of the positive-weight even variables with weighted degree in `lo..=hi`.
    fn even_parts(&self, lo: u32, hi: u32) -> Vec<Vec<u32>> {
        let k = self.even.len() - usize::from(self.series.is_some());
        let mut out = Vec::new();
        let mut cur = vec![0u32; k];
        fn rec(w: &[u32], i: usize, left: u32, lo: u32, hi: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == w.len() {
                let used = hi - left;
                if used >= lo {
                    out.push(cur.clone());
                }
                return;
            }
            let mut e = 0;
            while e * w[i] <= left {
                cur[i] = e;
                rec(w, i + 1, left - e * w[i], lo, hi, cur, out);
                e += 1;
            }
            cur[i] = 0;
        }
        rec(&self.even_w[..k], 0, hi, lo, hi, &mut cur, &mut out);
        out
    }

    /// All monomials of weighted degree in `lo..=hi`.
    pub fn monomials(&self, lo: u32, hi: u32) -> Vec<SuperMonomial> {
        let mut out = Vec::new();
        let n_odd = self.odd.len();
        let tn = self.series.unwrap_or(1) as u32;
        for mask in 0u32..(1u64 << n_odd) as u32 {
            let ow: u32 = (0..n_odd).filter(|i| mask >> i & 1 == 1).map(|i| self.odd_w[i]).sum();
            if ow > hi {
                continue;
            }
            for e in self.even_parts(lo.saturating_sub(ow), hi - ow) {
                for t in 0..tn {
                    let mut even = e.clone();
                    if self.series.is_some() {
                        even.push(t);
                    }
                    out.push(SuperMonomial { even, odd: mask });
                }
            }
        }
        out
    }

    pub fn format_monomial(&self, m: &SuperMonomial) -> String {
        let mut parts = Vec::new();
        for (i, e) in m.even.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.even[i].clone()),
                _ => parts.push(format!("{}^{}", self.even[i], e)),
            }
        }
        for i in 0..self.odd.len() {
            if m.odd >> i & 1 == 1 {
                parts.push(self.odd[i].clone());
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Element of a [`SuperRing`].
#[derive(Clone, PartialEq, Eq)]
pub struct SuperPolynomial {
    ring: Arc<SuperRing>,
    terms: BTreeMap<SuperMonomial, Scalar>,
}

impl SuperPolynomial {
    pub fn zero(ring: &Arc<SuperRing>) -> Self {
        SuperPolynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<SuperRing>, c: Scalar) -> Self {
        Self::monomial(ring, ring.one(), c)
    }

    pub fn monomial(ring: &Arc<SuperRing>, m: SuperMonomial, c: Scalar) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(m, c);
        p
    }

    pub fn var(ring: &Arc<SuperRing>, name: &str) -> Result<Self> {
        let v = ring.var(name)?;
        Ok(Self::monomial(ring, ring.var_monomial(v), Scalar::ONE))
    }

    /// Embeds a truncated series in the series variable.
    pub fn series(ring: &Arc<SuperRing>, s: &TruncatedSeries) -> Result<Self> {
        let (Some(n), Some(t)) = (ring.series, ring.series_var()) else {
            if s.coeffs()[1..].iter().all(Scalar::is_zero) {
                return Ok(Self::constant(ring, s.constant_term().clone()));
            }
            return Err(Error::VariableMismatch("ring has no series variable".into()));
        };
        let mut p = Self::zero(ring);
        for (k, c) in s.coeffs().iter().enumerate().take(n) {
            let mut m = ring.one();
            m.even[t] = k as u32;
            p.add_term(m, c.clone());
        }
        Ok(p)
    }

    pub fn ring(&self) -> &Arc<SuperRing> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<SuperMonomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c m` in place.
    pub fn add_term(&mut self, m: SuperMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert(Scalar::ZERO);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn same_ring(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &o.ring) || self.ring == o.ring {
            Ok(())
        } else {
            Err(Error::VariableMismatch("polynomials live in different rings".into()))
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.same_ring(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.same_ring(o)?;
        let mut out = Self::zero(&self.ring);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if let Some((s, m)) = self.ring.mul_monomials(a, b) {
                    let c = x * y;
                    out.add_term(m, if s > 0 { c } else { -c });
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(&self.ring, Scalar::ONE), |acc, _| &acc * self)
    }

    /// Largest weighted degree of a term; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| self.ring.degree(m)).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| self.ring.degree(m));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Drops every term containing the series variable.
    pub fn at_t0(&self) -> Self {
        let Some(t) = self.ring.series_var() else { return self.clone() };
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            if m.even[t] == 0 {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Ring homomorphism into `target`, given the image of every variable.
    pub fn map_to(&self, target: &Arc<SuperRing>, even: &[SuperPolynomial], odd: &[SuperPolynomial]) -> Result<Self> {
        if even.len() != self.ring.n_even() || odd.len() != self.ring.n_odd() {
            return Err(Error::VariableMismatch("wrong number of images".into()));
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut acc = Self::constant(target, c.clone());
            for (i, e) in m.even.iter().enumerate() {
                for _ in 0..*e {
                    acc = acc.checked_mul(&even[i])?;
                }
            }
            for (i, img) in odd.iter().enumerate() {
                if m.odd >> i & 1 == 1 {
                    acc = acc.checked_mul(img)?;
                }
            }
            out = out.checked_add(&acc)?;
        }
        Ok(out)
    }
}

impl std::ops::Add for &SuperPolynomial {
    type Output = SuperPolynomial;
    /// Panics if the operands live in different rings.
    fn add(self, o: &SuperPolynomial) -> SuperPolynomial {
        self.checked_add(o).expect("ring mismatch")
    }
}

impl std::ops::Sub for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn sub(self, o: &SuperPolynomial) -> SuperPolynomial {
        self.checked_add(&o.scale(&-Scalar::ONE)).expect("ring mismatch")
    }
}

impl std::ops::Mul for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn mul(self, o: &SuperPolynomial) -> SuperPolynomial {
        self.checked_mul(o).expect("ring mismatch")
    }
}

impl std::ops::Neg for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn neg(self) -> SuperPolynomial {
        self.scale(&-Scalar::ONE)
    }
}

impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| Reverse(self.ring.pivot_key(m)));
        let parts: Vec<String> = terms
            .into_iter()
            .map(|(m, c)| {
                let mono = self.ring.format_monomial(m);
                match (mono.as_str(), c.is_one()) {
                    ("1", _) => format!("({c})"),
                    (_, true) => mono,
                    _ => format!("({c})*{mono}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Finite-dimensional quotient `ring / (generators)` with a monomial basis and the matrices
/// of left multiplication by every variable.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    ring: Arc<SuperRing>,
    generators: Vec<SuperPolynomial>,
    basis: Vec<SuperMonomial>,
    index: HashMap<SuperMonomial, usize>,
    even_ops: Vec<SparseMatrix>,
    odd_ops: Vec<SparseMatrix>,
    unit: SparseVec,
    degree_used: u32,
}

/// How a quotient was certified.
#[derive(Clone, Copy, Debug)]
pub struct QuotientOptions {
    /// Give up with `NotFiniteRank` beyond this Macaulay degree.
    pub degree_bound: u32,
    /// Check the operator certificate (commutation, unit, relations) before returning.
    pub verify: bool,
}

impl Default for QuotientOptions {
    fn default() -> Self {
        QuotientOptions { degree_bound: 40, verify: true }
    }
}

/// Rows of the echelon form live in `cols` coordinates; pivots are the largest monomials.
struct MacaulayLevel {
    cols: Vec<SuperMonomial>,
    pos: HashMap<SuperMonomial, usize>,
    ech: Echelon,
}

impl MacaulayLevel {
    fn new(ring: &SuperRing, mut cols: Vec<SuperMonomial>) -> Self {
        cols.sort_by_key(|m| Reverse(ring.pivot_key(m)));
        let pos = cols.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let n = cols.len();
        MacaulayLevel { cols, pos, ech: Echelon::new(n) }
    }

    fn row_of(&self, ring: &SuperRing, m: &SuperMonomial, f: &SuperPolynomial) -> SparseVec {
        let mut pairs = Vec::with_capacity(f.terms.len());
        for (fm, c) in &f.terms {
            if let Some((s, p)) = ring.mul_monomials(m, fm) {
                let i = self.pos[&p];
                pairs.push((i, if s > 0 { c.clone() } else { -c }));
            }
        }
        SparseVec::from_pairs(pairs)
    }
}

impl QuotientAlgebra {
    /// Computes `ring / (generators)`. Homogeneous ideals without a series variable use a
    /// degree-by-degree construction; everything else uses filtered Macaulay matrices.
    pub fn build(ring: &Arc<SuperRing>, generators: Vec<SuperPolynomial>, opts: QuotientOptions) -> Result<Self> {
        for g in &generators {
            if !Arc::ptr_eq(g.ring(), ring) && **g.ring() != **ring {
                return Err(Error::VariableMismatch("generator from another ring".into()));
            }
        }
        let generators: Vec<SuperPolynomial> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        let graded = ring.series.is_none() && generators.iter().all(SuperPolynomial::is_homogeneous);
        let q = if graded {
            Self::build_graded(ring, generators, opts)?
        } else {
            Self::build_filtered(ring, generators, opts)?
        };
        Ok(q)
    }

    fn build_graded(ring: &Arc<SuperRing>, gens: Vec<SuperPolynomial>, opts: QuotientOptions) -> Result<Self> {
        let maxw = ring.max_weight();
        let mut levels: Vec<MacaulayLevel> = Vec::new();
        let mut zero_run = 0;
        let mut n = 0u32;
        loop {
            if n > opts.degree_bound {
                return Err(Error::NotFiniteRank(opts.degree_bound));
            }
            let mut lvl = MacaulayLevel::new(ring, ring.monomials(n, n));
            for v in ring.vars() {
                let w = ring.weight(v);
                if w > n {
                    continue;
                }
                let prev = &levels[(n - w) as usize];
                let xm = ring.var_monomial(v);
                for row in prev.ech.rows() {
                    let mut pairs = Vec::with_capacity(row.nnz());
                    for (i, c) in row.iter() {
                        if let Some((s, p)) = ring.mul_monomials(&xm, &prev.cols[i]) {
                            pairs.push((lvl.pos[&p], if s > 0 { c.clone() } else { -c }));
                        }
                    }
                    lvl.ech.insert(&SparseVec::from_pairs(pairs));
                }
            }
            for g in gens.iter().filter(|g| g.degree() == n) {
                let row = lvl.row_of(ring, &ring.one(), g);
                lvl.ech.insert(&row);
            }
            let quotient_dim = lvl.cols.len() - lvl.ech.rank();
            levels.push(lvl);
            zero_run = if quotient_dim == 0 { zero_run + 1 } else { 0 };
            if zero_run >= maxw {
                break;
            }
            n += 1;
        }
        let standard: Vec<SuperMonomial> =
            levels.iter().flat_map(|l| l.ech.non_pivots().map(|c| l.cols[c].clone()).collect::<Vec<_>>()).collect();
        let q = Self::assemble(ring, gens, standard, n, |m| {
            let d = ring.degree(m);
            let lvl = &levels[d as usize];
            let v = lvl.ech.reduce(&SparseVec::unit(lvl.pos[m]));
            v.iter().map(|(i, c)| (lvl.cols[i].clone(), c.clone())).collect()
        });
        if opts.verify {
            q.certify()?;
        }
        Ok(q)
    }

    fn build_filtered(ring: &Arc<SuperRing>, gens: Vec<SuperPolynomial>, opts: QuotientOptions) -> Result<Self> {
        let maxw = ring.max_weight() as i64;
        let slack = ring.series_drop * ring.series.map_or(0, |n| n as u32 - 1);
        // Monomials of filtration degree at most `d`.
        let upto = |d: i64| -> Vec<SuperMonomial> {
            if d < -(slack as i64) {
                return Vec::new();
            }
            let hi = (d + slack as i64) as u32;
            ring.monomials(0, hi).into_iter().filter(|m| ring.filt_degree(m) <= d).collect()
        };
        let mut sorted: Vec<(i64, &SuperPolynomial)> = gens.iter().map(|g| (ring.filt_degree_poly(g), g)).collect();
        sorted.sort_by_key(|x| x.0);
        let gdeg = sorted.last().map_or(0, |x| x.0);
        let mut last_err = Error::NotFiniteRank(opts.degree_bound);
        let mut d = gdeg.max(1);
        while d <= opts.degree_bound as i64 {
            let mut lvl = MacaulayLevel::new(ring, upto(d));
            let mut rows: Vec<SparseVec> = Vec::new();
            for &(gd, g) in &sorted {
                for m in upto(d - gd) {
                    rows.push(lvl.row_of(ring, &m, g));
                }
            }
            // Smallest leading monomial first. Measured: about ten times less fill-in than
            // generator order on the perturbed genus-5 rings; largest-first is far worse.
            rows.sort_by_key(|r| std::cmp::Reverse(r.iter().next().map(|(i, _)| i)));
            for row in &rows {
                lvl.ech.insert(row);
            }
            let standard: Vec<SuperMonomial> = lvl.ech.non_pivots().map(|c| lvl.cols[c].clone()).collect();
            let top = standard.iter().map(|m| ring.filt_degree(m)).max().unwrap_or(0);
            if top + maxw > d {
                // Standard monomials near the top are truncation artifacts; the next useful
                // bound clears the current top by a full weight.
                d = (top + maxw).max(d + 1);
                continue;
            }
            let q = Self::assemble(ring, gens.clone(), standard, d as u32, |m| {
                let v = lvl.ech.reduce(&SparseVec::unit(lvl.pos[m]));
                v.iter().map(|(i, c)| (lvl.cols[i].clone(), c.clone())).collect()
            });
            if !opts.verify {
                return Ok(q);
            }
            match q.certify() {
                Ok(()) => return Ok(q),
                Err(e) => last_err = e,
            }
            d += 1;
        }
        Err(match last_err {
            Error::NotFiniteRank(_) => Error::NotFiniteRank(opts.degree_bound),
            e => e,
        })
    }

    /// Builds operators from a normal-form oracle valid for every `x * s` with `s` standard.
    fn assemble(
        ring: &Arc<SuperRing>,
        generators: Vec<SuperPolynomial>,
        mut standard: Vec<SuperMonomial>,
        degree_used: u32,
        nf: impl Fn(&SuperMonomial) -> Vec<(SuperMonomial, Scalar)>,
    ) -> Self {
        standard.sort_by_key(|m| ring.basis_key(m));
        let index: HashMap<SuperMonomial, usize> = standard.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let n = standard.len();
        let to_vec = |terms: Vec<(SuperMonomial, Scalar)>| {
            SparseVec::from_pairs(terms.into_iter().map(|(m, c)| (index[&m], c)).collect())
        };
        let op_for = |v: Var| {
            let xm = ring.var_monomial(v);
            let cols = standard
                .iter()
                .map(|s| match ring.mul_monomials(&xm, s) {
                    None => SparseVec::new(),
                    Some((sign, p)) => {
                        let col = match index.get(&p) {
                            Some(&i) => SparseVec::unit(i),
                            None => to_vec(nf(&p)),
                        };
                        if sign > 0 {
                            col
                        } else {
                            col.neg()
                        }
                    }
                })
                .collect();
            SparseMatrix::from_columns(n, cols)
        };
        let even_ops = (0..ring.n_even()).map(|i| op_for(Var::Even(i))).collect();
        let odd_ops = (0..ring.n_odd()).map(|i| op_for(Var::Odd(i))).collect();
        let one = ring.one();
        let unit = match index.get(&one) {
            Some(&i) => SparseVec::unit(i),
            None => to_vec(nf(&one)),
        };
        QuotientAlgebra { ring: ring.clone(), generators, basis: standard, index, even_ops, odd_ops, unit, degree_used }
    }

    /// Certifies the construction: operators satisfy the supercommutation rules, standard
    /// monomials map to their own basis vectors, and every generator acts as zero. Together
    /// these make `p -> p(M) 1` a surjection onto the span of the basis that kills the ideal,
    /// so the basis is exactly a basis of the quotient.
    pub fn certify(&self) -> Result<()> {
        let bad = |what: String| Err(Error::StructureMismatch(what));
        let ne = self.even_ops.len();
        for i in 0..ne {
            for j in i + 1..ne {
                let (a, b) = (&self.even_ops[i], &self.even_ops[j]);
                if a.compose(b) != b.compose(a) {
                    return bad(format!("even operators {i},{j} do not commute"));
                }
            }
            for (j, b) in self.odd_ops.iter().enumerate() {
                let a = &self.even_ops[i];
                if a.compose(b) != b.compose(a) {
                    return bad(format!("even {i} and odd {j} do not commute"));
                }
            }
        }
        for i in 0..self.odd_ops.len() {
            for j in i..self.odd_ops.len() {
                let (a, b) = (&self.odd_ops[i], &self.odd_ops[j]);
                if !a.compose(b).add(&b.compose(a)).is_zero() {
                    return bad(format!("odd operators {i},{j} do not anticommute"));
                }
            }
        }
        for (i, s) in self.basis.iter().enumerate() {
            if self.apply_monomial(s, &self.unit) != SparseVec::unit(i) {
                return bad(format!("standard monomial {} does not act as a basis vector", self.ring.format_monomial(s)));
            }
        }
        for g in &self.generators {
            if !self.normal_form(g)?.is_zero() {
                return bad(format!("generator {g} does not vanish"));
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Arc<SuperRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[SuperPolynomial] {
        &self.generators
    }

    pub fn basis(&self) -> &[SuperMonomial] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree_used(&self) -> u32 {
        self.degree_used
    }

    pub fn index_of(&self, m: &SuperMonomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn op(&self, v: Var) -> &SparseMatrix {
        match v {
            Var::Even(i) => &self.even_ops[i],
            Var::Odd(i) => &self.odd_ops[i],
        }
    }

    pub fn op_named(&self, name: &str) -> Result<&SparseMatrix> {
        Ok(self.op(self.ring.var(name)?))
    }

    /// `m * v`, reading odd factors right to left.
    pub fn apply_monomial(&self, m: &SuperMonomial, v: &SparseVec) -> SparseVec {
        let mut cur = v.clone();
        for i in (0..self.odd_ops.len()).rev() {
            if m.odd >> i & 1 == 1 {
                cur = self.odd_ops[i].apply(&cur);
            }
        }
        for (i, e) in m.even.iter().enumerate() {
            for _ in 0..*e {
                if cur.is_zero() {
                    return cur;
                }
                cur = self.even_ops[i].apply(&cur);
            }
        }
        cur
    }

    /// `p * v` for a polynomial acting on a quotient element.
    pub fn apply_poly(&self, p: &SuperPolynomial, v: &SparseVec) -> Result<SparseVec> {
        if **p.ring() != *self.ring {
            return Err(Error::VariableMismatch("polynomial from another ring".into()));
        }
        let mut acc = SparseVec::new();
        for (m, c) in p.terms() {
            acc = acc.add_scaled(&self.apply_monomial(m, v), c);
        }
        Ok(acc)
    }

    /// Coordinates of the class of `p` in the monomial basis.
    pub fn normal_form(&self, p: &SuperPolynomial) -> Result<SparseVec> {
        self.apply_poly(p, &self.unit)
    }

    /// Operator of left multiplication by a polynomial.
    pub fn poly_operator(&self, p: &SuperPolynomial) -> Result<SparseMatrix> {
        let cols = (0..self.dim()).map(|j| self.apply_poly(p, &SparseVec::unit(j))).collect::<Result<_>>()?;
        Ok(SparseMatrix::from_columns(self.dim(), cols))
    }

    /// Polynomial whose class has coordinates `v`.
    pub fn lift(&self, v: &SparseVec) -> SuperPolynomial {
        let mut p = SuperPolynomial::zero(&self.ring);
        for (i, c) in v.iter() {
            p.add_term(self.basis[i].clone(), c.clone());
        }
        p
    }

    /// Product of two quotient elements.
    pub fn mul(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let images = self.basis_images(v);
        let mut acc = SparseVec::new();
        for (i, c) in u.iter() {
            acc = acc.add_scaled(&images[i], c);
        }
        acc
    }

    /// `s * v` for every basis monomial `s`, one operator application each: the standard
    /// monomials form an order ideal, so `s = x s'` with `s'` standard and already done.
    pub fn basis_images(&self, v: &SparseVec) -> Vec<SparseVec> {
        let mut out: Vec<Option<SparseVec>> = vec![None; self.dim()];
        for i in 0..self.dim() {
            self.basis_image(i, v, &mut out);
        }
        out.into_iter().map(|x| x.expect("filled")).collect()
    }

    fn basis_image(&self, i: usize, v: &SparseVec, out: &mut [Option<SparseVec>]) {
        if out[i].is_some() {
            return;
        }
        let s = &self.basis[i];
        let parent = (0..s.even.len())
            .filter(|&k| s.even[k] > 0)
            .find_map(|k| {
                let mut p = s.clone();
                p.even[k] -= 1;
                self.index.get(&p).map(|&j| (j, &self.even_ops[k], 1))
            })
            .or_else(|| {
                (0..self.odd_ops.len()).filter(|&b| s.odd >> b & 1 == 1).find_map(|b| {
                    let p = SuperMonomial { even: s.even.clone(), odd: s.odd & !(1 << b) };
                    let sign = product_sign(1 << b, p.odd).expect("disjoint");
                    self.index.get(&p).map(|&j| (j, &self.odd_ops[b], sign))
                })
            });
        let img = match parent {
            None => self.apply_monomial(s, v),
            Some((j, op, sign)) => {
                self.basis_image(j, v, out);
                let w = op.apply(out[j].as_ref().expect("filled"));
                if sign > 0 {
                    w
                } else {
                    w.neg()
                }
            }
        };
        out[i] = Some(img);
    }

    /// Dimension of the span of basis monomials in each weighted degree.
    pub fn graded_dims(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for m in &self.basis {
            *out.entry(self.ring.degree(m)).or_insert(0) += 1;
        }
        out
    }

    pub fn format_basis(&self) -> Vec<String> {
        self.basis.iter().map(|m| self.ring.format_monomial(m)).collect()
    }

    /// Rank over `Q(i)[t]/t^N` if the quotient is a free module, else `None`.
    /// Free iff `dim Q = N * dim Q/tQ`, and `dim tQ = rank(M_t)`.
    pub fn series_rank(&self) -> Option<usize> {
        let (Some(n), Some(t)) = (self.ring.series_order(), self.ring.series_var()) else {
            return Some(self.dim());
        };
        let mod_t = self.dim() - self.even_ops[t].rank();
        (mod_t * n == self.dim()).then_some(mod_t)
    }

    /// The algebra `Q / tQ` over the ring without the series variable.
    pub fn specialize_t0(&self) -> Result<QuotientAlgebra> {
        let Some(t) = self.ring.series_var() else { return Ok(self.clone()) };
        let n = self.ring.series_order().unwrap();
        let keep: Vec<usize> = (0..self.dim()).filter(|&i| self.basis[i].even[t] == 0).collect();
        // The t-power basis must be a product {t^j} x S0 for dropping coordinates to be a quotient map.
        for &i in &keep {
            for j in 1..n as u32 {
                let mut m = self.basis[i].clone();
                m.even[t] = j;
                if self.index_of(&m).is_none() {
                    return Err(Error::StructureMismatch("basis is not a product of t-powers".into()));
                }
            }
        }
        if keep.len() * n != self.dim() {
            return Err(Error::StructureMismatch("quotient is not free over the series ring".into()));
        }
        let even: Vec<(&str, u32)> =
            (0..t).map(|i| (self.ring.even[i].as_str(), self.ring.even_w[i])).collect();
        let odd: Vec<(&str, u32)> = self.ring.odd.iter().zip(&self.ring.odd_w).map(|(a, b)| (a.as_str(), *b)).collect();
        let ring = SuperRing::new(&even, &odd, None)?;
        let strip = |m: &SuperMonomial| SuperMonomial { even: m.even[..t].to_vec(), odd: m.odd };
        let basis: Vec<SuperMonomial> = keep.iter().map(|&i| strip(&self.basis[i])).collect();
        let index: HashMap<SuperMonomial, usize> = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let restrict = |op: &SparseMatrix| op.submatrix(&keep, &keep);
        let mut pos = vec![None; self.dim()];
        for (k, &i) in keep.iter().enumerate() {
            pos[i] = Some(k);
        }
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let g0 = g.at_t0();
                let mut p = SuperPolynomial::zero(&ring);
                for (m, c) in g0.terms() {
                    p.add_term(strip(m), c.clone());
                }
                p
            })
            .collect();
        let q = QuotientAlgebra {
            ring: ring.clone(),
            generators,
            basis,
            index,
            even_ops: self.even_ops[..t].iter().map(restrict).collect(),
            odd_ops: self.odd_ops.iter().map(restrict).collect(),
            unit: self.unit.remap(|i| pos[i]),
            degree_used: self.degree_used,
        };
        q.certify()?;
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn two_variable_example() {
        // (a^2 + b - 8, (b + 8) a) has basis {1, a, b}.
        let r = SuperRing::new(&[("a", 1), ("b", 2)], &[], None).unwrap();
        let a = SuperPolynomial::var(&r, "a").unwrap();
        let b = SuperPolynomial::var(&r, "b").unwrap();
        let c = |n| SuperPolynomial::constant(&r, s(n));
        let f1 = &(&(&a * &a) + &b) - &c(8);
        let f2 = &(&b + &c(8)) * &a;
        let q = QuotientAlgebra::build(&r, vec![f1, f2], QuotientOptions::default()).unwrap();
        assert_eq!(q.format_basis(), vec!["1", "a", "b"]);
    }

    #[test]
    fn exterior_quotient() {
        // Lambda[p1, p2] / (p1 p2) has dimension 3.
        let r = SuperRing::new(&[], &[("p1", 1), ("p2", 1)], None).unwrap();
        let p1 = SuperPolynomial::var(&r, "p1").unwrap();
        let p2 = SuperPolynomial::var(&r, "p2").unwrap();
        let q = QuotientAlgebra::build(&r, vec![&p1 * &p2], QuotientOptions::default()).unwrap();
        assert_eq!(q.dim(), 3);
        let prod = q.normal_form(&(&p2 * &p1)).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn infinite_rank_reported() {
        let r = SuperRing::new(&[("a", 1), ("b", 1)], &[], None).unwrap();
        let a = SuperPolynomial::var(&r, "a").unwrap();
        let err = QuotientAlgebra::build(&r, vec![a], QuotientOptions { degree_bound: 6, verify: true }).unwrap_err();
        assert_eq!(err, Error::NotFiniteRank(6));
    }

    #[test]
    fn series_quotient_is_free() {
        // Q(i)[t]/t^3 [a] / (a^2 - t a - 4): rank 2, free.
        let r = SuperRing::new(&[("a", 1)], &[], Some(("t", 3))).unwrap();
        let a = SuperPolynomial::var(&r, "a").unwrap();
        let t = SuperPolynomial::var(&r, "t").unwrap();
        let f = &(&(&a * &a) - &(&t * &a)) - &SuperPolynomial::constant(&r, s(4));
        let q = QuotientAlgebra::build(&r, vec![f], QuotientOptions::default()).unwrap();
        assert_eq!(q.dim(), 6);
        assert_eq!(q.series_rank(), Some(2));
        let q0 = q.specialize_t0().unwrap();
        assert_eq!(q0.format_basis(), vec!["1", "a"]);
    }

    #[test]
    fn ring_mismatch_rejected() {
        let r1 = SuperRing::new(&[("a", 1)], &[], None).unwrap();
        let r2 = SuperRing::new(&[("b", 1)], &[], None).unwrap();
        let a = SuperPolynomial::var(&r1, "a").unwrap();
        let b = SuperPolynomial::var(&r2, "b").unwrap();
        assert!(matches!(a.checked_mul(&b), Err(Error::VariableMismatch(_))));
        assert!(matches!(SuperPolynomial::var(&r1, "z"), Err(Error::VariableMismatch(_))));
    }
}
