//! Singer cycles and regular elliptic elements of GL_n(F_q), the absolute
//! order interval from the identity up to one, and the bijection between
//! chains of the interval and twisted direct-sum decompositions.
//!
//! A Singer cycle is the matrix of a multiplicative generator of F_{q^n}^x
//! acting on F_q^n; concretely, the companion matrix of a primitive degree-n
//! polynomial. Regular elliptic elements are those with irreducible
//! characteristic polynomial; they stabilize no proper nonzero subspace.

use crate::absorder::{abs_leq, reflection_length};
use crate::error::{Error, Result};
use crate::gf::{distinct_prime_factors, Fq, FqElem};
use crate::matfq::{
    companion, enumerate_gl_bounded, fixed_space, Matrix, PolyFq, Subspace, DEFAULT_GL_BOUND,
};
use crate::qseries::Composition;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::HashMap;

/// Largest q^n whose q^n - 1 we factor by trial division.
const SINGER_FACTOR_BOUND: u64 = 1 << 44;

/// The first primitive degree-n polynomial over F_q, in lexicographic order
/// of coefficient tuples with the constant term varying fastest.
pub fn first_primitive_poly(n: usize, fq: &Fq) -> Result<PolyFq> {
    assert!(n >= 1);
    let q = fq.q();
    let qn128 = (q as u128).pow(n as u32);
    if qn128 > SINGER_FACTOR_BOUND as u128 {
        return Err(Error::FactorBound(qn128.min(u64::MAX as u128) as u64));
    }
    let qn = qn128 as u64;
    let factors = distinct_prime_factors(qn - 1);
    let x = PolyFq::x();
    'cand: for k in 0..qn {
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut v = k;
        for _ in 0..n {
            coeffs.push(FqElem(v % q));
            v /= q;
        }
        coeffs.push(FqElem::ONE);
        let f = PolyFq::from_coeffs(coeffs);
        if f.constant_term().is_zero() || !f.is_irreducible(fq) {
            continue;
        }
        // primitive iff the class of x has multiplicative order q^n - 1
        for &r in &factors {
            let p = x.powmod((qn - 1) / r, &f, fq);
            if p == PolyFq::one() {
                continue 'cand;
            }
        }
        return Ok(f);
    }
    unreachable!("primitive polynomials of every degree exist over F_q");
}

/// A Singer cycle: the companion matrix of the deterministic primitive
/// degree-n polynomial. Its multiplicative order is q^n - 1 and its
/// characteristic polynomial is irreducible.
pub fn singer_cycle(n: usize, fq: &Fq) -> Result<Matrix> {
    let f = first_primitive_poly(n, fq)?;
    companion(&f, fq)
}

/// True iff the characteristic polynomial is irreducible over F_q,
/// equivalently g stabilizes no proper nonzero subspace.
pub fn is_regular_elliptic(g: &Matrix, fq: &Fq) -> bool {
    g.char_poly(fq).is_irreducible(fq)
}

// ---------------------------------------------------------------------------
// The interval [e, c]
// ---------------------------------------------------------------------------

/// The absolute order interval from the identity to a top element c with
/// V^c = 0, built by filtering the whole group. Elements are sorted by
/// (rank, entry encoding) and the full comparability relation is
/// precomputed, so chain counting and Mobius recursion are table lookups.
pub struct IntervalModel {
    fq: Fq,
    n: usize,
    top: Matrix,
    elements: Vec<Matrix>,
    rank_of: Vec<usize>,
    by_rank: Vec<Vec<usize>>,
    leq: Vec<Vec<bool>>,
    index: HashMap<Matrix, usize>,
}

/// Options for interval construction.
#[derive(Clone, Copy, Debug)]
pub struct IntervalOptions {
    /// Refuse groups larger than this.
    pub max_group_order: u64,
    /// Worker threads for the comparability table (1 = serial).
    pub threads: usize,
}

impl Default for IntervalOptions {
    fn default() -> Self {
        IntervalOptions { max_group_order: DEFAULT_GL_BOUND, threads: 1 }
    }
}

/// Build the interval below `c` with default options.
pub fn build_interval(c: &Matrix, fq: &Fq) -> Result<IntervalModel> {
    build_interval_with(c, fq, IntervalOptions::default())
}

pub fn build_interval_with(c: &Matrix, fq: &Fq, opts: IntervalOptions) -> Result<IntervalModel> {
    let n = c.n();
    if !fixed_space(c, fq).is_zero() {
        return Err(Error::FixedSpaceNotZero);
    }
    let mut elements: Vec<Matrix> = enumerate_gl_bounded(n, fq, opts.max_group_order)?
        .filter(|g| abs_leq(g, c, fq))
        .collect();
    elements.sort_by_key(|g| (reflection_length(g, fq), g.clone()));

    let rank_of: Vec<usize> = elements.iter().map(|g| reflection_length(g, fq)).collect();
    let mut by_rank: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (i, &r) in rank_of.iter().enumerate() {
        by_rank[r].push(i);
    }
    debug_assert_eq!(by_rank[0].len(), 1);
    debug_assert_eq!(by_rank[n].len(), 1);

    let size = elements.len();
    let inverses: Vec<Matrix> = elements
        .iter()
        .map(|g| g.inverse(fq).expect("group elements are invertible"))
        .collect();

    let mut leq = vec![vec![false; size]; size];
    let fill_row = |i: usize, row: &mut Vec<bool>| {
        for j in 0..size {
            row[j] = if rank_of[i] > rank_of[j] {
                false
            } else if i == j {
                true
            } else {
                let quot = inverses[i].mul(&elements[j], fq);
                rank_of[i] + reflection_length(&quot, fq) == rank_of[j]
            };
        }
    };
    if opts.threads <= 1 {
        for (i, row) in leq.iter_mut().enumerate() {
            fill_row(i, row);
        }
    } else {
        let band = size.div_ceil(opts.threads);
        std::thread::scope(|scope| {
            for (b, chunk) in leq.chunks_mut(band).enumerate() {
                let fill_row = &fill_row;
                scope.spawn(move || {
                    for (off, row) in chunk.iter_mut().enumerate() {
                        fill_row(b * band + off, row);
                    }
                });
            }
        });
    }

    let index = elements
        .iter()
        .enumerate()
        .map(|(i, g)| (g.clone(), i))
        .collect();

    Ok(IntervalModel {
        fq: fq.clone(),
        n,
        top: c.clone(),
        elements,
        rank_of,
        by_rank,
        leq,
        index,
    })
}

impl IntervalModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }

    pub fn top(&self) -> &Matrix {
        &self.top
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn rank_of_index(&self, i: usize) -> usize {
        self.rank_of[i]
    }

    pub fn rank_sizes(&self) -> Vec<usize> {
        self.by_rank.iter().map(|v| v.len()).collect()
    }

    pub fn indices_at_rank(&self, r: usize) -> &[usize] {
        &self.by_rank[r]
    }

    pub fn index_of(&self, g: &Matrix) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &Matrix) -> bool {
        self.index.contains_key(g)
    }

    #[inline]
    pub fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    /// Number of chains e = c_0 < c_1 < ... < c_m = c whose rank jumps are
    /// the parts of alpha, by dynamic programming over the precomputed
    /// relation.
    pub fn flag_f(&self, alpha: &Composition) -> Result<u64> {
        if alpha.n() != self.n {
            return Err(Error::BadComposition(self.n));
        }
        let bottom = self.by_rank[0][0];
        let mut counts: HashMap<usize, u64> = HashMap::from([(bottom, 1)]);
        let mut height = 0;
        for &part in alpha.parts() {
            height += part;
            let mut next: HashMap<usize, u64> = HashMap::new();
            for &j in &self.by_rank[height] {
                let mut acc = 0u64;
                for (&i, &cnt) in &counts {
                    if self.leq[i][j] {
                        acc += cnt;
                    }
                }
                if acc > 0 {
                    next.insert(j, acc);
                }
            }
            counts = next;
        }
        let top = self.by_rank[self.n][0];
        Ok(counts.get(&top).copied().unwrap_or(0))
    }

    /// All chains with the given rank jumps, as index sequences starting at
    /// the identity and ending at the top.
    pub fn chains(&self, alpha: &Composition) -> Result<Vec<Vec<usize>>> {
        if alpha.n() != self.n {
            return Err(Error::BadComposition(self.n));
        }
        let mut chains: Vec<Vec<usize>> = vec![vec![self.by_rank[0][0]]];
        let mut height = 0;
        for &part in alpha.parts() {
            height += part;
            let mut next = Vec::new();
            for chain in &chains {
                let last = *chain.last().unwrap();
                for &j in &self.by_rank[height] {
                    if self.leq[last][j] {
                        let mut extended = chain.clone();
                        extended.push(j);
                        next.push(extended);
                    }
                }
            }
            chains = next;
        }
        Ok(chains)
    }

    /// Mobius value mu(e, c) by the standard recursion
    /// mu(e,e) = 1, mu(e,y) = -sum_{x < y} mu(e,x),
    /// independent of the composition alternating-sum formula.
    pub fn mobius(&self) -> i64 {
        let size = self.size();
        let mut mu = vec![0i64; size];
        mu[0] = 1;
        for j in 1..size {
            let mut acc = 0i64;
            for i in 0..size {
                if i != j && self.leq[i][j] {
                    acc += mu[i];
                }
            }
            mu[j] = -acc;
        }
        mu[size - 1]
    }

    /// Cover pairs (i, j): rank jumps of one with i below j.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.n {
            for &i in &self.by_rank[r] {
                for &j in &self.by_rank[r + 1] {
                    if self.leq[i][j] {
                        out.push((i, j));
                    }
                }
            }
        }
        out
    }

    /// Serializable snapshot of the interval.
    pub fn export(&self) -> IntervalExport {
        IntervalExport {
            n: self.n,
            q: self.fq.name(),
            top: self.top.to_string(),
            ranks: (0..=self.n)
                .map(|r| {
                    self.by_rank[r]
                        .iter()
                        .map(|&i| self.elements[i].to_string())
                        .collect()
                })
                .collect(),
            covers: self.covers().iter().map(|&(i, j)| [i, j]).collect(),
        }
    }
}

/// JSON export format: elements grouped by rank (as matrix strings) and
/// cover relations as index pairs into the rank-major element order.
#[derive(Clone, Debug, Serialize)]
pub struct IntervalExport {
    pub n: usize,
    pub q: String,
    pub top: String,
    pub ranks: Vec<Vec<String>>,
    pub covers: Vec<[usize; 2]>,
}

// ---------------------------------------------------------------------------
// Chains <-> twisted decompositions
// ---------------------------------------------------------------------------

/// An ordered direct-sum decomposition V = V_1 ⊕ ... ⊕ V_m. Summands may be
/// zero-dimensional (multichains produce those).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decomposition {
    n: usize,
    parts: Vec<Subspace>,
}

impl Decomposition {
    /// Validate that the parts are independent and span the ambient space.
    pub fn new(parts: Vec<Subspace>, fq: &Fq) -> Result<Decomposition> {
        let Some(first) = parts.first() else {
            return Err(Error::NotDecomposition);
        };
        let n = first.ambient();
        if parts.iter().any(|p| p.ambient() != n) {
            return Err(Error::NotDecomposition);
        }
        let total: usize = parts.iter().map(|p| p.dim()).sum();
        let stacked: Vec<Vec<FqElem>> = parts
            .iter()
            .flat_map(|p| p.basis().iter().cloned())
            .collect();
        if total != n || Subspace::from_rows(fq, n, stacked).dim() != n {
            return Err(Error::NotDecomposition);
        }
        Ok(Decomposition { n, parts })
    }

    pub fn parts(&self) -> &[Subspace] {
        &self.parts
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.dim()).collect()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }
}

/// Map a multichain e = g_0 <= g_1 <= ... <= g_m = c to the decomposition
/// with V_i = V^(g_{i-1}) ∩ V^(g_i^-1 c). Requires V^c = 0.
pub fn phi(chain: &[Matrix], c: &Matrix, fq: &Fq) -> Result<Decomposition> {
    if chain.len() < 2 || !chain[0].is_identity() || chain.last() != Some(c) {
        return Err(Error::NotMultichain);
    }
    if !fixed_space(c, fq).is_zero() {
        return Err(Error::FixedSpaceNotZero);
    }
    for w in chain.windows(2) {
        if !abs_leq(&w[0], &w[1], fq) {
            return Err(Error::NotMultichain);
        }
    }
    let mut parts = Vec::with_capacity(chain.len() - 1);
    for i in 1..chain.len() {
        let quot = chain[i]
            .inverse(fq)
            .expect("chain elements are invertible")
            .mul(c, fq);
        let vi = fixed_space(&chain[i - 1], fq).intersect(&fixed_space(&quot, fq), fq);
        parts.push(vi);
    }
    Decomposition::new(parts, fq)
}

/// Map a decomposition satisfying V = c(V_{<=i}) ⊕ V_{>i} for all i back to
/// the multichain (g_0, ..., g_m) with g_i acting as c on V_{<=i} and as the
/// identity on V_{>i}. Fails with the offending index if the twisted
/// complement condition does not hold.
pub fn psi(decomp: &Decomposition, c: &Matrix, fq: &Fq) -> Result<Vec<Matrix>> {
    if !fixed_space(c, fq).is_zero() {
        return Err(Error::FixedSpaceNotZero);
    }
    let n = c.n();
    assert_eq!(decomp.ambient(), n, "ambient dimension mismatch");
    let cols: Vec<Vec<FqElem>> = decomp
        .parts()
        .iter()
        .flat_map(|p| p.basis().iter().cloned())
        .collect();
    let basis = Matrix::from_cols(fq, &cols);
    let basis_inv = basis.inverse(fq).expect("decomposition basis is invertible");
    let dims = decomp.dims();
    let m = dims.len();
    let mut out = Vec::with_capacity(m + 1);
    let mut cut = 0;
    for i in 0..=m {
        if i > 0 {
            cut += dims[i - 1];
        }
        let mapped: Vec<Vec<FqElem>> = cols
            .iter()
            .enumerate()
            .map(|(j, col)| if j < cut { c.apply(col, fq) } else { col.clone() })
            .collect();
        let gi = Matrix::from_cols(fq, &mapped).mul(&basis_inv, fq);
        if !gi.is_invertible(fq) {
            return Err(Error::TwistedComplement(i));
        }
        out.push(gi);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Lattice witness and isomorphism invariants
// ---------------------------------------------------------------------------

/// Two interval elements with at least two minimal upper bounds, certifying
/// that the interval is not a lattice.
#[derive(Clone, Debug)]
pub struct LatticeWitness {
    pub a: Matrix,
    pub b: Matrix,
    pub minimal_upper_bounds: Vec<Matrix>,
}

/// Search the interval for a pair with no join. Pairs are scanned in the
/// canonical element order, so the result is deterministic.
pub fn lattice_witness(model: &IntervalModel) -> Option<LatticeWitness> {
    let size = model.size();
    for i in 0..size {
        for j in (i + 1)..size {
            if model.leq_idx(i, j) || model.leq_idx(j, i) {
                continue;
            }
            let ubs: Vec<usize> = (0..size)
                .filter(|&k| model.leq_idx(i, k) && model.leq_idx(j, k))
                .collect();
            let minimal: Vec<usize> = ubs
                .iter()
                .copied()
                .filter(|&k| !ubs.iter().any(|&k2| k2 != k && model.leq_idx(k2, k)))
                .collect();
            if minimal.len() >= 2 {
                return Some(LatticeWitness {
                    a: model.elements()[i].clone(),
                    b: model.elements()[j].clone(),
                    minimal_upper_bounds: minimal
                        .iter()
                        .map(|&k| model.elements()[k].clone())
                        .collect(),
                });
            }
        }
    }
    None
}

/// Poset-isomorphism invariants of an interval: rank sizes, sorted cover
/// degree sequences per rank, and the |det| of the 0/1 incidence matrix
/// between ranks 1 and n-1 (rows and columns in canonical element order;
/// only the absolute value is ordering independent).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalInvariants {
    pub rank_sizes: Vec<usize>,
    pub up_degrees: Vec<Vec<usize>>,
    pub down_degrees: Vec<Vec<usize>>,
    pub incidence_det_abs: String,
}

pub fn interval_invariants(model: &IntervalModel) -> IntervalInvariants {
    let n = model.n();
    let covers = model.covers();
    let size = model.size();
    let mut up = vec![0usize; size];
    let mut down = vec![0usize; size];
    for &(i, j) in &covers {
        up[i] += 1;
        down[j] += 1;
    }
    let mut up_degrees = Vec::new();
    let mut down_degrees = Vec::new();
    for r in 0..=n {
        let mut us: Vec<usize> = model.indices_at_rank(r).iter().map(|&i| up[i]).collect();
        let mut ds: Vec<usize> = model.indices_at_rank(r).iter().map(|&i| down[i]).collect();
        us.sort_unstable();
        ds.sort_unstable();
        up_degrees.push(us);
        down_degrees.push(ds);
    }

    let rows = model.indices_at_rank(1);
    let cols = model.indices_at_rank(n.saturating_sub(1).max(1));
    assert_eq!(rows.len(), cols.len(), "interval is rank symmetric");
    let inc: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|&i| {
            cols.iter()
                .map(|&j| if model.leq_idx(i, j) { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let det = bareiss_det(inc);

    IntervalInvariants {
        rank_sizes: model.rank_sizes(),
        up_degrees,
        down_degrees,
        incidence_det_abs: det.abs().to_string(),
    }
}

/// |det| of the rank-1 x rank-(n-1) incidence matrix as a big integer.
pub fn incidence_det_abs(model: &IntervalModel) -> BigUint {
    interval_invariants(model)
        .incidence_det_abs
        .parse()
        .expect("decimal digits")
}

/// Fraction-free Gaussian elimination; exact integer determinant.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{flag_formula, mobius_formula};

    fn fq(p: u64, e: u32) -> Fq {
        Fq::new(p, e).unwrap()
    }

    #[test]
    fn deterministic_singer_cycles() {
        let f2 = fq(2, 1);
        let c22 = singer_cycle(2, &f2).unwrap();
        assert_eq!(c22.to_string(), "0,1;1,1");

        let c32 = singer_cycle(3, &f2).unwrap();
        assert_eq!(c32.char_poly(&f2), PolyFq::parse(&f2, "1,1,0,1").unwrap());

        let c42 = singer_cycle(4, &f2).unwrap();
        assert_eq!(c42.char_poly(&f2), PolyFq::parse(&f2, "1,1,0,0,1").unwrap());

        let f3 = fq(3, 1);
        let c33 = singer_cycle(3, &f3).unwrap();
        assert_eq!(c33.to_string(), "0,0,2;1,0,1;0,1,0");
        let c23 = singer_cycle(2, &f3).unwrap();
        assert_eq!(c23.to_string(), "0,1;1,2");

        let f5 = fq(5, 1);
        assert_eq!(singer_cycle(2, &f5).unwrap().to_string(), "0,3;1,4");
    }

    fn order_is(c: &Matrix, expect: u64, fq: &Fq) {
        assert!(c.pow(expect, fq).is_identity());
        for r in distinct_prime_factors(expect) {
            assert!(!c.pow(expect / r, fq).is_identity());
        }
    }

    #[test]
    fn singer_cycles_have_full_order_and_are_regular_elliptic() {
        for (n, p, e) in [(2usize, 2u64, 1u32), (3, 2, 1), (4, 2, 1), (2, 3, 1), (3, 3, 1), (2, 2, 2)] {
            let field = fq(p, e);
            let c = singer_cycle(n, &field).unwrap();
            let qn = field.q().pow(n as u32);
            order_is(&c, qn - 1, &field);
            assert!(is_regular_elliptic(&c, &field));
            assert!(fixed_space(&c, &field).is_zero());
            assert_eq!(reflection_length(&c, &field), n);
        }
    }

    #[test]
    fn regular_elliptic_but_not_singer() {
        // companion of x^4+x^3+x^2+x+1 over F_2 has order 5, not 15
        let f2 = fq(2, 1);
        let c = companion(&PolyFq::parse(&f2, "1,1,1,1,1").unwrap(), &f2).unwrap();
        assert!(is_regular_elliptic(&c, &f2));
        order_is(&c, 5, &f2);
        assert!(!is_regular_elliptic(&Matrix::identity(&f2, 4), &f2));
    }

    #[test]
    fn small_intervals_have_the_right_rank_sizes() {
        let f2 = fq(2, 1);
        let c = singer_cycle(2, &f2).unwrap();
        let model = build_interval(&c, &f2).unwrap();
        assert_eq!(model.rank_sizes(), vec![1, 3, 1]);

        let f3 = fq(3, 1);
        let c = singer_cycle(2, &f3).unwrap();
        let model = build_interval(&c, &f3).unwrap();
        assert_eq!(model.rank_sizes(), vec![1, 8, 1]);

        let c = singer_cycle(3, &f2).unwrap();
        let model = build_interval(&c, &f2).unwrap();
        assert_eq!(model.rank_sizes(), vec![1, 14, 14, 1]);
    }

    #[test]
    fn interval_top_must_have_zero_fixed_space() {
        let f2 = fq(2, 1);
        let t = Matrix::parse(&f2, "1,1;0,1").unwrap();
        assert!(matches!(build_interval(&t, &f2), Err(Error::FixedSpaceNotZero)));
    }

    #[test]
    fn flag_counts_match_the_formula_on_small_cases() {
        let f2 = fq(2, 1);
        let c = singer_cycle(3, &f2).unwrap();
        let model = build_interval(&c, &f2).unwrap();
        for alpha in Composition::all(3) {
            let counted = model.flag_f(&alpha).unwrap();
            assert_eq!(BigInt::from(counted), flag_formula(&alpha, 2), "alpha = {alpha}");
        }
        // the maximal chain count (q^n - 1)^(n-1) = 49
        let maximal = Composition::new(vec![1, 1, 1]).unwrap();
        assert_eq!(model.flag_f(&maximal).unwrap(), 49);
        // a one-step chain
        let whole = Composition::new(vec![3]).unwrap();
        assert_eq!(model.flag_f(&whole).unwrap(), 1);
        assert!(model.flag_f(&Composition::new(vec![1, 1]).unwrap()).is_err());
    }

    #[test]
    fn mobius_recursion_agrees_with_the_alternating_sum() {
        let f2 = fq(2, 1);
        let c = singer_cycle(2, &f2).unwrap();
        assert_eq!(build_interval(&c, &f2).unwrap().mobius(), 2);
        let c = singer_cycle(3, &f2).unwrap();
        let model = build_interval(&c, &f2).unwrap();
        assert_eq!(BigInt::from(model.mobius()), mobius_formula(3, 2));
        assert_eq!(model.mobius(), -22);

        // degenerate base case n = 1: the interval is a two-element chain
        let f5 = fq(5, 1);
        let c1 = singer_cycle(1, &f5).unwrap();
        assert_eq!(c1.to_string(), "3");
        let model = build_interval(&c1, &f5).unwrap();
        assert_eq!(model.rank_sizes(), vec![1, 1]);
        assert_eq!(model.mobius(), -1);
    }

    #[test]
    fn parallel_interval_construction_is_identical() {
        let f2 = fq(2, 1);
        let c = singer_cycle(3, &f2).unwrap();
        let serial = build_interval(&c, &f2).unwrap();
        let opts = IntervalOptions { threads: 4, ..Default::default() };
        let par = build_interval_with(&c, &f2, opts).unwrap();
        assert_eq!(serial.elements(), par.elements());
        assert_eq!(serial.covers(), par.covers());
    }

    #[test]
    fn phi_and_psi_invert_each_other_on_small_chains() {
        let f2 = fq(2, 1);
        let c = singer_cycle(3, &f2).unwrap();
        let model = build_interval(&c, &f2).unwrap();

        // the one-step multichain maps to the single-summand decomposition
        let chain = vec![Matrix::identity(&f2, 3), c.clone()];
        let d = phi(&chain, &c, &f2).unwrap();
        assert_eq!(d.dims(), vec![3]);
        assert_eq!(psi(&d, &c, &f2).unwrap(), chain);

        // every maximal chain maps to a complete flag of lines
        let maximal = Composition::new(vec![1, 1, 1]).unwrap();
        let mut count = 0;
        for &i in model.indices_at_rank(1) {
            for &j in model.indices_at_rank(2) {
                if !model.leq_idx(i, j) {
                    continue;
                }
                count += 1;
                let chain = vec![
                    Matrix::identity(&f2, 3),
                    model.elements()[i].clone(),
                    model.elements()[j].clone(),
                    c.clone(),
                ];
                let d = phi(&chain, &c, &f2).unwrap();
                assert_eq!(d.dims(), vec![1, 1, 1]);
                assert_eq!(psi(&d, &c, &f2).unwrap(), chain);
            }
        }
        assert_eq!(count as u64, model.flag_f(&maximal).unwrap());
    }

    #[test]
    fn psi_output_is_a_multichain_on_sampled_gl3_f3_chains() {
        use crate::absorder::abs_leq;
        use rand::{Rng, SeedableRng};
        let f3 = fq(3, 1);
        let c = singer_cycle(3, &f3).unwrap();
        let model = build_interval(&c, &f3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let mut pools = Vec::new();
        for alpha in Composition::all(3) {
            pools.push(model.chains(&alpha).unwrap());
        }
        for _ in 0..1000 {
            let pool = &pools[rng.gen_range(0..pools.len())];
            let idxs = &pool[rng.gen_range(0..pool.len())];
            let chain: Vec<Matrix> = idxs.iter().map(|&i| model.elements()[i].clone()).collect();
            let d = phi(&chain, &c, &f3).unwrap();
            let back = psi(&d, &c, &f3).unwrap();
            assert_eq!(back, chain);
            for w in back.windows(2) {
                assert!(abs_leq(&w[0], &w[1], &f3));
            }
        }
    }

    #[test]
    fn psi_rejects_untwisted_decompositions() {
        // V = e1 ⊕ e2 with c the Singer cycle of GL_2(F_2): c(e1) = e2, so
        // c(V_1) + V_2 is not direct at the middle index
        let f2 = fq(2, 1);
        let c = singer_cycle(2, &f2).unwrap();
        let e1 = Subspace::from_rows(&f2, 2, vec![vec![FqElem(1), FqElem(0)]]);
        let e2 = Subspace::from_rows(&f2, 2, vec![vec![FqElem(0), FqElem(1)]]);
        let d = Decomposition::new(vec![e1, e2], &f2).unwrap();
        assert!(matches!(psi(&d, &c, &f2), Err(Error::TwistedComplement(1))));
    }

    #[test]
    fn decomposition_validation() {
        let f2 = fq(2, 1);
        let e1 = Subspace::from_rows(&f2, 2, vec![vec![FqElem(1), FqElem(0)]]);
        assert!(Decomposition::new(vec![e1.clone(), e1.clone()], &f2).is_err());
        assert!(Decomposition::new(vec![e1.clone()], &f2).is_err());
        let full = Subspace::full(&f2, 2);
        let zero = Subspace::zero(&f2, 2);
        let d = Decomposition::new(vec![zero, full], &f2).unwrap();
        assert_eq!(d.dims(), vec![0, 2]);
    }

    #[test]
    fn no_lattice_witness_in_rank_two() {
        let f3 = fq(3, 1);
        let c = singer_cycle(2, &f3).unwrap();
        let model = build_interval(&c, &f3).unwrap();
        assert!(lattice_witness(&model).is_none());
    }

    #[test]
    fn conjugate_and_inverse_tops_share_invariants() {
        let f2 = fq(2, 1);
        let c = singer_cycle(3, &f2).unwrap();
        let model = build_interval(&c, &f2).unwrap();
        let inv_a = interval_invariants(&model);

        // conjugate top
        let h = Matrix::parse(&f2, "1,1,0;0,1,0;0,0,1").unwrap();
        let conj = h.mul(&c, &f2).mul(&h.inverse(&f2).unwrap(), &f2);
        let model_c = build_interval(&conj, &f2).unwrap();
        assert_eq!(inv_a, interval_invariants(&model_c));

        // inverse top
        let model_i = build_interval(&c.inverse(&f2).unwrap(), &f2).unwrap();
        assert_eq!(inv_a, interval_invariants(&model_i));
    }

    #[test]
    fn export_round_trips_through_json() {
        let f2 = fq(2, 1);
        let c = singer_cycle(2, &f2).unwrap();
        let model = build_interval(&c, &f2).unwrap();
        let export = model.export();
        assert_eq!(export.ranks.iter().map(|r| r.len()).collect::<Vec<_>>(), vec![1, 3, 1]);
        let js = serde_json::to_string(&export).unwrap();
        assert!(js.contains("\"top\":\"0,1;1,1\""));
        // covers of the diamond: 3 up from the identity, 3 up to the top
        assert_eq!(export.covers.len(), 6);
    }
}
