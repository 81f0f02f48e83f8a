//! Dense exact linear algebra over F_q and enumeration of GL_n(F_q) at desk
//! scale.
//!
//! Matrices act on column vectors from the left. Subspaces are stored as
//! reduced-row-echelon bases, so equality, ordering and hashing are
//! canonical: two `Subspace` values are equal iff they are the same
//! subspace.
//!
//! Text formats: a matrix is rows separated by `;` with entries separated by
//! `,`, each entry the integer encoding of a field element (`"0,1;1,1"` is
//! the companion matrix of x^2+x+1 over F_2). A polynomial is a
//! comma-separated coefficient list, constant term first.

use crate::error::{Error, Result};
use crate::gf::{Fq, FqElem};
use num_bigint::BigUint;
use num_traits::One;
use std::fmt;

/// Default bound on |GL_n(F_q)| for full-group enumeration.
pub const DEFAULT_GL_BOUND: u64 = 10_000_000;

/// |GL_n(F_q)| = (q^n - 1)(q^n - q) ... (q^n - q^(n-1)), exactly.
pub fn gl_order(n: usize, q: u64) -> BigUint {
    let qn = BigUint::from(q).pow(n as u32);
    let mut out = BigUint::one();
    let mut qi = BigUint::one();
    for _ in 0..n {
        out *= &qn - &qi;
        qi *= q;
    }
    out
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

/// A square matrix over F_q, row major. Group elements are invertible; use
/// [`Matrix::is_invertible`] or [`Matrix::checked_gl`] where that matters.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    n: usize,
    q: u64,
    entries: Vec<FqElem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}]({})", self.n, self)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self[(i, j)].to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = FqElem;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &FqElem {
        &self.entries[i * self.n + j]
    }
}

impl Matrix {
    pub fn from_entries(fq: &Fq, n: usize, entries: Vec<FqElem>) -> Matrix {
        assert_eq!(entries.len(), n * n, "entry count must be n^2");
        debug_assert!(entries.iter().all(|e| e.0 < fq.q()));
        Matrix { n, q: fq.q(), entries }
    }

    pub fn from_rows(fq: &Fq, rows: &[Vec<FqElem>]) -> Matrix {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix must be square");
            entries.extend_from_slice(r);
        }
        Matrix::from_entries(fq, n, entries)
    }

    pub fn from_cols(fq: &Fq, cols: &[Vec<FqElem>]) -> Matrix {
        let n = cols.len();
        let mut m = Matrix::zero(fq, n);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), n, "matrix must be square");
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn zero(fq: &Fq, n: usize) -> Matrix {
        Matrix { n, q: fq.q(), entries: vec![FqElem::ZERO; n * n] }
    }

    pub fn identity(fq: &Fq, n: usize) -> Matrix {
        let mut m = Matrix::zero(fq, n);
        for i in 0..n {
            m.set(i, i, FqElem::ONE);
        }
        m
    }

    /// Parse the `;`/`,` text format.
    pub fn parse(fq: &Fq, text: &str) -> Result<Matrix> {
        let rows: Vec<&str> = text.trim().split(';').collect();
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let vals: Vec<&str> = row.split(',').collect();
            if vals.len() != n {
                return Err(Error::Parse(format!(
                    "matrix is not square: {n} rows but a row of {} entries",
                    vals.len()
                )));
            }
            for v in vals {
                let x: u64 = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad matrix entry {v:?}")))?;
                if x >= fq.q() {
                    return Err(Error::Parse(format!(
                        "entry {x} out of range for F_{}",
                        fq.name()
                    )));
                }
                entries.push(FqElem(x));
            }
        }
        Ok(Matrix::from_entries(fq, n, entries))
    }

    /// Parse and check invertibility, for group-element inputs.
    pub fn checked_gl(fq: &Fq, text: &str) -> Result<Matrix> {
        let m = Matrix::parse(fq, text)?;
        if !m.is_invertible(fq) {
            return Err(Error::Singular);
        }
        Ok(m)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn field_size(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FqElem) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FqElem] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<FqElem>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(k, &v)| {
            let (i, j) = (k / self.n, k % self.n);
            v == if i == j { FqElem::ONE } else { FqElem::ZERO }
        })
    }

    pub fn mul(&self, other: &Matrix, fq: &Fq) -> Matrix {
        self.assert_compatible(other, fq);
        let n = self.n;
        let mut out = Matrix::zero(fq, n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other[(k, j)];
                    if !b.is_zero() {
                        let cur = out[(i, j)];
                        out.set(i, j, fq.add(cur, fq.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix, fq: &Fq) -> Matrix {
        self.assert_compatible(other, fq);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| fq.sub(a, b))
            .collect();
        Matrix { n: self.n, q: self.q, entries }
    }

    /// g - I, whose kernel is the fixed space.
    pub fn minus_identity(&self, fq: &Fq) -> Matrix {
        self.sub(&Matrix::identity(fq, self.n), fq)
    }

    /// Matrix-vector product (column vector on the right).
    pub fn apply(&self, v: &[FqElem], fq: &Fq) -> Vec<FqElem> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = FqElem::ZERO;
                for j in 0..self.n {
                    acc = fq.add(acc, fq.mul(self[(i, j)], v[j]));
                }
                acc
            })
            .collect()
    }

    pub fn rank(&self, fq: &Fq) -> usize {
        let mut rows = self.rows();
        rref(&mut rows, fq).len()
    }

    pub fn is_invertible(&self, fq: &Fq) -> bool {
        self.rank(fq) == self.n
    }

    pub fn inverse(&self, fq: &Fq) -> Result<Matrix> {
        let n = self.n;
        // augmented [self | I], Gauss-Jordan
        let mut rows: Vec<Vec<FqElem>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { FqElem::ONE } else { FqElem::ZERO }));
                r
            })
            .collect();
        let pivots = rref(&mut rows, fq);
        if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
            return Err(Error::Singular);
        }
        let entries = rows.iter().flat_map(|r| r[n..].iter().copied()).collect();
        Ok(Matrix { n, q: self.q, entries })
    }

    pub fn pow(&self, mut k: u64, fq: &Fq) -> Matrix {
        let mut acc = Matrix::identity(fq, self.n);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, fq);
            }
            base = base.mul(&base, fq);
            k >>= 1;
        }
        acc
    }

    /// det(xI - g), monic of degree n, by minor expansion with memoization on
    /// column subsets (exact, division free).
    pub fn char_poly(&self, fq: &Fq) -> PolyFq {
        let n = self.n;
        assert!(n <= 20, "char_poly is desk scale only");
        // M[i][j] = x*delta_ij - g_ij
        let entry = |i: usize, j: usize| -> PolyFq {
            let c = fq.neg(self[(i, j)]);
            if i == j {
                PolyFq::from_coeffs(vec![c, FqElem::ONE])
            } else {
                PolyFq::from_coeffs(vec![c])
            }
        };
        let size = 1usize << n;
        let mut table: Vec<Option<PolyFq>> = vec![None; size];
        table[0] = Some(PolyFq::one());
        for mask in 0usize..size {
            let Some(cur) = table[mask].take() else { continue };
            let i = (mask as u32).count_ones() as usize; // next row to assign
            if i == n {
                table[mask] = Some(cur);
                break;
            }
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let term = entry(i, j).mul(&cur, fq);
                // sign: (-1)^{#used columns greater than j}
                let above = (mask >> (j + 1)).count_ones();
                let signed = if above % 2 == 1 { term.neg(fq) } else { term };
                let dst = mask | (1 << j);
                table[dst] = Some(match table[dst].take() {
                    Some(acc) => acc.add(&signed, fq),
                    None => signed,
                });
            }
        }
        table[size - 1].take().expect("full subset reached")
    }

    fn assert_compatible(&self, other: &Matrix, fq: &Fq) {
        assert_eq!(self.n, other.n, "matrix dimensions differ");
        assert_eq!(self.q, other.q, "matrices live over different fields");
        assert_eq!(self.q, fq.q(), "field context mismatch");
    }
}

/// Fixed space V^g = ker(g - I), in canonical echelon form.
pub fn fixed_space(g: &Matrix, fq: &Fq) -> Subspace {
    kernel(&g.minus_identity(fq), fq)
}

/// Right kernel {x : Mx = 0} as a subspace of F_q^n.
pub fn kernel(m: &Matrix, fq: &Fq) -> Subspace {
    let mut rows = m.rows();
    let pivots = rref(&mut rows, fq);
    rows.truncate(pivots.len());
    let n = m.n();
    let mut basis = Vec::new();
    let pivot_set: Vec<Option<usize>> = {
        let mut v = vec![None; n];
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = Some(r);
        }
        v
    };
    for free in 0..n {
        if pivot_set[free].is_some() {
            continue;
        }
        let mut x = vec![FqElem::ZERO; n];
        x[free] = FqElem::ONE;
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = fq.neg(rows[r][free]);
        }
        basis.push(x);
    }
    Subspace::from_rows(fq, n, basis)
}

/// Reduce rows in place to reduced row echelon form; returns the pivot
/// columns. Zero rows end up at the bottom and are not truncated.
fn rref(rows: &mut Vec<Vec<FqElem>>, fq: &Fq) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = fq.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = fq.mul(*x, inv);
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c];
                for j in 0..ncols {
                    let s = fq.mul(f, rows[r][j]);
                    rows[i][j] = fq.sub(rows[i][j], s);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    pivots
}

// ---------------------------------------------------------------------------
// Subspaces
// ---------------------------------------------------------------------------

/// A subspace of F_q^n held as a reduced-row-echelon basis with no zero
/// rows. The representation is canonical: equality, ordering and hashing of
/// `Subspace` values agree with equality of subspaces.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    q: u64,
    basis: Vec<Vec<FqElem>>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "Subspace[{}/{}]({})", self.dim(), self.n, rows.join(";"))
    }
}

impl Subspace {
    /// Span of the given row vectors, canonicalized.
    pub fn from_rows(fq: &Fq, n: usize, rows: Vec<Vec<FqElem>>) -> Subspace {
        for r in &rows {
            assert_eq!(r.len(), n, "row length must match ambient dimension");
        }
        let mut rows = rows;
        let pivots = rref(&mut rows, fq);
        rows.truncate(pivots.len());
        Subspace { n, q: fq.q(), basis: rows }
    }

    pub fn zero(fq: &Fq, n: usize) -> Subspace {
        Subspace { n, q: fq.q(), basis: Vec::new() }
    }

    pub fn full(fq: &Fq, n: usize) -> Subspace {
        let basis = (0..n)
            .map(|i| {
                let mut r = vec![FqElem::ZERO; n];
                r[i] = FqElem::ONE;
                r
            })
            .collect();
        Subspace { n, q: fq.q(), basis }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<FqElem>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.n
    }

    /// Reduce `v` against the basis; the result is zero iff `v` lies in the
    /// subspace.
    fn reduce(&self, v: &[FqElem], fq: &Fq) -> Vec<FqElem> {
        let mut v = v.to_vec();
        for row in &self.basis {
            let pivot = row.iter().position(|e| !e.is_zero()).expect("no zero rows");
            let c = v[pivot];
            if !c.is_zero() {
                for j in 0..self.n {
                    let s = fq.mul(c, row[j]);
                    v[j] = fq.sub(v[j], s);
                }
            }
        }
        v
    }

    pub fn contains_vector(&self, v: &[FqElem], fq: &Fq) -> bool {
        assert_eq!(v.len(), self.n, "ambient dimension mismatch");
        self.reduce(v, fq).iter().all(|e| e.is_zero())
    }

    pub fn contains(&self, other: &Subspace, fq: &Fq) -> bool {
        self.assert_ambient(other);
        other.basis.iter().all(|r| self.contains_vector(r, fq))
    }

    /// Row space of the stacked bases.
    pub fn sum(&self, other: &Subspace, fq: &Fq) -> Subspace {
        self.assert_ambient(other);
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::from_rows(fq, self.n, rows)
    }

    /// Intersection via the kernel of the stacked-basis relation matrix:
    /// solve u A = v B and collect the common vectors u A.
    pub fn intersect(&self, other: &Subspace, fq: &Fq) -> Subspace {
        self.assert_ambient(other);
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Subspace::zero(fq, self.n);
        }
        // rows = ambient coordinates, columns = (u, v) unknowns
        let mut rel: Vec<Vec<FqElem>> = Vec::with_capacity(self.n);
        for col in 0..self.n {
            let mut row = Vec::with_capacity(a + b);
            for i in 0..a {
                row.push(self.basis[i][col]);
            }
            for j in 0..b {
                row.push(fq.neg(other.basis[j][col]));
            }
            rel.push(row);
        }
        let pivots = rref(&mut rel, fq);
        rel.truncate(pivots.len());
        let unknowns = a + b;
        let mut pivot_of = vec![None; unknowns];
        for (r, &c) in pivots.iter().enumerate() {
            pivot_of[c] = Some(r);
        }
        let mut rows = Vec::new();
        for free in 0..unknowns {
            if pivot_of[free].is_some() {
                continue;
            }
            let mut x = vec![FqElem::ZERO; unknowns];
            x[free] = FqElem::ONE;
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = fq.neg(rel[r][free]);
            }
            // common vector is sum_i x_i * (basis row i of self)
            let mut vec = vec![FqElem::ZERO; self.n];
            for i in 0..a {
                if x[i].is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    vec[j] = fq.add(vec[j], fq.mul(x[i], self.basis[i][j]));
                }
            }
            rows.push(vec);
        }
        Subspace::from_rows(fq, self.n, rows)
    }

    /// Image {m v : v in self}.
    pub fn apply(&self, m: &Matrix, fq: &Fq) -> Subspace {
        assert_eq!(m.n(), self.n, "ambient dimension mismatch");
        let rows = self.basis.iter().map(|r| m.apply(r, fq)).collect();
        Subspace::from_rows(fq, self.n, rows)
    }

    fn assert_ambient(&self, other: &Subspace) {
        assert_eq!(self.n, other.n, "ambient dimension mismatch");
        assert_eq!(self.q, other.q, "ambient field mismatch");
    }
}

/// All k-dimensional subspaces of F_q^n, by echelon profile. The count is
/// the Gaussian binomial coefficient.
pub fn enumerate_subspaces(n: usize, k: usize, fq: &Fq) -> Vec<Subspace> {
    assert!(k <= n);
    let mut out = Vec::new();
    // choose pivot columns p_0 < ... < p_{k-1}
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free positions: (row i, col j) with j > pivots[i], j not a pivot
        let mut free = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for j in (p + 1)..n {
                if !pivots.contains(&j) {
                    free.push((i, j));
                }
            }
        }
        let total = (fq.q() as u128).pow(free.len() as u32);
        for idx in 0..total {
            let mut rows = vec![vec![FqElem::ZERO; n]; k];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = FqElem::ONE;
            }
            let mut v = idx;
            for &(i, j) in &free {
                rows[i][j] = FqElem((v % fq.q() as u128) as u64);
                v /= fq.q() as u128;
            }
            out.push(Subspace { n, q: fq.q(), basis: rows });
        }
        // next pivot combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < n - (k - i) {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Polynomials over F_q
// ---------------------------------------------------------------------------

/// A dense polynomial over F_q, little-endian coefficients, no trailing
/// zeros (the zero polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyFq {
    coeffs: Vec<FqElem>,
}

impl fmt::Display for PolyFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl PolyFq {
    pub fn from_coeffs(mut coeffs: Vec<FqElem>) -> PolyFq {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyFq { coeffs }
    }

    pub fn zero() -> PolyFq {
        PolyFq { coeffs: Vec::new() }
    }

    pub fn one() -> PolyFq {
        PolyFq { coeffs: vec![FqElem::ONE] }
    }

    pub fn x() -> PolyFq {
        PolyFq { coeffs: vec![FqElem::ZERO, FqElem::ONE] }
    }

    /// Parse a comma-separated coefficient list, constant term first.
    pub fn parse(fq: &Fq, text: &str) -> Result<PolyFq> {
        let mut coeffs = Vec::new();
        for part in text.trim().split(',') {
            let x: u64 = part
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {part:?}")))?;
            if x >= fq.q() {
                return Err(Error::Parse(format!(
                    "coefficient {x} out of range for F_{}",
                    fq.name()
                )));
            }
            coeffs.push(FqElem(x));
        }
        Ok(PolyFq::from_coeffs(coeffs))
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&FqElem::ONE)
    }

    pub fn constant_term(&self) -> FqElem {
        self.coeff(0)
    }

    pub fn add(&self, other: &PolyFq, fq: &Fq) -> PolyFq {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| fq.add(self.coeff(i), other.coeff(i)))
            .collect();
        PolyFq::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &PolyFq, fq: &Fq) -> PolyFq {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| fq.sub(self.coeff(i), other.coeff(i)))
            .collect();
        PolyFq::from_coeffs(coeffs)
    }

    pub fn neg(&self, fq: &Fq) -> PolyFq {
        PolyFq::from_coeffs(self.coeffs.iter().map(|&c| fq.neg(c)).collect())
    }

    pub fn scale(&self, c: FqElem, fq: &Fq) -> PolyFq {
        PolyFq::from_coeffs(self.coeffs.iter().map(|&a| fq.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &PolyFq, fq: &Fq) -> PolyFq {
        if self.is_zero() || other.is_zero() {
            return PolyFq::zero();
        }
        let mut out = vec![FqElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = fq.add(out[i + j], fq.mul(a, b));
            }
        }
        PolyFq::from_coeffs(out)
    }

    pub fn rem(&self, modulus: &PolyFq, fq: &Fq) -> PolyFq {
        let dm = modulus.degree().expect("modulus must be nonzero");
        let lead_inv = fq.inv(*modulus.coeffs.last().unwrap()).unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > dm {
            let dr = r.len() - 1;
            let c = fq.mul(r[dr], lead_inv);
            if !c.is_zero() {
                let shift = dr - dm;
                for (k, &mc) in modulus.coeffs.iter().enumerate() {
                    let s = fq.mul(c, mc);
                    r[shift + k] = fq.sub(r[shift + k], s);
                }
            }
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
            if r.len() <= dm {
                break;
            }
        }
        PolyFq::from_coeffs(r)
    }

    pub fn mulmod(&self, other: &PolyFq, modulus: &PolyFq, fq: &Fq) -> PolyFq {
        self.mul(other, fq).rem(modulus, fq)
    }

    pub fn powmod(&self, mut k: u64, modulus: &PolyFq, fq: &Fq) -> PolyFq {
        let mut acc = PolyFq::one().rem(modulus, fq);
        let mut base = self.rem(modulus, fq);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mulmod(&base, modulus, fq);
            }
            base = base.mulmod(&base, modulus, fq);
            k >>= 1;
        }
        acc
    }

    pub fn gcd(&self, other: &PolyFq, fq: &Fq) -> PolyFq {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, fq);
            a = b;
            b = r;
        }
        // normalize monic
        if let Some(&lead) = a.coeffs.last() {
            let inv = fq.inv(lead).unwrap();
            a = a.scale(inv, fq);
        }
        a
    }

    pub fn eval(&self, x: FqElem, fq: &Fq) -> FqElem {
        let mut acc = FqElem::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = fq.add(fq.mul(acc, x), c);
        }
        acc
    }

    /// Rabin irreducibility test over F_q.
    pub fn is_irreducible(&self, fq: &Fq) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let x = PolyFq::x();
        let checkpoints: Vec<usize> = crate::gf::distinct_prime_factors(n as u64)
            .iter()
            .map(|&r| n / r as usize)
            .collect();
        let mut h = x.rem(self, fq);
        for i in 1..=n {
            h = h.powmod(fq.q(), self, fq); // one Frobenius step: h -> h^q
            if checkpoints.contains(&i) {
                let diff = h.sub(&x, fq);
                let g = diff.gcd(self, fq);
                if g.degree() != Some(0) {
                    return false;
                }
            }
        }
        h == x.rem(self, fq)
    }
}

/// Companion matrix of a monic polynomial with nonzero constant term:
/// ones on the subdiagonal, last column the negated coefficients.
pub fn companion(f: &PolyFq, fq: &Fq) -> Result<Matrix> {
    assert!(f.is_monic(), "companion matrix requires a monic polynomial");
    let n = f.degree().expect("nonzero polynomial");
    assert!(n >= 1);
    if f.constant_term().is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let mut m = Matrix::zero(fq, n);
    for i in 0..n - 1 {
        m.set(i + 1, i, FqElem::ONE);
    }
    for i in 0..n {
        m.set(i, n - 1, fq.neg(f.coeff(i)));
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// Enumeration of GL_n(F_q)
// ---------------------------------------------------------------------------

/// Streams every invertible n x n matrix over F_q exactly once, in
/// row-by-row lexicographic order on entry encodings. Rows are built
/// depth-first with an incremental echelon basis, so only linearly
/// independent prefixes are explored.
pub struct GlEnumerator<'a> {
    fq: &'a Fq,
    n: usize,
    qn: u64,
    rows: Vec<u64>,
    /// bases[d] = echelon basis (rows normalized, sorted by pivot) of the
    /// first d chosen rows.
    bases: Vec<Vec<Vec<FqElem>>>,
    next_val: u64,
    done: bool,
}

impl<'a> GlEnumerator<'a> {
    fn decode(&self, mut v: u64) -> Vec<FqElem> {
        let q = self.fq.q();
        let mut row = vec![FqElem::ZERO; self.n];
        for i in (0..self.n).rev() {
            row[i] = FqElem(v % q);
            v /= q;
        }
        row
    }

    /// Reduce against the echelon basis; if independent, return the basis
    /// with the normalized remainder inserted.
    fn try_insert(basis: &[Vec<FqElem>], row: &[FqElem], fq: &Fq) -> Option<Vec<Vec<FqElem>>> {
        let mut v = row.to_vec();
        for b in basis {
            let pivot = b.iter().position(|e| !e.is_zero()).unwrap();
            let c = v[pivot];
            if !c.is_zero() {
                for j in 0..v.len() {
                    let s = fq.mul(c, b[j]);
                    v[j] = fq.sub(v[j], s);
                }
            }
        }
        let pivot = v.iter().position(|e| !e.is_zero())?;
        let inv = fq.inv(v[pivot]).unwrap();
        for x in v.iter_mut() {
            *x = fq.mul(*x, inv);
        }
        let mut out = basis.to_vec();
        let at = out
            .iter()
            .position(|b| b.iter().position(|e| !e.is_zero()).unwrap() > pivot)
            .unwrap_or(out.len());
        out.insert(at, v);
        Some(out)
    }
}

impl<'a> Iterator for GlEnumerator<'a> {
    type Item = Matrix;

    fn next(&mut self) -> Option<Matrix> {
        loop {
            if self.done {
                return None;
            }
            let depth = self.rows.len();
            let mut v = self.next_val;
            let mut placed = false;
            while v < self.qn {
                let row = self.decode(v);
                if let Some(newbasis) = Self::try_insert(&self.bases[depth], &row, self.fq) {
                    self.rows.push(v);
                    self.bases.truncate(depth + 1);
                    self.bases.push(newbasis);
                    placed = true;
                    break;
                }
                v += 1;
            }
            if !placed {
                if depth == 0 {
                    self.done = true;
                    return None;
                }
                let prev = self.rows.pop().unwrap();
                self.bases.truncate(self.rows.len() + 1);
                self.next_val = prev + 1;
                continue;
            }
            if self.rows.len() == self.n {
                let mut entries = Vec::with_capacity(self.n * self.n);
                for &rv in &self.rows {
                    entries.extend(self.decode(rv));
                }
                let m = Matrix { n: self.n, q: self.fq.q(), entries };
                let last = self.rows.pop().unwrap();
                self.bases.truncate(self.rows.len() + 1);
                self.next_val = last + 1;
                return Some(m);
            }
            self.next_val = 0;
        }
    }
}

/// Enumerate GL_n(F_q) under the default bound on the group order.
pub fn enumerate_gl<'a>(n: usize, fq: &'a Fq) -> Result<GlEnumerator<'a>> {
    enumerate_gl_bounded(n, fq, DEFAULT_GL_BOUND)
}

/// Enumerate GL_n(F_q), refusing groups larger than `bound`.
pub fn enumerate_gl_bounded<'a>(n: usize, fq: &'a Fq, bound: u64) -> Result<GlEnumerator<'a>> {
    assert!(n >= 1);
    let order = gl_order(n, fq.q());
    if order > BigUint::from(bound) {
        return Err(Error::GroupTooLarge { order: order.to_string(), bound });
    }
    Ok(GlEnumerator {
        fq,
        n,
        qn: fq.q().pow(n as u32),
        rows: Vec::new(),
        bases: vec![Vec::new()],
        next_val: 0,
        done: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(fq: &Fq, text: &str) -> Matrix {
        Matrix::parse(fq, text).unwrap()
    }

    #[test]
    fn gl_order_matches_product_formula() {
        assert_eq!(gl_order(2, 2), BigUint::from(6u32));
        assert_eq!(gl_order(3, 2), BigUint::from(168u32));
        assert_eq!(gl_order(4, 2), BigUint::from(20160u32));
        assert_eq!(gl_order(3, 3), BigUint::from(11232u32));
        assert_eq!(gl_order(2, 5), BigUint::from(480u32));
    }

    #[test]
    fn fixed_space_examples() {
        let f2 = Fq::new(2, 1).unwrap();
        let id = Matrix::identity(&f2, 2);
        assert!(fixed_space(&id, &f2).is_full());

        // transvection: fixes span{(1,0)}
        let t = f(&f2, "1,1;0,1");
        let fs = fixed_space(&t, &f2);
        assert_eq!(fs.dim(), 1);
        assert!(fs.contains_vector(&[FqElem(1), FqElem(0)], &f2));

        // Singer cycle of GL_3(F_2): companion of x^3+x+1, fixes only 0
        let c = companion(&PolyFq::parse(&f2, "1,1,0,1").unwrap(), &f2).unwrap();
        assert!(fixed_space(&c, &f2).is_zero());
    }

    #[test]
    fn rank_nullity_exhaustive_small() {
        // over all matrices, dim ker(g-I) + rank(g-I) = n
        for (p, e, n) in [(2u64, 1u32, 2usize), (3, 1, 2), (2, 1, 3), (2, 2, 2)] {
            let fq = Fq::new(p, e).unwrap();
            let q = fq.q();
            let total = q.pow((n * n) as u32);
            for code in 0..total {
                let mut v = code;
                let entries: Vec<FqElem> = (0..n * n)
                    .map(|_| {
                        let e = FqElem(v % q);
                        v /= q;
                        e
                    })
                    .collect();
                let m = Matrix::from_entries(&fq, n, entries);
                let gi = m.minus_identity(&fq);
                assert_eq!(fixed_space(&m, &fq).dim() + gi.rank(&fq), n);
            }
        }
    }

    #[test]
    fn subspace_sum_and_intersection() {
        let f2 = Fq::new(2, 1).unwrap();
        let e1 = vec![FqElem(1), FqElem(0), FqElem(0)];
        let e2 = vec![FqElem(0), FqElem(1), FqElem(0)];
        let e3 = vec![FqElem(0), FqElem(0), FqElem(1)];
        let a = Subspace::from_rows(&f2, 3, vec![e1.clone(), e2.clone()]);
        let b = Subspace::from_rows(&f2, 3, vec![e2.clone(), e3.clone()]);
        let cap = a.intersect(&b, &f2);
        assert_eq!(cap, Subspace::from_rows(&f2, 3, vec![e2.clone()]));
        // double check against the 8 vectors
        for v0 in 0..2u64 {
            for v1 in 0..2u64 {
                for v2 in 0..2u64 {
                    let v = vec![FqElem(v0), FqElem(v1), FqElem(v2)];
                    let inboth = a.contains_vector(&v, &f2) && b.contains_vector(&v, &f2);
                    assert_eq!(inboth, cap.contains_vector(&v, &f2));
                }
            }
        }

        let sum = Subspace::from_rows(&f2, 2, vec![vec![FqElem(1), FqElem(0)]]).sum(
            &Subspace::from_rows(&f2, 2, vec![vec![FqElem(0), FqElem(1)]]),
            &f2,
        );
        assert!(sum.is_full());

        // intersect with full space is the identity
        for k in 0..=3 {
            for s in enumerate_subspaces(3, k, &f2) {
                assert_eq!(s.intersect(&Subspace::full(&f2, 3), &f2), s);
                assert_eq!(s.sum(&s, &f2), s);
            }
        }
    }

    #[test]
    fn modular_dimension_identity() {
        let f3 = Fq::new(3, 1).unwrap();
        let mut all = Vec::new();
        for k in 0..=2 {
            all.extend(enumerate_subspaces(2, k, &f3));
        }
        for a in &all {
            for b in &all {
                let s = a.sum(b, &f3);
                let i = a.intersect(b, &f3);
                assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
                assert_eq!(a.intersect(b, &f3), b.intersect(a, &f3));
            }
        }
    }

    #[test]
    fn char_poly_examples() {
        let f2 = Fq::new(2, 1).unwrap();
        let id = Matrix::identity(&f2, 2);
        // (x+1)^2 = x^2 + 1 over F_2
        assert_eq!(id.char_poly(&f2), PolyFq::parse(&f2, "1,0,1").unwrap());

        let p = PolyFq::parse(&f2, "1,1,0,1").unwrap(); // x^3+x+1
        let c = companion(&p, &f2).unwrap();
        assert_eq!(c.char_poly(&f2), p);

        let f3 = Fq::new(3, 1).unwrap();
        let c3 = f(&f3, "0,0,2;1,0,1;0,1,0");
        let cp = c3.char_poly(&f3);
        assert_eq!(cp, PolyFq::parse(&f3, "1,2,0,1").unwrap()); // x^3 + 2x + 1
        // irreducible over F_3: a cubic with no roots
        for x in 0..3 {
            assert_ne!(cp.eval(FqElem(x), &f3), FqElem::ZERO);
        }
        assert!(cp.is_irreducible(&f3));
    }

    #[test]
    fn char_poly_matches_companion_for_random_monics() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let fq = Fq::new(p, e).unwrap();
            for deg in 1..=4 {
                for _ in 0..20 {
                    let mut coeffs: Vec<FqElem> =
                        (0..deg).map(|_| FqElem(rng.gen_range(0..fq.q()))).collect();
                    if coeffs[0].is_zero() {
                        coeffs[0] = FqElem::ONE;
                    }
                    coeffs.push(FqElem::ONE);
                    let poly = PolyFq::from_coeffs(coeffs);
                    let c = companion(&poly, &fq).unwrap();
                    assert_eq!(c.char_poly(&fq), poly);
                }
            }
        }
    }

    #[test]
    fn char_poly_constant_term_detects_invertibility() {
        // det(xI - g) has constant term (-1)^n det(g)
        let f3 = Fq::new(3, 1).unwrap();
        let q = f3.q();
        for code in 0..q.pow(4) {
            let mut v = code;
            let entries: Vec<FqElem> = (0..4)
                .map(|_| {
                    let e = FqElem(v % q);
                    v /= q;
                    e
                })
                .collect();
            let m = Matrix::from_entries(&f3, 2, entries);
            let cp = m.char_poly(&f3);
            assert_eq!(!cp.constant_term().is_zero(), m.is_invertible(&f3));
        }
    }

    #[test]
    fn companion_examples() {
        let f2 = Fq::new(2, 1).unwrap();
        let m1 = companion(&PolyFq::parse(&f2, "1,1").unwrap(), &f2).unwrap(); // x - 1 = x + 1
        assert_eq!(m1.to_string(), "1");

        let m2 = companion(&PolyFq::parse(&f2, "1,1,1").unwrap(), &f2).unwrap();
        assert_eq!(m2.to_string(), "0,1;1,1");

        let m3 = companion(&PolyFq::parse(&f2, "1,1,0,1").unwrap(), &f2).unwrap();
        assert_eq!(m3.to_string(), "0,0,1;1,0,1;0,1,0");

        assert!(matches!(
            companion(&PolyFq::parse(&f2, "0,1,1").unwrap(), &f2),
            Err(Error::ZeroConstantTerm)
        ));
    }

    #[test]
    fn inverse_and_pow() {
        let f3 = Fq::new(3, 1).unwrap();
        let c = f(&f3, "0,0,2;1,0,1;0,1,0");
        let ci = c.inverse(&f3).unwrap();
        assert!(c.mul(&ci, &f3).is_identity());
        assert!(c.pow(0, &f3).is_identity());
        assert_eq!(c.pow(3, &f3), c.mul(&c, &f3).mul(&c, &f3));
        let singular = f(&f3, "1,1,1;1,1,1;0,0,1");
        assert!(matches!(singular.inverse(&f3), Err(Error::Singular)));
    }

    #[test]
    fn enumerates_gl_counts() {
        for (n, p, e, expected) in [
            (2usize, 2u64, 1u32, 6usize),
            (3, 2, 1, 168),
            (1, 5, 1, 4),
            (2, 3, 1, 48),
            (2, 2, 2, 180),
        ] {
            let fq = Fq::new(p, e).unwrap();
            let count = enumerate_gl(n, &fq).unwrap().count();
            assert_eq!(BigUint::from(count), gl_order(n, fq.q()));
            assert_eq!(count, expected);
        }
    }

    #[test]
    fn enumeration_is_deterministic_and_duplicate_free() {
        let f2 = Fq::new(2, 1).unwrap();
        let a: Vec<Matrix> = enumerate_gl(3, &f2).unwrap().collect();
        let b: Vec<Matrix> = enumerate_gl(3, &f2).unwrap().collect();
        assert_eq!(a, b);
        let set: std::collections::HashSet<_> = a.iter().cloned().collect();
        assert_eq!(set.len(), a.len());
        // row-lex order: first element of GL_2(F_2)
        let first = enumerate_gl(2, &f2).unwrap().next().unwrap();
        assert_eq!(first.to_string(), "0,1;1,0");
        // every element is invertible
        assert!(a.iter().all(|m| m.is_invertible(&f2)));
    }

    #[test]
    fn enumeration_bound_is_enforced() {
        let f5 = Fq::new(5, 1).unwrap();
        assert!(matches!(
            enumerate_gl_bounded(4, &f5, 1000),
            Err(Error::GroupTooLarge { .. })
        ));
    }

    #[test]
    fn subspace_enumeration_counts_match_gaussian_binomials() {
        let f2 = Fq::new(2, 1).unwrap();
        assert_eq!(enumerate_subspaces(4, 2, &f2).len(), 35);
        assert_eq!(enumerate_subspaces(3, 1, &f2).len(), 7);
        let f3 = Fq::new(3, 1).unwrap();
        assert_eq!(enumerate_subspaces(2, 1, &f3).len(), 4);
        // all distinct
        let all = enumerate_subspaces(4, 2, &f2);
        let set: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
    }

    #[test]
    fn matrix_text_round_trip() {
        let f2 = Fq::new(2, 1).unwrap();
        let m = f(&f2, "0,1;1,1");
        assert_eq!(m.to_string(), "0,1;1,1");
        assert!(Matrix::parse(&f2, "0,1;1").is_err());
        assert!(Matrix::parse(&f2, "0,2;1,1").is_err());
        assert!(matches!(
            Matrix::checked_gl(&f2, "1,1;1,1"),
            Err(Error::Singular)
        ));
    }
}
