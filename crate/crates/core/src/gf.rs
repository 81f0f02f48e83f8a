//! Exact arithmetic in the finite field F_q for q = p^e.
//!
//! Elements are encoded as integers in `[0, q)`: the base-p digits of the
//! encoding are the coefficients of the representative polynomial, least
//! significant coefficient first. Encoding 0 is the additive identity and
//! encoding 1 the multiplicative identity.
//!
//! The modulus polynomial is chosen deterministically: the first monic
//! degree-e polynomial, in lexicographic order of coefficient tuples with
//! the constant term varying fastest, that is irreducible over F_p and whose
//! root generates F_q^x. The root of the modulus is the stored generator, so
//! two fields built from the same (p, e) are identical in every detail.
//!
//! Multiplication and division go through log/antilog tables when
//! q <= 2^16 and fall back to polynomial reduction above that.

use crate::error::{Error, Result};
use std::fmt;

/// Largest field size [`Fq::new`] will construct.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// Field sizes up to this use log/antilog tables for mul/div/inv.
const TABLE_LIMIT: u64 = 1 << 16;

/// An element of F_q, encoded as an integer in `[0, q)`.
///
/// The encoding is canonical, so derived equality, ordering and hashing
/// agree with field-element equality. Arithmetic lives on [`Fq`] since the
/// element does not know its field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElem(pub u64);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field F_q with q = p^e, its modulus polynomial and a primitive
/// element.
///
/// Immutable after construction; all operations take `&self` and are safe to
/// call concurrently.
#[derive(Clone, Debug)]
pub struct Fq {
    p: u64,
    e: u32,
    q: u64,
    /// Monic modulus over F_p, constant term first, length e+1. For e = 1
    /// this is the linear polynomial t + c0 whose root is the generator.
    modulus: Vec<u64>,
    /// A fixed element of multiplicative order q - 1 (the root of the
    /// modulus, i.e. the class of t for e >= 2).
    generator: FqElem,
    /// exp[i] = generator^i for i in [0, q-1); empty above TABLE_LIMIT.
    exp: Vec<u64>,
    /// log[exp[i]] = i; log[0] is unused; empty above TABLE_LIMIT.
    log: Vec<u32>,
    /// Distinct prime factors of q - 1.
    qm1_factors: Vec<u64>,
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        // construction is deterministic per (p, e)
        self.p == other.p && self.e == other.e
    }
}
impl Eq for Fq {}

impl Fq {
    /// Build the deterministic field context for (p, e).
    pub fn new(p: u64, e: u32) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        assert!(e >= 1, "extension degree must be >= 1");
        let q128 = (p as u128).pow(e);
        if q128 > MAX_FIELD_SIZE as u128 {
            return Err(Error::FieldTooLarge {
                q: q128,
                bound: MAX_FIELD_SIZE,
            });
        }
        let q = q128 as u64;
        let qm1_factors = distinct_prime_factors(q - 1);

        let (modulus, generator) = find_modulus(p, e, q, &qm1_factors);

        let mut fq = Fq {
            p,
            e,
            q,
            modulus,
            generator,
            exp: Vec::new(),
            log: Vec::new(),
            qm1_factors,
        };
        if q <= TABLE_LIMIT {
            fq.build_tables();
        }
        Ok(fq)
    }

    /// Parse a field name, `"p"` or `"p^e"`.
    pub fn parse(name: &str) -> Result<Fq> {
        let (ps, es) = match name.split_once('^') {
            Some((a, b)) => (a, b),
            None => (name, "1"),
        };
        let p: u64 = ps
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad field name {name:?}")))?;
        let e: u32 = es
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad field name {name:?}")))?;
        if e == 0 {
            return Err(Error::Parse(format!("bad field name {name:?}")));
        }
        Fq::new(p, e)
    }

    /// The field name, `"p"` for prime fields and `"p^e"` otherwise.
    pub fn name(&self) -> String {
        if self.e == 1 {
            format!("{}", self.p)
        } else {
            format!("{}^{}", self.p, self.e)
        }
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    /// The modulus polynomial, constant term first (length e+1, monic).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// A fixed element of multiplicative order q - 1.
    pub fn generator(&self) -> FqElem {
        self.generator
    }

    /// Checked constructor for an element from its integer encoding.
    pub fn elem(&self, value: u64) -> FqElem {
        assert!(value < self.q, "encoding {value} out of range for {}", self.name());
        FqElem(value)
    }

    /// Iterator over all field elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q).map(FqElem)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.p == 2 {
            FqElem(a.0 ^ b.0)
        } else if self.e == 1 {
            FqElem((a.0 + b.0) % self.p)
        } else {
            self.digitwise(a, b, |x, y, p| (x + y) % p)
        }
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.p == 2 {
            FqElem(a.0 ^ b.0)
        } else if self.e == 1 {
            FqElem((a.0 + self.p - b.0) % self.p)
        } else {
            self.digitwise(a, b, |x, y, p| (x + p - y) % p)
        }
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        self.sub(FqElem::ZERO, a)
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.is_zero() || b.is_zero() {
            return FqElem::ZERO;
        }
        if !self.exp.is_empty() {
            let la = self.log[a.0 as usize] as u64;
            let lb = self.log[b.0 as usize] as u64;
            FqElem(self.exp[((la + lb) % (self.q - 1)) as usize])
        } else {
            self.mul_poly(a, b)
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !self.exp.is_empty() {
            let la = self.log[a.0 as usize] as u64;
            Ok(FqElem(self.exp[((self.q - 1 - la) % (self.q - 1)) as usize]))
        } else {
            Ok(self.pow(a, self.q - 2))
        }
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FqElem, mut k: u64) -> FqElem {
        if k == 0 {
            return FqElem::ONE;
        }
        if a.is_zero() {
            return FqElem::ZERO;
        }
        let mut base = a;
        let mut acc = FqElem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Least k >= 1 with a^k = 1; divides q - 1.
    pub fn element_order(&self, a: FqElem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::OrderOfZero);
        }
        let mut ord = self.q - 1;
        for &f in &self.qm1_factors {
            while ord.is_multiple_of(f) && self.pow(a, ord / f) == FqElem::ONE {
                ord /= f;
            }
        }
        Ok(ord)
    }

    fn digitwise(&self, a: FqElem, b: FqElem, op: fn(u64, u64, u64) -> u64) -> FqElem {
        let (mut av, mut bv) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += op(av % self.p, bv % self.p, self.p) * place;
            av /= self.p;
            bv /= self.p;
            place *= self.p;
        }
        FqElem(out)
    }

    fn digits(&self, a: FqElem) -> Vec<u64> {
        let mut v = a.0;
        let mut out = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    fn elem_from_digits(&self, d: &[u64]) -> FqElem {
        let mut out = 0;
        for &c in d.iter().rev() {
            out = out * self.p + c % self.p;
        }
        FqElem(out)
    }

    /// Schoolbook polynomial multiplication followed by reduction mod the
    /// modulus. Only used above TABLE_LIMIT and while building the tables.
    fn mul_poly(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.e == 1 {
            return FqElem(a.0 * b.0 % self.p);
        }
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * self.e as usize];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce: for each coefficient of degree >= e, subtract c * t^(deg-e) * modulus
        for deg in (self.e as usize..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            let shift = deg - self.e as usize;
            for (k, &m) in self.modulus.iter().enumerate().take(self.e as usize) {
                let idx = shift + k;
                prod[idx] = (prod[idx] + self.p * self.p - (c * m % self.p)) % self.p;
                // (note: modulus is monic; the leading term is the one being cleared)
            }
        }
        self.elem_from_digits(&prod[..self.e as usize])
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![u32::MAX; q];
        let mut cur = FqElem::ONE;
        for i in 0..(q - 1) {
            debug_assert_eq!(log[cur.0 as usize], u32::MAX, "generator order too small");
            exp.push(cur.0);
            log[cur.0 as usize] = i as u32;
            cur = self.mul_poly(cur, self.generator);
        }
        debug_assert_eq!(cur, FqElem::ONE);
        self.exp = exp;
        self.log = log;
    }
}

/// Find the first monic degree-e polynomial over F_p, ordered
/// lexicographically on coefficient tuples with the constant term varying
/// fastest, that is irreducible and has a primitive root. Returns the
/// modulus (constant first, length e+1) and the generator (its root).
fn find_modulus(p: u64, e: u32, q: u64, qm1_factors: &[u64]) -> (Vec<u64>, FqElem) {
    for k in 0..q {
        // digits of k in base p are the non-leading coefficients
        let mut coeffs = Vec::with_capacity(e as usize + 1);
        let mut v = k;
        for _ in 0..e {
            coeffs.push(v % p);
            v /= p;
        }
        coeffs.push(1);

        if e == 1 {
            // t + c0 has root -c0; primitive iff the root generates F_p^x
            let root = (p - coeffs[0]) % p;
            if root == 0 {
                continue;
            }
            if order_in_prime_field(root, p, qm1_factors) == p - 1 {
                return (coeffs, FqElem(root));
            }
        } else {
            if !poly_is_irreducible(&coeffs, p) {
                continue;
            }
            // the root is the class of t; check its order is q - 1
            if root_is_primitive(&coeffs, p, q, qm1_factors) {
                return (coeffs, FqElem(p));
            }
        }
    }
    unreachable!("F_{q}^x is cyclic, so a primitive polynomial exists");
}

fn order_in_prime_field(a: u64, p: u64, pm1_factors: &[u64]) -> u64 {
    let mut ord = p - 1;
    for &f in pm1_factors {
        while ord.is_multiple_of(f) && pow_mod(a, ord / f, p) == 1 {
            ord /= f;
        }
    }
    ord
}

fn pow_mod(mut a: u64, mut k: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * a % m;
        }
        a = a * a % m;
        k >>= 1;
    }
    acc
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---- dense polynomial arithmetic over F_p, used only for the modulus search ----

type PolyP = Vec<u64>; // little-endian coefficients in F_p

fn ptrim(f: &mut PolyP) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn pdeg(f: &PolyP) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

fn pmul(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    ptrim(&mut out);
    out
}

fn prem(a: &PolyP, m: &PolyP, p: u64) -> PolyP {
    let dm = pdeg(m).expect("nonzero modulus");
    let lead_inv = pow_mod(m[dm], p - 2, p);
    let mut r = a.clone();
    ptrim(&mut r);
    while let Some(dr) = pdeg(&r) {
        if dr < dm {
            break;
        }
        let c = r[dr] * lead_inv % p;
        let shift = dr - dm;
        for (k, &mc) in m.iter().enumerate() {
            let idx = shift + k;
            r[idx] = (r[idx] + p * p - c * mc % p) % p;
        }
        ptrim(&mut r);
    }
    r
}

fn pmulmod(a: &PolyP, b: &PolyP, m: &PolyP, p: u64) -> PolyP {
    prem(&pmul(a, b, p), m, p)
}

fn ppowmod(a: &PolyP, mut k: u64, m: &PolyP, p: u64) -> PolyP {
    let mut acc = vec![1];
    let mut base = prem(a, m, p);
    while k > 0 {
        if k & 1 == 1 {
            acc = pmulmod(&acc, &base, m, p);
        }
        base = pmulmod(&base, &base, m, p);
        k >>= 1;
    }
    acc
}

fn pgcd(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    let mut x = a.clone();
    let mut y = b.clone();
    ptrim(&mut x);
    ptrim(&mut y);
    while !y.is_empty() {
        let r = prem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin irreducibility test for a monic polynomial over F_p.
fn poly_is_irreducible(f: &PolyP, p: u64) -> bool {
    let n = pdeg(f).expect("nonzero polynomial");
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x: PolyP = vec![0, 1];
    let checkpoints: Vec<usize> = distinct_prime_factors(n as u64)
        .iter()
        .map(|&r| n / r as usize)
        .collect();
    // h = x^(p^i) mod f, advanced one Frobenius step at a time
    let mut h = prem(&x, f, p);
    for i in 1..=n {
        h = ppowmod(&h, p, f, p);
        if checkpoints.contains(&i) {
            // gcd(x^(p^(n/r)) - x, f) must be constant
            let mut diff = h.clone();
            while diff.len() < 2 {
                diff.push(0);
            }
            diff[1] = (diff[1] + p - 1) % p;
            ptrim(&mut diff);
            let g = pgcd(&diff, f, p);
            if pdeg(&g) != Some(0) {
                return false;
            }
        }
    }
    // x^(p^n) must equal x mod f
    h == vec![0, 1]
}

/// Does the class of t have multiplicative order q - 1 mod f?
fn root_is_primitive(f: &PolyP, p: u64, q: u64, qm1_factors: &[u64]) -> bool {
    let x: PolyP = vec![0, 1];
    for &r in qm1_factors {
        if ppowmod(&x, (q - 1) / r, f, p) == vec![1] {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_moduli_and_generators() {
        let f2 = Fq::new(2, 1).unwrap();
        assert_eq!(f2.modulus(), &[1, 1]); // t + 1, root 1
        assert_eq!(f2.generator(), FqElem(1));

        let f3 = Fq::new(3, 1).unwrap();
        assert_eq!(f3.generator(), FqElem(2));

        let f4 = Fq::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]); // t^2 + t + 1
        assert_eq!(f4.generator(), FqElem(2));

        // x^2 + 1 over F_3 is irreducible but its root has order 4, not 8;
        // the first primitive quadratic is t^2 + t + 2
        let f9 = Fq::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[2, 1, 1]);

        let f8 = Fq::new(2, 3).unwrap();
        assert_eq!(f8.modulus(), &[1, 1, 0, 1]); // t^3 + t + 1

        let f16 = Fq::new(2, 4).unwrap();
        assert_eq!(f16.modulus(), &[1, 1, 0, 0, 1]); // t^4 + t + 1

        // two calls agree byte for byte
        let again = Fq::new(3, 2).unwrap();
        assert_eq!(again.modulus(), f9.modulus());
        assert_eq!(again.generator(), f9.generator());
    }

    #[test]
    fn f4_modulus_is_the_only_irreducible_quadratic() {
        // independent exhaustive check: a quadratic over F_2 is reducible
        // iff it has a root; only t^2 + t + 1 has none
        let mut irreducible = Vec::new();
        for c1 in 0u64..2 {
            for c0 in 0u64..2 {
                let eval = |t: u64| (t * t + c1 * t + c0) % 2;
                if eval(0) != 0 && eval(1) != 0 {
                    irreducible.push(vec![c0, c1, 1]);
                }
            }
        }
        assert_eq!(irreducible, vec![vec![1, 1, 1]]);
        assert_eq!(Fq::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
    }

    #[test]
    fn f4_multiplication_table() {
        // encodings: 0, 1, t = 2, t+1 = 3; t^2 = t + 1 mod t^2+t+1
        let f4 = Fq::new(2, 2).unwrap();
        assert_eq!(f4.mul(FqElem(2), FqElem(2)), FqElem(3));
        assert_eq!(f4.mul(FqElem(2), FqElem(3)), FqElem(1)); // t(t+1) = t^2+t = 1
        assert_eq!(f4.mul(FqElem(3), FqElem(3)), FqElem(2)); // (t+1)^2 = t^2+1 = t
    }

    #[test]
    fn identity_and_division() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2), (2, 4)] {
            let fq = Fq::new(p, e).unwrap();
            for a in fq.elements() {
                assert_eq!(fq.mul(a, FqElem::ONE), a);
                if !a.is_zero() {
                    let inv = fq.inv(a).unwrap();
                    assert_eq!(fq.mul(a, inv), FqElem::ONE);
                }
            }
        }
        let f3 = Fq::new(3, 1).unwrap();
        assert_eq!(f3.div(FqElem(1), FqElem(2)).unwrap(), FqElem(2));
    }

    #[test]
    fn element_orders() {
        let f4 = Fq::new(2, 2).unwrap();
        assert_eq!(f4.element_order(FqElem::ONE).unwrap(), 1);
        assert_eq!(f4.element_order(FqElem(2)).unwrap(), 3);

        let f5 = Fq::new(5, 1).unwrap();
        assert_eq!(f5.element_order(FqElem(2)).unwrap(), 4);

        assert!(matches!(
            f5.element_order(FqElem::ZERO),
            Err(Error::OrderOfZero)
        ));
    }

    #[test]
    fn field_axioms_exhaustive_small_q() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (13, 1), (2, 4)] {
            let fq = Fq::new(p, e).unwrap();
            let all: Vec<FqElem> = fq.elements().collect();
            for &a in &all {
                for &b in &all {
                    assert_eq!(fq.add(a, b), fq.add(b, a));
                    assert_eq!(fq.mul(a, b), fq.mul(b, a));
                    assert_eq!(fq.sub(fq.add(a, b), b), a);
                    for &c in &all {
                        assert_eq!(fq.add(fq.add(a, b), c), fq.add(a, fq.add(b, c)));
                        assert_eq!(fq.mul(fq.mul(a, b), c), fq.mul(a, fq.mul(b, c)));
                        assert_eq!(
                            fq.mul(a, fq.add(b, c)),
                            fq.add(fq.mul(a, b), fq.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn field_axioms_sampled_larger_q() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (p, e) in [(5, 2), (3, 3), (2, 6), (251, 1)] {
            let fq = Fq::new(p, e).unwrap();
            for _ in 0..500 {
                let a = FqElem(rng.gen_range(0..fq.q()));
                let b = FqElem(rng.gen_range(0..fq.q()));
                let c = FqElem(rng.gen_range(0..fq.q()));
                assert_eq!(fq.add(fq.add(a, b), c), fq.add(a, fq.add(b, c)));
                assert_eq!(fq.mul(fq.mul(a, b), c), fq.mul(a, fq.mul(b, c)));
                assert_eq!(fq.mul(a, fq.add(b, c)), fq.add(fq.mul(a, b), fq.mul(a, c)));
                assert_eq!(fq.mul(a, b), fq.mul(b, a));
            }
        }
    }

    #[test]
    fn polynomial_path_above_table_limit() {
        use rand::{Rng, SeedableRng};
        // 2^17 > TABLE_LIMIT, so this exercises the reduction path
        let fq = Fq::new(2, 17).unwrap();
        assert_eq!(fq.q(), 1 << 17);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = FqElem(rng.gen_range(1..fq.q()));
            let b = FqElem(rng.gen_range(1..fq.q()));
            let c = FqElem(rng.gen_range(0..fq.q()));
            assert_eq!(fq.mul(fq.mul(a, b), c), fq.mul(a, fq.mul(b, c)));
            assert_eq!(fq.mul(a, fq.inv(a).unwrap()), FqElem::ONE);
            assert_eq!(fq.mul(a, fq.add(b, c)), fq.add(fq.mul(a, b), fq.mul(a, c)));
        }
    }

    #[test]
    fn generator_enumerates_the_unit_group() {
        for (p, e) in [(2, 2), (5, 1), (2, 3), (3, 2), (2, 4), (5, 2), (11, 1)] {
            let fq = Fq::new(p, e).unwrap();
            let mut seen = vec![false; fq.q() as usize];
            let mut cur = FqElem::ONE;
            for _ in 0..fq.q() - 1 {
                assert!(!seen[cur.0 as usize], "generator power repeated early");
                seen[cur.0 as usize] = true;
                cur = fq.mul(cur, fq.generator());
            }
            assert_eq!(cur, FqElem::ONE);
            assert!(!seen[0]);
            assert_eq!(seen.iter().filter(|&&s| s).count() as u64, fq.q() - 1);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Fq::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(Fq::new(6, 2), Err(Error::NotPrime(6))));
        assert!(matches!(Fq::new(2, 21), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(
            Fq::new(2, 1).unwrap().div(FqElem::ONE, FqElem::ZERO),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn parses_field_names() {
        assert_eq!(Fq::parse("2").unwrap().q(), 2);
        assert_eq!(Fq::parse("3^2").unwrap().q(), 9);
        assert_eq!(Fq::parse("2^4").unwrap().name(), "2^4");
        assert_eq!(Fq::parse("7").unwrap().name(), "7");
        assert!(Fq::parse("4").is_err());
        assert!(Fq::parse("x^2").is_err());
    }
}
