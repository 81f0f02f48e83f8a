//! Brute-force counting of additive (genus-zero) factorizations of an
//! n-cycle in the symmetric group, with the closed-form count
//! n^(m-1) * prod_i N(lambda^(i)) it must match.
//!
//! Absolute length in S_n is n minus the number of cycles, so a
//! factorization sigma = sigma_1 ... sigma_m with prescribed cycle types is
//! additive exactly when the type lengths sum to n - 1.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Largest n for which exhaustive factorization counting is attempted.
const MAX_BRUTE_N: usize = 6;

/// A permutation of {0, .., n-1} in one-line notation: `map[i]` is the image
/// of i. Products compose right to left: (p * q)(i) = p(q(i)).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Perm {
    map: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm { map: (0..n).collect() }
    }

    pub fn from_one_line(map: Vec<usize>) -> Result<Perm> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || seen[v] {
                return Err(Error::Parse("not a permutation".into()));
            }
            seen[v] = true;
        }
        Ok(Perm { map })
    }

    /// The standard n-cycle 0 -> 1 -> ... -> n-1 -> 0.
    pub fn standard_cycle(n: usize) -> Perm {
        Perm { map: (0..n).map(|i| (i + 1) % n).collect() }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n());
        Perm { map: other.map.iter().map(|&i| self.map[i]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut map = vec![0; self.n()];
        for (i, &v) in self.map.iter().enumerate() {
            map[v] = i;
        }
        Perm { map }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn cycle_type(&self) -> CycleType {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut parts = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.map[cur];
                len += 1;
            }
            parts.push(len);
        }
        CycleType::new(parts)
    }

    /// All n! permutations of {0..n-1}.
    pub fn all(n: usize) -> Vec<Perm> {
        assert!(n <= 8, "factorial blowup");
        let mut out = Vec::new();
        let mut cur: Vec<usize> = Vec::new();
        let mut used = vec![false; n];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
            if cur.len() == n {
                out.push(Perm { map: cur.clone() });
                return;
            }
            for v in 0..n {
                if !used[v] {
                    used[v] = true;
                    cur.push(v);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }
}

/// Reflection length in S_n: n minus the number of cycles.
pub fn perm_length(p: &Perm) -> usize {
    p.n() - p.cycle_type().parts().len()
}

/// A partition of n recording cycle sizes, parts weakly decreasing.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> CycleType {
        assert!(parts.iter().all(|&p| p >= 1));
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    /// Parse `"3,1,1"`.
    pub fn parse(text: &str) -> Result<CycleType> {
        let parts: std::result::Result<Vec<usize>, _> =
            text.trim().split(',').map(|p| p.trim().parse()).collect();
        match parts {
            Ok(v) if !v.is_empty() && v.iter().all(|&p| p >= 1) => Ok(CycleType::new(v)),
            _ => Err(Error::Parse(format!("bad cycle type {text:?}"))),
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Reflection length of any permutation with these cycle sizes.
    pub fn length(&self) -> usize {
        self.n() - self.parts.len()
    }

    /// Multiplicity of each part size, indexed from 1.
    fn multiplicities(&self) -> Vec<usize> {
        let max = self.parts.first().copied().unwrap_or(0);
        let mut mult = vec![0usize; max + 1];
        for &p in &self.parts {
            mult[p] += 1;
        }
        mult
    }

    /// All cycle types of permutations of n (partitions of n).
    pub fn all(n: usize) -> Vec<CycleType> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(remaining: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<CycleType>) {
            if remaining == 0 {
                out.push(CycleType { parts: cur.clone() });
                return;
            }
            for next in (1..=remaining.min(max)).rev() {
                cur.push(next);
                rec(remaining - next, next, cur, out);
                cur.pop();
            }
        }
        rec(n, n, &mut cur, &mut out);
        out
    }
}

impl std::fmt::Display for CycleType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// N(lambda) = (1/m) * multinomial(m; m_1, m_2, ...), where m is the number
/// of parts and m_i the number of parts of size i.
pub fn n_lambda(t: &CycleType) -> BigRational {
    let m = t.parts().len();
    let mut multinomial = BigRational::from_integer(factorial(m));
    for &mi in &t.multiplicities() {
        if mi > 1 {
            multinomial /= BigRational::from_integer(factorial(mi));
        }
    }
    multinomial / BigRational::from_integer(BigInt::from(m))
}

/// The closed-form count n^(m-1) * prod_i N(lambda^(i)); always an integer
/// for admissible type lists.
pub fn cactus_formula(n: usize, types: &[CycleType]) -> BigInt {
    let m = types.len();
    let mut acc = BigRational::from_integer(BigInt::from(n).pow(m as u32 - 1));
    for t in types {
        acc *= n_lambda(t);
    }
    assert!(acc.is_integer(), "the closed form is integral");
    acc.to_integer()
}

/// Exhaustively count tuples (sigma_1, .., sigma_m) with the prescribed
/// cycle types whose ordered product is the standard n-cycle. The type
/// lengths must sum to n - 1 (additivity). Asserts agreement with
/// [`cactus_formula`] before returning.
pub fn count_cactus(n: usize, types: &[CycleType]) -> Result<u64> {
    if n > MAX_BRUTE_N {
        return Err(Error::Infeasible(n));
    }
    if types.is_empty() || types.iter().any(|t| t.n() != n) {
        return Err(Error::ArgRange("every cycle type must partition n".into()));
    }
    let total: usize = types.iter().map(|t| t.length()).sum();
    if total != n - 1 {
        return Err(Error::ArgRange(format!(
            "type lengths must sum to n-1 = {}, got {total}",
            n - 1
        )));
    }
    let target = Perm::standard_cycle(n);
    let count = count_cactus_with_target(types, &target);
    assert_eq!(
        BigInt::from(count),
        cactus_formula(n, types),
        "brute force disagrees with the closed form"
    );
    Ok(count)
}

/// Every list of m cycle types of n, 1 <= m <= m_max, whose lengths sum to
/// n - 1 (the additivity constraint).
pub fn admissible_type_lists(n: usize, m_max: usize) -> Vec<Vec<CycleType>> {
    let types = CycleType::all(n);
    let mut out = Vec::new();
    let mut cur: Vec<CycleType> = Vec::new();
    fn rec(
        types: &[CycleType],
        m: usize,
        need: i64,
        cur: &mut Vec<CycleType>,
        out: &mut Vec<Vec<CycleType>>,
    ) {
        if cur.len() == m {
            if need == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for t in types {
            let l = t.length() as i64;
            if l == 0 || l > need {
                continue;
            }
            cur.push(t.clone());
            rec(types, m, need - l, cur, out);
            cur.pop();
        }
    }
    for m in 1..=m_max {
        rec(&types, m, n as i64 - 1, &mut cur, &mut out);
    }
    out
}

/// The same count against an arbitrary target n-cycle (the count does not
/// depend on which n-cycle is chosen).
pub fn count_cactus_with_target(types: &[CycleType], target: &Perm) -> u64 {
    let n = target.n();
    let all = Perm::all(n);
    let class_of = |t: &CycleType| -> Vec<&Perm> {
        all.iter().filter(|p| &p.cycle_type() == t).collect()
    };
    let m = types.len();
    if m == 1 {
        return (target.cycle_type() == types[0]) as u64;
    }
    let classes: Vec<Vec<&Perm>> = types[..m - 1].iter().map(class_of).collect();
    let last_type = &types[m - 1];
    let mut count = 0u64;
    let mut stack: Vec<usize> = vec![0; m - 1];
    // iterate the product of the first m-1 classes with an odometer
    'outer: loop {
        // forced last factor: sigma_m = (sigma_1 ... sigma_{m-1})^{-1} target
        let mut prefix = Perm::identity(n);
        for (ci, &idx) in stack.iter().enumerate() {
            prefix = prefix.compose(classes[ci][idx]);
        }
        let forced = prefix.inverse().compose(target);
        if &forced.cycle_type() == last_type {
            count += 1;
        }
        for pos in (0..m - 1).rev() {
            stack[pos] += 1;
            if stack[pos] < classes[pos].len() {
                continue 'outer;
            }
            stack[pos] = 0;
        }
        break;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ct(parts: &[usize]) -> CycleType {
        CycleType::new(parts.to_vec())
    }

    #[test]
    fn perm_lengths() {
        assert_eq!(perm_length(&Perm::identity(5)), 0);
        let transposition = Perm::from_one_line(vec![1, 0, 2, 3]).unwrap();
        assert_eq!(perm_length(&transposition), 1);
        assert_eq!(perm_length(&Perm::standard_cycle(6)), 5);
    }

    #[test]
    fn cycle_types() {
        let p = Perm::from_one_line(vec![1, 0, 3, 2]).unwrap();
        assert_eq!(p.cycle_type(), ct(&[2, 2]));
        assert_eq!(Perm::standard_cycle(4).cycle_type(), ct(&[4]));
        assert_eq!(CycleType::parse("1,3,1").unwrap(), ct(&[3, 1, 1]));
        assert_eq!(CycleType::all(4).len(), 5);
    }

    #[test]
    fn n_lambda_examples() {
        use num_traits::ToPrimitive;
        // single nontrivial cycle: N = 1
        assert_eq!(n_lambda(&ct(&[3, 1, 1])), BigRational::one());
        assert_eq!(n_lambda(&ct(&[5])), BigRational::one());
        // all fixed points: N = 1/n
        let v = n_lambda(&ct(&[1, 1, 1, 1]));
        assert_eq!(v, BigRational::new(BigInt::one(), BigInt::from(4)));
        // two 2-cycles: N = 1/2
        assert_eq!(
            n_lambda(&ct(&[2, 2])).to_f64().unwrap(),
            0.5
        );
    }

    #[test]
    fn cactus_counts_match_examples() {
        // three transposition pairs multiply to a fixed 3-cycle
        assert_eq!(count_cactus(3, &[ct(&[2, 1]), ct(&[2, 1])]).unwrap(), 3);
        // 3-cycle times transposition in S_4
        assert_eq!(count_cactus(4, &[ct(&[3, 1]), ct(&[2, 1, 1])]).unwrap(), 4);
        // three transpositions in S_4: n^{m-1} = 16
        assert_eq!(
            count_cactus(4, &[ct(&[2, 1, 1]), ct(&[2, 1, 1]), ct(&[2, 1, 1])]).unwrap(),
            16
        );
        // a single factor must be the n-cycle itself
        assert_eq!(count_cactus(5, &[ct(&[5])]).unwrap(), 1);
    }

    #[test]
    fn cactus_rejects_bad_inputs() {
        assert!(matches!(count_cactus(9, &[ct(&[9])]), Err(Error::Infeasible(9))));
        assert!(count_cactus(4, &[ct(&[3, 1])]).is_err()); // lengths sum to 2, not 3
        assert!(count_cactus(4, &[ct(&[3])]).is_err()); // not a partition of 4
    }

    #[test]
    fn exhaustive_agreement_with_formula_up_to_n5() {
        // count_cactus asserts equality with the closed form internally
        for n in 2..=5 {
            for list in admissible_type_lists(n, 3) {
                count_cactus(n, &list).unwrap();
            }
        }
    }

    #[test]
    fn count_is_independent_of_the_target_cycle() {
        for n in 3..=5 {
            let cycles: Vec<Perm> = Perm::all(n)
                .into_iter()
                .filter(|p| p.cycle_type() == ct(&[n]))
                .collect();
            for list in admissible_type_lists(n, 2) {
                if list.len() != 2 {
                    continue;
                }
                let counts: std::collections::HashSet<u64> = cycles
                    .iter()
                    .map(|c| count_cactus_with_target(&list, c))
                    .collect();
                assert_eq!(counts.len(), 1, "conjugacy invariance for {list:?}");
            }
        }
    }
}
