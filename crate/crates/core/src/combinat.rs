//! Perfect matchings, partitions and symmetric-group character data.
//!
//! These feed two places: the diagonal-monomial bases of the rings (a choice
//! of `b`-factors on a support set is exactly a perfect matching of that
//! set), and the Hanlon–Wales description of the kernel of the Gram pairing
//! `<M, M'> = (-2g)^{c(M,M')}` in terms of even partitions.

use num::bigint::BigInt;
use num::{One, Zero};
use std::collections::BTreeMap;

/// A perfect matching of an even ground set of point labels, stored as pairs
/// `(i, j)` with `i < j`, sorted by first element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    pairs: Vec<(u8, u8)>,
}

impl Matching {
    pub fn new(mut pairs: Vec<(u8, u8)>) -> Self {
        for p in &mut pairs {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
            assert!(p.0 < p.1, "matching pair with equal endpoints");
        }
        pairs.sort_unstable();
        let mut seen = std::collections::BTreeSet::new();
        for &(i, j) in &pairs {
            assert!(seen.insert(i) && seen.insert(j), "label repeated in matching");
        }
        Matching { pairs }
    }

    pub fn pairs(&self) -> &[(u8, u8)] {
        &self.pairs
    }

    pub fn ground(&self) -> Vec<u8> {
        let mut g: Vec<u8> = self.pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
        g.sort_unstable();
        g
    }

    /// Number of cycles of the 2-regular multigraph `self ∪ other`.  Both
    /// matchings must live on the same ground set.
    pub fn union_cycles(&self, other: &Matching) -> usize {
        debug_assert_eq!(self.ground(), other.ground());
        let partner = |m: &Matching| -> BTreeMap<u8, u8> {
            m.pairs.iter().flat_map(|&(i, j)| [(i, j), (j, i)]).collect()
        };
        let p1 = partner(self);
        let p2 = partner(other);
        let mut unvisited: std::collections::BTreeSet<u8> = p1.keys().copied().collect();
        let mut cycles = 0;
        while let Some(&start) = unvisited.iter().next() {
            cycles += 1;
            let mut v = start;
            let mut use_first = true;
            loop {
                unvisited.remove(&v);
                let next = if use_first { p1[&v] } else { p2[&v] };
                use_first = !use_first;
                v = next;
                if v == start && use_first {
                    break;
                }
            }
        }
        cycles
    }
}

/// All perfect matchings of `labels` (which must have even length), in the
/// deterministic order produced by always pairing the smallest free label
/// first.  There are `(2m-1)!!` of them on `2m` labels.
pub fn perfect_matchings(labels: &[u8]) -> Vec<Matching> {
    assert!(labels.len().is_multiple_of(2), "odd ground set has no perfect matching");
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut acc = Vec::new();
    fn go(free: &[u8], acc: &mut Vec<(u8, u8)>, out: &mut Vec<Matching>) {
        if free.is_empty() {
            out.push(Matching { pairs: acc.clone() });
            return;
        }
        let a = free[0];
        for k in 1..free.len() {
            let b = free[k];
            let rest: Vec<u8> = free[1..].iter().copied().filter(|&x| x != b).collect();
            acc.push((a, b));
            go(&rest, acc, out);
            acc.pop();
        }
    }
    go(&sorted, &mut acc, &mut out);
    out
}

/// All `k`-element subsets of `items` (assumed sorted, distinct), in
/// lexicographic order.
pub fn combinations(items: &[u8], k: usize) -> Vec<Vec<u8>> {
    fn go(items: &[u8], k: usize, start: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for i in start..items.len() {
            if items.len() - i < need {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Partition(pub Vec<u32>);

impl Partition {
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }
}

pub fn partitions_of(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut acc = Vec::new();
    fn go(rem: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(acc.clone()));
            return;
        }
        for part in (1..=rem.min(max)).rev() {
            acc.push(part);
            go(rem - part, part, acc, out);
            acc.pop();
        }
    }
    go(n, n, &mut acc, &mut out);
    out
}

/// Partitions of `2m` with every part even: doubling a partition of `m`.
pub fn even_partitions_of(two_m: u32) -> Vec<Partition> {
    assert!(two_m.is_multiple_of(2));
    partitions_of(two_m / 2)
        .into_iter()
        .map(|p| Partition(p.0.into_iter().map(|x| 2 * x).collect()))
        .collect()
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    for i in 0..k {
        num *= n - i;
    }
    num / factorial(k)
}

/// `(2m-1)!! = (2m)! / (2^m m!)`, the number of perfect matchings on `2m`
/// labels.
pub fn double_factorial_odd(m: u64) -> BigInt {
    (0..m).fold(BigInt::one(), |a, k| a * (2 * k + 1))
}

/// Dimension of the irreducible symmetric-group representation indexed by
/// `lambda`, by the hook length formula.
pub fn irrep_dimension(lambda: &Partition) -> BigInt {
    let n = lambda.size() as u64;
    let parts = &lambda.0;
    let conj_len = |j: u32| parts.iter().filter(|&&p| p > j).count() as u64;
    let mut denom = BigInt::one();
    for (i, &li) in parts.iter().enumerate() {
        for j in 0..li {
            let hook = (li - j) as u64 + conj_len(j) - i as u64 - 1;
            denom *= hook;
        }
    }
    factorial(n) / denom
}
