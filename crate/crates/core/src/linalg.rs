//! Exact rational linear algebra: fraction-free (Bareiss) elimination for
//! ranks and kernels of pairing and relation matrices.
//!
//! The matrices that show up here are small by numerical-linear-algebra
//! standards (a few hundred rows at the ring sizes we reach in practice), so
//! a dense row-major layout with `BigRational` entries keeps the code simple.
//! Elimination happens over `BigInt` after clearing denominators row by row;
//! scaling a row by a nonzero rational changes neither the rank nor the right
//! kernel, and one-step Bareiss keeps every intermediate entry an honest
//! minor of the scaled matrix, so the division by the previous pivot is exact
//! even when zero columns are skipped.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use std::collections::BTreeMap;

pub type Rational = BigRational;

/// `n` as an exact rational.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// `p/q` as an exact rational.  Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Add `c` to `map[key]`, dropping the entry when the sum is zero.  Every
/// sparse class in the crate maintains its "no explicit zeros" invariant by
/// routing coefficient updates through here.
pub fn add_to<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, c: Rational) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Dense matrix over `Q`, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        QMatrix { nrows, ncols, data: vec![Rational::zero(); nrows * ncols] }
    }

    pub fn from_fn(
        nrows: usize,
        ncols: usize,
        mut f: impl FnMut(usize, usize) -> Rational,
    ) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                data.push(f(i, j));
            }
        }
        QMatrix { nrows, ncols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        QMatrix { nrows, ncols, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.ncols + j] = v;
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ncols);
        (0..self.nrows)
            .map(|i| {
                let row = &self.data[i * self.ncols..(i + 1) * self.ncols];
                let mut s = Rational::zero();
                for (e, vj) in row.iter().zip(v) {
                    if !e.is_zero() && !vj.is_zero() {
                        s += e * vj;
                    }
                }
                s
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivot_cols.len()
    }

    /// Rank together with a basis of the right kernel `{x : Mx = 0}`.
    ///
    /// Kernel vectors are returned as primitive integer vectors (content 1,
    /// first nonzero entry positive), one per free column in ascending column
    /// order, which makes the output canonical for a fixed column ordering.
    pub fn rank_and_kernel(&self) -> (usize, Vec<Vec<BigInt>>) {
        let ech = self.echelon();
        let rank = ech.pivot_cols.len();
        let pivot_of_col: BTreeMap<usize, usize> =
            ech.pivot_cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut kernel = Vec::new();
        for f in 0..self.ncols {
            if pivot_of_col.contains_key(&f) {
                continue;
            }
            let mut x = vec![Rational::zero(); self.ncols];
            x[f] = Rational::one();
            for k in (0..rank).rev() {
                let pc = ech.pivot_cols[k];
                let mut s = Rational::zero();
                for (ej, xj) in ech.rows[k][pc + 1..].iter().zip(&x[pc + 1..]) {
                    if !ej.is_zero() && !xj.is_zero() {
                        s += Rational::from_integer(ej.clone()) * xj;
                    }
                }
                if !s.is_zero() {
                    x[pc] = -s / Rational::from_integer(ech.rows[k][pc].clone());
                }
            }
            kernel.push(primitive_integer_vector(&x));
        }
        (rank, kernel)
    }

    /// Fraction-free row echelon form.  Rows are first scaled to integers;
    /// at each pivot the classical one-step Bareiss update
    /// `m[i][j] <- (p*m[i][j] - m[i][c]*m[r][j]) / prev` runs with exact
    /// integer division by the previous pivot.
    fn echelon(&self) -> Echelon {
        let mut m: Vec<Vec<BigInt>> = (0..self.nrows)
            .map(|i| {
                let row: Vec<&Rational> = (0..self.ncols).map(|j| self.get(i, j)).collect();
                let mut l = BigInt::one();
                for e in &row {
                    l = l.lcm(e.denom());
                }
                row.iter().map(|e| e.numer() * (&l / e.denom())).collect()
            })
            .collect();
        let mut pivot_cols = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0usize;
        for c in 0..self.ncols {
            if r == self.nrows {
                break;
            }
            let Some(p) = (r..self.nrows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            for i in r + 1..self.nrows {
                for j in c + 1..self.ncols {
                    let num = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                    debug_assert!((&num % &prev).is_zero(), "Bareiss division not exact");
                    m[i][j] = num / &prev;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[r][c].clone();
            pivot_cols.push(c);
            r += 1;
        }
        m.truncate(pivot_cols.len());
        Echelon { rows: m, pivot_cols }
    }
}

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivot_cols: Vec<usize>,
}

/// Clear denominators and divide out the content; flip sign so the first
/// nonzero entry is positive.  Input must be nonzero.
fn primitive_integer_vector(x: &[Rational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for e in x {
        l = l.lcm(e.denom());
    }
    let mut v: Vec<BigInt> = x.iter().map(|e| e.numer() * (&l / e.denom())).collect();
    let mut g = BigInt::zero();
    for e in &v {
        g = g.gcd(e);
    }
    assert!(!g.is_zero(), "primitive_integer_vector on zero vector");
    for e in &mut v {
        *e /= &g;
    }
    if let Some(first) = v.iter().find(|e| !e.is_zero()) {
        if first.is_negative() {
            for e in &mut v {
                *e = -std::mem::take(e);
            }
        }
    }
    v
}
