//! The tautological ring of the n-fold fibre power of the universal pointed
//! hyperelliptic curve (the marked point a Weierstrass point; for genus 1 an
//! arbitrary section).
//!
//! Over a base whose rational Chow ring is trivial the ring is generated by
//! the section classes `a_i` (the class of the marked point on the i-th
//! factor) and the corrected diagonals `b_{i,j} = d_{i,j} - a_i - a_j`, where
//! `d_{i,j}` is the diagonal of factors i and j.  These satisfy
//!
//! * `a_i^2 = 0`,
//! * `a_i b_{i,j} = 0`,
//! * `b_{i,j}^2 = -2g * a_i a_j`,
//! * `b_{i,j} b_{i,k} = a_i b_{j,k}`  (j, k distinct from each other and i),
//!
//! and every monomial in the generators rewrites to a scalar multiple of a
//! *standard monomial*: a square-free product of `a_i` over an index set A
//! times a product of `b` factors whose pairs form a partial matching on an
//! index set B disjoint from A.  The rewriting is confluent — each rule sends
//! a monomial to a single monomial, and the `b`-degree strictly drops — so
//! products are computed by running the rules to exhaustion.
//!
//! Standard monomials of degree d form a basis of the degree-d part of the
//! ring of polynomials-modulo-rules; the intersection pairing against the
//! complementary degree is encoded by [`pairing_matrix`], whose kernel cuts
//! out the relations that hold in the tautological ring beyond the four
//! rules.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::combinat::{combinations, even_partitions_of, irrep_dimension, perfect_matchings};
use crate::exec::{par_map, seq_map};
use crate::linalg::{add_to, rat, QMatrix, Rational};
use crate::{Error, Result};

/// Genus of the curve and number of factors of the fibre power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingContext {
    pub g: u32,
    pub n: u8,
}

impl RingContext {
    pub fn new(g: u32, n: u8) -> Self {
        RingContext { g, n }
    }

    /// The index labels `1..=n`.
    pub fn labels(&self) -> Vec<u8> {
        (1..=self.n).collect()
    }

    fn check_matches(&self, other: &RingContext) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ContextMismatch(self.g, self.n, other.g, other.n))
        }
    }
}

/// A standard monomial: `a` is the (strictly increasing) index set of the
/// section factors, `b` the partial matching of corrected-diagonal factors.
/// The two supports are disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveMonomial {
    a: Vec<u8>,
    b: Vec<(u8, u8)>,
}

/// Monomials are ordered by number of `b` factors, then by `b`-support, then
/// by the matching itself, then by the `a`-set.  Sorting a homogeneous basis
/// this way groups it into the pure-section block, the mixed block, and the
/// pure-diagonal (matching) block.
impl Ord for CurveMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.b
            .len()
            .cmp(&other.b.len())
            .then_with(|| self.b_support().cmp(&other.b_support()))
            .then_with(|| self.b.cmp(&other.b))
            .then_with(|| self.a.cmp(&other.a))
    }
}

impl PartialOrd for CurveMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl CurveMonomial {
    pub fn one() -> Self {
        CurveMonomial { a: Vec::new(), b: Vec::new() }
    }

    /// Build a standard monomial, validating disjointness.
    pub fn from_parts(mut a: Vec<u8>, b: Vec<(u8, u8)>) -> Result<Self> {
        a.sort_unstable();
        let mut b: Vec<(u8, u8)> =
            b.into_iter().map(|(i, j)| if i <= j { (i, j) } else { (j, i) }).collect();
        b.sort_unstable();
        let mut seen: Vec<u8> = a.clone();
        for &(i, j) in &b {
            if i == j {
                return Err(Error::BadSupport(vec![i, j], 0));
            }
            seen.push(i);
            seen.push(j);
        }
        let mut sorted = seen.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != seen.len() {
            return Err(Error::BadSupport(seen, 0));
        }
        Ok(CurveMonomial { a, b })
    }

    pub fn a(&self) -> &[u8] {
        &self.a
    }

    pub fn b(&self) -> &[(u8, u8)] {
        &self.b
    }

    pub fn degree(&self) -> usize {
        self.a.len() + self.b.len()
    }

    /// Indices carried by the `b` part, sorted.
    pub fn b_support(&self) -> Vec<u8> {
        let mut s: Vec<u8> = self.b.iter().flat_map(|&(i, j)| [i, j]).collect();
        s.sort_unstable();
        s
    }

    /// All indices occurring in the monomial, sorted.
    pub fn support(&self) -> Vec<u8> {
        let mut s = self.b_support();
        s.extend_from_slice(&self.a);
        s.sort_unstable();
        s
    }

    /// The dual monomial inside the ring on `ground`: keep the matching part,
    /// and replace the `a`-set by the complement of the full support.  The
    /// duality is an involution and pairs standard monomials of complementary
    /// degrees.
    pub fn dual_in(&self, ground: &[u8]) -> CurveMonomial {
        let supp = self.support();
        let a: Vec<u8> = ground.iter().copied().filter(|i| !supp.contains(i)).collect();
        CurveMonomial { a, b: self.b.clone() }
    }

    /// Relabel by the permutation `sigma` of `1..=n` (given as `sigma[i-1]`).
    pub fn permuted(&self, sigma: &[u8]) -> CurveMonomial {
        let img = |i: u8| sigma[(i - 1) as usize];
        let mut a: Vec<u8> = self.a.iter().map(|&i| img(i)).collect();
        a.sort_unstable();
        let mut b: Vec<(u8, u8)> = self
            .b
            .iter()
            .map(|&(i, j)| {
                let (x, y) = (img(i), img(j));
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        b.sort_unstable();
        CurveMonomial { a, b }
    }

    /// Multiply two standard monomials and rewrite to standard form.
    /// Returns the surviving monomial together with the accumulated scalar,
    /// or `None` if the product vanishes.
    pub fn try_mul(&self, other: &CurveMonomial, g: u32) -> Option<(CurveMonomial, Rational)> {
        self.try_mul_with(other, g, |_| 0)
    }

    /// As [`try_mul`](Self::try_mul), but the rewriting events are fired in a
    /// pseudo-random order derived from `seed`.  Confluence of the rules
    /// means the result never depends on the order; tests exercise this.
    pub fn try_mul_seeded(
        &self,
        other: &CurveMonomial,
        g: u32,
        seed: u64,
    ) -> Option<(CurveMonomial, Rational)> {
        let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        self.try_mul_with(other, g, move |m| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % m as u64) as usize
        })
    }

    fn try_mul_with<F: FnMut(usize) -> usize>(
        &self,
        other: &CurveMonomial,
        g: u32,
        chooser: F,
    ) -> Option<(CurveMonomial, Rational)> {
        let mut state: BTreeMap<Gen, u32> = BTreeMap::new();
        for m in [self, other] {
            for &i in &m.a {
                *state.entry(Gen::A(i)).or_insert(0) += 1;
            }
            for &p in &m.b {
                *state.entry(Gen::B(p.0, p.1)).or_insert(0) += 1;
            }
        }
        reduce_state(g, state, chooser)
    }
}

impl fmt::Display for CurveMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a.is_empty() && self.b.is_empty() {
            return write!(f, "1");
        }
        let mut parts: Vec<String> = self.a.iter().map(|i| format!("a{}", i)).collect();
        parts.extend(self.b.iter().map(|(i, j)| format!("b{{{},{}}}", i, j)));
        write!(f, "{}", parts.join("*"))
    }
}

/// One rewriting generator of the working multiset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Gen {
    A(u8),
    B(u8, u8),
}

/// An applicable rewriting event.
#[derive(Debug, Clone, Copy)]
enum Event {
    /// `a_i^2` or `a_i b_{i,*}`: the monomial dies.
    Vanish,
    /// `b_{i,j}^2 -> -2g * a_i a_j`.
    Square(u8, u8),
    /// `b_{s,x} b_{s,y} -> a_s b_{x,y}` (one shared index `s`).
    Fuse { shared: u8, x: u8, y: u8, p1: (u8, u8), p2: (u8, u8) },
}

fn collect_events(state: &BTreeMap<Gen, u32>) -> Vec<Event> {
    let mut a_idx: Vec<u8> = Vec::new();
    let mut b_gens: Vec<(u8, u8, u32)> = Vec::new();
    let mut events = Vec::new();
    for (&gen, &e) in state {
        match gen {
            Gen::A(i) => {
                if e >= 2 {
                    events.push(Event::Vanish);
                }
                a_idx.push(i);
            }
            Gen::B(i, j) => {
                if e >= 2 {
                    events.push(Event::Square(i, j));
                }
                b_gens.push((i, j, e));
            }
        }
    }
    for &(i, j, _) in &b_gens {
        if a_idx.contains(&i) || a_idx.contains(&j) {
            events.push(Event::Vanish);
        }
    }
    for (u, &(i1, j1, _)) in b_gens.iter().enumerate() {
        for &(i2, j2, _) in &b_gens[u + 1..] {
            let p1 = [i1, j1];
            let p2 = [i2, j2];
            let common: Vec<u8> = p1.iter().copied().filter(|c| p2.contains(c)).collect();
            if common.len() == 1 {
                let s = common[0];
                let x = if i1 == s { j1 } else { i1 };
                let y = if i2 == s { j2 } else { i2 };
                events.push(Event::Fuse { shared: s, x, y, p1: (i1, j1), p2: (i2, j2) });
            }
        }
    }
    events
}

fn dec(state: &mut BTreeMap<Gen, u32>, gen: Gen, by: u32) {
    let e = state.get_mut(&gen).expect("generator present");
    *e -= by;
    if *e == 0 {
        state.remove(&gen);
    }
}

fn reduce_state<F: FnMut(usize) -> usize>(
    g: u32,
    mut state: BTreeMap<Gen, u32>,
    mut chooser: F,
) -> Option<(CurveMonomial, Rational)> {
    let mut scalar = Rational::one();
    loop {
        let events = collect_events(&state);
        if events.is_empty() {
            break;
        }
        match events[chooser(events.len()) % events.len()] {
            Event::Vanish => return None,
            Event::Square(i, j) => {
                dec(&mut state, Gen::B(i, j), 2);
                *state.entry(Gen::A(i)).or_insert(0) += 1;
                *state.entry(Gen::A(j)).or_insert(0) += 1;
                scalar *= rat(-2 * g as i64);
            }
            Event::Fuse { shared, x, y, p1, p2 } => {
                dec(&mut state, Gen::B(p1.0, p1.1), 1);
                dec(&mut state, Gen::B(p2.0, p2.1), 1);
                *state.entry(Gen::A(shared)).or_insert(0) += 1;
                let (x, y) = if x <= y { (x, y) } else { (y, x) };
                *state.entry(Gen::B(x, y)).or_insert(0) += 1;
            }
        }
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (&gen, &e) in &state {
        debug_assert_eq!(e, 1, "event-free state is square-free");
        match gen {
            Gen::A(i) => a.push(i),
            Gen::B(i, j) => b.push((i, j)),
        }
    }
    Some((CurveMonomial { a, b }, scalar))
}

/// A finite Q-linear combination of standard monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClass {
    ctx: RingContext,
    terms: BTreeMap<CurveMonomial, Rational>,
}

impl CurveClass {
    pub fn zero(ctx: RingContext) -> Self {
        CurveClass { ctx, terms: BTreeMap::new() }
    }

    pub fn one(ctx: RingContext) -> Self {
        Self::monomial(ctx, CurveMonomial::one(), Rational::one())
    }

    pub fn scalar(ctx: RingContext, c: Rational) -> Self {
        Self::monomial(ctx, CurveMonomial::one(), c)
    }

    pub fn monomial(ctx: RingContext, m: CurveMonomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        CurveClass { ctx, terms }
    }

    /// The section class `a_i`.
    pub fn gen_a(ctx: RingContext, i: u8) -> Result<Self> {
        if i == 0 || i > ctx.n {
            return Err(Error::IndexOutOfRange(i, ctx.n));
        }
        Ok(Self::monomial(ctx, CurveMonomial { a: vec![i], b: Vec::new() }, Rational::one()))
    }

    /// The corrected diagonal `b_{i,j}`.
    pub fn gen_b(ctx: RingContext, i: u8, j: u8) -> Result<Self> {
        if i == 0 || i > ctx.n {
            return Err(Error::IndexOutOfRange(i, ctx.n));
        }
        if j == 0 || j > ctx.n || i == j {
            return Err(Error::IndexOutOfRange(j, ctx.n));
        }
        let p = if i < j { (i, j) } else { (j, i) };
        Ok(Self::monomial(ctx, CurveMonomial { a: Vec::new(), b: vec![p] }, Rational::one()))
    }

    /// The honest diagonal class `d_{i,j} = a_i + a_j + b_{i,j}`.
    pub fn diagonal(ctx: RingContext, i: u8, j: u8) -> Result<Self> {
        let mut c = Self::gen_a(ctx, i)?;
        c = c.checked_add(&Self::gen_a(ctx, j)?)?;
        c.checked_add(&Self::gen_b(ctx, i, j)?)
    }

    pub fn ctx(&self) -> RingContext {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CurveMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &CurveMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn checked_add(&self, rhs: &CurveClass) -> Result<CurveClass> {
        self.ctx.check_matches(&rhs.ctx)?;
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            add_to(&mut terms, m.clone(), c.clone());
        }
        Ok(CurveClass { ctx: self.ctx, terms })
    }

    pub fn checked_mul(&self, rhs: &CurveClass) -> Result<CurveClass> {
        self.ctx.check_matches(&rhs.ctx)?;
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                if let Some((m, s)) = m1.try_mul(m2, self.ctx.g) {
                    add_to(&mut terms, m, c1 * c2 * s);
                }
            }
        }
        Ok(CurveClass { ctx: self.ctx, terms })
    }

    pub fn scale(&self, c: &Rational) -> CurveClass {
        if c.is_zero() {
            return CurveClass::zero(self.ctx);
        }
        CurveClass {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> CurveClass {
        let mut acc = CurveClass::one(self.ctx);
        for _ in 0..k {
            acc = acc.checked_mul(self).expect("same context");
        }
        acc
    }

    /// Degrees occurring among the terms.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.keys().map(|m| m.degree()).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Integral over the n-fold fibre power: the coefficient of the top
    /// standard monomial `a_1 ... a_n`.  Terms of lower degree integrate to
    /// zero over the fibres.
    pub fn integral(&self) -> Rational {
        self.integral_over(&self.ctx.labels())
    }

    /// Integral over the fibre power indexed by `ground` (used when the class
    /// lives on a subset of the factors).
    pub fn integral_over(&self, ground: &[u8]) -> Rational {
        let mut top = ground.to_vec();
        top.sort_unstable();
        self.coefficient(&CurveMonomial { a: top, b: Vec::new() })
    }

    /// Intersection number `∫ self * other`.
    pub fn pairing(&self, other: &CurveClass) -> Result<Rational> {
        Ok(self.checked_mul(other)?.integral())
    }

    /// Term-wise duality on standard monomials.
    pub fn dual(&self) -> CurveClass {
        let ground = self.ctx.labels();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            add_to(&mut terms, m.dual_in(&ground), c.clone());
        }
        CurveClass { ctx: self.ctx, terms }
    }

    /// Push forward along the map forgetting the last factor.  A monomial not
    /// involving the last index integrates to zero over the forgotten fibre;
    /// a lone `a_n` factor is the section and pushes to 1; any `b_{i,n}`
    /// factor is of degree zero on the fibre and pushes to 0.
    pub fn pushforward(&self) -> Result<CurveClass> {
        if self.ctx.n == 0 {
            return Err(Error::InvalidParam("cannot forget a factor of the 0-fold power".into()));
        }
        let last = self.ctx.n;
        let new_ctx = RingContext { g: self.ctx.g, n: last - 1 };
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.a.contains(&last) {
                let a: Vec<u8> = m.a.iter().copied().filter(|&i| i != last).collect();
                add_to(&mut terms, CurveMonomial { a, b: m.b.clone() }, c.clone());
            }
            // b-support or absent: pushes to zero.
        }
        Ok(CurveClass { ctx: new_ctx, terms })
    }

    /// Pull back to a power with more factors (the same expression read in
    /// the larger ring).
    pub fn pullback_to(&self, n: u8) -> Result<CurveClass> {
        if n < self.ctx.n {
            return Err(Error::InvalidParam(format!(
                "pullback target n={} smaller than source n={}",
                n, self.ctx.n
            )));
        }
        Ok(CurveClass { ctx: RingContext { g: self.ctx.g, n }, terms: self.terms.clone() })
    }

    /// Relabel the factors by a permutation of `1..=n`.
    pub fn permute(&self, sigma: &[u8]) -> Result<CurveClass> {
        let n = self.ctx.n as usize;
        if sigma.len() != n {
            return Err(Error::InvalidParam("permutation length != n".into()));
        }
        let mut seen = vec![false; n + 1];
        for &v in sigma {
            if v == 0 || v as usize > n || seen[v as usize] {
                return Err(Error::InvalidParam("not a permutation of 1..=n".into()));
            }
            seen[v as usize] = true;
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            add_to(&mut terms, m.permuted(sigma), c.clone());
        }
        Ok(CurveClass { ctx: self.ctx, terms })
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_unit_monomial = m.degree() == 0;
            if mag.is_one() && !is_unit_monomial {
                write!(f, "{}", m)?;
            } else if is_unit_monomial {
                write!(f, "{}", mag)?;
            } else {
                write!(f, "{}*{}", mag, m)?;
            }
        }
        Ok(())
    }
}

impl Add for &CurveClass {
    type Output = CurveClass;
    fn add(self, rhs: &CurveClass) -> CurveClass {
        self.checked_add(rhs).expect("ring context mismatch")
    }
}

impl Sub for &CurveClass {
    type Output = CurveClass;
    fn sub(self, rhs: &CurveClass) -> CurveClass {
        self.checked_add(&rhs.scale(&rat(-1))).expect("ring context mismatch")
    }
}

impl Mul for &CurveClass {
    type Output = CurveClass;
    fn mul(self, rhs: &CurveClass) -> CurveClass {
        self.checked_mul(rhs).expect("ring context mismatch")
    }
}

impl Neg for &CurveClass {
    type Output = CurveClass;
    fn neg(self) -> CurveClass {
        self.scale(&rat(-1))
    }
}

/// All standard monomials of degree `d` on the given (sorted) ground set:
/// choose the matching size k, a 2k-element support, one of its perfect
/// matchings, and a (d-k)-element section set from the rest.
pub fn standard_monomials(ground: &[u8], d: usize) -> Vec<CurveMonomial> {
    let n = ground.len();
    let mut out = Vec::new();
    for k in 0..=d {
        let a_count = d - k;
        if a_count + 2 * k > n {
            continue;
        }
        for supp in combinations(ground, 2 * k) {
            let rest: Vec<u8> = ground.iter().copied().filter(|i| !supp.contains(i)).collect();
            for m in perfect_matchings(&supp) {
                for aset in combinations(&rest, a_count) {
                    out.push(CurveMonomial { a: aset, b: m.pairs().to_vec() });
                }
            }
        }
    }
    out.sort();
    out
}

/// The degree-d standard basis on `1..=n`, in the block order of
/// [`CurveMonomial`]'s `Ord`.
pub fn standard_basis(ctx: RingContext, d: usize) -> Vec<CurveMonomial> {
    standard_monomials(&ctx.labels(), d)
}

fn pairing_rows<M>(ctx: RingContext, d: usize, map: M) -> QMatrix
where
    M: Fn(usize, &(dyn Fn(usize) -> Vec<Rational> + Sync)) -> Vec<Vec<Rational>>,
{
    let basis = standard_basis(ctx, d);
    let ground = ctx.labels();
    let duals: Vec<CurveMonomial> = basis.iter().map(|m| m.dual_in(&ground)).collect();
    let top = CurveMonomial { a: ground.clone(), b: Vec::new() };
    let row = |r: usize| -> Vec<Rational> {
        duals
            .iter()
            .map(|w| match basis[r].try_mul(w, ctx.g) {
                Some((m, s)) if m == top => s,
                _ => Rational::zero(),
            })
            .collect()
    };
    let rows = map(basis.len(), &row);
    QMatrix::from_rows(rows)
}

/// Gram matrix of the intersection pairing in degree d: entry (v, w) is
/// `∫ v * dual(w)` over the standard basis.  Symmetric, block-diagonal with
/// respect to the (section set, matching support) decomposition.
pub fn pairing_matrix(ctx: RingContext, d: usize) -> QMatrix {
    pairing_rows(ctx, d, |n, row| par_map(n, row))
}

/// Sequential variant of [`pairing_matrix`] (for benchmarking the parallel
/// dispatch against a single-threaded run).
pub fn pairing_matrix_seq(ctx: RingContext, d: usize) -> QMatrix {
    pairing_rows(ctx, d, |n, row| seq_map(n, row))
}

/// The relations in degree d: primitive integer vectors spanning the kernel
/// of the pairing matrix, read as coefficient vectors over
/// [`standard_basis`]`(ctx, d)`.
pub fn relation_kernel(ctx: RingContext, d: usize) -> (Vec<CurveMonomial>, Vec<Vec<BigInt>>) {
    let basis = standard_basis(ctx, d);
    let (_, kernel) = pairing_matrix(ctx, d).rank_and_kernel();
    (basis, kernel)
}

/// Dimensions of the graded pieces of the quotient by the pairing kernel:
/// the rank of the pairing matrix in each degree `0..=n`.
pub fn dims(ctx: RingContext) -> Vec<usize> {
    (0..=ctx.n as usize).map(|d| pairing_matrix(ctx, d).rank()).collect()
}

/// The symmetric sum of all perfect matchings on `2g+2` points: the degree
/// `g+1` class supported on the diagonal part whose vanishing is the unique
/// relation cutting the tautological ring down to Gorenstein shape.
pub fn alpha(g: u32) -> CurveClass {
    let n = (2 * g + 2) as u8;
    let ctx = RingContext { g, n };
    let labels: Vec<u8> = (1..=n).collect();
    let mut terms = BTreeMap::new();
    for m in perfect_matchings(&labels) {
        terms.insert(CurveMonomial { a: Vec::new(), b: m.pairs().to_vec() }, Rational::one());
    }
    CurveClass { ctx, terms }
}

/// Gram matrix of the pure-matching monomials on `2m` points: entry (M, M')
/// is `∫ b(M) * b(M')`, which evaluates to `(-2g)^c` with `c` the number of
/// cycles of the union of the two matchings (the Hanlon–Wales matrix up to
/// that substitution).
pub fn hanlon_wales_gram(g: u32, m: u32) -> QMatrix {
    let labels: Vec<u8> = (1..=2 * m as u8).collect();
    let matchings = perfect_matchings(&labels);
    let monos: Vec<CurveMonomial> = matchings
        .iter()
        .map(|mt| CurveMonomial { a: Vec::new(), b: mt.pairs().to_vec() })
        .collect();
    let top = CurveMonomial { a: labels.clone(), b: Vec::new() };
    QMatrix::from_fn(monos.len(), monos.len(), |i, j| match monos[i].try_mul(&monos[j], g) {
        Some((mm, s)) if mm == top => s,
        _ => Rational::zero(),
    })
}

/// Predicted kernel dimension of [`hanlon_wales_gram`]: the sum of the
/// dimensions of the symmetric-group irreducibles indexed by even partitions
/// of 2m with largest part at least 2g+2.
pub fn hanlon_wales_predicted_kernel(g: u32, m: u32) -> BigInt {
    even_partitions_of(2 * m)
        .into_iter()
        .filter(|p| p.0.first().copied().unwrap_or(0) >= 2 * g + 2)
        .map(|p| irrep_dimension(&p))
        .sum()
}
