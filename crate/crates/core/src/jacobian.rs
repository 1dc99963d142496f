//! The tautological ring of a Jacobian fibration: polynomial classes
//! `p_{i,j}` with a second-order differential operator `D` that together
//! with multiplication by `p_{2,0}` generates an sl2 action.
//!
//! Generators `p_{i,j}` carry two gradings: half the sum `(i+j)/2` is the
//! Chow degree, and `g - Σ i` (summed over the factors of a monomial) is the
//! weight of the sl2 torus.  A generator is present for `i >= 0`,
//! `0 <= j <= 2g-2`, `i <= j+2` and `i+j` even; `p_{0,0}` is the scalar `g`.
//! Indices produced outside those ranges (negative, or `j > 2g-2`) are zero.
//! The divisor symbol `psi` commutes with everything and is inert under `D`.
//!
//! On the locus of hyperelliptic Jacobians trivialized at a Weierstrass
//! point, `psi = 0`, every `p_{i,j}` with `j` odd vanishes, and the single
//! seed relation `p_{3,1} = 0` propagates through `D` to kill all remaining
//! generators except `p_{2,0}` in low degrees.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{BigInt, BigRational, Signed, Zero};

use crate::combinat::binomial;
use crate::linalg::{add_to, rat, Rational};

/// A product of generators `p_{i,j}` and a power of `psi`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct JacMonomial {
    factors: BTreeMap<(i64, i64), u32>,
    psi: u32,
}

impl JacMonomial {
    pub fn one() -> Self {
        JacMonomial { factors: BTreeMap::new(), psi: 0 }
    }

    pub fn factors(&self) -> &BTreeMap<(i64, i64), u32> {
        &self.factors
    }

    pub fn psi_power(&self) -> u32 {
        self.psi
    }

    /// Chow degree: `(i+j)/2` per factor, one per `psi`.
    pub fn degree(&self) -> u32 {
        let p: i64 = self.factors.iter().map(|(&(i, j), &m)| (i + j) / 2 * m as i64).sum();
        p as u32 + self.psi
    }

    /// Torus weight `g - Σ i` of the sl2 grading.
    pub fn weight(&self, g: u32) -> i64 {
        g as i64 - self.factors.iter().map(|(&(i, _), &m)| i * m as i64).sum::<i64>()
    }

    /// True when some factor has an odd second index.
    pub fn has_odd_factor(&self) -> bool {
        self.factors.keys().any(|&(_, j)| j % 2 != 0)
    }

    /// Total bidegree: each factor adds `(i, j)`, each `psi` adds `(2, 0)`.
    pub fn bidegree(&self) -> (i64, i64) {
        let bi: i64 = self.factors.iter().map(|(&(i, _), &m)| i * m as i64).sum();
        let bj: i64 = self.factors.iter().map(|(&(_, j), &m)| j * m as i64).sum();
        (bi + 2 * self.psi as i64, bj)
    }
}

/// Which vanishing rules to apply when reducing a class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VanishingProfile {
    /// Only the support bound of the Beauville decomposition:
    /// total bidegree `(i, j)` with `i - j > 2g` vanishes.  This is the rule
    /// behind `theta^{g+1} = 0`.
    Generic,
    /// Additionally `psi = 0` and `p_{i,j} = 0` for odd `j`.
    HyperellipticWeierstrass,
}

/// Delete terms according to the profile's vanishing rules.
pub fn reduce(x: &JacClass, profile: VanishingProfile) -> JacClass {
    let bound = 2 * x.g as i64;
    let mut out = JacClass::zero(x.g);
    for (m, c) in &x.terms {
        let (bi, bj) = m.bidegree();
        if bi - bj > bound {
            continue;
        }
        if profile == VanishingProfile::HyperellipticWeierstrass
            && (m.psi > 0 || m.has_odd_factor())
        {
            continue;
        }
        add_to(&mut out.terms, m.clone(), c.clone());
    }
    out
}

impl fmt::Display for JacMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.psi == 1 {
            parts.push("psi".to_string());
        } else if self.psi > 1 {
            parts.push(format!("psi^{}", self.psi));
        }
        for (&(i, j), &m) in &self.factors {
            if m == 1 {
                parts.push(format!("p[{i},{j}]"));
            } else {
                parts.push(format!("p[{i},{j}]^{m}"));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A rational combination of monomials over a fixed genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacClass {
    g: u32,
    terms: BTreeMap<JacMonomial, Rational>,
}

impl JacClass {
    pub fn zero(g: u32) -> Self {
        JacClass { g, terms: BTreeMap::new() }
    }

    pub fn one(g: u32) -> Self {
        Self::scalar(g, rat(1))
    }

    pub fn scalar(g: u32, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(JacMonomial::one(), c);
        }
        JacClass { g, terms }
    }

    /// The generator `p_{i,j}`, with out-of-range indices collapsing to zero
    /// and `p_{0,0}` to the scalar `g`.
    pub fn gen(g: u32, i: i64, j: i64) -> Self {
        if i < 0 || j < 0 || j > 2 * g as i64 - 2 {
            return Self::zero(g);
        }
        debug_assert!((i + j) % 2 == 0, "indices of p must have even sum");
        debug_assert!(i <= j + 2, "p[{i},{j}] lies outside the generator range");
        if (i, j) == (0, 0) {
            return Self::scalar(g, rat(g as i64));
        }
        let m = JacMonomial { factors: [((i, j), 1)].into_iter().collect(), psi: 0 };
        Self::monomial(g, m, rat(1))
    }

    pub fn psi(g: u32) -> Self {
        Self::monomial(g, JacMonomial { factors: BTreeMap::new(), psi: 1 }, rat(1))
    }

    pub fn monomial(g: u32, m: JacMonomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        JacClass { g, terms }
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<JacMonomial, Rational> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &JacClass) -> JacClass {
        assert_eq!(self.g, other.g, "genus mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            add_to(&mut out.terms, m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &JacClass) -> JacClass {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> JacClass {
        if c.is_zero() {
            return Self::zero(self.g);
        }
        JacClass { g: self.g, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &JacClass) -> JacClass {
        assert_eq!(self.g, other.g, "genus mismatch");
        let mut out = Self::zero(self.g);
        for (mx, cx) in &self.terms {
            for (my, cy) in &other.terms {
                let mut factors = mx.factors.clone();
                for (&key, &m) in &my.factors {
                    *factors.entry(key).or_insert(0) += m;
                }
                let m = JacMonomial { factors, psi: mx.psi + my.psi };
                add_to(&mut out.terms, m, cx * cy);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> JacClass {
        let mut out = Self::one(self.g);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}

impl fmt::Display for JacClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if first {
                if c == &rat(1) {
                    write!(f, "{m}")?;
                } else if c == &rat(-1) {
                    write!(f, "-{m}")?;
                } else {
                    write!(f, "{c}*{m}")?;
                }
                first = false;
            } else if c == &rat(1) {
                write!(f, " + {m}")?;
            } else if c == &rat(-1) {
                write!(f, " - {m}")?;
            } else if c.is_negative() {
                write!(f, " - {}*{m}", -c)?;
            } else {
                write!(f, " + {c}*{m}")?;
            }
        }
        Ok(())
    }
}

fn binom(n: i64, k: i64) -> Rational {
    if n < 0 || k < 0 || k > n {
        return Rational::zero();
    }
    BigRational::from_integer(binomial(n as u64, k as u64))
}

/// The interaction of two factors under the second-order part of `D`.
fn pair_term(g: u32, (i, j): (i64, i64), (k, l): (i64, i64)) -> JacClass {
    let psi_part =
        JacClass::psi(g).mul(&JacClass::gen(g, i - 1, j - 1)).mul(&JacClass::gen(g, k - 1, l - 1));
    let fuse = JacClass::gen(g, i + k - 2, j + l).scale(&binom(i + k - 2, i - 1));
    psi_part.sub(&fuse)
}

/// The operator `D`: over ordered pairs of factor slots,
/// `(psi p_{i-1,j-1} p_{k-1,l-1} - C(i+k-2, i-1) p_{i+k-2,j+l}) / 2` replaces
/// the two factors, and `p_{i-2,j}` replaces single factors.
pub fn apply_d(x: &JacClass) -> JacClass {
    let g = x.g;
    let mut out = JacClass::zero(g);
    for (mono, coeff) in &x.terms {
        let keys: Vec<((i64, i64), u32)> = mono.factors.iter().map(|(&k, &m)| (k, m)).collect();
        let without = |removals: &[(i64, i64)]| -> JacMonomial {
            let mut f = mono.factors.clone();
            for key in removals {
                let e = f.get_mut(key).expect("factor present");
                *e -= 1;
                if *e == 0 {
                    f.remove(key);
                }
            }
            JacMonomial { factors: f, psi: mono.psi }
        };
        // First-order part.
        for &((i, j), m) in &keys {
            let rest = JacClass::monomial(g, without(&[(i, j)]), coeff * rat(m as i64));
            out = out.add(&rest.mul(&JacClass::gen(g, i - 2, j)));
        }
        // Second-order part: unordered distinct pairs count m_u * m_v, a
        // repeated factor counts m(m-1)/2.
        for (s, &(u, mu)) in keys.iter().enumerate() {
            for &(v, mv) in &keys[s..] {
                let repeat = u == v;
                let count = if repeat {
                    rat((mu as i64) * (mu as i64 - 1) / 2)
                } else {
                    rat(mu as i64 * mv as i64)
                };
                if count.is_zero() {
                    continue;
                }
                let rest = JacClass::monomial(g, without(&[u, v]), coeff * count);
                out = out.add(&rest.mul(&pair_term(g, u, v)));
            }
        }
    }
    out
}

/// The semisimple element: multiplies each monomial by its torus weight.
pub fn apply_h(x: &JacClass) -> JacClass {
    let mut out = JacClass::zero(x.g);
    for (m, c) in &x.terms {
        add_to(&mut out.terms, m.clone(), c * rat(m.weight(x.g)));
    }
    out
}

/// Multiplication by `p_{2,0}`, the raising partner of `D`.
pub fn apply_f(x: &JacClass) -> JacClass {
    x.mul(&JacClass::gen(x.g, 2, 0))
}

/// All generators `p_{i,j}` for the genus, in index order.
pub fn generators(g: u32) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for j in 0..=(2 * g as i64 - 2) {
        for i in 0..=(j + 2) {
            if (i + j) % 2 == 0 && (i, j) != (0, 0) {
                out.push((i, j));
            }
        }
    }
    out.sort_by_key(|&(i, j)| (i + j, i));
    out
}

/// The first `count` monomials in (degree, index) order, used as
/// deterministic sample points for operator identities.
pub fn sample_monomials(g: u32, count: usize) -> Vec<JacMonomial> {
    let gens = generators(g);
    let mut by_degree: Vec<JacMonomial> = Vec::new();
    let mut degree = 0u32;
    while by_degree.len() < count && degree <= 4 * g {
        let mut level: Vec<JacMonomial> = Vec::new();
        collect_monomials(&gens, 0, degree, &mut BTreeMap::new(), &mut level);
        level.sort();
        by_degree.extend(level);
        degree += 1;
    }
    by_degree.truncate(count);
    by_degree
}

fn collect_monomials(
    gens: &[(i64, i64)],
    from: usize,
    remaining: u32,
    current: &mut BTreeMap<(i64, i64), u32>,
    out: &mut Vec<JacMonomial>,
) {
    if remaining == 0 {
        out.push(JacMonomial { factors: current.clone(), psi: 0 });
        return;
    }
    for idx in from..gens.len() {
        let (i, j) = gens[idx];
        let d = ((i + j) / 2) as u32;
        if d == 0 || d > remaining {
            continue;
        }
        *current.entry((i, j)).or_insert(0) += 1;
        collect_monomials(gens, idx, remaining - d, current, out);
        let e = current.get_mut(&(i, j)).unwrap();
        *e -= 1;
        if *e == 0 {
            current.remove(&(i, j));
        }
    }
}

/// Verify the sl2 commutators `[D, p_20] = h`, `[h, D] = 2D` and
/// `[h, p_20] = -2 p_20` on the first `count` monomials.
pub fn check_sl2(g: u32, count: usize) -> std::result::Result<(), String> {
    for m in sample_monomials(g, count) {
        let x = JacClass::monomial(g, m.clone(), rat(1));
        let ef = apply_d(&apply_f(&x)).sub(&apply_f(&apply_d(&x)));
        let hx = apply_h(&x);
        if ef != hx {
            return Err(format!("[D, p20] failed on {m}: got {ef}, want {hx}"));
        }
        let he = apply_h(&apply_d(&x)).sub(&apply_d(&apply_h(&x)));
        if he != apply_d(&x).scale(&rat(2)) {
            return Err(format!("[h, D] failed on {m}"));
        }
        let hf = apply_h(&apply_f(&x)).sub(&apply_f(&apply_h(&x)));
        if hf != apply_f(&x).scale(&rat(-2)) {
            return Err(format!("[h, p20] failed on {m}"));
        }
    }
    Ok(())
}

/// Reduce onto the hyperelliptic Weierstrass locus and additionally drop
/// terms containing a factor from the derived vanishing set.
pub fn reduce_weierstrass(x: &JacClass, zeros: &BTreeSet<(i64, i64)>) -> JacClass {
    let reduced = reduce(x, VanishingProfile::HyperellipticWeierstrass);
    let mut out = JacClass::zero(x.g);
    for (m, c) in &reduced.terms {
        if m.factors.keys().any(|k| zeros.contains(k)) {
            continue;
        }
        add_to(&mut out.terms, m.clone(), c.clone());
    }
    out
}

/// One derivation step: which product was differentiated and which generator
/// it proved zero.
#[derive(Clone, Debug)]
pub struct DerivationStep {
    pub source: ((i64, i64), (i64, i64)),
    pub derived: (i64, i64),
    pub coefficient: Rational,
}

/// The saturation of the seed relation `p_{3,1} = 0` on the hyperelliptic
/// Weierstrass locus.
#[derive(Clone, Debug)]
pub struct DerivationReport {
    pub genus: u32,
    pub zeros: BTreeSet<(i64, i64)>,
    pub steps: Vec<DerivationStep>,
}

impl DerivationReport {
    /// The expected vanishing `p_{i+2,i} = 0` for `1 <= i <= 2g-4`, either
    /// by odd parity or by derivation.
    pub fn targets_hold(&self) -> bool {
        let g = self.genus as i64;
        (1..=(2 * g - 4)).all(|i| i % 2 == 1 || self.zeros.contains(&(i + 2, i)))
    }

    /// Monomials of the given degree in the surviving generators.
    pub fn survivors(&self, degree: u32) -> Vec<JacMonomial> {
        let gens: Vec<(i64, i64)> = generators(self.genus)
            .into_iter()
            .filter(|&(_, j)| j % 2 == 0)
            .filter(|key| !self.zeros.contains(key))
            .collect();
        let mut out = Vec::new();
        collect_monomials(&gens, 0, degree, &mut BTreeMap::new(), &mut out);
        out.sort();
        out
    }
}

/// Differentiate products with a vanishing factor and collect every new
/// single-generator consequence, to a fixed point.  Products are capped at
/// Chow degree `g + 2`.
pub fn derive_relations(g: u32) -> DerivationReport {
    assert!(g >= 2, "the locus needs genus at least 2");
    let gens = generators(g);
    let mut zeros: BTreeSet<(i64, i64)> = BTreeSet::new();
    zeros.insert((3, 1));
    let mut steps = Vec::new();
    let is_zero =
        |key: &(i64, i64), zeros: &BTreeSet<(i64, i64)>| key.1 % 2 == 1 || zeros.contains(key);
    loop {
        let mut progress = false;
        for (s, &u) in gens.iter().enumerate() {
            for &v in &gens[s..] {
                if (u.0 + u.1 + v.0 + v.1) / 2 > g as i64 + 2 {
                    continue;
                }
                if !is_zero(&u, &zeros) && !is_zero(&v, &zeros) {
                    continue;
                }
                let x = JacClass::gen(g, u.0, u.1).mul(&JacClass::gen(g, v.0, v.1));
                let reduced = reduce_weierstrass(&apply_d(&x), &zeros);
                if reduced.num_terms() != 1 {
                    continue;
                }
                let (m, c) = reduced.terms.iter().next().unwrap();
                if m.factors.len() != 1 {
                    continue;
                }
                let (&key, &e) = m.factors.iter().next().unwrap();
                if e != 1 || is_zero(&key, &zeros) {
                    continue;
                }
                zeros.insert(key);
                steps.push(DerivationStep { source: (u, v), derived: key, coefficient: c.clone() });
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    DerivationReport { genus: g, zeros, steps }
}

/// The odd-part vanishing combination
/// `p_31 - p_20 p_11/(g-1) + 2g p_22/(g-1) - (2g-3) p_11^2 / (2(g-1)^2)`.
pub fn gross_schoen_class(g: u32) -> JacClass {
    assert!(g >= 2);
    let gi = g as i64;
    JacClass::gen(g, 3, 1)
        .sub(
            &JacClass::gen(g, 2, 0)
                .mul(&JacClass::gen(g, 1, 1))
                .scale(&crate::linalg::ratio(1, gi - 1)),
        )
        .add(&JacClass::gen(g, 2, 2).scale(&crate::linalg::ratio(2 * gi, gi - 1)))
        .sub(
            &JacClass::gen(g, 1, 1).pow(2).scale(&Rational::new(
                BigInt::from(2 * gi - 3),
                BigInt::from(2 * (gi - 1) * (gi - 1)),
            )),
        )
}

/// The divisor-free combination `4g p_22 + (4g+6) p_13`.
pub fn faber_pandharipande_class(g: u32) -> JacClass {
    assert!(g >= 3, "p[1,3] needs 2g-2 >= 3");
    JacClass::gen(g, 2, 2)
        .scale(&rat(4 * g as i64))
        .add(&JacClass::gen(g, 1, 3).scale(&rat(4 * g as i64 + 6)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(g: u32, i: i64, j: i64) -> JacClass {
        JacClass::gen(g, i, j)
    }

    #[test]
    fn scalar_and_vanishing_conventions() {
        assert_eq!(p(3, 0, 0), JacClass::scalar(3, rat(3)));
        assert!(p(3, -1, 1).is_zero());
        assert!(p(3, 1, -1).is_zero());
        assert!(p(2, 1, 3).is_zero(), "j beyond 2g-2 vanishes");
        assert!(!p(2, 1, 1).is_zero());
    }

    #[test]
    fn d_of_the_raising_generator_is_the_genus() {
        for g in 2..=4 {
            assert_eq!(apply_d(&p(g, 2, 0)), JacClass::scalar(g, rat(g as i64)));
        }
    }

    #[test]
    fn d_on_a_square_combines_both_slots() {
        // D(p20^2) = 2g p20 (first order) - 2 p20 (fused pair).
        let g = 3;
        let got = apply_d(&p(g, 2, 0).pow(2));
        let want = p(g, 2, 0).scale(&rat(2 * g as i64 - 2));
        assert_eq!(got, want);
    }

    #[test]
    fn printed_expansion_of_the_mixed_products() {
        // D(p31 p_{i+1,i-1}) for i = 2..5 at genus 4, kept symbolic in psi.
        let g = 4;
        for i in 2..=5i64 {
            let x = p(g, 3, 1).mul(&p(g, i + 1, i - 1));
            let got = apply_d(&x);
            let want = JacClass::psi(g)
                .mul(&p(g, 2, 0))
                .mul(&p(g, i, i - 2))
                .sub(&p(g, i + 2, i).scale(&binom(i + 2, 2)))
                .add(&p(g, i + 1, i - 1).mul(&p(g, 1, 1)))
                .add(&p(g, 3, 1).mul(&p(g, i - 1, i - 1)));
            assert_eq!(got, want, "expansion at i={i}");
        }
    }

    #[test]
    fn sl2_commutators_hold_on_sample_monomials() {
        for g in 2..=4 {
            check_sl2(g, 50).unwrap();
        }
    }

    #[test]
    fn seed_relation_saturates_to_the_diagonal_targets() {
        for g in 2..=4u32 {
            let report = derive_relations(g);
            assert!(report.targets_hold(), "targets at g={g}: {:?}", report.zeros);
            for d in 0..=g {
                let survivors = report.survivors(d);
                assert_eq!(survivors.len(), 1, "degree {d} at g={g}: {survivors:?}");
                let only = &survivors[0];
                assert_eq!(only.psi_power(), 0);
                assert!(only.factors().iter().all(|(&k, _)| k == (2, 0)));
                assert_eq!(only.degree(), d);
            }
        }
    }

    #[test]
    fn low_genus_consequences_are_derived_even_when_targets_are_vacuous() {
        let report = derive_relations(2);
        assert!(report.zeros.contains(&(2, 2)), "p[2,2] = 0 at genus 2: {:?}", report.steps);
    }

    #[test]
    fn known_vanishing_combinations_die_on_the_locus() {
        for g in 2..=4u32 {
            let report = derive_relations(g);
            let gs = gross_schoen_class(g);
            assert!(reduce_weierstrass(&gs, &report.zeros).is_zero(), "g={g}");
            if g >= 3 {
                let fp = faber_pandharipande_class(g);
                assert!(reduce_weierstrass(&fp, &report.zeros).is_zero(), "g={g}");
            }
        }
    }

    #[test]
    fn support_bound_kills_high_theta_powers() {
        for g in 2..=4u32 {
            let theta_like = p(g, 2, 0);
            assert!(!reduce(&theta_like.pow(g), VanishingProfile::Generic).is_zero());
            assert!(reduce(&theta_like.pow(g + 1), VanishingProfile::Generic).is_zero());
            let psi_high = JacClass::psi(g).pow(g + 1);
            assert!(reduce(&psi_high, VanishingProfile::Generic).is_zero());
        }
        // The generic profile keeps odd factors; the locus profile drops them.
        let x = p(3, 1, 1);
        assert!(!reduce(&x, VanishingProfile::Generic).is_zero());
        assert!(reduce(&x, VanishingProfile::HyperellipticWeierstrass).is_zero());
        // Idempotence.
        let mix = p(3, 2, 0).add(&p(3, 1, 1)).add(&JacClass::psi(3));
        let once = reduce(&mix, VanishingProfile::HyperellipticWeierstrass);
        assert_eq!(once, reduce(&once, VanishingProfile::HyperellipticWeierstrass));
    }

    #[test]
    fn weight_and_degree_gradings() {
        let g = 3;
        let x = p(g, 3, 1).mul(&p(g, 2, 0)).mul(&JacClass::psi(g));
        let (m, _) = x.terms().iter().next().unwrap();
        assert_eq!(m.degree(), 2 + 1 + 1);
        assert_eq!(m.weight(g), 3 - 5);
        assert_eq!(format!("{m}"), "psi*p[2,0]*p[3,1]");
    }
}
