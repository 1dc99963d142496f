//! Relation production: powers of the pulled-back theta divisor and Chern
//! classes of jet bundles, each checked against the intersection pairing.
//!
//! A weight vector `d` with `Σ d_i = 0` defines a section of the universal
//! Jacobian, and the pullback of the symmetric theta divisor is
//! `½ Σ d_i² K_i − ½ Σ_{|I| ≥ 2} (d_I² − Σ_{i∈I} d_i²) Δ_I` (only genus-0
//! boundary exists here, so no further terms).  Its `(g+1)`-st power is a
//! relation; in normal form it either vanishes (it was a consequence of the
//! three-point relations) or, on `2g+2` points, lands on a multiple of the
//! matching sum `alpha`.
//!
//! The rank-`(m(2n'+1))`... the jet bundle of the `m`-th pluricanonical
//! sections along the marked points has total Chern class
//! `(1 + mK_1) ∏_{i≥2} (1 + mK_i − Δ_i)` with `Δ_i = Σ_{j<i} d_{j,i}`; its
//! component in degree `g + r` vanishes whenever `r = n − 2m(g−1) ≥ 1`.
//! Multiplying the degree-`(g+1)` component by trailing `K`-classes and
//! pushing forward to `2g+2` points reproduces the same `alpha` relation.

use num::Zero;

use crate::curve::{alpha, standard_basis as curve_basis, CurveClass, RingContext};
use crate::exec::par_map;
use crate::fm::{
    moduli_to_fiber, normalize, pair, standard_basis as fm_basis, FMClass, IndexSet, ModuliExpr,
    ModuliGen,
};
use crate::linalg::{rat, Rational};
use crate::{Error, Result};

/// Integer weights summing to zero, one per marked point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    d: Vec<i64>,
}

impl WeightVector {
    pub fn new(d: Vec<i64>) -> Result<Self> {
        if d.iter().sum::<i64>() != 0 {
            return Err(Error::InvalidParam(format!("weights {:?} do not sum to zero", d)));
        }
        Ok(WeightVector { d })
    }

    /// A balanced default: alternating signs for even length, a trailing
    /// balancing weight for odd length.
    pub fn default_for(n: u8) -> Self {
        let n = n as usize;
        let d = if n.is_multiple_of(2) {
            (0..n).map(|i| if i < n / 2 { 1 } else { -1 }).collect()
        } else {
            let mut d = vec![1i64; n];
            d[n - 1] = 1 - n as i64;
            d
        };
        WeightVector { d }
    }

    pub fn len(&self) -> u8 {
        self.d.len() as u8
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn weights(&self) -> &[i64] {
        &self.d
    }

    fn weight_of(&self, label: u8) -> i64 {
        self.d[label as usize - 1]
    }
}

/// The pulled-back theta divisor as a sum of moduli generators.
pub fn theta_pullback(d: &WeightVector, ctx: RingContext) -> Result<ModuliExpr> {
    if d.len() != ctx.n {
        return Err(Error::InvalidParam(format!("{} weights for {} points", d.len(), ctx.n)));
    }
    let half = Rational::new(1.into(), 2.into());
    let mut expr = ModuliExpr::zero(ctx);
    for i in 1..=ctx.n {
        let w = d.weight_of(i);
        if w != 0 {
            expr = expr.add(&ModuliExpr::gen(ctx, ModuliGen::K(i)).scale(&(&half * rat(w * w))));
        }
    }
    for mask in 1u32..(1 << ctx.n) {
        let set = IndexSet(mask);
        if set.size() < 2 {
            continue;
        }
        let labels = set.labels();
        let d_i: i64 = labels.iter().map(|&i| d.weight_of(i)).sum();
        let sq_sum: i64 = labels.iter().map(|&i| d.weight_of(i) * d.weight_of(i)).sum();
        let coeff = -(&half * rat(d_i * d_i - sq_sum));
        if !coeff.is_zero() {
            expr = expr.add(&ModuliExpr::gen(ctx, ModuliGen::Delta(set)).scale(&coeff));
        }
    }
    Ok(expr)
}

/// Outcome of raising the theta divisor to the `(g+1)`-st power.
#[derive(Clone, Debug)]
pub struct ThetaReport {
    /// Normal form of the power.
    pub relation: FMClass,
    /// The power pairs to zero against every complementary standard monomial.
    pub in_kernel: bool,
    /// The normal form vanishes: the relation is a consequence of relations
    /// on at most three points.
    pub small_support: bool,
    /// On `2g+2` points: the normal form is exactly this multiple of the
    /// matching-sum class.
    pub alpha_multiple: Option<Rational>,
}

/// Raise the pulled-back theta divisor to the power `g+1` and classify the
/// resulting relation.
pub fn theta_power_relation(d: &WeightVector, ctx: RingContext) -> Result<ThetaReport> {
    let theta = moduli_to_fiber(&theta_pullback(d, ctx)?);
    let power = theta.pow(ctx.g + 1);
    let relation = normalize(&power);
    let degree = (ctx.g + 1) as usize;
    let in_kernel = if degree > ctx.n as usize {
        relation.is_zero()
    } else {
        let basis = fm_basis(ctx, ctx.n as usize - degree);
        par_map(basis.len(), |i| {
            let w = FMClass::monomial(ctx, basis[i].clone(), rat(1));
            pair(&relation, &w).expect("same context").is_zero()
        })
        .into_iter()
        .all(|ok| ok)
    };
    let small_support = relation.is_zero();
    let alpha_multiple = if ctx.n as u32 == 2 * ctx.g + 2 && !relation.is_zero() {
        alpha_coefficient_of(&relation)
    } else {
        None
    };
    Ok(ThetaReport { relation, in_kernel, small_support, alpha_multiple })
}

/// If the class is exactly a nonzero multiple of the matching-sum class on
/// `2g+2` points, return the multiple.
fn alpha_coefficient_of(x: &FMClass) -> Option<Rational> {
    let ctx = x.ctx();
    let reference = FMClass::from_curve(&alpha(ctx.g));
    let (first, _) = reference.terms().next()?;
    let c = x.coefficient(first);
    if c.is_zero() {
        return None;
    }
    if x.sub(&reference.scale(&c)).expect("same context").is_zero() {
        Some(c)
    } else {
        None
    }
}

/// Curve-ring variant of the multiple-of-alpha test.
fn alpha_coefficient_curve(x: &CurveClass) -> Option<Rational> {
    let reference = alpha(x.ctx().g);
    let (first, _) = reference.terms().next()?;
    let c = x.coefficient(first);
    if c.is_zero() {
        return None;
    }
    if x.checked_add(&reference.scale(&-&c)).expect("same context").is_zero() {
        Some(c)
    } else {
        None
    }
}

/// Parameters of a jet-bundle relation: twist `m`, point count `n`, genus.
#[derive(Clone, Copy, Debug)]
pub struct JetContext {
    pub g: u32,
    pub m: u32,
    pub n: u8,
}

impl JetContext {
    pub fn new(g: u32, m: u32, n: u8) -> Result<Self> {
        if m < 1 || n < 1 {
            return Err(Error::InvalidParam(format!("jet parameters m={m}, n={n}")));
        }
        Ok(JetContext { g, m, n })
    }

    /// The excess `r = n - 2m(g-1)`; relations need `r >= 1`.
    pub fn excess(&self) -> i64 {
        self.n as i64 - 2 * self.m as i64 * (self.g as i64 - 1)
    }
}

/// The total Chern class `(1 + mK_1) ∏_{i=2}^n (1 + mK_i − Δ_i)` with terms
/// above `max_degree` dropped during the expansion.
pub fn jet_chern_truncated(jctx: &JetContext, max_degree: usize) -> CurveClass {
    let ctx = RingContext::new(jctx.g, jctx.n);
    let truncate = |x: &CurveClass| -> CurveClass {
        let mut out = CurveClass::zero(ctx);
        for (m, c) in x.terms() {
            if m.degree() <= max_degree {
                out = out
                    .checked_add(&CurveClass::monomial(ctx, m.clone(), c.clone()))
                    .expect("same context");
            }
        }
        out
    };
    let k_term = |i: u8| -> CurveClass {
        CurveClass::gen_a(ctx, i)
            .expect("label in range")
            .scale(&rat(jctx.m as i64 * (2 * jctx.g as i64 - 2)))
    };
    let mut total = CurveClass::one(ctx).checked_add(&k_term(1)).expect("same context");
    for i in 2..=jctx.n {
        let mut factor = CurveClass::one(ctx).checked_add(&k_term(i)).expect("same context");
        for j in 1..i {
            let diag = CurveClass::diagonal(ctx, j, i).expect("labels in range");
            factor = factor.checked_add(&diag.scale(&rat(-1))).expect("same context");
        }
        total = truncate(&total.checked_mul(&factor).expect("same context"));
    }
    total
}

/// The full total Chern class (degrees up to `n`).
pub fn jet_total_chern(jctx: &JetContext) -> CurveClass {
    jet_chern_truncated(jctx, jctx.n as usize)
}

/// The part of a class in a single degree.
pub fn graded_component(x: &CurveClass, degree: usize) -> CurveClass {
    let mut out = CurveClass::zero(x.ctx());
    for (m, c) in x.terms() {
        if m.degree() == degree {
            out = out
                .checked_add(&CurveClass::monomial(x.ctx(), m.clone(), c.clone()))
                .expect("same context");
        }
    }
    out
}

/// True when the class pairs to zero against every standard monomial of the
/// complementary degree.
pub fn curve_kernel_membership(x: &CurveClass, degree: usize) -> bool {
    let ctx = x.ctx();
    if degree > ctx.n as usize {
        return x.is_zero();
    }
    let basis = curve_basis(ctx, ctx.n as usize - degree);
    par_map(basis.len(), |i| {
        let w = CurveClass::monomial(ctx, basis[i].clone(), rat(1));
        x.checked_mul(&w).expect("same context").integral().is_zero()
    })
    .into_iter()
    .all(|ok| ok)
}

/// Outcome of extracting the vanishing Chern component.
#[derive(Clone, Debug)]
pub struct JetReport {
    /// The degree-`(g+r)` component in standard form.
    pub class: CurveClass,
    /// Excess `r`.
    pub excess: i64,
    /// The component pairs to zero against the complementary basis.
    pub in_kernel: bool,
}

/// Extract `c_{g+r}` of the jet bundle and check that it is a relation.
pub fn jet_relation(jctx: &JetContext) -> Result<JetReport> {
    let r = jctx.excess();
    if r < 1 {
        return Err(Error::InvalidParam(format!(
            "no relation: excess {r} for m={}, n={}, g={}",
            jctx.m, jctx.n, jctx.g
        )));
    }
    let degree = (jctx.g as i64 + r) as usize;
    let class = graded_component(&jet_chern_truncated(jctx, degree), degree);
    let in_kernel = curve_kernel_membership(&class, degree);
    Ok(JetReport { class, excess: r, in_kernel })
}

/// The degree-`(g+1)` relation pushed onto `2g+2` points.
#[derive(Clone, Debug)]
pub struct DeriveReport {
    pub genus: u32,
    /// Twist and point count of the jet relation the pipeline started from.
    pub m: u32,
    pub n: u8,
    /// The resulting class on `2g+2` points.
    pub class: CurveClass,
    /// The multiple of the matching-sum class the result equals, when it
    /// does.
    pub alpha_coefficient: Option<Rational>,
}

/// Run one derivation schedule without any verdict: take `c_{g+1}` of the
/// twist-`m` jet bundle on `n = 2m(g-1)+1` points, multiply by
/// `K_{2g+3} ... K_n`, and push forward down to `2g+2` points.
pub fn derive_with_schedule(g: u32, m: u32) -> Result<CurveClass> {
    let n_big = 2 * m as i64 * (g as i64 - 1) + 1;
    let target = 2 * g as i64 + 2;
    if n_big < target {
        return Err(Error::InvalidParam(format!(
            "twist {m} reaches only {n_big} points, below the {target} needed"
        )));
    }
    if n_big > u8::MAX as i64 {
        return Err(Error::InvalidParam(format!("{n_big} points out of range")));
    }
    let n = n_big as u8;
    let jctx = JetContext::new(g, m, n)?;
    debug_assert_eq!(jctx.excess(), 1);
    let degree = (g + 1) as usize;
    let ctx = RingContext::new(g, n);
    let mut class = graded_component(&jet_chern_truncated(&jctx, degree), degree);
    for label in (target + 1) as u8..=n {
        let k =
            CurveClass::gen_a(ctx, label).expect("label in range").scale(&rat(2 * g as i64 - 2));
        class = class.checked_mul(&k).expect("same context");
    }
    for _ in 0..(n_big - target) {
        class = class.pushforward()?;
    }
    Ok(class)
}

/// The pinned derivation pipelines: twist 3 through 7 points for genus 2,
/// twist 2 through 9 points for genus 3 — each ending on `2g+2` points where
/// the result is compared with the matching-sum class.
pub fn derive_degree_g_plus_one(g: u32) -> Result<DeriveReport> {
    let m = match g {
        2 => 3,
        3 => 2,
        _ => {
            return Err(Error::InvalidParam(format!(
                "derivation pipeline pinned for genus 2 and 3 only, got {g}"
            )))
        }
    };
    let n = (2 * m * (g - 1) + 1) as u8;
    let class = derive_with_schedule(g, m)?;
    let alpha_coefficient = alpha_coefficient_curve(&class);
    Ok(DeriveReport { genus: g, m, n, class, alpha_coefficient })
}
