//! An independent integration oracle for `X[n]` built directly from the
//! iterated blow-up description, for cross-checking the flow evaluator.
//!
//! The compactification of n points on a curve is the blow-up of the n-fold
//! power along all polydiagonals `X_I` with `|I| >= 3`, largest sets first
//! (same-size sets in increasing set order).  The oracle represents a class
//! as a polynomial in the exceptional classes `e_I` over the curve ring and
//! integrates by eliminating the `e_I` one blow-up at a time in the reverse
//! order.  At the stage eliminating `e_I` (codimension `d = |I| - 1`):
//!
//! * terms free of `e_I` push through unchanged;
//! * terms with `e_I`-degree strictly between 0 and `d` push to zero;
//! * higher powers reduce by the monic Chern relation
//!   `∏_{j ∈ I∖{i₀}} (e_I - ρ̃_j) = 0`, keeping only the `e_I`-free part,
//!   where the Chern roots are the strict transforms of the pair diagonals
//!   `ρ̃_j = d_{i₀,j} - Σ e_J` over the sets `J ⊇ {i₀, j}` blown up before
//!   `I` (their classes are still alive at this stage).
//!
//! No vanishing of crossing products is assumed: those integrals come out
//! zero from the relations alone, which is what makes the oracle an
//! independent check.  The subset enumeration limits the oracle to `n <= 7`.

use std::collections::BTreeMap;

use num::Zero;

use crate::curve::CurveClass;
use crate::fm::{DPart, FMClass, IndexSet};
use crate::linalg::{rat, Rational};
use crate::{Error, Result};

/// Maximum number of points the oracle enumerates stages for.
pub const ORACLE_MAX_POINTS: u8 = 7;

type Expr = BTreeMap<DPart, CurveClass>;

fn expr_insert(expr: &mut Expr, ep: DPart, cc: CurveClass) {
    if cc.is_zero() {
        return;
    }
    match expr.entry(ep) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(cc);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get().checked_add(&cc).expect("same context");
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

fn expr_mul(x: &Expr, y: &Expr) -> Expr {
    let mut out = Expr::new();
    for (ex, cx) in x {
        for (ey, cy) in y {
            let mut ep = ex.clone();
            for (set, e) in ey {
                *ep.entry(*set).or_insert(0) += e;
            }
            expr_insert(&mut out, ep, cx.checked_mul(cy).expect("same context"));
        }
    }
    out
}

/// All blow-up centers, in the order the blow-ups are performed: decreasing
/// size, increasing set order within a size.
fn blowup_order(n: u8) -> Vec<IndexSet> {
    let mut sets = Vec::new();
    for mask in 1u32..(1 << n) {
        let s = IndexSet(mask);
        if s.size() >= 3 {
            sets.push(s);
        }
    }
    sets.sort_by(|a, b| b.size().cmp(&a.size()).then_with(|| a.cmp(b)));
    sets
}

/// Integrate a class over `X[n]` by eliminating every exceptional class in
/// reverse blow-up order.
pub fn oracle_integral(x: &FMClass) -> Result<Rational> {
    let ctx = x.ctx();
    if ctx.n > ORACLE_MAX_POINTS {
        return Err(Error::OracleScale(ctx.n));
    }
    let order = blowup_order(ctx.n);

    // Only degree-n terms can integrate to something nonzero.
    let mut expr = Expr::new();
    for (m, c) in x.terms() {
        if m.degree() != ctx.n as usize {
            continue;
        }
        expr_insert(&mut expr, m.d.clone(), CurveClass::monomial(ctx, m.curve.clone(), c.clone()));
    }

    for (pos, stage) in order.iter().enumerate().rev() {
        if !expr.keys().any(|ep| ep.contains_key(stage)) {
            continue;
        }
        let d = stage.size() - 1;
        // Chern roots: strict transforms of the pair diagonals through the
        // centers blown up before this one.
        let i0 = stage.min_label();
        let earlier = &order[..pos];
        let rhos: Vec<Expr> = stage
            .labels()
            .into_iter()
            .filter(|&j| j != i0)
            .map(|j| {
                let mut rho = Expr::new();
                expr_insert(
                    &mut rho,
                    DPart::new(),
                    CurveClass::diagonal(ctx, i0, j).expect("labels in range"),
                );
                for big in earlier {
                    if big.contains(i0) && big.contains(j) {
                        let ep: DPart = [(*big, 1u32)].into_iter().collect();
                        expr_insert(&mut rho, ep, CurveClass::scalar(ctx, rat(-1)));
                    }
                }
                rho
            })
            .collect();
        // Elementary symmetric functions of the roots.
        let mut sigmas: Vec<Expr> = vec![Expr::new(); d as usize + 1];
        expr_insert(&mut sigmas[0], DPart::new(), CurveClass::one(ctx));
        for rho in &rhos {
            for m in (1..=d as usize).rev() {
                let bump = expr_mul(&sigmas[m - 1], rho);
                for (ep, cc) in bump {
                    expr_insert(&mut sigmas[m], ep, cc);
                }
            }
        }

        let mut next = Expr::new();
        let mut work: Vec<(DPart, CurveClass)> = expr.into_iter().collect();
        while let Some((ep, cc)) = work.pop() {
            let kappa = *ep.get(stage).unwrap_or(&0);
            if kappa == 0 {
                expr_insert(&mut next, ep, cc);
                continue;
            }
            if kappa < d {
                continue; // pushes forward to zero
            }
            // e^κ = Σ_{m=1}^{d} (-1)^{m+1} σ_m e^{κ-m}.
            for m in 1..=d {
                let mut base = ep.clone();
                let e = base.get_mut(stage).unwrap();
                *e = kappa - m;
                if *e == 0 {
                    base.remove(stage);
                }
                let sign = if (m + 1) % 2 == 0 { rat(1) } else { rat(-1) };
                for (sep, scc) in &sigmas[m as usize] {
                    let mut merged = base.clone();
                    for (set, e) in sep {
                        *merged.entry(*set).or_insert(0) += e;
                    }
                    let piece = scc.checked_mul(&cc).expect("same context").scale(&sign);
                    if !piece.is_zero() {
                        work.push((merged, piece));
                    }
                }
            }
        }
        expr = next;
    }

    let mut total = Rational::zero();
    for (ep, cc) in &expr {
        debug_assert!(ep.is_empty(), "all exceptional classes eliminated");
        total += cc.integral();
    }
    Ok(total)
}

/// Intersection number of two classes via the oracle.
pub fn oracle_pair(x: &FMClass, y: &FMClass) -> Result<Rational> {
    oracle_integral(&x.mul(y)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{CurveMonomial, RingContext};
    use crate::fm::{integrate, pair, standard_basis, FMClass, FMMonomial};
    use crate::linalg::ratio;

    fn ctx(g: u32, n: u8) -> RingContext {
        RingContext::new(g, n)
    }

    fn mono(a: &[u8], b: &[(u8, u8)], d: &[(&[u8], u32)]) -> FMMonomial {
        let curve = CurveMonomial::from_parts(a.to_vec(), b.to_vec()).unwrap();
        let dpart: DPart = d.iter().map(|&(ls, e)| (IndexSet::from_labels(ls), e)).collect();
        FMMonomial { curve, d: dpart }
    }

    #[test]
    fn blowup_order_is_by_size_then_set_order() {
        let order = blowup_order(4);
        let s = |ls: &[u8]| IndexSet::from_labels(ls);
        assert_eq!(
            order,
            vec![s(&[1, 2, 3, 4]), s(&[1, 2, 3]), s(&[1, 2, 4]), s(&[1, 3, 4]), s(&[2, 3, 4])]
        );
    }

    #[test]
    fn matches_classical_blowup_values_on_three_points() {
        for g in 1..=3u32 {
            let c = ctx(g, 3);
            let v = FMClass::monomial(c, mono(&[1], &[], &[(&[1, 2, 3], 2)]), rat(1));
            assert_eq!(oracle_integral(&v).unwrap(), rat(-1));
            let w = FMClass::monomial(c, mono(&[], &[], &[(&[1, 2, 3], 3)]), rat(1));
            assert_eq!(oracle_integral(&w).unwrap(), rat(-2 * (2 - 2 * g as i64)));
        }
    }

    #[test]
    fn crossing_products_vanish_from_the_relations_alone() {
        // The oracle never assumes D_I D_J = 0 for crossing sets; the
        // relations force it.
        let c = ctx(2, 4);
        for (e1, e2) in [(2u32, 2u32), (3, 1), (1, 3)] {
            let v =
                FMClass::monomial(c, mono(&[], &[], &[(&[1, 2, 3], e1), (&[2, 3, 4], e2)]), rat(1));
            assert_eq!(oracle_integral(&v).unwrap(), rat(0), "e1={e1} e2={e2}");
        }
        let w = FMClass::monomial(c, mono(&[1], &[], &[(&[1, 2, 3], 1), (&[2, 3, 4], 2)]), rat(1));
        assert_eq!(oracle_integral(&w).unwrap(), rat(0));
    }

    #[test]
    fn degree_scaling_and_linearity() {
        let c = ctx(1, 3);
        let v = FMClass::monomial(c, mono(&[1], &[], &[(&[1, 2, 3], 2)]), ratio(3, 7));
        assert_eq!(oracle_integral(&v).unwrap(), ratio(-3, 7));
        let low = FMClass::monomial(c, mono(&[], &[], &[(&[1, 2, 3], 1)]), rat(1));
        assert_eq!(oracle_integral(&low).unwrap(), rat(0));
    }

    #[test]
    fn agrees_with_the_flow_evaluator_on_four_points() {
        let c = ctx(2, 4);
        for d in 0..=4usize {
            for v in standard_basis(c, d) {
                let dual = v.dual(c);
                let x = FMClass::monomial(c, v.clone(), rat(1));
                let y = FMClass::monomial(c, dual, rat(1));
                let product = x.mul(&y).unwrap();
                assert_eq!(
                    oracle_integral(&product).unwrap(),
                    integrate(&product),
                    "disagreement on {v} * dual"
                );
            }
        }
    }

    #[test]
    fn agrees_with_the_flow_evaluator_on_nested_powers() {
        let c = ctx(2, 5);
        let d125 = FMClass::divisor(c, &[1, 2, 5]).unwrap();
        let d12345 = FMClass::divisor(c, &[1, 2, 3, 4, 5]).unwrap();
        let a3 = FMClass::from_curve(&CurveClass::gen_a(c, 3).unwrap());
        let samples = vec![
            d12345.pow(5),
            d125.pow(2).mul(&d12345.pow(3)).unwrap(),
            d125.pow(3).mul(&d12345.pow(2)).unwrap(),
            d125.pow(2).mul(&d12345.pow(2)).unwrap().mul(&a3).unwrap(),
        ];
        for x in samples {
            assert_eq!(oracle_integral(&x).unwrap(), integrate(&x));
        }
    }

    #[test]
    fn two_disjoint_triples_value_on_six_points() {
        let c = ctx(2, 6);
        let v = mono(&[], &[(1, 4)], &[(&[1, 2, 3], 1), (&[4, 5, 6], 1)]);
        let x = FMClass::monomial(c, v.clone(), rat(1));
        let y = FMClass::monomial(c, v.dual(c), rat(1));
        let product = x.mul(&y).unwrap();
        assert_eq!(oracle_integral(&product).unwrap(), rat(-4));
        assert_eq!(pair(&x, &y).unwrap(), rat(-4));
    }

    #[test]
    fn scale_limit_is_reported() {
        let c = ctx(1, 8);
        let x = FMClass::one(c);
        match oracle_integral(&x) {
            Err(Error::OracleScale(8)) => {}
            other => panic!("expected scale error, got {other:?}"),
        }
    }
}
