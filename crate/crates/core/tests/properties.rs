//! Generative property suites for the algebraic invariants: rewrite
//! confluence, duality, adjunction, normal-form stability, and the block
//! structure of the intersection pairing.

use num::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tautring::curve::{self, CurveClass, CurveMonomial, RingContext};
use tautring::fm::{self, FMClass, FMMonomial};
use tautring::linalg::{rat, Rational};

/// A reproducible context and standard monomial drawn from `seed`.
fn draw_curve_monomial(
    rng: &mut ChaCha8Rng,
    max_g: u32,
    max_n: u8,
) -> (RingContext, CurveMonomial) {
    loop {
        let g = rng.gen_range(1..=max_g);
        let n = rng.gen_range(3..=max_n);
        let ctx = RingContext::new(g, n);
        let d = rng.gen_range(0..=n as usize);
        let basis = curve::standard_basis(ctx, d);
        if !basis.is_empty() {
            let m = basis[rng.gen_range(0..basis.len())].clone();
            return (ctx, m);
        }
    }
}

/// A standard compactified monomial with one divisor exponent optionally
/// pushed above its admissible bound — exactly the inputs the normal-form
/// rewriting has to repair.
fn draw_fm_input(rng: &mut ChaCha8Rng) -> (RingContext, FMClass) {
    loop {
        let g = rng.gen_range(1..=2u32);
        let n = rng.gen_range(3..=5u8);
        let ctx = RingContext::new(g, n);
        let d = rng.gen_range(0..=n as usize);
        let basis = fm::standard_basis(ctx, d);
        if basis.is_empty() {
            continue;
        }
        let mut m = basis[rng.gen_range(0..basis.len())].clone();
        if !m.d.is_empty() && rng.gen_bool(0.7) {
            let keys: Vec<_> = m.d.keys().cloned().collect();
            let k = keys[rng.gen_range(0..keys.len())];
            *m.d.get_mut(&k).unwrap() += rng.gen_range(1..=2u32);
        }
        return (ctx, FMClass::monomial(ctx, m, rat(1)));
    }
}

proptest! {
    /// Any product of standard monomials rewrites to at most one standard
    /// monomial, with an integer coefficient, independent of rule order.
    #[test]
    fn products_reduce_to_a_single_integer_multiple(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ctx, v) = draw_curve_monomial(&mut rng, 3, 7);
        let d = rng.gen_range(0..=ctx.n as usize);
        let basis = curve::standard_basis(ctx, d);
        prop_assume!(!basis.is_empty());
        let w = &basis[rng.gen_range(0..basis.len())];
        let product = v.try_mul(w, ctx.g);
        if let Some((m, c)) = &product {
            prop_assert!(c.denom().is_one(), "non-integer coefficient {c} on {m}");
            prop_assert!(!c.is_zero());
        }
        for _ in 0..2 {
            let order_seed: u64 = rng.gen();
            prop_assert_eq!(v.try_mul_seeded(w, ctx.g, order_seed), product.clone());
        }
    }

    /// The section-ring dual is an involution and preserves nothing but the
    /// matching part: complementary degree, same matching factors.
    #[test]
    fn curve_duality_involutes_and_complements_degree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ctx, v) = draw_curve_monomial(&mut rng, 3, 8);
        let ground = ctx.labels();
        let dual = v.dual_in(&ground);
        prop_assert_eq!(v.degree() + dual.degree(), ctx.n as usize);
        prop_assert_eq!(v.b(), dual.b());
        prop_assert_eq!(dual.dual_in(&ground), v);
    }

    /// The intersection pairing only connects standard monomials with equal
    /// matching supports: everything else lands in a zero block.
    #[test]
    fn pairing_blocks_split_along_matching_supports(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ctx, v) = draw_curve_monomial(&mut rng, 2, 6);
        let d = v.degree();
        let basis = curve::standard_basis(ctx, d);
        let w = &basis[rng.gen_range(0..basis.len())];
        if v.b_support() != w.b_support() {
            let vx = CurveClass::monomial(ctx, v.clone(), rat(1));
            let wx = CurveClass::monomial(ctx, w.dual_in(&ctx.labels()), rat(1));
            prop_assert_eq!(vx.pairing(&wx).unwrap(), rat(0));
        }
    }

    /// The degree-d Gram matrix of the pairing is symmetric.
    #[test]
    fn pairing_matrices_are_symmetric(g in 1..=2u32, n in 3..=5u8, d in 0..=5usize) {
        prop_assume!(d <= n as usize);
        let ctx = RingContext::new(g, n);
        let m = curve::pairing_matrix(ctx, d);
        for r in 0..m.nrows {
            for s in 0..r {
                prop_assert_eq!(m.get(r, s), m.get(s, r));
            }
        }
    }

    /// Integral adjunction for forgetting the last point:
    /// ∫ pullback(y)·x  =  ∫ y·pushforward(x).
    #[test]
    fn integral_adjunction_for_point_forgetting(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ctx, x) = draw_curve_monomial(&mut rng, 3, 7);
        let small = RingContext::new(ctx.g, ctx.n - 1);
        let dy = rng.gen_range(0..=small.n as usize);
        let by = curve::standard_basis(small, dy);
        prop_assume!(!by.is_empty());
        let y = CurveClass::monomial(small, by[rng.gen_range(0..by.len())].clone(), rat(1));
        let xx = CurveClass::monomial(ctx, x, rat(1));
        let lhs = y.pullback_to(ctx.n).unwrap().checked_mul(&xx).unwrap().integral();
        let rhs = y.checked_mul(&xx.pushforward().unwrap()).unwrap().integral();
        prop_assert_eq!(lhs, rhs);
    }

    /// Rewriting to the standard basis is idempotent.
    #[test]
    fn normal_form_is_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, x) = draw_fm_input(&mut rng);
        let once = fm::normalize(&x);
        let twice = fm::normalize(&once);
        prop_assert_eq!(once, twice);
    }

    /// Rewriting never changes intersection numbers: the normal form pairs
    /// identically against every standard monomial of complementary degree.
    #[test]
    fn normal_form_preserves_all_pairings(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ctx, x) = draw_fm_input(&mut rng);
        let nf = fm::normalize(&x);
        let degree = x.degrees().first().copied();
        prop_assume!(degree.is_some());
        let d = degree.unwrap();
        prop_assume!(d <= ctx.n as usize);
        let complement = fm::standard_basis(ctx, ctx.n as usize - d);
        for w in complement {
            let wx = FMClass::monomial(ctx, w, rat(1));
            prop_assert_eq!(
                fm::pair(&x, &wx).unwrap(),
                fm::pair(&nf, &wx).unwrap(),
                "pairing drifted while rewriting {}", &x
            );
        }
    }

    /// The compactified dual of a standard monomial is standard, has
    /// complementary degree, and involutes.
    #[test]
    fn compactified_duality_involutes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = rng.gen_range(1..=2u32);
        let n = rng.gen_range(3..=6u8);
        let ctx = RingContext::new(g, n);
        let d = rng.gen_range(0..=n as usize);
        let basis = fm::standard_basis(ctx, d);
        prop_assume!(!basis.is_empty());
        let v: &FMMonomial = &basis[rng.gen_range(0..basis.len())];
        let dual = v.dual(ctx);
        prop_assert!(dual.is_standard(ctx), "dual of {} is {} (not standard)", v, dual);
        prop_assert_eq!(v.degree() + dual.degree(), n as usize);
        prop_assert_eq!(&dual.dual(ctx), v);
    }

    /// The two independent evaluators give the same intersection number on
    /// random complementary products.
    #[test]
    fn evaluators_agree_on_random_products(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = rng.gen_range(1..=3u32);
        let n = rng.gen_range(3..=6u8);
        let ctx = RingContext::new(g, n);
        let d = rng.gen_range(0..=n as usize);
        let left = fm::standard_basis(ctx, d);
        let right = fm::standard_basis(ctx, n as usize - d);
        prop_assume!(!left.is_empty() && !right.is_empty());
        let v = FMClass::monomial(ctx, left[rng.gen_range(0..left.len())].clone(), rat(1));
        let w = FMClass::monomial(ctx, right[rng.gen_range(0..right.len())].clone(), rat(1));
        prop_assert_eq!(
            fm::pair(&v, &w).unwrap(),
            tautring::blowup::oracle_pair(&v, &w).unwrap()
        );
    }

    /// Pushforward along the last point is linear and kills only what it
    /// must: classes without the last label map to zero unless they carry
    /// its section class.
    #[test]
    fn pushforward_is_linear(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ctx, v) = draw_curve_monomial(&mut rng, 3, 7);
        let (ctx2, w) = {
            let d = rng.gen_range(0..=ctx.n as usize);
            let basis = curve::standard_basis(ctx, d);
            (ctx, basis[rng.gen_range(0..basis.len())].clone())
        };
        let a = CurveClass::monomial(ctx, v, rat(2));
        let b = CurveClass::monomial(ctx2, w, rat(-3));
        let sum = a.checked_add(&b).unwrap();
        let lhs = sum.pushforward().unwrap();
        let rhs = a
            .pushforward()
            .unwrap()
            .checked_add(&b.pushforward().unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

/// Deterministic spot check that the proptest plumbing above actually draws
/// nontrivial cases: a bumped exponent must reach the rewriting rules.
#[test]
fn the_fm_generator_produces_nonstandard_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut saw_nonstandard = false;
    for _ in 0..200 {
        let (ctx, x) = draw_fm_input(&mut rng);
        let m = x.terms().next().unwrap().0;
        if !m.is_standard(ctx) {
            saw_nonstandard = true;
            let nf = fm::normalize(&x);
            let _ = nf; // rewriting must terminate
        }
    }
    assert!(saw_nonstandard);
}

/// The Gram matrix entries of the section ring are always integers: the
/// rewrite rules only produce integer multiples.
#[test]
fn pairing_entries_are_integers_on_a_sample() {
    for (g, n, d) in [(1u32, 4u8, 2usize), (2, 5, 2), (3, 4, 3)] {
        let ctx = RingContext::new(g, n);
        let m = curve::pairing_matrix(ctx, d);
        for r in 0..m.nrows {
            for s in 0..m.ncols {
                let e: &Rational = m.get(r, s);
                assert!(e.denom().is_one(), "entry ({r},{s}) = {e} at g={g} n={n} d={d}");
            }
        }
    }
}
