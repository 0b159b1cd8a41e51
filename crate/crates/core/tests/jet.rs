use gueloop_core::exact::rational::{int, rat};
use gueloop_core::exact::Rational;
use gueloop_core::jet::poly::{q_poly, NV};
use gueloop_core::jet::{
    compare_with_ribbon, dilaton_jet_check, genus_one, genus_one_corrupted, loop_residuals, residual, sampled_nonzero,
    slots, JetElement, JetFunctional, JetPoly, JetVar, LoopSystem,
};
use gueloop_core::Error;
use proptest::prelude::*;

const VARS: [JetVar; 5] = [JetVar::Lambda, JetVar::Phi(0), JetVar::Rho(0), JetVar::Phi(1), JetVar::Rho(1)];

fn poly() -> impl Strategy<Value = JetPoly> {
    prop::collection::vec((prop::collection::vec(0u8..=2, VARS.len()), -5i64..=5), 0..4).prop_map(|ts| {
        let mut p = JetPoly::zero();
        for (e, c) in ts {
            let m: Vec<(JetVar, u8)> = VARS.iter().copied().zip(e).collect();
            p = p.add(&JetPoly::monomial(&m, int(c)));
        }
        p
    })
}

fn element() -> impl Strategy<Value = JetElement> {
    (poly(), poly(), 0u32..=1, 0u32..=2, 0u32..=1).prop_map(|(e, o, a, b, c)| JetElement::from_parts(e, o, a, b, c))
}

/// A point with `D = t^2`, away from the excluded loci, plus `S = 1/t`.
fn point() -> impl Strategy<Value = ([Rational; NV], Rational)> {
    (prop::collection::vec((-30i64..=30, 1i64..=7), NV), (1i64..=30, 1i64..=7)).prop_filter_map("degenerate", |(v, (tn, td))| {
        let mut pt: [Rational; NV] = std::array::from_fn(|i| rat(v[i].0, v[i].1));
        let t = rat(tn, td);
        let lm = &pt[0] - &pt[JetVar::Phi(0).index()];
        pt[JetVar::Rho(0).index()] = (&lm * &lm - &t * &t) / int(4);
        let ok = pt[JetVar::Rho(0).index()] != int(0) && q_poly().eval(&pt) != int(0);
        ok.then(|| (pt, t.recip()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws(a in element(), b in element(), c in element()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in element(), b in element(), (pt, s) in point()) {
        let (x, y) = (a.eval(&pt, &s).unwrap(), b.eval(&pt, &s).unwrap());
        prop_assert_eq!(a.mul(&b).eval(&pt, &s).unwrap(), &x * &y);
        prop_assert_eq!(a.add(&b).eval(&pt, &s).unwrap(), &x + &y);
    }

    #[test]
    fn total_derivative_is_a_derivation(a in element(), b in element()) {
        let lhs = a.mul(&b).total_derivative().unwrap();
        let rhs = a.total_derivative().unwrap().mul(&b).add(&a.mul(&b.total_derivative().unwrap()));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.d_lambda().total_derivative().unwrap(), a.total_derivative().unwrap().d_lambda());
    }

    #[test]
    fn canonical_form_keeps_the_value(a in element()) {
        prop_assert_eq!(a.canonical(), a.clone());
        let c = a.canonical();
        prop_assert_eq!(c.canonical().denominator(), c.denominator());
    }
}

#[test]
fn derivative_of_the_discriminant() {
    let d = JetElement::disc().total_derivative().unwrap();
    let want = JetElement::phi(0)
        .sub(&JetElement::lambda())
        .mul(&JetElement::phi(1))
        .scale(&int(2))
        .sub(&JetElement::rho(1).scale(&int(4)));
    assert_eq!(d, want);
    assert_eq!(JetElement::s().mul(&JetElement::s()).mul(&JetElement::disc()), JetElement::one());
}

#[test]
fn genus_one_residuals() {
    for system in [LoopSystem::NlsLoop, LoopSystem::GueLoop] {
        let (sl, certs) = loop_residuals(system, &[genus_one()], 1).unwrap();
        assert!(certs[0].residual_zero);
        let r = residual(&sl, &[genus_one()], 1).unwrap();
        assert_eq!(sampled_nonzero(&r, 50, 11), 0);
        let bad = residual(&sl, &[genus_one_corrupted()], 1).unwrap();
        assert!(!bad.is_zero());
    }
}

#[test]
fn missing_genus_one_leaves_rho_over_d_squared() {
    let sl = slots(LoopSystem::GueLoop, 1, 0).unwrap();
    let r = residual(&sl, &[JetFunctional::from_derivatives(1, [])], 1).unwrap();
    assert_eq!(r, JetElement::rho(0).div_by(0, 2, 0));
}

#[test]
fn jet_order_is_enforced() {
    let e = loop_residuals(LoopSystem::NlsLoop, &[genus_one(), genus_one()], 3).unwrap_err();
    assert_eq!(e, Error::InsufficientJetOrder { required: 4, have: 3 });
}

#[test]
fn genus_one_dilaton_and_evaluation() {
    assert!(dilaton_jet_check(&genus_one()).ok());
    assert!(!dilaton_jet_check(&genus_one_corrupted()).ok());
    assert!(compare_with_ribbon(&genus_one(), 6).unwrap().matches);
}
