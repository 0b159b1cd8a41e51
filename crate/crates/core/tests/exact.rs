use gueloop_core::exact::rational::{format_rational, parse_rational, rat};
use gueloop_core::exact::series::{mono_from, var_mono};
use gueloop_core::exact::{Atom, Coeff, ExactSeries, Rational};
use proptest::prelude::*;

const CAP: i32 = 5;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

/// Random polynomial-coefficient series: terms `r x^a eps^b s^m` with small exponents.
fn series() -> impl Strategy<Value = ExactSeries> {
    let term = (prop::collection::vec(0u32..=2, 4), -1i32..=2, -2i32..=2, small_rat());
    prop::collection::vec(term, 0..6).prop_map(|ts| {
        let mut s = ExactSeries::zero(CAP);
        for (e, x, eps, r) in ts {
            let m = mono_from(&e).unwrap();
            if gueloop_core::exact::series::mono_weight(m) <= CAP {
                s.add_term(m, Coeff::term(Atom::new(x, eps), r));
            }
        }
        s
    })
}

/// Series with constant term 1, so `log`, `inverse` apply.
fn unit_series() -> impl Strategy<Value = ExactSeries> {
    series().prop_map(|s| s.positive_part().add(&ExactSeries::one(CAP)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_commutative_and_associative(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn product_distributes(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b.add(&c)).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()));
    }

    #[test]
    fn inverse_and_log_exp(u in unit_series()) {
        prop_assert_eq!(u.mul(&u.inverse().unwrap()).unwrap(), ExactSeries::one(CAP));
        prop_assert_eq!(u.log().unwrap().exp().unwrap(), u.clone());
    }

    #[test]
    fn leibniz_rule(a in series(), b in series(), k in 1usize..=3) {
        // d_k lowers the cap by k; compare at the common cap
        let lhs = a.mul(&b).unwrap().partial_s(k);
        let rhs = a.partial_s(k).mul(&b).unwrap().add(&a.mul(&b.partial_s(k)).unwrap());
        prop_assert!(lhs.eq_to_weight(&rhs, CAP - k as i32));
    }

    #[test]
    fn json_round_trip(a in series()) {
        prop_assert_eq!(ExactSeries::from_json(&a.to_json(), CAP).unwrap(), a);
    }

    #[test]
    fn rational_text_round_trip(r in small_rat()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
}

#[test]
fn log_of_x_plus_s1() {
    // log(x + s_1) = log x + s_1/x - s_1^2/(2x^2) + ...
    let s = ExactSeries::constant(3, Coeff::x_pow(1, rat(1, 1))).add(&ExactSeries::var(3, 1));
    let l = s.log().unwrap();
    assert_eq!(l.constant_term(), Coeff::log_x());
    assert_eq!(l.coeff(var_mono(1)), Coeff::x_pow(-1, rat(1, 1)));
    assert_eq!(l.coeff(2 * var_mono(1)), Coeff::x_pow(-2, rat(-1, 2)));
    assert_eq!(l.coeff(3 * var_mono(1)), Coeff::x_pow(-3, rat(1, 3)));
}

#[test]
fn transcendental_atoms_do_not_square() {
    let l = ExactSeries::constant(2, Coeff::log_x());
    assert!(l.mul(&l).is_err());
}
