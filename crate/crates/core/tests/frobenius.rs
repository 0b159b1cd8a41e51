use gueloop_core::exact::rational::int;
use gueloop_core::exact::series::var_mono;
use gueloop_core::exact::{Coeff, ExactSeries, PolyVU};
use gueloop_core::frobenius::omega::two_point_omega;
use gueloop_core::frobenius::virasoro::{
    commutator_residual, gue_dilaton_partition, gue_virasoro, nls_virasoro, pullback, virasoro_apply, Family,
};
use gueloop_core::frobenius::{axioms_check, theta_p1, theta_recursion_solve, FrobeniusData2D};
use gueloop_core::ribbon::{self, PartitionFunction};

#[test]
fn potentials_satisfy_the_axioms() {
    for d in [FrobeniusData2D::nls(), FrobeniusData2D::p1()] {
        assert!(axioms_check(&d, &d.potential).ok());
    }
}

#[test]
fn nls_calibration_has_one_resonance() {
    let t = theta_recursion_solve(&FrobeniusData2D::nls(), 6).unwrap();
    assert_eq!(t.resonances, vec![(2, 1)]);
}

#[test]
fn p1_two_point_functions_are_symmetric() {
    let t = theta_p1(5);
    for (p, q) in [(0, 1), (1, 2), (0, 3), (2, 2)] {
        assert_eq!(two_point_omega(&t, 2, p, 2, q).unwrap(), two_point_omega(&t, 2, q, 2, p).unwrap());
    }
    assert_eq!(two_point_omega(&t, 2, 0, 2, 0).unwrap(), PolyVU::term(0, 1, 0, int(1)));
}

#[test]
fn virasoro_constraints_on_ribbon_data() {
    let z = ribbon::partition_function(6, 2).unwrap();
    for k in -1..=3 {
        for fam in [Family::Gue, Family::Nls] {
            assert!(virasoro_apply(fam, k, &z.series).unwrap().is_zero(), "L_{k}");
        }
    }
    assert!(gue_dilaton_partition(&z.background, &z.series).unwrap().is_zero());
}

#[test]
fn virasoro_detects_a_wrong_count() {
    let mut f = ribbon::free_energy(6, 2).unwrap();
    f.add_term(var_mono(4), Coeff::x_pow(1, int(1)));
    let z = PartitionFunction::from_free_energy(&f).unwrap();
    assert!((-1..=3).any(|k| !virasoro_apply(Family::Gue, k, &z.series).unwrap().is_zero()));
}

#[test]
fn operators_agree_on_the_weight_six_basis() {
    for k in -1..=2 {
        assert_eq!(pullback(&nls_virasoro(k, 6).unwrap()).unwrap(), gue_virasoro(k, 6).unwrap());
        for w in 0..=6 {
            for m in gueloop_core::exact::series::monomials_of_weight(w) {
                let e = ExactSeries::monomial(6, m, Coeff::one());
                assert_eq!(
                    virasoro_apply(Family::Nls, k, &e).unwrap(),
                    virasoro_apply(Family::Gue, k, &e).unwrap()
                );
            }
        }
    }
}

#[test]
fn virasoro_algebra_on_z() {
    let z = ribbon::partition_function(8, 2).unwrap();
    for (k, l) in [(-1, 0), (-1, 2), (0, 1), (1, 2)] {
        assert!(commutator_residual(k, l, &z.series).unwrap().is_zero(), "[L_{k}, L_{l}]");
    }
}
