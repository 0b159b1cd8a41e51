use gueloop_core::exact::rational::rat;
use gueloop_core::exact::series::var_mono;
use gueloop_core::exact::Coeff;
use gueloop_core::hydro::solve::{initial_jacobian, solve_vu_with};
use gueloop_core::hydro::{f0_from_hydro, lemma_checks, phi_rho_extract, solve_vu, FlowOrder, LambdaSeries};
use gueloop_core::frobenius::theta_p1;
use gueloop_core::ribbon;

#[test]
fn genus_zero_matches_ribbon_graphs() {
    let (st, f0) = f0_from_hydro(8).unwrap();
    let want = ribbon::free_energy(8, 0).unwrap().genus_part(0);
    assert_eq!(f0.first_difference(&want, 8), None);
    phi_rho_extract(&f0, &st).unwrap();
}

#[test]
fn flows_commute() {
    let th = theta_p1(8);
    let a = solve_vu_with(7, FlowOrder::MinIndex, &th).unwrap();
    let b = solve_vu_with(7, FlowOrder::MaxIndex, &th).unwrap();
    assert_eq!(a, b);
}

#[test]
fn map_to_jets_is_locally_invertible() {
    // d(phi, rho)/d(x, s_1) at s = 0 is [[0, 1], [1, 0]]
    let st = solve_vu(3).unwrap();
    assert_eq!(initial_jacobian(&st).unwrap(), Coeff::rational(rat(-1, 1)));
    assert_eq!(st.rho.partial_x().constant_term(), Coeff::one());
    assert_eq!(st.v.coeff(var_mono(1)), Coeff::one());
}

#[test]
fn loop_operator_identities() {
    let rep = lemma_checks(6, 10).unwrap();
    assert!(rep.ok(), "{:#?}", rep.rows);
    assert_eq!(rep.rows.len(), 10);
}

#[test]
fn lemma_checks_respect_the_budget() {
    assert!(lemma_checks(14, 10).is_err());
}

#[test]
fn lambda_series_product() {
    let a = LambdaSeries::exact_monomial(-1, rat(1, 1));
    let sq = a.mul(&a).unwrap();
    assert_eq!(sq.coeff(-2).unwrap().constant_term(), Coeff::one());
    assert!(sq.coeff(-1).map_or(true, |c| c.is_zero()));
}
