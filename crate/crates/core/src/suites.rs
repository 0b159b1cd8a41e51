//! Named verification suites. Each produces a list of checks in a fixed order.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::rational::{binomial, int, rat, Rational};
use crate::exact::series::{format_mono, monomials_of_weight, var_mono};
use crate::exact::{Coeff, ExactSeries};
use crate::frobenius::data::{axioms_check, FrobeniusData2D};
use crate::frobenius::omega::omega_table;
use crate::frobenius::theta::{check_calibration, theta_p1, theta_recursion_solve};
use crate::frobenius::virasoro::{
    gue_dilaton_free_energy, gue_dilaton_partition, gue_virasoro, nls_virasoro, pullback, virasoro_apply, Family,
};
use crate::hydro::{f0_from_hydro, lemma_checks, phi_rho_extract, solve_vu};
use crate::jet::{
    compare_slots, compare_with_ribbon, dilaton_jet_check, evaluate_on_solution, genus_one, genus_one_corrupted,
    loop_residuals, residual, sampled_nonzero, slots, solve_g2, JetElement, JetFunctional, LoopSystem,
};
use crate::ribbon::{self, CorrelatorPoly, PartitionFunction, ValenceProfile};

pub const SUITES: [&str; 12] = [
    "ribbon",
    "virasoro-gue",
    "virasoro-nls",
    "dilaton-gue",
    "frobenius",
    "genus0",
    "lemmas",
    "loop-g1",
    "gue-loop",
    "genus1",
    "dilaton-jet",
    "genus2",
];

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub weight: i32,
    pub genus: u32,
    pub lambda_order: i32,
    pub jet_order: usize,
    pub seed: u64,
    /// Replace `F_1` (or the GUE data) by a perturbed version; negative-control harness.
    pub corrupt: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { weight: 8, genus: 2, lambda_order: 10, jet_order: 4, seed: 0, corrupt: false }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: Option<String>) -> Check {
        Check { name: name.into(), passed, detail }
    }

    fn pass(name: impl Into<String>) -> Check {
        Check::new(name, true, None)
    }

    /// Check from a `Result`; an error counts as a failure with its message.
    fn from_result(name: impl Into<String>, r: Result<Option<String>>) -> Check {
        match r {
            Ok(None) => Check::pass(name),
            Ok(Some(why)) => Check::new(name, false, Some(why)),
            Err(e) => Check::new(name, false, Some(e.to_string())),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn report(suite: &str, checks: Vec<Check>) -> SuiteReport {
    SuiteReport { suite: suite.into(), passed: checks.iter().all(|c| c.passed), checks }
}

/// First nonzero coefficient of a series that should vanish.
fn first_nonzero(s: &ExactSeries) -> Option<String> {
    s.terms().iter().next().map(|(m, c)| format!("coefficient of {} is {c}", format_mono(*m)))
}

fn first_diff(a: &ExactSeries, b: &ExactSeries, w: i32) -> Option<String> {
    a.first_difference(b, w).map(|(m, x, y)| format!("{}: {x} vs {y}", format_mono(m)))
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<SuiteReport>> {
    if cfg.weight < 0 || cfg.weight > 14 {
        return Err(Error::Config(format!("weight {} outside 0..=14", cfg.weight)));
    }
    if name == "all" {
        return SUITES.par_iter().map(|s| run_one(s, cfg)).collect();
    }
    Ok(vec![run_one(name, cfg)?])
}

fn run_one(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let checks = match name {
        "ribbon" => ribbon_suite()?,
        "virasoro-gue" => virasoro_gue(cfg)?,
        "virasoro-nls" => virasoro_nls(cfg)?,
        "dilaton-gue" => dilaton_gue(cfg)?,
        "frobenius" => frobenius_suite(cfg),
        "genus0" => genus0(cfg),
        "lemmas" => lemmas(cfg)?,
        "loop-g1" => loop_g1(cfg)?,
        "gue-loop" => gue_loop(cfg)?,
        "genus1" => genus1(cfg),
        "dilaton-jet" => dilaton_jet(cfg),
        "genus2" => genus2(cfg),
        _ => {
            return Err(Error::Config(format!("unknown suite {name:?}; expected one of {} or all", SUITES.join(", "))))
        }
    };
    Ok(report(name, checks))
}

fn ribbon_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let closed = [
        (2, CorrelatorPoly::from_ints(&[(3, 2), (1, 1)]), "tr M^4 = 2n^3 + n"),
        (3, CorrelatorPoly::from_ints(&[(4, 5), (2, 10)]), "tr M^6 = 5n^4 + 10n^2"),
        (4, CorrelatorPoly::from_ints(&[(5, 14), (3, 70), (1, 21)]), "tr M^8 = 14n^5 + 70n^3 + 21n"),
    ];
    for (m, want, name) in closed {
        let got = ribbon::connected_correlator(&ValenceProfile::new(vec![2 * m])?)?;
        out.push(Check::new(name, got == want, (got != want).then(|| format!("got {got:?}"))));
    }
    let hz = ribbon::harer_zagier(6);
    for m in 1..=6u32 {
        let prof = ValenceProfile::new(vec![2 * m])?;
        let cat = Rational::from_integer(binomial(2 * m as u64, m as u64)) / int(m as i64 + 1);
        let a0 = ribbon::a_value(&prof, 0)?;
        out.push(Check::new(format!("a_0({}) = Catalan({m})", 2 * m), a0 == cat, (a0 != cat).then(|| format!("{a0}"))));
        let full = ribbon::full_moment(&prof)?;
        let ok = full == hz[m as usize];
        out.push(Check::new(format!("tr M^{} agrees with Harer-Zagier", 2 * m), ok, (!ok).then(|| format!("{full:?}"))));
    }
    for j in [vec![1, 1], vec![2, 2], vec![1, 3], vec![1, 1, 2], vec![2, 2, 2]] {
        let prof = ValenceProfile::new(j.clone())?;
        let ok = ribbon::cumulant_from_moments(&prof)? == ribbon::connected_correlator(&prof)?;
        out.push(Check::new(format!("connected correlator {j:?} by inclusion-exclusion"), ok, None));
    }
    Ok(out)
}

/// Ribbon partition function; the corrupted variant shifts `a_1(4)` by one.
fn gue_partition(cfg: &SuiteConfig) -> Result<PartitionFunction> {
    let mut f = ribbon::free_energy(cfg.weight, cfg.genus)?;
    if cfg.corrupt && cfg.weight >= 4 {
        f.add_term(var_mono(4), Coeff::x_pow(1, int(1)));
    }
    PartitionFunction::from_free_energy(&f)
}

fn virasoro_gue(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let z = gue_partition(cfg)?;
    let mut out = Vec::new();
    for k in -1..=3 {
        let name = format!("L_{k} Z = 0 (weight {}, genus {})", cfg.weight, cfg.genus);
        out.push(Check::from_result(name, virasoro_apply(Family::Gue, k, &z.series).map(|r| first_nonzero(&r))));
    }
    for (k, l) in [(-1, 0), (-1, 1), (0, 2), (1, 2)] {
        let name = format!("[L_{k}, L_{l}] = ({}) L_{}", k - l, k + l);
        let r = crate::frobenius::virasoro::commutator_residual(k, l, &z.series);
        out.push(Check::from_result(name, r.map(|r| first_nonzero(&r))));
    }
    Ok(out)
}

fn virasoro_nls(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let n = cfg.weight.max(1) as usize;
    let mut out = Vec::new();
    for k in -1..=3 {
        let pulled = pullback(&nls_virasoro(k, n)?)?;
        let gue = gue_virasoro(k, n)?;
        out.push(Check::new(
            format!("pulled-back L_{k}^NLS = L_{k}^GUE as operators"),
            pulled == gue,
            (pulled != gue).then(|| format!("{} vs {} terms", pulled.len(), gue.len())),
        ));
        let mut bad = None;
        'basis: for w in 0..=cfg.weight {
            for m in monomials_of_weight(w) {
                let e = ExactSeries::monomial(cfg.weight, m, Coeff::one());
                let a = virasoro_apply(Family::Nls, k, &e)?;
                let b = virasoro_apply(Family::Gue, k, &e)?;
                if a != b {
                    bad = Some(format!("differs on {}", format_mono(m)));
                    break 'basis;
                }
            }
        }
        out.push(Check::new(format!("L_{k} on the weight-{} monomial basis", cfg.weight), bad.is_none(), bad));
    }
    let z = gue_partition(cfg)?;
    for k in -1..=3 {
        let r = virasoro_apply(Family::Nls, k, &z.series);
        out.push(Check::from_result(format!("pulled-back L_{k}^NLS Z = 0"), r.map(|r| first_nonzero(&r))));
    }
    Ok(out)
}

fn dilaton_gue(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let z = gue_partition(cfg)?;
    let mut f = ribbon::free_energy(cfg.weight, cfg.genus)?;
    if cfg.corrupt && cfg.weight >= 4 {
        f.add_term(var_mono(4), Coeff::x_pow(1, int(1)));
    }
    Ok(vec![
        Check::from_result("dilaton on Z", gue_dilaton_partition(&z.background, &z.series).map(|r| first_nonzero(&r))),
        Check::from_result("dilaton on log Z", gue_dilaton_free_energy(&f).map(|r| first_nonzero(&r))),
    ])
}

fn frobenius_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let m = cfg.weight.max(2) as usize;
    let mut out = Vec::new();
    for (name, d) in [("NLS", FrobeniusData2D::nls()), ("P1", FrobeniusData2D::p1())] {
        let r = axioms_check(&d, &d.potential);
        out.push(Check::new(format!("{name} potential: WDVV, unity, quasihomogeneity"), r.ok(), (!r.ok()).then(|| format!("{r:?}"))));
    }
    let nls = theta_recursion_solve(&FrobeniusData2D::nls(), m);
    out.push(Check::from_result(
        format!("NLS calibration to level {m}"),
        nls.map(|t| (t.resonances != vec![(2, 1)]).then(|| format!("resonant levels {:?}", t.resonances))),
    ));
    let p1 = FrobeniusData2D::p1();
    out.push(Check::from_result(
        format!("P1 recursion reproduces the closed form to level {m}"),
        theta_recursion_solve(&p1, m).map(|t| (t.theta != theta_p1(m).theta).then(|| "theta tables differ".to_string())),
    ));
    out.push(Check::from_result("P1 closed form is a calibration", check_calibration(&p1, &theta_p1(m)).map(|_| None)));
    out.push(Check::from_result(
        "two-point functions are symmetric",
        omega_table(&theta_p1(m.min(6))).map(|tab| {
            tab.iter()
                .find(|((a, p, b, q), v)| tab.get(&(*b, *q, *a, *p)) != Some(v))
                .map(|(k, _)| format!("asymmetric at {k:?}"))
        }),
    ));
    out
}

fn genus0(cfg: &SuiteConfig) -> Vec<Check> {
    let w = cfg.weight;
    let f0 = f0_from_hydro(w).and_then(|(_, f0)| {
        let want = ribbon::free_energy(w, 0)?.genus_part(0);
        Ok(first_diff(&f0, &want, w))
    });
    // the extraction of phi, rho costs two s_1 derivatives
    let legendre = f0_from_hydro(w + 2).and_then(|(st, f0)| phi_rho_extract(&f0, &st).map(|_| None));
    let log_rho = solve_vu(w).and_then(|st| {
        // rho = x exp(u - log x)
        let u = st.u()?;
        let shifted = u.sub(&ExactSeries::constant(u.cap(), Coeff::log_x()));
        let rho = shifted.exp()?.mul_coeff(&Coeff::x_pow(1, int(1)))?;
        Ok(first_diff(&rho, &st.rho, w))
    });
    vec![
        Check::from_result(format!("F_0 from the hydrodynamic pipeline = ribbon genus 0 to weight {w}"), f0),
        Check::from_result(format!("phi = v and d_1^2 F_0 = rho to weight {w}"), legendre),
        Check::from_result(format!("rho = e^u to weight {w}"), log_rho),
    ]
}

fn lemmas(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let rep = lemma_checks(cfg.weight, cfg.lambda_order)?;
    Ok(rep
        .rows
        .into_iter()
        .map(|r| {
            let name = format!("{} (lambda^-{}, s-weight {})", r.identity, r.lambda_order, rep.weight);
            let passed = r.passed();
            Check::new(name, passed, r.detail.or_else(|| (!passed).then(|| r.status.clone())))
        })
        .collect())
}

fn genus_one_for(cfg: &SuiteConfig) -> JetFunctional {
    if cfg.corrupt {
        genus_one_corrupted()
    } else {
        genus_one()
    }
}

fn loop_certificate(system: LoopSystem, f1: &JetFunctional, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (sl, certs) = loop_residuals(system, std::slice::from_ref(f1), cfg.jet_order.max(1))?;
    let c = &certs[0];
    let mut out = vec![Check::new(
        format!("{} genus-1 residual is the zero element", system.name()),
        c.residual_zero,
        c.residual.as_ref().map(|r| format!("residual with {} terms: {r}", c.term_count)),
    )];
    let r = residual(&sl, std::slice::from_ref(f1), 1)?;
    let bad = sampled_nonzero(&r, 50, cfg.seed);
    out.push(Check::new(
        format!("{} genus-1 residual vanishes at 50 random points", system.name()),
        bad == 0,
        (bad > 0).then(|| format!("nonzero at {bad} of 50 points")),
    ));
    Ok(out)
}

fn loop_g1(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let f1 = genus_one_for(cfg);
    let mut out = loop_certificate(LoopSystem::NlsLoop, &f1, cfg)?;
    let sl = slots(LoopSystem::NlsLoop, 1, 0)?;
    let r0 = residual(&sl, &[JetFunctional::from_derivatives(1, [])], 1)?;
    let want = JetElement::rho(0).div_by(0, 2, 0);
    out.push(Check::new("F_1 = 0 leaves the inhomogeneous term rho/D^2", r0 == want, (r0 != want).then(|| r0.to_string())));
    Ok(out)
}

fn gue_loop(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let f1 = genus_one_for(cfg);
    let mut out = loop_certificate(LoopSystem::GueLoop, &f1, cfg)?;
    let r = cfg.jet_order.max(1);
    let cert = compare_slots(&slots(LoopSystem::NlsLoop, r, r - 1)?, &slots(LoopSystem::GueLoop, r, r - 1)?);
    out.push(Check::new(
        format!("GUE and NLS loop coefficients agree ({} slots)", cert.slots_checked),
        cert.equal(),
        cert.mismatches.first().cloned(),
    ));
    Ok(out)
}

fn genus1(cfg: &SuiteConfig) -> Vec<Check> {
    let f1 = genus_one_for(cfg);
    let cmp = compare_with_ribbon(&f1, cfg.weight).map(|c| c.first_difference);
    let at0 = evaluate_on_solution(&f1, 0).map(|f| {
        let want = Coeff::zeta().add(&Coeff::log_x().scale(&rat(-1, 12)));
        (f.constant_term() != want).then(|| format!("s = 0 value {}", f.constant_term()))
    });
    vec![
        Check::from_result(format!("F_1 on the solution = ribbon genus 1 to weight {}", cfg.weight), cmp),
        Check::from_result("F_1 at s = 0 is zeta'(-1) - log(x)/12", at0),
    ]
}

fn dilaton_jet(cfg: &SuiteConfig) -> Vec<Check> {
    let r = dilaton_jet_check(&genus_one_for(cfg));
    vec![
        Check::new("jet dilaton for F_1, derivative level", r.derivative_level_ok, r.mismatches.first().cloned()),
        Check::new("jet Euler operator on F_1 gives 1/12", r.euler_value_ok == Some(true), None),
    ]
}

fn genus2(cfg: &SuiteConfig) -> Vec<Check> {
    let sol = match solve_g2(4, cfg.seed) {
        Ok(s) => s,
        Err(e) => return vec![Check::new("solve F_2 from the eps^2 loop equation", false, Some(e.to_string()))],
    };
    let f2 = sol.functional;
    let mut out = vec![Check::new(
        format!("solve F_2 from the eps^2 loop equation ({} terms over rho^3 Q^{})", sol.terms, sol.q_power),
        true,
        None,
    )];
    let fs = [genus_one(), f2.clone()];
    for system in [LoopSystem::NlsLoop, LoopSystem::GueLoop] {
        let r = loop_residuals(system, &fs, cfg.jet_order).map(|(_, certs)| {
            certs.iter().find(|c| !c.residual_zero).map(|c| format!("genus {} residual is nonzero", c.genus))
        });
        out.push(Check::from_result(format!("{} residuals vanish through genus 2", system.name()), r));
    }
    let d = dilaton_jet_check(&f2);
    out.push(Check::new("jet dilaton for F_2", d.ok(), d.mismatches.first().cloned()));
    let w = cfg.weight.max(8);
    out.push(Check::from_result(
        format!("F_2 on the solution = ribbon genus 2 to weight {w}"),
        compare_with_ribbon(&f2, w).map(|c| c.first_difference),
    ));
    out.push(Check::from_result(
        "F_2: s_8 coefficient 21x, s = 0 value -1/(240 x^2)",
        evaluate_on_solution(&f2, 8).map(|f| {
            let ok = f.coeff(var_mono(8)) == Coeff::x_pow(1, int(21)) && f.constant_term() == Coeff::x_pow(-2, rat(-1, 240));
            (!ok).then(|| format!("s_8: {}, s = 0: {}", f.coeff(var_mono(8)), f.constant_term()))
        }),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig { weight: 4, lambda_order: 4, ..SuiteConfig::default() }
    }

    #[test]
    fn fast_suites_pass() {
        for s in ["ribbon", "virasoro-gue", "virasoro-nls", "dilaton-gue", "frobenius", "genus0", "loop-g1", "dilaton-jet"] {
            let r = run_suite(s, &small()).unwrap();
            assert!(r[0].passed, "{s}: {:#?}", r[0].checks);
        }
    }

    #[test]
    fn corrupt_flag_fails() {
        let cfg = SuiteConfig { corrupt: true, ..small() };
        for s in ["virasoro-gue", "loop-g1", "dilaton-jet", "genus1"] {
            assert!(!run_suite(s, &cfg).unwrap()[0].passed, "{s}");
        }
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(run_suite("nope", &small()), Err(Error::Config(_))));
    }
}
