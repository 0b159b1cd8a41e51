//! The genus-zero free energy assembled from two-point functions.

use num_traits::One;

use super::solve::{solve_vu, HydroState, VuEvaluator};
use crate::error::{Error, Result};
use crate::exact::rational::{factorial_q, rat, Rational};
use crate::exact::series::{mono_weight, var_mono, Mono};
use crate::exact::{Coeff, ExactSeries};
use crate::frobenius::omega::{check_exactness, omega_unchecked};
use crate::frobenius::theta::{theta_p1, ThetaSystem};

/// `(p+1)! s~_{p+1}` split into monomials, with `s~_2 = s_2 - 1/2`.
fn shifted_part(p: usize) -> Vec<(Mono, Rational)> {
    let mut out = vec![(var_mono(p + 1), factorial_q(p as u64 + 1))];
    if p == 1 {
        out.push((0, -Rational::one()));
    }
    out
}

/// `F_0 = 1/2 sum (p+1)!(q+1)! s~_{p+1} s~_{q+1} Omega_{2,p;2,q} + x sum (p+1)! s~_{p+1} theta_{2,p}
/// + x^2 u / 2`, all evaluated at the hydrodynamic solution.
pub fn f0_build(st: &HydroState, theta: &ThetaSystem) -> Result<ExactSeries> {
    let w = st.cap;
    if theta.m_max() < w as usize + 1 {
        return Err(Error::Config(format!("F_0 to weight {w} needs theta up to {}", w + 1)));
    }
    for n in 0..=w as usize + 1 {
        check_exactness(theta, 2, 2, n)?;
    }
    let mut ev = VuEvaluator::new(&st.v, &st.rho);
    let mut out = st.rho.log()?.mul_coeff(&Coeff::x_pow(2, rat(1, 2)))?;
    let top = w.max(2) as usize;
    for p in 0..top {
        let pp = shifted_part(p);
        for q in p..top {
            let qq = shifted_part(q);
            let mut omega = None;
            let half = if p == q { rat(1, 2) } else { Rational::one() };
            for (m1, r1) in &pp {
                for (m2, r2) in &qq {
                    let wt = mono_weight(m1 + m2);
                    if wt > w {
                        continue;
                    }
                    let om = omega.get_or_insert_with(|| omega_unchecked(theta, 2, p, 2, q));
                    let val = ev.eval(om, w - wt)?;
                    let k = Coeff::rational(&half * r1 * r2);
                    out = out.add(&val.mul_monomial(m1 + m2, &k)?);
                }
            }
        }
        for (m, r) in &pp {
            let wt = mono_weight(*m);
            if wt > w {
                continue;
            }
            let val = ev.eval(theta.get(2, p), w - wt)?;
            out = out.add(&val.mul_monomial(*m, &Coeff::x_pow(1, r.clone()))?);
        }
    }
    Ok(out)
}

/// Solve the flows and build `F_0` to weight `w`.
pub fn f0_from_hydro(w: i32) -> Result<(HydroState, ExactSeries)> {
    let st = solve_vu(w)?;
    let theta = theta_p1(w.max(1) as usize + 1);
    let f0 = f0_build(&st, &theta)?;
    Ok((st, f0))
}

/// `phi = d_x d_{s_1} F_0` and `rho = d_{s_1}^2 F_0`, checked against the hydrodynamic state.
pub fn phi_rho_extract(f0: &ExactSeries, st: &HydroState) -> Result<(ExactSeries, ExactSeries)> {
    let phi = f0.partial_x().partial_s(1);
    let rho = f0.partial_s(1).partial_s(1);
    let w = rho.cap().min(st.cap);
    if let Some((m, a, b)) = phi.first_difference(&st.v, w) {
        return Err(Error::Inconsistent(format!("phi != v at {}: {a} vs {b}", crate::exact::series::format_mono(m))));
    }
    if let Some((m, a, b)) = rho.first_difference(&st.rho, w) {
        return Err(Error::Inconsistent(format!(
            "d_1^2 F_0 != e^u at {}: {a} vs {b}",
            crate::exact::series::format_mono(m)
        )));
    }
    Ok((phi, rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::series::mono_from;

    #[test]
    fn low_weight_values() {
        let (st, f0) = f0_from_hydro(4).unwrap();
        let c0 = f0.constant_term();
        let want = Coeff::x_pow(2, rat(-3, 4)).add(&Coeff::log_x().shift(2, 0).scale(&rat(1, 2)));
        assert_eq!(c0, want);
        assert_eq!(f0.coeff(var_mono(2)), Coeff::x_pow(2, rat(1, 1)));
        assert_eq!(f0.coeff(mono_from(&[1, 0, 1]).unwrap()), Coeff::x_pow(2, rat(3, 1)));
        let (phi, rho) = phi_rho_extract(&f0, &st).unwrap();
        assert_eq!(rho.constant_term(), Coeff::x_pow(1, rat(1, 1)));
        assert!(phi.constant_term().is_zero());
        assert_eq!(phi.coeff(var_mono(1)), Coeff::one());
    }
}
