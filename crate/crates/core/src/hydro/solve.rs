//! Power-series solution `(v, rho = e^u)` of the dispersionless Toda flows.

use std::collections::HashMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::rational::{factorial_q, int, Rational};
use crate::exact::series::{mono_exp, mono_vec, monomials_of_weight, var_mono, MAX_VARS};
use crate::exact::{Chart, Coeff, ExactSeries, PolyVU};
use crate::frobenius::theta::{theta_p1, ThetaSystem};

/// Which flow is used to fix the coefficient of a monomial containing several variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowOrder {
    MinIndex,
    MaxIndex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HydroState {
    pub cap: i32,
    pub v: ExactSeries,
    pub rho: ExactSeries,
}

impl HydroState {
    /// `u = log rho = log x + log(rho / x)`.
    pub fn u(&self) -> Result<ExactSeries> {
        self.rho.log()
    }
}

/// Largest weight cap the solver accepts.
pub const MAX_HYDRO_WEIGHT: i32 = MAX_VARS as i32 - 1;

/// Caches `v^a rho^b` products for repeated evaluation of `PolyVU` at a hydrodynamic state.
pub struct VuEvaluator<'a> {
    v: &'a ExactSeries,
    rho: &'a ExactSeries,
    rho_inv: Option<ExactSeries>,
    v_pows: Vec<ExactSeries>,
    rho_pows: HashMap<i32, ExactSeries>,
    prods: HashMap<(u32, i32, i32), ExactSeries>,
}

impl<'a> VuEvaluator<'a> {
    pub fn new(v: &'a ExactSeries, rho: &'a ExactSeries) -> VuEvaluator<'a> {
        let cap = v.cap().min(rho.cap());
        VuEvaluator {
            v,
            rho,
            rho_inv: None,
            v_pows: vec![ExactSeries::one(cap)],
            rho_pows: HashMap::from([(0, ExactSeries::one(cap))]),
            prods: HashMap::new(),
        }
    }

    fn v_pow(&mut self, a: u32) -> Result<ExactSeries> {
        while self.v_pows.len() <= a as usize {
            let n = self.v_pows.last().unwrap().mul(self.v)?;
            self.v_pows.push(n);
        }
        Ok(self.v_pows[a as usize].clone())
    }

    fn rho_pow(&mut self, b: i32) -> Result<ExactSeries> {
        if let Some(s) = self.rho_pows.get(&b) {
            return Ok(s.clone());
        }
        let step = if b > 0 {
            self.rho.clone()
        } else {
            if self.rho_inv.is_none() {
                self.rho_inv = Some(self.rho.inverse()?);
            }
            self.rho_inv.clone().unwrap()
        };
        let prev = self.rho_pow(b - b.signum())?;
        let n = prev.mul(&step)?;
        self.rho_pows.insert(b, n.clone());
        Ok(n)
    }

    /// Evaluate a `u`-free `PolyVU` (P1 chart) to weight `cap`.
    pub fn eval(&mut self, p: &PolyVU, cap: i32) -> Result<ExactSeries> {
        let mut out = ExactSeries::zero(cap);
        for (&(a, b, c), r) in p.terms() {
            if c > 0 {
                return Err(Error::Config("evaluation of a log-slot term needs u".into()));
            }
            if a as i32 > cap {
                continue;
            }
            let key = (a, b, cap);
            if !self.prods.contains_key(&key) {
                let t = self.v_pow(a)?.truncate(cap).mul(&self.rho_pow(b)?.truncate(cap))?;
                self.prods.insert(key, t);
            }
            out = out.add(&self.prods[&key].scale(r));
        }
        Ok(out)
    }
}

/// Right-hand sides `(dv/ds_m, drho/ds_m)` evaluated at `(v, rho)`.
pub fn flow_rhs(theta: &ThetaSystem, m: usize, v: &ExactSeries, rho: &ExactSeries) -> Result<(ExactSeries, ExactSeries)> {
    let t = theta.get(2, m);
    let fm = factorial_q(m as u64);
    let cap = v.cap().min(rho.cap());
    let mut ev = VuEvaluator::new(v, rho);
    let du = ev.eval(&t.d_second(Chart::P1), cap)?;
    let dv = ev.eval(&t.d_v(), cap)?;
    let v_flow = du.partial_x().scale(&fm);
    let rho_flow = rho.mul(&dv.partial_x().scale(&fm))?;
    Ok((v_flow, rho_flow))
}

pub fn solve_vu(w: i32) -> Result<HydroState> {
    let theta = theta_p1(w.max(1) as usize + 1);
    let st = solve_vu_with(w, FlowOrder::MinIndex, &theta)?;
    let (r1, r2) = fixed_point_residuals(&st, &theta)?;
    if !r1.is_zero() || !r2.is_zero() {
        return Err(Error::Inconsistent(format!(
            "fixed-point equations fail after integration: {r1} ; {r2}"
        )));
    }
    Ok(st)
}

/// Integrate the flows weight by weight from `v = 0`, `rho = x`.
pub fn solve_vu_with(w: i32, order: FlowOrder, theta: &ThetaSystem) -> Result<HydroState> {
    if !(0..=MAX_HYDRO_WEIGHT).contains(&w) {
        return Err(Error::Config(format!("hydrodynamic weight cap must be in 0..={MAX_HYDRO_WEIGHT}")));
    }
    if theta.m_max() < w as usize {
        return Err(Error::Config("theta table too short for the requested weight".into()));
    }
    let mut v = ExactSeries::zero(w);
    let mut rho = ExactSeries::constant(w, Coeff::x_pow(1, Rational::one()));
    for wt in 1..=w {
        let mut rhs: HashMap<usize, (ExactSeries, ExactSeries)> = HashMap::new();
        for m in 1..=wt as usize {
            let c = wt - m as i32;
            rhs.insert(m, flow_rhs(theta, m, &v.truncate(c), &rho.truncate(c))?);
        }
        for mono in monomials_of_weight(wt) {
            let idx: Vec<usize> =
                mono_vec(mono).iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i + 1).collect();
            let m = match order {
                FlowOrder::MinIndex => idx[0],
                FlowOrder::MaxIndex => *idx.last().unwrap(),
            };
            let e = int(mono_exp(mono, m) as i64);
            let (fv, fr) = &rhs[&m];
            let below = mono - var_mono(m);
            v.add_term(mono, fv.coeff(below).scale(&(Rational::one() / &e)));
            rho.add_term(mono, fr.coeff(below).scale(&(Rational::one() / &e)));
        }
    }
    Ok(HydroState { cap: w, v, rho })
}

/// Residuals of the defining fixed-point equations; both vanish on the true solution.
pub fn fixed_point_residuals(st: &HydroState, theta: &ThetaSystem) -> Result<(ExactSeries, ExactSeries)> {
    let w = st.cap;
    let mut r1 = ExactSeries::zero(w);
    let mut r2 = ExactSeries::constant(w, Coeff::x_pow(1, Rational::one()));
    let mut ev = VuEvaluator::new(&st.v, &st.rho);
    // m = 1 carries the constant shift even when s_2 is above the cap
    for m in 0..(w as usize).max(2) {
        let t = theta.get(2, m);
        let (pv, pu) = (t.d_v(), t.d_second(Chart::P1));
        let c = w - (m as i32 + 1);
        if c >= 0 {
            let k = Coeff::rational(factorial_q(m as u64 + 1));
            r1 = r1.add(&ev.eval(&pv, c)?.mul_monomial(var_mono(m + 1), &k)?);
            r2 = r2.add(&ev.eval(&pu, c)?.mul_monomial(var_mono(m + 1), &k)?);
        }
        if m == 1 {
            r1 = r1.sub(&ev.eval(&pv, w)?);
            r2 = r2.sub(&ev.eval(&pu, w)?);
        }
    }
    Ok((r1, r2))
}

/// Determinant of the Jacobian of `(x, s_1) -> (phi, rho)` at `s = 0`; nonzero means the truncated map
/// is invertible near the initial point.
pub fn initial_jacobian(st: &HydroState) -> Result<Coeff> {
    let s1 = var_mono(1);
    let a = st.v.partial_x().constant_term();
    let b = st.v.coeff(s1);
    let c = st.rho.partial_x().constant_term();
    let d = st.rho.coeff(s1);
    Ok(a.try_mul(&d)?.sub(&b.try_mul(&c)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn first_order_flows() {
        let st = solve_vu(4).unwrap();
        let s1 = var_mono(1);
        assert_eq!(st.v.coeff(s1), Coeff::one());
        assert_eq!(st.rho.coeff(s1), Coeff::zero());
        assert_eq!(st.v.constant_term(), Coeff::zero());
        assert_eq!(st.rho.constant_term(), Coeff::x_pow(1, rat(1, 1)));
    }

    #[test]
    fn smallest_caps() {
        for w in 0..=2 {
            solve_vu(w).unwrap();
        }
    }

    #[test]
    fn flow_order_does_not_matter() {
        let th = theta_p1(8);
        let a = solve_vu_with(7, FlowOrder::MinIndex, &th).unwrap();
        let b = solve_vu_with(7, FlowOrder::MaxIndex, &th).unwrap();
        assert_eq!(a, b);
    }
}
