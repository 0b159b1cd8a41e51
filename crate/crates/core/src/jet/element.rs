//! The ring `Q[lambda, jets][1/rho, 1/D, 1/Q, S]` with `S^2 D = 1`.
//!
//! An element is `(even + odd * S) / (rho^a D^b Q^c)` with polynomial numerators. `D` is monic in
//! `lambda` and `Q = rho phi_1^2 - rho_1^2` has constant leading coefficient in `rho_1`, so common
//! factors can be cancelled by exact division; since `S` is not in the rational function field,
//! an element is zero iff both numerators are.

use std::fmt;

use num_traits::{One, Zero};

use super::poly::{disc_poly, q_poly, JetPoly, JetVar, JMAX, NV};
use crate::error::{Error, Result};
use crate::exact::rational::{int, rat, Rational};

#[derive(Debug, Clone, Default)]
pub struct JetElement {
    even: JetPoly,
    odd: JetPoly,
    rho: u32,
    d: u32,
    q: u32,
}

fn rho_poly() -> JetPoly {
    JetPoly::var(JetVar::Rho(0))
}

/// Images of the jet-shift derivation on every variable up to `max_jet`.
fn shift_images(max_jet: usize) -> Result<Vec<(JetVar, JetPoly)>> {
    if max_jet >= JMAX {
        return Err(Error::InsufficientJetOrder { required: max_jet + 1, have: JMAX });
    }
    let mut out = Vec::new();
    for k in 0..=max_jet {
        out.push((JetVar::Phi(k), JetPoly::var(JetVar::Phi(k + 1))));
        out.push((JetVar::Rho(k), JetPoly::var(JetVar::Rho(k + 1))));
    }
    Ok(out)
}

impl JetElement {
    pub fn zero() -> JetElement {
        JetElement::default()
    }

    pub fn one() -> JetElement {
        JetElement::poly(JetPoly::one())
    }

    pub fn poly(p: JetPoly) -> JetElement {
        JetElement { even: p, ..Default::default() }
    }

    pub fn constant(r: Rational) -> JetElement {
        JetElement::poly(JetPoly::constant(r))
    }

    pub fn var(v: JetVar) -> JetElement {
        JetElement::poly(JetPoly::var(v))
    }

    pub fn lambda() -> JetElement {
        JetElement::var(JetVar::Lambda)
    }

    pub fn phi(k: usize) -> JetElement {
        JetElement::var(JetVar::Phi(k))
    }

    pub fn rho(k: usize) -> JetElement {
        JetElement::var(JetVar::Rho(k))
    }

    /// `S = 1/sqrt(D)`.
    pub fn s() -> JetElement {
        JetElement { odd: JetPoly::one(), ..Default::default() }
    }

    /// `D = (lambda - phi)^2 - 4 rho`.
    pub fn disc() -> JetElement {
        JetElement::poly(disc_poly())
    }

    /// `Q = rho phi_1^2 - rho_1^2`.
    pub fn q() -> JetElement {
        JetElement::poly(q_poly())
    }

    /// General element `(even + odd S) / (rho^a D^b Q^c)`.
    pub fn from_parts(even: JetPoly, odd: JetPoly, a: u32, b: u32, c: u32) -> JetElement {
        JetElement { even, odd, rho: a, d: b, q: c }.reduce_rho()
    }

    pub fn even(&self) -> &JetPoly {
        &self.even
    }

    pub fn odd(&self) -> &JetPoly {
        &self.odd
    }

    /// Denominator exponents `(rho, D, Q)`.
    pub fn denominator(&self) -> (u32, u32, u32) {
        (self.rho, self.d, self.q)
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    pub fn term_count(&self) -> usize {
        self.even.len() + self.odd.len()
    }

    pub fn max_jet(&self) -> Option<usize> {
        let mut m = self.even.max_jet().max(self.odd.max_jet());
        if self.q > 0 {
            m = m.max(Some(1));
        }
        m
    }

    /// Divide by `rho^a D^b Q^c`.
    pub fn div_by(&self, a: u32, b: u32, c: u32) -> JetElement {
        JetElement { even: self.even.clone(), odd: self.odd.clone(), rho: self.rho + a, d: self.d + b, q: self.q + c }
            .reduce_rho()
    }

    fn lift(&self, a: u32, b: u32, c: u32) -> (JetPoly, JetPoly) {
        let mut f = JetPoly::one();
        if a > self.rho {
            f = f.mul_var_pow(JetVar::Rho(0), (a - self.rho) as u8);
        }
        if b > self.d {
            f = f.mul(&disc_poly().pow(b - self.d));
        }
        if c > self.q {
            f = f.mul(&q_poly().pow(c - self.q));
        }
        if f == JetPoly::one() {
            (self.even.clone(), self.odd.clone())
        } else {
            (self.even.mul(&f), self.odd.mul(&f))
        }
    }

    pub fn add(&self, o: &JetElement) -> JetElement {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let (a, b, c) = (self.rho.max(o.rho), self.d.max(o.d), self.q.max(o.q));
        let (e1, o1) = self.lift(a, b, c);
        let (e2, o2) = o.lift(a, b, c);
        JetElement { even: e1.add(&e2), odd: o1.add(&o2), rho: a, d: b, q: c }.reduce_rho()
    }

    pub fn neg(&self) -> JetElement {
        JetElement { even: self.even.neg(), odd: self.odd.neg(), rho: self.rho, d: self.d, q: self.q }
    }

    pub fn sub(&self, o: &JetElement) -> JetElement {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rational) -> JetElement {
        if r.is_zero() {
            return JetElement::zero();
        }
        JetElement { even: self.even.scale(r), odd: self.odd.scale(r), rho: self.rho, d: self.d, q: self.q }
    }

    pub fn mul(&self, o: &JetElement) -> JetElement {
        if self.is_zero() || o.is_zero() {
            return JetElement::zero();
        }
        let ee = self.even.mul(&o.even);
        let oo = self.odd.mul(&o.odd);
        let eo = self.even.mul(&o.odd).add(&self.odd.mul(&o.even));
        let (a, c) = (self.rho + o.rho, self.q + o.q);
        let out = if oo.is_zero() {
            JetElement { even: ee, odd: eo, rho: a, d: self.d + o.d, q: c }
        } else {
            // S^2 = 1/D
            let dp = disc_poly();
            JetElement { even: ee.mul(&dp).add(&oo), odd: eo.mul(&dp), rho: a, d: self.d + o.d + 1, q: c }
        };
        out.reduce_rho()
    }

    pub fn pow(&self, n: u32) -> JetElement {
        let mut acc = JetElement::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Cancel powers of `rho` (cheap, always done).
    fn reduce_rho(mut self) -> JetElement {
        if self.is_zero() {
            return JetElement::zero();
        }
        let r = JetVar::Rho(0);
        let mut k = self.rho;
        if !self.even.is_zero() {
            k = k.min(self.even.min_degree_in(r));
        }
        if !self.odd.is_zero() {
            k = k.min(self.odd.min_degree_in(r));
        }
        if k > 0 {
            self.even = self.even.div_var_pow(r, k as u8);
            self.odd = self.odd.div_var_pow(r, k as u8);
            self.rho -= k;
        }
        self
    }

    /// Fully reduced form: no denominator factor divides both numerators.
    pub fn canonical(&self) -> JetElement {
        let mut out = self.clone().reduce_rho();
        let dp = disc_poly();
        while out.d > 0 {
            let (Some(e), Some(o)) = (out.even.div_exact(&dp, JetVar::Lambda), out.odd.div_exact(&dp, JetVar::Lambda))
            else {
                break;
            };
            out.even = e;
            out.odd = o;
            out.d -= 1;
        }
        let qp = q_poly();
        while out.q > 0 {
            let (Some(e), Some(o)) = (out.even.div_exact(&qp, JetVar::Rho(1)), out.odd.div_exact(&qp, JetVar::Rho(1)))
            else {
                break;
            };
            out.even = e;
            out.odd = o;
            out.q -= 1;
        }
        out
    }

    /// Apply the derivation with `d(v) = images[v]` (unlisted variables map to 0).
    pub fn derive(&self, images: &[(JetVar, JetPoly)]) -> JetElement {
        if self.is_zero() {
            return JetElement::zero();
        }
        let zero = JetPoly::zero();
        let img = |v: JetVar| images.iter().find(|(w, _)| *w == v).map(|(_, p)| p).unwrap_or(&zero);
        let drho = img(JetVar::Rho(0)).clone();
        let dd = disc_poly().derive(images);
        let dq = if self.q > 0 { q_poly().derive(images) } else { JetPoly::zero() };
        let use_r = self.rho > 0 && !drho.is_zero();
        let use_d = (self.d > 0 || !self.odd.is_zero()) && !dd.is_zero();
        let use_q = self.q > 0 && !dq.is_zero();
        let rp = rho_poly();
        let dp = disc_poly();
        let qp = q_poly();
        let mut m = JetPoly::one();
        let (mut m_wo_r, mut m_wo_d, mut m_wo_q) = (JetPoly::one(), JetPoly::one(), JetPoly::one());
        if use_r {
            m = m.mul(&rp);
            m_wo_d = m_wo_d.mul(&rp);
            m_wo_q = m_wo_q.mul(&rp);
        }
        if use_d {
            m = m.mul(&dp);
            m_wo_r = m_wo_r.mul(&dp);
            m_wo_q = m_wo_q.mul(&dp);
        }
        if use_q {
            m = m.mul(&qp);
            m_wo_r = m_wo_r.mul(&qp);
            m_wo_d = m_wo_d.mul(&qp);
        }
        let part = |n: &JetPoly, half: bool| -> JetPoly {
            if n.is_zero() {
                return JetPoly::zero();
            }
            let mut out = n.derive(images).mul(&m);
            let mut log_d = JetPoly::zero();
            if use_r {
                log_d = log_d.add(&drho.mul(&m_wo_r).scale(&int(self.rho as i64)));
            }
            if use_d {
                let b = int(self.d as i64) + if half { rat(1, 2) } else { Rational::zero() };
                log_d = log_d.add(&dd.mul(&m_wo_d).scale(&b));
            }
            if use_q {
                log_d = log_d.add(&dq.mul(&m_wo_q).scale(&int(self.q as i64)));
            }
            out = out.sub(&n.mul(&log_d));
            out
        };
        JetElement {
            even: part(&self.even, false),
            odd: part(&self.odd, true),
            rho: self.rho + use_r as u32,
            d: self.d + use_d as u32,
            q: self.q + use_q as u32,
        }
        .reduce_rho()
    }

    /// The jet shift `sum_k phi_{k+1} d/dphi_k + rho_{k+1} d/drho_k`.
    pub fn total_derivative(&self) -> Result<JetElement> {
        let mj = self.max_jet().unwrap_or(0);
        Ok(self.derive(&shift_images(mj)?))
    }

    /// `n`-fold jet shift.
    pub fn total_derivative_n(&self, n: usize) -> Result<JetElement> {
        let mut e = self.clone();
        for _ in 0..n {
            e = e.total_derivative()?;
        }
        Ok(e)
    }

    pub fn d_lambda(&self) -> JetElement {
        self.derive(&[(JetVar::Lambda, JetPoly::one())])
    }

    pub fn partial(&self, v: JetVar) -> JetElement {
        self.derive(&[(v, JetPoly::one())])
    }

    /// Value at a point with the given value of `S`; `None` on a pole.
    pub fn eval(&self, point: &[Rational; NV], s: &Rational) -> Option<Rational> {
        let r = &point[JetVar::Rho(0).index()];
        let den = num_traits::pow(r.clone(), self.rho as usize)
            * num_traits::pow(disc_poly().eval(point), self.d as usize)
            * num_traits::pow(q_poly().eval(point), self.q as usize);
        if den.is_zero() {
            return None;
        }
        Some((self.even.eval(point) + self.odd.eval(point) * s) / den)
    }

    /// `(value at point as even part, as odd part)`, treating `S` as a formal symbol.
    pub fn eval_parts(&self, point: &[Rational; NV]) -> Option<(Rational, Rational)> {
        let one = Rational::one();
        let zero = Rational::zero();
        let e = JetElement { odd: JetPoly::zero(), ..self.clone() }.eval(point, &zero)?;
        let o = JetElement { even: JetPoly::zero(), ..self.clone() }.eval(point, &one)?;
        Some((e, o))
    }
}

impl PartialEq for JetElement {
    fn eq(&self, o: &JetElement) -> bool {
        self.sub(o).is_zero()
    }
}

impl fmt::Display for JetElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.even)?;
        if !self.odd.is_zero() {
            write!(f, " + [{}]*S", self.odd)?;
        }
        if self.rho + self.d + self.q > 0 {
            write!(f, " / (rho^{} D^{} Q^{})", self.rho, self.d, self.q)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_squared_times_d_is_one() {
        let s = JetElement::s();
        assert_eq!(s.mul(&s).mul(&JetElement::disc()), JetElement::one());
    }

    #[test]
    fn shift_of_discriminant() {
        let dd = JetElement::disc().total_derivative().unwrap();
        let want = JetElement::phi(0)
            .sub(&JetElement::lambda())
            .mul(&JetElement::phi(1))
            .scale(&int(2))
            .sub(&JetElement::rho(1).scale(&int(4)));
        assert_eq!(dd, want);
    }

    #[test]
    fn shift_of_s() {
        // dS = -1/2 S^3 dD
        let s = JetElement::s();
        let lhs = s.total_derivative().unwrap();
        let rhs = s.pow(3).mul(&JetElement::disc().total_derivative().unwrap()).scale(&rat(-1, 2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn shift_commutes_with_d_lambda() {
        let e = JetElement::s().mul(&JetElement::rho(1)).div_by(1, 1, 1);
        let a = e.total_derivative().unwrap().d_lambda();
        let b = e.d_lambda().total_derivative().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn canonical_cancels_common_factors() {
        let e = JetElement::disc().mul(&JetElement::q()).mul(&JetElement::s()).div_by(0, 2, 1);
        let c = e.canonical();
        assert_eq!(c.denominator(), (0, 1, 0));
        assert_eq!(c, JetElement::s().div_by(0, 1, 0));
    }
}
