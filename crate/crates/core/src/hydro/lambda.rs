//! Laurent series in `1/lambda` whose coefficients are truncated `s`-series.
//!
//! `low` is the smallest exponent whose coefficient is fully determined; anything below it is
//! unknown. Exponents at or above `low` that are not stored are exactly zero.

use std::collections::BTreeMap;

use num_traits::One;

use crate::error::Result;
use crate::exact::rational::{binomial_q, int, rat, Rational};
use crate::exact::series::MAX_VARS;
use crate::exact::{Coeff, ExactSeries};

/// `low` of a series that is known at every exponent (a polynomial in `lambda`).
pub const EXACT_LOW: i32 = i32::MIN / 4;
/// Cap used for `s`-independent exact coefficients.
pub const EXACT_CAP: i32 = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSeries {
    low: i32,
    coeffs: BTreeMap<i32, ExactSeries>,
}

/// Outcome of checking that a series vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCheck {
    /// Deepest exponent verified (`-order`).
    pub order: i32,
    /// Smallest `s`-cap among the checked coefficients.
    pub s_weight: i32,
    /// `(exponent, description)` of the first nonzero coefficient.
    pub first_failure: Option<(i32, String)>,
}

impl LambdaSeries {
    pub fn zero(low: i32) -> LambdaSeries {
        LambdaSeries { low, coeffs: BTreeMap::new() }
    }

    pub fn monomial(e: i32, c: ExactSeries) -> LambdaSeries {
        LambdaSeries { low: EXACT_LOW, coeffs: BTreeMap::from([(e, c)]) }
    }

    /// `s`-independent exact monomial `r lambda^e`.
    pub fn exact_monomial(e: i32, r: Rational) -> LambdaSeries {
        LambdaSeries::monomial(e, ExactSeries::constant(EXACT_CAP, Coeff::rational(r)))
    }

    pub fn scalar(c: ExactSeries) -> LambdaSeries {
        LambdaSeries::monomial(0, c)
    }

    pub fn from_coeffs(low: i32, it: impl IntoIterator<Item = (i32, ExactSeries)>) -> LambdaSeries {
        let mut s = LambdaSeries::zero(low);
        for (e, c) in it {
            if e >= low {
                s.add_coeff(e, c);
            }
        }
        s
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn top(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, e: i32) -> Option<&ExactSeries> {
        self.coeffs.get(&e)
    }

    pub fn coeffs(&self) -> &BTreeMap<i32, ExactSeries> {
        &self.coeffs
    }

    fn add_coeff(&mut self, e: i32, c: ExactSeries) {
        match self.coeffs.get_mut(&e) {
            Some(old) => *old = old.add(&c),
            None => {
                self.coeffs.insert(e, c);
            }
        }
    }

    /// Forget exponents below `low`.
    pub fn truncate_low(&self, low: i32) -> LambdaSeries {
        let low = low.max(self.low);
        LambdaSeries { low, coeffs: self.coeffs.range(low..).map(|(e, c)| (*e, c.clone())).collect() }
    }

    pub fn add(&self, o: &LambdaSeries) -> LambdaSeries {
        let low = self.low.max(o.low);
        let mut out = self.truncate_low(low);
        for (e, c) in o.coeffs.range(low..) {
            out.add_coeff(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> LambdaSeries {
        self.map(|c| c.neg())
    }

    pub fn sub(&self, o: &LambdaSeries) -> LambdaSeries {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rational) -> LambdaSeries {
        self.map(|c| c.scale(r))
    }

    /// Apply an `s`-linear map to every coefficient (e.g. `d/ds_1`).
    pub fn map(&self, f: impl Fn(&ExactSeries) -> ExactSeries) -> LambdaSeries {
        LambdaSeries { low: self.low, coeffs: self.coeffs.iter().map(|(e, c)| (*e, f(c))).collect() }
    }

    pub fn mul_series(&self, s: &ExactSeries) -> Result<LambdaSeries> {
        let mut coeffs = BTreeMap::new();
        for (e, c) in &self.coeffs {
            coeffs.insert(*e, c.mul(s)?);
        }
        Ok(LambdaSeries { low: self.low, coeffs })
    }

    pub fn mul(&self, o: &LambdaSeries) -> Result<LambdaSeries> {
        let (Some(ta), Some(tb)) = (self.top(), o.top()) else {
            return Ok(LambdaSeries::zero(self.low.max(o.low)));
        };
        let low = (self.low.saturating_add(tb)).max(o.low.saturating_add(ta)).max(EXACT_LOW);
        let mut out = LambdaSeries::zero(low);
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in o.coeffs.range(low.saturating_sub(*ea)..) {
                out.add_coeff(ea + eb, ca.mul(cb)?);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<LambdaSeries> {
        let mut acc = LambdaSeries::exact_monomial(0, Rational::one());
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn d_lambda(&self) -> LambdaSeries {
        let mut out = LambdaSeries::zero(self.low.saturating_sub(1).max(EXACT_LOW));
        for (e, c) in &self.coeffs {
            if *e != 0 {
                out.add_coeff(e - 1, c.scale(&int(*e as i64)));
            }
        }
        out
    }

    /// The loop operator `sum_{k>=1} lambda^{-k-1} d/ds_k`; exponents below `floor` are dropped.
    pub fn nabla(&self, floor: i32) -> LambdaSeries {
        let low = self.low.saturating_sub(2).max(floor);
        let mut out = LambdaSeries::zero(low);
        for (e, c) in &self.coeffs {
            let mut k = 1;
            while e - k - 1 >= low {
                let d = if k as usize > MAX_VARS || k > c.cap() {
                    ExactSeries::zero(c.cap() - k)
                } else {
                    c.partial_s(k as usize)
                };
                out.add_coeff(e - k - 1, d);
                k += 1;
            }
        }
        out
    }

    /// Check that all coefficients of exponent `>= -order` vanish.
    pub fn check_zero(&self, order: i32) -> ZeroCheck {
        let mut s_weight = i32::MAX;
        let mut first_failure = None;
        if self.low > -order {
            first_failure = Some((self.low - 1, format!("coefficients below lambda^{} are not determined", self.low)));
        }
        for (e, c) in self.coeffs.range(-order..).rev() {
            s_weight = s_weight.min(c.cap());
            if first_failure.is_none() && !c.is_zero() {
                let (m, v) = c.terms().iter().next().map(|(m, v)| (*m, v.clone())).unwrap();
                first_failure = Some((*e, format!("{} * {v}", crate::exact::series::format_mono(m))));
            }
        }
        ZeroCheck { order: -self.low.max(-order), s_weight, first_failure }
    }
}

/// `lambda - phi`.
pub fn lambda_minus(phi: &ExactSeries) -> LambdaSeries {
    LambdaSeries::exact_monomial(1, Rational::one()).add(&LambdaSeries::monomial(0, phi.neg()))
}

/// Coefficients `c_n` of `1/sqrt(D) = sum c_n lambda^{-n-1}` for `D = (lambda - phi)^2 - 4 rho`.
fn inv_sqrt_coeffs(phi: &ExactSeries, rho: &ExactSeries, n_max: usize) -> Result<Vec<ExactSeries>> {
    let beta = phi.mul(phi)?.sub(&rho.scale(&int(4)));
    let mut c = vec![ExactSeries::one(EXACT_CAP), phi.clone()];
    for n in 1..n_max {
        let a = phi.mul(&c[n])?.scale(&int(2 * n as i64 + 1));
        let b = beta.mul(&c[n - 1])?.scale(&int(n as i64));
        c.push(a.sub(&b).scale(&rat(1, n as i64 + 1)));
    }
    c.truncate(n_max + 1);
    Ok(c)
}

/// `1/sqrt(D)`, branch `~ 1/lambda`, known down to `lambda^low`.
pub fn inv_sqrt_d(phi: &ExactSeries, rho: &ExactSeries, low: i32) -> Result<LambdaSeries> {
    let n_max = (-low - 1).max(0) as usize;
    let c = inv_sqrt_coeffs(phi, rho, n_max)?;
    Ok(LambdaSeries::from_coeffs(low, c.into_iter().enumerate().map(|(n, s)| (-(n as i32) - 1, s))))
}

/// `sqrt(D) = D / sqrt(D)`, known down to `lambda^low`.
pub fn sqrt_d(phi: &ExactSeries, rho: &ExactSeries, low: i32) -> Result<LambdaSeries> {
    let s = inv_sqrt_d(phi, rho, low - 2)?;
    Ok(discriminant(phi, rho)?.mul(&s)?.truncate_low(low))
}

/// `D = (lambda - phi)^2 - 4 rho`.
pub fn discriminant(phi: &ExactSeries, rho: &ExactSeries) -> Result<LambdaSeries> {
    Ok(lambda_minus(phi).pow(2)?.sub(&LambdaSeries::monomial(0, rho.scale(&int(4)))))
}

/// `sqrt(1 + t)` for a series `t` with negative top exponent, by the binomial series.
pub fn sqrt_one_plus(t: &LambdaSeries, low: i32) -> Result<LambdaSeries> {
    let top = t.top().unwrap_or(-1);
    assert!(top < 0, "sqrt_one_plus needs a series vanishing at infinity");
    let half = rat(1, 2);
    let mut out = LambdaSeries::exact_monomial(0, Rational::one());
    let mut p = LambdaSeries::exact_monomial(0, Rational::one());
    let mut k = 1;
    while top * k >= low {
        p = p.mul(t)?.truncate_low(low);
        out = out.add(&p.scale(&binomial_q(&half, k as u64)));
        k += 1;
    }
    Ok(out.truncate_low(low))
}

impl Default for LambdaSeries {
    fn default() -> Self {
        LambdaSeries::zero(EXACT_LOW)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_series() -> ExactSeries {
        ExactSeries::constant(8, Coeff::x_pow(1, rat(1, 1)))
    }

    #[test]
    fn square_of_inverse_root_times_d_is_one() {
        let phi = ExactSeries::var(8, 1);
        let rho = x_series();
        let s = inv_sqrt_d(&phi, &rho, -12).unwrap();
        let d = discriminant(&phi, &rho).unwrap();
        let one = s.mul(&s).unwrap().mul(&d).unwrap();
        let res = one.sub(&LambdaSeries::exact_monomial(0, rat(1, 1)));
        let chk = res.check_zero(10);
        assert!(chk.first_failure.is_none(), "{chk:?}");
    }

    #[test]
    fn catalan_moments_at_zero() {
        // 1/sqrt(lambda^2 - 4x) = sum C(2m,m) x^m lambda^{-2m-1}
        let s = inv_sqrt_d(&ExactSeries::zero(4), &x_series(), -9).unwrap();
        let want = [1, 2, 6, 20, 70];
        for (m, w) in want.iter().enumerate() {
            let c = s.coeff(-(2 * m as i32) - 1).unwrap().constant_term();
            assert_eq!(c, Coeff::x_pow(m as i32, int(*w)));
        }
    }

    #[test]
    fn nabla_lowers_known_range() {
        let f = ExactSeries::var(6, 2);
        let n = LambdaSeries::scalar(f).nabla(-8);
        assert_eq!(n.low(), -8);
        assert_eq!(n.coeff(-3).unwrap().constant_term(), Coeff::one());
    }
}
