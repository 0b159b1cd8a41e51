//! Polynomials in `v`, `rho^(+-1)` and a logarithmic slot `u`.
//!
//! Two coordinate charts share the representation:
//! - [`Chart::P1`]: flat coordinates `(v, u)` with `rho = e^u`, so the `u` slot is the coordinate itself.
//! - [`Chart::Nls`]: flat coordinates `(phi, rho)` with the `u` slot holding `log rho`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::rational::{format_rational, int, Rational};
use super::series::ExactSeries;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    P1,
    Nls,
}

/// Exponents `(v, rho, u)`.
pub type Key = (u32, i32, u32);

#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct PolyVU {
    terms: BTreeMap<Key, Rational>,
}

impl PolyVU {
    pub fn zero() -> PolyVU {
        PolyVU::default()
    }

    pub fn constant(r: Rational) -> PolyVU {
        PolyVU::term(0, 0, 0, r)
    }

    pub fn one() -> PolyVU {
        PolyVU::constant(Rational::one())
    }

    pub fn term(v: u32, rho: i32, u: u32, r: Rational) -> PolyVU {
        let mut p = PolyVU::zero();
        p.add_term((v, rho, u), r);
        p
    }

    pub fn from_terms(t: impl IntoIterator<Item = (Key, Rational)>) -> PolyVU {
        let mut p = PolyVU::zero();
        for (k, r) in t {
            p.add_term(k, r);
        }
        p
    }

    pub fn add_term(&mut self, k: Key, r: Rational) {
        if r.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(Rational::zero);
        *e += r;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Key, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, k: Key) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &PolyVU) -> PolyVU {
        let mut p = self.clone();
        for (k, r) in &o.terms {
            p.add_term(*k, r.clone());
        }
        p
    }

    pub fn sub(&self, o: &PolyVU) -> PolyVU {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> PolyVU {
        PolyVU { terms: self.terms.iter().map(|(k, r)| (*k, -r)).collect() }
    }

    pub fn scale(&self, r: &Rational) -> PolyVU {
        if r.is_zero() {
            return PolyVU::zero();
        }
        PolyVU { terms: self.terms.iter().map(|(k, v)| (*k, v * r)).collect() }
    }

    pub fn mul(&self, o: &PolyVU) -> PolyVU {
        let mut p = PolyVU::zero();
        for (a, r) in &self.terms {
            for (b, s) in &o.terms {
                p.add_term((a.0 + b.0, a.1 + b.1, a.2 + b.2), r * s);
            }
        }
        p
    }

    pub fn pow(&self, n: u32) -> PolyVU {
        (0..n).fold(PolyVU::one(), |acc, _| acc.mul(self))
    }

    pub fn max_u(&self) -> u32 {
        self.terms.keys().map(|k| k.2).max().unwrap_or(0)
    }

    pub fn max_v(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    /// Derivative in the first flat coordinate (`v` or `phi`).
    pub fn d_v(&self) -> PolyVU {
        let mut p = PolyVU::zero();
        for ((a, b, c), r) in &self.terms {
            if *a > 0 {
                p.add_term((a - 1, *b, *c), r * int(*a as i64));
            }
        }
        p
    }

    /// Derivative in the second flat coordinate (`u` for P1, `rho` for NLS).
    pub fn d_second(&self, chart: Chart) -> PolyVU {
        let mut p = PolyVU::zero();
        for ((a, b, c), r) in &self.terms {
            let lower = match chart {
                Chart::P1 => 0,
                Chart::Nls => 1,
            };
            if *b != 0 {
                p.add_term((*a, b - lower, *c), r * int(*b as i64));
            }
            if *c > 0 {
                p.add_term((*a, b - lower, c - 1), r * int(*c as i64));
            }
        }
        p
    }

    pub fn d(&self, idx: usize, chart: Chart) -> PolyVU {
        match idx {
            1 => self.d_v(),
            2 => self.d_second(chart),
            _ => panic!("flat coordinate index must be 1 or 2"),
        }
    }

    /// Antiderivative in the first flat coordinate with zero integration constant.
    pub fn integrate_v(&self) -> PolyVU {
        let mut p = PolyVU::zero();
        for ((a, b, c), r) in &self.terms {
            p.add_term((a + 1, *b, *c), r / int(*a as i64 + 1));
        }
        p
    }

    /// Antiderivative in the second flat coordinate with zero integration constant.
    pub fn integrate_second(&self, chart: Chart) -> PolyVU {
        let mut p = PolyVU::zero();
        for (k, r) in &self.terms {
            p = p.add(&integrate_term(*k, r, chart));
        }
        p
    }

    /// Restriction to `v = 0`.
    pub fn at_v0(&self) -> PolyVU {
        PolyVU {
            terms: self.terms.iter().filter(|(k, _)| k.0 == 0).map(|(k, r)| (*k, r.clone())).collect(),
        }
    }

    /// Evaluate at power series values of the coordinates. `u` is needed only if a term carries it.
    pub fn substitute(
        &self,
        v: &ExactSeries,
        rho: &ExactSeries,
        u: Option<&ExactSeries>,
    ) -> Result<ExactSeries> {
        let cap = v.cap().min(rho.cap()).min(u.map_or(i32::MAX, |s| s.cap()));
        let mut vp = vec![ExactSeries::one(cap)];
        let mut rp: BTreeMap<i32, ExactSeries> = BTreeMap::new();
        rp.insert(0, ExactSeries::one(cap));
        let mut up = vec![ExactSeries::one(cap)];
        let rho_inv = if self.terms.keys().any(|k| k.1 < 0) { Some(rho.inverse()?) } else { None };
        let mut out = ExactSeries::zero(cap);
        for ((a, b, c), r) in &self.terms {
            while vp.len() <= *a as usize {
                let n = vp.last().unwrap().mul(v)?;
                vp.push(n);
            }
            if !rp.contains_key(b) {
                let step = if *b > 0 { rho.clone() } else { rho_inv.clone().unwrap() };
                let dir = b.signum();
                let mut e = dir;
                let mut cur = rp[&0].clone();
                while e.abs() <= b.abs() {
                    cur = match rp.get(&e) {
                        Some(s) => s.clone(),
                        None => {
                            let n = cur.mul(&step)?;
                            rp.insert(e, n.clone());
                            n
                        }
                    };
                    e += dir;
                }
            }
            if *c > 0 && u.is_none() {
                return Err(Error::Config("substitution needs a value for the log slot".into()));
            }
            while up.len() <= *c as usize {
                let n = up.last().unwrap().mul(u.unwrap())?;
                up.push(n);
            }
            let t = vp[*a as usize].mul(&rp[b])?.mul(&up[*c as usize])?;
            out = out.add(&t.scale(r));
        }
        Ok(out)
    }

    /// Canonical JSON: terms sorted by `(v, rho, u)`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|((a, b, c), r)| json!({"v": a, "rho": b, "u": c, "val": format_rational(r)}))
                .collect(),
        )
    }
}

fn integrate_term(k: Key, r: &Rational, chart: Chart) -> PolyVU {
    let (a, b, c) = k;
    match chart {
        Chart::P1 => {
            if b == 0 {
                return PolyVU::term(a, 0, c + 1, r / int(c as i64 + 1));
            }
            // int e^{bu} u^c = e^{bu} u^c / b - (c / b) int e^{bu} u^{c-1}
            let br = int(b as i64);
            let mut p = PolyVU::term(a, b, c, r / &br);
            if c > 0 {
                let rest = integrate_term((a, b, c - 1), &(r * int(c as i64) / &br), chart);
                p = p.sub(&rest);
            }
            p
        }
        Chart::Nls => {
            if b == -1 {
                return PolyVU::term(a, 0, c + 1, r / int(c as i64 + 1));
            }
            let b1 = int(b as i64 + 1);
            let mut p = PolyVU::term(a, b + 1, c, r / &b1);
            if c > 0 {
                let rest = integrate_term((a, b, c - 1), &(r * int(c as i64) / &b1), chart);
                p = p.sub(&rest);
            }
            p
        }
    }
}

impl fmt::Display for PolyVU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((a, b, c), r)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", format_rational(r))?;
            if *a > 0 {
                write!(f, "*v^{a}")?;
            }
            if *b != 0 {
                write!(f, "*rho^{b}")?;
            }
            if *c > 0 {
                write!(f, "*u^{c}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::coeff::Coeff;
    use crate::exact::rational::rat;

    #[test]
    fn integration_inverts_differentiation() {
        let p = PolyVU::from_terms([
            ((2, 1, 1), rat(3, 1)),
            ((0, 2, 0), rat(1, 2)),
            ((1, 0, 0), rat(-1, 1)),
        ]);
        for chart in [Chart::P1, Chart::Nls] {
            assert_eq!(p.integrate_second(chart).d_second(chart), p);
        }
        assert_eq!(p.integrate_v().d_v(), p);
        let q = PolyVU::term(0, -1, 1, rat(1, 1));
        assert_eq!(q.integrate_second(Chart::Nls).d_second(Chart::Nls), q);
    }

    #[test]
    fn nls_log_derivative() {
        let p = PolyVU::term(0, 2, 1, rat(1, 2));
        let want = PolyVU::from_terms([((0, 1, 1), rat(1, 1)), ((0, 1, 0), rat(1, 2))]);
        assert_eq!(p.d_second(Chart::Nls), want);
    }

    #[test]
    fn substitute_rho_inverse() {
        let rho = ExactSeries::constant(3, Coeff::x_pow(1, rat(1, 1))).add(&ExactSeries::var(3, 1));
        let v = ExactSeries::zero(3);
        let p = PolyVU::term(0, -1, 0, rat(1, 1)).add(&PolyVU::term(0, 1, 0, rat(1, 1)));
        let s = p.substitute(&v, &rho, None).unwrap();
        let want = rho.inverse().unwrap().add(&rho);
        assert_eq!(s, want);
    }
}
