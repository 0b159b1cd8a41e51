//! Graded truncated power series in `s_1, s_2, ...` with [`Coeff`] coefficients.
//!
//! `s_j` has weight `j`. A series with cap `W` stores (and is exact on) every monomial of weight
//! `<= W`. Derivatives in `s_k` lower the cap by `k`; a negative cap means no coefficient is known.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::coeff::{Atom, Coeff};
use super::rational::{format_rational, int, parse_rational, Rational};
use crate::error::{Error, Result};

/// Largest variable index a monomial can carry.
pub const MAX_VARS: usize = 21;
const BITS: u32 = 6;
const MASK: u128 = (1 << BITS) - 1;

/// Packed exponent vector: exponent of `s_j` in bits `6(j-1)..6j`.
pub type Mono = u128;

pub fn var_mono(j: usize) -> Mono {
    assert!((1..=MAX_VARS).contains(&j), "variable s_{j} out of range");
    1u128 << (BITS * (j as u32 - 1))
}

pub fn mono_exp(m: Mono, j: usize) -> u32 {
    ((m >> (BITS * (j as u32 - 1))) & MASK) as u32
}

pub fn mono_weight(m: Mono) -> i32 {
    let mut w = 0;
    let mut r = m;
    let mut j = 1;
    while r != 0 {
        w += j * (r & MASK) as i32;
        r >>= BITS;
        j += 1;
    }
    w
}

/// Exponent vector `[e_1, e_2, ...]` without trailing zeros.
pub fn mono_vec(m: Mono) -> Vec<u32> {
    let mut v = Vec::new();
    let mut r = m;
    while r != 0 {
        v.push((r & MASK) as u32);
        r >>= BITS;
    }
    v
}

pub fn mono_from(exps: &[u32]) -> Result<Mono> {
    if exps.len() > MAX_VARS && exps[MAX_VARS..].iter().any(|&e| e != 0) {
        return Err(Error::Config(format!("monomial uses more than {MAX_VARS} variables")));
    }
    let mut m = 0u128;
    for (i, &e) in exps.iter().enumerate().take(MAX_VARS) {
        if e as u128 > MASK {
            return Err(Error::Config(format!("exponent {e} too large")));
        }
        m |= (e as u128) << (BITS * i as u32);
    }
    Ok(m)
}

/// Product of factorials of the exponents.
pub fn mono_factorial(m: Mono) -> Rational {
    let mut acc = Rational::one();
    for e in mono_vec(m) {
        for k in 2..=e {
            acc *= int(k as i64);
        }
    }
    acc
}

/// All monomials of weight exactly `w` (partitions of `w`).
pub fn monomials_of_weight(w: i32) -> Vec<Mono> {
    fn rec(rem: i32, max_part: i32, acc: Mono, out: &mut Vec<Mono>) {
        if rem == 0 {
            out.push(acc);
            return;
        }
        for p in (1..=max_part.min(rem)).rev() {
            rec(rem - p, p, acc + var_mono(p as usize), out);
        }
    }
    let mut out = Vec::new();
    if w >= 0 {
        rec(w, w, 0, &mut out);
    }
    out.sort_unstable();
    out
}

type Terms = BTreeMap<Mono, Coeff>;

fn add_into(t: &mut Terms, m: Mono, c: Coeff) {
    if c.is_zero() {
        return;
    }
    match t.get_mut(&m) {
        Some(old) => {
            old.add_assign(&c);
            if old.is_zero() {
                t.remove(&m);
            }
        }
        None => {
            t.insert(m, c);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSeries {
    cap: i32,
    terms: Terms,
}

impl ExactSeries {
    pub fn zero(cap: i32) -> ExactSeries {
        ExactSeries { cap, terms: Terms::new() }
    }

    pub fn constant(cap: i32, c: Coeff) -> ExactSeries {
        ExactSeries::monomial(cap, 0, c)
    }

    pub fn one(cap: i32) -> ExactSeries {
        ExactSeries::constant(cap, Coeff::one())
    }

    /// `c * s^m`, or zero if the monomial lies above the cap.
    pub fn monomial(cap: i32, m: Mono, c: Coeff) -> ExactSeries {
        let mut s = ExactSeries::zero(cap);
        if mono_weight(m) <= cap {
            add_into(&mut s.terms, m, c);
        }
        s
    }

    /// The variable `s_j`.
    pub fn var(cap: i32, j: usize) -> ExactSeries {
        ExactSeries::monomial(cap, var_mono(j), Coeff::one())
    }

    pub fn from_terms(cap: i32, terms: impl IntoIterator<Item = (Mono, Coeff)>) -> ExactSeries {
        let mut s = ExactSeries::zero(cap);
        for (m, c) in terms {
            if mono_weight(m) <= cap {
                add_into(&mut s.terms, m, c);
            }
        }
        s
    }

    pub fn cap(&self) -> i32 {
        self.cap
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Coeff> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Mono) -> Coeff {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(0)
    }

    pub fn add_term(&mut self, m: Mono, c: Coeff) {
        if mono_weight(m) <= self.cap {
            add_into(&mut self.terms, m, c);
        }
    }

    /// Keep only terms of weight `<= cap`, and lower the cap to it.
    pub fn truncate(&self, cap: i32) -> ExactSeries {
        let cap = cap.min(self.cap);
        ExactSeries {
            cap,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| mono_weight(**m) <= cap)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Homogeneous part of weight exactly `w`, keeping the cap.
    pub fn weight_part(&self, w: i32) -> ExactSeries {
        ExactSeries {
            cap: self.cap,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| mono_weight(**m) == w)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, o: &ExactSeries) -> ExactSeries {
        let mut out = self.truncate(o.cap);
        for (m, c) in &o.terms {
            if mono_weight(*m) <= out.cap {
                add_into(&mut out.terms, *m, c.clone());
            }
        }
        out
    }

    pub fn sub(&self, o: &ExactSeries) -> ExactSeries {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> ExactSeries {
        ExactSeries { cap: self.cap, terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn scale(&self, r: &Rational) -> ExactSeries {
        if r.is_zero() {
            return ExactSeries::zero(self.cap);
        }
        ExactSeries {
            cap: self.cap,
            terms: self.terms.iter().map(|(m, c)| (*m, c.scale(r))).collect(),
        }
    }

    /// Multiply every coefficient by `x^dx eps^de`.
    pub fn shift(&self, dx: i32, de: i32) -> ExactSeries {
        ExactSeries {
            cap: self.cap,
            terms: self.terms.iter().map(|(m, c)| (*m, c.shift(dx, de))).collect(),
        }
    }

    pub fn mul_coeff(&self, k: &Coeff) -> Result<ExactSeries> {
        let mut out = ExactSeries::zero(self.cap);
        for (m, c) in &self.terms {
            add_into(&mut out.terms, *m, c.try_mul(k)?);
        }
        Ok(out)
    }

    /// Multiply by `c s^m`; the result is exact up to `cap + weight(m)`.
    pub fn mul_monomial(&self, m: Mono, c: &Coeff) -> Result<ExactSeries> {
        let cap = self.cap + mono_weight(m);
        let mut out = ExactSeries::zero(cap);
        for (n, d) in &self.terms {
            add_into(&mut out.terms, n + m, d.try_mul(c)?);
        }
        Ok(out)
    }

    /// Product truncated to the smaller of the two caps.
    pub fn mul(&self, o: &ExactSeries) -> Result<ExactSeries> {
        let cap = self.cap.min(o.cap);
        Ok(ExactSeries { cap, terms: mul_terms(&self.terms, &o.terms, cap)? })
    }

    /// Product of two series with equal caps.
    pub fn try_mul(&self, o: &ExactSeries) -> Result<ExactSeries> {
        if self.cap != o.cap {
            return Err(Error::Config(format!(
                "series caps differ: {} vs {}",
                self.cap, o.cap
            )));
        }
        self.mul(o)
    }

    pub fn pow(&self, n: u32) -> Result<ExactSeries> {
        let mut acc = ExactSeries::one(self.cap);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `d/ds_k`; the cap drops by `k`.
    pub fn partial_s(&self, k: usize) -> ExactSeries {
        let cap = self.cap - k as i32;
        let v = var_mono(k);
        let mut out = ExactSeries::zero(cap);
        for (m, c) in &self.terms {
            let e = mono_exp(*m, k);
            if e > 0 && mono_weight(*m) - k as i32 <= cap {
                add_into(&mut out.terms, m - v, c.scale(&int(e as i64)));
            }
        }
        out
    }

    pub fn partial_x(&self) -> ExactSeries {
        let mut out = ExactSeries::zero(self.cap);
        for (m, c) in &self.terms {
            add_into(&mut out.terms, *m, c.d_x());
        }
        out
    }

    /// `x d/dx`.
    pub fn x_dx(&self) -> ExactSeries {
        self.partial_x().shift(1, 0)
    }

    /// `eps d/deps` (eps is a Laurent exponent).
    pub fn eps_deps(&self) -> ExactSeries {
        let mut out = ExactSeries::zero(self.cap);
        for (m, c) in &self.terms {
            let t: Vec<(Atom, Rational)> =
                c.terms().iter().map(|(a, r)| (*a, r * int(a.eps as i64))).collect();
            add_into(&mut out.terms, *m, Coeff::from_terms(t));
        }
        out
    }

    /// Terms carrying `eps^e`, returned with the eps power removed.
    pub fn eps_coefficient(&self, e: i32) -> ExactSeries {
        let mut out = ExactSeries::zero(self.cap);
        for (m, c) in &self.terms {
            add_into(&mut out.terms, *m, c.eps_coefficient(e));
        }
        out
    }

    /// Genus-`g` part of a free energy: the coefficient of `eps^(2g-2)`.
    pub fn genus_part(&self, g: u32) -> ExactSeries {
        self.eps_coefficient(2 * g as i32 - 2)
    }

    pub fn has_transcendental(&self) -> bool {
        self.terms.values().any(|c| c.has_transcendental())
    }

    /// Drop the constant term.
    pub fn positive_part(&self) -> ExactSeries {
        let mut out = self.clone();
        out.terms.remove(&0);
        out
    }

    fn graded(&self) -> Vec<Terms> {
        let mut parts = vec![Terms::new(); (self.cap.max(-1) + 1) as usize];
        for (m, c) in &self.terms {
            parts[mono_weight(*m) as usize].insert(*m, c.clone());
        }
        parts
    }

    fn from_graded(cap: i32, parts: Vec<Terms>) -> ExactSeries {
        let mut terms = Terms::new();
        for p in parts {
            terms.extend(p);
        }
        ExactSeries { cap, terms }
    }

    /// `exp` of a series with zero constant term.
    pub fn exp(&self) -> Result<ExactSeries> {
        if !self.constant_term().is_zero() {
            return Err(Error::Rejected(format!(
                "exp of a series with nonzero constant term {}",
                self.constant_term()
            )));
        }
        if self.cap < 0 {
            return Ok(ExactSeries::zero(self.cap));
        }
        // With D = sum_j j s_j d/ds_j: D exp(a) = exp(a) D a, graded piece by piece.
        let a = self.graded();
        let mut e: Vec<Terms> = Vec::with_capacity(a.len());
        e.push(Terms::from([(0, Coeff::one())]));
        for w in 1..a.len() {
            let mut acc = Terms::new();
            for k in 1..=w {
                if a[k].is_empty() || e[w - k].is_empty() {
                    continue;
                }
                let p = mul_terms(&a[k], &e[w - k], i32::MAX)?;
                let kr = int(k as i64);
                for (m, c) in p {
                    add_into(&mut acc, m, c.scale(&kr));
                }
            }
            let inv = Rational::new(1.into(), (w as i64).into());
            e.push(acc.into_iter().map(|(m, c)| (m, c.scale(&inv))).collect());
        }
        Ok(ExactSeries::from_graded(self.cap, e))
    }

    fn unit_constant(&self, what: &str) -> Result<(Atom, Rational)> {
        let c0 = self.constant_term();
        match c0.as_single() {
            Some((a, r)) if !a.is_transcendental() => Ok((a, r.clone())),
            _ => Err(Error::Rejected(format!(
                "{what} needs a single-monomial constant term, got {c0}"
            ))),
        }
    }

    /// Inverse of a series whose constant term is a single monomial `r x^a eps^b`.
    pub fn inverse(&self) -> Result<ExactSeries> {
        let (a0, r0) = self.unit_constant("inverse")?;
        if self.cap < 0 {
            return Ok(ExactSeries::zero(self.cap));
        }
        let inv0 = Coeff::term(Atom::new(-a0.x, -a0.eps), r0.recip());
        let a = self.graded();
        let mut out: Vec<Terms> = Vec::with_capacity(a.len());
        out.push(Terms::from([(0, inv0.clone())]));
        for w in 1..a.len() {
            let mut acc = Terms::new();
            for k in 1..=w {
                if a[k].is_empty() || out[w - k].is_empty() {
                    continue;
                }
                for (m, c) in mul_terms(&a[k], &out[w - k], i32::MAX)? {
                    add_into(&mut acc, m, c);
                }
            }
            let mut next = Terms::new();
            for (m, c) in acc {
                add_into(&mut next, m, c.try_mul(&inv0)?.neg());
            }
            out.push(next);
        }
        Ok(ExactSeries::from_graded(self.cap, out))
    }

    /// `log` of a series whose constant term is exactly `x^e`; the result is `e log x + ...`.
    pub fn log(&self) -> Result<ExactSeries> {
        let (a0, r0) = self.unit_constant("log")?;
        if !r0.is_one() || a0.eps != 0 {
            return Err(Error::Rejected(format!(
                "log of constant term {} is not representable",
                self.constant_term()
            )));
        }
        if self.cap < 0 {
            return Ok(ExactSeries::zero(self.cap));
        }
        let inv0 = Coeff::x_pow(-a0.x, Rational::one());
        let a = self.graded();
        // D a = a D L, solved for the weight-w piece of L.
        let mut l: Vec<Terms> = Vec::with_capacity(a.len());
        let mut l0 = Terms::new();
        add_into(&mut l0, 0, Coeff::log_x().scale(&int(a0.x as i64)));
        l.push(l0);
        for w in 1..a.len() {
            let mut acc = Terms::new();
            let wr = int(w as i64);
            for (m, c) in &a[w] {
                add_into(&mut acc, *m, c.scale(&wr));
            }
            for k in 1..w {
                if a[k].is_empty() || l[w - k].is_empty() {
                    continue;
                }
                let f = int((w - k) as i64);
                for (m, c) in mul_terms(&a[k], &l[w - k], i32::MAX)? {
                    add_into(&mut acc, m, c.scale(&f).neg());
                }
            }
            let winv = Rational::new(1.into(), (w as i64).into());
            let mut next = Terms::new();
            for (m, c) in acc {
                add_into(&mut next, m, c.try_mul(&inv0)?.scale(&winv));
            }
            l.push(next);
        }
        Ok(ExactSeries::from_graded(self.cap, l))
    }

    /// Compare all coefficients of weight `<= w`; returns the first differing monomial.
    pub fn first_difference(&self, o: &ExactSeries, w: i32) -> Option<(Mono, Coeff, Coeff)> {
        let d = self.truncate(w).sub(&o.truncate(w));
        d.terms.iter().next().map(|(m, _)| (*m, self.coeff(*m), o.coeff(*m)))
    }

    pub fn eq_to_weight(&self, o: &ExactSeries, w: i32) -> bool {
        self.first_difference(o, w).is_none()
    }

    /// Canonical JSON: list of terms sorted by exponent vector, then atom.
    pub fn to_json(&self) -> Value {
        let width = self.cap.clamp(0, MAX_VARS as i32) as usize;
        let mut rows: Vec<(Vec<u32>, Atom, Rational)> = Vec::new();
        for (m, c) in &self.terms {
            let mut v = mono_vec(*m);
            v.resize(width.max(v.len()), 0);
            for (a, r) in c.terms() {
                rows.push((v.clone(), *a, r.clone()));
            }
        }
        rows.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        Value::Array(
            rows.into_iter()
                .map(|(s, a, r)| {
                    json!({"s": s, "x": a.x, "eps": a.eps, "logx": a.logx, "zeta": a.zeta,
                           "val": format_rational(&r)})
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value, cap: i32) -> Result<ExactSeries> {
        let bad = |what: &str| Error::Parse(format!("series JSON: {what}"));
        let arr = v.as_array().ok_or_else(|| bad("expected a list"))?;
        let mut out = ExactSeries::zero(cap);
        for row in arr {
            let s: Vec<u32> = row["s"]
                .as_array()
                .ok_or_else(|| bad("missing s"))?
                .iter()
                .map(|e| e.as_u64().map(|e| e as u32).ok_or_else(|| bad("bad exponent")))
                .collect::<Result<_>>()?;
            let geti = |k: &str| row[k].as_i64().ok_or_else(|| bad(k));
            let atom = Atom {
                x: geti("x")? as i32,
                eps: geti("eps")? as i32,
                logx: geti("logx")? as u8,
                zeta: geti("zeta")? as u8,
            };
            if atom.logx > 1 || atom.zeta > 1 {
                return Err(bad("atom degree above 1"));
            }
            let val = parse_rational(row["val"].as_str().ok_or_else(|| bad("val"))?)?;
            let m = mono_from(&s)?;
            if mono_weight(m) > cap {
                return Err(bad("term above weight cap"));
            }
            add_into(&mut out.terms, m, Coeff::term(atom, val));
        }
        Ok(out)
    }
}

fn mul_terms(a: &Terms, b: &Terms, cap: i32) -> Result<Terms> {
    if a.is_empty() || b.is_empty() {
        return Ok(Terms::new());
    }
    let mut bw: Vec<(Mono, i32, &Coeff)> = b.iter().map(|(m, c)| (*m, mono_weight(*m), c)).collect();
    bw.sort_by_key(|t| t.1);
    let mut acc: HashMap<Mono, Coeff> = HashMap::new();
    for (ma, ca) in a {
        let wa = mono_weight(*ma);
        for (mb, wb, cb) in &bw {
            if wa + wb > cap {
                break;
            }
            let p = ca.try_mul(cb)?;
            acc.entry(ma + mb).or_default().add_assign(&p);
        }
    }
    Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

pub fn format_mono(m: Mono) -> String {
    if m == 0 {
        return "1".into();
    }
    let mut parts = Vec::new();
    for (i, e) in mono_vec(m).into_iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("s{}", i + 1)),
            _ => parts.push(format!("s{}^{}", i + 1, e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for ExactSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O(w>{})", self.cap);
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{}", format_mono(*m))?;
        }
        write!(f, " + O(w>{})", self.cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn x(e: i32) -> Coeff {
        Coeff::x_pow(e, Rational::one())
    }

    #[test]
    fn difference_of_squares() {
        let s1x = ExactSeries::monomial(3, var_mono(1), x(1));
        let a = ExactSeries::one(3).add(&s1x);
        let b = ExactSeries::one(3).sub(&s1x);
        let want = ExactSeries::one(3).sub(&ExactSeries::monomial(3, 2 * var_mono(1), x(2)));
        assert_eq!(a.try_mul(&b).unwrap(), want);
        assert_eq!(a.try_mul(&ExactSeries::one(3)).unwrap(), a);
    }

    #[test]
    fn truncation_drops_heavy_products() {
        let p = ExactSeries::var(4, 2).try_mul(&ExactSeries::var(4, 3)).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn mismatched_caps_rejected() {
        let e = ExactSeries::var(4, 1).try_mul(&ExactSeries::var(5, 1));
        assert!(matches!(e, Err(Error::Config(_))));
    }

    #[test]
    fn exp_of_s1() {
        let e = ExactSeries::var(3, 1).exp().unwrap();
        let s1 = var_mono(1);
        let want = ExactSeries::from_terms(
            3,
            [
                (0, Coeff::one()),
                (s1, Coeff::one()),
                (2 * s1, Coeff::rational(rat(1, 2))),
                (3 * s1, Coeff::rational(rat(1, 6))),
            ],
        );
        assert_eq!(e, want);
    }

    #[test]
    fn exp_of_s2_x2_over_eps2() {
        let s2 = var_mono(2);
        let a = ExactSeries::monomial(4, s2, Coeff::term(Atom::new(2, -2), Rational::one()));
        let e = a.exp().unwrap();
        let want = ExactSeries::from_terms(
            4,
            [
                (0, Coeff::one()),
                (s2, Coeff::term(Atom::new(2, -2), Rational::one())),
                (2 * s2, Coeff::term(Atom::new(4, -4), rat(1, 2))),
            ],
        );
        assert_eq!(e, want);
        assert_eq!(e.log().unwrap(), a);
    }

    #[test]
    fn exp_rejects_constant() {
        assert!(matches!(ExactSeries::one(2).exp(), Err(Error::Rejected(_))));
    }

    #[test]
    fn partials() {
        let c = ExactSeries::constant(2, Coeff::term(Atom { x: 2, logx: 1, ..Atom::ONE }, Rational::one()));
        let want = ExactSeries::constant(
            2,
            Coeff::from_terms(vec![
                (Atom { x: 1, logx: 1, ..Atom::ONE }, rat(2, 1)),
                (Atom::new(1, 0), rat(1, 1)),
            ]),
        );
        assert_eq!(c.partial_x(), want);

        let a = ExactSeries::monomial(3, 2 * var_mono(1), x(1));
        assert_eq!(a.partial_s(1), ExactSeries::monomial(2, var_mono(1), Coeff::x_pow(1, rat(2, 1))));

        let b = ExactSeries::monomial(4, var_mono(2), Coeff::term(Atom::new(3, -2), rat(2, 1)));
        assert_eq!(b.partial_s(2), ExactSeries::constant(2, Coeff::term(Atom::new(3, -2), rat(2, 1))));
    }

    #[test]
    fn log_of_x_times_unit() {
        let a = ExactSeries::constant(2, x(1)).add(&ExactSeries::var(2, 1));
        let l = a.log().unwrap();
        assert_eq!(l.constant_term(), Coeff::log_x());
        assert_eq!(l.coeff(var_mono(1)), x(-1));
        assert_eq!(l.coeff(2 * var_mono(1)), Coeff::x_pow(-2, rat(-1, 2)));
    }

    #[test]
    fn inverse_round_trip() {
        let a = ExactSeries::constant(5, Coeff::x_pow(1, rat(3, 1)))
            .add(&ExactSeries::var(5, 1))
            .add(&ExactSeries::monomial(5, var_mono(2), x(2)));
        let p = a.mul(&a.inverse().unwrap()).unwrap();
        assert_eq!(p, ExactSeries::one(5));
    }

    #[test]
    fn json_round_trip() {
        let a = ExactSeries::from_terms(
            4,
            [
                (var_mono(2), Coeff::term(Atom::new(2, -2), rat(1, 1))),
                (0, Coeff::log_x().add(&Coeff::zeta())),
                (var_mono(1) * 2, Coeff::x_pow(1, rat(-3, 7))),
            ],
        );
        let j = a.to_json();
        assert_eq!(ExactSeries::from_json(&j, 4).unwrap(), a);
        assert_eq!(j[0]["s"], json!([0, 0, 0, 0]));
    }

    #[test]
    fn partitions_counted() {
        let counts: Vec<usize> = (0..9).map(|w| monomials_of_weight(w).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
        assert!(monomials_of_weight(6).iter().all(|m| mono_weight(*m) == 6));
    }
}
