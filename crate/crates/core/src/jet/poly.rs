//! Polynomials over Q in `lambda`, `phi_0..phi_8`, `rho_0..rho_8`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::rational::{format_rational, int, Rational};

/// Highest jet index a variable can carry.
pub const JMAX: usize = 8;
const NJ: usize = JMAX + 1;
/// Number of variables: `lambda`, `phi_0..phi_JMAX`, `rho_0..rho_JMAX`.
pub const NV: usize = 1 + 2 * NJ;

pub type Exps = [u8; NV];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JetVar {
    Lambda,
    Phi(usize),
    Rho(usize),
}

impl JetVar {
    pub fn index(self) -> usize {
        match self {
            JetVar::Lambda => 0,
            JetVar::Phi(k) => 1 + k,
            JetVar::Rho(k) => 1 + NJ + k,
        }
    }

    pub fn from_index(i: usize) -> JetVar {
        match i {
            0 => JetVar::Lambda,
            i if i <= NJ => JetVar::Phi(i - 1),
            i => JetVar::Rho(i - 1 - NJ),
        }
    }

    /// Jet order `k` of `phi_k`/`rho_k`; `None` for `lambda`.
    pub fn order(self) -> Option<usize> {
        match self {
            JetVar::Lambda => None,
            JetVar::Phi(k) | JetVar::Rho(k) => Some(k),
        }
    }

    /// `phi_{k+1}` for `phi_k`; errors past [`JMAX`].
    pub fn shifted(self) -> Result<JetVar> {
        match self {
            JetVar::Lambda => Err(Error::Config("lambda has no jet shift".into())),
            JetVar::Phi(k) | JetVar::Rho(k) if k + 1 > JMAX => {
                Err(Error::InsufficientJetOrder { required: k + 1, have: JMAX })
            }
            JetVar::Phi(k) => Ok(JetVar::Phi(k + 1)),
            JetVar::Rho(k) => Ok(JetVar::Rho(k + 1)),
        }
    }

    pub fn name(self) -> String {
        match self {
            JetVar::Lambda => "lambda".into(),
            JetVar::Phi(0) => "phi".into(),
            JetVar::Rho(0) => "rho".into(),
            JetVar::Phi(k) => format!("phi{k}"),
            JetVar::Rho(k) => format!("rho{k}"),
        }
    }

    pub fn all() -> impl Iterator<Item = JetVar> {
        (0..NV).map(JetVar::from_index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JetPoly {
    terms: BTreeMap<Exps, Rational>,
}

fn add_into(t: &mut HashMap<Exps, Rational>, e: Exps, r: Rational) {
    match t.get_mut(&e) {
        Some(old) => *old += r,
        None => {
            t.insert(e, r);
        }
    }
}

fn collect(t: HashMap<Exps, Rational>) -> JetPoly {
    JetPoly { terms: t.into_iter().filter(|(_, r)| !r.is_zero()).collect() }
}

impl JetPoly {
    pub fn zero() -> JetPoly {
        JetPoly::default()
    }

    pub fn constant(r: Rational) -> JetPoly {
        let mut p = JetPoly::zero();
        if !r.is_zero() {
            p.terms.insert([0; NV], r);
        }
        p
    }

    pub fn one() -> JetPoly {
        JetPoly::constant(Rational::one())
    }

    pub fn var(v: JetVar) -> JetPoly {
        JetPoly::monomial(&[(v, 1)], Rational::one())
    }

    pub fn monomial(vars: &[(JetVar, u8)], r: Rational) -> JetPoly {
        let mut e = [0u8; NV];
        for (v, k) in vars {
            e[v.index()] += k;
        }
        let mut p = JetPoly::zero();
        if !r.is_zero() {
            p.terms.insert(e, r);
        }
        p
    }

    pub fn from_terms(t: impl IntoIterator<Item = (Exps, Rational)>) -> JetPoly {
        let mut h = HashMap::new();
        for (e, r) in t {
            add_into(&mut h, e, r);
        }
        collect(h)
    }

    pub fn terms(&self) -> &BTreeMap<Exps, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&[0; NV]).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, o: &JetPoly) -> JetPoly {
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut t = big.terms.clone();
        for (e, r) in &small.terms {
            match t.get_mut(e) {
                Some(old) => {
                    *old += r;
                    if old.is_zero() {
                        t.remove(e);
                    }
                }
                None => {
                    t.insert(*e, r.clone());
                }
            }
        }
        JetPoly { terms: t }
    }

    pub fn neg(&self) -> JetPoly {
        JetPoly { terms: self.terms.iter().map(|(e, r)| (*e, -r)).collect() }
    }

    pub fn sub(&self, o: &JetPoly) -> JetPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rational) -> JetPoly {
        if r.is_zero() {
            return JetPoly::zero();
        }
        JetPoly { terms: self.terms.iter().map(|(e, c)| (*e, c * r)).collect() }
    }

    pub fn mul(&self, o: &JetPoly) -> JetPoly {
        if self.is_zero() || o.is_zero() {
            return JetPoly::zero();
        }
        let mut h: HashMap<Exps, Rational> = HashMap::with_capacity(self.len() * o.len());
        for (ea, ra) in &self.terms {
            for (eb, rb) in &o.terms {
                let mut e = *ea;
                for i in 0..NV {
                    e[i] = e[i].checked_add(eb[i]).expect("jet exponent overflow");
                }
                add_into(&mut h, e, ra * rb);
            }
        }
        collect(h)
    }

    pub fn pow(&self, n: u32) -> JetPoly {
        let mut acc = JetPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn degree_in(&self, v: JetVar) -> u32 {
        let i = v.index();
        self.terms.keys().map(|e| e[i] as u32).max().unwrap_or(0)
    }

    /// Smallest exponent of `v` over all terms.
    pub fn min_degree_in(&self, v: JetVar) -> u32 {
        let i = v.index();
        self.terms.keys().map(|e| e[i] as u32).min().unwrap_or(0)
    }

    /// Highest jet order present (`None` if the polynomial involves no jet variable).
    pub fn max_jet(&self) -> Option<usize> {
        let mut best = None;
        for e in self.terms.keys() {
            for k in 0..NJ {
                if e[1 + k] > 0 || e[1 + NJ + k] > 0 {
                    best = best.max(Some(k));
                }
            }
        }
        best
    }

    pub fn partial(&self, v: JetVar) -> JetPoly {
        let i = v.index();
        let mut h = HashMap::new();
        for (e, r) in &self.terms {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                add_into(&mut h, f, r * int(e[i] as i64));
            }
        }
        collect(h)
    }

    /// Divide by `v^k`, assuming every term has `v`-degree at least `k`.
    pub fn div_var_pow(&self, v: JetVar, k: u8) -> JetPoly {
        let i = v.index();
        JetPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, r)| {
                    let mut f = *e;
                    f[i] -= k;
                    (f, r.clone())
                })
                .collect(),
        }
    }

    pub fn mul_var_pow(&self, v: JetVar, k: u8) -> JetPoly {
        let i = v.index();
        JetPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, r)| {
                    let mut f = *e;
                    f[i] += k;
                    (f, r.clone())
                })
                .collect(),
        }
    }

    /// Coefficient of `v^k` as a polynomial in the other variables.
    pub fn coefficient_of(&self, v: JetVar, k: u8) -> JetPoly {
        let i = v.index();
        JetPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[i] == k)
                .map(|(e, r)| {
                    let mut f = *e;
                    f[i] = 0;
                    (f, r.clone())
                })
                .collect(),
        }
    }

    /// Exact quotient by `g`, whose leading coefficient in `v` is a nonzero constant.
    /// Returns `None` when the remainder is nonzero.
    pub fn div_exact(&self, g: &JetPoly, v: JetVar) -> Option<JetPoly> {
        let dg = g.degree_in(v) as u8;
        let lc = g.coefficient_of(v, dg).as_constant().filter(|c| !c.is_zero())?;
        let inv = Rational::one() / lc;
        let mut rem = self.clone();
        let mut q = JetPoly::zero();
        loop {
            if rem.is_zero() {
                return Some(q);
            }
            let d = rem.degree_in(v) as u8;
            if d < dg {
                return None;
            }
            let lead = rem.coefficient_of(v, d).mul_var_pow(v, d - dg).scale(&inv);
            rem = rem.sub(&lead.mul(g));
            q = q.add(&lead);
        }
    }

    /// Apply `d` with `d(v) = images[v]` and the Leibniz rule.
    pub fn derive(&self, images: &[(JetVar, JetPoly)]) -> JetPoly {
        let mut out = JetPoly::zero();
        for (v, img) in images {
            if img.is_zero() {
                continue;
            }
            let p = self.partial(*v);
            if !p.is_zero() {
                out = out.add(&p.mul(img));
            }
        }
        out
    }

    pub fn eval(&self, point: &[Rational; NV]) -> Rational {
        let mut acc = Rational::zero();
        for (e, r) in &self.terms {
            let mut t = r.clone();
            for (i, k) in e.iter().enumerate() {
                if *k > 0 {
                    t *= num_traits::pow(point[i].clone(), *k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitute polynomials for variables.
    pub fn substitute(&self, images: &[(JetVar, JetPoly)]) -> JetPoly {
        let mut out = JetPoly::zero();
        let mut pows: HashMap<(usize, u8), JetPoly> = HashMap::new();
        for (e, r) in &self.terms {
            let mut t = JetPoly::constant(r.clone());
            let mut rest = *e;
            for (v, img) in images {
                let i = v.index();
                let k = e[i];
                if k > 0 {
                    rest[i] = 0;
                    let p = pows.entry((i, k)).or_insert_with(|| img.pow(k as u32)).clone();
                    t = t.mul(&p);
                }
            }
            t = t.mul(&JetPoly::from_terms([(rest, Rational::one())]));
            out = out.add(&t);
        }
        out
    }
}

pub fn format_exps(e: &Exps) -> String {
    let mut parts = Vec::new();
    for (i, k) in e.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(JetVar::from_index(i).name()),
            _ => parts.push(format!("{}^{k}", JetVar::from_index(i).name())),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, r)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*{}", format_rational(r), format_exps(e))?;
        }
        Ok(())
    }
}

/// `D = (lambda - phi)^2 - 4 rho`.
pub fn disc_poly() -> JetPoly {
    let l = JetPoly::var(JetVar::Lambda).sub(&JetPoly::var(JetVar::Phi(0)));
    l.mul(&l).sub(&JetPoly::var(JetVar::Rho(0)).scale(&int(4)))
}

/// `Q = rho phi_1^2 - rho_1^2`.
pub fn q_poly() -> JetPoly {
    JetPoly::monomial(&[(JetVar::Rho(0), 1), (JetVar::Phi(1), 2)], Rational::one())
        .sub(&JetPoly::monomial(&[(JetVar::Rho(1), 2)], Rational::one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_division() {
        let d = disc_poly();
        let p = JetPoly::var(JetVar::Phi(3)).add(&JetPoly::var(JetVar::Lambda));
        let prod = p.mul(&d);
        assert_eq!(prod.div_exact(&d, JetVar::Lambda), Some(p.clone()));
        assert_eq!(prod.add(&JetPoly::one()).div_exact(&d, JetVar::Lambda), None);
        let q = q_poly();
        assert_eq!(q.mul(&p).div_exact(&q, JetVar::Rho(1)), Some(p));
    }

    #[test]
    fn var_indexing_round_trips() {
        for v in JetVar::all() {
            assert_eq!(JetVar::from_index(v.index()), v);
        }
        assert!(JetVar::Phi(JMAX).shifted().is_err());
    }
}
