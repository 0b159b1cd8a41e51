//! Coefficients in Q[x, 1/x, eps, 1/eps] extended by the atoms `log x` and `zeta'(-1)`.

use std::fmt;

use num_traits::{One, Zero};

use super::rational::{format_rational, int, Rational};
use crate::error::{Error, Result};

/// A monomial `x^x eps^eps (log x)^logx zeta'(-1)^zeta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Atom {
    pub x: i32,
    pub eps: i32,
    pub logx: u8,
    pub zeta: u8,
}

impl Atom {
    pub const ONE: Atom = Atom { x: 0, eps: 0, logx: 0, zeta: 0 };

    pub fn new(x: i32, eps: i32) -> Atom {
        Atom { x, eps, logx: 0, zeta: 0 }
    }

    pub fn is_transcendental(&self) -> bool {
        self.logx > 0 || self.zeta > 0
    }

    fn try_mul(&self, o: &Atom) -> Result<Atom> {
        let logx = self.logx + o.logx;
        let zeta = self.zeta + o.zeta;
        if logx > 1 || zeta > 1 {
            return Err(Error::AtomOverflow(format!(
                "log x degree {logx}, zeta'(-1) degree {zeta}"
            )));
        }
        Ok(Atom { x: self.x + o.x, eps: self.eps + o.eps, logx, zeta })
    }
}

/// Sparse sum of atoms with rational coefficients, sorted by atom, no zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Coeff {
    terms: Vec<(Atom, Rational)>,
}

impl Coeff {
    pub fn zero() -> Coeff {
        Coeff { terms: Vec::new() }
    }

    pub fn one() -> Coeff {
        Coeff::rational(Rational::one())
    }

    pub fn rational(r: Rational) -> Coeff {
        Coeff::term(Atom::ONE, r)
    }

    pub fn term(a: Atom, r: Rational) -> Coeff {
        if r.is_zero() {
            Coeff::zero()
        } else {
            Coeff { terms: vec![(a, r)] }
        }
    }

    /// `r x^e`.
    pub fn x_pow(e: i32, r: Rational) -> Coeff {
        Coeff::term(Atom::new(e, 0), r)
    }

    pub fn log_x() -> Coeff {
        Coeff::term(Atom { logx: 1, ..Atom::ONE }, Rational::one())
    }

    pub fn zeta() -> Coeff {
        Coeff::term(Atom { zeta: 1, ..Atom::ONE }, Rational::one())
    }

    /// Build from unsorted terms, merging duplicates and dropping zeros.
    pub fn from_terms(mut t: Vec<(Atom, Rational)>) -> Coeff {
        t.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Atom, Rational)> = Vec::with_capacity(t.len());
        for (a, r) in t {
            match out.last_mut() {
                Some((la, lr)) if *la == a => *lr += r,
                _ => out.push((a, r)),
            }
        }
        out.retain(|(_, r)| !r.is_zero());
        Coeff { terms: out }
    }

    pub fn terms(&self) -> &[(Atom, Rational)] {
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

    /// The single term, if there is exactly one.
    pub fn as_single(&self) -> Option<(Atom, &Rational)> {
        match self.terms.as_slice() {
            [(a, r)] => Some((*a, r)),
            _ => None,
        }
    }

    /// Coefficient of a given atom.
    pub fn get(&self, a: &Atom) -> Rational {
        match self.terms.binary_search_by(|(b, _)| b.cmp(a)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn add(&self, o: &Coeff) -> Coeff {
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = &a[i].1 + &b[j].1;
                    if !s.is_zero() {
                        out.push((a[i].0, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Coeff { terms: out }
    }

    pub fn add_assign(&mut self, o: &Coeff) {
        if o.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = o.clone();
            return;
        }
        *self = self.add(o);
    }

    pub fn neg(&self) -> Coeff {
        Coeff { terms: self.terms.iter().map(|(a, r)| (*a, -r)).collect() }
    }

    pub fn sub(&self, o: &Coeff) -> Coeff {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rational) -> Coeff {
        if r.is_zero() {
            return Coeff::zero();
        }
        Coeff { terms: self.terms.iter().map(|(a, v)| (*a, v * r)).collect() }
    }

    /// Multiply by `x^dx eps^de`.
    pub fn shift(&self, dx: i32, de: i32) -> Coeff {
        Coeff {
            terms: self
                .terms
                .iter()
                .map(|(a, r)| (Atom { x: a.x + dx, eps: a.eps + de, ..*a }, r.clone()))
                .collect(),
        }
    }

    pub fn try_mul(&self, o: &Coeff) -> Result<Coeff> {
        if self.is_zero() || o.is_zero() {
            return Ok(Coeff::zero());
        }
        if let Some((a, r)) = o.as_single() {
            if !a.is_transcendental() {
                return Ok(self.shift(a.x, a.eps).scale(r));
            }
        }
        if let Some((a, r)) = self.as_single() {
            if !a.is_transcendental() {
                return Ok(o.shift(a.x, a.eps).scale(r));
            }
        }
        let mut t = Vec::with_capacity(self.len() * o.len());
        for (a, r) in &self.terms {
            for (b, s) in &o.terms {
                t.push((a.try_mul(b)?, r * s));
            }
        }
        Ok(Coeff::from_terms(t))
    }

    /// `d/dx`, using `d/dx log x = 1/x`.
    pub fn d_x(&self) -> Coeff {
        let mut t = Vec::with_capacity(self.len() * 2);
        for (a, r) in &self.terms {
            if a.x != 0 {
                t.push((Atom { x: a.x - 1, ..*a }, r * int(a.x as i64)));
            }
            if a.logx == 1 {
                t.push((Atom { x: a.x - 1, logx: 0, ..*a }, r.clone()));
            }
        }
        Coeff::from_terms(t)
    }

    /// Part with the given eps exponent, returned with eps exponent 0.
    pub fn eps_coefficient(&self, e: i32) -> Coeff {
        Coeff {
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| a.eps == e)
                .map(|(a, r)| (Atom { eps: 0, ..*a }, r.clone()))
                .collect(),
        }
    }

    pub fn has_transcendental(&self) -> bool {
        self.terms.iter().any(|(a, _)| a.is_transcendental())
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (a, r)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", format_rational(r))?;
            if a.x != 0 {
                write!(f, "*x^{}", a.x)?;
            }
            if a.eps != 0 {
                write!(f, "*eps^{}", a.eps)?;
            }
            if a.logx == 1 {
                write!(f, "*log(x)")?;
            }
            if a.zeta == 1 {
                write!(f, "*zeta'(-1)")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn log_squared_overflows() {
        let l = Coeff::log_x();
        assert!(matches!(l.try_mul(&l), Err(Error::AtomOverflow(_))));
        assert!(l.try_mul(&Coeff::zeta()).is_ok());
    }

    #[test]
    fn derivative_of_x2_logx() {
        let c = Coeff::term(Atom { x: 2, logx: 1, ..Atom::ONE }, Rational::one());
        let want = Coeff::from_terms(vec![
            (Atom { x: 1, logx: 1, ..Atom::ONE }, rat(2, 1)),
            (Atom::new(1, 0), rat(1, 1)),
        ]);
        assert_eq!(c.d_x(), want);
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = Coeff::x_pow(3, rat(1, 2));
        assert!(a.sub(&a).is_zero());
    }
}
