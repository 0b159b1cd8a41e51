//! Virasoro operators: the GUE family in `(x, s)` and the NLS family in `t^{a,m}`.
//!
//! Operators are infinite sums; they are materialized up to a largest derivative index `n`, which is
//! exact on series whose cap is at most `n`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::rational::{factorial_q, harmonic, int, rat, Rational};
use crate::exact::series::{var_mono, Mono};
use crate::exact::{Atom, Coeff, ExactSeries};

/// `eps^eps x^x_pow s^mult (d/dx)^dx prod d/ds_j`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpTerm {
    pub eps: i32,
    pub x_pow: i32,
    pub mult: Mono,
    pub dx: u8,
    pub derivs: Vec<u8>,
}

/// Finite linear differential operator in canonical form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Operator {
    pub terms: BTreeMap<OpTerm, Rational>,
}

impl Operator {
    pub fn add_term(&mut self, mut t: OpTerm, c: Rational) {
        if c.is_zero() {
            return;
        }
        t.derivs.sort_unstable();
        let e = self.terms.entry(t.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn apply(&self, z: &ExactSeries) -> Result<ExactSeries> {
        let mut out: Option<ExactSeries> = None;
        for (t, c) in &self.terms {
            let mut r = z.clone();
            for &d in &t.derivs {
                r = r.partial_s(d as usize);
            }
            for _ in 0..t.dx {
                r = r.partial_x();
            }
            let r = r.mul_monomial(t.mult, &Coeff::term(Atom::new(t.x_pow, t.eps), c.clone()))?;
            out = Some(match out {
                None => r,
                Some(o) => o.add(&r),
            });
        }
        Ok(out.unwrap_or_else(|| ExactSeries::zero(z.cap())))
    }
}

fn s_term(eps: i32, x_pow: i32, mult: Mono, derivs: Vec<u8>) -> OpTerm {
    OpTerm { eps, x_pow, mult, dx: 0, derivs }
}

/// Push `j s~_j d_{target}` with `s~_j = s_j - delta_{j2}/2`.
fn push_shifted(op: &mut Operator, j: usize, target: usize, scale: &Rational) {
    let c = int(j as i64) * scale;
    op.add_term(s_term(0, 0, var_mono(j), vec![target as u8]), c.clone());
    if j == 2 {
        op.add_term(s_term(0, 0, 0, vec![target as u8]), -c * rat(1, 2));
    }
}

/// `L_k^GUE` with derivative indices `<= n`.
pub fn gue_virasoro(k: i32, n: usize) -> Result<Operator> {
    if k < -1 {
        return Err(Error::Config(format!("Virasoro index {k} < -1")));
    }
    let mut op = Operator::default();
    let one = Rational::one();
    match k {
        -1 => {
            for j in 2..=n + 1 {
                push_shifted(&mut op, j, j - 1, &one);
            }
            op.add_term(s_term(-2, 1, var_mono(1), vec![]), one);
        }
        0 => {
            for j in 1..=n {
                push_shifted(&mut op, j, j, &one);
            }
            op.add_term(s_term(-2, 2, 0, vec![]), one);
        }
        _ => {
            let k = k as usize;
            for j in 1..k {
                if j <= n && k - j <= n {
                    op.add_term(s_term(2, 0, 0, vec![j as u8, (k - j) as u8]), one.clone());
                }
            }
            if k <= n {
                op.add_term(s_term(0, 1, 0, vec![k as u8]), int(2));
            }
            for j in 1..=n.saturating_sub(k) {
                push_shifted(&mut op, j, j + k, &one);
            }
        }
    }
    Ok(op)
}

/// Cap to which `L_k^GUE` applied to a series of cap `cap` is exact.
pub fn gue_output_cap(k: i32, cap: i32) -> i32 {
    if k == -1 {
        cap - 1
    } else {
        cap - k - 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Gue,
    Nls,
}

/// Apply `L_k` of either family (NLS pulled back to GUE variables) to a truncated series.
pub fn virasoro_apply(family: Family, k: i32, z: &ExactSeries) -> Result<ExactSeries> {
    let n = z.cap().max(1) as usize;
    let op = match family {
        Family::Gue => gue_virasoro(k, n)?,
        Family::Nls => pullback(&nls_virasoro(k, n)?)?,
    };
    Ok(op.apply(z)?.truncate(gue_output_cap(k, z.cap())))
}

/// `[L_k, L_l] - (k - l) L_{k+l}` applied to `z`.
pub fn commutator_residual(k: i32, l: i32, z: &ExactSeries) -> Result<ExactSeries> {
    let a = virasoro_apply(Family::Gue, k, &virasoro_apply(Family::Gue, l, z)?)?;
    let b = virasoro_apply(Family::Gue, l, &virasoro_apply(Family::Gue, k, z)?)?;
    let c = virasoro_apply(Family::Gue, k + l, z)?.scale(&int((k - l) as i64));
    Ok(a.sub(&b).sub(&c))
}

/// `sum_j s~_j dF/ds_j + eps dF/deps + x dF/dx + 1/12`.
pub fn gue_dilaton_free_energy(f: &ExactSeries) -> Result<ExactSeries> {
    let cap = f.cap();
    let mut op = Operator::default();
    for j in 1..=cap.max(1) as usize {
        op.add_term(s_term(0, 0, var_mono(j), vec![j as u8]), Rational::one());
    }
    op.add_term(s_term(0, 0, 0, vec![2]), rat(-1, 2));
    let r = op
        .apply(f)?
        .add(&f.eps_deps())
        .add(&f.x_dx())
        .add(&ExactSeries::constant(cap, Coeff::rational(rat(1, 12))));
    Ok(r.truncate(cap - 2))
}

/// Dilaton operator on `Z = e^B * series` with the background `B` kept symbolic.
pub fn gue_dilaton_partition(background: &Coeff, series: &ExactSeries) -> Result<ExactSeries> {
    let cap = series.cap();
    let mut op = Operator::default();
    for j in 1..=cap.max(1) as usize {
        op.add_term(s_term(0, 0, var_mono(j), vec![j as u8]), Rational::one());
    }
    op.add_term(s_term(0, 0, 0, vec![2]), rat(-1, 2));
    let b = ExactSeries::constant(cap, background.clone());
    let db = b.eps_deps().add(&b.x_dx()).constant_term().add(&Coeff::rational(rat(1, 12)));
    if db.has_transcendental() {
        return Err(Error::Inconsistent(format!("background scaling leaves atoms: {db}")));
    }
    let r = op.apply(series)?.add(&series.eps_deps()).add(&series.x_dx()).add(&series.mul_coeff(&db)?);
    Ok(r.truncate(cap - 2))
}

/// Time variable `t^{alpha,m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TVar {
    pub alpha: u8,
    pub m: u32,
}

fn tv(alpha: u8, m: u32) -> TVar {
    TVar { alpha, m }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NlsTerm {
    pub eps: i32,
    pub mult: Vec<TVar>,
    pub derivs: Vec<TVar>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NlsOperator {
    pub terms: BTreeMap<NlsTerm, Rational>,
}

impl NlsOperator {
    fn add(&mut self, eps: i32, mult: Vec<TVar>, derivs: Vec<TVar>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let mut t = NlsTerm { eps, mult, derivs };
        t.mult.sort();
        t.derivs.sort();
        let e = self.terms.entry(t.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&t);
        }
    }

    /// Add `c * t~^{a,m} * (rest)` with `t~^{1,1} = t^{1,1} - 1`.
    fn add_tilde(&mut self, eps: i32, t: TVar, extra: Vec<TVar>, derivs: Vec<TVar>, c: Rational) {
        let mut mult = extra.clone();
        mult.push(t);
        self.add(eps, mult, derivs.clone(), c.clone());
        if t == tv(1, 1) {
            self.add(eps, extra, derivs, -c);
        }
    }
}

/// `alpha_k(0) = k!`, `alpha_k(m) = (k+m)!/(m-1)! * sum_{j=m}^{k+m} 1/j`.
pub fn alpha_k(k: u32, m: u32) -> Rational {
    if m == 0 {
        return factorial_q(k as u64);
    }
    let h = harmonic((k + m) as u64) - harmonic(m as u64 - 1);
    factorial_q((k + m) as u64) / factorial_q(m as u64 - 1) * h
}

fn allowed(t: TVar, n: usize) -> bool {
    match t.alpha {
        1 => t.m as usize + 1 <= n,
        _ => t.m as usize <= n,
    }
}

/// `L_k^NLS`, keeping derivatives whose GUE index (`m+1` for `t^{1,m}`, `m` for `t^{2,m}`) is `<= n`.
pub fn nls_virasoro(k: i32, n: usize) -> Result<NlsOperator> {
    if k < -1 {
        return Err(Error::Config(format!("Virasoro index {k} < -1")));
    }
    let mut op = NlsOperator::default();
    let one = Rational::one();
    let nn = n as u32 + 2;
    match k {
        -1 => {
            for m in 1..=nn {
                for a in 1..=2u8 {
                    let d = tv(a, m - 1);
                    if allowed(d, n) {
                        op.add_tilde(0, tv(a, m), vec![], vec![d], one.clone());
                    }
                }
            }
            // t~^{1,0} t~^{2,0} / eps^2
            op.add(-2, vec![tv(1, 0), tv(2, 0)], vec![], one);
        }
        0 => {
            for m in 0..=nn {
                let d = tv(1, m);
                if allowed(d, n) {
                    op.add_tilde(0, tv(1, m), vec![], vec![d], int(1 + m as i64));
                }
            }
            for m in 1..=nn {
                let d = tv(2, m);
                if allowed(d, n) {
                    op.add_tilde(0, tv(2, m), vec![], vec![d], int(m as i64));
                }
                let d = tv(1, m - 1);
                if allowed(d, n) {
                    op.add_tilde(0, tv(2, m), vec![], vec![d], int(2));
                }
            }
            op.add(-2, vec![tv(2, 0), tv(2, 0)], vec![], one);
        }
        _ => {
            let k = k as u32;
            for m in 1..k {
                let (d1, d2) = (tv(1, m - 1), tv(1, k - m - 1));
                if allowed(d1, n) && allowed(d2, n) {
                    let c = factorial_q(m as u64) * factorial_q((k - m) as u64);
                    op.add(2, vec![], vec![d1, d2], c);
                }
            }
            for m in 1..=nn {
                let c = factorial_q((k + m) as u64) / factorial_q(m as u64 - 1);
                let d = tv(2, k + m);
                if allowed(d, n) {
                    op.add_tilde(0, tv(2, m), vec![], vec![d], c.clone());
                }
                let d = tv(1, k + m - 1);
                if allowed(d, n) {
                    op.add_tilde(0, tv(1, m - 1), vec![], vec![d], c);
                }
            }
            for m in 0..=nn {
                let d = tv(1, k + m - 1);
                if allowed(d, n) {
                    op.add_tilde(0, tv(2, m), vec![], vec![d], int(2) * alpha_k(k, m));
                }
            }
        }
    }
    Ok(op)
}

/// Substitute `t^{1,m} = (m+1)! s_{m+1}`, `t^{2,m} = x delta_{m,0}`.
pub fn pullback(op: &NlsOperator) -> Result<Operator> {
    let mut out = Operator::default();
    'terms: for (t, c) in &op.terms {
        let mut c = c.clone();
        let mut term = OpTerm { eps: t.eps, x_pow: 0, mult: 0, dx: 0, derivs: Vec::new() };
        for v in &t.mult {
            match (v.alpha, v.m) {
                (1, m) => {
                    c *= factorial_q(m as u64 + 1);
                    term.mult += var_mono(m as usize + 1);
                }
                (2, 0) => term.x_pow += 1,
                _ => continue 'terms,
            }
        }
        for v in &t.derivs {
            match (v.alpha, v.m) {
                (1, m) => {
                    c /= factorial_q(m as u64 + 1);
                    term.derivs.push(m as u8 + 1);
                }
                (2, 0) => term.dx += 1,
                _ => {
                    return Err(Error::Inconsistent(format!(
                        "derivative in t^{{2,{}}} survives the substitution",
                        v.m
                    )))
                }
            }
        }
        out.add_term(term, c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn correspondence_k_le_2() {
        for k in -1..=3 {
            assert_eq!(pullback(&nls_virasoro(k, 6).unwrap()).unwrap(), gue_virasoro(k, 6).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha_k(1, 0), int(1));
        // alpha_1(1) = 2!/0! * (1 + 1/2) = 3
        assert_eq!(alpha_k(1, 1), int(3));
    }

    #[test]
    fn l_minus_one_kills_constant_s1_derivative() {
        let op = gue_virasoro(-1, 3).unwrap();
        assert!(op.terms.contains_key(&s_term(0, 0, 0, vec![1])));
    }
}
