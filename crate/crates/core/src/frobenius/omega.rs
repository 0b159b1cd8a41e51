//! Genus-zero two-point functions from a calibration.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use super::data::inverse;
use super::theta::ThetaSystem;
use crate::error::{Error, Result};
use crate::exact::PolyVU;

/// Coefficient of `z^a w^b` in `<grad theta_a(z), grad theta_b(w)> - eta_ab`.
pub fn pairing_coeff(t: &ThetaSystem, al: usize, a: usize, be: usize, b: usize) -> PolyVU {
    let ei = inverse(&t.eta);
    let mut p = PolyVU::zero();
    for g in 1..=2 {
        for d in 1..=2 {
            let w = &ei[g - 1][d - 1];
            if w.is_zero() {
                continue;
            }
            p = p.add(&t.d(t.get(al, a), g).mul(&t.d(t.get(be, b), d)).scale(w));
        }
    }
    if a == 0 && b == 0 {
        p = p.sub(&PolyVU::constant(t.eta[al - 1][be - 1].clone()));
    }
    p
}

/// The numerator must vanish at `w = -z`: `sum_{a+b=n} (-1)^b N_{a,b} = 0`.
pub fn check_exactness(t: &ThetaSystem, al: usize, be: usize, n: usize) -> Result<()> {
    let mut acc = PolyVU::zero();
    for b in 0..=n {
        let term = pairing_coeff(t, al, n - b, be, b);
        acc = if b % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    if !acc.is_zero() {
        return Err(Error::Calibration(format!(
            "(z+w) does not divide the pairing for ({al},{be}) at total order {n}: remainder {acc}"
        )));
    }
    Ok(())
}

/// `Omega_{al,p; be,q}`; requires `theta` up to index `p + q + 1`.
pub fn two_point_omega(t: &ThetaSystem, al: usize, p: usize, be: usize, q: usize) -> Result<PolyVU> {
    if p + q + 1 > t.m_max() {
        return Err(Error::Config(format!(
            "Omega_{al},{p};{be},{q} needs theta up to {}, have {}",
            p + q + 1,
            t.m_max()
        )));
    }
    for n in 0..=p + q + 1 {
        check_exactness(t, al, be, n)?;
    }
    Ok(omega_unchecked(t, al, p, be, q))
}

/// `Omega_{al,p; be,q}` without re-running the divisibility check.
pub fn omega_unchecked(t: &ThetaSystem, al: usize, p: usize, be: usize, q: usize) -> PolyVU {
    // N_{a,b} = Omega_{a-1,b} + Omega_{a,b-1}
    let mut acc = PolyVU::zero();
    for i in 0..=q {
        let term = pairing_coeff(t, al, p + 1 + i, be, q - i);
        acc = if i % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// All `Omega_{a,p;b,q}` with `p + q + 1 <= m_max`.
pub fn omega_table(t: &ThetaSystem) -> Result<BTreeMap<(usize, usize, usize, usize), PolyVU>> {
    let mut out = BTreeMap::new();
    let n = t.m_max();
    for al in 1..=2 {
        for be in 1..=2 {
            for p in 0..n {
                for q in 0..n - p {
                    out.insert((al, p, be, q), two_point_omega(t, al, p, be, q)?);
                }
            }
        }
    }
    Ok(out)
}

pub fn omega_table_json(table: &BTreeMap<(usize, usize, usize, usize), PolyVU>) -> Value {
    Value::Array(
        table
            .iter()
            .map(|((a, p, b, q), v)| json!({"alpha": a, "p": p, "beta": b, "q": q, "omega": v.to_json()}))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use crate::frobenius::theta::theta_p1;

    #[test]
    fn p1_low_two_point_functions() {
        let t = theta_p1(4);
        assert_eq!(two_point_omega(&t, 2, 0, 2, 0).unwrap(), PolyVU::term(0, 1, 0, rat(1, 1)));
        assert_eq!(two_point_omega(&t, 2, 0, 1, 0).unwrap(), PolyVU::term(1, 0, 0, rat(1, 1)));
        assert_eq!(two_point_omega(&t, 2, 1, 2, 1).unwrap().at_v0(), PolyVU::term(0, 2, 0, rat(1, 2)));
    }

    #[test]
    fn symmetric_table() {
        let t = theta_p1(5);
        let tab = omega_table(&t).unwrap();
        for ((a, p, b, q), v) in &tab {
            assert_eq!(&tab[&(*b, *q, *a, *p)], v);
        }
    }

    #[test]
    fn order_limit() {
        let t = theta_p1(2);
        assert!(matches!(two_point_omega(&t, 2, 1, 2, 1), Err(Error::Config(_))));
    }
}
