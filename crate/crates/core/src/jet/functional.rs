//! Higher-genus free energies in jet variables, stored through their first partial derivatives.

use std::collections::BTreeMap;

use serde::Serialize;

use super::element::JetElement;
use super::poly::{JetPoly, JetVar};
use crate::exact::rational::{int, rat};

#[derive(Debug, Clone)]
pub struct JetFunctional {
    pub genus: usize,
    /// `dF_g/dv` for every jet variable `v` it depends on.
    derivs: BTreeMap<JetVar, JetElement>,
    /// `F_g` itself when it is a ring element (genus >= 2).
    pub value: Option<JetElement>,
    /// Human-readable closed form (logarithms allowed here only).
    pub tag: Option<String>,
    /// Genus one with `phi_1` added, used as a negative control.
    pub corrupt: bool,
}

impl JetFunctional {
    pub fn from_derivatives(genus: usize, derivs: impl IntoIterator<Item = (JetVar, JetElement)>) -> JetFunctional {
        JetFunctional {
            genus,
            derivs: derivs.into_iter().filter(|(_, e)| !e.is_zero()).collect(),
            value: None,
            tag: None,
            corrupt: false,
        }
    }

    /// Functional with a known value; derivatives are taken symbolically.
    pub fn from_value(genus: usize, value: JetElement) -> JetFunctional {
        let jets = value.max_jet().unwrap_or(0);
        let mut d = Vec::new();
        for k in 0..=jets {
            d.push((JetVar::Phi(k), value.partial(JetVar::Phi(k))));
            d.push((JetVar::Rho(k), value.partial(JetVar::Rho(k))));
        }
        let mut f = JetFunctional::from_derivatives(genus, d);
        f.value = Some(value);
        f
    }

    pub fn first(&self, v: JetVar) -> JetElement {
        self.derivs.get(&v).cloned().unwrap_or_default()
    }

    pub fn second(&self, a: JetVar, b: JetVar) -> JetElement {
        self.first(a).partial(b)
    }

    pub fn derivatives(&self) -> &BTreeMap<JetVar, JetElement> {
        &self.derivs
    }

    /// Highest jet index the functional depends on.
    pub fn jet_order(&self) -> usize {
        self.derivs.keys().filter_map(|v| v.order()).max().unwrap_or(0)
    }

    /// Whether every stored pair of mixed partials agrees.
    pub fn mixed_partials_symmetric(&self) -> bool {
        let vars: Vec<JetVar> = self.derivs.keys().copied().collect();
        vars.iter().all(|a| vars.iter().all(|b| a >= b || self.second(*a, *b) == self.second(*b, *a)))
    }
}

/// `F_1 = (1/24) log(phi_1^2 - rho_1^2/rho) - (1/12) log rho`, through its derivatives.
pub fn genus_one() -> JetFunctional {
    // with Q = rho phi_1^2 - rho_1^2:
    //   dF/drho   = rho_1^2 / (24 rho Q) - 1/(12 rho)
    //   dF/dphi_1 = rho phi_1 / (12 Q)
    //   dF/drho_1 = -rho_1 / (12 Q)
    let r1 = JetElement::rho(1);
    let d_rho = r1.mul(&r1).scale(&rat(1, 24)).div_by(1, 0, 1).sub(&JetElement::constant(rat(1, 12)).div_by(1, 0, 0));
    let d_phi1 = JetElement::rho(0).mul(&JetElement::phi(1)).scale(&rat(1, 12)).div_by(0, 0, 1);
    let d_rho1 = r1.scale(&rat(-1, 12)).div_by(0, 0, 1);
    let mut f = JetFunctional::from_derivatives(
        1,
        [(JetVar::Rho(0), d_rho), (JetVar::Phi(1), d_phi1), (JetVar::Rho(1), d_rho1)],
    );
    f.tag = Some("1/24 log(phi1^2 - rho1^2/rho) - 1/12 log(rho)".into());
    f
}

/// `F_1 + phi_1`.
pub fn genus_one_corrupted() -> JetFunctional {
    let mut f = genus_one();
    let d = f.first(JetVar::Phi(1)).add(&JetElement::one());
    f.derivs.insert(JetVar::Phi(1), d);
    f.tag = Some("1/24 log(phi1^2 - rho1^2/rho) - 1/12 log(rho) + phi1".into());
    f.corrupt = true;
    f
}

#[derive(Debug, Clone, Serialize)]
pub struct DilatonReport {
    pub genus: usize,
    pub derivative_level_ok: bool,
    /// `sum k v_k dF/dv_k` equals `(2g-2) F + delta_{g,1}/12` (checked when `F` or the constant is known).
    pub euler_value_ok: Option<bool>,
    pub mismatches: Vec<String>,
}

impl DilatonReport {
    pub fn ok(&self) -> bool {
        self.derivative_level_ok && self.euler_value_ok != Some(false)
    }
}

/// The jet Euler operator `E = sum_{k>=1} k (phi_k d/dphi_k + rho_k d/drho_k)`.
fn euler_images(n: usize) -> Vec<(JetVar, JetPoly)> {
    let mut out = Vec::new();
    for k in 1..=n {
        out.push((JetVar::Phi(k), JetPoly::var(JetVar::Phi(k)).scale(&int(k as i64))));
        out.push((JetVar::Rho(k), JetPoly::var(JetVar::Rho(k)).scale(&int(k as i64))));
    }
    out
}

/// Check the jet dilaton equation. Differentiating `E F = (2g-2) F + c` in `v_j` gives
/// `E(dF/dv_j) = (2g-2-j) dF/dv_j`, which is free of logarithms.
pub fn dilaton_jet_check(f: &JetFunctional) -> DilatonReport {
    let g = f.genus as i64;
    let n = f.jet_order().max(1) + 1;
    let images = euler_images(n);
    let mut mismatches = Vec::new();
    for k in 0..=n {
        for v in [JetVar::Phi(k), JetVar::Rho(k)] {
            let d = f.first(v);
            let lhs = d.derive(&images);
            let rhs = d.scale(&int(2 * g - 2 - k as i64));
            if lhs != rhs {
                mismatches.push(format!("E(dF/d{}) != {}*dF/d{}", v.name(), 2 * g - 2 - k as i64, v.name()));
            }
        }
    }
    let derivative_level_ok = mismatches.is_empty();
    let mut e_f = JetElement::zero();
    for (v, d) in &f.derivs {
        if let Some(k) = v.order().filter(|k| *k > 0) {
            e_f = e_f.add(&JetElement::var(*v).mul(d).scale(&int(k as i64)));
        }
    }
    let euler_value_ok = if f.genus == 1 {
        let ok = e_f == JetElement::constant(rat(1, 12));
        if !ok {
            mismatches.push(format!("E F_1 = {} instead of 1/12", e_f.canonical()));
        }
        Some(ok)
    } else {
        f.value.as_ref().map(|val| {
            let ok = e_f == val.scale(&int(2 * g - 2));
            if !ok {
                mismatches.push(format!("E F_{g} != {} F_{g}", 2 * g - 2));
            }
            ok
        })
    };
    DilatonReport { genus: f.genus, derivative_level_ok, euler_value_ok, mismatches }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_one_is_consistent() {
        let f = genus_one();
        assert!(f.mixed_partials_symmetric());
        assert_eq!(f.jet_order(), 1);
        assert!(dilaton_jet_check(&f).ok());
    }

    #[test]
    fn corrupted_genus_one_fails_dilaton() {
        let r = dilaton_jet_check(&genus_one_corrupted());
        assert!(!r.ok());
        assert!(!r.derivative_level_ok);
    }
}
