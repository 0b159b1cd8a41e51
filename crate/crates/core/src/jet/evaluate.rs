//! Evaluation of jet expressions on the genus-zero solution `phi(x, s)`, `rho(x, s)`.

use serde::Serialize;

use super::element::JetElement;
use super::functional::JetFunctional;
use super::poly::{JetPoly, JetVar, JMAX, NV};
use crate::error::{Error, Result};
use crate::exact::rational::rat;
use crate::exact::series::format_mono;
use crate::exact::{Coeff, ExactSeries};
use crate::hydro::solve::{solve_vu, HydroState, MAX_HYDRO_WEIGHT};
use crate::ribbon;

/// `phi_k = d^k phi / ds_1^k` and `rho_k` on a solved state; index `k` holds the k-th jets.
pub struct SolutionJets {
    pub cap: i32,
    pub phi: Vec<ExactSeries>,
    pub rho: Vec<ExactSeries>,
}

impl SolutionJets {
    pub fn new(st: &HydroState, order: usize) -> Result<SolutionJets> {
        if order > JMAX {
            return Err(Error::Config(format!("jet order {order} above {JMAX}")));
        }
        let mut phi = vec![st.v.clone()];
        let mut rho = vec![st.rho.clone()];
        for k in 0..order {
            phi.push(phi[k].partial_s(1));
            rho.push(rho[k].partial_s(1));
        }
        let cap = st.cap - order as i32;
        Ok(SolutionJets { cap, phi, rho })
    }

    fn series(&self, v: JetVar) -> Result<&ExactSeries> {
        match v {
            JetVar::Phi(k) if k < self.phi.len() => Ok(&self.phi[k]),
            JetVar::Rho(k) if k < self.rho.len() => Ok(&self.rho[k]),
            JetVar::Lambda => Err(Error::Rejected("lambda does not live on the solution".into())),
            _ => Err(Error::InsufficientJetOrder { required: v.order().unwrap_or(0), have: self.phi.len() - 1 }),
        }
    }

    pub fn poly(&self, p: &JetPoly) -> Result<ExactSeries> {
        let mut acc = ExactSeries::zero(self.cap);
        for (e, c) in p.terms() {
            let mut term = ExactSeries::constant(self.cap, Coeff::rational(c.clone()));
            for (i, &k) in e.iter().enumerate().take(NV) {
                if k > 0 {
                    let s = self.series(JetVar::from_index(i))?.truncate(self.cap);
                    term = term.mul(&s.pow(k as u32)?)?;
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// `Q = rho phi_1^2 - rho_1^2`.
    pub fn q(&self) -> Result<ExactSeries> {
        self.poly(&super::poly::q_poly())
    }

    /// A lambda-free, even element `N / (rho^a Q^c)`.
    pub fn element(&self, e: &JetElement) -> Result<ExactSeries> {
        let (a, b, c) = e.denominator();
        if !e.odd().is_zero() || b > 0 || e.even().degree_in(JetVar::Lambda) > 0 {
            return Err(Error::Rejected("element depends on lambda or sqrt(D)".into()));
        }
        let num = self.poly(e.even())?;
        let den = self.rho[0].truncate(self.cap).pow(a)?.mul(&self.q()?.pow(c)?)?;
        num.mul(&den.inverse().map_err(|_| Error::Singular("denominator vanishes at s = 0".into()))?)
    }
}

/// `F_1 = (1/24) log(Q / rho) - (1/12) log rho + zeta'(-1)`, plus `phi_1` for the corrupted variant.
pub fn evaluate_genus_one(j: &SolutionJets, corrupt: bool) -> Result<ExactSeries> {
    let rho = j.rho[0].truncate(j.cap);
    let arg = j.q()?.mul(&rho.inverse()?)?;
    let singular = |_| Error::Singular("log argument has no s = 0 leading part".into());
    let mut f = arg
        .log()
        .map_err(singular)?
        .scale(&rat(1, 24))
        .sub(&rho.log().map_err(singular)?.scale(&rat(1, 12)))
        .add(&ExactSeries::constant(j.cap, Coeff::zeta()));
    if corrupt {
        f = f.add(&j.phi[1].truncate(j.cap));
    }
    Ok(f)
}

/// `F_g` on the solution, valid for every s-weight `<= weight`.
pub fn evaluate_on_solution(f: &JetFunctional, weight: i32) -> Result<ExactSeries> {
    let order = f.jet_order().max(1);
    let cap = weight + order as i32;
    if cap > MAX_HYDRO_WEIGHT {
        return Err(Error::Resource(format!("evaluation at weight {weight} needs hydro weight {cap}")));
    }
    let st = solve_vu(cap)?;
    let jets = SolutionJets::new(&st, order)?;
    let out = match (&f.value, f.genus) {
        (Some(v), _) => jets.element(v)?,
        (None, 1) => evaluate_genus_one(&jets, f.corrupt)?,
        (None, g) => return Err(Error::Rejected(format!("no value stored for genus {g}"))),
    };
    Ok(out.truncate(weight))
}

#[derive(Debug, Clone, Serialize)]
pub struct GenusComparison {
    pub genus: usize,
    pub weight: i32,
    pub matches: bool,
    pub monomials_compared: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_difference: Option<String>,
}

/// Compare `F_g` on the solution with the genus-g part of the ribbon-graph free energy.
pub fn compare_with_ribbon(f: &JetFunctional, weight: i32) -> Result<GenusComparison> {
    let mine = evaluate_on_solution(f, weight)?;
    let theirs = ribbon::free_energy(weight, f.genus as u32)?.genus_part(f.genus as u32).truncate(weight);
    let diff = mine.first_difference(&theirs, weight);
    Ok(GenusComparison {
        genus: f.genus,
        weight,
        matches: diff.is_none(),
        monomials_compared: theirs.len().max(mine.len()),
        first_difference: diff.map(|(m, a, b)| format!("{}: {a} vs ribbon {b}", format_mono(m))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::series::var_mono;
    use crate::jet::functional::{genus_one, genus_one_corrupted};

    #[test]
    fn genus_one_at_the_origin() {
        let f = evaluate_on_solution(&genus_one(), 4).unwrap();
        let want = Coeff::zeta().add(&Coeff::log_x().scale(&rat(-1, 12)));
        assert_eq!(f.constant_term(), want);
        assert_eq!(f.coeff(var_mono(4)), Coeff::x_pow(1, rat(1, 1)));
    }

    #[test]
    fn genus_one_matches_ribbon_graphs() {
        assert!(compare_with_ribbon(&genus_one(), 6).unwrap().matches);
        assert!(!compare_with_ribbon(&genus_one_corrupted(), 6).unwrap().matches);
    }
}
