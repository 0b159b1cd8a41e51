//! The loop equation in jet variables, assembled as coefficient slots contracted with the
//! derivatives of `Delta F = sum eps^{2g-2} F_g`.
//!
//! Everything is moved to the left-hand side. Writing `S = 1/sqrt(D)` and `P = (phi - lambda) S`,
//! the coefficient of `eps^{2g-2}` is
//!
//! ```text
//!   sum_r c_phi[r] dF_g/dphi_r + sum_r c_rho[r] dF_g/drho_r
//! + sum_{k,l} q_pp[k][l] (d2 F_{g-1}/dphi_k dphi_l + sum_h dF_h/dphi_k dF_{g-h}/dphi_l)
//! + sum_{k,l} q_pr[k][l] (d2 F_{g-1}/dphi_k drho_l + sum_h dF_h/dphi_k dF_{g-h}/drho_l)
//! + sum_{k,l} q_rr[k][l] (d2 F_{g-1}/drho_k drho_l + sum_h dF_h/drho_k dF_{g-h}/drho_l)
//! + sum_k l_phi[k] dF_{g-1}/dphi_k + sum_k l_rho[k] dF_{g-1}/drho_k
//! + [g = 1] inhom
//! ```

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::element::JetElement;
use super::functional::JetFunctional;
use super::poly::{q_poly, JetVar, NV};
use crate::error::{Error, Result};
use crate::exact::rational::{binomial, int, rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopSystem {
    /// Built from the NLS Frobenius manifold's loop equation.
    NlsLoop,
    /// Built from the GUE Virasoro constraints through the loop operator.
    GueLoop,
}

impl LoopSystem {
    pub fn name(self) -> &'static str {
        match self {
            LoopSystem::NlsLoop => "nls_loop",
            LoopSystem::GueLoop => "gue_loop",
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoopSlots {
    pub system: LoopSystem,
    pub c_phi: Vec<JetElement>,
    pub c_rho: Vec<JetElement>,
    pub q_pp: Vec<Vec<JetElement>>,
    pub q_pr: Vec<Vec<JetElement>>,
    pub q_rr: Vec<Vec<JetElement>>,
    pub l_phi: Vec<JetElement>,
    pub l_rho: Vec<JetElement>,
    pub inhom: JetElement,
}

fn lm() -> JetElement {
    JetElement::lambda().sub(&JetElement::phi(0))
}

/// `[x, d x, ..., d^n x]`.
fn shifts(x: &JetElement, n: usize) -> Result<Vec<JetElement>> {
    let mut out = vec![x.clone()];
    for i in 0..n {
        let next = out[i].total_derivative()?;
        out.push(next);
    }
    Ok(out)
}

fn binom(n: usize, k: usize) -> Rational {
    Rational::from_integer(binomial(n as u64, k as u64))
}

/// `sum_{k=1}^r C(r,k) a[k-1] b[r-k+1]`.
fn conv(a: &[JetElement], b: &[JetElement], r: usize) -> JetElement {
    let mut acc = JetElement::zero();
    for k in 1..=r {
        acc = acc.add(&a[k - 1].mul(&b[r - k + 1]).scale(&binom(r, k)));
    }
    acc
}

fn quad(a: &[JetElement], b: &[JetElement], kmax: usize, w: &Rational) -> Vec<Vec<JetElement>> {
    (0..=kmax)
        .into_par_iter()
        .map(|k| (0..=kmax).map(|l| a[k + 1].mul(&b[l + 1]).scale(w)).collect())
        .collect()
}

/// `[((lambda-phi)^2 + 4 rho) phi_1 + 4 (lambda-phi) rho_1]` and
/// `[4 rho (lambda-phi) phi_1 + ((lambda-phi)^2 + 4 rho) rho_1]`.
fn x_numerators() -> (JetElement, JetElement) {
    let l = lm();
    let a = l.mul(&l).add(&JetElement::rho(0).scale(&int(4)));
    let xp = a.mul(&JetElement::phi(1)).add(&l.mul(&JetElement::rho(1)).scale(&int(4)));
    let xr = JetElement::rho(0).mul(&l).mul(&JetElement::phi(1)).scale(&int(4)).add(&a.mul(&JetElement::rho(1)));
    (xp, xr)
}

/// Slots of the NLS loop equation for `dF_g` up to jet `rmax` and `F_{g-1}` up to jet `kmax`.
pub fn nls_slots(rmax: usize, kmax: usize) -> Result<LoopSlots> {
    let n = rmax.max(kmax + 1) + 1;
    let s = shifts(&JetElement::s(), n)?;
    let p = shifts(&JetElement::phi(0).sub(&JetElement::lambda()).mul(&JetElement::s()), n)?;
    let a = shifts(&JetElement::phi(0).sub(&JetElement::lambda()).div_by(0, 1, 0), rmax)?;
    let b = shifts(&JetElement::rho(0).div_by(0, 1, 0), rmax)?;
    let c_phi = (0..=rmax).into_par_iter().map(|r| a[r].add(&conv(&p, &s, r))).collect();
    let c_rho = (0..=rmax)
        .into_par_iter()
        .map(|r| b[r].scale(&int(-2)).sub(&conv(&p, &p, r).scale(&rat(1, 2))))
        .collect();
    let (xp, xr) = x_numerators();
    let lp = shifts(&xp.div_by(0, 3, 0), kmax + 1)?;
    let lr = shifts(&xr.div_by(0, 3, 0), kmax + 1)?;
    Ok(LoopSlots {
        system: LoopSystem::NlsLoop,
        c_phi,
        c_rho,
        q_pp: quad(&s, &s, kmax, &Rational::from_integer(1.into())),
        q_pr: quad(&s, &p, kmax, &int(-1)),
        q_rr: quad(&p, &p, kmax, &rat(1, 4)),
        l_phi: lp[1..].to_vec(),
        l_rho: lr[1..].to_vec(),
        inhom: JetElement::rho(0).div_by(0, 2, 0),
    })
}

/// Slots of the GUE loop equation, derived from the Virasoro constraints with the loop-operator
/// formulas (`nabla S`, `nabla P`, and the closed form of `nabla^2 F_0`).
pub fn gue_slots(rmax: usize, kmax: usize) -> Result<LoopSlots> {
    let n = rmax.max(kmax + 1) + 1;
    let s0 = JetElement::s();
    let p0 = JetElement::phi(0).sub(&JetElement::lambda()).mul(&s0);
    let s = shifts(&s0, n)?;
    let p = shifts(&p0, n)?;
    let one_minus_p2 = shifts(&JetElement::one().sub(&p0.mul(&p0)), rmax)?;
    let sp = shifts(&s0.mul(&p0), rmax)?;
    let c_rho = (0..=rmax)
        .into_par_iter()
        .map(|k| one_minus_p2[k].sub(&conv(&p, &p, k)).scale(&rat(1, 2)))
        .collect();
    let c_phi = (0..=rmax).into_par_iter().map(|k| sp[k].add(&conv(&p, &s, k))).collect();
    let (xp, _) = x_numerators();
    let s6 = s0.pow(6);
    let l = lm();
    let nabla_s = xp.mul(&s6);
    let nabla_p = JetElement::rho(0)
        .mul(&l)
        .mul(&JetElement::phi(1))
        .scale(&int(-8))
        .sub(&JetElement::rho(0).scale(&int(8)).add(&l.mul(&l).scale(&int(2))).mul(&JetElement::rho(1)))
        .mul(&s6);
    let lp = shifts(&nabla_s, kmax + 1)?;
    let lr = shifts(&nabla_p.scale(&rat(-1, 2)), kmax + 1)?;
    let sqrt_d = JetElement::disc().mul(&s0);
    let ds = s0.d_lambda();
    let inhom = sqrt_d.mul(&ds.d_lambda()).scale(&rat(1, 4)).add(&l.mul(&s0).mul(&ds).scale(&rat(1, 2)));
    // the rho-phi block is stored with the phi index first
    let q_rp = quad(&p, &s, kmax, &int(-1));
    let q_pr = (0..=kmax).map(|k| (0..=kmax).map(|l| q_rp[l][k].clone()).collect()).collect();
    Ok(LoopSlots {
        system: LoopSystem::GueLoop,
        c_phi,
        c_rho,
        q_pp: quad(&s, &s, kmax, &Rational::from_integer(1.into())),
        q_pr,
        q_rr: quad(&p, &p, kmax, &rat(1, 4)),
        l_phi: lp[1..].to_vec(),
        l_rho: lr[1..].to_vec(),
        inhom,
    })
}

pub fn slots(system: LoopSystem, rmax: usize, kmax: usize) -> Result<LoopSlots> {
    match system {
        LoopSystem::NlsLoop => nls_slots(rmax, kmax),
        LoopSystem::GueLoop => gue_slots(rmax, kmax),
    }
}

/// Slot-by-slot comparison of two systems.
#[derive(Debug, Clone, Serialize)]
pub struct StructuralCertificate {
    pub slots_checked: usize,
    pub mismatches: Vec<String>,
}

impl StructuralCertificate {
    pub fn equal(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn compare_slots(a: &LoopSlots, b: &LoopSlots) -> StructuralCertificate {
    let mut pairs: Vec<(String, &JetElement, &JetElement)> = Vec::new();
    for (r, (x, y)) in a.c_phi.iter().zip(&b.c_phi).enumerate() {
        pairs.push((format!("coefficient of dF/dphi_{r}"), x, y));
    }
    for (r, (x, y)) in a.c_rho.iter().zip(&b.c_rho).enumerate() {
        pairs.push((format!("coefficient of dF/drho_{r}"), x, y));
    }
    for (name, qa, qb) in [("phi,phi", &a.q_pp, &b.q_pp), ("phi,rho", &a.q_pr, &b.q_pr), ("rho,rho", &a.q_rr, &b.q_rr)] {
        for (k, (ra, rb)) in qa.iter().zip(qb).enumerate() {
            for (l, (x, y)) in ra.iter().zip(rb).enumerate() {
                pairs.push((format!("quadratic coefficient ({name}) at ({k},{l})"), x, y));
            }
        }
    }
    for (k, (x, y)) in a.l_phi.iter().zip(&b.l_phi).enumerate() {
        pairs.push((format!("eps^2 coefficient of dF/dphi_{k}"), x, y));
    }
    for (k, (x, y)) in a.l_rho.iter().zip(&b.l_rho).enumerate() {
        pairs.push((format!("eps^2 coefficient of dF/drho_{k}"), x, y));
    }
    pairs.push(("inhomogeneous term".into(), &a.inhom, &b.inhom));
    let mismatches: Vec<String> = pairs
        .par_iter()
        .filter_map(|(name, x, y)| {
            let d = x.sub(y);
            (!d.is_zero()).then(|| format!("{name}: difference {}", d.canonical()))
        })
        .collect();
    StructuralCertificate { slots_checked: pairs.len(), mismatches }
}

fn first(f: &JetFunctional, v: JetVar) -> JetElement {
    f.first(v)
}

/// `(slot, weight)` pairs whose products sum to the `eps^{2g-2}` coefficient (minus the inhomogeneous term).
fn assemble(slots: &LoopSlots, fs: &[JetFunctional], g: usize) -> Result<Vec<(JetElement, JetElement)>> {
    if g == 0 || g > fs.len() {
        return Err(Error::Config(format!("genus {g} needs F_1..F_{g}")));
    }
    let fg = &fs[g - 1];
    let jo = fg.jet_order();
    if jo >= slots.c_phi.len() {
        return Err(Error::InsufficientJetOrder { required: jo, have: slots.c_phi.len() - 1 });
    }
    let mut terms: Vec<(JetElement, JetElement)> = Vec::new();
    for r in 0..=jo {
        terms.push((slots.c_phi[r].clone(), first(fg, JetVar::Phi(r))));
        terms.push((slots.c_rho[r].clone(), first(fg, JetVar::Rho(r))));
    }
    if g >= 2 {
        let prev = &fs[g - 2];
        let kmax = fs[..g - 1].iter().map(|f| f.jet_order()).max().unwrap_or(0);
        if kmax >= slots.q_pp.len() {
            return Err(Error::InsufficientJetOrder { required: kmax, have: slots.q_pp.len() - 1 });
        }
        let weight = |a: JetVar, b: JetVar| -> JetElement {
            let mut w = prev.second(a, b);
            for h in 1..g {
                w = w.add(&first(&fs[h - 1], a).mul(&first(&fs[g - h - 1], b)));
            }
            w
        };
        for k in 0..=kmax {
            for l in 0..=kmax {
                terms.push((slots.q_pp[k][l].clone(), weight(JetVar::Phi(k), JetVar::Phi(l))));
                terms.push((slots.q_pr[k][l].clone(), weight(JetVar::Phi(k), JetVar::Rho(l))));
                terms.push((slots.q_rr[k][l].clone(), weight(JetVar::Rho(k), JetVar::Rho(l))));
            }
        }
        for k in 0..=prev.jet_order() {
            terms.push((slots.l_phi[k].clone(), first(prev, JetVar::Phi(k))));
            terms.push((slots.l_rho[k].clone(), first(prev, JetVar::Rho(k))));
        }
    }
    Ok(terms)
}

/// The `eps^{2g-2}` coefficient of the loop equation for `F = [F_1, F_2, ...]`.
pub fn residual(slots: &LoopSlots, fs: &[JetFunctional], g: usize) -> Result<JetElement> {
    Ok(residual_with_jet(slots, fs, g)?.0)
}

/// Residual together with the highest jet index among the assembled terms.
pub fn residual_with_jet(slots: &LoopSlots, fs: &[JetFunctional], g: usize) -> Result<(JetElement, usize)> {
    let terms = assemble(slots, fs, g)?;
    let max_jet = terms
        .iter()
        .filter(|(_, w)| !w.is_zero())
        .flat_map(|(c, w)| [c.max_jet(), w.max_jet()])
        .flatten()
        .max()
        .unwrap_or(0);
    let mut acc = terms
        .par_iter()
        .filter(|(_, w)| !w.is_zero())
        .map(|(c, w)| c.mul(w))
        .reduce(JetElement::zero, |a, b| a.add(&b));
    if g == 1 {
        acc = acc.add(&slots.inhom);
    }
    Ok((acc, max_jet))
}

/// Certificate for one genus of one system.
#[derive(Debug, Clone, Serialize)]
pub struct LoopCertificate {
    pub equation: String,
    pub genus: usize,
    pub residual_zero: bool,
    pub term_count: usize,
    pub max_jet: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

/// Required jet order for genera up to `g_max`.
pub fn required_jet_order(g_max: usize) -> usize {
    (3 * g_max).saturating_sub(2).max(1)
}

/// Assemble the loop equation of `system` for every genus `1..=fs.len()` and report residuals.
pub fn loop_residuals(system: LoopSystem, fs: &[JetFunctional], jet_order: usize) -> Result<(LoopSlots, Vec<LoopCertificate>)> {
    let g_max = fs.len();
    let need = required_jet_order(g_max);
    if jet_order < need {
        return Err(Error::InsufficientJetOrder { required: need, have: jet_order });
    }
    let rmax = fs.iter().map(|f| f.jet_order()).max().unwrap_or(0);
    let kmax = fs[..g_max.saturating_sub(1)].iter().map(|f| f.jet_order()).max().unwrap_or(0);
    let sl = slots(system, rmax, kmax)?;
    let mut certs = Vec::new();
    for g in 1..=g_max {
        let (r, max_jet) = residual_with_jet(&sl, fs, g)?;
        let c = r.canonical();
        certs.push(LoopCertificate {
            equation: system.name().into(),
            genus: g,
            residual_zero: r.is_zero(),
            term_count: c.term_count(),
            max_jet,
            residual: (!r.is_zero()).then(|| truncate_display(&c)),
        });
    }
    Ok((sl, certs))
}

/// Independent check of a claimed zero: evaluate at `samples` random rational points with
/// `D = t^2` (so `S = 1/t`), away from `rho = 0`, `Q = 0`. Returns the number of nonzero values.
pub fn sampled_nonzero(e: &JetElement, samples: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = |rng: &mut ChaCha8Rng| Rational::new(rng.gen_range(-40i64..=40).into(), rng.gen_range(1i64..=9).into());
    let mut bad = 0;
    let mut done = 0;
    while done < samples {
        let mut pt: [Rational; NV] = std::array::from_fn(|_| r(&mut rng));
        let t = r(&mut rng);
        let lm = &pt[0] - &pt[JetVar::Phi(0).index()];
        pt[JetVar::Rho(0).index()] = (&lm * &lm - &t * &t) / int(4);
        if t.is_zero() || pt[JetVar::Rho(0).index()].is_zero() || q_poly().eval(&pt).is_zero() {
            continue;
        }
        done += 1;
        match e.eval(&pt, &t.recip()) {
            Some(v) if v.is_zero() => {}
            _ => bad += 1,
        }
    }
    bad
}

fn truncate_display(e: &JetElement) -> String {
    let s = e.to_string();
    if s.len() > 400 {
        format!("{}... ({} terms)", &s[..400], e.term_count())
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::functional::{genus_one, genus_one_corrupted};

    #[test]
    fn genus_one_solves_both_systems() {
        for sys in [LoopSystem::NlsLoop, LoopSystem::GueLoop] {
            let (_, certs) = loop_residuals(sys, &[genus_one()], 1).unwrap();
            assert!(certs[0].residual_zero, "{:?}", certs[0]);
        }
    }

    #[test]
    fn corrupted_genus_one_leaves_a_residual() {
        let (_, certs) = loop_residuals(LoopSystem::NlsLoop, &[genus_one_corrupted()], 1).unwrap();
        assert!(!certs[0].residual_zero);
    }

    #[test]
    fn sampling_agrees_with_the_ring() {
        let sl = gue_slots(1, 0).unwrap();
        let r = residual(&sl, &[genus_one()], 1).unwrap();
        assert_eq!(sampled_nonzero(&r, 50, 1), 0);
        let r = residual(&sl, &[genus_one_corrupted()], 1).unwrap();
        assert_eq!(sampled_nonzero(&r, 10, 1), 10);
    }

    #[test]
    fn vanishing_genus_one_leaves_the_inhomogeneous_term() {
        let sl = nls_slots(1, 0).unwrap();
        let zero = JetFunctional::from_derivatives(1, []);
        let r = residual(&sl, &[zero], 1).unwrap();
        let want = JetElement::rho(0).div_by(0, 2, 0);
        assert_eq!(r, want);
    }

    #[test]
    fn systems_are_structurally_equal() {
        let a = nls_slots(3, 2).unwrap();
        let b = gue_slots(3, 2).unwrap();
        let cert = compare_slots(&a, &b);
        assert!(cert.equal(), "{:#?}", cert.mismatches);
    }
}
