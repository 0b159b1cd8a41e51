//! Genus-two free energy from the `eps^2` coefficient of the loop equation.
//!
//! `F_2` is independent of `phi` (the equation only sees `lambda - phi`), has jet weight 2 and
//! scaling degree -2 when `phi_k, lambda` have degree 1 and `rho_k` degree 2. The ansatz
//! `F_2 = sum_M c_M rho^{k(M)} M / Q^n` over jet monomials `M` in `phi_1..phi_4, rho_1..rho_4`
//! of jet weight `2 + 2n` is fixed by those two gradings. The coefficients are found modulo a
//! prime from random points with `D` a perfect square, lifted by rational reconstruction and then
//! certified exactly in the ring; a wrong lift cannot survive the exact check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::element::JetElement;
use super::functional::{genus_one, JetFunctional};
use super::loop_eq::{nls_slots, residual, LoopSlots};
use super::poly::{disc_poly, q_poly, Exps, JetPoly, JetVar, NV};
use crate::error::{Error, Result};
use crate::exact::rational::Rational;

/// `2^61 - 1`.
const P: u64 = (1 << 61) - 1;

fn mulm(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn addm(a: u64, b: u64) -> u64 {
    (a + b) % P
}

fn subm(a: u64, b: u64) -> u64 {
    (a + P - b) % P
}

fn powm(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a);
        }
        a = mulm(a, a);
        e >>= 1;
    }
    r
}

fn invm(a: u64) -> Option<u64> {
    (a != 0).then(|| powm(a, P - 2))
}

fn big_mod(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(P)).to_u64().expect("reduced below P")
}

fn rat_mod(r: &Rational) -> Option<u64> {
    Some(mulm(big_mod(r.numer()), invm(big_mod(r.denom()))?))
}

fn poly_mod(p: &JetPoly, pt: &[u64; NV]) -> Option<u64> {
    let mut acc = 0;
    for (e, c) in p.terms() {
        let mut t = rat_mod(c)?;
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                t = mulm(t, powm(pt[i], k as u64));
            }
        }
        acc = addm(acc, t);
    }
    Some(acc)
}

/// Value mod `P` with `S = s`; `None` on a pole.
fn element_mod(e: &JetElement, pt: &[u64; NV], s: u64) -> Option<u64> {
    let (a, b, c) = e.denominator();
    let den = mulm(
        mulm(powm(pt[JetVar::Rho(0).index()], a as u64), powm(poly_mod(&disc_poly(), pt)?, b as u64)),
        powm(poly_mod(&q_poly(), pt)?, c as u64),
    );
    let num = addm(poly_mod(e.even(), pt)?, mulm(poly_mod(e.odd(), pt)?, s));
    Some(mulm(num, invm(den)?))
}

/// Smallest `r / s` with `r = a s mod P`, `|r|, s <= sqrt(P/2)`.
fn reconstruct(a: u64) -> Option<Rational> {
    let bound = ((P / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (P as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > bound {
        return None;
    }
    let (n, d) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    Some(Rational::new(BigInt::from(n), BigInt::from(d)))
}

/// One term `rho^k M / Q^n` of the ansatz.
#[derive(Debug, Clone)]
struct BasisTerm {
    mono: Exps,
    rho_power: i32,
}

const JETS: [JetVar; 8] = [
    JetVar::Phi(1),
    JetVar::Rho(1),
    JetVar::Phi(2),
    JetVar::Rho(2),
    JetVar::Phi(3),
    JetVar::Rho(3),
    JetVar::Phi(4),
    JetVar::Rho(4),
];

fn jet_monomials(weight: usize) -> Vec<Exps> {
    fn go(i: usize, left: usize, e: &mut Exps, out: &mut Vec<Exps>) {
        if i == JETS.len() {
            if left == 0 {
                out.push(*e);
            }
            return;
        }
        let v = JETS[i];
        let w = v.order().unwrap_or(1);
        let idx = v.index();
        for k in 0..=left / w {
            e[idx] = k as u8;
            go(i + 1, left - k * w, e, out);
        }
        e[idx] = 0;
    }
    let mut out = Vec::new();
    go(0, weight, &mut [0; NV], &mut out);
    out
}

fn ansatz(n: u32) -> Vec<BasisTerm> {
    jet_monomials(2 + 2 * n as usize)
        .into_iter()
        .filter_map(|m| {
            let phis: u32 = JETS.iter().filter(|v| matches!(v, JetVar::Phi(_))).map(|v| m[v.index()] as u32).sum();
            let rhos: u32 = JETS.iter().filter(|v| matches!(v, JetVar::Rho(_))).map(|v| m[v.index()] as u32).sum();
            let deg = phis + 2 * rhos;
            (deg % 2 == 0).then(|| BasisTerm { mono: m, rho_power: 2 * n as i32 - 1 - deg as i32 / 2 })
        })
        .collect()
}

/// `d/dv (rho^k M Q^{-n})` at a point, mod `P`.
fn basis_partial(b: &BasisTerm, n: u32, v: JetVar, pt: &[u64; NV], q: u64) -> u64 {
    let mono = |e: &Exps| e.iter().enumerate().fold(1, |acc, (i, &k)| mulm(acc, powm(pt[i], k as u64)));
    let rho = pt[JetVar::Rho(0).index()];
    let rho_k = if b.rho_power >= 0 {
        powm(rho, b.rho_power as u64)
    } else {
        invm(powm(rho, (-b.rho_power) as u64)).unwrap_or(0)
    };
    let qinv = invm(q).unwrap_or(0);
    let qn = powm(qinv, n as u64);
    let m = mono(&b.mono);
    // d M / dv
    let i = v.index();
    let dm = if b.mono[i] > 0 {
        let mut e = b.mono;
        e[i] -= 1;
        mulm(b.mono[i] as u64, mono(&e))
    } else {
        0
    };
    let (phi1, rho1) = (pt[JetVar::Phi(1).index()], pt[JetVar::Rho(1).index()]);
    let dq = match v {
        JetVar::Rho(0) => mulm(phi1, phi1),
        JetVar::Phi(1) => mulm(2, mulm(rho, phi1)),
        JetVar::Rho(1) => subm(0, mulm(2, rho1)),
        _ => 0,
    };
    let drho = if v == JetVar::Rho(0) {
        let k = b.rho_power;
        let kk = if k >= 0 { k as u64 % P } else { P - (-k) as u64 };
        mulm(kk, mulm(rho_k, invm(rho).unwrap_or(0)))
    } else {
        0
    };
    // d(rho^k Q^-n) = drho Q^-n - n rho^k Q^-n dQ/Q
    let dfac = subm(mulm(drho, qn), mulm(mulm(n as u64, rho_k), mulm(qn, mulm(dq, qinv))));
    addm(mulm(dm, mulm(rho_k, qn)), mulm(m, dfac))
}

/// Random point with `D = t^2`; `S = 1/t`.
fn sample_point(rng: &mut ChaCha8Rng) -> Option<([u64; NV], u64)> {
    let mut pt = [0u64; NV];
    for x in pt.iter_mut() {
        *x = rng.gen_range(1..P);
    }
    let (l, f, t) = (pt[0], pt[JetVar::Phi(0).index()], rng.gen_range(1..P));
    let lm = subm(l, f);
    pt[JetVar::Rho(0).index()] = mulm(subm(mulm(lm, lm), mulm(t, t)), invm(4)?);
    let q = poly_mod(&q_poly(), &pt)?;
    if pt[JetVar::Rho(0).index()] == 0 || q == 0 {
        return None;
    }
    Some((pt, invm(t)?))
}

/// Solve `A x = b` mod `P`. `Ok(None)` when inconsistent; error when the solution is not unique.
fn solve_mod(mut rows: Vec<Vec<u64>>, unknowns: usize) -> Result<Option<Vec<u64>>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..unknowns {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let inv = invm(rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = mulm(*x, inv);
        }
        let pivot = rows[r].clone();
        rows.par_iter_mut().enumerate().filter(|(i, _)| *i != r).for_each(|(_, row)| {
            let f = row[c];
            if f != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = subm(*x, mulm(f, *y));
                }
            }
        });
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[unknowns] != 0) {
        return Ok(None);
    }
    if pivots.len() < unknowns {
        return Err(Error::Ansatz(format!(
            "solution is not unique: rank {} for {unknowns} unknowns",
            pivots.len()
        )));
    }
    Ok(Some((0..unknowns).map(|i| rows[i][unknowns]).collect()))
}

#[derive(Debug, Clone, Serialize)]
pub struct Genus2Attempt {
    pub q_power: u32,
    pub unknowns: usize,
    pub outcome: String,
}

#[derive(Debug, Clone)]
pub struct Genus2Solution {
    pub functional: JetFunctional,
    pub q_power: u32,
    pub terms: usize,
    pub attempts: Vec<Genus2Attempt>,
}

/// Find `F_2` with `Q`-denominator powers `1..=max_q_power`, seeded for reproducibility.
pub fn solve_g2(max_q_power: u32, seed: u64) -> Result<Genus2Solution> {
    let f1 = genus_one();
    let slots: LoopSlots = nls_slots(4, f1.jet_order())?;
    let known = residual(&slots, &[f1.clone(), JetFunctional::from_derivatives(2, [])], 2)?;
    let mut attempts = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars: Vec<JetVar> = std::iter::once(JetVar::Rho(0)).chain(JETS).collect();
    for n in 1..=max_q_power {
        let basis = ansatz(n);
        let unknowns = basis.len();
        let mut points = Vec::new();
        while points.len() < unknowns + 24 {
            if let Some(p) = sample_point(&mut rng) {
                points.push(p);
            }
        }
        let rows: Vec<Option<Vec<u64>>> = points
            .par_iter()
            .map(|(pt, s)| {
                let q = poly_mod(&q_poly(), pt)?;
                let c: Vec<u64> = vars
                    .iter()
                    .map(|v| {
                        let (k, is_phi) = match v {
                            JetVar::Phi(k) => (*k, true),
                            JetVar::Rho(k) => (*k, false),
                            JetVar::Lambda => unreachable!(),
                        };
                        let slot = if is_phi { &slots.c_phi[k] } else { &slots.c_rho[k] };
                        element_mod(slot, pt, *s)
                    })
                    .collect::<Option<_>>()?;
                let mut row: Vec<u64> = basis
                    .iter()
                    .map(|b| vars.iter().zip(&c).fold(0, |acc, (v, cv)| addm(acc, mulm(*cv, basis_partial(b, n, *v, pt, q)))))
                    .collect();
                row.push(subm(0, element_mod(&known, pt, *s)?));
                Some(row)
            })
            .collect();
        let rows: Vec<Vec<u64>> = rows.into_iter().flatten().collect();
        let sol = match solve_mod(rows, unknowns) {
            Ok(Some(x)) => x,
            Ok(None) => {
                attempts.push(Genus2Attempt { q_power: n, unknowns, outcome: "inconsistent".into() });
                continue;
            }
            Err(e) => {
                attempts.push(Genus2Attempt { q_power: n, unknowns, outcome: e.to_string() });
                continue;
            }
        };
        let mut num = JetPoly::zero();
        let mut lifted = true;
        for (b, x) in basis.iter().zip(&sol) {
            if *x == 0 {
                continue;
            }
            let Some(c) = reconstruct(*x) else {
                lifted = false;
                break;
            };
            let mut e = b.mono;
            e[JetVar::Rho(0).index()] = (b.rho_power + 3) as u8;
            num = num.add(&JetPoly::from_terms([(e, c)]));
        }
        if !lifted {
            attempts.push(Genus2Attempt { q_power: n, unknowns, outcome: "rational reconstruction failed".into() });
            continue;
        }
        let value = JetElement::from_parts(num, JetPoly::zero(), 3, 0, n).canonical();
        let terms = value.term_count();
        let mut f2 = JetFunctional::from_value(2, value);
        f2.tag = Some(format!("rational in jets over rho^3 Q^{n}"));
        // exact certificate: the lift must solve the equation in the ring
        let check = residual(&slots, &[f1.clone(), f2.clone()], 2)?;
        if !check.is_zero() {
            attempts.push(Genus2Attempt { q_power: n, unknowns, outcome: "lifted candidate fails the exact check".into() });
            continue;
        }
        attempts.push(Genus2Attempt { q_power: n, unknowns, outcome: "solved".into() });
        return Ok(Genus2Solution { functional: f2, q_power: n, terms, attempts });
    }
    Err(Error::Ansatz(format!(
        "no genus-2 solution with Q-denominator power <= {max_q_power} ({}); try a larger power",
        attempts.iter().map(|a| format!("n={}: {}", a.q_power, a.outcome)).collect::<Vec<_>>().join(", ")
    )))
}
