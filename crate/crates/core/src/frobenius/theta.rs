//! Calibrations `theta_{a,m}`.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::data::{FrobeniusData2D, Mat2};
use crate::error::{Error, Result};
use crate::exact::rational::{factorial_q, harmonic, int, Rational};
use crate::exact::{Chart, PolyVU};

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSystem {
    pub chart: Chart,
    pub eta: Mat2,
    /// `theta[a-1][m]`.
    pub theta: [Vec<PolyVU>; 2],
    /// `(a, m)` where quasihomogeneity did not fix the linear integration constant.
    pub resonances: Vec<(usize, usize)>,
}

impl ThetaSystem {
    pub fn get(&self, a: usize, m: usize) -> &PolyVU {
        &self.theta[a - 1][m]
    }

    pub fn m_max(&self) -> usize {
        self.theta[0].len() - 1
    }

    pub fn d(&self, p: &PolyVU, a: usize) -> PolyVU {
        p.d(a, self.chart)
    }

    pub fn to_json(&self) -> Value {
        let mut rows = Vec::new();
        for a in 1..=2 {
            for (m, p) in self.theta[a - 1].iter().enumerate() {
                rows.push(json!({"alpha": a, "m": m, "theta": p.to_json()}));
            }
        }
        Value::Array(rows)
    }
}

/// Closed-form P1 calibration, with `gamma + psi(j+1) = H_j` so no transcendental constant survives.
pub fn theta_p1(m_max: usize) -> ThetaSystem {
    let mut t1 = Vec::new();
    let mut t2 = Vec::new();
    for m in 0..=m_max {
        // theta_{2,m} = sum_{2j+l=m+1} e^{ju} v^l / (j!^2 l!)
        let mut p2 = PolyVU::zero();
        let mut j = 0;
        while 2 * j <= m + 1 {
            let l = m + 1 - 2 * j;
            if j > 0 || l > 0 {
                let w = Rational::one() / (factorial_q(j as u64).pow(2) * factorial_q(l as u64));
                p2.add_term((l as u32, j as i32, 0), w);
            }
            j += 1;
        }
        // theta_{1,m} = sum_{2j+l=m} (u - 2 H_j) e^{ju} v^l / (j!^2 l!)
        let mut p1 = PolyVU::zero();
        let mut j = 0;
        while 2 * j <= m {
            let l = m - 2 * j;
            let w = Rational::one() / (factorial_q(j as u64).pow(2) * factorial_q(l as u64));
            p1.add_term((l as u32, j as i32, 1), w.clone());
            p1.add_term((l as u32, j as i32, 0), -w * int(2) * harmonic(j as u64));
            j += 1;
        }
        t1.push(p1);
        t2.push(p2);
    }
    let d = FrobeniusData2D::p1();
    ThetaSystem { chart: Chart::P1, eta: d.eta, theta: [t1, t2], resonances: Vec::new() }
}

/// `theta_{a,0} = v_a = eta_{ab} v^b`.
fn theta0(data: &FrobeniusData2D, a: usize) -> PolyVU {
    let mut p = PolyVU::zero();
    for b in 1..=2 {
        p = p.add(&data.coord(b).scale(&data.eta[a - 1][b - 1]));
    }
    p
}

/// Residual of the quasihomogeneity condition for `d_b theta_{a,m}` given lower levels.
fn quasi_residual(
    data: &FrobeniusData2D,
    theta: &[Vec<PolyVU>; 2],
    cand: &PolyVU,
    a: usize,
    b: usize,
    m: usize,
) -> PolyVU {
    let db = data.d(cand, b);
    let factor = int(m as i64) + &data.mu[a - 1] + &data.mu[b - 1];
    let mut res = data.euler_apply(&db).sub(&db.scale(&factor));
    for (k, s, aa, v) in data.r_blocks() {
        if aa == a && k <= m {
            res = res.sub(&data.d(&theta[s - 1][m - k], b).scale(&v));
        }
    }
    res
}

/// Solve the calibration recursion level by level; the free linear constant is fixed by quasihomogeneity.
pub fn theta_recursion_solve(data: &FrobeniusData2D, m_max: usize) -> Result<ThetaSystem> {
    let mut theta: [Vec<PolyVU>; 2] = [vec![theta0(data, 1)], vec![theta0(data, 2)]];
    let mut resonances = Vec::new();
    for m in 0..m_max {
        for a in 1..=2 {
            let prev = theta[a - 1][m].clone();
            let base = prev.integrate_v();
            let mut target = PolyVU::zero();
            for s in 1..=2 {
                target = target.add(&data.c_upper(s, 2, 2).mul(&data.d(&prev, s)));
            }
            let diff = target.sub(&data.d(&data.d(&base, 2), 2));
            if !diff.d_v().is_zero() {
                return Err(Error::Calibration(format!(
                    "theta_{a},{}: second-derivative condition depends on the unit coordinate: {diff}",
                    m + 1
                )));
            }
            let f = diff.integrate_second(data.chart).integrate_second(data.chart);
            let cand = base.add(&f);
            let res = quasi_residual(data, &theta, &cand, a, 2, m + 1);
            let is_const = res.terms().keys().all(|k| *k == (0, 0, 0));
            if !is_const {
                return Err(Error::Calibration(format!(
                    "theta_{a},{}: quasihomogeneity residual is not constant: {res}",
                    m + 1
                )));
            }
            let r = res.get((0, 0, 0));
            let factor = int(m as i64 + 1) + &data.mu[a - 1] + &data.mu[1];
            let c1 = if factor.is_zero() {
                if !r.is_zero() {
                    return Err(Error::Calibration(format!(
                        "theta_{a},{}: resonant level with nonzero residual {r}",
                        m + 1
                    )));
                }
                resonances.push((a, m + 1));
                Rational::zero()
            } else {
                r / factor
            };
            theta[a - 1].push(cand.add(&data.coord(2).scale(&c1)));
        }
    }
    let sys = ThetaSystem { chart: data.chart, eta: data.eta.clone(), theta, resonances };
    check_calibration(data, &sys)?;
    Ok(sys)
}

/// Verify initial values, the unit recursion, the second-derivative recursion, and quasihomogeneity.
pub fn check_calibration(data: &FrobeniusData2D, t: &ThetaSystem) -> Result<()> {
    for a in 1..=2 {
        if t.get(a, 0) != &theta0(data, a) {
            return Err(Error::Calibration(format!("theta_{a},0 is not v_{a}")));
        }
        for m in 0..=t.m_max() {
            if m < t.m_max() && data.d(t.get(a, m + 1), 1) != *t.get(a, m) {
                return Err(Error::Calibration(format!("d_1 theta_{a},{} != theta_{a},{m}", m + 1)));
            }
            if m < t.m_max() {
                for b in 1..=2 {
                    for c in 1..=2 {
                        let lhs = data.d(&data.d(t.get(a, m + 1), b), c);
                        let mut rhs = PolyVU::zero();
                        for s in 1..=2 {
                            rhs = rhs.add(&data.c_upper(s, b, c).mul(&data.d(t.get(a, m), s)));
                        }
                        if lhs != rhs {
                            return Err(Error::Calibration(format!(
                                "second-derivative recursion fails for theta_{a},{} at ({b},{c})",
                                m + 1
                            )));
                        }
                    }
                }
            }
            for b in 1..=2 {
                let res = quasi_residual(data, &t.theta, t.get(a, m), a, b, m);
                if !res.is_zero() {
                    return Err(Error::Calibration(format!(
                        "quasihomogeneity fails for d_{b} theta_{a},{m}: {res}"
                    )));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn p1_closed_form_low_orders() {
        let t = theta_p1(3);
        assert_eq!(*t.get(2, 0), PolyVU::term(1, 0, 0, rat(1, 1)));
        assert_eq!(*t.get(2, 1), PolyVU::from_terms([((0, 1, 0), rat(1, 1)), ((2, 0, 0), rat(1, 2))]));
        assert_eq!(*t.get(2, 2), PolyVU::from_terms([((1, 1, 0), rat(1, 1)), ((3, 0, 0), rat(1, 6))]));
        assert_eq!(*t.get(1, 0), PolyVU::term(0, 0, 1, rat(1, 1)));
    }

    #[test]
    fn recursion_reproduces_p1() {
        let d = FrobeniusData2D::p1();
        let t = theta_recursion_solve(&d, 5).unwrap();
        assert_eq!(t.theta, theta_p1(5).theta);
        assert!(t.resonances.is_empty());
        check_calibration(&d, &theta_p1(5)).unwrap();
    }

    #[test]
    fn nls_low_orders() {
        let d = FrobeniusData2D::nls();
        let t = theta_recursion_solve(&d, 4).unwrap();
        assert_eq!(*t.get(1, 0), PolyVU::term(0, 1, 0, rat(1, 1)));
        assert_eq!(*t.get(2, 0), PolyVU::term(1, 0, 0, rat(1, 1)));
        assert_eq!(*t.get(1, 1), PolyVU::term(1, 1, 0, rat(1, 1)));
        let want = PolyVU::from_terms([((2, 0, 0), rat(1, 2)), ((0, 1, 1), rat(1, 1)), ((0, 1, 0), rat(-1, 1))]);
        assert_eq!(*t.get(2, 1), want);
        assert_eq!(t.resonances, vec![(2, 1)]);
    }
}
