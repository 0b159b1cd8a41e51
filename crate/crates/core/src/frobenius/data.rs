//! Two-dimensional Frobenius manifolds: NLS and P1.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact::rational::{format_rational, int, rat, Rational};
use crate::exact::{Chart, PolyVU};

pub type Mat2 = [[Rational; 2]; 2];

fn mat(a: [[i64; 2]; 2]) -> Mat2 {
    a.map(|row| row.map(int))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusData2D {
    pub name: &'static str,
    pub chart: Chart,
    /// Flat metric `eta_{ab}`.
    pub eta: Mat2,
    pub potential: PolyVU,
    /// Components `E^1, E^2` of the Euler field.
    pub euler: [PolyVU; 2],
    /// Charge `d`; quasihomogeneity reads `E(F) = (3 - d) F + quadratic`.
    pub charge: Rational,
    pub mu: [Rational; 2],
    /// `r[s][a] = R^s_a`.
    pub r: Mat2,
}

impl FrobeniusData2D {
    /// `F = phi^2 rho / 2 + rho^2 log(rho) / 2 - 3 rho^2 / 4` in coordinates `(phi, rho)`.
    pub fn nls() -> FrobeniusData2D {
        FrobeniusData2D {
            name: "NLS",
            chart: Chart::Nls,
            eta: mat([[0, 1], [1, 0]]),
            potential: nls_potential(),
            euler: [PolyVU::term(1, 0, 0, int(1)), PolyVU::term(0, 1, 0, int(2))],
            charge: int(-1),
            mu: [rat(1, 2), rat(-1, 2)],
            r: mat([[0, 2], [0, 0]]),
        }
    }

    /// `F = v^2 u / 2 + e^u` in coordinates `(v, u)`.
    pub fn p1() -> FrobeniusData2D {
        FrobeniusData2D {
            name: "P1",
            chart: Chart::P1,
            eta: mat([[0, 1], [1, 0]]),
            potential: p1_potential(),
            euler: [PolyVU::term(1, 0, 0, int(1)), PolyVU::constant(int(2))],
            charge: int(1),
            mu: [rat(-1, 2), rat(1, 2)],
            r: mat([[0, 0], [2, 0]]),
        }
    }

    pub fn eta_inv(&self) -> Mat2 {
        inverse(&self.eta)
    }

    /// `d_a`, with index 1 the unit direction.
    pub fn d(&self, p: &PolyVU, a: usize) -> PolyVU {
        p.d(a, self.chart)
    }

    /// The second flat coordinate as a `PolyVU`.
    pub fn coord(&self, a: usize) -> PolyVU {
        match (a, self.chart) {
            (1, _) => PolyVU::term(1, 0, 0, Rational::one()),
            (2, Chart::P1) => PolyVU::term(0, 0, 1, Rational::one()),
            (2, Chart::Nls) => PolyVU::term(0, 1, 0, Rational::one()),
            _ => panic!("flat coordinate index must be 1 or 2"),
        }
    }

    /// `c_{abc}` computed from a potential.
    pub fn c_lower_of(&self, f: &PolyVU, a: usize, b: usize, c: usize) -> PolyVU {
        self.d(&self.d(&self.d(f, c), b), a)
    }

    pub fn c_lower(&self, a: usize, b: usize, c: usize) -> PolyVU {
        self.c_lower_of(&self.potential, a, b, c)
    }

    /// `c^s_{ab} = eta^{s m} c_{m a b}`.
    pub fn c_upper(&self, s: usize, a: usize, b: usize) -> PolyVU {
        let ei = self.eta_inv();
        let mut p = PolyVU::zero();
        for m in 1..=2 {
            if !ei[s - 1][m - 1].is_zero() {
                p = p.add(&self.c_lower(m, a, b).scale(&ei[s - 1][m - 1]));
            }
        }
        p
    }

    pub fn euler_apply(&self, p: &PolyVU) -> PolyVU {
        self.euler[0].mul(&self.d(p, 1)).add(&self.euler[1].mul(&self.d(p, 2)))
    }

    /// Intersection form `g^{ab} = E^e c_e^{ab}`.
    pub fn intersection_form(&self) -> [[PolyVU; 2]; 2] {
        let ei = self.eta_inv();
        let mut g: [[PolyVU; 2]; 2] = Default::default();
        for a in 1..=2 {
            for b in 1..=2 {
                let mut acc = PolyVU::zero();
                for e in 1..=2 {
                    for m in 1..=2 {
                        for n in 1..=2 {
                            let w = &ei[a - 1][m - 1] * &ei[b - 1][n - 1];
                            if w.is_zero() {
                                continue;
                            }
                            let t = self.euler[e - 1].mul(&self.c_lower(e, m, n)).scale(&w);
                            acc = acc.add(&t);
                        }
                    }
                }
                g[a - 1][b - 1] = acc;
            }
        }
        g
    }

    /// Nonzero blocks `(R_k)^s_a` as `(k, s, a, value)`.
    pub fn r_blocks(&self) -> Vec<(usize, usize, usize, Rational)> {
        let mut out = Vec::new();
        for s in 1..=2 {
            for a in 1..=2 {
                let v = &self.r[s - 1][a - 1];
                if v.is_zero() {
                    continue;
                }
                let k = &self.mu[s - 1] - &self.mu[a - 1];
                assert!(k.is_integer() && k > Rational::zero(), "R entry outside a positive integer block");
                out.push((k.to_integer().try_into().unwrap(), s, a, v.clone()));
            }
        }
        out
    }
}

pub fn nls_potential() -> PolyVU {
    PolyVU::from_terms([((2, 1, 0), rat(1, 2)), ((0, 2, 1), rat(1, 2)), ((0, 2, 0), rat(-3, 4))])
}

pub fn p1_potential() -> PolyVU {
    PolyVU::from_terms([((2, 0, 1), rat(1, 2)), ((0, 1, 0), rat(1, 1))])
}

pub fn inverse(m: &Mat2) -> Mat2 {
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    assert!(!det.is_zero(), "singular metric");
    [
        [&m[1][1] / &det, -&m[0][1] / &det],
        [-&m[1][0] / &det, &m[0][0] / &det],
    ]
}

/// Outcome of the Frobenius axiom checks on a candidate potential.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub manifold: String,
    pub unity_ok: bool,
    pub symmetric_ok: bool,
    pub quasihomogeneous_ok: bool,
    /// `E(F) - (3 - d) F`.
    pub remainder: String,
    pub mismatches: Vec<String>,
}

impl AxiomReport {
    pub fn ok(&self) -> bool {
        self.unity_ok && self.symmetric_ok && self.quasihomogeneous_ok
    }
}

/// True when `p` is a polynomial of degree `<= 2` in the flat coordinates.
fn is_quadratic(p: &PolyVU, chart: Chart) -> bool {
    p.terms().keys().all(|&(a, b, c)| match chart {
        Chart::P1 => b == 0 && a + c <= 2,
        Chart::Nls => c == 0 && b >= 0 && a as i32 + b <= 2,
    })
}

/// Check `eta_{ab} = c_{1ab}`, symmetry of `c`, and quasihomogeneity of `f` against the data.
pub fn axioms_check(data: &FrobeniusData2D, f: &PolyVU) -> AxiomReport {
    let mut mismatches = Vec::new();
    let mut unity_ok = true;
    for a in 1..=2 {
        for b in 1..=2 {
            let c = data.c_lower_of(f, 1, a, b);
            if c != PolyVU::constant(data.eta[a - 1][b - 1].clone()) {
                unity_ok = false;
                mismatches.push(format!(
                    "c_1{a}{b} = {c} but eta_{a}{b} = {}",
                    format_rational(&data.eta[a - 1][b - 1])
                ));
            }
        }
    }
    let mut symmetric_ok = true;
    let idx = [(1, 1, 2), (1, 2, 2), (1, 1, 1), (2, 2, 2)];
    for (a, b, c) in idx {
        let base = data.c_lower_of(f, a, b, c);
        for (p, q, r) in [(b, a, c), (c, b, a), (a, c, b), (b, c, a), (c, a, b)] {
            if data.c_lower_of(f, p, q, r) != base {
                symmetric_ok = false;
                mismatches.push(format!("c_{a}{b}{c} differs from c_{p}{q}{r}"));
            }
        }
    }
    let rem = data.euler_apply(f).sub(&f.scale(&(int(3) - &data.charge)));
    let quasihomogeneous_ok = is_quadratic(&rem, data.chart);
    if !quasihomogeneous_ok {
        mismatches.push(format!("E(F) - (3-d)F = {rem} is not quadratic"));
    }
    AxiomReport {
        manifold: data.name.to_string(),
        unity_ok,
        symmetric_ok,
        quasihomogeneous_ok,
        remainder: rem.to_string(),
        mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nls_structure_constants() {
        let d = FrobeniusData2D::nls();
        assert_eq!(d.c_lower(1, 1, 2), PolyVU::constant(int(1)));
        assert_eq!(d.c_lower(2, 2, 2), PolyVU::term(0, -1, 0, int(1)));
        assert!(d.c_lower(1, 1, 1).is_zero());
        assert!(d.c_lower(1, 2, 2).is_zero());
        let r = axioms_check(&d, &d.potential);
        assert!(r.ok(), "{r:?}");
        assert_eq!(d.euler_apply(&d.potential).sub(&d.potential.scale(&int(4))), PolyVU::term(0, 2, 0, int(1)));
    }

    #[test]
    fn p1_structure_constants() {
        let d = FrobeniusData2D::p1();
        assert_eq!(d.c_lower(1, 1, 2), PolyVU::constant(int(1)));
        assert_eq!(d.c_lower(2, 2, 2), PolyVU::term(0, 1, 0, int(1)));
        let r = axioms_check(&d, &d.potential);
        assert!(r.ok(), "{r:?}");
        assert_eq!(d.euler_apply(&d.potential).sub(&d.potential.scale(&int(2))), PolyVU::term(2, 0, 0, int(1)));
    }

    #[test]
    fn nls_intersection_form() {
        let g = FrobeniusData2D::nls().intersection_form();
        assert_eq!(g[0][0], PolyVU::constant(int(2)));
        assert_eq!(g[0][1], PolyVU::term(1, 0, 0, int(1)));
        assert_eq!(g[1][0], PolyVU::term(1, 0, 0, int(1)));
        assert_eq!(g[1][1], PolyVU::term(0, 1, 0, int(2)));
    }

    #[test]
    fn perturbed_potential_fails() {
        let d = FrobeniusData2D::nls();
        let f = d.potential.add(&PolyVU::term(3, 0, 0, int(1)));
        let r = axioms_check(&d, &f);
        assert!(!r.unity_ok);
        assert!(!r.ok());
    }
}
