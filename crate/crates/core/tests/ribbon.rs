use std::collections::BTreeMap;

use gueloop_core::exact::rational::{rat, Rational};
use gueloop_core::exact::series::{mono_from, var_mono};
use gueloop_core::exact::Coeff;
use gueloop_core::ribbon::{self, CorrelatorPoly, ValenceProfile};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Brute force over all pairings: `(faces -> count)` for all and for connected gluings.
/// Faces are the cycles of `sigma . alpha` with `sigma` the vertex rotation.
fn oracle(j: &[u32]) -> (BTreeMap<u32, u64>, BTreeMap<u32, u64>) {
    let n: usize = j.iter().map(|&x| x as usize).sum();
    let mut sigma = vec![0; n];
    let mut vertex = vec![0; n];
    let mut start = 0;
    for (v, &d) in j.iter().enumerate() {
        for i in 0..d as usize {
            sigma[start + i] = start + (i + 1) % d as usize;
            vertex[start + i] = v;
        }
        start += d as usize;
    }
    let mut all = BTreeMap::new();
    let mut conn = BTreeMap::new();
    let mut alpha = vec![usize::MAX; n];
    fn rec(
        alpha: &mut Vec<usize>,
        sigma: &[usize],
        vertex: &[usize],
        k: usize,
        all: &mut BTreeMap<u32, u64>,
        conn: &mut BTreeMap<u32, u64>,
    ) {
        let n = alpha.len();
        let Some(a) = alpha.iter().position(|&x| x == usize::MAX) else {
            let mut seen = vec![false; n];
            let mut faces = 0;
            for h in 0..n {
                if !seen[h] {
                    faces += 1;
                    let mut x = h;
                    while !seen[x] {
                        seen[x] = true;
                        x = sigma[alpha[x]];
                    }
                }
            }
            let mut parent: Vec<usize> = (0..k).collect();
            fn find(p: &mut Vec<usize>, x: usize) -> usize {
                if p[x] != x {
                    let r = find(p, p[x]);
                    p[x] = r;
                }
                p[x]
            }
            for h in 0..n {
                let (u, v) = (find(&mut parent, vertex[h]), find(&mut parent, vertex[alpha[h]]));
                parent[u] = v;
            }
            let root = find(&mut parent, 0);
            let connected = (0..k).all(|v| find(&mut parent, v) == root);
            *all.entry(faces).or_default() += 1;
            if connected {
                *conn.entry(faces).or_default() += 1;
            }
            return;
        };
        for b in a + 1..n {
            if alpha[b] == usize::MAX {
                alpha[a] = b;
                alpha[b] = a;
                rec(alpha, sigma, vertex, k, all, conn);
                alpha[a] = usize::MAX;
                alpha[b] = usize::MAX;
            }
        }
    }
    if n % 2 == 0 {
        rec(&mut alpha, &sigma, &vertex, j.len(), &mut all, &mut conn);
    }
    (all, conn)
}

fn poly(m: &BTreeMap<u32, u64>) -> CorrelatorPoly {
    CorrelatorPoly(m.iter().map(|(f, c)| (*f, Rational::from_integer(BigInt::from(*c)))).collect())
}

#[test]
fn one_vertex_moments() {
    let want = [
        (4, vec![(3, 2), (1, 1)]),
        (6, vec![(4, 5), (2, 10)]),
        (8, vec![(5, 14), (3, 70), (1, 21)]),
    ];
    for (m, w) in want {
        let p = ValenceProfile::new(vec![m]).unwrap();
        assert_eq!(ribbon::connected_correlator(&p).unwrap(), CorrelatorPoly::from_ints(&w), "tr M^{m}");
    }
}

#[test]
fn harer_zagier_matches_enumeration() {
    let hz = ribbon::harer_zagier(6);
    for m in 0..=6u32 {
        if m == 0 {
            continue;
        }
        let (all, _) = oracle(&[2 * m]);
        assert_eq!(hz[m as usize], poly(&all), "m = {m}");
    }
}

#[test]
fn a_table_rows() {
    let rows = ribbon::a_table(4, 3, 1).unwrap();
    let get = |j: &[u32], g: u32| rows.iter().find(|r| r.profile == j && r.genus == g).map(|r| r.a.clone());
    assert_eq!(get(&[2], 0), Some(rat(1, 1)));
    assert_eq!(get(&[1, 1], 0), Some(rat(1, 2)));
    assert_eq!(get(&[3], 0), None);
    assert_eq!(get(&[4], 1), Some(rat(1, 1)));
    let mut sorted = rows.clone();
    sorted.sort_by(|a, b| (&a.profile, a.genus).cmp(&(&b.profile, b.genus)));
    assert_eq!(rows, sorted);
}

#[test]
fn free_energy_low_coefficients() {
    let f = ribbon::free_energy(8, 2).unwrap();
    assert_eq!(f.genus_part(0).coeff(var_mono(2)), Coeff::x_pow(2, rat(1, 1)));
    assert_eq!(f.genus_part(1).coeff(var_mono(4)), Coeff::x_pow(1, rat(1, 1)));
    assert_eq!(f.genus_part(2).coeff(var_mono(8)), Coeff::x_pow(1, rat(21, 1)));
    assert_eq!(f.genus_part(2).constant_term(), Coeff::x_pow(-2, rat(-1, 240)));
    // a_1(1,1) = 0: two univalent vertices only glue into a sphere
    assert!(f.genus_part(1).coeff(mono_from(&[2]).unwrap()).is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn connected_correlators_match_enumeration(j in prop::collection::vec(1u32..=4, 1..=3)) {
        prop_assume!(j.iter().sum::<u32>() % 2 == 0 && j.iter().sum::<u32>() <= 10);
        let p = ValenceProfile::new(j.clone()).unwrap();
        let (all, conn) = oracle(&j);
        prop_assert_eq!(ribbon::full_moment(&p).unwrap(), poly(&all));
        prop_assert_eq!(ribbon::connected_correlator(&p).unwrap(), poly(&conn));
        prop_assert_eq!(ribbon::cumulant_from_moments(&p).unwrap(), poly(&conn));
    }
}
