//! Ribbon graphs by brute force: Wick pairings of labeled half-edges.
//!
//! Vertex `i` owns a consecutive block of half-edge labels and `sigma` rotates each block.
//! Faces are the cycles of `h -> sigma(alpha(h))`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::rational::{bernoulli, factorial_q, int, rat, Rational};
use crate::exact::series::{mono_factorial, mono_vec, monomials_of_weight, var_mono, ExactSeries, Mono};
use crate::exact::{Atom, Coeff};

/// Largest total valence enumerated (15!! = 2027025 pairings is refused).
pub const DEFAULT_BUDGET: u32 = 14;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValenceProfile(Vec<u32>);

impl ValenceProfile {
    pub fn new(j: Vec<u32>) -> Result<ValenceProfile> {
        if j.is_empty() {
            return Err(Error::Config("profile needs at least one vertex".into()));
        }
        if j.contains(&0) {
            return Err(Error::Config("valences must be positive".into()));
        }
        Ok(ValenceProfile(j))
    }

    pub fn parse(s: &str) -> Result<ValenceProfile> {
        let j = s
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad valence {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        ValenceProfile::new(j)
    }

    pub fn valences(&self) -> &[u32] {
        &self.0
    }

    pub fn vertices(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairingOutcome {
    pub faces: u32,
    pub connected: bool,
    /// Defined for connected pairings only.
    pub genus: Option<u32>,
}

struct Layout {
    sigma: Vec<usize>,
    owner: Vec<usize>,
    k: usize,
}

impl Layout {
    fn new(j: &[u32]) -> Layout {
        let mut sigma = Vec::new();
        let mut owner = Vec::new();
        let mut start = 0;
        for (i, &d) in j.iter().enumerate() {
            let d = d as usize;
            for t in 0..d {
                sigma.push(start + (t + 1) % d);
                owner.push(i);
            }
            start += d;
        }
        Layout { sigma, owner, k: j.len() }
    }

    fn stats(&self, alpha: &[usize], seen: &mut [bool], parent: &mut Vec<usize>) -> (u32, bool) {
        let n = alpha.len();
        seen.iter_mut().for_each(|b| *b = false);
        let mut faces = 0;
        for h in 0..n {
            if seen[h] {
                continue;
            }
            faces += 1;
            let mut c = h;
            while !seen[c] {
                seen[c] = true;
                c = self.sigma[alpha[c]];
            }
        }
        parent.clear();
        parent.extend(0..self.k);
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        let mut comps = self.k;
        for h in 0..n {
            let (a, b) = (find(parent, self.owner[h]), find(parent, self.owner[alpha[h]]));
            if a != b {
                parent[a] = b;
                comps -= 1;
            }
        }
        (faces, comps == 1)
    }
}

fn outcome(k: usize, total: u32, faces: u32, connected: bool) -> PairingOutcome {
    let genus = if connected {
        // 2 - 2g = k - |j|/2 + faces
        let chi = k as i64 - total as i64 / 2 + faces as i64;
        Some(((2 - chi) / 2) as u32)
    } else {
        None
    };
    PairingOutcome { faces, connected, genus }
}

/// Faces, connectivity and genus of one pairing (`alpha[h]` is the partner of half-edge `h`).
pub fn glue_stats(profile: &ValenceProfile, alpha: &[usize]) -> Result<PairingOutcome> {
    let n = profile.total() as usize;
    if alpha.len() != n || (0..n).any(|h| alpha[h] >= n || alpha[h] == h || alpha[alpha[h]] != h) {
        return Err(Error::Config("pairing is not a fixed-point-free involution".into()));
    }
    let lay = Layout::new(profile.valences());
    let (f, c) = lay.stats(alpha, &mut vec![false; n], &mut Vec::new());
    Ok(outcome(profile.vertices(), profile.total(), f, c))
}

fn check_budget(profile: &ValenceProfile, budget: u32) -> Result<()> {
    if profile.total() > budget {
        return Err(Error::Resource(format!(
            "profile total valence {} exceeds enumeration budget {budget}",
            profile.total()
        )));
    }
    Ok(())
}

/// Visit every pairing in canonical order: the lowest unpaired half-edge takes each larger candidate.
pub fn for_each_pairing(profile: &ValenceProfile, mut f: impl FnMut(&[usize])) -> Result<()> {
    check_budget(profile, DEFAULT_BUDGET)?;
    let n = profile.total() as usize;
    if n % 2 == 1 {
        return Ok(());
    }
    let mut alpha = vec![usize::MAX; n];
    rec(&mut alpha, &mut f);
    Ok(())
}

fn rec(alpha: &mut [usize], f: &mut impl FnMut(&[usize])) {
    let Some(h) = alpha.iter().position(|&a| a == usize::MAX) else {
        f(alpha);
        return;
    };
    for c in h + 1..alpha.len() {
        if alpha[c] == usize::MAX {
            alpha[h] = c;
            alpha[c] = h;
            rec(alpha, f);
            alpha[h] = usize::MAX;
            alpha[c] = usize::MAX;
        }
    }
}

/// Pairing counts keyed by face number: all pairings and connected ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FaceHistogram {
    pub all: BTreeMap<u32, u64>,
    pub connected: BTreeMap<u32, u64>,
}

impl FaceHistogram {
    fn merge(mut self, o: FaceHistogram) -> FaceHistogram {
        for (f, c) in o.all {
            *self.all.entry(f).or_default() += c;
        }
        for (f, c) in o.connected {
            *self.connected.entry(f).or_default() += c;
        }
        self
    }
}

/// Enumerate all pairings of a profile, in parallel over the partner of half-edge 0.
pub fn face_histogram(profile: &ValenceProfile) -> Result<FaceHistogram> {
    check_budget(profile, DEFAULT_BUDGET)?;
    let n = profile.total() as usize;
    if n % 2 == 1 {
        return Ok(FaceHistogram::default());
    }
    let lay = Layout::new(profile.valences());
    let hist = (1..n)
        .into_par_iter()
        .map(|first| {
            let mut alpha = vec![usize::MAX; n];
            alpha[0] = first;
            alpha[first] = 0;
            let mut h = FaceHistogram::default();
            let mut seen = vec![false; n];
            let mut parent = Vec::with_capacity(lay.k);
            rec(&mut alpha, &mut |a: &[usize]| {
                let (f, c) = lay.stats(a, &mut seen, &mut parent);
                *h.all.entry(f).or_default() += 1;
                if c {
                    *h.connected.entry(f).or_default() += 1;
                }
            });
            h
        })
        .reduce(FaceHistogram::default, FaceHistogram::merge);
    Ok(hist)
}

/// Polynomial in `n` with rational coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorrelatorPoly(pub BTreeMap<u32, Rational>);

impl CorrelatorPoly {
    pub fn from_ints(t: &[(u32, i64)]) -> CorrelatorPoly {
        let mut p = CorrelatorPoly::default();
        for &(e, c) in t {
            p.add_term(e, int(c));
        }
        p
    }

    fn add_term(&mut self, e: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let v = self.0.entry(e).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.0.remove(&e);
        }
    }

    fn from_hist(h: &BTreeMap<u32, u64>) -> CorrelatorPoly {
        let mut p = CorrelatorPoly::default();
        for (f, c) in h {
            p.add_term(*f, Rational::from_integer(BigInt::from(*c)));
        }
        p
    }

    pub fn add(&self, o: &CorrelatorPoly) -> CorrelatorPoly {
        let mut p = self.clone();
        for (e, c) in &o.0 {
            p.add_term(*e, c.clone());
        }
        p
    }

    pub fn scale(&self, r: &Rational) -> CorrelatorPoly {
        let mut p = CorrelatorPoly::default();
        for (e, c) in &self.0 {
            p.add_term(*e, c * r);
        }
        p
    }

    pub fn mul(&self, o: &CorrelatorPoly) -> CorrelatorPoly {
        let mut p = CorrelatorPoly::default();
        for (a, r) in &self.0 {
            for (b, s) in &o.0 {
                p.add_term(a + b, r * s);
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.0.keys().next_back().copied()
    }
}

/// Sum of `n^faces` over connected pairings.
pub fn connected_correlator(profile: &ValenceProfile) -> Result<CorrelatorPoly> {
    Ok(CorrelatorPoly::from_hist(&face_histogram(profile)?.connected))
}

/// Sum of `n^faces` over all pairings: the Gaussian moment of the product of traces.
pub fn full_moment(profile: &ValenceProfile) -> Result<CorrelatorPoly> {
    Ok(CorrelatorPoly::from_hist(&face_histogram(profile)?.all))
}

/// Number of connected pairings per genus.
pub fn genus_counts(profile: &ValenceProfile) -> Result<BTreeMap<u32, u64>> {
    let h = face_histogram(profile)?;
    let k = profile.vertices();
    let mut out = BTreeMap::new();
    for (f, c) in h.connected {
        let g = outcome(k, profile.total(), f, true).genus.unwrap();
        *out.entry(g).or_default() += c;
    }
    Ok(out)
}

/// `a_g(j)` = (number of connected genus-`g` pairings) / `k!`.
pub fn a_value(profile: &ValenceProfile, g: u32) -> Result<Rational> {
    let n = genus_counts(profile)?.get(&g).copied().unwrap_or(0);
    Ok(Rational::from_integer(BigInt::from(n)) / factorial_q(profile.vertices() as u64))
}

pub fn catalan(m: u64) -> Rational {
    Rational::from_integer(crate::exact::rational::binomial(2 * m, m)) / int(m as i64 + 1)
}

/// `<tr M^{2m}>` for `m = 0..=m_max` by the Harer-Zagier recurrence.
pub fn harer_zagier(m_max: usize) -> Vec<CorrelatorPoly> {
    let mut t = vec![CorrelatorPoly::from_ints(&[(1, 1)]), CorrelatorPoly::from_ints(&[(2, 1)])];
    let n = CorrelatorPoly::from_ints(&[(1, 1)]);
    for m in 2..=m_max.max(1) {
        let mi = m as i64;
        let a = n.mul(&t[m - 1]).scale(&int(2 * (2 * mi - 1)));
        let b = t[m - 2].scale(&int((mi - 1) * (2 * mi - 1) * (2 * mi - 3)));
        t.push(a.add(&b).scale(&rat(1, mi + 1)));
    }
    t.truncate(m_max + 1);
    t
}

/// All set partitions of `0..k`.
pub fn set_partitions(k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    fn go(i: usize, k: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == k {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            go(i + 1, k, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        go(i + 1, k, cur, out);
        cur.pop();
    }
    go(0, k, &mut Vec::new(), &mut out);
    out
}

/// Connected correlator from full moments by Moebius inversion over set partitions.
pub fn cumulant_from_moments(profile: &ValenceProfile) -> Result<CorrelatorPoly> {
    let j = profile.valences();
    let mut acc = CorrelatorPoly::default();
    for pi in set_partitions(j.len()) {
        let b = pi.len() as i64;
        let mu = factorial_q((b - 1) as u64) * int(if b % 2 == 1 { 1 } else { -1 });
        let mut prod = CorrelatorPoly::from_ints(&[(0, 1)]);
        for block in &pi {
            let sub = ValenceProfile::new(block.iter().map(|&i| j[i]).collect())?;
            prod = prod.mul(&full_moment(&sub)?);
        }
        acc = acc.add(&prod.scale(&mu));
    }
    Ok(acc)
}

/// s-independent part of the genus expansion, summed over `g <= g_max`.
pub fn background(g_max: u32) -> Coeff {
    let b = bernoulli(2 * g_max as usize);
    let mut c = Coeff::from_terms(vec![
        (Atom { x: 2, eps: -2, logx: 1, zeta: 0 }, rat(1, 2)),
        (Atom::new(2, -2), rat(-3, 4)),
    ]);
    if g_max >= 1 {
        c = c.add(&Coeff::from_terms(vec![
            (Atom { zeta: 1, ..Atom::ONE }, Rational::one()),
            (Atom { logx: 1, ..Atom::ONE }, rat(-1, 12)),
        ]));
    }
    for g in 2..=g_max {
        let gi = g as i64;
        let v = &b[2 * g as usize] / int(4 * gi * (gi - 1));
        c = c.add(&Coeff::term(Atom::new(2 - 2 * g as i32, 2 * g as i32 - 2), v));
    }
    c
}

/// Ordered profile listing the parts of a monomial in increasing valence.
pub fn profile_of(m: Mono) -> Vec<u32> {
    let mut j = Vec::new();
    for (i, e) in mono_vec(m).into_iter().enumerate() {
        for _ in 0..e {
            j.push(i as u32 + 1);
        }
    }
    j
}

/// Graph part of the free energy: `sum_j a_g(j) s_j eps^(2g-2) x^faces` for weight `<= w`, genus `<= g_max`.
pub fn graph_series(w: i32, g_max: u32) -> Result<ExactSeries> {
    if w > DEFAULT_BUDGET as i32 {
        return Err(Error::Resource(format!("weight cap {w} exceeds budget {DEFAULT_BUDGET}")));
    }
    let mut out = ExactSeries::zero(w);
    for wt in (2..=w).step_by(2) {
        for m in monomials_of_weight(wt) {
            let j = profile_of(m);
            let k = j.len() as i64;
            let prof = ValenceProfile::new(j)?;
            let denom = mono_factorial(m);
            for (f, c) in face_histogram(&prof)?.connected {
                let chi = k - wt as i64 / 2 + f as i64;
                let g = ((2 - chi) / 2) as u32;
                if g > g_max {
                    continue;
                }
                let val = Rational::from_integer(BigInt::from(c)) / &denom;
                out.add_term(m, Coeff::term(Atom::new(f as i32, 2 * g as i32 - 2), val));
            }
        }
    }
    Ok(out)
}

/// Truncated GUE free energy including the closed-form background terms.
pub fn free_energy(w: i32, g_max: u32) -> Result<ExactSeries> {
    Ok(graph_series(w, g_max)?.add(&ExactSeries::constant(w, background(g_max))))
}

/// `Z = e^{background} * series`, with the background kept symbolic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionFunction {
    pub background: Coeff,
    pub series: ExactSeries,
}

impl PartitionFunction {
    pub fn from_free_energy(f: &ExactSeries) -> Result<PartitionFunction> {
        let background = f.constant_term();
        let series = f.positive_part().exp()?;
        Ok(PartitionFunction { background, series })
    }
}

pub fn partition_function(w: i32, g_max: u32) -> Result<PartitionFunction> {
    PartitionFunction::from_free_energy(&free_energy(w, g_max)?)
}

/// Ordered profiles with `|j| <= w`, at most `k_max` vertices, even total.
pub fn ordered_profiles(w: u32, k_max: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn go(rem: u32, k_left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !cur.is_empty() && cur.iter().sum::<u32>() % 2 == 0 {
            out.push(cur.clone());
        }
        if k_left == 0 {
            return;
        }
        for v in 1..=rem {
            cur.push(v);
            go(rem - v, k_left - 1, cur, out);
            cur.pop();
        }
    }
    go(w, k_max, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Row of an a-table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ATableRow {
    pub profile: Vec<u32>,
    pub genus: u32,
    pub a: Rational,
}

/// Nonzero `a_g(j)` for ordered profiles `|j| <= w`, `k <= k_max`, `g <= g_max`, sorted lexicographically.
pub fn a_table(w: u32, k_max: usize, g_max: u32) -> Result<Vec<ATableRow>> {
    if w > DEFAULT_BUDGET {
        return Err(Error::Resource(format!("weight cap {w} exceeds budget {DEFAULT_BUDGET}")));
    }
    let mut rows = Vec::new();
    for j in ordered_profiles(w, k_max) {
        let prof = ValenceProfile::new(j.clone())?;
        let counts = genus_counts(&prof)?;
        let kf = factorial_q(j.len() as u64);
        for (g, c) in counts {
            if g <= g_max && c > 0 {
                rows.push(ATableRow {
                    profile: j.clone(),
                    genus: g,
                    a: Rational::from_integer(BigInt::from(c)) / &kf,
                });
            }
        }
    }
    Ok(rows)
}

/// Coefficient of `s_j` (single variable) in a series, convenience for reports.
pub fn single_var_coeff(s: &ExactSeries, j: usize) -> Coeff {
    s.coeff(var_mono(j))
}
