//! Counting `j` in `P^1(Q)` by the Igusa height of the curve they define.
//!
//! `j = p/q` is enumerated by denominator, then numerator, up to a naive
//! height `c B^(1/delta)`. For each point the normalized Igusa invariants
//! give the first ladder step whose bound it meets; points within the ladder
//! are then tested for a rational point on their obstruction conic.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{class_solvable, factorizer, ExactRational as Q};
use crate::asymptotics::{fit_points, fit_points_assuming, product_combine, AsymptoticForm, FitReport};
use crate::heights::normalize_integers;
use crate::igusa::{IgusaFamily, ProjectiveRational, IGUSA_WEIGHTS};
use crate::mestre::{CaseDescriptor, Subgroup};
use crate::{Error, Result};

/// Increasing height bounds `B_1 < ... < B_m`, all at least 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightLadder {
    steps: Vec<Q>,
}

impl HeightLadder {
    pub fn new(steps: Vec<Q>) -> Result<Self> {
        let one = Q::one();
        if steps.is_empty() || steps.iter().any(|b| *b < one) || steps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidLadder);
        }
        Ok(HeightLadder { steps })
    }

    /// `B_max / ratio^k` for `k = steps - 1, ..., 0`, dropping bounds below 1.
    /// Without `steps`, goes down as far as bounds stay at least 1.
    pub fn geometric(b_max: &Q, ratio: &Q, steps: Option<usize>) -> Result<Self> {
        let one = Q::one();
        if *ratio <= one || *b_max < one {
            return Err(Error::InvalidLadder);
        }
        let mut out = Vec::new();
        let mut b = b_max.clone();
        while b >= one && steps.is_none_or(|s| out.len() < s) {
            out.push(b.clone());
            b = &b / ratio;
        }
        out.reverse();
        Self::new(out)
    }

    pub fn steps(&self) -> &[Q] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn max(&self) -> &Q {
        self.steps.last().expect("ladders are nonempty")
    }
}

/// Every point of `P^1(Q)` of naive height at most `bound`, once each:
/// `oo`, then denominators `q = 1, 2, ...` with numerators `0, 1, -1, 2, -2, ...`.
pub fn enumerate_p1(bound: u64) -> impl Iterator<Item = ProjectiveRational> {
    let inf = std::iter::once(ProjectiveRational::infinity()).filter(move |_| bound >= 1);
    inf.chain((1..=bound).flat_map(move |q| {
        numerators(q, bound).map(move |p| ProjectiveRational::new(p, q).expect("q is positive"))
    }))
}

fn numerators(q: u64, bound: u64) -> impl Iterator<Item = i64> {
    let zero = std::iter::once(0i64).filter(move |_| q == 1);
    zero.chain((1..=bound).filter(move |&p| p.gcd(&q) == 1).flat_map(|p| [p as i64, -(p as i64)]))
}

/// Tunables of a counting run.
#[derive(Clone, Debug)]
pub struct CountOptions {
    /// Enumerate up to naive height `safety_factor * B_max^(1/delta)`.
    pub safety_factor: f64,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub threads: Option<usize>,
    /// Extra excluded `j` besides the shipped special points.
    pub extra_exclusions: Vec<ProjectiveRational>,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { safety_factor: 4.0, threads: None, extra_exclusions: Vec::new() }
    }
}

/// Counts along a ladder for one case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountSeries {
    pub d: u32,
    pub w: Subgroup,
    pub ladder: HeightLadder,
    /// Eligible `j` with `Ht <= B_i`.
    pub totals: Vec<u64>,
    /// Those of them whose obstruction conic has a rational point.
    pub counts: Vec<u64>,
    /// Enumerated `j` that are special, degenerate, or under a degenerate fiber.
    pub excluded: u64,
    pub enumerated: u64,
    /// Naive height bound of the enumeration.
    pub naive_bound: u64,
    /// Largest naive height of an eligible `j` with `Ht <= B_max`.
    pub max_counted_naive: u64,
}

impl CountSeries {
    /// One CSV row per ladder step: `D,W,B,total,solvable,excluded`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("D,W,B,total,solvable,excluded\n");
        for (i, b) in self.ladder.steps().iter().enumerate() {
            let _ = writeln!(s, "{},{},{},{},{},{}", self.d, self.w, b, self.totals[i], self.counts[i], self.excluded);
        }
        s
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.ladder
            .steps()
            .iter()
            .zip(&self.counts)
            .map(|(b, &c)| (b.to_f64(), c as f64))
            .collect()
    }

    pub fn fit(&self, alpha_fixed: Option<f64>) -> Result<FitReport> {
        fit_exponents(self, alpha_fixed)
    }

    /// Fit that also divides out an assumed `log(B)^beta` before taking the slope.
    pub fn fit_assuming(&self, alpha_fixed: Option<f64>, beta: f64) -> Result<FitReport> {
        fit_points_assuming(&self.points(), alpha_fixed, Some(beta))
    }
}

/// Regression of the solvable counts; see [`fit_points`].
pub fn fit_exponents(series: &CountSeries, alpha_fixed: Option<f64>) -> Result<FitReport> {
    fit_points(&series.points(), alpha_fixed)
}

/// Threshold `floor(B^w)` for a ladder bound and weight; `None` when it does not fit.
fn thresholds_u128(ladder: &HeightLadder) -> Vec<[Option<u128>; 4]> {
    thresholds_big(ladder).iter().map(|t| t.clone().map(|v| v.to_u128())).collect()
}

fn thresholds_big(ladder: &HeightLadder) -> Vec<[BigInt; 4]> {
    ladder
        .steps()
        .iter()
        .map(|b| {
            IGUSA_WEIGHTS.map(|w| {
                let w = w as usize;
                num_traits::pow(b.numer().clone(), w) / num_traits::pow(b.denom().clone(), w)
            })
        })
        .collect()
}

struct Context<'a> {
    case: &'a CaseDescriptor,
    family: IgusaFamily,
    degrees: [usize; 4],
    coeffs: Option<[Vec<i128>; 4]>,
    thr_small: Vec<[Option<u128>; 4]>,
    thr_big: Vec<[BigInt; 4]>,
    skip: Vec<(i128, i128)>,
    bound: u64,
}

#[derive(Clone, Debug, Default)]
struct Partial {
    total_hist: Vec<u64>,
    solv_hist: Vec<u64>,
    excluded: u64,
    enumerated: u64,
    max_naive: u64,
}

impl Partial {
    fn new(m: usize) -> Self {
        Partial { total_hist: vec![0; m], solv_hist: vec![0; m], ..Default::default() }
    }

    fn merge(mut self, o: Partial) -> Partial {
        for (a, b) in self.total_hist.iter_mut().zip(&o.total_hist) {
            *a += b;
        }
        for (a, b) in self.solv_hist.iter_mut().zip(&o.solv_hist) {
            *a += b;
        }
        self.excluded += o.excluded;
        self.enumerated += o.enumerated;
        self.max_naive = self.max_naive.max(o.max_naive);
        self
    }
}

/// First index `k` with `value <= thr[k][i]`; thresholds increase with `k`.
fn first_index(m: usize, fits: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, m);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if fits(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

impl Context<'_> {
    fn is_skipped(&self, p: i128, q: i128) -> bool {
        self.skip.iter().any(|&(a, b)| a == p && b == q)
    }

    /// Ladder index of `Ht(J(p/q))`, or `m` if beyond the ladder; `None` if `J10 = 0`.
    fn ladder_index(&self, p: i64, q: i64) -> Option<usize> {
        match &self.coeffs {
            Some(c) => self.ladder_index_small(c, p, q),
            None => self.ladder_index_big(p, q),
        }
    }

    fn ladder_index_small(&self, coeffs: &[Vec<i128>; 4], p: i64, q: i64) -> Option<usize> {
        let top = self.degrees[3];
        let mut pp = [1i128; 26];
        let mut qq = [1i128; 26];
        for k in 1..=top {
            pp[k] = pp[k - 1] * p as i128;
            qq[k] = qq[k - 1] * q as i128;
        }
        let mut a = [0u128; 4];
        for i in 0..4 {
            let d = self.degrees[i];
            let v: i128 = coeffs[i].iter().enumerate().map(|(k, c)| c * pp[k] * qq[d - k]).sum();
            a[i] = v.unsigned_abs();
        }
        if a[3] == 0 {
            return None;
        }
        let m = self.thr_small.len();
        // the rescaling l with l^{w_i} | x_i divides gcd(J2, J4), which bounds it
        if a[0] != 0 && a[1] != 0 {
            let l = match (u64::try_from(a[0]), u64::try_from(a[1])) {
                (Ok(x), Ok(y)) => x.gcd(&y) as u128,
                _ => a[0].gcd(&a[1]),
            };
            let top = &self.thr_small[m - 1];
            for i in 0..4 {
                let limit = top[i].and_then(|t| l.checked_pow(IGUSA_WEIGHTS[i]).and_then(|s| s.checked_mul(t)));
                if limit.is_some_and(|lim| a[i] > lim) {
                    return Some(m);
                }
            }
        }
        let g = a.iter().filter(|&&v| v != 0).fold(0u128, |g, &v| g.gcd(&v));
        if g > 1 {
            let primes: Vec<u128> = match u64::try_from(g) {
                Ok(g) => factorizer().factor_u64(g).into_iter().map(|(p, _)| p as u128).collect(),
                Err(_) => factorizer()
                    .factor_big(&g.into())
                    .into_iter()
                    .map(|(p, _)| p.to_u128().expect("factor of a u128"))
                    .collect(),
            };
            for p in primes {
                let e = (0..4)
                    .filter(|&i| a[i] != 0)
                    .map(|i| {
                        let (mut v, mut x) = (0u32, a[i]);
                        while x % p == 0 {
                            x /= p;
                            v += 1;
                        }
                        v / IGUSA_WEIGHTS[i]
                    })
                    .min()
                    .unwrap_or(0);
                if e > 0 {
                    for i in 0..4 {
                        a[i] /= p.pow(e * IGUSA_WEIGHTS[i]);
                    }
                }
            }
        }
        let mut idx = 0;
        for i in 0..4 {
            if a[i] == 0 {
                continue;
            }
            let k = first_index(m, |k| self.thr_small[k][i].is_none_or(|t| a[i] <= t));
            idx = idx.max(k);
        }
        Some(idx)
    }

    fn ladder_index_big(&self, p: i64, q: i64) -> Option<usize> {
        let j = ProjectiveRational::new(p, q).expect("q is positive");
        let raw = self.family.raw_invariants(&j);
        if raw[3].is_zero() {
            return None;
        }
        let x = normalize_integers(&raw, &IGUSA_WEIGHTS);
        let m = self.thr_big.len();
        let mut idx = 0;
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let a = xi.abs();
            idx = idx.max(first_index(m, |k| a <= self.thr_big[k][i]));
        }
        Some(idx)
    }

    fn visit(&self, p: i64, q: i64, acc: &mut Partial) {
        acc.enumerated += 1;
        if q == 0 || p == 0 || self.is_skipped(p as i128, q as i128) {
            acc.excluded += 1;
            return;
        }
        let Some(k) = self.ladder_index(p, q) else {
            acc.excluded += 1;
            return;
        };
        if k >= acc.total_hist.len() {
            return;
        }
        acc.total_hist[k] += 1;
        acc.max_naive = acc.max_naive.max(p.unsigned_abs().max(q as u64));
        let j = ProjectiveRational::new(p, q).expect("q is positive");
        let sym = &self.case.symbol;
        if let (Some(a), Some(b)) = (sym.a.evaluate(&j), sym.b.evaluate(&j)) {
            if class_solvable(&a, &b) {
                acc.solv_hist[k] += 1;
            }
        }
    }

    fn denominator(&self, q: u64, acc: &mut Partial) {
        if q == 0 {
            self.visit(1, 0, acc);
            return;
        }
        for p in numerators(q, self.bound) {
            self.visit(p, q as i64, acc);
        }
    }
}

/// Whether every `sum |c_k| H^d` fits comfortably in an `i128`.
fn small_coefficients(family: &IgusaFamily, bound: u64) -> Option<[Vec<i128>; 4]> {
    let degrees = family.degrees();
    let h = BigInt::from(bound);
    let limit = BigInt::from(1u128 << 125);
    let mut out: [Vec<i128>; 4] = Default::default();
    for i in 0..4 {
        let coeffs = family.polys[i].coeffs();
        let sum: BigInt = coeffs.iter().map(|c| c.abs()).sum();
        if sum * num_traits::pow(h.clone(), degrees[i]) >= limit {
            return None;
        }
        out[i] = coeffs.iter().map(|c| c.to_i128().expect("small coefficient")).collect();
    }
    Some(out)
}

/// Counts with default options.
pub fn count_case(d: u32, w: Subgroup, ladder: &HeightLadder) -> Result<CountSeries> {
    let case = CaseDescriptor::build(d, w)?;
    count_case_with(&case, ladder, &CountOptions::default())
}

pub fn count_case_with(case: &CaseDescriptor, ladder: &HeightLadder, opts: &CountOptions) -> Result<CountSeries> {
    if !(opts.safety_factor > 0.0) || !opts.safety_factor.is_finite() {
        return Err(Error::InvalidArgument(format!("safety factor {} must be positive", opts.safety_factor)));
    }
    let family = IgusaFamily::new(case.d)?.with_extra_exclusions(&opts.extra_exclusions);
    let delta = family.delta as f64;
    let bound = (opts.safety_factor * ladder.max().to_f64().powf(1.0 / delta)).floor().max(1.0) as u64;

    let mut skip: Vec<(i128, i128)> = Vec::new();
    let pts = case
        .excluded
        .iter()
        .chain(&case.degenerate)
        .chain(case.fibers.iter().map(|f| &f.location))
        .chain(&opts.extra_exclusions);
    for j in pts {
        if let (Some(p), Some(q)) = (j.p().to_i128(), j.q().to_i128()) {
            skip.push((p, q));
        }
    }
    let ctx = Context {
        case,
        degrees: family.degrees(),
        coeffs: small_coefficients(&family, bound),
        thr_small: thresholds_u128(ladder),
        thr_big: thresholds_big(ladder),
        family,
        skip,
        bound,
    };
    let m = ladder.len();
    let run = || {
        (0..=bound)
            .into_par_iter()
            .fold(
                || Partial::new(m),
                |mut acc, q| {
                    ctx.denominator(q, &mut acc);
                    acc
                },
            )
            .reduce(|| Partial::new(m), Partial::merge)
    };
    let part = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };

    // every counted j must sit well inside the enumerated range
    let allowed = bound / 2;
    if part.max_naive > allowed {
        return Err(Error::SafetyFactorExceeded { reached: part.max_naive, allowed });
    }
    let cumulative = |h: &[u64]| {
        h.iter()
            .scan(0u64, |s, &x| {
                *s += x;
                Some(*s)
            })
            .collect::<Vec<u64>>()
    };
    Ok(CountSeries {
        d: case.d,
        w: case.w,
        ladder: ladder.clone(),
        totals: cumulative(&part.total_hist),
        counts: cumulative(&part.solv_hist),
        excluded: part.excluded,
        enumerated: part.enumerated,
        naive_bound: bound,
        max_counted_naive: part.max_naive,
    })
}

/// Solvable share among eligible `j` of naive height in `(h, 2h]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowFraction {
    pub h: u64,
    pub eligible: u64,
    pub solvable: u64,
}

impl WindowFraction {
    pub fn fraction(&self) -> f64 {
        if self.eligible == 0 {
            0.0
        } else {
            self.solvable as f64 / self.eligible as f64
        }
    }
}

/// For each `h`, the `j = p/q` with `h < max(|p|, q) <= 2h` that are not
/// special, degenerate or under a degenerate fiber, and how many of them
/// have a solvable obstruction conic. Heights do not enter.
pub fn naive_window_fractions(case: &CaseDescriptor, hs: &[u64]) -> Result<Vec<WindowFraction>> {
    let family = IgusaFamily::new(case.d)?;
    hs.iter()
        .map(|&h| {
            let (eligible, solvable) = (1..=2 * h)
                .into_par_iter()
                .map(|q| {
                    let (mut e, mut s) = (0u64, 0u64);
                    for p in numerators(q, 2 * h) {
                        if p.unsigned_abs().max(q) <= h {
                            continue;
                        }
                        let j = ProjectiveRational::new(p, q).expect("q is positive");
                        if case.check_point(&j).is_err() || family.raw_invariants(&j)[3].is_zero() {
                            continue;
                        }
                        e += 1;
                        if case.obstruction_at(&j).unwrap_or(false) {
                            s += 1;
                        }
                    }
                    (e, s)
                })
                .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
            Ok(WindowFraction { h, eligible, solvable })
        })
        .collect()
}

/// Combines the geometric count of a case with a twist-class asymptotic.
///
/// The geometric form has the case's exact exponents `(2/delta, -Delta)`;
/// its constant is read off the last ladder step once the series fits.
pub fn combine_with_twists(
    series: &CountSeries,
    case: &CaseDescriptor,
    twist: &AsymptoticForm,
) -> Result<AsymptoticForm> {
    let alpha = Q::new(2, case.delta)?;
    series.fit(Some(alpha.to_f64()))?;
    let beta = -case.delta_pi.clone();
    let b = series.ladder.max().to_f64();
    let last = *series.counts.last().expect("ladders are nonempty") as f64;
    let scale = b.powf(alpha.to_f64()) * b.ln().powf(beta.to_f64());
    let c = (last > 0.0 && scale > 0.0).then(|| last / scale);
    let geometric = AsymptoticForm::new(c, alpha, beta)?;
    product_combine(&geometric, twist)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    #[test]
    fn small_enumerations() {
        let one: Vec<String> = enumerate_p1(1).map(|j| j.to_string()).collect();
        assert_eq!(one, vec!["oo", "0", "1", "-1"]);
        let two: Vec<String> = enumerate_p1(2).map(|j| j.to_string()).collect();
        assert_eq!(two, vec!["oo", "0", "1", "-1", "2", "-2", "1/2", "-1/2"]);
        assert_eq!(enumerate_p1(0).count(), 0);
    }

    #[test]
    fn enumeration_is_exact() {
        let h = 40u64;
        let mut seen: Vec<ProjectiveRational> = enumerate_p1(h).collect();
        let n = seen.len();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), n);
        let mut brute = 0;
        for p in -(h as i64)..=h as i64 {
            for qq in 0..=h as i64 {
                if p.gcd(&qq) == 1 && (qq > 0 || p == 1) {
                    brute += 1;
                }
            }
        }
        assert_eq!(n, brute);
    }

    #[test]
    fn coprime_density() {
        let h = 1000u64;
        let n = enumerate_p1(h).count() as f64;
        let expected = 12.0 / std::f64::consts::PI.powi(2) * (h * h) as f64;
        assert!((n / expected - 1.0).abs() < 0.01, "{n} vs {expected}");
    }

    #[test]
    fn ladder_construction() {
        let l = HeightLadder::geometric(&q("1000"), &q("2"), Some(4)).unwrap();
        assert_eq!(l.steps(), &[q("125"), q("250"), q("500"), q("1000")]);
        let all = HeightLadder::geometric(&q("10"), &q("2"), None).unwrap();
        assert_eq!(all.steps(), &[q("5/4"), q("5/2"), q("5"), q("10")]);
        assert!(HeightLadder::new(vec![q("2"), q("2")]).is_err());
        assert!(HeightLadder::new(vec![q("1/2"), q("2")]).is_err());
        assert!(HeightLadder::geometric(&q("10"), &q("1"), None).is_err());
    }

    fn brute_series(case: &CaseDescriptor, ladder: &HeightLadder, bound: u64) -> (Vec<u64>, Vec<u64>, u64) {
        let fam = IgusaFamily::new(case.d).unwrap();
        let m = ladder.len();
        let (mut tot, mut sol, mut exc) = (vec![0u64; m], vec![0u64; m], 0u64);
        for j in enumerate_p1(bound) {
            if case.check_point(&j).is_err() || fam.is_degenerate(&j) || fam.raw_invariants(&j)[3].is_zero() {
                exc += 1;
                continue;
            }
            let solvable = case.obstruction_at(&j).unwrap();
            for (i, b) in ladder.steps().iter().enumerate() {
                if fam.height_at_most(&j, b).unwrap() {
                    tot[i] += 1;
                    if solvable {
                        sol[i] += 1;
                    }
                }
            }
        }
        (tot, sol, exc)
    }

    #[test]
    fn matches_direct_evaluation() {
        for (d, w, bmax) in [(6, "AL", "200"), (6, "w2", "150"), (10, "AL", "3000"), (22, "w22", "100000000")] {
            let case = CaseDescriptor::build(d, w.parse().unwrap()).unwrap();
            let ladder = HeightLadder::geometric(&q(bmax), &q("3"), Some(4)).unwrap();
            let s = count_case_with(&case, &ladder, &CountOptions::default()).unwrap();
            let (tot, sol, exc) = brute_series(&case, &ladder, s.naive_bound);
            assert_eq!(s.totals, tot, "D={d} W={w}");
            assert_eq!(s.counts, sol, "D={d} W={w}");
            assert_eq!(s.excluded, exc, "D={d} W={w}");
            assert!(s.counts.iter().zip(&s.totals).all(|(c, t)| c <= t));
        }
    }

    #[test]
    fn identity_cases_vanish() {
        let ladder = HeightLadder::geometric(&q("300"), &q("2"), None).unwrap();
        for d in [6, 10] {
            let s = count_case(d, Subgroup::Identity, &ladder).unwrap();
            assert!(s.counts.iter().all(|&c| c == 0));
            assert!(*s.totals.last().unwrap() > 0);
        }
    }

    #[test]
    fn threshold_points_are_counted() {
        // j = 1 on D = 6 has Igusa point [24 : 18 : 0 : 1] up to scaling, height 24
        let case = CaseDescriptor::build(6, Subgroup::Involution(2)).unwrap();
        let fam = IgusaFamily::new(6).unwrap();
        let j = ProjectiveRational::from_i64(1);
        let h = fam.height(&j).unwrap();
        let b = Q::from_integer(h.round() as i64);
        assert!(fam.height_at_most(&j, &b).unwrap());
        let below = &b - &q("1/1000");
        let ladder = HeightLadder::new(vec![below, b]).unwrap();
        let ctx_series = count_case_with(&case, &ladder, &CountOptions::default()).unwrap();
        let (tot, _, _) = brute_series(&case, &ladder, ctx_series.naive_bound);
        assert_eq!(ctx_series.totals, tot);
        assert!(tot[1] > tot[0]);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let case = CaseDescriptor::build(6, Subgroup::Full).unwrap();
        let ladder = HeightLadder::geometric(&q("400"), &q("2"), None).unwrap();
        let one = count_case_with(&case, &ladder, &CountOptions { threads: Some(1), ..Default::default() }).unwrap();
        let three = count_case_with(&case, &ladder, &CountOptions { threads: Some(3), ..Default::default() }).unwrap();
        assert_eq!(one, three);
    }

    #[test]
    fn tiny_safety_factor_is_refused() {
        let case = CaseDescriptor::build(6, Subgroup::Full).unwrap();
        let ladder = HeightLadder::geometric(&q("400"), &q("2"), None).unwrap();
        let opts = CountOptions { safety_factor: 0.5, ..Default::default() };
        assert!(matches!(count_case_with(&case, &ladder, &opts), Err(Error::SafetyFactorExceeded { .. })));
    }

    #[test]
    fn csv_shape() {
        let ladder = HeightLadder::geometric(&q("64"), &q("2"), Some(3)).unwrap();
        let s = count_case(6, Subgroup::Full, &ladder).unwrap();
        let csv = s.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "D,W,B,total,solvable,excluded");
        assert_eq!(lines.len(), 4);
        assert!(lines[3].starts_with("6,AL,64,"));
    }
}
