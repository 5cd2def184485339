//! Asymptotic forms `c B^alpha log(B)^beta`: the product rule for counting
//! pairs by the product of their heights, a Monte Carlo check of that rule,
//! and regression of empirical count series onto such a form.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use statrs::function::gamma::{checked_gamma_ur, ln_gamma};

use crate::arith::ExactRational;
use crate::{Error, Result};

/// `c B^alpha log(B)^beta`, with `c` possibly unknown.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticForm {
    #[serde(serialize_with = "serialize_constant")]
    pub c: Option<f64>,
    pub alpha: ExactRational,
    pub beta: ExactRational,
}

fn serialize_constant<S: Serializer>(c: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match c {
        Some(v) => s.serialize_f64(*v),
        None => s.serialize_str("unknown"),
    }
}

impl AsymptoticForm {
    pub fn new(c: Option<f64>, alpha: ExactRational, beta: ExactRational) -> Result<Self> {
        if alpha.is_negative() {
            return Err(Error::InvalidArgument(format!("negative exponent alpha = {alpha}")));
        }
        if let Some(c) = c {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidArgument(format!("constant must be positive, got {c}")));
            }
        }
        Ok(AsymptoticForm { c, alpha, beta })
    }

    /// Shorthand for tests and examples: `(c, alpha, beta)` with `alpha`, `beta` as strings.
    pub fn parse(c: Option<f64>, alpha: &str, beta: &str) -> Result<Self> {
        Self::new(c, alpha.parse()?, beta.parse()?)
    }

    /// `c B^alpha log(B)^beta`, if `c` is known.
    pub fn evaluate(&self, b: f64) -> Option<f64> {
        let c = self.c?;
        Some(c * b.powf(self.alpha.to_f64()) * b.ln().powf(self.beta.to_f64()))
    }

    pub fn exponents(&self) -> (ExactRational, ExactRational) {
        (self.alpha.clone(), self.beta.clone())
    }
}

impl fmt::Display for AsymptoticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.c {
            Some(c) => write!(f, "{c:.6}")?,
            None => write!(f, "c")?,
        }
        write!(f, " B^{} log(B)^{}", self.alpha, self.beta)
    }
}

/// `B(z1, z2) = Gamma(z1) Gamma(z2) / Gamma(z1 + z2)`.
pub fn beta_function(z1: f64, z2: f64) -> Result<f64> {
    if !(z1 > 0.0 && z2 > 0.0) || !z1.is_finite() || !z2.is_finite() {
        return Err(Error::InvalidArgument(format!("beta function needs positive arguments, got ({z1}, {z2})")));
    }
    Ok((ln_gamma(z1) + ln_gamma(z2) - ln_gamma(z1 + z2)).exp())
}

/// Asymptotic of `#{(x, y) : Ht_X(x) Ht_Y(y) <= B}` from those of `X` and `Y`.
///
/// With `alpha_X >= alpha_Y > 0`: equal exponents give
/// `B(beta_Y + 1, beta_X + 1) c_X c_Y alpha_X B^alpha log(B)^(beta_X + beta_Y + 1)`,
/// which needs `beta_Y >= 0` for one of the two orderings; distinct exponents give
/// `c_X c_Y alpha_Y S B^alpha_X log(B)^beta_X` with
/// `S = sum_k log(k)^beta_Y / k^(alpha_X - alpha_Y + 1)`. When `beta_Y < 0`
/// there the exponents still hold but the constant is reported unknown.
pub fn product_combine(x: &AsymptoticForm, y: &AsymptoticForm) -> Result<AsymptoticForm> {
    let zero = ExactRational::zero();
    if x.alpha <= zero || y.alpha <= zero {
        return Err(Error::HypothesesViolated("both exponents alpha must be positive".into()));
    }
    let known = |a: &AsymptoticForm, b: &AsymptoticForm| a.c.zip(b.c);
    if x.alpha == y.alpha {
        let minus_one = -ExactRational::one();
        let (bx, by) = [(x, y), (y, x)]
            .into_iter()
            .find(|(a, b)| b.beta >= zero && a.beta > minus_one)
            .ok_or_else(|| {
                Error::HypothesesViolated(format!(
                    "equal alpha = {} needs one beta >= 0 and the other > -1, got {} and {}",
                    x.alpha, x.beta, y.beta
                ))
            })?;
        let beta = &(&bx.beta + &by.beta) + &ExactRational::one();
        let c = match known(bx, by) {
            Some((cx, cy)) => {
                let b = beta_function(by.beta.to_f64() + 1.0, bx.beta.to_f64() + 1.0)?;
                Some(b * cx * cy * bx.alpha.to_f64())
            }
            None => None,
        };
        return AsymptoticForm::new(c, bx.alpha.clone(), beta);
    }
    let (big, small) = if x.alpha > y.alpha { (x, y) } else { (y, x) };
    let c = match known(big, small) {
        Some((cx, cy)) if small.beta >= zero => {
            let s = (&big.alpha - &small.alpha).to_f64() + 1.0;
            Some(cx * cy * small.alpha.to_f64() * log_power_series(s, small.beta.to_f64())?)
        }
        _ => None,
    };
    AsymptoticForm::new(c, big.alpha.clone(), big.beta.clone())
}

fn log_term(k: f64, s: f64, beta: f64) -> f64 {
    if beta == 0.0 {
        k.powf(-s)
    } else {
        k.ln().powf(beta) * k.powf(-s)
    }
}

/// `sum_{k >= 1} log(k)^beta / k^s` for `s > 1`, `beta >= 0` (with `0^0 = 1`),
/// to relative accuracy well below `1e-8`.
///
/// Direct summation to `N`, then the tail by Euler-Maclaurin:
/// `sum_{k >= N} f(k) = int_N^oo f + f(N)/2 - f'(N)/12 + ...`, where
/// `int_N^oo log(x)^beta x^-s dx = Gamma(beta + 1, (s - 1) log N) / (s - 1)^(beta + 1)`.
pub fn log_power_series(s: f64, beta: f64) -> Result<f64> {
    if !(s > 1.0) || !(beta >= 0.0) {
        return Err(Error::InvalidArgument(format!("series needs s > 1 and beta >= 0, got s = {s}, beta = {beta}")));
    }
    const N: u32 = 20_000;
    let head: f64 = (1..N).map(|k| log_term(k as f64, s, beta)).rev().sum();
    let n = N as f64;
    let ln_n = n.ln();
    let a = beta + 1.0;
    let upper = checked_gamma_ur(a, (s - 1.0) * ln_n)
        .map_err(|e| Error::InvalidArgument(format!("incomplete gamma: {e}")))?;
    let integral = upper * (ln_gamma(a) - a * (s - 1.0).ln()).exp();
    // f'(x) = x^(-s-1) (beta log^(beta-1) x - s log^beta x)
    let deriv = n.powf(-s - 1.0) * (beta * ln_n.powf(beta - 1.0) - s * ln_n.powf(beta));
    Ok(head + integral + log_term(n, s, beta) / 2.0 - deriv / 12.0)
}

/// Cumulative synthetic count `ceil(c k^alpha l(k)^beta)` with `l(k) = log k`
/// for `k >= 3` and `1` below, so negative `beta` stays finite.
fn synthetic_total(spec: &AsymptoticForm, c: f64, k: u64) -> u64 {
    let kf = k as f64;
    let l = if k >= 3 { kf.ln() } else { 1.0 };
    (c * kf.powf(spec.alpha.to_f64()) * l.powf(spec.beta.to_f64())).ceil() as u64
}

/// Largest number of heights a synthesized sequence may hold in memory.
pub const MATERIALIZE_BUDGET: u64 = 20_000_000;
/// Largest number of heights a streamed sequence may produce.
pub const STREAM_BUDGET: u64 = 2_000_000_000;

/// Streams the synthetic heights of `spec` in increasing order up to `bound`.
///
/// Bucket `k` receives enough new elements to bring the running total to
/// the synthetic count at `k`, placed uniformly in `(k - 1, k]` and clamped
/// below at 1 (heights are at least 1).
fn stream_heights(spec: &AsymptoticForm, bound: f64, seed: u64, mut visit: impl FnMut(f64)) -> Result<()> {
    let c = spec
        .c
        .ok_or_else(|| Error::InvalidArgument("synthesis needs a known constant".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut placed = 0u64;
    let mut bucket = Vec::new();
    let last = bound.floor() as u64 + 1;
    for k in 1..=last {
        let target = synthetic_total(spec, c, k).max(placed);
        bucket.clear();
        for _ in placed..target {
            let h: f64 = (k as f64 - rng.gen::<f64>()).max(1.0);
            bucket.push(h);
        }
        placed = target;
        bucket.sort_by(f64::total_cmp);
        for &h in &bucket {
            if h > bound {
                return Ok(());
            }
            visit(h);
        }
    }
    Ok(())
}

fn synthesis_size(spec: &AsymptoticForm, bound: f64) -> u64 {
    match spec.c {
        Some(c) => synthetic_total(spec, c, bound.ceil() as u64),
        None => u64::MAX,
    }
}

/// All synthetic heights of `spec` up to `bound`, sorted.
pub fn synthesize_heights(spec: &AsymptoticForm, bound: f64, seed: u64) -> Result<Vec<f64>> {
    let size = synthesis_size(spec, bound);
    if size > MATERIALIZE_BUDGET {
        return Err(Error::InvalidArgument(format!(
            "synthesis of {spec} up to {bound} needs {size} heights, budget {MATERIALIZE_BUDGET}"
        )));
    }
    let mut out = Vec::with_capacity(size as usize);
    stream_heights(spec, bound, seed, |h| out.push(h))?;
    Ok(out)
}

/// `#{(x, y) : x y <= b}` for two ascending sequences of heights.
pub fn product_count(xs: &[f64], ys: &[f64], b: f64) -> u64 {
    let mut total = 0u64;
    let mut hi = ys.len();
    for &x in xs {
        while hi > 0 && x * ys[hi - 1] > b {
            hi -= 1;
        }
        if hi == 0 {
            break;
        }
        total += hi as u64;
    }
    total
}

/// `|observed / predicted - 1|` for the product count of synthetic sequences
/// realizing `x` and `y` at bound `b`, averaged over `trials` seeds.
pub fn montecarlo_product_check(x: &AsymptoticForm, y: &AsymptoticForm, b: f64, trials: u32) -> Result<f64> {
    if trials == 0 || !(b >= 1.0) {
        return Err(Error::InvalidArgument("need at least one trial and B >= 1".into()));
    }
    let predicted = product_combine(x, y)?
        .evaluate(b)
        .ok_or_else(|| Error::InvalidArgument("prediction needs known constants".into()))?;
    // the smaller sequence is held in memory, the larger one streamed past it
    let (held, streamed) = if synthesis_size(x, b) <= synthesis_size(y, b) { (x, y) } else { (y, x) };
    if synthesis_size(streamed, b) > STREAM_BUDGET {
        return Err(Error::InvalidArgument(format!("synthesis of {streamed} up to {b} exceeds the budget")));
    }
    let deviations = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed = 2 * u64::from(t);
            let ys = synthesize_heights(held, b, seed)?;
            let mut hi = ys.len();
            let mut observed = 0u64;
            stream_heights(streamed, b, seed + 1, |h| {
                while hi > 0 && h * ys[hi - 1] > b {
                    hi -= 1;
                }
                observed += hi as u64;
            })?;
            Ok((observed as f64 / predicted - 1.0).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(deviations.iter().sum::<f64>() / f64::from(trials))
}

/// Result of regressing a count series onto `c B^alpha log(B)^beta`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitReport {
    pub schema_version: u32,
    /// Least-squares slope of `log N` against `log B` on the window.
    pub alpha_hat: f64,
    /// `log N` regressed jointly on `log B` and `log log B`; exact on clean
    /// power-times-log data, unstable on noisy counts.
    pub alpha_joint: Option<f64>,
    /// Slope of `log N - beta log log B` against `log B` for an assumed `beta`.
    pub alpha_corrected: Option<f64>,
    pub beta_assumed: Option<f64>,
    /// The alpha frozen for the beta regression (fixed, or `alpha_hat`).
    pub alpha_used: f64,
    pub beta_hat: f64,
    pub residual: f64,
    pub window: (f64, f64),
    pub points: usize,
    pub note: String,
}

/// Least squares of `y` on the columns of `x` (plus an intercept).
fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let m = rows.first()?.len() + 1;
    let mut ata = vec![vec![0.0; m]; m];
    let mut aty = vec![0.0; m];
    for (r, &v) in rows.iter().zip(y) {
        let full: Vec<f64> = std::iter::once(1.0).chain(r.iter().copied()).collect();
        for i in 0..m {
            aty[i] += full[i] * v;
            for j in 0..m {
                ata[i][j] += full[i] * full[j];
            }
        }
    }
    // Gaussian elimination with partial pivoting
    for col in 0..m {
        let piv = (col..m).max_by(|&a, &b| ata[a][col].abs().total_cmp(&ata[b][col].abs()))?;
        if ata[piv][col].abs() < 1e-12 {
            return None;
        }
        ata.swap(col, piv);
        aty.swap(col, piv);
        for r in col + 1..m {
            let f = ata[r][col] / ata[col][col];
            for k in col..m {
                ata[r][k] -= f * ata[col][k];
            }
            aty[r] -= f * aty[col];
        }
    }
    let mut sol = vec![0.0; m];
    for i in (0..m).rev() {
        let s: f64 = (i + 1..m).map(|k| ata[i][k] * sol[k]).sum();
        sol[i] = (aty[i] - s) / ata[i][i];
    }
    Some(sol)
}

/// Fits `(B_i, N_i)` pairs, `B_i` increasing.
///
/// Only points with `N > 0` and `B > e` take part, and of those the top half.
/// `alpha_hat` is the slope of `log N` against `log B`; then with alpha
/// frozen (given, or `alpha_hat`), `log(N / B^alpha)` is regressed on
/// `log log B` for `beta_hat`, whose RMS is the residual.
pub fn fit_points(points: &[(f64, f64)], alpha_fixed: Option<f64>) -> Result<FitReport> {
    fit_points_assuming(points, alpha_fixed, None)
}

/// As [`fit_points`], also reporting the slope once `log(B)^beta_assumed` is divided out.
pub fn fit_points_assuming(
    points: &[(f64, f64)],
    alpha_fixed: Option<f64>,
    beta_assumed: Option<f64>,
) -> Result<FitReport> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(b, n)| n > 0.0 && b > std::f64::consts::E)
        .collect();
    if usable.len() < 5 {
        return Err(Error::InsufficientData(format!(
            "{} usable points with nonzero counts, need 5",
            usable.len()
        )));
    }
    let window = &usable[usable.len() / 2..];
    let lb: Vec<f64> = window.iter().map(|p| p.0.ln()).collect();
    let lln: Vec<f64> = lb.iter().map(|l| l.ln()).collect();
    let ln: Vec<f64> = window.iter().map(|p| p.1.ln()).collect();
    let degenerate = || Error::InsufficientData("degenerate window".into());

    let slope_rows: Vec<Vec<f64>> = lb.iter().map(|&l| vec![l]).collect();
    let alpha_hat = least_squares(&slope_rows, &ln).ok_or_else(degenerate)?[1];
    let alpha_joint = (window.len() >= 4)
        .then(|| {
            let rows: Vec<Vec<f64>> = lb.iter().zip(&lln).map(|(&a, &b)| vec![a, b]).collect();
            least_squares(&rows, &ln).map(|s| s[1])
        })
        .flatten();
    let alpha_corrected = match beta_assumed {
        Some(beta) => {
            let y: Vec<f64> = ln.iter().zip(&lln).map(|(n, l)| n - beta * l).collect();
            Some(least_squares(&slope_rows, &y).ok_or_else(degenerate)?[1])
        }
        None => None,
    };

    let alpha_used = alpha_fixed.unwrap_or(alpha_hat);
    let resid_y: Vec<f64> = ln.iter().zip(&lb).map(|(n, b)| n - alpha_used * b).collect();
    let rows: Vec<Vec<f64>> = lln.iter().map(|&l| vec![l]).collect();
    let s = least_squares(&rows, &resid_y).ok_or_else(degenerate)?;
    let beta_hat = s[1];
    let rss: f64 = lln
        .iter()
        .zip(&resid_y)
        .map(|(l, y)| (y - s[0] - s[1] * l).powi(2))
        .sum();
    let residual = (rss / window.len() as f64).sqrt();
    Ok(FitReport {
        schema_version: 1,
        alpha_hat,
        alpha_joint,
        alpha_corrected,
        beta_assumed,
        alpha_used,
        beta_hat,
        residual,
        window: (window[0].0, window[window.len() - 1].0),
        points: window.len(),
        note: "beta is weakly identifiable at desk-scale B; read it as indicative".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(c: f64, a: &str, b: &str) -> AsymptoticForm {
        AsymptoticForm::parse(Some(c), a, b).unwrap()
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn beta_values() {
        assert!((beta_function(1.0, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((beta_function(1.0, 2.0).unwrap() - 0.5).abs() < 1e-12);
        // t = sin^2 u turns B(1/2, 1/2) into int_0^{pi/2} 2 du
        let quad = simpson(|_| 2.0, 0.0, std::f64::consts::FRAC_PI_2, 1000);
        assert!((beta_function(0.5, 0.5).unwrap() - quad).abs() < 1e-10);
        assert!(beta_function(0.0, 1.0).is_err());
        assert!(beta_function(1.0, -2.0).is_err());
    }

    #[test]
    fn beta_against_quadrature() {
        for (a, b) in [(2.0, 3.0), (1.5, 2.5), (3.0, 1.0)] {
            // t = sin^2 u keeps the integrand smooth at both ends
            let f = |u: f64| 2.0 * u.sin().powf(2.0 * a - 1.0) * u.cos().powf(2.0 * b - 1.0);
            let q = simpson(f, 0.0, std::f64::consts::FRAC_PI_2, 20_000);
            assert!((beta_function(a, b).unwrap() / q - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn combine_exponents() {
        let one = form(1.0, "1", "0");
        let r = product_combine(&one, &one).unwrap();
        assert_eq!(r.exponents(), ("1".parse().unwrap(), "1".parse().unwrap()));
        assert!((r.c.unwrap() - 1.0).abs() < 1e-12);

        let r = product_combine(&form(2.0, "2", "-1"), &form(3.0, "1", "0")).unwrap();
        assert_eq!(r.exponents(), ("2".parse().unwrap(), "-1".parse().unwrap()));
        assert!(r.c.is_some());

        let r = product_combine(&form(1.0, "1", "-1/2"), &one).unwrap();
        assert_eq!(r.exponents(), ("1".parse().unwrap(), "1/2".parse().unwrap()));
        // B(1, 1/2) = 2
        assert!((r.c.unwrap() - 2.0).abs() < 1e-10);

        let r = product_combine(&form(1.0, "2/5", "-1"), &one).unwrap();
        assert_eq!(r.exponents(), ("1".parse().unwrap(), "0".parse().unwrap()));
        assert!(r.c.is_none());
    }

    #[test]
    fn combine_rejects_bad_hypotheses() {
        let neg = form(1.0, "1", "-1/2");
        assert!(matches!(product_combine(&neg, &neg), Err(Error::HypothesesViolated(_))));
        assert!(product_combine(&form(1.0, "0", "0"), &form(1.0, "1", "0")).is_err());
        let below = form(1.0, "1", "-2");
        assert!(product_combine(&below, &form(1.0, "1", "0")).is_err());
    }

    #[test]
    fn combine_is_symmetric() {
        let pairs = [
            (form(2.0, "1", "1"), form(0.5, "1", "2")),
            (form(1.5, "2", "-1"), form(3.0, "1", "1")),
            (form(1.0, "2/5", "0"), form(4.0, "1", "0")),
        ];
        for (x, y) in pairs {
            let a = product_combine(&x, &y).unwrap();
            let b = product_combine(&y, &x).unwrap();
            assert_eq!(a.exponents(), b.exponents());
            assert!((a.c.unwrap() / b.c.unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn series_against_zeta() {
        let z2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((log_power_series(2.0, 0.0).unwrap() / z2 - 1.0).abs() < 1e-10);
        let z4 = std::f64::consts::PI.powi(4) / 90.0;
        assert!((log_power_series(4.0, 0.0).unwrap() / z4 - 1.0).abs() < 1e-10);
        // -zeta'(2) = 0.93754825431584375370...
        assert!((log_power_series(2.0, 1.0).unwrap() / 0.937_548_254_315_843_8 - 1.0).abs() < 1e-9);
        assert!(log_power_series(1.0, 0.0).is_err());
    }

    #[test]
    fn series_against_long_summation() {
        // 10^6 direct terms plus the tail integral by quadrature in u = log x
        for (s, beta) in [(1.5, 0.0), (2.0, 1.0), (2.5, 2.0), (3.0, 1.0)] {
            let n = 1_000_000u32;
            let head: f64 = (1..=n).map(|k| log_term(k as f64, s, beta)).rev().sum();
            let l0 = (n as f64).ln();
            let g = |u: f64| u.powf(beta) * (-(s - 1.0) * u).exp();
            let tail = simpson(g, l0, l0 + 200.0 / (s - 1.0), 200_000)
                - log_term(n as f64, s, beta) / 2.0;
            let direct = head + tail;
            let ours = log_power_series(s, beta).unwrap();
            assert!((ours / direct - 1.0).abs() < 1e-6, "s={s} beta={beta}: {ours} vs {direct}");
        }
    }

    #[test]
    fn single_element_factor() {
        let x = form(1.0, "1", "0");
        let xs = synthesize_heights(&x, 1000.0, 7).unwrap();
        let one = vec![1.0];
        assert_eq!(product_count(&xs, &one, 1000.0), xs.len() as u64);
        assert_eq!(product_count(&one, &xs, 1000.0), xs.len() as u64);
    }

    #[test]
    fn product_count_against_double_loop() {
        let xs = synthesize_heights(&form(1.0, "1", "0"), 300.0, 1).unwrap();
        let ys = synthesize_heights(&form(0.5, "3/2", "1"), 300.0, 2).unwrap();
        for b in [10.0, 77.7, 300.0] {
            let brute = xs
                .iter()
                .map(|x| ys.iter().filter(|y| x * *y <= b).count() as u64)
                .sum::<u64>();
            assert_eq!(product_count(&xs, &ys, b), brute);
        }
    }

    #[test]
    fn synthesis_matches_form() {
        let spec = form(2.0, "1", "0");
        let h = synthesize_heights(&spec, 100.0, 3).unwrap();
        assert_eq!(h.len(), 200);
        assert!(h.windows(2).all(|w| w[0] <= w[1]));
        assert!(h.iter().all(|&v| (1.0..=100.0).contains(&v)));
        assert_eq!(h, synthesize_heights(&spec, 100.0, 3).unwrap());
        let big = form(1.0, "2", "0");
        assert!(synthesize_heights(&big, 1e5, 0).is_err());
    }

    #[test]
    fn montecarlo_small() {
        let one = form(1.0, "1", "0");
        let d = montecarlo_product_check(&one, &one, 1e4, 2).unwrap();
        assert!(d < 0.15, "deviation {d}");
    }

    fn synthetic(alpha: f64, beta: f64, c: f64, top: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut b = top;
        while b >= 1.0 {
            out.push((b, c * b.powf(alpha) * b.ln().powf(beta)));
            b /= 2.0;
        }
        out.reverse();
        out
    }

    #[test]
    fn fit_examples() {
        let pure: Vec<(f64, f64)> = synthetic(2.0, 0.0, 1.0, 1e6).into_iter().map(|(b, _)| (b, (b * b).floor())).collect();
        let r = fit_points(&pure, None).unwrap();
        assert!((1.99..=2.01).contains(&r.alpha_hat), "{r:?}");

        let logged: Vec<(f64, f64)> = pure.iter().map(|&(b, _)| (b, (b * b / b.ln()).floor())).collect();
        let r = fit_points(&logged, Some(2.0)).unwrap();
        assert!((-1.2..=-0.8).contains(&r.beta_hat), "{r:?}");

        let small: Vec<(f64, f64)> = pure.iter().map(|&(b, _)| (b, b.powf(0.4).floor())).collect();
        let r = fit_points(&small, None).unwrap();
        assert!((0.35..=0.45).contains(&r.alpha_hat), "{r:?}");
    }

    #[test]
    fn fit_recovers_alpha() {
        for alpha in [0.4, 1.0, 2.0] {
            for beta in [-1.5, -1.0, -0.5, 0.0, 1.0] {
                for c in [0.1, 1.0, 10.0] {
                    let r = fit_points(&synthetic(alpha, beta, c, 1e6), None).unwrap();
                    let joint = r.alpha_joint.unwrap();
                    assert!((joint - alpha).abs() <= 0.05, "alpha={alpha} beta={beta} c={c}: {r:?}");
                    let r = fit_points_assuming(&synthetic(alpha, beta, c, 1e6), None, Some(beta)).unwrap();
                    assert!((r.alpha_corrected.unwrap() - alpha).abs() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn fit_needs_data() {
        let few = vec![(10.0, 1.0), (20.0, 2.0), (40.0, 0.0), (80.0, 0.0), (160.0, 3.0)];
        assert!(matches!(fit_points(&few, None), Err(Error::InsufficientData(_))));
    }
}
