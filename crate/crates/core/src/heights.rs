//! Points of weighted projective space over Q and their height.
//!
//! A point `[x_0 : ... : x_n]` of `P(w_0, ..., w_n)` is identified with its
//! scalings `[l^{w_0} x_0 : ... : l^{w_n} x_n]`. The canonical representative
//! has integral coordinates, no prime `p` with `p^{w_i} | x_i` for every
//! nonzero `x_i`, and a positive first nonzero odd-weight coordinate. On it the
//! height is `max |x_i|^{1/w_i}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{factorizer, ExactRational};
use crate::{Error, Result};

/// Weights `(w_0, ..., w_n)`, all at least 1, `n >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WeightVector(Vec<u32>);

impl WeightVector {
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        if weights.len() < 2 || weights.contains(&0) {
            return Err(Error::InvalidPoint(format!("bad weight vector {weights:?}")));
        }
        Ok(WeightVector(weights))
    }

    /// The weights `(1, 2, 3, 5)` of the Igusa invariants.
    pub fn igusa() -> Self {
        WeightVector(vec![1, 2, 3, 5])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lcm(&self) -> u32 {
        self.0.iter().fold(1, |l, &w| l.lcm(&w))
    }
}

/// A point of `P(w)(Q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WeightedPoint {
    coords: Vec<ExactRational>,
    weights: WeightVector,
}

impl WeightedPoint {
    pub fn new(coords: Vec<ExactRational>, weights: WeightVector) -> Result<Self> {
        if coords.len() != weights.len() {
            return Err(Error::InvalidPoint(format!(
                "{} coordinates for {} weights",
                coords.len(),
                weights.len()
            )));
        }
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidPoint("all coordinates are zero".into()));
        }
        Ok(WeightedPoint { coords, weights })
    }

    /// Convenience constructor from integers.
    pub fn from_integers(coords: &[i64], weights: &[u32]) -> Result<Self> {
        Self::new(
            coords.iter().map(|&c| ExactRational::from_integer(c)).collect(),
            WeightVector::new(weights.to_vec())?,
        )
    }

    pub fn coords(&self) -> &[ExactRational] {
        &self.coords
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    /// The representative scaled by `lambda`: `x_i -> lambda^{w_i} x_i`.
    pub fn scaled(&self, lambda: &ExactRational) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let coords = self
            .coords
            .iter()
            .zip(self.weights.as_slice())
            .map(|(x, &w)| x * &lambda.pow(w as i32))
            .collect();
        Ok(WeightedPoint {
            coords,
            weights: self.weights.clone(),
        })
    }

    /// Integer coordinates; only meaningful on a normalized point.
    pub fn integer_coords(&self) -> Vec<BigInt> {
        self.coords.iter().map(|c| c.numer().clone()).collect()
    }
}

impl fmt::Display for WeightedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " : ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Canonical representative of a weighted point given by integer coordinates.
pub fn normalize_integers(coords: &[BigInt], weights: &[u32]) -> Vec<BigInt> {
    let mut x: Vec<BigInt> = coords.to_vec();
    let g = x
        .iter()
        .filter(|c| !c.is_zero())
        .fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_one() && !g.is_zero() {
        for (p, _) in factorizer().factor_big(g.magnitude()) {
            let p = BigInt::from(p);
            let e = x
                .iter()
                .zip(weights)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, &w)| valuation(c, &p) / w)
                .min()
                .unwrap_or(0);
            if e > 0 {
                for (c, &w) in x.iter_mut().zip(weights) {
                    *c /= num_traits::pow(p.clone(), (e * w) as usize);
                }
            }
        }
    }
    let flip = x
        .iter()
        .zip(weights)
        .find(|(c, &w)| w % 2 == 1 && !c.is_zero())
        .is_some_and(|(c, _)| c.is_negative());
    if flip {
        for (c, &w) in x.iter_mut().zip(weights) {
            if w % 2 == 1 {
                *c = -c.clone();
            }
        }
    }
    x
}

fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// The canonical representative: integral, w-primitive, sign-normalized.
pub fn weighted_normalize(pt: &WeightedPoint) -> WeightedPoint {
    // Scaling by the lcm of the denominators makes every coordinate integral.
    let l = pt
        .coords
        .iter()
        .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let scaled = pt
        .scaled(&ExactRational::from_integer(l))
        .expect("lcm of denominators is nonzero");
    let ints = normalize_integers(&scaled.integer_coords(), pt.weights.as_slice());
    WeightedPoint {
        coords: ints.into_iter().map(ExactRational::from_integer).collect(),
        weights: pt.weights.clone(),
    }
}

/// The coordinate attaining the height of a normalized point, as `(index, |x_i|)`.
/// Ties go to the lowest index.
pub fn attaining_coordinate(pt: &WeightedPoint) -> (usize, BigInt) {
    let n = weighted_normalize(pt);
    let w = n.weights.as_slice();
    let l = n.weights.lcm();
    let mut best: Option<(usize, BigInt, BigInt)> = None;
    for (i, c) in n.coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let a = c.numer().abs();
        let key = num_traits::pow(a.clone(), (l / w[i]) as usize);
        if best.as_ref().is_none_or(|(_, _, k)| key > *k) {
            best = Some((i, a, key));
        }
    }
    let (i, a, _) = best.expect("a valid point has a nonzero coordinate");
    (i, a)
}

fn ln_big(n: &BigInt) -> f64 {
    match n.to_f64() {
        Some(f) if f.is_finite() => f.ln(),
        _ => {
            let bits = n.bits();
            let shift = bits.saturating_sub(64);
            let top = (n.abs() >> shift).to_f64().unwrap_or(f64::MAX);
            top.ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

/// `Ht_w(pt) = max_i |x_i|^{1/w_i}` on the canonical representative.
pub fn height_weighted(pt: &WeightedPoint) -> f64 {
    let (i, a) = attaining_coordinate(pt);
    let w = pt.weights.as_slice()[i];
    match a.to_f64() {
        Some(f) if f.is_finite() && w == 1 => f,
        Some(f) if f.is_finite() => f.powf(1.0 / w as f64),
        _ => (ln_big(&a) / w as f64).exp(),
    }
}

/// Exact test of `Ht_w(pt) <= bound` for a rational bound.
pub fn height_at_most(pt: &WeightedPoint, bound: &ExactRational) -> bool {
    if bound.is_negative() || bound.is_zero() {
        return false;
    }
    let n = weighted_normalize(pt);
    integer_height_at_most(&n.integer_coords(), n.weights.as_slice(), bound)
}

/// `max |x_i|^{1/w_i} <= n/d`, decided as `|x_i| d^{w_i} <= n^{w_i}`.
pub fn integer_height_at_most(x: &[BigInt], weights: &[u32], bound: &ExactRational) -> bool {
    let (num, den) = (bound.numer(), bound.denom());
    x.iter().zip(weights).all(|(c, &w)| {
        c.is_zero()
            || c.abs() * num_traits::pow(den.clone(), w as usize)
                <= num_traits::pow(num.clone(), w as usize)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[i64], w: &[u32]) -> WeightedPoint {
        WeightedPoint::from_integers(c, w).unwrap()
    }

    fn ints(p: &WeightedPoint) -> Vec<i64> {
        p.integer_coords().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn normalization_examples() {
        let w = [1, 2, 3, 5];
        assert_eq!(ints(&weighted_normalize(&pt(&[4, 16, 64, 1024], &w))), vec![1, 1, 1, 1]);
        assert_eq!(ints(&weighted_normalize(&pt(&[1, 1, 1, 1], &w))), vec![1, 1, 1, 1]);
        assert_eq!(ints(&weighted_normalize(&pt(&[0, 4, 0, 0], &w))), vec![0, 1, 0, 0]);
        assert_eq!(ints(&weighted_normalize(&pt(&[-3, 4, 0, 0], &w))), vec![3, 4, 0, 0]);
        // only even weights nonzero: sign untouched
        assert_eq!(ints(&weighted_normalize(&pt(&[0, -4, 0, 0], &w))), vec![0, -1, 0, 0]);
    }

    #[test]
    fn rational_input() {
        let x = WeightedPoint::new(
            vec![
                ExactRational::new(1, 2).unwrap(),
                ExactRational::new(1, 4).unwrap(),
                ExactRational::zero(),
                ExactRational::new(3, 32).unwrap(),
            ],
            WeightVector::igusa(),
        )
        .unwrap();
        assert_eq!(ints(&weighted_normalize(&x)), vec![1, 1, 0, 3]);
    }

    #[test]
    fn height_examples() {
        let w = [1, 2, 3, 5];
        assert_eq!(height_weighted(&pt(&[1, 1, 1, 1], &w)), 1.0);
        assert!((height_weighted(&pt(&[3, 4, 0, 0], &w)) - 3.0).abs() < 1e-12);
        assert_eq!(height_weighted(&pt(&[-7, 5], &[1, 1])), 7.0);
        assert!((height_weighted(&pt(&[24, 18, 0, 1], &w)) - 24.0).abs() < 1e-12);
    }

    #[test]
    fn exact_thresholds() {
        let w = [1, 2, 3, 5];
        let p = pt(&[3, 4, 0, 0], &w);
        assert!(height_at_most(&p, &ExactRational::from_integer(3)));
        assert!(!height_at_most(&p, &"299/100".parse().unwrap()));
        let p = pt(&[1, 10, 0, 0], &w); // sqrt(10) ~ 3.1623
        assert!(height_at_most(&p, &"31623/10000".parse().unwrap()));
        assert!(!height_at_most(&p, &"31622/10000".parse().unwrap()));
        assert_eq!(attaining_coordinate(&p), (1, BigInt::from(10)));
    }

    #[test]
    fn invalid_points() {
        assert!(WeightedPoint::from_integers(&[0, 0], &[1, 2]).is_err());
        assert!(WeightedPoint::from_integers(&[1, 0], &[1, 2, 3]).is_err());
        assert!(WeightVector::new(vec![1, 0]).is_err());
        assert!(WeightVector::new(vec![1]).is_err());
    }
}
