//! Univariate integer polynomials in `j`: arithmetic, gcd over Q,
//! squarefree decomposition and rational roots.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{factorizer, ExactRational};
use crate::{Error, Result};

/// Integer polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// The polynomial `j`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `a j + b`.
    pub fn linear(a: i64, b: i64) -> Self {
        Self::from_i64(&[b, a])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree; the zero polynomial has degree 0 here, check `is_zero` first.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (k, b) in other.coeffs.iter().enumerate() {
                out[i + k] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        (0..e).fold(IntPoly::constant(1), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k)
                .collect(),
        )
    }

    /// Composition `self(g(j))`.
    pub fn compose(&self, g: &IntPoly) -> IntPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(IntPoly::zero(), |acc, c| acc.mul(g).add(&IntPoly::constant(c.clone())))
    }

    /// `j^d F(1/j)` with `d = deg F`.
    pub fn reversed(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPoly::new(c)
    }

    /// Homogeneous evaluation `sum c_k p^k q^(d-k)` for a chosen total degree `d >= deg`.
    pub fn eval_homogeneous(&self, p: &BigInt, q: &BigInt, d: usize) -> BigInt {
        debug_assert!(self.is_zero() || d >= self.degree());
        if self.is_zero() {
            return BigInt::zero();
        }
        let n = self.degree();
        let mut acc = BigInt::zero();
        let mut qk = BigInt::one();
        // sum c_k p^k q^(n-k), accumulated from the top coefficient down
        for k in (0..=n).rev() {
            acc = acc * p + &self.coeffs[k] * &qk;
            if k > 0 {
                qk *= q;
            }
        }
        acc * num_traits::pow(q.clone(), d - n)
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        self.coeffs.iter().rev().fold(ExactRational::zero(), |acc, c| {
            &(&acc * x) + &ExactRational::from_integer(c.clone())
        })
    }

    /// Pseudo-remainder of `self` by `d`.
    fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let mut r = self.clone();
        let ld = d.leading();
        while !r.is_zero() && r.degree() >= d.degree() {
            let shift = r.degree() - d.degree();
            let lr = r.leading();
            let mut t = vec![BigInt::zero(); shift];
            t.extend(d.coeffs.iter().map(|c| c * &lr));
            r = r.scale(&ld).sub(&IntPoly::new(t));
        }
        r
    }

    /// Exact quotient in Z[j]. Errors unless `d` divides `self` with integral quotient.
    pub fn div_exact(&self, d: &IntPoly) -> Result<IntPoly> {
        if d.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        // Long division over Q with rational coefficients.
        let mut rem: Vec<ExactRational> = self
            .coeffs
            .iter()
            .map(|c| ExactRational::from_integer(c.clone()))
            .collect();
        let ld = ExactRational::from_integer(d.leading());
        let dd = d.degree();
        if self.is_zero() {
            return Ok(IntPoly::zero());
        }
        if self.degree() < dd {
            return Err(Error::InvalidArgument("divisor does not divide".into()));
        }
        let mut quo = vec![ExactRational::zero(); self.degree() - dd + 1];
        for k in (0..quo.len()).rev() {
            let c = &rem[k + dd] / &ld;
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &(&c * &ExactRational::from_integer(dc.clone()));
            }
            quo[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InvalidArgument("divisor does not divide".into()));
        }
        let l = quo.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let lq = ExactRational::from_integer(l.clone());
        let coeffs = quo.iter().map(|c| (c * &lq).numer().clone()).collect();
        let q = IntPoly::new(coeffs);
        if l.is_one() {
            Ok(q)
        } else {
            Err(Error::InvalidArgument(format!(
                "quotient is not integral (denominator {l})"
            )))
        }
    }

    /// Quotient over Q up to a nonzero constant, as a primitive polynomial.
    pub fn div_primitive(&self, d: &IntPoly) -> Result<IntPoly> {
        let a = self.primitive_part();
        let b = d.primitive_part();
        // lc(b)^k a is divisible by b over Z.
        let k = a.degree() + 1 - b.degree().min(a.degree());
        let scaled = a.scale(&num_traits::pow(b.leading(), k));
        Ok(scaled.div_exact(&b)?.primitive_part())
    }

    /// Greatest common divisor over Q, primitive with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    /// Squarefree decomposition: primitive `s_k` with `self = c * prod s_k^k`,
    /// listing only nonconstant `s_k`.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(IntPoly, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        // a_i = gcd(a_{i-1}, a_{i-1}') = prod_{k > i} s_k^{k-i};
        // b_i = a_{i-1}/a_i = prod_{k >= i} s_k; s_i = b_i / b_{i+1}.
        let mut a_prev = self.primitive_part();
        let mut b_prev: Option<IntPoly> = None;
        let mut out = Vec::new();
        let mut i = 0u32;
        loop {
            let a_next = if a_prev.degree() == 0 {
                IntPoly::constant(1)
            } else {
                a_prev.gcd(&a_prev.derivative())
            };
            let b = a_prev.div_primitive(&a_next)?;
            if let Some(bp) = b_prev.take() {
                let s = bp.div_primitive(&b)?;
                if s.degree() > 0 {
                    out.push((s, i));
                }
            }
            i += 1;
            if b.degree() == 0 {
                break;
            }
            b_prev = Some(b);
            a_prev = a_next;
        }
        Ok(out)
    }

    /// Rational roots, ascending, each listed once.
    pub fn rational_roots(&self) -> Vec<ExactRational> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut f = self.primitive_part();
        let mut roots = Vec::new();
        let mut k = 0;
        while f.coeff(k).is_zero() {
            k += 1;
        }
        if k > 0 {
            roots.push(ExactRational::zero());
            f = IntPoly::new(f.coeffs[k..].to_vec());
        }
        if f.degree() == 0 {
            return roots;
        }
        let nums = divisors(&f.coeff(0));
        let dens = divisors(&f.leading());
        for d in &dens {
            for n in &nums {
                if n.gcd(d) != BigInt::one() {
                    continue;
                }
                for s in [n.clone(), -n.clone()] {
                    if f.eval_homogeneous(&s, d, f.degree()).is_zero() {
                        roots.push(ExactRational::new(s, d.clone()).expect("nonzero divisor"));
                    }
                }
            }
        }
        roots.sort();
        roots.dedup();
        roots
    }

    /// Multiplicity of `p/q` as a root.
    pub fn root_multiplicity(&self, r: &ExactRational) -> u32 {
        let lin = IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
        let mut f = self.primitive_part();
        let mut m = 0;
        while !f.is_zero() && f.degree() > 0 && f.pseudo_rem(&lin).is_zero() {
            f = f.div_primitive(&lin).expect("divides");
            m += 1;
        }
        m
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, e) in factorizer().factor_big(n.magnitude()) {
        let p = BigInt::from(p);
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    out
}

impl PartialOrd for IntPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// By degree, then coefficients from the top down.
impl Ord for IntPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = k == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "j")?,
                _ => write!(f, "j^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPoly {
    /// Ascending coefficient list; entries outside i64 are written as strings.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn arithmetic_and_display() {
        let a = p(&[1, 1]); // j + 1
        let b = p(&[-1, 1]); // j - 1
        assert_eq!(a.mul(&b), p(&[-1, 0, 1]));
        assert_eq!(p(&[16, 27]).to_string(), "27j + 16");
        assert_eq!(p(&[1, 0, -2, 1]).to_string(), "j^3 - 2j^2 + 1");
        assert!(p(&[0, 0, 0]).is_zero());
        assert_eq!(p(&[3, 2, 1]).derivative(), p(&[2, 2]));
        assert_eq!(p(&[0, 1, 2]).reversed(), p(&[2, 1]));
    }

    #[test]
    fn homogeneous_evaluation() {
        // 27j + 16 at j = 2/3 with degree 1: 27*2 + 16*3
        let f = p(&[16, 27]);
        assert_eq!(f.eval_homogeneous(&BigInt::from(2), &BigInt::from(3), 1), BigInt::from(102));
        // padded to degree 3: extra q^2
        assert_eq!(f.eval_homogeneous(&BigInt::from(2), &BigInt::from(3), 3), BigInt::from(918));
        assert_eq!(p(&[5]).eval_homogeneous(&BigInt::from(2), &BigInt::from(3), 2), BigInt::from(45));
        assert_eq!(
            f.eval(&ExactRational::new(2, 3).unwrap()),
            ExactRational::from_integer(34)
        );
    }

    #[test]
    fn gcd_and_division() {
        let a = p(&[-1, 1]).mul(&p(&[16, 27])).mul(&p(&[1, 0, 1]));
        let b = p(&[16, 27]).mul(&p(&[2, 1])).scale(&BigInt::from(6));
        assert_eq!(a.gcd(&b), p(&[16, 27]));
        assert_eq!(a.div_primitive(&p(&[16, 27])).unwrap(), p(&[-1, 1]).mul(&p(&[1, 0, 1])));
        assert!(p(&[1, 0, 1]).div_exact(&p(&[1, 1])).is_err());
    }

    #[test]
    fn squarefree_decomposition_recovers_multiplicities() {
        let s1 = p(&[16, 27]);
        let s2 = p(&[0, 1]);
        let s3 = p(&[1, 1, 1]);
        let f = s1.mul(&s2.pow(2)).mul(&s3.pow(3)).scale(&BigInt::from(-12));
        let d = f.squarefree_decomposition().unwrap();
        assert_eq!(d, vec![(s1, 1), (s2, 2), (s3, 3)]);
        assert!(p(&[5]).squarefree_decomposition().unwrap().is_empty());
        assert!(IntPoly::zero().squarefree_decomposition().is_err());
    }

    #[test]
    fn rational_root_search() {
        // j^3 - 2j^2 + 1 = (j - 1)(j^2 - j - 1)
        assert_eq!(p(&[1, 0, -2, 1]).rational_roots(), vec![ExactRational::one()]);
        let f = p(&[16, 27]).mul(&p(&[0, 1]));
        assert_eq!(
            f.rational_roots(),
            vec![ExactRational::new(-16, 27).unwrap(), ExactRational::zero()]
        );
        let g = p(&[-1, 1]).pow(4).mul(&p(&[1, 1]));
        assert_eq!(g.root_multiplicity(&ExactRational::one()), 4);
        assert_eq!(g.root_multiplicity(&ExactRational::from_integer(2)), 0);
    }
}
