//! Square classes in `Q(j)^x / (Q(j)^x)^2`.
//!
//! A class is stored as a squarefree integer constant times a product of
//! distinct primitive integer polynomials with positive leading coefficient,
//! pairwise coprime and squarefree. Rational roots are always split off as
//! linear factors `b j - a`; what remains has no rational root.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{ExactRational, SquareClassQ};
use crate::igusa::ProjectiveRational;
use crate::poly::IntPoly;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SquareClassFn {
    constant: SquareClassQ,
    factors: Vec<IntPoly>,
}

impl SquareClassFn {
    pub fn constant(c: SquareClassQ) -> Self {
        SquareClassFn {
            constant: c,
            factors: Vec::new(),
        }
    }

    pub fn constant_i64(c: i64) -> Result<Self> {
        Ok(Self::constant(SquareClassQ::of_i64(c)?))
    }

    pub fn trivial() -> Self {
        Self::constant(SquareClassQ::one())
    }

    /// Class of `c * prod polys`.
    pub fn from_factors(c: SquareClassQ, polys: &[IntPoly]) -> Result<Self> {
        let mut product = IntPoly::constant(1);
        for p in polys {
            if p.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            product = product.mul(p);
        }
        let base = Self::of_polynomial(&product)?;
        Ok(SquareClassFn {
            constant: base.constant.mul(&c),
            factors: base.factors,
        })
    }

    /// Class of a nonzero polynomial: odd-multiplicity squarefree parts with
    /// rational roots split off, content absorbed into the constant.
    pub fn of_polynomial(p: &IntPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let parts = p.squarefree_decomposition()?;
        // p = c * prod s_k^k with every s_k primitive, so c = lc(p) / prod lc(s_k)^k
        let mut denom = BigInt::from(1);
        for (s, k) in &parts {
            denom *= num_traits::pow(s.leading(), *k as usize);
        }
        let c = ExactRational::new(p.leading(), denom).expect("leading coefficients are nonzero");
        let constant = c.squarefree_part()?;
        let mut factors = Vec::new();
        for (s, k) in parts {
            if k % 2 == 0 {
                continue;
            }
            let mut rest = s;
            for r in rest.rational_roots() {
                let lin = IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
                rest = rest.div_primitive(&lin)?;
                factors.push(lin);
            }
            if rest.degree() > 0 {
                factors.push(rest);
            }
        }
        factors.sort();
        Ok(SquareClassFn { constant, factors })
    }

    pub fn constant_part(&self) -> &SquareClassQ {
        &self.constant
    }

    pub fn factors(&self) -> &[IntPoly] {
        &self.factors
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.is_constant() && self.constant.is_trivial()
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|f| f.degree()).sum()
    }

    /// Group law: constants multiply, repeated factors cancel.
    pub fn mul(&self, other: &SquareClassFn) -> SquareClassFn {
        let mut all = self.factors.clone();
        all.extend(other.factors.iter().cloned());
        let c = self.constant.mul(&other.constant);
        Self::from_factors(c, &all).expect("factors of a class are nonzero")
    }

    /// The class of `f(1/j)`.
    pub fn reversed(&self) -> SquareClassFn {
        let mut polys: Vec<IntPoly> = self.factors.iter().map(|f| f.reversed()).collect();
        // f(1/j) = rev(f)(j) / j^deg f
        if self.degree() % 2 == 1 {
            polys.push(IntPoly::x());
        }
        Self::from_factors(self.constant.clone(), &polys).expect("reversal keeps factors nonzero")
    }

    /// Rational points where the class has odd valuation (finite ones).
    pub fn zeros(&self) -> Vec<ExactRational> {
        let mut out: Vec<ExactRational> = self
            .factors
            .iter()
            .filter(|f| f.degree() == 1)
            .map(|f| ExactRational::new(-f.coeff(0), f.coeff(1)).expect("nonzero slope"))
            .collect();
        out.sort();
        out
    }

    pub fn vanishes_at(&self, j: &ExactRational) -> bool {
        self.factors.iter().any(|f| f.eval(j).is_zero())
    }

    /// A representative value `c * prod F_i(j)` at a finite rational point.
    pub fn value_at(&self, j: &ExactRational) -> Option<ExactRational> {
        let mut v = self.constant.to_rational();
        for f in &self.factors {
            let fv = f.eval(j);
            if fv.is_zero() {
                return None;
            }
            v = &v * &fv;
        }
        Some(v)
    }

    /// The square class at `j`, or `None` where a factor vanishes. At `oo`
    /// the class is that of `f(1/t)` at `t = 0`.
    pub fn evaluate(&self, j: &ProjectiveRational) -> Option<SquareClassQ> {
        if j.is_infinity() {
            return self.reversed().evaluate(&ProjectiveRational::zero());
        }
        let (p, q) = (j.p(), j.q());
        let mut c = self.constant.clone();
        let mut total = 0usize;
        for f in &self.factors {
            let v = f.eval_homogeneous(p, q, f.degree());
            if v.is_zero() {
                return None;
            }
            total += f.degree();
            c = c.mul(&SquareClassQ::of_integer(&v).ok()?);
        }
        if total % 2 == 1 {
            c = c.mul(&SquareClassQ::of_integer(q).ok()?);
        }
        Some(c)
    }
}

impl fmt::Display for SquareClassFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for p in &self.factors {
            write!(f, "*({p})")?;
        }
        Ok(())
    }
}
