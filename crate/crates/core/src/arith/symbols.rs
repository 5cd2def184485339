//! Square classes of nonzero rationals, Legendre and Hilbert symbols over Q,
//! and splitting of places in quadratic fields.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::factor::{factorizer, pow_mod};
use crate::arith::ExactRational;
use crate::{Error, Result};

/// A place of Q: a finite prime or the real place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlaceQ {
    Finite(u64),
    Infinite,
}

impl PlaceQ {
    /// Finite place at `p`, checking primality.
    pub fn finite(p: u64) -> Result<Self> {
        if factorizer().is_prime_u64(p) {
            Ok(PlaceQ::Finite(p))
        } else {
            Err(Error::NotPrime(p as i64))
        }
    }
}

impl fmt::Display for PlaceQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceQ::Finite(p) => write!(f, "{p}"),
            PlaceQ::Infinite => write!(f, "oo"),
        }
    }
}

impl Serialize for PlaceQ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Class of a nonzero rational modulo squares, stored as a sign and the
/// sorted list of primes in its squarefree representative.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SquareClassQ {
    negative: bool,
    primes: Vec<u64>,
}

impl SquareClassQ {
    pub fn one() -> Self {
        SquareClassQ::default()
    }

    pub fn minus_one() -> Self {
        SquareClassQ {
            negative: true,
            primes: Vec::new(),
        }
    }

    pub fn of_i64(n: i64) -> Result<Self> {
        Self::of_integer(&BigInt::from(n))
    }

    pub fn of_integer(n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let mag = n.magnitude();
        let mut primes = Vec::new();
        for (p, e) in factorizer().factor_big(mag) {
            if e % 2 == 1 {
                let p = p.to_u64().ok_or_else(|| {
                    Error::InvalidArgument(format!("prime factor {p} exceeds 64 bits"))
                })?;
                primes.push(p);
            }
        }
        Ok(SquareClassQ {
            negative: n.sign() == Sign::Minus,
            primes,
        })
    }

    pub fn of_rational(x: &ExactRational) -> Result<Self> {
        x.squarefree_part()
    }

    /// Builds a class from a sign and a list of primes (duplicates cancel).
    pub fn from_parts(negative: bool, primes: impl IntoIterator<Item = u64>) -> Self {
        let mut v: Vec<u64> = primes.into_iter().collect();
        v.sort_unstable();
        let mut out: Vec<u64> = Vec::with_capacity(v.len());
        for p in v {
            if out.last() == Some(&p) {
                out.pop();
            } else {
                out.push(p);
            }
        }
        SquareClassQ {
            negative,
            primes: out,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn is_trivial(&self) -> bool {
        !self.negative && self.primes.is_empty()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }

    pub fn mul(&self, other: &SquareClassQ) -> SquareClassQ {
        let mut out = Vec::with_capacity(self.primes.len() + other.primes.len());
        let (a, b) = (&self.primes, &other.primes);
        let (mut i, mut k) = (0, 0);
        while i < a.len() || k < b.len() {
            if k == b.len() || (i < a.len() && a[i] < b[k]) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[k] < a[i] {
                out.push(b[k]);
                k += 1;
            } else {
                i += 1;
                k += 1;
            }
        }
        SquareClassQ {
            negative: self.negative != other.negative,
            primes: out,
        }
    }

    /// The squarefree integer representing the class.
    pub fn value(&self) -> BigInt {
        let mut v = BigInt::one();
        for &p in &self.primes {
            v *= p;
        }
        if self.negative {
            -v
        } else {
            v
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.value().to_i64()
    }

    pub fn to_rational(&self) -> ExactRational {
        ExactRational::from_integer(self.value())
    }

    /// The representative with the prime `p` removed, reduced mod `m`.
    fn unit_part_mod(&self, p: u64, m: u64) -> u64 {
        let mut r = 1u64 % m;
        for &q in &self.primes {
            if q != p {
                r = ((r as u128 * (q % m) as u128) % m as u128) as u64;
            }
        }
        if self.negative && r != 0 {
            r = m - r;
        }
        r
    }
}

impl fmt::Display for SquareClassQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Serialize for SquareClassQ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn legendre_residue(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Legendre symbol `(a|p)` for an odd prime `p`.
pub fn legendre(a: impl Into<BigInt>, p: u64) -> Result<i8> {
    if p.is_multiple_of(2) || !factorizer().is_prime_u64(p) {
        return Err(Error::NotOddPrime(p as i64));
    }
    let r = a.into() % BigInt::from(p);
    let r = if r.is_negative() { r + p } else { r };
    Ok(legendre_residue(r.to_u64().unwrap_or(0), p))
}

/// Hilbert symbol computed on square classes.
pub fn hilbert_class(a: &SquareClassQ, b: &SquareClassQ, v: PlaceQ) -> i8 {
    match v {
        PlaceQ::Infinite => {
            if a.negative && b.negative {
                -1
            } else {
                1
            }
        }
        PlaceQ::Finite(2) => {
            let (al, be) = (a.contains(2) as u64, b.contains(2) as u64);
            let u = a.unit_part_mod(2, 8);
            let w = b.unit_part_mod(2, 8);
            let eps = |x: u64| ((x - 1) / 2) % 2;
            let omega = |x: u64| ((x * x - 1) / 8) % 2;
            let e = eps(u) * eps(w) + al * omega(w) + be * omega(u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        PlaceQ::Finite(p) => {
            let (al, be) = (a.contains(p) as u64, b.contains(p) as u64);
            if al == 0 && be == 0 {
                return 1;
            }
            let mut s: i8 = if (al * be * ((p - 1) / 2)) % 2 == 1 { -1 } else { 1 };
            if be == 1 {
                s *= legendre_residue(a.unit_part_mod(p, p), p);
            }
            if al == 1 {
                s *= legendre_residue(b.unit_part_mod(p, p), p);
            }
            s
        }
    }
}

/// Local Hilbert symbol `(a, b)_v`: +1 iff `z^2 = a x^2 + b y^2` has a
/// nontrivial solution over the completion of Q at `v`.
pub fn hilbert_local(a: &ExactRational, b: &ExactRational, v: PlaceQ) -> Result<i8> {
    let sa = a.squarefree_part()?;
    let sb = b.squarefree_part()?;
    Ok(hilbert_class(&sa, &sb, v))
}

/// Places where `hilbert_class(a, b, v) = -1`, ascending with the real place last.
pub fn ramified_places(a: &SquareClassQ, b: &SquareClassQ) -> Vec<PlaceQ> {
    let mut candidates: Vec<u64> = a.primes.iter().chain(b.primes.iter()).copied().collect();
    candidates.push(2);
    candidates.sort_unstable();
    candidates.dedup();
    let mut out: Vec<PlaceQ> = candidates
        .into_iter()
        .map(PlaceQ::Finite)
        .filter(|&v| hilbert_class(a, b, v) == -1)
        .collect();
    if hilbert_class(a, b, PlaceQ::Infinite) == -1 {
        out.push(PlaceQ::Infinite);
    }
    out
}

/// Set of places where the quaternion algebra `(a, b | Q)` ramifies.
pub fn hilbert_ramified_set(a: &ExactRational, b: &ExactRational) -> Result<Vec<PlaceQ>> {
    Ok(ramified_places(&a.squarefree_part()?, &b.squarefree_part()?))
}

/// True iff `z^2 = a x^2 + b y^2` has a nontrivial rational solution.
pub fn hilbert_global_solvable(a: &ExactRational, b: &ExactRational) -> Result<bool> {
    Ok(hilbert_ramified_set(a, b)?.is_empty())
}

/// Class form of [`hilbert_global_solvable`]. The real place and 2 are
/// checked first since they are the cheapest and most often decisive.
pub fn class_solvable(a: &SquareClassQ, b: &SquareClassQ) -> bool {
    if hilbert_class(a, b, PlaceQ::Infinite) == -1 {
        return false;
    }
    // By the product formula one place may be skipped; skip 2.
    for &p in a.primes.iter().chain(b.primes.iter()) {
        if p != 2 && hilbert_class(a, b, PlaceQ::Finite(p)) == -1 {
            return false;
        }
    }
    true
}

/// Behaviour of a place of Q in a quadratic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// How the place `v` decomposes in `Q(sqrt d)`, for squarefree `d` not in {0, 1}.
pub fn place_splitting(d: i64, v: PlaceQ) -> Result<Splitting> {
    check_field_parameter(d)?;
    Ok(match v {
        PlaceQ::Infinite => {
            if d > 0 {
                Splitting::Split
            } else {
                Splitting::Ramified
            }
        }
        PlaceQ::Finite(2) => match d.rem_euclid(8) {
            1 => Splitting::Split,
            5 => Splitting::Inert,
            _ => Splitting::Ramified,
        },
        PlaceQ::Finite(p) => match legendre_residue(d.rem_euclid(p as i64) as u64, p) {
            0 => Splitting::Ramified,
            1 => Splitting::Split,
            _ => Splitting::Inert,
        },
    })
}

fn check_field_parameter(d: i64) -> Result<()> {
    if d == 0 || d == 1 {
        return Err(Error::NotSquarefree(d));
    }
    let f = factorizer().factor_u64(d.unsigned_abs());
    if f.iter().any(|&(_, e)| e > 1) {
        return Err(Error::NotSquarefree(d));
    }
    Ok(())
}

/// True iff the symbol `(a, b)` becomes trivial over `Q(sqrt d)`: no place
/// ramified in `(a, b | Q)` splits in the quadratic field.
pub fn splits_over_quadratic(a: &ExactRational, b: &ExactRational, d: i64) -> Result<bool> {
    check_field_parameter(d)?;
    for v in hilbert_ramified_set(a, b)? {
        if place_splitting(d, v)? == Splitting::Split {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Local solvability of `z^2 = a x^2 + b y^2` at a finite prime by direct
/// search for primitive solutions modulo a prime power. Independent of the
/// closed-form symbol; used as its oracle.
///
/// Valuations are first reduced mod 2 by absorbing `p^2` into `x` or `y`.
/// With `v_p(a), v_p(b) <= 1`, a primitive solution modulo `p^3` (odd `p`)
/// or `2^5` lifts to a `p`-adic one.
pub fn hilbert_local_bruteforce(a: &BigInt, b: &BigInt, p: u64) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if !factorizer().is_prime_u64(p) {
        return Err(Error::NotPrime(p as i64));
    }
    let k = if p == 2 { 5 } else { 3 };
    let m = p.pow(k);
    let reduce = |x: &BigInt| -> u64 {
        let p2 = BigInt::from(p * p);
        let mut x = x.clone();
        while (&x % &p2).is_zero() {
            x /= &p2;
        }
        let r = x % BigInt::from(m);
        let r = if r.is_negative() { r + m } else { r };
        r.to_u64().unwrap_or(0)
    };
    let (a, b) = (reduce(a), reduce(b));
    Ok(if primitive_solution_exists(a, b, p, m) {
        1
    } else {
        -1
    })
}

fn primitive_solution_exists(a: u64, b: u64, p: u64, m: u64) -> bool {
    let mut is_square = vec![false; m as usize];
    for z in 0..m {
        is_square[((z * z) % m) as usize] = true;
    }
    let form = |x: u64, y: u64| ((a * x % m * x + b * y % m * y) % m) as usize;
    // x a unit: scale x to 1
    if (0..m).any(|y| is_square[form(1, y)]) {
        return true;
    }
    // p | x, y a unit: scale y to 1
    if (0..m).step_by(p as usize).any(|x| is_square[form(x, 1)]) {
        return true;
    }
    // p | x, p | y, z a unit: z^2 = a x^2 + b y^2 = 0 mod p is impossible
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> ExactRational {
        ExactRational::from_integer(n)
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn places(v: &[u64]) -> Vec<PlaceQ> {
        v.iter().map(|&p| PlaceQ::Finite(p)).collect()
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre(1, 7).unwrap(), 1);
        assert_eq!(legendre(2, 7).unwrap(), 1);
        assert_eq!(legendre(3, 5).unwrap(), -1);
        assert_eq!(legendre(10, 5).unwrap(), 0);
        assert_eq!(legendre(-1, 7).unwrap(), -1);
        assert!(legendre(3, 2).is_err());
        assert!(legendre(3, 9).is_err());
    }

    #[test]
    fn legendre_matches_square_table() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
            for a in 1..p {
                let expected = if squares.contains(&a) { 1 } else { -1 };
                assert_eq!(legendre(a as i64, p).unwrap(), expected, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn local_symbol_examples() {
        for v in [PlaceQ::Infinite, PlaceQ::Finite(2), PlaceQ::Finite(3)] {
            assert_eq!(hilbert_local(&q(1), &q(-7), v).unwrap(), 1);
        }
        assert_eq!(hilbert_local(&q(-6), &q(2), PlaceQ::Finite(3)).unwrap(), -1);
        assert_eq!(hilbert_local(&q(-1), &q(-1), PlaceQ::Infinite).unwrap(), -1);
        assert_eq!(hilbert_local(&q(-1), &q(-1), PlaceQ::Finite(2)).unwrap(), -1);
        assert_eq!(hilbert_local(&q(2), &q(3), PlaceQ::Finite(2)).unwrap(), -1);
        assert_eq!(hilbert_local(&q(0), &q(3), PlaceQ::Finite(2)), Err(Error::ZeroArgument));
    }

    #[test]
    fn quaternion_discriminants() {
        let ram = |a, b| hilbert_ramified_set(&q(a), &q(b)).unwrap();
        assert_eq!(ram(-6, 2), places(&[2, 3]));
        assert_eq!(ram(-10, 5), places(&[2, 5]));
        assert_eq!(ram(-22, 2), places(&[2, 11]));
        assert_eq!(ram(-1, -1), vec![PlaceQ::Finite(2), PlaceQ::Infinite]);
        assert!(ram(1, 17).is_empty());
    }

    #[test]
    fn global_solvability() {
        assert!(!hilbert_global_solvable(&q(-6), &q(2)).unwrap());
        assert!(hilbert_global_solvable(&q(2), &q(7)).unwrap());
        assert!(hilbert_global_solvable(&q(49), &q(-3)).unwrap());
        let sa = SquareClassQ::of_i64(-10).unwrap();
        let sb = SquareClassQ::of_i64(5).unwrap();
        assert!(!class_solvable(&sa, &sb));
    }

    #[test]
    fn quadratic_splitting() {
        let (a, b) = (q(-6), q(2));
        assert!(splits_over_quadratic(&a, &b, -6).unwrap());
        // 2 and 3 are inert in Q(sqrt 5) and the real place is unramified
        assert!(splits_over_quadratic(&a, &b, 5).unwrap());
        assert!(!splits_over_quadratic(&a, &b, 7).unwrap()); // 3 splits: 7 = 1 mod 3
        assert!(splits_over_quadratic(&q(1), &q(13), 3).unwrap());
        assert!(splits_over_quadratic(&q(-22), &q(2), -11).unwrap());
        assert_eq!(splits_over_quadratic(&a, &b, 12), Err(Error::NotSquarefree(12)));
        assert_eq!(splits_over_quadratic(&a, &b, 1), Err(Error::NotSquarefree(1)));
    }

    #[test]
    fn splitting_types() {
        assert_eq!(place_splitting(5, PlaceQ::Finite(2)).unwrap(), Splitting::Inert);
        assert_eq!(place_splitting(-7, PlaceQ::Finite(2)).unwrap(), Splitting::Split);
        assert_eq!(place_splitting(3, PlaceQ::Finite(2)).unwrap(), Splitting::Ramified);
        assert_eq!(place_splitting(5, PlaceQ::Finite(11)).unwrap(), Splitting::Split);
        assert_eq!(place_splitting(-1, PlaceQ::Infinite).unwrap(), Splitting::Ramified);
    }

    #[test]
    fn bruteforce_oracle_spot_checks() {
        assert_eq!(hilbert_local_bruteforce(&big(-6), &big(2), 3).unwrap(), -1);
        assert_eq!(hilbert_local_bruteforce(&big(-1), &big(-1), 2).unwrap(), -1);
        assert_eq!(hilbert_local_bruteforce(&big(-1), &big(-1), 3).unwrap(), 1);
        assert_eq!(hilbert_local_bruteforce(&big(2), &big(7), 7).unwrap(), 1);
    }

    #[test]
    fn class_arithmetic() {
        let a = SquareClassQ::of_i64(-18).unwrap();
        let b = SquareClassQ::of_i64(6).unwrap();
        assert_eq!(a.to_i64(), Some(-2));
        assert_eq!(a.mul(&b).to_i64(), Some(-3));
        assert!(a.mul(&a).is_trivial());
        assert_eq!(SquareClassQ::from_parts(true, [3, 2, 3]).to_i64(), Some(-2));
    }
}
