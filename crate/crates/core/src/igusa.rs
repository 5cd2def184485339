//! Igusa invariants `j -> [J2 : J4 : J6 : J10]` of the genus-two curves
//! parameterized by the Shimura curves of discriminant 6, 10 and 22, the
//! resulting Igusa height, the special points of each family, and Mobius
//! maps between Hauptmoduln.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arith::ExactRational;
use crate::heights::{
    height_weighted, integer_height_at_most, normalize_integers, WeightVector, WeightedPoint,
};
use crate::poly::IntPoly;
use crate::{Error, Result};

/// Weights of the Igusa invariants `J2, J4, J6, J10`.
pub const IGUSA_WEIGHTS: [u32; 4] = [1, 2, 3, 5];

/// Discriminants with a family in this crate.
pub const DISCRIMINANTS: [u32; 3] = [6, 10, 22];

/// A point `[p : q]` of `P^1(Q)` in lowest terms with `q >= 0`; `oo = [1 : 0]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectiveRational {
    p: BigInt,
    q: BigInt,
}

impl ProjectiveRational {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (mut p, mut q): (BigInt, BigInt) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return Err(Error::InvalidArgument("[0 : 0] is not a point".into()));
        }
        if q.is_zero() {
            return Ok(Self::infinity());
        }
        let g = p.gcd(&q);
        p /= &g;
        q /= &g;
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        Ok(ProjectiveRational { p, q })
    }

    pub fn zero() -> Self {
        ProjectiveRational {
            p: BigInt::zero(),
            q: BigInt::one(),
        }
    }

    pub fn infinity() -> Self {
        ProjectiveRational {
            p: BigInt::one(),
            q: BigInt::zero(),
        }
    }

    pub fn from_rational(x: &ExactRational) -> Self {
        ProjectiveRational {
            p: x.numer().clone(),
            q: x.denom().clone(),
        }
    }

    pub fn from_i64(n: i64) -> Self {
        ProjectiveRational {
            p: BigInt::from(n),
            q: BigInt::one(),
        }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn is_infinity(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }

    pub fn to_rational(&self) -> Option<ExactRational> {
        if self.is_infinity() {
            None
        } else {
            Some(ExactRational::new(self.p.clone(), self.q.clone()).expect("q > 0"))
        }
    }

    /// `max(|p|, |q|)`.
    pub fn naive_height(&self) -> BigInt {
        self.p.abs().max(self.q.clone())
    }

    /// The point `1/j`.
    pub fn inverse(&self) -> Self {
        Self::new(self.q.clone(), self.p.clone()).expect("valid point")
    }
}

impl fmt::Display for ProjectiveRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "oo")
        } else if self.q.is_one() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl FromStr for ProjectiveRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "oo" | "inf" | "infinity" => Ok(Self::infinity()),
            t => Ok(Self::from_rational(&t.parse()?)),
        }
    }
}

impl Serialize for ProjectiveRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The Igusa map of one family together with its special points.
#[derive(Clone, Debug, Serialize)]
pub struct IgusaFamily {
    pub discriminant: u32,
    /// Degree `delta` of the map: `J_i` is homogenized to degree `delta * w_i`.
    pub delta: u32,
    /// `J2, J4, J6, J10` as polynomials in `j`.
    pub polys: [IntPoly; 4],
    /// Rational `j` with `J10(j) = 0`.
    pub degenerate_roots: Vec<ProjectiveRational>,
    /// Rational `j` whose curve has extra automorphisms.
    pub excluded: Vec<ProjectiveRational>,
    /// Irrational points with extra automorphisms, as minimal-polynomial descriptions.
    pub irrational_special: Vec<String>,
}

fn p(c: &[i64]) -> IntPoly {
    IntPoly::from_i64(c)
}

fn rationals(v: &[(i64, i64)]) -> Vec<ProjectiveRational> {
    v.iter()
        .map(|&(a, b)| ProjectiveRational::new(a, b).expect("nonzero denominator"))
        .collect()
}

impl IgusaFamily {
    pub fn new(discriminant: u32) -> Result<Self> {
        let (delta, polys, excluded, irrational) = match discriminant {
            6 => (
                1,
                [
                    p(&[12, 12]),
                    p(&[6, 6, 6]),
                    p(&[4, 0, -8, 4]),
                    p(&[0, 0, 0, 1]),
                ],
                rationals(&[(-16, 27), (81, 64)]),
                vec![],
            ),
            10 => (
                2,
                [
                    p(&[12, -16, 12]),
                    p(&[6, -16, 6, -16, 6]),
                    p(&[4, -16, -8, 32, 0, -16, 4]),
                    p(&[0, 0, 0, 0, 1]),
                ],
                vec![],
                vec![],
            ),
            22 => {
                let j6a = p(&[-1, -4, -6, -3, -3, 1]);
                let j6b = p(&[-1, 0, 12, 17, -36, -89, -87, -69, -9, 5, 1]);
                let j10 = p(&[-1, 1])
                    .pow(4)
                    .mul(&IntPoly::x().pow(6))
                    .mul(&p(&[1, 1]).pow(12))
                    .scale(&BigInt::from(-1));
                (
                    5,
                    [
                        p(&[3, 4, 10, 23, 5, 3]).scale(&BigInt::from(4)),
                        p(&[3, 8, 4, 27, 120, 261, 251, 57, 27, 7, 3]).scale(&BigInt::from(2)),
                        j6a.mul(&j6b).scale(&BigInt::from(-4)),
                        j10,
                    ],
                    rationals(&[(1, 3), (4, 1), (-11, 16)]),
                    vec![
                        "j = (2377a + 506)/99 with 121 + 1210a + 2377a^2 = 0".to_string(),
                        "j = (3664b + 627)/99 with 121 + 1331b + 3664b^2 = 0".to_string(),
                        "j = (732304c^2 + 296340c + 29645)/1089 with 1331 + 37389c + 296340c^2 + 732304c^3 = 0"
                            .to_string(),
                    ],
                )
            }
            d => return Err(Error::UnknownDiscriminant(d)),
        };
        let degenerate_roots = polys[3]
            .rational_roots()
            .iter()
            .map(ProjectiveRational::from_rational)
            .collect();
        Ok(IgusaFamily {
            discriminant,
            delta,
            polys,
            degenerate_roots,
            excluded,
            irrational_special: irrational,
        })
    }

    /// Adds excluded points (used to supply values not shipped by default).
    pub fn with_extra_exclusions(mut self, extra: &[ProjectiveRational]) -> Self {
        for e in extra {
            if !self.excluded.contains(e) {
                self.excluded.push(e.clone());
            }
        }
        self.excluded.sort();
        self
    }

    /// Homogenization degrees `delta * w_i`.
    pub fn degrees(&self) -> [usize; 4] {
        IGUSA_WEIGHTS.map(|w| (self.delta * w) as usize)
    }

    /// True when `j` is `0`, `oo`, or a root of `J10`.
    pub fn is_degenerate(&self, j: &ProjectiveRational) -> bool {
        j.is_zero() || j.is_infinity() || self.degenerate_roots.contains(j)
    }

    pub fn is_excluded(&self, j: &ProjectiveRational) -> bool {
        self.excluded.contains(j)
    }

    /// Homogenized values `J_i(p, q)` before normalization.
    pub fn raw_invariants(&self, j: &ProjectiveRational) -> [BigInt; 4] {
        let deg = self.degrees();
        [0, 1, 2, 3].map(|i| self.polys[i].eval_homogeneous(j.p(), j.q(), deg[i]))
    }

    /// Canonical integer representative of `J(j)` in `P(1,2,3,5)`.
    pub fn invariants(&self, j: &ProjectiveRational) -> Result<[BigInt; 4]> {
        if self.is_degenerate(j) {
            return Err(Error::DegenerateCurve(j.clone()));
        }
        let raw = self.raw_invariants(j);
        if raw[3].is_zero() {
            return Err(Error::DegenerateCurve(j.clone()));
        }
        let n = normalize_integers(&raw, &IGUSA_WEIGHTS);
        Ok([n[0].clone(), n[1].clone(), n[2].clone(), n[3].clone()])
    }

    pub fn igusa_point(&self, j: &ProjectiveRational) -> Result<WeightedPoint> {
        let x = self.invariants(j)?;
        WeightedPoint::new(
            x.into_iter().map(ExactRational::from_integer).collect(),
            WeightVector::igusa(),
        )
    }

    pub fn height(&self, j: &ProjectiveRational) -> Result<f64> {
        Ok(height_weighted(&self.igusa_point(j)?))
    }

    /// Exact test `Ht(J(j)) <= bound`.
    pub fn height_at_most(&self, j: &ProjectiveRational, bound: &ExactRational) -> Result<bool> {
        let x = self.invariants(j)?;
        Ok(integer_height_at_most(&x, &IGUSA_WEIGHTS, bound))
    }
}

/// `J(j)` in `P(1,2,3,5)` for the family of discriminant `d`, normalized.
pub fn igusa_of_j(d: u32, j: &ProjectiveRational) -> Result<WeightedPoint> {
    IgusaFamily::new(d)?.igusa_point(j)
}

/// `Ht(J(j))`.
pub fn igusa_height_of_j(d: u32, j: &ProjectiveRational) -> Result<f64> {
    IgusaFamily::new(d)?.height(j)
}

/// Whether a normalized Igusa point is one of the stacky points of
/// `P(1,2,3,5)` (exactly one nonzero coordinate among `J4, J6, J10` and `J2 = 0`).
pub fn is_stacky(x: &[BigInt; 4]) -> bool {
    x[0].is_zero() && x[1..].iter().filter(|c| !c.is_zero()).count() == 1
}

/// Special points of the family of discriminant `d`: rational values and
/// descriptions of the irrational ones.
pub fn special_points(d: u32) -> Result<(Vec<ProjectiveRational>, Vec<String>)> {
    let f = IgusaFamily::new(d)?;
    Ok((f.excluded, f.irrational_special))
}

/// `j = (a t + b) / (c t + d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MobiusMap {
    pub a: ExactRational,
    pub b: ExactRational,
    pub c: ExactRational,
    pub d: ExactRational,
}

type Mat = [[ExactRational; 2]; 2];

fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    let e = |i: usize, k: usize| &(&x[i][0] * &y[0][k]) + &(&x[i][1] * &y[1][k]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn adjugate(x: &Mat) -> Mat {
    [
        [x[1][1].clone(), -x[0][1].clone()],
        [-x[1][0].clone(), x[0][0].clone()],
    ]
}

/// Matrix sending `z1, z2, z3` to `0, 1, oo`.
fn to_standard(z: &[ProjectiveRational; 3]) -> Mat {
    let r = |pt: &ProjectiveRational| {
        (
            ExactRational::from_integer(pt.p().clone()),
            ExactRational::from_integer(pt.q().clone()),
        )
    };
    let (x1, y1) = r(&z[0]);
    let (x2, y2) = r(&z[1]);
    let (x3, y3) = r(&z[2]);
    // L_i(x, y) = y_i x - x_i y vanishes exactly at z_i
    let l = |xi: &ExactRational, yi: &ExactRational| &(yi * &x2) - &(xi * &y2);
    let l1z2 = l(&x1, &y1);
    let l3z2 = l(&x3, &y3);
    [
        [&l3z2 * &y1, -(&l3z2 * &x1)],
        [&l1z2 * &y3, -(&l1z2 * &x3)],
    ]
}

impl MobiusMap {
    pub fn identity() -> Self {
        MobiusMap {
            a: ExactRational::one(),
            b: ExactRational::zero(),
            c: ExactRational::zero(),
            d: ExactRational::one(),
        }
    }

    fn from_matrix(m: &Mat) -> Result<Self> {
        let det = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
        if det.is_zero() {
            return Err(Error::DegenerateTriple);
        }
        // Scale to coprime integers with the first nonzero of (c, d) positive.
        let entries = [&m[0][0], &m[0][1], &m[1][0], &m[1][1]];
        let l = entries.iter().fold(BigInt::one(), |l, e| l.lcm(e.denom()));
        let ints: Vec<BigInt> = entries
            .iter()
            .map(|e| (*e * &ExactRational::from_integer(l.clone())).numer().clone())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let lead = if ints[2].is_zero() { &ints[3] } else { &ints[2] };
        if lead.is_negative() {
            g = -g;
        }
        let v: Vec<ExactRational> = ints
            .iter()
            .map(|x| ExactRational::from_integer(x / &g))
            .collect();
        Ok(MobiusMap {
            a: v[0].clone(),
            b: v[1].clone(),
            c: v[2].clone(),
            d: v[3].clone(),
        })
    }

    pub fn determinant(&self) -> ExactRational {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn apply(&self, t: &ProjectiveRational) -> ProjectiveRational {
        let x = ExactRational::from_integer(t.p().clone());
        let y = ExactRational::from_integer(t.q().clone());
        let num = &(&self.a * &x) + &(&self.b * &y);
        let den = &(&self.c * &x) + &(&self.d * &y);
        // clear denominators of the pair
        let l = num.denom().lcm(den.denom());
        let lq = ExactRational::from_integer(l);
        ProjectiveRational::new((&num * &lq).numer().clone(), (&den * &lq).numer().clone())
            .expect("nonzero determinant keeps the image a point")
    }
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "j = ({}) / ({})", linear(&self.a, &self.b), linear(&self.c, &self.d))
    }
}

/// `a t + b` with zero terms dropped and signs folded in.
fn linear(a: &ExactRational, b: &ExactRational) -> String {
    let t = match a {
        a if a.is_zero() => String::new(),
        a if *a == ExactRational::one() => "t".into(),
        a if -a.clone() == ExactRational::one() => "-t".into(),
        a => format!("{a} t"),
    };
    match (t.is_empty(), b) {
        (true, b) => b.to_string(),
        (false, b) if b.is_zero() => t,
        (false, b) if b.is_negative() => format!("{t} - {}", -b.clone()),
        (false, b) => format!("{t} + {b}"),
    }
}

/// The unique Mobius map with `j(t_i) = j_i` for three pairs `(t_i, j_i)`.
pub fn mobius_from_three_pairs(
    pairs: &[(ProjectiveRational, ProjectiveRational); 3],
) -> Result<MobiusMap> {
    let t = [pairs[0].0.clone(), pairs[1].0.clone(), pairs[2].0.clone()];
    let j = [pairs[0].1.clone(), pairs[1].1.clone(), pairs[2].1.clone()];
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        if t[a] == t[b] || j[a] == j[b] {
            return Err(Error::DegenerateTriple);
        }
    }
    let mt = to_standard(&t);
    let mj = to_standard(&j);
    MobiusMap::from_matrix(&mat_mul(&adjugate(&mj), &mt))
}

/// The Hauptmodul relation on the discriminant-22 curve, fitted from the
/// CM values `(t, j)`: `(1, oo)`, `(27/16, 1)`, `(oo, 0)`.
pub fn hauptmodul_relation_22() -> Result<MobiusMap> {
    let pr = |a: i64, b: i64| ProjectiveRational::new(a, b).expect("valid");
    mobius_from_three_pairs(&[
        (pr(1, 1), ProjectiveRational::infinity()),
        (pr(27, 16), pr(1, 1)),
        (ProjectiveRational::infinity(), pr(0, 1)),
    ])
}

/// Audit export of the three families.
#[derive(Serialize)]
pub struct FamilyRegistryExport {
    pub schema_version: u32,
    pub families: Vec<IgusaFamily>,
}

pub fn family_registry_export() -> FamilyRegistryExport {
    FamilyRegistryExport {
        schema_version: 1,
        families: DISCRIMINANTS
            .iter()
            .map(|&d| IgusaFamily::new(d).expect("known discriminant"))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(a: i64, b: i64) -> ProjectiveRational {
        ProjectiveRational::new(a, b).unwrap()
    }

    fn ints(x: &[BigInt]) -> Vec<i64> {
        x.iter().map(|c| num_traits::ToPrimitive::to_i64(c).unwrap()).collect()
    }

    #[test]
    fn projective_points() {
        assert_eq!(pr(6, -4), pr(-3, 2));
        assert_eq!(pr(-5, 0), ProjectiveRational::infinity());
        assert!(ProjectiveRational::new(0, 0).is_err());
        assert_eq!(pr(-3, 2).naive_height(), BigInt::from(3));
        assert_eq!("oo".parse::<ProjectiveRational>().unwrap(), ProjectiveRational::infinity());
        assert_eq!("-16/27".parse::<ProjectiveRational>().unwrap(), pr(-16, 27));
        assert_eq!(pr(2, 3).inverse(), pr(3, 2));
    }

    #[test]
    fn transcription_checksums() {
        let f = IgusaFamily::new(22).unwrap();
        let deg: Vec<usize> = f.polys.iter().map(|p| p.degree()).collect();
        assert_eq!(deg, vec![5, 10, 15, 22]);
        let lead: Vec<i64> = f.polys.iter().map(|p| num_traits::ToPrimitive::to_i64(&p.leading()).unwrap()).collect();
        assert_eq!(lead, vec![12, 6, -4, -1]);
        // J2(1) = 4 * (3+5+23+10+4+3), J4(1) = 2 * 768
        assert_eq!(f.polys[0].eval(&ExactRational::one()), ExactRational::from_integer(192));
        assert_eq!(f.polys[1].eval(&ExactRational::one()), ExactRational::from_integer(1536));
        let d10 = IgusaFamily::new(10).unwrap();
        assert_eq!(d10.polys[2].degree(), 6);
        for fam in [IgusaFamily::new(6).unwrap(), d10, f] {
            for (p, w) in fam.polys.iter().zip(IGUSA_WEIGHTS) {
                assert!(p.degree() <= (fam.delta * w) as usize);
            }
        }
    }

    #[test]
    fn degenerate_roots() {
        assert_eq!(IgusaFamily::new(6).unwrap().degenerate_roots, vec![pr(0, 1)]);
        assert_eq!(
            IgusaFamily::new(22).unwrap().degenerate_roots,
            vec![pr(-1, 1), pr(0, 1), pr(1, 1)]
        );
    }

    #[test]
    fn evaluation_examples() {
        let x = IgusaFamily::new(6).unwrap().invariants(&pr(1, 1)).unwrap();
        assert_eq!(ints(&x), vec![24, 18, 0, 1]);
        let x = IgusaFamily::new(10).unwrap().invariants(&pr(1, 1)).unwrap();
        assert_eq!(ints(&x), vec![8, -14, 0, 1]);
        assert_eq!(
            igusa_of_j(22, &pr(1, 1)),
            Err(Error::DegenerateCurve(pr(1, 1)))
        );
        assert!(igusa_of_j(7, &pr(1, 1)).is_err());
        assert!(matches!(igusa_of_j(6, &pr(0, 1)), Err(Error::DegenerateCurve(_))));
        assert!(matches!(
            igusa_of_j(6, &ProjectiveRational::infinity()),
            Err(Error::DegenerateCurve(_))
        ));
        assert!((igusa_height_of_j(6, &pr(1, 1)).unwrap() - 24.0).abs() < 1e-12);
    }

    #[test]
    fn homogenization_with_denominators() {
        // j = 1/2 on D = 6: J2 = 12(p + q), J6 = 4(p^3 - 2p^2 q + q^3), J10 = p^3 q^2
        let f = IgusaFamily::new(6).unwrap();
        let raw = f.raw_invariants(&pr(1, 2));
        assert_eq!(ints(&raw), vec![36, 42, 20, 4]);
        assert!(f.height_at_most(&pr(1, 2), &ExactRational::from_integer(36)).unwrap());
        assert!(!f.height_at_most(&pr(1, 2), &ExactRational::from_integer(35)).unwrap());
    }

    #[test]
    fn mobius_fits() {
        let m = hauptmodul_relation_22().unwrap();
        let z = ExactRational::zero();
        let i = |n: i64| ExactRational::from_integer(n);
        assert_eq!((m.a.clone(), m.b.clone(), m.c.clone(), m.d.clone()), (z, i(11), i(16), i(-16)));
        assert_eq!(m.apply(&pr(27, 16)), pr(1, 1));
        assert_eq!(m.apply(&pr(1, 1)), ProjectiveRational::infinity());
        assert_eq!(m.apply(&ProjectiveRational::infinity()), pr(0, 1));

        let id = mobius_from_three_pairs(&[
            (pr(0, 1), pr(0, 1)),
            (pr(1, 1), pr(1, 1)),
            (ProjectiveRational::infinity(), ProjectiveRational::infinity()),
        ])
        .unwrap();
        assert_eq!(id, MobiusMap::identity());

        let bad = mobius_from_three_pairs(&[
            (pr(0, 1), pr(0, 1)),
            (pr(0, 1), pr(1, 1)),
            (pr(2, 1), pr(3, 1)),
        ]);
        assert_eq!(bad, Err(Error::DegenerateTriple));
    }

    #[test]
    fn special_point_sets() {
        let (six, _) = special_points(6).unwrap();
        assert_eq!(six, vec![pr(-16, 27), pr(81, 64)]);
        let (tt, irr) = special_points(22).unwrap();
        assert_eq!(tt, vec![pr(1, 3), pr(4, 1), pr(-11, 16)]);
        assert_eq!(irr.len(), 3);
        let (ten, _) = special_points(10).unwrap();
        assert!(ten.is_empty());
        let f = IgusaFamily::new(10).unwrap().with_extra_exclusions(&[pr(1, 4)]);
        assert!(f.is_excluded(&pr(1, 4)));
    }
}
