//! Mestre obstructions on the Atkin-Lehner quotients, moved onto the j-line.
//!
//! Each quotient is described by two coordinates of its canonical ring, the
//! expression of `j` in them, and the obstruction symbol written in those
//! coordinates. Every non-constant factor ("atom") of the symbol comes with a
//! forcing rule: the square class it must take at a rational point, as a
//! function of `j`, and the quantity that is a square there because of a
//! ring relation. Composing the rules gives the symbol as a pair of
//! [`SquareClassFn`]s, from which the degenerate fibers and `Delta` follow.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::arith::{class_solvable, ramified_places, ExactRational as Q, SquareClassQ};
use crate::asymptotics::AsymptoticForm;
use crate::igusa::{special_points, IgusaFamily, ProjectiveRational, DISCRIMINANTS};
use crate::poly::IntPoly;
use crate::sqclass::SquareClassFn;
use crate::{Error, Result};

/// A subgroup of the Atkin-Lehner group `{1, w_p, w_q, w_D}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subgroup {
    Identity,
    /// `<w_m>` for a divisor `m > 1` of `D`.
    Involution(u32),
    Full,
}

impl Subgroup {
    /// The five subgroups for discriminant `d`, in a fixed order.
    pub fn all_for(d: u32) -> Result<Vec<Subgroup>> {
        let (p, q) = prime_pair(d)?;
        Ok(vec![
            Subgroup::Identity,
            Subgroup::Involution(p),
            Subgroup::Involution(q),
            Subgroup::Involution(d),
            Subgroup::Full,
        ])
    }

    pub fn is_valid_for(&self, d: u32) -> bool {
        match self {
            Subgroup::Involution(m) => prime_pair(d).is_ok_and(|(p, q)| [p, q, d].contains(m)),
            _ => DISCRIMINANTS.contains(&d),
        }
    }

    pub fn parse_for(s: &str, d: u32) -> Result<Subgroup> {
        let w: Subgroup = s.parse().map_err(|_| Error::UnknownSubgroup(s.to_string(), d))?;
        if !DISCRIMINANTS.contains(&d) {
            return Err(Error::UnknownDiscriminant(d));
        }
        if !w.is_valid_for(d) {
            return Err(Error::UnknownSubgroup(s.to_string(), d));
        }
        Ok(w)
    }
}

fn prime_pair(d: u32) -> Result<(u32, u32)> {
    match d {
        6 => Ok((2, 3)),
        10 => Ok((2, 5)),
        22 => Ok((2, 11)),
        _ => Err(Error::UnknownDiscriminant(d)),
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subgroup::Identity => write!(f, "id"),
            Subgroup::Involution(m) => write!(f, "w{m}"),
            Subgroup::Full => write!(f, "AL"),
        }
    }
}

impl FromStr for Subgroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches(['<', '{']).trim_end_matches(['>', '}']).to_ascii_lowercase();
        match t.as_str() {
            "id" | "1" | "identity" => Ok(Subgroup::Identity),
            "al" | "full" => Ok(Subgroup::Full),
            _ => t
                .strip_prefix('w')
                .and_then(|m| m.parse::<u32>().ok())
                .filter(|&m| m > 1)
                .map(Subgroup::Involution)
                .ok_or_else(|| Error::UnknownSubgroup(s.to_string(), 0)),
        }
    }
}

impl Serialize for Subgroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

type CoordFn = fn(&Q, &Q) -> Option<Q>;

fn n(v: i64) -> Q {
    Q::from_integer(v)
}

fn div(a: Q, b: Q) -> Option<Q> {
    if b.is_zero() {
        None
    } else {
        Some(&a / &b)
    }
}

/// One non-constant factor of a coordinate symbol and the class it is forced into.
struct AtomRule {
    name: &'static str,
    value: CoordFn,
    forced_constant: i64,
    forced_factors: &'static [&'static [i64]],
    relation: &'static str,
    /// A quantity that is a rational square at rational points of the quotient;
    /// `value * forced(j) * witness` is a square identically.
    witness: CoordFn,
}

impl AtomRule {
    fn forced(&self) -> SquareClassFn {
        let polys: Vec<IntPoly> = self.forced_factors.iter().map(|c| IntPoly::from_i64(c)).collect();
        let c = SquareClassQ::of_i64(self.forced_constant).expect("forced constants are nonzero");
        SquareClassFn::from_factors(c, &polys).expect("forced factors are nonzero")
    }
}

struct Slot {
    constant: i64,
    atoms: &'static [&'static str],
}

struct CaseModel {
    coords: [&'static str; 2],
    row: [&'static str; 2],
    j_of: CoordFn,
    a: Slot,
    b: Slot,
    atoms: Vec<AtomRule>,
}

fn one(_: &Q, _: &Q) -> Option<Q> {
    Some(Q::one())
}

fn first(x: &Q, _: &Q) -> Option<Q> {
    Some(x.clone())
}

fn second(_: &Q, y: &Q) -> Option<Q> {
    Some(y.clone())
}

const J: &[i64] = &[0, 1];

fn atom_j(name: &'static str, relation: &'static str) -> AtomRule {
    AtomRule {
        name,
        value: first,
        forced_constant: 1,
        forced_factors: &[J],
        relation,
        witness: one,
    }
}

// D = 6: j = 16 h6^4 / (9 h4^6); base symbol (-6j, -2(27j + 16)).

fn j6_h4h6(x: &Q, y: &Q) -> Option<Q> {
    div(&n(16) * &y.pow(4), &n(9) * &x.pow(6))
}

fn j6_sq_h6(x: &Q, y: &Q) -> Option<Q> {
    div(&n(16) * &y.pow(4), &n(9) * &x.pow(3))
}

fn j6_sq_sq(x: &Q, y: &Q) -> Option<Q> {
    div(&n(16) * &y.pow(2), &n(9) * &x.pow(3))
}

fn j6_h4_sq(x: &Q, y: &Q) -> Option<Q> {
    div(&n(16) * &y.pow(2), &n(9) * &x.pow(6))
}

fn w6_relation(x: &Q, y: &Q) -> Option<Q> {
    Some(-(y * &(&(&n(3) * &y.pow(2)) + &x.pow(6))))
}

fn al6_relation(x: &Q, y: &Q) -> Option<Q> {
    Some(-(&(x * y) * &(&(&n(3) * &y.pow(2)) + &x.pow(3))))
}

const NEG_27J_16: &[&[i64]] = &[&[16, 27]];

fn model6(w: Subgroup) -> CaseModel {
    let constant = |a: i64, b: i64| (Slot { constant: a, atoms: &[] }, Slot { constant: b, atoms: &[] });
    match w {
        Subgroup::Identity => {
            let (a, b) = constant(-6, 2);
            CaseModel { coords: ["h4", "h6"], row: ["-6", "2"], j_of: j6_h4h6, a, b, atoms: vec![] }
        }
        Subgroup::Involution(2) => CaseModel {
            coords: ["x = h4^2", "y = h6"],
            row: ["-6x", "2"],
            j_of: j6_sq_h6,
            a: Slot { constant: -6, atoms: &["x"] },
            b: Slot { constant: 2, atoms: &[] },
            atoms: vec![atom_j("x", "j = 16y^4/(9x^3)")],
        },
        Subgroup::Involution(3) => CaseModel {
            coords: ["x = h4^2", "y = h6^2"],
            row: ["-6x", "2x"],
            j_of: j6_sq_sq,
            a: Slot { constant: -6, atoms: &["x"] },
            b: Slot { constant: 2, atoms: &["x"] },
            atoms: vec![atom_j("x", "j = 16y^2/(9x^3)")],
        },
        Subgroup::Involution(6) => CaseModel {
            coords: ["x = h4", "y = h6^2"],
            row: ["-6", "2y"],
            j_of: j6_h4_sq,
            a: Slot { constant: -6, atoms: &[] },
            b: Slot { constant: 2, atoms: &["y"] },
            atoms: vec![AtomRule {
                name: "y",
                value: second,
                forced_constant: -1,
                forced_factors: NEG_27J_16,
                relation: "z^2 = -y(3y^2 + x^6) with 27j + 16 = 16(3y^2 + x^6)/x^6",
                witness: w6_relation,
            }],
        },
        _ => CaseModel {
            coords: ["x = h4^2", "y = h6^2"],
            row: ["-6x", "2y"],
            j_of: j6_sq_sq,
            a: Slot { constant: -6, atoms: &["x"] },
            b: Slot { constant: 2, atoms: &["y"] },
            atoms: vec![
                atom_j("x", "j = 16y^2/(9x^3)"),
                AtomRule {
                    name: "y",
                    value: second,
                    forced_constant: -1,
                    forced_factors: NEG_27J_16,
                    relation: "z^2 = -xy(3y^2 + x^3) with 27j + 16 = 16(3y^2 + x^3)/x^3",
                    witness: al6_relation,
                },
            ],
        },
    }
}

// D = 10: base symbol (-10(1 - 4j), 5(8j - 27)), with
// g6^2 + 2h6^2 + k6^2 = 0 and 4g4^3 + 27h6^2 + k6^2 = 0.

const ONE_MINUS_4J: &[&[i64]] = &[&[1, -4]];
const EIGHT_J_MINUS_27: &[&[i64]] = &[&[-27, 8]];

fn j10_g4g6(x: &Q, y: &Q) -> Option<Q> {
    div(x.pow(3), y.pow(2))
}

fn j10_g4h6(x: &Q, y: &Q) -> Option<Q> {
    div(x.pow(3), &(&n(25) * &y.pow(2)) + &(&n(4) * &x.pow(3)))
}

fn j10_g4k6(x: &Q, y: &Q) -> Option<Q> {
    div(&n(27) * &x.pow(3), &(&n(8) * &x.pow(3)) - &(&n(25) * &y.pow(2)))
}

fn j10_g4_sq(x: &Q, y: &Q) -> Option<Q> {
    div(x.pow(3), y.clone())
}

fn y2_minus_4x3(x: &Q, y: &Q) -> Option<Q> {
    Some(&y.pow(2) - &(&n(4) * &x.pow(3)))
}

fn x3_8_minus_27y2(x: &Q, y: &Q) -> Option<Q> {
    Some(&(&n(8) * &x.pow(3)) - &(&n(27) * &y.pow(2)))
}

fn y2_25_plus_4x3(x: &Q, y: &Q) -> Option<Q> {
    Some(&(&n(25) * &y.pow(2)) + &(&n(4) * &x.pow(3)))
}

fn x3_8_minus_25y2(x: &Q, y: &Q) -> Option<Q> {
    Some(&(&n(8) * &x.pow(3)) - &(&n(25) * &y.pow(2)))
}

fn y_minus_4x3(x: &Q, y: &Q) -> Option<Q> {
    Some(y - &(&n(4) * &x.pow(3)))
}

fn x3_8_minus_27y(x: &Q, y: &Q) -> Option<Q> {
    Some(&(&n(8) * &x.pow(3)) - &(&n(27) * y))
}

fn al10_relation(x: &Q, y: &Q) -> Option<Q> {
    Some(&(y * &y_minus_4x3(x, y)?) * &x3_8_minus_27y(x, y)?)
}

fn model10(w: Subgroup) -> CaseModel {
    match w {
        Subgroup::Identity => CaseModel {
            coords: ["g4", "g6"],
            row: ["-10", "5"],
            j_of: j10_g4g6,
            a: Slot { constant: -10, atoms: &[] },
            b: Slot { constant: 5, atoms: &[] },
            atoms: vec![],
        },
        Subgroup::Involution(2) => CaseModel {
            coords: ["x = g4", "y = g6"],
            row: ["-10(y^2 - 4x^3)", "5(8x^3 - 27y^2)"],
            j_of: j10_g4g6,
            a: Slot { constant: -10, atoms: &["y^2 - 4x^3"] },
            b: Slot { constant: 5, atoms: &["8x^3 - 27y^2"] },
            atoms: vec![
                AtomRule {
                    name: "y^2 - 4x^3",
                    value: y2_minus_4x3,
                    forced_constant: 1,
                    forced_factors: ONE_MINUS_4J,
                    relation: "y^2 - 4x^3 = y^2 (1 - 4j)",
                    witness: one,
                },
                AtomRule {
                    name: "8x^3 - 27y^2",
                    value: x3_8_minus_27y2,
                    forced_constant: 1,
                    forced_factors: EIGHT_J_MINUS_27,
                    relation: "8x^3 - 27y^2 = y^2 (8j - 27)",
                    witness: one,
                },
            ],
        },
        Subgroup::Involution(5) => CaseModel {
            coords: ["x = g4", "y = h6"],
            row: ["-10(25y^2 + 4x^3)", "5"],
            j_of: j10_g4h6,
            a: Slot { constant: -10, atoms: &["25y^2 + 4x^3"] },
            b: Slot { constant: 5, atoms: &[] },
            atoms: vec![AtomRule {
                name: "25y^2 + 4x^3",
                value: y2_25_plus_4x3,
                forced_constant: 1,
                forced_factors: ONE_MINUS_4J,
                relation: "g6^2 = 25y^2 + 4x^3 and 1 - 4j = 25y^2/g6^2",
                witness: one,
            }],
        },
        Subgroup::Involution(10) => CaseModel {
            coords: ["x = g4", "y = k6"],
            row: ["-10", "15(8x^3 - 25y^2)"],
            j_of: j10_g4k6,
            a: Slot { constant: -10, atoms: &[] },
            b: Slot { constant: 15, atoms: &["8x^3 - 25y^2"] },
            atoms: vec![AtomRule {
                name: "8x^3 - 25y^2",
                value: x3_8_minus_25y2,
                forced_constant: 3,
                forced_factors: EIGHT_J_MINUS_27,
                relation: "8j - 27 = 675y^2/(8x^3 - 25y^2)",
                witness: one,
            }],
        },
        _ => CaseModel {
            coords: ["x = g4", "y = g6^2"],
            row: ["-10(y - 4x^3)", "5(8x^3 - 27y)"],
            j_of: j10_g4_sq,
            a: Slot { constant: -10, atoms: &["y - 4x^3"] },
            b: Slot { constant: 5, atoms: &["8x^3 - 27y"] },
            atoms: vec![
                AtomRule {
                    name: "y - 4x^3",
                    value: y_minus_4x3,
                    forced_constant: 1,
                    forced_factors: EIGHT_J_MINUS_27,
                    relation: "625 z^2 = y(y - 4x^3)(8x^3 - 27y) with y - 4x^3 = y(1 - 4j), 8x^3 - 27y = y(8j - 27)",
                    witness: al10_relation,
                },
                AtomRule {
                    name: "8x^3 - 27y",
                    value: x3_8_minus_27y,
                    forced_constant: 1,
                    forced_factors: ONE_MINUS_4J,
                    relation: "625 z^2 = y(y - 4x^3)(8x^3 - 27y) with y - 4x^3 = y(1 - 4j), 8x^3 - 27y = y(8j - 27)",
                    witness: al10_relation,
                },
            ],
        },
    }
}

// D = 22: j = -11 f61^2 / (16(f61^2 + f64^2)); the relations give
// f62 = -11(f61^2 + f64^2)/f61 and f65^2 = f61 f62.

fn j22(x: &Q, y: &Q) -> Option<Q> {
    div(&n(-11) * &x.pow(2), &n(16) * &(&x.pow(2) + &y.pow(2)))
}

fn f65_squared(x: &Q, y: &Q) -> Option<Q> {
    Some(&n(-11) * &(&x.pow(2) + &y.pow(2)))
}

fn f61_f62_minus_11f61(x: &Q, y: &Q) -> Option<Q> {
    Some(&n(-11) * &(&(&n(2) * &x.pow(2)) + &y.pow(2)))
}

fn model22(w: Subgroup) -> CaseModel {
    let atoms = vec![
        AtomRule {
            name: "f65^2",
            value: f65_squared,
            forced_constant: 1,
            forced_factors: &[J],
            relation: "f65^2 = f61 f62 = -11(f61^2 + f64^2) and j (f61 f62) = (11 f61/4)^2",
            witness: one,
        },
        AtomRule {
            name: "f61(f62 - 11 f61)",
            value: f61_f62_minus_11f61,
            forced_constant: -11,
            forced_factors: &[J, &[-11, 16]],
            relation: "f61 f62 - 11 f61^2 = -11(2 f61^2 + f64^2) and j(16j - 11) = 121 f61^2 (2 f61^2 + f64^2)/(16(f61^2 + f64^2)^2)",
            witness: one,
        },
    ];
    let (row, a_atoms): ([&'static str; 2], &'static [&'static str]) = match w {
        Subgroup::Identity => (["-22", "f61(f62 - 11 f61)"], &[]),
        Subgroup::Involution(2) => (["-22 f65^2", "f61(f62 - 11 f61)"], &["f65^2"]),
        Subgroup::Involution(22) => (["-22", "f61 f62 - 11 f61^2"], &[]),
        _ => (["-22 f65^2", "f61 f62 - 11 f61^2"], &["f65^2"]),
    };
    CaseModel {
        coords: ["f61", "f64"],
        row,
        j_of: j22,
        a: Slot { constant: -22, atoms: a_atoms },
        b: Slot { constant: 1, atoms: &["f61(f62 - 11 f61)"] },
        atoms,
    }
}

fn model(d: u32, w: Subgroup) -> Result<CaseModel> {
    if !DISCRIMINANTS.contains(&d) {
        return Err(Error::UnknownDiscriminant(d));
    }
    if !w.is_valid_for(d) {
        return Err(Error::UnknownSubgroup(w.to_string(), d));
    }
    Ok(match d {
        6 => model6(w),
        10 => model10(w),
        _ => model22(w),
    })
}

/// Sample coordinates for checking forcing rules; none makes a used quantity vanish.
const SAMPLES: [(i64, i64, i64, i64); 5] = [(2, 1, 3, 1), (5, 3, -7, 2), (-3, 1, 11, 4), (13, 7, 4, 9), (1, 6, -5, 1)];

impl CaseModel {
    fn rule(&self, d: u32, w: Subgroup, name: &str) -> Result<&AtomRule> {
        self.atoms
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::UnderdeterminedCase { d, w: w.to_string(), atom: name.to_string() })
    }

    fn slot_class(&self, d: u32, w: Subgroup, slot: &Slot) -> Result<SquareClassFn> {
        let mut class = SquareClassFn::constant_i64(slot.constant)?;
        for name in slot.atoms {
            let rule = self.rule(d, w, name)?;
            if !rule_holds(self, rule) {
                return Err(Error::UnderdeterminedCase {
                    d,
                    w: w.to_string(),
                    atom: format!("{name} (forcing identity fails at a sample point)"),
                });
            }
            class = class.mul(&rule.forced());
        }
        Ok(class)
    }

    fn slot_value(&self, slot: &Slot, x: &Q, y: &Q) -> Option<Q> {
        let mut v = n(slot.constant);
        for name in slot.atoms {
            let rule = self.atoms.iter().find(|r| r.name == *name)?;
            v = &v * &(rule.value)(x, y)?;
        }
        Some(v)
    }
}

/// Whether `value * forced(j) * witness` is a nonzero square at one sample.
fn forcing_identity_at(m: &CaseModel, rule: &AtomRule, x: &Q, y: &Q) -> Option<bool> {
    let j = (m.j_of)(x, y)?;
    let v = (rule.value)(x, y)?;
    let f = rule.forced().value_at(&j)?;
    let w = (rule.witness)(x, y)?;
    let prod = &(&v * &f) * &w;
    if prod.is_zero() {
        return None;
    }
    Some(prod.is_square())
}

fn rule_holds(m: &CaseModel, rule: &AtomRule) -> bool {
    let mut checked = 0;
    for &(a, b, c, d) in &SAMPLES {
        let (x, y) = (Q::new(a, b).expect("sample"), Q::new(c, d).expect("sample"));
        match forcing_identity_at(m, rule, &x, &y) {
            Some(true) => checked += 1,
            Some(false) => return false,
            None => {}
        }
    }
    checked > 0
}

/// The obstruction symbol as a pair of square classes of functions of `j`.
pub fn derive_jline_symbol(d: u32, w: Subgroup) -> Result<(SquareClassFn, SquareClassFn)> {
    let m = model(d, w)?;
    Ok((m.slot_class(d, w, &m.a)?, m.slot_class(d, w, &m.b)?))
}

/// The symbol evaluated on explicit coordinates of the quotient.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateLift {
    pub j: Q,
    pub a: Q,
    pub b: Q,
    /// Every relation square along the forcing is a nonzero rational square,
    /// i.e. the coordinates lift to a rational point of the quotient.
    pub on_curve: bool,
}

/// Evaluates the coordinate symbol of `(d, w)` at `(x, y)`; `None` where
/// `j` or a factor is undefined or zero.
pub fn lift_symbol(d: u32, w: Subgroup, x: &Q, y: &Q) -> Result<Option<CoordinateLift>> {
    let m = model(d, w)?;
    let lift = || -> Option<CoordinateLift> {
        let j = (m.j_of)(x, y)?;
        let a = m.slot_value(&m.a, x, y)?;
        let b = m.slot_value(&m.b, x, y)?;
        if a.is_zero() || b.is_zero() {
            return None;
        }
        let mut on_curve = true;
        for r in &m.atoms {
            let wv = (r.witness)(x, y)?;
            on_curve &= !wv.is_zero() && wv.is_square();
        }
        Some(CoordinateLift { j, a, b, on_curve })
    };
    Ok(lift())
}

/// Geometry of a degenerate fiber of the obstruction conic bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberKind {
    SplitPair,
    NonsplitPair,
    DoubleLine,
}

impl FiberKind {
    /// Proportion of the Galois group fixing a multiplicity-one component.
    pub fn delta_x(&self) -> Q {
        match self {
            FiberKind::SplitPair => Q::one(),
            FiberKind::NonsplitPair => Q::new(1, 2).expect("nonzero"),
            FiberKind::DoubleLine => Q::zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberRecord {
    pub location: ProjectiveRational,
    pub kind: FiberKind,
    pub delta_x: Q,
}

impl FiberRecord {
    fn new(location: ProjectiveRational, kind: FiberKind) -> Self {
        FiberRecord { location, kind, delta_x: kind.delta_x() }
    }
}

/// Degenerate fibers over finite rational `j`.
///
/// Where exactly one slot vanishes the conic becomes a line pair, split iff
/// the other slot is a square there; where both vanish it is a double line.
pub fn classify_fibers(a: &SquareClassFn, b: &SquareClassFn) -> Vec<FiberRecord> {
    let mut roots = a.zeros();
    roots.extend(b.zeros());
    roots.sort();
    roots.dedup();
    roots
        .into_iter()
        .map(|r| {
            let (va, vb) = (a.vanishes_at(&r), b.vanishes_at(&r));
            let kind = if va && vb {
                FiberKind::DoubleLine
            } else {
                let other = if va { b } else { a };
                let square = other.value_at(&r).is_some_and(|v| v.is_square());
                if square {
                    FiberKind::SplitPair
                } else {
                    FiberKind::NonsplitPair
                }
            };
            FiberRecord::new(ProjectiveRational::from_rational(&r), kind)
        })
        .collect()
}

/// The fiber at `j = oo`, found by the same rule after `j -> 1/j`.
pub fn infinity_fiber(a: &SquareClassFn, b: &SquareClassFn) -> Option<FiberRecord> {
    classify_fibers(&a.reversed(), &b.reversed())
        .into_iter()
        .find(|f| f.location.is_zero())
        .map(|f| FiberRecord::new(ProjectiveRational::infinity(), f.kind))
}

/// `sum (1 - delta_x)` over the finite degenerate fibers.
pub fn delta_from_fibers(fibers: &[FiberRecord]) -> Q {
    fibers.iter().fold(Q::zero(), |acc, f| &acc + &(&Q::one() - &f.delta_x))
}

/// `Delta` as recorded for each case, against which derivations are checked.
const RECORDED_DELTA: [(u32, Subgroup, i64, i64); 15] = [
    (6, Subgroup::Identity, 0, 1),
    (6, Subgroup::Involution(2), 1, 2),
    (6, Subgroup::Involution(3), 1, 1),
    (6, Subgroup::Involution(6), 1, 2),
    (6, Subgroup::Full, 1, 1),
    (10, Subgroup::Identity, 0, 1),
    (10, Subgroup::Involution(2), 1, 1),
    (10, Subgroup::Involution(5), 1, 2),
    (10, Subgroup::Involution(10), 1, 2),
    (10, Subgroup::Full, 1, 1),
    (22, Subgroup::Identity, 1, 1),
    (22, Subgroup::Involution(2), 3, 2),
    (22, Subgroup::Involution(11), 3, 2),
    (22, Subgroup::Involution(22), 1, 1),
    (22, Subgroup::Full, 3, 2),
];

pub fn recorded_delta(d: u32, w: Subgroup) -> Result<Q> {
    RECORDED_DELTA
        .iter()
        .find(|r| r.0 == d && r.1 == w)
        .map(|r| Q::new(r.2, r.3).expect("nonzero denominator"))
        .ok_or_else(|| Error::UnknownSubgroup(w.to_string(), d))
}

/// `Delta` from the derived symbol, refused unless it matches the recorded value.
pub fn delta_of_case(d: u32, w: Subgroup) -> Result<Q> {
    let (a, b) = derive_jline_symbol(d, w)?;
    let derived = delta_from_fibers(&classify_fibers(&a, &b));
    let recorded = recorded_delta(d, w)?;
    if derived != recorded {
        return Err(Error::RegistryMismatch {
            d,
            w: w.to_string(),
            derived: derived.to_string(),
            recorded: recorded.to_string(),
        });
    }
    Ok(derived)
}

/// What the count of unobstructed points should look like.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expected {
    /// `c B^(2/delta) log(B)^(-Delta)`.
    Form { form: AsymptoticForm },
    /// The symbol is a constant pair with no rational solution.
    Zero { reason: String },
    /// Counted, but no asymptotic is asserted over Q.
    Unclaimed { form: AsymptoticForm, reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct ForcingStep {
    pub atom: String,
    pub class: String,
    pub relation: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Symbol {
    pub a: SquareClassFn,
    pub b: SquareClassFn,
}

/// Everything known about one `(D, W)` case.
#[derive(Clone, Debug, Serialize)]
pub struct CaseDescriptor {
    pub d: u32,
    pub w: Subgroup,
    pub delta: u32,
    pub coordinates: [String; 2],
    pub coordinate_symbol: [String; 2],
    pub forcing: Vec<ForcingStep>,
    pub symbol: Symbol,
    pub excluded: Vec<ProjectiveRational>,
    /// `0`, `oo` and the rational roots of `J10`.
    pub degenerate: Vec<ProjectiveRational>,
    pub fibers: Vec<FiberRecord>,
    pub infinity_fiber: Option<FiberRecord>,
    pub delta_pi: Q,
    pub expected: Expected,
}

impl CaseDescriptor {
    pub fn build(d: u32, w: Subgroup) -> Result<Self> {
        Self::build_with(d, w, &[])
    }

    /// As [`build`](Self::build), excluding `extra` points besides the shipped special points.
    pub fn build_with(d: u32, w: Subgroup, extra: &[ProjectiveRational]) -> Result<Self> {
        let m = model(d, w)?;
        let (a, b) = derive_jline_symbol(d, w)?;
        let fibers = classify_fibers(&a, &b);
        let delta_pi = delta_of_case(d, w)?;
        let family = IgusaFamily::new(d)?.with_extra_exclusions(extra);
        let mut degenerate = vec![ProjectiveRational::zero(), ProjectiveRational::infinity()];
        for r in &family.degenerate_roots {
            if !degenerate.contains(r) {
                degenerate.push(r.clone());
            }
        }
        degenerate.sort();
        let mut excluded = special_points(d)?.0;
        for e in extra {
            if !excluded.contains(e) {
                excluded.push(e.clone());
            }
        }
        excluded.sort();

        let alpha = Q::new(2, family.delta)?;
        let form = AsymptoticForm::new(None, alpha, -delta_pi.clone())?;
        let expected = if a.is_constant() && b.is_constant() && !class_solvable(a.constant_part(), b.constant_part()) {
            let places: Vec<String> = ramified_places(a.constant_part(), b.constant_part())
                .iter()
                .map(|p| p.to_string())
                .collect();
            Expected::Zero {
                reason: format!(
                    "({}, {}) has no rational point: ramified at {}",
                    a.constant_part(),
                    b.constant_part(),
                    places.join(", ")
                ),
            }
        } else if d == 22 && matches!(w, Subgroup::Identity | Subgroup::Involution(11)) {
            Expected::Unclaimed {
                form,
                reason: "over Q no count is asserted for this quotient".into(),
            }
        } else {
            Expected::Form { form }
        };

        let forcing = m
            .a
            .atoms
            .iter()
            .chain(m.b.atoms.iter())
            .filter_map(|name| m.atoms.iter().find(|r| r.name == *name))
            .fold(Vec::<ForcingStep>::new(), |mut acc, r| {
                if !acc.iter().any(|s| s.atom == r.name) {
                    acc.push(ForcingStep {
                        atom: r.name.to_string(),
                        class: r.forced().to_string(),
                        relation: r.relation.to_string(),
                    });
                }
                acc
            });

        Ok(CaseDescriptor {
            d,
            w,
            delta: family.delta,
            coordinates: m.coords.map(String::from),
            coordinate_symbol: m.row.map(String::from),
            forcing,
            infinity_fiber: infinity_fiber(&a, &b),
            symbol: Symbol { a, b },
            excluded,
            degenerate,
            fibers,
            delta_pi,
            expected,
        })
    }

    pub fn is_fiber_location(&self, j: &ProjectiveRational) -> bool {
        self.fibers.iter().any(|f| &f.location == j)
    }

    /// Classifies `j` before any symbol is evaluated.
    pub fn check_point(&self, j: &ProjectiveRational) -> Result<()> {
        if self.degenerate.contains(j) {
            return Err(Error::DegenerateCurve(j.clone()));
        }
        if self.excluded.contains(j) {
            return Err(Error::ExcludedPoint(j.clone()));
        }
        if self.is_fiber_location(j) {
            return Err(Error::DegenerateFiber(j.clone()));
        }
        Ok(())
    }

    /// Square classes of the two slots at `j`.
    pub fn symbol_classes(&self, j: &ProjectiveRational) -> Result<(SquareClassQ, SquareClassQ)> {
        self.check_point(j)?;
        let a = self.symbol.a.evaluate(j).ok_or_else(|| Error::DegenerateFiber(j.clone()))?;
        let b = self.symbol.b.evaluate(j).ok_or_else(|| Error::DegenerateFiber(j.clone()))?;
        Ok((a, b))
    }

    /// Representative rational values of the two slots at `j`.
    pub fn symbol_values(&self, j: &ProjectiveRational) -> Result<(Q, Q)> {
        self.check_point(j)?;
        let r = j.to_rational().ok_or_else(|| Error::DegenerateCurve(j.clone()))?;
        let a = self.symbol.a.value_at(&r).ok_or_else(|| Error::DegenerateFiber(j.clone()))?;
        let b = self.symbol.b.value_at(&r).ok_or_else(|| Error::DegenerateFiber(j.clone()))?;
        Ok((a, b))
    }

    /// Whether the conic `z^2 = A(j) x^2 + B(j) y^2` has a rational point.
    pub fn obstruction_at(&self, j: &ProjectiveRational) -> Result<bool> {
        let (a, b) = self.symbol_classes(j)?;
        Ok(class_solvable(&a, &b))
    }
}

/// Convenience wrapper building the case first.
pub fn obstruction_at(d: u32, w: Subgroup, j: &ProjectiveRational) -> Result<bool> {
    CaseDescriptor::build(d, w)?.obstruction_at(j)
}

/// All fifteen cases; construction fails on any `Delta` mismatch.
#[derive(Clone, Debug, Serialize)]
pub struct Registry {
    pub schema_version: u32,
    pub cases: Vec<CaseDescriptor>,
}

impl Registry {
    pub fn build() -> Result<Self> {
        Self::with_exclusions(&[])
    }

    /// Adds excluded points per discriminant, given as `(D, j)`.
    pub fn with_exclusions(extra: &[(u32, ProjectiveRational)]) -> Result<Self> {
        let mut cases = Vec::new();
        for d in DISCRIMINANTS {
            let here: Vec<ProjectiveRational> =
                extra.iter().filter(|(e, _)| *e == d).map(|(_, j)| j.clone()).collect();
            for w in Subgroup::all_for(d)? {
                cases.push(CaseDescriptor::build_with(d, w, &here)?);
            }
        }
        Ok(Registry { schema_version: 1, cases })
    }

    pub fn case(&self, d: u32, w: Subgroup) -> Result<&CaseDescriptor> {
        self.cases
            .iter()
            .find(|c| c.d == d && c.w == w)
            .ok_or_else(|| Error::UnknownSubgroup(w.to_string(), d))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("registry serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    fn pr(a: i64, b: i64) -> ProjectiveRational {
        ProjectiveRational::new(a, b).unwrap()
    }

    fn classes(d: u32, w: &str) -> (String, String) {
        let (a, b) = derive_jline_symbol(d, w.parse().unwrap()).unwrap();
        (a.to_string(), b.to_string())
    }

    #[test]
    fn subgroup_parsing() {
        assert_eq!("id".parse::<Subgroup>().unwrap(), Subgroup::Identity);
        assert_eq!("AL".parse::<Subgroup>().unwrap(), Subgroup::Full);
        assert_eq!("<w22>".parse::<Subgroup>().unwrap(), Subgroup::Involution(22));
        assert!(Subgroup::parse_for("w5", 6).is_err());
        assert!(Subgroup::parse_for("w3", 6).is_ok());
        assert!(Subgroup::parse_for("w2", 7).is_err());
        assert!("w1".parse::<Subgroup>().is_err());
        assert_eq!(Subgroup::Involution(11).to_string(), "w11");
    }

    #[test]
    fn constant_symbols() {
        assert_eq!(classes(6, "id"), ("-6".into(), "2".into()));
        assert_eq!(classes(10, "id"), ("-10".into(), "5".into()));
    }

    #[test]
    fn d6_symbols() {
        assert_eq!(classes(6, "w2"), ("-6*(j)".into(), "2".into()));
        assert_eq!(classes(6, "w3"), ("-6*(j)".into(), "2*(j)".into()));
        assert_eq!(classes(6, "w6"), ("-6".into(), "-2*(27j + 16)".into()));
        assert_eq!(classes(6, "AL"), ("-6*(j)".into(), "-2*(27j + 16)".into()));
        let (a, b) = derive_jline_symbol(6, Subgroup::Full).unwrap();
        let mut zeros = a.zeros();
        zeros.extend(b.zeros());
        zeros.sort();
        assert_eq!(zeros, vec![q("-16/27"), q("0")]);
    }

    #[test]
    fn d10_and_d22_symbols() {
        assert_eq!(classes(10, "w2"), ("10*(4j - 1)".into(), "5*(8j - 27)".into()));
        assert_eq!(classes(10, "w5"), ("10*(4j - 1)".into(), "5".into()));
        assert_eq!(classes(10, "w10"), ("-10".into(), "5*(8j - 27)".into()));
        assert_eq!(classes(10, "AL"), ("-10*(8j - 27)".into(), "-5*(4j - 1)".into()));
        assert_eq!(classes(22, "id"), ("-22".into(), "-11*(j)*(16j - 11)".into()));
        assert_eq!(classes(22, "AL"), ("-22*(j)".into(), "-11*(j)*(16j - 11)".into()));
    }

    #[test]
    fn fiber_examples() {
        let kinds = |d, w: &str| -> Vec<(String, FiberKind)> {
            let c = CaseDescriptor::build(d, w.parse().unwrap()).unwrap();
            c.fibers.iter().map(|f| (f.location.to_string(), f.kind)).collect()
        };
        assert_eq!(
            kinds(6, "AL"),
            vec![("-16/27".into(), FiberKind::NonsplitPair), ("0".into(), FiberKind::NonsplitPair)]
        );
        assert_eq!(kinds(6, "w3"), vec![("0".into(), FiberKind::DoubleLine)]);
        assert!(kinds(6, "id").is_empty());
        for w in ["id", "w2", "w11", "w22", "AL"] {
            let locs: Vec<String> = kinds(22, w).into_iter().map(|(l, _)| l).collect();
            assert_eq!(locs, vec!["0".to_string(), "11/16".to_string()], "w = {w}");
        }
    }

    #[test]
    fn all_deltas_match() {
        for d in DISCRIMINANTS {
            for w in Subgroup::all_for(d).unwrap() {
                assert_eq!(delta_of_case(d, w).unwrap(), recorded_delta(d, w).unwrap(), "D={d} W={w}");
            }
        }
        assert_eq!(delta_of_case(10, Subgroup::Involution(5)).unwrap(), q("1/2"));
        assert_eq!(delta_of_case(22, Subgroup::Involution(22)).unwrap(), q("1"));
    }

    #[test]
    fn missing_rule_is_underdetermined() {
        let mut m = model(6, Subgroup::Full).unwrap();
        m.atoms.retain(|r| r.name != "y");
        let err = m.slot_class(6, Subgroup::Full, &m.b).unwrap_err();
        assert!(matches!(err, Error::UnderdeterminedCase { .. }));
    }

    #[test]
    fn wrong_rule_is_caught() {
        let mut m = model(6, Subgroup::Involution(6)).unwrap();
        m.atoms[0].forced_constant = 1;
        assert!(m.slot_class(6, Subgroup::Involution(6), &m.b).is_err());
    }

    #[test]
    fn obstruction_branches() {
        let c6 = CaseDescriptor::build(6, Subgroup::Identity).unwrap();
        for (a, b) in [(3, 5), (-7, 2), (100, 3)] {
            assert!(!c6.obstruction_at(&pr(a, b)).unwrap());
        }
        assert!(matches!(c6.expected, Expected::Zero { .. }));
        let c10 = CaseDescriptor::build(10, Subgroup::Identity).unwrap();
        assert!(!c10.obstruction_at(&pr(7, 1)).unwrap());

        let al = CaseDescriptor::build(22, Subgroup::Full).unwrap();
        assert!(matches!(al.obstruction_at(&pr(11, 16)), Err(Error::DegenerateFiber(_))));
        assert!(matches!(al.obstruction_at(&pr(1, 3)), Err(Error::ExcludedPoint(_))));
        assert!(matches!(al.obstruction_at(&pr(0, 1)), Err(Error::DegenerateCurve(_))));
        assert!(matches!(al.obstruction_at(&pr(-1, 1)), Err(Error::DegenerateCurve(_))));
        let c6al = CaseDescriptor::build(6, Subgroup::Full).unwrap();
        assert!(matches!(c6al.obstruction_at(&pr(-16, 27)), Err(Error::ExcludedPoint(_))));
    }

    #[test]
    fn expectations() {
        let r = Registry::build().unwrap();
        assert_eq!(r.cases.len(), 15);
        let unclaimed: Vec<String> = r
            .cases
            .iter()
            .filter(|c| matches!(c.expected, Expected::Unclaimed { .. }))
            .map(|c| format!("{}:{}", c.d, c.w))
            .collect();
        assert_eq!(unclaimed, vec!["22:id", "22:w11"]);
        match &r.case(22, Subgroup::Involution(22)).unwrap().expected {
            Expected::Form { form } => assert_eq!(form.exponents(), (q("2/5"), q("-1"))),
            other => panic!("{other:?}"),
        }
        let json = r.to_json();
        assert!(json.contains("\"schema_version\": 1"));
        assert!(json.contains("nonsplit_pair"));
    }

    #[test]
    fn infinity_fibers_recorded() {
        let c = CaseDescriptor::build(6, Subgroup::Full).unwrap();
        // -6j and -2(27j + 16) at oo: -6/t vanishes, -2(27 + 16t)/t too
        assert_eq!(c.infinity_fiber.as_ref().unwrap().kind, FiberKind::DoubleLine);
        assert!(CaseDescriptor::build(6, Subgroup::Identity).unwrap().infinity_fiber.is_none());
    }

    #[test]
    fn lifts_agree_with_jline() {
        let c = CaseDescriptor::build(22, Subgroup::Full).unwrap();
        let mut seen = 0;
        for x in 1..12i64 {
            for y in 1..12i64 {
                let Some(l) = lift_symbol(22, Subgroup::Full, &n(x), &n(y)).unwrap() else { continue };
                let j = ProjectiveRational::from_rational(&l.j);
                if c.check_point(&j).is_err() {
                    continue;
                }
                let direct = crate::arith::hilbert_global_solvable(&l.a, &l.b).unwrap();
                assert_eq!(direct, c.obstruction_at(&j).unwrap(), "x={x} y={y}");
                seen += 1;
            }
        }
        assert!(seen > 50);
    }

    #[test]
    fn extra_exclusions() {
        let r = Registry::with_exclusions(&[(10, pr(1, 4))]).unwrap();
        assert!(r.case(10, Subgroup::Full).unwrap().excluded.contains(&pr(1, 4)));
        assert!(!r.case(6, Subgroup::Full).unwrap().excluded.contains(&pr(1, 4)));
    }
}
