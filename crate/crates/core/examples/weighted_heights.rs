//! Normalizing points of P(1,2,3,5) and reading off their height, then the
//! Igusa point and height of a few `j` on each family.
//!
//!     cargo run --example weighted_heights

use num_traits::ToPrimitive;
use shimura_heights::arith::ExactRational as Q;
use shimura_heights::heights::{attaining_coordinate, height_weighted, weighted_normalize, WeightVector, WeightedPoint};
use shimura_heights::igusa::{IgusaFamily, ProjectiveRational, DISCRIMINANTS};

fn main() -> shimura_heights::Result<()> {
    let coords = ["1/2", "1/4", "0", "3/32"].iter().map(|s| s.parse()).collect::<shimura_heights::Result<Vec<Q>>>()?;
    let pt = WeightedPoint::new(coords, WeightVector::igusa())?;
    let n = weighted_normalize(&pt);
    let (i, x) = attaining_coordinate(&pt);
    println!("{pt} ~ {n}, height {} attained at coordinate {i} (|x| = {x})", height_weighted(&pt));

    let lam: Q = "-5/7".parse()?;
    let scaled = pt.scaled(&lam)?;
    println!("scaled by {lam}: {scaled}, height {}", height_weighted(&scaled));

    for d in DISCRIMINANTS {
        let family = IgusaFamily::new(d)?;
        println!("\nD = {d}, delta = {}", family.delta);
        for s in ["2", "-3/2", "5/7", "100"] {
            let j: ProjectiveRational = s.parse()?;
            match family.igusa_point(&j) {
                Ok(p) => {
                    let ratio = family.height(&j)? / j.naive_height().to_f64().unwrap_or(f64::INFINITY).powi(family.delta as i32);
                    println!("  j = {j:>5}: {p}  Ht = {:.3}  Ht/H(j)^delta = {ratio:.4}", family.height(&j)?);
                }
                Err(e) => println!("  j = {j:>5}: {e}"),
            }
        }
    }
    Ok(())
}
