//! The three Igusa families: invariant degrees, degenerate and special `j`,
//! and the Hauptmodul change of variable on the discriminant-22 curve.
//!
//!     cargo run --example igusa_families

use shimura_heights::igusa::{hauptmodul_relation_22, mobius_from_three_pairs, IgusaFamily, ProjectiveRational, DISCRIMINANTS};

fn main() -> shimura_heights::Result<()> {
    for d in DISCRIMINANTS {
        let f = IgusaFamily::new(d)?;
        let show = |v: &[ProjectiveRational]| v.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(", ");
        println!("D = {d}: delta = {}, degrees {:?}", f.delta, f.degrees());
        println!("  degenerate j: {}", show(&f.degenerate_roots));
        println!("  excluded j:   {}", show(&f.excluded));
        for s in &f.irrational_special {
            println!("  irrational special point: {s}");
        }
    }

    let m = hauptmodul_relation_22()?;
    println!("\nfitted from three CM values: {m}");
    for t in ["1", "27/16", "oo", "2", "-1"] {
        let t: ProjectiveRational = t.parse()?;
        println!("  t = {t:>5} -> j = {}", m.apply(&t));
    }

    let p = |s: &str| s.parse::<ProjectiveRational>();
    let round_trip = mobius_from_three_pairs(&[(p("0")?, p("1")?), (p("1")?, p("oo")?), (p("oo")?, p("0")?)])?;
    println!("map with 0 -> 1, 1 -> oo, oo -> 0: {round_trip}");
    Ok(())
}
