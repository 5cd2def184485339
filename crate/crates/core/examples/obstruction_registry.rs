//! The fifteen `(D, W)` cases: the forced symbol on the `j`-line, its
//! degenerate fibers, `Delta`, and what the counts should look like.
//!
//!     cargo run --example obstruction_registry
//!     cargo run --example obstruction_registry -- json

use shimura_heights::mestre::{Expected, Registry};

fn main() -> shimura_heights::Result<()> {
    let reg = Registry::build()?;
    if std::env::args().nth(1).as_deref() == Some("json") {
        println!("{}", reg.to_json());
        return Ok(());
    }
    for c in &reg.cases {
        println!("D={} W={}  ({}, {})  Delta = {}", c.d, c.w, c.symbol.a, c.symbol.b, c.delta_pi);
        for step in &c.forcing {
            println!("    {} ~ {}   [{}]", step.atom, step.class, step.relation);
        }
        for f in &c.fibers {
            println!("    fiber at j = {}: {:?}, delta_x = {}", f.location, f.kind, f.delta_x);
        }
        match &c.expected {
            Expected::Form { form } => println!("    expect {form}"),
            Expected::Zero { reason } => println!("    expect 0: {reason}"),
            Expected::Unclaimed { form, reason } => println!("    heuristic {form}: {reason}"),
        }
    }
    Ok(())
}
