//! Counting unobstructed `j` of bounded Igusa height along a ladder and
//! fitting the growth exponent.
//!
//!     cargo run --release --example count_points -- 6 AL 500
//!     cargo run --release --example count_points -- 22 w22 1e8

use shimura_heights::arith::ExactRational as Q;
use shimura_heights::counting::{count_case_with, CountOptions, HeightLadder};
use shimura_heights::mestre::{CaseDescriptor, Subgroup};

fn main() -> shimura_heights::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let d: u32 = args.first().and_then(|s| s.parse().ok()).unwrap_or(6);
    let w = Subgroup::parse_for(args.get(1).map_or("AL", String::as_str), d)?;
    let b_max: Q = args.get(2).map_or("500", String::as_str).parse()?;

    let case = CaseDescriptor::build(d, w)?;
    let ladder = HeightLadder::geometric(&b_max, &Q::from_integer(2), None)?;
    let series = count_case_with(&case, &ladder, &CountOptions::default())?;
    print!("{}", series.to_csv());
    println!(
        "enumerated {} j up to naive height {}; largest counted {}",
        series.enumerated, series.naive_bound, series.max_counted_naive
    );

    let alpha = 2.0 / case.delta as f64;
    let beta = -case.delta_pi.to_f64();
    match series.fit_assuming(Some(alpha), beta) {
        Ok(f) => println!(
            "alpha_hat = {:.4}, corrected for log(B)^{beta} = {:.4}, predicted {alpha:.4}; beta_hat = {:.3}",
            f.alpha_hat,
            f.alpha_corrected.unwrap_or(f64::NAN),
            f.beta_hat
        ),
        Err(e) => println!("no fit: {e}"),
    }
    Ok(())
}
