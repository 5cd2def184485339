//! Combining two counts `c B^alpha log(B)^beta` into the count of pairs
//! with product of heights at most `B`, checked against synthetic data.
//!
//!     cargo run --release --example product_lemma

use shimura_heights::asymptotics::{log_power_series, montecarlo_product_check, product_combine, AsymptoticForm};

fn main() -> shimura_heights::Result<()> {
    let f = |c: f64, a: &str, b: &str| AsymptoticForm::parse(Some(c), a, b);
    let pairs = [
        (f(1.0, "2", "-1")?, f(1.0, "1", "0")?),
        (f(1.0, "1", "0")?, f(1.0, "1", "0")?),
        (f(2.0, "1", "-1/2")?, f(1.0, "1", "0")?),
        (f(1.0, "2/5", "-1")?, f(1.0, "1", "0")?),
    ];
    for (x, y) in &pairs {
        println!("{x}  x  {y}  ->  {}", product_combine(x, y)?);
    }
    println!("\nsum log(k) / k^2 = {:.10} (= -zeta'(2))", log_power_series(2.0, 1.0)?);

    for (x, y) in &pairs[1..3] {
        let dev = montecarlo_product_check(x, y, 1e5, 3)?;
        println!("synthetic check of {x} x {y} at B = 1e5: relative deviation {dev:.4}");
    }
    Ok(())
}
