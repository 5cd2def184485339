//! Regression of `log N` on `log B`: the plain slope, the joint fit with a
//! `log log B` term, and the slope after dividing out an assumed log power.
//!
//!     cargo run --example exponent_fit

use shimura_heights::asymptotics::{fit_points, fit_points_assuming};

fn main() -> shimura_heights::Result<()> {
    let (alpha, beta) = (2.0, -1.0);
    let points: Vec<(f64, f64)> = (4..=24)
        .map(|k| {
            let b = 2f64.powi(k);
            (b, 3.0 * b.powf(alpha) * b.ln().powf(beta))
        })
        .collect();
    let plain = fit_points(&points, None)?;
    println!("data 3 B^2 / log B on B = 16 .. 2^24");
    println!("plain slope      {:.4}", plain.alpha_hat);
    println!("joint fit        {:.4}", plain.alpha_joint.unwrap_or(f64::NAN));
    let corrected = fit_points_assuming(&points, Some(alpha), Some(beta))?;
    println!("corrected slope  {:.4}", corrected.alpha_corrected.unwrap_or(f64::NAN));
    println!("beta with alpha fixed at 2: {:.4} (rms {:.2e})", corrected.beta_hat, corrected.residual);
    println!("\n{}", serde_json::to_string_pretty(&corrected).expect("serializes"));
    Ok(())
}
