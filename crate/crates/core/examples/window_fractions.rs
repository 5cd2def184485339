//! Share of `j` with solvable obstruction among those of naive height in
//! `(H, 2H]`, for two quotients of the discriminant-6 curve.
//!
//!     cargo run --release --example window_fractions -- 256

use shimura_heights::counting::naive_window_fractions;
use shimura_heights::mestre::{CaseDescriptor, Subgroup};

fn main() -> shimura_heights::Result<()> {
    let top: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(256);
    let hs: Vec<u64> = std::iter::successors(Some(16u64), |h| Some(h * 2)).take_while(|&h| h <= top).collect();
    for w in ["w2", "AL"] {
        let case = CaseDescriptor::build(6, Subgroup::parse_for(w, 6)?)?;
        println!("D=6 W={w} (Delta = {})", case.delta_pi);
        let mut prev: Option<f64> = None;
        for f in naive_window_fractions(&case, &hs)? {
            let r = prev.map_or(String::new(), |p| format!("  ratio {:.3}", f.fraction() / p));
            println!("  H = {:>5}: {:>7} / {:>8} = {:.5}{r}", f.h, f.solvable, f.eligible, f.fraction());
            prev = Some(f.fraction());
        }
    }
    Ok(())
}
