//! Hilbert symbols over Q: ramification of the three quaternion algebras,
//! a local table, and the brute-force oracle agreeing with the formula.
//!
//!     cargo run --example hilbert_symbols

use num_bigint::BigInt;
use shimura_heights::arith::{
    hilbert_local, hilbert_local_bruteforce, hilbert_ramified_set, splits_over_quadratic, ExactRational as Q,
    PlaceQ,
};

fn main() -> shimura_heights::Result<()> {
    for (a, b) in [(-6, 2), (-10, 5), (-22, 2)] {
        let (a, b) = (Q::from_integer(a), Q::from_integer(b));
        let places: Vec<String> = hilbert_ramified_set(&a, &b)?.iter().map(|v| v.to_string()).collect();
        println!("({a}, {b}) ramifies at {{{}}}", places.join(", "));
    }

    let (a, b) = ("-3".parse::<Q>()?, "7/5".parse::<Q>()?);
    println!("\nlocal symbols of ({a}, {b}):");
    for v in [PlaceQ::Infinite, PlaceQ::Finite(2), PlaceQ::Finite(3), PlaceQ::Finite(5), PlaceQ::Finite(7)] {
        println!("  {v:>2}: {:>2}", hilbert_local(&a, &b, v)?);
    }

    // Fields where (-6, 2) becomes split: no ramified place may split there.
    let six = (Q::from_integer(-6), Q::from_integer(2));
    for d in [-1, 2, -3, 5, -5, 7, -7] {
        println!("(-6, 2) over Q(sqrt {d}): {}", if splits_over_quadratic(&six.0, &six.1, d)? { "split" } else { "division" });
    }

    let mut agree = 0;
    for p in [2u64, 3, 5, 7] {
        for a in -20i64..=20 {
            for b in -20i64..=20 {
                if a == 0 || b == 0 {
                    continue;
                }
                let formula = hilbert_local(&Q::from_integer(a), &Q::from_integer(b), PlaceQ::Finite(p))?;
                let brute = hilbert_local_bruteforce(&BigInt::from(a), &BigInt::from(b), p)?;
                assert_eq!(formula, brute, "({a},{b})_{p}");
                agree += 1;
            }
        }
    }
    println!("\nformula and local search agree on {agree} symbols");
    Ok(())
}
