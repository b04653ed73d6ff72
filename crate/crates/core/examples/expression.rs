//! Parsing and evaluating η-expressions, including error positions.

use etaqubit::expr::{evaluate, parse};
use etaqubit::{Exact, Float};

fn main() {
    for (n, src) in [
        (2, "cos(e1 - e2)"),
        (4, "exp(e1*e2*e3*e4) + cos(e1 - e3) - cos(e2 + e4)"),
        (3, "normalize(W3 + i*GHZ3)"),
    ] {
        let e = parse(src, n).expect("valid expression");
        println!("{src}\n  parsed: {e}");
        match evaluate::<Exact>(&e, n) {
            Ok(f) => println!("  exact:  {f}"),
            Err(err) => println!("  exact:  {}", err.error),
        }
        println!(
            "  float:  {}",
            evaluate::<Float>(&e, n).expect("float evaluation")
        );
    }
    for src in ["e1 + e5", "cos(e1", "FOO + e1"] {
        let err = parse(src, 4).unwrap_err();
        println!("{src}\n  {}: {err}", err.code());
    }
}
