//! Cosine, sine and exponential of an η-function, and the identities they obey.

use etaqubit::{EtaFunction, Exact, Scalar};

fn main() -> etaqubit::Result<()> {
    let n = 4;
    // F = η₁ + 2η₂η₃ − ½η₄
    let f = EtaFunction::from_terms(
        n,
        [
            (0b0001, Exact::from_i64(1)),
            (0b0110, Exact::from_i64(2)),
            (0b1000, Exact::from_ratio(-1, 2)),
        ],
    )?;
    let (c, s) = (f.cos()?, f.sin()?);
    println!("F      = {f}");
    println!("cos F  = {c}");
    println!("sin F  = {s}");

    let identity = c.multiply(&c)?.add(&s.multiply(&s)?)?;
    println!("cos²F + sin²F = {identity}");
    assert_eq!(identity, EtaFunction::one(n)?);

    let g = EtaFunction::monomial(n, &[1, 4], Exact::from_i64(3))?;
    let lhs = f.add(&g)?.exp()?;
    let rhs = f.exp()?.multiply(&g.exp()?)?;
    println!("exp(F + G) = exp F · exp G: {}", lhs == rhs);
    assert_eq!(lhs, rhs);
    Ok(())
}
