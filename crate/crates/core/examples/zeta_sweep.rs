//! The a = b, c = d slice of G_abcd at rational points, compared exactly with
//! the closed forms in ζ = (2ad / (a² + d²))².

use etaqubit::verify::zeta_point_exact;
use num_rational::BigRational;

fn main() -> etaqubit::Result<()> {
    println!("d, zeta, |F3|, |F2'|, exact match");
    for k in 0..=10 {
        let d = BigRational::new(k.into(), 10.into());
        let p = zeta_point_exact(&d)?;
        println!("{}  {}  {}  {}  {}", p.d, p.zeta, p.f3, p.f2, p.matches());
    }
    Ok(())
}
