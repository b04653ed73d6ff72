//! Both monotones along the two α-families, against their closed forms.

use etaqubit::verify::{sweep_alpha, AlphaFamily, SWEEP_TOL};

fn main() -> etaqubit::Result<()> {
    for (name, family) in [("psi_s", AlphaFamily::S), ("psi_c", AlphaFamily::C)] {
        let rows = sweep_alpha(family, 13)?;
        println!("{name}: alpha, |F3|, closed, |F2'|, closed");
        for r in &rows {
            let flag = if r.within(SWEEP_TOL) {
                ""
            } else {
                "  <- off closed form"
            };
            println!(
                "  {:.4}  {:.6}  {:.6}  {:.6}  {:.6}{flag}",
                r.parameter, r.f3_computed, r.f3_closed, r.f2_computed, r.f2_closed
            );
        }
    }
    Ok(())
}
