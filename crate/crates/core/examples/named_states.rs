//! The state registry: η-form, binary form and squared norm of each label.

use etaqubit::eta::basis_label;
use etaqubit::states::{lookup, FIXED_LABELS};
use etaqubit::{Exact, Scalar};

fn main() -> etaqubit::Result<()> {
    for label in FIXED_LABELS {
        let st = lookup::<Exact>(label, &[])?;
        let n = st.n();
        let binary: Vec<String> = st
            .function
            .to_amplitudes()
            .amps()
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_exact_zero())
            .map(|(i, a)| {
                format!(
                    "{}|{}>",
                    a.render(),
                    basis_label(etaqubit::eta::index_to_mask(i, n), n)
                )
            })
            .collect();
        println!(
            "{label:<7} norm² = {:<3} η: {}",
            st.norm_sq.render(),
            st.function
        );
        println!("        binary: {}", binary.join(" + "));
    }
    Ok(())
}
