//! Schläfli-basis invariants and the two monotones, evaluated exactly.

use etaqubit::invariants::{invariant_report, AmplitudeTensor4};
use etaqubit::scalar::parse_rational;
use etaqubit::states::lookup;
use etaqubit::Exact;

fn main() -> etaqubit::Result<()> {
    let cases: [(&str, &[&str]); 5] = [
        ("PSIC4", &[]),
        ("PSIS4", &[]),
        ("PSICS", &[]),
        ("PSIAD", &["1", "1/2"]),
        ("G", &["1", "2", "3", "4"]),
    ];
    for (label, args) in cases {
        let args: Vec<_> = args
            .iter()
            .map(|a| parse_rational(a).expect("literal"))
            .collect();
        let st = lookup::<Exact>(label, &args)?;
        let report = invariant_report(&AmplitudeTensor4::from_state(&st)?)?;
        println!("{}", st.label);
        for (name, value) in report.fields() {
            println!("  {name:<7} {value}");
        }
    }
    Ok(())
}
