//! Flattening ranks across every bipartition detect product structure.

use etaqubit::cli::bipartitions;
use etaqubit::invariants::{flatten_rank, monotones, AmplitudeTensor4};
use etaqubit::states::{psi_a, psi_ad, psi_d};
use etaqubit::{Exact, Scalar};

fn main() -> etaqubit::Result<()> {
    let states = [
        psi_a(Exact::from_i64(1))?,
        psi_d(Exact::from_i64(1))?,
        psi_ad(Exact::from_i64(1), Exact::from_ratio(1, 3))?,
    ];
    for st in states {
        let v = st.function.to_amplitudes();
        let (f3, f2) = monotones(&AmplitudeTensor4::from_amplitudes(&v)?)?;
        println!("{}  |F3| = {f3}  |F2'| = {f2}", st.label);
        for cut in bipartitions(4) {
            let rank = flatten_rank(&v, &cut)?;
            if rank == 1 {
                println!("  product across {cut:?}");
            }
        }
    }
    Ok(())
}
