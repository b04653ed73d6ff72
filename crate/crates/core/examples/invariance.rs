//! Local-unitary and qubit-relabeling invariance of both monotones.

use etaqubit::states::{psi_ad, psi_cs};
use etaqubit::verify::{
    check_lu_invariance, check_permutation_invariance, random_state, INVARIANCE_TOL,
};
use etaqubit::{Exact, Float, Scalar};

fn main() -> etaqubit::Result<()> {
    let states = [psi_cs::<Float>()?.function, random_state::<Float>(4, 7)?];
    for (k, f) in states.iter().enumerate() {
        let r = check_lu_invariance(f, 50, INVARIANCE_TOL, 11 + k as u64)?;
        println!(
            "LU state {k}: max drift |F3| {:.2e}, |F2'| {:.2e}, passed {}",
            r.max_drift_f3, r.max_drift_f2, r.passed
        );
    }
    let exact = psi_ad(Exact::from_i64(2), Exact::from_ratio(-1, 3))?.function;
    let r = check_permutation_invariance(&exact, 0.0)?;
    println!(
        "relabelings of PSIAD(2,-1/3): exact match {:?}",
        r.exact_match
    );
    Ok(())
}
