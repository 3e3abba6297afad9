//! Closed-form propagator of a scalar chain with time-dependent hopping and
//! force, checked against direct integration.

use spinlat::dynamics::{compare_hn, uniform_q_grid, Chain, ScalarSchedule, ScalarSegment};
use spinlat::random::{random_scalar_schedule, rng};

fn main() -> spinlat::Result<()> {
    let grid = uniform_q_grid(64);

    let constant = ScalarSchedule::new(vec![ScalarSegment { duration: 2.0, hopping: 0.75, force: 0.0 }]);
    let c = compare_hn(&constant, &grid, Chain::Ring(64))?;
    println!("constant hopping on a ring: a = {:.6} (expect 1.5), error {:.2e}", c.propagator.a, c.max_error);

    let mut r = rng(42);
    for trial in 0..5 {
        let schedule = random_scalar_schedule(&mut r, 5, 1.0, 1.0);
        let c = compare_hn(&schedule, &grid, Chain::Open)?;
        let p = c.propagator;
        println!(
            "random schedule {trial}: a = {:.6}, b = {:+.6}, eta = {:+.6}, max error {:.2e}",
            p.a, p.b, p.eta, c.max_error
        );
    }
    Ok(())
}
