//! Which spinor states can be reached from a single Wannier ket.

use spinlat::control::{reachability_check, REACHABILITY_TOL};
use spinlat::dynamics::SpinorState;
use spinlat::C64;

fn report(name: &str, state: &SpinorState) -> spinlat::Result<()> {
    let r = reachability_check(state, REACHABILITY_TOL)?;
    print!("{name:<34} reachable: {:<5}", r.reachable);
    match r.worst_j {
        Some(j) => println!("  worst |<T_{j}>| = {:.3e}", r.worst_magnitude),
        None => println!(),
    }
    Ok(())
}

fn main() -> spinlat::Result<()> {
    let h = C64::from(std::f64::consts::FRAC_1_SQRT_2);
    let z = C64::from(0.0);
    let half = C64::from(0.5);
    report("single ket |0, down>", &SpinorState::basis(0, spinlat::model::Spin::Down))?;
    // amps are stored as [up, down]
    report("(|0,down> + |0,up>)/sqrt 2", &SpinorState::new(0, vec![[h, h]])?)?;
    report("(|0,down> + |1,down>)/sqrt 2", &SpinorState::new(0, vec![[z, h], [z, h]])?)?;
    report(
        "(|0,d> + |0,u> + |1,d> - |1,u>)/2",
        &SpinorState::new(0, vec![[half, half], [-half, half]])?,
    )?;
    report(
        "(|0,d> + |0,u> + |1,d> + |1,u>)/2",
        &SpinorState::new(0, vec![[half, half], [half, half]])?,
    )?;
    let random = spinlat::random::random_reachable_state(&mut spinlat::random::rng(7), 6);
    report("random protocol-built 6-site state", &random)?;
    Ok(())
}
