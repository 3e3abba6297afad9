//! Localize a spread-out reachable state onto one Wannier ket, then build it
//! back by running the rotations in reverse.

use spinlat::control::{apply_rotations, localization_sequence, preparation_sequence};
use spinlat::dynamics::SpinorState;
use spinlat::model::Spin;
use spinlat::random::{random_reachable_state, rng};

fn show(label: &str, state: &SpinorState) {
    print!("{label:<12}");
    for (l, down, up) in state.populations() {
        print!(" [{l}: {down:.3} {up:.3}]");
    }
    println!();
}

fn main() -> spinlat::Result<()> {
    let target = random_reachable_state(&mut rng(3), 5);
    show("target", &target);

    let loc = localization_sequence(&target, Spin::Down)?;
    let mut state = target.clone();
    for (i, rot) in loc.rotations.iter().enumerate() {
        state = rot.apply(&state);
        show(&format!("step {} {:?}", i + 1, rot.mode), &state);
    }
    println!(
        "{} rotations, population {:.12} on |{}, {:?}>",
        loc.rotations.len(),
        loc.amplitude.norm_sqr(),
        loc.site,
        loc.spin
    );

    let prep = preparation_sequence(&target, Spin::Down)?;
    let rebuilt = apply_rotations(&prep.rotations, &SpinorState::basis(prep.site, prep.spin));
    println!("reconstruction fidelity {:.15}", rebuilt.fidelity(&target));
    Ok(())
}
