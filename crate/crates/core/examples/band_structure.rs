//! Lowest Bloch bands of both spin lattices and the microwave-dressed
//! potentials at the lattice centre.

use spinlat::model::{
    adiabatic_potentials, band_structure, wannier_state, LatticeConfig, Spin, DEFAULT_PLANEWAVES,
};

fn main() -> spinlat::Result<()> {
    let config = LatticeConfig::new(133.0, 70f64.to_radians())?;
    for spin in [Spin::Up, Spin::Down] {
        let s = band_structure(&config, spin, DEFAULT_PLANEWAVES, 64)?;
        let w = wannier_state(&s, 0, 0)?;
        println!(
            "{spin:?}: depth {:.3} E_R, phase {:+.4} rad, well at z = {:+.4} L",
            s.depth, s.phase, s.well_offset
        );
        for n in 0..3 {
            let band = s.band(n);
            let lo = band.iter().cloned().fold(f64::INFINITY, f64::min);
            println!("  band {n}: bottom {lo:+.6} E_R, width {:.3e} E_R", s.bandwidth(n));
        }
        println!(
            "  Wannier centre {:+.4} L, rms width {:.4} L, tail weight {:.1e}",
            w.mean_position(),
            w.rms_width(),
            w.tail_weight
        );
    }

    let z: Vec<f64> = (0..=8).map(|i| i as f64 / 8.0 - 0.5).collect();
    let dressed = adiabatic_potentials(&z, &config, 0.0, 5.0)?;
    println!("\nz [L]     V+ [E_R]     V- [E_R]   (Omega = 5 E_R, resonant)");
    for (i, zi) in z.iter().enumerate() {
        println!("{zi:+.3}  {:+10.4}  {:+10.4}", dressed.v_plus[i], dressed.v_minus[i]);
    }
    Ok(())
}
