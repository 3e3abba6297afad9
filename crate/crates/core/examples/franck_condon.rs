//! Left/right asymmetry of the microwave hopping rates as the polarization
//! angle moves away from 90 degrees, at a fixed trap frequency of 20 E_R.

use spinlat::model::{
    band_structure, franck_condon, gaussian_fc_ratio_for, LatticeConfig, Spin, DEFAULT_PLANEWAVES,
    DEFAULT_Q_POINTS,
};

fn main() -> spinlat::Result<()> {
    println!("theta [deg]   V0 [E_R]    |Omega_R|     |Omega_L|     exact ratio   Gaussian ratio");
    for deg in [90.0, 88.0, 85.0, 82.0, 80.0, 75.0, 70.0] {
        let config = LatticeConfig::with_trap_frequency(f64::to_radians(deg), 20.0)?;
        let up = band_structure(&config, Spin::Up, DEFAULT_PLANEWAVES, DEFAULT_Q_POINTS)?;
        let down = band_structure(&config, Spin::Down, DEFAULT_PLANEWAVES, DEFAULT_Q_POINTS)?;
        let fc = franck_condon(&config, &up, &down)?;
        println!(
            "{deg:8.1}   {:9.3}   {:.5e}   {:.5e}   {:.5e}   {:.5e}",
            config.v0,
            fc.right.norm(),
            fc.left.norm(),
            fc.ratio(),
            gaussian_fc_ratio_for(&config)
        );
    }
    Ok(())
}
