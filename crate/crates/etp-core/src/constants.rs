//! Physical constants, CODATA 2018 exact/recommended values (SI units).

/// Elementary charge `e` in C (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Electron rest mass `m_e` in kg.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Reduced Planck constant `hbar` in J*s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Speed of light in vacuum `c` in m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum permittivity `eps_0` in F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Electron rest energy `m_e c^2` expressed in eV.
pub fn electron_rest_energy_ev() -> f64 {
    ELECTRON_MASS * SPEED_OF_LIGHT * SPEED_OF_LIGHT / ELEMENTARY_CHARGE
}

#[cfg(test)]
mod tests {
    #[test]
    fn rest_energy_matches_codata() {
        // 510 998.95 eV to the digits CODATA quotes
        assert!((super::electron_rest_energy_ev() - 510_998.95).abs() < 0.005);
    }
}
