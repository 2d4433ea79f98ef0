//! SI physical constants (CODATA 2018).

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Elementary charge (C).
    pub electron_charge: f64,
    /// Reduced Planck constant (J s).
    pub reduced_planck: f64,
    /// Boltzmann constant (J/K).
    pub boltzmann: f64,
    /// Vacuum permittivity (F/m).
    pub vacuum_permittivity: f64,
    /// Speed of light in vacuum (m/s).
    pub light_speed: f64,
    /// Impedance of free space (ohm).
    pub free_space_impedance: f64,
}

pub const ELECTRON_CHARGE: f64 = 1.602_176_634e-19;
pub const PLANCK: f64 = 6.626_070_15e-34;
pub const REDUCED_PLANCK: f64 = PLANCK / (2.0 * PI);
pub const BOLTZMANN: f64 = 1.380_649e-23;
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
pub const LIGHT_SPEED: f64 = 299_792_458.0;
/// eta0 = sqrt(mu0/eps0) = 1/(eps0 c0).
pub const FREE_SPACE_IMPEDANCE: f64 = 1.0 / (VACUUM_PERMITTIVITY * LIGHT_SPEED);

/// Joules per electron-volt.
pub const EV: f64 = ELECTRON_CHARGE;

pub const SI: PhysicalConstants = PhysicalConstants {
    electron_charge: ELECTRON_CHARGE,
    reduced_planck: REDUCED_PLANCK,
    boltzmann: BOLTZMANN,
    vacuum_permittivity: VACUUM_PERMITTIVITY,
    light_speed: LIGHT_SPEED,
    free_space_impedance: FREE_SPACE_IMPEDANCE,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        SI
    }
}

impl PhysicalConstants {
    /// mu0 implied by eps0 and c0.
    pub fn vacuum_permeability(&self) -> f64 {
        1.0 / (self.vacuum_permittivity * self.light_speed * self.light_speed)
    }
}

/// Free-space wavenumber k0 = omega/c0.
pub fn free_space_wavenumber(omega: f64) -> f64 {
    omega / LIGHT_SPEED
}

pub fn angular_frequency(frequency_hz: f64) -> f64 {
    2.0 * PI * frequency_hz
}
