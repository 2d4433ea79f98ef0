//! Intraband (Drude-like) Kubo conductivity of a graphene sheet.
//!
//! Time-harmonic convention is `exp(-i omega t)`, so the sheet conductivity
//!
//! ```text
//! sigma(omega) = A * i / (omega + i/tau)
//! A = (2 e^2 / (pi hbar)) * (kB T / hbar) * ln(2 cosh(E_F / (2 kB T)))
//! ```
//!
//! has a positive imaginary part (inductive sheet) for every `omega > 0`.
//! Interband transitions are not modelled.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::constants::{BOLTZMANN, ELECTRON_CHARGE, EV, REDUCED_PLANCK};
use crate::error::{Error, Result};

pub const DEFAULT_TEMPERATURE: f64 = 300.0;

/// Below this magnitude (S) a conductivity is treated as zero.
pub const DEGENERATE_CONDUCTIVITY: f64 = 1e-30;

/// Graphene sheet state: temperature (K), chemical potential (eV) and
/// carrier relaxation time (s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrapheneSheet {
    temperature: f64,
    chemical_potential: f64,
    relaxation_time: f64,
}

impl GrapheneSheet {
    pub fn new(temperature: f64, chemical_potential_ev: f64, relaxation_time: f64) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::invalid(format!("temperature must be > 0 K, got {temperature}")));
        }
        if !(chemical_potential_ev >= 0.0 && chemical_potential_ev.is_finite()) {
            return Err(Error::invalid(format!(
                "chemical potential must be >= 0 eV, got {chemical_potential_ev}"
            )));
        }
        if !(relaxation_time > 0.0 && relaxation_time.is_finite()) {
            return Err(Error::invalid(format!(
                "relaxation time must be > 0 s, got {relaxation_time}"
            )));
        }
        Ok(Self {
            temperature,
            chemical_potential: chemical_potential_ev,
            relaxation_time,
        })
    }

    /// Sheet at the default temperature of 300 K.
    pub fn at_room_temperature(chemical_potential_ev: f64, relaxation_time: f64) -> Result<Self> {
        Self::new(DEFAULT_TEMPERATURE, chemical_potential_ev, relaxation_time)
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// Chemical potential in eV.
    pub fn chemical_potential(&self) -> f64 {
        self.chemical_potential
    }

    pub fn relaxation_time(&self) -> f64 {
        self.relaxation_time
    }

    pub fn with_chemical_potential(&self, chemical_potential_ev: f64) -> Result<Self> {
        Self::new(self.temperature, chemical_potential_ev, self.relaxation_time)
    }

    pub fn with_relaxation_time(&self, relaxation_time: f64) -> Result<Self> {
        Self::new(self.temperature, self.chemical_potential, relaxation_time)
    }

    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        Self::new(temperature, self.chemical_potential, self.relaxation_time)
    }

    /// Scattering rate 1/tau (1/s).
    pub fn scattering_rate(&self) -> f64 {
        1.0 / self.relaxation_time
    }
}

/// Complex sheet conductivity in siemens (per square).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexConductivity(pub Complex64);

impl ComplexConductivity {
    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }
}

/// `ln(2 cosh x)` without overflow for large `|x|`.
pub(crate) fn ln_two_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p()
}

/// Drude weight `A` in S rad/s.
pub fn drude_weight(sheet: &GrapheneSheet) -> f64 {
    let kt = BOLTZMANN * sheet.temperature;
    let x = sheet.chemical_potential * EV / (2.0 * kt);
    let prefactor = 2.0 * ELECTRON_CHARGE * ELECTRON_CHARGE / (PI * REDUCED_PLANCK);
    prefactor * (kt / REDUCED_PLANCK) * ln_two_cosh(x)
}

/// `sigma(omega) = A (1/tau + i omega) / (omega^2 + 1/tau^2)`; real `A tau` at DC.
pub fn intraband_conductivity(sheet: &GrapheneSheet, omega: f64) -> Result<ComplexConductivity> {
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::invalid(format!("angular frequency must be >= 0, got {omega}")));
    }
    let a = drude_weight(sheet);
    let gamma = sheet.scattering_rate();
    let denom = omega * omega + gamma * gamma;
    Ok(ComplexConductivity(Complex64::new(a * gamma / denom, a * omega / denom)))
}

/// Sheet impedance `Z = 1/sigma` in ohm per square.
pub fn surface_impedance(sheet: &GrapheneSheet, omega: f64) -> Result<Complex64> {
    let sigma = intraband_conductivity(sheet, omega)?;
    if sigma.norm() < DEGENERATE_CONDUCTIVITY {
        return Err(Error::DegenerateConductivity {
            magnitude: sigma.norm(),
        });
    }
    Ok(sigma.0.inv())
}

/// Chemical potential shift (eV) produced by a gate bias change `delta_v`
/// (V), `k * sqrt(|delta_v|)`. `k` is in eV/sqrt(V) and has no default.
pub fn chemical_potential_from_bias(delta_v: f64, k: f64) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::invalid(format!(
            "bias proportionality constant must be > 0, got {k}"
        )));
    }
    if !delta_v.is_finite() {
        return Err(Error::invalid("bias voltage must be finite"));
    }
    Ok(k * delta_v.abs().sqrt())
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::constants::angular_frequency;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    // 40-digit reference evaluations of the conductivity formula at
    // E_F = 0.6 eV, tau = 1 ps, T = 300 K, f = 1 THz.
    const A_06: f64 = 70_628_541_290.663_384_975_544_008_772_8;
    const SIGMA_RE: f64 = 0.001_744_844_425_021_701_928_482_826_798_2;
    const SIGMA_IM: f64 = 0.010_963_180_854_610_571_176_249_237_269_3;
    const Z_RE: f64 = 14.158_582_093_386_561_705_729_388_075_1;
    const Z_IM: f64 = -88.960_994_979_662_436_257_096_493_038_3;

    fn pinned_sheet() -> GrapheneSheet {
        GrapheneSheet::new(300.0, 0.6, 1e-12).unwrap()
    }

    #[test]
    fn rejects_invalid_sheets() {
        assert!(GrapheneSheet::new(0.0, 0.2, 1e-12).is_err());
        assert!(GrapheneSheet::new(300.0, -0.1, 1e-12).is_err());
        assert!(GrapheneSheet::new(300.0, 0.2, 0.0).is_err());
        assert!(GrapheneSheet::new(300.0, 0.2, f64::NAN).is_err());
    }

    #[test]
    fn drude_weight_pinned() {
        assert!(rel(drude_weight(&pinned_sheet()), A_06) < 1e-12);
    }

    #[test]
    fn drude_weight_at_zero_chemical_potential_is_ln2() {
        for t in [4.0, 77.0, 300.0, 1000.0] {
            let sheet = GrapheneSheet::new(t, 0.0, 1e-12).unwrap();
            let base = 2.0 * ELECTRON_CHARGE * ELECTRON_CHARGE / (PI * REDUCED_PLANCK)
                * (BOLTZMANN * t / REDUCED_PLANCK);
            assert!(rel(drude_weight(&sheet) / base, 2f64.ln()) < 1e-12);
        }
    }

    #[test]
    fn degenerate_limit() {
        let sheet = pinned_sheet();
        let degenerate = ELECTRON_CHARGE * ELECTRON_CHARGE * 0.6 * EV / (PI * REDUCED_PLANCK.powi(2));
        assert!(rel(drude_weight(&sheet), degenerate) < 5e-3);
    }

    #[test]
    fn ratio_matches_direct_cosh() {
        let t = 300.0;
        for ef in [0.01, 0.1, 0.3, 0.6, 1.0] {
            let sheet = GrapheneSheet::new(t, ef, 1e-12).unwrap();
            let zero = sheet.with_chemical_potential(0.0).unwrap();
            let x = ef * EV / (2.0 * BOLTZMANN * t);
            let direct = (2.0 * x.cosh()).ln() / 2f64.ln();
            assert!(rel(drude_weight(&sheet) / drude_weight(&zero), direct) < 1e-12);
        }
    }

    #[test]
    fn conductivity_pinned() {
        let s = intraband_conductivity(&pinned_sheet(), angular_frequency(1e12)).unwrap();
        assert!(rel(s.re(), SIGMA_RE) < 1e-10);
        assert!(rel(s.im(), SIGMA_IM) < 1e-10);
        let a = drude_weight(&pinned_sheet());
        let wt = angular_frequency(1e12) * 1e-12;
        assert!(rel(s.norm(), a * 1e-12 / (1.0 + wt * wt).sqrt()) < 1e-12);
    }

    #[test]
    fn dc_limit_is_real() {
        let sheet = GrapheneSheet::new(300.0, 0.4, 0.5e-12).unwrap();
        let s = intraband_conductivity(&sheet, 0.0).unwrap();
        assert_eq!(s.im(), 0.0);
        assert!(rel(s.re(), drude_weight(&sheet) * 0.5e-12) < 1e-12);
        let z = surface_impedance(&sheet, 0.0).unwrap();
        assert_eq!(z.im, 0.0);
        assert!(rel(z.re, 1.0 / (drude_weight(&sheet) * 0.5e-12)) < 1e-12);
    }

    #[test]
    fn negative_frequency_rejected() {
        assert!(intraband_conductivity(&pinned_sheet(), -1.0).is_err());
    }

    #[test]
    fn increases_with_chemical_potential() {
        let w = angular_frequency(1e12);
        let lo = GrapheneSheet::new(300.0, 0.2, 1e-12).unwrap();
        let hi = GrapheneSheet::new(300.0, 0.6, 1e-12).unwrap();
        let slo = intraband_conductivity(&lo, w).unwrap();
        let shi = intraband_conductivity(&hi, w).unwrap();
        assert!(shi.norm() > slo.norm());
        assert!(shi.re() > slo.re());
    }

    #[test]
    fn impedance_pinned() {
        let z = surface_impedance(&pinned_sheet(), angular_frequency(1e12)).unwrap();
        assert!(rel(z.re, Z_RE) < 1e-10);
        assert!(rel(z.im, Z_IM) < 1e-10);
    }

    #[test]
    fn degenerate_conductivity_rejected() {
        // Near-zero temperature with E_F = 0 makes A vanish.
        let sheet = GrapheneSheet::new(1e-300, 0.0, 1e-12).unwrap();
        assert!(matches!(
            surface_impedance(&sheet, 1e12),
            Err(Error::DegenerateConductivity { .. })
        ));
    }

    #[test]
    fn bias_mapping() {
        assert_eq!(chemical_potential_from_bias(0.0, 0.2).unwrap(), 0.0);
        assert!((chemical_potential_from_bias(4.0, 0.2).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(
            chemical_potential_from_bias(-4.0, 0.2).unwrap(),
            chemical_potential_from_bias(4.0, 0.2).unwrap()
        );
        assert!(chemical_potential_from_bias(1.0, 0.0).is_err());
        assert!(chemical_potential_from_bias(1.0, -0.1).is_err());
    }
}
