//! Graphene dipole resonance from the plasmon half-wavelength condition.
//!
//! The dipole resonates where `Re q(f) * alpha * L = pi` for the sheet on a
//! semi-infinite substrate with vacuum above. The feed gap is not part of
//! the resonant length. Absolute radiation efficiency is not modelled; the
//! only efficiency quantity is [`efficiency_proxy`], which is meant for
//! ranking designs against each other.

use std::f64::consts::PI;

use crate::conductivity::GrapheneSheet;
use crate::constants::{angular_frequency, LIGHT_SPEED};
use crate::error::{Error, Result};
use crate::mode::{find_mode, trace_dispersion, ModeSolution};
use crate::roots::{illinois, SolverOptions};
use crate::stack::LayeredStack;

/// Resonance search band (Hz).
pub const SEARCH_BAND: (f64, f64) = (0.1e12, 10e12);
const SEARCH_POINTS: usize = 64;
/// Bracketing stops once `|Re q alpha L - pi| < this`.
pub const RESONANCE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleGeometry {
    width: f64,
    length: f64,
    gap: f64,
    substrate_permittivity: f64,
    end_correction: f64,
}

impl DipoleGeometry {
    /// `length` is the total dipole length including the gap.
    pub fn new(width: f64, length: f64, gap: f64, substrate_permittivity: f64) -> Result<Self> {
        Self::with_end_correction(width, length, gap, substrate_permittivity, 1.0)
    }

    pub fn with_end_correction(
        width: f64,
        length: f64,
        gap: f64,
        substrate_permittivity: f64,
        end_correction: f64,
    ) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::invalid(format!("width must be > 0, got {width}")));
        }
        if !(gap > 0.0 && length.is_finite() && gap < length) {
            return Err(Error::invalid(format!("need 0 < gap < length, got gap {gap}, length {length}")));
        }
        if !(substrate_permittivity >= 1.0 && substrate_permittivity.is_finite()) {
            return Err(Error::invalid("substrate permittivity must be >= 1"));
        }
        if !(0.5..=1.5).contains(&end_correction) {
            return Err(Error::invalid(format!(
                "end correction must be within [0.5, 1.5], got {end_correction}"
            )));
        }
        Ok(Self {
            width,
            length,
            gap,
            substrate_permittivity,
            end_correction,
        })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn substrate_permittivity(&self) -> f64 {
        self.substrate_permittivity
    }

    pub fn end_correction(&self) -> f64 {
        self.end_correction
    }

    /// `alpha * L`.
    pub fn effective_length(&self) -> f64 {
        self.end_correction * self.length
    }

    pub fn with_length(&self, length: f64) -> Result<Self> {
        Self::with_end_correction(self.width, length, self.gap, self.substrate_permittivity, self.end_correction)
    }

    /// Sheet on the substrate with vacuum above.
    pub fn stack(&self, sheet: GrapheneSheet) -> Result<LayeredStack> {
        LayeredStack::two_half_space(1.0, self.substrate_permittivity, sheet)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonancePrediction {
    pub resonance_frequency: f64,
    pub mode: ModeSolution,
    /// Metallic dipole of the same length (Hz).
    pub metal_reference: f64,
    pub miniaturization_factor: f64,
    pub efficiency_proxy: f64,
}

/// Half plasmon wavelength `pi / Re q` (m) of the fundamental mode at `f`.
pub fn resonant_length(stack: &LayeredStack, f: f64, opts: &SolverOptions) -> Result<f64> {
    let mode = find_mode(stack, angular_frequency(f), None, opts)?;
    Ok(mode.resonant_length())
}

/// `c0 / (2 L sqrt(eps_eff))` with `eps_eff = (eps_r + 1) / 2`.
pub fn metal_dipole_resonance(length: f64, substrate_permittivity: f64) -> Result<f64> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::invalid("length must be > 0"));
    }
    if !(substrate_permittivity >= 1.0) {
        return Err(Error::invalid("substrate permittivity must be >= 1"));
    }
    let eps_eff = 0.5 * (substrate_permittivity + 1.0);
    Ok(LIGHT_SPEED / (2.0 * length * eps_eff.sqrt()))
}

pub fn miniaturization_factor(prediction: &ResonancePrediction) -> f64 {
    prediction.metal_reference / prediction.resonance_frequency
}

/// Ordering surrogate `FOM / (FOM + 1)` with `FOM = L_p / lambda_spp`.
/// Monotone in the normalized propagation length; not an efficiency.
pub fn efficiency_proxy(mode: &ModeSolution) -> f64 {
    let fom = mode.normalized_propagation_length();
    fom / (fom + 1.0)
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Lowest frequency in [`SEARCH_BAND`] where the dipole meets the
/// half-wavelength condition.
pub fn resonance_frequency(
    dipole: &DipoleGeometry,
    sheet: &GrapheneSheet,
    opts: &SolverOptions,
) -> Result<ResonancePrediction> {
    let stack = dipole.stack(*sheet)?;
    let target_length = dipole.effective_length();
    let (lo, hi) = SEARCH_BAND;
    let grid = log_grid(lo, hi, SEARCH_POINTS);
    let trace = trace_dispersion(&stack, &grid, opts)?;
    let g = |m: &ModeSolution| m.q.re * target_length - PI;

    let mut bracket = None;
    let mut first_valid: Option<usize> = None;
    for i in 0..grid.len() - 1 {
        let (Ok(a), Ok(b)) = (&trace[i], &trace[i + 1]) else {
            continue;
        };
        first_valid.get_or_insert(i);
        if g(a) < 0.0 && g(b) >= 0.0 {
            bracket = Some((i, *a, *b));
            break;
        }
    }
    let Some((i, ma, mb)) = bracket else {
        return match first_valid {
            Some(k) if k > 0 && trace[k].as_ref().map(|m| g(m) >= 0.0).unwrap_or(false) => {
                Err(Error::NonBoundBandEdge { frequency: grid[k - 1] })
            }
            None if trace.iter().all(|r| r.is_err()) => Err(Error::NonBoundBandEdge { frequency: lo }),
            _ => Err(Error::NoResonanceInBand { lo, hi }),
        };
    };

    let (fa, fb) = (grid[i], grid[i + 1]);
    let mut last = if g(&ma).abs() < g(&mb).abs() { ma } else { mb };
    let mut solve = |f: f64| -> Result<f64> {
        // Seed by interpolating between the bracketing roots.
        let t = (f - fa) / (fb - fa);
        let guess = ma.q + (mb.q - ma.q) * t;
        let m = find_mode(&stack, angular_frequency(f), Some(guess), opts)?;
        last = m;
        Ok(g(&m))
    };
    let (f_res, _) = illinois(&mut solve, fa, fb, g(&ma), g(&mb), RESONANCE_TOLERANCE, 200)?;
    let mode = if (last.frequency() - f_res).abs() <= f64::EPSILON * f_res {
        last
    } else {
        find_mode(&stack, angular_frequency(f_res), Some(last.q), opts)?
    };
    let metal_reference = metal_dipole_resonance(dipole.length(), dipole.substrate_permittivity())?;
    Ok(ResonancePrediction {
        resonance_frequency: f_res,
        mode,
        metal_reference,
        miniaturization_factor: metal_reference / f_res,
        efficiency_proxy: efficiency_proxy(&mode),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    fn dipole(length: f64) -> DipoleGeometry {
        DipoleGeometry::new(8e-6, length, 3e-6, 3.8).unwrap()
    }

    fn sheet(ef: f64, tau: f64) -> GrapheneSheet {
        GrapheneSheet::at_room_temperature(ef, tau).unwrap()
    }

    #[test]
    fn geometry_validation() {
        assert!(DipoleGeometry::new(0.0, 20e-6, 3e-6, 3.8).is_err());
        assert!(DipoleGeometry::new(8e-6, 3e-6, 3e-6, 3.8).is_err());
        assert!(DipoleGeometry::new(8e-6, 20e-6, 0.0, 3.8).is_err());
        assert!(DipoleGeometry::new(8e-6, 20e-6, 3e-6, 0.9).is_err());
        assert!(DipoleGeometry::with_end_correction(8e-6, 20e-6, 3e-6, 3.8, 1.6).is_err());
        assert!(DipoleGeometry::with_end_correction(8e-6, 20e-6, 3e-6, 3.8, 0.5).is_ok());
    }

    #[test]
    fn metal_reference_values() {
        let f = metal_dipole_resonance(20e-6, 3.8).unwrap();
        assert!((f - LIGHT_SPEED / (2.0 * 20e-6 * 2.4f64.sqrt())).abs() < 1.0);
        assert!((f / 1e12 - 4.84).abs() < 0.005);
        assert_eq!(metal_dipole_resonance(20e-6, 1.0).unwrap(), LIGHT_SPEED / 40e-6);
        assert!(metal_dipole_resonance(30e-6, 3.8).unwrap() < f);
        assert!(metal_dipole_resonance(20e-6, 5.0).unwrap() < f);
        assert!(metal_dipole_resonance(0.0, 3.8).is_err());
    }

    #[test]
    fn proxy_bounds_and_monotonicity() {
        let m = |q: Complex64| ModeSolution {
            angular_frequency: 1e13,
            q,
            residual: 0.0,
        };
        let base = efficiency_proxy(&m(Complex64::new(1e5, 1e3)));
        assert!(base > 0.0 && base < 1.0);
        assert!(efficiency_proxy(&m(Complex64::new(1e5, 2e3))) < base);
        assert!(efficiency_proxy(&m(Complex64::new(2e5, 1e3))) > base);
        let tiny = efficiency_proxy(&m(Complex64::new(1e5, 1e9)));
        assert!(tiny > 0.0 && tiny < 1.0);
    }

    #[test]
    fn resonance_round_trip() {
        let d = dipole(20e-6);
        let s = sheet(0.2, 1e-12);
        let p = resonance_frequency(&d, &s, &opts()).unwrap();
        assert!((p.mode.q.re * 20e-6 - PI).abs() < 1e-8);
        let lres = resonant_length(&d.stack(s).unwrap(), p.resonance_frequency, &opts()).unwrap();
        assert!((lres - 20e-6).abs() / 20e-6 < 1e-3);
        assert!(p.miniaturization_factor > 1.0);
        assert_eq!(miniaturization_factor(&p), p.metal_reference / p.resonance_frequency);
    }

    #[test]
    fn end_correction_scales_like_length() {
        let s = sheet(0.4, 1e-12);
        let corrected = DipoleGeometry::with_end_correction(8e-6, 20e-6, 3e-6, 3.8, 1.2).unwrap();
        let plain = dipole(24e-6);
        let a = resonance_frequency(&corrected, &s, &opts()).unwrap();
        let b = resonance_frequency(&plain, &s, &opts()).unwrap();
        assert!((a.resonance_frequency - b.resonance_frequency).abs() / b.resonance_frequency < 1e-9);
    }

    #[test]
    fn doubling_wavevector_halves_resonant_length() {
        let m = ModeSolution {
            angular_frequency: 1e13,
            q: Complex64::new(1e5, 1e3),
            residual: 0.0,
        };
        let d = ModeSolution {
            q: Complex64::new(2e5, 1e3),
            ..m
        };
        assert!((d.resonant_length() - m.resonant_length() / 2.0).abs() < 1e-18);
    }

    #[test]
    fn no_resonance_for_huge_dipole() {
        // A 5 mm dipole needs q far below the bound-mode region in the band.
        let d = dipole(5e-3);
        let err = resonance_frequency(&d, &sheet(1.0, 1e-12), &opts()).unwrap_err();
        assert!(matches!(err, Error::NonBoundBandEdge { .. } | Error::NoResonanceInBand { .. }));
    }

    #[test]
    fn no_resonance_for_tiny_dipole() {
        let d = DipoleGeometry::new(0.1e-6, 0.2e-6, 0.05e-6, 3.8).unwrap();
        let err = resonance_frequency(&d, &sheet(1.0, 1e-12), &opts()).unwrap_err();
        assert!(matches!(err, Error::NoResonanceInBand { .. }));
    }
}
