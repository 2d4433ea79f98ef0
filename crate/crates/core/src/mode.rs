//! TM surface-plasmon modes of graphene sheets in layered dielectrics.
//!
//! Inside layer `j` the tangential field is `H_y(z) ~ exp(+-kappa_j z)` with
//! `kappa_j = sqrt(q^2 - eps_j k0^2)`, `Re kappa_j >= 0`. The state carried
//! through the stack is `(H, P)` with `P = (dH/dz) / eps`, which is continuous
//! across dielectric interfaces. A sheet of conductivity `sigma` adds the jump
//! `H_above = H_below + i sigma / (omega eps0) * P`.
//!
//! Propagation starts with the decaying solution of the bottom cladding and
//! the residual measures the growing component left in the top cladding:
//!
//! ```text
//! D(q) = (P_top + kappa_t/eps_t H_top) * eps_b eps_t / (kappa_b kappa_t)
//! ```
//!
//! For two half-spaces this reduces to
//! `eps_1/kappa_1 + eps_2/kappa_2 + i sigma/(omega eps0)`.
//! Each finite layer is crossed with its transfer matrix multiplied by
//! `exp(-kappa d)`, which keeps every entry bounded for thick layers.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::conductivity::{drude_weight, intraband_conductivity, GrapheneSheet};
use crate::constants::{angular_frequency, free_space_wavenumber, LIGHT_SPEED, VACUUM_PERMITTIVITY};
use crate::error::{Error, Result};
use crate::roots::{muller, SolverOptions};
use crate::stack::LayeredStack;

/// Accepted `|D| / scale` at a returned root.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// `|q^2 - eps k0^2| / k0^2` below which a cladding branch point is flagged.
pub const BRANCH_CUT_TOLERANCE: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Guided TM mode at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSolution {
    pub angular_frequency: f64,
    /// Complex in-plane wavevector (1/m).
    pub q: Complex64,
    /// `|D(q)|` relative to the dominant term of `D`.
    pub residual: f64,
}

impl ModeSolution {
    pub fn frequency(&self) -> f64 {
        self.angular_frequency / (2.0 * PI)
    }

    pub fn k0(&self) -> f64 {
        free_space_wavenumber(self.angular_frequency)
    }

    pub fn effective_index(&self) -> f64 {
        self.q.re / self.k0()
    }

    /// Plasmon wavelength `2 pi / Re q` (m).
    pub fn spp_wavelength(&self) -> f64 {
        2.0 * PI / self.q.re
    }

    /// Intensity decay length `1 / (2 Im q)` (m).
    pub fn propagation_length(&self) -> f64 {
        1.0 / (2.0 * self.q.im)
    }

    /// `L_p / lambda_spp`.
    pub fn normalized_propagation_length(&self) -> f64 {
        self.propagation_length() / self.spp_wavelength()
    }

    /// Half the plasmon wavelength (m).
    pub fn resonant_length(&self) -> f64 {
        PI / self.q.re
    }
}

fn kappa(q: Complex64, eps: f64, k0: f64) -> Complex64 {
    let k = (q * q - eps * k0 * k0).sqrt();
    if k.re < 0.0 {
        -k
    } else {
        k
    }
}

/// Dispersion function of one stack at one frequency.
#[derive(Debug, Clone)]
pub struct Dispersion {
    omega: f64,
    k0: f64,
    eps: Vec<f64>,
    thickness: Vec<f64>,
    /// `i sigma / (omega eps0)` per interface (zero where no sheet).
    jumps: Vec<Complex64>,
    /// Lossless counterpart `-A / (omega^2 eps0)`.
    lossless_jumps: Vec<f64>,
}

impl Dispersion {
    pub fn new(stack: &LayeredStack, omega: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::invalid(format!("angular frequency must be > 0, got {omega}")));
        }
        let layers = stack.layers();
        let mut jumps = vec![Complex64::new(0.0, 0.0); layers.len() - 1];
        let mut lossless_jumps = vec![0.0; layers.len() - 1];
        for (i, sheet) in stack.sheets() {
            let sigma = intraband_conductivity(sheet, omega)?.value();
            jumps[*i] = I * sigma / (omega * VACUUM_PERMITTIVITY);
            lossless_jumps[*i] = -drude_weight(sheet) / (omega * omega * VACUUM_PERMITTIVITY);
        }
        Ok(Self {
            omega,
            k0: free_space_wavenumber(omega),
            eps: layers.iter().map(|l| l.permittivity()).collect(),
            thickness: layers.iter().map(|l| l.thickness().unwrap_or(0.0)).collect(),
            jumps,
            lossless_jumps,
        })
    }

    pub fn angular_frequency(&self) -> f64 {
        self.omega
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    fn check_claddings(&self, q: Complex64) -> Result<()> {
        let k02 = self.k0 * self.k0;
        let last = self.eps.len() - 1;
        for layer in [0, last] {
            if (q * q - self.eps[layer] * k02).norm() < BRANCH_CUT_TOLERANCE * k02 {
                return Err(Error::BranchCut { layer, q });
            }
        }
        Ok(())
    }

    /// `D(q)`; zero at guided modes.
    pub fn residual(&self, q: Complex64) -> Result<Complex64> {
        if !q.is_finite() {
            return Err(Error::invalid("non-finite wavevector"));
        }
        self.check_claddings(q)?;
        let n = self.eps.len();
        let (eps_b, eps_t) = (self.eps[n - 1], self.eps[0]);
        let kb = kappa(q, eps_b, self.k0);
        let kt = kappa(q, eps_t, self.k0);

        let mut h = Complex64::new(1.0, 0.0);
        let mut p = kb / eps_b;
        for j in (0..n - 1).rev() {
            h += self.jumps[j] * p;
            if j >= 1 {
                let eps = self.eps[j];
                let d = self.thickness[j];
                let k = kappa(q, eps, self.k0);
                let decay = (-2.0 * k * d).exp();
                let ch = 0.5 * (1.0 + decay);
                // sinh(kd)/k scaled by exp(-kd), finite as k -> 0.
                let kd = k * d;
                let sh_over_k = if kd.norm() < 1e-6 {
                    d * (1.0 - kd + kd * kd * (2.0 / 3.0))
                } else {
                    0.5 * (1.0 - decay) / k
                };
                let sh_times_k = k * k * sh_over_k;
                let h_next = ch * h + eps * sh_over_k * p;
                let p_next = sh_times_k / eps * h + ch * p;
                h = h_next;
                p = p_next;
            }
        }
        Ok((p + kt / eps_t * h) * (eps_b * eps_t) / (kb * kt))
    }

    /// Magnitude of the largest term of `D`, used to judge residuals.
    pub fn scale(&self, q: Complex64) -> f64 {
        let n = self.eps.len();
        let kb = kappa(q, self.eps[n - 1], self.k0);
        let kt = kappa(q, self.eps[0], self.k0);
        let jump = self.jumps.iter().map(|j| j.norm()).fold(0.0, f64::max);
        (self.eps[n - 1] / kb.norm()).max(self.eps[0] / kt.norm()).max(jump)
    }

    /// Sign-preserving real residual of the lossless (`tau -> infinity`)
    /// problem at real `q` above the cladding light lines.
    fn lossless_indicator(&self, q: f64) -> f64 {
        let n = self.eps.len();
        let k02 = self.k0 * self.k0;
        let (eps_b, eps_t) = (self.eps[n - 1], self.eps[0]);
        let kb = (q * q - eps_b * k02).max(0.0).sqrt();
        let kt = (q * q - eps_t * k02).max(0.0).sqrt();
        let mut h = 1.0;
        let mut p = kb / eps_b;
        for j in (0..n - 1).rev() {
            h += self.lossless_jumps[j] * p;
            if j >= 1 {
                let eps = self.eps[j];
                let d = self.thickness[j];
                let k2 = q * q - eps * k02;
                let (ch, sh_over_k, sh_times_k) = if k2 >= 0.0 {
                    let k = k2.sqrt();
                    let decay = (-2.0 * k * d).exp();
                    let sok = if k * d < 1e-8 { d } else { 0.5 * (1.0 - decay) / k };
                    (0.5 * (1.0 + decay), sok, k2 * sok)
                } else {
                    let b = (-k2).sqrt();
                    let (s, c) = (b * d).sin_cos();
                    let sob = if b * d < 1e-8 { d } else { s / b };
                    (c, sob, -b * s)
                };
                let h_next = ch * h + eps * sh_over_k * p;
                let p_next = sh_times_k / eps * h + ch * p;
                let norm = h_next.abs().max(p_next.abs() / self.k0).max(f64::MIN_POSITIVE);
                h = h_next / norm;
                p = p_next / norm;
            }
        }
        p + kt / eps_t * h
    }
}

/// `D(q, omega)` for `stack`.
pub fn dispersion_residual(stack: &LayeredStack, q: Complex64, omega: f64) -> Result<Complex64> {
    Dispersion::new(stack, omega)?.residual(q)
}

/// Closed-form residual for a sheet between two half-spaces.
pub fn two_half_space_residual(
    eps_top: f64,
    eps_bottom: f64,
    sigma: Complex64,
    q: Complex64,
    omega: f64,
) -> Complex64 {
    let k0 = free_space_wavenumber(omega);
    eps_top / kappa(q, eps_top, k0)
        + eps_bottom / kappa(q, eps_bottom, k0)
        + I * sigma / (omega * VACUUM_PERMITTIVITY)
}

/// Exact root for a free-standing sheet: `kappa = 2 i omega eps0 / sigma`.
pub fn free_standing_wavevector(sheet: &GrapheneSheet, omega: f64) -> Result<Complex64> {
    let sigma = intraband_conductivity(sheet, omega)?.value();
    let k0 = free_space_wavenumber(omega);
    let kap = 2.0 * I * omega * VACUUM_PERMITTIVITY / sigma;
    Ok((kap * kap + k0 * k0).sqrt())
}

/// Quasi-static seed `i (eps_above + eps_below) omega eps0 / sigma`, using the
/// layers adjacent to the first sheet.
pub fn quasi_static_seed(stack: &LayeredStack, omega: f64) -> Result<Complex64> {
    let (above, below) = stack.sheet_neighbours();
    let sigma = intraband_conductivity(&stack.sheets()[0].1, omega)?.value();
    Ok(I * (above + below) * omega * VACUUM_PERMITTIVITY / sigma)
}

fn validate_root(disp: &Dispersion, stack: &LayeredStack, q: Complex64) -> Result<ModeSolution> {
    let residual = disp.residual(q)?.norm() / disp.scale(q);
    if !(residual < RESIDUAL_TOLERANCE) {
        return Err(Error::NoConvergence {
            iterations: 0,
            last_q: q,
        });
    }
    let k0 = disp.k0();
    let n_clad = stack.max_cladding_index();
    if !(q.re > k0 * n_clad) {
        return Err(Error::NotBound {
            q,
            reason: format!("Re q below cladding light line (n_eff = {:.6})", q.re / k0),
        });
    }
    if !(q.im > 0.0) {
        return Err(Error::NotBound {
            q,
            reason: "Im q <= 0".into(),
        });
    }
    for eps in [stack.top().permittivity(), stack.bottom().permittivity()] {
        if !(kappa(q, eps, k0).re > 0.0) {
            return Err(Error::NotBound {
                q,
                reason: "cladding field does not decay".into(),
            });
        }
    }
    Ok(ModeSolution {
        angular_frequency: disp.angular_frequency(),
        q,
        residual,
    })
}

fn refine(disp: &Dispersion, stack: &LayeredStack, seed: Complex64, opts: &SolverOptions) -> Result<ModeSolution> {
    let q = muller(|q| disp.residual(q), seed, opts)?;
    // D depends on q only through q^2.
    let q = if q.re < 0.0 { -q } else { q };
    validate_root(disp, stack, q)
}

/// Smallest real root of the lossless problem, if any, below an upper
/// bound derived from the quasi-static seed.
fn lowest_lossless_root(disp: &Dispersion, stack: &LayeredStack, omega: f64) -> Option<f64> {
    let k0 = disp.k0();
    let n_lo = stack.max_cladding_index();
    let eps_max = stack.layers().iter().map(|l| l.permittivity()).fold(1.0, f64::max);
    let (above, below) = stack.sheet_neighbours();
    let a = drude_weight(&stack.sheets()[0].1);
    let q_static = (above + below) * omega * omega * VACUUM_PERMITTIVITY / a;
    let n_hi = (2.0 * q_static / k0).max(1.05 * eps_max.sqrt()).max(1.5 * n_lo);

    const POINTS: usize = 4000;
    let at = |i: usize| {
        let t = i as f64 / POINTS as f64;
        k0 * (n_lo + (n_hi - n_lo) * (1e-9 + t * t))
    };
    let mut prev_q = at(0);
    let mut prev = disp.lossless_indicator(prev_q);
    for i in 1..=POINTS {
        let q = at(i);
        let val = disp.lossless_indicator(q);
        if val == 0.0 {
            return Some(q);
        }
        if val.signum() != prev.signum() {
            let (mut lo, mut hi, mut f_lo) = (prev_q, q, prev);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = disp.lossless_indicator(mid);
                if fm.signum() == f_lo.signum() {
                    lo = mid;
                    f_lo = fm;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-14 * hi {
                    break;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        prev = val;
        prev_q = q;
    }
    None
}

/// Follows a lossless root as the scattering rate is ramped up to its
/// physical value.
fn continue_from_lossless(
    stack: &LayeredStack,
    omega: f64,
    q_lossless: f64,
    opts: &SolverOptions,
) -> Result<ModeSolution> {
    const LOSS_STEPS: [f64; 8] = [1e-3, 0.01, 0.05, 0.15, 0.3, 0.5, 0.75, 1.0];
    let mut q = Complex64::new(q_lossless, 0.0);
    for &fraction in &LOSS_STEPS[..LOSS_STEPS.len() - 1] {
        let damped = stack.map_sheets(|s| s.with_relaxation_time(s.relaxation_time() / fraction))?;
        let disp = Dispersion::new(&damped, omega)?;
        q = muller(|z| disp.residual(z), q, opts)?;
        if q.re < 0.0 {
            q = -q;
        }
    }
    let disp = Dispersion::new(stack, omega)?;
    refine(&disp, stack, q, opts)
}

/// Fundamental (lowest `Re q`) bound TM mode of `stack` at `omega`.
///
/// With a guess the root is refined from it directly. Without one, the
/// quasi-static seed is refined; stacks with finite layers are additionally
/// scanned along the lossless dispersion curve for bound modes below the
/// plasmon branch, and the lowest `Re q` root wins.
pub fn find_mode(
    stack: &LayeredStack,
    omega: f64,
    initial_guess: Option<Complex64>,
    opts: &SolverOptions,
) -> Result<ModeSolution> {
    opts.validate()?;
    let disp = Dispersion::new(stack, omega)?;
    if let Some(guess) = initial_guess {
        return refine(&disp, stack, guess, opts);
    }
    let seed = quasi_static_seed(stack, omega)?;
    let from_seed = refine(&disp, stack, seed, opts);
    if stack.is_two_half_space() && from_seed.is_ok() {
        return from_seed;
    }
    let from_scan = lowest_lossless_root(&disp, stack, omega)
        .map(|q| continue_from_lossless(stack, omega, q, opts));
    match (from_seed, from_scan) {
        (Ok(a), Some(Ok(b))) => Ok(if b.q.re < a.q.re { b } else { a }),
        (Ok(a), _) => Ok(a),
        (Err(_), Some(Ok(b))) => Ok(b),
        (Err(e), _) => Err(e),
    }
}

/// Solves a strictly increasing frequency grid (Hz) by continuation: each
/// point starts from the previous converged root scaled by the frequency
/// ratio. For stacks with finite layers the continued root is kept only if
/// no lower-`Re q` mode exists. Failures are reported per point.
pub fn trace_dispersion(
    stack: &LayeredStack,
    frequencies: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<Result<ModeSolution>>> {
    opts.validate()?;
    if frequencies.is_empty() {
        return Err(Error::invalid("frequency grid is empty"));
    }
    if frequencies.iter().any(|f| !(*f > 0.0 && f.is_finite())) {
        return Err(Error::invalid("frequencies must be positive"));
    }
    if frequencies.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("frequency grid must be strictly increasing"));
    }
    let mut out = Vec::with_capacity(frequencies.len());
    let mut previous: Option<(f64, Complex64)> = None;
    for &f in frequencies {
        let omega = angular_frequency(f);
        let result = match previous {
            Some((f_prev, q_prev)) if stack.is_two_half_space() => {
                find_mode(stack, omega, Some(q_prev * (f / f_prev)), opts).or_else(|_| find_mode(stack, omega, None, opts))
            }
            // Finite layers can bring a new lowest mode into the band, so the
            // continued root competes with a full search.
            Some((f_prev, q_prev)) => {
                let full = find_mode(stack, omega, None, opts);
                match (find_mode(stack, omega, Some(q_prev * (f / f_prev)), opts), full) {
                    (Ok(a), Ok(b)) => Ok(if a.q.re < b.q.re { a } else { b }),
                    (Ok(a), Err(_)) => Ok(a),
                    (Err(_), full) => full,
                }
            }
            None => find_mode(stack, omega, None, opts),
        };
        previous = result.as_ref().ok().map(|m| (f, m.q));
        out.push(result);
    }
    Ok(out)
}

/// One row of a stack figure-of-merit sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct StackMetrics {
    pub chemical_potential: f64,
    pub effective_index: f64,
    pub normalized_propagation_length: f64,
    pub resonant_length: f64,
    pub mode: ModeSolution,
}

/// Effective index, normalized propagation length and resonant length at
/// frequency `f` (Hz) for each chemical potential (eV), applied to every
/// sheet of `stack`. Rows are independent and solved concurrently.
pub fn stack_metrics_sweep(
    stack: &LayeredStack,
    f: f64,
    chemical_potentials: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<Result<StackMetrics>>> {
    opts.validate()?;
    if !(f > 0.0 && f.is_finite()) {
        return Err(Error::invalid("frequency must be positive"));
    }
    if chemical_potentials.is_empty() {
        return Err(Error::invalid("chemical potential grid is empty"));
    }
    let omega = angular_frequency(f);
    Ok(chemical_potentials
        .par_iter()
        .map(|&ef| {
            let s = stack.map_sheets(|s| s.with_chemical_potential(ef))?;
            let mode = find_mode(&s, omega, None, opts)?;
            Ok(StackMetrics {
                chemical_potential: ef,
                effective_index: mode.effective_index(),
                normalized_propagation_length: mode.normalized_propagation_length(),
                resonant_length: mode.resonant_length(),
                mode,
            })
        })
        .collect())
}

/// Free-space wavelength (m) at `f` (Hz).
pub fn free_space_wavelength(f: f64) -> f64 {
    LIGHT_SPEED / f
}
