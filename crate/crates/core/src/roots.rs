//! Complex and real root finders used by the mode solver.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverOptions {
    /// Relative step tolerance `|dq|/|q|`.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 100,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance < 1e-2) {
            return Err(Error::invalid(format!(
                "tolerance must be in (0, 1e-2), got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations must be positive"));
        }
        Ok(())
    }
}

/// Muller iteration from `seed`, followed by a few Newton steps with a
/// central-difference derivative. Returns the point with the smallest
/// residual seen during the polish.
pub fn muller<F>(mut f: F, seed: Complex64, opts: &SolverOptions) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let mut x0 = seed * Complex64::new(0.99, 0.0);
    let mut x1 = seed * Complex64::new(1.0, 0.01);
    let mut x2 = seed;
    let mut f0 = f(x0)?;
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;

    let mut converged = false;
    for _ in 0..opts.max_iterations {
        if f2 == Complex64::new(0.0, 0.0) {
            converged = true;
            break;
        }
        let h1 = x1 - x0;
        let h2 = x2 - x1;
        let d1 = (f1 - f0) / h1;
        let d2 = (f2 - f1) / h2;
        let a = (d2 - d1) / (h2 + h1);
        let b = a * h2 + d2;
        let disc = (b * b - 4.0 * a * f2).sqrt();
        let den = if (b + disc).norm() > (b - disc).norm() {
            b + disc
        } else {
            b - disc
        };
        let mut dx = if den.norm() == 0.0 || !den.is_finite() {
            // Flat model: fall back to a small perturbation.
            x2 * 1e-3
        } else {
            -2.0 * f2 / den
        };
        if !dx.is_finite() {
            break;
        }
        let limit = 0.5 * x2.norm();
        if dx.norm() > limit {
            dx *= limit / dx.norm();
        }

        // Halve the step until the new point can be evaluated.
        let mut x3 = x2 + dx;
        let mut f3 = f(x3);
        let mut tries = 0;
        while f3.is_err() && tries < 20 {
            dx *= 0.5;
            x3 = x2 + dx;
            f3 = f(x3);
            tries += 1;
        }
        let f3 = f3?;

        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        x2 = x3;
        f2 = f3;
        if dx.norm() <= opts.tolerance * x2.norm() {
            converged = true;
            break;
        }
    }
    if !converged || !x2.is_finite() {
        return Err(Error::NoConvergence {
            iterations: opts.max_iterations,
            last_q: x2,
        });
    }
    newton_polish(&mut f, x2, f2)
}

fn newton_polish<F>(f: &mut F, start: Complex64, f_start: Complex64) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let mut best = (start, f_start.norm());
    let mut x = start;
    let mut fx = f_start;
    for _ in 0..8 {
        if fx.norm() == 0.0 {
            break;
        }
        let h = x.norm() * 1e-7;
        let (Ok(fp), Ok(fm)) = (f(x + h), f(x - h)) else {
            break;
        };
        let slope = (fp - fm) / (2.0 * h);
        if slope.norm() == 0.0 || !slope.is_finite() {
            break;
        }
        let step = fx / slope;
        x -= step;
        match f(x) {
            Ok(v) => fx = v,
            Err(_) => break,
        }
        if fx.norm() < best.1 {
            best = (x, fx.norm());
        } else if step.norm() <= 1e-15 * x.norm() {
            break;
        }
        if step.norm() <= 1e-16 * x.norm() {
            break;
        }
    }
    Ok(best.0)
}

/// Illinois false position on a bracketed sign change of a real function.
/// Stops once `|g| < abs_tol`.
pub fn illinois<F>(
    mut g: F,
    mut a: f64,
    mut b: f64,
    mut ga: f64,
    mut gb: f64,
    abs_tol: f64,
    max_iterations: usize,
) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if ga.abs() < abs_tol {
        return Ok((a, ga));
    }
    if gb.abs() < abs_tol {
        return Ok((b, gb));
    }
    if ga.signum() == gb.signum() {
        return Err(Error::invalid("root is not bracketed"));
    }
    let mut side = 0i8;
    for _ in 0..max_iterations {
        let mut c = (a * gb - b * ga) / (gb - ga);
        if !(c > a.min(b) && c < a.max(b)) {
            c = 0.5 * (a + b);
        }
        let gc = g(c)?;
        if gc.abs() < abs_tol {
            return Ok((c, gc));
        }
        if gc.signum() == gb.signum() {
            b = c;
            gb = gc;
            if side == -1 {
                ga *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            ga = gc;
            if side == 1 {
                gb *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()) {
            let (x, gx) = if ga.abs() < gb.abs() { (a, ga) } else { (b, gb) };
            return Ok((x, gx));
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iterations,
        last_q: Complex64::new(0.5 * (a + b), 0.0),
    })
}
