//! Graphene plasmonic terahertz antenna toolkit.
//!
//! - [`conductivity`]: intraband sheet conductivity, sheet impedance and
//!   bias tuning.
//! - [`mode`]: TM plasmon dispersion and mode solving for layered stacks.
//! - [`antenna`]: dipole resonance, miniaturization and efficiency ordering.
//! - [`scenario`]: application footprint requirements and fit checks.
//! - [`config`], [`sweep`], [`table`]: batch sweeps and deterministic output.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod antenna;
pub mod conductivity;
pub mod config;
pub mod constants;
pub mod error;
pub mod mode;
pub mod roots;
pub mod scenario;
pub mod stack;
pub mod sweep;
pub mod table;

pub use antenna::{
    efficiency_proxy, metal_dipole_resonance, miniaturization_factor, resonance_frequency,
    resonant_length, DipoleGeometry, ResonancePrediction,
};
pub use conductivity::{
    chemical_potential_from_bias, drude_weight, intraband_conductivity, surface_impedance,
    ComplexConductivity, GrapheneSheet,
};
pub use config::{parse_config, OutputFormat, ParamValue, Parameter, SweepSpec, Target};
pub use constants::PhysicalConstants;
pub use error::{Error, Result};
pub use mode::{
    dispersion_residual, find_mode, stack_metrics_sweep, trace_dispersion, ModeSolution,
    StackMetrics,
};
pub use num_complex::Complex64;
pub use roots::SolverOptions;
pub use scenario::{
    builtin_scenarios, fits_footprint, sdm_cell_size, FeasibilityReport, ScenarioName,
    ScenarioRequirements,
};
pub use stack::{DielectricLayer, LayeredStack, PresetGeometry, StackKind};
pub use sweep::run_sweep;
pub use table::{emit_csv, emit_plotdata, Cell, Column, ResultTable, RowStatus};
