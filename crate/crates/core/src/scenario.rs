//! Area-constrained application requirements and antenna footprint checks.
//!
//! All quantities are stored in SI units: node size in m^2, transmission
//! range in m and data rate in bit/s.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::constants::LIGHT_SPEED;
use crate::error::{Error, Result};
use crate::table::{Cell, Column, ResultTable, RowStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScenarioName {
    /// Wireless nanosensor network.
    Wnsn,
    /// Software-defined metamaterial.
    Sdm,
    /// Wireless network-on-chip.
    Wnoc,
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScenarioName::Wnsn => "WNSN",
            ScenarioName::Sdm => "SDM",
            ScenarioName::Wnoc => "WNoC",
        })
    }
}

impl FromStr for ScenarioName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "wnsn" => Ok(ScenarioName::Wnsn),
            "sdm" => Ok(ScenarioName::Sdm),
            "wnoc" => Ok(ScenarioName::Wnoc),
            _ => Err(Error::invalid(format!("unknown scenario `{s}` (expected WNSN, SDM or WNoC)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn is_valid(&self) -> bool {
        self.min > 0.0 && self.min <= self.max
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.min && x <= self.max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRequirements {
    pub name: ScenarioName,
    /// m^2
    pub node_size: Range,
    /// m
    pub tx_range: Range,
    /// bit/s
    pub data_rate: Range,
}

// 1 um^2 = 1e-12 m^2, 1 mm^2 = 1e-6 m^2, 1 cm = 1e-2 m, 1 Gbps = 1e9 bit/s.
const BUILTIN: [ScenarioRequirements; 3] = [
    ScenarioRequirements {
        name: ScenarioName::Wnsn,
        node_size: Range::new(1e-12, 1e-10),
        tx_range: Range::new(1e-3, 1.0),
        data_rate: Range::new(1e6, 1e8),
    },
    ScenarioRequirements {
        name: ScenarioName::Sdm,
        node_size: Range::new(1e-8, 1e-4),
        tx_range: Range::new(1e-3, 1.0),
        data_rate: Range::new(1e7, 1e9),
    },
    ScenarioRequirements {
        name: ScenarioName::Wnoc,
        node_size: Range::new(1e-8, 1e-6),
        tx_range: Range::new(1e-3, 0.1),
        data_rate: Range::new(1e10, 1e11),
    },
];

/// The WNSN, SDM and WNoC requirement rows.
pub fn builtin_scenarios() -> Vec<ScenarioRequirements> {
    BUILTIN.to_vec()
}

/// The builtin requirement rows as a table, one row per scenario.
pub fn scenarios_table() -> ResultTable {
    let columns = [
        ("scenario", "-"),
        ("node_size_min", "m^2"),
        ("node_size_max", "m^2"),
        ("tx_range_min", "m"),
        ("tx_range_max", "m"),
        ("data_rate_min", "bit/s"),
        ("data_rate_max", "bit/s"),
    ];
    let mut table = ResultTable::new(columns.iter().map(|(n, u)| Column::new(*n, *u)).collect())
        .expect("static columns are valid");
    for s in BUILTIN {
        let cells = vec![
            Cell::Text(s.name.to_string()),
            s.node_size.min.into(),
            s.node_size.max.into(),
            s.tx_range.min.into(),
            s.tx_range.max.into(),
            s.data_rate.min.into(),
            s.data_rate.max.into(),
        ];
        table.push(cells, RowStatus::Ok).expect("row matches columns");
    }
    table
}

pub fn scenario(name: ScenarioName) -> ScenarioRequirements {
    BUILTIN
        .iter()
        .copied()
        .find(|s| s.name == name)
        .expect("every scenario has a builtin row")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub scenario: ScenarioName,
    /// Bounding rectangle of the radiating element (m^2).
    pub footprint: f64,
    pub fits: bool,
    /// Linear headroom `sqrt(budget / footprint)`; `fits` iff `>= 1`.
    pub margin: f64,
    pub notes: String,
}

/// Checks `length * width` against `budget_fraction` of the scenario's
/// largest node size.
pub fn fits_footprint(
    resonant_length: f64,
    width: f64,
    scenario: &ScenarioRequirements,
    budget_fraction: f64,
) -> Result<FeasibilityReport> {
    if !(resonant_length > 0.0 && resonant_length.is_finite()) {
        return Err(Error::invalid("resonant length must be > 0"));
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::invalid("width must be > 0"));
    }
    if !(budget_fraction > 0.0 && budget_fraction <= 1.0) {
        return Err(Error::invalid(format!(
            "budget fraction must be in (0, 1], got {budget_fraction}"
        )));
    }
    let footprint = resonant_length * width;
    let budget = budget_fraction * scenario.node_size.max;
    let margin = (budget / footprint).sqrt();
    let fits = margin >= 1.0;
    let notes = format!(
        "tx range {:e}-{:e} m, data rate {:e}-{:e} bit/s (not evaluated)",
        scenario.tx_range.min, scenario.tx_range.max, scenario.data_rate.min, scenario.data_rate.max
    );
    Ok(FeasibilityReport {
        scenario: scenario.name,
        footprint,
        fits,
        margin,
        notes,
    })
}

/// Metamaterial unit-cell scale `lambda / 10` (m) at `f` (Hz).
pub fn sdm_cell_size(f: f64) -> Result<f64> {
    if !(f > 0.0 && f.is_finite()) {
        return Err(Error::invalid("frequency must be > 0"));
    }
    Ok(LIGHT_SPEED / f / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_rows() {
        let rows = builtin_scenarios();
        assert_eq!(rows.len(), 3);
        for r in &rows {
            assert!(r.node_size.is_valid() && r.tx_range.is_valid() && r.data_rate.is_valid());
        }
        assert_eq!(scenario(ScenarioName::Wnoc).data_rate.max, 100e9);
        assert_eq!(scenario(ScenarioName::Wnsn).node_size.min, 1e-12);
        let sdm = scenario(ScenarioName::Sdm);
        assert!((sdm.tx_range.min - 1e-3).abs() < 1e-18);
        assert!((sdm.tx_range.max - 1.0).abs() < 1e-15);
    }

    #[test]
    fn worked_examples() {
        let wnoc = fits_footprint(100e-6, 8e-6, &scenario(ScenarioName::Wnoc), 1.0).unwrap();
        assert!(wnoc.fits);
        assert!((wnoc.footprint - 0.0008e-6).abs() < 1e-20);
        assert!((wnoc.margin - 35.355_339_059_327_38).abs() < 1e-9);
        let wnsn = fits_footprint(20e-6, 8e-6, &scenario(ScenarioName::Wnsn), 1.0).unwrap();
        assert!(!wnsn.fits);
        assert!(wnsn.margin < 1.0);
    }

    #[test]
    fn budget_fraction_validated() {
        let s = scenario(ScenarioName::Sdm);
        assert!(fits_footprint(1e-5, 1e-6, &s, 0.0).is_err());
        assert!(fits_footprint(1e-5, 1e-6, &s, 1.5).is_err());
        assert!(fits_footprint(0.0, 1e-6, &s, 0.5).is_err());
        assert!(fits_footprint(1e-5, 1e-6, &s, 0.5).is_ok());
    }

    #[test]
    fn cell_size() {
        assert!((sdm_cell_size(1e12).unwrap() - 29.979_245_8e-6).abs() < 1e-15);
        assert!((sdm_cell_size(0.1e12).unwrap() - 299.792_458e-6).abs() < 1e-14);
        let a = sdm_cell_size(2e12).unwrap();
        assert!((sdm_cell_size(1e12).unwrap() - 2.0 * a).abs() < 1e-18);
        assert!(sdm_cell_size(0.0).is_err());
    }

    #[test]
    fn names_round_trip() {
        for r in builtin_scenarios() {
            assert_eq!(r.name.to_string().parse::<ScenarioName>().unwrap(), r.name);
        }
    }
}
