//! Layered dielectric stacks carrying graphene sheets at their interfaces.
//!
//! Layers are ordered top cladding first. Interface `i` separates layer `i`
//! from layer `i + 1`.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::conductivity::GrapheneSheet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DielectricLayer {
    permittivity: f64,
    /// `None` marks a semi-infinite cladding.
    thickness: Option<f64>,
}

impl DielectricLayer {
    pub fn finite(permittivity: f64, thickness: f64) -> Result<Self> {
        check_permittivity(permittivity)?;
        if !(thickness > 0.0 && thickness.is_finite()) {
            return Err(Error::invalid(format!("layer thickness must be > 0, got {thickness}")));
        }
        Ok(Self {
            permittivity,
            thickness: Some(thickness),
        })
    }

    pub fn semi_infinite(permittivity: f64) -> Result<Self> {
        check_permittivity(permittivity)?;
        Ok(Self {
            permittivity,
            thickness: None,
        })
    }

    pub fn permittivity(&self) -> f64 {
        self.permittivity
    }

    pub fn thickness(&self) -> Option<f64> {
        self.thickness
    }

    pub fn is_semi_infinite(&self) -> bool {
        self.thickness.is_none()
    }

    pub fn index(&self) -> f64 {
        self.permittivity.sqrt()
    }

    fn scaled(&self, factor: f64) -> Self {
        Self {
            permittivity: self.permittivity * factor,
            thickness: self.thickness,
        }
    }
}

fn check_permittivity(eps: f64) -> Result<()> {
    if eps >= 1.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("relative permittivity must be >= 1, got {eps}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StackKind {
    /// Graphene on a semi-infinite low-index substrate.
    G,
    /// Graphene on a high-index film over the low-index substrate.
    H1G,
    /// Graphene between two high-index films over the low-index substrate.
    H2G,
    Custom,
}

impl fmt::Display for StackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StackKind::G => "G",
            StackKind::H1G => "H1G",
            StackKind::H2G => "H2G",
            StackKind::Custom => "custom",
        })
    }
}

impl FromStr for StackKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "G" => Ok(StackKind::G),
            "H1G" => Ok(StackKind::H1G),
            "H2G" => Ok(StackKind::H2G),
            "CUSTOM" => Ok(StackKind::Custom),
            _ => Err(Error::invalid(format!("unknown stack `{s}` (expected G, H1G, H2G or custom)"))),
        }
    }
}

/// Geometry of the built-in stacks. These numbers are configuration data
/// and every field can be overridden from a run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PresetGeometry {
    pub cover_permittivity: f64,
    /// Low-index substrate (quartz).
    pub lim_permittivity: f64,
    /// High-index film (silicon-like).
    pub him_permittivity: f64,
    pub h1g_him_thickness: f64,
    /// Thickness of each of the two H2G films.
    pub h2g_him_thickness: f64,
}

impl Default for PresetGeometry {
    fn default() -> Self {
        Self {
            cover_permittivity: 1.0,
            lim_permittivity: 3.8,
            him_permittivity: 11.9,
            h1g_him_thickness: 10e-6,
            h2g_him_thickness: 5e-6,
        }
    }
}

impl PresetGeometry {
    pub fn build(&self, kind: StackKind, sheet: GrapheneSheet) -> Result<LayeredStack> {
        let cover = DielectricLayer::semi_infinite(self.cover_permittivity)?;
        let lim = DielectricLayer::semi_infinite(self.lim_permittivity)?;
        match kind {
            StackKind::G => LayeredStack::with_kind(vec![cover, lim], vec![(0, sheet)], kind),
            StackKind::H1G => {
                let him = DielectricLayer::finite(self.him_permittivity, self.h1g_him_thickness)?;
                LayeredStack::with_kind(vec![cover, him, lim], vec![(0, sheet)], kind)
            }
            StackKind::H2G => {
                let him = DielectricLayer::finite(self.him_permittivity, self.h2g_him_thickness)?;
                LayeredStack::with_kind(vec![cover, him, him, lim], vec![(1, sheet)], kind)
            }
            StackKind::Custom => Err(Error::invalid("custom stacks have no preset geometry")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayeredStack {
    layers: Vec<DielectricLayer>,
    sheets: Vec<(usize, GrapheneSheet)>,
    kind: StackKind,
}

impl LayeredStack {
    pub fn new(layers: Vec<DielectricLayer>, sheets: Vec<(usize, GrapheneSheet)>) -> Result<Self> {
        Self::with_kind(layers, sheets, StackKind::Custom)
    }

    pub fn with_kind(
        layers: Vec<DielectricLayer>,
        mut sheets: Vec<(usize, GrapheneSheet)>,
        kind: StackKind,
    ) -> Result<Self> {
        if layers.len() < 2 {
            return Err(Error::invalid("a stack needs at least two layers"));
        }
        let last = layers.len() - 1;
        if !layers[0].is_semi_infinite() || !layers[last].is_semi_infinite() {
            return Err(Error::invalid("first and last layers must be semi-infinite"));
        }
        if layers[1..last].iter().any(DielectricLayer::is_semi_infinite) {
            return Err(Error::invalid("only the claddings may be semi-infinite"));
        }
        if sheets.is_empty() {
            return Err(Error::invalid("a stack needs at least one graphene sheet"));
        }
        sheets.sort_by_key(|(i, _)| *i);
        for pair in sheets.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::invalid(format!("two sheets at interface {}", pair[0].0)));
            }
        }
        if let Some((i, _)) = sheets.iter().find(|(i, _)| *i >= last) {
            return Err(Error::invalid(format!(
                "sheet interface {i} out of range (stack has {last} interfaces)"
            )));
        }
        Ok(Self { layers, sheets, kind })
    }

    /// Sheet between two semi-infinite half-spaces.
    pub fn two_half_space(eps_top: f64, eps_bottom: f64, sheet: GrapheneSheet) -> Result<Self> {
        Self::new(
            vec![
                DielectricLayer::semi_infinite(eps_top)?,
                DielectricLayer::semi_infinite(eps_bottom)?,
            ],
            vec![(0, sheet)],
        )
    }

    pub fn free_standing(sheet: GrapheneSheet) -> Result<Self> {
        Self::two_half_space(1.0, 1.0, sheet)
    }

    pub fn layers(&self) -> &[DielectricLayer] {
        &self.layers
    }

    pub fn sheets(&self) -> &[(usize, GrapheneSheet)] {
        &self.sheets
    }

    pub fn kind(&self) -> StackKind {
        self.kind
    }

    pub fn top(&self) -> &DielectricLayer {
        &self.layers[0]
    }

    pub fn bottom(&self) -> &DielectricLayer {
        &self.layers[self.layers.len() - 1]
    }

    pub fn is_two_half_space(&self) -> bool {
        self.layers.len() == 2
    }

    /// Largest cladding refractive index; bound modes lie above `k0` times this.
    pub fn max_cladding_index(&self) -> f64 {
        self.top().index().max(self.bottom().index())
    }

    /// Permittivities on either side of the first sheet.
    pub fn sheet_neighbours(&self) -> (f64, f64) {
        let i = self.sheets[0].0;
        (self.layers[i].permittivity, self.layers[i + 1].permittivity)
    }

    /// Same structure mirrored top to bottom.
    pub fn reversed(&self) -> Self {
        let n = self.layers.len();
        let layers = self.layers.iter().rev().copied().collect();
        let sheets = self.sheets.iter().map(|(i, s)| (n - 2 - i, *s)).collect();
        Self::with_kind(layers, sheets, StackKind::Custom).expect("mirror of a valid stack")
    }

    /// Replaces every sheet with `sheet`.
    pub fn with_uniform_sheets(&self, sheet: GrapheneSheet) -> Self {
        let mut out = self.clone();
        for (_, s) in out.sheets.iter_mut() {
            *s = sheet;
        }
        out
    }

    /// Applies `f` to every sheet.
    pub fn map_sheets(&self, f: impl Fn(&GrapheneSheet) -> Result<GrapheneSheet>) -> Result<Self> {
        let mut out = self.clone();
        for (_, s) in out.sheets.iter_mut() {
            *s = f(s)?;
        }
        Ok(out)
    }

    /// Multiplies every permittivity by `factor` (>= 1).
    pub fn with_scaled_permittivity(&self, factor: f64) -> Result<Self> {
        if !(factor >= 1.0) {
            return Err(Error::invalid("permittivity scale factor must be >= 1"));
        }
        let mut out = self.clone();
        out.layers = self.layers.iter().map(|l| l.scaled(factor)).collect();
        out.kind = StackKind::Custom;
        Ok(out)
    }
}
