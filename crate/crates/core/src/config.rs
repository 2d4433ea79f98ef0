//! Run configuration documents.
//!
//! A configuration is a TOML document with these sections:
//!
//! ```toml
//! [sweep]
//! target = "conductivity"        # conductivity|dispersion|stack|antenna|scenario
//! variable = "frequency"
//! start = 0.1e12                 # or: values = [ ... ]
//! stop = 5e12
//! points = 50
//! spacing = "linear"             # or "log"
//!
//! [series]                       # optional: one curve per value
//! variable = "chemical_potential"
//! values = [0.2, 0.4]
//!
//! [fixed]
//! relaxation_time = 1e-12
//!
//! [stack]                        # optional preset overrides or custom layers
//! him_permittivity = 11.9
//!
//! [output]                       # optional
//! path = "out.csv"
//! format = "csv"                 # or "plot"
//! y = ["sigma_re", "sigma_im"]
//!
//! [solver]                       # optional
//! tolerance = 1e-12
//! max_iterations = 100
//! ```
//!
//! Unknown sections and keys are errors.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Deserialize;
use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::roots::SolverOptions;
use crate::scenario::ScenarioName;
use crate::stack::{DielectricLayer, PresetGeometry, StackKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Conductivity,
    Dispersion,
    Stack,
    Antenna,
    Scenario,
}

impl Target {
    pub const ALL: [Target; 5] = [
        Target::Conductivity,
        Target::Dispersion,
        Target::Stack,
        Target::Antenna,
        Target::Scenario,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Target::Conductivity => "conductivity",
            Target::Dispersion => "dispersion",
            Target::Stack => "stack",
            Target::Antenna => "antenna",
            Target::Scenario => "scenario",
        }
    }

    /// Parameters the target accepts.
    pub fn parameters(&self) -> &'static [Parameter] {
        use Parameter::*;
        match self {
            Target::Conductivity => &[Frequency, ChemicalPotential, RelaxationTime, Temperature],
            Target::Dispersion | Target::Stack => {
                &[Frequency, ChemicalPotential, RelaxationTime, Temperature, Stack]
            }
            Target::Antenna => &[
                Length,
                Width,
                Gap,
                SubstratePermittivity,
                EndCorrection,
                ChemicalPotential,
                RelaxationTime,
                Temperature,
            ],
            Target::Scenario => &[Length, Width, Scenario, BudgetFraction],
        }
    }

    /// Parameters without a default that must be swept, in a series or fixed.
    pub fn required(&self) -> &'static [Parameter] {
        use Parameter::*;
        match self {
            Target::Conductivity | Target::Dispersion | Target::Stack => {
                &[Frequency, ChemicalPotential, RelaxationTime]
            }
            Target::Antenna => &[Length, Width, Gap, SubstratePermittivity, ChemicalPotential, RelaxationTime],
            Target::Scenario => &[Length, Width, Scenario],
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::key("sweep.target", format!("unknown target `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parameter {
    Frequency,
    ChemicalPotential,
    RelaxationTime,
    Temperature,
    Length,
    Width,
    Gap,
    SubstratePermittivity,
    EndCorrection,
    BudgetFraction,
    Stack,
    Scenario,
}

impl Parameter {
    pub const ALL: [Parameter; 12] = [
        Parameter::Frequency,
        Parameter::ChemicalPotential,
        Parameter::RelaxationTime,
        Parameter::Temperature,
        Parameter::Length,
        Parameter::Width,
        Parameter::Gap,
        Parameter::SubstratePermittivity,
        Parameter::EndCorrection,
        Parameter::BudgetFraction,
        Parameter::Stack,
        Parameter::Scenario,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Parameter::Frequency => "frequency",
            Parameter::ChemicalPotential => "chemical_potential",
            Parameter::RelaxationTime => "relaxation_time",
            Parameter::Temperature => "temperature",
            Parameter::Length => "length",
            Parameter::Width => "width",
            Parameter::Gap => "gap",
            Parameter::SubstratePermittivity => "substrate_permittivity",
            Parameter::EndCorrection => "end_correction",
            Parameter::BudgetFraction => "budget_fraction",
            Parameter::Stack => "stack",
            Parameter::Scenario => "scenario",
        }
    }

    pub fn unit(&self) -> &'static str {
        match self {
            Parameter::Frequency => "Hz",
            Parameter::ChemicalPotential => "eV",
            Parameter::RelaxationTime => "s",
            Parameter::Temperature => "K",
            Parameter::Length | Parameter::Width | Parameter::Gap => "m",
            Parameter::SubstratePermittivity | Parameter::EndCorrection | Parameter::BudgetFraction => "1",
            Parameter::Stack | Parameter::Scenario => "-",
        }
    }

    pub fn is_text(&self) -> bool {
        matches!(self, Parameter::Stack | Parameter::Scenario)
    }

    fn default_value(&self) -> Option<ParamValue> {
        match self {
            Parameter::Temperature => Some(ParamValue::Number(crate::conductivity::DEFAULT_TEMPERATURE)),
            Parameter::EndCorrection | Parameter::BudgetFraction => Some(ParamValue::Number(1.0)),
            Parameter::Stack => Some(ParamValue::Text("G".into())),
            _ => None,
        }
    }

    fn check_number(&self, key: &str, x: f64) -> Result<()> {
        let ok = match self {
            Parameter::ChemicalPotential => x >= 0.0 && x.is_finite(),
            Parameter::SubstratePermittivity => x >= 1.0 && x.is_finite(),
            Parameter::EndCorrection => (0.5..=1.5).contains(&x),
            Parameter::BudgetFraction => x > 0.0 && x <= 1.0,
            _ => x > 0.0 && x.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::key(key, format!("value {x} out of range for {}", self.name())))
        }
    }

    fn check_text(&self, key: &str, s: &str) -> Result<()> {
        match self {
            Parameter::Stack => s.parse::<StackKind>().map(|_| ()),
            Parameter::Scenario => s.parse::<ScenarioName>().map(|_| ()),
            _ => unreachable!("numeric parameter"),
        }
        .map_err(|e| Error::key(key, e.to_string()))
    }
}

impl FromStr for Parameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Parameter::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown parameter `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Number(f64),
    Text(String),
}

impl ParamValue {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            ParamValue::Number(x) => Some(*x),
            ParamValue::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            ParamValue::Text(s) => Some(s),
            ParamValue::Number(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Plot,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "plot" => Ok(OutputFormat::Plot),
            _ => Err(Error::key("output.format", format!("expected csv or plot, got `{s}`"))),
        }
    }
}

/// Custom layer list from the `[stack]` section.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomStack {
    pub layers: Vec<DielectricLayer>,
    pub sheet_interfaces: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub target: Target,
    pub variable: Parameter,
    pub grid: Vec<f64>,
    pub series: Option<(Parameter, Vec<f64>)>,
    /// Fixed parameters, defaults applied.
    pub fixed: BTreeMap<Parameter, ParamValue>,
    pub geometry: PresetGeometry,
    pub custom_stack: Option<CustomStack>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    /// Plot series; empty means the target's default columns.
    pub plot_columns: Vec<String>,
    pub solver: SolverOptions,
}

impl SweepSpec {
    /// Minimal valid spec; `fixed` gets defaults applied by [`SweepSpec::validate`].
    pub fn new(target: Target, variable: Parameter, grid: Vec<f64>) -> Self {
        Self {
            target,
            variable,
            grid,
            series: None,
            fixed: BTreeMap::new(),
            geometry: PresetGeometry::default(),
            custom_stack: None,
            output: None,
            format: OutputFormat::Csv,
            plot_columns: Vec::new(),
            solver: SolverOptions::default(),
        }
    }

    pub fn number(&self, p: Parameter) -> Option<f64> {
        self.fixed.get(&p).and_then(ParamValue::as_number)
    }

    pub fn text(&self, p: Parameter) -> Option<&str> {
        self.fixed.get(&p).and_then(ParamValue::as_text)
    }

    /// Checks invariants and fills in defaults.
    pub fn validate(mut self) -> Result<Self> {
        let allowed = self.target.parameters();
        let var_key = "sweep.variable";
        if !allowed.contains(&self.variable) {
            return Err(Error::key(
                var_key,
                format!("`{}` is not a parameter of target {}", self.variable.name(), self.target),
            ));
        }
        if self.variable.is_text() {
            return Err(Error::key(var_key, "only numeric parameters can be swept"));
        }
        check_grid("sweep.values", self.variable, &self.grid)?;

        if let Some((p, values)) = &self.series {
            if !allowed.contains(p) || p.is_text() {
                return Err(Error::key("series.variable", format!("cannot use `{}` as a series", p.name())));
            }
            if *p == self.variable {
                return Err(Error::key("series.variable", "series variable equals the swept variable"));
            }
            check_grid("series.values", *p, values)?;
        }

        for (p, v) in &self.fixed {
            let key = format!("fixed.{}", p.name());
            if !allowed.contains(p) {
                return Err(Error::key(key, format!("not a parameter of target {}", self.target)));
            }
            if *p == self.variable {
                return Err(Error::key(key, "parameter is both swept and fixed"));
            }
            if self.series.as_ref().is_some_and(|(s, _)| s == p) {
                return Err(Error::key(key, "parameter is both a series and fixed"));
            }
            match (p.is_text(), v) {
                (false, ParamValue::Number(x)) => p.check_number(&key, *x)?,
                (true, ParamValue::Text(s)) => p.check_text(&key, s)?,
                (false, _) => return Err(Error::key(key, "expected a number")),
                (true, _) => return Err(Error::key(key, "expected a string")),
            }
        }

        let varied = |p: &Parameter| *p == self.variable || self.series.as_ref().is_some_and(|(s, _)| s == p);
        for p in allowed {
            if varied(p) || self.fixed.contains_key(p) {
                continue;
            }
            if let Some(d) = p.default_value() {
                self.fixed.insert(*p, d);
            }
        }
        for p in self.target.required() {
            if !varied(p) && !self.fixed.contains_key(p) {
                return Err(Error::key(format!("fixed.{}", p.name()), "required parameter is missing"));
            }
        }

        if self.text(Parameter::Stack).map(|s| s.eq_ignore_ascii_case("custom")) == Some(true)
            && self.custom_stack.is_none()
        {
            return Err(Error::key("stack.layers", "stack = \"custom\" needs [stack] layers and sheets"));
        }
        self.solver
            .validate()
            .map_err(|e| Error::key("solver", e.to_string()))?;
        Ok(self)
    }
}

fn check_grid(key: &str, p: Parameter, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::key(key, "grid is empty"));
    }
    for &x in grid {
        p.check_number(key, x)?;
    }
    let increasing = grid.windows(2).all(|w| w[1] > w[0]);
    let decreasing = grid.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(Error::key(key, "grid must be strictly monotone"));
    }
    Ok(())
}

/// Evenly spaced grid of `points` values from `start` to `stop`.
pub fn make_grid(start: f64, stop: f64, points: usize, log: bool) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::invalid("grid needs at least one point"));
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    if log && !(start > 0.0 && stop > 0.0) {
        return Err(Error::invalid("log spacing needs positive bounds"));
    }
    let n = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let t = i as f64 / n;
            if i == points - 1 {
                stop
            } else if log {
                (start.ln() + (stop.ln() - start.ln()) * t).exp()
            } else {
                start + (stop - start) * t
            }
        })
        .collect())
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
    (line, column)
}

fn check_keys(section: &str, table: &Table, allowed: &[&str]) -> Result<()> {
    for k in table.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::key(format!("{section}.{k}"), "unknown key"));
        }
    }
    Ok(())
}

fn section<'a>(doc: &'a Table, name: &str) -> Result<Option<&'a Table>> {
    match doc.get(name) {
        None => Ok(None),
        Some(Value::Table(t)) => Ok(Some(t)),
        Some(_) => Err(Error::key(name, "expected a [section]")),
    }
}

fn number(key: &str, v: &Value) -> Result<f64> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(Error::key(key, "expected a number")),
    }
}

fn string<'a>(key: &str, v: &'a Value) -> Result<&'a str> {
    v.as_str().ok_or_else(|| Error::key(key, "expected a string"))
}

fn number_list(key: &str, v: &Value) -> Result<Vec<f64>> {
    let arr = v.as_array().ok_or_else(|| Error::key(key, "expected an array of numbers"))?;
    arr.iter().map(|x| number(key, x)).collect()
}

fn required<'a>(t: &'a Table, section: &str, key: &str) -> Result<&'a Value> {
    t.get(key)
        .ok_or_else(|| Error::key(format!("{section}.{key}"), "missing"))
}

fn read_grid(t: &Table, section: &str) -> Result<Vec<f64>> {
    let key = |k: &str| format!("{section}.{k}");
    if let Some(v) = t.get("values") {
        for k in ["start", "stop", "points", "spacing"] {
            if t.contains_key(k) {
                return Err(Error::key(key(k), "use either values or start/stop/points"));
            }
        }
        return number_list(&key("values"), v);
    }
    let start = number(&key("start"), required(t, section, "start")?)?;
    let stop = number(&key("stop"), required(t, section, "stop")?)?;
    let points = match required(t, section, "points")? {
        Value::Integer(n) if *n >= 1 => *n as usize,
        _ => return Err(Error::key(key("points"), "expected a positive integer")),
    };
    let log = match t.get("spacing") {
        None => false,
        Some(v) => match string(&key("spacing"), v)? {
            "linear" => false,
            "log" => true,
            other => return Err(Error::key(key("spacing"), format!("expected linear or log, got `{other}`"))),
        },
    };
    make_grid(start, stop, points, log).map_err(|e| Error::key(key("points"), e.to_string()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerEntry {
    permittivity: f64,
    thickness: Option<f64>,
}

fn read_stack_section(t: &Table) -> Result<(PresetGeometry, Option<CustomStack>)> {
    const GEOMETRY_KEYS: [&str; 5] = [
        "cover_permittivity",
        "lim_permittivity",
        "him_permittivity",
        "h1g_him_thickness",
        "h2g_him_thickness",
    ];
    let mut allowed = GEOMETRY_KEYS.to_vec();
    allowed.extend(["layers", "sheets"]);
    check_keys("stack", t, &allowed)?;

    let mut geometry = PresetGeometry::default();
    for k in GEOMETRY_KEYS {
        let Some(v) = t.get(k) else { continue };
        let key = format!("stack.{k}");
        let x = number(&key, v)?;
        let ok = if k.ends_with("thickness") { x > 0.0 && x.is_finite() } else { x >= 1.0 && x.is_finite() };
        if !ok {
            return Err(Error::key(key, format!("value {x} out of range")));
        }
        match k {
            "cover_permittivity" => geometry.cover_permittivity = x,
            "lim_permittivity" => geometry.lim_permittivity = x,
            "him_permittivity" => geometry.him_permittivity = x,
            "h1g_him_thickness" => geometry.h1g_him_thickness = x,
            _ => geometry.h2g_him_thickness = x,
        }
    }

    let custom = match (t.get("layers"), t.get("sheets")) {
        (None, None) => None,
        (Some(layers), Some(sheets)) => {
            let entries: Vec<LayerEntry> = layers
                .clone()
                .try_into()
                .map_err(|e: toml::de::Error| Error::key("stack.layers", e.message().to_string()))?;
            let layers = entries
                .iter()
                .map(|l| match l.thickness {
                    Some(d) => DielectricLayer::finite(l.permittivity, d),
                    None => DielectricLayer::semi_infinite(l.permittivity),
                })
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::key("stack.layers", e.to_string()))?;
            let sheet_interfaces = sheets
                .as_array()
                .ok_or_else(|| Error::key("stack.sheets", "expected an array of interface indices"))?
                .iter()
                .map(|v| match v {
                    Value::Integer(i) if *i >= 0 => Ok(*i as usize),
                    _ => Err(Error::key("stack.sheets", "expected non-negative integers")),
                })
                .collect::<Result<Vec<_>>>()?;
            Some(CustomStack {
                layers,
                sheet_interfaces,
            })
        }
        (Some(_), None) => return Err(Error::key("stack.sheets", "missing (layers given)")),
        (None, Some(_)) => return Err(Error::key("stack.layers", "missing (sheets given)")),
    };
    Ok((geometry, custom))
}

/// Parses and validates a run configuration.
pub fn parse_config(text: &str) -> Result<SweepSpec> {
    let doc: Table = text.parse().map_err(|e: toml::de::Error| {
        let (line, column) = e.span().map(|s| position(text, s.start)).unwrap_or((1, 1));
        Error::ConfigParse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    check_keys("", &doc, &["sweep", "series", "fixed", "stack", "output", "solver"])
        .map_err(|_| {
            let bad = doc
                .keys()
                .find(|k| !["sweep", "series", "fixed", "stack", "output", "solver"].contains(&k.as_str()))
                .cloned()
                .unwrap_or_default();
            Error::key(bad, "unknown section")
        })?;

    let sweep = section(&doc, "sweep")?.ok_or_else(|| Error::key("sweep", "missing [sweep] section"))?;
    check_keys("sweep", sweep, &["target", "variable", "values", "start", "stop", "points", "spacing"])?;
    let target: Target = string("sweep.target", required(sweep, "sweep", "target")?)?.parse()?;
    let variable: Parameter = string("sweep.variable", required(sweep, "sweep", "variable")?)?
        .parse()
        .map_err(|e: Error| Error::key("sweep.variable", e.to_string()))?;
    let grid = read_grid(sweep, "sweep")?;
    let mut spec = SweepSpec::new(target, variable, grid);

    if let Some(series) = section(&doc, "series")? {
        check_keys("series", series, &["variable", "values"])?;
        let p: Parameter = string("series.variable", required(series, "series", "variable")?)?
            .parse()
            .map_err(|e: Error| Error::key("series.variable", e.to_string()))?;
        let values = number_list("series.values", required(series, "series", "values")?)?;
        spec.series = Some((p, values));
    }

    if let Some(fixed) = section(&doc, "fixed")? {
        for (k, v) in fixed {
            let key = format!("fixed.{k}");
            let p: Parameter = k.parse().map_err(|_| Error::key(&key, "unknown key"))?;
            let value = if p.is_text() {
                ParamValue::Text(string(&key, v)?.to_string())
            } else {
                ParamValue::Number(number(&key, v)?)
            };
            spec.fixed.insert(p, value);
        }
    }

    if let Some(stack) = section(&doc, "stack")? {
        let (geometry, custom) = read_stack_section(stack)?;
        spec.geometry = geometry;
        spec.custom_stack = custom;
    }

    if let Some(output) = section(&doc, "output")? {
        check_keys("output", output, &["path", "format", "y"])?;
        if let Some(v) = output.get("path") {
            spec.output = Some(PathBuf::from(string("output.path", v)?));
        }
        if let Some(v) = output.get("format") {
            spec.format = string("output.format", v)?.parse()?;
        }
        if let Some(v) = output.get("y") {
            let arr = v.as_array().ok_or_else(|| Error::key("output.y", "expected an array of column names"))?;
            spec.plot_columns = arr
                .iter()
                .map(|c| string("output.y", c).map(str::to_string))
                .collect::<Result<_>>()?;
        }
    }

    if let Some(solver) = section(&doc, "solver")? {
        check_keys("solver", solver, &["tolerance", "max_iterations"])?;
        if let Some(v) = solver.get("tolerance") {
            spec.solver.tolerance = number("solver.tolerance", v)?;
        }
        if let Some(v) = solver.get("max_iterations") {
            spec.solver.max_iterations = match v {
                Value::Integer(n) if *n > 0 => *n as usize,
                _ => return Err(Error::key("solver.max_iterations", "expected a positive integer")),
            };
        }
    }

    spec.validate()
}
