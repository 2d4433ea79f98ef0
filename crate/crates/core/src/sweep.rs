//! Executes a [`SweepSpec`] into a [`ResultTable`].
//!
//! Rows are ordered series-major (all grid points of the first series value,
//! then the next). Parameter columns come first: the swept variable, the
//! series variable, then every fixed parameter of the target. Rows that fail
//! keep their parameter cells and are marked `failed:<reason>`.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;

use crate::antenna::{resonance_frequency, DipoleGeometry};
use crate::conductivity::{intraband_conductivity, surface_impedance, GrapheneSheet};
use crate::config::{OutputFormat, ParamValue, Parameter, SweepSpec, Target};
use crate::constants::angular_frequency;
use crate::error::{Error, Result};
use crate::mode::{find_mode, trace_dispersion, ModeSolution};
use crate::scenario::{fits_footprint, scenario, ScenarioName};
use crate::stack::{LayeredStack, StackKind};
use crate::table::{emit_csv, emit_plotdata, Cell, Column, ResultTable, RowStatus};

type Point = BTreeMap<Parameter, ParamValue>;

/// Output columns computed by `target`, in order.
pub fn result_columns(target: Target) -> Vec<Column> {
    let cols: &[(&str, &str)] = match target {
        Target::Conductivity => &[
            ("sigma_re", "S"),
            ("sigma_im", "S"),
            ("sigma_abs", "S"),
            ("impedance_re", "Ohm"),
            ("impedance_im", "Ohm"),
        ],
        Target::Dispersion | Target::Stack => &[
            ("q_re", "1/m"),
            ("q_im", "1/m"),
            ("n_eff", "1"),
            ("spp_wavelength", "m"),
            ("propagation_length", "m"),
            ("normalized_propagation_length", "1"),
            ("resonant_length", "m"),
        ],
        Target::Antenna => &[
            ("resonance_frequency", "Hz"),
            ("metal_resonance_frequency", "Hz"),
            ("miniaturization_factor", "1"),
            ("efficiency_proxy", "1"),
            ("n_eff", "1"),
            ("normalized_propagation_length", "1"),
        ],
        Target::Scenario => &[
            ("footprint", "m^2"),
            ("node_size_max", "m^2"),
            ("margin", "1"),
            ("fits", "-"),
        ],
    };
    cols.iter().map(|(n, u)| Column::new(*n, *u)).collect()
}

/// Y columns plotted when a spec names none.
pub fn default_plot_columns(target: Target) -> &'static [&'static str] {
    match target {
        Target::Conductivity => &["sigma_re", "sigma_im"],
        Target::Dispersion => &["n_eff", "normalized_propagation_length"],
        Target::Stack => &["n_eff", "normalized_propagation_length", "resonant_length"],
        Target::Antenna => &["resonance_frequency", "efficiency_proxy"],
        Target::Scenario => &["margin"],
    }
}

fn parameter_order(spec: &SweepSpec) -> Vec<Parameter> {
    let mut order = vec![spec.variable];
    if let Some((p, _)) = &spec.series {
        order.push(*p);
    }
    order.extend(
        spec.target
            .parameters()
            .iter()
            .filter(|p| spec.fixed.contains_key(p)),
    );
    order
}

fn points(spec: &SweepSpec) -> Vec<Point> {
    let series: Vec<Option<(Parameter, f64)>> = match &spec.series {
        Some((p, values)) => values.iter().map(|v| Some((*p, *v))).collect(),
        None => vec![None],
    };
    let mut out = Vec::with_capacity(series.len() * spec.grid.len());
    for s in &series {
        for &x in &spec.grid {
            let mut point = spec.fixed.clone();
            point.insert(spec.variable, ParamValue::Number(x));
            if let Some((p, v)) = s {
                point.insert(*p, ParamValue::Number(*v));
            }
            out.push(point);
        }
    }
    out
}

fn num(point: &Point, p: Parameter) -> Result<f64> {
    point
        .get(&p)
        .and_then(ParamValue::as_number)
        .ok_or_else(|| Error::invalid(format!("missing parameter {}", p.name())))
}

fn text(point: &Point, p: Parameter) -> Result<&str> {
    point
        .get(&p)
        .and_then(ParamValue::as_text)
        .ok_or_else(|| Error::invalid(format!("missing parameter {}", p.name())))
}

fn sheet(point: &Point) -> Result<GrapheneSheet> {
    GrapheneSheet::new(
        num(point, Parameter::Temperature)?,
        num(point, Parameter::ChemicalPotential)?,
        num(point, Parameter::RelaxationTime)?,
    )
}

fn build_stack(spec: &SweepSpec, point: &Point) -> Result<LayeredStack> {
    let sheet = sheet(point)?;
    match text(point, Parameter::Stack)?.parse::<StackKind>()? {
        StackKind::Custom => {
            let custom = spec
                .custom_stack
                .as_ref()
                .ok_or_else(|| Error::invalid("custom stack has no layers"))?;
            LayeredStack::new(
                custom.layers.clone(),
                custom.sheet_interfaces.iter().map(|&i| (i, sheet)).collect(),
            )
        }
        kind => spec.geometry.build(kind, sheet),
    }
}

fn mode_cells(m: &ModeSolution) -> Vec<Cell> {
    vec![
        m.q.re.into(),
        m.q.im.into(),
        m.effective_index().into(),
        m.spp_wavelength().into(),
        m.propagation_length().into(),
        m.normalized_propagation_length().into(),
        m.resonant_length().into(),
    ]
}

fn evaluate(spec: &SweepSpec, point: &Point) -> Result<Vec<Cell>> {
    match spec.target {
        Target::Conductivity => {
            let s = sheet(point)?;
            let omega = angular_frequency(num(point, Parameter::Frequency)?);
            let sigma = intraband_conductivity(&s, omega)?.value();
            let z = surface_impedance(&s, omega)?;
            Ok(vec![
                sigma.re.into(),
                sigma.im.into(),
                sigma.norm().into(),
                z.re.into(),
                z.im.into(),
            ])
        }
        Target::Dispersion | Target::Stack => {
            let stack = build_stack(spec, point)?;
            let omega = angular_frequency(num(point, Parameter::Frequency)?);
            let m = find_mode(&stack, omega, None, &spec.solver)?;
            Ok(mode_cells(&m))
        }
        Target::Antenna => {
            let dipole = DipoleGeometry::with_end_correction(
                num(point, Parameter::Width)?,
                num(point, Parameter::Length)?,
                num(point, Parameter::Gap)?,
                num(point, Parameter::SubstratePermittivity)?,
                num(point, Parameter::EndCorrection)?,
            )?;
            let p = resonance_frequency(&dipole, &sheet(point)?, &spec.solver)?;
            Ok(vec![
                p.resonance_frequency.into(),
                p.metal_reference.into(),
                p.miniaturization_factor.into(),
                p.efficiency_proxy.into(),
                p.mode.effective_index().into(),
                p.mode.normalized_propagation_length().into(),
            ])
        }
        Target::Scenario => {
            let name: ScenarioName = text(point, Parameter::Scenario)?.parse()?;
            let req = scenario(name);
            let r = fits_footprint(
                num(point, Parameter::Length)?,
                num(point, Parameter::Width)?,
                &req,
                num(point, Parameter::BudgetFraction)?,
            )?;
            Ok(vec![
                r.footprint.into(),
                req.node_size.max.into(),
                r.margin.into(),
                (if r.fits { "yes" } else { "no" }).into(),
            ])
        }
    }
}

/// Dispersion over a frequency grid is traced by continuation, one trace
/// per series value; everything else is solved row by row.
fn traced(spec: &SweepSpec, points: &[Point]) -> Vec<Result<Vec<Cell>>> {
    let n = spec.grid.len();
    let increasing = n < 2 || spec.grid[1] > spec.grid[0];
    points
        .par_chunks(n)
        .flat_map_iter(|chunk| {
            let run = || -> Result<Vec<Result<ModeSolution>>> {
                let stack = build_stack(spec, &chunk[0])?;
                let mut freqs = spec.grid.clone();
                if !increasing {
                    freqs.reverse();
                }
                let mut modes = trace_dispersion(&stack, &freqs, &spec.solver)?;
                if !increasing {
                    modes.reverse();
                }
                Ok(modes)
            };
            let rows: Vec<Result<Vec<Cell>>> = match run() {
                Ok(modes) => modes.into_iter().map(|m| m.map(|m| mode_cells(&m))).collect(),
                Err(e) => (0..chunk.len()).map(|_| Err(e.clone())).collect(),
            };
            rows
        })
        .collect()
}

/// Runs every row of `spec`. Per-row solver failures are recorded in the
/// table; the call itself only fails on an inconsistent spec.
pub fn run_sweep(spec: &SweepSpec) -> Result<ResultTable> {
    let spec = spec.clone().validate()?;
    let params = parameter_order(&spec);
    let mut columns: Vec<Column> = params.iter().map(|p| Column::new(p.name(), p.unit())).collect();
    columns.extend(result_columns(spec.target));
    let mut table = ResultTable::new(columns)?;
    if let Some((p, _)) = &spec.series {
        table = table.with_group_column(p.name())?;
    }

    let points = points(&spec);
    let results: Vec<Result<Vec<Cell>>> =
        if spec.target == Target::Dispersion && spec.variable == Parameter::Frequency {
            traced(&spec, &points)
        } else {
            points.par_iter().map(|p| evaluate(&spec, p)).collect()
        };

    for (point, result) in points.iter().zip(results) {
        let mut cells: Vec<Cell> = params
            .iter()
            .map(|p| match &point[p] {
                ParamValue::Number(x) => Cell::Number(*x),
                ParamValue::Text(s) => Cell::Text(s.clone()),
            })
            .collect();
        match result {
            Ok(values) => {
                cells.extend(values);
                table.push(cells, RowStatus::Ok)?;
            }
            Err(e) => table.push_failed(cells, e.reason())?,
        }
    }
    Ok(table)
}

/// Writes `table` to `path` in the spec's output format.
pub fn write_output(spec: &SweepSpec, table: &ResultTable, path: &Path) -> Result<()> {
    match spec.format {
        OutputFormat::Csv => emit_csv(table, path),
        OutputFormat::Plot => {
            let ys: Vec<&str> = if spec.plot_columns.is_empty() {
                default_plot_columns(spec.target).to_vec()
            } else {
                spec.plot_columns.iter().map(String::as_str).collect()
            };
            emit_plotdata(table, spec.variable.name(), &ys, path)
        }
    }
}

/// Renders `table` in the spec's output format.
pub fn render_output(spec: &SweepSpec, table: &ResultTable) -> Result<String> {
    match spec.format {
        OutputFormat::Csv => Ok(table.to_csv_string()),
        OutputFormat::Plot => {
            let ys: Vec<&str> = if spec.plot_columns.is_empty() {
                default_plot_columns(spec.target).to_vec()
            } else {
                spec.plot_columns.iter().map(String::as_str).collect()
            };
            table.to_plotdata_string(spec.variable.name(), &ys)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn conductivity_spec() -> SweepSpec {
        parse_config(
            r#"
[sweep]
target = "conductivity"
variable = "frequency"
start = 0.1e12
stop = 5e12
points = 20
[series]
variable = "chemical_potential"
values = [0.2, 0.4, 0.6]
[fixed]
relaxation_time = 1e-12
"#,
        )
        .unwrap()
    }

    #[test]
    fn conductivity_rows_and_columns() {
        let table = run_sweep(&conductivity_spec()).unwrap();
        assert_eq!(table.len(), 60);
        assert!(table.all_ok());
        let headers: Vec<String> = table.columns().iter().map(Column::header).collect();
        assert_eq!(headers[0], "frequency(Hz)");
        assert_eq!(headers[1], "chemical_potential(eV)");
        assert!(headers.contains(&"temperature(K)".to_string()));
        assert_eq!(table.group_column().unwrap().name, "chemical_potential");
        // |sigma| grows with E_F at each frequency.
        let abs = table.numeric_column("sigma_abs").unwrap();
        for i in 0..20 {
            assert!(abs[i].unwrap() < abs[20 + i].unwrap());
            assert!(abs[20 + i].unwrap() < abs[40 + i].unwrap());
        }
    }

    #[test]
    fn reruns_are_byte_identical() {
        let spec = conductivity_spec();
        let a = run_sweep(&spec).unwrap().to_csv_string();
        let b = run_sweep(&spec).unwrap().to_csv_string();
        assert_eq!(a, b);
    }

    #[test]
    fn failed_rows_keep_their_place() {
        // Out-of-band antenna: a very long dipole has no resonance above 0.1 THz
        // on a lossy sheet only for some lengths; use lengths spanning both.
        let spec = parse_config(
            r#"
[sweep]
target = "antenna"
variable = "length"
values = [20e-6, 5e-3]
[fixed]
width = 8e-6
gap = 3e-6
substrate_permittivity = 3.8
chemical_potential = 0.2
relaxation_time = 1e-12
"#,
        )
        .unwrap();
        let table = run_sweep(&spec).unwrap();
        assert_eq!(table.len(), 2);
        assert!(table.rows()[0].status.is_ok());
        assert!(!table.rows()[1].status.is_ok());
        assert_eq!(table.rows()[1].cells[0], Cell::Number(5e-3));
    }

    #[test]
    fn traced_dispersion_matches_pointwise() {
        let text = r#"
[sweep]
target = "dispersion"
variable = "frequency"
values = [5e12, 3e12, 1e12]
[fixed]
chemical_potential = 0.4
relaxation_time = 1e-12
"#;
        let spec = parse_config(text).unwrap();
        let traced = run_sweep(&spec).unwrap();
        assert!(traced.all_ok());
        let q = traced.numeric_column("q_re").unwrap();
        for (i, f) in [5e12, 3e12, 1e12].into_iter().enumerate() {
            let stack = build_stack(&spec, &points(&spec)[i]).unwrap();
            let m = find_mode(&stack, angular_frequency(f), None, &spec.solver).unwrap();
            assert!((q[i].unwrap() - m.q.re).abs() < 1e-8 * m.q.re);
        }
    }

    #[test]
    fn scenario_rows() {
        let spec = parse_config(
            r#"
[sweep]
target = "scenario"
variable = "length"
values = [20e-6, 100e-6]
[fixed]
width = 8e-6
scenario = "WNoC"
"#,
        )
        .unwrap();
        let table = run_sweep(&spec).unwrap();
        let margin = table.numeric_column("margin").unwrap();
        assert!((margin[1].unwrap() - 35.355_339_059_327_38).abs() < 1e-9);
        let fits = table.column_index("fits").unwrap();
        assert_eq!(table.rows()[1].cells[fits], Cell::Text("yes".into()));
    }

    #[test]
    fn plot_output_has_one_block_per_curve() {
        let mut spec = conductivity_spec();
        spec.format = OutputFormat::Plot;
        let table = run_sweep(&spec).unwrap();
        let out = render_output(&spec, &table).unwrap();
        assert_eq!(out.matches("# y: ").count(), 6);
    }
}
