use std::path::Path;

use grathz_core::sweep::{render_output, write_output};
use grathz_core::{
    emit_csv, emit_plotdata, parse_config, run_sweep, Cell, Column, Error, OutputFormat,
    ParamValue, Parameter, ResultTable, Target,
};

fn load(name: &str) -> grathz_core::SweepSpec {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    parse_config(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn conductivity_configs_mirror_their_captions() {
    let a = load("fig2a.toml");
    assert_eq!(a.target, Target::Conductivity);
    assert_eq!(a.variable, Parameter::Frequency);
    assert_eq!((a.grid[0], *a.grid.last().unwrap()), (0.1e12, 5e12));
    assert_eq!(a.series, Some((Parameter::ChemicalPotential, vec![0.2, 0.4, 0.6, 0.8, 1.0])));
    assert_eq!(a.fixed[&Parameter::RelaxationTime], ParamValue::Number(1e-12));
    assert_eq!(a.fixed[&Parameter::Temperature], ParamValue::Number(300.0));

    let b = load("fig2b.toml");
    let (p, taus) = b.series.clone().unwrap();
    assert_eq!(p, Parameter::RelaxationTime);
    assert_eq!(taus, vec![0.2e-12, 0.4e-12, 0.6e-12, 0.8e-12, 1.0e-12]);
    assert_eq!(b.fixed[&Parameter::ChemicalPotential], ParamValue::Number(0.6));
}

#[test]
fn conductivity_sweep_over_chemical_potential() {
    let spec = parse_config(
        r#"
[sweep]
target = "conductivity"
variable = "chemical_potential"
start = 0.1
stop = 1.0
points = 10
[fixed]
frequency = 1e12
relaxation_time = 1e-12
"#,
    )
    .unwrap();
    let table = run_sweep(&spec).unwrap();
    assert_eq!(table.len(), 10);
    let abs: Vec<f64> = table.numeric_column("sigma_abs").unwrap().into_iter().map(Option::unwrap).collect();
    assert!(abs.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn fig2_plot_output_has_re_and_im_per_curve() {
    let mut spec = load("fig2a.toml");
    assert_eq!(spec.format, OutputFormat::Plot);
    spec.grid = vec![1e12, 2e12];
    let out = render_output(&spec, &run_sweep(&spec).unwrap()).unwrap();
    for ef in ["2e-1", "4e-1", "6e-1", "8e-1", "1e0"] {
        assert!(out.contains(&format!("# y: sigma_re(S) chemical_potential(eV)={ef}\n")));
        assert!(out.contains(&format!("# y: sigma_im(S) chemical_potential(eV)={ef}\n")));
    }
    // Under the exp(-i w t) convention Im sigma is what the figure draws as -Im.
    let table = run_sweep(&spec).unwrap();
    assert!(table.numeric_column("sigma_im").unwrap().iter().all(|x| x.unwrap() > 0.0));
}

#[test]
fn stack_sweeps_feed_the_ordering_checks() {
    for name in ["fig6_g.toml", "fig6_h1g.toml", "fig6_h2g.toml"] {
        let table = run_sweep(&load(name)).unwrap();
        assert_eq!(table.len(), 9);
        assert!(table.all_ok());
        for c in ["n_eff", "normalized_propagation_length", "resonant_length"] {
            table.column_index(c).unwrap();
        }
    }
}

#[test]
fn row_count_equals_grid_length_even_when_rows_fail() {
    // Lossy, low-frequency points on an asymmetric stack are below cutoff.
    let spec = parse_config(
        r#"
[sweep]
target = "stack"
variable = "frequency"
values = [0.05e12, 0.1e12, 5e12]
[fixed]
chemical_potential = 1.0
relaxation_time = 0.05e-12
stack = "H2G"
"#,
    )
    .unwrap();
    let table = run_sweep(&spec).unwrap();
    assert_eq!(table.len(), 3);
    assert!(table.failed_rows() >= 1);
    let csv = table.to_csv_string();
    assert!(csv.lines().skip(1).any(|l| l.contains(",failed:")));
    assert!(csv.lines().next().unwrap().ends_with(",status(-)"));
}

#[test]
fn every_header_has_a_unit() {
    for name in ["fig2a.toml", "fig3.toml", "fig6_g.toml", "scenario_wnoc.toml"] {
        let table = run_sweep(&load(name)).unwrap();
        let csv = table.to_csv_string();
        for h in csv.lines().next().unwrap().split(',') {
            let (_, unit) = h.strip_suffix(')').and_then(|s| s.rsplit_once('(')).unwrap();
            assert!(!unit.is_empty(), "{name}: {h}");
        }
    }
}

#[test]
fn emitters_write_files_and_report_paths() {
    let dir = tempfile::tempdir().unwrap();
    let mut t = ResultTable::new(vec![Column::new("x", "m"), Column::new("y", "1")]).unwrap();
    t.push(vec![Cell::Number(1.0), Cell::Number(2.0)], grathz_core::RowStatus::Ok).unwrap();
    t.push_failed(vec![Cell::Number(2.0)], "not-bound").unwrap();

    let csv = dir.path().join("t.csv");
    emit_csv(&t, &csv).unwrap();
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), "x(m),y(1),status(-)\n1e0,2e0,ok\n2e0,,failed:not-bound\n");

    let plot = dir.path().join("t.dat");
    emit_plotdata(&t, "x", &["y"], &plot).unwrap();
    let text = std::fs::read_to_string(&plot).unwrap();
    assert!(text.contains("1e0 2e0\n"));
    assert!(text.contains("# skipped row 1: failed:not-bound"));

    assert!(matches!(emit_plotdata(&t, "x", &["nope"], &plot), Err(Error::UnknownColumn(_))));
    let missing = dir.path().join("no/such/dir/t.csv");
    match emit_csv(&t, &missing) {
        Err(Error::Io { path, .. }) => assert!(path.contains("no/such/dir")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn all_failed_plot_is_comments_only() {
    let mut t = ResultTable::new(vec![Column::new("x", "m"), Column::new("y", "1")]).unwrap();
    t.push_failed(vec![Cell::Number(1.0)], "no-convergence").unwrap();
    t.push_failed(vec![Cell::Number(2.0)], "no-convergence").unwrap();
    let text = t.to_plotdata_string("x", &["y"]).unwrap();
    assert!(text.lines().all(|l| l.is_empty() || l.starts_with('#')));
}

#[test]
fn write_output_uses_spec_format() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = load("scenario_wnoc.toml");
    let table = run_sweep(&spec).unwrap();
    let path = dir.path().join("s.out");
    write_output(&spec, &table, &path).unwrap();
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("length(m),"));
    spec.format = OutputFormat::Plot;
    write_output(&spec, &table, &path).unwrap();
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("# x: length(m)"));
}
