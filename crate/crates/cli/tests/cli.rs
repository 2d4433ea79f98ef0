use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn grathz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grathz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn conductivity_to_stdout() {
    let o = grathz(&[
        "conductivity",
        "--grid",
        "chemical_potential=0.2,0.4,0.6",
        "--set",
        "frequency=1e12",
        "--set",
        "relaxation_time=1e-12",
        "--quiet",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("chemical_potential(eV),frequency(Hz)"));
    assert!(header.ends_with(",status(-)"));
    assert_eq!(lines.clone().count(), 3);
    assert!(lines.all(|l| l.ends_with(",ok")));
    assert!(o.stderr.is_empty());
}

#[test]
fn failed_rows_exit_two() {
    let o = grathz(&[
        "antenna",
        "--grid",
        "length=20e-6,5e-3",
        "--set",
        "width=8e-6",
        "--set",
        "gap=3e-6",
        "--set",
        "substrate_permittivity=3.8",
        "--set",
        "chemical_potential=0.2",
        "--set",
        "relaxation_time=1e-12",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 3);
    assert!(out.lines().nth(2).unwrap().contains(",failed:"));
}

#[test]
fn usage_and_config_errors_exit_one() {
    assert_eq!(grathz(&["nonsense"]).status.code(), Some(1));
    assert_eq!(grathz(&["sweep"]).status.code(), Some(1));
    assert_eq!(
        grathz(&["conductivity", "--grid", "chemical_potential=0.2", "--set", "frequency=1e12"])
            .status
            .code(),
        Some(1)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[sweep]\ntarget = \"conductivity\"\nvariable = = 1\n").unwrap();
    let o = grathz(&["--config", bad.to_str().unwrap(), "sweep"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(grathz(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_sweep_writes_file_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("fig6_h2g.toml");
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = grathz(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "sweep", "--quiet"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = std::fs::read(a).unwrap();
    assert_eq!(a, std::fs::read(b).unwrap());
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 10);
}

#[test]
fn plot_format_and_overrides() {
    let cfg = configs().join("fig2a.toml");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2a.dat");
    let o = grathz(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "conductivity",
        "--grid",
        "frequency=1e11:5e12:5",
        "--quiet",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out).unwrap();
    // Five chemical potentials, real and imaginary parts.
    assert_eq!(text.matches("# y: ").count(), 10);
    assert!(text.contains("# y: sigma_im(S) chemical_potential(eV)=2e-1\n"));
}

#[test]
fn target_mismatch_is_an_error() {
    let cfg = configs().join("fig3.toml");
    let o = grathz(&["--config", cfg.to_str().unwrap(), "stack"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn solver_flags_are_validated() {
    let o = grathz(&[
        "dispersion",
        "--grid",
        "frequency=1e12,2e12",
        "--set",
        "chemical_potential=0.4",
        "--set",
        "relaxation_time=1e-12",
        "--tolerance",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = grathz(&[
        "dispersion",
        "--grid",
        "frequency=1e12,2e12",
        "--set",
        "chemical_potential=0.4",
        "--set",
        "relaxation_time=1e-12",
        "--set",
        "stack=H1G",
        "--max-iter",
        "60",
        "--quiet",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().nth(1).unwrap().contains(",H1G,"));
}

#[test]
fn presets_lists_stacks_and_scenarios() {
    let o = grathz(&["presets"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for needle in ["G ", "H1G", "H2G", "WNSN,1e-12,1e-10", "SDM,1e-8,1e-4", "WNoC,1e-8,1e-6,1e-3,1e-1,1e10,1e11,ok"] {
        assert!(out.contains(needle), "missing {needle}");
    }
}

#[test]
fn every_shipped_config_parses_and_runs() {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let out = dir.path().join("out");
        let o = grathz(&["--config", path.to_str().unwrap(), "--out", out.to_str().unwrap(), "sweep", "--quiet"]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", path.display(), String::from_utf8_lossy(&o.stderr));
    }
}
