use affine_cli::{load_config, run_scenario, Cell, ResultTable};
use affine_core::dynamics::{classify_2d, Boundedness, InertiaModel};
use affine_core::quantum::{exact_shear_levels, Channel2};

fn column(t: &ResultTable, name: &str) -> usize {
    t.columns
        .iter()
        .position(|c| c.name == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

fn f(c: &Cell) -> f64 {
    match c {
        Cell::F64(v) => *v,
        other => panic!("{other:?}"),
    }
}

fn i(c: &Cell) -> i64 {
    match c {
        Cell::I64(v) => *v,
        other => panic!("{other:?}"),
    }
}

#[test]
fn boundedness_grid_matches_classifier() {
    let cfg = load_config("kind = \"boundedness_2d\"\n[model]\ntype = \"affine_affine\"\nb = 0.5\n").unwrap();
    let t = run_scenario(&cfg).unwrap();
    assert_eq!(t.rows.len(), 25);
    let (pa, pb, cl) = (column(&t, "p_alpha"), column(&t, "p_beta"), column(&t, "class"));
    for row in &t.rows {
        let want = match classify_2d(f(&row[pa]), f(&row[pb])) {
            Boundedness::Bounded => "bounded",
            Boundedness::Unbounded => "unbounded",
            Boundedness::Marginal => "marginal",
        };
        assert_eq!(row[cl], Cell::Str(want.into()));
    }
}

#[test]
fn simulated_boundedness_escapes_only_when_unbounded() {
    let text = r#"
kind = "boundedness_2d"
[model]
type = "affine_affine"
b = 0.5
[numerics]
simulate = true
steps = 20000
dt = 2e-3
[momenta]
p_alpha = [2.0, 0.5]
p_beta = [0.5, 2.0]
"#;
    let t = run_scenario(&load_config(text).unwrap()).unwrap();
    let (cl, esc) = (column(&t, "class"), column(&t, "escaped"));
    for row in &t.rows {
        let unbounded = row[cl] == Cell::Str("unbounded".into());
        assert_eq!(row[esc], Cell::Bool(unbounded), "{row:?}");
    }
}

#[test]
fn spectrum_sweep_counts_match_closed_form() {
    let cfg = load_config("kind = \"spectrum_2d\"\n[model]\ntype = \"affine_affine\"\nb = 0.5\n").unwrap();
    let t = run_scenario(&cfg).unwrap();
    let model = InertiaModel::AffineAffine { m: 1.0, a: 1.0, b: 0.5 };
    let (m, n, count, level) = (
        column(&t, "m"),
        column(&t, "n"),
        column(&t, "bound_states"),
        column(&t, "level"),
    );
    let edges: Vec<&Vec<Cell>> = t.rows.iter().filter(|r| i(&r[level]) == -1).collect();
    assert_eq!(edges.len(), 49);
    for row in edges {
        let ch = Channel2::new(i(&row[m]) as i32, i(&row[n]) as i32);
        let exact = exact_shear_levels(&model, ch, 1.0).unwrap();
        assert_eq!(i(&row[count]) as usize, exact.len(), "channel ({}, {})", ch.m, ch.n);
        // Bound states need mn > 0, but (1, n)-type channels have none.
        if i(&row[count]) > 0 {
            assert!(ch.m * ch.n > 0 && ch.m.abs().min(ch.n.abs()) >= 2);
        }
    }
}

#[test]
fn same_seed_same_table() {
    let text = "kind = \"conservation_audit\"\nseed = 11\n[model]\ntype = \"affine_metric\"\ninertia = 2.0\na = 0.5\nb = 0.3\n[potential]\ntype = \"dilatation_harmonic\"\nkappa = 1.0\n[numerics]\nsteps = 400\n";
    let cfg = load_config(text).unwrap();
    let a = run_scenario(&cfg).unwrap();
    let b = run_scenario(&cfg).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_eq!(column(&a, "deviator_drift"), 5);
    let mut other = cfg.clone();
    other.seed = 12;
    assert_ne!(run_scenario(&other).unwrap().csv_body(), a.csv_body());
}

#[test]
fn trajectory_columns_and_drift() {
    let text = "kind = \"classical_trajectory\"\n[model]\ntype = \"affine_affine\"\nb = 0.2\n[potential]\ntype = \"dilatation_harmonic\"\nkappa = 1.0\n[numerics]\nsteps = 2000\ndt = 5e-4\nrecord_every = 500\n";
    let t = run_scenario(&load_config(text).unwrap()).unwrap();
    let names: Vec<&str> = t.columns.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(
        names,
        [
            "t",
            "qbar",
            "q1",
            "q2",
            "x1",
            "x2",
            "energy",
            "spin_norm",
            "vorticity_norm",
            "energy_drift",
            "spin_drift",
            "vorticity_drift"
        ]
    );
    assert_eq!(t.rows.len(), 5);
    let last = t.rows.last().unwrap();
    assert!((f(&last[0]) - 1.0).abs() < 1e-12);
    assert!(f(&last[column(&t, "energy_drift")]) < 1e-8);
    assert!(f(&last[column(&t, "spin_drift")]) < 1e-10);
}

#[test]
fn geodesic_compare_tracks_exponential() {
    let text = "kind = \"geodesic_compare\"\n[model]\ntype = \"affine_affine\"\nb = 0.3\n[numerics]\nsamples = 3\nsteps = 1000\n";
    let t = run_scenario(&load_config(text).unwrap()).unwrap();
    let err = column(&t, "max_abs_error");
    assert!(t.rows.iter().all(|r| f(&r[err]) < 1e-6));
}

#[test]
fn qpm_and_polar_tables_agree() {
    let body = "[model]\ntype = \"dalembert\"\n[potential]\ntype = \"qpm_family\"\na = 0.3\nb = 0.8\nc = 0.5\n[channels]\nlist = [[2, 1]]\n";
    let qpm = run_scenario(&load_config(&format!("kind = \"spectrum_qpm\"\n{body}")).unwrap()).unwrap();
    let polar = run_scenario(&load_config(&format!("kind = \"spectrum_polar\"\n{body}")).unwrap()).unwrap();
    let (eq, ep) = (column(&qpm, "energy"), column(&polar, "energy"));
    assert_eq!(qpm.rows.len(), 5);
    for (a, b) in qpm.rows.iter().zip(&polar.rows) {
        assert!((f(&a[eq]) - f(&b[ep])).abs() <= 1e-3 * f(&a[eq]).abs());
    }
}

#[test]
fn operator_check_reports_hermitian_channels() {
    let text = "kind = \"operator_3d_check\"\ndim = 3\n[model]\ntype = \"affine_affine\"\nb = 0.2\n[numerics]\ngrid_points = 8\nlevels = 2\n";
    let t = run_scenario(&load_config(text).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 6);
    let r = column(&t, "hermiticity_residual");
    assert!(t.rows.iter().all(|row| f(&row[r]) < 1e-8));
}

#[test]
fn module_errors_become_failure_rows() {
    // Too coarse for the refinement check to pass.
    let text = "kind = \"spectrum_2d\"\n[model]\ntype = \"affine_affine\"\nb = 0.5\n[numerics]\ngrid_points = 16\ntolerance = 1e-12\n[channels]\nlist = [[3, 3], [-1, 2]]\n";
    let failed = run_scenario(&load_config(text).unwrap()).unwrap_err();
    assert_eq!(failed.provenance.get("status").map(String::as_str), Some("failed"));
    assert_eq!(failed.columns.len(), 2);
    assert!(failed.rows.iter().any(|r| r[0] == Cell::Str("m=3 n=3".into())));
}
