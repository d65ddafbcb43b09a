use affine_cli::config::{ModelSpec, PotentialSpec};
use affine_cli::{config_hash, load_batch, load_config, to_toml, CliError, ScenarioKind};
use affine_core::dynamics::Scheme;

const MINIMAL: &str = r#"
kind = "classical_trajectory"

[model]
type = "affine_affine"
"#;

#[test]
fn minimal_trajectory_gets_defaults() {
    let cfg = load_config(MINIMAL).unwrap();
    assert_eq!(cfg.kind, ScenarioKind::ClassicalTrajectory);
    assert_eq!(cfg.dim, 2);
    assert_eq!(cfg.hbar, 1.0);
    assert_eq!(cfg.seed, 0);
    assert_eq!(cfg.numerics.dt, Some(1e-3));
    assert_eq!(cfg.numerics.steps, Some(10_000));
    assert_eq!(cfg.numerics.scheme, Some(Scheme::ImplicitMidpoint));
    assert_eq!(cfg.potential, PotentialSpec::Free);
    assert_eq!(
        cfg.model,
        ModelSpec::AffineAffine {
            mass: 1.0,
            a: 1.0,
            b: 0.0
        }
    );
}

#[test]
fn degenerate_dilatation_metric_is_rejected() {
    let text = r#"
kind = "classical_trajectory"
dim = 3
[model]
type = "affine_affine"
a = 1.5
b = -0.5
"#;
    match load_config(text) {
        Err(CliError::Validation { path, message }) => {
            assert_eq!(path, "model");
            assert!(message.contains("A + nB = 0"), "{message}");
        }
        other => panic!("expected a validation error, got {other:?}"),
    }
}

#[test]
fn reemitted_config_keeps_its_hash() {
    let text = r#"
kind = "spectrum_qpm"
seed = 9
# comments are allowed anywhere
[model]
type = "dalembert"
j_iso = 1.0
[potential]
type = "qpm_family"
a = 0.3
b = 0.8
c = 0.5
[channels]
list = [[2, 1], [0, 0]]
"#;
    let cfg = load_config(text).unwrap();
    let again = load_config(&to_toml(&cfg)).unwrap();
    assert_eq!(cfg, again);
    assert_eq!(config_hash(&cfg), config_hash(&again));
}

#[test]
fn output_path_is_not_hashed() {
    let mut cfg = load_config(MINIMAL).unwrap();
    let h = config_hash(&cfg);
    cfg.output = Some("elsewhere.csv".into());
    assert_eq!(config_hash(&cfg), h);
    cfg.seed = 1;
    assert_ne!(config_hash(&cfg), h);
}

#[test]
fn parse_errors_carry_a_location() {
    let text = "kind = \"classical_trajectory\"\n[model]\ntype = \"affine_affine\"\nmass = \n";
    match load_config(text) {
        Err(CliError::Parse { location, .. }) => assert!(location.starts_with("line 4"), "{location}"),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn unknown_fields_are_rejected() {
    let text = format!("{MINIMAL}wobble = 3\n");
    assert!(matches!(load_config(&text), Err(CliError::Parse { .. })));
}

#[test]
fn kind_preconditions_name_the_field() {
    let cases = [
        (
            "kind = \"geodesic_compare\"\n[model]\ntype = \"affine_affine\"\n[potential]\ntype = \"dilatation_harmonic\"\nkappa = 1.0\n",
            "potential.type",
        ),
        ("kind = \"spectrum_2d\"\n[model]\ntype = \"dalembert\"\n", "model.type"),
        ("kind = \"operator_3d_check\"\n[model]\ntype = \"affine_affine\"\n", "dim"),
        (
            "kind = \"operator_3d_check\"\ndim = 3\n[model]\ntype = \"affine_affine\"\n[channels]\nspins = [[0.5, 1.0]]\n",
            "channels.spins[0]",
        ),
        ("kind = \"classical_trajectory\"\n[model]\ntype = \"affine_affine\"\n[numerics]\ndt = -1.0\n", "numerics.dt"),
        (
            "kind = \"classical_trajectory\"\n[model]\ntype = \"affine_affine\"\n[initial]\nphi = [[0.0, 1.0], [1.0, 0.0]]\n",
            "initial.phi",
        ),
        ("kind = \"spectrum_polar\"\n[model]\ntype = \"dalembert\"\nj = [[1.0, 0.0], [0.0, 2.0]]\n[potential]\ntype = \"polar_trig\"\nkappa = 1.0\n", "model"),
    ];
    for (text, want) in cases {
        match load_config(text) {
            Err(CliError::Validation { path, .. }) => assert_eq!(path, want, "{text}"),
            other => panic!("{text}: expected validation error at {want}, got {other:?}"),
        }
    }
}

#[test]
fn batch_errors_are_prefixed() {
    let text = r#"
[[scenario]]
kind = "boundedness_2d"
[scenario.model]
type = "affine_affine"

[[scenario]]
kind = "spectrum_2d"
[scenario.model]
type = "affine_affine"
[scenario.channels]
m = [2, 1]
"#;
    match load_batch(text) {
        Err(CliError::Validation { path, .. }) => assert_eq!(path, "scenario[1].channels.m"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn single_document_is_a_batch_of_one() {
    assert_eq!(load_batch(MINIMAL).unwrap().len(), 1);
}
