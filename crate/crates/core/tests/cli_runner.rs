use horokit::cli::{run_experiment, ExitStatus, Experiment, ExperimentConfig, RowStatus};

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(text).unwrap()
}

#[test]
fn slice_traces_the_closed_form_horodisc() {
    let cfg = config(
        r#"{"experiment": "horosphere-slice", "domain": {"kind": "unit_disc", "dim": 1},
            "payload": {"sequence": {"label": "radial", "params": {"p": [[1.0, 0.0]]}}, "radius": 1.0}}"#,
    );
    let out = run_experiment(&cfg).unwrap();
    assert_eq!(out.exit_status(), ExitStatus::Pass, "{}", out.report.to_json());
    let boundary: Vec<_> = out.points.iter().filter(|p| p.tag == "boundary").collect();
    assert!(boundary.len() > 100);
    for p in boundary {
        let z = p.point[0];
        if (z - horokit::C64::new(1.0, 0.0)).norm() > 0.05 {
            assert!(((z - horokit::C64::new(0.5, 0.0)).norm() - 0.5).abs() < 1e-3, "{z}");
        }
    }
}

#[test]
fn interleaved_example_is_named() {
    let cfg = config(
        r#"{"experiment": "classify-bidisc", "domain": {"kind": "polydisc", "dim": 2},
            "payload": {"sequence": {"label": "interleaved", "params": {
                "a": {"label": "bidisc_w3", "params": {"p": [1.0, 0.0]}},
                "b": {"label": "bidisc_w2", "params": {"p": [1.0, 0.0]}}}}}}"#,
    );
    let out = run_experiment(&cfg).unwrap();
    let row = out.report.item("canonical").unwrap_or_else(|| panic!("{}", out.report.to_json()));
    assert_eq!(row.status, RowStatus::Pass);
    assert_eq!(row.data["name"], "BidiscW1(1, 1)");
}

#[test]
fn denjoy_and_cluster_experiments() {
    let dw = config(
        r#"{"experiment": "denjoy-wolff", "domain": {"kind": "unit_disc", "dim": 1},
            "payload": {"map": {"kind": "disc_automorphism", "params": {"a": [-0.5, 0.0], "theta": 0.0}},
                        "expect": [[1.0, 0.0]]}}"#,
    );
    let out = run_experiment(&dw).unwrap();
    assert_eq!(out.exit_status(), ExitStatus::Pass, "{}", out.report.to_json());
    assert!(out.points.iter().any(|p| p.tag == "orbit-0"));
    let rot = config(
        r#"{"experiment": "denjoy-wolff", "domain": {"kind": "unit_disc", "dim": 1},
            "payload": {"map": {"kind": "disc_automorphism", "params": {"a": [0.0, 0.0], "theta": 0.5}}}}"#,
    );
    assert_eq!(run_experiment(&rot).unwrap().exit_status(), ExitStatus::Inconclusive);
    let cs = config(
        r#"{"experiment": "cluster-set",
            "payload": {"map": {"kind": "composite", "params": [{"kind": "inverse", "params": {"kind": "siegel_to_parabolic"}},
                                                               {"kind": "inverse", "params": {"kind": "cayley2"}}]},
                        "point": [[0.0, 0.0], [0.0, 0.0]], "expect": [[[-1.0, 0.0], [0.0, 0.0]]]}}"#,
    );
    let out = run_experiment(&cs).unwrap();
    assert_eq!(out.exit_status(), ExitStatus::Pass, "{}", out.report.to_json());
}

#[test]
fn other_experiments_run() {
    let cases = [
        r#"{"experiment": "equivalence", "domain": {"kind": "unit_disc", "dim": 1},
            "payload": {"a": {"label": "radial", "params": {"p": [[1.0, 0.0]]}},
                        "b": {"label": "horocycle_approach", "params": {"p": [1.0, 0.0], "level": 1.0}},
                        "expect": true, "rebase_to": [[0.5, 0.0]]}}"#,
        r#"{"experiment": "gromov-product", "domain": {"kind": "polydisc", "dim": 2},
            "payload": {"triples": [{"x": [[0.5, 0.0], [0.0, 0.0]], "y": [[-0.5, 0.0], [0.0, 0.0]], "expect": 0.0}]}}"#,
        r#"{"experiment": "quasi-geodesic", "domain": {"kind": "unit_disc", "dim": 1},
            "payload": {"curve": {"curve": "segment", "params": {"from": [[0.0, 0.0]], "to": [[0.9, 0.0]]}},
                        "a": 1.0, "b": 0.1, "expect": true}}"#,
        r#"{"experiment": "impression", "domain": {"kind": "unit_ball", "dim": 2},
            "payload": {"sequence": {"label": "radial", "params": {"p": [[1.0, 0.0], [0.0, 0.0]]}}}}"#,
        r#"{"experiment": "bidisc-topology"}"#,
    ];
    for text in cases {
        let cfg = config(text);
        let out = run_experiment(&cfg).unwrap();
        assert_eq!(out.exit_status(), ExitStatus::Pass, "{}", out.report.to_json());
    }
}

#[test]
fn missing_domain_is_a_config_error() {
    let cfg = config(r#"{"experiment": "delta-estimate"}"#);
    assert!(matches!(run_experiment(&cfg), Err(horokit::HoroError::InvalidConfig(_))));
    let names: std::collections::BTreeSet<String> = Experiment::ALL.iter().map(|e| e.name()).collect();
    assert_eq!(names.len(), 12);
}

#[test]
fn oracle_suite_passes() {
    let out = run_experiment(&ExperimentConfig::new(Experiment::OracleSuite)).unwrap();
    let failing: Vec<_> = out.report.items.iter().filter(|r| r.status != RowStatus::Pass).collect();
    assert!(failing.is_empty(), "{failing:#?}");
    assert_eq!(out.exit_status(), ExitStatus::Pass);
}
