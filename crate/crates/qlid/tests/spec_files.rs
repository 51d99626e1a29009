use std::path::PathBuf;

use qlid::{dataset, emit_spec, load_record, load_spec, parse_spec, write_spec};

fn specs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs")
}

#[test]
fn shipped_specs_match_builtin_corpus() {
    for record in dataset::builtin() {
        let path = specs_dir().join(format!("{}.toml", record.name));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, emit_spec(&record), "{} is out of date", path.display());
        assert_eq!(load_record(&path.to_string_lossy()).unwrap(), record);
    }
}

#[test]
fn written_spec_rebuilds_identical_problem() {
    let dir = tempfile::tempdir().unwrap();
    for record in dataset::builtin() {
        let path = dir.path().join(format!("{}.toml", record.name));
        write_spec(&record, &path).unwrap();
        let (back, problem) = load_spec(&path.to_string_lossy()).unwrap();
        assert_eq!(back, record);
        let original = record.problem().unwrap();
        assert_eq!(problem.utility().rows(), original.utility().rows());
        for id in original.network().ids() {
            let (a, b) = (original.network().cpt(id).unwrap(), problem.network().cpt(id).unwrap());
            for (ra, rb) in a.rows().iter().zip(b.rows()) {
                for (x, y) in ra.iter().zip(rb) {
                    assert_eq!(x.magnitude().to_bits(), y.magnitude().to_bits());
                    assert_eq!(x.phase().to_bits(), y.phase().to_bits());
                }
            }
        }
    }
}

#[test]
fn awkward_floats_survive_round_trip() {
    let mut r = dataset::builtin_record("li2002_game1").unwrap();
    r.p_known_defect = 0.1 + 0.2;
    r.p_known_cooperate = 1.0 / 3.0;
    r.p_classical = 0.5 * (r.p_known_defect + r.p_known_cooperate);
    r.payoffs.dd = -1e-300;
    r.payoffs.cc = 6.02214076e23;
    r.theta = Some(std::f64::consts::PI);
    let back = parse_spec(&emit_spec(&r), "memory").unwrap();
    assert_eq!(back, r);
}

#[test]
fn missing_table_is_reported() {
    let err = parse_spec("[metadata]\nname = \"x\"\np_unknown_observed = 0.5\np_classical = 0.5\n", "short.toml")
        .unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("short.toml") && msg.contains("network"), "{msg}");
}

#[test]
fn wrong_type_is_reported_with_line() {
    let text = emit_spec(&dataset::builtin_record("shafir1992").unwrap()).replace("dd = 30.0", "dd = \"thirty\"");
    let msg = parse_spec(&text, "typed.toml").unwrap_err().to_string();
    assert!(msg.contains("line") && msg.contains("dd"), "{msg}");
}
