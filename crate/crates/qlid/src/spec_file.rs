//! Reading and writing experiment spec files.
//!
//! A spec file is TOML with three required tables and one optional table:
//!
//! ```toml
//! [metadata]
//! name = "shafir1992"
//! stp_violation = true
//! p_unknown_observed = 0.63
//! p_classical = 0.905
//! theta = 2.8151                # optional
//!
//! [network]
//! p_known_defect = 0.97         # P(X2=averse | X1=defect)
//! p_known_cooperate = 0.84      # P(X2=averse | X1=cooperate)
//!
//! [payoffs]                     # <opponent><player>
//! dd = 30.0
//! dc = 25.0
//! cd = 85.0
//! cc = 75.0
//!
//! [reference]                   # optional, published MEU values
//! theta = 2.815
//! classical_averse_defect = 50.25
//! quantum_seeking_cooperate = 116.66
//! magnitude_only = ["quantum_seeking_cooperate"]
//! exclude = []
//! ```
//!
//! Reference cell keys are `<classical|quantum>_<averse|seeking>_<defect|cooperate>`;
//! any subset may be given. Unknown keys are rejected. Integers are accepted
//! wherever a real is expected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset;
use crate::error::{HarnessError, Result};
use crate::record::{
    cell_key, Comparison, ExperimentRecord, MeuKind, MeuReference, Payoffs, ReferenceCell, ACTIONS,
    CONTEXT_OUTCOMES,
};

/// Prefix selecting a built-in record instead of a file, e.g. `builtin:shafir1992`.
pub const BUILTIN_PREFIX: &str = "builtin:";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    metadata: Metadata,
    network: Network,
    payoffs: PayoffDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reference: Option<ReferenceDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Metadata {
    name: String,
    #[serde(default)]
    stp_violation: bool,
    p_unknown_observed: f64,
    p_classical: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Network {
    p_known_defect: f64,
    p_known_cooperate: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PayoffDoc {
    dd: f64,
    dc: f64,
    cd: f64,
    cc: f64,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReferenceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    classical_averse_defect: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    classical_averse_cooperate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    classical_seeking_defect: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    classical_seeking_cooperate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quantum_averse_defect: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quantum_averse_cooperate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quantum_seeking_defect: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quantum_seeking_cooperate: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    magnitude_only: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    exclude: Vec<String>,
}

const KINDS: [MeuKind; 2] = [MeuKind::Classical, MeuKind::Quantum];

impl ReferenceDoc {
    fn slot(&mut self, kind: MeuKind, context: usize, action: usize) -> &mut Option<f64> {
        match (kind, context, action) {
            (MeuKind::Classical, 0, 0) => &mut self.classical_averse_defect,
            (MeuKind::Classical, 0, _) => &mut self.classical_averse_cooperate,
            (MeuKind::Classical, _, 0) => &mut self.classical_seeking_defect,
            (MeuKind::Classical, _, _) => &mut self.classical_seeking_cooperate,
            (MeuKind::Quantum, 0, 0) => &mut self.quantum_averse_defect,
            (MeuKind::Quantum, 0, _) => &mut self.quantum_averse_cooperate,
            (MeuKind::Quantum, _, 0) => &mut self.quantum_seeking_defect,
            (MeuKind::Quantum, _, _) => &mut self.quantum_seeking_cooperate,
        }
    }

    fn into_reference(mut self, origin: &str) -> Result<MeuReference> {
        let known: Vec<String> = KINDS
            .iter()
            .flat_map(|k| (0..2).flat_map(move |z| (0..2).map(move |a| cell_key(*k, z, a))))
            .collect();
        for (field, keys) in [("reference.magnitude_only", &self.magnitude_only), ("reference.exclude", &self.exclude)] {
            for key in keys {
                if !known.contains(key) {
                    return Err(HarnessError::Invalid {
                        origin: origin.to_string(),
                        field: field.to_string(),
                        message: format!("unknown cell `{key}`"),
                    });
                }
            }
        }
        let mut cells = Vec::new();
        for kind in KINDS {
            for context in 0..CONTEXT_OUTCOMES.len() {
                for action in 0..ACTIONS.len() {
                    let key = cell_key(kind, context, action);
                    let comparison = if self.exclude.contains(&key) {
                        Comparison::Excluded
                    } else if self.magnitude_only.contains(&key) {
                        Comparison::Magnitude
                    } else {
                        Comparison::Signed
                    };
                    if let Some(value) = *self.slot(kind, context, action) {
                        cells.push(ReferenceCell { kind, context, action, value, comparison });
                    }
                }
            }
        }
        Ok(MeuReference { theta: self.theta, cells })
    }

    fn from_reference(r: &MeuReference) -> Self {
        let mut doc = ReferenceDoc { theta: r.theta, ..Default::default() };
        for c in &r.cells {
            *doc.slot(c.kind, c.context, c.action) = Some(c.value);
            match c.comparison {
                Comparison::Magnitude => doc.magnitude_only.push(c.key()),
                Comparison::Excluded => doc.exclude.push(c.key()),
                Comparison::Signed => {}
            }
        }
        doc
    }
}

/// Parses and validates spec text. `origin` names the source in diagnostics.
pub fn parse_spec(text: &str, origin: &str) -> Result<ExperimentRecord> {
    let doc: SpecDoc = toml::from_str(text).map_err(|e| HarnessError::Parse {
        origin: origin.to_string(),
        message: e.to_string().trim_end().to_string(),
    })?;
    let reference = doc.reference.map(|r| r.into_reference(origin)).transpose()?;
    let record = ExperimentRecord {
        name: doc.metadata.name,
        p_known_defect: doc.network.p_known_defect,
        p_known_cooperate: doc.network.p_known_cooperate,
        p_unknown_observed: doc.metadata.p_unknown_observed,
        p_classical: doc.metadata.p_classical,
        theta: doc.metadata.theta,
        payoffs: Payoffs { dd: doc.payoffs.dd, dc: doc.payoffs.dc, cd: doc.payoffs.cd, cc: doc.payoffs.cc },
        stp_violation: doc.metadata.stp_violation,
        reference,
    };
    record.validate(origin)?;
    Ok(record)
}

/// Renders a record as spec text; [`parse_spec`] reads it back bit-exactly.
pub fn emit_spec(record: &ExperimentRecord) -> String {
    let doc = SpecDoc {
        metadata: Metadata {
            name: record.name.clone(),
            stp_violation: record.stp_violation,
            p_unknown_observed: record.p_unknown_observed,
            p_classical: record.p_classical,
            theta: record.theta,
        },
        network: Network { p_known_defect: record.p_known_defect, p_known_cooperate: record.p_known_cooperate },
        payoffs: PayoffDoc {
            dd: record.payoffs.dd,
            dc: record.payoffs.dc,
            cd: record.payoffs.cd,
            cc: record.payoffs.cc,
        },
        reference: record.reference.as_ref().map(ReferenceDoc::from_reference),
    };
    toml::to_string(&doc).expect("spec documents always serialize")
}

/// Loads a spec from a path, or a built-in record when `source` starts with
/// `builtin:`.
pub fn load_record(source: &str) -> Result<ExperimentRecord> {
    if let Some(name) = source.strip_prefix(BUILTIN_PREFIX) {
        return dataset::builtin_record(name).ok_or_else(|| HarnessError::UnknownBuiltin(name.to_string()));
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })?;
    parse_spec(&text, &path.display().to_string())
}

/// Loads a spec and builds its decision problem.
pub fn load_spec(source: &str) -> Result<(ExperimentRecord, qlid_core::DecisionProblem)> {
    let record = load_record(source)?;
    let problem = record.problem()?;
    Ok((record, problem))
}

/// Writes a record as a spec file.
pub fn write_spec(record: &ExperimentRecord, path: &Path) -> Result<()> {
    std::fs::write(path, emit_spec(record)).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_records_round_trip() {
        for r in dataset::builtin() {
            let text = emit_spec(&r);
            let back = parse_spec(&text, "emitted").unwrap();
            assert_eq!(back, r, "{text}");
        }
    }

    #[test]
    fn unknown_field_is_rejected_with_location() {
        let text = emit_spec(&dataset::builtin_record("shafir1992").unwrap()).replace("[network]", "[network]\nextra = 1");
        let err = parse_spec(&text, "bad.toml").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bad.toml") && msg.contains("extra") && msg.contains("line"), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn out_of_range_probability_names_field() {
        let text = emit_spec(&dataset::builtin_record("shafir1992").unwrap())
            .replace("p_known_defect = 0.97", "p_known_defect = 1.2");
        let err = parse_spec(&text, "bad.toml").unwrap_err();
        assert!(err.to_string().contains("network.p_known_defect"), "{err}");
    }

    #[test]
    fn inconsistent_classical_probability() {
        let text = emit_spec(&dataset::builtin_record("shafir1992").unwrap())
            .replace("p_classical = 0.905", "p_classical = 0.8");
        let err = parse_spec(&text, "bad.toml").unwrap_err();
        assert!(err.to_string().contains("metadata.p_classical"), "{err}");
    }

    #[test]
    fn integers_accepted_for_reals() {
        let text = "[metadata]\nname = \"x\"\np_unknown_observed = 1\np_classical = 1\n\
                    [network]\np_known_defect = 1\np_known_cooperate = 1\n\
                    [payoffs]\ndd = 1\ndc = 2\ncd = 3\ncc = 4\n";
        let r = parse_spec(text, "ints").unwrap();
        assert_eq!(r.payoffs.cc, 4.0);
        assert!(r.reference.is_none() && r.theta.is_none() && !r.stp_violation);
    }

    #[test]
    fn unknown_reference_key_in_list() {
        let text = emit_spec(&dataset::builtin_record("shafir1992").unwrap())
            .replace("magnitude_only = [\"quantum_seeking_cooperate\"]", "magnitude_only = [\"quantum_sideways\"]");
        let err = parse_spec(&text, "bad.toml").unwrap_err();
        assert!(err.to_string().contains("reference.magnitude_only"), "{err}");
    }

    #[test]
    fn unknown_builtin() {
        assert!(matches!(load_record("builtin:nope"), Err(HarnessError::UnknownBuiltin(_))));
    }
}
