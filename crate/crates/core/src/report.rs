//! Deterministic JSON reports for verification runs.

use serde_json::{json, Value};

use crate::cases::CaseSpec;
use crate::group::GroupElement;
use crate::verifier::{DegreeRecord, IsoVerification, VerifyError};

/// Outcome of running the pipeline on one [`CaseSpec`].
#[derive(Debug, Clone)]
pub struct VerificationOutcome {
    pub pass: bool,
    pub result: Result<IsoVerification, VerifyError>,
    pub json: Value,
}

impl VerificationOutcome {
    pub fn error_kind(&self) -> Option<&'static str> {
        self.result.as_ref().err().map(VerifyError::kind)
    }

    /// Pretty-printed report; keys are sorted, so equal inputs give equal bytes.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
        s.push('\n');
        s
    }
}

fn strings(xs: &[GroupElement]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn record_json(r: &DegreeRecord) -> Value {
    json!({
        "degree": r.degree.to_string(),
        "fiber": strings(&r.fiber),
        "source_dim": r.source_dim,
        "target_dim": r.target_dim,
        "image_rank": r.image_rank,
        "pass": r.passes(),
    })
}

fn algebra_json(a: &crate::algebra::CoordinateAlgebra) -> Value {
    json!({
        "weights": a.weights().weights(),
        "params": a.params().iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

/// Builds the homomorphism for `spec`, checks it on `[-window, window]` and
/// assembles the report.
pub fn verify_case(spec: &CaseSpec, window: i64) -> VerificationOutcome {
    let result = spec.algebra_hom().and_then(|h| h.verify_iso_window(window));
    let constants: serde_json::Map<String, Value> =
        spec.constants.iter().map(|(k, v)| (k.to_string(), Value::String(v.to_string()))).collect();
    let expected = spec.expected_kernel.as_ref().map(|k| {
        let mut k = k.clone();
        k.sort();
        strings(&k)
    });

    let mut report = json!({
        "case": spec.name,
        "field": spec.field.to_string(),
        "window": window,
        "constants": constants,
        "source": algebra_json(&spec.source),
        "target": algebra_json(&spec.target),
        "pi": strings(&spec.pi_images),
        "phi": spec.phi_images.iter().map(|p| p.render(spec.target.symbol())).collect::<Vec<_>>(),
        "tampered": spec.tampered,
        "expected_kernel": expected,
    });
    let obj = report.as_object_mut().expect("object literal");

    let pass = match &result {
        Ok(v) => {
            let adm = &v.admissibility;
            let kernel = strings(&adm.kernel);
            let kernel_matches = expected.as_ref().map(|e| *e == kernel);
            let failed = v.failing_records().count();
            let pass = v.passes() && kernel_matches != Some(false);
            obj.insert("admissible".into(), json!(adm.is_admissible()));
            obj.insert("effective".into(), json!(adm.effective));
            obj.insert("edge_regime_ok".into(), json!(adm.edge_regime_ok));
            obj.insert("ah2_checked".into(), json!(adm.ah2_checked));
            obj.insert("ah2_failures".into(), json!(adm.ah2_failures));
            obj.insert("kernel".into(), json!(kernel));
            obj.insert("kernel_matches".into(), json!(kernel_matches));
            obj.insert("records".into(), Value::Array(v.records.iter().map(record_json).collect()));
            obj.insert("error".into(), Value::Null);
            let statement = if pass {
                format!(
                    "phi is bijective in every degree of L({}) with |l| <= {window}",
                    spec.target.weights()
                )
            } else {
                format!("{failed} degree records failed; admissible = {}", adm.is_admissible())
            };
            obj.insert(
                "summary".into(),
                json!({
                    "pass": pass,
                    "records_total": v.records.len(),
                    "records_failed": failed,
                    "statement": statement,
                }),
            );
            pass
        }
        Err(e) => {
            let kernel = spec.group_hom().ok().and_then(|h| h.kernel().ok()).map(|k| strings(&k));
            obj.insert("admissible".into(), json!(false));
            obj.insert("kernel".into(), json!(kernel));
            obj.insert("kernel_matches".into(), Value::Null);
            obj.insert("records".into(), json!([]));
            obj.insert("error".into(), json!({"kind": e.kind(), "message": e.to_string()}));
            obj.insert(
                "summary".into(),
                json!({
                    "pass": false,
                    "records_total": 0,
                    "records_failed": 0,
                    "statement": format!("{}: {e}", e.kind()),
                }),
            );
            false
        }
    };
    VerificationOutcome { pass, result, json: report }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases::builtin_case;
    use crate::constants::CaseId;
    use crate::field::FieldSpec;

    #[test]
    fn case_b_report() {
        let spec = builtin_case(CaseId::B, &FieldSpec::Prime(7), None).unwrap();
        let out = verify_case(&spec, 4);
        assert!(out.pass);
        assert_eq!(out.json["constants"]["epsilon"], "3");
        assert_eq!(out.json["constants"]["delta"], "1");
        assert_eq!(out.json["kernel_matches"], true);
        assert_eq!(out.json["error"], Value::Null);
        assert_eq!(out.render(), verify_case(&spec, 4).render());
    }

    #[test]
    fn relation_error_report() {
        let f = FieldSpec::Prime(5);
        let mut spec = builtin_case(CaseId::A, &f, None).unwrap();
        let t = spec.parse_tamper("lambda=2").unwrap();
        spec.apply_tamper(&t).unwrap();
        let out = verify_case(&spec, 4);
        assert!(!out.pass);
        assert_eq!(out.error_kind(), Some("RelationError"));
        assert_eq!(out.json["error"]["kind"], "RelationError");
        assert_eq!(out.json["tampered"][0], "lambda=2");
    }
}
