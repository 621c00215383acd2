//! Canonical JSON: sorted keys, floats rounded to 6 significant digits,
//! rationals as "num/den" strings.

use std::time::Duration;

use ffbertini::geometry::{ClosedPoint, Validation};
use ffbertini::smoothness::{IntegralityVerdict, SmoothnessVerdict};
use ffbertini::zeta::{DensityPrediction, Provenance};
use num_rational::BigRational;
use serde_json::{json, Map, Value};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

pub struct RunReport {
    pub command: &'static str,
    pub params: Value,
    pub result: Value,
    pub seed: Option<u64>,
    pub wall_time: Duration,
    pub shard_count: u64,
}

impl RunReport {
    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "params": self.params,
            "result": self.result,
            "seed": self.seed,
            "wall_time": float(self.wall_time.as_secs_f64()),
            "shard_count": self.shard_count,
            "artifact_version": ARTIFACT_VERSION,
        })
    }

    pub fn render(&self) -> String {
        render(&self.to_value())
    }
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float");
    json!(rounded)
}

pub fn rational(x: &BigRational) -> Value {
    Value::String(format!("{}/{}", x.numer(), x.denom()))
}

pub fn point(p: &ClosedPoint) -> Value {
    json!({ "point": p.to_string(), "degree": p.degree() })
}

pub fn verdict(v: &SmoothnessVerdict) -> Value {
    match v {
        SmoothnessVerdict::Smooth {
            checked_bound,
            exact,
        } => json!({ "kind": "Smooth", "checked_bound": checked_bound, "exact": exact }),
        SmoothnessVerdict::SingularAt(p) => json!({ "kind": "SingularAt", "at": point(p) }),
        SmoothnessVerdict::IsWholeSpace => json!({ "kind": "IsWholeSpace" }),
    }
}

pub fn integrality(v: &IntegralityVerdict) -> Value {
    match v {
        IntegralityVerdict::GeometricallyIntegral => json!({ "kind": "GeometricallyIntegral" }),
        IntegralityVerdict::ReducibleOver {
            e,
            factor_degrees,
            factor,
            cofactor,
        } => json!({
            "kind": "ReducibleOver",
            "e": e,
            "factor_degrees": factor_degrees,
            "factor": factor,
            "cofactor": cofactor,
        }),
        IntegralityVerdict::Unknown { budget_note } => {
            json!({ "kind": "Unknown", "note": budget_note })
        }
    }
}

pub fn validation(v: &Validation) -> Value {
    match v {
        Validation::ValidUpTo(b) => json!({ "kind": "ValidUpTo", "bound": b }),
        Validation::NotSmoothAt(p) => json!({ "kind": "NotSmoothAt", "at": point(p) }),
        Validation::WrongRankAt(p) => json!({ "kind": "WrongRankAt", "at": point(p) }),
    }
}

pub fn provenance(p: &Provenance) -> Value {
    match p {
        Provenance::ClosedForm => json!({ "kind": "ClosedForm" }),
        Provenance::Truncated { r, stabilization } => json!({
            "kind": "Truncated",
            "r": r,
            "stabilization": stabilization.map_or(Value::Null, float),
        }),
    }
}

pub fn prediction(p: &DensityPrediction) -> Value {
    let mut m = Map::new();
    m.insert("value".into(), rational(&p.value));
    m.insert("float".into(), float(p.float));
    m.insert("provenance".into(), provenance(&p.provenance));
    if let Some(j) = &p.jet_factor {
        m.insert("jet_factor".into(), rational(j));
    }
    Value::Object(m)
}
