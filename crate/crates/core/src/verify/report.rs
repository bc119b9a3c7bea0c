//! Machine-readable verification reports.

use serde_json::{json, Value};

/// One verified claim: what was computed, what was expected, and whether they
/// agree. Exact values are reported as JSON; floating point appears only in
/// sign-check records and always together with its error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub citation: String,
    pub pass: bool,
    pub expected: Value,
    pub computed: Value,
}

/// A full verification run. The overall run passes exactly when every record
/// passes.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub l: i64,
    pub checks: Vec<CheckRecord>,
    pub decomposition: Option<Value>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "l": self.l,
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "citation": c.citation,
                "pass": c.pass,
                "expected": c.expected,
                "computed": c.computed,
            })).collect::<Vec<_>>(),
            "decomposition": self.decomposition.clone().unwrap_or(Value::Null),
        })
    }

    pub fn from_json(v: &Value) -> Option<Report> {
        let l = v.get("l")?.as_i64()?;
        let checks = v
            .get("checks")?
            .as_array()?
            .iter()
            .map(|c| {
                Some(CheckRecord {
                    name: c.get("name")?.as_str()?.to_string(),
                    citation: c.get("citation")?.as_str()?.to_string(),
                    pass: c.get("pass")?.as_bool()?,
                    expected: c.get("expected")?.clone(),
                    computed: c.get("computed")?.clone(),
                })
            })
            .collect::<Option<Vec<_>>>()?;
        let decomposition = match v.get("decomposition")? {
            Value::Null => None,
            other => Some(other.clone()),
        };
        Some(Report {
            l,
            checks,
            decomposition,
        })
    }

    /// One line per check plus a verdict, for terminal output.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("verification run for l = {}\n", self.l));
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("  [{status}] {} — {}\n", c.name, c.citation));
            if !c.pass {
                out.push_str(&format!("         expected: {}\n", c.expected));
                out.push_str(&format!("         computed: {}\n", c.computed));
            }
        }
        if let Some(d) = &self.decomposition {
            out.push_str("decomposition:\n");
            if let Some(entries) = d.as_array() {
                for e in entries {
                    out.push_str(&format!(
                        "  {}({}) x {}\n",
                        e.get("kind").and_then(Value::as_str).unwrap_or("?"),
                        e.get("weight").and_then(Value::as_i64).unwrap_or(0),
                        e.get("multiplicity").and_then(Value::as_u64).unwrap_or(0),
                    ));
                }
            }
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.pass() { "PASS" } else { "FAIL" }
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_is_identity() {
        let report = Report {
            l: 5,
            checks: vec![
                CheckRecord {
                    name: "sign-lemma".into(),
                    citation: "positivity rule for quantum integers".into(),
                    pass: true,
                    expected: json!({"positive": [1, 3]}),
                    computed: json!({"positive": [1, 3], "error_bound_log2": -64.0}),
                },
                CheckRecord {
                    name: "dimensions".into(),
                    citation: "dimension count".into(),
                    pass: false,
                    expected: json!(125),
                    computed: json!(124),
                },
            ],
            decomposition: Some(json!([{"kind": "P", "weight": 4, "multiplicity": 5}])),
        };
        let parsed = Report::from_json(&report.to_json()).unwrap();
        assert_eq!(parsed, report);
        assert!(!report.pass());
        // and a report without a decomposition keeps the null
        let bare = Report {
            l: 3,
            checks: vec![],
            decomposition: None,
        };
        assert_eq!(Report::from_json(&bare.to_json()).unwrap(), bare);
    }
}
