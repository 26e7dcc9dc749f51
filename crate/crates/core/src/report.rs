//! Verification reports and their text, CSV and JSON renderings.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(flatten)]
    pub metrics: BTreeMap<String, Value>,
    pub pass: bool,
}

impl Case {
    pub fn new(k: Option<usize>, s: Option<usize>) -> Self {
        Self {
            k,
            s,
            metrics: BTreeMap::new(),
            pass: true,
        }
    }

    pub fn metric(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.metrics.insert(name.to_string(), value.into());
        self
    }

    pub fn passed(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub tol: f64,
    pub version: String,
    pub cases: Vec<Case>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, seed: u64, tol: f64, cases: Vec<Case>) -> Self {
        let pass = cases.iter().all(|c| c.pass);
        Self {
            command: command.to_string(),
            seed,
            tol,
            version: env!("CARGO_PKG_VERSION").to_string(),
            cases,
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    fn columns(&self) -> Vec<String> {
        let metrics: BTreeSet<&String> = self.cases.iter().flat_map(|c| c.metrics.keys()).collect();
        let mut cols = vec!["k".to_string(), "s".to_string()];
        cols.extend(metrics.into_iter().cloned());
        cols.push("pass".to_string());
        cols
    }

    fn row(case: &Case, cols: &[String]) -> Vec<String> {
        cols.iter()
            .map(|c| match c.as_str() {
                "k" => case.k.map(|v| v.to_string()).unwrap_or_default(),
                "s" => case.s.map(|v| v.to_string()).unwrap_or_default(),
                "pass" => case.pass.to_string(),
                m => case.metrics.get(m).map(render_value).unwrap_or_default(),
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let cols = self.columns();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&cols).expect("in-memory csv");
        for case in &self.cases {
            w.write_record(Self::row(case, &cols)).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8")
    }

    pub fn to_text(&self) -> String {
        let cols = self.columns();
        let rows: Vec<Vec<String>> = self.cases.iter().map(|c| Self::row(c, &cols)).collect();
        let widths: Vec<usize> = (0..cols.len())
            .map(|i| rows.iter().map(|r| r[i].len()).chain([cols[i].len()]).max().unwrap())
            .collect();
        let line = |cells: &[String]| -> String {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = format!(
            "{} (seed {}, tol {:e}, v{})\n",
            self.command, self.seed, self.tol, self.version
        );
        out += &line(&cols);
        out.push('\n');
        for r in &rows {
            out += &line(r);
            out.push('\n');
        }
        out += if self.pass { "PASS\n" } else { "FAIL\n" };
        out
    }
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if !n.is_i64() && !n.is_u64() => format!("{f:.3e}"),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let cases = vec![
            Case::new(Some(2), Some(1)).metric("space_dim", 216).metric("residual", 1.5e-14),
            Case::new(Some(1), Some(4))
                .metric("space_dim", 1)
                .metric("note", "skipped")
                .passed(false),
        ];
        Report::new("dims", 7, 1e-12, cases)
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(!r.pass);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["cases"][0]["space_dim"], 216);
        assert_eq!(v["command"], "dims");
    }

    #[test]
    fn csv_and_text() {
        let r = sample();
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "k,s,note,residual,space_dim,pass");
        assert_eq!(lines.next().unwrap(), "2,1,,1.500e-14,216,true");
        assert!(r.to_text().ends_with("FAIL\n"));
    }
}
