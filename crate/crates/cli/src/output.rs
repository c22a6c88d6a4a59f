//! Rendering of series and verification reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use plfg_core::verify::VerifyReport;
use serde_json::{json, Value};

use crate::Format;

pub struct Series {
    group: String,
    prime: u32,
    part: Option<&'static str>,
    degrees: Vec<u32>,
    dims: Vec<usize>,
}

impl Series {
    /// Dimensions in degrees 0, 2, 4, ...
    pub fn even(group: &str, prime: u32, dims: Vec<usize>) -> Self {
        let degrees = (0..dims.len() as u32).map(|t| 2 * t).collect();
        Series { group: group.into(), prime, part: None, degrees, dims }
    }

    pub fn sparse(group: &str, prime: u32, dims: BTreeMap<u32, usize>) -> Self {
        let (degrees, dims) = dims.into_iter().unzip();
        Series { group: group.into(), prime, part: None, degrees, dims }
    }

    pub fn with_part(mut self, part: &'static str) -> Self {
        self.part = Some(part);
        self
    }

    fn to_json(&self) -> Value {
        let mut v = json!({
            "group": self.group,
            "prime": self.prime,
            "degrees": self.degrees,
            "dims": self.dims,
        });
        if let Some(part) = self.part {
            v["part"] = json!(part);
        }
        v
    }
}

pub fn json_line(v: &Value) -> String {
    format!("{}\n", serde_json::to_string(v).expect("JSON values serialize"))
}

/// Quotes a CSV field when it needs it.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One series renders as an object, several as an array.
pub fn series(parts: &[Series], f: Format) -> String {
    let mut out = String::new();
    match f {
        Format::Json => {
            let v: Vec<Value> = parts.iter().map(Series::to_json).collect();
            out = if v.len() == 1 { json_line(&v[0]) } else { json_line(&Value::Array(v)) };
        }
        Format::Csv => {
            out.push_str("group,prime,part,degree,dim\n");
            for s in parts {
                for (d, n) in s.degrees.iter().zip(&s.dims) {
                    let _ = writeln!(out, "{},{},{},{d},{n}", csv_field(&s.group), s.prime, s.part.unwrap_or(""));
                }
            }
        }
        Format::Text => {
            for s in parts {
                let _ = writeln!(out, "{} (p={}) {}", s.group, s.prime, s.part.unwrap_or(""));
                for (d, n) in s.degrees.iter().zip(&s.dims) {
                    let _ = writeln!(out, "  H^{d:<5} {n}");
                }
            }
        }
    }
    out
}

fn status(r: &VerifyReport) -> &'static str {
    if r.passed() {
        "ok"
    } else {
        "mismatch"
    }
}

pub fn reports(reports: &[VerifyReport], f: Format) -> String {
    let mut out = String::new();
    match f {
        Format::Json => {
            let v: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "group": r.group,
                        "prime": r.prime,
                        "by_analogy": r.by_analogy,
                        "status": status(r),
                        "checks": r.checks,
                    })
                })
                .collect();
            out = if v.len() == 1 { json_line(&v[0]) } else { json_line(&Value::Array(v)) };
        }
        Format::Csv => {
            out.push_str("group,prime,check,passed,degree,detail\n");
            for r in reports {
                for c in &r.checks {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        csv_field(&r.group),
                        r.prime,
                        csv_field(&c.name),
                        c.passed,
                        c.degree.map(|d| d.to_string()).unwrap_or_default(),
                        csv_field(&c.detail)
                    );
                }
            }
        }
        Format::Text => {
            for r in reports {
                let note = if r.by_analogy { " (odd part by analogy)" } else { "" };
                let _ = writeln!(out, "{} (p={}): {}{note}", r.group, r.prime, status(r));
                for c in &r.checks {
                    let _ = writeln!(out, "  [{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
                }
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            if reports.len() > 1 {
                let _ = writeln!(out, "{} groups, {failed} with mismatches", reports.len());
            }
        }
    }
    out
}
