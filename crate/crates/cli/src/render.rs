//! Output documents: a JSON value plus the matrices it contains, rendered as
//! JSON, CSV or aligned text.

use std::fmt::Write as _;

use forestcalc::matrix::to_csv;
use forestcalc::{Matrix, MatrixDoc, Result, Scalar};
use serde_json::{Map, Value};

use crate::args::Format;

#[derive(Default)]
pub struct Report {
    fields: Map<String, Value>,
    matrices: Vec<(String, MatrixDoc, String)>,
    lines: Vec<String>,
}

impl Report {
    pub fn field(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.lines.push(text.into());
        self
    }

    pub fn matrix<T: Scalar>(&mut self, name: &str, m: &Matrix<T>, labels: &[String]) -> Result<&mut Self> {
        let doc = MatrixDoc::new(m, labels);
        self.fields
            .insert(name.to_string(), serde_json::to_value(&doc)?);
        self.matrices
            .push((name.to_string(), doc, to_csv(m, labels)?));
        Ok(self)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&Value::Object(self.fields.clone()))?;
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::new();
                for (name, _, csv) in &self.matrices {
                    let _ = writeln!(s, "# {name}");
                    s.push_str(csv);
                }
                if self.matrices.is_empty() {
                    for (k, v) in &self.fields {
                        let _ = writeln!(s, "{k},{}", scalar_text(v));
                    }
                }
                s
            }
            Format::Pretty => {
                let mut s = String::new();
                for l in &self.lines {
                    let _ = writeln!(s, "{l}");
                }
                for (name, doc, _) in &self.matrices {
                    let _ = writeln!(s, "\n{name}:");
                    s.push_str(&pretty_matrix(doc));
                }
                s
            }
        })
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn pretty_matrix(doc: &MatrixDoc) -> String {
    let width = doc
        .entries
        .iter()
        .flatten()
        .chain(&doc.labels)
        .map(|e| e.chars().count())
        .max()
        .unwrap_or(1);
    let label_width = doc.labels.iter().map(|l| l.chars().count()).max().unwrap_or(1);
    let mut s = format!("{:label_width$}", "");
    for l in &doc.labels {
        let _ = write!(s, "  {l:>width$}");
    }
    s.push('\n');
    for (label, row) in doc.labels.iter().zip(&doc.entries) {
        let _ = write!(s, "{label:label_width$}");
        for e in row {
            let _ = write!(s, "  {e:>width$}");
        }
        s.push('\n');
    }
    s
}
