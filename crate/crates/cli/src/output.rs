use serde_json::Value;
use spinwreath_core::{CharTable, CheckReport};

use crate::config::Format;
use crate::error::CliError;

/// Integers that fit in `i64` as JSON numbers, larger ones as decimal strings.
pub fn big(b: &impl ToString) -> Value {
    let s = b.to_string();
    match s.parse::<i64>() {
        Ok(x) => Value::from(x),
        Err(_) => Value::from(s),
    }
}

pub enum Document {
    Classes(Value),
    Table(Box<CharTable>),
    Reports(String, Vec<CheckReport>),
    Mckay(Value),
}

impl Document {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(self.render_json()),
            Format::Csv => self.render_csv(),
            Format::Pretty => Ok(self.render_pretty()),
        }
    }

    fn json_value(&self) -> Value {
        match self {
            Document::Classes(v) | Document::Mckay(v) => v.clone(),
            Document::Table(t) => t.to_doc(),
            Document::Reports(_, r) => serde_json::to_value(r).expect("reports serialize"),
        }
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json_value()).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn render_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new().quote_style(csv::QuoteStyle::NonNumeric).from_writer(Vec::new());
        match self {
            Document::Classes(v) => {
                w.write_record(["rho", "rho_minus", "split", "parity", "centralizer", "class_size"])?;
                for c in v["classes"].as_array().into_iter().flatten() {
                    w.write_record([
                        c["rho"].to_string(),
                        c["rho_minus"].to_string(),
                        c["split"].to_string(),
                        plain(&c["parity"]),
                        plain(&c["centralizer"]),
                        plain(&c["class_size"]),
                    ])?;
                }
            }
            Document::Table(t) => {
                let class_names: Vec<String> = t.gamma.classes.iter().map(|c| c.name.clone()).collect();
                let mut header = vec!["lambda".to_string(), "type".to_string(), "degree".to_string()];
                header.extend(t.columns.iter().map(|c| c.display_with(&class_names)));
                w.write_record(&header)?;
                for row in &t.rows {
                    let mut rec = vec![row.lambda.display_with(&t.gamma.char_names), row.module_type.to_string(), row.degree.to_string()];
                    rec.extend(row.values.iter().map(|v| v.to_string()));
                    w.write_record(&rec)?;
                }
            }
            Document::Reports(_, reports) => {
                w.write_record(["relation", "status", "instances", "params", "witness"])?;
                for r in reports {
                    w.write_record([
                        r.relation.clone(),
                        if r.passed() { "pass".into() } else { "fail".into() },
                        r.instances.to_string(),
                        r.params.to_string(),
                        r.witness.clone().unwrap_or_default(),
                    ])?;
                }
            }
            Document::Mckay(v) => {
                let names: Vec<String> = v["characters"].as_array().into_iter().flatten().map(plain).collect();
                let mut header = vec![String::new()];
                header.extend(names.iter().cloned());
                w.write_record(&header)?;
                for (name, row) in names.iter().zip(v["cartan"].as_array().into_iter().flatten()) {
                    let mut rec = vec![name.clone()];
                    rec.extend(row.as_array().into_iter().flatten().map(plain));
                    w.write_record(&rec)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }

    pub fn render_pretty(&self) -> String {
        let mut out = String::new();
        match self {
            Document::Classes(v) => {
                out += &format!(
                    "{} n={}: {} even split pairs, {} odd split pairs\n",
                    plain(&v["gamma"]),
                    v["n"],
                    v["even_split_pairs"],
                    v["odd_split_pairs"]
                );
                for c in v["classes"].as_array().into_iter().flatten() {
                    out += &format!(
                        "  +{} -{}  {} {}  centralizer {}  size {}\n",
                        c["rho"],
                        c["rho_minus"],
                        plain(&c["parity"]),
                        if c["split"].as_bool() == Some(true) { "split" } else { "non-split" },
                        plain(&c["centralizer"]),
                        plain(&c["class_size"]),
                    );
                }
                if let Some(o) = v.get("oracle") {
                    out += &format!("oracle: {}\n", plain(&o["status"]));
                }
            }
            Document::Table(t) => {
                let class_names: Vec<String> = t.gamma.classes.iter().map(|c| c.name.clone()).collect();
                let cols: Vec<String> = t.columns.iter().map(|c| c.display_with(&class_names)).collect();
                out += &format!("{} n={}\ncolumns: {}\n", t.gamma.name, t.n, cols.join(" | "));
                for row in &t.rows {
                    let vals: Vec<String> = row.values.iter().map(|v| v.to_string()).collect();
                    out += &format!("{} [{}] {}\n", row.lambda.display_with(&t.gamma.char_names), row.module_type, vals.join(" "));
                }
            }
            Document::Reports(kind, reports) => {
                for r in reports {
                    out += &format!(
                        "{kind}: {} {} ({} instances) {}",
                        if r.passed() { "PASS" } else { "FAIL" },
                        r.relation,
                        r.instances,
                        r.params
                    );
                    if let Some(w) = &r.witness {
                        out += &format!("\n  witness: {w}");
                    }
                    out.push('\n');
                }
            }
            Document::Mckay(v) => {
                out += &format!("{} xi={}\n", plain(&v["gamma"]), v["xi"]);
                for row in v["cartan"].as_array().into_iter().flatten() {
                    out += &format!("  {row}\n");
                }
                out += &format!("affine type: {}\n", v["affine_type"].as_str().unwrap_or("unrecognized"));
            }
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
