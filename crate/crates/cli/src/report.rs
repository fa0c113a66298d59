//! Report rendering: a column-named table plus the run manifest,
//! emitted as CSV (manifest comment line, header, rows) or JSON
//! (manifest object plus one object per row). Numbers are rounded to
//! 12 significant digits before printing so reruns with an equal
//! manifest are byte-identical.

use serde_json::{Map, Number, Value};

pub struct Report {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Report {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the declared columns"
        );
        self.rows.push(row);
    }
}

pub struct Manifest {
    pub subcommand: &'static str,
    pub params: Map<String, Value>,
    pub seed: u64,
    pub output: String,
}

impl Manifest {
    fn to_value(&self) -> Value {
        let mut map = Map::new();
        map.insert("subcommand".into(), Value::from(self.subcommand));
        map.insert("params".into(), Value::Object(self.params.clone()));
        map.insert("seed".into(), Value::from(self.seed));
        map.insert(
            "tool_version".into(),
            Value::from(env!("CARGO_PKG_VERSION")),
        );
        map.insert("output".into(), Value::from(self.output.clone()));
        Value::Object(map)
    }
}

/// Round to 12 significant digits and wrap as a JSON value.
pub fn float(x: f64) -> Value {
    let rounded = if x.is_finite() && x != 0.0 {
        format!("{x:.11e}").parse::<f64>().unwrap_or(x)
    } else if x == 0.0 {
        // Normalize −0 so runs cannot differ in sign-of-zero only.
        0.0
    } else {
        x
    };
    match Number::from_f64(rounded) {
        Some(number) => Value::Number(number),
        None => Value::String(format!("{rounded}")),
    }
}

fn csv_cell(value: &Value) -> String {
    let raw = match value {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

pub fn render(report: &Report, manifest: &Manifest, as_json: bool) -> String {
    if as_json {
        let rows: Vec<Value> = report
            .rows
            .iter()
            .map(|row| {
                let mut object = Map::new();
                for (name, value) in report.columns.iter().zip(row) {
                    object.insert((*name).into(), value.clone());
                }
                Value::Object(object)
            })
            .collect();
        let mut document = Map::new();
        document.insert("manifest".into(), manifest.to_value());
        document.insert("rows".into(), Value::Array(rows));
        let mut text = serde_json::to_string_pretty(&Value::Object(document))
            .expect("report serialization cannot fail");
        text.push('\n');
        text
    } else {
        let mut text = format!(
            "# manifest: {}\n",
            serde_json::to_string(&manifest.to_value())
                .expect("manifest serialization cannot fail")
        );
        text.push_str(&report.columns.join(","));
        text.push('\n');
        for row in &report.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            text.push_str(&cells.join(","));
            text.push('\n');
        }
        text
    }
}
