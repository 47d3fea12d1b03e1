use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Table,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()
    }
}

/// Result of one subcommand. JSON keys are sorted, so identical inputs give
/// byte-identical output.
#[derive(Clone, Debug)]
pub struct Output {
    pub command: &'static str,
    pub seed: u64,
    pub fields: Vec<(String, Value)>,
    pub table: Option<Table>,
}

impl Output {
    pub fn new(command: &'static str, seed: u64) -> Self {
        Self {
            command,
            seed,
            fields: Vec::new(),
            table: None,
        }
    }

    pub fn field(mut self, key: impl Into<String>, value: impl Into<Value>) -> Self {
        self.fields.push((key.into(), value.into()));
        self
    }

    pub fn fields(mut self, values: impl IntoIterator<Item = (String, Value)>) -> Self {
        self.fields.extend(values);
        self
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("command".into(), self.command.into());
        map.insert("seed".into(), self.seed.to_string().into());
        for (k, v) in &self.fields {
            map.insert(k.clone(), v.clone());
        }
        if let Some(t) = &self.table {
            map.insert("columns".into(), t.columns.clone().into());
            map.insert(
                "rows".into(),
                Value::Array(t.rows.iter().map(|r| r.clone().into()).collect()),
            );
        }
        Value::Object(map)
    }

    pub fn render<W: Write>(&self, format: Format, mut out: W) -> std::io::Result<()> {
        match format {
            Format::Json => {
                let text = serde_json::to_string_pretty(&self.to_json()).expect("json output");
                writeln!(out, "{text}")
            }
            Format::Csv => match &self.table {
                Some(t) => t.write_csv(out),
                None => {
                    let mut t = Table::new(["command", "seed"]);
                    t.columns.extend(self.fields.iter().map(|(k, _)| k.clone()));
                    let mut row = vec![self.command.to_string(), self.seed.to_string()];
                    row.extend(self.fields.iter().map(|(_, v)| plain(v)));
                    t.push(row);
                    t.write_csv(out)
                }
            },
            Format::Table => {
                writeln!(out, "{} (seed {})", self.command, self.seed)?;
                let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.fields {
                    writeln!(out, "  {k:<width$}  {}", plain(v))?;
                }
                if let Some(t) = &self.table {
                    let widths: Vec<usize> = (0..t.columns.len())
                        .map(|c| {
                            t.rows
                                .iter()
                                .map(|r| r[c].len())
                                .chain([t.columns[c].len()])
                                .max()
                                .unwrap_or(0)
                        })
                        .collect();
                    let line = |cells: &[String]| {
                        cells
                            .iter()
                            .zip(&widths)
                            .map(|(c, w)| format!("{c:>w$}"))
                            .collect::<Vec<_>>()
                            .join("  ")
                    };
                    writeln!(out, "  {}", line(&t.columns))?;
                    for r in &t.rows {
                        writeln!(out, "  {}", line(r))?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// Scalar rendering for csv/table cells; arrays are space separated.
pub fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(plain).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}
