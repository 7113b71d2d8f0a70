use std::io::Write;

use serde::Serialize;

use crate::args::Format;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Effective parameters of a run, defaults filled in. Fields that do not
/// apply to the command are null.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub model: String,
    #[serde(rename = "T")]
    pub t_height: Option<f64>,
    pub x: Option<f64>,
    pub x_grid: Option<Vec<f64>>,
    #[serde(rename = "Y")]
    pub y: Option<f64>,
    pub t: Option<f64>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub step: Option<f64>,
    pub top_k: Option<u64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    #[serde(rename = "X")]
    pub resonator_x: Option<f64>,
    pub n_cutoff: Option<u64>,
    pub format: &'static str,
    pub out: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Real)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Shortest round-trip decimal, the same digits JSON output uses.
pub fn format_real(v: f64) -> String {
    if v.is_finite() {
        serde_json::to_string(&v).expect("finite float serializes")
    } else {
        format!("{v}")
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Real(v) => format_real(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Self { name, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// A command's result in both encodings.
pub struct Output {
    /// Report serialized as one JSON object, fields in declaration order.
    pub report: String,
    pub tables: Vec<Table>,
}

pub fn render(config: &RunConfig, output: &Output, format: Format) -> std::io::Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => {
            writeln!(buf, "# olx {VERSION} {}", serde_json::to_string(config)?)?;
            for (i, table) in output.tables.iter().enumerate() {
                if i > 0 {
                    writeln!(buf)?;
                }
                writeln!(buf, "# table: {}", table.name)?;
                let mut w = csv::Writer::from_writer(&mut buf);
                w.write_record(&table.columns)?;
                for row in &table.rows {
                    w.write_record(row.iter().map(Cell::render))?;
                }
                w.flush()?;
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Header<'a> {
                olx: &'a str,
                config: &'a RunConfig,
            }
            let header = Header { olx: VERSION, config };
            writeln!(buf, "{}", serde_json::to_string(&header)?)?;
            writeln!(buf, "{}", output.report)?;
        }
    }
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 6.02e23, -2.5, 1e6] {
            assert_eq!(format_real(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_real(0.1), "0.1");
    }

    #[test]
    fn csv_layout() {
        let mut a = Table::new("a", &["x", "label"]);
        a.push(vec![Cell::Real(0.5), Cell::from("p,q")]);
        let mut b = Table::new("b", &["n"]);
        b.push(vec![Cell::Int(3)]);
        let out = Output { report: String::new(), tables: vec![a, b] };
        let cfg = RunConfig { command: "test", format: "csv", ..Default::default() };
        let text = String::from_utf8(render(&cfg, &out, Format::Csv).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# olx ") && lines[0].contains("\"command\":\"test\""));
        assert_eq!(&lines[1..], ["# table: a", "x,label", "0.5,\"p,q\"", "", "# table: b", "n", "3"]);
    }
}
