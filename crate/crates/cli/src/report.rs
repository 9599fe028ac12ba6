use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.12e}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i32> for Cell {
    fn from(v: i32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    /// Decided in exact arithmetic.
    pub exact: bool,
}

impl Check {
    /// Toleranced check; NaN residuals fail.
    pub fn toleranced(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let status = if residual <= tolerance { Status::Pass } else { Status::Fail };
        Self { name: name.into(), status, residual: Some(residual), tolerance: Some(tolerance), exact: false }
    }

    /// Exact check counting mismatches; the residual is the mismatch count.
    pub fn exact(name: impl Into<String>, mismatches: usize) -> Self {
        let status = if mismatches == 0 { Status::Pass } else { Status::Fail };
        Self { name: name.into(), status, residual: Some(mismatches as f64), tolerance: Some(0.0), exact: true }
    }

    fn render(&self) -> String {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        let detail = match (self.exact, self.residual, self.tolerance) {
            (true, Some(r), _) if r == 0.0 => "exact".to_string(),
            (true, Some(r), _) => format!("exact, {r} mismatches"),
            (false, Some(r), Some(t)) => format!("residual {r:.2e}, tolerance {t:.0e}"),
            _ => String::new(),
        };
        format!("{} : {status} ({detail})", self.name)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub results: Table,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub version: String,
}

impl ReportEnvelope {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            parameters: BTreeMap::new(),
            results: Table::default(),
            checks: Vec::new(),
            notes: Vec::new(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.into(), value.to_string());
        self
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    /// Text for stdout; CSV carries only the table, checks go to `stderr`.
    pub fn render(&self, format: Format) -> (String, String) {
        match format {
            Format::Json => (serde_json::to_string_pretty(self).expect("serializable report") + "\n", String::new()),
            Format::Csv => {
                let mut out = self.results.columns.join(",") + "\n";
                for row in &self.results.rows {
                    let cells: Vec<String> = row.iter().map(|c| csv_escape(&c.render())).collect();
                    out += &(cells.join(",") + "\n");
                }
                (out, self.render_checks())
            }
            Format::Table => {
                let mut out = String::new();
                let _ = writeln!(out, "{}", self.command);
                for (k, v) in &self.parameters {
                    let _ = writeln!(out, "  {k} = {v}");
                }
                for note in &self.notes {
                    let _ = writeln!(out, "{note}");
                }
                if !self.results.columns.is_empty() && !self.results.rows.is_empty() {
                    out += &render_aligned(&self.results);
                }
                out += &self.render_checks();
                (out, String::new())
            }
        }
    }

    fn render_checks(&self) -> String {
        self.checks.iter().map(|c| c.render() + "\n").collect()
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_aligned(t: &Table) -> String {
    let rendered: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
    let widths: Vec<usize> = (0..t.columns.len())
        .map(|i| rendered.iter().map(|r| r[i].chars().count()).chain([t.columns[i].chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<&str>| -> String {
        let parts: Vec<String> =
            cells.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(t.columns.iter().map(String::as_str).collect());
    for r in &rendered {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fail_checks_carry_residual_and_tolerance() {
        let c = Check::toleranced("x", 1.0, 0.5);
        assert_eq!(c.status, Status::Fail);
        assert!(c.residual.is_some() && c.tolerance.is_some());
        assert_eq!(Check::toleranced("nan", f64::NAN, 1.0).status, Status::Fail);
        assert_eq!(Check::exact("e", 2).status, Status::Fail);
    }

    #[test]
    fn csv_quotes_commas() {
        let mut r = ReportEnvelope::new("t");
        r.results = Table::new(&["a", "b"]);
        r.results.push(vec!["x,y".into(), 3i64.into()]);
        assert_eq!(r.render(Format::Csv).0, "a,b\n\"x,y\",3\n");
    }
}
