//! Check results and their text, CSV and JSON renderings.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use super::config::{Format, SpaceConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    /// A boolean check; `measured` is 1 for true.
    #[serde(rename = "==")]
    Holds,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Holds => "==",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl Check {
    pub fn at_most(name: &str, measured: f64, tolerance: f64) -> Self {
        Self::new(
            name,
            measured,
            Relation::AtMost,
            tolerance,
            measured <= tolerance,
        )
    }

    pub fn at_least(name: &str, measured: f64, tolerance: f64) -> Self {
        Self::new(
            name,
            measured,
            Relation::AtLeast,
            tolerance,
            measured >= tolerance,
        )
    }

    pub fn holds(name: &str, ok: bool) -> Self {
        Self::new(name, if ok { 1.0 } else { 0.0 }, Relation::Holds, 1.0, ok)
    }

    fn new(name: &str, measured: f64, relation: Relation, tolerance: f64, pass: bool) -> Self {
        Self {
            name: name.to_string(),
            measured,
            relation,
            tolerance,
            // NaN never passes
            pass: pass && !measured.is_nan(),
            wall_time_s: None,
        }
    }
}

/// A rectangular block of output data.
#[derive(Debug, Clone, Serialize)]
pub struct DataTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl DataTable {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub program: String,
    pub version: String,
    pub command: String,
    pub config: SpaceConfig,
    /// Named facts that are not pass/fail, such as a symmetry verdict.
    pub info: Vec<(String, String)>,
    pub checks: Vec<Check>,
    pub data: Vec<DataTable>,
    pub passed: bool,
    #[serde(skip)]
    timings: bool,
}

impl Report {
    pub fn new(command: &str, config: &SpaceConfig) -> Self {
        Self {
            program: "htype".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config: config.clone(),
            info: Vec::new(),
            checks: Vec::new(),
            data: Vec::new(),
            passed: true,
            timings: config.timings,
        }
    }

    pub fn info(&mut self, key: &str, value: impl ToString) {
        self.info.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, check: Check) {
        self.passed &= check.pass;
        self.checks.push(check);
    }

    /// Runs `f`, records its checks and, with `--timings`, the time it took.
    pub fn timed<E>(&mut self, f: impl FnOnce() -> Result<Vec<Check>, E>) -> Result<(), E> {
        let start = Instant::now();
        let checks = f()?;
        let elapsed = start.elapsed().as_secs_f64();
        for mut c in checks {
            if self.timings {
                c.wall_time_s = Some(elapsed);
            }
            self.push(c);
        }
        Ok(())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }

    fn header_lines(&self) -> Vec<String> {
        let c = &self.config;
        let t = serde_json::to_string(&c.tolerances).expect("serializes");
        let g = serde_json::to_string(&c.grid).expect("serializes");
        vec![
            format!("{} {} {}", self.program, self.version, self.command),
            format!("config: k={} mult={} seed={}", c.k, c.mult, c.seed),
            format!("tolerances: {t}"),
            format!("grid: {g}"),
        ]
    }

    fn to_text(&self) -> String {
        let mut out = String::new();
        for line in self.header_lines() {
            writeln!(out, "# {line}").unwrap();
        }
        for (k, v) in &self.info {
            writeln!(out, "{k}: {v}").unwrap();
        }
        if !self.checks.is_empty() {
            let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &self.checks {
                write!(
                    out,
                    "{}  {:<width$}  {:>12.4e} {} {:.1e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.measured,
                    c.relation.symbol(),
                    c.tolerance,
                )
                .unwrap();
                if let Some(t) = c.wall_time_s {
                    write!(out, "  ({t:.3} s)").unwrap();
                }
                out.push('\n');
            }
        }
        for table in &self.data {
            writeln!(out, "\n[{}]", table.name).unwrap();
            let cells: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|r| r.iter().map(|v| format_number(*v)).collect())
                .collect();
            let widths: Vec<usize> = (0..table.columns.len())
                .map(|j| {
                    cells
                        .iter()
                        .map(|r| r[j].len())
                        .chain([table.columns[j].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cols: Vec<&str>| {
                cols.iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(
                out,
                "{}",
                line(table.columns.iter().map(|s| s.as_str()).collect())
            )
            .unwrap();
            for r in &cells {
                writeln!(out, "{}", line(r.iter().map(|s| s.as_str()).collect())).unwrap();
            }
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        writeln!(
            out,
            "\nresult: {} ({} of {} checks passed)",
            if self.passed { "pass" } else { "fail" },
            self.checks.len() - failed,
            self.checks.len()
        )
        .unwrap();
        out
    }

    /// The data tables (or the checks when there is no data), each starting
    /// with its header row. Tables after the first are preceded by a blank line
    /// and a `#` line naming them; the run header and summary follow as `#` lines.
    fn to_csv(&self) -> String {
        let mut out = String::new();
        if self.data.is_empty() {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["name", "measured", "relation", "tolerance", "pass"])
                .unwrap();
            for c in &self.checks {
                w.write_record([
                    c.name.clone(),
                    format_number(c.measured),
                    c.relation.symbol().to_string(),
                    format_number(c.tolerance),
                    c.pass.to_string(),
                ])
                .unwrap();
            }
            out.push_str(&into_string(w));
        } else {
            for (i, table) in self.data.iter().enumerate() {
                if i > 0 {
                    writeln!(out, "\n# {}", table.name).unwrap();
                }
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&table.columns).unwrap();
                for r in &table.rows {
                    w.write_record(r.iter().map(|v| format_number(*v))).unwrap();
                }
                out.push_str(&into_string(w));
            }
        }
        for line in self.header_lines() {
            writeln!(out, "# {line}").unwrap();
        }
        for (k, v) in &self.info {
            writeln!(out, "# {k}: {v}").unwrap();
        }
        if !self.data.is_empty() {
            for c in &self.checks {
                writeln!(
                    out,
                    "# {} {} {:e} {} {:e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.measured,
                    c.relation.symbol(),
                    c.tolerance
                )
                .unwrap();
            }
        }
        writeln!(
            out,
            "# result: {}",
            if self.passed { "pass" } else { "fail" }
        )
        .unwrap();
        out
    }
}

fn into_string(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

/// Shortest round-trip decimal; independent of locale.
fn format_number(v: f64) -> String {
    if v == 0.0 || (1e-4..1e15).contains(&v.abs()) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}
