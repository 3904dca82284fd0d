//! Structured text reports and their order-independent merge.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::CliError;

pub const HEADER: &str = "# symdyn report v1";

/// Resolved parameters of one invocation, in emission order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub command: String,
    pub entries: Vec<(String, String)>,
}

impl ExperimentConfig {
    pub fn new(command: &str) -> Self {
        ExperimentConfig { command: command.to_string(), entries: Vec::new() }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    /// Hex SHA-256 of the command and the config lines.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.command.as_bytes());
        h.update(b"\n");
        for (k, v) in &self.entries {
            h.update(format!("{k}={v}\n").as_bytes());
        }
        hex::encode(h.finalize())
    }
}

/// Hex SHA-256 of raw file contents, used to pin inputs in the config.
pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.to_string(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub config: ExperimentConfig,
    pub result: Vec<(String, String)>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(config: ExperimentConfig) -> Self {
        Report { config, result: Vec::new(), tables: Vec::new() }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.result.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.result.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn hash(&self) -> String {
        self.config.hash()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        let _ = writeln!(out, "command={}", self.config.command);
        let _ = writeln!(out, "config_hash={}", self.hash());
        out.push_str("[config]\n");
        for (k, v) in &self.config.entries {
            let _ = writeln!(out, "{k}={v}");
        }
        out.push_str("[result]\n");
        for (k, v) in &self.result {
            let _ = writeln!(out, "{k}={v}");
        }
        for t in &self.tables {
            let _ = writeln!(out, "[table {}]", t.name);
            let _ = writeln!(out, "{}", t.columns.join(","));
            for row in &t.rows {
                let _ = writeln!(out, "{}", row.join(","));
            }
        }
        out.push_str("[end]\n");
        out
    }

    pub fn parse(text: &str) -> Result<Report, CliError> {
        let bad = |msg: String| CliError::Input(format!("malformed report: {msg}"));
        let mut lines = text.lines();
        if lines.next() != Some(HEADER) {
            return Err(bad("missing version header".into()));
        }
        let command = lines
            .next()
            .and_then(|l| l.strip_prefix("command="))
            .ok_or_else(|| bad("missing command".into()))?;
        let stated_hash = lines
            .next()
            .and_then(|l| l.strip_prefix("config_hash="))
            .ok_or_else(|| bad("missing config hash".into()))?
            .to_string();

        enum Section {
            Config,
            Result,
            Table,
        }
        let mut report = Report::new(ExperimentConfig::new(command));
        let mut section = None;
        let mut ended = false;
        for line in lines {
            if ended {
                return Err(bad("content after [end]".into()));
            }
            if line == "[config]" {
                section = Some(Section::Config);
            } else if line == "[result]" {
                section = Some(Section::Result);
            } else if line == "[end]" {
                ended = true;
            } else if let Some(name) = line.strip_prefix("[table ").and_then(|l| l.strip_suffix(']')) {
                report.tables.push(Table { name: name.to_string(), columns: Vec::new(), rows: Vec::new() });
                section = Some(Section::Table);
            } else {
                match section {
                    Some(Section::Config) | Some(Section::Result) => {
                        let (k, v) = line.split_once('=').ok_or_else(|| bad(format!("expected key=value, got `{line}`")))?;
                        let target = if matches!(section, Some(Section::Config)) {
                            &mut report.config.entries
                        } else {
                            &mut report.result
                        };
                        target.push((k.to_string(), v.to_string()));
                    }
                    Some(Section::Table) => {
                        let t = report.tables.last_mut().unwrap();
                        let cells: Vec<String> = line.split(',').map(str::to_string).collect();
                        if t.columns.is_empty() {
                            t.columns = cells;
                        } else if cells.len() != t.columns.len() {
                            return Err(bad(format!("row width {} in table {}", cells.len(), t.name)));
                        } else {
                            t.rows.push(cells);
                        }
                    }
                    None => return Err(bad(format!("line outside any section: `{line}`"))),
                }
            }
        }
        if !ended {
            return Err(bad("missing [end]".into()));
        }
        if report.hash() != stated_hash {
            return Err(bad("config hash does not match config section".into()));
        }
        Ok(report)
    }
}

/// Merged view of several reports, deduplicated by config hash and
/// ordered by `(command, hash)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Merged {
    pub reports: Vec<Report>,
}

pub fn merge(reports: Vec<Report>) -> Result<Merged, CliError> {
    let mut by_key: BTreeMap<(String, String), Report> = BTreeMap::new();
    for r in reports {
        let key = (r.config.command.clone(), r.hash());
        if let Some(prev) = by_key.get(&key) {
            if prev != &r {
                return Err(CliError::Input(format!(
                    "conflicting reports for config hash {}: same config, different payload",
                    key.1
                )));
            }
            continue;
        }
        by_key.insert(key, r);
    }
    Ok(Merged { reports: by_key.into_values().collect() })
}

impl Merged {
    /// The member reports back to back.
    pub fn bundle(&self) -> String {
        self.reports.iter().map(Report::render).collect()
    }

    /// Long-format CSV of every config and result entry.
    pub fn csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Input(format!("csv: {e}"));
        w.write_record(["config_hash", "command", "section", "key", "value"]).map_err(io)?;
        for r in &self.reports {
            let hash = r.hash();
            for (section, entries) in [("config", &r.config.entries), ("result", &r.result)] {
                for (k, v) in entries {
                    w.write_record([hash.as_str(), r.config.command.as_str(), section, k, v]).map_err(io)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::Input(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Every table as a whitespace-separated block headed by a comment line.
    pub fn plot_data(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            for t in &r.tables {
                let _ = writeln!(out, "# {} {} {}", r.hash(), r.config.command, t.name);
                let _ = writeln!(out, "{}", t.columns.join(" "));
                for row in &t.rows {
                    let _ = writeln!(out, "{}", row.join(" "));
                }
                out.push_str("\n\n");
            }
        }
        out
    }
}
