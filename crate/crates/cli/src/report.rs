//! One report structure per command, rendered either as markdown or as
//! canonical JSON so the two formats cannot drift apart.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Markdown,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub caption: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(caption: impl Into<String>, headers: &[&str]) -> Self {
        Table { caption: caption.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(mut self, cells: Vec<String>) -> Self {
        self.rows.push(cells);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub title: String,
    pub passed: bool,
    pub notes: Vec<String>,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
    /// Machine-readable payload (tuples, filtrations, ...).
    pub data: serde_json::Value,
}

impl Report {
    pub fn new(command: &str, title: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            title: title.into(),
            passed: true,
            notes: Vec::new(),
            tables: Vec::new(),
            checks: Vec::new(),
            data: serde_json::Value::Null,
        }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn table(mut self, table: Table) -> Self {
        self.tables.push(table);
        self
    }

    pub fn check(mut self, check: Check) -> Self {
        self.passed &= check.passed;
        self.checks.push(check);
        self
    }

    pub fn data(mut self, data: serde_json::Value) -> Self {
        self.data = data;
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => conifold::canonical_json(self).expect("reports serialize"),
            Format::Markdown => self.to_markdown(),
        }
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("# {}\n", self.title);
        for note in &self.notes {
            out.push_str(&format!("\n{note}\n"));
        }
        for t in &self.tables {
            out.push_str(&format!("\n**{}**\n\n", t.caption));
            out.push_str(&format!("| {} |\n", t.headers.join(" | ")));
            out.push_str(&format!("|{}\n", "---|".repeat(t.headers.len())));
            for r in &t.rows {
                let cells: Vec<String> = r.iter().map(|c| c.replace('|', "\\|")).collect();
                out.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
        }
        if !self.checks.is_empty() {
            out.push_str("\n## Checks\n\n");
            for c in &self.checks {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                if c.detail.is_empty() {
                    out.push_str(&format!("- [{mark}] {}\n", c.name));
                } else {
                    out.push_str(&format!("- [{mark}] {}: {}\n", c.name, c.detail));
                }
            }
        }
        out.push_str(&format!("\nResult: {}\n", if self.passed { "all checks passed" } else { "FAILED" }));
        out
    }
}
