//! Structured text reports with a stable field order.

use std::fmt::{self, Display, Write as _};

/// One row of the verification table.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub property: String,
    pub subject: String,
    pub passed: bool,
    /// Deterministic properties; a failure is an invariant violation.
    /// Probabilistic rows only report an empirical frequency.
    pub invariant: bool,
    pub detail: String,
}

impl Check {
    pub fn invariant(
        property: &str,
        subject: &str,
        passed: bool,
        detail: impl Into<String>,
    ) -> Self {
        Self {
            property: property.into(),
            subject: subject.into(),
            passed,
            invariant: true,
            detail: detail.into(),
        }
    }

    pub fn empirical(
        property: &str,
        subject: &str,
        passed: bool,
        detail: impl Into<String>,
    ) -> Self {
        Self {
            invariant: false,
            ..Self::invariant(property, subject, passed, detail)
        }
    }
}

#[derive(Clone, Debug, Default)]
struct Section {
    name: &'static str,
    fields: Vec<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct Report {
    command: String,
    sections: Vec<Section>,
    checks: Vec<Check>,
    wall_time: Option<f64>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            sections: Vec::new(),
            checks: Vec::new(),
            wall_time: None,
        }
    }

    /// Appends `key: value` to `section`, creating the section on first use.
    pub fn field(&mut self, section: &'static str, key: &str, value: impl Display) -> &mut Self {
        let idx = match self.sections.iter().position(|s| s.name == section) {
            Some(i) => i,
            None => {
                self.sections.push(Section {
                    name: section,
                    fields: Vec::new(),
                });
                self.sections.len() - 1
            }
        };
        self.sections[idx]
            .fields
            .push((key.into(), value.to_string()));
        self
    }

    pub fn check(&mut self, check: Check) -> &mut Self {
        self.checks.push(check);
        self
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    /// Value of the first field named `key` in `section`.
    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections
            .iter()
            .filter(|s| s.name == section)
            .flat_map(|s| &s.fields)
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn invariant_failures(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.invariant && !c.passed)
            .count()
    }

    pub fn set_wall_time(&mut self, seconds: f64) {
        self.wall_time = Some(seconds);
    }
}

impl Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command: {}", self.command)?;
        writeln!(f, "version: {}", env!("CARGO_PKG_VERSION"))?;
        for s in &self.sections {
            writeln!(f, "\n[{}]", s.name)?;
            for (k, v) in &s.fields {
                writeln!(f, "{k}: {v}")?;
            }
        }
        if !self.checks.is_empty() {
            writeln!(f, "\n[verification]")?;
            f.write_str(&table(&self.checks))?;
            let failed = self.checks.iter().filter(|c| !c.passed).count();
            writeln!(f, "summary: {} checks, {failed} failed", self.checks.len())?;
        }
        if let Some(t) = self.wall_time {
            writeln!(f, "\nwall_time_s: {t:.3}")?;
        }
        Ok(())
    }
}

fn table(checks: &[Check]) -> String {
    let header = ["property", "subject", "kind", "result", "detail"];
    let rows: Vec<[String; 5]> = checks
        .iter()
        .map(|c| {
            [
                c.property.clone(),
                c.subject.clone(),
                if c.invariant {
                    "invariant"
                } else {
                    "empirical"
                }
                .into(),
                if c.passed { "pass" } else { "FAIL" }.into(),
                c.detail.clone(),
            ]
        })
        .collect();
    let mut width = header.map(str::len);
    for r in &rows {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: [&str; 5]| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(width).enumerate() {
            if i == 4 {
                s.push_str(cell);
            } else {
                let _ = write!(s, "{cell:<w$}  ");
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(header);
    for r in &rows {
        line([&r[0], &r[1], &r[2], &r[3], &r[4]]);
    }
    out
}
