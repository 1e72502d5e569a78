//! Line-oriented verification reports.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub property: String,
    pub witness: String,
}

/// Outcome of a checker: empty means every checked instance passed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn fail(&mut self, property: impl Into<String>, witness: impl Into<String>) {
        self.violations.push(Violation { property: property.into(), witness: witness.into() });
    }

    pub fn merge(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    pub fn has(&self, property: &str) -> bool {
        self.violations.iter().any(|v| v.property == property)
    }

    /// `OK`, or one `FAIL <property> <witness>` line per violation.
    pub fn lines(&self) -> Vec<String> {
        if self.passed() {
            vec!["OK".to_string()]
        } else {
            self.violations.iter().map(|v| format!("FAIL {} {}", v.property, v.witness)).collect()
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lines().join("\n"))
    }
}
