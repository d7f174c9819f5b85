use std::fmt::{self, Display, Write as _};

use qospath::oracles::{EnumerationBudget, OracleError};

/// One output record: ordered `key=value` lines.
#[derive(Debug, Default)]
pub struct Record {
    fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(status: &str) -> Self {
        let mut r = Self::default();
        r.push("status", status);
        r
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Display) -> &mut Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    /// Space-separated list value; an empty list prints as an empty value.
    pub fn list<T: Display>(&mut self, key: &str, items: impl IntoIterator<Item = T>) -> &mut Self {
        let mut s = String::new();
        for (i, x) in items.into_iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            write!(s, "{x}").unwrap();
        }
        self.push(key, s)
    }

    pub fn verified(&mut self, check: Verification) -> &mut Self {
        match check {
            Verification::Checked(ok) => self.push("verified", ok),
            Verification::Skipped(why) => self.push("verified", "skipped").push("verify_note", why),
        }
    }
}

impl Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.fields {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

pub enum Verification {
    Checked(bool),
    Skipped(String),
}

impl From<Result<bool, OracleError>> for Verification {
    fn from(r: Result<bool, OracleError>) -> Self {
        match r {
            Ok(ok) => Verification::Checked(ok),
            Err(e) => Verification::Skipped(e.to_string()),
        }
    }
}

/// Oracle budget, with `QOSPATH_ORACLE_CAP` replacing the vertex (and item)
/// limit; the subset limit follows as `2^cap`.
pub fn oracle_budget() -> Result<EnumerationBudget, String> {
    let mut budget = EnumerationBudget::default();
    if let Ok(raw) = std::env::var("QOSPATH_ORACLE_CAP") {
        let cap: usize = raw
            .trim()
            .parse()
            .map_err(|_| format!("QOSPATH_ORACLE_CAP must be a non-negative integer, got {raw:?}"))?;
        budget.max_vertices = cap;
        budget.max_subsets = 1u64.checked_shl(cap as u32).filter(|_| cap < 64).unwrap_or(u64::MAX);
    }
    Ok(budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_key_value_lines() {
        let mut r = Record::new("found");
        r.list("path", [0, 2, 1])
            .list("edges", Vec::<u32>::new())
            .push("cost", 1.5);
        r.verified(Verification::Skipped("too big".into()));
        assert_eq!(
            r.to_string(),
            "status=found\npath=0 2 1\nedges=\ncost=1.5\nverified=skipped\nverify_note=too big\n"
        );
    }
}
