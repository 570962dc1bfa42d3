//! The expected-verdict table shared by `verify` and the test suites.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Result};
use serde::Deserialize;

use crate::LawArg;

/// Contents of `expectations.toml`, compiled in.
pub const SHIPPED: &str = include_str!("../expectations.toml");

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rule {
    pub law: LawArg,
    /// Highest level at which the law holds; `None` means every level.
    pub holds_through: Option<usize>,
}

impl Rule {
    pub fn expects_hold(&self, level: usize) -> bool {
        self.holds_through.is_none_or(|top| level <= top)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    #[serde(rename = "rule")]
    pub rules: Vec<Rule>,
}

impl Expectations {
    /// Parses a table; each law may appear at most once.
    pub fn parse(src: &str) -> Result<Self> {
        let table: Expectations = toml::from_str(src)?;
        for (i, r) in table.rules.iter().enumerate() {
            if table.rules[..i].iter().any(|s| s.law == r.law) {
                bail!("duplicate rule for {}", r.law);
            }
        }
        Ok(table)
    }

    pub fn shipped() -> Self {
        Self::parse(SHIPPED).expect("shipped expectations are well formed")
    }

    pub fn rule(&self, law: LawArg) -> Result<&Rule> {
        self.rules.iter().find(|r| r.law == law).ok_or_else(|| anyhow!("no expectation recorded for {law}"))
    }

    /// Whether `law` is expected to hold at `level` (any sign pattern).
    pub fn expects_hold(&self, law: LawArg, level: usize) -> Result<bool> {
        Ok(self.rule(law)?.expects_hold(level))
    }

    /// Markdown rendering for levels `0..=max_level`, as in the README.
    pub fn markdown(&self, max_level: usize) -> String {
        let mut out = String::from("| law |");
        for n in 0..=max_level {
            let _ = write!(out, " n={n} |");
        }
        out.push_str("\n|---|");
        out.push_str(&"---|".repeat(max_level + 1));
        out.push('\n');
        for r in &self.rules {
            let _ = write!(out, "| {} |", r.law);
            for n in 0..=max_level {
                let cell = if n < r.law.law().min_level() {
                    "n/a"
                } else if r.expects_hold(n) {
                    "holds"
                } else {
                    "fails"
                };
                let _ = write!(out, " {cell} |");
            }
            out.push('\n');
        }
        out
    }
}
