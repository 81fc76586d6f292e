//! The built-in claim scripts.

use std::fmt;
use std::str::FromStr;

use crate::claim::Claim;
use crate::compile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Section {
    Theorems,
    S3,
    S4,
    S5,
    S6,
    Appendix,
    All,
}

impl Section {
    /// Every concrete section in ledger order.
    pub const PARTS: [Section; 6] = [
        Section::Theorems,
        Section::S3,
        Section::S4,
        Section::S5,
        Section::S6,
        Section::Appendix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Section::Theorems => "theorems",
            Section::S3 => "s3",
            Section::S4 => "s4",
            Section::S5 => "s5",
            Section::S6 => "s6",
            Section::Appendix => "appendix",
            Section::All => "all",
        }
    }

    /// Embedded scripts, each compiled on its own; empty for [`Section::All`].
    pub fn sources(self) -> &'static [&'static str] {
        match self {
            Section::Theorems => &[include_str!("scripts/theorems.ivl")],
            Section::S3 => &[include_str!("scripts/s3.ivl")],
            Section::S4 => &[include_str!("scripts/s4.ivl")],
            Section::S5 => &[include_str!("scripts/s5.ivl")],
            Section::S6 => &[include_str!("scripts/s6.ivl"), include_str!("scripts/s6_lambda4.ivl")],
            Section::Appendix => &[include_str!("scripts/appendix.ivl")],
            Section::All => &[],
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Section {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Section::PARTS
            .into_iter()
            .chain([Section::All])
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown section `{s}`"))
    }
}

/// Claims of one section, or of all sections concatenated in order.
pub fn build_ledger(section: Section) -> Vec<Claim> {
    if section == Section::All {
        return Section::PARTS.into_iter().flat_map(build_ledger).collect();
    }
    let mut out = Vec::new();
    for src in section.sources() {
        match compile(src) {
            Ok(claims) => out.extend(claims),
            Err(d) => panic!(
                "built-in script {section} does not compile:\n{}",
                crate::dsl::format_diagnostics(&d)
            ),
        }
    }
    out
}
