//! Line-oriented corpus files: one JSON object per group.
//!
//! ```text
//! # comment
//! {"name": "C3", "degree": 3, "generators": ["(1,2,3)"], "tags": []}
//! ```

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{make_group_capped, Group};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<String>,
    #[serde(default)]
    pub tags: Vec<String>,
}

impl GroupSpec {
    pub fn from_group(group: &Group, tags: &[String]) -> Self {
        Self {
            name: group.name().to_string(),
            degree: group.degree(),
            generators: group
                .generators()
                .iter()
                .map(|g| g.to_cycle_string())
                .collect(),
            tags: tags.to_vec(),
        }
    }

    pub fn permutations(&self) -> Result<Vec<Permutation>> {
        self.generators
            .iter()
            .map(|c| Permutation::parse_cycles(c, self.degree))
            .collect()
    }

    pub fn to_group(&self, order_cap: usize) -> Result<Group> {
        make_group_capped(self.degree, &self.permutations()?, &self.name, order_cap)
    }
}

/// Parses a corpus; blank lines and lines starting with `#` are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<GroupSpec>> {
    let mut specs = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let spec: GroupSpec = serde_json::from_str(raw).map_err(|e| Error::SyntaxError {
            line,
            column: e.column(),
            reason: e.to_string(),
        })?;
        if spec.name.is_empty() {
            return Err(Error::SyntaxError {
                line,
                column: 1,
                reason: "group name is empty".into(),
            });
        }
        if spec.degree == 0 {
            return Err(Error::SyntaxError {
                line,
                column: 1,
                reason: "degree must be positive".into(),
            });
        }
        for cycle in &spec.generators {
            Permutation::parse_cycles(cycle, spec.degree).map_err(|e| Error::BadCycle {
                line,
                cycle: cycle.clone(),
                reason: match e {
                    Error::InvalidParameter(r) => r,
                    other => other.to_string(),
                },
            })?;
        }
        if !seen.insert(spec.name.clone()) {
            return Err(Error::DuplicateName {
                line,
                name: spec.name,
            });
        }
        specs.push(spec);
    }
    Ok(specs)
}

pub fn serialize_corpus(specs: &[GroupSpec]) -> String {
    let mut out = String::new();
    for spec in specs {
        out.push_str(&serde_json::to_string(spec).expect("specs serialize"));
        out.push('\n');
    }
    out
}
