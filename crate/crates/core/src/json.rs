//! JSON input formats for groups and subgroups.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{group_from_permutations, FiniteGroup, Subgroup, DEFAULT_CLOSURE_BOUND};

/// A group file: either a Cayley table or permutation generators, where a
/// generator lists the images of `0..perm_degree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupJson {
    Cayley {
        name: String,
        cayley: Vec<Vec<usize>>,
    },
    Permutations {
        name: String,
        perm_degree: usize,
        generators: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupJson {
    pub members: Vec<usize>,
}

impl GroupJson {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupJson::Cayley { name, cayley } => FiniteGroup::from_cayley(name.clone(), cayley),
            GroupJson::Permutations {
                name,
                perm_degree,
                generators,
            } => group_from_permutations(name.clone(), *perm_degree, generators, DEFAULT_CLOSURE_BOUND),
        }
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupJson::Cayley {
            name: g.name().to_string(),
            cayley: g.cayley_rows(),
        }
    }
}

pub fn parse_group(text: &str) -> Result<FiniteGroup> {
    let spec: GroupJson = serde_json::from_str(text).map_err(|e| Error::invalid(format!("group JSON: {e}")))?;
    spec.build()
}

pub fn parse_subgroup(g: &FiniteGroup, text: &str) -> Result<Subgroup> {
    let spec: SubgroupJson = serde_json::from_str(text).map_err(|e| Error::invalid(format!("subgroup JSON: {e}")))?;
    Subgroup::new(g, spec.members)
}
