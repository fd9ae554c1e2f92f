//! Deduplicated state families closed under a group action.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::exact::ExactState;
use crate::states::{CanonicalKey, PureState};

/// How a member of an [`OrbitFamily`] was reached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Seed,
    /// Image of the seed under the displacement with this index tuple.
    Displacement(Vec<(usize, usize)>),
    /// Image of member `parent` under the named gate.
    Gate {
        parent: usize,
        gate: String,
    },
    /// Taken from position `index` of a caller-supplied list.
    Input {
        index: usize,
    },
}

#[derive(Debug, Clone)]
pub struct OrbitFamily {
    pub seed: PureState,
    pub states: Vec<PureState>,
    /// Exact representatives, parallel to `states`, when the orbit was
    /// computed in Gaussian-rational arithmetic.
    pub exact: Option<Vec<ExactState>>,
    pub provenance: Vec<Provenance>,
    /// Labels of the group generators (gate names, or the WH group label).
    pub generators: Vec<String>,
}

impl OrbitFamily {
    pub fn size(&self) -> usize {
        self.states.len()
    }

    pub fn dim(&self) -> usize {
        self.seed.dim()
    }

    pub fn keys(&self) -> Vec<CanonicalKey> {
        self.states.iter().map(PureState::canonical_key).collect()
    }

    pub fn key_set(&self) -> HashSet<CanonicalKey> {
        self.states.iter().map(PureState::canonical_key).collect()
    }

    /// Membership up to global phase, by canonical key.
    pub fn contains(&self, psi: &PureState) -> bool {
        let k = psi.canonical_key();
        self.states.iter().any(|s| s.canonical_key() == k)
    }

    /// Smallest canonical key among the members; used to order orbits.
    pub fn min_key(&self) -> Option<CanonicalKey> {
        self.states.iter().map(PureState::canonical_key).min()
    }

    /// Index tuples of displacement-generated members, in member order.
    pub fn index_tuples(&self) -> Vec<Vec<(usize, usize)>> {
        self.provenance
            .iter()
            .filter_map(|p| match p {
                Provenance::Displacement(t) => Some(t.clone()),
                _ => None,
            })
            .collect()
    }
}
