//! Exhaustive state spaces and the flaw-repair map.
//!
//! The chain's state space is the union of all proper and all singly-flawed
//! k-colorings. Enumeration scans all `k^n` colorings (budget-capped), keeps
//! the two admissible classes in lexicographic order — proper states first —
//! and indexes them. The repair map sends each singly-flawed state to a
//! proper one by recoloring its smallest flawed vertex with the smallest
//! available color; every proper state has at most `k*n` pre-images.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::coloring::{available_colors, classify, Coloring, ColoringClass};
use crate::graph::{Graph, Vertex};

/// Default cap on the number of colorings scanned by [`StateSpace::enumerate`].
pub const DEFAULT_ENUMERATION_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceError {
    NoColors,
    BudgetExceeded { required: u128, budget: usize },
    /// A singly-flawed state has no repairing color (impossible for `k >= max degree + 2`).
    NoRepairColor { state_index: usize, vertex: Vertex },
    NotSinglyFlawed,
}

impl fmt::Display for SpaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceError::NoColors => write!(f, "need at least one color"),
            SpaceError::BudgetExceeded { required, budget } => write!(
                f,
                "enumeration needs {required} colorings, over the budget of {budget}"
            ),
            SpaceError::NoRepairColor { state_index, vertex } => write!(
                f,
                "state {state_index}: no available color repairs flawed vertex {vertex}"
            ),
            SpaceError::NotSinglyFlawed => {
                write!(f, "repair applies only to singly-flawed colorings")
            }
        }
    }
}

impl core::error::Error for SpaceError {}

/// All proper and singly-flawed k-colorings of a graph, indexed.
///
/// Indices `0..num_proper` are the proper states in lexicographic order;
/// indices `num_proper..len` are the singly-flawed states, also
/// lexicographic. Index assignment is therefore deterministic across runs.
#[derive(Debug, Clone)]
pub struct StateSpace {
    k: usize,
    states: Vec<Coloring>,
    num_proper: usize,
    index: BTreeMap<Coloring, usize>,
}

impl StateSpace {
    /// Scans all `k^n` colorings and keeps the admissible ones.
    pub fn enumerate(g: &Graph, k: usize, budget: usize) -> Result<Self, SpaceError> {
        if k == 0 {
            return Err(SpaceError::NoColors);
        }
        let required = (k as u128)
            .checked_pow(g.n() as u32)
            .unwrap_or(u128::MAX);
        if required > budget as u128 {
            return Err(SpaceError::BudgetExceeded { required, budget });
        }
        let mut proper = Vec::new();
        let mut flawed = Vec::new();
        // Odometer over colorings in lexicographic order.
        let mut current = vec![1usize; g.n()];
        loop {
            let sigma = Coloring::new(current.clone());
            match classify(g, &sigma) {
                ColoringClass::Proper => proper.push(sigma),
                ColoringClass::SinglyFlawed { .. } => flawed.push(sigma),
                ColoringClass::Invalid => {}
            }
            let mut pos = g.n();
            loop {
                if pos == 0 {
                    break;
                }
                if current[pos - 1] < k {
                    current[pos - 1] += 1;
                    for slot in current.iter_mut().skip(pos) {
                        *slot = 1;
                    }
                    break;
                }
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
        }
        let num_proper = proper.len();
        let mut states = proper;
        states.append(&mut flawed);
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(StateSpace {
            k,
            states,
            num_proper,
            index,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Total number of states.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn num_proper(&self) -> usize {
        self.num_proper
    }

    pub fn num_singly_flawed(&self) -> usize {
        self.states.len() - self.num_proper
    }

    pub fn state(&self, i: usize) -> &Coloring {
        &self.states[i]
    }

    pub fn states(&self) -> &[Coloring] {
        &self.states
    }

    /// The proper states (indices `0..num_proper`).
    pub fn proper_states(&self) -> &[Coloring] {
        &self.states[..self.num_proper]
    }

    pub fn index_of(&self, sigma: &Coloring) -> Option<usize> {
        self.index.get(sigma).copied()
    }

    pub fn is_proper_index(&self, i: usize) -> bool {
        i < self.num_proper
    }
}

/// Repairs a singly-flawed coloring into a proper one.
///
/// Recolors the smallest flawed vertex with its smallest available color.
/// Since every monochromatic edge touches that vertex, the result is proper.
pub fn repair_flawed(g: &Graph, sigma: &Coloring, k: usize) -> Result<Coloring, SpaceError> {
    let ColoringClass::SinglyFlawed { flawed } = classify(g, sigma) else {
        return Err(SpaceError::NotSinglyFlawed);
    };
    let v = *flawed.iter().next().expect("flawed set is nonempty");
    let avail = available_colors(g, sigma, v, k);
    let c = *avail.first().ok_or(SpaceError::NoRepairColor {
        state_index: 0,
        vertex: v,
    })?;
    Ok(sigma.recolored(v, c))
}

/// Map from singly-flawed states onto proper states, with pre-image counts.
#[derive(Debug, Clone)]
pub struct FlawRepairMap {
    num_proper: usize,
    /// `target[i]` = proper state index repairing flawed state `num_proper + i`.
    target: Vec<usize>,
    /// Per proper state, the sorted flawed state indices mapping onto it.
    preimages: Vec<Vec<usize>>,
}

impl FlawRepairMap {
    pub fn build(g: &Graph, space: &StateSpace) -> Result<Self, SpaceError> {
        let mut target = Vec::with_capacity(space.num_singly_flawed());
        let mut preimages = vec![Vec::new(); space.num_proper()];
        for i in space.num_proper()..space.len() {
            let repaired = repair_flawed(g, space.state(i), space.k()).map_err(|e| match e {
                SpaceError::NoRepairColor { vertex, .. } => SpaceError::NoRepairColor {
                    state_index: i,
                    vertex,
                },
                other => other,
            })?;
            let t = space
                .index_of(&repaired)
                .expect("repaired coloring is enumerated");
            debug_assert!(space.is_proper_index(t));
            target.push(t);
            preimages[t].push(i);
        }
        Ok(FlawRepairMap {
            num_proper: space.num_proper(),
            target,
            preimages,
        })
    }

    /// Proper state index repairing the flawed state at `flawed_index`.
    pub fn repair_target(&self, flawed_index: usize) -> usize {
        self.target[flawed_index - self.num_proper]
    }

    /// Flawed state indices repaired onto the proper state at `proper_index`.
    pub fn preimages(&self, proper_index: usize) -> &[usize] {
        &self.preimages[proper_index]
    }

    pub fn max_multiplicity(&self) -> usize {
        self.preimages.iter().map(Vec::len).max().unwrap_or(0)
    }
}
