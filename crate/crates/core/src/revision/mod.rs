//! Belief revision of the annotation function.
//!
//! Adding an element to the analytical model can make the facts and strict
//! rules active in some positive-probability world classically inconsistent.
//! The operator here repairs that without touching the elements themselves:
//! for every such world it picks a maximal consistent subset of the active
//! slice and narrows the annotations of everything left out so they no longer
//! cover that world.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::am;
use crate::lang::{AmElement, ElementId, Formula, LangError, World};
use crate::pp::{PPreDelpProgram, PpError};

pub mod mutants;
pub mod postulates;
pub mod suite;

pub use mutants::Operator;

/// Largest active slice the candidate enumeration will take on.
pub const MAX_SLICE: usize = 20;

/// Errors raised while revising a program.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum RevisionError {
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error(transparent)]
    Pp(#[from] PpError),
    #[error("active slice has {got} elements, candidate enumeration caps at {max}")]
    SliceTooLarge { max: usize, got: usize },
}

/// A new analytical element paired with the annotation it should carry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpistemicInput {
    pub element: AmElement,
    pub annotation: Formula,
}

impl EpistemicInput {
    pub fn new(element: AmElement, annotation: Formula) -> Self {
        EpistemicInput { element, annotation }
    }

    pub fn id(&self) -> &ElementId {
        self.element.id()
    }
}

/// The program expanded with the input: the element is added, its annotation
/// recorded, and nothing else changes.
pub fn expand(
    program: &PPreDelpProgram,
    input: &EpistemicInput,
) -> Result<PPreDelpProgram, RevisionError> {
    let am = if program.am().get(input.element.id()) == Some(&input.element) {
        program.am().clone()
    } else {
        program.am().with_element(input.element.clone())?
    };
    let mut af = program.af().clone();
    af.set(input.element.id().clone(), input.annotation.clone());
    Ok(PPreDelpProgram::new(program.em().clone(), am, af)?)
}

/// The maximal consistent subsets of the facts and strict rules active in `w`.
pub fn cand_pgm(
    program: &PPreDelpProgram,
    w: World,
) -> Result<Vec<BTreeSet<ElementId>>, RevisionError> {
    maximal_consistent_subsets(&program.strict_slice(w))
}

/// All maximal consistent subsets of a set of facts and strict rules.
///
/// Consistency is closed downward, so a consistent set is maximal exactly
/// when no single-element extension stays consistent.
pub fn maximal_consistent_subsets(
    slice: &[&AmElement],
) -> Result<Vec<BTreeSet<ElementId>>, RevisionError> {
    if am::classically_consistent(slice) {
        return Ok(vec![slice.iter().map(|e| e.id().clone()).collect()]);
    }
    let n = slice.len();
    if n > MAX_SLICE {
        return Err(RevisionError::SliceTooLarge { max: MAX_SLICE, got: n });
    }
    let members = |mask: usize| {
        slice
            .iter()
            .enumerate()
            .filter(move |(i, _)| mask & (1 << i) != 0)
            .map(|(_, e)| *e)
    };
    let mut consistent = vec![false; 1 << n];
    for mask in 0..(1usize << n) {
        let shrunk_stays = (0..n)
            .all(|j| mask & (1 << j) == 0 || consistent[mask & !(1 << j)]);
        consistent[mask] =
            shrunk_stays && am::classically_consistent(&members(mask).collect::<Vec<_>>());
    }
    let mut out = Vec::new();
    for mask in 0..(1usize << n) {
        if !consistent[mask] {
            continue;
        }
        let maximal = (0..n).all(|j| mask & (1 << j) != 0 || !consistent[mask | (1 << j)]);
        if maximal {
            out.push(members(mask).map(|e| e.id().clone()).collect());
        }
    }
    out.sort();
    Ok(out)
}

/// The selection the default operator uses: keep the input whenever some
/// candidate retains it, then prefer larger candidates, then the smallest
/// id sequence.
pub fn default_selection(
    candidates: &[BTreeSet<ElementId>],
    input: &ElementId,
) -> BTreeSet<ElementId> {
    candidates
        .iter()
        .min_by_key(|c| (!c.contains(input), std::cmp::Reverse(c.len()), (*c).clone()))
        .cloned()
        .unwrap_or_default()
}

/// How one inconsistent world was repaired.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorldRevision {
    pub world: World,
    pub slice: BTreeSet<ElementId>,
    pub candidates: Vec<BTreeSet<ElementId>>,
    pub chosen: BTreeSet<ElementId>,
}

/// A revised program together with the per-world repair trace.
pub struct RevisionResult {
    pub program: PPreDelpProgram,
    pub worlds: Vec<WorldRevision>,
}

/// Revises the program with the default selection.
pub fn revise(
    program: &PPreDelpProgram,
    input: &EpistemicInput,
) -> Result<RevisionResult, RevisionError> {
    revise_with(program, input, default_selection)
}

/// Revises the program with a custom selection among the candidates of each
/// world. For every world that could carry positive probability while its
/// active strict slice is inconsistent, the annotations of the slice elements
/// outside the selected set are narrowed to exclude that world.
pub fn revise_with<S>(
    program: &PPreDelpProgram,
    input: &EpistemicInput,
    select: S,
) -> Result<RevisionResult, RevisionError>
where
    S: Fn(&[BTreeSet<ElementId>], &ElementId) -> BTreeSet<ElementId>,
{
    let expanded = expand(program, input)?;
    let universe = expanded.em().universe().clone();
    let mut worlds = Vec::new();
    let mut af = expanded.af().clone();
    for w in expanded.wi() {
        let slice: BTreeSet<ElementId> =
            expanded.strict_slice(w).iter().map(|e| e.id().clone()).collect();
        let candidates = cand_pgm(&expanded, w)?;
        let chosen = select(&candidates, input.element.id());
        for id in slice.difference(&chosen) {
            let narrowed = Formula::and(
                af.get(id).expect("annotation is total").clone(),
                Formula::not(universe.formula_for_world(w)),
            );
            af.set(id.clone(), narrowed);
        }
        worlds.push(WorldRevision { world: w, slice, candidates, chosen });
    }
    let revised = PPreDelpProgram::new(expanded.em().clone(), expanded.am().clone(), af)?;
    Ok(RevisionResult { program: revised, worlds })
}

#[cfg(test)]
mod tests;
