//! The revision operator next to deliberately broken variants.
//!
//! The variants exist to prove the postulate checkers can fail: each one
//! deviates from the honest construction in a single way and some postulate
//! must notice.

use std::collections::BTreeSet;

use crate::lang::{ElementId, Formula, World};
use crate::pp::PPreDelpProgram;

use super::{
    default_selection, expand, revise, revise_with, EpistemicInput, RevisionError, RevisionResult,
};

/// The operator under test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Operator {
    /// The honest operator with the default selection.
    Default,
    /// Keeps a consistent but needlessly small part of each slice.
    NonMaximal,
    /// Avoids candidates that retain the input whenever it can.
    DropInput,
    /// Additionally excises one world that never hosted an inconsistency.
    ExtraWorldDelete,
}

impl Operator {
    pub const MUTANTS: [Operator; 3] =
        [Operator::NonMaximal, Operator::DropInput, Operator::ExtraWorldDelete];

    pub fn label(self) -> &'static str {
        match self {
            Operator::Default => "afo-default",
            Operator::NonMaximal => "mutant-nonmaximal",
            Operator::DropInput => "mutant-dropinput",
            Operator::ExtraWorldDelete => "mutant-extraworld",
        }
    }

    pub fn revise(
        self,
        program: &PPreDelpProgram,
        input: &EpistemicInput,
    ) -> Result<RevisionResult, RevisionError> {
        match self {
            Operator::Default => revise(program, input),
            Operator::NonMaximal => revise_with(program, input, |cands, f| {
                let mut chosen = default_selection(cands, f);
                if let Some(victim) = chosen.iter().rev().find(|id| *id != f).cloned() {
                    chosen.remove(&victim);
                }
                chosen
            }),
            Operator::DropInput => revise_with(program, input, |cands, f| {
                let avoiding: Vec<BTreeSet<ElementId>> =
                    cands.iter().filter(|c| !c.contains(f)).cloned().collect();
                if avoiding.is_empty() {
                    default_selection(cands, f)
                } else {
                    default_selection(&avoiding, f)
                }
            }),
            Operator::ExtraWorldDelete => extra_world_delete(program, input),
        }
    }
}

/// Runs the honest revision, then narrows one annotation at the first
/// conforming world that never needed repair.
fn extra_world_delete(
    program: &PPreDelpProgram,
    input: &EpistemicInput,
) -> Result<RevisionResult, RevisionError> {
    let out = revise(program, input)?;
    let expanded = expand(program, input)?;
    let repaired: BTreeSet<World> = expanded.wi().into_iter().collect();
    let universe = expanded.em().universe().clone();
    let mut af = out.program.af().clone();
    for w in expanded.em().conforming_worlds() {
        if repaired.contains(&w) {
            continue;
        }
        let target = out
            .program
            .am()
            .elements()
            .iter()
            .find(|e| {
                let f = af.get(e.id()).expect("annotation is total");
                universe.satisfies(w, f).expect("annotation compiled at construction")
            })
            .map(|e| e.id().clone());
        if let Some(id) = target {
            let narrowed = Formula::and(
                af.get(&id).expect("annotation is total").clone(),
                Formula::not(universe.formula_for_world(w)),
            );
            af.set(id, narrowed);
            let program =
                PPreDelpProgram::new(out.program.em().clone(), out.program.am().clone(), af)?;
            return Ok(RevisionResult { program, worlds: out.worlds });
        }
    }
    Ok(out)
}
