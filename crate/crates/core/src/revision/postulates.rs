//! Executable readings of the revision postulates.
//!
//! Every check compares annotations at the level of satisfying world sets,
//! never syntactically, so operators are free to rewrite formulas into
//! equivalent shapes. Consistency of element sets is classical consistency
//! of the facts and strict rules involved; the input element joins those
//! sets only when it is itself a fact or a strict rule.

use std::collections::BTreeSet;

use crate::am;
use crate::lang::{AmElement, ElementId, World};
use crate::pp::PPreDelpProgram;

use super::{cand_pgm, expand, EpistemicInput, RevisionError, MAX_SLICE};

/// The postulates a revision operator is judged against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Postulate {
    Inclusion,
    Vacuity,
    ConsistencyPreservation,
    WeakSuccess,
    CoreRetainment,
    Relevance,
    Uniformity1,
    Uniformity2,
}

impl Postulate {
    pub const ALL: [Postulate; 8] = [
        Postulate::Inclusion,
        Postulate::Vacuity,
        Postulate::ConsistencyPreservation,
        Postulate::WeakSuccess,
        Postulate::CoreRetainment,
        Postulate::Relevance,
        Postulate::Uniformity1,
        Postulate::Uniformity2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Postulate::Inclusion => "inclusion",
            Postulate::Vacuity => "vacuity",
            Postulate::ConsistencyPreservation => "consistency-preservation",
            Postulate::WeakSuccess => "weak-success",
            Postulate::CoreRetainment => "core-retainment",
            Postulate::Relevance => "relevance",
            Postulate::Uniformity1 => "uniformity-1",
            Postulate::Uniformity2 => "uniformity-2",
        }
    }
}

/// The verdict of one postulate on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    /// The premise of the postulate never applied, so nothing was tested.
    Vacuous,
    Fails(String),
}

impl Outcome {
    pub fn holds(&self) -> bool {
        !matches!(self, Outcome::Fails(_))
    }

    pub fn exercised(&self) -> bool {
        !matches!(self, Outcome::Vacuous)
    }
}

/// One revision instance held up against the postulates: the base program,
/// the input, and the revised program an operator produced for them.
pub struct Judge<'a> {
    base: &'a PPreDelpProgram,
    input: &'a EpistemicInput,
    revised: &'a PPreDelpProgram,
    expanded: PPreDelpProgram,
    wi: Vec<World>,
}

impl<'a> Judge<'a> {
    pub fn new(
        base: &'a PPreDelpProgram,
        input: &'a EpistemicInput,
        revised: &'a PPreDelpProgram,
    ) -> Result<Self, RevisionError> {
        let expanded = expand(base, input)?;
        let wi = expanded.wi();
        for &w in &wi {
            let got = expanded.strict_slice(w).len();
            if got > MAX_SLICE {
                return Err(RevisionError::SliceTooLarge { max: MAX_SLICE, got });
            }
        }
        Ok(Judge { base, input, revised, expanded, wi })
    }

    pub fn expanded(&self) -> &PPreDelpProgram {
        &self.expanded
    }

    pub fn wi(&self) -> &[World] {
        &self.wi
    }

    fn models(&self, program: &PPreDelpProgram, id: &ElementId) -> BTreeSet<World> {
        let f = program.af().get(id).expect("annotation is total");
        self.base
            .em()
            .universe()
            .wld(f)
            .expect("annotation compiled at construction")
            .into_iter()
            .collect()
    }

    fn sat(&self, program: &PPreDelpProgram, id: &ElementId, w: World) -> bool {
        let f = program.af().get(id).expect("annotation is total");
        self.base
            .em()
            .universe()
            .satisfies(w, f)
            .expect("annotation compiled at construction")
    }

    /// Revised and expanded programs carry the same elements.
    fn same_elements(&self) -> Option<String> {
        if self.revised.am().len() != self.expanded.am().len() {
            return Some(format!(
                "revised program has {} elements, expected {}",
                self.revised.am().len(),
                self.expanded.am().len()
            ));
        }
        for e in self.expanded.am().elements() {
            if self.revised.am().get(e.id()) != Some(e) {
                return Some(format!("element {} was altered or dropped", e.id().0));
            }
        }
        None
    }

    /// No annotation gains worlds over what the input assigned.
    pub fn inclusion(&self) -> Outcome {
        if let Some(msg) = self.same_elements() {
            return Outcome::Fails(msg);
        }
        for e in self.expanded.am().elements() {
            let after = self.models(self.revised, e.id());
            let before = self.models(&self.expanded, e.id());
            if !after.is_subset(&before) {
                return Outcome::Fails(format!(
                    "annotation of {} covers worlds the input never allowed",
                    e.id().0
                ));
            }
        }
        Outcome::Holds
    }

    /// A consistent expansion is returned unchanged.
    pub fn vacuity(&self) -> Outcome {
        if !self.expanded.is_consistent() {
            return Outcome::Vacuous;
        }
        if let Some(msg) = self.same_elements() {
            return Outcome::Fails(msg);
        }
        for e in self.expanded.am().elements() {
            if self.models(self.revised, e.id()) != self.models(&self.expanded, e.id()) {
                return Outcome::Fails(format!(
                    "expansion was consistent yet the annotation of {} changed",
                    e.id().0
                ));
            }
        }
        Outcome::Holds
    }

    /// Revising a consistent program yields a consistent program.
    pub fn consistency_preservation(&self) -> Outcome {
        if !self.base.is_consistent() {
            return Outcome::Vacuous;
        }
        if self.revised.is_consistent() {
            Outcome::Holds
        } else {
            Outcome::Fails("revised program is inconsistent".to_string())
        }
    }

    /// A consistent expansion retains the input with its annotation intact.
    pub fn weak_success(&self) -> Outcome {
        if !self.expanded.is_consistent() {
            return Outcome::Vacuous;
        }
        if self.revised.am().get(self.input.element.id()) != Some(&self.input.element) {
            return Outcome::Fails("input element missing from the revised program".to_string());
        }
        for e in self.expanded.am().elements() {
            if self.models(self.revised, e.id()) != self.models(&self.expanded, e.id()) {
                return Outcome::Fails(format!(
                    "expansion was consistent yet the annotation of {} changed",
                    e.id().0
                ));
            }
        }
        Outcome::Holds
    }

    fn strict_ids(program: &PPreDelpProgram, w: World) -> BTreeSet<ElementId> {
        program.strict_slice(w).iter().map(|e| e.id().clone()).collect()
    }

    fn pool_elements(&self, ids: &BTreeSet<ElementId>) -> Vec<&AmElement> {
        let mut pool: BTreeSet<&ElementId> = ids.iter().collect();
        if self.input.element.kind().is_strict() {
            pool.insert(self.input.element.id());
        }
        pool.into_iter()
            .map(|id| self.expanded.am().get(id).expect("ids come from the program"))
            .collect()
    }

    /// Every element dropped at a world is blamed by a consistent subset of
    /// what was kept there, together with the input.
    pub fn core_retainment(&self) -> Outcome {
        let mut exercised = false;
        for &w in &self.wi {
            let kept = Self::strict_ids(self.revised, w);
            let slice = Self::strict_ids(&self.expanded, w);
            let pool = self.pool_elements(&kept);
            for gone in slice.difference(&kept) {
                exercised = true;
                let g = self.expanded.am().get(gone).expect("slice ids");
                if !subset_witness(&pool, g) {
                    return Outcome::Fails(format!(
                        "world {:?}: no kept subset blames removed element {}",
                        w, gone.0
                    ));
                }
            }
        }
        if exercised {
            Outcome::Holds
        } else {
            Outcome::Vacuous
        }
    }

    /// Every element dropped at a world is blamed by a consistent extension
    /// of what was kept there, drawn from the slice and the input.
    pub fn relevance(&self) -> Outcome {
        let mut exercised = false;
        for &w in &self.wi {
            let kept = Self::strict_ids(self.revised, w);
            let slice = Self::strict_ids(&self.expanded, w);
            let low = self.pool_elements(&kept);
            let high = self.pool_elements(&slice);
            let optional: Vec<&AmElement> = high
                .iter()
                .filter(|e| !low.iter().any(|l| l.id() == e.id()))
                .copied()
                .collect();
            for gone in slice.difference(&kept) {
                exercised = true;
                let g = self.expanded.am().get(gone).expect("slice ids");
                if !extension_witness(&low, &optional, g) {
                    return Outcome::Fails(format!(
                        "world {:?}: no kept extension blames removed element {}",
                        w, gone.0
                    ));
                }
            }
        }
        if exercised {
            Outcome::Holds
        } else {
            Outcome::Vacuous
        }
    }

    /// All single-instance postulates in declaration order.
    pub fn singles(&self) -> Vec<(Postulate, Outcome)> {
        vec![
            (Postulate::Inclusion, self.inclusion()),
            (Postulate::Vacuity, self.vacuity()),
            (Postulate::ConsistencyPreservation, self.consistency_preservation()),
            (Postulate::WeakSuccess, self.weak_success()),
            (Postulate::CoreRetainment, self.core_retainment()),
            (Postulate::Relevance, self.relevance()),
        ]
    }
}

/// Whether some subset `Y` of `pool` is consistent while `Y` plus `g` is not.
fn subset_witness(pool: &[&AmElement], g: &AmElement) -> bool {
    for mask in 0..(1usize << pool.len()) {
        let mut y: Vec<&AmElement> = pool
            .iter()
            .enumerate()
            .filter(|(j, _)| mask & (1 << j) != 0)
            .map(|(_, e)| *e)
            .collect();
        if !am::classically_consistent(&y) {
            continue;
        }
        y.push(g);
        if !am::classically_consistent(&y) {
            return true;
        }
    }
    false
}

/// Whether some superset `Y` of `low` inside `low` plus `optional` is
/// consistent while `Y` plus `g` is not.
fn extension_witness(low: &[&AmElement], optional: &[&AmElement], g: &AmElement) -> bool {
    for mask in 0..(1usize << optional.len()) {
        let mut y: Vec<&AmElement> = low.to_vec();
        y.extend(
            optional
                .iter()
                .enumerate()
                .filter(|(j, _)| mask & (1 << j) != 0)
                .map(|(_, e)| *e),
        );
        if !am::classically_consistent(&y) {
            continue;
        }
        y.push(g);
        if !am::classically_consistent(&y) {
            return true;
        }
    }
    false
}

/// The shared premise of the uniformity postulates: both expansions turn the
/// same worlds inconsistent, and on each of those worlds the same base
/// subsets clash with the respective input.
pub fn uniformity_premise(a: &Judge, b: &Judge) -> bool {
    let wi_a: BTreeSet<World> = a.wi.iter().copied().collect();
    let wi_b: BTreeSet<World> = b.wi.iter().copied().collect();
    if wi_a != wi_b {
        return false;
    }
    for &w in &a.wi {
        let slice = a.base.strict_slice(w);
        for mask in 0..(1usize << slice.len()) {
            let xs: Vec<&AmElement> = slice
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| *e)
                .collect();
            if joined_inconsistent(a, &xs, w) != joined_inconsistent(b, &xs, w) {
                return false;
            }
        }
    }
    true
}

fn joined_inconsistent(j: &Judge, xs: &[&AmElement], w: World) -> bool {
    let mut set: Vec<&AmElement> = xs.to_vec();
    let f = &j.input.element;
    if f.kind().is_strict() && j.sat(&j.expanded, f.id(), w) {
        set.push(f);
    }
    !am::classically_consistent(&set)
}

fn removed_worlds(j: &Judge, id: &ElementId) -> BTreeSet<World> {
    j.wi
        .iter()
        .copied()
        .filter(|&w| j.sat(&j.expanded, id, w) && !j.sat(j.revised, id, w))
        .collect()
}

fn retained_worlds(j: &Judge, id: &ElementId) -> BTreeSet<World> {
    j.wi
        .iter()
        .copied()
        .filter(|&w| j.sat(&j.expanded, id, w) && j.sat(j.revised, id, w))
        .collect()
}

/// Inputs that clash alike have alike worlds removed from every annotation.
pub fn uniformity1(a: &Judge, b: &Judge) -> Outcome {
    if !uniformity_premise(a, b) || a.wi.is_empty() {
        return Outcome::Vacuous;
    }
    for e in a.base.am().elements() {
        if removed_worlds(a, e.id()) != removed_worlds(b, e.id()) {
            return Outcome::Fails(format!(
                "annotation of {} lost different worlds under matching inputs",
                e.id().0
            ));
        }
    }
    Outcome::Holds
}

/// Inputs that clash alike have alike worlds retained in every annotation.
pub fn uniformity2(a: &Judge, b: &Judge) -> Outcome {
    if !uniformity_premise(a, b) || a.wi.is_empty() {
        return Outcome::Vacuous;
    }
    for e in a.base.am().elements() {
        if retained_worlds(a, e.id()) != retained_worlds(b, e.id()) {
            return Outcome::Fails(format!(
                "annotation of {} kept different worlds under matching inputs",
                e.id().0
            ));
        }
    }
    Outcome::Holds
}

/// Premise of the first conditional property: at every repaired world the
/// operator kept a maximal consistent subset of the active slice.
pub fn keeps_maximal_candidates(j: &Judge) -> Result<bool, RevisionError> {
    for &w in &j.wi {
        let kept = Judge::strict_ids(j.revised, w);
        if !cand_pgm(&j.expanded, w)?.contains(&kept) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Premise of the second conditional property: annotations only ever shrink
/// on facts and strict rules.
pub fn shrinks_strict_slices(j: &Judge) -> bool {
    j.expanded.am().strict_elements().all(|e| {
        j.models(j.revised, e.id()).is_subset(&j.models(&j.expanded, e.id()))
    })
}
