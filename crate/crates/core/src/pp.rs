//! Probabilistic programs: an environmental model, an analytical model and
//! the annotation function tying them together.
//!
//! Every query reduces to the same pattern: restrict the analytical model to
//! the elements whose annotations hold in a world, reason there, then
//! aggregate over worlds with the environmental linear programs. Worlds
//! sharing an active-element mask share one restricted program, so the sweep
//! runs once per distinct mask; masks are processed through [`par_map`].

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_rational::BigRational;
use thiserror::Error;

use crate::am::{self, AmError, Argument, Reasoner};
use crate::em::{EmError, EmKnowledgeBase, LpResult};
use crate::lang::{
    AmElement, AnnotationFunction, CompiledFormula, ElementId, LangError, Literal,
    PreDelpProgram, World,
};
use crate::par::par_map;

/// Errors raised when combining the two models.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum PpError {
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error(transparent)]
    Em(#[from] EmError),
    #[error(transparent)]
    Am(#[from] AmError),
    #[error("no probability distribution satisfies the environmental model")]
    NoDistribution,
}

/// Lower and upper probability bounds for a literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub lower: BigRational,
    pub upper: BigRational,
}

/// The necessary and possible worlds of a literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecPoss {
    pub nec: Vec<World>,
    pub poss: Vec<World>,
}

/// A probabilistic program with a total, compiled annotation function.
pub struct PPreDelpProgram {
    em: EmKnowledgeBase,
    am: PreDelpProgram,
    af: AnnotationFunction,
    compiled: Vec<CompiledFormula>,
    wi_cache: OnceLock<Vec<World>>,
}

impl PPreDelpProgram {
    pub fn new(
        em: EmKnowledgeBase,
        am: PreDelpProgram,
        af: AnnotationFunction,
    ) -> Result<Self, PpError> {
        af.check_total(&am)?;
        let mut compiled = Vec::with_capacity(am.len());
        for e in am.elements() {
            let f = af.get(e.id()).expect("totality was checked");
            compiled.push(f.compile(em.universe())?);
        }
        Ok(PPreDelpProgram { em, am, af, compiled, wi_cache: OnceLock::new() })
    }

    pub fn em(&self) -> &EmKnowledgeBase {
        &self.em
    }

    pub fn am(&self) -> &PreDelpProgram {
        &self.am
    }

    pub fn af(&self) -> &AnnotationFunction {
        &self.af
    }

    /// Bitmask of the elements whose annotations hold in `w`.
    pub fn active_mask(&self, w: World) -> u64 {
        let mut mask = 0u64;
        for (i, f) in self.compiled.iter().enumerate() {
            if f.sat(w) {
                mask |= 1 << i;
            }
        }
        mask
    }

    fn ids_of_mask(&self, mask: u64) -> BTreeSet<ElementId> {
        self.am
            .elements()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, e)| e.id().clone())
            .collect()
    }

    /// The ids of the elements active in `w`.
    pub fn active_ids(&self, w: World) -> BTreeSet<ElementId> {
        self.ids_of_mask(self.active_mask(w))
    }

    /// The facts and strict rules active in `w`.
    pub fn strict_slice(&self, w: World) -> Vec<&AmElement> {
        let mask = self.active_mask(w);
        self.am
            .elements()
            .iter()
            .enumerate()
            .filter(|(i, e)| mask & (1 << i) != 0 && e.kind().is_strict())
            .map(|(_, e)| e)
            .collect()
    }

    /// The analytical model restricted to the elements active in `w`.
    pub fn restricted_program(&self, w: World) -> PreDelpProgram {
        self.am.restrict(&self.active_ids(w)).expect("ids come from the program")
    }

    /// Whether every element supporting the argument is active in `w`.
    pub fn argument_valid_at(&self, a: &Argument, w: World) -> bool {
        let active = self.active_ids(w);
        a.support.iter().all(|id| active.contains(id))
    }

    /// Whether `w` is a warranting scenario for the literal.
    pub fn is_warranting_scenario(&self, lit: &Literal, w: World) -> Result<bool, PpError> {
        let restricted = self.restricted_program(w);
        let r = Reasoner::new(&restricted)?;
        Ok(am::is_warranted(&r, lit))
    }

    /// Conforming worlds grouped by their active-element mask.
    pub fn world_groups(&self) -> BTreeMap<u64, Vec<World>> {
        let mut groups: BTreeMap<u64, Vec<World>> = BTreeMap::new();
        for w in self.em.conforming_worlds() {
            groups.entry(self.active_mask(w)).or_default().push(w);
        }
        groups
    }

    /// All warranting scenarios of `lit` (necessary worlds) and all worlds
    /// not warranting its complement (possible worlds).
    pub fn nec_poss(&self, lit: &Literal) -> Result<NecPoss, PpError> {
        let comp = lit.complement();
        let groups: Vec<(u64, Vec<World>)> = self.world_groups().into_iter().collect();
        let verdicts: Vec<Result<(bool, bool), AmError>> =
            par_map(groups.iter().map(|(m, _)| *m).collect(), |mask| {
                let restricted = self.am.restrict(&self.ids_of_mask(mask)).expect("program ids");
                let r = Reasoner::new(&restricted)?;
                Ok((am::is_warranted(&r, lit), am::is_warranted(&r, &comp)))
            });
        let mut nec = Vec::new();
        let mut poss = Vec::new();
        for ((_, worlds), verdict) in groups.into_iter().zip(verdicts) {
            let (warranted, comp_warranted) = verdict?;
            if warranted {
                nec.extend(worlds.iter().copied());
            }
            if !comp_warranted {
                poss.extend(worlds.iter().copied());
            }
        }
        nec.sort();
        poss.sort();
        Ok(NecPoss { nec, poss })
    }

    /// The probability interval the program entails for a literal.
    pub fn literal_bounds(&self, lit: &Literal) -> Result<Bounds, PpError> {
        let NecPoss { nec, poss } = self.nec_poss(lit)?;
        let lower = match self.em.ep_lp_min(&nec) {
            LpResult::Optimal { value, .. } => value,
            LpResult::Infeasible => return Err(PpError::NoDistribution),
        };
        let upper = match self.em.ep_lp_max(&poss) {
            LpResult::Optimal { value, .. } => value,
            LpResult::Infeasible => return Err(PpError::NoDistribution),
        };
        Ok(Bounds { lower, upper })
    }

    /// Worlds whose active facts and strict rules are classically
    /// inconsistent.
    pub fn w0(&self) -> Vec<World> {
        self.em
            .conforming_worlds()
            .into_iter()
            .filter(|&w| !am::classically_consistent(&self.strict_slice(w)))
            .collect()
    }

    /// The subset of [`w0`](Self::w0) that some satisfying distribution can
    /// give positive probability. Computed once per program.
    pub fn wi(&self) -> Vec<World> {
        self.wi_cache
            .get_or_init(|| self.em.positive_probability_worlds(&self.w0()))
            .clone()
    }

    /// Whether some probability distribution satisfies the environmental
    /// model.
    pub fn check_type_i(&self) -> bool {
        self.em.check_type_i()
    }

    /// Whether every world with an inconsistent slice is forced to
    /// probability zero.
    pub fn check_type_ii(&self) -> bool {
        self.wi().is_empty()
    }

    /// Type I and Type II consistency together.
    pub fn is_consistent(&self) -> bool {
        self.check_type_i() && self.check_type_ii()
    }
}
