//! Environmental model: probabilistic knowledge bases over worlds and the
//! linear programs answering entailment queries about them.
//!
//! A knowledge base constrains the probabilities of classical formulas to
//! closed intervals `[p - eps, p + eps]`. Queries optimise the total mass of a
//! world set over all satisfying distributions, with exact rational answers.

pub mod simplex;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lang::{
    CompiledFormula, Formula, IntegrityConstraint, LangError, Universe, World,
};
use simplex::{LinearProgram, Rel, Sense, SimplexOutcome};

/// Errors raised by the environmental engine.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum EmError {
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(BigRational),
    #[error("tolerance {eps} is outside [0, min({p}, 1 - {p})]")]
    InvalidTolerance { p: BigRational, eps: BigRational },
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error("knowledge base admits no satisfying distribution")]
    Inconsistent,
}

/// A formula constrained to hold with probability `p` up to tolerance `eps`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbabilisticFormula {
    formula: Formula,
    p: BigRational,
    eps: BigRational,
}

impl ProbabilisticFormula {
    pub fn new(formula: Formula, p: BigRational, eps: BigRational) -> Result<Self, EmError> {
        if p.is_negative() || p > BigRational::one() {
            return Err(EmError::InvalidProbability(p));
        }
        let cap = (BigRational::one() - &p).min(p.clone());
        if eps.is_negative() || eps > cap {
            return Err(EmError::InvalidTolerance { p, eps });
        }
        Ok(ProbabilisticFormula { formula, p, eps })
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn eps(&self) -> &BigRational {
        &self.eps
    }

    pub fn lower(&self) -> BigRational {
        &self.p - &self.eps
    }

    pub fn upper(&self) -> BigRational {
        &self.p + &self.eps
    }
}

/// A probabilistic knowledge base over a fixed universe.
#[derive(Clone, Debug, PartialEq)]
pub struct EmKnowledgeBase {
    universe: Universe,
    ics: Vec<IntegrityConstraint>,
    formulas: Vec<ProbabilisticFormula>,
}

impl EmKnowledgeBase {
    pub fn new(
        universe: Universe,
        ics: Vec<IntegrityConstraint>,
        formulas: Vec<ProbabilisticFormula>,
    ) -> Result<Self, EmError> {
        for ic in &ics {
            for a in &ic.one_of {
                universe.index_of(a)?;
            }
        }
        for f in &formulas {
            f.formula.compile(&universe)?;
        }
        Ok(EmKnowledgeBase { universe, ics, formulas })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn ics(&self) -> &[IntegrityConstraint] {
        &self.ics
    }

    pub fn formulas(&self) -> &[ProbabilisticFormula] {
        &self.formulas
    }

    /// The worlds conforming to the integrity constraints, ascending.
    pub fn conforming_worlds(&self) -> Vec<World> {
        self.universe.enumerate_worlds(&self.ics).expect("validated at construction")
    }

    /// Translates the base into per-world linear constraints.
    pub fn build_constraints(&self) -> ConstraintSystem {
        let worlds = self.conforming_worlds();
        let compiled: Vec<CompiledFormula> = self
            .formulas
            .iter()
            .map(|f| f.formula.compile(&self.universe).expect("validated at construction"))
            .collect();
        let rows = self
            .formulas
            .iter()
            .zip(&compiled)
            .map(|(f, c)| ConstraintRow {
                members: worlds
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| c.sat(**w))
                    .map(|(i, _)| i)
                    .collect(),
                lower: f.lower(),
                upper: f.upper(),
            })
            .collect();
        ConstraintSystem { worlds, rows }
    }

    /// Minimal total probability of the world set over satisfying distributions.
    pub fn ep_lp_min(&self, objective: &[World]) -> LpResult {
        self.optimize(objective, Sense::Minimize)
    }

    /// Maximal total probability of the world set over satisfying distributions.
    pub fn ep_lp_max(&self, objective: &[World]) -> LpResult {
        self.optimize(objective, Sense::Maximize)
    }

    fn optimize(&self, objective: &[World], sense: Sense) -> LpResult {
        let system = self.build_constraints();
        let lp = system.linear_program();
        let members = system.objective_indices(objective);
        let obj: Vec<(usize, BigRational)> =
            members.iter().map(|&i| (i, BigRational::one())).collect();
        match lp.solve(&obj, sense) {
            SimplexOutcome::Optimal { value, x } => {
                let witness: BTreeMap<World, BigRational> = system
                    .worlds
                    .iter()
                    .zip(&x)
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(w, v)| (*w, v.clone()))
                    .collect();
                debug_assert!(system.verify(&witness, &members, &value));
                LpResult::Optimal { value, witness }
            }
            SimplexOutcome::Infeasible => LpResult::Infeasible,
            SimplexOutcome::Unbounded => {
                unreachable!("normalised distributions cannot be unbounded")
            }
        }
    }

    /// Tightest `q : p +- eps` statement entailed by the base.
    pub fn max_entailment(&self, q: &Formula) -> Result<(BigRational, BigRational), EmError> {
        let compiled = q.compile(&self.universe)?;
        let objective: Vec<World> =
            self.conforming_worlds().into_iter().filter(|w| compiled.sat(*w)).collect();
        let lo = match self.ep_lp_min(&objective) {
            LpResult::Optimal { value, .. } => value,
            LpResult::Infeasible => return Err(EmError::Inconsistent),
        };
        let hi = match self.ep_lp_max(&objective) {
            LpResult::Optimal { value, .. } => value,
            LpResult::Infeasible => return Err(EmError::Inconsistent),
        };
        let eps = (&hi - &lo) / BigRational::from_integer(2.into());
        Ok((&lo + &eps, eps))
    }

    /// Whether some probability distribution satisfies the base.
    pub fn check_type_i(&self) -> bool {
        !matches!(self.ep_lp_min(&[]), LpResult::Infeasible)
    }

    /// Whether some satisfying distribution gives the world positive mass.
    pub fn can_have_positive_probability(&self, world: World) -> bool {
        match self.ep_lp_max(&[world]) {
            LpResult::Optimal { value, .. } => value.is_positive(),
            LpResult::Infeasible => false,
        }
    }

    /// The subset of `candidates` some satisfying distribution gives
    /// positive mass.
    ///
    /// Maximises the total mass of the undecided worlds, keeps every world
    /// the witness weights positively and repeats. A zero optimum settles
    /// all remaining worlds at once, because each individual maximum is
    /// bounded by the maximum of the total.
    pub fn positive_probability_worlds(&self, candidates: &[World]) -> Vec<World> {
        let mut remaining: Vec<World> = candidates.to_vec();
        let mut out = Vec::new();
        while !remaining.is_empty() {
            match self.ep_lp_max(&remaining) {
                LpResult::Optimal { value, witness } if value.is_positive() => {
                    let (positive, rest): (Vec<World>, Vec<World>) =
                        remaining.into_iter().partition(|w| {
                            witness.get(w).is_some_and(|m| m.is_positive())
                        });
                    debug_assert!(!positive.is_empty());
                    out.extend(positive);
                    remaining = rest;
                }
                _ => break,
            }
        }
        out.sort();
        out
    }
}

/// Result of a probability optimisation.
#[derive(Clone, Debug, PartialEq)]
pub enum LpResult {
    Optimal { value: BigRational, witness: BTreeMap<World, BigRational> },
    Infeasible,
}

impl LpResult {
    pub fn value(&self) -> Option<&BigRational> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            LpResult::Infeasible => None,
        }
    }
}

/// One two-sided row: the mass of `members` lies in `[lower, upper]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintRow {
    pub members: Vec<usize>,
    pub lower: BigRational,
    pub upper: BigRational,
}

/// The linear view of a knowledge base: one variable per conforming world.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSystem {
    pub worlds: Vec<World>,
    pub rows: Vec<ConstraintRow>,
}

impl ConstraintSystem {
    /// The linear program: two-sided rows plus normalisation to total mass one.
    pub fn linear_program(&self) -> LinearProgram {
        let n = self.worlds.len();
        let mut lp = LinearProgram::new(n);
        for row in &self.rows {
            let coeffs: Vec<(usize, BigRational)> =
                row.members.iter().map(|&i| (i, BigRational::one())).collect();
            lp.add_row(coeffs.clone(), Rel::Le, row.upper.clone());
            if row.lower.is_positive() {
                lp.add_row(coeffs, Rel::Ge, row.lower.clone());
            }
        }
        let all: Vec<(usize, BigRational)> = (0..n).map(|i| (i, BigRational::one())).collect();
        lp.add_row(all, Rel::Eq, BigRational::one());
        lp
    }

    fn objective_indices(&self, objective: &[World]) -> Vec<usize> {
        self.worlds
            .iter()
            .enumerate()
            .filter(|(_, w)| objective.contains(w))
            .map(|(i, _)| i)
            .collect()
    }

    /// Checks a witness distribution against every constraint and the claimed
    /// objective value.
    pub fn verify(
        &self,
        witness: &BTreeMap<World, BigRational>,
        members: &[usize],
        value: &BigRational,
    ) -> bool {
        let mass = |idxs: &[usize]| -> BigRational {
            idxs.iter()
                .map(|&i| witness.get(&self.worlds[i]).cloned().unwrap_or_else(BigRational::zero))
                .sum()
        };
        if witness.iter().any(|(w, v)| v.is_negative() || !self.worlds.contains(w)) {
            return false;
        }
        let total: BigRational = witness.values().sum();
        if !total.is_one() {
            return false;
        }
        for row in &self.rows {
            let m = mass(&row.members);
            if m < row.lower || m > row.upper {
                return false;
            }
        }
        mass(members) == *value
    }
}
