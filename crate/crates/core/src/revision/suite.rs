//! Randomized revision instances and postulate tallies over them.
//!
//! The generator is fully deterministic in its seed. It only emits instances
//! whose base program is consistent, so every inconsistency an input causes
//! is attributable to that input. Inputs are biased toward contradicting an
//! existing element, and each comes with a respelled twin (fresh name,
//! equivalent annotation) to give the uniformity postulates real pairs to
//! compare.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::em::{EmKnowledgeBase, ProbabilisticFormula};
use crate::lang::{
    AmElement, AnnotationFunction, Atom, ElementKind, Formula, Literal, PreDelpProgram, Universe,
};
use crate::par::par_map;
use crate::pp::PPreDelpProgram;

use super::postulates::{self, Judge, Outcome, Postulate};
use super::{EpistemicInput, Operator, RevisionError};

const EM_ATOMS: [&str; 4] = ["a", "b", "c", "d"];
const AM_ATOMS: [&str; 4] = ["p", "q", "r", "s"];

/// A base program with a fresh input and a respelled twin of that input.
pub struct GeneratedInstance {
    pub base: PPreDelpProgram,
    pub input: EpistemicInput,
    pub twin: EpistemicInput,
}

/// Deterministic source of random revision instances.
pub struct InstanceGen {
    rng: ChaCha8Rng,
}

impl InstanceGen {
    pub fn new(seed: u64) -> Self {
        InstanceGen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn next_instance(&mut self) -> GeneratedInstance {
        for _ in 0..10_000 {
            if let Some(g) = self.try_instance() {
                return g;
            }
        }
        panic!("generator failed to produce a consistent base program");
    }

    fn try_instance(&mut self) -> Option<GeneratedInstance> {
        let n = self.rng.gen_range(2..=EM_ATOMS.len());
        let atoms = &EM_ATOMS[..n];
        let em = self.gen_em(atoms)?;
        let (am, af) = self.gen_am(atoms);
        let base = PPreDelpProgram::new(em, am, af).ok()?;
        if !base.is_consistent() {
            return None;
        }
        let input = self.gen_input(&base, atoms);
        let twin = respell(&input);
        Some(GeneratedInstance { base, input, twin })
    }

    fn gen_em(&mut self, atoms: &[&str]) -> Option<EmKnowledgeBase> {
        let universe = Universe::props(atoms).expect("distinct names");
        let count = self.rng.gen_range(1..=3usize);
        let mut formulas = Vec::new();
        for _ in 0..count {
            let f = self.gen_formula(atoms, 2);
            let p = BigRational::new(self.rng.gen_range(0..=10).into(), 10.into());
            let cap = (BigRational::one() - &p).min(p.clone());
            let eps = match self.rng.gen_range(0..3) {
                0 => BigRational::zero(),
                1 => cap.clone() / BigRational::from_integer(2.into()),
                _ => cap,
            };
            formulas.push(ProbabilisticFormula::new(f, p, eps).expect("eps within cap"));
        }
        EmKnowledgeBase::new(universe, Vec::new(), formulas).ok()
    }

    fn gen_am(&mut self, atoms: &[&str]) -> (PreDelpProgram, AnnotationFunction) {
        let count = self.rng.gen_range(2..=7usize);
        let mut elements = Vec::new();
        let mut af = AnnotationFunction::new();
        for i in 0..count {
            let id = format!("e{i}");
            let head = self.gen_literal();
            let element = match self.rng.gen_range(0..100) {
                0..=44 => AmElement::fact(&id, head),
                45..=69 => {
                    AmElement::strict_rule(&id, head, self.gen_body()).expect("nonempty body")
                }
                70..=84 => AmElement::presumption(&id, head),
                _ => AmElement::defeasible_rule(&id, head, self.gen_body())
                    .expect("nonempty body"),
            };
            af.set(element.id().clone(), self.gen_annotation(atoms));
            elements.push(element);
        }
        (PreDelpProgram::new(elements).expect("fresh ids"), af)
    }

    fn gen_literal(&mut self) -> Literal {
        let atom = Atom::prop(AM_ATOMS.choose(&mut self.rng).expect("nonempty pool"));
        if self.rng.gen_bool(0.5) {
            Literal::pos(atom)
        } else {
            Literal::neg(atom)
        }
    }

    fn gen_body(&mut self) -> Vec<Literal> {
        let mut body = vec![self.gen_literal()];
        if self.rng.gen_bool(0.4) {
            let second = self.gen_literal();
            if second != body[0] {
                body.push(second);
            }
        }
        body
    }

    fn gen_annotation(&mut self, atoms: &[&str]) -> Formula {
        if self.rng.gen_bool(0.3) {
            Formula::True
        } else {
            self.gen_formula(atoms, 2)
        }
    }

    fn gen_formula(&mut self, atoms: &[&str], depth: u32) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.4) {
            return Formula::atom(atoms.choose(&mut self.rng).expect("nonempty pool"));
        }
        match self.rng.gen_range(0..3) {
            0 => Formula::not(self.gen_formula(atoms, depth - 1)),
            1 => Formula::and(
                self.gen_formula(atoms, depth - 1),
                self.gen_formula(atoms, depth - 1),
            ),
            _ => Formula::or(
                self.gen_formula(atoms, depth - 1),
                self.gen_formula(atoms, depth - 1),
            ),
        }
    }

    fn gen_input(&mut self, base: &PPreDelpProgram, atoms: &[&str]) -> EpistemicInput {
        let conflict = self.rng.gen_bool(0.6) && !base.am().is_empty();
        let head = if conflict {
            let e = base.am().elements().choose(&mut self.rng).expect("nonempty program");
            e.head().complement()
        } else {
            self.gen_literal()
        };
        let element = if self.rng.gen_bool(0.7) {
            AmElement::fact("f0", head)
        } else {
            let facts: Vec<&AmElement> = base.am().of_kind(ElementKind::Fact).collect();
            let body = match facts.choose(&mut self.rng) {
                Some(f) => vec![f.head().clone()],
                None => vec![self.gen_literal()],
            };
            AmElement::strict_rule("f0", head, body).expect("nonempty body")
        };
        let annotation = if self.rng.gen_bool(0.45) {
            Formula::True
        } else {
            self.gen_formula(atoms, 2)
        };
        EpistemicInput::new(element, annotation)
    }
}

/// The same input under a fresh name with a syntactically different but
/// equivalent annotation.
pub fn respell(input: &EpistemicInput) -> EpistemicInput {
    let e = &input.element;
    let element = match e.kind() {
        ElementKind::Fact => AmElement::fact("g0", e.head().clone()),
        ElementKind::Presumption => AmElement::presumption("g0", e.head().clone()),
        ElementKind::StrictRule => {
            AmElement::strict_rule("g0", e.head().clone(), e.body().to_vec())
                .expect("body carried over")
        }
        ElementKind::DefeasibleRule => {
            AmElement::defeasible_rule("g0", e.head().clone(), e.body().to_vec())
                .expect("body carried over")
        }
    };
    EpistemicInput::new(element, Formula::and(input.annotation.clone(), Formula::True))
}

/// Postulate outcomes for one instance under one operator.
pub struct InstanceOutcomes {
    pub outcomes: Vec<(Postulate, Outcome)>,
    /// Whether core retainment held, on instances where the operator kept
    /// maximal candidates and relevance held. `None` when that premise
    /// failed.
    pub retainment_under_maximality: Option<bool>,
    /// Whether the two uniformity postulates agreed, on instances where
    /// annotations of strict elements only shrank. `None` when that premise
    /// failed.
    pub uniformities_agree: Option<bool>,
}

/// Judges one instance under one operator, twin included.
pub fn evaluate_instance(
    op: Operator,
    inst: &GeneratedInstance,
) -> Result<InstanceOutcomes, RevisionError> {
    let first = op.revise(&inst.base, &inst.input)?;
    let second = op.revise(&inst.base, &inst.twin)?;
    let j1 = Judge::new(&inst.base, &inst.input, &first.program)?;
    let j2 = Judge::new(&inst.base, &inst.twin, &second.program)?;
    let core = j1.core_retainment();
    let rel = j1.relevance();
    let u1 = postulates::uniformity1(&j1, &j2);
    let u2 = postulates::uniformity2(&j1, &j2);
    let retainment_under_maximality =
        if postulates::keeps_maximal_candidates(&j1)? && rel.holds() {
            Some(core.holds())
        } else {
            None
        };
    let uniformities_agree =
        if postulates::shrinks_strict_slices(&j1) && postulates::shrinks_strict_slices(&j2) {
            Some(u1.holds() == u2.holds())
        } else {
            None
        };
    let outcomes = vec![
        (Postulate::Inclusion, j1.inclusion()),
        (Postulate::Vacuity, j1.vacuity()),
        (Postulate::ConsistencyPreservation, j1.consistency_preservation()),
        (Postulate::WeakSuccess, j1.weak_success()),
        (Postulate::CoreRetainment, core),
        (Postulate::Relevance, rel),
        (Postulate::Uniformity1, u1),
        (Postulate::Uniformity2, u2),
    ];
    Ok(InstanceOutcomes { outcomes, retainment_under_maximality, uniformities_agree })
}

/// Counts for one postulate across a run.
#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub holds: usize,
    pub vacuous: usize,
    pub fails: usize,
    pub first_failure: Option<String>,
}

impl Tally {
    fn record(&mut self, o: &Outcome) {
        match o {
            Outcome::Holds => self.holds += 1,
            Outcome::Vacuous => self.vacuous += 1,
            Outcome::Fails(msg) => {
                self.fails += 1;
                if self.first_failure.is_none() {
                    self.first_failure = Some(msg.clone());
                }
            }
        }
    }

    /// Instances on which the postulate actually constrained the operator.
    pub fn exercised(&self) -> usize {
        self.holds + self.fails
    }
}

/// Aggregated postulate results for one operator.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub operator: Operator,
    pub instances: usize,
    pub tallies: BTreeMap<Postulate, Tally>,
    pub retainment_under_maximality_checked: usize,
    pub retainment_under_maximality_failures: usize,
    pub uniformity_agreement_checked: usize,
    pub uniformity_agreement_failures: usize,
}

impl SuiteReport {
    pub fn all_hold(&self) -> bool {
        self.tallies.values().all(|t| t.fails == 0)
    }

    pub fn violated(&self) -> Vec<Postulate> {
        Postulate::ALL
            .iter()
            .copied()
            .filter(|p| self.tally(*p).fails > 0)
            .collect()
    }

    pub fn tally(&self, p: Postulate) -> &Tally {
        self.tallies.get(&p).expect("every postulate is tallied")
    }
}

/// Evaluates `count` seeded instances under the operator.
pub fn run_suite(op: Operator, seed: u64, count: usize) -> Result<SuiteReport, RevisionError> {
    let mut gen = InstanceGen::new(seed);
    let instances: Vec<GeneratedInstance> = (0..count).map(|_| gen.next_instance()).collect();
    let results = par_map(instances, |inst| evaluate_instance(op, &inst));
    let mut report = SuiteReport {
        operator: op,
        instances: count,
        tallies: Postulate::ALL.iter().map(|p| (*p, Tally::default())).collect(),
        retainment_under_maximality_checked: 0,
        retainment_under_maximality_failures: 0,
        uniformity_agreement_checked: 0,
        uniformity_agreement_failures: 0,
    };
    for result in results {
        let r = result?;
        for (p, o) in &r.outcomes {
            report.tallies.get_mut(p).expect("every postulate is tallied").record(o);
        }
        if let Some(ok) = r.retainment_under_maximality {
            report.retainment_under_maximality_checked += 1;
            if !ok {
                report.retainment_under_maximality_failures += 1;
            }
        }
        if let Some(ok) = r.uniformities_agree {
            report.uniformity_agreement_checked += 1;
            if !ok {
                report.uniformity_agreement_failures += 1;
            }
        }
    }
    Ok(report)
}
