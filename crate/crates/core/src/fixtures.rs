//! Shared example programs for tests, benchmarks and documentation.

use num_rational::BigRational;

use crate::em::{EmKnowledgeBase, ProbabilisticFormula};
use crate::lang::{
    AmElement, AnnotationFunction, Atom, ElementId, Formula, Literal, PreDelpProgram, Universe,
};
use crate::pp::PPreDelpProgram;

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn lit(name: &str) -> Literal {
    Literal::pos(Atom::prop(name))
}

fn nlit(name: &str) -> Literal {
    Literal::neg(Atom::prop(name))
}

fn pf(formula: Formula, p: (i64, i64), eps: (i64, i64)) -> ProbabilisticFormula {
    ProbabilisticFormula::new(formula, rat(p.0, p.1), rat(eps.0, eps.1)).expect("valid bounds")
}

/// The three single-atom statements constraining `a`, `b` and `c`.
fn base_formulas() -> Vec<ProbabilisticFormula> {
    vec![
        pf(Formula::atom("a"), (8, 10), (1, 10)),
        pf(Formula::atom("b"), (2, 10), (1, 10)),
        pf(Formula::atom("c"), (8, 10), (1, 10)),
    ]
}

/// The reduced environmental base over the three constrained atoms only.
pub fn kprime_abc_em() -> EmKnowledgeBase {
    let u = Universe::props(&["a", "b", "c"]).unwrap();
    EmKnowledgeBase::new(u, vec![], base_formulas()).unwrap()
}

/// The reduced environmental base over every atom the annotations mention.
pub fn running_em() -> EmKnowledgeBase {
    let u = Universe::props(&["a", "b", "c", "e", "f", "h", "i", "k", "l", "m"]).unwrap();
    EmKnowledgeBase::new(u, vec![], base_formulas()).unwrap()
}

/// The full seven-statement environmental base.
pub fn example1_em() -> EmKnowledgeBase {
    let u = Universe::props(&[
        "a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m",
    ])
    .unwrap();
    let formulas = vec![
        pf(Formula::atom("a"), (8, 10), (1, 10)),
        pf(Formula::atom("b"), (2, 10), (1, 10)),
        pf(Formula::atom("c"), (8, 10), (1, 10)),
        pf(Formula::and(Formula::atom("d"), Formula::atom("e")), (7, 10), (2, 10)),
        pf(
            Formula::conj([Formula::atom("f"), Formula::atom("g"), Formula::atom("h")]),
            (6, 10),
            (1, 10),
        ),
        pf(Formula::or(Formula::atom("i"), Formula::not(Formula::atom("j"))), (9, 10), (1, 10)),
        pf(Formula::atom("k"), (1, 1), (0, 1)),
    ];
    EmKnowledgeBase::new(u, vec![], formulas).unwrap()
}

/// A base with no satisfying distribution: the conjunction is forced above
/// the disjunction.
pub fn rain_hail_infeasible_em() -> EmKnowledgeBase {
    let u = Universe::props(&["rain", "hail"]).unwrap();
    let formulas = vec![
        pf(Formula::or(Formula::atom("rain"), Formula::atom("hail")), (3, 10), (0, 1)),
        pf(Formula::and(Formula::atom("rain"), Formula::atom("hail")), (5, 10), (1, 10)),
    ];
    EmKnowledgeBase::new(u, vec![], formulas).unwrap()
}

/// The ground argumentation framework used throughout.
pub fn fig1_program() -> PreDelpProgram {
    PreDelpProgram::new([
        AmElement::fact("theta1a", lit("p")),
        AmElement::fact("theta1b", lit("q")),
        AmElement::fact("theta2", lit("r")),
        AmElement::strict_rule("omega1a", nlit("s"), vec![lit("t")]).unwrap(),
        AmElement::strict_rule("omega1b", nlit("t"), vec![lit("s")]).unwrap(),
        AmElement::strict_rule("omega2a", lit("s"), vec![lit("p"), lit("u"), lit("r"), lit("v")])
            .unwrap(),
        AmElement::strict_rule("omega2b", lit("t"), vec![lit("q"), lit("w"), lit("x"), lit("v")])
            .unwrap(),
        AmElement::presumption("phi1", lit("y")),
        AmElement::presumption("phi2", lit("v")),
        AmElement::presumption("phi3", nlit("z")),
        AmElement::defeasible_rule("delta1a", lit("s"), vec![lit("p")]).unwrap(),
        AmElement::defeasible_rule("delta1b", lit("t"), vec![lit("q")]).unwrap(),
        AmElement::defeasible_rule("delta2", lit("s"), vec![lit("u")]).unwrap(),
        AmElement::defeasible_rule("delta3", lit("s"), vec![lit("r"), lit("v")]).unwrap(),
        AmElement::defeasible_rule("delta4", lit("u"), vec![lit("y")]).unwrap(),
        AmElement::defeasible_rule("delta5a", nlit("u"), vec![nlit("z")]).unwrap(),
        AmElement::defeasible_rule("delta5b", nlit("w"), vec![nlit("n")]).unwrap(),
    ])
    .unwrap()
}

/// The annotation function pairing the framework with environmental events.
pub fn fig4_annotations() -> AnnotationFunction {
    let theta1 = Formula::or(
        Formula::atom("k"),
        Formula::and(
            Formula::atom("f"),
            Formula::or(Formula::atom("h"), Formula::and(Formula::atom("e"), Formula::atom("l"))),
        ),
    );
    let mut af = AnnotationFunction::from_pairs([
        (ElementId::new("theta1a"), theta1.clone()),
        (ElementId::new("theta1b"), theta1),
        (ElementId::new("theta2"), Formula::atom("i")),
        (ElementId::new("phi1"), Formula::or(Formula::atom("c"), Formula::atom("a"))),
        (ElementId::new("phi2"), Formula::and(Formula::atom("f"), Formula::atom("m"))),
        (ElementId::new("phi3"), Formula::atom("b")),
    ]);
    af = af.completed(&fig1_program());
    af
}

/// The running probabilistic program over the reduced environmental base.
pub fn running_program() -> PPreDelpProgram {
    PPreDelpProgram::new(running_em(), fig1_program(), fig4_annotations()).unwrap()
}

/// The running program over the full environmental base.
pub fn example1_program() -> PPreDelpProgram {
    PPreDelpProgram::new(example1_em(), fig1_program(), fig4_annotations()).unwrap()
}

/// The fact and annotation whose addition makes the running program Type II
/// inconsistent.
pub fn extension_input() -> (AmElement, Formula) {
    (AmElement::fact("theta3", nlit("p")), Formula::not(Formula::atom("k")))
}

/// The running program extended with the conflicting fact.
pub fn extended_example_program() -> PPreDelpProgram {
    let (f, note) = extension_input();
    let am = fig1_program().with_element(f.clone()).unwrap();
    let mut af = fig4_annotations();
    af.set(f.id().clone(), note);
    PPreDelpProgram::new(running_em(), am, af).unwrap()
}

pub fn umbrella_em() -> EmKnowledgeBase {
    let u = Universe::props(&["rain", "hail", "wind"]).unwrap();
    let formulas = vec![
        pf(Formula::or(Formula::atom("rain"), Formula::atom("hail")), (5, 10), (1, 10)),
        pf(Formula::and(Formula::atom("rain"), Formula::atom("hail")), (3, 10), (1, 10)),
        pf(Formula::atom("wind"), (2, 10), (0, 1)),
    ];
    EmKnowledgeBase::new(u, vec![], formulas).unwrap()
}

pub fn umbrella_am() -> PreDelpProgram {
    PreDelpProgram::new([
        AmElement::fact("f", lit("umbrella")),
        AmElement::fact("g", nlit("umbrella")),
    ])
    .unwrap()
}

pub fn umbrella_af() -> AnnotationFunction {
    AnnotationFunction::from_pairs([
        (ElementId::new("f"), Formula::or(Formula::atom("rain"), Formula::atom("hail"))),
        (ElementId::new("g"), Formula::atom("wind")),
    ])
}

/// The two-fact weather program whose slices conflict on windy, wet days.
pub fn umbrella_program() -> PPreDelpProgram {
    PPreDelpProgram::new(umbrella_em(), umbrella_am(), umbrella_af()).unwrap()
}
