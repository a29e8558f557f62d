use std::collections::BTreeSet;

use super::postulates::{self, Judge, Outcome};
use super::suite::{self, run_suite};
use super::*;
use crate::fixtures;
use crate::lang::Atom;

fn ids(names: &[&str]) -> BTreeSet<ElementId> {
    names.iter().map(|n| ElementId::new(n)).collect()
}

fn models(p: &PPreDelpProgram, id: &str) -> BTreeSet<World> {
    let f = p.af().get(&ElementId::new(id)).expect("annotation is total");
    p.em().universe().wld(f).expect("annotation compiles").into_iter().collect()
}

#[test]
fn umbrella_candidates_match_the_example() {
    let p = fixtures::umbrella_program();
    let triple = p
        .em()
        .universe()
        .world_from_atoms([&Atom::prop("rain"), &Atom::prop("hail"), &Atom::prop("wind")])
        .unwrap();
    let cands = cand_pgm(&p, triple).unwrap();
    assert_eq!(cands, vec![ids(&["f"]), ids(&["g"])]);
}

#[test]
fn maximal_subsets_account_for_rule_closure() {
    let program = crate::lang::PreDelpProgram::new([
        AmElement::fact("tp", crate::lang::Literal::pos(Atom::prop("p"))),
        AmElement::fact("tnq", crate::lang::Literal::neg(Atom::prop("q"))),
        AmElement::strict_rule(
            "rq",
            crate::lang::Literal::pos(Atom::prop("q")),
            vec![crate::lang::Literal::pos(Atom::prop("p"))],
        )
        .unwrap(),
    ])
    .unwrap();
    let slice: Vec<&AmElement> = program.elements().iter().collect();
    let cands = maximal_consistent_subsets(&slice).unwrap();
    assert_eq!(cands, vec![ids(&["rq", "tnq"]), ids(&["rq", "tp"]), ids(&["tnq", "tp"])]);
}

#[test]
fn selection_prefers_input_then_size_then_ids() {
    let input = ElementId::new("f0");
    let cands = vec![ids(&["a", "b"]), ids(&["f0"]), ids(&["f0", "z"])];
    assert_eq!(default_selection(&cands, &input), ids(&["f0", "z"]));
    let cands = vec![ids(&["c"]), ids(&["a", "b"])];
    assert_eq!(default_selection(&cands, &input), ids(&["a", "b"]));
    let cands = vec![ids(&["b"]), ids(&["a"])];
    assert_eq!(default_selection(&cands, &input), ids(&["a"]));
    assert!(default_selection(&[], &input).is_empty());
}

#[test]
fn revising_the_extension_restores_consistency() {
    let base = fixtures::running_program();
    let (element, annotation) = fixtures::extension_input();
    let input = EpistemicInput::new(element, annotation);

    let expanded = expand(&base, &input).unwrap();
    assert!(!expanded.is_consistent());

    let out = revise(&base, &input).unwrap();
    assert!(out.program.is_consistent());
    assert_eq!(out.worlds.len(), 160);
    for wr in &out.worlds {
        assert!(wr.slice.contains(&ElementId::new("theta1a")));
        assert!(wr.slice.contains(&ElementId::new("theta3")));
        assert_eq!(wr.candidates.len(), 2);
        assert!(wr.chosen.contains(&ElementId::new("theta3")));
        assert!(!wr.chosen.contains(&ElementId::new("theta1a")));
    }

    let repaired: BTreeSet<World> = out.worlds.iter().map(|w| w.world).collect();
    let before = models(&expanded, "theta1a");
    let after = models(&out.program, "theta1a");
    assert_eq!(after, before.difference(&repaired).copied().collect());
    assert_eq!(models(&out.program, "theta1b"), models(&expanded, "theta1b"));
    assert_eq!(models(&out.program, "theta3"), models(&expanded, "theta3"));
}

#[test]
fn revision_repairs_an_inconsistent_base_too() {
    let base = fixtures::umbrella_program();
    assert!(!base.is_consistent());
    let input = EpistemicInput::new(
        AmElement::fact("h0", crate::lang::Literal::pos(Atom::prop("dry"))),
        Formula::True,
    );
    let out = revise(&base, &input).unwrap();
    assert!(out.program.is_consistent());
    assert!(!out.worlds.is_empty());
    for wr in &out.worlds {
        assert!(wr.chosen.contains(&ElementId::new("h0")));
        assert!(wr.candidates.iter().all(|c| c.contains(&ElementId::new("h0"))));
    }
}

#[test]
fn postulates_hold_for_the_default_operator() {
    let base = fixtures::running_program();
    let (element, annotation) = fixtures::extension_input();
    let input = EpistemicInput::new(element, annotation);
    let twin = suite::respell(&input);

    let first = Operator::Default.revise(&base, &input).unwrap();
    let second = Operator::Default.revise(&base, &twin).unwrap();
    let j1 = Judge::new(&base, &input, &first.program).unwrap();
    let j2 = Judge::new(&base, &twin, &second.program).unwrap();

    assert_eq!(j1.inclusion(), Outcome::Holds);
    assert_eq!(j1.vacuity(), Outcome::Vacuous);
    assert_eq!(j1.consistency_preservation(), Outcome::Holds);
    assert_eq!(j1.weak_success(), Outcome::Vacuous);
    assert_eq!(j1.core_retainment(), Outcome::Holds);
    assert_eq!(j1.relevance(), Outcome::Holds);
    assert_eq!(postulates::uniformity1(&j1, &j2), Outcome::Holds);
    assert_eq!(postulates::uniformity2(&j1, &j2), Outcome::Holds);
    assert!(postulates::keeps_maximal_candidates(&j1).unwrap());
    assert!(postulates::shrinks_strict_slices(&j1));
}

#[test]
fn mutants_fail_the_postulates_they_break() {
    let base = fixtures::running_program();
    let (element, annotation) = fixtures::extension_input();
    let conflicting = EpistemicInput::new(element, annotation);

    let out = Operator::NonMaximal.revise(&base, &conflicting).unwrap();
    let j = Judge::new(&base, &conflicting, &out.program).unwrap();
    assert!(matches!(j.core_retainment(), Outcome::Fails(_)));

    let out = Operator::DropInput.revise(&base, &conflicting).unwrap();
    let j = Judge::new(&base, &conflicting, &out.program).unwrap();
    assert!(matches!(j.relevance(), Outcome::Fails(_)));

    let harmless = EpistemicInput::new(
        AmElement::fact("f0", crate::lang::Literal::pos(Atom::prop("fresh"))),
        Formula::True,
    );
    let out = Operator::ExtraWorldDelete.revise(&base, &harmless).unwrap();
    let j = Judge::new(&base, &harmless, &out.program).unwrap();
    assert!(matches!(j.vacuity(), Outcome::Fails(_)));
    assert!(matches!(j.weak_success(), Outcome::Fails(_)));
}

#[test]
fn suite_smoke() {
    let report = run_suite(Operator::Default, 7, 40).unwrap();
    assert!(report.all_hold(), "violated: {:?}", report.violated());
    assert_eq!(report.tally(postulates::Postulate::Inclusion).exercised(), 40);
    assert!(report.tally(postulates::Postulate::CoreRetainment).exercised() > 0);
    assert!(report.retainment_under_maximality_checked > 0);
    assert_eq!(report.retainment_under_maximality_failures, 0);
    assert_eq!(report.uniformity_agreement_failures, 0);

    let report = run_suite(Operator::NonMaximal, 7, 40).unwrap();
    assert!(!report.all_hold());
}
