//! Command implementations. Each command produces an [`Outcome`]
//! carrying the exit code, a stable status word, a JSON result and the
//! human-readable report, so `main` only has to pick a rendering.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use ppredelp::am::{
    dialectical_forest, mark_tree, warrant_status, DefeatKind, DialecticalNode, Mark, Reasoner,
    WarrantStatus,
};
use ppredelp::em::{EmError, EmKnowledgeBase, LpResult, ProbabilisticFormula};
use ppredelp::lang::{
    AnnotationFunction, Atom, IntegrityConstraint, Literal, PreDelpProgram, Universe, World,
};
use ppredelp::pp::PPreDelpProgram;
use ppredelp::revision::{revise, EpistemicInput};

use crate::parse::{
    parse_af, parse_am, parse_element_str, parse_em, parse_formula_str, parse_literal_str,
    parse_world_str, EmFile, ParseError,
};
use crate::print;

/// The result of running a command: exit code, stable status word,
/// JSON payload, human-readable report and diagnostics.
pub struct Outcome {
    pub code: i32,
    pub status: &'static str,
    pub result: Value,
    pub human: String,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn ok(result: Value, human: String) -> Self {
        Outcome { code: 0, status: "ok", result, human, diagnostics: Vec::new() }
    }

    /// The full `--json` envelope.
    pub fn envelope(&self) -> Value {
        json!({
            "status": self.status,
            "result": self.result,
            "diagnostics": self.diagnostics,
        })
    }
}

enum CliError {
    Parse { place: String, err: ParseError },
    Validation(String),
    Inconsistent(String),
    Io(String),
}

impl CliError {
    fn into_outcome(self) -> Outcome {
        let (code, status, message) = match self {
            CliError::Parse { place, err } => (1, "parse-error", format!("{place}: {err}")),
            CliError::Validation(m) => (1, "validation-error", m),
            CliError::Inconsistent(m) => (2, "inconsistent", m),
            CliError::Io(m) => (1, "io-error", m),
        };
        Outcome { code, status, result: Value::Null, human: String::new(), diagnostics: vec![message] }
    }
}

fn validation(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn parse_in<T>(
    path: &Path,
    parse: impl FnOnce(&str) -> Result<T, ParseError>,
) -> Result<T, CliError> {
    let src = read(path)?;
    parse(&src).map_err(|err| CliError::Parse { place: path.display().to_string(), err })
}

fn arg_parse<T>(
    what: &str,
    src: &str,
    parse: impl FnOnce(&str) -> Result<T, ParseError>,
) -> Result<T, CliError> {
    parse(src).map_err(|err| CliError::Parse { place: format!("{what} `{src}`"), err })
}

/// Builds the EM knowledge base over the universe inferred from the EM
/// file itself plus any further atoms the caller needs constrained
/// (annotation formulas, a query formula).
fn build_em(file: &EmFile, extra: BTreeSet<Atom>) -> Result<EmKnowledgeBase, CliError> {
    let mut atoms = extra;
    for st in &file.statements {
        atoms.extend(st.formula.atoms());
    }
    for oo in &file.one_ofs {
        atoms.extend(oo.atoms.iter().cloned());
    }
    let universe = Universe::new(atoms).map_err(validation)?;
    let mut formulas = Vec::new();
    for st in &file.statements {
        let pf = ProbabilisticFormula::new(st.formula.clone(), st.p.clone(), st.eps.clone())
            .map_err(validation)?;
        formulas.push(pf);
    }
    let ics: Vec<IntegrityConstraint> =
        file.one_ofs.iter().map(|oo| IntegrityConstraint::one_of(oo.atoms.iter().cloned())).collect();
    EmKnowledgeBase::new(universe, ics, formulas).map_err(validation)
}

struct Sources {
    em: PathBuf,
    am: PathBuf,
    af: PathBuf,
}

fn build_program(src: &Sources, extra: BTreeSet<Atom>) -> Result<PPreDelpProgram, CliError> {
    let em_file = parse_in(&src.em, parse_em)?;
    let elements = parse_in(&src.am, parse_am)?;
    let entries = parse_in(&src.af, parse_af)?;
    let mut atoms = extra;
    for e in &entries {
        atoms.extend(e.formula.atoms());
    }
    let em = build_em(&em_file, atoms)?;
    let am = PreDelpProgram::new(elements).map_err(validation)?;
    for e in &entries {
        if am.get(&e.label).is_none() {
            return Err(CliError::Validation(format!(
                "{}: line {}: annotation for unknown label `{}`",
                src.af.display(),
                e.line,
                e.label
            )));
        }
    }
    let af = AnnotationFunction::from_pairs(entries.into_iter().map(|e| (e.label, e.formula)));
    PPreDelpProgram::new(em, am, af).map_err(validation)
}

fn world_names(u: &Universe, w: World) -> Vec<String> {
    u.world_atoms(w).iter().map(|a| a.to_string()).collect()
}

fn world_human(u: &Universe, w: World) -> String {
    format!("{{{}}}", world_names(u, w).join(", "))
}

fn world_json(u: &Universe, w: World) -> Value {
    Value::Array(world_names(u, w).into_iter().map(Value::String).collect())
}

fn id_set_human<I: IntoIterator<Item = S>, S: std::fmt::Display>(ids: I) -> String {
    let names: Vec<String> = ids.into_iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", names.join(", "))
}

fn id_set_json<I: IntoIterator<Item = S>, S: std::fmt::Display>(ids: I) -> Value {
    Value::Array(ids.into_iter().map(|i| Value::String(i.to_string())).collect())
}

pub fn check(em: PathBuf, am: PathBuf, af: PathBuf) -> Outcome {
    run(|| {
        let pgm = build_program(&Sources { em, am, af }, BTreeSet::new())?;
        let type_i = pgm.check_type_i();
        let type_ii = pgm.check_type_ii();
        let u = pgm.em().universe();
        let mut human = format!(
            "Type I:  {}\nType II: {}\n",
            if type_i { "PASS" } else { "FAIL" },
            if type_ii { "PASS" } else { "FAIL" },
        );
        let mut offending = Vec::new();
        let mut diagnostics = Vec::new();
        if !type_i {
            diagnostics
                .push("the environmental model admits no probability distribution".to_string());
        }
        if !type_ii {
            for w in pgm.wi() {
                let slice: Vec<_> = pgm.strict_slice(w).iter().map(|e| e.id().clone()).collect();
                human.push_str(&format!(
                    "world {}: contradictory strict slice {}\n",
                    world_human(u, w),
                    id_set_human(&slice)
                ));
                offending.push(json!({
                    "world": world_json(u, w),
                    "slice": id_set_json(&slice),
                }));
            }
            diagnostics.push(format!(
                "{} world(s) can carry positive probability while their strict slice is contradictory",
                offending.len()
            ));
        }
        let result = json!({
            "type_i": type_i,
            "type_ii": type_ii,
            "offending_worlds": offending,
        });
        if type_i && type_ii {
            Ok(Outcome::ok(result, human))
        } else {
            Ok(Outcome { code: 2, status: "inconsistent", result, human, diagnostics })
        }
    })
}

pub fn entail(em: PathBuf, formula: &str) -> Outcome {
    run(|| {
        let q = arg_parse("formula", formula, parse_formula_str)?;
        let file = parse_in(&em, parse_em)?;
        let kb = build_em(&file, q.atoms())?;
        let (p, eps) = match kb.max_entailment(&q) {
            Ok(v) => v,
            Err(EmError::Inconsistent) => {
                return Err(CliError::Inconsistent(
                    "the environmental model admits no probability distribution".to_string(),
                ));
            }
            Err(e) => return Err(validation(e)),
        };
        let human = format!(
            "{} : {} +- {}  ({} +- {})\n",
            q,
            print::rational(&p),
            print::rational(&eps),
            print::decimal6(&p),
            print::decimal6(&eps),
        );
        let result = json!({
            "formula": q.to_string(),
            "p": rational_json(&p),
            "eps": rational_json(&eps),
        });
        Ok(Outcome::ok(result, human))
    })
}

fn rational_json(r: &num_rational::BigRational) -> Value {
    json!({ "exact": print::rational(r), "approx": print::decimal6(r) })
}

pub fn query(em: PathBuf, am: PathBuf, af: PathBuf, literal: &str) -> Outcome {
    run(|| {
        let lit = arg_parse("literal", literal, parse_literal_str)?;
        let pgm = build_program(&Sources { em, am, af }, BTreeSet::new())?;
        require_consistent(&pgm)?;
        let np = pgm.nec_poss(&lit).map_err(validation)?;
        let lower = lp_value(pgm.em().ep_lp_min(&np.nec))?;
        let upper = lp_value(pgm.em().ep_lp_max(&np.poss))?;
        let total = pgm.em().conforming_worlds().len();
        let human = format!(
            "P({}) = [{}, {}]  ([{}, {}])\nnecessary worlds: {} of {}\npossible worlds:  {} of {}\n",
            lit,
            print::rational(&lower),
            print::rational(&upper),
            print::decimal6(&lower),
            print::decimal6(&upper),
            np.nec.len(),
            total,
            np.poss.len(),
            total,
        );
        let result = json!({
            "literal": lit.to_string(),
            "lower": rational_json(&lower),
            "upper": rational_json(&upper),
            "necessary_worlds": np.nec.len(),
            "possible_worlds": np.poss.len(),
            "world_count": total,
        });
        Ok(Outcome::ok(result, human))
    })
}

fn lp_value(r: LpResult) -> Result<num_rational::BigRational, CliError> {
    match r {
        LpResult::Optimal { value, .. } => Ok(value),
        LpResult::Infeasible => Err(CliError::Inconsistent(
            "the environmental model admits no probability distribution".to_string(),
        )),
    }
}

fn require_consistent(pgm: &PPreDelpProgram) -> Result<(), CliError> {
    if !pgm.check_type_i() {
        return Err(CliError::Inconsistent(
            "Type I consistency fails: the environmental model admits no probability distribution"
                .to_string(),
        ));
    }
    if !pgm.check_type_ii() {
        return Err(CliError::Inconsistent(
            "Type II consistency fails: some world with positive probability activates a \
             contradictory strict slice (run `check` for the list)"
                .to_string(),
        ));
    }
    Ok(())
}

pub struct ReviseArgs {
    pub em: PathBuf,
    pub am: PathBuf,
    pub af: PathBuf,
    pub element: String,
    pub annotation: String,
    pub out_af: PathBuf,
    pub out_am: Option<PathBuf>,
}

pub fn revise_cmd(args: ReviseArgs) -> Outcome {
    run(|| {
        let element = arg_parse("element", &args.element, parse_element_str)?;
        let annotation = arg_parse("annotation", &args.annotation, parse_formula_str)?;
        let sources = Sources { em: args.em, am: args.am, af: args.af };
        let pgm = build_program(&sources, annotation.atoms())?;
        require_consistent(&pgm)?;
        let input = EpistemicInput::new(element, annotation);
        let out = revise(&pgm, &input).map_err(validation)?;
        let u = pgm.em().universe();
        let mut human = String::new();
        let mut worlds = Vec::new();
        for wr in &out.worlds {
            let narrowed: Vec<_> = wr.slice.difference(&wr.chosen).cloned().collect();
            human.push_str(&format!(
                "world {}: slice {}, kept {}, narrowed {}\n",
                world_human(u, wr.world),
                id_set_human(&wr.slice),
                id_set_human(&wr.chosen),
                id_set_human(&narrowed),
            ));
            worlds.push(json!({
                "world": world_json(u, wr.world),
                "slice": id_set_json(&wr.slice),
                "kept": id_set_json(&wr.chosen),
                "narrowed": id_set_json(&narrowed),
                "candidates": wr.candidates.len(),
            }));
        }
        if out.worlds.is_empty() {
            human.push_str("no world needed repair\n");
        }
        let af_pairs = out.program.am().elements().iter().map(|e| {
            let f = out.program.af().get(e.id()).expect("total annotation function");
            (e.id(), f)
        });
        write_out(&args.out_af, &print::print_af(af_pairs))?;
        human.push_str(&format!("wrote annotations to {}\n", args.out_af.display()));
        if let Some(out_am) = &args.out_am {
            write_out(out_am, &print::print_am(out.program.am().elements()))?;
            human.push_str(&format!("wrote program to {}\n", out_am.display()));
        }
        let result = json!({
            "worlds": worlds,
            "out_af": args.out_af.display().to_string(),
            "out_am": args.out_am.as_ref().map(|p| p.display().to_string()),
        });
        Ok(Outcome::ok(result, human))
    })
}

fn write_out(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub struct ExplainArgs {
    pub em: PathBuf,
    pub am: PathBuf,
    pub af: PathBuf,
    pub literal: String,
    pub world: Option<String>,
    pub all_worlds: bool,
}

pub fn explain(args: ExplainArgs) -> Outcome {
    run(|| {
        let lit = arg_parse("literal", &args.literal, parse_literal_str)?;
        let sources = Sources { em: args.em, am: args.am, af: args.af };
        let pgm = build_program(&sources, BTreeSet::new())?;
        match (&args.world, args.all_worlds) {
            (Some(w), false) => explain_world(&pgm, &lit, w),
            (None, true) => explain_all(&pgm, &lit),
            _ => Err(CliError::Validation(
                "pass exactly one of --world or --all-worlds".to_string(),
            )),
        }
    })
}

fn status_word(s: WarrantStatus) -> &'static str {
    match s {
        WarrantStatus::Warranted => "warranted",
        WarrantStatus::NotWarranted => "not-warranted",
        WarrantStatus::Undecided => "undecided",
    }
}

fn status_human(lit: &Literal, s: WarrantStatus) -> String {
    match s {
        WarrantStatus::Warranted => format!("{lit} is warranted"),
        WarrantStatus::NotWarranted => {
            format!("{lit} is not warranted: its complement is")
        }
        WarrantStatus::Undecided => {
            format!("{lit} is undecided: neither it nor its complement is warranted")
        }
    }
}

fn explain_world(pgm: &PPreDelpProgram, lit: &Literal, world: &str) -> Result<Outcome, CliError> {
    let atoms = arg_parse("world", world, parse_world_str)?;
    let u = pgm.em().universe();
    let w = u.world_from_atoms(atoms.iter()).map_err(validation)?;
    let restricted = pgm.restricted_program(w);
    let r = Reasoner::new(&restricted).map_err(validation)?;
    let status = warrant_status(&r, lit);
    let forest = dialectical_forest(&r, lit);
    let active: Vec<_> = restricted.elements().iter().map(|e| e.id().clone()).collect();
    let mut human = format!(
        "world {}\nactive elements: {}\n{}\n",
        world_human(u, w),
        id_set_human(&active),
        status_human(lit, status),
    );
    for (i, tree) in forest.iter().enumerate() {
        human.push_str(&format!("tree {}:\n", i + 1));
        print_tree(&mut human, tree, 1);
    }
    let result = json!({
        "world": world_json(u, w),
        "active": id_set_json(&active),
        "literal": lit.to_string(),
        "status": status_word(status),
        "forest": forest.iter().map(tree_json).collect::<Vec<_>>(),
    });
    Ok(Outcome::ok(result, human))
}

fn print_tree(out: &mut String, node: &DialecticalNode, depth: usize) {
    let mark = match mark_tree(node) {
        Mark::Undefeated => "U",
        Mark::Defeated => "D",
    };
    let defeat = match node.defeat {
        None => String::new(),
        Some(DefeatKind::Proper) => " (proper defeater)".to_string(),
        Some(DefeatKind::Blocking) => " (blocking defeater)".to_string(),
    };
    out.push_str(&format!(
        "{}{} {} by {}{}\n",
        "  ".repeat(depth),
        mark,
        node.argument.conclusion,
        id_set_human(&node.argument.support),
        defeat,
    ));
    for child in &node.children {
        print_tree(out, child, depth + 1);
    }
}

fn tree_json(node: &DialecticalNode) -> Value {
    json!({
        "conclusion": node.argument.conclusion.to_string(),
        "support": id_set_json(&node.argument.support),
        "defeat": match node.defeat {
            None => Value::Null,
            Some(DefeatKind::Proper) => Value::String("proper".to_string()),
            Some(DefeatKind::Blocking) => Value::String("blocking".to_string()),
        },
        "mark": match mark_tree(node) {
            Mark::Undefeated => "U",
            Mark::Defeated => "D",
        },
        "children": node.children.iter().map(tree_json).collect::<Vec<_>>(),
    })
}

fn explain_all(pgm: &PPreDelpProgram, lit: &Literal) -> Result<Outcome, CliError> {
    let u = pgm.em().universe();
    let mut rows: Vec<(World, WarrantStatus)> = Vec::new();
    for (_, group) in pgm.world_groups() {
        let restricted = pgm.restricted_program(group[0]);
        let r = Reasoner::new(&restricted).map_err(validation)?;
        let status = warrant_status(&r, lit);
        for &w in &group {
            rows.push((w, status));
        }
    }
    rows.sort_by_key(|&(w, _)| w.0);
    let mut human = format!("{} over {} world(s):\n", lit, rows.len());
    let mut worlds = Vec::new();
    for &(w, status) in &rows {
        human.push_str(&format!("{} : {}\n", world_human(u, w), status_word(status)));
        worlds.push(json!({
            "world": world_json(u, w),
            "status": status_word(status),
        }));
    }
    let result = json!({ "literal": lit.to_string(), "worlds": worlds });
    Ok(Outcome::ok(result, human))
}

fn run(f: impl FnOnce() -> Result<Outcome, CliError>) -> Outcome {
    f().unwrap_or_else(CliError::into_outcome)
}
