//! Shared language layer: atoms, literals, classical formulas, worlds and
//! analytical program elements.
//!
//! The environmental side works with classical formulas over a fixed universe
//! of ground atoms; worlds are subsets of that universe. The analytical side
//! works with literals (atoms with optional strong negation) organised into
//! facts, strict rules, presumptions and defeasible rules.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Errors raised while building or evaluating language objects.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LangError {
    #[error("atom `{0}` is not part of this universe")]
    UnknownAtom(Atom),
    #[error("universe holds at most {max} atoms, got {got}")]
    UniverseTooLarge { max: usize, got: usize },
    #[error("duplicate atom `{0}` in universe")]
    DuplicateAtom(Atom),
    #[error("duplicate element id `{0}`")]
    DuplicateElementId(ElementId),
    #[error("element `{0}` is not ground")]
    NonGroundElement(ElementId),
    #[error("a {0} must not have an empty body")]
    EmptyBody(ElementKind),
    #[error("head variable `{var}` of rule `{id}` does not occur in its body")]
    UnboundHeadVariable { id: ElementId, var: String },
    #[error("element `{0}` contains variables but no constants were declared")]
    NoConstants(ElementId),
    #[error("a program holds at most {max} elements, got {got}")]
    ProgramTooLarge { max: usize, got: usize },
    #[error("unknown element id `{0}`")]
    UnknownElement(ElementId),
    #[error("annotation function misses element `{0}`")]
    MissingAnnotation(ElementId),
}

/// A term: either a constant or a variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(String),
    Var(String),
}

impl Term {
    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => write!(f, "{c}"),
            Term::Var(v) => write!(f, "{v}"),
        }
    }
}

/// A (possibly non-ground) atom: predicate plus argument terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    /// A propositional (0-ary) atom.
    pub fn prop(name: &str) -> Self {
        Atom { predicate: name.to_string(), args: Vec::new() }
    }

    pub fn new(predicate: &str, args: Vec<Term>) -> Self {
        Atom { predicate: predicate.to_string(), args }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| !t.is_var())
    }

    fn substitute(&self, binding: &BTreeMap<String, String>) -> Atom {
        let args = self
            .args
            .iter()
            .map(|t| match t {
                Term::Var(v) => binding
                    .get(v)
                    .map(|c| Term::Const(c.clone()))
                    .unwrap_or_else(|| t.clone()),
                c => c.clone(),
            })
            .collect();
        Atom { predicate: self.predicate.clone(), args }
    }

    fn variables(&self, out: &mut BTreeSet<String>) {
        for t in &self.args {
            if let Term::Var(v) = t {
                out.insert(v.clone());
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// An analytical literal: an atom or its strong negation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { atom, negated: false }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { atom, negated: true }
    }

    /// The complementary literal under strong negation.
    pub fn complement(&self) -> Literal {
        Literal { atom: self.atom.clone(), negated: !self.negated }
    }

    pub fn is_ground(&self) -> bool {
        self.atom.is_ground()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// A classical propositional formula over ground atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Self {
        Formula::Atom(Atom::prop(name))
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Conjunction of a sequence, `True` when empty.
    pub fn conj<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        let mut it = parts.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Every atom occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Compiles the formula against a universe for fast world evaluation.
    pub fn compile(&self, universe: &Universe) -> Result<CompiledFormula, LangError> {
        Ok(match self {
            Formula::True => CompiledFormula::True,
            Formula::False => CompiledFormula::False,
            Formula::Atom(a) => CompiledFormula::Atom(universe.index_of(a)?),
            Formula::Not(f) => CompiledFormula::Not(Box::new(f.compile(universe)?)),
            Formula::And(a, b) => {
                CompiledFormula::And(Box::new(a.compile(universe)?), Box::new(b.compile(universe)?))
            }
            Formula::Or(a, b) => {
                CompiledFormula::Or(Box::new(a.compile(universe)?), Box::new(b.compile(universe)?))
            }
        })
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn prec(f: &Formula) -> u8 {
            match f {
                Formula::Or(..) => 1,
                Formula::And(..) => 2,
                _ => 3,
            }
        }
        fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
            let p = prec(f);
            let parens = p < min;
            if parens {
                write!(out, "(")?;
            }
            match f {
                Formula::True => write!(out, "true")?,
                Formula::False => write!(out, "false")?,
                Formula::Atom(a) => write!(out, "{a}")?,
                Formula::Not(inner) => {
                    write!(out, "!")?;
                    write_at(inner, 3, out)?;
                }
                Formula::And(a, b) => {
                    write_at(a, 2, out)?;
                    write!(out, " & ")?;
                    write_at(b, 3, out)?;
                }
                Formula::Or(a, b) => {
                    write_at(a, 1, out)?;
                    write!(out, " | ")?;
                    write_at(b, 2, out)?;
                }
            }
            if parens {
                write!(out, ")")?;
            }
            Ok(())
        }
        write_at(self, 0, f)
    }
}

/// A formula with atoms resolved to universe indices.
#[derive(Clone, Debug)]
pub enum CompiledFormula {
    True,
    False,
    Atom(AtomId),
    Not(Box<CompiledFormula>),
    And(Box<CompiledFormula>, Box<CompiledFormula>),
    Or(Box<CompiledFormula>, Box<CompiledFormula>),
}

impl CompiledFormula {
    /// Evaluates the formula at a world.
    pub fn sat(&self, world: World) -> bool {
        match self {
            CompiledFormula::True => true,
            CompiledFormula::False => false,
            CompiledFormula::Atom(id) => world.contains(*id),
            CompiledFormula::Not(f) => !f.sat(world),
            CompiledFormula::And(a, b) => a.sat(world) && b.sat(world),
            CompiledFormula::Or(a, b) => a.sat(world) || b.sat(world),
        }
    }
}

/// Index of an atom inside a universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(pub usize);

/// A world: a subset of the universe, stored as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World(pub u64);

impl World {
    pub const EMPTY: World = World(0);

    pub fn contains(&self, id: AtomId) -> bool {
        self.0 & (1 << id.0) != 0
    }

    pub fn with(&self, id: AtomId) -> World {
        World(self.0 | (1 << id.0))
    }

    pub fn atom_count(&self) -> u32 {
        self.0.count_ones()
    }
}

/// An integrity constraint: at most one of the listed atoms holds per world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrityConstraint {
    pub one_of: BTreeSet<Atom>,
}

impl IntegrityConstraint {
    pub fn one_of<I: IntoIterator<Item = Atom>>(atoms: I) -> Self {
        IntegrityConstraint { one_of: atoms.into_iter().collect() }
    }
}

/// The fixed, ordered set of ground atoms a model talks about.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    atoms: Vec<Atom>,
    index: HashMap<Atom, AtomId>,
}

impl Universe {
    pub const MAX_ATOMS: usize = 64;

    /// Builds a universe from ground atoms; order is preserved.
    pub fn new<I: IntoIterator<Item = Atom>>(atoms: I) -> Result<Self, LangError> {
        let atoms: Vec<Atom> = atoms.into_iter().collect();
        if atoms.len() > Self::MAX_ATOMS {
            return Err(LangError::UniverseTooLarge { max: Self::MAX_ATOMS, got: atoms.len() });
        }
        let mut index = HashMap::new();
        for (i, a) in atoms.iter().enumerate() {
            if index.insert(a.clone(), AtomId(i)).is_some() {
                return Err(LangError::DuplicateAtom(a.clone()));
            }
        }
        Ok(Universe { atoms, index })
    }

    /// Universe of propositional atoms with the given names.
    pub fn props(names: &[&str]) -> Result<Self, LangError> {
        Self::new(names.iter().map(|n| Atom::prop(n)))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn index_of(&self, atom: &Atom) -> Result<AtomId, LangError> {
        self.index.get(atom).copied().ok_or_else(|| LangError::UnknownAtom(atom.clone()))
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.index.contains_key(atom)
    }

    /// The atoms of a world, in universe order.
    pub fn world_atoms(&self, world: World) -> Vec<&Atom> {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| world.contains(AtomId(*i)))
            .map(|(_, a)| a)
            .collect()
    }

    /// Builds a world from its member atoms.
    pub fn world_from_atoms<'a, I: IntoIterator<Item = &'a Atom>>(
        &self,
        atoms: I,
    ) -> Result<World, LangError> {
        let mut w = World::EMPTY;
        for a in atoms {
            w = w.with(self.index_of(a)?);
        }
        Ok(w)
    }

    /// Checks satisfaction of a formula at a world.
    ///
    /// Fails when the formula mentions an atom outside this universe.
    pub fn satisfies(&self, world: World, formula: &Formula) -> Result<bool, LangError> {
        Ok(match formula {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => world.contains(self.index_of(a)?),
            Formula::Not(f) => !self.satisfies(world, f)?,
            Formula::And(a, b) => self.satisfies(world, a)? && self.satisfies(world, b)?,
            Formula::Or(a, b) => self.satisfies(world, a)? || self.satisfies(world, b)?,
        })
    }

    /// All worlds over the universe, ascending by bitmask.
    pub fn all_worlds(&self) -> impl Iterator<Item = World> {
        (0u64..(1u64 << self.atoms.len())).map(World)
    }

    /// All worlds conforming to the integrity constraints, ascending.
    pub fn enumerate_worlds(
        &self,
        ics: &[IntegrityConstraint],
    ) -> Result<Vec<World>, LangError> {
        let mut masks = Vec::with_capacity(ics.len());
        for ic in ics {
            let mut m = 0u64;
            for a in &ic.one_of {
                m |= 1 << self.index_of(a)?.0;
            }
            masks.push(m);
        }
        Ok(self
            .all_worlds()
            .filter(|w| masks.iter().all(|m| (w.0 & m).count_ones() <= 1))
            .collect())
    }

    /// The set of worlds satisfying a formula, over all worlds of the universe.
    pub fn wld(&self, formula: &Formula) -> Result<Vec<World>, LangError> {
        let compiled = formula.compile(self)?;
        Ok(self.all_worlds().filter(|w| compiled.sat(*w)).collect())
    }

    /// The characteristic conjunction of a world: every member atom positively,
    /// every other atom negated, in universe order.
    pub fn formula_for_world(&self, world: World) -> Formula {
        Formula::conj(self.atoms.iter().enumerate().map(|(i, a)| {
            if world.contains(AtomId(i)) {
                Formula::Atom(a.clone())
            } else {
                Formula::not(Formula::Atom(a.clone()))
            }
        }))
    }
}

/// Identifier of an analytical program element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub String);

impl ElementId {
    pub fn new(s: &str) -> Self {
        ElementId(s.to_string())
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The four element kinds of an analytical program.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementKind {
    Fact,
    StrictRule,
    Presumption,
    DefeasibleRule,
}

impl ElementKind {
    /// Facts and strict rules form the strict part of a program.
    pub fn is_strict(&self) -> bool {
        matches!(self, ElementKind::Fact | ElementKind::StrictRule)
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ElementKind::Fact => "fact",
            ElementKind::StrictRule => "strict rule",
            ElementKind::Presumption => "presumption",
            ElementKind::DefeasibleRule => "defeasible rule",
        };
        write!(f, "{s}")
    }
}

/// One element of an analytical program.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AmElement {
    id: ElementId,
    kind: ElementKind,
    head: Literal,
    body: Vec<Literal>,
}

impl AmElement {
    pub fn fact(id: &str, head: Literal) -> Self {
        AmElement { id: ElementId::new(id), kind: ElementKind::Fact, head, body: Vec::new() }
    }

    pub fn presumption(id: &str, head: Literal) -> Self {
        AmElement { id: ElementId::new(id), kind: ElementKind::Presumption, head, body: Vec::new() }
    }

    pub fn strict_rule(id: &str, head: Literal, body: Vec<Literal>) -> Result<Self, LangError> {
        if body.is_empty() {
            return Err(LangError::EmptyBody(ElementKind::StrictRule));
        }
        Ok(AmElement { id: ElementId::new(id), kind: ElementKind::StrictRule, head, body })
    }

    pub fn defeasible_rule(id: &str, head: Literal, body: Vec<Literal>) -> Result<Self, LangError> {
        if body.is_empty() {
            return Err(LangError::EmptyBody(ElementKind::DefeasibleRule));
        }
        Ok(AmElement { id: ElementId::new(id), kind: ElementKind::DefeasibleRule, head, body })
    }

    pub fn id(&self) -> &ElementId {
        &self.id
    }

    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    pub fn head(&self) -> &Literal {
        &self.head
    }

    pub fn body(&self) -> &[Literal] {
        &self.body
    }

    pub fn is_ground(&self) -> bool {
        self.head.is_ground() && self.body.iter().all(Literal::is_ground)
    }

    fn variables(&self) -> BTreeSet<String> {
        let mut vars = BTreeSet::new();
        self.head.atom.variables(&mut vars);
        for b in &self.body {
            b.atom.variables(&mut vars);
        }
        vars
    }

    fn substitute(&self, binding: &BTreeMap<String, String>) -> AmElement {
        let suffix: String =
            binding.values().map(|c| format!("_{c}")).collect::<Vec<_>>().join("");
        AmElement {
            id: ElementId(format!("{}{}", self.id.0, suffix)),
            kind: self.kind,
            head: Literal {
                atom: self.head.atom.substitute(binding),
                negated: self.head.negated,
            },
            body: self
                .body
                .iter()
                .map(|l| Literal { atom: l.atom.substitute(binding), negated: l.negated })
                .collect(),
        }
    }
}

impl fmt::Display for AmElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.id, self.head)?;
        match self.kind {
            ElementKind::Fact => {}
            ElementKind::Presumption => write!(f, " -<")?,
            ElementKind::StrictRule | ElementKind::DefeasibleRule => {
                let op = if self.kind == ElementKind::StrictRule { "<-" } else { "-<" };
                write!(f, " {op} ")?;
                for (i, b) in self.body.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{b}")?;
                }
            }
        }
        write!(f, ".")
    }
}

/// A ground analytical program with unique element ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreDelpProgram {
    elements: Vec<AmElement>,
    by_id: HashMap<ElementId, usize>,
}

impl PreDelpProgram {
    pub const MAX_ELEMENTS: usize = 64;

    pub fn new<I: IntoIterator<Item = AmElement>>(elements: I) -> Result<Self, LangError> {
        let elements: Vec<AmElement> = elements.into_iter().collect();
        if elements.len() > Self::MAX_ELEMENTS {
            return Err(LangError::ProgramTooLarge {
                max: Self::MAX_ELEMENTS,
                got: elements.len(),
            });
        }
        let mut by_id = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if !e.is_ground() {
                return Err(LangError::NonGroundElement(e.id.clone()));
            }
            if by_id.insert(e.id.clone(), i).is_some() {
                return Err(LangError::DuplicateElementId(e.id.clone()));
            }
        }
        Ok(PreDelpProgram { elements, by_id })
    }

    pub fn empty() -> Self {
        PreDelpProgram { elements: Vec::new(), by_id: HashMap::new() }
    }

    pub fn elements(&self) -> &[AmElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, id: &ElementId) -> Option<&AmElement> {
        self.by_id.get(id).map(|&i| &self.elements[i])
    }

    pub fn index_of(&self, id: &ElementId) -> Result<usize, LangError> {
        self.by_id.get(id).copied().ok_or_else(|| LangError::UnknownElement(id.clone()))
    }

    pub fn of_kind(&self, kind: ElementKind) -> impl Iterator<Item = &AmElement> {
        self.elements.iter().filter(move |e| e.kind == kind)
    }

    /// Facts and strict rules.
    pub fn strict_elements(&self) -> impl Iterator<Item = &AmElement> {
        self.elements.iter().filter(|e| e.kind.is_strict())
    }

    /// The program extended with one more element.
    pub fn with_element(&self, element: AmElement) -> Result<Self, LangError> {
        let mut elems = self.elements.clone();
        elems.push(element);
        Self::new(elems)
    }

    /// Restriction to the elements with the given ids, preserving order.
    pub fn restrict(&self, ids: &BTreeSet<ElementId>) -> Result<Self, LangError> {
        for id in ids {
            self.index_of(id)?;
        }
        let elements: Vec<AmElement> =
            self.elements.iter().filter(|e| ids.contains(&e.id)).cloned().collect();
        Self::new(elements)
    }
}

/// An analytical program that may still contain variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchematicProgram {
    elements: Vec<AmElement>,
}

impl SchematicProgram {
    pub fn new<I: IntoIterator<Item = AmElement>>(elements: I) -> Result<Self, LangError> {
        let elements: Vec<AmElement> = elements.into_iter().collect();
        let mut seen = BTreeSet::new();
        for e in &elements {
            if !seen.insert(e.id.clone()) {
                return Err(LangError::DuplicateElementId(e.id.clone()));
            }
        }
        Ok(SchematicProgram { elements })
    }

    pub fn elements(&self) -> &[AmElement] {
        &self.elements
    }

    /// Grounds every element over the given constants.
    ///
    /// Rule head variables must occur in the rule body; schematic facts and
    /// presumptions are enumerated over all constants. Instance ids are the
    /// schematic id suffixed with the substituted constants in variable-name
    /// order.
    pub fn ground(&self, constants: &[&str]) -> Result<PreDelpProgram, LangError> {
        let mut out = Vec::new();
        for e in &self.elements {
            let vars = e.variables();
            if vars.is_empty() {
                out.push(e.clone());
                continue;
            }
            if e.kind != ElementKind::Fact && e.kind != ElementKind::Presumption {
                let mut body_vars = BTreeSet::new();
                for b in &e.body {
                    b.atom.variables(&mut body_vars);
                }
                let mut head_vars = BTreeSet::new();
                e.head.atom.variables(&mut head_vars);
                if let Some(v) = head_vars.difference(&body_vars).next() {
                    return Err(LangError::UnboundHeadVariable {
                        id: e.id.clone(),
                        var: v.clone(),
                    });
                }
            }
            if constants.is_empty() {
                return Err(LangError::NoConstants(e.id.clone()));
            }
            let vars: Vec<String> = vars.into_iter().collect();
            let mut counters = vec![0usize; vars.len()];
            loop {
                let binding: BTreeMap<String, String> = vars
                    .iter()
                    .zip(&counters)
                    .map(|(v, &c)| (v.clone(), constants[c].to_string()))
                    .collect();
                out.push(e.substitute(&binding));
                let mut i = 0;
                loop {
                    if i == counters.len() {
                        break;
                    }
                    counters[i] += 1;
                    if counters[i] < constants.len() {
                        break;
                    }
                    counters[i] = 0;
                    i += 1;
                }
                if i == counters.len() {
                    break;
                }
            }
        }
        PreDelpProgram::new(out)
    }
}

/// A total map from analytical elements to environmental formulas.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AnnotationFunction {
    map: BTreeMap<ElementId, Formula>,
}

impl AnnotationFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (ElementId, Formula)>>(pairs: I) -> Self {
        AnnotationFunction { map: pairs.into_iter().collect() }
    }

    pub fn set(&mut self, id: ElementId, f: Formula) {
        self.map.insert(id, f);
    }

    pub fn get(&self, id: &ElementId) -> Option<&Formula> {
        self.map.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ElementId, &Formula)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Checks the function covers every element of the program.
    pub fn check_total(&self, program: &PreDelpProgram) -> Result<(), LangError> {
        for e in program.elements() {
            if !self.map.contains_key(e.id()) {
                return Err(LangError::MissingAnnotation(e.id().clone()));
            }
        }
        Ok(())
    }

    /// A copy annotating every element of `program` not yet covered with `True`.
    pub fn completed(&self, program: &PreDelpProgram) -> AnnotationFunction {
        let mut map = self.map.clone();
        for e in program.elements() {
            map.entry(e.id().clone()).or_insert(Formula::True);
        }
        AnnotationFunction { map }
    }
}
