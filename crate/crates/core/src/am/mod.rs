//! Analytical model: defeasible derivation, arguments, attack, preference and
//! defeat over a ground program.
//!
//! The [`Reasoner`] interns a program's literals and elements into bitmasks
//! once, then answers every structural question by exact enumeration. A
//! memoized derivability check keeps the specificity quantifiers affordable;
//! no approximation is involved anywhere.

mod tree;

pub use tree::{DialecticalNode, Mark, WarrantStatus};

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::lang::{AmElement, ElementId, ElementKind, LangError, Literal, PreDelpProgram};

/// Errors raised by the analytical engine.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AmError {
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error("program interns at most {max} distinct literals, got {got}")]
    TooManyLiterals { max: usize, got: usize },
    #[error("argument does not belong to this program")]
    ForeignArgument,
}

/// An argument: a minimal support set together with its conclusion.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Argument {
    pub support: BTreeSet<ElementId>,
    pub conclusion: Literal,
}

impl Argument {
    pub fn new<I: IntoIterator<Item = ElementId>>(support: I, conclusion: Literal) -> Self {
        Argument { support: support.into_iter().collect(), conclusion }
    }

    /// Whether `self` is a subargument of `other` (support inclusion).
    pub fn is_subargument_of(&self, other: &Argument) -> bool {
        self.support.is_subset(&other.support)
    }

    /// The members of the given kind, relative to a program.
    pub fn members_of_kind(
        &self,
        program: &PreDelpProgram,
        kind: ElementKind,
    ) -> BTreeSet<ElementId> {
        self.support
            .iter()
            .filter(|id| program.get(id).map(|e| e.kind() == kind).unwrap_or(false))
            .cloned()
            .collect()
    }

    /// Whether the argument rests on at least one presumption.
    pub fn is_presumptive(&self, program: &PreDelpProgram) -> bool {
        self.support
            .iter()
            .any(|id| program.get(id).map(|e| e.kind() == ElementKind::Presumption).unwrap_or(false))
    }
}

/// How an attacker relates to the argument it defeats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DefeatKind {
    Proper,
    Blocking,
}

/// A fixed-capacity literal bitset; programs intern at most 256 literals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub(crate) struct LitSet([u64; 4]);

impl LitSet {
    pub const CAPACITY: usize = 256;

    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn is_subset(&self, other: &LitSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn singleton(i: usize) -> LitSet {
        let mut s = LitSet::default();
        s.insert(i);
        s
    }
}

/// Internal argument representation over interned indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Arg {
    pub mask: u64,
    pub concl: usize,
}

/// Structural reasoner over one ground program.
pub struct Reasoner<'p> {
    program: &'p PreDelpProgram,
    lits: Vec<Literal>,
    lit_of: HashMap<Literal, usize>,
    head: Vec<usize>,
    body: Vec<LitSet>,
    body_lits: Vec<Vec<usize>>,
    strict_mask: u64,
    strict_rule_mask: u64,
    defeasible_rule_mask: u64,
    presumption_mask: u64,
    complement: Vec<Option<usize>>,
    args: Vec<Arg>,
    public_args: Vec<Argument>,
    derivable: LitSet,
    preferred_memo: RefCell<HashMap<(usize, usize), bool>>,
    defeat_memo: RefCell<HashMap<(usize, usize), Option<DefeatKind>>>,
}

impl<'p> Reasoner<'p> {
    pub fn new(program: &'p PreDelpProgram) -> Result<Self, AmError> {
        let mut lits: Vec<Literal> = Vec::new();
        let mut lit_of: HashMap<Literal, usize> = HashMap::new();
        let intern = |l: &Literal, lits: &mut Vec<Literal>, lit_of: &mut HashMap<Literal, usize>| {
            if let Some(&i) = lit_of.get(l) {
                i
            } else {
                let i = lits.len();
                lits.push(l.clone());
                lit_of.insert(l.clone(), i);
                i
            }
        };
        for e in program.elements() {
            for l in std::iter::once(e.head()).chain(e.body()) {
                intern(l, &mut lits, &mut lit_of);
                intern(&l.complement(), &mut lits, &mut lit_of);
            }
        }
        if lits.len() > LitSet::CAPACITY {
            return Err(AmError::TooManyLiterals { max: LitSet::CAPACITY, got: lits.len() });
        }
        let mut head = Vec::with_capacity(program.len());
        let mut body = Vec::with_capacity(program.len());
        let mut body_lits = Vec::with_capacity(program.len());
        let mut strict_mask = 0u64;
        let mut strict_rule_mask = 0u64;
        let mut defeasible_rule_mask = 0u64;
        let mut presumption_mask = 0u64;
        for (i, e) in program.elements().iter().enumerate() {
            head.push(lit_of[e.head()]);
            let mut b = LitSet::default();
            let mut bl = Vec::new();
            for l in e.body() {
                let idx = lit_of[l];
                b.insert(idx);
                bl.push(idx);
            }
            body.push(b);
            body_lits.push(bl);
            match e.kind() {
                ElementKind::Fact => strict_mask |= 1 << i,
                ElementKind::StrictRule => {
                    strict_mask |= 1 << i;
                    strict_rule_mask |= 1 << i;
                }
                ElementKind::Presumption => presumption_mask |= 1 << i,
                ElementKind::DefeasibleRule => defeasible_rule_mask |= 1 << i,
            }
        }
        let complement = lits.iter().map(|l| lit_of.get(&l.complement()).copied()).collect();
        let mut reasoner = Reasoner {
            program,
            lits,
            lit_of,
            head,
            body,
            body_lits,
            strict_mask,
            strict_rule_mask,
            defeasible_rule_mask,
            presumption_mask,
            complement,
            args: Vec::new(),
            public_args: Vec::new(),
            derivable: LitSet::default(),
            preferred_memo: RefCell::new(HashMap::new()),
            defeat_memo: RefCell::new(HashMap::new()),
        };
        let full = reasoner.full_mask();
        reasoner.derivable = reasoner.closure(full, LitSet::default());
        reasoner.compute_arguments();
        Ok(reasoner)
    }

    pub fn program(&self) -> &PreDelpProgram {
        self.program
    }

    fn full_mask(&self) -> u64 {
        if self.program.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.program.len()) - 1
        }
    }

    fn mask_of(&self, ids: &BTreeSet<ElementId>) -> Result<u64, AmError> {
        let mut mask = 0u64;
        for id in ids {
            mask |= 1 << self.program.index_of(id)?;
        }
        Ok(mask)
    }

    fn ids_of(&self, mask: u64) -> BTreeSet<ElementId> {
        self.program
            .elements()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, e)| e.id().clone())
            .collect()
    }

    /// Forward-chaining closure of the elements in `mask` seeded with literals.
    fn closure(&self, mask: u64, seed: LitSet) -> LitSet {
        let mut lits = seed;
        loop {
            let mut changed = false;
            let mut rest = mask;
            while rest != 0 {
                let e = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if !lits.contains(self.head[e]) && self.body[e].is_subset(&lits) {
                    lits.insert(self.head[e]);
                    changed = true;
                }
            }
            if !changed {
                return lits;
            }
        }
    }

    fn derives(&self, mask: u64, seed: LitSet, lit: usize) -> bool {
        self.closure(mask, seed).contains(lit)
    }

    fn closure_contradictory(&self, mask: u64, seed: LitSet) -> bool {
        let c = self.closure(mask, seed);
        (0..self.lits.len()).any(|i| {
            c.contains(i) && self.complement[i].map(|j| j > i && c.contains(j)).unwrap_or(false)
        })
    }

    /// Whether the element set defeasibly derives the literal.
    pub fn defeasibly_derives(&self, ids: &BTreeSet<ElementId>, lit: &Literal) -> Result<bool, AmError> {
        let mask = self.mask_of(ids)?;
        Ok(self.lit_of.get(lit).map(|&i| self.derives(mask, LitSet::default(), i)).unwrap_or(false))
    }

    /// Whether the element set derives a complementary pair of literals.
    pub fn is_contradictory(&self, ids: &BTreeSet<ElementId>) -> Result<bool, AmError> {
        let mask = self.mask_of(ids)?;
        Ok(self.closure_contradictory(mask, LitSet::default()))
    }

    /// All literals with a defeasible derivation from the whole program.
    pub fn derivable_literals(&self) -> Vec<Literal> {
        (0..self.lits.len()).filter(|&i| self.derivable.contains(i)).map(|i| self.lits[i].clone()).collect()
    }

    /// Minimal supports for every derivable literal, as an argument fixpoint.
    fn compute_arguments(&mut self) {
        let n_lits = self.lits.len();
        let mut supports: Vec<Vec<u64>> = vec![Vec::new(); n_lits];
        loop {
            let mut changed = false;
            for (e, &h) in self.head.iter().enumerate() {
                let mut combos: Vec<u64> = vec![1 << e];
                let mut dead = false;
                for &b in &self.body_lits[e] {
                    if supports[b].is_empty() {
                        dead = true;
                        break;
                    }
                    let mut next = Vec::with_capacity(combos.len() * supports[b].len());
                    for &c in &combos {
                        for &s in &supports[b] {
                            next.push(c | s);
                        }
                    }
                    combos = next;
                }
                if dead {
                    continue;
                }
                for c in combos {
                    changed |= insert_minimal(&mut supports[h], c);
                }
            }
            if !changed {
                break;
            }
        }
        let mut args = Vec::new();
        for (h, masks) in supports.iter().enumerate() {
            for &mask in masks {
                if !self.closure_contradictory(self.strict_mask | mask, LitSet::default()) {
                    args.push(Arg { mask, concl: h });
                }
            }
        }
        args.sort_by_key(|a| (a.concl, a.mask));
        self.public_args = args
            .iter()
            .map(|a| Argument { support: self.ids_of(a.mask), conclusion: self.lits[a.concl].clone() })
            .collect();
        self.args = args;
    }

    /// Every argument of the program, ordered by conclusion then support.
    pub fn arguments(&self) -> &[Argument] {
        &self.public_args
    }

    /// The arguments concluding exactly `lit`.
    pub fn arguments_for(&self, lit: &Literal) -> Vec<&Argument> {
        self.public_args.iter().filter(|a| &a.conclusion == lit).collect()
    }

    pub(crate) fn internal_args(&self) -> &[Arg] {
        &self.args
    }

    pub(crate) fn index_of_argument(&self, a: &Argument) -> Result<usize, AmError> {
        let mask = self.mask_of(&a.support)?;
        let concl = *self.lit_of.get(&a.conclusion).ok_or(AmError::ForeignArgument)?;
        self.args
            .iter()
            .position(|x| x.mask == mask && x.concl == concl)
            .ok_or(AmError::ForeignArgument)
    }

    pub(crate) fn public_argument(&self, i: usize) -> &Argument {
        &self.public_args[i]
    }

    /// The subargument points of `target` attacked by `attacker`.
    ///
    /// A point is a subargument whose conclusion, taken together with the
    /// attacker's conclusion and both arguments' strict members, yields a
    /// contradiction.
    pub(crate) fn attack_points(&self, attacker: usize, target: usize) -> Vec<usize> {
        let at = self.args[attacker];
        let tg = self.args[target];
        let strict = (at.mask | tg.mask) & self.strict_mask;
        let mut points = Vec::new();
        for (i, sub) in self.args.iter().enumerate() {
            if sub.mask & !tg.mask != 0 {
                continue;
            }
            let mut seed = LitSet::singleton(at.concl);
            seed.insert(sub.concl);
            if self.closure_contradictory(strict, seed) {
                points.push(i);
            }
        }
        points
    }

    /// Whether `attacker` counterargues `target`.
    pub fn attacks(&self, attacker: &Argument, target: &Argument) -> Result<bool, AmError> {
        let a = self.index_of_argument(attacker)?;
        let t = self.index_of_argument(target)?;
        Ok(!self.attack_points(a, t).is_empty())
    }

    fn preferred_ps_idx(&self, a1: usize, a2: usize) -> bool {
        let m1 = self.args[a1].mask;
        let m2 = self.args[a2].mask;
        let l1 = self.args[a1].concl;
        let l2 = self.args[a2].concl;
        let om = (m1 | m2) & self.strict_rule_mask;
        let d1 = m1 & self.defeasible_rule_mask;
        let d2 = m2 & self.defeasible_rule_mask;
        // Quantification over H subsets of the derivable literals can be
        // restricted to literals relevant to the pair: body literals of both
        // arguments' rules plus the two conclusions. Any other literal never
        // fires a rule in the checked derivations, so adding it changes none
        // of the conditions.
        let mut relevant: Vec<usize> = Vec::new();
        let mut rest = om | d1 | d2;
        let mut seen = LitSet::default();
        let push = |i: usize, relevant: &mut Vec<usize>, seen: &mut LitSet| {
            if self.derivable.contains(i) && !seen.contains(i) {
                seen.insert(i);
                relevant.push(i);
            }
        };
        while rest != 0 {
            let e = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            for &b in &self.body_lits[e] {
                push(b, &mut relevant, &mut seen);
            }
        }
        push(l1, &mut relevant, &mut seen);
        push(l2, &mut relevant, &mut seen);

        let mut cond1 = true;
        let mut cond2 = false;
        for bits in 0u64..(1 << relevant.len()) {
            let mut h = LitSet::default();
            for (k, &lit) in relevant.iter().enumerate() {
                if bits & (1 << k) != 0 {
                    h.insert(lit);
                }
            }
            if self.closure_contradictory(om, h) {
                continue;
            }
            if cond1
                && self.derives(om | d1, h, l1)
                && !self.derives(om, h, l1)
                && !self.derives(om | d2, h, l2)
            {
                cond1 = false;
            }
            if !cond2
                && self.derives(om | d2, h, l2)
                && !self.derives(om, h, l2)
                && !self.derives(om | d1, h, l1)
            {
                cond2 = true;
            }
            if !cond1 && cond2 {
                break;
            }
        }
        cond1 && cond2
    }

    /// Generalized specificity: strictly more specific use of information.
    pub fn preferred_ps(&self, a1: &Argument, a2: &Argument) -> Result<bool, AmError> {
        let i = self.index_of_argument(a1)?;
        let j = self.index_of_argument(a2)?;
        Ok(self.preferred_ps_idx(i, j))
    }

    pub(crate) fn preferred_idx(&self, a1: usize, a2: usize) -> bool {
        if let Some(&v) = self.preferred_memo.borrow().get(&(a1, a2)) {
            return v;
        }
        let p1 = self.args[a1].mask & self.presumption_mask;
        let p2 = self.args[a2].mask & self.presumption_mask;
        let v = match (p1 == 0, p2 == 0) {
            (true, true) => self.preferred_ps_idx(a1, a2),
            (true, false) => true,
            (false, true) => false,
            (false, false) => {
                (p1 & !p2 == 0 && p1 != p2) || (p1 == p2 && self.preferred_ps_idx(a1, a2))
            }
        };
        self.preferred_memo.borrow_mut().insert((a1, a2), v);
        v
    }

    /// Presumption-enabled preference between two arguments.
    pub fn preferred(&self, a1: &Argument, a2: &Argument) -> Result<bool, AmError> {
        let i = self.index_of_argument(a1)?;
        let j = self.index_of_argument(a2)?;
        Ok(self.preferred_idx(i, j))
    }

    pub(crate) fn defeats_idx(&self, attacker: usize, target: usize) -> Option<DefeatKind> {
        if let Some(&v) = self.defeat_memo.borrow().get(&(attacker, target)) {
            return v;
        }
        let points = self.attack_points(attacker, target);
        let mut kind = None;
        for p in &points {
            if self.preferred_idx(attacker, *p) {
                kind = Some(DefeatKind::Proper);
                break;
            }
        }
        if kind.is_none() {
            for p in &points {
                if !self.preferred_idx(*p, attacker) {
                    kind = Some(DefeatKind::Blocking);
                    break;
                }
            }
        }
        self.defeat_memo.borrow_mut().insert((attacker, target), kind);
        kind
    }

    /// Defeat status of an attack, judged at the attacked subargument.
    ///
    /// Proper when the attacker is preferred to some attacked subargument,
    /// blocking when some attacked subargument and the attacker are mutually
    /// unpreferred, and no defeat when every attacked point is preferred to
    /// the attacker.
    pub fn defeats(&self, attacker: &Argument, target: &Argument) -> Result<Option<DefeatKind>, AmError> {
        let a = self.index_of_argument(attacker)?;
        let t = self.index_of_argument(target)?;
        Ok(self.defeats_idx(a, t))
    }

    pub(crate) fn presumption_heads(&self, mask: u64) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut rest = mask & self.presumption_mask;
        while rest != 0 {
            let e = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out.insert(self.head[e]);
        }
        out
    }

    pub(crate) fn complement_of(&self, lit: usize) -> Option<usize> {
        self.complement[lit]
    }

    pub(crate) fn line_union_contradictory(&self, union_mask: u64) -> bool {
        self.closure_contradictory(self.strict_mask | union_mask, LitSet::default())
    }

    pub(crate) fn literal_index(&self, lit: &Literal) -> Option<usize> {
        self.lit_of.get(lit).copied()
    }

}

/// Convenience wrapper building a fresh reasoner for one query.
pub fn build_arguments(program: &PreDelpProgram, lit: &Literal) -> Result<Vec<Argument>, AmError> {
    let r = Reasoner::new(program)?;
    Ok(r.arguments_for(lit).into_iter().cloned().collect())
}

/// Classical consistency of a set of facts and strict rules: their closure
/// derives no complementary pair.
pub fn classically_consistent(elements: &[&AmElement]) -> bool {
    let mut lits: BTreeSet<Literal> = BTreeSet::new();
    loop {
        let mut added = false;
        for e in elements {
            if !lits.contains(e.head()) && e.body().iter().all(|b| lits.contains(b)) {
                lits.insert(e.head().clone());
                added = true;
            }
        }
        if !added {
            break;
        }
    }
    !lits.iter().any(|l| lits.contains(&l.complement()))
}

/// Keeps `set` an antichain of minimal masks; returns whether `mask` was added.
fn insert_minimal(set: &mut Vec<u64>, mask: u64) -> bool {
    if set.iter().any(|&s| s & !mask == 0) {
        return false;
    }
    set.retain(|&s| mask & !s != 0);
    set.push(mask);
    true
}

/// The views of an argument over a program: facts, strict rules, presumptions
/// and defeasible rules of its support.
pub fn support_views(
    program: &PreDelpProgram,
    a: &Argument,
) -> (BTreeSet<ElementId>, BTreeSet<ElementId>, BTreeSet<ElementId>, BTreeSet<ElementId>) {
    (
        a.members_of_kind(program, ElementKind::Fact),
        a.members_of_kind(program, ElementKind::StrictRule),
        a.members_of_kind(program, ElementKind::Presumption),
        a.members_of_kind(program, ElementKind::DefeasibleRule),
    )
}

/// Elements of the strict part of a program, as ids.
pub fn strict_ids(program: &PreDelpProgram) -> BTreeSet<ElementId> {
    program.strict_elements().map(|e| e.id().clone()).collect()
}

pub use tree::{build_dialectical_trees, dialectical_forest, is_warranted, mark_tree, warrant_status};

/// Helper for constructing elements in tests and fixtures.
pub fn element(id: &str, kind: ElementKind, head: Literal, body: Vec<Literal>) -> AmElement {
    match kind {
        ElementKind::Fact => AmElement::fact(id, head),
        ElementKind::Presumption => AmElement::presumption(id, head),
        ElementKind::StrictRule => AmElement::strict_rule(id, head, body).expect("nonempty body"),
        ElementKind::DefeasibleRule => {
            AmElement::defeasible_rule(id, head, body).expect("nonempty body")
        }
    }
}
