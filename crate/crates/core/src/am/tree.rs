//! Dialectical trees, forests, marking and warrant.
//!
//! A tree is built from every acceptable argumentation line rooted in one
//! argument. A line is acceptable when no argument is a subargument of an
//! earlier one, the supporting (even depth) and interfering (odd depth)
//! arguments are each concordant with the strict part, and a blocking
//! defeater is only ever followed by a proper defeater. Presumptions used at
//! even (respectively odd) levels of a whole tree must be jointly consistent;
//! when they are not, the tree splits into one tree per maximal consistent
//! selection, yielding a forest.

use std::collections::BTreeSet;

use crate::lang::Literal;

use super::{AmError, Argument, DefeatKind, Reasoner};

/// The label assigned to a node of a marked dialectical tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mark {
    Undefeated,
    Defeated,
}

/// The answer for a literal: itself warranted, its complement warranted, or
/// neither.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WarrantStatus {
    Warranted,
    NotWarranted,
    Undecided,
}

/// A node of a dialectical tree. Non-root nodes record how they defeat their
/// parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DialecticalNode {
    pub argument: Argument,
    pub defeat: Option<DefeatKind>,
    pub children: Vec<DialecticalNode>,
}

impl DialecticalNode {
    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.node_count()).sum::<usize>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Node {
    arg: usize,
    defeat: Option<DefeatKind>,
    children: Vec<Node>,
}

fn build_raw(
    r: &Reasoner,
    path: &mut Vec<(usize, Option<DefeatKind>)>,
    even_mask: u64,
    odd_mask: u64,
) -> Node {
    let (current, entered) = *path.last().expect("path is never empty");
    let depth = path.len() - 1;
    let child_even = (depth + 1) % 2 == 0;
    let mut children = Vec::new();
    for c in 0..r.internal_args().len() {
        let kind = match r.defeats_idx(c, current) {
            Some(k) => k,
            None => continue,
        };
        if depth >= 1 && entered == Some(DefeatKind::Blocking) && kind != DefeatKind::Proper {
            continue;
        }
        let c_mask = r.internal_args()[c].mask;
        if path.iter().any(|&(a, _)| c_mask & !r.internal_args()[a].mask == 0) {
            continue;
        }
        let union = if child_even { even_mask | c_mask } else { odd_mask | c_mask };
        if r.line_union_contradictory(union) {
            continue;
        }
        path.push((c, Some(kind)));
        let (e, o) = if child_even { (union, odd_mask) } else { (even_mask, union) };
        children.push(build_raw(r, path, e, o));
        path.pop();
    }
    Node { arg: current, defeat: entered, children }
}

fn collect_presumption_heads(r: &Reasoner, node: &Node, depth: usize, even: &mut BTreeSet<usize>, odd: &mut BTreeSet<usize>) {
    let heads = r.presumption_heads(r.internal_args()[node.arg].mask);
    if depth % 2 == 0 {
        even.extend(heads);
    } else {
        odd.extend(heads);
    }
    for c in &node.children {
        collect_presumption_heads(r, c, depth + 1, even, odd);
    }
}

fn has_complement_pair(r: &Reasoner, set: &BTreeSet<usize>) -> bool {
    set.iter().any(|&l| r.complement_of(l).map(|c| c > l && set.contains(&c)).unwrap_or(false))
}

/// Every maximal subset of `set` free of complementary pairs: one choice per
/// conflicting pair, all unconflicted members kept.
fn maximal_consistent_subsets(r: &Reasoner, set: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
    let pairs: Vec<(usize, usize)> = set
        .iter()
        .filter_map(|&l| r.complement_of(l).filter(|&c| c > l && set.contains(&c)).map(|c| (l, c)))
        .collect();
    if pairs.is_empty() {
        return vec![set.clone()];
    }
    let paired: BTreeSet<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let base: BTreeSet<usize> = set.difference(&paired).copied().collect();
    let mut out = Vec::with_capacity(1 << pairs.len());
    for bits in 0u64..(1 << pairs.len()) {
        let mut s = base.clone();
        for (k, &(a, b)) in pairs.iter().enumerate() {
            s.insert(if bits & (1 << k) != 0 { b } else { a });
        }
        out.push(s);
    }
    out
}

fn filter_tree(
    r: &Reasoner,
    node: &Node,
    depth: usize,
    even_allowed: &BTreeSet<usize>,
    odd_allowed: &BTreeSet<usize>,
) -> Option<Node> {
    let heads = r.presumption_heads(r.internal_args()[node.arg].mask);
    let allowed = if depth % 2 == 0 { even_allowed } else { odd_allowed };
    if !heads.iter().all(|h| allowed.contains(h)) {
        return None;
    }
    let children = node
        .children
        .iter()
        .filter_map(|c| filter_tree(r, c, depth + 1, even_allowed, odd_allowed))
        .collect();
    Some(Node { arg: node.arg, defeat: node.defeat, children })
}

fn publish(r: &Reasoner, node: &Node) -> DialecticalNode {
    DialecticalNode {
        argument: r.public_argument(node.arg).clone(),
        defeat: node.defeat,
        children: node.children.iter().map(|c| publish(r, c)).collect(),
    }
}

fn trees_for_root(r: &Reasoner, root: usize) -> Vec<Node> {
    let mut path = vec![(root, None)];
    let root_mask = r.internal_args()[root].mask;
    let raw = build_raw(r, &mut path, root_mask, 0);
    let mut even = BTreeSet::new();
    let mut odd = BTreeSet::new();
    collect_presumption_heads(r, &raw, 0, &mut even, &mut odd);
    if !has_complement_pair(r, &even) && !has_complement_pair(r, &odd) {
        return vec![raw];
    }
    let mut out: Vec<Node> = Vec::new();
    for se in maximal_consistent_subsets(r, &even) {
        for so in maximal_consistent_subsets(r, &odd) {
            if let Some(t) = filter_tree(r, &raw, 0, &se, &so) {
                if !out.contains(&t) {
                    out.push(t);
                }
            }
        }
    }
    out.sort();
    out
}

/// The dialectical trees rooted in `root`; more than one when contradictory
/// presumptions force a split.
pub fn build_dialectical_trees(r: &Reasoner, root: &Argument) -> Result<Vec<DialecticalNode>, AmError> {
    let i = r.index_of_argument(root)?;
    Ok(trees_for_root(r, i).iter().map(|t| publish(r, t)).collect())
}

/// The dialectical forest for a literal: every tree of every argument for it.
pub fn dialectical_forest(r: &Reasoner, lit: &Literal) -> Vec<DialecticalNode> {
    let mut out = Vec::new();
    for (i, a) in r.internal_args().iter().enumerate() {
        if r.literal_index(lit) == Some(a.concl) {
            out.extend(trees_for_root(r, i).iter().map(|t| publish(r, t)));
        }
    }
    out
}

/// Marks a tree: leaves are undefeated, an inner node is defeated exactly
/// when some child is undefeated.
pub fn mark_tree(node: &DialecticalNode) -> Mark {
    if node.children.iter().any(|c| mark_tree(c) == Mark::Undefeated) {
        Mark::Defeated
    } else {
        Mark::Undefeated
    }
}

/// Whether some tree in the literal's forest has an undefeated root.
pub fn is_warranted(r: &Reasoner, lit: &Literal) -> bool {
    dialectical_forest(r, lit).iter().any(|t| mark_tree(t) == Mark::Undefeated)
}

/// The three-valued answer for a literal.
pub fn warrant_status(r: &Reasoner, lit: &Literal) -> WarrantStatus {
    if is_warranted(r, lit) {
        WarrantStatus::Warranted
    } else if is_warranted(r, &lit.complement()) {
        WarrantStatus::NotWarranted
    } else {
        WarrantStatus::Undecided
    }
}
