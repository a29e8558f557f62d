//! Reference implementations the acceptance tests compare against. Each is
//! written from the definitions, on its own representation, and stays apart
//! from the engine code paths it checks.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use ppredelp::am::{Argument, DefeatKind, DialecticalNode};
use ppredelp::em::{EmKnowledgeBase, ProbabilisticFormula};
use ppredelp::lang::{
    AmElement, Atom, ElementId, Formula, Literal, PreDelpProgram, Universe, World,
};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Gauss-Jordan elimination over the rationals; `None` when singular.
pub fn solve_square(mat: &mut [Vec<BigRational>], rhs: &mut [BigRational]) -> Option<Vec<BigRational>> {
    let n = mat.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = mat[col][col].clone();
        for c in col..n {
            mat[col][c] = &mat[col][c] / &p;
        }
        rhs[col] = &rhs[col] / &p;
        for r in 0..n {
            if r != col && !mat[r][col].is_zero() {
                let f = mat[r][col].clone();
                for c in col..n {
                    mat[r][c] = &mat[r][c] - &(&f * &mat[col][c]);
                }
                rhs[r] = &rhs[r] - &(&f * &rhs[col]);
            }
        }
    }
    Some(rhs.to_vec())
}

/// All k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// An environmental base flattened to interval rows over its worlds.
pub struct WorldSystem {
    pub worlds: Vec<World>,
    pub rows: Vec<(Vec<bool>, BigRational, BigRational)>,
}

pub fn world_system(kb: &EmKnowledgeBase) -> WorldSystem {
    let worlds = kb.conforming_worlds();
    let rows = kb
        .formulas()
        .iter()
        .map(|pf| {
            let member: Vec<bool> = worlds
                .iter()
                .map(|&w| kb.universe().satisfies(w, pf.formula()).unwrap())
                .collect();
            (member, pf.lower(), pf.upper())
        })
        .collect();
    WorldSystem { worlds, rows }
}

/// Every basic solution of the standard form with nonnegative coordinates.
/// Columns are world masses, then one upper slack and one lower surplus per
/// row; the polytope is bounded, so it is nonempty exactly when this list is,
/// and any linear objective attains its extremes on it.
pub fn basic_feasible_distributions(sys: &WorldSystem) -> Vec<Vec<BigRational>> {
    let n = sys.worlds.len();
    let m = sys.rows.len();
    let vars = n + 2 * m;
    let eqs = 1 + 2 * m;
    assert!(vars <= 16, "enumeration oracle only covers small systems");
    let coeff = |eq: usize, var: usize| -> BigRational {
        if eq == 0 {
            return if var < n { BigRational::one() } else { BigRational::zero() };
        }
        let row = (eq - 1) / 2;
        let upper = (eq - 1) % 2 == 0;
        if var < n {
            if sys.rows[row].0[var] {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        } else if upper && var == n + 2 * row {
            BigRational::one()
        } else if !upper && var == n + 2 * row + 1 {
            -BigRational::one()
        } else {
            BigRational::zero()
        }
    };
    let rhs_of = |eq: usize| -> BigRational {
        if eq == 0 {
            return BigRational::one();
        }
        let row = (eq - 1) / 2;
        if (eq - 1) % 2 == 0 {
            sys.rows[row].2.clone()
        } else {
            sys.rows[row].1.clone()
        }
    };
    let mut out = Vec::new();
    for basis in combinations(vars, eqs) {
        let mut mat: Vec<Vec<BigRational>> =
            (0..eqs).map(|e| basis.iter().map(|&v| coeff(e, v)).collect()).collect();
        let mut rhs: Vec<BigRational> = (0..eqs).map(rhs_of).collect();
        if let Some(sol) = solve_square(&mut mat, &mut rhs) {
            if sol.iter().all(|v| !v.is_negative()) {
                let mut x = vec![BigRational::zero(); n];
                for (j, &v) in basis.iter().enumerate() {
                    if v < n {
                        x[v] = sol[j].clone();
                    }
                }
                out.push(x);
            }
        }
    }
    out
}

/// Exact entailment bounds for `q` by scanning every vertex; `None` when the
/// base has no satisfying distribution.
pub fn oracle_query_bounds(kb: &EmKnowledgeBase, q: &Formula) -> Option<(BigRational, BigRational)> {
    let sys = world_system(kb);
    let verts = basic_feasible_distributions(&sys);
    let member: Vec<bool> =
        sys.worlds.iter().map(|&w| kb.universe().satisfies(w, q).unwrap()).collect();
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    for v in &verts {
        let mass = v
            .iter()
            .zip(&member)
            .filter(|(_, &m)| m)
            .fold(BigRational::zero(), |acc, (x, _)| acc + x);
        if lo.as_ref().map_or(true, |l| &mass < l) {
            lo = Some(mass.clone());
        }
        if hi.as_ref().map_or(true, |h| &mass > h) {
            hi = Some(mass);
        }
    }
    lo.zip(hi)
}

pub fn oracle_feasible(kb: &EmKnowledgeBase) -> bool {
    !basic_feasible_distributions(&world_system(kb)).is_empty()
}

/// Feasibility of a larger base by splitting it into groups of formulas that
/// share no atoms: a product of per-group models is a model of the whole
/// base, and marginals of a model solve every group.
pub fn oracle_feasible_by_components(kb: &EmKnowledgeBase) -> bool {
    assert!(kb.ics().is_empty());
    let atoms = kb.universe().atoms();
    let index =
        |a: &Atom| atoms.iter().position(|x| x == a).expect("formula atom outside the universe");
    let mut parent: Vec<usize> = (0..atoms.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for pf in kb.formulas() {
        let members: Vec<usize> = pf.formula().atoms().iter().map(&index).collect();
        for pair in members.windows(2) {
            let a = find(&mut parent, pair[0]);
            let b = find(&mut parent, pair[1]);
            parent[a] = b;
        }
    }
    let mut groups: BTreeMap<usize, Vec<ProbabilisticFormula>> = BTreeMap::new();
    for pf in kb.formulas() {
        let first = *pf.formula().atoms().iter().map(&index).collect::<Vec<_>>().first().unwrap();
        let root = find(&mut parent, first);
        groups.entry(root).or_default().push(pf.clone());
    }
    for (root, formulas) in groups {
        let comp: Vec<Atom> = (0..atoms.len())
            .filter(|&i| find(&mut parent, i) == root)
            .map(|i| atoms[i].clone())
            .collect();
        let u = Universe::new(comp).unwrap();
        let sub = EmKnowledgeBase::new(u, vec![], formulas).unwrap();
        if !oracle_feasible(&sub) {
            return false;
        }
    }
    true
}

/// Forward-chaining closure: every element fires once its body is present.
pub fn chain(elements: &[&AmElement], seed: &BTreeSet<Literal>) -> BTreeSet<Literal> {
    let mut out = seed.clone();
    let mut grew = true;
    while grew {
        grew = false;
        for e in elements {
            if e.body().iter().all(|b| out.contains(b)) && out.insert(e.head().clone()) {
                grew = true;
            }
        }
    }
    out
}

pub fn clashes(lits: &BTreeSet<Literal>) -> bool {
    lits.iter().any(|l| lits.contains(&l.complement()))
}

/// All subarguments of `arg` by scanning subsets of its support: a subset
/// together with a literal it derives, minimal for that literal, whose union
/// with the program's strict part closes without a clash.
pub fn brute_subarguments(
    program: &PreDelpProgram,
    arg: &Argument,
) -> Vec<(BTreeSet<ElementId>, Literal)> {
    let ids: Vec<&ElementId> = arg.support.iter().collect();
    let strict: Vec<&AmElement> = program.strict_elements().collect();
    let empty = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << ids.len() {
        let members: Vec<&AmElement> = ids
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, id)| program.get(id).unwrap())
            .collect();
        let mut with_strict = strict.clone();
        with_strict.extend(members.iter().filter(|e| !e.kind().is_strict()));
        if clashes(&chain(&with_strict, &empty)) {
            continue;
        }
        for lit in chain(&members, &empty) {
            let mut minimal = true;
            let mut sub = (mask.wrapping_sub(1)) & mask;
            loop {
                let smaller: Vec<&AmElement> = ids
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| sub & (1 << i) != 0)
                    .map(|(_, id)| program.get(id).unwrap())
                    .collect();
                if chain(&smaller, &empty).contains(&lit) {
                    minimal = false;
                    break;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
            if minimal {
                let support: BTreeSet<ElementId> = ids
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, id)| (*id).clone())
                    .collect();
                out.push((support, lit));
            }
        }
    }
    out
}

/// The attack relation by definition: some subargument of the target whose
/// conclusion, joined with the attacker's conclusion under both arguments'
/// facts and strict rules, closes to a clash.
pub fn brute_attacks(program: &PreDelpProgram, attacker: &Argument, target: &Argument) -> bool {
    let strict_view: Vec<&AmElement> = attacker
        .support
        .union(&target.support)
        .map(|id| program.get(id).unwrap())
        .filter(|e| e.kind().is_strict())
        .collect();
    brute_subarguments(program, target).into_iter().any(|(_, l2)| {
        let seed: BTreeSet<Literal> = [attacker.conclusion.clone(), l2].into();
        clashes(&chain(&strict_view, &seed))
    })
}

/// Maximal consistent subsets of a slice by scanning the whole powerset.
pub fn brute_cand_pgm(slice: &[&AmElement]) -> Vec<BTreeSet<ElementId>> {
    let n = slice.len();
    let empty = BTreeSet::new();
    let consistent: Vec<bool> = (0u32..1 << n)
        .map(|mask| {
            let members: Vec<&AmElement> = slice
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| *e)
                .collect();
            !clashes(&chain(&members, &empty))
        })
        .collect();
    let mut out: Vec<BTreeSet<ElementId>> = (0u32..1 << n)
        .filter(|&mask| {
            consistent[mask as usize]
                && (0..n).all(|i| mask & (1 << i) != 0 || !consistent[(mask | 1 << i) as usize])
        })
        .map(|mask| {
            slice
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| e.id().clone())
                .collect()
        })
        .collect();
    out.sort();
    out
}

/// A random synthetic tree; marking only looks at the shape, so the argument
/// and defeat entries are placeholders.
pub fn random_tree(rng: &mut ChaCha8Rng, depth: usize, branching: usize) -> DialecticalNode {
    let width = if depth == 0 { 0 } else { rng.gen_range(0..=branching) };
    DialecticalNode {
        argument: Argument::new([ElementId::new("n0")], Literal::pos(Atom::prop("n0"))),
        defeat: Some(if rng.gen_bool(0.5) { DefeatKind::Proper } else { DefeatKind::Blocking }),
        children: (0..width).map(|_| random_tree(rng, depth - 1, branching)).collect(),
    }
}

/// Marking stated the dual way round: a node stands exactly when every child
/// falls.
pub fn oracle_undefeated(node: &DialecticalNode) -> bool {
    node.children.iter().all(|c| !oracle_undefeated(c))
}

pub fn random_formula(rng: &mut ChaCha8Rng, atoms: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.4) {
        return Formula::atom(atoms[rng.gen_range(0..atoms.len())]);
    }
    match rng.gen_range(0..3) {
        0 => Formula::not(random_formula(rng, atoms, depth - 1)),
        1 => Formula::and(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1)),
        _ => Formula::or(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1)),
    }
}

pub const EM_NAMES: [&str; 3] = ["a", "b", "c"];

/// A small random environmental base within the enumeration oracle's budget.
pub fn random_em(rng: &mut ChaCha8Rng) -> EmKnowledgeBase {
    let n = rng.gen_range(1..=EM_NAMES.len());
    let u = Universe::props(&EM_NAMES[..n]).unwrap();
    let count = rng.gen_range(1..=3);
    let formulas = (0..count)
        .map(|_| {
            let f = random_formula(rng, &EM_NAMES[..n], 2);
            let p = rat(rng.gen_range(0..=10), 10);
            let cap = p.clone().min(BigRational::one() - &p);
            let eps = match rng.gen_range(0..3) {
                0 => BigRational::zero(),
                1 => cap / BigRational::from_integer(2.into()),
                _ => cap,
            };
            ProbabilisticFormula::new(f, p, eps).unwrap()
        })
        .collect();
    EmKnowledgeBase::new(u, vec![], formulas).unwrap()
}

fn random_literal(rng: &mut ChaCha8Rng, atoms: &[&str]) -> Literal {
    let atom = Atom::prop(atoms[rng.gen_range(0..atoms.len())]);
    if rng.gen_bool(0.5) {
        Literal::pos(atom)
    } else {
        Literal::neg(atom)
    }
}

/// A random slice of up to six elements mixing all four kinds.
pub fn random_slice(rng: &mut ChaCha8Rng) -> Vec<AmElement> {
    const ATOMS: [&str; 3] = ["p0", "q0", "r0"];
    let n = rng.gen_range(1..=6);
    (0..n)
        .map(|i| {
            let id = format!("e{i}");
            let head = random_literal(rng, &ATOMS);
            match rng.gen_range(0..4) {
                0 => AmElement::fact(&id, head),
                1 => AmElement::presumption(&id, head),
                kind => {
                    let mut body = vec![random_literal(rng, &ATOMS)];
                    if rng.gen_bool(0.4) {
                        let extra = random_literal(rng, &ATOMS);
                        if !body.contains(&extra) {
                            body.push(extra);
                        }
                    }
                    if kind == 2 {
                        AmElement::strict_rule(&id, head, body).unwrap()
                    } else {
                        AmElement::defeasible_rule(&id, head, body).unwrap()
                    }
                }
            }
        })
        .collect()
}
