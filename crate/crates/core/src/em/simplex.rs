//! Self-contained two-phase simplex over exact rationals.
//!
//! Dense tableau, Bland's anti-cycling pivot rule, so every solve terminates.
//! Infeasibility and unboundedness are reported as values, never as panics.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Relation of a linear constraint row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

/// Objective direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Outcome of a solve.
#[derive(Clone, Debug, PartialEq)]
pub enum SimplexOutcome {
    Optimal { value: BigRational, x: Vec<BigRational> },
    Infeasible,
    Unbounded,
}

struct Row {
    coeffs: Vec<(usize, BigRational)>,
    rel: Rel,
    rhs: BigRational,
}

/// A linear program over `ncols` nonnegative structural variables.
pub struct LinearProgram {
    ncols: usize,
    rows: Vec<Row>,
}

impl LinearProgram {
    pub fn new(ncols: usize) -> Self {
        LinearProgram { ncols, rows: Vec::new() }
    }

    /// Adds `sum coeffs rel rhs`; coefficients are sparse (index, value) pairs.
    pub fn add_row(&mut self, coeffs: Vec<(usize, BigRational)>, rel: Rel, rhs: BigRational) {
        debug_assert!(coeffs.iter().all(|(i, _)| *i < self.ncols));
        self.rows.push(Row { coeffs, rel, rhs });
    }

    /// Optimizes `sense (sum objective)` subject to the rows and `x >= 0`.
    pub fn solve(&self, objective: &[(usize, BigRational)], sense: Sense) -> SimplexOutcome {
        let m = self.rows.len();
        // column layout: structural | slack/surplus | artificial
        let n_slack = self.rows.iter().filter(|r| r.rel != Rel::Eq).count();
        let mut ncols = self.ncols + n_slack;
        let mut tableau: Vec<Vec<BigRational>> = Vec::with_capacity(m);
        let mut basis: Vec<usize> = Vec::with_capacity(m);
        let mut artificial_cols: Vec<usize> = Vec::new();

        let mut slack_at = self.ncols;
        let mut pending_artificial: Vec<usize> = Vec::new();
        for row in &self.rows {
            // canonical form with nonnegative right-hand side
            let flip = row.rhs.is_negative();
            let mut dense = vec![BigRational::zero(); ncols + 1];
            for (i, c) in &row.coeffs {
                dense[*i] = if flip { -c.clone() } else { c.clone() };
            }
            let rel = match (row.rel, flip) {
                (Rel::Le, true) => Rel::Ge,
                (Rel::Ge, true) => Rel::Le,
                (r, _) => r,
            };
            let last = dense.len() - 1;
            dense[last] = if flip { -row.rhs.clone() } else { row.rhs.clone() };
            match rel {
                Rel::Le => {
                    dense[slack_at] = BigRational::one();
                    basis.push(slack_at);
                    slack_at += 1;
                }
                Rel::Ge => {
                    dense[slack_at] = -BigRational::one();
                    slack_at += 1;
                    basis.push(usize::MAX); // artificial assigned below
                    pending_artificial.push(tableau.len());
                }
                Rel::Eq => {
                    basis.push(usize::MAX);
                    pending_artificial.push(tableau.len());
                }
            }
            tableau.push(dense);
        }
        // append artificial columns
        for &r in &pending_artificial {
            for row in tableau.iter_mut() {
                let last = row.len() - 1;
                row.insert(last, BigRational::zero());
            }
            let col = ncols;
            ncols += 1;
            let last = tableau[r].len() - 1;
            tableau[r][last - 1] = BigRational::one();
            basis[r] = col;
            artificial_cols.push(col);
        }

        let is_artificial = |j: usize| j >= self.ncols + n_slack;

        // phase one: minimize the artificial sum
        if !artificial_cols.is_empty() {
            let mut obj = vec![BigRational::zero(); ncols + 1];
            for j in self.ncols + n_slack..ncols {
                obj[j] = BigRational::one();
            }
            reduce_objective(&mut obj, &tableau, &basis);
            if let PivotEnd::Unbounded = run_simplex(&mut tableau, &mut basis, &mut obj, &|_| false) {
                // a feasibility objective is bounded below by zero
                unreachable!("phase one cannot be unbounded");
            }
            let z = -obj[ncols].clone();
            if !z.is_zero() {
                return SimplexOutcome::Infeasible;
            }
            // drive remaining artificials out of the basis
            let mut r = 0;
            while r < tableau.len() {
                if is_artificial(basis[r]) {
                    let col = (0..self.ncols + n_slack)
                        .find(|&j| !tableau[r][j].is_zero());
                    match col {
                        Some(c) => pivot(&mut tableau, &mut basis, &mut obj, r, c),
                        None => {
                            // redundant row
                            tableau.remove(r);
                            basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }

        // phase two
        let mut obj = vec![BigRational::zero(); ncols + 1];
        for (i, c) in objective {
            obj[*i] = match sense {
                Sense::Minimize => c.clone(),
                Sense::Maximize => -c.clone(),
            };
        }
        reduce_objective(&mut obj, &tableau, &basis);
        if let PivotEnd::Unbounded = run_simplex(&mut tableau, &mut basis, &mut obj, &is_artificial)
        {
            return SimplexOutcome::Unbounded;
        }
        let mut x = vec![BigRational::zero(); self.ncols];
        for (r, &b) in basis.iter().enumerate() {
            if b < self.ncols {
                let last = tableau[r].len() - 1;
                x[b] = tableau[r][last].clone();
            }
        }
        let z = -obj[ncols].clone();
        let value = match sense {
            Sense::Minimize => z,
            Sense::Maximize => -z,
        };
        SimplexOutcome::Optimal { value, x }
    }
}

enum PivotEnd {
    Optimal,
    Unbounded,
}

/// Renders the objective row in reduced-cost form for the current basis.
fn reduce_objective(obj: &mut [BigRational], tableau: &[Vec<BigRational>], basis: &[usize]) {
    for (r, &b) in basis.iter().enumerate() {
        if !obj[b].is_zero() {
            let factor = obj[b].clone();
            for (o, t) in obj.iter_mut().zip(&tableau[r]) {
                if !t.is_zero() {
                    *o -= &factor * t;
                }
            }
        }
    }
}

/// Bland's-rule simplex iterations; `banned` columns never enter.
fn run_simplex(
    tableau: &mut Vec<Vec<BigRational>>,
    basis: &mut [usize],
    obj: &mut [BigRational],
    banned: &dyn Fn(usize) -> bool,
) -> PivotEnd {
    let ncols = obj.len() - 1;
    loop {
        let entering = (0..ncols).find(|&j| !banned(j) && obj[j].is_negative());
        let Some(c) = entering else {
            return PivotEnd::Optimal;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for (r, row) in tableau.iter().enumerate() {
            if row[c].is_positive() {
                let ratio = &row[ncols] / &row[c];
                let better = match &leave {
                    None => true,
                    Some((lr, lv)) => {
                        ratio < *lv || (ratio == *lv && basis[r] < basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            return PivotEnd::Unbounded;
        };
        pivot(tableau, basis, obj, r, c);
    }
}

fn pivot(
    tableau: &mut [Vec<BigRational>],
    basis: &mut [usize],
    obj: &mut [BigRational],
    r: usize,
    c: usize,
) {
    let p = tableau[r][c].clone();
    debug_assert!(!p.is_zero());
    for v in tableau[r].iter_mut() {
        if !v.is_zero() {
            *v /= &p;
        }
    }
    let pivot_row = tableau[r].clone();
    for (i, row) in tableau.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
    }
    if !obj[c].is_zero() {
        let factor = obj[c].clone();
        for (v, pv) in obj.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &factor * pv;
            }
        }
    }
    basis[r] = c;
}
