//! Exact rational linear programming.
//!
//! A small dense two-phase simplex over [`Rational`] values. Bland's rule is
//! used for both the entering and leaving choices, so the solver terminates on
//! every input (including classic cycling instances) and is fully
//! deterministic. On `Optimal` the solution carries a dual vector which acts
//! as an optimality certificate checkable by [`check_solution`] in exact
//! arithmetic.

use crate::rat::{fmt_rat, Rational};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `coeffs · x >= rhs`
    Ge,
    /// `coeffs · x == rhs`
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Minimize `objective · x` subject to the constraints, `x_j >= 0` for every
/// variable not marked free.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<Rational>,
    pub free: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value when `Optimal`.
    pub value: Option<Rational>,
    /// Primal assignment when `Optimal` (empty otherwise).
    pub assignment: Vec<Rational>,
    /// Indices of constraints satisfied with equality at the vertex.
    pub basis: Vec<usize>,
    /// One multiplier per constraint; certifies optimality via duality.
    pub dual: Vec<Rational>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("constraint {index} has {got} coefficients, expected {expected}")]
    DimensionMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("problem must have at least one variable")]
    NoVariables,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            constraints: Vec::new(),
            objective: vec![Rational::zero(); num_vars],
            free: vec![false; num_vars],
        }
    }

    pub fn add_ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.constraints.push(Constraint {
            coeffs,
            relation: Relation::Ge,
            rhs,
        });
    }

    pub fn add_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.constraints.push(Constraint {
            coeffs,
            relation: Relation::Eq,
            rhs,
        });
    }

    pub fn set_objective(&mut self, coeffs: Vec<Rational>) {
        self.objective = coeffs;
    }

    pub fn mark_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn validate(&self) -> Result<(), LpError> {
        if self.num_vars == 0 {
            return Err(LpError::NoVariables);
        }
        if self.objective.len() != self.num_vars {
            return Err(LpError::DimensionMismatch {
                index: usize::MAX,
                got: self.objective.len(),
                expected: self.num_vars,
            });
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.num_vars {
                return Err(LpError::DimensionMismatch {
                    index: i,
                    got: c.coeffs.len(),
                    expected: self.num_vars,
                });
            }
        }
        Ok(())
    }

    /// Plain-text dump, one constraint per line, rationals as `p/q`.
    pub fn dump(&self) -> String {
        let term = |coeffs: &[Rational]| {
            let mut parts = Vec::new();
            for (j, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    parts.push(format!("{} x{}", fmt_rat(c), j));
                }
            }
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(" + ")
            }
        };
        let mut out = format!("min {}\n", term(&self.objective));
        for c in &self.constraints {
            let rel = match c.relation {
                Relation::Ge => ">=",
                Relation::Eq => "=",
            };
            out.push_str(&format!("{} {} {}\n", term(&c.coeffs), rel, fmt_rat(&c.rhs)));
        }
        out
    }
}

/// Row of the internal standard form together with its provenance.
struct StdRow {
    coeffs: Vec<Rational>,
    rhs: Rational,
    /// Index of the originating constraint.
    orig: usize,
    /// -1 for the negated half of a split equality.
    orig_sign: i32,
}

struct Tableau {
    /// `rows × (num_cols + 1)`; last entry of each row is the rhs.
    rows: Vec<Vec<Rational>>,
    /// Basic column per row.
    basis: Vec<usize>,
    num_cols: usize,
    /// Columns the pivot rule may enter (artificials get blocked in phase 2).
    allowed: Vec<bool>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col].clone();
        debug_assert!(!piv.is_zero());
        if !piv.is_one() {
            for v in self.rows[row].iter_mut() {
                if !v.is_zero() {
                    *v /= &piv;
                }
            }
        }
        let nonzero: Vec<usize> = (0..=self.num_cols)
            .filter(|&j| !self.rows[row][j].is_zero())
            .collect();
        let pivot_row = self.rows[row].clone();
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let factor = self.rows[i][col].clone();
            if factor.is_zero() {
                continue;
            }
            for &j in &nonzero {
                let delta = &factor * &pivot_row[j];
                self.rows[i][j] -= delta;
            }
            // Cancel exactly; guards against residue from reduction.
            self.rows[i][col] = Rational::zero();
        }
        self.basis[row] = col;
    }

    /// Runs Bland-rule simplex on the given cost vector. `cost` has one entry
    /// per column. Returns `None` if an unbounded ray is found, otherwise the
    /// reduced-cost row at optimality (including the objective in the rhs
    /// slot, negated).
    fn optimize(&mut self, cost: &[Rational]) -> Option<Vec<Rational>> {
        let mut red = vec![Rational::zero(); self.num_cols + 1];
        red[..self.num_cols].clone_from_slice(cost);
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            let cb = cost[b].clone();
            for j in 0..=self.num_cols {
                if !self.rows[i][j].is_zero() {
                    let delta = &cb * &self.rows[i][j];
                    red[j] -= delta;
                }
            }
        }
        loop {
            let entering = (0..self.num_cols)
                .find(|&j| self.allowed[j] && red[j].is_negative());
            let col = match entering {
                Some(c) => c,
                None => return Some(red),
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][col].is_positive() {
                    let ratio = &self.rows[i][self.num_cols] / &self.rows[i][col];
                    let better = match &leave {
                        None => true,
                        Some((r, best)) => {
                            ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let (row, _) = leave?;
            self.pivot(row, col);
            let factor = red[col].clone();
            if !factor.is_zero() {
                for j in 0..=self.num_cols {
                    if !self.rows[row][j].is_zero() {
                        let delta = &factor * &self.rows[row][j];
                        red[j] -= delta;
                    }
                }
                red[col] = Rational::zero();
            }
        }
    }
}

/// Solves the problem exactly. Two-phase simplex, Bland's rule throughout.
pub fn solve(p: &LpProblem) -> Result<LpSolution, LpError> {
    p.validate()?;

    // Split free variables and equalities; normalize right-hand sides.
    let mut col_of_var = Vec::with_capacity(p.num_vars);
    let mut num_struct = 0usize;
    for j in 0..p.num_vars {
        col_of_var.push(num_struct);
        num_struct += if p.free[j] { 2 } else { 1 };
    }
    let expand = |coeffs: &[Rational]| {
        let mut row = vec![Rational::zero(); num_struct];
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            row[col_of_var[j]] = c.clone();
            if p.free[j] {
                row[col_of_var[j] + 1] = -c.clone();
            }
        }
        row
    };

    let mut std_rows: Vec<StdRow> = Vec::new();
    for (i, c) in p.constraints.iter().enumerate() {
        std_rows.push(StdRow {
            coeffs: expand(&c.coeffs),
            rhs: c.rhs.clone(),
            orig: i,
            orig_sign: 1,
        });
        if c.relation == Relation::Eq {
            std_rows.push(StdRow {
                coeffs: expand(&c.coeffs).iter().map(|v| -v.clone()).collect(),
                rhs: -c.rhs.clone(),
                orig: i,
                orig_sign: -1,
            });
        }
    }

    let m = std_rows.len();
    // Columns: structural | slacks (one per row) | artificials (appended).
    let slack_base = num_struct;
    let mut num_cols = num_struct + m;
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack_negated = vec![false; m];
    let mut artificial_rows = Vec::new();

    for (i, r) in std_rows.iter().enumerate() {
        // a·x - s = b, with the whole row negated when b < 0.
        let negate = r.rhs.is_negative();
        slack_negated[i] = negate;
        let mut row: Vec<Rational> = if negate {
            r.coeffs.iter().map(|v| -v.clone()).collect()
        } else {
            r.coeffs.clone()
        };
        row.resize(num_struct + m, Rational::zero());
        row[slack_base + i] = if negate { Rational::one() } else { -Rational::one() };
        row.push(if negate { -r.rhs.clone() } else { r.rhs.clone() });
        if negate || r.rhs.is_zero() {
            // Slack can start basic: value -rhs = 0, or +rhs >= 0 when negated.
            basis.push(slack_base + i);
            if !negate {
                // Scale so the basic column is +1.
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
            }
        } else {
            artificial_rows.push(i);
            basis.push(usize::MAX); // patched below
        }
        rows.push(row);
    }

    let art_base = num_cols;
    num_cols += artificial_rows.len();
    for row in rows.iter_mut() {
        let rhs = row.pop().unwrap();
        row.resize(num_cols, Rational::zero());
        row.push(rhs);
    }
    for (k, &i) in artificial_rows.iter().enumerate() {
        rows[i][art_base + k] = Rational::one();
        basis[i] = art_base + k;
    }

    let mut tab = Tableau {
        rows,
        basis,
        num_cols,
        allowed: vec![true; num_cols],
    };

    // Phase 1: minimize the sum of artificials.
    if !artificial_rows.is_empty() {
        let mut cost = vec![Rational::zero(); num_cols];
        for k in 0..artificial_rows.len() {
            cost[art_base + k] = Rational::one();
        }
        let red = tab
            .optimize(&cost)
            .expect("phase-1 objective is bounded below by zero");
        let obj = -red[tab.num_cols].clone();
        if obj.is_positive() {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                value: None,
                assignment: Vec::new(),
                basis: Vec::new(),
                dual: Vec::new(),
            });
        }
        // Drive remaining artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= art_base {
                let col = (0..art_base).find(|&j| !tab.rows[i][j].is_zero());
                match col {
                    Some(c) => tab.pivot(i, c),
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for j in art_base..num_cols {
            tab.allowed[j] = false;
        }
    }

    // Phase 2.
    let mut cost = vec![Rational::zero(); num_cols];
    for j in 0..p.num_vars {
        if p.objective[j].is_zero() {
            continue;
        }
        cost[col_of_var[j]] = p.objective[j].clone();
        if p.free[j] {
            cost[col_of_var[j] + 1] = -p.objective[j].clone();
        }
    }
    let red = match tab.optimize(&cost) {
        Some(r) => r,
        None => {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                value: None,
                assignment: Vec::new(),
                basis: Vec::new(),
                dual: Vec::new(),
            })
        }
    };

    // Primal assignment.
    let mut col_val = vec![Rational::zero(); num_cols];
    for (i, &b) in tab.basis.iter().enumerate() {
        col_val[b] = tab.rows[i][tab.num_cols].clone();
    }
    let mut assignment = Vec::with_capacity(p.num_vars);
    for j in 0..p.num_vars {
        let mut v = col_val[col_of_var[j]].clone();
        if p.free[j] {
            v -= &col_val[col_of_var[j] + 1];
        }
        assignment.push(v);
    }
    let value: Rational = p
        .objective
        .iter()
        .zip(&assignment)
        .map(|(c, x)| c * x)
        .sum();

    // Duals: the reduced cost of row i's slack column equals the multiplier
    // of the originating inequality; split equalities recombine by sign.
    let mut dual = vec![Rational::zero(); p.constraints.len()];
    for (i, r) in std_rows.iter().enumerate() {
        let y = red[slack_base + i].clone();
        if r.orig_sign > 0 {
            dual[r.orig] += y;
        } else {
            dual[r.orig] -= y;
        }
    }

    let mut active = Vec::new();
    for (i, c) in p.constraints.iter().enumerate() {
        let lhs: Rational = c.coeffs.iter().zip(&assignment).map(|(a, x)| a * x).sum();
        if lhs == c.rhs {
            active.push(i);
        }
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        value: Some(value),
        assignment,
        basis: active,
        dual,
    })
}

/// Verifies a claimed optimal solution without re-solving: exact primal
/// feasibility plus a dual certificate (sign conditions, reduced costs, and
/// matching objective values).
pub fn check_solution(p: &LpProblem, s: &LpSolution) -> bool {
    if s.status != LpStatus::Optimal || p.validate().is_err() {
        return false;
    }
    if s.assignment.len() != p.num_vars || s.dual.len() != p.constraints.len() {
        return false;
    }
    let value = match &s.value {
        Some(v) => v.clone(),
        None => return false,
    };
    for (j, x) in s.assignment.iter().enumerate() {
        if !p.free[j] && x.is_negative() {
            return false;
        }
    }
    for c in &p.constraints {
        let lhs: Rational = c.coeffs.iter().zip(&s.assignment).map(|(a, x)| a * x).sum();
        let ok = match c.relation {
            Relation::Ge => lhs >= c.rhs,
            Relation::Eq => lhs == c.rhs,
        };
        if !ok {
            return false;
        }
    }
    let obj: Rational = p
        .objective
        .iter()
        .zip(&s.assignment)
        .map(|(c, x)| c * x)
        .sum();
    if obj != value {
        return false;
    }
    // Dual feasibility.
    for (i, c) in p.constraints.iter().enumerate() {
        if c.relation == Relation::Ge && s.dual[i].is_negative() {
            return false;
        }
    }
    for j in 0..p.num_vars {
        let mut reduced = p.objective[j].clone();
        for (i, c) in p.constraints.iter().enumerate() {
            if !c.coeffs[j].is_zero() && !s.dual[i].is_zero() {
                reduced -= &s.dual[i] * &c.coeffs[j];
            }
        }
        let ok = if p.free[j] {
            reduced.is_zero()
        } else {
            !reduced.is_negative()
        };
        if !ok {
            return false;
        }
    }
    // Strong duality closes the sandwich.
    let dual_value: Rational = p
        .constraints
        .iter()
        .zip(&s.dual)
        .map(|(c, y)| &c.rhs * y)
        .sum();
    dual_value == value
}
