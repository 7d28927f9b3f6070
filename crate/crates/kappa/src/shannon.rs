//! The Shannon complexity linear program and the closed-form bounds.
//!
//! For a staircase on an `(n1+1) x (n2+1)` grid the LP has one variable per
//! grid point plus an objective variable `t` bounding the first horizontal
//! and vertical values `H = f(1,0)` and `V = f(0,1)`. Constraints are the
//! polymatroidal inequalities (non-negativity, monotonicity, two flavours of
//! submodularity), strengthened by `+1` wherever the qualification pattern of
//! the structure demands it. The optimum of `min t` is exactly `κ`.

use crate::rat::{int, rat, Rational};
use crate::ratlp::{self, LpError, LpProblem, LpSolution, LpStatus};
use crate::staircase::{QualMap, Staircase};
use num_traits::{One, Signed, Zero};
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ShannonError {
    #[error("rank grid is {got_n1}x{got_n2}, expected {want_n1}x{want_n2}")]
    DimensionMismatch {
        got_n1: u32,
        got_n2: u32,
        want_n1: u32,
        want_n2: u32,
    },
    #[error("width must be at least 1")]
    NonPositiveWidth,
    #[error("width {0} is too small (must be >= 2)")]
    WidthTooSmall(u32),
    #[error("width list must be non-empty")]
    NoWidths,
    #[error("lp error: {0}")]
    Lp(#[from] LpError),
    #[error("solver returned {0:?} on a structure LP")]
    UnexpectedStatus(LpStatus),
}

/// Exact rational values `f(i,j)` on the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankGrid {
    n1: u32,
    n2: u32,
    values: Vec<Rational>,
}

impl RankGrid {
    pub fn new(n1: u32, n2: u32, values: Vec<Rational>) -> Option<Self> {
        if values.len() == (n1 as usize + 1) * (n2 as usize + 1) {
            Some(RankGrid { n1, n2, values })
        } else {
            None
        }
    }

    pub fn zero(n1: u32, n2: u32) -> Self {
        RankGrid {
            n1,
            n2,
            values: vec![Rational::zero(); (n1 as usize + 1) * (n2 as usize + 1)],
        }
    }

    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn n2(&self) -> u32 {
        self.n2
    }

    pub fn get(&self, i: u32, j: u32) -> &Rational {
        &self.values[i as usize * (self.n2 as usize + 1) + j as usize]
    }

    pub fn set(&mut self, i: u32, j: u32, v: Rational) {
        self.values[i as usize * (self.n2 as usize + 1) + j as usize] = v;
    }

    /// First horizontal value `f(1,0)`; `None` on a zero-width grid.
    pub fn h(&self) -> Option<&Rational> {
        (self.n1 >= 1).then(|| self.get(1, 0))
    }

    /// First vertical value `f(0,1)`.
    pub fn v(&self) -> Option<&Rational> {
        (self.n2 >= 1).then(|| self.get(0, 1))
    }

    /// CSV matrix, one line per `j` from `0` to `n2`, entries `p/q`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for j in 0..=self.n2 {
            let row: Vec<String> = (0..=self.n1)
                .map(|i| crate::rat::fmt_rat(self.get(i, j)))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    /// `f(0,0) = 0`
    Pointed,
    /// `f(i+1,j) >= f(i,j) (+1)`
    MonoH,
    /// `f(i,j+1) >= f(i,j) (+1)`
    MonoV,
    /// `2 f(i,j) >= f(i-1,j) + f(i+1,j) (+1)`
    Submod1H,
    /// `2 f(i,j) >= f(i,j-1) + f(i,j+1) (+1)`
    Submod1V,
    /// `f(i+1,j) + f(i,j+1) >= f(i,j) + f(i+1,j+1) (+1)`
    Submod2,
}

/// One grid inequality: `sum coeff * f(point) >= rhs`.
#[derive(Debug, Clone)]
pub struct GridConstraint {
    pub kind: ConstraintKind,
    pub at: (u32, u32),
    pub terms: Vec<((u32, u32), i32)>,
    pub rhs: i32,
}

impl GridConstraint {
    pub fn strong(&self) -> bool {
        self.rhs == 1
    }
}

/// Enumerates every inequality of the structure LP. The strong form replaces
/// the plain one exactly when the qualification pattern matches.
pub fn grid_constraints(s: &Staircase) -> Vec<GridConstraint> {
    let q = s.qualmap();
    grid_constraints_from_map(&q)
}

fn grid_constraints_from_map(q: &QualMap) -> Vec<GridConstraint> {
    let (n1, n2) = (q.n1(), q.n2());
    let mut out = Vec::new();
    for i in 0..n1 {
        for j in 0..=n2 {
            let strong = q.get(i + 1, j) && !q.get(i, j);
            out.push(GridConstraint {
                kind: ConstraintKind::MonoH,
                at: (i, j),
                terms: vec![((i + 1, j), 1), ((i, j), -1)],
                rhs: strong as i32,
            });
        }
    }
    for i in 0..=n1 {
        for j in 0..n2 {
            let strong = q.get(i, j + 1) && !q.get(i, j);
            out.push(GridConstraint {
                kind: ConstraintKind::MonoV,
                at: (i, j),
                terms: vec![((i, j + 1), 1), ((i, j), -1)],
                rhs: strong as i32,
            });
        }
    }
    for i in 1..n1 {
        for j in 0..=n2 {
            let strong = !q.get(i - 1, j) && q.get(i, j) && q.get(i + 1, j);
            out.push(GridConstraint {
                kind: ConstraintKind::Submod1H,
                at: (i, j),
                terms: vec![((i, j), 2), ((i - 1, j), -1), ((i + 1, j), -1)],
                rhs: strong as i32,
            });
        }
    }
    for i in 0..=n1 {
        for j in 1..n2 {
            let strong = !q.get(i, j - 1) && q.get(i, j) && q.get(i, j + 1);
            out.push(GridConstraint {
                kind: ConstraintKind::Submod1V,
                at: (i, j),
                terms: vec![((i, j), 2), ((i, j - 1), -1), ((i, j + 1), -1)],
                rhs: strong as i32,
            });
        }
    }
    for i in 0..n1 {
        for j in 0..n2 {
            let strong = !q.get(i, j)
                && q.get(i + 1, j)
                && q.get(i, j + 1)
                && q.get(i + 1, j + 1);
            out.push(GridConstraint {
                kind: ConstraintKind::Submod2,
                at: (i, j),
                terms: vec![
                    ((i + 1, j), 1),
                    ((i, j + 1), 1),
                    ((i, j), -1),
                    ((i + 1, j + 1), -1),
                ],
                rhs: strong as i32,
            });
        }
    }
    out
}

fn var_index(n2: u32, i: u32, j: u32) -> usize {
    i as usize * (n2 as usize + 1) + j as usize
}

/// Builds the κ linear program: grid variables, the objective variable `t`,
/// `f(0,0) = 0`, all grid inequalities, and `t >= H`, `t >= V`.
pub fn build_shannon_lp(s: &Staircase) -> LpProblem {
    let (n1, n2) = (s.n1(), s.n2());
    let grid_vars = (n1 as usize + 1) * (n2 as usize + 1);
    let t = grid_vars;
    let mut p = LpProblem::new(grid_vars + 1);

    let mut pointed = vec![Rational::zero(); grid_vars + 1];
    pointed[var_index(n2, 0, 0)] = Rational::one();
    p.add_eq(pointed, Rational::zero());

    for gc in grid_constraints(s) {
        let mut row = vec![Rational::zero(); grid_vars + 1];
        for ((i, j), c) in gc.terms {
            row[var_index(n2, i, j)] += int(c as i64);
        }
        p.add_ge(row, int(gc.rhs as i64));
    }

    if n1 >= 1 {
        let mut row = vec![Rational::zero(); grid_vars + 1];
        row[t] = Rational::one();
        row[var_index(n2, 1, 0)] = -Rational::one();
        p.add_ge(row, Rational::zero());
    }
    if n2 >= 1 {
        let mut row = vec![Rational::zero(); grid_vars + 1];
        row[t] = Rational::one();
        row[var_index(n2, 0, 1)] = -Rational::one();
        p.add_ge(row, Rational::zero());
    }

    let mut obj = vec![Rational::zero(); grid_vars + 1];
    obj[t] = Rational::one();
    p.set_objective(obj);
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    SingleStep,
    Matus,
    MatusImproved,
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub applicable: bool,
    pub value: Option<Rational>,
}

#[derive(Debug, Clone)]
pub struct KappaResult {
    pub kappa: Rational,
    pub witness: RankGrid,
    pub n1: u32,
    pub n2: u32,
    pub bounds: Vec<BoundReport>,
}

impl KappaResult {
    pub fn to_json(&self) -> serde_json::Value {
        let bounds: Vec<serde_json::Value> = self
            .bounds
            .iter()
            .map(|b| {
                json!({
                    "bound": match b.kind {
                        BoundKind::SingleStep => "single_step",
                        BoundKind::Matus => "matus",
                        BoundKind::MatusImproved => "matus_improved",
                    },
                    "applicable": b.applicable,
                    "value": b.value.as_ref().map(crate::rat::fmt_rat),
                })
            })
            .collect();
        json!({
            "kappa": crate::rat::fmt_rat(&self.kappa),
            "n1": self.n1,
            "n2": self.n2,
            "bounds": bounds,
        })
    }
}

/// Computes `κ` exactly, with an optimal rank grid as witness.
pub fn kappa(s: &Staircase) -> Result<KappaResult, ShannonError> {
    let p = build_shannon_lp(s);
    let sol = ratlp::solve(&p)?;
    if sol.status != LpStatus::Optimal {
        return Err(ShannonError::UnexpectedStatus(sol.status));
    }
    let (n1, n2) = (s.n1(), s.n2());
    let grid_vars = (n1 as usize + 1) * (n2 as usize + 1);
    let witness = RankGrid::new(n1, n2, sol.assignment[..grid_vars].to_vec()).unwrap();
    Ok(KappaResult {
        kappa: sol.value.unwrap(),
        witness,
        n1,
        n2,
        bounds: applicable_bounds(s),
    })
}

/// Solves the LP and returns the raw solution as well (for certificate tests).
pub fn kappa_with_solution(s: &Staircase) -> Result<(KappaResult, LpProblem, LpSolution), ShannonError> {
    let p = build_shannon_lp(s);
    let sol = ratlp::solve(&p)?;
    if sol.status != LpStatus::Optimal {
        return Err(ShannonError::UnexpectedStatus(sol.status));
    }
    let (n1, n2) = (s.n1(), s.n2());
    let grid_vars = (n1 as usize + 1) * (n2 as usize + 1);
    let witness = RankGrid::new(n1, n2, sol.assignment[..grid_vars].to_vec()).unwrap();
    let res = KappaResult {
        kappa: sol.value.clone().unwrap(),
        witness,
        n1,
        n2,
        bounds: applicable_bounds(s),
    };
    Ok((res, p, sol))
}

fn applicable_bounds(s: &Staircase) -> Vec<BoundReport> {
    let widths = s.widths();
    let heights = s.heights();
    let points = s.points();

    let single_steps: Vec<u32> = widths
        .iter()
        .enumerate()
        .filter(|&(k, &w)| w >= 2 && points[k].0 >= 1)
        .map(|(_, &w)| w)
        .collect();
    let single = BoundReport {
        kind: BoundKind::SingleStep,
        applicable: !single_steps.is_empty(),
        value: single_steps
            .iter()
            .map(|&w| bound_single_step(w as i64).unwrap())
            .max(),
    };

    let matus_ok = !widths.is_empty()
        && heights.iter().all(|&h| h == 1)
        && widths.iter().all(|&w| w >= 2)
        && points[0].0 >= 1;
    let matus = BoundReport {
        kind: BoundKind::Matus,
        applicable: matus_ok,
        value: matus_ok.then(|| bound_matus(&widths).unwrap()),
    };
    let improved = BoundReport {
        kind: BoundKind::MatusImproved,
        applicable: matus_ok,
        value: matus_ok.then(|| bound_matus_improved(&widths).unwrap()),
    };
    vec![single, matus, improved]
}

/// Violation record from [`verify_rankgrid`].
#[derive(Debug, Clone)]
pub struct RankViolation {
    pub kind: ConstraintKind,
    pub at: (u32, u32),
    /// `lhs - rhs`; negative by construction.
    pub slack: Rational,
}

/// Checks a rank grid against every constraint of the structure; an empty
/// report means the grid realizes the structure at secret size 1.
pub fn verify_rankgrid(s: &Staircase, g: &RankGrid) -> Result<Vec<RankViolation>, ShannonError> {
    if g.n1() != s.n1() || g.n2() != s.n2() {
        return Err(ShannonError::DimensionMismatch {
            got_n1: g.n1(),
            got_n2: g.n2(),
            want_n1: s.n1(),
            want_n2: s.n2(),
        });
    }
    let mut report = Vec::new();
    if !g.get(0, 0).is_zero() {
        report.push(RankViolation {
            kind: ConstraintKind::Pointed,
            at: (0, 0),
            slack: -g.get(0, 0).clone(),
        });
    }
    for i in 0..=g.n1() {
        for j in 0..=g.n2() {
            if g.get(i, j).is_negative() {
                report.push(RankViolation {
                    kind: ConstraintKind::Pointed,
                    at: (i, j),
                    slack: g.get(i, j).clone(),
                });
            }
        }
    }
    for gc in grid_constraints(s) {
        let mut lhs = Rational::zero();
        for ((i, j), c) in &gc.terms {
            lhs += int(*c as i64) * g.get(*i, *j);
        }
        let slack = lhs - int(gc.rhs as i64);
        if slack.is_negative() {
            report.push(RankViolation {
                kind: gc.kind,
                at: gc.at,
                slack,
            });
        }
    }
    Ok(report)
}

/// `2 - 1/w`, the single-step lower bound.
pub fn bound_single_step(w: i64) -> Result<Rational, ShannonError> {
    if w < 1 {
        return Err(ShannonError::NonPositiveWidth);
    }
    Ok(int(2) - rat(1, w))
}

/// `κ0 = 1 + (l-1) / (1 + Σ 1/(w_k - 1))` for height-1 staircases.
pub fn bound_matus(widths: &[u32]) -> Result<Rational, ShannonError> {
    if widths.is_empty() {
        return Err(ShannonError::NoWidths);
    }
    if let Some(&w) = widths.iter().find(|&&w| w < 2) {
        return Err(ShannonError::WidthTooSmall(w));
    }
    let steps = int(widths.len() as i64);
    let sum: Rational = widths.iter().map(|&w| rat(1, (w - 1) as i64)).sum();
    Ok(Rational::one() + steps / (Rational::one() + sum))
}

/// The strengthened height-1 bound: intermediate steps narrower than `κ0`
/// have their chain summand replaced by the three-step variant, and the
/// binding value of `V` is recomputed by the same rearrangement. Substituted
/// blocks span three steps so chosen indices are kept at least 3 apart.
pub fn bound_matus_improved(widths: &[u32]) -> Result<Rational, ShannonError> {
    let plain = bound_matus(widths)?;
    let n = widths.len();
    if n < 3 {
        return Ok(plain);
    }
    let mut improved_at = vec![false; n];
    let mut k = 1;
    while k + 1 < n {
        if int(widths[k] as i64) < plain {
            improved_at[k] = true;
            k += 3;
        } else {
            k += 1;
        }
    }
    if !improved_at.iter().any(|&b| b) {
        return Ok(plain);
    }
    // Solve V = l - Σ (V - 1 + e_k)/D_k, linear in V.
    let ell = int(n as i64 + 1);
    let mut inv_sum = Rational::zero();
    let mut const_sum = Rational::zero();
    for k in 0..n {
        let (d, e) = if improved_at[k] {
            let delta = (widths[k - 1] + widths[k + 1]) as i64;
            (int(widths[k] as i64 - 1 + delta), int(delta))
        } else {
            (int(widths[k] as i64 - 1), Rational::zero())
        };
        inv_sum += Rational::one() / d.clone();
        const_sum += (Rational::one() - e) / d;
    }
    let v_star = (ell + const_sum) / (Rational::one() + inv_sum);
    Ok(plain.max(v_star))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlp::Relation;

    fn stairs(pts: &[(u32, u32)]) -> Staircase {
        Staircase::from_points(pts.to_vec()).unwrap()
    }

    #[test]
    fn lp_size_for_fig_two_point_structure() {
        let s = Staircase::new(vec![(2, 4), (5, 2)], 8, 6).unwrap();
        let p = build_shannon_lp(&s);
        // 63 point variables plus the objective variable.
        assert_eq!(p.num_vars, 63 + 1);
    }

    #[test]
    fn smallest_threshold_lp() {
        let s = stairs(&[(1, 0)]);
        let p = build_shannon_lp(&s);
        // Grid 1x0: variables f(0,0), f(1,0), t.
        assert_eq!(p.num_vars, 3);
        // f(0,0) = 0, one strong monotonicity, t >= f(1,0).
        assert_eq!(p.constraints.len(), 3);
        let strong: Vec<_> = p
            .constraints
            .iter()
            .filter(|c| c.relation == Relation::Ge && c.rhs == Rational::one())
            .collect();
        assert_eq!(strong.len(), 1);
    }

    #[test]
    fn constraint_classes_for_unit_corner() {
        // Hand enumeration for [(1,1)] on the 2x2 grid (9 points):
        // strong mono-H at (0,1),(0,2); strong mono-V at (1,0),(2,0);
        // strong submod1-H at rows j=1,2; strong submod1-V at i=1,2;
        // no strong submod2 (the square at (0,0) has two unqualified points).
        let s = Staircase::new(vec![(1, 1)], 2, 2).unwrap();
        let gcs = grid_constraints(&s);
        let count = |kind: ConstraintKind, strong: bool| {
            gcs.iter()
                .filter(|c| c.kind == kind && c.strong() == strong)
                .count()
        };
        assert_eq!(count(ConstraintKind::MonoH, true), 2);
        assert_eq!(count(ConstraintKind::MonoH, false), 4);
        assert_eq!(count(ConstraintKind::MonoV, true), 2);
        assert_eq!(count(ConstraintKind::MonoV, false), 4);
        assert_eq!(count(ConstraintKind::Submod1H, true), 2);
        assert_eq!(count(ConstraintKind::Submod1H, false), 1);
        assert_eq!(count(ConstraintKind::Submod1V, true), 2);
        assert_eq!(count(ConstraintKind::Submod1V, false), 1);
        assert_eq!(count(ConstraintKind::Submod2, true), 0);
        assert_eq!(count(ConstraintKind::Submod2, false), 4);
        let strong_mono_h: Vec<_> = gcs
            .iter()
            .filter(|c| c.kind == ConstraintKind::MonoH && c.strong())
            .map(|c| c.at)
            .collect();
        assert_eq!(strong_mono_h, vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn kappa_single_threshold_point() {
        let r = kappa(&stairs(&[(1, 0)])).unwrap();
        assert_eq!(r.kappa, int(1));
    }

    #[test]
    fn kappa_proposition_structure() {
        let r = kappa(&stairs(&[(0, 3), (1, 1), (3, 0)])).unwrap();
        assert_eq!(r.kappa, rat(3, 2));
        assert_eq!((r.n1, r.n2), (3, 3));
    }

    #[test]
    fn kappa_witness_self_verifies() {
        let s = stairs(&[(0, 3), (1, 1), (3, 0)]);
        let r = kappa(&s).unwrap();
        assert!(verify_rankgrid(&s, &r.witness).unwrap().is_empty());
        let h = r.witness.h().unwrap().clone();
        let v = r.witness.v().unwrap().clone();
        assert_eq!(h.max(v), r.kappa);
    }

    #[test]
    fn degenerate_all_qualified_structure() {
        let s = Staircase::new(vec![(0, 0)], 1, 1).unwrap();
        let r = kappa(&s).unwrap();
        assert_eq!(r.kappa, int(0));
    }

    #[test]
    fn zero_grid_reports_strong_violations() {
        let s = stairs(&[(1, 1)]);
        let g = RankGrid::zero(1, 1);
        let report = verify_rankgrid(&s, &g).unwrap();
        assert!(!report.is_empty());
        assert!(report
            .iter()
            .all(|v| v.slack == -Rational::one() && v.kind != ConstraintKind::Pointed));
    }

    #[test]
    fn verify_dimension_mismatch() {
        let s = stairs(&[(1, 1)]);
        let g = RankGrid::zero(2, 2);
        assert!(matches!(
            verify_rankgrid(&s, &g),
            Err(ShannonError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn single_step_bound_values() {
        assert_eq!(bound_single_step(3).unwrap(), rat(5, 3));
        assert_eq!(bound_single_step(1).unwrap(), int(1));
        assert_eq!(bound_single_step(5).unwrap(), rat(9, 5));
        assert!(matches!(
            bound_single_step(0),
            Err(ShannonError::NonPositiveWidth)
        ));
    }

    #[test]
    fn matus_bound_values() {
        assert_eq!(bound_matus(&[3, 3, 2, 3]).unwrap(), rat(15, 7));
        assert_eq!(bound_matus(&[3]).unwrap(), rat(5, 3));
        // All widths equal w with l-1 entries: 1 + (l-1)/(1+(l-1)/(w-1)).
        for w in 2u32..=6 {
            for steps in 1usize..=5 {
                let expect = Rational::one()
                    + int(steps as i64)
                        / (Rational::one() + rat(steps as i64, (w - 1) as i64));
                assert_eq!(bound_matus(&vec![w; steps]).unwrap(), expect);
            }
        }
        assert!(matches!(
            bound_matus(&[3, 1, 3]),
            Err(ShannonError::WidthTooSmall(1))
        ));
    }

    #[test]
    fn improved_bound_on_narrow_intermediate_step() {
        let plain = bound_matus(&[3, 3, 2, 3]).unwrap();
        let improved = bound_matus_improved(&[3, 3, 2, 3]).unwrap();
        assert!(improved > plain);
        assert!(improved <= rat(75, 34));
        // Regression value for the chosen rearrangement.
        assert_eq!(improved, rat(81, 37));
    }

    #[test]
    fn improved_bound_no_trigger_equals_plain() {
        assert_eq!(
            bound_matus_improved(&[3, 3, 3]).unwrap(),
            bound_matus(&[3, 3, 3]).unwrap()
        );
    }

    #[test]
    fn improved_bound_strictly_better_on_4_2_4() {
        let plain = bound_matus(&[4, 2, 4]).unwrap();
        let improved = bound_matus_improved(&[4, 2, 4]).unwrap();
        assert!(improved > plain);
        assert_eq!(improved, rat(35, 16));
    }

    #[test]
    fn bounds_attached_to_result() {
        let r = kappa(&stairs(&[(1, 1), (4, 0)])).unwrap();
        let single = r
            .bounds
            .iter()
            .find(|b| b.kind == BoundKind::SingleStep)
            .unwrap();
        assert!(single.applicable);
        assert_eq!(single.value, Some(rat(5, 3)));
    }
}
