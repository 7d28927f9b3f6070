//! Edge-difference form of rank grids, the realization checker, and the
//! explicit constructions matching the tight bounds.
//!
//! A rank grid is equivalently described by the values of its horizontal and
//! vertical edge differences. Conditions (a)-(f) on those differences
//! characterize realizations at secret size 1: non-negativity, square
//! consistency, decreasing rows/columns, crossing edges at least 1, a unit
//! increment between edge pairs at the boundary, and a unit drop across
//! three-qualified squares. The checker is the ground truth for every
//! construction here.

use crate::rat::{int, rat, Rational};
use crate::shannon::RankGrid;
use crate::staircase::QualMap;
use num_traits::{One, Zero};
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("edge grid disagrees with the qualification map ({got_n1}x{got_n2} vs {want_n1}x{want_n2})")]
    DimensionMismatch {
        got_n1: u32,
        got_n2: u32,
        want_n1: u32,
        want_n2: u32,
    },
    #[error("edge values are inconsistent at square ({0}, {1})")]
    InconsistentEdges(u32, u32),
    #[error("construction precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("malformed edge CSV: {0}")]
    BadCsv(String),
}

/// Horizontal and vertical edge values on an `(n1+1) x (n2+1)` grid.
///
/// `h(x, y)` sits on the edge `(x,y)-(x+1,y)` for `0 <= x < n1`;
/// `v(x, y)` on `(x,y)-(x,y+1)` for `0 <= y < n2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeGrid {
    n1: u32,
    n2: u32,
    hval: Vec<Rational>,
    vval: Vec<Rational>,
}

impl EdgeGrid {
    pub fn zero(n1: u32, n2: u32) -> Self {
        EdgeGrid {
            n1,
            n2,
            hval: vec![Rational::zero(); n1 as usize * (n2 as usize + 1)],
            vval: vec![Rational::zero(); (n1 as usize + 1) * n2 as usize],
        }
    }

    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn n2(&self) -> u32 {
        self.n2
    }

    pub fn h(&self, x: u32, y: u32) -> &Rational {
        debug_assert!(x < self.n1 && y <= self.n2);
        &self.hval[x as usize * (self.n2 as usize + 1) + y as usize]
    }

    pub fn v(&self, x: u32, y: u32) -> &Rational {
        debug_assert!(x <= self.n1 && y < self.n2);
        &self.vval[x as usize * self.n2 as usize + y as usize]
    }

    pub fn set_h(&mut self, x: u32, y: u32, val: Rational) {
        self.hval[x as usize * (self.n2 as usize + 1) + y as usize] = val;
    }

    pub fn set_v(&mut self, x: u32, y: u32, val: Rational) {
        self.vval[x as usize * self.n2 as usize + y as usize] = val;
    }

    /// Two CSV matrices, horizontal then vertical, separated by marker lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("horizontal\n");
        for y in 0..=self.n2 {
            let row: Vec<String> = (0..self.n1)
                .map(|x| crate::rat::fmt_rat(self.h(x, y)))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out.push_str("vertical\n");
        for y in 0..self.n2 {
            let row: Vec<String> = (0..=self.n1)
                .map(|x| crate::rat::fmt_rat(self.v(x, y)))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, WitnessError> {
        let mut h_rows: Vec<Vec<Rational>> = Vec::new();
        let mut v_rows: Vec<Vec<Rational>> = Vec::new();
        let mut section = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            match line {
                "horizontal" => section = Some('h'),
                "vertical" => section = Some('v'),
                _ => {
                    let row: Option<Vec<Rational>> =
                        line.split(',').map(crate::rat::parse_rat).collect();
                    let row = row
                        .ok_or_else(|| WitnessError::BadCsv(format!("unparsable row: {line}")))?;
                    match section {
                        Some('h') => h_rows.push(row),
                        Some('v') => v_rows.push(row),
                        _ => return Err(WitnessError::BadCsv("missing section marker".into())),
                    }
                }
            }
        }
        if h_rows.is_empty() || v_rows.is_empty() {
            return Err(WitnessError::BadCsv("both matrices required".into()));
        }
        let n2 = h_rows.len() as u32 - 1;
        let n1 = h_rows[0].len() as u32;
        if v_rows.len() as u32 != n2 || v_rows.iter().any(|r| r.len() as u32 != n1 + 1) {
            return Err(WitnessError::BadCsv("matrix shapes disagree".into()));
        }
        if h_rows.iter().any(|r| r.len() as u32 != n1) {
            return Err(WitnessError::BadCsv("ragged horizontal matrix".into()));
        }
        let mut e = EdgeGrid::zero(n1, n2);
        for (y, row) in h_rows.into_iter().enumerate() {
            for (x, val) in row.into_iter().enumerate() {
                e.set_h(x as u32, y as u32, val);
            }
        }
        for (y, row) in v_rows.into_iter().enumerate() {
            for (x, val) in row.into_iter().enumerate() {
                e.set_v(x as u32, y as u32, val);
            }
        }
        Ok(e)
    }
}

/// Checks square consistency and integrates edge values into point values,
/// with `f(0,0) = 0`.
pub fn edges_to_rankgrid(e: &EdgeGrid) -> Result<RankGrid, WitnessError> {
    for x in 0..e.n1 {
        for y in 0..e.n2 {
            if e.v(x, y) + e.h(x, y + 1) != e.h(x, y) + e.v(x + 1, y) {
                return Err(WitnessError::InconsistentEdges(x, y));
            }
        }
    }
    let mut g = RankGrid::zero(e.n1, e.n2);
    for x in 0..e.n1 {
        let val = g.get(x, 0) + e.h(x, 0);
        g.set(x + 1, 0, val);
    }
    for x in 0..=e.n1 {
        for y in 0..e.n2 {
            let val = g.get(x, y) + e.v(x, y);
            g.set(x, y + 1, val);
        }
    }
    Ok(g)
}

/// First differences of a rank grid.
pub fn rankgrid_to_edges(g: &RankGrid) -> EdgeGrid {
    let mut e = EdgeGrid::zero(g.n1(), g.n2());
    for x in 0..g.n1() {
        for y in 0..=g.n2() {
            e.set_h(x, y, g.get(x + 1, y) - g.get(x, y));
        }
    }
    for x in 0..=g.n1() {
        for y in 0..g.n2() {
            e.set_v(x, y, g.get(x, y + 1) - g.get(x, y));
        }
    }
    e
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    NonNegative,
    Consistency,
    Decreasing,
    CrossingUnit,
    PairIncrement,
    SquareDrop,
}

impl Condition {
    pub fn label(self) -> &'static str {
        match self {
            Condition::NonNegative => "8a",
            Condition::Consistency => "8b",
            Condition::Decreasing => "8c",
            Condition::CrossingUnit => "8d",
            Condition::PairIncrement => "8e",
            Condition::SquareDrop => "8f",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Horizontal,
    Vertical,
    Square,
}

#[derive(Debug, Clone)]
pub struct EdgeViolation {
    pub condition: Condition,
    pub kind: EdgeKind,
    pub at: (u32, u32),
}

#[derive(Debug, Clone, Default)]
pub struct ConditionReport {
    pub violations: Vec<EdgeViolation>,
}

impl ConditionReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, condition: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == condition)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<serde_json::Value> = self
            .violations
            .iter()
            .map(|v| {
                json!({
                    "condition": v.condition.label(),
                    "kind": match v.kind {
                        EdgeKind::Horizontal => "horizontal",
                        EdgeKind::Vertical => "vertical",
                        EdgeKind::Square => "square",
                    },
                    "at": [v.at.0, v.at.1],
                })
            })
            .collect();
        json!({ "ok": self.is_empty(), "violations": items })
    }
}

/// Runs conditions (a)-(f) against the qualification map. An empty report
/// means the edges encode a realization of the structure at secret size 1.
pub fn check_conditions(e: &EdgeGrid, q: &QualMap) -> Result<ConditionReport, WitnessError> {
    if e.n1 != q.n1() || e.n2 != q.n2() {
        return Err(WitnessError::DimensionMismatch {
            got_n1: e.n1,
            got_n2: e.n2,
            want_n1: q.n1(),
            want_n2: q.n2(),
        });
    }
    let one = Rational::one();
    let mut report = ConditionReport::default();
    let mut push =
        |condition, kind, at| report.violations.push(EdgeViolation { condition, kind, at });

    for x in 0..e.n1 {
        for y in 0..=e.n2 {
            if e.h(x, y) < &Rational::zero() {
                push(Condition::NonNegative, EdgeKind::Horizontal, (x, y));
            }
        }
    }
    for x in 0..=e.n1 {
        for y in 0..e.n2 {
            if e.v(x, y) < &Rational::zero() {
                push(Condition::NonNegative, EdgeKind::Vertical, (x, y));
            }
        }
    }
    for x in 0..e.n1 {
        for y in 0..e.n2 {
            if e.v(x, y) + e.h(x, y + 1) != e.h(x, y) + e.v(x + 1, y) {
                push(Condition::Consistency, EdgeKind::Square, (x, y));
            }
        }
    }
    // (c) decreasing left to right and bottom up, both edge kinds.
    for y in 0..=e.n2 {
        for x in 1..e.n1 {
            if e.h(x - 1, y) < e.h(x, y) {
                push(Condition::Decreasing, EdgeKind::Horizontal, (x, y));
            }
        }
    }
    for y in 1..=e.n2 {
        for x in 0..e.n1 {
            if e.h(x, y - 1) < e.h(x, y) {
                push(Condition::Decreasing, EdgeKind::Horizontal, (x, y));
            }
        }
    }
    for y in 0..e.n2 {
        for x in 1..=e.n1 {
            if e.v(x - 1, y) < e.v(x, y) {
                push(Condition::Decreasing, EdgeKind::Vertical, (x, y));
            }
        }
    }
    for y in 1..e.n2 {
        for x in 0..=e.n1 {
            if e.v(x, y - 1) < e.v(x, y) {
                push(Condition::Decreasing, EdgeKind::Vertical, (x, y));
            }
        }
    }
    // (d) an edge between a qualified and an unqualified vertex is >= 1.
    for x in 0..e.n1 {
        for y in 0..=e.n2 {
            if q.get(x, y) != q.get(x + 1, y) && e.h(x, y) < &one {
                push(Condition::CrossingUnit, EdgeKind::Horizontal, (x, y));
            }
        }
    }
    for x in 0..=e.n1 {
        for y in 0..e.n2 {
            if q.get(x, y) != q.get(x, y + 1) && e.v(x, y) < &one {
                push(Condition::CrossingUnit, EdgeKind::Vertical, (x, y));
            }
        }
    }
    // (e) unit increment between adjacent edges when the second has two
    // qualified endpoints and the first exactly one.
    for y in 0..=e.n2 {
        for x in 1..e.n1 {
            if q.get(x, y) && q.get(x + 1, y) && !q.get(x - 1, y) {
                let need = e.h(x, y) + &one;
                if e.h(x - 1, y) < &need {
                    push(Condition::PairIncrement, EdgeKind::Horizontal, (x, y));
                }
            }
        }
    }
    for x in 0..=e.n1 {
        for y in 1..e.n2 {
            if q.get(x, y) && q.get(x, y + 1) && !q.get(x, y - 1) {
                let need = e.v(x, y) + &one;
                if e.v(x, y - 1) < &need {
                    push(Condition::PairIncrement, EdgeKind::Vertical, (x, y));
                }
            }
        }
    }
    // (f) squares with three qualified nodes: the left edge exceeds the
    // right edge by at least 1.
    for x in 0..e.n1 {
        for y in 0..e.n2 {
            let quals = [
                q.get(x, y),
                q.get(x + 1, y),
                q.get(x, y + 1),
                q.get(x + 1, y + 1),
            ];
            if quals.iter().filter(|&&b| b).count() == 3 {
                let need = e.v(x + 1, y) + &one;
                if e.v(x, y) < &need {
                    push(Condition::SquareDrop, EdgeKind::Square, (x, y));
                }
            }
        }
    }
    Ok(report)
}

/// Witness for a two-point staircase `(i1, j1), (i1+w, j1-h)`. Values are
/// multiples of `1/w`; achieves `H = V = (2w-1)/w`.
pub fn construct_single_step(
    i1: u32,
    j1: u32,
    w: u32,
    h: u32,
    n1: u32,
    n2: u32,
) -> Result<EdgeGrid, WitnessError> {
    if i1 < 1 || w < 2 || h < 1 || h > w || j1 < h {
        return Err(WitnessError::PreconditionViolation(format!(
            "need i1 >= 1, w >= 2, 1 <= h <= w, j1 >= h (got i1={i1}, j1={j1}, w={w}, h={h})"
        )));
    }
    let i2 = i1 + w;
    let j2 = j1 - h;
    if n1 < i2 || n2 < j1 {
        return Err(WitnessError::PreconditionViolation(format!(
            "grid {n1}x{n2} too small for points ({i1},{j1}), ({i2},{j2})"
        )));
    }
    let wi = w as i64;
    let unit = |n: i64| rat(n, wi);
    let mut e = EdgeGrid::zero(n1, n2);
    for x in 0..n1 {
        for y in 0..=n2 {
            let val = if x < i1 {
                unit(2 * wi - 1)
            } else if x < i2 {
                if y < j1 {
                    unit(wi - 1 + (j1 - y).min(h) as i64)
                } else if x <= i2 - 2 {
                    unit(wi - 1)
                } else {
                    Rational::zero()
                }
            } else {
                Rational::zero()
            };
            e.set_h(x, y, val);
        }
    }
    for x in 0..=n1 {
        for y in 0..n2 {
            let val = if y < j2 {
                unit(2 * wi - 1)
            } else if y < j1 {
                if x <= i1 {
                    unit(2 * wi - 1)
                } else if x < i2 {
                    unit(2 * wi - 1 - (x - i1) as i64)
                } else if y + 2 <= j1 {
                    unit(wi - 1)
                } else {
                    Rational::zero()
                }
            } else {
                Rational::zero()
            };
            e.set_v(x, y, val);
        }
    }
    Ok(e)
}

/// Witness for regular staircases with equal width and height `w`: the tile
/// pattern repeats down-right along the staircase diagonal, with saturated
/// columns left of the first point and rows below the last. Achieves
/// `H = V = (2w-1)/w`.
pub fn construct_regular_equal(
    w: u32,
    ell: u32,
    i1: u32,
    j1: u32,
    n1: u32,
    n2: u32,
) -> Result<EdgeGrid, WitnessError> {
    if w < 2 || ell < 1 {
        return Err(WitnessError::PreconditionViolation(format!(
            "need w >= 2 and ell >= 1 (got w={w}, ell={ell})"
        )));
    }
    if j1 < (ell - 1) * w {
        return Err(WitnessError::PreconditionViolation(format!(
            "j1={j1} too small for {ell} points of height {w}"
        )));
    }
    let i_last = i1 + (ell - 1) * w;
    let j_last = j1 - (ell - 1) * w;
    if n1 < i_last || n2 < j1 {
        return Err(WitnessError::PreconditionViolation(format!(
            "grid {n1}x{n2} too small (staircase runs ({i1},{j1})..({i_last},{j_last}))"
        )));
    }
    let wi = w as i64;
    let (i1w, j1w, j_lastw) = (i1 as i64, j1 as i64, j_last as i64);

    // Band value at a point (virtual staircase points extend the diagonal).
    let hval_band = |x: i64, y: i64| -> Rational {
        let b = (x - i1w).div_euclid(wi);
        let anchor_i = i1w + b * wi;
        let anchor_j = j1w - b * wi;
        if x == anchor_i + wi - 1 && y >= anchor_j {
            return Rational::zero();
        }
        rat((wi - 1 + anchor_j - y).clamp(0, 2 * wi - 1), wi)
    };
    let vval_band = |x: i64, y: i64| -> Rational {
        let b = (j1w - 1 - y).div_euclid(wi);
        let anchor_i = i1w + b * wi;
        let anchor_j = j1w - b * wi;
        if y == anchor_j - 1 && x >= anchor_i + wi {
            return Rational::zero();
        }
        rat((2 * wi - 1 - (x - anchor_i)).clamp(0, 2 * wi - 1), wi)
    };

    let mut e = EdgeGrid::zero(n1, n2);
    for x in 0..n1 as i64 {
        for y in 0..=n2 as i64 {
            let val = if x < i1w {
                rat(2 * wi - 1, wi)
            } else {
                hval_band(x, y.max(j_lastw))
            };
            e.set_h(x as u32, y as u32, val);
        }
    }
    for x in 0..=n1 as i64 {
        for y in 0..n2 as i64 {
            let val = if y < j_lastw {
                rat(2 * wi - 1, wi)
            } else {
                vval_band(x.min(i1w), y)
            };
            e.set_v(x as u32, y as u32, val);
        }
    }
    Ok(e)
}

/// Witness for height-1 staircases whose widths all reach the tight bound:
/// vertical runs interpolate from `V = κ0` down to 1, horizontal band values
/// follow the consistency recurrence with a `+1` increment below the
/// boundary, zero after the last step. Achieves `H = V = κ0`.
pub fn construct_height1(
    widths: &[u32],
    i1: u32,
    n1: u32,
    n2: u32,
) -> Result<EdgeGrid, WitnessError> {
    if widths.is_empty() || i1 < 1 {
        return Err(WitnessError::PreconditionViolation(
            "need at least one width and i1 >= 1".into(),
        ));
    }
    if let Some(&w) = widths.iter().find(|&&w| w < 2) {
        return Err(WitnessError::PreconditionViolation(format!("width {w} < 2")));
    }
    let v = crate::shannon::bound_matus(widths).expect("widths validated above");
    if let Some(&w) = widths.iter().find(|&&w| int(w as i64) < v) {
        return Err(WitnessError::PreconditionViolation(format!(
            "width {w} below the bound {}",
            crate::rat::fmt_rat(&v)
        )));
    }
    let ell = widths.len() + 1;
    let mut i_pts = vec![i1];
    for &w in widths {
        i_pts.push(i_pts.last().unwrap() + w);
    }
    let j1 = (ell - 1) as u32;
    if n1 < *i_pts.last().unwrap() || n2 < j1 {
        return Err(WitnessError::PreconditionViolation(format!(
            "grid {n1}x{n2} too small (staircase ends at ({}, 0))",
            i_pts.last().unwrap()
        )));
    }
    // Band values: B_{l-1} = 0 after the last step, then
    // B_{k-1} = B_k + (w_k - V)/(w_k - 1) leftwards.
    let mut band = vec![Rational::zero(); ell];
    for k in (1..ell).rev() {
        let w = int(widths[k - 1] as i64);
        band[k - 1] = &band[k] + (&w - &v) / (w - Rational::one());
    }

    let mut e = EdgeGrid::zero(n1, n2);
    for x in 0..n1 {
        for y in 0..=n2 {
            let val = if x < i1 {
                &band[0] + Rational::one()
            } else if x >= *i_pts.last().unwrap() {
                Rational::zero()
            } else {
                let k = i_pts.iter().rposition(|&p| p <= x).unwrap() + 1;
                let j_next = (ell - 1 - k) as u32; // row of point k+1
                if y <= j_next {
                    &band[k] + Rational::one()
                } else if x == i_pts[k] - 1 {
                    band[k].clone()
                } else {
                    band[k - 1].clone()
                }
            };
            e.set_h(x, y, val);
        }
    }
    for x in 0..=n1 {
        for y in 0..n2 {
            // Row y holds the run under step k = l-1-y.
            let val = if y >= j1 {
                Rational::zero()
            } else {
                let k = ell - 1 - y as usize;
                let i_k = i_pts[k - 1];
                let i_next = i_pts[k];
                if x <= i_k {
                    v.clone()
                } else if x < i_next {
                    let d = (&v - Rational::one()) / int((widths[k - 1] - 1) as i64);
                    &v - d * int((x - i_k) as i64)
                } else {
                    Rational::zero()
                }
            };
            e.set_v(x, y, val);
        }
    }
    Ok(e)
}
