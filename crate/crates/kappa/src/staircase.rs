//! Bipartite access structures as staircases, qualification maps, and
//! multipartite profiles.
//!
//! A staircase is the ordered list of minimal qualified points `(i_k, j_k)`
//! with strictly increasing first coordinates and strictly decreasing second
//! coordinates. A grid point `(i, j)` is qualified iff it dominates some
//! staircase point.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StaircaseError {
    #[error("staircase needs at least one point")]
    Empty,
    #[error("point sequence violates the staircase ordering at index {0}")]
    OrderViolation(usize),
    #[error("coordinates must be non-negative")]
    NegativeCoordinate,
    #[error("grid ({n1}, {n2}) too small for staircase (needs {need_n1}, {need_n2})")]
    GridTooSmall {
        n1: u32,
        n2: u32,
        need_n1: u32,
        need_n2: u32,
    },
    #[error("point ({0}, {1}) outside the grid")]
    OutOfGrid(u32, u32),
}

/// Minimal points of a bipartite access structure on an `(n1+1) x (n2+1)` grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Staircase {
    points: Vec<(u32, u32)>,
    n1: u32,
    n2: u32,
}

#[derive(Debug, Deserialize)]
struct StaircaseDoc {
    points: Vec<(i64, i64)>,
    n1: Option<i64>,
    n2: Option<i64>,
}

impl Staircase {
    /// Validates and builds a staircase with explicit grid bounds.
    pub fn new(points: Vec<(u32, u32)>, n1: u32, n2: u32) -> Result<Self, StaircaseError> {
        if points.is_empty() {
            return Err(StaircaseError::Empty);
        }
        for k in 1..points.len() {
            if points[k].0 <= points[k - 1].0 || points[k].1 >= points[k - 1].1 {
                return Err(StaircaseError::OrderViolation(k));
            }
        }
        let need_n1 = points.last().unwrap().0;
        let need_n2 = points[0].1;
        if n1 < need_n1 || n2 < need_n2 {
            return Err(StaircaseError::GridTooSmall {
                n1,
                n2,
                need_n1,
                need_n2,
            });
        }
        Ok(Staircase { points, n1, n2 })
    }

    /// Builds on the minimal grid `n1 = i_l`, `n2 = j_1`.
    pub fn from_points(points: Vec<(u32, u32)>) -> Result<Self, StaircaseError> {
        if points.is_empty() {
            return Err(StaircaseError::Empty);
        }
        let n1 = points.last().unwrap().0;
        let n2 = points[0].1;
        Staircase::new(points, n1, n2)
    }

    /// Parses the JSON document `{"points": [[i,j],...], "n1": .., "n2": ..}`;
    /// `n1`/`n2` default to the minimal grid.
    pub fn from_json(text: &str) -> Result<Self, StaircaseError> {
        let doc: StaircaseDoc =
            serde_json::from_str(text).map_err(|_| StaircaseError::Empty)?;
        if doc.points.is_empty() {
            return Err(StaircaseError::Empty);
        }
        let mut pts = Vec::with_capacity(doc.points.len());
        for &(i, j) in &doc.points {
            if i < 0 || j < 0 {
                return Err(StaircaseError::NegativeCoordinate);
            }
            pts.push((i as u32, j as u32));
        }
        match (doc.n1, doc.n2) {
            (Some(a), _) if a < 0 => Err(StaircaseError::NegativeCoordinate),
            (_, Some(b)) if b < 0 => Err(StaircaseError::NegativeCoordinate),
            (Some(a), Some(b)) => Staircase::new(pts, a as u32, b as u32),
            (Some(a), None) => {
                let n2 = pts[0].1;
                Staircase::new(pts, a as u32, n2)
            }
            (None, Some(b)) => {
                let n1 = pts.last().unwrap().0;
                Staircase::new(pts, n1, b as u32)
            }
            (None, None) => Staircase::from_points(pts),
        }
    }

    /// Same staircase on an enlarged grid.
    pub fn with_grid(&self, n1: u32, n2: u32) -> Result<Self, StaircaseError> {
        Staircase::new(self.points.clone(), n1, n2)
    }

    pub fn points(&self) -> &[(u32, u32)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn n2(&self) -> u32 {
        self.n2
    }

    /// Step widths `i_{k+1} - i_k`.
    pub fn widths(&self) -> Vec<u32> {
        self.points.windows(2).map(|w| w[1].0 - w[0].0).collect()
    }

    /// Step heights `j_k - j_{k+1}`.
    pub fn heights(&self) -> Vec<u32> {
        self.points.windows(2).map(|w| w[0].1 - w[1].1).collect()
    }

    /// True iff `(i, j)` dominates some staircase point.
    pub fn is_qualified(&self, i: u32, j: u32) -> Result<bool, StaircaseError> {
        if i > self.n1 || j > self.n2 {
            return Err(StaircaseError::OutOfGrid(i, j));
        }
        Ok(self.qualifies(i, j))
    }

    fn qualifies(&self, i: u32, j: u32) -> bool {
        self.points.iter().any(|&(a, b)| i >= a && j >= b)
    }

    /// Tabulates qualification over the whole grid.
    pub fn qualmap(&self) -> QualMap {
        let w = self.n1 as usize + 1;
        let h = self.n2 as usize + 1;
        let mut qualified = vec![false; w * h];
        for i in 0..=self.n1 {
            for j in 0..=self.n2 {
                qualified[i as usize * h + j as usize] = self.qualifies(i, j);
            }
        }
        QualMap {
            n1: self.n1,
            n2: self.n2,
            qualified,
        }
    }
}

/// Boolean qualification marker for every grid point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualMap {
    n1: u32,
    n2: u32,
    qualified: Vec<bool>,
}

impl QualMap {
    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn n2(&self) -> u32 {
        self.n2
    }

    pub fn get(&self, i: u32, j: u32) -> bool {
        debug_assert!(i <= self.n1 && j <= self.n2);
        self.qualified[i as usize * (self.n2 as usize + 1) + j as usize]
    }

    /// Minimal qualified points, ordered by first coordinate.
    pub fn minimal_points(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for i in 0..=self.n1 {
            for j in 0..=self.n2 {
                if self.get(i, j)
                    && (i == 0 || !self.get(i - 1, j))
                    && (j == 0 || !self.get(i, j - 1))
                {
                    out.push((i, j));
                }
            }
        }
        out.sort();
        out
    }
}

/// Per-part cardinalities of a multipartite subset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Profile(pub Vec<u32>);

impl Profile {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Componentwise domination.
    pub fn dominates(&self, other: &Profile) -> bool {
        self.0.len() == other.0.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The example staircase: points (1,3),(3,2),(4,1),(6,0) on a 6x4 grid.
    pub fn fig_example() -> Staircase {
        Staircase::new(vec![(1, 3), (3, 2), (4, 1), (6, 0)], 6, 4).unwrap()
    }

    #[test]
    fn example_staircase_widths_heights() {
        let s = fig_example();
        assert_eq!(s.widths(), vec![2, 1, 2]);
        assert_eq!(s.heights(), vec![1, 1, 1]);
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn single_origin_point_is_valid_and_fills_grid() {
        let s = Staircase::new(vec![(0, 0)], 2, 2).unwrap();
        for i in 0..=2 {
            for j in 0..=2 {
                assert!(s.is_qualified(i, j).unwrap());
            }
        }
    }

    #[test]
    fn order_violation_detected() {
        assert_eq!(
            Staircase::from_points(vec![(2, 1), (1, 3)]),
            Err(StaircaseError::OrderViolation(1))
        );
        assert_eq!(
            Staircase::from_points(vec![(1, 1), (2, 1)]),
            Err(StaircaseError::OrderViolation(1))
        );
        assert_eq!(Staircase::from_points(vec![]), Err(StaircaseError::Empty));
    }

    #[test]
    fn qualification_on_example() {
        let s = fig_example();
        assert!(s.is_qualified(3, 2).unwrap());
        assert!(!s.is_qualified(0, 4).unwrap());
        assert!(s.is_qualified(6, 4).unwrap());
        assert!(!s.is_qualified(2, 1).unwrap());
        assert_eq!(s.is_qualified(7, 0), Err(StaircaseError::OutOfGrid(7, 0)));
    }

    #[test]
    fn qualmap_small_enumeration() {
        // [(1,1)] on a 2x2 grid: exactly the four points dominating (1,1).
        let s = Staircase::new(vec![(1, 1)], 2, 2).unwrap();
        let q = s.qualmap();
        let mut marked = Vec::new();
        for i in 0..=2 {
            for j in 0..=2 {
                if q.get(i, j) {
                    marked.push((i, j));
                }
            }
        }
        assert_eq!(marked, vec![(1, 1), (1, 2), (2, 1), (2, 2)]);
    }

    #[test]
    fn minimal_points_round_trip() {
        let s = fig_example();
        assert_eq!(s.qualmap().minimal_points(), s.points().to_vec());
    }

    #[test]
    fn json_document_parsing() {
        let s = Staircase::from_json(r#"{"points": [[2,4],[5,2]], "n1": 8, "n2": 6}"#).unwrap();
        assert_eq!(s.n1(), 8);
        assert_eq!(s.n2(), 6);
        let t = Staircase::from_json(r#"{"points": [[2,4],[5,2]]}"#).unwrap();
        assert_eq!((t.n1(), t.n2()), (5, 4));
        assert_eq!(
            Staircase::from_json(r#"{"points": [[-1,2]]}"#),
            Err(StaircaseError::NegativeCoordinate)
        );
    }

    #[test]
    fn grid_too_small_rejected() {
        assert!(matches!(
            Staircase::new(vec![(2, 4), (5, 2)], 4, 6),
            Err(StaircaseError::GridTooSmall { .. })
        ));
    }
}
