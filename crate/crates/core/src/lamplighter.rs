//! Wreaths over the square grid with integer lamps, the geometric model of
//! the lamplighter group `ℤ ≀ ℤ²`.
//!
//! A wreath is an axis-parallel rectangle with half-integer corners together
//! with a finitely supported map `ℤ² → ℤ`. Coordinates of rectangles are
//! stored doubled, so every stored corner coordinate is odd.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A grid point of `ℤ²`.
pub type Point = (i64, i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawRectangle")]
pub struct Rectangle {
    x_lo: i64,
    x_hi: i64,
    y_lo: i64,
    y_hi: i64,
}

#[derive(Deserialize)]
struct RawRectangle {
    x_lo: i64,
    x_hi: i64,
    y_lo: i64,
    y_hi: i64,
}

impl TryFrom<RawRectangle> for Rectangle {
    type Error = Error;

    fn try_from(r: RawRectangle) -> Result<Self> {
        Rectangle::from_doubled(r.x_lo, r.x_hi, r.y_lo, r.y_hi)
    }
}

impl Rectangle {
    /// Builds a rectangle from doubled corner coordinates, which must be odd
    /// with `lo < hi` on both axes.
    pub fn from_doubled(x_lo: i64, x_hi: i64, y_lo: i64, y_hi: i64) -> Result<Self> {
        let odd = [x_lo, x_hi, y_lo, y_hi]
            .iter()
            .all(|c| c.rem_euclid(2) == 1);
        if !odd || x_lo >= x_hi || y_lo >= y_hi {
            return Err(Error::InvalidDocument(format!(
                "rectangle corners (doubled) {x_lo}..{x_hi} x {y_lo}..{y_hi} must be odd and increasing"
            )));
        }
        Ok(Rectangle {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        })
    }

    /// The smallest rectangle whose interior grid points are
    /// `[x_min, x_max] × [y_min, y_max]`.
    pub fn spanning(x_min: i64, x_max: i64, y_min: i64, y_max: i64) -> Result<Self> {
        Rectangle::from_doubled(2 * x_min - 1, 2 * x_max + 1, 2 * y_min - 1, 2 * y_max + 1)
    }

    /// `[x−½, x+½] × [y−½, y+½]`.
    pub fn cell(p: Point) -> Self {
        Rectangle {
            x_lo: 2 * p.0 - 1,
            x_hi: 2 * p.0 + 1,
            y_lo: 2 * p.1 - 1,
            y_hi: 2 * p.1 + 1,
        }
    }

    pub fn doubled(&self) -> [i64; 4] {
        [self.x_lo, self.x_hi, self.y_lo, self.y_hi]
    }

    /// Interior grid points as `(x_min, x_max, y_min, y_max)`.
    pub fn interior_bounds(&self) -> (i64, i64, i64, i64) {
        (
            (self.x_lo + 1) / 2,
            (self.x_hi - 1) / 2,
            (self.y_lo + 1) / 2,
            (self.y_hi - 1) / 2,
        )
    }

    pub fn contains(&self, p: Point) -> bool {
        let (x0, x1, y0, y1) = self.interior_bounds();
        (x0..=x1).contains(&p.0) && (y0..=y1).contains(&p.1)
    }

    pub fn interior(&self) -> impl Iterator<Item = Point> {
        let (x0, x1, y0, y1) = self.interior_bounds();
        (y0..=y1).flat_map(move |y| (x0..=x1).map(move |x| (x, y)))
    }

    pub fn translate(&self, p: Point) -> Self {
        Rectangle {
            x_lo: self.x_lo + 2 * p.0,
            x_hi: self.x_hi + 2 * p.0,
            y_lo: self.y_lo + 2 * p.1,
            y_hi: self.y_hi + 2 * p.1,
        }
    }

    /// Rectangles obtained by moving one side by one unit, in the order
    /// left, right, bottom, top, each outward first.
    pub fn side_moves(&self) -> Vec<Rectangle> {
        let r = *self;
        let candidates = [
            Rectangle {
                x_lo: r.x_lo - 2,
                ..r
            },
            Rectangle {
                x_lo: r.x_lo + 2,
                ..r
            },
            Rectangle {
                x_hi: r.x_hi + 2,
                ..r
            },
            Rectangle {
                x_hi: r.x_hi - 2,
                ..r
            },
            Rectangle {
                y_lo: r.y_lo - 2,
                ..r
            },
            Rectangle {
                y_lo: r.y_lo + 2,
                ..r
            },
            Rectangle {
                y_hi: r.y_hi + 2,
                ..r
            },
            Rectangle {
                y_hi: r.y_hi - 2,
                ..r
            },
        ];
        candidates
            .into_iter()
            .filter(|c| c.x_lo < c.x_hi && c.y_lo < c.y_hi)
            .collect()
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = |c: i64| format!("{}/2", c);
        write!(
            f,
            "[{}, {}]x[{}, {}]",
            h(self.x_lo),
            h(self.x_hi),
            h(self.y_lo),
            h(self.y_hi)
        )
    }
}

/// A finitely supported map `ℤ² → ℤ`; zero values are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<(i64, i64, i64)>", into = "Vec<(i64, i64, i64)>")]
pub struct GridConfig {
    values: BTreeMap<Point, i64>,
}

impl From<Vec<(i64, i64, i64)>> for GridConfig {
    fn from(entries: Vec<(i64, i64, i64)>) -> Self {
        let mut c = GridConfig::default();
        for (x, y, v) in entries {
            c.add((x, y), v);
        }
        c
    }
}

impl From<GridConfig> for Vec<(i64, i64, i64)> {
    fn from(c: GridConfig) -> Self {
        c.values.into_iter().map(|((x, y), v)| (x, y, v)).collect()
    }
}

impl GridConfig {
    pub fn zero() -> Self {
        GridConfig::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Point, i64)>) -> Self {
        let mut c = GridConfig::default();
        for (p, v) in pairs {
            c.add(p, v);
        }
        c
    }

    pub fn get(&self, p: Point) -> i64 {
        self.values.get(&p).copied().unwrap_or(0)
    }

    pub fn set(&mut self, p: Point, v: i64) {
        if v == 0 {
            self.values.remove(&p);
        } else {
            self.values.insert(p, v);
        }
    }

    pub fn add(&mut self, p: Point, v: i64) {
        self.set(p, self.get(p) + v);
    }

    pub fn support(&self) -> impl Iterator<Item = Point> + '_ {
        self.values.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// `ψ1 + ψ2`.
    pub fn sum(&self, other: &GridConfig) -> GridConfig {
        let mut out = self.clone();
        for (&p, &v) in &other.values {
            out.add(p, v);
        }
        out
    }

    /// `x ↦ φ(x − p)`.
    pub fn shifted(&self, p: Point) -> GridConfig {
        GridConfig {
            values: self
                .values
                .iter()
                .map(|(&(x, y), &v)| ((x + p.0, y + p.1), v))
                .collect(),
        }
    }

    pub fn negated(&self) -> GridConfig {
        GridConfig {
            values: self.values.iter().map(|(&q, &v)| (q, -v)).collect(),
        }
    }

    /// Points where the two maps disagree.
    pub fn difference_support(&self, other: &GridConfig) -> Vec<Point> {
        let mut pts: Vec<Point> = self.support().chain(other.support()).collect();
        pts.sort_unstable();
        pts.dedup();
        pts.retain(|&p| self.get(p) != other.get(p));
        pts
    }

    /// `Σ |φ1(p) − φ2(p)|`.
    pub fn l1_distance(&self, other: &GridConfig) -> u64 {
        self.difference_support(other)
            .into_iter()
            .map(|p| self.get(p).abs_diff(other.get(p)))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridWreath {
    pub rect: Rectangle,
    pub config: GridConfig,
}

impl GridWreath {
    pub fn new(rect: Rectangle, config: GridConfig) -> Self {
        GridWreath { rect, config }
    }

    /// The unit cell at the origin with every lamp off.
    pub fn base() -> Self {
        GridWreath {
            rect: Rectangle::cell((0, 0)),
            config: GridConfig::zero(),
        }
    }
}

/// Every wreath one elementary move away: one side of the rectangle moved by
/// one unit, or one interior lamp changed by `±1`.
pub fn elementary_moves(w: &GridWreath) -> Vec<GridWreath> {
    let mut out: Vec<GridWreath> = w
        .rect
        .side_moves()
        .into_iter()
        .map(|r| GridWreath::new(r, w.config.clone()))
        .collect();
    for p in w.rect.interior() {
        for step in [1, -1] {
            let mut config = w.config.clone();
            config.add(p, step);
            out.push(GridWreath::new(w.rect, config));
        }
    }
    out
}

/// Number of grid lines `x = k + ½` or `y = k + ½` separating two points of
/// the union of `points` and the interiors of `rects`.
pub fn hyperplane_count(points: &[Point], rects: &[Rectangle]) -> Result<u64> {
    let boxes = points
        .iter()
        .map(|&(x, y)| (x, x, y, y))
        .chain(rects.iter().map(Rectangle::interior_bounds));
    let (x0, x1, y0, y1) = boxes
        .reduce(|a, b| (a.0.min(b.0), a.1.max(b.1), a.2.min(b.2), a.3.max(b.3)))
        .ok_or(Error::EmptySet)?;
    Ok((x1 - x0 + y1 - y0) as u64)
}

/// `2·#H(R1 ∪ R2 ∪ F) − #H(R1) − #H(R2)`: the number of side moves needed to
/// go from `r1` to `r2` while sweeping every point of `f`.
pub fn tc(r1: &Rectangle, f: &[Point], r2: &Rectangle) -> u64 {
    let joint = hyperplane_count(f, &[*r1, *r2]).expect("rectangles are nonempty");
    let own = |r: &Rectangle| hyperplane_count(&[], &[*r]).expect("rectangles are nonempty");
    2 * joint - own(r1) - own(r2)
}

/// `2·#H(R1 ∪ R2 ∪ φ1Δφ2) − #H(R1) − #H(R2) + Σ |φ1(p) − φ2(p)|`.
pub fn grid_delta(w1: &GridWreath, w2: &GridWreath) -> u64 {
    let diff = w1.config.difference_support(&w2.config);
    tc(&w1.rect, &diff, &w2.rect) + w1.config.l1_distance(&w2.config)
}

/// An element `(p, ψ)` of `ℤ ≀ ℤ²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridElement {
    pub shift: Point,
    pub lamps: GridConfig,
}

impl GridElement {
    pub fn identity() -> Self {
        GridElement {
            shift: (0, 0),
            lamps: GridConfig::zero(),
        }
    }

    /// `(p1, ψ1)(p2, ψ2) = (p1 + p2, ψ1 + ψ2(· − p1))`.
    pub fn compose(&self, other: &GridElement) -> GridElement {
        GridElement {
            shift: (self.shift.0 + other.shift.0, self.shift.1 + other.shift.1),
            lamps: self.lamps.sum(&other.lamps.shifted(self.shift)),
        }
    }

    pub fn inverse(&self) -> GridElement {
        let back = (-self.shift.0, -self.shift.1);
        GridElement {
            shift: back,
            lamps: self.lamps.shifted(back).negated(),
        }
    }

    /// The wreath `(p, ψ)·(cell(0), 0)`, a unit cell carrying the lamps.
    pub fn orbit_point(&self) -> GridWreath {
        grid_action(self, &GridWreath::base())
    }
}

/// `(p, ψ)·(R, φ) = (R + p, ψ + φ(· − p))`.
pub fn grid_action(e: &GridElement, w: &GridWreath) -> GridWreath {
    GridWreath::new(
        w.rect.translate(e.shift),
        e.lamps.sum(&w.config.shifted(e.shift)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(x: i64, y: i64) -> Rectangle {
        Rectangle::cell((x, y))
    }

    #[test]
    fn rectangle_parity() {
        assert!(Rectangle::from_doubled(-1, 1, -1, 1).is_ok());
        assert!(Rectangle::from_doubled(0, 2, -1, 1).is_err());
        assert!(Rectangle::from_doubled(1, 1, -1, 1).is_err());
        assert_eq!(cell(0, 0).interior().collect::<Vec<_>>(), vec![(0, 0)]);
        assert_eq!(
            Rectangle::spanning(-1, 0, 2, 2).unwrap().doubled(),
            [-3, 1, 3, 5]
        );
        let json = serde_json::to_string(&cell(0, 0)).unwrap();
        assert_eq!(json, r#"{"x_lo":-1,"x_hi":1,"y_lo":-1,"y_hi":1}"#);
        assert!(
            serde_json::from_str::<Rectangle>(r#"{"x_lo":0,"x_hi":1,"y_lo":-1,"y_hi":1}"#).is_err()
        );
    }

    #[test]
    fn moves_of_unit_cell() {
        let moves = elementary_moves(&GridWreath::base());
        assert_eq!(moves.len(), 6);
        let rects: Vec<_> = moves[..4].iter().map(|w| w.rect.doubled()).collect();
        assert_eq!(
            rects,
            vec![
                [-3, 1, -1, 1],
                [-1, 3, -1, 1],
                [-1, 1, -3, 1],
                [-1, 1, -1, 3]
            ]
        );
        assert_eq!(moves[4].config, GridConfig::from_pairs([((0, 0), 1)]));
        assert_eq!(moves[5].config, GridConfig::from_pairs([((0, 0), -1)]));
        assert!(moves
            .iter()
            .all(|m| m.config.support().all(|p| p == (0, 0))));
    }

    #[test]
    fn moves_are_symmetric() {
        let w = GridWreath::new(
            Rectangle::spanning(0, 1, 0, 0).unwrap(),
            GridConfig::from_pairs([((3, 3), 2)]),
        );
        for m in elementary_moves(&w) {
            assert!(elementary_moves(&m).contains(&w));
        }
    }

    #[test]
    fn hyperplane_examples() {
        assert_eq!(hyperplane_count(&[(0, 0)], &[]).unwrap(), 0);
        assert_eq!(hyperplane_count(&[(0, 0), (1, 0)], &[]).unwrap(), 1);
        assert_eq!(hyperplane_count(&[(0, 0), (2, 1)], &[]).unwrap(), 3);
        assert_eq!(hyperplane_count(&[], &[]).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn tc_examples() {
        let big = Rectangle::spanning(-1, 1, -1, 1).unwrap();
        assert_eq!(tc(&big, &[(0, 0), (1, -1)], &big), 0);
        assert_eq!(tc(&cell(0, 0), &[], &cell(1, 0)), 2);
        assert_eq!(tc(&cell(0, 0), &[(2, 0)], &cell(0, 0)), 4);
    }

    #[test]
    fn delta_examples() {
        let w = GridWreath::base();
        assert_eq!(grid_delta(&w, &w), 0);
        let lit = GridWreath::new(cell(0, 0), GridConfig::from_pairs([((0, 0), 1)]));
        assert_eq!(grid_delta(&w, &lit), 1);
        assert_eq!(
            grid_delta(&w, &GridWreath::new(cell(1, 0), GridConfig::zero())),
            2
        );
    }

    #[test]
    fn action_examples() {
        let w = GridWreath::base();
        assert_eq!(grid_action(&GridElement::identity(), &w), w);
        let e = GridElement {
            shift: (1, 0),
            lamps: GridConfig::zero(),
        };
        assert_eq!(grid_action(&e, &w).rect, cell(1, 0));
        let a = GridElement {
            shift: (1, 2),
            lamps: GridConfig::from_pairs([((0, 0), 3), ((1, 1), -1)]),
        };
        let b = GridElement {
            shift: (-2, 0),
            lamps: GridConfig::from_pairs([((0, 0), 1)]),
        };
        let lit = GridWreath::new(cell(0, 0), GridConfig::from_pairs([((4, 0), 1)]));
        assert_eq!(
            grid_action(&a.compose(&b), &lit),
            grid_action(&a, &grid_action(&b, &lit))
        );
        assert_eq!(a.compose(&a.inverse()), GridElement::identity());
    }

    #[test]
    fn literal_pullback_by_plus_p_is_not_isometric() {
        // With lamps φ(· + p) the rectangle and the lamp move apart.
        let literal = |p: Point, w: &GridWreath| {
            GridWreath::new(w.rect.translate(p), w.config.shifted((-p.0, -p.1)))
        };
        let a = GridWreath::base();
        let b = GridWreath::new(cell(0, 0), GridConfig::from_pairs([((0, 0), 1)]));
        assert_eq!(grid_delta(&a, &b), 1);
        assert_eq!(grid_delta(&literal((1, 0), &a), &literal((1, 0), &b)), 5);
        let e = GridElement {
            shift: (1, 0),
            lamps: GridConfig::zero(),
        };
        assert_eq!(grid_delta(&grid_action(&e, &a), &grid_action(&e, &b)), 1);
    }
}
