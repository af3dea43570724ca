//! Exact lattice geometry: points, axis-aligned segments and grid paths.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
}

impl GridPoint {
    pub const fn new(x: i64, y: i64) -> Self {
        GridPoint { x, y }
    }

    pub fn scale(self, k: i64) -> Self {
        GridPoint::new(self.x * k, self.y * k)
    }

    pub fn offset(self, d: Dir, len: i64) -> Self {
        let (dx, dy) = d.delta();
        GridPoint::new(self.x + dx * len, self.y + dy * len)
    }

    pub fn manhattan(self, other: GridPoint) -> i64 {
        (self.x - other.x).abs() + (self.y - other.y).abs()
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl From<(i64, i64)> for GridPoint {
    fn from((x, y): (i64, i64)) -> Self {
        GridPoint::new(x, y)
    }
}

/// The four axis directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dir {
    East,
    North,
    West,
    South,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::East, Dir::North, Dir::West, Dir::South];

    pub fn delta(self) -> (i64, i64) {
        match self {
            Dir::East => (1, 0),
            Dir::North => (0, 1),
            Dir::West => (-1, 0),
            Dir::South => (0, -1),
        }
    }

    pub fn opposite(self) -> Dir {
        self.rotate_ccw().rotate_ccw()
    }

    pub fn rotate_ccw(self) -> Dir {
        match self {
            Dir::East => Dir::North,
            Dir::North => Dir::West,
            Dir::West => Dir::South,
            Dir::South => Dir::East,
        }
    }

    pub fn rotate_cw(self) -> Dir {
        self.rotate_ccw().opposite()
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self, Dir::East | Dir::West)
    }

    /// Direction from `a` to `b` when they are distinct and axis-aligned.
    pub fn between(a: GridPoint, b: GridPoint) -> Option<Dir> {
        match ((b.x - a.x).signum(), (b.y - a.y).signum()) {
            (1, 0) => Some(Dir::East),
            (-1, 0) => Some(Dir::West),
            (0, 1) => Some(Dir::North),
            (0, -1) => Some(Dir::South),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Closed axis-aligned segment of positive length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    pub a: GridPoint,
    pub b: GridPoint,
}

impl Segment {
    pub fn new(a: GridPoint, b: GridPoint) -> Self {
        Segment { a, b }
    }

    pub fn is_horizontal(&self) -> bool {
        self.a.y == self.b.y
    }

    pub fn len(&self) -> i64 {
        self.a.manhattan(self.b)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn x_range(&self) -> (i64, i64) {
        (self.a.x.min(self.b.x), self.a.x.max(self.b.x))
    }

    fn y_range(&self) -> (i64, i64) {
        (self.a.y.min(self.b.y), self.a.y.max(self.b.y))
    }

    pub fn contains(&self, q: GridPoint) -> bool {
        let (x0, x1) = self.x_range();
        let (y0, y1) = self.y_range();
        (x0..=x1).contains(&q.x) && (y0..=y1).contains(&q.y)
    }

    /// Intersection of two segments: `Err(())` on a shared piece of positive length.
    pub fn intersect(&self, other: &Segment) -> Result<Option<GridPoint>, ()> {
        match (self.is_horizontal(), other.is_horizontal()) {
            (true, true) | (false, false) => {
                let horizontal = self.is_horizontal();
                let (line_a, line_b) = if horizontal {
                    (self.a.y, other.a.y)
                } else {
                    (self.a.x, other.a.x)
                };
                if line_a != line_b {
                    return Ok(None);
                }
                let ((a0, a1), (b0, b1)) = if horizontal {
                    (self.x_range(), other.x_range())
                } else {
                    (self.y_range(), other.y_range())
                };
                let lo = a0.max(b0);
                let hi = a1.min(b1);
                if lo > hi {
                    Ok(None)
                } else if lo < hi {
                    Err(())
                } else if horizontal {
                    Ok(Some(GridPoint::new(lo, line_a)))
                } else {
                    Ok(Some(GridPoint::new(line_a, lo)))
                }
            }
            (true, false) => {
                let q = GridPoint::new(other.a.x, self.a.y);
                Ok((self.contains(q) && other.contains(q)).then_some(q))
            }
            (false, true) => other.intersect(self),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("empty point sequence")]
    EmptySequence,
    #[error("points {0} and {1} are not axis-aligned")]
    NonAxisAligned(GridPoint, GridPoint),
    #[error("zero-length segment at {0}")]
    ZeroLengthSegment(GridPoint),
    #[error("collinear consecutive segments meeting at {0}")]
    CollinearConsecutive(GridPoint),
    #[error("path intersects itself")]
    SelfIntersecting,
}

/// A validated path given by its endpoints and bend points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridPath {
    seq: Vec<GridPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Absent,
    Endpoint,
    Interior,
    InteriorBend,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Intersection {
    Finite(BTreeSet<GridPoint>),
    Overlap,
}

impl Intersection {
    pub fn is_empty(&self) -> bool {
        matches!(self, Intersection::Finite(s) if s.is_empty())
    }
}

pub fn path_from_sequence<P: Into<GridPoint> + Copy>(points: &[P]) -> Result<GridPath, PathError> {
    let seq: Vec<GridPoint> = points.iter().map(|&p| p.into()).collect();
    GridPath::new(seq)
}

impl GridPath {
    pub fn new(seq: Vec<GridPoint>) -> Result<GridPath, PathError> {
        if seq.is_empty() {
            return Err(PathError::EmptySequence);
        }
        if seq.len() == 1 {
            return Err(PathError::ZeroLengthSegment(seq[0]));
        }
        let mut dirs = Vec::with_capacity(seq.len() - 1);
        for w in seq.windows(2) {
            if w[0] == w[1] {
                return Err(PathError::ZeroLengthSegment(w[0]));
            }
            if w[0].x != w[1].x && w[0].y != w[1].y {
                return Err(PathError::NonAxisAligned(w[0], w[1]));
            }
            dirs.push(Dir::between(w[0], w[1]).expect("axis-aligned"));
        }
        for (i, w) in dirs.windows(2).enumerate() {
            if w[0].is_horizontal() == w[1].is_horizontal() {
                return Err(PathError::CollinearConsecutive(seq[i + 1]));
            }
        }
        let path = GridPath { seq };
        let segs: Vec<Segment> = path.segments().collect();
        for i in 0..segs.len() {
            for j in i + 2..segs.len() {
                if !matches!(segs[i].intersect(&segs[j]), Ok(None)) {
                    return Err(PathError::SelfIntersecting);
                }
            }
        }
        Ok(path)
    }

    pub fn seq(&self) -> &[GridPoint] {
        &self.seq
    }

    pub fn bends(&self) -> usize {
        self.seq.len() - 2
    }

    pub fn start(&self) -> GridPoint {
        self.seq[0]
    }

    pub fn end(&self) -> GridPoint {
        *self.seq.last().expect("nonempty")
    }

    pub fn endpoints(&self) -> [GridPoint; 2] {
        [self.start(), self.end()]
    }

    pub fn bend_points(&self) -> &[GridPoint] {
        &self.seq[1..self.seq.len() - 1]
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.seq.windows(2).map(|w| Segment::new(w[0], w[1]))
    }

    pub fn length(&self) -> i64 {
        self.segments().map(|s| s.len()).sum()
    }

    pub fn contains(&self, q: GridPoint) -> bool {
        self.segments().any(|s| s.contains(q))
    }

    pub fn is_endpoint(&self, q: GridPoint) -> bool {
        self.start() == q || self.end() == q
    }

    pub fn is_interior(&self, q: GridPoint) -> bool {
        !self.is_endpoint(q) && self.contains(q)
    }

    pub fn classify(&self, q: GridPoint) -> PointClass {
        if self.is_endpoint(q) {
            PointClass::Endpoint
        } else if self.bend_points().contains(&q) {
            PointClass::InteriorBend
        } else if self.contains(q) {
            PointClass::Interior
        } else {
            PointClass::Absent
        }
    }

    /// Inclusive bounding box as (min corner, max corner).
    pub fn bbox(&self) -> (GridPoint, GridPoint) {
        let xs = self.seq.iter().map(|p| p.x);
        let ys = self.seq.iter().map(|p| p.y);
        (
            GridPoint::new(xs.clone().min().unwrap(), ys.clone().min().unwrap()),
            GridPoint::new(xs.max().unwrap(), ys.max().unwrap()),
        )
    }

    /// Direction in which the path leaves the given endpoint, pointing outward.
    pub fn end_direction(&self, at_start: bool) -> Dir {
        if at_start {
            Dir::between(self.seq[1], self.seq[0]).expect("valid path")
        } else {
            let n = self.seq.len();
            Dir::between(self.seq[n - 2], self.seq[n - 1]).expect("valid path")
        }
    }

    pub fn reversed(&self) -> GridPath {
        let mut seq = self.seq.clone();
        seq.reverse();
        GridPath { seq }
    }

    pub fn scaled(&self, k: i64) -> GridPath {
        assert!(k > 0);
        GridPath { seq: self.seq.iter().map(|p| p.scale(k)).collect() }
    }

    /// Applies an isometry of the lattice; the result is valid by construction.
    pub fn map(&self, f: impl Fn(GridPoint) -> GridPoint) -> GridPath {
        GridPath { seq: self.seq.iter().map(|&p| f(p)).collect() }
    }

    /// Arc length from the start to `q`, if `q` lies on the path.
    pub fn position(&self, q: GridPoint) -> Option<i64> {
        let mut walked = 0;
        for s in self.segments() {
            if s.contains(q) {
                return Some(walked + s.a.manhattan(q));
            }
            walked += s.len();
        }
        None
    }

    pub fn point_at(&self, pos: i64) -> GridPoint {
        let mut left = pos;
        for s in self.segments() {
            if left <= s.len() {
                let d = Dir::between(s.a, s.b).unwrap();
                return s.a.offset(d, left);
            }
            left -= s.len();
        }
        self.end()
    }

    /// The portion between arc positions `from < to`.
    pub fn sub_path(&self, from: i64, to: i64) -> GridPath {
        assert!(0 <= from && from < to && to <= self.length());
        let mut seq = vec![self.point_at(from)];
        let mut walked = 0;
        for i in 1..self.seq.len() - 1 {
            walked += self.seq[i - 1].manhattan(self.seq[i]);
            if walked > from && walked < to {
                seq.push(self.seq[i]);
            }
        }
        seq.push(self.point_at(to));
        GridPath { seq }
    }

    /// Every lattice point covered by the path, in order.
    pub fn lattice_points(&self) -> Vec<GridPoint> {
        let mut out = vec![self.seq[0]];
        for w in self.seq.windows(2) {
            let d = Dir::between(w[0], w[1]).unwrap();
            let mut p = w[0];
            while p != w[1] {
                p = p.offset(d, 1);
                out.push(p);
            }
        }
        out
    }
}

pub fn bends(p: &GridPath) -> usize {
    p.bends()
}

pub fn classify_point(p: &GridPath, q: GridPoint) -> PointClass {
    p.classify(q)
}

fn boxes_disjoint(p: &GridPath, q: &GridPath) -> bool {
    let (a0, a1) = p.bbox();
    let (b0, b1) = q.bbox();
    a1.x < b0.x || b1.x < a0.x || a1.y < b0.y || b1.y < a0.y
}

pub fn path_intersection(p: &GridPath, q: &GridPath) -> Intersection {
    let mut pts = BTreeSet::new();
    if boxes_disjoint(p, q) {
        return Intersection::Finite(pts);
    }
    for s in p.segments() {
        for t in q.segments() {
            match s.intersect(&t) {
                Err(()) => return Intersection::Overlap,
                Ok(Some(x)) => {
                    pts.insert(x);
                }
                Ok(None) => {}
            }
        }
    }
    Intersection::Finite(pts)
}

/// Lattice isometry: rotation by quarter turns, optional reflection in the x axis, then translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Isometry {
    pub quarter_turns: u8,
    pub reflect: bool,
    pub shift: GridPoint,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry { quarter_turns: 0, reflect: false, shift: GridPoint::new(0, 0) };

    pub fn all_linear() -> impl Iterator<Item = Isometry> {
        (0..8u8).map(|k| Isometry { quarter_turns: k % 4, reflect: k >= 4, shift: GridPoint::new(0, 0) })
    }

    pub fn linear(&self, p: GridPoint) -> GridPoint {
        let mut q = if self.reflect { GridPoint::new(p.x, -p.y) } else { p };
        for _ in 0..self.quarter_turns % 4 {
            q = GridPoint::new(-q.y, q.x);
        }
        q
    }

    pub fn apply(&self, p: GridPoint) -> GridPoint {
        let q = self.linear(p);
        GridPoint::new(q.x + self.shift.x, q.y + self.shift.y)
    }

    pub fn apply_dir(&self, d: Dir) -> Dir {
        let (dx, dy) = d.delta();
        let q = self.linear(GridPoint::new(dx, dy));
        Dir::between(GridPoint::new(0, 0), q).unwrap()
    }

    pub fn with_shift(mut self, shift: GridPoint) -> Isometry {
        self.shift = shift;
        self
    }

    pub fn inverse(&self) -> Isometry {
        let probe = [GridPoint::new(1, 0), GridPoint::new(0, 1)];
        let lin = Isometry::all_linear()
            .find(|c| probe.iter().all(|&p| c.linear(self.linear(p)) == p))
            .expect("isometry group is closed");
        let s = lin.linear(self.shift);
        lin.with_shift(GridPoint::new(-s.x, -s.y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(seq: &[(i64, i64)]) -> GridPath {
        path_from_sequence(seq).unwrap()
    }

    #[test]
    fn construction_examples() {
        assert_eq!(p(&[(0, 0), (0, 3)]).bends(), 0);
        assert_eq!(p(&[(0, 0), (2, 0), (2, 3)]).bends(), 1);
        assert!(matches!(path_from_sequence(&[(0, 0), (1, 1)]), Err(PathError::NonAxisAligned(..))));
        assert_eq!(path_from_sequence::<(i64, i64)>(&[]), Err(PathError::EmptySequence));
        assert!(matches!(path_from_sequence(&[(0, 0), (0, 0)]), Err(PathError::ZeroLengthSegment(_))));
        assert!(matches!(
            path_from_sequence(&[(0, 0), (1, 0), (3, 0)]),
            Err(PathError::CollinearConsecutive(_))
        ));
        assert_eq!(
            path_from_sequence(&[(0, 0), (2, 0), (2, 2), (1, 2), (1, -1)]),
            Err(PathError::SelfIntersecting)
        );
        assert_eq!(
            path_from_sequence(&[(0, 0), (2, 0), (2, 2), (0, 2), (0, 0)]),
            Err(PathError::SelfIntersecting)
        );
    }

    #[test]
    fn classification() {
        let a = p(&[(0, 0), (0, 3)]);
        assert_eq!(a.classify(GridPoint::new(0, 0)), PointClass::Endpoint);
        assert_eq!(a.classify(GridPoint::new(0, 2)), PointClass::Interior);
        assert_eq!(a.classify(GridPoint::new(1, 1)), PointClass::Absent);
        let b = p(&[(0, 0), (2, 0), (2, 3)]);
        assert_eq!(b.classify(GridPoint::new(2, 0)), PointClass::InteriorBend);
    }

    #[test]
    fn intersections() {
        let single = |x, y| Intersection::Finite([GridPoint::new(x, y)].into_iter().collect());
        assert_eq!(path_intersection(&p(&[(0, 0), (2, 0)]), &p(&[(1, -1), (1, 1)])), single(1, 0));
        assert_eq!(path_intersection(&p(&[(0, 0), (2, 0)]), &p(&[(2, 0), (2, 2)])), single(2, 0));
        assert_eq!(path_intersection(&p(&[(0, 0), (3, 0)]), &p(&[(1, 0), (2, 0)])), Intersection::Overlap);
        assert!(path_intersection(&p(&[(0, 0), (3, 0)]), &p(&[(0, 1), (3, 1)])).is_empty());
    }

    #[test]
    fn isometries_preserve_directions() {
        for iso in Isometry::all_linear() {
            for d in Dir::ALL {
                let (dx, dy) = iso.apply_dir(d).delta();
                let q = iso.linear(GridPoint::new(d.delta().0, d.delta().1));
                assert_eq!((dx, dy), (q.x, q.y));
            }
        }
    }

    #[test]
    fn sub_paths() {
        let a = p(&[(0, 0), (3, 0), (3, 2)]);
        assert_eq!(a.position(GridPoint::new(3, 1)), Some(4));
        assert_eq!(a.sub_path(1, 4).seq(), &[(1, 0).into(), (3, 0).into(), (3, 1).into()]);
        assert_eq!(a.sub_path(3, 5).seq(), &[(3, 0).into(), (3, 2).into()]);
        assert_eq!(a.sub_path(0, 3).seq(), &[(0, 0).into(), (3, 0).into()]);
    }

    #[test]
    fn inverse_isometry() {
        for iso in Isometry::all_linear() {
            let iso = iso.with_shift(GridPoint::new(3, -2));
            let q = GridPoint::new(5, 7);
            assert_eq!(iso.inverse().apply(iso.apply(q)), q);
        }
    }

    #[test]
    fn lattice_points_count() {
        let a = p(&[(0, 0), (3, 0), (3, 2)]);
        assert_eq!(a.lattice_points().len() as i64, a.length() + 1);
    }
}
