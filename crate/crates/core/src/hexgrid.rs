//! The triangulated hexagon and its dual matching graph.
//!
//! A unit triangle is addressed by the componentwise minimum `(x, y, z)` of
//! its three lattice points, where lattice points `(i, j, k)` satisfy
//! `i + j + k = a + b + c`. Up triangles have coordinate sum `a+b+c-1`,
//! down triangles `a+b+c-2`. A down triangle touches the up triangles
//! obtained by adding one to a single coordinate.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::Poly;
use crate::graph::{Color, Edge, PlanarMultigraph, VertexLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TriangleId {
    pub x: i32,
    pub y: i32,
    pub z: i32,
}

impl TriangleId {
    pub const fn new(x: i32, y: i32, z: i32) -> Self {
        TriangleId { x, y, z }
    }

    pub fn coords(self) -> [i32; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_coords(c: [i32; 3]) -> Self {
        TriangleId::new(c[0], c[1], c[2])
    }

    pub fn sum(self) -> i32 {
        self.x + self.y + self.z
    }

    /// Shifts coordinate `axis` by `delta`.
    pub fn shifted(self, axis: usize, delta: i32) -> Self {
        let mut c = self.coords();
        c[axis] += delta;
        Self::from_coords(c)
    }
}

impl fmt::Display for TriangleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Up,
    Down,
}

/// Side lengths of a box `a x b x c`, equivalently of the hexagon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoxDims {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl BoxDims {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        if a < 0 || b < 0 || c < 0 {
            return Err(Error::NegativeSide(a, b, c));
        }
        let fit = |v: i64| u32::try_from(v).map_err(|_| Error::NegativeSide(a, b, c));
        Ok(BoxDims { a: fit(a)?, b: fit(b)?, c: fit(c)? })
    }

    pub const fn cube(n: u32) -> Self {
        BoxDims { a: n, b: n, c: n }
    }

    pub fn as_array(self) -> [u32; 3] {
        [self.a, self.b, self.c]
    }

    pub fn from_array(d: [u32; 3]) -> Self {
        BoxDims { a: d[0], b: d[1], c: d[2] }
    }

    pub fn as_tuple(self) -> (u32, u32, u32) {
        (self.a, self.b, self.c)
    }

    pub fn volume(self) -> u64 {
        self.a as u64 * self.b as u64 * self.c as u64
    }

    pub fn is_cube(self) -> bool {
        self.a == self.b && self.b == self.c
    }

    /// Upper bounds on the triangle coordinates: `(b+c-1, a+c-1, a+b-1)`.
    pub fn coord_bounds(self) -> [i32; 3] {
        let (a, b, c) = (self.a as i32, self.b as i32, self.c as i32);
        [b + c - 1, a + c - 1, a + b - 1]
    }
}

impl fmt::Display for BoxDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.c)
    }
}

/// The set of unit triangles of the hexagon with sides `a, b, c`.
#[derive(Clone, Debug)]
pub struct HexRegion {
    dims: BoxDims,
    triangles: Vec<TriangleId>,
    index: HashMap<TriangleId, usize>,
}

pub fn build_hexagon(a: i64, b: i64, c: i64) -> Result<HexRegion> {
    Ok(HexRegion::new(BoxDims::new(a, b, c)?))
}

impl HexRegion {
    pub fn new(dims: BoxDims) -> Self {
        let bounds = dims.coord_bounds();
        let up_sum = (dims.a + dims.b + dims.c) as i32 - 1;
        let mut triangles = Vec::new();
        for x in 0..=bounds[0] {
            for y in 0..=bounds[1] {
                for s in [up_sum - 1, up_sum] {
                    let z = s - x - y;
                    if (0..=bounds[2]).contains(&z) {
                        triangles.push(TriangleId::new(x, y, z));
                    }
                }
            }
        }
        let index = triangles.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        HexRegion { dims, triangles, index }
    }

    pub fn dims(&self) -> BoxDims {
        self.dims
    }

    /// All triangles, sorted lexicographically by coordinates.
    pub fn triangles(&self) -> &[TriangleId] {
        &self.triangles
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn contains(&self, t: TriangleId) -> bool {
        self.index.contains_key(&t)
    }

    /// Position of `t` in [`Self::triangles`], which is also its vertex id in
    /// [`build_graph`].
    pub fn index_of(&self, t: TriangleId) -> Result<usize> {
        self.index.get(&t).copied().ok_or(Error::TriangleOutOfRegion(t.x, t.y, t.z))
    }

    fn up_sum(&self) -> i32 {
        (self.dims.a + self.dims.b + self.dims.c) as i32 - 1
    }

    pub fn orientation(&self, t: TriangleId) -> Result<Orientation> {
        self.index_of(t)?;
        Ok(if t.sum() == self.up_sum() { Orientation::Up } else { Orientation::Down })
    }

    pub fn neighbors(&self, t: TriangleId) -> Result<Vec<TriangleId>> {
        let delta = match self.orientation(t)? {
            Orientation::Up => -1,
            Orientation::Down => 1,
        };
        Ok((0..3).map(|axis| t.shifted(axis, delta)).filter(|n| self.contains(*n)).collect())
    }

    /// Barycenter of `t` in the plane. The lattice direction `e_m` is drawn
    /// as the unit vector at angle `2*pi*m/3`, so `(1,1,1)` projects to the
    /// origin and triangle coordinates project directly to barycenters.
    pub fn barycenter(&self, t: TriangleId) -> (f64, f64) {
        project(t.x as f64, t.y as f64, t.z as f64)
    }

    /// Center of the hexagon (mean of all barycenters).
    pub fn center(&self) -> (f64, f64) {
        if self.triangles.is_empty() {
            return (0.0, 0.0);
        }
        let n = self.triangles.len() as f64;
        let (sx, sy) = self.triangles.iter().fold((0.0, 0.0), |(sx, sy), &t| {
            let (x, y) = self.barycenter(t);
            (sx + x, sy + y)
        });
        (sx / n, sy / n)
    }
}

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Planar image of the lattice point `(i, j, k)`.
pub fn project(i: f64, j: f64, k: f64) -> (f64, f64) {
    (i - 0.5 * j - 0.5 * k, SQRT3_2 * (j - k))
}

/// Which coordinate differs between adjacent up and down triangles.
pub fn edge_axis(up: TriangleId, down: TriangleId) -> usize {
    (0..3).find(|&m| up.coords()[m] != down.coords()[m]).expect("adjacent triangles differ")
}

/// The matching graph Z(a,b,c): one vertex per triangle (ids follow
/// [`HexRegion::triangles`]), one edge per pair of adjacent triangles, up
/// triangles black. Edges are listed by up triangle, then by axis; `u` is
/// always the up endpoint.
pub fn build_graph(region: &HexRegion) -> PlanarMultigraph {
    let mut edges = Vec::new();
    for (i, &t) in region.triangles.iter().enumerate() {
        if t.sum() != region.up_sum() {
            continue;
        }
        for axis in 0..3 {
            if let Some(&j) = region.index.get(&t.shifted(axis, -1)) {
                edges.push(Edge::new(i, j));
            }
        }
    }
    let up_sum = region.up_sum();
    let colors = region.triangles.iter().map(|t| if t.sum() == up_sum { Color::Black } else { Color::White }).collect();
    let labels = region.triangles.iter().map(|&t| VertexLabel::Triangle(t)).collect();
    let positions: Vec<_> = region.triangles.iter().map(|&t| region.barycenter(t)).collect();
    PlanarMultigraph::from_positions(labels, edges, &positions, Some(colors))
        .expect("straight-line drawing of Z is a valid embedding")
}

/// Exponent of `q` carried by an edge of Z under the q-weighting.
///
/// Edges along axis 2 separate the top face of a stack from the one beside
/// it; they weigh `q^k` where `k` counts steps in `y` from the smallest such
/// edge on the same `z` line. All other edges weigh 1.
pub fn q_exponents(g: &PlanarMultigraph) -> Vec<usize> {
    let tri = |v: usize| match g.labels()[v] {
        VertexLabel::Triangle(t) => t,
        _ => unreachable!("Z has triangle labels"),
    };
    let mut ymin: HashMap<i32, i32> = HashMap::new();
    let axis2: Vec<Option<TriangleId>> = g
        .edges()
        .iter()
        .map(|e| {
            let (up, down) = (tri(e.u), tri(e.v));
            (edge_axis(up, down) == 2).then_some(up)
        })
        .collect();
    for up in axis2.iter().flatten() {
        let m = ymin.entry(up.z).or_insert(up.y);
        *m = (*m).min(up.y);
    }
    axis2.iter().map(|up| up.map_or(0, |t| (t.y - ymin[&t.z]) as usize)).collect()
}

/// Z(a,b,c) with the q-weights of [`q_exponents`].
pub fn q_weight_graph(region: &HexRegion) -> PlanarMultigraph {
    let g = build_graph(region);
    let exps = q_exponents(&g);
    g.with_weights(|i, _| Poly::q_pow(exps[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(x: i32, y: i32, z: i32) -> TriangleId {
        TriangleId::new(x, y, z)
    }

    #[test]
    fn unit_hexagon() {
        let r = build_hexagon(1, 1, 1).unwrap();
        assert_eq!(r.len(), 6);
        for up in [t(1, 1, 0), t(1, 0, 1), t(0, 1, 1)] {
            assert_eq!(r.orientation(up).unwrap(), Orientation::Up);
        }
        for down in [t(1, 0, 0), t(0, 1, 0), t(0, 0, 1)] {
            assert_eq!(r.orientation(down).unwrap(), Orientation::Down);
        }
        assert_eq!(r.neighbors(t(1, 0, 0)).unwrap(), vec![t(1, 1, 0), t(1, 0, 1)]);
        assert_eq!(r.neighbors(t(1, 1, 0)).unwrap().len(), 2);
        assert!(matches!(r.orientation(t(2, 0, 0)), Err(Error::TriangleOutOfRegion(2, 0, 0))));
    }

    #[test]
    fn triangle_counts() {
        for a in 0..=5 {
            for b in 0..=5 {
                for c in 0..=5 {
                    let r = HexRegion::new(BoxDims { a, b, c });
                    let up = r.triangles().iter().filter(|&&x| r.orientation(x).unwrap() == Orientation::Up).count();
                    let k = (a * b + b * c + c * a) as usize;
                    assert_eq!(up, k);
                    assert_eq!(r.len(), 2 * k);
                }
            }
        }
        let r = build_hexagon(2, 1, 1).unwrap();
        assert_eq!(r.len(), 10);
        assert_eq!(r.orientation(t(1, 2, 0)).unwrap(), Orientation::Up);
    }

    #[test]
    fn negative_side_is_rejected() {
        assert!(matches!(build_hexagon(1, -1, 2), Err(Error::NegativeSide(1, -1, 2))));
    }

    #[test]
    fn z111_is_a_hexagon() {
        let g = build_graph(&build_hexagon(1, 1, 1).unwrap());
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 6));
        assert_eq!(g.faces().len(), 2);
        g.euler_check().unwrap();
    }

    #[test]
    fn interior_faces_are_hexagons() {
        for (a, b, c) in [(2, 2, 2), (3, 1, 2), (3, 3, 3), (4, 2, 1)] {
            let r = build_hexagon(a, b, c).unwrap();
            let g = build_graph(&r);
            g.euler_check().unwrap();
            let faces = g.faces();
            // One face per interior lattice point, plus the outer face.
            let interior = (a * b + b * c + c * a) - (a + b + c) + 1;
            assert_eq!(faces.len(), interior as usize + 1);
            assert_eq!(faces.iter().filter(|f| f.sides() != 6).count(), 1);
        }
    }

    #[test]
    fn flat_hexagon_graph_is_forest_like() {
        let g = build_graph(&build_hexagon(3, 2, 0).unwrap());
        assert_eq!(g.vertex_count(), 12);
        g.euler_check().unwrap();
    }

    #[test]
    fn q_weights_of_unit_hexagon() {
        let g = q_weight_graph(&build_hexagon(1, 1, 1).unwrap());
        let mut ws: Vec<String> = g.edges().iter().map(|e| e.weight.to_string()).collect();
        ws.sort();
        assert_eq!(ws, ["1", "1", "1", "1", "1", "q"]);
    }
}
