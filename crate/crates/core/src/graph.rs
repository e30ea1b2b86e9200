//! Embedded multigraphs: vertices, parallel edges, and a rotation system
//! giving the counterclockwise order of edge-ends around every vertex.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde_json::json;

use crate::error::{Error, Result};
use crate::exactalg::Poly;
use crate::hexgrid::TriangleId;

/// One end of an edge, oriented away from the vertex it leaves.
///
/// Dart `2e` leaves `edges[e].u`, dart `2e + 1` leaves `edges[e].v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart(usize);

impl Dart {
    pub fn new(edge: usize, from_v: bool) -> Self {
        Dart(2 * edge + from_v as usize)
    }

    pub fn edge(self) -> usize {
        self.0 / 2
    }

    /// True when the dart leaves the `v` endpoint of its edge.
    pub fn from_v(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn reverse(self) -> Self {
        Dart(self.0 ^ 1)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Poly,
}

impl Edge {
    pub fn new(u: usize, v: usize) -> Self {
        Edge { u, v, weight: Poly::constant(1) }
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Two-coloring of a bipartite graph. Black vertices index matrix rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Black,
    White,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VertexLabel {
    Triangle(TriangleId),
    /// Orbit of triangles, named by its representative.
    Orbit(TriangleId),
    Bachelor,
    GadgetAttach(usize),
    GadgetSpine(usize),
    Plain(usize),
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Triangle(t) => write!(f, "{t}"),
            VertexLabel::Orbit(t) => write!(f, "O{t}"),
            VertexLabel::Bachelor => write!(f, "B"),
            VertexLabel::GadgetAttach(i) => write!(f, "ga{i}"),
            VertexLabel::GadgetSpine(i) => write!(f, "gs{i}"),
            VertexLabel::Plain(i) => write!(f, "v{i}"),
        }
    }
}

/// Planar multigraph with a rotation system.
#[derive(Clone, Debug)]
pub struct PlanarMultigraph {
    labels: Vec<VertexLabel>,
    edges: Vec<Edge>,
    rotation: Vec<Vec<Dart>>,
    colors: Option<Vec<Color>>,
    bachelor: Option<usize>,
}

/// A face of the embedding, as the closed walk of darts that keeps the face
/// on its left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<Dart>,
}

impl Face {
    pub fn sides(&self) -> usize {
        self.darts.len()
    }
}

impl PlanarMultigraph {
    /// Assembles a graph and validates the rotation system: every dart must
    /// appear exactly once, around the vertex it leaves.
    pub fn new(
        labels: Vec<VertexLabel>,
        edges: Vec<Edge>,
        rotation: Vec<Vec<Dart>>,
        colors: Option<Vec<Color>>,
        bachelor: Option<usize>,
    ) -> Result<Self> {
        let g = PlanarMultigraph { labels, edges, rotation, colors, bachelor };
        g.validate()?;
        Ok(g)
    }

    /// Plane graph from straight-line vertex positions: the rotation at each
    /// vertex sorts incident edges by angle.
    pub fn from_positions(
        labels: Vec<VertexLabel>,
        edges: Vec<Edge>,
        positions: &[(f64, f64)],
        colors: Option<Vec<Color>>,
    ) -> Result<Self> {
        let mut rotation: Vec<Vec<(f64, Dart)>> = vec![Vec::new(); labels.len()];
        for (e, edge) in edges.iter().enumerate() {
            for (from, to, from_v) in [(edge.u, edge.v, false), (edge.v, edge.u, true)] {
                let (px, py) = positions[from];
                let (qx, qy) = positions[to];
                rotation[from].push(((qy - py).atan2(qx - px), Dart::new(e, from_v)));
            }
        }
        let rotation = rotation
            .into_iter()
            .map(|mut r| {
                r.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                r.into_iter().map(|(_, d)| d).collect()
            })
            .collect();
        Self::new(labels, edges, rotation, colors, None)
    }

    fn validate(&self) -> Result<()> {
        let n = self.labels.len();
        if self.rotation.len() != n {
            return Err(Error::Embedding("rotation system size mismatch".into()));
        }
        let mut seen = vec![false; 2 * self.edges.len()];
        for (x, rot) in self.rotation.iter().enumerate() {
            for &d in rot {
                if d.edge() >= self.edges.len() || self.tail(d) != x || seen[d.index()] {
                    return Err(Error::Embedding(format!("dart {d:?} misplaced at vertex {x}")));
                }
                seen[d.index()] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Embedding("dart missing from rotation system".into()));
        }
        for e in &self.edges {
            if e.u >= n || e.v >= n {
                return Err(Error::Embedding("edge endpoint out of range".into()));
            }
            if e.u == e.v {
                return Err(Error::Embedding("loops are not supported".into()));
            }
        }
        if let Some(colors) = &self.colors {
            if colors.len() != n || self.edges.iter().any(|e| colors[e.u] == colors[e.v]) {
                return Err(Error::NotBipartite);
            }
        }
        if self.bachelor.is_some_and(|b| b >= n) {
            return Err(Error::Embedding("bachelor vertex out of range".into()));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn rotation(&self, x: usize) -> &[Dart] {
        &self.rotation[x]
    }

    pub fn colors(&self) -> Option<&[Color]> {
        self.colors.as_deref()
    }

    pub fn is_bipartite(&self) -> bool {
        self.colors.is_some()
    }

    pub fn bachelor(&self) -> Option<usize> {
        self.bachelor
    }

    pub fn set_bachelor(&mut self, b: Option<usize>) -> Result<()> {
        self.bachelor = b;
        self.validate()
    }

    pub fn tail(&self, d: Dart) -> usize {
        let e = &self.edges[d.edge()];
        if d.from_v() {
            e.v
        } else {
            e.u
        }
    }

    pub fn head(&self, d: Dart) -> usize {
        self.tail(d.reverse())
    }

    pub fn degree(&self, x: usize) -> usize {
        self.rotation[x].len()
    }

    /// Incident edge ids of every vertex, in rotation order.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        self.rotation.iter().map(|r| r.iter().map(|d| d.edge()).collect()).collect()
    }

    /// Replaces all edge weights.
    pub fn with_weights(mut self, weight: impl Fn(usize, &Edge) -> Poly) -> Self {
        let new: Vec<Poly> = self.edges.iter().enumerate().map(|(i, e)| weight(i, e)).collect();
        for (e, w) in self.edges.iter_mut().zip(new) {
            e.weight = w;
        }
        self
    }

    /// True when every weight is an integer constant.
    pub fn has_integer_weights(&self) -> bool {
        self.edges.iter().all(|e| e.weight.as_constant().is_some())
    }

    /// Traces every face. Each dart lies on exactly one face; the walk
    /// continues with the dart that follows the reversed dart
    /// counterclockwise around its tail.
    pub fn faces(&self) -> Vec<Face> {
        let mut next_ccw = vec![Dart(0); 2 * self.edges.len()];
        for rot in &self.rotation {
            for (i, &d) in rot.iter().enumerate() {
                next_ccw[d.index()] = rot[(i + 1) % rot.len()];
            }
        }
        let mut visited = vec![false; 2 * self.edges.len()];
        let mut faces = Vec::new();
        for start in 0..2 * self.edges.len() {
            if visited[start] {
                continue;
            }
            let mut darts = Vec::new();
            let mut d = Dart(start);
            while !visited[d.index()] {
                visited[d.index()] = true;
                darts.push(d);
                d = next_ccw[d.reverse().index()];
            }
            faces.push(Face { darts });
        }
        faces
    }

    /// Connected components as a vertex-to-component map and a count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let adj = self.incidence();
        let mut count = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = count;
            while let Some(x) = stack.pop() {
                for &e in &adj[x] {
                    let y = self.edges[e].other(x);
                    if comp[y] == usize::MAX {
                        comp[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// Checks that the rotation system embeds every component in a sphere:
    /// `V - E + F = 2C`, where an isolated vertex has one face.
    pub fn euler_check(&self) -> Result<()> {
        let (_, c) = self.components();
        let isolated = (0..self.vertex_count()).filter(|&x| self.degree(x) == 0).count();
        let f = self.faces().len() + isolated;
        let chi = self.vertex_count() as i64 - self.edge_count() as i64 + f as i64;
        if chi != 2 * c as i64 {
            return Err(Error::Embedding(format!(
                "V - E + F = {} - {} + {} = {chi}, expected {} for {c} component(s)",
                self.vertex_count(),
                self.edge_count(),
                f,
                2 * c
            )));
        }
        Ok(())
    }

    /// DOT export, one line per vertex and per edge, sorted by id.
    pub fn to_dot(&self, name: &str, attrs: EdgeAttrs<'_>) -> String {
        let directed = matches!(attrs, EdgeAttrs::Orientation(_));
        let (kw, arrow) = if directed { ("digraph", "->") } else { ("graph", "--") };
        let mut out = String::new();
        writeln!(out, "{kw} {name} {{").unwrap();
        for (i, l) in self.labels.iter().enumerate() {
            writeln!(out, "  {i} [label=\"{l}\"];").unwrap();
        }
        for (id, e) in self.edges.iter().enumerate() {
            let w = &e.weight;
            match attrs {
                EdgeAttrs::None => writeln!(out, "  {} {arrow} {} [id={id}, label=\"{w}\"];", e.u, e.v).unwrap(),
                EdgeAttrs::Signs(s) => writeln!(
                    out,
                    "  {} {arrow} {} [id={id}, label=\"{w}\", sign=\"{}\"];",
                    e.u,
                    e.v,
                    if s[id] < 0 { "-" } else { "+" }
                )
                .unwrap(),
                EdgeAttrs::Orientation(fwd) => {
                    let (t, h) = if fwd[id] { (e.u, e.v) } else { (e.v, e.u) };
                    writeln!(out, "  {t} {arrow} {h} [id={id}, label=\"{w}\"];").unwrap()
                }
            }
        }
        out.push_str("}\n");
        out
    }

    /// JSON export:
    /// `{"vertices":[..], "edges":[{"u","v","w","id"}], "rotation":{vertex:[edge ids]}}`.
    pub fn to_json(&self, attrs: EdgeAttrs<'_>) -> serde_json::Value {
        let edges: Vec<_> = self
            .edges
            .iter()
            .enumerate()
            .map(|(id, e)| {
                let mut obj = json!({ "u": e.u, "v": e.v, "w": e.weight.to_string(), "id": id });
                match attrs {
                    EdgeAttrs::None => {}
                    EdgeAttrs::Signs(s) => obj["sign"] = json!(s[id]),
                    EdgeAttrs::Orientation(fwd) => {
                        obj["tail"] = json!(if fwd[id] { e.u } else { e.v });
                    }
                }
                obj
            })
            .collect();
        let rotation: BTreeMap<String, Vec<usize>> = self
            .rotation
            .iter()
            .enumerate()
            .map(|(x, r)| (x.to_string(), r.iter().map(|d| d.edge()).collect()))
            .collect();
        json!({
            "vertices": self.labels.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "edges": edges,
            "rotation": rotation,
        })
    }
}

/// Extra per-edge data carried into an export.
#[derive(Clone, Copy, Debug)]
pub enum EdgeAttrs<'a> {
    None,
    /// `+1` / `-1` per edge.
    Signs(&'a [i8]),
    /// `true` when the edge points from `u` to `v`.
    Orientation(&'a [bool]),
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Regular polygon on `n` vertices.
    pub(crate) fn cycle(n: usize) -> PlanarMultigraph {
        let pos: Vec<_> = (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                (t.cos(), t.sin())
            })
            .collect();
        let edges = (0..n).map(|i| Edge::new(i, (i + 1) % n)).collect();
        let colors =
            n.is_multiple_of(2).then(|| (0..n).map(|i| if i % 2 == 0 { Color::Black } else { Color::White }).collect());
        let labels = (0..n).map(VertexLabel::Plain).collect();
        PlanarMultigraph::from_positions(labels, edges, &pos, colors).unwrap()
    }

    #[test]
    fn cycle_has_two_faces() {
        let g = cycle(6);
        let faces = g.faces();
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.sides() == 6));
        g.euler_check().unwrap();
    }

    #[test]
    fn single_edge_has_one_face() {
        let g = PlanarMultigraph::from_positions(
            vec![VertexLabel::Plain(0), VertexLabel::Plain(1)],
            vec![Edge::new(0, 1)],
            &[(0.0, 0.0), (1.0, 0.0)],
            None,
        )
        .unwrap();
        assert_eq!(g.faces().len(), 1);
        g.euler_check().unwrap();
    }

    #[test]
    fn bad_rotation_fails_euler() {
        // K4 drawn with a twisted rotation at one vertex.
        let edges =
            vec![Edge::new(0, 1), Edge::new(0, 2), Edge::new(0, 3), Edge::new(1, 2), Edge::new(2, 3), Edge::new(3, 1)];
        let pos = [(0.0, 0.0), (1.0, 0.0), (-0.5, 0.9), (-0.5, -0.9)];
        let labels: Vec<_> = (0..4).map(VertexLabel::Plain).collect();
        let good = PlanarMultigraph::from_positions(labels.clone(), edges.clone(), &pos, None).unwrap();
        good.euler_check().unwrap();
        let mut rot: Vec<Vec<Dart>> = (0..4).map(|x| good.rotation(x).to_vec()).collect();
        rot[0].swap(0, 1);
        let bad = PlanarMultigraph::new(labels, edges, rot, None, None).unwrap();
        assert!(matches!(bad.euler_check(), Err(Error::Embedding(_))));
    }

    #[test]
    fn miscolored_edge_is_rejected() {
        let r = PlanarMultigraph::from_positions(
            vec![VertexLabel::Plain(0), VertexLabel::Plain(1)],
            vec![Edge::new(0, 1)],
            &[(0.0, 0.0), (1.0, 0.0)],
            Some(vec![Color::Black, Color::Black]),
        );
        assert!(matches!(r, Err(Error::NotBipartite)));
    }

    #[test]
    fn exports_are_sorted_and_stable() {
        let g = cycle(4);
        let dot = g.to_dot("C4", EdgeAttrs::None);
        assert_eq!(dot.lines().filter(|l| l.contains("--")).count(), 4);
        assert_eq!(dot, g.to_dot("C4", EdgeAttrs::None));
        let js = g.to_json(EdgeAttrs::Signs(&[1, -1, 1, 1]));
        assert_eq!(js["edges"][1]["sign"], -1);
        assert_eq!(js["rotation"]["0"].as_array().unwrap().len(), 2);
    }
}
