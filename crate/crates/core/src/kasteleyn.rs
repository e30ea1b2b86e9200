//! Flat signings and flat orientations of embedded graphs, and the matrices
//! whose determinant or Pfaffian counts perfect matchings.
//!
//! Faces are traced keeping the face on the right of each dart, which is
//! clockwise around every face of the sphere. A dart is "clockwise" for its
//! face when the edge is oriented along it.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, Poly};
use crate::graph::{Color, EdgeAttrs, Face, PlanarMultigraph};

/// A bipartite graph with a sign per edge.
#[derive(Clone, Debug)]
pub struct SignedGraph {
    pub graph: PlanarMultigraph,
    pub signs: Vec<i8>,
}

/// A graph with a direction per edge: `true` points from `u` to `v`.
#[derive(Clone, Debug)]
pub struct OrientedGraph {
    pub graph: PlanarMultigraph,
    pub forward: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceReport {
    pub sides: usize,
    /// Negative sides for a signing, clockwise sides for an orientation.
    pub count: usize,
    pub flat: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessReport {
    pub faces: Vec<FaceReport>,
}

impl FlatnessReport {
    pub fn is_flat(&self) -> bool {
        self.faces.iter().all(|f| f.flat)
    }

    pub fn offending(&self) -> usize {
        self.faces.iter().filter(|f| !f.flat).count()
    }
}

fn signing_face_flat(sides: usize, negatives: usize) -> bool {
    match sides % 4 {
        0 => negatives % 2 == 1,
        2 => negatives.is_multiple_of(2),
        _ => false,
    }
}

impl SignedGraph {
    pub fn check_flat(&self) -> FlatnessReport {
        let faces = self
            .graph
            .faces()
            .iter()
            .map(|f| {
                let count = f.darts.iter().filter(|d| self.signs[d.edge()] < 0).count();
                FaceReport { sides: f.sides(), count, flat: signing_face_flat(f.sides(), count) }
            })
            .collect();
        FlatnessReport { faces }
    }

    pub fn to_dot(&self, name: &str) -> String {
        self.graph.to_dot(name, EdgeAttrs::Signs(&self.signs))
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.graph.to_json(EdgeAttrs::Signs(&self.signs))
    }
}

impl OrientedGraph {
    pub fn check_flat(&self) -> FlatnessReport {
        let faces = self
            .graph
            .faces()
            .iter()
            .map(|f| {
                let count = clockwise(f, &self.forward);
                FaceReport { sides: f.sides(), count, flat: count % 2 == 1 }
            })
            .collect();
        FlatnessReport { faces }
    }

    pub fn to_dot(&self, name: &str) -> String {
        self.graph.to_dot(name, EdgeAttrs::Orientation(&self.forward))
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.graph.to_json(EdgeAttrs::Orientation(&self.forward))
    }
}

fn clockwise(f: &Face, forward: &[bool]) -> usize {
    f.darts.iter().filter(|d| forward[d.edge()] != d.from_v()).count()
}

/// Face on each side of every edge: `sides[e] = (face of dart 2e, face of dart 2e+1)`.
fn edge_faces(faces: &[Face], edges: usize) -> Vec<(usize, usize)> {
    let mut of = vec![usize::MAX; 2 * edges];
    for (i, f) in faces.iter().enumerate() {
        for d in &f.darts {
            of[d.index()] = i;
        }
    }
    (0..edges).map(|e| (of[2 * e], of[2 * e + 1])).collect()
}

/// Signs making every face flat, including the outer faces.
///
/// Starting from all signs positive, the non-flat faces are paired greedily
/// with their nearest non-flat neighbor in the dual graph, and every edge on
/// the connecting dual path is negated. A face left without a partner
/// only arises in a component with an odd number of vertices, which has no
/// perfect matching; the determinant is then zero for any signing.
pub fn flat_signing(g: &PlanarMultigraph) -> Result<SignedGraph> {
    if !g.is_bipartite() {
        return Err(Error::NotBipartite);
    }
    if g.vertex_count() % 2 == 1 {
        return Err(Error::OddVertexCount(g.vertex_count()));
    }
    g.euler_check()?;
    let faces = g.faces();
    let sides = edge_faces(&faces, g.edge_count());
    let mut dual: Vec<Vec<(usize, usize)>> = vec![Vec::new(); faces.len()];
    for (e, &(f, h)) in sides.iter().enumerate() {
        if f != h {
            dual[f].push((h, e));
            dual[h].push((f, e));
        }
    }
    let mut signs = vec![1i8; g.edge_count()];
    let mut bad: Vec<bool> = faces.iter().map(|f| !signing_face_flat(f.sides(), 0)).collect();
    for start in 0..faces.len() {
        if !bad[start] {
            continue;
        }
        // Breadth-first search for the nearest other non-flat face.
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; faces.len()];
        let mut seen = vec![false; faces.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut target = None;
        while let Some(f) = queue.pop_front() {
            if f != start && bad[f] {
                target = Some(f);
                break;
            }
            for &(h, e) in &dual[f] {
                if !seen[h] {
                    seen[h] = true;
                    prev[h] = Some((f, e));
                    queue.push_back(h);
                }
            }
        }
        let Some(target) = target else { continue };
        let mut f = target;
        while let Some((p, e)) = prev[f] {
            signs[e] = -signs[e];
            f = p;
        }
        bad[start] = false;
        bad[target] = false;
    }
    Ok(SignedGraph { graph: g.clone(), signs })
}

/// An orientation with an odd number of clockwise edges on every face.
///
/// A spanning forest is oriented from lower to higher vertex id. The
/// remaining edges form a spanning tree of each component's dual graph,
/// rooted at its largest face; processing faces from the leaves up, each
/// face fixes the orientation of the edge to its parent. The root face is
/// then flat automatically whenever its component has an even number of
/// vertices.
pub fn flat_orientation(g: &PlanarMultigraph) -> Result<OrientedGraph> {
    g.euler_check()?;
    let n = g.vertex_count();
    let m = g.edge_count();
    let adj = g.incidence();
    let mut forward = vec![true; m];
    let mut decided = vec![false; m];

    let mut visited = vec![false; n];
    for s in 0..n {
        if visited[s] {
            continue;
        }
        visited[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &e in &adj[x] {
                let y = g.edge(e).other(x);
                if !visited[y] {
                    visited[y] = true;
                    decided[e] = true;
                    forward[e] = g.edge(e).u < g.edge(e).v;
                    queue.push_back(y);
                }
            }
        }
    }

    let faces = g.faces();
    let sides = edge_faces(&faces, m);
    let mut dual: Vec<Vec<(usize, usize)>> = vec![Vec::new(); faces.len()];
    for e in (0..m).filter(|&e| !decided[e]) {
        let (f, h) = sides[e];
        dual[f].push((h, e));
        dual[h].push((f, e));
    }
    let (comp, _) = g.components();
    let face_comp: Vec<usize> = faces.iter().map(|f| comp[g.tail(f.darts[0])]).collect();
    // One root per component: its largest face, ties to the lowest index.
    let mut root_of: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for (i, f) in faces.iter().enumerate() {
        let r = root_of.entry(face_comp[i]).or_insert(i);
        if f.sides() > faces[*r].sides() {
            *r = i;
        }
    }
    let mut parent_edge: Vec<Option<usize>> = vec![None; faces.len()];
    let mut order = Vec::with_capacity(faces.len());
    let mut seen = vec![false; faces.len()];
    for &root in root_of.values() {
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(f) = queue.pop_front() {
            order.push(f);
            for &(h, e) in &dual[f] {
                if !seen[h] {
                    seen[h] = true;
                    parent_edge[h] = Some(e);
                    queue.push_back(h);
                }
            }
        }
    }
    if order.len() != faces.len() {
        return Err(Error::Embedding("dual of the cotree is not spanning".into()));
    }
    for &f in order.iter().rev() {
        let Some(e) = parent_edge[f] else { continue };
        let face = &faces[f];
        let others = face.darts.iter().filter(|d| d.edge() != e).filter(|d| forward[d.edge()] != d.from_v()).count();
        let dart = face.darts.iter().find(|d| d.edge() == e).expect("parent edge borders the face");
        // Clockwise for this face iff the edge points along the dart.
        let want_cw = others % 2 == 0;
        forward[e] = if want_cw { !dart.from_v() } else { dart.from_v() };
        decided[e] = true;
    }
    Ok(OrientedGraph { graph: g.clone(), forward })
}

/// Rows indexed by black vertices, columns by white vertices; each entry is
/// the signed sum of the weights of the parallel edges between the two.
pub fn bipartite_matrix(sg: &SignedGraph) -> Result<ExactMatrix<Poly>> {
    signed_bipartite_matrix(&sg.graph, Some(&sg.signs))
}

/// The plain (unsigned) bipartite adjacency matrix.
pub fn unsigned_bipartite_matrix(g: &PlanarMultigraph) -> Result<ExactMatrix<Poly>> {
    signed_bipartite_matrix(g, None)
}

fn signed_bipartite_matrix(g: &PlanarMultigraph, signs: Option<&[i8]>) -> Result<ExactMatrix<Poly>> {
    let colors = g.colors().ok_or(Error::NotBipartite)?;
    let mut pos = vec![0usize; g.vertex_count()];
    let (mut rows, mut cols) = (Vec::new(), Vec::new());
    for (v, c) in colors.iter().enumerate() {
        let list = if *c == Color::Black { &mut rows } else { &mut cols };
        pos[v] = list.len();
        list.push(g.labels()[v].to_string());
    }
    if rows.len() != cols.len() {
        return Err(Error::NonSquare { rows: rows.len(), cols: cols.len() });
    }
    let mut m = ExactMatrix::zeros(rows, cols);
    for (e, ed) in g.edges().iter().enumerate() {
        let (b, w) = if colors[ed.u] == Color::Black { (ed.u, ed.v) } else { (ed.v, ed.u) };
        let w_e = match signs {
            Some(s) if s[e] < 0 => -&ed.weight,
            _ => ed.weight.clone(),
        };
        m.add_to(pos[b], pos[w], &w_e);
    }
    Ok(m)
}

/// `A[i][j] = w(i -> j) - w(j -> i)`, summed over parallel edges.
pub fn skew_matrix(og: &OrientedGraph) -> ExactMatrix<Poly> {
    let g = &og.graph;
    let labels: Vec<String> = g.labels().iter().map(ToString::to_string).collect();
    let mut m = ExactMatrix::zeros(labels.clone(), labels);
    for (e, ed) in g.edges().iter().enumerate() {
        let (t, h) = if og.forward[e] { (ed.u, ed.v) } else { (ed.v, ed.u) };
        m.add_to(t, h, &ed.weight);
        m.add_to(h, t, &-&ed.weight);
    }
    m
}

/// Symmetric adjacency matrix with summed parallel weights.
pub fn symmetric_matrix(g: &PlanarMultigraph) -> ExactMatrix<Poly> {
    let labels: Vec<String> = g.labels().iter().map(ToString::to_string).collect();
    let mut m = ExactMatrix::zeros(labels.clone(), labels);
    for ed in g.edges() {
        m.add_to(ed.u, ed.v, &ed.weight);
        m.add_to(ed.v, ed.u, &ed.weight);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{det, hafnian, permanent, pfaffian_abs};
    use crate::graph::tests::cycle;
    use crate::graph::{Edge, VertexLabel};
    use crate::hexgrid::{build_graph, build_hexagon};
    use crate::oracle::count_matchings;
    use crate::symmetry::{quotient_graph, SymmetryClass};
    use num_bigint::BigInt;

    fn int(m: &ExactMatrix<Poly>) -> ExactMatrix<BigInt> {
        m.eval(&BigInt::from(1))
    }

    #[test]
    fn hexagon_needs_no_signs() {
        let g = build_graph(&build_hexagon(1, 1, 1).unwrap());
        let all_pos = SignedGraph { signs: vec![1; g.edge_count()], graph: g.clone() };
        assert!(all_pos.check_flat().is_flat());
        let sg = flat_signing(&g).unwrap();
        assert!(sg.signs.iter().all(|&s| s == 1));
        let m = int(&bipartite_matrix(&sg).unwrap());
        assert_eq!((m.nrows(), permanent(&m).unwrap(), det(&m).unwrap()), (3, 2.into(), 2.into()));
    }

    #[test]
    fn square_needs_odd_negatives() {
        let g = cycle(4);
        let all_pos = SignedGraph { signs: vec![1; 4], graph: g.clone() };
        assert_eq!(all_pos.check_flat().offending(), 2);
        let sg = flat_signing(&g).unwrap();
        let neg = sg.signs.iter().filter(|&&s| s < 0).count();
        assert!(neg == 1 || neg == 3);
        assert!(sg.check_flat().is_flat());
    }

    #[test]
    fn single_edge() {
        let g = PlanarMultigraph::from_positions(
            vec![VertexLabel::Plain(0), VertexLabel::Plain(1)],
            vec![Edge::new(0, 1)],
            &[(0.0, 0.0), (1.0, 0.0)],
            Some(vec![Color::Black, Color::White]),
        )
        .unwrap();
        let m = int(&bipartite_matrix(&flat_signing(&g).unwrap()).unwrap());
        assert_eq!(det(&m).unwrap(), 1.into());
        let og = flat_orientation(&g).unwrap();
        let a = int(&skew_matrix(&og));
        assert_eq!(pfaffian_abs(&a).unwrap(), 1.into());
    }

    #[test]
    fn odd_graphs() {
        let g = cycle(3);
        assert!(matches!(flat_signing(&g), Err(Error::NotBipartite)));
        let og = flat_orientation(&g).unwrap();
        assert_eq!(pfaffian_abs(&int(&skew_matrix(&og))).unwrap(), 0.into());
    }

    #[test]
    fn hexagon_orientation() {
        let og = flat_orientation(&cycle(6)).unwrap();
        assert!(og.check_flat().is_flat());
        assert_eq!(pfaffian_abs(&int(&skew_matrix(&og))).unwrap(), 2.into());
    }

    #[test]
    fn z_graphs() {
        for a in 0..=3 {
            for b in 0..=3 {
                for c in 0..=3 {
                    let g = build_graph(&build_hexagon(a, b, c).unwrap());
                    let sg = flat_signing(&g).unwrap();
                    assert!(sg.check_flat().is_flat());
                    let m = int(&bipartite_matrix(&sg).unwrap());
                    let expect = count_matchings(&g).unwrap();
                    assert_eq!(det(&m).unwrap(), expect);
                    let og = flat_orientation(&g).unwrap();
                    assert!(og.check_flat().is_flat(), "{a},{b},{c}");
                    let s = int(&skew_matrix(&og));
                    assert_eq!(pfaffian_abs(&s).unwrap(), expect);
                    if g.vertex_count() <= 16 {
                        assert_eq!(hafnian(&int(&symmetric_matrix(&g))).unwrap(), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn quotients() {
        let r = build_hexagon(2, 2, 2).unwrap();
        let q3 = quotient_graph(&r, SymmetryClass::new(3).unwrap()).unwrap();
        let sg = flat_signing(&q3).unwrap();
        assert!(sg.check_flat().is_flat());
        assert_eq!(det(&int(&bipartite_matrix(&sg).unwrap())).unwrap(), 5.into());
        let q5 = quotient_graph(&r, SymmetryClass::new(5).unwrap()).unwrap();
        let og = flat_orientation(&q5).unwrap();
        assert!(og.check_flat().is_flat());
        assert_eq!(pfaffian_abs(&int(&skew_matrix(&og))).unwrap(), 4.into());
    }

    #[test]
    fn unequal_classes() {
        let g = PlanarMultigraph::from_positions(
            (0..3).map(VertexLabel::Plain).collect(),
            vec![Edge::new(0, 1), Edge::new(1, 2)],
            &[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)],
            Some(vec![Color::Black, Color::White, Color::Black]),
        )
        .unwrap();
        assert!(matches!(unsigned_bipartite_matrix(&g), Err(Error::NonSquare { rows: 2, cols: 1 })));
    }
}
