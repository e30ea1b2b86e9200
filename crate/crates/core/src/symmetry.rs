//! The order-12 symmetry group of a box, its ten subgroups, and quotient
//! matching graphs whose perfect matchings are the invariant tilings.
//!
//! An element is a coordinate permutation plus a complement flag. It sends
//! the box point `P` to `Q` with `Q[m] = P[perm[m]]`, then (with the flag
//! set) `Q -> dims - Q`. Transposition is `perm = [1,0,2]`, the cyclic
//! rotation is `perm = [2,0,1]` and complementation is the flag.
//!
//! In the hexagon picture odd permutations are mirror reflections and every
//! other element is a rotation about the center. An element exchanges up and
//! down triangles exactly when `comp xor odd(perm)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Color, Dart, Edge, PlanarMultigraph, VertexLabel};
use crate::hexgrid::{build_graph, BoxDims, HexRegion, TriangleId};
use crate::oracle::PlanePartition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymmetryElement {
    pub perm: [usize; 3],
    pub comp: bool,
}

impl SymmetryElement {
    pub const IDENTITY: Self = SymmetryElement { perm: [0, 1, 2], comp: false };
    pub const TAU: Self = SymmetryElement { perm: [1, 0, 2], comp: false };
    pub const RHO: Self = SymmetryElement { perm: [2, 0, 1], comp: false };
    pub const KAPPA: Self = SymmetryElement { perm: [0, 1, 2], comp: true };

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Self) -> Self {
        SymmetryElement {
            perm: [other.perm[self.perm[0]], other.perm[self.perm[1]], other.perm[self.perm[2]]],
            comp: self.comp ^ other.comp,
        }
    }

    pub fn inverse(self) -> Self {
        let mut perm = [0; 3];
        for m in 0..3 {
            perm[self.perm[m]] = m;
        }
        SymmetryElement { perm, comp: self.comp }
    }

    pub fn is_identity(self) -> bool {
        self == Self::IDENTITY
    }

    pub fn is_odd(self) -> bool {
        let p = self.perm;
        let inversions = (p[0] > p[1]) as u8 + (p[0] > p[2]) as u8 + (p[1] > p[2]) as u8;
        inversions % 2 == 1
    }

    /// Exchanges up and down triangles.
    pub fn flips_orientation(self) -> bool {
        self.comp ^ self.is_odd()
    }

    /// Acts on the hexagon as a mirror reflection.
    pub fn is_reflection(self) -> bool {
        self.is_odd()
    }

    pub fn permute_dims(self, dims: BoxDims) -> BoxDims {
        let d = dims.as_array();
        BoxDims::from_array([d[self.perm[0]], d[self.perm[1]], d[self.perm[2]]])
    }

    pub fn fixes_box(self, dims: BoxDims) -> bool {
        self.permute_dims(dims) == dims
    }

    /// Image of the unit cube with lower corner `p` in the box `dims`.
    pub fn act_cube(self, p: [u32; 3], dims: BoxDims) -> [u32; 3] {
        let d = self.permute_dims(dims).as_array();
        let mut q = [p[self.perm[0]], p[self.perm[1]], p[self.perm[2]]];
        if self.comp {
            for m in 0..3 {
                q[m] = d[m] - 1 - q[m];
            }
        }
        q
    }

    /// Image of a triangle, without checking that the box is fixed.
    pub fn act_triangle_unchecked(self, t: TriangleId, dims: BoxDims) -> TriangleId {
        let c = t.coords();
        let mut q = [c[self.perm[0]], c[self.perm[1]], c[self.perm[2]]];
        if self.flips_orientation() {
            let bounds = self.permute_dims(dims).coord_bounds();
            for m in 0..3 {
                q[m] = bounds[m] - q[m];
            }
        }
        TriangleId::from_coords(q)
    }
}

impl fmt::Display for SymmetryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.perm;
        write!(f, "[{}{}{}]{}", p[0], p[1], p[2], if self.comp { "'" } else { "" })
    }
}

pub fn act_triangle(g: SymmetryElement, t: TriangleId, region: &HexRegion) -> Result<TriangleId> {
    let dims = region.dims();
    if !g.fixes_box(dims) {
        return Err(Error::BoxNotFixed { class: 0, dims: dims.as_tuple() });
    }
    region.index_of(t)?;
    Ok(g.act_triangle_unchecked(t, dims))
}

/// Image of a plane partition under `g`; the box must be fixed by `g`.
pub fn act_partition(g: SymmetryElement, pp: &PlanePartition, dims: BoxDims) -> Result<PlanePartition> {
    if !g.fixes_box(dims) || pp.dims() != dims {
        return Err(Error::BoxNotFixed { class: 0, dims: dims.as_tuple() });
    }
    Ok(act_partition_unchecked(g, pp, dims))
}

pub(crate) fn act_partition_unchecked(g: SymmetryElement, pp: &PlanePartition, dims: BoxDims) -> PlanePartition {
    let inv = g.inverse();
    let (a, b, c) = dims.as_tuple();
    let mut heights = Vec::with_capacity((a * b) as usize);
    for x in 0..a {
        for y in 0..b {
            // The image is an order ideal, so counting cubes in the column
            // gives its height. Complementation also complements membership.
            let h = (0..c).filter(|&z| pp.contains_cube(inv.act_cube([x, y, z], dims)) != g.comp).count();
            heights.push(h as u32);
        }
    }
    PlanePartition::from_heights_unchecked(dims, heights)
}

/// One of the ten symmetry classes, numbered as in the standard table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymmetryClass(u8);

impl SymmetryClass {
    pub fn new(id: u8) -> Result<Self> {
        if (1..=10).contains(&id) {
            Ok(SymmetryClass(id))
        } else {
            Err(Error::InvalidClass(id))
        }
    }

    pub fn all() -> impl Iterator<Item = SymmetryClass> {
        (1..=10).map(SymmetryClass)
    }

    pub fn id(self) -> u8 {
        self.0
    }

    pub fn name(self) -> &'static str {
        match self.0 {
            1 => "unrestricted",
            2 => "symmetric",
            3 => "cyclically symmetric",
            4 => "totally symmetric",
            5 => "self-complementary",
            6 => "transpose-complementary",
            7 => "symmetric self-complementary",
            8 => "cyclically symmetric transpose-complementary",
            9 => "cyclically symmetric self-complementary",
            _ => "totally symmetric self-complementary",
        }
    }

    pub fn generators(self) -> Vec<SymmetryElement> {
        use SymmetryElement as S;
        let kt = S::KAPPA.compose(S::TAU);
        match self.0 {
            1 => vec![],
            2 => vec![S::TAU],
            3 => vec![S::RHO],
            4 => vec![S::TAU, S::RHO],
            5 => vec![S::KAPPA],
            6 => vec![kt],
            7 => vec![S::TAU, S::KAPPA],
            8 => vec![S::RHO, kt],
            9 => vec![S::RHO, S::KAPPA],
            _ => vec![S::KAPPA, S::TAU, S::RHO],
        }
    }

    /// Closure of the generators, sorted.
    pub fn elements(self) -> Vec<SymmetryElement> {
        group_closure(&self.generators())
    }

    pub fn fixes_box(self, dims: BoxDims) -> bool {
        self.generators().iter().all(|g| g.fixes_box(dims))
    }

    pub fn contains_complement(self) -> bool {
        self.elements().iter().any(|g| g.comp)
    }

    /// Quotient graphs of this class are bipartite.
    pub fn is_bipartite(self) -> bool {
        self.elements().iter().all(|g| !g.flips_orientation())
    }
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn group_elements(cls: SymmetryClass) -> Vec<SymmetryElement> {
    cls.elements()
}

fn group_closure(gens: &[SymmetryElement]) -> Vec<SymmetryElement> {
    let mut set = BTreeSet::from([SymmetryElement::IDENTITY]);
    let mut frontier = vec![SymmetryElement::IDENTITY];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = g.compose(x);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn matches(self, n: usize) -> bool {
        Parity::of(n) == self
    }
}

/// A planar graph with designated attachment vertices such that deleting
/// any set of attachments of the right parity leaves exactly one perfect
/// matching, and deleting a set of the wrong parity leaves none.
///
/// It is a row of triangles: attachments `a_1..a_d` on top, a spine path
/// below, each `a_i` joined to the spine vertices on either side. For odd
/// parity the spine has `d - 1` vertices, for even parity `d`.
#[derive(Clone, Debug)]
pub struct ParityGadget {
    pub parity: Parity,
    /// Vertex ids of the attachments, left to right.
    pub attachments: Vec<usize>,
    pub graph: PlanarMultigraph,
}

pub fn build_parity_gadget(n_attach: usize, parity: Parity) -> ParityGadget {
    let d = n_attach;
    let spine = gadget_spine_len(d, parity);
    let mut labels: Vec<VertexLabel> = (0..d).map(VertexLabel::GadgetAttach).collect();
    labels.extend((0..spine).map(VertexLabel::GadgetSpine));
    let mut pos: Vec<(f64, f64)> = (0..d).map(|i| (i as f64, 0.0)).collect();
    pos.extend((0..spine).map(|i| (i as f64 + 0.5, -1.0)));
    let edges = gadget_edges(d, spine)
        .into_iter()
        .map(|(x, y)| {
            let id = |v: GadgetVertex| match v {
                GadgetVertex::Attach(i) => i,
                GadgetVertex::Spine(i) => d + i,
            };
            Edge::new(id(x), id(y))
        })
        .collect();
    let graph = PlanarMultigraph::from_positions(labels, edges, &pos, None).expect("gadget drawing is planar");
    ParityGadget { parity, attachments: (0..d).collect(), graph }
}

fn gadget_spine_len(d: usize, parity: Parity) -> usize {
    match parity {
        Parity::Odd => d.saturating_sub(1),
        Parity::Even => d,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GadgetVertex {
    Attach(usize),
    Spine(usize),
}

/// Gadget edges: `a_i - m_{i-1}`, `a_i - m_i`, `m_i - m_{i+1}` where present.
fn gadget_edges(d: usize, spine: usize) -> Vec<(GadgetVertex, GadgetVertex)> {
    use GadgetVertex::*;
    let mut edges = Vec::new();
    for i in 0..d {
        if i >= 1 && i - 1 < spine {
            edges.push((Attach(i), Spine(i - 1)));
        }
        if i < spine {
            edges.push((Attach(i), Spine(i)));
        }
    }
    for i in 1..spine {
        edges.push((Spine(i - 1), Spine(i)));
    }
    edges
}

/// A quotient graph with bookkeeping from its construction.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub graph: PlanarMultigraph,
    /// Two-vertex components with a single edge that were dropped; each
    /// contributes a factor of one.
    pub removed_pairs: usize,
    /// Number of edges at the bachelorhood vertex before gadget insertion.
    pub bachelor_degree: usize,
    /// Parity of the inserted gadget, if any.
    pub gadget: Option<Parity>,
}

/// Whether to keep the bachelorhood vertex or replace it by a gadget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BachelorMode {
    Keep,
    Gadget,
}

/// The quotient matching graph for `cls`; its perfect matchings are in
/// bijection with the `cls`-invariant plane partitions in the box.
pub fn quotient_graph(region: &HexRegion, cls: SymmetryClass) -> Result<PlanarMultigraph> {
    Ok(build_quotient(region, cls, BachelorMode::Gadget)?.graph)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Object {
    /// An edge of Z.
    Edge(usize),
    /// The half of a reversed edge at the given vertex, rerouted to the
    /// bachelorhood vertex.
    Half { vertex: usize, edge: usize },
}

/// Folding map sending each orbit of the hexagon's symmetry group to one
/// point: `z -> ((z - center)^m) * exp(-i*theta)` where `m` is the number
/// of rotations. With reflections, every mirror lands on the real axis and
/// the upper half plane is a fundamental domain.
struct Fold {
    center: (f64, f64),
    m: i32,
    theta: f64,
    has_reflections: bool,
}

impl Fold {
    fn new(region: &HexRegion, elems: &[SymmetryElement]) -> Self {
        let center = region.center();
        let m = elems.iter().filter(|g| !g.is_reflection()).count() as i32;
        let mut theta = 0.0;
        let reflection = elems.iter().find(|g| g.is_reflection());
        if let Some(&r) = reflection {
            let dims = region.dims();
            let moved = region
                .triangles()
                .iter()
                .map(|&t| (region.barycenter(t), region.barycenter(r.act_triangle_unchecked(t, dims))))
                .find(|(p, q)| (p.0 - q.0).hypot(p.1 - q.1) > 1e-9);
            if let Some((p, q)) = moved {
                let alpha = (q.1 - p.1).atan2(q.0 - p.0) + std::f64::consts::FRAC_PI_2;
                theta = m as f64 * alpha;
            }
        }
        Fold { center, m, theta, has_reflections: reflection.is_some() }
    }

    fn apply(&self, p: (f64, f64)) -> (f64, f64) {
        let (dx, dy) = (p.0 - self.center.0, p.1 - self.center.1);
        let r = dx.hypot(dy).powi(self.m);
        let phi = self.m as f64 * dy.atan2(dx) - self.theta;
        (r * phi.cos(), r * phi.sin())
    }
}

const EPS: f64 = 1e-7;

pub fn build_quotient(region: &HexRegion, cls: SymmetryClass, mode: BachelorMode) -> Result<Quotient> {
    let dims = region.dims();
    if !cls.fixes_box(dims) {
        return Err(Error::BoxNotFixed { class: cls.id(), dims: dims.as_tuple() });
    }
    let z = build_graph(region);
    let tris = region.triangles();
    let n = tris.len();
    let elems = cls.elements();

    // Group action on vertices and edges.
    let vmap: Vec<Vec<usize>> = elems
        .iter()
        .map(|&g| tris.iter().map(|&t| region.index_of(g.act_triangle_unchecked(t, dims))).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let edge_of: HashMap<(usize, usize), usize> =
        z.edges().iter().enumerate().flat_map(|(i, e)| [((e.u, e.v), i), ((e.v, e.u), i)]).collect();
    let emap: Vec<Vec<usize>> =
        vmap.iter().map(|vm| z.edges().iter().map(|e| edge_of[&(vm[e.u], vm[e.v])]).collect()).collect();
    let mask =
        |pred: &dyn Fn(usize) -> bool| -> u16 { (0..elems.len()).filter(|&k| pred(k)).fold(0u16, |m, k| m | (1 << k)) };
    let stab_v: Vec<u16> = (0..n).map(|v| mask(&|k| vmap[k][v] == v)).collect();
    let stab_e: Vec<u16> = (0..z.edge_count()).map(|e| mask(&|k| emap[k][e] == e)).collect();
    let reversed: Vec<bool> = z
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| (0..elems.len()).any(|k| emap[k][i] == i && vmap[k][e.u] == e.v))
        .collect();

    // Stabilizer pruning: an object at `v` is usable only if every symmetry
    // fixing `v` also fixes the object.
    let kept = |obj: Object| -> bool {
        match obj {
            Object::Edge(e) => {
                let ed = z.edge(e);
                !reversed[e] && stab_v[ed.u] == stab_v[ed.v]
            }
            Object::Half { vertex, edge } => stab_v[vertex] & !stab_e[edge] == 0,
        }
    };
    let act = |k: usize, obj: Object| -> Object {
        match obj {
            Object::Edge(e) => Object::Edge(emap[k][e]),
            Object::Half { vertex, edge } => Object::Half { vertex: vmap[k][vertex], edge: emap[k][edge] },
        }
    };
    let canonical = |obj: Object| -> Object { (0..elems.len()).map(|k| act(k, obj)).min().unwrap() };

    let orbit_min: Vec<usize> = (0..n).map(|v| (0..elems.len()).map(|k| vmap[k][v]).min().unwrap()).collect();

    // Representatives lie in the fundamental domain of the fold.
    let fold = Fold::new(region, &elems);
    let folded: Vec<(f64, f64)> = tris.iter().map(|&t| fold.apply(region.barycenter(t))).collect();
    let mut orbits: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &key) in orbit_min.iter().enumerate() {
        orbits.entry(key).or_default().push(v);
    }
    let mut qv_of_orbit: HashMap<usize, usize> = HashMap::new();
    let mut reps = Vec::new();
    for (i, (&key, members)) in orbits.iter().enumerate() {
        let rep = if fold.has_reflections {
            members.iter().copied().find(|&v| folded[v].1 >= -EPS).unwrap_or(members[0])
        } else {
            members[0]
        };
        qv_of_orbit.insert(key, i);
        reps.push(rep);
    }
    let qv = |v: usize| qv_of_orbit[&orbit_min[v]];
    let n_orbits = reps.len();
    let bachelor = n_orbits;

    // Quotient edges, one per orbit of kept, non-loop objects.
    let mut objects: BTreeSet<Object> = BTreeSet::new();
    for (e, ed) in z.edges().iter().enumerate() {
        let objs = if reversed[e] {
            vec![Object::Half { vertex: ed.u, edge: e }, Object::Half { vertex: ed.v, edge: e }]
        } else {
            vec![Object::Edge(e)]
        };
        for obj in objs {
            if kept(obj) {
                objects.insert(canonical(obj));
            }
        }
    }
    let mut q_edges: Vec<(usize, usize)> = Vec::new();
    let mut q_edge_of: HashMap<Object, usize> = HashMap::new();
    let mut bachelor_source: Vec<(usize, usize)> = Vec::new();
    for &obj in &objects {
        let (x, y) = match obj {
            Object::Edge(e) => (qv(z.edge(e).u), qv(z.edge(e).v)),
            Object::Half { vertex, edge } => {
                bachelor_source.push((q_edges.len(), edge));
                (qv(vertex), bachelor)
            }
        };
        if x == y {
            continue;
        }
        q_edge_of.insert(obj, q_edges.len());
        q_edges.push((x, y));
    }

    // Rotation at each orbit: the representative's counterclockwise order.
    let mut rotation: Vec<Vec<Dart>> = vec![Vec::new(); n_orbits + 1];
    for (i, &rep) in reps.iter().enumerate() {
        for d in z.rotation(rep) {
            let e = d.edge();
            let obj = if reversed[e] { Object::Half { vertex: rep, edge: e } } else { Object::Edge(e) };
            if !kept(obj) {
                continue;
            }
            if let Some(&qe) = q_edge_of.get(&canonical(obj)) {
                let from_v = q_edges[qe].1 == i;
                rotation[i].push(Dart::new(qe, from_v));
            }
        }
    }

    // Order the bachelorhood edges along the real axis of the fold.
    let mut bachelor_edges: Vec<(f64, usize)> = bachelor_source
        .iter()
        .filter(|(qe, _)| q_edge_of.values().any(|v| v == qe))
        .map(|&(qe, e)| {
            let ed = z.edge(e);
            let (p, q) = (region.barycenter(tris[ed.u]), region.barycenter(tris[ed.v]));
            (fold.apply(((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0)).0, qe)
        })
        .collect();
    bachelor_edges.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let bachelor_degree = bachelor_edges.len();
    if bachelor_degree > 1 && !fold.has_reflections {
        return Err(Error::Embedding(format!(
            "bachelorhood vertex of degree {bachelor_degree} in a rotation-only quotient"
        )));
    }
    // Counterclockwise around a vertex below the axis: right to left.
    rotation[bachelor] = bachelor_edges.iter().rev().map(|&(_, qe)| Dart::new(qe, true)).collect();

    // Drop two-vertex components joined by a single edge.
    let degree = |x: usize, rot: &[Vec<Dart>]| rot[x].len();
    let mut removed = vec![false; n_orbits + 1];
    let mut removed_pairs = 0;
    for (qe, &(x, y)) in q_edges.iter().enumerate() {
        if x != bachelor && y != bachelor && degree(x, &rotation) == 1 && degree(y, &rotation) == 1 {
            let _ = qe;
            removed[x] = true;
            removed[y] = true;
            removed_pairs += 1;
        }
    }
    if bachelor_degree == 0 {
        removed[bachelor] = true;
    }

    // Renumber surviving vertices and edges.
    let mut labels = Vec::new();
    let mut colors = Vec::new();
    let mut new_id = vec![usize::MAX; n_orbits + 1];
    for x in 0..=n_orbits {
        if removed[x] {
            continue;
        }
        new_id[x] = labels.len();
        if x == bachelor {
            labels.push(VertexLabel::Bachelor);
            colors.push(Color::Black);
        } else {
            let t = tris[reps[x]];
            labels.push(VertexLabel::Orbit(t));
            colors.push(z.colors().map_or(Color::Black, |c| c[reps[x]]));
        }
    }
    let mut new_edge = vec![usize::MAX; q_edges.len()];
    let mut edges = Vec::new();
    for (qe, &(x, y)) in q_edges.iter().enumerate() {
        if removed[x] || removed[y] {
            continue;
        }
        new_edge[qe] = edges.len();
        edges.push(Edge::new(new_id[x], new_id[y]));
    }
    let mut rot: Vec<Vec<Dart>> = (0..=n_orbits)
        .filter(|&x| !removed[x])
        .map(|x| rotation[x].iter().map(|d| Dart::new(new_edge[d.edge()], d.from_v())).collect())
        .collect();

    let bipartite = cls.is_bipartite();
    let non_bachelor = labels.len() - (bachelor_degree > 0) as usize;
    let mut gadget = None;
    let mut bachelor_marker = None;
    if bachelor_degree > 0 {
        let b = new_id[bachelor];
        match mode {
            BachelorMode::Keep => bachelor_marker = Some(b),
            BachelorMode::Gadget => {
                let parity = Parity::of(non_bachelor);
                gadget = Some(parity);
                splice_gadget(&mut labels, &mut edges, &mut rot, b, parity);
            }
        }
    }
    let colors = (bipartite && bachelor_degree == 0).then_some(colors);
    let graph = PlanarMultigraph::new(labels, edges, rot, colors, bachelor_marker)?;
    graph.euler_check()?;
    Ok(Quotient { graph, removed_pairs, bachelor_degree, gadget })
}

/// Replaces vertex `b` (whose rotation lists its edges right to left) by a
/// parity gadget, attaching the edges left to right.
fn splice_gadget(
    labels: &mut Vec<VertexLabel>,
    edges: &mut Vec<Edge>,
    rot: &mut Vec<Vec<Dart>>,
    b: usize,
    parity: Parity,
) {
    let ext: Vec<Dart> = rot[b].iter().rev().copied().collect();
    let d = ext.len();
    let spine = gadget_spine_len(d, parity);
    // Attachment i reuses vertex b for i = 0, fresh ids afterwards.
    let mut attach = vec![b];
    for i in 1..d {
        attach.push(labels.len());
        labels.push(VertexLabel::GadgetAttach(i));
        rot.push(Vec::new());
    }
    labels[b] = VertexLabel::GadgetAttach(0);
    let mut spine_id = Vec::new();
    for i in 0..spine {
        spine_id.push(labels.len());
        labels.push(VertexLabel::GadgetSpine(i));
        rot.push(Vec::new());
    }
    for (i, dart) in ext.iter().enumerate() {
        // The edge already records `b` as its endpoint; move it to a_i.
        let e = &mut edges[dart.edge()];
        if dart.from_v() {
            e.v = attach[i];
        } else {
            e.u = attach[i];
        }
    }
    let add = |edges: &mut Vec<Edge>, x: usize, y: usize| -> (Dart, Dart) {
        let id = edges.len();
        edges.push(Edge::new(x, y));
        (Dart::new(id, false), Dart::new(id, true))
    };
    // Dart from a_i to m_{i-1} / m_i, and from m_i to m_{i+1}.
    let mut a_left = vec![None; d];
    let mut a_right = vec![None; d];
    let mut m_up_left = vec![None; spine];
    let mut m_up_right = vec![None; spine];
    let mut m_left = vec![None; spine];
    let mut m_right = vec![None; spine];
    for (x, y) in gadget_edges(d, spine) {
        match (x, y) {
            (GadgetVertex::Attach(i), GadgetVertex::Spine(j)) => {
                let (from_a, from_m) = add(edges, attach[i], spine_id[j]);
                if j + 1 == i {
                    a_left[i] = Some(from_a);
                    m_up_right[j] = Some(from_m);
                } else {
                    a_right[i] = Some(from_a);
                    m_up_left[j] = Some(from_m);
                }
            }
            (GadgetVertex::Spine(i), GadgetVertex::Spine(j)) => {
                let (fwd, back) = add(edges, spine_id[i], spine_id[j]);
                m_right[i] = Some(fwd);
                m_left[j] = Some(back);
            }
            _ => unreachable!(),
        }
    }
    for i in 0..d {
        rot[attach[i]] = [Some(ext[i]), a_left[i], a_right[i]].into_iter().flatten().collect();
    }
    for j in 0..spine {
        rot[spine_id[j]] = [m_right[j], m_up_right[j], m_up_left[j], m_left[j]].into_iter().flatten().collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexgrid::build_hexagon;
    use crate::oracle::{count_matchings, count_matchings_removing, count_symmetric};

    #[test]
    fn group_orders() {
        let orders: Vec<usize> = SymmetryClass::all().map(|c| c.elements().len()).collect();
        assert_eq!(orders, [1, 2, 3, 6, 2, 2, 4, 6, 6, 12]);
        let full = SymmetryClass::new(10).unwrap().elements();
        for c in SymmetryClass::all() {
            assert!(c.elements().iter().all(|g| full.contains(g)));
        }
        assert!(matches!(SymmetryClass::new(11), Err(Error::InvalidClass(11))));
    }

    #[test]
    fn composition_is_associative_with_inverses() {
        let all = SymmetryClass::new(10).unwrap().elements();
        for &g in &all {
            assert!(g.compose(g.inverse()).is_identity());
            for &h in &all {
                for &k in &all {
                    assert_eq!(g.compose(h).compose(k), g.compose(h.compose(k)));
                }
            }
        }
    }

    #[test]
    fn triangle_examples() {
        let r = build_hexagon(1, 1, 1).unwrap();
        let t = TriangleId::new(1, 1, 0);
        assert_eq!(act_triangle(SymmetryElement::RHO, t, &r).unwrap(), TriangleId::new(0, 1, 1));
        assert_eq!(act_triangle(SymmetryElement::KAPPA, t, &r).unwrap(), TriangleId::new(0, 0, 1));
        assert_eq!(act_triangle(SymmetryElement::IDENTITY, t, &r).unwrap(), t);
        let r2 = build_hexagon(2, 1, 1).unwrap();
        assert!(matches!(
            act_triangle(SymmetryElement::RHO, TriangleId::new(1, 2, 0), &r2),
            Err(Error::BoxNotFixed { .. })
        ));
    }

    #[test]
    fn triangle_action_is_a_homomorphism() {
        let r = build_hexagon(3, 3, 3).unwrap();
        let all = SymmetryClass::new(10).unwrap().elements();
        for &g in &all {
            for &h in &all {
                for &t in r.triangles() {
                    let lhs = act_triangle(g.compose(h), t, &r).unwrap();
                    let rhs = act_triangle(g, act_triangle(h, t, &r).unwrap(), &r).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn complement_maps_region_and_swaps_orientation() {
        for (a, b, c) in [(1, 2, 3), (2, 2, 1), (3, 1, 0)] {
            let r = build_hexagon(a, b, c).unwrap();
            for &t in r.triangles() {
                let s = act_triangle(SymmetryElement::KAPPA, t, &r).unwrap();
                assert_ne!(r.orientation(t).unwrap(), r.orientation(s).unwrap());
            }
        }
    }

    #[test]
    fn gadget_contract() {
        for d in 1..=8 {
            for parity in [Parity::Odd, Parity::Even] {
                let g = build_parity_gadget(d, parity);
                g.graph.euler_check().unwrap();
                for subset in 0u32..(1 << d) {
                    let removed: Vec<usize> = (0..d).filter(|i| subset >> i & 1 == 1).collect();
                    let count = count_matchings_removing(&g.graph, &removed).unwrap();
                    let expect = parity.matches(removed.len()) as u64;
                    assert_eq!(count, expect.into(), "d={d} {parity:?} subset={subset:b}");
                }
            }
        }
    }

    #[test]
    fn gadget_examples() {
        let g = build_parity_gadget(2, Parity::Odd);
        assert_eq!(g.graph.vertex_count(), 3);
        assert_eq!(g.graph.edge_count(), 2);
        let g = build_parity_gadget(1, Parity::Even);
        assert_eq!((g.graph.vertex_count(), g.graph.edge_count()), (2, 1));
    }

    #[test]
    fn cyclic_quotient_of_cube_two() {
        let r = build_hexagon(2, 2, 2).unwrap();
        let q = build_quotient(&r, SymmetryClass::new(3).unwrap(), BachelorMode::Gadget).unwrap();
        assert_eq!(q.graph.vertex_count(), 8);
        assert!(q.graph.is_bipartite());
        let mut pairs: Vec<(usize, usize)> = q.graph.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
        pairs.sort();
        let doubled = pairs.windows(2).filter(|w| w[0] == w[1]).count();
        assert_eq!(doubled, 1);
        assert_eq!(count_matchings(&q.graph).unwrap(), 5u32.into());
    }

    #[test]
    fn quotient_counts_match_oracle() {
        for cls in SymmetryClass::all() {
            for a in 0..=3u32 {
                for b in 0..=3u32 {
                    for c in 0..=3u32 {
                        let dims = BoxDims { a, b, c };
                        if !cls.fixes_box(dims) {
                            continue;
                        }
                        let r = HexRegion::new(dims);
                        let kept = build_quotient(&r, cls, BachelorMode::Keep).unwrap();
                        let q = build_quotient(&r, cls, BachelorMode::Gadget).unwrap();
                        let expect = count_symmetric(cls, dims);
                        assert_eq!(count_matchings(&q.graph).unwrap(), expect, "class {cls} box {dims}");
                        assert_eq!(count_matchings(&kept.graph).unwrap(), expect, "class {cls} box {dims} (bachelor)");
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_rejects_unfixed_box() {
        let r = build_hexagon(1, 2, 3).unwrap();
        let err = quotient_graph(&r, SymmetryClass::new(2).unwrap()).unwrap_err();
        assert!(matches!(err, Error::BoxNotFixed { class: 2, .. }));
    }
}
