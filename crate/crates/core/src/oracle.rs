//! Brute-force ground truth: plane partition enumeration, symmetric counts,
//! volume generating functions, perfect matching enumeration and the
//! tiling-partition correspondence.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::Poly;
use crate::exec::Execution;
use crate::graph::{PlanarMultigraph, VertexLabel};
use crate::hexgrid::{build_graph, edge_axis, BoxDims, HexRegion, TriangleId};
use crate::symmetry::{act_partition_unchecked, SymmetryClass};

/// Most vertices [`count_matchings`] accepts (one bit per vertex).
pub const COUNT_LIMIT: usize = 128;
/// Most vertices [`enumerate_matchings`] accepts.
pub const ENUMERATE_LIMIT: usize = 64;

/// An `a x b` matrix of heights in `[0, c]`, weakly decreasing along rows
/// and columns. Stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlanePartition {
    dims: BoxDims,
    heights: Vec<u32>,
}

impl PlanePartition {
    pub fn new(dims: BoxDims, rows: Vec<Vec<u32>>) -> Result<Self> {
        let (a, b, c) = dims.as_tuple();
        let bad = |msg: &str| Error::InvalidPartition(msg.to_string());
        if rows.len() != a as usize || rows.iter().any(|r| r.len() != b as usize) {
            return Err(bad("shape does not match the box"));
        }
        let pp = Self::from_heights_unchecked(dims, rows.concat());
        if pp.heights.iter().any(|&h| h > c) {
            return Err(bad("height exceeds the box"));
        }
        if !pp.is_monotone() {
            return Err(bad("heights are not weakly decreasing"));
        }
        Ok(pp)
    }

    pub(crate) fn from_heights_unchecked(dims: BoxDims, heights: Vec<u32>) -> Self {
        PlanePartition { dims, heights }
    }

    pub fn empty(dims: BoxDims) -> Self {
        Self::from_heights_unchecked(dims, vec![0; (dims.a * dims.b) as usize])
    }

    pub fn full(dims: BoxDims) -> Self {
        Self::from_heights_unchecked(dims, vec![dims.c; (dims.a * dims.b) as usize])
    }

    pub fn dims(&self) -> BoxDims {
        self.dims
    }

    pub fn height(&self, x: u32, y: u32) -> u32 {
        self.heights[(x * self.dims.b + y) as usize]
    }

    /// Height with the boundary conventions used for visible faces: `c`
    /// before the first row or column, `0` past the last.
    fn height_ext(&self, x: i64, y: i64) -> u32 {
        if x < 0 || y < 0 {
            self.dims.c
        } else if x >= self.dims.a as i64 || y >= self.dims.b as i64 {
            0
        } else {
            self.height(x as u32, y as u32)
        }
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        if self.dims.b == 0 {
            return vec![Vec::new(); self.dims.a as usize];
        }
        self.heights.chunks(self.dims.b as usize).map(<[u32]>::to_vec).collect()
    }

    /// Number of cubes.
    pub fn volume(&self) -> u64 {
        self.heights.iter().map(|&h| h as u64).sum()
    }

    pub fn contains_cube(&self, p: [u32; 3]) -> bool {
        p[2] < self.height(p[0], p[1])
    }

    pub fn is_monotone(&self) -> bool {
        let (a, b) = (self.dims.a, self.dims.b);
        (0..a).all(|x| {
            (0..b).all(|y| {
                let h = self.height(x, y);
                (x == 0 || self.height(x - 1, y) >= h) && (y == 0 || self.height(x, y - 1) >= h)
            })
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self.rows())
    }
}

impl fmt::Display for PlanePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows().iter().map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")).collect();
        write!(f, "[{}]", rows.join(" / "))
    }
}

/// All plane partitions in the box, in lexicographic order of their
/// row-major height vectors.
pub fn enumerate_partitions(dims: BoxDims) -> PartitionIter {
    let cells = (dims.a * dims.b) as usize;
    PartitionIter { dims, heights: vec![0; cells], done: false }
}

pub struct PartitionIter {
    dims: BoxDims,
    heights: Vec<u32>,
    done: bool,
}

impl PartitionIter {
    fn bound(&self, i: usize) -> u32 {
        let b = self.dims.b as usize;
        let mut m = self.dims.c;
        if !i.is_multiple_of(b) {
            m = m.min(self.heights[i - 1]);
        }
        if i >= b {
            m = m.min(self.heights[i - b]);
        }
        m
    }
}

impl Iterator for PartitionIter {
    type Item = PlanePartition;

    fn next(&mut self) -> Option<PlanePartition> {
        if self.done {
            return None;
        }
        let out = PlanePartition::from_heights_unchecked(self.dims, self.heights.clone());
        // Odometer step: bump the last position below its bound and reset
        // everything after it to zero, which is always admissible.
        let mut i = self.heights.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.heights[i] < self.bound(i) {
                self.heights[i] += 1;
                self.heights[i + 1..].fill(0);
                break;
            }
        }
        Some(out)
    }
}

/// Number of plane partitions in the box fixed by every element of `cls`;
/// zero when the box itself is not fixed.
pub fn count_symmetric(cls: SymmetryClass, dims: BoxDims) -> BigInt {
    count_symmetric_with(cls, dims, Execution::default())
}

pub fn count_symmetric_with(cls: SymmetryClass, dims: BoxDims, exec: Execution) -> BigInt {
    if !cls.fixes_box(dims) {
        return BigInt::zero();
    }
    let gens = cls.generators();
    let fixed = |pp: &PlanePartition| gens.iter().all(|&g| act_partition_unchecked(g, pp, dims) == *pp);
    let n = exec.count_filtered(enumerate_partitions(dims), fixed);
    BigInt::from(n)
}

/// `sum over partitions of q^volume`.
pub fn q_sum(dims: BoxDims) -> Poly {
    let mut hist = vec![BigInt::zero(); dims.volume() as usize + 1];
    for pp in enumerate_partitions(dims) {
        hist[pp.volume() as usize] += 1;
    }
    Poly::from_coeffs(hist)
}

/// A set of edge ids, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matching {
    pub edges: Vec<usize>,
}

/// All perfect matchings by backtracking on the lowest uncovered vertex.
/// With `with_bachelors`, the graph's bachelorhood vertex may be matched to
/// any number of its neighbors, including none.
pub fn enumerate_matchings(g: &PlanarMultigraph, with_bachelors: bool) -> Result<Vec<Matching>> {
    let n = g.vertex_count();
    if n > ENUMERATE_LIMIT {
        return Err(Error::SizeLimit { vertices: n, limit: ENUMERATE_LIMIT });
    }
    let bachelor = if with_bachelors { g.bachelor() } else { None };
    let adj = g.incidence();
    let mut covered = 0u64;
    if let Some(b) = bachelor {
        covered |= 1 << b;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(
        g: &PlanarMultigraph,
        adj: &[Vec<usize>],
        bachelor: Option<usize>,
        full: u64,
        covered: u64,
        stack: &mut Vec<usize>,
        out: &mut Vec<Matching>,
    ) {
        if covered == full {
            let mut edges = stack.clone();
            edges.sort_unstable();
            out.push(Matching { edges });
            return;
        }
        let v = (!covered).trailing_zeros() as usize;
        for &e in &adj[v] {
            let w = g.edge(e).other(v);
            let free = Some(w) == bachelor || covered >> w & 1 == 0;
            if free {
                stack.push(e);
                rec(g, adj, bachelor, full, covered | 1 << v | 1 << w, stack, out);
                stack.pop();
            }
        }
    }
    rec(g, &adj, bachelor, full, covered, &mut stack, &mut out);
    out.sort();
    Ok(out)
}

/// Number of perfect matchings (with bachelors, if the graph marks a
/// bachelorhood vertex), memoized on the set of covered vertices.
pub fn count_matchings(g: &PlanarMultigraph) -> Result<BigInt> {
    count_from(g, &[])
}

/// Number of perfect matchings of `g` with the vertices in `removed` deleted.
pub fn count_matchings_removing(g: &PlanarMultigraph, removed: &[usize]) -> Result<BigInt> {
    count_from(g, removed)
}

fn count_from(g: &PlanarMultigraph, removed: &[usize]) -> Result<BigInt> {
    let n = g.vertex_count();
    if n > COUNT_LIMIT {
        return Err(Error::SizeLimit { vertices: n, limit: COUNT_LIMIT });
    }
    let adj = g.incidence();
    let bachelor = g.bachelor();
    let mut start = 0u128;
    for &r in removed.iter().chain(bachelor.iter()) {
        start |= 1 << r;
    }
    let full = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut memo: HashMap<u128, BigInt> = HashMap::new();
    // Explicit stack to avoid deep recursion on large graphs.
    enum Frame {
        Enter(u128),
        Combine(u128, Vec<u128>),
    }
    let mut stack = vec![Frame::Enter(start)];
    while let Some(frame) = stack.pop() {
        match frame {
            Frame::Enter(s) => {
                if memo.contains_key(&s) {
                    continue;
                }
                if s == full {
                    memo.insert(s, BigInt::from(1));
                    continue;
                }
                let v = (!s).trailing_zeros() as usize;
                let children: Vec<u128> = adj[v]
                    .iter()
                    .filter_map(|&e| {
                        let w = g.edge(e).other(v);
                        (Some(w) == bachelor || s >> w & 1 == 0).then_some(s | 1 << v | 1 << w)
                    })
                    .collect();
                let pending: Vec<u128> = children.iter().copied().filter(|c| !memo.contains_key(c)).collect();
                stack.push(Frame::Combine(s, children));
                stack.extend(pending.into_iter().map(Frame::Enter));
            }
            Frame::Combine(s, children) => {
                let total = children.iter().map(|c| &memo[c]).sum();
                memo.insert(s, total);
            }
        }
    }
    Ok(memo.remove(&start).unwrap_or_default())
}

/// `sum over perfect matchings of the product of edge weights`.
pub fn matching_polynomial(g: &PlanarMultigraph) -> Result<Poly> {
    let n = g.vertex_count();
    if n > COUNT_LIMIT {
        return Err(Error::SizeLimit { vertices: n, limit: COUNT_LIMIT });
    }
    let adj = g.incidence();
    let full = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    fn rec(g: &PlanarMultigraph, adj: &[Vec<usize>], full: u128, s: u128, memo: &mut HashMap<u128, Poly>) -> Poly {
        if s == full {
            return Poly::constant(1);
        }
        if let Some(p) = memo.get(&s) {
            return p.clone();
        }
        let v = (!s).trailing_zeros() as usize;
        let mut total = Poly::default();
        for &e in &adj[v] {
            let w = g.edge(e).other(v);
            if s >> w & 1 == 0 {
                let sub = rec(g, adj, full, s | 1 << v | 1 << w, memo);
                total = &total + &(&sub * &g.edge(e).weight);
            }
        }
        memo.insert(s, total.clone());
        total
    }
    Ok(rec(g, &adj, full, 0, &mut HashMap::new()))
}

fn triangle_of(g: &PlanarMultigraph, v: usize) -> TriangleId {
    match g.labels()[v] {
        VertexLabel::Triangle(t) => t,
        _ => unreachable!("Z has triangle labels"),
    }
}

/// Reads off the plane partition of a perfect matching of Z(a,b,c): each
/// column of the box shows exactly one top face, a matched axis-2 edge.
pub fn matching_to_partition(m: &Matching, region: &HexRegion) -> Result<PlanePartition> {
    let g = build_graph(region);
    let n = g.vertex_count();
    let mut partner = vec![usize::MAX; n];
    for &e in &m.edges {
        if e >= g.edge_count() {
            return Err(Error::NotPerfectMatching(format!("edge {e} out of range")));
        }
        let ed = g.edge(e);
        for (x, y) in [(ed.u, ed.v), (ed.v, ed.u)] {
            if partner[x] != usize::MAX {
                return Err(Error::NotPerfectMatching(format!("vertex {x} covered twice")));
            }
            partner[x] = y;
        }
    }
    if let Some(v) = partner.iter().position(|&p| p == usize::MAX) {
        return Err(Error::NotPerfectMatching(format!("vertex {v} uncovered")));
    }
    // Top faces over the diagonal X - Y = d all project onto one line of
    // axis-2 edges. Along the diagonal, height minus X strictly decreases,
    // so sorting the matched edges on that line recovers each column.
    let (a, b, c) = region.dims().as_tuple();
    let (ai, bi) = (a as i64, b as i64);
    let mut by_diag: HashMap<i64, Vec<i64>> = HashMap::new();
    for &e in &m.edges {
        let ed = g.edge(e);
        let (up, down) = (triangle_of(&g, ed.u), triangle_of(&g, ed.v));
        if edge_axis(up, down) == 2 {
            by_diag.entry(up.z as i64 - bi).or_default().push(up.y as i64);
        }
    }
    let mut heights = vec![0u32; (a * b) as usize];
    for d in (1 - bi)..ai {
        let mut js = by_diag.remove(&d).unwrap_or_default();
        js.sort_unstable_by(|p, q| q.cmp(p));
        let xs: Vec<i64> = (d.max(0)..ai.min(bi + d)).collect();
        if js.len() != xs.len() {
            return Err(Error::NotPerfectMatching(format!(
                "diagonal {d} shows {} top faces for {} columns",
                js.len(),
                xs.len()
            )));
        }
        for (&x, &j) in xs.iter().zip(&js) {
            let h = j - ai + 1 + x;
            if !(0..=c as i64).contains(&h) {
                return Err(Error::NotPerfectMatching(format!("top face at height {h}")));
            }
            heights[(x * bi + x - d) as usize] = h as u32;
        }
    }
    let pp = PlanePartition::from_heights_unchecked(region.dims(), heights);
    if !pp.is_monotone() {
        return Err(Error::NotPerfectMatching("heights are not monotone".into()));
    }
    Ok(pp)
}

/// Projection of the box point `(X, Y, Z)` to a lattice point.
fn project_point(dims: BoxDims, p: [i64; 3]) -> [i64; 3] {
    let (a, b, c) = (dims.a as i64, dims.b as i64, dims.c as i64);
    [c + p[1] - p[2], a + p[2] - p[0], b + p[0] - p[1]]
}

fn tri(c: [i64; 3]) -> TriangleId {
    TriangleId::new(c[0] as i32, c[1] as i32, c[2] as i32)
}

/// Up and down triangles of the top face at height `h` over cell `(x, y)`.
fn top_face(dims: BoxDims, x: u32, y: u32, h: u32) -> (TriangleId, TriangleId) {
    let mut p = project_point(dims, [x as i64, y as i64, h as i64]);
    p[1] -= 1;
    let up = tri(p);
    (up, up.shifted(2, -1))
}

/// The tiling of a plane partition, as a matching of [`build_graph`].
pub fn partition_to_matching(pp: &PlanePartition, region: &HexRegion) -> Result<Matching> {
    let dims = region.dims();
    if pp.dims() != dims {
        return Err(Error::InvalidPartition("box differs from the region".into()));
    }
    let (a, b, c) = (dims.a as i64, dims.b as i64, dims.c as i64);
    let mut lozenges: Vec<(TriangleId, TriangleId)> = Vec::new();
    for x in 0..a {
        for y in 0..b {
            lozenges.push(top_face(dims, x as u32, y as u32, pp.height(x as u32, y as u32)));
        }
    }
    for x0 in 0..=a {
        for y in 0..b {
            for z in pp.height_ext(x0, y)..pp.height_ext(x0 - 1, y).min(c as u32) {
                let mut p = project_point(dims, [x0, y, z as i64]);
                p[2] -= 1;
                let up = tri(p);
                lozenges.push((up, up.shifted(0, -1)));
            }
        }
    }
    for y0 in 0..=b {
        for x in 0..a {
            for z in pp.height_ext(x, y0)..pp.height_ext(x, y0 - 1).min(c as u32) {
                let mut p = project_point(dims, [x, y0, z as i64]);
                p[0] -= 1;
                let up = tri(p);
                lozenges.push((up, up.shifted(1, -1)));
            }
        }
    }
    let g = build_graph(region);
    let lookup: HashMap<(usize, usize), usize> = g.edges().iter().enumerate().map(|(i, e)| ((e.u, e.v), i)).collect();
    let mut edges = lozenges
        .into_iter()
        .map(|(up, down)| {
            let key = (region.index_of(up)?, region.index_of(down)?);
            lookup.get(&key).copied().ok_or(Error::TriangleOutOfRegion(up.x, up.y, up.z))
        })
        .collect::<Result<Vec<_>>>()?;
    edges.sort_unstable();
    Ok(Matching { edges })
}

/// Whether all perfect matchings of Z(a,b,c) are connected by elementary
/// moves, each rotating the three matched edges around one hexagonal face.
pub fn elementary_moves_connect(region: &HexRegion) -> Result<bool> {
    let g = build_graph(region);
    let all = enumerate_matchings(&g, false)?;
    if all.is_empty() {
        return Ok(true);
    }
    let index: HashMap<&Matching, usize> = all.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let hexagons: Vec<Vec<usize>> =
        g.faces().into_iter().filter(|f| f.sides() == 6).map(|f| f.darts.iter().map(|d| d.edge()).collect()).collect();
    let mut seen = vec![false; all.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        let m = &all[i];
        for hex in &hexagons {
            for parity in 0..2 {
                let on: Vec<usize> = (0..3).map(|k| hex[2 * k + parity]).collect();
                if on.iter().all(|e| m.edges.binary_search(e).is_ok()) {
                    let mut edges: Vec<usize> = m.edges.iter().copied().filter(|e| !on.contains(e)).collect();
                    edges.extend((0..3).map(|k| hex[2 * k + 1 - parity]));
                    edges.sort_unstable();
                    let j = index[&Matching { edges }];
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    Ok(seen.iter().all(|&s| s))
}
