#![allow(dead_code)]

use num_bigint::BigInt;
use ppsym::exactalg::ExactMatrix;
use ppsym::graph::{Color, Edge, PlanarMultigraph, VertexLabel};
use rand::seq::SliceRandom;
use rand::Rng;

const SHAPES: [(usize, usize); 10] = [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (2, 7), (3, 2), (3, 4), (4, 2), (4, 3)];

fn random_domino_tiling(rng: &mut impl Rng, rows: usize, cols: usize) -> Vec<(usize, usize)> {
    fn fill(rng: &mut impl Rng, rows: usize, cols: usize, used: &mut [bool], out: &mut Vec<(usize, usize)>) -> bool {
        let Some(v) = used.iter().position(|&u| !u) else {
            return true;
        };
        let (r, c) = (v / cols, v % cols);
        let mut options = Vec::new();
        if c + 1 < cols && !used[v + 1] {
            options.push(v + 1);
        }
        if r + 1 < rows && !used[v + cols] {
            options.push(v + cols);
        }
        options.shuffle(rng);
        for w in options {
            used[v] = true;
            used[w] = true;
            out.push((v, w));
            if fill(rng, rows, cols, used, out) {
                return true;
            }
            out.pop();
            used[v] = false;
            used[w] = false;
        }
        false
    }
    let mut used = vec![false; rows * cols];
    let mut out = Vec::new();
    assert!(fill(rng, rows, cols, &mut used, &mut out));
    out
}

/// A random subgraph of a grid with at most 14 vertices that keeps a random
/// domino tiling, so it has a perfect matching. With `diagonals`, some
/// cells get one diagonal and the graph is usually not bipartite.
pub fn random_planar_graph(rng: &mut impl Rng, diagonals: bool) -> PlanarMultigraph {
    let (rows, cols) = *SHAPES.choose(rng).unwrap();
    let n = rows * cols;
    let keep: std::collections::BTreeSet<(usize, usize)> = random_domino_tiling(rng, rows, cols).into_iter().collect();
    let density: f64 = rng.gen_range(0.3..0.95);
    let mut edges = Vec::new();
    let mut has_diag = false;
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            let mut cand = Vec::new();
            if c + 1 < cols {
                cand.push(v + 1);
            }
            if r + 1 < rows {
                cand.push(v + cols);
            }
            for w in cand {
                if keep.contains(&(v, w)) || rng.gen_bool(density) {
                    edges.push(Edge::new(v, w));
                }
            }
            if diagonals && r + 1 < rows && c + 1 < cols && rng.gen_bool(0.4) {
                has_diag = true;
                if rng.gen_bool(0.5) {
                    edges.push(Edge::new(v, v + cols + 1));
                } else {
                    edges.push(Edge::new(v + 1, v + cols));
                }
            }
        }
    }
    let colors = (!has_diag)
        .then(|| (0..n).map(|v| if (v / cols + v % cols) % 2 == 0 { Color::Black } else { Color::White }).collect());
    let positions: Vec<(f64, f64)> = (0..n).map(|v| ((v % cols) as f64, (v / cols) as f64)).collect();
    let labels = (0..n).map(VertexLabel::Plain).collect();
    PlanarMultigraph::from_positions(labels, edges, &positions, colors).unwrap()
}

/// A random skew-symmetric integer matrix of even or odd size.
pub fn random_skew(rng: &mut impl Rng, n: usize) -> ExactMatrix<BigInt> {
    let mut rows = vec![vec![BigInt::from(0); n]; n];
    for (i, j) in (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))) {
        let x: i64 = rng.gen_range(-3..=3);
        rows[i][j] = BigInt::from(x);
        rows[j][i] = BigInt::from(-x);
    }
    ExactMatrix::from_rows(rows)
}
