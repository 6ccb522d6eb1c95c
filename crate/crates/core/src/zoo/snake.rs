//! Snake graphs: square tiles glued along a word over `{N, E}`.
//!
//! The first tile has lower-left corner `(0, 0)`; each `E` places the next
//! tile to the right and each `N` above. Lattice point `(x, y)` is the
//! vertex `p{x}_{y}`, white when `x + y` is even. The horizontal edge from
//! `(x, y)` to `(x + 1, y)` is `h{x}_{y}` and the vertical edge from
//! `(x, y)` to `(x, y + 1)` is `v{x}_{y}`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{Color, EmbeddedGraph, GraphParts, Layout, VertexId};
use crate::kasteleyn::KasteleynSystem;
use crate::matrix::Matrix;
use crate::moves::{contract, matrices_close, parallel_reduce, InvarianceReport, MoveCertificate};
use crate::scalar::{Field, Real, Scalar};
use crate::stats::probability_matrix;

/// Labels of the L-shaped snake `"NE"` used in the reduction example.
pub const NE_SNAKE_LABELS: [(&str, &str); 10] = [
    ("A", "v0_0"),
    ("B", "h0_0"),
    ("C", "v1_0"),
    ("D", "h0_1"),
    ("E", "v0_1"),
    ("F", "h0_2"),
    ("G", "v1_1"),
    ("H", "h1_1"),
    ("M", "v2_1"),
    ("N", "h1_2"),
];

/// Lower-left corners of the tiles of `word`.
pub fn tiles(word: &str) -> Result<Vec<(usize, usize)>> {
    let mut out = vec![(0, 0)];
    for ch in word.chars() {
        let &(x, y) = out.last().expect("nonempty");
        out.push(match ch.to_ascii_uppercase() {
            'E' => (x + 1, y),
            'N' => (x, y + 1),
            other => {
                return Err(Error::Parse(format!(
                    "snake word: unexpected letter `{other}`"
                )))
            }
        });
    }
    Ok(out)
}

/// The snake graph of `word` with all weights the `n x n` identity.
pub fn snake_graph<T: Scalar>(word: &str, n: usize) -> Result<EmbeddedGraph<T>> {
    let mut points = BTreeSet::new();
    let mut segments = BTreeSet::new();
    for (x, y) in tiles(word)? {
        for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            points.insert((x + dx, y + dy));
        }
        segments.extend([(x, y, 'h'), (x, y + 1, 'h'), (x, y, 'v'), (x + 1, y, 'v')]);
    }
    let mut p = GraphParts::new();
    let mut lay = Layout::new();
    let mut ids = BTreeMap::new();
    for &(x, y) in &points {
        let color = if (x + y) % 2 == 0 {
            Color::White
        } else {
            Color::Black
        };
        let v = p.add_vertex(format!("p{x}_{y}"), color, n);
        lay.place(v, x as f64, y as f64);
        ids.insert((x, y), v);
    }
    for &(x, y, dir) in &segments {
        let other = if dir == 'h' { (x + 1, y) } else { (x, y + 1) };
        let (a, b) = (ids[&(x, y)], ids[&other]);
        let (w, b) = if (x + y) % 2 == 0 { (a, b) } else { (b, a) };
        p.add_edge(format!("{dir}{x}_{y}"), w, b, Matrix::identity(n));
    }
    lay.embed(p)
}

/// True when the word is straight (all `E` or all `N`).
pub fn is_straight(word: &str) -> bool {
    word.chars().all(|c| c.eq_ignore_ascii_case(&'E'))
        || word.chars().all(|c| c.eq_ignore_ascii_case(&'N'))
}

/// A snake reduced to a ladder by corner contractions.
#[derive(Debug, Clone)]
pub struct SnakeReduction<T: Scalar> {
    /// Contraction and parallel reduction certificates, alternating.
    pub steps: Vec<MoveCertificate<T>>,
    pub result: EmbeddedGraph<T>,
}

/// Finds a degree-2 vertex whose neighbours share a degree-4 neighbour.
/// Outer corners of bend tiles (both neighbours of degree 3) come first;
/// far corners of end tiles are the fallback.
fn find_corner<T: Scalar>(g: &EmbeddedGraph<T>) -> Option<(VertexId, VertexId)> {
    let corners: Vec<_> = (0..g.num_vertices())
        .map(VertexId)
        .filter_map(|v| {
            let vx = g.vertex(v);
            if vx.degree() != 2 {
                return None;
            }
            let (u1, u2) = (g.opposite(vx.rotation[0], v), g.opposite(vx.rotation[1], v));
            let around = |u: VertexId| -> BTreeSet<VertexId> {
                g.vertex(u)
                    .rotation
                    .iter()
                    .map(|&e| g.opposite(e, u))
                    .collect()
            };
            let shared = around(u1);
            let bend = g.vertex(u1).degree() == 3 && g.vertex(u2).degree() == 3;
            around(u2)
                .into_iter()
                .find(|x| *x != v && shared.contains(x) && g.vertex(*x).degree() == 4)
                .map(|x| (bend, v, x))
        })
        .collect();
    let best = corners.iter().find(|c| c.0).or(corners.first())?;
    Some((best.1, best.2))
}

/// Contracts the outer corner of every turn and merges the resulting
/// parallel pair, until no turn is left. Bend corners are taken before end
/// corners, lowest vertex first, so the move sequence is deterministic.
pub fn snake_reduce<T: Field>(g: &EmbeddedGraph<T>) -> Result<SnakeReduction<T>> {
    let mut steps = Vec::new();
    let mut current = g.clone();
    while let Some((center, x)) = find_corner(&current) {
        let x_name = current.vertex(x).name.clone();
        let c = contract(&current, center)?;
        let merged = c
            .after
            .vertex_by_name(&format!("{}+{}", c.picture[1], c.picture[2]))?;
        let x = c.after.vertex_by_name(&x_name)?;
        let p = parallel_reduce(&c.after, merged, x)?;
        current = p.after.clone();
        steps.push(c);
        steps.push(p);
    }
    Ok(SnakeReduction {
        steps,
        result: current,
    })
}

/// True for the `2 x (N + 1)` grid: every bounded face is a square, the
/// faces form a path, and vertex degrees are at most 3.
pub fn is_ladder<T: Scalar>(g: &EmbeddedGraph<T>) -> bool {
    let faces: Vec<_> = g.bounded_faces().collect();
    if faces.is_empty() || faces.iter().any(|f| f.half_length() != 2) {
        return false;
    }
    if g.vertices().iter().any(|v| v.degree() > 3) {
        return false;
    }
    let edge_sets: Vec<BTreeSet<_>> = faces.iter().map(|f| f.edges().collect()).collect();
    let mut adjacent = 0;
    let mut degree = vec![0; faces.len()];
    for i in 0..faces.len() {
        for j in i + 1..faces.len() {
            if !edge_sets[i].is_disjoint(&edge_sets[j]) {
                adjacent += 1;
                degree[i] += 1;
                degree[j] += 1;
            }
        }
    }
    let (v, e, _) = g.euler_counts();
    let n = faces.len();
    adjacent + 1 == n && degree.iter().all(|&d| d <= 2) && v == 2 * n + 2 && e == 3 * n + 1
}

impl<T: Real> SnakeReduction<T> {
    /// Compares `P_e` on the original snake and on the ladder, conjugating
    /// by each gauge applied to the black endpoint along the way. Fails
    /// with `UnknownName` when the edge was merged away.
    pub fn verify_edge(&self, edge: &str) -> Result<InvarianceReport<T>> {
        let first = self.steps.first().map_or(&self.result, |c| &c.before);
        let e = first.edge_by_name(edge)?;
        let before = probability_matrix(&KasteleynSystem::new(first)?, e)?;
        let mut predicted = before.clone();
        for step in &self.steps {
            let g = &step.before;
            let e = g.edge_by_name(edge)?;
            let black = &g.vertex(g.edge(e).black).name;
            if let Some((_, m)) = step.gauges.iter().find(|(v, _)| v == black) {
                predicted = m.inverse()?.checked_mul(&predicted)?.checked_mul(m)?;
            }
        }
        let e = self.result.edge_by_name(edge)?;
        let after = probability_matrix(&KasteleynSystem::new(&self.result)?, e)?;
        Ok(InvarianceReport {
            edge: edge.to_string(),
            exact: matrices_close(&before, &after),
            passed: matrices_close(&predicted, &after),
            before,
            after,
            predicted,
        })
    }
}
