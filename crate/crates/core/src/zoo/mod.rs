//! Generators for the standard example graphs and families, plus their
//! closed-form statistics.

pub mod fibonacci;
pub mod grid;
pub mod six_vertex;
pub mod snake;

use rand::Rng;

use crate::error::Result;
use crate::graph::{Color, EmbeddedGraph, GraphParts, Layout};
use crate::matrix::Matrix;
use crate::scalar::{Field, Rational, Scalar};

pub use fibonacci::{q_fibonacci, q_fibonacci_grid, q_fibonacci_tilde};
pub use grid::{
    continued_fraction, diagonal_inverse_block, horizontal_probability, split_probability,
    vertical_covariance, vertical_probability, GridSpec, Horizontal,
};
pub use six_vertex::{free_fermion_check, six_vertex, SixVertexSpec};
pub use snake::{is_ladder, snake_graph, snake_reduce, SnakeReduction};

/// Two vertices joined by one edge of weight `w`.
pub fn single_edge<T: Scalar>(w: Matrix<T>) -> Result<EmbeddedGraph<T>> {
    let mut p = GraphParts::new();
    let wv = p.add_vertex("w", Color::White, w.rows());
    let bv = p.add_vertex("b", Color::Black, w.cols());
    p.add_edge("e", wv, bv, w);
    let mut lay = Layout::new();
    lay.place(wv, 0.0, 0.0);
    lay.place(bv, 1.0, 0.0);
    lay.embed(p)
}

/// The 4-cycle `w1 - b1 - w2 - b2` with weights `A = (w1,b1)`,
/// `B = (w2,b1)`, `C = (w2,b2)`, `D = (w1,b2)` and outward cilia. The
/// signs put the single `-1` on `D`, so `K = [[A, -D], [B, C]]`.
pub fn four_cycle<T: Scalar>(
    a: Matrix<T>,
    b: Matrix<T>,
    c: Matrix<T>,
    d: Matrix<T>,
) -> Result<EmbeddedGraph<T>> {
    let n = a.rows();
    let mut p = GraphParts::new();
    let w1 = p.add_vertex("w1", Color::White, n);
    let b1 = p.add_vertex("b1", Color::Black, n);
    let w2 = p.add_vertex("w2", Color::White, n);
    let b2 = p.add_vertex("b2", Color::Black, n);
    p.add_edge("A", w1, b1, a);
    p.add_edge("B", w2, b1, b);
    p.add_edge("C", w2, b2, c);
    p.add_edge("D", w1, b2, d);
    let mut lay = Layout::new();
    lay.place(w1, 0.0, 1.0);
    lay.place(b1, 0.0, 0.0);
    lay.place(w2, 1.0, 0.0);
    lay.place(b2, 1.0, 1.0);
    lay.embed(p)?.with_signs(Some(vec![1, 1, 1, -1]))
}

/// The 4-cycle with every weight the `n x n` identity.
pub fn four_cycle_identity<T: Scalar>(n: usize) -> Result<EmbeddedGraph<T>> {
    four_cycle(
        Matrix::identity(n),
        Matrix::identity(n),
        Matrix::identity(n),
        Matrix::identity(n),
    )
}

/// Edge names of the `2 x 3` grid of the worked `n = 3` example, keyed
/// by grid position (`v`, `a`, `c` and column index).
fn dimerwt_name(kind: &str, i: usize) -> String {
    match (kind, i) {
        ("v", 0) => "A",
        ("v", 1) => "M",
        ("v", 2) => "D",
        ("a", 1) => "F",
        ("c", 1) => "B",
        ("a", 2) => "C",
        ("c", 2) => "E",
        _ => unreachable!("the example grid has three columns"),
    }
    .to_string()
}

/// The `2 x 3` grid with `n = 3`. Vertical edges are `A`, `M`, `D` from
/// left to right; the left square has `F` on top and `B` below, the right
/// square `C` below and `E` on top.
pub fn dimerwt<T: Scalar>(weights: DimerwtWeights<T>) -> Result<EmbeddedGraph<T>> {
    let DimerwtWeights {
        a,
        b,
        c,
        d,
        e,
        f,
        m,
    } = weights;
    GridSpec {
        vertical: vec![a, m, d],
        upper: vec![f, c],
        lower: vec![b, e],
    }
    .build_named(dimerwt_name)
}

#[derive(Debug, Clone)]
pub struct DimerwtWeights<T> {
    pub a: Matrix<T>,
    pub b: Matrix<T>,
    pub c: Matrix<T>,
    pub d: Matrix<T>,
    pub e: Matrix<T>,
    pub f: Matrix<T>,
    pub m: Matrix<T>,
}

impl<T: Scalar> DimerwtWeights<T> {
    pub fn identity() -> Self {
        let i = || Matrix::identity(3);
        DimerwtWeights {
            a: i(),
            b: i(),
            c: i(),
            d: i(),
            e: i(),
            f: i(),
            m: i(),
        }
    }
}

/// The mixed grid with column multiplicities `1, 2, 3`: vertical weights
/// `a` (1x1), `b` (2x2), `c` (3x3) and rectangular identity couplers.
/// Vertical edges are named `a`, `b`, `c`.
pub fn mixed_ex<T: Scalar>(a: T, b: Matrix<T>, c: Matrix<T>) -> Result<EmbeddedGraph<T>> {
    let mut spec = GridSpec::identity(&[1, 2, 3]);
    spec.vertical = vec![Matrix::from_fn(1, 1, |_, _| a.clone()), b, c];
    spec.build_named(|kind, i| match (kind, i) {
        ("v", 0) => "a".into(),
        ("v", 1) => "b".into(),
        ("v", 2) => "c".into(),
        _ => format!("{kind}{i}"),
    })
}

/// A random rational with numerator in `-9..=9` and denominator in
/// `1..=5`, never zero.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    loop {
        let num = rng.gen_range(-9i64..=9);
        if num != 0 {
            return Rational::from_i64(num) / Rational::from_i64(rng.gen_range(1i64..=5));
        }
    }
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix<Rational> {
    Matrix::from_fn(rows, cols, |_, _| random_rational(rng))
}

/// A random invertible square rational matrix.
pub fn random_invertible(rng: &mut impl Rng, n: usize) -> Matrix<Rational> {
    loop {
        let m = random_matrix(rng, n, n);
        if !m.is_singular().expect("square") {
            return m;
        }
    }
}

/// Replaces every edge weight with a random rational matrix of the same
/// shape.
pub fn randomize_weights<T: Field>(
    g: &EmbeddedGraph<T>,
    rng: &mut impl Rng,
) -> EmbeddedGraph<Rational> {
    g.map_weights(|w| random_matrix(rng, w.rows(), w.cols()))
}

/// Hangs a path `x - w' - b'` off the vertex `x`, where `w'` and `b'` are
/// new vertices of multiplicity `n_x` (colours chosen to alternate) and
/// identity weights. The new edge enters the rotation of `x` in corner
/// `corner`; the cilium of `x` stays on the old side of that corner.
pub fn attach_pendant<T: Scalar>(
    g: &EmbeddedGraph<T>,
    x: crate::graph::VertexId,
    corner: usize,
) -> Result<EmbeddedGraph<T>> {
    let mut p = g.to_parts();
    let (color, n, deg) = {
        let v = &p.vertices[x.0];
        (v.color, v.multiplicity, v.degree())
    };
    if corner >= deg.max(1) {
        return Err(crate::error::Error::IndexOutOfRange {
            op: "attach_pendant",
            index: corner,
            size: deg,
        });
    }
    let base = p.vertices[x.0].name.clone();
    let near = p.add_vertex(format!("{base}.1"), color.other(), n);
    let far = p.add_vertex(format!("{base}.2"), color, n);
    let (e1, e2) = match color {
        Color::Black => (
            p.add_edge(format!("{base}.e1"), near, x, Matrix::identity(n)),
            p.add_edge(format!("{base}.e2"), near, far, Matrix::identity(n)),
        ),
        Color::White => (
            p.add_edge(format!("{base}.e1"), x, near, Matrix::identity(n)),
            p.add_edge(format!("{base}.e2"), far, near, Matrix::identity(n)),
        ),
    };
    let v = &mut p.vertices[x.0];
    v.rotation.insert(corner, e1);
    if v.cilium > corner {
        v.cilium += 1;
    }
    p.set_rotation(near, vec![e1, e2], 0);
    p.set_rotation(far, vec![e2], 0);
    p.signs = None;
    EmbeddedGraph::new(p)
}
