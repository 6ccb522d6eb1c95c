//! Free-fermionic six-vertex model as a mixed dimer model.
//!
//! Black lattice vertices have multiplicity 2 and white edge midpoints
//! multiplicity 1. The edge from black `b` to the white neighbour in
//! direction `D` carries the `1 x 2` row vector `v_D`:
//! `v_E = (1, 0)`, `v_N = (c, s)`, `v_W = (0, 1)`, `v_S = (-s, c)`.
//! Black cilia sit in the south-east corner, so black reading order is
//! `E, N, W, S`. Domain-wall boundary: pendant whites on the left and right
//! sides only.

use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::graph::{Color, EmbeddedGraph, GraphParts, Layout};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SixVertexSpec<T> {
    pub rows: usize,
    pub cols: usize,
    /// `cos θ`
    pub cos: T,
    /// `sin θ`
    pub sin: T,
}

impl SixVertexSpec<f64> {
    pub fn from_angle(rows: usize, cols: usize, theta: f64) -> Self {
        SixVertexSpec {
            rows,
            cols,
            cos: theta.cos(),
            sin: theta.sin(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    East,
    North,
    West,
    South,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::East,
        Direction::North,
        Direction::West,
        Direction::South,
    ];

    pub fn letter(self) -> char {
        match self {
            Direction::East => 'E',
            Direction::North => 'N',
            Direction::West => 'W',
            Direction::South => 'S',
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "e" | "east" => Some(Direction::East),
            "n" | "north" => Some(Direction::North),
            "w" | "west" => Some(Direction::West),
            "s" | "south" => Some(Direction::South),
            _ => None,
        }
    }
}

/// Name of the edge leaving black vertex `(x, y)` in direction `d`.
pub fn edge_name(x: usize, y: usize, d: Direction) -> String {
    format!("b{x}_{y}{}", d.letter())
}

impl<T: Scalar> SixVertexSpec<T> {
    pub fn direction_vector(&self, d: Direction) -> Matrix<T> {
        let (a, b) = match d {
            Direction::East => (T::one(), T::zero()),
            Direction::North => (self.cos.clone(), self.sin.clone()),
            Direction::West => (T::zero(), T::one()),
            Direction::South => (-self.sin.clone(), self.cos.clone()),
        };
        Matrix::from_fn(1, 2, |_, j| if j == 0 { a.clone() } else { b.clone() })
    }

    /// The four direction vectors stacked in the order `E, N, W, S`.
    pub fn direction_matrix(&self) -> Matrix<T> {
        let mut m = Matrix::zeros(4, 2);
        for (i, d) in Direction::ALL.into_iter().enumerate() {
            m.set_block(i, 0, &self.direction_vector(d));
        }
        m
    }

    /// Name of the edge from the central black vertex; needs odd sizes.
    pub fn center_edge(&self, d: Direction) -> Result<String> {
        if self.rows % 2 == 0 || self.cols % 2 == 0 {
            return Err(Error::Unsupported(
                "the lattice has no central vertex".into(),
            ));
        }
        Ok(edge_name(self.cols / 2, self.rows / 2, d))
    }
}

/// Builds the domain-wall lattice. Blacks are `b{x}_{y}`; horizontal
/// whites `h{x}_{y}` sit left of black column `x` (so `h0_y` and
/// `h{cols}_y` are the pendants); vertical whites `u{x}_{y}` sit below
/// black row `y`.
pub fn six_vertex<T: Scalar>(spec: &SixVertexSpec<T>) -> Result<EmbeddedGraph<T>> {
    let (rows, cols) = (spec.rows, spec.cols);
    if rows == 0 || cols == 0 {
        return Err(Error::Unsupported(
            "six-vertex lattice needs rows, cols >= 1".into(),
        ));
    }
    let mut p = GraphParts::new();
    let mut lay = Layout::new();
    let mut black = vec![vec![None; rows]; cols];
    for (x, column) in black.iter_mut().enumerate() {
        for (y, slot) in column.iter_mut().enumerate() {
            let b = p.add_vertex(format!("b{x}_{y}"), Color::Black, 2);
            lay.place(b, 2.0 * x as f64, 2.0 * y as f64);
            lay.cilium_toward(b, -FRAC_PI_4);
            *slot = Some(b);
        }
    }
    let black = |x: usize, y: usize| black[x][y].expect("placed");
    for y in 0..rows {
        for x in 0..=cols {
            let w = p.add_vertex(format!("h{x}_{y}"), Color::White, 1);
            lay.place(w, 2.0 * x as f64 - 1.0, 2.0 * y as f64);
            if x > 0 {
                p.add_edge(
                    edge_name(x - 1, y, Direction::East),
                    w,
                    black(x - 1, y),
                    spec.direction_vector(Direction::East),
                );
            }
            if x < cols {
                p.add_edge(
                    edge_name(x, y, Direction::West),
                    w,
                    black(x, y),
                    spec.direction_vector(Direction::West),
                );
            }
        }
    }
    for x in 0..cols {
        for y in 1..rows {
            let w = p.add_vertex(format!("u{x}_{y}"), Color::White, 1);
            lay.place(w, 2.0 * x as f64, 2.0 * y as f64 - 1.0);
            p.add_edge(
                edge_name(x, y - 1, Direction::North),
                w,
                black(x, y - 1),
                spec.direction_vector(Direction::North),
            );
            p.add_edge(
                edge_name(x, y, Direction::South),
                w,
                black(x, y),
                spec.direction_vector(Direction::South),
            );
        }
    }
    lay.embed(p)
}

/// `c1 c2 = a1 a2 + b1 b2`.
pub fn free_fermion_check<T: Scalar>(a1: &T, a2: &T, b1: &T, b2: &T, c1: &T, c2: &T) -> bool {
    c1.clone() * c2 == a1.clone() * a2 + b1.clone() * b2
}

/// Boltzmann weights `[a1, a2, b1, b2, c1, c2]` realised by the rows
/// `r1..r4` of a `4 x 2` matrix: `a = (Δ12, Δ34)`, `b = (Δ14, Δ23)`,
/// `c = (Δ13, Δ24)`, where `Δij` is the minor on rows `i, j`.
pub fn boltzmann_weights<T: Scalar>(m: &Matrix<T>) -> [T; 6] {
    let d = |i: usize, j: usize| m[(i, 0)].clone() * &m[(j, 1)] - m[(j, 0)].clone() * &m[(i, 1)];
    [d(0, 1), d(2, 3), d(0, 3), d(1, 2), d(0, 2), d(1, 3)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    #[test]
    fn lattice_counts() {
        let spec = SixVertexSpec {
            rows: 3,
            cols: 3,
            cos: rat(3, 5),
            sin: rat(4, 5),
        };
        let g = six_vertex(&spec).unwrap();
        assert_eq!(g.blacks().len(), 9);
        assert_eq!(g.whites().len(), 18);
        assert_eq!(g.num_edges(), 30);
        assert_eq!(g.bounded_faces().count(), 4);
        let b = g.vertex_by_name("b1_1").unwrap();
        let order: Vec<String> = g
            .reading_order(b)
            .iter()
            .map(|&e| g.edge(e).name.clone())
            .collect();
        assert_eq!(order, ["b1_1E", "b1_1N", "b1_1W", "b1_1S"]);
    }

    #[test]
    fn symmetric_weights_are_free_fermionic() {
        let spec = SixVertexSpec::<Rational> {
            rows: 1,
            cols: 1,
            cos: rat(3, 5),
            sin: rat(4, 5),
        };
        let w = boltzmann_weights(&spec.direction_matrix());
        assert_eq!(
            w,
            [
                rat(4, 5),
                rat(4, 5),
                rat(3, 5),
                rat(3, 5),
                rat(1, 1),
                rat(1, 1)
            ]
        );
        let [a1, a2, b1, b2, c1, c2] = &w;
        assert!(free_fermion_check(a1, a2, b1, b2, c1, c2));
        let one = rat(1, 1);
        assert!(!free_fermion_check(&one, &one, &one, &one, &one, &one));
    }
}
