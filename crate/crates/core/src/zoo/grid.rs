//! The `2 x (N+1)` grid graph `G_N` and its noncommutative continued
//! fractions.
//!
//! Column `i` holds a black and a white vertex joined by the vertical edge
//! `B_i`. Black vertices sit at the bottom of even columns and the top of
//! odd ones. Between columns `i-1` and `i` the edge `A_i = (w_{i-1}, b_i)`
//! carries sign `+1` and `C_i = (w_i, b_{i-1})` carries sign `-1`, so with
//! vertices ordered left to right `K` is block tridiagonal with `B_i` on the
//! diagonal, `A_i` above and `-C_i` below. All cilia point outward.
//!
//! The closed forms take the vertical weights of a grid whose horizontal
//! weights are all the identity; [`GridSpec::vertical_after_gauge`] brings
//! any grid to that form.

use crate::error::{Error, Result};
use crate::graph::{Color, EmbeddedGraph, GraphParts, Layout, VertexId};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec<T> {
    /// `B_0..B_N`; `B_i` is `n_i x n_i`.
    pub vertical: Vec<Matrix<T>>,
    /// `A_1..A_N`, stored from index 0; `A_i` is `n_{i-1} x n_i`.
    pub upper: Vec<Matrix<T>>,
    /// `C_1..C_N`, stored from index 0; `C_i` is `n_i x n_{i-1}`.
    pub lower: Vec<Matrix<T>>,
}

impl<T: Scalar> GridSpec<T> {
    /// All weights the identity (or the rectangular identity for mixed
    /// column sizes).
    pub fn identity(sizes: &[usize]) -> Self {
        let rect = |r: usize, c: usize| {
            Matrix::from_fn(r, c, |i, j| if i == j { T::one() } else { T::zero() })
        };
        GridSpec {
            vertical: sizes.iter().map(|&n| Matrix::identity(n)).collect(),
            upper: sizes.windows(2).map(|w| rect(w[0], w[1])).collect(),
            lower: sizes.windows(2).map(|w| rect(w[1], w[0])).collect(),
        }
    }

    pub fn uniform(big_n: usize, n: usize) -> Self {
        Self::identity(&vec![n; big_n + 1])
    }

    /// Given vertical weights with identity horizontal ones.
    pub fn from_vertical(vertical: Vec<Matrix<T>>) -> Self {
        let sizes: Vec<usize> = vertical.iter().map(Matrix::rows).collect();
        GridSpec {
            vertical,
            ..Self::identity(&sizes)
        }
    }

    /// `N`, the index of the last column.
    pub fn len(&self) -> usize {
        self.vertical.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertical.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.vertical.iter().map(Matrix::rows).collect()
    }

    /// Builds the grid with the default names: `w{i}`, `b{i}` for vertices
    /// and `v{i}`, `a{i}`, `c{i}` for the `B`, `A`, `C` edges.
    pub fn build(&self) -> Result<EmbeddedGraph<T>> {
        self.build_named(|kind, i| format!("{kind}{i}"))
    }

    /// Builds the grid, naming edges by `name("v" | "a" | "c", index)`.
    pub fn build_named(&self, name: impl Fn(&str, usize) -> String) -> Result<EmbeddedGraph<T>> {
        if self.vertical.is_empty()
            || self.upper.len() + 1 != self.vertical.len()
            || self.lower.len() != self.upper.len()
        {
            return Err(Error::ShapeMismatch {
                op: "grid",
                left: (self.vertical.len(), 1),
                right: (self.upper.len() + 1, self.lower.len() + 1),
            });
        }
        let sizes = self.sizes();
        let mut p = GraphParts::new();
        let mut lay = Layout::new();
        let mut whites = Vec::new();
        let mut blacks = Vec::new();
        for (i, &n) in sizes.iter().enumerate() {
            let w = p.add_vertex(format!("w{i}"), Color::White, n);
            let b = p.add_vertex(format!("b{i}"), Color::Black, n);
            let (yb, yw) = if i % 2 == 0 { (0.0, 1.0) } else { (1.0, 0.0) };
            lay.place(w, i as f64, yw);
            lay.place(b, i as f64, yb);
            whites.push(w);
            blacks.push(b);
        }
        let mut signs = Vec::new();
        for (i, bi) in self.vertical.iter().enumerate() {
            p.add_edge(name("v", i), whites[i], blacks[i], bi.clone());
            signs.push(1);
        }
        for i in 1..sizes.len() {
            p.add_edge(
                name("a", i),
                whites[i - 1],
                blacks[i],
                self.upper[i - 1].clone(),
            );
            signs.push(1);
            p.add_edge(
                name("c", i),
                whites[i],
                blacks[i - 1],
                self.lower[i - 1].clone(),
            );
            signs.push(-1);
        }
        place_outward_cilia(&mut lay, &whites, &blacks);
        let g = lay.embed(p)?;
        g.with_signs(Some(signs))
    }
}

/// Cilia: corners point diagonally out, middle
/// vertices straight down or up.
fn place_outward_cilia(lay: &mut Layout, whites: &[VertexId], blacks: &[VertexId]) {
    use std::f64::consts::PI;
    let last = whites.len() - 1;
    for (i, (&w, &b)) in whites.iter().zip(blacks).enumerate() {
        for v in [w, b] {
            let top = lay.positions[v.0].1 > 0.5;
            let dir = match (i == 0, i == last, top) {
                (true, _, false) => -0.75 * PI,
                (true, _, true) => 0.75 * PI,
                (_, true, false) => -0.25 * PI,
                (_, true, true) => 0.25 * PI,
                (_, _, false) => -0.5 * PI,
                (_, _, true) => 0.5 * PI,
            };
            lay.cilium_toward(v, dir);
        }
    }
}

impl<T: Field> GridSpec<T> {
    /// Vertical weights of the gauge-equivalent grid whose horizontal
    /// weights are all the identity. Needs uniform size and invertible
    /// horizontal weights.
    pub fn vertical_after_gauge(&self) -> Result<Vec<Matrix<T>>> {
        let n = self.vertical[0].rows();
        if self.vertical.iter().any(|b| b.rows() != n) {
            return Err(Error::Unsupported(
                "gauge normalization needs uniform multiplicity".into(),
            ));
        }
        // K -> L K R with L, R block diagonal; L_0 = R_0 = I
        let mut left = Matrix::identity(n);
        let mut right = Matrix::identity(n);
        let mut out = vec![&(&left * &self.vertical[0]) * &right];
        for i in 1..self.vertical.len() {
            let r_next = (&left * &self.upper[i - 1]).inverse()?;
            let l_next = (&self.lower[i - 1] * &right).inverse()?;
            left = l_next;
            right = r_next;
            out.push(&(&left * &self.vertical[i]) * &right);
        }
        Ok(out)
    }
}

/// `F_{i,j} = [B_i, B_{i±1}, ..., B_j]`, with `F_{i,i} = B_i`.
pub fn continued_fraction<T: Field>(b: &[Matrix<T>], i: usize, j: usize) -> Result<Matrix<T>> {
    if i >= b.len() || j >= b.len() {
        return Err(Error::IndexOutOfRange {
            op: "continued_fraction",
            index: i.max(j),
            size: b.len(),
        });
    }
    let mut m = b[j].clone();
    let steps: Vec<usize> = if i <= j {
        (i..j).rev().collect()
    } else {
        (j + 1..=i).collect()
    };
    for k in steps {
        let inv = m.inverse().map_err(|_| {
            Error::Singular(format!("continued fraction intermediate before B_{k}"))
        })?;
        m = &b[k] + &inv;
    }
    Ok(m)
}

/// `K^{[i],[i]} = (F_{i,N} + F_{i,0} - B_i)^{-1}`.
pub fn diagonal_inverse_block<T: Field>(b: &[Matrix<T>], i: usize) -> Result<Matrix<T>> {
    let last = b.len() - 1;
    let s = &(&continued_fraction(b, i, last)? + &continued_fraction(b, i, 0)?) - &b[i];
    s.inverse()
}

/// `P = (B_i^{-1} F_{i,N} + B_i^{-1} F_{i,0} - I)^{-1}` for the vertical edge `i`.
pub fn vertical_probability<T: Field>(b: &[Matrix<T>], i: usize) -> Result<Matrix<T>> {
    let last = b.len() - 1;
    let bi = b[i].inverse()?;
    let n = b[i].rows();
    let s = &(&(&bi * &continued_fraction(b, i, last)?) + &(&bi * &continued_fraction(b, i, 0)?))
        - &Matrix::identity(n);
    s.inverse()
}

/// Which horizontal edge between columns `i` and `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Horizontal {
    /// `(w_i, b_{i+1})`, the `A_{i+1}` edge: `(I + F_{i,0} F_{i+1,N})^{-1}`.
    Upper,
    /// `(w_{i+1}, b_i)`, the `C_{i+1}` edge: `(I + F_{i+1,N} F_{i,0})^{-1}`.
    Lower,
}

pub fn horizontal_probability<T: Field>(
    b: &[Matrix<T>],
    i: usize,
    which: Horizontal,
) -> Result<Matrix<T>> {
    let last = b.len() - 1;
    if i >= last {
        return Err(Error::IndexOutOfRange {
            op: "horizontal_probability",
            index: i,
            size: last,
        });
    }
    let left = continued_fraction(b, i, 0)?;
    let right = continued_fraction(b, i + 1, last)?;
    let prod = match which {
        Horizontal::Upper => &left * &right,
        Horizontal::Lower => &right * &left,
    };
    (&Matrix::identity(prod.rows()) + &prod).inverse()
}

/// `Cov(m_{e_i}, m_{e_j})` for vertical edges `i < j`:
/// `(-1)^{j-i+1} tr(P_i F_{i,0}^{-1} ... F_{j-1,0}^{-1} P_j F_{j,N}^{-1} ... F_{i+1,N}^{-1})`.
pub fn vertical_covariance<T: Field>(b: &[Matrix<T>], i: usize, j: usize) -> Result<T> {
    if i >= j || j >= b.len() {
        return Err(Error::Unsupported(
            "vertical covariance needs i < j <= N".into(),
        ));
    }
    let last = b.len() - 1;
    let mut m = vertical_probability(b, i)?;
    for k in i..j {
        m = &m * &continued_fraction(b, k, 0)?.inverse()?;
    }
    m = &m * &vertical_probability(b, j)?;
    for k in (i + 1..=j).rev() {
        m = &m * &continued_fraction(b, k, last)?.inverse()?;
    }
    let t = m.trace();
    Ok(if (j - i) % 2 == 0 { -t } else { t })
}

/// `P'' (P' + P'' - P' P'')^{-1} P'`, the vertical probability matrix
/// assembled from the two sub-grids that end at column `i`.
pub fn split_probability<T: Field>(left: &Matrix<T>, right: &Matrix<T>) -> Result<Matrix<T>> {
    let mid = &(left + right) - &(left * right);
    Ok(&(right * &mid.inverse()?) * left)
}
