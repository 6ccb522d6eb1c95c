//! Kasteleyn signs and the block Kasteleyn matrix.
//!
//! Signs `ε(e) ∈ {±1}` are found by Gaussian elimination over GF(2), one
//! equation per bounded face. A bounded face with `2ℓ` boundary darts must
//! satisfy `Π ε(e) = (-1)^(ℓ - 1 + Σ_v (n_v - 1))`, where the sum runs over
//! the vertices whose cilium points into the face. For uniform `n` this is
//! `(-1)^(ℓ - 1 + k)` when `n` is even and `(-1)^(ℓ - 1)` when `n` is odd.
//! The outer face carries no constraint.
//!
//! Row blocks of `K` are white vertices, column blocks black vertices, both
//! in vertex order. The block `[w],[b]` is the sum of `ε(e) wt(e)` over the
//! edges joining `w` and `b`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EmbeddedGraph, Face, FaceId, VertexId};
use crate::matrix::{BlockMatrix, Matrix};
use crate::scalar::{Field, Real, Scalar};

/// Required parity of `Π ε` around a bounded face: `true` means the
/// product must be `-1`.
pub fn face_parity<T: Scalar>(g: &EmbeddedGraph<T>, face: &Face) -> bool {
    let cilia: usize = face
        .inward_cilia
        .iter()
        .map(|&v| g.multiplicity(v) - 1)
        .sum();
    (face.half_length() + 1 + cilia) % 2 == 1
}

/// Bounded faces whose sign product violates [`face_parity`].
pub fn violated_faces<T: Scalar>(g: &EmbeddedGraph<T>, signs: &[i8]) -> Vec<FaceId> {
    g.bounded_faces()
        .filter(|f| {
            let negative = f.edges().filter(|e| signs[e.0] < 0).count() % 2 == 1;
            negative != face_parity(g, f)
        })
        .map(|f| f.id)
        .collect()
}

/// Solves the face constraints. Free edges get `+1`, so the result is
/// deterministic for a given edge order.
pub fn solve_signs<T: Scalar>(g: &EmbeddedGraph<T>) -> Result<Vec<i8>> {
    let m = g.num_edges();
    let words = m / 64 + 1;
    // bit m of each row holds the right-hand side
    let mut rows: Vec<(FaceId, Vec<u64>)> = g
        .bounded_faces()
        .map(|f| {
            let mut bits = vec![0u64; words];
            for e in f.edges() {
                bits[e.0 / 64] ^= 1 << (e.0 % 64);
            }
            if face_parity(g, f) {
                bits[m / 64] |= 1 << (m % 64);
            }
            (f.id, bits)
        })
        .collect();
    let bit = |r: &[u64], c: usize| (r[c / 64] >> (c % 64)) & 1 == 1;

    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..m {
        let Some(p) = (rank..rows.len()).find(|&r| bit(&rows[r].1, col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].1.clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && bit(&row.1, col) {
                for (a, b) in row.1.iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if let Some((face, _)) = rows[rank..].iter().find(|(_, r)| bit(r, m)) {
        return Err(Error::InfeasibleSigns { face: face.0 });
    }
    let mut signs = vec![1i8; m];
    for (r, &col) in pivots.iter().enumerate() {
        if bit(&rows[r].1, m) {
            signs[col] = -1;
        }
    }
    Ok(signs)
}

/// The Kasteleyn matrix of a graph together with its sign connection and a
/// lazily computed inverse.
#[derive(Debug)]
pub struct KasteleynSystem<T: Scalar> {
    graph: EmbeddedGraph<T>,
    signs: Vec<i8>,
    k: BlockMatrix<T>,
    inverse: OnceLock<Result<BlockMatrix<T>>>,
}

impl<T: Scalar> Clone for KasteleynSystem<T> {
    fn clone(&self) -> Self {
        let inverse = OnceLock::new();
        if let Some(inv) = self.inverse.get() {
            let _ = inverse.set(inv.clone());
        }
        KasteleynSystem {
            graph: self.graph.clone(),
            signs: self.signs.clone(),
            k: self.k.clone(),
            inverse,
        }
    }
}

impl<T: Scalar> KasteleynSystem<T> {
    /// Uses the graph's own signs when it carries them, otherwise solves.
    pub fn new(g: &EmbeddedGraph<T>) -> Result<Self> {
        let signs = match g.user_signs() {
            Some(s) => s.to_vec(),
            None => solve_signs(g)?,
        };
        Self::with_signs(g, signs)
    }

    /// Assembles `K` for explicitly given signs. The signs are not checked
    /// against the face rule; see [`violated_faces`].
    pub fn with_signs(g: &EmbeddedGraph<T>, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != g.num_edges() {
            return Err(Error::ShapeMismatch {
                op: "KasteleynSystem::with_signs",
                left: (g.num_edges(), 1),
                right: (signs.len(), 1),
            });
        }
        let row_sizes = g.whites().iter().map(|&v| g.multiplicity(v)).collect();
        let col_sizes = g.blacks().iter().map(|&v| g.multiplicity(v)).collect();
        let mut k = BlockMatrix::zeros(row_sizes, col_sizes);
        for (i, e) in g.edges().iter().enumerate() {
            let w = e.weight.scale(&T::from_i64(signs[i] as i64));
            k.add_to_block(g.color_index(e.white), g.color_index(e.black), &w)?;
        }
        Ok(KasteleynSystem {
            graph: g.clone(),
            signs,
            k,
            inverse: OnceLock::new(),
        })
    }

    pub fn graph(&self) -> &EmbeddedGraph<T> {
        &self.graph
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn matrix(&self) -> &BlockMatrix<T> {
        &self.k
    }

    /// `K_{[w],[b]}` for a white and a black vertex.
    pub fn block(&self, w: VertexId, b: VertexId) -> Matrix<T> {
        self.k
            .block(self.graph.color_index(w), self.graph.color_index(b))
    }

    /// `ε(e) wt(e)`, the contribution of one edge to its block.
    pub fn signed_weight(&self, e: EdgeId) -> Matrix<T> {
        self.graph
            .edge(e)
            .weight
            .scale(&T::from_i64(self.signs[e.0] as i64))
    }

    pub fn dimension(&self) -> usize {
        self.k.flat().rows()
    }
}

impl<T: Field> KasteleynSystem<T> {
    pub fn determinant(&self) -> T {
        self.k.flat().det().expect("K is square")
    }

    /// `K⁻¹`, with row blocks indexed by black vertices and column blocks by
    /// white vertices. Computed once.
    pub fn inverse(&self) -> Result<&BlockMatrix<T>> {
        self.inverse
            .get_or_init(|| {
                let inv = self
                    .k
                    .flat()
                    .inverse()
                    .map_err(|_| Error::Singular("Kasteleyn matrix".into()))?;
                BlockMatrix::from_flat(
                    self.k.col_sizes().to_vec(),
                    self.k.row_sizes().to_vec(),
                    inv,
                )
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `K^{[b],[w]}`: the block of `K⁻¹` in black row `b`, white column `w`.
    pub fn inverse_block(&self, b: VertexId, w: VertexId) -> Result<Matrix<T>> {
        let inv = self.inverse()?;
        Ok(inv.block(self.graph.color_index(b), self.graph.color_index(w)))
    }
}

impl<T: Real> KasteleynSystem<T> {
    /// `Z = |det K|`.
    pub fn partition_function(&self) -> T {
        self.determinant().abs_value()
    }
}
