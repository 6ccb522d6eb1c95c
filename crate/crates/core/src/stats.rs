//! Local statistics of the dimer measure from the inverse Kasteleyn matrix.
//!
//! For an edge `e = (w, b)` the probability matrix is
//! `P_e = K^{[b],[w]} ε(e) wt(e)`, an `n_b x n_b` matrix. Its
//! characteristic coefficients `e_k(P_e)` determine the law of the edge
//! multiplicity through `det(I + (t - 1) P_e) = Σ Pr[m_e = k] t^k`.
//! Parallel edges each get their own `P_e`.

use num_traits::One;

use crate::error::{Error, Result};
use crate::graph::EdgeId;
use crate::kasteleyn::KasteleynSystem;
use crate::matrix::Matrix;
use crate::perm::{psi, signed_cycle_sum};
use crate::poly::Poly;
use crate::scalar::{Field, Rational, Real, Scalar};

/// Most marked edges accepted by [`joint_pgf`].
pub const JOINT_PGF_LIMIT: usize = 4;

pub fn probability_matrix<T: Field>(sys: &KasteleynSystem<T>, e: EdgeId) -> Result<Matrix<T>> {
    let edge = sys.graph().edge(e);
    Ok(&sys.inverse_block(edge.black, edge.white)? * &sys.signed_weight(e))
}

/// `K_{[w1],[b1]} K^{[b1],[w2]} K_{[w2],[b2]} ... K^{[bk],[w1]}`, with the
/// `K` factors restricted to the listed edges.
pub fn cycle_probability_matrix<T: Field>(
    sys: &KasteleynSystem<T>,
    edges: &[EdgeId],
) -> Result<Matrix<T>> {
    let Some(&first) = edges.first() else {
        return Err(Error::Unsupported("empty edge cycle".into()));
    };
    let g = sys.graph();
    let mut m = Matrix::identity(g.multiplicity(g.edge(first).white));
    for (i, &e) in edges.iter().enumerate() {
        let next = edges[(i + 1) % edges.len()];
        m = m.checked_mul(&sys.signed_weight(e))?;
        m = m.checked_mul(&sys.inverse_block(g.edge(e).black, g.edge(next).white)?)?;
    }
    Ok(m)
}

/// Law of one edge multiplicity: `masses[k] = Pr[m = k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    pub masses: Vec<T>,
}

impl<T: Scalar> Distribution<T> {
    pub fn total(&self) -> T {
        self.masses.iter().fold(T::zero(), |a, m| a + m)
    }

    pub fn mean(&self) -> T {
        self.raw_moment(1)
    }

    /// `Σ_k k^N Pr[m = k]`.
    pub fn raw_moment(&self, order: u32) -> T {
        self.masses.iter().enumerate().fold(T::zero(), |a, (k, m)| {
            a + T::from_i64((k as i64).pow(order)) * m
        })
    }
}

impl<T: Real> Distribution<T> {
    /// True when some mass is negative; happens only for weights that do
    /// not define a positive measure.
    pub fn has_negative_mass(&self) -> bool {
        self.masses.iter().any(|m| *m < T::zero())
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// `Pr[m = k] = Σ_{i ≥ k} (-1)^{i-k} C(i, k) e_i(P)`.
pub fn multiplicity_distribution<T: Field>(p: &Matrix<T>) -> Result<Distribution<T>> {
    let e = p.char_coeffs()?;
    Ok(from_elementary(&e))
}

fn from_elementary<T: Scalar>(e: &[T]) -> Distribution<T> {
    let n = e.len() - 1;
    let masses = (0..=n)
        .map(|k| {
            (k..=n).fold(T::zero(), |acc, i| {
                let term = T::from_i64(binomial(i, k)) * &e[i];
                if (i - k) % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            })
        })
        .collect();
    Distribution { masses }
}

/// Coefficients of `det(I + (t - 1) P)` in `t`, lowest first; the same
/// numbers as [`multiplicity_distribution`].
pub fn edge_pgf<T: Field>(p: &Matrix<T>) -> Result<Vec<T>> {
    Ok(multiplicity_distribution(p)?.masses)
}

/// `Pr[m = k] = det(I - P) e_k(P (I - P)^{-1})`; needs `I - P` invertible.
pub fn distribution_via_complement<T: Field>(p: &Matrix<T>) -> Result<Distribution<T>> {
    let q = &Matrix::identity(p.rows()) - p;
    let scale = q.det()?;
    let e = (p * &q.inverse()?).char_coeffs()?;
    Ok(Distribution {
        masses: e.into_iter().map(|x| x * &scale).collect(),
    })
}

/// `Pr[m = k] = det(P) e_{n-k}(P^{-1} (I - P))`; needs `P` invertible.
pub fn distribution_via_inverse<T: Field>(p: &Matrix<T>) -> Result<Distribution<T>> {
    let scale = p.det()?;
    let q = &Matrix::identity(p.rows()) - p;
    let e = (&p.inverse()? * &q).char_coeffs()?;
    Ok(Distribution {
        masses: e.into_iter().rev().map(|x| x * &scale).collect(),
    })
}

/// `Pr[m ≠ 0] = 1 - det(I - P)`.
pub fn probability_used<T: Field>(p: &Matrix<T>) -> Result<T> {
    Ok(T::one() - (&Matrix::identity(p.rows()) - p).det()?)
}

pub fn expected_multiplicity<T: Scalar>(p: &Matrix<T>) -> T {
    p.trace()
}

/// `tr(P) - tr(P^2)`.
pub fn variance<T: Scalar>(p: &Matrix<T>) -> T {
    p.trace() - (p * p).trace()
}

/// Stirling numbers of the second kind `S(n, k)` for `0 <= k <= n`.
pub fn stirling2(n: usize) -> Vec<Vec<i64>> {
    let mut s = vec![vec![0i64; n + 1]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for k in 1..=i {
            s[i][k] = k as i64 * s[i - 1][k] + s[i - 1][k - 1];
        }
    }
    s
}

/// `E[m^N] = Σ_{k=1}^N k! S(N, k) e_k(P)`; `order` must be at least 1.
pub fn moment<T: Field>(p: &Matrix<T>, order: usize) -> Result<T> {
    if order == 0 {
        return Err(Error::Unsupported("moment order must be at least 1".into()));
    }
    let e = p.char_coeffs()?;
    let s = stirling2(order);
    let mut total = T::zero();
    let mut factorial = 1i64;
    for k in 1..=order.min(e.len() - 1) {
        factorial *= k as i64;
        total = total + T::from_i64(factorial * s[order][k]) * &e[k];
    }
    Ok(total)
}

fn require_distinct<T: Scalar>(sys: &KasteleynSystem<T>, edges: &[EdgeId]) -> Result<()> {
    for (i, e) in edges.iter().enumerate() {
        if edges[..i].contains(e) {
            return Err(Error::DuplicateEdges(sys.graph().edge(*e).name.clone()));
        }
    }
    Ok(())
}

/// The matrices `X_l = K^{-1} B_l` restricted to the block rows and
/// columns of the black endpoints of `edges`. Only those blocks enter
/// traces of products of the `X_l`.
pub fn marked_columns<T: Field>(
    sys: &KasteleynSystem<T>,
    edges: &[EdgeId],
) -> Result<Vec<Matrix<T>>> {
    let g = sys.graph();
    let mut blacks = Vec::new();
    for &e in edges {
        let b = g.edge(e).black;
        if !blacks.contains(&b) {
            blacks.push(b);
        }
    }
    let mut offsets = vec![0];
    for &b in &blacks {
        offsets.push(offsets.last().unwrap() + g.multiplicity(b));
    }
    let size = *offsets.last().unwrap();
    edges
        .iter()
        .map(|&e| {
            let edge = g.edge(e);
            let col = blacks
                .iter()
                .position(|&b| b == edge.black)
                .expect("listed");
            let wt = sys.signed_weight(e);
            let mut x = Matrix::zeros(size, size);
            for (r, &b) in blacks.iter().enumerate() {
                let block = sys.inverse_block(b, edge.white)?.checked_mul(&wt)?;
                x.set_block(offsets[r], offsets[col], &block);
            }
            Ok(x)
        })
        .collect()
}

/// `E[m_{e_1} ... m_{e_k}]` for distinct edges, as
/// `Σ_σ sign(σ) Π_{cycles c} tr(P_c)`.
pub fn product_expectation<T: Field>(sys: &KasteleynSystem<T>, edges: &[EdgeId]) -> Result<T> {
    require_distinct(sys, edges)?;
    signed_cycle_sum(edges.len(), |c| {
        let list: Vec<EdgeId> = c.iter().map(|&i| edges[i]).collect();
        Ok(cycle_probability_matrix(sys, &list)?.trace())
    })
}

/// The same expectation as [`product_expectation`], through `Ψ_k` of the
/// restricted `X_l` matrices.
pub fn product_expectation_psi<T: Field>(sys: &KasteleynSystem<T>, edges: &[EdgeId]) -> Result<T> {
    require_distinct(sys, edges)?;
    psi(&marked_columns(sys, edges)?)
}

/// `Cov(m_1, m_2) = -tr(K_{[w1],[b1]} K^{[b1],[w2]} K_{[w2],[b2]} K^{[b2],[w1]})`.
pub fn covariance<T: Field>(sys: &KasteleynSystem<T>, e1: EdgeId, e2: EdgeId) -> Result<T> {
    require_distinct(sys, &[e1, e2])?;
    Ok(-cycle_probability_matrix(sys, &[e1, e2])?.trace())
}

/// Both sides of `det(A)^(k-1) ∂_{t_1}...∂_{t_k} det(A) = Ψ_k(adj(A) ∂_1 A, ..., adj(A) ∂_k A)`
/// for the variables `vars`. Multiplying the derivative identity through by
/// `det(A)^k` keeps everything polynomial. Holds when no entry of `A`
/// depends on two of the variables.
pub fn derivative_identity(a: &Matrix<Poly>, vars: &[usize]) -> Result<(Poly, Poly)> {
    let det = a.det_division_free()?;
    let mut lhs = vars.iter().fold(det.clone(), |d, &v| d.derivative(v));
    for _ in 1..vars.len() {
        lhs = lhs * &det;
    }
    let adj = a.adjugate()?;
    let ys = vars
        .iter()
        .map(|&v| adj.checked_mul(&a.map(|p| p.derivative(v))))
        .collect::<Result<Vec<_>>>()?;
    Ok((lhs, psi(&ys)?))
}

/// Joint generating function `E[Π t_l^{m_l}]`, with `t_l` the variable of
/// index `l` in `edges`.
pub fn joint_pgf(sys: &KasteleynSystem<Rational>, edges: &[EdgeId]) -> Result<Poly> {
    require_distinct(sys, edges)?;
    if edges.len() > JOINT_PGF_LIMIT {
        return Err(Error::TooLarge {
            what: "marked edges",
            got: edges.len(),
            limit: JOINT_PGF_LIMIT,
        });
    }
    let xs = marked_columns(sys, edges)?;
    let size = xs.first().map_or(0, Matrix::rows);
    let mut a = Matrix::<Poly>::identity(size);
    for (l, x) in xs.iter().enumerate() {
        let shift = Poly::var(l) - Poly::one();
        a = &a + &x.map(|v| Poly::from(v.clone()) * &shift);
    }
    a.det_division_free()
}

/// Law of the multiplicity of `e`. The masses stop at `min(n_w, n_b)`, the
/// largest multiplicity the edge can carry.
pub fn edge_distribution<T: Field>(sys: &KasteleynSystem<T>, e: EdgeId) -> Result<Distribution<T>> {
    let p = probability_matrix(sys, e)?;
    Ok(truncate(multiplicity_distribution(&p)?, sys, e))
}

fn truncate<T: Field>(
    mut d: Distribution<T>,
    sys: &KasteleynSystem<T>,
    e: EdgeId,
) -> Distribution<T> {
    let g = sys.graph();
    let edge = g.edge(e);
    let cap = g.multiplicity(edge.white).min(g.multiplicity(edge.black));
    d.masses.truncate(cap + 1);
    d
}

/// Everything reported for one edge.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeStatistics<T> {
    pub edge: EdgeId,
    pub probability_matrix: Matrix<T>,
    /// `e_0(P), ..., e_n(P)`.
    pub char_coeffs: Vec<T>,
    pub distribution: Distribution<T>,
    pub mean: T,
    pub variance: T,
}

impl<T: Field> EdgeStatistics<T> {
    pub fn compute(sys: &KasteleynSystem<T>, e: EdgeId) -> Result<Self> {
        let p = probability_matrix(sys, e)?;
        let char_coeffs = p.char_coeffs()?;
        Ok(EdgeStatistics {
            edge: e,
            distribution: truncate(from_elementary(&char_coeffs), sys, e),
            mean: expected_multiplicity(&p),
            variance: variance(&p),
            char_coeffs,
            probability_matrix: p,
        })
    }
}
