//! Brute-force ground truth: every (mixed) n-dimer cover, every half-edge
//! coloring, and the weight of each cover computed straight from colorings.
//!
//! A coloring gives each half-edge `(e, v)` a set of `m(e)` colors from
//! `1..=n_v` so that the sets around `v` partition the colors. Reading the
//! half-edges of `v` in cilium order, each set sorted increasingly, gives a
//! permutation `σ_v`. The weight of a cover is
//! `Σ_colorings Π_v sign(σ_v) · Π_e Δ_{I_e, J_e}(wt(e))`, where `I_e` are the
//! white-side colors (rows) and `J_e` the black-side colors (columns).
//!
//! Cover weights are evaluated by contracting vertex by vertex over the
//! color sets of half-open edges, not by listing colorings; the explicit
//! listing in [`enumerate_colorings`] exists for census checks.

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EmbeddedGraph, VertexId};
use crate::matrix::Matrix;
use crate::scalar::{Field, Real};

/// Edge multiplicities, indexed by edge.
pub type Cover = Vec<usize>;

/// Enumeration limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    pub covers: u64,
    pub colorings: u64,
}

pub const CAP_ENV_VAR: &str = "DIMERLAB_ORACLE_CAP";

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            covers: 1_000_000,
            colorings: 10_000_000,
        }
    }
}

impl OracleCaps {
    /// Defaults, with both caps replaced by `DIMERLAB_ORACLE_CAP` when it is
    /// set to a positive integer.
    pub fn from_env() -> Self {
        match std::env::var(CAP_ENV_VAR)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
        {
            Some(cap) if cap > 0 => OracleCaps {
                covers: cap,
                colorings: cap,
            },
            _ => OracleCaps::default(),
        }
    }
}

/// All covers in lexicographic order of the multiplicity vector.
pub fn enumerate_covers<T>(g: &EmbeddedGraph<T>, caps: OracleCaps) -> Result<Vec<Cover>>
where
    T: crate::scalar::Scalar,
{
    let m = g.num_edges();
    // vertices whose last incident edge (in edge order) is e must be saturated after e
    let mut closes: Vec<Vec<VertexId>> = vec![Vec::new(); m];
    for (vi, v) in g.vertices().iter().enumerate() {
        if let Some(last) = v.rotation.iter().max() {
            closes[last.0].push(VertexId(vi));
        }
    }
    let mut residual: Vec<usize> = g.vertices().iter().map(|v| v.multiplicity).collect();
    let mut current = vec![0; m];
    let mut out = Vec::new();
    if g.num_vertices() == 0 {
        out.push(Vec::new());
        return Ok(out);
    }

    struct Ctx<'a, T> {
        g: &'a EmbeddedGraph<T>,
        closes: &'a [Vec<VertexId>],
        cap: u64,
    }

    fn rec<T>(
        ctx: &Ctx<'_, T>,
        e: usize,
        residual: &mut [usize],
        current: &mut Vec<usize>,
        out: &mut Vec<Cover>,
    ) -> Result<()>
    where
        T: crate::scalar::Scalar,
    {
        if e == current.len() {
            if out.len() as u64 >= ctx.cap {
                return Err(Error::CapExceeded {
                    what: "number of covers",
                    cap: ctx.cap,
                });
            }
            out.push(current.clone());
            return Ok(());
        }
        let edge = ctx.g.edge(EdgeId(e));
        let (w, b) = (edge.white.0, edge.black.0);
        let max = residual[w].min(residual[b]);
        for k in 0..=max {
            residual[w] -= k;
            residual[b] -= k;
            if ctx.closes[e].iter().all(|v| residual[v.0] == 0) {
                current[e] = k;
                rec(ctx, e + 1, residual, current, out)?;
            }
            residual[w] += k;
            residual[b] += k;
        }
        current[e] = 0;
        Ok(())
    }

    let ctx = Ctx {
        g,
        closes: &closes,
        cap: caps.covers,
    };
    rec(&ctx, 0, &mut residual, &mut current, &mut out)?;
    Ok(out)
}

/// Ordered set partitions of `0..n` into blocks of the given sizes, with the
/// sign of the permutation obtained by concatenating the sorted blocks.
fn ordered_partitions(n: usize, sizes: &[usize]) -> Vec<(Vec<u32>, i8)> {
    fn rec(free: u32, sizes: &[usize], acc: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, i8)>) {
        let Some((&s, rest)) = sizes.split_first() else {
            let perm: Vec<u32> = acc
                .iter()
                .flat_map(|&mask| (0..32).filter(move |b| mask >> b & 1 == 1))
                .collect();
            let inversions = (0..perm.len())
                .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| perm[i] > perm[j])
                .count();
            out.push((acc.clone(), if inversions % 2 == 0 { 1 } else { -1 }));
            return;
        };
        for mask in subsets_of(free, s) {
            acc.push(mask);
            rec(free & !mask, rest, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    rec(full, sizes, &mut Vec::new(), &mut out);
    out
}

/// Subsets of the bits of `set` with exactly `k` elements, increasing.
fn subsets_of(set: u32, k: usize) -> Vec<u32> {
    let bits: Vec<u32> = (0..32).filter(|b| set >> b & 1 == 1).collect();
    let mut out = Vec::new();
    fn rec(bits: &[u32], k: usize, start: usize, acc: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..bits.len() {
            if bits.len() - i < k {
                break;
            }
            rec(bits, k - 1, i + 1, acc | 1 << bits[i], out);
        }
    }
    rec(&bits, k, 0, 0, &mut out);
    out
}

fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b as usize)
        .collect()
}

/// Per vertex: used edges in reading order and all their colorings.
fn vertex_colorings<T: crate::scalar::Scalar>(
    g: &EmbeddedGraph<T>,
    cover: &[usize],
    v: VertexId,
) -> (Vec<EdgeId>, Vec<(Vec<u32>, i8)>) {
    let used: Vec<EdgeId> = g
        .reading_order(v)
        .into_iter()
        .filter(|e| cover[e.0] > 0)
        .collect();
    let sizes: Vec<usize> = used.iter().map(|e| cover[e.0]).collect();
    let parts = ordered_partitions(g.multiplicity(v), &sizes);
    (used, parts)
}

/// One half-edge coloring of a cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    /// Color set on the white half of each edge, as a bitmask (bit `i` is
    /// color `i + 1`).
    pub white_sets: Vec<u32>,
    pub black_sets: Vec<u32>,
    pub sign: i8,
}

/// Lists every half-edge coloring of `cover`.
pub fn enumerate_colorings<T: crate::scalar::Scalar>(
    g: &EmbeddedGraph<T>,
    cover: &[usize],
    caps: OracleCaps,
) -> Result<Vec<Coloring>> {
    let per_vertex: Vec<_> = (0..g.num_vertices())
        .map(|i| vertex_colorings(g, cover, VertexId(i)))
        .collect();
    let total = per_vertex
        .iter()
        .try_fold(1u64, |acc, (_, p)| acc.checked_mul(p.len() as u64))
        .unwrap_or(u64::MAX);
    if total > caps.colorings {
        return Err(Error::CapExceeded {
            what: "number of colorings",
            cap: caps.colorings,
        });
    }
    let mut out = vec![Coloring {
        white_sets: vec![0; g.num_edges()],
        black_sets: vec![0; g.num_edges()],
        sign: 1,
    }];
    for (vi, (used, parts)) in per_vertex.iter().enumerate() {
        let white = g.vertex(VertexId(vi)).color == crate::graph::Color::White;
        let mut next = Vec::with_capacity(out.len() * parts.len());
        for c in &out {
            for (sets, sign) in parts {
                let mut c2 = c.clone();
                for (e, &s) in used.iter().zip(sets) {
                    if white {
                        c2.white_sets[e.0] = s;
                    } else {
                        c2.black_sets[e.0] = s;
                    }
                }
                c2.sign *= sign;
                next.push(c2);
            }
        }
        out = next;
    }
    Ok(out)
}

/// Signed product of minors for one explicit coloring.
pub fn coloring_weight<T: Field>(g: &EmbeddedGraph<T>, c: &Coloring) -> T {
    let mut acc = T::from_i64(c.sign as i64);
    for (i, e) in g.edges().iter().enumerate() {
        if c.white_sets[i] == 0 {
            continue;
        }
        let m = e
            .weight
            .minor(
                &mask_indices(c.white_sets[i]),
                &mask_indices(c.black_sets[i]),
            )
            .expect("sets have equal size");
        acc = acc * &m;
    }
    acc
}

/// Order in which vertices are contracted: breadth first from vertex 0,
/// which keeps the set of half-open edges small on strip-like graphs.
fn contraction_order<T: crate::scalar::Scalar>(g: &EmbeddedGraph<T>) -> Vec<VertexId> {
    let n = g.num_vertices();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = VecDeque::from([VertexId(s)]);
        while let Some(v) = q.pop_front() {
            order.push(v);
            let mut nbrs: Vec<VertexId> = g
                .vertex(v)
                .rotation
                .iter()
                .map(|&e| g.opposite(e, v))
                .collect();
            nbrs.sort();
            for u in nbrs {
                if !seen[u.0] {
                    seen[u.0] = true;
                    q.push_back(u);
                }
            }
        }
    }
    order
}

/// Weight of one cover, by contraction over half-open edges.
pub fn cover_weight<T: Field>(g: &EmbeddedGraph<T>, cover: &[usize]) -> T {
    let order = contraction_order(g);
    // open edges carry the color set chosen at their processed endpoint
    let mut open: Vec<EdgeId> = Vec::new();
    let mut states: HashMap<Vec<u32>, T> = HashMap::from([(Vec::new(), T::one())]);
    let mut minors: HashMap<(usize, u32, u32), T> = HashMap::new();
    let mut minor = |e: EdgeId, wmask: u32, bmask: u32| -> T {
        minors
            .entry((e.0, wmask, bmask))
            .or_insert_with(|| {
                g.edge(e)
                    .weight
                    .minor(&mask_indices(wmask), &mask_indices(bmask))
                    .expect("sets have equal size")
            })
            .clone()
    };

    for v in order {
        let (used, parts) = vertex_colorings(g, cover, v);
        let is_white = g.vertex(v).color == crate::graph::Color::White;
        // edges closing here: already open; others become open
        let closing: Vec<(usize, usize)> = used
            .iter()
            .enumerate()
            .filter_map(|(k, e)| open.iter().position(|o| o == e).map(|pos| (k, pos)))
            .collect();
        let opening: Vec<usize> = (0..used.len())
            .filter(|k| !closing.iter().any(|(c, _)| c == k))
            .collect();
        let keep: Vec<usize> = (0..open.len())
            .filter(|p| !closing.iter().any(|(_, q)| q == p))
            .collect();
        let mut next: HashMap<Vec<u32>, T> = HashMap::new();
        for (key, val) in &states {
            for (sets, sign) in &parts {
                let mut term = if *sign > 0 { val.clone() } else { -val.clone() };
                for &(k, pos) in &closing {
                    let (wm, bm) = if is_white {
                        (sets[k], key[pos])
                    } else {
                        (key[pos], sets[k])
                    };
                    term = term * &minor(used[k], wm, bm);
                    if term.is_zero() {
                        break;
                    }
                }
                if term.is_zero() {
                    continue;
                }
                let mut new_key: Vec<u32> = keep.iter().map(|&p| key[p]).collect();
                new_key.extend(opening.iter().map(|&k| sets[k]));
                match next.get_mut(&new_key) {
                    Some(x) => *x = x.clone() + &term,
                    None => {
                        next.insert(new_key, term);
                    }
                }
            }
        }
        let mut new_open: Vec<EdgeId> = keep.iter().map(|&p| open[p]).collect();
        new_open.extend(opening.iter().map(|&k| used[k]));
        open = new_open;
        states = next;
    }
    debug_assert!(open.is_empty());
    states.remove(&Vec::new()).unwrap_or_else(T::zero)
}

/// Exact law of the covers of one graph: every cover with its weight.
#[derive(Debug, Clone)]
pub struct Oracle<T> {
    covers: Vec<Cover>,
    weights: Vec<T>,
    total: T,
}

impl<T: Field> Oracle<T> {
    pub fn new(g: &EmbeddedGraph<T>, caps: OracleCaps) -> Result<Self> {
        let covers = enumerate_covers(g, caps)?;
        let weights: Vec<T> = covers.iter().map(|c| cover_weight(g, c)).collect();
        let total = weights.iter().fold(T::zero(), |a, w| a + w);
        Ok(Oracle {
            covers,
            weights,
            total,
        })
    }

    pub fn covers(&self) -> &[Cover] {
        &self.covers
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `Z = Σ_ω wt(ω)`. Its sign depends on the cilia; probabilities do not.
    pub fn partition_function(&self) -> &T {
        &self.total
    }

    fn require_nonzero(&self) -> Result<()> {
        if self.total.is_zero() {
            Err(Error::Singular("partition function is zero".into()))
        } else {
            Ok(())
        }
    }

    /// `E[f(ω)]` for a scalar function of the cover.
    pub fn expectation(&self, f: impl Fn(&Cover) -> T) -> Result<T> {
        self.require_nonzero()?;
        let sum = self
            .covers
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (c, w)| acc + &(f(c) * w));
        Ok(sum / &self.total)
    }

    /// `Pr[m_e = k]` for `k = 0..=min(n_w, n_b)`.
    pub fn distribution(&self, g: &EmbeddedGraph<T>, e: EdgeId) -> Result<Vec<T>> {
        self.require_nonzero()?;
        let edge = g.edge(e);
        let n = g.multiplicity(edge.white).min(g.multiplicity(edge.black));
        let mut masses = vec![T::zero(); n + 1];
        for (c, w) in self.covers.iter().zip(&self.weights) {
            masses[c[e.0]] = masses[c[e.0]].clone() + w;
        }
        Ok(masses.into_iter().map(|x| x / &self.total).collect())
    }

    /// `E[m_e^k]`.
    pub fn moment(&self, e: EdgeId, k: u32) -> Result<T> {
        self.expectation(|c| T::from_i64((c[e.0] as i64).pow(k)))
    }

    /// `E[Π m_e]` over the given edges (repeats allowed).
    pub fn product_expectation(&self, edges: &[EdgeId]) -> Result<T> {
        self.expectation(|c| T::from_i64(edges.iter().map(|e| c[e.0] as i64).product()))
    }

    /// Joint law of the multiplicities on `edges`, keyed by their values.
    pub fn joint_distribution(&self, edges: &[EdgeId]) -> Result<Vec<(Vec<usize>, T)>> {
        self.require_nonzero()?;
        let mut acc: Vec<(Vec<usize>, T)> = Vec::new();
        for (c, w) in self.covers.iter().zip(&self.weights) {
            let key: Vec<usize> = edges.iter().map(|e| c[e.0]).collect();
            match acc.iter_mut().find(|(k, _)| *k == key) {
                Some((_, x)) => *x = x.clone() + w,
                None => acc.push((key, w.clone())),
            }
        }
        acc.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(acc.into_iter().map(|(k, x)| (k, x / &self.total)).collect())
    }
}

impl<T: Real> Oracle<T> {
    /// Probabilities of the covers as floats; fails if any is negative.
    fn float_probabilities(&self) -> Result<Vec<f64>> {
        self.require_nonzero()?;
        let probs: Vec<f64> = self
            .weights
            .iter()
            .map(|w| (w.clone() / &self.total).to_f64())
            .collect();
        if probs.iter().any(|&p| p < 0.0) {
            return Err(Error::Unsupported(
                "sampling needs nonnegative cover probabilities".into(),
            ));
        }
        Ok(probs)
    }

    /// Draws `count` covers with probability `wt(ω)/Z`, reproducibly for a
    /// given seed. Returns indices into [`Oracle::covers`].
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<usize>> {
        let probs = self.float_probabilities()?;
        let mut cumulative = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in &probs {
            acc += p;
            cumulative.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..count)
            .map(|_| {
                let u: f64 = rng.gen::<f64>() * acc;
                cumulative
                    .iter()
                    .position(|&c| u < c)
                    .unwrap_or(probs.len() - 1)
            })
            .collect())
    }
}

/// `Σ_ω wt(ω)`.
pub fn oracle_partition<T: Field>(g: &EmbeddedGraph<T>, caps: OracleCaps) -> Result<T> {
    Ok(Oracle::new(g, caps)?.total)
}

/// Draws one cover; see [`Oracle::sample`].
pub fn sample_cover<T: Real>(g: &EmbeddedGraph<T>, seed: u64, caps: OracleCaps) -> Result<Cover> {
    let oracle = Oracle::new(g, caps)?;
    let idx = oracle.sample(1, seed)?[0];
    Ok(oracle.covers[idx].clone())
}

/// `Δ_{I,J}` with index sets given as color bitmasks.
pub fn minor_by_masks<T: Field>(m: &Matrix<T>, rows: u32, cols: u32) -> Result<T> {
    m.minor(&mask_indices(rows), &mask_indices(cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_and_signs() {
        // two singletons from {0,1}: (0)(1) even, (1)(0) odd
        let p = ordered_partitions(2, &[1, 1]);
        assert_eq!(p, vec![(vec![1, 2], 1), (vec![2, 1], -1)]);
        // one block of three: the identity
        assert_eq!(ordered_partitions(3, &[3]), vec![(vec![7], 1)]);
        // sizes 1 + 2 of three colors: 3 choices
        let p = ordered_partitions(3, &[1, 2]);
        assert_eq!(p.len(), 3);
        // {1},{0,2} reads 1,0,2 which is odd
        assert!(p.contains(&(vec![2, 5], -1)));
        assert_eq!(subsets_of(0b1011, 2), vec![0b0011, 0b1001, 0b1010]);
    }
}
