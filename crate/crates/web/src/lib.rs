//! Browser bindings: six-vertex center probabilities against the angle,
//! exact edge multiplicity laws on random grids, and q-Fibonacci curves.

use dimerlab::kasteleyn::KasteleynSystem;
use dimerlab::matrix::Matrix;
use dimerlab::scalar::{format_rational, Rational, Real};
use dimerlab::stats::{edge_distribution, expected_multiplicity, probability_matrix};
use dimerlab::zoo::six_vertex::{six_vertex, Direction, SixVertexSpec};
use dimerlab::zoo::{q_fibonacci_grid, randomize_weights, GridSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Samples `θ` uniformly on `[0, π/2]` and returns rows
/// `[θ, P(east), P(north)]` flattened, for the central black vertex of an
/// odd `size x size` lattice.
pub fn six_vertex_curve(size: usize, samples: usize) -> Result<Vec<f64>, String> {
    if size % 2 == 0 {
        return Err("the lattice size must be odd".into());
    }
    let mut out = Vec::with_capacity(3 * samples);
    for k in 0..samples {
        let theta = std::f64::consts::FRAC_PI_2 * k as f64 / (samples.max(2) - 1) as f64;
        let spec = SixVertexSpec::from_angle(size, size, theta);
        let g = six_vertex(&spec).map_err(|e| e.to_string())?;
        let sys = KasteleynSystem::new(&g).map_err(|e| e.to_string())?;
        out.push(theta);
        for d in [Direction::East, Direction::North] {
            let e = g
                .edge_by_name(&spec.center_edge(d).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            out.push(expected_multiplicity(&probability_matrix(&sys, e).map_err(|e| e.to_string())?));
        }
    }
    Ok(out)
}

/// Exact multiplicity law of `edge` on the `2 x (N+1)` grid of
/// multiplicity `n` with random rational weights drawn from `seed`.
/// JSON: `{"edge", "exact": ["p/q", ...], "decimal": [...], "edges": [...]}`.
pub fn grid_edge_pmf(big_n: usize, n: usize, seed: u64, edge: &str) -> Result<String, String> {
    if !(1..=8).contains(&big_n) || !(1..=4).contains(&n) {
        return Err("keep 1 <= N <= 8 and 1 <= n <= 4".into());
    }
    let base = GridSpec::<Rational>::uniform(big_n, n).build().map_err(|e| e.to_string())?;
    let g = randomize_weights(&base, &mut ChaCha8Rng::seed_from_u64(seed));
    let sys = KasteleynSystem::new(&g).map_err(|e| e.to_string())?;
    let e = g.edge_by_name(edge).map_err(|e| e.to_string())?;
    let dist = edge_distribution(&sys, e).map_err(|e| e.to_string())?;
    let names: Vec<&str> = g.edges().iter().map(|e| e.name.as_str()).collect();
    Ok(json!({
        "edge": edge,
        "exact": dist.masses.iter().map(format_rational).collect::<Vec<_>>(),
        "decimal": dist.masses.iter().map(|m| m.to_f64()).collect::<Vec<_>>(),
        "edges": names,
    })
    .to_string())
}

/// `tr(q F~_N(q) F_{N+1}(q)^{-1})` for scalar `q` sampled on
/// `[q_min, q_max]`, flattened as `[q, value]` pairs. Points where a
/// continuant vanishes are skipped.
pub fn q_fibonacci_curve(big_n: usize, q_min: f64, q_max: f64, samples: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * samples);
    for k in 0..samples {
        let q = q_min + (q_max - q_min) * k as f64 / (samples.max(2) - 1) as f64;
        if let Ok((_, v)) = q_fibonacci_grid(big_n, &Matrix::from_fn(1, 1, |_, _| q)) {
            if v.is_finite() {
                out.extend([q, v]);
            }
        }
    }
    out
}

#[wasm_bindgen(js_name = sixVertexCurve)]
pub fn six_vertex_curve_js(size: usize, samples: usize) -> Result<Vec<f64>, JsValue> {
    six_vertex_curve(size, samples).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = gridEdgePmf)]
pub fn grid_edge_pmf_js(big_n: usize, n: usize, seed: u32, edge: &str) -> Result<String, JsValue> {
    grid_edge_pmf(big_n, n, seed.into(), edge).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = qFibonacciCurve)]
pub fn q_fibonacci_curve_js(big_n: usize, q_min: f64, q_max: f64, samples: usize) -> Vec<f64> {
    q_fibonacci_curve(big_n, q_min, q_max, samples)
}
