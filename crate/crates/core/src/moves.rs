//! Gauge transformations and the four local moves.
//!
//! Each move returns a [`MoveCertificate`] holding the graph before and
//! after together with a scalar `factor` such that
//! `Z(after) = |factor| · Z(before)`. Moves first gauge the designated
//! edges to the identity; the gauge determinants go into `factor`, so a
//! move applied to identity-weighted edges has `factor = 1` (square moves
//! excepted).
//!
//! Every move rewrites the rotation system, so cilia sitting in corners
//! that disappear have to be re-homed. For odd multiplicities the cilium
//! position never matters. For even multiplicities the new corners are
//! chosen so that the signs obtained by the determinant reduction satisfy
//! the face rule of the new graph; the move fails when no placement does.
//! Signs of the result are re-solved from scratch.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Color, Dart, EdgeId, EmbeddedGraph, FaceId, GraphParts, VertexId};
use crate::kasteleyn::{solve_signs, violated_faces, KasteleynSystem};
use crate::matrix::Matrix;
use crate::scalar::{Field, Real, Scalar};
use crate::stats::probability_matrix;

/// Upper bound on cilium placements tried by one move.
const PLACEMENT_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    LeafTrim,
    ParallelReduce,
    Contract,
    Square,
}

impl MoveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MoveKind::LeafTrim => "leaf_trim",
            MoveKind::ParallelReduce => "parallel_reduce",
            MoveKind::Contract => "contract",
            MoveKind::Square => "square",
        }
    }
}

/// Side on which a gauge matrix multiplies the incident weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `wt ↦ M · wt`, used at white vertices.
    Left,
    /// `wt ↦ wt · M`, used at black vertices.
    Right,
}

impl Side {
    pub fn for_color(c: Color) -> Side {
        match c {
            Color::White => Side::Left,
            Color::Black => Side::Right,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeAction<T> {
    pub vertex: VertexId,
    pub matrix: Matrix<T>,
}

impl<T: Scalar> GaugeAction<T> {
    pub fn new(vertex: VertexId, matrix: Matrix<T>) -> Self {
        GaugeAction { vertex, matrix }
    }

    pub fn side(&self, g: &EmbeddedGraph<T>) -> Side {
        Side::for_color(g.vertex(self.vertex).color)
    }
}

/// Multiplies every weight at `action.vertex` by `action.matrix`, on the
/// left at white vertices and on the right at black ones.
pub fn gauge<T: Field>(g: &EmbeddedGraph<T>, action: &GaugeAction<T>) -> Result<EmbeddedGraph<T>> {
    check_vertex(g, action.vertex)?;
    let v = g.vertex(action.vertex);
    let m = &action.matrix;
    let n = v.multiplicity;
    if m.shape() != (n, n) {
        return Err(Error::ShapeMismatch {
            op: "gauge",
            left: (n, n),
            right: m.shape(),
        });
    }
    if m.is_singular()? {
        return Err(Error::Singular(format!("gauge matrix at `{}`", v.name)));
    }
    let mut parts = g.to_parts();
    for &e in &v.rotation {
        let w = &mut parts.edges[e.0].weight;
        *w = match v.color {
            Color::White => m * &*w,
            Color::Black => &*w * m,
        };
    }
    EmbeddedGraph::new(parts)
}

/// Gauges the endpoint `v` of `e` so that `e` gets weight `I`. Returns the
/// new graph and the gauge matrix `wt(e)⁻¹`.
pub fn gauge_to_identity<T: Field>(
    g: &EmbeddedGraph<T>,
    e: EdgeId,
    v: VertexId,
) -> Result<(EmbeddedGraph<T>, Matrix<T>)> {
    check_edge(g, e)?;
    let edge = g.edge(e);
    if edge.white != v && edge.black != v {
        return Err(Error::MovePrecondition(format!(
            "`{}` is not an endpoint of `{}`",
            g.vertex(v).name,
            edge.name
        )));
    }
    let m = invert(&edge.weight, || format!("weight of `{}`", edge.name))?;
    let h = gauge(g, &GaugeAction::new(v, m.clone()))?;
    Ok((h, m))
}

#[derive(Debug, Clone)]
pub struct MoveCertificate<T: Scalar> {
    pub kind: MoveKind,
    pub before: EmbeddedGraph<T>,
    pub after: EmbeddedGraph<T>,
    /// `Z(after) = |factor| · Z(before)`.
    pub factor: T,
    /// Gauges applied to `before` ahead of the move, keyed by vertex name.
    pub gauges: Vec<(String, Matrix<T>)>,
    /// Vertices of `before` drawn in the move picture.
    pub picture: Vec<String>,
}

/// Removes a degree-one vertex together with its neighbour. `e` is the
/// pendant edge; a black leaf is preferred when both ends have degree one.
/// `factor = det(wt(e))⁻¹`.
pub fn leaf_trim<T: Field>(g: &EmbeddedGraph<T>, e: EdgeId) -> Result<MoveCertificate<T>> {
    check_edge(g, e)?;
    let edge = g.edge(e);
    let deg = |v: VertexId| g.vertex(v).degree();
    let (leaf, hub) = if deg(edge.black) == 1 {
        (edge.black, edge.white)
    } else if deg(edge.white) == 1 {
        (edge.white, edge.black)
    } else {
        return Err(Error::MovePrecondition(format!(
            "edge `{}` has no endpoint of degree 1",
            edge.name
        )));
    };
    if g.multiplicity(leaf) != g.multiplicity(hub) {
        return Err(Error::MovePrecondition(format!(
            "`{}` and `{}` have different multiplicities",
            g.vertex(leaf).name,
            g.vertex(hub).name
        )));
    }
    let m = invert(&edge.weight, || {
        format!("weight of pendant edge `{}`", edge.name)
    })?;
    let factor = m.det()?;

    let mut ed = Editor::new(g, current_signs(g)?);
    let hub_edges = g.vertex(hub).rotation.clone();
    let touched: BTreeSet<VertexId> = hub_edges
        .iter()
        .map(|&f| g.opposite(f, hub))
        .filter(|&x| x != leaf)
        .collect();
    for f in hub_edges {
        ed.remove_edge(f);
    }
    ed.kill_vertex(leaf);
    ed.kill_vertex(hub);
    let after = ed.settle(touched.into_iter().collect(), None)?;
    Ok(MoveCertificate {
        kind: MoveKind::LeafTrim,
        before: g.clone(),
        after,
        factor,
        gauges: vec![(g.vertex(leaf).name.clone(), m)],
        picture: vec![g.vertex(leaf).name.clone(), g.vertex(hub).name.clone()],
    })
}

/// Replaces the parallel edges between `w` and `b` by one edge carrying
/// `Σ ε_i ε_1 wt_i`, which leaves `K` unchanged. The parallels must be
/// consecutive around `w` with digons between them. The merged edge keeps
/// the first edge's slot and joins the names with `+`.
pub fn parallel_reduce<T: Field>(
    g: &EmbeddedGraph<T>,
    w: VertexId,
    b: VertexId,
) -> Result<MoveCertificate<T>> {
    check_vertex(g, w)?;
    check_vertex(g, b)?;
    let (w, b) = match (g.vertex(w).color, g.vertex(b).color) {
        (Color::White, Color::Black) => (w, b),
        (Color::Black, Color::White) => (b, w),
        _ => {
            return Err(Error::MovePrecondition(
                "parallel reduction needs one white and one black vertex".into(),
            ))
        }
    };
    let par = g.edges_between(w, b);
    if par.len() < 2 {
        return Err(Error::MovePrecondition(format!(
            "{} edge(s) between `{}` and `{}`; need at least 2",
            par.len(),
            g.vertex(w).name,
            g.vertex(b).name
        )));
    }
    let rot = &g.vertex(w).rotation;
    let (d, k) = (rot.len(), par.len());
    let is_par = |e: &EdgeId| par.contains(e);
    let start = if k == d {
        0
    } else {
        (0..d)
            .find(|&s| is_par(&rot[s]) && !is_par(&rot[(s + d - 1) % d]))
            .expect("some parallel edge has a non-parallel predecessor")
    };
    let ordered: Vec<EdgeId> = (0..k).map(|i| rot[(start + i) % d]).collect();
    if !ordered.iter().all(is_par) {
        return Err(Error::MovePrecondition(format!(
            "parallel edges between `{}` and `{}` are not consecutive",
            g.vertex(w).name,
            g.vertex(b).name
        )));
    }
    for pair in ordered.windows(2) {
        let f = g.face_of_dart(Dart {
            edge: pair[1],
            origin: Color::White,
        });
        if g.face(f).half_length() != 1 {
            return Err(Error::MovePrecondition(format!(
                "edges `{}` and `{}` do not bound a digon",
                g.edge(pair[0]).name,
                g.edge(pair[1]).name
            )));
        }
    }

    let signs = current_signs(g)?;
    let keep = ordered[0];
    let mut merged = g.edge(keep).weight.clone();
    for &e in &ordered[1..] {
        let s = T::from_i64((signs[e.0] * signs[keep.0]) as i64);
        merged = merged.checked_add(&g.edge(e).weight.scale(&s))?;
    }
    let name = ordered
        .iter()
        .map(|&e| g.edge(e).name.as_str())
        .collect::<Vec<_>>()
        .join("+");

    let mut ed = Editor::new(g, signs);
    for &e in ordered[1..].iter().rev() {
        ed.remove_edge(e);
    }
    ed.parts.edges[keep.0].weight = merged;
    ed.parts.edges[keep.0].name = name;
    let after = ed.settle(vec![w, b], None)?;
    Ok(MoveCertificate {
        kind: MoveKind::ParallelReduce,
        before: g.clone(),
        after,
        factor: T::one(),
        gauges: Vec::new(),
        picture: vec![g.vertex(w).name.clone(), g.vertex(b).name.clone()],
    })
}

/// Contracts a degree-two vertex into its two neighbours `u1, u2`, which
/// merge into one vertex named `u1+u2`. The neighbours are first gauged by
/// the inverses of the two edge weights. Shared neighbours of `u1` and
/// `u2` become parallel edges; `u1 = u2` is rejected.
/// `factor = det(wt(e1))⁻¹ det(wt(e2))⁻¹`.
pub fn contract<T: Field>(g: &EmbeddedGraph<T>, center: VertexId) -> Result<MoveCertificate<T>> {
    check_vertex(g, center)?;
    let v = g.vertex(center);
    if v.degree() != 2 {
        return Err(Error::MovePrecondition(format!(
            "`{}` has degree {}; contraction needs degree 2",
            v.name,
            v.degree()
        )));
    }
    let (e1, e2) = (v.rotation[0], v.rotation[1]);
    let (u1, u2) = (g.opposite(e1, center), g.opposite(e2, center));
    if u1 == u2 {
        return Err(Error::MovePrecondition(format!(
            "both edges at `{}` end at `{}`",
            v.name,
            g.vertex(u1).name
        )));
    }
    let n = v.multiplicity;
    if g.multiplicity(u1) != n || g.multiplicity(u2) != n {
        return Err(Error::MovePrecondition(format!(
            "`{}` and its neighbours must share one multiplicity",
            v.name
        )));
    }
    let (h, m1) = gauge_to_identity(g, e1, u1)?;
    let (h, m2) = gauge_to_identity(&h, e2, u2)?;
    let factor = m1.det()? * m2.det()?;

    let signs = current_signs(&h)?;
    let flip = -signs[e1.0] * signs[e2.0];
    let mut ed = Editor::new(&h, signs);

    let around = |u: VertexId, e: EdgeId| {
        let vx = h.vertex(u);
        let (s, d) = (h.slot(u, e), vx.degree());
        let edges: Vec<EdgeId> = (1..d).map(|i| vx.rotation[(s + i) % d]).collect();
        (edges, s, d, vx.cilium)
    };
    let (fs, s1, d1, c1) = around(u1, e1);
    let (gs, _, _, _) = around(u2, e2);
    let a = fs.len();
    // corner (s1 + 1) of u1 lies in the face shared with the far side of
    // `center`, corner s1 in the other one
    let cilium = if c1 == (s1 + 1) % d1 {
        0
    } else if c1 == s1 {
        a
    } else {
        (c1 + d1 - s1 - 1) % d1
    };
    let color = h.vertex(u1).color;
    let name = format!("{}+{}", h.vertex(u1).name, h.vertex(u2).name);
    let merged = ed.add_vertex(name, color, n);
    for &f in &fs {
        ed.repoint(f, color, merged);
        ed.signs[f.0] *= flip;
    }
    for &f in &gs {
        ed.repoint(f, color, merged);
    }
    let rotation: Vec<EdgeId> = fs.iter().chain(&gs).copied().collect();
    let degree = rotation.len();
    ed.parts.set_rotation(
        merged,
        rotation,
        if degree == 0 { 0 } else { cilium % degree },
    );
    for x in [center, u1, u2] {
        ed.parts.vertices[x.0].rotation.clear();
        ed.kill_vertex(x);
    }
    ed.kill_edge(e1);
    ed.kill_edge(e2);
    let after = ed.settle(vec![merged], None)?;
    Ok(MoveCertificate {
        kind: MoveKind::Contract,
        before: g.clone(),
        after,
        factor,
        gauges: vec![
            (g.vertex(u1).name.clone(), m1),
            (g.vertex(u2).name.clone(), m2),
        ],
        picture: vec![
            v.name.clone(),
            g.vertex(u1).name.clone(),
            g.vertex(u2).name.clone(),
        ],
    })
}

/// New weights of a square move, in the orientation where `K` restricted to
/// the face is `[[a, -d], [b, c]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareWeights<T> {
    pub a: Matrix<T>,
    pub b: Matrix<T>,
    pub c: Matrix<T>,
    pub d: Matrix<T>,
}

/// `A = (a + d c⁻¹ b)⁻¹`, `B = (b + c d⁻¹ a)⁻¹`, `C = (c + b a⁻¹ d)⁻¹`,
/// `D = (d + a b⁻¹ c)⁻¹`. The error names the first singular inverse.
pub fn square_weights<T: Field>(old: &SquareWeights<T>) -> Result<SquareWeights<T>> {
    let SquareWeights { a, b, c, d } = old;
    let ai = invert(a, || "a".into())?;
    let bi = invert(b, || "b".into())?;
    let ci = invert(c, || "c".into())?;
    let di = invert(d, || "d".into())?;
    let sum = |x: &Matrix<T>, y: &Matrix<T>, zi: &Matrix<T>, u: &Matrix<T>, label: &str| {
        let s = x.checked_add(&y.checked_mul(zi)?.checked_mul(u)?)?;
        invert(&s, || label.to_string())
    };
    Ok(SquareWeights {
        a: sum(a, d, &ci, b, "a + d c⁻¹ b")?,
        b: sum(b, c, &di, a, "b + c d⁻¹ a")?,
        c: sum(c, b, &ai, d, "c + b a⁻¹ d")?,
        d: sum(d, a, &bi, c, "d + a b⁻¹ c")?,
    })
}

/// `[[A, B], [-D, C]]`.
pub fn square_block<T: Scalar>(w: &SquareWeights<T>) -> Matrix<T> {
    let n = w.a.rows();
    let mut m = Matrix::zeros(2 * n, 2 * n);
    m.set_block(0, 0, &w.a);
    m.set_block(0, n, &w.b);
    m.set_block(n, 0, &-&w.d);
    m.set_block(n, n, &w.c);
    m
}

/// Square move on a bounded face with four distinct vertices of one
/// multiplicity. Label the face `w1, b1, w2, b2` counterclockwise with
/// `a = w1b1`, `b = w2b1`, `c = w2b2`, `d = w1b2`; after a vertex sign
/// change the face block of `K` reads `[[a, -d], [b, c]]`. Each old vertex
/// gets a pendant identity edge to a new inner vertex of the other colour,
/// and the inner square carries [`square_weights`].
/// `factor = det [[A, B], [-D, C]]`.
pub fn square_move<T: Field>(g: &EmbeddedGraph<T>, face: FaceId) -> Result<MoveCertificate<T>> {
    if face.0 >= g.num_faces() {
        return Err(Error::IndexOutOfRange {
            op: "square_move",
            index: face.0,
            size: g.num_faces(),
        });
    }
    if g.outer_face() == Some(face) {
        return Err(Error::MovePrecondition(
            "the outer face cannot be moved".into(),
        ));
    }
    let f = g.face(face);
    if f.half_length() != 2 {
        return Err(Error::MovePrecondition(format!(
            "face {} has {} sides; a square move needs 4",
            face.0,
            2 * f.half_length()
        )));
    }
    let i = f
        .boundary
        .iter()
        .position(|d| d.origin == Color::White)
        .expect("faces alternate colours");
    let dart = |k: usize| f.boundary[(i + k) % 4];
    let (ed_d, ed_c, ed_b, ed_a) = (dart(0).edge, dart(1).edge, dart(2).edge, dart(3).edge);
    let origin = |k: usize| g.edge(dart(k).edge).endpoint(dart(k).origin);
    let (w1, b2, w2, b1) = (origin(0), origin(1), origin(2), origin(3));
    let quad = [w1, b1, w2, b2];
    if quad.iter().collect::<BTreeSet<_>>().len() != 4 {
        return Err(Error::MovePrecondition(format!(
            "face {} does not have four distinct vertices",
            face.0
        )));
    }
    let n = g.multiplicity(w1);
    if quad.iter().any(|&v| g.multiplicity(v) != n) {
        return Err(Error::MovePrecondition(format!(
            "face {} mixes multiplicities",
            face.0
        )));
    }

    // vertex sign changes making ε(a) = ε(b) = ε(c) = +1
    let mut signs = current_signs(g)?;
    let s_w1 = signs[ed_a.0];
    let s_w2 = signs[ed_b.0];
    let s_b2 = signs[ed_c.0] * s_w2;
    for (v, s) in [(w1, s_w1), (w2, s_w2), (b2, s_b2)] {
        if s < 0 {
            for &e in &g.vertex(v).rotation {
                signs[e.0] = -signs[e.0];
            }
        }
    }
    let weight = |e: EdgeId| g.edge(e).weight.clone();
    let old = SquareWeights {
        a: weight(ed_a),
        b: weight(ed_b),
        c: weight(ed_c),
        d: weight(ed_d).scale(&T::from_i64(-signs[ed_d.0] as i64)),
    };
    let new = square_weights(&old)?;
    let factor = square_block(&new).det()?;

    let mut ed = Editor::new(g, signs);
    let name = |v: VertexId| g.vertex(v).name.clone();
    let b3 = ed.add_vertex(ed.fresh_vertex(&format!("{}'", name(w1))), Color::Black, n);
    let b4 = ed.add_vertex(ed.fresh_vertex(&format!("{}'", name(w2))), Color::Black, n);
    let w3 = ed.add_vertex(ed.fresh_vertex(&format!("{}'", name(b1))), Color::White, n);
    let w4 = ed.add_vertex(ed.fresh_vertex(&format!("{}'", name(b2))), Color::White, n);
    let id = Matrix::identity(n);
    let vname = |ed: &Editor<T>, v: VertexId| ed.parts.vertices[v.0].name.clone();
    let pendant = [w1, w2, b1, b2]
        .iter()
        .zip([b3, b4, w3, w4])
        .map(|(&old, new)| format!("{}~{}", vname(&ed, old), vname(&ed, new)))
        .collect::<Vec<_>>();
    let mut link = |w: VertexId, b: VertexId, wt: Matrix<T>, sign: i8, base: String| {
        let nm = ed.fresh_edge(&base);
        ed.add_edge(nm, w, b, wt, sign)
    };
    let p1 = link(w1, b3, id.clone(), 1, pendant[0].clone());
    let p2 = link(w2, b4, id.clone(), 1, pendant[1].clone());
    let p3 = link(w3, b1, id.clone(), -1, pendant[2].clone());
    let p4 = link(w4, b2, id, -1, pendant[3].clone());
    let ename = |e: EdgeId| format!("{}'", g.edge(e).name);
    let na = link(w3, b3, new.a, 1, ename(ed_a));
    let nb = link(w3, b4, new.b, 1, ename(ed_b));
    let nc = link(w4, b4, new.c, 1, ename(ed_c));
    let nd = link(w4, b3, new.d, -1, ename(ed_d));
    // counterclockwise orders read off the picture
    ed.parts.set_rotation(b3, vec![na, nd, p1], 0);
    ed.parts.set_rotation(w3, vec![p3, nb, na], 0);
    ed.parts.set_rotation(b4, vec![p2, nc, nb], 0);
    ed.parts.set_rotation(w4, vec![nc, p4, nd], 0);
    for (v, first, second, pendant) in [
        (w1, ed_a, ed_d, p1),
        (b2, ed_d, ed_c, p4),
        (w2, ed_c, ed_b, p2),
        (b1, ed_b, ed_a, p3),
    ] {
        ed.splice(v, first, second, pendant);
    }
    for e in [ed_a, ed_b, ed_c, ed_d] {
        ed.kill_edge(e);
    }
    let fallback = Dart {
        edge: p1,
        origin: Color::White,
    };
    let after = ed.settle(vec![b3, w3, b4, w4, w1, b1, w2, b2], Some(fallback))?;
    Ok(MoveCertificate {
        kind: MoveKind::Square,
        before: g.clone(),
        after,
        factor,
        gauges: Vec::new(),
        picture: quad.iter().map(|&v| name(v)).collect(),
    })
}

/// Outcome of comparing `P_e` across a move.
#[derive(Debug, Clone)]
pub struct InvarianceReport<T> {
    pub edge: String,
    pub before: Matrix<T>,
    pub after: Matrix<T>,
    /// `M⁻¹ P_e M` when the black endpoint of `e` was gauged by `M`,
    /// otherwise `P_e`.
    pub predicted: Matrix<T>,
    /// `P_e` identical before and after.
    pub exact: bool,
    /// `P_e` after equals the prediction.
    pub passed: bool,
}

/// Compares `P_e` in `cert.before` and `cert.after` for the edge named
/// `edge`, which must survive the move and have an endpoint outside the
/// picture.
pub fn verify_move_invariance<T: Real>(
    cert: &MoveCertificate<T>,
    edge: &str,
) -> Result<InvarianceReport<T>> {
    let g = &cert.before;
    let e = g.edge_by_name(edge)?;
    let ends = [g.edge(e).white, g.edge(e).black];
    if ends
        .iter()
        .all(|&v| cert.picture.contains(&g.vertex(v).name))
    {
        return Err(Error::MovePrecondition(format!(
            "edge `{edge}` lies inside the move picture"
        )));
    }
    let e2 = cert.after.edge_by_name(edge)?;
    let before = probability_matrix(&KasteleynSystem::new(g)?, e)?;
    let after = probability_matrix(&KasteleynSystem::new(&cert.after)?, e2)?;
    let black = &g.vertex(g.edge(e).black).name;
    let predicted = match cert.gauges.iter().find(|(v, _)| v == black) {
        Some((_, m)) => m.inverse()?.checked_mul(&before)?.checked_mul(m)?,
        None => before.clone(),
    };
    Ok(InvarianceReport {
        edge: edge.to_string(),
        exact: matrices_close(&before, &after),
        passed: matrices_close(&predicted, &after),
        before,
        after,
        predicted,
    })
}

/// Reports for every edge of `cert.before` that survives under its name
/// and has an endpoint outside the picture.
pub fn verify_all_untouched<T: Real>(
    cert: &MoveCertificate<T>,
) -> Result<Vec<InvarianceReport<T>>> {
    let g = &cert.before;
    let inside = |v: VertexId| cert.picture.contains(&g.vertex(v).name);
    g.edges()
        .iter()
        .filter(|e| !(inside(e.white) && inside(e.black)))
        .filter(|e| cert.after.edge_by_name(&e.name).is_ok())
        .map(|e| verify_move_invariance(cert, &e.name))
        .collect()
}

/// Entrywise equality, exact for rationals and to `1e-9` relative for floats.
pub fn matrices_close<T: Real>(x: &Matrix<T>, y: &Matrix<T>) -> bool {
    x.shape() == y.shape()
        && x.entries()
            .zip(y.entries())
            .all(|(a, b)| a.approx_eq(b, 1e-9))
}

fn check_vertex<T: Scalar>(g: &EmbeddedGraph<T>, v: VertexId) -> Result<()> {
    if v.0 >= g.num_vertices() {
        return Err(Error::IndexOutOfRange {
            op: "vertex",
            index: v.0,
            size: g.num_vertices(),
        });
    }
    Ok(())
}

fn check_edge<T: Scalar>(g: &EmbeddedGraph<T>, e: EdgeId) -> Result<()> {
    if e.0 >= g.num_edges() {
        return Err(Error::IndexOutOfRange {
            op: "edge",
            index: e.0,
            size: g.num_edges(),
        });
    }
    Ok(())
}

fn invert<T: Field>(m: &Matrix<T>, what: impl FnOnce() -> String) -> Result<Matrix<T>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            op: "invert",
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    m.inverse().map_err(|_| Error::Singular(what()))
}

fn current_signs<T: Scalar>(g: &EmbeddedGraph<T>) -> Result<Vec<i8>> {
    match g.user_signs() {
        Some(s) => Ok(s.to_vec()),
        None => solve_signs(g),
    }
}

/// Mutable copy of a graph's parts with deletion marks and one sign per
/// edge, compacted by [`Editor::settle`].
struct Editor<T: Scalar> {
    parts: GraphParts<T>,
    signs: Vec<i8>,
    dead_vertex: Vec<bool>,
    dead_edge: Vec<bool>,
    outer: Vec<Dart>,
}

impl<T: Scalar> Editor<T> {
    fn new(g: &EmbeddedGraph<T>, signs: Vec<i8>) -> Self {
        let mut parts = g.to_parts();
        parts.signs = None;
        Editor {
            dead_vertex: vec![false; parts.vertices.len()],
            dead_edge: vec![false; parts.edges.len()],
            outer: g
                .outer_face()
                .map(|f| g.face(f).boundary.clone())
                .unwrap_or_default(),
            parts,
            signs,
        }
    }

    fn fresh_vertex(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.parts.vertices.iter().any(|v| v.name == name) {
            name.push('\'');
        }
        name
    }

    fn fresh_edge(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.parts.edges.iter().any(|e| e.name == name) {
            name.push('\'');
        }
        name
    }

    fn add_vertex(&mut self, name: String, color: Color, n: usize) -> VertexId {
        self.dead_vertex.push(false);
        self.parts.add_vertex(name, color, n)
    }

    fn add_edge(
        &mut self,
        name: String,
        w: VertexId,
        b: VertexId,
        weight: Matrix<T>,
        sign: i8,
    ) -> EdgeId {
        self.dead_edge.push(false);
        self.signs.push(sign);
        self.parts.add_edge(name, w, b, weight)
    }

    /// Drops `e` from both rotations. Removing slot `r` merges corners `r`
    /// and `r + 1`.
    fn remove_edge(&mut self, e: EdgeId) {
        let edge = &self.parts.edges[e.0];
        for v in [edge.white, edge.black] {
            let vx = &mut self.parts.vertices[v.0];
            let Some(r) = vx.rotation.iter().position(|&x| x == e) else {
                continue;
            };
            vx.rotation.remove(r);
            if vx.cilium > r {
                vx.cilium -= 1;
            }
            if vx.cilium >= vx.rotation.len() {
                vx.cilium = 0;
            }
        }
        self.dead_edge[e.0] = true;
    }

    fn kill_edge(&mut self, e: EdgeId) {
        self.dead_edge[e.0] = true;
    }

    fn kill_vertex(&mut self, v: VertexId) {
        self.dead_vertex[v.0] = true;
    }

    fn repoint(&mut self, e: EdgeId, color: Color, v: VertexId) {
        let edge = &mut self.parts.edges[e.0];
        match color {
            Color::White => edge.white = v,
            Color::Black => edge.black = v,
        }
    }

    /// At `v`, where `second` follows `first` counterclockwise, puts
    /// `replacement` in the slot of `first` and drops `second`. A cilium in
    /// the corner between them moves just past `replacement`.
    fn splice(&mut self, v: VertexId, first: EdgeId, second: EdgeId, replacement: EdgeId) {
        let vx = &mut self.parts.vertices[v.0];
        let r = vx
            .rotation
            .iter()
            .position(|&x| x == second)
            .expect("second edge at v");
        vx.rotation.remove(r);
        if vx.cilium > r {
            vx.cilium -= 1;
        }
        if vx.cilium >= vx.rotation.len() {
            vx.cilium = 0;
        }
        let s = vx
            .rotation
            .iter()
            .position(|&x| x == first)
            .expect("first edge at v");
        vx.rotation[s] = replacement;
    }

    /// Compacts the parts and picks cilia for the `free` vertices so that
    /// the carried signs satisfy every bounded face. Each free vertex tries
    /// its current corner first.
    fn settle(self, free: Vec<VertexId>, fallback_outer: Option<Dart>) -> Result<EmbeddedGraph<T>> {
        let mut vmap = vec![None; self.dead_vertex.len()];
        let mut emap = vec![None; self.dead_edge.len()];
        let mut parts = GraphParts::new();
        for (i, v) in self.parts.vertices.iter().enumerate() {
            if !self.dead_vertex[i] {
                vmap[i] = Some(VertexId(parts.vertices.len()));
                parts.vertices.push(v.clone());
            }
        }
        let mut signs = Vec::new();
        for (i, e) in self.parts.edges.iter().enumerate() {
            if self.dead_edge[i] {
                continue;
            }
            emap[i] = Some(EdgeId(parts.edges.len()));
            let mut e = e.clone();
            e.white = vmap[e.white.0].expect("live endpoint");
            e.black = vmap[e.black.0].expect("live endpoint");
            parts.edges.push(e);
            signs.push(self.signs[i]);
        }
        for v in &mut parts.vertices {
            v.rotation = v
                .rotation
                .iter()
                .map(|e| emap[e.0].expect("live edge in rotation"))
                .collect();
        }
        let remap = |d: &Dart| {
            emap[d.edge.0].map(|edge| Dart {
                edge,
                origin: d.origin,
            })
        };
        parts.outer_witness = self
            .outer
            .iter()
            .find_map(remap)
            .or_else(|| fallback_outer.as_ref().and_then(remap));
        if parts.edges.is_empty() {
            parts.outer_witness = None;
            return EmbeddedGraph::new(parts);
        }

        let free: Vec<VertexId> = free
            .into_iter()
            .filter_map(|v| vmap[v.0])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let choices: Vec<Vec<usize>> = free
            .iter()
            .map(|&v| {
                let vx = &parts.vertices[v.0];
                let mut c = vec![vx.cilium];
                c.extend((0..vx.degree()).filter(|&k| k != vx.cilium));
                c
            })
            .collect();
        let mut index = vec![0usize; free.len()];
        for _ in 0..PLACEMENT_LIMIT {
            for (k, &v) in free.iter().enumerate() {
                parts.vertices[v.0].cilium = choices[k][index[k]];
            }
            let g = EmbeddedGraph::new(parts.clone())?;
            if violated_faces(&g, &signs).is_empty() {
                return Ok(g);
            }
            // next placement in mixed radix
            let mut k = 0;
            loop {
                if k == free.len() {
                    return Err(no_placement());
                }
                index[k] += 1;
                if index[k] < choices[k].len() {
                    break;
                }
                index[k] = 0;
                k += 1;
            }
        }
        Err(no_placement())
    }
}

fn no_placement() -> Error {
    Error::MovePrecondition(
        "no placement of the displaced cilia satisfies the Kasteleyn sign rule".into(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_partition, OracleCaps};
    use crate::scalar::{rat, Rational};
    use crate::zoo;

    use num_traits::Signed;
    type Q = Rational;

    fn z(g: &EmbeddedGraph<Q>) -> Q {
        KasteleynSystem::new(g).unwrap().partition_function()
    }

    fn m(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn identity_gauge_changes_nothing() {
        let g = zoo::four_cycle_identity::<Q>(2).unwrap();
        let v = g.vertex_by_name("b1").unwrap();
        let h = gauge(&g, &GaugeAction::new(v, Matrix::identity(2))).unwrap();
        assert_eq!(g.edges(), h.edges());
    }

    #[test]
    fn gauge_scales_determinant() {
        let g = zoo::four_cycle_identity::<Q>(2).unwrap();
        let v = g.vertex_by_name("b1").unwrap();
        let mm = m(&[&[2, 1], &[1, 3]]);
        let h = gauge(&g, &GaugeAction::new(v, mm.clone())).unwrap();
        let k = |g: &EmbeddedGraph<Q>| KasteleynSystem::new(g).unwrap().determinant();
        assert_eq!(k(&h), k(&g) * mm.det().unwrap());
        let singular = GaugeAction::new(v, m(&[&[1, 1], &[1, 1]]));
        assert!(matches!(gauge(&g, &singular), Err(Error::Singular(_))));
    }

    #[test]
    fn single_edge_trims_to_empty() {
        let g = zoo::single_edge::<Q>(Matrix::identity(2)).unwrap();
        let cert = leaf_trim(&g, EdgeId(0)).unwrap();
        assert_eq!(cert.after.num_vertices(), 0);
        assert_eq!(z(&cert.after), rat(1, 1));
        assert_eq!(cert.factor, rat(1, 1));
    }

    #[test]
    fn two_parallels_sum() {
        let mut p = GraphParts::<Q>::new();
        let w = p.add_vertex("w", Color::White, 1);
        let b = p.add_vertex("b", Color::Black, 1);
        let e = p.add_edge("e", w, b, Matrix::identity(1));
        let f = p.add_edge("f", w, b, Matrix::identity(1));
        p.set_rotation(w, vec![e, f], 0);
        p.set_rotation(b, vec![f, e], 0);
        p.outer_witness = Some(Dart {
            edge: e,
            origin: Color::White,
        });
        let g = EmbeddedGraph::new(p).unwrap();
        let cert = parallel_reduce(&g, w, b).unwrap();
        assert_eq!(cert.after.num_edges(), 1);
        assert_eq!(
            cert.after.edge(EdgeId(0)).weight,
            Matrix::from_fn(1, 1, |_, _| rat(2, 1))
        );
    }

    #[test]
    fn unit_square_move() {
        let g = zoo::four_cycle_identity::<Q>(1).unwrap();
        let f = g.bounded_faces().next().unwrap().id;
        let cert = square_move(&g, f).unwrap();
        let half = Matrix::from_fn(1, 1, |_, _| rat(1, 2));
        for name in ["A'", "B'", "C'", "D'"] {
            let e = cert.after.edge_by_name(name).unwrap();
            assert_eq!(cert.after.edge(e).weight, half);
        }
        assert_eq!(cert.factor, rat(1, 2));
        assert_eq!(z(&cert.after), cert.factor.clone() * z(&g));
        assert_eq!(cert.after.num_vertices(), 8);
    }

    #[test]
    fn square_block_inverts_face_block() {
        let w = SquareWeights {
            a: m(&[&[2, 1], &[0, 1]]),
            b: m(&[&[1, 0], &[3, 1]]),
            c: m(&[&[1, 2], &[1, 3]]),
            d: m(&[&[4, 1], &[1, 1]]),
        };
        let new = square_weights(&w).unwrap();
        let mut face = Matrix::zeros(4, 4);
        face.set_block(0, 0, &w.a);
        face.set_block(0, 2, &-&w.d);
        face.set_block(2, 0, &w.b);
        face.set_block(2, 2, &w.c);
        assert_eq!(square_block(&new).inverse().unwrap(), face);
    }

    #[test]
    fn singular_sum_is_named() {
        let one = Matrix::<Q>::identity(1);
        let w = SquareWeights {
            a: one.clone(),
            b: one.clone(),
            c: one.clone(),
            d: -&one,
        };
        let err = square_weights(&w).unwrap_err();
        assert_eq!(err, Error::Singular("a + d c⁻¹ b".into()));
    }

    #[test]
    fn contraction_merges_degrees() {
        let g = zoo::GridSpec::<Q>::uniform(2, 1).build().unwrap();
        let caps = OracleCaps::default();
        let corner = g
            .vertices()
            .iter()
            .position(|v| v.degree() == 2)
            .map(VertexId)
            .unwrap();
        let nbrs: Vec<usize> = g
            .vertex(corner)
            .rotation
            .iter()
            .map(|&e| g.vertex(g.opposite(e, corner)).degree())
            .collect();
        let cert = contract(&g, corner).unwrap();
        let merged = cert
            .after
            .vertices()
            .iter()
            .find(|v| v.name.contains('+'))
            .unwrap();
        assert_eq!(merged.degree(), nbrs.iter().sum::<usize>() - 2);
        assert_eq!(
            oracle_partition(&cert.after, caps).unwrap().abs(),
            oracle_partition(&g, caps).unwrap().abs()
        );
    }
}
