//! Planar bipartite ciliated graphs with matrix edge weights.
//!
//! The embedding is a rotation system: every vertex lists its incident
//! edges in counterclockwise order. A cilium is a corner index `c`, the
//! corner between rotation slots `c - 1` and `c`. Faces are traced by
//! arriving at a vertex along slot `i` and leaving along slot `i + 1`, so
//! each face lies to the right of its darts and bounded faces come out
//! clockwise.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn as_str(self) -> &'static str {
        match self {
            Color::White => "white",
            Color::Black => "black",
        }
    }

    pub fn other(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub name: String,
    pub color: Color,
    pub multiplicity: usize,
    /// Incident edges in counterclockwise order.
    pub rotation: Vec<EdgeId>,
    /// Corner between `rotation[cilium - 1]` and `rotation[cilium]`.
    pub cilium: usize,
}

impl Vertex {
    pub fn degree(&self) -> usize {
        self.rotation.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge<T> {
    pub name: String,
    pub white: VertexId,
    pub black: VertexId,
    /// `n_white x n_black`.
    pub weight: Matrix<T>,
}

impl<T> Edge<T> {
    pub fn endpoint(&self, color: Color) -> VertexId {
        match color {
            Color::White => self.white,
            Color::Black => self.black,
        }
    }
}

/// A directed edge side, named by the edge and the color of its origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dart {
    pub edge: EdgeId,
    pub origin: Color,
}

impl Dart {
    fn index(self) -> usize {
        2 * self.edge.0 + usize::from(self.origin == Color::Black)
    }

    fn from_index(i: usize) -> Dart {
        Dart {
            edge: EdgeId(i / 2),
            origin: if i % 2 == 0 {
                Color::White
            } else {
                Color::Black
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub id: FaceId,
    /// Darts in traversal order.
    pub boundary: Vec<Dart>,
    /// Vertices whose cilium corner lies in this face.
    pub inward_cilia: Vec<VertexId>,
}

impl Face {
    /// Half the number of boundary darts (`ℓ` for a face with `2ℓ` edges).
    pub fn half_length(&self) -> usize {
        self.boundary.len() / 2
    }

    pub fn inward_cilia_count(&self) -> usize {
        self.inward_cilia.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.boundary.iter().map(|d| d.edge)
    }
}

/// A violated structural invariant, reported by [`GraphParts::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    DuplicateName {
        kind: &'static str,
        name: String,
    },
    UnknownReference {
        kind: &'static str,
        name: String,
        context: String,
    },
    ZeroMultiplicity {
        vertex: String,
    },
    EndpointColor {
        edge: String,
        expected: Color,
        vertex: String,
    },
    EndpointOutOfRange {
        edge: String,
        index: usize,
    },
    WeightShape {
        edge: String,
        expected: (usize, usize),
        got: (usize, usize),
    },
    RotationMismatch {
        vertex: String,
        detail: String,
    },
    IsolatedVertex {
        vertex: String,
    },
    CiliumOutOfRange {
        vertex: String,
        cilium: usize,
        degree: usize,
    },
    NonSquareKasteleyn {
        white_total: usize,
        black_total: usize,
    },
    Disconnected {
        components: usize,
    },
    Euler {
        vertices: usize,
        edges: usize,
        faces: usize,
    },
    MissingOuterFace,
    BadOuterWitness {
        detail: String,
    },
    BadSigns {
        detail: String,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Diagnostic::*;
        match self {
            DuplicateName { kind, name } => write!(f, "duplicate {kind} id `{name}`"),
            UnknownReference { kind, name, context } => {
                write!(f, "{context}: unknown {kind} `{name}`")
            }
            ZeroMultiplicity { vertex } => write!(f, "vertex `{vertex}` has multiplicity 0"),
            EndpointColor { edge, expected, vertex } => write!(
                f,
                "edge `{edge}`: {expected} endpoint `{vertex}` is not {expected}"
            ),
            EndpointOutOfRange { edge, index } => {
                write!(f, "edge `{edge}`: endpoint index {index} does not exist")
            }
            WeightShape { edge, expected, got } => write!(
                f,
                "edge `{edge}`: weight shape {}x{} but endpoints need {}x{}",
                got.0, got.1, expected.0, expected.1
            ),
            RotationMismatch { vertex, detail } => {
                write!(f, "vertex `{vertex}`: rotation {detail}")
            }
            IsolatedVertex { vertex } => write!(f, "vertex `{vertex}` has no edges"),
            CiliumOutOfRange { vertex, cilium, degree } => write!(
                f,
                "vertex `{vertex}`: cilium {cilium} out of range for degree {degree}"
            ),
            NonSquareKasteleyn { white_total, black_total } => write!(
                f,
                "white multiplicities sum to {white_total} but black ones to {black_total}; K would not be square"
            ),
            Disconnected { components } => {
                write!(f, "graph has {components} connected components")
            }
            Euler { vertices, edges, faces } => write!(
                f,
                "Euler check failed: V - E + F = {vertices} - {edges} + {faces} != 2 (rotation system is not planar)"
            ),
            MissingOuterFace => write!(f, "no outer face designated"),
            BadOuterWitness { detail } => write!(f, "outer face witness: {detail}"),
            BadSigns { detail } => write!(f, "edge signs: {detail}"),
        }
    }
}

/// Unvalidated graph data. Build an [`EmbeddedGraph`] from it.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphParts<T> {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge<T>>,
    /// A dart lying on the outer face.
    pub outer_witness: Option<Dart>,
    /// Optional user-supplied Kasteleyn signs, one per edge.
    pub signs: Option<Vec<i8>>,
}

impl<T> Default for GraphParts<T> {
    fn default() -> Self {
        GraphParts {
            vertices: Vec::new(),
            edges: Vec::new(),
            outer_witness: None,
            signs: None,
        }
    }
}

impl<T: Scalar> GraphParts<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(
        &mut self,
        name: impl Into<String>,
        color: Color,
        multiplicity: usize,
    ) -> VertexId {
        self.vertices.push(Vertex {
            name: name.into(),
            color,
            multiplicity,
            rotation: Vec::new(),
            cilium: 0,
        });
        VertexId(self.vertices.len() - 1)
    }

    /// Adds an edge without touching any rotation.
    pub fn add_edge(
        &mut self,
        name: impl Into<String>,
        white: VertexId,
        black: VertexId,
        weight: Matrix<T>,
    ) -> EdgeId {
        self.edges.push(Edge {
            name: name.into(),
            white,
            black,
            weight,
        });
        EdgeId(self.edges.len() - 1)
    }

    pub fn set_rotation(&mut self, v: VertexId, rotation: Vec<EdgeId>, cilium: usize) {
        let vx = &mut self.vertices[v.0];
        vx.rotation = rotation;
        vx.cilium = cilium;
    }

    /// Lists every violated invariant. Face-level checks (Euler, outer
    /// face) run only when the local checks pass.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for v in &self.vertices {
            if !seen.insert(v.name.as_str()) {
                out.push(Diagnostic::DuplicateName {
                    kind: "vertex",
                    name: v.name.clone(),
                });
            }
            if v.multiplicity == 0 {
                out.push(Diagnostic::ZeroMultiplicity {
                    vertex: v.name.clone(),
                });
            }
        }
        seen.clear();
        for e in &self.edges {
            if !seen.insert(e.name.as_str()) {
                out.push(Diagnostic::DuplicateName {
                    kind: "edge",
                    name: e.name.clone(),
                });
            }
        }

        let mut endpoints_ok = true;
        for e in &self.edges {
            for (color, v) in [(Color::White, e.white), (Color::Black, e.black)] {
                match self.vertices.get(v.0) {
                    None => {
                        endpoints_ok = false;
                        out.push(Diagnostic::EndpointOutOfRange {
                            edge: e.name.clone(),
                            index: v.0,
                        });
                    }
                    Some(vx) if vx.color != color => {
                        endpoints_ok = false;
                        out.push(Diagnostic::EndpointColor {
                            edge: e.name.clone(),
                            expected: color,
                            vertex: vx.name.clone(),
                        });
                    }
                    Some(_) => {}
                }
            }
            if endpoints_ok {
                let expected = (
                    self.vertices[e.white.0].multiplicity,
                    self.vertices[e.black.0].multiplicity,
                );
                if e.weight.shape() != expected {
                    out.push(Diagnostic::WeightShape {
                        edge: e.name.clone(),
                        expected,
                        got: e.weight.shape(),
                    });
                }
            }
        }
        if !endpoints_ok {
            return out;
        }

        let mut incident: Vec<Vec<EdgeId>> = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            incident[e.white.0].push(EdgeId(i));
            incident[e.black.0].push(EdgeId(i));
        }
        let mut rotations_ok = true;
        for (i, v) in self.vertices.iter().enumerate() {
            let mut listed = v.rotation.clone();
            listed.sort();
            let mut expected = incident[i].clone();
            expected.sort();
            if listed != expected {
                rotations_ok = false;
                let names = |ids: &[EdgeId]| {
                    ids.iter()
                        .map(|e| {
                            self.edges
                                .get(e.0)
                                .map_or(format!("#{}", e.0), |x| x.name.clone())
                        })
                        .collect::<Vec<_>>()
                        .join(",")
                };
                out.push(Diagnostic::RotationMismatch {
                    vertex: v.name.clone(),
                    detail: format!(
                        "lists [{}] but incident edges are [{}]",
                        names(&v.rotation),
                        names(&incident[i])
                    ),
                });
            }
            if incident[i].is_empty() {
                out.push(Diagnostic::IsolatedVertex {
                    vertex: v.name.clone(),
                });
            } else if v.cilium >= v.degree() {
                out.push(Diagnostic::CiliumOutOfRange {
                    vertex: v.name.clone(),
                    cilium: v.cilium,
                    degree: v.degree(),
                });
            }
        }

        let (wt, bt) = self
            .vertices
            .iter()
            .fold((0, 0), |(w, b), v| match v.color {
                Color::White => (w + v.multiplicity, b),
                Color::Black => (w, b + v.multiplicity),
            });
        if wt != bt {
            out.push(Diagnostic::NonSquareKasteleyn {
                white_total: wt,
                black_total: bt,
            });
        }

        if let Some(signs) = &self.signs {
            if signs.len() != self.edges.len() {
                out.push(Diagnostic::BadSigns {
                    detail: format!("{} signs for {} edges", signs.len(), self.edges.len()),
                });
            } else if signs.iter().any(|&s| s != 1 && s != -1) {
                out.push(Diagnostic::BadSigns {
                    detail: "every sign must be +1 or -1".into(),
                });
            }
        }

        if !out.is_empty() || !rotations_ok || self.vertices.is_empty() {
            return out;
        }

        let components = count_components(self.vertices.len(), &self.edges);
        if components != 1 {
            out.push(Diagnostic::Disconnected { components });
            return out;
        }
        let faces = trace(&self.vertices, &self.edges);
        let (v, e, f) = (self.vertices.len(), self.edges.len(), faces.len());
        if v + f != e + 2 {
            out.push(Diagnostic::Euler {
                vertices: v,
                edges: e,
                faces: f,
            });
        }
        match self.outer_witness {
            None => out.push(Diagnostic::MissingOuterFace),
            Some(d) if d.edge.0 >= self.edges.len() => out.push(Diagnostic::BadOuterWitness {
                detail: format!("edge index {} does not exist", d.edge.0),
            }),
            Some(_) => {}
        }
        out
    }
}

fn count_components<T>(n: usize, edges: &[Edge<T>]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut comps = n;
    for e in edges {
        let (a, b) = (find(&mut parent, e.white.0), find(&mut parent, e.black.0));
        if a != b {
            parent[a] = b;
            comps -= 1;
        }
    }
    comps
}

/// Slot of `e` in the rotation at `v`.
fn slot_of(v: &Vertex, e: EdgeId) -> usize {
    v.rotation
        .iter()
        .position(|&x| x == e)
        .expect("edge listed in rotation")
}

/// Traces faces. Returns, for each face, its darts in order.
fn trace<T>(vertices: &[Vertex], edges: &[Edge<T>]) -> Vec<Vec<Dart>> {
    let mut visited = vec![false; 2 * edges.len()];
    let mut faces = Vec::new();
    for start in 0..visited.len() {
        if visited[start] {
            continue;
        }
        let mut boundary = Vec::new();
        let mut d = Dart::from_index(start);
        while !visited[d.index()] {
            visited[d.index()] = true;
            boundary.push(d);
            let head_color = d.origin.other();
            let head = &vertices[edges[d.edge.0].endpoint(head_color).0];
            let i = slot_of(head, d.edge);
            let next = head.rotation[(i + 1) % head.degree()];
            d = Dart {
                edge: next,
                origin: head_color,
            };
        }
        faces.push(boundary);
    }
    faces
}

/// A validated, face-traced graph. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedGraph<T = Rational> {
    vertices: Vec<Vertex>,
    edges: Vec<Edge<T>>,
    faces: Vec<Face>,
    outer_face: Option<FaceId>,
    dart_face: Vec<FaceId>,
    /// Position of every vertex in its color class (its block index in K).
    color_index: Vec<usize>,
    whites: Vec<VertexId>,
    blacks: Vec<VertexId>,
    signs: Option<Vec<i8>>,
}

impl<T: Scalar> EmbeddedGraph<T> {
    pub fn new(parts: GraphParts<T>) -> Result<Self> {
        let diags = parts.validate();
        if !diags.is_empty() {
            return Err(Error::InvalidGraph(diags));
        }
        let GraphParts {
            vertices,
            edges,
            outer_witness,
            signs,
        } = parts;

        let traced = trace(&vertices, &edges);
        let mut dart_face = vec![FaceId(0); 2 * edges.len()];
        let mut faces = Vec::with_capacity(traced.len());
        for (fi, boundary) in traced.into_iter().enumerate() {
            for d in &boundary {
                dart_face[d.index()] = FaceId(fi);
            }
            faces.push(Face {
                id: FaceId(fi),
                boundary,
                inward_cilia: Vec::new(),
            });
        }
        for (vi, v) in vertices.iter().enumerate() {
            let d = Dart {
                edge: v.rotation[v.cilium],
                origin: v.color,
            };
            faces[dart_face[d.index()].0]
                .inward_cilia
                .push(VertexId(vi));
        }
        let outer_face = outer_witness.map(|d| dart_face[d.index()]);

        let mut color_index = vec![0; vertices.len()];
        let mut whites = Vec::new();
        let mut blacks = Vec::new();
        for (i, v) in vertices.iter().enumerate() {
            let list = match v.color {
                Color::White => &mut whites,
                Color::Black => &mut blacks,
            };
            color_index[i] = list.len();
            list.push(VertexId(i));
        }
        Ok(EmbeddedGraph {
            vertices,
            edges,
            faces,
            outer_face,
            dart_face,
            color_index,
            whites,
            blacks,
            signs,
        })
    }

    pub fn to_parts(&self) -> GraphParts<T> {
        GraphParts {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            outer_witness: self.outer_face.map(|f| self.faces[f.0].boundary[0]),
            signs: self.signs.clone(),
        }
    }

    /// Re-checks every invariant; empty for any graph built by [`Self::new`].
    pub fn validate(&self) -> Vec<Diagnostic> {
        self.to_parts().validate()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.0]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge<T> {
        &self.edges[e.0]
    }

    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f.0]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn outer_face(&self) -> Option<FaceId> {
        self.outer_face
    }

    pub fn bounded_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces
            .iter()
            .filter(move |f| Some(f.id) != self.outer_face)
    }

    pub fn user_signs(&self) -> Option<&[i8]> {
        self.signs.as_deref()
    }

    pub fn whites(&self) -> &[VertexId] {
        &self.whites
    }

    pub fn blacks(&self) -> &[VertexId] {
        &self.blacks
    }

    /// Block index of `v` among the vertices of its color.
    pub fn color_index(&self, v: VertexId) -> usize {
        self.color_index[v.0]
    }

    pub fn multiplicity(&self, v: VertexId) -> usize {
        self.vertices[v.0].multiplicity
    }

    /// `Some(n)` if all vertices share multiplicity `n`.
    pub fn uniform_multiplicity(&self) -> Option<usize> {
        let n = self.vertices.first()?.multiplicity;
        self.vertices
            .iter()
            .all(|v| v.multiplicity == n)
            .then_some(n)
    }

    pub fn face_of_dart(&self, d: Dart) -> FaceId {
        self.dart_face[d.index()]
    }

    pub fn vertex_by_name(&self, name: &str) -> Result<VertexId> {
        self.vertices
            .iter()
            .position(|v| v.name == name)
            .map(VertexId)
            .ok_or_else(|| Error::UnknownName {
                kind: "vertex",
                name: name.to_string(),
            })
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId> {
        self.edges
            .iter()
            .position(|e| e.name == name)
            .map(EdgeId)
            .ok_or_else(|| Error::UnknownName {
                kind: "edge",
                name: name.to_string(),
            })
    }

    /// Accepts a face by `f<index>` or by the name of an edge on its
    /// clockwise-traced boundary, written `edge:white` / `edge:black` to pick
    /// a side.
    pub fn face_by_name(&self, name: &str) -> Result<FaceId> {
        if let Some(idx) = name.strip_prefix('f').and_then(|s| s.parse::<usize>().ok()) {
            if idx < self.faces.len() {
                return Ok(FaceId(idx));
            }
        }
        if let Some((e, side)) = name.split_once(':') {
            let origin = match side {
                "white" => Color::White,
                "black" => Color::Black,
                _ => {
                    return Err(Error::UnknownName {
                        kind: "face",
                        name: name.into(),
                    })
                }
            };
            let edge = self.edge_by_name(e)?;
            return Ok(self.face_of_dart(Dart { edge, origin }));
        }
        Err(Error::UnknownName {
            kind: "face",
            name: name.into(),
        })
    }

    /// Edges between `w` and `b`, in edge order.
    pub fn edges_between(&self, w: VertexId, b: VertexId) -> Vec<EdgeId> {
        self.vertices[w.0]
            .rotation
            .iter()
            .copied()
            .filter(|&e| self.edges[e.0].black == b)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// The other endpoint of `e` seen from `v`.
    pub fn opposite(&self, e: EdgeId, v: VertexId) -> VertexId {
        let edge = &self.edges[e.0];
        if edge.white == v {
            edge.black
        } else {
            edge.white
        }
    }

    pub fn slot(&self, v: VertexId, e: EdgeId) -> usize {
        slot_of(&self.vertices[v.0], e)
    }

    /// Incident edges in the order used to read half-edge colors: from the
    /// cilium counterclockwise at black vertices, clockwise at white ones.
    pub fn reading_order(&self, v: VertexId) -> Vec<EdgeId> {
        let vx = &self.vertices[v.0];
        let d = vx.degree();
        match vx.color {
            Color::Black => (0..d).map(|k| vx.rotation[(vx.cilium + k) % d]).collect(),
            Color::White => (0..d)
                .map(|k| vx.rotation[(vx.cilium + d - 1 - k) % d])
                .collect(),
        }
    }

    /// Applies `f` to every edge weight (e.g. to change scalar type).
    pub fn map_weights<U: Scalar>(
        &self,
        mut f: impl FnMut(&Matrix<T>) -> Matrix<U>,
    ) -> EmbeddedGraph<U> {
        EmbeddedGraph {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    name: e.name.clone(),
                    white: e.white,
                    black: e.black,
                    weight: f(&e.weight),
                })
                .collect(),
            faces: self.faces.clone(),
            outer_face: self.outer_face,
            dart_face: self.dart_face.clone(),
            color_index: self.color_index.clone(),
            whites: self.whites.clone(),
            blacks: self.blacks.clone(),
            signs: self.signs.clone(),
        }
    }

    /// Same graph with one edge weight replaced; shape must match.
    pub fn with_weight(&self, e: EdgeId, weight: Matrix<T>) -> Result<Self> {
        let mut parts = self.to_parts();
        parts.edges[e.0].weight = weight;
        Self::new(parts)
    }

    /// Same graph with the cilium of `v` moved to corner `c`.
    pub fn with_cilium(&self, v: VertexId, c: usize) -> Result<Self> {
        let mut parts = self.to_parts();
        parts.vertices[v.0].cilium = c;
        Self::new(parts)
    }

    pub fn with_signs(&self, signs: Option<Vec<i8>>) -> Result<Self> {
        let mut parts = self.to_parts();
        parts.signs = signs;
        Self::new(parts)
    }

    /// Counts `(V, E, F)`.
    pub fn euler_counts(&self) -> (usize, usize, usize) {
        (self.vertices.len(), self.edges.len(), self.faces.len())
    }
}

/// Planar layout used by generators: rotations come from the angles of the
/// incident edges, cilia from a preferred direction, and the outer face is
/// the one traced counterclockwise.
pub struct Layout {
    pub positions: Vec<(f64, f64)>,
    /// Preferred cilium direction per vertex; `None` points away from the
    /// centroid of all vertices.
    pub cilium_dirs: Vec<Option<f64>>,
}

impl Layout {
    pub fn new() -> Self {
        Layout {
            positions: Vec::new(),
            cilium_dirs: Vec::new(),
        }
    }

    pub fn place(&mut self, v: VertexId, x: f64, y: f64) {
        if self.positions.len() <= v.0 {
            self.positions.resize(v.0 + 1, (0.0, 0.0));
            self.cilium_dirs.resize(v.0 + 1, None);
        }
        self.positions[v.0] = (x, y);
    }

    pub fn cilium_toward(&mut self, v: VertexId, angle: f64) {
        self.cilium_dirs[v.0] = Some(angle);
    }

    /// Fills rotations, cilia and the outer-face witness of `parts`, then
    /// builds the graph. Parallel edges are not supported here.
    pub fn embed<T: Scalar>(&self, mut parts: GraphParts<T>) -> Result<EmbeddedGraph<T>> {
        let n = parts.vertices.len();
        assert_eq!(self.positions.len(), n, "every vertex needs a position");
        let (cx, cy) = self.positions.iter().fold((0.0, 0.0), |(a, b), &(x, y)| {
            (a + x / n as f64, b + y / n as f64)
        });
        let angle = |from: usize, to: usize| {
            let (x0, y0) = self.positions[from];
            let (x1, y1) = self.positions[to];
            (y1 - y0).atan2(x1 - x0)
        };
        for vi in 0..n {
            let mut inc: Vec<(f64, EdgeId)> = parts
                .edges
                .iter()
                .enumerate()
                .filter(|(_, e)| e.white.0 == vi || e.black.0 == vi)
                .map(|(i, e)| {
                    let other = if e.white.0 == vi {
                        e.black.0
                    } else {
                        e.white.0
                    };
                    (angle(vi, other), EdgeId(i))
                })
                .collect();
            inc.sort_by(|a, b| a.0.total_cmp(&b.0));
            let dir = self.cilium_dirs[vi].unwrap_or_else(|| {
                let (x, y) = self.positions[vi];
                (y - cy).atan2(x - cx)
            });
            // rot[c] is the first edge counterclockwise after the cilium direction
            let c = inc.iter().position(|(a, _)| *a > dir).unwrap_or(0);
            parts.set_rotation(VertexId(vi), inc.into_iter().map(|(_, e)| e).collect(), c);
        }
        if parts.edges.is_empty() {
            return EmbeddedGraph::new(parts);
        }
        // provisional witness so the graph can be traced
        parts.outer_witness = Some(Dart {
            edge: EdgeId(0),
            origin: Color::White,
        });
        let g = EmbeddedGraph::new(parts.clone())?;
        parts.outer_witness = g
            .faces()
            .iter()
            .max_by(|a, b| self.signed_area(&g, a).total_cmp(&self.signed_area(&g, b)))
            .map(|f| f.boundary[0]);
        EmbeddedGraph::new(parts)
    }

    fn signed_area<T: Scalar>(&self, g: &EmbeddedGraph<T>, f: &Face) -> f64 {
        let pts: Vec<(f64, f64)> = f
            .boundary
            .iter()
            .map(|d| self.positions[g.edge(d.edge).endpoint(d.origin).0])
            .collect();
        let m = pts.len();
        (0..m)
            .map(|i| {
                let (x0, y0) = pts[i];
                let (x1, y1) = pts[(i + 1) % m];
                x0 * y1 - x1 * y0
            })
            .sum::<f64>()
            / 2.0
    }
}

impl Default for Layout {
    fn default() -> Self {
        Self::new()
    }
}
