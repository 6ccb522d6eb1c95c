//! JSON graph documents.
//!
//! ```json
//! {
//!   "default_multiplicity": 1,
//!   "vertices": [{"id": "w0", "color": "white", "rotation": ["a", "d"], "cilium": 0}, ...],
//!   "edges": [{"id": "a", "white": "w0", "black": "b0", "weight": [["1"]]}, ...],
//!   "outer_face_witness": ["a", "white"]
//! }
//! ```
//!
//! The witness names a dart on the outer face by its edge and the color of
//! the dart's origin. Scalars are `"p/q"` strings, integers or decimals.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::{Color, Dart, Diagnostic, EdgeId, EmbeddedGraph, GraphParts, VertexId};
use crate::matrix::Matrix;
use crate::scalar::JsonScalar;

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    #[serde(default = "one")]
    pub default_multiplicity: usize,
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_face_witness: Option<(String, Color)>,
    /// Optional Kasteleyn signs keyed by edge id; all edges must be listed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<BTreeMap<String, i8>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub id: String,
    pub color: Color,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<usize>,
    pub rotation: Vec<String>,
    pub cilium: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: String,
    pub white: String,
    pub black: String,
    pub weight: Vec<Vec<Value>>,
}

impl GraphSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Resolves names and builds a validated graph.
    pub fn build<T: JsonScalar>(&self) -> Result<EmbeddedGraph<T>> {
        let mut parts = GraphParts::<T>::new();
        let mut vmap = HashMap::new();
        for v in &self.vertices {
            let id = parts.add_vertex(
                v.id.clone(),
                v.color,
                v.multiplicity.unwrap_or(self.default_multiplicity),
            );
            vmap.entry(v.id.as_str()).or_insert(id);
        }
        let mut diags = Vec::new();
        let mut emap = HashMap::new();
        for e in &self.edges {
            let mut endpoint = |name: &str| {
                vmap.get(name).copied().unwrap_or_else(|| {
                    diags.push(Diagnostic::UnknownReference {
                        kind: "vertex",
                        name: name.to_string(),
                        context: format!("edge `{}`", e.id),
                    });
                    VertexId(usize::MAX)
                })
            };
            let (w, b) = (endpoint(&e.white), endpoint(&e.black));
            let weight = parse_weight::<T>(&e.id, &e.weight)?;
            let id = parts.add_edge(e.id.clone(), w, b, weight);
            emap.entry(e.id.as_str()).or_insert(id);
        }
        for (i, v) in self.vertices.iter().enumerate() {
            let mut rot = Vec::with_capacity(v.rotation.len());
            for name in &v.rotation {
                match emap.get(name.as_str()) {
                    Some(&e) => rot.push(e),
                    None => diags.push(Diagnostic::UnknownReference {
                        kind: "edge",
                        name: name.clone(),
                        context: format!("rotation of `{}`", v.id),
                    }),
                }
            }
            parts.set_rotation(VertexId(i), rot, v.cilium);
        }
        if let Some((edge, side)) = &self.outer_face_witness {
            match emap.get(edge.as_str()) {
                Some(&e) => {
                    parts.outer_witness = Some(Dart {
                        edge: e,
                        origin: *side,
                    })
                }
                None => diags.push(Diagnostic::UnknownReference {
                    kind: "edge",
                    name: edge.clone(),
                    context: "outer_face_witness".into(),
                }),
            }
        }
        if let Some(signs) = &self.signs {
            let mut list = vec![0i8; self.edges.len()];
            for (name, &s) in signs {
                match emap.get(name.as_str()) {
                    Some(&e) => list[e.0] = s,
                    None => diags.push(Diagnostic::UnknownReference {
                        kind: "edge",
                        name: name.clone(),
                        context: "signs".into(),
                    }),
                }
            }
            parts.signs = Some(list);
        }
        if !diags.is_empty() {
            return Err(Error::InvalidGraph(diags));
        }
        EmbeddedGraph::new(parts)
    }

    pub fn from_graph<T: JsonScalar>(g: &EmbeddedGraph<T>) -> Self {
        let default = g.uniform_multiplicity().unwrap_or(1);
        let edge_name = |e: EdgeId| g.edge(e).name.clone();
        GraphSpec {
            default_multiplicity: default,
            vertices: g
                .vertices()
                .iter()
                .map(|v| VertexSpec {
                    id: v.name.clone(),
                    color: v.color,
                    multiplicity: (v.multiplicity != default).then_some(v.multiplicity),
                    rotation: v.rotation.iter().map(|&e| edge_name(e)).collect(),
                    cilium: v.cilium,
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeSpec {
                    id: e.name.clone(),
                    white: g.vertex(e.white).name.clone(),
                    black: g.vertex(e.black).name.clone(),
                    weight: e
                        .weight
                        .to_rows()
                        .iter()
                        .map(|r| r.iter().map(JsonScalar::to_json).collect())
                        .collect(),
                })
                .collect(),
            outer_face_witness: g.outer_face().map(|f| {
                let d = g.face(f).boundary[0];
                (edge_name(d.edge), d.origin)
            }),
            signs: g.user_signs().map(|s| {
                s.iter()
                    .enumerate()
                    .map(|(i, &x)| (edge_name(EdgeId(i)), x))
                    .collect()
            }),
        }
    }
}

fn parse_weight<T: JsonScalar>(edge: &str, rows: &[Vec<Value>]) -> Result<Matrix<T>> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(T::from_json).collect::<Result<Vec<T>>>())
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::Parse(format!("edge `{edge}` weight: {e}")))?;
    Matrix::from_rows(parsed)
        .map_err(|_| Error::Parse(format!("edge `{edge}` weight is not rectangular")))
}

/// Reads a graph document from text.
pub fn parse_graph<T: JsonScalar>(text: &str) -> Result<EmbeddedGraph<T>> {
    GraphSpec::from_json(text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    const SQUARE: &str = r#"{
      "default_multiplicity": 1,
      "vertices": [
        {"id": "w0", "color": "white", "rotation": ["a", "d"], "cilium": 0},
        {"id": "b0", "color": "black", "rotation": ["b", "a"], "cilium": 0},
        {"id": "w1", "color": "white", "rotation": ["c", "b"], "cilium": 0},
        {"id": "b1", "color": "black", "rotation": ["d", "c"], "cilium": 0}
      ],
      "edges": [
        {"id": "a", "white": "w0", "black": "b0", "weight": [["1"]]},
        {"id": "b", "white": "w1", "black": "b0", "weight": [["1/2"]]},
        {"id": "c", "white": "w1", "black": "b1", "weight": [[3]]},
        {"id": "d", "white": "w0", "black": "b1", "weight": [["0.25"]]}
      ],
      "outer_face_witness": ["a", "white"]
    }"#;

    #[test]
    fn parses_square() {
        let g: EmbeddedGraph<Rational> = parse_graph(SQUARE).unwrap();
        assert_eq!(g.num_vertices(), 4);
        assert_eq!(g.num_edges(), 4);
        assert_eq!(g.num_faces(), 2);
        assert_eq!(g.bounded_faces().count(), 1);
        assert_eq!(g.face(g.outer_face().unwrap()).inward_cilia_count(), 4);
        assert_eq!(g.edge(EdgeId(3)).weight[(0, 0)], rat(1, 4));
    }

    #[test]
    fn round_trip() {
        let g: EmbeddedGraph<Rational> = parse_graph(SQUARE).unwrap();
        let spec = GraphSpec::from_graph(&g);
        let again: EmbeddedGraph<Rational> = parse_graph(&spec.to_json()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn dangling_endpoint() {
        let text = SQUARE.replace(
            r#""black": "b1", "weight": [[3]]"#,
            r#""black": "zz", "weight": [[3]]"#,
        );
        let err = parse_graph::<Rational>(&text).unwrap_err();
        assert!(err.to_string().contains("unknown vertex `zz`"), "{err}");
    }

    #[test]
    fn float_backend() {
        let g: EmbeddedGraph<f64> = parse_graph(SQUARE).unwrap();
        assert_eq!(g.edge(EdgeId(1)).weight[(0, 0)], 0.5);
    }

    #[test]
    fn unknown_field_rejected() {
        let text = SQUARE.replace("default_multiplicity", "default_multiplicty");
        assert!(matches!(
            parse_graph::<Rational>(&text),
            Err(Error::Parse(_))
        ));
    }
}
