//! Network documents: the JSON form and the plain edge list.
//!
//! JSON:
//!
//! ```json
//! {
//!   "n": 3,
//!   "edges": [{"u": 0, "v": 1, "w": 2.0}, {"u": 1, "v": 2, "w": 1.5}],
//!   "dynamics": {"jacobian": [[3, -5], [5, 3]]},
//!   "tau": 3.0
//! }
//! ```
//!
//! `dynamics` is either one patch description applied to every node or a
//! list with one entry per node. A patch is `{"jacobian": [[a, b], [c, d]]}`
//! (optionally with `"equilibrium": [x, y]`) or
//! `{"model": "rosenzweig", "params": {"r", "k", "a", "h", "e", "m"}}`.
//!
//! Edge list: one `u v w` triple per line, `#` starts a comment, and an
//! optional `n N` line fixes the node count (otherwise the largest id plus
//! one). Edge `k` of the file is bit `k` of every cut-set vector.

use std::fmt::Write as _;

use metacut_core::dynamics::{local_dynamics, PatchModel, RosenzweigParams};
use metacut_core::{Jacobian2, LocalDynamics, WeightedGraph};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub n: usize,
    pub edges: Vec<EdgeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DynamicsSpec {
    Uniform(PatchSpec),
    PerNode(Vec<PatchSpec>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum PatchSpec {
    Linear {
        jacobian: [[f64; 2]; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        equilibrium: Option<[f64; 2]>,
    },
    Model {
        model: ModelKind,
        params: RosenzweigSpec,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Rosenzweig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RosenzweigSpec {
    pub r: f64,
    pub k: f64,
    pub a: f64,
    pub h: f64,
    pub e: f64,
    pub m: f64,
}

impl PatchSpec {
    pub fn to_model(self) -> metacut_core::Result<PatchModel> {
        match self {
            Self::Linear { jacobian, equilibrium } => {
                let j = Jacobian2(jacobian);
                if !j.is_finite() || !equilibrium.unwrap_or_default().iter().all(|v| v.is_finite()) {
                    return Err(metacut_core::Error::InvalidParameter("jacobian entries must be finite"));
                }
                Ok(PatchModel::Linear {
                    jacobian: j,
                    equilibrium: equilibrium.unwrap_or_default(),
                })
            }
            Self::Model { params: p, .. } => PatchModel::rosenzweig(RosenzweigParams {
                r: p.r,
                k: p.k,
                a: p.a,
                h: p.h,
                e: p.e,
                m: p.m,
            }),
        }
    }

    pub fn from_model(model: &PatchModel) -> Self {
        match *model {
            PatchModel::Linear { jacobian, equilibrium } => Self::Linear {
                jacobian: jacobian.0,
                equilibrium: (equilibrium != [0.0, 0.0]).then_some(equilibrium),
            },
            PatchModel::Rosenzweig(p) => Self::Model {
                model: ModelKind::Rosenzweig,
                params: RosenzweigSpec {
                    r: p.r,
                    k: p.k,
                    a: p.a,
                    h: p.h,
                    e: p.e,
                    m: p.m,
                },
            },
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum DocError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid network: {0}")]
    Validation(#[from] ValidationError),
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ValidationError {
    #[error("edge {index}: {source}")]
    Edge { index: usize, source: metacut_core::Error },
    #[error("{0}")]
    Graph(metacut_core::Error),
    #[error("dynamics lists {got} patches for {expected} nodes")]
    DynamicsLength { expected: usize, got: usize },
    #[error("patch {node}: {source}")]
    Patch { node: usize, source: metacut_core::Error },
    #[error("tau must be finite, got {0}")]
    NonFiniteTau(f64),
}

/// A validated document.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub graph: WeightedGraph,
    /// One model per node, when the document describes dynamics.
    pub models: Option<Vec<PatchModel>>,
    pub tau: Option<f64>,
}

impl Network {
    pub fn local_dynamics(&self) -> Option<metacut_core::Result<LocalDynamics>> {
        self.models.as_deref().map(local_dynamics)
    }
}

impl NetworkDocument {
    pub fn from_graph(g: &WeightedGraph, models: Option<&[PatchModel]>, tau: Option<f64>) -> Self {
        let edges = g.edges().iter().map(|e| EdgeSpec { u: e.u, v: e.v, w: e.w }).collect();
        let dynamics = models.map(|ms| match ms {
            [first, rest @ ..] if rest.iter().all(|m| m == first) => {
                DynamicsSpec::Uniform(PatchSpec::from_model(first))
            }
            _ => DynamicsSpec::PerNode(ms.iter().map(PatchSpec::from_model).collect()),
        });
        Self {
            n: g.node_count(),
            edges,
            dynamics,
            tau,
        }
    }

    pub fn validate(&self) -> Result<Network, ValidationError> {
        for (index, e) in self.edges.iter().enumerate() {
            let single = WeightedGraph::from_edge_list(self.n, &[(e.u, e.v, e.w)]);
            if let Err(source) = single {
                return Err(ValidationError::Edge { index, source });
            }
        }
        let triples: Vec<_> = self.edges.iter().map(|e| (e.u, e.v, e.w)).collect();
        let graph = WeightedGraph::from_edge_list(self.n, &triples).map_err(ValidationError::Graph)?;
        let specs: Option<Vec<PatchSpec>> = match &self.dynamics {
            None => None,
            Some(DynamicsSpec::Uniform(p)) => Some(vec![*p; self.n]),
            Some(DynamicsSpec::PerNode(ps)) if ps.len() == self.n => Some(ps.clone()),
            Some(DynamicsSpec::PerNode(ps)) => {
                return Err(ValidationError::DynamicsLength {
                    expected: self.n,
                    got: ps.len(),
                })
            }
        };
        let models = specs
            .map(|ps| {
                ps.into_iter()
                    .enumerate()
                    .map(|(node, p)| p.to_model().map_err(|source| ValidationError::Patch { node, source }))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        if let Some(t) = self.tau.filter(|t| !t.is_finite()) {
            return Err(ValidationError::NonFiniteTau(t));
        }
        Ok(Network {
            graph,
            models,
            tau: self.tau,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Edge-list form. Dynamics and `tau` are not representable and are dropped.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for e in &self.edges {
            writeln!(s, "{} {} {}", e.u, e.v, e.w).unwrap();
        }
        s
    }
}

/// Parses either format; text whose first non-blank character is `{` is JSON.
pub fn parse_document(text: &str) -> Result<NetworkDocument, DocError> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| DocError::Parse {
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })
    } else {
        parse_edge_list(text)
    }
}

/// Parses and validates.
pub fn parse_network(text: &str) -> Result<Network, DocError> {
    Ok(parse_document(text)?.validate()?)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

fn parse_edge_list(text: &str) -> Result<NetworkDocument, DocError> {
    let mut n = None;
    let mut edges = Vec::new();
    let mut max_id = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let tokens = tokens(body);
        let err = |column: usize, message: String| DocError::Parse { line, column, message };
        match tokens.as_slice() {
            [] => continue,
            [(c, "n"), rest @ ..] => {
                if n.is_some() || !edges.is_empty() {
                    return Err(err(*c, "`n` must come once, before any edge".into()));
                }
                let [(c, tok)] = rest else {
                    return Err(err(*c, "expected `n <count>`".into()));
                };
                n = Some(
                    tok.parse::<usize>()
                        .map_err(|_| err(*c, format!("bad node count `{tok}`")))?,
                );
            }
            [(cu, u), (cv, v), (cw, w)] => {
                let id = |c: usize, t: &str| t.parse::<usize>().map_err(|_| err(c, format!("bad node id `{t}`")));
                let (u, v) = (id(*cu, u)?, id(*cv, v)?);
                let w = w.parse::<f64>().map_err(|_| err(*cw, format!("bad weight `{w}`")))?;
                max_id = max_id.max(Some(u.max(v)));
                edges.push(EdgeSpec { u, v, w });
            }
            [(c, _), ..] => return Err(err(*c, format!("expected `u v w`, found {} fields", tokens.len()))),
        }
    }
    Ok(NetworkDocument {
        n: n.unwrap_or_else(|| max_id.map_or(0, |m| m + 1)),
        edges,
        dynamics: None,
        tau: None,
    })
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain([(line.len(), ' ')]) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((line[..s].chars().count() + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use metacut_core::Error;

    const G56: &str = r#"{
      "n": 5,
      "edges": [
        {"u": 0, "v": 1, "w": 3}, {"u": 1, "v": 2, "w": 2}, {"u": 2, "v": 3, "w": 3},
        {"u": 3, "v": 4, "w": 5}, {"u": 4, "v": 0, "w": 2}, {"u": 4, "v": 1, "w": 1}
      ],
      "dynamics": {"jacobian": [[3, -5], [5, 3]]}
    }"#;

    #[test]
    fn edge_list_pair() {
        let net = parse_network("0 1 2.0\n").unwrap();
        assert_eq!(net.graph.node_count(), 2);
        assert_eq!(net.graph.edges()[0].w, 2.0);
        assert!(net.models.is_none());
    }

    #[test]
    fn edge_list_comments_and_count() {
        let net = parse_network("# ring\nn 4\n0 1 1 # first\n\n1 2 1\n2 0 1\n").unwrap();
        assert_eq!(net.graph.node_count(), 4);
        assert_eq!(net.graph.edge_count(), 3);
        assert!(!net.graph.is_connected());
    }

    #[test]
    fn edge_list_errors_point_at_token() {
        assert_eq!(
            parse_network("0 1 1\n0  x 2\n"),
            Err(DocError::Parse {
                line: 2,
                column: 4,
                message: "bad node id `x`".into()
            })
        );
        let e = parse_network("0 1\n").unwrap_err();
        assert!(matches!(e, DocError::Parse { line: 1, column: 1, .. }), "{e}");
        let e = parse_network("0 1 1\nn 3\n").unwrap_err();
        assert!(matches!(e, DocError::Parse { line: 2, .. }));
    }

    #[test]
    fn negative_weight_rejected() {
        let e = parse_network("0 1 -1\n").unwrap_err();
        assert!(matches!(
            e,
            DocError::Validation(ValidationError::Edge {
                index: 0,
                source: Error::NonPositiveWeight { .. }
            })
        ));
    }

    #[test]
    fn json_worked_example() {
        let net = parse_network(G56).unwrap();
        assert_eq!(net.graph.edge_count(), 6);
        assert_eq!(net.graph.edge(3).w, 5.0);
        assert_eq!(net.models.as_ref().unwrap().len(), 5);
        let d = net.local_dynamics().unwrap().unwrap();
        assert!(d.is_uniform());
    }

    #[test]
    fn json_errors_have_positions() {
        let e = parse_network("{\n  \"n\": 2,\n  \"edges\": [{\"u\": 0, \"v\": 1}]\n}").unwrap_err();
        match e {
            DocError::Parse { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("missing field `w`"), "{message}");
            }
            other => panic!("{other}"),
        }
        let e = parse_network(r#"{"n": 2, "edges": [], "extra": 1}"#).unwrap_err();
        assert!(matches!(e, DocError::Parse { .. }));
    }

    #[test]
    fn dynamics_validation() {
        let e = parse_network(r#"{"n": 2, "edges": [], "dynamics": [{"jacobian": [[1,0],[0,1]]}]}"#).unwrap_err();
        assert_eq!(
            e,
            DocError::Validation(ValidationError::DynamicsLength { expected: 2, got: 1 })
        );
        let bad = r#"{"n": 1, "edges": [], "dynamics": {"model": "rosenzweig",
            "params": {"r": 1, "k": 1, "a": 1, "h": 1, "e": 0.5, "m": 1}}}"#;
        assert!(matches!(
            parse_network(bad),
            Err(DocError::Validation(ValidationError::Patch { node: 0, .. }))
        ));
        let ok = r#"{"n": 1, "edges": [], "dynamics": {"model": "rosenzweig",
            "params": {"r": 1, "k": 10, "a": 1, "h": 0.5, "e": 0.5, "m": 0.1}}}"#;
        assert!(matches!(
            parse_network(ok).unwrap().models.unwrap()[0],
            PatchModel::Rosenzweig(_)
        ));
    }

    #[test]
    fn json_round_trip() {
        let doc = parse_document(G56).unwrap();
        assert_eq!(parse_document(&doc.to_json()).unwrap(), doc);
        let net = doc.validate().unwrap();
        let back = NetworkDocument::from_graph(&net.graph, net.models.as_deref(), None);
        assert_eq!(back, doc);
    }
}
