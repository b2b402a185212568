use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::address::TersquareAddress;
use super::hive::{classify, TersquareClass};
use super::vertex::GammaVertex;
use super::{Compound, GammaError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Json,
    Dot,
}

impl FromStr for ExportFormat {
    type Err = GammaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ExportFormat::Json),
            "dot" => Ok(ExportFormat::Dot),
            _ => Err(GammaError::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TersquareEntry {
    pub address: TersquareAddress,
    pub class: TersquareClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: GammaVertex,
    /// Innermost class among the member tersquares containing the vertex.
    pub class: TersquareClass,
    pub tersquares: Vec<TersquareAddress>,
}

/// Adjacency with tersquare membership, classes taken relative to `center`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub center: TersquareAddress,
    pub tersquares: Vec<TersquareEntry>,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<(GammaVertex, GammaVertex)>,
}

impl GraphDoc {
    pub fn new(c: &Compound, center: &TersquareAddress) -> Self {
        let tersquares = c
            .tersquares
            .iter()
            .map(|t| TersquareEntry {
                address: t.clone(),
                class: classify(center, t),
            })
            .collect();
        let vertices = (0..c.len())
            .map(|i| {
                let ts = c.tersquares_of(i);
                let class = ts
                    .iter()
                    .map(|t| classify(center, t))
                    .min()
                    .unwrap_or(TersquareClass::Outer);
                VertexEntry {
                    id: c.vertices[i].clone(),
                    class,
                    tersquares: ts,
                }
            })
            .collect();
        let edges = c
            .graph
            .edges()
            .into_iter()
            .map(|(u, v)| (c.vertices[u].clone(), c.vertices[v].clone()))
            .collect();
        GraphDoc {
            center: center.clone(),
            tersquares,
            vertices,
            edges,
        }
    }

    /// Rebuilds the compound from its tersquares and checks the listed vertices and edges agree.
    pub fn to_compound(&self) -> Result<Compound, GammaError> {
        let c = Compound::from_tersquares(self.tersquares.iter().map(|t| t.address.clone()));
        if *self != GraphDoc::new(&c, &self.center) {
            return Err(GammaError::Document(
                "vertices or edges disagree with the listed tersquares".into(),
            ));
        }
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, GammaError> {
        serde_json::from_str(s).map_err(|e| GammaError::Document(e.to_string()))
    }

    pub fn to_dot(&self) -> String {
        let color = |c: TersquareClass| match c {
            TersquareClass::Center => "red",
            TersquareClass::Subcentral => "gold",
            TersquareClass::Corner => "deepskyblue",
            TersquareClass::Outer => "gray",
        };
        let mut out = String::from("graph gamma2 {\n  node [shape=circle, style=filled, fontsize=8];\n");
        for v in &self.vertices {
            let ts: Vec<String> = v.tersquares.iter().map(|t| t.to_string()).collect();
            let _ = writeln!(
                out,
                "  \"{}\" [fillcolor={}, class={:?}, tersquares=\"{}\"];",
                v.id,
                color(v.class),
                format!("{:?}", v.class).to_lowercase(),
                ts.join(" ")
            );
        }
        for (u, v) in &self.edges {
            let _ = writeln!(out, "  \"{u}\" -- \"{v}\";");
        }
        out.push_str("}\n");
        out
    }
}

pub fn export_graph(c: &Compound, center: &TersquareAddress, format: ExportFormat) -> String {
    let doc = GraphDoc::new(c, center);
    match format {
        ExportFormat::Json => doc.to_json(),
        ExportFormat::Dot => doc.to_dot(),
    }
}
