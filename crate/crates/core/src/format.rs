//! JSON instance and result files.
//!
//! An instance lists the vertex count, optional labels, optional edges, and
//! named color classes of sets:
//!
//! ```json
//! {
//!   "vertices": 3,
//!   "edges": [[0, 1], [1, 2]],
//!   "families": [
//!     { "color": "end", "sets": [[0], { "set": [2], "multiplicity": 2 }] }
//!   ]
//! }
//! ```
//!
//! Without `edges` the instance is a plain set family; with it, the sets
//! are marked cliques of the graph.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::group::PermGroup;
use crate::interval::Graph;
use crate::marked::MarkedInstance;
use crate::setfamily::{index_bound, ColoredSetFamily, Entry, MultisetDomain, TowerTrace};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Invalid(#[from] Error),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetSpec {
    Plain(Vec<usize>),
    Weighted {
        set: Vec<usize>,
        multiplicity: usize,
    },
}

impl SetSpec {
    fn parts(&self) -> (&[usize], usize) {
        match self {
            SetSpec::Plain(s) => (s, 1),
            SetSpec::Weighted { set, multiplicity } => (set, *multiplicity),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub color: String,
    pub sets: Vec<SetSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub vertices: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(usize, usize)>>,
    #[serde(default)]
    pub families: Vec<FamilySpec>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes") + "\n"
    }

    pub fn has_graph(&self) -> bool {
        self.edges.is_some()
    }

    /// Color names in id order.
    pub fn color_names(&self) -> Vec<String> {
        self.families.iter().map(|f| f.color.clone()).collect()
    }

    /// The sets as a colored family; colors are numbered in file order.
    pub fn family(&self) -> Result<ColoredSetFamily, Error> {
        let mut names = self.color_names();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidFamily("color listed twice".into()));
        }
        let mut entries = Vec::new();
        for (color, f) in self.families.iter().enumerate() {
            for spec in &f.sets {
                let (set, m) = spec.parts();
                let mut set = set.to_vec();
                set.sort_unstable();
                if set.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidFamily(format!("set {set:?} repeats a point")));
                }
                entries.push(Entry::new(set, color, m));
            }
        }
        ColoredSetFamily::new(self.vertices, entries)
    }

    pub fn graph(&self) -> Result<Graph, Error> {
        let g = Graph::new(self.vertices, self.edges.as_deref().unwrap_or(&[]))?;
        match &self.labels {
            Some(l) => g.with_labels(l.clone()),
            None => Ok(g),
        }
    }

    pub fn marked(&self) -> Result<MarkedInstance, Error> {
        MarkedInstance::new(self.graph()?, self.family()?.entries)
    }

    pub fn from_family(family: &ColoredSetFamily) -> Self {
        let colors = family.num_colors();
        let families = (0..colors)
            .map(|c| FamilySpec {
                color: format!("c{c}"),
                sets: family
                    .entries
                    .iter()
                    .filter(|e| e.color == c)
                    .map(|e| match e.multiplicity {
                        1 => SetSpec::Plain(e.set.clone()),
                        m => SetSpec::Weighted {
                            set: e.set.clone(),
                            multiplicity: m,
                        },
                    })
                    .collect(),
            })
            .collect();
        InstanceFile {
            vertices: family.ground_size,
            labels: None,
            edges: None,
            families,
        }
    }

    pub fn from_marked(marked: &MarkedInstance) -> Self {
        let mut file = Self::from_family(&marked.sets);
        file.labels = marked.graph.labels().map(<[String]>::to_vec);
        file.edges = Some(marked.graph.edges());
        file
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainEntry {
    pub color: String,
    pub set: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    pub copy: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub images: Vec<u32>,
    pub cycles: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub parts: Vec<usize>,
    pub order: String,
    pub index: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    pub antichain: usize,
    pub index_bound: String,
    pub start_order: String,
    pub height: usize,
    pub steps: Vec<TraceStep>,
}

impl From<&TowerTrace> for TraceReport {
    fn from(t: &TowerTrace) -> Self {
        let indices = t.step_indices();
        TraceReport {
            antichain: t.antichain,
            index_bound: index_bound(t.antichain).to_string(),
            start_order: t.start_order.to_string(),
            height: t.height(),
            steps: t
                .steps
                .iter()
                .zip(indices)
                .map(|(s, i)| TraceStep {
                    parts: s.parts.clone(),
                    order: s.order.to_string(),
                    index: i.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub order: String,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultFile {
    pub problem: String,
    pub domain: Vec<DomainEntry>,
    pub generators: Vec<GeneratorEntry>,
    pub order: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ResultFile {
    pub fn new(
        problem: &str,
        instance: &InstanceFile,
        domain: &MultisetDomain,
        group: &PermGroup,
    ) -> Self {
        let names = instance.color_names();
        let domain = domain
            .points
            .iter()
            .map(|p| DomainEntry {
                color: names[p.color].clone(),
                set: p.set.clone(),
                names: instance
                    .labels
                    .as_ref()
                    .map(|l| p.set.iter().map(|&v| l[v].clone()).collect()),
                copy: p.copy,
            })
            .collect();
        let generators = group
            .generators()
            .iter()
            .map(|g| GeneratorEntry {
                images: g.images().to_vec(),
                cycles: g.to_cycle_string(),
            })
            .collect();
        ResultFile {
            problem: problem.to_string(),
            domain,
            generators,
            order: group.order().to_string(),
            trace: None,
            oracle: None,
            warnings: Vec::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PATH: &str = r#"{
      "vertices": 3,
      "labels": ["x", "y", "z"],
      "edges": [[0, 1], [1, 2]],
      "families": [{ "color": "end", "sets": [[0], { "set": [2], "multiplicity": 2 }] }]
    }"#;

    #[test]
    fn parses_weighted_and_plain_sets() {
        let f = InstanceFile::parse(PATH).unwrap();
        let fam = f.family().unwrap();
        assert_eq!(fam.entries[0], Entry::new(vec![0], 0, 1));
        assert_eq!(fam.entries[1], Entry::new(vec![2], 0, 2));
        assert!(f.marked().is_ok());
    }

    #[test]
    fn round_trip() {
        let f = InstanceFile::parse(PATH).unwrap();
        assert_eq!(InstanceFile::parse(&f.render()).unwrap(), f);
    }

    #[test]
    fn parse_error_has_position() {
        let err = InstanceFile::parse("{\n  \"vertices\": 3,\n  oops\n}").unwrap_err();
        match err {
            FormatError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn unknown_field_rejected() {
        assert!(InstanceFile::parse(r#"{"vertices": 1, "vertex": 2}"#).is_err());
    }

    #[test]
    fn duplicate_point_rejected() {
        let f = InstanceFile::parse(
            r#"{"vertices": 2, "families": [{"color": "a", "sets": [[1, 1]]}]}"#,
        )
        .unwrap();
        assert!(matches!(f.family(), Err(Error::InvalidFamily(_))));
    }
}
