//! Problem instances and their JSON form.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Bounds, Dyperedge, MixedHypergraph, RootMultiset};
use crate::matroid::Matroid;
use crate::sets::{ElementSet, VertexSet};

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

/// Matroid description. Free, uniform, partition and explicit matroids live on
/// the root copies (ordered by vertex, then copy); `hypergraphic` lives on the
/// hyperedges and `extended` on the orientations of the instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatroidDoc {
    Free,
    Uniform {
        r: usize,
    },
    Partition {
        blocks: Vec<Vec<usize>>,
        capacities: Vec<usize>,
    },
    Explicit {
        independent_sets: Vec<Vec<usize>>,
    },
    Hypergraphic,
    Ksum {
        k: usize,
        inner: Box<MatroidDoc>,
    },
    Extended {
        k: usize,
    },
}

impl MatroidDoc {
    pub fn build(&self, graph: &MixedHypergraph, copies: usize) -> Result<Matroid> {
        Ok(match self {
            MatroidDoc::Free => Matroid::free(copies),
            MatroidDoc::Uniform { r } => Matroid::uniform(copies, *r),
            MatroidDoc::Partition { blocks, capacities } => {
                if blocks.len() != capacities.len() {
                    return Err(Error::Invalid("one capacity per block is required".into()));
                }
                let mut block_of = vec![usize::MAX; copies];
                for (b, block) in blocks.iter().enumerate() {
                    for &e in block {
                        match block_of.get_mut(e) {
                            None => return Err(Error::UnknownElement(format!("root copy {e}"))),
                            Some(slot) if *slot != usize::MAX => {
                                return Err(Error::Invalid(format!("root copy {e} is in two blocks")))
                            }
                            Some(slot) => *slot = b,
                        }
                    }
                }
                if let Some(e) = block_of.iter().position(|&b| b == usize::MAX) {
                    return Err(Error::Invalid(format!("root copy {e} is in no block")));
                }
                Matroid::partition(block_of, capacities.clone())?
            }
            MatroidDoc::Explicit { independent_sets } => {
                let sets: Vec<ElementSet> = independent_sets
                    .iter()
                    .map(|s| {
                        s.iter()
                            .map(|&e| if e < copies { Ok(e) } else { Err(Error::UnknownElement(format!("root copy {e}"))) })
                            .collect()
                    })
                    .collect::<Result<_>>()?;
                Matroid::explicit(copies, &sets)?
            }
            MatroidDoc::Hypergraphic => Matroid::hypergraphic(graph.hyperedges().to_vec())?,
            MatroidDoc::Ksum { k, inner } => Matroid::k_sum(inner.build(graph, copies)?, *k),
            MatroidDoc::Extended { k } => Matroid::extended(graph, *k)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyperedgeDoc {
    pub tails: Vec<String>,
    pub head: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsDoc {
    #[serde(default)]
    pub f: BTreeMap<String, i64>,
    #[serde(default)]
    pub g: BTreeMap<String, i64>,
    #[serde(default)]
    pub k: i64,
    #[serde(default)]
    pub l: i64,
    #[serde(default)]
    pub lprime: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub vertices: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hyperedges: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dyperedges: Vec<DyperedgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<BTreeMap<String, usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matroid: Option<MatroidDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsDoc>,
    /// Values of a set function, indexed by vertex bitmask.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<i64>>,
}

/// A mixed hypergraph with the optional data the conditions and packings use.
#[derive(Debug, Clone)]
pub struct Instance {
    pub names: Vec<String>,
    pub graph: MixedHypergraph,
    pub roots: Option<RootMultiset>,
    pub matroid_doc: Option<MatroidDoc>,
    pub matroid: Option<Arc<Matroid>>,
    pub bounds: Option<Bounds>,
    pub h: Option<Vec<i64>>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.graph == other.graph
            && self.roots == other.roots
            && self.matroid_doc == other.matroid_doc
            && self.bounds == other.bounds
            && self.h == other.h
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("v{i}") })
        .collect()
}

impl Instance {
    /// An instance with vertices named `a, b, c, ...` and nothing attached.
    pub fn new(graph: MixedHypergraph) -> Self {
        Self { names: default_names(graph.n()), graph, roots: None, matroid_doc: None, matroid: None, bounds: None, h: None }
    }

    pub fn with_roots(mut self, counts: Vec<usize>) -> Result<Self> {
        if counts.len() != self.graph.n() {
            return Err(Error::Invalid("one root count per vertex is required".into()));
        }
        self.roots = Some(RootMultiset::new(counts)?);
        if let Some(doc) = self.matroid_doc.take() {
            self = self.with_matroid(doc)?;
        }
        Ok(self)
    }

    pub fn with_matroid(mut self, doc: MatroidDoc) -> Result<Self> {
        let copies = self.roots.as_ref().map_or(0, RootMultiset::len);
        self.matroid = Some(Arc::new(doc.build(&self.graph, copies)?));
        self.matroid_doc = Some(doc);
        Ok(self)
    }

    pub fn with_bounds(mut self, bounds: Bounds) -> Result<Self> {
        if bounds.f.len() != self.graph.n() {
            return Err(Error::Invalid("bounds must cover every vertex".into()));
        }
        self.bounds = Some(bounds);
        Ok(self)
    }

    pub fn with_h(mut self, h: Vec<i64>) -> Result<Self> {
        if h.len() != 1usize << self.graph.n() {
            return Err(Error::Invalid(format!("h needs {} values", 1usize << self.graph.n())));
        }
        self.h = Some(h);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn roots(&self) -> Result<&RootMultiset> {
        self.roots.as_ref().ok_or(Error::MissingField("roots"))
    }

    pub fn matroid(&self) -> Result<&Matroid> {
        self.matroid.as_deref().ok_or(Error::MissingField("matroid"))
    }

    pub fn bounds(&self) -> Result<&Bounds> {
        self.bounds.as_ref().ok_or(Error::MissingField("bounds"))
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn set_names(&self, set: VertexSet) -> Vec<String> {
        set.iter().map(|v| self.names[v].clone()).collect()
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownElement(format!("vertex `{name}`")))
    }

    pub fn vertex_set(&self, names: &[String]) -> Result<VertexSet> {
        names.iter().map(|n| self.vertex(n)).collect()
    }

    pub fn from_doc(doc: &InstanceDoc) -> Result<Self> {
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema_version {}", doc.schema_version)));
        }
        let n = doc.vertices.len();
        for (i, a) in doc.vertices.iter().enumerate() {
            if doc.vertices[..i].contains(a) {
                return Err(Error::Invalid(format!("vertex `{a}` listed twice")));
            }
        }
        let shell = Instance { names: doc.vertices.clone(), ..Instance::new(MixedHypergraph::new(n, vec![], vec![])?) };
        let hyperedges = doc.hyperedges.iter().map(|e| shell.vertex_set(e)).collect::<Result<Vec<_>>>()?;
        for (e, names) in hyperedges.iter().zip(&doc.hyperedges) {
            if e.len() != names.len() {
                return Err(Error::Invalid("hyperedge lists a vertex twice".into()));
            }
        }
        let dyperedges = doc
            .dyperedges
            .iter()
            .map(|d| Dyperedge::new(shell.vertex_set(&d.tails)?, shell.vertex(&d.head)?))
            .collect::<Result<Vec<_>>>()?;
        let mut inst = Instance { names: doc.vertices.clone(), ..Instance::new(MixedHypergraph::new(n, hyperedges, dyperedges)?) };
        if let Some(roots) = &doc.roots {
            let mut counts = vec![0; n];
            for (name, &c) in roots {
                counts[inst.vertex(name)?] += c;
            }
            inst = inst.with_roots(counts)?;
        }
        if let Some(m) = &doc.matroid {
            inst = inst.with_matroid(m.clone())?;
        }
        if let Some(b) = &doc.bounds {
            let per_vertex = |map: &BTreeMap<String, i64>| -> Result<Vec<i64>> {
                let mut out = vec![0; n];
                for (name, &x) in map {
                    out[inst.vertex(name)?] = x;
                }
                Ok(out)
            };
            let bounds = Bounds::new(per_vertex(&b.f)?, per_vertex(&b.g)?, b.k, b.l, b.lprime)?;
            inst = inst.with_bounds(bounds)?;
        }
        if let Some(h) = &doc.h {
            inst = inst.with_h(h.clone())?;
        }
        Ok(inst)
    }

    pub fn to_doc(&self) -> InstanceDoc {
        let names = |s: VertexSet| self.set_names(s);
        InstanceDoc {
            schema_version: SCHEMA_VERSION,
            vertices: self.names.clone(),
            hyperedges: self.graph.hyperedges().iter().map(|&e| names(e)).collect(),
            dyperedges: self
                .graph
                .dyperedges()
                .iter()
                .map(|d| DyperedgeDoc { tails: names(d.tails), head: self.names[d.head].clone() })
                .collect(),
            roots: self.roots.as_ref().map(|r| {
                r.counts()
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(v, &c)| (self.names[v].clone(), c))
                    .collect()
            }),
            matroid: self.matroid_doc.clone(),
            bounds: self.bounds.as_ref().map(|b| {
                let map = |xs: &[i64]| xs.iter().enumerate().map(|(v, &x)| (self.names[v].clone(), x)).collect();
                BoundsDoc { f: map(&b.f), g: map(&b.g), k: b.k, l: b.l, lprime: b.lprime }
            }),
            h: self.h.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InstanceDoc = serde_json::from_str(text)?;
        Self::from_doc(&doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("instance documents always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "vertices": ["a", "b", "c"],
        "hyperedges": [["a", "b"]],
        "dyperedges": [{"tails": ["b"], "head": "c"}, {"tails": ["a", "b"], "head": "c"}],
        "roots": {"a": 2},
        "matroid": {"kind": "partition", "blocks": [[0], [1]], "capacities": [1, 0]},
        "bounds": {"f": {"a": 1}, "g": {"a": 2, "b": 1}, "k": 2, "l": 1, "lprime": 2}
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let inst = Instance::from_json(SAMPLE).unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.graph.hyperedges().len(), 1);
        assert_eq!(inst.roots().unwrap().len(), 2);
        assert_eq!(inst.matroid().unwrap().rank(ElementSet::full(2)).unwrap(), 1);
        assert_eq!(inst.bounds().unwrap().g, vec![2, 1, 0]);
        let again = Instance::from_json(&inst.to_json()).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(Instance::from_json("{"), Err(Error::Parse(_))));
        assert!(Instance::from_json(r#"{"vertices": ["a"], "hyperedges": [["a", "z"]]}"#).is_err());
        assert!(Instance::from_json(r#"{"vertices": ["a", "a"]}"#).is_err());
        assert!(Instance::from_json(r#"{"vertices": ["a"], "schema_version": 9}"#).is_err());
        assert!(Instance::from_json(r#"{"vertices": ["a"], "h": [0]}"#).is_err());
        assert!(Instance::from_json(r#"{"vertices": ["a"], "roots": {"a": 1},
            "matroid": {"kind": "explicit", "independent_sets": [[0]]}}"#)
        .is_err());
    }

    #[test]
    fn missing_fields_are_reported() {
        let inst = Instance::from_json(r#"{"vertices": ["a"]}"#).unwrap();
        assert_eq!(inst.roots().unwrap_err(), Error::MissingField("roots"));
        assert_eq!(inst.bounds().unwrap_err(), Error::MissingField("bounds"));
    }
}
