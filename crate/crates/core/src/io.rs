//! JSON file formats for instances, graphs and iteration assignments.
//!
//! ```json
//! {"n": 3, "edges": [[1, 2]]}
//! {"q": 2, "P": [1, 1, 2, 2, 2]}
//! {"ground": ["a", "b"], "agents": [["a"], ["b"]],
//!  "objective": {"kind": "cover", "targets": [{"id": "y1", "weight": "1/2"}],
//!                "covers": {"a": ["y1"], "b": ["y1"]}}}
//! ```
//!
//! Rationals are JSON integers or strings `"p/q"`. Instance documents may
//! carry an embedded `graph`, a `predicted_ratio` and a `bound_ref`, as
//! written for witness instances.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::adversarial::WitnessInstance;
use crate::objective::{AgentSpace, Objective, SetFunction};
use crate::rational::{Exact, Rational};
use crate::structure::{validate_assignment, InformationGraph, IterationAssignment};
use crate::{ElementSet, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(rename = "P", alias = "assignment")]
    pub levels: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetDoc {
    pub id: String,
    pub weight: Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ObjectiveDoc {
    Tabular {
        values: Vec<Exact>,
    },
    Cover {
        targets: Vec<TargetDoc>,
        covers: BTreeMap<String, Vec<String>>,
    },
    CurvatureWitness {
        lambda: Exact,
        u: Vec<String>,
        v: Vec<String>,
    },
    PAdditiveWitness {
        p: u32,
        u: Vec<String>,
        v: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub ground: Vec<String>,
    pub agents: Vec<Vec<String>>,
    pub objective: ObjectiveDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_ratio: Option<Exact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_ref: Option<String>,
}

/// A loaded instance with whatever witness annotations it carried.
#[derive(Debug, Clone)]
pub struct Instance {
    pub f: SetFunction,
    pub x: AgentSpace,
    pub graph: Option<InformationGraph>,
    pub predicted_ratio: Option<Rational>,
    pub bound_ref: Option<String>,
}

fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { "document".to_string() } else { path };
        Error::input(field, e.into_inner().to_string())
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::input("path", format!("{}: {e}", path.display())))
}

pub fn graph_from_doc(doc: &GraphDoc) -> Result<InformationGraph> {
    InformationGraph::new(doc.n, doc.edges.iter().map(|e| (e[0], e[1])))
}

pub fn graph_to_doc(g: &InformationGraph) -> GraphDoc {
    GraphDoc {
        n: g.n(),
        edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
    }
}

pub fn assignment_from_doc(doc: &AssignmentDoc) -> Result<IterationAssignment> {
    let q = doc.q.unwrap_or_else(|| doc.levels.iter().copied().max().unwrap_or(1));
    let p = IterationAssignment::new(q, doc.levels.clone());
    validate_assignment(&p).map_err(|v| Error::input("P", v.to_string()))?;
    Ok(p)
}

pub fn assignment_to_doc(p: &IterationAssignment) -> AssignmentDoc {
    AssignmentDoc {
        q: Some(p.q()),
        levels: p.levels().to_vec(),
    }
}

fn ids_to_set(index: &HashMap<&str, usize>, ids: &[String], field: &str) -> Result<ElementSet> {
    ids.iter().try_fold(ElementSet::EMPTY, |s, id| {
        index
            .get(id.as_str())
            .map(|&i| s.with(i))
            .ok_or_else(|| Error::input(field, format!("unknown element id `{id}`")))
    })
}

pub fn instance_from_doc(doc: &InstanceDoc) -> Result<Instance> {
    let index: HashMap<&str, usize> = doc.ground.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
    let ground = doc.ground.clone();
    let f = match &doc.objective {
        ObjectiveDoc::Tabular { values } => SetFunction::tabular(ground, values.iter().map(|v| v.0).collect())?,
        ObjectiveDoc::Cover { targets, covers } => {
            for id in covers.keys() {
                if !index.contains_key(id.as_str()) {
                    return Err(Error::input("objective.covers", format!("unknown element id `{id}`")));
                }
            }
            let lists = doc
                .ground
                .iter()
                .map(|id| covers.get(id).cloned().unwrap_or_default())
                .collect();
            let targets = targets.iter().map(|t| (t.id.clone(), t.weight.0)).collect();
            SetFunction::cover(ground, targets, lists)?
        }
        ObjectiveDoc::CurvatureWitness { lambda, u, v } => SetFunction::curvature_witness(
            ground,
            lambda.0,
            ids_to_set(&index, u, "objective.u")?,
            ids_to_set(&index, v, "objective.v")?,
        )?,
        ObjectiveDoc::PAdditiveWitness { p, u, v } => SetFunction::p_additive_witness(
            ground,
            *p,
            ids_to_set(&index, u, "objective.u")?,
            ids_to_set(&index, v, "objective.v")?,
        )?,
    };
    let mut owner: HashMap<&str, usize> = HashMap::new();
    for (agent, ids) in doc.agents.iter().enumerate() {
        for id in ids {
            if let Some(first) = owner.insert(id.as_str(), agent + 1) {
                return Err(Error::input(
                    "agents",
                    format!(
                        "partition violated: element `{id}` is listed by agents {first} and {}",
                        agent + 1
                    ),
                ));
            }
        }
    }
    let x = AgentSpace::new(&f, &doc.agents)?;
    let graph = doc.graph.as_ref().map(graph_from_doc).transpose()?;
    if let Some(g) = &graph {
        if g.n() != x.n() {
            return Err(Error::input(
                "graph.n",
                format!("graph has {} vertices but there are {} agents", g.n(), x.n()),
            ));
        }
    }
    Ok(Instance {
        f,
        x,
        graph,
        predicted_ratio: doc.predicted_ratio.map(|r| r.0),
        bound_ref: doc.bound_ref.clone(),
    })
}

fn set_ids(f: &SetFunction, set: ElementSet) -> Vec<String> {
    f.ids(set)
}

pub fn instance_to_doc(f: &SetFunction, x: &AgentSpace) -> InstanceDoc {
    let objective = match f.objective() {
        Objective::Tabular { values } => ObjectiveDoc::Tabular {
            values: values.iter().map(|&v| v.into()).collect(),
        },
        Objective::Cover {
            targets,
            weights,
            covers,
        } => ObjectiveDoc::Cover {
            targets: targets
                .iter()
                .zip(weights)
                .map(|(id, &w)| TargetDoc {
                    id: id.clone(),
                    weight: w.into(),
                })
                .collect(),
            covers: f
                .ground()
                .iter()
                .zip(covers)
                .map(|(e, &mask)| {
                    let list = (0..targets.len())
                        .filter(|t| mask >> t & 1 == 1)
                        .map(|t| targets[t].clone())
                        .collect();
                    (e.clone(), list)
                })
                .collect(),
        },
        Objective::CurvatureWitness { lambda, u, v } => ObjectiveDoc::CurvatureWitness {
            lambda: (*lambda).into(),
            u: set_ids(f, *u),
            v: set_ids(f, *v),
        },
        Objective::PAdditiveWitness { p, u, v } => ObjectiveDoc::PAdditiveWitness {
            p: *p,
            u: set_ids(f, *u),
            v: set_ids(f, *v),
        },
    };
    InstanceDoc {
        ground: f.ground().to_vec(),
        agents: (0..x.n())
            .map(|i| x.decisions(i).iter().map(|&e| f.ground()[e].clone()).collect())
            .collect(),
        objective,
        graph: None,
        predicted_ratio: None,
        bound_ref: None,
    }
}

pub fn witness_to_doc(w: &WitnessInstance) -> InstanceDoc {
    InstanceDoc {
        graph: Some(graph_to_doc(&w.g)),
        predicted_ratio: Some(w.predicted_ratio.into()),
        bound_ref: Some(w.bound_ref.as_str().to_string()),
        ..instance_to_doc(&w.f, &w.x)
    }
}

pub fn parse_graph(text: &str) -> Result<InformationGraph> {
    graph_from_doc(&parse_json(text)?)
}

pub fn parse_assignment(text: &str) -> Result<IterationAssignment> {
    assignment_from_doc(&parse_json(text)?)
}

/// Instance document with the objective left unparsed, so that errors inside
/// it can be reported with their full path (tagged enums lose it).
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstanceDoc {
    ground: Vec<String>,
    agents: Vec<Vec<String>>,
    objective: serde_json::Value,
    #[serde(default)]
    graph: Option<GraphDoc>,
    #[serde(default)]
    predicted_ratio: Option<Exact>,
    #[serde(default)]
    bound_ref: Option<String>,
}

fn parse_objective(value: serde_json::Value) -> Result<ObjectiveDoc> {
    let kind = value
        .get("kind")
        .and_then(|k| k.as_str())
        .map(str::to_string)
        .ok_or_else(|| Error::input("objective.kind", "missing or not a string"))?;
    if !["tabular", "cover", "curvature-witness", "p-additive-witness"].contains(&kind.as_str()) {
        return Err(Error::input(
            "objective.kind",
            format!("unknown objective kind `{kind}`"),
        ));
    }
    let mut fields = value;
    if let Some(map) = fields.as_object_mut() {
        map.remove("kind");
    }
    let prefix = |e: serde_path_to_error::Error<serde_json::Error>| {
        let path = e.path().to_string();
        let field = if path == "." {
            "objective".to_string()
        } else {
            format!("objective.{path}")
        };
        Error::input(field, e.into_inner().to_string())
    };
    match kind.as_str() {
        "tabular" => serde_path_to_error::deserialize::<_, TabularFields>(fields)
            .map(|t| ObjectiveDoc::Tabular { values: t.values }),
        "cover" => serde_path_to_error::deserialize::<_, CoverFields>(fields).map(|c| ObjectiveDoc::Cover {
            targets: c.targets,
            covers: c.covers,
        }),
        "curvature-witness" => {
            serde_path_to_error::deserialize::<_, CurvatureFields>(fields).map(|c| ObjectiveDoc::CurvatureWitness {
                lambda: c.lambda,
                u: c.u,
                v: c.v,
            })
        }
        _ => serde_path_to_error::deserialize::<_, PAdditiveFields>(fields).map(|c| ObjectiveDoc::PAdditiveWitness {
            p: c.p,
            u: c.u,
            v: c.v,
        }),
    }
    .map_err(prefix)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TabularFields {
    values: Vec<Exact>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverFields {
    targets: Vec<TargetDoc>,
    covers: BTreeMap<String, Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurvatureFields {
    lambda: Exact,
    u: Vec<String>,
    v: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PAdditiveFields {
    p: u32,
    u: Vec<String>,
    v: Vec<String>,
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let raw: RawInstanceDoc = parse_json(text)?;
    let doc = InstanceDoc {
        ground: raw.ground,
        agents: raw.agents,
        objective: parse_objective(raw.objective)?,
        graph: raw.graph,
        predicted_ratio: raw.predicted_ratio,
        bound_ref: raw.bound_ref,
    };
    instance_from_doc(&doc)
}

pub fn load_graph(path: &Path) -> Result<InformationGraph> {
    parse_graph(&read(path)?)
}

pub fn load_assignment(path: &Path) -> Result<IterationAssignment> {
    parse_assignment(&read(path)?)
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    parse_instance(&read(path)?)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}
