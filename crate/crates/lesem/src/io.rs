//! Context CSV, graph JSON, frame JSON and valuation JSON.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::Valuation;
use crate::bitset::BitSet;
use crate::correspondence::AnyFrame;
use crate::error::{Error, Result};
use crate::graph::GraphFrame;
use crate::lattice::{ConceptLattice, Polarity};
use crate::polarity::PolarityFrame;
use crate::relation::{sides, Relation, Side};
use crate::representation::ReflexiveGraph;
use crate::syntax::{Connective, Family, Signature, Tone};

/// Reads a context: a header row of attribute names after one blank cell, then one row
/// per object. Cells `1`/`X` mark incidence, `0`/empty its absence.
pub fn load_context(text: &str) -> Result<Polarity> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = rdr.records();
    let Some(header) = records.next() else {
        return Polarity::from_rows(vec![], vec![], vec![]);
    };
    let header = header?;
    let attributes: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut objects = Vec::new();
    let mut rows = Vec::new();
    for (line, rec) in records.enumerate() {
        let rec = rec?;
        if rec.len() != attributes.len() + 1 {
            return Err(Error::Invalid(format!(
                "context row {} has {} cells, expected {}",
                line + 2,
                rec.len(),
                attributes.len() + 1
            )));
        }
        objects.push(rec[0].to_string());
        let mut row = BitSet::empty(attributes.len());
        for (x, cell) in rec.iter().skip(1).enumerate() {
            match cell {
                "1" | "X" | "x" => {
                    row.insert(x);
                }
                "0" | "" => {}
                other => {
                    return Err(Error::Invalid(format!(
                        "context row {} has cell `{other}`; expected 1, 0, X or blank",
                        line + 2
                    )))
                }
            }
        }
        rows.push(row);
    }
    Polarity::from_rows(objects, attributes, rows)
}

pub fn save_context(p: &Polarity) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![String::new()];
    header.extend(p.attributes().iter().cloned());
    w.write_record(&header)?;
    for a in 0..p.num_objects() {
        let mut rec = vec![p.objects()[a].clone()];
        rec.extend((0..p.num_attributes()).map(|x| if p.incident(a, x) { "1" } else { "0" }.to_string()));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    nodes: Vec<String>,
    edges: Vec<(String, String)>,
}

/// A loaded graph plus one warning per self-loop that had to be added.
pub fn load_graph(text: &str) -> Result<(ReflexiveGraph, Vec<String>)> {
    let g: GraphJson = serde_json::from_str(text)?;
    graph_from_parts(g.nodes, g.edges)
}

fn graph_from_parts(nodes: Vec<String>, edges: Vec<(String, String)>) -> Result<(ReflexiveGraph, Vec<String>)> {
    let (g, added) = ReflexiveGraph::with_self_loops(nodes, edges)?;
    let warnings = added.into_iter().map(|z| format!("added self-loop at `{z}`")).collect();
    Ok((g, warnings))
}

fn edge_list(g: &ReflexiveGraph) -> Vec<(String, String)> {
    g.edges()
        .into_iter()
        .map(|(a, b)| (g.nodes()[a].clone(), g.nodes()[b].clone()))
        .collect()
}

pub fn save_graph(g: &ReflexiveGraph) -> Result<String> {
    Ok(serde_json::to_string_pretty(&GraphJson {
        nodes: g.nodes().to_vec(),
        edges: edge_list(g),
    })?)
}

#[derive(Clone, Serialize, Deserialize)]
struct ConnectiveJson {
    name: String,
    order_type: Vec<Tone>,
}

#[derive(Clone, Serialize, Deserialize)]
struct FamilyConnectiveJson {
    name: String,
    family: String,
    order_type: Vec<Tone>,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum SignatureJson {
    Named(String),
    List(Vec<FamilyConnectiveJson>),
    Split {
        #[serde(default)]
        f: Vec<ConnectiveJson>,
        #[serde(default)]
        g: Vec<ConnectiveJson>,
    },
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum RelationJson {
    Tuples(Vec<Vec<String>>),
    Typed {
        order_type: Vec<Tone>,
        tuples: Vec<Vec<String>>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    objects: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    attributes: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    incidence: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nodes: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    signature: Option<SignatureJson>,
    #[serde(default)]
    relations: BTreeMap<String, RelationJson>,
}

fn signature_from_json(s: Option<SignatureJson>, relations: &BTreeMap<String, RelationJson>) -> Result<Signature> {
    let conn = |name: &str, family, tones: &[Tone]| Connective::new(name, family, tones);
    match s {
        // without a declaration, relation names must be built-ins
        None => {
            let cs = relations
                .keys()
                .map(|k| {
                    Signature::builtin(k).ok_or_else(|| {
                        Error::Invalid(format!("connective `{k}` is not built in and no signature is declared"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Signature::new(cs)
        }
        Some(SignatureJson::Named(n)) if n == "dml" => Ok(Signature::dml()),
        Some(SignatureJson::Named(n)) => Err(Error::Invalid(format!("unknown signature name `{n}`"))),
        Some(SignatureJson::Split { f, g }) => Signature::new(
            f.iter()
                .map(|c| conn(&c.name, Family::F, &c.order_type))
                .chain(g.iter().map(|c| conn(&c.name, Family::G, &c.order_type)))
                .collect(),
        ),
        Some(SignatureJson::List(cs)) => Signature::new(
            cs.iter()
                .map(|c| {
                    let fam = match c.family.as_str() {
                        "f" | "F" => Family::F,
                        "g" | "G" => Family::G,
                        other => return Err(Error::Invalid(format!("unknown family `{other}`"))),
                    };
                    Ok(conn(&c.name, fam, &c.order_type))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
    }
}

fn signature_to_json(sig: &Signature) -> SignatureJson {
    if sig.is_dml() && *sig == Signature::dml() {
        return SignatureJson::Named("dml".into());
    }
    let cs = sig.connectives();
    let split_point = cs.iter().take_while(|c| c.family == Family::F).count();
    let in_split_order = cs[split_point..].iter().all(|c| c.family == Family::G);
    let plain = |c: &Connective| ConnectiveJson {
        name: c.name.clone(),
        order_type: c.tones.clone(),
    };
    if in_split_order {
        SignatureJson::Split {
            f: cs[..split_point].iter().map(plain).collect(),
            g: cs[split_point..].iter().map(plain).collect(),
        }
    } else {
        SignatureJson::List(
            cs.iter()
                .map(|c| FamilyConnectiveJson {
                    name: c.name.clone(),
                    family: if c.family == Family::F { "f" } else { "g" }.into(),
                    order_type: c.tones.clone(),
                })
                .collect(),
        )
    }
}

/// Resolves named tuples against per-coordinate name lists; output coordinate first.
fn relation_from_json(
    c: &Connective,
    rel: Option<&RelationJson>,
    coords: &[&[String]],
) -> Result<Relation> {
    let dims: Vec<usize> = coords.iter().map(|n| n.len()).collect();
    let Some(rel) = rel else {
        return Ok(Relation::empty(&dims));
    };
    let tuples = match rel {
        RelationJson::Tuples(t) => t,
        RelationJson::Typed { order_type, tuples } => {
            if *order_type != c.tones {
                return Err(Error::Invalid(format!(
                    "order type given for `{}` does not match its signature",
                    c.name
                )));
            }
            tuples
        }
    };
    let mut r = Relation::empty(&dims);
    for t in tuples {
        if t.len() != dims.len() {
            return Err(Error::Arity {
                name: c.name.clone(),
                expected: dims.len(),
                found: t.len(),
            });
        }
        let ix = t
            .iter()
            .zip(coords)
            .map(|(name, names)| {
                names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownIdentifier {
                    kind: "relation element",
                    name: name.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        r.insert(&ix);
    }
    Ok(r)
}

fn relation_to_json(c: &Connective, r: &Relation, coords: &[&[String]]) -> RelationJson {
    let tuples = r
        .tuples()
        .into_iter()
        .map(|t| t.iter().zip(coords).map(|(&i, names)| names[i].clone()).collect())
        .collect();
    if Signature::builtin(&c.name).is_some() {
        RelationJson::Tuples(tuples)
    } else {
        RelationJson::Typed {
            order_type: c.tones.clone(),
            tuples,
        }
    }
}

fn side_names(p: &Polarity, c: &Connective) -> Vec<Vec<String>> {
    sides(c)
        .into_iter()
        .map(|s: Side| s.names(p).to_vec())
        .collect()
}

/// A frame read from JSON plus normalisation warnings.
#[derive(Clone, Debug)]
pub struct LoadedFrame {
    pub frame: AnyFrame,
    pub warnings: Vec<String>,
}

/// Reads a polarity or graph frame; incompatible relations are rejected.
pub fn load_frame(text: &str) -> Result<LoadedFrame> {
    load_frame_with(text, true)
}

/// As [`load_frame`], optionally skipping the compatibility check.
pub fn load_frame_with(text: &str, checked: bool) -> Result<LoadedFrame> {
    let fj: FrameJson = serde_json::from_str(text)?;
    let sig = signature_from_json(fj.signature.clone(), &fj.relations)?;
    if let Some(k) = fj.relations.keys().find(|k| !sig.contains(k)) {
        return Err(Error::UnknownConnective(k.clone()));
    }
    match fj.kind.as_str() {
        "polarity" => {
            let p = Polarity::new(
                fj.objects.unwrap_or_default(),
                fj.attributes.unwrap_or_default(),
                fj.incidence.unwrap_or_default(),
            )?;
            let rels = sig
                .connectives()
                .iter()
                .map(|c| {
                    let names = side_names(&p, c);
                    let coords: Vec<&[String]> = names.iter().map(Vec::as_slice).collect();
                    relation_from_json(c, fj.relations.get(&c.name), &coords)
                })
                .collect::<Result<Vec<_>>>()?;
            let f = if checked {
                PolarityFrame::new(p, sig, rels)?
            } else {
                PolarityFrame::new_unchecked(p, sig, rels)?
            };
            Ok(LoadedFrame {
                frame: AnyFrame::Polarity(f),
                warnings: vec![],
            })
        }
        "graph" => {
            let (g, warnings) = graph_from_parts(fj.nodes.unwrap_or_default(), fj.edges.unwrap_or_default())?;
            let rels = sig
                .connectives()
                .iter()
                .map(|c| {
                    let coords = vec![g.nodes(); c.arity() + 1];
                    relation_from_json(c, fj.relations.get(&c.name), &coords)
                })
                .collect::<Result<Vec<_>>>()?;
            let f = if checked {
                GraphFrame::new(g, sig, rels)?
            } else {
                GraphFrame::new_unchecked(g, sig, rels)?
            };
            Ok(LoadedFrame {
                frame: AnyFrame::Graph(f),
                warnings,
            })
        }
        other => Err(Error::Invalid(format!("unknown frame kind `{other}`"))),
    }
}

pub fn save_frame(f: &AnyFrame) -> Result<String> {
    let sig = f.signature();
    let mut relations = BTreeMap::new();
    let fj = match f {
        AnyFrame::Polarity(fr) => {
            let p = fr.polarity();
            for (c, r) in sig.connectives().iter().zip(fr.relations()) {
                let names = side_names(p, c);
                let coords: Vec<&[String]> = names.iter().map(Vec::as_slice).collect();
                relations.insert(c.name.clone(), relation_to_json(c, r, &coords));
            }
            FrameJson {
                kind: "polarity".into(),
                objects: Some(p.objects().to_vec()),
                attributes: Some(p.attributes().to_vec()),
                incidence: Some(
                    p.incidence_pairs()
                        .into_iter()
                        .map(|(a, x)| (p.objects()[a].clone(), p.attributes()[x].clone()))
                        .collect(),
                ),
                nodes: None,
                edges: None,
                signature: Some(signature_to_json(sig)),
                relations,
            }
        }
        AnyFrame::Graph(gf) => {
            let g = gf.graph();
            for (c, r) in sig.connectives().iter().zip(gf.relations()) {
                let coords = vec![g.nodes(); c.arity() + 1];
                relations.insert(c.name.clone(), relation_to_json(c, r, &coords));
            }
            FrameJson {
                kind: "graph".into(),
                objects: None,
                attributes: None,
                incidence: None,
                nodes: Some(g.nodes().to_vec()),
                edges: Some(edge_list(g)),
                signature: Some(signature_to_json(sig)),
                relations,
            }
        }
    };
    Ok(serde_json::to_string_pretty(&fj)?)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConceptJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    extent: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    intent: Option<Vec<String>>,
}

/// Reads `{"p": {"extent": [...]}}` (or `"intent"`); sets that are not Galois-stable are rejected.
pub fn load_valuation(text: &str, l: &ConceptLattice) -> Result<Valuation> {
    let m: BTreeMap<String, ConceptJson> = serde_json::from_str(text)?;
    let p = l.polarity();
    let mut v = Valuation::new();
    for (letter, cj) in m {
        let by_ext = match &cj.extent {
            Some(e) => Some(l.index_of_extent(&p.object_set(e)?).ok_or_else(|| {
                Error::Invalid(format!("extent given for `{letter}` is not Galois-stable"))
            })?),
            None => None,
        };
        let by_int = match &cj.intent {
            Some(i) => Some(l.index_of_intent(&p.attribute_set(i)?).ok_or_else(|| {
                Error::Invalid(format!("intent given for `{letter}` is not Galois-stable"))
            })?),
            None => None,
        };
        let c = match (by_ext, by_int) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Invalid(format!("extent and intent for `{letter}` do not form a concept")))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(Error::Invalid(format!("`{letter}` needs an extent or an intent"))),
        };
        v.insert(&letter, c);
    }
    Ok(v)
}

pub fn save_valuation(v: &Valuation, l: &ConceptLattice) -> Result<String> {
    v.check(l.len())?;
    let m: BTreeMap<&str, ConceptJson> = v
        .iter()
        .map(|(k, c)| {
            (
                k,
                ConceptJson {
                    extent: Some(l.polarity().object_names(l.extent(c))),
                    intent: None,
                },
            )
        })
        .collect();
    Ok(serde_json::to_string_pretty(&m)?)
}
