//! JSON file formats: `.shg` structures, `.grp` groups, `.act` actions and
//! homomorphism map files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use shg_core::group::GroupAction;
use shg_core::{
    Elem, FiniteGroup, FiniteSemihypergroup, GroupError, Measure, Rational, StructureError,
};
use thiserror::Error;

/// `.shg`: weights are quoted rationals, `"p/q"` or an integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub name: String,
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<String>,
    pub table: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
}

/// `.grp`: a dense Cayley table keyed by element names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    #[serde(default = "default_group_name")]
    pub name: String,
    pub elements: Vec<String>,
    pub table: BTreeMap<String, BTreeMap<String, String>>,
}

fn default_group_name() -> String {
    "G".to_string()
}

/// `.act`: the acting group inline, and `action[h][x] = π(h, x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    pub actors: GroupFile,
    pub action: BTreeMap<String, BTreeMap<String, String>>,
}

/// Homomorphism maps, one name-to-name object per factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub maps: Vec<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FileError {
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("table has no entry for the pair ({x}, {y})")]
    MissingEntry { x: String, y: String },
    #[error("unknown element `{name}` in {place}")]
    UnknownElement { name: String, place: String },
    #[error("weight `{weight}` for ({x}, {y}) -> {z} is not a rational: {reason}")]
    BadWeight {
        x: String,
        y: String,
        z: String,
        weight: String,
        reason: String,
    },
    #[error("{0}")]
    Shape(String),
    #[error("declared identity `{declared}` does not match the table ({found})")]
    IdentityMismatch { declared: String, found: String },
    #[error("axiom violation: {0}")]
    Axioms(String),
    #[error("{0}")]
    Group(String),
}

impl FileError {
    /// 1 for mathematical failures, 2 for everything malformed.
    pub fn exit_code(&self) -> i32 {
        match self {
            FileError::IdentityMismatch { .. } | FileError::Axioms(_) | FileError::Group(_) => 1,
            _ => 2,
        }
    }
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FileError> {
    serde_json::from_str(text).map_err(|e| FileError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e
            .to_string()
            .split(" at line")
            .next()
            .unwrap_or_default()
            .to_string(),
    })
}

pub fn read_file(path: &str) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|e| FileError::Io {
        path: path.to_string(),
        reason: e.to_string(),
    })
}

fn structure_error(e: StructureError) -> FileError {
    FileError::Shape(e.to_string())
}

fn index_in(
    elements: &[String],
    name: &str,
    place: impl FnOnce() -> String,
) -> Result<Elem, FileError> {
    elements
        .iter()
        .position(|e| e == name)
        .ok_or_else(|| FileError::UnknownElement {
            name: name.to_string(),
            place: place(),
        })
}

fn check_keys<'a, V>(
    elements: &[String],
    keys: impl Iterator<Item = (&'a String, V)>,
    place: impl Fn() -> String,
) -> Result<(), FileError> {
    for (k, _) in keys {
        index_in(elements, k, &place)?;
    }
    Ok(())
}

/// Parses a `.shg` document. Shape, names and weights are always validated;
/// the axioms only when `check_axioms` is set.
pub fn parse_structure(text: &str, check_axioms: bool) -> Result<FiniteSemihypergroup, FileError> {
    let file: StructureFile = from_json(text)?;
    let els = &file.elements;
    check_keys(els, file.table.iter(), || "table rows".to_string())?;
    let mut rows = Vec::with_capacity(els.len());
    for x in els {
        let row = file.table.get(x).ok_or_else(|| FileError::MissingEntry {
            x: x.clone(),
            y: els.first().cloned().unwrap_or_default(),
        })?;
        check_keys(els, row.iter(), || format!("row `{x}`"))?;
        let mut out = Vec::with_capacity(els.len());
        for y in els {
            let entry = row.get(y).ok_or_else(|| FileError::MissingEntry {
                x: x.clone(),
                y: y.clone(),
            })?;
            let mut terms = Vec::with_capacity(entry.len());
            for (z, weight) in entry {
                let zi = index_in(els, z, || format!("entry ({x}, {y})"))?;
                let w: Rational = weight.parse().map_err(|e: shg_core::ParseRationalError| {
                    FileError::BadWeight {
                        x: x.clone(),
                        y: y.clone(),
                        z: z.clone(),
                        weight: weight.clone(),
                        reason: e.to_string(),
                    }
                })?;
                terms.push((zi, w));
            }
            out.push(Measure::from_terms(terms));
        }
        rows.push(out);
    }
    let k = FiniteSemihypergroup::from_table(file.name.clone(), els.clone(), rows)
        .map_err(structure_error)?;
    if let Some(declared) = &file.identity {
        index_in(els, declared, || "identity".to_string())?;
        let found = k.identity().map(|e| k.element_name(e));
        if found != Some(declared.as_str()) {
            return Err(FileError::IdentityMismatch {
                declared: declared.clone(),
                found: found.map_or("no identity".to_string(), |f| format!("identity is `{f}`")),
            });
        }
    }
    if check_axioms {
        let report = k.verify_axioms();
        if let Some(v) = report.violations.first() {
            return Err(FileError::Axioms(v.describe(&k)));
        }
    }
    Ok(k)
}

pub fn structure_file(k: &FiniteSemihypergroup) -> StructureFile {
    let table = k
        .named_table()
        .into_iter()
        .map(|(x, row)| {
            let row = row
                .into_iter()
                .map(|(y, m)| {
                    let entry = m.iter().map(|(z, w)| (z.clone(), w.to_string())).collect();
                    (y.to_string(), entry)
                })
                .collect();
            (x.to_string(), row)
        })
        .collect();
    StructureFile {
        name: k.name().to_string(),
        elements: k.elements().to_vec(),
        identity: k.identity().map(|e| k.element_name(e).to_string()),
        table,
    }
}

/// Pretty JSON with a trailing newline; key order is deterministic.
pub fn emit_structure(k: &FiniteSemihypergroup) -> String {
    let mut s = serde_json::to_string_pretty(&structure_file(k)).expect("plain data serializes");
    s.push('\n');
    s
}

fn cayley(file: &GroupFile) -> Result<Vec<Vec<Elem>>, FileError> {
    let els = &file.elements;
    check_keys(els, file.table.iter(), || "table rows".to_string())?;
    els.iter()
        .map(|x| {
            let row = file.table.get(x).ok_or_else(|| FileError::MissingEntry {
                x: x.clone(),
                y: els.first().cloned().unwrap_or_default(),
            })?;
            check_keys(els, row.iter(), || format!("row `{x}`"))?;
            els.iter()
                .map(|y| {
                    let z = row.get(y).ok_or_else(|| FileError::MissingEntry {
                        x: x.clone(),
                        y: y.clone(),
                    })?;
                    index_in(els, z, || format!("entry ({x}, {y})"))
                })
                .collect()
        })
        .collect()
}

fn group_error(e: GroupError) -> FileError {
    match e {
        GroupError::Empty
        | GroupError::DuplicateElement(_)
        | GroupError::TableShape { .. }
        | GroupError::UnknownElement(_) => FileError::Shape(e.to_string()),
        other => FileError::Group(other.to_string()),
    }
}

/// Name, element names and Cayley indices.
pub type RawCayley = (String, Vec<String>, Vec<Vec<Elem>>);

/// A `.grp` document without the group checks, for semigroups.
pub fn parse_cayley(text: &str) -> Result<RawCayley, FileError> {
    let file: GroupFile = from_json(text)?;
    let table = cayley(&file)?;
    Ok((file.name, file.elements, table))
}

fn group_from_file(file: &GroupFile) -> Result<FiniteGroup, FileError> {
    let table = cayley(file)?;
    FiniteGroup::from_cayley(file.name.clone(), file.elements.clone(), table).map_err(group_error)
}

pub fn parse_group(text: &str) -> Result<FiniteGroup, FileError> {
    group_from_file(&from_json(text)?)
}

pub fn group_file(g: &FiniteGroup) -> GroupFile {
    let els = g.elements();
    let table = (0..g.order())
        .map(|x| {
            let row = (0..g.order())
                .map(|y| (els[y].clone(), els[g.mul(x, y)].clone()))
                .collect();
            (els[x].clone(), row)
        })
        .collect();
    GroupFile {
        name: g.name().to_string(),
        elements: els.to_vec(),
        table,
    }
}

pub fn parse_action(text: &str, space: FiniteGroup) -> Result<GroupAction, FileError> {
    let file: ActionFile = from_json(text)?;
    let actors = group_from_file(&file.actors)?;
    let hs = actors.elements().to_vec();
    let xs = space.elements().to_vec();
    check_keys(&hs, file.action.iter(), || "action rows".to_string())?;
    let mut table = Vec::with_capacity(hs.len());
    for h in &hs {
        let row = file.action.get(h).ok_or_else(|| FileError::MissingEntry {
            x: h.clone(),
            y: xs.first().cloned().unwrap_or_default(),
        })?;
        check_keys(&xs, row.iter(), || format!("action row `{h}`"))?;
        let mut out = Vec::with_capacity(xs.len());
        for x in &xs {
            let y = row.get(x).ok_or_else(|| FileError::MissingEntry {
                x: h.clone(),
                y: x.clone(),
            })?;
            out.push(index_in(&xs, y, || format!("action entry ({h}, {x})"))?);
        }
        table.push(out);
    }
    GroupAction::new(actors, space, table).map_err(group_error)
}

/// Resolves each factor's name map to indices into `target`.
pub fn parse_maps(
    text: &str,
    factors: &[FiniteSemihypergroup],
    target: &FiniteSemihypergroup,
) -> Result<Vec<Vec<Elem>>, FileError> {
    let file: MapFile = from_json(text)?;
    if file.maps.len() != factors.len() {
        return Err(FileError::Shape(format!(
            "map file has {} maps but there are {} factors",
            file.maps.len(),
            factors.len()
        )));
    }
    file.maps
        .iter()
        .zip(factors)
        .enumerate()
        .map(|(i, (map, k))| {
            check_keys(k.elements(), map.iter(), || format!("map {}", i + 1))?;
            k.elements()
                .iter()
                .map(|x| {
                    let y = map.get(x).ok_or_else(|| {
                        FileError::Shape(format!("map {} has no image for `{x}`", i + 1))
                    })?;
                    index_in(target.elements(), y, || format!("map {} (target)", i + 1))
                })
                .collect()
        })
        .collect()
}
