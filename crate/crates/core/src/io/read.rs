use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use serde_json::Value;

use crate::charfn::PureState;
use crate::deciders::{Outcome, PdFunction};
use crate::error::{Error, Result};
use crate::group::{Builtin, FiniteGroup, Group, GroupElement, Quaternion};
use crate::linalg::{c, CMat, CVec};
use crate::rep::{IrrepTable, UnitaryRep};

/// JSON value with its location, for error messages naming the offending key.
#[derive(Clone, Copy)]
struct Node<'a> {
    v: &'a Value,
    path: &'a str,
}

fn fail<T>(path: &str, msg: impl std::fmt::Display) -> Result<T> {
    Err(Error::Format(format!("{path}: {msg}")))
}

impl<'a> Node<'a> {
    fn field(&self, key: &str, storage: &'a mut String) -> Result<Node<'a>> {
        let obj = self.v.as_object().ok_or_else(|| Error::Format(format!("{}: expected an object", self.path)))?;
        *storage = format!("{}.{key}", self.path);
        let path: &'a String = storage;
        match obj.get(key) {
            Some(v) => Ok(Node { v, path }),
            None => fail(path, "missing field"),
        }
    }

    fn has(&self, key: &str) -> bool {
        self.v.get(key).is_some()
    }

    fn u64(&self) -> Result<u64> {
        self.v.as_u64().map_or_else(|| fail(self.path, "expected a non-negative integer"), Ok)
    }

    fn f64(&self) -> Result<f64> {
        self.v.as_f64().map_or_else(|| fail(self.path, "expected a number"), Ok)
    }

    fn str(&self) -> Result<&'a str> {
        self.v.as_str().map_or_else(|| fail(self.path, "expected a string"), Ok)
    }

    fn array(&self) -> Result<&'a Vec<Value>> {
        self.v.as_array().map_or_else(|| fail(self.path, "expected an array"), Ok)
    }
}

fn item_path(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

fn complex_at(v: &Value, path: &str) -> Result<Complex64> {
    match v {
        Value::Array(a) if a.len() == 2 => match (a[0].as_f64(), a[1].as_f64()) {
            (Some(re), Some(im)) => Ok(c(re, im)),
            _ => fail(path, "expected [re, im] numbers"),
        },
        Value::Number(n) => Ok(c(n.as_f64().unwrap_or(0.0), 0.0)),
        _ => fail(path, "expected a complex number [re, im]"),
    }
}

fn vector_at(v: &Value, path: &str) -> Result<CVec> {
    let items = v.as_array().map_or_else(|| fail(path, "expected an array"), Ok)?;
    let entries = items
        .iter()
        .enumerate()
        .map(|(i, x)| complex_at(x, &item_path(path, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CVec::from_vec(entries))
}

fn matrix_at(v: &Value, path: &str) -> Result<CMat> {
    let rows = v.as_array().map_or_else(|| fail(path, "expected an array of rows"), Ok)?;
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, r)| vector_at(r, &item_path(path, i)))
        .collect::<Result<Vec<_>>>()?;
    let n = parsed.len();
    let m = parsed.first().map_or(0, |r| r.len());
    if let Some(i) = parsed.iter().position(|r| r.len() != m) {
        return fail(&item_path(path, i), format!("row length differs from {m}"));
    }
    Ok(CMat::from_fn(n, m, |i, j| parsed[i][j]))
}

/// Reads and parses a JSON file.
pub fn load_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// A group together with its irrep table when one is available (always for
/// Lie groups and built-in finite groups).
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub group: Arc<Group>,
    pub table: Option<IrrepTable>,
}

impl GroupSpec {
    pub fn table(&self) -> Result<&IrrepTable> {
        self.table
            .as_ref()
            .ok_or_else(|| Error::Validation("no irrep table supplied for this finite group".into()))
    }
}

/// Group file: `{"kind": "finite", "elements": [...], "table": [[...]],
/// "irreps": [...]}`, `{"kind": "finite", "builtin": "S3"}`,
/// `{"kind": "u1", "band_limit": B}` or `{"kind": "su2", "max_spin_times_two": K}`.
pub fn parse_group(v: &Value) -> Result<GroupSpec> {
    parse_group_at(Node { v, path: "group" })
}

fn parse_group_at(node: Node) -> Result<GroupSpec> {
    let mut s = String::new();
    let kind = node.field("kind", &mut s)?.str()?.to_string();
    match kind.as_str() {
        "u1" => {
            let mut s = String::new();
            let b = node.field("band_limit", &mut s)?.u64()?;
            let group = Arc::new(Group::u1(b as u32));
            let table = IrrepTable::for_lie(group.clone())?;
            Ok(GroupSpec { group, table: Some(table) })
        }
        "su2" => {
            let mut s = String::new();
            let k = node.field("max_spin_times_two", &mut s)?.u64()?;
            let group = Arc::new(Group::su2(k as u32));
            let table = IrrepTable::for_lie(group.clone())?;
            Ok(GroupSpec { group, table: Some(table) })
        }
        "finite" if node.has("builtin") => {
            let mut s = String::new();
            let b = Builtin::parse(node.field("builtin", &mut s)?.str()?)?;
            let (group, table) = IrrepTable::builtin(b);
            Ok(GroupSpec { group, table: Some(table) })
        }
        "finite" => {
            let (mut s1, mut s2) = (String::new(), String::new());
            let elements = node.field("elements", &mut s1)?;
            let labels = elements
                .array()?
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    x.as_str()
                        .map(str::to_string)
                        .map_or_else(|| fail(&item_path(elements.path, i), "expected a label"), Ok)
                })
                .collect::<Result<Vec<_>>>()?;
            let tnode = node.field("table", &mut s2)?;
            let mut table = Vec::new();
            for (i, row) in tnode.array()?.iter().enumerate() {
                let rp = item_path(tnode.path, i);
                let row = row.as_array().map_or_else(|| fail(&rp, "expected a row"), Ok)?;
                let parsed = row
                    .iter()
                    .enumerate()
                    .map(|(j, x)| {
                        x.as_u64()
                            .map(|k| k as usize)
                            .map_or_else(|| fail(&item_path(&rp, j), "expected an element index"), Ok)
                    })
                    .collect::<Result<Vec<_>>>()?;
                table.push(parsed);
            }
            let fg = FiniteGroup::new(labels, table)?;
            let group = Arc::new(Group::Finite(fg));
            let table = if node.has("irreps") {
                let mut s = String::new();
                Some(parse_irreps(&group, node.field("irreps", &mut s)?)?)
            } else {
                catalog_match(&group)
            };
            Ok(GroupSpec { group, table })
        }
        other => fail(&format!("{}.kind", node.path), format!("unknown group kind `{other}`")),
    }
}

/// Irreps of a catalog group with the same multiplication table.
fn catalog_match(group: &Arc<Group>) -> Option<IrrepTable> {
    let fg = group.as_finite()?;
    let mut candidates: Vec<Builtin> = vec![Builtin::S3, Builtin::D4, Builtin::Q8];
    candidates.extend((1..=24).map(Builtin::Cyclic));
    let b = candidates.into_iter().find(|b| b.group().table() == fg.table())?;
    IrrepTable::finite(group.clone(), b.irreps()).ok()
}

fn element_matrices(group: &Group, node: Node) -> Result<Vec<CMat>> {
    let fg = group
        .as_finite()
        .ok_or_else(|| Error::Type("matrices given for a Lie group".into()))?;
    let obj = node
        .v
        .as_object()
        .map_or_else(|| fail(node.path, "expected an object keyed by element label"), Ok)?;
    let mut mats = Vec::with_capacity(fg.order());
    for label in fg.labels() {
        let p = format!("{}.{label}", node.path);
        let v = obj.get(label).map_or_else(|| fail(&p, "missing matrix for element"), Ok)?;
        mats.push(matrix_at(v, &p)?);
    }
    if let Some(extra) = obj.keys().find(|k| fg.index_of(k).is_none()) {
        return fail(&format!("{}.{extra}", node.path), "unknown element label");
    }
    Ok(mats)
}

fn parse_irreps(group: &Arc<Group>, node: Node) -> Result<IrrepTable> {
    let mut entries = Vec::new();
    for (i, v) in node.array()?.iter().enumerate() {
        let p = item_path(node.path, i);
        let item = Node { v, path: &p };
        let (mut s1, mut s2) = (String::new(), String::new());
        let label = item.field("label", &mut s1)?.str()?.to_string();
        let mats = element_matrices(group, item.field("matrices", &mut s2)?)?;
        if item.has("dim") {
            let mut s = String::new();
            let d = item.field("dim", &mut s)?.u64()? as usize;
            if mats.first().is_some_and(|m| m.nrows() != d) {
                return Err(Error::Validation(format!("{s}: declared dim {d} does not match the matrices")));
            }
        }
        entries.push((label, mats));
    }
    IrrepTable::finite(group.clone(), entries)
}

/// A representation with the group it is defined over.
#[derive(Clone, Debug)]
pub struct LoadedRep {
    pub group_spec: GroupSpec,
    pub rep: UnitaryRep,
}

/// Rep file: `{"group": <path or inline>, "dim": d, ...}` with one of
/// `"matrices": {label: matrix}`, `"charges": [n]`,
/// `"generators": {"Jx", "Jy", "Jz"}` or `"regular": true`.
///
/// `base` resolves a relative group path; `group` overrides the embedded one.
pub fn parse_rep(v: &Value, base: Option<&Path>, group: Option<GroupSpec>) -> Result<LoadedRep> {
    let node = Node { v, path: "rep" };
    let group_spec = match group {
        Some(g) => g,
        None => {
            let mut s = String::new();
            let g = node.field("group", &mut s)?;
            match g.v {
                Value::String(p) => {
                    let mut path = PathBuf::from(p);
                    if path.is_relative() {
                        if let Some(dir) = base.and_then(Path::parent) {
                            path = dir.join(path);
                        }
                    }
                    parse_group(&load_json(&path)?)?
                }
                _ => parse_group_at(g)?,
            }
        }
    };
    let group = group_spec.group.clone();
    let mut s = String::new();
    let rep = if node.has("matrices") {
        UnitaryRep::finite(group.clone(), element_matrices(&group, node.field("matrices", &mut s)?)?)?
    } else if node.has("charges") {
        let ch = node.field("charges", &mut s)?;
        let charges = ch
            .array()?
            .iter()
            .enumerate()
            .map(|(i, x)| x.as_i64().map_or_else(|| fail(&item_path(ch.path, i), "expected an integer"), Ok))
            .collect::<Result<Vec<_>>>()?;
        UnitaryRep::charges(group.clone(), charges)?
    } else if node.has("generators") {
        let gens = node.field("generators", &mut s)?;
        let (mut a, mut b, mut d) = (String::new(), String::new(), String::new());
        let jx = gens.field("Jx", &mut a)?;
        let jy = gens.field("Jy", &mut b)?;
        let jz = gens.field("Jz", &mut d)?;
        UnitaryRep::generators(
            group.clone(),
            matrix_at(jx.v, jx.path)?,
            matrix_at(jy.v, jy.path)?,
            matrix_at(jz.v, jz.path)?,
        )?
    } else if node.v.get("regular").and_then(Value::as_bool) == Some(true) {
        UnitaryRep::regular(group.clone())?
    } else {
        return fail("rep", "missing field: one of `matrices`, `charges`, `generators`, `regular`");
    };
    if node.has("dim") {
        let mut s = String::new();
        let d = node.field("dim", &mut s)?.u64()? as usize;
        if d != rep.dim() {
            return Err(Error::Validation(format!("{s}: declared dim {d} but the data has dimension {}", rep.dim())));
        }
    }
    Ok(LoadedRep { group_spec, rep })
}

/// State file: `{"amplitudes": [[re, im], ...]}`; must be normalized.
pub fn parse_state(v: &Value) -> Result<PureState> {
    let node = Node { v, path: "state" };
    let mut s = String::new();
    let a = node.field("amplitudes", &mut s)?;
    PureState::new(vector_at(a.v, a.path)?)
}

/// Generator file: `{"generators": [matrix, ...]}`.
pub fn parse_generators(v: &Value) -> Result<Vec<CMat>> {
    let node = Node { v, path: "generators" };
    let mut s = String::new();
    let g = node.field("generators", &mut s)?;
    g.array()?
        .iter()
        .enumerate()
        .map(|(i, m)| matrix_at(m, &item_path(g.path, i)))
        .collect()
}

/// Group element: a label (finite), `{"theta": t}` (U(1)),
/// `{"quaternion": [w, x, y, z]}` or `{"euler": [α, β, γ]}` (SU(2), z-y-z).
pub fn parse_element(group: &Group, v: &Value) -> Result<GroupElement> {
    parse_element_at(group, Node { v, path: "element" })
}

fn parse_element_at(group: &Group, node: Node) -> Result<GroupElement> {
    let mut s = String::new();
    match group {
        Group::Finite(fg) => {
            let label = node.str()?;
            fg.index_of(label)
                .map(GroupElement::Finite)
                .map_or_else(|| fail(node.path, format!("unknown element `{label}`")), Ok)
        }
        Group::U1 { .. } => Ok(GroupElement::u1(node.field("theta", &mut s)?.f64()?)),
        Group::Su2 { .. } if node.has("euler") => {
            let e = node.field("euler", &mut s)?;
            let a = e.array()?;
            if a.len() != 3 {
                return fail(e.path, "expected three Euler angles");
            }
            let ang = a.iter().enumerate().map(|(i, x)| x.as_f64().map_or_else(|| fail(&item_path(e.path, i), "expected a number"), Ok)).collect::<Result<Vec<_>>>()?;
            Ok(GroupElement::from_euler(ang[0], ang[1], ang[2]))
        }
        Group::Su2 { .. } => {
            let q = node.field("quaternion", &mut s)?;
            let a = q.array()?;
            if a.len() != 4 {
                return fail(q.path, "expected [w, x, y, z]");
            }
            let x = a.iter().enumerate().map(|(i, x)| x.as_f64().map_or_else(|| fail(&item_path(q.path, i), "expected a number"), Ok)).collect::<Result<Vec<_>>>()?;
            GroupElement::su2(Quaternion::new(x[0], x[1], x[2], x[3]))
        }
    }
}

/// Witness stored in a saved verdict report.
#[derive(Clone, Debug)]
pub enum SavedWitness {
    InvariantUnitary(CMat),
    /// Values of `Θ` on the listed elements.
    OneDimRep(Vec<(GroupElement, Complex64)>),
    PdFunction(PdFunction),
}

#[derive(Clone, Debug)]
pub struct SavedVerdict {
    pub command: String,
    pub mode: Option<String>,
    pub outcome: Outcome,
    pub witness: Option<SavedWitness>,
}

/// Parses a verdict report written by `equiv` or `convert`.
pub fn parse_verdict(v: &Value, group: &Arc<Group>) -> Result<SavedVerdict> {
    let node = Node { v, path: "verdict" };
    let (mut s1, mut s2) = (String::new(), String::new());
    let command = node.field("command", &mut s1)?.str()?.to_string();
    let outcome_str = node.field("outcome", &mut s2)?.str()?.to_string();
    let outcome = match outcome_str.as_str() {
        "yes" => Outcome::Yes,
        "no" => Outcome::No,
        "undecided" => Outcome::Undecided,
        other => return fail("verdict.outcome", format!("unknown outcome `{other}`")),
    };
    let mode = v.get("mode").and_then(Value::as_str).map(str::to_string);
    let witness = match v.get("witness") {
        None | Some(Value::Null) => None,
        Some(w) => Some(parse_witness(Node { v: w, path: "verdict.witness" }, group)?),
    };
    Ok(SavedVerdict {
        command,
        mode,
        outcome,
        witness,
    })
}

fn parse_witness(node: Node, group: &Arc<Group>) -> Result<SavedWitness> {
    let mut s = String::new();
    let kind = node.field("type", &mut s)?.str()?.to_string();
    match kind.as_str() {
        "invariant_unitary" => {
            let mut s = String::new();
            let m = node.field("matrix", &mut s)?;
            Ok(SavedWitness::InvariantUnitary(matrix_at(m.v, m.path)?))
        }
        "one_dim_rep" => {
            let mut s = String::new();
            let vals = node.field("values", &mut s)?;
            let mut out = Vec::new();
            for (i, item) in vals.array()?.iter().enumerate() {
                let p = item_path(vals.path, i);
                let it = Node { v: item, path: &p };
                let (mut a, mut b) = (String::new(), String::new());
                let g = parse_element_at(group, it.field("element", &mut a)?)?;
                let val = it.field("value", &mut b)?;
                out.push((g, complex_at(val.v, val.path)?));
            }
            Ok(SavedWitness::OneDimRep(out))
        }
        "pd_function" => {
            let group = group.clone();
            match group.as_ref() {
                Group::Finite(fg) => {
                    let mut s = String::new();
                    let vals = node.field("values", &mut s)?;
                    let obj = vals.v.as_object().map_or_else(|| fail(vals.path, "expected an object"), Ok)?;
                    let mut values = Vec::with_capacity(fg.order());
                    for label in fg.labels() {
                        let p = format!("{}.{label}", vals.path);
                        let v = obj.get(label).map_or_else(|| fail(&p, "missing value"), Ok)?;
                        values.push(complex_at(v, &p)?);
                    }
                    Ok(SavedWitness::PdFunction(PdFunction::Finite { group, values }))
                }
                Group::U1 { .. } => {
                    let mut s = String::new();
                    let co = node.field("coefficients", &mut s)?;
                    let obj = co.v.as_object().map_or_else(|| fail(co.path, "expected an object"), Ok)?;
                    let mut coefficients = BTreeMap::new();
                    for (k, v) in obj {
                        let p = format!("{}.{k}", co.path);
                        let n: i64 = k.parse().map_err(|_| Error::Format(format!("{p}: expected an integer charge")))?;
                        coefficients.insert(n, complex_at(v, &p)?);
                    }
                    Ok(SavedWitness::PdFunction(PdFunction::U1 { group, coefficients }))
                }
                Group::Su2 { .. } => {
                    let mut s = String::new();
                    let bl = node.field("blocks", &mut s)?;
                    let obj = bl.v.as_object().map_or_else(|| fail(bl.path, "expected an object"), Ok)?;
                    let mut blocks = BTreeMap::new();
                    for (k, v) in obj {
                        let p = format!("{}.{k}", bl.path);
                        let tj: u32 = k.parse().map_err(|_| Error::Format(format!("{p}: expected 2j")))?;
                        blocks.insert(tj, matrix_at(v, &p)?);
                    }
                    Ok(SavedWitness::PdFunction(PdFunction::Su2 { group, blocks }))
                }
            }
        }
        other => fail(&format!("{}.type", node.path), format!("unknown witness type `{other}`")),
    }
}
