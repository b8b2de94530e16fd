use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::asymptotic::{AsymptoticOverall, AsymptoticReport};
use crate::charfn::{CharFn, SymmetrySubgroup, U1Stabilizer};
use crate::deciders::{element_label, Certificate, OneDimRep, PdFunction, Verdict, Witness};
use crate::error::Result;
use crate::group::{Group, GroupElement};
use crate::linalg::{CMat, CVec};
use crate::rep::IsotypicDecomposition;

/// Number of sampled values listed for Lie groups.
const LIE_SAMPLES: usize = 8;

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn matrix_json(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect()))
            .collect(),
    )
}

fn vector_json(v: &CVec) -> Value {
    Value::Array(v.iter().map(|z| complex_json(*z)).collect())
}

pub fn element_json(group: &Group, g: &GroupElement) -> Value {
    match g {
        GroupElement::Finite(_) => Value::String(element_label(group, g)),
        GroupElement::U1(t) => json!({ "theta": t }),
        GroupElement::Su2(q) => json!({ "quaternion": [q.w, q.x, q.y, q.z] }),
    }
}

/// Every element of a finite group, every eighth grid point of a Lie group.
fn sample_points(group: &Group) -> Vec<GroupElement> {
    let grid = group.sample_grid();
    if group.is_lie() {
        let stride = grid.len() / LIE_SAMPLES;
        grid.into_iter().step_by(stride).take(LIE_SAMPLES).collect()
    } else {
        grid
    }
}

fn samples<F>(group: &Group, mut f: F) -> Result<Value>
where
    F: FnMut(&GroupElement) -> Result<Complex64>,
{
    let mut out = Vec::new();
    for g in sample_points(group) {
        out.push(json!({ "element": element_json(group, &g), "value": complex_json(f(&g)?) }));
    }
    Ok(Value::Array(out))
}

fn kind(group: &Group) -> &'static str {
    group.kind_name()
}

/// `χ` values by element label (finite), or the reduction plus sampled
/// values (Lie).
pub fn charfn_report(chi: &CharFn) -> Result<Value> {
    let group = chi.group();
    let mut out = Map::new();
    out.insert("command".into(), json!("charfn"));
    out.insert("group".into(), json!(kind(group)));
    match chi {
        CharFn::Finite { values, .. } => {
            let table: Map<String, Value> = values
                .iter()
                .enumerate()
                .map(|(i, z)| (element_label(group, &GroupElement::Finite(i)), complex_json(*z)))
                .collect();
            out.insert("values".into(), Value::Object(table));
        }
        CharFn::Lie { reduction, .. } => {
            let red: Map<String, Value> = reduction
                .blocks
                .iter()
                .map(|(id, m)| (reduction.labels.get(id).cloned().unwrap_or_else(|| id.to_string()), matrix_json(m)))
                .collect();
            out.insert("reduction".into(), Value::Object(red));
            out.insert("samples".into(), samples(group, |g| chi.eval(g))?);
        }
    }
    Ok(Value::Object(out))
}

pub fn decompose_report(decomp: &IsotypicDecomposition, isometries: bool) -> Value {
    let blocks: Vec<Value> = decomp
        .blocks()
        .iter()
        .map(|b| {
            let mut o = Map::new();
            o.insert("irrep".into(), json!(b.label));
            o.insert("irrep_dim".into(), json!(b.irrep_dim));
            o.insert("multiplicity".into(), json!(b.multiplicity));
            if isometries {
                o.insert("isometry".into(), matrix_json(&b.isometry));
            }
            Value::Object(o)
        })
        .collect();
    json!({ "command": "decompose", "dim": decomp.dim(), "blocks": blocks })
}

fn one_dim_json(group: &Group, theta: &OneDimRep) -> Result<Value> {
    let mut o = Map::new();
    o.insert("type".into(), json!("one_dim_rep"));
    o.insert("label".into(), json!(theta.label()));
    if let OneDimRep::Charge(n) = theta {
        o.insert("charge".into(), json!(n));
    }
    o.insert("values".into(), samples(group, |g| theta.eval(g))?);
    Ok(Value::Object(o))
}

fn pd_json(f: &PdFunction) -> Value {
    match f {
        PdFunction::Finite { group, values } => {
            let v: Map<String, Value> = values
                .iter()
                .enumerate()
                .map(|(i, z)| (element_label(group, &GroupElement::Finite(i)), complex_json(*z)))
                .collect();
            json!({ "type": "pd_function", "values": v })
        }
        PdFunction::U1 { coefficients, .. } => {
            let v: Map<String, Value> = coefficients.iter().map(|(n, q)| (n.to_string(), complex_json(*q))).collect();
            json!({ "type": "pd_function", "coefficients": v })
        }
        PdFunction::Su2 { blocks, .. } => {
            let v: Map<String, Value> = blocks.iter().map(|(tj, m)| (tj.to_string(), matrix_json(m))).collect();
            json!({ "type": "pd_function", "blocks": v })
        }
    }
}

fn certificate_json(group: &Group, c: &Certificate) -> Value {
    match c {
        Certificate::ReductionEntry { irrep, row, col, psi, phi } => json!({
            "type": "reduction_entry", "irrep": irrep, "row": row, "col": col,
            "psi": complex_json(*psi), "phi": complex_json(*phi)
        }),
        Certificate::Element { element, label, psi, phi, detail } => json!({
            "type": "element", "element": element_json(group, element), "label": label,
            "psi": complex_json(*psi), "phi": complex_json(*phi), "detail": detail
        }),
        Certificate::PdBound { element, label, modulus } => json!({
            "type": "pd_bound", "element": element_json(group, element), "label": label, "modulus": modulus
        }),
        Certificate::NegativeDirection { block, eigenvalue, vector } => json!({
            "type": "negative_direction", "block": block, "eigenvalue": eigenvalue, "vector": vector_json(vector)
        }),
        Certificate::Infeasible { residual, detail } => json!({
            "type": "infeasible", "residual": residual, "detail": detail
        }),
    }
}

/// `{"outcome", "witness", "certificate", "residuals", "reason"}` plus the
/// command that produced it.
pub fn verdict_report(command: &str, mode: Option<&str>, verdict: &Verdict, group: &Group) -> Result<Value> {
    let witness = match &verdict.witness {
        None => Value::Null,
        Some(Witness::InvariantUnitary(v)) => json!({ "type": "invariant_unitary", "matrix": matrix_json(v) }),
        Some(Witness::OneDimRep(t)) => one_dim_json(group, t)?,
        Some(Witness::PdFunction(f)) => pd_json(f),
    };
    let certificate = verdict
        .certificate
        .as_ref()
        .map_or(Value::Null, |c| certificate_json(group, c));
    let residuals: Map<String, Value> = verdict.residuals.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    let mut o = Map::new();
    o.insert("command".into(), json!(command));
    if let Some(m) = mode {
        o.insert("mode".into(), json!(m));
    }
    o.insert("group".into(), json!(kind(group)));
    o.insert("outcome".into(), json!(verdict.outcome.as_str()));
    o.insert("witness".into(), witness);
    o.insert("certificate".into(), certificate);
    o.insert("residuals".into(), Value::Object(residuals));
    o.insert("reason".into(), verdict.reason.as_ref().map_or(Value::Null, |r| json!(r)));
    Ok(Value::Object(o))
}

fn sym_json(group: &Group, s: &SymmetrySubgroup) -> Value {
    let mut o = Map::new();
    o.insert("description".into(), json!(s.describe()));
    match s {
        SymmetrySubgroup::Finite(el) => {
            o.insert("kind".into(), json!("finite"));
            let labels: Vec<String> = el.iter().map(|i| element_label(group, &GroupElement::Finite(*i))).collect();
            o.insert("elements".into(), json!(labels));
        }
        SymmetrySubgroup::U1(st) => {
            let (k, order) = match st {
                U1Stabilizer::Full => ("full", None),
                U1Stabilizer::Cyclic(k) => ("cyclic", Some(*k)),
                U1Stabilizer::Trivial => ("trivial", None),
            };
            o.insert("kind".into(), json!(k));
            if let Some(order) = order {
                o.insert("order".into(), json!(order));
            }
        }
        SymmetrySubgroup::Su2Full => {
            o.insert("kind".into(), json!("full"));
        }
        SymmetrySubgroup::Su2Axial { axis } => {
            o.insert("kind".into(), json!("axial"));
            o.insert("axis".into(), json!(axis));
        }
        SymmetrySubgroup::Su2Discrete { grid_members, minus_one } => {
            o.insert("kind".into(), json!("discrete"));
            o.insert("grid_members".into(), json!(grid_members));
            o.insert("contains_minus_one".into(), json!(minus_one));
        }
    }
    Value::Object(o)
}

pub fn sym_report(group: &Group, s: &SymmetrySubgroup) -> Value {
    json!({ "command": "sym", "group": kind(group), "subgroup": sym_json(group, s) })
}

/// Mirrors the report fields with a condition-by-condition list.
pub fn asymptotic_report(group: &Group, r: &AsymptoticReport) -> Value {
    let rate = r.rate.map_or(Value::Null, |x| json!(x));
    let conditions = json!([
        {
            "condition": "(i) Sym_G(psi) = Sym_G(phi)",
            "holds": r.sym_equal,
            "psi": sym_json(group, &r.sym_psi),
            "phi": sym_json(group, &r.sym_phi)
        },
        {
            "condition": "(ii) C(psi) = R C(phi)",
            "holds": r.covariance_holds,
            "rate": rate,
            "relative_residual": r.covariance_residual,
            "note": r.rate_note.as_ref().map_or(Value::Null, |n| json!(n))
        },
        {
            "condition": "(iii) <L>_psi = R <L>_phi on [g, g]",
            "holds": r.momentum.holds,
            "vacuous": r.momentum.vacuous,
            "residual": r.momentum.residual
        }
    ]);
    let overall = match &r.overall {
        AsymptoticOverall::NecessaryConditionsHold { rate } => json!({
            "status": "necessary-conditions-hold",
            "rate": rate.map_or(Value::Null, |x| json!(x))
        }),
        AsymptoticOverall::Fails { condition } => json!({ "status": "fail", "condition": condition }),
    };
    json!({
        "command": "asymptotic",
        "group": kind(group),
        "conditions": conditions,
        "rate": rate,
        "overall": overall,
        "note": r.note
    })
}

pub fn verify_report(ok: bool, checked: &str, residuals: &BTreeMap<String, f64>, detail: Option<&str>) -> Value {
    let res: Map<String, Value> = residuals.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    json!({
        "command": "verify",
        "ok": ok,
        "checked": checked,
        "residuals": res,
        "detail": detail.map_or(Value::Null, |d| json!(d))
    })
}
