use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::charfn::lie_irrep_matrix;
use crate::deciders::{element_label, Certificate};
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::linalg::{c, cis, hermitian_eigen, hermitian_part, hermiticity_defect, CMat, CVec};
use crate::rep::{IrrepId, IrrepTable};
use crate::Tolerances;

/// Maximum disagreement tolerated between the Gram and Bochner routes.
const ROUTE_TOL: f64 = 1e-8;

/// A function on the group, candidate positive definite with `f(e) = 1`.
#[derive(Clone, Debug)]
pub enum PdFunction {
    /// One value per element.
    Finite { group: Arc<Group>, values: Vec<Complex64> },
    /// `f(θ) = Σ_n q_n e^{inθ}`.
    U1 { group: Arc<Group>, coefficients: BTreeMap<i64, Complex64> },
    /// `f(g) = Σ_j tr(F_j D^j(g))`, keyed by `2j`.
    Su2 { group: Arc<Group>, blocks: BTreeMap<u32, CMat> },
}

impl PdFunction {
    pub fn group(&self) -> &Arc<Group> {
        match self {
            PdFunction::Finite { group, .. } | PdFunction::U1 { group, .. } | PdFunction::Su2 { group, .. } => group,
        }
    }

    pub fn eval(&self, g: &GroupElement) -> Result<Complex64> {
        match (self, g) {
            (PdFunction::Finite { values, .. }, GroupElement::Finite(i)) => values
                .get(*i)
                .copied()
                .ok_or_else(|| Error::Type(format!("element #{i} out of range"))),
            (PdFunction::U1 { coefficients, .. }, GroupElement::U1(t)) => {
                Ok(coefficients.iter().map(|(n, q)| q * cis(*n as f64 * t)).sum())
            }
            (PdFunction::Su2 { blocks, .. }, GroupElement::Su2(_)) => {
                let mut acc = c(0.0, 0.0);
                for (tj, f) in blocks {
                    acc += (f * lie_irrep_matrix(IrrepId::Spin(*tj), g)?).trace();
                }
                Ok(acc)
            }
            _ => Err(Error::Type(format!("element {g} does not match the function's group"))),
        }
    }

    /// `f(g) = Σ_μ tr(A_μ U_μ(g))` on a finite group.
    pub fn from_fourier(table: &IrrepTable, blocks: &BTreeMap<IrrepId, CMat>) -> Result<Self> {
        let group = table.group().clone();
        if group.as_finite().is_none() {
            return Err(Error::Type("Fourier synthesis here is for finite groups".into()));
        }
        let blocks: Vec<_> = blocks.iter().map(|(id, a)| (*id, a.clone())).collect();
        let values = synthesize(&blocks, &group, table)?;
        Ok(PdFunction::Finite { group, values })
    }
}

/// Fourier blocks `A_μ = (d_μ/|G|) Σ_g f(g⁻¹) U_μ(g)`, so that
/// `f(g) = Σ_μ tr(A_μ U_μ(g))`.
pub(crate) fn fourier_blocks(values: &[Complex64], group: &Group, table: &IrrepTable) -> Result<Vec<(IrrepId, CMat)>> {
    let fg = group.as_finite().expect("finite group");
    let n = fg.order() as f64;
    table
        .irreps()
        .iter()
        .map(|irrep| {
            let mut a = CMat::zeros(irrep.dim, irrep.dim);
            for e in 0..fg.order() {
                a += irrep.matrix(&GroupElement::Finite(e))? * values[fg.inverse(e)];
            }
            Ok((irrep.id, a * c(irrep.dim as f64 / n, 0.0)))
        })
        .collect()
}

/// Inverse of [`fourier_blocks`].
pub(crate) fn synthesize(blocks: &[(IrrepId, CMat)], group: &Group, table: &IrrepTable) -> Result<Vec<Complex64>> {
    let fg = group.as_finite().expect("finite group");
    let mut values = vec![c(0.0, 0.0); fg.order()];
    for (id, a) in blocks {
        let irrep = table.get(*id)?;
        for (e, v) in values.iter_mut().enumerate() {
            *v += (a * irrep.matrix(&GroupElement::Finite(e))?).trace();
        }
    }
    Ok(values)
}

#[derive(Clone, Debug)]
pub struct PdCheck {
    pub positive: bool,
    /// Smallest eigenvalue of the Gram matrix `F[g,h] = f(g⁻¹h)` (finite), or
    /// of the Fourier data (Lie).
    pub min_eigenvalue: f64,
    /// Smallest eigenvalue predicted from the Fourier blocks,
    /// `min_μ (|G|/d_μ) λ_min(A_μ)`.
    pub bochner_min: f64,
    /// Departure from `f(g⁻¹) = conj(f(g))`.
    pub hermitian_defect: f64,
    pub certificate: Option<Certificate>,
}

/// Positive-definiteness of `f` (with `f(e) = 1`).
///
/// Finite groups compute both the `|G|×|G|` Gram route and the Bochner
/// route; disagreement beyond 1e-8 is an internal-consistency failure.
/// Lie groups check the Fourier data (coefficients or blocks) directly.
pub fn positive_definite_check(f: &PdFunction, table: &IrrepTable, tol: &Tolerances) -> Result<PdCheck> {
    let fe = f.eval(&f.group().identity())?;
    if (fe - c(1.0, 0.0)).norm() > tol.equality {
        return Err(Error::Validation(format!("f(e) = {fe}, expected 1")));
    }
    match f {
        PdFunction::Finite { group, values } => finite_check(group, values, table, tol),
        PdFunction::U1 { coefficients, .. } => {
            let mut worst = (f64::INFINITY, 0i64);
            let mut imag: f64 = 0.0;
            for (n, q) in coefficients {
                imag = imag.max(q.im.abs());
                if q.re < worst.0 {
                    worst = (q.re, *n);
                }
            }
            let min = if coefficients.is_empty() { 0.0 } else { worst.0 };
            let positive = imag <= tol.equality && min >= -tol.psd;
            Ok(PdCheck {
                positive,
                min_eigenvalue: min,
                bochner_min: min,
                hermitian_defect: imag,
                certificate: (!positive).then(|| Certificate::NegativeDirection {
                    block: IrrepId::Charge(worst.1).to_string(),
                    eigenvalue: min,
                    vector: CVec::from_element(1, c(1.0, 0.0)),
                }),
            })
        }
        PdFunction::Su2 { blocks, .. } => {
            let mut worst: (f64, Option<(u32, CVec)>) = (f64::INFINITY, None);
            let mut defect: f64 = 0.0;
            for (tj, b) in blocks {
                defect = defect.max(hermiticity_defect(b));
                let (vals, vecs) = hermitian_eigen(b);
                if vals[0] < worst.0 {
                    worst = (vals[0], Some((*tj, vecs.column(0).into_owned())));
                }
            }
            let min = if blocks.is_empty() { 0.0 } else { worst.0 };
            let positive = defect <= tol.equality && min >= -tol.psd;
            Ok(PdCheck {
                positive,
                min_eigenvalue: min,
                bochner_min: min,
                hermitian_defect: defect,
                certificate: match (positive, worst.1) {
                    (false, Some((tj, v))) => Some(Certificate::NegativeDirection {
                        block: IrrepId::Spin(tj).to_string(),
                        eigenvalue: min,
                        vector: v,
                    }),
                    _ => None,
                },
            })
        }
    }
}

fn finite_check(group: &Arc<Group>, values: &[Complex64], table: &IrrepTable, tol: &Tolerances) -> Result<PdCheck> {
    let fg = group
        .as_finite()
        .ok_or_else(|| Error::Type("finite PD function over a Lie group".into()))?;
    let n = fg.order();
    if values.len() != n {
        return Err(Error::Format(format!("{} values for a group of order {n}", values.len())));
    }
    if !table.group().same_group(group) {
        return Err(Error::Type("function and irrep table are over different groups".into()));
    }
    let covered: usize = table.irreps().iter().map(|i| i.dim * i.dim).sum();
    if covered != n {
        return Err(Error::Validation(format!(
            "irrep table covers Σ d² = {covered} of |G| = {n}; the Bochner route needs a complete table"
        )));
    }

    let gram = CMat::from_fn(n, n, |i, j| values[fg.multiply(fg.inverse(i), j)]);
    let defect = hermiticity_defect(&gram);
    let (vals, vecs) = hermitian_eigen(&gram);
    let gram_min = vals[0];

    let mut bochner_min = f64::INFINITY;
    for (_, a) in fourier_blocks(values, group, table)? {
        let d = a.nrows() as f64;
        let (bv, _) = hermitian_eigen(&hermitian_part(&a));
        bochner_min = bochner_min.min(bv[0] * n as f64 / d);
    }
    if (gram_min - bochner_min).abs() > ROUTE_TOL {
        return Err(Error::Consistency(format!(
            "Gram route λ_min = {gram_min:e} disagrees with Bochner route {bochner_min:e}"
        )));
    }

    let positive = defect <= tol.equality && gram_min >= -tol.psd;
    let certificate = if positive {
        None
    } else if defect > tol.equality {
        let (mut worst, mut at) = (0.0, 0);
        for g in 0..n {
            let d = (values[fg.inverse(g)] - values[g].conj()).norm();
            if d > worst {
                worst = d;
                at = g;
            }
        }
        let el = GroupElement::Finite(at);
        Some(Certificate::Element {
            element: el,
            label: element_label(group, &el),
            psi: values[fg.inverse(at)],
            phi: values[at].conj(),
            detail: "f(g⁻¹) ≠ conj(f(g)): the Gram matrix is not Hermitian".into(),
        })
    } else {
        Some(Certificate::NegativeDirection {
            block: "gram".into(),
            eigenvalue: gram_min,
            vector: vecs.column(0).into_owned(),
        })
    };
    Ok(PdCheck {
        positive,
        min_eigenvalue: gram_min,
        bochner_min,
        hermitian_defect: defect,
        certificate,
    })
}
