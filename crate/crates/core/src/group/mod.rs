//! Finite groups, `U(1)` and `SU(2)`, with exact Haar averaging.

pub mod catalog;
mod finite;
mod lie;

use std::f64::consts::PI;
use std::fmt;

pub use catalog::Builtin;
pub use finite::{check_group_axioms, check_group_axioms_seeded, FiniteGroup};
pub use lie::{gauss_legendre, su2_low_discrepancy, su2_quadrature, Quaternion};

use crate::error::{Error, Result};
use crate::linalg::CMat;

/// Size of the deterministic sample grid used for Lie groups by the oracles.
pub const LIE_GRID_POINTS: usize = 64;

const QUATERNION_NORM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Group {
    Finite(FiniteGroup),
    /// `U(1)`; representations may carry charges `|n| ≤ band_limit`.
    U1 { band_limit: u32 },
    /// `SU(2)`; representations may carry spins `j ≤ max_two_j / 2`. The
    /// quadrature uses `max_two_j + 1` Gauss–Legendre points in `cos β`.
    Su2 { max_two_j: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GroupElement {
    Finite(usize),
    /// Angle in `[0, 2π)`.
    U1(f64),
    Su2(Quaternion),
}

impl GroupElement {
    pub fn u1(theta: f64) -> Self {
        GroupElement::U1(theta.rem_euclid(2.0 * PI))
    }

    /// SU(2) element from a quaternion, rejecting norms off by more than 1e-12.
    pub fn su2(q: Quaternion) -> Result<Self> {
        if (q.norm() - 1.0).abs() > QUATERNION_NORM_TOL {
            return Err(Error::Validation(format!(
                "quaternion norm {} is not 1",
                q.norm()
            )));
        }
        Ok(GroupElement::Su2(q))
    }

    pub fn from_euler(alpha: f64, beta: f64, gamma: f64) -> Self {
        GroupElement::Su2(Quaternion::from_euler_zyz(alpha, beta, gamma))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Finite(i) => write!(f, "#{i}"),
            GroupElement::U1(t) => write!(f, "θ={t}"),
            GroupElement::Su2(q) => write!(f, "q=({}, {}, {}, {})", q.w, q.x, q.y, q.z),
        }
    }
}

impl Group {
    pub fn builtin(b: Builtin) -> Self {
        Group::Finite(b.group())
    }

    pub fn u1(band_limit: u32) -> Self {
        Group::U1 { band_limit }
    }

    pub fn su2(max_two_j: u32) -> Self {
        Group::Su2 { max_two_j }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Group::Finite(_) => "finite",
            Group::U1 { .. } => "u1",
            Group::Su2 { .. } => "su2",
        }
    }

    pub fn is_lie(&self) -> bool {
        !matches!(self, Group::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&FiniteGroup> {
        match self {
            Group::Finite(g) => Some(g),
            _ => None,
        }
    }

    /// Same abstract group (Lie groups ignore the quadrature configuration).
    pub fn same_group(&self, other: &Group) -> bool {
        match (self, other) {
            (Group::Finite(a), Group::Finite(b)) => a.table() == b.table(),
            (Group::U1 { .. }, Group::U1 { .. }) | (Group::Su2 { .. }, Group::Su2 { .. }) => true,
            _ => false,
        }
    }

    /// Same group with the larger of the two quadrature configurations, or
    /// with a band large enough for `extra` (used for tensor products).
    pub fn with_capacity(&self, band: u32) -> Group {
        match self {
            Group::Finite(g) => Group::Finite(g.clone()),
            Group::U1 { band_limit } => Group::U1 {
                band_limit: (*band_limit).max(band),
            },
            Group::Su2 { max_two_j } => Group::Su2 {
                max_two_j: (*max_two_j).max(band),
            },
        }
    }

    /// Band limit (U(1)) or `2j_max` (SU(2)); 0 for finite groups.
    pub fn band(&self) -> u32 {
        match self {
            Group::Finite(_) => 0,
            Group::U1 { band_limit } => *band_limit,
            Group::Su2 { max_two_j } => *max_two_j,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            Group::Finite(g) => GroupElement::Finite(g.identity()),
            Group::U1 { .. } => GroupElement::U1(0.0),
            Group::Su2 { .. } => GroupElement::Su2(Quaternion::IDENTITY),
        }
    }

    fn check_element(&self, a: &GroupElement) -> Result<()> {
        match (self, a) {
            (Group::Finite(g), GroupElement::Finite(i)) if *i < g.order() => Ok(()),
            (Group::Finite(g), GroupElement::Finite(i)) => Err(Error::Type(format!(
                "element index {i} out of range for group of order {}",
                g.order()
            ))),
            (Group::U1 { .. }, GroupElement::U1(_)) | (Group::Su2 { .. }, GroupElement::Su2(_)) => {
                Ok(())
            }
            _ => Err(Error::Type(format!(
                "element {a} does not belong to a {} group",
                self.kind_name()
            ))),
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(match (self, a, b) {
            (Group::Finite(g), GroupElement::Finite(i), GroupElement::Finite(j)) => {
                GroupElement::Finite(g.multiply(*i, *j))
            }
            (_, GroupElement::U1(s), GroupElement::U1(t)) => GroupElement::u1(s + t),
            (_, GroupElement::Su2(p), GroupElement::Su2(q)) => {
                GroupElement::Su2((*p * *q).normalized())
            }
            _ => unreachable!("checked above"),
        })
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check_element(a)?;
        Ok(match (self, a) {
            (Group::Finite(g), GroupElement::Finite(i)) => GroupElement::Finite(g.inverse(*i)),
            (_, GroupElement::U1(t)) => GroupElement::u1(-t),
            (_, GroupElement::Su2(q)) => GroupElement::Su2(q.conjugate()),
            _ => unreachable!("checked above"),
        })
    }

    /// Nodes and weights of the exact Haar rule for this configuration.
    ///
    /// Finite groups: uniform weights. U(1): `2B + 1` equispaced angles,
    /// exact for trigonometric polynomials of degree `≤ 2B`. SU(2): see
    /// [`su2_quadrature`].
    pub fn haar_nodes(&self) -> Vec<(GroupElement, f64)> {
        match self {
            Group::Finite(g) => {
                let w = 1.0 / g.order() as f64;
                (0..g.order()).map(|i| (GroupElement::Finite(i), w)).collect()
            }
            Group::U1 { band_limit } => {
                let n = 2 * *band_limit as usize + 1;
                (0..n)
                    .map(|k| (GroupElement::U1(2.0 * PI * k as f64 / n as f64), 1.0 / n as f64))
                    .collect()
            }
            Group::Su2 { max_two_j } => su2_quadrature(*max_two_j)
                .into_iter()
                .map(|(q, w)| (GroupElement::Su2(q), w))
                .collect(),
        }
    }

    /// Haar rule able to integrate products of two matrix elements up to
    /// `required` (charge band or `2j`); errors if the configured order is
    /// insufficient.
    pub fn haar_nodes_for(&self, required: u32) -> Result<Vec<(GroupElement, f64)>> {
        if self.is_lie() && required > self.band() {
            return Err(Error::Config(format!(
                "quadrature configured for band {} but {required} is required",
                self.band()
            )));
        }
        Ok(self.haar_nodes())
    }

    /// Deterministic points for sampled comparisons: every element of a
    /// finite group, 64 equispaced angles on U(1), or a fixed 64-point
    /// low-discrepancy set on SU(2) (identity first in the Lie cases).
    pub fn sample_grid(&self) -> Vec<GroupElement> {
        match self {
            Group::Finite(g) => (0..g.order()).map(GroupElement::Finite).collect(),
            Group::U1 { .. } => (0..LIE_GRID_POINTS)
                .map(|k| GroupElement::U1(2.0 * PI * k as f64 / LIE_GRID_POINTS as f64))
                .collect(),
            Group::Su2 { .. } => std::iter::once(Quaternion::IDENTITY)
                .chain(su2_low_discrepancy(LIE_GRID_POINTS - 1))
                .map(GroupElement::Su2)
                .collect(),
        }
    }
}

/// Haar average `∫ dg f(g)` of a matrix-valued integrand.
///
/// Exact when the integrand is band-limited by the group configuration (all
/// integrands built from representation matrix elements in this crate are).
pub fn haar_average<F>(group: &Group, f: F) -> Result<CMat>
where
    F: Fn(&GroupElement) -> Result<CMat>,
{
    average_over(&group.haar_nodes(), f)
}

pub(crate) fn average_over<F>(nodes: &[(GroupElement, f64)], f: F) -> Result<CMat>
where
    F: Fn(&GroupElement) -> Result<CMat>,
{
    let mut acc: Option<CMat> = None;
    for (g, w) in nodes {
        let val = f(g)? * num_complex::Complex64::new(*w, 0.0);
        acc = Some(match acc {
            None => val,
            Some(a) => {
                if a.shape() != val.shape() {
                    return Err(Error::Format("integrand changed shape".into()));
                }
                a + val
            }
        });
    }
    acc.ok_or_else(|| Error::Config("empty quadrature".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, cis};

    #[test]
    fn cyclic_arithmetic() {
        let g = Group::builtin(Builtin::Cyclic(3));
        let g1 = GroupElement::Finite(1);
        assert_eq!(g.multiply(&g1, &g1).unwrap(), GroupElement::Finite(2));
        let z4 = Group::builtin(Builtin::Cyclic(4));
        assert_eq!(z4.inverse(&g1).unwrap(), GroupElement::Finite(3));
        assert_eq!(z4.inverse(&z4.identity()).unwrap(), z4.identity());
    }

    #[test]
    fn u1_arithmetic() {
        let g = Group::u1(1);
        let a = GroupElement::u1(1.5 * PI);
        match g.multiply(&a, &a).unwrap() {
            GroupElement::U1(t) => assert!((t - PI).abs() < 1e-12),
            _ => panic!(),
        }
        match g.inverse(&GroupElement::u1(0.4)).unwrap() {
            GroupElement::U1(t) => assert!((t - (2.0 * PI - 0.4)).abs() < 1e-12),
            _ => panic!(),
        }
    }

    #[test]
    fn su2_inverse() {
        let g = Group::su2(1);
        let q = GroupElement::su2(Quaternion::new(0.5, 0.5, -0.5, 0.5)).unwrap();
        match g.multiply(&q, &g.inverse(&q).unwrap()).unwrap() {
            GroupElement::Su2(p) => assert!(p.distance(&Quaternion::IDENTITY) < 1e-12),
            _ => panic!(),
        }
        assert!(GroupElement::su2(Quaternion::new(1.0, 1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn kind_mismatch_is_type_error() {
        let g = Group::u1(1);
        assert!(matches!(
            g.multiply(&GroupElement::Finite(0), &GroupElement::U1(0.0)),
            Err(Error::Type(_))
        ));
    }

    #[test]
    fn z2_average_projects_on_trivial() {
        let g = Group::builtin(Builtin::Cyclic(2));
        let avg = haar_average(&g, |e| {
            let s = if *e == GroupElement::Finite(0) { 1.0 } else { -1.0 };
            Ok(CMat::from_diagonal(&crate::CVec::from_vec(vec![c(1.0, 0.0), c(s, 0.0)])))
        })
        .unwrap();
        assert!((avg[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(avg[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn u1_orthogonality() {
        let g = Group::u1(3);
        for n in -6i32..=6 {
            let avg = haar_average(&g, |e| match e {
                GroupElement::U1(t) => Ok(CMat::from_element(1, 1, cis(n as f64 * t))),
                _ => unreachable!(),
            })
            .unwrap();
            let expect = if n == 0 { 1.0 } else { 0.0 };
            assert!((avg[(0, 0)] - c(expect, 0.0)).norm() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn insufficient_order_is_config_error() {
        assert!(matches!(Group::u1(1).haar_nodes_for(2), Err(Error::Config(_))));
        assert!(Group::su2(2).haar_nodes_for(2).is_ok());
        assert!(Group::builtin(Builtin::S3).haar_nodes_for(99).is_ok());
    }
}
