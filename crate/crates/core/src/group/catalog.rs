//! Built-in finite groups together with complete sets of irreps.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{c, cis, CMat};

pub const MAX_CYCLIC_ORDER: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Cyclic(usize),
    S3,
    D4,
    Q8,
}

/// One irrep as `(label, matrix per group element)`.
pub type IrrepMatrices = (String, Vec<CMat>);

impl Builtin {
    /// Parses `Z<n>`, `S3`, `D4`, `Q8` (case-insensitive).
    pub fn parse(name: &str) -> Result<Self> {
        let upper = name.to_ascii_uppercase();
        match upper.as_str() {
            "S3" => Ok(Builtin::S3),
            "D4" => Ok(Builtin::D4),
            "Q8" => Ok(Builtin::Q8),
            _ => {
                let n = upper
                    .strip_prefix('Z')
                    .map(|s| s.trim_start_matches('_'))
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| Error::Format(format!("unknown built-in group `{name}`")))?;
                if n == 0 || n > MAX_CYCLIC_ORDER {
                    return Err(Error::Validation(format!(
                        "cyclic order {n} outside 1..={MAX_CYCLIC_ORDER}"
                    )));
                }
                Ok(Builtin::Cyclic(n))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Builtin::Cyclic(n) => format!("Z{n}"),
            Builtin::S3 => "S3".into(),
            Builtin::D4 => "D4".into(),
            Builtin::Q8 => "Q8".into(),
        }
    }

    pub fn group(&self) -> FiniteGroup {
        let (labels, table) = match self {
            Builtin::Cyclic(n) => cyclic_table(*n),
            Builtin::S3 => s3_table(),
            Builtin::D4 => d4_table(),
            Builtin::Q8 => q8_table(),
        };
        FiniteGroup::new(labels, table).expect("built-in tables are groups")
    }

    pub fn irreps(&self) -> Vec<IrrepMatrices> {
        match self {
            Builtin::Cyclic(n) => cyclic_irreps(*n),
            Builtin::S3 => s3_irreps(),
            Builtin::D4 => d4_irreps(),
            Builtin::Q8 => q8_irreps(),
        }
    }
}

fn scalar(z: num_complex::Complex64) -> CMat {
    CMat::from_element(1, 1, z)
}

fn real2(a: f64, b: f64, cc: f64, d: f64) -> CMat {
    CMat::from_row_slice(2, 2, &[c(a, 0.0), c(b, 0.0), c(cc, 0.0), c(d, 0.0)])
}

fn cyclic_table(n: usize) -> (Vec<String>, Vec<Vec<usize>>) {
    let labels = (0..n).map(|i| format!("g{i}")).collect();
    let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    (labels, table)
}

fn cyclic_irreps(n: usize) -> Vec<IrrepMatrices> {
    (0..n)
        .map(|k| {
            let mats = (0..n)
                .map(|m| scalar(cis(2.0 * PI * (k * m) as f64 / n as f64)))
                .collect();
            (format!("k{k}"), mats)
        })
        .collect()
}

const S3_PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [1, 0, 2],
    [2, 1, 0],
    [0, 2, 1],
    [1, 2, 0],
    [2, 0, 1],
];
const S3_LABELS: [&str; 6] = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"];

fn s3_table() -> (Vec<String>, Vec<Vec<usize>>) {
    let index = |p: [usize; 3]| S3_PERMS.iter().position(|q| *q == p).unwrap();
    let table = S3_PERMS
        .iter()
        .map(|a| {
            S3_PERMS
                .iter()
                .map(|b| index([a[b[0]], a[b[1]], a[b[2]]]))
                .collect()
        })
        .collect();
    (S3_LABELS.iter().map(|s| s.to_string()).collect(), table)
}

fn s3_irreps() -> Vec<IrrepMatrices> {
    let sign = |p: &[usize; 3]| {
        let inversions = (0..3)
            .flat_map(|i| ((i + 1)..3).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        if inversions % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    };
    // Permutation action restricted to the plane orthogonal to (1,1,1).
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let s6 = 1.0 / 6f64.sqrt();
    let basis = [[s2, -s2, 0.0], [s6, s6, -2.0 * s6]];
    let standard = |p: &[usize; 3]| {
        let mut m = CMat::zeros(2, 2);
        for (r, u) in basis.iter().enumerate() {
            for (s, v) in basis.iter().enumerate() {
                // (Pv)_{p(x)} = v_x
                let val: f64 = (0..3).map(|x| u[p[x]] * v[x]).sum();
                m[(r, s)] = c(val, 0.0);
            }
        }
        m
    };
    vec![
        ("trivial".into(), S3_PERMS.iter().map(|_| scalar(c(1.0, 0.0))).collect()),
        ("sign".into(), S3_PERMS.iter().map(|p| scalar(c(sign(p), 0.0))).collect()),
        ("standard".into(), S3_PERMS.iter().map(standard).collect()),
    ]
}

/// Elements `r^a s^b`, index `4b + a`.
fn d4_table() -> (Vec<String>, Vec<Vec<usize>>) {
    let labels = ["e", "r", "r2", "r3", "s", "rs", "r2s", "r3s"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let table = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (a, b) = (x % 4, x / 4);
                    let (cc, d) = (y % 4, y / 4);
                    let rot = if b == 0 { a + cc } else { a + 4 - cc } % 4;
                    4 * ((b + d) % 2) + rot
                })
                .collect()
        })
        .collect();
    (labels, table)
}

fn d4_irreps() -> Vec<IrrepMatrices> {
    let one_dim = |er: f64, es: f64| -> Vec<CMat> {
        (0..8)
            .map(|x| scalar(c(er.powi(x % 4) * es.powi(x / 4), 0.0)))
            .collect()
    };
    let r = real2(0.0, -1.0, 1.0, 0.0);
    let s = real2(1.0, 0.0, 0.0, -1.0);
    let two_dim = (0..8)
        .map(|x| {
            let mut m = CMat::identity(2, 2);
            for _ in 0..(x % 4) {
                m = &m * &r;
            }
            if x / 4 == 1 {
                m = &m * &s;
            }
            m
        })
        .collect();
    vec![
        ("A1".into(), one_dim(1.0, 1.0)),
        ("A2".into(), one_dim(1.0, -1.0)),
        ("B1".into(), one_dim(-1.0, 1.0)),
        ("B2".into(), one_dim(-1.0, -1.0)),
        ("E".into(), two_dim),
    ]
}

const Q8_LABELS: [&str; 8] = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];

/// 2×2 matrix of `±u` for `u ∈ {1, i, j, k}` with `i ↦ −iσ_x` etc.
fn q8_matrix(index: usize) -> CMat {
    let sign = if index.is_multiple_of(2) { 1.0 } else { -1.0 };
    let unit = match index / 2 {
        0 => CMat::identity(2, 2),
        1 => CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, -1.0), c(0.0, 0.0)]),
        2 => CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        _ => CMat::from_row_slice(2, 2, &[c(0.0, -1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]),
    };
    unit * c(sign, 0.0)
}

fn q8_table() -> (Vec<String>, Vec<Vec<usize>>) {
    let mats: Vec<CMat> = (0..8).map(q8_matrix).collect();
    let table = mats
        .iter()
        .map(|a| {
            mats.iter()
                .map(|b| {
                    let p = a * b;
                    mats.iter()
                        .position(|m| (m - &p).iter().all(|z| z.norm() < 1e-12))
                        .expect("Q8 closed")
                })
                .collect()
        })
        .collect();
    (Q8_LABELS.iter().map(|s| s.to_string()).collect(), table)
}

fn q8_irreps() -> Vec<IrrepMatrices> {
    // One-dimensional irreps factor through Q8/{±1} ≅ Z2×Z2.
    let one_dim = |vi: f64, vj: f64| -> Vec<CMat> {
        (0..8)
            .map(|x| {
                let v = match x / 2 {
                    0 => 1.0,
                    1 => vi,
                    2 => vj,
                    _ => vi * vj,
                };
                scalar(c(v, 0.0))
            })
            .collect()
    };
    vec![
        ("trivial".into(), one_dim(1.0, 1.0)),
        ("chi_i".into(), one_dim(1.0, -1.0)),
        ("chi_j".into(), one_dim(-1.0, 1.0)),
        ("chi_k".into(), one_dim(-1.0, -1.0)),
        ("spinor".into(), (0..8).map(q8_matrix).collect()),
    ]
}
