#![allow(dead_code)]

use std::sync::Arc;

use asymmetry::group::{Builtin, Group};
use asymmetry::linalg::{block_diag, identity, kron, random_unit_vector, CMat};
use asymmetry::rep::spin_generators;
use asymmetry::{IrrepId, IrrepTable, IsotypicDecomposition, PureState, UnitaryRep};
use rand::Rng;

/// A named representation together with the irrep table of its group.
pub struct Case {
    pub name: String,
    pub rep: UnitaryRep,
    pub table: IrrepTable,
}

impl Case {
    pub fn finite_regular(b: Builtin) -> Case {
        let (group, table) = IrrepTable::builtin(b);
        Case {
            name: b.name(),
            rep: UnitaryRep::regular(group).unwrap(),
            table,
        }
    }

    pub fn lie(name: &str, rep: UnitaryRep) -> Case {
        let table = IrrepTable::for_lie(rep.group().clone()).unwrap();
        Case {
            name: name.into(),
            rep,
            table,
        }
    }

    pub fn random_state<R: Rng>(&self, rng: &mut R) -> PureState {
        PureState::new(random_unit_vector(self.rep.dim(), rng)).unwrap()
    }
}

pub const FINITE: [Builtin; 7] = [
    Builtin::Cyclic(2),
    Builtin::Cyclic(3),
    Builtin::Cyclic(5),
    Builtin::Cyclic(6),
    Builtin::S3,
    Builtin::D4,
    Builtin::Q8,
];

/// Charges with repeated sectors so invariant unitaries are nontrivial.
pub fn u1_case() -> Case {
    let rep = UnitaryRep::charges(Arc::new(Group::u1(2)), vec![-1, 0, 0, 1, 1, 2]).unwrap();
    Case::lie("U(1)", rep)
}

pub fn spin_rep(two_j: u32) -> UnitaryRep {
    let [x, y, z] = spin_generators(two_j);
    UnitaryRep::generators(Arc::new(Group::su2(two_j.max(1))), x, y, z).unwrap()
}

/// `j = 0 ⊕ 1/2 ⊕ 1/2 ⊕ 1`, dimension 8.
pub fn su2_case() -> Case {
    let table = IrrepTable::for_lie(Arc::new(Group::su2(2))).unwrap();
    let rep = UnitaryRep::from_irreps(&table, &[(IrrepId::Spin(0), 1), (IrrepId::Spin(1), 2), (IrrepId::Spin(2), 1)])
        .unwrap();
    Case { name: "SU(2)".into(), rep, table }
}

pub fn all_cases() -> Vec<Case> {
    let mut v: Vec<Case> = FINITE.iter().map(|b| Case::finite_regular(*b)).collect();
    v.push(u1_case());
    v.push(su2_case());
    v
}

/// A random state inside one isotypic block of a one-dimensional irrep.
pub fn invariant_state<R: Rng>(decomp: &IsotypicDecomposition, rng: &mut R) -> PureState {
    let ones: Vec<_> = decomp.blocks().iter().filter(|b| b.irrep_dim == 1).collect();
    let b = ones[rng.random_range(0..ones.len())];
    let v = &b.isometry * random_unit_vector(b.multiplicity, rng);
    PureState::normalized(v).unwrap()
}

/// Generators of `j ⊕ (j ⊗ j)` for the one-copy versus two-copy comparison.
pub fn one_plus_two_copies(two_j: u32) -> UnitaryRep {
    let g = spin_generators(two_j);
    let d = two_j as usize + 1;
    let id = identity(d);
    let m: Vec<CMat> = g.iter().map(|j| block_diag(j, &(kron(j, &id) + kron(&id, j)))).collect();
    UnitaryRep::generators(Arc::new(Group::su2(2 * two_j)), m[0].clone(), m[1].clone(), m[2].clone()).unwrap()
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}
