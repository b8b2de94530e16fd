mod common;

use asymmetry::charfn::{char_fn, char_value, reduction, sym_group};
use asymmetry::deciders::{convertible, max_invariant_fidelity, unitary_g_equiv, Outcome, RepContext};
use asymmetry::group::Builtin;
use asymmetry::linalg::{c, CVec};
use asymmetry::oracle::random_invariant_unitary;
use asymmetry::rep::decompose;
use asymmetry::{PureState, Tolerances};
use common::Case;
use proptest::prelude::*;

fn amplitudes(dim: usize) -> impl Strategy<Value = PureState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| PureState::normalized(CVec::from_iterator(v.len(), v.into_iter().map(|(a, b)| c(a, b)))).unwrap())
}

fn builtin() -> impl Strategy<Value = Builtin> {
    prop_oneof![
        (2usize..9).prop_map(Builtin::Cyclic),
        Just(Builtin::S3),
        Just(Builtin::D4),
        Just(Builtin::Q8),
    ]
}

fn case_and_state() -> impl Strategy<Value = (Builtin, PureState, PureState)> {
    builtin().prop_flat_map(|b| {
        let n = Case::finite_regular(b).rep.dim();
        (Just(b), amplitudes(n), amplitudes(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn charfn_is_hermitian_and_bounded((b, psi, _) in case_and_state()) {
        let case = Case::finite_regular(b);
        let chi = char_fn(&psi, &case.rep).unwrap();
        let g = case.rep.group();
        for e in g.sample_grid() {
            let inv = g.inverse(&e).unwrap();
            let (a, bb) = (chi.eval(&e).unwrap(), chi.eval(&inv).unwrap());
            prop_assert!((a - bb.conj()).norm() < 1e-12);
            prop_assert!(a.norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn reductions_are_states((b, psi, _) in case_and_state()) {
        let case = Case::finite_regular(b);
        let decomp = decompose(&case.rep, &case.table).unwrap();
        let red = reduction(&psi, &decomp).unwrap();
        prop_assert!((red.total_trace() - 1.0).abs() < 1e-10);
        prop_assert!(red.min_eigenvalue() > -1e-10);
    }

    #[test]
    fn global_phase_is_invisible((b, psi, _) in case_and_state(), t in 0.0f64..std::f64::consts::TAU) {
        let case = Case::finite_regular(b);
        let ctx = RepContext::new(case.rep.clone(), case.table.clone(), Tolerances::default()).unwrap();
        let phased = PureState::new(psi.amplitudes() * asymmetry::linalg::cis(t)).unwrap();
        prop_assert_eq!(unitary_g_equiv(&psi, &phased, &ctx).unwrap().outcome, Outcome::Yes);
    }

    #[test]
    fn invariant_unitaries_preserve_everything((b, psi, phi) in case_and_state(), seed in any::<u64>()) {
        let case = Case::finite_regular(b);
        let decomp = decompose(&case.rep, &case.table).unwrap();
        let v = random_invariant_unitary(&decomp, seed);
        let moved = psi.apply(&v).unwrap();
        for g in case.rep.group().sample_grid() {
            let d = char_value(&psi, &case.rep, &g).unwrap() - char_value(&moved, &case.rep, &g).unwrap();
            prop_assert!(d.norm() < 1e-10);
        }
        let f = max_invariant_fidelity(&psi, &phi, &decomp).unwrap();
        prop_assert!(f <= 1.0 + 1e-12);
        prop_assert!(phi.inner(&moved).norm() <= f + 1e-10);
    }

    #[test]
    fn conversion_is_reflexive((b, psi, _) in case_and_state()) {
        let case = Case::finite_regular(b);
        let ctx = RepContext::new(case.rep.clone(), case.table.clone(), Tolerances::default()).unwrap();
        prop_assert_eq!(convertible(&psi, &psi, &ctx).unwrap().outcome, Outcome::Yes);
    }

    #[test]
    fn stabilizer_is_a_subgroup((b, psi, _) in case_and_state()) {
        let case = Case::finite_regular(b);
        let s = sym_group(&psi, &case.rep, 1e-8).unwrap();
        if let asymmetry::SymmetrySubgroup::Finite(el) = s {
            let fg = case.rep.group().as_finite().unwrap().clone();
            prop_assert!(fg.is_subgroup(&el));
        } else {
            prop_assert!(false, "finite group gave a Lie stabilizer");
        }
    }
}
