use std::collections::BTreeSet;
use std::sync::Arc;

use gspin_core::algebra::ArrowAction;
use gspin_core::double::QuantumDouble;
use gspin_core::field::{FieldAlgebra, LatticeWindow};
use gspin_core::observable::{verify_truncated_v, GammaAction, VwLabel};
use gspin_core::verify::{verify_module_algebra, Mode};
use gspin_core::{FiniteGroup, ModuleAction, Qi, StructureAlgebra, Subgroup};
use proptest::prelude::*;

fn groups() -> Vec<FiniteGroup> {
    vec![FiniteGroup::symmetric(3), FiniteGroup::dihedral(4), FiniteGroup::quaternion(), FiniteGroup::cyclic(6)]
}

fn rows(g: &FiniteGroup) -> Vec<Vec<usize>> {
    g.elements().map(|a| g.elements().map(|b| g.mul(a, b) as usize).collect()).collect()
}

#[test]
fn table_round_trip() {
    for g in groups() {
        let back = FiniteGroup::parse_table(&g.to_table_string()).unwrap();
        assert_eq!(rows(&back), rows(&g));
        assert_eq!(back.names(), g.names());
    }
}

proptest! {
    #[test]
    fn corrupted_entry_is_rejected(which in 0usize..4, row in 0usize..8, col in 0usize..8, shift in 1usize..8) {
        let g = &groups()[which];
        let n = g.order();
        let mut t = rows(g);
        let (r, c) = (row % n, col % n);
        t[r][c] = (t[r][c] + shift % (n - 1).max(1)) % n;
        prop_assume!(t[r][c] != g.mul(r as u16, c as u16) as usize);
        prop_assert!(FiniteGroup::from_table(&t, None).is_err());
    }

    #[test]
    fn relabelled_table_is_accepted(which in 0usize..4, seed in any::<u64>()) {
        let g = &groups()[which];
        let n = g.order();
        // fix the identity so the relabelled table keeps it at index 0
        let mut perm: Vec<usize> = (1..n).collect();
        let mut s = seed;
        for i in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        perm.insert(0, 0);
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let t: Vec<Vec<usize>> =
            (0..n).map(|a| (0..n).map(|b| perm[g.mul(inv[a] as u16, inv[b] as u16) as usize]).collect()).collect();
        let h = FiniteGroup::from_table(&t, None).unwrap();
        prop_assert_eq!(h.order(), n);
        prop_assert_eq!(h.is_abelian(), g.is_abelian());
    }
}

#[test]
fn arrow_action_witnesses_are_real() {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let act = ArrowAction::<Qi>::new(Subgroup::closure(&s3, &[4]));
    let report = verify_module_algebra(&act, Mode::Exhaustive);
    assert!(report.law("module_algebra.product").unwrap().passed());
    let law = report.law("action.associativity").unwrap();
    assert!(!law.passed());
    let (h, x) = (act.acting(), act.space());
    let (hb, xb) = (h.basis(), x.basis());
    for w in &law.failures {
        let (a, b, f) = (&hb[w.tuple[0]], &hb[w.tuple[1]], &xb[w.tuple[2]]);
        let basis = gspin_core::AlgebraElement::basis;
        let lhs = act.act(&h.mul_basis(a, b), &basis(*f));
        let rhs = act.act(&basis(*a), &act.act_basis(b, f));
        assert_ne!(lhs, rhs, "witness {:?} does not violate the law", w.labels);
    }
}

#[test]
fn truncated_v_witnesses_are_real() {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let a3 = Subgroup::closure(&s3, &[4]);
    let field = FieldAlgebra::<Qi>::build(&a3, LatticeWindow::new(0, 1).unwrap()).unwrap();
    let gamma = GammaAction::new(QuantumDouble::build(&a3).unwrap(), field).unwrap();
    let law = verify_truncated_v(&gamma).unwrap();
    let field = gamma.field();
    let mut failing = BTreeSet::new();
    for x in field.window().int_sites() {
        for &h in a3.members() {
            let label = VwLabel::TruncatedV { h, x };
            let v = label.element(field).unwrap();
            if gamma.project_z(&v) != v {
                failing.insert(label.render(&s3));
            }
        }
    }
    assert!(!law.failures.is_empty());
    for w in &law.failures {
        assert!(w.labels.iter().all(|l| failing.contains(l)), "{:?} not failing", w.labels);
    }
    assert_eq!(law.failed as usize, failing.len());
}
