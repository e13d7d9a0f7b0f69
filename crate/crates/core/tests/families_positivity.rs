use k3evenset_core::exactlin::{Int, Rat};
use k3evenset_core::families::{
    self, admissible_glues, glue_admissible, glue_equivalent, overlattice, FamilyError, FamilyKind, GlueVector,
    LClasses, NsFamily,
};
use k3evenset_core::lattice::{self, inner, FrameVector};
use k3evenset_core::positivity::{
    self, classify_positivity, is_even_set, PositivityError, PositivityStatus,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn all_families(max: u64) -> Vec<NsFamily> {
    let mut v = Vec::new();
    for p in 1..=max {
        for f in [NsFamily::l(p), NsFamily::l_prime(p), NsFamily::m(p), NsFamily::m_prime(p)] {
            if f.is_constructible() {
                v.push(f);
            }
        }
    }
    v
}

#[test]
fn discriminant_groups_match_shapes() {
    for f in all_families(12) {
        let g = f.discriminant_group().unwrap();
        let mut want = f.predicted_invariant_factors();
        want.sort();
        assert_eq!(g.invariant_factors, want, "{f}");
        let ns = f.make().unwrap();
        assert_eq!(ns.det().abs(), g.order, "{f}");
        assert!(ns.is_even());
        let sig = ns.signature();
        assert_eq!((sig.positive, sig.negative), (1, 8));
    }
}

#[test]
fn odd_prime_families_rejected() {
    assert!(matches!(NsFamily::l_prime(3).make(), Err(FamilyError::OddPrimeL { l2: 6 })));
    assert!(matches!(NsFamily::m_prime(3).make(), Err(FamilyError::OddPrimeM { m2: 6 })));
}

#[test]
fn glue_classification() {
    for d in 1..=12u64 {
        let c = admissible_glues(d).unwrap();
        let expected = match d % 4 {
            2 => 56,
            0 => 70,
            _ => 0,
        };
        assert_eq!(c.glues.len(), expected, "d = {d}");
        if expected > 0 {
            assert_eq!(c.classes.len(), 1, "d = {d}");
            let l = NsFamily::l(d).make().unwrap();
            for g in &c.glues {
                let ov = overlattice(&l, &g.glue_class(l.frame())).unwrap();
                assert!(ov.is_even());
                let n_sub = lattice::IntegerLattice::from_generators(
                    "N",
                    l.frame(),
                    &l.basis_vectors()[1..],
                )
                .unwrap();
                assert!(lattice::is_primitive(&ov, &n_sub).unwrap());
            }
        }
    }
}

#[test]
fn glue_equivalence_examples() {
    let v = GlueVector { support: vec![1, 2] };
    let w = GlueVector { support: vec![3, 4, 5, 6, 7, 8] };
    assert!(glue_equivalent(2, &v, &w).unwrap());
    let u = GlueVector { support: vec![1, 3, 5, 7] };
    assert!(glue_equivalent(4, &GlueVector { support: vec![1, 2, 3, 4] }, &u).unwrap());
    assert!(matches!(
        glue_equivalent(2, &v, &GlueVector { support: vec![1, 2, 3, 4] }),
        Err(FamilyError::Inadmissible { .. })
    ));
    assert!(!glue_admissible(3, &v).unwrap());
}

#[test]
fn even_set_on_every_l_family() {
    for f in all_families(12).into_iter().filter(NsFamily::is_l_type) {
        let ns = f.make().unwrap();
        let c = LClasses::new(ns.frame());
        assert!(is_even_set(&ns, &c.n).unwrap(), "{f}");
    }
}

#[test]
fn m_families_have_no_roots_orthogonal_to_m() {
    // M^perp = E8(-2): negate and scan for vectors of norm <= 2.
    let e8_2 = families::make_named("E8(-2)").unwrap();
    let pos = e8_2.gram().map(|x| -x);
    let short = lattice::short_vectors(&pos, &Int::from(2)).unwrap();
    assert!(short.is_empty());
    let min4 = lattice::short_vectors(&pos, &Int::from(4)).unwrap();
    assert_eq!(min4.len(), 120);
    for f in all_families(12).into_iter().filter(|f| !f.is_l_type()) {
        let ns = f.make().unwrap();
        // E_i have square -4, so no octet of roots can be drawn from them
        let e1 = FrameVector::unit(ns.frame(), 1);
        assert_eq!(inner(&e1, &e1).unwrap(), Rat::from_integer(Int::from(-4)));
        let fake: Vec<FrameVector> = (1..=8).map(|i| FrameVector::unit(ns.frame(), i)).collect();
        assert!(matches!(is_even_set(&ns, &fake), Err(PositivityError::NotRoot { index: 0, .. })), "{f}");
    }
}

#[test]
fn positivity_theorems() {
    for d in 2..=12u64 {
        let ns = NsFamily::l(d).make().unwrap();
        let c = LClasses::new(ns.frame());
        let dv = c.l.sub(&c.nhat).unwrap();
        let r = classify_positivity(&ns, &dv).unwrap();
        let want = if d == 2 { PositivityStatus::Nef } else { PositivityStatus::Ample };
        assert_eq!(r.status, want, "d = {d}");
        for rr in 1..=8usize.min(d as usize - 1) {
            let sup: Vec<usize> = (1..=rr).collect();
            let dv = c.l.sub(&c.n_sum(&sup)).unwrap();
            let r = classify_positivity(&ns, &dv).unwrap();
            assert!(r.status.is_big_and_nef(), "d = {d}, r = {rr}: {:?}", r.status);
        }
    }
    let ns = NsFamily::l(2).make().unwrap();
    let c = LClasses::new(ns.frame());
    for m in 2..=3 {
        let dv = c.l.scale_int(m).sub(&c.nhat).unwrap();
        assert_eq!(classify_positivity(&ns, &dv).unwrap().status, PositivityStatus::Ample);
    }
    assert_eq!(
        classify_positivity(&ns, &c.l.sub(&c.nhat).unwrap().scale_int(2)).unwrap().status,
        PositivityStatus::Nef
    );
}

#[test]
fn positivity_errors() {
    let ns = NsFamily::l(3).make().unwrap();
    let c = LClasses::new(ns.frame());
    let neg = c.l.sub(&c.n_sum(&[1, 2, 3, 4])).unwrap();
    assert!(matches!(classify_positivity(&ns, &neg), Err(PositivityError::NegativeSquare(_))));
    assert!(matches!(classify_positivity(&ns, &c.half_glue(&[1, 2])), Err(PositivityError::NotInLattice)));
    let m = NsFamily::m(2).make().unwrap();
    let mv = FrameVector::unit(m.frame(), 0);
    assert!(matches!(classify_positivity(&m, &mv), Err(PositivityError::UnknownFamily(_))));
}

#[test]
fn not_nef_witness_is_sound() {
    let ns = NsFamily::l(3).make().unwrap();
    let c = LClasses::new(ns.frame());
    // L + N1 has square 4 and meets N1 negatively
    let dv = c.l.add(c.n(1)).unwrap();
    let r = classify_positivity(&ns, &dv).unwrap();
    assert_eq!(r.status, PositivityStatus::NotNef);
    let w = r.witness.unwrap();
    assert_eq!(inner(&w, &w).unwrap(), Rat::from_integer(Int::from(-2)));
    assert!(inner(&w, &dv).unwrap().is_negative());
}

#[test]
fn enumeration_examples() {
    let ns = NsFamily::l(3).make().unwrap();
    let c = LClasses::new(ns.frame());
    let s = positivity::enumerate_obstructing_roots(&ns, &c.l.sub(&c.nhat).unwrap()).unwrap();
    assert!(s.roots.is_empty());
    assert!(s.exceptional.iter().all(|(_, v)| *v == Int::from(1)));
    let ns8 = NsFamily::l(4).make().unwrap();
    let c8 = LClasses::new(ns8.frame());
    let e = c8.l.sub(&c8.n_sum(&[1, 2, 3, 4])).unwrap();
    let big = c8.l.sub(&c8.nhat).unwrap();
    let iso = positivity::isotropic_classes(&ns8, &big, 2).unwrap();
    assert!(iso.is_empty());
    let iso4 = positivity::isotropic_classes(&ns8, &big, 4).unwrap();
    assert!(iso4.contains(&e));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn overlattices_are_even_or_rejected(d in 1u64..=12, mask in 0u16..256) {
        let l = NsFamily::l(d).make().unwrap();
        let g = GlueVector::from_mask(mask);
        match overlattice(&l, &g.glue_class(l.frame())) {
            Ok(ov) => {
                prop_assert!(ov.is_even());
                prop_assert!(glue_admissible(d, &g).unwrap());
            }
            Err(_) => prop_assert!(!glue_admissible(d, &g).unwrap()),
        }
    }

    #[test]
    fn witnesses_satisfy_their_claims(d in 2u64..=8, a in 1i64..=3, b in prop::collection::vec(-2i64..=1, 8)) {
        let ns = NsFamily::l(d).make().unwrap();
        let mut num = vec![Int::from(a)];
        num.extend(b.iter().map(|&x| Int::from(x)));
        let dv = FrameVector::new(ns.frame(), num, Int::from(1)).unwrap();
        let sq = inner(&dv, &dv).unwrap();
        prop_assume!(!sq.is_negative());
        let r = classify_positivity(&ns, &dv).unwrap();
        match r.status {
            PositivityStatus::Ample => prop_assert!(r.witness.is_none()),
            status => {
                if let Some(w) = r.witness {
                    prop_assert!(ns.contains(&w).unwrap());
                    prop_assert_eq!(inner(&w, &w).unwrap(), Rat::from_integer(Int::from(-2)));
                    let p = inner(&w, &dv).unwrap();
                    match status {
                        PositivityStatus::NotNef => prop_assert!(p.is_negative()),
                        _ => prop_assert!(p.is_zero()),
                    }
                } else {
                    prop_assert_eq!(status, PositivityStatus::Nef);
                }
            }
        }
    }
}

#[test]
fn family_kinds_cover_correspondence() {
    for f in all_families(12) {
        let g = f.correspondence();
        if g.is_constructible() {
            assert_eq!(g.correspondence(), f);
        }
        assert_ne!(f.is_l_type(), g.is_l_type());
        assert_eq!(f.kind == FamilyKind::L, g.kind == FamilyKind::MPrime);
    }
}
