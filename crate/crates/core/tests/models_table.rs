use k3evenset_core::exactlin::Int;
use k3evenset_core::families::{k3_embedding, LClasses, NsFamily};
use k3evenset_core::lattice::inner_int;
use k3evenset_core::models::{
    self, model_descriptor, sufficient_condition_lattices, table1, MapKind, Polarization, GOLDEN_TABLE1,
};
use k3evenset_core::positivity::{curve_data, riemann_roch_h0};

#[test]
fn every_table_row_matches_golden() {
    for row in &GOLDEN_TABLE1 {
        let entry = table1(row.x).unwrap();
        assert!(entry.mismatches.is_empty(), "{:#?}", entry.mismatches);
        for m in &entry.models {
            assert_eq!(m.moduli_count, 11);
        }
    }
}

#[test]
fn untabulated_family_rejected() {
    assert!(matches!(table1(NsFamily::l(7)), Err(models::ModelError::NotTabulated(_))));
}

#[test]
fn correspondence_is_an_involution() {
    for row in &GOLDEN_TABLE1 {
        let y = models::ns_correspondence(row.x);
        assert_eq!(y, row.y);
        assert_eq!(models::ns_correspondence(y), row.x);
    }
}

#[test]
fn half_polarizations_sum_to_l_minus_nhat() {
    let cases = [(6u64, (2, 0, 3)), (8, (2, 2, 4)), (12, (4, 4, 6))];
    for (d, (a, b, c)) in cases {
        let f = NsFamily::l_prime(d);
        let l1 = Polarization::L1.vector(f).unwrap();
        let l2 = Polarization::L2.vector(f).unwrap();
        assert_eq!(l1.add(&l2).unwrap(), Polarization::LMinusNhat.vector(f).unwrap());
        let got = (
            inner_int(&l1, &l1).unwrap(),
            inner_int(&l2, &l2).unwrap(),
            inner_int(&l1, &l2).unwrap(),
        );
        assert_eq!(got, (Int::from(a), Int::from(b), Int::from(c)), "d = {d}");
    }
}

#[test]
fn fibrations_balance_euler_number() {
    let cases = [
        (NsFamily::l_prime(2), Polarization::L1, (12, 6)),
        (NsFamily::l(4), Polarization::LMinusFirst(4), (16, 4)),
        (NsFamily::l_prime(6), Polarization::L2, (20, 2)),
    ];
    for (f, p, (i1, i2)) in cases {
        let m = model_descriptor(f, p).unwrap();
        assert_eq!(m.map_kind, MapKind::EllipticFibration);
        let fib = m.fibers.unwrap();
        assert_eq!((fib.i1, fib.i2), (i1, i2));
        assert!(models::fibration_euler_check(fib));
    }
}

#[test]
fn h0_spot_values() {
    let h0 = |f: NsFamily, p: Polarization| {
        let ns = f.make().unwrap();
        riemann_roch_h0(&ns, &p.vector(f).unwrap()).unwrap().0
    };
    assert_eq!(h0(NsFamily::l(2), Polarization::LMinusNhat), Int::from(2));
    assert_eq!(h0(NsFamily::l(3), Polarization::LMinusNhat), Int::from(3));
    assert_eq!(h0(NsFamily::l(4), Polarization::LMinusNhat), Int::from(4));
    assert_eq!(h0(NsFamily::l(3), Polarization::TwiceLMinusAll), Int::from(6));
    assert_eq!(h0(NsFamily::l(4), Polarization::TwiceLMinusAll), Int::from(10));
}

#[test]
fn wehler_curve_degree_and_genus() {
    let f = NsFamily::l_prime(8);
    let ns = f.make().unwrap();
    let c = LClasses::new(ns.frame());
    let h = c.half_glue(&[1, 2, 3, 4]);
    let curve = h.scale_int(3).sub(&c.n_sum(&[5, 6, 7, 8])).unwrap();
    assert_eq!(curve_data(&ns, &curve, &h).unwrap(), (Int::from(6), Int::from(6)));
}

#[test]
fn configurations_verify() {
    let checks = sufficient_condition_lattices().unwrap();
    assert_eq!(checks.len(), 9);
    for c in &checks {
        assert!(c.isometric, "{} basis map", c.name);
        assert!(c.lattice.is_even());
        let expect_raw = if c.generator_names.iter().any(|n| n == "delta") { 2 } else { 1 };
        assert_eq!(c.raw_index, Int::from(expect_raw), "{}", c.name);
        if expect_raw == 1 {
            assert!(c.generators_onto, "{} generators", c.name);
        }
    }
    assert!(!models::cone_literal_map_is_isometry().unwrap());
}

#[test]
fn k3_embeddings_are_primitive() {
    for dp in [2u64, 4, 6, 8, 10, 12] {
        let e = k3_embedding(NsFamily::m_prime(dp)).unwrap();
        assert_eq!(e.m_square, Int::from(2 * dp));
        assert!(e.primitive, "d' = {dp}");
        assert!(e.isometric_to_family, "d' = {dp}");
    }
    assert!(k3_embedding(NsFamily::l(2)).is_err());
}
