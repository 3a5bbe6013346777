mod common;

use common::*;
use toric_implicit::chowform::{build_chow_matrix, Diagnostics};
use toric_implicit::oracle::verify_vanishing;
use toric_implicit::{implicitize_chow, implicitize_mq};

#[test]
fn one_term_variants_do_not_vanish() {
    assert!(!verify_vanishing(&poly(P1_VARIANT), quadrilateral().x(), 4));
    assert!(verify_vanishing(&poly(P1), quadrilateral().x(), 4));
    let variant_p3 = &poly(P3) - &poly("10");
    assert!(!verify_vanishing(&variant_p3, four_base_points().x(), 4));
    // the variant differs from the true one by one term
    let diff = &poly(P1) - &poly(P1_VARIANT);
    assert_eq!(diff, poly("2X1X3^3 - 2X1X3^2"));
}

#[test]
fn goldens_vanish() {
    assert!(verify_vanishing(&poly(P2), one_base_point().x(), 4));
    assert!(verify_vanishing(&poly(P3), four_base_points().x(), 4));
    assert!(verify_vanishing(&poly(Q4), non_lci().x(), 4));
    assert!(verify_vanishing(&poly(P5), dependent_columns().x(), 4));
}

#[test]
fn quadrilateral_chow() {
    let s = quadrilateral();
    let r = implicitize_chow(&s, 1).unwrap();
    assert_eq!(r.implicit, golden(P1));
    assert_eq!(r.exponent_d, 1);
    assert_eq!(build_chow_matrix(&s).unwrap().size(), 7);
}

#[test]
fn one_base_point_chow() {
    let r = implicitize_chow(&one_base_point(), 1).unwrap();
    assert_eq!(r.implicit, golden(P2));
    assert_eq!(r.basepoint_degree, 1);
    let Diagnostics::Chow(d) = &r.diagnostics else { panic!() };
    assert_eq!((d.size, d.generic_rank), (9, 8));
    assert!(d.sylvester_complete);
}

#[test]
fn four_base_points_chow() {
    let r = implicitize_chow(&four_base_points(), 1).unwrap();
    let Diagnostics::Chow(d) = &r.diagnostics else { panic!() };
    eprintln!("{d:?}");
    assert_eq!(r.implicit, golden(P3));
    assert_eq!(d.size, 15);
    assert_eq!(d.generic_rank, 11);
}

#[test]
fn non_lci_chow() {
    let r = implicitize_chow(&non_lci(), 1).unwrap();
    let Diagnostics::Chow(d) = &r.diagnostics else { panic!() };
    eprintln!("{d:?}");
    assert_eq!(r.implicit, golden(Q4));
    assert!(r.extraneous.as_ref().unwrap().is_associate(&poly(E4)));
}

#[test]
fn dependent_columns_chow() {
    let r = implicitize_chow(&dependent_columns(), 1).unwrap();
    let Diagnostics::Chow(d) = &r.diagnostics else { panic!() };
    eprintln!("{d:?}");
    assert_eq!(r.implicit, golden(P5));
    assert!(!d.sylvester_complete);
}

#[test]
fn mq_on_examples() {
    for (s, p, planes, quadrics) in [
        (quadrilateral(), P1, 1, 2),
        (one_base_point(), P2, 2, 1),
        (four_base_points(), P3, 5, 0),
        (non_lci(), Q4, 4, 2),
    ] {
        let r = implicitize_mq(&s, 1).unwrap();
        let Diagnostics::Mq(d) = &r.diagnostics else { panic!() };
        eprintln!("{d:?}");
        assert_eq!((d.planes, d.quadrics), (planes, quadrics));
        assert_eq!(r.implicit, golden(p));
    }
}
