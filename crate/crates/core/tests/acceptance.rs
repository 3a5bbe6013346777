//! End-to-end acceptance suite. Runs without the libtest harness so every
//! criterion prints one PASS/FAIL line; exits nonzero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_implicit::chowform::{build_chow_matrix, cross_gcd, minors_without_each_pair, ChowLabel, Diagnostics};
use toric_implicit::exact_algebra::{gcd_all, poly_power_root};
use toric_implicit::exact_linalg::{det_cofactor, det_poly, maximal_minor, LinalgError, Matrix};
use toric_implicit::lattice_geometry::{
    basepoint_free_check, degree_formula_check, ehrhart_counts, enumerate_counts, pt, DegreeSpec, LatticePoint,
    Polygon,
};
use toric_implicit::moving_surfaces::build_mq;
use toric_implicit::oracle::{elim_implicitize, verify_vanishing};
use toric_implicit::{implicitize_chow, implicitize_mq, Monomial, Polynomial, Rational, Surface, Var};

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, u64, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn chow_diag(s: &Surface) -> std::result::Result<(toric_implicit::ImplicitResult, toric_implicit::chowform::ChowDiagnostics), String> {
    let r = implicitize_chow(s, 1).map_err(err)?;
    let Diagnostics::Chow(d) = r.diagnostics.clone() else {
        return Err("expected chow diagnostics".into());
    };
    Ok((r, d))
}

/// Determinant of the full matrix, or of a Sylvester-complete maximal
/// minor, for the matrices of the examples.
fn sylvester_minor(s: &Surface) -> std::result::Result<(usize, Polynomial), String> {
    let cm = build_chow_matrix(s).map_err(err)?;
    let m = maximal_minor(&cm.matrix, &cm.sylvester_rows(), &cm.pair_cols(), 1).map_err(err)?;
    Ok((m.rows.len(), m.det))
}

// P1_VARIANT differs from the true quintic in a single term.
fn c1() -> Check {
    let s = quadrilateral();
    let cm = build_chow_matrix(&s).map_err(err)?;
    ensure!(cm.size() == 7 && cm.matrix.is_square(), "matrix is {}x{}", cm.matrix.nrows(), cm.matrix.ncols());
    let det = det_poly(&cm.matrix).map_err(err)?;
    ensure!(det.is_associate(&poly(P1)), "determinant {det}");
    let det = det.normalize();
    ensure!(det == golden(P1), "normalized determinant {det}");
    ensure!(&poly(P1) - &poly(P1_VARIANT) == poly("2X1X3^3 - 2X1X3^2"), "the variant differs by more than one term");
    ensure!(verify_vanishing(&det, s.x(), 4), "determinant does not vanish on the surface");
    let expected_rows = [
        ["0", "1", "-X1", "0", "1", "0", "0"],
        ["1", "0", "-X2", "0", "0", "0", "1"],
        ["0", "0", "-X3", "1", "0", "1", "0"],
    ];
    let ours: Vec<usize> = (0..3)
        .map(|i| cm.matrix.row_index(&ChowLabel::Sylvester(i)).ok_or("missing Sylvester row"))
        .collect::<std::result::Result<_, _>>()?;
    ensure!(cm.matrix.ncols() == 7, "{} columns", cm.matrix.ncols());
    let mut want: Vec<[Polynomial; 3]> = (0..7).map(|c| expected_rows.map(|r| poly(r[c]))).collect();
    let mut got: Vec<[Polynomial; 3]> =
        (0..7).map(|c| [0, 1, 2].map(|i| cm.matrix.get(ours[i], c).clone())).collect();
    let key = |v: &[Polynomial; 3]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
    want.sort_by_key(key);
    got.sort_by_key(key);
    ensure!(want == got, "Sylvester rows are not a column permutation of the expected rows");
    Ok(())
}

fn c2() -> Check {
    let s = one_base_point();
    let (r, d) = chow_diag(&s)?;
    ensure!((d.size, d.generic_rank) == (9, 8), "size {} rank {}", d.size, d.generic_rank);
    let (n, det) = sylvester_minor(&s)?;
    ensure!(n == 8, "minor is {n}x{n}");
    ensure!(det.is_associate(&poly(P2)), "minor determinant {det}");
    ensure!(det == poly(P2).scale(&Rational::from_integer(256.into())) || det == poly(P2).scale(&Rational::from_integer((-256).into())), "constant is not 256 up to sign");
    ensure!(r.implicit == golden(P2), "implicit {}", r.implicit);
    ensure!(r.basepoint_degree == 1, "basepoint_degree {}", r.basepoint_degree);
    ensure!(s.polygon().area2() == 5 && degree_formula_check(s.polygon(), 4, 1, 1), "degree formula");
    Ok(())
}

// The golden uses the constant term that makes the quintic vanish.
fn c3() -> Check {
    let s = four_base_points();
    let (r, d) = chow_diag(&s)?;
    ensure!(d.size == 15, "size {}", d.size);
    let (n, det) = sylvester_minor(&s)?;
    ensure!(n == 11, "minor is {n}x{n}");
    ensure!(det.is_associate(&poly(P3)), "minor determinant {det}");
    ensure!(r.implicit == golden(P3), "implicit {}", r.implicit);
    ensure!(r.degree() == 5 && r.basepoint_degree == 4, "degree {} basepoint_degree {}", r.degree(), r.basepoint_degree);
    ensure!(s.polygon().area2() == 9 && degree_formula_check(s.polygon(), 5, 1, 4), "degree formula");
    Ok(())
}

fn c4() -> Check {
    let s = non_lci();
    let q4 = golden(Q4);
    let cm = build_chow_matrix(&s).map_err(err)?;
    let (rows, cols) = (cm.sylvester_rows(), cm.pair_cols());
    let mut dets = Vec::new();
    for seed in 0..3 {
        for (r, c) in [(&rows[..], &cols[..]), (&rows[..], &[][..]), (&[][..], &[][..])] {
            match maximal_minor(&cm.matrix, r, c, seed) {
                Ok(m) => dets.push(m.det),
                Err(LinalgError::NoSuchMinor) => {}
                Err(e) => return Err(err(e)),
            }
        }
    }
    dets.extend(minors_without_each_pair(&cm, 1).into_iter().map(|(_, d, _)| d));
    ensure!(dets.len() >= 3, "only {} minors", dets.len());
    for d in &dets {
        ensure!(d.exact_div(&q4).is_ok(), "a minor of degree {} is not divisible by the quintic", d.total_degree());
    }
    let chow = implicitize_chow(&s, 1).map_err(err)?;
    let extra = chow.extraneous.as_ref().ok_or("no extraneous factor reported")?;
    ensure!(extra.is_associate(&poly("-X2 + 2X3 - 1")), "extraneous factor {extra}");
    let mq = implicitize_mq(&s, 1).map_err(err)?;
    let crossed = cross_gcd(&chow, &mq, &s, 1).map_err(err)?;
    ensure!(crossed.implicit == q4, "cross_gcd gives {}", crossed.implicit);
    ensure!(chow.implicit == q4, "chow gives {}", chow.implicit);
    Ok(())
}

fn c5() -> Check {
    let s = dependent_columns();
    let p5 = golden(P5);
    let cm = build_chow_matrix(&s).map_err(err)?;
    let (rows, cols) = (cm.sylvester_rows(), cm.pair_cols());
    ensure!(
        matches!(maximal_minor(&cm.matrix, &rows, &cols, 1), Err(LinalgError::NoSuchMinor)),
        "a minor using every Sylvester column exists"
    );
    let minors = minors_without_each_pair(&cm, 1);
    let by_label = |l: &str| minors.iter().find(|(c, _, _)| c.to_string() == l).map(|(_, d, _)| d.clone());
    let x2p = &poly("X2") * &p5;
    let a = by_label("st*f3").ok_or("no minor without st*f3")?;
    ensure!(a.is_associate(&x2p), "without st*f3: {a}");
    let b = by_label("s^2t*f2").ok_or("no minor without s^2t*f2")?;
    ensure!(b.is_associate(&p5), "without s^2t*f2: {b}");
    ensure!(by_label("s^2t*f3").is_none(), "dropping s^2t*f3 gave a Sylvester-complete minor");
    ensure!(gcd_all([&a, &b]).map_err(err)?.normalize() == p5, "gcd is not the implicit equation");
    let r = implicitize_chow(&s, 1).map_err(err)?;
    ensure!(r.implicit == p5, "implicit {}", r.implicit);
    Ok(())
}

fn mq_case(s: &Surface, planes: usize, quadrics: usize, golden_src: &str, linear: bool) -> Check {
    let (mq, d) = build_mq(s, None, 1).map_err(err)?;
    ensure!((d.planes, d.quadrics) == (planes, quadrics), "{} planes + {} quadrics", d.planes, d.quadrics);
    let n = planes + quadrics;
    ensure!(mq.matrix.nrows() == n && mq.matrix.ncols() == n, "matrix is {}x{}", mq.matrix.nrows(), mq.matrix.ncols());
    if linear {
        let deg = (0..n).flat_map(|r| mq.matrix.row(r).iter().map(|p| p.total_degree())).max().unwrap_or(0);
        ensure!(deg <= 1, "entries of degree {deg}");
    }
    ensure!(mq.annihilates(s.x()), "rows do not annihilate the parameterization");
    let det = det_poly(&mq.matrix).map_err(err)?;
    ensure!(det.is_associate(&poly(golden_src)), "determinant {det}");
    let r = implicitize_mq(s, 1).map_err(err)?;
    ensure!(r.implicit == golden(golden_src), "implicit {}", r.implicit);
    Ok(())
}

fn c9() -> Check {
    let mut n = 0;
    for (k, v) in GENERIC_POLYGONS[..5].iter().enumerate() {
        let q = polygon(v);
        for j in 0..4u64 {
            let s = Surface::new(random_components(&q, 1000 * k as u64 + j)).map_err(err)?;
            ensure!(basepoint_free_check(s.supports()).map_err(err)?.0, "polygon {k} seed {j}: supports fail the criterion");
            check_generic(&s, j, true).map_err(|e| format!("polygon {k} seed {j}: {e}"))?;
            n += 1;
        }
    }
    ensure!(n == 20, "{n} instances");
    Ok(())
}

fn random_polygon(rng: &mut ChaCha8Rng) -> Polygon {
    loop {
        let n = rng.gen_range(3..=8);
        let pts: Vec<LatticePoint> = (0..n).map(|_| pt(rng.gen_range(0..=8), rng.gen_range(0..=8))).collect();
        if let Ok(q) = Polygon::hull(&pts) {
            return q;
        }
    }
}

fn c10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..50 {
        let q = random_polygon(&mut rng);
        let n = q.edges().len();
        for k in 1..=3 {
            ensure!(ehrhart_counts(&q, k) == enumerate_counts(&q, k), "Ehrhart counts differ for k = {k}");
            for start in 0..n {
                for len in 1..n {
                    let mut set: Vec<usize> = (0..len).map(|j| (start + j) % n).collect();
                    set.sort_unstable();
                    let pushed = DegreeSpec::pushed(&q, k, &set);
                    let minus: Vec<LatticePoint> = DegreeSpec::scaled(&q, k)
                        .basis()
                        .iter()
                        .copied()
                        .filter(|p| set.iter().all(|&i| p.dot(q.edges()[i].eta) != -k * q.edges()[i].offset))
                        .collect();
                    ensure!(pushed.basis() == &minus[..], "pushed piece differs from kQ minus the chain");
                }
            }
        }
    }
    let p = golden(P1);
    for d in 1..=3 {
        let (root, e) = poly_power_root(&p.pow(d).scale(&Rational::new((-3).into(), 7.into())), None).map_err(err)?;
        ensure!(root.is_associate(&p) && e == d, "power root of exponent {d} gave exponent {e}");
    }
    for n in 1..=5 {
        for _ in 0..8 {
            let rows: Vec<Vec<Polynomial>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let mut p = Polynomial::int(rng.gen_range(-4..=4));
                            for v in &Var::XS[..3] {
                                p.add_term(Monomial::var(*v, 1), Rational::from_integer(rng.gen_range(-3i64..=3).into()));
                            }
                            p
                        })
                        .collect()
                })
                .collect();
            let m: toric_implicit::exact_linalg::PolyMatrix = Matrix::from_rows(rows);
            ensure!(det_poly(&m).map_err(err)? == det_cofactor(&m), "Bareiss and cofactor disagree at size {n}");
        }
    }
    Ok(())
}

fn c11() -> Check {
    for (src, want) in [
        (["s", "t", "st", "1"], "X1X2 - X3"),
        (["1 + s + t", "s", "t", "1"], "X1 - X2 - X3 - 1"),
    ] {
        let s = surface(src);
        let want = golden(want);
        let chow = implicitize_chow(&s, 1).map_err(err)?.implicit;
        let mq = implicitize_mq(&s, 1).map_err(err)?.implicit;
        let oracle = elim_implicitize(s.x()).map_err(err)?;
        ensure!(chow == want, "chow gives {chow}");
        ensure!(mq == want, "mq gives {mq}");
        ensure!(oracle == want, "oracle gives {oracle}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("quadrilateral, chow: 7x7, determinant, Sylvester rows", 5, c1),
        ("one base point, chow: rank 8, 8x8 minor, basepoint degree 1", 10, c2),
        ("four base points, chow: 15x15, 11x11 minor, quintic", 60, c3),
        ("non-LCI base points, chow: minors divisible, extraneous factor, cross gcd", 60, c4),
        ("dependent Sylvester columns, chow: dropped Sylvester columns and gcd", 60, c5),
        ("quadrilateral, mq: 1 plane + 2 quadrics", 5, || mq_case(&quadrilateral(), 1, 2, P1, false)),
        ("one base point, mq: 2 planes + 1 quadric", 5, || mq_case(&one_base_point(), 2, 1, P2, false)),
        ("four base points, mq: 5 planes, linear 5x5", 10, || mq_case(&four_base_points(), 5, 0, P3, true)),
        ("generic instances: shapes, counts, degrees, agreement", 180, c9),
        ("lattice and algebra micro-suites", 30, c10),
        ("trivial surfaces on all paths", 2, c11),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed <= Duration::from_secs(*limit) {
                Ok(())
            } else {
                Err(format!("over the {limit} s limit"))
            }
        });
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({:.2} s)", i + 1, elapsed.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({:.2} s): {e}", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
