#![allow(dead_code)]

use toric_implicit::{Polynomial, Surface};

pub fn poly(src: &str) -> Polynomial {
    src.parse().unwrap_or_else(|e| panic!("bad polynomial {src:?}: {e}"))
}

pub fn surface(src: [&str; 4]) -> Surface {
    Surface::from_strs(src).unwrap()
}

pub fn quadrilateral() -> Surface {
    surface(["s^3 + t^2", "s^2 + t^3", "s^2t + st^2", "st"])
}

pub fn one_base_point() -> Surface {
    surface([
        "1 + s - t + st - s^2t - st^2",
        "1 + s - t - st + s^2t - st^2",
        "1 - s + t - st - s^2t + st^2",
        "1 - s - t + st - s^2t + st^2",
    ])
}

fn four_base_point_parts() -> [Polynomial; 4] {
    let a = poly("s^2 - 2s + 1");
    let b = poly("t^2 - 2t + 1");
    let rows = [
        ("t + t^2", "1 + st - s^2t"),
        ("-t - t^2", "-1 + st + s^2t"),
        ("t - t^2", "-1 - st + s^2t"),
        ("t + t^2", "-1 - st - s^2t"),
    ];
    rows.map(|(u, v)| &(&poly(u) * &a) + &(&poly(v) * &b))
}

pub fn four_base_points() -> Surface {
    Surface::new(four_base_point_parts()).unwrap()
}

pub fn non_lci() -> Surface {
    let k = &(&poly("t + st + st^2") * &poly("s - 1")) * &poly("t - 1");
    Surface::new(four_base_point_parts().map(|x| &x + &k)).unwrap()
}

pub fn dependent_columns() -> Surface {
    surface([
        "s + s^2 + s^3t + s^2t^2 + st^3",
        "st^2 + t^2",
        "s^2t + st",
        "st + t",
    ])
}

pub const P1: &str = "X1^3*X3 - X1^2*X2*X3^2 + X1^2*X2*X3 - X1^2*X2 + 4*X1^2*X3^2 + X1^2*X3 \
    - X1*X2^2*X3^2 + X1*X2^2*X3 - X1*X2^2 - 3*X1*X2*X3^3 - 5*X1*X2*X3 - 2*X1*X2 + 2*X1*X3^3 \
    - 3*X1*X3^2 - X1*X3 + X1 + X2^3*X3 + 4*X2^2*X3^2 + X2^2*X3 + 2*X2*X3^3 - 3*X2*X3^2 - X2*X3 \
    + X2 + X3^5 - 5*X3^3 + 5*X3 + 2";

/// One-term variant with `2X1X3^2` in place of `2X1X3^3`; does not vanish.
pub const P1_VARIANT: &str = "2 + X1 - 5X3^3 - X1^2X2 - X2^2X1 + X3X1^3 + X3X2^3 + X3^5 + X2 + 5X3 \
    + 4X2^2X3^2 - X3X1 - 2X2X1 - X2X3 - 3X2X3^2 + X2^2X3 - 3X2X1X3^3 \
    - X2^2X3^2X1 + 4X1^2X3^2 - 3X1X3^2 + X2^2X1X3 + X3X1^2X2 - X1^2X3^2X2 \
    + 2X2X3^3 + X1^2X3 - 5X1X2X3 + 2X1X3^2";

pub const P2: &str = "2X1 - X2 + X3 - X3^3X1 - X2^2X1^2 + X3X1^2X2 - 5X3X1 + 3X2X1 \
    - 2X3X1X2 - 2X1^2 - 3X1^2X2 + 2X3X2 - 2X2^2 + 4X2^2X1 + X3X1^2 - X2^3 \
    + 3X3X2^2 - 2X3^2 - X3^2X2 + 2X2^3X1 - X2^4 - 2X3^2X2^2 - X3X2^3 \
    + X3^2X1X2 + X3^3 + 4X3^2X1";

pub const P3: &str = "X1**5 + 7*X1**4*X2 + X1**4*X3 + 3*X1**4 + 11*X1**3*X2**2 + 19*X1**3*X2*X3 \
    + 3*X1**3*X2 + 15*X1**3*X3 - 2*X1**3 + 43*X1**2*X2**2*X3 - 14*X1**2*X2**2 + 12*X1**2*X2*X3**2 \
    + 43*X1**2*X2*X3 - 11*X1**2*X2 + 12*X1**2*X3**2 + 6*X1**2*X3 - X1**2 - 3*X1*X2**4 \
    + 12*X1*X2**3*X3 - 4*X1*X2**3 + 36*X1*X2**2*X3**2 - 10*X1*X2**2*X3 + 9*X1*X2**2 \
    + 48*X1*X2*X3**2 - 27*X1*X2*X3 + 13*X1*X2 + 12*X1*X3**2 - 9*X1*X3 + 4*X1 + X2**5 \
    - 8*X2**4*X3 + 6*X2**4 + 20*X2**3*X3**2 - 28*X2**3*X3 + 14*X2**3 + 32*X2**2*X3**2 \
    - 33*X2**2*X3 + 16*X2**2 + 16*X2*X3**2 - 19*X2*X3 + 9*X2 + 4*X3**2 - 5*X3 + 2";

pub const Q4: &str = "101 - 224*X3**5 + 8*X1**5 - 525*X1 + 75*X2 + 2689*X1*X3 - 573*X3 \
    + 5519*X3**2*X1**2 + 3830*X3**3*X1 + 2948*X1**3*X3 + 1310*X3**2 + 155*X1*X3**2*X2**2 \
    - 169*X1*X3*X2**3 - 1970*X3**2*X1**3 - 2308*X1**2*X3*X2 - 487*X3*X2**2*X1 - 1182*X3**4*X1 \
    - 2296*X3**3*X1**2 + 1707*X1*X3*X2 + 1006*X1*X3**3*X2 + 1487*X1**2*X3**2*X2 \
    + 956*X1**3*X3*X2 - 1512*X3**3 - 4795*X1*X3**2 - 2118*X1*X3**2*X2 - 624*X1**4*X3 + X2**5 \
    - 13*X2**4 - 88*X2**2 - 76*X2**3 - 948*X1**3*X2 + 244*X3**4*X2 - 646*X3**3*X2 - 513*X1*X2 \
    - 211*X3**2*X2**2 + 191*X2**3*X1 - 105*X1**2*X2**3 + 1140*X1**2*X2 + 185*X1**2*X3*X2**2 \
    + 143*X3*X2**3 + 255*X1**4*X2 + 3*X3*X2**4 - 42*X3**2*X2**3 + 19*X1*X2**4 + 264*X1*X2**2 \
    - 214*X1**2*X2**2 + 48*X1**3*X2**2 - 385*X3*X2 + 248*X3*X2**2 + 729*X3**2*X2 \
    + 18*X3**3*X2**2 + 337*X1**4 - 1050*X1**3 + 898*X3**4 - 4445*X1**2*X3 + 1133*X1**2";

pub const E4: &str = "-X2 + 2X3 - 1";

pub const P5: &str = "X1*X2*X3 + X1*X2 - X3 - X3^2 - X2*X3^3 - X2^2*X3^2 - X2^3*X3";

/// Normalized form of a golden polynomial.
pub fn golden(src: &str) -> Polynomial {
    poly(src).normalize()
}

/// `a = c * b` for a nonzero rational constant `c`.
pub fn constant_multiple(a: &Polynomial, b: &Polynomial) -> bool {
    a.is_associate(b)
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_implicit::lattice_geometry::{pt, LatticePoint, Polygon};
use toric_implicit::{Monomial, Rational};

/// Small polygons with interior points or short edges, as vertex lists.
pub const GENERIC_POLYGONS: [&[(i64, i64)]; 6] = [
    &[(0, 0), (1, 0), (1, 1), (0, 1)],
    &[(0, 0), (2, 0), (0, 2)],
    &[(0, 0), (2, 0), (2, 1), (0, 1)],
    &[(0, 0), (2, 0), (0, 1)],
    &[(0, 0), (1, 0), (2, 1), (1, 2), (0, 1)],
    &[(0, 0), (1, 0), (2, 1), (2, 2), (1, 2), (0, 1)],
];

pub fn polygon(vertices: &[(i64, i64)]) -> Polygon {
    let v: Vec<LatticePoint> = vertices.iter().map(|&(x, y)| pt(x, y)).collect();
    Polygon::hull(&v).unwrap()
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-9..=9);
        if n != 0 {
            return Rational::new(n.into(), rng.gen_range(1i64..=4).into());
        }
    }
}

/// Four polynomials supported on every lattice point of `q` with random
/// nonzero rational coefficients.
pub fn random_components(q: &Polygon, seed: u64) -> [Polynomial; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = q.lattice_points();
    std::array::from_fn(|_| {
        let mut p = Polynomial::zero();
        for a in &pts {
            p.add_term(Monomial::st(a.x as i32, a.y as i32), random_rational(&mut rng));
        }
        p
    })
}

use toric_implicit::chowform::{build_chow_matrix, ChowLabel};
use toric_implicit::exact_linalg::generic_rank;
use toric_implicit::moving_surfaces::choose_mq;
use toric_implicit::oracle::elim_implicitize;
use toric_implicit::surface::st_coefficients;
use toric_implicit::{implicitize_chow, implicitize_mq, Surface as Surf};

/// Checks a base-point-free instance on both matrix paths and, when
/// `oracle` is set, against elimination. Returns the first failure.
pub fn check_generic(s: &Surf, seed: u64, oracle: bool) -> Result<(), String> {
    let q = s.polygon();
    let (a2, b) = (q.area2(), q.boundary());
    let cm = build_chow_matrix(s).map_err(|e| e.to_string())?;
    let side = (2 * a2 - b + 4) as usize;
    if cm.size() != side || !cm.matrix.is_square() {
        return Err(format!("chow matrix is {}, expected side {side}", cm.size()));
    }
    for (i, f) in s.fs().iter().enumerate() {
        let r = cm.matrix.row_index(&ChowLabel::Sylvester(i)).ok_or("missing Sylvester row")?;
        let coeffs = st_coefficients(f);
        for (c, label) in cm.matrix.col_labels().iter().enumerate() {
            let want = match label {
                ChowLabel::Point(a) => coeffs.get(a).cloned().unwrap_or_default(),
                _ => Polynomial::zero(),
            };
            if cm.matrix.get(r, c) != &want {
                return Err(format!("Sylvester row f{} differs at column {label}", i + 1));
            }
        }
    }
    let rank = generic_rank(&cm.matrix, 3, seed);
    if rank != side {
        return Err(format!("chow generic rank {rank} < {side}"));
    }
    let (mq, d) = choose_mq(s, seed).map_err(|e| e.to_string())?;
    if d.planes as i64 != b - 2 * d.b_i || 2 * d.quadrics as i64 != a2 - b + 2 * d.b_i {
        return Err(format!("mq counts {} + {} (B_I = {})", d.planes, d.quadrics, d.b_i));
    }
    if !d.injective || !d.square || !mq.annihilates(s.x()) {
        return Err(format!("mq matrix: injective {} square {} or annihilation failed", d.injective, d.square));
    }
    let chow = implicitize_chow(s, seed).map_err(|e| e.to_string())?;
    let m = implicitize_mq(s, seed).map_err(|e| e.to_string())?;
    for (name, r) in [("chow", &chow), ("mq", &m)] {
        if i64::from(r.candidate.total_degree()) != a2 {
            return Err(format!("{name} determinant degree {} != 2A = {a2}", r.candidate.total_degree()));
        }
    }
    if !chow.implicit.is_associate(&m.implicit) {
        return Err("chow and mq disagree".into());
    }
    if oracle {
        let o = elim_implicitize(s.x()).map_err(|e| e.to_string())?;
        if !o.is_associate(&chow.implicit) {
            return Err("oracle disagrees with chow".into());
        }
        if i64::from(o.total_degree()) * i64::from(chow.exponent_d) != a2 {
            return Err(format!("oracle degree {} times deg_phi != 2A", o.total_degree()));
        }
    }
    Ok(())
}
