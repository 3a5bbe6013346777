//! Exact linear algebra: rational kernels and ranks, polynomial determinants,
//! probabilistic generic rank and certified maximal minors.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact_algebra::{Polynomial, Rational, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("no nonsingular maximal minor contains the required rows and columns")]
    NoSuchMinor,
    #[error("matrix is not square ({0} x {1})")]
    NotSquare(usize, usize),
}

/// Labels decide which rows/columns a minor search drops first.
pub trait MinorLabel: Clone + PartialEq + Debug {
    fn removable(&self) -> bool {
        true
    }
}

impl MinorLabel for usize {}

/// Dense row-major matrix with row and column labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T, L = usize> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
    row_labels: Vec<L>,
    col_labels: Vec<L>,
}

pub type RationalMatrix<L = usize> = Matrix<Rational, L>;
pub type PolyMatrix<L = usize> = Matrix<Polynomial, L>;

impl<T: Clone> Matrix<T, usize> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
            row_labels: (0..r).collect(),
            col_labels: (0..c).collect(),
        }
    }
}

impl<T: Clone, L: Clone> Matrix<T, L> {
    pub fn filled(fill: T, row_labels: Vec<L>, col_labels: Vec<L>) -> Self {
        let (rows, cols) = (row_labels.len(), col_labels.len());
        Matrix {
            rows,
            cols,
            data: vec![fill; rows * cols],
            row_labels,
            col_labels,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_labels(&self) -> &[L] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[L] {
        &self.col_labels
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<T, L> {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
            row_labels: rows.iter().map(|&i| self.row_labels[i].clone()).collect(),
            col_labels: cols.iter().map(|&j| self.col_labels[j].clone()).collect(),
        }
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U, L> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
        }
    }

    pub fn transpose(&self) -> Matrix<T, L> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    pub fn row_index(&self, label: &L) -> Option<usize>
    where
        L: PartialEq,
    {
        self.row_labels.iter().position(|l| l == label)
    }

    pub fn col_index(&self, label: &L) -> Option<usize>
    where
        L: PartialEq,
    {
        self.col_labels.iter().position(|l| l == label)
    }
}

impl<L: Clone> PolyMatrix<L> {
    /// Substitute rationals for `X1..X4`.
    pub fn eval_at(&self, point: &[Rational; 4]) -> RationalMatrix<L> {
        let binding: Vec<(Var, Rational)> = Var::XS.into_iter().zip(point.iter().cloned()).collect();
        self.map(|p| p.eval_rational(&binding).expect("entries are X-only polynomials"))
    }

    /// Maximal X-degree of each row's entries (`-1` for zero rows).
    pub fn row_degrees(&self) -> Vec<i32> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Polynomial::x_degree).max().unwrap_or(-1))
            .collect()
    }
}

fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for c in row {
        den = den.lcm(c.denom());
    }
    row.iter().map(|c| c.numer() * (&den / c.denom())).collect()
}

/// Fraction-free row echelon form over the integers. Returns the reduced rows
/// and the pivot columns, choosing the first nonzero entry in column order.
fn bareiss_echelon(rows: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut a = rows;
    let mut pivots = Vec::new();
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            for j in c + 1..ncols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank<L: Clone>(m: &RationalMatrix<L>) -> usize {
    let rows = (0..m.rows).map(|i| clear_denominators(m.row(i))).collect();
    bareiss_echelon(rows, m.cols).1.len()
}

/// Basis of the right kernel; each vector is integer-primitive.
pub fn kernel_basis<L: Clone>(m: &RationalMatrix<L>) -> Vec<Vec<Rational>> {
    let rows = (0..m.rows).map(|i| clear_denominators(m.row(i))).collect();
    let (ech, pivots) = bareiss_echelon(rows, m.cols);
    // back substitution to reduced form over Q
    let mut red: Vec<Vec<Rational>> = ech
        .iter()
        .map(|row| row.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    for k in (0..red.len()).rev() {
        let pc = pivots[k];
        let inv = red[k][pc].recip();
        for v in red[k].iter_mut() {
            *v *= &inv;
        }
        for i in 0..k {
            let f = red[i][pc].clone();
            if f.is_zero() {
                continue;
            }
            for j in pc..m.cols {
                let sub = &f * &red[k][j];
                red[i][j] -= sub;
            }
        }
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for (k, &pc) in pivots.iter().enumerate() {
            v[pc] = -red[k][free].clone();
        }
        basis.push(primitive_vector(v));
    }
    basis
}

/// Scale a rational vector to coprime integers with a positive last nonzero
/// entry.
pub fn primitive_vector(v: Vec<Rational>) -> Vec<Rational> {
    let ints = clear_denominators(&v);
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v;
    }
    let sign = if ints.iter().rev().find(|x| !x.is_zero()).unwrap().is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.into_iter()
        .map(|x| Rational::from_integer(x * &sign / &g))
        .collect()
}

pub fn mat_vec<L: Clone>(m: &RationalMatrix<L>, v: &[Rational]) -> Vec<Rational> {
    (0..m.rows)
        .map(|i| {
            m.row(i)
                .iter()
                .zip(v)
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

/// Determinant by Laplace expansion along the first row.
pub fn det_cofactor<L: Clone>(m: &PolyMatrix<L>) -> Polynomial {
    assert!(m.is_square());
    let n = m.rows;
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    laplace(m, &rows, &cols)
}

fn laplace<L: Clone>(m: &PolyMatrix<L>, rows: &[usize], cols: &[usize]) -> Polynomial {
    match rows.len() {
        0 => Polynomial::one(),
        1 => m.get(rows[0], cols[0]).clone(),
        2 => {
            m.get(rows[0], cols[0]) * m.get(rows[1], cols[1])
                - m.get(rows[0], cols[1]) * m.get(rows[1], cols[0])
        }
        _ => {
            let mut acc = Polynomial::zero();
            for (k, &c) in cols.iter().enumerate() {
                let e = m.get(rows[0], c);
                if e.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = e * &laplace(m, &rows[1..], &rest);
                if k % 2 == 0 {
                    acc += &term;
                } else {
                    acc -= &term;
                }
            }
            acc
        }
    }
}

fn pivot_cost(p: &Polynomial) -> (i32, usize) {
    (p.total_degree(), p.len())
}

/// Exact determinant: cofactor expansion up to 4x4, fraction-free Bareiss
/// elimination with full pivoting on the simplest entry otherwise.
pub fn det_poly<L: Clone>(m: &PolyMatrix<L>) -> Result<Polynomial, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.rows, m.cols));
    }
    let n = m.rows;
    if n <= 4 {
        return Ok(det_cofactor(m));
    }
    let mut a: Vec<Vec<Polynomial>> = m.to_rows();
    let mut prev = Polynomial::one();
    let mut negate = false;
    for k in 0..n {
        let mut best: Option<((i32, usize), usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, e) in row.iter().enumerate().skip(k) {
                if e.is_zero() {
                    continue;
                }
                let cost = pivot_cost(e);
                if best.as_ref().is_none_or(|(b, _, _)| cost < *b) {
                    best = Some((cost, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else {
            return Ok(Polynomial::zero());
        };
        if pi != k {
            a.swap(pi, k);
            negate = !negate;
        }
        if pj != k {
            for row in a.iter_mut() {
                row.swap(pj, k);
            }
            negate = !negate;
        }
        if k + 1 == n {
            break;
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let mut v = &pivot_row[k] * &row[j];
                if !lead.is_zero() && !pivot_row[j].is_zero() {
                    v -= &(&lead * &pivot_row[j]);
                }
                row[j] = if prev.is_one() {
                    v
                } else {
                    v.exact_div(&prev).expect("Bareiss quotient is exact")
                };
            }
            row[k] = Polynomial::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// Deterministic stream of random evaluation points for `X1..X4`.
pub struct PointStream {
    rng: ChaCha8Rng,
    round: u32,
}

impl PointStream {
    pub fn new(seed: u64) -> Self {
        PointStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
            round: 0,
        }
    }

    /// Next point; the value pool widens with every call.
    pub fn next_point(&mut self) -> [Rational; 4] {
        self.round += 1;
        let bound = 50i64 << self.round.min(20);
        std::array::from_fn(|_| {
            let n = self.rng.gen_range(-bound..=bound);
            let d = self.rng.gen_range(1..=37i64);
            Rational::new(BigInt::from(n), BigInt::from(d))
        })
    }
}

/// Rank over the function field, estimated as the maximum rank at `trials`
/// random rational points.
pub fn generic_rank<L: Clone>(m: &PolyMatrix<L>, trials: usize, seed: u64) -> usize {
    let mut stream = PointStream::new(seed);
    let full = m.rows.min(m.cols);
    let mut best = 0;
    for _ in 0..trials.max(1) {
        best = best.max(rank(&m.eval_at(&stream.next_point())));
        if best == full {
            break;
        }
    }
    best
}

/// Incremental row-independence test over Q.
struct Independence {
    basis: Vec<(usize, Vec<Rational>)>,
}

impl Independence {
    fn new() -> Self {
        Independence { basis: Vec::new() }
    }

    fn try_add(&mut self, v: &[Rational]) -> bool {
        let mut v = v.to_vec();
        for (p, b) in &self.basis {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                let inv = v[p].recip();
                for x in v.iter_mut() {
                    *x *= &inv;
                }
                self.basis.push((p, v));
                true
            }
            None => false,
        }
    }
}

fn greedy_pick(vectors: &[Vec<Rational>], order: &[usize]) -> Vec<usize> {
    let mut ind = Independence::new();
    order
        .iter()
        .copied()
        .filter(|&i| ind.try_add(&vectors[i]))
        .collect()
}

// Required labels in order, then the optional ones last-first with the
// non-removable group ahead of the removable one.
fn preference_order<L: MinorLabel>(labels: &[L], required: &[L]) -> Vec<usize> {
    let req: Vec<usize> = (0..labels.len()).filter(|&i| required.contains(&labels[i])).collect();
    let keep: Vec<usize> = (0..labels.len())
        .rev()
        .filter(|&i| !req.contains(&i) && !labels[i].removable())
        .collect();
    let drop: Vec<usize> = (0..labels.len())
        .rev()
        .filter(|&i| !req.contains(&i) && labels[i].removable())
        .collect();
    req.into_iter().chain(keep).chain(drop).collect()
}

#[derive(Clone, Debug)]
pub struct Minor<L> {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub sub: PolyMatrix<L>,
    pub det: Polynomial,
}

fn select_minor<L: MinorLabel>(
    a: &RationalMatrix<L>,
    required_rows: &[L],
    required_cols: &[L],
) -> Option<(Vec<usize>, Vec<usize>)> {
    let row_vecs = a.to_rows();
    let col_vecs = a.transpose().to_rows();
    let row_order = preference_order(&a.row_labels, required_rows);
    let col_order = preference_order(&a.col_labels, required_cols);
    let n_req_rows = a.row_labels.iter().filter(|l| required_rows.contains(l)).count();
    let n_req_cols = a.col_labels.iter().filter(|l| required_cols.contains(l)).count();
    let ok = |rows: &[usize], cols: &[usize]| {
        rows.len() == cols.len()
            && row_order[..n_req_rows].iter().all(|i| rows.contains(i))
            && col_order[..n_req_cols].iter().all(|j| cols.contains(j))
    };
    // rows first
    let rows = greedy_pick(&row_vecs, &row_order);
    let sub_cols = a.submatrix(&rows, &(0..a.cols).collect::<Vec<_>>()).transpose().to_rows();
    let cols = greedy_pick(&sub_cols, &col_order);
    if ok(&rows, &cols) {
        return Some((rows, cols));
    }
    // columns first
    let cols = greedy_pick(&col_vecs, &col_order);
    let sub_rows = a.submatrix(&(0..a.rows).collect::<Vec<_>>(), &cols).to_rows();
    let rows = greedy_pick(&sub_rows, &row_order);
    if ok(&rows, &cols) {
        return Some((rows, cols));
    }
    None
}

/// A nonsingular square submatrix of generic-rank size that contains every
/// required row and column; removable labels are dropped first.
pub fn maximal_minor<L: MinorLabel>(
    m: &PolyMatrix<L>,
    required_rows: &[L],
    required_cols: &[L],
    seed: u64,
) -> Result<Minor<L>, LinalgError> {
    let mut stream = PointStream::new(seed);
    let target = generic_rank(m, 3, seed);
    for _ in 0..4 {
        let a = m.eval_at(&stream.next_point());
        if rank(&a) < target {
            continue;
        }
        let Some((mut rows, mut cols)) = select_minor(&a, required_rows, required_cols) else {
            continue;
        };
        rows.sort_unstable();
        cols.sort_unstable();
        let sub = m.submatrix(&rows, &cols);
        let det = det_poly(&sub)?;
        if !det.is_zero() {
            return Ok(Minor { rows, cols, sub, det });
        }
    }
    Err(LinalgError::NoSuchMinor)
}
