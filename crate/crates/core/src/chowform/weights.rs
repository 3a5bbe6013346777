//! Integer weights expressing each Bezout-block entry as a combination of
//! bracket determinants `[abc]`.
//!
//! The weights depend only on the polygon. They are the unique (up to the
//! gauge freedom of row and column operations) solution of a linear system
//! whose equations come from random instances with a forced common root:
//! the block must send the monomial vector at the root into the span of the
//! shifted `f_i`, and must be annihilated on the left by relations among
//! the `f_i`. The system is solved modulo a Mersenne prime, reduced modulo
//! the gauge in a fixed pivot order and lifted by rational reconstruction.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice_geometry::{DegreeSpec, LatticePoint, Polygon};

const P: u64 = (1 << 61) - 1;

fn mulm(a: u64, b: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(P)) as u64
}

fn addm(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn subm(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn powm(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a);
        }
        a = mulm(a, a);
        e >>= 1;
    }
    r
}

fn invm(a: u64) -> u64 {
    powm(a, P - 2)
}

fn signed(x: i64) -> u64 {
    if x >= 0 {
        x as u64 % P
    } else {
        P - ((-x) as u64 % P)
    }
}

/// Reduced row echelon form, pivots taken in `order`.
fn rref(mut rows: Vec<Vec<u64>>, order: &[usize]) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for &c in order {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = invm(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = mulm(*x, inv);
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, y) in row.iter_mut().zip(&pivot) {
                if *y != 0 {
                    *x = subm(*x, mulm(f, *y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

fn nullspace(rows: Vec<Vec<u64>>, n: usize) -> Vec<Vec<u64>> {
    let order: Vec<usize> = (0..n).collect();
    let (red, pivots) = rref(rows, &order);
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; n];
        v[free] = 1;
        for (row, &pc) in red.iter().zip(&pivots) {
            v[pc] = subm(0, row[free]);
        }
        basis.push(v);
    }
    basis
}

fn ratrec(a: u64) -> Option<(i128, i128)> {
    let bound = ((P / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (i128::from(P), i128::from(a));
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if s1 == 0 || s1.abs() > bound {
        return None;
    }
    Some(if s1 < 0 { (-r1, -s1) } else { (r1, s1) })
}

fn orient(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn in_closed(p: LatticePoint, a: LatticePoint, b: LatticePoint, c: LatticePoint) -> bool {
    let o = orient(a, b, c);
    let mut s = [orient(a, b, p), orient(b, c, p), orient(c, a, p)];
    if o < 0 {
        s = s.map(|v| -v);
    }
    s.iter().all(|&v| v >= 0)
}

fn perm_sign(order: [usize; 3], sorted: [usize; 3]) -> i64 {
    let perm = order.map(|x| sorted.iter().position(|&y| y == x).unwrap());
    let mut sign = 1;
    for i in 0..3 {
        for j in i + 1..3 {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

fn sorted3(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

/// One bracket term: `weight * [points[tri0] points[tri1] points[tri2]]`
/// contributes to the entry at row `int2[beta]`, column `points[alpha]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTerm {
    pub tri: [usize; 3],
    pub alpha: usize,
    pub beta: usize,
    pub weight: BigInt,
}

#[derive(Clone, Debug)]
pub struct BracketWeights {
    pub points: Vec<LatticePoint>,
    pub int2: Vec<LatticePoint>,
    pub interior: Vec<LatticePoint>,
    pub terms: Vec<WeightTerm>,
}

struct System {
    points: Vec<LatticePoint>,
    int2: Vec<LatticePoint>,
    interior: Vec<LatticePoint>,
    unknowns: Vec<([usize; 3], usize, usize)>,
    index: HashMap<([usize; 3], usize), usize>,
    point_index: HashMap<LatticePoint, usize>,
    int2_index: HashMap<LatticePoint, usize>,
}

impl System {
    fn new(q: &Polygon) -> System {
        let points = q.lattice_points();
        let int2 = DegreeSpec::interior(q, 2).basis().to_vec();
        let interior = q.interior_points();
        let point_index: HashMap<_, _> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let int2_index: HashMap<_, _> = int2.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let n = points.len();
        let mut unknowns = Vec::new();
        let mut index = HashMap::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let sum = points[i].add(&points[j]).add(&points[k]);
                    for (a, al) in points.iter().enumerate() {
                        if let Some(&b) = int2_index.get(&sum.sub(al)) {
                            index.insert(([i, j, k], a), unknowns.len());
                            unknowns.push(([i, j, k], a, b));
                        }
                    }
                }
            }
        }
        System {
            points,
            int2,
            interior,
            unknowns,
            index,
            point_index,
            int2_index,
        }
    }

    fn instance_count(&self) -> usize {
        3 * self.unknowns.len() / (self.points.len() + self.int2.len()).saturating_sub(3).max(1) + 5
    }

    /// Constraint rows from one random instance with a common root.
    fn instance_rows(&self, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
        let xi = (rng.gen_range(1..P), rng.gen_range(1..P));
        let mon = |q: &LatticePoint| mulm(powm(xi.0, q.x as u64), powm(xi.1, q.y as u64));
        let pm: Vec<u64> = self.points.iter().map(mon).collect();
        let im: Vec<u64> = self.int2.iter().map(mon).collect();
        let n = self.points.len();
        let mut c = [vec![0u64; n], vec![0u64; n], vec![0u64; n]];
        for ci in c.iter_mut() {
            for x in ci.iter_mut() {
                *x = rng.gen_range(0..P);
            }
            let val = ci.iter().zip(&pm).fold(0, |acc, (a, b)| addm(acc, mulm(*a, *b)));
            ci[0] = subm(ci[0], mulm(val, invm(pm[0])));
        }
        let mut brackets: HashMap<[usize; 3], u64> = HashMap::new();
        for (tri, _, _) in &self.unknowns {
            brackets.entry(*tri).or_insert_with(|| {
                let m = |i: usize, j: usize| c[i][tri[j]];
                let d = mulm(m(0, 0), subm(mulm(m(1, 1), m(2, 2)), mulm(m(1, 2), m(2, 1))));
                let e = mulm(m(0, 1), subm(mulm(m(1, 0), m(2, 2)), mulm(m(1, 2), m(2, 0))));
                let f = mulm(m(0, 2), subm(mulm(m(1, 0), m(2, 1)), mulm(m(1, 1), m(2, 0))));
                addm(subm(d, e), f)
            });
        }
        let mut rows = Vec::new();
        // right: the block applied at the root lies in span{y^a f_i}
        let mut span = Vec::new();
        for ci in &c {
            for a in &self.interior {
                let mut v = vec![0u64; self.int2.len()];
                for (j, q) in self.points.iter().enumerate() {
                    v[self.int2_index[&q.add(a)]] = ci[j];
                }
                span.push(v);
            }
        }
        let ann_right = if span.is_empty() {
            (0..self.int2.len())
                .map(|j| (0..self.int2.len()).map(|k| u64::from(k == j)).collect())
                .collect()
        } else {
            nullspace(span, self.int2.len())
        };
        for w in ann_right {
            rows.push(
                self.unknowns
                    .iter()
                    .map(|(tri, al, be)| mulm(mulm(brackets[tri], pm[*al]), w[*be]))
                    .collect(),
            );
        }
        // left: relations among f_1, f_2, f_3 annihilate the block
        for w in nullspace(c.to_vec(), n) {
            rows.push(
                self.unknowns
                    .iter()
                    .map(|(tri, al, be)| mulm(mulm(brackets[tri], im[*be]), w[*al]))
                    .collect(),
            );
        }
        rows
    }

    fn gauge_vectors(&self) -> Vec<Vec<u64>> {
        let n = self.points.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let beta = self.points[i].add(&self.points[j]);
                if !self.int2_index.contains_key(&beta) {
                    continue;
                }
                let mut v = vec![0u64; self.unknowns.len()];
                for k in (0..n).filter(|&k| k != i && k != j) {
                    let tri = sorted3([i, j, k]);
                    v[self.index[&(tri, k)]] = signed(perm_sign([i, j, k], tri));
                }
                out.push(v);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for a in &self.interior {
                    let alpha = self.points[i].add(&self.points[j]).sub(a);
                    let Some(&al) = self.point_index.get(&alpha) else {
                        continue;
                    };
                    let mut v = vec![0u64; self.unknowns.len()];
                    for k in (0..n).filter(|&k| k != i && k != j) {
                        let tri = sorted3([i, j, k]);
                        if let Some(&u) = self.index.get(&(tri, al)) {
                            v[u] = addm(v[u], signed(perm_sign([k, i, j], tri)));
                        }
                    }
                    out.push(v);
                }
            }
        }
        out
    }

    /// Pivot order: entries whose column point lies outside its triangle
    /// first, then triangle vertices, then other inside points.
    fn pivot_order(&self) -> Vec<usize> {
        let key = |u: &([usize; 3], usize, usize)| {
            let (tri, al, be) = *u;
            let t = tri.map(|i| self.points[i]);
            let a = self.points[al];
            let b = self.int2[be];
            let inside = orient(t[0], t[1], t[2]) != 0 && in_closed(a, t[0], t[1], t[2]);
            let class = match (inside, t.contains(&a)) {
                (false, _) => 0,
                (true, true) => 1,
                (true, false) => 2,
            };
            (class, tri, (a.x, a.y), (b.x, b.y))
        };
        let mut order: Vec<usize> = (0..self.unknowns.len()).collect();
        order.sort_by_key(|&k| key(&self.unknowns[k]));
        order
    }

    fn satisfies(&self, w: &[u64], rng: &mut ChaCha8Rng) -> bool {
        (0..3).all(|_| {
            self.instance_rows(rng).iter().all(|row| {
                row.iter().zip(w).fold(0, |acc, (a, b)| addm(acc, mulm(*a, *b))) == 0
            })
        })
    }

    fn solve(self) -> Result<BracketWeights> {
        if self.unknowns.is_empty() {
            return Ok(BracketWeights {
                points: self.points,
                int2: self.int2,
                interior: self.interior,
                terms: Vec::new(),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_b7a3);
        let order = self.pivot_order();
        let (gauge, gauge_pivots) = rref(self.gauge_vectors(), &order);
        let mut rows = Vec::new();
        let mut batch = self.instance_count();
        for _ in 0..4 {
            for _ in 0..batch {
                rows.extend(self.instance_rows(&mut rng));
            }
            let (reduced, _) = rref(std::mem::take(&mut rows), &(0..self.unknowns.len()).collect::<Vec<_>>());
            rows = reduced;
            let mut kernel = nullspace(rows.clone(), self.unknowns.len());
            for v in kernel.iter_mut() {
                for (g, &pc) in gauge.iter().zip(&gauge_pivots) {
                    let f = v[pc];
                    if f == 0 {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(g) {
                        if *y != 0 {
                            *x = subm(*x, mulm(f, *y));
                        }
                    }
                }
            }
            let (genuine, _) = rref(kernel, &order);
            match genuine.len() {
                0 => return Err(Error::WeightSolve("no solution modulo the gauge".into())),
                1 => return self.lift(&genuine[0], &mut rng),
                _ => batch = batch.max(1) * 2,
            }
        }
        Err(Error::WeightSolve("solution space did not collapse to one class".into()))
    }

    fn lift(self, w: &[u64], rng: &mut ChaCha8Rng) -> Result<BracketWeights> {
        let mut fracs = Vec::with_capacity(w.len());
        for &x in w {
            if x == 0 {
                fracs.push((0i128, 1i128));
                continue;
            }
            fracs.push(ratrec(x).ok_or_else(|| Error::WeightSolve("rational reconstruction failed".into()))?);
        }
        let den = fracs.iter().fold(BigInt::from(1), |acc, (_, d)| acc.lcm(&BigInt::from(*d)));
        let ints: Vec<BigInt> = fracs
            .iter()
            .map(|(n, d)| BigInt::from(*n) * (&den / BigInt::from(*d)))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let ints: Vec<BigInt> = ints.into_iter().map(|x| x / &g).collect();
        let residues: Vec<u64> = ints
            .iter()
            .map(|x| {
                let r = (x.abs() % BigInt::from(P)).iter_u64_digits().next().unwrap_or(0);
                if x.is_negative() {
                    subm(0, r)
                } else {
                    r
                }
            })
            .collect();
        if !self.satisfies(&residues, rng) {
            return Err(Error::WeightSolve("lifted weights fail a fresh instance".into()));
        }
        let terms = self
            .unknowns
            .iter()
            .zip(ints)
            .filter(|(_, x)| !x.is_zero())
            .map(|(&(tri, alpha, beta), weight)| WeightTerm {
                tri,
                alpha,
                beta,
                weight,
            })
            .collect();
        Ok(BracketWeights {
            points: self.points,
            int2: self.int2,
            interior: self.interior,
            terms,
        })
    }
}

type Cache = Mutex<HashMap<Vec<LatticePoint>, Arc<BracketWeights>>>;

/// Weights for `q`, memoized by vertex list.
pub fn bracket_weights(q: &Polygon) -> Result<Arc<BracketWeights>> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = q.vertices().to_vec();
    if let Some(w) = cache.lock().unwrap().get(&key) {
        return Ok(Arc::clone(w));
    }
    let w = Arc::new(System::new(q).solve()?);
    cache.lock().unwrap().insert(key, Arc::clone(&w));
    Ok(w)
}
