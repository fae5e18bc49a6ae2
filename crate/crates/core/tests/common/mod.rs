//! Test-only oracles. These work on plain `BigRational` data and share no
//! geometry code with the library; library types are used only to read
//! inputs and outputs.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use aggclosure::cli::read_instance;
use aggclosure::{Instance, LinearInequality, Polyhedron, Relation, Sense};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

/// Fixture files sorted by name, with their ids.
pub fn fixtures() -> Vec<(String, Instance)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(fixture_dir())
        .expect("fixture directory")
        .map(|e| e.expect("entry").path())
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let f = read_instance(p).expect("fixture parses");
            let stem = p.file_stem().unwrap().to_string_lossy().into_owned();
            (f.id.unwrap_or(stem), f.instance)
        })
        .collect()
}

/// Fixtures whose continuous relaxation is already integral.
pub fn lp_integral_ids() -> &'static [&'static str] {
    &["pack_identity", "cover_identity", "pack_1d"]
}

pub fn random_instance(
    rng: &mut ChaCha8Rng,
    sense: Sense,
    n: usize,
    m: usize,
    max_a: u64,
    max_b: u64,
    zero_prob: f64,
) -> Instance {
    loop {
        let a: Vec<Vec<u64>> = (0..m)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        if rng.gen_bool(zero_prob) {
                            0
                        } else {
                            rng.gen_range(1..=max_a)
                        }
                    })
                    .collect()
            })
            .collect();
        let b: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=max_b)).collect();
        if let Ok(inst) = Instance::new(sense, a, b) {
            return inst;
        }
    }
}

/// Feasible lattice points of the instance inside a box large enough to
/// hold every vertex of the integer hull (and, for covering, every vertex
/// plus a unit vector). Returns the points and the recession directions
/// of the hull.
pub fn brute_force_points(inst: &Instance) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let n = inst.n();
    let mut upper = vec![0i64; n];
    let mut rays = Vec::new();
    for j in 0..n {
        let col: Vec<(u64, u64)> = inst
            .a()
            .iter()
            .zip(inst.b())
            .filter(|(r, _)| r[j] > 0)
            .map(|(r, &b)| (r[j], b))
            .collect();
        let unit: Vec<i64> = (0..n).map(|i| i64::from(i == j)).collect();
        upper[j] = match inst.sense() {
            Sense::Packing if col.is_empty() => {
                rays.push(unit);
                1
            }
            Sense::Packing => col.iter().map(|&(a, b)| (b / a) as i64).min().unwrap(),
            Sense::Covering => {
                rays.push(unit);
                col.iter().map(|&(a, b)| b.div_ceil(a) as i64).max().unwrap_or(0) + 1
            }
        };
    }
    let mut points = Vec::new();
    let mut x = vec![0i64; n];
    loop {
        let ok = inst.a().iter().zip(inst.b()).all(|(row, &b)| {
            let lhs: i64 = row.iter().zip(&x).map(|(&a, &v)| a as i64 * v).sum();
            match inst.sense() {
                Sense::Packing => lhs <= b as i64,
                Sense::Covering => lhs >= b as i64,
            }
        });
        if ok {
            points.push(x.clone());
        }
        let mut j = 0;
        while j < n && x[j] == upper[j] {
            x[j] = 0;
            j += 1;
        }
        if j == n {
            break;
        }
        x[j] += 1;
    }
    (points, rays)
}

fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

pub struct Ineq {
    pub normal: Vec<Q>,
    pub rhs: Q,
    /// `true` for `≤`.
    pub le: bool,
}

impl Ineq {
    pub fn of(f: &LinearInequality) -> Ineq {
        Ineq {
            normal: f.normal().iter().map(|r| r.as_big().clone()).collect(),
            rhs: f.rhs().as_big().clone(),
            le: f.relation() == Relation::Le,
        }
    }

    fn lhs(&self, x: &[Q]) -> Q {
        self.normal.iter().zip(x).fold(Q::zero(), |s, (a, v)| s + a * v)
    }

    pub fn holds(&self, x: &[Q]) -> bool {
        let l = self.lhs(x);
        if self.le {
            l <= self.rhs
        } else {
            l >= self.rhs
        }
    }

    pub fn tight(&self, x: &[Q]) -> bool {
        self.lhs(x) == self.rhs
    }

    pub fn allows(&self, d: &[Q]) -> bool {
        let l = self.lhs(d);
        if self.le {
            !l.is_positive()
        } else {
            !l.is_negative()
        }
    }
}

/// Rank of a list of rational vectors by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map(Vec::len).unwrap_or(0);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                let pivot = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
    }
    r
}

/// The unique solution of a square system, if any.
pub fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                let pivot = a[c].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
                let d = f * &b[c];
                b[i] -= d;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn subsets(len: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if len < k {
        return vec![];
    }
    let mut out = subsets(len - 1, k);
    for mut s in subsets(len - 1, k - 1) {
        s.push(len - 1);
        out.push(s);
    }
    out
}

/// Vertices of `{x : ineqs}` by solving every square subsystem.
pub fn brute_vertices(n: usize, ineqs: &[Ineq]) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = Vec::new();
    for s in subsets(ineqs.len(), n) {
        let a = s.iter().map(|&i| ineqs[i].normal.clone()).collect();
        let b = s.iter().map(|&i| ineqs[i].rhs.clone()).collect();
        if let Some(x) = solve(a, b) {
            if ineqs.iter().all(|f| f.holds(&x)) && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// Extreme rays of the pointed cone `{d : homogeneous ineqs}` for `n ≤ 3`.
pub fn brute_cone_rays(n: usize, ineqs: &[Ineq]) -> Vec<Vec<Q>> {
    let mut candidates: Vec<Vec<Q>> = Vec::new();
    match n {
        1 => candidates.push(vec![q(1)]),
        2 => {
            for f in ineqs {
                candidates.push(vec![-f.normal[1].clone(), f.normal[0].clone()]);
            }
        }
        3 => {
            for s in subsets(ineqs.len(), 2) {
                let (u, v) = (&ineqs[s[0]].normal, &ineqs[s[1]].normal);
                candidates.push(vec![
                    &u[1] * &v[2] - &u[2] * &v[1],
                    &u[2] * &v[0] - &u[0] * &v[2],
                    &u[0] * &v[1] - &u[1] * &v[0],
                ]);
            }
        }
        _ => panic!("cone oracle handles n <= 3"),
    }
    let mut out = Vec::new();
    for c in candidates {
        if c.iter().all(Zero::is_zero) {
            continue;
        }
        let neg: Vec<Q> = c.iter().map(|x| -x).collect();
        for d in [c, neg] {
            if ineqs.iter().all(|f| f.allows(&d)) {
                out.push(d);
            }
        }
    }
    out
}

/// Checks that `p`'s H-rep is exactly the canonical facet description of
/// `conv(points) + cone(rays)` for a full-dimensional hull. Returns a
/// reason on failure.
pub fn certify_hull(p: &Polyhedron, points: &[Vec<i64>], rays: &[Vec<i64>]) -> Result<(), String> {
    let n = p.dim();
    let pts: Vec<Vec<Q>> = points.iter().map(|x| to_q(x)).collect();
    let dirs: Vec<Vec<Q>> = rays.iter().map(|x| to_q(x)).collect();
    let ineqs: Vec<Ineq> = p.hrep().iter().map(Ineq::of).collect();
    for (f, raw) in ineqs.iter().zip(p.hrep()) {
        if let Some(x) = pts.iter().find(|x| !f.holds(x)) {
            return Err(format!("{raw} cuts off {x:?}"));
        }
        if dirs.iter().any(|d| !f.allows(d)) {
            return Err(format!("{raw} cuts a recession direction"));
        }
        // facet: tight on n affinely independent points of the hull
        let mut tight: Vec<Vec<Q>> = pts.iter().filter(|x| f.tight(x)).cloned().collect();
        for x in pts.iter().filter(|x| f.tight(x)) {
            for d in dirs.iter().filter(|d| f.lhs(d).is_zero()) {
                tight.push(x.iter().zip(d).map(|(a, b)| a + b).collect());
            }
        }
        let Some(base) = tight.first().cloned() else {
            return Err(format!("{raw} is tight nowhere"));
        };
        let diffs = tight
            .iter()
            .map(|x| x.iter().zip(&base).map(|(a, b)| a - b).collect())
            .collect();
        if rank(diffs) != n - 1 {
            return Err(format!("{raw} is not a facet"));
        }
        // canonical scaling
        let numbers: Vec<&Q> = f.normal.iter().chain([&f.rhs]).collect();
        if numbers.iter().any(|x| !x.is_integer()) {
            return Err(format!("{raw} is not integral"));
        }
        let g = numbers
            .iter()
            .fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x.numer()));
        if !g.is_one() {
            return Err(format!("{raw} is not primitive"));
        }
        if f.normal.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            return Err(format!("{raw} has a negative leading coefficient"));
        }
    }
    if !p.hrep().windows(2).all(|w| w[0] < w[1]) {
        return Err("inequalities are not in canonical order".into());
    }
    for v in brute_vertices(n, &ineqs) {
        if !pts.contains(&v) {
            return Err(format!("vertex {v:?} is not a feasible lattice point"));
        }
    }
    let homogeneous: Vec<Ineq> = ineqs
        .iter()
        .map(|f| Ineq {
            normal: f.normal.clone(),
            rhs: Q::zero(),
            le: f.le,
        })
        .collect();
    for d in brute_cone_rays(n, &homogeneous) {
        let inside = d
            .iter()
            .enumerate()
            .all(|(j, x)| !x.is_negative() && (x.is_zero() || dirs.iter().any(|r| r[j].is_positive())));
        if !inside {
            return Err(format!("recession direction {d:?} is not a hull direction"));
        }
    }
    Ok(())
}

/// `i` survives when no other key is componentwise at most it (packing) or
/// at least it (covering) without being equal.
pub fn brute_minimal(keys: &[Vec<Q>], packing: bool) -> Vec<usize> {
    (0..keys.len())
        .filter(|&i| {
            !(0..keys.len()).any(|k| {
                keys[k] != keys[i]
                    && keys[k]
                        .iter()
                        .zip(&keys[i])
                        .all(|(a, b)| if packing { a <= b } else { a >= b })
            })
        })
        .collect()
}
