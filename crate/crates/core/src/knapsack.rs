//! Packing and covering instances, their aggregated relaxations, and exact
//! integer hulls of those relaxations by lattice-point enumeration.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::closure::Aggregation;
use crate::exactnum::{integer_row, Rat, RatVector};
use crate::polyhedron::{hrep_to_vrep, vrep_to_hrep, LinearInequality, Polyhedron, Relation};
use crate::{Error, DEFAULT_CELL_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Packing,
    Covering,
}

impl Sense {
    pub fn as_str(self) -> &'static str {
        match self {
            Sense::Packing => "packing",
            Sense::Covering => "covering",
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `{ x ≥ 0 : Ax ≤ b }` (packing) or `{ x ≥ 0 : Ax ≥ b }` (covering) with a
/// nonnegative integer matrix and a positive integer right-hand side.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instance {
    sense: Sense,
    n: usize,
    a: Vec<Vec<u64>>,
    b: Vec<u64>,
}

impl Instance {
    /// Validates the data. All-zero rows are dropped for packing and
    /// rejected for covering.
    pub fn new(sense: Sense, a: Vec<Vec<u64>>, b: Vec<u64>) -> Result<Self, Error> {
        if a.is_empty() {
            return Err(Error::InvalidInstance("instance needs at least one row".into()));
        }
        let n = a[0].len();
        if n == 0 {
            return Err(Error::InvalidInstance("instance needs at least one column".into()));
        }
        if a.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInstance("rows of A differ in length".into()));
        }
        if a.len() != b.len() {
            return Err(Error::InvalidInstance(format!(
                "A has {} rows but b has {} entries",
                a.len(),
                b.len()
            )));
        }
        if let Some(i) = b.iter().position(|&v| v == 0) {
            return Err(Error::InvalidInstance(format!("rhs must be positive (row {})", i + 1)));
        }
        let mut rows = Vec::with_capacity(a.len());
        let mut rhs = Vec::with_capacity(b.len());
        for (i, (row, bi)) in a.into_iter().zip(b).enumerate() {
            if row.iter().all(|&v| v == 0) {
                match sense {
                    Sense::Packing => continue,
                    Sense::Covering => {
                        return Err(Error::InvalidInstance(format!(
                            "zero row infeasible for covering (row {})",
                            i + 1
                        )))
                    }
                }
            }
            rows.push(row);
            rhs.push(bi);
        }
        if rows.is_empty() {
            return Err(Error::InvalidInstance(
                "every row is zero; the relaxation is the whole orthant".into(),
            ));
        }
        Ok(Instance {
            sense,
            n,
            a: rows,
            b: rhs,
        })
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Vec<u64>] {
        &self.a
    }

    pub fn b(&self) -> &[u64] {
        &self.b
    }

    pub fn row(&self, i: usize) -> RatVector {
        RatVector::new(self.a[i].iter().map(|&v| Rat::from_int(v)).collect())
    }

    /// Whether `x` satisfies `x ≥ 0` and every row.
    pub fn contains(&self, x: &RatVector) -> bool {
        if x.iter().any(Rat::is_negative) {
            return false;
        }
        (0..self.m()).all(|i| {
            let lhs = self.row(i).dot(x);
            let b = Rat::from_int(self.b[i]);
            match self.sense {
                Sense::Packing => lhs <= b,
                Sense::Covering => lhs >= b,
            }
        })
    }

    /// The relaxation with every constraint kept, i.e. `Λ = I_m`.
    pub fn full_aggregation(&self) -> Aggregation {
        let m = self.m();
        Aggregation::from_columns((0..m).map(|i| RatVector::unit(m, i)).collect())
            .and_then(|a| a.normalize())
            .expect("unit columns")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnapsackRelaxation {
    parent: Instance,
    weights: Aggregation,
    rows: Vec<RatVector>,
    rhs: Vec<Rat>,
}

impl KnapsackRelaxation {
    pub fn parent(&self) -> &Instance {
        &self.parent
    }

    pub fn weights(&self) -> &Aggregation {
        &self.weights
    }

    pub fn sense(&self) -> Sense {
        self.parent.sense
    }

    pub fn n(&self) -> usize {
        self.parent.n
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn aggregated_rows(&self) -> &[RatVector] {
        &self.rows
    }

    pub fn aggregated_rhs(&self) -> &[Rat] {
        &self.rhs
    }
}

/// `Λᵀ A x (≤|≥) Λᵀ b` for the nonzero columns of `Λ`.
pub fn build_relaxation(inst: &Instance, agg: &Aggregation) -> Result<KnapsackRelaxation, Error> {
    if agg.m() != inst.m() {
        return Err(Error::Dimension(format!(
            "aggregation has {} entries but the instance has {} rows",
            agg.m(),
            inst.m()
        )));
    }
    let weights = agg.normalize()?;
    let mut rows = Vec::with_capacity(weights.k());
    let mut rhs = Vec::with_capacity(weights.k());
    for lambda in weights.columns() {
        // accumulate over the common denominator, reduce once per entry
        let denom = lambda
            .iter()
            .fold(BigInt::from(1), |l, x| num_integer::Integer::lcm(&l, x.denom()));
        let scaled: Vec<BigInt> = lambda.iter().map(|x| x.numer() * (&denom / x.denom())).collect();
        let mut row = vec![BigInt::zero(); inst.n];
        let mut beta = BigInt::zero();
        for (i, li) in scaled.iter().enumerate() {
            if li.is_zero() {
                continue;
            }
            for (acc, &a) in row.iter_mut().zip(&inst.a[i]) {
                *acc += li * a;
            }
            beta += li * inst.b[i];
        }
        let ratio = |v: BigInt| Rat::new(v, denom.clone()).expect("positive denominator");
        rows.push(row.into_iter().map(ratio).collect());
        rhs.push(ratio(beta));
    }
    Ok(KnapsackRelaxation {
        parent: inst.clone(),
        weights,
        rows,
        rhs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePoints {
    /// Packing: every feasible point with free coordinates at zero.
    /// Covering: the domination-minimal feasible points. Lexicographic order.
    pub points: Vec<Vec<i64>>,
    /// Coordinates with a zero coefficient in every aggregated row.
    pub free_coords: Vec<usize>,
}

/// Integer rows `(c, r)` scaled from the aggregated system.
struct IntSystem {
    coeffs: Vec<Vec<i128>>,
    rhs: Vec<i128>,
}

fn to_i128(v: &BigInt) -> Result<i128, Error> {
    v.to_i128().ok_or(Error::Overflow)
}

fn integer_system(rel: &KnapsackRelaxation) -> Result<IntSystem, Error> {
    let mut coeffs = Vec::new();
    let mut rhs = Vec::new();
    for (row, beta) in rel.rows.iter().zip(&rel.rhs) {
        let mut all = row.entries().to_vec();
        all.push(beta.clone());
        let ints = integer_row(&all);
        let (last, first) = ints.split_last().expect("rhs entry");
        if first.iter().all(Zero::is_zero) {
            match rel.sense() {
                Sense::Packing => continue,
                Sense::Covering => return Err(Error::EmptyRelaxation),
            }
        }
        coeffs.push(first.iter().map(to_i128).collect::<Result<_, _>>()?);
        rhs.push(to_i128(last)?);
    }
    Ok(IntSystem { coeffs, rhs })
}

fn ceil_div(p: i128, q: i128) -> i128 {
    (p + q - 1).div_euclid(q)
}

fn check_budget(bounds: &[i128], budget: u64) -> Result<(), Error> {
    let cells = bounds
        .iter()
        .try_fold(1u128, |acc, &u| acc.checked_mul(u as u128 + 1))
        .unwrap_or(u128::MAX);
    if cells > budget as u128 {
        return Err(Error::Budget { cells, budget });
    }
    Ok(())
}

/// Depth-first walk over the box `0 ≤ x_j ≤ bounds[j]` in lexicographic
/// order, keeping the row activities `Σ c_tj x_j`. `grow(act, j)` decides
/// whether coordinate `j` may be raised past its current value; `leaf`
/// receives every complete assignment.
fn walk_box(
    sys: &IntSystem,
    bounds: &[i128],
    grow: &dyn Fn(&[i128], usize) -> bool,
    leaf: &mut dyn FnMut(&[i64], &[i128]),
) -> Result<(), Error> {
    struct Walk<'a> {
        sys: &'a IntSystem,
        bounds: &'a [i128],
        grow: &'a dyn Fn(&[i128], usize) -> bool,
        x: Vec<i64>,
        act: Vec<i128>,
    }
    fn rec(w: &mut Walk<'_>, j: usize, leaf: &mut dyn FnMut(&[i64], &[i128])) -> Result<(), Error> {
        if j == w.x.len() {
            leaf(&w.x, &w.act);
            return Ok(());
        }
        let mut v = 0i128;
        loop {
            w.x[j] = v as i64;
            rec(w, j + 1, leaf)?;
            if v == w.bounds[j] || !(w.grow)(&w.act, j) {
                break;
            }
            for (t, a) in w.act.iter_mut().enumerate() {
                *a = a.checked_add(w.sys.coeffs[t][j]).ok_or(Error::Overflow)?;
            }
            v += 1;
        }
        for (t, a) in w.act.iter_mut().enumerate() {
            *a -= w.sys.coeffs[t][j] * v;
        }
        w.x[j] = 0;
        Ok(())
    }
    let mut w = Walk {
        sys,
        bounds,
        grow,
        x: vec![0; bounds.len()],
        act: vec![0; sys.rhs.len()],
    };
    rec(&mut w, 0, leaf)
}

fn free_coords(sys: &IntSystem, n: usize) -> Vec<usize> {
    (0..n).filter(|&j| sys.coeffs.iter().all(|c| c[j] == 0)).collect()
}

fn packing_bounds(sys: &IntSystem, n: usize) -> Vec<i128> {
    (0..n)
        .map(|j| {
            sys.coeffs
                .iter()
                .zip(&sys.rhs)
                .filter(|(c, _)| c[j] > 0)
                .map(|(c, r)| r.div_euclid(c[j]))
                .min()
                .unwrap_or(0)
        })
        .collect()
}

fn covering_bounds(sys: &IntSystem, n: usize) -> Vec<i128> {
    (0..n)
        .map(|j| {
            sys.coeffs
                .iter()
                .zip(&sys.rhs)
                .filter(|(c, _)| c[j] > 0)
                .map(|(c, r)| ceil_div(*r, c[j]).max(0))
                .max()
                .unwrap_or(0)
        })
        .collect()
}

/// Feasible packing points; with `vertex_candidates` set, only points `p`
/// for which `p + e_j` is infeasible whenever `p_j ≥ 1` (the others are
/// midpoints of `p ± e_j` and cannot be vertices).
fn packing_points(sys: &IntSystem, n: usize, budget: u64, vertex_candidates: bool) -> Result<Vec<Vec<i64>>, Error> {
    let bounds = packing_bounds(sys, n);
    check_budget(&bounds, budget)?;
    let rhs = &sys.rhs;
    let coeffs = &sys.coeffs;
    let fits = |act: &[i128], j: usize| (0..rhs.len()).all(|t| act[t] + coeffs[t][j] <= rhs[t]);
    let mut out = Vec::new();
    walk_box(sys, &bounds, &fits, &mut |x, act| {
        if vertex_candidates {
            let extendable = (0..n).any(|j| x[j] >= 1 && (0..rhs.len()).all(|t| act[t] + sys.coeffs[t][j] <= rhs[t]));
            if extendable {
                return;
            }
        }
        out.push(x.to_vec());
    })?;
    Ok(out)
}

fn covering_minimal_points(sys: &IntSystem, n: usize, budget: u64) -> Result<Vec<Vec<i64>>, Error> {
    let bounds = covering_bounds(sys, n);
    check_budget(&bounds, budget)?;
    let rhs = &sys.rhs;
    // a prefix that is already feasible cannot be raised and stay minimal
    let unmet = |act: &[i128], _j: usize| act.iter().zip(rhs).any(|(a, r)| a < r);
    let mut out = Vec::new();
    walk_box(sys, &bounds, &unmet, &mut |x, act| {
        let feasible = act.iter().zip(rhs).all(|(a, r)| a >= r);
        if !feasible {
            return;
        }
        let reducible = (0..n).any(|j| x[j] >= 1 && (0..rhs.len()).all(|t| act[t] - sys.coeffs[t][j] >= rhs[t]));
        if !reducible {
            out.push(x.to_vec());
        }
    })?;
    Ok(out)
}

/// Lattice points of the relaxation, with the default cell budget.
pub fn lattice_points(rel: &KnapsackRelaxation) -> Result<LatticePoints, Error> {
    lattice_points_with_budget(rel, DEFAULT_CELL_BUDGET)
}

pub fn lattice_points_with_budget(rel: &KnapsackRelaxation, budget: u64) -> Result<LatticePoints, Error> {
    let sys = integer_system(rel)?;
    let n = rel.n();
    let points = match rel.sense() {
        Sense::Packing => packing_points(&sys, n, budget, false)?,
        Sense::Covering => covering_minimal_points(&sys, n, budget)?,
    };
    let free_coords = match rel.sense() {
        Sense::Packing => free_coords(&sys, n),
        Sense::Covering => Vec::new(),
    };
    Ok(LatticePoints { points, free_coords })
}

/// Exact integer hull of a one-row relaxation, with the default budget.
pub fn integer_hull(rel: &KnapsackRelaxation) -> Result<Polyhedron, Error> {
    integer_hull_with_budget(rel, DEFAULT_CELL_BUDGET)
}

/// Exact integer hull of a relaxation with any number of aggregated rows.
pub fn integer_hull_multi(rel: &KnapsackRelaxation) -> Result<Polyhedron, Error> {
    integer_hull_with_budget(rel, DEFAULT_CELL_BUDGET)
}

pub fn integer_hull_with_budget(rel: &KnapsackRelaxation, budget: u64) -> Result<Polyhedron, Error> {
    if rel.n() == 1 {
        return Ok(interval_hull(rel));
    }
    let sys = integer_system(rel)?;
    let n = rel.n();
    let (points, rays): (Vec<Vec<i64>>, Vec<RatVector>) = match rel.sense() {
        Sense::Packing => {
            let pts = packing_points(&sys, n, budget, true)?;
            let rays = free_coords(&sys, n)
                .into_iter()
                .map(|j| RatVector::unit(n, j))
                .collect();
            (pts, rays)
        }
        Sense::Covering => {
            let pts = covering_minimal_points(&sys, n, budget)?;
            (pts, (0..n).map(|j| RatVector::unit(n, j)).collect())
        }
    };
    let points: Vec<RatVector> = points.iter().map(|p| RatVector::from_ints(p)).collect();
    let hull: Polyhedron = vrep_to_hrep(&points, &rays);
    debug_assert!(hull.is_integral());
    Ok(hull)
}

/// One column: `0 ≤ x ≤ min ⌊β/α⌋` or `x ≥ max ⌈β/α⌉` over the aggregated rows.
fn interval_hull(rel: &KnapsackRelaxation) -> Polyhedron {
    let mut ineqs = vec![LinearInequality::nonnegativity(1, 0)];
    for (row, beta) in rel.rows.iter().zip(&rel.rhs) {
        let alpha = &row[0];
        if alpha.is_zero() {
            if rel.sense() == Sense::Covering {
                return Polyhedron::empty(1);
            }
            continue;
        }
        let ratio = beta.checked_div(alpha).expect("nonzero coefficient");
        let (bound, relation) = match rel.sense() {
            Sense::Packing => (ratio.floor(), Relation::Le),
            Sense::Covering => (ratio.ceil(), Relation::Ge),
        };
        ineqs.push(
            LinearInequality::new(RatVector::from_ints(&[1]), Rat::from_int(bound), relation).expect("unit normal"),
        );
    }
    hrep_to_vrep(1, &ineqs)
}

/// The hull for aggregation `agg` of `inst`.
pub fn hull_of(inst: &Instance, agg: &Aggregation, budget: u64) -> Result<Polyhedron, Error> {
    integer_hull_with_budget(&build_relaxation(inst, agg)?, budget)
}

/// Chvátal-Gomory cut `⌊λᵀA⌋x ≤ ⌊λᵀb⌋` of a one-row packing relaxation;
/// `None` when every rounded coefficient is zero (the cut is `0 ≤ ⌊λᵀb⌋`).
pub fn cg_cut(rel: &KnapsackRelaxation) -> Option<crate::polyhedron::LinearInequality> {
    let row = &rel.rows[0];
    let normal: RatVector = row.iter().map(|c| Rat::from_int(c.floor())).collect();
    if normal.is_zero() {
        return None;
    }
    let rhs = Rat::from_int(rel.rhs[0].floor());
    crate::polyhedron::LinearInequality::new(normal, rhs, crate::polyhedron::Relation::Le).ok()
}
