//! Sampled aggregation closures and the recursive `K ∩ L` construction.
//!
//! For an instance `Q` the closure is approximated by intersecting the
//! integer hulls of `Q^λ` over a finite multiplier sample. Independently,
//! [`ClosureEngine::aggregation_closure`] builds
//!
//! * `L`, the intersection over `j` of the (recursively computed) closures
//!   of the sub-instances `Q_j`, each embedded with coordinate `j` free;
//! * `T`, the vertex tuples of positive-normal facets of the sampled hulls;
//! * `S ⊆ T`, its domination antichain, and `K`, the halfspaces through `S`;
//!
//! and returns `K ∩ L` together with all intermediate objects. Whether
//! `K ∩ L` coincides with the sampled closure is reported as saturation.
//!
//! One-variable instances use the closed form instead of `K ∩ L`.

mod aggregation;
mod tuples;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::exactnum::{Rat, RatVector};
use crate::knapsack::{build_relaxation, integer_hull_with_budget, Instance, Sense};
use crate::polyhedron::{hrep_to_vrep, intersect, LinearInequality, Polyhedron, Relation};
use crate::{Error, DEFAULT_CELL_BUDGET};

pub use aggregation::{lambda_grid, sample_lambdas, Aggregation, SampleScheme};
pub use tuples::{
    build_k, collect_tuples, filter_minimal_tuples, hull_tuples, minimal_indices, tuple_to_inequality, FacetTuple,
};

/// One sampled multiplier and the integer hull of its relaxation.
#[derive(Clone, Debug)]
pub struct SampledHull {
    pub lambda: Aggregation,
    pub hull: Polyhedron,
}

#[derive(Clone, Debug)]
pub struct ClosureArtifacts {
    pub l: Polyhedron,
    pub k: Polyhedron,
    /// `K ∩ L ∩ ℝⁿ_+`.
    pub closure: Polyhedron,
    /// Covering instances only; `None` when the short-circuit applies.
    pub gamma: Option<u64>,
    pub t_sample: Vec<FacetTuple>,
    pub s: Vec<FacetTuple>,
    pub sample: SampleScheme,
    /// Whether `closure` equals the sampled closure.
    pub saturated: bool,
}

/// `Q_j` in reduced form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubRelaxation {
    /// `Q_j = ℝ_+ × Q'_j` along coordinate `j`, with `Q'_j` given.
    Reduced(Instance),
    /// `Q_j` is the whole nonnegative orthant.
    Orthant,
}

/// Outcome of [`ClosureEngine::separate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separation {
    Cut {
        inequality: LinearInequality,
        violation: Rat,
        lambda: Aggregation,
    },
    Inside,
}

/// Closure computations for a fixed sample scheme and cell budget, with
/// recursive closures and hull lists memoized per instance. Safe to share
/// across threads.
pub struct ClosureEngine {
    scheme: SampleScheme,
    budget: u64,
    closures: Mutex<HashMap<Instance, Arc<ClosureArtifacts>>>,
    hulls: Mutex<HashMap<Instance, Arc<Vec<SampledHull>>>>,
}

impl ClosureEngine {
    pub fn new(scheme: SampleScheme) -> Self {
        Self::with_budget(scheme, DEFAULT_CELL_BUDGET)
    }

    pub fn with_budget(scheme: SampleScheme, budget: u64) -> Self {
        ClosureEngine {
            scheme,
            budget,
            closures: Mutex::new(HashMap::new()),
            hulls: Mutex::new(HashMap::new()),
        }
    }

    pub fn scheme(&self) -> &SampleScheme {
        &self.scheme
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Integer hulls for every sampled multiplier, in sample order.
    pub fn sampled_hulls(&self, inst: &Instance) -> Result<Arc<Vec<SampledHull>>, Error> {
        if let Some(h) = self.hulls.lock().expect("hull cache").get(inst) {
            return Ok(Arc::clone(h));
        }
        let lambdas = sample_lambdas(inst.m(), &self.scheme);
        let hulls: Vec<SampledHull> = lambdas
            .into_par_iter()
            .map(|lambda| {
                let hull = integer_hull_with_budget(&build_relaxation(inst, &lambda)?, self.budget)?;
                Ok(SampledHull { lambda, hull })
            })
            .collect::<Result<_, Error>>()?;
        let hulls = Arc::new(hulls);
        self.hulls
            .lock()
            .expect("hull cache")
            .insert(inst.clone(), Arc::clone(&hulls));
        Ok(hulls)
    }

    /// Intersection of the sampled hulls.
    pub fn sampled_closure(&self, inst: &Instance) -> Result<Polyhedron, Error> {
        let hulls = self.sampled_hulls(inst)?;
        let polys: Vec<Polyhedron> = hulls.iter().map(|h| h.hull.clone()).collect();
        Ok(intersect(&polys))
    }

    pub fn aggregation_closure(&self, inst: &Instance) -> Result<Arc<ClosureArtifacts>, Error> {
        if let Some(c) = self.closures.lock().expect("closure cache").get(inst) {
            return Ok(Arc::clone(c));
        }
        let artifacts = Arc::new(self.compute_closure(inst)?);
        self.closures
            .lock()
            .expect("closure cache")
            .insert(inst.clone(), Arc::clone(&artifacts));
        Ok(artifacts)
    }

    fn compute_closure(&self, inst: &Instance) -> Result<ClosureArtifacts, Error> {
        let n = inst.n();
        let sampled = self.sampled_closure(inst)?;
        let orthant = Polyhedron::orthant(n);
        if n == 1 {
            let closure = closure_1d(inst);
            let bound: Vec<LinearInequality> = closure
                .hrep()
                .iter()
                .filter(|f| !f.is_nonnegativity())
                .cloned()
                .collect();
            return Ok(ClosureArtifacts {
                l: orthant,
                k: hrep_to_vrep(1, &bound),
                saturated: closure == sampled,
                closure,
                gamma: None,
                t_sample: Vec::new(),
                s: Vec::new(),
                sample: self.scheme,
            });
        }
        if inst.sense() == Sense::Covering {
            if let Some(j) = (0..n).find(|&j| inst.a().iter().all(|row| row[j] == 0)) {
                let SubRelaxation::Reduced(sub) = build_qj(inst, j) else {
                    unreachable!("a zero column keeps every row");
                };
                let l = self.aggregation_closure(&sub)?.closure.insert_free_coordinate(j);
                return Ok(ClosureArtifacts {
                    k: Polyhedron::whole_space(n),
                    saturated: l == sampled,
                    closure: l.clone(),
                    l,
                    gamma: None,
                    t_sample: Vec::new(),
                    s: Vec::new(),
                    sample: self.scheme,
                });
            }
        }

        let l = self.build_l(inst)?;
        let hulls = self.sampled_hulls(inst)?;
        let t_sample = collect_tuples(hulls.iter().map(|h| (&h.lambda, &h.hull)));
        let s = filter_minimal_tuples(&t_sample, inst.sense());
        let k = build_k(n, &s, inst.sense())?;
        let closure = intersect(&[k.clone(), l.clone(), orthant]);
        let gamma = match inst.sense() {
            Sense::Covering => Some(compute_gamma(inst)),
            Sense::Packing => None,
        };
        log::debug!(
            "closure of {}x{} {} instance: |T| = {}, |S| = {}",
            inst.m(),
            n,
            inst.sense(),
            t_sample.len(),
            s.len()
        );
        Ok(ClosureArtifacts {
            saturated: closure == sampled,
            l,
            k,
            closure,
            gamma,
            t_sample,
            s,
            sample: self.scheme,
        })
    }

    /// `L = ⋂_j (ℝ_+ × closure(Q'_j)) ∩ ℝⁿ_+`.
    pub fn build_l(&self, inst: &Instance) -> Result<Polyhedron, Error> {
        let n = inst.n();
        let pieces: Vec<Polyhedron> = (0..n)
            .into_par_iter()
            .map(|j| match build_qj(inst, j) {
                SubRelaxation::Orthant => Ok(Polyhedron::orthant(n)),
                SubRelaxation::Reduced(sub) => Ok(self.aggregation_closure(&sub)?.closure.insert_free_coordinate(j)),
            })
            .collect::<Result<_, Error>>()?;
        let mut all = pieces;
        all.push(Polyhedron::orthant(n));
        Ok(intersect(&all))
    }

    /// The most violated facet of a sampled hull at `x_star`, by violation
    /// of the canonical integer form, ties broken by sample order. Each
    /// refinement round doubles the resolution around the best multiplier
    /// found so far and tries its neighbours `v + e_a − e_b`.
    pub fn separate(&self, inst: &Instance, x_star: &RatVector) -> Result<Separation, Error> {
        if x_star.dim() != inst.n() {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, instance has {} columns",
                x_star.dim(),
                inst.n()
            )));
        }
        let hulls = self.sampled_hulls(inst)?;
        let mut best: Option<(Rat, LinearInequality, Aggregation)> = None;
        let consider =
            |hull: &Polyhedron, lambda: &Aggregation, best: &mut Option<(Rat, LinearInequality, Aggregation)>| {
                for f in hull.hrep() {
                    let v = f.violation(x_star);
                    if best.as_ref().is_none_or(|(bv, _, _)| &v > bv) {
                        *best = Some((v, f.clone(), lambda.clone()));
                    }
                }
            };
        for h in hulls.iter() {
            consider(&h.hull, &h.lambda, &mut best);
        }
        if self.scheme.k == 1 && inst.m() > 1 {
            for _ in 0..self.scheme.refinement_rounds {
                let Some((_, _, center)) = best.clone() else { break };
                let candidates = neighbours(&center.columns()[0]);
                let found: Vec<SampledHull> = candidates
                    .into_par_iter()
                    .map(|lambda| {
                        let lambda = Aggregation::single(lambda)?.normalize()?;
                        let hull = integer_hull_with_budget(&build_relaxation(inst, &lambda)?, self.budget)?;
                        Ok(SampledHull { lambda, hull })
                    })
                    .collect::<Result<_, Error>>()?;
                for h in &found {
                    consider(&h.hull, &h.lambda, &mut best);
                }
            }
        }
        Ok(match best {
            Some((violation, inequality, lambda)) if violation.is_positive() => Separation::Cut {
                inequality,
                violation,
                lambda,
            },
            _ => Separation::Inside,
        })
    }
}

/// Multipliers `w + e_a − e_b` around `2w`, where `w` is the primitive
/// integer vector proportional to `lambda`.
fn neighbours(lambda: &RatVector) -> Vec<RatVector> {
    let mut w = crate::exactnum::integer_row(lambda.entries());
    crate::exactnum::primitive(&mut w);
    let two = BigInt::from(2);
    let w: Vec<BigInt> = w.iter().map(|x| x * &two).collect();
    let m = w.len();
    let mut out = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if a == b || w[b] < BigInt::from(1) {
                continue;
            }
            let mut v = w.clone();
            v[a] += 1;
            v[b] -= 1;
            out.push(v.into_iter().map(Rat::from_int).collect());
        }
    }
    out
}

/// `Q_j`: packing drops column `j` (and any row that becomes zero);
/// covering keeps the rows with a zero in column `j`, then drops the column.
pub fn build_qj(inst: &Instance, j: usize) -> SubRelaxation {
    assert!(j < inst.n(), "column index out of range");
    assert!(inst.n() >= 2, "sub-instances need at least two columns");
    let drop = |row: &Vec<u64>| -> Vec<u64> {
        row.iter()
            .enumerate()
            .filter(|&(c, _)| c != j)
            .map(|(_, &v)| v)
            .collect()
    };
    let pairs: Vec<(Vec<u64>, u64)> = match inst.sense() {
        Sense::Packing => inst
            .a()
            .iter()
            .zip(inst.b())
            .map(|(row, &b)| (drop(row), b))
            .filter(|(row, _)| row.iter().any(|&v| v > 0))
            .collect(),
        Sense::Covering => inst
            .a()
            .iter()
            .zip(inst.b())
            .filter(|(row, _)| row[j] == 0)
            .map(|(row, &b)| (drop(row), b))
            .collect(),
    };
    if pairs.is_empty() {
        return SubRelaxation::Orthant;
    }
    let (a, b) = pairs.into_iter().unzip();
    SubRelaxation::Reduced(Instance::new(inst.sense(), a, b).expect("sub-instance of a valid instance"))
}

/// `{0 ≤ x ≤ min ⌊b_i/a_i⌋}` (packing) or `{x ≥ max ⌈b_i/a_i⌉}` (covering).
pub fn closure_1d(inst: &Instance) -> Polyhedron {
    assert_eq!(inst.n(), 1, "closed form needs a single column");
    let ratios = inst
        .a()
        .iter()
        .zip(inst.b())
        .map(|(row, &b)| Rat::new(b, row[0]).expect("nonzero entry"));
    let mut ineqs = vec![LinearInequality::nonnegativity(1, 0)];
    let (bound, relation) = match inst.sense() {
        Sense::Packing => (ratios.map(|r| r.floor()).min().expect("a row"), Relation::Le),
        Sense::Covering => (ratios.map(|r| r.ceil()).max().expect("a row"), Relation::Ge),
    };
    ineqs.push(LinearInequality::new(RatVector::from_ints(&[1]), Rat::from_int(bound), relation).expect("unit normal"));
    hrep_to_vrep(1, &ineqs)
}

/// `⌈ max_j max_{i ∉ I_j} b_i / A_ij ⌉` for a covering instance.
pub fn compute_gamma(inst: &Instance) -> u64 {
    let mut best = Rat::zero();
    for (row, &b) in inst.a().iter().zip(inst.b()) {
        for &v in row {
            if v > 0 {
                let r = Rat::new(b, v).expect("positive entry");
                if r > best {
                    best = r;
                }
            }
        }
    }
    best.ceil().to_u64().expect("gamma fits in u64")
}

/// [`ClosureEngine::sampled_closure`] on a fresh engine.
pub fn sampled_closure(inst: &Instance, scheme: &SampleScheme) -> Result<Polyhedron, Error> {
    ClosureEngine::new(*scheme).sampled_closure(inst)
}

/// [`ClosureEngine::aggregation_closure`] on a fresh engine.
pub fn aggregation_closure(inst: &Instance, scheme: &SampleScheme) -> Result<Arc<ClosureArtifacts>, Error> {
    ClosureEngine::new(*scheme).aggregation_closure(inst)
}

/// [`ClosureEngine::separate`] on a fresh engine.
pub fn separate(inst: &Instance, scheme: &SampleScheme, x_star: &RatVector) -> Result<Separation, Error> {
    ClosureEngine::new(*scheme).separate(inst, x_star)
}
