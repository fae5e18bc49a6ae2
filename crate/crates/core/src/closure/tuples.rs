use std::collections::HashSet;

use crate::exactnum::{affine_rank, solve_linear, Rat, RatMatrix, RatVector};
use crate::knapsack::Sense;
use crate::polyhedron::{hrep_to_vrep, positive_normal_facets, tight_vertices, LinearInequality, Polyhedron, Relation};
use crate::Error;

use super::Aggregation;

/// `n` affinely independent integer points spanning a positive-normal facet
/// of one sampled hull, with that facet and multiplier as provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetTuple {
    /// Lexicographically sorted.
    pub points: Vec<RatVector>,
    pub source_lambda: Aggregation,
    /// The facet in canonical integer form.
    pub source_facet: LinearInequality,
    /// Facet normal scaled so that the right-hand side is one.
    pub unit_normal: RatVector,
}

impl FacetTuple {
    fn key(&self) -> Vec<Rat> {
        self.points.iter().flat_map(|p| p.iter().cloned()).collect()
    }
}

/// Every `k`-subset of `0..len` in lexicographic order.
fn for_each_subset(len: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > len {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let mut p = k;
        while p > 0 && idx[p - 1] == len - k + p - 1 {
            p -= 1;
        }
        if p == 0 {
            return;
        }
        idx[p - 1] += 1;
        for q in p..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Tuples contributed by one sampled hull: for every positive-normal facet,
/// every affinely independent `n`-subset of its vertices, in lexicographic
/// order of subsets. Hulls that are not full-dimensional contribute none.
pub fn hull_tuples(hull: &Polyhedron, lambda: &Aggregation) -> Vec<FacetTuple> {
    let n = hull.dim();
    let mut out = Vec::new();
    for facet in positive_normal_facets(hull) {
        if !facet.rhs().is_positive() {
            log::info!("skipping facet {facet} of the hull for {lambda}: right-hand side is not positive");
            continue;
        }
        let unit_normal = facet.unit_rhs_normal().expect("positive rhs");
        let tight = tight_vertices(hull, &facet);
        for_each_subset(tight.len(), n, |idx| {
            let points: Vec<RatVector> = idx.iter().map(|&i| tight[i].clone()).collect();
            if affine_rank(&points) == n {
                out.push(FacetTuple {
                    points,
                    source_lambda: lambda.clone(),
                    source_facet: facet.clone(),
                    unit_normal: unit_normal.clone(),
                });
            }
        });
    }
    out
}

/// Tuples over all sampled hulls in sample order, deduplicated by point
/// tuple (first occurrence kept).
pub fn collect_tuples<'a>(hulls: impl IntoIterator<Item = (&'a Aggregation, &'a Polyhedron)>) -> Vec<FacetTuple> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (lambda, hull) in hulls {
        for t in hull_tuples(hull, lambda) {
            if seen.insert(t.key()) {
                out.push(t);
            }
        }
    }
    out
}

fn dominated_by(small: &[Rat], big: &[Rat]) -> bool {
    small.iter().zip(big).all(|(s, b)| s <= b)
}

/// The domination antichain of `tuples`, in input order. Packing keeps the
/// tuples with no other tuple strictly below them; covering keeps those
/// with no other tuple strictly above them. Comparison is componentwise on
/// the concatenated coordinates.
pub fn filter_minimal_tuples(tuples: &[FacetTuple], sense: Sense) -> Vec<FacetTuple> {
    let keys: Vec<Vec<Rat>> = tuples.iter().map(FacetTuple::key).collect();
    let keep = minimal_indices(&keys, sense);
    keep.into_iter().map(|i| tuples[i].clone()).collect()
}

/// Indices of the antichain of `keys` (see [`filter_minimal_tuples`]),
/// ascending. Any strict dominator has a strictly better coordinate sum, so
/// one sweep in sum order that compares only against survivors suffices.
pub fn minimal_indices(keys: &[Vec<Rat>], sense: Sense) -> Vec<usize> {
    let sums: Vec<Rat> = keys.iter().map(|k| k.iter().fold(Rat::zero(), |a, x| a + x)).collect();
    let mut order: Vec<usize> = (0..keys.len()).collect();
    match sense {
        Sense::Packing => order.sort_by(|&a, &b| sums[a].cmp(&sums[b]).then(a.cmp(&b))),
        Sense::Covering => order.sort_by(|&a, &b| sums[b].cmp(&sums[a]).then(a.cmp(&b))),
    }
    let mut kept: Vec<usize> = Vec::new();
    for &i in &order {
        let beaten = kept.iter().any(|&k| {
            keys[k] != keys[i]
                && match sense {
                    Sense::Packing => dominated_by(&keys[k], &keys[i]),
                    Sense::Covering => dominated_by(&keys[i], &keys[k]),
                }
        });
        if !beaten {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    kept
}

/// `aᵀx ≤ 1` (packing) or `aᵀx ≥ 1` (covering) through the tuple's points.
pub fn tuple_to_inequality(points: &[RatVector], sense: Sense) -> Result<LinearInequality, Error> {
    let n = points.first().map(RatVector::dim).unwrap_or(0);
    if points.len() != n || n == 0 {
        return Err(Error::Dimension(format!("a tuple in dimension {n} needs {n} points")));
    }
    let m = RatMatrix::new(points.to_vec())?;
    let a = solve_linear(&m, &RatVector::new(vec![Rat::one(); n]))
        .map_err(|_| Error::Internal("tuple points are affinely dependent or span the origin".into()))?;
    let relation = match sense {
        Sense::Packing => Relation::Le,
        Sense::Covering => Relation::Ge,
    };
    LinearInequality::new(a, Rat::one(), relation)
}

/// `K`: the intersection of the tuple inequalities; the whole space when
/// there are none.
pub fn build_k(n: usize, tuples: &[FacetTuple], sense: Sense) -> Result<Polyhedron, Error> {
    let ineqs = tuples
        .iter()
        .map(|t| tuple_to_inequality(&t.points, sense))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(hrep_to_vrep(n, &ineqs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedron::vrep_to_hrep;

    fn pts(v: &[&[i64]]) -> Vec<RatVector> {
        v.iter().map(|p| RatVector::from_ints(p)).collect()
    }

    fn tuple(points: &[&[i64]]) -> FacetTuple {
        let points = pts(points);
        FacetTuple {
            source_facet: LinearInequality::nonnegativity(points[0].dim(), 0),
            unit_normal: RatVector::zeros(points[0].dim()),
            source_lambda: Aggregation::unit(1, 0),
            points,
        }
    }

    fn point_lists(ts: &[FacetTuple]) -> Vec<Vec<RatVector>> {
        ts.iter().map(|t| t.points.clone()).collect()
    }

    #[test]
    fn tuple_to_inequality_examples() {
        let f = tuple_to_inequality(&pts(&[&[2, 0], &[0, 2]]), Sense::Covering).unwrap();
        assert_eq!(f.to_string(), "1 1 >= 2");
        let f = tuple_to_inequality(&pts(&[&[2, 0], &[0, 1]]), Sense::Packing).unwrap();
        assert_eq!(f.to_string(), "1 2 <= 2");
        let f = tuple_to_inequality(&pts(&[&[1]]), Sense::Packing).unwrap();
        assert_eq!(f.to_string(), "1 <= 1");
        assert!(matches!(
            tuple_to_inequality(&pts(&[&[1, 1], &[2, 2]]), Sense::Packing),
            Err(Error::Internal(_))
        ));
    }

    #[test]
    fn build_k_examples() {
        let k = build_k(2, &[tuple(&[&[2, 0], &[0, 1]])], Sense::Packing).unwrap();
        assert_eq!(k.hrep().iter().map(|f| f.to_string()).collect::<Vec<_>>(), ["1 2 <= 2"]);
        let all = build_k(2, &[], Sense::Packing).unwrap();
        assert_eq!(all, Polyhedron::whole_space(2));
        let k = build_k(2, &[tuple(&[&[2, 0], &[0, 2]])], Sense::Covering).unwrap();
        assert_eq!(k.hrep().iter().map(|f| f.to_string()).collect::<Vec<_>>(), ["1 1 >= 2"]);
    }

    #[test]
    fn filter_examples() {
        let t = [tuple(&[&[2]]), tuple(&[&[3]]), tuple(&[&[5]])];
        assert_eq!(
            point_lists(&filter_minimal_tuples(&t, Sense::Packing)),
            vec![pts(&[&[2]])]
        );
        assert_eq!(
            point_lists(&filter_minimal_tuples(&t, Sense::Covering)),
            vec![pts(&[&[5]])]
        );

        let t = [tuple(&[&[2, 0], &[0, 2]]), tuple(&[&[2, 0], &[1, 2]])];
        assert_eq!(
            point_lists(&filter_minimal_tuples(&t, Sense::Packing)),
            vec![pts(&[&[2, 0], &[0, 2]])]
        );
        assert_eq!(
            point_lists(&filter_minimal_tuples(&t, Sense::Covering)),
            vec![pts(&[&[2, 0], &[1, 2]])]
        );

        let incomparable = [tuple(&[&[2, 0], &[0, 3]]), tuple(&[&[3, 0], &[0, 2]])];
        assert_eq!(filter_minimal_tuples(&incomparable, Sense::Packing).len(), 2);
        assert!(filter_minimal_tuples(&[], Sense::Packing).is_empty());
    }

    #[test]
    fn hull_tuple_examples() {
        let hull = vrep_to_hrep(&pts(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1]]), &[]);
        let ts = hull_tuples(&hull, &Aggregation::unit(1, 0));
        assert_eq!(point_lists(&ts), vec![pts(&[&[0, 1], &[2, 0]])]);
        assert_eq!(ts[0].unit_normal.to_string(), "1/2 1");

        let cov = vrep_to_hrep(&pts(&[&[2, 0], &[0, 2]]), &pts(&[&[1, 0], &[0, 1]]));
        let ts = hull_tuples(&cov, &Aggregation::unit(1, 0));
        assert_eq!(point_lists(&ts), vec![pts(&[&[0, 2], &[2, 0]])]);
        assert_eq!(ts[0].unit_normal.to_string(), "1/2 1/2");

        let boxed = vrep_to_hrep(&pts(&[&[0, 0], &[2, 0], &[0, 3], &[2, 3]]), &[]);
        assert!(hull_tuples(&boxed, &Aggregation::unit(1, 0)).is_empty());
    }

    #[test]
    fn facet_with_extra_vertices_yields_every_independent_subset() {
        // the facet x + y + z <= 2 is a quadrilateral
        let hull = vrep_to_hrep(
            &pts(&[&[0, 0, 0], &[2, 0, 0], &[0, 2, 0], &[0, 1, 1], &[1, 0, 1], &[0, 0, 1]]),
            &[],
        );
        let ts = hull_tuples(&hull, &Aggregation::unit(1, 0));
        assert!(ts.iter().all(|t| affine_rank(&t.points) == 3));
        assert!(ts.iter().all(|t| t.source_facet.to_string() == "1 1 1 <= 2"));
        assert_eq!(ts.len(), 4);
    }

    #[test]
    fn collection_deduplicates_by_points() {
        let hull = vrep_to_hrep(&pts(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1]]), &[]);
        let a = Aggregation::unit(2, 0);
        let b = Aggregation::unit(2, 1);
        let ts = collect_tuples([(&a, &hull), (&b, &hull)]);
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].source_lambda, a);
    }
}
