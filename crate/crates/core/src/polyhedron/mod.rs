//! Rational polyhedra held in both representations.
//!
//! A [`Polyhedron`] always carries an irredundant canonical H-representation
//! and the matching V-representation (vertices, extreme rays, and a
//! canonical lineality basis). Conversions in either direction go through
//! the double description routine in homogeneous coordinates, so equality
//! of two values is equality of the underlying point sets.

mod dd;
mod inequality;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exactnum::{affine_rank, canonical_basis, integer_row, primitive, project_out, Rat, RatVector};
use crate::Error;

pub use inequality::{LinearInequality, Relation};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polyhedron {
    dim: usize,
    hrep: Vec<LinearInequality>,
    points: Vec<RatVector>,
    rays: Vec<RatVector>,
    lines: Vec<RatVector>,
    feasible: bool,
    affine_dim: usize,
    integral: bool,
}

/// Result of optimizing a linear objective over a polyhedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Optimum {
    Finite { value: Rat, at: RatVector },
    Unbounded,
    Infeasible,
}

fn to_rat_vec(ints: &[BigInt]) -> RatVector {
    ints.iter().cloned().map(Rat::from_int).collect()
}

fn primitive_ray(r: &RatVector) -> RatVector {
    let mut ints = integer_row(r);
    primitive(&mut ints);
    to_rat_vec(&ints)
}

fn sort_dedup<T: Ord>(v: &mut Vec<T>) {
    v.sort();
    v.dedup();
}

impl Polyhedron {
    /// The empty set in dimension `dim`.
    pub fn empty(dim: usize) -> Self {
        let mut hrep = vec![
            LinearInequality::nonnegativity(dim, 0),
            LinearInequality::new(RatVector::unit(dim, 0), Rat::from_int(-1), Relation::Le).expect("unit normal"),
        ];
        hrep.sort();
        Polyhedron {
            dim,
            hrep,
            points: Vec::new(),
            rays: Vec::new(),
            lines: Vec::new(),
            feasible: false,
            affine_dim: 0,
            integral: true,
        }
    }

    pub fn whole_space(dim: usize) -> Self {
        hrep_to_vrep(dim, &[])
    }

    pub fn orthant(dim: usize) -> Self {
        let ineqs: Vec<_> = (0..dim).map(|j| LinearInequality::nonnegativity(dim, j)).collect();
        hrep_to_vrep(dim, &ineqs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hrep(&self) -> &[LinearInequality] {
        &self.hrep
    }

    pub fn vertices(&self) -> &[RatVector] {
        &self.points
    }

    pub fn rays(&self) -> &[RatVector] {
        &self.rays
    }

    pub fn lines(&self) -> &[RatVector] {
        &self.lines
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    /// Dimension of the affine hull (0 for a point, and for the empty set).
    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.feasible && self.affine_dim == self.dim
    }

    pub fn hrep_text(&self) -> String {
        let mut s = String::new();
        for f in &self.hrep {
            s.push_str(&f.to_string());
            s.push('\n');
        }
        s
    }

    pub fn contains(&self, x: &RatVector) -> bool {
        contains(self, x)
    }

    /// Exact inclusion `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Polyhedron) -> bool {
        self.first_escape(other).is_none()
    }

    /// A generator of `self` that leaves `other`, paired with the violated
    /// inequality of `other`: `(generator, is_direction, inequality)`.
    pub fn first_escape(&self, other: &Polyhedron) -> Option<(RatVector, bool, LinearInequality)> {
        assert_eq!(self.dim, other.dim, "inclusion test between different dimensions");
        if !self.feasible {
            return None;
        }
        if !other.feasible {
            let f = other.hrep[0].clone();
            return Some((self.points[0].clone(), false, f));
        }
        for f in &other.hrep {
            if let Some(p) = self.points.iter().find(|p| !f.satisfied_by(p)) {
                return Some((p.clone(), false, f.clone()));
            }
            if let Some(r) = self.rays.iter().find(|r| !f.allows_direction(r)) {
                return Some((r.clone(), true, f.clone()));
            }
            for l in &self.lines {
                if !f.allows_direction(l) {
                    return Some((l.clone(), true, f.clone()));
                }
                let back = l.scale(&Rat::from_int(-1));
                if !f.allows_direction(&back) {
                    return Some((back, true, f.clone()));
                }
            }
        }
        None
    }

    /// Inequalities of the H-representation that come from the affine hull
    /// (listed as `<=`/`>=` pairs) are excluded; only genuine facets remain.
    pub fn facets(&self) -> Vec<&LinearInequality> {
        self.hrep
            .iter()
            .filter(|f| {
                let twin = LinearInequality::new(f.normal().clone(), f.rhs().clone(), f.relation().flipped())
                    .expect("nonzero normal");
                !self.hrep.contains(&twin)
            })
            .collect()
    }

    /// `R_+ × self` with the new coordinate inserted at position `j`.
    pub fn insert_free_coordinate(&self, j: usize) -> Polyhedron {
        let dim = self.dim + 1;
        if !self.feasible {
            return Polyhedron::empty(dim);
        }
        let mut ineqs: Vec<LinearInequality> = self.hrep.iter().map(|f| f.insert_coordinate(j)).collect();
        ineqs.push(LinearInequality::nonnegativity(dim, j));
        hrep_to_vrep(dim, &ineqs)
    }

    pub fn maximize(&self, c: &RatVector) -> Optimum {
        if !self.feasible {
            return Optimum::Infeasible;
        }
        let climbs = |r: &RatVector| c.dot(r).is_positive();
        if self.rays.iter().any(climbs) || self.lines.iter().any(|l| !c.dot(l).is_zero()) {
            return Optimum::Unbounded;
        }
        let best = self
            .points
            .iter()
            .max_by(|a, b| c.dot(a).cmp(&c.dot(b)))
            .expect("feasible polyhedron has a point");
        Optimum::Finite {
            value: c.dot(best),
            at: best.clone(),
        }
    }

    pub fn minimize(&self, c: &RatVector) -> Optimum {
        match self.maximize(&c.scale(&Rat::from_int(-1))) {
            Optimum::Finite { value, at } => Optimum::Finite { value: -value, at },
            other => other,
        }
    }

    fn from_parts(
        dim: usize,
        mut hrep: Vec<LinearInequality>,
        mut points: Vec<RatVector>,
        mut rays: Vec<RatVector>,
        lines: Vec<RatVector>,
    ) -> Polyhedron {
        sort_dedup(&mut hrep);
        sort_dedup(&mut points);
        sort_dedup(&mut rays);
        let mut gens = points.clone();
        for p in &points {
            for d in rays.iter().chain(&lines) {
                gens.push(p + d);
            }
        }
        let affine_dim = affine_rank(&gens) - 1;
        let integral = points.iter().all(RatVector::is_integral);
        let poly = Polyhedron {
            dim,
            hrep,
            points,
            rays,
            lines,
            feasible: true,
            affine_dim,
            integral,
        };
        debug_assert!(poly.check_consistency().is_ok(), "{:?}", poly.check_consistency());
        poly
    }

    /// Every generator satisfies every inequality.
    pub fn check_consistency(&self) -> Result<(), String> {
        if !self.feasible {
            return Ok(());
        }
        for f in &self.hrep {
            if let Some(p) = self.points.iter().find(|p| !f.satisfied_by(p)) {
                return Err(format!("vertex {p:?} violates {f}"));
            }
            if let Some(r) = self.rays.iter().find(|r| !f.allows_direction(r)) {
                return Err(format!("ray {r:?} violates {f}"));
            }
            if let Some(l) = self.lines.iter().find(|l| !f.normal().dot(l).is_zero()) {
                return Err(format!("line {l:?} crosses {f}"));
            }
        }
        Ok(())
    }
}

/// Membership by the H-representation.
pub fn contains(p: &Polyhedron, x: &RatVector) -> bool {
    assert_eq!(p.dim, x.dim(), "membership test dimension mismatch");
    p.feasible && p.hrep.iter().all(|f| f.satisfied_by(x))
}

/// Canonical polyhedron `conv(points) + cone(rays)`.
pub fn vrep_to_hrep(points: &[RatVector], rays: &[RatVector]) -> Polyhedron {
    assert!(!points.is_empty(), "vrep_to_hrep needs at least one point");
    let dim = points[0].dim();
    let hrep = facets_of_generators(dim, points, rays, &[]);
    hrep_to_vrep(dim, &hrep)
}

/// Canonical polyhedron `{ x : every inequality holds }`. Infeasible systems
/// give [`Polyhedron::empty`].
pub fn hrep_to_vrep(dim: usize, ineqs: &[LinearInequality]) -> Polyhedron {
    assert!(dim > 0, "polyhedra need a positive dimension");
    assert!(ineqs.iter().all(|f| f.dim() == dim), "inequality dimension mismatch");
    let mut ineqs = ineqs.to_vec();
    sort_dedup(&mut ineqs);
    if dim == 1 {
        return interval_from_hrep(&ineqs);
    }
    match generators_of_inequalities(dim, &ineqs) {
        None => Polyhedron::empty(dim),
        Some((points, rays, lines)) => {
            let hrep = facets_of_generators(dim, &points, &rays, &lines);
            Polyhedron::from_parts(dim, hrep, points, rays, lines)
        }
    }
}

/// Intersection of polyhedra of equal dimension.
pub fn intersect(ps: &[Polyhedron]) -> Polyhedron {
    assert!(!ps.is_empty(), "intersect needs at least one polyhedron");
    let dim = ps[0].dim;
    assert!(ps.iter().all(|p| p.dim == dim), "intersect needs equal dimensions");
    if ps.iter().any(|p| !p.feasible) {
        return Polyhedron::empty(dim);
    }
    if ps.len() == 1 {
        return ps[0].clone();
    }
    let ineqs: Vec<LinearInequality> = ps.iter().flat_map(|p| p.hrep.iter().cloned()).collect();
    hrep_to_vrep(dim, &ineqs)
}

/// Facets whose canonical normal is strictly positive in every coordinate.
/// Lower-dimensional polyhedra have no well-defined facet normals and give
/// an empty list.
pub fn positive_normal_facets(p: &Polyhedron) -> Vec<LinearInequality> {
    if !p.is_full_dimensional() {
        return Vec::new();
    }
    p.hrep.iter().filter(|f| f.has_positive_normal()).cloned().collect()
}

/// Vertices of `p` on the hyperplane of `f`, lexicographically sorted.
pub fn tight_vertices(p: &Polyhedron, f: &LinearInequality) -> Vec<RatVector> {
    p.points.iter().filter(|v| f.is_tight(v)).cloned().collect()
}

/// `dim` affinely independent integer vertices tight at the positive-normal
/// facet `f`: the lexicographically first ones, taken greedily while the
/// affine rank grows.
pub fn facet_lattice_tuple(p: &Polyhedron, f: &LinearInequality) -> Result<Vec<RatVector>, Error> {
    if !p.is_integral() {
        return Err(Error::DegenerateFacet("polyhedron is not integral".into()));
    }
    if !f.has_positive_normal() {
        return Err(Error::DegenerateFacet(format!("{f} does not have a positive normal")));
    }
    if p.rays.iter().chain(&p.lines).any(|r| f.normal().dot(r).is_zero()) {
        return Err(Error::DegenerateFacet(format!("{f} is unbounded")));
    }
    let mut chosen: Vec<RatVector> = Vec::with_capacity(p.dim);
    for v in tight_vertices(p, f) {
        chosen.push(v);
        if affine_rank(&chosen) < chosen.len() {
            chosen.pop();
        }
        if chosen.len() == p.dim {
            return Ok(chosen);
        }
    }
    Err(Error::DegenerateFacet(format!(
        "{f} has only {} affinely independent tight vertices",
        chosen.len()
    )))
}

/// Irredundant canonical inequalities of `conv(points) + cone(rays) + lin(lines)`.
fn facets_of_generators(
    dim: usize,
    points: &[RatVector],
    rays: &[RatVector],
    lines: &[RatVector],
) -> Vec<LinearInequality> {
    if dim == 1 {
        return interval_from_generators(points, rays, lines).hrep;
    }
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for p in points {
        let mut row = vec![Rat::from_int(1)];
        row.extend(p.iter().cloned());
        gens.push(integer_row(&row));
    }
    let mut dirs: Vec<Vec<BigInt>> = Vec::new();
    for r in rays {
        dirs.push(homogeneous_direction(r));
    }
    for l in lines {
        let d = homogeneous_direction(l);
        dirs.push(d.iter().map(|x| -x).collect());
        dirs.push(d);
    }
    sort_dedup(&mut gens);
    sort_dedup(&mut dirs);
    let point_rows = gens.clone();
    gens.extend(dirs);
    let cone = dd::cone_generators(dim + 1, &gens);

    let equalities: Vec<RatVector> = canonical_basis(&cone.lineality.iter().map(|l| to_rat_vec(l)).collect::<Vec<_>>());
    let mut out = Vec::new();
    for eq in &equalities {
        let normal: RatVector = eq[1..].iter().cloned().collect();
        let rhs = -&eq[0];
        for rel in [Relation::Le, Relation::Ge] {
            out.push(LinearInequality::new(normal.clone(), rhs.clone(), rel).expect("equality has a normal"));
        }
    }
    for ray in &cone.rays {
        // A face containing no point generator is the face at infinity.
        let touches_point = point_rows
            .iter()
            .any(|g| g.iter().zip(&ray.vector).map(|(a, b)| a * b).sum::<BigInt>().is_zero());
        if !touches_point {
            continue;
        }
        let h = project_out(&to_rat_vec(&ray.vector), &equalities);
        let normal: RatVector = h[1..].iter().cloned().collect();
        let rhs = -&h[0];
        out.push(LinearInequality::new(normal, rhs, Relation::Ge).expect("facet has a normal"));
    }
    sort_dedup(&mut out);
    out
}

fn homogeneous_direction(r: &RatVector) -> Vec<BigInt> {
    let mut row = vec![Rat::zero()];
    row.extend(r.iter().cloned());
    integer_row(&row)
}

type Generators = (Vec<RatVector>, Vec<RatVector>, Vec<RatVector>);

fn generators_of_inequalities(dim: usize, ineqs: &[LinearInequality]) -> Option<Generators> {
    let mut rows: Vec<Vec<BigInt>> = ineqs.iter().map(LinearInequality::homogeneous_ge_row).collect();
    let mut t_nonneg = vec![BigInt::zero(); dim + 1];
    t_nonneg[0] = BigInt::from(1);
    rows.push(t_nonneg);
    let cone = dd::cone_generators(dim + 1, &rows);

    let lines = canonical_basis(
        &cone
            .lineality
            .iter()
            .map(|l| {
                debug_assert!(l[0].is_zero(), "lineality must lie at infinity");
                to_rat_vec(&l[1..])
            })
            .collect::<Vec<_>>(),
    );
    let mut points = Vec::new();
    let mut rays = Vec::new();
    for ray in &cone.rays {
        let t = &ray.vector[0];
        let x = to_rat_vec(&ray.vector[1..]);
        if t.is_positive() {
            let p = x.scale(&Rat::from_int(t.clone()).recip().expect("t > 0"));
            points.push(project_out(&p, &lines));
        } else {
            rays.push(primitive_ray(&project_out(&x, &lines)));
        }
    }
    if points.is_empty() {
        return None;
    }
    sort_dedup(&mut points);
    sort_dedup(&mut rays);
    Some((points, rays, lines))
}

/// One-dimensional polyhedra are intervals; handled directly.
fn interval_from_hrep(ineqs: &[LinearInequality]) -> Polyhedron {
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for f in ineqs {
        let a = &f.normal()[0];
        let bound = f.rhs().checked_div(a).expect("nonzero normal");
        // a > 0 in canonical form
        match f.relation() {
            Relation::Ge => {
                if lo.as_ref().is_none_or(|l| &bound > l) {
                    lo = Some(bound);
                }
            }
            Relation::Le => {
                if hi.as_ref().is_none_or(|h| &bound < h) {
                    hi = Some(bound);
                }
            }
        }
    }
    interval(lo, hi)
}

fn interval_from_generators(points: &[RatVector], rays: &[RatVector], lines: &[RatVector]) -> Polyhedron {
    let up = !lines.is_empty() || rays.iter().any(|r| r[0].is_positive());
    let down = !lines.is_empty() || rays.iter().any(|r| r[0].is_negative());
    let lo = if down {
        None
    } else {
        points.iter().map(|p| p[0].clone()).min()
    };
    let hi = if up {
        None
    } else {
        points.iter().map(|p| p[0].clone()).max()
    };
    interval(lo, hi)
}

fn interval(lo: Option<Rat>, hi: Option<Rat>) -> Polyhedron {
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return Polyhedron::empty(1);
        }
    }
    let one = RatVector::from_ints(&[1]);
    let bound = |v: &Rat, rel| LinearInequality::new(one.clone(), v.clone(), rel).expect("unit normal");
    let mut hrep = Vec::new();
    let mut points = Vec::new();
    let mut rays = Vec::new();
    let mut lines = Vec::new();
    if let Some(l) = &lo {
        hrep.push(bound(l, Relation::Ge));
        points.push(RatVector::new(vec![l.clone()]));
    }
    if let Some(h) = &hi {
        hrep.push(bound(h, Relation::Le));
        points.push(RatVector::new(vec![h.clone()]));
    }
    match (&lo, &hi) {
        (None, None) => {
            points.push(RatVector::zeros(1));
            lines.push(one.clone());
        }
        (Some(_), None) => rays.push(one.clone()),
        (None, Some(_)) => rays.push(RatVector::from_ints(&[-1])),
        (Some(_), Some(_)) => {}
    }
    Polyhedron::from_parts(1, hrep, points, rays, lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<RatVector> {
        v.iter().map(|p| RatVector::from_ints(p)).collect()
    }

    fn ineq(n: &[i64], rel: Relation, b: i64) -> LinearInequality {
        LinearInequality::from_ints(n, rel, b).unwrap()
    }

    fn text(p: &Polyhedron) -> Vec<String> {
        p.hrep().iter().map(|f| f.to_string()).collect()
    }

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(p, q).unwrap()
    }

    #[test]
    fn vrep_to_hrep_examples() {
        let tri = vrep_to_hrep(&pts(&[&[0, 0], &[2, 0], &[0, 1]]), &[]);
        assert_eq!(text(&tri), ["1 0 >= 0", "0 1 >= 0", "1 2 <= 2"]);

        let orth = vrep_to_hrep(&pts(&[&[0, 0]]), &pts(&[&[1, 0], &[0, 1]]));
        assert_eq!(text(&orth), ["1 0 >= 0", "0 1 >= 0"]);

        let cov = vrep_to_hrep(&pts(&[&[2, 0], &[0, 2]]), &pts(&[&[1, 0], &[0, 1]]));
        assert_eq!(text(&cov), ["1 0 >= 0", "0 1 >= 0", "1 1 >= 2"]);
    }

    #[test]
    fn hrep_to_vrep_examples() {
        let tri = hrep_to_vrep(
            2,
            &[
                LinearInequality::nonnegativity(2, 0),
                LinearInequality::nonnegativity(2, 1),
                ineq(&[1, 2], Relation::Le, 2),
            ],
        );
        assert_eq!(tri.vertices(), &pts(&[&[0, 0], &[0, 1], &[2, 0]])[..]);
        assert!(tri.rays().is_empty());

        let bad = hrep_to_vrep(1, &[ineq(&[1], Relation::Ge, 0), ineq(&[1], Relation::Le, -1)]);
        assert!(!bad.is_feasible());

        let bad2 = hrep_to_vrep(2, &[ineq(&[1, 1], Relation::Ge, 3), ineq(&[1, 1], Relation::Le, 2)]);
        assert!(!bad2.is_feasible());
        assert_eq!(bad2, Polyhedron::empty(2));

        let cov = hrep_to_vrep(
            2,
            &[
                LinearInequality::nonnegativity(2, 0),
                LinearInequality::nonnegativity(2, 1),
                ineq(&[1, 1], Relation::Ge, 2),
            ],
        );
        assert_eq!(cov.vertices(), &pts(&[&[0, 2], &[2, 0]])[..]);
        assert_eq!(cov.rays(), &pts(&[&[0, 1], &[1, 0]])[..]);
    }

    #[test]
    fn contains_examples() {
        let tri = vrep_to_hrep(&pts(&[&[0, 0], &[2, 0], &[0, 1]]), &[]);
        assert!(tri.contains(&RatVector::from_ints(&[1, 0])));
        assert!(!tri.contains(&RatVector::new(vec![r(3, 2), r(1, 2)])));
        assert!(tri.contains(&RatVector::from_ints(&[2, 0])));
    }

    #[test]
    fn intersect_examples() {
        let a = hrep_to_vrep(1, &[ineq(&[1], Relation::Ge, 0), ineq(&[1], Relation::Le, 2)]);
        let b = hrep_to_vrep(1, &[ineq(&[1], Relation::Ge, 0), ineq(&[1], Relation::Le, 1)]);
        assert_eq!(text(&intersect(&[a.clone(), b.clone()])), ["1 >= 0", "1 <= 1"]);
        assert_eq!(intersect(&[a.clone(), a.clone()]), a);

        let tri = vrep_to_hrep(&pts(&[&[0, 0], &[2, 0], &[0, 1]]), &[]);
        let strip = hrep_to_vrep(
            2,
            &[
                LinearInequality::nonnegativity(2, 0),
                LinearInequality::nonnegativity(2, 1),
                ineq(&[1, 0], Relation::Le, 1),
            ],
        );
        let both = intersect(&[tri, strip]);
        let expect = [
            RatVector::from_ints(&[0, 0]),
            RatVector::from_ints(&[0, 1]),
            RatVector::from_ints(&[1, 0]),
            RatVector::new(vec![r(1, 1), r(1, 2)]),
        ];
        assert_eq!(both.vertices(), &expect[..]);
        assert!(!both.is_integral());
    }

    #[test]
    fn positive_facets_examples() {
        let tri = vrep_to_hrep(&pts(&[&[0, 0], &[2, 0], &[0, 1]]), &[]);
        let f = positive_normal_facets(&tri);
        assert_eq!(f.iter().map(|f| f.to_string()).collect::<Vec<_>>(), ["1 2 <= 2"]);
        assert!(positive_normal_facets(&Polyhedron::orthant(2)).is_empty());
        let cov = vrep_to_hrep(&pts(&[&[2, 0], &[0, 2]]), &pts(&[&[1, 0], &[0, 1]]));
        let f = positive_normal_facets(&cov);
        assert_eq!(f.iter().map(|f| f.to_string()).collect::<Vec<_>>(), ["1 1 >= 2"]);
    }

    #[test]
    fn facet_tuple_examples() {
        // hull of 2x + 3y <= 4
        let hull = vrep_to_hrep(&pts(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1]]), &[]);
        let f = ineq(&[1, 2], Relation::Le, 2);
        assert_eq!(facet_lattice_tuple(&hull, &f).unwrap(), pts(&[&[0, 1], &[2, 0]]));

        let cov = vrep_to_hrep(&pts(&[&[2, 0], &[1, 1], &[0, 2]]), &pts(&[&[1, 0], &[0, 1]]));
        let f = ineq(&[1, 1], Relation::Ge, 2);
        assert_eq!(facet_lattice_tuple(&cov, &f).unwrap(), pts(&[&[0, 2], &[2, 0]]));

        let seg = vrep_to_hrep(&pts(&[&[0], &[1], &[2]]), &[]);
        assert_eq!(
            facet_lattice_tuple(&seg, &ineq(&[1], Relation::Le, 2)).unwrap(),
            pts(&[&[2]])
        );

        let tri = vrep_to_hrep(&pts(&[&[0, 0], &[2, 0], &[0, 1]]), &[]);
        assert!(facet_lattice_tuple(&tri, &ineq(&[1, 0], Relation::Ge, 0)).is_err());
    }

    #[test]
    fn lower_dimensional_carries_equalities() {
        let seg = vrep_to_hrep(&pts(&[&[0, 0], &[2, 0]]), &[]);
        assert_eq!(text(&seg), ["1 0 >= 0", "0 1 >= 0", "0 1 <= 0", "1 0 <= 2"]);
        assert_eq!(seg.affine_dim(), 1);
        assert_eq!(seg.facets().len(), 2);
        assert!(positive_normal_facets(&seg).is_empty());
        let point = vrep_to_hrep(&pts(&[&[1, 1, 1]]), &[]);
        assert_eq!(point.affine_dim(), 0);
        assert_eq!(point.hrep().len(), 6);
        assert_eq!(hrep_to_vrep(3, point.hrep()), point);
    }

    #[test]
    fn whole_space_and_lines() {
        let all = Polyhedron::whole_space(3);
        assert!(all.hrep().is_empty());
        assert_eq!(all.lines().len(), 3);
        assert!(all.contains(&RatVector::from_ints(&[-4, 7, 1])));
        let slab = hrep_to_vrep(2, &[ineq(&[1, 1], Relation::Ge, 2)]);
        assert_eq!(slab.lines().len(), 1);
        assert_eq!(slab.vertices().len(), 1);
        assert_eq!(text(&slab), ["1 1 >= 2"]);
        assert!(Polyhedron::orthant(2).is_subset_of(&Polyhedron::whole_space(2)));
        assert!(!Polyhedron::whole_space(2).is_subset_of(&Polyhedron::orthant(2)));
        let one = Polyhedron::whole_space(1);
        assert!(one.hrep().is_empty());
    }

    #[test]
    fn free_coordinate_embedding() {
        let seg = hrep_to_vrep(1, &[ineq(&[1], Relation::Ge, 0), ineq(&[1], Relation::Le, 2)]);
        let strip = seg.insert_free_coordinate(0);
        assert_eq!(text(&strip), ["1 0 >= 0", "0 1 >= 0", "0 1 <= 2"]);
        assert_eq!(strip.rays(), &pts(&[&[1, 0]])[..]);
    }

    #[test]
    fn optimisation_over_vertices() {
        let tri = vrep_to_hrep(&pts(&[&[0, 0], &[2, 0], &[0, 1]]), &[]);
        let c = RatVector::from_ints(&[1, 1]);
        assert!(matches!(tri.maximize(&c), Optimum::Finite { value, .. } if value == Rat::from_int(2)));
        let orth = Polyhedron::orthant(2);
        assert_eq!(orth.maximize(&c), Optimum::Unbounded);
        assert!(matches!(orth.minimize(&c), Optimum::Finite { value, .. } if value.is_zero()));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn point_set(dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
            prop::collection::vec(prop::collection::vec(-3i64..4, dim), 1..9)
        }

        /// Independent membership test for `conv(points) + cone(rays)` in the
        /// plane: `x` is inside iff it lies in some triangle, segment or
        /// point spanned by up to three generators (Carathéodory), with rays
        /// handled by sampling far points along them.
        fn in_hull_2d(points: &[RatVector], x: &RatVector) -> bool {
            let n = points.len();
            let inside_tri = |a: &RatVector, b: &RatVector, c: &RatVector| {
                let cross = |o: &RatVector, p: &RatVector, q: &RatVector| {
                    (&p[0] - &o[0]) * (&q[1] - &o[1]) - (&p[1] - &o[1]) * (&q[0] - &o[0])
                };
                let d1 = cross(a, b, x);
                let d2 = cross(b, c, x);
                let d3 = cross(c, a, x);
                let neg = d1.is_negative() || d2.is_negative() || d3.is_negative();
                let pos = d1.is_positive() || d2.is_positive() || d3.is_positive();
                if !(neg && pos) {
                    // collinear triangles need an explicit bounding-box check
                    let area = cross(a, b, c);
                    if area.is_zero() {
                        let within = |k: usize| {
                            let lo = [&a[k], &b[k], &c[k]].into_iter().min().unwrap().clone();
                            let hi = [&a[k], &b[k], &c[k]].into_iter().max().unwrap().clone();
                            lo <= x[k] && x[k] <= hi
                        };
                        return d1.is_zero() && d2.is_zero() && d3.is_zero() && within(0) && within(1);
                    }
                    return true;
                }
                false
            };
            for i in 0..n {
                for j in i..n {
                    for k in j..n {
                        if inside_tri(&points[i], &points[j], &points[k]) {
                            return true;
                        }
                    }
                }
            }
            false
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn round_trip_dim_up_to_four(raw in (1usize..5).prop_flat_map(point_set)) {
                let points: Vec<RatVector> = raw.iter().map(|p| RatVector::from_ints(p)).collect();
                let p = vrep_to_hrep(&points, &[]);
                prop_assert!(p.check_consistency().is_ok());
                let back = hrep_to_vrep(p.dim(), p.hrep());
                prop_assert_eq!(&back, &p);
                for q in &points {
                    prop_assert!(p.contains(q));
                }
                for v in p.vertices() {
                    prop_assert!(points.contains(v));
                }
                // every facet of a full-dimensional result is tight at dim generators
                if p.is_full_dimensional() {
                    for f in p.facets() {
                        let tight: Vec<RatVector> = tight_vertices(&p, f);
                        prop_assert!(affine_rank(&tight) >= p.dim());
                    }
                }
            }

            #[test]
            fn round_trip_with_rays(
                raw in point_set(3),
                ray_mask in prop::collection::vec(any::<bool>(), 3),
            ) {
                let points: Vec<RatVector> = raw.iter().map(|p| RatVector::from_ints(p)).collect();
                let rays: Vec<RatVector> = (0..3).filter(|&j| ray_mask[j]).map(|j| RatVector::unit(3, j)).collect();
                let p = vrep_to_hrep(&points, &rays);
                let back = hrep_to_vrep(3, p.hrep());
                prop_assert_eq!(&back, &p);
                for r in &rays {
                    prop_assert!(p.hrep().iter().all(|f| f.allows_direction(r)));
                }
            }

            #[test]
            fn membership_agrees_with_caratheodory(
                raw in point_set(2),
                xs in (-8i64..9, -8i64..9, 1i64..4),
            ) {
                let points: Vec<RatVector> = raw.iter().map(|p| RatVector::from_ints(p)).collect();
                let p = vrep_to_hrep(&points, &[]);
                let x = RatVector::new(vec![Rat::new(xs.0, xs.2).unwrap(), Rat::new(xs.1, xs.2).unwrap()]);
                prop_assert_eq!(p.contains(&x), in_hull_2d(&points, &x));
            }

            #[test]
            fn one_dimensional_path_matches_general(
                raw in prop::collection::vec(-6i64..7, 1..5),
                up in any::<bool>(),
                down in any::<bool>(),
            ) {
                let points: Vec<RatVector> = raw.iter().map(|&p| RatVector::from_ints(&[p])).collect();
                let mut rays = Vec::new();
                if up { rays.push(RatVector::from_ints(&[1])); }
                if down { rays.push(RatVector::from_ints(&[-1])); }
                let fast = vrep_to_hrep(&points, &rays);
                // embed as the x-axis of the plane and read the first coordinate back
                let lifted: Vec<RatVector> = points.iter().map(|p| p.insert(1, Rat::zero())).collect();
                let lifted_rays: Vec<RatVector> = rays.iter().map(|r| r.insert(1, Rat::zero())).collect();
                let general = vrep_to_hrep(&lifted, &lifted_rays);
                let proj: Vec<RatVector> = general.vertices().iter().map(|v| v.remove(1)).collect();
                prop_assert_eq!(fast.vertices(), &proj[..]);
                let fast_bounds: Vec<String> = fast.hrep().iter().map(|f| f.to_string()).collect();
                let general_bounds: Vec<String> = general
                    .hrep()
                    .iter()
                    .filter(|f| !f.normal()[0].is_zero())
                    .map(|f| LinearInequality::new(f.normal().remove(1), f.rhs().clone(), f.relation()).unwrap().to_string())
                    .collect();
                prop_assert_eq!(fast_bounds, general_bounds);
            }

            #[test]
            fn canonicalization_idempotent(raw in point_set(3)) {
                let points: Vec<RatVector> = raw.iter().map(|p| RatVector::from_ints(p)).collect();
                let p = vrep_to_hrep(&points, &[]);
                for f in p.hrep() {
                    let again = LinearInequality::new(f.normal().clone(), f.rhs().clone(), f.relation()).unwrap();
                    prop_assert_eq!(&again, f);
                }
                let again = vrep_to_hrep(p.vertices(), p.rays());
                prop_assert_eq!(again, p);
            }
        }
    }
}
