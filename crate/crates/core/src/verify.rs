//! Executable checks of the closure constructions, and report output.
//!
//! Every check returns a [`CheckReport`]. A failing report always carries a
//! witness: a point together with an inequality it violates (and the
//! multiplier whose hull the inequality belongs to, when there is one), so
//! that a failure can be confirmed by substitution alone.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::closure::{lambda_grid, Aggregation, ClosureEngine, SampledHull};
use crate::exactnum::{Rat, RatVector};
use crate::knapsack::{build_relaxation, cg_cut, hull_of, integer_hull_with_budget, Instance, Sense};
use crate::polyhedron::{hrep_to_vrep, intersect, LinearInequality, Optimum, Polyhedron, Relation};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub point: RatVector,
    pub lambda: Option<Aggregation>,
    pub inequality: LinearInequality,
}

impl Witness {
    /// Whether the point really violates the inequality.
    pub fn reproduces(&self) -> bool {
        self.inequality.violation(&self.point).is_positive()
    }

    pub fn text(&self) -> String {
        let lambda = self
            .lambda
            .as_ref()
            .map(|l| l.to_string())
            .unwrap_or_else(|| "-".into());
        format!("point {}; lambda {}; {}", self.point, lambda, self.inequality)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub check_name: String,
    pub instance_id: String,
    pub status: Status,
    pub witness: Option<Witness>,
    pub timing_ms: u64,
    /// Informational findings such as saturation or a measured ratio.
    pub detail: String,
}

impl CheckReport {
    fn new(name: &str, id: &str) -> Self {
        CheckReport {
            check_name: name.into(),
            instance_id: id.into(),
            status: Status::Pass,
            witness: None,
            timing_ms: 0,
            detail: String::new(),
        }
    }

    fn fail(mut self, witness: Witness) -> Self {
        self.status = Status::Fail;
        self.witness = Some(witness);
        self
    }

    fn skip(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Skipped;
        self.detail = reason.into();
        self
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

fn timed(name: &str, id: &str, body: impl FnOnce(CheckReport) -> Result<CheckReport, Error>) -> CheckReport {
    let start = Instant::now();
    let mut report = match body(CheckReport::new(name, id)) {
        Ok(r) => r,
        Err(e) => CheckReport::new(name, id).skip(e.to_string()),
    };
    report.timing_ms = start.elapsed().as_millis() as u64;
    debug_assert!(report.status != Status::Fail || report.witness.is_some());
    report
}

/// A point of `p` outside `q`, with the inequality of `q` it violates.
pub fn escape_point(p: &Polyhedron, q: &Polyhedron) -> Option<(RatVector, LinearInequality)> {
    if q.is_feasible() {
        for v in p.vertices() {
            if let Some(f) = q.hrep().iter().find(|f| !f.satisfied_by(v)) {
                return Some((v.clone(), f.clone()));
            }
        }
    }
    let (generator, is_direction, f) = p.first_escape(q)?;
    let point = if is_direction {
        // walk from a vertex along the escaping direction until f breaks
        let base = p.vertices()[0].clone();
        let rate = f.violation(&(&base + &generator)) - f.violation(&base);
        let need = (-f.violation(&base)).checked_div(&rate).expect("positive rate");
        let steps = Rat::from_int(need.floor() + 1);
        &base + &generator.scale(&steps)
    } else {
        generator
    };
    let f = q.hrep().iter().find(|g| !g.satisfied_by(&point)).cloned().unwrap_or(f);
    debug_assert!(!f.satisfied_by(&point));
    Some((point, f))
}

/// The first sampled hull excluding `x`, with the inequality responsible.
fn excluding_hull(hulls: &[SampledHull], x: &RatVector) -> Option<Witness> {
    hulls.iter().find_map(|h| {
        h.hull.hrep().iter().find(|f| !f.satisfied_by(x)).map(|f| Witness {
            point: x.clone(),
            lambda: Some(h.lambda.clone()),
            inequality: f.clone(),
        })
    })
}

/// Single-row hulls for the plain grid of the engine's denominator.
fn single_row_hulls(engine: &ClosureEngine, inst: &Instance) -> Result<Vec<SampledHull>, Error> {
    if engine.scheme().k == 1 {
        return Ok(engine.sampled_hulls(inst)?.to_vec());
    }
    lambda_grid(inst.m(), engine.scheme().grid_denominator)
        .into_par_iter()
        .map(|c| {
            let lambda = Aggregation::single(c)?.normalize()?;
            let hull = hull_of(inst, &lambda, engine.budget())?;
            Ok(SampledHull { lambda, hull })
        })
        .collect()
}

/// For `m = 1`, the closure must be the hull of the single row.
pub fn check_oracle_m1(engine: &ClosureEngine, id: &str, inst: &Instance) -> CheckReport {
    timed("oracle_m1", id, |r| {
        if inst.m() != 1 {
            return Ok(r.skip("needs a single row"));
        }
        let art = engine.aggregation_closure(inst)?;
        let unit = Aggregation::unit(1, 0);
        let hull = hull_of(inst, &unit, engine.budget())?;
        if art.closure == hull {
            return Ok(r);
        }
        let (point, inequality, lambda) = match escape_point(&art.closure, &hull) {
            Some((p, f)) => (p, f, Some(unit)),
            None => {
                let (p, f) = escape_point(&hull, &art.closure).expect("distinct polyhedra differ somewhere");
                (p, f, None)
            }
        };
        Ok(r.fail(Witness {
            point,
            lambda,
            inequality,
        }))
    })
}

/// Sampled closure ⊆ K, sampled closure ⊆ L, and the integer hull of `Q`
/// itself ⊆ K ∩ L. Saturation is reported in the detail.
pub fn check_sandwich(engine: &ClosureEngine, id: &str, inst: &Instance) -> CheckReport {
    timed("sandwich", id, |r| {
        let art = engine.aggregation_closure(inst)?;
        let sampled = engine.sampled_closure(inst)?;
        let full = integer_hull_with_budget(&build_relaxation(inst, &inst.full_aggregation())?, engine.budget())?;
        let detail = format!("saturated {}", art.saturated);
        for (inner, outer) in [(&sampled, &art.k), (&sampled, &art.l), (&full, &art.closure)] {
            if let Some((point, inequality)) = escape_point(inner, outer) {
                return Ok(r
                    .fail(Witness {
                        point,
                        lambda: None,
                        inequality,
                    })
                    .with_detail(detail));
            }
        }
        Ok(r.with_detail(detail))
    })
}

/// `x̃ + γ e_j` lies in every sampled hull for every vertex `x̃` of `L`.
pub fn check_gamma(engine: &ClosureEngine, id: &str, inst: &Instance) -> CheckReport {
    check_gamma_with(engine, id, inst, None)
}

/// [`check_gamma`] with an optional replacement for `γ`. Overrides are a
/// diagnostic: a counterexample found with a smaller value shows how tight
/// the formula is on the instance.
pub fn check_gamma_with(engine: &ClosureEngine, id: &str, inst: &Instance, gamma: Option<u64>) -> CheckReport {
    let name = if gamma.is_some() { "gamma_override" } else { "gamma" };
    timed(name, id, |r| {
        if inst.sense() != Sense::Covering {
            return Ok(r.skip("covering only"));
        }
        let art = engine.aggregation_closure(inst)?;
        let Some(formula) = art.gamma else {
            return Ok(r.skip("a zero column short-circuits the construction"));
        };
        let g = gamma.unwrap_or(formula);
        let hulls = engine.sampled_hulls(inst)?;
        let n = inst.n();
        for v in art.l.vertices() {
            for j in 0..n {
                let x = &v.clone() + &RatVector::unit(n, j).scale(&Rat::from_int(g));
                if let Some(w) = excluding_hull(&hulls, &x) {
                    return Ok(r.fail(w).with_detail(format!("gamma {g}")));
                }
            }
        }
        Ok(r.with_detail(format!("gamma {g}")))
    })
}

/// `x̃ − x̃_j e_j` lies in the sampled closure for every vertex `x̃` of `L`.
pub fn check_l_probe(engine: &ClosureEngine, id: &str, inst: &Instance) -> CheckReport {
    timed("l_probe", id, |r| {
        if inst.sense() != Sense::Packing {
            return Ok(r.skip("packing only"));
        }
        let art = engine.aggregation_closure(inst)?;
        let hulls = engine.sampled_hulls(inst)?;
        for v in art.l.vertices() {
            for j in 0..inst.n() {
                let x = v.with_entry(j, Rat::zero());
                if let Some(w) = excluding_hull(&hulls, &x) {
                    return Ok(r.fail(w));
                }
            }
        }
        Ok(r)
    })
}

/// The CG cut of each sampled single-row aggregation is valid for its hull.
pub fn check_cg_dominance(engine: &ClosureEngine, id: &str, inst: &Instance) -> CheckReport {
    timed("cg_dominance", id, |r| {
        if inst.sense() != Sense::Packing {
            return Ok(r.skip("packing only"));
        }
        for h in single_row_hulls(engine, inst)? {
            let Some(cut) = cg_cut(&build_relaxation(inst, &h.lambda)?) else {
                continue;
            };
            if let Some(v) = h.hull.vertices().iter().find(|v| !cut.satisfied_by(v)) {
                return Ok(r.fail(Witness {
                    point: v.clone(),
                    lambda: Some(h.lambda.clone()),
                    inequality: cut,
                }));
            }
            if h.hull.rays().iter().any(|d| !cut.allows_direction(d)) {
                let halfspace = hrep_to_vrep(inst.n(), std::slice::from_ref(&cut));
                let (point, _) = escape_point(&h.hull, &halfspace).expect("escaping ray");
                return Ok(r.fail(Witness {
                    point,
                    lambda: Some(h.lambda.clone()),
                    inequality: cut,
                }));
            }
        }
        Ok(r)
    })
}

/// Optimal values over the intersection of the row hulls and over the
/// sampled closure; the ratio (always ≥ 1) is reported in the detail.
pub fn check_onerow_ratio(engine: &ClosureEngine, id: &str, inst: &Instance, objective: &RatVector) -> CheckReport {
    timed("onerow_ratio", id, |r| {
        if objective.dim() != inst.n() || objective.iter().any(Rat::is_negative) {
            return Ok(r.skip("objective must be nonnegative with one entry per column"));
        }
        let rows: Vec<Polyhedron> = (0..inst.m())
            .map(|i| hull_of(inst, &Aggregation::unit(inst.m(), i), engine.budget()))
            .collect::<Result<_, _>>()?;
        let onerow = intersect(&rows);
        let closure = engine.sampled_closure(inst)?;
        let solve = |p: &Polyhedron| match inst.sense() {
            Sense::Packing => p.maximize(objective),
            Sense::Covering => p.minimize(objective),
        };
        let (Optimum::Finite { value: outer, .. }, Optimum::Finite { value: inner, .. }) =
            (solve(&onerow), solve(&closure))
        else {
            return Ok(r.skip("objective unbounded or infeasible"));
        };
        let (num, den) = match inst.sense() {
            Sense::Packing => (outer, inner),
            Sense::Covering => (inner, outer),
        };
        if den.is_zero() {
            if num.is_zero() {
                return Ok(r.with_detail("ratio 1"));
            }
            return Ok(r.skip("optimal value zero on one side only"));
        }
        let ratio = num.checked_div(&den)?;
        let mut detail = format!("ratio {ratio}");
        if inst.sense() == Sense::Packing && ratio > Rat::from_int(2) {
            detail.push_str(" above 2, review");
        }
        Ok(r.with_detail(detail))
    })
}

/// Every sampled hull is integral and down-closed (packing) or up-closed
/// (covering) at its vertices.
pub fn check_integrality(engine: &ClosureEngine, id: &str, inst: &Instance) -> CheckReport {
    timed("integrality", id, |r| {
        let n = inst.n();
        for h in engine.sampled_hulls(inst)?.iter() {
            for v in h.hull.vertices() {
                if !v.is_integral() {
                    return Ok(r.fail(Witness {
                        point: v.clone(),
                        lambda: Some(h.lambda.clone()),
                        inequality: integral_separator(v),
                    }));
                }
                for j in 0..n {
                    let moved = match inst.sense() {
                        Sense::Packing => v.with_entry(j, Rat::zero()),
                        Sense::Covering => v + &RatVector::unit(n, j),
                    };
                    if let Some(f) = h.hull.hrep().iter().find(|f| !f.satisfied_by(&moved)) {
                        return Ok(r.fail(Witness {
                            point: moved,
                            lambda: Some(h.lambda.clone()),
                            inequality: f.clone(),
                        }));
                    }
                }
            }
        }
        Ok(r)
    })
}

/// `x_j ≤ ⌊v_j⌋` for the first fractional coordinate of `v`.
fn integral_separator(v: &RatVector) -> LinearInequality {
    let j = v.iter().position(|x| !x.is_integer()).expect("fractional coordinate");
    LinearInequality::new(RatVector::unit(v.dim(), j), Rat::from_int(v[j].floor()), Relation::Le).expect("unit normal")
}

/// Every check applicable to the instance's sense, in a fixed order.
pub fn run_checks(engine: &ClosureEngine, id: &str, inst: &Instance) -> Vec<CheckReport> {
    let ones = RatVector::new(vec![Rat::one(); inst.n()]);
    let mut out = vec![check_oracle_m1(engine, id, inst), check_sandwich(engine, id, inst)];
    match inst.sense() {
        Sense::Packing => {
            out.push(check_l_probe(engine, id, inst));
            out.push(check_cg_dominance(engine, id, inst));
        }
        Sense::Covering => out.push(check_gamma(engine, id, inst)),
    }
    out.push(check_onerow_ratio(engine, id, inst, &ones));
    out.push(check_integrality(engine, id, inst));
    if inst.m() != 1 {
        out.retain(|c| c.check_name != "oracle_m1");
    }
    out
}

/// Checks for every instance, in input order.
pub fn run_suite(engine: &ClosureEngine, instances: &[(String, Instance)]) -> Vec<CheckReport> {
    instances
        .par_iter()
        .map(|(id, inst)| run_checks(engine, id, inst))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

pub fn summarize(reports: &[CheckReport]) -> Summary {
    let mut s = Summary::default();
    for r in reports {
        match r.status {
            Status::Pass => s.pass += 1,
            Status::Fail => s.fail += 1,
            Status::Skipped => s.skipped += 1,
        }
    }
    s
}

fn timing_text(r: &CheckReport, with_timing: bool) -> String {
    if with_timing {
        r.timing_ms.to_string()
    } else {
        "-".into()
    }
}

/// One tab-separated line per report: check, instance, status, witness,
/// timing, detail. Timing prints as `-` unless requested, so reports are
/// reproducible byte for byte.
pub fn to_tsv(reports: &[CheckReport], with_timing: bool) -> String {
    let mut out = String::from("check\tinstance\tstatus\twitness\ttiming_ms\tdetail\n");
    for r in reports {
        let witness = r.witness.as_ref().map(Witness::text).unwrap_or_else(|| "-".into());
        let detail = if r.detail.is_empty() { "-" } else { &r.detail };
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.check_name,
            r.instance_id,
            r.status.as_str(),
            witness,
            timing_text(r, with_timing),
            detail
        )
        .expect("write to string");
    }
    out
}

#[derive(Serialize)]
struct WitnessRecord {
    point: String,
    lambda: Option<String>,
    inequality: String,
}

#[derive(Serialize)]
struct ReportRecord<'a> {
    check_name: &'a str,
    instance_id: &'a str,
    status: Status,
    witness: Option<WitnessRecord>,
    timing_ms: Option<u64>,
    detail: &'a str,
}

#[derive(Serialize)]
struct SuiteRecord<'a> {
    summary: Summary,
    reports: Vec<ReportRecord<'a>>,
}

/// The same fields as [`to_tsv`] as a JSON document, with a summary.
pub fn to_json(reports: &[CheckReport], with_timing: bool) -> String {
    let records = reports
        .iter()
        .map(|r| ReportRecord {
            check_name: &r.check_name,
            instance_id: &r.instance_id,
            status: r.status,
            witness: r.witness.as_ref().map(|w| WitnessRecord {
                point: w.point.to_string(),
                lambda: w.lambda.as_ref().map(|l| l.to_string()),
                inequality: w.inequality.to_string(),
            }),
            timing_ms: with_timing.then_some(r.timing_ms),
            detail: &r.detail,
        })
        .collect();
    let doc = SuiteRecord {
        summary: summarize(reports),
        reports: records,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable report");
    s.push('\n');
    s
}
