use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::exactnum::{Rat, RatVector};
use crate::Error;

/// Multipliers `Λ` with `k` columns of length `m` (plain aggregation when
/// `k = 1`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Aggregation {
    columns: Vec<RatVector>,
    normalized: bool,
}

impl Aggregation {
    /// Multipliers taken as given; entries must be nonnegative and all
    /// columns of the same length.
    pub fn from_columns(columns: Vec<RatVector>) -> Result<Self, Error> {
        let Some(first) = columns.first() else {
            return Err(Error::TrivialAggregation);
        };
        let m = first.dim();
        if m == 0 || columns.iter().any(|c| c.dim() != m) {
            return Err(Error::Dimension(
                "aggregation columns must share a positive length".into(),
            ));
        }
        if columns.iter().flat_map(|c| c.iter()).any(Rat::is_negative) {
            return Err(Error::InvalidInstance(
                "aggregation multipliers must be nonnegative".into(),
            ));
        }
        Ok(Aggregation {
            columns,
            normalized: false,
        })
    }

    pub fn single(lambda: RatVector) -> Result<Self, Error> {
        Self::from_columns(vec![lambda])
    }

    pub fn unit(m: usize, i: usize) -> Self {
        Aggregation {
            columns: vec![RatVector::unit(m, i)],
            normalized: true,
        }
    }

    /// Zero columns dropped, every remaining column scaled to sum one.
    pub fn normalize(&self) -> Result<Self, Error> {
        if self.normalized {
            return Ok(self.clone());
        }
        let columns: Vec<RatVector> = self
            .columns
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| {
                let total: Rat = c.iter().fold(Rat::zero(), |acc, x| acc + x);
                c.scale(&total.recip().expect("nonzero column"))
            })
            .collect();
        if columns.is_empty() {
            return Err(Error::TrivialAggregation);
        }
        Ok(Aggregation {
            columns,
            normalized: true,
        })
    }

    pub fn columns(&self) -> &[RatVector] {
        &self.columns
    }

    pub fn m(&self) -> usize {
        self.columns[0].dim()
    }

    pub fn k(&self) -> usize {
        self.columns.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Restriction to the rows in `keep` (in order), or `None` when every
    /// column vanishes there.
    pub fn restrict(&self, keep: &[usize]) -> Option<Aggregation> {
        let columns = self
            .columns
            .iter()
            .map(|c| keep.iter().map(|&i| c[i].clone()).collect())
            .collect();
        Aggregation::from_columns(columns).ok()?.normalize().ok()
    }
}

/// Space-separated entries per column, columns separated by ` | `.
impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, c) in self.columns.iter().enumerate() {
            if t > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SampleScheme {
    pub grid_denominator: u32,
    pub include_units: bool,
    pub k: usize,
    pub refinement_rounds: u32,
}

impl Default for SampleScheme {
    fn default() -> Self {
        SampleScheme {
            grid_denominator: 4,
            include_units: true,
            k: 1,
            refinement_rounds: 1,
        }
    }
}

impl SampleScheme {
    pub fn with_grid(d: u32) -> Self {
        SampleScheme {
            grid_denominator: d,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.grid_denominator == 0 {
            return Err(Error::Usage("grid denominator must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(Error::Usage("k must be at least 1".into()));
        }
        Ok(())
    }
}

/// Normalized single-column multipliers `v / Σv` for every nonzero
/// `v ∈ ℤᵐ_+` with `Σv ≤ D`, deduplicated. Unit vectors come first, then
/// the remaining multipliers by increasing `Σv` and decreasing `v` in
/// lexicographic order.
///
/// Taking every total up to `D` (rather than exactly `D`) makes the grid
/// closed under restriction to a subset of rows, which keeps sampled
/// closures of sub-instances aligned with the parent sample.
pub fn lambda_grid(m: usize, d: u32) -> Vec<RatVector> {
    assert!(m >= 1, "need at least one row");
    let mut out: Vec<RatVector> = (0..m).map(|i| RatVector::unit(m, i)).collect();
    let mut v = vec![0u32; m];
    for total in 2..=d {
        compositions(total, 0, &mut v, &mut |v| {
            // a non-primitive v repeats the multiplier of v / gcd, seen at a smaller total
            if v.iter().fold(0u32, |g, &x| g.gcd(&x)) != 1 {
                return;
            }
            out.push(
                v.iter()
                    .map(|&x| Rat::new(BigInt::from(x), BigInt::from(total)).expect("positive total"))
                    .collect(),
            );
        });
    }
    out
}

/// Every `v` with entries summing to `total`, in decreasing lexicographic order.
fn compositions(total: u32, pos: usize, v: &mut [u32], visit: &mut impl FnMut(&[u32])) {
    if pos + 1 == v.len() {
        v[pos] = total;
        visit(v);
        return;
    }
    for x in (0..=total).rev() {
        v[pos] = x;
        compositions(total - x, pos + 1, v, visit);
    }
    v[pos] = 0;
}

/// The aggregations sampled for an `m`-row instance: the grid multipliers
/// for `k = 1`, and every multiset of `k` grid multipliers otherwise.
pub fn sample_lambdas(m: usize, scheme: &SampleScheme) -> Vec<Aggregation> {
    let grid = lambda_grid(m, scheme.grid_denominator.max(1));
    let single = |c: &RatVector| Aggregation {
        columns: vec![c.clone()],
        normalized: true,
    };
    if scheme.k <= 1 {
        return grid.iter().map(single).collect();
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; scheme.k];
    loop {
        out.push(Aggregation {
            columns: idx.iter().map(|&i| grid[i].clone()).collect(),
            normalized: true,
        });
        // next nondecreasing index tuple
        let mut p = scheme.k;
        while p > 0 && idx[p - 1] == grid.len() - 1 {
            p -= 1;
        }
        if p == 0 {
            break;
        }
        idx[p - 1] += 1;
        let base = idx[p - 1];
        idx[p..].iter_mut().for_each(|x| *x = base);
    }
    out
}
