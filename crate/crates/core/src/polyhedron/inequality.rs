use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exactnum::{integer_row, primitive, Rat, RatVector};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Le,
    Ge,
}

impl Relation {
    pub fn flipped(self) -> Relation {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

/// `normal · x <= rhs` or `normal · x >= rhs`, always in canonical form:
/// integer coefficients with overall gcd 1 and a positive leading
/// (first nonzero) coefficient. Two inequalities describing the same
/// halfspace are therefore equal as values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearInequality {
    normal: RatVector,
    rhs: Rat,
    relation: Relation,
}

impl LinearInequality {
    pub fn new(normal: RatVector, rhs: Rat, relation: Relation) -> Result<Self, Error> {
        if normal.is_zero() {
            return Err(Error::Dimension("inequality with zero normal".into()));
        }
        let mut vals = normal.into_entries();
        vals.push(rhs);
        let mut ints = integer_row(&vals);
        primitive(&mut ints);
        let mut relation = relation;
        let lead_negative = ints
            .iter()
            .find(|v| !v.is_zero())
            .map(|v| v.is_negative())
            .unwrap_or(false);
        if lead_negative {
            ints.iter_mut().for_each(|v| *v = -&*v);
            relation = relation.flipped();
        }
        let rhs = Rat::from_int(ints.pop().expect("rhs present"));
        Ok(LinearInequality {
            normal: ints.into_iter().map(Rat::from_int).collect(),
            rhs,
            relation,
        })
    }

    pub fn from_ints(normal: &[i64], relation: Relation, rhs: i64) -> Result<Self, Error> {
        Self::new(RatVector::from_ints(normal), Rat::from_int(rhs), relation)
    }

    /// `x_j >= 0` in dimension `dim`.
    pub fn nonnegativity(dim: usize, j: usize) -> Self {
        Self::new(RatVector::unit(dim, j), Rat::zero(), Relation::Ge).expect("unit normal")
    }

    pub fn normal(&self) -> &RatVector {
        &self.normal
    }

    pub fn rhs(&self) -> &Rat {
        &self.rhs
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// Amount by which `x` violates the inequality; zero or negative when
    /// satisfied.
    pub fn violation(&self, x: &RatVector) -> Rat {
        let lhs = self.normal.dot(x);
        match self.relation {
            Relation::Le => lhs - &self.rhs,
            Relation::Ge => &self.rhs - &lhs,
        }
    }

    pub fn satisfied_by(&self, x: &RatVector) -> bool {
        !self.violation(x).is_positive()
    }

    pub fn is_tight(&self, x: &RatVector) -> bool {
        self.normal.dot(x) == self.rhs
    }

    /// Whether the direction `r` stays inside the halfspace.
    pub fn allows_direction(&self, r: &RatVector) -> bool {
        let s = self.normal.dot(r);
        match self.relation {
            Relation::Le => !s.is_positive(),
            Relation::Ge => !s.is_negative(),
        }
    }

    pub fn is_nonnegativity(&self) -> bool {
        self.relation == Relation::Ge && self.rhs.is_zero() && self.unit_index().is_some()
    }

    fn unit_index(&self) -> Option<usize> {
        let mut idx = None;
        for (j, c) in self.normal.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if idx.is_some() || c != &Rat::one() {
                return None;
            }
            idx = Some(j);
        }
        idx
    }

    /// Every coefficient strictly positive.
    pub fn has_positive_normal(&self) -> bool {
        self.normal.iter().all(Rat::is_positive)
    }

    /// Homogeneous row `(c0, c)` with `c0 * t + c · x >= 0` describing the
    /// halfspace when `t = 1`.
    pub(crate) fn homogeneous_ge_row(&self) -> Vec<BigInt> {
        let mut row: Vec<Rat> = Vec::with_capacity(self.dim() + 1);
        match self.relation {
            Relation::Ge => {
                row.push(-&self.rhs);
                row.extend(self.normal.iter().cloned());
            }
            Relation::Le => {
                row.push(self.rhs.clone());
                row.extend(self.normal.iter().map(|c| -c));
            }
        }
        integer_row(&row)
    }

    /// Lift into dimension `dim + 1` with a zero coefficient at position `j`.
    pub fn insert_coordinate(&self, j: usize) -> LinearInequality {
        LinearInequality {
            normal: self.normal.insert(j, Rat::zero()),
            rhs: self.rhs.clone(),
            relation: self.relation,
        }
    }

    /// The same halfspace scaled so that the right-hand side is one.
    /// Fails when the right-hand side is zero.
    pub fn unit_rhs_normal(&self) -> Result<RatVector, Error> {
        let inv = self.rhs.recip()?;
        Ok(self.normal.scale(&inv))
    }

    /// Parse the canonical text form, e.g. `1 2 <= 2`.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let bad = |message: String| Error::Parse {
            line: 0,
            column: 0,
            message,
        };
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let pos = tokens
            .iter()
            .position(|t| *t == "<=" || *t == ">=")
            .ok_or_else(|| bad(format!("no relation in inequality {text:?}")))?;
        if pos == 0 || pos + 2 != tokens.len() {
            return Err(bad(format!("malformed inequality {text:?}")));
        }
        let relation = if tokens[pos] == "<=" {
            Relation::Le
        } else {
            Relation::Ge
        };
        let normal = tokens[..pos]
            .iter()
            .map(|t| t.parse::<Rat>())
            .collect::<Result<RatVector, _>>()?;
        let rhs = tokens[pos + 1].parse::<Rat>()?;
        Self::new(normal, rhs, relation)
    }

    fn sort_key(&self) -> (u8, Option<usize>) {
        if self.is_nonnegativity() {
            (0, self.unit_index())
        } else {
            (1, None)
        }
    }
}

/// Canonical listing order: the nonnegativity bounds `x_j >= 0` first in
/// coordinate order, then everything else lexicographically by normal,
/// right-hand side and relation.
impl Ord for LinearInequality {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then_with(|| self.normal.cmp(&other.normal))
            .then_with(|| self.rhs.cmp(&other.rhs))
            .then_with(|| self.relation.cmp(&other.relation))
    }
}

impl PartialOrd for LinearInequality {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.normal, self.relation.symbol(), self.rhs)
    }
}

impl fmt::Debug for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form_examples() {
        let a = LinearInequality::new(
            RatVector::new(vec![Rat::new(1, 2).unwrap(), Rat::one()]),
            Rat::one(),
            Relation::Le,
        )
        .unwrap();
        assert_eq!(a.to_string(), "1 2 <= 2");
        let b = LinearInequality::from_ints(&[-2, -4], Relation::Ge, -4).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            LinearInequality::from_ints(&[0, -3], Relation::Le, 0)
                .unwrap()
                .to_string(),
            "0 1 >= 0"
        );
        assert!(LinearInequality::from_ints(&[0, 0], Relation::Le, 1).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for text in ["1 2 <= 2", "1 0 >= 0", "3 -1 >= 7", "2 <= 5"] {
            assert_eq!(LinearInequality::parse(text).unwrap().to_string(), text);
        }
        assert!(LinearInequality::parse("1 2 2").is_err());
        assert!(LinearInequality::parse("<= 2").is_err());
    }

    #[test]
    fn listing_order_puts_bounds_first() {
        let mut v = [
            LinearInequality::from_ints(&[1, 2], Relation::Le, 2).unwrap(),
            LinearInequality::nonnegativity(2, 1),
            LinearInequality::from_ints(&[0, 1], Relation::Le, 1).unwrap(),
            LinearInequality::nonnegativity(2, 0),
        ];
        v.sort();
        let text: Vec<String> = v.iter().map(|i| i.to_string()).collect();
        assert_eq!(text, ["1 0 >= 0", "0 1 >= 0", "0 1 <= 1", "1 2 <= 2"]);
    }

    #[test]
    fn violation_and_directions() {
        let f = LinearInequality::from_ints(&[1, 2], Relation::Le, 2).unwrap();
        let x = RatVector::new(vec![Rat::new(3, 2).unwrap(), Rat::new(1, 2).unwrap()]);
        assert_eq!(f.violation(&x), Rat::new(1, 2).unwrap());
        assert!(!f.satisfied_by(&x));
        assert!(f.allows_direction(&RatVector::from_ints(&[-1, 0])));
        assert!(!f.allows_direction(&RatVector::from_ints(&[0, 1])));
    }

    proptest! {
        #[test]
        fn scaling_invariance(
            coeffs in prop::collection::vec(-9i64..9, 3),
            rhs in -9i64..9,
            p in 1i64..12,
            q in 1i64..12,
            ge in any::<bool>(),
        ) {
            prop_assume!(coeffs.iter().any(|&c| c != 0));
            let rel = if ge { Relation::Ge } else { Relation::Le };
            let base = LinearInequality::from_ints(&coeffs, rel, rhs).unwrap();
            let c = Rat::new(p, q).unwrap();
            let scaled = LinearInequality::new(
                RatVector::from_ints(&coeffs).scale(&c),
                Rat::from_int(rhs) * &c,
                rel,
            ).unwrap();
            prop_assert_eq!(&base, &scaled);
            let again = LinearInequality::new(base.normal().clone(), base.rhs().clone(), base.relation()).unwrap();
            prop_assert_eq!(&base, &again);
            let negated = LinearInequality::new(
                RatVector::from_ints(&coeffs).scale(&-c.clone()),
                -(Rat::from_int(rhs) * &c),
                rel.flipped(),
            ).unwrap();
            prop_assert_eq!(&base, &negated);
        }
    }
}
