//! Exact rationals and the small amount of dense linear algebra the hull
//! code needs. Everything here is arbitrary precision; there is no
//! floating point anywhere in the crate's math.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Deref, Index, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

/// An exact rational number, always stored in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, Error> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(BigRational::new(numer.into(), denom)))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Rat(BigRational::from_integer(v.into()))
    }

    pub fn from_big(r: BigRational) -> Self {
        Rat(r)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn checked_div(&self, other: &Rat) -> Result<Rat, Error> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(&self.0 / &other.0))
    }

    pub fn recip(&self) -> Result<Rat, Error> {
        Rat::one().checked_div(self)
    }

    /// Integer value, if this is an integer that fits in an `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse {
            line: 0,
            column: 0,
            message: format!("not a rational number: {s:?}"),
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                Rat::new(p, q)
            }
            None => Ok(Rat::from_int(s.trim().parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Self {
        Rat::from_int(v)
    }
}

impl From<BigInt> for Rat {
    fn from(v: BigInt) -> Self {
        Rat::from_int(v)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

/// The four field operations plus comparison, as a single entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn rat_arith(x: &Rat, y: &Rat, op: RatOp) -> Result<Rat, Error> {
    Ok(match op {
        RatOp::Add => x + y,
        RatOp::Sub => x - y,
        RatOp::Mul => x * y,
        RatOp::Div => x.checked_div(y)?,
    })
}

pub fn rat_cmp(x: &Rat, y: &Rat) -> Ordering {
    x.cmp(y)
}

/// A dense vector of rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RatVector(Vec<Rat>);

impl RatVector {
    pub fn new(entries: Vec<Rat>) -> Self {
        RatVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        RatVector(vec![Rat::zero(); dim])
    }

    pub fn unit(dim: usize, j: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[j] = Rat::one();
        v
    }

    pub fn from_ints<I: Into<BigInt> + Copy>(entries: &[I]) -> Self {
        RatVector(entries.iter().map(|&e| Rat::from_int(e)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rat> {
        self.0
    }

    pub fn dot(&self, other: &RatVector) -> Rat {
        assert_eq!(self.dim(), other.dim(), "dot product dimension mismatch");
        self.0.iter().zip(&other.0).fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, c: &Rat) -> RatVector {
        RatVector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rat::is_integer)
    }

    /// Copy with entry `j` replaced.
    pub fn with_entry(&self, j: usize, value: Rat) -> RatVector {
        let mut v = self.clone();
        v.0[j] = value;
        v
    }

    /// Copy with a new coordinate inserted at position `j`.
    pub fn insert(&self, j: usize, value: Rat) -> RatVector {
        let mut v = self.0.clone();
        v.insert(j, value);
        RatVector(v)
    }

    /// Copy with coordinate `j` removed.
    pub fn remove(&self, j: usize) -> RatVector {
        let mut v = self.0.clone();
        v.remove(j);
        RatVector(v)
    }

    /// Integer coordinates, if every entry is an integer fitting in `i64`.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(Rat::to_i64).collect()
    }
}

impl Deref for RatVector {
    type Target = [Rat];
    fn deref(&self) -> &[Rat] {
        &self.0
    }
}

impl FromIterator<Rat> for RatVector {
    fn from_iter<T: IntoIterator<Item = Rat>>(iter: T) -> Self {
        RatVector(iter.into_iter().collect())
    }
}

impl Add<&RatVector> for &RatVector {
    type Output = RatVector;
    fn add(self, rhs: &RatVector) -> RatVector {
        assert_eq!(self.dim(), rhs.dim());
        self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect()
    }
}

impl Sub<&RatVector> for &RatVector {
    type Output = RatVector;
    fn sub(self, rhs: &RatVector) -> RatVector {
        assert_eq!(self.dim(), rhs.dim());
        self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect()
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// A rectangular matrix of rationals, stored by rows.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatMatrix {
    rows: Vec<RatVector>,
    cols: usize,
}

impl RatMatrix {
    pub fn new(rows: Vec<RatVector>) -> Result<Self, Error> {
        let cols = rows.first().map(RatVector::dim).unwrap_or(0);
        if rows.is_empty() || cols == 0 {
            return Err(Error::Dimension("matrix must have at least one row and column".into()));
        }
        if rows.iter().any(|r| r.dim() != cols) {
            return Err(Error::Dimension("matrix rows have unequal length".into()));
        }
        Ok(RatMatrix { rows, cols })
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Result<Self, Error> {
        Self::new(rows.iter().map(|r| RatVector::from_ints(r)).collect())
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[RatVector] {
        &self.rows
    }

    pub fn mul_vec(&self, x: &RatVector) -> RatVector {
        self.rows.iter().map(|r| r.dot(x)).collect()
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.rows[i][j]
    }
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scale a rational row to integers by its common denominator.
pub fn integer_row(values: &[Rat]) -> Vec<BigInt> {
    let d = common_denominator(values);
    values.iter().map(|v| v.numer() * (&d / v.denom())).collect()
}

/// Divide out the gcd of a list of integers. A zero list is left alone.
pub fn primitive(values: &mut [BigInt]) {
    let g = values.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in values.iter_mut() {
            *v /= &g;
        }
    }
}

/// Fraction-free forward elimination (Bareiss) on an integer matrix in
/// place. Returns the pivot columns in order; rows below the rank are zero.
pub(crate) fn bareiss_echelon(m: &mut [Vec<BigInt>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map(Vec::len).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a list of rational vectors.
pub fn rank(vectors: &[RatVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<BigInt>> = vectors.iter().map(|v| integer_row(v)).collect();
    bareiss_echelon(&mut m).len()
}

/// Solve `M x = rhs` exactly for square `M`.
pub fn solve_linear(m: &RatMatrix, rhs: &RatVector) -> Result<RatVector, Error> {
    let n = m.row_count();
    if m.col_count() != n || rhs.dim() != n {
        return Err(Error::Dimension(format!(
            "solve_linear needs a square system, got {}x{} with rhs of length {}",
            n,
            m.col_count(),
            rhs.dim()
        )));
    }
    // Augmented integer system, one row scaled at a time.
    let mut aug: Vec<Vec<BigInt>> = m
        .rows()
        .iter()
        .zip(rhs.iter())
        .map(|(row, b)| {
            let mut vals = row.entries().to_vec();
            vals.push(b.clone());
            integer_row(&vals)
        })
        .collect();
    let pivots = bareiss_echelon(&mut aug);
    if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
        return Err(Error::Singular);
    }
    let mut x = vec![Rat::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rat::from_int(aug[i][n].clone());
        for j in (i + 1)..n {
            acc = acc - Rat::from_int(aug[i][j].clone()) * &x[j];
        }
        x[i] = acc.checked_div(&Rat::from_int(aug[i][i].clone()))?;
    }
    let x = RatVector::new(x);
    debug_assert_eq!(&m.mul_vec(&x), rhs, "solve_linear re-substitution failed");
    Ok(x)
}

/// Number of affinely independent points among `points`
/// (dimension of the affine hull plus one).
pub fn affine_rank(points: &[RatVector]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let diffs: Vec<RatVector> = points[1..].iter().map(|p| p - first).collect();
    rank(&diffs) + 1
}

/// Reduced row echelon basis of the span of `vectors`, with integer
/// primitive rows. Deterministic for a given span.
pub(crate) fn canonical_basis(vectors: &[RatVector]) -> Vec<RatVector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let dim = vectors[0].dim();
    let mut m: Vec<Vec<Rat>> = vectors.iter().map(|v| v.entries().to_vec()).collect();
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot) {
                    *x = &*x - &(&f * p);
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    m.into_iter()
        .map(|row| {
            let mut ints = integer_row(&row);
            primitive(&mut ints);
            ints.into_iter().map(Rat::from_int).collect()
        })
        .collect()
}

/// Orthogonal projection of `v` onto the complement of `span(basis)`.
/// `basis` must be linearly independent.
pub(crate) fn project_out(v: &RatVector, basis: &[RatVector]) -> RatVector {
    if basis.is_empty() {
        return v.clone();
    }
    let k = basis.len();
    let gram = RatMatrix::new(
        (0..k)
            .map(|i| (0..k).map(|j| basis[i].dot(&basis[j])).collect())
            .collect(),
    )
    .expect("gram matrix is square and nonempty");
    let rhs: RatVector = basis.iter().map(|b| b.dot(v)).collect();
    let coeffs = solve_linear(&gram, &rhs).expect("basis vectors are independent");
    let mut out = v.clone();
    for (c, b) in coeffs.iter().zip(basis) {
        out = &out - &b.scale(c);
    }
    out
}
