//! Bound vectors, dominated lattice paths and the path count `ψ`.
//!
//! A vector `x = (x_1, …, x_n)` admits the monotone lattice paths from
//! `(0,0)` to `(x_n, n)` whose vertices `(i, j)` with `j < n` satisfy
//! `i ≤ x_{j+1}`. Vertices on the top row are unconstrained apart from the
//! fixed endpoint. `ψ(x)` is the number of such paths; `ψ(()) = 1` and `ψ`
//! vanishes whenever the reduced vector has a negative entry.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default upper bound on the number of paths [`enumerate_paths`] will list.
pub const DEFAULT_PATH_CAP: u64 = 1_000_000;

/// Exact non-negative integer. Serializes as a decimal string.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn one() -> Self {
        BigCount(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount(v)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for BigCount {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .parse::<BigUint>()
            .map(BigCount)
            .map_err(|e| Error::Validation(format!("bad count {s:?}: {e}")))
    }
}

impl Add for BigCount {
    type Output = BigCount;
    fn add(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a BigCount> for &'a BigCount {
    type Output = BigCount;
    fn add(self, rhs: &'a BigCount) -> BigCount {
        BigCount(&self.0 + &rhs.0)
    }
}

impl AddAssign<&BigCount> for BigCount {
    fn add_assign(&mut self, rhs: &BigCount) {
        self.0 += &rhs.0;
    }
}

impl Mul for BigCount {
    type Output = BigCount;
    fn mul(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 * rhs.0)
    }
}

impl PartialEq<u64> for BigCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for BigCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Bound vector `x = (x_1, …, x_n)`; `x_i` bounds the horizontal coordinate
/// of path vertices at height `i − 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct XVector(Vec<i64>);

impl XVector {
    pub fn new(entries: Vec<i64>) -> Self {
        XVector(entries)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Last entry, i.e. the endpoint abscissa `x_n`.
    pub fn last(&self) -> Option<i64> {
        self.0.last().copied()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// The largest weakly increasing vector bounded entrywise by `self`.
    pub fn reduce(&self) -> XVector {
        let mut out = self.0.clone();
        for i in (0..out.len().saturating_sub(1)).rev() {
            out[i] = out[i].min(out[i + 1]);
        }
        XVector(out)
    }

    /// `(x→i, x↑i)` for a 1-based index `i`.
    pub fn branch(&self, i: usize) -> Result<(XVector, XVector)> {
        if i == 0 || i > self.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.len() });
        }
        let right = self
            .0
            .iter()
            .enumerate()
            .map(|(k, &v)| if k + 1 >= i { v - 1 } else { v })
            .collect();
        let mut up = self.0.clone();
        up.remove(i - 1);
        Ok((XVector(right), XVector(up)))
    }

    /// Entrywise `self ≤ other`; `false` for different lengths.
    pub fn le_entrywise(&self, other: &XVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl From<Vec<i64>> for XVector {
    fn from(v: Vec<i64>) -> Self {
        XVector(v)
    }
}

impl fmt::Display for XVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Comma-separated integers; whitespace is ignored and the empty string is
/// the empty vector.
impl FromStr for XVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_int_list(s).map(XVector)
    }
}

pub(crate) fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s.trim_start_matches('(').trim_end_matches(')');
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            p.parse::<i64>()
                .map_err(|e| Error::Validation(format!("bad integer {p:?}: {e}")))
        })
        .collect()
}

/// `x(f) = (f_1 − 1, f_2 − 2, …, f_n − n)` for a weakly increasing `f`.
pub fn x_of_f(f: &[i64]) -> Result<XVector> {
    if let Some(w) = f.windows(2).find(|w| w[0] > w[1]) {
        return Err(Error::Validation(format!(
            "token values must be weakly increasing, found {} before {}",
            w[0], w[1]
        )));
    }
    Ok(XVector(
        f.iter().enumerate().map(|(i, &v)| v - (i as i64 + 1)).collect(),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    R,
    U,
}

/// Monotone lattice path from the origin, as a sequence of unit steps.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePath(Vec<Step>);

impl LatticePath {
    pub fn new(steps: Vec<Step>) -> Self {
        LatticePath(steps)
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn endpoint(&self) -> (i64, i64) {
        let ups = self.0.iter().filter(|&&s| s == Step::U).count() as i64;
        (self.0.len() as i64 - ups, ups)
    }

    /// Every vertex `(i, j)` with `j < n` has `i ≤ x_{j+1}` and the path
    /// ends at `(x_n, n)`.
    pub fn dominated_by(&self, x: &XVector) -> bool {
        let n = x.len() as i64;
        let target = match x.last() {
            Some(xn) => (xn, n),
            None => return self.is_empty(),
        };
        if self.endpoint() != target {
            return false;
        }
        let bound = |j: i64| x.entries()[j as usize];
        let (mut a, mut b) = (0i64, 0i64);
        if bound(0) < 0 {
            return false;
        }
        for s in &self.0 {
            match s {
                Step::R => a += 1,
                Step::U => b += 1,
            }
            if b < n && a > bound(b) {
                return false;
            }
        }
        true
    }

    /// 1-based positions of the up steps.
    pub fn encode(&self) -> BTreeSet<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == Step::U)
            .map(|(k, _)| k + 1)
            .collect()
    }

    /// Inverse of [`LatticePath::encode`] for a path with `total` steps.
    pub fn decode(ups: &BTreeSet<usize>, total: usize) -> Result<LatticePath> {
        if let Some(&bad) = ups.iter().find(|&&p| p == 0 || p > total) {
            return Err(Error::Validation(format!(
                "position {bad} outside 1..={total}"
            )));
        }
        Ok(LatticePath(
            (1..=total)
                .map(|p| if ups.contains(&p) { Step::U } else { Step::R })
                .collect(),
        ))
    }
}

/// Membership test on the up-step encoding: with positions sorted as
/// `i_0 < … < i_{n−1}` the path is `x`-dominated iff `|s| = n`, the path has
/// `x_n + n` steps and at most `x_{j+1}` right steps precede the `(j+1)`-th
/// up step, i.e. `i_j ≤ x_{j+1} + j + 1`.
pub fn encoding_is_dominated(ups: &BTreeSet<usize>, x: &XVector, total: usize) -> bool {
    let Some(xn) = x.last() else {
        return ups.is_empty() && total == 0;
    };
    if ups.len() != x.len() || xn < 0 || total as i64 != xn + x.len() as i64 {
        return false;
    }
    if ups.iter().any(|&p| p == 0 || p > total) {
        return false;
    }
    ups.iter()
        .zip(x.entries())
        .enumerate()
        .all(|(j, (&pos, &bound))| pos as i64 <= bound + j as i64 + 1)
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Step::R => "R",
                Step::U => "U",
            })?;
        }
        Ok(())
    }
}

impl FromStr for LatticePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                'R' | 'r' => Ok(Step::R),
                'U' | 'u' => Ok(Step::U),
                other => Err(Error::Validation(format!("bad step {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(LatticePath)
    }
}

impl Serialize for LatticePath {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LatticePath {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dp,
    Rec,
    Det,
    #[default]
    Auto,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dp" => Ok(Method::Dp),
            "rec" => Ok(Method::Rec),
            "det" => Ok(Method::Det),
            "auto" => Ok(Method::Auto),
            other => Err(Error::Validation(format!("unknown method {other:?}"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Dp => "dp",
            Method::Rec => "rec",
            Method::Det => "det",
            Method::Auto => "auto",
        })
    }
}

/// Number of `x`-dominated paths ending at `(x_n, n)`.
pub fn psi(x: &XVector, method: Method) -> BigCount {
    match method {
        Method::Dp | Method::Auto => psi_dp(x),
        Method::Rec => psi_rec(x),
        Method::Det => psi_det(x),
    }
}

/// Table of path counts `N(a, b)` to every lattice point in the box
/// `[0, x_n] × [0, n]`.
#[derive(Clone, Debug)]
pub struct DpGrid {
    rows: Vec<Vec<BigUint>>,
}

impl DpGrid {
    /// Count of dominated paths from the origin to `(a, b)`; zero outside
    /// the admissible region.
    pub fn at(&self, a: usize, b: usize) -> BigCount {
        self.rows
            .get(b)
            .and_then(|r| r.get(a))
            .cloned()
            .map(BigCount)
            .unwrap_or_default()
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }
}

/// Fills `N(a, b) = N(a−1, b) + N(a, b−1)` over the admissible vertices,
/// directly from the unreduced bounds.
pub fn dp_grid(x: &XVector) -> DpGrid {
    let n = x.len();
    let width = match x.last() {
        Some(xn) if xn >= 0 => xn as usize + 1,
        _ => return DpGrid { rows: Vec::new() },
    };
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n + 1);
    for b in 0..=n {
        let limit = if b < n { x.entries()[b] } else { width as i64 - 1 };
        let mut row = vec![BigUint::zero(); width];
        for a in 0..width {
            if a as i64 > limit {
                break;
            }
            let mut v = if a == 0 && b == 0 { BigUint::one() } else { BigUint::zero() };
            if a > 0 {
                v += &row[a - 1];
            }
            if b > 0 {
                v += &rows[b - 1][a];
            }
            row[a] = v;
        }
        rows.push(row);
    }
    DpGrid { rows }
}

fn psi_dp(x: &XVector) -> BigCount {
    if x.is_empty() {
        return BigCount::one();
    }
    let grid = dp_grid(x);
    match x.last() {
        Some(xn) if xn >= 0 => grid.at(xn as usize, x.len()),
        _ => BigCount::zero(),
    }
}

fn psi_rec(x: &XVector) -> BigCount {
    let reduced = x.reduce();
    if reduced.entries().first().is_some_and(|&v| v < 0) {
        return BigCount::zero();
    }
    let mut memo = HashMap::new();
    BigCount(rec_count(reduced.entries(), &mut memo))
}

// `x` is reduced and non-negative.
fn rec_count(x: &[i64], memo: &mut HashMap<Vec<i64>, BigUint>) -> BigUint {
    // a zero bound at the bottom forces the first step up
    let start = x.iter().take_while(|&&v| v == 0).count();
    let x = &x[start..];
    if x.is_empty() {
        return BigUint::one();
    }
    if let Some(v) = memo.get(x) {
        return v.clone();
    }
    let right: Vec<i64> = x.iter().map(|v| v - 1).collect();
    let value = rec_count(&right, memo) + rec_count(&x[1..], memo);
    memo.insert(x.to_vec(), value.clone());
    value
}

fn psi_det(x: &XVector) -> BigCount {
    let reduced = x.reduce();
    if reduced.is_empty() {
        return BigCount::one();
    }
    if reduced.entries()[0] < 0 {
        return BigCount::zero();
    }
    let det = integer_determinant(path_matrix(&reduced));
    match det.to_biguint() {
        Some(v) => BigCount(v),
        None => unreachable!("path-count determinant is negative: {det}"),
    }
}

/// The matrix `a_ij = binom₊(x_i + 1, j − i + 1)` whose determinant counts
/// paths for a reduced `x`.
pub fn path_matrix(x: &XVector) -> Vec<Vec<BigInt>> {
    let n = x.len() as i64;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = binom_plus(x.entries()[i as usize] + 1, j - i + 1);
                    BigInt::from_biguint(Sign::Plus, v.0)
                })
                .collect()
        })
        .collect()
}

/// `binom(y, z)` for `y ≥ z ≥ 0` and zero otherwise.
pub fn binom_plus(y: i64, z: i64) -> BigCount {
    if z < 0 || y < z {
        return BigCount::zero();
    }
    BigCount(binomial(y as u64, z as u64))
}

pub(crate) fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Fraction-free (Bareiss) elimination; every division is exact.
pub fn integer_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// All `x`-dominated paths ending at `(x_n, n)` in lexicographic order
/// (`R < U`). Fails once more than `cap` paths would be produced.
pub fn enumerate_paths(x: &XVector, cap: u64) -> Result<Vec<LatticePath>> {
    let n = x.len();
    if n == 0 {
        return Ok(vec![LatticePath(Vec::new())]);
    }
    let reduced = x.reduce();
    let xn = reduced.entries()[n - 1];
    if reduced.entries()[0] < 0 {
        return Ok(Vec::new());
    }
    // reduced bounds make every admissible vertex extendable to the endpoint
    let limit = |b: usize| if b < n { reduced.entries()[b] } else { xn };
    let mut out = Vec::new();
    let mut steps = Vec::with_capacity(xn as usize + n);
    fn walk(
        a: i64,
        b: usize,
        n: usize,
        xn: i64,
        limit: &dyn Fn(usize) -> i64,
        steps: &mut Vec<Step>,
        out: &mut Vec<LatticePath>,
        cap: u64,
    ) -> Result<()> {
        if a == xn && b == n {
            if out.len() as u64 >= cap {
                return Err(Error::CapExceeded { what: "path enumeration".into(), limit: cap });
            }
            out.push(LatticePath(steps.clone()));
            return Ok(());
        }
        if a < limit(b) {
            steps.push(Step::R);
            walk(a + 1, b, n, xn, limit, steps, out, cap)?;
            steps.pop();
        }
        if b < n {
            steps.push(Step::U);
            walk(a, b + 1, n, xn, limit, steps, out, cap)?;
            steps.pop();
        }
        Ok(())
    }
    walk(0, 0, n, xn, &limit, &mut steps, &mut out, cap)?;
    debug_assert!(out.iter().all(|p| p.dominated_by(x)));
    Ok(out)
}

/// Catalan number `C_n = binom(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> BigCount {
    BigCount(binomial(2 * n, n) / (n + 1))
}
