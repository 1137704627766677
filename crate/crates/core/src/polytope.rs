//! Rational convex polytopes in H-representation.
//!
//! Everything here is exact: offsets and vertices are arbitrary precision
//! rationals, normals are primitive integer vectors. A polytope is the closed
//! set `{x : <normal_i, x> <= offset_i for all i}`; it may be empty or lower
//! dimensional (cuts produce both), and redundant half-spaces are allowed.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(text.to_string());
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Always `"p/q"`, including integers (`"2/1"`).
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(value: f64) -> Result<Rational> {
    Rational::from_float(value).ok_or_else(|| Error::ParseRational(value.to_string()))
}

/// `{x : <normal, x> <= offset}` with a primitive integer normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfSpace {
    normal: Vec<i64>,
    offset: Rational,
}

impl HalfSpace {
    /// Divides out the gcd of the normal, so `2x + 2y <= 3` becomes `x + y <= 3/2`.
    pub fn new(normal: Vec<i64>, offset: Rational) -> Result<Self> {
        let g = normal.iter().fold(0i64, |acc, &c| acc.gcd(&c));
        if g == 0 {
            return Err(Error::ZeroNormal);
        }
        let normal = normal.into_iter().map(|c| c / g).collect();
        let offset = offset / int(g);
        Ok(Self { normal, offset })
    }

    pub fn normal(&self) -> &[i64] {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    fn dot(&self, x: &[Rational]) -> Rational {
        self.normal
            .iter()
            .zip(x)
            .fold(Rational::zero(), |acc, (&a, xi)| acc + int(a) * xi)
    }

    fn dot_int(&self, x: &[i64]) -> Rational {
        int(self.normal.iter().zip(x).map(|(a, b)| a * b).sum())
    }

    /// `offset - <normal, x>`; nonnegative iff `x` satisfies the constraint.
    pub fn slack(&self, x: &[Rational]) -> Rational {
        &self.offset - self.dot(x)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn contains_int(&self, x: &[i64]) -> bool {
        self.dot_int(x) <= self.offset
    }

    pub fn is_tight_int(&self, x: &[i64]) -> bool {
        self.dot_int(x) == self.offset
    }
}

impl fmt::Display for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}·x <= {}", self.normal, self.offset)
    }
}

/// An integer point of a polytope together with the number of constraints
/// it meets with equality (0 for interior points).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub coords: Vec<i64>,
    pub stratum: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    #[serde(with = "opt_rational_vec")]
    pub vertex: Option<Vec<Rational>>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelzantReport {
    pub simple: bool,
    /// Normals are primitive integer vectors by construction, so this only
    /// fails for polytopes that are not full dimensional.
    pub rational: bool,
    pub smooth: bool,
    pub violations: Vec<Violation>,
    /// Indices of half-spaces that do not support a facet.
    pub redundant: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPolytope {
    dim: usize,
    halfspaces: Vec<HalfSpace>,
}

impl RationalPolytope {
    pub fn new(dim: usize, halfspaces: Vec<HalfSpace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidPolytope("dimension must be positive".into()));
        }
        for h in &halfspaces {
            if h.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: h.dim(),
                });
            }
        }
        Ok(Self { dim, halfspaces })
    }

    /// The box `{0} ∩ {x_1 <= -1}`: bounded and infeasible.
    pub fn empty(dim: usize) -> Self {
        let mut halfspaces = Vec::with_capacity(2 * dim + 1);
        for i in 0..dim {
            let mut e = vec![0; dim];
            e[i] = 1;
            halfspaces.push(HalfSpace::new(e.clone(), int(0)).unwrap());
            e[i] = -1;
            halfspaces.push(HalfSpace::new(e, int(0)).unwrap());
        }
        let mut e = vec![0; dim];
        e[0] = 1;
        halfspaces.push(HalfSpace::new(e, int(-1)).unwrap());
        Self { dim, halfspaces }
    }

    /// `prod [lo_i, hi_i]`.
    pub fn cuboid(bounds: &[(i64, i64)]) -> Self {
        let dim = bounds.len();
        let mut halfspaces = Vec::with_capacity(2 * dim);
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            let mut e = vec![0; dim];
            e[i] = 1;
            halfspaces.push(HalfSpace::new(e.clone(), int(hi)).unwrap());
            e[i] = -1;
            halfspaces.push(HalfSpace::new(e, int(-lo)).unwrap());
        }
        Self { dim, halfspaces }
    }

    /// `k·Δ_n = {x >= 0, sum x <= k}`.
    pub fn scaled_simplex(dim: usize, k: i64) -> Self {
        let mut halfspaces = Vec::with_capacity(dim + 1);
        for i in 0..dim {
            let mut e = vec![0; dim];
            e[i] = -1;
            halfspaces.push(HalfSpace::new(e, int(0)).unwrap());
        }
        halfspaces.push(HalfSpace::new(vec![1; dim], int(k)).unwrap());
        Self { dim, halfspaces }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    fn system(&self) -> System {
        System {
            dim: self.dim,
            rows: self
                .halfspaces
                .iter()
                .map(|h| h.normal.iter().map(|&a| int(a)).collect())
                .collect(),
            rhs: self.halfspaces.iter().map(|h| h.offset.clone()).collect(),
        }
    }

    /// A nonzero `d` with `<normal_i, d> <= 0` for every constraint, if one exists.
    pub fn recession_direction(&self) -> Option<Vec<Rational>> {
        self.system().recession_direction()
    }

    pub fn is_bounded(&self) -> bool {
        self.recession_direction().is_none()
    }

    fn ensure_bounded(&self) -> Result<()> {
        match self.recession_direction() {
            Some(d) => Err(Error::UnboundedPolytope {
                direction: d.iter().map(format_rational).collect(),
            }),
            None => Ok(()),
        }
    }

    /// Vertices by n-fold facet intersection, sorted and deduplicated.
    pub fn vertices(&self) -> Result<Vec<Vec<Rational>>> {
        self.ensure_bounded()?;
        Ok(self.system().vertices())
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.vertices()?.is_empty())
    }

    /// Affine dimension of the polytope, `None` when empty.
    pub fn affine_dim(&self) -> Result<Option<usize>> {
        let vertices = self.vertices()?;
        Ok(affine_dim(&vertices))
    }

    /// True for nonempty polytopes of dimension less than `dim`.
    pub fn is_degenerate(&self) -> Result<bool> {
        Ok(matches!(self.affine_dim()?, Some(d) if d < self.dim))
    }

    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(self.halfspaces.iter().all(|h| h.contains(x)))
    }

    pub fn contains_int(&self, x: &[i64]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(self.halfspaces.iter().all(|h| h.contains_int(x)))
    }

    /// Number of constraints met with equality at `x`.
    pub fn stratum(&self, x: &[i64]) -> usize {
        self.halfspaces.iter().filter(|h| h.is_tight_int(x)).count()
    }

    /// Intersection with one more half-space. The result may be empty or
    /// lower dimensional; see [`RationalPolytope::is_degenerate`].
    pub fn cut(&self, h: &HalfSpace) -> Result<Self> {
        if h.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: h.dim(),
            });
        }
        let mut halfspaces = self.halfspaces.clone();
        halfspaces.push(h.clone());
        Ok(Self {
            dim: self.dim,
            halfspaces,
        })
    }

    /// `p + shift`.
    pub fn translate(&self, shift: &[Rational]) -> Result<Self> {
        if shift.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: shift.len(),
            });
        }
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| HalfSpace {
                normal: h.normal.clone(),
                offset: &h.offset + h.dot(shift),
            })
            .collect();
        Ok(Self {
            dim: self.dim,
            halfspaces,
        })
    }

    /// Image under `x -> U x + t` for an integer matrix `U` of determinant ±1.
    pub fn transform_unimodular(&self, u: &[Vec<i64>], t: &[i64]) -> Result<Self> {
        let n = self.dim;
        if u.len() != n || u.iter().any(|row| row.len() != n) || t.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: u.len(),
            });
        }
        let matrix: Vec<Vec<Rational>> = u
            .iter()
            .map(|row| row.iter().map(|&a| int(a)).collect())
            .collect();
        let det = determinant(&matrix);
        if det.abs() != Rational::one() {
            return Err(Error::InvalidPolytope(format!(
                "coordinate change has determinant {det}, not ±1"
            )));
        }
        let inverse = inverse(&matrix).expect("unimodular matrix is invertible");
        let mut halfspaces = Vec::with_capacity(self.halfspaces.len());
        for h in &self.halfspaces {
            // a·x <= b with x = U^{-1}(y - t)  =>  (a U^{-1})·y <= b + (a U^{-1})·t
            let row: Vec<Rational> = (0..n)
                .map(|j| {
                    (0..n).fold(Rational::zero(), |acc, i| {
                        acc + int(h.normal[i]) * &inverse[i][j]
                    })
                })
                .collect();
            let normal: Vec<i64> = row
                .iter()
                .map(|r| {
                    debug_assert!(r.is_integer());
                    r.to_integer().to_i64().expect("normal fits in i64")
                })
                .collect();
            let shift = row
                .iter()
                .zip(t)
                .fold(Rational::zero(), |acc, (r, &ti)| acc + r * int(ti));
            halfspaces.push(HalfSpace {
                normal,
                offset: &h.offset + shift,
            });
        }
        Ok(Self { dim: n, halfspaces })
    }

    /// All integer points, closed polytope, sorted lexicographically.
    ///
    /// Coordinates are fixed one at a time; the admissible range of the next
    /// coordinate is read off the vertices of the current slice.
    pub fn enumerate_lattice_points(&self) -> Result<Vec<LatticePoint>> {
        self.ensure_bounded()?;
        let system = self.system();
        let mut prefix = Vec::with_capacity(self.dim);
        let mut coords = Vec::new();
        enumerate_slices(&system, &mut prefix, &mut coords);
        coords.sort();
        Ok(coords
            .into_iter()
            .map(|c| LatticePoint {
                stratum: self.stratum(&c),
                coords: c,
            })
            .collect())
    }

    pub fn validate_delzant(&self) -> Result<DelzantReport> {
        let vertices = self.vertices()?;
        if vertices.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let n = self.dim;
        let mut report = DelzantReport {
            simple: true,
            rational: true,
            smooth: true,
            violations: Vec::new(),
            redundant: Vec::new(),
        };
        if affine_dim(&vertices) != Some(n) {
            report.simple = false;
            report.rational = false;
            report.smooth = false;
            report.violations.push(Violation {
                vertex: None,
                reason: "polytope is not full dimensional".into(),
            });
            return Ok(report);
        }

        let facets = self.facet_indices(&vertices);
        report.redundant = (0..self.halfspaces.len())
            .filter(|i| !facets.contains(i))
            .collect();

        for vertex in &vertices {
            let active: Vec<&HalfSpace> = facets
                .iter()
                .map(|&i| &self.halfspaces[i])
                .filter(|h| h.slack(vertex).is_zero())
                .collect();
            if active.len() != n {
                report.simple = false;
                report.violations.push(Violation {
                    vertex: Some(vertex.clone()),
                    reason: format!("{} facets meet at this vertex, expected {n}", active.len()),
                });
                continue;
            }
            let edges = edge_directions(&active);
            let det = determinant(
                &edges
                    .iter()
                    .map(|e| e.iter().map(|&c| int(c)).collect())
                    .collect::<Vec<_>>(),
            );
            if det.abs() != Rational::one() {
                report.violations.push(Violation {
                    vertex: Some(vertex.clone()),
                    reason: format!("edge directions {edges:?} have determinant {det}"),
                });
            }
        }
        report.smooth = report.simple && report.rational && report.violations.is_empty();
        Ok(report)
    }

    /// Indices of half-spaces supporting an (n-1)-dimensional face; for
    /// duplicated constraints only the first copy counts.
    fn facet_indices(&self, vertices: &[Vec<Rational>]) -> Vec<usize> {
        let mut facets: Vec<usize> = Vec::new();
        for (i, h) in self.halfspaces.iter().enumerate() {
            if facets.iter().any(|&j| self.halfspaces[j] == *h) {
                continue;
            }
            let on_face: Vec<Vec<Rational>> = vertices
                .iter()
                .filter(|v| h.slack(v).is_zero())
                .cloned()
                .collect();
            if affine_dim(&on_face) == Some(self.dim - 1) {
                facets.push(i);
            }
        }
        facets
    }
}

/// Primitive integer edge generators at a simple vertex: the `i`-th edge
/// leaves facet `i` and stays on every other active facet.
fn edge_directions(active: &[&HalfSpace]) -> Vec<Vec<i64>> {
    let n = active.len();
    let normals: Vec<Vec<Rational>> = active
        .iter()
        .map(|h| h.normal.iter().map(|&a| int(a)).collect())
        .collect();
    (0..n)
        .map(|i| {
            let mut rhs = vec![Rational::zero(); n];
            rhs[i] = int(-1);
            let d = solve_square(&normals, &rhs).expect("simple vertex has independent normals");
            primitive(&d)
        })
        .collect()
}

fn primitive(v: &[Rational]) -> Vec<i64> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let scaled: Vec<BigInt> = v
        .iter()
        .map(|r| (r * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    scaled
        .iter()
        .map(|c| (c / &g).to_i64().expect("edge vector fits in i64"))
        .collect()
}

#[derive(Clone, Debug)]
struct System {
    dim: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
}

impl System {
    fn satisfies(&self, x: &[Rational]) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(row, b)| dot(row, x) <= *b)
    }

    fn vertices(&self) -> Vec<Vec<Rational>> {
        if self.dim == 0 {
            return if self.rhs.iter().all(|b| !b.is_negative()) {
                vec![Vec::new()]
            } else {
                Vec::new()
            };
        }
        let candidates: Vec<usize> = (0..self.rows.len())
            .filter(|&i| self.rows[i].iter().any(|a| !a.is_zero()))
            .collect();
        let mut out = Vec::new();
        for combo in candidates.iter().copied().combinations(self.dim) {
            let a: Vec<Vec<Rational>> = combo.iter().map(|&i| self.rows[i].clone()).collect();
            let b: Vec<Rational> = combo.iter().map(|&i| self.rhs[i].clone()).collect();
            if let Some(x) = solve_square(&a, &b) {
                if self.satisfies(&x) {
                    out.push(x);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn recession_direction(&self) -> Option<Vec<Rational>> {
        let n = self.dim;
        if rank(&self.rows) < n {
            return null_basis(&self.rows, n).into_iter().next();
        }
        // The recession cone is pointed; it is nonzero iff it has an extreme
        // ray, cut out by n-1 independent tight constraints.
        for combo in (0..self.rows.len()).combinations(n - 1) {
            let sub: Vec<Vec<Rational>> = combo.iter().map(|&i| self.rows[i].clone()).collect();
            let basis = null_basis(&sub, n);
            if basis.len() != 1 {
                continue;
            }
            let d = &basis[0];
            for candidate in [d.clone(), d.iter().map(|c| -c).collect::<Vec<_>>()] {
                if self.rows.iter().all(|row| !dot(row, &candidate).is_positive()) {
                    return Some(candidate);
                }
            }
        }
        None
    }

    fn slice(&self, prefix: &[i64]) -> System {
        let k = prefix.len();
        let rows = self.rows.iter().map(|row| row[k..].to_vec()).collect();
        let rhs = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| {
                row[..k]
                    .iter()
                    .zip(prefix)
                    .fold(b.clone(), |acc, (a, &x)| acc - a * int(x))
            })
            .collect();
        System {
            dim: self.dim - k,
            rows,
            rhs,
        }
    }
}

fn enumerate_slices(system: &System, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    let slice = system.slice(prefix);
    if slice.dim == 0 {
        if slice.rhs.iter().all(|b| !b.is_negative()) {
            out.push(prefix.clone());
        }
        return;
    }
    let vertices = slice.vertices();
    let Some((lo, hi)) = vertices.iter().map(|v| &v[0]).minmax().into_option() else {
        return;
    };
    let lo = lo.ceil().to_integer().to_i64().expect("coordinate fits in i64");
    let hi = hi.floor().to_integer().to_i64().expect("coordinate fits in i64");
    for x in lo..=hi {
        prefix.push(x);
        enumerate_slices(system, prefix, out);
        prefix.pop();
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Reduced row echelon form; returns the pivot columns.
fn rref(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x / &pivot;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..m[i].len() {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn rank(rows: &[Vec<Rational>]) -> usize {
    let Some(cols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut m = rows.to_vec();
    rref(&mut m, cols).len()
}

fn null_basis(rows: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, n);
    if pivots.len() < n {
        return None;
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

fn determinant(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det *= &pivot;
        let (top, rest) = m.split_at_mut(c + 1);
        let pivot_row = &top[c];
        for row in rest {
            let factor = &row[c] / &pivot;
            for (x, p) in row.iter_mut().zip(pivot_row).skip(c) {
                *x -= &factor * p;
            }
        }
    }
    det
}

fn inverse(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    if rref(&mut m, n).len() < n {
        return None;
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

fn affine_dim(points: &[Vec<Rational>]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<Vec<Rational>> = rest
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    Some(rank(&diffs))
}

// JSON: {"dim": n, "halfspaces": [{"normal": [..], "offset": "p/q"}]}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Text(String),
    Int(i64),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HalfSpaceJson {
    normal: Vec<i64>,
    offset: RationalRepr,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeJson {
    dim: usize,
    halfspaces: Vec<HalfSpaceJson>,
}

impl TryFrom<HalfSpaceJson> for HalfSpace {
    type Error = Error;

    fn try_from(value: HalfSpaceJson) -> Result<Self> {
        let offset = match value.offset {
            RationalRepr::Text(s) => parse_rational(&s)?,
            RationalRepr::Int(i) => int(i),
        };
        HalfSpace::new(value.normal, offset)
    }
}

impl From<&HalfSpace> for HalfSpaceJson {
    fn from(h: &HalfSpace) -> Self {
        Self {
            normal: h.normal.clone(),
            offset: RationalRepr::Text(format_rational(&h.offset)),
        }
    }
}

impl Serialize for HalfSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HalfSpaceJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HalfSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        HalfSpaceJson::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for RationalPolytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeJson {
            dim: self.dim,
            halfspaces: self.halfspaces.iter().map(HalfSpaceJson::from).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalPolytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolytopeJson::deserialize(d)?;
        let halfspaces = raw
            .halfspaces
            .into_iter()
            .map(HalfSpace::try_from)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        RationalPolytope::new(raw.dim, halfspaces).map_err(serde::de::Error::custom)
    }
}

mod opt_rational_vec {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_seq(v.iter().map(format_rational)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
        let raw: Option<Vec<String>> = Option::deserialize(d)?;
        raw.map(|v| {
            v.iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        })
        .transpose()
    }
}
