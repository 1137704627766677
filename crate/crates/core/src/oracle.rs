//! Brute-force references for the property and acceptance tests.
//!
//! Nothing here is clever. Lattice points come from testing every point of a
//! fixed box; leaves come from scanning each moment profile on a dense grid
//! and counting sign changes. The only shared code with the main path is
//! exact half-space containment and the profile function itself.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bmanifold::{BManifold, ManifoldVariant};
use crate::bsurface::{Anchor, BSurface, CriticalCircle, SurfaceKind, Tolerance};
use crate::error::{Error, Result};
use crate::polytope::{HalfSpace, Rational, RationalPolytope};
use crate::quantize::{VirtualTModule, Window};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    /// Half-width of the integer box scanned by [`brute_lattice`].
    pub lattice_bound: i64,
    /// Samples per unit of the logistic grid parameter.
    pub sample_density: u32,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            lattice_bound: 20,
            sample_density: 10_000,
            seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.lattice_bound < 1 {
            return Err(Error::InvalidOracleConfig("lattice_bound must be >= 1".into()));
        }
        if self.sample_density < 1000 {
            return Err(Error::InvalidOracleConfig("sample_density must be >= 1000".into()));
        }
        Ok(())
    }
}

/// Every integer point of `[-b, b]^n` inside `p`, in lexicographic order.
pub fn brute_lattice(p: &RationalPolytope, cfg: &OracleConfig) -> Result<Vec<Vec<i64>>> {
    cfg.validate()?;
    let b = cfg.lattice_bound;
    let limit = Rational::from_integer(BigInt::from(b));
    for v in p.vertices()? {
        if let Some(c) = v.iter().find(|c| c.abs() > limit) {
            return Err(Error::BoxTooSmall {
                bound: b,
                coordinate: c.to_string(),
            });
        }
    }
    let n = p.dim();
    let mut out = Vec::new();
    let mut point = vec![-b; n];
    loop {
        if p.halfspaces().iter().all(|h| h.contains_int(&point)) {
            out.push(point.clone());
        }
        // odometer increment, last coordinate fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if point[i] < b {
                point[i] += 1;
                break;
            }
            point[i] = -b;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LeafCount {
    pub component: usize,
    pub weight: i64,
    pub count: usize,
}

fn logistic(s: f64) -> f64 {
    1.0 / (1.0 + (-s).exp())
}

struct Grid {
    h: Vec<f64>,
    mu: Vec<f64>,
    /// Sample index of a pole, if this component has one.
    pole: Option<usize>,
}

/// Samples component `comp` on `h = lo + w·σ(s)` with `s` uniform, widening
/// the `s` range until the profile exceeds `ceiling` at every circle end.
fn sample_component(s: &BSurface, comp: usize, ceiling: f64, density: u32) -> Result<Grid> {
    let profile = &s.components()[comp];
    let position = |a: Anchor| match a {
        Anchor::Circle(i) => s.circles()[i].position,
        Anchor::SouthPole => -1.0,
        Anchor::NorthPole => 1.0,
    };
    let lo = position(profile.left);
    let mut hi = position(profile.right);
    if s.kind() == SurfaceKind::Torus && hi <= lo {
        hi += 1.0;
    }
    let w = hi - lo;
    let eval = |x: f64| s.moment_profile(comp, x).unwrap_or(f64::INFINITY);
    let lo_singular = matches!(profile.left, Anchor::Circle(_));
    let hi_singular = matches!(profile.right, Anchor::Circle(_));

    let mut reach = 8.0;
    loop {
        let low_ok = !lo_singular || eval(lo + w * logistic(-reach)) > ceiling;
        let high_ok = !hi_singular || eval(lo + w * logistic(reach)) > ceiling;
        if low_ok && high_ok {
            break;
        }
        reach *= 1.5;
        if reach > 40.0 {
            return Err(Error::GridTooCoarse {
                component: comp,
                level: ceiling as i64,
            });
        }
    }
    let count = (2.0 * reach * density as f64).ceil() as usize;
    let mut h = Vec::with_capacity(count + 2);
    let mut pole = None;
    if !lo_singular {
        pole = Some(0);
        h.push(lo);
    }
    for i in 0..=count {
        let x = lo + w * logistic(-reach + 2.0 * reach * i as f64 / count as f64);
        if x > lo && x < hi && h.last().is_none_or(|&prev| x > prev) {
            h.push(x);
        }
    }
    if !hi_singular {
        pole = Some(h.len());
        h.push(hi);
    }
    let mu = h.iter().map(|&x| eval(x)).collect();
    Ok(Grid { h, mu, pole })
}

fn golden_minimum(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    for _ in 0..200 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - ratio * (b - a);
        d = a + ratio * (b - a);
        if b - a <= f64::EPSILON * b.abs().max(1e-300) {
            break;
        }
    }
    f(0.5 * (a + b))
}

fn bisect_root(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa_positive = f(a) > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if (f(mid) > 0.0) == fa_positive {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

fn count_roots(
    s: &BSurface,
    comp: usize,
    grid: &Grid,
    target: f64,
    level: i64,
    tol: Tolerance,
) -> Result<usize> {
    let f = |x: f64| s.moment_profile(comp, x).unwrap_or(f64::INFINITY) - target;
    let g: Vec<f64> = grid.mu.iter().map(|v| v - target).collect();
    let n = g.len();

    // Touching roots: the pole, and local minima that sit on the level.
    let mut touching: Vec<usize> = Vec::new();
    if let Some(p) = grid.pole {
        if g[p].abs() <= tol.integer {
            touching.push(p);
        }
    }
    for i in 1..n.saturating_sub(1) {
        if !(g[i] <= g[i - 1] && g[i] <= g[i + 1]) {
            continue;
        }
        let bottom = golden_minimum(f, grid.h[i - 1], grid.h[i + 1]);
        if bottom.abs() <= tol.integer {
            touching.push(i);
        } else if bottom < -tol.integer && g[i] > 0.0 {
            // both roots fell between neighbouring samples
            return Err(Error::GridTooCoarse {
                component: comp,
                level,
            });
        }
    }

    let mut roots = touching.len();
    let mut last_root = f64::NEG_INFINITY;
    for i in 0..n.saturating_sub(1) {
        let crosses = (g[i] < 0.0) != (g[i + 1] < 0.0);
        if !crosses || touching.iter().any(|&t| i + 2 >= t && i <= t + 1) {
            continue;
        }
        let root = bisect_root(f, grid.h[i], grid.h[i + 1]);
        if root <= last_root {
            return Err(Error::GridTooCoarse {
                component: comp,
                level,
            });
        }
        last_root = root;
        roots += 1;
    }
    Ok(roots)
}

/// Root counts per (component, weight) for the shifted moment map, dense
/// sampling plus bisection. Levels without roots are omitted.
pub fn brute_leaves(
    s: &BSurface,
    window: u32,
    offset_shift: f64,
    cfg: &OracleConfig,
    tol: Tolerance,
) -> Result<Vec<LeafCount>> {
    cfg.validate()?;
    let n = window as i64;
    let ceiling = n as f64 - offset_shift + 1.0;
    let mut out = Vec::new();
    for comp in 0..s.components().len() {
        let grid = sample_component(s, comp, ceiling, cfg.sample_density)?;
        for m in -n..=n {
            let count = count_roots(s, comp, &grid, m as f64 - offset_shift, m, tol)?;
            if count > 0 {
                out.push(LeafCount {
                    component: comp,
                    weight: m,
                    count,
                });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Signed quantization assembled only from the brute-force references.
pub fn oracle_module(
    m: &BManifold,
    window: u32,
    cfg: &OracleConfig,
    tol: Tolerance,
) -> Result<VirtualTModule> {
    let lattice = match m.polytope_factor() {
        Some(p) => brute_lattice(p, cfg)?,
        None => vec![Vec::new()],
    };
    let Some(surface) = m.surface() else {
        let mut module = VirtualTModule::new(Window::Unbounded);
        for w in lattice {
            module.add(w, 1);
        }
        module.set_complete(true);
        return Ok(module);
    };
    let mut levels: BTreeMap<i64, i64> = BTreeMap::new();
    for c in brute_leaves(surface, window, m.modular_shift(), cfg, tol)? {
        let sign = surface.components()[c.component].sign as i64;
        *levels.entry(c.weight).or_insert(0) += sign * c.count as i64;
    }
    let mut module = VirtualTModule::new(Window::Levels(window));
    let bases = match m.variant() {
        ManifoldVariant::Surface(_) => vec![Vec::new()],
        _ => lattice,
    };
    for base in &bases {
        for (&level, &count) in &levels {
            let mut w = base.clone();
            w.push(level);
            module.add(w, count);
        }
    }
    Ok(module)
}

/// A random bounded, nonempty polytope cut out by at most 8 half-spaces with
/// small integer normals and vertices inside `[-bound, bound]^dim`.
pub fn random_polytope<R: Rng>(rng: &mut R, dim: usize, bound: i64) -> RationalPolytope {
    loop {
        let count = rng.gen_range(dim + 1..=8);
        let mut halfspaces = Vec::with_capacity(count);
        while halfspaces.len() < count {
            let normal: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
            if normal.iter().all(|&c| c == 0) {
                continue;
            }
            let den = rng.gen_range(1..=3);
            let num = rng.gen_range(-2 * den..=bound * den);
            let offset = Rational::new(BigInt::from(num), BigInt::from(den));
            halfspaces.push(HalfSpace::new(normal, offset).expect("nonzero normal"));
        }
        let p = RationalPolytope::new(dim, halfspaces).expect("consistent dimension");
        let Ok(vertices) = p.vertices() else {
            continue;
        };
        if vertices.is_empty() {
            continue;
        }
        let fits = vertices.iter().flatten().all(|c| {
            c.abs()
                .to_integer()
                .to_i64()
                .is_some_and(|v| v < bound)
        });
        if fits {
            return p;
        }
    }
}

/// Product of random elementary integer matrices and a sign flip, so the
/// determinant is ±1 and entries stay small.
pub fn random_unimodular<R: Rng>(rng: &mut R, dim: usize) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..dim)
        .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
        .collect();
    if dim < 2 {
        if rng.gen_bool(0.5) {
            u[0][0] = -1;
        }
        return u;
    }
    for _ in 0..rng.gen_range(1..=4) {
        let i = rng.gen_range(0..dim);
        let j = (i + rng.gen_range(1..dim)) % dim;
        let k = rng.gen_range(-2..=2);
        // row_i += k * row_j
        let row = u[j].clone();
        for (a, b) in u[i].iter_mut().zip(row) {
            *a += k * b;
        }
    }
    if rng.gen_bool(0.5) {
        let i = rng.gen_range(0..dim);
        u[i].iter_mut().for_each(|c| *c = -*c);
    }
    u
}

/// A Delzant polytope: a scaled simplex or a box, moved by a random
/// unimodular map and an integer translation.
pub fn random_delzant<R: Rng>(rng: &mut R, dim: usize) -> RationalPolytope {
    let base = if rng.gen_bool(0.5) {
        RationalPolytope::scaled_simplex(dim, rng.gen_range(1..=4))
    } else {
        let sides: Vec<(i64, i64)> = (0..dim).map(|_| (0, rng.gen_range(1..=3))).collect();
        RationalPolytope::cuboid(&sides)
    };
    let u = random_unimodular(rng, dim);
    let t: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
    base.transform_unimodular(&u, &t)
        .expect("generated matrix is unimodular")
}

/// A random b-sphere (one to four circles) or b-torus (two or four circles)
/// with periods in `[0.5, 2]` and offsets in `[-2, 2]`.
pub fn random_surface<R: Rng>(rng: &mut R) -> BSurface {
    let torus = rng.gen_bool(0.3);
    let (k, lo, hi) = if torus {
        (2 * rng.gen_range(1..=2), 0.0, 1.0)
    } else {
        (rng.gen_range(1..=4), -0.9, 0.9)
    };
    let mut positions: Vec<f64>;
    loop {
        positions = (0..k).map(|_| rng.gen_range(lo..hi)).collect();
        positions.sort_by(f64::total_cmp);
        let gaps_ok = positions.windows(2).all(|w| w[1] - w[0] > 0.05);
        let wrap_ok = !torus || positions[0] + 1.0 - positions[k - 1] > 0.05;
        if gaps_ok && wrap_ok {
            break;
        }
    }
    let circles = positions
        .into_iter()
        .map(|position| CriticalCircle {
            position,
            period: rng.gen_range(0.5..2.0),
        })
        .collect();
    let components = if torus { k } else { k + 1 };
    let offsets = (0..components).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let kind = if torus { SurfaceKind::Torus } else { SurfaceKind::Sphere };
    let orientation = if rng.gen_bool(0.5) { 1 } else { -1 };
    BSurface::new(kind, circles, offsets, orientation).expect("generated surface is valid")
}
