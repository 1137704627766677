//! b-symplectic toric surfaces: a sphere or torus whose critical set `Z` is
//! a union of latitude circles.
//!
//! Each connected component of `M \ Z` carries a model moment profile that
//! diverges like `-c log(distance)` at every adjacent critical circle (`c` is
//! the circle's modular period) plus an additive constant. Components next to
//! a pole ("pole ends") are monotone, interior components ("wells") attain a
//! single minimum. Signs alternate across each critical circle.
//!
//! Sphere coordinates: `h ∈ [-1, 1]`, south pole at `-1`, north pole at `1`.
//! Torus coordinates: `h ∈ [0, 1)` taken cyclically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer-detection tolerance for moment values. Leaf roots are refined to
/// full double precision independently of this value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub integer: f64,
}

impl Tolerance {
    pub const DEFAULT_INTEGER: f64 = 1e-9;

    pub fn new(integer: f64) -> Self {
        Self { integer }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            integer: Self::DEFAULT_INTEGER,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceKind {
    Sphere,
    Torus,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriticalCircle {
    pub position: f64,
    pub period: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    PoleEnd,
    Well,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    Circle(usize),
    SouthPole,
    NorthPole,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentProfile {
    pub kind: ProfileKind,
    pub left: Anchor,
    pub right: Anchor,
    pub offset: f64,
    pub sign: i8,
}

/// Closed moment image `[start, +inf)` of one component.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfLine {
    pub start: f64,
}

impl HalfLine {
    pub fn contains(&self, mu: f64) -> bool {
        mu >= self.start
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BSLeaf {
    pub weight: i64,
    /// Position of the leaf; `±1` for the poles. For leaves very close to a
    /// circle away from `h = 0` this is rounded, `distance` is not.
    pub h_value: f64,
    pub component: usize,
    pub sign: i8,
    /// 1 for the lower-h root of a component, 2 for the upper one.
    pub multiplicity_index: u8,
    /// Critical circle the leaf's branch runs into; `None` for the leaf at
    /// the bottom of a well.
    pub near_circle: Option<usize>,
    /// Distance from `near_circle` (from the well bottom's left circle when
    /// `near_circle` is `None`).
    pub distance: f64,
    /// Moment value (including the offset shift) at the refined root.
    pub mu: f64,
}

/// Geometry of one component in unwrapped coordinates.
#[derive(Clone, Copy, Debug)]
struct Span {
    lo: f64,
    hi: f64,
    lo_circle: Option<(usize, f64)>,
    hi_circle: Option<(usize, f64)>,
    offset: f64,
}

impl Span {
    fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Profile value at distance `d` from `lo`.
    fn at_lo(&self, d: f64) -> f64 {
        self.eval(d, self.width() - d)
    }

    /// Profile value at distance `e` from `hi`.
    fn at_hi(&self, e: f64) -> f64 {
        self.eval(self.width() - e, e)
    }

    fn eval(&self, d_lo: f64, d_hi: f64) -> f64 {
        let w = self.width();
        let mut mu = self.offset;
        match (self.lo_circle, self.hi_circle) {
            (Some((_, ca)), Some((_, cb))) => {
                mu += -ca * d_lo.ln() - cb * d_hi.ln();
            }
            (Some((_, c)), None) => {
                mu += -c * d_lo.ln() + c * w.ln();
            }
            (None, Some((_, c))) => {
                mu += -c * d_hi.ln() + c * w.ln();
            }
            (None, None) => unreachable!("every component touches a critical circle"),
        }
        mu
    }

    fn is_well(&self) -> bool {
        self.lo_circle.is_some() && self.hi_circle.is_some()
    }

    /// Distances from `lo` and `hi` of the bottom of the profile.
    fn bottom(&self) -> (f64, f64) {
        let w = self.width();
        match (self.lo_circle, self.hi_circle) {
            (Some((_, ca)), Some((_, cb))) => (ca * w / (ca + cb), cb * w / (ca + cb)),
            (Some(_), None) => (w, 0.0),
            (None, Some(_)) => (0.0, w),
            (None, None) => unreachable!(),
        }
    }

    fn minimum(&self) -> f64 {
        let (d, e) = self.bottom();
        if self.is_well() {
            self.eval(d, e)
        } else {
            self.offset
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BSurface {
    kind: SurfaceKind,
    circles: Vec<CriticalCircle>,
    components: Vec<ComponentProfile>,
    orientation: i8,
}

impl BSurface {
    /// Component `i` of a sphere runs from south to north; the northern
    /// pole end has sign `orientation`. Component `i` of a torus starts at
    /// circle `i` and has sign `orientation * (-1)^i`.
    pub fn new(
        kind: SurfaceKind,
        circles: Vec<CriticalCircle>,
        offsets: Vec<f64>,
        orientation: i8,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidSurface(msg));
        if orientation != 1 && orientation != -1 {
            return invalid(format!("orientation must be ±1, got {orientation}"));
        }
        let k = circles.len();
        for (i, c) in circles.iter().enumerate() {
            if !(c.period.is_finite() && c.period > 0.0) {
                return invalid(format!("circle {i} has non-positive period {}", c.period));
            }
            if !c.position.is_finite() {
                return invalid(format!("circle {i} has non-finite position"));
            }
        }
        if circles.windows(2).any(|w| w[0].position >= w[1].position) {
            return invalid("circle positions must be strictly increasing".into());
        }
        if offsets.iter().any(|o| !o.is_finite()) {
            return invalid("offsets must be finite".into());
        }
        let components = match kind {
            SurfaceKind::Sphere => {
                if k == 0 {
                    return invalid("a b-sphere needs at least one critical circle".into());
                }
                if circles.iter().any(|c| c.position <= -1.0 || c.position >= 1.0) {
                    return invalid("sphere circle positions must lie in (-1, 1)".into());
                }
                if offsets.len() != k + 1 {
                    return invalid(format!("expected {} offsets, got {}", k + 1, offsets.len()));
                }
                (0..=k)
                    .map(|i| {
                        let left = if i == 0 { Anchor::SouthPole } else { Anchor::Circle(i - 1) };
                        let right = if i == k { Anchor::NorthPole } else { Anchor::Circle(i) };
                        let kind = if i == 0 || i == k {
                            ProfileKind::PoleEnd
                        } else {
                            ProfileKind::Well
                        };
                        let sign = if (k - i).is_multiple_of(2) { orientation } else { -orientation };
                        ComponentProfile {
                            kind,
                            left,
                            right,
                            offset: offsets[i],
                            sign,
                        }
                    })
                    .collect()
            }
            SurfaceKind::Torus => {
                if k < 2 || !k.is_multiple_of(2) {
                    return invalid(format!(
                        "a b-torus needs an even number (>= 2) of critical circles, got {k}"
                    ));
                }
                if circles.iter().any(|c| c.position < 0.0 || c.position >= 1.0) {
                    return invalid("torus circle positions must lie in [0, 1)".into());
                }
                if offsets.len() != k {
                    return invalid(format!("expected {k} offsets, got {}", offsets.len()));
                }
                (0..k)
                    .map(|i| ComponentProfile {
                        kind: ProfileKind::Well,
                        left: Anchor::Circle(i),
                        right: Anchor::Circle((i + 1) % k),
                        offset: offsets[i],
                        sign: if i % 2 == 0 { orientation } else { -orientation },
                    })
                    .collect()
            }
        };
        Ok(Self {
            kind,
            circles,
            components,
            orientation,
        })
    }

    /// One circle at the equator with period 1 and zero offsets: `μ = -log|h|`.
    pub fn canonical_sphere() -> Self {
        Self::new(
            SurfaceKind::Sphere,
            vec![CriticalCircle {
                position: 0.0,
                period: 1.0,
            }],
            vec![0.0, 0.0],
            1,
        )
        .expect("canonical sphere is valid")
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn circles(&self) -> &[CriticalCircle] {
        &self.circles
    }

    pub fn components(&self) -> &[ComponentProfile] {
        &self.components
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn offsets(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.offset).collect()
    }

    /// Same surface with the opposite global orientation.
    pub fn flipped(&self) -> Self {
        Self::new(
            self.kind,
            self.circles.clone(),
            self.offsets(),
            -self.orientation,
        )
        .expect("flipping keeps a valid surface valid")
    }

    /// Same surface with every modular period multiplied by `factor`.
    pub fn with_scaled_periods(&self, factor: f64) -> Result<Self> {
        let circles = self
            .circles
            .iter()
            .map(|c| CriticalCircle {
                position: c.position,
                period: c.period * factor,
            })
            .collect();
        Self::new(self.kind, circles, self.offsets(), self.orientation)
    }

    fn component(&self, comp: usize) -> Result<&ComponentProfile> {
        self.components.get(comp).ok_or(Error::NoSuchComponent(comp))
    }

    fn span(&self, comp: usize) -> Result<Span> {
        let profile = self.component(comp)?;
        let circle = |i: usize| (i, self.circles[i].period);
        let (lo, lo_circle) = match profile.left {
            Anchor::SouthPole => (-1.0, None),
            Anchor::Circle(i) => (self.circles[i].position, Some(circle(i))),
            Anchor::NorthPole => unreachable!(),
        };
        let (mut hi, hi_circle) = match profile.right {
            Anchor::NorthPole => (1.0, None),
            Anchor::Circle(i) => (self.circles[i].position, Some(circle(i))),
            Anchor::SouthPole => unreachable!(),
        };
        if self.kind == SurfaceKind::Torus && hi <= lo {
            hi += 1.0;
        }
        Ok(Span {
            lo,
            hi,
            lo_circle,
            hi_circle,
            offset: profile.offset,
        })
    }

    fn wrap(&self, h: f64) -> f64 {
        match self.kind {
            SurfaceKind::Sphere => h,
            SurfaceKind::Torus => h.rem_euclid(1.0),
        }
    }

    /// Model moment map of component `comp` at `h`. Pole ends accept the
    /// pole itself, where the value is the component offset.
    pub fn moment_profile(&self, comp: usize, h: f64) -> Result<f64> {
        let span = self.span(comp)?;
        let outside = Err(Error::OutsideComponent { component: comp, h });
        let mut x = h;
        if self.kind == SurfaceKind::Torus {
            x = h.rem_euclid(1.0);
            if x <= span.lo {
                x += 1.0;
            }
        }
        let lo_ok = x > span.lo || (span.lo_circle.is_none() && x == span.lo);
        let hi_ok = x < span.hi || (span.hi_circle.is_none() && x == span.hi);
        if !(lo_ok && hi_ok) {
            return outside;
        }
        match (span.lo_circle, span.hi_circle) {
            (None, Some(_)) => Ok(span.at_hi(span.hi - x)),
            _ => Ok(span.at_lo(x - span.lo)),
        }
    }

    /// `(h*, μ_min)`; for pole ends the minimum sits at the pole.
    pub fn profile_minimum(&self, comp: usize) -> Result<(f64, f64)> {
        let span = self.span(comp)?;
        let (d, _) = span.bottom();
        Ok((self.wrap(span.lo + d), span.minimum()))
    }

    pub fn component_image(&self, comp: usize) -> Result<HalfLine> {
        Ok(HalfLine {
            start: self.span(comp)?.minimum(),
        })
    }

    /// Largest and smallest `μ_min` over all components.
    pub fn minimum_range(&self) -> (f64, f64) {
        (0..self.components.len())
            .map(|i| self.span(i).expect("valid index").minimum())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), m| {
                (lo.min(m), hi.max(m))
            })
    }

    /// Bohr-Sommerfeld leaves with weight `|m| <= window` for the shifted
    /// moment map `μ + offset_shift`, sorted by (weight, component, root).
    pub fn bs_leaves(&self, window: u32, offset_shift: f64, tol: Tolerance) -> Result<Vec<BSLeaf>> {
        let mut leaves = Vec::new();
        let n = window as i64;
        for comp in 0..self.components.len() {
            let span = self.span(comp)?;
            let sign = self.components[comp].sign;
            let mu_min = span.minimum() + offset_shift;
            for m in -n..=n {
                let target = m as f64 - offset_shift;
                let diff = m as f64 - mu_min;
                if diff < -tol.integer {
                    continue;
                }
                let mut push = |h: f64, index: u8, near: Option<usize>, distance: f64, mu: f64| {
                    leaves.push(BSLeaf {
                        weight: m,
                        h_value: self.wrap(h),
                        component: comp,
                        sign,
                        multiplicity_index: index,
                        near_circle: near,
                        distance,
                        mu: mu + offset_shift,
                    })
                };
                let (d_star, e_star) = span.bottom();
                let degenerate = diff.abs() <= tol.integer;
                match (span.lo_circle, span.hi_circle) {
                    (Some((a, _)), Some((b, _))) => {
                        if degenerate {
                            push(span.lo + d_star, 1, None, d_star, span.eval(d_star, e_star));
                            continue;
                        }
                        let d = solve_branch(|d| span.at_lo(d), d_star, target, comp, m, tol)?;
                        push(span.lo + d, 1, Some(a), d, span.at_lo(d));
                        let e = solve_branch(|e| span.at_hi(e), e_star, target, comp, m, tol)?;
                        push(span.hi - e, 2, Some(b), e, span.at_hi(e));
                    }
                    (Some((a, _)), None) => {
                        let w = span.width();
                        if degenerate {
                            push(span.hi, 1, Some(a), w, span.offset);
                            continue;
                        }
                        let d = solve_branch(|d| span.at_lo(d), w, target, comp, m, tol)?;
                        push(span.lo + d, 1, Some(a), d, span.at_lo(d));
                    }
                    (None, Some((b, _))) => {
                        let w = span.width();
                        if degenerate {
                            push(span.lo, 1, Some(b), w, span.offset);
                            continue;
                        }
                        let e = solve_branch(|e| span.at_hi(e), w, target, comp, m, tol)?;
                        push(span.hi - e, 1, Some(b), e, span.at_hi(e));
                    }
                    (None, None) => unreachable!(),
                }
            }
        }
        leaves.sort_by(|x, y| {
            (x.weight, x.component, x.multiplicity_index)
                .cmp(&(y.weight, y.component, y.multiplicity_index))
        });
        Ok(leaves)
    }
}

/// Solves `f(d) = target` for `d ∈ (0, d_max)` where `f` decreases from `+inf`
/// at `0` to `f(d_max) < target`. Bisection runs on `ln d` until the bracket
/// stops shrinking in double precision.
fn solve_branch(
    f: impl Fn(f64) -> f64,
    d_max: f64,
    target: f64,
    component: usize,
    level: i64,
    tol: Tolerance,
) -> Result<f64> {
    let g = |t: f64| f(t.exp()) - target;
    let mut hi = d_max.ln();
    let mut lo = hi - 1.0;
    let mut step = 1.0;
    while g(lo) <= 0.0 {
        hi = lo;
        step *= 2.0;
        lo -= step;
        if lo < -700.0 {
            return Err(Error::NonconvergedBisection {
                component,
                level,
                residual: g(lo),
            });
        }
    }
    // g(lo) > 0 >= g(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = if g(lo).abs() < g(hi).abs() { lo } else { hi };
    let residual = g(t);
    if residual.abs() > tol.integer {
        return Err(Error::NonconvergedBisection {
            component,
            level,
            residual,
        });
    }
    Ok(t.exp())
}

/// JSON form: `{"kind", "circles", "offsets", "orientation"}`; the component
/// list is derived.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub kind: SurfaceKind,
    pub circles: Vec<CriticalCircle>,
    pub offsets: Vec<f64>,
    #[serde(default = "default_orientation")]
    pub orientation: i8,
}

fn default_orientation() -> i8 {
    1
}

impl TryFrom<SurfaceSpec> for BSurface {
    type Error = Error;

    fn try_from(spec: SurfaceSpec) -> Result<Self> {
        BSurface::new(spec.kind, spec.circles, spec.offsets, spec.orientation)
    }
}

impl From<&BSurface> for SurfaceSpec {
    fn from(s: &BSurface) -> Self {
        Self {
            kind: s.kind,
            circles: s.circles.clone(),
            offsets: s.offsets(),
            orientation: s.orientation,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn well(ca: f64, cb: f64, offset: f64) -> BSurface {
        // component 1 is the well on (0, 0.5)
        BSurface::new(
            SurfaceKind::Sphere,
            vec![
                CriticalCircle { position: 0.0, period: ca },
                CriticalCircle { position: 0.5, period: cb },
            ],
            vec![0.0, offset, 0.0],
            1,
        )
        .unwrap()
    }

    /// Zero-offset well of width 1 on (-0.5, 0.5).
    fn unit_well(ca: f64, cb: f64) -> BSurface {
        BSurface::new(
            SurfaceKind::Sphere,
            vec![
                CriticalCircle { position: -0.5, period: ca },
                CriticalCircle { position: 0.5, period: cb },
            ],
            vec![0.0, 0.0, 0.0],
            1,
        )
        .unwrap()
    }

    #[test]
    fn canonical_sphere_profile() {
        let s = BSurface::canonical_sphere();
        let mu = s.moment_profile(1, (-2.0f64).exp()).unwrap();
        assert!((mu - 2.0).abs() < 1e-12);
        let mu = s.moment_profile(0, -(-2.0f64).exp()).unwrap();
        assert!((mu - 2.0).abs() < 1e-12);
        assert_eq!(s.moment_profile(1, 1.0).unwrap(), 0.0);
        assert_eq!(s.moment_profile(0, -1.0).unwrap(), 0.0);
        assert!(matches!(
            s.moment_profile(1, 0.0),
            Err(Error::OutsideComponent { component: 1, .. })
        ));
        assert!(s.moment_profile(1, -0.5).is_err());
        assert!(s.moment_profile(5, 0.5).is_err());
    }

    #[test]
    fn well_profile_value_and_minimum() {
        let s = unit_well(1.0, 1.0);
        let mu = s.moment_profile(1, 0.0).unwrap();
        assert!((mu - 2.0 * 2f64.ln()).abs() < 1e-12);
        let (h, mu_min) = s.profile_minimum(1).unwrap();
        assert!(h.abs() < 1e-15);
        assert!((mu_min - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!((s.component_image(1).unwrap().start - 2.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn weighted_well_minimum_matches_dense_sampling() {
        // periods 1 and 3 on (-0.5, 0.5): bottom at distance 1/4 from the left circle
        let s = unit_well(1.0, 3.0);
        let (h, mu_min) = s.profile_minimum(1).unwrap();
        assert!((h - (-0.25)).abs() < 1e-15);
        let samples = 200_000;
        let (best_h, best_mu) = (1..samples)
            .map(|i| -0.5 + i as f64 / samples as f64)
            .map(|x| (x, s.moment_profile(1, x).unwrap()))
            .fold((0.0, f64::INFINITY), |acc, p| if p.1 < acc.1 { p } else { acc });
        assert!((best_h - h).abs() < 1e-4);
        assert!(mu_min <= best_mu && best_mu - mu_min < 1e-8);
    }

    #[test]
    fn pole_end_minimum_is_offset() {
        let s = BSurface::new(
            SurfaceKind::Sphere,
            vec![CriticalCircle { position: 0.3, period: 2.0 }],
            vec![-0.5, 0.7],
            1,
        )
        .unwrap();
        assert_eq!(s.profile_minimum(1).unwrap(), (1.0, 0.7));
        assert_eq!(s.profile_minimum(0).unwrap(), (-1.0, -0.5));
        assert_eq!(s.component_image(0).unwrap(), HalfLine { start: -0.5 });
        assert_eq!(s.moment_profile(1, 1.0).unwrap(), 0.7);
    }

    #[test]
    fn canonical_sphere_leaves() {
        let s = BSurface::canonical_sphere();
        let leaves = s.bs_leaves(3, 0.0, Tolerance::default()).unwrap();
        assert_eq!(leaves.len(), 8);
        for leaf in &leaves {
            let expected = (-(leaf.weight as f64)).exp();
            let expected = if leaf.component == 1 { expected } else { -expected };
            assert!((leaf.h_value - expected).abs() < 1e-12, "{leaf:?}");
            assert_eq!(leaf.sign, if leaf.component == 1 { 1 } else { -1 });
        }
        let weights: Vec<i64> = leaves.iter().map(|l| l.weight).collect();
        assert_eq!(weights, vec![0, 0, 1, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn well_leaves_are_symmetric() {
        let s = unit_well(1.0, 1.0);
        let leaves: Vec<BSLeaf> = s
            .bs_leaves(2, 0.0, Tolerance::default())
            .unwrap()
            .into_iter()
            .filter(|l| l.component == 1)
            .collect();
        assert_eq!(leaves.len(), 2);
        assert!(leaves.iter().all(|l| l.weight == 2));
        assert!((leaves[0].h_value + leaves[1].h_value).abs() < 1e-12);
        assert_eq!(leaves[0].near_circle, Some(0));
        assert_eq!(leaves[1].near_circle, Some(1));
    }

    #[test]
    fn integral_minimum_gives_a_single_leaf() {
        let base = unit_well(1.0, 1.0);
        let mu_min = base.profile_minimum(1).unwrap().1;
        let s = BSurface::new(
            SurfaceKind::Sphere,
            base.circles().to_vec(),
            vec![0.0, 3.0 - mu_min, 0.0],
            1,
        )
        .unwrap();
        let leaves: Vec<BSLeaf> = s
            .bs_leaves(4, 0.0, Tolerance::default())
            .unwrap()
            .into_iter()
            .filter(|l| l.component == 1)
            .collect();
        let per_level: Vec<(i64, usize)> = (3..=4)
            .map(|m| (m, leaves.iter().filter(|l| l.weight == m).count()))
            .collect();
        assert_eq!(per_level, vec![(3, 1), (4, 2)]);
        assert_eq!(leaves[0].near_circle, None);
    }

    #[test]
    fn torus_components_wrap() {
        let s = BSurface::new(
            SurfaceKind::Torus,
            vec![
                CriticalCircle { position: 0.25, period: 1.0 },
                CriticalCircle { position: 0.75, period: 1.0 },
            ],
            vec![0.0, 0.0],
            1,
        )
        .unwrap();
        assert_eq!(s.components()[1].left, Anchor::Circle(1));
        assert_eq!(s.components()[1].right, Anchor::Circle(0));
        let (h, mu_min) = s.profile_minimum(1).unwrap();
        assert!((h - 0.0).abs() < 1e-15 || (h - 1.0).abs() < 1e-15);
        assert!((mu_min - 2.0 * 4f64.ln()).abs() < 1e-12);
        let a = s.moment_profile(1, 0.1).unwrap();
        let b = s.moment_profile(1, 0.9).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!(s.moment_profile(1, 0.5).is_err());
        let leaves = s.bs_leaves(3, 0.0, Tolerance::default()).unwrap();
        assert!(leaves.iter().all(|l| (0.0..1.0).contains(&l.h_value)));
        assert_eq!(leaves.len(), 4);
    }

    #[test]
    fn invalid_surfaces() {
        let c = |p| CriticalCircle { position: p, period: 1.0 };
        let err = |r: Result<BSurface>| assert!(matches!(r, Err(Error::InvalidSurface(_))));
        err(BSurface::new(SurfaceKind::Sphere, vec![], vec![0.0], 1));
        err(BSurface::new(SurfaceKind::Sphere, vec![c(0.0)], vec![0.0], 1));
        err(BSurface::new(SurfaceKind::Sphere, vec![c(1.0)], vec![0.0, 0.0], 1));
        err(BSurface::new(SurfaceKind::Sphere, vec![c(0.2), c(0.1)], vec![0.0; 3], 1));
        err(BSurface::new(SurfaceKind::Torus, vec![c(0.2)], vec![0.0], 1));
        err(BSurface::new(SurfaceKind::Torus, vec![c(0.1), c(0.2), c(0.3)], vec![0.0; 3], 1));
        err(BSurface::new(SurfaceKind::Sphere, vec![c(0.0)], vec![0.0, 0.0], 0));
        err(BSurface::new(
            SurfaceKind::Sphere,
            vec![CriticalCircle { position: 0.0, period: -1.0 }],
            vec![0.0, 0.0],
            1,
        ));
    }

    #[test]
    fn signs_alternate_and_flip() {
        let s = well(1.0, 1.0, 0.0);
        let signs: Vec<i8> = s.components().iter().map(|c| c.sign).collect();
        assert_eq!(signs, vec![1, -1, 1]);
        let flipped: Vec<i8> = s.flipped().components().iter().map(|c| c.sign).collect();
        assert_eq!(flipped, vec![-1, 1, -1]);
    }

    #[test]
    fn surface_json() {
        let text = r#"{"kind":"sphere","circles":[{"position":0.0,"period":1.0}],"offsets":[0.0,0.0],"orientation":1}"#;
        let spec: SurfaceSpec = serde_json::from_str(text).unwrap();
        let s = BSurface::try_from(spec).unwrap();
        assert_eq!(s, BSurface::canonical_sphere());
        assert!(serde_json::from_str::<SurfaceSpec>(r#"{"kind":"cube","circles":[],"offsets":[]}"#).is_err());
    }
}
