//! Virtual T-modules and the two quantization routes.
//!
//! The Bohr-Sommerfeld route finds leaves by root-finding on the moment
//! profiles and checks each one by parallel transport. The formal route never
//! solves for a leaf: it counts integer levels inside each component's moment
//! image and multiplies by the component's sign. `compare` runs both.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::bmanifold::{BManifold, ManifoldVariant};
use crate::bsurface::{Anchor, BSurface, ProfileKind, Tolerance};
use crate::error::{Error, Result};
use crate::oracle::{self, OracleConfig};

/// Deviation `|holonomy - 1|` below which a fiber counts as Bohr-Sommerfeld.
pub const HOLONOMY_THRESHOLD: f64 = 1e-6;
pub const DEFAULT_HOLONOMY_STEPS: usize = 1024;
/// Extra windows past the first one that must agree before a signed
/// dimension is accepted as stable.
const STABILIZATION_WINDOWS: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Window {
    Levels(u32),
    Unbounded,
}

impl Serialize for Window {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Window::Levels(n) => s.serialize_u32(*n),
            Window::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

/// Weight -> multiplicity, zero entries never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualTModule {
    entries: BTreeMap<Vec<i64>, i64>,
    window: Window,
    complete: bool,
}

impl VirtualTModule {
    pub fn new(window: Window) -> Self {
        Self {
            entries: BTreeMap::new(),
            window,
            complete: false,
        }
    }

    pub fn add(&mut self, weight: Vec<i64>, multiplicity: i64) {
        if multiplicity == 0 {
            return;
        }
        let entry = self.entries.entry(weight.clone()).or_insert(0);
        *entry += multiplicity;
        if *entry == 0 {
            self.entries.remove(&weight);
        }
    }

    pub fn get(&self, weight: &[i64]) -> i64 {
        self.entries.get(weight).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<Vec<i64>, i64> {
        &self.entries
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn set_complete(&mut self, complete: bool) {
        self.complete = complete;
    }

    /// Signed dimension: the sum of all multiplicities.
    pub fn dimension(&self) -> i64 {
        self.entries.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn negated(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|(w, &m)| (w.clone(), -m)).collect(),
            ..self.clone()
        }
    }

    /// Weights where the two modules differ, with both multiplicities.
    pub fn diff(&self, other: &Self) -> Vec<(Vec<i64>, i64, i64)> {
        let weights: BTreeSet<&Vec<i64>> = self.entries.keys().chain(other.entries.keys()).collect();
        weights
            .into_iter()
            .filter_map(|w| {
                let (a, b) = (self.get(w), other.get(w));
                (a != b).then(|| (w.clone(), a, b))
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    Finite(i64),
    Diverged,
}

impl Serialize for Dimension {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Dimension::Finite(d) => s.serialize_i64(*d),
            Dimension::Diverged => s.serialize_str("diverged"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HolonomyResult {
    pub mu: f64,
    #[serde(serialize_with = "complex_pair")]
    pub holonomy: Complex64,
    pub is_bs: bool,
    pub deviation: f64,
}

fn complex_pair<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// Transports `s(0) = 1` along `s'(φ) = i μ s(φ)` over `[0, 2π]` with
/// `steps` classical RK4 steps.
pub fn transport(mu: f64, steps: usize) -> Complex64 {
    let h = 2.0 * PI / steps as f64;
    let rhs = |s: Complex64| Complex64::new(0.0, mu) * s;
    let mut s = Complex64::new(1.0, 0.0);
    for _ in 0..steps {
        let k1 = rhs(s);
        let k2 = rhs(s + k1 * (h / 2.0));
        let k3 = rhs(s + k2 * (h / 2.0));
        let k4 = rhs(s + k3 * h);
        s += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    s
}

/// Holonomy of the flat section around one orbit at moment value `mu`.
///
/// The nearest integer `k` is gauged away first (`s -> e^{-ikφ} s` is single
/// valued on the circle), so RK4 only integrates the fractional part and
/// the error stays uniform in `mu`.
pub fn holonomy(mu: f64, steps: usize) -> HolonomyResult {
    assert!(steps >= 16, "holonomy needs at least 16 RK4 steps, got {steps}");
    let k = mu.round();
    let holonomy = transport(mu - k, steps);
    let deviation = (holonomy - Complex64::new(1.0, 0.0)).norm();
    HolonomyResult {
        mu,
        holonomy,
        is_bs: deviation <= HOLONOMY_THRESHOLD,
        deviation,
    }
}

/// First window at which every per-circle contribution cancels: past the
/// highest component minimum by 2, and wide enough to hold the lowest one.
pub fn stabilization_threshold(m: &BManifold) -> u32 {
    let Some(surface) = m.surface() else {
        return 0;
    };
    let shift = m.modular_shift();
    let (lo, hi) = surface.minimum_range();
    let upper = (hi + shift).ceil() + 2.0;
    let lower = (-(lo + shift)).ceil();
    upper.max(lower).max(0.0) as u32
}

/// Default window when none is given: `⌈max μ_min⌉ + 5`, and never below
/// the stabilization threshold.
pub fn default_window(m: &BManifold) -> u32 {
    let Some(surface) = m.surface() else {
        return 0;
    };
    let (_, hi) = surface.minimum_range();
    let guess = ((hi + m.modular_shift()).ceil() + 5.0).max(0.0) as u32;
    guess.max(stabilization_threshold(m))
}

/// Signed multiplicities per modular level from counting integers in each
/// component image: 2 per level above a well's minimum, 1 at an integral
/// minimum, 1 per level on a pole end.
pub fn surface_level_counts(
    surface: &BSurface,
    window: u32,
    shift: f64,
    tol: Tolerance,
) -> Result<BTreeMap<i64, i64>> {
    let n = window as i64;
    let mut levels = BTreeMap::new();
    for (comp, profile) in surface.components().iter().enumerate() {
        let start = surface.component_image(comp)?.start + shift;
        for m in -n..=n {
            let diff = m as f64 - start;
            if diff < -tol.integer {
                continue;
            }
            let count = match profile.kind {
                ProfileKind::PoleEnd => 1,
                ProfileKind::Well if diff.abs() <= tol.integer => 1,
                ProfileKind::Well => 2,
            };
            *levels.entry(m).or_insert(0) += profile.sign as i64 * count;
        }
    }
    levels.retain(|_, c| *c != 0);
    Ok(levels)
}

/// Formal geometric quantization: reduced spaces are points, so each weight
/// in the image contributes `ε` once per preimage component.
pub fn formal_gq(m: &BManifold, window: u32, tol: Tolerance) -> Result<VirtualTModule> {
    let lattice: Vec<Vec<i64>> = m.lattice_points()?.into_iter().map(|p| p.coords).collect();
    let Some(surface) = m.surface() else {
        let mut module = VirtualTModule::new(Window::Unbounded);
        for w in lattice {
            module.add(w, 1);
        }
        module.complete = true;
        return Ok(module);
    };
    let levels = surface_level_counts(surface, window, m.modular_shift(), tol)?;
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
    module.complete = window >= stabilization_threshold(m) && stabilized_dimension(m, tol).is_ok();
    Ok(module)
}

/// Bohr-Sommerfeld quantization, with or without leaf signs.
pub fn bs_quantization(
    m: &BManifold,
    window: u32,
    signed: bool,
    tol: Tolerance,
) -> Result<VirtualTModule> {
    let weights = m.signed_weights(window, tol)?;
    let mut module = if m.is_b_manifold() {
        VirtualTModule::new(Window::Levels(window))
    } else {
        VirtualTModule::new(Window::Unbounded)
    };
    for w in weights {
        let sign = if signed { w.sign as i64 } else { 1 };
        module.add(w.weight, sign * w.multiplicity as i64);
    }
    module.complete = if m.is_b_manifold() {
        signed && window >= stabilization_threshold(m) && stabilized_dimension(m, tol).is_ok()
    } else {
        true
    };
    Ok(module)
}

/// Returns the common value of `counts` or reports the windows as unstable.
pub fn certify_stabilization(start: u32, counts: &[i64]) -> Result<i64> {
    match counts.split_first() {
        Some((&first, rest)) if rest.iter().all(|&c| c == first) => Ok(first),
        _ => Err(Error::NotStabilized {
            start,
            counts: counts.to_vec(),
        }),
    }
}

/// Signed dimension once all per-circle contributions cancel. For a plain
/// toric manifold this is the lattice point count.
pub fn stabilized_dimension(m: &BManifold, tol: Tolerance) -> Result<i64> {
    let Some(surface) = m.surface() else {
        return Ok(m.lattice_points()?.len() as i64);
    };
    let base = match m.variant() {
        ManifoldVariant::Surface(_) => 1,
        _ => m.lattice_points()?.len() as i64,
    };
    let start = stabilization_threshold(m);
    let counts = (start..start + STABILIZATION_WINDOWS)
        .map(|n| {
            surface_level_counts(surface, n, m.modular_shift(), tol)
                .map(|levels| base * levels.values().sum::<i64>())
        })
        .collect::<Result<Vec<_>>>()?;
    certify_stabilization(start, &counts)
}

/// Signed leaf counts on each side of one critical circle at one level.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CircleBalance {
    /// Component on the lower-h side of the circle (cyclically for a torus).
    pub below: i64,
    pub above: i64,
}

impl CircleBalance {
    pub fn total(&self) -> i64 {
        self.below + self.above
    }
}

/// Attributes every leaf on a branch running into a critical circle to that
/// circle and sums signs per `(circle, level)`.
pub fn circle_balances(
    surface: &BSurface,
    window: u32,
    shift: f64,
    tol: Tolerance,
) -> Result<BTreeMap<(usize, i64), CircleBalance>> {
    let mut out: BTreeMap<(usize, i64), CircleBalance> = BTreeMap::new();
    for leaf in surface.bs_leaves(window, shift, tol)? {
        let Some(circle) = leaf.near_circle else {
            continue;
        };
        let profile = &surface.components()[leaf.component];
        let entry = out.entry((circle, leaf.weight)).or_default();
        let above = profile.left == Anchor::Circle(circle)
            && (profile.right != Anchor::Circle(circle) || leaf.multiplicity_index == 1);
        if above {
            entry.above += leaf.sign as i64;
        } else {
            entry.below += leaf.sign as i64;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct CompareOptions {
    pub tolerance: Tolerance,
    pub holonomy_steps: usize,
    pub oracle: Option<OracleConfig>,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            tolerance: Tolerance::default(),
            holonomy_steps: DEFAULT_HOLONOMY_STEPS,
            oracle: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightDiff {
    pub weight: Vec<i64>,
    pub bs: i64,
    pub fgq: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    /// Only leaves that passed the holonomy check.
    pub bs_module: VirtualTModule,
    pub fgq_module: VirtualTModule,
    pub oracle_module: Option<VirtualTModule>,
    pub per_weight_diffs: Vec<WeightDiff>,
    pub equal: bool,
    pub stabilized_dimension: Dimension,
    pub holonomy_checked: usize,
    pub holonomy_failures: usize,
    pub warnings: Vec<String>,
}

/// Runs both quantizations and checks they agree weight by weight.
pub fn compare(m: &BManifold, window: u32, options: &CompareOptions) -> Result<EquivalenceReport> {
    let tol = options.tolerance;
    let mut warnings = Vec::new();
    if let Some(report) = m.delzant() {
        if !report.smooth {
            warnings.push(
                "polytope factor is not Delzant (smooth); equality is only guaranteed for Delzant data"
                    .to_string(),
            );
        }
    }
    let threshold = stabilization_threshold(m);
    if m.is_b_manifold() && window < threshold {
        warnings.push(format!(
            "window {window} is below the stabilization threshold {threshold}"
        ));
    }

    let signed = m.is_b_manifold();
    let mut bs_module = bs_quantization(m, window, signed, tol)?;
    let fgq_module = formal_gq(m, window, tol)?;

    // Every fiber counted on the BS side must have trivial holonomy; a fiber
    // that fails is removed again.
    let lattice: Vec<Vec<i64>> = m.lattice_points()?.into_iter().map(|p| p.coords).collect();
    let mut checked = 0;
    let mut failures = 0;
    for point in &lattice {
        checked += 1;
        if !point
            .iter()
            .all(|&x| holonomy(x as f64, options.holonomy_steps).is_bs)
        {
            failures += 1;
            let doomed: Vec<(Vec<i64>, i64)> = bs_module
                .entries()
                .iter()
                .filter(|(w, _)| w.starts_with(point))
                .map(|(w, &c)| (w.clone(), c))
                .collect();
            for (w, c) in doomed {
                bs_module.add(w, -c);
            }
        }
    }
    if m.is_b_manifold() {
        let bases = match m.variant() {
            ManifoldVariant::Surface(_) => vec![Vec::new()],
            _ => lattice.clone(),
        };
        for leaf in m.surface_leaves(window, tol)? {
            checked += 1;
            if holonomy(leaf.mu, options.holonomy_steps).is_bs {
                continue;
            }
            failures += 1;
            for base in &bases {
                let mut w = base.clone();
                w.push(leaf.weight);
                bs_module.add(w, -(leaf.sign as i64));
            }
        }
    }

    // An oracle that cannot run has not confirmed anything.
    let mut oracle_failed = false;
    let oracle_module = match &options.oracle {
        Some(cfg) => match oracle::oracle_module(m, window, cfg, tol) {
            Ok(module) => Some(module),
            Err(e) => {
                warnings.push(format!("oracle failed: {e}"));
                oracle_failed = true;
                None
            }
        },
        None => None,
    };

    let mut weights: BTreeSet<Vec<i64>> = bs_module.entries().keys().cloned().collect();
    weights.extend(fgq_module.entries().keys().cloned());
    if let Some(o) = &oracle_module {
        weights.extend(o.entries().keys().cloned());
    }
    let per_weight_diffs: Vec<WeightDiff> = weights
        .into_iter()
        .filter_map(|w| {
            let bs = bs_module.get(&w);
            let fgq = fgq_module.get(&w);
            let oracle = oracle_module.as_ref().map(|o| o.get(&w));
            let agree = bs == fgq && oracle.is_none_or(|o| o == bs);
            (!agree).then_some(WeightDiff {
                weight: w,
                bs,
                fgq,
                oracle,
            })
        })
        .collect();

    let stabilized_dimension = Dimension::Finite(stabilized_dimension(m, tol)?);
    Ok(EquivalenceReport {
        equal: per_weight_diffs.is_empty() && !oracle_failed,
        bs_module,
        fgq_module,
        oracle_module,
        per_weight_diffs,
        stabilized_dimension,
        holonomy_checked: checked,
        holonomy_failures: failures,
        warnings,
    })
}
