//! JSON documents printed by the command line tool.

use serde::{Deserialize, Serialize};

use crate::bsurface::BSurface;
use crate::format::round12;
use crate::polytope::DelzantReport;
use crate::quantize::{Dimension, EquivalenceReport, VirtualTModule, Window};

/// An integer, or a label such as `"unbounded"` or `"diverged"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Count {
    Finite(i64),
    Label(String),
}

impl From<Window> for Count {
    fn from(w: Window) -> Self {
        match w {
            Window::Levels(n) => Count::Finite(n as i64),
            Window::Unbounded => Count::Label("unbounded".into()),
        }
    }
}

impl From<Dimension> for Count {
    fn from(d: Dimension) -> Self {
        match d {
            Dimension::Finite(n) => Count::Finite(n),
            Dimension::Diverged => Count::Label("diverged".into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleEntry {
    pub w: Vec<i64>,
    pub mult: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleReport {
    pub method: String,
    pub signed: bool,
    pub window: Count,
    pub complete: bool,
    /// Sum of multiplicities inside the window.
    pub dimension: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilized_dimension: Option<i64>,
    pub weights: Vec<ModuleEntry>,
}

impl ModuleReport {
    pub fn new(method: &str, signed: bool, module: &VirtualTModule, stabilized: Option<i64>) -> Self {
        Self {
            method: method.to_string(),
            signed,
            window: module.window().into(),
            complete: module.is_complete(),
            dimension: module.dimension(),
            stabilized_dimension: stabilized,
            weights: module
                .entries()
                .iter()
                .map(|(w, &mult)| ModuleEntry { w: w.clone(), mult })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BothReport {
    pub bs: ModuleReport,
    pub fgq: ModuleReport,
    pub equal: bool,
    pub dimension: Count,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightRow {
    pub w: Vec<i64>,
    pub bs: i64,
    pub fgq: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareReport {
    pub equal: bool,
    pub dimension: Count,
    pub weights: Vec<WeightRow>,
    pub warnings: Vec<String>,
    pub holonomy_checked: usize,
    pub holonomy_failures: usize,
}

impl From<&EquivalenceReport> for CompareReport {
    fn from(r: &EquivalenceReport) -> Self {
        let mut weights: Vec<Vec<i64>> = r
            .bs_module
            .entries()
            .keys()
            .chain(r.fgq_module.entries().keys())
            .chain(r.oracle_module.iter().flat_map(|o| o.entries().keys()))
            .cloned()
            .collect();
        weights.sort();
        weights.dedup();
        Self {
            equal: r.equal,
            dimension: r.stabilized_dimension.into(),
            weights: weights
                .into_iter()
                .map(|w| WeightRow {
                    bs: r.bs_module.get(&w),
                    fgq: r.fgq_module.get(&w),
                    oracle: r.oracle_module.as_ref().map(|o| o.get(&w)),
                    w,
                })
                .collect(),
            warnings: r.warnings.clone(),
            holonomy_checked: r.holonomy_checked,
            holonomy_failures: r.holonomy_failures,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub component: usize,
    pub kind: String,
    pub sign: i8,
    pub h_min: f64,
    pub mu_min: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSummary {
    pub kind: String,
    pub components: Vec<ComponentSummary>,
}

impl SurfaceSummary {
    pub fn new(s: &BSurface) -> Self {
        let components = s
            .components()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let (h, mu) = s.profile_minimum(i).expect("valid component");
                ComponentSummary {
                    component: i,
                    kind: serde_json::to_value(c.kind)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_string))
                        .unwrap_or_default(),
                    sign: c.sign,
                    h_min: round12(h),
                    mu_min: round12(mu),
                }
            })
            .collect();
        Self {
            kind: serde_json::to_value(s.kind())
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
            components,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delzant: Option<DelzantReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceSummary>,
    pub warnings: Vec<String>,
}
