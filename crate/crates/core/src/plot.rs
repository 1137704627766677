//! Profile curves and leaf markers of a b-surface as CSV rows.

use std::io::{self, Write};

use crate::bsurface::{Anchor, BSurface, SurfaceKind, Tolerance};
use crate::error::Result;
use crate::format::sig12;

pub const CSV_HEADER: &str = "h,mu,component,sign,is_leaf,weight";

#[derive(Clone, Debug, PartialEq)]
pub struct PlotRow {
    pub h: f64,
    pub mu: f64,
    pub component: usize,
    pub sign: i8,
    /// Weight of the leaf, `None` for curve samples.
    pub leaf_weight: Option<i64>,
}

/// `samples` profile points per component on a logistic grid (dense near
/// the circles), plus one row per leaf in the window; sorted by component,
/// then `h`.
pub fn plot_rows(
    s: &BSurface,
    window: u32,
    offset_shift: f64,
    samples: usize,
    tol: Tolerance,
) -> Result<Vec<PlotRow>> {
    let mut rows = Vec::new();
    let min_period = s
        .circles()
        .iter()
        .map(|c| c.period)
        .fold(f64::INFINITY, f64::min);
    let reach = (window as f64 + 3.0) / min_period + 3.0;
    for (comp, profile) in s.components().iter().enumerate() {
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
        let mut push = |h: f64| {
            if let Ok(mu) = s.moment_profile(comp, h) {
                let h = if s.kind() == SurfaceKind::Torus { h.rem_euclid(1.0) } else { h };
                rows.push(PlotRow {
                    h,
                    mu: mu + offset_shift,
                    component: comp,
                    sign: profile.sign,
                    leaf_weight: None,
                });
            }
        };
        if profile.left == Anchor::SouthPole {
            push(lo);
        }
        for i in 0..samples {
            let t = -reach + 2.0 * reach * (i as f64 + 0.5) / samples as f64;
            push(lo + (hi - lo) / (1.0 + (-t).exp()));
        }
        if profile.right == Anchor::NorthPole {
            push(hi);
        }
    }
    for leaf in s.bs_leaves(window, offset_shift, tol)? {
        rows.push(PlotRow {
            h: leaf.h_value,
            mu: leaf.mu,
            component: leaf.component,
            sign: leaf.sign,
            leaf_weight: Some(leaf.weight),
        });
    }
    rows.sort_by(|a, b| {
        a.component
            .cmp(&b.component)
            .then(a.h.total_cmp(&b.h))
            .then(a.leaf_weight.is_some().cmp(&b.leaf_weight.is_some()))
    });
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[PlotRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            sig12(r.h),
            sig12(r.mu),
            r.component,
            r.sign,
            u8::from(r.leaf_weight.is_some()),
            r.leaf_weight.map(|w| w.to_string()).unwrap_or_default()
        )?;
    }
    Ok(())
}
