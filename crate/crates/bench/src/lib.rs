//! Fixtures shared by the benchmarks.

use bsq_core::{BManifold, BSurface, CriticalCircle, ManifoldVariant, RationalPolytope, SurfaceKind};

/// Five critical circles, laid out like the usual multi-circle picture.
pub fn five_circle_sphere() -> BSurface {
    let circles = [-0.8, -0.15, 0.15, 0.4, 0.9]
        .into_iter()
        .map(|position| CriticalCircle { position, period: 1.0 })
        .collect();
    BSurface::new(SurfaceKind::Sphere, circles, vec![0.0, 0.3, 0.0, -1.0, 1.0, -1.5], -1)
        .expect("valid surface")
}

pub fn product_with_square(surface: BSurface, side: i64) -> BManifold {
    BManifold::new(
        ManifoldVariant::Product {
            surface,
            polytope: RationalPolytope::cuboid(&[(0, side), (0, side)]),
            cuts: Vec::new(),
        },
        None,
    )
    .expect("valid product")
}
