//! Toric and b-toric manifolds assembled from a surface factor, a polytope
//! factor, or both.
//!
//! Weight vectors put the modular direction (the surface factor's axis) in
//! the last coordinate. Cuts on a product must not involve that coordinate,
//! so they act on the polytope factor alone.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bsurface::{BSLeaf, BSurface, SurfaceSpec, Tolerance};
use crate::error::{Error, Result};
use crate::polytope::{rational_from_f64, DelzantReport, HalfSpace, LatticePoint, RationalPolytope};

#[derive(Clone, Debug, PartialEq)]
pub enum ManifoldVariant {
    Symplectic(RationalPolytope),
    Surface(BSurface),
    Product {
        surface: BSurface,
        polytope: RationalPolytope,
        cuts: Vec<HalfSpace>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BManifold {
    variant: ManifoldVariant,
    rank: usize,
    offset_shift: Vec<f64>,
    /// Polytope factor after cuts and the offset shift.
    effective_polytope: Option<RationalPolytope>,
    delzant: Option<DelzantReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SignedWeight {
    pub weight: Vec<i64>,
    pub sign: i8,
    pub multiplicity: u32,
    /// Surface components contributing to this weight; empty for a pure polytope.
    pub components: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ImagePiece {
    Polytope {
        polytope: RationalPolytope,
    },
    /// `base × [ray_start, +inf)`, with `base` absent for a bare surface.
    Strip {
        base: Option<RationalPolytope>,
        component: usize,
        ray_start: f64,
        sign: i8,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentImage {
    pub rank: usize,
    pub pieces: Vec<ImagePiece>,
}

/// `"manifold"` object of a manifest.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polytope: Option<RationalPolytope>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cuts: Option<Vec<HalfSpace>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset_shift: Option<Vec<f64>>,
}

impl BManifold {
    pub fn build(spec: &ManifoldSpec) -> Result<Self> {
        let surface = spec.surface.clone().map(BSurface::try_from).transpose()?;
        let cuts = spec.cuts.clone().unwrap_or_default();
        let variant = match (surface, spec.polytope.clone()) {
            (None, None) => {
                return Err(Error::Manifest(
                    "manifold needs a surface, a polytope, or both".into(),
                ))
            }
            (None, Some(polytope)) => {
                let mut p = polytope;
                for cut in &cuts {
                    p = p.cut(cut)?;
                }
                ManifoldVariant::Symplectic(p)
            }
            (Some(surface), None) => {
                if let Some((index, _)) = cuts.iter().enumerate().next() {
                    return Err(Error::CutHitsZ { index });
                }
                ManifoldVariant::Surface(surface)
            }
            (Some(surface), Some(polytope)) => ManifoldVariant::Product {
                surface,
                polytope,
                cuts,
            },
        };
        Self::new(variant, spec.offset_shift.clone())
    }

    pub fn new(variant: ManifoldVariant, offset_shift: Option<Vec<f64>>) -> Result<Self> {
        let rank = match &variant {
            ManifoldVariant::Symplectic(p) => p.dim(),
            ManifoldVariant::Surface(_) => 1,
            ManifoldVariant::Product { polytope, .. } => polytope.dim() + 1,
        };
        let offset_shift = offset_shift.unwrap_or_else(|| vec![0.0; rank]);
        if offset_shift.len() != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                got: offset_shift.len(),
            });
        }
        if offset_shift.iter().any(|s| !s.is_finite()) {
            return Err(Error::Manifest("offset_shift must be finite".into()));
        }
        let base = match &variant {
            ManifoldVariant::Symplectic(p) => Some(p.clone()),
            ManifoldVariant::Surface(_) => None,
            ManifoldVariant::Product {
                polytope, cuts, ..
            } => {
                let mut p = polytope.clone();
                for (index, cut) in cuts.iter().enumerate() {
                    if cut.dim() != rank {
                        return Err(Error::DimensionMismatch {
                            expected: rank,
                            got: cut.dim(),
                        });
                    }
                    let (head, modular) = cut.normal().split_at(rank - 1);
                    if modular[0] != 0 {
                        return Err(Error::CutHitsZ { index });
                    }
                    p = p.cut(&HalfSpace::new(head.to_vec(), cut.offset().clone())?)?;
                }
                Some(p)
            }
        };
        let (effective_polytope, delzant) = match base {
            Some(p) => {
                if let Some(d) = p.recession_direction() {
                    return Err(Error::UnboundedPolytope {
                        direction: d.iter().map(crate::polytope::format_rational).collect(),
                    });
                }
                let report = if p.is_empty()? {
                    None
                } else {
                    Some(p.validate_delzant()?)
                };
                let shift = offset_shift[..p.dim()]
                    .iter()
                    .map(|&s| rational_from_f64(s))
                    .collect::<Result<Vec<_>>>()?;
                (Some(p.translate(&shift)?), report)
            }
            None => (None, None),
        };
        Ok(Self {
            variant,
            rank,
            offset_shift,
            effective_polytope,
            delzant,
        })
    }

    pub fn variant(&self) -> &ManifoldVariant {
        &self.variant
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn offset_shift(&self) -> &[f64] {
        &self.offset_shift
    }

    pub fn delzant(&self) -> Option<&DelzantReport> {
        self.delzant.as_ref()
    }

    pub fn surface(&self) -> Option<&BSurface> {
        match &self.variant {
            ManifoldVariant::Symplectic(_) => None,
            ManifoldVariant::Surface(s) | ManifoldVariant::Product { surface: s, .. } => Some(s),
        }
    }

    /// The polytope factor with cuts and shift applied.
    pub fn polytope_factor(&self) -> Option<&RationalPolytope> {
        self.effective_polytope.as_ref()
    }

    pub fn is_b_manifold(&self) -> bool {
        self.surface().is_some()
    }

    pub fn modular_shift(&self) -> f64 {
        if self.is_b_manifold() {
            self.offset_shift[self.rank - 1]
        } else {
            0.0
        }
    }

    /// Same manifold with every surface sign reversed.
    pub fn flipped(&self) -> Self {
        let variant = match &self.variant {
            ManifoldVariant::Symplectic(p) => ManifoldVariant::Symplectic(p.clone()),
            ManifoldVariant::Surface(s) => ManifoldVariant::Surface(s.flipped()),
            ManifoldVariant::Product {
                surface,
                polytope,
                cuts,
            } => ManifoldVariant::Product {
                surface: surface.flipped(),
                polytope: polytope.clone(),
                cuts: cuts.clone(),
            },
        };
        Self {
            variant,
            ..self.clone()
        }
    }

    pub fn with_offset_shift(&self, offset_shift: Vec<f64>) -> Result<Self> {
        Self::new(self.variant.clone(), Some(offset_shift))
    }

    pub fn lattice_points(&self) -> Result<Vec<LatticePoint>> {
        match &self.effective_polytope {
            Some(p) => p.enumerate_lattice_points(),
            None => Ok(Vec::new()),
        }
    }

    /// Leaves of the surface factor in the modular window.
    pub fn surface_leaves(&self, window: u32, tol: Tolerance) -> Result<Vec<BSLeaf>> {
        match self.surface() {
            Some(s) => s.bs_leaves(window, self.modular_shift(), tol),
            None => Ok(Vec::new()),
        }
    }

    /// Bohr-Sommerfeld weights with their signs, sorted by weight then sign.
    pub fn signed_weights(&self, window: u32, tol: Tolerance) -> Result<Vec<SignedWeight>> {
        let lattice: Vec<Vec<i64>> = self.lattice_points()?.into_iter().map(|p| p.coords).collect();
        let Some(_) = self.surface() else {
            return Ok(lattice
                .into_iter()
                .map(|weight| SignedWeight {
                    weight,
                    sign: 1,
                    multiplicity: 1,
                    components: Vec::new(),
                })
                .collect());
        };

        let mut grouped: BTreeMap<(i64, i8), (u32, Vec<usize>)> = BTreeMap::new();
        for leaf in self.surface_leaves(window, tol)? {
            let entry = grouped.entry((leaf.weight, leaf.sign)).or_default();
            entry.0 += 1;
            if !entry.1.contains(&leaf.component) {
                entry.1.push(leaf.component);
            }
        }
        let bases: Vec<Vec<i64>> = match &self.variant {
            ManifoldVariant::Surface(_) => vec![Vec::new()],
            _ => lattice,
        };
        let mut out = Vec::with_capacity(bases.len() * grouped.len());
        for base in &bases {
            for (&(m, sign), (count, components)) in &grouped {
                let mut weight = base.clone();
                weight.push(m);
                out.push(SignedWeight {
                    weight,
                    sign,
                    multiplicity: *count,
                    components: components.clone(),
                });
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn moment_image_description(&self) -> Result<MomentImage> {
        let pieces = match self.surface() {
            None => vec![ImagePiece::Polytope {
                polytope: self.effective_polytope.clone().expect("symplectic has a polytope"),
            }],
            Some(s) => {
                let shift = self.modular_shift();
                (0..s.components().len())
                    .map(|comp| {
                        Ok(ImagePiece::Strip {
                            base: self.effective_polytope.clone(),
                            component: comp,
                            ray_start: s.component_image(comp)?.start + shift,
                            sign: s.components()[comp].sign,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        Ok(MomentImage {
            rank: self.rank,
            pieces,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::int;

    fn segment() -> RationalPolytope {
        RationalPolytope::cuboid(&[(0, 1)])
    }

    fn product(surface: BSurface, polytope: RationalPolytope, cuts: Vec<HalfSpace>) -> BManifold {
        BManifold::new(
            ManifoldVariant::Product {
                surface,
                polytope,
                cuts,
            },
            None,
        )
        .unwrap()
    }

    #[test]
    fn build_all_variants() {
        let spec = ManifoldSpec {
            surface: Some(SurfaceSpec::from(&BSurface::canonical_sphere())),
            polytope: Some(segment()),
            ..Default::default()
        };
        let m = BManifold::build(&spec).unwrap();
        assert_eq!(m.rank(), 2);
        assert!(matches!(m.variant(), ManifoldVariant::Product { .. }));
        assert!(m.delzant().unwrap().smooth);

        let m = BManifold::build(&ManifoldSpec {
            polytope: Some(RationalPolytope::scaled_simplex(2, 2)),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(m.rank(), 2);
        assert!(matches!(m.variant(), ManifoldVariant::Symplectic(_)));

        assert!(BManifold::build(&ManifoldSpec::default()).is_err());
    }

    #[test]
    fn cut_along_modular_axis_is_rejected() {
        let spec = ManifoldSpec {
            surface: Some(SurfaceSpec::from(&BSurface::canonical_sphere())),
            polytope: Some(segment()),
            cuts: Some(vec![HalfSpace::new(vec![0, 1], int(3)).unwrap()]),
            ..Default::default()
        };
        assert!(matches!(BManifold::build(&spec), Err(Error::CutHitsZ { index: 0 })));
        let spec = ManifoldSpec {
            surface: Some(SurfaceSpec::from(&BSurface::canonical_sphere())),
            cuts: Some(vec![HalfSpace::new(vec![1], int(3)).unwrap()]),
            ..Default::default()
        };
        assert!(matches!(BManifold::build(&spec), Err(Error::CutHitsZ { index: 0 })));
    }

    #[test]
    fn symplectic_weights_are_lattice_points() {
        let m = BManifold::new(
            ManifoldVariant::Symplectic(RationalPolytope::scaled_simplex(2, 2)),
            None,
        )
        .unwrap();
        let w = m.signed_weights(0, Tolerance::default()).unwrap();
        assert_eq!(w.len(), 6);
        assert!(w.iter().all(|s| s.sign == 1 && s.multiplicity == 1));
    }

    #[test]
    fn product_weights_of_sphere_and_segment() {
        let m = product(BSurface::canonical_sphere(), segment(), vec![]);
        let w = m.signed_weights(1, Tolerance::default()).unwrap();
        assert_eq!(w.len(), 8);
        for k in 0..=1 {
            for level in 0..=1 {
                for sign in [-1, 1] {
                    assert_eq!(
                        w.iter()
                            .filter(|s| s.weight == vec![k, level] && s.sign == sign)
                            .map(|s| s.multiplicity)
                            .sum::<u32>(),
                        1
                    );
                }
            }
        }
    }

    #[test]
    fn poles_of_canonical_sphere() {
        let m = BManifold::new(ManifoldVariant::Surface(BSurface::canonical_sphere()), None).unwrap();
        let w = m.signed_weights(0, Tolerance::default()).unwrap();
        let pairs: Vec<(Vec<i64>, i8)> = w.iter().map(|s| (s.weight.clone(), s.sign)).collect();
        assert_eq!(pairs, vec![(vec![0], -1), (vec![0], 1)]);
    }

    #[test]
    fn cuts_filter_the_polytope_factor() {
        let square = RationalPolytope::cuboid(&[(0, 3)]);
        let cut = HalfSpace::new(vec![1, 0], int(1)).unwrap();
        let before = product(BSurface::canonical_sphere(), square.clone(), vec![]);
        let after = product(BSurface::canonical_sphere(), square, vec![cut.clone()]);
        let wb = before.signed_weights(2, Tolerance::default()).unwrap();
        let wa = after.signed_weights(2, Tolerance::default()).unwrap();
        assert!(wa.len() < wb.len());
        assert!(wa.iter().all(|w| wb.contains(w) && w.weight[0] <= 1));
    }

    #[test]
    fn moment_images() {
        let m = BManifold::new(ManifoldVariant::Surface(BSurface::canonical_sphere()), None).unwrap();
        let image = m.moment_image_description().unwrap();
        let rays: Vec<(f64, i8)> = image
            .pieces
            .iter()
            .map(|p| match p {
                ImagePiece::Strip { ray_start, sign, .. } => (*ray_start, *sign),
                _ => panic!("expected strips"),
            })
            .collect();
        assert_eq!(rays, vec![(0.0, -1), (0.0, 1)]);

        let square = RationalPolytope::cuboid(&[(0, 1), (0, 1)]);
        let m = BManifold::new(ManifoldVariant::Symplectic(square.clone()), None).unwrap();
        assert_eq!(
            m.moment_image_description().unwrap().pieces,
            vec![ImagePiece::Polytope { polytope: square }]
        );

        let m = product(BSurface::canonical_sphere(), segment(), vec![]);
        let image = m.moment_image_description().unwrap();
        assert_eq!(image.pieces.len(), 2);
        assert!(image.pieces.iter().all(|p| matches!(
            p,
            ImagePiece::Strip { base: Some(b), ray_start, .. } if *b == segment() && *ray_start == 0.0
        )));
    }

    #[test]
    fn offset_shift_translates_the_polytope() {
        let m = BManifold::new(
            ManifoldVariant::Symplectic(RationalPolytope::cuboid(&[(0, 1)])),
            Some(vec![2.0]),
        )
        .unwrap();
        let pts: Vec<Vec<i64>> = m.lattice_points().unwrap().into_iter().map(|p| p.coords).collect();
        assert_eq!(pts, vec![vec![2], vec![3]]);
        assert!(BManifold::new(
            ManifoldVariant::Symplectic(RationalPolytope::cuboid(&[(0, 1)])),
            Some(vec![0.0, 1.0])
        )
        .is_err());
    }
}
