//! Manifest files: `{"manifold": {...}, "options": {...}}`.

use serde::{Deserialize, Serialize};

use crate::bmanifold::{BManifold, ManifoldSpec};
use crate::error::{Error, Result};
use crate::oracle::OracleConfig;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<u32>,
    /// Replaces `manifold.offset_shift` when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset_shift: Option<Vec<f64>>,
    /// Replaces the surface orientation when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub manifold: ManifoldSpec,
    #[serde(default)]
    pub options: ManifestOptions,
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<BManifold> {
        let mut spec = self.manifold.clone();
        if let Some(shift) = &self.options.offset_shift {
            spec.offset_shift = Some(shift.clone());
        }
        if let Some(orientation) = self.options.orientation {
            match spec.surface.as_mut() {
                Some(surface) => surface.orientation = orientation,
                None => {
                    return Err(Error::Manifest(
                        "options.orientation needs a surface factor".into(),
                    ))
                }
            }
        }
        BManifold::build(&spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_applies_options() {
        let text = r#"{
            "manifold": {"surface": {"kind": "sphere", "circles": [{"position": 0.0, "period": 1.0}], "offsets": [0.0, 0.0], "orientation": 1}},
            "options": {"window": 4, "orientation": -1, "offset_shift": [1.0]}
        }"#;
        let manifest = Manifest::from_json(text).unwrap();
        assert_eq!(manifest.options.window, Some(4));
        let m = manifest.build().unwrap();
        assert_eq!(m.surface().unwrap().orientation(), -1);
        assert_eq!(m.offset_shift(), &[1.0]);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_json() {
        assert!(Manifest::from_json(r#"{"manifold": {}, "extra": 1}"#).is_err());
        assert!(Manifest::from_json(r#"{"manifold": {"surface": 3}}"#).is_err());
        assert!(Manifest::from_json("{").is_err());
        let empty = Manifest::from_json(r#"{"manifold": {}}"#).unwrap();
        assert!(empty.build().is_err());
    }
}
