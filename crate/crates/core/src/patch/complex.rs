use super::map::PatchMap;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OrientedPatch {
    pub patch: PatchMap,
    pub orientation: Orientation,
}

/// A surface assembled from rectangular patches. Integrals over the complex
/// are orientation-weighted sums of the per-patch integrals.
///
/// Shared faces are not matched geometrically when gluing; whether the
/// orientations agree shows up afterwards in the boundary content.
#[derive(Clone, Debug)]
pub struct PatchComplex {
    patches: Vec<OrientedPatch>,
}

impl PatchComplex {
    pub fn patches(&self) -> &[OrientedPatch] {
        &self.patches
    }

    pub fn k(&self) -> usize {
        self.patches[0].patch.k()
    }

    pub fn ambient_dim(&self) -> usize {
        self.patches[0].patch.ambient_dim()
    }

    pub fn single(patch: PatchMap) -> Self {
        PatchComplex {
            patches: vec![OrientedPatch {
                patch,
                orientation: Orientation::Positive,
            }],
        }
    }
}

pub fn glue_patches(patches: Vec<(PatchMap, Orientation)>) -> Result<PatchComplex> {
    let first = patches.first().ok_or(Error::EmptyComplex)?;
    let (k, n) = (first.0.k(), first.0.ambient_dim());
    if let Some((p, _)) = patches.iter().find(|(p, _)| p.k() != k || p.ambient_dim() != n) {
        return Err(Error::DimensionMismatch(format!(
            "patch `{}` is a {}-patch in R^{}, complex holds {k}-patches in R^{n}",
            p.name(),
            p.k(),
            p.ambient_dim()
        )));
    }
    Ok(PatchComplex {
        patches: patches
            .into_iter()
            .map(|(patch, orientation)| OrientedPatch { patch, orientation })
            .collect(),
    })
}
