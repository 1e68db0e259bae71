//! Rectangular k-patches: parameter domains, boundary chains, embeddings and
//! their frames.

pub mod builtin;
mod complex;
mod frame;
mod map;
mod rectangle;

pub use complex::{glue_patches, OrientedPatch, Orientation, PatchComplex};
pub use frame::{
    face_frame, face_wedge, frame_from_tangents, tangent_frame, FaceFrame, FrameData,
    REGULARITY_EPS,
};
pub use map::{JacobianFn, MapFn, PatchMap, Smoothness};
pub(crate) use frame::tangent_kvector;
pub use rectangle::{Face, KRectangle, Side};
