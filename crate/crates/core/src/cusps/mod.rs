//! Generalized cusps in dimension 3: the four families of cusp groups,
//! virtual flag group tests, weights, translation groups, radial flows,
//! orbit convexity certificates, cusp domains and deformation paths.
//!
//! The machinery works for `n <= 4`; only the three-dimensional families are
//! shipped.

mod certificate;
mod deform;
mod domain;
mod family;
mod group;
mod optimize;

pub use certificate::{orbit_certificate, ConvexityCertificate, Verdict, CERT_STEP, CERT_TOL};
pub use deform::{
    deform_path_check, interpolate_path, DeformOptions, DeformPath, DeformSample, Keyframe, Stage,
};
pub use domain::{
    build_cusp_domain, exhaustion_function, flow_time, CuspDomain, Exhaustion, Foliation,
    OrbitGrid,
};
pub use family::{cusp_generator, CuspFamily};
pub use group::{
    radial_flow_for_weight, translation_group, vfg_test, weight_decomposition, CuspRep, FlowKind,
    RadialFlow, TranslationGroup, VfgVerdict, Weight, WeightDecomposition,
};

use crate::error::Result;
use crate::linalg::{mat_exp, LieElement, Matrix};

fn expm(m: &Matrix) -> Result<Matrix> {
    Ok(mat_exp(&LieElement::new(m.clone())?)?.into_matrix())
}
