//! Exact global Okounkov bodies of projectivized rank-two toric vector bundles.

pub mod builtin;
pub mod error;
pub mod fan;
pub mod geometry;
pub mod klyachko;
pub mod okounkov;
pub mod sections;

pub use error::{Error, Result};
pub use fan::{base_polytope, normalize_class, select_flag, validate_fan, DivisorClass, Fan, FlagBasis};
pub use klyachko::{
    check_compatibility, derive_context, derive_context_with, Bundle2, FlagContext, ProjLine, RayFiltration,
};
pub use okounkov::{
    admissible_sets, check_against_oracle, fiber_body, global_cone, is_big, split_model_body, vol_of_class,
    GlobalCone, OkounkovBody,
};
pub use sections::{h0, isotypical_dim, isotypical_support, valuation_set, IsotypicalSummand};
