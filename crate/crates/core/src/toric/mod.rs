//! Toric pipeline: reflexive polytopes, crepant small resolutions of the
//! associated semi-Fano 3-folds, their intersection theory, and projectivity.

pub mod fan;
pub mod hull;
pub mod lp;
pub mod polytope;
pub mod resolutions;

pub use fan::{build_resolution, fan_invariants, fan_walls, FanInvariants, FanResolution, Wall};
pub use hull::{FacetKind, V3};
pub use polytope::{
    automorphisms, cartier_rank, parse_polytope, parse_polytope_batch, polytope_profile,
    unimodular_map_between, LatticePolytope, Parallelogram, PolytopeProfile,
};
pub use resolutions::{
    choice_from_mask, enumerate_resolutions, projectivity, resolution_classes,
    ProjectivityCertificate, ResolutionClasses,
};
