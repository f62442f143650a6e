pub mod blocks;
pub mod error;
pub mod k3;
pub mod lattice;
pub mod mat;
pub mod toric;

pub use blocks::{
    acyl_profile, betti3_semifano, blowup_numbers, block_cohomology, block_report, c2_block,
    c2_restriction, defect, fano_rank1_rows, flop_update, genus_degree, namikawa_check,
    nodal_cubic_rows, polarising_lattice, rank1_table_row, riemann_roch_3fold, AcylProfile,
    BlockCohomology, BlockDescriptor, BlowupNumbers, BlowupSpec, C2Report, FanoDescriptor,
    InvariantReport, SmoothingData,
};
pub use error::{Error, Result};
pub use k3::{
    complement_profile, extract_e8_and_complement, k3_lattice, verify_polarising_decomposition,
    ComplementProfile, DecompositionVerdict, E8Split, PolarisingLattice, VerificationReport,
};
pub use lattice::{
    image_lattice, is_isometric_bounded, is_primitive_sublattice, lattice_profile,
    orthogonal_complement, represent, rudakov_shafarevich_certificate, standard_lattice,
    GramLattice, LatticeExpr, LatticeProfile, RsCertificate,
};
pub use mat::{smith_normal_form, Mat, Smith, Q};
pub use toric::{
    build_resolution, enumerate_resolutions, fan_invariants, parse_polytope,
    parse_polytope_batch, polytope_profile, projectivity, resolution_classes, FanInvariants,
    FanResolution, LatticePolytope, PolytopeProfile, ProjectivityCertificate, ResolutionClasses,
};
