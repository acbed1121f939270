//! Invariant positive 3-planes, realization verdicts for finite isometry
//! groups, and lifting from the Enriques lattice to the K3 lattice.

pub mod lift;
pub mod plane;
pub mod report;

pub use lift::{
    dehn_twist_reflection, descend_isometry, enriques_realizable, lift_group, lift_isometry, reflection_vector,
    ricci_flat_implies_complex_witness, EnriquesReport, Splitting,
};
pub use plane::{find_invariant_positive_3plane, PlaneOptions, PlanePath, PositiveThreePlane, Restriction};
pub use report::{realization_invariant, realize_k3, Mode, PlaneImage, RealizationReport, ReportOptions, RotationType};
