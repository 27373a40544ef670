//! QUBO builders for molecular docking and feature selection, plus their evaluators.

pub mod docking;
pub mod features;
pub mod ks;

pub use docking::{
    decode_pose, docking_qubo, mrmsd, rmsd, synthetic_docking, DockingInstance, MrmsdReport, Pose, Site,
    SyntheticDocking, Violation, ACCEPTABLE_RMSD,
};
pub use features::{
    feature_selection_qubo, pearson_matrix, selection_score, FeatureSelectionInstance, Relevance,
};
pub use ks::ks_statistic;
