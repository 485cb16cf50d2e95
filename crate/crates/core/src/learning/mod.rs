//! Supervised classification and clustering over encoded hypervectors.

pub mod classifier;
pub mod cluster;
pub mod metrics;

pub use classifier::{infer, retrain_iterative, train_single_pass, ClassifierModel, RetrainReport};
pub use cluster::{cluster, ClusterModel};
