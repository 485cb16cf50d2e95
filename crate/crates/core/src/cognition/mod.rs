//! Cognition workloads: graph memory, reactive navigation and OOD scoring.

pub mod graph;
pub mod hdff;
pub mod navigation;

pub use graph::{graph_edge_query, graph_encode, GraphComposition, GraphMemory, GraphOptions};
pub use hdff::{hdff_score, CombineOp, HdffDescriptor, HdffScore};
pub use navigation::{navigation_recall, navigation_train, Demo, NavigationConfig, NavigationProgram, Recall};
