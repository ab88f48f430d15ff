//! Strong friendship paradox analytics.
//!
//! A node is in the strong friendship paradox when the median degree of its
//! neighbors exceeds its own. This crate measures that on large undirected
//! graphs, relates it to degree-degree (2K) and neighbor-neighbor (3K)
//! correlations, predicts it from those correlations, and generates
//! synthetic graphs with prescribed joint degree distributions.
//!
//! ```
//! use paradox_lens_core::{load_edge_list, observed_paradox, LoadOptions, ParadoxDefinition};
//!
//! let text = "0 1\n0 2\n0 3\n0 4\n";
//! let (g, _) = load_edge_list(text.as_bytes(), LoadOptions::default()).unwrap();
//! let prof = observed_paradox(&g, ParadoxDefinition::MedianStrict).unwrap();
//! assert_eq!(prof.global_p, 0.8);
//! ```

pub mod degree;
pub mod error;
pub mod generate;
pub mod graph;
pub mod ingest;
pub mod lognormal;
pub mod model;
pub mod paradox;
pub mod report;
pub mod triplet;

pub use degree::{degree_stats, mu_x, q_exceed_prob, DegreeStats, JointDegreeDistribution};
pub use error::{Error, Result};
pub use generate::{
    empirical_lognormal_point, generate_2k, generate_core_periphery, rewire_to_assortativity, CorePeripheryWiring,
    EmpiricalPoint, GenerationReport, GenerationSpec, RewireOutcome, Target,
};
pub use graph::{CleaningCounts, Graph, NodeId};
pub use ingest::{load_edge_list, load_edge_list_path, IngestionReport, LoadOptions};
pub use lognormal::{global_paradox, sweep_global_paradox, transition_width, LogNormalParams, SweepPoint, TransitionWidth};
pub use model::{predict_2k_binomial, predict_2k_gauss, predict_3k, Model, ModelInputs};
pub use paradox::{
    critical_degree, mu_half_crossing, observed_paradox, ParadoxClass, ParadoxDefinition, ParadoxProfile,
    ParadoxSource,
};
pub use triplet::{
    class_counts, exceedance_profile, larger_neighbor_counts, pair_exceed_prob, xbar_distribution, ExceedanceClass,
    ExceedanceProfile, SmoothedClass, XbarDistribution,
};
