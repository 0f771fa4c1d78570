//! Exact VC-dimension of translate families and Cayley-graph neighborhood
//! families over finite groups, the greedy tiling and covering constructions
//! behind the random-subset law of large numbers, power-residue Cayley
//! graphs, and a seeded Monte Carlo harness.

pub mod cayley;
pub mod error;
pub mod experiments;
pub mod family;
pub mod group;
pub mod residues;
pub mod sampling;
pub mod subset;
pub mod tiling;
pub mod vc;

pub use cayley::{
    cayley_digraph, cayley_sum_graph, closed_neighborhood_family, neighborhood_family, Digraph,
};
pub use error::{Axiom, Result, VcError};
pub use family::{
    cuts_out, is_shattered, left_translate, restriction, sisask_family, FamilyKind, Trace,
    TranslateFamily,
};
pub use experiments::{
    cutout_probability, run_lln, summarize, CutoutEstimate, ExperimentRecord, GroupFamily, Model,
    Summary,
};
pub use group::FiniteGroup;
pub use residues::{
    is_prime, paley_digraph, power_residues, residue_experiment, ResidueRecord, ResidueSet,
};
pub use sampling::{bernoulli_subset, symmetrize, uniform_fixed_size, SeededRng};
pub use subset::Subset;
pub use tiling::{
    abelian_cover_shortcut, greedy_cover, greedy_disjoint_translates, product_set, Cover, Packing,
};
pub use vc::{vc_dim, vc_dim_naive, vc_dim_with, SearchOptions, VcOutcome};
