//! Decomposition-theorem bookkeeping for the maps from toroidal to Satake
//! compactifications of `A_g`, `g ≤ 4`: symplectic local-system arithmetic,
//! the link and Gysin spectral sequences, the stratum ledger, and the input
//! tables it runs on.

pub mod betti;
pub mod check;
pub mod datasets;
pub mod engine;
pub mod error;
pub mod rep;
pub mod report;
pub mod sseq;
pub mod taut;

pub use betti::{BettiValue, BettiWithUnknowns};
pub use datasets::{builtin_registry, parse_dataset, DatasetFile, Registry};
pub use engine::{
    assemble_global, blowup_split, defect, infer_new_systems, make_stratification,
    predicted_contributions, resolve_links, run_genus, run_through, Constraint, GenusReport,
    LedgerEntry, LinkKey, LinkStore, Stratification,
};
pub use error::{Error, Result, Site};
pub use rep::{
    dual, exterior_power_decomposition, partition_normalize, sum_add, sum_min, sum_subtract,
    weyl_dimension, IrrepSum, Partition, Term,
};
pub use report::{render_csv, render_text};
pub use sseq::{
    circle_link_ih, gysin_assemble, invariant_kummer_row, ForcedDifferential, GradedTable,
    GysinPage,
};
pub use taut::{
    pairing_check, taut_basis, taut_graded_dims, GradedDims, PairingReport, TautBasisElement,
};
