//! Input tables: the `.ihdat` format, the expression syntax, and the
//! builtin registry.

pub mod expr;
pub mod file;
pub mod registry;

pub use expr::{parse_expr, parse_partition, ExprError};
pub use file::{parse_dataset, DatasetFile, Section, SectionBody, SectionKind};
pub use registry::{builtin_registry, Registry};
