//! Contextual pattern matching.
//!
//! Given a pattern `P` of length `m` and a context length `ell`, report
//! one suffix-array range for every distinct string `XPY` with
//! `|X| = |Y| = ell` occurring in a text, where the text is thought of as
//! padded with `ell` sentinels on each side. Each range also yields the
//! number of occurrences of its context and, on demand, their positions.
//!
//! ```
//! use cpm_core::{CpmIndex, MappingStrategy, QueryStats, Text};
//!
//! let ix = CpmIndex::build(Text::from_bytes(b"alabaralalabarda").unwrap()).unwrap();
//! let mut stats = QueryStats::default();
//! let matches = ix.query_bytes(b"a", 1, MappingStrategy::PsvNsv, &mut stats).unwrap();
//! assert_eq!(matches.len(), 6);
//! assert_eq!(matches.iter().map(|m| m.count).sum::<usize>(), 8);
//! ```

pub mod corpus;
mod error;
pub mod index;
pub mod oracle;
pub mod persist;
pub mod query;
pub mod rmq;
pub mod suffix;
pub mod synth;

pub use corpus::{Alphabet, Symbol, Text, SENTINEL};
pub use error::{Error, Result};
pub use index::{CpmIndex, RunStats};
pub use oracle::{oracle_contexts, OracleResult};
pub use query::{ContextAccess, ContextMatch, MappingStrategy, QueryTrace};
pub use rmq::{Interval, QueryStats, RangeQueries, SparseTable};
pub use suffix::SuffixEnsemble;
