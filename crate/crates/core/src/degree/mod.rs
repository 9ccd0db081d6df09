//! Degree sequences of the iterates: line probes, symbolic oracle, cache.

pub mod cache;
pub mod oracle;
pub mod probe;
pub mod record;

pub use cache::{CacheEntry, DegreeCache};
pub use oracle::symbolic_degree_oracle;
pub use probe::{estimate_delta, probe_degrees, probe_degrees_detailed, FieldConfig, TupleRoute};
pub use record::{DegreeRecord, Method};
