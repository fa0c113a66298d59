//! Benchmark-only crate; see `benches/core_routines.rs`.
