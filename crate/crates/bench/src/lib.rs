//! Benchmark-only crate; see `benches/trimmer.rs`.
