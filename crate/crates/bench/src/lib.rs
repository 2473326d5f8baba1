//! Criterion benchmarks for `tfcluster`; see `benches/main.rs`.
