//! Criterion benchmarks for `saddle-core`; see `benches/kernels.rs`.
