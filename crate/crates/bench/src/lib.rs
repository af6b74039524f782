//! Criterion benchmarks for the homology pipeline; see `benches/`.
