//! Criterion benchmarks for the qubeam pipeline; see `benches/`.
