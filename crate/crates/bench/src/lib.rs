//! Criterion benchmarks for specdyn-core live in `benches/`.
