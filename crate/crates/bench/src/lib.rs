//! Criterion benchmarks for `tropkp-core`; the benchmark bodies live in `benches/`.
