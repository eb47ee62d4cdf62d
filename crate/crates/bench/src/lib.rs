//! Criterion benchmarks for `sigpart`; see `benches/`.
