//! Criterion benchmarks for `primrep`; see `benches/`.
