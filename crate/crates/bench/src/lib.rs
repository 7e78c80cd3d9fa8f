//! Benchmarks for lca-core live in `benches/`.
