//! Criterion benchmarks for qdswap; see `benches/`.
