//! Criterion benchmarks for the grathz solvers; see `benches/`.
