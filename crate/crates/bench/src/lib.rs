//! Criterion benchmarks for the rule net and dialog turns live under `benches/`.
