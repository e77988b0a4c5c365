//! Benchmarks for `hom-cavity` live in `benches/`.
