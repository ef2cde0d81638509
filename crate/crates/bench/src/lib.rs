//! Criterion benchmarks for the DP and the kernelization pipelines; run
//! with `cargo bench -p secluded-bench`.
