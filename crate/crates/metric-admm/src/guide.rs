//! The book chapters under `book/src/` double as documentation tests: every
//! fenced Rust snippet in the guide compiles and runs under
//! `cargo test --doc`, which keeps the prose and the API in sync.

#[doc = include_str!("../../../book/src/overview.md")]
pub mod overview {}

#[doc = include_str!("../../../book/src/symmetric-kernel.md")]
pub mod symmetric_kernel {}

#[doc = include_str!("../../../book/src/metric.md")]
pub mod metric_chapter {}

#[doc = include_str!("../../../book/src/parameter-tuning.md")]
pub mod parameter_tuning {}

#[doc = include_str!("../../../book/src/solvers.md")]
pub mod solvers {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
