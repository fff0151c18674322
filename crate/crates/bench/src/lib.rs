//! Criterion benches for the geometric kernels, the flow step and the
//! minimal family live in `benches/kernels.rs`.
