//! Inputs shared by the benchmarks.

/// `(g, p)` pairs with full certificates, small enough to iterate on.
pub const CERTIFICATE_PAIRS: [(u32, u64); 4] = [(2, 5), (3, 5), (4, 3), (7, 2)];

/// `(p, d)` pairs for normalizer construction.
pub const NORMALIZER_PAIRS: [(u64, u32); 4] = [(3, 2), (5, 2), (7, 3), (2, 4)];
