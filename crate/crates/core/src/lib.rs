//! Exact kite/dart Penrose tilings, their tile-adjacency graphs, and fully
//! leafed induced subtrees of those graphs.

pub mod cyclo;
pub mod tiling;
pub mod dualgraph;
pub mod leaf_formula;
pub mod solver;
pub mod structure;

use num_bigint::BigInt;

/// Exact point with arbitrary-precision coefficients.
pub type CycloInt = cyclo::Cyclo<BigInt>;
/// Point with `i64` coefficients; exact while coordinates stay small.
pub type CycloI64 = cyclo::Cyclo<i64>;
pub type ExactPatch = tiling::TilePatch<BigInt>;
pub type FastPatch = tiling::TilePatch<i64>;
pub type ExactTile = tiling::Tile<BigInt>;
pub type FastTile = tiling::Tile<i64>;
