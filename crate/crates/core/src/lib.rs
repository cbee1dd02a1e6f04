//! Sorting labeled points on a circle.
//!
//! `n` labeled points sit on a circle; an arrangement is sorted when the labels
//! read `1, 2, ..., n` clockwise from some starting point. This crate provides
//! a constructive adjacent-swap sorter that never needs more than
//! `floor((n-1)^2/4)` swaps, exact breadth-first oracles for small `n`, the
//! all-swaps sorting time via coset cycle counts, and the number-theoretic and
//! probabilistic bounds on it.

pub mod adjsort;
pub mod allswaps;
pub mod arrangement;
pub mod enumerate;
pub mod error;
pub mod oracle;
pub mod probbound;
pub mod report;
pub mod verify;

pub use adjsort::{f_formula, sort_cyclic, sort_cyclic_detailed};
pub use allswaps::{sort_all_swaps, t_class, Perm};
pub use arrangement::{AdjSwap, Arrangement, GenSwap, Swap, SwapSequence};
pub use error::{Error, Result};
pub use oracle::{Mode, SearchConfig};
