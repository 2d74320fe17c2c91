//! Exact Bartholdi and Ihara zeta functions and L-functions of hypergraphs
//! and their permutation-voltage coverings.

pub mod algebra;
pub mod covering;
pub mod cycles;
pub mod fixtures;
pub mod hypergraph;
pub mod random;
pub mod reptheory;
pub mod zeta;
