//! Two-way linear deterministic diamond channel: propagation model, case
//! taxonomy, relay strategies, rank-based verification of the cut-set rate
//! pair, and closed-form Gaussian rate calculators.

pub mod cases;
pub mod cli;
pub mod detmodel;
pub mod gaussian;
pub mod strategies;
pub mod verifier;

#[cfg(test)]
mod tests;
