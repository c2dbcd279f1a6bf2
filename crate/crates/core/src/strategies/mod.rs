//! Transmit placements, relay strategies 0 to 8, combined strategies for
//! tuples where both directions need modified relays, and the selection
//! tables.
//!
//! Strategies 1 to 8 are written for a tuple whose special direction is
//! the forward one in its Type 1 orientation. Other tuples are mapped to
//! that frame by exchanging the relays and/or the directions, and the
//! resulting maps are exchanged back.

mod plan;
mod relay;
mod select;

pub use plan::{plan_one_way, transmit_plan, TransmitPlan};
pub use relay::{
    block_swap, build_strategy, greedy_repeats, relay_strategy_matrix, strategy2_repeats, strategy6_repeats, Adjustment,
    Positional, RelayStrategy, StrategyError, StrategyId,
};
pub use select::{
    candidates, combined_strategy, combined_with, select_strategies, table_choice, Candidate, StrategyAssignment, Tier,
};
