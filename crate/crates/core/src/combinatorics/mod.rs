//! Exact number theory and the closed-form attractor counts.

mod arith;
mod census;
mod quantities;

pub use arith::{dirichlet, divisors, lucas, mobius, perrin, totient, ArithmeticFn};
pub use census::{compare_x, periods_divide, PeriodCensus, XComparison};
pub use quantities::{
    bounds_excluded, check_bounds, count_x, order_of, printed_sums, quantity_table, rho,
    unreachable_count, BoundsVerdict, PrintedQuantity, PrintedSum, QuantityRow, QuantityTable,
};
