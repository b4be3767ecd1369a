//! Period statistics read off an enumerated parallel transition graph.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::dynamics::{attractors, build_transition_graph, AttractorReport, Caps, UpdateMode};
use crate::error::Result;
use crate::network::BooleanNetwork;
use crate::topology::Descriptor;

use super::arith::divisors;
use super::quantities::{count_x, order_of, QuantityTable};

/// Attractor periods of a deterministic dynamics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodCensus {
    /// Period → number of attractors with that minimal period.
    pub attractors_by_period: BTreeMap<u64, u64>,
    pub recurring: u64,
    pub configurations: u64,
    pub convergence_time: usize,
}

impl PeriodCensus {
    /// Reads periods from a deterministic-mode report.
    pub fn from_report(report: &AttractorReport) -> Self {
        let mut attractors_by_period = BTreeMap::new();
        for a in &report.attractors {
            let p = a.period.expect("deterministic report") as u64;
            *attractors_by_period.entry(p).or_insert(0) += 1;
        }
        Self {
            attractors_by_period,
            recurring: report.recurring_count() as u64,
            configurations: 1 << report.n,
            convergence_time: report.convergence_time,
        }
    }

    /// Enumerates the parallel dynamics of `net`.
    pub fn of_parallel(net: &BooleanNetwork, caps: Caps) -> Result<Self> {
        let tg = build_transition_graph(net, &UpdateMode::Parallel, caps)?;
        Ok(Self::from_report(&attractors(&tg)))
    }

    /// Least common multiple of all attractor periods.
    pub fn order(&self) -> u64 {
        self.attractors_by_period
            .keys()
            .fold(1, |acc, &p| acc.lcm(&p))
    }

    /// Recurring configurations whose period divides `p`.
    pub fn x(&self, p: u64) -> u64 {
        self.attractors_by_period
            .iter()
            .filter(|(&q, _)| p.is_multiple_of(q))
            .map(|(&q, &k)| q * k)
            .sum()
    }

    /// Recurring configurations of minimal period `p`.
    pub fn x_tilde(&self, p: u64) -> u64 {
        p * self.a(p)
    }

    pub fn a(&self, p: u64) -> u64 {
        self.attractors_by_period.get(&p).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.attractors_by_period.values().sum()
    }

    /// Table over the divisors of `omega`, counted directly.
    pub fn table(&self, descriptor: Descriptor, omega: u64) -> Result<QuantityTable> {
        let x_tilde: Vec<BigUint> = divisors(omega)
            .into_iter()
            .map(|p| BigUint::from(self.x_tilde(p)))
            .collect();
        let mut t = QuantityTable::from_minimal_counts(descriptor, omega, &x_tilde)?;
        // periods not dividing ω would escape the rows; count them in T
        t.total = BigUint::from(self.total());
        Ok(t)
    }
}

/// One divisor of the mixed order, formula next to enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XComparison {
    pub p: u64,
    pub formula: BigUint,
    pub enumerated: BigUint,
}

impl XComparison {
    pub fn matches(&self) -> bool {
        self.formula == self.enumerated
    }
}

/// `X(p)` from the closed form and from enumeration, for every `p | ω`.
pub fn compare_x(desc: &Descriptor, census: &PeriodCensus) -> Vec<XComparison> {
    divisors(order_of(desc))
        .into_iter()
        .map(|p| XComparison {
            p,
            formula: count_x(desc, p).expect("p divides ω"),
            enumerated: BigUint::from(census.x(p)),
        })
        .collect()
}

/// Whether every period divides `ω` (so `X(ω)` is the recurring count).
pub fn periods_divide(census: &PeriodCensus, omega: u64) -> bool {
    census
        .attractors_by_period
        .keys()
        .all(|&p| omega.is_multiple_of(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Sign;
    use crate::topology::{canonical_cycle, CycleDescriptor};

    #[test]
    fn census_of_the_positive_three_cycle() {
        let c = CycleDescriptor::new(3, Sign::Positive).unwrap();
        let census = PeriodCensus::of_parallel(&canonical_cycle(c), Caps::default()).unwrap();
        assert_eq!(census.order(), 3);
        assert_eq!((census.x(1), census.x(3)), (2, 8));
        assert_eq!(census.total(), 4);
        assert_eq!(census.convergence_time, 0);
        let d: Descriptor = c.into();
        assert_eq!(
            census.table(d, 3).unwrap(),
            crate::combinatorics::quantity_table(&d).unwrap()
        );
    }
}
