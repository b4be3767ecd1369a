//! Closed-form attractor combinatorics of parallel cycles and double-cycles.

use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::digraph::Sign;
use crate::error::{Error, Result};
use crate::topology::{Descriptor, DoubleSigns};

use super::arith::{divisors, lucas, mobius, perrin, totient};

/// Order `ω`: the least common period of all recurring configurations.
pub fn order_of(desc: &Descriptor) -> u64 {
    match desc {
        Descriptor::Cycle(c) => match c.sign {
            Sign::Positive => c.n as u64,
            Sign::Negative => 2 * c.n as u64,
        },
        Descriptor::DoubleCycle(d) => {
            let (l, r, delta) = (d.l as u64, d.r as u64, d.delta() as u64);
            match d.signs {
                DoubleSigns::Positive => delta,
                DoubleSigns::Mixed => r,
                DoubleSigns::Negative if (l + r) / delta == 4 => (l + r) / 2,
                DoubleSigns::Negative => l + r,
            }
        }
    }
}

fn pow2(e: u64) -> BigUint {
    BigUint::one() << e as usize
}

/// `X(p)`: configurations whose period divides `p`, for `p | ω`.
pub fn count_x(desc: &Descriptor, p: u64) -> Result<BigUint> {
    let omega = order_of(desc);
    if p == 0 || !omega.is_multiple_of(p) {
        return Err(Error::NotADivisor { p, omega });
    }
    Ok(count_x_unchecked(desc, p))
}

fn count_x_unchecked(desc: &Descriptor, p: u64) -> BigUint {
    match desc {
        Descriptor::Cycle(c) => match c.sign {
            Sign::Positive => pow2(p),
            Sign::Negative => {
                if (c.n as u64).is_multiple_of(p) {
                    BigUint::zero()
                } else {
                    pow2(p / 2)
                }
            }
        },
        Descriptor::DoubleCycle(d) => {
            let delta_p = d.delta_p(p as usize) as u64;
            let base = p / delta_p;
            match d.signs {
                DoubleSigns::Positive => pow2(p),
                DoubleSigns::Mixed => {
                    if (d.l as u64).is_multiple_of(p) {
                        BigUint::zero()
                    } else {
                        lucas(base as i64).expect("p >= 1").pow(delta_p as u32)
                    }
                }
                DoubleSigns::Negative => {
                    if (d.delta() as u64).is_multiple_of(p) {
                        BigUint::zero()
                    } else {
                        perrin(base as i64).expect("p >= 1").pow(delta_p as u32)
                    }
                }
            }
        }
    }
}

/// One divisor's row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantityRow {
    pub p: u64,
    /// Configurations whose period divides `p`.
    pub x: BigUint,
    /// Configurations of minimal period `p`.
    pub x_tilde: BigUint,
    /// Attractors of period `p`.
    pub a: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantityTable {
    pub descriptor: Descriptor,
    pub omega: u64,
    /// One row per divisor of `ω`, ascending.
    pub rows: Vec<QuantityRow>,
    pub total: BigUint,
}

impl QuantityTable {
    /// Assembles a table from minimal-period counts; `X` is their divisor sum.
    pub fn from_minimal_counts(
        descriptor: Descriptor,
        omega: u64,
        x_tilde: &[BigUint],
    ) -> Result<Self> {
        let divs = divisors(omega);
        assert_eq!(divs.len(), x_tilde.len(), "one count per divisor");
        let mut rows = Vec::with_capacity(divs.len());
        for (k, &p) in divs.iter().enumerate() {
            let x = divs
                .iter()
                .zip(x_tilde)
                .filter(|(&d, _)| p % d == 0)
                .fold(BigUint::zero(), |acc, (_, xt)| acc + xt);
            let (a, rem) = x_tilde[k].div_rem(&BigUint::from(p));
            if !rem.is_zero() {
                return Err(Error::IntegralityViolation { p });
            }
            rows.push(QuantityRow {
                p,
                x,
                x_tilde: x_tilde[k].clone(),
                a,
            });
        }
        let total = rows.iter().fold(BigUint::zero(), |acc, r| acc + &r.a);
        Ok(Self {
            descriptor,
            omega,
            rows,
            total,
        })
    }

    pub fn row(&self, p: u64) -> Option<&QuantityRow> {
        self.rows.iter().find(|r| r.p == p)
    }

    /// `X(ω)`, the number of recurring configurations.
    pub fn recurring(&self) -> &BigUint {
        &self.rows.last().expect("ω has at least one divisor").x
    }

    /// `Σ p·A(p) / T(ω)`.
    pub fn mean_period(&self) -> BigRational {
        let weighted = self
            .rows
            .iter()
            .fold(BigUint::zero(), |acc, r| acc + &r.a * r.p);
        if self.total.is_zero() {
            return BigRational::zero();
        }
        BigRational::new(BigInt::from(weighted), BigInt::from(self.total.clone()))
    }
}

/// The quantity table of a descriptor: `X` from the closed form, then
/// `X̃ = X ∗ μ`, `A = X̃ / p` and `T = Σ A` restricted to divisors of `ω`.
pub fn quantity_table(desc: &Descriptor) -> Result<QuantityTable> {
    let omega = order_of(desc);
    let divs = divisors(omega);
    let xs: Vec<BigInt> = divs
        .iter()
        .map(|&p| BigInt::from(count_x_unchecked(desc, p)))
        .collect();
    let mut x_tilde = Vec::with_capacity(divs.len());
    for &p in &divs {
        let v = divs
            .iter()
            .zip(&xs)
            .filter(|(&d, _)| p % d == 0)
            .fold(BigInt::zero(), |acc, (&d, x)| {
                acc + x * mobius((p / d) as i64).expect("p/d >= 1")
            });
        if v.is_negative() {
            return Err(Error::IntegralityViolation { p });
        }
        x_tilde.push(v.to_biguint().expect("nonnegative"));
    }
    QuantityTable::from_minimal_counts(*desc, omega, &x_tilde)
}

/// Outcome of the attractor-count and mean-period bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsVerdict {
    /// `X(ω)/ω`.
    pub lower: BigRational,
    pub total: BigRational,
    /// `2·X(ω)/ω`.
    pub upper: BigRational,
    pub mean_period: BigRational,
    /// `ω/2`.
    pub half_omega: BigRational,
}

impl BoundsVerdict {
    pub fn total_within(&self) -> bool {
        self.lower <= self.total && self.total <= self.upper
    }

    pub fn mean_large(&self) -> bool {
        self.mean_period >= self.half_omega
    }

    pub fn passed(&self) -> bool {
        self.total_within() && self.mean_large()
    }
}

/// Whether the bounds exclude this descriptor (`D_{5,1}^{−,−}`, `D_{1,5}^{−,−}`).
pub fn bounds_excluded(desc: &Descriptor) -> bool {
    matches!(desc, Descriptor::DoubleCycle(d)
        if d.signs == DoubleSigns::Negative && matches!((d.l, d.r), (5, 1) | (1, 5)))
}

/// `X(ω)/ω ≤ T(ω) ≤ 2·X(ω)/ω` and `Σ p·A(p)/T(ω) ≥ ω/2`, in exact rationals.
pub fn check_bounds(table: &QuantityTable) -> Result<BoundsVerdict> {
    if bounds_excluded(&table.descriptor) {
        return Err(Error::ExcludedDescriptor(table.descriptor.to_string()));
    }
    let omega = BigInt::from(table.omega);
    let x = BigInt::from(table.recurring().clone());
    let lower = BigRational::new(x.clone(), omega.clone());
    Ok(BoundsVerdict {
        upper: &lower * BigRational::from_integer(BigInt::from(2)),
        lower,
        total: BigRational::from_integer(BigInt::from(table.total.clone())),
        mean_period: table.mean_period(),
        half_omega: BigRational::new(omega, BigInt::from(2)),
    })
}

/// `ρ(k)`: 0 when `k = 0` or `k` is odd, 1 otherwise.
pub fn rho(k: u64) -> u64 {
    u64::from(k != 0 && k.is_multiple_of(2))
}

/// Size of the non-recurring set of the asynchronous `D_{l,r}^{−,−}`:
/// `ρ(l−1)·2^{r−1} + ρ(r−1)·2^{l−1}`.
pub fn unreachable_count(l: u64, r: u64) -> Result<BigUint> {
    if l == 0 || r == 0 {
        return Err(Error::InvalidDescriptor(alloc::format!(
            "double-cycle sizes {l},{r}"
        )));
    }
    Ok(pow2(r - 1) * rho(l - 1) + pow2(l - 1) * rho(r - 1))
}

/// A value from the expanded sums printed alongside the closed forms,
/// next to the value derived by convolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrintedSum {
    pub quantity: PrintedQuantity,
    pub p: u64,
    pub printed: BigRational,
    pub derived: BigRational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrintedQuantity {
    XTilde,
    Total,
}

impl PrintedQuantity {
    pub fn name(self) -> &'static str {
        match self {
            PrintedQuantity::XTilde => "X~",
            PrintedQuantity::Total => "T",
        }
    }
}

impl PrintedSum {
    pub fn matches(&self) -> bool {
        self.printed == self.derived
    }
}

fn rat(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

type Term = alloc::boxed::Box<dyn Fn(u64) -> BigUint>;
type Filter = alloc::boxed::Box<dyn Fn(u64) -> bool>;

/// Evaluates the expanded per-case sums for `X̃(p)` and `T(ω)` as printed,
/// for comparison with the convolution route. `derived` comes from
/// `X ∗ μ` and `Σ A` computed without the integrality requirement.
pub fn printed_sums(desc: &Descriptor) -> Vec<PrintedSum> {
    let omega = order_of(desc);
    let divs = divisors(omega);
    let mu = |k: u64| mobius(k as i64).expect("k >= 1");
    let phi = |k: u64| totient(k as i64).expect("k >= 1");
    let derived_tilde = |p: u64| -> BigRational {
        divisors(p).into_iter().fold(BigRational::zero(), |acc, d| {
            acc + rat(BigInt::from(count_x_unchecked(desc, d)) * mu(p / d))
        })
    };
    let derived_total = divs.iter().fold(BigRational::zero(), |acc, &p| {
        acc + derived_tilde(p) / rat(p)
    });

    // the closed form under the sum, by divisor, with its divisor filter
    let (term, filter, t_base): (Term, Filter, u64) = match desc {
        Descriptor::Cycle(c) if c.sign == Sign::Positive => (
            alloc::boxed::Box::new(pow2),
            alloc::boxed::Box::new(|_| true),
            c.n as u64,
        ),
        Descriptor::DoubleCycle(d) if d.signs == DoubleSigns::Positive => (
            alloc::boxed::Box::new(pow2),
            alloc::boxed::Box::new(|_| true),
            d.delta() as u64,
        ),
        Descriptor::Cycle(c) => {
            let n = c.n as u64;
            return printed_negative_cycle(n, &divs, &derived_tilde, &derived_total);
        }
        Descriptor::DoubleCycle(d) => {
            let d = *d;
            let filter_mod = match d.signs {
                DoubleSigns::Mixed => d.l as u64,
                _ => d.delta() as u64,
            };
            let mixed = d.signs == DoubleSigns::Mixed;
            (
                alloc::boxed::Box::new(move |k: u64| {
                    let dk = d.delta_p(k as usize) as u64;
                    let base = (k / dk) as i64;
                    let v = if mixed { lucas(base) } else { perrin(base) };
                    v.expect("k >= 1").pow(dk as u32)
                }),
                alloc::boxed::Box::new(move |k: u64| filter_mod % k != 0),
                omega,
            )
        }
    };
    let mut out: Vec<PrintedSum> = divs
        .iter()
        .map(|&p| {
            let printed = divisors(p)
                .into_iter()
                .filter(|&d| filter(d))
                .fold(BigRational::zero(), |acc, d| {
                    acc + rat(BigInt::from(term(d)) * mu(p / d))
                });
            PrintedSum {
                quantity: PrintedQuantity::XTilde,
                p,
                printed,
                derived: derived_tilde(p),
            }
        })
        .collect();
    let printed_total = divisors(t_base)
        .into_iter()
        .filter(|&d| filter(d))
        .fold(BigRational::zero(), |acc, d| {
            acc + rat(BigInt::from(term(d)) * phi(t_base / d))
        })
        / rat(t_base);
    out.push(PrintedSum {
        quantity: PrintedQuantity::Total,
        p: omega,
        printed: printed_total,
        derived: derived_total,
    });
    out
}

/// `X̃^−(p) = Σ_{k|p, k odd} μ(k)·2^{p/2k}` and
/// `T^−(ω) = 1/2n · Σ_{k|2n, k odd} φ(k)·2^{n/2k}`, exponents as printed
/// (rational exponents make the term irrational, recorded as zero).
fn printed_negative_cycle(
    n: u64,
    divs: &[u64],
    derived_tilde: &dyn Fn(u64) -> BigRational,
    derived_total: &BigRational,
) -> Vec<PrintedSum> {
    let pow_half = |num: u64, den: u64| -> Option<BigUint> {
        num.is_multiple_of(den).then(|| pow2(num / den))
    };
    let mut out: Vec<PrintedSum> = divs
        .iter()
        .map(|&p| {
            let printed = divisors(p).into_iter().filter(|k| k % 2 == 1).fold(
                BigRational::zero(),
                |acc, k| match pow_half(p, 2 * k) {
                    Some(v) => acc + rat(BigInt::from(v) * mobius(k as i64).expect("k >= 1")),
                    None => acc,
                },
            );
            PrintedSum {
                quantity: PrintedQuantity::XTilde,
                p,
                printed,
                derived: derived_tilde(p),
            }
        })
        .collect();
    let printed_total =
        divisors(2 * n)
            .into_iter()
            .filter(|k| k % 2 == 1)
            .fold(BigRational::zero(), |acc, k| match pow_half(n, 2 * k) {
                Some(v) => acc + rat(BigInt::from(v) * totient(k as i64).expect("k >= 1")),
                None => acc,
            })
            / rat(2 * n);
    out.push(PrintedSum {
        quantity: PrintedQuantity::Total,
        p: 2 * n,
        printed: printed_total,
        derived: derived_total.clone(),
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{CycleDescriptor, DoubleCycleDescriptor, Junction};

    fn cycle(n: usize, sign: Sign) -> Descriptor {
        CycleDescriptor::new(n, sign).unwrap().into()
    }

    fn double(l: usize, r: usize, signs: DoubleSigns) -> Descriptor {
        DoubleCycleDescriptor::new(l, r, signs, Junction::Or)
            .unwrap()
            .into()
    }

    fn nums(v: impl Iterator<Item = BigUint>) -> Vec<u64> {
        v.map(|b| u64::try_from(b).unwrap()).collect()
    }

    #[test]
    fn orders() {
        assert_eq!(order_of(&cycle(3, Sign::Negative)), 6);
        assert_eq!(order_of(&double(2, 2, DoubleSigns::Positive)), 2);
        assert_eq!(order_of(&double(1, 3, DoubleSigns::Negative)), 2);
        assert_eq!(order_of(&double(2, 3, DoubleSigns::Negative)), 5);
        assert_eq!(order_of(&double(4, 6, DoubleSigns::Mixed)), 6);
    }

    #[test]
    fn x_values() {
        assert_eq!(
            count_x(&cycle(3, Sign::Negative), 6).unwrap(),
            BigUint::from(8u8)
        );
        assert_eq!(
            count_x(&double(2, 2, DoubleSigns::Negative), 4).unwrap(),
            BigUint::from(4u8)
        );
        assert_eq!(
            count_x(&double(1, 3, DoubleSigns::Negative), 2).unwrap(),
            BigUint::from(2u8)
        );
        assert_eq!(
            count_x(&cycle(3, Sign::Positive), 2),
            Err(Error::NotADivisor { p: 2, omega: 3 })
        );
    }

    #[test]
    fn positive_cycle_of_three() {
        let t = quantity_table(&cycle(3, Sign::Positive)).unwrap();
        assert_eq!(t.omega, 3);
        assert_eq!(nums(t.rows.iter().map(|r| r.x.clone())), [2, 8]);
        assert_eq!(nums(t.rows.iter().map(|r| r.x_tilde.clone())), [2, 6]);
        assert_eq!(nums(t.rows.iter().map(|r| r.a.clone())), [2, 2]);
        assert_eq!(t.total, BigUint::from(4u8));
        assert_eq!(t.mean_period(), BigRational::from_integer(2.into()));
    }

    #[test]
    fn negative_cycle_of_three() {
        let t = quantity_table(&cycle(3, Sign::Negative)).unwrap();
        assert_eq!(t.omega, 6);
        assert_eq!(nums(t.rows.iter().map(|r| r.x.clone())), [0, 2, 0, 8]);
        assert_eq!(nums(t.rows.iter().map(|r| r.x_tilde.clone())), [0, 2, 0, 6]);
        assert_eq!(nums(t.rows.iter().map(|r| r.a.clone())), [0, 1, 0, 1]);
        assert_eq!(t.total, BigUint::from(2u8));
    }

    #[test]
    fn negative_double_cycle_of_two_and_two() {
        let t = quantity_table(&double(2, 2, DoubleSigns::Negative)).unwrap();
        assert_eq!(t.omega, 4);
        assert_eq!(nums(t.rows.iter().map(|r| r.x.clone())), [0, 0, 4]);
        assert_eq!(t.total, BigUint::one());
    }

    #[test]
    fn positive_double_cycles_reduce_to_cycles() {
        for l in 1..=8 {
            for r in 1..=8 {
                let d = quantity_table(&double(l, r, DoubleSigns::Positive)).unwrap();
                let c = quantity_table(&cycle(num_integer::gcd(l, r), Sign::Positive)).unwrap();
                assert_eq!((d.omega, &d.rows, &d.total), (c.omega, &c.rows, &c.total));
            }
        }
    }

    #[test]
    fn non_integral_attractor_counts_are_surfaced() {
        assert_eq!(
            quantity_table(&double(1, 3, DoubleSigns::Mixed)),
            Err(Error::IntegralityViolation { p: 3 })
        );
    }

    #[test]
    fn bounds_on_small_cycles() {
        let v = check_bounds(&quantity_table(&cycle(3, Sign::Positive)).unwrap()).unwrap();
        assert_eq!(v.lower, BigRational::new(8.into(), 3.into()));
        assert_eq!(v.upper, BigRational::new(16.into(), 3.into()));
        assert!(v.passed());
        let v = check_bounds(&quantity_table(&cycle(3, Sign::Negative)).unwrap()).unwrap();
        assert_eq!(v.mean_period, BigRational::from_integer(4.into()));
        assert!(v.passed());
        let t = quantity_table(&double(5, 1, DoubleSigns::Negative)).unwrap();
        assert!(matches!(
            check_bounds(&t),
            Err(Error::ExcludedDescriptor(_))
        ));
    }

    #[test]
    fn unreachable_counts() {
        assert_eq!(unreachable_count(2, 2).unwrap(), BigUint::zero());
        assert_eq!(unreachable_count(1, 3).unwrap(), BigUint::one());
        assert_eq!(unreachable_count(3, 3).unwrap(), BigUint::from(8u8));
        assert!(unreachable_count(0, 3).is_err());
    }

    #[test]
    fn printed_sums_for_positive_cycles_agree() {
        for n in 1..=12 {
            assert!(printed_sums(&cycle(n, Sign::Positive))
                .iter()
                .all(PrintedSum::matches));
        }
    }

    #[test]
    fn printed_negative_total_disagrees_at_three() {
        let sums = printed_sums(&cycle(3, Sign::Negative));
        let total = sums
            .iter()
            .find(|s| s.quantity == PrintedQuantity::Total)
            .unwrap();
        assert_eq!(total.derived, BigRational::from_integer(2.into()));
        assert!(!total.matches());
        assert!(sums
            .iter()
            .filter(|s| s.quantity == PrintedQuantity::XTilde)
            .all(PrintedSum::matches));
    }
}
