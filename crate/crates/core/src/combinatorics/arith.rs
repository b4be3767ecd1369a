//! Number-theoretic toolkit over exact rationals.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

fn check_domain(n: i64) -> Result<u64> {
    if n < 1 {
        Err(Error::OutOfDomain(n))
    } else {
        Ok(n as u64)
    }
}

/// Distinct prime factors of `n` with multiplicities, ascending.
fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The Möbius function: 0 unless `n` is square-free, else `(-1)^k` for `k` prime factors.
pub fn mobius(n: i64) -> Result<i64> {
    let n = check_domain(n)?;
    let f = factorize(n);
    if f.iter().any(|&(_, k)| k > 1) {
        return Ok(0);
    }
    Ok(if f.len().is_multiple_of(2) { 1 } else { -1 })
}

/// Euler's totient.
pub fn totient(n: i64) -> Result<u64> {
    let n = check_domain(n)?;
    Ok(factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1)))
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// A function from positive integers to exact rationals.
pub struct ArithmeticFn(Box<dyn Fn(u64) -> BigRational + Send + Sync>);

impl ArithmeticFn {
    pub fn new(f: impl Fn(u64) -> BigRational + Send + Sync + 'static) -> Self {
        Self(Box::new(f))
    }

    pub fn eval(&self, n: i64) -> Result<BigRational> {
        Ok((self.0)(check_domain(n)?))
    }

    /// `one(n) = 1`.
    pub fn one() -> Self {
        Self::new(|_| BigRational::one())
    }

    /// `δ(n) = [n = 1]`.
    pub fn delta() -> Self {
        Self::new(|n| {
            if n == 1 {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    /// `id(n) = n`.
    pub fn id() -> Self {
        Self::new(|n| BigRational::from_integer(BigInt::from(n)))
    }

    /// `inv(n) = 1/n`.
    pub fn inv() -> Self {
        Self::new(|n| BigRational::new(BigInt::one(), BigInt::from(n)))
    }

    pub fn mobius() -> Self {
        Self::new(|n| BigRational::from_integer(BigInt::from(mobius(n as i64).expect("n >= 1"))))
    }

    pub fn totient() -> Self {
        Self::new(|n| BigRational::from_integer(BigInt::from(totient(n as i64).expect("n >= 1"))))
    }
}

/// `(f ∗ g)(n) = Σ_{d|n} f(d)·g(n/d)`.
pub fn dirichlet(f: &ArithmeticFn, g: &ArithmeticFn, n: i64) -> Result<BigRational> {
    let n = check_domain(n)?;
    Ok(divisors(n)
        .into_iter()
        .map(|d| (f.0)(d) * (g.0)(n / d))
        .fold(BigRational::zero(), |acc, t| acc + t))
}

/// Lucas numbers with `L(1) = 1`, `L(2) = 3`: binary necklaces of length `n`
/// without the circular factor `00`.
pub fn lucas(n: i64) -> Result<BigUint> {
    let n = check_domain(n)?;
    let (mut a, mut b) = (BigUint::from(2u8), BigUint::one());
    for _ in 1..n {
        let c = &a + &b;
        a = core::mem::replace(&mut b, c);
    }
    Ok(b)
}

/// Perrin numbers with `P(0) = 3`, `P(1) = 0`, `P(2) = 2`: binary necklaces
/// of length `n` without the circular factors `00` and `111`.
pub fn perrin(n: i64) -> Result<BigUint> {
    if n < 0 {
        return Err(Error::OutOfDomain(n));
    }
    let mut w = [BigUint::from(3u8), BigUint::zero(), BigUint::from(2u8)];
    if n < 3 {
        return Ok(w[n as usize].clone());
    }
    for _ in 3..=n {
        let next = &w[0] + &w[1];
        w.rotate_left(1);
        w[2] = next;
    }
    Ok(w[2].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn mobius_values() {
        let got: Vec<i64> = [1, 2, 3, 4, 5, 6, 8, 30]
            .iter()
            .map(|&n| mobius(n).unwrap())
            .collect();
        assert_eq!(got, [1, -1, -1, 0, -1, 1, 0, -1]);
        assert_eq!(mobius(0), Err(Error::OutOfDomain(0)));
    }

    #[test]
    fn totient_values() {
        let got: Vec<u64> = [1, 6, 12, 7, 9]
            .iter()
            .map(|&n| totient(n).unwrap())
            .collect();
        assert_eq!(got, [1, 2, 4, 6, 6]);
        assert!(totient(-3).is_err());
    }

    #[test]
    fn divisors_ascend() {
        assert_eq!(divisors(12), [1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), [1]);
        assert_eq!(divisors(49), [1, 7, 49]);
    }

    #[test]
    fn one_convolved_with_mobius_is_delta() {
        for (n, want) in [(1, 1), (2, 0), (12, 0), (30, 0)] {
            assert_eq!(
                dirichlet(&ArithmeticFn::one(), &ArithmeticFn::mobius(), n).unwrap(),
                int(want)
            );
        }
    }

    #[test]
    fn totient_identities() {
        for n in 1..=40 {
            // φ ∗ one = id and μ ∗ id = φ
            assert_eq!(
                dirichlet(&ArithmeticFn::totient(), &ArithmeticFn::one(), n).unwrap(),
                int(n)
            );
            assert_eq!(
                dirichlet(&ArithmeticFn::mobius(), &ArithmeticFn::id(), n).unwrap(),
                ArithmeticFn::totient().eval(n).unwrap()
            );
        }
        assert_eq!(ArithmeticFn::delta().eval(1).unwrap(), int(1));
        assert_eq!(
            ArithmeticFn::inv().eval(4).unwrap(),
            BigRational::new(1.into(), 4.into())
        );
    }

    #[test]
    fn recurrences() {
        let l: Vec<u64> = (1..=8)
            .map(|n| lucas(n).unwrap().try_into().unwrap())
            .collect();
        assert_eq!(l, [1, 3, 4, 7, 11, 18, 29, 47]);
        let p: Vec<u64> = (0..=10)
            .map(|n| perrin(n).unwrap().try_into().unwrap())
            .collect();
        assert_eq!(p, [3, 0, 2, 3, 2, 5, 5, 7, 10, 12, 17]);
        assert!(lucas(0).is_err());
        assert!(perrin(-1).is_err());
    }
}
