//! Exact Bernoulli numbers, Wilson quotients and the right-hand side of
//! Carlitz's refinement of his congruence modulo `p^(k+2)`.

use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;
use crate::exact_eval::binom;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BernoulliError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p must be odd, got {0}")]
    EvenPrime(u64),
    #[error("m must be a positive even integer, got {0}")]
    BadIndex(u64),
    #[error("p - 1 = {} divides m = {m}", .p - 1)]
    Divisible { m: u64, p: u64 },
    #[error("s must be positive")]
    ZeroS,
    #[error("Bernoulli index {needed} exceeds the supported range")]
    TooLarge { needed: u64 },
    #[error("denominator of {value} is divisible by {p}")]
    NotIntegral { value: String, p: u64 },
}

/// `B_0, ..., B_n` as reduced rationals, with `B_1 = -1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliTable {
    entries: Vec<BigRational>,
}

impl BernoulliTable {
    /// Solves `sum_{j=0}^{m} C(m+1, j) B_j = 0` for each `B_m` in turn.
    pub fn compute(n: usize) -> Self {
        let mut entries: Vec<BigRational> = Vec::with_capacity(n + 1);
        entries.push(BigRational::one());
        for m in 1..=n {
            if m >= 3 && m % 2 == 1 {
                entries.push(BigRational::zero());
                continue;
            }
            let mut acc = BigRational::zero();
            for (j, b) in entries.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                acc += b * BigRational::from_integer(BigInt::from(binom(m as u64 + 1, j as i64)));
            }
            entries.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        BernoulliTable { entries }
    }

    pub fn max_index(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn get(&self, m: usize) -> &BigRational {
        &self.entries[m]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }
}

static TABLE: OnceLock<Mutex<Arc<BernoulliTable>>> = OnceLock::new();

/// Shared table covering at least `B_0..B_n`.
///
/// Built once and grown on demand; readers always get a complete table.
pub fn bernoulli_table(n: usize) -> Arc<BernoulliTable> {
    let slot = TABLE.get_or_init(|| Mutex::new(Arc::new(BernoulliTable::compute(0))));
    let mut guard = slot.lock().unwrap_or_else(|e| e.into_inner());
    if guard.max_index() < n {
        *guard = Arc::new(BernoulliTable::compute(n.max(2 * guard.max_index())));
    }
    Arc::clone(&guard)
}

/// `((p - 1)! + 1) / p`.
pub fn wilson_quotient(p: u64) -> Result<BigUint, BernoulliError> {
    if !arith::is_prime(p) {
        return Err(BernoulliError::NotPrime(p));
    }
    let fact: BigUint = (1..p).map(BigUint::from).product();
    let (quot, rem) = (fact + 1u32).div_rem(&BigUint::from(p));
    debug_assert!(rem.is_zero());
    Ok(quot)
}

/// Residue of a rational modulo `p`, when its denominator is prime to `p`.
pub fn rational_mod_p(x: &BigRational, p: u64) -> Option<u64> {
    let m = BigInt::from(p);
    let den = x.denom().mod_floor(&m).to_u64()?;
    let num = x.numer().mod_floor(&m).to_u64()?;
    Some(arith::mul_mod(num, arith::inv_mod(den, p)?, p))
}

/// `B_m / m mod p`, for even `m` with `(p - 1)` not dividing `m`.
pub fn b_div_m_mod_p(m: u64, p: u64) -> Result<u64, BernoulliError> {
    if !arith::is_prime(p) {
        return Err(BernoulliError::NotPrime(p));
    }
    if p == 2 {
        return Err(BernoulliError::EvenPrime(p));
    }
    if m == 0 || m % 2 == 1 {
        return Err(BernoulliError::BadIndex(m));
    }
    if m.is_multiple_of(p - 1) {
        return Err(BernoulliError::Divisible { m, p });
    }
    let idx = usize::try_from(m).map_err(|_| BernoulliError::TooLarge { needed: m })?;
    let table = bernoulli_table(idx);
    let value = table.get(idx) / BigRational::from_integer(BigInt::from(m));
    rational_mod_p(&value, p).ok_or(BernoulliError::NotIntegral {
        value: value.to_string(),
        p,
    })
}

/// Inputs to [`sharper_rhs`]; `delta_s` records whether `(p - 1) | (s - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SharperParams {
    p: u64,
    s: u64,
    k: u32,
    delta_s: bool,
}

impl SharperParams {
    pub fn new(p: u64, s: u64, k: u32) -> Result<Self, BernoulliError> {
        if !arith::is_prime(p) {
            return Err(BernoulliError::NotPrime(p));
        }
        if p == 2 {
            return Err(BernoulliError::EvenPrime(p));
        }
        if s == 0 {
            return Err(BernoulliError::ZeroS);
        }
        Ok(SharperParams {
            p,
            s,
            k,
            delta_s: (s - 1).is_multiple_of(p - 1),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn delta_s(&self) -> bool {
        self.delta_s
    }
}

/// `s { 1/2 - sum C(n-1, 2j-1) B_2j / 2j + delta_s w_p / (p-1) } mod p`, with `n = s p^k`.
///
/// The sum runs over `0 < 2j < n` with `(p - 1)` not dividing `2j`; it is
/// empty for `p = 3`. Each `B_2j / 2j` is formed exactly before reduction.
pub fn sharper_rhs(params: &SharperParams) -> Result<u64, BernoulliError> {
    let SharperParams { p, s, k, delta_s } = *params;
    let n = p
        .checked_pow(k)
        .and_then(|pk| pk.checked_mul(s))
        .filter(|&n| n < (1 << 20))
        .ok_or(BernoulliError::TooLarge { needed: u64::MAX })?;
    let half = arith::inv_mod(2, p).expect("p is odd");
    let mut acc = half;
    if n > 2 {
        let table = bernoulli_table(n as usize);
        for two_j in (2..n).step_by(2) {
            if two_j % (p - 1) == 0 {
                continue;
            }
            let ratio = table.get(two_j as usize) / BigRational::from_integer(BigInt::from(two_j));
            let ratio = rational_mod_p(&ratio, p).ok_or_else(|| BernoulliError::NotIntegral {
                value: ratio.to_string(),
                p,
            })?;
            let c = binom(n - 1, two_j as i64 - 1) % p;
            let c = c.to_u64().expect("reduced");
            acc = arith::sub_mod(acc, arith::mul_mod(c, ratio, p), p);
        }
    }
    if delta_s {
        let w = (wilson_quotient(p)? % p).to_u64().expect("reduced");
        let inv = arith::inv_mod(p - 1, p).expect("p - 1 is a unit");
        acc = arith::add_mod(acc, arith::mul_mod(w, inv, p), p);
    }
    Ok(arith::mul_mod(s % p, acc, p))
}

/// Denominator of `B_m` predicted by von Staudt-Clausen for even `m >= 2`.
pub fn staudt_clausen_denominator(m: u64) -> BigInt {
    (2..=m + 1)
        .filter(|&l| arith::is_prime(l) && m.is_multiple_of(l - 1))
        .map(BigInt::from)
        .product()
}

/// `p`-adic valuation of a nonzero rational.
pub fn rational_valuation(x: &BigRational, p: u64) -> i64 {
    let pb = BigInt::from(p);
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let mut v = 0i64;
        while !n.is_zero() && n.is_multiple_of(&pb) {
            n /= &pb;
            v += 1;
        }
        v
    };
    count(x.numer()) - count(x.denom())
}
