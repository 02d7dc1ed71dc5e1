//! One checker per congruence, plus grid sweeps over them.
//!
//! Each checker evaluates its two sides along separate routes: exact
//! big-integer binomial sums on one side, a closed form, a second exact
//! sum at different parameters, or the Bernoulli right-hand side on the
//! other. Both residues are reduced into `[0, modulus)` before comparison.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::bernoulli::{self, BernoulliError, SharperParams};
use crate::exact_eval::{binom, carlitz_expression, sum_brute, EvalError, SumSpec};

/// Largest `s p^k` accepted by [`check_sharper`]; bounds the Bernoulli indices used.
pub const BERNOULLI_BUDGET: u64 = 400;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("missing parameter `{0}`")]
    MissingParam(&'static str),
    #[error("parameter `{name}` out of range: {value}")]
    BadParam { name: &'static str, value: i64 },
    #[error("q must be a prime power (got {0})")]
    NotPrimePower(u64),
    #[error("p must be prime (got {0})")]
    NotPrime(u64),
    #[error("{value} is not divisible by {divisor}; this contradicts the congruence modulo p^(k+1)")]
    InexactDivision { value: String, divisor: String },
    #[error("closed-form cross-check disagrees: {0}")]
    CrossCheck(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Bernoulli(#[from] BernoulliError),
}

impl CheckError {
    /// Errors that mean "this tuple is outside the claim", as opposed to bad input or a defect.
    pub fn is_precondition(&self) -> bool {
        matches!(self, CheckError::Precondition(_))
    }
}

/// The congruences that can be checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    Hermite,
    Glaisher,
    Carlitz,
    Symmetry,
    Qminus1,
    Sharper,
    SharperKPeriod,
    SharperSymmetry,
    SPeriod,
}

impl Claim {
    pub const ALL: [Claim; 9] = [
        Claim::Hermite,
        Claim::Glaisher,
        Claim::Carlitz,
        Claim::Symmetry,
        Claim::Qminus1,
        Claim::Sharper,
        Claim::SharperKPeriod,
        Claim::SharperSymmetry,
        Claim::SPeriod,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Claim::Hermite => "hermite",
            Claim::Glaisher => "glaisher",
            Claim::Carlitz => "carlitz",
            Claim::Symmetry => "symmetry",
            Claim::Qminus1 => "qminus1",
            Claim::Sharper => "sharper",
            Claim::SharperKPeriod => "sharper-k-period",
            Claim::SharperSymmetry => "sharper-symmetry",
            Claim::SPeriod => "s-period",
        }
    }

    /// Parameter names in enumeration order. `t` is optional for `sharper-symmetry`.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            Claim::Hermite => &["p", "a"],
            Claim::Glaisher => &["p", "d", "a", "r"],
            Claim::Carlitz => &["q", "k", "s"],
            Claim::Symmetry => &["q", "k", "h", "r", "s"],
            Claim::Qminus1 => &["q", "k", "a", "r"],
            Claim::Sharper => &["p", "k", "s"],
            Claim::SharperKPeriod => &["q", "s", "k1", "k2"],
            Claim::SharperSymmetry => &["q", "k", "s", "t"],
            Claim::SPeriod => &["q", "k", "s"],
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown claim `{0}`")]
pub struct UnknownClaim(pub String);

impl FromStr for Claim {
    type Err = UnknownClaim;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Claim::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| UnknownClaim(s.to_string()))
    }
}

pub type Params = BTreeMap<String, i64>;

fn params(pairs: &[(&str, i64)]) -> Params {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Outcome of one check.
///
/// `pass` holds exactly when `lhs == rhs`. Skipped tuples carry no residues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: Claim,
    pub params: Params,
    #[serde(with = "decimal")]
    pub modulus: Option<BigUint>,
    #[serde(with = "decimal")]
    pub lhs: Option<BigUint>,
    #[serde(with = "decimal")]
    pub rhs: Option<BigUint>,
    pub pass: bool,
    pub skipped: bool,
    pub note: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl CheckReport {
    fn compare(name: Claim, params: Params, modulus: BigUint, lhs: BigUint, rhs: BigUint, note: String) -> Self {
        let lhs = lhs % &modulus;
        let rhs = rhs % &modulus;
        let pass = lhs == rhs;
        CheckReport {
            name,
            params,
            modulus: Some(modulus),
            lhs: Some(lhs),
            rhs: Some(rhs),
            pass,
            skipped: false,
            note,
        }
    }

    pub fn skipped(name: Claim, params: Params, reason: &str) -> Self {
        CheckReport {
            name,
            params,
            modulus: None,
            lhs: None,
            rhs: None,
            pass: false,
            skipped: true,
            note: format!("skipped: {reason}"),
        }
    }

    pub fn status(&self) -> Status {
        match (self.skipped, self.pass) {
            (true, _) => Status::Skip,
            (false, true) => Status::Pass,
            (false, false) => Status::Fail,
        }
    }
}

/// Tallies of a report sequence.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

impl Summary {
    pub fn add(&mut self, report: &CheckReport) {
        match report.status() {
            Status::Pass => self.pass += 1,
            Status::Fail => self.fail += 1,
            Status::Skip => self.skip += 1,
        }
    }

    pub fn of(reports: &[CheckReport]) -> Self {
        let mut s = Summary::default();
        reports.iter().for_each(|r| s.add(r));
        s
    }
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Option<BigUint>, ser: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => ser.serialize_str(&v.to_str_radix(10)),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<BigUint>, D::Error> {
        Option::<String>::deserialize(de)?
            .map(|s| BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| D::Error::custom("not a decimal integer")))
            .transpose()
    }
}

fn prime_power(q: u64) -> Result<(u64, u32), CheckError> {
    arith::prime_power(q).ok_or(CheckError::NotPrimePower(q))
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<(), CheckError> {
    if cond {
        Ok(())
    } else {
        Err(CheckError::Precondition(what()))
    }
}

fn pow_big(p: u64, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}

/// `(-1)^(a b)` as a flag: true when the sign is negative.
fn negative_sign(a: u64, b: u64) -> bool {
    a % 2 == 1 && b % 2 == 1
}

/// `+-x mod m`, canonical.
fn signed_residue(negative: bool, x: &BigUint, m: &BigUint) -> BigUint {
    let x = x % m;
    if negative && !x.is_zero() {
        m - x
    } else {
        x
    }
}

fn to_i64(x: u64) -> i64 {
    i64::try_from(x).unwrap_or(i64::MAX)
}

/// `p^k s`, failing on overflow.
fn scaled(p: u64, k: u32, s: u64) -> Result<u64, CheckError> {
    p.checked_pow(k)
        .and_then(|pk| pk.checked_mul(s))
        .ok_or(CheckError::Eval(EvalError::Overflow))
}

/// `E(q, k, s) / p^(k+1)`, failing loudly if the division is inexact.
fn carlitz_quotient(q: u64, k: u32, s: u64) -> Result<BigUint, CheckError> {
    let (p, _) = prime_power(q)?;
    let e = carlitz_expression(q, k, s)?;
    let divisor = pow_big(p, k + 1);
    let (quot, rem) = e.div_rem(&divisor);
    if !rem.is_zero() {
        return Err(CheckError::InexactDivision {
            value: e.to_string(),
            divisor: divisor.to_string(),
        });
    }
    Ok(quot)
}

/// Hermite: `p | sum_{b>0} C(a, b(p-1))` for odd `a`.
pub fn check_hermite(p: u64, a: u64) -> Result<CheckReport, CheckError> {
    if !arith::is_prime(p) {
        return Err(CheckError::NotPrime(p));
    }
    require(p % 2 == 1, || format!("p = {p} must be odd"))?;
    require(a % 2 == 1, || format!("a = {a} must be a positive odd integer"))?;
    // b = 0 contributes C(a, 0) = 1; negative b contribute nothing
    let lhs = sum_brute(&SumSpec::new(a, p - 1, 0)?) - 1u32;
    let modulus = BigUint::from(p);
    Ok(CheckReport::compare(
        Claim::Hermite,
        params(&[("p", to_i64(p)), ("a", to_i64(a))]),
        modulus,
        lhs,
        BigUint::zero(),
        String::new(),
    ))
}

/// Glaisher's periodicity: `S(a, d, r) = S(a_bar, d, r) (mod p)` with `a_bar` reduced modulo `p^f - 1`.
///
/// When `d = p^f - 1` the reduced side is also compared with
/// `C(a_bar, r) + C(a_bar, r + d)`.
pub fn check_glaisher(p: u64, d: u64, a: u64, r: i64) -> Result<CheckReport, CheckError> {
    if !arith::is_prime(p) {
        return Err(CheckError::NotPrime(p));
    }
    require(d >= 1, || "d must be positive".into())?;
    require(a >= 1, || "a must be positive".into())?;
    require(!d.is_multiple_of(p), || format!("p = {p} divides d = {d}"))?;
    let f = arith::multiplicative_order(p, d).expect("p is prime to d");
    let period = (p as u128).checked_pow(f).map(|x| x - 1);
    let a_bar = match period {
        Some(m) if m <= a as u128 => {
            let m = m as u64;
            match a % m {
                0 => m,
                x => x,
            }
        }
        _ => a,
    };
    let modulus = BigUint::from(p);
    let lhs = sum_brute(&SumSpec::new(a, d, r)?);
    let rhs = sum_brute(&SumSpec::new(a_bar, d, r)?);
    let mut note = format!("f={f} a_bar={a_bar}");
    if period == Some(d as u128) {
        let r0 = arith::reduce_signed(r as i128, d) as i64;
        let closed = binom(a_bar, r0) + binom(a_bar, r0 + d as i64);
        if &closed % &modulus != &rhs % &modulus {
            return Err(CheckError::CrossCheck(format!(
                "C({a_bar},{r0}) + C({a_bar},{}) = {closed} but S(a_bar) = {rhs}",
                r0 + d as i64
            )));
        }
        note.push_str(" closed_form=ok");
    }
    Ok(CheckReport::compare(
        Claim::Glaisher,
        params(&[("p", to_i64(p)), ("d", to_i64(d)), ("a", to_i64(a)), ("r", r)]),
        modulus,
        lhs,
        rhs,
        note,
    ))
}

/// `E(q, k, s) = 0 (mod p^(k+1))`.
pub fn check_carlitz(q: u64, k: u32, s: u64) -> Result<CheckReport, CheckError> {
    let (p, _) = prime_power(q)?;
    require(s >= 1, || "s must be positive".into())?;
    let lhs = carlitz_expression(q, k, s)?;
    Ok(CheckReport::compare(
        Claim::Carlitz,
        params(&[("q", to_i64(q)), ("k", k as i64), ("s", to_i64(s))]),
        pow_big(p, k + 1),
        lhs,
        BigUint::zero(),
        String::new(),
    ))
}

/// Symmetry: `(-1)^(ps) S(s p^k, q-1, -r) = (-1)^(pr) S(r p^h, q-1, -s) (mod p^(k+1))`.
///
/// Requires `h >= k`, `f | h + k` and `s >= 1`. With `r >= 1` the two sides
/// are compared directly. With `r = 0` the congruence is off by the term of
/// the excluded root of unity, and the report compares `LHS - RHS` against
/// `-(-1)^(ps) / (q - 1)`. For `q = 2, 3` both sides are also recomputed from
/// the closed forms `2^n` and `2^(n-1)`.
pub fn check_symmetry(q: u64, h: u32, k: u32, r: u64, s: u64) -> Result<CheckReport, CheckError> {
    let (p, f) = prime_power(q)?;
    require(h >= k, || format!("h = {h} < k = {k}"))?;
    require((h + k).is_multiple_of(f), || {
        format!("f = {f} does not divide h + k = {}", h + k)
    })?;
    require(s >= 1, || "s must be positive".into())?;
    let modulus = pow_big(p, k + 1);
    let d = q - 1;
    let n_left = scaled(p, k, s)?;
    let n_right = scaled(p, h, r)?;
    let left = sum_brute(&SumSpec::new(n_left, d, -to_i64(r))?);
    let right = sum_brute(&SumSpec::new(n_right, d, -(s as i64))?);
    let left = signed_residue(negative_sign(p, s), &left, &modulus);
    let right = signed_residue(negative_sign(p, r), &right, &modulus);
    let mut note = String::new();

    if q <= 3 && r >= 1 {
        // S(n, 1, .) = 2^n and S(n, 2, .) = 2^(n-1) for n >= 1
        let closed = |n: u64, sign_neg: bool| -> BigUint {
            let e = if q == 2 { n } else { n - 1 };
            let v = BigUint::from(2u32).modpow(&BigUint::from(e), &modulus);
            signed_residue(sign_neg, &v, &modulus)
        };
        let cl = closed(n_left, negative_sign(p, s));
        let cr = closed(n_right, negative_sign(p, r));
        if cl != left || cr != right {
            return Err(CheckError::CrossCheck(format!(
                "q = {q}: closed forms ({cl}, {cr}) vs sums ({left}, {right})"
            )));
        }
        note.push_str("closed_form=ok");
    }

    let pars = params(&[
        ("q", to_i64(q)),
        ("h", h as i64),
        ("k", k as i64),
        ("r", to_i64(r)),
        ("s", to_i64(s)),
    ]);
    if r == 0 {
        let m = modulus.to_u64().ok_or(CheckError::Eval(EvalError::Overflow))?;
        let inv = arith::inv_mod(d % m, m).expect("q - 1 is prime to p");
        let expected = signed_residue(!negative_sign(p, s), &BigUint::from(inv), &modulus);
        let diff = (&left + &modulus - &right) % &modulus;
        return Ok(CheckReport::compare(
            Claim::Symmetry,
            pars,
            modulus,
            diff,
            expected,
            "r=0: lhs is LHS-RHS, rhs is -(-1)^(ps)/(q-1)".into(),
        ));
    }
    Ok(CheckReport::compare(Claim::Symmetry, pars, modulus, left, right, note))
}

/// `(q - 1) S(a, q-1, -r) = -(-1)^(pr) (mod p^(k+1))` when `(q-1) p^k | a` and `(q-1) ∤ r`.
pub fn check_qminus1(q: u64, k: u32, a: u64, r: u64) -> Result<CheckReport, CheckError> {
    let (p, _) = prime_power(q)?;
    let d = q - 1;
    let step = scaled(p, k, d)?;
    require(a >= 1 && a.is_multiple_of(step), || {
        format!("(q-1)p^k = {step} does not divide a = {a}")
    })?;
    require(r >= 1, || "r must be positive".into())?;
    require(!r.is_multiple_of(d), || format!("q - 1 = {d} divides r = {r}"))?;
    let modulus = pow_big(p, k + 1);
    let lhs = sum_brute(&SumSpec::new(a, d, -(r as i64))?) * d;
    let rhs = signed_residue(!negative_sign(p, r), &BigUint::one(), &modulus);
    Ok(CheckReport::compare(
        Claim::Qminus1,
        params(&[("q", to_i64(q)), ("k", k as i64), ("a", to_i64(a)), ("r", to_i64(r))]),
        modulus,
        lhs,
        rhs,
        String::new(),
    ))
}

/// Carlitz's refinement: `E(p, k, s) / p^(k+1)` against the Bernoulli right-hand side, mod `p`.
///
/// Only `k >= 1`: at `k = 0` the congruence fails (e.g. `p = 5, s = 1`).
/// For `p = 3` the quotient is also compared with `(2^(s 3^k) - (-1)^s) / 3^(k+1)`.
pub fn check_sharper(p: u64, s: u64, k: u32) -> Result<CheckReport, CheckError> {
    if !arith::is_prime(p) {
        return Err(CheckError::NotPrime(p));
    }
    require(p >= 3, || "p = 2 has no interpretation".into())?;
    require(k >= 1, || "k must be at least 1".into())?;
    require(s >= 1, || "s must be positive".into())?;
    let n = scaled(p, k, s)?;
    require(n <= BERNOULLI_BUDGET, || {
        format!("s p^k = {n} exceeds the Bernoulli budget {BERNOULLI_BUDGET}")
    })?;
    let quotient = carlitz_quotient(p, k, s)?;
    let mut note = String::new();
    if p == 3 {
        let power = BigUint::one() << n;
        let numerator = if s % 2 == 1 { power + 1u32 } else { power - 1u32 };
        let (closed, rem) = numerator.div_rem(&pow_big(3, k + 1));
        if !rem.is_zero() || closed != quotient {
            return Err(CheckError::CrossCheck(format!(
                "p = 3 closed form {closed} vs quotient {quotient}"
            )));
        }
        note.push_str("closed_form=ok");
    }
    let rhs = bernoulli::sharper_rhs(&SharperParams::new(p, s, k)?)?;
    Ok(CheckReport::compare(
        Claim::Sharper,
        params(&[("p", to_i64(p)), ("s", to_i64(s)), ("k", k as i64)]),
        BigUint::from(p),
        quotient,
        BigUint::from(rhs),
        note,
    ))
}

/// `E(q, k, s) / p^(k+1) mod p` depends only on `k mod f`.
///
/// Excludes `k < 2` when `p = 2, s = 1`. Pairs with `p = 2` and `k = 0` are
/// checked but flagged in the note: the congruence is not valid there
/// (`q = 4, s = 5` gives 1 at `k = 0` and 0 at `k = 2`). For `q = 2, 4` and `k > 0` each
/// expression is also compared with `2^(s 2^k)`.
pub fn check_sharper_k_period(q: u64, s: u64, k1: u32, k2: u32) -> Result<CheckReport, CheckError> {
    let (p, f) = prime_power(q)?;
    require(s >= 1, || "s must be positive".into())?;
    require(k1 % f == k2 % f, || {
        format!("k1 = {k1} and k2 = {k2} differ modulo f = {f}")
    })?;
    require(!(p == 2 && s == 1 && (k1 < 2 || k2 < 2)), || {
        "k >= 2 is required when p = 2 and s = 1".into()
    })?;
    let mut note = String::new();
    if p == 2 && k1.min(k2) == 0 {
        // the periodicity argument needs 2^(k+1) >= 4; k = 0 is covered only by the statement
        note.push_str("p=2 with k=0 ");
    }
    if q == 2 || q == 4 {
        for k in [k1, k2].into_iter().filter(|&k| k > 0) {
            let e = carlitz_expression(q, k, s)?;
            let closed = BigUint::one() << scaled(2, k, s)?;
            if e != closed {
                return Err(CheckError::CrossCheck(format!(
                    "E({q},{k},{s}) = {e} but 2^(s 2^k) = {closed}"
                )));
            }
        }
        note.push_str("closed_form=ok");
    }
    let lhs = carlitz_quotient(q, k1, s)?;
    let rhs = carlitz_quotient(q, k2, s)?;
    Ok(CheckReport::compare(
        Claim::SharperKPeriod,
        params(&[("q", to_i64(q)), ("s", to_i64(s)), ("k1", k1 as i64), ("k2", k2 as i64)]),
        BigUint::from(p),
        lhs,
        rhs,
        note,
    ))
}

/// Smallest `t >= 1` with `p^t > s` and `f | k + t`.
pub fn minimal_t(q: u64, k: u32, s: u64) -> Result<u32, CheckError> {
    let (p, f) = prime_power(q)?;
    let mut t = 1u32;
    loop {
        let big_enough = p.checked_pow(t).is_none_or(|pt| pt > s);
        if big_enough && (k + t).is_multiple_of(f) {
            return Ok(t);
        }
        t += 1;
    }
}

/// `E(q, k, s) = E(q, k, p^t - s) (mod p^(k+2))` for odd `p`, `p^t > s`, `f | k + t`.
pub fn check_sharper_symmetry(q: u64, s: u64, k: u32, t: u32) -> Result<CheckReport, CheckError> {
    let (p, f) = prime_power(q)?;
    require(p != 2, || "fails for p = 2".into())?;
    require(s >= 1, || "s must be positive".into())?;
    require((k + t).is_multiple_of(f), || {
        format!("f = {f} does not divide k + t = {}", k + t)
    })?;
    let pt = p.checked_pow(t).ok_or(CheckError::Eval(EvalError::Overflow))?;
    require(pt > s, || format!("p^t = {pt} must exceed s = {s}"))?;
    let lhs = carlitz_expression(q, k, s)?;
    let rhs = carlitz_expression(q, k, pt - s)?;
    Ok(CheckReport::compare(
        Claim::SharperSymmetry,
        params(&[("q", to_i64(q)), ("s", to_i64(s)), ("k", k as i64), ("t", t as i64)]),
        pow_big(p, k + 2),
        lhs,
        rhs,
        format!("partner s={}", pt - s),
    ))
}

/// `E(q, k, s) / p^(k+1) mod p` is unchanged by `s -> s + (q - 1) p` for odd `p`.
pub fn check_s_period(q: u64, s: u64, k: u32) -> Result<CheckReport, CheckError> {
    let (p, _) = prime_power(q)?;
    require(p != 2, || "p must be odd".into())?;
    require(s >= 1, || "s must be positive".into())?;
    let shifted = (q - 1)
        .checked_mul(p)
        .and_then(|x| x.checked_add(s))
        .ok_or(CheckError::Eval(EvalError::Overflow))?;
    let lhs = carlitz_quotient(q, k, s)?;
    let rhs = carlitz_quotient(q, k, shifted)?;
    Ok(CheckReport::compare(
        Claim::SPeriod,
        params(&[("q", to_i64(q)), ("s", to_i64(s)), ("k", k as i64)]),
        BigUint::from(p),
        lhs,
        rhs,
        format!("partner s={shifted}"),
    ))
}

fn get(pars: &Params, name: &'static str) -> Result<i64, CheckError> {
    pars.get(name).copied().ok_or(CheckError::MissingParam(name))
}

fn get_u64(pars: &Params, name: &'static str) -> Result<u64, CheckError> {
    let v = get(pars, name)?;
    u64::try_from(v).map_err(|_| CheckError::BadParam { name, value: v })
}

fn get_u32(pars: &Params, name: &'static str) -> Result<u32, CheckError> {
    let v = get(pars, name)?;
    u32::try_from(v).map_err(|_| CheckError::BadParam { name, value: v })
}

/// Runs `claim` on named parameters.
pub fn run_check(claim: Claim, pars: &Params) -> Result<CheckReport, CheckError> {
    match claim {
        Claim::Hermite => check_hermite(get_u64(pars, "p")?, get_u64(pars, "a")?),
        Claim::Glaisher => check_glaisher(
            get_u64(pars, "p")?,
            get_u64(pars, "d")?,
            get_u64(pars, "a")?,
            get(pars, "r")?,
        ),
        Claim::Carlitz => check_carlitz(get_u64(pars, "q")?, get_u32(pars, "k")?, get_u64(pars, "s")?),
        Claim::Symmetry => check_symmetry(
            get_u64(pars, "q")?,
            get_u32(pars, "h")?,
            get_u32(pars, "k")?,
            get_u64(pars, "r")?,
            get_u64(pars, "s")?,
        ),
        Claim::Qminus1 => check_qminus1(
            get_u64(pars, "q")?,
            get_u32(pars, "k")?,
            get_u64(pars, "a")?,
            get_u64(pars, "r")?,
        ),
        Claim::Sharper => check_sharper(get_u64(pars, "p")?, get_u64(pars, "s")?, get_u32(pars, "k")?),
        Claim::SharperKPeriod => check_sharper_k_period(
            get_u64(pars, "q")?,
            get_u64(pars, "s")?,
            get_u32(pars, "k1")?,
            get_u32(pars, "k2")?,
        ),
        Claim::SharperSymmetry => {
            let (q, s, k) = (get_u64(pars, "q")?, get_u64(pars, "s")?, get_u32(pars, "k")?);
            let t = match pars.get("t") {
                Some(_) => get_u32(pars, "t")?,
                None => minimal_t(q, k, s)?,
            };
            check_sharper_symmetry(q, s, k, t)
        }
        Claim::SPeriod => check_s_period(get_u64(pars, "q")?, get_u64(pars, "s")?, get_u32(pars, "k")?),
    }
}

/// What to do with tuples that violate a checker's preconditions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SkipPolicy {
    #[default]
    Skip,
    Error,
}

/// Value lists per axis. Only the axes a claim uses are read.
///
/// For `sharper-k-period` the `k` axis supplies both `k1 < k2`; for
/// `sharper-symmetry` an empty `t` axis means "smallest valid `t` per tuple".
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepGrid {
    pub p: Vec<u64>,
    pub q: Vec<u64>,
    pub d: Vec<u64>,
    pub k: Vec<u32>,
    pub h: Vec<u32>,
    pub t: Vec<u32>,
    pub r: Vec<i64>,
    pub s: Vec<u64>,
    pub a: Vec<u64>,
    pub policy: SkipPolicy,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("malformed grid: {0}")]
    Malformed(String),
    #[error("{claim} at {params:?}: {source}")]
    Check {
        claim: Claim,
        params: Params,
        #[source]
        source: CheckError,
    },
}

impl SweepGrid {
    fn validate(&self, claim: Claim) -> Result<(), SweepError> {
        let used = claim.params();
        if used.contains(&"q") {
            if let Some(q) = self.q.iter().find(|&&q| arith::prime_power(q).is_none()) {
                return Err(SweepError::Malformed(format!("q must be a prime power (got {q})")));
            }
        }
        if used.contains(&"p") {
            if let Some(p) = self.p.iter().find(|&&p| !arith::is_prime(p)) {
                return Err(SweepError::Malformed(format!("p = {p} is not prime")));
            }
        }
        if used.contains(&"d") && self.d.contains(&0) {
            return Err(SweepError::Malformed("d must be positive".into()));
        }
        Ok(())
    }

    /// Every tuple for `claim`, lexicographic over its axes in [`Claim::params`] order.
    pub fn tuples(&self, claim: Claim) -> Result<Vec<Params>, SweepError> {
        self.validate(claim)?;
        let axis = |name: &str| -> Vec<i64> {
            match name {
                "p" => self.p.iter().map(|&x| to_i64(x)).collect(),
                "q" => self.q.iter().map(|&x| to_i64(x)).collect(),
                "d" => self.d.iter().map(|&x| to_i64(x)).collect(),
                "k" => self.k.iter().map(|&x| x as i64).collect(),
                "h" => self.h.iter().map(|&x| x as i64).collect(),
                "t" => self.t.iter().map(|&x| x as i64).collect(),
                "r" => self.r.clone(),
                "s" => self.s.iter().map(|&x| to_i64(x)).collect(),
                "a" => self.a.iter().map(|&x| to_i64(x)).collect(),
                _ => unreachable!(),
            }
        };
        let mut out = vec![Params::new()];
        for &name in claim.params() {
            match name {
                "k1" => continue,
                "k2" => {
                    let ks = axis("k");
                    out = out
                        .into_iter()
                        .flat_map(|base| {
                            let ks = ks.clone();
                            ks.iter()
                                .flat_map(|&k1| ks.iter().filter(move |&&k2| k2 > k1).map(move |&k2| (k1, k2)))
                                .map(|(k1, k2)| {
                                    let mut t = base.clone();
                                    t.insert("k1".into(), k1);
                                    t.insert("k2".into(), k2);
                                    t
                                })
                                .collect::<Vec<_>>()
                        })
                        .collect();
                }
                "t" if claim == Claim::SharperSymmetry && self.t.is_empty() => continue,
                _ => {
                    let values = axis(name);
                    out = out
                        .into_iter()
                        .flat_map(|base| {
                            values.iter().map(move |&v| {
                                let mut t = base.clone();
                                t.insert(name.to_string(), v);
                                t
                            })
                        })
                        .collect();
                }
            }
        }
        // an empty axis empties the product
        if claim.params().iter().any(|&n| match n {
            "k1" | "k2" => self.k.is_empty(),
            "t" => false,
            n => axis(n).is_empty(),
        }) {
            out.clear();
        }
        Ok(out)
    }
}

fn evaluate(claim: Claim, pars: Params, policy: SkipPolicy) -> Result<CheckReport, SweepError> {
    match run_check(claim, &pars) {
        Ok(report) => Ok(report),
        Err(e) if e.is_precondition() && policy == SkipPolicy::Skip => {
            let reason = match &e {
                CheckError::Precondition(msg) => msg.clone(),
                other => other.to_string(),
            };
            Ok(CheckReport::skipped(claim, pars, &reason))
        }
        Err(source) => Err(SweepError::Check {
            claim,
            params: pars,
            source,
        }),
    }
}

/// Runs every tuple of the grid, handing reports to `sink` in enumeration order.
///
/// With `jobs > 1` tuples are evaluated concurrently in batches; emission order
/// is unaffected. Failures never stop the sweep; hard errors do.
pub fn run_sweep_with<F>(grid: &SweepGrid, claim: Claim, jobs: usize, mut sink: F) -> Result<Summary, SweepError>
where
    F: FnMut(&CheckReport),
{
    let tuples = grid.tuples(claim)?;
    let mut summary = Summary::default();
    let policy = grid.policy;
    if jobs <= 1 {
        for pars in tuples {
            let report = evaluate(claim, pars, policy)?;
            summary.add(&report);
            sink(&report);
        }
        return Ok(summary);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SweepError::Malformed(format!("cannot start {jobs} workers: {e}")))?;
    for batch in tuples.chunks(64 * jobs) {
        let reports: Vec<Result<CheckReport, SweepError>> = pool.install(|| {
            batch
                .par_iter()
                .map(|pars| evaluate(claim, pars.clone(), policy))
                .collect()
        });
        for report in reports {
            let report = report?;
            summary.add(&report);
            sink(&report);
        }
    }
    Ok(summary)
}

/// Collects every report of a sweep.
pub fn run_sweep(grid: &SweepGrid, claim: Claim, jobs: usize) -> Result<Vec<CheckReport>, SweepError> {
    let mut out = Vec::new();
    run_sweep_with(grid, claim, jobs, |r| out.push(r.clone()))?;
    Ok(out)
}
