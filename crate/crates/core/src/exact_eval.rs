//! Evaluation of `S(a, d, r) = sum_b C(a, b d + r)`.
//!
//! Four evaluators, in decreasing order of cost:
//!
//! * [`sum_brute`] sums the exact binomial coefficients and is the reference
//!   for everything else;
//! * [`sum_mod_multisection`] averages `w^(-ir) (1 + w^i)^a` over the
//!   Teichmüller `d`-th roots of unity of a Galois ring;
//! * [`sum_mod_polypow`] reduces `(1 + x)^a` modulo `x^d - 1` and `p^(k+1)`,
//!   producing every residue class at once;
//! * [`sum_mod_reduced`] first shrinks `a` modulo `(q - 1) p^k`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;
use crate::galois_ring::{GrContext, GrElement, GrError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("step d must be at least 1")]
    ZeroStep,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{what} must be positive")]
    NotPositive { what: &'static str },
    #[error("p^k = {p_k} does not divide a = {a}")]
    NotMultiple { a: u64, p_k: u64 },
    #[error("{d} does not divide q - 1 = {q_minus_one}")]
    StepNotDividing { d: u64, q_minus_one: u64 },
    #[error("parameters overflow machine integers")]
    Overflow,
    #[error(transparent)]
    Ring(#[from] GrError),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// The triple `(a, d, r)` naming `S(a, d, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SumSpec {
    a: u64,
    d: u64,
    r: i64,
}

impl SumSpec {
    pub fn new(a: u64, d: u64, r: i64) -> Result<Self, EvalError> {
        if d == 0 {
            return Err(EvalError::ZeroStep);
        }
        Ok(SumSpec { a, d, r })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    /// `r` reduced into `[0, d)`; the sum only depends on this class.
    pub fn residue(&self) -> u64 {
        arith::reduce_signed(self.r as i128, self.d)
    }
}

/// All `d` residues `S(a, d, r) mod p^(k+1)`, indexed by `r` in `[0, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueVector {
    modulus: BigUint,
    values: Vec<BigUint>,
}

impl ResidueVector {
    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entry for an arbitrary integer offset.
    pub fn get(&self, r: i64) -> &BigUint {
        &self.values[arith::reduce_signed(r as i128, self.values.len() as u64) as usize]
    }
}

/// `C(a, c)`, zero outside `0 <= c <= a`.
pub fn binom(a: u64, c: i64) -> BigUint {
    if c < 0 || c as u64 > a {
        return BigUint::zero();
    }
    let c = (c as u64).min(a - c as u64);
    let mut acc = BigUint::one();
    for i in 0..c {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// Exact `S(a, d, r)` for every `r` in `[0, d)`, walking one row of Pascal's triangle.
pub fn row_sums_exact(a: u64, d: u64) -> Result<Vec<BigUint>, EvalError> {
    if d == 0 {
        return Err(EvalError::ZeroStep);
    }
    let mut sums = vec![BigUint::zero(); d as usize];
    let mut term = BigUint::one();
    let mut slot = 0usize;
    for c in 0..=a {
        sums[slot] += &term;
        if c < a {
            term *= a - c;
            term /= c + 1;
        }
        slot += 1;
        if slot == d as usize {
            slot = 0;
        }
    }
    Ok(sums)
}

/// Exact `S(a, d, r)`: the reference oracle for every other evaluator.
pub fn sum_brute(spec: &SumSpec) -> BigUint {
    let a = spec.a;
    let d = spec.d;
    let first = spec.residue();
    if first > a {
        return BigUint::zero();
    }
    let mut total = BigUint::zero();
    let mut term = binom(a, first as i64);
    let mut c = first;
    loop {
        total += &term;
        let next = match c.checked_add(d) {
            Some(n) if n <= a => n,
            _ => break,
        };
        while c < next {
            term *= a - c;
            term /= c + 1;
            c += 1;
        }
    }
    total
}

/// Coefficient arithmetic for the cyclic power: word-sized or big residues.
trait Residues {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn to_big(&self, x: &Self::Elem) -> BigUint;
}

struct WordResidues(u64);

impl Residues for WordResidues {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn add(&self, x: &u64, y: &u64) -> u64 {
        arith::add_mod(*x, *y, self.0)
    }
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        arith::mul_mod(*x, *y, self.0)
    }
    fn to_big(&self, x: &u64) -> BigUint {
        BigUint::from(*x)
    }
}

struct BigResidues(BigUint);

impl Residues for BigResidues {
    type Elem = BigUint;
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one() % &self.0
    }
    fn add(&self, x: &BigUint, y: &BigUint) -> BigUint {
        (x + y) % &self.0
    }
    fn mul(&self, x: &BigUint, y: &BigUint) -> BigUint {
        (x * y) % &self.0
    }
    fn to_big(&self, x: &BigUint) -> BigUint {
        x.clone()
    }
}

fn cyclic_square<R: Residues>(ring: &R, x: &[R::Elem]) -> Vec<R::Elem> {
    let d = x.len();
    let mut out = vec![ring.zero(); d];
    for i in 0..d {
        for j in 0..d {
            let slot = (i + j) % d;
            out[slot] = ring.add(&out[slot], &ring.mul(&x[i], &x[j]));
        }
    }
    out
}

/// `x * (1 + t)` in the cyclic ring: add the rotation by one place.
fn times_one_plus_t<R: Residues>(ring: &R, x: &[R::Elem]) -> Vec<R::Elem> {
    let d = x.len();
    (0..d).map(|i| ring.add(&x[i], &x[(i + d - 1) % d])).collect()
}

fn cyclic_power<R: Residues>(ring: &R, a: u64, d: usize) -> Vec<BigUint> {
    let mut acc = vec![ring.zero(); d];
    acc[0] = ring.one();
    if a > 0 {
        for bit in (0..=a.ilog2()).rev() {
            acc = cyclic_square(ring, &acc);
            if (a >> bit) & 1 == 1 {
                acc = times_one_plus_t(ring, &acc);
            }
        }
    }
    acc.iter().map(|x| ring.to_big(x)).collect()
}

/// All residues `S(a, d, r) mod p^(k+1)` from `(1 + x)^a mod (x^d - 1, p^(k+1))`.
///
/// Left-to-right binary exponentiation: `O(log a)` cyclic squarings of length `d`.
pub fn sum_mod_polypow(a: u64, d: u64, p: u64, k: u32) -> Result<ResidueVector, EvalError> {
    if d == 0 {
        return Err(EvalError::ZeroStep);
    }
    if !arith::is_prime(p) {
        return Err(EvalError::NotPrime(p));
    }
    let d = usize::try_from(d).map_err(|_| EvalError::Overflow)?;
    let modulus = BigUint::from(p).pow(k + 1);
    let values = match modulus.to_u64().filter(|&m| m < (1 << 63)) {
        Some(m) => cyclic_power(&WordResidues(m), a, d),
        None => cyclic_power(&BigResidues(modulus.clone()), a, d),
    };
    Ok(ResidueVector { modulus, values })
}

/// `d^(-1) sum_i w^(-ir) (1 + w^i)^a` in the Galois ring, with `w` of exact order `d`.
///
/// The value lies in the prime subring; callers wanting the plain residue
/// should use [`sum_mod_multisection`].
pub fn multisection_element(spec: &SumSpec, ctx: &GrContext) -> Result<GrElement, EvalError> {
    let d = spec.d;
    let q1 = ctx.q() - 1;
    if !q1.is_multiple_of(d) {
        return Err(EvalError::StepNotDividing { d, q_minus_one: q1 });
    }
    let roots = ctx.roots_of_unity(d)?;
    let r = spec.residue();
    let one = ctx.one();
    let mut acc = ctx.zero();
    for (i, root) in roots.iter().enumerate() {
        let twist = &roots[((d - (i as u64 * r) % d) % d) as usize];
        let power = ctx.pow(&ctx.add(&one, root)?, spec.a)?;
        acc = ctx.add(&acc, &ctx.mul(twist, &power)?)?;
    }
    let d_inv =
        arith::inv_mod(d % ctx.modulus(), ctx.modulus()).ok_or(EvalError::StepNotDividing { d, q_minus_one: q1 })?;
    Ok(ctx.scale(&acc, d_inv as i64)?)
}

/// `S(a, d, r) mod p^(k+1)` by multisection over the Teichmüller roots of unity of `ctx`.
pub fn sum_mod_multisection(spec: &SumSpec, ctx: &GrContext) -> Result<BigUint, EvalError> {
    let value = multisection_element(spec, ctx)?;
    if !value.is_constant() {
        return Err(EvalError::Internal(format!(
            "multisection left the prime subring: {:?}",
            value.coeffs()
        )));
    }
    Ok(BigUint::from(value.constant()))
}

/// Canonical reduced exponent for `a` modulo `(q - 1) p^k`.
///
/// The smallest positive representative; it is again a multiple of `p^k`.
pub fn reduced_exponent(a: u64, q: u64, k: u32) -> Result<u64, EvalError> {
    let (p, _) = arith::prime_power(q).ok_or(EvalError::NotPrimePower(q))?;
    if a == 0 {
        return Err(EvalError::NotPositive { what: "a" });
    }
    let p_k = p.checked_pow(k).ok_or(EvalError::Overflow)?;
    if !a.is_multiple_of(p_k) {
        return Err(EvalError::NotMultiple { a, p_k });
    }
    let period = (q - 1).checked_mul(p_k).ok_or(EvalError::Overflow)?;
    let mut reduced = a % period;
    if reduced == 0 {
        reduced = period;
    }
    // For p = 2 both a and the representative must be at least k + 1; any
    // positive multiple of 2^k already is.
    debug_assert!(p != 2 || reduced > k as u64);
    Ok(reduced)
}

/// `S(a, q - 1, r) mod p^(k+1)` after replacing `a` by its reduced exponent.
pub fn sum_mod_reduced(a: u64, q: u64, r: i64, k: u32) -> Result<BigUint, EvalError> {
    let (p, _) = arith::prime_power(q).ok_or(EvalError::NotPrimePower(q))?;
    let reduced = reduced_exponent(a, q, k)?;
    let row = sum_mod_polypow(reduced, q - 1, p, k)?;
    Ok(row.get(r).clone())
}

/// `E(q, k, s) = 1 + (q - 1) sum_{0 <= b(q-1) < s p^k} C(s p^k, b(q-1))`, exactly.
pub fn carlitz_expression(q: u64, k: u32, s: u64) -> Result<BigUint, EvalError> {
    let (p, _) = arith::prime_power(q).ok_or(EvalError::NotPrimePower(q))?;
    if s == 0 {
        return Err(EvalError::NotPositive { what: "s" });
    }
    let n = p
        .checked_pow(k)
        .and_then(|pk| pk.checked_mul(s))
        .ok_or(EvalError::Overflow)?;
    let inclusive = sum_brute(&SumSpec::new(n, q - 1, 0)?);
    // the b(q-1) = n term is C(n, n) = 1
    let strict = if n % (q - 1) == 0 { inclusive - 1u32 } else { inclusive };
    Ok(strict * (q - 1) + 1u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal_row(n: usize) -> Vec<BigUint> {
        let mut row = vec![BigUint::one()];
        for _ in 0..n {
            let mut next = vec![BigUint::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        row
    }

    fn spec(a: u64, d: u64, r: i64) -> SumSpec {
        SumSpec::new(a, d, r).unwrap()
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom(7, 2), BigUint::from(21u32));
        assert_eq!(binom(5, -1), BigUint::zero());
        assert_eq!(binom(0, 0), BigUint::one());
        assert_eq!(binom(3, 4), BigUint::zero());
    }

    #[test]
    fn binom_matches_pascal() {
        for n in 0..60u64 {
            let row = pascal_row(n as usize);
            for (c, v) in row.iter().enumerate() {
                assert_eq!(&binom(n, c as i64), v);
            }
        }
    }

    #[test]
    fn brute_examples() {
        assert_eq!(sum_brute(&spec(5, 1, 0)), BigUint::from(32u32));
        assert_eq!(sum_brute(&spec(4, 2, 0)), BigUint::from(8u32));
        assert_eq!(sum_brute(&spec(7, 4, 2)), BigUint::from(28u32));
        assert_eq!(sum_brute(&spec(0, 3, 0)), BigUint::one());
        assert_eq!(sum_brute(&spec(7, 4, -2)), sum_brute(&spec(7, 4, 2)));
        assert_eq!(sum_brute(&spec(2, 5, 3)), BigUint::zero());
    }

    #[test]
    fn zero_step_rejected() {
        assert_eq!(SumSpec::new(3, 0, 0), Err(EvalError::ZeroStep));
        assert_eq!(sum_mod_polypow(3, 0, 5, 0), Err(EvalError::ZeroStep));
    }

    #[test]
    fn row_sums_agree_with_brute() {
        for a in 0..40 {
            for d in 1..9 {
                let row = row_sums_exact(a, d).unwrap();
                for r in 0..d {
                    assert_eq!(row[r as usize], sum_brute(&spec(a, d, r as i64)));
                }
            }
        }
    }

    #[test]
    fn polypow_examples() {
        let v = sum_mod_polypow(7, 4, 5, 0).unwrap();
        assert_eq!(v.values(), [1u32, 3, 3, 1].map(BigUint::from));
        let v = sum_mod_polypow(0, 3, 2, 1).unwrap();
        assert_eq!(v.values(), [1u32, 0, 0].map(BigUint::from));
        let v = sum_mod_polypow(5, 1, 3, 1).unwrap();
        assert_eq!(v.values(), [BigUint::from(5u32)]);
        assert_eq!(v.modulus(), &BigUint::from(9u32));
        assert_eq!(sum_mod_polypow(7, 4, 4, 0), Err(EvalError::NotPrime(4)));
    }

    #[test]
    fn polypow_big_modulus_path() {
        // 3^41 exceeds a machine word
        let v = sum_mod_polypow(200, 7, 3, 40).unwrap();
        let exact = row_sums_exact(200, 7).unwrap();
        for (got, want) in v.values().iter().zip(&exact) {
            assert_eq!(*got, want % v.modulus());
        }
    }

    #[test]
    fn multisection_examples() {
        let ctx = GrContext::new(5, 1, 0).unwrap();
        assert_eq!(sum_mod_multisection(&spec(7, 4, 2), &ctx).unwrap(), BigUint::from(3u32));
        let ctx = GrContext::new(3, 1, 1).unwrap();
        assert_eq!(sum_mod_multisection(&spec(3, 2, 0), &ctx).unwrap(), BigUint::from(4u32));
        let ctx = GrContext::new(2, 2, 0).unwrap();
        assert_eq!(sum_mod_multisection(&spec(5, 3, 1), &ctx).unwrap(), BigUint::zero());
        assert_eq!(
            sum_mod_multisection(&spec(5, 2, 1), &ctx),
            Err(EvalError::StepNotDividing { d: 2, q_minus_one: 3 })
        );
    }

    #[test]
    fn reduced_examples() {
        assert_eq!(reduced_exponent(1_000_000, 5, 0).unwrap(), 4);
        let direct = sum_mod_polypow(1_000_000, 4, 5, 0).unwrap();
        assert_eq!(&sum_mod_reduced(1_000_000, 5, 2, 0).unwrap(), direct.get(2));
        assert_eq!(sum_mod_reduced(7, 5, 2, 0).unwrap(), BigUint::from(3u32));
        assert_eq!(sum_mod_reduced(2, 3, 0, 0).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn reduced_errors() {
        assert_eq!(
            sum_mod_reduced(7, 5, 0, 1),
            Err(EvalError::NotMultiple { a: 7, p_k: 5 })
        );
        assert_eq!(
            sum_mod_reduced(2, 4, 0, 2),
            Err(EvalError::NotMultiple { a: 2, p_k: 4 })
        );
        assert_eq!(sum_mod_reduced(5, 6, 0, 0), Err(EvalError::NotPrimePower(6)));
        assert_eq!(sum_mod_reduced(0, 5, 0, 0), Err(EvalError::NotPositive { what: "a" }));
    }

    #[test]
    fn reduced_p2_side_condition() {
        assert_eq!(reduced_exponent(2, 4, 1).unwrap(), 2);
        assert_eq!(
            reduced_exponent(2, 2, 2).unwrap_err(),
            EvalError::NotMultiple { a: 2, p_k: 4 }
        );
        assert_eq!(
            reduced_exponent(4, 2, 3).unwrap_err(),
            EvalError::NotMultiple { a: 4, p_k: 8 }
        );
        // q = 2, k = 3: period 8, representative 8 >= 4
        assert_eq!(reduced_exponent(24, 2, 3).unwrap(), 8);
        // q = 4, k = 3: period 24, a = 8 reduces to itself
        assert_eq!(reduced_exponent(8, 4, 3).unwrap(), 8);
    }

    #[test]
    fn carlitz_examples() {
        assert_eq!(carlitz_expression(3, 1, 1).unwrap(), BigUint::from(9u32));
        assert_eq!(carlitz_expression(5, 1, 1).unwrap(), BigUint::from(25u32));
        assert_eq!(carlitz_expression(2, 3, 1).unwrap(), BigUint::from(256u32));
        assert_eq!(carlitz_expression(4, 1, 1).unwrap(), BigUint::from(4u32));
        assert_eq!(carlitz_expression(6, 1, 1), Err(EvalError::NotPrimePower(6)));
    }

    #[test]
    fn full_row_sums_to_power_of_two() {
        for a in 0..80u64 {
            for d in 1..10 {
                let total: BigUint = row_sums_exact(a, d).unwrap().into_iter().sum();
                assert_eq!(total, BigUint::one() << a);
            }
        }
    }
}
