//! Arithmetic in the Galois ring `GR(p^(k+1), f) = Z[x] / (p^(k+1), h(x))`.
//!
//! Besides the ring operations this module carries the unit-group toolkit
//! used by the congruence checkers: Teichmüller lifts, the splitting of a
//! unit into a root of unity times a one-unit, a truncated `p`-adic
//! logarithm on one-units, and the reflection `alpha -> (-1 - alpha)^(p^e)`
//! that permutes the nonzero Teichmüller elements.
//!
//! Coefficients are machine words. Every context keeps `p^(k+1) < 2^62`,
//! so sums of two residues never overflow and products go through `u128`.

use thiserror::Error;

use crate::arith::{self, add_mod, mul_mod, sub_mod};

const MODULUS_LIMIT: u64 = 1 << 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("ring GR({p}^{precision}, {f}) does not fit machine-word arithmetic")]
    TooLarge { p: u64, f: usize, precision: u32 },
    #[error("element does not belong to this ring")]
    ContextMismatch,
    #[error("element is not a unit")]
    NotUnit,
    #[error("{d} does not divide q - 1 = {q_minus_one}")]
    OrderNotDividing { d: u64, q_minus_one: u64 },
    #[error("logarithm is defined only on 1 + {0}R")]
    LogDomain(u64),
    #[error("reflection domain violated: {0}")]
    ReflectionDomain(&'static str),
}

/// Parameters of `GR(p^(k+1), f)` together with the chosen modulus polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrContext {
    p: u64,
    f: usize,
    k: u32,
    q: u64,
    modulus: u64,
    /// Monic, lowest degree first, `h.len() == f + 1`.
    h: Vec<u64>,
}

/// A residue of `Z[x] / (p^(k+1), h(x))`, stored as `f` coefficients in `[0, p^(k+1))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrElement {
    coeffs: Vec<u64>,
}

impl GrElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Constant coefficient.
    pub fn constant(&self) -> u64 {
        self.coeffs[0]
    }

    /// True when every coefficient of positive degree vanishes.
    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl GrContext {
    /// Builds `GR(p^(k+1), f)`.
    ///
    /// The modulus polynomial is the first monic degree-`f` polynomial,
    /// counting coefficient tuples in base `p` with the constant term as the
    /// lowest digit, that is irreducible modulo `p`. For `f = 1` this is `x`.
    pub fn new(p: u64, f: usize, k: u32) -> Result<Self, GrError> {
        if !arith::is_prime(p) {
            return Err(GrError::NotPrime(p));
        }
        if f == 0 {
            return Err(GrError::ZeroDegree);
        }
        let too_large = GrError::TooLarge { p, f, precision: k + 1 };
        let modulus = p
            .checked_pow(k + 1)
            .filter(|&m| m < MODULUS_LIMIT)
            .ok_or(too_large.clone())?;
        let q = u32::try_from(f)
            .ok()
            .and_then(|f| p.checked_pow(f))
            .filter(|&q| q < MODULUS_LIMIT)
            .ok_or(too_large)?;
        let h = first_irreducible(p, f);
        Ok(GrContext { p, f, k, q, modulus, h })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Size of the residue field, `p^f`.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Coefficient modulus `p^(k+1)`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Modulus polynomial, monic, lowest degree first.
    pub fn modulus_poly(&self) -> &[u64] {
        &self.h
    }

    /// Number of ring elements, `p^((k+1) f)`, if it fits a word.
    pub fn size(&self) -> Option<u64> {
        self.modulus.checked_pow(u32::try_from(self.f).ok()?)
    }

    /// Same modulus polynomial at precision `p^(k+1)`.
    pub fn with_precision(&self, k: u32) -> Result<Self, GrError> {
        let modulus = self
            .p
            .checked_pow(k + 1)
            .filter(|&m| m < MODULUS_LIMIT)
            .ok_or(GrError::TooLarge {
                p: self.p,
                f: self.f,
                precision: k + 1,
            })?;
        Ok(GrContext {
            k,
            modulus,
            ..self.clone()
        })
    }

    fn check(&self, x: &GrElement) -> Result<(), GrError> {
        if x.coeffs.len() == self.f && x.coeffs.iter().all(|&c| c < self.modulus) {
            Ok(())
        } else {
            Err(GrError::ContextMismatch)
        }
    }

    /// Element with the given coefficients, reduced into canonical range.
    pub fn element(&self, coeffs: &[i64]) -> Result<GrElement, GrError> {
        if coeffs.len() > self.f {
            return Err(GrError::ContextMismatch);
        }
        let mut out = vec![0; self.f];
        for (slot, &c) in out.iter_mut().zip(coeffs) {
            *slot = arith::reduce_signed(c as i128, self.modulus);
        }
        Ok(GrElement { coeffs: out })
    }

    pub fn from_int(&self, n: i64) -> GrElement {
        let mut coeffs = vec![0; self.f];
        coeffs[0] = arith::reduce_signed(n as i128, self.modulus);
        GrElement { coeffs }
    }

    pub fn zero(&self) -> GrElement {
        GrElement {
            coeffs: vec![0; self.f],
        }
    }

    pub fn one(&self) -> GrElement {
        self.from_int(1)
    }

    /// The residue-field element whose base-`p` digits (constant term lowest) spell `index`.
    pub fn residue_field_element(&self, mut index: u64) -> GrElement {
        let mut coeffs = vec![0; self.f];
        for c in coeffs.iter_mut() {
            *c = index % self.p;
            index /= self.p;
        }
        GrElement { coeffs }
    }

    /// Every element of the ring, in base-`p^(k+1)` counting order.
    pub fn elements(&self) -> impl Iterator<Item = GrElement> + '_ {
        let total = self.size().expect("ring too large to enumerate");
        (0..total).map(move |mut n| {
            let mut coeffs = vec![0; self.f];
            for c in coeffs.iter_mut() {
                *c = n % self.modulus;
                n /= self.modulus;
            }
            GrElement { coeffs }
        })
    }

    pub fn add(&self, x: &GrElement, y: &GrElement) -> Result<GrElement, GrError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_raw(x, y))
    }

    pub fn sub(&self, x: &GrElement, y: &GrElement) -> Result<GrElement, GrError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.sub_raw(x, y))
    }

    pub fn neg(&self, x: &GrElement) -> Result<GrElement, GrError> {
        self.check(x)?;
        Ok(self.sub_raw(&self.zero(), x))
    }

    pub fn mul(&self, x: &GrElement, y: &GrElement) -> Result<GrElement, GrError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_raw(x, y))
    }

    /// Multiplies by an integer scalar.
    pub fn scale(&self, x: &GrElement, n: i64) -> Result<GrElement, GrError> {
        self.check(x)?;
        let n = arith::reduce_signed(n as i128, self.modulus);
        Ok(GrElement {
            coeffs: x.coeffs.iter().map(|&c| mul_mod(c, n, self.modulus)).collect(),
        })
    }

    pub fn pow(&self, x: &GrElement, exp: u64) -> Result<GrElement, GrError> {
        self.check(x)?;
        Ok(self.pow_raw(x, exp))
    }

    fn add_raw(&self, x: &GrElement, y: &GrElement) -> GrElement {
        let coeffs = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(&a, &b)| add_mod(a, b, self.modulus))
            .collect();
        GrElement { coeffs }
    }

    fn sub_raw(&self, x: &GrElement, y: &GrElement) -> GrElement {
        let coeffs = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(&a, &b)| sub_mod(a, b, self.modulus))
            .collect();
        GrElement { coeffs }
    }

    fn mul_raw(&self, x: &GrElement, y: &GrElement) -> GrElement {
        let m = self.modulus;
        let f = self.f;
        let mut prod = vec![0u64; 2 * f - 1];
        for (i, &a) in x.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.coeffs.iter().enumerate() {
                prod[i + j] = add_mod(prod[i + j], mul_mod(a, b, m), m);
            }
        }
        // x^f = -(h_0 + h_1 x + ... + h_{f-1} x^{f-1})
        for i in (f..2 * f - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..f {
                let t = mul_mod(c, self.h[j], m);
                prod[i - f + j] = sub_mod(prod[i - f + j], t, m);
            }
        }
        prod.truncate(f);
        GrElement { coeffs: prod }
    }

    fn pow_raw(&self, x: &GrElement, mut exp: u64) -> GrElement {
        let mut base = x.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul_raw(&base, &base);
            }
        }
        acc
    }

    /// Raises to `p^times` by repeated `p`-th powering.
    fn pow_p_power(&self, x: &GrElement, times: u32) -> GrElement {
        (0..times).fold(x.clone(), |acc, _| self.pow_raw(&acc, self.p))
    }

    /// Largest `m <= k+1` with `p^m` dividing every coefficient.
    pub fn valuation(&self, x: &GrElement) -> Result<u32, GrError> {
        self.check(x)?;
        let cap = self.k + 1;
        Ok(x.coeffs
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| arith::valuation_u64(c, self.p).min(cap))
            .min()
            .unwrap_or(cap))
    }

    /// An element is a unit iff its reduction modulo `p` is nonzero.
    pub fn is_unit(&self, x: &GrElement) -> Result<bool, GrError> {
        self.check(x)?;
        Ok(x.coeffs.iter().any(|&c| c % self.p != 0))
    }

    /// Inverts the reduction modulo `p` in the residue field, then lifts by
    /// Newton iteration `v <- v (2 - u v)`, doubling the precision each step.
    pub fn inv(&self, u: &GrElement) -> Result<GrElement, GrError> {
        if !self.is_unit(u)? {
            return Err(GrError::NotUnit);
        }
        let p = self.p;
        let reduced: Vec<u64> = u.coeffs.iter().map(|&c| c % p).collect();
        let h_mod_p: Vec<u64> = self.h.iter().map(|&c| c % p).collect();
        let v0 = fp::inverse_mod(&reduced, &h_mod_p, p).ok_or(GrError::NotUnit)?;
        let mut v = self.zero();
        for (slot, c) in v.coeffs.iter_mut().zip(v0) {
            *slot = c;
        }
        let two = self.from_int(2);
        let mut precision = 1;
        while precision < self.k + 1 {
            let uv = self.mul_raw(u, &v);
            v = self.mul_raw(&v, &self.sub_raw(&two, &uv));
            precision *= 2;
        }
        Ok(v)
    }

    /// The unique `t` with `t^q = t` and `t = x (mod p)`.
    ///
    /// `k + 1` successive `q`-th powers always land on the fixed point: the
    /// one-unit part has exponent dividing `p^k`, and a non-unit reaches
    /// valuation at least `q^(k+1) > k + 1`.
    pub fn teichmuller(&self, x: &GrElement) -> Result<GrElement, GrError> {
        self.check(x)?;
        Ok((0..=self.k).fold(x.clone(), |acc, _| self.pow_raw(&acc, self.q)))
    }

    pub fn is_teichmuller(&self, x: &GrElement) -> Result<bool, GrError> {
        Ok(self.pow(x, self.q)? == *x)
    }

    /// Order of the unit group, `(q - 1) q^k`, in factored form.
    fn unit_group_order_factored(&self) -> Vec<(u64, u32)> {
        let mut fs = arith::factor(self.q - 1);
        if self.k > 0 {
            fs.push((self.p, self.f as u32 * self.k));
        }
        fs
    }

    /// Multiplicative order of a unit.
    pub fn order(&self, u: &GrElement) -> Result<u64, GrError> {
        if !self.is_unit(u)? {
            return Err(GrError::NotUnit);
        }
        let factored = self.unit_group_order_factored();
        let too_large = GrError::TooLarge {
            p: self.p,
            f: self.f,
            precision: self.k + 1,
        };
        let mut order = 1u64;
        for &(l, e) in &factored {
            order = l
                .checked_pow(e)
                .and_then(|x| order.checked_mul(x))
                .ok_or(too_large.clone())?;
        }
        for &(l, e) in &factored {
            for _ in 0..e {
                if self.pow_raw(u, order / l) == self.one() {
                    order /= l;
                } else {
                    break;
                }
            }
        }
        Ok(order)
    }

    /// A Teichmüller element of exact multiplicative order `d`, where `d | q - 1`.
    ///
    /// Searches residue-field elements in counting order for one whose lift
    /// generates the roots of unity of order `q - 1`, then raises it to `(q - 1)/d`.
    pub fn teichmuller_generator(&self, d: u64) -> Result<GrElement, GrError> {
        let q1 = self.q - 1;
        if d == 0 || !q1.is_multiple_of(d) {
            return Err(GrError::OrderNotDividing { d, q_minus_one: q1 });
        }
        let primes: Vec<u64> = arith::factor(q1).into_iter().map(|(l, _)| l).collect();
        let one = self.one();
        for index in 1..self.q {
            let t = self.teichmuller(&self.residue_field_element(index))?;
            if primes.iter().all(|&l| self.pow_raw(&t, q1 / l) != one) {
                return Ok(self.pow_raw(&t, q1 / d));
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    /// All `d`-th roots of unity among the Teichmüller elements, as powers of one generator.
    pub fn roots_of_unity(&self, d: u64) -> Result<Vec<GrElement>, GrError> {
        let omega = self.teichmuller_generator(d)?;
        let mut out = Vec::with_capacity(d as usize);
        let mut x = self.one();
        for _ in 0..d {
            out.push(x.clone());
            x = self.mul_raw(&x, &omega);
        }
        Ok(out)
    }

    /// Splits a unit as `u = t w` with `t^(q-1) = 1` and `w = 1 (mod p)`.
    pub fn unit_decompose(&self, u: &GrElement) -> Result<(GrElement, GrElement), GrError> {
        if !self.is_unit(u)? {
            return Err(GrError::NotUnit);
        }
        let t = self.teichmuller(u)?;
        let w = self.mul_raw(u, &self.inv(&t)?);
        Ok((t, w))
    }

    /// Truncated logarithm `sum_{j>=1} (-1)^(j-1) g^j / j` with `g = u - 1`.
    ///
    /// Defined for `u = 1 (mod p)` when `p` is odd and `u = 1 (mod 4)` when
    /// `p = 2`. Terms with `j - floor(log_p j) > k` vanish modulo `p^(k+1)`;
    /// the surviving powers are formed at precision `p^(k+1+E)`,
    /// `E = floor(log_p J)`, so the division by `p^(v_p(j))` is exact.
    pub fn padic_log(&self, u: &GrElement) -> Result<GrElement, GrError> {
        self.check(u)?;
        let p = self.p;
        let gamma = self.sub_raw(u, &self.one());
        let needed = if p == 2 { 2.min(self.k + 1) } else { 1 };
        if self.valuation(&gamma)? < needed {
            return Err(GrError::LogDomain(if p == 2 { 4 } else { p }));
        }
        let ilog = |j: u64| j.ilog(p);
        let mut last = 0u64;
        while (last + 1) - ilog(last + 1) as u64 <= self.k as u64 {
            last += 1;
        }
        if last == 0 {
            return Ok(self.zero());
        }
        let extra = ilog(last);
        let wide = self.with_precision(self.k + extra)?;
        let gamma_wide = GrElement {
            coeffs: gamma.coeffs.clone(),
        };
        let mut power = wide.one();
        let mut acc = self.zero();
        for j in 1..=last {
            power = wide.mul_raw(&power, &gamma_wide);
            let v = arith::valuation_u64(j, p);
            let p_v = p.pow(v);
            let unit_part = j / p_v;
            let term = GrElement {
                coeffs: power
                    .coeffs
                    .iter()
                    .map(|&c| {
                        debug_assert_eq!(c % p_v, 0);
                        (c / p_v) % self.modulus
                    })
                    .collect(),
            };
            let inv_j = arith::inv_mod(unit_part % self.modulus, self.modulus).expect("unit part prime to p");
            let term = GrElement {
                coeffs: term.coeffs.iter().map(|&c| mul_mod(c, inv_j, self.modulus)).collect(),
            };
            acc = if j % 2 == 1 {
                self.add_raw(&acc, &term)
            } else {
                self.sub_raw(&acc, &term)
            };
        }
        Ok(acc)
    }

    /// `alpha -> (-1 - alpha)^(p^exponent)` on the nonzero Teichmüller elements.
    ///
    /// The excluded point is `-1` for odd `p` and `1` for `p = 2`, where the
    /// image would not be a unit. The image is Teichmüller only once
    /// `exponent >= k`, so smaller exponents are rejected.
    pub fn reflection(&self, alpha: &GrElement, exponent: u32) -> Result<GrElement, GrError> {
        self.check(alpha)?;
        if !self.is_unit(alpha)? || !self.is_teichmuller(alpha)? {
            return Err(GrError::ReflectionDomain(
                "argument is not a nonzero Teichmüller element",
            ));
        }
        if self.p == 2 {
            if *alpha == self.one() {
                return Err(GrError::ReflectionDomain("alpha = 1 is excluded for p = 2"));
            }
        } else if *alpha == self.from_int(-1) {
            return Err(GrError::ReflectionDomain("alpha = -1 is excluded for odd p"));
        }
        if exponent < self.k {
            return Err(GrError::ReflectionDomain(
                "exponent must be at least the precision exponent k",
            ));
        }
        let base = self.sub_raw(&self.from_int(-1), alpha);
        Ok(self.pow_p_power(&base, exponent))
    }
}

fn first_irreducible(p: u64, f: usize) -> Vec<u64> {
    if f == 1 {
        return vec![0, 1];
    }
    let count = p.pow(f as u32);
    for mut n in 0..count {
        let mut h = vec![0u64; f + 1];
        for c in h.iter_mut().take(f) {
            *c = n % p;
            n /= p;
        }
        h[f] = 1;
        if fp::is_irreducible(&h, p) {
            return h;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Dense polynomials over the prime field, lowest degree first.
pub(crate) mod fp {
    use crate::arith::{inv_mod, mul_mod, sub_mod};

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| sub_mod(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0), p))
            .collect();
        trim(out)
    }

    fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        trim(out)
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let b = trim(b.to_vec());
        let lead_inv = inv_mod(*b.last().expect("division by zero polynomial"), p).expect("prime modulus");
        let mut rem = trim(a.to_vec());
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let mut quot = vec![0; rem.len() - b.len() + 1];
        while rem.len() >= b.len() {
            let shift = rem.len() - b.len();
            let c = mul_mod(*rem.last().unwrap(), lead_inv, p);
            quot[shift] = c;
            for (i, &bi) in b.iter().enumerate() {
                rem[shift + i] = sub_mod(rem[shift + i], mul_mod(c, bi, p), p);
            }
            rem = trim(rem);
        }
        (trim(quot), rem)
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        divmod(a, b, p).1
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    fn powmod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1];
        let mut base = rem(base, m, p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(&acc, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            exp >>= 1;
        }
        acc
    }

    /// Ben-Or: `h` of degree `f` is irreducible iff `gcd(x^(p^i) - x, h) = 1` for `i <= f/2`.
    pub fn is_irreducible(h: &[u64], p: u64) -> bool {
        let h = trim(h.to_vec());
        let f = h.len() - 1;
        if f == 0 {
            return false;
        }
        let x = vec![0, 1];
        let mut xp = x.clone();
        for _ in 1..=f / 2 {
            xp = powmod(&xp, p, &h, p);
            let g = gcd(&h, &sub(&xp, &x, p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }

    /// Inverse of `a` in `F_p[x]/(m)`, if it exists.
    pub fn inverse_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
        let (mut r0, mut r1) = (trim(m.to_vec()), rem(a, m, p));
        let (mut t0, mut t1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (quot, r2) = divmod(&r0, &r1, p);
            let t2 = sub(&t0, &mul(&quot, &t1, p), p);
            (r0, r1) = (r1, r2);
            (t0, t1) = (t1, t2);
        }
        if r0.len() != 1 {
            return None;
        }
        let c = inv_mod(r0[0], p)?;
        Some(trim(t0.iter().map(|&t| mul_mod(t, c, p)).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u64, k: u32) -> GrContext {
        GrContext::new(p, 1, k).unwrap()
    }

    /// Irreducibility by exhaustive search for monic factors of degree <= f/2.
    fn irreducible_brute(h: &[u64], p: u64) -> bool {
        let f = h.len() - 1;
        for deg in 1..=f / 2 {
            for mut n in 0..p.pow(deg as u32) {
                let mut g = vec![0; deg + 1];
                for c in g.iter_mut().take(deg) {
                    *c = n % p;
                    n /= p;
                }
                g[deg] = 1;
                if fp::rem(h, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn context_degree_one_is_integers_mod_prime_power() {
        let ctx = z(5, 1);
        assert_eq!(ctx.modulus(), 25);
        assert_eq!(ctx.q(), 5);
        assert_eq!(ctx.modulus_poly(), &[0, 1]);
    }

    #[test]
    fn context_rejects_composite() {
        assert_eq!(GrContext::new(6, 1, 0), Err(GrError::NotPrime(6)));
        assert_eq!(GrContext::new(3, 0, 0), Err(GrError::ZeroDegree));
    }

    #[test]
    fn modulus_polynomials_are_first_irreducibles() {
        let c = GrContext::new(3, 2, 0).unwrap();
        assert_eq!(c.modulus_poly(), &[1, 0, 1]);
        let c = GrContext::new(2, 3, 2).unwrap();
        assert_eq!(c.modulus_poly(), &[1, 1, 0, 1]);
        assert_eq!(c.q(), 8);
        assert_eq!(c.modulus(), 8);
        for (p, f) in [(2, 2), (2, 4), (3, 3), (5, 2), (7, 2), (2, 5)] {
            let c = GrContext::new(p, f, 0).unwrap();
            let h = c.modulus_poly();
            assert!(irreducible_brute(h, p));
            // nothing earlier in counting order is irreducible
            let index: u64 = h[..f].iter().rev().fold(0, |acc, &c| acc * p + c);
            for n in 0..index {
                let mut g = vec![0; f + 1];
                let mut m = n;
                for c in g.iter_mut().take(f) {
                    *c = m % p;
                    m /= p;
                }
                g[f] = 1;
                assert!(!irreducible_brute(&g, p));
            }
        }
    }

    #[test]
    fn ben_or_matches_brute_force() {
        for p in [2u64, 3, 5] {
            for f in 1..=4usize {
                for mut n in 0..p.pow(f as u32) {
                    let mut h = vec![0; f + 1];
                    for c in h.iter_mut().take(f) {
                        *c = n % p;
                        n /= p;
                    }
                    h[f] = 1;
                    assert_eq!(fp::is_irreducible(&h, p), irreducible_brute(&h, p), "{h:?} mod {p}");
                }
            }
        }
    }

    #[test]
    fn integer_subring_arithmetic() {
        let ctx = z(5, 1);
        let two = ctx.from_int(2);
        let three = ctx.from_int(3);
        assert_eq!(ctx.mul(&two, &three).unwrap(), ctx.from_int(6));
        assert_eq!(ctx.pow(&ctx.from_int(7), 4).unwrap(), ctx.one());
        assert_eq!(ctx.pow(&ctx.from_int(13), 0).unwrap(), ctx.one());
        assert_eq!(ctx.neg(&two).unwrap(), ctx.from_int(23));
    }

    #[test]
    fn mismatched_elements_are_rejected() {
        let a = z(5, 1);
        let b = GrContext::new(5, 2, 1).unwrap();
        assert_eq!(a.add(&a.one(), &b.one()), Err(GrError::ContextMismatch));
        let big = z(7, 1).from_int(40);
        assert_eq!(a.mul(&a.one(), &big), Err(GrError::ContextMismatch));
    }

    #[test]
    fn inverse_examples() {
        let ctx = z(5, 1);
        assert_eq!(ctx.inv(&ctx.from_int(2)).unwrap(), ctx.from_int(13));
        assert_eq!(ctx.inv(&ctx.one()).unwrap(), ctx.one());
        assert_eq!(ctx.inv(&ctx.from_int(5)), Err(GrError::NotUnit));
    }

    #[test]
    fn inverse_in_extension_rings() {
        for (p, f, k) in [(2, 3, 3), (3, 2, 2), (5, 2, 1), (2, 2, 4)] {
            let ctx = GrContext::new(p, f, k).unwrap();
            for u in ctx.elements().filter(|u| ctx.is_unit(u).unwrap()).step_by(7) {
                let v = ctx.inv(&u).unwrap();
                assert_eq!(ctx.mul(&u, &v).unwrap(), ctx.one());
            }
        }
    }

    #[test]
    fn teichmuller_examples() {
        let ctx = z(5, 1);
        assert_eq!(ctx.teichmuller(&ctx.from_int(2)).unwrap(), ctx.from_int(7));
        assert_eq!(ctx.teichmuller(&ctx.one()).unwrap(), ctx.one());
        assert_eq!(ctx.teichmuller(&ctx.zero()).unwrap(), ctx.zero());
        assert_eq!(ctx.teichmuller(&ctx.from_int(5)).unwrap(), ctx.zero());
        let ctx = z(3, 1);
        assert_eq!(ctx.teichmuller(&ctx.from_int(2)).unwrap(), ctx.from_int(8));
    }

    #[test]
    fn generator_examples() {
        let ctx = z(5, 1);
        let w = ctx.teichmuller_generator(4).unwrap();
        assert_eq!(w, ctx.from_int(7));
        assert_eq!(ctx.pow(&w, 2).unwrap(), ctx.from_int(-1));
        assert_eq!(ctx.teichmuller_generator(1).unwrap(), ctx.one());
        assert_eq!(z(3, 1).teichmuller_generator(2).unwrap(), z(3, 1).from_int(8));
        assert_eq!(
            ctx.teichmuller_generator(3),
            Err(GrError::OrderNotDividing { d: 3, q_minus_one: 4 })
        );
    }

    #[test]
    fn generator_has_exact_order() {
        for (p, f, k) in [(2, 2, 2), (2, 3, 1), (3, 2, 2), (5, 2, 1), (7, 1, 3)] {
            let ctx = GrContext::new(p, f, k).unwrap();
            let q1 = ctx.q() - 1;
            for d in (1..=q1).filter(|d| q1.is_multiple_of(*d)) {
                let w = ctx.teichmuller_generator(d).unwrap();
                assert_eq!(ctx.order(&w).unwrap(), d);
                assert!(ctx.is_teichmuller(&w).unwrap());
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let ctx = z(5, 1);
        assert_eq!(
            ctx.unit_decompose(&ctx.from_int(7)).unwrap(),
            (ctx.from_int(7), ctx.one())
        );
        assert_eq!(ctx.unit_decompose(&ctx.one()).unwrap(), (ctx.one(), ctx.one()));
        let six = ctx.from_int(6);
        let (t, w) = ctx.unit_decompose(&six).unwrap();
        assert_eq!(ctx.mul(&t, &w).unwrap(), six);
        assert_eq!(w.constant() % 5, 1);
        assert_eq!(ctx.pow(&t, 4).unwrap(), ctx.one());
        assert_eq!(ctx.unit_decompose(&ctx.from_int(10)), Err(GrError::NotUnit));
    }

    #[test]
    fn log_examples() {
        let ctx = z(5, 1);
        assert_eq!(ctx.padic_log(&ctx.from_int(6)).unwrap(), ctx.from_int(5));
        assert_eq!(ctx.padic_log(&ctx.one()).unwrap(), ctx.zero());
        assert_eq!(ctx.padic_log(&ctx.from_int(11)).unwrap(), ctx.from_int(10));
        assert_eq!(ctx.padic_log(&ctx.from_int(2)), Err(GrError::LogDomain(5)));
        let two = z(2, 3);
        assert_eq!(two.padic_log(&two.from_int(3)), Err(GrError::LogDomain(4)));
    }

    #[test]
    fn log_matches_exact_rational_series() {
        // log(1 + 3t) in Z/3^4 against the rational series summed far past truncation
        use num_bigint::BigInt;
        use num_rational::BigRational;
        use num_traits::{One, ToPrimitive, Zero};
        let ctx = z(3, 3);
        let m = BigInt::from(81);
        for t in 0..27i64 {
            let gamma = BigRational::from_integer(BigInt::from(3 * t));
            let mut sum = BigRational::zero();
            let mut pow = BigRational::one();
            for j in 1..=40i64 {
                pow = &pow * &gamma;
                let term = &pow / BigRational::from_integer(BigInt::from(j));
                sum = if j % 2 == 1 { sum + term } else { sum - term };
            }
            let num = sum.numer().clone();
            let den = sum.denom().clone();
            // denominator has no factor 3 after reduction beyond what the numerator cancels
            let den_mod = ((den % &m + &m) % &m).to_u64().unwrap();
            let inv = arith::inv_mod(den_mod, 81).unwrap();
            let expect = arith::mul_mod(((num % &m + &m) % &m).to_u64().unwrap(), inv, 81);
            assert_eq!(
                ctx.padic_log(&ctx.from_int(1 + 3 * t)).unwrap(),
                ctx.from_int(expect as i64),
                "t = {t}"
            );
        }
    }

    #[test]
    fn valuation_examples() {
        let ctx = z(5, 1);
        assert_eq!(ctx.valuation(&ctx.from_int(10)).unwrap(), 1);
        assert_eq!(ctx.valuation(&ctx.zero()).unwrap(), 2);
        assert_eq!(ctx.valuation(&ctx.from_int(7)).unwrap(), 0);
    }

    #[test]
    fn reflection_examples() {
        let ctx = z(5, 1);
        let beta = ctx.reflection(&ctx.from_int(7), 1).unwrap();
        assert_eq!(ctx.pow(&beta, 4).unwrap(), ctx.one());
        assert_ne!(beta, ctx.from_int(-1));
        assert!(matches!(
            ctx.reflection(&ctx.zero(), 1),
            Err(GrError::ReflectionDomain(_))
        ));
        assert!(matches!(
            ctx.reflection(&ctx.from_int(-1), 1),
            Err(GrError::ReflectionDomain(_))
        ));
        // (-2)^1 = 7 in Z/9 is not Teichmüller, so exponent 0 is refused at k = 1
        let z9 = z(3, 1);
        assert!(!z9.is_teichmuller(&z9.from_int(7)).unwrap());
        assert!(matches!(z9.reflection(&z9.one(), 0), Err(GrError::ReflectionDomain(_))));
        let z3 = z(3, 0);
        assert_eq!(z3.reflection(&z3.one(), 0).unwrap(), z3.one());
        let two = GrContext::new(2, 2, 2).unwrap();
        assert!(matches!(
            two.reflection(&two.one(), 2),
            Err(GrError::ReflectionDomain(_))
        ));
    }
}
