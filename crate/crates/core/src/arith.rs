//! Word-sized number theory helpers shared by the evaluators and checkers.

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Reduces a signed integer into `[0, m)`.
#[inline]
pub fn reduce_signed(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Splits `q = p^f` with `p` prime and `f >= 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let (p, _) = *factor(q).first()?;
    let mut rest = q;
    let mut f = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        f += 1;
    }
    (rest == 1).then_some((p, f))
}

/// Trial-division factorisation; fine for the sizes used here.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// Multiplicative order of `p` modulo `d`; the order modulo 1 is taken to be 1.
pub fn multiplicative_order(p: u64, d: u64) -> Option<u32> {
    if d == 1 {
        return Some(1);
    }
    if num_integer::gcd(p, d) != 1 {
        return None;
    }
    let mut x = p % d;
    let mut f = 1;
    while x != 1 {
        x = mul_mod(x, p, d);
        f += 1;
    }
    Some(f)
}

/// `p`-adic valuation of a positive integer.
pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n > 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_match_sieve() {
        let mut sieve = vec![true; 2000];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..2000 {
            if sieve[i] {
                for j in (2 * i..2000).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (n, &expect) in sieve.iter().enumerate() {
            assert_eq!(is_prime(n as u64), expect, "n = {n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(0), None);
    }

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(2, 25), Some(13));
        assert_eq!(inv_mod(5, 25), None);
        assert_eq!(inv_mod(12, 5), Some(3));
    }

    #[test]
    fn orders() {
        assert_eq!(multiplicative_order(2, 3), Some(2));
        assert_eq!(multiplicative_order(5, 4), Some(1));
        assert_eq!(multiplicative_order(2, 7), Some(3));
        assert_eq!(multiplicative_order(2, 4), None);
        assert_eq!(multiplicative_order(7, 1), Some(1));
    }
}
