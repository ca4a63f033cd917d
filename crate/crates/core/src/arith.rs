//! Exact integer arithmetic helpers shared by the character and sieve code.

/// Greatest common divisor of two non-negative integers.
pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Least common multiple; panics on overflow in debug builds.
pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Modular exponentiation `base^exp mod m` for m > 0.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Prime factorisation by trial division, returned as (prime, exponent) pairs
/// in ascending prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0u32;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of n, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, k) in factorize(n) {
        let base = out.clone();
        let mut pe = 1u64;
        for _ in 0..k {
            pe *= p;
            out.extend(base.iter().map(|d| d * pe));
        }
    }
    out.sort_unstable();
    out
}

/// Euler totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    for (p, _) in factorize(n) {
        result -= result / p;
    }
    result
}

/// Möbius function in {-1, 0, 1}.
pub fn moebius(n: u64) -> i64 {
    assert!(n >= 1, "moebius requires n >= 1");
    let f = factorize(n);
    if f.iter().any(|&(_, k)| k > 1) {
        return 0;
    }
    if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Multiplicative order of a modulo m (requires gcd(a, m) = 1).
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    assert_eq!(gcd(a % m, m), 1, "order requires gcd(a,m)=1");
    let phi = euler_phi(m);
    let mut ord = phi;
    for (p, _) in factorize(phi) {
        while ord.is_multiple_of(p) && mod_pow(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    ord
}

/// Least primitive root modulo p^k for odd prime p.
///
/// Uses the classical lift: a primitive root r mod p works mod p^k unless
/// r^(p-1) ≡ 1 mod p², in which case r + p does.
pub fn primitive_root_odd_prime_power(p: u64, k: u32) -> u64 {
    debug_assert!(p % 2 == 1 && p > 2);
    let mut r = 2u64;
    loop {
        if multiplicative_order(r, p) == p - 1 {
            break;
        }
        r += 1;
    }
    if k == 1 {
        return r;
    }
    let p2 = p * p;
    if mod_pow(r, p - 1, p2) == 1 {
        r += p;
    }
    r
}

/// Modular inverse of a mod m (gcd(a,m) must be 1).
pub fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "mod_inverse requires gcd(a,m)=1");
    ((t % m as i128 + m as i128) % m as i128) as u64
}

/// Solve x ≡ a (mod m), x ≡ b (mod n) for coprime m, n; returns x mod mn.
pub fn crt(a: u64, m: u64, b: u64, n: u64) -> u64 {
    debug_assert_eq!(gcd(m, n), 1);
    let mn = m as u128 * n as u128;
    let inv_m = mod_inverse(m % n, n) as u128;
    let x = a as u128 + m as u128 * ((b as u128 + n as u128 - a as u128 % n as u128) % n as u128 * inv_m % n as u128);
    (x % mn) as u64
}
