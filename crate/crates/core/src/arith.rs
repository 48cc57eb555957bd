//! Small-integer number theory used throughout the crate.

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Moebius function.
pub fn mobius(n: u64) -> i32 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// `a * b mod m` without overflow.
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut acc = 1u128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Multiplicative order of `a` modulo `m`; `None` when `gcd(a, m) != 1`.
/// The order modulo 1 is 1.
pub fn mult_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(a % m, m) != 1 {
        return None;
    }
    let phi = totient(m);
    let mut ord = phi;
    for p in prime_divisors(phi) {
        while ord.is_multiple_of(p) && pow_mod(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    Some(ord)
}

/// Splits `n = l^a * rest` with `gcd(l, rest) = 1`, returning `(a, l^a, rest)`.
pub fn split_prime_part(n: u64, l: u64) -> (u32, u64, u64) {
    let mut a = 0;
    let mut lp = 1;
    let mut rest = n;
    while rest.is_multiple_of(l) {
        rest /= l;
        lp *= l;
        a += 1;
    }
    (a, lp, rest)
}

/// Returns `(p, r)` with `q = p^r` when `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, r)] => Some((*p, *r)),
        _ => None,
    }
}

/// Least `j >= 0` with `l^j >= n`.
pub fn ceil_log(l: u64, n: u64) -> u32 {
    let mut j = 0;
    let mut pj = 1u64;
    while pj < n {
        pj *= l;
        j += 1;
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totients_and_mobius() {
        assert_eq!(totient(120), 32);
        assert_eq!(totient(1), 1);
        assert_eq!(totient(336), 96);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(1), 1);
    }

    #[test]
    fn orders() {
        assert_eq!(mult_order(2, 15), Some(4));
        assert_eq!(mult_order(2, 3), Some(2));
        assert_eq!(mult_order(3, 80), Some(4));
        assert_eq!(mult_order(2, 4), None);
        assert_eq!(mult_order(5, 1), Some(1));
    }

    #[test]
    fn prime_parts() {
        assert_eq!(split_prime_part(120, 2), (3, 8, 15));
        assert_eq!(split_prime_part(15, 2), (0, 1, 15));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(ceil_log(2, 4), 2);
        assert_eq!(ceil_log(2, 3), 2);
        assert_eq!(ceil_log(3, 1), 0);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }
}
