//! Unit groups `Z_n^x`: orders, primitive roots and the generator
//! constructions behind the multiplicative permutations.

use num_integer::Integer;

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs, ascending.
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
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `(p, k)` with `n = p^k`, if `n` is a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        &[(p, k)] => Some((p, k)),
        _ => None,
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = u128::from(modulus);
    let mut b = u128::from(base) % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Multiplicative order of `a` modulo `n`, or `None` if `a` is not a unit.
pub fn multiplicative_order(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    if a.gcd(&n) != 1 {
        return None;
    }
    // Strip prime factors from phi while the power stays 1.
    let mut order = euler_phi(n);
    for (p, _) in factorize(order) {
        while order.is_multiple_of(p) && mod_pow(a, order / p, n) == 1 {
            order /= p;
        }
    }
    Some(order)
}

pub fn is_generator(g: u64, n: u64) -> bool {
    multiplicative_order(g, n) == Some(euler_phi(n))
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Smallest generator of `Z_p^x` greater than 1.
pub fn primitive_root(p: u64) -> Result<u64> {
    require_odd_prime(p)?;
    (2..p)
        .find(|&g| is_generator(g, p))
        .ok_or_else(|| Error::Internal(format!("no primitive root found mod {p}")))
}

/// A generator of `Z_{p^k}^x` for every `k >= 1`: the smallest primitive root
/// `g0` mod `p` if `g0^(p-1) != 1 (mod p^2)`, else `g0 + p`.
pub fn simultaneous_generator(p: u64) -> Result<u64> {
    let g0 = primitive_root(p)?;
    let g = if mod_pow(g0, p - 1, p * p) != 1 {
        g0
    } else {
        g0 + p
    };
    // Generating mod p^2 implies generating mod every p^k.
    if !is_generator(g, p * p) {
        return Err(Error::Internal(format!(
            "{g} does not generate Z_{}^x",
            p * p
        )));
    }
    Ok(g)
}

/// An odd generator of `Z_{2p^j}^x` for all `1 <= j <= k`.
pub fn odd_generator_2pk(p: u64, k: u32) -> Result<u64> {
    if k == 0 {
        return Err(Error::Domain("exponent k must be at least 1".into()));
    }
    let g = simultaneous_generator(p)?;
    let pk = p
        .checked_pow(k)
        .ok_or_else(|| Error::Domain(format!("{p}^{k} overflows")))?;
    let odd = if g % 2 == 1 { g } else { g + pk };
    for j in 1..=k {
        let modulus = 2 * p.pow(j);
        if !is_generator(odd, modulus) {
            return Err(Error::Internal(format!(
                "{odd} does not generate Z_{modulus}^x"
            )));
        }
    }
    Ok(odd)
}

/// Smallest `i` in `Z_n` with `(1 - a) i = a j (mod n)`, i.e. a fixed point of
/// `i -> a (i + j)`.
pub fn shift_fixed_point(n: u64, a: u64, j: u64) -> Result<Option<u64>> {
    if n == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    let a = a % n;
    if a.gcd(&n) != 1 {
        return Err(Error::Domain(format!("{a} is not a unit mod {n}")));
    }
    let n_i = n as i128;
    let coef = (1 - a as i128).rem_euclid(n_i);
    let rhs = (a as i128 * (j % n) as i128).rem_euclid(n_i);
    let eg = coef.extended_gcd(&n_i);
    // coef = 0 only when n divides 1 - a
    let g = eg.gcd;
    if rhs % g != 0 {
        return Ok(None);
    }
    let reduced = n_i / g;
    let i = ((rhs / g) * eg.x).rem_euclid(reduced);
    Ok(Some(i as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(a: u64, n: u64) -> Option<u64> {
        if a.gcd(&n) != 1 {
            return None;
        }
        let mut x = a % n;
        let mut k = 1;
        while x != 1 % n {
            x = x * a % n;
            k += 1;
        }
        Some(k)
    }

    #[test]
    fn orders_match_brute_force() {
        for n in 1..200 {
            for a in 0..n.max(2) {
                assert_eq!(multiplicative_order(a, n), brute_order(a, n), "a={a} n={n}");
            }
        }
    }

    #[test]
    fn primes_and_factors() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(prime_power(243), Some((3, 5)));
        assert_eq!(prime_power(18), None);
        assert_eq!(euler_phi(18), 6);
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root(3).unwrap(), 2);
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(5).unwrap(), 2);
        assert_eq!(primitive_root(11).unwrap(), 2);
        assert!(matches!(primitive_root(2), Err(Error::Domain(_))));
        assert!(matches!(primitive_root(9), Err(Error::Domain(_))));
    }

    #[test]
    fn simultaneous_generator_examples() {
        assert_eq!(simultaneous_generator(7).unwrap(), 3);
        assert_eq!(simultaneous_generator(5).unwrap(), 2);
        assert_eq!(simultaneous_generator(3).unwrap(), 2);
        // 5 is the least primitive root mod 40487 and 5^40486 = 1 mod 40487^2.
        assert_eq!(primitive_root(40487).unwrap(), 5);
        assert_eq!(mod_pow(5, 40486, 40487 * 40487), 1);
        assert_eq!(simultaneous_generator(40487).unwrap(), 5 + 40487);
        for p in (3..500).filter(|&p| is_prime(p)) {
            let g = simultaneous_generator(p).unwrap();
            for k in 1..=3 {
                if let Some(pk) = p.checked_pow(k).filter(|&q| q < 2_000_000) {
                    assert!(is_generator(g, pk), "p={p} k={k}");
                }
            }
        }
    }

    #[test]
    fn odd_generator_examples() {
        assert_eq!(odd_generator_2pk(3, 1).unwrap(), 5);
        assert_eq!(odd_generator_2pk(5, 1).unwrap(), 7);
        let g = odd_generator_2pk(3, 2).unwrap();
        assert_eq!(g % 2, 1);
        assert_eq!(multiplicative_order(g, 18), Some(6));
        assert!(odd_generator_2pk(3, 0).is_err());
        assert!(odd_generator_2pk(4, 1).is_err());
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(shift_fixed_point(7, 3, 1).unwrap(), Some(2));
        assert_eq!((3 * (2 + 1)) % 7, 2);
        for n in 2..20 {
            for a in (1..n).filter(|a| a.gcd(&n) == 1) {
                assert_eq!(shift_fixed_point(n, a, 0).unwrap(), Some(0));
            }
        }
        assert_eq!(shift_fixed_point(6, 5, 1).unwrap(), None);
        assert!(shift_fixed_point(6, 2, 1).is_err());
    }

    #[test]
    fn fixed_points_agree_with_search() {
        for n in 1..40u64 {
            for a in (0..n.max(1)).filter(|a| a.gcd(&n) == 1) {
                let always = (a + n - 1).gcd(&n) == 1;
                for j in 0..n {
                    let brute = (0..n).find(|&i| (a * ((i + j) % n)) % n == i);
                    let got = shift_fixed_point(n, a, j).unwrap();
                    assert_eq!(got, brute, "n={n} a={a} j={j}");
                    if always {
                        assert!(got.is_some());
                    }
                }
            }
        }
    }
}
