//! Integer factorization: a smallest-prime-factor sieve for small inputs,
//! trial division by the sieved primes, then Miller-Rabin and Pollard rho
//! for whatever survives.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub const DEFAULT_SIEVE_BOUND: u32 = 1_000_000;

/// Prime sieve plus factorization routines. Built once, read-only afterwards.
#[derive(Debug, Clone)]
pub struct Factorizer {
    bound: u32,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

static GLOBAL: OnceLock<Factorizer> = OnceLock::new();

/// The shared factorizer with the default sieve bound.
pub fn factorizer() -> &'static Factorizer {
    GLOBAL.get_or_init(|| Factorizer::new(DEFAULT_SIEVE_BOUND))
}

impl Factorizer {
    pub fn new(bound: u32) -> Self {
        let bound = bound.max(16);
        let n = bound as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                if p > si || (p as usize) * i > n {
                    break;
                }
                spf[p as usize * i] = p;
            }
        }
        Factorizer { bound, spf, primes }
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn is_prime_u64(&self, n: u64) -> bool {
        if n <= self.bound as u64 {
            return n >= 2 && self.spf[n as usize] as u64 == n;
        }
        is_prime_u64(n)
    }

    /// Prime factorization of `n`, ascending by prime. `n = 0` and `n = 1` give an empty list.
    pub fn factor_u64(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        if n < 2 {
            return out;
        }
        let push = |out: &mut Vec<(u64, u32)>, p: u64| match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        };
        if n > self.bound as u64 {
            for &p in &self.primes {
                let p = p as u64;
                if p * p > n {
                    break;
                }
                while n.is_multiple_of(p) {
                    push(&mut out, p);
                    n /= p;
                }
                if n <= self.bound as u64 {
                    break;
                }
            }
        }
        if n <= self.bound as u64 {
            while n > 1 {
                let p = self.spf[n as usize] as u64;
                push(&mut out, p);
                n /= p;
            }
            return out;
        }
        // n has no prime factor up to sqrt(n) among sieved primes only if the
        // loop above stopped early; split the rest with rho.
        let mut rest = Vec::new();
        split_u64(n, &mut rest);
        rest.sort_unstable();
        for p in rest {
            push(&mut out, p);
        }
        out.sort_unstable_by_key(|&(p, _)| p);
        out
    }

    /// Prime factorization of an arbitrary-size integer.
    pub fn factor_big(&self, n: &BigUint) -> Vec<(BigUint, u32)> {
        if let Some(small) = n.to_u64() {
            return self
                .factor_u64(small)
                .into_iter()
                .map(|(p, e)| (BigUint::from(p), e))
                .collect();
        }
        let mut n = n.clone();
        let mut out: Vec<(BigUint, u32)> = Vec::new();
        for &p in &self.primes {
            let pb = BigUint::from(p);
            let mut e = 0;
            while (&n % &pb).is_zero() {
                n /= &pb;
                e += 1;
            }
            if e > 0 {
                out.push((pb, e));
            }
            if n.is_one() {
                return out;
            }
        }
        if let Some(small) = n.to_u64() {
            for (p, e) in self.factor_u64(small) {
                out.push((BigUint::from(p), e));
            }
            return out;
        }
        let mut rest = Vec::new();
        split_big(n, &mut rest);
        rest.sort();
        for p in rest {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

fn rho_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn split_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = rho_u64(n);
    split_u64(d, out);
    split_u64(n / d, out);
}

fn is_probable_prime_big(n: &BigUint) -> bool {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_big(n: &BigUint) -> BigUint {
    let two = BigUint::from(2u32);
    if n.is_even() {
        return two;
    }
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut x, mut y, mut d) = (two.clone(), two.clone(), BigUint::one());
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}

fn split_big(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if let Some(small) = n.to_u64() {
        let mut v = Vec::new();
        split_u64(small, &mut v);
        out.extend(v.into_iter().map(BigUint::from));
        return;
    }
    if is_probable_prime_big(&n) {
        out.push(n);
        return;
    }
    let d = rho_big(&n);
    let q = &n / &d;
    split_big(d, out);
    split_big(q, out);
}
