//! Integer number theory used by the conic solver: factoring, squarefree
//! parts, exact square roots and square roots modulo primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;
const SMALL_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Complete factorization `sign · Π p^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub prime_powers: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn value(&self) -> BigInt {
        let mut v = BigInt::from(self.sign);
        for (p, e) in &self.prime_powers {
            v *= p.pow(*e);
        }
        v
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.prime_powers.iter().map(|(p, _)| p)
    }
}

/// `Some(r)` with `r² = n` when `n ≥ 0` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Prime factorization by trial division up to 10^6, then Pollard rho.
pub fn factor(n: &BigInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut found: Vec<BigInt> = Vec::new();

    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        if let Some(small) = m.to_u64() {
            if p.saturating_mul(p) > small {
                break;
            }
            if small % p == 0 {
                let mut s = small;
                while s % p == 0 {
                    s /= p;
                    found.push(BigInt::from(p));
                }
                m = BigInt::from(s);
            }
        } else if (&m % p as u32).is_zero() {
            while (&m % p as u32).is_zero() {
                m /= p as u32;
                found.push(BigInt::from(p));
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        let mut stack = vec![m];
        while let Some(c) = stack.pop() {
            if c.is_one() {
                continue;
            }
            if is_prime(&c) {
                found.push(c);
                continue;
            }
            if let Some(r) = exact_sqrt(&c) {
                stack.push(r.clone());
                stack.push(r);
                continue;
            }
            let d = pollard_brent(&c);
            stack.push(&c / &d);
            stack.push(d);
        }
    }
    found.sort();
    let mut prime_powers: Vec<(BigInt, u32)> = Vec::new();
    for q in found {
        match prime_powers.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => prime_powers.push((q, 1)),
        }
    }
    Ok(Factorization { sign, prime_powers })
}

/// `d` squarefree with `n = d·m²`, sign preserved.
pub fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    let f = factor(n)?;
    let mut d = BigInt::from(f.sign);
    for (p, e) in &f.prime_powers {
        if e % 2 == 1 {
            d *= p;
        }
    }
    Ok(d)
}

fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    // operands are < 2^63, so the product fits
    (a * b) % m
}

fn pow_mod_u128(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1u128 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u128(r, b, m);
        }
        b = mul_mod_u128(b, b, m);
        e >>= 1;
    }
    r
}

fn miller_rabin_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in SMALL_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let n128 = n as u128;
    let mut d = n128 - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL_BASES {
        let mut x = pow_mod_u128(a as u128, d, n128);
        if x == 1 || x == n128 - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n128);
            if x == n128 - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Deterministic below 2^63; strong-probable-prime test on 20 bases beyond.
pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    if let Some(small) = n.to_u64() {
        if small < (1u64 << 63) {
            return miller_rabin_u64(small);
        }
    }
    let bases: [u64; 20] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    ];
    for p in bases {
        if (n % p).is_zero() {
            return *n == BigInt::from(p);
        }
    }
    let nm1 = n - 1u32;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for a in bases {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent_u64(n: u64) -> u64 {
    let n128 = n as u128;
    let mut c: u128 = 1;
    loop {
        let f = |x: u128| (mul_mod_u128(x, x, n128) + c) % n128;
        let (mut y, m, mut g, mut r, mut q) = (2u128, 128u64, 1u128, 1u64, 1u128);
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod_u128(q, x.abs_diff(y), n128);
                }
                g = q.gcd(&n128);
                k += m;
            }
            r *= 2;
        }
        if g == n128 {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n128);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n128 {
            return g as u64;
        }
        c += 1;
    }
}

/// A nontrivial factor of the composite `n`.
fn pollard_brent(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    if let Some(small) = n.to_u64() {
        if small < (1u64 << 63) {
            return BigInt::from(pollard_brent_u64(small));
        }
    }
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c) % n;
        let m = 128u64;
        let (mut y, mut g, mut r, mut q) = (BigInt::from(2), BigInt::one(), 1u64, BigInt::one());
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (&q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
        c += 1;
    }
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: &BigInt, p: &BigInt) -> i32 {
    let r = a.mod_floor(p);
    if r.is_zero() {
        return 0;
    }
    let e = (p - 1u32) / 2u32;
    if r.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

/// Square root of `a` modulo the prime `p` (Tonelli–Shanks); the smaller
/// of the two roots is returned.
pub fn sqrt_mod_prime(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Some(BigInt::zero());
    }
    if *p == BigInt::from(2) {
        return Some(a);
    }
    if legendre(&a, p) != 1 {
        return None;
    }
    let one = BigInt::one();
    let pm1 = p - 1u32;
    let mut q = pm1.clone();
    let mut s = 0u32;
    while q.is_even() {
        q >>= 1;
        s += 1;
    }
    let mut z = BigInt::from(2);
    while legendre(&z, p) != -1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) / 2u32), p);
    while !t.is_one() {
        let mut i = 0u32;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = (&t2 * &t2) % p;
            i += 1;
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
        m = i;
        c = (&b * &b) % p;
        t = (&t * &c) % p;
        r = (&r * &b) % p;
    }
    let other = p - &r;
    Some(if other < r { other } else { r })
}

/// Chinese remaindering of `x ≡ r_i (mod m_i)` for pairwise coprime moduli.
pub fn crt(residues: &[(BigInt, BigInt)]) -> BigInt {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (r, mi) in residues {
        // x + m·k ≡ r (mod mi)
        let inv = mod_inverse(&m, mi).expect("moduli are coprime");
        let k = ((r - &x) * inv).mod_floor(mi);
        x += &m * k;
        m *= mi;
    }
    x.mod_floor(&m)
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}
