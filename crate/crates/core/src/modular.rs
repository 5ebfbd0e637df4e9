//! Multi-modular kernels of rational matrices.
//!
//! Row reduction runs modulo word-sized primes; the free part of the reduced
//! echelon form is lifted by CRT and rational reconstruction. A candidate
//! basis is accepted only after `A·v = 0` is checked exactly, and since the
//! rank over `Q` is at least the rank modulo `p`, a verified candidate with
//! `cols − rank_p` vectors spans the whole rational kernel.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::is_prime;
use crate::field::Rational;
use crate::linalg::Mat;

const MAX_PRIMES: usize = 200;

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Primes just below 2^62, in decreasing order.
fn primes() -> impl Iterator<Item = u64> {
    let mut n = (1u64 << 62) - 1;
    std::iter::from_fn(move || loop {
        n -= 2;
        if is_prime(&BigInt::from(n)) {
            return Some(n);
        }
    })
}

pub(crate) fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

/// Matrix modulo `p`, or `None` if `p` divides a denominator.
pub(crate) fn to_mod_p(m: &Mat<Rational>, p: u64) -> Option<Vec<u64>> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for x in m.entries() {
        if x.is_zero() {
            out.push(0);
            continue;
        }
        let d = reduce(x.denom(), p);
        if d == 0 {
            return None;
        }
        out.push(mul_mod(reduce(x.numer(), p), inv_mod(d, p), p));
    }
    Some(out)
}

/// In-place RREF modulo `p`; returns pivot columns.
pub(crate) fn rref_mod(data: &mut [u64], rows: usize, cols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                data.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = inv_mod(data[r * cols + c], p);
        for j in c..cols {
            data[r * cols + j] = mul_mod(data[r * cols + j], inv, p);
        }
        let nz: Vec<(usize, u64)> = (c..cols)
            .filter(|&j| data[r * cols + j] != 0)
            .map(|j| (j, data[r * cols + j]))
            .collect();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = data[i * cols + c];
            if f == 0 {
                continue;
            }
            for &(j, v) in &nz {
                let t = mul_mod(f, v, p);
                let cur = data[i * cols + j];
                data[i * cols + j] = if cur >= t { cur - t } else { cur + p - t };
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// `n/d ≡ u (mod m)` with `|n|, d ≤ √(m/2)`.
fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    if t1.sign() == Sign::Minus {
        r1 = -r1;
        t1 = -t1;
    }
    Some(Rational::new(r1, t1))
}

/// Kernel basis `{e_f − Σ R[i][f] e_{pivot_i}}` over the free columns, or
/// `None` if no verified answer was reached.
pub fn kernel_rational(m: &Mat<Rational>) -> Option<Vec<Vec<Rational>>> {
    let (rows, cols) = (m.rows(), m.cols());
    kernel_by_primes(
        cols,
        |p| to_mod_p(m, p).map(|d| (rows, d)),
        |basis| basis.iter().all(|v| m.mul_vec(v).iter().all(Zero::is_zero)),
    )
}

/// Multi-modular kernel of a matrix known only through its reductions:
/// `reduce(p)` gives `(rows, entries)` modulo `p` (or `None` for a bad
/// prime) and `check` decides exactly whether a candidate basis lies in the
/// rational kernel. The reductions must contain the reduction of every
/// rational kernel vector, so that a checked candidate of full size is the
/// whole kernel.
pub(crate) fn kernel_by_primes(
    cols: usize,
    mut reduce: impl FnMut(u64) -> Option<(usize, Vec<u64>)>,
    check: impl Fn(&[Vec<Rational>]) -> bool,
) -> Option<Vec<Vec<Rational>>> {
    let mut best_pivots: Option<Vec<usize>> = None;
    let mut residues: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut free: Vec<usize> = Vec::new();
    for p in primes().take(MAX_PRIMES) {
        let Some((rows, mut data)) = reduce(p) else {
            continue;
        };
        let pivots = rref_mod(&mut data, rows, cols, p);
        let accept = match &best_pivots {
            None => true,
            Some(b) => {
                if pivots.len() > b.len() || (pivots.len() == b.len() && pivots < *b) {
                    true
                } else if pivots != *b {
                    continue;
                } else {
                    false
                }
            }
        };
        let is_pivot = {
            let mut v = vec![false; cols];
            for &c in &pivots {
                v[c] = true;
            }
            v
        };
        let image: Vec<u64> = {
            let fr: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
            let mut img = Vec::with_capacity(pivots.len() * fr.len());
            for i in 0..pivots.len() {
                for &f in &fr {
                    img.push(data[i * cols + f]);
                }
            }
            if accept {
                free = fr;
            }
            img
        };
        if accept {
            best_pivots = Some(pivots);
            residues = image.into_iter().map(BigInt::from).collect();
            modulus = BigInt::from(p);
        } else {
            let pb = BigInt::from(p);
            let inv = crate::arith::mod_inverse(&modulus, &pb).expect("distinct primes");
            for (r, x) in residues.iter_mut().zip(image) {
                let k = ((BigInt::from(x) - &*r) * &inv).mod_floor(&pb);
                *r += &modulus * k;
            }
            modulus *= &pb;
        }
        let pivots = best_pivots.as_ref().unwrap();
        if free.is_empty() {
            return Some(Vec::new());
        }
        let Some(vals) = residues
            .iter()
            .map(|r| rational_reconstruct(r, &modulus))
            .collect::<Option<Vec<Rational>>>()
        else {
            continue;
        };
        let nf = free.len();
        let basis: Vec<Vec<Rational>> = free
            .iter()
            .enumerate()
            .map(|(fi, &f)| {
                let mut v = vec![Rational::zero(); cols];
                v[f] = Rational::one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = -vals[i * nf + fi].clone();
                }
                v
            })
            .collect();
        if check(&basis) {
            return Some(basis);
        }
    }
    None
}
