//! LLL reduction of integer lattice bases, in the all-integer variant that
//! tracks Gram–Schmidt data through the subdeterminants `d_i` and the
//! scaled coefficients `λ_ij = d_j μ_ij`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::Rational;
use crate::linalg::{Mat, Subspace};

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `a / b`, `b > 0`, ties rounded up.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    (a * 2u32 + b).div_floor(&(b * 2u32))
}

struct State {
    b: Vec<Vec<BigInt>>,
    // 1-based: d[0] = 1, d[i] for the first i vectors
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
}

impl State {
    fn red(&mut self, k: usize, l: usize) {
        let two_lam: BigInt = &self.lam[k][l] * 2u32;
        if two_lam.abs() <= self.d[l] {
            return;
        }
        let q = round_div(&self.lam[k][l], &self.d[l]);
        let bl = self.b[l - 1].clone();
        for (x, y) in self.b[k - 1].iter_mut().zip(&bl) {
            *x -= &q * y;
        }
        self.lam[k][l] -= &q * &self.d[l];
        for i in 1..l {
            let t = &q * &self.lam[l][i];
            self.lam[k][i] -= t;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.b.swap(k - 1, k - 2);
        for j in 1..k - 1 {
            let t = self.lam[k][j].clone();
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], t);
        }
        let lambda = self.lam[k][k - 1].clone();
        let bb = (&self.d[k - 2] * &self.d[k] + &lambda * &lambda) / &self.d[k - 1];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k] * &self.lam[i][k - 1] - &lambda * &t) / &self.d[k - 1];
            self.lam[i][k - 1] = (&bb * &t + &lambda * &self.lam[i][k]) / &self.d[k];
        }
        self.d[k - 1] = bb;
    }
}

/// LLL-reduced basis (`δ = 3/4`) of the lattice spanned by independent
/// integer vectors.
pub fn lll_reduce(basis: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let n = basis.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut st = State {
        b: basis.to_vec(),
        d: vec![BigInt::zero(); n + 1],
        lam: vec![vec![BigInt::zero(); n + 1]; n + 1],
    };
    st.d[0] = BigInt::from(1);
    st.d[1] = dot(&st.b[0], &st.b[0]);
    if st.d[1].is_zero() {
        return Err(Error::InvalidArgument("lattice basis is dependent".into()));
    }
    let (mut k, mut kmax) = (2, 1);
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&st.b[k - 1], &st.b[j - 1]);
                for i in 1..j {
                    u = (&st.d[i] * &u - &st.lam[k][i] * &st.lam[j][i]) / &st.d[i - 1];
                }
                if j < k {
                    st.lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::InvalidArgument("lattice basis is dependent".into()));
                    }
                    st.d[k] = u;
                }
            }
        }
        loop {
            st.red(k, k - 1);
            let lhs: BigInt = &st.d[k] * &st.d[k - 2] * 4u32;
            let rhs: BigInt =
                &st.d[k - 1] * &st.d[k - 1] * 3u32 - &st.lam[k][k - 1] * &st.lam[k][k - 1] * 4u32;
            if lhs < rhs {
                st.swap(k, kmax);
                k = (k - 1).max(2);
            } else {
                break;
            }
        }
        for l in (1..k - 1).rev() {
            st.red(k, l);
        }
        k += 1;
    }
    Ok(st.b)
}

/// Basis of `V ∩ Z^n` for the rational span `V` of the given independent
/// vectors. An integral vector of `V` is `Σ c_i r_i` over the echelon basis
/// `r_i` with `c_i ∈ Z`, so the coefficient lattice starts as `Z^k` and is
/// cut down column by column to those `c` with `Σ c_i r_i[j]` integral.
pub fn saturate(vectors: &[Vec<Rational>]) -> Result<Vec<Vec<BigInt>>> {
    let Some(first) = vectors.first() else {
        return Ok(Vec::new());
    };
    let n = first.len();
    let space = Subspace::from_spanning(n, vectors.to_vec());
    let k = space.dim();
    if k != vectors.len() {
        return Err(Error::InvalidArgument("lattice basis is dependent".into()));
    }
    let r = space.basis();
    let mut u: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| BigInt::from((i == j) as u32)).collect())
        .collect();
    for j in 0..n {
        let den = r
            .iter()
            .fold(BigInt::from(1), |acc, v| acc.lcm(v[j].denom()));
        if den == BigInt::from(1) {
            continue;
        }
        let a: Vec<BigInt> = r
            .iter()
            .map(|v| (&v[j] * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let mut t: Vec<BigInt> = u.iter().map(|row| dot(row, &a).mod_floor(&den)).collect();
        // unimodular row operations gathering gcd(t) into the first row
        for m in 1..k {
            if t[m].is_zero() {
                continue;
            }
            let e = t[0].extended_gcd(&t[m]);
            let (p, q) = (&t[0] / &e.gcd, &t[m] / &e.gcd);
            let (r0, rm) = (u[0].clone(), u[m].clone());
            u[0] = r0
                .iter()
                .zip(&rm)
                .map(|(x, y)| &e.x * x + &e.y * y)
                .collect();
            u[m] = r0.iter().zip(&rm).map(|(x, y)| &q * x - &p * y).collect();
            t[0] = e.gcd;
            t[m] = BigInt::zero();
        }
        let g = t[0].gcd(&den);
        let f = &den / g;
        for x in u[0].iter_mut() {
            *x *= &f;
        }
        u = lll_reduce(&u)?;
    }
    Ok(u.iter()
        .map(|c| {
            (0..n)
                .map(|j| {
                    let s = c.iter().zip(r).fold(Rational::zero(), |acc, (ci, v)| {
                        acc + Rational::from_integer(ci.clone()) * &v[j]
                    });
                    debug_assert!(s.is_integer());
                    s.to_integer()
                })
                .collect()
        })
        .collect())
}

/// Short basis of the same rational span: an LLL-reduced basis of the
/// integral points of the span, returned as matrices of the original shape.
pub fn reduce_matrix_basis(mats: &[Mat<Rational>]) -> Result<Vec<Mat<Rational>>> {
    let Some(first) = mats.first() else {
        return Ok(Vec::new());
    };
    let (r, c) = (first.rows(), first.cols());
    let ints = saturate(&mats.iter().map(|m| m.to_vec()).collect::<Vec<_>>())?;
    let red = lll_reduce(&ints)?;
    Ok(red
        .into_iter()
        .map(|v| Mat::from_vec(r, c, v.into_iter().map(Rational::from_integer).collect()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn gram_det(b: &[Vec<BigInt>]) -> Rational {
        let g = Mat::from_fn(b.len(), b.len(), |i, j| {
            Rational::from_integer(dot(&b[i], &b[j]))
        });
        g.det()
    }

    #[test]
    fn textbook_example() {
        // Cohen's example lattice; the first reduced vector is short
        let b = vec![ints(&[1, 1, 1]), ints(&[-1, 0, 2]), ints(&[3, 5, 6])];
        let r = lll_reduce(&b).unwrap();
        assert_eq!(gram_det(&r), gram_det(&b));
        assert!(dot(&r[0], &r[0]) <= BigInt::from(2));
    }

    #[test]
    fn dependent_input_is_rejected() {
        assert!(lll_reduce(&[ints(&[1, 2]), ints(&[2, 4])]).is_err());
    }

    #[test]
    fn saturation_finds_the_finer_lattice() {
        // span of (2,0,1) and (0,2,1) contains (1,1,1)
        let v = vec![ints(&[2, 0, 1]), ints(&[0, 2, 1])];
        let q: Vec<Vec<Rational>> = v
            .iter()
            .map(|x| x.iter().cloned().map(Rational::from_integer).collect())
            .collect();
        let s = saturate(&q).unwrap();
        assert_eq!(
            gram_det(&s) * Rational::from_integer(4.into()),
            gram_det(&v)
        );
    }

    fn check_reduced(b: &[Vec<BigInt>]) -> bool {
        // exact Gram–Schmidt over Q
        let n = b.len();
        let q: Vec<Vec<Rational>> = b
            .iter()
            .map(|v| v.iter().cloned().map(Rational::from_integer).collect())
            .collect();
        let dotq = |x: &[Rational], y: &[Rational]| {
            x.iter()
                .zip(y)
                .map(|(a, b)| a * b)
                .fold(Rational::zero(), |s, t| s + t)
        };
        let mut star: Vec<Vec<Rational>> = Vec::new();
        let mut mu = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            let mut v = q[i].clone();
            for j in 0..i {
                mu[i][j] = dotq(&q[i], &star[j]) / dotq(&star[j], &star[j]);
                for (x, y) in v.iter_mut().zip(&star[j]) {
                    *x -= &mu[i][j] * y;
                }
            }
            star.push(v);
        }
        let half = Rational::new(1.into(), 2.into());
        let size_reduced = (0..n).all(|i| (0..i).all(|j| mu[i][j].abs() <= half));
        let lovasz = (1..n).all(|k| {
            let lhs = dotq(&star[k], &star[k]);
            let rhs = (Rational::new(3.into(), 4.into()) - &mu[k][k - 1] * &mu[k][k - 1])
                * dotq(&star[k - 1], &star[k - 1]);
            lhs >= rhs
        });
        size_reduced && lovasz
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn reduced_bases_span_the_same_lattice(rows in proptest::collection::vec(proptest::collection::vec(-1000i64..1000, 6), 1..5)) {
            let b: Vec<Vec<BigInt>> = rows.iter().map(|r| ints(r)).collect();
            let span = Subspace::from_spanning(6, b.iter().map(|v| v.iter().cloned().map(Rational::from_integer).collect()).collect());
            prop_assume!(span.dim() == b.len());
            let r = lll_reduce(&b).unwrap();
            // same covolume and r ⊂ span(b) with integral coordinates
            prop_assert_eq!(gram_det(&r), gram_det(&b));
            let coords = crate::linalg::Coordinates::new(b.iter().map(|v| v.iter().cloned().map(Rational::from_integer).collect()).collect()).unwrap();
            for v in &r {
                let c = coords.coords(&v.iter().cloned().map(Rational::from_integer).collect::<Vec<_>>()).unwrap();
                prop_assert!(c.iter().all(|x| x.is_integer()));
            }
            prop_assert!(check_reduced(&r));
        }

        #[test]
        fn saturation_contains_every_integral_combination(
            rows in proptest::collection::vec(proptest::collection::vec(-30i64..30, 5), 1..4),
            den in 1i64..12,
        ) {
            let q: Vec<Vec<Rational>> = rows
                .iter()
                .map(|r| r.iter().map(|&x| Rational::new(x.into(), den.into())).collect())
                .collect();
            let span = Subspace::from_spanning(5, q.clone());
            prop_assume!(span.dim() == q.len());
            let s = saturate(&q).unwrap();
            let sq: Vec<Vec<Rational>> = s.iter().map(|v| v.iter().cloned().map(Rational::from_integer).collect()).collect();
            prop_assert_eq!(Subspace::from_spanning(5, sq.clone()), span);
            // the integral vectors `den·q_i` and `Σ q_i` (when integral) lie in the lattice
            let coords = crate::linalg::Coordinates::new(sq).unwrap();
            let mut probes: Vec<Vec<Rational>> = q.iter().map(|v| v.iter().map(|x| x * Rational::from_integer(den.into())).collect()).collect();
            let total: Vec<Rational> = (0..5).map(|j| q.iter().fold(Rational::zero(), |a, v| a + &v[j])).collect();
            if total.iter().all(|x| x.is_integer()) {
                probes.push(total);
            }
            for p in probes {
                let c = coords.coords(&p).unwrap();
                prop_assert!(c.iter().all(|x| x.is_integer()));
            }
        }
    }
}
