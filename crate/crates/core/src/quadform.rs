//! Zeros of rational quadratic forms in up to four variables, totally
//! isotropic subspaces, and points over `Q(√a)` on conics defined over `Q`.
//!
//! A quaternary form is split as `⟨d0, d1⟩ ⊥ ⟨d2, d3⟩`; a zero comes from a
//! value `t` represented by the first binary form and `−t` by the second,
//! each found with the complete ternary solver. Whether a zero exists at all
//! is decided first from local invariants, so the search over `t` only runs
//! when it is known to succeed; its bound makes it return `Unresolved`
//! rather than loop.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::conic::{diagonalize, hilbert_symbol, solve_conic_q, Obstruction, TernaryForm};
use crate::error::{Error, Result};
use crate::field::{qext_sqrt, rational_sqrt, QuadExt, Rational};
use crate::linalg::{Mat, Subspace};

/// Largest `|t|` tried when splitting a quaternary form.
pub const SPLIT_BOUND: i64 = 3000;

#[derive(Clone, Debug, PartialEq)]
pub enum Isotropy<F> {
    Vector(Vec<F>),
    /// No nonzero zero; the place is named when a local invariant proves it.
    Anisotropic(Option<Obstruction>),
    /// A zero exists but the bounded search did not reach it.
    Unresolved,
}

/// `x ∈ (Q_p^*)²` for a nonzero rational `x`.
fn is_local_square(x: &Rational, p: &BigInt) -> bool {
    let mut n = x.numer() * x.denom();
    let mut v = 0u32;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    if v % 2 == 1 {
        return false;
    }
    if *p == BigInt::from(2) {
        n.mod_floor(&BigInt::from(8)) == BigInt::one()
    } else {
        arith::legendre(&n, p) == 1
    }
}

/// Primes dividing `2·Π` of the numerators and denominators.
fn bad_primes(d: &[Rational]) -> Result<Vec<BigInt>> {
    let mut ps = vec![BigInt::from(2)];
    for x in d {
        for n in [x.numer(), x.denom()] {
            if n.abs().is_one() {
                continue;
            }
            for p in arith::factor(n)?.primes() {
                if !ps.contains(p) {
                    ps.push(p.clone());
                }
            }
        }
    }
    ps.sort();
    Ok(ps)
}

/// `true` when the diagonal form `⟨d0, d1, d2, d3⟩` has no nonzero zero over
/// the completion at `place` (`Real` or `Prime(p)`).
pub fn quaternary_anisotropic_at(d: &[Rational; 4], place: &Obstruction) -> bool {
    if d.iter().any(Zero::is_zero) {
        return false;
    }
    match place {
        Obstruction::Real => d.iter().all(Signed::is_positive) || d.iter().all(Signed::is_negative),
        Obstruction::Prime(p) => {
            let disc = d.iter().fold(Rational::one(), |acc, x| acc * x);
            if !is_local_square(&disc, p) {
                return false;
            }
            let mut eps = 1;
            for i in 0..4 {
                for j in i + 1..4 {
                    eps *= hilbert_symbol(&d[i], &d[j], Some(p));
                }
            }
            let minus = Rational::from_integer((-1).into());
            eps != hilbert_symbol(&minus, &minus, Some(p))
        }
        Obstruction::RealEmbedding { .. } => false,
    }
}

/// A place where the nondegenerate diagonal quaternary form has no zero.
pub fn quaternary_obstruction(d: &[Rational; 4]) -> Result<Option<Obstruction>> {
    if quaternary_anisotropic_at(d, &Obstruction::Real) {
        return Ok(Some(Obstruction::Real));
    }
    for p in bad_primes(d)? {
        let place = Obstruction::Prime(p);
        if quaternary_anisotropic_at(d, &place) {
            return Ok(Some(place));
        }
    }
    Ok(None)
}

fn diag3(a: &Rational, b: &Rational, c: &Rational) -> Result<TernaryForm<Rational>> {
    TernaryForm::diagonal([a.clone(), b.clone(), c.clone()])
}

/// Zero of the diagonal quaternary form with nonzero entries.
fn quaternary_zero(d: &[Rational; 4]) -> Result<Isotropy<Rational>> {
    if let Some(o) = quaternary_obstruction(d)? {
        return Ok(Isotropy::Anisotropic(Some(o)));
    }
    let sub = solve_conic_q(&diag3(&d[0], &d[1], &d[2])?)?;
    if let Some(p) = sub.point {
        return Ok(Isotropy::Vector(vec![
            p[0].clone(),
            p[1].clone(),
            p[2].clone(),
            Rational::zero(),
        ]));
    }
    for m in 1..=SPLIT_BOUND {
        for t in [m, -m] {
            let t = Rational::from_integer(t.into());
            let Some(p) = solve_conic_q(&diag3(&d[0], &d[1], &(-t.clone()))?)?.point else {
                continue;
            };
            let Some(q) = solve_conic_q(&diag3(&d[2], &d[3], &t)?)?.point else {
                continue;
            };
            // d0 x0² + d1 x1² = t z², d2 x2² + d3 x3² = −t w²
            let v = if p[2].is_zero() {
                vec![
                    p[0].clone(),
                    p[1].clone(),
                    Rational::zero(),
                    Rational::zero(),
                ]
            } else if q[2].is_zero() {
                vec![
                    Rational::zero(),
                    Rational::zero(),
                    q[0].clone(),
                    q[1].clone(),
                ]
            } else {
                vec![&p[0] / &p[2], &p[1] / &p[2], &q[0] / &q[2], &q[1] / &q[2]]
            };
            return Ok(Isotropy::Vector(v));
        }
    }
    Ok(Isotropy::Unresolved)
}

/// Nonzero `v` with `vᵀ G v = 0` for a symmetric rational `G` of size at
/// most four.
pub fn isotropic_vector(g: &Mat<Rational>) -> Result<Isotropy<Rational>> {
    let n = g.rows();
    if !g.is_square() || n > 4 {
        return Err(Error::DimensionMismatch(format!(
            "isotropic vectors need a square form of size at most 4, got {n}"
        )));
    }
    if n == 0 {
        return Ok(Isotropy::Anisotropic(None));
    }
    let ker = g.kernel();
    if ker.dim() > 0 {
        return Ok(Isotropy::Vector(ker.basis()[0].clone()));
    }
    let (t, d) = diagonalize(g);
    let dd: Vec<Rational> = (0..n).map(|i| d.get(i, i).clone()).collect();
    let y = match n {
        1 => return Ok(Isotropy::Anisotropic(None)),
        2 => match rational_sqrt(&(-(&dd[0] / &dd[1]))) {
            Some(r) => vec![Rational::one(), r],
            None => return Ok(Isotropy::Anisotropic(None)),
        },
        3 => {
            let c = solve_conic_q(&TernaryForm::new(d)?)?;
            match c.point {
                Some(p) => p,
                None => return Ok(Isotropy::Anisotropic(c.obstruction)),
            }
        }
        _ => {
            match quaternary_zero(&[dd[0].clone(), dd[1].clone(), dd[2].clone(), dd[3].clone()])? {
                Isotropy::Vector(v) => v,
                other => return Ok(other),
            }
        }
    };
    Ok(Isotropy::Vector(t.mul_vec(&y)))
}

fn bilinear(g: &Mat<Rational>, u: &[Rational], v: &[Rational]) -> Rational {
    let gv = g.mul_vec(v);
    u.iter()
        .zip(&gv)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Basis of a `k`-dimensional subspace on which `G` vanishes identically,
/// built one vector at a time inside the orthogonal of the previous ones.
/// Each step looks for a zero on a section of dimension at most four, which
/// always exists when `G` has Witt index at least `k`.
pub fn totally_isotropic_subspace(g: &Mat<Rational>, k: usize) -> Result<Isotropy<Vec<Rational>>> {
    let n = g.rows();
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    while basis.len() < k {
        let perp = if basis.is_empty() {
            Subspace::full(n)
        } else {
            let rows: Vec<Vec<Rational>> = basis.iter().map(|b| g.mul_vec(b)).collect();
            Mat::from_rows(rows)?.kernel()
        };
        // a complement of span(basis) inside perp; G is defined modulo basis there
        let mut span = Subspace::from_spanning(n, basis.clone());
        let mut comp: Vec<Vec<Rational>> = Vec::new();
        for v in perp.basis() {
            let bigger = span.sum(&Subspace::from_spanning(n, vec![v.clone()]));
            if bigger.dim() > span.dim() {
                comp.push(v.clone());
                span = bigger;
            }
            if comp.len() == 4 {
                break;
            }
        }
        if comp.is_empty() {
            return Ok(Isotropy::Anisotropic(None));
        }
        let m = comp.len();
        let r = Mat::from_fn(m, m, |i, j| bilinear(g, &comp[i], &comp[j]));
        match isotropic_vector(&r)? {
            Isotropy::Vector(y) => {
                let v: Vec<Rational> = (0..n)
                    .map(|c| (0..m).fold(Rational::zero(), |acc, i| acc + &y[i] * &comp[i][c]))
                    .collect();
                basis.push(v);
            }
            Isotropy::Anisotropic(o) => return Ok(Isotropy::Anisotropic(o)),
            Isotropy::Unresolved => return Ok(Isotropy::Unresolved),
        }
    }
    Ok(Isotropy::Vector(basis))
}

/// Zero over `Q(√a)` of the rational ternary form `G`.
///
/// Such a zero exists exactly when `G ⊥ ⟨a·det G⟩` has a rational zero
/// `(z, s)`: for `s ≠ 0` the form restricted to `z^⊥` has determinant
/// `−a` up to squares, so its zero needs only `√a`.
pub fn conic_point_over_extension(g: &Mat<Rational>, a: i64) -> Result<Isotropy<QuadExt>> {
    let form = TernaryForm::new(g.clone())?;
    let lift = |v: &[Rational]| {
        v.iter()
            .map(|x| QuadExt::embed(x.clone(), a))
            .collect::<Vec<_>>()
    };
    let c = solve_conic_q(&form)?;
    if let Some(p) = c.point {
        return Ok(Isotropy::Vector(lift(&p)));
    }
    let det = g.det();
    let mut q4 = Mat::<Rational>::zeros(4, 4);
    for i in 0..3 {
        for j in 0..3 {
            q4.set(i, j, g.get(i, j).clone());
        }
    }
    q4.set(3, 3, Rational::from_integer(a.into()) * &det);
    let zs = match isotropic_vector(&q4)? {
        Isotropy::Vector(v) => v,
        Isotropy::Anisotropic(o) => return Ok(Isotropy::Anisotropic(o)),
        Isotropy::Unresolved => return Ok(Isotropy::Unresolved),
    };
    let z = &zs[..3];
    if zs[3].is_zero() {
        // a rational zero after all
        return Ok(Isotropy::Vector(lift(z)));
    }
    let perp = Mat::from_rows(vec![g.mul_vec(z)])?.kernel();
    let (p1, p2) = (&perp.basis()[0], &perp.basis()[1]);
    let (aa, bb, cc) = (
        bilinear(g, p1, p1),
        bilinear(g, p1, p2),
        bilinear(g, p2, p2),
    );
    let (x, y) = if aa.is_zero() {
        (
            QuadExt::embed(Rational::one(), a),
            QuadExt::embed(Rational::zero(), a),
        )
    } else {
        let disc = QuadExt::embed(&bb * &bb - &aa * &cc, a);
        let r = qext_sqrt(&disc).ok_or_else(|| {
            Error::Degenerate("binary discriminant is not a square in Q(sqrt(a))".into())
        })?;
        (r - QuadExt::embed(bb, a), QuadExt::embed(aa, a))
    };
    let u: Vec<QuadExt> = (0..3)
        .map(|i| {
            x.clone() * &QuadExt::embed(p1[i].clone(), a)
                + y.clone() * &QuadExt::embed(p2[i].clone(), a)
        })
        .collect();
    Ok(Isotropy::Vector(u))
}
