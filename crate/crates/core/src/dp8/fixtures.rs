//! Test surfaces built by interpolation: quadrics in the coordinates of a
//! monomial-style map, modulo the equations the parameters satisfy.

use num_traits::One;

use crate::field::Rational;
use crate::poly::{monomials_of_degree, Poly};

use super::{quadrics_through, QuadricIdeal};

/// Replaces `y_var^2` by `replacement` until `var` has degree below 2.
fn reduce_square(p: &Poly, var: usize, replacement: &Poly) -> Poly {
    let mut out = Poly::zero(p.nvars());
    let mut pending = vec![p.clone()];
    while let Some(q) = pending.pop() {
        let mut rest = Poly::zero(q.nvars());
        for (m, c) in q.terms() {
            if m[var] >= 2 {
                let mut low = m.clone();
                low[var] -= 2;
                rest = rest.add(&Poly::monomial(low, c.clone()).mul(replacement));
            } else {
                out.add_term(m.clone(), c.clone());
            }
        }
        if !rest.is_zero() {
            pending.push(rest);
        }
    }
    out
}

/// The quadric `c0·z0² + c1·z1² + c2·z2² + c3·z3² = 0` embedded in `P^8` by
/// the quadratic monomials other than `z0²`.
pub fn quadric_surface(c: [i64; 4]) -> QuadricIdeal {
    let z = |i| Poly::var(4, i);
    let q = |k: i64| Rational::from_integer(k.into());
    let rest = (1..4).fold(Poly::zero(4), |acc, i| {
        acc.add(&z(i).mul(&z(i)).scale(&q(c[i])))
    });
    let z0sq = rest.scale(&(-(Rational::one() / q(c[0]))));
    let comps: Vec<Poly> = monomials_of_degree(4, 2)
        .into_iter()
        .filter(|m| m[0] != 2)
        .map(|m| Poly::monomial(m, Rational::one()))
        .collect();
    let space = quadrics_through(&comps, |p| reduce_square(p, 0, &z0sq));
    QuadricIdeal::from_space(8, space).pullback(&crate::linalg::Mat::identity(9))
}

/// The quadric `z0² − z1² = z2² − d·z3²` embedded in `P^8` by the quadratic
/// monomials other than `z0²`.
pub fn split_difference_sphere(d: i64) -> QuadricIdeal {
    quadric_surface([1, -1, -1, d])
}

/// `C×C` for the conic `C: c0·x0² + c1·x1² + c2·x2² = 0`, embedded by
/// `z_{3a+b} = x_a y_b`.
pub fn conic_square(coeffs: [i64; 3]) -> QuadricIdeal {
    let v = |i| Poly::var(6, i);
    let sq = |off: usize| {
        let c0 = Rational::from_integer(coeffs[0].into());
        let rhs = v(off + 1)
            .mul(&v(off + 1))
            .scale(&Rational::from_integer(coeffs[1].into()))
            .add(
                &v(off + 2)
                    .mul(&v(off + 2))
                    .scale(&Rational::from_integer(coeffs[2].into())),
            );
        rhs.scale(&(-(Rational::one() / c0)))
    };
    let (rx, ry) = (sq(0), sq(3));
    let comps: Vec<Poly> = (0..3)
        .flat_map(|a| (0..3).map(move |b| (a, b)))
        .map(|(a, b)| v(a).mul(&v(3 + b)))
        .collect();
    let space = quadrics_through(&comps, |p| reduce_square(&reduce_square(p, 0, &rx), 3, &ry));
    QuadricIdeal::from_space(8, space).pullback(&crate::linalg::Mat::identity(9))
}

/// The parabola `y0·y2 − y1²` in `P^2`.
pub fn parabola() -> QuadricIdeal {
    let y = |i| Poly::var(3, i);
    QuadricIdeal::from_polys(2, &[y(0).mul(&y(2)).sub(&y(1).mul(&y(1)))]).expect("a quadric")
}
