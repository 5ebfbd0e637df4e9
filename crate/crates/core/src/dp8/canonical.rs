//! The three canonical models: `P1×P1`, the blowup `Y` of `P2` at a point,
//! and the sphere `S_a`, each with its parametrization, quadric ideal and
//! Lie algebra realized on `Q^9`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{normalize_extension, QuadExt, Rational, Scalar};
use crate::lie::{LieAlgebra, Sl2Triple};
use crate::linalg::{lift, Mat};
use crate::modrep::ModuleAction;
use crate::poly::{Monomial, Poly};

use super::{quadrics_of_parametrization, ParamMap, ParamSpec, QuadricIdeal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    P1xP1,
    Blowup,
    /// The sphere twisted by `Q(√a)`, `a` squarefree.
    Sphere(i64),
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::P1xP1 => "p1xp1",
            ModelKind::Blowup => "blowup",
            ModelKind::Sphere(_) => "sphere",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Sphere(a) => write!(f, "sphere({a})"),
            k => f.write_str(k.name()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalModel {
    pub kind: ModelKind,
    pub ideal: QuadricIdeal,
    pub map: ParamMap,
    /// Trace-free part of the Lie algebra, in the model basis, realized by
    /// its action on points.
    pub algebra: LieAlgebra<Rational>,
    /// For the sphere: columns of the `Q^9` basis in the `e_ij` coordinates
    /// of `P1×P1` over `Q(√a)`.
    pub basis_change: Option<Mat<QuadExt>>,
}

impl CanonicalModel {
    pub fn build(kind: ModelKind) -> Result<Self> {
        match kind {
            ModelKind::P1xP1 => Ok(p1xp1_model()),
            ModelKind::Blowup => Ok(blowup_model()),
            ModelKind::Sphere(a) => sphere_model(a),
        }
    }

    pub fn realization(&self) -> &[Mat<Rational>] {
        self.algebra.realization().expect("models are realized")
    }

    pub fn module(&self) -> ModuleAction<Rational> {
        ModuleAction::new(self.algebra.clone(), self.realization().to_vec())
            .expect("realization is a module")
    }

    /// Chevalley triples over `Q`: both factors for `P1×P1`, the Levi factor
    /// for the blowup, none for the sphere.
    pub fn triples(&self) -> Vec<Sl2Triple<Rational>> {
        match self.kind {
            ModelKind::P1xP1 => vec![unit_triple(6, 0, 1, 2), unit_triple(6, 3, 4, 5)],
            ModelKind::Blowup => vec![self.levi_triple()],
            ModelKind::Sphere(_) => Vec::new(),
        }
    }

    /// Levi triple `(c2, c1, c3)` of the blowup algebra.
    pub fn levi_triple(&self) -> Sl2Triple<Rational> {
        assert_eq!(
            self.kind,
            ModelKind::Blowup,
            "only the blowup has a Levi triple"
        );
        unit_triple(6, 4, 3, 5)
    }

    /// Basis `(b1, b2)` of the nilradical of the blowup algebra.
    pub fn nilradical(&self) -> Vec<Vec<Rational>> {
        assert_eq!(
            self.kind,
            ModelKind::Blowup,
            "only the blowup has a nilradical"
        );
        vec![unit(6, 1), unit(6, 2)]
    }
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn unit_triple(n: usize, e: usize, h: usize, f: usize) -> Sl2Triple<Rational> {
    Sl2Triple {
        e: unit(n, e),
        h: unit(n, h),
        f: unit(n, f),
    }
}

fn elementary(n: usize, i: usize, j: usize) -> Mat<Rational> {
    Mat::from_fn(n, n, |r, c| {
        if (r, c) == (i, j) {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

fn diag(d: &[i64]) -> Mat<Rational> {
    Mat::diagonal(
        &d.iter()
            .map(|&x| Rational::from_integer(x.into()))
            .collect::<Vec<_>>(),
    )
}

/// Action of `x ∈ gl_k` on the span of the given monomials in `y_0..y_{k−1}`
/// through the derivation `m ↦ Σ ∂m/∂y_i · (x·y)_i`: entry `(r, c)` is the
/// coefficient of monomial `c` in the image of monomial `r`. This is a Lie
/// homomorphism, and it is the action on points of the image of the
/// monomial map.
pub fn monomial_action(monomials: &[Monomial], x: &Mat<Rational>) -> Result<Mat<Rational>> {
    let k = x.rows();
    let index: HashMap<&Monomial, usize> =
        monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut out = Mat::<Rational>::zeros(monomials.len(), monomials.len());
    for (r, m) in monomials.iter().enumerate() {
        for i in 0..k {
            if m[i] == 0 {
                continue;
            }
            for l in 0..k {
                let xil = x.get(i, l);
                if xil.is_zero() {
                    continue;
                }
                let mut t = m.clone();
                t[i] -= 1;
                t[l] += 1;
                let c = *index
                    .get(&t)
                    .ok_or_else(|| Error::InvalidArgument("monomial span is not stable".into()))?;
                let v = out.get(r, c).clone() + Rational::from_integer(m[i].into()) * xil;
                out.set(r, c, v);
            }
        }
    }
    Ok(out)
}

fn trace_free(m: Mat<Rational>) -> Mat<Rational> {
    let n = m.rows();
    let s = m.trace() * Rational::new(BigInt::one(), BigInt::from(n));
    m.sub(&Mat::identity(n).scale(&s))
}

fn p1xp1_monomials() -> Vec<Monomial> {
    (0..3u32)
        .flat_map(|i| (0..3u32).map(move |j| vec![2 - i, i, 2 - j, j]))
        .collect()
}

/// `(e1, h1, f1, e2, h2, f2)` in `gl_4` acting on `(s0, s1, t0, t1)`.
fn p1xp1_generators() -> Vec<Mat<Rational>> {
    let block = |m: Mat<Rational>, off: usize| {
        let mut out = Mat::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                out.set(off + i, off + j, m.get(i, j).clone());
            }
        }
        out
    };
    let (e, h, f) = (elementary(2, 0, 1), diag(&[1, -1]), elementary(2, 1, 0));
    vec![
        block(e.clone(), 0),
        block(h.clone(), 0),
        block(f.clone(), 0),
        block(e, 2),
        block(h, 2),
        block(f, 2),
    ]
}

fn p1xp1_realization() -> Vec<Mat<Rational>> {
    let monos = p1xp1_monomials();
    p1xp1_generators()
        .iter()
        .map(|x| trace_free(monomial_action(&monos, x).expect("bidegree (2,2) is stable")))
        .collect()
}

/// `x_{3i+j} = s0^{2−i} s1^i t0^{2−j} t1^j`.
pub fn p1xp1_model() -> CanonicalModel {
    let comps = p1xp1_monomials()
        .into_iter()
        .map(|m| Poly::monomial(m, Rational::one()))
        .collect();
    let map = ParamMap::new(ParamSpec::Bihomogeneous, comps).expect("nonzero map");
    let ideal = integral(quadrics_of_parametrization(&map));
    let algebra = LieAlgebra::from_matrices(p1xp1_realization()).expect("sl2 ⊕ sl2 is closed");
    CanonicalModel {
        kind: ModelKind::P1xP1,
        ideal,
        map,
        algebra,
        basis_change: None,
    }
}

const BLOWUP_EXPONENTS: [[u32; 3]; 9] = [
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

/// Cubics in `(v0, v1, v2)` vanishing at `(1:0:0)`; the algebra is the
/// stabilizer of that point in `gl_3`, trace-free, in the basis
/// `(a, b1, b2, c1, c2, c3)`.
pub fn blowup_model() -> CanonicalModel {
    let monos: Vec<Monomial> = BLOWUP_EXPONENTS.iter().map(|e| e.to_vec()).collect();
    let comps = monos
        .iter()
        .map(|m| Poly::monomial(m.clone(), Rational::one()))
        .collect();
    let map = ParamMap::new(ParamSpec::Plane, comps).expect("nonzero map");
    let ideal = integral(quadrics_of_parametrization(&map));
    let gens = [
        diag(&[2, -1, -1]),
        elementary(3, 0, 1),
        elementary(3, 0, 2),
        diag(&[0, 1, -1]),
        elementary(3, 1, 2),
        elementary(3, 2, 1),
    ];
    let real: Vec<Mat<Rational>> = gens
        .iter()
        .map(|x| trace_free(monomial_action(&monos, x).expect("stabilizer preserves the span")))
        .collect();
    let algebra = LieAlgebra::from_matrices(real).expect("blowup algebra is closed");
    CanonicalModel {
        kind: ModelKind::Blowup,
        ideal,
        map,
        algebra,
        basis_change: None,
    }
}

/// Columns `e00, e11, e22, e01+e10, e12+e21, e02+e20, α⁻¹(e10−e01),
/// α⁻¹(e21−e12), α⁻¹(e20−e02)` with `α = √a`.
pub fn sphere_basis(a: i64) -> Mat<QuadExt> {
    let zero = QuadExt::embed(Rational::zero(), a);
    let one = QuadExt::embed(Rational::one(), a);
    let ainv = QuadExt::new(
        Rational::zero(),
        Rational::new(BigInt::one(), BigInt::from(a)),
        a,
    )
    .expect("valid");
    let e = |i: usize, j: usize| 3 * i + j;
    let mut cols = vec![vec![zero.clone(); 9]; 9];
    for i in 0..3 {
        cols[i][e(i, i)] = one.clone();
    }
    for (k, (i, j)) in [(0, 1), (1, 2), (0, 2)].into_iter().enumerate() {
        cols[3 + k][e(i, j)] = one.clone();
        cols[3 + k][e(j, i)] = one.clone();
        cols[6 + k][e(j, i)] = ainv.clone();
        cols[6 + k][e(i, j)] = -ainv.clone();
    }
    Mat::from_cols(&cols)
}

/// `S_a`, parametrized over `Q` by
/// `(1, P, P², u, Pu, 2u²−P, v, vP, 2uv)` with `P = u² − v²/a`.
pub fn sphere_model(a: i64) -> Result<CanonicalModel> {
    let a = {
        let d = normalize_extension(a)?;
        if d != a {
            return Err(Error::InvalidArgument(format!(
                "sphere parameter {a} is not squarefree"
            )));
        }
        a
    };
    let b = sphere_basis(a);
    let binv = b
        .inverse()
        .ok_or_else(|| Error::Degenerate("sphere basis is singular".into()))?;
    let alpha = QuadExt::sqrt_of(a)?;
    let rho: Vec<Mat<QuadExt>> = p1xp1_realization().iter().map(lift::<QuadExt>).collect();
    let mut real = Vec::with_capacity(6);
    for x in 0..3 {
        let plus = rho[x].add(&rho[x + 3]);
        let minus = rho[x].sub(&rho[x + 3]).scale(&alpha);
        for m in [plus, minus] {
            let conj = binv.mul(&m).mul(&b);
            let r = conj
                .entries()
                .iter()
                .map(Scalar::to_rational)
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::Degenerate("sphere realization is not rational".into()))?;
            real.push(Mat::from_vec(9, 9, r));
        }
    }
    let algebra = LieAlgebra::from_matrices(real)?;
    let (u, v) = (Poly::var(2, 0), Poly::var(2, 1));
    let p = u.mul(&u).sub(
        &v.mul(&v)
            .scale(&Rational::new(BigInt::one(), BigInt::from(a))),
    );
    let two = Rational::from_integer(2.into());
    let comps = vec![
        Poly::one(2),
        p.clone(),
        p.mul(&p),
        u.clone(),
        p.mul(&u),
        u.mul(&u).scale(&two).sub(&p),
        v.clone(),
        v.mul(&p),
        u.mul(&v).scale(&two),
    ];
    let map = ParamMap::new(ParamSpec::Affine, comps)?;
    let ideal = integral(quadrics_of_parametrization(&map));
    Ok(CanonicalModel {
        kind: ModelKind::Sphere(a),
        ideal,
        map,
        algebra,
        basis_change: Some(b),
    })
}

/// Rescales each basis quadric to a primitive integer vector.
fn integral(q: QuadricIdeal) -> QuadricIdeal {
    q.pullback(&Mat::identity(q.n() + 1))
}
