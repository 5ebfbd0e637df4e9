//! Degree-8 del Pezzo surfaces in `P^8`: quadric ideals, their Lie
//! algebras, canonical models and the parametrization pipeline.

pub mod canonical;
pub mod fixtures;
pub mod generate;
pub mod pipeline;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{primitive_integer_vector, Rational};
use crate::lie::LieAlgebra;
use crate::linalg::{Coordinates, Mat, Subspace};
use crate::parse::{coordinate_names, parse_poly};
use crate::poly::Poly;

pub use canonical::{CanonicalModel, ModelKind};
pub use generate::generate_instance;
pub use pipeline::{classify_and_parametrize, PipelineOutput, PipelineResult};

/// Index pairs `(i, j)`, `i ≤ j`, in the order used for quadric coordinates.
pub fn quadric_pairs(size: usize) -> Vec<(usize, usize)> {
    (0..size)
        .flat_map(|i| (i..size).map(move |j| (i, j)))
        .collect()
}

/// A linear space of quadrics in `P^n`. Quadrics are stored by their
/// polynomial coefficients at `x_i x_j`, `i ≤ j`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadricIdeal {
    n: usize,
    generators: Vec<Vec<Rational>>,
    space: Subspace<Rational>,
}

impl QuadricIdeal {
    pub fn from_coefficients(n: usize, generators: Vec<Vec<Rational>>) -> Result<Self> {
        let len = (n + 1) * (n + 2) / 2;
        if generators.iter().any(|g| g.len() != len) {
            return Err(Error::DimensionMismatch(format!(
                "quadrics in P^{n} need {len} coefficients"
            )));
        }
        if generators.iter().any(|g| g.iter().all(Zero::is_zero)) {
            return Err(Error::InvalidArgument("zero quadric".into()));
        }
        let space = Subspace::from_spanning(len, generators.clone());
        Ok(QuadricIdeal {
            n,
            generators,
            space,
        })
    }

    pub fn from_space(n: usize, space: Subspace<Rational>) -> Self {
        let generators = space.basis().to_vec();
        QuadricIdeal {
            n,
            generators,
            space,
        }
    }

    /// Symmetric matrices; the quadric is `xᵀ A x`.
    pub fn from_matrices(n: usize, mats: &[Mat<Rational>]) -> Result<Self> {
        let gens = mats
            .iter()
            .map(|a| {
                if a.rows() != n + 1 || a.cols() != n + 1 {
                    return Err(Error::DimensionMismatch(format!(
                        "quadric matrix must be {0}×{0}",
                        n + 1
                    )));
                }
                if *a != a.transpose() {
                    return Err(Error::InvalidArgument(
                        "quadric matrix is not symmetric".into(),
                    ));
                }
                Ok(matrix_to_coefficients(a))
            })
            .collect::<Result<Vec<_>>>()?;
        QuadricIdeal::from_coefficients(n, gens)
    }

    pub fn from_polys(n: usize, polys: &[Poly]) -> Result<Self> {
        let pairs = quadric_pairs(n + 1);
        let gens = polys
            .iter()
            .map(|p| {
                if p.nvars() != n + 1 {
                    return Err(Error::DimensionMismatch(
                        "quadric has the wrong number of variables".into(),
                    ));
                }
                if p.terms().any(|(m, _)| m.iter().sum::<u32>() != 2) {
                    return Err(Error::InvalidArgument(format!(
                        "`{}` is not a homogeneous quadric",
                        p.format(&name_refs(&coordinate_names(n + 1)))
                    )));
                }
                Ok(pairs
                    .iter()
                    .map(|&(i, j)| p.coeff(&pair_monomial(n + 1, i, j)))
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        QuadricIdeal::from_coefficients(n, gens)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &Subspace<Rational> {
        &self.space
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    /// Symmetric matrices of the canonical basis.
    pub fn basis_matrices(&self) -> Vec<Mat<Rational>> {
        self.space
            .basis()
            .iter()
            .map(|c| coefficients_to_matrix(self.n + 1, c))
            .collect()
    }

    pub fn generator_polys(&self) -> Vec<Poly> {
        self.generators
            .iter()
            .map(|c| coefficients_to_poly(self.n + 1, c))
            .collect()
    }

    pub fn contains_matrix(&self, a: &Mat<Rational>) -> bool {
        self.space.contains(&matrix_to_coefficients(a))
    }

    /// Image under the point map `p ↦ g·p`: `A ↦ g⁻ᵀ A g⁻¹`.
    pub fn transport(&self, g: &Mat<Rational>) -> Result<QuadricIdeal> {
        let gi = g
            .inverse()
            .ok_or_else(|| Error::Degenerate("transport by a singular matrix".into()))?;
        Ok(self.pullback(&gi))
    }

    /// Substitution `x ↦ g·x` in every generator: `A ↦ gᵀ A g`.
    pub fn pullback(&self, g: &Mat<Rational>) -> QuadricIdeal {
        let size = self.n + 1;
        let gens: Vec<Vec<Rational>> = self
            .generators
            .iter()
            .map(|c| {
                let a = coefficients_to_matrix(size, c);
                let v = matrix_to_coefficients(&g.transpose().mul(&a).mul(g));
                primitive_integer_vector(&v)
                    .into_iter()
                    .map(Rational::from_integer)
                    .collect()
            })
            .collect();
        QuadricIdeal {
            n: self.n,
            space: Subspace::from_spanning(size * (size + 1) / 2, gens.clone()),
            generators: gens,
        }
    }

    /// Largest decimal length of a generator coefficient.
    pub fn max_coeff_digits(&self) -> usize {
        self.generators
            .iter()
            .flatten()
            .map(crate::field::rational_digits)
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        let names = coordinate_names(self.n + 1);
        let refs = name_refs(&names);
        json!({
            "n": self.n,
            "polys": self.generator_polys().iter().map(|p| p.format(&refs)).collect::<Vec<_>>(),
        })
    }

    /// Accepts `{"n": 8, "quadrics": [matrix, …]}` or `{"polys": […]}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let n = match v.get("n") {
            Some(x) => x
                .as_u64()
                .ok_or_else(|| Error::Parse("`n` must be a nonnegative integer".into()))?
                as usize,
            None => 8,
        };
        if let Some(qs) = v.get("quadrics") {
            let arr = qs
                .as_array()
                .ok_or_else(|| Error::Parse("`quadrics` must be an array".into()))?;
            let mats = arr.iter().map(Mat::from_json).collect::<Result<Vec<_>>>()?;
            return QuadricIdeal::from_matrices(n, &mats);
        }
        if let Some(ps) = v.get("polys") {
            let arr = ps
                .as_array()
                .ok_or_else(|| Error::Parse("`polys` must be an array".into()))?;
            let names = coordinate_names(n + 1);
            let refs = name_refs(&names);
            let polys = arr
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    let s = p
                        .as_str()
                        .ok_or_else(|| Error::Parse(format!("polys[{k}] is not a string")))?;
                    parse_poly(s, &refs).map_err(|e| Error::Parse(format!("polys[{k}]: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if polys.iter().any(Poly::is_zero) {
                return Err(Error::InvalidArgument(
                    "zero polynomial among the quadrics".into(),
                ));
            }
            return QuadricIdeal::from_polys(n, &polys);
        }
        Err(Error::Parse("expected `quadrics` or `polys`".into()))
    }
}

pub(crate) fn name_refs(names: &[String]) -> Vec<&str> {
    names.iter().map(String::as_str).collect()
}

fn pair_monomial(size: usize, i: usize, j: usize) -> Vec<u32> {
    let mut m = vec![0; size];
    m[i] += 1;
    m[j] += 1;
    m
}

pub fn matrix_to_coefficients(a: &Mat<Rational>) -> Vec<Rational> {
    quadric_pairs(a.rows())
        .into_iter()
        .map(|(i, j)| {
            if i == j {
                a.get(i, i).clone()
            } else {
                a.get(i, j).clone() + a.get(j, i)
            }
        })
        .collect()
}

pub fn coefficients_to_matrix(size: usize, c: &[Rational]) -> Mat<Rational> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut a = Mat::zeros(size, size);
    for (&(i, j), x) in quadric_pairs(size).iter().zip(c) {
        if i == j {
            a.set(i, i, x.clone());
        } else {
            let h = x * &half;
            a.set(i, j, h.clone());
            a.set(j, i, h);
        }
    }
    a
}

pub fn coefficients_to_poly(size: usize, c: &[Rational]) -> Poly {
    let mut p = Poly::zero(size);
    for (&(i, j), x) in quadric_pairs(size).iter().zip(c) {
        p.add_term(pair_monomial(size, i, j), x.clone());
    }
    p
}

/// Parameters of a parametrization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamSpec {
    /// `(s0:s1; t0:t1)`
    Bihomogeneous,
    /// `(v0:v1:v2)`
    Plane,
    /// affine `(u, v)`
    Affine,
}

impl ParamSpec {
    pub fn names(self) -> Vec<&'static str> {
        match self {
            ParamSpec::Bihomogeneous => vec!["s0", "s1", "t0", "t1"],
            ParamSpec::Plane => vec!["v0", "v1", "v2"],
            ParamSpec::Affine => vec!["u", "v"],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ParamSpec::Bihomogeneous => "s0:s1;t0:t1",
            ParamSpec::Plane => "v0:v1:v2",
            ParamSpec::Affine => "u,v",
        }
    }

    pub fn from_label(s: &str) -> Result<Self> {
        match s.trim() {
            "s0:s1;t0:t1" => Ok(ParamSpec::Bihomogeneous),
            "v0:v1:v2" => Ok(ParamSpec::Plane),
            "u,v" => Ok(ParamSpec::Affine),
            other => Err(Error::Parse(format!("unknown parameter list `{other}`"))),
        }
    }
}

impl fmt::Display for ParamSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A rational map from the parameter space to `P^8`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamMap {
    pub spec: ParamSpec,
    pub components: Vec<Poly>,
}

impl ParamMap {
    pub fn new(spec: ParamSpec, components: Vec<Poly>) -> Result<Self> {
        let k = spec.names().len();
        if components.iter().any(|c| c.nvars() != k) {
            return Err(Error::DimensionMismatch(format!(
                "components must be polynomials in {}",
                spec.label()
            )));
        }
        if components.iter().all(Poly::is_zero) {
            return Err(Error::InvalidArgument("all components vanish".into()));
        }
        Ok(ParamMap { spec, components })
    }

    /// Composition with the linear map `M`: component `r` becomes
    /// `Σ_c M[r][c]·φ_c`.
    pub fn transform(&self, m: &Mat<Rational>) -> ParamMap {
        let k = self.spec.names().len();
        let components = (0..m.rows())
            .map(|r| {
                let mut p = Poly::zero(k);
                for (c, phi) in self.components.iter().enumerate() {
                    let x = m.get(r, c);
                    if !x.is_zero() {
                        p = p.add(&phi.scale(x));
                    }
                }
                p
            })
            .collect();
        ParamMap {
            spec: self.spec,
            components,
        }
    }

    pub fn max_coeff_digits(&self) -> usize {
        self.components
            .iter()
            .map(Poly::max_coeff_digits)
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        let names = self.spec.names();
        json!({
            "params": self.spec.label(),
            "components": self.components.iter().map(|c| c.format(&names)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let v = v.get("map").unwrap_or(v);
        let spec = ParamSpec::from_label(
            v.get("params")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("map without `params`".into()))?,
        )?;
        let names = spec.names();
        let comps = v
            .get("components")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("map without `components`".into()))?
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let s = c
                    .as_str()
                    .ok_or_else(|| Error::Parse(format!("components[{k}] is not a string")))?;
                parse_poly(s, &names).map_err(|e| Error::Parse(format!("components[{k}]: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        ParamMap::new(spec, comps)
    }
}

/// Quadrics vanishing on the image of `components` after reducing each
/// substituted polynomial with `normal_form`.
pub fn quadrics_through(
    components: &[Poly],
    normal_form: impl Fn(&Poly) -> Poly,
) -> Subspace<Rational> {
    let size = components.len();
    let pairs = quadric_pairs(size);
    let products: Vec<Poly> = pairs
        .iter()
        .map(|&(i, j)| normal_form(&components[i].mul(&components[j])))
        .collect();
    let mut monos: Vec<Vec<u32>> = products
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| m.clone()))
        .collect();
    monos.sort();
    monos.dedup();
    let rows: Vec<Vec<Rational>> = monos
        .iter()
        .map(|m| products.iter().map(|p| p.coeff(m)).collect())
        .collect();
    if rows.is_empty() {
        return Subspace::full(pairs.len());
    }
    Mat::from_rows(rows).expect("rectangular").kernel()
}

/// The space of quadrics vanishing identically on the image of the map.
pub fn quadrics_of_parametrization(map: &ParamMap) -> QuadricIdeal {
    QuadricIdeal::from_space(
        map.components.len() - 1,
        quadrics_through(&map.components, Poly::clone),
    )
}

/// Every generator vanishes identically on the map, and the image is a
/// surface (the homogeneous Jacobian has rank 3 at a sample point).
pub fn verify_parametrization(ideal: &QuadricIdeal, map: &ParamMap) -> bool {
    if map.components.len() != ideal.n + 1 {
        return false;
    }
    let size = ideal.n + 1;
    let pairs = quadric_pairs(size);
    let mut cache: Vec<Option<Poly>> = vec![None; pairs.len()];
    for g in ideal.space.basis() {
        let mut total = Poly::zero(map.spec.names().len());
        for (k, c) in g.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, j) = pairs[k];
            let prod = cache[k].get_or_insert_with(|| map.components[i].mul(&map.components[j]));
            total = total.add(&prod.scale(c));
        }
        if !total.is_zero() {
            return false;
        }
    }
    image_is_surface(map)
}

fn image_is_surface(map: &ParamMap) -> bool {
    let k = map.spec.names().len();
    let derivs: Vec<Vec<Poly>> = (0..k)
        .map(|v| map.components.iter().map(|c| c.derivative(v)).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..8 {
        let pt: Vec<Rational> = (0..k)
            .map(|_| Rational::from_integer(rng.gen_range(-50i64..=50).into()))
            .collect();
        let mut cols: Vec<Vec<Rational>> = derivs
            .iter()
            .map(|d| d.iter().map(|p| p.eval(&pt)).collect())
            .collect();
        if map.spec == ParamSpec::Affine {
            cols.push(map.components.iter().map(|p| p.eval(&pt)).collect());
        }
        let rank = Mat::from_cols(&cols).rank();
        if rank == 3 {
            return true;
        }
        if rank > 3 {
            return false;
        }
    }
    false
}

/// Coefficients of `xᵀA + Ax` as linear forms in the entries of `x`
/// (row-major), one row per quadric coordinate. `half` is `1/2` in the
/// coefficient ring.
fn closure_operator<R: Clone>(
    size: usize,
    c: &[R],
    half: &R,
    zero: R,
    add: impl Fn(&R, &R) -> R,
    mul: impl Fn(&R, &R) -> R,
    is_zero: impl Fn(&R) -> bool,
) -> Vec<Vec<R>> {
    let pairs = quadric_pairs(size);
    let mut a = vec![vec![zero.clone(); size]; size];
    for (&(i, j), x) in pairs.iter().zip(c) {
        if i == j {
            a[i][i] = x.clone();
        } else {
            let h = mul(x, half);
            a[i][j] = h.clone();
            a[j][i] = h;
        }
    }
    let mut t = vec![vec![zero; size * size]; pairs.len()];
    for (r, &(i, j)) in pairs.iter().enumerate() {
        for k in 0..size {
            for (entry, var) in [(&a[k][j], k * size + i), (&a[i][k], k * size + j)] {
                if is_zero(entry) {
                    continue;
                }
                let v = if i == j {
                    entry.clone()
                } else {
                    add(entry, entry)
                };
                t[r][var] = add(&t[r][var], &v);
            }
        }
    }
    t
}

/// The closure system modulo `p`: `W·T_A` for each generator `A`, where the
/// rows of `W` span the annihilator of the quadric space modulo `p`.
/// `None` when the generators drop rank modulo `p`.
fn closure_system_mod_p(
    gens: &[Vec<BigInt>],
    size: usize,
    dim: usize,
    p: u64,
) -> Option<(usize, Vec<u64>)> {
    use crate::modular::{inv_mod, mul_mod, reduce, rref_mod};
    let len = gens.first()?.len();
    let g: Vec<Vec<u64>> = gens
        .iter()
        .map(|v| v.iter().map(|x| reduce(x, p)).collect())
        .collect();
    let mut data: Vec<u64> = g.iter().flatten().copied().collect();
    let pivots = rref_mod(&mut data, g.len(), len, p);
    if pivots.len() != dim {
        return None;
    }
    let free: Vec<usize> = (0..len).filter(|c| !pivots.contains(c)).collect();
    let w: Vec<Vec<u64>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![0u64; len];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let x = data[i * len + f];
                v[pc] = if x == 0 { 0 } else { p - x };
            }
            v
        })
        .collect();
    let half = inv_mod(2, p);
    let add = |a: &u64, b: &u64| {
        let s = *a + *b;
        if s >= p {
            s - p
        } else {
            s
        }
    };
    let nn = size * size;
    let mut rows = Vec::with_capacity(w.len() * g.len() * nn);
    for c in &g {
        let t = closure_operator(
            size,
            c,
            &half,
            0u64,
            add,
            |a, b| mul_mod(*a, *b, p),
            |a| *a == 0,
        );
        for wr in &w {
            let mut row = vec![0u64; nn];
            for (r, &wv) in wr.iter().enumerate() {
                if wv == 0 {
                    continue;
                }
                for (var, &tv) in t[r].iter().enumerate() {
                    if tv != 0 {
                        row[var] = add(&row[var], &mul_mod(wv, tv, p));
                    }
                }
            }
            rows.extend(row);
        }
    }
    Some((w.len() * g.len(), rows))
}

fn closure_kernel_exact(ideal: &QuadricIdeal) -> Result<Subspace<Rational>> {
    let size = ideal.n + 1;
    let nn = size * size;
    let w = ideal.space.annihilator();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for c in ideal.space.basis() {
        let t = closure_operator(
            size,
            c,
            &half,
            Rational::zero(),
            |a, b| a + b,
            |a, b| a * b,
            Zero::is_zero,
        );
        if w.rows() > 0 {
            rows.extend(
                w.mul(&Mat::from_rows(t)?)
                    .rows_vec()
                    .into_iter()
                    .filter(|r| r.iter().any(|x| !x.is_zero())),
            );
        }
    }
    Ok(if rows.is_empty() {
        Subspace::full(nn)
    } else {
        Mat::from_rows(rows)?.kernel()
    })
}

/// Exact test of `xᵀA + Ax ∈ I` for every generator, in integers: `w`
/// holds integral rows spanning the annihilator of `I`, `doubled` the
/// integral matrices `2A`.
fn preserves(w: &[Vec<BigInt>], doubled: &[Vec<Vec<BigInt>>], x: &[BigInt], size: usize) -> bool {
    let pairs = quadric_pairs(size);
    doubled.iter().all(|m| {
        // z = xᵀM + Mx
        let mut z = vec![vec![BigInt::zero(); size]; size];
        for i in 0..size {
            for j in 0..size {
                let mut acc = BigInt::zero();
                for k in 0..size {
                    let xki = &x[k * size + i];
                    if !xki.is_zero() && !m[k][j].is_zero() {
                        acc += xki * &m[k][j];
                    }
                    let xkj = &x[k * size + j];
                    if !xkj.is_zero() && !m[i][k].is_zero() {
                        acc += &m[i][k] * xkj;
                    }
                }
                z[i][j] = acc;
            }
        }
        let coeffs: Vec<BigInt> = pairs
            .iter()
            .map(|&(i, j)| {
                if i == j {
                    z[i][i].clone()
                } else {
                    &z[i][j] + &z[j][i]
                }
            })
            .collect();
        w.iter().all(|row| {
            row.iter()
                .zip(&coeffs)
                .map(|(a, b)| a * b)
                .sum::<BigInt>()
                .is_zero()
        })
    })
}

/// Basis of `{x ∈ gl_{n+1} : xᵀA + Ax ∈ I for all A ∈ I}`, realized by the
/// matrices themselves (acting on points by `p ↦ x·p`). The kernel is found
/// modulo several primes from the integral generators and checked exactly;
/// the basis is LLL-reduced.
pub fn lie_algebra_of_variety(ideal: &QuadricIdeal) -> Result<LieAlgebra<Rational>> {
    let size = ideal.n + 1;
    let nn = size * size;
    let gens: Vec<Vec<BigInt>> = ideal
        .generators
        .iter()
        .map(|g| primitive_integer_vector(g))
        .collect();
    let w: Vec<Vec<BigInt>> = ideal
        .space
        .annihilator()
        .rows_vec()
        .iter()
        .map(|r| primitive_integer_vector(r))
        .collect();
    let doubled: Vec<Vec<Vec<BigInt>>> = gens
        .iter()
        .map(|c| {
            let a = coefficients_to_matrix(
                size,
                &c.iter()
                    .cloned()
                    .map(Rational::from_integer)
                    .collect::<Vec<_>>(),
            );
            (0..size)
                .map(|i| {
                    (0..size)
                        .map(|j| (a.get(i, j) * Rational::from_integer(2.into())).to_integer())
                        .collect()
                })
                .collect()
        })
        .collect();
    let modular = crate::modular::kernel_by_primes(
        nn,
        |p| closure_system_mod_p(&gens, size, ideal.dim(), p),
        |basis| {
            basis
                .iter()
                .all(|v| preserves(&w, &doubled, &primitive_integer_vector(v), size))
        },
    );
    let basis = match modular {
        Some(b) => b,
        None => closure_kernel_exact(ideal)?.basis().to_vec(),
    };
    let mats: Vec<Mat<Rational>> = basis
        .into_iter()
        .map(|v| Mat::from_vec(size, size, v))
        .collect();
    LieAlgebra::from_matrices(crate::lattice::reduce_matrix_basis(&mats)?)
}

/// Splits off the scalar matrices: returns the trace-zero part `L0` and the
/// coordinates of the identity in `L`.
pub fn split_scalar(l: &LieAlgebra<Rational>) -> Result<(LieAlgebra<Rational>, Vec<Rational>)> {
    let mats = l
        .realization()
        .ok_or_else(|| Error::Precondition("algebra has no matrix realization".into()))?;
    let size = mats.first().map_or(0, Mat::rows);
    let flat: Vec<Vec<Rational>> = mats.iter().map(Mat::to_vec).collect();
    let coords = Coordinates::new(flat)
        .ok_or_else(|| Error::Degenerate("realization is not faithful".into()))?;
    let id = Mat::<Rational>::identity(size);
    let scalar = coords
        .coords(&id.to_vec())
        .ok_or_else(|| Error::InvalidArgument("the identity is not in the Lie algebra".into()))?;
    let inv = Rational::from_integer((size as i64).into()).recip();
    let adjusted: Vec<Vec<Rational>> = mats
        .iter()
        .map(|m| m.sub(&id.scale(&(m.trace() * &inv))).to_vec())
        .collect();
    let l0 = Subspace::from_spanning(size * size, adjusted);
    let mats: Vec<Mat<Rational>> = l0
        .basis()
        .iter()
        .map(|v| Mat::from_vec(size, size, v.clone()))
        .collect();
    let l0 = LieAlgebra::from_matrices(crate::lattice::reduce_matrix_basis(&mats)?)?;
    Ok((l0, scalar))
}

/// Scales a nonzero matrix to a primitive integer matrix whose first
/// nonzero entry is positive.
pub fn primitive_matrix(m: &Mat<Rational>) -> Mat<Rational> {
    let v = primitive_integer_vector(m.entries());
    Mat::from_vec(
        m.rows(),
        m.cols(),
        v.into_iter().map(Rational::from_integer).collect(),
    )
}

/// Lowest common multiple of the denominators of a map's coefficients, for
/// clearing them by a constant factor.
pub fn clear_denominators(map: &ParamMap) -> ParamMap {
    let mut l = BigInt::one();
    for c in &map.components {
        for (_, x) in c.terms() {
            l = l.lcm(x.denom());
        }
    }
    let mut g = BigInt::zero();
    for c in &map.components {
        for (_, x) in c.terms() {
            g = g.gcd(&(x * Rational::from_integer(l.clone())).to_integer());
        }
    }
    if g.is_zero() {
        return map.clone();
    }
    let s = Rational::new(l, g.abs());
    ParamMap {
        spec: map.spec,
        components: map.components.iter().map(|c| c.scale(&s)).collect(),
    }
}
