//! Finite-dimensional Lie algebras given by structure constants.

use serde_json::{json, Value};

use crate::conic::{ConicCertificate, ConicField, TernaryForm};
use crate::error::{Error, Result};
use crate::field::{FieldKind, JsonScalar, QuadExt, Rational, Scalar};
use crate::linalg::{combine, Coordinates, Mat, Subspace};

/// A Lie algebra with basis `x_0, …, x_{n−1}` and `[x_i, x_j] = Σ_k c_ijk x_k`,
/// optionally with matrices realizing the basis faithfully.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra<F: Scalar> {
    dim: usize,
    sc: Vec<F>,
    realization: Option<Vec<Mat<F>>>,
}

/// Chevalley basis `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`, in coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2Triple<F> {
    pub e: Vec<F>,
    pub h: Vec<F>,
    pub f: Vec<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeviData<F: Scalar> {
    pub nilradical: Subspace<F>,
    pub radical: Subspace<F>,
    pub levi: Subspace<F>,
}

/// Outcome of recognizing a three-dimensional simple algebra as `sl2`.
#[derive(Clone, Debug, PartialEq)]
pub enum Sl2Identification<F: Scalar> {
    Split(Sl2Triple<F>),
    /// The Killing form has no isotropic vector found; the certificate says
    /// whether that is proven or only inconclusive.
    NotSplit {
        killing: TernaryForm<F>,
        certificate: ConicCertificate<F>,
    },
}

impl<F: Scalar> LieAlgebra<F> {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn from_structure_constants(dim: usize, sc: Vec<F>) -> Result<Self> {
        if sc.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} structure constants for dimension {dim}",
                sc.len()
            )));
        }
        let l = LieAlgebra {
            dim,
            sc,
            realization: None,
        };
        if !l.is_antisymmetric() {
            return Err(Error::InvalidArgument(
                "structure constants are not antisymmetric".into(),
            ));
        }
        if !l.satisfies_jacobi() {
            return Err(Error::InvalidArgument(
                "structure constants violate the Jacobi identity".into(),
            ));
        }
        Ok(l)
    }

    /// The Lie algebra spanned by linearly independent matrices closed under
    /// the commutator.
    pub fn from_matrices(mats: Vec<Mat<F>>) -> Result<Self> {
        let dim = mats.len();
        let flat: Vec<Vec<F>> = mats.iter().map(|m| m.to_vec()).collect();
        let coords = Coordinates::new(flat)
            .ok_or_else(|| Error::InvalidArgument("matrices are linearly dependent".into()))?;
        let mut sc = vec![F::zero(); dim * dim * dim];
        for i in 0..dim {
            for j in i + 1..dim {
                let c = coords
                    .coords(&mats[i].commutator(&mats[j]).to_vec())
                    .ok_or_else(|| {
                        Error::InvalidArgument("matrices are not closed under commutators".into())
                    })?;
                for (k, v) in c.into_iter().enumerate() {
                    sc[(j * dim + i) * dim + k] = -v.clone();
                    sc[(i * dim + j) * dim + k] = v;
                }
            }
        }
        Ok(LieAlgebra {
            dim,
            sc,
            realization: Some(mats),
        })
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            sc: vec![F::zero(); dim * dim * dim],
            realization: None,
        }
    }

    /// `sl2` in the basis `(e, h, f)`.
    pub fn sl2() -> Self {
        let e = Mat::from_fn(2, 2, |i, j| {
            if (i, j) == (0, 1) {
                F::one()
            } else {
                F::zero()
            }
        });
        let h = Mat::diagonal(&[F::one(), -F::one()]);
        let f = Mat::from_fn(2, 2, |i, j| {
            if (i, j) == (1, 0) {
                F::one()
            } else {
                F::zero()
            }
        });
        Self::from_matrices(vec![e, h, f]).expect("sl2 is closed")
    }

    /// Direct sum; realizations (when both exist) become block diagonal.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.dim + other.dim;
        let mut sc = vec![F::zero(); n * n * n];
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    sc[(i * n + j) * n + k] = self.c(i, j, k).clone();
                }
            }
        }
        let o = self.dim;
        for i in 0..other.dim {
            for j in 0..other.dim {
                for k in 0..other.dim {
                    sc[((i + o) * n + j + o) * n + k + o] = other.c(i, j, k).clone();
                }
            }
        }
        let realization = match (&self.realization, &other.realization) {
            (Some(a), Some(b)) => {
                let (p, q) = (a[0].rows(), b[0].rows());
                let mut mats = Vec::new();
                for m in a {
                    mats.push(Mat::from_fn(p + q, p + q, |i, j| {
                        if i < p && j < p {
                            m.get(i, j).clone()
                        } else {
                            F::zero()
                        }
                    }));
                }
                for m in b {
                    mats.push(Mat::from_fn(p + q, p + q, |i, j| {
                        if i >= p && j >= p {
                            m.get(i - p, j - p).clone()
                        } else {
                            F::zero()
                        }
                    }));
                }
                Some(mats)
            }
            _ => None,
        };
        LieAlgebra {
            dim: n,
            sc,
            realization,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &F {
        &self.sc[(i * self.dim + j) * self.dim + k]
    }

    pub fn structure_constants(&self) -> &[F] {
        &self.sc
    }

    pub fn realization(&self) -> Option<&[Mat<F>]> {
        self.realization.as_deref()
    }

    pub fn basis_vector(&self, i: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim];
        v[i] = F::one();
        v
    }

    pub fn bracket(&self, x: &[F], y: &[F]) -> Vec<F> {
        let n = self.dim;
        let mut out = vec![F::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let xy = x[i].clone() * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        let cur = std::mem::replace(o, F::zero());
                        *o = cur + &(xy.clone() * c);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ [x, y]`.
    pub fn ad(&self, x: &[F]) -> Mat<F> {
        let n = self.dim;
        let mut m = Mat::<F>::zeros(n, n);
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        let v = m.get(k, j).clone() + &(x[i].clone() * c);
                        m.set(k, j, v);
                    }
                }
            }
        }
        m
    }

    pub fn ad_basis(&self) -> Vec<Mat<F>> {
        (0..self.dim)
            .map(|i| self.ad(&self.basis_vector(i)))
            .collect()
    }

    /// Image of a coordinate vector in the realization.
    pub fn realize(&self, x: &[F]) -> Option<Mat<F>> {
        let mats = self.realization.as_ref()?;
        if mats.is_empty() {
            return None;
        }
        Some(Mat::combination(x, mats))
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| *self.c(i, j, k) == -self.c(j, i, k).clone())))
    }

    pub fn satisfies_jacobi(&self) -> bool {
        let n = self.dim;
        let e: Vec<Vec<F>> = (0..n).map(|i| self.basis_vector(i)).collect();
        for i in 0..n {
            for j in i + 1..n {
                let ij = self.bracket(&e[i], &e[j]);
                for k in j + 1..n {
                    let jk = self.bracket(&e[j], &e[k]);
                    let ki = self.bracket(&e[k], &e[i]);
                    let s1 = self.bracket(&ij, &e[k]);
                    let s2 = self.bracket(&jk, &e[i]);
                    let s3 = self.bracket(&ki, &e[j]);
                    if s1
                        .iter()
                        .zip(&s2)
                        .zip(&s3)
                        .any(|((a, b), c)| !(a.clone() + b + c).is_zero())
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Structure constants recomputed from the realization agree.
    pub fn realization_consistent(&self) -> bool {
        match &self.realization {
            None => true,
            Some(mats) => match LieAlgebra::from_matrices(mats.clone()) {
                Ok(l) => l.sc == self.sc,
                Err(_) => false,
            },
        }
    }

    pub fn killing_form(&self) -> Mat<F> {
        let ads = self.ad_basis();
        let n = self.dim;
        let mut k = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let t = ads[i].mul(&ads[j]).trace();
                k.set(i, j, t.clone());
                k.set(j, i, t);
            }
        }
        k
    }

    pub fn killing(&self, x: &[F], y: &[F]) -> F {
        self.ad(x).mul(&self.ad(y)).trace()
    }

    pub fn is_semisimple(&self) -> bool {
        self.dim > 0 && !self.killing_form().det().is_zero()
    }

    /// `{x : [x, y] = 0 for all y}`.
    pub fn centre(&self) -> Subspace<F> {
        let n = self.dim;
        // [x, x_j]_k = Σ_i x_i c_ijk
        let m = Mat::from_fn(n * n, n, |row, i| {
            let (j, k) = (row / n, row % n);
            self.c(i, j, k).clone()
        });
        m.kernel()
    }

    pub fn derived_algebra(&self) -> Subspace<F> {
        let n = self.dim;
        let mut v = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                v.push((0..n).map(|k| self.c(i, j, k).clone()).collect());
            }
        }
        Subspace::from_spanning(n, v)
    }

    /// `span [A, B]`.
    pub fn bracket_spaces(&self, a: &Subspace<F>, b: &Subspace<F>) -> Subspace<F> {
        let mut v = Vec::new();
        for x in a.basis() {
            for y in b.basis() {
                v.push(self.bracket(x, y));
            }
        }
        Subspace::from_spanning(self.dim, v)
    }

    pub fn is_subalgebra(&self, s: &Subspace<F>) -> bool {
        s.contains_space(&self.bracket_spaces(s, s))
    }

    pub fn is_ideal(&self, s: &Subspace<F>) -> bool {
        s.contains_space(&self.bracket_spaces(&Subspace::full(self.dim), s))
    }

    pub fn is_ad_nilpotent(&self, x: &[F]) -> bool {
        let a = self.ad(x);
        let mut p = a.clone();
        for _ in 1..self.dim.max(1) {
            p = p.mul(&a);
        }
        p.is_zero()
    }

    /// `{x : [x, S] ⊆ S}`.
    pub fn normalizer(&self, s: &Subspace<F>) -> Subspace<F> {
        let n = self.dim;
        if s.dim() == 0 || s.dim() == n {
            return Subspace::full(n);
        }
        let w = s.annihilator();
        let mut rows = Vec::new();
        for b in s.basis() {
            // [x, b] = −ad(b)·x
            let wa = w.mul(&self.ad(b));
            rows.extend(wa.rows_vec());
        }
        Mat::from_rows(rows).expect("rectangular").kernel()
    }

    /// Basis of `{X : X·ad(y) = ad(y)·X for all y}`, the identity first.
    pub fn centroid(&self) -> Vec<Mat<F>> {
        let n = self.dim;
        let ads = self.ad_basis();
        let mut rows = Vec::new();
        for a in &ads {
            for r in 0..n {
                for c in 0..n {
                    // (X A − A X)[r][c]
                    let mut row = vec![F::zero(); n * n];
                    for k in 0..n {
                        row[r * n + k] = row[r * n + k].clone() + a.get(k, c);
                        row[k * n + c] = row[k * n + c].clone() - a.get(r, k);
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let ker = if rows.is_empty() {
            Subspace::full(n * n)
        } else {
            Mat::from_rows(rows).expect("rectangular").kernel()
        };
        let id = Mat::<F>::identity(n).to_vec();
        let mut chosen: Vec<Vec<F>> = Vec::new();
        if ker.contains(&id) {
            chosen.push(id);
        }
        for v in ker.basis() {
            let mut trial = chosen.clone();
            trial.push(v.clone());
            if Subspace::from_spanning(n * n, trial.clone()).dim() == trial.len() {
                chosen = trial;
            }
        }
        chosen.into_iter().map(|v| Mat::from_vec(n, n, v)).collect()
    }

    /// Structure constants of a subalgebra in the echelon basis of `s`,
    /// with the realization restricted when present.
    pub fn subalgebra(&self, s: &Subspace<F>) -> Result<LieAlgebra<F>> {
        self.subalgebra_with_basis(s.basis().to_vec())
    }

    pub fn subalgebra_with_basis(&self, basis: Vec<Vec<F>>) -> Result<LieAlgebra<F>> {
        let d = basis.len();
        let coords = Coordinates::new(basis.clone())
            .ok_or_else(|| Error::InvalidArgument("subalgebra basis is dependent".into()))?;
        let mut sc = vec![F::zero(); d * d * d];
        for i in 0..d {
            for j in i + 1..d {
                let c = coords
                    .coords(&self.bracket(&basis[i], &basis[j]))
                    .ok_or_else(|| Error::InvalidArgument("subspace is not a subalgebra".into()))?;
                for (k, v) in c.into_iter().enumerate() {
                    sc[(j * d + i) * d + k] = -v.clone();
                    sc[(i * d + j) * d + k] = v;
                }
            }
        }
        let realization = self
            .realization
            .as_ref()
            .filter(|m| !m.is_empty())
            .map(|mats| basis.iter().map(|b| Mat::combination(b, mats)).collect());
        Ok(LieAlgebra {
            dim: d,
            sc,
            realization,
        })
    }

    /// Applies a field embedding to all constants.
    pub fn map_field<G: Scalar>(&self, f: impl Fn(&F) -> G) -> LieAlgebra<G> {
        LieAlgebra {
            dim: self.dim,
            sc: self.sc.iter().map(&f).collect(),
            realization: self
                .realization
                .as_ref()
                .map(|ms| ms.iter().map(|m| m.map(&f)).collect()),
        }
    }

    pub fn field_kind(&self) -> FieldKind {
        let mut entries = self
            .sc
            .iter()
            .chain(self.realization.iter().flatten().flat_map(|m| m.entries()));
        entries
            .find_map(|x| match x.kind() {
                FieldKind::Rational => None,
                k => Some(k),
            })
            .unwrap_or(FieldKind::Rational)
    }

    /// Splits a six-dimensional semisimple algebra into two commuting
    /// three-dimensional ideals using a non-scalar element of the centroid;
    /// `None` when the centroid's quadratic polynomial does not split.
    pub fn decompose_two_ideals(&self) -> Result<Option<(Subspace<F>, Subspace<F>)>> {
        if self.dim != 6 || !self.is_semisimple() {
            return Err(Error::Precondition(
                "decomposition needs a six-dimensional semisimple algebra".into(),
            ));
        }
        let cent = self.centroid();
        let Some(c) = cent.iter().find(|m| !is_scalar_matrix(m)) else {
            return Ok(None);
        };
        let mp = c.minimal_polynomial();
        if mp.degree() != 2 {
            return Ok(None);
        }
        // t² + p1 t + p0
        let p0 = mp.coeffs()[0].clone();
        let p1 = mp.coeffs()[1].clone();
        let disc = p1.clone() * &p1 - F::from_int(4) * &p0;
        let Some(s) = disc.sqrt() else {
            return Ok(None);
        };
        let half = F::from_int(2).inv().expect("characteristic zero");
        let r1 = (-p1.clone() + &s) * &half;
        let r2 = (-p1 - &s) * &half;
        let i1 = c.eigenspace(&r1);
        let i2 = c.eigenspace(&r2);
        if i1.dim() != 3 || i2.dim() != 3 || !self.is_ideal(&i1) || !self.is_ideal(&i2) {
            return Ok(None);
        }
        if self.bracket_spaces(&i1, &i2).dim() != 0 {
            return Ok(None);
        }
        Ok(Some(if i1.lex_cmp(&i2).is_le() {
            (i1, i2)
        } else {
            (i2, i1)
        }))
    }

    /// Radical, nilradical and a Levi subalgebra.
    pub fn levi_data(&self) -> Result<LeviData<F>> {
        let n = self.dim;
        let k = self.killing_form();
        let radical = orthogonal(&k, &self.derived_algebra());
        let candidate = radical.intersection(&orthogonal(&k, &radical));
        let nilradical = if self.is_nil_ideal(&candidate) {
            candidate
        } else {
            self.bracket_spaces(&Subspace::full(n), &radical)
        };
        let levi = self.levi_complement(&radical)?;
        Ok(LeviData {
            nilradical,
            radical,
            levi,
        })
    }

    fn is_nil_ideal(&self, s: &Subspace<F>) -> bool {
        self.is_ideal(s) && s.basis().iter().all(|x| self.is_ad_nilpotent(x))
    }

    /// Levi–Malcev: lift a vector-space complement of the solvable ideal `r`
    /// to a subalgebra, correcting it one step of the derived series of `r`
    /// at a time. Each step solves the linear cocycle equation modulo the
    /// next derived term.
    pub fn levi_complement(&self, r: &Subspace<F>) -> Result<Subspace<F>> {
        let n = self.dim;
        if r.dim() == 0 {
            return Ok(Subspace::full(n));
        }
        if r.dim() == n {
            return Ok(Subspace::zero(n));
        }
        let ks = r.complement_basis();
        let s = ks.len();
        let mut full_basis = ks.clone();
        full_basis.extend(r.basis().iter().cloned());
        let proj = Coordinates::new(full_basis).expect("complement is independent");
        let mut lifts = ks.clone();
        let mut series = vec![r.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self.bracket_spaces(last, last);
            if next.dim() == 0 {
                break;
            }
            if next.dim() == last.dim() {
                return Err(Error::Degenerate("radical is not solvable".into()));
            }
            series.push(next);
        }
        series.push(Subspace::zero(n));
        for step in 0..series.len() - 1 {
            let ri = &series[step];
            let w = series[step + 1].annihilator();
            let t = ri.dim();
            let mut rows: Vec<Vec<F>> = Vec::new();
            let mut rhs: Vec<F> = Vec::new();
            for j in 0..s {
                for l in j + 1..s {
                    let br = self.bracket(&lifts[j], &lifts[l]);
                    let c: Vec<F> = proj.coords(&br).expect("full basis")[..s].to_vec();
                    let back = combine(&c, &lifts, n);
                    let defect: Vec<F> = br.iter().zip(&back).map(|(a, b)| a.clone() - b).collect();
                    let wd = w.mul_vec(&defect);
                    // coefficient blocks for δ_m = Σ_q u_{m,q} ρ_q
                    let mut block = Mat::<F>::zeros(w.rows(), s * t);
                    for (q, rho) in ri.basis().iter().enumerate() {
                        let a = w.mul_vec(&self.bracket(&lifts[j], rho));
                        let b = w.mul_vec(&self.bracket(&lifts[l], rho));
                        let wr = w.mul_vec(rho);
                        for row in 0..w.rows() {
                            let idx_l = l * t + q;
                            let idx_j = j * t + q;
                            let v = block.get(row, idx_l).clone() + &a[row];
                            block.set(row, idx_l, v);
                            let v = block.get(row, idx_j).clone() - &b[row];
                            block.set(row, idx_j, v);
                            for (m, cm) in c.iter().enumerate() {
                                if cm.is_zero() {
                                    continue;
                                }
                                let idx = m * t + q;
                                let v = block.get(row, idx).clone() - &(cm.clone() * &wr[row]);
                                block.set(row, idx, v);
                            }
                        }
                    }
                    rows.extend(block.rows_vec());
                    rhs.extend(wd.into_iter().map(|x| -x));
                }
            }
            if rows.is_empty() || rhs.iter().all(|x| x.is_zero()) {
                continue;
            }
            let sys = Mat::from_rows(rows).expect("rectangular");
            let u = sys.solve(&rhs)?.ok_or_else(|| {
                Error::Degenerate("Levi lifting equations are inconsistent".into())
            })?;
            for (j, lift) in lifts.iter_mut().enumerate() {
                let delta = combine(&u[j * t..(j + 1) * t], ri.basis(), n);
                for (x, d) in lift.iter_mut().zip(delta) {
                    let cur = std::mem::replace(x, F::zero());
                    *x = cur + &d;
                }
            }
        }
        let levi = Subspace::from_spanning(n, lifts);
        if levi.dim() != s || !self.is_subalgebra(&levi) {
            return Err(Error::Degenerate("Levi lifting did not close".into()));
        }
        Ok(levi)
    }

    /// Checks the three Chevalley relations exactly.
    pub fn is_sl2_triple(&self, t: &Sl2Triple<F>) -> bool {
        let two = F::from_int(2);
        let he = self.bracket(&t.h, &t.e);
        let hf = self.bracket(&t.h, &t.f);
        let ef = self.bracket(&t.e, &t.f);
        he.iter().zip(&t.e).all(|(a, b)| *a == two.clone() * b)
            && hf.iter().zip(&t.f).all(|(a, b)| *a == -(two.clone() * b))
            && ef == t.h
            && t.h.iter().any(|x| !x.is_zero())
    }
}

impl<F: ConicField> LieAlgebra<F> {
    /// Recognizes a three-dimensional semisimple algebra as split `sl2` by
    /// an isotropic vector of its Killing form.
    pub fn identify_sl2(&self, height: u32) -> Result<Sl2Identification<F>> {
        if self.dim != 3 || !self.is_semisimple() {
            return Err(Error::Precondition(
                "sl2 identification needs a three-dimensional semisimple algebra".into(),
            ));
        }
        let form = TernaryForm::new(self.killing_form())?;
        let cert = F::solve_conic(&form, height)?;
        let Some(a) = cert.point.clone() else {
            return Ok(Sl2Identification::NotSplit {
                killing: form,
                certificate: cert,
            });
        };
        Ok(Sl2Identification::Split(self.sl2_triple_from_isotropic(a)?))
    }

    /// Completes a nonzero Killing-isotropic element `a` of a
    /// three-dimensional simple algebra to a triple with `e = a`.
    pub fn sl2_triple_from_isotropic(&self, a: Vec<F>) -> Result<Sl2Triple<F>> {
        if !self.is_ad_nilpotent(&a) {
            return Err(Error::Degenerate(
                "isotropic Killing vector is not ad-nilpotent".into(),
            ));
        }
        // [a, b] = a
        let b = self
            .ad(&a)
            .solve(&a)?
            .ok_or_else(|| Error::Degenerate("no b with [a, b] = a".into()))?;
        let h: Vec<F> = b.iter().map(|x| x.clone() * &F::from_int(-2)).collect();
        let f0 = self.ad(&h).eigenspace(&F::from_int(-2));
        if f0.dim() != 1 {
            return Err(Error::Degenerate(
                "ad h has no one-dimensional −2 eigenspace".into(),
            ));
        }
        let f0 = f0.basis()[0].clone();
        let ef = self.bracket(&a, &f0);
        let k = h.iter().position(|x| !x.is_zero()).expect("h is nonzero");
        let mu = ef[k].quo(&h[k]);
        let inv = mu
            .inv()
            .ok_or_else(|| Error::Degenerate("[e, f] vanishes".into()))?;
        let f: Vec<F> = f0.into_iter().map(|x| x * &inv).collect();
        let t = Sl2Triple { e: a, h, f };
        if !self.is_sl2_triple(&t) {
            return Err(Error::Degenerate(
                "constructed triple fails the sl2 relations".into(),
            ));
        }
        Ok(t)
    }
}

impl<F: JsonScalar> LieAlgebra<F> {
    pub fn to_json(&self) -> Value {
        let n = self.dim;
        let sc: Vec<Value> = (0..n)
            .map(|i| {
                Value::Array(
                    (0..n)
                        .map(|j| Value::Array((0..n).map(|k| self.c(i, j, k).to_json()).collect()))
                        .collect(),
                )
            })
            .collect();
        let mut v = json!({
            "dim": n,
            "field": serde_json::to_value(self.field_kind()).expect("serializable"),
            "sc": sc,
        });
        if let Some(r) = &self.realization {
            v["realization"] = Value::Array(r.iter().map(|m| m.to_json()).collect());
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing `dim`".into()))? as usize;
        if let Some(f) = v.get("field") {
            serde_json::from_value::<FieldKind>(f.clone())
                .map_err(|e| Error::Parse(format!("bad `field`: {e}")))?;
        }
        let sc_json = v
            .get("sc")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing `sc`".into()))?;
        let mut sc = Vec::with_capacity(n * n * n);
        if sc_json.len() != n {
            return Err(Error::Parse("`sc` has the wrong shape".into()));
        }
        for row in sc_json {
            let row = row
                .as_array()
                .filter(|r| r.len() == n)
                .ok_or_else(|| Error::Parse("`sc` has the wrong shape".into()))?;
            for col in row {
                let col = col
                    .as_array()
                    .filter(|c| c.len() == n)
                    .ok_or_else(|| Error::Parse("`sc` has the wrong shape".into()))?;
                for x in col {
                    sc.push(F::from_json(x)?);
                }
            }
        }
        let mut l = LieAlgebra::from_structure_constants(n, sc)?;
        if let Some(Value::Array(r)) = v.get("realization") {
            let mats = r
                .iter()
                .map(Mat::from_json)
                .collect::<Result<Vec<Mat<F>>>>()?;
            if mats.len() != n {
                return Err(Error::Parse("realization length differs from `dim`".into()));
            }
            l.realization = Some(mats);
            if !l.realization_consistent() {
                return Err(Error::InvalidArgument(
                    "realization does not match the structure constants".into(),
                ));
            }
        }
        Ok(l)
    }
}

/// Tensors a rational algebra with `Q(√a)`.
pub fn extend_to_quadratic(l: &LieAlgebra<Rational>, a: i64) -> LieAlgebra<QuadExt> {
    l.map_field(|x| QuadExt::embed(x.clone(), a))
}

/// `{x : K(s, x) = 0 for all s in S}` for a symmetric form `K`.
pub fn orthogonal<F: Scalar>(k: &Mat<F>, s: &Subspace<F>) -> Subspace<F> {
    if s.dim() == 0 {
        return Subspace::full(k.rows());
    }
    let rows: Vec<Vec<F>> = s.basis().iter().map(|v| k.transpose().mul_vec(v)).collect();
    Mat::from_rows(rows).expect("rectangular").kernel()
}

pub fn is_scalar_matrix<F: Scalar>(m: &Mat<F>) -> bool {
    let n = m.rows();
    let d = m.get(0, 0);
    (0..n).all(|i| {
        (0..n).all(|j| {
            if i == j {
                m.get(i, j) == d
            } else {
                m.get(i, j).is_zero()
            }
        })
    })
}
