//! Dense exact linear algebra over any [`Scalar`] field.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{JsonScalar, Rational, Scalar};

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Display> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(|x| x.to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F: Scalar> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<F>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn diagonal(d: &[F]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { F::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    /// Entries flattened row-major into one vector.
    pub fn to_vec(&self) -> Vec<F> {
        self.data.clone()
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Mat<G> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    let cur = std::mem::replace(&mut out.data[idx], F::zero());
                    out.data[idx] = cur + &(a.clone() * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = F::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s = s + &(a.clone() * b);
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &Mat<F>) -> Mat<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Mat<F>) -> Mat<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Mat<F> {
        self.map(|x| x.clone() * c)
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Mat<F>) -> Mat<F> {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> F {
        let mut t = F::zero();
        for i in 0..self.rows.min(self.cols) {
            t = t + self.get(i, i);
        }
        t
    }

    /// `Σ c_i · M_i`.
    pub fn combination(coeffs: &[F], mats: &[Mat<F>]) -> Mat<F> {
        assert_eq!(coeffs.len(), mats.len());
        assert!(!mats.is_empty(), "empty combination");
        let mut out = Mat::zeros(mats[0].rows, mats[0].cols);
        for (c, m) in coeffs.iter().zip(mats) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.data.iter_mut().zip(&m.data) {
                if !x.is_zero() {
                    let cur = std::mem::replace(o, F::zero());
                    *o = cur + &(c.clone() * x);
                }
            }
        }
        out
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Mat<F>, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(&mut m.data, m.rows, m.cols);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        match F::fast_kernel(self) {
            Some(k) => self.cols - k.len(),
            None => self.rref().1.len(),
        }
    }

    /// Null space `{x : A·x = 0}`.
    pub fn kernel(&self) -> Subspace<F> {
        if let Some(basis) = F::fast_kernel(self) {
            return Subspace::from_spanning(self.cols, basis);
        }
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (row, &p) in pivots.iter().enumerate() {
                let e = r.get(row, free);
                if !e.is_zero() {
                    v[p] = -e.clone();
                }
            }
            basis.push(v);
        }
        Subspace::from_spanning(self.cols, basis)
    }

    /// Some `x` with `A·x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[F]) -> Result<Option<Vec<F>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "system has {} rows but right-hand side has length {}",
                self.rows,
                b.len()
            )));
        }
        let aug = Mat::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Mat<F>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Mat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                F::one()
            } else {
                F::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    pub fn det(&self) -> F {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r * n + c].is_zero()) else {
                return F::zero();
            };
            if p != c {
                for j in 0..n {
                    m.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m[c * n + c].clone();
            det = det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for r in c + 1..n {
                if m[r * n + c].is_zero() {
                    continue;
                }
                let f = m[r * n + c].clone() * &inv;
                for j in c..n {
                    let t = f.clone() * &m[c * n + j];
                    let cur = std::mem::replace(&mut m[r * n + j], F::zero());
                    m[r * n + j] = cur - &t;
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Monic generator of `{p : p(A) = 0}`, found from the first linear
    /// dependence in the Krylov sequence `I, A, A², …`.
    pub fn minimal_polynomial(&self) -> UPoly<F> {
        assert!(
            self.is_square(),
            "minimal polynomial of a non-square matrix"
        );
        let n = self.rows;
        let mut powers: Vec<Vec<F>> = vec![Mat::<F>::identity(n).data];
        let mut current = Mat::identity(n);
        loop {
            current = current.mul(self);
            let target = current.data.clone();
            let sys = Mat::from_cols(&powers);
            if let Ok(Some(c)) = sys.solve(&target) {
                let mut coeffs: Vec<F> = c.into_iter().map(|x| -x).collect();
                coeffs.push(F::one());
                return UPoly::new(coeffs);
            }
            powers.push(target);
        }
    }

    /// `ker(A − λ·Id)`.
    pub fn eigenspace(&self, lambda: &F) -> Subspace<F> {
        assert!(self.is_square());
        let shifted = self.sub(&Mat::identity(self.rows).scale(lambda));
        shifted.kernel()
    }

    pub fn max_digits(&self) -> usize {
        self.data.iter().map(|x| x.digits()).max().unwrap_or(0)
    }
}

impl<F: JsonScalar> Mat<F> {
    /// `{"rows": n, "cols": m, "entries": [[...], ...]}`.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = (0..self.rows)
            .map(|i| Value::Array(self.row(i).iter().map(|x| x.to_json()).collect()))
            .collect();
        json!({"rows": self.rows, "cols": self.cols, "entries": entries})
    }

    /// Accepts the object format above or a bare nested array.
    pub fn from_json(v: &Value) -> Result<Self> {
        let (entries, dims) = match v {
            Value::Object(o) => {
                let e = o
                    .get("entries")
                    .ok_or_else(|| Error::Parse("matrix without `entries`".into()))?;
                let r = o.get("rows").and_then(Value::as_u64);
                let c = o.get("cols").and_then(Value::as_u64);
                (e, r.zip(c))
            }
            Value::Array(_) => (v, None),
            other => return Err(Error::Parse(format!("expected matrix, found {other}"))),
        };
        let rows = entries
            .as_array()
            .ok_or_else(|| Error::Parse("`entries` must be an array".into()))?;
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r
                .as_array()
                .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
            out.push(r.iter().map(F::from_json).collect::<Result<Vec<F>>>()?);
        }
        let m = Mat::from_rows(out).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some((r, c)) = dims {
            if (r as usize, c as usize) != (m.rows, m.cols) {
                return Err(Error::Parse(format!(
                    "declared {r}x{c} matrix has {}x{} entries",
                    m.rows, m.cols
                )));
            }
        }
        Ok(m)
    }
}

/// Embeds a rational matrix into another field.
pub fn lift<F: Scalar>(m: &Mat<Rational>) -> Mat<F> {
    m.map(F::from_rational)
}

fn rref_in_place<F: Scalar>(data: &mut [F], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !data[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = data[r * cols + c].inv().expect("nonzero pivot");
        for j in c..cols {
            if !data[r * cols + j].is_zero() {
                let cur = std::mem::replace(&mut data[r * cols + j], F::zero());
                data[r * cols + j] = cur * &inv;
            }
        }
        let pivot_row: Vec<(usize, F)> = (c..cols)
            .filter(|&j| !data[r * cols + j].is_zero())
            .map(|j| (j, data[r * cols + j].clone()))
            .collect();
        for i in 0..rows {
            if i == r || data[i * cols + c].is_zero() {
                continue;
            }
            let f = data[i * cols + c].clone();
            for (j, pv) in &pivot_row {
                let t = f.clone() * pv;
                let cur = std::mem::replace(&mut data[i * cols + j], F::zero());
                data[i * cols + j] = cur - &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A linear subspace of `F^n`, stored by its reduced row echelon basis so
/// equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Scalar> Subspace<F> {
    pub fn from_spanning(ambient: usize, vectors: Vec<Vec<F>>) -> Self {
        if vectors.is_empty() {
            return Subspace {
                ambient,
                basis: Vec::new(),
                pivots: Vec::new(),
            };
        }
        let rows = vectors.len();
        let mut data: Vec<F> = vectors.into_iter().flatten().collect();
        assert_eq!(
            data.len(),
            rows * ambient,
            "vector length differs from ambient dimension"
        );
        let pivots = rref_in_place(&mut data, rows, ambient);
        let basis = (0..pivots.len())
            .map(|i| data[i * ambient..(i + 1) * ambient].to_vec())
            .collect();
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Self::from_spanning(ambient, Vec::new())
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_spanning(ambient, Mat::<F>::identity(ambient).rows_vec())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coefficients of `v` in the echelon basis, if `v` lies in the space.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        assert_eq!(v.len(), self.ambient);
        let coords: Vec<F> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in rest.iter_mut().zip(b) {
                if !x.is_zero() {
                    let cur = std::mem::replace(r, F::zero());
                    *r = cur - &(c.clone() * x);
                }
            }
        }
        rest.iter().all(|x| x.is_zero()).then_some(coords)
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_space(&self, other: &Subspace<F>) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Subspace::from_spanning(self.ambient, v)
    }

    pub fn intersection(&self, other: &Subspace<F>) -> Subspace<F> {
        // x = Σ a_i u_i = Σ b_j w_j
        let k = self.dim();
        if k == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        let mut cols = self.basis.clone();
        cols.extend(
            other
                .basis
                .iter()
                .map(|w| w.iter().map(|x| -x.clone()).collect()),
        );
        let ker = Mat::from_cols(&cols).kernel();
        let vecs = ker
            .basis
            .iter()
            .map(|c| {
                let mut x = vec![F::zero(); self.ambient];
                for (ci, u) in c[..k].iter().zip(&self.basis) {
                    for (xi, ui) in x.iter_mut().zip(u) {
                        let cur = std::mem::replace(xi, F::zero());
                        *xi = cur + &(ci.clone() * ui);
                    }
                }
                x
            })
            .collect();
        Subspace::from_spanning(self.ambient, vecs)
    }

    /// Unit vectors on the non-pivot coordinates: a complement of the space.
    pub fn complement_basis(&self) -> Vec<Vec<F>> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient)
            .filter(|&c| !is_pivot[c])
            .map(|c| {
                let mut v = vec![F::zero(); self.ambient];
                v[c] = F::one();
                v
            })
            .collect()
    }

    /// Rows of a matrix `W` with `W·v = 0` exactly for `v` in the space.
    pub fn annihilator(&self) -> Mat<F> {
        if self.dim() == 0 {
            return Mat::identity(self.ambient);
        }
        // The basis is in reduced echelon form, so the kernel is read off
        // the free columns.
        let free: Vec<usize> = (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .collect();
        if free.is_empty() {
            return Mat::zeros(0, self.ambient);
        }
        let rows = free
            .iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.ambient];
                v[f] = F::one();
                for (b, &p) in self.basis.iter().zip(&self.pivots) {
                    v[p] = -b[f].clone();
                }
                v
            })
            .collect();
        Mat::from_rows(rows).expect("rectangular")
    }

    /// Applies a linear map to the space.
    pub fn image(&self, m: &Mat<F>) -> Subspace<F> {
        Subspace::from_spanning(m.rows(), self.basis.iter().map(|v| m.mul_vec(v)).collect())
    }

    pub fn map_field<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Subspace<G> {
        Subspace::from_spanning(
            self.ambient,
            self.basis
                .iter()
                .map(|v| v.iter().map(&f).collect())
                .collect(),
        )
    }

    /// Lexicographic comparison of the echelon bases.
    pub fn lex_cmp(&self, other: &Subspace<F>) -> std::cmp::Ordering {
        for (a, b) in self.basis.iter().zip(&other.basis) {
            for (x, y) in a.iter().zip(b) {
                let o = x.total_cmp(y);
                if o != std::cmp::Ordering::Equal {
                    return o;
                }
            }
        }
        self.dim().cmp(&other.dim())
    }
}

impl<F: Scalar> Mat<F> {
    pub fn rows_vec(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Coordinates with respect to a fixed list of independent vectors (not
/// necessarily in echelon form).
#[derive(Clone, Debug)]
pub struct Coordinates<F: Scalar> {
    basis: Vec<Vec<F>>,
    rows: Vec<usize>,
    inv: Mat<F>,
}

impl<F: Scalar> Coordinates<F> {
    /// `None` when the vectors are dependent.
    pub fn new(basis: Vec<Vec<F>>) -> Option<Self> {
        let d = basis.len();
        if d == 0 {
            return Some(Coordinates {
                basis,
                rows: Vec::new(),
                inv: Mat::zeros(0, 0),
            });
        }
        let bt = Mat::from_rows(basis.clone()).ok()?;
        let (_, rows) = bt.rref();
        if rows.len() < d {
            return None;
        }
        let sub = Mat::from_fn(d, d, |i, j| basis[j][rows[i]].clone());
        let inv = sub.inverse()?;
        Some(Coordinates { basis, rows, inv })
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn coords(&self, v: &[F]) -> Option<Vec<F>> {
        let d = self.basis.len();
        if d == 0 {
            return v.iter().all(|x| x.is_zero()).then(Vec::new);
        }
        let picked: Vec<F> = self.rows.iter().map(|&r| v[r].clone()).collect();
        let c = self.inv.mul_vec(&picked);
        (self.combine(&c) == v).then_some(c)
    }

    pub fn combine(&self, c: &[F]) -> Vec<F> {
        combine(c, &self.basis, self.basis.first().map_or(0, |b| b.len()))
    }
}

/// `Σ c_i v_i` for vectors of length `n`.
pub fn combine<F: Scalar>(c: &[F], vs: &[Vec<F>], n: usize) -> Vec<F> {
    let mut out = vec![F::zero(); n];
    for (ci, v) in c.iter().zip(vs) {
        if ci.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                let cur = std::mem::replace(o, F::zero());
                *o = cur + &(ci.clone() * x);
            }
        }
    }
    out
}

/// Dense univariate polynomial, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> UPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    /// `Π (t − r_i)`.
    pub fn from_roots(roots: &[F]) -> Self {
        let mut p = UPoly::new(vec![F::one()]);
        for r in roots {
            p = p.mul(&UPoly::new(vec![-r.clone(), F::one()]));
        }
        p
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mul(&self, o: &UPoly<F>) -> UPoly<F> {
        let mut c = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                let cur = std::mem::replace(&mut c[i + j], F::zero());
                c[i + j] = cur + &(a.clone() * b);
            }
        }
        UPoly::new(c)
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_mat(&self, m: &Mat<F>) -> Mat<F> {
        let n = m.rows();
        let mut acc = Mat::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add(&Mat::identity(n).scale(c));
        }
        acc
    }

    /// True for `t^k`.
    pub fn is_monomial(&self) -> bool {
        self.coeffs[..self.degree()].iter().all(|c| c.is_zero())
    }
}

impl<F: Scalar> fmt::Display for UPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*t"),
                _ => format!("({c})*t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_int, Rational};
    use num_traits::Zero;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn qm(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat_int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn qv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let id = Mat::<Rational>::identity(3);
        let b = qv(&[1, -2, 5]);
        assert_eq!(id.solve(&b).unwrap().unwrap(), b);
        let a = qm(&[&[1, 2], &[2, 4]]);
        assert!(a.solve(&qv(&[1, 3])).unwrap().is_none());
        assert!(a.solve(&qv(&[1])).is_err());
    }

    #[test]
    fn solve_random_invertible_nine_by_nine() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let a = loop {
                let a = Mat::from_fn(9, 9, |_, _| rat_int(rng.gen_range(-5..=5)));
                if a.is_invertible() {
                    break a;
                }
            };
            let x0: Vec<Rational> = (0..9).map(|_| rat_int(rng.gen_range(-9..=9))).collect();
            let b = a.mul_vec(&x0);
            assert_eq!(a.solve(&b).unwrap().unwrap(), x0);
        }
    }

    #[test]
    fn kernels() {
        assert_eq!(Mat::<Rational>::zeros(3, 3).kernel().dim(), 3);
        assert_eq!(Mat::<Rational>::identity(3).kernel().dim(), 0);
        let a = qm(&[&[1, 1, 1]]);
        let k = a.kernel();
        assert_eq!(k.dim(), 2);
        for v in k.basis() {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn minimal_polynomials() {
        let id = Mat::<Rational>::identity(4);
        assert_eq!(id.minimal_polynomial(), UPoly::new(qv(&[-1, 1])));
        let j = qm(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let p = j.minimal_polynomial();
        assert_eq!(p, UPoly::new(qv(&[0, 0, 0, 1])));
        assert!(p.is_monomial());
        let d = qm(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 2]]);
        let p = d.minimal_polynomial();
        assert_eq!(p, UPoly::from_roots(&qv(&[1, 2])));
        assert!(p.eval_mat(&d).is_zero());
    }

    #[test]
    fn eigenspaces() {
        let id = Mat::<Rational>::identity(3);
        assert_eq!(id.eigenspace(&rat_int(1)).dim(), 3);
        assert_eq!(id.eigenspace(&rat_int(0)).dim(), 0);
        // ad(h) on (e, h, f): [h,e] = 2e, [h,h] = 0, [h,f] = -2f
        let adh = qm(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, -2]]);
        let s = adh.eigenspace(&rat_int(2));
        assert_eq!(s, Subspace::from_spanning(3, vec![qv(&[1, 0, 0])]));
    }

    #[test]
    fn inverse_and_det() {
        let a = qm(&[&[2, 1], &[7, 4]]);
        assert_eq!(a.det(), rat_int(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        assert!(qm(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn subspace_operations() {
        let u = Subspace::from_spanning(3, vec![qv(&[1, 0, 0]), qv(&[0, 1, 0])]);
        let w = Subspace::from_spanning(3, vec![qv(&[0, 1, 1]), qv(&[0, 0, 1])]);
        assert_eq!(
            u.intersection(&w),
            Subspace::from_spanning(3, vec![qv(&[0, 1, 0])])
        );
        assert_eq!(u.sum(&w).dim(), 3);
        let ann = u.annihilator();
        assert_eq!(ann.rows(), 1);
        for v in u.basis() {
            assert!(ann.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(u.coordinates(&qv(&[3, -4, 0])).unwrap(), qv(&[3, -4]));
        assert!(u.coordinates(&qv(&[0, 0, 1])).is_none());
    }

    #[test]
    fn matrix_json_round_trip() {
        let a = qm(&[&[1, -2], &[0, 3]]).scale(&crate::field::rat(1, 2));
        let j = a.to_json();
        assert_eq!(j["entries"][0][0], serde_json::json!("1/2"));
        assert_eq!(Mat::<Rational>::from_json(&j).unwrap(), a);
    }

    fn small_matrix() -> impl Strategy<Value = Mat<Rational>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-4i64..=4, r * c)
                .prop_map(move |v| Mat::from_vec(r, c, v.into_iter().map(rat_int).collect()))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(a in small_matrix()) {
            let k = a.kernel();
            prop_assert_eq!(a.rank() + k.dim(), a.cols());
            for v in k.basis() {
                prop_assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn minimal_polynomial_annihilates(v in proptest::collection::vec(-3i64..=3, 16)) {
            let a = Mat::from_vec(4, 4, v.into_iter().map(rat_int).collect());
            prop_assert!(a.minimal_polynomial().eval_mat(&a).is_zero());
        }

        #[test]
        fn subspace_canonical_form(v in proptest::collection::vec(-3i64..=3, 12), c in proptest::collection::vec(-3i64..=3, 9)) {
            // the same space spanned by different generating sets compares equal
            let gens: Vec<Vec<Rational>> = v.chunks(4).map(|x| x.iter().map(|&y| rat_int(y)).collect()).collect();
            let mix = Mat::from_vec(3, 3, c.into_iter().map(rat_int).collect());
            prop_assume!(mix.is_invertible());
            let mixed: Vec<Vec<Rational>> = (0..3).map(|i| {
                let mut out = vec![rat_int(0); 4];
                for j in 0..3 {
                    for k in 0..4 {
                        out[k] = out[k].clone() + mix.get(i, j).clone() * &gens[j][k];
                    }
                }
                out
            }).collect();
            prop_assert_eq!(Subspace::from_spanning(4, gens), Subspace::from_spanning(4, mixed));
        }
    }
}
