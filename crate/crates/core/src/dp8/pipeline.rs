//! Classification and parametrization of an embedded degree-8 del Pezzo
//! surface from its Lie algebra.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::squarefree_part;
use crate::conic::{
    diagonalize, verify_certificate_q, verify_certificate_qext, ConicCertificate, Obstruction,
    TernaryForm, Verdict, DEFAULT_HEIGHT,
};
use crate::field::{QuadExt, Rational, Scalar};
use crate::lie::{extend_to_quadratic, is_scalar_matrix, LieAlgebra, Sl2Identification, Sl2Triple};
use crate::linalg::{combine, Coordinates, Mat, Subspace};
use crate::modrep::{blowup_module_iso, highest_weight_iso, module_iso_linear, ModuleAction};
use crate::quadform::{
    conic_point_over_extension, quaternary_anisotropic_at, totally_isotropic_subspace, Isotropy,
};

use super::canonical::{CanonicalModel, ModelKind};
use super::{
    clear_denominators, lie_algebra_of_variety, primitive_matrix, split_scalar,
    verify_parametrization, ParamMap, QuadricIdeal,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    /// Height bound for conic searches over quadratic fields.
    pub height: u32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            height: DEFAULT_HEIGHT,
        }
    }
}

/// A conic without points, with the field it lives over.
#[derive(Clone, Debug, PartialEq)]
pub enum ConicWitness {
    Rational {
        form: TernaryForm<Rational>,
        certificate: ConicCertificate<Rational>,
    },
    Quadratic {
        a: i64,
        form: TernaryForm<QuadExt>,
        certificate: ConicCertificate<QuadExt>,
    },
    /// A rational form with no zero over `Q(√a)`, because `form ⊥ ⟨a·det⟩`
    /// has no zero at `place`.
    Descended {
        a: i64,
        form: TernaryForm<Rational>,
        place: Obstruction,
    },
}

impl ConicWitness {
    /// Re-checks the obstruction independently of the solver.
    pub fn verify(&self) -> bool {
        match self {
            ConicWitness::Rational { form, certificate } => {
                certificate.verdict == Verdict::Unsolvable
                    && verify_certificate_q(form, certificate)
            }
            ConicWitness::Quadratic {
                form, certificate, ..
            } => {
                certificate.verdict == Verdict::Unsolvable
                    && verify_certificate_qext(form, certificate)
            }
            ConicWitness::Descended { a, form, place } => {
                let g = form.matrix();
                let det = g.det();
                if det.is_zero() {
                    return false;
                }
                let (_, d) = diagonalize(g);
                let q = [
                    d.get(0, 0).clone(),
                    d.get(1, 1).clone(),
                    d.get(2, 2).clone(),
                    det * Rational::from_integer((*a).into()),
                ];
                quaternary_anisotropic_at(&q, place)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ConicWitness::Rational { form, certificate } => json!({
                "field": "Q",
                "form": form.matrix().to_json(),
                "conic": certificate.to_json(),
            }),
            ConicWitness::Quadratic {
                a,
                form,
                certificate,
            } => json!({
                "field": format!("Q(sqrt({a}))"),
                "form": form.matrix().to_json(),
                "conic": certificate.to_json(),
            }),
            ConicWitness::Descended { a, form, place } => {
                let cert = ConicCertificate::<Rational> {
                    verdict: Verdict::Unsolvable,
                    point: None,
                    obstruction: Some(place.clone()),
                };
                json!({
                    "field": format!("Q(sqrt({a}))"),
                    "form": form.matrix().to_json(),
                    "form_field": "Q",
                    "conic": cert.to_json(),
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PipelineResult {
    /// `transform` maps the canonical model onto the input surface; the map
    /// is the canonical parametrization composed with it.
    Parametrization {
        kind: ModelKind,
        map: ParamMap,
        transform: Mat<Rational>,
    },
    NotRational {
        kind: ModelKind,
        path: &'static str,
        witness: ConicWitness,
    },
    Inconclusive {
        stage: &'static str,
        reason: String,
    },
    InvalidInput {
        stage: &'static str,
        reason: String,
    },
}

impl PipelineResult {
    pub fn tag(&self) -> &'static str {
        match self {
            PipelineResult::Parametrization { .. } => "parametrization",
            PipelineResult::NotRational { .. } => "not_rational",
            PipelineResult::Inconclusive { .. } => "inconclusive",
            PipelineResult::InvalidInput { .. } => "invalid",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub lie_dim: Option<usize>,
    /// Digits of the largest entry of the Lie algebra basis matrices.
    pub lie_coeff_digits: Option<usize>,
    pub max_coeff_digits: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineOutput {
    pub result: PipelineResult,
    pub stats: Stats,
}

impl PipelineOutput {
    pub fn to_json(&self) -> Value {
        let mut v = json!({ "result": self.result.tag() });
        match &self.result {
            PipelineResult::Parametrization {
                kind,
                map,
                transform,
            } => {
                v["kind"] = json!(kind.name());
                if let ModelKind::Sphere(a) = kind {
                    v["a"] = json!(a);
                }
                v["map"] = map.to_json();
                v["transform"] = transform.to_json();
            }
            PipelineResult::NotRational {
                kind,
                path,
                witness,
            } => {
                v["kind"] = json!(kind.name());
                let mut c = witness.to_json();
                c["path"] = json!(path);
                v["certificate"] = c;
            }
            PipelineResult::Inconclusive { stage, reason }
            | PipelineResult::InvalidInput { stage, reason } => {
                v["stage"] = json!(stage);
                v["reason"] = json!(reason);
            }
        }
        let mut s = json!({});
        if let Some(d) = self.stats.lie_dim {
            s["lie_dim"] = json!(d);
        }
        if let Some(d) = self.stats.lie_coeff_digits {
            s["lie_coeff_digits"] = json!(d);
        }
        if let Some(d) = self.stats.max_coeff_digits {
            s["max_coeff_digits"] = json!(d);
        }
        v["stats"] = s;
        v
    }
}

enum Stop {
    Invalid(&'static str, String),
    Inconclusive(&'static str, String),
    NotRational(ModelKind, &'static str, ConicWitness),
}

type Step<T> = std::result::Result<T, Stop>;

fn invalid<E: std::fmt::Display>(stage: &'static str) -> impl Fn(E) -> Stop {
    move |e| Stop::Invalid(stage, e.to_string())
}

/// What the Lie algebra says about the surface, before any parametrization.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub lie_dim: usize,
    pub semisimple: bool,
    pub kind: ModelKind,
}

struct Analysis {
    lie: LieAlgebra<Rational>,
    l0: LieAlgebra<Rational>,
    shape: Shape,
}

enum Shape {
    Product(Subspace<Rational>, Subspace<Rational>),
    Simple { a: i64 },
    Blowup,
}

fn analyse(ideal: &QuadricIdeal) -> Step<Analysis> {
    if ideal.n() != 8 {
        return Err(Stop::Invalid(
            "input",
            format!("expected quadrics in P^8, got P^{}", ideal.n()),
        ));
    }
    if ideal.dim() != 20 {
        return Err(Stop::Invalid(
            "input",
            format!(
                "expected a 20-dimensional space of quadrics, got {}",
                ideal.dim()
            ),
        ));
    }
    let lie = lie_algebra_of_variety(ideal).map_err(invalid("lie"))?;
    let (l0, _) = split_scalar(&lie).map_err(invalid("lie"))?;
    if l0.dim() != 6 {
        return Err(Stop::Invalid(
            "lie",
            format!(
                "trace-free Lie algebra has dimension {}, expected 6",
                l0.dim()
            ),
        ));
    }
    let shape = if l0.is_semisimple() {
        match l0.decompose_two_ideals().map_err(invalid("decompose"))? {
            Some((i1, i2)) => Shape::Product(i1, i2),
            None => Shape::Simple {
                a: splitting_parameter(&l0)?,
            },
        }
    } else {
        Shape::Blowup
    };
    Ok(Analysis { lie, l0, shape })
}

/// `a` with centroid `≅ Q(√a)`, from the discriminant of the minimal
/// polynomial of a non-scalar centroid element.
fn splitting_parameter(l0: &LieAlgebra<Rational>) -> Step<i64> {
    let cent = l0.centroid();
    let c = cent
        .iter()
        .find(|m| !is_scalar_matrix(m))
        .ok_or_else(|| Stop::Invalid("centroid", "simple algebra with trivial centroid".into()))?;
    let mp = c.minimal_polynomial();
    if mp.degree() != 2 {
        return Err(Stop::Invalid(
            "centroid",
            format!("centroid element of degree {}", mp.degree()),
        ));
    }
    let (p0, p1) = (&mp.coeffs()[0], &mp.coeffs()[1]);
    let disc = p1 * p1 - Rational::from_integer(4.into()) * p0;
    if disc.is_zero() {
        return Err(Stop::Invalid("centroid", "centroid is not a field".into()));
    }
    let n: BigInt = disc.numer() * disc.denom();
    let a = squarefree_part(&n).map_err(invalid("centroid"))?;
    let a = a.to_i64().ok_or_else(|| {
        Stop::Invalid("centroid", format!("extension parameter {a} is too large"))
    })?;
    if a == 1 {
        return Err(Stop::Invalid(
            "centroid",
            "centroid splits but the algebra did not decompose".into(),
        ));
    }
    Ok(a)
}

fn kind_of(shape: &Shape) -> ModelKind {
    match shape {
        Shape::Product(..) => ModelKind::P1xP1,
        Shape::Simple { a } => ModelKind::Sphere(*a),
        Shape::Blowup => ModelKind::Blowup,
    }
}

fn max_digits(l: &LieAlgebra<Rational>) -> usize {
    l.realization()
        .map_or(0, |ms| ms.iter().map(Mat::max_digits).max().unwrap_or(0))
}

/// Lie algebra dimension and the geometric type, without parametrizing.
pub fn classify(
    ideal: &QuadricIdeal,
) -> std::result::Result<Classification, (&'static str, String)> {
    match analyse(ideal) {
        Ok(an) => Ok(Classification {
            lie_dim: an.lie.dim(),
            semisimple: !matches!(an.shape, Shape::Blowup),
            kind: kind_of(&an.shape),
        }),
        Err(Stop::Invalid(s, r)) | Err(Stop::Inconclusive(s, r)) => Err((s, r)),
        Err(Stop::NotRational(..)) => unreachable!("classification solves no conics"),
    }
}

pub fn classify_and_parametrize(ideal: &QuadricIdeal, config: &PipelineConfig) -> PipelineOutput {
    let mut stats = Stats::default();
    let result = match run(ideal, config, &mut stats) {
        Ok(r) => r,
        Err(Stop::Invalid(stage, reason)) => PipelineResult::InvalidInput { stage, reason },
        Err(Stop::Inconclusive(stage, reason)) => PipelineResult::Inconclusive { stage, reason },
        Err(Stop::NotRational(kind, path, witness)) => PipelineResult::NotRational {
            kind,
            path,
            witness,
        },
    };
    PipelineOutput { result, stats }
}

fn run(ideal: &QuadricIdeal, config: &PipelineConfig, stats: &mut Stats) -> Step<PipelineResult> {
    let an = analyse(ideal)?;
    stats.lie_dim = Some(an.lie.dim());
    stats.lie_coeff_digits = Some(max_digits(&an.lie));
    let kind = kind_of(&an.shape);
    let model = CanonicalModel::build(kind).map_err(invalid("model"))?;
    let m = match &an.shape {
        Shape::Product(i1, i2) => product_iso(&an.l0, &model, i1, i2)?,
        Shape::Simple { a } => sphere_iso(&an.l0, &model, *a, config.height)?,
        Shape::Blowup => blowup_iso(&an.l0, &model)?,
    };
    let m = primitive_matrix(&m);
    let moved = model.ideal.transport(&m).map_err(invalid("module"))?;
    if moved.space() != ideal.space() {
        return Err(Stop::Inconclusive(
            "final-check",
            "the module isomorphism does not carry the model onto the input".into(),
        ));
    }
    let map = clear_denominators(&model.map.transform(&m));
    if !verify_parametrization(ideal, &map) {
        return Err(Stop::Inconclusive(
            "final-check",
            "parametrization failed substitution".into(),
        ));
    }
    stats.max_coeff_digits = Some(map.max_coeff_digits());
    Ok(PipelineResult::Parametrization {
        kind,
        map,
        transform: m,
    })
}

fn to_parent(t: &Sl2Triple<Rational>, basis: &[Vec<Rational>], n: usize) -> Sl2Triple<Rational> {
    Sl2Triple {
        e: combine(&t.e, basis, n),
        h: combine(&t.h, basis, n),
        f: combine(&t.f, basis, n),
    }
}

/// Realizes the model basis through `nu` (model basis element `k` ↦ `nu[k]`
/// in `L0`) as a module of the model algebra.
fn pulled_module(
    l0: &LieAlgebra<Rational>,
    model: &CanonicalModel,
    nu: &[Vec<Rational>],
) -> Step<ModuleAction<Rational>> {
    let mats = nu
        .iter()
        .map(|x| {
            l0.realize(x)
                .ok_or_else(|| Stop::Invalid("lie", "algebra has no realization".into()))
        })
        .collect::<Step<Vec<_>>>()?;
    ModuleAction::new(model.algebra.clone(), mats).map_err(invalid("identification"))
}

fn product_iso(
    l0: &LieAlgebra<Rational>,
    model: &CanonicalModel,
    i1: &Subspace<Rational>,
    i2: &Subspace<Rational>,
) -> Step<Mat<Rational>> {
    let mut nu = Vec::new();
    for ideal in [i1, i2] {
        let sub = l0.subalgebra(ideal).map_err(invalid("decompose"))?;
        match sub.identify_sl2(0).map_err(invalid("sl2"))? {
            Sl2Identification::Split(t) => {
                let t = to_parent(&t, ideal.basis(), l0.dim());
                nu.extend([t.e, t.h, t.f]);
            }
            Sl2Identification::NotSplit {
                killing,
                certificate,
            } => {
                return Err(Stop::NotRational(
                    ModelKind::P1xP1,
                    "product",
                    ConicWitness::Rational {
                        form: killing,
                        certificate,
                    },
                ));
            }
        }
    }
    let input = pulled_module(l0, model, &nu)?;
    highest_weight_iso(&model.module(), &input, &model.triples())
        .map_err(invalid("module"))?
        .ok_or_else(|| {
            Stop::Invalid(
                "module",
                "no highest-weight isomorphism to the (2,2) module".into(),
            )
        })
}

enum Descent {
    Triple(Vec<Vec<QuadExt>>, Sl2Triple<QuadExt>),
    Anisotropic(TernaryForm<Rational>, Obstruction),
    Unresolved,
}

/// Triple of `L1` through a rational model of its Killing conic.
///
/// For rational `x, y` the value `κ(x1, y1)` has rational part `κ0(x, y)/2`;
/// its `√a`-part is an invariant form of `L0` of Witt index three. On a
/// three-dimensional rational subspace isotropic for that form the Killing
/// form of `L1` is rational, so the conic is defined over `Q` and its
/// points over `Q(√a)` reduce to a rational quaternary form. A rational `x`
/// isotropic for both forms gives a point `x1` directly, and so does a
/// subspace whose extension meets `L2`.
fn descended_triple(
    le: &LieAlgebra<QuadExt>,
    proj: &[Vec<QuadExt>],
    a: i64,
) -> crate::error::Result<Descent> {
    let n = proj.len();
    let kill = le.killing_form();
    let pair = |u: &[QuadExt], v: &[QuadExt]| {
        let kv = kill.mul_vec(v);
        u.iter()
            .zip(&kv)
            .fold(QuadExt::zero(), |acc, (x, y)| acc + x.clone() * y)
    };
    let combine_proj = |u: &[Rational]| -> Vec<QuadExt> {
        (0..n)
            .map(|j| {
                (0..n).fold(QuadExt::zero(), |acc, k| {
                    acc + QuadExt::embed(u[k].clone(), a) * &proj[k][j]
                })
            })
            .collect()
    };
    let direct = |x1: Vec<QuadExt>| -> crate::error::Result<Descent> {
        let mut basis = vec![x1];
        for p in proj {
            let mut trial = basis.clone();
            trial.push(p.clone());
            if Subspace::from_spanning(n, trial.clone()).dim() == trial.len() {
                basis = trial;
            }
        }
        let l1 = le.subalgebra_with_basis(basis.clone())?;
        let e = vec![
            QuadExt::embed(Rational::one(), a),
            QuadExt::embed(Rational::zero(), a),
            QuadExt::embed(Rational::zero(), a),
        ];
        Ok(Descent::Triple(basis, l1.sl2_triple_from_isotropic(e)?))
    };
    if let Some(p) = proj.iter().find(|p| pair(p, p).is_zero()) {
        return direct(p.clone());
    }
    let omega = Mat::from_fn(n, n, |i, j| pair(&proj[i], &proj[j]).y);
    let us = match totally_isotropic_subspace(&omega, 3)? {
        Isotropy::Vector(us) => us,
        _ => return Ok(Descent::Unresolved),
    };
    let basis: Vec<Vec<QuadExt>> = us.iter().map(|u| combine_proj(u)).collect();
    if let Some(b) = basis.iter().find(|b| pair(b, b).is_zero()) {
        return direct(b.clone());
    }
    let rel = Mat::from_cols(&basis).kernel();
    if rel.dim() > 0 {
        // Σ λ_i u_i lies in L2, so its conjugate Σ λ̄_i u_i lies in L1 and is
        // isotropic there
        let lam = &rel.basis()[0];
        let x1: Vec<QuadExt> = (0..n)
            .map(|j| (0..3).fold(QuadExt::zero(), |acc, i| acc + lam[i].conj() * &basis[i][j]))
            .collect();
        if x1.iter().all(Zero::is_zero) || !pair(&x1, &x1).is_zero() {
            return Ok(Descent::Unresolved);
        }
        return direct(x1);
    }
    let l1 = le.subalgebra_with_basis(basis.clone())?;
    let k1 = l1.killing_form();
    if k1.entries().iter().any(|z| !z.y.is_zero()) {
        return Ok(Descent::Unresolved);
    }
    let g = k1.map(|z| z.x.clone());
    match conic_point_over_extension(&g, a)? {
        Isotropy::Vector(u) => Ok(Descent::Triple(basis, l1.sl2_triple_from_isotropic(u)?)),
        Isotropy::Anisotropic(Some(place)) => Ok(Descent::Anisotropic(TernaryForm::new(g)?, place)),
        _ => Ok(Descent::Unresolved),
    }
}

fn sphere_iso(
    l0: &LieAlgebra<Rational>,
    model: &CanonicalModel,
    a: i64,
    height: u32,
) -> Step<Mat<Rational>> {
    let n = l0.dim();
    let le = extend_to_quadratic(l0, a);
    let (i1, i2) = le
        .decompose_two_ideals()
        .map_err(invalid("sphere"))?
        .ok_or_else(|| {
            Stop::Invalid(
                "sphere",
                format!("algebra does not split over Q(sqrt({a}))"),
            )
        })?;
    let both: Vec<Vec<QuadExt>> = i1.basis().iter().chain(i2.basis()).cloned().collect();
    let split = Coordinates::new(both)
        .ok_or_else(|| Stop::Invalid("sphere", "ideals are not complementary".into()))?;
    let embedded = |k: usize| -> Vec<QuadExt> {
        l0.basis_vector(k)
            .iter()
            .map(|x| QuadExt::embed(x.clone(), a))
            .collect()
    };
    // L1-components x1 of the rational basis; x ↦ x1 is Q-linear and injective
    let proj: Vec<Vec<QuadExt>> = (0..n)
        .map(|k| {
            let c = split.coords(&embedded(k)).expect("ideals span");
            (0..n)
                .map(|j| {
                    (0..i1.dim()).fold(QuadExt::zero(), |acc, i| {
                        acc + c[i].clone() * &i1.basis()[i][j]
                    })
                })
                .collect()
        })
        .collect();
    let (short, t) = match descended_triple(&le, &proj, a).map_err(invalid("sphere"))? {
        Descent::Triple(b, t) => (b, t),
        Descent::Anisotropic(form, place) => {
            return Err(Stop::NotRational(
                ModelKind::Sphere(a),
                "sphere",
                ConicWitness::Descended { a, form, place },
            ))
        }
        Descent::Unresolved => {
            // search directly on the Killing conic of a short basis of L1
            let mut short: Vec<Vec<QuadExt>> = Vec::new();
            for x1 in &proj {
                let mut trial = short.clone();
                trial.push(x1.clone());
                if Subspace::from_spanning(n, trial.clone()).dim() == trial.len() {
                    short = trial;
                }
            }
            let l1 = le
                .subalgebra_with_basis(short.clone())
                .map_err(invalid("sphere"))?;
            match l1.identify_sl2(height).map_err(invalid("sl2"))? {
                Sl2Identification::Split(t) => (short, t),
                Sl2Identification::NotSplit {
                    killing,
                    certificate,
                } => {
                    return match certificate.verdict {
                        Verdict::Unsolvable => Err(Stop::NotRational(
                            ModelKind::Sphere(a),
                            "sphere",
                            ConicWitness::Quadratic { a, form: killing, certificate },
                        )),
                        _ => Err(Stop::Inconclusive(
                            "conic",
                            format!("no point on the Killing conic over Q(sqrt({a})) up to height {height}"),
                        )),
                    };
                }
            }
        }
    };
    // b = x1 + conj(x1) with x1 ∈ L1; coordinates of x1 in (e, h, f) give
    // those of b in the basis (X1 + X2, α(X1 − X2)) of the model
    let both: Vec<Vec<QuadExt>> = short
        .into_iter()
        .chain(i2.basis().iter().cloned())
        .collect();
    let split = Coordinates::new(both)
        .ok_or_else(|| Stop::Invalid("sphere", "basis of L1 is not complementary".into()))?;
    let chev = Coordinates::new(vec![t.e, t.h, t.f]).expect("a Chevalley basis is independent");
    let mut action = Vec::with_capacity(n);
    for k in 0..n {
        let c = split.coords(&embedded(k)).expect("ideals span");
        let x1 = chev.coords(&c[..3]).expect("triple spans L1");
        let phi: Vec<Rational> = x1.iter().flat_map(|z| [z.x.clone(), z.y.clone()]).collect();
        action.push(Mat::combination(&phi, model.realization()));
    }
    let ours = ModuleAction::new(l0.clone(), action).map_err(invalid("descent"))?;
    let theirs = ModuleAction::new(l0.clone(), l0.realization().expect("realized").to_vec())
        .map_err(invalid("lie"))?;
    module_iso_linear(&ours, &theirs)
        .map_err(invalid("module"))?
        .ok_or_else(|| Stop::Invalid("module", "no module isomorphism to the sphere model".into()))
}

/// `ad x` restricted to the span of `basis`, in that basis.
fn restricted_ad(
    l: &LieAlgebra<Rational>,
    x: &[Rational],
    coords: &Coordinates<Rational>,
) -> Option<Mat<Rational>> {
    let cols = coords
        .basis()
        .iter()
        .map(|v| coords.coords(&l.bracket(x, v)))
        .collect::<Option<Vec<_>>>()?;
    Some(Mat::from_cols(&cols))
}

fn blowup_iso(l0: &LieAlgebra<Rational>, model: &CanonicalModel) -> Step<Mat<Rational>> {
    let n = l0.dim();
    let data = l0.levi_data().map_err(invalid("levi"))?;
    if data.nilradical.dim() != 2 || data.radical.dim() != 3 || data.levi.dim() != 3 {
        return Err(Stop::Invalid(
            "levi",
            format!(
                "nilradical, radical and Levi factor of dimensions {}, {}, {}; expected 2, 3, 3",
                data.nilradical.dim(),
                data.radical.dim(),
                data.levi.dim()
            ),
        ));
    }
    let nil = Coordinates::new(data.nilradical.basis().to_vec()).expect("echelon basis");
    let s = l0.normalizer(&data.levi);
    if s.dim() != 4 {
        return Err(Stop::Invalid(
            "levi",
            format!("normalizer of the Levi factor has dimension {}", s.dim()),
        ));
    }
    let tau = |x: &[Rational]| {
        restricted_ad(l0, x, &nil)
            .ok_or_else(|| Stop::Invalid("levi", "nilradical is not an ideal".into()))
    };
    let s_images = s
        .basis()
        .iter()
        .map(|x| tau(x).map(|m| m.to_vec()))
        .collect::<Step<Vec<_>>>()?;
    let s_coords = Coordinates::new(s_images).ok_or_else(|| {
        Stop::Invalid(
            "levi",
            "normalizer does not act faithfully on the nilradical".into(),
        )
    })?;
    // the model's action on its nilradical (b1, b2)
    let ynil = Coordinates::new(model.nilradical()).expect("unit vectors");
    let ya = &model.algebra;
    let mut nu = vec![Vec::new(); n];
    for k in [0, 3, 4, 5] {
        let target =
            restricted_ad(ya, &ya.basis_vector(k), &ynil).expect("model nilradical is an ideal");
        let c = s_coords.coords(&target.to_vec()).ok_or_else(|| {
            Stop::Invalid("levi", "action on the nilradical is not all of gl2".into())
        })?;
        nu[k] = combine(&c, s.basis(), n);
    }
    nu[1] = data.nilradical.basis()[0].clone();
    nu[2] = data.nilradical.basis()[1].clone();
    let input = pulled_module(l0, model, &nu)?;
    blowup_module_iso(
        &model.module(),
        &input,
        &model.levi_triple(),
        &model.nilradical(),
    )
    .map_err(invalid("module"))?
    .ok_or_else(|| Stop::Invalid("module", "no isomorphism to the blowup module".into()))
}

#[cfg(test)]
mod tests;
