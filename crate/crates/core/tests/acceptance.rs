//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use dp8::conic::{verify_certificate_q, Verdict, DEFAULT_HEIGHT};
use dp8::dp8::pipeline::{classify, PipelineConfig};
use dp8::dp8::{
    classify_and_parametrize, coefficients_to_matrix, fixtures, generate_instance,
    lie_algebra_of_variety, verify_parametrization, CanonicalModel, ModelKind, PipelineResult,
    QuadricIdeal,
};
use dp8::field::{primitive_integer_vector, rat_int, Rational};
use dp8::lie::{LieAlgebra, Sl2Identification};
use dp8::linalg::{Mat, Subspace};
use dp8::modrep::{module_iso_linear, ModuleAction};
use num_bigint::BigInt;
use num_traits::{One, Zero};

const SPHERE_PARAMETERS: [i64; 8] = [-1, 3, 2, 5, -3, 6, -7, 7];
const BOUNDS: [u32; 3] = [1, 5, 10];

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:.2?}, limit {limit:?}")
    })
}

fn config() -> PipelineConfig {
    PipelineConfig {
        height: DEFAULT_HEIGHT,
    }
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat_int(x)).collect()
}

fn span(mats: &[Mat<Rational>]) -> Subspace<Rational> {
    let n = mats[0].rows();
    Subspace::from_spanning(n * n, mats.iter().map(Mat::to_vec).collect())
}

/// Independent check of a parametrization result: exact substitution and
/// the expected kind.
fn check_parametrized(
    ideal: &QuadricIdeal,
    result: &PipelineResult,
    expected: Option<ModelKind>,
) -> Result<(), String> {
    match result {
        PipelineResult::Parametrization { kind, map, .. } => {
            if let Some(k) = expected {
                ensure(*kind == k, || format!("classified as {kind}, expected {k}"))?;
            }
            ensure(verify_parametrization(ideal, map), || {
                format!("{kind}: map fails substitution")
            })
        }
        other => Err(format!("result `{}`", other.tag())),
    }
}

fn parabola_is_gl2() -> Outcome {
    let start = Instant::now();
    let l = lie_algebra_of_variety(&fixtures::parabola()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(l.dim() == 4, || format!("dimension {}", l.dim()))?;
    // Sym² of E11, E12, E21, E22 on (s², st, t²).
    let sym2 = |a: i64, b: i64, c: i64, d: i64| {
        Mat::from_rows(vec![
            ints(&[2 * a, 2 * b, 0]),
            ints(&[c, a + d, b]),
            ints(&[0, 2 * c, 2 * d]),
        ])
        .unwrap()
    };
    let image = vec![
        sym2(1, 0, 0, 0),
        sym2(0, 1, 0, 0),
        sym2(0, 0, 1, 0),
        sym2(0, 0, 0, 1),
    ];
    ensure(span(l.realization().unwrap()) == span(&image), || {
        "algebra differs from Sym²(gl2)".into()
    })?;
    let e = |i: usize, j: usize| {
        Mat::from_fn(2, 2, |r, c| {
            if (r, c) == (i, j) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    };
    let gl2 = LieAlgebra::from_matrices(vec![e(0, 0), e(0, 1), e(1, 0), e(1, 1)])
        .map_err(|x| x.to_string())?;
    let rho = LieAlgebra::from_matrices(image).map_err(|x| x.to_string())?;
    ensure(
        gl2.structure_constants() == rho.structure_constants(),
        || "structure constants differ".into(),
    )?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "dim 4, structure constants equal gl2 ({elapsed:.2?})"
    ))
}

fn canonical_round_trips() -> Outcome {
    let mut notes = Vec::new();
    for kind in [
        ModelKind::P1xP1,
        ModelKind::Blowup,
        ModelKind::Sphere(-1),
        ModelKind::Sphere(3),
        ModelKind::Sphere(2),
    ] {
        let model = CanonicalModel::build(kind).map_err(|e| e.to_string())?;
        ensure(model.ideal.dim() == 20, || {
            format!("{kind}: {} quadrics", model.ideal.dim())
        })?;
        let start = Instant::now();
        let out = classify_and_parametrize(&model.ideal, &config());
        let elapsed = start.elapsed();
        check_parametrized(&model.ideal, &out.result, Some(kind))
            .map_err(|e| format!("{kind}: {e}"))?;
        within(elapsed, Duration::from_secs(30)).map_err(|e| format!("{kind}: {e}"))?;
        notes.push(format!("{kind} {elapsed:.2?}"));
    }
    Ok(format!("20 quadrics each; {}", notes.join(", ")))
}

fn perturbation_robustness() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for family in 0..3 {
        for i in 0..50u64 {
            let kind = match family {
                0 => ModelKind::P1xP1,
                1 => ModelKind::Blowup,
                _ => ModelKind::Sphere(SPHERE_PARAMETERS[i as usize % SPHERE_PARAMETERS.len()]),
            };
            let bound = BOUNDS[i as usize % BOUNDS.len()];
            let seed = 1000 + i;
            let (ideal, _) = generate_instance(kind, bound, seed).map_err(|e| e.to_string())?;
            let out = classify_and_parametrize(&ideal, &config());
            check_parametrized(&ideal, &out.result, Some(kind))
                .map_err(|e| format!("{kind} bound {bound} seed {seed}: {e}"))?;
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(600))?;
    Ok(format!(
        "{count}/{count} classified and verified ({elapsed:.2?})"
    ))
}

fn split_difference_spheres() -> Outcome {
    let mut notes = Vec::new();
    for d in [-1, 3, 8] {
        let ideal = fixtures::split_difference_sphere(d);
        let start = Instant::now();
        let out = classify_and_parametrize(&ideal, &config());
        let elapsed = start.elapsed();
        check_parametrized(&ideal, &out.result, None).map_err(|e| format!("d = {d}: {e}"))?;
        within(elapsed, Duration::from_secs(300)).map_err(|e| format!("d = {d}: {e}"))?;
        notes.push(format!("d={d} {elapsed:.2?}"));
    }
    Ok(notes.join(", "))
}

fn so3() -> LieAlgebra<Rational> {
    let mut sc = vec![Rational::zero(); 27];
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        sc[(i * 3 + j) * 3 + k] = Rational::one();
        sc[(j * 3 + i) * 3 + k] = -Rational::one();
    }
    LieAlgebra::from_structure_constants(3, sc).unwrap()
}

fn negative_certificates() -> Outcome {
    let start = Instant::now();
    let so3_place = match so3()
        .identify_sl2(DEFAULT_HEIGHT)
        .map_err(|e| e.to_string())?
    {
        Sl2Identification::Split(_) => return Err("so3 split over Q".into()),
        Sl2Identification::NotSplit {
            killing,
            certificate,
        } => {
            ensure(certificate.verdict == Verdict::Unsolvable, || {
                "so3 conic not unsolvable".into()
            })?;
            ensure(verify_certificate_q(&killing, &certificate), || {
                "so3 certificate fails re-verification".into()
            })?;
            certificate.to_json()["obstruction"].to_string()
        }
    };
    let out = classify_and_parametrize(&fixtures::conic_square([1, 1, 1]), &config());
    let cxc = match &out.result {
        PipelineResult::NotRational { witness, path, .. } => {
            ensure(witness.verify(), || {
                "C×C witness fails re-verification".into()
            })?;
            format!("{path} {}", witness.to_json()["conic"]["obstruction"])
        }
        other => return Err(format!("C×C gave `{}`", other.tag())),
    };
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "so3 obstruction {so3_place}; C×C NotRational via {cxc} ({elapsed:.2?})"
    ))
}

fn killing_invariant(l: &LieAlgebra<Rational>) -> bool {
    let k = l.killing_form();
    let form = |u: &[Rational], v: &[Rational]| -> Rational {
        let kv = k.mul_vec(v);
        u.iter().zip(&kv).map(|(a, b)| a * b).sum()
    };
    let n = l.dim();
    let basis: Vec<Vec<Rational>> = (0..n).map(|i| l.basis_vector(i)).collect();
    basis.iter().all(|x| {
        basis.iter().all(|y| {
            let xy = l.bracket(x, y);
            basis
                .iter()
                .all(|z| (form(&xy, z) + form(y, &l.bracket(x, z))).is_zero())
        })
    })
}

fn integer_matrix(m: &Mat<Rational>) -> Vec<Vec<BigInt>> {
    let flat = primitive_integer_vector(&m.to_vec());
    flat.chunks(m.cols()).map(<[BigInt]>::to_vec).collect()
}

/// `xᵀA + Ax ∈ I` for every realized basis element `x` and generator `A`,
/// in integer arithmetic against the annihilator of `I`.
fn closed(ideal: &QuadricIdeal, l: &LieAlgebra<Rational>) -> bool {
    let size = ideal.n() + 1;
    let w: Vec<Vec<BigInt>> = ideal
        .space()
        .annihilator()
        .rows_vec()
        .iter()
        .map(|r| primitive_integer_vector(r))
        .collect();
    let doubled: Vec<Vec<Vec<BigInt>>> = ideal
        .generators()
        .iter()
        .map(|c| integer_matrix(&coefficients_to_matrix(size, c).scale(&rat_int(2))))
        .collect();
    l.realization().unwrap().iter().all(|x| {
        let x = integer_matrix(x);
        doubled.iter().all(|a| {
            let mut z = vec![vec![BigInt::zero(); size]; size];
            for i in 0..size {
                for j in 0..size {
                    for k in 0..size {
                        z[i][j] += &x[k][i] * &a[k][j] + &a[i][k] * &x[k][j];
                    }
                }
            }
            let coeffs: Vec<BigInt> = (0..size)
                .flat_map(|i| (i..size).map(move |j| (i, j)))
                .map(|(i, j)| {
                    if i == j {
                        z[i][i].clone()
                    } else {
                        &z[i][j] + &z[j][i]
                    }
                })
                .collect();
            w.iter().all(|r| {
                r.iter()
                    .zip(&coeffs)
                    .map(|(p, q)| p * q)
                    .sum::<BigInt>()
                    .is_zero()
            })
        })
    })
}

/// Every invariant on one random instance; the canonical model is carried
/// to the instance by the known transform `g` (the instance is `g⁻¹` of the
/// model), which gives independent expectations.
fn invariants_on(kind: ModelKind, bound: u32, seed: u64) -> Result<(), String> {
    let model = CanonicalModel::build(kind).map_err(|e| e.to_string())?;
    let (ideal, g) = generate_instance(kind, bound, seed).map_err(|e| e.to_string())?;
    let gi = g.inverse().ok_or("singular transform")?;
    let l = lie_algebra_of_variety(&ideal).map_err(|e| e.to_string())?;
    ensure(l.satisfies_jacobi(), || "Jacobi identity".into())?;
    ensure(killing_invariant(&l), || "Killing invariance".into())?;

    ensure(closed(&ideal, &l), || "closure xᵀA + Ax ∈ I".into())?;

    let mut conj: Vec<Mat<Rational>> = model
        .realization()
        .iter()
        .map(|x| gi.mul(x).mul(&g))
        .collect();
    conj.push(Mat::identity(9));
    ensure(span(l.realization().unwrap()) == span(&conj), || {
        "conjugation-equivariance".into()
    })?;

    let source = model.module();
    let moved = ModuleAction::new(
        model.algebra.clone(),
        model
            .realization()
            .iter()
            .map(|x| gi.mul(x).mul(&g))
            .collect(),
    )
    .map_err(|e| e.to_string())?;
    let m = module_iso_linear(&source, &moved)
        .map_err(|e| e.to_string())?
        .ok_or("no intertwiner")?;
    ensure(m.is_invertible() && source.intertwines(&moved, &m), || {
        "intertwiner exactness".into()
    })?;
    // An intertwiner of the module moves the model's quadrics onto the instance.
    ensure(
        model
            .ideal
            .transport(&m)
            .map_err(|e| e.to_string())?
            .space()
            == ideal.space(),
        || "intertwiner transport".into(),
    )?;

    let map = model.map.transform(&gi);
    ensure(verify_parametrization(&ideal, &map), || {
        "verification gate accepts the true map".into()
    })?;
    let mut bad = map.clone();
    bad.components[(seed % 9) as usize] =
        bad.components[(seed % 9) as usize].add(&map.components[((seed + 1) % 9) as usize]);
    ensure(!verify_parametrization(&ideal, &bad), || {
        "verification gate accepts a perturbed map".into()
    })?;
    Ok(())
}

fn invariant_suites() -> Outcome {
    let start = Instant::now();
    let cases = 200u64;
    for i in 0..cases {
        let kind = match i % 3 {
            0 => ModelKind::P1xP1,
            1 => ModelKind::Blowup,
            _ => ModelKind::Sphere(SPHERE_PARAMETERS[(i / 3) as usize % SPHERE_PARAMETERS.len()]),
        };
        let bound = BOUNDS[(i / 3) as usize % BOUNDS.len()];
        let seed = 5000 + i;
        invariants_on(kind, bound, seed)
            .map_err(|e| format!("{kind} bound {bound} seed {seed}: {e}"))?;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(300))?;
    Ok(format!(
        "{cases} cases, six invariant families ({elapsed:.2?})"
    ))
}

fn determinism() -> Outcome {
    let mut bytes = 0;
    for (kind, seed) in [
        (ModelKind::P1xP1, 7),
        (ModelKind::Blowup, 8),
        (ModelKind::Sphere(3), 9),
    ] {
        let (a, ga) = generate_instance(kind, 10, seed).map_err(|e| e.to_string())?;
        let (b, gb) = generate_instance(kind, 10, seed).map_err(|e| e.to_string())?;
        ensure(a.to_json() == b.to_json() && ga == gb, || {
            format!("{kind}: generation differs")
        })?;
        let first =
            serde_json::to_string_pretty(&classify_and_parametrize(&a, &config()).to_json())
                .unwrap();
        let second =
            serde_json::to_string_pretty(&classify_and_parametrize(&b, &config()).to_json())
                .unwrap();
        ensure(first == second, || format!("{kind}: outputs differ"))?;
        let info = |i: &QuadricIdeal| {
            classify(i)
                .map(|c| format!("{c:?}"))
                .map_err(|(s, r)| format!("{s}: {r}"))
        };
        ensure(info(&a)? == info(&b)?, || {
            format!("{kind}: classification differs")
        })?;
        bytes += first.len();
    }
    Ok(format!(
        "three instances, {bytes} output bytes identical across runs"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 parabola Lie algebra is gl2", parabola_is_gl2),
        ("2 canonical round trips", canonical_round_trips),
        ("3 perturbation robustness", perturbation_robustness),
        (
            "4 sphere discriminants d = -1, 3, 8",
            split_difference_spheres,
        ),
        ("5 negative certificates", negative_certificates),
        ("6 invariant suites", invariant_suites),
        ("7 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
