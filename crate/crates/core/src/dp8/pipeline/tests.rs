use super::*;

use crate::dp8::{fixtures, generate_instance};

fn run_default(ideal: &QuadricIdeal) -> PipelineOutput {
    classify_and_parametrize(ideal, &PipelineConfig::default())
}

/// The parametrization checks that the pipeline does not do itself: the
/// transform carries the canonical ideal onto the input and conjugates the
/// model algebra into the input algebra.
fn check_parametrization(ideal: &QuadricIdeal, out: &PipelineOutput) -> ModelKind {
    let PipelineResult::Parametrization {
        kind,
        map,
        transform,
    } = &out.result
    else {
        panic!("expected a parametrization, got {}", out.to_json());
    };
    assert!(verify_parametrization(ideal, map));
    let model = CanonicalModel::build(*kind).unwrap();
    assert_eq!(
        model.ideal.transport(transform).unwrap().space(),
        ideal.space()
    );
    let lie = lie_algebra_of_variety(ideal).unwrap();
    let span = Subspace::from_spanning(
        81,
        lie.realization().unwrap().iter().map(Mat::to_vec).collect(),
    );
    let inv = transform.inverse().unwrap();
    for x in model.realization() {
        assert!(span.contains(&transform.mul(x).mul(&inv).to_vec()));
    }
    *kind
}

#[test]
fn canonical_models_are_classified() {
    for kind in [
        ModelKind::P1xP1,
        ModelKind::Blowup,
        ModelKind::Sphere(-1),
        ModelKind::Sphere(3),
        ModelKind::Sphere(2),
    ] {
        let model = CanonicalModel::build(kind).unwrap();
        let c = classify(&model.ideal).unwrap();
        assert_eq!(c.kind, kind);
        assert_eq!(c.lie_dim, 7);
        assert_eq!(c.semisimple, kind != ModelKind::Blowup);
    }
}

#[test]
fn canonical_models_parametrize() {
    for kind in [
        ModelKind::P1xP1,
        ModelKind::Blowup,
        ModelKind::Sphere(-1),
        ModelKind::Sphere(3),
        ModelKind::Sphere(2),
    ] {
        let model = CanonicalModel::build(kind).unwrap();
        assert_eq!(
            check_parametrization(&model.ideal, &run_default(&model.ideal)),
            kind
        );
    }
}

#[test]
fn perturbed_instances_parametrize() {
    for (kind, bound, seed) in [
        (ModelKind::P1xP1, 10, 1),
        (ModelKind::Blowup, 5, 2),
        (ModelKind::Sphere(-7), 10, 3),
        (ModelKind::Sphere(6), 1, 4),
    ] {
        let (ideal, _) = generate_instance(kind, bound, seed).unwrap();
        let out = run_default(&ideal);
        assert_eq!(check_parametrization(&ideal, &out), kind);
        let stats = out.stats;
        assert_eq!(stats.lie_dim, Some(7));
        assert!(stats.max_coeff_digits.is_some());
    }
}

#[test]
fn difference_of_squares_spheres_parametrize() {
    for (d, a) in [(-1, -1), (3, 3), (8, 2)] {
        let ideal = fixtures::split_difference_sphere(d);
        assert_eq!(ideal.dim(), 20);
        let kind = check_parametrization(&ideal, &run_default(&ideal));
        assert_eq!(kind, ModelKind::Sphere(a), "d = {d}");
    }
}

#[test]
fn split_quadric_surface_is_a_product() {
    let ideal = fixtures::quadric_surface([1, -1, 1, -1]);
    assert_eq!(
        check_parametrization(&ideal, &run_default(&ideal)),
        ModelKind::P1xP1
    );
}

#[test]
fn conic_squared_without_points_is_not_rational() {
    let out = run_default(&fixtures::conic_square([1, 1, 1]));
    let PipelineResult::NotRational {
        kind,
        path,
        witness,
    } = &out.result
    else {
        panic!("expected NotRational, got {}", out.to_json());
    };
    assert_eq!(*kind, ModelKind::P1xP1);
    assert_eq!(*path, "product");
    assert!(witness.verify());
    assert!(matches!(witness, ConicWitness::Rational { .. }));
    assert_eq!(
        out.to_json()["certificate"]["conic"]["obstruction"]["place"],
        "real"
    );
}

#[test]
fn conic_squared_with_points_parametrizes() {
    let ideal = fixtures::conic_square([1, 1, -2]);
    assert_eq!(
        check_parametrization(&ideal, &run_default(&ideal)),
        ModelKind::P1xP1
    );
}

#[test]
fn sphere_without_points_has_a_local_obstruction() {
    // x² + y² + z² = 7w² has no rational point: 7 is not a sum of three
    // rational squares, which fails at 2.
    let out = run_default(&fixtures::quadric_surface([1, 1, 1, -7]));
    let PipelineResult::NotRational { kind, witness, .. } = &out.result else {
        panic!("expected NotRational, got {}", out.to_json());
    };
    assert!(matches!(kind, ModelKind::Sphere(_)));
    let ConicWitness::Descended { a, form, place } = witness else {
        panic!("expected a descended witness");
    };
    assert!(witness.verify());
    assert_eq!(*place, Obstruction::Prime(BigInt::from(2)));
    let forged = ConicWitness::Descended {
        a: *a,
        form: form.clone(),
        place: Obstruction::Real,
    };
    assert!(!forged.verify());
    let forged = ConicWitness::Descended {
        a: *a,
        form: form.clone(),
        place: Obstruction::Prime(BigInt::from(3)),
    };
    assert!(!forged.verify());
}

#[test]
fn definite_quadric_surface_is_not_rational() {
    let out = run_default(&fixtures::quadric_surface([1, 1, 1, 1]));
    let PipelineResult::NotRational { witness, .. } = &out.result else {
        panic!("expected NotRational, got {}", out.to_json());
    };
    assert!(witness.verify());
}

#[test]
fn degenerate_inputs_are_invalid() {
    let one = QuadricIdeal::from_json(&json!({ "n": 8, "polys": ["x0*x1 - x2^2"] })).unwrap();
    let out = run_default(&one);
    assert_eq!(out.result.tag(), "invalid");
    assert!(classify(&one).is_err());

    let plane = QuadricIdeal::from_json(&json!({ "n": 2, "polys": ["x0*x2 - x1^2"] })).unwrap();
    assert_eq!(run_default(&plane).result.tag(), "invalid");

    // 20 quadrics that cut out no surface: 17 monomials through x0 or x1 and
    // three squares.
    let pairs = super::super::quadric_pairs(9);
    let gens: Vec<Vec<Rational>> = pairs
        .iter()
        .enumerate()
        .filter(|(_, &(i, _))| i <= 1)
        .map(|(k, _)| {
            (0..pairs.len())
                .map(|r| {
                    if r == k {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .take(17)
        .chain((0..3).map(|t| {
            let k = pairs.iter().position(|&p| p == (2 + t, 2 + t)).unwrap();
            (0..pairs.len())
                .map(|r| {
                    if r == k {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        }))
        .collect();
    let odd = QuadricIdeal::from_coefficients(8, gens).unwrap();
    assert_eq!(odd.dim(), 20);
    assert_eq!(run_default(&odd).result.tag(), "invalid");
}

#[test]
fn outputs_serialize_deterministically() {
    let (ideal, _) = generate_instance(ModelKind::Sphere(2), 5, 6).unwrap();
    let a = serde_json::to_string(&run_default(&ideal).to_json()).unwrap();
    let b = serde_json::to_string(&run_default(&ideal).to_json()).unwrap();
    assert_eq!(a, b);
}
