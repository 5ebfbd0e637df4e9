//! Random instances: a canonical ideal after an integral change of
//! coordinates.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Rational;
use crate::linalg::Mat;

use super::canonical::{CanonicalModel, ModelKind};
use super::QuadricIdeal;

const MAX_RETRIES: usize = 1000;

/// Nonzero entries per row of the sparse matrices used for spheres.
pub const SPHERE_ROW_NONZEROS: usize = 3;

/// A random invertible integer matrix with entries in `[−bound, bound]`;
/// `sparse` limits each row to `SPHERE_ROW_NONZEROS` nonzero entries.
/// Bound 0 gives the identity.
pub fn random_transform(
    n: usize,
    bound: u32,
    sparse: bool,
    rng: &mut ChaCha8Rng,
) -> Result<Mat<Rational>> {
    if bound == 0 {
        return Ok(Mat::identity(n));
    }
    let b = bound as i64;
    for _ in 0..MAX_RETRIES {
        let mut g = Mat::zeros(n, n);
        for i in 0..n {
            if sparse {
                for j in sample(rng, n, SPHERE_ROW_NONZEROS.min(n)) {
                    g.set(i, j, Rational::from_integer(rng.gen_range(-b..=b).into()));
                }
            } else {
                for j in 0..n {
                    g.set(i, j, Rational::from_integer(rng.gen_range(-b..=b).into()));
                }
            }
        }
        if g.is_invertible() {
            return Ok(g);
        }
    }
    Err(Error::Degenerate(format!(
        "no invertible matrix after {MAX_RETRIES} samples"
    )))
}

/// The canonical ideal of `kind` after the substitution `x ↦ g·x`, together
/// with `g`. The surface is `g⁻¹` applied to the canonical one.
pub fn generate_instance(
    kind: ModelKind,
    bound: u32,
    seed: u64,
) -> Result<(QuadricIdeal, Mat<Rational>)> {
    let model = CanonicalModel::build(kind)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_transform(9, bound, matches!(kind, ModelKind::Sphere(_)), &mut rng)?;
    Ok((model.ideal.pullback(&g), g))
}
