//! Operator-norm bounds for the sphere sums a_n and the finite-n spectral
//! radius comparison.
//!
//! The sphere is inversion-closed, so a_n is self-adjoint and its norm is
//! bounded below by the growth of any compressed power iteration: cutting
//! the orbit off at Ball_R is a compression, which never increases norms.
//! The triangle inequality gives |S_n| as the upper bound.

use crate::ball::GroupBall;
use crate::conv::SparseGroupFunction;
use crate::error::Error;
use crate::group::{ExecMode, GroupElement};
use serde::Serialize;
use std::collections::HashMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Serialize)]
pub struct OperatorGrowthEstimate {
    pub n: u32,
    pub sphere_size: usize,
    pub lower: f64,
    pub upper: f64,
    pub truncation_radius: u32,
    pub iterations: u32,
}

/// Apply a_n (indicator of the n-sphere) by convolution, then restrict the
/// result to Ball_R.
fn apply_sphere_compressed<E: GroupElement>(
    sphere: &[E],
    v: &SparseGroupFunction<E>,
    ball: &GroupBall<E>,
    radius: u32,
    mode: ExecMode,
) -> SparseGroupFunction<E> {
    let items: Vec<(&E, &f64)> = v.support.iter().collect();
    let work = |chunk: &[(&E, &f64)]| {
        let mut local: HashMap<E, f64> = HashMap::new();
        for (y, vv) in chunk {
            for s in sphere {
                let key = s.op(y);
                if ball.distance(&key).is_some_and(|d| d <= radius) {
                    *local.entry(key).or_insert(0.0) += **vv;
                }
            }
        }
        local
    };
    let support = match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            let chunk = items.len().div_ceil(rayon::current_num_threads().max(1)).max(1);
            let maps: Vec<_> = items.par_chunks(chunk).map(work).collect();
            let mut out = HashMap::new();
            for m in maps {
                for (k, v) in m {
                    *out.entry(k).or_insert(0.0) += v;
                }
            }
            out
        }
        _ => work(&items),
    };
    SparseGroupFunction { support }
}

pub fn operator_norm_bounds<E: GroupElement>(
    ball: &GroupBall<E>,
    n: u32,
    truncation_radius: u32,
    iterations: u32,
    seed: u64,
    mode: ExecMode,
) -> Result<OperatorGrowthEstimate, Error> {
    if truncation_radius < n || ball.radius < truncation_radius {
        return Err(Error::NotApplicable(format!(
            "need n <= R <= ball radius, got n={n}, R={truncation_radius}, ball={}",
            ball.radius
        )));
    }
    let sphere = ball.sphere(n);
    let sphere_size = sphere.len();
    if n == 0 {
        return Ok(OperatorGrowthEstimate {
            n,
            sphere_size,
            lower: 1.0,
            upper: 1.0,
            truncation_radius,
            iterations: 0,
        });
    }
    let upper = sphere_size as f64;
    let mut lower: f64 = 0.0;

    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let ball_elems: Vec<E> = ball
        .dist
        .iter()
        .filter(|(_, &d)| d <= truncation_radius)
        .map(|(e, _)| e.clone())
        .collect();

    // seed vectors: delta_e guarantees the sqrt(|S_n|) floor, plus a few
    // random sign vectors
    let mut seeds: Vec<SparseGroupFunction<E>> =
        vec![SparseGroupFunction::delta(E::identity())];
    for _ in 0..4 {
        let mut f = SparseGroupFunction::new();
        for e in &ball_elems {
            f.add_at(e.clone(), if rng.gen_bool(0.5) { 1.0 } else { -1.0 });
        }
        seeds.push(f);
    }

    for mut v in seeds {
        let mut norm = v.l2_norm();
        if norm == 0.0 {
            continue;
        }
        v.scale(1.0 / norm);
        for _ in 0..iterations {
            let w = apply_sphere_compressed(&sphere, &v, ball, truncation_radius, mode);
            norm = w.l2_norm();
            if norm == 0.0 {
                break;
            }
            // |P a_n v| / |v| with |v| = 1 is a valid lower bound for the
            // compression, hence for |a_n|
            lower = lower.max(norm);
            v = w;
            v.scale(1.0 / norm);
        }
    }
    debug_assert!(lower + 1e-9 >= (sphere_size as f64).sqrt());
    Ok(OperatorGrowthEstimate {
        n,
        sphere_size,
        lower,
        upper,
        truncation_radius,
        iterations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralRow {
    pub n: u32,
    pub sphere_size: usize,
    pub growth_root: f64,
    pub opnorm_lower: f64,
    pub opnorm_root: f64,
}

/// Finite-n estimates of the growth radius rho and the operator radius
/// rho_r, with the gap to sqrt(rho). Nothing here converges fast; the report
/// states finite-n bounds only and asserts no tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralRelationReport {
    pub group: String,
    pub rows: Vec<SpectralRow>,
    pub rho_hat: f64,
    pub rho_r_hat: f64,
    pub sqrt_rho_hat: f64,
    pub gap: f64,
}

pub fn spectral_relation_report<E: GroupElement>(
    ball: &GroupBall<E>,
    n_max: u32,
    iterations: u32,
    seed: u64,
    mode: ExecMode,
) -> Result<SpectralRelationReport, Error> {
    let n_max = n_max.min(ball.radius);
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let est = operator_norm_bounds(ball, n, ball.radius, iterations, seed, mode)?;
        rows.push(SpectralRow {
            n,
            sphere_size: est.sphere_size,
            growth_root: (est.sphere_size as f64).powf(1.0 / n as f64),
            opnorm_lower: est.lower,
            opnorm_root: est.lower.powf(1.0 / n as f64),
        });
    }
    let last = rows
        .last()
        .ok_or_else(|| Error::NotApplicable("need n_max >= 1".into()))?;
    let rho_hat = 1.0 / last.growth_root;
    let rho_r_hat = 1.0 / last.opnorm_root;
    let sqrt_rho_hat = rho_hat.sqrt();
    Ok(SpectralRelationReport {
        group: ball.tag.to_string(),
        rows,
        rho_hat,
        rho_r_hat,
        sqrt_rho_hat,
        gap: (rho_r_hat - sqrt_rho_hat).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::enumerate_ball_g;

    #[test]
    fn n_zero_bounds_are_one() {
        let ball = enumerate_ball_g(2, 100_000, ExecMode::default()).unwrap();
        let est = operator_norm_bounds(&ball, 0, 2, 5, 1, ExecMode::default()).unwrap();
        assert_eq!(est.lower, 1.0);
        assert_eq!(est.upper, 1.0);
    }

    #[test]
    fn bounds_bracket_sphere_size() {
        let ball = enumerate_ball_g(2, 100_000, ExecMode::default()).unwrap();
        for n in 1..=2 {
            let est = operator_norm_bounds(&ball, n, 2, 8, 1, ExecMode::default()).unwrap();
            let s = est.sphere_size as f64;
            assert!(est.lower >= s.sqrt() - 1e-9, "lower {} < sqrt {}", est.lower, s.sqrt());
            assert!(est.lower <= est.upper + 1e-9);
            assert!(est.upper == s);
        }
    }

    #[test]
    fn lower_bound_monotone_in_radius_and_iterations() {
        let ball = enumerate_ball_g(2, 100_000, ExecMode::default()).unwrap();
        let e_small = operator_norm_bounds(&ball, 1, 1, 6, 1, ExecMode::default()).unwrap();
        let e_big = operator_norm_bounds(&ball, 1, 2, 6, 1, ExecMode::default()).unwrap();
        assert!(e_big.lower + 1e-9 >= e_small.lower);
        let e_few = operator_norm_bounds(&ball, 1, 2, 2, 1, ExecMode::default()).unwrap();
        assert!(e_big.lower + 1e-9 >= e_few.lower);
    }

    #[test]
    fn spectral_report_sanity() {
        let ball = enumerate_ball_g(2, 100_000, ExecMode::default()).unwrap();
        let rep = spectral_relation_report(&ball, 2, 5, 1, ExecMode::default()).unwrap();
        assert!(rep.sqrt_rho_hat <= 1.0 + 1e-12);
        assert!(rep.rho_r_hat <= 1.0 + 1e-12);
        assert!(rep.gap.is_finite());
    }
}
