//! Seeded random samplers for points, geodesics, and configurations, used by
//! the property tests and the sweep tooling.

use crate::error::Result;
use crate::geometry::{DiskPoint, Geodesic};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the hyperbolic disk of radius `r_hyp` (area measure).
pub fn random_point(rng: &mut ChaCha8Rng, r_hyp: f64) -> DiskPoint {
    let u: f64 = rng.gen_range(0.0..1.0);
    let r = (1.0 + u * (r_hyp.cosh() - 1.0)).acosh();
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    let re = (r / 2.0).tanh();
    DiskPoint::new(re * phi.cos(), re * phi.sin()).expect("inside disk")
}

/// Random pairwise-disjoint geodesics via a balanced-parenthesis pairing of
/// 2n boundary angles (non-crossing chords); gaps are arbitrary.
pub fn random_disjoint_geodesics(rng: &mut ChaCha8Rng, n: usize) -> Vec<Geodesic> {
    loop {
        let mut angles: Vec<f64> = (0..2 * n)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if angles
            .windows(2)
            .any(|w| (w[1] - w[0]).abs() < 1e-3)
        {
            continue;
        }
        // Random balanced parentheses over the sorted angles.
        let mut stack = Vec::new();
        let mut pairs = Vec::new();
        let mut opens_left = n;
        let mut closes_needed = 0usize;
        for (idx, _) in angles.iter().enumerate() {
            let must_open = closes_needed == 0;
            let must_close = opens_left == 0
                || closes_needed == 2 * n - idx;
            let open = if must_open {
                true
            } else if must_close {
                false
            } else {
                rng.gen_bool(0.5)
            };
            if open {
                stack.push(idx);
                opens_left -= 1;
                closes_needed += 1;
            } else {
                let j = stack.pop().expect("balanced");
                closes_needed -= 1;
                pairs.push((j, idx));
            }
        }
        let geodesics: Vec<Geodesic> = pairs
            .iter()
            .map(|&(i, j)| Geodesic::new(angles[i], angles[j], rng.gen_bool(0.5)).unwrap())
            .collect();
        return geodesics;
    }
}

/// Geodesic orthogonal to the diameter in direction `axis_angle`, crossing it
/// at signed hyperbolic position `s`.
pub fn perpendicular_geodesic(axis_angle: f64, s: f64, flip: bool) -> Result<Geodesic> {
    let theta = s.tanh().acos();
    Geodesic::new(axis_angle + theta, axis_angle - theta, flip)
}

/// A stack of geodesics orthogonal to a random diameter with consecutive
/// gaps at least `min_gap`; the resulting configuration has D_H equal to the
/// smallest consecutive gap.
pub fn random_separated_geodesics(
    rng: &mut ChaCha8Rng,
    n: usize,
    min_gap: f64,
) -> Vec<Geodesic> {
    let axis = rng.gen_range(0.0..std::f64::consts::TAU);
    let mut pos = rng.gen_range(-1.0..1.0) - (n as f64 / 2.0) * min_gap * 1.4;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(
            perpendicular_geodesic(axis, pos, rng.gen_bool(0.5))
                .expect("positions stay finite"),
        );
        pos += min_gap + rng.gen_range(0.0..min_gap);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{geodesic_gap, geodesics_disjoint};

    #[test]
    fn disjoint_sampler_is_disjoint() {
        let mut rng = rng_from_seed(11);
        for _ in 0..50 {
            let n = rng.gen_range(1..=8);
            let gs = random_disjoint_geodesics(&mut rng, n);
            assert_eq!(gs.len(), n);
            for i in 0..n {
                for j in i + 1..n {
                    assert!(geodesics_disjoint(&gs[i], &gs[j]).unwrap());
                }
            }
        }
    }

    #[test]
    fn separated_sampler_obeys_min_gap() {
        let mut rng = rng_from_seed(12);
        for _ in 0..20 {
            let gs = random_separated_geodesics(&mut rng, 4, 3.0);
            for i in 0..gs.len() {
                for j in i + 1..gs.len() {
                    let gap = geodesic_gap(&gs[i], &gs[j]).unwrap();
                    assert!(gap >= 3.0 - 1e-9, "gap = {gap}");
                }
            }
        }
    }

    #[test]
    fn random_points_inside_radius() {
        let mut rng = rng_from_seed(13);
        for _ in 0..200 {
            let p = random_point(&mut rng, 4.0);
            let d = crate::geometry::hyperbolic_distance(DiskPoint::origin(), p);
            assert!(d <= 4.0 + 1e-12);
        }
    }
}
