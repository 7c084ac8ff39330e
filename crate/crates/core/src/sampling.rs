//! Deterministic sample plans for the verification suites.
//!
//! Every plan mixes seeded uniform draws with points stratified on the
//! parameter values where Γ changes branch: `t ∈ {0, 1/2, 1}` and the
//! breakpoints of `s`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cylinder::CylPoint;
use crate::homotopy_data::{HtpyEquivalence, SpacePoint, UnitParam};

/// Breakpoints of `s` in the closed formulas, with both endpoints.
pub const SPECIAL_S: [f64; 9] = [
    0.0,
    1.0 / 3.0,
    7.0 / 18.0,
    8.0 / 18.0,
    0.5,
    10.0 / 18.0,
    11.0 / 18.0,
    2.0 / 3.0,
    1.0,
];

pub const SPECIAL_T: [f64; 3] = [0.0, 0.5, 1.0];

const PARAM_SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// A point of `M_f` paired with a homotopy time.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub point: CylPoint,
    pub s: UnitParam,
}

fn param_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ PARAM_SALT)
}

/// `n` times in `I`: the breakpoints first, then uniform draws.
pub fn times(n: usize, seed: u64) -> Vec<UnitParam> {
    let mut rng = param_rng(seed);
    (0..n)
        .map(|i| match SPECIAL_S.get(i) {
            Some(&s) => UnitParam::saturating(s),
            None => UnitParam::saturating(rng.gen_range(0.0..=1.0)),
        })
        .collect()
}

/// `n` points of `M_f`: every tenth one a base point, the first cylinder
/// points stratified on `t ∈ {0, 1/2, 1}`.
pub fn cyl_points(he: &HtpyEquivalence, n: usize, seed: u64) -> Vec<CylPoint> {
    let xs = he.sample_x(n, seed);
    let ys = he.sample_y(n, seed);
    let mut rng = param_rng(seed.wrapping_add(1));
    xs.into_iter()
        .zip(ys)
        .enumerate()
        .map(|(i, (x, y))| {
            if i % 10 == 9 {
                CylPoint::base(y)
            } else if i < 30 {
                CylPoint::cyl(x, UnitParam::saturating(SPECIAL_T[i % 3]))
            } else {
                CylPoint::cyl(x, UnitParam::saturating(rng.gen_range(0.0..=1.0)))
            }
        })
        .collect()
}

/// `n` pairs `(x, s)` of a point of `X` and a time.
pub fn x_times(he: &HtpyEquivalence, n: usize, seed: u64) -> Vec<(SpacePoint, UnitParam)> {
    he.sample_x(n, seed)
        .into_iter()
        .zip(times(n, seed))
        .collect()
}

/// An `m × m` lattice in `(t, s)` with `m = ⌈√n⌉`, extended by the special
/// values of `t` against every lattice `s` and vice versa, each lattice
/// point carrying its own sampled `x`; followed by `max(1, n/10)` base
/// points.
pub fn lattice(he: &HtpyEquivalence, n: usize, seed: u64) -> Vec<Sample> {
    let m = ((n as f64).sqrt().ceil() as usize).max(2);
    let axis: Vec<f64> = (0..m).map(|i| i as f64 / (m - 1) as f64).collect();
    let mut ts_ss: Vec<(f64, f64)> = Vec::with_capacity(m * m + 12 * m);
    for &t in &axis {
        for &s in &axis {
            ts_ss.push((t, s));
        }
    }
    for &t in &SPECIAL_T {
        ts_ss.extend(axis.iter().map(|&s| (t, s)));
    }
    for &s in &SPECIAL_S {
        ts_ss.extend(axis.iter().map(|&t| (t, s)));
    }
    let xs = he.sample_x(ts_ss.len(), seed);
    let mut out: Vec<Sample> = ts_ss
        .into_iter()
        .zip(xs)
        .map(|((t, s), x)| Sample {
            point: CylPoint::cyl(x, UnitParam::saturating(t)),
            s: UnitParam::saturating(s),
        })
        .collect();
    let n_base = (n / 10).max(1);
    out.extend(
        he.sample_y(n_base, seed)
            .into_iter()
            .zip(times(n_base, seed.wrapping_add(2)))
            .map(|(y, s)| Sample {
                point: CylPoint::base(y),
                s,
            }),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy_data::fixture;

    #[test]
    fn plans_are_deterministic() {
        let he = fixture("annulus-circle").unwrap();
        assert_eq!(cyl_points(&he, 200, 4), cyl_points(&he, 200, 4));
        assert_eq!(lattice(&he, 400, 4), lattice(&he, 400, 4));
        assert_eq!(times(50, 9), times(50, 9));
        assert_ne!(times(50, 9), times(50, 10));
    }

    #[test]
    fn lattice_shape() {
        let he = fixture("identity-line").unwrap();
        let plan = lattice(&he, 10_000, 0);
        let cyl = plan
            .iter()
            .filter(|p| matches!(p.point, CylPoint::Cyl { .. }))
            .count();
        assert_eq!(cyl, 100 * 100 + 12 * 100);
        assert_eq!(plan.len() - cyl, 1000);
    }

    #[test]
    fn cyl_points_mix() {
        let he = fixture("identity-line").unwrap();
        let pts = cyl_points(&he, 100, 0);
        assert_eq!(
            pts.iter()
                .filter(|p| matches!(p, CylPoint::Base { .. }))
                .count(),
            10
        );
        assert_eq!(pts[0].t(), Some(0.0));
        assert_eq!(pts[1].t(), Some(0.5));
        assert_eq!(pts[2].t(), Some(1.0));
    }
}
