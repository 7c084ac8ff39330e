//! Timing harness comparing the Γ evaluators on a shared grid, and
//! trajectory sampling for plots.

use std::hint::black_box;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::closed_form::{gamma, GammaImpl};
use crate::cylinder::{canonical, CylPoint, SEAM_TOL};
use crate::error::{Error, Result};
use crate::homotopy_data::{HtpyEquivalence, UnitParam};
use crate::sampling::{self, Sample};
use crate::verify::Region;

/// Quantum used when hashing outputs for the cross-implementation
/// checksum. Coarse enough that rounding noise between evaluators does not
/// change the digest.
const CHECKSUM_QUANTUM: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    #[serde(rename = "impl")]
    pub implementation: GammaImpl,
    pub grid_points: usize,
    pub reps: usize,
    pub median_ns_per_eval: f64,
    pub p10_ns: f64,
    pub p90_ns: f64,
    /// Digest of the exact output bits over the whole grid.
    pub checksum: u64,
    /// Digest of quantized, canonicalized outputs over the samples of the
    /// agreement region. Equal across evaluators that agree there.
    pub agreement_checksum: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub fixture: String,
    pub seed: u64,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// The report with every timing field zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> BenchReport {
        let mut r = self.clone();
        for row in &mut r.rows {
            row.median_ns_per_eval = 0.0;
            row.p10_ns = 0.0;
            row.p90_ns = 0.0;
        }
        r
    }
}

/// FNV-1a, 64 bit.
#[derive(Clone, Copy)]
struct Digest(u64);

impl Digest {
    fn new() -> Self {
        Digest(0xcbf2_9ce4_8422_2325)
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    fn point_bits(&mut self, p: &CylPoint) {
        match p {
            CylPoint::Cyl { x, t } => {
                self.write(&[1]);
                self.write(&t.get().to_bits().to_le_bytes());
                for c in x.coords() {
                    self.write(&c.to_bits().to_le_bytes());
                }
            }
            CylPoint::Base { y } => {
                self.write(&[0]);
                for c in y.coords() {
                    self.write(&c.to_bits().to_le_bytes());
                }
            }
        }
    }

    fn point_quantized(&mut self, p: &CylPoint) {
        let q = |v: f64| ((v / CHECKSUM_QUANTUM).round() as i64).to_le_bytes();
        match p {
            CylPoint::Cyl { x, t } => {
                self.write(&[1]);
                self.write(&q(t.get()));
                for &c in x.coords() {
                    self.write(&q(c));
                }
            }
            CylPoint::Base { y } => {
                self.write(&[0]);
                for &c in y.coords() {
                    self.write(&q(c));
                }
            }
        }
    }
}

/// The benchmark workload: `grid_n` seeded points of `M_f` (one in ten a
/// base point) each paired with a seeded time.
pub fn bench_grid(he: &HtpyEquivalence, grid_n: usize, seed: u64) -> Vec<Sample> {
    sampling::cyl_points(he, grid_n, seed)
        .into_iter()
        .zip(sampling::times(grid_n, seed.wrapping_add(3)))
        .map(|(point, s)| Sample { point, s })
        .collect()
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx]
}

fn checksums(which: GammaImpl, he: &HtpyEquivalence, grid: &[Sample]) -> (u64, u64) {
    let mut all = Digest::new();
    let mut agree = Digest::new();
    for smp in grid {
        let out = gamma(which, he, &smp.point, smp.s);
        all.point_bits(&out);
        if Region::Agreement.contains(&smp.point, smp.s) {
            // seam points compare equal only after canonicalization
            let out = match canonical(he, out) {
                CylPoint::Cyl { x, t } if t.get() >= 1.0 - SEAM_TOL => CylPoint::top(x),
                other => other,
            };
            agree.point_quantized(&out);
        }
    }
    (all.0, agree.0)
}

/// Times each evaluator over the same grid. A warm-up pass computes the
/// checksums and is not timed; each of the `reps` timed passes is
/// single-threaded.
pub fn run_benchmark(
    he: &HtpyEquivalence,
    impls: &[GammaImpl],
    grid_n: usize,
    reps: usize,
    seed: u64,
) -> Result<BenchReport> {
    if impls.is_empty() {
        return Err(Error::Config("no implementation selected".into()));
    }
    if reps == 0 || grid_n == 0 {
        return Err(Error::Config(
            "reps and grid size must be at least 1".into(),
        ));
    }
    let mut selected: Vec<GammaImpl> = Vec::with_capacity(impls.len());
    for &i in impls {
        if !selected.contains(&i) {
            selected.push(i);
        }
    }
    let grid = bench_grid(he, grid_n, seed);
    let mut rows = Vec::with_capacity(selected.len());
    for which in selected {
        let (checksum, agreement_checksum) = checksums(which, he, &grid);
        let mut per_eval: Vec<f64> = (0..reps)
            .map(|_| {
                let start = Instant::now();
                for smp in &grid {
                    black_box(gamma(
                        which,
                        black_box(he),
                        black_box(&smp.point),
                        black_box(smp.s),
                    ));
                }
                // a zero reading would break the positivity of the statistics
                let ns = (start.elapsed().as_nanos() as f64).max(1.0);
                ns / grid.len() as f64
            })
            .collect();
        per_eval.sort_by(f64::total_cmp);
        rows.push(BenchRow {
            implementation: which,
            grid_points: grid.len(),
            reps,
            median_ns_per_eval: percentile(&per_eval, 0.5),
            p10_ns: percentile(&per_eval, 0.1),
            p90_ns: percentile(&per_eval, 0.9),
            checksum,
            agreement_checksum,
        });
    }
    Ok(BenchReport {
        fixture: he.name().to_string(),
        seed,
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub s: f64,
    pub point: CylPoint,
}

/// `Γ(p, k/(n_steps-1))` for `k = 0..n_steps`.
pub fn sample_trajectory(
    he: &HtpyEquivalence,
    which: GammaImpl,
    p: &CylPoint,
    n_steps: usize,
) -> Result<Vec<TrajectoryPoint>> {
    if n_steps < 2 {
        return Err(Error::Config("a trajectory needs at least 2 steps".into()));
    }
    p.check_dims(he)?;
    Ok((0..n_steps)
        .map(|k| {
            let s = if k + 1 == n_steps {
                1.0
            } else {
                k as f64 / (n_steps - 1) as f64
            };
            TrajectoryPoint {
                s,
                point: gamma(which, he, p, UnitParam::saturating(s)),
            }
        })
        .collect())
}
