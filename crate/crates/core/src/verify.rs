//! Property suites and differential tests over the Γ evaluators.
//!
//! Every check produces a [`CheckReport`] whose `pass` flag is exactly
//! `max_dev <= tol`. Deviations are quotient distances between canonicalized
//! points. Checks named `audit:*` document known defects of the published
//! formula: they are expected to fail, and [`audit_confirmed`] tells whether
//! the defect showed up (`max_dev > 10·tol`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::closed_form::{gamma, gamma_raw, GammaImpl};
use crate::compositional::{phi_raw, Construction, ONE_THIRD, TWO_THIRDS};
use crate::cylinder::{distance, CylPoint};
use crate::error::{Error, Result};
use crate::homotopy_data::{validate_equivalence, HtpyEquivalence, SpacePoint, UnitParam};
use crate::sampling::{self, Sample, SPECIAL_S};

const MAX_WITNESSES: usize = 10;

pub mod names {
    pub const EQUIVALENCE_DATA: &str = "validate_equivalence";
    pub const ENDPOINTS: &str = "endpoints";
    pub const STRONGNESS: &str = "strongness";
    pub const SEAM: &str = "seam";
    pub const EQUIVALENCE: &str = "equivalence";
    pub const BOUNDARY: &str = "boundary_continuity";
    pub const K_SYMMETRY: &str = "k_symmetry";
    pub const PHI: &str = "phi";
    pub const AUDIT_PREFIX: &str = "audit:";
}

/// Input or output recorded with a witness: a point of `M_f` or a bare
/// coordinate vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessValue {
    Point(CylPoint),
    Coords(Vec<f64>),
}

impl From<&CylPoint> for WitnessValue {
    fn from(p: &CylPoint) -> Self {
        WitnessValue::Point(p.clone())
    }
}

impl From<&SpacePoint> for WitnessValue {
    fn from(p: &SpacePoint) -> Self {
        WitnessValue::Coords(p.coords().to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessInput {
    /// Position of the sample in the check's plan.
    pub index: usize,
    pub value: WitnessValue,
    /// Homotopy parameters of the sample (`s`, and `t` where relevant).
    pub params: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub input: WitnessInput,
    pub out_a: WitnessValue,
    pub out_b: WitnessValue,
    pub dev: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub fixture: String,
    #[serde(rename = "impl")]
    pub implementation: Option<GammaImpl>,
    pub samples: usize,
    pub max_dev: f64,
    pub mean_dev: f64,
    pub tol: f64,
    pub pass: bool,
    /// Largest deviations first, ties broken by sample index.
    pub witnesses: Vec<Witness>,
}

pub fn is_audit(report: &CheckReport) -> bool {
    report.check_name.starts_with(names::AUDIT_PREFIX)
}

/// An audit succeeds when the documented defect is clearly visible.
pub fn audit_confirmed(report: &CheckReport) -> bool {
    report.max_dev > 10.0 * report.tol
}

#[derive(Default)]
pub(crate) struct DeviationLog {
    records: Vec<Witness>,
}

impl DeviationLog {
    pub(crate) fn push(
        &mut self,
        value: WitnessValue,
        params: Vec<f64>,
        out_a: WitnessValue,
        out_b: WitnessValue,
        dev: f64,
    ) {
        let index = self.records.len();
        self.records.push(Witness {
            input: WitnessInput {
                index,
                value,
                params,
            },
            out_a,
            out_b,
            dev,
        });
    }

    fn extend(&mut self, rows: impl IntoIterator<Item = Row>) {
        for (value, params, a, b, dev) in rows {
            self.push(value, params, a, b, dev);
        }
    }

    pub(crate) fn finish(
        mut self,
        check_name: &str,
        fixture: &str,
        implementation: Option<GammaImpl>,
        tol: f64,
    ) -> CheckReport {
        for r in &mut self.records {
            // keeps reports serializable; a NaN deviation must still fail
            if !r.dev.is_finite() {
                r.dev = f64::MAX;
            }
        }
        let samples = self.records.len();
        let max_dev = self.records.iter().map(|r| r.dev).fold(0.0, f64::max);
        let mean_dev = if samples == 0 {
            0.0
        } else {
            self.records.iter().map(|r| r.dev).sum::<f64>() / samples as f64
        };
        self.records.sort_by(|a, b| {
            b.dev
                .total_cmp(&a.dev)
                .then(a.input.index.cmp(&b.input.index))
        });
        self.records.truncate(MAX_WITNESSES);
        CheckReport {
            check_name: check_name.to_string(),
            fixture: fixture.to_string(),
            implementation,
            samples,
            max_dev,
            mean_dev,
            tol,
            pass: samples > 0 && max_dev <= tol,
            witnesses: self.records,
        }
    }
}

type Row = (WitnessValue, Vec<f64>, WitnessValue, WitnessValue, f64);

/// Order-preserving map over a sample plan, parallel when available.
fn evaluate<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

fn require_samples(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Config("sample count must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `Γ(p, 0) = p` and `Γ(p, 1) = r'(p)`.
pub fn check_endpoints(
    which: GammaImpl,
    he: &HtpyEquivalence,
    n: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    require_samples(n)?;
    let c = Construction::new(he);
    let points = sampling::cyl_points(he, n, seed);
    let rows = evaluate(&points, |p| {
        let start = gamma(which, he, p, UnitParam::ZERO);
        let end = gamma(which, he, p, UnitParam::ONE);
        let retracted = c.top_retraction(p);
        let d0 = distance(he, &start, p);
        let d1 = distance(he, &end, &retracted);
        if d0 >= d1 {
            (p.into(), vec![0.0], (&start).into(), p.into(), d0)
        } else {
            (p.into(), vec![1.0], (&end).into(), (&retracted).into(), d1)
        }
    });
    let mut log = DeviationLog::default();
    log.extend(rows);
    Ok(log.finish(names::ENDPOINTS, he.name(), Some(which), tol))
}

/// `Γ(p̃, s) = p̃` for `p̃` on the top.
pub fn check_strongness(
    which: GammaImpl,
    he: &HtpyEquivalence,
    n: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    require_samples(n)?;
    let plan = sampling::x_times(he, n, seed);
    let rows = evaluate(&plan, |(x, s)| {
        let top = CylPoint::top(x.clone());
        let out = gamma(which, he, &top, *s);
        let d = distance(he, &out, &top);
        (
            (&top).into(),
            vec![s.get()],
            (&out).into(),
            (&top).into(),
            d,
        )
    });
    let mut log = DeviationLog::default();
    log.extend(rows);
    Ok(log.finish(names::STRONGNESS, he.name(), Some(which), tol))
}

/// `Γ([x, 0], s) = Γ([f(x)], s)`: the evaluator respects the identification
/// `(x, 0) ~ f(x)`. Inputs are not canonicalized, so the cylinder and base
/// branches of the closed forms are compared against each other.
pub fn check_seam(
    which: GammaImpl,
    he: &HtpyEquivalence,
    n: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    require_samples(n)?;
    let plan = sampling::x_times(he, n, seed);
    let rows = evaluate(&plan, |(x, s)| {
        let seam = CylPoint::cyl(x.clone(), UnitParam::ZERO);
        let bottom = CylPoint::base(he.forward(x));
        let a = gamma_raw(which, he, &seam, *s);
        let b = gamma_raw(which, he, &bottom, *s);
        let d = distance(he, &a, &b);
        ((&seam).into(), vec![s.get()], (&a).into(), (&b).into(), d)
    });
    let mut log = DeviationLog::default();
    log.extend(rows);
    Ok(log.finish(names::SEAM, he.name(), Some(which), tol))
}

/// Restriction of a differential test to part of the `(t, s)` square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    Full,
    /// `t ≤ 1/2`, plus base points.
    TLeHalf,
    /// Where the published formula is expected to be right:
    /// `t ≤ 1/2 ∨ s ≤ 1/3 ∨ s ≥ 2/3`, plus base points.
    Agreement,
    /// Where it is not: `t > 1/2 ∧ 1/3 < s < 2/3`. No base points.
    Defect,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Full => "full",
            Region::TLeHalf => "t-le-half",
            Region::Agreement => "agreement",
            Region::Defect => "defect",
        }
    }

    pub fn contains(self, p: &CylPoint, s: UnitParam) -> bool {
        let s = s.get();
        match (self, p.t()) {
            (Region::Full, _) => true,
            (Region::Defect, None) => false,
            (_, None) => true,
            (Region::TLeHalf, Some(t)) => t <= 0.5,
            (Region::Agreement, Some(t)) => t <= 0.5 || s <= ONE_THIRD || s >= TWO_THIRDS,
            (Region::Defect, Some(t)) => t > 0.5 && s > ONE_THIRD && s < TWO_THIRDS,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Region::Full),
            "t-le-half" => Ok(Region::TLeHalf),
            "agreement" => Ok(Region::Agreement),
            "defect" => Ok(Region::Defect),
            other => Err(Error::UnknownRegion(other.to_string())),
        }
    }
}

/// Differential test between two evaluators over a lattice of `(t, s)` (see
/// [`sampling::lattice`]) restricted to `region`.
#[allow(clippy::too_many_arguments)]
pub fn check_equivalence(
    a: GammaImpl,
    b: GammaImpl,
    he: &HtpyEquivalence,
    n: usize,
    seed: u64,
    tol: f64,
    region: Region,
) -> Result<CheckReport> {
    require_samples(n)?;
    let plan = restrict(sampling::lattice(he, n, seed), region)?;
    Ok(compare_on(a, b, he, &plan, tol).named(&format!("{}:{a}:{b}:{region}", names::EQUIVALENCE)))
}

/// Keeps the samples inside `region`; an empty result is an error.
pub fn restrict(plan: Vec<Sample>, region: Region) -> Result<Vec<Sample>> {
    let kept: Vec<Sample> = plan
        .into_iter()
        .filter(|smp| region.contains(&smp.point, smp.s))
        .collect();
    if kept.is_empty() {
        Err(Error::EmptyRegion)
    } else {
        Ok(kept)
    }
}

/// Differential test on an explicit list of samples.
pub fn compare_on(
    a: GammaImpl,
    b: GammaImpl,
    he: &HtpyEquivalence,
    plan: &[Sample],
    tol: f64,
) -> CheckReport {
    let rows = evaluate(plan, |smp| {
        let out_a = gamma(a, he, &smp.point, smp.s);
        let out_b = gamma(b, he, &smp.point, smp.s);
        let d = distance(he, &out_a, &out_b);
        let mut params = vec![smp.s.get()];
        params.extend(smp.point.t());
        (
            (&smp.point).into(),
            params,
            (&out_a).into(),
            (&out_b).into(),
            d,
        )
    });
    let mut log = DeviationLog::default();
    log.extend(rows);
    log.finish(names::EQUIVALENCE, he.name(), Some(b), tol)
}

/// A curve in the `(t, s)` square along which the closed forms switch
/// branch, or the top edge where Γ must restrict to the identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Boundary {
    /// `s = s*` for a breakpoint `s*`, crossed in `s`.
    SLine(f64),
    /// `s = (2 - 2t)/3`, `t ∈ [1/2, 1]`, crossed in `s`.
    FirstThird,
    /// `s = (1 + 2t)/3`, `t ∈ [1/2, 1]`, crossed in `s`.
    LastThird,
    /// `t = 1/2` in the middle third, crossed in `t`.
    HalfT,
    /// `|6s - 3| = (2t - 1)/t`, `t ∈ (1/2, 1)`, crossed in `s`.
    VCurve,
    /// `t = 1`, approached from below: `Γ([x, 1-ε], s)` must be near `[x, 1]`.
    TopEdge,
}

impl Boundary {
    pub fn all() -> Vec<Boundary> {
        let mut out: Vec<Boundary> = SPECIAL_S[1..8]
            .iter()
            .map(|&s| Boundary::SLine(s))
            .collect();
        out.extend([
            Boundary::FirstThird,
            Boundary::LastThird,
            Boundary::HalfT,
            Boundary::VCurve,
            Boundary::TopEdge,
        ]);
        out
    }

    /// Points `(t, s)` on the curve and the transversal direction `(dt, ds)`.
    fn transversals(self) -> Vec<((f64, f64), (f64, f64))> {
        const K: usize = 20;
        let grid = |lo: f64, hi: f64| (0..=K).map(move |i| lo + (hi - lo) * i as f64 / K as f64);
        match self {
            Boundary::SLine(s) => grid(0.0, 1.0).map(|t| ((t, s), (0.0, 1.0))).collect(),
            Boundary::FirstThird => grid(0.5, 1.0)
                .map(|t| ((t, (2.0 - 2.0 * t) / 3.0), (0.0, 1.0)))
                .collect(),
            Boundary::LastThird => grid(0.5, 1.0)
                .map(|t| ((t, (1.0 + 2.0 * t) / 3.0), (0.0, 1.0)))
                .collect(),
            Boundary::HalfT => grid(ONE_THIRD, TWO_THIRDS)
                .chain(SPECIAL_S[1..8].iter().copied())
                .map(|s| ((0.5, s), (1.0, 0.0)))
                .collect(),
            Boundary::VCurve => grid(0.5, 1.0)
                .skip(1)
                .take(K - 1)
                .flat_map(|t| {
                    let half_width = (2.0 * t - 1.0) / t / 6.0;
                    [
                        ((t, 0.5 - half_width), (0.0, 1.0)),
                        ((t, 0.5 + half_width), (0.0, 1.0)),
                    ]
                })
                .collect(),
            Boundary::TopEdge => grid(0.0, 1.0)
                .chain(SPECIAL_S.iter().copied())
                .map(|s| ((1.0, s), (1.0, 0.0)))
                .collect(),
        }
    }
}

const BOUNDARY_SEED: u64 = 0;

/// Boundary, point of `M_f` at the centre, centre `(t, s)`, direction.
type Probe = (Boundary, CylPoint, (f64, f64), (f64, f64));
const BOUNDARY_POINTS: usize = 8;

/// Numerical continuity audit across every branch boundary of the closed
/// forms: `Γ` at `±eps` along the transversal must stay within
/// `tol_factor·eps` of its value on the boundary.
pub fn check_boundary_continuity(
    which: GammaImpl,
    he: &HtpyEquivalence,
    eps: f64,
    tol_factor: f64,
) -> Result<CheckReport> {
    if eps.is_nan() || tol_factor.is_nan() || eps <= 0.0 || tol_factor <= 0.0 {
        return Err(Error::Config("eps and tol_factor must be positive".into()));
    }
    let xs = he.sample_x(BOUNDARY_POINTS, BOUNDARY_SEED);
    let ys = he.sample_y(BOUNDARY_POINTS, BOUNDARY_SEED);

    let mut plan: Vec<Probe> = Vec::new();
    for boundary in Boundary::all() {
        for (centre, dir) in boundary.transversals() {
            for x in &xs {
                plan.push((
                    boundary,
                    CylPoint::cyl(x.clone(), UnitParam::saturating(centre.0)),
                    centre,
                    dir,
                ));
            }
            if let Boundary::SLine(s) = boundary {
                if centre.0 == 0.0 {
                    for y in &ys {
                        plan.push((boundary, CylPoint::base(y.clone()), (0.0, s), dir));
                    }
                }
            }
        }
    }

    let rows = evaluate(&plan, |(boundary, point, (t, s), (dt, ds))| {
        let at = |t: f64, s: f64| -> Option<CylPoint> {
            if !(0.0..=1.0).contains(&t) || !(0.0..=1.0).contains(&s) {
                return None;
            }
            let p = match point {
                CylPoint::Cyl { x, .. } => CylPoint::cyl(x.clone(), UnitParam::saturating(t)),
                base => base.clone(),
            };
            Some(gamma(which, he, &p, UnitParam::saturating(s)))
        };
        let reference = match (boundary, point) {
            (Boundary::TopEdge, CylPoint::Cyl { x, .. }) => CylPoint::top(x.clone()),
            _ => at(*t, *s).expect("boundary centre lies in the square"),
        };
        let mut worst: (f64, Option<CylPoint>) = (0.0, None);
        // points outside the square are skipped, so the top edge is only
        // approached from below
        for side in [-1.0, 1.0] {
            if let Some(out) = at(t + side * eps * dt, s + side * eps * ds) {
                let d = distance(he, &out, &reference);
                if worst.1.is_none() || d > worst.0 {
                    worst = (d, Some(out));
                }
            }
        }
        let out = worst.1.unwrap_or_else(|| reference.clone());
        (
            point.into(),
            vec![*s, *t, *dt, *ds],
            (&out).into(),
            (&reference).into(),
            worst.0,
        )
    });
    let mut log = DeviationLog::default();
    log.extend(rows);
    Ok(log.finish(names::BOUNDARY, he.name(), Some(which), tol_factor * eps))
}

/// `K(p̃, s) = K(p̃, 1 - s)` on the top.
pub fn check_k_symmetry(
    he: &HtpyEquivalence,
    n: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    require_samples(n)?;
    let c = Construction::new(he);
    let plan = sampling::x_times(he, n, seed);
    let rows = evaluate(&plan, |(x, s)| {
        let top = CylPoint::top(x.clone());
        let a = c.k_homotopy(&top, *s);
        let b = c.k_homotopy(&top, s.reversed());
        let d = distance(he, &a, &b);
        ((&top).into(), vec![s.get()], (&a).into(), (&b).into(), d)
    });
    let mut log = DeviationLog::default();
    log.extend(rows);
    Ok(log.finish(names::K_SYMMETRY, he.name(), None, tol))
}

/// `φ` is a retraction of `I²` onto `I × {0} ∪ {1} × I`: its image lies in
/// the target, it fixes the target, it is idempotent, and its two branches
/// agree on `v = 2 - 2u`. Checked on an `n_grid × n_grid` lattice.
pub fn check_phi(n_grid: usize, tol: f64) -> Result<CheckReport> {
    if n_grid < 2 {
        return Err(Error::Config(
            "phi grid needs at least 2 points per side".into(),
        ));
    }
    let axis: Vec<f64> = (0..n_grid)
        .map(|i| i as f64 / (n_grid - 1) as f64)
        .collect();
    let plan: Vec<(f64, f64)> = axis
        .iter()
        .flat_map(|&u| axis.iter().map(move |&v| (u, v)))
        .collect();
    let rows = evaluate(&plan, |&(u, v)| {
        let (a, b) = phi_raw(u, v);
        let outside = [-a, a - 1.0, -b, b - 1.0].into_iter().fold(0.0, f64::max);
        let off_target = b.abs().min((1.0 - a).abs());
        let (a2, b2) = phi_raw(a, b);
        let idempotence = (a2 - a).abs().max((b2 - b).abs());
        let fixing = if v == 0.0 || u == 1.0 {
            (a - u).abs().max((b - v).abs())
        } else {
            0.0
        };
        let branches = if u >= 0.5 {
            let line_v = 2.0 - 2.0 * u;
            let first = (2.0 * u / (2.0 - line_v), 0.0);
            let second = (1.0, (2.0 * u + line_v - 2.0) / u);
            (first.0 - second.0).abs().max((first.1 - second.1).abs())
        } else {
            0.0
        };
        let d = outside
            .max(off_target)
            .max(idempotence)
            .max(fixing)
            .max(branches);
        (
            WitnessValue::Coords(vec![u, v]),
            vec![u, v],
            WitnessValue::Coords(vec![a, b]),
            WitnessValue::Coords(vec![a2, b2]),
            d,
        )
    });
    let mut log = DeviationLog::default();
    log.extend(rows);
    Ok(log.finish(names::PHI, "unit-square", None, tol))
}

impl CheckReport {
    fn named(mut self, name: &str) -> Self {
        self.check_name = name.to_string();
        self
    }

    fn audit(self) -> Self {
        let name = format!("{}{}", names::AUDIT_PREFIX, self.check_name);
        self.named(&name)
    }
}

/// Knobs for [`run_suite`].
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// Lattice size for differential tests.
    pub grid: usize,
    pub eps: f64,
    pub tol_factor: f64,
    /// Overrides the default region of the differential test.
    pub region: Option<Region>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            samples: 1000,
            seed: 0,
            tol: 1e-9,
            grid: 64 * 64,
            eps: 1e-6,
            tol_factor: 50.0,
            region: None,
        }
    }
}

/// Runs every check that applies to `which` on one package. For the printed
/// formula, the checks it is known to fail are run as audits.
pub fn run_suite(
    which: GammaImpl,
    he: &HtpyEquivalence,
    cfg: &SuiteConfig,
) -> Result<Vec<CheckReport>> {
    let (n, seed, tol) = (cfg.samples, cfg.seed, cfg.tol);
    let mut out = vec![
        validate_equivalence(he, n, seed, tol)?,
        check_endpoints(which, he, n, seed, tol)?,
        check_seam(which, he, n, seed, tol)?,
        check_k_symmetry(he, n, seed, tol)?,
        check_phi(200, tol.min(1e-12))?,
    ];
    match which {
        GammaImpl::Printed => {
            out.push(check_equivalence(
                GammaImpl::Compositional,
                which,
                he,
                cfg.grid,
                seed,
                tol,
                cfg.region.unwrap_or(Region::Agreement),
            )?);
            out.push(check_strongness(which, he, n, seed, tol)?.audit());
            out.push(
                check_equivalence(
                    GammaImpl::Compositional,
                    which,
                    he,
                    cfg.grid,
                    seed,
                    tol,
                    Region::Defect,
                )?
                .audit(),
            );
            out.push(check_boundary_continuity(which, he, cfg.eps, cfg.tol_factor)?.audit());
        }
        _ => {
            out.push(check_strongness(which, he, n, seed, tol)?);
            out.push(check_boundary_continuity(
                which,
                he,
                cfg.eps,
                cfg.tol_factor,
            )?);
            if which != GammaImpl::Compositional || cfg.region.is_some() {
                out.push(check_equivalence(
                    GammaImpl::Compositional,
                    which,
                    he,
                    cfg.grid,
                    seed,
                    tol,
                    cfg.region.unwrap_or(Region::Full),
                )?);
            }
        }
    }
    Ok(out)
}

/// True when every non-audit check passed.
pub fn suite_passed(reports: &[CheckReport]) -> bool {
    reports.iter().filter(|r| !is_audit(r)).all(|r| r.pass)
}
