//! Homotopy-equivalence packages `(f, g, F, G)` over Euclidean-embedded
//! spaces, and the fixture catalog every other module is tested against.
//!
//! A package carries
//!
//! * `f: X -> Y` ([`HtpyEquivalence::forward`]) and its homotopy inverse
//!   `g: Y -> X` ([`HtpyEquivalence::backward`]);
//! * `F: X × I -> X` from `g∘f` to `1_X` ([`HtpyEquivalence::homotopy_x`]);
//! * `G: Y × I -> Y` from `f∘g` to `1_Y` ([`HtpyEquivalence::homotopy_y`]);
//! * a metric and a seeded sampler for each space.
//!
//! Spaces exist only through these point operations. Single-point spaces are
//! modelled as `{0} ⊂ ℝ` so every dimension stays positive.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::verify::{self, CheckReport, DeviationLog, WitnessValue};

/// Slack allowed outside `[0, 1]` before a parameter is rejected.
pub const UNIT_TOL: f64 = 1e-12;

/// A point of the unit interval `I`, used both as homotopy time and as the
/// cylinder coordinate.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct UnitParam(f64);

impl UnitParam {
    pub const ZERO: UnitParam = UnitParam(0.0);
    pub const ONE: UnitParam = UnitParam(1.0);

    /// Accepts values within [`UNIT_TOL`] of `[0, 1]` and clamps them.
    pub fn new(value: f64) -> Result<Self> {
        if !(-UNIT_TOL..=1.0 + UNIT_TOL).contains(&value) {
            return Err(Error::OutOfUnitInterval(value));
        }
        Ok(UnitParam(value.clamp(0.0, 1.0)))
    }

    /// Clamps into `[0, 1]` without range validation. Used for intermediate
    /// parameters whose range is guaranteed up to round-off.
    #[inline]
    pub fn saturating(value: f64) -> Self {
        debug_assert!(!value.is_nan(), "NaN unit parameter");
        UnitParam(value.clamp(0.0, 1.0))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `1 - s`.
    #[inline]
    pub fn reversed(self) -> Self {
        UnitParam(1.0 - self.0)
    }
}

impl TryFrom<f64> for UnitParam {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        UnitParam::new(value)
    }
}

impl From<UnitParam> for f64 {
    fn from(value: UnitParam) -> f64 {
        value.0
    }
}

impl fmt::Display for UnitParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A point of `X` or `Y`, given by finite Euclidean coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SpacePoint(SmallVec<[f64; 2]>);

impl SpacePoint {
    pub fn new(coords: &[f64]) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Dimension {
                space: "space",
                expected: 1,
                got: 0,
            });
        }
        if let Some(&bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        Ok(SpacePoint(SmallVec::from_slice(coords)))
    }

    /// Builds a point from coordinates the caller already knows are valid.
    pub(crate) fn from_iter_unchecked(coords: impl IntoIterator<Item = f64>) -> Self {
        SpacePoint(coords.into_iter().collect())
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, k: f64) -> SpacePoint {
        SpacePoint(self.0.iter().map(|c| c * k).collect())
    }

    pub fn euclidean(a: &SpacePoint, b: &SpacePoint) -> f64 {
        a.0.iter()
            .zip(b.0.iter())
            .map(|(p, q)| (p - q) * (p - q))
            .sum::<f64>()
            .sqrt()
    }
}

impl TryFrom<Vec<f64>> for SpacePoint {
    type Error = Error;

    fn try_from(value: Vec<f64>) -> Result<Self> {
        SpacePoint::new(&value)
    }
}

impl From<SpacePoint> for Vec<f64> {
    fn from(value: SpacePoint) -> Vec<f64> {
        value.0.into_vec()
    }
}

pub type PointMap = Arc<dyn Fn(&SpacePoint) -> SpacePoint + Send + Sync>;
pub type PointHomotopy = Arc<dyn Fn(&SpacePoint, UnitParam) -> SpacePoint + Send + Sync>;
pub type Metric = Arc<dyn Fn(&SpacePoint, &SpacePoint) -> f64 + Send + Sync>;
type Draw = Arc<dyn Fn(&mut ChaCha8Rng) -> SpacePoint + Send + Sync>;

/// Deterministic point generator: a fixed list of stratified points near the
/// interesting parts of a space, followed by seeded random draws.
#[derive(Clone)]
pub struct Sampler {
    draw: Draw,
    stratified: Vec<SpacePoint>,
}

impl Sampler {
    pub fn new(
        draw: impl Fn(&mut ChaCha8Rng) -> SpacePoint + Send + Sync + 'static,
        stratified: Vec<SpacePoint>,
    ) -> Self {
        Sampler {
            draw: Arc::new(draw),
            stratified,
        }
    }

    /// Uniform draws from the cube `[-half_width, half_width]^dim`.
    pub fn uniform_box(dim: usize, half_width: f64) -> Self {
        Sampler::new(
            move |rng| {
                SpacePoint::from_iter_unchecked(
                    (0..dim).map(|_| rng.gen_range(-half_width..=half_width)),
                )
            },
            Vec::new(),
        )
    }

    /// The constant sampler of a one-point space `{0} ⊂ ℝ`.
    pub fn single_point() -> Self {
        Sampler::new(|_| SpacePoint::from_iter_unchecked([0.0]), vec![])
    }

    /// Uniform draws from the planar annulus `inner ≤ |p| ≤ outer` (area
    /// measure), with stratified points on both boundary circles and the unit
    /// circle.
    pub fn planar_annulus(inner: f64, outer: f64) -> Self {
        let mut stratified = Vec::new();
        for r in [inner, outer, 1.0] {
            for angle in [0.0, std::f64::consts::FRAC_PI_2, 2.5] {
                stratified.push(polar(r, angle));
            }
        }
        Sampler::new(
            move |rng| {
                let r2 = rng.gen_range(inner * inner..=outer * outer);
                polar(r2.sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
            },
            stratified,
        )
    }

    /// `n` points: stratified ones first, then random draws from `seed`.
    pub fn points(&self, n: usize, seed: u64) -> Vec<SpacePoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<SpacePoint> = self.stratified.iter().take(n).cloned().collect();
        while out.len() < n {
            out.push((self.draw)(&mut rng));
        }
        out
    }
}

fn polar(r: f64, angle: f64) -> SpacePoint {
    SpacePoint::from_iter_unchecked([r * angle.cos(), r * angle.sin()])
}

const Y_SEED_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

/// The package `(f, g, F, G)` with metrics and samplers for `X` and `Y`.
#[derive(Clone)]
pub struct HtpyEquivalence {
    name: String,
    dim_x: usize,
    dim_y: usize,
    forward: PointMap,
    backward: PointMap,
    homotopy_x: PointHomotopy,
    homotopy_y: PointHomotopy,
    metric_x: Metric,
    metric_y: Metric,
    sampler_x: Sampler,
    sampler_y: Sampler,
}

impl HtpyEquivalence {
    /// A package with Euclidean metrics and samplers uniform on `[-1, 1]^d`.
    pub fn new(
        name: impl Into<String>,
        dims: (usize, usize),
        forward: impl Fn(&SpacePoint) -> SpacePoint + Send + Sync + 'static,
        backward: impl Fn(&SpacePoint) -> SpacePoint + Send + Sync + 'static,
        homotopy_x: impl Fn(&SpacePoint, UnitParam) -> SpacePoint + Send + Sync + 'static,
        homotopy_y: impl Fn(&SpacePoint, UnitParam) -> SpacePoint + Send + Sync + 'static,
    ) -> Self {
        let (dim_x, dim_y) = dims;
        HtpyEquivalence {
            name: name.into(),
            dim_x,
            dim_y,
            forward: Arc::new(forward),
            backward: Arc::new(backward),
            homotopy_x: Arc::new(homotopy_x),
            homotopy_y: Arc::new(homotopy_y),
            metric_x: Arc::new(SpacePoint::euclidean),
            metric_y: Arc::new(SpacePoint::euclidean),
            sampler_x: Sampler::uniform_box(dim_x, 1.0),
            sampler_y: Sampler::uniform_box(dim_y, 1.0),
        }
    }

    pub fn with_samplers(mut self, x: Sampler, y: Sampler) -> Self {
        self.sampler_x = x;
        self.sampler_y = y;
        self
    }

    pub fn with_metrics(
        mut self,
        x: impl Fn(&SpacePoint, &SpacePoint) -> f64 + Send + Sync + 'static,
        y: impl Fn(&SpacePoint, &SpacePoint) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.metric_x = Arc::new(x);
        self.metric_y = Arc::new(y);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim_x(&self) -> usize {
        self.dim_x
    }

    pub fn dim_y(&self) -> usize {
        self.dim_y
    }

    /// `f(x)`.
    #[inline]
    pub fn forward(&self, x: &SpacePoint) -> SpacePoint {
        (self.forward)(x)
    }

    /// `g(y)`.
    #[inline]
    pub fn backward(&self, y: &SpacePoint) -> SpacePoint {
        (self.backward)(y)
    }

    /// `F(x, s)`, from `g∘f` at `s = 0` to the identity at `s = 1`.
    #[inline]
    pub fn homotopy_x(&self, x: &SpacePoint, s: UnitParam) -> SpacePoint {
        (self.homotopy_x)(x, s)
    }

    /// `G(y, s)`, from `f∘g` at `s = 0` to the identity at `s = 1`.
    #[inline]
    pub fn homotopy_y(&self, y: &SpacePoint, s: UnitParam) -> SpacePoint {
        (self.homotopy_y)(y, s)
    }

    #[inline]
    pub fn dist_x(&self, a: &SpacePoint, b: &SpacePoint) -> f64 {
        (self.metric_x)(a, b)
    }

    #[inline]
    pub fn dist_y(&self, a: &SpacePoint, b: &SpacePoint) -> f64 {
        (self.metric_y)(a, b)
    }

    pub fn sample_x(&self, n: usize, seed: u64) -> Vec<SpacePoint> {
        self.sampler_x.points(n, seed)
    }

    pub fn sample_y(&self, n: usize, seed: u64) -> Vec<SpacePoint> {
        self.sampler_y.points(n, seed ^ Y_SEED_SALT)
    }

    pub(crate) fn check_dim_x(&self, x: &SpacePoint) -> Result<()> {
        check_dim("X", self.dim_x, x)
    }

    pub(crate) fn check_dim_y(&self, y: &SpacePoint) -> Result<()> {
        check_dim("Y", self.dim_y, y)
    }
}

fn check_dim(space: &'static str, expected: usize, p: &SpacePoint) -> Result<()> {
    if p.dim() == expected {
        Ok(())
    } else {
        Err(Error::Dimension {
            space,
            expected,
            got: p.dim(),
        })
    }
}

impl fmt::Debug for HtpyEquivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HtpyEquivalence")
            .field("name", &self.name)
            .field("dim_x", &self.dim_x)
            .field("dim_y", &self.dim_y)
            .finish_non_exhaustive()
    }
}

pub const FIXTURE_NAMES: [&str; 5] = [
    "identity-line",
    "cone-line",
    "disk-to-point",
    "annulus-circle",
    "punctured-plane",
];

/// `p · |p|^(s-1)`: slides a point radially from the unit circle (`s = 0`)
/// to itself (`s = 1`).
fn radial_slide(p: &SpacePoint, s: UnitParam) -> SpacePoint {
    p.scaled(p.norm().powf(s.get() - 1.0))
}

fn normalized(p: &SpacePoint) -> SpacePoint {
    p.scaled(1.0 / p.norm())
}

fn origin(dim: usize) -> SpacePoint {
    SpacePoint::from_iter_unchecked(std::iter::repeat_n(0.0, dim))
}

fn line_sampler(half_width: f64, near_zero: f64) -> Sampler {
    let stratified = [0.0, near_zero, -near_zero, half_width, -half_width]
        .into_iter()
        .map(|c| SpacePoint::from_iter_unchecked([c]))
        .collect();
    Sampler::new(
        move |rng| SpacePoint::from_iter_unchecked([rng.gen_range(-half_width..=half_width)]),
        stratified,
    )
}

/// Looks up a catalog package by name.
///
/// Sample domains are bounded (`|x| ≤ 3` on the identity line, `|x| ≤ 1.5`
/// on the cone line, radii in `[1/2, 2]` for the radial fixtures, `|y| ≤ 2`
/// on the disk) so that Γ stays Lipschitz in `(t, s)` with a constant below
/// 50 on every sample.
pub fn fixture(name: &str) -> Result<HtpyEquivalence> {
    let he = match name {
        "identity-line" => HtpyEquivalence::new(
            name,
            (1, 1),
            |x| x.clone(),
            |y| y.clone(),
            |x, _| x.clone(),
            |y, _| y.clone(),
        )
        .with_samplers(line_sampler(3.0, 1e-6), line_sampler(3.0, 1e-6)),
        "cone-line" => HtpyEquivalence::new(
            name,
            (1, 1),
            |_| origin(1),
            |_| origin(1),
            |x, s| x.scaled(s.get()),
            |y, _| y.clone(),
        )
        .with_samplers(line_sampler(1.5, 1e-9), Sampler::single_point()),
        "disk-to-point" => {
            let mut stratified = vec![origin(2), SpacePoint::from_iter_unchecked([1e-9, 0.0])];
            stratified.extend([polar(2.0, 0.0), polar(2.0, -1.5), polar(1.0, 2.4)]);
            let disk = Sampler::new(
                |rng| {
                    let r = 2.0 * rng.gen_range(0.0f64..=1.0).sqrt();
                    polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
                },
                stratified,
            );
            HtpyEquivalence::new(
                name,
                (1, 2),
                |_| origin(2),
                |_| origin(1),
                |x, _| x.clone(),
                |y, s| y.scaled(s.get()),
            )
            .with_samplers(Sampler::single_point(), disk)
        }
        "annulus-circle" => {
            let circle = Sampler::new(
                |rng| polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)),
                vec![
                    polar(1.0, 0.0),
                    polar(1.0, std::f64::consts::FRAC_PI_2),
                    polar(1.0, std::f64::consts::PI),
                ],
            );
            HtpyEquivalence::new(
                name,
                (2, 2),
                |x| x.clone(),
                normalized,
                |x, _| x.clone(),
                radial_slide,
            )
            .with_samplers(circle, Sampler::planar_annulus(0.5, 2.0))
        }
        "punctured-plane" => HtpyEquivalence::new(
            name,
            (2, 2),
            normalized,
            |y| y.clone(),
            radial_slide,
            radial_slide,
        )
        .with_samplers(
            Sampler::planar_annulus(0.5, 2.0),
            Sampler::planar_annulus(0.5, 2.0),
        ),
        _ => {
            return Err(Error::UnknownFixture {
                name: name.to_string(),
                valid: FIXTURE_NAMES.to_vec(),
            })
        }
    };
    Ok(he)
}

/// Checks the four endpoint identities `F(·,0) = g∘f`, `F(·,1) = 1_X`,
/// `G(·,0) = f∘g`, `G(·,1) = 1_Y` on `n` sampled points of each space.
pub fn validate_equivalence(
    he: &HtpyEquivalence,
    n: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    if n == 0 {
        return Err(Error::Config("sample count must be at least 1".into()));
    }
    let xs = he.sample_x(n, seed);
    let ys = he.sample_y(n, seed);
    let mut log = DeviationLog::default();

    for x in &xs {
        he.check_dim_x(x)?;
        let gf = he.backward(&he.forward(x));
        he.check_dim_x(&gf)?;
        let start = he.homotopy_x(x, UnitParam::ZERO);
        let end = he.homotopy_x(x, UnitParam::ONE);
        he.check_dim_x(&start)?;
        let d_start = he.dist_x(&start, &gf);
        let d_end = he.dist_x(&end, x);
        let input = WitnessValue::Coords(x.coords().to_vec());
        if d_start >= d_end {
            log.push(
                input,
                vec![0.0],
                WitnessValue::from(&start),
                WitnessValue::from(&gf),
                d_start,
            );
        } else {
            log.push(
                input,
                vec![1.0],
                WitnessValue::from(&end),
                WitnessValue::from(x),
                d_end,
            );
        }
    }
    for y in &ys {
        he.check_dim_y(y)?;
        let fg = he.forward(&he.backward(y));
        he.check_dim_y(&fg)?;
        let start = he.homotopy_y(y, UnitParam::ZERO);
        let end = he.homotopy_y(y, UnitParam::ONE);
        he.check_dim_y(&start)?;
        let d_start = he.dist_y(&start, &fg);
        let d_end = he.dist_y(&end, y);
        let input = WitnessValue::Coords(y.coords().to_vec());
        if d_start >= d_end {
            log.push(
                input,
                vec![0.0],
                WitnessValue::from(&start),
                WitnessValue::from(&fg),
                d_start,
            );
        } else {
            log.push(
                input,
                vec![1.0],
                WitnessValue::from(&end),
                WitnessValue::from(y),
                d_end,
            );
        }
    }
    Ok(log.finish(verify::names::EQUIVALENCE_DATA, he.name(), None, tol))
}
