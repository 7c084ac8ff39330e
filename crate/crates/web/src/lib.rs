//! Browser bindings for the interactive demo in `www/`.
//!
//! Each export is a thin wrapper over a plain function that is tested
//! natively.

use mapcyl::bench::{sample_trajectory, TrajectoryPoint};
use mapcyl::compositional::phi_raw;
use mapcyl::{
    fixture, gamma, quotient_distance, CylPoint, GammaImpl, SpacePoint, UnitParam, FIXTURE_NAMES,
};
use wasm_bindgen::prelude::*;

fn point(coords: &[f64], t: Option<f64>) -> mapcyl::Result<CylPoint> {
    let c = SpacePoint::new(coords)?;
    Ok(match t {
        Some(t) => CylPoint::cyl(c, UnitParam::new(t)?),
        None => CylPoint::base(c),
    })
}

pub fn trajectory_points(
    fixture_name: &str,
    which: &str,
    coords: &[f64],
    t: Option<f64>,
    steps: usize,
) -> mapcyl::Result<Vec<TrajectoryPoint>> {
    let he = fixture(fixture_name)?;
    sample_trajectory(&he, which.parse()?, &point(coords, t)?, steps)
}

/// Quotient distance between two evaluators at `[x, t]` over an `n × n`
/// grid of `(t, s)`, row-major with `t` increasing down the rows.
pub fn deviations(
    fixture_name: &str,
    a: &str,
    b: &str,
    n: usize,
    coords: &[f64],
) -> mapcyl::Result<Vec<f64>> {
    if n < 2 {
        return Err(mapcyl::Error::Config(
            "grid needs at least 2 points per side".into(),
        ));
    }
    let he = fixture(fixture_name)?;
    let (a, b): (GammaImpl, GammaImpl) = (a.parse()?, b.parse()?);
    let x = SpacePoint::new(coords)?;
    let step = 1.0 / (n - 1) as f64;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let p = CylPoint::cyl(x.clone(), UnitParam::saturating(i as f64 * step));
        for j in 0..n {
            let s = UnitParam::saturating(j as f64 * step);
            out.push(quotient_distance(
                &he,
                &gamma(a, &he, &p, s),
                &gamma(b, &he, &p, s),
            )?);
        }
    }
    Ok(out)
}

fn js(e: mapcyl::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Names of the catalogued fixtures, as a JSON array.
#[wasm_bindgen]
pub fn fixtures() -> String {
    serde_json::to_string(&FIXTURE_NAMES).expect("static names serialize")
}

/// Dimension of `X` for a fixture.
#[wasm_bindgen(js_name = dimX)]
pub fn dim_x(fixture_name: &str) -> Result<usize, JsError> {
    Ok(fixture(fixture_name).map_err(js)?.dim_x())
}

/// `Γ(p, k/(steps-1))` as a JSON array of `{s, point}`. A missing `t`
/// selects a base point.
#[wasm_bindgen]
pub fn trajectory(
    fixture_name: &str,
    which: &str,
    coords: Vec<f64>,
    t: Option<f64>,
    steps: usize,
) -> Result<String, JsError> {
    let pts = trajectory_points(fixture_name, which, &coords, t, steps).map_err(js)?;
    serde_json::to_string(&pts).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = deviationGrid)]
pub fn deviation_grid(
    fixture_name: &str,
    a: &str,
    b: &str,
    n: usize,
    coords: Vec<f64>,
) -> Result<Vec<f64>, JsError> {
    deviations(fixture_name, a, b, n, &coords).map_err(js)
}

/// The square retraction `φ(u, v)` as `[u', v']`.
#[wasm_bindgen]
pub fn phi(u: f64, v: f64) -> Vec<f64> {
    let (a, b) = phi_raw(u.clamp(0.0, 1.0), v.clamp(0.0, 1.0));
    vec![a, b]
}
