//! Γ unfolded into explicit piecewise formulas in `f`, `g`, `F`, `G`.
//!
//! [`gamma_printed_cyl`] and [`gamma_printed_base`] follow the published
//! formula branch by branch. [`gamma_corrected`] restores the region of the
//! middle third where the homotopy `L` is constant in `s` (above the V); the
//! printed formula drops it for `t > 1/2`, which breaks `Γ(p̃, s) = p̃`.
//!
//! Branches are closed intervals evaluated first-match, so a parameter on a
//! shared boundary takes the earlier branch.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::compositional::{Construction, ONE_THIRD, TWO_THIRDS};
use crate::cylinder::{canonical, CylPoint};
use crate::error::Error;
use crate::homotopy_data::{HtpyEquivalence, SpacePoint, UnitParam};

const S7: f64 = 7.0 / 18.0;
const S8: f64 = 8.0 / 18.0;
const S10: f64 = 10.0 / 18.0;
const S11: f64 = 11.0 / 18.0;

/// Selects one of the three Γ evaluators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaImpl {
    Compositional,
    Printed,
    Corrected,
}

impl GammaImpl {
    pub const ALL: [GammaImpl; 3] = [
        GammaImpl::Compositional,
        GammaImpl::Printed,
        GammaImpl::Corrected,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GammaImpl::Compositional => "compositional",
            GammaImpl::Printed => "printed",
            GammaImpl::Corrected => "corrected",
        }
    }

    /// Deliberate departures from the literal published text.
    pub fn notes(self) -> &'static [&'static str] {
        match self {
            GammaImpl::Compositional => &[],
            GammaImpl::Printed => &[
                "base formula, 1/2 <= s <= 10/18: the printed [F(g(y), 10-18s)] lacks its cylinder \
                 coordinate and is read as [F(g(y), 10-18s), 10-18s]",
            ],
            GammaImpl::Corrected => &[
                "base formula, 1/2 <= s <= 10/18: read as [F(g(y), 10-18s), 10-18s]",
                "cylinder formula, middle third, t > 1/2: inside |6s-3| < (2t-1)/t the value is \
                 K([x,1], (1-t)/(2t)), constant in s",
            ],
        }
    }
}

impl fmt::Display for GammaImpl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GammaImpl {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "compositional" => Ok(GammaImpl::Compositional),
            "printed" => Ok(GammaImpl::Printed),
            "corrected" => Ok(GammaImpl::Corrected),
            other => Err(Error::UnknownImpl(other.to_string())),
        }
    }
}

#[inline]
fn unit(v: f64) -> UnitParam {
    UnitParam::saturating(v)
}

fn cyl(x: SpacePoint, t: f64) -> CylPoint {
    CylPoint::cyl(x, unit(t))
}

/// The printed formula for `Γ([x, t], s)`.
pub fn gamma_printed_cyl(
    he: &HtpyEquivalence,
    x: &SpacePoint,
    t: UnitParam,
    s: UnitParam,
) -> CylPoint {
    let (t, s) = (t.get(), s.get());
    if s <= ONE_THIRD {
        first_third(x, t, s)
    } else if s <= TWO_THIRDS {
        if t <= 0.5 {
            middle_low(he, x, t, s)
        } else {
            middle_high(he, x, s)
        }
    } else {
        last_third(he, x, t, s)
    }
}

fn first_third(x: &SpacePoint, t: f64, s: f64) -> CylPoint {
    if s <= (2.0 - 2.0 * t) / 3.0 {
        cyl(x.clone(), 2.0 * t / (2.0 - 3.0 * s))
    } else {
        CylPoint::top(x.clone())
    }
}

fn last_third(he: &HtpyEquivalence, x: &SpacePoint, t: f64, s: f64) -> CylPoint {
    if s >= (1.0 + 2.0 * t) / 3.0 {
        CylPoint::top(he.homotopy_x(x, unit(2.0 * t / (3.0 * s - 1.0))))
    } else {
        CylPoint::top(x.clone())
    }
}

/// Middle third, `t ≤ 1/2`.
fn middle_low(he: &HtpyEquivalence, x: &SpacePoint, t: f64, s: f64) -> CylPoint {
    if s <= S7 {
        cyl(x.clone(), 2.0 * t * (7.0 - 18.0 * s))
    } else if s <= S8 {
        CylPoint::base(he.homotopy_y(&he.forward(x), unit(8.0 - 18.0 * s)))
    } else if s <= 0.5 {
        let tau = 18.0 * s - 8.0;
        cyl(he.homotopy_x(x, unit(2.0 * t * tau)), tau)
    } else if s <= S10 {
        let tau = 10.0 - 18.0 * s;
        let lifted = he.homotopy_x(x, unit(2.0 * t));
        cyl(he.homotopy_x(&lifted, unit(tau)), tau)
    } else if s <= S11 {
        let lifted = he.homotopy_x(x, unit(2.0 * t));
        CylPoint::base(he.homotopy_y(&he.forward(&lifted), unit(18.0 * s - 10.0)))
    } else {
        cyl(he.homotopy_x(x, unit(2.0 * t)), 18.0 * s - 11.0)
    }
}

/// Middle third, `t ≥ 1/2`, as printed: `K([x, 1], 3s - 1)` unfolded.
fn middle_high(he: &HtpyEquivalence, x: &SpacePoint, s: f64) -> CylPoint {
    if s <= S7 {
        cyl(x.clone(), 7.0 - 18.0 * s)
    } else if s <= S8 {
        CylPoint::base(he.homotopy_y(&he.forward(x), unit(8.0 - 18.0 * s)))
    } else if s <= 0.5 {
        let tau = 18.0 * s - 8.0;
        cyl(he.homotopy_x(x, unit(tau)), tau)
    } else if s <= S10 {
        let tau = 10.0 - 18.0 * s;
        cyl(he.homotopy_x(x, unit(tau)), tau)
    } else if s <= S11 {
        CylPoint::base(he.homotopy_y(&he.forward(x), unit(18.0 * s - 10.0)))
    } else {
        cyl(x.clone(), 18.0 * s - 11.0)
    }
}

/// The printed formula for `Γ([y], s)`, with the missing cylinder coordinate
/// of the `[1/2, 10/18]` line restored.
pub fn gamma_printed_base(he: &HtpyEquivalence, y: &SpacePoint, s: UnitParam) -> CylPoint {
    let s = s.get();
    if s <= S7 {
        CylPoint::base(y.clone())
    } else if s <= S8 {
        CylPoint::base(he.homotopy_y(y, unit(8.0 - 18.0 * s)))
    } else if s <= 0.5 {
        cyl(he.backward(y), 18.0 * s - 8.0)
    } else if s <= S10 {
        let tau = 10.0 - 18.0 * s;
        cyl(he.homotopy_x(&he.backward(y), unit(tau)), tau)
    } else if s <= S11 {
        CylPoint::base(he.homotopy_y(&he.forward(&he.backward(y)), unit(18.0 * s - 10.0)))
    } else if s <= TWO_THIRDS {
        cyl(he.backward(y), 18.0 * s - 11.0)
    } else {
        CylPoint::top(he.backward(y))
    }
}

fn printed(he: &HtpyEquivalence, p: &CylPoint, s: UnitParam) -> CylPoint {
    match p {
        CylPoint::Cyl { x, t } => gamma_printed_cyl(he, x, *t, s),
        CylPoint::Base { y } => gamma_printed_base(he, y, s),
    }
}

/// `K([x, 1], (1 - t)/(2t))` for `t ∈ [1/2, 1]`, the value of Γ above the V.
fn above_v(he: &HtpyEquivalence, x: &SpacePoint, t: f64) -> CylPoint {
    if t >= 0.75 {
        cyl(x.clone(), (4.0 * t - 3.0) / t)
    } else if t >= 0.6 {
        CylPoint::base(he.homotopy_y(&he.forward(x), unit((5.0 * t - 3.0) / t)))
    } else {
        let tau = (3.0 - 5.0 * t) / t;
        cyl(he.homotopy_x(x, unit(tau)), tau)
    }
}

/// The printed formula with the V-region of the middle third restored.
pub fn gamma_corrected(he: &HtpyEquivalence, p: &CylPoint, s: UnitParam) -> CylPoint {
    match p {
        CylPoint::Cyl { x, t } if t.get() > 0.5 && s.get() > ONE_THIRD && s.get() <= TWO_THIRDS => {
            let t = t.get();
            let v_height = (2.0 * t - 1.0) / t;
            if (6.0 * s.get() - 3.0).abs() >= v_height {
                middle_high(he, x, s.get())
            } else {
                above_v(he, x, t)
            }
        }
        _ => printed(he, p, s),
    }
}

/// Evaluates Γ with the selected implementation. Cylinder points on the seam
/// are canonicalized to base points before the closed forms see them.
pub fn gamma(which: GammaImpl, he: &HtpyEquivalence, p: &CylPoint, s: UnitParam) -> CylPoint {
    match which {
        GammaImpl::Compositional => Construction::new(he).gamma(p, s),
        GammaImpl::Printed => printed(he, &canonical(he, p.clone()), s),
        GammaImpl::Corrected => gamma_corrected(he, &canonical(he, p.clone()), s),
    }
}

/// Like [`gamma`] but without canonicalizing the input, so that seam
/// consistency of the cylinder formulas themselves can be audited.
pub fn gamma_raw(which: GammaImpl, he: &HtpyEquivalence, p: &CylPoint, s: UnitParam) -> CylPoint {
    match which {
        GammaImpl::Compositional => Construction::new(he).gamma(p, s),
        GammaImpl::Printed => printed(he, p, s),
        GammaImpl::Corrected => gamma_corrected(he, p, s),
    }
}
