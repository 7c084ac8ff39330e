//! Points of the mapping cylinder `M_f = (X × I + Y) / (x, 0) ~ f(x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homotopy_data::{HtpyEquivalence, SpacePoint, UnitParam};

/// Distance from `t = 0` (or `t = 1`) under which a cylinder coordinate counts
/// as lying on the seam (or on the top).
pub const SEAM_TOL: f64 = 1e-12;

/// A point of `M_f`: the class `[x, t]` of a cylinder point or the class
/// `[y]` of a base point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CylPointRepr", into = "CylPointRepr")]
pub enum CylPoint {
    Cyl { x: SpacePoint, t: UnitParam },
    Base { y: SpacePoint },
}

impl CylPoint {
    pub fn cyl(x: SpacePoint, t: UnitParam) -> Self {
        CylPoint::Cyl { x, t }
    }

    pub fn base(y: SpacePoint) -> Self {
        CylPoint::Base { y }
    }

    /// `[x, 1]`, a point of the top `X̃`.
    pub fn top(x: SpacePoint) -> Self {
        CylPoint::Cyl {
            x,
            t: UnitParam::ONE,
        }
    }

    pub fn is_on_top(&self) -> bool {
        is_on_top(self)
    }

    /// The cylinder coordinate, `None` for base points.
    pub fn t(&self) -> Option<f64> {
        match self {
            CylPoint::Cyl { t, .. } => Some(t.get()),
            CylPoint::Base { .. } => None,
        }
    }

    pub fn coords(&self) -> &[f64] {
        match self {
            CylPoint::Cyl { x, .. } => x.coords(),
            CylPoint::Base { y } => y.coords(),
        }
    }

    pub(crate) fn check_dims(&self, he: &HtpyEquivalence) -> Result<()> {
        match self {
            CylPoint::Cyl { x, .. } => he.check_dim_x(x),
            CylPoint::Base { y } => he.check_dim_y(y),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Cyl,
    Base,
}

#[derive(Serialize, Deserialize)]
struct CylPointRepr {
    kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    coords: Vec<f64>,
}

impl TryFrom<CylPointRepr> for CylPoint {
    type Error = Error;

    fn try_from(r: CylPointRepr) -> Result<Self> {
        let coords = SpacePoint::new(&r.coords)?;
        match (r.kind, r.t) {
            (Kind::Cyl, Some(t)) => Ok(CylPoint::cyl(coords, UnitParam::new(t)?)),
            (Kind::Cyl, None) => Err(Error::Config("cylinder point without `t`".into())),
            (Kind::Base, None) => Ok(CylPoint::base(coords)),
            (Kind::Base, Some(_)) => Err(Error::Config("base point with a `t` value".into())),
        }
    }
}

impl From<CylPoint> for CylPointRepr {
    fn from(p: CylPoint) -> Self {
        match p {
            CylPoint::Cyl { x, t } => CylPointRepr {
                kind: Kind::Cyl,
                t: Some(t.get()),
                coords: x.into(),
            },
            CylPoint::Base { y } => CylPointRepr {
                kind: Kind::Base,
                t: None,
                coords: y.into(),
            },
        }
    }
}

/// Unchecked canonical form: seam points `[x, t]` with `t ≤ SEAM_TOL` become
/// `[f(x)]`.
pub(crate) fn canonical(he: &HtpyEquivalence, p: CylPoint) -> CylPoint {
    match p {
        CylPoint::Cyl { x, t } if t.get() <= SEAM_TOL => CylPoint::base(he.forward(&x)),
        other => other,
    }
}

pub fn canonicalize(he: &HtpyEquivalence, p: &CylPoint) -> Result<CylPoint> {
    p.check_dims(he)?;
    Ok(canonical(he, p.clone()))
}

pub fn is_on_top(p: &CylPoint) -> bool {
    // written as t ≥ 1 - τ so that the literal 0.999999999999 counts as on top
    matches!(p, CylPoint::Cyl { t, .. } if t.get() >= 1.0 - SEAM_TOL)
}

/// Upper bound on the quotient distance between two points of `M_f`.
///
/// Two cylinder points may be joined either across the cylinder or by
/// sliding both down to the base; a cylinder point reaches a base point by
/// sliding down. Both arguments are canonicalized first, so the bound
/// vanishes on identified pairs.
pub fn quotient_distance(he: &HtpyEquivalence, p: &CylPoint, q: &CylPoint) -> Result<f64> {
    p.check_dims(he)?;
    q.check_dims(he)?;
    Ok(distance(he, p, q))
}

pub(crate) fn distance(he: &HtpyEquivalence, p: &CylPoint, q: &CylPoint) -> f64 {
    let p = canonical(he, p.clone());
    let q = canonical(he, q.clone());
    match (&p, &q) {
        (CylPoint::Base { y: a }, CylPoint::Base { y: b }) => he.dist_y(a, b),
        (CylPoint::Cyl { x: a, t: ta }, CylPoint::Cyl { x: b, t: tb }) => {
            let (ta, tb) = (ta.get(), tb.get());
            let across = he.dist_x(a, b) + (ta - tb).abs();
            let through_base = ta + tb + he.dist_y(&he.forward(a), &he.forward(b));
            across.min(through_base)
        }
        (CylPoint::Cyl { x, t }, CylPoint::Base { y })
        | (CylPoint::Base { y }, CylPoint::Cyl { x, t }) => t.get() + he.dist_y(&he.forward(x), y),
    }
}
