//! The retraction Γ assembled from its building blocks by function calls.
//!
//! Pipeline, for a package `(f, g, F, G)`:
//!
//! 1. `H = H1 * H2 * H3`, a deformation of `1_{M_f}` into the top retraction
//!    `r'`, concatenated in equal thirds;
//! 2. `K`, which runs `H` backwards at double speed and then returns along
//!    `H` applied to `r'(p)`; on the top it is symmetric in time;
//! 3. `L`, a homotopy of `K` restricted to the top, flattened inside the
//!    V-shaped region `u ≥ |2s - 1|`;
//! 4. `L' = (K₀, L) ∘ R` where `R` is the homotopy-extension retraction of
//!    the square built from `φ`;
//! 5. Γ walks `L'` along the left, top and right edges of the square.
//!
//! This is the reference against which the closed forms are checked.

use crate::cylinder::{is_on_top, CylPoint};
use crate::error::{Error, Result};
use crate::homotopy_data::{HtpyEquivalence, UnitParam};

pub(crate) const ONE_THIRD: f64 = 1.0 / 3.0;
pub(crate) const TWO_THIRDS: f64 = 2.0 / 3.0;

#[inline]
fn unit(v: f64) -> UnitParam {
    UnitParam::saturating(v)
}

/// Retraction of the square `I²` onto `I × {0} ∪ {1} × I` by radial
/// projection from `(0, 2)`.
pub fn phi(u: UnitParam, v: UnitParam) -> (UnitParam, UnitParam) {
    let (a, b) = phi_raw(u.get(), v.get());
    (unit(a), unit(b))
}

/// [`phi`] on bare floats, without clamping the result into `I²`.
pub fn phi_raw(u: f64, v: f64) -> (f64, f64) {
    if v <= 2.0 - 2.0 * u {
        (2.0 * u / (2.0 - v), 0.0)
    } else {
        // reachable only for u ≥ 1/2; written so that u = 1 returns v exactly
        (1.0, (v - 2.0 * (1.0 - u)) / u)
    }
}

/// The retraction `R` of `M_f × I × I` onto `M_f × I × {0} ∪ X̃ × I × I`.
pub fn hep_retraction(
    p: &CylPoint,
    s: UnitParam,
    l: UnitParam,
) -> (CylPoint, UnitParam, UnitParam) {
    match p {
        CylPoint::Cyl { x, t } => {
            let (t2, l2) = phi(*t, l);
            (CylPoint::cyl(x.clone(), t2), s, l2)
        }
        CylPoint::Base { y } => (CylPoint::base(y.clone()), s, UnitParam::ZERO),
    }
}

/// The composed construction over one homotopy-equivalence package.
#[derive(Clone, Copy, Debug)]
pub struct Construction<'a> {
    he: &'a HtpyEquivalence,
}

impl<'a> Construction<'a> {
    pub fn new(he: &'a HtpyEquivalence) -> Self {
        Construction { he }
    }

    pub fn package(&self) -> &'a HtpyEquivalence {
        self.he
    }

    /// `H1`: slides cylinder points down to the base, `[x, t] ↦ [x, t(1-s)]`.
    pub fn h1(&self, p: &CylPoint, s: UnitParam) -> CylPoint {
        match p {
            CylPoint::Cyl { x, t } => CylPoint::cyl(x.clone(), unit(t.get() * (1.0 - s.get()))),
            CylPoint::Base { y } => CylPoint::base(y.clone()),
        }
    }

    /// `r`: projection onto the base, `[x, t] ↦ [x, 0] = [f(x)]`.
    pub fn bottom_retraction(&self, p: &CylPoint) -> CylPoint {
        match p {
            CylPoint::Cyl { x, .. } => CylPoint::base(self.he.forward(x)),
            CylPoint::Base { y } => CylPoint::base(y.clone()),
        }
    }

    /// `H2`: runs `G` backwards on the base, from `r` to `h`.
    pub fn h2(&self, p: &CylPoint, s: UnitParam) -> CylPoint {
        match self.bottom_retraction(p) {
            CylPoint::Base { y } => CylPoint::base(self.he.homotopy_y(&y, s.reversed())),
            CylPoint::Cyl { .. } => unreachable!("bottom retraction lands in the base"),
        }
    }

    /// `H3`: lifts `h` to the top along `F`, from `h` to `r'`.
    pub fn h3(&self, p: &CylPoint, s: UnitParam) -> CylPoint {
        match p {
            CylPoint::Cyl { x, t } => {
                CylPoint::cyl(self.he.homotopy_x(x, unit(s.get() * t.get())), s)
            }
            CylPoint::Base { y } => CylPoint::cyl(self.he.backward(y), s),
        }
    }

    /// `r'`: retraction onto the top, `[x, t] ↦ [F(x, t), 1]`, `[y] ↦ [g(y), 1]`.
    pub fn top_retraction(&self, p: &CylPoint) -> CylPoint {
        match p {
            CylPoint::Cyl { x, t } => CylPoint::top(self.he.homotopy_x(x, *t)),
            CylPoint::Base { y } => CylPoint::top(self.he.backward(y)),
        }
    }

    /// `H = H1 * H2 * H3`, each factor run on a third of the interval.
    pub fn concat_h(&self, p: &CylPoint, s: UnitParam) -> CylPoint {
        let s = s.get();
        if s <= ONE_THIRD {
            self.h1(p, unit(3.0 * s))
        } else if s <= TWO_THIRDS {
            self.h2(p, unit(3.0 * s - 1.0))
        } else {
            self.h3(p, unit(3.0 * s - 2.0))
        }
    }

    /// `H⁻¹(p, s) = H(p, 1 - s)`.
    pub fn concat_h_inverse(&self, p: &CylPoint, s: UnitParam) -> CylPoint {
        self.concat_h(p, s.reversed())
    }

    /// `K`: from `1_{M_f}` to `r'`, with `K(p̃, s) = K(p̃, 1 - s)` on the top.
    pub fn k_homotopy(&self, p: &CylPoint, s: UnitParam) -> CylPoint {
        let s = s.get();
        if s <= 0.5 {
            self.concat_h_inverse(p, unit(1.0 - 2.0 * s))
        } else {
            self.concat_h_inverse(&self.top_retraction(p), unit(2.0 * s - 1.0))
        }
    }

    /// `L` on `X̃ × I × I`: equal to `K(p̃, s)` below the V `u = |2s - 1|`
    /// and to `K(p̃, (1 - u)/2)` above it.
    pub fn l_homotopy(&self, p_top: &CylPoint, s: UnitParam, u: UnitParam) -> Result<CylPoint> {
        if !is_on_top(p_top) {
            return Err(Error::NotOnTop);
        }
        Ok(self.l_on_top(p_top, s, u))
    }

    fn l_on_top(&self, p_top: &CylPoint, s: UnitParam, u: UnitParam) -> CylPoint {
        if u.get() <= (2.0 * s.get() - 1.0).abs() {
            self.k_homotopy(p_top, s)
        } else {
            self.k_homotopy(p_top, unit((1.0 - u.get()) / 2.0))
        }
    }

    /// `L' = (K₀, L) ∘ R`, extending `L` to all of `M_f × I × I`.
    pub fn l_prime(&self, p: &CylPoint, s: UnitParam, u: UnitParam) -> CylPoint {
        let (q, s, w) = hep_retraction(p, s, u);
        if w.get() == 0.0 {
            self.k_homotopy(&q, s)
        } else {
            // R only leaves the bottom face through X̃ × I × I
            self.l_on_top(&q, s, w)
        }
    }

    /// Γ: the strong deformation retraction of `M_f` onto `X̃`.
    pub fn gamma(&self, p: &CylPoint, s: UnitParam) -> CylPoint {
        let s = s.get();
        if s <= ONE_THIRD {
            self.l_prime(p, UnitParam::ZERO, unit(3.0 * s))
        } else if s <= TWO_THIRDS {
            self.l_prime(p, unit(3.0 * s - 1.0), UnitParam::ONE)
        } else {
            self.l_prime(p, UnitParam::ONE, unit(3.0 - 3.0 * s))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylinder::distance;
    use crate::homotopy_data::{fixture, SpacePoint, FIXTURE_NAMES};
    use proptest::prelude::*;

    fn pt(c: &[f64]) -> SpacePoint {
        SpacePoint::new(c).unwrap()
    }

    fn u(v: f64) -> UnitParam {
        UnitParam::new(v).unwrap()
    }

    fn cyl(c: &[f64], t: f64) -> CylPoint {
        CylPoint::cyl(pt(c), u(t))
    }

    fn base(c: &[f64]) -> CylPoint {
        CylPoint::base(pt(c))
    }

    fn assert_near(he: &HtpyEquivalence, a: &CylPoint, b: &CylPoint, tol: f64) {
        let d = distance(he, a, b);
        assert!(d <= tol, "{a:?} vs {b:?}: {d}");
    }

    #[test]
    fn h1_examples() {
        let he = fixture("identity-line").unwrap();
        let c = Construction::new(&he);
        assert_eq!(c.h1(&cyl(&[3.0], 0.8), u(0.5)), cyl(&[3.0], 0.4));
        assert_eq!(c.h1(&cyl(&[3.0], 0.8), UnitParam::ZERO), cyl(&[3.0], 0.8));
        assert_eq!(c.h1(&base(&[1.5]), u(0.3)), base(&[1.5]));
    }

    #[test]
    fn bottom_retraction_examples() {
        let he = fixture("identity-line").unwrap();
        let c = Construction::new(&he);
        assert_eq!(c.bottom_retraction(&cyl(&[3.0], 0.7)), base(&[3.0]));
        assert_eq!(c.bottom_retraction(&base(&[-2.0])), base(&[-2.0]));
        let once = c.bottom_retraction(&cyl(&[1.0], 0.2));
        assert_eq!(c.bottom_retraction(&once), once);
    }

    #[test]
    fn h2_examples() {
        let he = fixture("identity-line").unwrap();
        let c = Construction::new(&he);
        let p = cyl(&[2.0], 0.3);
        assert_eq!(c.h2(&p, UnitParam::ZERO), base(&[2.0]));
        assert_eq!(c.h2(&p, UnitParam::ZERO), c.bottom_retraction(&p));

        let cone = fixture("disk-to-point").unwrap();
        let c = Construction::new(&cone);
        let y = pt(&[1.0, -0.5]);
        let fg = cone.forward(&cone.backward(&y));
        assert_eq!(c.h2(&CylPoint::base(y), UnitParam::ONE), CylPoint::base(fg));

        let pp = fixture("punctured-plane").unwrap();
        let c = Construction::new(&pp);
        assert_near(
            &pp,
            &c.h2(&base(&[2.0, 0.0]), u(0.5)),
            &base(&[std::f64::consts::SQRT_2, 0.0]),
            1e-15,
        );
    }

    #[test]
    fn h3_examples() {
        let he = fixture("punctured-plane").unwrap();
        let c = Construction::new(&he);
        let x = pt(&[0.6, 1.1]);
        let p = CylPoint::cyl(x.clone(), u(0.35));
        assert_eq!(
            c.h3(&p, UnitParam::ONE),
            CylPoint::top(he.homotopy_x(&x, u(0.35)))
        );
        let y = pt(&[-1.2, 0.4]);
        assert_eq!(
            c.h3(&CylPoint::base(y.clone()), u(0.6)),
            CylPoint::cyl(he.backward(&y), u(0.6))
        );
        let q = c.h3(&CylPoint::cyl(x.clone(), u(0.4)), UnitParam::ZERO);
        assert_eq!(
            q,
            CylPoint::cyl(he.homotopy_x(&x, UnitParam::ZERO), UnitParam::ZERO)
        );
        let fgf = he.forward(&he.backward(&he.forward(&x)));
        assert_near(&he, &q, &CylPoint::base(fgf), 1e-15);
    }

    #[test]
    fn top_retraction_examples() {
        let he = fixture("identity-line").unwrap();
        let c = Construction::new(&he);
        assert_eq!(c.top_retraction(&cyl(&[1.25], 1.0)), cyl(&[1.25], 1.0));
        assert_eq!(c.top_retraction(&base(&[0.5])), cyl(&[0.5], 1.0));
        let cone = fixture("cone-line").unwrap();
        let c = Construction::new(&cone);
        assert_eq!(c.top_retraction(&cyl(&[4.0], 0.5)), cyl(&[2.0], 1.0));
    }

    #[test]
    fn concat_examples() {
        let he = fixture("cone-line").unwrap();
        let c = Construction::new(&he);
        let p = cyl(&[1.2], 0.6);
        assert_eq!(c.concat_h(&p, UnitParam::ZERO), p);
        assert_eq!(c.concat_h(&p, UnitParam::ONE), c.top_retraction(&p));
        let he = fixture("identity-line").unwrap();
        let c = Construction::new(&he);
        assert_near(
            &he,
            &c.concat_h(&cyl(&[3.0], 0.9), u(1.0 / 6.0)),
            &cyl(&[3.0], 0.45),
            1e-15,
        );
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(u(0.3), UnitParam::ZERO), (u(0.3), UnitParam::ZERO));
        assert_eq!(phi(UnitParam::ONE, u(0.7)), (UnitParam::ONE, u(0.7)));
        assert_eq!(phi(u(0.25), UnitParam::ONE), (u(0.5), UnitParam::ZERO));
        assert_eq!(
            phi(u(0.5), UnitParam::ONE),
            (UnitParam::ONE, UnitParam::ZERO)
        );
        assert_eq!(
            phi(UnitParam::ZERO, UnitParam::ZERO),
            (UnitParam::ZERO, UnitParam::ZERO)
        );
        assert_eq!(
            phi(UnitParam::ONE, UnitParam::ONE),
            (UnitParam::ONE, UnitParam::ONE)
        );
    }

    #[test]
    fn hep_retraction_examples() {
        let y = base(&[0.1]);
        assert_eq!(
            hep_retraction(&y, u(0.4), u(0.9)),
            (y.clone(), u(0.4), UnitParam::ZERO)
        );
        let p = cyl(&[2.0], 0.35);
        assert_eq!(
            hep_retraction(&p, u(0.4), UnitParam::ZERO),
            (p.clone(), u(0.4), UnitParam::ZERO)
        );
        assert_eq!(
            hep_retraction(&cyl(&[2.0], 0.25), u(0.4), UnitParam::ONE),
            (cyl(&[2.0], 0.5), u(0.4), UnitParam::ZERO)
        );
    }

    #[test]
    fn k_examples() {
        let he = fixture("punctured-plane").unwrap();
        let c = Construction::new(&he);
        let p = cyl(&[0.9, -0.7], 0.45);
        assert_eq!(c.k_homotopy(&p, UnitParam::ZERO), p);
        assert_eq!(c.k_homotopy(&p, UnitParam::ONE), c.top_retraction(&p));
        let y = pt(&[1.5, 0.2]);
        assert_near(
            &he,
            &c.k_homotopy(&CylPoint::base(y.clone()), u(0.4)),
            &CylPoint::cyl(he.backward(&y), u(0.4)),
            1e-15,
        );
        // both halves give r'(p) at s = 1/2
        let left = c.concat_h_inverse(&p, UnitParam::ZERO);
        let right = c.concat_h_inverse(&c.top_retraction(&p), UnitParam::ZERO);
        assert_near(&he, &left, &right, 1e-12);
        assert_near(&he, &c.k_homotopy(&p, u(0.5)), &right, 0.0);
    }

    #[test]
    fn l_examples() {
        let he = fixture("annulus-circle").unwrap();
        let c = Construction::new(&he);
        let top = CylPoint::top(pt(&[0.6, 0.8]));
        for s in [0.0, 0.2, 0.5, 0.77, 1.0] {
            assert_eq!(
                c.l_homotopy(&top, u(s), UnitParam::ZERO).unwrap(),
                c.k_homotopy(&top, u(s))
            );
            assert_near(
                &he,
                &c.l_homotopy(&top, u(s), UnitParam::ONE).unwrap(),
                &top,
                1e-15,
            );
        }
        assert_eq!(
            c.l_homotopy(&top, u(0.5), u(0.2)).unwrap(),
            c.k_homotopy(&top, u(0.4))
        );
        assert!(matches!(
            c.l_homotopy(&cyl(&[0.6, 0.8], 0.5), u(0.5), u(0.5)),
            Err(Error::NotOnTop)
        ));
    }

    #[test]
    fn l_prime_examples() {
        let he = fixture("punctured-plane").unwrap();
        let c = Construction::new(&he);
        let p = cyl(&[1.1, 0.3], 0.25);
        for s in [0.0, 0.3, 0.5, 0.9] {
            assert_eq!(c.l_prime(&p, u(s), UnitParam::ZERO), c.k_homotopy(&p, u(s)));
            assert_eq!(
                c.l_prime(&p, u(s), UnitParam::ONE),
                c.k_homotopy(&cyl(&[1.1, 0.3], 0.5), u(s))
            );
        }
        let top = CylPoint::top(pt(&[1.1, 0.3]));
        for (s, w) in [(0.2, 0.3), (0.5, 0.1), (0.6, 0.9)] {
            assert_eq!(
                c.l_prime(&top, u(s), u(w)),
                c.l_homotopy(&top, u(s), u(w)).unwrap()
            );
        }
    }

    #[test]
    fn gamma_bullets() {
        for name in FIXTURE_NAMES {
            let he = fixture(name).unwrap();
            let c = Construction::new(&he);
            let x = he.sample_x(6, 3).pop().unwrap();
            let p = CylPoint::cyl(x.clone(), u(0.37));
            assert_eq!(c.gamma(&p, UnitParam::ZERO), p);
            assert_eq!(c.gamma(&p, UnitParam::ONE), c.top_retraction(&p));
            let top = CylPoint::top(x);
            assert_near(&he, &c.gamma(&top, u(0.38)), &top, 0.0);
        }
    }

    #[test]
    fn phi_branches_agree_on_the_dividing_line() {
        for i in 0..=1000 {
            let a = 0.5 + 0.5 * i as f64 / 1000.0;
            let v = 2.0 - 2.0 * a;
            let first = (2.0 * a / (2.0 - v), 0.0);
            let second = (1.0, (2.0 * a + v - 2.0) / a);
            assert!((first.0 - second.0).abs() <= 1e-12 && (first.1 - second.1).abs() <= 1e-12);
        }
    }

    #[test]
    fn retractions_are_idempotent() {
        let he = fixture("punctured-plane").unwrap();
        let c = Construction::new(&he);
        for x in he.sample_x(30, 1) {
            let p = CylPoint::cyl(x, u(0.6));
            let r = c.bottom_retraction(&p);
            assert_eq!(c.bottom_retraction(&r), r);
            let rp = c.top_retraction(&p);
            assert!(rp.is_on_top());
            assert_near(&he, &c.top_retraction(&rp), &rp, 1e-15);
        }
    }

    proptest! {
        #[test]
        fn seam_is_respected_by_every_tool(theta in 0.0f64..std::f64::consts::TAU, r in 0.5f64..2.0, s in 0.0f64..=1.0, w in 0.0f64..=1.0) {
            let he = fixture("punctured-plane").unwrap();
            let c = Construction::new(&he);
            let x = SpacePoint::new(&[r * theta.cos(), r * theta.sin()]).unwrap();
            let seam = CylPoint::cyl(x.clone(), UnitParam::ZERO);
            let bottom = CylPoint::base(he.forward(&x));
            let (s, w) = (u(s), u(w));
            prop_assert!(distance(&he, &c.h1(&seam, s), &c.h1(&bottom, s)) <= 1e-9);
            prop_assert!(distance(&he, &c.h2(&seam, s), &c.h2(&bottom, s)) <= 1e-9);
            prop_assert!(distance(&he, &c.h3(&seam, s), &c.h3(&bottom, s)) <= 1e-9);
            prop_assert!(distance(&he, &c.k_homotopy(&seam, s), &c.k_homotopy(&bottom, s)) <= 1e-9);
            prop_assert!(distance(&he, &c.l_prime(&seam, s, w), &c.l_prime(&bottom, s, w)) <= 1e-9);
            prop_assert!(distance(&he, &c.gamma(&seam, s), &c.gamma(&bottom, s)) <= 1e-9);
        }

        #[test]
        fn k_is_time_symmetric_on_the_top(theta in 0.0f64..std::f64::consts::TAU, r in 0.5f64..2.0, s in 0.0f64..=1.0) {
            let he = fixture("punctured-plane").unwrap();
            let c = Construction::new(&he);
            let top = CylPoint::top(SpacePoint::new(&[r * theta.cos(), r * theta.sin()]).unwrap());
            let d = distance(&he, &c.k_homotopy(&top, u(s)), &c.k_homotopy(&top, u(s).reversed()));
            prop_assert!(d <= 1e-9, "{}", d);
        }

        #[test]
        fn l_cases_agree_on_the_v(x in -3.0f64..3.0, s in 0.0f64..=1.0) {
            let he = fixture("identity-line").unwrap();
            let c = Construction::new(&he);
            let top = CylPoint::top(SpacePoint::new(&[x]).unwrap());
            let v = u((2.0 * s - 1.0).abs());
            let below = c.k_homotopy(&top, u(s));
            let above = c.k_homotopy(&top, u((1.0 - v.get()) / 2.0));
            prop_assert!(distance(&he, &below, &above) <= 1e-9);
        }

        #[test]
        fn phi_lands_in_the_target(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let (p, q) = phi(u(a), u(b));
            prop_assert!(q.get() == 0.0 || p.get() == 1.0);
            let (p2, q2) = phi(p, q);
            prop_assert!((p2.get() - p.get()).abs() <= 1e-12 && (q2.get() - q.get()).abs() <= 1e-12);
        }
    }
}
