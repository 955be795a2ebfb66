use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ModelTag, Point, SpaceModel};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One draw `(u, x, y, z, w, alpha, beta)` for the W1–W4 checks.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomSample<S> {
    pub u: Point<S>,
    pub x: Point<S>,
    pub y: Point<S>,
    pub z: Point<S>,
    pub w: Point<S>,
    pub alpha: S,
    pub beta: S,
}

/// Max residual of each axiom over the drawn samples, in order W1..W4.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport<S> {
    pub samples: usize,
    pub residuals: [S; 4],
    pub tol: S,
}

impl<S: Scalar> AxiomReport<S> {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|&r| r <= self.tol)
    }

    pub fn axiom_passed(&self, i: usize) -> bool {
        self.residuals[i] <= self.tol
    }
}

/// Uniform draw from the bounded sampling region: `[-10, 10]^n` for the
/// Euclidean model, `[-10, 10] x [0.1, 10]` for the half-plane.
pub fn sample_point<S: Scalar, R: Rng + ?Sized>(space: &SpaceModel<S>, rng: &mut R) -> Point<S> {
    let coords: Vec<S> = match space.tag() {
        ModelTag::Euclidean => (0..space.dim()).map(|_| S::lit(rng.gen_range(-10.0..=10.0))).collect(),
        ModelTag::Halfplane => vec![S::lit(rng.gen_range(-10.0..=10.0)), S::lit(rng.gen_range(0.1..=10.0))],
    };
    Point::from_coords(space.tag(), coords).expect("sampling region lies inside the model")
}

/// Violations of W1..W4 for one tuple. W1 and W4 are one-sided (only
/// excess counts); W2 and W3 are equalities and report absolute error.
pub fn axiom_residuals<S: Scalar>(space: &SpaceModel<S>, s: &AxiomSample<S>) -> Result<[S; 4]> {
    let d = |a: &Point<S>, b: &Point<S>| space.distance(a, b);
    let wa = space.convex_combine(&s.x, &s.y, s.alpha)?;
    let wb = space.convex_combine(&s.x, &s.y, s.beta)?;
    let one_m = S::one() - s.alpha;

    let w1 = d(&s.u, &wa)? - (s.alpha * d(&s.u, &s.x)? + one_m * d(&s.u, &s.y)?);
    let w2 = (d(&wa, &wb)? - (s.alpha - s.beta).abs() * d(&s.x, &s.y)?).abs();
    let w3 = d(&wa, &space.convex_combine(&s.y, &s.x, one_m)?)?;
    let lhs4 = d(&space.convex_combine(&s.x, &s.z, s.alpha)?, &space.convex_combine(&s.y, &s.w, s.alpha)?)?;
    let w4 = lhs4 - (s.alpha * d(&s.x, &s.y)? + one_m * d(&s.z, &s.w)?);

    Ok([w1.max(S::zero()), w2, w3, w4.max(S::zero())])
}

/// Draws `sample_count` tuples from a ChaCha8 stream seeded with `seed` and
/// reports the worst residual of each axiom.
pub fn verify_convexity_axioms<S: Scalar>(
    space: &SpaceModel<S>,
    sample_count: usize,
    seed: u64,
    tol: S,
) -> Result<AxiomReport<S>> {
    if sample_count == 0 {
        return Err(Error::InvalidParameter("sample_count must be at least 1".into()));
    }
    if !(tol > S::zero()) {
        return Err(Error::InvalidParameter("tol must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [S::zero(); 4];
    for _ in 0..sample_count {
        let sample = AxiomSample {
            u: sample_point(space, &mut rng),
            x: sample_point(space, &mut rng),
            y: sample_point(space, &mut rng),
            z: sample_point(space, &mut rng),
            w: sample_point(space, &mut rng),
            alpha: S::lit(rng.gen_range(0.0..=1.0)),
            beta: S::lit(rng.gen_range(0.0..=1.0)),
        };
        let r = axiom_residuals(space, &sample)?;
        for (acc, v) in worst.iter_mut().zip(r) {
            *acc = acc.max(v);
        }
    }
    Ok(AxiomReport { samples: sample_count, residuals: worst, tol })
}

/// Pointwise witness for uniform convexity at `(u, x, y, r, eps)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformConvexityProbe<S> {
    pub radius: S,
    pub eps: S,
    pub delta: S,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbeOutcome<S> {
    Witness(UniformConvexityProbe<S>),
    /// The triple does not meet `d(x,u) <= r, d(y,u) <= r, d(x,y) >= r eps`.
    NotApplicable,
    /// Hypotheses hold but the midpoint is not strictly inside the ball.
    NoWitness,
}

pub fn verify_uniform_convexity<S: Scalar>(
    space: &SpaceModel<S>,
    u: &Point<S>,
    x: &Point<S>,
    y: &Point<S>,
    r: S,
    eps: S,
) -> Result<ProbeOutcome<S>> {
    if !(r > S::zero()) || !r.is_finite() {
        return Err(Error::InvalidParameter("radius must be positive".into()));
    }
    let two = S::one() + S::one();
    if !(eps > S::zero() && eps <= two) {
        return Err(Error::InvalidParameter("eps must lie in (0, 2]".into()));
    }
    let dxu = space.distance(x, u)?;
    let dyu = space.distance(y, u)?;
    let dxy = space.distance(x, y)?;
    if dxu > r || dyu > r || dxy < r * eps {
        return Ok(ProbeOutcome::NotApplicable);
    }
    let mid = space.convex_combine(x, y, S::lit(0.5))?;
    let delta = S::one() - space.distance(&mid, u)? / r;
    if delta > S::zero() {
        Ok(ProbeOutcome::Witness(UniformConvexityProbe { radius: r, eps, delta: delta.min(S::one()) }))
    } else {
        Ok(ProbeOutcome::NoWitness)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(x: f64, y: f64) -> Point<f64> {
        Point::euclidean(vec![x, y]).unwrap()
    }

    #[test]
    fn euclidean_axioms_hold() {
        let report = verify_convexity_axioms(&SpaceModel::euclidean(2).unwrap(), 10_000, 42, 1e-9).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn halfplane_axioms_hold() {
        let report = verify_convexity_axioms(&SpaceModel::halfplane(), 10_000, 42, 1e-7).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn report_is_deterministic_per_seed() {
        let s = SpaceModel::<f64>::halfplane();
        let a = verify_convexity_axioms(&s, 500, 7, 1e-7).unwrap();
        let b = verify_convexity_axioms(&s, 500, 7, 1e-7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_tuple_has_zero_residuals() {
        for space in [SpaceModel::euclidean(2).unwrap(), SpaceModel::halfplane()] {
            let p = Point::from_coords(space.tag(), vec![0.5, 2.0]).unwrap();
            let s = AxiomSample { u: p.clone(), x: p.clone(), y: p.clone(), z: p.clone(), w: p, alpha: 0.3, beta: 0.8 };
            assert_eq!(axiom_residuals(&space, &s).unwrap(), [0.0; 4]);
        }
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(verify_convexity_axioms(&SpaceModel::<f64>::halfplane(), 0, 1, 1e-7).is_err());
    }

    #[test]
    fn probe_antipodal_midpoint_is_centre() {
        let s = SpaceModel::euclidean(2).unwrap();
        let out = verify_uniform_convexity(&s, &e(0.0, 0.0), &e(1.0, 0.0), &e(-1.0, 0.0), 1.0, 2.0).unwrap();
        assert_eq!(out, ProbeOutcome::Witness(UniformConvexityProbe { radius: 1.0, eps: 2.0, delta: 1.0 }));
    }

    #[test]
    fn probe_quarter_circle() {
        let s = SpaceModel::euclidean(2).unwrap();
        let ProbeOutcome::Witness(p) =
            verify_uniform_convexity(&s, &e(0.0, 0.0), &e(1.0, 0.0), &e(0.0, 1.0), 1.0, 1.0).unwrap()
        else {
            panic!("expected a witness");
        };
        assert!((p.delta - (1.0 - std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-15);
    }

    #[test]
    fn probe_not_applicable_for_coincident_points() {
        let s = SpaceModel::euclidean(2).unwrap();
        let out = verify_uniform_convexity(&s, &e(0.0, 0.0), &e(0.5, 0.0), &e(0.5, 0.0), 1.0, 0.5).unwrap();
        assert_eq!(out, ProbeOutcome::NotApplicable);
    }

    #[test]
    fn probe_rejects_bad_parameters() {
        let s = SpaceModel::euclidean(2).unwrap();
        let o = e(0.0, 0.0);
        assert!(verify_uniform_convexity(&s, &o, &o, &o, 0.0, 1.0).is_err());
        assert!(verify_uniform_convexity(&s, &o, &o, &o, 1.0, 0.0).is_err());
        assert!(verify_uniform_convexity(&s, &o, &o, &o, 1.0, 2.5).is_err());
    }

    #[test]
    fn halfplane_probe_has_witness() {
        let s = SpaceModel::halfplane();
        let u = Point::halfplane(0.0, 1.0).unwrap();
        let x = Point::halfplane(-0.5, 1.2).unwrap();
        let y = Point::halfplane(0.5, 1.2).unwrap();
        let out = verify_uniform_convexity(&s, &u, &x, &y, 1.0, 0.5).unwrap();
        assert!(matches!(out, ProbeOutcome::Witness(p) if p.delta > 0.0 && p.delta <= 1.0));
    }
}
