//! Metric spaces carrying a convexity mapping `W(x, y, α)`.
//!
//! Two charts are provided: Euclidean n-space, where `W` is the affine
//! combination `αx + (1-α)y`, and the Poincaré upper half-plane, where `W`
//! walks along the unique geodesic. In both, `α` is the weight on `x`, so
//! `W(x, y, 1) = x` and `d(x, W(x, y, α)) = (1-α) d(x, y)`.

mod axioms;
mod halfplane;

use std::fmt;
use std::str::FromStr;

pub use axioms::{
    axiom_residuals, sample_point, verify_convexity_axioms, verify_uniform_convexity, AxiomReport,
    AxiomSample, ProbeOutcome, UniformConvexityProbe,
};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelTag {
    Euclidean,
    Halfplane,
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelTag::Euclidean => "euclidean",
            ModelTag::Halfplane => "halfplane",
        })
    }
}

impl FromStr for ModelTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(ModelTag::Euclidean),
            "halfplane" => Ok(ModelTag::Halfplane),
            other => Err(Error::InvalidParameter(format!("unknown model: {other}"))),
        }
    }
}

/// A point of one of the two models. Coordinates are validated on
/// construction: finite, and `y > 0` for the half-plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Point<S> {
    model: ModelTag,
    coords: Vec<S>,
}

impl<S: Scalar> Point<S> {
    pub fn euclidean(coords: Vec<S>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("euclidean point needs at least one coordinate".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Point { model: ModelTag::Euclidean, coords })
    }

    /// Point of the real line.
    pub fn scalar(v: S) -> Result<Self> {
        Self::euclidean(vec![v])
    }

    pub fn halfplane(x: S, y: S) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::NonFinite);
        }
        if y <= S::zero() {
            return Err(Error::NotInHalfplane(y.to_f64_lossy()));
        }
        Ok(Point { model: ModelTag::Halfplane, coords: vec![x, y] })
    }

    pub fn from_coords(model: ModelTag, coords: Vec<S>) -> Result<Self> {
        match model {
            ModelTag::Euclidean => Self::euclidean(coords),
            ModelTag::Halfplane => match coords.as_slice() {
                [x, y] => Self::halfplane(*x, *y),
                _ => Err(Error::DimensionMismatch { expected: 2, found: coords.len() }),
            },
        }
    }

    pub fn model(&self) -> ModelTag {
        self.model
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }
}

/// A model together with its dimension and the tolerance used by geodesic
/// evaluation (pairs closer than `tol` are treated as coincident).
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceModel<S> {
    tag: ModelTag,
    dim: usize,
    tol: S,
}

impl<S: Scalar> SpaceModel<S> {
    pub fn euclidean(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        Ok(SpaceModel { tag: ModelTag::Euclidean, dim, tol: S::zero() })
    }

    pub fn halfplane() -> Self {
        SpaceModel { tag: ModelTag::Halfplane, dim: 2, tol: S::zero() }
    }

    pub fn new(tag: ModelTag, dim: usize) -> Result<Self> {
        match tag {
            ModelTag::Euclidean => Self::euclidean(dim),
            ModelTag::Halfplane if dim == 2 => Ok(Self::halfplane()),
            ModelTag::Halfplane => Err(Error::DimensionMismatch { expected: 2, found: dim }),
        }
    }

    pub fn with_tolerance(mut self, tol: S) -> Result<Self> {
        if !(tol >= S::zero()) || !tol.is_finite() {
            return Err(Error::InvalidParameter("tolerance must be a finite nonnegative number".into()));
        }
        self.tol = tol;
        Ok(self)
    }

    pub fn tag(&self) -> ModelTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tolerance(&self) -> S {
        self.tol
    }

    /// Checks that `p` is a valid point of this space.
    pub fn check(&self, p: &Point<S>) -> Result<()> {
        if p.model != self.tag {
            return Err(Error::ModelMismatch { expected: self.tag, found: p.model });
        }
        if p.coords.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: p.coords.len() });
        }
        if !p.is_finite() {
            return Err(Error::NonFinite);
        }
        if self.tag == ModelTag::Halfplane && p.coords[1] <= S::zero() {
            return Err(Error::NotInHalfplane(p.coords[1].to_f64_lossy()));
        }
        Ok(())
    }

    pub fn point(&self, coords: Vec<S>) -> Result<Point<S>> {
        let p = Point::from_coords(self.tag, coords)?;
        self.check(&p)?;
        Ok(p)
    }

    pub fn distance(&self, a: &Point<S>, b: &Point<S>) -> Result<S> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.distance_unchecked(a, b))
    }

    pub(crate) fn distance_unchecked(&self, a: &Point<S>, b: &Point<S>) -> S {
        match self.tag {
            ModelTag::Euclidean => euclidean_distance(&a.coords, &b.coords),
            ModelTag::Halfplane => halfplane::distance(&a.coords, &b.coords),
        }
    }

    /// `W(x, y, alpha)`: the point on the geodesic from `x` to `y` at
    /// distance `(1 - alpha) d(x, y)` from `x`.
    pub fn convex_combine(&self, x: &Point<S>, y: &Point<S>, alpha: S) -> Result<Point<S>> {
        self.check(x)?;
        self.check(y)?;
        if !(alpha >= S::zero() && alpha <= S::one()) {
            return Err(Error::WeightOutOfRange(alpha.to_f64_lossy()));
        }
        self.combine_unchecked(x, y, alpha)
    }

    pub(crate) fn combine_unchecked(&self, x: &Point<S>, y: &Point<S>, alpha: S) -> Result<Point<S>> {
        if alpha == S::one() || x.coords == y.coords {
            return Ok(x.clone());
        }
        if alpha == S::zero() {
            return Ok(y.clone());
        }
        let coords = match self.tag {
            ModelTag::Euclidean => {
                let beta = S::one() - alpha;
                x.coords.iter().zip(&y.coords).map(|(&a, &b)| alpha * a + beta * b).collect()
            }
            ModelTag::Halfplane => {
                let d = halfplane::distance(&x.coords, &y.coords);
                if d <= self.tol {
                    return Ok(x.clone());
                }
                halfplane::geodesic_point(&x.coords, &y.coords, d, alpha).to_vec()
            }
        };
        let p = Point { model: self.tag, coords };
        if !p.is_finite() || (self.tag == ModelTag::Halfplane && p.coords[1] <= S::zero()) {
            return Err(Error::InvalidParameter("geodesic evaluation left the model".into()));
        }
        Ok(p)
    }
}

fn euclidean_distance<S: Scalar>(a: &[S], b: &[S]) -> S {
    if a.len() == 1 {
        return (a[0] - b[0]).abs();
    }
    a.iter()
        .zip(b)
        .map(|(&u, &v)| (u - v) * (u - v))
        .fold(S::zero(), |acc, t| acc + t)
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn e2() -> SpaceModel<f64> {
        SpaceModel::euclidean(2).unwrap()
    }

    fn hp(x: f64, y: f64) -> Point<f64> {
        Point::halfplane(x, y).unwrap()
    }

    #[test]
    fn euclidean_345() {
        let a = Point::euclidean(vec![0.0, 0.0]).unwrap();
        let b = Point::euclidean(vec![3.0, 4.0]).unwrap();
        assert_eq!(e2().distance(&a, &b).unwrap(), 5.0);
    }

    #[test]
    fn halfplane_vertical_distance() {
        let s = SpaceModel::<f64>::halfplane();
        let d = s.distance(&hp(0.0, 1.0), &hp(0.0, E)).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn self_distance_is_zero() {
        let s = SpaceModel::<f64>::halfplane();
        assert_eq!(s.distance(&hp(1.5, 0.3), &hp(1.5, 0.3)).unwrap(), 0.0);
        let a = Point::euclidean(vec![1.0, -2.0]).unwrap();
        assert_eq!(e2().distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn distance_rejects_bad_input() {
        let s = SpaceModel::<f64>::halfplane();
        let e = Point::euclidean(vec![0.0, 1.0]).unwrap();
        assert!(matches!(s.distance(&e, &hp(0.0, 1.0)), Err(Error::ModelMismatch { .. })));
        assert!(matches!(Point::halfplane(0.0, 0.0), Err(Error::NotInHalfplane(_))));
        assert!(matches!(Point::halfplane(0.0, -1.0), Err(Error::NotInHalfplane(_))));
        assert!(matches!(Point::euclidean(vec![f64::NAN]), Err(Error::NonFinite)));
        let e3 = Point::euclidean(vec![0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(e2().distance(&e3, &e3), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn euclidean_midpoint() {
        let x = Point::euclidean(vec![0.0, 0.0]).unwrap();
        let y = Point::euclidean(vec![2.0, 0.0]).unwrap();
        let m = e2().convex_combine(&x, &y, 0.5).unwrap();
        assert_eq!(m.coords(), &[1.0, 0.0]);
    }

    #[test]
    fn weight_one_returns_first_argument() {
        let s = SpaceModel::<f64>::halfplane();
        let (x, y) = (hp(-2.0, 0.5), hp(3.0, 4.0));
        assert_eq!(s.convex_combine(&x, &y, 1.0).unwrap(), x);
        assert_eq!(s.convex_combine(&x, &y, 0.0).unwrap(), y);
        let a = Point::euclidean(vec![1.0, 2.0]).unwrap();
        let b = Point::euclidean(vec![-4.0, 7.0]).unwrap();
        assert_eq!(e2().convex_combine(&a, &b, 1.0).unwrap(), a);
    }

    #[test]
    fn halfplane_vertical_midpoint_is_geometric_mean() {
        let s = SpaceModel::<f64>::halfplane();
        let m = s.convex_combine(&hp(0.0, 1.0), &hp(0.0, 4.0), 0.5).unwrap();
        assert!(m.coords()[0].abs() < 1e-15);
        assert!((m.coords()[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn coincident_points_return_x() {
        let s = SpaceModel::<f64>::halfplane();
        let x = hp(0.25, 2.0);
        assert_eq!(s.convex_combine(&x, &x, 0.3).unwrap(), x);
    }

    #[test]
    fn weight_out_of_range() {
        let x = Point::euclidean(vec![0.0, 0.0]).unwrap();
        assert!(matches!(e2().convex_combine(&x, &x, 1.5), Err(Error::WeightOutOfRange(_))));
        assert!(matches!(e2().convex_combine(&x, &x, -0.1), Err(Error::WeightOutOfRange(_))));
        assert!(e2().convex_combine(&x, &x, f64::NAN).is_err());
    }

    #[test]
    fn halfplane_rejects_other_dimensions() {
        assert!(SpaceModel::<f64>::new(ModelTag::Halfplane, 3).is_err());
        assert!(SpaceModel::<f64>::euclidean(0).is_err());
        assert_eq!("sphere".parse::<ModelTag>().unwrap_err().to_string(), "invalid parameter: unknown model: sphere");
    }

    #[test]
    fn works_in_single_precision() {
        let s = SpaceModel::<f32>::halfplane();
        let m = s
            .convex_combine(&Point::halfplane(0.0f32, 1.0).unwrap(), &Point::halfplane(0.0, 4.0).unwrap(), 0.5)
            .unwrap();
        assert!((m.coords()[1] - 2.0).abs() < 1e-5);
    }
}
