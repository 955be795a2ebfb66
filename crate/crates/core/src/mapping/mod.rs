//! Self-maps with contractive-type class metadata.
//!
//! The five classes checked here, for a self-map `T` and all pairs `x, y`:
//!
//! * contraction: `d(Tx,Ty) <= a d(x,y)`
//! * Zamfirescu: at least one of `d(Tx,Ty) <= a d(x,y)`,
//!   `<= b [d(x,Tx) + d(y,Ty)]`, `<= c [d(x,Ty) + d(y,Tx)]`
//! * C^q: `<= h max{d(x,y), d(x,Tx), d(y,Ty), d(x,Ty), d(y,Tx)}`
//! * generalized contractive: `<= h max{d(x,y), d(x,Tx), d(y,Ty), d(x,Ty) + d(y,Tx)}`
//! * generalized C^q: `<= h max{d(x,y), d(x,Tx) + d(y,Ty), d(x,Ty) + d(y,Tx)}`

mod catalog;
mod classify;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use catalog::{resolve, CatalogEntry, CERTIFICATE_GRID};
pub use classify::{
    classify_mapping, estimate_min_h, verify_key_estimates, ClassEntry, ClassificationReport, KeyEstimateResiduals,
};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{Point, SpaceModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MappingClass {
    Contraction,
    Zamfirescu,
    Cq,
    GeneralizedContractive,
    GeneralizedCq,
}

impl MappingClass {
    pub const ALL: [MappingClass; 5] = [
        MappingClass::Contraction,
        MappingClass::Zamfirescu,
        MappingClass::Cq,
        MappingClass::GeneralizedContractive,
        MappingClass::GeneralizedCq,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MappingClass::Contraction => "contraction",
            MappingClass::Zamfirescu => "zamfirescu",
            MappingClass::Cq => "cq",
            MappingClass::GeneralizedContractive => "generalized-contractive",
            MappingClass::GeneralizedCq => "generalized-cq",
        }
    }
}

impl fmt::Display for MappingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MappingClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MappingClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown mapping class: {s}")))
    }
}

/// Zamfirescu constants with `a in (0,1)` and `b, c in (0, 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZamfirescuParams<S> {
    pub a: S,
    pub b: S,
    pub c: S,
}

impl<S: Scalar> ZamfirescuParams<S> {
    pub fn new(a: S, b: S, c: S) -> Result<Self> {
        let half = S::lit(0.5);
        let open = |v: S, hi: S| v > S::zero() && v < hi;
        if !open(a, S::one()) || !open(b, half) || !open(c, half) {
            return Err(Error::InvalidParameter("Zamfirescu constants need a in (0,1), b and c in (0,1/2)".into()));
        }
        Ok(ZamfirescuParams { a, b, c })
    }

    pub fn max(&self) -> S {
        self.a.max(self.b).max(self.c)
    }
}

/// Parameters a class check is run with. Missing entries mean "not supplied".
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassParams<S> {
    pub h: Option<S>,
    pub zamfirescu: Option<ZamfirescuParams<S>>,
}

impl<S: Scalar> ClassParams<S> {
    pub fn with_h(h: S) -> Result<Self> {
        check_h(h)?;
        Ok(ClassParams { h: Some(h), zamfirescu: None })
    }
}

fn check_h<S: Scalar>(h: S) -> Result<()> {
    if h >= S::zero() && h < S::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("h = {h} outside [0, 1)")))
    }
}

/// `λ = max{h, h/(1-h)}` together with whether it can certify convergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambda<S> {
    pub value: S,
    pub usable: bool,
}

impl<S: Scalar> Lambda<S> {
    /// The value, or [`Error::LambdaNotUsable`] when `λ >= 1`.
    pub fn certified(self) -> Result<S> {
        if self.usable {
            Ok(self.value)
        } else {
            Err(Error::LambdaNotUsable { lambda: self.value.to_f64_lossy() })
        }
    }
}

pub fn lambda_of<S: Scalar>(h: S) -> Result<Lambda<S>> {
    check_h(h)?;
    let value = h.max(h / (S::one() - h));
    Ok(Lambda { value, usable: value < S::one() })
}

/// The convex subset `K` a mapping acts on.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain<S> {
    /// Axis-aligned box `[lo, hi]`, used for Euclidean intervals and boxes.
    Box { lo: Vec<S>, hi: Vec<S> },
    /// All of `X`; the box is only where classification grids are laid out.
    Whole { grid_lo: Vec<S>, grid_hi: Vec<S> },
}

impl<S: Scalar> Domain<S> {
    pub fn interval(lo: S, hi: S) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Domain::Box { lo: vec![lo], hi: vec![hi] })
    }

    pub fn contains(&self, p: &Point<S>) -> bool {
        match self {
            Domain::Box { lo, hi } => {
                p.dim() == lo.len() && p.coords().iter().zip(lo.iter().zip(hi)).all(|(&v, (&l, &h))| l <= v && v <= h)
            }
            Domain::Whole { .. } => true,
        }
    }

    /// Uniform grid with `n` points per axis over the box.
    pub fn grid(&self, space: &SpaceModel<S>, n: usize) -> Result<Vec<Point<S>>> {
        if n < 2 {
            return Err(Error::GridTooSmall(n));
        }
        let (lo, hi) = match self {
            Domain::Box { lo, hi } => (lo, hi),
            Domain::Whole { grid_lo, grid_hi } => (grid_lo, grid_hi),
        };
        let steps = S::from_usize(n - 1).expect("grid size fits scalar");
        let axis = |k: usize| -> Vec<S> {
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        hi[k]
                    } else {
                        lo[k] + (hi[k] - lo[k]) * S::from_usize(i).expect("index fits scalar") / steps
                    }
                })
                .collect()
        };
        let axes: Vec<Vec<S>> = (0..lo.len()).map(axis).collect();
        let mut points = Vec::with_capacity(n.pow(lo.len() as u32));
        let mut idx = vec![0usize; lo.len()];
        loop {
            let coords = idx.iter().enumerate().map(|(k, &i)| axes[k][i]).collect();
            points.push(space.point(coords)?);
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                return Ok(points);
            }
        }
    }
}

pub type Rule<S> = Arc<dyn Fn(&Point<S>) -> Point<S> + Send + Sync>;

/// A self-map `T: K -> K` with its declared class, parameters, and
/// (optionally) a known fixed point.
#[derive(Clone)]
pub struct ContractiveMapping<S> {
    name: String,
    space: SpaceModel<S>,
    domain: Domain<S>,
    rule: Rule<S>,
    class: Option<MappingClass>,
    params: ClassParams<S>,
    fixed_point: Option<Point<S>>,
}

impl<S: fmt::Debug> fmt::Debug for ContractiveMapping<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContractiveMapping")
            .field("name", &self.name)
            .field("space", &self.space)
            .field("domain", &self.domain)
            .field("class", &self.class)
            .field("params", &self.params)
            .field("fixed_point", &self.fixed_point)
            .finish_non_exhaustive()
    }
}

impl<S: Scalar> ContractiveMapping<S> {
    pub fn new<F>(name: impl Into<String>, space: SpaceModel<S>, domain: Domain<S>, rule: F) -> Self
    where
        F: Fn(&Point<S>) -> Point<S> + Send + Sync + 'static,
    {
        ContractiveMapping {
            name: name.into(),
            space,
            domain,
            rule: Arc::new(rule),
            class: None,
            params: ClassParams::default(),
            fixed_point: None,
        }
    }

    /// Declares class membership. The parameter the class needs must be present.
    pub fn declare(mut self, class: MappingClass, params: ClassParams<S>) -> Result<Self> {
        if let Some(h) = params.h {
            check_h(h)?;
        }
        let needs = match class {
            MappingClass::Zamfirescu => params.zamfirescu.is_some(),
            _ => params.h.is_some(),
        };
        if !needs {
            return Err(Error::InvalidParameter(format!("class {class} declared without its parameter")));
        }
        self.class = Some(class);
        self.params = params;
        Ok(self)
    }

    /// Attaches a fixed point; rejected unless `d(T(p), p) <= slack`.
    pub fn with_fixed_point(mut self, p: Point<S>) -> Result<Self> {
        let tp = self.apply(&p)?;
        let residual = self.space.distance(&tp, &p)?;
        if residual > S::slack() {
            return Err(Error::NotFixed { residual: residual.to_f64_lossy() });
        }
        self.fixed_point = Some(p);
        Ok(self)
    }

    pub fn apply(&self, x: &Point<S>) -> Result<Point<S>> {
        self.space.check(x)?;
        if !self.domain.contains(x) {
            return Err(Error::OutsideDomain);
        }
        Ok((self.rule)(x))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &SpaceModel<S> {
        &self.space
    }

    pub fn domain(&self) -> &Domain<S> {
        &self.domain
    }

    pub fn class(&self) -> Option<MappingClass> {
        self.class
    }

    pub fn params(&self) -> &ClassParams<S> {
        &self.params
    }

    pub fn fixed_point(&self) -> Option<&Point<S>> {
        self.fixed_point.as_ref()
    }

    /// `λ` from the declared `h`, when the mapping carries one.
    pub fn lambda(&self) -> Option<Result<Lambda<S>>> {
        self.params.h.map(lambda_of)
    }

    /// Spot-checks `T(K) ⊆ K` on a grid; returns the first escaping point.
    pub fn check_self_map(&self, grid_size: usize) -> Result<Option<Point<S>>> {
        for x in self.domain.grid(&self.space, grid_size)? {
            let tx = self.apply(&x)?;
            if self.space.check(&tx).is_err() || !self.domain.contains(&tx) {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_map(f: fn(f64) -> f64) -> ContractiveMapping<f64> {
        ContractiveMapping::new("test", SpaceModel::euclidean(1).unwrap(), Domain::interval(-1.0, 1.0).unwrap(), move |p| {
            Point::scalar(f(p.coords()[0])).unwrap()
        })
    }

    #[test]
    fn lambda_values() {
        assert_eq!(lambda_of(0.0f64).unwrap(), Lambda { value: 0.0, usable: true });
        let l = lambda_of(1.0f64 / 3.0).unwrap();
        assert!((l.value - 0.5).abs() < 1e-15 && l.usable);
        assert_eq!(lambda_of(0.5f64).unwrap(), Lambda { value: 1.0, usable: false });
        assert!(matches!(lambda_of(0.5).unwrap().certified(), Err(Error::LambdaNotUsable { .. })));
        assert!(lambda_of(1.0).is_err());
        assert!(lambda_of(-0.1).is_err());
        assert!((lambda_of(0.6f64).unwrap().value - 1.5).abs() < 1e-15);
    }

    #[test]
    fn apply_linear_rule() {
        let m = line_map(|x| x / 3.0);
        let out = m.apply(&Point::scalar(1.0).unwrap()).unwrap();
        assert_eq!(out.coords(), &[1.0 / 3.0]);
    }

    #[test]
    fn apply_constant_rule() {
        let m = line_map(|_| 0.25);
        for x in [-1.0, 0.0, 0.7] {
            assert_eq!(m.apply(&Point::scalar(x).unwrap()).unwrap().coords(), &[0.25]);
        }
    }

    #[test]
    fn apply_outside_domain() {
        let m = line_map(|x| x / 3.0);
        assert!(matches!(m.apply(&Point::scalar(2.0).unwrap()), Err(Error::OutsideDomain)));
    }

    #[test]
    fn fixed_point_is_checked() {
        assert!(line_map(|x| x / 3.0).with_fixed_point(Point::scalar(0.0).unwrap()).is_ok());
        let err = line_map(|x| x / 3.0).with_fixed_point(Point::scalar(0.5).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotFixed { .. }));
    }

    #[test]
    fn declare_validates_parameters() {
        assert!(line_map(|x| x).declare(MappingClass::GeneralizedCq, ClassParams::default()).is_err());
        let bad = ClassParams { h: Some(1.0), zamfirescu: None };
        assert!(line_map(|x| x).declare(MappingClass::Cq, bad).is_err());
        assert!(ZamfirescuParams::new(0.5, 0.5, 0.1).is_err());
        assert!(ZamfirescuParams::new(0.5, 0.2, 0.1).is_ok());
    }

    #[test]
    fn grid_spans_box() {
        let s = SpaceModel::euclidean(2).unwrap();
        let d = Domain::Box { lo: vec![0.0, -1.0], hi: vec![1.0, 1.0] };
        let g = d.grid(&s, 3).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g[0].coords(), &[0.0, -1.0]);
        assert_eq!(g[8].coords(), &[1.0, 1.0]);
        assert!(matches!(d.grid(&s, 1), Err(Error::GridTooSmall(1))));
    }

    #[test]
    fn class_names_round_trip() {
        for c in MappingClass::ALL {
            assert_eq!(c.as_str().parse::<MappingClass>().unwrap(), c);
        }
    }
}
