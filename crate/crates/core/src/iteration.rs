//! Picard, Mann, Ishikawa and Xu-Noor iterations over any [`SpaceModel`].
//!
//! With `W` the convexity mapping of the space and schedules `α, β, γ`:
//!
//! ```text
//! picard    x' = T x
//! mann      x' = W(T x, x, αₙ)
//! ishikawa  y  = W(T x, x, βₙ);  x' = W(T y, x, αₙ)
//! xunoor    z  = W(T x, x, γₙ);  y  = W(T z, x, βₙ);  x' = W(T y, x, αₙ)
//! ```
//!
//! [`SpaceModel`]: crate::space::SpaceModel

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mapping::ContractiveMapping;
use crate::scalar::Scalar;
use crate::space::Point;

/// Control sequence with every term in `[0, 1)` and a divergent series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule<S> {
    Constant(S),
    /// `1/(n+2)` for `n = 0, 1, ...`; the shift keeps the first term below 1.
    Harmonic,
}

impl<S: Scalar> Schedule<S> {
    pub fn constant(c: S) -> Result<Self> {
        if c >= S::zero() && c < S::one() {
            Ok(Schedule::Constant(c))
        } else {
            Err(Error::ScheduleOutOfRange(c.to_f64_lossy()))
        }
    }

    pub fn term(&self, n: usize) -> S {
        match *self {
            Schedule::Constant(c) => c,
            Schedule::Harmonic => S::one() / S::from_usize(n + 2).expect("index fits scalar"),
        }
    }

    pub fn partial_sum(&self, terms: usize) -> S {
        (0..terms).map(|n| self.term(n)).fold(S::zero(), |a, t| a + t)
    }
}

impl<S: Scalar> fmt::Display for Schedule<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Constant(c) => write!(f, "const:{c}"),
            Schedule::Harmonic => f.write_str("harmonic"),
        }
    }
}

impl<S: Scalar> FromStr for Schedule<S> {
    type Err = Error;

    /// `const:<float>` or `harmonic`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "harmonic" {
            return Ok(Schedule::Harmonic);
        }
        let v = s
            .strip_prefix("const:")
            .and_then(|v| v.trim().parse::<f64>().ok())
            .ok_or_else(|| Error::InvalidParameter(format!("bad schedule '{s}' (expected const:<float> or harmonic)")))?;
        Schedule::constant(S::lit(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmKind {
    Picard,
    Mann,
    Ishikawa,
    XuNoor,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 4] =
        [AlgorithmKind::Picard, AlgorithmKind::Mann, AlgorithmKind::Ishikawa, AlgorithmKind::XuNoor];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmKind::Picard => "picard",
            AlgorithmKind::Mann => "mann",
            AlgorithmKind::Ishikawa => "ishikawa",
            AlgorithmKind::XuNoor => "xunoor",
        }
    }

    /// Which of α, β, γ the scheme reads.
    pub fn needs(self) -> (bool, bool, bool) {
        match self {
            AlgorithmKind::Picard => (false, false, false),
            AlgorithmKind::Mann => (true, false, false),
            AlgorithmKind::Ishikawa => (true, true, false),
            AlgorithmKind::XuNoor => (true, true, true),
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgorithmKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm: {s}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Schedules<S> {
    pub alpha: Option<Schedule<S>>,
    pub beta: Option<Schedule<S>>,
    pub gamma: Option<Schedule<S>>,
}

impl<S: Scalar> Schedules<S> {
    pub fn constant(alpha: S, beta: S, gamma: S) -> Result<Self> {
        Ok(Schedules {
            alpha: Some(Schedule::constant(alpha)?),
            beta: Some(Schedule::constant(beta)?),
            gamma: Some(Schedule::constant(gamma)?),
        })
    }

    pub fn require(&self, kind: AlgorithmKind) -> Result<()> {
        let (a, b, g) = kind.needs();
        let missing = |which| Err(Error::MissingSchedule { kind: kind.as_str(), which });
        if a && self.alpha.is_none() {
            return missing("alpha");
        }
        if b && self.beta.is_none() {
            return missing("beta");
        }
        if g && self.gamma.is_none() {
            return missing("gamma");
        }
        Ok(())
    }

    fn term(s: Option<Schedule<S>>, n: usize) -> S {
        s.map(|s| s.term(n)).unwrap_or_else(S::zero)
    }
}

/// Result of one step, with the intermediate points of the two- and
/// three-step schemes.
#[derive(Debug, Clone, PartialEq)]
pub struct Step<S> {
    pub next: Point<S>,
    pub y: Option<Point<S>>,
    pub z: Option<Point<S>>,
}

pub fn algorithm_step<S: Scalar>(
    kind: AlgorithmKind,
    m: &ContractiveMapping<S>,
    x: &Point<S>,
    n: usize,
    schedules: &Schedules<S>,
) -> Result<Step<S>> {
    schedules.require(kind)?;
    let w = |a: &Point<S>, b: &Point<S>, t: S| m.space().convex_combine(a, b, t);
    let alpha = Schedules::term(schedules.alpha, n);
    let beta = Schedules::term(schedules.beta, n);
    let gamma = Schedules::term(schedules.gamma, n);
    let tx = m.apply(x)?;
    Ok(match kind {
        AlgorithmKind::Picard => Step { next: tx, y: None, z: None },
        AlgorithmKind::Mann => Step { next: w(&tx, x, alpha)?, y: None, z: None },
        AlgorithmKind::Ishikawa => {
            let y = w(&tx, x, beta)?;
            let next = w(&m.apply(&y)?, x, alpha)?;
            Step { next, y: Some(y), z: None }
        }
        AlgorithmKind::XuNoor => {
            let z = w(&tx, x, gamma)?;
            let y = w(&m.apply(&z)?, x, beta)?;
            let next = w(&m.apply(&y)?, x, alpha)?;
            Step { next, y: Some(y), z: Some(z) }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    ToleranceReached,
    MaxIterations,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions<S> {
    pub max_iter: usize,
    pub tol: S,
    /// Keep `yₙ`, `zₙ` in the trajectory.
    pub record_transients: bool,
}

/// `(yₙ, zₙ)` of one step; `None` where the scheme has no such point.
pub type Transient<S> = (Option<Point<S>>, Option<Point<S>>);

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S> {
    pub kind: AlgorithmKind,
    pub iterates: Vec<Point<S>>,
    /// `d(xₙ, p)`, same length as `iterates`.
    pub distances: Vec<S>,
    pub termination: Termination,
    /// `(yₙ, zₙ)` per step when requested.
    pub transients: Option<Vec<Transient<S>>>,
}

impl<S> Trajectory<S> {
    /// Number of steps taken.
    pub fn iterations(&self) -> usize {
        self.iterates.len() - 1
    }
}

/// Iterates from `x0` until `d(xₙ, p) <= tol` or `max_iter` steps.
pub fn run_algorithm<S: Scalar>(
    kind: AlgorithmKind,
    m: &ContractiveMapping<S>,
    x0: &Point<S>,
    schedules: &Schedules<S>,
    p: &Point<S>,
    opts: RunOptions<S>,
) -> Result<Trajectory<S>> {
    schedules.require(kind)?;
    if !(opts.tol > S::zero()) {
        return Err(Error::InvalidParameter("tol must be positive".into()));
    }
    let space = m.space();
    let residual = space.distance(&m.apply(p)?, p)?;
    if residual > S::slack() {
        return Err(Error::NotFixed { residual: residual.to_f64_lossy() });
    }

    let mut x = x0.clone();
    let d0 = space.distance(&x, p)?;
    let mut iterates = vec![x.clone()];
    let mut distances = vec![d0];
    let mut transients = opts.record_transients.then(Vec::new);
    let mut termination = Termination::MaxIterations;

    for n in 0..=opts.max_iter {
        let d = distances[n];
        if !d.is_finite() {
            return Err(Error::NonFiniteIterate { index: n });
        }
        if d <= opts.tol {
            termination = Termination::ToleranceReached;
            break;
        }
        if n == opts.max_iter {
            break;
        }
        let step = algorithm_step(kind, m, &x, n, schedules).map_err(|e| match e {
            Error::NonFinite | Error::InvalidParameter(_) => Error::NonFiniteIterate { index: n + 1 },
            e => e,
        })?;
        if let Some(t) = transients.as_mut() {
            t.push((step.y, step.z));
        }
        x = step.next;
        distances.push(space.distance(&x, p)?);
        iterates.push(x.clone());
    }

    Ok(Trajectory { kind, iterates, distances, termination, transients })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::resolve;

    fn third() -> ContractiveMapping<f64> {
        resolve("linear:q=1/3,p=0").unwrap().mapping
    }

    fn pt(v: f64) -> Point<f64> {
        Point::scalar(v).unwrap()
    }

    fn half() -> Schedules<f64> {
        Schedules::constant(0.5, 0.5, 0.5).unwrap()
    }

    fn opts(max_iter: usize) -> RunOptions<f64> {
        RunOptions { max_iter, tol: 1e-300, record_transients: false }
    }

    #[test]
    fn picard_step() {
        let s = algorithm_step(AlgorithmKind::Picard, &third(), &pt(1.0), 0, &Schedules::default()).unwrap();
        assert_eq!(s.next.coords(), &[1.0 / 3.0]);
    }

    #[test]
    fn mann_step() {
        let s = algorithm_step(AlgorithmKind::Mann, &third(), &pt(1.0), 0, &half()).unwrap();
        assert!((s.next.coords()[0] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ishikawa_step() {
        let s = algorithm_step(AlgorithmKind::Ishikawa, &third(), &pt(1.0), 0, &half()).unwrap();
        assert!((s.y.unwrap().coords()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((s.next.coords()[0] - 11.0 / 18.0).abs() < 1e-15);
    }

    #[test]
    fn xunoor_step() {
        let s = algorithm_step(AlgorithmKind::XuNoor, &third(), &pt(1.0), 0, &half()).unwrap();
        assert!((s.z.unwrap().coords()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((s.y.unwrap().coords()[0] - 11.0 / 18.0).abs() < 1e-15);
        assert!((s.next.coords()[0] - 65.0 / 108.0).abs() < 1e-15);
    }

    #[test]
    fn missing_schedule() {
        let only_alpha = Schedules { alpha: Some(Schedule::Constant(0.5)), ..Default::default() };
        let err = algorithm_step(AlgorithmKind::Ishikawa, &third(), &pt(1.0), 0, &only_alpha).unwrap_err();
        assert_eq!(err, Error::MissingSchedule { kind: "ishikawa", which: "beta" });
        let err = algorithm_step(AlgorithmKind::Mann, &third(), &pt(1.0), 0, &Schedules::default()).unwrap_err();
        assert_eq!(err.to_string(), "mann requires a alpha schedule");
    }

    #[test]
    fn picard_run_distances() {
        let t = run_algorithm(AlgorithmKind::Picard, &third(), &pt(1.0), &Schedules::default(), &pt(0.0), opts(3)).unwrap();
        let want = [1.0, 1.0 / 3.0, 1.0 / 9.0, 1.0 / 27.0];
        assert_eq!(t.distances.len(), 4);
        for (d, w) in t.distances.iter().zip(want) {
            assert!((d - w).abs() < 1e-16);
        }
        assert_eq!(t.termination, Termination::MaxIterations);
        assert_eq!(t.iterations(), 3);
    }

    #[test]
    fn mann_run_distances() {
        let t = run_algorithm(AlgorithmKind::Mann, &third(), &pt(1.0), &half(), &pt(0.0), opts(2)).unwrap();
        assert!((t.distances[1] - 2.0 / 3.0).abs() < 1e-15);
        assert!((t.distances[2] - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn ishikawa_run_one_step() {
        let t = run_algorithm(AlgorithmKind::Ishikawa, &third(), &pt(1.0), &half(), &pt(0.0), opts(1)).unwrap();
        assert_eq!(t.distances.len(), 2);
        assert!((t.distances[1] - 11.0 / 18.0).abs() < 1e-15);
    }

    #[test]
    fn stops_at_tolerance() {
        let o = RunOptions { max_iter: 1000, tol: 1e-6, record_transients: false };
        let t = run_algorithm(AlgorithmKind::Picard, &third(), &pt(1.0), &Schedules::default(), &pt(0.0), o).unwrap();
        assert_eq!(t.termination, Termination::ToleranceReached);
        assert!(*t.distances.last().unwrap() <= 1e-6);
        assert_eq!(t.iterations(), 13); // 3^-13 < 1e-6 < 3^-12
    }

    #[test]
    fn rejects_non_fixed_p() {
        let err = run_algorithm(AlgorithmKind::Picard, &third(), &pt(1.0), &Schedules::default(), &pt(0.5), opts(3))
            .unwrap_err();
        assert!(matches!(err, Error::NotFixed { .. }));
    }

    #[test]
    fn transients_recorded_on_request() {
        let o = RunOptions { max_iter: 4, tol: 1e-300, record_transients: true };
        let t = run_algorithm(AlgorithmKind::XuNoor, &third(), &pt(1.0), &half(), &pt(0.0), o).unwrap();
        let tr = t.transients.unwrap();
        assert_eq!(tr.len(), 4);
        assert!(tr.iter().all(|(y, z)| y.is_some() && z.is_some()));
    }

    #[test]
    fn schedule_parsing() {
        assert_eq!("const:0.5".parse::<Schedule<f64>>().unwrap(), Schedule::Constant(0.5));
        assert_eq!("harmonic".parse::<Schedule<f64>>().unwrap(), Schedule::Harmonic);
        assert!(matches!("const:1.0".parse::<Schedule<f64>>(), Err(Error::ScheduleOutOfRange(_))));
        assert!(matches!("const:-0.1".parse::<Schedule<f64>>(), Err(Error::ScheduleOutOfRange(_))));
        assert!(matches!("linear".parse::<Schedule<f64>>(), Err(Error::InvalidParameter(_))));
        assert_eq!(Schedule::<f64>::Constant(0.25).to_string(), "const:0.25");
    }

    #[test]
    fn harmonic_terms() {
        let h = Schedule::<f64>::Harmonic;
        assert_eq!(h.term(0), 0.5);
        assert_eq!(h.term(2), 0.25);
    }

    #[test]
    fn generic_over_f32() {
        let m = resolve::<f32>("linear:q=1/3,p=0").unwrap().mapping;
        let o = RunOptions { max_iter: 10, tol: 1e-30f32, record_transients: false };
        let t = run_algorithm(AlgorithmKind::Picard, &m, &Point::scalar(1.0f32).unwrap(), &Schedules::default(), &Point::scalar(0.0).unwrap(), o)
            .unwrap();
        assert!((t.distances[3] - 1.0 / 27.0).abs() < 1e-7);
    }
}
