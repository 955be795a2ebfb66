//! Theoretical error envelopes for the four schemes and the ratio test used
//! to decide which of two sequences converges faster.
//!
//! Every envelope has the product form `bₙ = d₀ ∏_{k<n} fₖ` with per-step
//! factor `fₖ` built from `λ` and the schedule terms at step `k`:
//!
//! | kind                 | factor                                   |
//! |----------------------|------------------------------------------|
//! | `picard`             | `λ`                                      |
//! | `mann`               | `1 - (1-λ) αₖ`                           |
//! | `ishikawa`           | `1 - αₖ (1-λ)²`                          |
//! | `xunoor-convergence` | `1 - αₖ (1-λ)`                           |
//! | `xunoor-simple`      | `1 - αₖ (1-3λ)`                          |
//! | `xunoor-full`        | `1 - αₖ (1-3λ)(1 + 9λ² βₖ γₖ + 3λ βₖ)`   |
//!
//! The two `xunoor-*3λ` envelopes exceed 1 per step whenever `λ > 1/3`; such
//! sequences are kept but marked non-certifying.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::iteration::{AlgorithmKind, Schedules, Trajectory};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Picard,
    Mann,
    Ishikawa,
    XuNoorConvergence,
    XuNoorSimple,
    XuNoorFull,
}

impl BoundKind {
    pub const ALL: [BoundKind; 6] = [
        BoundKind::Picard,
        BoundKind::Mann,
        BoundKind::Ishikawa,
        BoundKind::XuNoorConvergence,
        BoundKind::XuNoorSimple,
        BoundKind::XuNoorFull,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Picard => "picard",
            BoundKind::Mann => "mann",
            BoundKind::Ishikawa => "ishikawa",
            BoundKind::XuNoorConvergence => "xunoor-convergence",
            BoundKind::XuNoorSimple => "xunoor-simple",
            BoundKind::XuNoorFull => "xunoor-full",
        }
    }

    /// The envelope that certifies convergence of `kind`.
    pub fn for_algorithm(kind: AlgorithmKind) -> BoundKind {
        match kind {
            AlgorithmKind::Picard => BoundKind::Picard,
            AlgorithmKind::Mann => BoundKind::Mann,
            AlgorithmKind::Ishikawa => BoundKind::Ishikawa,
            AlgorithmKind::XuNoor => BoundKind::XuNoorConvergence,
        }
    }

    pub fn algorithm(self) -> AlgorithmKind {
        match self {
            BoundKind::Picard => AlgorithmKind::Picard,
            BoundKind::Mann => AlgorithmKind::Mann,
            BoundKind::Ishikawa => AlgorithmKind::Ishikawa,
            BoundKind::XuNoorConvergence | BoundKind::XuNoorSimple | BoundKind::XuNoorFull => AlgorithmKind::XuNoor,
        }
    }

    fn factor<S: Scalar>(self, lambda: S, alpha: S, beta: S, gamma: S) -> S {
        let one = S::one();
        let three = S::lit(3.0);
        match self {
            BoundKind::Picard => lambda,
            BoundKind::Mann | BoundKind::XuNoorConvergence => one - (one - lambda) * alpha,
            BoundKind::Ishikawa => one - alpha * (one - lambda) * (one - lambda),
            BoundKind::XuNoorSimple => one - alpha * (one - three * lambda),
            BoundKind::XuNoorFull => {
                let inner = one + S::lit(9.0) * lambda * lambda * beta * gamma + three * lambda * beta;
                one - alpha * (one - three * lambda) * inner
            }
        }
    }

    fn require(self, schedules: &Schedules<impl Scalar>) -> Result<()> {
        let missing = |which| Err(Error::MissingSchedule { kind: self.as_str(), which });
        if self != BoundKind::Picard && schedules.alpha.is_none() {
            return missing("alpha");
        }
        if self == BoundKind::XuNoorFull {
            if schedules.beta.is_none() {
                return missing("beta");
            }
            if schedules.gamma.is_none() {
                return missing("gamma");
            }
        }
        Ok(())
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown bound kind: {s}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundSequence<S> {
    pub kind: BoundKind,
    pub lambda: S,
    pub d0: S,
    /// `b₀ .. b_N`.
    pub values: Vec<S>,
    /// `f₀ .. f_{N-1}`, with `b_{k+1} = b_k f_k`.
    pub factors: Vec<S>,
    /// Every factor lies in `[0, 1]`.
    pub certifying: bool,
}

pub fn bound_sequence<S: Scalar>(
    kind: BoundKind,
    lambda: S,
    d0: S,
    schedules: &Schedules<S>,
    steps: usize,
) -> Result<BoundSequence<S>> {
    if !(lambda >= S::zero() && lambda < S::one()) {
        return Err(Error::LambdaNotUsable { lambda: lambda.to_f64_lossy() });
    }
    if !(d0 >= S::zero()) || !d0.is_finite() {
        return Err(Error::NegativeDistance(d0.to_f64_lossy()));
    }
    kind.require(schedules)?;
    let term = |s: Option<crate::iteration::Schedule<S>>, k| s.map(|s| s.term(k)).unwrap_or_else(S::zero);

    let mut values = Vec::with_capacity(steps + 1);
    let mut factors = Vec::with_capacity(steps);
    values.push(d0);
    for k in 0..steps {
        let f = kind.factor(lambda, term(schedules.alpha, k), term(schedules.beta, k), term(schedules.gamma, k));
        factors.push(f);
        values.push(values[k] * f);
    }
    let certifying = factors.iter().all(|&f| f >= S::zero() && f <= S::one());
    Ok(BoundSequence { kind, lambda, d0, values, factors, certifying })
}

/// Largest `dₙ - bₙ` along the trajectory; `<= 0` means the envelope holds.
pub fn check_bound_dominance<S: Scalar>(traj: &Trajectory<S>, bound: &BoundSequence<S>) -> Result<S> {
    if !bound.certifying {
        return Err(Error::NonCertifying);
    }
    let d = &traj.distances;
    if d.len() > bound.values.len() {
        return Err(Error::LengthMismatch { left: d.len(), right: bound.values.len() });
    }
    if (d[0] - bound.d0).abs() > S::slack() * S::one().max(bound.d0) {
        return Err(Error::InvalidParameter(format!("trajectory starts at distance {} but bound at {}", d[0], bound.d0)));
    }
    Ok(d.iter().zip(&bound.values).map(|(&dn, &bn)| dn - bn).fold(S::neg_infinity(), S::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Faster,
    SameRate,
    Slower,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Faster => "faster",
            Verdict::SameRate => "same-rate",
            Verdict::Slower => "slower",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions<S> {
    /// First index of the tail window; `None` means half the length.
    pub tail_start: Option<usize>,
    pub faster_threshold: S,
    pub band: (S, S),
}

impl<S: Scalar> Default for CompareOptions<S> {
    fn default() -> Self {
        CompareOptions { tail_start: None, faster_threshold: S::lit(1e-6), band: (S::lit(1e-3), S::lit(1e3)) }
    }
}

/// Verdict on `a` relative to `b`, with the estimated limit of
/// `|aₙ - a*| / |bₙ - b*|` and the tail window `[tail_start, tail_end)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateVerdict<S> {
    pub verdict: Verdict,
    pub limit: S,
    pub tail_start: usize,
    pub tail_end: usize,
}

/// Errors below this are treated as exact zeros.
pub fn underflow_floor<S: Scalar>() -> S {
    S::lit(1e-300).max(S::min_positive_value())
}

/// `|aₙ - a*| / |bₙ - b*|` for every `n`, with the same zero conventions as
/// the comparison (`0/0` is NaN, `x/0` is `∞`).
pub fn error_ratios<S: Scalar>(a: &[S], b: &[S], limits: (S, S)) -> Vec<S> {
    let floor = underflow_floor::<S>();
    a.iter()
        .zip(b)
        .map(|(&an, &bn)| {
            let ea = clamp_zero((an - limits.0).abs(), floor);
            let eb = clamp_zero((bn - limits.1).abs(), floor);
            match (ea == S::zero(), eb == S::zero()) {
                (true, true) => S::nan(),
                (false, true) => S::infinity(),
                _ => ea / eb,
            }
        })
        .collect()
}

fn clamp_zero<S: Scalar>(e: S, floor: S) -> S {
    if e < floor {
        S::zero()
    } else {
        e
    }
}

fn decides_faster<S: Scalar>(tail: &[S], threshold: S) -> bool {
    let last = *tail.last().expect("tail is nonempty");
    last <= threshold && tail.windows(2).all(|w| w[1] <= w[0])
}

pub fn berinde_compare<S: Scalar>(a: &[S], b: &[S], limits: (S, S), opts: &CompareOptions<S>) -> Result<RateVerdict<S>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    let len = a.len();
    let tail_start = opts.tail_start.unwrap_or(len / 2);
    if tail_start >= len {
        return Err(Error::TailTooShort { tail_start });
    }
    let floor = underflow_floor::<S>();
    let err = |s: &[S], lim: S| -> Vec<S> { s.iter().map(|&v| clamp_zero((v - lim).abs(), floor)).collect() };
    let (ea, eb) = (err(a, limits.0), err(b, limits.1));
    let out = |verdict, limit| RateVerdict { verdict, limit, tail_start, tail_end: len };

    let tail = tail_start..len;
    if tail.clone().any(|n| eb[n] == S::zero() && ea[n] > S::zero()) {
        return Ok(out(Verdict::Slower, S::infinity()));
    }
    if tail.clone().any(|n| eb[n] == S::zero() && ea[n] == S::zero()) {
        let first_zero = |e: &[S]| e.iter().position(|&v| v == S::zero()).expect("a zero exists in the tail");
        let (za, zb) = (first_zero(&ea), first_zero(&eb));
        return Ok(match za.cmp(&zb) {
            std::cmp::Ordering::Less => out(Verdict::Faster, S::zero()),
            std::cmp::Ordering::Greater => out(Verdict::Slower, S::infinity()),
            std::cmp::Ordering::Equal => {
                let last = tail.rev().find(|&n| eb[n] > S::zero()).map(|n| ea[n] / eb[n]).unwrap_or_else(S::one);
                out(Verdict::SameRate, last)
            }
        });
    }

    let ratios: Vec<S> = tail.map(|n| ea[n] / eb[n]).collect();
    let last = *ratios.last().expect("tail is nonempty");
    if decides_faster(&ratios, opts.faster_threshold) {
        return Ok(out(Verdict::Faster, last));
    }
    let inverse: Vec<S> = ratios.iter().map(|&r| S::one() / r).collect();
    if decides_faster(&inverse, opts.faster_threshold) {
        return Ok(out(Verdict::Slower, last));
    }
    let (low, high) = opts.band;
    if ratios.iter().all(|&r| r >= low && r <= high) {
        return Ok(out(Verdict::SameRate, last));
    }
    Ok(out(Verdict::Inconclusive, last))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iteration::Schedule;

    fn alpha_half() -> Schedules<f64> {
        Schedules::constant(0.5, 0.5, 0.5).unwrap()
    }

    fn geometric(r: f64, scale: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|k| scale * r.powi(k as i32)).collect()
    }

    #[test]
    fn picard_bound() {
        let b = bound_sequence(BoundKind::Picard, 0.5, 1.0, &Schedules::default(), 3).unwrap();
        assert_eq!(b.values, vec![1.0, 0.5, 0.25, 0.125]);
        assert!(b.certifying);
    }

    #[test]
    fn mann_bound_is_three_quarters_power() {
        let b = bound_sequence(BoundKind::Mann, 0.5, 1.0, &alpha_half(), 4).unwrap();
        assert_eq!(b.values[4], 0.31640625);
    }

    #[test]
    fn xunoor_simple_above_one_third_is_non_certifying() {
        let b = bound_sequence(BoundKind::XuNoorSimple, 0.5, 1.0, &alpha_half(), 5).unwrap();
        assert_eq!(b.factors[0], 1.25);
        assert!(!b.certifying);
        let b = bound_sequence(BoundKind::XuNoorFull, 0.5, 1.0, &alpha_half(), 5).unwrap();
        assert!(!b.certifying);
    }

    #[test]
    fn xunoor_simple_with_zero_alpha_certifies() {
        let s = Schedules { alpha: Some(Schedule::Constant(0.0)), ..Default::default() };
        let b = bound_sequence(BoundKind::XuNoorSimple, 0.9, 1.0, &s, 5).unwrap();
        assert!(b.certifying);
    }

    #[test]
    fn bound_errors() {
        assert!(matches!(
            bound_sequence(BoundKind::Picard, 1.0, 1.0, &Schedules::default(), 3),
            Err(Error::LambdaNotUsable { .. })
        ));
        assert!(matches!(
            bound_sequence(BoundKind::Picard, 0.5, -1.0, &Schedules::default(), 3),
            Err(Error::NegativeDistance(_))
        ));
        assert!(matches!(
            bound_sequence(BoundKind::Mann, 0.5, 1.0, &Schedules::default(), 3),
            Err(Error::MissingSchedule { .. })
        ));
        let only_alpha = Schedules { alpha: Some(Schedule::Constant(0.5)), ..Default::default() };
        assert!(bound_sequence(BoundKind::XuNoorFull, 0.2, 1.0, &only_alpha, 3).is_err());
        assert!(bound_sequence(BoundKind::XuNoorSimple, 0.2, 1.0, &only_alpha, 3).is_ok());
    }

    #[test]
    fn geometric_faster() {
        let a = geometric(0.5, 1.0, 200);
        let b = geometric(0.75, 1.0, 200);
        let v = berinde_compare(&a, &b, (0.0, 0.0), &CompareOptions { tail_start: Some(50), ..Default::default() }).unwrap();
        assert_eq!(v.verdict, Verdict::Faster);
        assert!((v.limit / (2.0f64 / 3.0).powi(200) - 1.0).abs() < 1e-12);
        let v = berinde_compare(&b, &a, (0.0, 0.0), &CompareOptions { tail_start: Some(50), ..Default::default() }).unwrap();
        assert_eq!(v.verdict, Verdict::Slower);
    }

    #[test]
    fn identical_sequences_same_rate() {
        let a = geometric(0.75, 1.0, 200);
        let v = berinde_compare(&a, &a, (0.0, 0.0), &CompareOptions::default()).unwrap();
        assert_eq!(v.verdict, Verdict::SameRate);
        assert_eq!(v.limit, 1.0);
    }

    #[test]
    fn constant_ratio_same_rate() {
        let a = geometric(0.75, 2.0, 200);
        let b = geometric(0.75, 1.0, 200);
        let v = berinde_compare(&a, &b, (0.0, 0.0), &CompareOptions::default()).unwrap();
        assert_eq!(v.verdict, Verdict::SameRate);
        assert!((v.limit - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nonzero_limits() {
        let a: Vec<f64> = geometric(0.5, 1.0, 100).iter().map(|v| v + 3.0).collect();
        let b: Vec<f64> = geometric(0.9, 1.0, 100).iter().map(|v| v - 1.0).collect();
        let v = berinde_compare(&a, &b, (3.0, -1.0), &CompareOptions::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Faster);
    }

    #[test]
    fn oscillating_ratio_inconclusive() {
        let a: Vec<f64> = (0..100).map(|k| if k % 2 == 0 { 1e-5 } else { 1e5 }).collect();
        let b = vec![1.0; 100];
        let v = berinde_compare(&a, &b, (0.0, 0.0), &CompareOptions::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn underflow_uses_first_zero_index() {
        let mut a = geometric(0.5, 1.0, 40);
        let mut b = geometric(0.5, 1.0, 40);
        a[20..].iter_mut().for_each(|v| *v = 0.0);
        b[30..].iter_mut().for_each(|v| *v = 0.0);
        let v = berinde_compare(&a, &b, (0.0, 0.0), &CompareOptions::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Faster);
        let v = berinde_compare(&b, &a, (0.0, 0.0), &CompareOptions::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Slower);
        let v = berinde_compare(&a, &a, (0.0, 0.0), &CompareOptions::default()).unwrap();
        assert_eq!(v.verdict, Verdict::SameRate);
    }

    #[test]
    fn b_zero_a_positive_is_slower() {
        let a = vec![1.0f64; 10];
        let mut b = vec![1.0; 10];
        b[9] = 0.0;
        let v = berinde_compare(&a, &b, (0.0, 0.0), &CompareOptions::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Slower);
        assert!(v.limit.is_infinite());
    }

    #[test]
    fn compare_errors() {
        assert!(matches!(
            berinde_compare(&[1.0, 2.0], &[1.0], (0.0, 0.0), &CompareOptions::default()),
            Err(Error::LengthMismatch { .. })
        ));
        let opts = CompareOptions { tail_start: Some(5), ..Default::default() };
        assert!(matches!(berinde_compare(&[1.0; 3], &[1.0; 3], (0.0, 0.0), &opts), Err(Error::TailTooShort { .. })));
    }

    #[test]
    fn ratios_conventions() {
        let r = error_ratios(&[0.0f64, 1.0, 2.0], &[0.0, 0.0, 4.0], (0.0, 0.0));
        assert!(r[0].is_nan());
        assert!(r[1].is_infinite());
        assert_eq!(r[2], 0.5);
    }
}
