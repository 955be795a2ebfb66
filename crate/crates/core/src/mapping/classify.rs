//! Brute-force class checks over every ordered pair of a uniform grid.
//!
//! Results are estimates on the grid, never certificates for all of `K`.

use super::{ClassParams, ContractiveMapping, MappingClass};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::Point;

/// Distances entering the class inequalities for one ordered pair.
#[derive(Debug, Clone, Copy)]
struct PairTerms<S> {
    txty: S,
    xy: S,
    xtx: S,
    yty: S,
    xty: S,
    ytx: S,
}

/// `0/0 = 0`, `positive/0 = ∞`.
fn ratio<S: Scalar>(num: S, den: S) -> S {
    if num <= S::zero() {
        S::zero()
    } else if den <= S::zero() {
        S::infinity()
    } else {
        num / den
    }
}

impl<S: Scalar> PairTerms<S> {
    fn denominator(&self, class: MappingClass) -> S {
        match class {
            MappingClass::Contraction => self.xy,
            MappingClass::Cq => self.xy.max(self.xtx).max(self.yty).max(self.xty).max(self.ytx),
            MappingClass::GeneralizedContractive => self.xy.max(self.xtx).max(self.yty).max(self.xty + self.ytx),
            MappingClass::GeneralizedCq => self.xy.max(self.xtx + self.yty).max(self.xty + self.ytx),
            MappingClass::Zamfirescu => unreachable!("Zamfirescu is a disjunction, see zamfirescu_ratio"),
        }
    }

    /// Smallest common parameter that satisfies at least one Zamfirescu branch.
    fn zamfirescu_ratio(&self) -> S {
        ratio(self.txty, self.xy)
            .min(ratio(self.txty, self.xtx + self.yty))
            .min(ratio(self.txty, self.xty + self.ytx))
    }

    fn class_ratio(&self, class: MappingClass) -> S {
        match class {
            MappingClass::Zamfirescu => self.zamfirescu_ratio(),
            c => ratio(self.txty, self.denominator(c)),
        }
    }
}

/// Grid points, their images, and `d(x, Tx)`, computed once per scan.
struct GridScan<'m, S> {
    m: &'m ContractiveMapping<S>,
    points: Vec<Point<S>>,
    images: Vec<Point<S>>,
    displacement: Vec<S>,
}

impl<'m, S: Scalar> GridScan<'m, S> {
    fn new(m: &'m ContractiveMapping<S>, grid_size: usize) -> Result<Self> {
        let points = m.domain().grid(m.space(), grid_size)?;
        let images = points.iter().map(|p| m.apply(p)).collect::<Result<Vec<_>>>()?;
        let space = m.space();
        let displacement = points.iter().zip(&images).map(|(p, tp)| space.distance(p, tp)).collect::<Result<_>>()?;
        Ok(GridScan { m, points, images, displacement })
    }

    fn terms(&self, i: usize, j: usize) -> PairTerms<S> {
        let d = |a: &Point<S>, b: &Point<S>| self.m.space().distance_unchecked(a, b);
        PairTerms {
            txty: d(&self.images[i], &self.images[j]),
            xy: d(&self.points[i], &self.points[j]),
            xtx: self.displacement[i],
            yty: self.displacement[j],
            xty: d(&self.points[i], &self.images[j]),
            ytx: d(&self.points[j], &self.images[i]),
        }
    }

    fn for_each_pair(&self, mut f: impl FnMut(usize, usize, PairTerms<S>)) {
        let n = self.points.len();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    f(i, j, self.terms(i, j));
                }
            }
        }
    }

    fn pair_count(&self) -> usize {
        let n = self.points.len();
        n * (n - 1)
    }
}

/// Outcome for one class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassEntry<S> {
    pub class: MappingClass,
    /// `None` when the check needs a parameter that was not supplied.
    pub holds: Option<bool>,
    /// Sup over pairs of the smallest admissible parameter. For Zamfirescu
    /// this is the common-parameter surrogate, not the exact `(a, b, c)` test.
    pub min_param: S,
    /// Number of pairs violating the check with the supplied parameter.
    pub violations: usize,
    /// The pair attaining `min_param`.
    pub worst_pair: Option<(Point<S>, Point<S>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport<S> {
    pub grid_points: usize,
    pub pair_count: usize,
    pub params: ClassParams<S>,
    pub entries: Vec<ClassEntry<S>>,
}

impl<S: Scalar> ClassificationReport<S> {
    pub fn entry(&self, class: MappingClass) -> &ClassEntry<S> {
        self.entries.iter().find(|e| e.class == class).expect("every class is reported")
    }

    pub fn holds(&self, class: MappingClass) -> Option<bool> {
        self.entry(class).holds
    }
}

/// Checks every class on all ordered pairs of a `grid_size` grid.
///
/// With `h` supplied, the h-classes are tested as `d(Tx,Ty) <= h * max{..} + slack`
/// (the contraction check uses `h`, or `a` when only Zamfirescu constants are
/// given). Without a parameter, an h-class holds iff its grid estimate is
/// below 1. The exact Zamfirescu check runs only when `(a, b, c)` is supplied.
pub fn classify_mapping<S: Scalar>(
    m: &ContractiveMapping<S>,
    grid_size: usize,
    params: &ClassParams<S>,
) -> Result<ClassificationReport<S>> {
    let scan = GridScan::new(m, grid_size)?;
    let slack = S::slack();

    struct Acc<S> {
        sup: S,
        arg: Option<(usize, usize)>,
        violations: usize,
    }
    let mut acc: Vec<Acc<S>> =
        MappingClass::ALL.iter().map(|_| Acc { sup: S::zero(), arg: None, violations: 0 }).collect();

    let contraction_param = params.h.or(params.zamfirescu.map(|z| z.a));

    scan.for_each_pair(|i, j, t| {
        for (k, &class) in MappingClass::ALL.iter().enumerate() {
            let r = t.class_ratio(class);
            if r > acc[k].sup || acc[k].arg.is_none() {
                acc[k].sup = acc[k].sup.max(r);
                acc[k].arg = Some((i, j));
            }
            let violated = match class {
                MappingClass::Zamfirescu => params.zamfirescu.is_some_and(|z| {
                    !(t.txty <= z.a * t.xy + slack
                        || t.txty <= z.b * (t.xtx + t.yty) + slack
                        || t.txty <= z.c * (t.xty + t.ytx) + slack)
                }),
                MappingClass::Contraction => contraction_param.is_some_and(|h| t.txty > h * t.xy + slack),
                c => params.h.is_some_and(|h| t.txty > h * t.denominator(c) + slack),
            };
            if violated {
                acc[k].violations += 1;
            }
        }
    });

    let entries = MappingClass::ALL
        .iter()
        .zip(acc)
        .map(|(&class, a)| {
            let supplied = match class {
                MappingClass::Zamfirescu => params.zamfirescu.is_some(),
                MappingClass::Contraction => contraction_param.is_some(),
                _ => params.h.is_some(),
            };
            let holds = if supplied {
                Some(a.violations == 0)
            } else if class == MappingClass::Zamfirescu {
                None
            } else {
                Some(a.sup < S::one())
            };
            ClassEntry {
                class,
                holds,
                min_param: a.sup,
                violations: a.violations,
                worst_pair: a.arg.map(|(i, j)| (scan.points[i].clone(), scan.points[j].clone())),
            }
        })
        .collect();

    Ok(ClassificationReport { grid_points: scan.points.len(), pair_count: scan.pair_count(), params: *params, entries })
}

/// Smallest parameter making every grid pair satisfy `class`, or `∞`.
pub fn estimate_min_h<S: Scalar>(m: &ContractiveMapping<S>, class: MappingClass, grid_size: usize) -> Result<S> {
    let scan = GridScan::new(m, grid_size)?;
    let mut sup = S::zero();
    scan.for_each_pair(|_, _, t| sup = sup.max(t.class_ratio(class)));
    Ok(sup)
}

/// Worst excess over the grid of
/// `d(Tx,Ty) <= λ d(x,y) + 2λ d(x,Tx)` and `d(Tx,Ty) <= λ d(x,y) + 2λ d(y,Tx)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyEstimateResiduals<S> {
    pub via_displacement: S,
    pub via_cross: S,
}

pub fn verify_key_estimates<S: Scalar>(
    m: &ContractiveMapping<S>,
    lambda: S,
    grid_size: usize,
) -> Result<KeyEstimateResiduals<S>> {
    if !(lambda >= S::zero() && lambda < S::one()) {
        return Err(Error::LambdaNotUsable { lambda: lambda.to_f64_lossy() });
    }
    let scan = GridScan::new(m, grid_size)?;
    let two = S::one() + S::one();
    let mut out = KeyEstimateResiduals { via_displacement: S::zero(), via_cross: S::zero() };
    scan.for_each_pair(|_, _, t| {
        let base = lambda * t.xy;
        out.via_displacement = out.via_displacement.max(t.txty - base - two * lambda * t.xtx);
        out.via_cross = out.via_cross.max(t.txty - base - two * lambda * t.ytx);
    });
    Ok(out)
}
