//! Named mappings, addressable as `name[:key=value[,key=value]*]`.
//!
//! | name             | keys                      | space      | domain            | fixed point |
//! |------------------|---------------------------|------------|-------------------|-------------|
//! | `linear`         | `q`, `p=0`, `lo`, `hi`    | line       | `[p-1, p+1]`      | `p`         |
//! | `qc1`            |                           | line       | `[0, 1]`          | `0`         |
//! | `constant`       | `c=0`, `lo`, `hi`         | line       | `[c-1, c+1]`      | `c`         |
//! | `identity`       | `lo=-1`, `hi=1`           | line       | `[lo, hi]`        | `0` if inside, else `lo` |
//! | `halfplane-pull` | `q`, `px=0`, `py=1`       | half-plane | whole             | `(px, py)`  |
//!
//! `linear` is `x ↦ qx + (1-q)p`, declared generalized C^q with `h = q`.
//! `halfplane-pull` is `x ↦ W(p, x, q)` with `q ∈ (1/2, 1)`, a contraction
//! with constant `1-q`, declared generalized C^q with `h = 1-q`.
//! `qc1` (`x/2` on `[0, 1/2)`, `0` on `[1/2, 1]`) and `identity` carry no a
//! priori class: their `h` is the classifier's estimate on a
//! [`CERTIFICATE_GRID`]-point grid. Any entry accepts `h=` to override the
//! declared parameter. Values may be decimals or fractions such as `1/3`.

use super::{classify::estimate_min_h, ClassParams, ContractiveMapping, Domain, MappingClass};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{Point, SpaceModel};

/// Grid size used when the catalog derives a class parameter by brute force.
pub const CERTIFICATE_GRID: usize = 257;

#[derive(Debug, Clone)]
pub struct CatalogEntry<S> {
    pub mapping: ContractiveMapping<S>,
    /// True when `h` came from the grid classifier rather than being declared.
    pub classifier_certified: bool,
}

struct Args<'a> {
    name: &'a str,
    pairs: Vec<(&'a str, f64)>,
    used: Vec<bool>,
}

impl<'a> Args<'a> {
    fn parse(spec: &'a str) -> Result<Self> {
        let spec = spec.trim();
        let (name, rest) = match spec.split_once(':') {
            Some((n, r)) => (n, Some(r)),
            None => (spec, None),
        };
        let mut pairs = Vec::new();
        if let Some(rest) = rest {
            for item in rest.split(',') {
                let (k, v) = item
                    .split_once('=')
                    .ok_or_else(|| Error::UnknownMapping(format!("{spec}: expected key=value, got '{item}'")))?;
                let k = k.trim();
                if pairs.iter().any(|(seen, _)| *seen == k) {
                    return Err(Error::UnknownMapping(format!("{spec}: duplicate key '{k}'")));
                }
                pairs.push((k, parse_value(v.trim()).map_err(|e| Error::UnknownMapping(format!("{spec}: {e}")))?));
            }
        }
        let used = vec![false; pairs.len()];
        Ok(Args { name: name.trim(), pairs, used })
    }

    fn get(&mut self, key: &str) -> Option<f64> {
        let i = self.pairs.iter().position(|(k, _)| *k == key)?;
        self.used[i] = true;
        Some(self.pairs[i].1)
    }

    fn require(&mut self, key: &str) -> Result<f64> {
        self.get(key).ok_or_else(|| Error::UnknownMapping(format!("{} requires '{key}'", self.name)))
    }

    fn finish(&self) -> Result<()> {
        match self.pairs.iter().zip(&self.used).find(|(_, used)| !**used) {
            Some(((k, _), _)) => Err(Error::UnknownMapping(format!("{} does not take '{k}'", self.name))),
            None => Ok(()),
        }
    }
}

/// Parses `1.5`, `-2e-3`, or `1/3`.
pub(crate) fn parse_value(v: &str) -> std::result::Result<f64, String> {
    let out = match v.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| format!("bad number '{v}'"))?;
            let d: f64 = d.trim().parse().map_err(|_| format!("bad number '{v}'"))?;
            n / d
        }
        None => v.parse().map_err(|_| format!("bad number '{v}'"))?,
    };
    if out.is_finite() {
        Ok(out)
    } else {
        Err(format!("non-finite value '{v}'"))
    }
}

fn line_point<S: Scalar>(v: S) -> Point<S> {
    Point::scalar(v).expect("finite image of a finite point")
}

pub fn resolve<S: Scalar>(spec: &str) -> Result<CatalogEntry<S>> {
    let mut args = Args::parse(spec)?;
    let h_override = args.get("h").map(S::lit);
    let line = || SpaceModel::<S>::euclidean(1).expect("dimension 1");

    let (mapping, declared_h, fixed) = match args.name {
        "linear" => {
            let q = S::lit(args.require("q")?);
            let p = S::lit(args.get("p").unwrap_or(0.0));
            let lo = args.get("lo").map(S::lit).unwrap_or(p - S::one());
            let hi = args.get("hi").map(S::lit).unwrap_or(p + S::one());
            if !(q >= S::zero() && q < S::one()) {
                return Err(Error::UnknownMapping(format!("{spec}: q must lie in [0, 1)")));
            }
            if !(lo <= p && p <= hi) {
                return Err(Error::UnknownMapping(format!("{spec}: p must lie in [lo, hi]")));
            }
            let rest = S::one() - q;
            let m = ContractiveMapping::new(spec, line(), Domain::interval(lo, hi)?, move |x| {
                line_point(q * x.coords()[0] + rest * p)
            });
            (m, Some(q), line_point(p))
        }
        "qc1" => {
            let half = S::lit(0.5);
            let m = ContractiveMapping::new(spec, line(), Domain::interval(S::zero(), S::one())?, move |x| {
                let v = x.coords()[0];
                line_point(if v < half { v / (S::one() + S::one()) } else { S::zero() })
            });
            (m, None, line_point(S::zero()))
        }
        "constant" => {
            let c = S::lit(args.get("c").unwrap_or(0.0));
            let lo = args.get("lo").map(S::lit).unwrap_or(c - S::one());
            let hi = args.get("hi").map(S::lit).unwrap_or(c + S::one());
            if !(lo <= c && c <= hi) {
                return Err(Error::UnknownMapping(format!("{spec}: c must lie in [lo, hi]")));
            }
            let m = ContractiveMapping::new(spec, line(), Domain::interval(lo, hi)?, move |_| line_point(c));
            (m, Some(S::zero()), line_point(c))
        }
        "identity" => {
            let lo = S::lit(args.get("lo").unwrap_or(-1.0));
            let hi = S::lit(args.get("hi").unwrap_or(1.0));
            let m = ContractiveMapping::new(spec, line(), Domain::interval(lo, hi)?, |x| x.clone());
            let p = if lo <= S::zero() && S::zero() <= hi { S::zero() } else { lo };
            (m, None, line_point(p))
        }
        "halfplane-pull" => {
            let q = S::lit(args.require("q")?);
            if !(q > S::lit(0.5) && q < S::one()) {
                return Err(Error::UnknownMapping(format!("{spec}: q must lie in (1/2, 1)")));
            }
            let base = Point::halfplane(S::lit(args.get("px").unwrap_or(0.0)), S::lit(args.get("py").unwrap_or(1.0)))?;
            let space = SpaceModel::<S>::halfplane();
            let domain = Domain::Whole { grid_lo: vec![S::lit(-5.0), S::lit(0.2)], grid_hi: vec![S::lit(5.0), S::lit(5.0)] };
            let (sp, b) = (space.clone(), base.clone());
            let m = ContractiveMapping::new(spec, space, domain, move |x| {
                sp.combine_unchecked(&b, x, q).expect("geodesic between valid half-plane points")
            });
            (m, Some(S::one() - q), base)
        }
        other => return Err(Error::UnknownMapping(other.to_string())),
    };
    args.finish()?;

    let mapping = mapping.with_fixed_point(fixed)?;
    let (h, classifier_certified) = match (h_override, declared_h) {
        (Some(h), _) => (h, false),
        (None, Some(h)) => (h, false),
        (None, None) => (estimate_min_h(&mapping, MappingClass::GeneralizedCq, CERTIFICATE_GRID)?, true),
    };
    let mapping = if h < S::one() { mapping.declare(MappingClass::GeneralizedCq, ClassParams::with_h(h)?)? } else { mapping };
    Ok(CatalogEntry { mapping, classifier_certified })
}
