//! Upper half-plane `{(x, y) : y > 0}` with metric `ds² = (dx² + dy²) / y²`.

use crate::scalar::{asinh_stable, Scalar};

/// `arcosh(1 + |a-b|² / (2 y_a y_b))`, evaluated as
/// `2 asinh(|a-b| / (2 sqrt(y_a y_b)))` to keep precision for close pairs.
pub(super) fn distance<S: Scalar>(a: &[S], b: &[S]) -> S {
    let two = S::one() + S::one();
    let dx = b[0] - a[0];
    let dy = b[1] - a[1];
    let chord = dx.hypot(dy);
    two * asinh_stable(chord / (two * (a[1] * b[1]).sqrt()))
}

/// Point at distance `(1 - alpha) d` from `a` toward `b`, where `d = d(a, b) > 0`.
///
/// Uses the hyperboloid chart `(x, y) -> ((x²+y²+1)/2y, x/y, (x²+y²-1)/2y)`:
/// the geodesic there is `(sinh(alpha d) A + sinh((1-alpha) d) B) / sinh d`,
/// and pulling back only needs the combinations `1/y` and `x/y`, which are
/// linear in the hyperboloid coordinates. Both vertical rays and semicircles
/// are covered without a case split.
pub(super) fn geodesic_point<S: Scalar>(a: &[S], b: &[S], d: S, alpha: S) -> [S; 2] {
    let sd = d.sinh();
    let wa = (alpha * d).sinh() / sd;
    let wb = ((S::one() - alpha) * d).sinh() / sd;
    let inv_y = wa / a[1] + wb / b[1];
    let x_over_y = wa * a[0] / a[1] + wb * b[0] / b[1];
    [x_over_y / inv_y, S::one() / inv_y]
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent route: walk the vertical ray or the semicircle centred on
    /// the real axis using arc-length `s = ln tan(θ/2)` along the circle
    /// (or `s = ln y` on a vertical ray).
    fn semicircle_oracle(a: [f64; 2], b: [f64; 2], alpha: f64) -> [f64; 2] {
        let t = 1.0 - alpha;
        if (a[0] - b[0]).abs() <= 1e-12 {
            let s = a[1].ln() + t * (b[1].ln() - a[1].ln());
            return [a[0], s.exp()];
        }
        let c = (b[0] * b[0] + b[1] * b[1] - a[0] * a[0] - a[1] * a[1]) / (2.0 * (b[0] - a[0]));
        let r = ((a[0] - c).powi(2) + a[1] * a[1]).sqrt();
        let theta = |p: [f64; 2]| p[1].atan2(p[0] - c);
        let s_of = |th: f64| (th / 2.0).tan().ln();
        let (sa, sb) = (s_of(theta(a)), s_of(theta(b)));
        let th = 2.0 * (sa + t * (sb - sa)).exp().atan();
        [c + r * th.cos(), r * th.sin()]
    }

    fn dist_closed_form(a: [f64; 2], b: [f64; 2]) -> f64 {
        let q = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)) / (2.0 * a[1] * b[1]);
        (1.0 + q).acosh()
    }

    #[test]
    fn distance_agrees_with_arcosh_form() {
        let pairs = [([0.0, 1.0], [3.0, 2.0]), ([-4.0, 0.2], [5.0, 7.0]), ([1.0, 1.0], [1.5, 0.3])];
        for (a, b) in pairs {
            let d = distance(&a, &b);
            assert!((d - dist_closed_form(a, b)).abs() < 1e-12 * d.max(1.0));
        }
    }

    #[test]
    fn vertical_pairs_match_log_ratio() {
        for &(y1, y2) in &[(1.0f64, 2.0), (0.1, 10.0), (3.0, 0.25), (1.0, 1.0 + 1e-9)] {
            let d = distance(&[0.7, y1], &[0.7, y2]);
            let exact = (y2 / y1).ln().abs();
            assert!((d - exact).abs() <= 1e-12 * exact, "{y1} {y2}: {d} vs {exact}");
        }
    }

    #[test]
    fn hyperboloid_route_matches_semicircle_route() {
        let cases = [
            ([0.0, 1.0], [2.0, 1.0]),
            ([-3.0, 0.5], [4.0, 2.5]),
            ([1.0, 0.2], [1.0, 5.0]),
            ([-1.0, 3.0], [1.0, 3.0]),
        ];
        for (a, b) in cases {
            let d = distance(&a, &b);
            for k in 0..=10 {
                let alpha = k as f64 / 10.0;
                let p = geodesic_point(&a, &b, d, alpha);
                let q = semicircle_oracle(a, b, alpha);
                assert!((p[0] - q[0]).abs() < 1e-10 && (p[1] - q[1]).abs() < 1e-10, "{a:?} {b:?} {alpha}: {p:?} vs {q:?}");
            }
        }
    }

    #[test]
    fn geodesic_point_splits_distance() {
        let (a, b) = ([-2.0f64, 0.4], [6.0, 3.0]);
        let d = distance(&a, &b);
        for &alpha in &[0.1f64, 0.25, 0.5, 0.9] {
            let m = geodesic_point(&a, &b, d, alpha);
            assert!((distance(&a, &m) - (1.0 - alpha) * d).abs() < 1e-12);
            assert!((distance(&b, &m) - alpha * d).abs() < 1e-12);
        }
    }
}
