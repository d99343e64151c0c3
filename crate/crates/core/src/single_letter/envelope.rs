//! Concave majorants of sampled rate curves.
//!
//! The envelope is the exact upper hull of the sampled points, which is the
//! discrete form of time-sharing between operating points: wherever the
//! hull bridges over samples, a chord of achievable points dominates the
//! curve itself.

use serde::Serialize;

use crate::error::{Error, Result};

/// A rate curve sampled on a strictly increasing weight grid.
#[derive(Clone, Debug, Serialize)]
pub struct RegionCurve {
    pub q_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Whether `values` already holds an envelope rather than raw samples.
    pub envelope_applied: bool,
    /// Weights where an envelope switches between chord and curve; empty
    /// for raw samples.
    pub breakpoints: Vec<f64>,
}

impl RegionCurve {
    pub fn new(q_grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if q_grid.len() != values.len() {
            return Err(Error::DimensionMismatch {
                context: "RegionCurve::new",
                expected: q_grid.len(),
                actual: values.len(),
            });
        }
        if q_grid.len() < 2 {
            return Err(Error::Config("need at least two grid points".into()));
        }
        if q_grid.iter().any(|q| !(0.0..=0.5).contains(q)) {
            return Err(Error::Config("grid points must lie in [0, 1/2]".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("values must be finite".into()));
        }
        if q_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedGrid);
        }
        Ok(RegionCurve {
            q_grid,
            values,
            envelope_applied: false,
            breakpoints: vec![],
        })
    }

    pub fn len(&self) -> usize {
        self.q_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Midpoint concavity: every interior value sits on or above the chord
    /// of its neighbors, within `tol`.
    pub fn is_concave(&self, tol: f64) -> bool {
        (1..self.len() - 1).all(|i| {
            let (q0, q1, q2) = (self.q_grid[i - 1], self.q_grid[i], self.q_grid[i + 1]);
            let t = (q1 - q0) / (q2 - q0);
            let chord = self.values[i - 1] * (1.0 - t) + self.values[i + 1] * t;
            self.values[i] >= chord - tol
        })
    }
}

/// Cross product of the displacement pair `(a -> b, a -> c)`; positive when
/// `b` lies below the segment `a -> c`.
fn cross(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Upper convex envelope of the sampled curve via a monotone-chain upper
/// hull. Values at hull vertices are kept exactly; points under a bridge
/// are lifted onto the chord. Breakpoints record the interior hull vertices
/// where a bridge starts or ends.
pub fn upper_convex_envelope(curve: &RegionCurve) -> Result<RegionCurve> {
    let n = curve.len();
    let point = |i: usize| (curve.q_grid[i], curve.values[i]);

    let mut hull: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        while hull.len() >= 2
            && cross(
                point(hull[hull.len() - 2]),
                point(hull[hull.len() - 1]),
                point(i),
            ) >= 0.0
        {
            hull.pop();
        }
        hull.push(i);
    }

    let mut values = curve.values.clone();
    for seg in hull.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let (qa, va) = point(a);
        let (qb, vb) = point(b);
        for (q, value) in curve.q_grid[a + 1..b].iter().zip(&mut values[a + 1..b]) {
            let t = (q - qa) / (qb - qa);
            *value = (va * (1.0 - t) + vb * t).max(*value);
        }
    }

    let mut breakpoints = vec![];
    for w in hull.windows(3) {
        let bridging = w[1] - w[0] > 1 || w[2] - w[1] > 1;
        if bridging {
            breakpoints.push(curve.q_grid[w[1]]);
        }
    }

    Ok(RegionCurve {
        q_grid: curve.q_grid.clone(),
        values,
        envelope_applied: true,
        breakpoints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::single_letter::{critical_constants, hb};

    #[test]
    fn validation_rejects_bad_curves() {
        assert!(RegionCurve::new(vec![0.0, 0.1], vec![0.0]).is_err());
        assert!(RegionCurve::new(vec![0.0], vec![0.0]).is_err());
        assert!(matches!(
            RegionCurve::new(vec![0.1, 0.1], vec![0.0, 0.0]),
            Err(Error::UnsortedGrid)
        ));
        assert!(RegionCurve::new(vec![0.0, f64::NAN], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn concave_input_is_unchanged() {
        let q: Vec<f64> = (0..=100).map(|i| i as f64 / 200.0).collect();
        let v: Vec<f64> = q.iter().map(|&x| hb(x)).collect();
        let curve = RegionCurve::new(q, v.clone()).unwrap();
        assert!(curve.is_concave(1e-12));
        let env = upper_convex_envelope(&curve).unwrap();
        assert!(env.envelope_applied);
        assert!(env.breakpoints.is_empty());
        for (a, b) in env.values.iter().zip(&v) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn two_points_give_the_chord() {
        let curve = RegionCurve::new(vec![0.0, 0.5], vec![0.0, 1.0]).unwrap();
        let env = upper_convex_envelope(&curve).unwrap();
        assert_eq!(env.values, vec![0.0, 1.0]);
        assert!(env.breakpoints.is_empty());
    }

    #[test]
    fn bridge_lifts_the_dip() {
        let curve = RegionCurve::new(vec![0.0, 0.25, 0.5], vec![0.0, 0.2, 1.0]).unwrap();
        let env = upper_convex_envelope(&curve).unwrap();
        assert_eq!(env.values, vec![0.0, 0.5, 1.0]);
        assert!(env.is_concave(1e-15));
    }

    #[test]
    fn envelope_dominates_and_is_idempotent() {
        // A deliberately wiggly curve.
        let q: Vec<f64> = (0..=60).map(|i| i as f64 / 120.0).collect();
        let v: Vec<f64> = q
            .iter()
            .map(|&x| (20.0 * x).sin().abs() * 0.3 + x)
            .collect();
        let curve = RegionCurve::new(q, v).unwrap();
        let env = upper_convex_envelope(&curve).unwrap();
        assert!(env.is_concave(1e-12));
        for (e, v) in env.values.iter().zip(&curve.values) {
            assert!(e >= v);
        }
        let again = upper_convex_envelope(&env).unwrap();
        for (a, b) in again.values.iter().zip(&env.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn clamped_curve_envelope_recovers_the_chord_and_tangency() {
        // Envelope of [2 H_b(q) - 1]^+ sampled finely: a chord from the
        // origin up to the tangency weight, the curve beyond it.
        let cc = critical_constants();
        let n = 1000;
        let q: Vec<f64> = (0..=n).map(|i| 0.5 * i as f64 / n as f64).collect();
        let v: Vec<f64> = q.iter().map(|&x| (2.0 * hb(x) - 1.0).max(0.0)).collect();
        let curve = RegionCurve::new(q.clone(), v).unwrap();
        let env = upper_convex_envelope(&curve).unwrap();
        for (i, &qi) in q.iter().enumerate() {
            let closed_form = if qi < cc.tangency_weight {
                cc.chord_slope * qi
            } else {
                2.0 * hb(qi) - 1.0
            };
            assert!(
                (env.values[i] - closed_form).abs() < 1e-5,
                "envelope off at q = {qi}"
            );
        }
        assert_eq!(env.breakpoints.len(), 1);
        assert!((env.breakpoints[0] - cc.tangency_weight).abs() < 2.0 * 0.5 / n as f64);
    }
}
