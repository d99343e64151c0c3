//! Single-letter rate expressions for the two-user channel: the capacity
//! sum, the binning-rate functional and its maximization, the closed-form
//! envelope with its critical constants, and the one-dirty-user capacity.
//!
//! All entropies and rates are in bits. Weights and crossover probabilities
//! live in `[0, 1/2]` unless a wider domain is stated.

mod envelope;
mod pentagon;

pub use envelope::{upper_convex_envelope, RegionCurve};
pub use pentagon::{pentagon_bounds, AuxChannelSpec, PentagonBounds, DEFAULT_MAX_AUX};

use serde::Serialize;

use crate::error::{Error, Result};

/// Default grid resolution for the binning-rate maximization.
pub const DEFAULT_BINNING_RESOLUTION: usize = 1024;

/// Entropy of a coin with bias `p`, assuming `p` is already in `[0, 1]`.
pub(crate) fn hb(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

fn check_unit(name: &'static str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain {
            name,
            value: p,
            range: "[0, 1]",
        });
    }
    Ok(())
}

fn check_half(name: &'static str, p: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::Domain {
            name,
            value: p,
            range: "[0, 1/2]",
        });
    }
    Ok(())
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_unit("p", p)?;
    Ok(hb(p))
}

fn conv(x: f64, y: f64) -> f64 {
    (1.0 - x) * y + (1.0 - y) * x
}

/// Crossover probability of two cascaded binary symmetric channels,
/// `(1-x)y + (1-y)x`.
pub fn binary_convolution(x: f64, y: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_unit("y", y)?;
    Ok(conv(x, y))
}

/// Sum-rate capacity of the two-user channel: `min(H_b(q1), H_b(q2))`.
pub fn capacity_sum(q1: f64, q2: f64) -> Result<f64> {
    check_half("q1", q1)?;
    check_half("q2", q2)?;
    Ok(hb(q1).min(hb(q2)))
}

/// Joint distribution of a binary pair `(V, W)`, stored as `p[v][w]`.
#[derive(Clone, Copy, Debug)]
pub struct JointDist2x2 {
    p: [[f64; 2]; 2],
}

impl JointDist2x2 {
    pub fn new(p: [[f64; 2]; 2]) -> Result<Self> {
        let mut clean = [[0.0; 2]; 2];
        let mut sum = 0.0;
        for v in 0..2 {
            for w in 0..2 {
                let e = p[v][w];
                if !(-1e-12..=1.0 + 1e-12).contains(&e) {
                    return Err(Error::InvalidDistribution(format!(
                        "entry p[{v}][{w}] = {e}"
                    )));
                }
                clean[v][w] = e.max(0.0);
                sum += clean[v][w];
            }
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
        }
        for row in &mut clean {
            for e in row {
                *e /= sum;
            }
        }
        Ok(JointDist2x2 { p: clean })
    }

    /// The pair where `W` is `V` with its weight trimmed by up to `flip`:
    /// only the `1 -> 0` transition has positive probability.
    pub fn z_channel(alpha: f64, flip: f64) -> Result<Self> {
        check_unit("alpha", alpha)?;
        check_unit("flip", flip)?;
        let p10 = flip.min(alpha);
        JointDist2x2::new([[1.0 - alpha, 0.0], [p10, alpha - p10]])
    }

    pub fn prob(&self, v: usize, w: usize) -> f64 {
        self.p[v][w]
    }

    /// `P(V = 1)`.
    pub fn marginal_v(&self) -> f64 {
        self.p[1][0] + self.p[1][1]
    }

    /// `P(W = 1)`.
    pub fn marginal_w(&self) -> f64 {
        self.p[0][1] + self.p[1][1]
    }

    /// `P(V != W)`.
    pub fn flip_probability(&self) -> f64 {
        self.p[0][1] + self.p[1][0]
    }
}

/// Binning-rate functional of two independent pairs `(V1, W1)`, `(V2, W2)`:
/// `[H(V1) + H(V2) - H(W1 xor W2) - 1]^+`. The mixed term depends on the
/// pairs only through the marginals of `W1` and `W2`.
pub fn binning_rate(d1: &JointDist2x2, d2: &JointDist2x2) -> f64 {
    let mixed = conv(d1.marginal_w(), d2.marginal_w());
    (hb(d1.marginal_v()) + hb(d2.marginal_v()) - hb(mixed) - 1.0).max(0.0)
}

fn z_channel_raw(alpha1: f64, alpha2: f64, q1: f64, q2: f64) -> f64 {
    let t1 = (alpha1 - q1).max(0.0);
    let t2 = (alpha2 - q2).max(0.0);
    hb(alpha1) + hb(alpha2) - hb(conv(t1, t2)) - 1.0
}

/// The binning rate at the extremal trimmed pairs:
/// `[H_b(a1) + H_b(a2) - H_b([a1-q1]^+ * [a2-q2]^+) - 1]^+`.
pub fn binning_rate_z_channel(alpha1: f64, alpha2: f64, q1: f64, q2: f64) -> Result<f64> {
    check_half("alpha1", alpha1)?;
    check_half("alpha2", alpha2)?;
    check_half("q1", q1)?;
    check_half("q2", q2)?;
    Ok(z_channel_raw(alpha1, alpha2, q1, q2).max(0.0))
}

/// Result of maximizing the binning rate over the two bias parameters.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BinningRateMax {
    pub value: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

/// Golden-section maximization on `[lo, hi]`; the function must be unimodal
/// there. Returns the maximizer and its value.
fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    if hi - lo <= tol {
        let x = 0.5 * (lo + hi);
        return (x, f(x));
    }
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > tol {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Refines a 1-D maximum inside `[center - spacing, center + spacing]`,
/// splitting the bracket at `kink` where the objective is not smooth.
fn refine_1d(f: &impl Fn(f64) -> f64, center: f64, spacing: f64, kink: f64) -> (f64, f64) {
    const TOL: f64 = 1e-12;
    let lo = (center - spacing).max(0.0);
    let hi = (center + spacing).min(0.5);
    let mut best = (center, f(center));
    let consider = |cand: (f64, f64), best: &mut (f64, f64)| {
        if cand.1 > best.1 {
            *best = cand;
        }
    };
    if kink > lo && kink < hi {
        consider(golden_max(f, lo, kink, TOL), &mut best);
        consider(golden_max(f, kink, hi, TOL), &mut best);
        consider((kink, f(kink)), &mut best);
    } else {
        consider(golden_max(f, lo, hi, TOL), &mut best);
    }
    consider((lo, f(lo)), &mut best);
    consider((hi, f(hi)), &mut best);
    best
}

fn candidate_grid(q: f64, resolution: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=resolution)
        .map(|j| 0.5 * j as f64 / resolution as f64)
        .collect();
    if q > 0.0 && q < 0.5 {
        grid.push(q);
    }
    grid.sort_unstable_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Maximizes the binning rate over `(alpha1, alpha2)` in `[0, 1/2]^2`: a
/// full grid scan at the given resolution, with the clamp kinks `alpha_i =
/// q_i` inserted as extra candidates, then coordinate-wise golden-section
/// refinement around the best cell. The reported value is clamped at zero;
/// the argmax is taken on the unclamped objective.
pub fn max_binning_rate(q1: f64, q2: f64, resolution: usize) -> Result<BinningRateMax> {
    check_half("q1", q1)?;
    check_half("q2", q2)?;
    if resolution < 8 {
        return Err(Error::Config(format!(
            "grid resolution {resolution} is too coarse, need at least 8"
        )));
    }

    let pre1: Vec<(f64, f64, f64)> = candidate_grid(q1, resolution)
        .into_iter()
        .map(|a| (a, hb(a), (a - q1).max(0.0)))
        .collect();
    let pre2: Vec<(f64, f64, f64)> = candidate_grid(q2, resolution)
        .into_iter()
        .map(|a| (a, hb(a), (a - q2).max(0.0)))
        .collect();

    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for &(a1, h1, t1) in &pre1 {
        for &(a2, h2, t2) in &pre2 {
            let raw = h1 + h2 - hb(conv(t1, t2)) - 1.0;
            if raw > best.0 {
                best = (raw, a1, a2);
            }
        }
    }

    let spacing = 0.5 / resolution as f64;
    let (mut value, mut a1, mut a2) = best;
    for _ in 0..6 {
        let f1 = |x: f64| z_channel_raw(x, a2, q1, q2);
        let (x, fx) = refine_1d(&f1, a1, spacing, q1);
        if fx > value {
            value = fx;
            a1 = x;
        }
        let f2 = |x: f64| z_channel_raw(a1, x, q1, q2);
        let (x, fx) = refine_1d(&f2, a2, spacing, q2);
        if fx > value {
            value = fx;
            a2 = x;
        }
    }

    Ok(BinningRateMax {
        value: value.max(0.0),
        alpha1: a1,
        alpha2: a2,
    })
}

/// The constants behind the closed-form envelope.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CriticalConstants {
    /// Weight where the time-sharing chord from the origin touches the
    /// curved branch `2 H_b(q) - 1`; equals `1 - 1/sqrt(2)`.
    pub tangency_weight: f64,
    /// Slope of that chord, `(2 H_b(tangency_weight) - 1) / tangency_weight`.
    pub chord_slope: f64,
    /// Weight above which the diagonal binning maximum sits exactly at the
    /// clamp kink `alpha = q`; the maximum of the threshold objective.
    pub kink_threshold: f64,
    /// Maximizer of the threshold objective.
    pub kink_argmax: f64,
}

/// The objective whose maximum over `(0, 1]` defines the kink threshold:
/// `x - 1 / (1 + (1/x - 1)^2)`.
pub fn kink_threshold_objective(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::Domain {
            name: "x",
            value: x,
            range: "(0, 1]",
        });
    }
    let r = 1.0 / x - 1.0;
    Ok(x - 1.0 / (1.0 + r * r))
}

/// Sign of the threshold objective's derivative; shares its roots with this
/// quartic, which makes the maximizer certifiable by bisection.
fn threshold_quartic(x: f64) -> f64 {
    ((4.0 * x - 8.0) * x + 10.0) * x * x - 6.0 * x + 1.0
}

pub fn critical_constants() -> CriticalConstants {
    let tangency_weight = 1.0 - std::f64::consts::FRAC_1_SQRT_2;
    let chord_slope = (2.0 * hb(tangency_weight) - 1.0) / tangency_weight;

    // The quartic changes sign exactly once in (0.1, 0.4); its other real
    // root is near 0.74, outside the objective's rising range.
    let mut lo = 0.1;
    let mut hi = 0.4;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if threshold_quartic(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let kink_argmax = 0.5 * (lo + hi);

    CriticalConstants {
        tangency_weight,
        chord_slope,
        kink_threshold: kink_threshold_objective(kink_argmax)
            .expect("bisection keeps the argmax inside (0, 1]"),
        kink_argmax,
    }
}

/// Closed-form best single-letter sum rate: the chord `chord_slope * q` up
/// to the tangency weight, then `2 H_b(q) - 1`.
pub fn best_single_letter_sum_rate(q: f64) -> Result<f64> {
    check_half("q", q)?;
    let cc = critical_constants();
    if q < cc.tangency_weight {
        Ok(cc.chord_slope * q)
    } else {
        Ok(2.0 * hb(q) - 1.0)
    }
}

/// Capacity when only the first user faces interference: `H_b(q1)`.
pub fn one_dirty_capacity(q1: f64) -> Result<f64> {
    check_half("q1", q1)?;
    Ok(hb(q1))
}

/// Maximum of the one-dirty converse objective and its maximizer.
#[derive(Clone, Copy, Debug)]
pub struct ConverseMax {
    pub value: f64,
    pub alpha: f64,
}

/// Maximizes `H_b(alpha) - H_b([alpha - q]^+)` over `alpha` in `[0, 1/2]`
/// and verifies the maximum equals `H_b(q)` at `alpha = q`.
pub fn one_dirty_converse_max(q: f64, resolution: usize) -> Result<ConverseMax> {
    check_half("q", q)?;
    if resolution < 8 {
        return Err(Error::Config(format!(
            "grid resolution {resolution} is too coarse, need at least 8"
        )));
    }
    let objective = |a: f64| hb(a) - hb((a - q).max(0.0));
    let mut best = (f64::NEG_INFINITY, 0.0);
    for a in candidate_grid(q, resolution) {
        let v = objective(a);
        if v > best.0 {
            best = (v, a);
        }
    }
    let spacing = 0.5 / resolution as f64;
    let (alpha, value) = refine_1d(&objective, best.1, spacing, q);
    let (value, alpha) = if value >= best.0 {
        (value, alpha)
    } else {
        (best.0, best.1)
    };
    if (value - hb(q)).abs() > 1e-6 || (alpha - q).abs() > 1e-3 {
        return Err(Error::Precision(format!(
            "converse maximum {value} at {alpha} strays from H_b({q})"
        )));
    }
    Ok(ConverseMax { value, alpha })
}

/// Worst margins of the two entropy inequalities behind the envelope's
/// closed form, verified on a dense grid.
#[derive(Clone, Copy, Debug)]
pub struct InequalityReport {
    pub grid_step: f64,
    /// Minimum of `H_b(a - q) - 2 H_b(a) + 2 H_b(q)` over the wedge
    /// `kink_threshold <= q <= a <= 1/2`, and the `(q, a)` attaining it.
    pub margin_min: f64,
    pub margin_argmin: (f64, f64),
    /// Maximum of `H_b(x) - 1 - chord_slope * x` over `[0, 1/2]` and its
    /// maximizer, which sits at half the tangency weight.
    pub tangent_slack_max: f64,
    pub tangent_slack_argmax: f64,
}

/// Grid step used by [`entropy_inequality_report`].
pub const LEMMA_GRID_STEP: f64 = 1e-3;

pub fn entropy_inequality_report() -> InequalityReport {
    let step = LEMMA_GRID_STEP;
    let cc = critical_constants();

    let mut margin_min = f64::INFINITY;
    let mut margin_argmin = (0.0, 0.0);
    let axis = |from: f64| {
        let mut points: Vec<f64> = vec![];
        let count = ((0.5 - from) / step).floor() as usize;
        for i in 0..=count {
            points.push(from + i as f64 * step);
        }
        if points.last().is_none_or(|&p| p < 0.5 - 1e-12) {
            points.push(0.5);
        }
        points
    };
    for q in axis(cc.kink_threshold) {
        let hq = hb(q);
        for a in axis(q) {
            let margin = hb(a - q) - 2.0 * hb(a) + 2.0 * hq;
            if margin < margin_min {
                margin_min = margin;
                margin_argmin = (q, a);
            }
        }
    }

    let slack = |x: f64| hb(x) - 1.0 - cc.chord_slope * x;
    let (tangent_slack_argmax, tangent_slack_max) = golden_max(&slack, 0.0, 0.5, 1e-12);

    InequalityReport {
        grid_step: step,
        margin_min,
        margin_argmin,
        tangent_slack_max,
        tangent_slack_argmax,
    }
}
