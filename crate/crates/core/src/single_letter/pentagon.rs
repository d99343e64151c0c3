//! Exact rate bounds for auxiliary-variable strategies.
//!
//! Each user picks a finite auxiliary alphabet and a conditional table
//! `P(u, x | s)`; the channel composes the two users with uniform
//! interference words and `y = x1 ^ x2 ^ s1 ^ s2`. All mutual informations
//! come from the fully enumerated joint, so the bounds are exact up to
//! floating-point rounding.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::single_letter::hb;

/// Default cap on the auxiliary alphabet size.
pub const DEFAULT_MAX_AUX: usize = 4;

/// One user's strategy: `P(u, x | s)` over binary `s`, `x` and an auxiliary
/// alphabet of size `u_size`.
#[derive(Clone, Debug)]
pub struct AuxChannelSpec {
    u_size: usize,
    /// Row-major `[s][u][x]`.
    table: Vec<f64>,
}

impl AuxChannelSpec {
    pub fn new(u_size: usize, table: Vec<f64>) -> Result<Self> {
        Self::with_alphabet_cap(u_size, table, DEFAULT_MAX_AUX)
    }

    pub fn with_alphabet_cap(u_size: usize, table: Vec<f64>, cap: usize) -> Result<Self> {
        if u_size == 0 || u_size > cap {
            return Err(Error::Config(format!(
                "auxiliary alphabet size {u_size} outside 1..={cap}"
            )));
        }
        if table.len() != 2 * u_size * 2 {
            return Err(Error::Config(format!(
                "table holds {} entries, expected {}",
                table.len(),
                2 * u_size * 2
            )));
        }
        let mut clean = table;
        for s in 0..2 {
            let slice = &mut clean[s * u_size * 2..(s + 1) * u_size * 2];
            let mut sum = 0.0;
            for e in slice.iter() {
                if !(-1e-12..=1.0 + 1e-12).contains(e) {
                    return Err(Error::InvalidDistribution(format!("entry {e} in slice s={s}")));
                }
                sum += e.max(0.0);
            }
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidDistribution(format!(
                    "slice s={s} sums to {sum}"
                )));
            }
            for e in slice.iter_mut() {
                *e = e.max(0.0) / sum;
            }
        }
        Ok(AuxChannelSpec {
            u_size,
            table: clean,
        })
    }

    /// Interference-cancelling strategy: `u = x ^ s` with `x` a `weight`-
    /// biased coin independent of `s`.
    pub fn xor_binning(weight: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&weight) {
            return Err(Error::Domain {
                name: "weight",
                value: weight,
                range: "[0, 1/2]",
            });
        }
        let mut table = vec![0.0; 8];
        for s in 0..2usize {
            for x in 0..2usize {
                let u = x ^ s;
                table[s * 4 + u * 2 + x] = if x == 1 { weight } else { 1.0 - weight };
            }
        }
        AuxChannelSpec::new(2, table)
    }

    /// Strategy that ignores the interference word entirely: `u = x`, with
    /// `x` a `weight`-biased coin.
    pub fn uncoded(weight: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&weight) {
            return Err(Error::Domain {
                name: "weight",
                value: weight,
                range: "[0, 1/2]",
            });
        }
        let mut table = vec![0.0; 8];
        for s in 0..2usize {
            for x in 0..2usize {
                table[s * 4 + x * 2 + x] = if x == 1 { weight } else { 1.0 - weight };
            }
        }
        AuxChannelSpec::new(2, table)
    }

    pub fn u_size(&self) -> usize {
        self.u_size
    }

    pub fn prob(&self, s: usize, u: usize, x: usize) -> f64 {
        self.table[s * self.u_size * 2 + u * 2 + x]
    }
}

/// The three auxiliary-variable rate bounds, clamped at zero, plus the raw
/// mutual informations they are assembled from.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PentagonBounds {
    pub rate1: f64,
    pub rate2: f64,
    pub rate_sum: f64,
    pub info_u1_y_given_u2: f64,
    pub info_u2_y_given_u1: f64,
    pub info_uu_y: f64,
    pub info_u1_s1: f64,
    pub info_u2_s2: f64,
}

fn entropy_of(probs: impl Iterator<Item = f64>) -> f64 {
    probs
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// Evaluates the pentagon bounds for a pair of strategies by enumerating
/// the joint distribution of `(s1, s2, u1, u2, y)` exactly.
pub fn pentagon_bounds(spec1: &AuxChannelSpec, spec2: &AuxChannelSpec) -> PentagonBounds {
    let (n1, n2) = (spec1.u_size(), spec2.u_size());

    // Accumulated marginals; y is the innermost index where present.
    let mut p_u1_s1 = vec![0.0; n1 * 2];
    let mut p_u2_s2 = vec![0.0; n2 * 2];
    let mut p_uuy = vec![0.0; n1 * n2 * 2];

    for s1 in 0..2usize {
        for u1 in 0..n1 {
            for x1 in 0..2usize {
                let w1 = 0.5 * spec1.prob(s1, u1, x1);
                if w1 == 0.0 {
                    continue;
                }
                p_u1_s1[u1 * 2 + s1] += w1;
                for s2 in 0..2usize {
                    for u2 in 0..n2 {
                        for x2 in 0..2usize {
                            let w = w1 * 0.5 * spec2.prob(s2, u2, x2);
                            if w == 0.0 {
                                continue;
                            }
                            let y = x1 ^ x2 ^ s1 ^ s2;
                            p_uuy[(u1 * n2 + u2) * 2 + y] += w;
                        }
                    }
                }
            }
        }
    }
    for s2 in 0..2usize {
        for u2 in 0..n2 {
            for x2 in 0..2usize {
                p_u2_s2[u2 * 2 + s2] += 0.5 * spec2.prob(s2, u2, x2);
            }
        }
    }

    let p_u1: Vec<f64> = (0..n1).map(|u| p_u1_s1[u * 2] + p_u1_s1[u * 2 + 1]).collect();
    let p_u2: Vec<f64> = (0..n2).map(|u| p_u2_s2[u * 2] + p_u2_s2[u * 2 + 1]).collect();

    // I(U_i; S_i) = H(U_i) + H(S_i) - H(U_i, S_i), with H(S_i) = 1.
    let info_u1_s1 =
        entropy_of(p_u1.iter().copied()) + 1.0 - entropy_of(p_u1_s1.iter().copied());
    let info_u2_s2 =
        entropy_of(p_u2.iter().copied()) + 1.0 - entropy_of(p_u2_s2.iter().copied());

    let p_uu: Vec<f64> = (0..n1 * n2)
        .map(|i| p_uuy[i * 2] + p_uuy[i * 2 + 1])
        .collect();
    let p_y1: f64 = (0..n1 * n2).map(|i| p_uuy[i * 2 + 1]).sum();
    let h_y = hb(p_y1);
    let h_uu = entropy_of(p_uu.iter().copied());
    let h_uuy = entropy_of(p_uuy.iter().copied());

    // I(U1, U2; Y) = H(U1, U2) + H(Y) - H(U1, U2, Y).
    let info_uu_y = h_uu + h_y - h_uuy;

    // I(U1; Y | U2) = H(U1, U2) + H(U2, Y) - H(U1, U2, Y) - H(U2), and
    // symmetrically for the other user.
    let mut p_u2y = vec![0.0; n2 * 2];
    let mut p_u1y = vec![0.0; n1 * 2];
    for u1 in 0..n1 {
        for u2 in 0..n2 {
            for y in 0..2usize {
                let w = p_uuy[(u1 * n2 + u2) * 2 + y];
                p_u2y[u2 * 2 + y] += w;
                p_u1y[u1 * 2 + y] += w;
            }
        }
    }
    let info_u1_y_given_u2 =
        h_uu + entropy_of(p_u2y.iter().copied()) - h_uuy - entropy_of(p_u2.iter().copied());
    let info_u2_y_given_u1 =
        h_uu + entropy_of(p_u1y.iter().copied()) - h_uuy - entropy_of(p_u1.iter().copied());

    PentagonBounds {
        rate1: (info_u1_y_given_u2 - info_u1_s1).max(0.0),
        rate2: (info_u2_y_given_u1 - info_u2_s2).max(0.0),
        rate_sum: (info_uu_y - info_u1_s1 - info_u2_s2).max(0.0),
        info_u1_y_given_u2,
        info_u2_y_given_u1,
        info_uu_y,
        info_u1_s1,
        info_u2_s2,
    }
}
