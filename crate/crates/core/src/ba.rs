//! Badly-approximable diagnostics: the approximation quality
//! c(x, Q) = min_{1≤q≤Q} q^{1/d} · dist(qx, Z^d), continued-fraction
//! expansions with bounded-digit certificates, and population statistics
//! over limit-set samples.
//!
//! Distances to the lattice use the sup norm, so the planar scan stays an
//! exact coordinate-wise computation.

use crate::error::{Error, Result};
use crate::gdms::PointSample;
use crate::region::Point;
use rayon::prelude::*;

/// Per-point approximation quality at horizon Q.
#[derive(Debug, Clone, Copy)]
pub struct BAProfile {
    pub point: Point,
    pub dim: usize,
    pub horizon: u64,
    /// c(x, Q) = min over q ≤ Q of q^{1/d} · dist(qx, Z^d)
    pub quality: f64,
    pub argmin_q: u64,
    /// the same minimum restricted to q > √Q: an estimate of the asymptotic
    /// approximation constant, free of the small-q floor (for the golden
    /// mean the full minimum sits at q = 1 while this tends to 1/√5)
    pub tail_quality: f64,
    pub tail_argmin_q: u64,
}

fn dist_to_integers(v: f64) -> f64 {
    (v - v.round()).abs()
}

fn frac(v: f64) -> f64 {
    v - v.floor()
}

/// Exact scan over q = 1..Q. The coordinates are reduced mod 1 first, which
/// makes the quality invariant under integer translations by construction.
pub fn ba_quality(point: Point, dim: usize, horizon: u64) -> Result<BAProfile> {
    if horizon < 1 {
        return Err(Error::InvalidParameter("horizon Q must be >= 1".into()));
    }
    if dim != 1 && dim != 2 {
        return Err(Error::InvalidParameter("dimension must be 1 or 2".into()));
    }
    let fx = frac(point.x);
    let fy = frac(point.y);
    let tail_from = (horizon as f64).sqrt().floor() as u64;
    let mut best = f64::INFINITY;
    let mut best_q = 1u64;
    let mut tail_best = f64::INFINITY;
    let mut tail_q = 0u64;
    for q in 1..=horizon {
        let qf = q as f64;
        let d = if dim == 1 {
            qf * dist_to_integers(qf * fx)
        } else {
            qf.sqrt() * dist_to_integers(qf * fx).max(dist_to_integers(qf * fy))
        };
        if d < best {
            best = d;
            best_q = q;
        }
        if q > tail_from && d < tail_best {
            tail_best = d;
            tail_q = q;
        }
        if best == 0.0 && q > tail_from {
            break;
        }
    }
    if tail_q == 0 {
        tail_best = best;
        tail_q = best_q;
    }
    Ok(BAProfile {
        point,
        dim,
        horizon,
        quality: best,
        argmin_q: best_q,
        tail_quality: tail_best,
        tail_argmin_q: tail_q,
    })
}

/// Continued-fraction digits with the classical bounded-digit lower bound:
/// if every digit is ≤ M then c(x) ≥ 1/(M+2)². The bound is validated
/// against the brute-force scan in tests rather than trusted.
#[derive(Debug, Clone)]
pub struct CFCertificate {
    pub digits: Vec<u64>,
    pub bound_m: u64,
    /// 1/(M+2)²
    pub c_bound: f64,
    /// denominators q_n, q_{n+1} of the last two convergents
    pub q_last: (u128, u128),
    /// set when the expansion stopped early on a near-rational remainder
    pub truncated: bool,
}

impl CFCertificate {
    pub fn reconstruction_error_bound(&self) -> f64 {
        let (qn, qn1) = self.q_last;
        1.0 / (qn as f64 * qn1 as f64)
    }

    /// Value of the finite continued fraction [0; a_1, …, a_n].
    pub fn reconstruct(&self) -> f64 {
        let mut v = 0.0f64;
        for &a in self.digits.iter().rev() {
            v = 1.0 / (a as f64 + v);
        }
        v
    }
}

fn certificate_bound(m: u64) -> f64 {
    let s = m as f64 + 2.0;
    1.0 / (s * s)
}

/// Gauss-map digit expansion of x ∈ (0, 1). Stops early (with the truncated
/// flag) once the remainder is indistinguishable from rational at working
/// precision, or once convergent denominators exhaust the f64 error budget.
pub fn cf_expand(x: f64, n: usize) -> Result<CFCertificate> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "x = {x} must lie in (0, 1)"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one digit".into()));
    }
    let mut digits = Vec::with_capacity(n);
    let mut truncated = false;
    // q_{n} = a_n q_{n-1} + q_{n-2}, with q_{-1} = 0, q_0 = 1
    let (mut q_prev, mut q_cur): (u128, u128) = (0, 1);
    let mut rem = x;
    for _ in 0..n {
        if rem < 1e-13 {
            truncated = true;
            break;
        }
        let inv = 1.0 / rem;
        let a = inv.floor() as u64;
        if a == 0 {
            truncated = true;
            break;
        }
        digits.push(a);
        let q_next = q_cur
            .checked_mul(a as u128)
            .and_then(|v| v.checked_add(q_prev));
        match q_next {
            Some(qn) if qn < u128::MAX / 2 => {
                q_prev = q_cur;
                q_cur = qn;
            }
            _ => {
                truncated = true;
                break;
            }
        }
        rem = inv - a as f64;
        // once q_n² eats the mantissa the digits are numerically meaningless
        if (q_cur as f64) * (q_cur as f64) > 1e14 {
            truncated = true;
            break;
        }
    }
    if digits.is_empty() {
        return Err(Error::InvalidParameter(
            "x is rational at working precision; no digits produced".into(),
        ));
    }
    let m = *digits.iter().max().unwrap();
    // 1/(q_n · q_{n+1}) with the worst case q_{n+1} = q_n + q_{n-1}
    Ok(CFCertificate {
        bound_m: m,
        c_bound: certificate_bound(m),
        q_last: (q_cur, q_cur + q_prev),
        digits,
        truncated,
    })
}

/// The coding point of a periodic digit word over the continued-fraction
/// system, plus its certificate: the point's expansion repeats the word, so
/// its digits are bounded by M = max letter and the classical bound applies
/// to the full infinite expansion.
pub fn ba_certify_gauss_point(word: &[u64]) -> Result<(f64, CFCertificate)> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    if word.iter().any(|&a| a == 0) {
        return Err(Error::InvalidParameter(
            "continued-fraction digits are >= 1".into(),
        ));
    }
    // fixed point of the composed map, by iterating the period
    let mut x = 0.5f64;
    for _ in 0..200 {
        let mut y = x;
        for &a in word.iter().rev() {
            y = 1.0 / (a as f64 + y);
        }
        if (y - x).abs() < 1e-16 {
            x = y;
            break;
        }
        x = y;
    }
    let m = *word.iter().max().unwrap();
    let (mut q_prev, mut q_cur): (u128, u128) = (0, 1);
    for &a in word {
        let next = q_cur.saturating_mul(a as u128).saturating_add(q_prev);
        q_prev = q_cur;
        q_cur = next;
    }
    Ok((
        x,
        CFCertificate {
            digits: word.to_vec(),
            bound_m: m,
            c_bound: certificate_bound(m),
            q_last: (q_cur, q_cur + q_prev),
            truncated: false,
        },
    ))
}

/// Population view of the quality function over a sample.
#[derive(Debug, Clone)]
pub struct BAStatistics {
    pub horizon: u64,
    pub profiles: Vec<BAProfile>,
    pub min: f64,
    pub median: f64,
    /// 20 equal bins over [0, 1/2] (the quality never exceeds 1/2)
    pub histogram: [u64; 20],
}

pub fn ba_statistics(sample: &PointSample, horizon: u64) -> Result<BAStatistics> {
    if sample.is_empty() {
        return Err(Error::DegenerateSample("empty sample".into()));
    }
    let dim = sample.dim;
    let profiles: Vec<BAProfile> = sample
        .points
        .par_iter()
        .map(|&p| ba_quality(p, dim, horizon))
        .collect::<Result<_>>()?;
    let mut values: Vec<f64> = profiles.iter().map(|p| p.quality).collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let min = values[0];
    let median = values[(values.len() - 1) / 2];
    let mut histogram = [0u64; 20];
    for &v in &values {
        let bin = ((v / 0.5) * 20.0).floor() as usize;
        histogram[bin.min(19)] += 1;
    }
    Ok(BAStatistics {
        horizon,
        profiles,
        min,
        median,
        histogram,
    })
}
