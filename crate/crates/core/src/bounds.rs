//! Closed-form list-decoding radius and rate formulas: the Johnson radius,
//! the average-distance Johnson bound, its simplified near-extremal form, the
//! deletion bound for locally sparse codes, the radius implied by RIP-2 of
//! order L, and the headline rate expression.
//!
//! These are advisory real-valued radii; strict list-decodability checks
//! elsewhere convert them to rational cutoffs first.

use crate::error::{Error, Result};

/// Provenance of a (radius, list size) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    AvgJohnson,
    Simplified,
    Deletion,
    RipToLd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ListDecodingBound {
    pub radius: f64,
    pub list_size: u64,
    pub provenance: BoundKind,
}

fn check_unit(name: &str, x: f64, lo: f64, hi: f64) -> Result<()> {
    if !(x >= lo && x <= hi) {
        return Err(Error::InvalidParameter(format!(
            "{name} = {x} outside [{lo}, {hi}]"
        )));
    }
    Ok(())
}

fn check_q(q: u16) -> Result<f64> {
    if q < 2 {
        return Err(Error::InvalidParameter("q must be at least 2".into()));
    }
    Ok(q as f64)
}

/// J_q(x) = ((q-1)/q) (1 - sqrt(1 - qx/(q-1))) on [0, 1-1/q].
pub fn johnson_radius(q: u16, x: f64) -> Result<f64> {
    let qf = check_q(q)?;
    check_unit("x", x, 0.0, 1.0 - 1.0 / qf)?;
    let inner = (1.0 - qf * x / (qf - 1.0)).max(0.0);
    Ok((qf - 1.0) / qf * (1.0 - inner.sqrt()))
}

/// Average-distance Johnson bound: average pairwise distance >= delta on
/// every L-subset gives (J_q(delta(1-1/L)), L-1)-list decodability.
///
/// An L-subset average can legitimately exceed 1 - 1/q, up to the norm
/// ceiling (1 - 1/q) L/(L-1); after the (1 - 1/L) shrink the radius argument
/// is always back inside the Johnson domain.
pub fn avg_johnson_bound(q: u16, delta: f64, l: u64) -> Result<ListDecodingBound> {
    let qf = check_q(q)?;
    if l < 2 {
        return Err(Error::InvalidParameter("L must be at least 2".into()));
    }
    let shrink = 1.0 - 1.0 / l as f64;
    // Slack absorbs rational-to-float rounding at the ceiling itself.
    check_unit("delta", delta, 0.0, (1.0 - 1.0 / qf) / shrink + 1e-12)?;
    Ok(ListDecodingBound {
        radius: johnson_radius(q, (delta * shrink).min(1.0 - 1.0 / qf))?,
        list_size: l - 1,
        provenance: BoundKind::AvgJohnson,
    })
}

/// Simplified form near the extremal radius: average distance
/// >= (1-1/q)(1-eps) gives radius (1-1/q)(1 - sqrt(eps + 1/L)).
pub fn simplified_johnson(q: u16, eps: f64, l: u64) -> Result<ListDecodingBound> {
    let qf = check_q(q)?;
    check_unit("eps", eps, 0.0, 1.0)?;
    if l < 2 {
        return Err(Error::InvalidParameter("L must be at least 2".into()));
    }
    let inner = eps + 1.0 / l as f64;
    if inner > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "eps + 1/L = {inner} exceeds 1"
        )));
    }
    Ok(ListDecodingBound {
        radius: (1.0 - 1.0 / qf) * (1.0 - inner.sqrt()),
        list_size: l - 1,
        provenance: BoundKind::Simplified,
    })
}

/// Deletion bound: at most A codewords within eta of any codeword gives
/// (J_q(eta - eta/L), AL-1)-list decodability. A = 1 recovers the usual
/// Johnson bound.
pub fn deletion_bound(q: u16, eta: f64, a: u64, l: u64) -> Result<ListDecodingBound> {
    let qf = check_q(q)?;
    if !(eta > 0.0 && eta <= 1.0 - 1.0 / qf) {
        return Err(Error::InvalidParameter(format!(
            "eta = {eta} outside (0, 1-1/q]"
        )));
    }
    if a < 1 || l < 2 {
        return Err(Error::InvalidParameter("need A >= 1 and L >= 2".into()));
    }
    Ok(ListDecodingBound {
        radius: johnson_radius(q, eta * (1.0 - 1.0 / l as f64))?,
        list_size: a * l - 1,
        provenance: BoundKind::Deletion,
    })
}

/// Radius guaranteed when phi(C)/sqrt((q-1)n) has RIP-2 of order L with
/// constant 1/2: (1-1/q)(1 - sqrt(1.5/(L-1))), list size L-1.
pub fn rip_to_ld_radius(q: u16, l: u64) -> Result<ListDecodingBound> {
    let qf = check_q(q)?;
    if l < 3 {
        return Err(Error::InvalidParameter("L must be at least 3".into()));
    }
    Ok(ListDecodingBound {
        radius: (1.0 - 1.0 / qf) * (1.0 - (1.5 / (l as f64 - 1.0)).sqrt()),
        list_size: l - 1,
        provenance: BoundKind::RipToLd,
    })
}

/// The distance floor of the RIP-to-distance reduction:
/// (1-1/q)(1 - 1/(2(L-1))).
pub fn rip_dist_floor(q: u16, l: u64) -> Result<f64> {
    let qf = check_q(q)?;
    if l < 2 {
        return Err(Error::InvalidParameter("L must be at least 2".into()));
    }
    Ok((1.0 - 1.0 / qf) * (1.0 - 1.0 / (2.0 * (l as f64 - 1.0))))
}

/// Rate expression eps^2 / (log2(1/gamma) log2^3(q/eps) log2 q), leading
/// constant fixed to 1 and each log clamped below at 1. Up to the analysis'
/// unspecified constant; not a certified rate.
pub fn main_rate_bound(q: u16, eps: f64, gamma: f64) -> Result<f64> {
    let qf = check_q(q)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} outside (0,1)")));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma = {gamma} outside (0,1)"
        )));
    }
    let clamp = |v: f64| v.max(1.0);
    let lg = |v: f64| clamp(v.log2());
    Ok(eps * eps / (lg(1.0 / gamma) * lg(qf / eps).powi(3) * lg(qf)))
}
