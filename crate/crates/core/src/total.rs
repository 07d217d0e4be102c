//! Total-degree orthonormal systems: `p_n^k = q_k U_{n-k}(y)` above the
//! threshold, oracle Gram-Schmidt below it.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::oracle::{cheb_table, gram_schmidt};
use crate::poly::{uy, BivariatePoly, Ordering2};
use crate::szego::{build_qk, qk_norm_closed, qk_threshold};
use crate::system::{OrthoEntry, OrthoSystem, Source, Window};
use crate::weights::WeightSpec;

/// Relative tolerance for the closed-form norm check.
const NORM_CHECK_TOL: f64 = 1e-8;

/// First `k` with a closed-form total-degree component.
pub fn total_threshold(spec: &WeightSpec) -> usize {
    qk_threshold(spec.n_h()).max(0) as usize
}

/// Scales `p` to unit norm with a positive coefficient at `lead`.
pub(crate) fn normalize(
    spec: &WeightSpec,
    p: &BivariatePoly,
    lead: (usize, usize),
    tol: f64,
) -> Result<(BivariatePoly, f64)> {
    let d = p.nrows().max(p.ncols()).saturating_sub(1);
    let t = cheb_table(spec, d, tol)?;
    let nrm = t.norm(p)?;
    if nrm == 0.0 || !nrm.is_finite() {
        return Err(Error::Anomaly(format!("cannot normalize: norm {nrm}")));
    }
    let sign = if p.get(lead.0, lead.1) < 0.0 { -1.0 } else { 1.0 };
    Ok((p.scale(&(sign / nrm)), nrm))
}

/// Normalized `q_k(x, y) U_{n-k}(y)` for `k >= ceil((N_h - 2)/2)`.
///
/// The norm comes from quadrature; where `||q_k||^2` is known in closed form
/// the two are compared and a mismatch is an error.
pub fn build_total_component(spec: &WeightSpec, n: usize, k: usize, tol: f64) -> Result<OrthoEntry> {
    let threshold = total_threshold(spec);
    if k < threshold || k > n {
        return Err(Error::BelowThreshold {
            index: k as i64,
            threshold: threshold as i64,
        });
    }
    let p = build_qk(spec, k as i64)?.mul(&uy(n as i64 - k as i64))?;
    let (poly, nrm) = normalize(spec, &p, (k, n - k), tol)?;
    if let Some(closed) = qk_norm_closed(spec, k as i64)? {
        // int U_j(y)^2 (2/pi) sqrt(1-y^2) dy = 1, and dmu carries a further
        // 2/pi and the mass normalization.
        let mass = cheb_table(spec, 0, tol)?.mass;
        let expect = (2.0 / PI * closed / mass).sqrt();
        if (expect - nrm).abs() > NORM_CHECK_TOL * expect {
            return Err(Error::Residual {
                what: format!("closed-form norm of q_{k} U_{}(y)", n - k),
                residual: (expect - nrm).abs(),
                tol: NORM_CHECK_TOL * expect,
            });
        }
    }
    Ok(OrthoEntry {
        index: (k, n - k),
        poly,
        norm: nrm,
        source: Source::ClosedForm,
    })
}

/// The oracle component at index `(k, n - k)` for `k` below the threshold.
pub fn build_total_low(spec: &WeightSpec, n: usize, k: usize, tol: f64) -> Result<OrthoEntry> {
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
    }
    let sys = gram_schmidt(spec, Ordering2::Total, Window::Total { n }, tol)?;
    sys.get((k, n - k))
        .cloned()
        .ok_or_else(|| Error::Anomaly(format!("oracle lacks slot ({k}, {})", n - k)))
}

fn level(spec: &WeightSpec, n: usize, oracle: Option<&OrthoSystem>, tol: f64) -> Result<Vec<OrthoEntry>> {
    let threshold = total_threshold(spec);
    (0..=n)
        .into_par_iter()
        .map(|k| {
            if k >= threshold {
                build_total_component(spec, n, k, tol)
            } else {
                let sys = oracle.expect("oracle system for low slots");
                sys.get((k, n - k))
                    .cloned()
                    .ok_or_else(|| Error::Anomaly(format!("oracle lacks slot ({k}, {})", n - k)))
            }
        })
        .collect()
}

/// `P_n`: the `n + 1` components of total degree `n`, `k` ascending.
pub fn build_total_vector(spec: &WeightSpec, n: usize, tol: f64) -> Result<OrthoSystem> {
    let oracle = if total_threshold(spec) > 0 {
        Some(gram_schmidt(spec, Ordering2::Total, Window::Total { n }, tol)?)
    } else {
        None
    };
    Ok(OrthoSystem {
        ordering: Ordering2::Total,
        window: Window::Total { n },
        entries: level(spec, n, oracle.as_ref(), tol)?,
    })
}

/// `P_0, ..., P_n` in total-degree order.
pub fn build_total_system(spec: &WeightSpec, n: usize, tol: f64) -> Result<OrthoSystem> {
    let oracle = if total_threshold(spec) > 0 {
        Some(gram_schmidt(spec, Ordering2::Total, Window::Total { n }, tol)?)
    } else {
        None
    };
    let mut entries = Vec::with_capacity(Window::Total { n }.len());
    for d in 0..=n {
        entries.extend(level(spec, d, oracle.as_ref(), tol)?);
    }
    Ok(OrthoSystem {
        ordering: Ordering2::Total,
        window: Window::Total { n },
        entries,
    })
}

/// The components of total degree `d` of a system built by
/// [`build_total_system`].
pub fn level_slice(sys: &OrthoSystem, d: usize) -> Vec<&BivariatePoly> {
    sys.select(|(i, j)| i + j == d)
}
