//! Closed-form fidelities of the lossy protocols against their lossless
//! counterparts, and the numeric pipelines they are checked against.

use nalgebra::DMatrix;

use crate::error::{ensure_finite, ensure_in_range, Result};
use crate::gaussian::{db_to_r, fidelity, GaussianState};

use super::protocols::{apply_cz, two_qumode_cluster, ProtocolResult};
use super::NodeLabel;

fn check_inputs(db: f64, delta_eta: f64) -> Result<f64> {
    ensure_finite("dB", db)?;
    ensure_in_range("dB", db, 0.0, f64::MAX)?;
    ensure_in_range("delta_eta", delta_eta, 0.0, 1.0)?;
    db_to_r(db)
}

/// Fidelity of a two-qumode cluster read out with efficiency `1 − δη`:
/// `4 / (√T − (√T − 1) cosh 2r + 1)²` with `T = 1 − δη`.
pub fn two_qumode_fidelity_closed_form(db: f64, delta_eta: f64) -> Result<f64> {
    let r = check_inputs(db, delta_eta)?;
    let s = (1.0 - delta_eta).sqrt();
    let x = s - (s - 1.0) * (2.0 * r).cosh() + 1.0;
    Ok(4.0 / (x * x))
}

/// Fidelity of the three-memory CZ gate acting on a p-squeezed and a
/// q-squeezed vacuum, every memory transfer having efficiency `1 − δη`.
///
/// At `δη = 0` the expression is identically 1 but its terms of size
/// `cosh² 2r` cancel in floating point, so that case returns 1 directly.
pub fn cz_fidelity_closed_form(db: f64, delta_eta: f64) -> Result<f64> {
    let r = check_inputs(db, delta_eta)?;
    if delta_eta == 0.0 {
        return Ok(1.0);
    }
    let t = 1.0 - delta_eta;
    let s = t.sqrt();
    let (sh, ch) = ((2.0 * r).sinh(), (2.0 * r).cosh());
    let f1 = -(-2.0 * t.powf(1.5) + 2.0 * t.powi(5) + t.powi(3) + t * t + 2.0 * s - 1.0) * t
        - (((t * t - 6.0 * t + 2.0 * s - 2.0) * t + 1.0) * t) * sh
        + (-2.0 * t.powf(2.5) + 2.0 * t.powi(6) + t.powi(4) - delta_eta + 3.0) * ch
        + 3.0;
    let f2 = -2.0 * t.powf(1.5) + 2.0 * t.powf(3.5) - 2.0 * t.powi(6) - t.powi(5) - t.powi(3)
        + t * t
        + (((t * t - 2.0 * t + 2.0 * s - 6.0) * t + 1.0) * t * t) * sh
        + (-2.0 * t.powf(3.5) + 2.0 * t.powi(6) + t.powi(5) + t * t + 2.0) * ch
        + 3.0;
    Ok(4.0 / (f1 * f2).sqrt())
}

/// Numeric counterpart of [`two_qumode_fidelity_closed_form`].
pub fn two_qumode_fidelity_numeric(db: f64, delta_eta: f64) -> Result<f64> {
    let r = check_inputs(db, delta_eta)?;
    let lossy = two_qumode_cluster(r, delta_eta)?;
    let ideal = two_qumode_cluster(r, 0.0)?;
    fidelity(&lossy.state, &ideal.state)
}

/// The two CZ inputs: node `(0,0)` p-squeezed, node `(0,1)` q-squeezed.
pub fn cz_test_inputs(r: f64) -> Result<ProtocolResult> {
    let state = GaussianState::squeezed_vacuum(r)?.tensor(&GaussianState::squeezed_vacuum(-r)?);
    ProtocolResult::from_state(state, vec![NodeLabel::new(0, 0), NodeLabel::new(0, 1)])
}

/// Numeric counterpart of [`cz_fidelity_closed_form`].
pub fn cz_fidelity_numeric(db: f64, delta_eta: f64) -> Result<f64> {
    let r = check_inputs(db, delta_eta)?;
    let input = cz_test_inputs(r)?;
    let (i, j) = (NodeLabel::new(0, 0), NodeLabel::new(0, 1));
    let lossy = apply_cz(&input, i, j, delta_eta)?;
    let ideal = apply_cz(&input, i, j, 0.0)?;
    fidelity(&lossy.state, &ideal.state)
}

/// Ideal two-mode squeezed vacuum covariance.
pub fn tms_covariance(r: f64) -> DMatrix<f64> {
    let c = (2.0 * r).cosh() / 2.0;
    let s = (2.0 * r).sinh() / 2.0;
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        c, 0.0, s, 0.0,
        0.0, c, 0.0, -s,
        s, 0.0, c, 0.0,
        0.0, -s, 0.0, c,
    ]);
    m
}
