//! Dormand–Prince 5(4) with PI step-size control and its fourth-order
//! continuous extension, specialised to an autonomous system with a 4×4
//! complex matrix state.

use thiserror::Error;

use crate::complexmat::ComplexMatrix4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrationError {
    #[error("step size underflow at t = {last_good_t}")]
    StepUnderflow { last_good_t: f64 },
    #[error("non-finite state at t = {last_good_t}")]
    NonFinite { last_good_t: f64 },
    #[error("step budget of {budget} exhausted at t = {last_good_t}")]
    StepBudget { budget: usize, last_good_t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// continuous extension
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const PI_BETA: f64 = 0.04;
const MAX_STEPS: usize = 10_000_000;

fn error_norm(err: &ComplexMatrix4, y0: &ComplexMatrix4, y1: &ComplexMatrix4, ctl: &StepControl) -> f64 {
    let mut acc = 0.0;
    for (i, j, e) in err.iter() {
        let sc = ctl.abs_tol + ctl.rel_tol * y0[(i, j)].norm().max(y1[(i, j)].norm());
        acc += (e.norm() / sc).powi(2);
    }
    (acc / 16.0).sqrt()
}

fn max_norm(m: &ComplexMatrix4) -> f64 {
    m.max_abs()
}

struct Dense {
    y0: ComplexMatrix4,
    diff: ComplexMatrix4,
    r3: ComplexMatrix4,
    r4: ComplexMatrix4,
    r5: ComplexMatrix4,
}

impl Dense {
    fn new(y0: &ComplexMatrix4, y1: &ComplexMatrix4, k: [&ComplexMatrix4; 7], h: f64) -> Self {
        let [k1, _, k3, k4, k5, k6, k7] = k;
        let diff = *y1 - *y0;
        let r3 = *k1 * h - diff;
        let r4 = diff - *k7 * h - r3;
        let r5 = (*k1 * D1 + *k3 * D3 + *k4 * D4 + *k5 * D5 + *k6 * D6 + *k7 * D7) * h;
        Self { y0: *y0, diff, r3, r4, r5 }
    }

    fn at(&self, theta: f64) -> ComplexMatrix4 {
        let one = 1.0 - theta;
        self.y0 + (self.diff + (self.r3 + (self.r4 + self.r5 * one) * theta) * one) * theta
    }
}

/// Integrates the autonomous system `y' = rhs(y)` from `t = 0` and reports the
/// solution at `t = k·output_dt` for `k = 0..=n_samples-1`.
///
/// `on_sample` may abort the run by returning an error, which is passed back
/// unchanged.
pub fn integrate_sampled<F, S, Err>(
    rhs: F,
    y0: ComplexMatrix4,
    ctl: &StepControl,
    output_dt: f64,
    n_samples: usize,
    mut on_sample: S,
) -> Result<Stats, Err>
where
    F: Fn(&ComplexMatrix4) -> ComplexMatrix4,
    S: FnMut(usize, f64, &ComplexMatrix4) -> Result<(), Err>,
    Err: From<IntegrationError>,
{
    let mut stats = Stats::default();
    on_sample(0, 0.0, &y0)?;
    if n_samples <= 1 {
        return Ok(stats);
    }
    let t_end = (n_samples - 1) as f64 * output_dt;
    let sample_time = |k: usize| k as f64 * output_dt;

    let mut t = 0.0;
    let mut y = y0;
    let mut f = rhs(&y);
    stats.rhs_evals += 1;
    let mut next_sample = 1;

    // initial step from the scale of y and y'
    let d0 = max_norm(&y);
    let d1 = max_norm(&f);
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h = h.min(ctl.max_step).min(t_end);
    let mut err_prev: f64 = 1e-4;
    let mut last_rejected = false;

    while next_sample < n_samples {
        if stats.accepted + stats.rejected >= MAX_STEPS {
            return Err(IntegrationError::StepBudget { budget: MAX_STEPS, last_good_t: t }.into());
        }
        if h < 1e-13 * t.abs().max(1.0) {
            return Err(IntegrationError::StepUnderflow { last_good_t: t }.into());
        }
        let remaining = t_end - t;
        let land_exactly = h >= remaining;
        if land_exactly {
            h = remaining;
        }

        let k1 = f;
        let k2 = rhs(&(y + k1 * (h * A21)));
        let k3 = rhs(&(y + (k1 * A31 + k2 * A32) * h));
        let k4 = rhs(&(y + (k1 * A41 + k2 * A42 + k3 * A43) * h));
        let k5 = rhs(&(y + (k1 * A51 + k2 * A52 + k3 * A53 + k4 * A54) * h));
        let k6 = rhs(&(y + (k1 * A61 + k2 * A62 + k3 * A63 + k4 * A64 + k5 * A65) * h));
        let y_new = y + (k1 * A71 + k3 * A73 + k4 * A74 + k5 * A75 + k6 * A76) * h;
        let k7 = rhs(&y_new);
        stats.rhs_evals += 6;

        if !y_new.is_finite() {
            return Err(IntegrationError::NonFinite { last_good_t: t }.into());
        }

        let err_est = (k1 * E1 + k3 * E3 + k4 * E4 + k5 * E5 + k6 * E6 + k7 * E7) * h;
        let err = error_norm(&err_est, &y, &y_new, ctl);

        if err <= 1.0 {
            stats.accepted += 1;
            let t_new = if land_exactly { t_end } else { t + h };
            let mut dense = None;
            while next_sample < n_samples && sample_time(next_sample) <= t_new * (1.0 + 1e-14) {
                let ts = sample_time(next_sample);
                let ys = if next_sample == n_samples - 1 && land_exactly {
                    y_new
                } else {
                    dense
                        .get_or_insert_with(|| Dense::new(&y, &y_new, [&k1, &k2, &k3, &k4, &k5, &k6, &k7], h))
                        .at(((ts - t) / h).clamp(0.0, 1.0))
                };
                on_sample(next_sample, ts, &ys)?;
                next_sample += 1;
            }

            let expo = 0.2 - PI_BETA * 0.75;
            let mut factor = SAFETY * err.max(1e-12).powf(-expo) * err_prev.powf(PI_BETA);
            factor = factor.clamp(MIN_FACTOR, MAX_FACTOR);
            if last_rejected {
                factor = factor.min(1.0);
            }
            err_prev = err.max(1e-4);
            t = t_new;
            y = y_new;
            f = k7;
            h = (h * factor).min(ctl.max_step);
            last_rejected = false;
        } else {
            stats.rejected += 1;
            let factor = (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
            h *= factor;
            last_rejected = true;
        }
    }
    Ok(stats)
}
