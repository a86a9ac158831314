use serde::{Deserialize, Serialize};

use crate::complexmat::ComplexMatrix4;
use crate::dynamics::Trajectory;
use crate::entanglement::concurrence;
use crate::state::DickeState;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EntanglementEvents {
    /// Start of each dead interval that follows a living one.
    pub death_times: Vec<f64>,
    /// End of each such dead interval, when the run revives before it ends.
    pub revival_times: Vec<f64>,
    /// Largest sampled concurrence between a revival and the next death.
    pub revival_amplitudes: Vec<f64>,
    pub revival_peak_times: Vec<f64>,
}

impl EntanglementEvents {
    pub fn is_empty(&self) -> bool {
        self.death_times.is_empty()
    }
}

/// Lagrange interpolation of the state through up to four samples around
/// `[t_k, t_{k+1}]`.
fn interpolate(traj: &Trajectory, k: usize, t: f64) -> ComplexMatrix4 {
    let n = traj.len();
    let width = n.min(4);
    let first = k.saturating_sub(1).min(n - width);
    let idx = first..first + width;
    let mut out = ComplexMatrix4::zeros();
    for i in idx.clone() {
        let mut w = 1.0;
        for j in idx.clone() {
            if j != i {
                w *= (t - traj.times[j]) / (traj.times[i] - traj.times[j]);
            }
        }
        out += *traj.states[i].rho() * w;
    }
    out
}

/// Signed concurrence branch for X-shaped states, so the bisection sees a
/// smooth sign change instead of a kink at zero.
fn level(traj: &Trajectory, k: usize, t: f64) -> f64 {
    let state = DickeState::new_unchecked(interpolate(traj, k, t));
    match concurrence(&state) {
        Ok(b) if state.is_block_form() => b.signed(),
        Ok(b) => b.c,
        Err(_) => f64::NAN,
    }
}

/// Bisects for the threshold crossing in `[t_k, t_{k+1}]`.
fn refine(traj: &Trajectory, k: usize, threshold: f64, resolution: f64) -> f64 {
    let (mut lo, mut hi) = (traj.times[k], traj.times[k + 1]);
    let alive_at_lo = traj.derived[k].concurrence > threshold;
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        let v = level(traj, k, mid);
        // NaN keeps the bracket moving towards the sampled side
        if (v > threshold) == alive_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Dead intervals are maximal runs of samples with concurrence at or below
/// `zero_threshold`; runs that start at the first sample are not deaths.
/// Boundaries are refined to `output_dt/100`.
pub fn detect_events(traj: &Trajectory, zero_threshold: f64) -> EntanglementEvents {
    let mut events = EntanglementEvents::default();
    let n = traj.len();
    if n < 3 {
        return events;
    }
    let c = traj.concurrence();
    let resolution = traj.output_dt() / 100.0;
    let dead = |k: usize| c[k] <= zero_threshold;

    let mut k = 0;
    while k < n {
        if !dead(k) {
            k += 1;
            continue;
        }
        let start = k;
        while k < n && dead(k) {
            k += 1;
        }
        if start == 0 {
            continue;
        }
        events.death_times.push(refine(traj, start - 1, zero_threshold, resolution));
        if k < n {
            events.revival_times.push(refine(traj, k - 1, zero_threshold, resolution));
            let next_dead = (k..n).find(|&j| dead(j)).unwrap_or(n);
            let (peak, amp) = (k..next_dead)
                .map(|j| (j, c[j]))
                .fold((k, f64::MIN), |best, cur| if cur.1 > best.1 { cur } else { best });
            events.revival_amplitudes.push(amp);
            events.revival_peak_times.push(traj.times[peak]);
        }
    }
    events
}
