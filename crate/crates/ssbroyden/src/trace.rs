//! Per-iteration run records.
//!
//! Every optimizer emits one [`TraceRecord`] per iteration. The CSV rendering
//! used by the command-line harness lives here too, so that determinism tests
//! can compare serialized traces without going through a file.

use crate::Real;

/// What happened during an iteration beyond the ordinary accept-and-update.
///
/// When several conditions coincide the most consequential one is recorded:
/// `Fallback` over `SkippedUpdate` over `DegenerateScaling` over `Normal`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Event {
    /// Plain accepted step with a regular curvature update.
    Normal,
    /// Curvature update skipped (yᵀs at or below the safeguard threshold).
    SkippedUpdate,
    /// Self-scaling chain hit its degenerate branch (a_k ≈ 0) and the
    /// iteration fell back to an unscaled BFGS update.
    DegenerateScaling,
    /// A fallback path ran: trust-region Cauchy step on a non-SPD model,
    /// or a line search that exhausted its budget and accepted the best
    /// Armijo-satisfying trial.
    Fallback,
}

impl Event {
    pub fn as_str(self) -> &'static str {
        match self {
            Event::Normal => "normal",
            Event::SkippedUpdate => "skipped_update",
            Event::DegenerateScaling => "degenerate_scaling",
            Event::Fallback => "fallback",
        }
    }
}

impl std::fmt::Display for Event {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One iteration of an optimizer run.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    /// Iteration counter, strictly increasing from 1.
    pub iter: u64,
    /// Objective value after the iteration's step.
    pub f: Real,
    /// Euclidean norm of the gradient at the new iterate.
    pub gnorm_l2: Real,
    /// Max-magnitude norm of the same gradient.
    pub gnorm_inf: Real,
    /// Accepted step length (line-search modes) or current trust radius.
    pub alpha: Real,
    /// Cumulative objective-value evaluations.
    pub n_fev: u64,
    /// Cumulative gradient evaluations.
    pub n_gev: u64,
    /// Wall-clock seconds since the run started.
    pub elapsed_s: Real,
    pub event: Event,
}

/// Header matching [`TraceRecord::csv_row`].
pub const CSV_HEADER: &str = "iter,f,gnorm_l2,gnorm_inf,alpha,n_fev,n_gev,elapsed_s,event";

impl TraceRecord {
    /// Render as a CSV row.
    ///
    /// Floats use shortest round-trip formatting, so parsing the row
    /// recovers every value bit-exactly.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.iter,
            self.f,
            self.gnorm_l2,
            self.gnorm_inf,
            self.alpha,
            self.n_fev,
            self.n_gev,
            self.elapsed_s,
            self.event
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_row_round_trips() {
        let rec = TraceRecord {
            iter: 3,
            f: 1.0 / 3.0,
            gnorm_l2: 2.5e-7,
            gnorm_inf: 1.0e-7,
            alpha: 0.5,
            n_fev: 11,
            n_gev: 7,
            elapsed_s: 0.001953,
            event: Event::Normal,
        };
        let row = rec.csv_row();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), CSV_HEADER.split(',').count());
        assert_eq!(fields[0].parse::<u64>().unwrap(), 3);
        // Shortest round-trip: parsing recovers the exact bits.
        assert_eq!(fields[1].parse::<Real>().unwrap(), 1.0 / 3.0);
        assert_eq!(fields[2].parse::<Real>().unwrap(), 2.5e-7);
        assert_eq!(fields[8], "normal");
    }

    #[test]
    fn event_labels() {
        assert_eq!(Event::Normal.to_string(), "normal");
        assert_eq!(Event::SkippedUpdate.to_string(), "skipped_update");
        assert_eq!(Event::DegenerateScaling.to_string(), "degenerate_scaling");
        assert_eq!(Event::Fallback.to_string(), "fallback");
    }
}
