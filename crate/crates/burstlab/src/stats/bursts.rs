//! Threshold-crossing extraction of burst and inter-burst durations.
//!
//! A burst is the time a series spends above a threshold between two
//! consecutive crossings; an inter-burst the time below. Crossing instants
//! are located by linear interpolation between the straddling samples, so
//! durations are not quantized to the grid. Partial intervals at the ends of
//! the series are discarded.

use crate::timeseries::TimeSeries;

/// Which side of the threshold an interval lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum DurationKind {
    /// Above the threshold.
    Burst,
    /// Below the threshold.
    InterBurst,
}

/// One burst or inter-burst interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DurationSample {
    pub kind: DurationKind,
    pub t_start: f64,
    pub t_end: f64,
}

impl DurationSample {
    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }
}

/// Extract alternating burst/inter-burst intervals of `s` around `threshold`.
///
/// Samples exactly on the threshold count as below. Fewer than two crossings
/// yield an empty result.
pub fn extract_durations(s: &TimeSeries, threshold: f64) -> Vec<DurationSample> {
    let values = s.values();
    let mut out = Vec::new();
    let mut prev_cross: Option<(f64, bool)> = None; // (time, series above after crossing)
    let mut above = values[0] > threshold;
    for i in 1..values.len() {
        let now_above = values[i] > threshold;
        if now_above != above {
            let v0 = values[i - 1];
            let v1 = values[i];
            let frac = (threshold - v0) / (v1 - v0);
            let t = s.t0() + s.dt() * ((i - 1) as f64 + frac);
            if let Some((t_prev, was_above)) = prev_cross {
                out.push(DurationSample {
                    kind: if was_above {
                        DurationKind::Burst
                    } else {
                        DurationKind::InterBurst
                    },
                    t_start: t_prev,
                    t_end: t,
                });
            }
            prev_cross = Some((t, now_above));
            above = now_above;
        }
    }
    out
}

/// Durations of one kind (or both) as plain numbers.
pub fn durations_of(samples: &[DurationSample], kind: Option<DurationKind>) -> Vec<f64> {
    samples
        .iter()
        .filter(|d| kind.map_or(true, |k| d.kind == k))
        .map(|d| d.duration())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn series(values: &[f64]) -> TimeSeries {
        TimeSeries::new(0.0, 1.0, values.to_vec()).unwrap()
    }

    #[test]
    fn hand_traced_interpolation() {
        let s = series(&[0.4, 0.7, 0.8, 0.45, 0.3, 0.65]);
        let d = extract_durations(&s, 0.5);
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].kind, DurationKind::Burst);
        assert_relative_eq!(d[0].t_start, 1.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(d[0].t_end, 2.0 + 0.3 / 0.35, max_relative = 1e-12);
        assert_relative_eq!(d[0].duration(), 2.5238095238095237, max_relative = 1e-12);
        assert_eq!(d[1].kind, DurationKind::InterBurst);
        assert_relative_eq!(d[1].duration(), 1.7142857142857144, max_relative = 1e-12);
    }

    #[test]
    fn constant_series_has_no_crossings() {
        let s = series(&[0.5; 32]);
        assert!(extract_durations(&s, 0.5).is_empty());
        assert!(extract_durations(&s, 0.2).is_empty());
    }

    #[test]
    fn single_crossing_yields_nothing() {
        let s = series(&[0.0, 1.0]);
        assert!(extract_durations(&s, 0.5).is_empty());
    }

    #[test]
    fn negation_swaps_kinds_keeps_durations() {
        let s = series(&[0.2, 0.9, 0.1, 0.8, 0.85, 0.05, 0.6, 0.3]);
        let d = extract_durations(&s, 0.5);
        let neg = s.map(|v| -v).unwrap();
        let dn = extract_durations(&neg, -0.5);
        assert_eq!(d.len(), dn.len());
        for (a, b) in d.iter().zip(&dn) {
            assert_ne!(a.kind, b.kind);
            assert_relative_eq!(a.duration(), b.duration(), max_relative = 1e-12);
        }
    }

    #[test]
    fn kinds_alternate_and_times_conserve() {
        // deterministic zig-zag with irregular amplitudes
        let values: Vec<f64> = (0..500)
            .map(|i| {
                let i = i as f64;
                (i * 0.7).sin() + 0.3 * (i * 0.23).cos()
            })
            .collect();
        let s = series(&values);
        let d = extract_durations(&s, 0.1);
        assert!(d.len() > 10);
        for w in d.windows(2) {
            assert_ne!(w[0].kind, w[1].kind);
            assert_relative_eq!(w[0].t_end, w[1].t_start, max_relative = 1e-12);
        }
        let total: f64 = d.iter().map(|x| x.duration()).sum();
        let span = d.last().unwrap().t_end - d[0].t_start;
        assert!((total - span).abs() <= 1e-9 * span.abs());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn alternation_and_conservation_hold_for_any_series(
                values in proptest::collection::vec(-1.0f64..1.0, 3..400),
                threshold in -0.5f64..0.5,
            ) {
                let s = series(&values);
                let d = extract_durations(&s, threshold);
                for w in d.windows(2) {
                    prop_assert_ne!(w[0].kind, w[1].kind);
                    prop_assert!((w[0].t_end - w[1].t_start).abs() < 1e-12);
                }
                if d.len() >= 2 {
                    let total: f64 = d.iter().map(|x| x.duration()).sum();
                    let span = d.last().unwrap().t_end - d[0].t_start;
                    prop_assert!((total - span).abs() <= 1e-9 * span.abs().max(1.0));
                }
                prop_assert!(d.iter().all(|x| x.duration() > 0.0));
            }

            #[test]
            fn negation_mirrors_kinds(
                values in proptest::collection::vec(-1.0f64..1.0, 3..200),
                threshold in -0.5f64..0.5,
            ) {
                let s = series(&values);
                let d = extract_durations(&s, threshold);
                let neg = s.map(|v| -v).unwrap();
                let dn = extract_durations(&neg, -threshold);
                prop_assert_eq!(d.len(), dn.len());
                for (a, b) in d.iter().zip(&dn) {
                    prop_assert_ne!(a.kind, b.kind);
                    prop_assert!((a.duration() - b.duration()).abs() < 1e-12);
                }
            }
        }
    }
}
