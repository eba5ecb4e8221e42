//! Per-access-group, per-hour VoD demand in Gbps.
//!
//! The reference demand figures behind the scenario studies are not public;
//! reproduction runs ship a synthetic calibration profile and report relative
//! savings only, never absolute Watts.

use alloc::vec;
use alloc::vec::Vec;

use crate::energy::HOURS;
use crate::topology::{CoreTopology, GroupId};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DemandError {
    #[error("group {group} hour {hour}: negative demand {value}")]
    Negative { group: usize, hour: usize, value: f64 },
    #[error("expected {expected} groups, got {got}")]
    GroupCountMismatch { expected: usize, got: usize },
    #[error("negative peak {0}")]
    NegativePeak(f64),
}

/// demand[group][hour] in Gbps, 24 hours.
#[derive(Debug, Clone, PartialEq)]
pub struct DemandProfile {
    groups: usize,
    data: Vec<f64>, // row-major [group][hour]
}

impl DemandProfile {
    pub fn new(groups: usize, data: Vec<f64>) -> Result<Self, DemandError> {
        assert_eq!(data.len(), groups * HOURS, "row-major group x 24 matrix");
        for (i, &v) in data.iter().enumerate() {
            if v < 0.0 || !v.is_finite() {
                return Err(DemandError::Negative {
                    group: i / HOURS,
                    hour: i % HOURS,
                    value: v,
                });
            }
        }
        Ok(Self { groups, data })
    }

    pub fn zero(groups: usize) -> Self {
        Self {
            groups,
            data: vec![0.0; groups * HOURS],
        }
    }

    /// Fails unless the profile covers exactly the topology's access groups.
    pub fn check_topology(&self, topo: &CoreTopology) -> Result<(), DemandError> {
        if self.groups != topo.group_count() {
            return Err(DemandError::GroupCountMismatch {
                expected: topo.group_count(),
                got: self.groups,
            });
        }
        Ok(())
    }

    pub fn group_count(&self) -> usize {
        self.groups
    }

    pub fn get(&self, group: GroupId, hour: usize) -> f64 {
        self.data[group.0 * HOURS + hour]
    }

    pub fn set(&mut self, group: GroupId, hour: usize, value: f64) {
        self.data[group.0 * HOURS + hour] = value;
    }

    pub fn row(&self, group: GroupId) -> &[f64] {
        &self.data[group.0 * HOURS..(group.0 + 1) * HOURS]
    }

    pub fn total_gbps(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn max_cell(&self) -> f64 {
        self.data.iter().fold(0.0f64, |a, &b| if b > a { b } else { a })
    }
}

/// Shape of a synthesized demand day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DemandShape {
    #[default]
    Flat,
    /// Diurnal curve, minimum at 05:00 and maximum at 21:00, max/min = 4.
    EveningPeak,
}

/// Builds a demand profile with the given peak for every group.
pub fn synth_demand(
    peak_gbps_per_group: f64,
    shape: DemandShape,
    topo: &CoreTopology,
) -> Result<DemandProfile, DemandError> {
    if peak_gbps_per_group < 0.0 || !peak_gbps_per_group.is_finite() {
        return Err(DemandError::NegativePeak(peak_gbps_per_group));
    }
    let day = day_curve(peak_gbps_per_group, shape);
    let mut data = Vec::with_capacity(topo.group_count() * HOURS);
    for _ in 0..topo.group_count() {
        data.extend_from_slice(&day);
    }
    DemandProfile::new(topo.group_count(), data)
}

fn day_curve(peak: f64, shape: DemandShape) -> [f64; HOURS] {
    let mut out = [0.0; HOURS];
    match shape {
        DemandShape::Flat => {
            out = [peak; HOURS];
        }
        DemandShape::EveningPeak => {
            // Piecewise raised cosine: rises over the 16 h from 05:00 to
            // 21:00, falls over the 8 h back to 05:00; periodic and smooth.
            let min = peak / 4.0;
            for (hour, slot) in out.iter_mut().enumerate() {
                let h = hour as f64;
                let s = if (5.0..=21.0).contains(&h) {
                    (1.0 - libm::cos(core::f64::consts::PI * (h - 5.0) / 16.0)) / 2.0
                } else {
                    let since_peak = if h > 21.0 { h - 21.0 } else { h + 3.0 };
                    (1.0 + libm::cos(core::f64::consts::PI * since_peak / 8.0)) / 2.0
                };
                *slot = min + (peak - min) * s;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::CoreTopology;
    use approx::assert_abs_diff_eq;

    fn two_nodes() -> CoreTopology {
        CoreTopology::from_edges(2, &[(0, 1, 100.0)]).unwrap()
    }

    #[test]
    fn zero_peak_gives_zero_profile() {
        let topo = two_nodes();
        let d = synth_demand(0.0, DemandShape::EveningPeak, &topo).unwrap();
        assert_eq!(d.total_gbps(), 0.0);
    }

    #[test]
    fn flat_shape_is_constant() {
        let topo = two_nodes();
        let d = synth_demand(100.0, DemandShape::Flat, &topo).unwrap();
        for g in topo.groups() {
            for h in 0..HOURS {
                assert_eq!(d.get(g, h), 100.0);
            }
        }
    }

    #[test]
    fn evening_peak_hits_declared_extremes() {
        let topo = two_nodes();
        let d = synth_demand(100.0, DemandShape::EveningPeak, &topo).unwrap();
        let g = GroupId(0);
        assert_abs_diff_eq!(d.get(g, 21), 100.0, epsilon = 1e-9);
        assert_abs_diff_eq!(d.get(g, 5), 25.0, epsilon = 1e-9);
        // Declared peak and max/min ratio hold to 1e-9 relative.
        let row = d.row(g);
        let max = row.iter().cloned().fold(0.0f64, f64::max);
        let min = row.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_abs_diff_eq!(max, 100.0, epsilon = 1e-7);
        assert_abs_diff_eq!(max / min, 4.0, epsilon = 1e-7);
    }

    #[test]
    fn rejects_negative_values() {
        let mut data = vec![0.0; 2 * HOURS];
        data[HOURS + 3] = -1.0;
        let err = DemandProfile::new(2, data).unwrap_err();
        assert_eq!(
            err,
            DemandError::Negative {
                group: 1,
                hour: 3,
                value: -1.0
            }
        );
    }
}
