//! Solar generation at access-fog sites and energy-storage (battery)
//! charge/discharge dynamics.
//!
//! The charge and discharge percentages are read as one-way energy
//! efficiencies (0.7225 = 0.85^2 and 0.9025 = 0.95^2, the usual split of a
//! round-trip figure), not as rate limits; separate per-hour rate caps exist
//! for the alternative reading and default to the battery capacity, i.e.
//! unconstrained within an hour. Self-discharge is neglected.

use alloc::vec::Vec;

use crate::num;

pub const HOURS: usize = 24;

/// Hourly irradiance in W/m².
#[derive(Debug, Clone, PartialEq)]
pub struct SolarProfile {
    irradiance_w_per_m2: [f64; HOURS],
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EnergyError {
    #[error("hour {0} out of range (0..24)")]
    HourOutOfRange(usize),
    #[error("irradiance at hour {hour} is negative ({value})")]
    NegativeIrradiance { hour: usize, value: f64 },
    #[error("expected 24 hourly values, got {0}")]
    WrongLength(usize),
    #[error("invalid solar array: area {area} m², efficiency {efficiency}")]
    InvalidArray { area: f64, efficiency: f64 },
    #[error("invalid storage parameters: {0}")]
    InvalidEsdParams(&'static str),
    #[error("state of charge {soc} kWh outside [0, {e_max}]")]
    SocOutOfBounds { soc: f64, e_max: f64 },
    #[error("charge input {input} kWh exceeds per-hour cap {cap}")]
    ChargeRateExceeded { input: f64, cap: f64 },
    #[error("charging {input} kWh would push soc to {would} kWh, above capacity {e_max}")]
    ChargeOverflow { input: f64, would: f64, e_max: f64 },
    #[error("discharge draw {drawn} kWh exceeds per-hour cap {cap}")]
    DischargeRateExceeded { drawn: f64, cap: f64 },
    #[error("discharge draw {drawn} kWh exceeds stored energy {soc} kWh")]
    DischargeUnderflow { drawn: f64, soc: f64 },
    #[error("hour {hour}: {source}")]
    AtHour {
        hour: usize,
        source: alloc::boxed::Box<EnergyError>,
    },
    #[error("hour {hour}: solar split {serve}+{charge}+{curtail} does not match generation {generation}")]
    SolarBalance {
        hour: usize,
        serve: f64,
        charge: f64,
        curtail: f64,
        generation: f64,
    },
    #[error("hour {hour}: charge and discharge are both nonzero")]
    ChargeDischargeOverlap { hour: usize },
    #[error("cyclic day violated: final soc {end} kWh below initial {start} kWh")]
    CyclicViolated { start: f64, end: f64 },
}

impl SolarProfile {
    pub fn new(values: &[f64]) -> Result<Self, EnergyError> {
        if values.len() != HOURS {
            return Err(EnergyError::WrongLength(values.len()));
        }
        let mut irradiance_w_per_m2 = [0.0; HOURS];
        for (hour, &v) in values.iter().enumerate() {
            if v < 0.0 || !v.is_finite() {
                return Err(EnergyError::NegativeIrradiance { hour, value: v });
            }
            irradiance_w_per_m2[hour] = v;
        }
        Ok(Self { irradiance_w_per_m2 })
    }

    pub const fn zero() -> Self {
        Self {
            irradiance_w_per_m2: [0.0; HOURS],
        }
    }

    /// Synthetic default: zero outside 06:00-18:00, half-sine peaking at
    /// 1000 W/m² at noon. Not a measurement; replace with site data for any
    /// quantitative study.
    pub fn default_half_sine() -> Self {
        let mut v = [0.0; HOURS];
        for (hour, out) in v.iter_mut().enumerate() {
            let h = hour as f64;
            if h >= 6.0 && h <= 18.0 {
                *out = 1000.0 * libm::sin(core::f64::consts::PI * (h - 6.0) / 12.0);
            }
        }
        // sin() dust at the 06:00/18:00 boundaries.
        for out in v.iter_mut() {
            if *out < 1e-9 {
                *out = 0.0;
            }
        }
        Self {
            irradiance_w_per_m2: v,
        }
    }

    pub fn irradiance(&self, hour: usize) -> Result<f64, EnergyError> {
        self.irradiance_w_per_m2
            .get(hour)
            .copied()
            .ok_or(EnergyError::HourOutOfRange(hour))
    }

    pub fn values(&self) -> &[f64; HOURS] {
        &self.irradiance_w_per_m2
    }
}

/// Photovoltaic array on an access-fog site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolarArray {
    pub area_m2: f64,
    pub conversion_efficiency: f64,
}

impl Default for SolarArray {
    fn default() -> Self {
        Self {
            area_m2: 250.0,
            conversion_efficiency: 0.17,
        }
    }
}

impl SolarArray {
    pub fn validate(&self) -> Result<(), EnergyError> {
        if self.area_m2 < 0.0
            || !self.area_m2.is_finite()
            || self.conversion_efficiency <= 0.0
            || self.conversion_efficiency > 1.0
        {
            return Err(EnergyError::InvalidArray {
                area: self.area_m2,
                efficiency: self.conversion_efficiency,
            });
        }
        Ok(())
    }
}

/// Electrical output of the array at `hour`, in W.
pub fn solar_output(
    profile: &SolarProfile,
    array: &SolarArray,
    hour: usize,
) -> Result<f64, EnergyError> {
    let irr = profile.irradiance(hour)?;
    Ok(irr * array.area_m2 * array.conversion_efficiency)
}

/// kWh generated in each hour (1 h slots, so W / 1000).
pub fn generation_kwh(profile: &SolarProfile, array: &SolarArray) -> [f64; HOURS] {
    let mut out = [0.0; HOURS];
    for (hour, slot) in out.iter_mut().enumerate() {
        *slot = profile.irradiance_w_per_m2[hour] * array.area_m2 * array.conversion_efficiency
            / 1000.0;
    }
    out
}

/// Battery parameters. `eta_charge`/`eta_discharge` are one-way energy
/// efficiencies; the rate caps bound the energy moved through the terminals
/// in one hour (input before losses when charging, drawn from the cells when
/// discharging).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsdParams {
    pub e_max_kwh: f64,
    pub eta_charge: f64,
    pub eta_discharge: f64,
    pub max_charge_kwh_per_hour: f64,
    pub max_discharge_kwh_per_hour: f64,
}

impl Default for EsdParams {
    fn default() -> Self {
        Self::with_capacity(100.0)
    }
}

impl EsdParams {
    /// Default efficiencies with the given capacity; rate caps start at the
    /// capacity itself (no binding per-hour limit).
    pub fn with_capacity(e_max_kwh: f64) -> Self {
        Self {
            e_max_kwh,
            eta_charge: 0.7225,
            eta_discharge: 0.9025,
            max_charge_kwh_per_hour: e_max_kwh,
            max_discharge_kwh_per_hour: e_max_kwh,
        }
    }

    pub fn validate(&self) -> Result<(), EnergyError> {
        if !(self.e_max_kwh > 0.0) {
            return Err(EnergyError::InvalidEsdParams("e_max must be positive"));
        }
        if !(self.eta_charge > 0.0 && self.eta_charge <= 1.0) {
            return Err(EnergyError::InvalidEsdParams("eta_charge outside (0, 1]"));
        }
        if !(self.eta_discharge > 0.0 && self.eta_discharge <= 1.0) {
            return Err(EnergyError::InvalidEsdParams("eta_discharge outside (0, 1]"));
        }
        if self.max_charge_kwh_per_hour < 0.0 || self.max_discharge_kwh_per_hour < 0.0 {
            return Err(EnergyError::InvalidEsdParams("negative rate cap"));
        }
        Ok(())
    }
}

/// Battery state of charge, in kWh stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsdState {
    pub soc_kwh: f64,
}

impl EsdState {
    pub const EMPTY: Self = Self { soc_kwh: 0.0 };

    pub fn new(soc_kwh: f64, params: &EsdParams) -> Result<Self, EnergyError> {
        let state = Self { soc_kwh };
        state.check(params)?;
        Ok(state)
    }

    pub fn check(&self, params: &EsdParams) -> Result<(), EnergyError> {
        if self.soc_kwh < -1e-12 || self.soc_kwh > params.e_max_kwh + 1e-12 {
            return Err(EnergyError::SocOutOfBounds {
                soc: self.soc_kwh,
                e_max: params.e_max_kwh,
            });
        }
        Ok(())
    }
}

/// Push `input_kwh` into the battery; `input_kwh * eta_charge` is stored.
pub fn esd_charge(
    state: EsdState,
    params: &EsdParams,
    input_kwh: f64,
) -> Result<EsdState, EnergyError> {
    if input_kwh < 0.0 {
        return Err(EnergyError::InvalidEsdParams("negative charge input"));
    }
    if input_kwh > params.max_charge_kwh_per_hour + 1e-12 {
        return Err(EnergyError::ChargeRateExceeded {
            input: input_kwh,
            cap: params.max_charge_kwh_per_hour,
        });
    }
    let would = state.soc_kwh + input_kwh * params.eta_charge;
    if would > params.e_max_kwh + 1e-9 {
        return Err(EnergyError::ChargeOverflow {
            input: input_kwh,
            would,
            e_max: params.e_max_kwh,
        });
    }
    Ok(EsdState {
        soc_kwh: num::min(would, params.e_max_kwh),
    })
}

/// Deliver `delivered_kwh` to the load; `delivered_kwh / eta_discharge` is
/// drawn from the cells.
pub fn esd_discharge(
    state: EsdState,
    params: &EsdParams,
    delivered_kwh: f64,
) -> Result<EsdState, EnergyError> {
    if delivered_kwh < 0.0 {
        return Err(EnergyError::InvalidEsdParams("negative discharge request"));
    }
    let drawn = delivered_kwh / params.eta_discharge;
    if drawn > params.max_discharge_kwh_per_hour + 1e-12 {
        return Err(EnergyError::DischargeRateExceeded {
            drawn,
            cap: params.max_discharge_kwh_per_hour,
        });
    }
    if drawn > state.soc_kwh + 1e-9 {
        return Err(EnergyError::DischargeUnderflow {
            drawn,
            soc: state.soc_kwh,
        });
    }
    Ok(EsdState {
        soc_kwh: num::max(state.soc_kwh - drawn, 0.0),
    })
}

/// One hour of a dispatch decision, all in kWh.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HourDispatch {
    pub solar_serve_kwh: f64,
    pub solar_charge_kwh: f64,
    pub solar_curtail_kwh: f64,
    pub discharge_delivered_kwh: f64,
}

/// Result of stepping one site's energy balance through the day.
#[derive(Debug, Clone, PartialEq)]
pub struct DayEnergy {
    pub brown_w: Vec<f64>,
    /// State of charge at the end of each hour.
    pub soc_kwh: Vec<f64>,
    pub final_state: EsdState,
}

/// Steps a site's solar + battery balance hour by hour, checking every
/// invariant as it goes: the solar split must match generation, charge and
/// discharge are mutually exclusive, and soc stays within bounds. Brown power
/// is whatever load the solar share and discharge do not cover. When `cyclic`
/// is set the final soc may not fall below the initial one.
pub fn simulate_energy_day(
    solar_kwh: &[f64; HOURS],
    esd: Option<&EsdParams>,
    initial: EsdState,
    load_w: &[f64; HOURS],
    dispatch: &[HourDispatch; HOURS],
    cyclic: bool,
) -> Result<DayEnergy, EnergyError> {
    let at = |hour: usize, e: EnergyError| EnergyError::AtHour {
        hour,
        source: alloc::boxed::Box::new(e),
    };
    if let Some(params) = esd {
        params.validate()?;
        initial.check(params)?;
    }
    let mut state = initial;
    let mut brown_w = Vec::with_capacity(HOURS);
    let mut soc_trace = Vec::with_capacity(HOURS);
    for hour in 0..HOURS {
        let d = &dispatch[hour];
        if d.solar_serve_kwh < 0.0
            || d.solar_charge_kwh < 0.0
            || d.solar_curtail_kwh < 0.0
            || d.discharge_delivered_kwh < 0.0
        {
            return Err(at(hour, EnergyError::InvalidEsdParams("negative dispatch")));
        }
        let split = d.solar_serve_kwh + d.solar_charge_kwh + d.solar_curtail_kwh;
        if !num::close(split, solar_kwh[hour], 1e-9) {
            return Err(EnergyError::SolarBalance {
                hour,
                serve: d.solar_serve_kwh,
                charge: d.solar_charge_kwh,
                curtail: d.solar_curtail_kwh,
                generation: solar_kwh[hour],
            });
        }
        if d.solar_charge_kwh > 1e-12 && d.discharge_delivered_kwh > 1e-12 {
            return Err(EnergyError::ChargeDischargeOverlap { hour });
        }
        match esd {
            Some(params) => {
                if d.solar_charge_kwh > 0.0 {
                    state = esd_charge(state, params, d.solar_charge_kwh).map_err(|e| at(hour, e))?;
                }
                if d.discharge_delivered_kwh > 0.0 {
                    state = esd_discharge(state, params, d.discharge_delivered_kwh)
                        .map_err(|e| at(hour, e))?;
                }
                state.check(params).map_err(|e| at(hour, e))?;
            }
            None => {
                if d.solar_charge_kwh > 1e-12 || d.discharge_delivered_kwh > 1e-12 {
                    return Err(at(
                        hour,
                        EnergyError::InvalidEsdParams("dispatch uses storage but none configured"),
                    ));
                }
            }
        }
        let covered_w = 1000.0 * (d.solar_serve_kwh + d.discharge_delivered_kwh);
        brown_w.push(num::max(0.0, load_w[hour] - covered_w));
        soc_trace.push(state.soc_kwh);
    }
    if cyclic && state.soc_kwh < initial.soc_kwh - 1e-9 {
        return Err(EnergyError::CyclicViolated {
            start: initial.soc_kwh,
            end: state.soc_kwh,
        });
    }
    Ok(DayEnergy {
        brown_w,
        soc_kwh: soc_trace,
        final_state: state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn solar_output_is_the_product() {
        let mut values = [0.0; HOURS];
        values[12] = 1000.0;
        let profile = SolarProfile::new(&values).unwrap();
        let array = SolarArray {
            area_m2: 250.0,
            conversion_efficiency: 0.17,
        };
        assert_abs_diff_eq!(
            solar_output(&profile, &array, 12).unwrap(),
            42_500.0,
            epsilon = 1e-9
        );
        assert_eq!(solar_output(&profile, &array, 3).unwrap(), 0.0);
        let no_area = SolarArray {
            area_m2: 0.0,
            conversion_efficiency: 0.17,
        };
        assert_eq!(solar_output(&profile, &no_area, 12).unwrap(), 0.0);
        assert!(matches!(
            solar_output(&profile, &array, 24),
            Err(EnergyError::HourOutOfRange(24))
        ));
    }

    #[test]
    fn default_profile_shape() {
        let p = SolarProfile::default_half_sine();
        assert_eq!(p.irradiance(0).unwrap(), 0.0);
        assert_eq!(p.irradiance(5).unwrap(), 0.0);
        assert_abs_diff_eq!(p.irradiance(12).unwrap(), 1000.0, epsilon = 1e-9);
        assert_eq!(p.irradiance(18).unwrap(), 0.0);
        assert_eq!(p.irradiance(23).unwrap(), 0.0);
        assert!(p.irradiance(9).unwrap() > 0.0);
    }

    #[test]
    fn charge_applies_one_way_efficiency() {
        let params = EsdParams::default();
        let s = esd_charge(EsdState { soc_kwh: 50.0 }, &params, 10.0).unwrap();
        assert_abs_diff_eq!(s.soc_kwh, 57.225, epsilon = 1e-12);

        // 95 + 7.225 > 100 kWh capacity.
        let err = esd_charge(EsdState { soc_kwh: 95.0 }, &params, 10.0).unwrap_err();
        assert!(matches!(err, EnergyError::ChargeOverflow { .. }));

        let s = esd_charge(EsdState { soc_kwh: 42.0 }, &params, 0.0).unwrap();
        assert_eq!(s.soc_kwh, 42.0);
    }

    #[test]
    fn discharge_draws_more_than_it_delivers() {
        let params = EsdParams::default();
        let s = esd_discharge(EsdState { soc_kwh: 57.225 }, &params, 9.025).unwrap();
        assert_abs_diff_eq!(s.soc_kwh, 47.225, epsilon = 1e-12);

        let s = esd_discharge(EsdState { soc_kwh: 5.0 }, &params, 0.0).unwrap();
        assert_eq!(s.soc_kwh, 5.0);

        // Would draw 10 kWh from a 5 kWh store.
        let err = esd_discharge(EsdState { soc_kwh: 5.0 }, &params, 9.025).unwrap_err();
        assert!(matches!(err, EnergyError::DischargeUnderflow { .. }));
    }

    #[test]
    fn round_trip_keeps_the_efficiency_product() {
        let params = EsdParams::default();
        let charged = esd_charge(EsdState::EMPTY, &params, 40.0).unwrap();
        let deliverable = charged.soc_kwh * params.eta_discharge;
        let emptied = esd_discharge(charged, &params, deliverable).unwrap();
        assert_abs_diff_eq!(emptied.soc_kwh, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(
            deliverable / 40.0,
            0.7225 * 0.9025,
            epsilon = 1e-12
        );
    }

    #[test]
    fn zero_day_is_a_no_op() {
        let solar = [0.0; HOURS];
        let load = [0.0; HOURS];
        let dispatch = [HourDispatch::default(); HOURS];
        let out = simulate_energy_day(
            &solar,
            Some(&EsdParams::default()),
            EsdState { soc_kwh: 30.0 },
            &load,
            &dispatch,
            false,
        )
        .unwrap();
        assert!(out.brown_w.iter().all(|&b| b == 0.0));
        assert_eq!(out.final_state.soc_kwh, 30.0);
    }

    #[test]
    fn full_battery_sustains_its_deliverable_energy() {
        // Constant 10 kW load, no solar, full 100 kWh battery. Deliverable is
        // 90.25 kWh: 9 full hours at 10 kW plus a 0.25 kWh tail in hour 9.
        // Stepping the recurrence by hand: each full hour draws
        // 10 / 0.9025 = 11.0803... kWh; hour 9 has 0.2770 kWh left in the
        // cells, delivering 0.25 kWh.
        let params = EsdParams::default();
        let solar = [0.0; HOURS];
        let load = [10_000.0; HOURS];
        let mut dispatch = [HourDispatch::default(); HOURS];
        let mut soc = 100.0f64;
        for d in dispatch.iter_mut() {
            let deliverable = soc * params.eta_discharge;
            let delivered = deliverable.min(10.0);
            d.discharge_delivered_kwh = delivered;
            soc -= delivered / params.eta_discharge;
        }
        let out = simulate_energy_day(
            &solar,
            Some(&params),
            EsdState { soc_kwh: 100.0 },
            &load,
            &dispatch,
            false,
        )
        .unwrap();
        let delivered_total: f64 = dispatch.iter().map(|d| d.discharge_delivered_kwh).sum();
        assert_abs_diff_eq!(delivered_total, 90.25, epsilon = 1e-9);
        for h in 0..9 {
            assert_abs_diff_eq!(out.brown_w[h], 0.0, epsilon = 1e-9);
        }
        // Hour 9 is partially covered, hours 10.. fully brown.
        assert!(out.brown_w[9] > 0.0 && out.brown_w[9] < 10_000.0);
        for h in 10..HOURS {
            assert_abs_diff_eq!(out.brown_w[h], 10_000.0, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(out.final_state.soc_kwh, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn curtailing_everything_leaves_load_brown() {
        let mut solar = [0.0; HOURS];
        solar[10] = 20.0;
        let load = [4_000.0; HOURS];
        let mut dispatch = [HourDispatch::default(); HOURS];
        dispatch[10].solar_curtail_kwh = 20.0;
        let out =
            simulate_energy_day(&solar, None, EsdState::EMPTY, &load, &dispatch, false).unwrap();
        assert!(out.brown_w.iter().all(|&b| (b - 4_000.0).abs() < 1e-9));
    }

    #[test]
    fn detects_balance_and_exclusivity_violations() {
        let mut solar = [0.0; HOURS];
        solar[10] = 20.0;
        let load = [0.0; HOURS];

        let mut dispatch = [HourDispatch::default(); HOURS];
        dispatch[10].solar_serve_kwh = 5.0; // 15 kWh unaccounted
        let err = simulate_energy_day(&solar, None, EsdState::EMPTY, &load, &dispatch, false)
            .unwrap_err();
        assert!(matches!(err, EnergyError::SolarBalance { hour: 10, .. }));

        let mut dispatch = [HourDispatch::default(); HOURS];
        dispatch[10].solar_charge_kwh = 20.0;
        dispatch[10].discharge_delivered_kwh = 1.0;
        let err = simulate_energy_day(
            &solar,
            Some(&EsdParams::default()),
            EsdState { soc_kwh: 50.0 },
            &load,
            &dispatch,
            false,
        )
        .unwrap_err();
        assert!(matches!(err, EnergyError::ChargeDischargeOverlap { hour: 10 }));
    }

    #[test]
    fn cyclic_flag_rejects_net_drain() {
        let solar = [0.0; HOURS];
        let load = [1_000.0; HOURS];
        let mut dispatch = [HourDispatch::default(); HOURS];
        dispatch[0].discharge_delivered_kwh = 1.0;
        let err = simulate_energy_day(
            &solar,
            Some(&EsdParams::default()),
            EsdState { soc_kwh: 10.0 },
            &load,
            &dispatch,
            true,
        )
        .unwrap_err();
        assert!(matches!(err, EnergyError::CyclicViolated { .. }));
    }

    #[test]
    fn conservation_with_losses_over_random_walks() {
        use rand::{Rng, SeedableRng};
        let params = EsdParams::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut state = EsdState { soc_kwh: 20.0 };
        let mut charged = 0.0;
        let mut delivered = 0.0;
        for _ in 0..10_000 {
            if rng.gen_bool(0.5) {
                let room = (params.e_max_kwh - state.soc_kwh) / params.eta_charge;
                let cap = room.min(params.max_charge_kwh_per_hour).max(0.0);
                let input = rng.gen_range(0.0..=cap);
                state = esd_charge(state, &params, input).unwrap();
                charged += input;
            } else {
                let avail = state.soc_kwh * params.eta_discharge;
                let out = rng.gen_range(0.0..=avail.max(0.0));
                state = esd_discharge(state, &params, out).unwrap();
                delivered += out;
            }
            assert!(state.soc_kwh >= 0.0 && state.soc_kwh <= params.e_max_kwh + 1e-9);
        }
        let expected = 20.0 + charged * params.eta_charge - delivered / params.eta_discharge;
        assert_abs_diff_eq!(state.soc_kwh, expected, epsilon = 1e-6);
    }
}
