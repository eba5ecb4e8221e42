//! Float helpers shared by the power and energy models.
//!
//! Device counts come from ceilings of load/capacity ratios. Both loads and
//! capacities are binary floats (158.4, 1.8, ...), so a naive `ceil` can land
//! one unit too high when the exact ratio is an integer but the computed
//! quotient is a hair above it. The counting helpers therefore snap to the
//! nearest integer first when the quotient is within `REL_TOL` of it.

/// Relative tolerance used to snap near-integer quotients.
pub(crate) const REL_TOL: f64 = 1e-9;

pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// Number of `unit`-sized devices needed to carry `x` (ceiling, snapped).
/// Non-positive loads need zero devices.
pub(crate) fn ceil_units(x: f64, unit: f64) -> u64 {
    debug_assert!(unit > 0.0);
    if x <= 0.0 {
        return 0;
    }
    let q = x / unit;
    let near = libm::round(q);
    if abs(q - near) <= REL_TOL * max(1.0, q) {
        return near as u64;
    }
    let t = q as u64; // truncation == floor for q > 0
    if (t as f64) < q {
        t + 1
    } else {
        t
    }
}

/// Whole `unit`s fully contained in `x` (floor, snapped).
pub(crate) fn floor_units(x: f64, unit: f64) -> u64 {
    debug_assert!(unit > 0.0);
    if x <= 0.0 {
        return 0;
    }
    let q = x / unit;
    let near = libm::round(q);
    if abs(q - near) <= REL_TOL * max(1.0, q) {
        return near as u64;
    }
    q as u64
}

pub(crate) fn min(a: f64, b: f64) -> f64 {
    if a < b {
        a
    } else {
        b
    }
}

pub(crate) fn max(a: f64, b: f64) -> f64 {
    if a > b {
        a
    } else {
        b
    }
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub(crate) fn close(a: f64, b: f64, tol: f64) -> bool {
    abs(a - b) <= tol * max(1.0, max(abs(a), abs(b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_snaps_exact_multiples() {
        // 158.4 / 1.8 is not exact in binary but must count 88 servers.
        assert_eq!(ceil_units(158.4, 1.8), 88);
        assert_eq!(ceil_units(158.5, 1.8), 89);
        assert_eq!(ceil_units(0.0, 1.8), 0);
        assert_eq!(ceil_units(-3.0, 1.8), 0);
        assert_eq!(ceil_units(41.0, 40.0), 2);
        assert_eq!(ceil_units(40.0, 40.0), 1);
        assert_eq!(ceil_units(0.001, 40.0), 1);
        // Float dust within the snap tolerance counts as zero load.
        assert_eq!(ceil_units(1e-12, 40.0), 0);
    }

    #[test]
    fn floor_snaps_exact_multiples() {
        assert_eq!(floor_units(800.0, 80.0), 10);
        assert_eq!(floor_units(799.9, 80.0), 9);
        assert_eq!(floor_units(2499.0, 2500.0), 0);
        assert_eq!(floor_units(2500.0, 2500.0), 1);
        // 0.3 * 3 is slightly below 0.9 in binary; snapping keeps the count.
        assert_eq!(floor_units(0.3 * 3.0, 0.9), 1);
    }
}
