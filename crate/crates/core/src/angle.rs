//! Phase arithmetic on the circle.
//!
//! Angles are kept in the canonical range `[0, 2π)`. The circular distance
//! [`wrapped_abs`] is `π − |θ mod 2π − π|`, i.e. the distance from `θ` to the
//! nearest multiple of `2π`.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Largest level accepted by [`candidate_set`]; `2^j` must fit a `u64`.
pub const MAX_LEVEL: u32 = 62;

/// A phase in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    pub fn new(x: f64) -> Result<Self> {
        wrap(x)
    }

    /// Argument of a complex number, mapped into `[0, 2π)`.
    pub fn arg_of(z: num_complex::Complex64) -> Self {
        Angle(wrap_unchecked(z.im.atan2(z.re)))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Representative in `[−π, π)`.
    pub fn signed(self) -> f64 {
        if self.0 >= PI {
            self.0 - TAU
        } else {
            self.0
        }
    }

    /// Circular distance to `other`.
    pub fn distance(self, other: Angle) -> f64 {
        wrapped_abs_unchecked(self.0 - other.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("angle must be finite, got {x}")))
    }
}

#[inline]
pub(crate) fn wrap_unchecked(x: f64) -> f64 {
    let r = x - TAU * (x / TAU).floor();
    // x slightly below a multiple of 2π can round up to exactly 2π.
    if !(0.0..TAU).contains(&r) {
        0.0
    } else {
        r
    }
}

#[inline]
pub(crate) fn wrapped_abs_unchecked(x: f64) -> f64 {
    PI - (wrap_unchecked(x) - PI).abs()
}

/// Canonical representative of `x` modulo `2π`.
pub fn wrap(x: f64) -> Result<Angle> {
    check_finite(x)?;
    Ok(Angle(wrap_unchecked(x)))
}

/// Distance from `x` to the nearest multiple of `2π`, in `[0, π]`.
pub fn wrapped_abs(x: f64) -> Result<f64> {
    check_finite(x)?;
    Ok(wrapped_abs_unchecked(x))
}

/// Representative of `x` modulo `2π` in `[−π, π)`.
pub fn to_signed(x: f64) -> Result<f64> {
    Ok(wrap(x)?.signed())
}

/// The `2^level` angles `(2kπ + base) / 2^level`, `k = 0..2^level`.
///
/// Members are implicit; use [`CandidateSet::member`] or
/// [`CandidateSet::iter`] to enumerate them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateSet {
    level: u32,
    base: Angle,
}

pub fn candidate_set(base: Angle, level: u32) -> Result<CandidateSet> {
    if level > MAX_LEVEL {
        return Err(invalid(format!(
            "candidate level {level} exceeds the supported maximum {MAX_LEVEL}"
        )));
    }
    Ok(CandidateSet { level, base })
}

impl CandidateSet {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn base(&self) -> Angle {
        self.base
    }

    pub fn len(&self) -> u64 {
        1u64 << self.level
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn scale(&self) -> f64 {
        (1u64 << self.level) as f64
    }

    /// The `k`-th member. `k` is reduced modulo the set size.
    pub fn member(&self, k: u64) -> Angle {
        let k = k & (self.len() - 1);
        Angle(wrap_unchecked(
            (TAU * k as f64 + self.base.0) / self.scale(),
        ))
    }

    pub fn iter(&self) -> impl Iterator<Item = Angle> + '_ {
        (0..self.len()).map(move |k| self.member(k))
    }

    /// Whether `theta` belongs to the set, up to `tol` in the scaled phase.
    pub fn contains(&self, theta: Angle, tol: f64) -> bool {
        wrapped_abs_unchecked(self.scale() * theta.0 - self.base.0) <= tol
    }

    /// Index of the member closest to `prev`; ties go to the smaller index.
    ///
    /// Constant time: the two lattice points bracketing
    /// `(2^level · prev − base) / 2π` are the only candidates.
    pub fn nearest_index(&self, prev: Angle) -> u64 {
        let mask = self.len() - 1;
        let x = (self.scale() * prev.0 - self.base.0) / TAU;
        let lo = x.floor();
        // lo is at most 2^62 in magnitude, so the cast is exact modulo 2^64.
        let k_lo = (lo as i64 as u64) & mask;
        let k_hi = k_lo.wrapping_add(1) & mask;
        if k_lo == k_hi {
            return k_lo;
        }
        let d_lo = self.member(k_lo).distance(prev);
        let d_hi = self.member(k_hi).distance(prev);
        match d_lo.partial_cmp(&d_hi) {
            Some(std::cmp::Ordering::Less) => k_lo,
            Some(std::cmp::Ordering::Greater) => k_hi,
            _ => k_lo.min(k_hi),
        }
    }
}

/// Member of `set` minimising the circular distance to `prev`.
pub fn nearest_candidate(set: &CandidateSet, prev: Angle) -> Angle {
    set.member(set.nearest_index(prev))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn wrap_examples() {
        assert_eq!(wrap(0.0).unwrap().value(), 0.0);
        assert_eq!(wrap(TAU).unwrap().value(), 0.0);
        assert!(close(wrap(-PI / 2.0).unwrap().value(), 3.0 * PI / 2.0));
        assert!(wrap(f64::NAN).is_err());
        assert!(wrap(f64::INFINITY).is_err());
        // just below 2π must not come back as 2π
        let a = wrap(-1e-18).unwrap().value();
        assert!((0.0..TAU).contains(&a));
    }

    #[test]
    fn wrapped_abs_examples() {
        assert!(close(wrapped_abs(PI).unwrap(), PI));
        assert!(close(wrapped_abs(3.0 * PI / 2.0).unwrap(), PI / 2.0));
        assert!(close(wrapped_abs(TAU + 0.1).unwrap(), 0.1));
        assert!(wrapped_abs(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn candidate_set_examples() {
        let s: Vec<f64> = candidate_set(Angle::ZERO, 1)
            .unwrap()
            .iter()
            .map(f64::from)
            .collect();
        assert_eq!(s.len(), 2);
        assert!(close(s[0], 0.0) && close(s[1], PI));

        let s: Vec<f64> = candidate_set(wrap(PI / 2.0).unwrap(), 2)
            .unwrap()
            .iter()
            .map(f64::from)
            .collect();
        let want = [PI / 8.0, 5.0 * PI / 8.0, 9.0 * PI / 8.0, 13.0 * PI / 8.0];
        assert!(s.iter().zip(want).all(|(a, b)| close(*a, b)), "{s:?}");

        let s: Vec<f64> = candidate_set(wrap(1.0).unwrap(), 0)
            .unwrap()
            .iter()
            .map(f64::from)
            .collect();
        assert_eq!(s, vec![1.0]);

        assert!(candidate_set(Angle::ZERO, MAX_LEVEL + 1).is_err());
        assert!(candidate_set(Angle::ZERO, MAX_LEVEL).is_ok());
    }

    #[test]
    fn nearest_candidate_examples() {
        let s = candidate_set(Angle::ZERO, 1).unwrap();
        assert_eq!(nearest_candidate(&s, wrap(0.1).unwrap()).value(), 0.0);

        let s = candidate_set(Angle::ZERO, 3).unwrap();
        assert_eq!(
            nearest_candidate(&s, wrap(TAU - 0.01).unwrap()).value(),
            0.0
        );

        let s = candidate_set(wrap(PI / 2.0).unwrap(), 2).unwrap();
        let got = nearest_candidate(&s, wrap(0.5).unwrap()).value();
        assert!((got - std::f64::consts::FRAC_PI_8).abs() < 1e-15);
    }

    #[test]
    fn tie_goes_to_smaller_index() {
        // prev = π/2 is equidistant from 0 and π
        let s = candidate_set(Angle::ZERO, 1).unwrap();
        assert_eq!(s.nearest_index(wrap(PI / 2.0).unwrap()), 0);
        // prev = 3π/2: equidistant from π (k=1) and 0 (k=0 via wraparound)
        assert_eq!(s.nearest_index(wrap(3.0 * PI / 2.0).unwrap()), 0);
    }

    #[test]
    fn level_zero_has_single_member() {
        let s = candidate_set(wrap(2.5).unwrap(), 0).unwrap();
        assert_eq!(s.nearest_index(wrap(0.1).unwrap()), 0);
        assert_eq!(nearest_candidate(&s, Angle::ZERO).value(), 2.5);
    }

    fn brute_nearest(set: &CandidateSet, prev: Angle) -> (u64, f64) {
        let mut best = (0, f64::INFINITY);
        for k in 0..set.len() {
            let d = set.member(k).distance(prev);
            if d < best.1 {
                best = (k, d);
            }
        }
        best
    }

    proptest! {
        #[test]
        fn wrap_is_canonical_and_idempotent(x in -1e6f64..1e6) {
            let a = wrap(x).unwrap().value();
            prop_assert!((0.0..TAU).contains(&a));
            prop_assert_eq!(wrap(a).unwrap().value(), a);
        }

        #[test]
        fn wrapped_abs_is_a_circular_norm(a in -50.0f64..50.0, b in -50.0f64..50.0) {
            let da = wrapped_abs(a).unwrap();
            prop_assert!((0.0..=PI).contains(&da));
            prop_assert!((wrapped_abs(-a).unwrap() - da).abs() < 1e-12);
            prop_assert!(wrapped_abs(a + b).unwrap() <= da + wrapped_abs(b).unwrap() + 1e-12);
        }

        #[test]
        fn nearest_matches_exhaustive_search(j in 0u32..=12, base in 0.0f64..TAU, prev in 0.0f64..TAU) {
            let set = candidate_set(wrap(base).unwrap(), j).unwrap();
            let prev = wrap(prev).unwrap();
            let k = set.nearest_index(prev);
            let (k_brute, d_brute) = brute_nearest(&set, prev);
            let d = set.member(k).distance(prev);
            prop_assert!(d <= d_brute + 1e-12);
            // indices differ only on numerically tied distances
            if k != k_brute {
                prop_assert!((d - d_brute).abs() < 1e-12);
            }
        }

        #[test]
        fn members_are_evenly_spaced(j in 0u32..=12, base in 0.0f64..TAU) {
            let set = candidate_set(wrap(base).unwrap(), j).unwrap();
            let gap = TAU / set.len() as f64;
            let mut prev: Option<f64> = None;
            for m in set.iter() {
                prop_assert!(set.contains(m, 1e-9));
                if let Some(p) = prev {
                    prop_assert!((m.value() - p - gap).abs() < 1e-12);
                }
                prev = Some(m.value());
            }
        }
    }

    #[test]
    fn zero_distance_iff_multiple_of_tau() {
        assert_eq!(wrapped_abs(0.0).unwrap(), 0.0);
        assert_eq!(wrapped_abs(-TAU).unwrap(), 0.0);
        assert!(wrapped_abs(1e-9).unwrap() > 0.0);
    }
}
