//! Boundary unit conversions.
//!
//! Conversions into SI are a single multiplication or division by a constant.
//! Conversions out of SI return, among the few floats next to the naive
//! quotient, the one with the shortest decimal form that converts back to the
//! exact same SI value. So `to_si(from_si(v)) == v` bit for bit whenever `v`
//! came from `to_si`, and 60 deg prints as `60` rather than `59.99999999999999`.

use std::f64::consts::PI;

const RAD_PER_DEG: f64 = PI / 180.0;
const M_PER_MM: f64 = 1000.0;
const PA_PER_MPA: f64 = 1.0e6;
const N_PER_M_PER_N_PER_MM: f64 = 1000.0;

#[inline]
pub fn deg_to_rad(deg: f64) -> f64 {
    deg * RAD_PER_DEG
}

fn exact_preimage(si: f64, approx: f64, to_si: impl Fn(f64) -> f64) -> f64 {
    if !approx.is_finite() || approx == 0.0 {
        return approx;
    }
    let bits = approx.to_bits() as i64;
    (-4i64..=4)
        .map(|d| f64::from_bits((bits + d) as u64))
        .filter(|&c| to_si(c).to_bits() == si.to_bits())
        .min_by_key(|c| (c.to_string().len(), (c - approx).abs().to_bits()))
        .unwrap_or(approx)
}

pub fn rad_to_deg(rad: f64) -> f64 {
    exact_preimage(rad, rad / RAD_PER_DEG, deg_to_rad)
}

#[inline]
pub fn mm_to_m(mm: f64) -> f64 {
    mm / M_PER_MM
}

pub fn m_to_mm(m: f64) -> f64 {
    exact_preimage(m, m * M_PER_MM, mm_to_m)
}

#[inline]
pub fn mpa_to_pa(mpa: f64) -> f64 {
    mpa * PA_PER_MPA
}

pub fn pa_to_mpa(pa: f64) -> f64 {
    exact_preimage(pa, pa / PA_PER_MPA, mpa_to_pa)
}

/// N/mm to N/m.
#[inline]
pub fn n_per_mm_to_si(k: f64) -> f64 {
    k * N_PER_M_PER_N_PER_MM
}

/// N/m to N/mm.
pub fn si_to_n_per_mm(k: f64) -> f64 {
    exact_preimage(k, k / N_PER_M_PER_N_PER_MM, n_per_mm_to_si)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn table_values() {
        assert!((deg_to_rad(20.0) - 0.349_065_850_398_865_9).abs() < 1e-15);
        assert_eq!(mm_to_m(1.0), 0.001);
        assert_eq!(mpa_to_pa(26.0), 26.0e6);
    }

    #[test]
    fn round_numbers_print_round() {
        assert_eq!(rad_to_deg(deg_to_rad(60.0)), 60.0);
        assert_eq!(rad_to_deg(deg_to_rad(3.7)), 3.7);
        assert_eq!(m_to_mm(mm_to_m(0.9)), 0.9);
    }

    proptest! {
        #[test]
        fn boundary_round_trip_is_idempotent(x in -500.0f64..500.0) {
            let r = deg_to_rad(x);
            prop_assert_eq!(deg_to_rad(rad_to_deg(r)).to_bits(), r.to_bits());
            let m = mm_to_m(x);
            prop_assert_eq!(mm_to_m(m_to_mm(m)).to_bits(), m.to_bits());
            let p = mpa_to_pa(x);
            prop_assert_eq!(mpa_to_pa(pa_to_mpa(p)).to_bits(), p.to_bits());
            let k = n_per_mm_to_si(x);
            prop_assert_eq!(n_per_mm_to_si(si_to_n_per_mm(k)).to_bits(), k.to_bits());
        }
    }
}
