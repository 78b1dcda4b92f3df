//! Qubit counts and time-step costs.

use crate::circuit::Distances;
use crate::error::{domain, Result};
use crate::scheme::{derive_dims, SchemeParams, Variant};

/// Time steps per syndrome-extraction round.
pub const T_ROUND: u64 = 8;

/// Data plus syndrome qubits of a triangular patch.
pub fn n_tri(d: u32) -> u64 {
    let d = d as u64;
    (3 * d * d - 1) / 2
}

/// Data plus syndrome qubits of a `d1 x d2` rectangular patch.
pub fn n_rec(d1: u32, d2: u32) -> u64 {
    let (a, b) = (d1 as u64, d2 as u64);
    3 * a * b - 2 * a - 2 * b + 2
}

/// Interface qubits between the ancillary region and the patches.
pub fn n_int(s: &SchemeParams) -> Result<u64> {
    let Distances { d_out, d_z, d_m, .. } = s.d;
    let (o, z, m) = (d_out as u64, d_z as u64, d_m as u64);
    Ok(match s.variant {
        Variant::SingleLevel => 4 * o + 12 * z + 10 * m - 6,
        Variant::CultivationMsd => {
            let n = s.n_m_checked()? as u64;
            4 * o + 12 * z + 10 * n * m + 2 * n - 8
        }
    })
}

pub fn space_cost(s: &SchemeParams) -> Result<u64> {
    let dims = derive_dims(s)?;
    let Distances { d_out, d_x, d_z, d_m } = s.d;
    let common = n_tri(d_out) + 2 * n_rec(d_x, d_z) + n_rec(dims.d_h, dims.d_v) + n_int(s)?;
    Ok(match s.variant {
        Variant::SingleLevel => common + 2 * n_tri(d_m),
        Variant::CultivationMsd => {
            let dc = s.d_cult_checked()?;
            let n = s.n_m_checked()? as u64;
            let cult = s.n_cult.unwrap_or_else(|| n_tri(dc));
            let grow = if d_m == dc { 0 } else { n_tri(d_m) - n_tri(dc) };
            common + 2 * n * (cult + grow)
        }
    })
}

/// Time steps per distillation attempt. The cultivation scheme needs `t_intv`
/// (from the argument or the params).
pub fn time_cost(s: &SchemeParams, t_intv: Option<f64>) -> Result<f64> {
    s.validate()?;
    Ok(match s.variant {
        Variant::SingleLevel => (8 * T_ROUND * (s.d.d_m as u64 + 1)) as f64,
        Variant::CultivationMsd => {
            let t = match t_intv.or(s.t_intv) {
                Some(t) if t > s.d.d_m as f64 => t,
                Some(t) => return domain(format!("T_intv ({t}) must exceed d_m ({})", s.d.d_m)),
                None => return domain("cultivation time cost needs T_intv"),
            };
            8.0 * T_ROUND as f64 * t
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patch_counts() {
        assert_eq!(n_tri(3), 13);
        assert_eq!(n_rec(8, 12), 250);
        for d in 3..12 {
            assert_eq!(n_rec(d, d), 3 * (d as u64).pow(2) - 4 * d as u64 + 2);
        }
    }

    #[test]
    fn table_rows() {
        let s = SchemeParams::single(Distances::new(19, 8, 12, 7), 1e-3, 0.1);
        assert_eq!(space_cost(&s).unwrap(), 2265);
        assert_eq!(time_cost(&s, None).unwrap(), 512.0);
        let c = SchemeParams::combined(Distances::new(39, 22, 26, 13), 3, 4, 7.6, 1e-3, 0.1);
        assert_eq!(space_cost(&c).unwrap(), 15043);
        assert!(time_cost(&c, None).is_err());
        assert!(time_cost(&c, Some(13.0)).is_err());
        assert!((time_cost(&c, Some(21.7)).unwrap() - 1388.8).abs() < 1e-9);
    }
}
