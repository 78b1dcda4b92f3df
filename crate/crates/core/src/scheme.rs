//! Scheme parameters and the derived ancillary-region dimensions.

use serde::{Deserialize, Serialize};

use crate::circuit::Distances;
use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Faulty T measurements feed the 15-to-1 block directly.
    SingleLevel,
    /// Cultivated (and grown) magic states feed the block.
    CultivationMsd,
}

impl Variant {
    pub fn tag(self) -> &'static str {
        match self {
            Variant::SingleLevel => "sng",
            Variant::CultivationMsd => "cmb",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub variant: Variant,
    pub d: Distances,
    pub d_cult: Option<u32>,
    pub n_m: Option<u32>,
    pub c_gap: Option<f64>,
    pub p: f64,
    pub r_y: f64,
    /// Average rounds between stage starts.
    pub t_intv: Option<f64>,
    /// Average rounds an auxiliary state idles before use.
    pub t_idle: Option<f64>,
    /// Cultivation output infidelity.
    pub q_cult: Option<f64>,
    /// Qubits per cultivation patch; defaults to `n_tri(d_cult)`.
    pub n_cult: Option<u64>,
}

impl SchemeParams {
    pub fn single(d: Distances, p: f64, r_y: f64) -> Self {
        SchemeParams {
            variant: Variant::SingleLevel,
            d,
            d_cult: None,
            n_m: None,
            c_gap: None,
            p,
            r_y,
            t_intv: None,
            t_idle: None,
            q_cult: None,
            n_cult: None,
        }
    }

    pub fn combined(d: Distances, d_cult: u32, n_m: u32, c_gap: f64, p: f64, r_y: f64) -> Self {
        SchemeParams {
            variant: Variant::CultivationMsd,
            d_cult: Some(d_cult),
            n_m: Some(n_m),
            c_gap: Some(c_gap),
            ..Self::single(d, p, r_y)
        }
    }

    /// Label in the `sng-(...)` / `cmb-(...)` style.
    pub fn label(&self) -> String {
        let Distances { d_out, d_x, d_z, d_m } = self.d;
        match self.variant {
            Variant::SingleLevel => format!("sng-({d_out}, {d_x}, {d_z}, {d_m})"),
            Variant::CultivationMsd => format!(
                "cmb-({d_out}, {d_x}, {d_z}, {d_m}, {}, {}, {})",
                self.d_cult.unwrap_or(0),
                self.n_m.unwrap_or(0),
                self.c_gap.map_or("-".to_string(), |c| format!("{c:.2}"))
            ),
        }
    }

    /// Structural checks shared by every consumer (rates are checked where used).
    pub fn validate(&self) -> Result<()> {
        self.d.check_parity()?;
        let Distances { d_out, d_m, .. } = self.d;
        if d_out < 3 || d_m < 3 {
            return domain(format!("triangular patches need distance >= 3 (d_out={d_out}, d_m={d_m})"));
        }
        if !self.d.distance_window_ok() {
            return domain(format!(
                "distances violate d_out - d_Z <= d_m < 2 d_Z (d_out={}, d_Z={}, d_m={})",
                d_out, self.d.d_z, d_m
            ));
        }
        if !(self.r_y >= 0.0) {
            return domain(format!("r_Y must be non-negative, got {}", self.r_y));
        }
        if self.variant == Variant::CultivationMsd {
            let dc = match self.d_cult {
                Some(dc) => dc,
                None => return domain("cultivation scheme needs d_cult"),
            };
            if dc != 3 && dc != 5 {
                return domain(format!("d_cult must be 3 or 5, got {dc}"));
            }
            if dc > d_m {
                return domain(format!("d_cult ({dc}) exceeds d_m ({d_m})"));
            }
            match self.n_m {
                Some(n) if n >= 1 => {}
                _ => return domain("cultivation scheme needs N_m >= 1"),
            }
            if let Some(c) = self.c_gap {
                if !(c >= 0.0) {
                    return domain(format!("c_gap must be non-negative, got {c}"));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn d_cult_checked(&self) -> Result<u32> {
        self.d_cult.map_or_else(|| domain("d_cult required"), Ok)
    }

    pub(crate) fn n_m_checked(&self) -> Result<u32> {
        self.n_m.map_or_else(|| domain("N_m required"), Ok)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedDims {
    pub d_h: u32,
    pub d_v: u32,
    /// Auxiliary patches stacked beside the validation patches (cultivation scheme only).
    pub n_m_side: Option<u32>,
}

pub fn derive_dims(s: &SchemeParams) -> Result<DerivedDims> {
    s.validate()?;
    let Distances { d_out, d_z, d_m, .. } = s.d;
    Ok(match s.variant {
        Variant::SingleLevel => DerivedDims { d_h: (d_out + 1).max(2 * d_z), d_v: d_z.max(d_m + 1), n_m_side: None },
        Variant::CultivationMsd => {
            let n_m = s.n_m_checked()?;
            let side = n_m.min(d_z.div_ceil(d_m + 1));
            DerivedDims {
                d_h: (2 * d_z).max(d_out + 1) + (n_m - side) * (d_m + 1),
                d_v: d_z.max(side * (d_m + 1)),
                n_m_side: Some(side),
            }
        }
    })
}
