//! Sub-threshold failure-rate ansatz and its split into per-Pauli logical rates.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data;
use crate::error::{domain, Error, Result};

/// Parameters of `alpha * x^(beta*d + eta) * (1 + epsilon * x^(zeta * d^lambda))`, `x = p / p_th`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzParams {
    pub p_th: f64,
    pub alpha: f64,
    pub beta: f64,
    pub eta: f64,
    pub epsilon: f64,
    pub zeta: f64,
    pub lambda: f64,
}

impl AnsatzParams {
    pub fn validate(&self) -> Result<()> {
        let v = [self.p_th, self.alpha, self.beta, self.eta, self.epsilon, self.zeta, self.lambda];
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Data("non-finite ansatz parameter".into()));
        }
        if self.p_th <= 0.0 || self.alpha <= 0.0 || self.beta <= 0.0 || self.zeta <= 0.0 {
            return Err(Error::Data("p_th, alpha, beta and zeta must be positive".into()));
        }
        Ok(())
    }

    pub fn as_array(&self) -> [f64; 7] {
        [self.p_th, self.alpha, self.beta, self.eta, self.epsilon, self.zeta, self.lambda]
    }

    pub fn from_array(a: [f64; 7]) -> Self {
        AnsatzParams { p_th: a[0], alpha: a[1], beta: a[2], eta: a[3], epsilon: a[4], zeta: a[5], lambda: a[6] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Setting {
    TriangularMemory,
    RectangularZFail,
    RectangularXFail,
    Stability,
}

impl Setting {
    pub const ALL: [Setting; 4] =
        [Setting::TriangularMemory, Setting::RectangularZFail, Setting::RectangularXFail, Setting::Stability];
}

/// Unclamped ansatz value.
fn raw(params: &AnsatzParams, p: f64, d: f64) -> f64 {
    let x = p / params.p_th;
    params.alpha * x.powf(params.beta * d + params.eta) * (1.0 + params.epsilon * x.powf(params.zeta * d.powf(params.lambda)))
}

/// Failure rate per round (per unit area for the stability setting), clamped to [0, 1].
pub fn eval_ansatz(params: &AnsatzParams, p: f64, d: f64) -> Result<f64> {
    if !(p > 0.0) || !(d >= 1.0) {
        return domain(format!("ansatz needs p > 0 and d >= 1 (p={p}, d={d})"));
    }
    let v = raw(params, p, d);
    if !v.is_finite() {
        return Err(Error::Numeric(format!("ansatz overflow at p={p}, d={d}")));
    }
    Ok(v.clamp(0.0, 1.0))
}

/// The four fitted parameter sets, one per experimental setting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzSet {
    pub triangular_memory: AnsatzParams,
    pub rectangular_z_fail: AnsatzParams,
    pub rectangular_x_fail: AnsatzParams,
    pub stability: AnsatzParams,
}

impl AnsatzSet {
    pub fn get(&self, s: Setting) -> &AnsatzParams {
        match s {
            Setting::TriangularMemory => &self.triangular_memory,
            Setting::RectangularZFail => &self.rectangular_z_fail,
            Setting::RectangularXFail => &self.rectangular_x_fail,
            Setting::Stability => &self.stability,
        }
    }

    pub fn get_mut(&mut self, s: Setting) -> &mut AnsatzParams {
        match s {
            Setting::TriangularMemory => &mut self.triangular_memory,
            Setting::RectangularZFail => &mut self.rectangular_z_fail,
            Setting::RectangularXFail => &mut self.rectangular_x_fail,
            Setting::Stability => &mut self.stability,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let set: AnsatzSet = serde_json::from_str(text)?;
        for s in Setting::ALL {
            set.get(s).validate()?;
        }
        Ok(set)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Bundled parameters (or `$MSDFORGE_DATA_DIR/ansatz.json` when set).
    pub fn builtin() -> Result<Self> {
        Self::from_json(&data::read("ansatz.json")?)
    }

    /// Applies [`adjust_threshold`] to every setting.
    pub fn with_threshold_shift(&self, lam: f64) -> Result<Self> {
        let mut out = *self;
        for s in Setting::ALL {
            *out.get_mut(s) = adjust_threshold(self.get(s), lam)?;
        }
        Ok(out)
    }
}

pub fn builtin_params(s: Setting) -> AnsatzParams {
    let text = data::bundled("ansatz.json").expect("ansatz.json is bundled");
    *AnsatzSet::from_json(text).expect("bundled ansatz parameters parse").get(s)
}

/// Moves the threshold towards 1%: `p_th <- (1 - lam) p_th + lam * 0.01`.
pub fn adjust_threshold(params: &AnsatzParams, lam: f64) -> Result<AnsatzParams> {
    if !(0.0..=1.0).contains(&lam) {
        return domain(format!("threshold tuning must lie in [0, 1], got {lam}"));
    }
    Ok(AnsatzParams { p_th: (1.0 - lam) * params.p_th + lam * 0.01, ..*params })
}

/// Patch extent used by [`split_rates`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PatchSize {
    /// Triangular distance, or square stability extent `T`.
    Square(f64),
    /// Rectangular patch with X and Z distances.
    Rect { d_x: f64, d_z: f64 },
}

/// Per-round logical Pauli rates. Rectangular patches fill the single-patch
/// fields for patch 1 (equal to patch 2) and the correlated two-patch fields.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PauliRates {
    pub px: f64,
    pub py: f64,
    pub pz: f64,
    pub px1x2: f64,
    pub pz1z2: f64,
}

/// Failure rate of a rectangular patch along one string direction.
/// The exponent follows the string length `d_along`; the prefactor grows with the
/// transverse length `d_across` (number of string positions).
fn rect_fail(params: &AnsatzParams, p: f64, d_along: f64, d_across: f64) -> Result<f64> {
    Ok(((d_across / d_along) * eval_ansatz(params, p, d_along)?).min(1.0))
}

/// Total failure rate of a setting before the Pauli split.
pub fn failure_rate(set: &AnsatzSet, setting: Setting, p: f64, size: PatchSize) -> Result<f64> {
    let params = set.get(setting);
    match (setting, size) {
        (Setting::TriangularMemory, PatchSize::Square(d)) => eval_ansatz(params, p, d),
        (Setting::Stability, PatchSize::Square(t)) => stability_rate_with(params, p, t, t, t),
        (Setting::RectangularZFail, PatchSize::Rect { d_x, d_z }) => rect_fail(params, p, d_x, d_z),
        (Setting::RectangularXFail, PatchSize::Rect { d_x, d_z }) => rect_fail(params, p, d_z, d_x),
        _ => domain(format!("patch size {size:?} does not fit setting {setting:?}")),
    }
}

/// Splits a setting's failure rate into per-Pauli rates with Y-ratio `r_y`.
///
/// Triangular and stability: `pX = pZ = fail / (2(1 + r))`, `pY = r pX`.
/// Rectangular Z failure fills the X fields, X failure the Z fields.
pub fn split_rates(set: &AnsatzSet, setting: Setting, p: f64, size: PatchSize, r_y: f64) -> Result<PauliRates> {
    if !(r_y >= 0.0) {
        return domain(format!("r_Y must be non-negative, got {r_y}"));
    }
    let fail = failure_rate(set, setting, p, size)?;
    let base = fail / (2.0 * (1.0 + r_y));
    Ok(match setting {
        Setting::TriangularMemory => PauliRates { px: base, pz: base, py: r_y * base, ..Default::default() },
        Setting::Stability => PauliRates { px: fail / 2.0, pz: fail / 2.0, ..Default::default() },
        Setting::RectangularZFail => PauliRates { px: base, px1x2: r_y * base, ..Default::default() },
        Setting::RectangularXFail => PauliRates { pz: base, pz1z2: r_y * base, ..Default::default() },
    })
}

fn stability_rate_with(params: &AnsatzParams, p: f64, l_h: f64, l_v: f64, t: f64) -> Result<f64> {
    if l_h < 1.0 || l_v < 1.0 || t < 1.0 {
        return domain("stability extents must be at least 1");
    }
    Ok((l_h * l_v * eval_ansatz(params, p, t)?).min(1.0))
}

/// Timelike failure rate (X plus Z) of an `l_h x l_v` region over `t` rounds.
/// The stability fit is a per-area rate, so the region value scales with `l_h * l_v`.
pub fn stability_rate(p: f64, l_h: f64, l_v: f64, t: f64) -> Result<f64> {
    stability_rate_with(&builtin_params(Setting::Stability), p, l_h, l_v, t)
}

/// Rate functions used to build channels: ansatz set, physical rate and Y-ratio.
/// With `memory` off every memory, ancilla and timelike rate is zero.
#[derive(Clone, Copy, Debug)]
pub struct RateModel {
    pub set: AnsatzSet,
    pub p: f64,
    pub r_y: f64,
    pub memory: bool,
}

impl RateModel {
    pub fn new(set: AnsatzSet, p: f64, r_y: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return domain(format!("physical rate must lie in (0, 1), got {p}"));
        }
        if !(r_y >= 0.0) {
            return domain(format!("r_Y must be non-negative, got {r_y}"));
        }
        Ok(RateModel { set, p, r_y, memory: true })
    }

    pub fn builtin(p: f64, r_y: f64) -> Result<Self> {
        Self::new(AnsatzSet::builtin()?, p, r_y)
    }

    /// Same model with only the faulty-T rates left.
    pub fn faulty_t_only(mut self) -> Self {
        self.memory = false;
        self
    }

    fn gate(&self, v: Result<f64>) -> Result<f64> {
        if self.memory {
            v
        } else {
            Ok(0.0)
        }
    }

    /// Triangular `pX = pZ` at distance `d`.
    pub fn tri_x(&self, d: u32) -> Result<f64> {
        let f = failure_rate(&self.set, Setting::TriangularMemory, self.p, PatchSize::Square(d as f64));
        self.gate(f.map(|f| f / (2.0 * (1.0 + self.r_y))))
    }

    pub fn tri_z(&self, d: u32) -> Result<f64> {
        self.tri_x(d)
    }

    pub fn tri_y(&self, d: u32) -> Result<f64> {
        Ok(self.r_y * self.tri_x(d)?)
    }

    /// Rectangular single-patch X rate (`pX1 = pX2`); `pX1X2 = r_y` times this.
    pub fn rec_x(&self, d_x: u32, d_z: u32) -> Result<f64> {
        let size = PatchSize::Rect { d_x: d_x as f64, d_z: d_z as f64 };
        let f = failure_rate(&self.set, Setting::RectangularZFail, self.p, size);
        self.gate(f.map(|f| f / (2.0 * (1.0 + self.r_y))))
    }

    /// Rectangular single-patch Z rate (`pZ1 = pZ2`); `pZ1Z2 = r_y` times this.
    pub fn rec_z(&self, d_x: u32, d_z: u32) -> Result<f64> {
        let size = PatchSize::Rect { d_x: d_x as f64, d_z: d_z as f64 };
        let f = failure_rate(&self.set, Setting::RectangularXFail, self.p, size);
        self.gate(f.map(|f| f / (2.0 * (1.0 + self.r_y))))
    }

    /// Timelike X (equal to Z) rate of a region `l_h x l_v` lasting `t` rounds.
    pub fn timelike(&self, l_h: u32, l_v: u32, t: u32) -> Result<f64> {
        let f = stability_rate_with(&self.set.stability, self.p, l_h as f64, l_v as f64, t as f64);
        self.gate(f.map(|f| f / 2.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn at_threshold_collapses() {
        let a = builtin_params(Setting::TriangularMemory);
        for d in [3.0, 7.0, 21.0] {
            assert_relative_eq!(eval_ansatz(&a, a.p_th, d).unwrap(), a.alpha * (1.0 + a.epsilon), max_relative = 1e-12);
        }
    }

    #[test]
    fn builtin_values() {
        assert_eq!(builtin_params(Setting::TriangularMemory).p_th, 2.41e-3);
        let s = builtin_params(Setting::Stability);
        assert_eq!((s.p_th, s.lambda), (6.24e-3, 0.389));
        assert_eq!(builtin_params(Setting::RectangularZFail).beta, 0.439);
    }

    #[test]
    fn split_tri() {
        let set = AnsatzSet::builtin().unwrap();
        let f = failure_rate(&set, Setting::TriangularMemory, 1e-3, PatchSize::Square(7.0)).unwrap();
        let r0 = split_rates(&set, Setting::TriangularMemory, 1e-3, PatchSize::Square(7.0), 0.0).unwrap();
        assert_eq!(r0.py, 0.0);
        assert_relative_eq!(r0.px, f / 2.0);
        let r1 = split_rates(&set, Setting::TriangularMemory, 1e-3, PatchSize::Square(7.0), 1.0).unwrap();
        assert_relative_eq!(r1.px, f / 4.0);
        assert_relative_eq!(r1.py, f / 4.0);
    }

    #[test]
    fn rect_split_ratio() {
        let set = AnsatzSet::builtin().unwrap();
        let size = PatchSize::Rect { d_x: 8.0, d_z: 12.0 };
        let f = failure_rate(&set, Setting::RectangularZFail, 1e-3, size).unwrap();
        let r = split_rates(&set, Setting::RectangularZFail, 1e-3, size, 0.1).unwrap();
        assert_relative_eq!(r.px, f / 2.2, max_relative = 1e-12);
        assert_relative_eq!(r.px1x2, 0.1 * r.px, max_relative = 1e-12);
    }

    #[test]
    fn threshold_shift() {
        let a = builtin_params(Setting::TriangularMemory);
        assert_eq!(adjust_threshold(&a, 0.0).unwrap(), a);
        assert_relative_eq!(adjust_threshold(&a, 0.4).unwrap().p_th, 0.0054, max_relative = 0.01);
        assert_eq!(adjust_threshold(&a, 1.0).unwrap().p_th, 0.01);
        assert!(adjust_threshold(&a, 1.5).is_err());
    }
}
