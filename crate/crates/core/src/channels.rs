//! Logical noise channels acting on the distillation qubits.
//!
//! Every physical fault is mapped, by commuting it through the remaining
//! rotations, onto a diagonal unitary on {Out, A, B, C, D} applied with some
//! probability.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ansatz::RateModel;
use crate::circuit::{verify_pairing, StageSchedule, ZMask};
use crate::error::{domain, Error, Result};
use crate::scheme::{derive_dims, SchemeParams, Variant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Angle {
    MinusQuarter,
    PlusQuarter,
    Half,
}

impl Angle {
    pub fn radians(self) -> f64 {
        match self {
            Angle::MinusQuarter => -FRAC_PI_4,
            Angle::PlusQuarter => FRAC_PI_4,
            Angle::Half => FRAC_PI_2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Angle::MinusQuarter => "-pi/4",
            Angle::PlusQuarter => "+pi/4",
            Angle::Half => "pi/2",
        }
    }
}

impl Serialize for Angle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "-pi/4" => Ok(Angle::MinusQuarter),
            "+pi/4" | "pi/4" => Ok(Angle::PlusQuarter),
            "pi/2" => Ok(Angle::Half),
            other => Err(serde::de::Error::custom(format!("unknown angle {other:?}"))),
        }
    }
}

/// `exp(-i theta Z_mask)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RotationTerm(pub ZMask, pub Angle);

/// Where a channel comes from; used only for diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    MemoryZ,
    MemoryX,
    MemoryY,
    PairZ,
    PairX,
    Auxiliary,
    FaultyT,
    AncillaSpacelike,
    Timelike,
    Magic,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `(1 - p) rho + p U rho U^dagger` with `U` the product of `terms`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseChannel {
    pub terms: Vec<RotationTerm>,
    pub p_err: f64,
    #[serde(default = "default_rule", skip_serializing)]
    pub rule: Rule,
    #[serde(default, skip_serializing)]
    pub stage: u8,
}

fn default_rule() -> Rule {
    Rule::MemoryZ
}

/// Growing and cultivation inputs of the cultivation scheme.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagicInputs {
    /// Total (X plus Z) logical error of the growing operation.
    pub p_grow: f64,
    /// Cultivation output infidelity.
    pub q_cult: f64,
}

struct Builder {
    out: Vec<NoiseChannel>,
    stage: u8,
}

impl Builder {
    fn push(&mut self, rule: Rule, terms: Vec<RotationTerm>, p_err: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&p_err) || !p_err.is_finite() {
            return Err(Error::Numeric(format!("{rule} channel at stage {} has p_err {p_err}", self.stage)));
        }
        if terms.is_empty() {
            return Ok(());
        }
        self.out.push(NoiseChannel { terms, p_err, rule, stage: self.stage });
        Ok(())
    }

    fn one(&mut self, rule: Rule, m: ZMask, a: Angle, p_err: f64) -> Result<()> {
        self.push(rule, vec![RotationTerm(m, a)], p_err)
    }
}

const VALIDATION: [ZMask; 4] = [ZMask(2), ZMask(4), ZMask(8), ZMask(16)];
const PAIRS: [(ZMask, ZMask); 2] = [(ZMask(2), ZMask(4)), (ZMask(8), ZMask(16))];
const PATCHES: [ZMask; 3] = [ZMask::OUT, ZMask::AB, ZMask::CD];

/// Rotations executed up to and including stage `k` (1-based).
fn history(schedule: &StageSchedule, k: usize) -> Vec<ZMask> {
    schedule.stages[..k].iter().flat_map(|&(p, q)| [p, q]).filter(|m| !m.is_identity()).collect()
}

fn x_product(hist: &[ZMask], hit: impl Fn(ZMask) -> bool) -> Vec<RotationTerm> {
    hist.iter().filter(|&&m| hit(m)).map(|&m| RotationTerm(m, Angle::MinusQuarter)).collect()
}

/// Memory errors on the output and validation patches (items shared by both schemes).
/// `t` is the number of rounds the patches idle per stage.
fn memory(b: &mut Builder, s: &SchemeParams, schedule: &StageSchedule, rates: &RateModel, k: usize, t: f64) -> Result<()> {
    let d = s.d;
    let dm = d.d_m as f64;
    let r = rates.r_y;
    let (p, q) = schedule.stages[k - 1];
    let active = p.0 | q.0;
    let hist = history(schedule, k);
    let out_x = rates.tri_x(d.d_out)?;
    let rec_x = rates.rec_x(d.d_x, d.d_z)?;
    let rec_z = rates.rec_z(d.d_x, d.d_z)?;

    let mut qubits: Vec<ZMask> = VALIDATION.to_vec();
    if k >= 5 {
        qubits.insert(0, ZMask::OUT);
    }
    for qm in qubits {
        let is_out = qm == ZMask::OUT;
        let lam = if qm.0 & active != 0 { 1.0 } else { 0.0 };
        let (pz, px) = if is_out { (out_x, out_x) } else { (rec_z, rec_x) };
        b.one(Rule::MemoryZ, qm, Angle::Half, t * pz)?;
        let xs = x_product(&hist, |m| m.0 & qm.0 != 0);
        b.push(Rule::MemoryX, xs.clone(), (t - dm * lam) * px)?;
        if is_out {
            let mut ys = vec![RotationTerm(ZMask::OUT, Angle::Half)];
            ys.extend(xs);
            b.push(Rule::MemoryY, ys, (t - dm * lam) * rates.tri_y(d.d_out)?)?;
        }
    }
    for (q1, q2) in PAIRS {
        let both = q1.xor(q2);
        b.one(Rule::PairZ, both, Angle::Half, t * r * rec_z)?;
        let lam = if both.0 & active != 0 { 1.0 } else { 0.0 };
        let xs = x_product(&hist, |m| (m.0 & q1.0 != 0) != (m.0 & q2.0 != 0));
        b.push(Rule::PairX, xs, (t - dm * lam) * r * rec_x)?;
    }
    Ok(())
}

/// Spacelike Z strings in the ancillary region during a full-layout merge,
/// acting on the restrictions of P and Q to each patch.
fn ancilla_spacelike(b: &mut Builder, s: &SchemeParams, p: ZMask, q: ZMask, rates: &RateModel, d_v: u32) -> Result<()> {
    let d = s.d;
    let dm = d.d_m as f64;
    for patch in PATCHES {
        let dz = if patch == ZMask::OUT { d.d_out + 1 } else { d.d_z };
        let z = rates.rec_z(d_v + 6, dz)?;
        let (pp, qq) = (p.and(patch), q.and(patch));
        if !pp.is_identity() {
            b.one(Rule::AncillaSpacelike, pp, Angle::Half, dm * z)?;
        }
        if !qq.is_identity() {
            b.one(Rule::AncillaSpacelike, qq, Angle::Half, dm * z)?;
        }
        if pp != qq {
            b.one(Rule::AncillaSpacelike, pp.xor(qq), Angle::Half, dm * rates.r_y * z)?;
        }
    }
    Ok(())
}

fn check_schedule(s: &SchemeParams, schedule: &StageSchedule) -> Result<()> {
    let v = verify_pairing(schedule, s.d)?;
    if let Some(first) = v.first() {
        return domain(format!("schedule is not distance-preserving: {}", first.detail));
    }
    Ok(())
}

/// Channels of the single-level scheme in stage order.
pub fn channels_single_level(s: &SchemeParams, schedule: &StageSchedule, rates: &RateModel) -> Result<Vec<NoiseChannel>> {
    if s.variant != Variant::SingleLevel {
        return domain("channels_single_level needs the single-level variant");
    }
    check_schedule(s, schedule)?;
    let dims = derive_dims(s)?;
    let d = s.d;
    let dm = d.d_m as f64;
    let r = rates.r_y;
    let ph = rates.p;
    let mut b = Builder { out: Vec::new(), stage: 0 };
    for k in 1..=8 {
        b.stage = k as u8;
        memory(&mut b, s, schedule, rates, k, dm + 1.0)?;
        let (p, q) = schedule.stages[k - 1];
        let dm_eff = if k >= 3 { d.d_m } else { d.d_z - 1 };
        for rm in [p, q] {
            if rm.is_identity() {
                continue;
            }
            let tx = rates.tri_x(dm_eff)?;
            b.one(Rule::Auxiliary, rm, Angle::MinusQuarter, tx)?;
            b.one(Rule::Auxiliary, rm, Angle::PlusQuarter, rates.tri_y(dm_eff)?)?;
            b.one(Rule::Auxiliary, rm, Angle::Half, dm * rates.tri_z(dm_eff)?)?;
            b.one(Rule::FaultyT, rm, Angle::MinusQuarter, 2.0 * ph / 3.0)?;
            b.one(Rule::FaultyT, rm, Angle::PlusQuarter, 2.0 * ph / 3.0)?;
            b.one(Rule::FaultyT, rm, Angle::Half, 5.0 * ph / 3.0)?;
            if k >= 3 {
                let zx = dm * (1.0 + r) * rates.rec_x(d.d_m + 1, dims.d_h + 6)?;
                b.one(Rule::AncillaSpacelike, rm, Angle::Half, zx)?;
                b.one(Rule::Timelike, rm, Angle::MinusQuarter, rates.timelike(dims.d_h + 6, dims.d_v + 6, d.d_m)?)?;
            } else {
                b.one(Rule::Timelike, rm, Angle::MinusQuarter, rates.timelike(d.d_z, 4, d.d_m)?)?;
            }
        }
        if k >= 3 {
            ancilla_spacelike(&mut b, s, p, q, rates, dims.d_v)?;
        } else {
            let z = dm * (1.0 + r) * rates.rec_z(4, d.d_z)?;
            for rm in [p, q] {
                b.one(Rule::AncillaSpacelike, rm, Angle::Half, z)?;
            }
        }
    }
    Ok(b.out)
}

/// Channels of the cultivation scheme in stage order. Needs `t_intv > d_m` and `t_idle`.
pub fn channels_combined(
    s: &SchemeParams,
    schedule: &StageSchedule,
    rates: &RateModel,
    magic: MagicInputs,
) -> Result<Vec<NoiseChannel>> {
    if s.variant != Variant::CultivationMsd {
        return domain("channels_combined needs the cultivation variant");
    }
    check_schedule(s, schedule)?;
    let dims = derive_dims(s)?;
    let d = s.d;
    let dm = d.d_m as f64;
    let r = rates.r_y;
    let t_intv = match s.t_intv {
        Some(t) if t > dm => t,
        Some(t) => return domain(format!("T_intv ({t}) must exceed d_m ({})", d.d_m)),
        None => return domain("cultivation channels need T_intv"),
    };
    let t_idle = match s.t_idle {
        Some(t) if t >= 0.0 => t,
        _ => return domain("cultivation channels need a non-negative T_idle"),
    };
    if !(0.0..=1.0).contains(&magic.p_grow) || !(0.0..=1.0).contains(&magic.q_cult) {
        return domain("growing and cultivation rates must lie in [0, 1]");
    }
    let d_cult = s.d_cult_checked()?;
    let n_m = s.n_m_checked()? as f64;
    let side = dims.n_m_side.unwrap_or(0) as f64;
    let grown = if d.d_m == d_cult { 0.0 } else { 1.0 };
    let grow_x = magic.p_grow / (2.0 * (1.0 + r));
    let grow_y = r * grow_x;
    let cult_x = magic.q_cult / (2.0 + r);
    let cult_y = r * cult_x;
    let tx = rates.tri_x(d.d_m)?;
    let ty = rates.tri_y(d.d_m)?;

    let mut b = Builder { out: Vec::new(), stage: 0 };
    for k in 1..=8 {
        b.stage = k as u8;
        let t = if k < 8 { t_intv } else { dm + 1.0 };
        memory(&mut b, s, schedule, rates, k, t)?;
        let (p, q) = schedule.stages[k - 1];
        for rm in [p, q] {
            if rm.is_identity() {
                continue;
            }
            let mut z = tx / 2.0 + tx / 2.0 + (dm + 1.0) * ty + t_idle * ty;
            let magic_z = grown * grow_y + cult_y;
            if k >= 3 {
                z += (side / n_m) * dm * (1.0 + r) * rates.rec_x(d.d_m + 1, dims.d_h + 6)?;
                z += ((n_m - side) / n_m) * dm * (1.0 + r) * rates.rec_z(dims.d_v + 6, d.d_m + 1)?;
            }
            b.one(Rule::Auxiliary, rm, Angle::Half, z)?;
            b.one(Rule::Magic, rm, Angle::Half, magic_z)?;
            let idle = t_idle * tx + rates.timelike(dims.d_h + 6, dims.d_v + 6, d.d_m)? / 2.0;
            let mag = grown * grow_x + cult_x;
            for a in [Angle::PlusQuarter, Angle::MinusQuarter] {
                b.one(Rule::Auxiliary, rm, a, idle)?;
                b.one(Rule::Magic, rm, a, mag)?;
            }
        }
        if k >= 3 {
            ancilla_spacelike(&mut b, s, p, q, rates, dims.d_v)?;
        } else {
            let z = dm * (1.0 + r) * rates.rec_z(dims.d_v + 6, d.d_z.min(d.d_m + 1))?;
            for rm in [p, q] {
                b.one(Rule::AncillaSpacelike, rm, Angle::Half, z)?;
            }
        }
    }
    Ok(b.out)
}
