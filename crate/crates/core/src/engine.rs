//! Exact density-matrix evaluation of the distillation block, the closed-form
//! approximations, and full performance reports.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{AnsatzSet, RateModel};
use crate::channels::{channels_combined, channels_single_level, MagicInputs, NoiseChannel};
use crate::circuit::{verify_pairing, Distances, StageSchedule};
use crate::costs::{space_cost, time_cost};
use crate::error::{domain, Error, Result};
use crate::grow::{growing_rates, CultivationTable, GrowRateTable};
use crate::scheme::{derive_dims, DerivedDims, SchemeParams, Variant};

const DIM: usize = 32;

/// Output qubit amplitude of the target magic state, `(|0> + e^{-i pi/4}|1>)/sqrt 2`.
fn target() -> [Complex64; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [Complex64::new(s, 0.0), Complex64::from_polar(s, -std::f64::consts::FRAC_PI_4)]
}

/// 32x32 density matrix over (Out, A, B, C, D); basis bit 0 is Out, bits 1..4 are A..D.
#[derive(Clone, Debug)]
pub struct LogicalState {
    pub rho: Vec<Complex64>,
}

impl LogicalState {
    pub fn initial() -> Self {
        let t = target();
        let amp: Vec<Complex64> = (0..DIM).map(|i| t[i & 1] * 0.25).collect();
        let mut rho = vec![Complex64::new(0.0, 0.0); DIM * DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                rho[i * DIM + j] = amp[i] * amp[j].conj();
            }
        }
        LogicalState { rho }
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.rho[i * DIM + j]
    }

    /// Applies `(1 - p) rho + p U rho U^dagger` for a diagonal `U`.
    pub fn apply(&mut self, ch: &NoiseChannel) {
        if ch.p_err == 0.0 {
            return;
        }
        let u: Vec<Complex64> = (0..DIM)
            .map(|i| {
                let phase: f64 = ch
                    .terms
                    .iter()
                    .map(|t| {
                        let s = if t.0.parity(i) == 0 { 1.0 } else { -1.0 };
                        -t.1.radians() * s
                    })
                    .sum();
                Complex64::from_polar(1.0, phase)
            })
            .collect();
        let p = ch.p_err;
        for i in 0..DIM {
            for j in 0..DIM {
                let f = (1.0 - p) + p * u[i] * u[j].conj();
                self.rho[i * DIM + j] *= f;
            }
        }
    }

    /// Unnormalized output block after projecting A..D onto |+>.
    pub fn project(&self) -> [[Complex64; 2]; 2] {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (a, row) in out.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for x in 0..16 {
                    for y in 0..16 {
                        acc += self.at(a | (x << 1), b | (y << 1));
                    }
                }
                *cell = acc / 16.0;
            }
        }
        out
    }
}

/// Success probability and output infidelity after the channel list.
pub fn evolve_and_project(channels: &[NoiseChannel]) -> Result<(f64, f64)> {
    let mut st = LogicalState::initial();
    for ch in channels {
        if !(0.0..=1.0).contains(&ch.p_err) {
            return domain(format!("channel probability {} outside [0, 1]", ch.p_err));
        }
        st.apply(ch);
    }
    let out = st.project();
    let q_succ = (out[0][0] + out[1][1]).re;
    if !(q_succ > 0.0) || !q_succ.is_finite() {
        return Err(Error::Numeric(format!("projected trace {q_succ} is not positive")));
    }
    let t = target();
    let mut f = Complex64::new(0.0, 0.0);
    for a in 0..2 {
        for b in 0..2 {
            f += t[a].conj() * out[a][b] * t[b];
        }
    }
    let q_dist = (1.0 - f.re / q_succ).max(0.0);
    if q_succ > 1.0 + 1e-9 {
        return Err(Error::Numeric(format!("projected trace {q_succ} exceeds 1")));
    }
    Ok((q_succ.min(1.0), q_dist))
}

/// Aggregated rates used by the closed-form expressions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalyticInputs {
    pub p_out: f64,
    pub p_rec_x: f64,
    /// `r_y` times `p_rec_z_base`.
    pub p_rec_z: f64,
    /// `p_rec_z / r_y`, kept so that the `1/r_y` quotient stays finite at `r_y = 0`.
    pub p_rec_z_base: f64,
    pub p_m: f64,
    pub p_timelike: f64,
    pub p_anc_out: f64,
    pub p_anc_rec: f64,
    pub p_anc_rec_pre: f64,
    pub p_anc_m: f64,
    pub p_magic: f64,
    pub d_m: f64,
    pub d_z: f64,
    /// `(d_H + 6)(d_V + 6)`
    pub area: f64,
    pub t_intv: f64,
}

pub fn analytic_inputs_single(s: &SchemeParams, rates: &RateModel) -> Result<AnalyticInputs> {
    let dims = derive_dims(s)?;
    let Distances { d_out, d_x, d_z, d_m } = s.d;
    let r = rates.r_y;
    let dm = d_m as f64;
    let base = (dm + 1.0) * rates.rec_z(d_x, d_z)?;
    Ok(AnalyticInputs {
        p_out: rates.tri_x(d_out)?,
        p_rec_x: rates.rec_x(d_x, d_z)?,
        p_rec_z: r * base,
        p_rec_z_base: base,
        p_m: (2.0 * dm + 1.0 + r) * rates.tri_x(d_m)?,
        p_timelike: rates.timelike(dims.d_h + 6, dims.d_v + 6, d_m)?,
        p_anc_out: rates.rec_z(dims.d_v + 6, d_out + 1)?,
        p_anc_rec: dm * (1.0 + r) * rates.rec_z(dims.d_v + 6, d_z)?,
        p_anc_rec_pre: dm * (1.0 + r) * rates.rec_z(4, d_z)?,
        p_anc_m: dm * (1.0 + r) * rates.rec_x(d_m + 1, dims.d_h + 6)?,
        p_magic: 0.0,
        d_m: dm,
        d_z: d_z as f64,
        area: ((dims.d_h + 6) * (dims.d_v + 6)) as f64,
        t_intv: dm + 1.0,
    })
}

pub fn analytic_inputs_combined(s: &SchemeParams, rates: &RateModel, magic: MagicInputs) -> Result<AnalyticInputs> {
    let dims = derive_dims(s)?;
    let Distances { d_out, d_x, d_z, d_m } = s.d;
    let r = rates.r_y;
    let dm = d_m as f64;
    let t_intv = s.t_intv.ok_or_else(|| Error::Domain("analytic model needs T_intv".into()))?;
    let t_idle = s.t_idle.ok_or_else(|| Error::Domain("analytic model needs T_idle".into()))?;
    if t_intv <= dm {
        return domain(format!("T_intv ({t_intv}) must exceed d_m ({d_m})"));
    }
    let grown = if Some(d_m) == s.d_cult { 0.0 } else { 1.0 };
    let p_cult = magic.q_cult / (2.0 + r);
    let p_grow = magic.p_grow / (2.0 * (1.0 + r));
    let base = t_intv * rates.rec_z(d_x, d_z)?;
    Ok(AnalyticInputs {
        p_out: rates.tri_x(d_out)?,
        p_rec_x: (t_intv - dm) * rates.rec_x(d_x, d_z)?,
        p_rec_z: r * base,
        p_rec_z_base: base,
        p_m: ((1.0 + r) * (t_idle + dm) + 1.0) * rates.tri_x(d_m)?,
        p_timelike: rates.timelike(dims.d_h + 6, dims.d_v + 6, d_m)?,
        p_magic: (1.0 + r) * (p_cult + grown * p_grow),
        p_anc_out: rates.rec_z(dims.d_v + 6, d_out + 1)?,
        p_anc_rec: dm * (1.0 + r) * rates.rec_z(dims.d_v + 6, d_z)?,
        p_anc_rec_pre: dm * (1.0 + r) * rates.rec_z(d_m + 1, dims.d_v + 6)?,
        p_anc_m: dm * (1.0 + r) * rates.rec_x(d_m + 1, dims.d_h + 6)?,
        d_m: dm,
        d_z: d_z as f64,
        area: ((dims.d_h + 6) * (dims.d_v + 6)) as f64,
        t_intv,
    })
}

/// Closed-form `(q_dist, q_succ)` of the single-level scheme.
pub fn analytic_single(a: &AnalyticInputs, p: f64, r: f64) -> (f64, f64) {
    let t = 7.0 * p / 3.0;
    let tl_coeff = if a.area > 0.0 { (11.0 * a.area + 16.0 * a.d_z) / a.area } else { 11.0 };
    let dm = a.d_m;
    let q = 35.0 * t.powi(3)
        + (16.0 * dm + 19.0 + r) / 4.0 * a.p_out
        + dm * (7.0 + r) * a.p_anc_out
        + 3.5 * t * t * (15.0 * a.p_m + 22.0 * a.p_anc_m + 8.0 * a.p_anc_rec_pre + tl_coeff * a.p_timelike)
        + (8.0 * a.p_rec_z + 4.0 * a.p_anc_rec + (27.0 + 19.0 * r) / 8.0 * a.p_rec_x)
            * (14.0 / 3.0 * p + a.p_m + 2.0 * a.p_anc_m + a.p_timelike)
        + 4.0 * a.p_rec_x * a.p_rec_z
        + 2.0 * a.p_rec_x * a.p_anc_rec
        + (31.0 + 68.0 * r) / 8.0 * a.p_rec_x.powi(2);
    let s = 1.0
        - 35.0 * p
        - 7.5 * a.p_m
        - 11.0 * a.p_anc_m
        - 4.0 * a.p_anc_rec_pre
        - tl_coeff / 2.0 * a.p_timelike
        - 16.0 * (2.0 + r) * a.p_rec_z_base
        - 4.0 * (5.0 + 3.0 * r) / (1.0 + r) * a.p_anc_rec
        - (4.0 * dm + 71.0 + 35.0 * r) / 4.0 * a.p_rec_x
        - 2.0 * (1.0 + r) * a.p_out;
    (q, s)
}

/// Closed-form `(q_dist, q_succ)` of the cultivation scheme.
pub fn analytic_combined(a: &AnalyticInputs, r: f64) -> (f64, f64) {
    let s = a.p_magic + a.p_m + a.p_anc_m + a.p_timelike / 2.0;
    let pre = a.p_anc_rec_pre;
    let (t, dm) = (a.t_intv, a.d_m);
    let q = 35.0 * s.powi(3)
        + 28.0 * pre * s * s
        + ((27.0 + 19.0 * r) / 4.0 * a.p_rec_x + 16.0 * a.p_rec_z + 8.0 * a.p_anc_rec + 6.0 * pre * pre) * s
        + (19.0 * t - 3.0 * dm + (t - dm) * r) / 4.0 * a.p_out
        + dm * (7.0 + r) * a.p_anc_out
        + (31.0 + 68.0 * r) / 8.0 * a.p_rec_x.powi(2)
        + ((2.5 + r) * pre * pre + 2.0 * a.p_anc_rec + 4.0 * a.p_rec_z) * a.p_rec_x;
    let succ = 1.0
        - 15.0 * s
        - ((71.0 + 35.0 * r) / 4.0 + dm / (t - dm)) * a.p_rec_x
        - 16.0 * (2.0 + r) * a.p_rec_z_base
        - (20.0 + 12.0 * r) / (1.0 + r) * a.p_anc_rec
        - 4.0 * pre;
    (q, succ)
}

/// Lookup tables consumed by the cultivation scheme.
#[derive(Clone, Debug, Default)]
pub struct Tables {
    pub grow: GrowRateTable,
    pub cult: CultivationTable,
}

impl Tables {
    pub fn bundled() -> Result<Self> {
        Ok(Tables { grow: GrowRateTable::bundled()?, cult: CultivationTable::bundled()? })
    }
}

/// Growing and cultivation inputs for a cultivation-scheme point.
pub fn magic_inputs(s: &SchemeParams, tables: &Tables) -> Result<MagicInputs> {
    let d_cult = s.d_cult_checked()?;
    let q_cult = match s.q_cult {
        Some(q) => q,
        None => tables.cult.lookup(s.p, d_cult)?.q_cult.ok_or_else(|| {
            Error::Data(format!("no cultivation infidelity known for p={}, d_cult={d_cult}; pass one explicitly", s.p))
        })?,
    };
    let p_grow = if s.d.d_m == d_cult {
        0.0
    } else {
        let c_gap = s.c_gap.ok_or_else(|| Error::Domain("growing needs c_gap".into()))?;
        growing_rates(&tables.grow, s.p, d_cult, s.d.d_m, c_gap)?.p_log
    };
    Ok(MagicInputs { p_grow, q_cult })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerformanceReport {
    pub scheme: String,
    pub d: Distances,
    pub p: f64,
    pub r_y: f64,
    pub q_dist_exact: f64,
    pub q_dist_analytic: f64,
    pub q_succ: f64,
    pub q_succ_analytic: f64,
    pub space: u64,
    pub time: f64,
    pub effective_spacetime: f64,
    pub dims: DerivedDims,
    /// Summed channel probabilities per rule, plus scheme-specific inputs.
    pub diagnostics: BTreeMap<String, f64>,
}

/// Channels, exact and analytic evaluation, and costs for one scheme point.
pub fn evaluate_scheme(s: &SchemeParams, schedule: &StageSchedule, set: &AnsatzSet, tables: &Tables) -> Result<PerformanceReport> {
    s.validate()?;
    let rates = RateModel::new(*set, s.p, s.r_y)?;
    let mut diagnostics = BTreeMap::new();
    let (channels, analytic) = match s.variant {
        Variant::SingleLevel => {
            let ch = channels_single_level(s, schedule, &rates)?;
            let a = analytic_single(&analytic_inputs_single(s, &rates)?, s.p, s.r_y);
            (ch, a)
        }
        Variant::CultivationMsd => {
            let magic = magic_inputs(s, tables)?;
            diagnostics.insert("p_grow".into(), magic.p_grow);
            diagnostics.insert("q_cult".into(), magic.q_cult);
            let ch = channels_combined(s, schedule, &rates, magic)?;
            let a = analytic_combined(&analytic_inputs_combined(s, &rates, magic)?, s.r_y);
            (ch, a)
        }
    };
    for ch in &channels {
        *diagnostics.entry(format!("rule.{}", ch.rule)).or_insert(0.0) += ch.p_err;
    }
    let (q_succ, q_dist) = evolve_and_project(&channels)?;
    let space = space_cost(s)?;
    let time = time_cost(s, None)?;
    Ok(PerformanceReport {
        scheme: s.label(),
        d: s.d,
        p: s.p,
        r_y: s.r_y,
        q_dist_exact: q_dist,
        q_dist_analytic: analytic.0,
        q_succ,
        q_succ_analytic: analytic.1,
        space,
        time,
        effective_spacetime: space as f64 * time / q_succ,
        dims: derive_dims(s)?,
        diagnostics,
    })
}

/// Exact infidelity at each Y-ratio with total failure rates held fixed.
pub fn py_ratio_sweep(
    s: &SchemeParams,
    schedule: &StageSchedule,
    set: &AnsatzSet,
    tables: &Tables,
    ratios: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if ratios.iter().any(|r| !(0.0..=1.0).contains(r)) {
        return domain("Y-ratios must lie in [0, 1]");
    }
    ratios
        .iter()
        .map(|&r| {
            let pt = SchemeParams { r_y: r, ..s.clone() };
            Ok((r, evaluate_scheme(&pt, schedule, set, tables)?.q_dist_exact))
        })
        .collect()
}

/// Distance ranges of a sweep. Every combination is tried; inadmissible ones are skipped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub d_out: Vec<u32>,
    pub d_x: Vec<u32>,
    pub d_z: Vec<u32>,
    pub d_m: Vec<u32>,
}

impl SweepGrid {
    pub fn tuples(&self) -> Vec<Distances> {
        let mut v = Vec::new();
        for &o in &self.d_out {
            for &x in &self.d_x {
                for &z in &self.d_z {
                    for &m in &self.d_m {
                        v.push(Distances::new(o, x, z, m));
                    }
                }
            }
        }
        v.sort();
        v.dedup();
        v
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepConstraints {
    pub max_q_dist: Option<f64>,
    pub max_space: Option<u64>,
}

/// Evaluates every admissible single-level tuple; returns all reports sorted by
/// distances and the indices of the frontier under (q_dist, effective spacetime).
pub fn sweep_single(
    grid: &SweepGrid,
    p: f64,
    r_y: f64,
    schedule: &StageSchedule,
    set: &AnsatzSet,
    constraints: SweepConstraints,
) -> Result<(Vec<PerformanceReport>, Vec<usize>)> {
    let tuples: Vec<Distances> = grid
        .tuples()
        .into_iter()
        .filter(|d| {
            let s = SchemeParams::single(*d, p, r_y);
            s.validate().is_ok() && verify_pairing(schedule, *d).is_ok_and(|v| v.is_empty())
        })
        .collect();
    if tuples.is_empty() {
        return domain("no admissible points in the sweep grid");
    }
    let tables = Tables::default();
    let reports: Vec<PerformanceReport> = tuples
        .par_iter()
        .map(|d| evaluate_scheme(&SchemeParams::single(*d, p, r_y), schedule, set, &tables))
        .collect::<Result<Vec<_>>>()?;
    let reports: Vec<PerformanceReport> = reports
        .into_iter()
        .filter(|r| constraints.max_q_dist.is_none_or(|m| r.q_dist_exact <= m))
        .filter(|r| constraints.max_space.is_none_or(|m| r.space <= m))
        .collect();
    let front = pareto_front(&reports);
    Ok((reports, front))
}

/// Frontier of [`sweep_single`] as reports.
pub fn pareto_sweep(
    grid: &SweepGrid,
    p: f64,
    r_y: f64,
    schedule: &StageSchedule,
    set: &AnsatzSet,
    constraints: SweepConstraints,
) -> Result<Vec<PerformanceReport>> {
    let (all, front) = sweep_single(grid, p, r_y, schedule, set, constraints)?;
    Ok(front.into_iter().map(|i| all[i].clone()).collect())
}

/// Indices of non-dominated reports (minimizing q_dist and effective spacetime).
/// Exact ties keep only the smallest space cost, then the first index.
pub fn pareto_front(reports: &[PerformanceReport]) -> Vec<usize> {
    let key = |r: &PerformanceReport| (r.q_dist_exact, r.effective_spacetime);
    let mut keep = Vec::new();
    'outer: for (i, a) in reports.iter().enumerate() {
        let (qa, ea) = key(a);
        for (j, b) in reports.iter().enumerate() {
            if i == j {
                continue;
            }
            let (qb, eb) = key(b);
            let dominates = qb <= qa && eb <= ea && (qb < qa || eb < ea);
            let tie_wins = qb == qa && eb == ea && (b.space, j) < (a.space, i);
            if dominates || tie_wins {
                continue 'outer;
            }
        }
        keep.push(i);
    }
    keep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{Angle, Rule, RotationTerm};
    use crate::circuit::ZMask;

    fn ch(m: u8, a: Angle, p: f64) -> NoiseChannel {
        NoiseChannel { terms: vec![RotationTerm(ZMask(m), a)], p_err: p, rule: Rule::MemoryZ, stage: 0 }
    }

    #[test]
    fn noiseless() {
        let (s, q) = evolve_and_project(&[]).unwrap();
        assert!((s - 1.0).abs() < 1e-12 && q.abs() < 1e-12);
    }

    #[test]
    fn output_flip() {
        let (s, q) = evolve_and_project(&[ch(1, Angle::Half, 0.013)]).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        assert!((q - 0.013).abs() < 1e-12);
    }

    #[test]
    fn validation_flip_is_detected() {
        let (s, q) = evolve_and_project(&[ch(2, Angle::Half, 0.2)]).unwrap();
        assert!((s - 0.8).abs() < 1e-12);
        assert!(q.abs() < 1e-12);
    }

    #[test]
    fn analytic_zero_inputs() {
        let a = AnalyticInputs { t_intv: 20.0, d_m: 9.0, ..Default::default() };
        assert_eq!(analytic_single(&a, 0.0, 0.1), (0.0, 1.0));
        assert_eq!(analytic_combined(&a, 0.1), (0.0, 1.0));
        let p = 1e-3;
        let (q, _) = analytic_single(&a, p, 0.0);
        assert!((q - 35.0 * (7.0 * p / 3.0f64).powi(3)).abs() < 1e-20);
    }
}
