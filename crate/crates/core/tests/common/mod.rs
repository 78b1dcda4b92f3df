//! Published table rows shared by the integration tests.
#![allow(dead_code)]

use msdforge::circuit::Distances;
use msdforge::scheme::SchemeParams;

#[derive(Clone, Copy, Debug)]
pub struct Row {
    pub d: (u32, u32, u32, u32),
    /// (d_cult, N_m, c_gap) for cultivation rows.
    pub cult: Option<(u32, u32, f64)>,
    pub p: f64,
    pub q_dist: f64,
    pub fail: f64,
    pub space: f64,
    pub time: f64,
    /// (T_m, T_intv, T_idle)
    pub cycle: Option<(u32, f64, f64)>,
}

const fn sng(d: (u32, u32, u32, u32), p: f64, q_dist: f64, fail: f64, space: f64, time: f64) -> Row {
    Row { d, cult: None, p, q_dist, fail, space, time, cycle: None }
}

#[allow(clippy::too_many_arguments)]
const fn cmb(
    d: (u32, u32, u32, u32),
    cult: (u32, u32, f64),
    p: f64,
    q_dist: f64,
    fail: f64,
    space: f64,
    time: f64,
    cycle: (u32, f64, f64),
) -> Row {
    Row { d, cult: Some(cult), p, q_dist, fail, space, time, cycle: Some(cycle) }
}

pub const TABLE: [Row; 16] = [
    sng((11, 8, 6, 5), 5e-4, 1.52e-5, 4.71e-2, 833.0, 384.0),
    sng((19, 10, 12, 7), 5e-4, 1.02e-7, 1.99e-2, 2401.0, 512.0),
    cmb((23, 14, 16, 7), (3, 4, 5.03), 5e-4, 1.13e-9, 3.69e-3, 5347.0, 759.0, (2, 11.9, 0.6)),
    cmb((31, 18, 20, 11), (3, 3, 10.05), 5e-4, 1.11e-12, 1.00e-4, 8825.0, 1298.0, (2, 20.3, 1.2)),
    cmb((41, 22, 28, 13), (3, 4, 13.41), 5e-4, 1.09e-15, 3.02e-5, 1.59e4, 1348.0, (2, 21.1, 1.1)),
    cmb((49, 30, 34, 15), (5, 4, 18.12), 5e-4, 1.24e-18, 4.09e-6, 2.52e4, 2272.0, (3, 35.5, 3.6)),
    cmb((59, 34, 40, 19), (5, 6, 23.23), 5e-4, 1.06e-21, 4.19e-7, 4.02e4, 2378.0, (2, 37.2, 3.0)),
    cmb((63, 40, 44, 19), (5, 8, 23.23), 5e-4, 7.75e-22, 4.21e-7, 6.05e4, 2073.0, (2, 32.4, 2.2)),
    sng((19, 8, 12, 7), 1e-3, 1.21e-5, 7.17e-2, 2265.0, 512.0),
    sng((25, 12, 16, 11), 1e-3, 1.03e-6, 3.77e-2, 4181.0, 768.0),
    cmb((29, 16, 20, 9), (3, 5, 6.09), 1e-3, 1.04e-7, 1.34e-2, 9081.0, 925.0, (1, 14.5, 0.7)),
    cmb((39, 22, 26, 13), (3, 4, 7.60), 1e-3, 1.03e-9, 1.96e-3, 1.50e4, 1391.0, (2, 21.7, 1.4)),
    cmb((51, 28, 36, 15), (3, 4, 10.66), 1e-3, 1.00e-11, 8.37e-4, 2.60e4, 1595.0, (2, 24.9, 1.5)),
    cmb((63, 36, 46, 17), (5, 6, 16.75), 1e-3, 1.02e-13, 1.95e-4, 4.58e4, 3020.0, (2, 47.2, 5.1)),
    cmb((71, 36, 48, 23), (5, 8, 20.62), 1e-3, 1.01e-15, 2.60e-5, 6.70e4, 3513.0, (2, 54.9, 5.4)),
    cmb((81, 44, 58, 23), (5, 8, 20.62), 1e-3, 2.00e-16, 2.65e-5, 9.07e4, 3513.0, (2, 54.9, 5.4)),
];

impl Row {
    pub fn distances(&self) -> Distances {
        Distances::new(self.d.0, self.d.1, self.d.2, self.d.3)
    }

    /// Scheme parameters at r_Y = 0.1, with the published T_intv/T_idle for cultivation rows.
    pub fn params(&self) -> SchemeParams {
        match (self.cult, self.cycle) {
            (Some((dc, nm, cg)), Some((_, ti, tid))) => {
                let mut s = SchemeParams::combined(self.distances(), dc, nm, cg, self.p, 0.1);
                s.t_intv = Some(ti);
                s.t_idle = Some(tid);
                s
            }
            _ => SchemeParams::single(self.distances(), self.p, 0.1),
        }
    }
}

pub fn single_rows() -> impl Iterator<Item = &'static Row> {
    TABLE.iter().filter(|r| r.cult.is_none())
}

pub fn combined_rows() -> impl Iterator<Item = &'static Row> {
    TABLE.iter().filter(|r| r.cult.is_some())
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

use msdforge::circuit::{default_stage_schedule, verify_pairing, StageSchedule};
use msdforge::layout::LayoutChecker;

/// Admissible layout grid: d_out 11..41 odd, d_Z 6..28 even, d_m 5..27 odd, d_X = 8.
pub fn layout_grid() -> Vec<Distances> {
    let mut v = Vec::new();
    for d_out in (11..=41).step_by(2) {
        for d_z in (6..=28).step_by(2) {
            for d_m in (5..=27).step_by(2) {
                if d_m < d_out && d_z < d_out {
                    v.push(Distances::new(d_out, 8, d_z, d_m));
                }
            }
        }
    }
    v
}

/// Grid points where the layout check and the pairing condition disagree.
pub fn layout_mismatches(s: &StageSchedule, checker: &mut LayoutChecker) -> Vec<Distances> {
    layout_grid()
        .into_iter()
        .filter(|&d| checker.check(s, d, false).unwrap().is_empty() != verify_pairing(s, d).unwrap().is_empty())
        .collect()
}

/// Random reordering of the default schedule: late rotations are shuffled
/// freely, validation triples keep their partners.
pub fn mutate_schedule(rng: &mut impl rand::Rng) -> StageSchedule {
    use rand::seq::SliceRandom;
    let base = default_stage_schedule();
    let mut late: Vec<_> = base.stages[4..].iter().flat_map(|&(p, q)| [p, q]).collect();
    late.shuffle(rng);
    let mut triples = base.stages[2..4].to_vec();
    triples.shuffle(rng);
    for t in triples.iter_mut() {
        if rng.gen_bool(0.5) {
            *t = (t.1, t.0);
        }
    }
    let mut stages = base.stages[..2].to_vec();
    stages.extend(triples);
    stages.extend(late.chunks(2).map(|c| (c[0], c[1])));
    StageSchedule::new(stages).unwrap()
}
