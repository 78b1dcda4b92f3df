//! Round-by-round Monte Carlo of the magic-state preparation cycle feeding the
//! cultivation scheme: two groups of `N_m` patches cultivate (and grow) magic
//! states; a distillation stage starts once both groups hold a ready state.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::costs::T_ROUND;
use crate::engine::Tables;
use crate::error::{domain, Result};
use crate::grow::growing_rates;

pub const WARMUP_STAGES: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleConfig {
    pub n_m: u32,
    /// Cultivation duration in time steps.
    pub t_cult: u32,
    #[serde(default = "default_round")]
    pub t_round: u32,
    pub d_m: u32,
    pub d_cult: u32,
    pub q_cult_succ: f64,
    pub p_acc: f64,
    /// Surgery duration in rounds; one more round is spent measuring out.
    pub merge_rounds: u32,
    pub seed: u64,
    pub n_stages: usize,
}

fn default_round() -> u32 {
    T_ROUND as u32
}

impl CycleConfig {
    pub fn new(n_m: u32, t_cult: u32, d_m: u32, d_cult: u32, q_cult_succ: f64, p_acc: f64) -> Self {
        CycleConfig {
            n_m,
            t_cult,
            t_round: default_round(),
            d_m,
            d_cult,
            q_cult_succ,
            p_acc,
            merge_rounds: d_m,
            seed: 0,
            n_stages: 1000,
        }
    }

    /// Config from the bundled cultivation and growing tables. Returns a
    /// diagnostic when the acceptance rate had to default to 1.
    pub fn from_tables(
        p: f64,
        d_cult: u32,
        n_m: u32,
        d_m: u32,
        c_gap: f64,
        tables: &Tables,
    ) -> Result<(Self, Option<String>)> {
        let cult = tables.cult.lookup(p, d_cult)?;
        let mut note = None;
        let p_acc = if d_m == d_cult {
            1.0
        } else {
            match growing_rates(&tables.grow, p, d_cult, d_m, c_gap).map(|g| g.p_acc) {
                Ok(Some(a)) => a,
                Ok(None) => {
                    note = Some(format!("no growing acceptance data for p={p}, d_cult={d_cult}; using p_acc = 1"));
                    1.0
                }
                Err(e) => {
                    note = Some(format!("{e}; using p_acc = 1"));
                    1.0
                }
            }
        };
        Ok((CycleConfig::new(n_m, cult.t_cult, d_m, d_cult, cult.q_cult_succ, p_acc), note))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_m == 0 || self.t_cult == 0 || self.t_round == 0 || self.merge_rounds == 0 {
            return domain("cycle durations and N_m must be positive");
        }
        for (name, v) in [("q_cult_succ", self.q_cult_succ), ("p_acc", self.p_acc)] {
            if !(v > 0.0 && v <= 1.0) {
                return domain(format!("{name} must lie in (0, 1], got {v}"));
            }
        }
        if self.d_cult > self.d_m {
            return domain(format!("d_cult ({}) exceeds d_m ({})", self.d_cult, self.d_m));
        }
        if self.n_stages < 2 {
            return domain("need at least two recorded stages");
        }
        Ok(())
    }

    fn cult_rounds(&self) -> u64 {
        (self.t_cult as u64).div_ceil(self.t_round as u64)
    }

    fn grow_rounds(&self) -> u64 {
        if self.d_m == self.d_cult {
            0
        } else {
            self.d_m as u64
        }
    }
}

/// Minimum spacing, in rounds, between launches within one group.
pub fn t_m(c: &CycleConfig) -> u32 {
    c.t_cult.div_ceil(c.t_round * c.n_m)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscardCounts {
    pub cultivation_failed: u64,
    pub growth_rejected: u64,
    /// Ready while a merge was in progress.
    pub during_merge: u64,
    /// Replaced by a newer state of the same group.
    pub displaced: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleStats {
    pub t_m: u32,
    pub stages: usize,
    pub t_intv_mean: f64,
    pub t_intv_stderr: f64,
    pub t_idle_mean: f64,
    pub t_idle_stderr: f64,
    /// (gap in rounds, count)
    pub gap_histogram: Vec<(u64, u64)>,
    pub discards: DiscardCounts,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Patch {
    Free,
    Cultivating(u64),
    Growing(u64),
    Ready,
    /// Consumed by a merge until the given round.
    Busy(u64),
}

struct Group {
    patches: Vec<Patch>,
    last_launch: Option<u64>,
    ready: Option<(usize, u64)>,
}

fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (m, 0.0);
    }
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

/// Simulates until `WARMUP_STAGES + n_stages` stages have started.
///
/// Each round first resolves completions, then starts a stage if possible,
/// then launches at most one cultivation per group.
pub fn simulate(c: &CycleConfig) -> Result<CycleStats> {
    c.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let spacing = t_m(c) as u64;
    let (cult, grow) = (c.cult_rounds(), c.grow_rounds());
    let merge = c.merge_rounds as u64 + 1;
    let mut groups: Vec<Group> = (0..2)
        .map(|_| Group { patches: vec![Patch::Free; c.n_m as usize], last_launch: None, ready: None })
        .collect();
    let mut discards = DiscardCounts::default();
    let mut merge_end = 0u64;
    let mut starts: Vec<u64> = Vec::new();
    let mut idles: Vec<f64> = Vec::new();
    let target = WARMUP_STAGES + c.n_stages;
    let mut t = 0u64;
    while starts.len() < target {
        for g in groups.iter_mut() {
            for i in 0..g.patches.len() {
                let mut done = false;
                match g.patches[i] {
                    Patch::Cultivating(end) if end == t => {
                        if rng.gen::<f64>() < c.q_cult_succ {
                            if grow > 0 {
                                g.patches[i] = Patch::Growing(t + grow);
                            } else {
                                done = true;
                            }
                        } else {
                            discards.cultivation_failed += 1;
                            g.patches[i] = Patch::Free;
                        }
                    }
                    Patch::Busy(end) if end == t => g.patches[i] = Patch::Free,
                    _ => {}
                }
                if let Patch::Growing(end) = g.patches[i] {
                    if end == t {
                        if rng.gen::<f64>() < c.p_acc {
                            done = true;
                        } else {
                            discards.growth_rejected += 1;
                            g.patches[i] = Patch::Free;
                        }
                    }
                }
                if done {
                    if t < merge_end {
                        discards.during_merge += 1;
                        g.patches[i] = Patch::Free;
                    } else {
                        if let Some((old, _)) = g.ready {
                            discards.displaced += 1;
                            g.patches[old] = Patch::Free;
                        }
                        g.ready = Some((i, t));
                        g.patches[i] = Patch::Ready;
                    }
                }
            }
        }

        if t >= merge_end && groups.iter().all(|g| g.ready.is_some()) {
            let record = starts.len() >= WARMUP_STAGES;
            starts.push(t);
            for g in groups.iter_mut() {
                let (i, ready_at) = g.ready.take().unwrap();
                if record {
                    idles.push((t - ready_at) as f64);
                }
                g.patches[i] = Patch::Busy(t + merge);
            }
            merge_end = t + merge;
        }

        for g in groups.iter_mut() {
            if g.last_launch.is_none_or(|l| t - l >= spacing) {
                if let Some(i) = g.patches.iter().position(|p| *p == Patch::Free) {
                    g.patches[i] = Patch::Cultivating(t + cult);
                    g.last_launch = Some(t);
                }
            }
        }
        t += 1;
    }

    let recorded = &starts[WARMUP_STAGES..];
    let gaps: Vec<f64> = recorded.windows(2).map(|w| (w[1] - w[0]) as f64).collect();
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    for g in &gaps {
        *hist.entry(*g as u64).or_default() += 1;
    }
    let (t_intv_mean, t_intv_stderr) = mean_se(&gaps);
    let (t_idle_mean, t_idle_stderr) = mean_se(&idles);
    Ok(CycleStats {
        t_m: t_m(c),
        stages: recorded.len(),
        t_intv_mean,
        t_intv_stderr,
        t_idle_mean,
        t_idle_stderr,
        gap_histogram: hist.into_iter().collect(),
        discards,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing() {
        let mut c = CycleConfig::new(4, 36, 13, 3, 0.65, 0.9);
        assert_eq!(t_m(&c), 2);
        c.n_m = 5;
        assert_eq!(t_m(&c), 1);
        c.t_cult = 40;
        assert_eq!(t_m(&c), 1);
    }

    #[test]
    fn deterministic_single_patch() {
        // one patch per group, no failures: cultivate, merge, repeat
        let mut c = CycleConfig::new(1, 36, 3, 3, 1.0, 1.0);
        c.n_stages = 50;
        let s = simulate(&c).unwrap();
        assert_eq!(s.gap_histogram, vec![(5 + 3 + 1, 49)]);
        assert_eq!(s.t_idle_mean, 0.0);
    }

    #[test]
    fn merge_limited() {
        let mut c = CycleConfig::new(8, 36, 3, 3, 1.0, 1.0);
        c.n_stages = 100;
        let s = simulate(&c).unwrap();
        assert_eq!(s.t_intv_mean, 4.0);
    }
}
