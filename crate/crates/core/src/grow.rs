//! Growing-operation rate tables and cultivation figures.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data;
use crate::error::{Error, Result};

fn same_p(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(r)
}

/// One row of a growing table. A missing `d_m` applies to every `d_m`; a missing
/// `c_gap` marks a point on the (p_log, p_acc) trade-off curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowRow {
    pub p: f64,
    pub d_cult: u32,
    pub d_m: Option<u32>,
    pub c_gap: Option<f64>,
    pub p_log: f64,
    pub p_acc: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GrowRateTable {
    pub rows: Vec<GrowRow>,
}

/// Interpolated growing figures. `p_acc` is `None` when the table cannot say.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowRates {
    pub p_log: f64,
    pub p_acc: Option<f64>,
}

impl GrowRateTable {
    pub fn from_reader<R: Read>(r: R) -> Result<Self> {
        let mut rows = Vec::new();
        for rec in reader(r).deserialize() {
            let row: GrowRow = rec?;
            rows.push(row);
        }
        let t = GrowRateTable { rows };
        t.validate()?;
        Ok(t)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        Self::from_reader(f)
    }

    /// Bundled anchors (or the copy in `$MSDFORGE_DATA_DIR`).
    pub fn bundled() -> Result<Self> {
        Self::from_reader(data::read("grow_anchors.csv")?.as_bytes())
    }

    /// Appends the rows of `other`, e.g. a dense user table on top of the anchors.
    pub fn merged(mut self, other: &GrowRateTable) -> Result<Self> {
        self.rows.extend_from_slice(&other.rows);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        for r in &self.rows {
            let ok = r.p > 0.0
                && r.p < 1.0
                && (0.0..=1.0).contains(&r.p_log)
                && r.p_acc.is_none_or(|a| (0.0..=1.0).contains(&a))
                && r.c_gap.is_none_or(|c| c >= 0.0);
            if !ok {
                return Err(Error::Data(format!("grow table row out of range: {r:?}")));
            }
        }
        // p_acc must not increase with c_gap on a fixed curve
        for a in &self.rows {
            for b in &self.rows {
                if same_p(a.p, b.p) && a.d_cult == b.d_cult && a.d_m == b.d_m {
                    if let (Some(ca), Some(cb), Some(pa), Some(pb)) = (a.c_gap, b.c_gap, a.p_acc, b.p_acc) {
                        if ca < cb && pa < pb {
                            return Err(Error::Data(format!("p_acc increases with c_gap between {a:?} and {b:?}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn slice(&self, p: f64, d_cult: u32) -> Vec<GrowRow> {
        self.rows.iter().filter(|r| same_p(r.p, p) && r.d_cult == d_cult).copied().collect()
    }
}

/// Knots of one curve sorted by c_gap, plus the trade-off anchors.
struct Curve {
    knots: Vec<(f64, f64, Option<f64>)>,
    tradeoff: Vec<(f64, f64)>,
}

impl Curve {
    fn of(rows: &[GrowRow], d_m: Option<u32>) -> Curve {
        let pick = |r: &&GrowRow| r.d_m == d_m || r.d_m.is_none();
        let mut knots: Vec<(f64, f64, Option<f64>)> =
            rows.iter().filter(pick).filter_map(|r| r.c_gap.map(|c| (c, r.p_log, r.p_acc))).collect();
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        knots.dedup_by(|a, b| a.0 == b.0);
        let mut tradeoff: Vec<(f64, f64)> = rows
            .iter()
            .filter(pick)
            .filter_map(|r| r.p_acc.map(|a| (r.p_log.ln(), a)))
            .collect();
        tradeoff.sort_by(|a, b| a.0.total_cmp(&b.0));
        Curve { knots, tradeoff }
    }

    fn acc_from_tradeoff(&self, p_log: f64) -> Option<f64> {
        let t = &self.tradeoff;
        if t.is_empty() {
            return None;
        }
        let x = p_log.ln();
        if x <= t[0].0 {
            return Some(t[0].1);
        }
        if x >= t[t.len() - 1].0 {
            return Some(t[t.len() - 1].1);
        }
        let i = t.windows(2).position(|w| x >= w[0].0 && x <= w[1].0)?;
        let (x0, y0) = t[i];
        let (x1, y1) = t[i + 1];
        Some(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }

    fn at(&self, c_gap: f64) -> Result<GrowRates> {
        let k = &self.knots;
        if let Some(&(_, p_log, p_acc)) = k.iter().find(|kn| kn.0 == c_gap) {
            let p_acc = p_acc.or_else(|| self.acc_from_tradeoff(p_log));
            return Ok(GrowRates { p_log, p_acc });
        }
        if k.len() < 2 {
            return Err(Error::Data(format!("only {} c_gap knot(s) available, cannot interpolate at {c_gap}", k.len())));
        }
        if c_gap < k[0].0 || c_gap > k[k.len() - 1].0 {
            return Err(Error::Data(format!(
                "c_gap {c_gap} outside tabulated range [{}, {}] (rates jump past the last knot)",
                k[0].0,
                k[k.len() - 1].0
            )));
        }
        let i = k.windows(2).position(|w| c_gap >= w[0].0 && c_gap <= w[1].0).expect("bracketed");
        let (c0, l0, a0) = k[i];
        let (c1, l1, a1) = k[i + 1];
        let t = (c_gap - c0) / (c1 - c0);
        let p_log = (l0.ln() + t * (l1.ln() - l0.ln())).exp();
        let p_acc = match (a0, a1) {
            (Some(a0), Some(a1)) => Some(a0 + t * (a1 - a0)),
            _ => self.acc_from_tradeoff(p_log),
        };
        Ok(GrowRates { p_log, p_acc })
    }
}

/// Growing-operation infidelity and acceptance at `(p, d_cult, d_m, c_gap)`.
///
/// Interpolation is log-linear in c_gap for `p_log` and linear for `p_acc`.
/// Beyond the largest tabulated `d_m`, `log p_log` is extrapolated linearly from
/// the three largest `d_m` curves and `p_acc` keeps its last tabulated value.
pub fn growing_rates(table: &GrowRateTable, p: f64, d_cult: u32, d_m: u32, c_gap: f64) -> Result<GrowRates> {
    let rows = table.slice(p, d_cult);
    if rows.is_empty() {
        return Err(Error::Data(format!("grow table has no rows for p={p}, d_cult={d_cult}")));
    }
    let mut dms: Vec<u32> = rows.iter().filter_map(|r| r.d_m).collect();
    dms.sort_unstable();
    dms.dedup();
    if dms.is_empty() || dms.contains(&d_m) {
        let key = if dms.contains(&d_m) { Some(d_m) } else { None };
        return Curve::of(&rows, key).at(c_gap);
    }
    let max = *dms.last().unwrap();
    if d_m > max {
        let last: Vec<u32> = dms.iter().rev().take(3).rev().copied().collect();
        if last.len() < 2 {
            return Err(Error::Data("extrapolation in d_m needs at least two tabulated d_m".into()));
        }
        let pts: Vec<(f64, GrowRates)> =
            last.iter().map(|&dm| Ok((dm as f64, Curve::of(&rows, Some(dm)).at(c_gap)?))).collect::<Result<_>>()?;
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1.p_log.ln()).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1.p_log.ln() - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let slope = sxy / sxx;
        let p_log = (my + slope * (d_m as f64 - mx)).exp().min(1.0);
        return Ok(GrowRates { p_log, p_acc: pts.last().unwrap().1.p_acc });
    }
    let lo = dms.iter().rev().find(|&&x| x < d_m).copied();
    let hi = dms.iter().find(|&&x| x > d_m).copied();
    match (lo, hi) {
        (Some(lo), Some(hi)) => {
            let a = Curve::of(&rows, Some(lo)).at(c_gap)?;
            let b = Curve::of(&rows, Some(hi)).at(c_gap)?;
            let t = (d_m - lo) as f64 / (hi - lo) as f64;
            let p_log = (a.p_log.ln() + t * (b.p_log.ln() - a.p_log.ln())).exp();
            let p_acc = match (a.p_acc, b.p_acc) {
                (Some(x), Some(y)) => Some(x + t * (y - x)),
                _ => None,
            };
            Ok(GrowRates { p_log, p_acc })
        }
        _ => Err(Error::Data(format!("d_m={d_m} lies below every tabulated d_m for p={p}, d_cult={d_cult}"))),
    }
}

/// Black-box cultivation figures at one `(p, d_cult)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CultivationRow {
    pub p: f64,
    pub d_cult: u32,
    pub q_cult: Option<f64>,
    pub q_cult_succ: f64,
    pub t_cult: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CultivationTable {
    pub rows: Vec<CultivationRow>,
}

impl CultivationTable {
    pub fn from_reader<R: Read>(r: R) -> Result<Self> {
        let mut rows = Vec::new();
        for rec in reader(r).deserialize() {
            let row: CultivationRow = rec?;
            if !(row.q_cult_succ > 0.0 && row.q_cult_succ <= 1.0) || row.t_cult == 0 {
                return Err(Error::Data(format!("cultivation row out of range: {row:?}")));
            }
            rows.push(row);
        }
        Ok(CultivationTable { rows })
    }

    pub fn bundled() -> Result<Self> {
        Self::from_reader(data::read("cultivation.csv")?.as_bytes())
    }

    pub fn lookup(&self, p: f64, d_cult: u32) -> Result<CultivationRow> {
        self.rows
            .iter()
            .find(|r| same_p(r.p, p) && r.d_cult == d_cult)
            .copied()
            .ok_or_else(|| Error::Data(format!("no cultivation data for p={p}, d_cult={d_cult}")))
    }

    /// Default cultivation duration in time steps for `d_cult` (any p).
    pub fn t_cult(&self, d_cult: u32) -> Result<u32> {
        self.rows
            .iter()
            .find(|r| r.d_cult == d_cult)
            .map(|r| r.t_cult)
            .ok_or_else(|| Error::Data(format!("no cultivation duration for d_cult={d_cult}")))
    }
}
