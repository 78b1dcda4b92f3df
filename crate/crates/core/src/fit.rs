//! Least-squares fitting of the failure-rate ansatz and leave-one-out model selection.
//!
//! Fits are done on log10 rates. The base law is
//! `alpha * x^(beta*d + eta)` with `x = p/p_th`; candidates differ in the
//! correction `1 + epsilon * x^g(d)`.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::AnsatzParams;
use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub p: f64,
    /// Code distance, or duration T for stability experiments.
    pub d: f64,
    pub failures: u64,
    pub shots: u64,
}

impl Sample {
    pub fn rate(&self) -> f64 {
        self.failures as f64 / self.shots as f64
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub rows: Vec<Sample>,
}

pub const MIN_ROWS: usize = 10;
pub const MIN_DISTINCT_D: usize = 3;

impl SampleSet {
    /// Reads `p,d,failures,shots` CSV; lines starting with `#` are comments.
    pub fn from_reader<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(r);
        let mut rows = Vec::new();
        for rec in rd.deserialize() {
            rows.push(rec?);
        }
        let s = SampleSet { rows };
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        Self::from_reader(f)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Data(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn validate(&self) -> Result<()> {
        for r in &self.rows {
            if !(r.p > 0.0 && r.p < 1.0) || !(r.d >= 1.0) || r.shots == 0 || r.failures > r.shots {
                return Err(Error::Data(format!("invalid sample row {r:?}")));
            }
        }
        Ok(())
    }

    /// Rows with at least one failure (the others have no finite log rate).
    fn usable(&self) -> Vec<Sample> {
        self.rows.iter().copied().filter(|r| r.failures > 0).collect()
    }

    /// Synthetic samples drawn from `params`, with multiplicative log-normal noise of
    /// relative size `noise` (0 for exact rates). `shots` is set large enough that
    /// rounding to integer counts is negligible.
    pub fn synthetic<R: Rng>(params: &AnsatzParams, ps: &[f64], ds: &[f64], noise: f64, rng: &mut R) -> Self {
        const SHOTS: u64 = 1_000_000_000_000_000_000;
        let mut rows = Vec::new();
        for &d in ds {
            for &p in ps {
                let f = model_value(params, p, d);
                let z: f64 = if noise > 0.0 { rng.sample(StandardNormal) } else { 0.0 };
                let rate = (f * (noise * z).exp()).min(1.0);
                rows.push(Sample { p, d, failures: (rate * SHOTS as f64).round() as u64, shots: SHOTS });
            }
        }
        SampleSet { rows }
    }
}

fn model_value(a: &AnsatzParams, p: f64, d: f64) -> f64 {
    let x = p / a.p_th;
    a.alpha * x.powf(a.beta * d + a.eta) * (1.0 + a.epsilon * x.powf(a.zeta * d.powf(a.lambda)))
}

/// Candidate forms of the correction exponent `g(d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorrectionModel {
    /// No correction term (`epsilon = 0`).
    None,
    /// `g = zeta`
    Constant,
    /// `g = zeta d`
    Linear,
    /// `g = zeta0 + zeta1 d`
    Affine,
    /// `g = zeta0 + zeta1 d + zeta2 d^2`
    Quadratic,
    /// `g = d^lambda`
    Power,
    /// `g = zeta d^lambda`
    ScaledPower,
    /// `g = zeta0 + zeta1 d^lambda`
    AffinePower,
}

impl CorrectionModel {
    pub const ALL: [CorrectionModel; 8] = [
        CorrectionModel::None,
        CorrectionModel::Constant,
        CorrectionModel::Linear,
        CorrectionModel::Affine,
        CorrectionModel::Quadratic,
        CorrectionModel::Power,
        CorrectionModel::ScaledPower,
        CorrectionModel::AffinePower,
    ];

    pub fn id(self) -> &'static str {
        match self {
            CorrectionModel::None => "none",
            CorrectionModel::Constant => "zeta",
            CorrectionModel::Linear => "zeta-d",
            CorrectionModel::Affine => "affine",
            CorrectionModel::Quadratic => "quadratic",
            CorrectionModel::Power => "d-pow",
            CorrectionModel::ScaledPower => "zeta-d-pow",
            CorrectionModel::AffinePower => "affine-pow",
        }
    }

    /// Parameters of `g` (epsilon not included).
    fn g_len(self) -> usize {
        match self {
            CorrectionModel::None => 0,
            CorrectionModel::Constant | CorrectionModel::Linear | CorrectionModel::Power => 1,
            CorrectionModel::Affine | CorrectionModel::ScaledPower => 2,
            CorrectionModel::Quadratic | CorrectionModel::AffinePower => 3,
        }
    }

    /// Total number of fitted parameters.
    pub fn n_params(self) -> usize {
        if self == CorrectionModel::None {
            4
        } else {
            5 + self.g_len()
        }
    }

    pub fn param_names(self) -> Vec<&'static str> {
        let mut v = vec!["p_th", "alpha", "beta", "eta"];
        if self != CorrectionModel::None {
            v.push("epsilon");
        }
        v.extend_from_slice(match self {
            CorrectionModel::None => &[],
            CorrectionModel::Constant | CorrectionModel::Linear => &["zeta"],
            CorrectionModel::Power => &["lambda"],
            CorrectionModel::Affine => &["zeta0", "zeta1"],
            CorrectionModel::ScaledPower => &["zeta", "lambda"],
            CorrectionModel::Quadratic => &["zeta0", "zeta1", "zeta2"],
            CorrectionModel::AffinePower => &["zeta0", "zeta1", "lambda"],
        });
        v
    }

    /// Internal coordinates: p_th, alpha, beta and a lone zeta are stored as
    /// logs. Multi-coefficient forms only need `g(d) > 0`, so theirs stay raw.
    fn log_scaled(self, i: usize) -> bool {
        match i {
            0..=2 => true,
            5 => matches!(self, CorrectionModel::Constant | CorrectionModel::Linear | CorrectionModel::ScaledPower),
            _ => false,
        }
    }

    fn g(self, q: &[f64], d: f64) -> f64 {
        match self {
            CorrectionModel::None => 0.0,
            CorrectionModel::Constant => q[0],
            CorrectionModel::Linear => q[0] * d,
            CorrectionModel::Affine => q[0] + q[1] * d,
            CorrectionModel::Quadratic => q[0] + q[1] * d + q[2] * d * d,
            CorrectionModel::Power => d.powf(q[0]),
            CorrectionModel::ScaledPower => q[0] * d.powf(q[1]),
            CorrectionModel::AffinePower => q[0] + q[1] * d.powf(q[2]),
        }
    }

    /// log10 of the model at natural parameters `v`; NaN where the model is undefined.
    fn log10_value(self, v: &[f64], p: f64, d: f64) -> f64 {
        let lx = (p / v[0]).ln();
        let mut ln = v[1].ln() + (v[2] * d + v[3]) * lx;
        if self != CorrectionModel::None {
            let g = self.g(&v[5..], d);
            if !(g > 0.0) {
                return f64::NAN;
            }
            let c = 1.0 + v[4] * (g * lx).exp();
            if !(c > 0.0) {
                return f64::NAN;
            }
            ln += c.ln();
        }
        ln / std::f64::consts::LN_10
    }

    /// Starting points for the correction parameters (epsilon first).
    fn starts(self) -> Vec<Vec<f64>> {
        let eps = [1.0, 10.0, 100.0];
        let g: Vec<Vec<f64>> = match self {
            CorrectionModel::None => return vec![vec![]],
            CorrectionModel::Constant => vec![vec![0.5], vec![2.0], vec![5.0]],
            CorrectionModel::Linear => vec![vec![0.2], vec![0.5], vec![1.0]],
            CorrectionModel::Affine => vec![vec![0.5, 0.2], vec![1.0, 0.5]],
            CorrectionModel::Quadratic => vec![vec![0.5, 0.2, 0.0], vec![1.0, 0.5, 0.0]],
            CorrectionModel::Power => vec![vec![0.5], vec![1.0]],
            CorrectionModel::ScaledPower => vec![vec![0.5, 0.5], vec![0.5, 1.0], vec![1.0, 0.5], vec![1.0, 1.0]],
            CorrectionModel::AffinePower => vec![vec![0.2, 0.5, 0.5], vec![0.2, 0.5, 1.0], vec![0.5, 1.0, 0.5]],
        };
        eps.iter()
            .flat_map(|&e| g.iter().map(move |q| std::iter::once(e).chain(q.iter().copied()).collect()))
            .collect()
    }
}

impl fmt::Display for CorrectionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CorrectionModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CorrectionModel::ALL
            .into_iter()
            .find(|m| m.id() == s.trim())
            .ok_or_else(|| Error::Domain(format!("unknown correction model {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: CorrectionModel,
    /// Natural parameter values in [`CorrectionModel::param_names`] order.
    pub values: Vec<f64>,
    /// Root mean square of the log10 residuals.
    pub rms_log10: f64,
    pub iterations: usize,
}

impl FitResult {
    /// The fit as ansatz parameters, when `g` has the `zeta d^lambda` shape.
    pub fn ansatz(&self) -> Option<AnsatzParams> {
        let v = &self.values;
        let (epsilon, zeta, lambda) = match self.model {
            CorrectionModel::None => (0.0, 1.0, 1.0),
            CorrectionModel::Constant => (v[4], v[5], 0.0),
            CorrectionModel::Linear => (v[4], v[5], 1.0),
            CorrectionModel::Power => (v[4], 1.0, v[5]),
            CorrectionModel::ScaledPower => (v[4], v[5], v[6]),
            _ => return None,
        };
        Some(AnsatzParams { p_th: v[0], alpha: v[1], beta: v[2], eta: v[3], epsilon, zeta, lambda })
    }

    pub fn predict_log10(&self, p: f64, d: f64) -> f64 {
        self.model.log10_value(&self.values, p, d)
    }
}

fn to_internal(m: CorrectionModel, v: &[f64]) -> Vec<f64> {
    v.iter().enumerate().map(|(i, &x)| if m.log_scaled(i) { x.ln() } else { x }).collect()
}

fn to_natural(m: CorrectionModel, t: &[f64]) -> Vec<f64> {
    t.iter().enumerate().map(|(i, &x)| if m.log_scaled(i) { x.exp() } else { x }).collect()
}

struct Problem<'a> {
    model: CorrectionModel,
    rows: &'a [Sample],
    target: Vec<f64>,
}

impl<'a> Problem<'a> {
    fn new(model: CorrectionModel, rows: &'a [Sample]) -> Self {
        Problem { model, rows, target: rows.iter().map(|r| r.rate().log10()).collect() }
    }

    fn residuals(&self, t: &[f64]) -> Option<DVector<f64>> {
        let v = to_natural(self.model, t);
        let r = DVector::from_iterator(
            self.rows.len(),
            self.rows.iter().zip(&self.target).map(|(s, y)| self.model.log10_value(&v, s.p, s.d) - y),
        );
        r.iter().all(|x| x.is_finite()).then_some(r)
    }

    fn jacobian(&self, t: &[f64], r0: &DVector<f64>) -> Option<DMatrix<f64>> {
        let n = t.len();
        let mut j = DMatrix::zeros(r0.len(), n);
        let mut tt = t.to_vec();
        for k in 0..n {
            let h = 1e-7 * t[k].abs().max(1.0);
            tt[k] = t[k] + h;
            let r1 = match self.residuals(&tt) {
                Some(r) => r,
                None => {
                    tt[k] = t[k] - h;
                    -(self.residuals(&tt)? - r0) + r0
                }
            };
            tt[k] = t[k];
            j.set_column(k, &((r1 - r0) / h));
        }
        Some(j)
    }

    /// Levenberg-Marquardt. Returns (parameters, cost, iterations, converged).
    fn solve(&self, start: &[f64], max_iter: usize) -> (Vec<f64>, f64, usize, bool) {
        let mut t = start.to_vec();
        let mut r = match self.residuals(&t) {
            Some(r) => r,
            None => return (t, f64::INFINITY, 0, false),
        };
        let mut cost = r.norm_squared();
        let mut mu = 1e-3;
        for it in 1..=max_iter {
            if cost < 1e-28 {
                return (t, cost, it, true);
            }
            let j = match self.jacobian(&t, &r) {
                Some(j) => j,
                None => return (t, cost, it, false),
            };
            let jtj = j.transpose() * &j;
            let g = j.transpose() * &r;
            if g.amax() < 1e-14 {
                return (t, cost, it, true);
            }
            let mut improved = false;
            while mu < 1e16 {
                let mut a = jtj.clone();
                for k in 0..a.nrows() {
                    a[(k, k)] += mu * jtj[(k, k)].max(1e-12);
                }
                let step = match a.lu().solve(&(-&g)) {
                    Some(s) => s,
                    None => {
                        mu *= 10.0;
                        continue;
                    }
                };
                let cand: Vec<f64> = t.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
                if let Some(rc) = self.residuals(&cand) {
                    let c = rc.norm_squared();
                    if c < cost {
                        let rel = (cost - c) / cost.max(1e-300);
                        let small_step = step.amax() < 1e-12 * (1.0 + t.iter().fold(0.0f64, |m, x| m.max(x.abs())));
                        t = cand;
                        r = rc;
                        cost = c;
                        mu = (mu / 3.0).max(1e-12);
                        improved = true;
                        if rel < 1e-15 || small_step {
                            return (t, cost, it, true);
                        }
                        break;
                    }
                }
                mu *= 4.0;
            }
            if !improved {
                // no descent direction left: a (possibly flat) minimum
                return (t, cost, it, true);
            }
        }
        (t, cost, max_iter, false)
    }
}

const MAX_ITER: usize = 2000;

fn check_design(rows: &[Sample]) -> Result<()> {
    let ds: BTreeSet<u64> = rows.iter().map(|r| r.d.to_bits()).collect();
    if rows.len() < MIN_ROWS || ds.len() < MIN_DISTINCT_D {
        return domain(format!(
            "fit needs at least {MIN_ROWS} rows with failures over {MIN_DISTINCT_D} distinct d (got {} rows, {} d)",
            rows.len(),
            ds.len()
        ));
    }
    Ok(())
}

/// Closed-form log-linear fit of the correction-free law, giving (p_th, alpha, beta, eta).
fn prefit(rows: &[Sample]) -> Option<[f64; 4]> {
    // ln f = a0 + a1 d + a2 ln p + a3 d ln p
    let x = DMatrix::from_fn(rows.len(), 4, |i, k| {
        let (d, lp) = (rows[i].d, rows[i].p.ln());
        [1.0, d, lp, d * lp][k]
    });
    let y = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.rate().ln()));
    let a = (x.transpose() * &x).lu().solve(&(x.transpose() * y))?;
    let (beta, eta) = (a[3], a[2]);
    if !(beta > 0.0) {
        return None;
    }
    let l = -a[1] / beta;
    let alpha = (a[0] + eta * l).exp();
    let p_th = l.exp();
    (alpha.is_finite() && p_th.is_finite() && p_th > 0.0).then_some([p_th, alpha, beta, eta])
}

fn fit_from(model: CorrectionModel, rows: &[Sample], starts: &[Vec<f64>]) -> Result<FitResult> {
    let prob = Problem::new(model, rows);
    let mut best: Option<(Vec<f64>, f64, usize, bool)> = None;
    for s in starts {
        let out = prob.solve(&to_internal(model, s), MAX_ITER);
        if best.as_ref().is_none_or(|b| out.1 < b.1) {
            best = Some(out);
        }
    }
    let (t, cost, iterations, converged) = best.expect("at least one start");
    let values = to_natural(model, &t);
    let rms_log10 = (cost / rows.len() as f64).sqrt();
    if !cost.is_finite() {
        return Err(Error::Numeric(format!("{model} fit never reached a finite residual")));
    }
    if !converged {
        let best = match model {
            CorrectionModel::ScaledPower | CorrectionModel::None => {
                FitResult { model, values: values.clone(), rms_log10, iterations }.ansatz()
            }
            _ => None,
        };
        return Err(Error::Fit {
            iterations,
            residual: rms_log10,
            best: Box::new(best.unwrap_or(AnsatzParams::from_array([f64::NAN; 7]))),
        });
    }
    Ok(FitResult { model, values, rms_log10, iterations })
}

/// Fits one candidate on all usable rows, starting from a log-linear pre-fit and
/// a small grid of correction parameters.
pub fn fit_model(data: &SampleSet, model: CorrectionModel) -> Result<FitResult> {
    data.validate()?;
    let rows = data.usable();
    check_design(&rows)?;
    let base = prefit(&rows).ok_or_else(|| Error::Numeric("log-linear pre-fit failed".into()))?;
    let starts: Vec<Vec<f64>> = model.starts().into_iter().map(|q| base.iter().copied().chain(q).collect()).collect();
    fit_from(model, &rows, &starts)
}

/// Fits the `zeta d^lambda` ansatz. Returns the parameters and the log10 RMS residual.
pub fn fit_ansatz(data: &SampleSet) -> Result<(AnsatzParams, f64)> {
    let r = fit_model(data, CorrectionModel::ScaledPower)?;
    Ok((r.ansatz().expect("scaled power maps to ansatz params"), r.rms_log10))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoocvScore {
    pub model: CorrectionModel,
    /// RMSD of held-out log10 predictions; `None` when disqualified.
    pub score: Option<f64>,
    pub failed_folds: usize,
    pub folds: usize,
}

/// Scores this close (relative) count as equal; the smaller model then ranks first.
pub const TIE_RTOL: f64 = 1e-6;

/// Leave-one-out scores, best first; disqualified candidates (more than 10%
/// failed folds) come last.
pub fn loocv_select(data: &SampleSet, candidates: &[CorrectionModel]) -> Result<Vec<LoocvScore>> {
    data.validate()?;
    let rows = data.usable();
    check_design(&rows)?;
    let mut out = Vec::new();
    for &model in candidates {
        let full = match fit_model(data, model) {
            Ok(f) => f,
            Err(_) => {
                out.push(LoocvScore { model, score: None, failed_folds: rows.len(), folds: rows.len() });
                continue;
            }
        };
        let warm = vec![full.values.clone()];
        let errs: Vec<Option<f64>> = (0..rows.len())
            .into_par_iter()
            .map(|k| {
                let train: Vec<Sample> =
                    rows.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, r)| *r).collect();
                let f = fit_from(model, &train, &warm).ok()?;
                let e = f.predict_log10(rows[k].p, rows[k].d) - rows[k].rate().log10();
                e.is_finite().then_some(e * e)
            })
            .collect();
        let failed = errs.iter().filter(|e| e.is_none()).count();
        let ok: Vec<f64> = errs.into_iter().flatten().collect();
        let score = (failed * 10 <= rows.len() && !ok.is_empty()).then(|| (ok.iter().sum::<f64>() / ok.len() as f64).sqrt());
        out.push(LoocvScore { model, score, failed_folds: failed, folds: rows.len() });
    }
    out.sort_by(|a, b| match (a.score, b.score) {
        (Some(x), Some(y)) if (x - y).abs() <= TIE_RTOL * x.max(y) => {
            a.model.n_params().cmp(&b.model.n_params()).then(x.total_cmp(&y))
        }
        (Some(x), Some(y)) => x.total_cmp(&y),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.model.cmp(&b.model),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{builtin_params, Setting};
    use rand::SeedableRng;

    fn grid(params: &AnsatzParams) -> (Vec<f64>, Vec<f64>) {
        let ps = (0..8).map(|i| params.p_th * 0.1 * 8f64.powf(i as f64 / 7.0)).collect();
        (ps, vec![3.0, 5.0, 7.0, 9.0, 11.0, 13.0])
    }

    #[test]
    fn roundtrip_noiseless() {
        let truth = builtin_params(Setting::TriangularMemory);
        let (ps, ds) = grid(&truth);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let data = SampleSet::synthetic(&truth, &ps, &ds, 0.0, &mut rng);
        let (fit, rms) = fit_ansatz(&data).unwrap();
        assert!(rms < 1e-6, "rms {rms}");
        for (a, b) in fit.as_array().iter().zip(truth.as_array()) {
            assert!(((a - b) / b).abs() < 0.01, "{fit:?} vs {truth:?}");
        }
    }

    #[test]
    fn single_distance_rejected() {
        let truth = builtin_params(Setting::TriangularMemory);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let ps: Vec<f64> = (1..=12).map(|i| i as f64 * 1e-4).collect();
        let data = SampleSet::synthetic(&truth, &ps, &[7.0], 0.0, &mut rng);
        assert!(matches!(fit_ansatz(&data), Err(Error::Domain(_))));
    }

    #[test]
    fn csv_roundtrip() {
        let text = "# comment\np,d,failures,shots\n1e-3,3,10,1000\n2e-3,5,20,1000\n";
        let s = SampleSet::from_reader(text.as_bytes()).unwrap();
        assert_eq!(s.rows.len(), 2);
        let back = SampleSet::from_reader(s.to_csv().unwrap().as_bytes()).unwrap();
        assert_eq!(back, s);
        assert!(SampleSet::from_reader("p,d,failures,shots\n1e-3,3,10,5\n".as_bytes()).is_err());
    }
}
