//! Fits the threshold ansatz to noisy synthetic samples and ranks correction
//! models by leave-one-distance-out cross-validation. Writes the samples to
//! `samples.csv` in the temp directory for use with `msdforge fit`.

use msdforge::ansatz::{builtin_params, Setting};
use msdforge::fit::{fit_model, loocv_select, CorrectionModel, SampleSet};
use rand::SeedableRng;

fn main() -> msdforge::Result<()> {
    let truth = builtin_params(Setting::TriangularMemory);
    let ps: Vec<f64> = (0..8).map(|i| truth.p_th * 0.1 * 9f64.powf(i as f64 / 7.0)).collect();
    let ds = [3.0, 5.0, 7.0, 9.0, 11.0, 13.0];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let data = SampleSet::synthetic(&truth, &ps, &ds, 0.05, &mut rng);
    let path = std::env::temp_dir().join("samples.csv");
    std::fs::write(&path, data.to_csv()?)?;
    println!("wrote {}", path.display());

    let fit = fit_model(&data, CorrectionModel::ScaledPower)?;
    println!("truth {:?}", truth.as_array());
    println!("fit   {:?}  rms(log10) {:.3e}", fit.values, fit.rms_log10);

    for s in loocv_select(&data, &CorrectionModel::ALL)? {
        match s.score {
            Some(v) => println!("{:<12} {v:.4}", s.model.to_string()),
            None => println!("{:<12} disqualified ({} of {} folds failed)", s.model.to_string(), s.failed_folds, s.folds),
        }
    }
    Ok(())
}
