use std::path::PathBuf;
use std::process::{Command, Output};

use msdforge::cli::{CostReport, CycleReport, FitReport, InfidelityReport, LayoutReport, ScheduleList, SweepRow};
use msdforge::fit::SampleSet;
use rand::SeedableRng;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_msdforge"));
    c.env_remove("MSDFORGE_DATA_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json<T: serde::de::DeserializeOwned>(args: &[&str]) -> T {
    let mut a = args.to_vec();
    a.push("--json");
    let out = run(&a);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("msdforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn field(text: &str, key: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with(key)).unwrap_or_else(|| panic!("no {key} in {text}"));
    line[key.len()..].split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn cost_human_and_json_agree() {
    let r: CostReport = json(&["cost", "--d", "19,8,12,7"]);
    assert_eq!((r.space, r.time), (2265, 512.0));
    let out = run(&["cost", "--d", "19,8,12,7"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(field(&text, "space") as u64, r.space);
    assert_eq!(field(&text, "time"), r.time);
    assert_eq!(field(&text, "q_succ"), r.q_succ.unwrap());
}

#[test]
fn infidelity_json_roundtrip() {
    let r: InfidelityReport = json(&["infidelity", "--d", "19,8,12,7"]);
    assert!((r.report.q_dist_exact / 1.2369e-5 - 1.0).abs() < 1e-3);
    let again: InfidelityReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(again, r);
}

#[test]
fn combined_cost_with_interval() {
    let r: CostReport =
        json(&["cost", "--scheme", "cmb", "--d", "39,22,26,13", "--dcult", "3", "--nm", "4", "--tintv", "21.7"]);
    assert_eq!(r.space, 15043);
    assert!((r.time / 1391.0 - 1.0).abs() < 0.01);
}

#[test]
fn combined_infidelity_simulates_missing_intervals() {
    let r: InfidelityReport =
        json(&["infidelity", "--scheme", "cmb", "--d", "39,22,26,13", "--dcult", "3", "--nm", "4", "--cgap", "7.6"]);
    assert!(r.t_intv.unwrap() > 10.0 && r.t_idle.is_some());
    assert!(!r.notes.is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["cost", "--d", "3,2,2,1"]).status.code(), Some(2));
    assert_eq!(run(&["cost", "--d", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["fit", "--data", "/nonexistent/samples.csv"]).status.code(), Some(3));
    let err = run(&["cost", "--d", "3,2,2,1"]);
    assert!(String::from_utf8_lossy(&err.stderr).starts_with("msdforge:"));
}

#[test]
fn empty_sweep_is_reported() {
    let out = run(&["sweep", "--dout", "3", "--dx", "2", "--dz", "2", "--dm", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no admissible points"));
}

#[test]
fn sweep_csv_and_json() {
    let args = ["sweep", "--dout", "17:21:2", "--dx", "8", "--dz", "10,12", "--dm", "7", "--pareto"];
    let rows: Vec<SweepRow> = json(&args);
    assert!(!rows.is_empty() && rows.iter().all(|r| r.pareto));
    let out = run(&args);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "d_out,d_x,d_z,d_m,q_dist,q_succ,space,time,effective_spacetime,pareto"
    );
    assert_eq!(lines.count(), rows.len());
}

#[test]
fn layout_and_schedules() {
    let ok: LayoutReport = json(&["verify-layout", "--d", "19,8,12,7"]);
    assert!(ok.ok);
    let bad: LayoutReport = json(&["verify-layout", "--d", "19,8,12,5"]);
    assert!(!bad.ok && !bad.pairing.is_empty());

    let pairs = tmp("pairs.json");
    let sched = msdforge::circuit::default_stage_schedule();
    std::fs::write(&pairs, serde_json::to_string(&sched).unwrap()).unwrap();
    let custom: LayoutReport = json(&["verify-layout", "--d", "19,8,12,7", "--schedule", pairs.to_str().unwrap()]);
    assert_eq!(custom, ok);
    std::fs::write(&pairs, r#"[["A","C"]]"#).unwrap();
    assert_eq!(run(&["verify-layout", "--d", "19,8,12,7", "--schedule", pairs.to_str().unwrap()]).status.code(), Some(2));

    let list: ScheduleList = json(&["schedules", "--length", "7"]);
    assert_eq!(list.count, 24);
    assert_eq!(list.schedules.len(), 24);
    let out = run(&["schedules", "--length", "7", "--count"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "24");
}

#[test]
fn cycle_sim_is_seeded() {
    let args = ["cycle-sim", "--d", "39,22,26,13", "--dcult", "3", "--nm", "4", "--cgap", "7.6", "--stages", "500", "--seed", "9"];
    let a: CycleReport = json(&args);
    let b: CycleReport = json(&args);
    assert_eq!(a, b);
    assert_eq!(a.stats.stages, 500);
}

#[test]
fn fit_on_generated_samples() {
    let tri = msdforge::ansatz::builtin_params(msdforge::ansatz::Setting::TriangularMemory);
    let ps: Vec<f64> = (0..6).map(|i| tri.p_th * 0.1 * 8f64.powf(i as f64 / 5.0)).collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    let s = SampleSet::synthetic(&tri, &ps, &[3.0, 5.0, 7.0, 9.0, 11.0], 0.0, &mut rng);
    let path = tmp("samples.csv");
    std::fs::write(&path, s.to_csv().unwrap()).unwrap();
    let r: FitReport = json(&["fit", "--data", path.to_str().unwrap(), "--models", "zeta-d-pow,none", "--loocv"]);
    assert_eq!(r.fits.len(), 2);
    assert!(r.loocv.is_some());
    let full = &r.fits[0];
    assert!((full.values[0] / tri.p_th - 1.0).abs() < 0.01, "{:?}", full.values);
}

#[test]
fn data_dir_override() {
    let dir = tmp("data");
    std::fs::create_dir_all(&dir).unwrap();
    let src = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    for f in ["ansatz.json", "cultivation.csv", "grow_anchors.csv"] {
        std::fs::copy(format!("{src}/{f}"), dir.join(f)).unwrap();
    }
    let base: CostReport = json(&["cost", "--d", "19,8,12,7"]);
    let same = bin().env("MSDFORGE_DATA_DIR", &dir).args(["cost", "--d", "19,8,12,7", "--json"]).output().unwrap();
    assert_eq!(serde_json::from_slice::<CostReport>(&same.stdout).unwrap(), base);

    let text = std::fs::read_to_string(dir.join("ansatz.json")).unwrap().replace("\"p_th\": 2.41e-3", "\"p_th\": 3.0e-3");
    std::fs::write(dir.join("ansatz.json"), text).unwrap();
    let changed = bin().env("MSDFORGE_DATA_DIR", &dir).args(["cost", "--d", "19,8,12,7", "--json"]).output().unwrap();
    let c: CostReport = serde_json::from_slice(&changed.stdout).unwrap();
    assert!(c.q_succ.unwrap() > base.q_succ.unwrap());

    let empty = tmp("empty");
    std::fs::create_dir_all(&empty).unwrap();
    let out = bin().env("MSDFORGE_DATA_DIR", &empty).args(["cost", "--d", "19,8,12,7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}
