//! Fixed input/output examples: published values and hand-derived cases.

mod common;

use approx::assert_relative_eq;
use common::{combined_rows, rel, single_rows, TABLE};
use msdforge::ansatz::{
    adjust_threshold, builtin_params, eval_ansatz, split_rates, stability_rate, AnsatzSet, PatchSize, Setting,
};
use msdforge::circuit::{
    correlated_error_harmful, count_undetectable_triples, default_rotation_set, default_stage_schedule,
    verify_pairing, x_error_rotations, ConditionItem, Distances, QubitId, StageSchedule, ZMask,
};
use msdforge::costs::{space_cost, time_cost};
use msdforge::cycle::{simulate, t_m, CycleConfig};
use msdforge::engine::{
    analytic_single, evaluate_scheme, evolve_and_project, pareto_front, py_ratio_sweep, sweep_single, AnalyticInputs,
    SweepConstraints, SweepGrid, Tables,
};
use msdforge::fit::{fit_ansatz, fit_model, loocv_select, CorrectionModel, SampleSet};
use msdforge::grow::{growing_rates, GrowRateTable};
use msdforge::layout::verify_layout;
use msdforge::scheme::{derive_dims, SchemeParams};
use msdforge::surgery::{plan_surgery_str, DomainWall, WallCase};
use rand::SeedableRng;

fn m(s: &str) -> ZMask {
    s.parse().unwrap()
}

#[test]
fn rotation_set_shape() {
    let r = default_rotation_set().rotations;
    assert_eq!(r.len(), 15);
    assert_eq!(r[0], m("A"));
    assert!(r.contains(&m("OABCD")));
    assert_eq!(r.iter().filter(|x| x.weight() == 1).count(), 4);
    let distinct: std::collections::BTreeSet<_> = r.iter().collect();
    assert_eq!(distinct.len(), 15);
}

#[test]
fn default_pairing() {
    let s = default_stage_schedule();
    assert_eq!(s.stages[0], (m("A"), m("C")));
    assert!(s.stages.iter().any(|&(p, _)| p == m("OCD")));
    for r in single_rows() {
        assert!(verify_pairing(&s, r.distances()).unwrap().is_empty());
    }
    let v = verify_pairing(&s, Distances::new(19, 8, 12, 5)).unwrap();
    assert!(v.iter().any(|x| x.item == ConditionItem::Distances));
}

#[test]
fn forbidden_pair_needs_small_d_z() {
    let mut st = default_stage_schedule().stages;
    let i = st.iter().position(|&(p, q)| p == m("OAC") || q == m("OAC")).unwrap();
    let j = st.iter().position(|&(p, q)| p == m("OBC") || q == m("OBC")).unwrap();
    // put OAC and OBC into one stage by swapping partners
    let (oac, other_i) = if st[i].0 == m("OAC") { (st[i].0, st[i].1) } else { (st[i].1, st[i].0) };
    let (obc, other_j) = if st[j].0 == m("OBC") { (st[j].0, st[j].1) } else { (st[j].1, st[j].0) };
    if i != j {
        st[i] = (oac, obc);
        st[j] = (other_i, other_j);
    }
    let sched = StageSchedule::new(st).unwrap();
    let small = Distances::new(41, 8, 30, 13);
    assert!(verify_pairing(&sched, small).unwrap().iter().any(|v| v.item == ConditionItem::ForbiddenPair));
    assert!(!verify_layout(&sched, small).unwrap().is_empty());
    let fine = Distances::new(41, 8, 26, 13);
    assert!(!verify_pairing(&sched, fine).unwrap().iter().any(|v| v.item == ConditionItem::ForbiddenPair));
}

#[test]
fn x_error_locations() {
    let c = default_rotation_set();
    assert_eq!(x_error_rotations(&c, QubitId::A, 1).unwrap(), vec![m("A")]);
    assert!(x_error_rotations(&c, QubitId::Out, 4).unwrap().is_empty());
    assert_eq!(x_error_rotations(&c, QubitId::B, 15).unwrap().len(), 8);
    for q in QubitId::VALIDATION {
        for n in 1..=15 {
            assert!(!correlated_error_harmful(&x_error_rotations(&c, q, n).unwrap()), "{q:?} {n}");
        }
    }
    let r = &c.rotations;
    let harmful = (0..15).any(|i| (i + 1..15).any(|j| (j + 1..15).any(|k| correlated_error_harmful(&[r[i], r[j], r[k]]))));
    assert!(harmful);
    for a in r {
        assert!(!correlated_error_harmful(&[*a]));
        for b in r {
            if a != b {
                assert!(!correlated_error_harmful(&[*a, *b]));
            }
        }
    }
    assert_eq!(count_undetectable_triples(&c).unwrap(), 35);
}

#[test]
fn ansatz_values() {
    let tri = builtin_params(Setting::TriangularMemory);
    assert_relative_eq!(eval_ansatz(&tri, tri.p_th, 7.0).unwrap(), tri.alpha * (1.0 + tri.epsilon), max_relative = 1e-12);
    assert_relative_eq!(eval_ansatz(&tri, 1e-3, 7.0).unwrap(), 3.3e-4, max_relative = 0.05);
    assert_eq!(tri.p_th, 2.41e-3);
    let st = builtin_params(Setting::Stability);
    assert_eq!((st.p_th, st.lambda), (6.24e-3, 0.389));
    assert_eq!(builtin_params(Setting::RectangularZFail).beta, 0.439);
}

#[test]
fn split_examples() {
    let set = AnsatzSet::builtin().unwrap();
    let total = msdforge::ansatz::failure_rate(&set, Setting::TriangularMemory, 1e-3, PatchSize::Square(7.0)).unwrap();
    let r0 = split_rates(&set, Setting::TriangularMemory, 1e-3, PatchSize::Square(7.0), 0.0).unwrap();
    assert_eq!(r0.py, 0.0);
    assert_relative_eq!(r0.px, total / 2.0);
    let size = PatchSize::Rect { d_x: 8.0, d_z: 12.0 };
    let rz = split_rates(&set, Setting::RectangularZFail, 1e-3, size, 0.1).unwrap();
    let fz = msdforge::ansatz::failure_rate(&set, Setting::RectangularZFail, 1e-3, size).unwrap();
    assert_relative_eq!(rz.px, fz / 2.2, max_relative = 1e-12);
    assert_relative_eq!(rz.px1x2, 0.1 * rz.px, max_relative = 1e-12);
}

#[test]
fn stability_area_scaling() {
    let st = builtin_params(Setting::Stability);
    let sq = stability_rate(1e-3, 13.0, 13.0, 13.0).unwrap();
    assert_relative_eq!(sq, 169.0 * eval_ansatz(&st, 1e-3, 13.0).unwrap(), max_relative = 1e-12);
    assert_relative_eq!(stability_rate(1e-3, 26.0, 13.0, 13.0).unwrap(), 2.0 * sq, max_relative = 1e-12);
    assert_relative_eq!(stability_rate(1e-3, 30.0, 18.0, 13.0).unwrap(), 540.0 * eval_ansatz(&st, 1e-3, 13.0).unwrap(), max_relative = 1e-12);
}

#[test]
fn threshold_improvement() {
    let tri = builtin_params(Setting::TriangularMemory);
    assert_eq!(adjust_threshold(&tri, 0.0).unwrap(), tri);
    assert_eq!(adjust_threshold(&tri, 1.0).unwrap().p_th, 0.01);
    assert_relative_eq!(adjust_threshold(&tri, 0.4).unwrap().p_th, 0.0054, max_relative = 0.01);
    assert!(adjust_threshold(&tri, 1.5).is_err());
}

#[test]
fn grow_table_anchors() {
    let t = GrowRateTable::bundled().unwrap();
    let best = (0..=137).map(|i| growing_rates(&t, 1e-3, 3, 13, i as f64 / 10.0).unwrap().p_log).fold(f64::MAX, f64::min);
    assert_relative_eq!(best, 5.0e-6, max_relative = 1e-9);
    assert!(growing_rates(&t, 1e-3, 3, 13, 13.69).unwrap().p_log.is_finite());
    assert!(growing_rates(&t, 1e-3, 3, 13, 13.71).is_err());
    assert_eq!(growing_rates(&t, 1e-3, 3, 13, 0.0).unwrap().p_acc, Some(1.0));
}

#[test]
fn derived_dimensions() {
    let s = SchemeParams::single(Distances::new(19, 8, 12, 7), 1e-3, 0.1);
    let d = derive_dims(&s).unwrap();
    assert_eq!((d.d_h, d.d_v), (24, 12));
    let c = SchemeParams::combined(Distances::new(39, 22, 26, 13), 3, 4, 7.6, 1e-3, 0.1);
    let d = derive_dims(&c).unwrap();
    assert_eq!((d.n_m_side, d.d_h, d.d_v), (Some(2), 80, 28));
    let tie = SchemeParams::single(Distances::new(23, 8, 12, 11), 1e-3, 0.1);
    assert_eq!(derive_dims(&tie).unwrap().d_h, 24);
}

#[test]
fn table_costs() {
    for r in TABLE.iter() {
        let s = r.params();
        let space = space_cost(&s).unwrap() as f64;
        let time = time_cost(&s, None).unwrap();
        if r.cult.is_none() {
            assert_eq!((space, time), (r.space, r.time), "{:?}", r.d);
        } else {
            assert!(rel(space, r.space) <= 0.01 && rel(time, r.time) <= 0.01, "{:?}: {space} {time}", r.d);
        }
    }
    let c = combined_rows().find(|r| r.d == (39, 22, 26, 13)).unwrap();
    assert_eq!(space_cost(&c.params()).unwrap(), 15043);
}

#[test]
fn single_level_table_rows() {
    let set = AnsatzSet::builtin().unwrap();
    let tables = Tables::bundled().unwrap();
    for r in single_rows() {
        let rep = evaluate_scheme(&r.params(), &default_stage_schedule(), &set, &tables).unwrap();
        assert!(rel(rep.q_dist_exact, r.q_dist) <= 0.10, "{}: {:e}", rep.scheme, rep.q_dist_exact);
        assert!(rel(1.0 - rep.q_succ, r.fail) <= 0.10, "{}: {:e}", rep.scheme, 1.0 - rep.q_succ);
        let eff = rep.space as f64 * rep.time / rep.q_succ;
        assert_relative_eq!(rep.effective_spacetime, eff);
    }
}

#[test]
fn combined_row_factor_two() {
    let set = AnsatzSet::builtin().unwrap();
    let tables = Tables::bundled().unwrap();
    let r = combined_rows().find(|r| r.d == (39, 22, 26, 13)).unwrap();
    let rep = evaluate_scheme(&r.params(), &default_stage_schedule(), &set, &tables).unwrap();
    assert!((rep.q_dist_exact / r.q_dist).max(r.q_dist / rep.q_dist_exact) <= 2.0, "{:e}", rep.q_dist_exact);
}

#[test]
fn projection_limits() {
    assert_eq!(evolve_and_project(&[]).unwrap(), (1.0, 0.0));
    let a = AnalyticInputs::default();
    assert_eq!(analytic_single(&a, 0.0, 0.1), (0.0, 1.0));
    let (q, _) = analytic_single(&a, 1e-3, 0.1);
    assert_relative_eq!(q, 35.0 * (7e-3f64 / 3.0).powi(3), max_relative = 1e-12);
}

#[test]
fn small_p_limit() {
    let set = AnsatzSet::builtin().unwrap();
    let s = SchemeParams::single(Distances::new(19, 8, 12, 7), 1e-7, 0.1);
    let rep = evaluate_scheme(&s, &default_stage_schedule(), &set, &Tables::default()).unwrap();
    assert!(rep.q_dist_exact < 1e-15);
    assert!(1.0 - rep.q_succ < 1e-4);
}

#[test]
fn y_ratio_sweep_is_pure() {
    let set = AnsatzSet::builtin().unwrap();
    let tables = Tables::default();
    let s = SchemeParams::single(Distances::new(11, 8, 6, 5), 5e-4, 0.1);
    let fwd = py_ratio_sweep(&s, &default_stage_schedule(), &set, &tables, &[0.0, 0.5, 1.0]).unwrap();
    let rev = py_ratio_sweep(&s, &default_stage_schedule(), &set, &tables, &[1.0, 0.5, 0.0]).unwrap();
    assert_eq!(fwd.iter().rev().copied().collect::<Vec<_>>(), rev);
    assert_eq!(py_ratio_sweep(&s, &default_stage_schedule(), &set, &tables, &[0.3]).unwrap().len(), 1);
    for r in single_rows() {
        let v = py_ratio_sweep(&r.params(), &default_stage_schedule(), &set, &tables, &[0.0, 1.0]).unwrap();
        let (a, b) = (v[0].1, v[1].1);
        assert!(a.max(b) / a.min(b) <= 1.6, "{:?}", r.d);
    }
}

#[test]
fn sweep_frontier() {
    let set = AnsatzSet::builtin().unwrap();
    let sched = default_stage_schedule();
    let one = SweepGrid { d_out: vec![19], d_x: vec![8], d_z: vec![12], d_m: vec![7] };
    let (all, front) = sweep_single(&one, 1e-3, 0.1, &sched, &set, SweepConstraints::default()).unwrap();
    assert_eq!((all.len(), front), (1, vec![0]));

    let grid = SweepGrid { d_out: vec![15, 17, 19, 21], d_x: vec![6, 8], d_z: vec![10, 12], d_m: vec![5, 7, 9] };
    let (all, front) = sweep_single(&grid, 1e-3, 0.1, &sched, &set, SweepConstraints::default()).unwrap();
    let i = all.iter().position(|r| r.d == Distances::new(19, 8, 12, 7)).unwrap();
    // on the frontier, or beaten by at most 10% on both axes
    let near = front.contains(&i)
        || front.iter().all(|&j| {
            all[j].q_dist_exact >= 0.9 * all[i].q_dist_exact || all[j].effective_spacetime >= 0.9 * all[i].effective_spacetime
        });
    assert!(near);
    assert_eq!(pareto_front(&all), front);
    let empty = SweepGrid { d_out: vec![3], d_x: vec![2], d_z: vec![2], d_m: vec![1] };
    let err = sweep_single(&empty, 1e-3, 0.1, &sched, &set, SweepConstraints::default()).unwrap_err();
    assert!(err.to_string().contains("no admissible points"));
}

#[test]
fn surgery_examples() {
    let plan = plan_surgery_str("XYIZXIXZ", "YYIXZZIY").unwrap();
    assert_eq!(plan.walls[2].case, WallCase::Uninvolved);
    let flips: Vec<usize> = plan.walls.iter().enumerate().filter(|(_, w)| w.case == WallCase::Anticommuting).map(|(i, _)| i).collect();
    for (i, w) in plan.colors.iter().enumerate() {
        let prev = (i + plan.colors.len() - 1) % plan.colors.len();
        assert_eq!(*w != plan.colors[prev], flips.contains(&prev));
    }
    let idle = plan_surgery_str("III", "III").unwrap();
    assert!(idle.walls.iter().all(|w| matches!(w.wall, DomainWall::Opaque { .. })));
}

#[test]
fn cycle_spacing_and_oracles() {
    let mut c = CycleConfig::new(4, 36, 13, 3, 0.65, 0.9);
    assert_eq!(t_m(&c), 2);
    c.n_m = 5;
    assert_eq!(t_m(&c), 1);
    let exact = CycleConfig::new(4, 32, 13, 3, 0.65, 0.9);
    assert_eq!(t_m(&exact), 1);

    let tables = Tables::bundled().unwrap();
    let (mut c, _) = CycleConfig::from_tables(1e-3, 3, 4, 13, 7.60, &tables).unwrap();
    c.n_stages = 5000;
    let st = simulate(&c).unwrap();
    assert!(rel(st.t_intv_mean, 21.7) <= 0.10, "{}", st.t_intv_mean);
    assert!((st.t_idle_mean - 1.4).abs() <= 0.5, "{}", st.t_idle_mean);
}

#[test]
fn cycle_acceptance_retry_scaling() {
    // one patch per group, no merge bottleneck: interval grows like 1 / p_acc
    let base = |acc: f64| {
        let mut c = CycleConfig::new(1, 36, 5, 3, 1.0, acc);
        c.n_stages = 4000;
        c.seed = 3;
        simulate(&c).unwrap().t_intv_mean
    };
    let (a, b) = (base(0.1), base(0.05));
    assert!((b / a - 2.0).abs() < 0.25, "{a} {b}");
}

#[test]
fn fit_examples() {
    let tri = builtin_params(Setting::TriangularMemory);
    let ps: Vec<f64> = (0..8).map(|i| tri.p_th * 0.1 * 8f64.powf(i as f64 / 7.0)).collect();
    let ds = [3.0, 5.0, 7.0, 9.0, 11.0, 13.0];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let clean = SampleSet::synthetic(&tri, &ps, &ds, 0.0, &mut rng);
    let (fit, _) = fit_ansatz(&clean).unwrap();
    for (a, b) in fit.as_array().iter().zip(tri.as_array()) {
        assert!(rel(*a, b) < 0.01);
    }

    let single = SampleSet::synthetic(&tri, &ps, &[7.0], 0.0, &mut rng);
    assert!(fit_ansatz(&single).is_err());

    let flat = msdforge::ansatz::AnsatzParams { epsilon: 0.0, ..tri };
    let data = SampleSet::synthetic(&flat, &ps, &ds, 0.0, &mut rng);
    let f = fit_model(&data, CorrectionModel::ScaledPower).unwrap();
    assert!(f.values[4].abs() < 1e-3 || f.rms_log10 < 1e-6, "eps {}", f.values[4]);

    let one = loocv_select(&clean, &[CorrectionModel::Linear]).unwrap();
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].model, CorrectionModel::Linear);
    assert!(one[0].score.is_some());
}
