//! Evaluates the single-level table rows and one cultivation row.

use msdforge::ansatz::AnsatzSet;
use msdforge::circuit::{default_stage_schedule, Distances};
use msdforge::engine::{evaluate_scheme, Tables};
use msdforge::scheme::SchemeParams;

fn main() -> msdforge::Result<()> {
    let set = AnsatzSet::builtin()?;
    let tables = Tables::bundled()?;
    let sched = default_stage_schedule();
    let rows = [((11, 8, 6, 5), 5e-4), ((19, 10, 12, 7), 5e-4), ((19, 8, 12, 7), 1e-3), ((25, 12, 16, 11), 1e-3)];
    for ((o, x, z, m), p) in rows {
        let s = SchemeParams::single(Distances::new(o, x, z, m), p, 0.1);
        let r = evaluate_scheme(&s, &sched, &set, &tables)?;
        println!(
            "{:<24} p={:.0e}  q_dist={:.3e} (closed form {:.3e})  1-q_succ={:.3e}  space={} time={} eff={:.3e}",
            r.scheme, p, r.q_dist_exact, r.q_dist_analytic, 1.0 - r.q_succ, r.space, r.time, r.effective_spacetime
        );
    }
    let mut c = SchemeParams::combined(Distances::new(39, 22, 26, 13), 3, 4, 7.60, 1e-3, 0.1);
    c.t_intv = Some(21.7);
    c.t_idle = Some(1.4);
    let r = evaluate_scheme(&c, &sched, &set, &tables)?;
    println!(
        "{:<24} p=1e-3  q_dist={:.3e} (closed form {:.3e})  1-q_succ={:.3e}  space={} time={:.0}",
        r.scheme, r.q_dist_exact, r.q_dist_analytic, 1.0 - r.q_succ, r.space, r.time
    );
    Ok(())
}
