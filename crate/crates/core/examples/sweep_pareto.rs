//! Sweeps single-level distance tuples and prints the infidelity/cost frontier.

use msdforge::ansatz::AnsatzSet;
use msdforge::circuit::default_stage_schedule;
use msdforge::engine::{sweep_single, SweepConstraints, SweepGrid};

fn main() -> msdforge::Result<()> {
    let grid = SweepGrid {
        d_out: (11..=27).step_by(2).collect(),
        d_x: vec![6, 8, 10],
        d_z: (6..=16).step_by(2).collect(),
        d_m: (5..=13).step_by(2).collect(),
    };
    let set = AnsatzSet::builtin()?;
    let (all, front) = sweep_single(&grid, 1e-3, 0.1, &default_stage_schedule(), &set, SweepConstraints::default())?;
    println!("{} admissible tuples, {} on the frontier", all.len(), front.len());
    for i in front {
        let r = &all[i];
        println!("{:<22} q_dist {:.2e}  effective spacetime {:.3e}", r.scheme, r.q_dist_exact, r.effective_spacetime);
    }
    Ok(())
}
