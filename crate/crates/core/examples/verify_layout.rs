//! Checks the default pairing against the distance condition and the full layout
//! enumeration, for one good and one bad distance tuple.

use msdforge::circuit::{default_stage_schedule, verify_pairing, Distances};
use msdforge::layout::verify_layout;

fn main() -> msdforge::Result<()> {
    let sched = default_stage_schedule();
    for (stage, (p, q)) in sched.stages.iter().enumerate() {
        println!("stage {}: {p} {q}", stage + 1);
    }
    for d in [Distances::new(19, 8, 12, 7), Distances::new(19, 8, 12, 5)] {
        let pairing = verify_pairing(&sched, d)?;
        let layout = verify_layout(&sched, d)?;
        println!("{d:?}: {} pairing violations, {} layout violations", pairing.len(), layout.len());
        for v in layout.iter().take(3) {
            println!("  stage {} patch {}: need {}, have {}", v.stage, v.patch_index, v.required, v.available);
        }
    }
    Ok(())
}
