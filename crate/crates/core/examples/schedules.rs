//! Enumerates valid syndrome-extraction gate schedules by length.

use msdforge::schedules::{enumerate_valid, representatives, selected_schedule, validate_schedule};

fn main() -> msdforge::Result<()> {
    for len in 6..=8 {
        let all = enumerate_valid(len)?;
        println!("length {len}: {} schedules, {} up to patch symmetry", all.len(), representatives(&all).len());
    }
    let s = selected_schedule();
    let r = validate_schedule(&s);
    println!("selected {s}: valid = {}", r.is_valid());
    Ok(())
}
