//! Boundary colors and domain walls for a simultaneous two-Pauli measurement.

use msdforge::surgery::plan_surgery_str;

fn main() -> msdforge::Result<()> {
    let (p, q) = ("XYIZXIXZ", "YYIXZZIY");
    let plan = plan_surgery_str(p, q)?;
    println!("P = {p}\nQ = {q}");
    for (i, w) in plan.walls.iter().enumerate() {
        println!("patch {i}: left boundary {:?}, {:?}", plan.colors[i], w.case);
        println!("  {}", serde_json::to_string(&w.wall)?);
    }
    match plan_surgery_str("XI", "ZI") {
        Ok(_) => println!("unexpected plan"),
        Err(e) => println!("XI / ZI: {e}"),
    }
    Ok(())
}
