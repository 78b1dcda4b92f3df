//! Space and time costs of a single-level and a cultivation-fed factory.

use msdforge::circuit::Distances;
use msdforge::costs::{space_cost, time_cost};
use msdforge::scheme::{derive_dims, SchemeParams};

fn main() -> msdforge::Result<()> {
    let sng = SchemeParams::single(Distances::new(19, 8, 12, 7), 1e-3, 0.1);
    let dims = derive_dims(&sng)?;
    println!("sng (19,8,12,7): footprint {}x{}, {} qubits, {} steps", dims.d_h, dims.d_v, space_cost(&sng)?, time_cost(&sng, None)?);

    let cmb = SchemeParams::combined(Distances::new(39, 22, 26, 13), 3, 4, 7.6, 1e-3, 0.1);
    for t_intv in [15.0, 21.7, 30.0] {
        println!("cmb (39,22,26,13) N_m=4: T_intv {t_intv:>4} -> {} qubits, {:.1} steps", space_cost(&cmb)?, time_cost(&cmb, Some(t_intv))?);
    }
    Ok(())
}
