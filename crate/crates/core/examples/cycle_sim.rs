//! Monte Carlo of the cultivation cycle: stage interval and idle time versus N_m.

use msdforge::cycle::{simulate, CycleConfig};
use msdforge::engine::Tables;

fn main() -> msdforge::Result<()> {
    let tables = Tables::bundled()?;
    println!("n_m  T_m  T_intv         T_idle");
    for n_m in 2..=8 {
        let (mut c, note) = CycleConfig::from_tables(1e-3, 3, n_m, 13, 7.6, &tables)?;
        if let Some(n) = note {
            eprintln!("{n}");
        }
        c.n_stages = 5000;
        c.seed = 1;
        let s = simulate(&c)?;
        println!(
            "{n_m:>3}  {:>3}  {:>6.2} ± {:.2}  {:>5.2} ± {:.2}",
            s.t_m, s.t_intv_mean, s.t_intv_stderr, s.t_idle_mean, s.t_idle_stderr
        );
    }
    Ok(())
}
