//! Cost, infidelity and fault-tolerance models for 15-to-1 magic state
//! distillation on 2D color codes, fed either by faulty T measurements or by
//! cultivated magic states.
//!
//! ```
//! use msdforge::circuit::{default_stage_schedule, Distances};
//! use msdforge::scheme::SchemeParams;
//! use msdforge::costs::{space_cost, time_cost};
//!
//! let s = SchemeParams::single(Distances::new(19, 8, 12, 7), 1e-3, 0.1);
//! assert_eq!(space_cost(&s).unwrap(), 2265);
//! assert_eq!(time_cost(&s, None).unwrap(), 512.0);
//! assert!(msdforge::circuit::verify_pairing(&default_stage_schedule(), s.d).unwrap().is_empty());
//! ```

pub mod ansatz;
pub mod channels;
pub mod circuit;
pub mod cli;
pub mod costs;
pub mod cycle;
pub mod data;
pub mod engine;
pub mod error;
pub mod fit;
pub mod grow;
pub mod layout;
pub mod schedules;
pub mod scheme;
pub mod surgery;

pub use error::{Error, Result};
