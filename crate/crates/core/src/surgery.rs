//! Macroscopic planning of a lattice-surgery merge measuring two commuting
//! Pauli products on N triangular patches around one ancillary region.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn commutes(self, o: Pauli) -> bool {
        self == Pauli::I || o == Pauli::I || self == o
    }

    fn label(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn charge(self) -> char {
        self.label().to_ascii_lowercase()
    }

    pub fn parse_product(s: &str) -> Result<Vec<Pauli>> {
        s.trim().chars().filter(|c| !c.is_whitespace()).map(|c| c.to_string().parse()).collect()
    }
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" => Ok(Pauli::I),
            "X" => Ok(Pauli::X),
            "Y" => Ok(Pauli::Y),
            "Z" => Ok(Pauli::Z),
            _ => domain(format!("bad Pauli label {s:?}")),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Color of a boundary between neighbouring triangular patches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryColor {
    #[serde(rename = "g")]
    Green,
    #[serde(rename = "b")]
    Blue,
}

impl BoundaryColor {
    fn flip(self) -> Self {
        match self {
            BoundaryColor::Green => BoundaryColor::Blue,
            BoundaryColor::Blue => BoundaryColor::Green,
        }
    }

    fn letter(self) -> char {
        match self {
            BoundaryColor::Green => 'g',
            BoundaryColor::Blue => 'b',
        }
    }
}

/// Boson label such as `rx` or `gy`.
pub type Charge = String;

fn charge(color: char, pauli: char) -> Charge {
    format!("{color}{pauli}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WallCase {
    /// `[P_i, Q_i] != 0`
    Anticommuting,
    /// `P_i = Q_i != I`
    Equal,
    /// `P_i != Q_i = I`
    POnly,
    /// `Q_i != P_i = I`
    QOnly,
    /// `P_i = Q_i = I`
    Uninvolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum DomainWall {
    /// Every charge crossing from the patch is relabelled; pairs are (patch side, ancilla side).
    Transparent { permutation: Vec<(Charge, Charge)> },
    SemiTransparent { patch_side: Charge, ancilla_side: Charge, em_exchanging: bool },
    /// Patch is not merged.
    Opaque { patch_side: Vec<Charge>, ancilla_side: Vec<Charge> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchWall {
    pub case: WallCase,
    pub wall: DomainWall,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryPlan {
    /// `colors[i]` is the boundary between patch `i-1` and patch `i` (cyclic, patch 0 first).
    pub colors: Vec<BoundaryColor>,
    pub walls: Vec<PatchWall>,
}

/// Boundary colors and domain walls for measuring `P = ⊗ P_i` and `Q = ⊗ Q_i`.
pub fn plan_surgery(paulis: &[(Pauli, Pauli)]) -> Result<SurgeryPlan> {
    if paulis.is_empty() {
        return domain("plan_surgery needs at least one patch");
    }
    let flips = paulis.iter().filter(|(p, q)| !p.commutes(*q)).count();
    if flips % 2 == 1 {
        return domain(format!("P and Q anticommute ({flips} anticommuting sites)"));
    }
    let n = paulis.len();
    let mut colors = Vec::with_capacity(n);
    let mut c = BoundaryColor::Green;
    for &(p, q) in paulis {
        colors.push(c);
        if !p.commutes(q) {
            c = c.flip();
        }
    }
    debug_assert_eq!(c, colors[0]);

    let walls = paulis
        .iter()
        .enumerate()
        .map(|(i, &(p, q))| {
            let (ci, cn) = (colors[i].letter(), colors[(i + 1) % n].letter());
            if !p.commutes(q) {
                let (pc, qc) = (p.charge(), q.charge());
                let mut permutation = Vec::with_capacity(9);
                for col in ['r', 'g', 'b'] {
                    for w in ['x', 'y', 'z'] {
                        let col2 = match col {
                            'g' => ci,
                            'b' => cn,
                            _ => 'r',
                        };
                        let w2 = if w == pc {
                            'x'
                        } else if w == qc {
                            'z'
                        } else {
                            'y'
                        };
                        permutation.push((charge(col, w), charge(col2, w2)));
                    }
                }
                return PatchWall { case: WallCase::Anticommuting, wall: DomainWall::Transparent { permutation } };
            }
            let semi = |case, label: Pauli, anc: char| PatchWall {
                case,
                wall: DomainWall::SemiTransparent {
                    patch_side: charge('r', label.charge()),
                    ancilla_side: charge(ci, anc),
                    em_exchanging: true,
                },
            };
            match (p, q) {
                (Pauli::I, Pauli::I) => PatchWall {
                    case: WallCase::Uninvolved,
                    wall: DomainWall::Opaque {
                        patch_side: ["rx", "ry", "rz"].map(String::from).to_vec(),
                        ancilla_side: ['x', 'y', 'z'].iter().map(|&w| charge(ci, w)).collect(),
                    },
                },
                (p, Pauli::I) => semi(WallCase::POnly, p, 'z'),
                (Pauli::I, q) => semi(WallCase::QOnly, q, 'x'),
                (p, _) => semi(WallCase::Equal, p, 'y'),
            }
        })
        .collect();
    Ok(SurgeryPlan { colors, walls })
}

/// Same as [`plan_surgery`] with both products given as strings such as `"XYIZ"`.
pub fn plan_surgery_str(p: &str, q: &str) -> Result<SurgeryPlan> {
    let (p, q) = (Pauli::parse_product(p)?, Pauli::parse_product(q)?);
    if p.len() != q.len() {
        return domain(format!("P has {} factors but Q has {}", p.len(), q.len()));
    }
    plan_surgery(&p.into_iter().zip(q).collect::<Vec<_>>())
}
