//! The 15-to-1 rotation set, its eight-stage pairing and the detectability
//! checks for rotation errors and logical-X memory errors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Logical qubits of the distillation block. `Alpha` and `Beta` are the
/// surgery ancillas; they never appear in a rotation basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QubitId {
    Out,
    A,
    B,
    C,
    D,
    Alpha,
    Beta,
}

impl QubitId {
    pub const DISTILLATION: [QubitId; 5] = [QubitId::Out, QubitId::A, QubitId::B, QubitId::C, QubitId::D];
    pub const VALIDATION: [QubitId; 4] = [QubitId::A, QubitId::B, QubitId::C, QubitId::D];

    /// Bit of this qubit inside a [`ZMask`], or `None` for the ancillas.
    pub fn bit(self) -> Option<u8> {
        match self {
            QubitId::Out => Some(1),
            QubitId::A => Some(2),
            QubitId::B => Some(4),
            QubitId::C => Some(8),
            QubitId::D => Some(16),
            QubitId::Alpha | QubitId::Beta => None,
        }
    }

    pub fn label(self) -> char {
        match self {
            QubitId::Out => 'O',
            QubitId::A => 'A',
            QubitId::B => 'B',
            QubitId::C => 'C',
            QubitId::D => 'D',
            QubitId::Alpha => 'a',
            QubitId::Beta => 'b',
        }
    }
}

/// A product of logical Z operators over {Out, A, B, C, D}, stored as a bitset
/// (bit 0 = Out, bits 1..4 = A..D).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZMask(pub u8);

impl ZMask {
    pub const I: ZMask = ZMask(0);
    pub const OUT: ZMask = ZMask(1);
    pub const AB: ZMask = ZMask(2 | 4);
    pub const CD: ZMask = ZMask(8 | 16);
    pub const FULL: ZMask = ZMask(31);

    pub fn of(q: QubitId) -> ZMask {
        ZMask(q.bit().expect("ancillas carry no Z mask"))
    }

    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, q: QubitId) -> bool {
        q.bit().is_some_and(|b| self.0 & b != 0)
    }

    pub fn and(self, other: ZMask) -> ZMask {
        ZMask(self.0 & other.0)
    }

    pub fn xor(self, other: ZMask) -> ZMask {
        ZMask(self.0 ^ other.0)
    }

    /// Parity of the overlap with a computational basis index (0 = +1 eigenvalue).
    pub fn parity(self, basis: usize) -> u32 {
        (self.0 as usize & basis).count_ones() & 1
    }
}

impl fmt::Display for ZMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        for q in QubitId::DISTILLATION {
            if self.contains(q) {
                write!(f, "{}", q.label())?;
            }
        }
        Ok(())
    }
}

impl FromStr for ZMask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "I" {
            return Ok(ZMask::I);
        }
        let mut m = 0u8;
        for c in s.chars() {
            let bit = match c.to_ascii_uppercase() {
                'O' => 1,
                'A' => 2,
                'B' => 4,
                'C' => 8,
                'D' => 16,
                _ => return domain(format!("bad qubit label {c:?} in mask {s:?}")),
            };
            if m & bit != 0 {
                return domain(format!("repeated qubit in mask {s:?}"));
            }
            m |= bit;
        }
        if m == 0 {
            return domain("empty mask");
        }
        Ok(ZMask(m))
    }
}

impl Serialize for ZMask {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ZMask {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn m(s: &str) -> ZMask {
    s.parse().expect("static mask")
}

/// The 15 rotation bases, indexed 1..=15 by position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationConfig {
    pub rotations: Vec<ZMask>,
}

impl RotationConfig {
    /// Checks the odd-weight composition of the 15-to-1 code.
    pub fn validate(&self) -> Result<()> {
        if self.rotations.len() != 15 {
            return domain(format!("expected 15 rotations, got {}", self.rotations.len()));
        }
        let mut seen = [false; 32];
        for r in &self.rotations {
            if seen[r.0 as usize] {
                return domain(format!("duplicate rotation {r}"));
            }
            seen[r.0 as usize] = true;
            let w = r.weight();
            if w % 2 == 0 {
                return domain(format!("rotation {r} has even weight"));
            }
            if w == 1 && r.contains(QubitId::Out) {
                return domain("a bare Z_out rotation is not part of the code");
            }
        }
        let singles = self.rotations.iter().filter(|r| r.weight() == 1).count();
        let triples_v = self.rotations.iter().filter(|r| r.weight() == 3 && !r.contains(QubitId::Out)).count();
        let pairs_o = self.rotations.iter().filter(|r| r.weight() == 3 && r.contains(QubitId::Out)).count();
        let full = self.rotations.iter().filter(|r| r.weight() == 5).count();
        if (singles, triples_v, pairs_o, full) != (4, 4, 6, 1) {
            return domain("rotation set is not the 15-to-1 set");
        }
        Ok(())
    }
}

pub fn default_rotation_set() -> RotationConfig {
    let labels = [
        "A", "C", "B", "D", "ABC", "ACD", "ABD", "BCD", "OCD", "OAB", "OAC", "OBD", "OAD", "OBC", "OABCD",
    ];
    RotationConfig { rotations: labels.iter().map(|s| m(s)).collect() }
}

/// Eight stages of simultaneously executed rotation pairs `(P, Q)`.
/// Serializes as a list of eight label pairs, identity as "I".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(ZMask, ZMask)>", into = "Vec<(ZMask, ZMask)>")]
pub struct StageSchedule {
    pub stages: Vec<(ZMask, ZMask)>,
}

impl StageSchedule {
    pub fn new(stages: Vec<(ZMask, ZMask)>) -> Result<Self> {
        let s = StageSchedule { stages };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.stages.len() != 8 {
            return domain(format!("expected 8 stages, got {}", self.stages.len()));
        }
        let ids = self.stages.iter().flat_map(|&(p, q)| [p, q]).filter(|m| m.is_identity()).count();
        if ids != 1 {
            return domain(format!("schedule must contain exactly one identity placeholder, found {ids}"));
        }
        self.rotation_config().validate()?;
        if self.stages[0] != (m("A"), m("C")) || self.stages[1] != (m("B"), m("D")) {
            return domain("stages 1 and 2 must be (A, C) and (B, D)");
        }
        for (k, &(p, q)) in self.stages.iter().enumerate().take(4) {
            if p.contains(QubitId::Out) || q.contains(QubitId::Out) {
                return domain(format!("stage {} touches the output qubit", k + 1));
            }
        }
        Ok(())
    }

    /// Rotation order implied by the schedule (P then Q per stage, placeholder dropped).
    pub fn rotation_config(&self) -> RotationConfig {
        RotationConfig {
            rotations: self.stages.iter().flat_map(|&(p, q)| [p, q]).filter(|m| !m.is_identity()).collect(),
        }
    }

    pub fn to_labels(&self) -> Vec<(String, String)> {
        self.stages.iter().map(|(p, q)| (p.to_string(), q.to_string())).collect()
    }

    pub fn from_labels(pairs: &[(String, String)]) -> Result<Self> {
        let stages = pairs
            .iter()
            .map(|(p, q)| Ok((p.parse()?, q.parse()?)))
            .collect::<Result<Vec<_>>>()?;
        StageSchedule::new(stages)
    }
}

impl TryFrom<Vec<(ZMask, ZMask)>> for StageSchedule {
    type Error = crate::error::Error;
    fn try_from(v: Vec<(ZMask, ZMask)>) -> Result<Self> {
        StageSchedule::new(v)
    }
}

impl From<StageSchedule> for Vec<(ZMask, ZMask)> {
    fn from(s: StageSchedule) -> Self {
        s.stages
    }
}

pub fn default_stage_schedule() -> StageSchedule {
    let r = default_rotation_set().rotations;
    let mut stages: Vec<(ZMask, ZMask)> = r.chunks(2).filter(|c| c.len() == 2).map(|c| (c[0], c[1])).collect();
    stages.push((r[14], ZMask::I));
    StageSchedule { stages }
}

/// Rotations among indices `1..=n` whose support contains `q`: the correlated
/// ±π/4 rotation errors produced by a logical X error on `q` right after rotation `n`.
pub fn x_error_rotations(config: &RotationConfig, q: QubitId, n: usize) -> Result<Vec<ZMask>> {
    if q.bit().is_none() {
        return domain("x_error_rotations is defined for Out and A-D only");
    }
    if n == 0 || n > config.rotations.len() {
        return domain(format!("rotation index {n} out of range"));
    }
    Ok(config.rotations[..n].iter().copied().filter(|r| r.contains(q)).collect())
}

/// True iff some nonempty subset multiplies to Z_out alone (odd on Out, even on A-D).
pub fn correlated_error_harmful(masks: &[ZMask]) -> bool {
    let n = masks.len();
    assert!(n < 26, "subset enumeration is exponential");
    (1u32..(1 << n)).any(|s| {
        let acc = (0..n).filter(|i| s >> i & 1 == 1).fold(ZMask::I, |a, i| a.xor(masks[i]));
        acc == ZMask::OUT
    })
}

/// Number of rotation triples whose product is Z_out (undetected output flips).
pub fn count_undetectable_triples(config: &RotationConfig) -> Result<usize> {
    config.validate()?;
    let r = &config.rotations;
    let mut count = 0;
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            for k in j + 1..r.len() {
                if r[i].xor(r[j]).xor(r[k]) == ZMask::OUT {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionItem {
    /// d_out - d_Z <= d_m < 2 d_Z
    Distances,
    /// Z_OCD measured as some P
    OcdAsP,
    /// forbidden pairs when d_Z > 2 d_m + 2
    ForbiddenPair,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingViolation {
    pub item: ConditionItem,
    pub stage: Option<usize>,
    pub detail: String,
}

/// Distance tuple of a distillation block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Distances {
    pub d_out: u32,
    pub d_x: u32,
    pub d_z: u32,
    pub d_m: u32,
}

impl Distances {
    pub fn new(d_out: u32, d_x: u32, d_z: u32, d_m: u32) -> Self {
        Distances { d_out, d_x, d_z, d_m }
    }

    pub fn check_parity(&self) -> Result<()> {
        let Distances { d_out, d_x, d_z, d_m } = *self;
        if d_out == 0 || d_x == 0 || d_z == 0 || d_m == 0 {
            return domain("distances must be positive");
        }
        if d_out % 2 == 0 || d_m % 2 == 0 {
            return domain(format!("d_out ({d_out}) and d_m ({d_m}) must be odd"));
        }
        if d_x % 2 == 1 || d_z % 2 == 1 {
            return domain(format!("d_X ({d_x}) and d_Z ({d_z}) must be even"));
        }
        Ok(())
    }

    /// Condition (i) on the distances alone.
    pub fn distance_window_ok(&self) -> bool {
        self.d_out as i64 - self.d_z as i64 <= self.d_m as i64 && self.d_m < 2 * self.d_z
    }
}

impl FromStr for Distances {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<u32> = s
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Domain(format!("bad distance {t:?}: {e}"))))
            .collect::<Result<_>>()?;
        if v.len() != 4 {
            return domain("expected four distances d_out,d_X,d_Z,d_m");
        }
        Ok(Distances::new(v[0], v[1], v[2], v[3]))
    }
}

const FORBIDDEN_WHEN_THIN: [(&str, &str); 6] =
    [("OAC", "OBC"), ("OAD", "OBD"), ("OAC", "OAD"), ("OBC", "OBD"), ("OCD", "OABCD"), ("OAB", "OABCD")];

/// Checks the rotation-grouping condition; every violated item is reported.
pub fn verify_pairing(schedule: &StageSchedule, d: Distances) -> Result<Vec<PairingViolation>> {
    d.check_parity()?;
    schedule.validate()?;
    let mut out = Vec::new();
    if !d.distance_window_ok() {
        out.push(PairingViolation {
            item: ConditionItem::Distances,
            stage: None,
            detail: format!(
                "need d_out - d_Z <= d_m < 2 d_Z, got d_out={}, d_Z={}, d_m={}",
                d.d_out, d.d_z, d.d_m
            ),
        });
    }
    let ocd = m("OCD");
    if !schedule.stages.iter().any(|&(p, _)| p == ocd) {
        let stage = schedule.stages.iter().position(|&(_, q)| q == ocd).map(|k| k + 1);
        out.push(PairingViolation {
            item: ConditionItem::OcdAsP,
            stage,
            detail: "Z_OCD must be measured as the P operator of its stage".into(),
        });
    }
    if d.d_z > 2 * d.d_m + 2 {
        for (k, &(p, q)) in schedule.stages.iter().enumerate() {
            for (s, t) in FORBIDDEN_WHEN_THIN {
                let (s, t) = (m(s), m(t));
                if (p, q) == (s, t) || (p, q) == (t, s) {
                    out.push(PairingViolation {
                        item: ConditionItem::ForbiddenPair,
                        stage: Some(k + 1),
                        detail: format!("({p}, {q}) may not share a stage when d_Z > 2 d_m + 2"),
                    });
                }
            }
        }
    }
    Ok(out)
}
