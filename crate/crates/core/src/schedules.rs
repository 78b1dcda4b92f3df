//! Entangling-gate schedules for syndrome extraction on the rectangular patches.
//!
//! A schedule is 12 time indices `[a,b,c,d,e,f; g,h,i,j,k,l]`: the first six
//! for the X-type part and the last six for the Z-type part, one per hexagon corner.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GateSchedule(pub [u32; 12]);

impl GateSchedule {
    pub fn new(v: [u32; 12]) -> Result<Self> {
        let s = GateSchedule(v);
        if v.contains(&0) {
            return domain("schedule entries must be positive");
        }
        let max = s.length();
        let used: BTreeSet<u32> = v.iter().copied().collect();
        if used.len() as u32 != max {
            return domain(format!("schedule {s} skips a time step between 1 and {max}"));
        }
        Ok(s)
    }

    pub fn length(&self) -> u32 {
        *self.0.iter().max().unwrap()
    }

    fn map(&self, idx: [usize; 12]) -> GateSchedule {
        GateSchedule(idx.map(|i| self.0[i]))
    }

    /// `[c,d,e,f,a,b; i,j,k,l,g,h]`
    pub fn rotate_120(&self) -> GateSchedule {
        self.map([2, 3, 4, 5, 0, 1, 8, 9, 10, 11, 6, 7])
    }

    /// `[d,e,f,a,b,c; j,k,l,g,h,i]`
    pub fn rotate_180(&self) -> GateSchedule {
        self.map([3, 4, 5, 0, 1, 2, 9, 10, 11, 6, 7, 8])
    }

    /// Swap the X- and Z-type halves.
    pub fn exchange_xz(&self) -> GateSchedule {
        self.map([6, 7, 8, 9, 10, 11, 0, 1, 2, 3, 4, 5])
    }
}

impl fmt::Display for GateSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |s: &[u32]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{};{}", part(&self.0[..6]), part(&self.0[6..]))
    }
}

impl FromStr for GateSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let halves: Vec<&str> = s.trim().trim_matches(|c| c == '[' || c == ']').split(';').collect();
        if halves.len() != 2 {
            return domain(format!("schedule {s:?} must have two halves separated by ';'"));
        }
        let mut v = Vec::with_capacity(12);
        for h in halves {
            for t in h.split(',') {
                v.push(t.trim().parse::<u32>().map_err(|e| Error::Domain(format!("bad schedule entry {t:?}: {e}")))?);
            }
        }
        let arr: [u32; 12] = v.try_into().map_err(|_| Error::Domain(format!("schedule {s:?} needs 12 entries")))?;
        GateSchedule::new(arr)
    }
}

impl Serialize for GateSchedule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GateSchedule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Index tuples whose entries must be pairwise distinct.
const DISTINCT: [&[usize]; 4] = [&[0, 1, 2, 3, 4, 5], &[6, 7, 8, 9, 10, 11], &[0, 2, 4, 6, 8, 10], &[1, 3, 5, 7, 9, 11]];

// a..l = 0..11; each entry is a product of differences (x - y).
const PRODUCTS: [&[(usize, usize)]; 13] = [
    &[(0, 6), (1, 7), (2, 8), (3, 9), (4, 10), (5, 11)],
    &[(0, 6), (1, 7), (5, 11), (4, 10)],
    &[(0, 6), (1, 7), (2, 8), (5, 11)],
    &[(0, 6), (1, 7), (2, 8), (3, 9)],
    &[(2, 8), (3, 9), (4, 10), (5, 11)],
    &[(0, 6), (3, 9), (4, 10), (5, 11)],
    &[(1, 7), (2, 8), (3, 9), (4, 10)],
    &[(0, 10), (1, 9)],
    &[(1, 11), (2, 10)],
    &[(2, 6), (3, 11)],
    &[(3, 7), (4, 6)],
    &[(4, 8), (5, 7)],
    &[(5, 9), (0, 8)],
];

const AUXILIARY: [&[(usize, usize)]; 6] = [
    &[(0, 4), (1, 3)],
    &[(1, 5), (2, 4)],
    &[(2, 0), (3, 5)],
    &[(6, 10), (7, 9)],
    &[(7, 11), (8, 10)],
    &[(8, 6), (9, 11)],
];

const NAMES: &[u8; 12] = b"abcdefghijkl";

fn product(v: &[u32; 12], terms: &[(usize, usize)]) -> i64 {
    terms.iter().map(|&(x, y)| v[x] as i64 - v[y] as i64).product()
}

fn describe(terms: &[(usize, usize)]) -> String {
    terms.iter().map(|&(x, y)| format!("({}-{})", NAMES[x] as char, NAMES[y] as char)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleReport {
    pub schedule: GateSchedule,
    /// Distinctness tuples with a repeated entry.
    pub repeated: Vec<String>,
    /// Required products that are not positive.
    pub nonpositive: Vec<String>,
    /// Auxiliary mixed-wall products that are not positive (informational).
    pub auxiliary_nonpositive: Vec<String>,
}

impl ScheduleReport {
    pub fn is_valid(&self) -> bool {
        self.repeated.is_empty() && self.nonpositive.is_empty()
    }
}

pub fn validate_schedule(s: &GateSchedule) -> ScheduleReport {
    let v = &s.0;
    let repeated = DISTINCT
        .iter()
        .filter(|t| t.iter().collect::<BTreeSet<_>>().len() != t.iter().map(|&i| v[i]).collect::<BTreeSet<_>>().len())
        .map(|t| format!("({}) not distinct", t.iter().map(|&i| NAMES[i] as char).collect::<String>()))
        .collect();
    let nonpositive = PRODUCTS.iter().filter(|t| product(v, t) <= 0).map(|t| describe(t)).collect();
    let auxiliary_nonpositive = AUXILIARY.iter().filter(|t| product(v, t) <= 0).map(|t| describe(t)).collect();
    ScheduleReport { schedule: *s, repeated, nonpositive, auxiliary_nonpositive }
}

pub const MAX_ENUMERATION_LENGTH: u32 = 9;

/// Every valid schedule whose largest entry is `length` and which uses every step up to it.
pub fn enumerate_valid(length: u32) -> Result<Vec<GateSchedule>> {
    if length > MAX_ENUMERATION_LENGTH {
        return domain(format!("enumeration is limited to length <= {MAX_ENUMERATION_LENGTH}"));
    }
    let mut out = Vec::new();
    let mut v = [0u32; 12];
    fill(0, length, &mut v, &mut out);
    out.sort();
    Ok(out)
}

fn fill(pos: usize, length: u32, v: &mut [u32; 12], out: &mut Vec<GateSchedule>) {
    if pos == 12 {
        let s = GateSchedule(*v);
        let used: BTreeSet<u32> = v.iter().copied().collect();
        if used.len() as u32 == length && validate_schedule(&s).is_valid() {
            out.push(s);
        }
        return;
    }
    'next: for x in 1..=length {
        for t in DISTINCT {
            if t.contains(&pos) && t.iter().any(|&j| j < pos && v[j] == x) {
                continue 'next;
            }
        }
        // the X and Z gates on one corner qubit cannot coincide
        if pos >= 6 && v[pos - 6] == x {
            continue;
        }
        v[pos] = x;
        let closes = |t: &[(usize, usize)]| t.iter().map(|&(a, b)| a.max(b)).max() == Some(pos);
        if PRODUCTS.iter().any(|t| closes(t) && product(v, t) <= 0) {
            continue;
        }
        let used: BTreeSet<u32> = v[..=pos].iter().copied().collect();
        if (length as usize - used.len()) > 11 - pos {
            continue;
        }
        fill(pos + 1, length, v, out);
    }
    v[pos] = 0;
}

/// Closure under 120° rotation, 180° rotation and X/Z exchange.
pub fn symmetry_orbit(s: &GateSchedule) -> Result<BTreeSet<GateSchedule>> {
    if !validate_schedule(s).is_valid() {
        return domain(format!("schedule {s} is not valid"));
    }
    Ok(closure(s, &[GateSchedule::rotate_120, GateSchedule::rotate_180, GateSchedule::exchange_xz]))
}

/// Closure under the patch symmetries only (180° rotation and X/Z exchange).
pub fn patch_orbit(s: &GateSchedule) -> BTreeSet<GateSchedule> {
    closure(s, &[GateSchedule::rotate_180, GateSchedule::exchange_xz])
}

fn closure(s: &GateSchedule, maps: &[fn(&GateSchedule) -> GateSchedule]) -> BTreeSet<GateSchedule> {
    let mut seen = BTreeSet::from([*s]);
    let mut todo = vec![*s];
    while let Some(x) = todo.pop() {
        for m in maps {
            let y = m(&x);
            if seen.insert(y) {
                todo.push(y);
            }
        }
    }
    seen
}

/// One representative (the smallest) per patch-symmetry orbit.
pub fn representatives(list: &[GateSchedule]) -> Vec<GateSchedule> {
    let reps: BTreeSet<GateSchedule> = list.iter().map(|s| *patch_orbit(s).iter().next().unwrap()).collect();
    reps.into_iter().collect()
}

/// The schedule used for the rectangular patches.
pub fn selected_schedule() -> GateSchedule {
    GateSchedule([3, 6, 5, 4, 1, 2, 4, 7, 6, 5, 2, 3])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let s: GateSchedule = "3,6,5,4,1,2;4,7,6,5,2,3".parse().unwrap();
        assert_eq!(s, selected_schedule());
        assert_eq!(s.to_string().parse::<GateSchedule>().unwrap(), s);
        assert!("1,2,3;4".parse::<GateSchedule>().is_err());
        assert!("1,2,3,4,5,6;1,2,3,4,5,8".parse::<GateSchedule>().is_err());
    }

    #[test]
    fn validity() {
        assert!(validate_schedule(&selected_schedule()).is_valid());
        let same = GateSchedule([1, 2, 3, 4, 5, 6, 1, 2, 3, 4, 5, 6]);
        let r = validate_schedule(&same);
        assert!(!r.nonpositive.is_empty());
    }

    #[test]
    fn involutions() {
        let s = selected_schedule();
        assert_eq!(s.rotate_180().rotate_180(), s);
        assert_eq!(s.exchange_xz().exchange_xz(), s);
        assert_eq!(s.rotate_120().rotate_120().rotate_120(), s);
    }
}
