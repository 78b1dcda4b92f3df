//! Distance checks for the pentagon-shaped ancillary region.
//!
//! The ancillary region touches five patches (Out, Alpha, AB, CD, Beta) along
//! edges `e0..e4`, with vertices between consecutive edges. A cyclic chain of
//! green string segments that is trivial overall must still be long enough on
//! every patch; each such chain yields one distance requirement.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::circuit::{Distances, StageSchedule, ZMask};
use crate::error::Result;

/// Bosons condensed by a boundary, as a bitset over gx (1), gy (2), gz (4).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BosonSet(pub u8);

impl BosonSet {
    pub const NONE: BosonSet = BosonSet(0);
    pub const GX: BosonSet = BosonSet(1);
    pub const GY: BosonSet = BosonSet(2);
    pub const GZ: BosonSet = BosonSet(4);
    pub const ALL: BosonSet = BosonSet(7);

    pub fn and(self, o: BosonSet) -> BosonSet {
        BosonSet(self.0 & o.0)
    }

    pub fn or(self, o: BosonSet) -> BosonSet {
        BosonSet(self.0 | o.0)
    }

    pub fn is_subset(self, o: BosonSet) -> bool {
        self.0 & !o.0 == 0
    }
}

impl fmt::Display for BosonSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> =
            [(1, "gx"), (2, "gy"), (4, "gz")].iter().filter(|(b, _)| self.0 & b != 0).map(|(_, n)| *n).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// Bosons condensed along the edge of a patch given the restrictions of P and Q to it.
pub fn condensed_set(p_i: ZMask, q_i: ZMask) -> BosonSet {
    match (p_i.is_identity(), q_i.is_identity()) {
        (true, true) => BosonSet::ALL,
        (true, false) => BosonSet::GX,
        (false, true) => BosonSet::GZ,
        (false, false) if p_i == q_i => BosonSet::GY,
        _ => BosonSet::NONE,
    }
}

/// A vertex or edge of the pentagon, stored as its clockwise position:
/// `v40 = 0, e0 = 1, v01 = 2, e1 = 3, ..., v34 = 8, e4 = 9`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PentagonObject(pub u8);

impl PentagonObject {
    pub fn edge(i: u8) -> Self {
        PentagonObject((2 * i + 1) % 10)
    }

    /// Vertex between edges `i` and `i + 1`.
    pub fn vertex(i: u8) -> Self {
        PentagonObject((2 * i + 2) % 10)
    }

    pub fn is_edge(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn index(self) -> u8 {
        if self.is_edge() {
            self.0 / 2
        } else {
            (self.0 / 2 + 4) % 5
        }
    }
}

impl fmt::Display for PentagonObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_edge() {
            write!(f, "e{}", self.0 / 2)
        } else {
            let i = self.index();
            write!(f, "v{}{}", i, (i + 1) % 5)
        }
    }
}

impl Serialize for PentagonObject {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PentagonObject {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        (0..10u8)
            .map(PentagonObject)
            .find(|o| o.to_string() == s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown pentagon object {s:?}")))
    }
}

/// Edge condensed sets of one stage; vertices condense everything.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CondensedSets {
    pub edges: [BosonSet; 5],
}

impl CondensedSets {
    /// Sets for the merge measuring `(P, Q)`. Alpha always condenses gz and Beta gx.
    pub fn for_stage(p: ZMask, q: ZMask) -> Self {
        let cs = |m: ZMask| condensed_set(p.and(m), q.and(m));
        CondensedSets {
            edges: [
                cs(ZMask::OUT),
                BosonSet::GZ,
                cs(ZMask::AB),
                cs(ZMask::CD),
                BosonSet::GX,
            ],
        }
    }

    fn of(&self, o: u8) -> BosonSet {
        if o.is_multiple_of(2) {
            BosonSet::ALL
        } else {
            self.edges[(o / 2) as usize]
        }
    }

    /// Intersection over the edges strictly clockwise between `a` and `b` (all bosons if none).
    fn between(&self, a: u8, b: u8) -> BosonSet {
        let mut s = BosonSet::ALL;
        if a == b {
            return s;
        }
        let mut x = (a + 1) % 10;
        while x != b {
            if x % 2 == 1 {
                s = s.and(self.edges[(x / 2) as usize]);
            }
            x = (x + 1) % 10;
        }
        s
    }
}

/// Symbolic primed distance between two objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PrimedDistance {
    Zero,
    DmPlusOne,
    Dz,
    MaxDmDz,
    /// At least `d_out + 1`; satisfies every requirement.
    Large,
}

impl PrimedDistance {
    pub fn value(self, d: Distances) -> Option<u32> {
        match self {
            PrimedDistance::Zero => Some(0),
            PrimedDistance::DmPlusOne => Some(d.d_m + 1),
            PrimedDistance::Dz => Some(d.d_z),
            PrimedDistance::MaxDmDz => Some((d.d_m + 1).max(d.d_z)),
            PrimedDistance::Large => None,
        }
    }
}

/// Case table of primed distances (symmetric in its arguments).
pub fn primed_distance_kind(a: PentagonObject, b: PentagonObject) -> PrimedDistance {
    let (a, b) = (a.0 as i32, b.0 as i32);
    let diff = |x: i32, y: i32| (y - x).rem_euclid(10);
    for (x, y) in [(a, b), (b, a)] {
        let adjacent_edges = x % 2 == 1 && y % 2 == 1 && matches!(diff(x, y), 2 | 8);
        let edge_endpoint = (x % 2 == 1 || y % 2 == 1) && matches!(diff(x, y), 1 | 9);
        if adjacent_edges || edge_endpoint {
            return PrimedDistance::Zero;
        }
    }
    for (x, y) in [(a, b), (b, a)] {
        for (j, kind) in [(1, PrimedDistance::DmPlusOne), (4, PrimedDistance::DmPlusOne), (2, PrimedDistance::Dz), (3, PrimedDistance::Dz)] {
            let from = [(2 * j) % 10, (2 * j - 1) % 10];
            let to = [(2 * j + 2) % 10, (2 * j + 3) % 10];
            if from.contains(&x) && to.contains(&y) {
                return kind;
            }
        }
    }
    let pair = if a < b { (a, b) } else { (b, a) };
    if matches!(pair, (0, 5) | (0, 6) | (1, 6)) {
        return PrimedDistance::MaxDmDz;
    }
    PrimedDistance::Large
}

/// Primed distance as a number; `None` stands for the always-sufficient large value.
pub fn primed_distance(a: PentagonObject, b: PentagonObject, d: Distances) -> Option<u32> {
    primed_distance_kind(a, b).value(d)
}

/// A clockwise endpoint sequence `o0, õ0, o1, õ1, ...` for one patch.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Sequence {
    segs: Vec<(u8, u8)>,
}

const MAX_EXTRA_SEGMENTS: usize = 5;

fn sequences(i: usize) -> &'static [Sequence] {
    static CACHE: OnceLock<Vec<Vec<Sequence>>> = OnceLock::new();
    &CACHE.get_or_init(|| (0..5).map(build_sequences).collect())[i]
}

fn build_sequences(i: usize) -> Vec<Sequence> {
    let o0 = ((2 * i) % 10) as u8;
    let t0 = ((2 * i + 2) % 10) as u8;
    let span = (o0 as i32 - t0 as i32).rem_euclid(10) as u8;
    let rest: Vec<u8> = (0..=span).map(|s| (t0 + s) % 10).collect();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<(u8, u8)>)> = vec![(0, Vec::new())];
    while let Some((from, pairs)) = stack.pop() {
        if !pairs.is_empty() {
            let mut segs = vec![(o0, t0)];
            segs.extend(pairs.iter().copied());
            out.push(Sequence { segs });
        }
        if pairs.len() >= MAX_EXTRA_SEGMENTS {
            continue;
        }
        for a in from..rest.len() {
            for b in a + 1..rest.len() {
                let mut next = pairs.clone();
                next.push((rest[a], rest[b]));
                stack.push((b, next));
            }
        }
    }
    out
}

fn presequent(cs: &CondensedSets, segs: &[(u8, u8)]) -> bool {
    let n = segs.len();
    let mut inter = BosonSet::ALL;
    let mut uni = BosonSet::NONE;
    for j in 0..n {
        let (o, t) = segs[j];
        let next = segs[(j + 1) % n].0;
        inter = inter.and(cs.of(o)).and(cs.of(t)).and(cs.between(t, next));
        uni = uni.or(cs.between(o, t));
    }
    !inter.is_subset(uni)
}

/// A distance requirement: if the chain exists, the primed distances of its
/// extra segments must sum to at least the patch distance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Requirement {
    pub patch_index: usize,
    /// `o0, õ0, o1, õ1, ...`
    pub endpoints: Vec<PentagonObject>,
    /// Symbolic terms of the distance sum (one per extra segment).
    pub terms: Vec<PrimedDistance>,
}

impl Requirement {
    pub fn available(&self, d: Distances) -> Option<u32> {
        self.terms.iter().map(|t| t.value(d)).sum()
    }

    pub fn target(&self, d: Distances) -> u32 {
        patch_distance(self.patch_index, d)
    }

    pub fn holds(&self, d: Distances) -> bool {
        self.available(d).is_none_or(|a| a >= self.target(d))
    }
}

/// Code distance of patch `i` (Out, Alpha, AB, CD, Beta).
pub fn patch_distance(i: usize, d: Distances) -> u32 {
    [d.d_out, d.d_m, d.d_z, d.d_z, d.d_m][i]
}

/// Requirements for patch `i` under the given condensed sets. Chains through a
/// large primed distance are dropped, and so is any requirement whose terms
/// contain those of another requirement.
pub fn requirements_for(cs: &CondensedSets, i: usize) -> Vec<Requirement> {
    let mut by_terms: HashMap<Vec<PrimedDistance>, Vec<PentagonObject>> = HashMap::new();
    for seq in sequences(i) {
        if !presequent(cs, &seq.segs) {
            continue;
        }
        let mut terms: Vec<PrimedDistance> =
            seq.segs[1..].iter().map(|&(a, b)| primed_distance_kind(PentagonObject(a), PentagonObject(b))).collect();
        if terms.contains(&PrimedDistance::Large) {
            continue;
        }
        terms.retain(|t| *t != PrimedDistance::Zero);
        terms.sort();
        let endpoints: Vec<PentagonObject> =
            seq.segs.iter().flat_map(|&(a, b)| [PentagonObject(a), PentagonObject(b)]).collect();
        match by_terms.get(&terms) {
            Some(prev) if prev.len() <= endpoints.len() => {}
            _ => {
                by_terms.insert(terms, endpoints);
            }
        }
    }
    let keys: Vec<Vec<PrimedDistance>> = by_terms.keys().cloned().collect();
    let contains = |big: &[PrimedDistance], small: &[PrimedDistance]| {
        let mut rest = big.to_vec();
        small.iter().all(|t| match rest.iter().position(|x| x == t) {
            Some(k) => {
                rest.remove(k);
                true
            }
            None => false,
        })
    };
    let mut out: Vec<Requirement> = by_terms
        .iter()
        .filter(|(t, _)| !keys.iter().any(|k| k.len() < t.len() && contains(t, k)))
        .map(|(t, e)| Requirement { patch_index: i, endpoints: e.clone(), terms: t.clone() })
        .collect();
    out.sort_by(|a, b| (a.terms.len(), &a.terms, &a.endpoints).cmp(&(b.terms.len(), &b.terms, &b.endpoints)));
    out
}

/// Requirements of patch `i` in every full-layout stage (3..=8), tagged with the stage.
pub fn enumerate_requirements(schedule: &StageSchedule, i: usize) -> Vec<(usize, Requirement)> {
    assert!(i < 5, "patch index out of range");
    let mut out = Vec::new();
    for (k, &(p, q)) in schedule.stages.iter().enumerate().skip(2) {
        for r in requirements_for(&CondensedSets::for_stage(p, q), i) {
            out.push((k + 1, r));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutViolation {
    pub stage: usize,
    pub patch_index: usize,
    pub endpoint_sequence: Vec<PentagonObject>,
    pub required: u32,
    pub available: u32,
    /// Early stages of the cultivation layout are known to be weaker; reported, not fatal.
    #[serde(default)]
    pub informational: bool,
}

/// Cached requirement lists per stage pair, for checking many distance tuples.
#[derive(Default)]
pub struct LayoutChecker {
    cache: HashMap<(ZMask, ZMask), Vec<Requirement>>,
}

impl LayoutChecker {
    pub fn new() -> Self {
        Self::default()
    }

    fn stage(&mut self, p: ZMask, q: ZMask) -> &[Requirement] {
        self.cache.entry((p, q)).or_insert_with(|| {
            let cs = CondensedSets::for_stage(p, q);
            (0..5).flat_map(|i| requirements_for(&cs, i)).collect()
        })
    }

    /// Violations over stages 3..=8, plus informational ones for stages 1..=2
    /// when `early` is set.
    pub fn check(&mut self, schedule: &StageSchedule, d: Distances, early: bool) -> Result<Vec<LayoutViolation>> {
        d.check_parity()?;
        let mut out = Vec::new();
        for (k, &(p, q)) in schedule.stages.iter().enumerate() {
            let informational = k < 2;
            if informational && !early {
                continue;
            }
            for r in self.stage(p, q) {
                if let Some(avail) = r.available(d) {
                    let need = r.target(d);
                    if avail < need {
                        out.push(LayoutViolation {
                            stage: k + 1,
                            patch_index: r.patch_index,
                            endpoint_sequence: r.endpoints.clone(),
                            required: need,
                            available: avail,
                            informational,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

/// All distance violations of the full-layout stages; empty iff the layout is distance-preserving.
pub fn verify_layout(schedule: &StageSchedule, d: Distances) -> Result<Vec<LayoutViolation>> {
    LayoutChecker::new().check(schedule, d, false)
}

/// Set of term patterns for a patch, handy for comparing enumerations.
pub fn requirement_patterns(cs: &CondensedSets, i: usize) -> BTreeSet<Vec<PrimedDistance>> {
    requirements_for(cs, i).into_iter().map(|r| r.terms).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::default_stage_schedule;

    fn o(s: &str) -> PentagonObject {
        (0..10u8).map(PentagonObject).find(|x| x.to_string() == s).unwrap()
    }

    #[test]
    fn object_names() {
        let names: Vec<String> = (0..10u8).map(|i| PentagonObject(i).to_string()).collect();
        assert_eq!(names, ["v40", "e0", "v01", "e1", "v12", "e2", "v23", "e3", "v34", "e4"]);
    }

    #[test]
    fn condensed_cases() {
        let z1 = ZMask(2);
        let z2 = ZMask(4);
        assert_eq!(condensed_set(ZMask::I, ZMask::I), BosonSet::ALL);
        assert_eq!(condensed_set(z1, z1), BosonSet::GY);
        assert_eq!(condensed_set(z1, z2), BosonSet::NONE);
        assert_eq!(condensed_set(z1, ZMask::I), BosonSet::GZ);
        assert_eq!(condensed_set(ZMask::I, z2), BosonSet::GX);
    }

    #[test]
    fn primed_cases() {
        assert_eq!(primed_distance_kind(o("v01"), o("e2")), PrimedDistance::DmPlusOne);
        assert_eq!(primed_distance_kind(o("e1"), o("e3")), PrimedDistance::Dz);
        assert_eq!(primed_distance_kind(o("e0"), o("v01")), PrimedDistance::Zero);
        assert_eq!(primed_distance_kind(o("e2"), o("v40")), PrimedDistance::MaxDmDz);
        assert_eq!(primed_distance_kind(o("e1"), o("e2")), PrimedDistance::Zero);
    }

    #[test]
    fn no_measurement_no_requirements() {
        let cs = CondensedSets { edges: [BosonSet::ALL; 5] };
        for i in 0..5 {
            assert!(requirements_for(&cs, i).is_empty());
        }
    }

    #[test]
    fn default_layout_ok() {
        assert!(verify_layout(&default_stage_schedule(), Distances::new(19, 8, 12, 7)).unwrap().is_empty());
        assert!(!verify_layout(&default_stage_schedule(), Distances::new(19, 8, 12, 5)).unwrap().is_empty());
    }
}
