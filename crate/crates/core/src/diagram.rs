//! Planar diagram (PD) codes with optional orientation and tangle slots.
//!
//! A crossing `X[i,j,k,l]` lists its four legs counterclockwise starting from
//! the incoming under-strand, so `i`–`k` passes under and `j`–`l` over. A slot
//! `T[a,b,c,d]` is a removed disk whose endpoints are, in order, the top-left,
//! top-right, bottom-left and bottom-right boundary arcs. Crossingless closed
//! components are kept as a count of free loops and printed as `U`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::skein::TangleTemplate;
use crate::tangle::TangleWord;

pub type Arc = u32;

/// Slot endpoint positions.
pub const NW: usize = 0;
pub const NE: usize = 1;
pub const SW: usize = 2;
pub const SE: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Site {
    Crossing(usize),
    Slot(usize),
}

/// One of the two places an arc label is attached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    pub site: Site,
    pub pos: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SlotRef {
    pub endpoints: [Arc; 4],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CrossingSite {
    pub index: usize,
}

impl CrossingSite {
    pub fn new(index: usize) -> Self {
        CrossingSite { index }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Smoothing {
    /// Joins legs 0–1 and 2–3.
    Zero,
    /// Joins legs 0–3 and 1–2.
    One,
}

/// Direction of a component relative to its reference direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

/// A traced component: arcs in traversal order, each paired with the
/// occurrence it flows into. Open strands run between slot endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strand {
    pub steps: Vec<(Arc, Occurrence)>,
    pub closed: bool,
}

impl Strand {
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.steps.iter().map(|&(a, _)| a)
    }

    /// First and last slot occurrence of an open strand, in traversal order.
    pub fn ends(&self, occ: &OccMap) -> Option<(Occurrence, Occurrence)> {
        if self.closed {
            return None;
        }
        let (first_arc, first_head) = self.steps[0];
        let start = other_occurrence(occ, first_arc, first_head);
        let end = self.steps.last().map(|&(_, h)| h)?;
        Some((start, end))
    }
}

pub type OccMap = BTreeMap<Arc, [Occurrence; 2]>;

fn other_occurrence(occ: &OccMap, arc: Arc, o: Occurrence) -> Occurrence {
    let pair = occ[&arc];
    if pair[0] == o {
        pair[1]
    } else {
        pair[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<[Arc; 4]>,
    slots: Vec<SlotRef>,
    loops: usize,
    orientation: Option<Vec<Direction>>,
}

type Flags = [Option<bool>; 4];

/// Raw pieces of a diagram under construction. Labels may be arbitrary and
/// are merged, normalized and checked by `finish`.
struct Assembly {
    crossings: Vec<[Arc; 4]>,
    slots: Vec<[Arc; 4]>,
    loops: usize,
    merges: Vec<(Arc, Arc)>,
    labels: BTreeSet<Arc>,
    /// Per-position "flow enters the site here" flags, crossings then slots.
    flags: Option<(Vec<Flags>, Vec<Flags>)>,
}

struct UnionFind {
    parent: BTreeMap<Arc, Arc>,
}

impl UnionFind {
    fn new(labels: impl IntoIterator<Item = Arc>) -> Self {
        UnionFind {
            parent: labels.into_iter().map(|a| (a, a)).collect(),
        }
    }

    fn find(&mut self, a: Arc) -> Arc {
        let p = self.parent[&a];
        if p == a {
            return a;
        }
        let r = self.find(p);
        self.parent.insert(a, r);
        r
    }

    fn union(&mut self, a: Arc, b: Arc) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent.insert(hi, lo);
        }
    }
}

fn occurrence_map(crossings: &[[Arc; 4]], slots: &[[Arc; 4]]) -> Result<OccMap> {
    let mut seen: BTreeMap<Arc, Vec<Occurrence>> = BTreeMap::new();
    let sites = crossings
        .iter()
        .enumerate()
        .map(|(i, c)| (Site::Crossing(i), c))
        .chain(slots.iter().enumerate().map(|(i, s)| (Site::Slot(i), s)));
    for (site, legs) in sites {
        for (pos, &a) in legs.iter().enumerate() {
            seen.entry(a).or_default().push(Occurrence { site, pos });
        }
    }
    seen.into_iter()
        .map(|(a, v)| match v.as_slice() {
            [x, y] => Ok((a, [*x, *y])),
            _ => Err(Error::ArcMultiplicity { arc: a, count: v.len() }),
        })
        .collect()
}

/// Traces every component in reference direction, ordered by smallest label.
fn trace(crossings: &[[Arc; 4]], occ: &OccMap) -> Vec<Strand> {
    let mut visited = BTreeSet::new();
    let mut strands = Vec::new();
    for (&start, pair) in occ {
        if visited.contains(&start) {
            continue;
        }
        let mut steps = Vec::new();
        let mut closed = false;
        let (mut arc, mut head) = (start, pair[1]);
        loop {
            steps.push((arc, head));
            visited.insert(arc);
            let Site::Crossing(i) = head.site else { break };
            let out = Occurrence { site: head.site, pos: (head.pos + 2) % 4 };
            let next = crossings[i][out.pos];
            let next_head = other_occurrence(occ, next, out);
            if next == start && next_head == pair[1] {
                closed = true;
                break;
            }
            arc = next;
            head = next_head;
        }
        if !closed {
            let mut tail = pair[0];
            let mut prefix = Vec::new();
            while let Site::Crossing(i) = tail.site {
                let entry = Occurrence { site: tail.site, pos: (tail.pos + 2) % 4 };
                let prev = crossings[i][entry.pos];
                prefix.push((prev, entry));
                visited.insert(prev);
                tail = other_occurrence(occ, prev, entry);
            }
            prefix.reverse();
            prefix.extend(steps);
            steps = prefix;
        }
        let mut strand = Strand { steps, closed };
        let first_under = strand
            .steps
            .iter()
            .filter_map(|&(_, h)| match h.site {
                Site::Crossing(i) if h.pos % 2 == 0 => Some((i, h.pos)),
                _ => None,
            })
            .min();
        if let Some((_, 2)) = first_under {
            strand = reverse(&strand, occ);
        }
        strands.push(strand);
    }
    strands
}

fn reverse(s: &Strand, occ: &OccMap) -> Strand {
    let steps = s
        .steps
        .iter()
        .rev()
        .map(|&(a, h)| (a, other_occurrence(occ, a, h)))
        .collect();
    Strand { steps, closed: s.closed }
}

/// Euler characteristic check on the rotation system: legs of a crossing
/// are in counterclockwise order, those of a slot run NW, SW, SE, NE.
fn is_planar(crossings: &[[Arc; 4]], slots: &[[Arc; 4]], occ: &OccMap) -> bool {
    const SLOT_NEXT: [usize; 4] = [SW, NW, SE, NE];
    let n = crossings.len() + slots.len();
    if n == 0 {
        return true;
    }
    let site_index = |s: Site| match s {
        Site::Crossing(i) => i,
        Site::Slot(i) => crossings.len() + i,
    };
    let arc_at = |o: Occurrence| match o.site {
        Site::Crossing(i) => crossings[i][o.pos],
        Site::Slot(i) => slots[i][o.pos],
    };
    let next_ccw = |o: Occurrence| Occurrence {
        site: o.site,
        pos: match o.site {
            Site::Crossing(_) => (o.pos + 1) % 4,
            Site::Slot(_) => SLOT_NEXT[o.pos],
        },
    };
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for pair in occ.values() {
        let (a, b) = (find(&mut parent, site_index(pair[0].site)), find(&mut parent, site_index(pair[1].site)));
        parent[a] = b;
    }
    let parts = (0..n).filter(|&x| find(&mut parent, x) == x).count();
    let mut seen = BTreeSet::new();
    let mut faces = 0;
    for pair in occ.values() {
        for &start in pair {
            if seen.contains(&start) {
                continue;
            }
            faces += 1;
            let mut o = start;
            while seen.insert(o) {
                let leg = next_ccw(o);
                o = other_occurrence(occ, arc_at(leg), leg);
            }
        }
    }
    // Faces are traced per connected part, each on its own sphere.
    n as i64 - occ.len() as i64 + faces as i64 == 2 * parts as i64
}

fn rotate2<T: Copy>(x: [T; 4]) -> [T; 4] {
    [x[2], x[3], x[0], x[1]]
}

impl Assembly {
    fn new(crossings: Vec<[Arc; 4]>, slots: Vec<[Arc; 4]>, loops: usize) -> Self {
        let labels = crossings.iter().chain(slots.iter()).flatten().copied().collect();
        Assembly { crossings, slots, loops, merges: Vec::new(), labels, flags: None }
    }

    fn finish(self) -> Result<LinkDiagram> {
        let Assembly { mut crossings, mut slots, mut loops, merges, labels, flags } = self;
        let mut uf = UnionFind::new(labels.iter().copied());
        for (a, b) in merges {
            uf.union(a, b);
        }
        for legs in crossings.iter_mut().chain(slots.iter_mut()) {
            for a in legs.iter_mut() {
                *a = uf.find(*a);
            }
        }
        let mut counts: BTreeMap<Arc, usize> = BTreeMap::new();
        for &a in crossings.iter().chain(slots.iter()).flatten() {
            *counts.entry(a).or_default() += 1;
        }
        let roots: BTreeSet<Arc> = labels.iter().map(|&a| uf.find(a)).collect();
        loops += roots.iter().filter(|r| !counts.contains_key(r)).count();
        let occ = occurrence_map(&crossings, &slots)?;

        let final_flags = match flags {
            None => None,
            Some((mut cf, mut sf)) => {
                propagate(&crossings, &occ, &mut cf, &mut sf)?;
                for (legs, f) in crossings.iter_mut().zip(cf.iter_mut()) {
                    if f[0] == Some(false) {
                        *legs = rotate2(*legs);
                        *f = rotate2(*f);
                    }
                    if f[0] != Some(true) || f[2] != Some(false) || f[1] == f[3] {
                        return Err(Error::OrientationConflict(
                            "crossing strands are not consistently directed".into(),
                        ));
                    }
                }
                if sf.iter().flatten().any(|f| f.is_none()) {
                    return Err(Error::Internal("slot endpoint left undirected".into()));
                }
                Some((cf, sf))
            }
        };

        // Labels already forming 1..k are kept; anything else is compacted
        // by first appearance.
        let present: BTreeSet<Arc> = crossings.iter().chain(slots.iter()).flatten().copied().collect();
        if present.iter().copied().ne(1..=present.len() as Arc) {
            let mut relabel: BTreeMap<Arc, Arc> = BTreeMap::new();
            for &a in crossings.iter().chain(slots.iter()).flatten() {
                let next = relabel.len() as Arc + 1;
                relabel.entry(a).or_insert(next);
            }
            for legs in crossings.iter_mut().chain(slots.iter_mut()) {
                for a in legs.iter_mut() {
                    *a = relabel[a];
                }
            }
        }
        let mut d = LinkDiagram {
            crossings,
            slots: slots.into_iter().map(|endpoints| SlotRef { endpoints }).collect(),
            loops,
            orientation: None,
        };
        if d.crossings.is_empty() && d.slots.is_empty() && d.loops == 0 {
            return Err(Error::Internal("diagram has no components".into()));
        }
        if let Some((cf, sf)) = final_flags {
            let occ = d.occurrences();
            let dirs = trace(&d.crossings, &occ)
                .iter()
                .map(|strand| {
                    let head = strand.steps[0].1;
                    let enters = match head.site {
                        Site::Crossing(i) => cf[i][head.pos],
                        Site::Slot(i) => sf[i][head.pos],
                    };
                    if enters == Some(true) {
                        Direction::Forward
                    } else {
                        Direction::Backward
                    }
                })
                .collect();
            d.orientation = Some(dirs);
        }
        Ok(d)
    }
}

/// Fills unknown flags along each traced component from any known one.
fn propagate(
    crossings: &[[Arc; 4]],
    occ: &OccMap,
    cf: &mut [Flags],
    sf: &mut [Flags],
) -> Result<()> {
    fn get(cf: &[Flags], sf: &[Flags], o: Occurrence) -> Option<bool> {
        match o.site {
            Site::Crossing(i) => cf[i][o.pos],
            Site::Slot(i) => sf[i][o.pos],
        }
    }
    fn set(cf: &mut [Flags], sf: &mut [Flags], o: Occurrence, v: bool) {
        match o.site {
            Site::Crossing(i) => cf[i][o.pos] = Some(v),
            Site::Slot(i) => sf[i][o.pos] = Some(v),
        }
    }
    for strand in trace(crossings, occ) {
        let mut dir = None;
        'find: for &(a, head) in &strand.steps {
            let tail = other_occurrence(occ, a, head);
            for (o, forward_value) in [(head, true), (tail, false)] {
                if let Some(v) = get(cf, sf, o) {
                    dir = Some(if v == forward_value { Direction::Forward } else { Direction::Backward });
                    break 'find;
                }
            }
        }
        let dir = dir.unwrap_or(Direction::Forward);
        for &(a, head) in &strand.steps {
            let tail = other_occurrence(occ, a, head);
            let (into, from) = match dir {
                Direction::Forward => (head, tail),
                Direction::Backward => (tail, head),
            };
            for (o, v) in [(into, true), (from, false)] {
                match get(cf, sf, o) {
                    Some(w) if w != v => {
                        return Err(Error::OrientationConflict(format!(
                            "arc {a} is forced in both directions"
                        )))
                    }
                    _ => set(cf, sf, o, v),
                }
            }
        }
    }
    Ok(())
}

impl LinkDiagram {
    pub fn parse(text: &str) -> Result<Self> {
        text.parse()
    }

    /// Builds a diagram from raw tuples, renormalizing labels.
    pub(crate) fn from_raw(crossings: Vec<[Arc; 4]>, slots: Vec<[Arc; 4]>, loops: usize) -> Result<Self> {
        Assembly::new(crossings, slots, loops).finish()
    }

    pub fn is_planar(&self) -> bool {
        is_planar(&self.crossings, &self.raw_slots(), &self.occurrences())
    }

    /// The crossingless unknot.
    pub fn unknot() -> Self {
        LinkDiagram { crossings: Vec::new(), slots: Vec::new(), loops: 1, orientation: None }
    }

    pub fn crossings(&self) -> &[[Arc; 4]] {
        &self.crossings
    }

    pub fn slots(&self) -> &[SlotRef] {
        &self.slots
    }

    pub fn free_loops(&self) -> usize {
        self.loops
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs().len()
    }

    pub fn arcs(&self) -> Vec<Arc> {
        let set: BTreeSet<Arc> = self.all_legs().collect();
        set.into_iter().collect()
    }

    fn all_legs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.crossings
            .iter()
            .flatten()
            .chain(self.slots.iter().flat_map(|s| s.endpoints.iter()))
            .copied()
    }

    fn raw_slots(&self) -> Vec<[Arc; 4]> {
        self.slots.iter().map(|s| s.endpoints).collect()
    }

    fn max_label(&self) -> Arc {
        self.all_legs().max().unwrap_or(0)
    }

    pub fn occurrences(&self) -> OccMap {
        occurrence_map(&self.crossings, &self.raw_slots()).expect("validated diagram")
    }

    /// Traced components (closed cycles and slot-to-slot strands) in
    /// reference direction. Free loops are not included.
    pub fn strands(&self) -> Vec<Strand> {
        trace(&self.crossings, &self.occurrences())
    }

    pub fn components(&self) -> Result<usize> {
        if !self.slots.is_empty() {
            return Err(Error::UnfilledSlot(self.slots.len()));
        }
        Ok(self.strands().len() + self.loops)
    }

    pub fn is_oriented(&self) -> bool {
        self.orientation.is_some()
    }

    /// Per-strand direction relative to the reference direction.
    pub fn orientation(&self) -> Option<&[Direction]> {
        self.orientation.as_deref()
    }

    pub fn unoriented(&self) -> LinkDiagram {
        LinkDiagram { orientation: None, ..self.clone() }
    }

    /// Orients the diagram. Any strand that passes under a crossing must be
    /// `Forward`, since leg 0 of every crossing is incoming.
    pub fn with_orientation(&self, dirs: &[Direction]) -> Result<LinkDiagram> {
        let strands = self.strands();
        if dirs.len() != strands.len() {
            return Err(Error::OrientationConflict(format!(
                "{} directions given for {} components",
                dirs.len(),
                strands.len()
            )));
        }
        let d = LinkDiagram { orientation: Some(dirs.to_vec()), ..self.clone() };
        let (cf, _) = d.site_flags().expect("oriented");
        for (i, f) in cf.iter().enumerate() {
            if !f[0] {
                return Err(Error::OrientationConflict(format!(
                    "crossing {} would have an outgoing leg 0",
                    i + 1
                )));
            }
        }
        Ok(d)
    }

    /// For every crossing and slot position, whether the flow enters the site
    /// there.
    pub fn site_flags(&self) -> Option<(Vec<[bool; 4]>, Vec<[bool; 4]>)> {
        let dirs = self.orientation.as_ref()?;
        let occ = self.occurrences();
        let mut cf = vec![[false; 4]; self.crossings.len()];
        let mut sf = vec![[false; 4]; self.slots.len()];
        for (strand, &dir) in trace(&self.crossings, &occ).iter().zip(dirs) {
            for &(a, head) in &strand.steps {
                let into = match dir {
                    Direction::Forward => head,
                    Direction::Backward => other_occurrence(&occ, a, head),
                };
                match into.site {
                    Site::Crossing(i) => cf[i][into.pos] = true,
                    Site::Slot(i) => sf[i][into.pos] = true,
                }
            }
        }
        Some((cf, sf))
    }

    fn optional_flags(&self) -> Option<(Vec<Flags>, Vec<Flags>)> {
        let (cf, sf) = self.site_flags()?;
        let wrap = |v: Vec<[bool; 4]>| v.into_iter().map(|f| f.map(Some)).collect();
        Some((wrap(cf), wrap(sf)))
    }

    /// Whether the flow enters slot `slot` at each of its endpoints.
    pub fn slot_flags(&self, slot: usize) -> Result<[bool; 4]> {
        self.check_slot(slot)?;
        let (_, sf) = self.site_flags().ok_or(Error::NotOriented)?;
        Ok(sf[slot])
    }

    /// +1 if the over-strand enters at leg 3, -1 if at leg 1.
    pub fn crossing_sign(&self, site: CrossingSite) -> Result<i8> {
        self.check_site(site)?;
        let (cf, _) = self.site_flags().ok_or(Error::NotOriented)?;
        Ok(if cf[site.index][3] { 1 } else { -1 })
    }

    fn check_site(&self, site: CrossingSite) -> Result<()> {
        if site.index >= self.crossings.len() {
            return Err(Error::SiteOutOfRange { index: site.index, count: self.crossings.len() });
        }
        Ok(())
    }

    fn check_slot(&self, slot: usize) -> Result<()> {
        if slot >= self.slots.len() {
            return Err(Error::SlotOutOfRange { index: slot, count: self.slots.len() });
        }
        Ok(())
    }

    fn assembly(&self) -> Assembly {
        let mut asm = Assembly::new(self.crossings.clone(), self.raw_slots(), self.loops);
        asm.flags = self.optional_flags();
        asm
    }

    /// Unoriented smoothing of one crossing.
    pub fn resolve(&self, site: CrossingSite, which: Smoothing) -> Result<LinkDiagram> {
        self.check_site(site)?;
        if self.is_oriented() {
            return Err(Error::Oriented);
        }
        self.smooth(site.index, which)
    }

    fn smooth(&self, i: usize, which: Smoothing) -> Result<LinkDiagram> {
        let mut asm = self.assembly();
        let [a, b, c, d] = asm.crossings.remove(i);
        if let Some((cf, _)) = asm.flags.as_mut() {
            cf.remove(i);
        }
        match which {
            Smoothing::Zero => asm.merges.extend([(a, b), (c, d)]),
            Smoothing::One => asm.merges.extend([(a, d), (b, c)]),
        }
        asm.finish()
    }

    /// The smoothing that respects strand directions.
    pub fn oriented_resolve(&self, site: CrossingSite) -> Result<LinkDiagram> {
        self.check_site(site)?;
        let (cf, _) = self.site_flags().ok_or(Error::NotOriented)?;
        let which = if cf[site.index][1] { Smoothing::One } else { Smoothing::Zero };
        self.smooth(site.index, which)
    }

    /// Swaps over and under at one crossing.
    pub fn crossing_change(&self, site: CrossingSite) -> Result<LinkDiagram> {
        self.check_site(site)?;
        let i = site.index;
        let mut asm = self.assembly();
        let [a, b, c, d] = asm.crossings[i];
        let over_enters_at_1 = match asm.flags.as_ref() {
            Some((cf, _)) => cf[i][1] == Some(true),
            None => false,
        };
        let shift = if over_enters_at_1 { 1 } else { 3 };
        asm.crossings[i] = if shift == 1 { [b, c, d, a] } else { [d, a, b, c] };
        if let Some((cf, _)) = asm.flags.as_mut() {
            let f = cf[i];
            cf[i] = if shift == 1 { [f[1], f[2], f[3], f[0]] } else { [f[3], f[0], f[1], f[2]] };
        }
        asm.finish()
    }

    fn shifted(&self, by: Arc) -> (Vec<[Arc; 4]>, Vec<[Arc; 4]>) {
        let c = self.crossings.iter().map(|x| x.map(|a| a + by)).collect();
        let s = self.slots.iter().map(|x| x.endpoints.map(|a| a + by)).collect();
        (c, s)
    }

    pub fn disjoint_union(&self, other: &LinkDiagram) -> LinkDiagram {
        let (oc, os) = other.shifted(self.max_label());
        let mut crossings = self.crossings.clone();
        crossings.extend(oc);
        let mut slots = self.raw_slots();
        slots.extend(os);
        let mut asm = Assembly::new(crossings, slots, self.loops + other.loops);
        if let (Some((c1, s1)), Some((c2, s2))) = (self.optional_flags(), other.optional_flags()) {
            asm.flags = Some(([c1, c2].concat(), [s1, s2].concat()));
        }
        asm.finish().expect("union of valid diagrams is valid")
    }

    /// Cuts `a1` in `self` and `a2` in `other` and reconnects the loose ends.
    /// A diagram without arcs contributes one of its free loops, in which
    /// case its arc argument is ignored.
    pub fn connected_sum(&self, a1: Arc, other: &LinkDiagram, a2: Arc) -> Result<LinkDiagram> {
        let arcless = |d: &LinkDiagram| d.crossings.is_empty() && d.slots.is_empty();
        if arcless(other) {
            let mut d = self.disjoint_union(other);
            d.loops -= 1;
            if !arcless(self) && !self.occurrences().contains_key(&a1) {
                return Err(Error::InvalidArc(a1));
            }
            return Ok(d);
        }
        if arcless(self) {
            return other.connected_sum(a2, self, a1);
        }
        let occ1 = self.occurrences();
        let occ2 = other.occurrences();
        let p1 = *occ1.get(&a1).ok_or(Error::InvalidArc(a1))?;
        let p2 = *occ2.get(&a2).ok_or(Error::InvalidArc(a2))?;
        let (f1, f2) = (self.optional_flags(), other.optional_flags());
        let oriented = f1.is_some() && f2.is_some();
        // (tail, head) order when oriented, occurrence order otherwise.
        let order = |pair: [Occurrence; 2], flags: &Option<(Vec<Flags>, Vec<Flags>)>| {
            let enters = |o: Occurrence| match (flags, o.site) {
                (Some((cf, _)), Site::Crossing(i)) => cf[i][o.pos] == Some(true),
                (Some((_, sf)), Site::Slot(i)) => sf[i][o.pos] == Some(true),
                _ => false,
            };
            if oriented && enters(pair[0]) {
                [pair[1], pair[0]]
            } else {
                pair
            }
        };
        let [_, o2] = order(p1, &f1);
        let [o3, o4] = order(p2, &f2);
        let shift = self.max_label();
        let fresh = shift + other.max_label() + 1;
        let (mut c2, mut s2) = other.shifted(shift);
        let mut c1 = self.crossings.clone();
        let mut s1 = self.raw_slots();
        let put = |c: &mut Vec<[Arc; 4]>, s: &mut Vec<[Arc; 4]>, o: Occurrence, v: Arc| match o.site {
            Site::Crossing(i) => c[i][o.pos] = v,
            Site::Slot(i) => s[i][o.pos] = v,
        };
        put(&mut c1, &mut s1, o2, fresh);
        put(&mut c2, &mut s2, o4, a1);
        put(&mut c2, &mut s2, o3, fresh);
        c1.extend(c2);
        s1.extend(s2);
        let mut asm = Assembly::new(c1, s1, self.loops + other.loops);
        if oriented {
            let (cf1, sf1) = f1.expect("oriented");
            let (cf2, sf2) = f2.expect("oriented");
            asm.flags = Some(([cf1, cf2].concat(), [sf1, sf2].concat()));
        }
        asm.finish()
    }

    /// Replaces a crossing by a slot whose endpoints are its legs, so that
    /// filling the slot with the tangle 1/1 gives back the original crossing.
    pub fn open_crossing(&self, site: CrossingSite) -> Result<LinkDiagram> {
        self.check_site(site)?;
        let mut asm = self.assembly();
        let [x0, x1, x2, x3] = asm.crossings.remove(site.index);
        asm.slots.push([x0, x3, x1, x2]);
        if let Some((cf, sf)) = asm.flags.as_mut() {
            let f = cf.remove(site.index);
            sf.push([f[0], f[3], f[1], f[2]]);
        }
        asm.finish()
    }

    /// Glues a tangle diagram, whose single slot is its boundary, into slot
    /// `slot`. Boundary positions are matched one to one.
    pub fn fill_slot(&self, slot: usize, tangle: &LinkDiagram) -> Result<LinkDiagram> {
        self.check_slot(slot)?;
        if tangle.slots.len() != 1 {
            return Err(Error::Arity(tangle.slots.len()));
        }
        let shift = self.max_label();
        let (tc, ts) = tangle.shifted(shift);
        let ports = ts[0];
        let mut slots = self.raw_slots();
        let ends = slots.remove(slot);
        let n = self.crossings.len();
        let mut crossings = self.crossings.clone();
        crossings.extend(tc);
        let mut asm = Assembly::new(crossings, slots, self.loops + tangle.loops);
        asm.labels.extend(ports);
        asm.labels.extend(ends);
        asm.merges.extend(ends.into_iter().zip(ports));
        if let Some((mut cf, mut sf)) = self.optional_flags() {
            let enters: [bool; 4] = sf.remove(slot).map(|f| f == Some(true));
            check_tangle_compatible(tangle, &enters)?;
            cf.extend(std::iter::repeat([None; 4]).take(tangle.crossings.len()));
            // A port edge carries flow into the tangle exactly when the
            // exterior arc flows into the slot at that endpoint.
            let tocc = tangle.occurrences();
            for (pos, &port) in tangle.slots[0].endpoints.iter().enumerate() {
                let o = other_occurrence(&tocc, port, Occurrence { site: Site::Slot(0), pos });
                if let Site::Crossing(i) = o.site {
                    cf[n + i][o.pos] = Some(enters[pos]);
                }
            }
            asm.flags = Some((cf, sf));
        }
        asm.finish()
    }

    /// Compares crossings up to the rotation by two positions that describes
    /// the same unoriented crossing.
    pub fn same_diagram(&self, other: &LinkDiagram) -> bool {
        let canon = |d: &LinkDiagram| -> Vec<[Arc; 4]> {
            d.crossings.iter().map(|&c| c.min(rotate2(c))).collect()
        };
        canon(self) == canon(other) && self.slots == other.slots && self.loops == other.loops
    }
}

fn check_tangle_compatible(tangle: &LinkDiagram, enters: &[bool; 4]) -> Result<()> {
    let occ = tangle.occurrences();
    for s in trace(&tangle.crossings, &occ) {
        if let Some((a, b)) = s.ends(&occ) {
            if enters[a.pos] == enters[b.pos] {
                return Err(Error::OrientationConflict(
                    "tangle joins two endpoints with the same direction".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Fills `slot` of the template with the compiled word.
pub fn splice(t: &TangleTemplate, slot: usize, w: &TangleWord) -> Result<LinkDiagram> {
    t.diagram().fill_slot(slot, &w.compile())
}

fn parse_list(token: &str, body: &str) -> Result<[Arc; 4]> {
    let bad = |reason: &str| Error::Parse { token: token.to_string(), reason: reason.into() };
    let parts: Vec<&str> = body.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(bad("expected four arc labels"));
    }
    let mut out = [0; 4];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| bad("arc labels must be positive integers"))?;
        if *slot == 0 {
            return Err(bad("arc labels must be positive integers"));
        }
    }
    Ok(out)
}

fn tokens(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let mut tok = String::new();
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() && !tok.contains('[') {
                break;
            }
            tok.push(c);
            chars.next();
            if c == ']' {
                break;
            }
        }
        if tok.contains('[') && !tok.ends_with(']') {
            return Err(Error::Parse { token: tok, reason: "unterminated bracket".into() });
        }
        out.push(tok.chars().filter(|c| !c.is_whitespace()).collect());
    }
    Ok(out)
}

impl FromStr for LinkDiagram {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut crossings = Vec::new();
        let mut slots = Vec::new();
        let mut loops = 0;
        let mut directive: Option<Vec<(usize, Direction)>> = None;
        for tok in tokens(text)? {
            let bad = |reason: &str| Error::Parse { token: tok.clone(), reason: reason.into() };
            if tok == "U" {
                loops += 1;
                continue;
            }
            let (head, body) = tok
                .split_once('[')
                .and_then(|(h, rest)| rest.strip_suffix(']').map(|b| (h, b)))
                .ok_or_else(|| bad("expected X[..], T[..], O[..] or U"))?;
            match head {
                "X" => crossings.push(parse_list(&tok, body)?),
                "T" => slots.push(parse_list(&tok, body)?),
                "O" => {
                    if directive.is_some() {
                        return Err(bad("more than one orientation directive"));
                    }
                    let mut entries = Vec::new();
                    for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let (idx, sign) = item.split_once(':').ok_or_else(|| bad("expected c:+ or c:-"))?;
                        let idx: usize = idx
                            .trim()
                            .trim_start_matches('c')
                            .parse()
                            .map_err(|_| bad("component index must be a positive integer"))?;
                        let dir = match sign.trim() {
                            "+" => Direction::Forward,
                            "-" => Direction::Backward,
                            _ => return Err(bad("direction must be + or -")),
                        };
                        if idx == 0 {
                            return Err(bad("component indices start at 1"));
                        }
                        entries.push((idx, dir));
                    }
                    directive = Some(entries);
                }
                _ => return Err(bad("unknown token kind")),
            }
        }
        if crossings.is_empty() && slots.is_empty() && loops == 0 {
            loops = 1;
        }
        for (i, s) in slots.iter().enumerate() {
            for a in s {
                let inside = s.iter().filter(|&b| b == a).count();
                let total = crossings.iter().chain(slots.iter()).flatten().filter(|&b| b == a).count();
                if inside > 2 || (inside == 2 && total > 2) {
                    return Err(Error::SlotEndpointReuse { slot: i, arc: *a });
                }
            }
        }
        let occ = occurrence_map(&crossings, &slots)?;
        if !is_planar(&crossings, &slots, &occ) {
            return Err(Error::NonPlanar);
        }
        let d = LinkDiagram {
            crossings,
            slots: slots.into_iter().map(|endpoints| SlotRef { endpoints }).collect(),
            loops,
            orientation: None,
        };
        match directive {
            None => Ok(d),
            Some(entries) => {
                let n = d.strands().len();
                let mut dirs = vec![Direction::Forward; n];
                for (idx, dir) in entries {
                    if idx > n {
                        return Err(Error::Parse {
                            token: format!("O[..{idx}..]"),
                            reason: format!("diagram has {n} traced components"),
                        });
                    }
                    dirs[idx - 1] = dir;
                }
                d.with_orientation(&dirs)
            }
        }
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for c in &self.crossings {
            parts.push(format!("X[{},{},{},{}]", c[0], c[1], c[2], c[3]));
        }
        for s in &self.slots {
            let e = s.endpoints;
            parts.push(format!("T[{},{},{},{}]", e[0], e[1], e[2], e[3]));
        }
        parts.extend(std::iter::repeat("U".to_string()).take(self.loops));
        if let Some(dirs) = &self.orientation {
            let items: Vec<String> = dirs
                .iter()
                .enumerate()
                .map(|(i, d)| format!("{}:{}", i + 1, if *d == Direction::Forward { '+' } else { '-' }))
                .collect();
            parts.push(format!("O[{}]", items.join(",")));
        }
        write!(f, "{}", parts.join(" "))
    }
}
