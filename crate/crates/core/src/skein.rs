//! Farey pairs, skein triples and the linear determinant model of tangle
//! insertion into templates.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::determinant;
use crate::diagram::{splice, LinkDiagram};
use crate::error::{Error, Result};
use crate::tangle::{connectivity, orientation_compatible, TangleFraction, TangleWord};

/// Two fractions with `|p₁q₂ − q₁p₂| = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FareyPair {
    f1: TangleFraction,
    f2: TangleFraction,
}

impl FareyPair {
    pub fn new(f1: TangleFraction, f2: TangleFraction) -> Result<Self> {
        if f1.cross(f2).abs() != 1 {
            return Err(Error::NotFareyPair(f1, f2));
        }
        Ok(FareyPair { f1, f2 })
    }

    pub fn first(&self) -> TangleFraction {
        self.f1
    }

    pub fn second(&self) -> TangleFraction {
        self.f2
    }

    pub fn mediant(&self) -> TangleFraction {
        TangleFraction::new(self.f1.p() + self.f2.p(), self.f1.q() + self.f2.q()).expect("neighbours")
    }

    /// The crossing-change partner `(a−c)/(b−d)` of the mediant.
    pub fn partner(&self) -> TangleFraction {
        TangleFraction::new(self.f1.p() - self.f2.p(), self.f1.q() - self.f2.q()).expect("neighbours")
    }
}

pub fn mediant(pair: &FareyPair) -> TangleFraction {
    pair.mediant()
}

/// The neighbour `p′/q′` with the least nonnegative `q′`; on a tie the one
/// with `pq′ − qp′ = 1`.
pub fn farey_neighbor(f: TangleFraction) -> TangleFraction {
    let (p, q) = (f.p(), f.q());
    if q == 0 {
        return TangleFraction::ZERO;
    }
    if q == 1 {
        return TangleFraction::INFINITY;
    }
    let inv = mod_inverse(p, q);
    let candidates = [(inv, 1), (q - inv, -1)];
    let &(qq, s) = candidates.iter().min_by_key(|&&(qq, s)| (qq, -s)).expect("two candidates");
    TangleFraction::new((p * qq - s) / q, qq).expect("nonzero")
}

/// `x⁻¹ mod m` for coprime `x`, `m ≥ 2`, in `[1, m)`.
pub fn mod_inverse(x: i64, m: i64) -> i64 {
    let (mut r0, mut r1) = (x.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    debug_assert_eq!(r0, 1, "not coprime");
    s0.rem_euclid(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TripleKind {
    Unoriented,
    Oriented,
}

impl fmt::Display for TripleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TripleKind::Unoriented => "unoriented",
            TripleKind::Oriented => "oriented",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeinTriple {
    pub kind: TripleKind,
    /// The pair and its mediant.
    pub members: [TangleFraction; 3],
    pub partner: Option<TangleFraction>,
    pub resolution: Option<TangleFraction>,
}

impl SkeinTriple {
    pub fn mediant(&self) -> TangleFraction {
        self.members[2]
    }
}

pub fn unoriented_triple(pair: &FareyPair) -> SkeinTriple {
    SkeinTriple {
        kind: TripleKind::Unoriented,
        members: [pair.f1, pair.f2, pair.mediant()],
        partner: None,
        resolution: None,
    }
}

/// `(L₊, L₋, L₀)` at fraction level: the mediant, its crossing-change
/// partner and the compatible member of the pair.
pub fn oriented_triple(pair: &FareyPair, t: &TangleTemplate, slot: usize) -> Result<SkeinTriple> {
    let m = pair.mediant();
    let n = pair.partner();
    if !orientation_compatible(t, slot, m)? {
        return Err(Error::IncompatibleOrientation(m));
    }
    if !orientation_compatible(t, slot, n)? {
        return Err(Error::IncompatibleOrientation(n));
    }
    let ok1 = orientation_compatible(t, slot, pair.f1)?;
    let ok2 = orientation_compatible(t, slot, pair.f2)?;
    let r = match (ok1, ok2) {
        (true, false) => pair.f1,
        (false, true) => pair.f2,
        _ => {
            return Err(Error::Internal(format!(
                "exactly one of {} and {} must be compatible",
                pair.f1, pair.f2
            )))
        }
    };
    Ok(SkeinTriple {
        kind: TripleKind::Oriented,
        members: [pair.f1, pair.f2, m],
        partner: Some(n),
        resolution: Some(r),
    })
}

/// `det(L(p/q)) = |b·p − a·q|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coefficients {
    pub a: i64,
    pub b: i64,
}

impl Coefficients {
    /// Normalizes the global sign so that `b ≥ 0`, and `a ≥ 0` when `b = 0`.
    pub fn new(a: i64, b: i64) -> Self {
        if b < 0 || (b == 0 && a < 0) {
            Coefficients { a: -a, b: -b }
        } else {
            Coefficients { a, b }
        }
    }

    pub fn eval(&self, f: TangleFraction) -> u64 {
        (self.b as i128 * f.p() as i128 - self.a as i128 * f.q() as i128).unsigned_abs() as u64
    }

    pub fn zero_locus(&self) -> Result<TangleFraction> {
        TangleFraction::new(self.a, self.b).map_err(|_| Error::ZeroCoefficients)
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={} b={}", self.a, self.b)
    }
}

/// A diagram with one or more slots and per-slot fitted coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangleTemplate {
    diagram: LinkDiagram,
    coeffs: Vec<Option<Coefficients>>,
    zero_locus: Vec<Option<TangleFraction>>,
}

impl TangleTemplate {
    pub fn new(diagram: LinkDiagram) -> Result<Self> {
        let n = diagram.slots().len();
        if n == 0 {
            return Err(Error::Arity(0));
        }
        Ok(TangleTemplate { diagram, coeffs: vec![None; n], zero_locus: vec![None; n] })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(text.parse()?)
    }

    pub fn diagram(&self) -> &LinkDiagram {
        &self.diagram
    }

    pub fn slot_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self, slot: usize) -> Option<Coefficients> {
        self.coeffs.get(slot).copied().flatten()
    }

    pub fn zero_locus(&self, slot: usize) -> Option<TangleFraction> {
        self.zero_locus.get(slot).copied().flatten()
    }

    pub fn with_coefficients(&self, slot: usize, c: Coefficients) -> Result<Self> {
        if slot >= self.slot_count() {
            return Err(Error::SlotOutOfRange { index: slot, count: self.slot_count() });
        }
        let mut t = self.clone();
        t.coeffs[slot] = Some(c);
        t.zero_locus[slot] = Some(c.zero_locus()?);
        Ok(t)
    }

    /// Inserts the canonical tangle for `f`.
    pub fn fill(&self, slot: usize, f: TangleFraction) -> Result<LinkDiagram> {
        splice(self, slot, &TangleWord::for_fraction(f))
    }

    /// Determinant of the insertion, ignoring orientation.
    pub fn det_at(&self, slot: usize, f: TangleFraction) -> Result<u64> {
        let d = self.diagram.unoriented().fill_slot(slot, &TangleWord::for_fraction(f).compile())?;
        determinant(&d)
    }

    pub fn oriented(&self) -> bool {
        self.diagram.is_oriented()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fit {
    pub coeffs: Coefficients,
    /// Whether the probe at 1/1 flipped the relative sign of `a`.
    pub sign_flipped: bool,
    pub probes: Vec<(TangleFraction, u64)>,
}

pub const PROBES: [(i64, i64); 6] = [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (1, 3)];

pub fn fit_coefficients(t: &TangleTemplate, slot: usize) -> Result<Fit> {
    let probes = PROBES
        .iter()
        .map(|&(p, q)| {
            let f = TangleFraction::new(p, q).expect("probe");
            Ok((f, t.det_at(slot, f)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (a, b, d11) = (probes[0].1 as i64, probes[1].1 as i64, probes[2].1 as i64);
    let sign_flipped = d11 != (b - a).abs();
    if sign_flipped && d11 != a + b {
        return Err(Error::ValidationMismatch {
            fraction: probes[2].0,
            expected: (b - a).unsigned_abs(),
            actual: d11 as u64,
        });
    }
    let coeffs = Coefficients::new(if sign_flipped { -a } else { a }, b);
    if coeffs.a == 0 && coeffs.b == 0 {
        return Err(Error::ZeroCoefficients);
    }
    for &(f, actual) in &probes {
        let expected = coeffs.eval(f);
        if expected != actual {
            return Err(Error::ValidationMismatch { fraction: f, expected, actual });
        }
    }
    Ok(Fit { coeffs, sign_flipped, probes })
}

impl TangleTemplate {
    /// Functional update storing fitted coefficients for `slot`.
    pub fn fitted(&self, slot: usize) -> Result<Self> {
        self.with_coefficients(slot, fit_coefficients(self, slot)?.coeffs)
    }
}

pub fn zero_locus(t: &TangleTemplate, slot: usize) -> Result<Option<TangleFraction>> {
    let c = t.coeffs(slot).ok_or(Error::NotFitted(slot))?;
    c.zero_locus().map(Some)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub x: TangleFraction,
    pub witnesses: Vec<TangleFraction>,
}

impl ScanRow {
    pub fn zero_count(&self) -> usize {
        self.witnesses.len()
    }
}

impl fmt::Display for ScanRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.witnesses.iter().map(ToString::to_string).collect();
        write!(f, "{} | {} | {}", self.x, self.zero_count(), w.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    pub fn max_count(&self) -> usize {
        self.rows.iter().map(ScanRow::zero_count).max().unwrap_or(0)
    }

    pub fn holds(&self) -> bool {
        self.max_count() <= 1
    }
}

/// For each `x` in the box of the given bound, the `y` in the same box for
/// which filling `slot1` with `x` and `slot2` with `y` has determinant 0.
pub fn two_slot_scan(t: &TangleTemplate, slot1: usize, slot2: usize, bound: i64) -> Result<ScanReport> {
    let n = t.slot_count();
    for s in [slot1, slot2] {
        if s >= n {
            return Err(Error::SlotOutOfRange { index: s, count: n });
        }
    }
    if slot1 == slot2 {
        return Err(Error::Arity(1));
    }
    let fractions = TangleFraction::enumerate(bound);
    let second = if slot2 > slot1 { slot2 - 1 } else { slot2 };
    let mut rows = fractions
        .par_iter()
        .map(|&x| {
            let rest = TangleTemplate::new(t.fill(slot1, x)?)?;
            let mut witnesses = Vec::new();
            for &y in &fractions {
                let filled = rest.fill(second, y)?;
                if filled.slots().is_empty() && determinant(&filled)? == 0 {
                    witnesses.push(y);
                }
            }
            Ok(ScanRow { x, witnesses })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.x);
    Ok(ScanReport { rows })
}

/// Connectivity class of each member, for parity arguments.
pub fn classes(members: &[TangleFraction]) -> Vec<crate::tangle::ConnectivityClass> {
    members.iter().map(|&f| connectivity(f)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(s: &str) -> TangleFraction {
        s.parse().unwrap()
    }

    #[test]
    fn neighbours() {
        assert_eq!(farey_neighbor(fr("1/0")), fr("0/1"));
        assert_eq!(farey_neighbor(fr("0/1")), fr("1/0"));
        assert_eq!(farey_neighbor(fr("5/7")), fr("2/3"));
        let n = farey_neighbor(fr("2/5"));
        assert_eq!(fr("2/5").cross(n).abs(), 1);
        assert!(n == fr("1/2") || n == fr("1/3"));
    }

    #[test]
    fn mediants() {
        let p = FareyPair::new(fr("0/1"), fr("1/0")).unwrap();
        assert_eq!(p.mediant(), fr("1/1"));
        assert_eq!(p.partner(), fr("-1/1"));
        let p = FareyPair::new(fr("1/2"), fr("1/3")).unwrap();
        assert_eq!(p.mediant(), fr("2/5"));
        assert_eq!(p.partner(), fr("0/1"));
        assert!(FareyPair::new(fr("1/2"), fr("1/4")).is_err());
    }

    #[test]
    fn zero_loci() {
        assert_eq!(Coefficients::new(3, 2).zero_locus().unwrap(), fr("3/2"));
        assert_eq!(Coefficients::new(1, 1).zero_locus().unwrap(), fr("1/1"));
        assert_eq!(Coefficients::new(1, 0).zero_locus().unwrap(), fr("1/0"));
        assert!(matches!(Coefficients::new(0, 0).zero_locus(), Err(Error::ZeroCoefficients)));
    }

    #[test]
    fn empty_scan() {
        let t = TangleTemplate::parse("T[1,2,1,3] T[2,4,3,4]").unwrap();
        assert!(two_slot_scan(&t, 0, 1, 0).unwrap().rows.is_empty());
    }
}
