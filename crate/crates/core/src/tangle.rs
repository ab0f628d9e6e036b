//! Rational tangles: fractions, continued fractions, twist words and their
//! compilation to crossings, connectivity and orientation classes.
//!
//! Compiled tangles use a boundary slot `T[NW,NE,SW,SE]`. A horizontal twist
//! acts on the right-hand endpoints NE and SE, a vertical twist on the bottom
//! endpoints SW and SE. A positive twist in either direction puts the
//! SW–NE strand over, so `[1]` and `1/[1]` compile to the same crossing.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diagram::{LinkDiagram, Site, NE, NW, SE, SW};
use crate::error::{Error, Result};
use crate::skein::TangleTemplate;

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A reduced element of Q ∪ {1/0} with nonnegative denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TangleFraction {
    p: i64,
    q: i64,
}

impl TangleFraction {
    pub const ZERO: TangleFraction = TangleFraction { p: 0, q: 1 };
    pub const INFINITY: TangleFraction = TangleFraction { p: 1, q: 0 };

    /// Reduces `p/q`; the sign moves into the numerator and every `p/0`
    /// becomes `1/0`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::InvalidFraction("0/0".into()));
        }
        if q == 0 {
            return Ok(Self::INFINITY);
        }
        let g = gcd(p, q);
        let s = q.signum();
        Ok(TangleFraction { p: s * p / g, q: s * q / g })
    }

    pub fn integer(n: i64) -> Self {
        TangleFraction { p: n, q: 1 }
    }

    pub fn p(self) -> i64 {
        self.p
    }

    pub fn q(self) -> i64 {
        self.q
    }

    pub fn is_infinity(self) -> bool {
        self.q == 0
    }

    /// `p₁q₂ − q₁p₂` on the normalized representatives.
    pub fn cross(self, other: TangleFraction) -> i64 {
        self.p * other.q - self.q * other.p
    }

    /// The mirror tangle `−p/q`.
    pub fn mirror(self) -> Self {
        if self.is_infinity() {
            self
        } else {
            TangleFraction { p: -self.p, q: self.q }
        }
    }

    /// All reduced fractions with `|p| ≤ bound` and `0 ≤ q ≤ bound`,
    /// including `1/0` once `bound ≥ 1`.
    pub fn enumerate(bound: i64) -> Vec<TangleFraction> {
        let mut out = Vec::new();
        for q in 0..=bound {
            for p in -bound..=bound {
                if gcd(p, q) == 1 && (q > 0 || p == 1) {
                    out.push(TangleFraction { p, q });
                }
            }
        }
        out
    }
}

impl fmt::Display for TangleFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for TangleFraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidFraction(s.to_string());
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        };
        TangleFraction::new(p, q)
    }
}

impl TryFrom<String> for TangleFraction {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TangleFraction> for String {
    fn from(f: TangleFraction) -> String {
        f.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Infinity,
    Int(i64),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Infinity => write!(f, "inf"),
            Term::Int(n) => write!(f, "{n}"),
        }
    }
}

/// `(a₁, …, aₙ) = aₙ + 1/(aₙ₋₁ + 1/(… + 1/a₁))` with `n` odd.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    terms: Vec<Term>,
}

impl ContinuedFraction {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        let bad = |m: &str| Error::InvalidContinuedFraction(m.to_string());
        let n = terms.len();
        if n % 2 == 0 {
            return Err(bad("length must be odd"));
        }
        for (i, t) in terms.iter().enumerate() {
            match (i, t) {
                (0, Term::Int(0)) if n > 1 => return Err(bad("first term must be nonzero")),
                (0, _) => {}
                (_, Term::Infinity) => return Err(bad("only the first term may be infinite")),
                (i, Term::Int(0)) if i + 1 < n => return Err(bad("interior terms must be nonzero")),
                _ => {}
            }
        }
        Ok(ContinuedFraction { terms })
    }

    pub fn from_ints(terms: &[i64]) -> Result<Self> {
        Self::new(terms.iter().map(|&a| Term::Int(a)).collect())
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Σ|aᵢ| over finite terms.
    pub fn crossing_count(&self) -> u64 {
        self.terms
            .iter()
            .map(|t| match t {
                Term::Int(a) => a.unsigned_abs(),
                Term::Infinity => 0,
            })
            .sum()
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.terms.iter().map(Term::to_string).collect();
        write!(f, "({})", items.join(","))
    }
}

impl FromStr for ContinuedFraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let terms = body
            .split(',')
            .map(|t| match t.trim() {
                "inf" | "∞" | "1/0" => Ok(Term::Infinity),
                t => t
                    .parse()
                    .map(Term::Int)
                    .map_err(|_| Error::InvalidContinuedFraction(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        ContinuedFraction::new(terms)
    }
}

/// Evaluates by the 2×2 matrix recursion on `(p, q)`.
pub fn cf_to_fraction(cf: &ContinuedFraction) -> TangleFraction {
    let (mut p, mut q) = match cf.terms[0] {
        Term::Infinity => (1i128, 0i128),
        Term::Int(a) => (a as i128, 1),
    };
    for (i, t) in cf.terms.iter().enumerate().skip(1) {
        let Term::Int(a) = *t else { unreachable!("validated") };
        if i % 2 == 1 {
            q += a as i128 * p;
        } else {
            p += a as i128 * q;
        }
    }
    let g = {
        let (mut a, mut b) = (p.abs(), q.abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    TangleFraction::new((p / g) as i64, (q / g) as i64).expect("nonzero vector")
}

/// Canonical odd-length expansion: Euclid on `|p|/q` read from the integer
/// part outward, padded in front with `∞` when the length is even, and
/// negated termwise for negative fractions.
pub fn fraction_to_cf(f: TangleFraction) -> ContinuedFraction {
    if f.is_infinity() {
        return ContinuedFraction { terms: vec![Term::Infinity] };
    }
    let (mut p, mut q) = (f.p.abs(), f.q);
    let mut euclid = Vec::new();
    loop {
        euclid.push(p / q);
        let r = p % q;
        if r == 0 {
            break;
        }
        (p, q) = (q, r);
    }
    let sign = if f.p < 0 { -1 } else { 1 };
    let mut terms: Vec<Term> = euclid.iter().rev().map(|&a| Term::Int(sign * a)).collect();
    if terms.len() % 2 == 0 {
        terms.insert(0, Term::Infinity);
    }
    ContinuedFraction { terms }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrivialTangle {
    /// `[0]`: NW–NE and SW–SE.
    Horizontal,
    /// `1/[0]`: NW–SW and NE–SE.
    Vertical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwistOp {
    HorizontalAdd,
    VerticalMul,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Twist {
    pub op: TwistOp,
    pub count: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TangleWord {
    pub start: TrivialTangle,
    pub ops: Vec<Twist>,
}

pub fn cf_to_word(cf: &ContinuedFraction) -> TangleWord {
    let start = match cf.terms[0] {
        Term::Infinity => TrivialTangle::Vertical,
        Term::Int(_) => TrivialTangle::Horizontal,
    };
    let ops = cf
        .terms
        .iter()
        .enumerate()
        .filter_map(|(i, t)| match *t {
            Term::Int(a) if a != 0 => Some(Twist {
                op: if i % 2 == 0 { TwistOp::HorizontalAdd } else { TwistOp::VerticalMul },
                count: a,
            }),
            _ => None,
        })
        .collect();
    TangleWord { start, ops }
}

impl TangleWord {
    pub fn for_fraction(f: TangleFraction) -> Self {
        cf_to_word(&fraction_to_cf(f))
    }

    pub fn crossing_count(&self) -> u64 {
        self.ops.iter().map(|t| t.count.unsigned_abs()).sum()
    }

    /// Compiles to a diagram whose single slot is the tangle boundary.
    pub fn compile(&self) -> LinkDiagram {
        let mut next = 2u32;
        let mut fresh = || {
            next += 1;
            next
        };
        let mut ports = match self.start {
            TrivialTangle::Horizontal => [1, 1, 2, 2],
            TrivialTangle::Vertical => [1, 2, 1, 2],
        };
        let mut crossings = Vec::new();
        for t in &self.ops {
            for _ in 0..t.count.abs() {
                let (u, v) = (fresh(), fresh());
                let positive = t.count > 0;
                match t.op {
                    TwistOp::HorizontalAdd => {
                        let (x, y) = (ports[NE], ports[SE]);
                        crossings.push(if positive { [x, y, v, u] } else { [y, v, u, x] });
                        ports[NE] = u;
                        ports[SE] = v;
                    }
                    TwistOp::VerticalMul => {
                        let (x, y) = (ports[SW], ports[SE]);
                        crossings.push(if positive { [x, u, v, y] } else { [u, v, y, x] });
                        ports[SW] = u;
                        ports[SE] = v;
                    }
                }
            }
        }
        LinkDiagram::from_raw(crossings, vec![ports], 0).expect("compiled tangle is valid")
    }
}

/// Which boundary endpoints the two strands join.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConnectivityClass {
    AbCd,
    AcBd,
    AdBc,
}

impl ConnectivityClass {
    /// From `(p mod 2, q mod 2)`.
    pub fn from_parity(p_odd: bool, q_odd: bool) -> Option<Self> {
        match (p_odd, q_odd) {
            (false, true) => Some(ConnectivityClass::AbCd),
            (true, false) => Some(ConnectivityClass::AcBd),
            (true, true) => Some(ConnectivityClass::AdBc),
            (false, false) => None,
        }
    }

    pub fn pairs(self) -> [(usize, usize); 2] {
        match self {
            ConnectivityClass::AbCd => [(NW, NE), (SW, SE)],
            ConnectivityClass::AcBd => [(NW, SW), (NE, SE)],
            ConnectivityClass::AdBc => [(NW, SE), (NE, SW)],
        }
    }

    fn from_pair(x: usize, y: usize) -> Self {
        match (x.min(y), x.max(y)) {
            (NW, NE) | (SW, SE) => ConnectivityClass::AbCd,
            (NW, SW) | (NE, SE) => ConnectivityClass::AcBd,
            _ => ConnectivityClass::AdBc,
        }
    }
}

impl fmt::Display for ConnectivityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConnectivityClass::AbCd => "AB|CD",
            ConnectivityClass::AcBd => "AC|BD",
            ConnectivityClass::AdBc => "AD|BC",
        })
    }
}

pub fn connectivity(f: TangleFraction) -> ConnectivityClass {
    ConnectivityClass::from_parity(f.p % 2 != 0, f.q % 2 != 0).expect("reduced fraction")
}

/// Connectivity read off by tracing the compiled word.
pub fn traced_connectivity(w: &TangleWord) -> ConnectivityClass {
    let d = w.compile();
    let occ = d.occurrences();
    let strand = d
        .strands()
        .into_iter()
        .find(|s| !s.closed)
        .expect("a rational tangle has two open strands");
    let (a, b) = strand.ends(&occ).expect("open strand");
    debug_assert!(matches!((a.site, b.site), (Site::Slot(0), Site::Slot(0))));
    ConnectivityClass::from_pair(a.pos, b.pos)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientationClass {
    Parallel,
    Antiparallel,
}

impl OrientationClass {
    /// Boundary directions of the Figure-8 slot for this class: whether the
    /// flow enters the slot at NW, NE, SW, SE. Parallel strands leave through
    /// both top endpoints; antiparallel ones leave through NW and SE.
    pub fn boundary(self) -> [bool; 4] {
        match self {
            OrientationClass::Parallel => [false, false, true, true],
            OrientationClass::Antiparallel => [false, true, true, false],
        }
    }
}

impl fmt::Display for OrientationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrientationClass::Parallel => "parallel",
            OrientationClass::Antiparallel => "antiparallel",
        })
    }
}

impl FromStr for OrientationClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parallel" => Ok(OrientationClass::Parallel),
            "antiparallel" => Ok(OrientationClass::Antiparallel),
            _ => Err(Error::Parse {
                token: s.to_string(),
                reason: "expected parallel or antiparallel".into(),
            }),
        }
    }
}

/// Whether a tangle of this connectivity joins every exit to an entry.
pub fn compatible_with_boundary(enters: [bool; 4], f: TangleFraction) -> bool {
    connectivity(f).pairs().iter().all(|&(x, y)| enters[x] != enters[y])
}

pub fn orientation_compatible(t: &TangleTemplate, slot: usize, f: TangleFraction) -> Result<bool> {
    let enters = t.diagram().slot_flags(slot)?;
    Ok(compatible_with_boundary(enters, f))
}

/// Relative direction of the two strands entering a slot.
pub fn slot_orientation_class(t: &TangleTemplate, slot: usize) -> Result<OrientationClass> {
    let e = t.diagram().slot_flags(slot)?;
    Ok(if e[NW] == e[NE] { OrientationClass::Parallel } else { OrientationClass::Antiparallel })
}

/// The class forced on an odd-denominator fraction in the Figure-8 template.
pub fn orientation_class(f: TangleFraction) -> Result<OrientationClass> {
    if f.q % 2 == 0 {
        return Err(Error::Unconstrained(f));
    }
    Ok(if f.p % 2 == 0 { OrientationClass::Antiparallel } else { OrientationClass::Parallel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{figure_eight, figure_eight_oriented};

    fn fr(s: &str) -> TangleFraction {
        s.parse().unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(TangleFraction::new(2, -4).unwrap(), fr("-1/2"));
        assert_eq!(TangleFraction::new(-3, 0).unwrap(), TangleFraction::INFINITY);
        assert!(TangleFraction::new(0, 0).is_err());
        assert_eq!(fr("1/0").to_string(), "1/0");
    }

    #[test]
    fn continued_fractions() {
        let cf = |s: &str| s.parse::<ContinuedFraction>().unwrap();
        assert_eq!(cf_to_fraction(&cf("(inf)")), TangleFraction::INFINITY);
        assert_eq!(cf_to_fraction(&cf("(0)")), TangleFraction::ZERO);
        assert_eq!(cf_to_fraction(&cf("(2,3,1)")), fr("9/7"));
        let f = cf_to_fraction(&cf("(2,-2,3)"));
        assert_eq!(cf_to_fraction(&fraction_to_cf(f)), f);
        assert_eq!(fraction_to_cf(fr("1/0")).to_string(), "(inf)");
        assert_eq!(fraction_to_cf(fr("9/7")).to_string(), "(2,3,1)");
        assert!("(1,2)".parse::<ContinuedFraction>().is_err());
        assert!("(1,0,2)".parse::<ContinuedFraction>().is_err());
        assert!("(0,1,2)".parse::<ContinuedFraction>().is_err());
    }

    #[test]
    fn words() {
        let w = cf_to_word(&"(0)".parse().unwrap());
        assert_eq!((w.start, w.ops.len()), (TrivialTangle::Horizontal, 0));
        let w = cf_to_word(&"(3)".parse().unwrap());
        assert_eq!(w.ops, vec![Twist { op: TwistOp::HorizontalAdd, count: 3 }]);
        let w = cf_to_word(&"(2,3,1)".parse().unwrap());
        assert_eq!(w.compile().crossing_count(), 6);
    }

    #[test]
    fn connectivity_examples() {
        assert_eq!(connectivity(fr("0/1")), ConnectivityClass::AbCd);
        assert_eq!(connectivity(fr("1/0")), ConnectivityClass::AcBd);
        assert_eq!(connectivity(fr("1/1")), ConnectivityClass::AdBc);
        for f in TangleFraction::enumerate(6) {
            assert_eq!(traced_connectivity(&TangleWord::for_fraction(f)), connectivity(f), "{f}");
        }
    }

    #[test]
    fn orientation_examples() {
        let par = figure_eight_oriented(OrientationClass::Parallel);
        let anti = figure_eight_oriented(OrientationClass::Antiparallel);
        assert!(orientation_compatible(&par, 0, fr("1/2")).unwrap());
        assert!(orientation_compatible(&anti, 0, fr("1/2")).unwrap());
        assert!(!orientation_compatible(&anti, 0, fr("1/1")).unwrap());
        assert!(orientation_compatible(&par, 0, fr("1/1")).unwrap());
        assert_eq!(slot_orientation_class(&par, 0).unwrap(), OrientationClass::Parallel);
        assert_eq!(slot_orientation_class(&anti, 0).unwrap(), OrientationClass::Antiparallel);
        assert!(matches!(orientation_compatible(&figure_eight(), 0, fr("1/1")), Err(Error::NotOriented)));
        assert_eq!(orientation_class(fr("1/3")).unwrap(), OrientationClass::Parallel);
        assert_eq!(orientation_class(fr("2/3")).unwrap(), OrientationClass::Antiparallel);
        assert!(matches!(orientation_class(fr("1/2")), Err(Error::Unconstrained(_))));
    }

    #[test]
    fn figure_eight_determinant_is_denominator() {
        let t = figure_eight();
        for f in TangleFraction::enumerate(7) {
            let d = t.fill(0, f).unwrap();
            assert!(d.is_planar(), "{f}");
            assert_eq!(crate::coloring::determinant(&d).unwrap(), f.q() as u64, "{f}");
        }
    }
}
