//! Skein-derivation certificates: generation for tangle insertions into the
//! Figure-8 template, lifting through connected sums, and an independent
//! verifier.
//!
//! The verifier recomputes every identity from raw numerators and
//! denominators and does not call into the generator or the Farey helpers.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coloring::determinant;
use crate::corpus::{figure_eight, figure_eight_oriented};
use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::skein::{
    farey_neighbor, mod_inverse, oriented_triple, unoriented_triple, Coefficients, FareyPair,
    SkeinTriple, TangleTemplate, TripleKind,
};
use crate::tangle::{orientation_class, orientation_compatible, OrientationClass, TangleFraction};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: TripleKind,
    pub ambient: Ambient,
    pub nodes: Vec<Node>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ambient {
    pub pd: String,
    pub coeffs: Coefficients,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summand: Option<Summand>,
}

/// The second summand of a lifted certificate and its own certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub pd: String,
    pub certificate: Box<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub frac: TangleFraction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orient: Option<OrientationClass>,
    pub just: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Justification {
    Base {
        base: String,
    },
    Triple {
        triple: [usize; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        resolution: Option<usize>,
    },
}

pub const UNKNOT: &str = "unknot";
pub const HOPF: &str = "hopf";

impl Certificate {
    pub fn target(&self) -> Option<TangleFraction> {
        self.nodes.last().map(|n| n.frac)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The ambient template rebuilt from the recorded PD with freshly
    /// fitted coefficients.
    pub fn ambient_template(&self) -> Result<TangleTemplate> {
        TangleTemplate::parse(&self.ambient.pd)?.fitted(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrientedTarget {
    pub fraction: TangleFraction,
    pub orientation: Option<OrientationClass>,
}

impl OrientedTarget {
    /// Resolves the class: forced by parity for odd denominators, required
    /// explicitly for even ones.
    pub fn class(&self) -> Result<OrientationClass> {
        match (orientation_class(self.fraction), self.orientation) {
            (Ok(forced), Some(c)) if forced != c => Err(Error::IncompatibleOrientation(self.fraction)),
            (Ok(forced), _) => Ok(forced),
            (Err(_), Some(c)) => Ok(c),
            (Err(_), None) => Err(Error::AmbiguousOrientation(self.fraction)),
        }
    }
}

enum Plan {
    Base(&'static str),
    Unoriented(FareyPair),
    Oriented(SkeinTriple),
}

struct Builder {
    nodes: Vec<Node>,
    index: HashMap<TangleFraction, usize>,
    tag: Option<OrientationClass>,
}

impl Builder {
    /// Post-order insertion with an explicit stack.
    fn build(&mut self, target: TangleFraction, plan: impl Fn(TangleFraction) -> Result<Plan>) -> Result<usize> {
        let mut stack = vec![(target, false)];
        let mut plans: HashMap<TangleFraction, Plan> = HashMap::new();
        while let Some((f, expanded)) = stack.pop() {
            if self.index.contains_key(&f) {
                continue;
            }
            if !expanded {
                let pl = plan(f)?;
                stack.push((f, true));
                let deps = match &pl {
                    Plan::Base(_) => vec![],
                    Plan::Unoriented(pair) => vec![pair.second(), pair.first()],
                    Plan::Oriented(t) => vec![t.resolution.expect("oriented"), t.partner.expect("oriented")],
                };
                plans.insert(f, pl);
                for d in deps {
                    if !self.index.contains_key(&d) {
                        stack.push((d, false));
                    }
                }
                continue;
            }
            let just = match &plans[&f] {
                Plan::Base(name) => Justification::Base { base: name.to_string() },
                Plan::Unoriented(pair) => Justification::Triple {
                    triple: [self.index[&pair.first()], self.index[&pair.second()]],
                    resolution: None,
                },
                Plan::Oriented(t) => {
                    let (n, r) = (t.partner.expect("oriented"), t.resolution.expect("oriented"));
                    Justification::Triple { triple: [self.index[&n], self.index[&r]], resolution: Some(self.index[&r]) }
                }
            };
            self.index.insert(f, self.nodes.len());
            self.nodes.push(Node { frac: f, orient: self.tag, just });
        }
        Ok(self.index[&target])
    }
}

/// Parents of `j/k` (k ≥ 2) whose mediant is `j/k`.
fn span_parents(f: TangleFraction) -> FareyPair {
    let (j, k) = (f.p(), f.q());
    let q = (k - mod_inverse(j, k)) % k;
    let p = (q * j + 1) / k;
    let r = (j * (k - q) - 1) / k;
    let s = k - q;
    let pair = FareyPair::new(
        TangleFraction::new(p, q).expect("nonzero"),
        TangleFraction::new(r, s).expect("nonzero"),
    )
    .expect("parents are neighbours");
    debug_assert_eq!(pair.mediant(), f);
    pair
}

/// Derives `target` in the Figure-8 template from unknot insertions `n/1`.
pub fn span_certificate(target: TangleFraction) -> Result<Certificate> {
    let ambient = figure_eight();
    let coeffs = ambient.coeffs(0).expect("fitted");
    if coeffs.eval(target) == 0 {
        return Err(Error::ZeroLocus(target));
    }
    let mut b = Builder { nodes: Vec::new(), index: HashMap::new(), tag: None };
    b.build(target, |f| {
        Ok(if f.q() == 1 { Plan::Base(UNKNOT) } else { Plan::Unoriented(span_parents(f)) })
    })?;
    let cert = Certificate {
        kind: TripleKind::Unoriented,
        ambient: Ambient { pd: ambient.diagram().to_string(), coeffs, summand: None },
        nodes: b.nodes,
    };
    for n in &cert.nodes {
        if let Justification::Triple { triple: [i, j], .. } = n.just {
            let t = unoriented_triple(&FareyPair::new(cert.nodes[i].frac, cert.nodes[j].frac)?);
            if t.mediant() != n.frac || t.members.iter().any(|&m| coeffs.eval(m) == 0) {
                return Err(Error::Internal(format!("bad unoriented step at {}", n.frac)));
            }
        }
    }
    Ok(cert)
}

/// The Farey pair whose mediant is `f` in the oriented recursion, for
/// `f = k/(ki + j)` with `k ≥ 1`.
fn oriented_parents(f: TangleFraction) -> FareyPair {
    let (k, q) = (f.p(), f.q());
    if k == 1 {
        let n = q;
        return FareyPair::new(TangleFraction::new(1, n - 1).expect("n ≥ 3"), TangleFraction::ZERO)
            .expect("neighbours");
    }
    let (i, j) = (q / k, q % k);
    let p1 = mod_inverse(j, k);
    let q1 = (p1 * k * i + p1 * j - 1) / k;
    let r = k - p1;
    let s = (r * k * i + r * j + 1) / k;
    FareyPair::new(TangleFraction::new(p1, q1).expect("nonzero"), TangleFraction::new(r, s).expect("nonzero"))
        .expect("parents are neighbours")
}

/// Derives an oriented target in the Figure-8 template from unknot and Hopf
/// insertions, using oriented skein triples only.
pub fn oriented_span_certificate(target: OrientedTarget) -> Result<Certificate> {
    let class = target.class()?;
    let ambient = figure_eight_oriented(class);
    let coeffs = ambient.coeffs(0).expect("fitted");
    let f = target.fraction;
    if coeffs.eval(f) == 0 {
        return Err(Error::ZeroLocus(f));
    }
    if !orientation_compatible(&ambient, 0, f)? {
        return Err(Error::IncompatibleOrientation(f));
    }
    let mut b = Builder { nodes: Vec::new(), index: HashMap::new(), tag: Some(class) };
    b.build(f, |g| {
        if g.q() == 1 {
            return Ok(Plan::Base(UNKNOT));
        }
        if g.q() == 2 {
            return Ok(Plan::Base(HOPF));
        }
        let mirrored = g.p() < 0;
        let pair = oriented_parents(if mirrored { g.mirror() } else { g });
        let pair = if mirrored {
            FareyPair::new(pair.first().mirror(), pair.second().mirror())?
        } else {
            pair
        };
        let t = oriented_triple(&pair, &ambient, 0)?;
        if t.mediant() != g {
            return Err(Error::Internal(format!("oriented parents of {g} do not sum to it")));
        }
        for m in [t.mediant(), t.partner.expect("oriented"), t.resolution.expect("oriented")] {
            if coeffs.eval(m) == 0 {
                return Err(Error::Internal(format!("oriented step for {g} passes through {m}")));
            }
        }
        Ok(Plan::Oriented(t))
    })?;
    Ok(Certificate {
        kind: TripleKind::Oriented,
        ambient: Ambient { pd: figure_eight().diagram().to_string(), coeffs, summand: None },
        nodes: b.nodes,
    })
}

/// Lifts every node of `c1` to its connected sum with `k2`; base nodes are
/// then justified by `c2`, a certificate for `k2`.
pub fn connected_sum_certificate(c1: &Certificate, c2: &Certificate, k2: &LinkDiagram) -> Result<Certificate> {
    if c1.kind == TripleKind::Oriented {
        return Err(Error::Oriented);
    }
    if c1.ambient.summand.is_some() {
        return Err(Error::Internal("certificate is already lifted".into()));
    }
    if determinant(k2)? == 0 {
        return Err(Error::ZeroDeterminantSummand);
    }
    let base = TangleTemplate::parse(&c1.ambient.pd)?;
    let d = base.diagram();
    let a1 = d.arcs().first().copied().unwrap_or(1);
    let a2 = k2.arcs().first().copied().unwrap_or(1);
    let lifted = TangleTemplate::new(d.connected_sum(a1, k2, a2)?)?.fitted(0)?;
    Ok(Certificate {
        kind: c1.kind,
        ambient: Ambient {
            pd: lifted.diagram().to_string(),
            coeffs: lifted.coeffs(0).expect("fitted"),
            summand: Some(Summand { pd: k2.to_string(), certificate: Box::new(c2.clone()) }),
        },
        nodes: c1.nodes.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub m: u64,
    pub triple: SkeinTriple,
}

/// A triple through `f` whose companions `(p′+mp)/(q′+mq)` avoid the zero
/// locus, with the least admissible `m ≥ m_min`. For oriented templates the
/// companions are `x_{m±1}` with `f` as the oriented resolution.
pub fn component_reduction_step(t: &TangleTemplate, slot: usize, f: TangleFraction, m_min: u64) -> Result<ReductionStep> {
    let coeffs = t.coeffs(slot).ok_or(Error::NotFitted(slot))?;
    let nb = farey_neighbor(f);
    let x = |m: u64| {
        let m = m as i64;
        TangleFraction::new(nb.p() + m * f.p(), nb.q() + m * f.q()).expect("nonzero")
    };
    let zero = |g: TangleFraction| coeffs.eval(g) == 0;
    if !t.oriented() {
        for m in m_min.. {
            let pair = FareyPair::new(f, x(m))?;
            if !zero(pair.second()) && !zero(pair.mediant()) {
                return Ok(ReductionStep { m, triple: unoriented_triple(&pair) });
            }
        }
        unreachable!("at most one fraction is excluded");
    }
    if !orientation_compatible(t, slot, f)? {
        return Err(Error::IncompatibleOrientation(f));
    }
    for m in m_min.max(1).. {
        let pair = FareyPair::new(x(m), f)?;
        if orientation_compatible(t, slot, pair.first())? {
            continue;
        }
        if zero(pair.mediant()) || zero(pair.partner()) {
            continue;
        }
        return Ok(ReductionStep { m, triple: oriented_triple(&pair, t, slot)? });
    }
    unreachable!("companions alternate classes and at most one fraction is excluded");
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject { check: u8, node: Option<usize>, reason: String },
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        matches!(self, Verdict::Accept)
    }

    pub fn failed_check(&self) -> Option<u8> {
        match self {
            Verdict::Accept => None,
            Verdict::Reject { check, .. } => Some(*check),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => write!(f, "ACCEPT"),
            Verdict::Reject { check, node: Some(i), reason } => write!(f, "REJECT check {check} node {i}: {reason}"),
            Verdict::Reject { check, node: None, reason } => write!(f, "REJECT check {check}: {reason}"),
        }
    }
}

fn reject(check: u8, node: Option<usize>, reason: impl Into<String>) -> Verdict {
    Verdict::Reject { check, node, reason: reason.into() }
}

/// Raw vector helpers used only by the verifier.
mod raw {
    pub fn cross(a: (i64, i64), b: (i64, i64)) -> i64 {
        a.0 * b.1 - a.1 * b.0
    }

    pub fn reduce(v: (i64, i64)) -> Option<(i64, i64)> {
        let (mut x, mut y) = (v.0.abs(), v.1.abs());
        while y != 0 {
            (x, y) = (y, x % y);
        }
        if x == 0 {
            return None;
        }
        let (p, q) = (v.0 / x, v.1 / x);
        Some(if q < 0 || (q == 0 && p < 0) { (-p, -q) } else { (p, q) })
    }

    /// Whether the fraction's endpoint pairing respects the class: parallel
    /// forbids the pairing of (p even, q odd), antiparallel that of
    /// (p odd, q odd).
    pub fn compatible(v: (i64, i64), parallel: bool) -> bool {
        let (p_odd, q_odd) = (v.0 % 2 != 0, v.1 % 2 != 0);
        if parallel {
            !(!p_odd && q_odd)
        } else {
            !(p_odd && q_odd)
        }
    }
}

/// Checks a certificate against the ambient template:
/// 1 DAG order, 2 skein identities, 3 nonzero determinants, 4 orientation,
/// 5 base set. The first failing check is reported.
pub fn verify_certificate(c: &Certificate, ambient: &TangleTemplate) -> Verdict {
    let Some(coeffs) = ambient.coeffs(0) else {
        return reject(3, None, "ambient template has no fitted coefficients");
    };
    let (a, b) = (coeffs.a as i128, coeffs.b as i128);
    let det = |v: (i64, i64)| (b * v.0 as i128 - a * v.1 as i128).unsigned_abs();
    let v = |i: usize| (c.nodes[i].frac.p(), c.nodes[i].frac.q());
    let oriented = c.kind == TripleKind::Oriented;

    if c.nodes.is_empty() {
        return reject(1, None, "no nodes");
    }
    for (m, node) in c.nodes.iter().enumerate() {
        if let Justification::Triple { triple: [i, j], resolution } = node.just {
            if i >= m || j >= m || i == j {
                return reject(1, Some(m), format!("parents {i}, {j} are not distinct earlier nodes"));
            }
            if let Some(r) = resolution {
                if r != i && r != j {
                    return reject(1, Some(m), format!("resolution {r} is not a parent"));
                }
            }
        }
    }

    for (m, node) in c.nodes.iter().enumerate() {
        let Justification::Triple { triple: [i, j], resolution } = node.just else { continue };
        let (vm, vi, vj) = (v(m), v(i), v(j));
        if !oriented {
            let ok = [(vi, vj), (vi, vm), (vj, vm)].iter().all(|&(x, y)| raw::cross(x, y).abs() == 1);
            if !ok {
                return reject(2, Some(m), "members are not pairwise Farey neighbours");
            }
            continue;
        }
        let Some(r) = resolution else {
            return reject(2, Some(m), "oriented step without a marked resolution");
        };
        let (vr, vn) = if r == i { (vi, vj) } else { (vj, vi) };
        if raw::cross(vm, vn).abs() != 2 {
            return reject(2, Some(m), "derived node and partner do not differ by a crossing change");
        }
        let halves = [((vm.0 + vn.0) / 2, (vm.1 + vn.1) / 2), ((vm.0 - vn.0) / 2, (vm.1 - vn.1) / 2)];
        if !halves.iter().any(|&h| raw::reduce(h) == Some(vr)) {
            return reject(2, Some(m), "resolution is not a smoothing of the crossing change");
        }
    }

    if coeffs != c.ambient.coeffs {
        return reject(3, None, format!("recorded coefficients {} differ from the ambient {}", c.ambient.coeffs, coeffs));
    }
    for m in 0..c.nodes.len() {
        if det(v(m)) == 0 {
            return reject(3, Some(m), format!("{} has determinant 0", c.nodes[m].frac));
        }
    }

    if oriented {
        for (m, node) in c.nodes.iter().enumerate() {
            let Some(tag) = node.orient else {
                return reject(4, Some(m), "missing orientation tag");
            };
            let parallel = tag == OrientationClass::Parallel;
            if !raw::compatible(v(m), parallel) {
                return reject(4, Some(m), format!("{} is incompatible with {tag}", node.frac));
            }
            if let Justification::Triple { triple: [i, j], resolution: Some(r) } = node.just {
                if c.nodes[i].orient != Some(tag) || c.nodes[j].orient != Some(tag) {
                    return reject(4, Some(m), "triple members carry different orientation tags");
                }
                let other = if r == i { j } else { i };
                let (vm, vo) = (v(m), v(other));
                let halves = [((vm.0 + vo.0) / 2, (vm.1 + vo.1) / 2), ((vm.0 - vo.0) / 2, (vm.1 - vo.1) / 2)];
                let unmarked = halves.iter().filter_map(|&h| raw::reduce(h)).find(|&h| h != v(r));
                if let Some(u) = unmarked {
                    if raw::compatible(u, parallel) {
                        return reject(4, Some(m), "the unmarked smoothing is also compatible");
                    }
                }
            }
        }
    }

    for (m, node) in c.nodes.iter().enumerate() {
        let Justification::Base { base } = &node.just else { continue };
        let q = node.frac.q();
        let ok = match (oriented, base.as_str()) {
            (_, UNKNOT) => q == 1,
            (true, HOPF) => q == 2,
            _ => false,
        };
        if !ok {
            return reject(5, Some(m), format!("base `{base}` is not allowed at {}", node.frac));
        }
    }
    if let Some(s) = &c.ambient.summand {
        if let Err(reason) = verify_summand(s) {
            return reject(5, None, reason);
        }
    }
    Verdict::Accept
}

fn verify_summand(s: &Summand) -> std::result::Result<(), String> {
    let k2: LinkDiagram = s.pd.parse().map_err(|e| format!("summand: {e}"))?;
    let det_k2 = determinant(&k2).map_err(|e| format!("summand: {e}"))?;
    let inner = &s.certificate;
    let template = inner.ambient_template().map_err(|e| format!("summand ambient: {e}"))?;
    let verdict = verify_certificate(inner, &template);
    if !verdict.accepted() {
        return Err(format!("summand certificate: {verdict}"));
    }
    let target = inner.target().expect("accepted certificates are nonempty");
    let certified = template.coeffs(0).expect("fitted").eval(target);
    if certified != det_k2 {
        return Err(format!("summand determinant {det_k2} differs from the certified link's {certified}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::entry;
    use crate::skein::FareyPair;
    use crate::tangle::connectivity;

    fn fr(p: i64, q: i64) -> TangleFraction {
        TangleFraction::new(p, q).unwrap()
    }

    fn node_of(c: &Certificate, f: TangleFraction) -> &Node {
        c.nodes.iter().find(|n| n.frac == f).unwrap()
    }

    fn parents(c: &Certificate, f: TangleFraction) -> Vec<TangleFraction> {
        match node_of(c, f).just {
            Justification::Triple { triple, .. } => triple.iter().map(|&i| c.nodes[i].frac).collect(),
            Justification::Base { .. } => vec![],
        }
    }

    fn oriented(p: i64, q: i64, class: OrientationClass) -> Certificate {
        oriented_span_certificate(OrientedTarget { fraction: fr(p, q), orientation: Some(class) }).unwrap()
    }

    #[test]
    fn integers_are_unknot_bases() {
        for n in -10..=10 {
            let c = span_certificate(TangleFraction::integer(n)).unwrap();
            assert_eq!(c.nodes.len(), 1);
            assert_eq!(c.nodes[0].just, Justification::Base { base: UNKNOT.into() });
        }
    }

    #[test]
    fn two_fifths_splits_into_half_and_third() {
        let c = span_certificate(fr(2, 5)).unwrap();
        assert_eq!(c.target(), Some(fr(2, 5)));
        assert_eq!(parents(&c, fr(2, 5)), vec![fr(1, 2), fr(1, 3)]);
        assert!(verify_certificate(&c, &figure_eight()).accepted());
    }

    #[test]
    fn zero_locus_is_not_a_target() {
        assert!(matches!(span_certificate(TangleFraction::INFINITY), Err(Error::ZeroLocus(_))));
    }

    #[test]
    fn json_round_trip() {
        let c = oriented(3, 7, OrientationClass::Parallel);
        let back = Certificate::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert!(c.to_json().contains("\"resolution\""));
        assert_eq!(span_certificate(fr(5, 8)).unwrap().to_json(), span_certificate(fr(5, 8)).unwrap().to_json());
    }

    #[test]
    fn hopf_insertions_are_bases() {
        for class in [OrientationClass::Parallel, OrientationClass::Antiparallel] {
            for p in [1, -1] {
                let c = oriented(p, 2, class);
                assert_eq!(c.nodes.len(), 1);
                assert_eq!(c.nodes[0].just, Justification::Base { base: HOPF.into() });
                assert_eq!(c.nodes[0].orient, Some(class));
            }
        }
    }

    #[test]
    fn one_fifth_climbs_the_ladder() {
        let c = oriented(1, 5, OrientationClass::Parallel);
        for f in [fr(1, 3), fr(1, 4), fr(1, 5)] {
            assert!(c.nodes.iter().any(|n| n.frac == f), "missing {f}");
        }
        assert!(parents(&c, fr(1, 5)).contains(&fr(1, 3)));
        assert!(verify_certificate(&c, &figure_eight()).accepted());
    }

    #[test]
    fn oriented_two_fifths_uses_corrected_parents() {
        let pair = FareyPair::new(fr(1, 2), fr(1, 3)).unwrap();
        assert_eq!(pair.mediant(), fr(2, 5));
        assert_eq!(pair.partner(), fr(0, 1));
        let c = oriented(2, 5, OrientationClass::Antiparallel);
        let ps = parents(&c, fr(2, 5));
        assert_eq!(ps[0], fr(0, 1));
        assert!(ps[1] == fr(1, 2) || ps[1] == fr(1, 3));
        assert!(verify_certificate(&c, &figure_eight()).accepted());
    }

    #[test]
    fn odd_denominators_force_the_class() {
        let t = OrientedTarget { fraction: fr(1, 3), orientation: None };
        assert_eq!(t.class().unwrap(), OrientationClass::Parallel);
        let bad = OrientedTarget { fraction: fr(1, 3), orientation: Some(OrientationClass::Antiparallel) };
        assert!(oriented_span_certificate(bad).is_err());
        let even = OrientedTarget { fraction: fr(1, 4), orientation: None };
        assert!(matches!(even.class(), Err(Error::AmbiguousOrientation(_))));
    }

    #[test]
    fn reordered_nodes_fail_dag_order() {
        let mut c = span_certificate(fr(2, 5)).unwrap();
        c.nodes.swap(0, 4);
        assert_eq!(verify_certificate(&c, &figure_eight()).failed_check(), Some(1));
    }

    #[test]
    fn forged_parents_fail_farey_check() {
        let mut c = span_certificate(fr(3, 7)).unwrap();
        let last = c.nodes.len() - 1;
        let n = c.nodes.len();
        c.nodes.push(Node { frac: fr(5, 7), orient: None, just: Justification::Triple { triple: [0, last], resolution: None } });
        let v = verify_certificate(&c, &figure_eight());
        assert_eq!(v.failed_check(), Some(2), "{v}");
        assert!(matches!(v, Verdict::Reject { node: Some(m), .. } if m == n));
    }

    #[test]
    fn routing_through_infinity_fails_determinant_check() {
        // 1/1 from 0/1 and 1/0 is a valid Farey triple, but 1/0 is split
        let nodes = vec![
            Node { frac: fr(0, 1), orient: None, just: Justification::Base { base: UNKNOT.into() } },
            Node { frac: TangleFraction::INFINITY, orient: None, just: Justification::Base { base: UNKNOT.into() } },
            Node { frac: fr(1, 1), orient: None, just: Justification::Triple { triple: [0, 1], resolution: None } },
        ];
        let amb = figure_eight();
        let c = Certificate {
            kind: TripleKind::Unoriented,
            ambient: Ambient { pd: amb.diagram().to_string(), coeffs: amb.coeffs(0).unwrap(), summand: None },
            nodes,
        };
        let v = verify_certificate(&c, &amb);
        assert_eq!(v.failed_check(), Some(3), "{v}");
    }

    #[test]
    fn mismatched_ambient_fails_determinant_check() {
        let mut c = span_certificate(fr(2, 5)).unwrap();
        c.ambient.coeffs = Coefficients::new(2, 1);
        assert_eq!(verify_certificate(&c, &figure_eight()).failed_check(), Some(3));
    }

    #[test]
    fn missing_tag_fails_orientation_check() {
        let mut c = oriented(3, 5, OrientationClass::Parallel);
        c.nodes[0].orient = None;
        assert_eq!(verify_certificate(&c, &figure_eight()).failed_check(), Some(4));
        let mut c = oriented(3, 5, OrientationClass::Parallel);
        for n in &mut c.nodes {
            n.orient = Some(OrientationClass::Antiparallel);
        }
        assert_eq!(verify_certificate(&c, &figure_eight()).failed_check(), Some(4));
    }

    #[test]
    fn mutated_base_fails_base_check() {
        let mut c = span_certificate(fr(2, 5)).unwrap();
        c.nodes[0].just = Justification::Base { base: HOPF.into() };
        assert_eq!(verify_certificate(&c, &figure_eight()).failed_check(), Some(5));
        let mut c = span_certificate(fr(2, 5)).unwrap();
        let i = c.nodes.iter().position(|n| n.frac == fr(1, 2)).unwrap();
        c.nodes[i].just = Justification::Base { base: UNKNOT.into() };
        assert_eq!(verify_certificate(&c, &figure_eight()).failed_check(), Some(5));
    }

    fn lifted_dets(c: &Certificate) -> Vec<u64> {
        let t = c.ambient_template().unwrap();
        c.nodes.iter().map(|n| t.det_at(0, n.frac).unwrap()).collect()
    }

    #[test]
    fn connected_sum_multiplies_determinants() {
        let c1 = span_certificate(fr(3, 8)).unwrap();
        let base = lifted_dets(&c1);
        for (name, c2, factor) in [("3_1", fr(1, 3), 3), ("hopf", fr(1, 2), 2), ("unknot", fr(0, 1), 1)] {
            let k2 = &entry(name).unwrap().diagram;
            let lifted = connected_sum_certificate(&c1, &span_certificate(c2).unwrap(), k2).unwrap();
            let amb = lifted.ambient_template().unwrap();
            assert!(verify_certificate(&lifted, &amb).accepted(), "{name}");
            let dets: Vec<u64> = base.iter().map(|d| d * factor).collect();
            assert_eq!(lifted_dets(&lifted), dets, "{name}");
        }
    }

    #[test]
    fn hopf_summand_adds_a_component() {
        let c1 = span_certificate(fr(2, 3)).unwrap();
        let hopf = &entry("hopf").unwrap().diagram;
        let lifted = connected_sum_certificate(&c1, &span_certificate(fr(1, 2)).unwrap(), hopf).unwrap();
        let (before, after) = (c1.ambient_template().unwrap(), lifted.ambient_template().unwrap());
        for n in &c1.nodes {
            let k = before.fill(0, n.frac).unwrap().components().unwrap();
            assert_eq!(after.fill(0, n.frac).unwrap().components().unwrap(), k + 1);
        }
    }

    #[test]
    fn split_summand_is_refused() {
        let c1 = span_certificate(fr(2, 3)).unwrap();
        let unlink = &entry("unlink2").unwrap().diagram;
        let r = connected_sum_certificate(&c1, &span_certificate(fr(1, 2)).unwrap(), unlink);
        assert!(matches!(r, Err(Error::ZeroDeterminantSummand)));
    }

    #[test]
    fn wrong_summand_certificate_is_rejected() {
        let c1 = span_certificate(fr(2, 3)).unwrap();
        let trefoil = &entry("3_1").unwrap().diagram;
        let lifted = connected_sum_certificate(&c1, &span_certificate(fr(2, 5)).unwrap(), trefoil).unwrap();
        let v = verify_certificate(&lifted, &lifted.ambient_template().unwrap());
        assert_eq!(v.failed_check(), Some(5), "{v}");
    }

    #[test]
    fn reduction_step_in_figure_eight() {
        let t = figure_eight();
        let step = component_reduction_step(&t, 0, fr(1, 2), 0).unwrap();
        assert_eq!(step.m, 0);
        let [a, b, m] = step.triple.members;
        assert_eq!(a, fr(1, 2));
        for g in [b, m] {
            assert!(!g.is_infinity());
        }
        let cls = [connectivity(a), connectivity(b), connectivity(m)];
        assert!(cls[0] != cls[1] && cls[1] != cls[2] && cls[0] != cls[2]);
    }

    #[test]
    fn reduction_step_skips_the_zero_locus() {
        // zero locus 1/1: f = 0/1 has companions (1+m·0)/(0+m) = 1/m
        let t = figure_eight().with_coefficients(0, Coefficients::new(1, 1)).unwrap();
        let step = component_reduction_step(&t, 0, fr(0, 1), 0).unwrap();
        let z = fr(1, 1);
        assert!(step.triple.members.iter().all(|&g| g != z));
        assert!(step.m >= 1);
    }

    #[test]
    fn oriented_reduction_marks_f_as_resolution() {
        let t = figure_eight_oriented(OrientationClass::Antiparallel);
        let f = fr(2, 3);
        let step = component_reduction_step(&t, 0, f, 0).unwrap();
        assert_eq!(step.triple.resolution, Some(f));
        assert!(step.triple.members.contains(&f));
    }
}
