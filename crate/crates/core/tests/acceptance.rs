//! One PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.
//! Expected values come from the bundled manifest (computed by an independent
//! script), from closed formulas, or from exact arithmetic done here.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use knot_skein::certify::{
    oriented_span_certificate, span_certificate, verify_certificate, Certificate, Justification, OrientedTarget,
    HOPF, UNKNOT,
};
use knot_skein::coloring::{determinant, divides_determinant, n_colorable};
use knot_skein::corpus::{bundled, figure_eight, figure_eight_oriented, single_slot_templates, two_slot_templates};
use knot_skein::skein::{fit_coefficients, two_slot_scan};
use knot_skein::tangle::{compatible_with_boundary, connectivity, traced_connectivity};
use knot_skein::{OrientationClass, TangleFraction, TangleWord};

/// Largest node count per unit of `|p| + q` seen over the certificate ranges.
const SIZE_CONSTANT: i64 = 1;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn reduced(pmax: i64, qmin: i64, qmax: i64) -> impl Iterator<Item = TangleFraction> {
    (qmin..=qmax).flat_map(move |q| {
        (-pmax..=pmax).filter(move |&p| gcd(p, q) == 1 && (q > 0 || p == 1)).map(move |p| TangleFraction::new(p, q).unwrap())
    })
}

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn determinant_oracle() -> Check {
    let corpus = bundled();
    for e in corpus {
        let d = determinant(&e.diagram).map_err(|x| format!("{}: {x}", e.name))?;
        ensure(d == e.determinant, || format!("{}: computed {d}, manifest {}", e.name, e.determinant))?;
    }
    for name in ["unknot", "unknot_kink"] {
        let e = corpus.iter().find(|e| e.name == name).ok_or("no unknot entry")?;
        ensure(determinant(&e.diagram).ok() == Some(1), || format!("{name} must have determinant 1"))?;
    }
    Ok(format!("{} diagrams", corpus.len()))
}

fn figure_eight_law() -> Check {
    let t = figure_eight();
    let mut n = 0;
    for f in reduced(12, 0, 12) {
        let d = t.fill(0, f).map_err(|e| format!("{f}: {e}"))?;
        ensure(d.is_planar(), || format!("{f}: non-planar insertion"))?;
        let det = determinant(&d).map_err(|e| format!("{f}: {e}"))?;
        ensure(det == f.q() as u64, || format!("{f}: det {det}, expected {}", f.q()))?;
        n += 1;
    }
    Ok(format!("{n} fractions"))
}

fn colorability() -> Check {
    let mut n = 0;
    for e in bundled() {
        for p in [2, 3, 5, 7, 11, 13] {
            let a = n_colorable(&e.diagram, p).map_err(|x| x.to_string())?;
            let b = divides_determinant(&e.diagram, p).map_err(|x| x.to_string())?;
            ensure(a == b, || format!("{} mod {p}: nullspace {a}, divisibility {b}", e.name))?;
            ensure(b == (e.determinant % p == 0), || format!("{} mod {p}: manifest disagrees", e.name))?;
            n += 1;
        }
    }
    Ok(format!("{n} diagram/prime pairs"))
}

fn parity() -> Check {
    for e in bundled() {
        let det = determinant(&e.diagram).map_err(|x| x.to_string())?;
        let comps = e.diagram.components().map_err(|x| x.to_string())?;
        ensure((det % 2 == 1) == (comps == 1), || format!("{}: det {det} with {comps} components", e.name))?;
    }
    Ok(format!("{} diagrams", bundled().len()))
}

fn unions_and_sums() -> Check {
    let corpus = bundled();
    let (mut unions, mut sums) = (0, 0);
    for a in corpus {
        for b in corpus {
            let u = a.diagram.disjoint_union(&b.diagram);
            ensure(determinant(&u).ok() == Some(0), || format!("{} ⊔ {} is not split", a.name, b.name))?;
            unions += 1;
            let small = a.diagram.crossing_count() <= 4 && b.diagram.crossing_count() <= 4;
            let arcs = |d: &knot_skein::LinkDiagram| {
                let all = d.arcs();
                if all.is_empty() {
                    vec![1]
                } else if small {
                    all
                } else {
                    vec![all[0]]
                }
            };
            for &x in &arcs(&a.diagram) {
                for &y in &arcs(&b.diagram) {
                    let s = a.diagram.connected_sum(x, &b.diagram, y).map_err(|e| format!("{} # {}: {e}", a.name, b.name))?;
                    let det = determinant(&s).map_err(|e| e.to_string())?;
                    let want = a.determinant * b.determinant;
                    ensure(det == want, || format!("{} #({x},{y}) {}: det {det}, expected {want}", a.name, b.name))?;
                    sums += 1;
                }
            }
        }
    }
    Ok(format!("{unions} unions, {sums} sums"))
}

fn connectivity_parity() -> Check {
    let mut n = 0;
    for f in reduced(10, 0, 10) {
        let traced = traced_connectivity(&TangleWord::for_fraction(f));
        ensure(traced == connectivity(f), || format!("{f}: traced {traced}, parity {}", connectivity(f)))?;
        n += 1;
    }
    Ok(format!("{n} fractions"))
}

fn linear_model() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let box8: Vec<TangleFraction> = reduced(8, 0, 8).collect();
    let mut templates = 0;
    for nt in single_slot_templates() {
        let fit = fit_coefficients(&nt.template, 0).map_err(|e| format!("{}: {e}", nt.name))?;
        let t = nt.template.with_coefficients(0, fit.coeffs).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let f = loop {
                let (p, q) = (rng.gen_range(-40i64..=40), rng.gen_range(0i64..=40));
                if let Ok(f) = TangleFraction::new(p, q) {
                    if f.p() == p && f.q() == q {
                        break f;
                    }
                }
            };
            let det = t.det_at(0, f).map_err(|e| e.to_string())?;
            let model = fit.coeffs.eval(f);
            ensure(det == model, || format!("{} at {f}: det {det}, model {model}", nt.name))?;
        }
        let zero = t.zero_locus(0).ok_or_else(|| format!("{}: no zero locus", nt.name))?;
        for &f in &box8 {
            let det = t.det_at(0, f).map_err(|e| e.to_string())?;
            ensure((det == 0) == (f == zero), || format!("{} at {f}: det {det}, zero locus {zero}", nt.name))?;
        }
        templates += 1;
    }
    Ok(format!("{templates} templates"))
}

fn is_base(c: &Certificate, i: usize) -> bool {
    matches!(c.nodes[i].just, Justification::Base { .. })
}

fn farey_triangle(a: TangleFraction, b: TangleFraction, c: TangleFraction) -> bool {
    let cross = |x: TangleFraction, y: TangleFraction| (x.p() as i128 * y.q() as i128 - x.q() as i128 * y.p() as i128).abs();
    cross(a, b) == 1 && cross(a, c) == 1 && cross(b, c) == 1
}

fn forgeries(c: &Certificate) -> Vec<(Certificate, u8)> {
    let mut out = Vec::new();
    let last = c.nodes.len() - 1;
    if let Justification::Triple { triple: [i, j], .. } = c.nodes[last].just {
        let m = c.nodes[last].frac;
        if let Some(k) = (0..last).find(|&k| k != i && k != j && !farey_triangle(c.nodes[i].frac, c.nodes[k].frac, m)) {
            let mut f = c.clone();
            f.nodes[last].just = Justification::Triple { triple: [i, k], resolution: None };
            out.push((f, 2));
        }
        let mut f = c.clone();
        f.nodes[last].just = Justification::Base { base: UNKNOT.into() };
        out.push((f, 5));
    }
    let mut f = c.clone();
    f.nodes[0].just = Justification::Base { base: HOPF.into() };
    if is_base(c, 0) {
        out.push((f, 5));
    }
    out
}

fn unoriented_span() -> Check {
    let amb = figure_eight();
    let (mut n, mut forged) = (0, 0);
    for f in reduced(60, 1, 50) {
        let c = span_certificate(f).map_err(|e| format!("{f}: {e}"))?;
        ensure(c.target() == Some(f), || format!("{f}: wrong target"))?;
        let v = verify_certificate(&c, &amb);
        ensure(v.accepted(), || format!("{f}: {v}"))?;
        let bound = SIZE_CONSTANT * (f.p().abs() + f.q());
        ensure(c.nodes.len() as i64 <= bound, || format!("{f}: {} nodes > {bound}", c.nodes.len()))?;
        for i in 0..c.nodes.len() {
            if let Justification::Base { base } = &c.nodes[i].just {
                ensure(base == UNKNOT && amb.det_at(0, c.nodes[i].frac).ok() == Some(1), || format!("{f}: base {base}"))?;
            }
        }
        for (bad, check) in forgeries(&c) {
            let v = verify_certificate(&bad, &amb);
            ensure(v.failed_check() == Some(check), || format!("{f}: forgery expected check {check}, got {v}"))?;
            forged += 1;
        }
        n += 1;
    }
    ensure(span_certificate(TangleFraction::INFINITY).is_err(), || "1/0 must be refused".into())?;
    Ok(format!("{n} targets, {forged} forgeries rejected"))
}

fn oriented_span() -> Check {
    let mut n = 0;
    for f in reduced(40, 1, 30) {
        for class in [OrientationClass::Parallel, OrientationClass::Antiparallel] {
            if !compatible_with_boundary(class.boundary(), f) {
                continue;
            }
            let target = OrientedTarget { fraction: f, orientation: Some(class) };
            let c = oriented_span_certificate(target).map_err(|e| format!("{f} {class}: {e}"))?;
            let v = verify_certificate(&c, &figure_eight_oriented(class));
            ensure(v.accepted(), || format!("{f} {class}: {v}"))?;
            for node in &c.nodes {
                if let Justification::Base { base } = &node.just {
                    let ok = (base == UNKNOT && node.frac.q() == 1) || (base == HOPF && node.frac.q() == 2);
                    ensure(ok, || format!("{f} {class}: base {base} at {}", node.frac))?;
                }
            }
            let bound = SIZE_CONSTANT * (f.p().abs() + f.q());
            ensure(c.nodes.len() as i64 <= bound, || format!("{f}: {} nodes > {bound}", c.nodes.len()))?;
            n += 1;
        }
    }
    let mut cases = 0;
    for k in 2i64..=25 {
        for i in 0i64..=10 {
            for j in (1..k).filter(|&j| gcd(j, k) == 1) {
                let p = (1..k).find(|&p| p * j % k == 1).expect("inverse");
                ensure((p * k * i + p * j - 1) % k == 0, || format!("q not integral at k={k} i={i} j={j}"))?;
                let q = (p * k * i + p * j - 1) / k;
                let r = k - p;
                ensure((r * k * i + r * j + 1) % k == 0, || format!("s not integral at k={k} i={i} j={j}"))?;
                let s = (r * k * i + r * j + 1) / k;
                ensure((p * s - q * r).abs() == 1, || format!("|ps - qr| != 1 at k={k} i={i} j={j}"))?;
                ensure(p + r == k && q + s == k * i + j, || format!("mediant fails at k={k} i={i} j={j}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{n} targets, {cases} recursion cases"))
}

fn two_slot() -> Check {
    let mut n = 0;
    for nt in two_slot_templates() {
        let r = two_slot_scan(&nt.template, 0, 1, 6).map_err(|e| format!("{}: {e}", nt.name))?;
        ensure(r.max_count() <= 1, || format!("{}: {} zero companions", nt.name, r.max_count()))?;
        n += 1;
    }
    ensure(n > 0, || "no two-slot templates bundled".into())?;
    Ok(format!("{n} templates"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("determinant oracle agreement", determinant_oracle),
        ("Figure-8 insertion has determinant |q|", figure_eight_law),
        ("colorability iff n divides det", colorability),
        ("odd determinant iff knot", parity),
        ("split unions vanish, sums multiply", unions_and_sums),
        ("connectivity parity matches tracing", connectivity_parity),
        ("linear determinant model and unique zero", linear_model),
        ("unoriented span certificates", unoriented_span),
        ("oriented span certificates", oriented_span),
        ("two-slot scan has at most one zero", two_slot),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
