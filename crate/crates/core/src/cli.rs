//! Command-line front end. `run` is pure apart from file I/O for `certify -o`,
//! `verify` and `--corpus`, so golden tests call it in-process.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::certify::{oriented_span_certificate, span_certificate, verify_certificate, Certificate, OrientedTarget};
use crate::coloring::{determinant, n_colorable};
use crate::corpus::{bundled, figure_eight_oriented, parse_manifest, two_slot_templates, CorpusEntry};
use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::skein::{fit_coefficients, oriented_triple, two_slot_scan, unoriented_triple, FareyPair, TangleTemplate};
use crate::tangle::{cf_to_fraction, connectivity, fraction_to_cf, ContinuedFraction, OrientationClass, TangleFraction};

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_REJECT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "knot-skein", version, about = "Link determinants, rational tangles and skein certificates")]
struct Cli {
    /// Line-oriented `|`-separated records instead of labelled text.
    #[arg(long, global = true)]
    porcelain: bool,
    /// Corpus manifest to use instead of the bundled one.
    #[arg(long, global = true, value_name = "PATH")]
    corpus: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Determinant of a closed diagram.
    Det {
        #[arg(allow_hyphen_values = true)]
        pd: String,
    },
    /// Whether the diagram has a non-trivial coloring mod a prime.
    Colorable {
        #[arg(long)]
        n: u64,
        #[arg(allow_hyphen_values = true)]
        pd: String,
    },
    /// Rational tangle calculus.
    #[command(subcommand)]
    Tangle(TangleVerb),
    /// Skein triples of Farey neighbours.
    #[command(subcommand)]
    Skein(SkeinVerb),
    /// Templates: diagrams with tangle slots.
    #[command(subcommand)]
    Template(TemplateVerb),
    /// Two-slot scan of every bundled two-slot template.
    Scan {
        #[arg(long, default_value_t = 6)]
        bound: i64,
    },
    /// Skein-derivation certificate for an insertion into the Figure-8 template.
    Certify {
        #[arg(allow_hyphen_values = true)]
        fraction: TangleFraction,
        #[arg(long, value_name = "CLASS", num_args = 0..=1, default_missing_value = "auto")]
        oriented: Option<String>,
        #[arg(short = 'o', value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Re-check a certificate file.
    Verify { file: PathBuf },
    /// The diagram corpus.
    #[command(subcommand)]
    Corpus(CorpusVerb),
}

#[derive(Subcommand, Debug)]
enum TangleVerb {
    /// Canonical continued fraction of p/q.
    Cf {
        #[arg(allow_hyphen_values = true)]
        fraction: TangleFraction,
    },
    /// Fraction of a continued fraction such as "(2,3,1)".
    Eval {
        #[arg(allow_hyphen_values = true)]
        terms: ContinuedFraction,
    },
    /// Which boundary points the tangle joins.
    Conn {
        #[arg(allow_hyphen_values = true)]
        fraction: TangleFraction,
    },
}

#[derive(Subcommand, Debug)]
enum SkeinVerb {
    /// The triple of two Farey neighbours and their mediant.
    Triple {
        #[arg(allow_hyphen_values = true)]
        first: TangleFraction,
        #[arg(allow_hyphen_values = true)]
        second: TangleFraction,
        #[arg(long, value_name = "CLASS")]
        oriented: Option<OrientationClass>,
    },
}

#[derive(Subcommand, Debug)]
enum TemplateVerb {
    /// Fit the linear determinant model of one slot.
    Fit {
        #[arg(allow_hyphen_values = true)]
        pd: String,
        #[arg(long, default_value_t = 0)]
        slot: usize,
    },
    /// Zero-determinant companions of each x in a two-slot template.
    Scan {
        #[arg(allow_hyphen_values = true)]
        pd: String,
        #[arg(long, default_value_t = 6)]
        bound: i64,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusVerb {
    /// Entries with crossing, component and determinant columns.
    List,
    /// Recompute every entry against its recorded values.
    Check,
}

struct Out {
    porcelain: bool,
    text: String,
    code: i32,
}

impl Out {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }
}

pub fn run(args: &[String]) -> Outcome {
    let argv = std::iter::once("knot-skein".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() { (String::new(), text) } else { (text, String::new()) };
            return Outcome { code, stdout, stderr };
        }
    };
    let mut out = Out { porcelain: cli.porcelain, text: String::new(), code: EXIT_OK };
    match dispatch(&cli, &mut out) {
        Ok(()) => Outcome { code: out.code, stdout: out.text, stderr: String::new() },
        Err(e) => Outcome { code: EXIT_ERROR, stdout: out.text, stderr: format!("error: {e}\n") },
    }
}

fn pd(text: &str) -> Result<LinkDiagram> {
    text.parse()
}

fn corpus(cli: &Cli) -> Result<Vec<CorpusEntry>> {
    match &cli.corpus {
        Some(path) => parse_manifest(&std::fs::read_to_string(path)?),
        None => Ok(bundled().to_vec()),
    }
}

fn dispatch(cli: &Cli, out: &mut Out) -> Result<()> {
    match &cli.verb {
        Verb::Det { pd: text } => out.line(determinant(&pd(text)?)?.to_string()),
        Verb::Colorable { n, pd: text } => out.line(n_colorable(&pd(text)?, *n)?.to_string()),
        Verb::Tangle(TangleVerb::Cf { fraction }) => out.line(fraction_to_cf(*fraction).to_string()),
        Verb::Tangle(TangleVerb::Eval { terms }) => out.line(cf_to_fraction(terms).to_string()),
        Verb::Tangle(TangleVerb::Conn { fraction }) => out.line(connectivity(*fraction).to_string()),
        Verb::Skein(SkeinVerb::Triple { first, second, oriented }) => triple(out, *first, *second, *oriented)?,
        Verb::Template(TemplateVerb::Fit { pd, slot }) => fit(out, pd, *slot)?,
        Verb::Template(TemplateVerb::Scan { pd, bound }) => template_scan(out, pd, *bound)?,
        Verb::Scan { bound } => scan_bundled(out, *bound)?,
        Verb::Certify { fraction, oriented, output } => certify(out, *fraction, oriented.as_deref(), output.as_ref())?,
        Verb::Verify { file } => verify(out, file)?,
        Verb::Corpus(CorpusVerb::List) => corpus_list(out, &corpus(cli)?)?,
        Verb::Corpus(CorpusVerb::Check) => corpus_check(out, &corpus(cli)?)?,
    }
    Ok(())
}

fn triple(out: &mut Out, f1: TangleFraction, f2: TangleFraction, class: Option<OrientationClass>) -> Result<()> {
    let pair = FareyPair::new(f1, f2)?;
    let t = match class {
        None => unoriented_triple(&pair),
        Some(c) => oriented_triple(&pair, &figure_eight_oriented(c), 0)?,
    };
    let [a, b, m] = t.members;
    if out.porcelain {
        let mut rec = format!("{} | {a} | {b} | {m}", t.kind);
        if let (Some(n), Some(r)) = (t.partner, t.resolution) {
            write!(rec, " | {n} | {r}").ok();
        }
        out.line(rec);
        return Ok(());
    }
    out.line(format!("kind: {}", t.kind));
    out.line(format!("pair: {a} {b}"));
    out.line(format!("mediant: {m}"));
    if let (Some(n), Some(r)) = (t.partner, t.resolution) {
        out.line(format!("partner: {n}"));
        out.line(format!("resolution: {r}"));
    }
    out.line(format!("classes: {} {} {}", connectivity(a), connectivity(b), connectivity(m)));
    Ok(())
}

fn fit(out: &mut Out, text: &str, slot: usize) -> Result<()> {
    let t = TangleTemplate::parse(text)?;
    let fit = fit_coefficients(&t, slot)?;
    let zero = fit.coeffs.zero_locus().map(|z| z.to_string()).unwrap_or_else(|_| "-".into());
    if out.porcelain {
        out.line(format!("{} | {} | {zero} | {}", fit.coeffs.a, fit.coeffs.b, fit.sign_flipped));
        return Ok(());
    }
    let (a, b) = (fit.coeffs.a, fit.coeffs.b);
    let sign = if a <= 0 { '+' } else { '-' };
    out.line(format!("det(p/q) = |{b}p {sign} {}q|", a.unsigned_abs()));
    out.line(format!("a: {}", fit.coeffs.a));
    out.line(format!("b: {}", fit.coeffs.b));
    out.line(format!("zero locus: {zero}"));
    out.line(format!("relative sign from probe 1/1: {}", if fit.sign_flipped { "negative" } else { "positive" }));
    Ok(())
}

fn template_scan(out: &mut Out, text: &str, bound: i64) -> Result<()> {
    let t = TangleTemplate::parse(text)?;
    if t.slot_count() < 2 {
        return Err(Error::Arity(t.slot_count()));
    }
    let report = two_slot_scan(&t, 0, 1, bound)?;
    for row in &report.rows {
        out.line(row.to_string());
    }
    if !out.porcelain {
        out.line(format!("max count: {}", report.max_count()));
    }
    if !report.holds() {
        out.code = EXIT_REJECT;
    }
    Ok(())
}

fn scan_bundled(out: &mut Out, bound: i64) -> Result<()> {
    if !out.porcelain {
        out.line("template | max count | holds");
    }
    for nt in two_slot_templates() {
        let report = two_slot_scan(&nt.template, 0, 1, bound)?;
        out.line(format!("{} | {} | {}", nt.name, report.max_count(), report.holds()));
        if !report.holds() {
            out.code = EXIT_REJECT;
        }
    }
    Ok(())
}

fn certify(out: &mut Out, f: TangleFraction, oriented: Option<&str>, output: Option<&PathBuf>) -> Result<()> {
    let cert = match oriented {
        None => span_certificate(f)?,
        Some(class) => {
            let orientation = if class == "auto" { None } else { Some(class.parse()?) };
            oriented_span_certificate(OrientedTarget { fraction: f, orientation })?
        }
    };
    let json = cert.to_json();
    match output {
        None => out.line(json),
        Some(path) => {
            std::fs::write(path, format!("{json}\n"))?;
            if out.porcelain {
                out.line(format!("{} | {f} | {}", cert.kind, cert.nodes.len()));
            } else {
                out.line(format!("{} certificate for {f}: {} nodes", cert.kind, cert.nodes.len()));
            }
        }
    }
    Ok(())
}

fn verify(out: &mut Out, file: &PathBuf) -> Result<()> {
    let cert = Certificate::from_json(&std::fs::read_to_string(file)?)?;
    let verdict = verify_certificate(&cert, &cert.ambient_template()?);
    out.line(verdict.to_string());
    if !verdict.accepted() {
        out.code = EXIT_REJECT;
    }
    Ok(())
}

fn corpus_list(out: &mut Out, entries: &[CorpusEntry]) -> Result<()> {
    if !out.porcelain {
        out.line("name | crossings | components | determinant");
    }
    for e in entries {
        out.line(format!("{} | {} | {} | {}", e.name, e.diagram.crossing_count(), e.components, e.determinant));
    }
    Ok(())
}

fn corpus_check(out: &mut Out, entries: &[CorpusEntry]) -> Result<()> {
    let mut bad = 0;
    for e in entries {
        let comps = e.diagram.components()?;
        let det = determinant(&e.diagram)?;
        let ok = comps == e.components && det == e.determinant;
        if !ok {
            bad += 1;
        }
        if out.porcelain {
            out.line(format!("{} | {comps} | {det} | {}", e.name, if ok { "ok" } else { "mismatch" }));
        } else if !ok {
            out.line(format!("{}: recorded {} components det {}, computed {comps} det {det}", e.name, e.components, e.determinant));
        }
    }
    if !out.porcelain {
        out.line(format!("{} entries, {bad} mismatches", entries.len()));
    }
    if bad > 0 {
        out.code = EXIT_REJECT;
    }
    Ok(())
}
