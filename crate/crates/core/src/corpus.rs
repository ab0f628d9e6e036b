//! Bundled diagram corpus and tangle templates.

use std::sync::OnceLock;

use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::skein::TangleTemplate;
use crate::tangle::OrientationClass;

const CORPUS: &str = include_str!("../corpus/corpus.txt");
const TEMPLATES: &str = include_str!("../corpus/templates.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub diagram: LinkDiagram,
    pub components: usize,
    pub determinant: u64,
}

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| (i + 1, l.split('|').map(str::trim).collect()))
}

fn bad_line(line: usize, reason: &str) -> Error {
    Error::Parse { token: format!("line {line}"), reason: reason.to_string() }
}

/// Parses `name | pd | components | determinant` records.
pub fn parse_manifest(text: &str) -> Result<Vec<CorpusEntry>> {
    records(text)
        .map(|(line, f)| {
            let [name, pd, comps, det] = f.as_slice() else {
                return Err(bad_line(line, "expected four `|`-separated fields"));
            };
            Ok(CorpusEntry {
                name: name.to_string(),
                diagram: pd.parse()?,
                components: comps.parse().map_err(|_| bad_line(line, "bad component count"))?,
                determinant: det.parse().map_err(|_| bad_line(line, "bad determinant"))?,
            })
        })
        .collect()
}

pub fn bundled() -> &'static [CorpusEntry] {
    static C: OnceLock<Vec<CorpusEntry>> = OnceLock::new();
    C.get_or_init(|| parse_manifest(CORPUS).expect("bundled corpus parses"))
}

pub fn entry(name: &str) -> Option<&'static CorpusEntry> {
    bundled().iter().find(|e| e.name == name)
}

/// `T[1,2,1,2]`: the exterior joins NW to SW and NE to SE, so inserting
/// `p/q` closes the tangle's denominator and gives determinant `|q|`.
pub fn figure_eight() -> TangleTemplate {
    static T: OnceLock<TangleTemplate> = OnceLock::new();
    T.get_or_init(|| TangleTemplate::parse("T[1,2,1,2]").and_then(|t| t.fitted(0)).expect("valid template"))
        .clone()
}

/// The Figure-8 template with both exterior arcs directed to match `class`.
pub fn figure_eight_oriented(class: OrientationClass) -> TangleTemplate {
    let pd = match class {
        OrientationClass::Parallel => "T[1,2,1,2] O[1:+,2:+]",
        OrientationClass::Antiparallel => "T[1,2,1,2] O[1:+,2:-]",
    };
    let t = TangleTemplate::parse(pd).and_then(|t| t.fitted(0)).expect("valid template");
    debug_assert_eq!(t.diagram().slot_flags(0).ok(), Some(class.boundary()));
    t
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedTemplate {
    pub name: String,
    pub template: TangleTemplate,
}

/// Parses `name | pd-with-slots` records.
pub fn parse_templates(text: &str) -> Result<Vec<NamedTemplate>> {
    records(text)
        .map(|(line, f)| {
            let [name, pd] = f.as_slice() else {
                return Err(bad_line(line, "expected `name | pd`"));
            };
            Ok(NamedTemplate { name: name.to_string(), template: TangleTemplate::parse(pd)? })
        })
        .collect()
}

pub fn bundled_templates() -> &'static [NamedTemplate] {
    static T: OnceLock<Vec<NamedTemplate>> = OnceLock::new();
    T.get_or_init(|| parse_templates(TEMPLATES).expect("bundled templates parse"))
}

pub fn single_slot_templates() -> impl Iterator<Item = &'static NamedTemplate> {
    bundled_templates().iter().filter(|t| t.template.slot_count() == 1)
}

pub fn two_slot_templates() -> impl Iterator<Item = &'static NamedTemplate> {
    bundled_templates().iter().filter(|t| t.template.slot_count() == 2)
}
