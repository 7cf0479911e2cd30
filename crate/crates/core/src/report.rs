//! Text, JSON and CSV renderings, and the line-oriented input format.
//!
//! Input is one transformation per line as an image word (`0 0 2`), with `#`
//! comments and an optional header line of `key=value` pairs (`n=3 t=0 size=4`).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::enumeration::SpectrumReport;
use crate::reduction::{Anchor, ReductionResult};
use crate::semilattice::{PosetRelation, Semilattice};
use crate::transform::Transformation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn parse_error(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Header {
    pub n: Option<usize>,
    pub t: Option<usize>,
    pub size: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedInput {
    pub header: Option<Header>,
    pub elements: Vec<Transformation>,
}

impl ParsedInput {
    /// Ground-set size from the header, else from the first transformation.
    pub fn n(&self) -> Option<usize> {
        self.header
            .as_ref()
            .and_then(|h| h.n)
            .or_else(|| self.elements.first().map(Transformation::n))
    }
}

/// Parses the line format. Every transformation must live on the same ground set.
pub fn parse_input(text: &str) -> Result<ParsedInput, ParseError> {
    let mut header: Option<Header> = None;
    let mut elements: Vec<Transformation> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.contains('=') {
            if header.is_some() || !elements.is_empty() {
                return Err(parse_error(line, "header must come first and appear once"));
            }
            header = Some(parse_header(line, content)?);
            continue;
        }
        let a: Transformation = content
            .parse()
            .map_err(|e| parse_error(line, format!("{e}")))?;
        let expected = header
            .as_ref()
            .and_then(|h| h.n)
            .or_else(|| elements.first().map(Transformation::n));
        if let Some(n) = expected {
            if a.n() != n {
                return Err(parse_error(
                    line,
                    format!("expected {n} images, found {}", a.n()),
                ));
            }
        }
        elements.push(a);
    }
    if let Some(Header {
        size: Some(size), ..
    }) = header
    {
        if size != elements.len() {
            return Err(parse_error(
                text.lines().count().max(1),
                format!("header declares {size} elements, found {}", elements.len()),
            ));
        }
    }
    Ok(ParsedInput { header, elements })
}

fn parse_header(line: usize, content: &str) -> Result<Header, ParseError> {
    let mut header = Header::default();
    for token in content.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| parse_error(line, format!("expected key=value, found {token:?}")))?;
        let value: usize = value
            .parse()
            .map_err(|_| parse_error(line, format!("bad value in {token:?}")))?;
        match key {
            "n" => header.n = Some(value),
            "t" => header.t = Some(value),
            "size" => header.size = Some(value),
            _ => return Err(parse_error(line, format!("unknown header key {key:?}"))),
        }
    }
    Ok(header)
}

/// One image word per line.
pub fn transformations_text(list: &[Transformation]) -> String {
    let mut out = String::new();
    for a in list {
        writeln!(out, "{a}").unwrap();
    }
    out
}

/// Header `n=… [t=…] size=…` followed by the elements.
pub fn semilattice_text(s: &Semilattice, t: Option<usize>) -> String {
    let mut out = format!("n={}", s.n());
    if let Some(t) = t {
        write!(out, " t={t}").unwrap();
    }
    writeln!(out, " size={}", s.len()).unwrap();
    out.push_str(&transformations_text(s.elements()));
    out
}

/// Optional facts attached to a semilattice rendering.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Annotations {
    pub is_maximal: Option<bool>,
    pub is_boolean: Option<bool>,
    pub atoms: Option<Vec<Transformation>>,
}

#[derive(Serialize)]
pub struct SemilatticeJson<'a> {
    pub n: usize,
    pub elements: &'a [Transformation],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_maximal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_boolean: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<Transformation>>,
}

impl<'a> SemilatticeJson<'a> {
    pub fn new(s: &'a Semilattice, annotations: Annotations) -> Self {
        SemilatticeJson {
            n: s.n(),
            elements: s.elements(),
            is_maximal: annotations.is_maximal,
            is_boolean: annotations.is_boolean,
            atoms: annotations.atoms,
        }
    }

    pub fn plain(s: &'a Semilattice) -> Self {
        Self::new(s, Annotations::default())
    }
}

#[derive(Serialize)]
struct ReductionSizes {
    #[serde(rename = "S")]
    source: usize,
    #[serde(rename = "S_star")]
    star: usize,
    #[serde(rename = "S_star_u")]
    restricted: usize,
}

#[derive(Serialize)]
struct ReductionJson<'a> {
    anchor: Anchor,
    star: SemilatticeJson<'a>,
    restricted: SemilatticeJson<'a>,
    sizes: ReductionSizes,
}

#[derive(Serialize)]
struct HistogramRow {
    size: usize,
    count: usize,
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    n: usize,
    max_size: usize,
    total_maximal: usize,
    histogram: Vec<HistogramRow>,
    witnesses: BTreeMap<usize, SemilatticeJson<'a>>,
}

#[derive(Serialize)]
struct PosetJson<'a, T> {
    carrier: &'a [T],
    leq: Vec<Vec<bool>>,
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("plain data serializes");
    out.push('\n');
    out
}

pub fn semilattice_json(s: &Semilattice, annotations: Annotations) -> String {
    pretty(&SemilatticeJson::new(s, annotations))
}

/// A list of semilattices as a JSON array.
pub fn semilattices_json(list: &[Semilattice]) -> String {
    pretty(&list.iter().map(SemilatticeJson::plain).collect::<Vec<_>>())
}

pub fn reduction_json(r: &ReductionResult) -> String {
    pretty(&ReductionJson {
        anchor: r.anchor,
        star: SemilatticeJson::plain(&r.star_image),
        restricted: SemilatticeJson::plain(&r.restricted),
        sizes: ReductionSizes {
            source: r.source_size,
            star: r.star_image.len(),
            restricted: r.restricted.len(),
        },
    })
}

pub fn reduction_text(r: &ReductionResult) -> String {
    let mut out = format!(
        "anchor t={} u={}\nsizes S={} S_star={} S_star_u={}\n",
        r.anchor.t,
        r.anchor.u,
        r.source_size,
        r.star_image.len(),
        r.restricted.len()
    );
    out.push_str("# star\n");
    out.push_str(&semilattice_text(&r.star_image, None));
    out.push_str("# restricted\n");
    out.push_str(&semilattice_text(&r.restricted, None));
    out
}

pub fn spectrum_json(report: &SpectrumReport) -> String {
    pretty(&SpectrumJson {
        n: report.n,
        max_size: report.max_size,
        total_maximal: report.total_maximal,
        histogram: report
            .histogram()
            .into_iter()
            .map(|(size, count)| HistogramRow { size, count })
            .collect(),
        witnesses: report
            .entries
            .iter()
            .map(|(&m, e)| (m, SemilatticeJson::plain(&e.witness)))
            .collect(),
    })
}

/// Columns `n,size,count`, ascending size.
pub fn spectrum_csv(report: &SpectrumReport) -> String {
    let mut out = String::from("n,size,count\n");
    for (size, count) in report.histogram() {
        writeln!(out, "{},{size},{count}", report.n).unwrap();
    }
    out
}

pub fn spectrum_text(report: &SpectrumReport) -> String {
    let mut out = format!(
        "n={} max_size={} total_maximal={}\n",
        report.n, report.max_size, report.total_maximal
    );
    for (size, count) in report.histogram() {
        writeln!(out, "size {size}: {count}").unwrap();
    }
    out
}

pub fn poset_json<T: Serialize>(order: &PosetRelation<T>) -> String {
    pretty(&PosetJson {
        carrier: order.carrier(),
        leq: order.rows(),
    })
}

/// Strict relations `a < b`, one per line.
pub fn poset_text<T: std::fmt::Display>(order: &PosetRelation<T>) -> String {
    let mut out = String::new();
    for (i, j) in order.strict_pairs() {
        writeln!(out, "{} < {}", order.carrier()[i], order.carrier()[j]).unwrap();
    }
    out
}
