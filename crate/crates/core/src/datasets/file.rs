//! The `.ihdat` text format.
//!
//! ```text
//! # comment
//! [fiber g=3 k=2]
//! provenance: universal Kummer surface
//! 0: Q
//! 2: V[1,1] + Q ; weight 2
//!
//! [betti space=vor4 g=4 role=toroidal]
//! 10: ?
//!
//! [gysin g=4 k=1]
//! (2,5): V[2](-2)
//! differential (2,5)->(3,5): V[2](-2)
//!
//! [link-seed k=2 r=3 coeff=V[1,1]]
//! 1: 0
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::betti::{BettiValue, BettiWithUnknowns};
use crate::datasets::expr::{parse_expr, parse_partition};
use crate::error::{Error, Result};
use crate::rep::{IrrepSum, Partition};
use crate::sseq::{ForcedDifferential, GradedTable, GysinPage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SectionKind {
    Fiber,
    Betti,
    Gysin,
    LinkSeed,
}

impl SectionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SectionKind::Fiber => "fiber",
            SectionKind::Betti => "betti",
            SectionKind::Gysin => "gysin",
            SectionKind::LinkSeed => "link-seed",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "fiber" => SectionKind::Fiber,
            "betti" => SectionKind::Betti,
            "gysin" => SectionKind::Gysin,
            "link-seed" => SectionKind::LinkSeed,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionBody {
    /// Fiber cohomology or link seeds: local systems by degree.
    Table {
        table: GradedTable,
        weights: BTreeMap<u32, i64>,
    },
    Betti(BettiWithUnknowns),
    Gysin(GysinPage),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub kind: SectionKind,
    pub meta: BTreeMap<String, String>,
    pub provenance: Option<String>,
    pub status: Option<String>,
    pub body: SectionBody,
}

impl Section {
    pub fn key(&self, k: &str) -> Option<&str> {
        self.meta.get(k).map(String::as_str)
    }

    pub fn key_u32(&self, k: &str) -> Option<u32> {
        self.key(k)?.parse().ok()
    }

    /// Registry name, e.g. `fiber g=4 k=1` or `betti vor4`.
    pub fn name(&self) -> String {
        let get = |k: &str| self.key(k).unwrap_or("?");
        match self.kind {
            SectionKind::Fiber => {
                let mut s = format!("fiber g={} k={}", get("g"), get("k"));
                if let Some(c) = self.key("cone") {
                    write!(s, " cone={c}").unwrap();
                }
                s
            }
            SectionKind::Betti => format!("betti {}", get("space")),
            SectionKind::Gysin => format!("gysin g={} k={}", get("g"), get("k")),
            SectionKind::LinkSeed => {
                format!(
                    "link-seed k={} r={} coeff={}",
                    get("k"),
                    get("r"),
                    get("coeff")
                )
            }
        }
    }

    pub fn table(&self) -> Option<&GradedTable> {
        match &self.body {
            SectionBody::Table { table, .. } => Some(table),
            _ => None,
        }
    }

    pub fn betti(&self) -> Option<&BettiWithUnknowns> {
        match &self.body {
            SectionBody::Betti(b) => Some(b),
            _ => None,
        }
    }

    pub fn gysin(&self) -> Option<&GysinPage> {
        match &self.body {
            SectionBody::Gysin(p) => Some(p),
            _ => None,
        }
    }

    /// Genus of the stratum the section's local systems live on.
    fn context_genus(
        kind: SectionKind,
        meta: &BTreeMap<String, String>,
        line: usize,
    ) -> Result<u32> {
        let need = |k: &str| -> Result<u32> {
            meta.get(k)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("[{}] section needs an integer '{k}=' key", kind.as_str()),
                })
        };
        match kind {
            SectionKind::Fiber | SectionKind::Gysin => {
                let (g, k) = (need("g")?, need("k")?);
                if k >= g {
                    return Err(Error::Parse {
                        line,
                        message: format!("stratum k={k} must lie below genus g={g}"),
                    });
                }
                Ok(k)
            }
            SectionKind::LinkSeed => {
                let (k, r) = (need("k")?, need("r")?);
                if k >= r {
                    return Err(Error::Parse {
                        line,
                        message: format!("link needs k < r, got k={k} r={r}"),
                    });
                }
                Ok(k)
            }
            SectionKind::Betti => {
                need("g")?;
                if !meta.contains_key("space") {
                    return Err(Error::Parse {
                        line,
                        message: "[betti] section needs 'space='".into(),
                    });
                }
                Ok(0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DatasetFile {
    pub sections: Vec<Section>,
}

struct Builder {
    kind: SectionKind,
    meta: BTreeMap<String, String>,
    genus: u32,
    provenance: Option<String>,
    status: Option<String>,
    table: GradedTable,
    weights: BTreeMap<u32, i64>,
    betti: BTreeMap<u32, BettiValue>,
    page: BTreeMap<(u32, u32), IrrepSum>,
    forced: Vec<ForcedDifferential>,
    seen: Vec<String>,
}

impl Builder {
    fn finish(self) -> Section {
        let body = match self.kind {
            SectionKind::Fiber | SectionKind::LinkSeed => SectionBody::Table {
                table: self.table,
                weights: self.weights,
            },
            SectionKind::Betti => {
                let top = self.betti.keys().next_back().copied().unwrap_or(0);
                let values = (0..=top)
                    .map(|d| self.betti.get(&d).cloned().unwrap_or(BettiValue::Known(0)))
                    .collect();
                SectionBody::Betti(BettiWithUnknowns {
                    label: self.meta.get("space").cloned().unwrap_or_default(),
                    values,
                })
            }
            SectionKind::Gysin => {
                let mut columns: BTreeMap<u32, GradedTable> = BTreeMap::new();
                for ((p, q), s) in self.page {
                    columns
                        .entry(p)
                        .or_insert_with(|| GradedTable::new(self.genus))
                        .add(q, &s);
                }
                SectionBody::Gysin(GysinPage {
                    columns: columns.into_iter().collect(),
                    forced: self.forced,
                })
            }
        };
        Section {
            kind: self.kind,
            meta: self.meta,
            provenance: self.provenance,
            status: self.status,
            body,
        }
    }
}

fn parse_header(line: &str, lineno: usize) -> Result<Builder> {
    let inner = line
        .strip_prefix('[')
        .and_then(|l| l.strip_suffix(']'))
        .ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("malformed header '{line}'"),
        })?;
    let mut words = inner.split_whitespace();
    let kind_word = words.next().unwrap_or("");
    let kind = SectionKind::parse(kind_word).ok_or_else(|| Error::Parse {
        line: lineno,
        message: format!("unknown section kind '{kind_word}'"),
    })?;
    let mut meta = BTreeMap::new();
    for w in words {
        let (k, v) = w.split_once('=').ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("expected key=value, got '{w}'"),
        })?;
        if meta.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Parse {
                line: lineno,
                message: format!("repeated key '{k}'"),
            });
        }
    }
    let genus = Section::context_genus(kind, &meta, lineno)?;
    if kind == SectionKind::LinkSeed {
        let coeff = meta.get("coeff").ok_or_else(|| Error::Parse {
            line: lineno,
            message: "[link-seed] section needs 'coeff='".into(),
        })?;
        let r: u32 = meta["r"].parse().unwrap_or(0);
        parse_partition(coeff, r).map_err(|e| e.at_line(lineno, r))?;
    }
    Ok(Builder {
        kind,
        meta,
        genus,
        provenance: None,
        status: None,
        table: GradedTable::new(genus),
        weights: BTreeMap::new(),
        betti: BTreeMap::new(),
        page: BTreeMap::new(),
        forced: Vec::new(),
        seen: Vec::new(),
    })
}

fn parse_degree(s: &str, lineno: usize) -> Result<u32> {
    s.trim().parse().map_err(|_| Error::Parse {
        line: lineno,
        message: format!("expected a degree, got '{}'", s.trim()),
    })
}

fn parse_bidegree(s: &str, lineno: usize) -> Result<(u32, u32)> {
    let err = || Error::Parse {
        line: lineno,
        message: format!("expected (p,q), got '{}'", s.trim()),
    };
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .ok_or_else(err)?;
    let (p, q) = inner.split_once(',').ok_or_else(err)?;
    Ok((
        p.trim().parse().map_err(|_| err())?,
        q.trim().parse().map_err(|_| err())?,
    ))
}

fn body_line(b: &mut Builder, line: &str, lineno: usize) -> Result<()> {
    let (lhs, rhs) = line.split_once(':').ok_or_else(|| Error::Parse {
        line: lineno,
        message: format!("expected '<degree>: <value>', got '{line}'"),
    })?;
    let lhs = lhs.trim();
    match lhs {
        "provenance" => {
            b.provenance = Some(rhs.trim().to_string());
            return Ok(());
        }
        "status" => {
            b.status = Some(rhs.trim().to_string());
            return Ok(());
        }
        _ => {}
    }
    let genus = b.genus;
    let expr = |s: &str| parse_expr(s, genus).map_err(|e| e.at_line(lineno, genus));

    if b.kind == SectionKind::Gysin {
        if let Some(spec) = lhs.strip_prefix("differential") {
            let (src, dst) = spec.split_once("->").ok_or_else(|| Error::Parse {
                line: lineno,
                message: "expected 'differential (p,q)->(p+1,q)'".into(),
            })?;
            let source = parse_bidegree(src, lineno)?;
            let target = parse_bidegree(dst, lineno)?;
            if target != (source.0 + 1, source.1) {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("d_1 must map (p,q) to (p+1,q), got {source:?}->{target:?}"),
                });
            }
            b.forced.push(ForcedDifferential {
                source,
                system: expr(rhs)?,
            });
            return Ok(());
        }
        let at = parse_bidegree(lhs, lineno)?;
        if b.page.contains_key(&at) || b.seen.contains(&lhs.to_string()) {
            return Err(Error::DuplicateDegree {
                line: lineno,
                degree: lhs.to_string(),
            });
        }
        b.seen.push(lhs.to_string());
        let value = expr(rhs)?;
        b.page.insert(at, value);
        return Ok(());
    }

    let degree = parse_degree(lhs, lineno)?;
    if b.seen.contains(&degree.to_string()) {
        return Err(Error::DuplicateDegree {
            line: lineno,
            degree: degree.to_string(),
        });
    }
    b.seen.push(degree.to_string());

    if b.kind == SectionKind::Betti {
        let v = rhs.trim();
        let value = if v == "?" {
            let space = b.meta.get("space").cloned().unwrap_or_default();
            BettiValue::Unknown {
                lower: 0,
                symbol: format!("h{degree}({space})"),
            }
        } else {
            BettiValue::Known(v.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("expected a Betti number or '?', got '{v}'"),
            })?)
        };
        b.betti.insert(degree, value);
        return Ok(());
    }

    let (value, weight) = match rhs.split_once(';') {
        Some((e, w)) => {
            let w = w
                .trim()
                .strip_prefix("weight")
                .map(str::trim)
                .and_then(|w| w.parse().ok());
            let w = w.ok_or_else(|| Error::Parse {
                line: lineno,
                message: "expected '; weight <int>'".into(),
            })?;
            (e, Some(w))
        }
        None => (rhs, None),
    };
    if value.trim() == "?" {
        return Err(Error::Parse {
            line: lineno,
            message: "'?' is only allowed in betti sections".into(),
        });
    }
    b.table.set(degree, expr(value)?);
    if let Some(w) = weight {
        b.weights.insert(degree, w);
    }
    Ok(())
}

pub fn parse_dataset(text: &str) -> Result<DatasetFile> {
    let mut sections = Vec::new();
    let mut current: Option<Builder> = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if let Some(b) = current.take() {
                sections.push(b.finish());
            }
            current = Some(parse_header(line, lineno)?);
            continue;
        }
        let b = current.as_mut().ok_or_else(|| Error::Parse {
            line: lineno,
            message: "content before the first [section] header".into(),
        })?;
        body_line(b, line, lineno)?;
    }
    if let Some(b) = current.take() {
        sections.push(b.finish());
    }
    Ok(DatasetFile { sections })
}

impl Section {
    pub fn to_text(&self) -> String {
        let mut out = format!("[{}", self.kind.as_str());
        for (k, v) in &self.meta {
            write!(out, " {k}={v}").unwrap();
        }
        out.push_str("]\n");
        if let Some(p) = &self.provenance {
            writeln!(out, "provenance: {p}").unwrap();
        }
        if let Some(s) = &self.status {
            writeln!(out, "status: {s}").unwrap();
        }
        match &self.body {
            SectionBody::Table { table, weights } => {
                for (d, s) in table.entries() {
                    match weights.get(&d) {
                        Some(w) => writeln!(out, "{d}: {s} ; weight {w}").unwrap(),
                        None => writeln!(out, "{d}: {s}").unwrap(),
                    }
                }
            }
            SectionBody::Betti(b) => {
                for (d, v) in b.values.iter().enumerate() {
                    match v {
                        BettiValue::Known(n) => writeln!(out, "{d}: {n}").unwrap(),
                        BettiValue::Unknown { .. } => writeln!(out, "{d}: ?").unwrap(),
                    }
                }
            }
            SectionBody::Gysin(page) => {
                for (p, col) in &page.columns {
                    for (q, s) in col.entries() {
                        writeln!(out, "({p},{q}): {s}").unwrap();
                    }
                }
                for f in &page.forced {
                    let (p, q) = f.source;
                    writeln!(out, "differential ({p},{q})->({},{q}): {}", p + 1, f.system).unwrap();
                }
            }
        }
        out
    }
}

impl DatasetFile {
    pub fn to_text(&self) -> String {
        self.sections
            .iter()
            .map(Section::to_text)
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Coefficient system of a link-seed section.
pub fn seed_coefficient(section: &Section) -> Option<Partition> {
    let r = section.key_u32("r")?;
    parse_partition(section.key("coeff")?, r).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_kinds() {
        let text = "\
# sample
[fiber g=4 k=2]
provenance: test
4: V[2,2] + V[1,1] + 2 Q ; weight 4
0: Q

[betti space=vor4 g=4 role=toroidal]
0: 1
10: ?

[gysin g=4 k=1]
(2,5): V[2](-2)
(3,5): V[2](-2)
differential (2,5)->(3,5): V[2](-2)

[link-seed k=0 r=1 coeff=Q]
0: Q
";
        let file = parse_dataset(text).unwrap();
        assert_eq!(file.sections.len(), 4);
        let fiber = &file.sections[0];
        assert_eq!(fiber.name(), "fiber g=4 k=2");
        assert_eq!(
            fiber.table().unwrap().get(4).to_string(),
            "V[2,2] + V[1,1] + 2 Q"
        );
        let betti = file.sections[1].betti().unwrap();
        assert_eq!(file.sections[1].name(), "betti vor4");
        assert_eq!(betti.values.len(), 11);
        assert!(matches!(&betti.values[10], BettiValue::Unknown { .. }));
        assert_eq!(betti.values[4], BettiValue::Known(0));
        let page = file.sections[2].gysin().unwrap();
        assert_eq!(page.forced.len(), 1);
        assert_eq!(
            seed_coefficient(&file.sections[3]),
            Some(Partition::trivial())
        );

        let again = parse_dataset(&file.to_text()).unwrap();
        assert_eq!(again, file);
    }

    #[test]
    fn question_mark_only_in_betti() {
        let err = parse_dataset("[fiber g=2 k=1]\n0: ?\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn genus_mismatch_reports_line() {
        let err = parse_dataset("[fiber g=3 k=2]\n0: Q\n3: V[1,1,1]\n").unwrap_err();
        assert_eq!(
            err,
            Error::GenusMismatch {
                line: 3,
                partition: "V[1,1,1]".into(),
                genus: 2
            }
        );
    }

    #[test]
    fn duplicate_degree() {
        let err = parse_dataset("[fiber g=3 k=2]\n0: Q\n0: Q\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateDegree { line: 3, .. }));
        let err = parse_dataset("[gysin g=4 k=1]\n(0,0): Q\n(0,0): Q\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateDegree { line: 3, .. }));
    }

    #[test]
    fn malformed_input() {
        for (text, line) in [
            ("0: Q\n", 1),
            ("[fiber g=3]\n", 1),
            ("[nonsense]\n", 1),
            ("[fiber g=3 k=1]\nQ\n", 2),
            ("[betti space=x g=2]\n0: many\n", 2),
            ("[gysin g=4 k=1]\ndifferential (0,1)->(2,1): Q\n", 2),
        ] {
            match parse_dataset(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
