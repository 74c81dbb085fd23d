use std::collections::BTreeMap;
use std::path::Path;

use crate::betti::BettiWithUnknowns;
use crate::datasets::file::{parse_dataset, DatasetFile, Section, SectionKind};
use crate::error::{Error, Result};
use crate::sseq::{GradedTable, GysinPage};

const BUILTIN: &[(&str, &str)] = &[
    ("genus1.ihdat", include_str!("../../data/genus1.ihdat")),
    ("genus2.ihdat", include_str!("../../data/genus2.ihdat")),
    ("genus3.ihdat", include_str!("../../data/genus3.ihdat")),
    ("genus4.ihdat", include_str!("../../data/genus4.ihdat")),
];

/// Named dataset sections. Later insertions replace earlier ones by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Registry {
    sections: BTreeMap<String, Section>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    pub fn insert_file(&mut self, file: DatasetFile) -> Result<()> {
        for s in file.sections {
            validate(&s)?;
            self.sections.insert(s.name(), s);
        }
        Ok(())
    }

    pub fn insert_text(&mut self, origin: &str, text: &str) -> Result<()> {
        let file = parse_dataset(text).map_err(|e| match e {
            Error::Parse { line, message } => Error::Parse {
                line,
                message: format!("{origin}: {message}"),
            },
            other => other,
        })?;
        self.insert_file(file)
    }

    /// Overrides sections with every `*.ihdat` file in `dir`, in name order.
    pub fn with_overrides(mut self, dir: &Path) -> Result<Self> {
        let read_err = |e: std::io::Error| Error::InvalidDataset {
            name: dir.display().to_string(),
            message: e.to_string(),
        };
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(read_err)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "ihdat"))
            .collect();
        paths.sort();
        for p in paths {
            let text = std::fs::read_to_string(&p).map_err(read_err)?;
            self.insert_text(&p.display().to_string(), &text)?;
        }
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Result<&Section> {
        self.sections
            .get(name)
            .ok_or_else(|| Error::MissingDataset(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.sections.keys().map(String::as_str)
    }

    pub fn sections(&self) -> impl Iterator<Item = &Section> {
        self.sections.values()
    }

    pub fn section_mut(&mut self, name: &str) -> Option<&mut Section> {
        self.sections.get_mut(name)
    }

    pub fn fiber(&self, g: u32, k: u32) -> Result<&GradedTable> {
        let name = format!("fiber g={g} k={k}");
        self.get(&name)?.table().ok_or(Error::MissingDataset(name))
    }

    pub fn betti(&self, space: &str) -> Result<&BettiWithUnknowns> {
        let name = format!("betti {space}");
        self.get(&name)?.betti().ok_or(Error::MissingDataset(name))
    }

    /// The Betti section with the given genus and role, e.g. `toroidal`.
    pub fn betti_by_role(&self, g: u32, role: &str) -> Option<&Section> {
        self.sections.values().find(|s| {
            s.kind == SectionKind::Betti && s.key_u32("g") == Some(g) && s.key("role") == Some(role)
        })
    }

    pub fn gysin(&self, g: u32, k: u32) -> Result<&GysinPage> {
        let name = format!("gysin g={g} k={k}");
        self.get(&name)?.gysin().ok_or(Error::MissingDataset(name))
    }

    /// Sections of the given kind whose keys all match.
    pub fn find(&self, kind: SectionKind, keys: &[(&str, &str)]) -> Vec<&Section> {
        self.sections
            .values()
            .filter(|s| s.kind == kind && keys.iter().all(|(k, v)| s.key(k) == Some(v)))
            .collect()
    }

    pub fn to_file(&self) -> DatasetFile {
        DatasetFile {
            sections: self.sections.values().cloned().collect(),
        }
    }
}

/// Load-time checks beyond the grammar: the fiber over the largest boundary
/// stratum is a compact quotient of a smooth family, so its rank row must be
/// Poincaré symmetric.
fn validate(s: &Section) -> Result<()> {
    if s.kind != SectionKind::Fiber || s.key("cone").is_some() {
        return Ok(());
    }
    let (Some(g), Some(k)) = (s.key_u32("g"), s.key_u32("k")) else {
        return Ok(());
    };
    if k + 1 != g {
        return Ok(());
    }
    let row = s
        .table()
        .map(GradedTable::dimension_row)
        .unwrap_or_default();
    let mirrored: Vec<u128> = row.iter().rev().copied().collect();
    if row != mirrored {
        return Err(Error::InvalidDataset {
            name: s.name(),
            message: format!("rank row {row:?} is not Poincaré symmetric"),
        });
    }
    Ok(())
}

/// Every table shipped with the crate.
pub fn builtin_registry() -> Registry {
    let mut r = Registry::empty();
    for (origin, text) in BUILTIN {
        r.insert_text(origin, text)
            .unwrap_or_else(|e| panic!("builtin {origin}: {e}"));
    }
    r
}

/// Raw text of the builtin files, for round-trip tests and `--dump`.
pub fn builtin_sources() -> &'static [(&'static str, &'static str)] {
    BUILTIN
}
