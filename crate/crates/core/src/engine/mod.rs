//! The decomposition-theorem ledger, run genus by genus.

pub mod global;
pub mod ledger;
pub mod links;
pub mod strat;

use std::collections::BTreeMap;

pub use global::{
    assemble_global, blowup_restore, blowup_split, exceptional_share, GlobalResult, Relation,
    SummandRow,
};
pub use ledger::{
    degree_profile, infer_new_systems, predicted_contributions, LedgerEntry, Predicted,
};
pub use links::{resolve_links, Constraint, LinkFamily, LinkKey, LinkStore};
pub use strat::{defect, make_stratification, Stratification};

use crate::betti::BettiWithUnknowns;
use crate::datasets::file::{seed_coefficient, SectionKind};
use crate::datasets::Registry;
use crate::error::{Error, Result, Site};
use crate::sseq::GradedTable;

/// How leftovers in degrees with unknown link cohomology are attributed.
pub const POLICY: &str = "minimal-new";

/// One stratum's pass: the fiber, what bigger strata predict, what is new.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumStep {
    pub stratum: u32,
    pub fiber: GradedTable,
    pub predicted: Predicted,
    pub new: Vec<LedgerEntry>,
    /// Constraints as emitted, before resolution.
    pub emitted: Vec<Constraint>,
}

/// The contracted space of a blow-up at a point, e.g. `Perf_4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowUp {
    pub label: String,
    pub exceptional: BettiWithUnknowns,
    pub ih: BettiWithUnknowns,
    /// Whether the new systems over `A_0` are exactly the exceptional classes.
    pub base_matches_exceptional: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusReport {
    pub genus: u32,
    pub strat: Stratification,
    pub defect: u32,
    pub steps: Vec<StratumStep>,
    pub ledger: Vec<LedgerEntry>,
    /// Constraints of this genus that tie several unknowns together.
    pub constraints: Vec<Constraint>,
    /// Link knowledge after this genus, including earlier genera.
    pub links: LinkStore,
    pub global: GlobalResult,
    pub blowup: Option<BlowUp>,
}

impl GenusReport {
    pub fn ih(&self) -> &BettiWithUnknowns {
        &self.global.ih
    }

    pub fn ledger_at(&self, k: u32) -> impl Iterator<Item = &LedgerEntry> {
        self.ledger.iter().filter(move |e| e.stratum == k)
    }
}

/// Runs genera `1..=g` in order. Link values found in one genus are reused by
/// the next, and each `IH^*(Sat_k)` feeds the global assembly above it.
pub struct Engine<'a> {
    registry: &'a Registry,
    links: LinkStore,
    ih: BTreeMap<u32, BettiWithUnknowns>,
}

impl<'a> Engine<'a> {
    pub fn new(registry: &'a Registry) -> Result<Self> {
        let mut links = LinkStore::new();
        for s in registry
            .sections()
            .filter(|s| s.kind == SectionKind::LinkSeed)
        {
            let (Some(k), Some(r), Some(coeff), Some(table)) = (
                s.key_u32("k"),
                s.key_u32("r"),
                seed_coefficient(s),
                s.table(),
            ) else {
                continue;
            };
            let family = LinkFamily::new(k, r, coeff);
            for q in 0..=family.truncation() {
                links
                    .set(&family.at(q), table.get(q))
                    .map_err(|e| Error::InvalidDataset {
                        name: s.name(),
                        message: e.to_string(),
                    })?;
            }
        }
        let mut ih = BTreeMap::new();
        ih.insert(0, BettiWithUnknowns::known("IH(Sat_0)", &[1]));
        Ok(Engine {
            registry,
            links,
            ih,
        })
    }

    pub fn links(&self) -> &LinkStore {
        &self.links
    }

    pub fn run(&mut self, g: u32) -> Result<GenusReport> {
        let fibers = (0..g)
            .map(|k| self.registry.fiber(g, k).cloned())
            .collect::<Result<Vec<_>>>()?;
        let dims: Vec<i64> = fibers
            .iter()
            .map(|f| f.extent().div_ceil(2) as i64)
            .collect();
        let strat = make_stratification(g, &dims)?;
        let at = |stratum: Option<u32>| Site {
            genus: g,
            stratum,
            degree: None,
        };

        let mut ledger: Vec<LedgerEntry> = Vec::new();
        let mut steps = Vec::new();
        let mut constraints = Vec::new();
        for k in (0..g).rev() {
            let fiber = &fibers[k as usize];
            let predicted = predicted_contributions(k, &ledger, &mut self.links, &strat);
            let (new, emitted) = infer_new_systems(k, fiber, &predicted, &strat)?;
            let kept = resolve_links(emitted.clone(), &mut self.links)?;
            constraints.extend(kept);
            ledger.extend(new.iter().cloned());
            steps.push(StratumStep {
                stratum: k,
                fiber: fiber.clone(),
                predicted,
                new,
                emitted,
            });
        }
        // resolutions at lower strata can settle constraints kept higher up
        let mut constraints = resolve_links(constraints, &mut self.links)?;
        constraints.sort_by_key(|c| (c.origin.stratum, c.origin.degree));

        let toroidal = self
            .registry
            .betti_by_role(g, "toroidal")
            .and_then(|s| s.betti())
            .ok_or_else(|| Error::MissingDataset(format!("betti g={g} role=toroidal")))?;
        let global = assemble_global(&strat, toroidal, &ledger, &self.ih).map_err(|e| match e {
            Error::At { .. } => e,
            other => other.at(at(None)),
        })?;

        let blowup = match self
            .registry
            .betti_by_role(g, "exceptional")
            .and_then(|s| s.betti())
        {
            Some(exc) => {
                let n = strat.dim as usize;
                let label = format!("Perf_{g}");
                let ih = blowup_split(&global.toroidal, exc, n, &label)
                    .map_err(|e| e.at(at(Some(0))))?;
                let base = degree_profile(&ledger, 0);
                let base_matches_exceptional = (0..=2 * n).all(|j| {
                    base.get(&(j as u32)).copied().unwrap_or(0) == exceptional_share(exc, n, j)
                });
                Some(BlowUp {
                    label,
                    exceptional: exc.clone(),
                    ih,
                    base_matches_exceptional,
                })
            }
            None => None,
        };

        self.ih.insert(g, global.ih.clone());
        Ok(GenusReport {
            genus: g,
            defect: defect(&strat),
            strat,
            steps,
            ledger,
            constraints,
            links: self.links.clone(),
            global,
            blowup,
        })
    }
}

/// Reports for genera `1..=g`.
pub fn run_through(g: u32, registry: &Registry) -> Result<Vec<GenusReport>> {
    let mut engine = Engine::new(registry)?;
    (1..=g).map(|h| engine.run(h)).collect()
}

/// The report for genus `g`, after running every lower genus it depends on.
pub fn run_genus(g: u32, registry: &Registry) -> Result<GenusReport> {
    if g == 0 {
        return Err(Error::BadDims("genus must be positive".into()));
    }
    Ok(run_through(g, registry)?.pop().expect("at least one genus"))
}
