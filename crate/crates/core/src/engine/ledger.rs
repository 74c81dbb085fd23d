//! Stratum-by-stratum accounting: what the bigger strata already explain in
//! the fiber cohomology over `A_k`, and what is left over as new local systems.

use std::collections::BTreeMap;
use std::fmt;

use crate::engine::links::{Constraint, LinkFamily, LinkKey, LinkStore};
use crate::engine::strat::Stratification;
use crate::error::{Error, Result, Site};
use crate::rep::{sum_subtract, IrrepSum, Partition};
use crate::sseq::GradedTable;

/// A new local system `system` over `A_stratum` found in fiber degree `fiber_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub stratum: u32,
    pub fiber_degree: u32,
    pub system: IrrepSum,
    /// `j - (n - s_k)`: the perverse shift as printed in decomposition tables.
    pub shift_label: i64,
}

impl LedgerEntry {
    pub fn new(strat: &Stratification, stratum: u32, fiber_degree: u32, system: IrrepSum) -> Self {
        let shift_label = fiber_degree as i64 - strat.codim(stratum) as i64;
        LedgerEntry {
            stratum,
            fiber_degree,
            system,
            shift_label,
        }
    }
}

impl fmt::Display for LedgerEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "A_{} j={} {} [{}]",
            self.stratum, self.fiber_degree, self.system, self.shift_label
        )
    }
}

/// One source column of the contribution table over `A_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Source {
    /// Stratum carrying the source system (`g` for the open stratum).
    pub upper: u32,
    pub fiber_degree: u32,
    pub system: IrrepSum,
}

/// Truncated contributions over `A_k`: substituted values plus unknown link symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicted {
    pub stratum: u32,
    pub known: GradedTable,
    pub unknowns: BTreeMap<u32, BTreeMap<LinkKey, u64>>,
    pub sources: Vec<Source>,
    /// Highest degree that any source reaches.
    pub reach: u32,
}

impl Predicted {
    pub fn unknowns_at(&self, d: u32) -> Option<&BTreeMap<LinkKey, u64>> {
        self.unknowns.get(&d).filter(|u| !u.is_empty())
    }

    /// `known + 2 IH4(N_{..}) + ...` at degree `d`.
    pub fn describe(&self, d: u32) -> String {
        let mut parts = Vec::new();
        if let Some(u) = self.unknowns_at(d) {
            for (k, &c) in u {
                parts.push(if c == 1 {
                    k.to_string()
                } else {
                    format!("{c} {k}")
                });
            }
        }
        let known = self.known.get(d);
        if !known.is_zero() || parts.is_empty() {
            parts.push(known.to_string());
        }
        parts.join(" + ")
    }
}

/// Contributions to the fiber cohomology over `A_k` from the open stratum and
/// from every ledger entry on a bigger stratum. An entry `(r, j, G)` adds
/// `IH^{d-j}(N_{k,r}, G)` for `0 ≤ d - j ≤ s_r - s_k - 1`.
pub fn predicted_contributions(
    k: u32,
    ledger: &[LedgerEntry],
    links: &mut LinkStore,
    strat: &Stratification,
) -> Predicted {
    let g = strat.genus;
    let mut sources = vec![Source {
        upper: g,
        fiber_degree: 0,
        system: IrrepSum::trivial(1),
    }];
    let mut above: Vec<&LedgerEntry> = ledger.iter().filter(|e| e.stratum > k).collect();
    above.sort_by_key(|e| (std::cmp::Reverse(e.stratum), e.fiber_degree));
    sources.extend(above.iter().map(|e| Source {
        upper: e.stratum,
        fiber_degree: e.fiber_degree,
        system: e.system.untwisted(),
    }));

    let mut known = GradedTable::new(k);
    let mut unknowns: BTreeMap<u32, BTreeMap<LinkKey, u64>> = BTreeMap::new();
    let mut reach = 0;
    for src in &sources {
        for (term, mult) in src.system.terms() {
            let family = LinkFamily::new(k, src.upper, term.partition.clone());
            links.register(&family);
            for q in 0..=family.truncation() {
                let d = src.fiber_degree + q;
                reach = reach.max(d);
                let key = family.at(q);
                match links.get(&key) {
                    Some(v) => known.add(d, &v.scale(mult)),
                    None => *unknowns.entry(d).or_default().entry(key).or_insert(0) += mult,
                }
            }
        }
    }
    Predicted {
        stratum: k,
        known,
        unknowns,
        sources,
        reach,
    }
}

/// New systems over `A_k` and the constraints left on link unknowns.
///
/// Degrees free of unknowns give `fiber - known` directly. Relative hard
/// Lefschetz then mirrors them about `n - s_k`; a degree whose mirror is also
/// undetermined gets nothing new. What remains in unknown-bearing degrees
/// becomes a constraint.
pub fn infer_new_systems(
    k: u32,
    fiber: &GradedTable,
    predicted: &Predicted,
    strat: &Stratification,
) -> Result<(Vec<LedgerEntry>, Vec<Constraint>)> {
    let site = |d: u32| Site {
        genus: strat.genus,
        stratum: Some(k),
        degree: Some(d),
    };
    let centre = strat.codim(k);
    let top = (2 * centre).max(fiber.extent()).max(predicted.reach);

    let mut new: BTreeMap<u32, IrrepSum> = BTreeMap::new();
    for d in 0..=top {
        if predicted.unknowns_at(d).is_none() {
            let rest = sum_subtract(&fiber.get(d).untwisted(), &predicted.known.get(d))
                .map_err(|e| e.at(site(d)))?;
            new.insert(d, rest);
        }
    }

    let mut filled = new.clone();
    for d in 0..=top {
        let mirror = 2 * centre as i64 - d as i64;
        let here = new.get(&d);
        if mirror < 0 {
            if let Some(v) = here.filter(|v| !v.is_zero()) {
                return Err(Error::SymmetryViolation {
                    degree: d,
                    mirror,
                    here: v.to_string(),
                    there: "nothing".into(),
                }
                .at(site(d)));
            }
            filled.entry(d).or_default();
            continue;
        }
        let m = mirror as u32;
        match (here, new.get(&m)) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::SymmetryViolation {
                    degree: d,
                    mirror,
                    here: a.to_string(),
                    there: b.to_string(),
                }
                .at(site(d)));
            }
            (None, Some(b)) => {
                filled.insert(d, b.clone());
            }
            (None, None) => {
                filled.insert(d, IrrepSum::zero());
            }
            _ => {}
        }
    }

    let mut entries = Vec::new();
    let mut constraints = Vec::new();
    for d in 0..=top {
        let n = &filled[&d];
        if let Some(u) = predicted.unknowns_at(d) {
            let rhs = sum_subtract(&fiber.get(d).untwisted(), &predicted.known.get(d))
                .and_then(|r| sum_subtract(&r, n))
                .map_err(|e| e.at(site(d)))?;
            constraints.push(Constraint {
                terms: u.clone(),
                rhs,
                origin: site(d),
            });
        }
        if !n.is_zero() {
            entries.push(LedgerEntry::new(strat, k, d, n.clone()));
        }
    }
    Ok((entries, constraints))
}

/// Multiset of ledger fiber degrees over `A_k`, counted with multiplicity.
pub fn degree_profile(ledger: &[LedgerEntry], k: u32) -> BTreeMap<u32, u64> {
    let mut out = BTreeMap::new();
    for e in ledger.iter().filter(|e| e.stratum == k) {
        *out.entry(e.fiber_degree).or_insert(0) += e.system.count();
    }
    out
}

/// Systems over `A_k` split into one entry per irreducible summand class.
pub fn split_terms(entry: &LedgerEntry) -> Vec<(Partition, u64)> {
    entry
        .system
        .untwisted()
        .terms()
        .map(|(t, m)| (t.partition.clone(), m))
        .collect()
}
