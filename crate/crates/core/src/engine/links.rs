//! Link cohomology `IH^q(N_{k,r}, G)`: known values, unknown symbols, and the
//! linear constraints tying the unknowns together.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::engine::strat::{link_dim, stratum_dim};
use crate::error::{Error, Result, Site};
use crate::rep::{sum_subtract, IrrepSum, Partition};
use crate::sseq::circle_link_ih;

/// One link family: `N_{lower,upper}` with coefficients in `coeff`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkFamily {
    pub lower: u32,
    pub upper: u32,
    pub coeff: Partition,
}

impl LinkFamily {
    pub fn new(lower: u32, upper: u32, coeff: Partition) -> Self {
        assert!(lower < upper, "link needs lower < upper");
        LinkFamily {
            lower,
            upper,
            coeff,
        }
    }

    /// Real dimension `2(s_r - s_k) - 1`.
    pub fn real_dim(&self) -> u32 {
        link_dim(stratum_dim(self.lower), stratum_dim(self.upper))
    }

    /// Last degree below the middle, `s_r - s_k - 1`.
    pub fn truncation(&self) -> u32 {
        stratum_dim(self.upper) - stratum_dim(self.lower) - 1
    }

    pub fn at(&self, degree: u32) -> LinkKey {
        LinkKey {
            family: self.clone(),
            degree,
        }
    }

    /// Degree in the lower half with the same value, by Poincaré duality.
    pub fn reduce(&self, degree: u32) -> Option<u32> {
        let d = self.real_dim();
        if degree <= self.truncation() {
            Some(degree)
        } else if degree <= d {
            Some(d - degree)
        } else {
            None
        }
    }

    pub fn label(&self) -> String {
        format!("N_{{{},{}}},{}", self.lower, self.upper, self.coeff)
    }
}

/// `IH^degree(N_{lower,upper}, coeff)`, a local system over `A_lower`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinkKey {
    pub family: LinkFamily,
    pub degree: u32,
}

impl LinkKey {
    pub fn new(lower: u32, upper: u32, coeff: Partition, degree: u32) -> Self {
        LinkFamily::new(lower, upper, coeff).at(degree)
    }
}

// Display order within a constraint: the larger upper stratum first.
impl Ord for LinkKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .family
            .upper
            .cmp(&self.family.upper)
            .then(self.family.lower.cmp(&other.family.lower))
            .then(self.family.coeff.cmp(&other.family.coeff))
            .then(self.degree.cmp(&other.degree))
    }
}

impl PartialOrd for LinkKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LinkKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IH{}({})", self.degree, self.family.label())
    }
}

/// Known link values, with seeds and duality filled in on lookup.
///
/// Seeds: `IH^0(N, Q) = Q` for every link, and `IH^*(N_{r-1,r}, Q)` from the
/// circle-bundle spectral sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinkStore {
    known: BTreeMap<(LinkFamily, u32), IrrepSum>,
    families: BTreeSet<LinkFamily>,
}

impl LinkStore {
    pub fn new() -> Self {
        LinkStore::default()
    }

    fn seeded(&self, family: &LinkFamily, q: u32) -> Option<IrrepSum> {
        if !family.coeff.is_trivial() {
            return None;
        }
        if q == 0 {
            return Some(IrrepSum::trivial(1));
        }
        if family.upper == family.lower + 1 {
            return Some(circle_link_ih(family.upper).get(q));
        }
        None
    }

    pub fn get(&self, key: &LinkKey) -> Option<IrrepSum> {
        let q = key.family.reduce(key.degree)?;
        self.seeded(&key.family, q)
            .or_else(|| self.known.get(&(key.family.clone(), q)).cloned())
    }

    pub fn is_known(&self, key: &LinkKey) -> bool {
        self.get(key).is_some()
    }

    /// Records a value, failing if it disagrees with what is already known.
    pub fn set(&mut self, key: &LinkKey, value: IrrepSum) -> Result<()> {
        let q = key
            .family
            .reduce(key.degree)
            .ok_or_else(|| Error::Contradiction {
                symbol: key.to_string(),
                first: "0 (above the link dimension)".into(),
                second: value.to_string(),
            })?;
        self.families.insert(key.family.clone());
        if let Some(old) = self.get(key) {
            if old != value {
                return Err(Error::Contradiction {
                    symbol: key.to_string(),
                    first: old.to_string(),
                    second: value.to_string(),
                });
            }
            return Ok(());
        }
        self.known.insert((key.family.clone(), q), value);
        Ok(())
    }

    /// Marks a family as used, so that reports list it.
    pub fn register(&mut self, family: &LinkFamily) {
        self.families.insert(family.clone());
    }

    pub fn families(&self) -> impl Iterator<Item = &LinkFamily> {
        self.families.iter()
    }

    /// Values for `q = 0..=real_dim`, `None` where unknown.
    pub fn full_row(&self, family: &LinkFamily) -> Vec<Option<IrrepSum>> {
        (0..=family.real_dim())
            .map(|q| self.get(&family.at(q)))
            .collect()
    }

    /// Values below the middle, `q = 0..=truncation`.
    pub fn lower_row(&self, family: &LinkFamily) -> Vec<Option<IrrepSum>> {
        (0..=family.truncation())
            .map(|q| self.get(&family.at(q)))
            .collect()
    }
}

/// `Σ coeff · symbol = rhs` over `A_k`, recorded where it arose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub terms: BTreeMap<LinkKey, u64>,
    pub rhs: IrrepSum,
    pub origin: Site,
}

impl Constraint {
    pub fn symbols(&self) -> impl Iterator<Item = &LinkKey> {
        self.terms.keys()
    }

    pub fn lhs_string(&self) -> String {
        self.terms
            .iter()
            .map(|(k, &c)| {
                if c == 1 {
                    k.to_string()
                } else {
                    format!("{c} {k}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs_string(), self.rhs)
    }
}

/// Substitutes known values, solves single-symbol constraints, zeroes every
/// symbol of a constraint with zero right-hand side, and repeats until
/// nothing changes. Returns the constraints that still tie several unknowns.
pub fn resolve_links(
    constraints: Vec<Constraint>,
    links: &mut LinkStore,
) -> Result<Vec<Constraint>> {
    let mut pending = constraints;
    loop {
        let mut progress = false;
        let mut retained = Vec::new();
        for c in pending {
            let site = c.origin.clone();
            let mut rhs = c.rhs.clone();
            let mut open = BTreeMap::new();
            for (key, coeff) in &c.terms {
                match links.get(key) {
                    Some(v) => {
                        rhs =
                            sum_subtract(&rhs, &v.scale(*coeff)).map_err(|e| e.at(site.clone()))?;
                    }
                    None => {
                        open.insert(key.clone(), *coeff);
                    }
                }
            }
            if open.is_empty() {
                if !rhs.is_zero() {
                    return Err(Error::Contradiction {
                        symbol: c.lhs_string(),
                        first: c.rhs.to_string(),
                        second: format!("known values leaving {rhs} unexplained"),
                    }
                    .at(site));
                }
                continue;
            }
            if open.len() == 1 {
                let (key, coeff) = open.into_iter().next().unwrap();
                let value = rhs.divide(coeff).ok_or_else(|| {
                    Error::Contradiction {
                        symbol: key.to_string(),
                        first: format!("{coeff} {key}"),
                        second: rhs.to_string(),
                    }
                    .at(site.clone())
                })?;
                links.set(&key, value).map_err(|e| e.at(site))?;
                progress = true;
                continue;
            }
            if rhs.is_zero() {
                for key in open.keys() {
                    links
                        .set(key, IrrepSum::zero())
                        .map_err(|e| e.at(site.clone()))?;
                }
                progress = true;
                continue;
            }
            retained.push(Constraint {
                terms: open,
                rhs,
                origin: site,
            });
        }
        pending = retained;
        if !progress {
            return Ok(pending);
        }
    }
}
