//! Global assembly `H^m(toroidal) = IH^m(Sat_g) ⊕ shifted summands` and the
//! blow-up split for the perfect cone compactification.

use std::collections::BTreeMap;
use std::fmt;

use crate::betti::{BettiValue, BettiWithUnknowns};
use crate::engine::ledger::{split_terms, LedgerEntry};
use crate::engine::strat::Stratification;
use crate::error::{Error, Result, Site};
use crate::rep::Partition;
use crate::taut::taut_graded_dims;

/// One row of the decomposition table, indexed by global degree `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandRow {
    pub label: String,
    pub stratum: u32,
    /// `None` for the merged row of new systems over `A_0`.
    pub fiber_degree: Option<u32>,
    pub multiplicity: u64,
    pub coeff: Partition,
    pub values: Vec<BettiValue>,
}

/// `lhs = constant + Σ symbols`, for a degree the data cannot pin down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub degree: u32,
    pub lhs: String,
    pub constant: u64,
    pub symbols: Vec<(String, u64)>,
    /// Lower bounds for `lhs` and each symbol.
    pub bounds: Vec<(String, u64)>,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.constant)?;
        for (s, c) in &self.symbols {
            if *c == 1 {
                write!(f, " + {s}")?;
            } else {
                write!(f, " + {c} {s}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalResult {
    pub ih: BettiWithUnknowns,
    /// The toroidal Betti row with any lower bounds the assembly implies.
    pub toroidal: BettiWithUnknowns,
    pub summands: Vec<SummandRow>,
    pub relations: Vec<Relation>,
    /// `IH^*(Sat_k, V)` for every non-trivial coefficient system in the ledger.
    pub coefficient_ih: Vec<BettiWithUnknowns>,
}

impl GlobalResult {
    /// Column sums of the IH row and every summand row.
    pub fn sum_row(&self) -> Vec<BettiValue> {
        let top = self.toroidal.top_degree();
        (0..=top)
            .map(|m| {
                let cells = std::iter::once(self.ih.get(m))
                    .chain(self.summands.iter().map(|r| cell(&r.values, m)));
                let mut lower = 0;
                let mut exact = true;
                for c in cells {
                    lower += c.lower();
                    exact &= c.is_known();
                }
                if exact {
                    BettiValue::Known(lower)
                } else {
                    BettiValue::Unknown {
                        lower,
                        symbol: format!("sum{m}"),
                    }
                }
            })
            .collect()
    }
}

fn cell(values: &[BettiValue], m: usize) -> BettiValue {
    values.get(m).cloned().unwrap_or(BettiValue::Known(0))
}

fn shift_text(shift: i64) -> String {
    if shift == 0 {
        "[0]".into()
    } else {
        format!("[{shift}]")
    }
}

fn ih_symbol(m: usize, k: u32, coeff: &Partition) -> String {
    if coeff.is_trivial() {
        format!("IH{m}(Sat_{k})")
    } else {
        format!("IH{m}(Sat_{k},{coeff})")
    }
}

/// `IH^m(Sat_g) = H^m(toroidal) - Σ_{(k,j,G)} IH^{m-j}(Sat_k, G)`.
///
/// `Q` summands read `recursive_ih[k]`; other coefficients stay symbolic with
/// lower bound 0. `IH^m(Sat_g)` itself is bounded below by the tautological
/// ring. Per degree the slack `H^m - Σ lower bounds` decides: zero fixes every
/// symbol, a single symbol absorbs it, otherwise the relation is kept.
pub fn assemble_global(
    strat: &Stratification,
    toroidal: &BettiWithUnknowns,
    ledger: &[LedgerEntry],
    recursive_ih: &BTreeMap<u32, BettiWithUnknowns>,
) -> Result<GlobalResult> {
    let g = strat.genus;
    let top = 2 * strat.dim as usize;
    let empty = |label: String| BettiWithUnknowns {
        label,
        values: vec![BettiValue::Known(0); top + 1],
    };

    let mut entries: Vec<&LedgerEntry> = ledger.iter().collect();
    entries.sort_by_key(|e| (std::cmp::Reverse(e.stratum), e.fiber_degree));

    let mut summands: Vec<SummandRow> = Vec::new();
    let mut base_row: Option<SummandRow> = None;
    for e in entries {
        let k = e.stratum;
        let j = e.fiber_degree as usize;
        for (coeff, mult) in split_terms(e) {
            if k == 0 && coeff.is_trivial() {
                let row = base_row.get_or_insert_with(|| SummandRow {
                    label: "new on A_0".into(),
                    stratum: 0,
                    fiber_degree: None,
                    multiplicity: 1,
                    coeff: Partition::trivial(),
                    values: vec![BettiValue::Known(0); top + 1],
                });
                if j <= top {
                    row.values[j] = BettiValue::Known(row.values[j].lower() + mult);
                }
                continue;
            }
            let mut values = vec![BettiValue::Known(0); top + 1];
            let sat_top = 2 * strat.s(k) as usize;
            for q in 0..=sat_top {
                let m = j + q;
                if m > top {
                    break;
                }
                values[m] = if coeff.is_trivial() {
                    let base = recursive_ih.get(&k).ok_or_else(|| {
                        Error::MissingDataset(format!("intersection cohomology of Sat_{k}"))
                    })?;
                    match base.get(q) {
                        BettiValue::Known(v) => BettiValue::Known(mult * v),
                        BettiValue::Unknown { lower, symbol } => BettiValue::Unknown {
                            lower: mult * lower,
                            symbol,
                        },
                    }
                } else {
                    BettiValue::Unknown {
                        lower: 0,
                        symbol: ih_symbol(q, k, &coeff),
                    }
                };
            }
            let prefix = if mult > 1 {
                format!("{mult} ")
            } else {
                String::new()
            };
            let label = if coeff.is_trivial() {
                format!("{prefix}ih(Sat_{k}){}", shift_text(e.shift_label))
            } else {
                format!("{prefix}ih(Sat_{k},{coeff}){}", shift_text(e.shift_label))
            };
            summands.push(SummandRow {
                label,
                stratum: k,
                fiber_degree: Some(e.fiber_degree),
                multiplicity: mult,
                coeff,
                values,
            });
        }
    }
    summands.extend(base_row);

    let taut = taut_graded_dims(g);
    let mut ih = empty(format!("IH(Sat_{g})"));
    let mut tor = toroidal.clone();
    tor.values.resize(top + 1, BettiValue::Known(0));
    let mut solved: BTreeMap<String, BettiValue> = BTreeMap::new();
    let mut relations = Vec::new();

    for m in 0..=top {
        let own = ih_symbol(m, g, &Partition::trivial());
        let own_lower = taut.get(m);
        let mut constant = 0u64;
        let mut symbols: Vec<(String, u64, u64)> = vec![(own.clone(), 1, own_lower)];
        for row in &summands {
            match &row.values[m] {
                BettiValue::Known(v) => constant += v,
                BettiValue::Unknown { lower, symbol } => {
                    let coeff = if row.coeff.is_trivial() {
                        1
                    } else {
                        row.multiplicity
                    };
                    if let Some(BettiValue::Known(v)) = solved.get(symbol) {
                        constant += coeff * v;
                        continue;
                    }
                    let lower = if row.coeff.is_trivial() { *lower } else { 0 };
                    symbols.push((symbol.clone(), coeff, lower));
                }
            }
        }
        let floor: u64 = constant + symbols.iter().map(|(_, c, l)| c * l).sum::<u64>();
        let site = Site {
            genus: g,
            stratum: None,
            degree: Some(m as u32),
        };
        match tor.get(m) {
            BettiValue::Known(h) => {
                if h < floor {
                    return Err(Error::NegativeMultiplicity {
                        missing: format!("{} classes", floor - h),
                        context: format!(
                            "H^{m} of {} is {h} but the summands need at least {floor}",
                            tor.label
                        ),
                    }
                    .at(site));
                }
                let slack = h - floor;
                if slack == 0 {
                    for (s, _, l) in &symbols {
                        solved.insert(s.clone(), BettiValue::Known(*l));
                    }
                } else if symbols.len() == 1 {
                    solved.insert(own.clone(), BettiValue::Known(own_lower + slack));
                } else {
                    relations.push(relation(m, h.to_string(), constant, &symbols, None));
                    for (s, _, l) in &symbols {
                        solved.insert(
                            s.clone(),
                            BettiValue::Unknown {
                                lower: *l,
                                symbol: s.clone(),
                            },
                        );
                    }
                }
            }
            BettiValue::Unknown { lower, symbol } => {
                let bound = lower.max(floor);
                tor.values[m] = BettiValue::Unknown {
                    lower: bound,
                    symbol: symbol.clone(),
                };
                relations.push(relation(m, symbol, constant, &symbols, Some(bound)));
                for (s, _, l) in &symbols {
                    solved.insert(
                        s.clone(),
                        BettiValue::Unknown {
                            lower: *l,
                            symbol: s.clone(),
                        },
                    );
                }
            }
        }
        ih.values[m] = solved[&own].clone();
    }

    for row in &mut summands {
        for v in &mut row.values {
            if let BettiValue::Unknown { symbol, .. } = v {
                if let Some(s) = solved.get(symbol.as_str()) {
                    if !row.coeff.is_trivial() {
                        *v = match s {
                            BettiValue::Known(x) => BettiValue::Known(row.multiplicity * x),
                            BettiValue::Unknown { lower, symbol } => BettiValue::Unknown {
                                lower: row.multiplicity * lower,
                                symbol: symbol.clone(),
                            },
                        };
                    }
                }
            }
        }
    }

    let mut coefficient_ih = Vec::new();
    let mut seen: Vec<(u32, Partition)> = Vec::new();
    for row in summands.iter().filter(|r| !r.coeff.is_trivial()) {
        if seen.contains(&(row.stratum, row.coeff.clone())) {
            continue;
        }
        seen.push((row.stratum, row.coeff.clone()));
        let k = row.stratum;
        let values = (0..=2 * strat.s(k) as usize)
            .map(|q| {
                let s = ih_symbol(q, k, &row.coeff);
                solved.get(&s).cloned().unwrap_or(BettiValue::Unknown {
                    lower: 0,
                    symbol: s,
                })
            })
            .collect();
        coefficient_ih.push(BettiWithUnknowns {
            label: format!("IH(Sat_{k},{})", row.coeff),
            values,
        });
    }

    Ok(GlobalResult {
        ih,
        toroidal: tor,
        summands,
        relations,
        coefficient_ih,
    })
}

fn relation(
    m: usize,
    lhs: String,
    constant: u64,
    symbols: &[(String, u64, u64)],
    lhs_bound: Option<u64>,
) -> Relation {
    let mut bounds: Vec<(String, u64)> = Vec::new();
    if let Some(b) = lhs_bound {
        bounds.push((lhs.clone(), b));
    }
    bounds.extend(symbols.iter().map(|(s, _, l)| (s.clone(), *l)));
    Relation {
        degree: m as u32,
        lhs,
        constant,
        symbols: symbols.iter().map(|(s, c, _)| (s.clone(), *c)).collect(),
        bounds,
    }
}

/// Exceptional-divisor classes that the blow-up of an isolated singular point
/// of codimension `n` adds in degree `j`.
pub fn exceptional_share(exceptional: &BettiWithUnknowns, n: usize, j: usize) -> u64 {
    if (n..=2 * n - 2).contains(&j) {
        exceptional.get(j).lower()
    } else if (2..n).contains(&j) {
        exceptional.get(2 * n - j).lower()
    } else {
        0
    }
}

/// `IH^j` of the contracted space from the cohomology of its blow-up at a point.
pub fn blowup_split(
    blown_up: &BettiWithUnknowns,
    exceptional: &BettiWithUnknowns,
    n: usize,
    label: &str,
) -> Result<BettiWithUnknowns> {
    let values = (0..=2 * n)
        .map(|j| {
            let e = exceptional_share(exceptional, n, j);
            match blown_up.get(j) {
                BettiValue::Known(h) => h.checked_sub(e).map(BettiValue::Known).ok_or_else(|| {
                    Error::NegativeMultiplicity {
                        missing: format!("{} classes", e - h),
                        context: format!(
                            "degree {j}: {} has {h}, the exceptional divisor needs {e}",
                            blown_up.label
                        ),
                    }
                }),
                BettiValue::Unknown { lower, .. } => Ok(BettiValue::Unknown {
                    lower: lower.saturating_sub(e),
                    symbol: format!("IH{j}({label})"),
                }),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BettiWithUnknowns {
        label: format!("IH({label})"),
        values,
    })
}

/// Inverse of [`blowup_split`]: adds the exceptional classes back.
pub fn blowup_restore(
    contracted: &BettiWithUnknowns,
    exceptional: &BettiWithUnknowns,
    n: usize,
    label: &str,
) -> BettiWithUnknowns {
    let values = (0..=2 * n)
        .map(|j| {
            let e = exceptional_share(exceptional, n, j);
            match contracted.get(j) {
                BettiValue::Known(v) => BettiValue::Known(v + e),
                BettiValue::Unknown { lower, .. } => BettiValue::Unknown {
                    lower: lower + e,
                    symbol: format!("h{j}({label})"),
                },
            }
        })
        .collect();
    BettiWithUnknowns {
        label: label.to_string(),
        values,
    }
}
