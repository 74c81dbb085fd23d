use std::fmt;

/// One Betti number that may be unknown, carrying the best lower bound found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BettiValue {
    Known(u64),
    Unknown { lower: u64, symbol: String },
}

impl BettiValue {
    pub fn lower(&self) -> u64 {
        match self {
            BettiValue::Known(v) => *v,
            BettiValue::Unknown { lower, .. } => *lower,
        }
    }

    pub fn known(&self) -> Option<u64> {
        match self {
            BettiValue::Known(v) => Some(*v),
            BettiValue::Unknown { .. } => None,
        }
    }

    pub fn is_known(&self) -> bool {
        matches!(self, BettiValue::Known(_))
    }
}

impl fmt::Display for BettiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BettiValue::Known(v) => write!(f, "{v}"),
            BettiValue::Unknown { lower: 0, .. } => f.write_str("?"),
            BettiValue::Unknown { lower, .. } => write!(f, ">={lower}"),
        }
    }
}

/// A Betti row indexed by degree; degrees past the end are zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BettiWithUnknowns {
    pub label: String,
    pub values: Vec<BettiValue>,
}

impl BettiWithUnknowns {
    pub fn known(label: impl Into<String>, values: &[u64]) -> Self {
        BettiWithUnknowns {
            label: label.into(),
            values: values.iter().map(|&v| BettiValue::Known(v)).collect(),
        }
    }

    pub fn get(&self, degree: usize) -> BettiValue {
        self.values
            .get(degree)
            .cloned()
            .unwrap_or(BettiValue::Known(0))
    }

    pub fn top_degree(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn lower_bounds(&self) -> Vec<u64> {
        self.values.iter().map(BettiValue::lower).collect()
    }

    pub fn is_fully_known(&self) -> bool {
        self.values.iter().all(BettiValue::is_known)
    }

    pub fn unknown_degrees(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_known())
            .map(|(d, _)| d)
            .collect()
    }

    /// Space-separated row, e.g. `1 0 1 0 >=2 0 1`.
    pub fn row_string(&self) -> String {
        self.values
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Entries in even degrees only.
    pub fn even(&self) -> Vec<BettiValue> {
        self.values.iter().step_by(2).cloned().collect()
    }
}
