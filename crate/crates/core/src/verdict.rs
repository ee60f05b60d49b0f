use serde::{Deserialize, Serialize};
use std::fmt;

/// Default slack on rate comparisons: `x ≥ 0` is read as `x ≥ −1e−12`.
pub const COMPARISON_TOL: f64 = 1e-12;

pub(crate) fn nonneg(x: f64) -> bool {
    x >= -COMPARISON_TOL
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
    /// The map is not invertible here; the criteria do not apply.
    Indeterminate,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
            Verdict::Unknown => "UNKNOWN",
            Verdict::Indeterminate => "INDETERMINATE",
        }
    }

    /// Conjunction over time: NO dominates, then INDETERMINATE, then UNKNOWN.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (No, _) | (_, No) => No,
            (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
            (Unknown, _) | (_, Unknown) => Unknown,
            (Yes, Yes) => Yes,
        }
    }

    /// C-ABI code.
    pub fn code(self) -> i32 {
        match self {
            Verdict::Yes => 1,
            Verdict::No => 0,
            Verdict::Unknown => 2,
            Verdict::Indeterminate => 3,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjunction() {
        use Verdict::*;
        assert_eq!(Yes.and(Yes), Yes);
        assert_eq!(Yes.and(Unknown), Unknown);
        assert_eq!(Unknown.and(Indeterminate), Indeterminate);
        assert_eq!(Indeterminate.and(No), No);
    }

    #[test]
    fn serde_names() {
        assert_eq!(serde_json::to_string(&Verdict::Indeterminate).unwrap(), "\"INDETERMINATE\"");
        assert_eq!(Verdict::Unknown.to_string(), "UNKNOWN");
    }
}
