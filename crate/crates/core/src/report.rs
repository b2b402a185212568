use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    /// A vertex lies in two balls, or sees two code vertices.
    Overlap,
    /// A vertex lies in no ball, or sees no code vertex.
    Gap,
    NonuniqueNearest,
    BadRadius,
    DegenerateAmbient,
    /// Two code vertices are adjacent where independence is required.
    AdjacentCenters,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure<W> {
    pub kind: FailureKind,
    /// The offending vertex first, followed by the code vertices involved (if any).
    pub witness: Vec<W>,
    pub detail: String,
}

/// Outcome of a verifier. A failing report always carries a nonempty witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport<W> {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure<W>>,
    /// For domination checks: whether the code is an independent set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isolated: Option<bool>,
}

impl<W> VerifyReport<W> {
    pub fn pass() -> Self {
        VerifyReport {
            verdict: Verdict::Pass,
            failure: None,
            isolated: None,
        }
    }

    pub fn fail(kind: FailureKind, witness: Vec<W>, detail: impl Into<String>) -> Self {
        assert!(!witness.is_empty(), "failing report without witness");
        VerifyReport {
            verdict: Verdict::Fail,
            failure: Some(Failure {
                kind,
                witness,
                detail: detail.into(),
            }),
            isolated: None,
        }
    }

    pub fn with_isolated(mut self, isolated: bool) -> Self {
        self.isolated = Some(isolated);
        self
    }

    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failure_kind(&self) -> Option<FailureKind> {
        self.failure.as_ref().map(|f| f.kind)
    }

    pub fn map_witness<V>(self, f: impl Fn(W) -> V) -> VerifyReport<V> {
        VerifyReport {
            verdict: self.verdict,
            failure: self.failure.map(|fl| Failure {
                kind: fl.kind,
                witness: fl.witness.into_iter().map(&f).collect(),
                detail: fl.detail,
            }),
            isolated: self.isolated,
        }
    }
}
