//! Instability witnesses and the classification verdict.

use serde::{Deserialize, Serialize};

/// One violated stability criterion, with its growth rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum InstabilityWitness {
    /// `g'(u_inf) > 0` at an endstate; `location` is -1.0 or +1.0 encoding
    /// which infinity.
    EndstateGrowth {
        u_inf: f64,
        /// `g'(u_inf)`, positive.
        rate: f64,
        /// -1 for the left infinity, +1 for the right.
        side: i8,
    },
    /// `[g(U)]_d / [U]_d > 0` at a discontinuity.
    BadJump {
        d: f64,
        /// the jump quotient, positive
        rate: f64,
    },
    /// `g'(u_star) < 0` at a characteristic point: rate is `-g'(u_star)`.
    BadCharacteristic {
        x_star: f64,
        u_star: f64,
        /// `-g'(u_star)`, positive; one unstable eigenvalue per derivative
        /// order.
        rate: f64,
    },
}

impl InstabilityWitness {
    pub fn rate(&self) -> f64 {
        match self {
            InstabilityWitness::EndstateGrowth { rate, .. } => *rate,
            InstabilityWitness::BadJump { rate, .. } => *rate,
            InstabilityWitness::BadCharacteristic { rate, .. } => *rate,
        }
    }
}

/// Stable shape classes and the two non-stable outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Constant,
    RiemannShock,
    ContinuousFront,
    SingleJumpComposite,
    DoubleJumpComposite,
    Unstable { witnesses: Vec<InstabilityWitness> },
    Degenerate { reasons: Vec<String> },
}

impl Verdict {
    pub fn is_stable(&self) -> bool {
        !matches!(self, Verdict::Unstable { .. } | Verdict::Degenerate { .. })
    }
}

/// Full classification result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl Classification {
    pub fn new(verdict: Verdict) -> Self {
        Self { verdict }
    }

    pub fn is_stable(&self) -> bool {
        self.verdict.is_stable()
    }

    pub fn witnesses(&self) -> &[InstabilityWitness] {
        match &self.verdict {
            Verdict::Unstable { witnesses } => witnesses,
            _ => &[],
        }
    }
}
