//! Exact interval and polygon set algebra, group reductions, congruence
//! witnesses and fundamental-domain checks.

use serde::{Deserialize, Serialize};

pub mod action1d;
pub mod gram;
pub mod interval;
pub mod plane;
pub mod poly;

pub use action1d::{congruent, generator_check, Action1D, GeneratorReport};
pub use gram::{exponential_gram, GramCheck};
pub use interval::{format_q, parse_q, q, q_to_f64, qf, IntervalUnion, SetJson, Units, Q};
pub use plane::{
    dilation_congruent_2d, dilation_generator_2d, translation_congruent_2d, weyl_congruent_2d, PlaneCongruence,
    PlaneGenerator, PlaneWitnessPiece,
};
pub use poly::PolyUnion;

/// Three-valued outcome of a check over an infinite group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Conjunction: any fail fails, otherwise any inconclusive is inconclusive.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 3,
        }
    }
}

/// `x ↦ scale·x + shift` on the line, exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Affine1 {
    pub scale: Q,
    pub shift: Q,
}

impl Affine1 {
    pub fn identity() -> Self {
        Affine1 { scale: q(1), shift: q(0) }
    }

    pub fn apply(&self, x: &Q) -> Q {
        &self.scale * x + &self.shift
    }

    /// Image of `[a,b)`, reordered when the map reverses orientation.
    pub fn apply_interval(&self, (a, b): &(Q, Q)) -> (Q, Q) {
        let (x, y) = (self.apply(a), self.apply(b));
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }

    pub fn apply_set(&self, s: &IntervalUnion) -> IntervalUnion {
        IntervalUnion::new(s.pieces().iter().map(|p| self.apply_interval(p)).collect(), s.units())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Affine1) -> Affine1 {
        Affine1 { scale: &self.scale * &other.scale, shift: &self.scale * &other.shift + &self.shift }
    }

    pub fn inverse(&self) -> Affine1 {
        let inv = num_traits::Inv::inv(self.scale.clone());
        Affine1 { shift: -(&inv * &self.shift), scale: inv }
    }
}

/// Group element carried by a witness piece.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupElement {
    /// Translation by `k` periods.
    Translation(i64),
    /// Dilation by `base^n` about the action's center.
    Dilation(i64),
    /// The Weyl element carrying alcove `from` onto alcove `to`.
    Weyl { from: i64, to: i64 },
}

/// A matched pair of pieces: `map(from) = to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPiece {
    pub from: (Q, Q),
    pub to: (Q, Q),
    pub element: GroupElement,
    pub map: Affine1,
}

/// Result of an exact 1D congruence check.
#[derive(Debug, Clone)]
pub struct CongruenceWitness {
    pub pieces: Vec<WitnessPiece>,
    /// `∫ (m_a − m_b)⁺` over the fundamental domain.
    pub excess: Q,
    /// `∫ (m_b − m_a)⁺` over the fundamental domain.
    pub deficit: Q,
    /// Parts of each set that the cutoff could not reduce.
    pub unresolved_a: IntervalUnion,
    pub unresolved_b: IntervalUnion,
    pub verdict: Verdict,
    pub units: Units,
}

impl CongruenceWitness {
    /// Unmatched measure, in fundamental-domain coordinates.
    pub fn defect(&self) -> Q {
        &self.excess + &self.deficit
    }

    /// Defect as a real number in the set's units (radians for π units).
    pub fn defect_f64(&self) -> f64 {
        q_to_f64(&self.defect()) * self.units.factor()
    }

    pub fn partition_a(&self) -> Vec<(Q, Q)> {
        self.pieces.iter().map(|p| p.from.clone()).collect()
    }

    pub fn partition_b(&self) -> Vec<(Q, Q)> {
        self.pieces.iter().map(|p| p.to.clone()).collect()
    }

    pub fn summary(&self) -> WitnessSummary {
        WitnessSummary {
            pieces: self.pieces.len(),
            elements: {
                let mut v: Vec<GroupElement> = self.pieces.iter().map(|p| p.element.clone()).collect();
                v.dedup();
                v
            },
            excess: format_q(&self.excess),
            deficit: format_q(&self.deficit),
            unresolved: format_q(&(self.unresolved_a.measure() + self.unresolved_b.measure())),
            verdict: self.verdict,
        }
    }
}

/// Compact JSON view of a witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSummary {
    pub pieces: usize,
    pub elements: Vec<GroupElement>,
    pub excess: String,
    pub deficit: String,
    pub unresolved: String,
    pub verdict: Verdict,
}
