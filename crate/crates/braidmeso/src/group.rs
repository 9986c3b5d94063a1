//! A small trait unifying B4 and its central quotient for ball enumeration
//! and group-algebra work, plus the execution-mode switch shared by the
//! data-parallel scans.

use crate::garside::{invert, multiply, normalize_str, BraidElement};
use crate::perm::{PermIdx, N_PERMS};
use crate::quotient::{project, QuotientElement};
use std::fmt::Debug;
use std::hash::Hash;

/// Whether a scan runs on the rayon pool or a plain loop. With the
/// `parallel` feature disabled, `Parallel` silently degrades to sequential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum GroupTag {
    B4,
    G,
}

impl std::fmt::Display for GroupTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupTag::B4 => write!(f, "B4"),
            GroupTag::G => write!(f, "G"),
        }
    }
}

impl std::str::FromStr for GroupTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "B4" | "b4" => Ok(GroupTag::B4),
            "G" | "g" => Ok(GroupTag::G),
            other => Err(format!("unknown group tag {other:?} (expected B4 or G)")),
        }
    }
}

pub trait GroupElement: Clone + Eq + Ord + Hash + Send + Sync + Debug {
    fn identity() -> Self;
    fn op(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn text_form(&self) -> String;
    fn from_text(s: &str) -> Option<Self>;
}

impl GroupElement for BraidElement {
    fn identity() -> Self {
        BraidElement::identity()
    }
    fn op(&self, other: &Self) -> Self {
        multiply(self, other)
    }
    fn inverse(&self) -> Self {
        invert(self)
    }
    fn text_form(&self) -> String {
        BraidElement::text_form(self)
    }
    fn from_text(s: &str) -> Option<Self> {
        BraidElement::from_text(s)
    }
}

impl GroupElement for QuotientElement {
    fn identity() -> Self {
        QuotientElement::identity()
    }
    fn op(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn inverse(&self) -> Self {
        self.inv()
    }
    fn text_form(&self) -> String {
        QuotientElement::text_form(self)
    }
    fn from_text(s: &str) -> Option<Self> {
        QuotientElement::from_text(s)
    }
}

/// The 23 nontrivial simples together with their inverses: the generating
/// set behind the word length on B4.
pub fn braid_generators() -> Vec<BraidElement> {
    let mut out = Vec::with_capacity(46);
    for p in 1..N_PERMS as PermIdx {
        out.push(BraidElement::simple(p));
    }
    for p in 1..N_PERMS as PermIdx {
        out.push(invert(&BraidElement::simple(p)));
    }
    out
}

/// Images of the simples and inverses in the quotient, deduplicated. The
/// engine never assumes which images coincide; it computes them.
pub fn quotient_generators() -> Vec<QuotientElement> {
    let mut out: Vec<QuotientElement> = braid_generators().iter().map(project).collect();
    out.sort();
    out.dedup();
    out
}

/// x = bac as a braid element.
pub fn x_element() -> BraidElement {
    normalize_str("bac").unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forty_six_distinct_braid_generators() {
        let mut gens = braid_generators();
        assert_eq!(gens.len(), 46);
        gens.sort();
        gens.dedup();
        assert_eq!(gens.len(), 46);
    }

    #[test]
    fn quotient_generators_collapse_only_the_half_twist() {
        let gens = quotient_generators();
        // Delta and Delta^-1 agree mod z; everything else stays distinct.
        assert_eq!(gens.len(), 45);
        let d = project(&BraidElement::delta());
        let d_inv = d.inv();
        assert_eq!(d, d_inv);
    }
}
