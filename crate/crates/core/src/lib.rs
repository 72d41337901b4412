//! A workbench for the internal logic of finite sites and finite locales.
//!
//! The library answers questions of the form "does the topos of sheaves on
//! this finite site (or the frame of opens of this finite locale) satisfy a
//! given intermediate propositional logic?", and computes the associated
//! smallest subtopos/sublocale satisfying the logic (double-negation
//! sheafification, De Morganization, the Gödel-Dummett topology, and
//! user-supplied axioms).
//!
//! The main entry points are:
//!
//! - [`fincat`]: finite categories with explicit composition tables, and the
//!   sieve calculus (generation, pullback, unions and intersections);
//! - [`coverage`]: Grothendieck topologies on a finite category — axiom
//!   validation, the closure operator, closed sieves, and least-topology
//!   generation;
//! - [`logic`]: terms and Horn sequents over the Heyting signature, the
//!   parser/printer, and the registry of named intermediate logics;
//! - [`omega`]: the truth-value algebra of a site, term evaluation over it,
//!   and internal validity of sequents and logic axioms;
//! - [`criteria`]: purely categorical characterizations (groupoid, right Ore,
//!   pairwise factorization, indecomposability) used as independent oracles;
//! - [`ltop`]: smallest topologies forcing an axiom, density and openness
//!   checks for comparisons of topologies, and dense subcategory restriction;
//! - [`frames`]: finite frames (distributive lattices), nuclei, filters,
//!   quotients, and direct descriptions of the De Morgan and Gödel-Dummett
//!   sublocales;
//! - [`corpus`]: a fixed collection of small categories and frames used by
//!   the test suites and the `corpus` command of the CLI.

pub mod caps;
pub mod corpus;
pub mod coverage;
pub mod criteria;
pub mod fincat;
pub mod frames;
pub mod logic;
pub mod ltop;
pub mod omega;

pub use caps::{CapExceeded, Caps};
pub use fincat::{ArrowId, CategoryData, FinCategory, ObjId, Sieve};

/// Outcome of a decision procedure: either the property holds, or it fails
/// and a concrete witness explains why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    /// The property holds everywhere it was checked.
    Holds,
    /// The property fails; the payload is the first witness in the
    /// deterministic search order.
    Fails(W),
}

impl<W> Verdict<W> {
    /// True when the verdict is [`Verdict::Holds`].
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    /// The witness of failure, if any.
    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    /// Maps the witness type, preserving the verdict.
    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(w) => Verdict::Fails(f(w)),
        }
    }
}
