//! Terms and Horn sequents over the Heyting signature, the parser/printer
//! pair, the registry of named intermediate logics, and evaluation in a
//! finite frame.
//!
//! The signature has constants `0`, `1`, unary `~`, and binary `&`, `|`,
//! `->`, with precedence `~` > `&` > `|` > `->` and right-associative `->`.
//! A [`HornSequent`] is a list of premise equations and one conclusion
//! equation; a bare term `t` abbreviates the axiom `|- 1 = t`.

mod parse;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::frames::{FiniteFrame, FrameElt};
use crate::Verdict;

pub use parse::{parse_sequent, parse_term, ParseError};

/// A term over the Heyting signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    One,
    Var(String),
    Not(Box<Term>),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    Imp(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: Term) -> Term {
        Term::Not(Box::new(t))
    }

    pub fn and(l: Term, r: Term) -> Term {
        Term::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Term, r: Term) -> Term {
        Term::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Term, r: Term) -> Term {
        Term::Imp(Box::new(l), Box::new(r))
    }

    /// Free variables in order of first occurrence, deduplicated.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Zero | Term::One => {}
            Term::Var(name) => {
                if !out.iter().any(|n| n == name) {
                    out.push(name.clone());
                }
            }
            Term::Not(t) => t.collect_vars(out),
            Term::And(l, r) | Term::Or(l, r) | Term::Imp(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Whether the implication connective occurs anywhere in the term.
    /// (Negation does not count: it is primitive here, not `t -> 0`.)
    pub fn mentions_implication(&self) -> bool {
        match self {
            Term::Zero | Term::One | Term::Var(_) => false,
            Term::Not(t) => t.mentions_implication(),
            Term::And(l, r) | Term::Or(l, r) => {
                l.mentions_implication() || r.mentions_implication()
            }
            Term::Imp(_, _) => true,
        }
    }

    /// Binding strength used by the printer (higher binds tighter).
    fn precedence(&self) -> u8 {
        match self {
            Term::Imp(_, _) => 1,
            Term::Or(_, _) => 2,
            Term::And(_, _) => 3,
            Term::Not(_) => 4,
            Term::Zero | Term::One | Term::Var(_) => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.precedence() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Term::Zero => f.write_str("0")?,
            Term::One => f.write_str("1")?,
            Term::Var(name) => f.write_str(name)?,
            Term::Not(t) => {
                f.write_str("~")?;
                t.fmt_prec(f, 4)?;
            }
            Term::And(l, r) => {
                l.fmt_prec(f, 3)?;
                f.write_str(" & ")?;
                r.fmt_prec(f, 4)?;
            }
            Term::Or(l, r) => {
                l.fmt_prec(f, 2)?;
                f.write_str(" | ")?;
                r.fmt_prec(f, 3)?;
            }
            Term::Imp(l, r) => {
                l.fmt_prec(f, 2)?;
                f.write_str(" -> ")?;
                r.fmt_prec(f, 1)?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// An equation between two terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Equation {
        Equation { lhs, rhs }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// A Horn sequent: premise equations entailing a conclusion equation, in a
/// context listing every free variable (first-occurrence order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HornSequent {
    pub context: Vec<String>,
    pub premises: Vec<Equation>,
    pub conclusion: Equation,
}

impl HornSequent {
    /// Builds a sequent, deriving the context from the terms.
    pub fn new(premises: Vec<Equation>, conclusion: Equation) -> HornSequent {
        let mut context = Vec::new();
        let mut add = |term: &Term| {
            for v in term.free_vars() {
                if !context.contains(&v) {
                    context.push(v);
                }
            }
        };
        for eq in &premises {
            add(&eq.lhs);
            add(&eq.rhs);
        }
        add(&conclusion.lhs);
        add(&conclusion.rhs);
        HornSequent {
            context,
            premises,
            conclusion,
        }
    }

    /// The axiom form of a term: `|- 1 = t`.
    pub fn axiom(term: Term) -> HornSequent {
        HornSequent::new(Vec::new(), Equation::new(Term::One, term))
    }
}

impl fmt::Display for HornSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, eq) in self.premises.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{eq}")?;
        }
        if !self.premises.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "|- {}", self.conclusion)
    }
}

/// A named intermediate logic: its defining axiom and whether the axiom has
/// the shape (a join of `|`-free terms) required by the smallest-topology
/// and smallest-sublocale constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicSpec {
    pub name: &'static str,
    pub axiom: Term,
    pub admissible: bool,
}

impl LogicSpec {
    fn new(name: &'static str, axiom: Term) -> LogicSpec {
        let admissible = is_admissible(&axiom);
        LogicSpec {
            name,
            axiom,
            admissible,
        }
    }

    /// The axiom as a Horn sequent `|- 1 = axiom`.
    pub fn sequent(&self) -> HornSequent {
        HornSequent::axiom(self.axiom.clone())
    }
}

/// The named logics known to the tool.
///
/// `classical` is `p | ~p`; `demorgan` is `~p | ~~p`; `goedel_dummett` is
/// `(p -> q) | (q -> p)`; `kreisel_putnam` is
/// `(~p -> q | r) -> (~p -> q) | (~p -> r)`.
pub fn registry() -> Vec<LogicSpec> {
    let p = || Term::var("p");
    let q = || Term::var("q");
    let r = || Term::var("r");
    vec![
        LogicSpec::new("classical", Term::or(p(), Term::not(p()))),
        LogicSpec::new(
            "demorgan",
            Term::or(Term::not(p()), Term::not(Term::not(p()))),
        ),
        LogicSpec::new(
            "goedel_dummett",
            Term::or(Term::imp(p(), q()), Term::imp(q(), p())),
        ),
        LogicSpec::new(
            "kreisel_putnam",
            Term::imp(
                Term::imp(Term::not(p()), Term::or(q(), r())),
                Term::or(
                    Term::imp(Term::not(p()), q()),
                    Term::imp(Term::not(p()), r()),
                ),
            ),
        ),
    ]
}

/// Lookup failure in the registry.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown logic `{0}` (known: classical, demorgan, goedel_dummett, kreisel_putnam)")]
pub struct UnknownLogic(pub String);

/// Finds a registry logic by name.
pub fn logic_by_name(name: &str) -> Result<LogicSpec, UnknownLogic> {
    registry()
        .into_iter()
        .find(|spec| spec.name == name)
        .ok_or_else(|| UnknownLogic(name.to_string()))
}

/// Whether the term is a join of `|`-free subterms — the axiom shape for
/// which the smallest dense topology/sublocale constructions are guaranteed
/// to satisfy their logic.
pub fn is_admissible(term: &Term) -> bool {
    fn or_free(term: &Term) -> bool {
        match term {
            Term::Or(_, _) => false,
            Term::Zero | Term::One | Term::Var(_) => true,
            Term::Not(t) => or_free(t),
            Term::And(l, r) | Term::Imp(l, r) => or_free(l) && or_free(r),
        }
    }
    match term {
        Term::Or(l, r) => is_admissible(l) && is_admissible(r),
        other => or_free(other),
    }
}

/// Evaluation failure: a variable without a binding.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("variable `{0}` is unbound")]
pub struct UnboundVariable(pub String);

/// Evaluates a term in a finite frame under a variable assignment.
pub fn eval_in_frame(
    term: &Term,
    frame: &FiniteFrame,
    env: &BTreeMap<String, FrameElt>,
) -> Result<FrameElt, UnboundVariable> {
    Ok(match term {
        Term::Zero => frame.bot(),
        Term::One => frame.top(),
        Term::Var(name) => *env.get(name).ok_or_else(|| UnboundVariable(name.clone()))?,
        Term::Not(t) => frame.neg(eval_in_frame(t, frame, env)?),
        Term::And(l, r) => frame.meet(eval_in_frame(l, frame, env)?, eval_in_frame(r, frame, env)?),
        Term::Or(l, r) => frame.join(eval_in_frame(l, frame, env)?, eval_in_frame(r, frame, env)?),
        Term::Imp(l, r) => frame.imp(eval_in_frame(l, frame, env)?, eval_in_frame(r, frame, env)?),
    })
}

/// A failing assignment for a sequent checked over a frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameWitness {
    /// Variable bindings in context order.
    pub assignment: Vec<(String, FrameElt)>,
}

/// Decides whether a Horn sequent holds in a finite frame: under every
/// assignment satisfying all premise equations, the conclusion equation
/// holds. The first failing assignment (contexts enumerated
/// lexicographically, earlier variables most significant, elements in index
/// order) is returned as the witness.
pub fn holds_in_frame(frame: &FiniteFrame, sequent: &HornSequent) -> Verdict<FrameWitness> {
    let vars = &sequent.context;
    let n = frame.element_count();
    let mut indices = vec![0usize; vars.len()];
    loop {
        let env: BTreeMap<String, FrameElt> = vars
            .iter()
            .zip(&indices)
            .map(|(v, &i)| (v.clone(), FrameElt(i)))
            .collect();
        let eval_eq = |eq: &Equation| -> bool {
            let lhs = eval_in_frame(&eq.lhs, frame, &env).expect("context covers free variables");
            let rhs = eval_in_frame(&eq.rhs, frame, &env).expect("context covers free variables");
            lhs == rhs
        };
        if sequent.premises.iter().all(eval_eq) && !eval_eq(&sequent.conclusion) {
            return Verdict::Fails(FrameWitness {
                assignment: vars
                    .iter()
                    .zip(&indices)
                    .map(|(v, &i)| (v.clone(), FrameElt(i)))
                    .collect(),
            });
        }

        // Advance the assignment counter, last variable fastest.
        let mut done = true;
        for pos in (0..indices.len()).rev() {
            indices[pos] += 1;
            if indices[pos] < n {
                done = false;
                break;
            }
            indices[pos] = 0;
        }
        if done || vars.is_empty() {
            return Verdict::Holds;
        }
    }
}

/// Whether the frame validates a named logic's axiom.
pub fn frame_satisfies_logic(frame: &FiniteFrame, spec: &LogicSpec) -> Verdict<FrameWitness> {
    holds_in_frame(frame, &spec.sequent())
}
