//! The internal Heyting algebra of a site: closed sieves fiberwise, the
//! lattice and implication operations on them, term evaluation, and internal
//! validity of Horn sequents and propositional axioms.
//!
//! Validity is decided componentwise: an equation between terms holds
//! internally exactly when it holds at every object under every assignment
//! of closed sieves to the variables, because equality of maps out of a
//! finite product of copies of the classifier is pointwise on the site.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::caps::{CapExceeded, Caps};
use crate::coverage::{self, GrothendieckTopology};
use crate::fincat::{FinCategory, ObjId, Sieve};
use crate::frames::{FiniteFrame, FrameError};
use crate::logic::{HornSequent, LogicSpec, Term};
use crate::Verdict;

/// A reason a site could not be assembled.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SiteError {
    #[error("coverage is not a Grothendieck topology:\n{}", violations.join("\n"))]
    InvalidTopology { violations: Vec<String> },
    #[error(transparent)]
    Cap(#[from] CapExceeded),
}

/// An invalid argument to one of the classifier operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmegaError {
    #[error("sieves are rooted at different objects (`{left}` vs `{right}`)")]
    RootMismatch { left: String, right: String },
    #[error("sieve {sieve} on `{object}` is not closed for the site topology")]
    NotClosed { sieve: String, object: String },
    #[error("variable `{0}` has no assigned value")]
    UnboundVariable(String),
    #[error(transparent)]
    Cap(#[from] CapExceeded),
}

/// A category together with a validated Grothendieck topology, plus cached
/// per-object data (closure of the empty sieve, whether the empty sieve
/// covers).
#[derive(Debug, Clone)]
pub struct Site {
    cat: FinCategory,
    topology: GrothendieckTopology,
    caps: Caps,
    bot_masks: Vec<u64>,
    empty_covers: Vec<bool>,
}

impl Site {
    /// Pairs a category with a topology, verifying the topology axioms.
    pub fn new(
        cat: FinCategory,
        topology: GrothendieckTopology,
        caps: Caps,
    ) -> Result<Site, SiteError> {
        let violations = coverage::is_topology(&cat, &topology, &caps)?;
        if !violations.is_empty() {
            return Err(SiteError::InvalidTopology {
                violations: violations.iter().map(|v| v.describe(&cat)).collect(),
            });
        }
        let bot_masks = cat
            .objects()
            .map(|c| coverage::closure(&cat, &topology, cat.empty_sieve(c)).mask())
            .collect();
        let empty_covers = cat.objects().map(|c| topology.empty_covers(c)).collect();
        Ok(Site {
            cat,
            topology,
            caps,
            bot_masks,
            empty_covers,
        })
    }

    /// The site with the trivial topology (only maximal sieves cover).
    pub fn trivial(cat: FinCategory, caps: Caps) -> Site {
        let topology = GrothendieckTopology::trivial(&cat);
        Site::new(cat, topology, caps).expect("the trivial topology always validates")
    }

    /// The same category under a different topology.
    pub fn with_topology(&self, topology: GrothendieckTopology) -> Result<Site, SiteError> {
        Site::new(self.cat.clone(), topology, self.caps)
    }

    /// The underlying category.
    pub fn category(&self) -> &FinCategory {
        &self.cat
    }

    /// The topology.
    pub fn topology(&self) -> &GrothendieckTopology {
        &self.topology
    }

    /// The caps this site was built under.
    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    /// Closure of a sieve for the site topology.
    pub fn closure(&self, s: Sieve) -> Sieve {
        coverage::closure(&self.cat, &self.topology, s)
    }

    /// Whether a sieve is closed for the site topology.
    pub fn is_closed(&self, s: Sieve) -> bool {
        coverage::is_closed(&self.cat, &self.topology, s)
    }

    /// All closed sieves on an object, ascending by bitmask.
    pub fn closed_sieves(&self, c: ObjId) -> Result<Vec<Sieve>, CapExceeded> {
        coverage::closed_sieves(&self.cat, &self.topology, c, &self.caps)
    }

    fn require_closed(&self, s: Sieve) -> Result<(), OmegaError> {
        if self.is_closed(s) {
            Ok(())
        } else {
            Err(OmegaError::NotClosed {
                sieve: self.cat.sieve_to_string(s),
                object: self.cat.object_name(s.root()).to_string(),
            })
        }
    }

    fn require_same_root(&self, s: Sieve, t: Sieve) -> Result<(), OmegaError> {
        if s.root() == t.root() {
            Ok(())
        } else {
            Err(OmegaError::RootMismatch {
                left: self.cat.object_name(s.root()).to_string(),
                right: self.cat.object_name(t.root()).to_string(),
            })
        }
    }

    fn bot_mask(&self, c: ObjId) -> u64 {
        self.bot_masks[c.0]
    }

    fn join_mask(&self, c: ObjId, s: u64, t: u64) -> u64 {
        let union = s | t;
        let mut out = 0u64;
        for (pos, &f) in self.cat.fan_in(c).iter().enumerate() {
            let pulled = self.cat.pull_mask(f, union);
            if self.topology.contains_mask(self.cat.dom(f), pulled) {
                out |= 1 << pos;
            }
        }
        out
    }

    fn implies_mask(&self, c: ObjId, s: u64, t: u64) -> u64 {
        let mut out = 0u64;
        for (pos, &f) in self.cat.fan_in(c).iter().enumerate() {
            if self.cat.pull_mask(f, s) & !self.cat.pull_mask(f, t) == 0 {
                out |= 1 << pos;
            }
        }
        out
    }

    fn not_mask(&self, c: ObjId, s: u64) -> u64 {
        let mut out = 0u64;
        for (pos, &f) in self.cat.fan_in(c).iter().enumerate() {
            let d = self.cat.dom(f);
            let pulled = self.cat.pull_mask(f, s);
            let annihilates = self
                .cat
                .fan_in(d)
                .iter()
                .enumerate()
                .filter(|&(gpos, _)| pulled & (1 << gpos) != 0)
                .all(|(_, &g)| self.empty_covers[self.cat.dom(g).0]);
            if annihilates {
                out |= 1 << pos;
            }
        }
        out
    }

    fn eval_mask(&self, c: ObjId, term: &Term, env: &[(String, u64)]) -> Result<u64, OmegaError> {
        Ok(match term {
            Term::Zero => self.bot_mask(c),
            Term::One => self.cat.fanin_mask(c),
            Term::Var(v) => {
                env.iter()
                    .find(|(name, _)| name == v)
                    .ok_or_else(|| OmegaError::UnboundVariable(v.clone()))?
                    .1
            }
            Term::Not(t) => self.not_mask(c, self.eval_mask(c, t, env)?),
            Term::And(l, r) => self.eval_mask(c, l, env)? & self.eval_mask(c, r, env)?,
            Term::Or(l, r) => {
                let (l, r) = (self.eval_mask(c, l, env)?, self.eval_mask(c, r, env)?);
                self.join_mask(c, l, r)
            }
            Term::Imp(l, r) => {
                let (l, r) = (self.eval_mask(c, l, env)?, self.eval_mask(c, r, env)?);
                self.implies_mask(c, l, r)
            }
        })
    }
}

/// The least element of the fiber at `c`: the closure of the empty sieve.
pub fn omega_bottom(site: &Site, c: ObjId) -> Sieve {
    Sieve::from_mask(c, site.bot_mask(c))
}

/// The greatest element of the fiber at `c`: the maximal sieve.
pub fn omega_top(site: &Site, c: ObjId) -> Sieve {
    site.category().maximal_sieve(c)
}

/// Meet of two closed sieves: their intersection.
pub fn omega_meet(site: &Site, s: Sieve, t: Sieve) -> Result<Sieve, OmegaError> {
    site.require_same_root(s, t)?;
    site.require_closed(s)?;
    site.require_closed(t)?;
    Ok(Sieve::from_mask(s.root(), s.mask() & t.mask()))
}

/// Join of two closed sieves: the arrows whose pullback of the union covers.
pub fn omega_join(site: &Site, s: Sieve, t: Sieve) -> Result<Sieve, OmegaError> {
    site.require_same_root(s, t)?;
    site.require_closed(s)?;
    site.require_closed(t)?;
    Ok(Sieve::from_mask(
        s.root(),
        site.join_mask(s.root(), s.mask(), t.mask()),
    ))
}

/// Implication of closed sieves: the arrows under which the pullback of the
/// antecedent is contained in the pullback of the consequent.
pub fn omega_implies(site: &Site, s: Sieve, t: Sieve) -> Result<Sieve, OmegaError> {
    site.require_same_root(s, t)?;
    site.require_closed(s)?;
    site.require_closed(t)?;
    Ok(Sieve::from_mask(
        s.root(),
        site.implies_mask(s.root(), s.mask(), t.mask()),
    ))
}

/// Negation of a closed sieve: the arrows all of whose composites into the
/// sieve force the empty sieve to cover.
pub fn omega_not(site: &Site, s: Sieve) -> Result<Sieve, OmegaError> {
    site.require_closed(s)?;
    Ok(Sieve::from_mask(
        s.root(),
        site.not_mask(s.root(), s.mask()),
    ))
}

/// Evaluates a propositional term in the fiber at `c` under an assignment of
/// closed sieves to its variables.
pub fn eval_term_omega(
    site: &Site,
    c: ObjId,
    term: &Term,
    assignment: &BTreeMap<String, Sieve>,
) -> Result<Sieve, OmegaError> {
    let mut env = Vec::with_capacity(assignment.len());
    for (name, &sieve) in assignment {
        if sieve.root() != c {
            return Err(OmegaError::RootMismatch {
                left: site.cat.object_name(sieve.root()).to_string(),
                right: site.cat.object_name(c).to_string(),
            });
        }
        site.require_closed(sieve)?;
        env.push((name.clone(), sieve.mask()));
    }
    Ok(Sieve::from_mask(c, site.eval_mask(c, term, &env)?))
}

/// A failing object and closed-sieve assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaWitness {
    /// The object whose fiber refutes the statement.
    pub object: ObjId,
    /// Variable values, in the statement's variable order.
    pub assignment: Vec<(String, Sieve)>,
}

impl OmegaWitness {
    /// Renders the witness with object and arrow names.
    pub fn describe(&self, cat: &FinCategory) -> String {
        let vars: Vec<String> = self
            .assignment
            .iter()
            .map(|(name, sieve)| format!("{name} = {}", cat.sieve_to_string(*sieve)))
            .collect();
        if vars.is_empty() {
            format!("at object `{}`", cat.object_name(self.object))
        } else {
            format!(
                "at object `{}` with {}",
                cat.object_name(self.object),
                vars.join(", ")
            )
        }
    }
}

/// Runs `check` for every object and every assignment of closed sieves to
/// `vars`, in object order then lexicographic assignment order (first
/// variable most significant, fiber elements ascending by mask), returning
/// the first failure.
fn first_counterexample(
    site: &Site,
    vars: &[String],
    mut check: impl FnMut(ObjId, &[(String, u64)]) -> Result<bool, OmegaError>,
) -> Result<Verdict<OmegaWitness>, CapExceeded> {
    for c in site.category().objects() {
        let fiber: Vec<u64> = site.closed_sieves(c)?.iter().map(|s| s.mask()).collect();
        let mut indices = vec![0usize; vars.len()];
        loop {
            let env: Vec<(String, u64)> = vars
                .iter()
                .zip(&indices)
                .map(|(v, &i)| (v.clone(), fiber[i]))
                .collect();
            let ok = check(c, &env).expect("assignments are closed and cover the variables");
            if !ok {
                return Ok(Verdict::Fails(OmegaWitness {
                    object: c,
                    assignment: env
                        .into_iter()
                        .map(|(v, mask)| (v, Sieve::from_mask(c, mask)))
                        .collect(),
                }));
            }
            let mut done = true;
            for pos in (0..indices.len()).rev() {
                indices[pos] += 1;
                if indices[pos] < fiber.len() {
                    done = false;
                    break;
                }
                indices[pos] = 0;
            }
            if done || vars.is_empty() {
                break;
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Whether an axiom evaluates to the top of every fiber under every closed
/// assignment; otherwise the first counterexample.
pub fn validates_axiom(site: &Site, axiom: &Term) -> Result<Verdict<OmegaWitness>, CapExceeded> {
    let vars = axiom.free_vars();
    first_counterexample(site, &vars, |c, env| {
        Ok(site.eval_mask(c, axiom, env)? == site.cat.fanin_mask(c))
    })
}

/// Whether the site's classifier satisfies a registry logic's axiom.
pub fn validates_logic(
    site: &Site,
    spec: &LogicSpec,
) -> Result<Verdict<OmegaWitness>, CapExceeded> {
    validates_axiom(site, &spec.axiom)
}

/// Whether a Horn sequent holds internally: at every object and closed
/// assignment where all premise equations hold, the conclusion holds.
pub fn holds_internally(
    site: &Site,
    sequent: &HornSequent,
) -> Result<Verdict<OmegaWitness>, CapExceeded> {
    first_counterexample(site, &sequent.context, |c, env| {
        for premise in &sequent.premises {
            if site.eval_mask(c, &premise.lhs, env)? != site.eval_mask(c, &premise.rhs, env)? {
                return Ok(true);
            }
        }
        let lhs = site.eval_mask(c, &sequent.conclusion.lhs, env)?;
        let rhs = site.eval_mask(c, &sequent.conclusion.rhs, env)?;
        Ok(lhs == rhs)
    })
}

/// One fiber of the classifier with all six operations tabulated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaFiber {
    object: ObjId,
    elements: Vec<Sieve>,
    bottom: usize,
    top: usize,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    implies: Vec<Vec<usize>>,
    not: Vec<usize>,
}

impl OmegaFiber {
    /// The root object.
    pub fn object(&self) -> ObjId {
        self.object
    }

    /// The closed sieves, ascending by mask.
    pub fn elements(&self) -> &[Sieve] {
        &self.elements
    }

    /// Position of a closed sieve within [`Self::elements`].
    pub fn index_of(&self, s: Sieve) -> Option<usize> {
        self.elements
            .binary_search_by_key(&s.mask(), |e| e.mask())
            .ok()
            .filter(|_| s.root() == self.object)
    }

    /// The least element.
    pub fn bottom(&self) -> Sieve {
        self.elements[self.bottom]
    }

    /// The greatest element.
    pub fn top(&self) -> Sieve {
        self.elements[self.top]
    }

    fn lookup(&self, s: Sieve) -> usize {
        self.index_of(s).expect("sieve belongs to this fiber")
    }

    /// Tabulated meet.
    pub fn meet(&self, s: Sieve, t: Sieve) -> Sieve {
        self.elements[self.meet[self.lookup(s)][self.lookup(t)]]
    }

    /// Tabulated join.
    pub fn join(&self, s: Sieve, t: Sieve) -> Sieve {
        self.elements[self.join[self.lookup(s)][self.lookup(t)]]
    }

    /// Tabulated implication.
    pub fn implies(&self, s: Sieve, t: Sieve) -> Sieve {
        self.elements[self.implies[self.lookup(s)][self.lookup(t)]]
    }

    /// Tabulated negation.
    pub fn not(&self, s: Sieve) -> Sieve {
        self.elements[self.not[self.lookup(s)]]
    }
}

/// Builds the fiber at `c` with its operation tables.
pub fn omega_fiber(site: &Site, c: ObjId) -> Result<OmegaFiber, CapExceeded> {
    let elements = site.closed_sieves(c)?;
    let index = |mask: u64| -> usize {
        elements
            .binary_search_by_key(&mask, |e| e.mask())
            .expect("classifier operations stay within the closed sieves")
    };
    let n = elements.len();
    let mut meet = vec![vec![0usize; n]; n];
    let mut join = vec![vec![0usize; n]; n];
    let mut implies = vec![vec![0usize; n]; n];
    let mut not = vec![0usize; n];
    for (i, s) in elements.iter().enumerate() {
        not[i] = index(site.not_mask(c, s.mask()));
        for (j, t) in elements.iter().enumerate() {
            meet[i][j] = index(s.mask() & t.mask());
            join[i][j] = index(site.join_mask(c, s.mask(), t.mask()));
            implies[i][j] = index(site.implies_mask(c, s.mask(), t.mask()));
        }
    }
    Ok(OmegaFiber {
        object: c,
        elements: elements.clone(),
        bottom: index(site.bot_mask(c)),
        top: index(site.cat.fanin_mask(c)),
        meet,
        join,
        implies,
        not,
    })
}

/// Packages the fiber at `c` as a [`FiniteFrame`] whose element `i` is the
/// `i`-th closed sieve (ascending by mask) and whose names are the rendered
/// sieves. The frame-size cap is relaxed to the fiber size, which is already
/// governed by the fan-in cap.
pub fn subobject_frame(site: &Site, c: ObjId) -> Result<FiniteFrame, FrameError> {
    let elements = site.closed_sieves(c)?;
    let names: Vec<String> = elements
        .iter()
        .map(|&s| site.cat.sieve_to_string(s))
        .collect();
    let mut order = Vec::new();
    for (i, s) in elements.iter().enumerate() {
        for (j, t) in elements.iter().enumerate() {
            if i != j && s.mask() & !t.mask() == 0 {
                order.push((i, j));
            }
        }
    }
    let caps = Caps {
        max_frame: elements.len().max(site.caps.max_frame),
        ..site.caps
    };
    FiniteFrame::new(names, &order, &caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::generate_topology;
    use crate::fincat::{validate_category, CategoryData};
    use crate::logic::{logic_by_name, parse_sequent, parse_term};

    fn caps() -> Caps {
        Caps::default()
    }

    fn terminal() -> FinCategory {
        let data = CategoryData::new(
            &["*"],
            &[("id", "*", "*")],
            &[("*", "id")],
            &[("id", "id", "id")],
        );
        validate_category(&data, &caps()).unwrap()
    }

    fn walking_arrow() -> FinCategory {
        let data = CategoryData::new(
            &["a", "b"],
            &[("id_a", "a", "a"), ("id_b", "b", "b"), ("u", "a", "b")],
            &[("a", "id_a"), ("b", "id_b")],
            &[
                ("id_a", "id_a", "id_a"),
                ("id_b", "id_b", "id_b"),
                ("u", "id_a", "u"),
                ("id_b", "u", "u"),
            ],
        );
        validate_category(&data, &caps()).unwrap()
    }

    fn cospan() -> FinCategory {
        let data = CategoryData::new(
            &["a", "b", "c"],
            &[
                ("id_a", "a", "a"),
                ("id_b", "b", "b"),
                ("id_c", "c", "c"),
                ("f", "b", "a"),
                ("g", "c", "a"),
            ],
            &[("a", "id_a"), ("b", "id_b"), ("c", "id_c")],
            &[
                ("id_a", "id_a", "id_a"),
                ("id_b", "id_b", "id_b"),
                ("id_c", "id_c", "id_c"),
                ("id_a", "f", "f"),
                ("f", "id_b", "f"),
                ("id_a", "g", "g"),
                ("g", "id_c", "g"),
            ],
        );
        validate_category(&data, &caps()).unwrap()
    }

    fn c2_group() -> FinCategory {
        let data = CategoryData::new(
            &["*"],
            &[("id", "*", "*"), ("s", "*", "*")],
            &[("*", "id")],
            &[
                ("id", "id", "id"),
                ("id", "s", "s"),
                ("s", "id", "s"),
                ("s", "s", "id"),
            ],
        );
        validate_category(&data, &caps()).unwrap()
    }

    fn sierpinski() -> Site {
        Site::trivial(walking_arrow(), caps())
    }

    /// The walking arrow with `{u}` covering `b`.
    fn dense_sierpinski() -> Site {
        let cat = walking_arrow();
        let u = cat.arrow_by_name("u").unwrap();
        let gen = cat.generate_sieve(cat.cod(u), &[u]).unwrap();
        let top = generate_topology(&cat, None, &[gen], &caps()).unwrap();
        Site::new(cat, top, caps()).unwrap()
    }

    fn sieve_of(site: &Site, root: &str, arrows: &[&str]) -> Sieve {
        let cat = site.category();
        let root = cat.object_by_name(root).unwrap();
        let ids: Vec<_> = arrows
            .iter()
            .map(|n| cat.arrow_by_name(n).unwrap())
            .collect();
        cat.generate_sieve(root, &ids).unwrap()
    }

    #[test]
    fn bottom_of_trivial_site_is_empty() {
        let site = sierpinski();
        for c in site.category().objects() {
            assert_eq!(omega_bottom(&site, c), site.category().empty_sieve(c));
        }
    }

    #[test]
    fn bottom_under_degenerate_topology_is_maximal() {
        let cat = terminal();
        let star = cat.object_by_name("*").unwrap();
        let top = generate_topology(&cat, None, &[cat.empty_sieve(star)], &caps()).unwrap();
        let site = Site::new(cat, top, caps()).unwrap();
        assert_eq!(omega_bottom(&site, star), omega_top(&site, star));
    }

    #[test]
    fn bottom_under_dense_topology_is_still_empty() {
        let site = dense_sierpinski();
        let b = site.category().object_by_name("b").unwrap();
        assert_eq!(omega_bottom(&site, b), site.category().empty_sieve(b));
    }

    #[test]
    fn implication_of_a_sieve_with_itself_is_maximal() {
        let site = Site::trivial(cospan(), caps());
        for c in site.category().objects() {
            for s in site.closed_sieves(c).unwrap() {
                assert_eq!(omega_implies(&site, s, s).unwrap(), omega_top(&site, c));
            }
        }
    }

    #[test]
    fn excluded_middle_fails_at_the_generic_point() {
        let site = sierpinski();
        let s = sieve_of(&site, "b", &["u"]);
        let not_s = omega_not(&site, s).unwrap();
        assert_eq!(not_s, site.category().empty_sieve(s.root()));
        assert_eq!(omega_join(&site, s, not_s).unwrap(), s);
        assert_ne!(s, omega_top(&site, s.root()));
    }

    #[test]
    fn negation_of_bottom_is_top() {
        let site = sierpinski();
        for c in site.category().objects() {
            let bot = omega_bottom(&site, c);
            assert_eq!(omega_not(&site, bot).unwrap(), omega_top(&site, c));
        }
    }

    #[test]
    fn operations_reject_mismatched_roots_and_open_sieves() {
        let site = sierpinski();
        let a = site.category().object_by_name("a").unwrap();
        let b = site.category().object_by_name("b").unwrap();
        let err = omega_meet(
            &site,
            site.category().maximal_sieve(a),
            site.category().maximal_sieve(b),
        )
        .unwrap_err();
        assert!(matches!(err, OmegaError::RootMismatch { .. }));

        let dense = dense_sierpinski();
        let open = sieve_of(&dense, "b", &["u"]);
        let err = omega_not(&dense, open).unwrap_err();
        assert!(matches!(err, OmegaError::NotClosed { .. }));
    }

    #[test]
    fn term_evaluation_examples() {
        let site = sierpinski();
        let b = site.category().object_by_name("b").unwrap();
        let s = sieve_of(&site, "b", &["u"]);
        let assignment: BTreeMap<String, Sieve> = [("p".to_string(), s)].into();

        let one = parse_term("1").unwrap();
        assert_eq!(
            eval_term_omega(&site, b, &one, &BTreeMap::new()).unwrap(),
            omega_top(&site, b)
        );

        let classical = parse_term("p | ~p").unwrap();
        assert_eq!(
            eval_term_omega(&site, b, &classical, &assignment).unwrap(),
            s
        );

        let demorgan = parse_term("~p | ~~p").unwrap();
        assert_eq!(
            eval_term_omega(&site, b, &demorgan, &assignment).unwrap(),
            omega_top(&site, b)
        );

        let unbound = parse_term("p & q").unwrap();
        let err = eval_term_omega(&site, b, &unbound, &assignment).unwrap_err();
        assert!(matches!(err, OmegaError::UnboundVariable(v) if v == "q"));
    }

    #[test]
    fn classical_logic_holds_on_a_group_site() {
        let site = Site::trivial(c2_group(), caps());
        let classical = logic_by_name("classical").unwrap();
        assert!(validates_logic(&site, &classical).unwrap().holds());
    }

    #[test]
    fn classical_logic_fails_at_the_walking_arrow_with_frozen_witness() {
        let site = sierpinski();
        let classical = logic_by_name("classical").unwrap();
        let verdict = validates_logic(&site, &classical).unwrap();
        let witness = verdict.witness().expect("must fail");
        assert_eq!(witness.object, site.category().object_by_name("b").unwrap());
        assert_eq!(
            witness.assignment,
            vec![("p".to_string(), sieve_of(&site, "b", &["u"]))]
        );
    }

    #[test]
    fn demorgan_logic_fails_on_the_cospan_but_holds_at_the_walking_arrow() {
        let cospan_site = Site::trivial(cospan(), caps());
        let demorgan = logic_by_name("demorgan").unwrap();
        assert!(!validates_logic(&cospan_site, &demorgan).unwrap().holds());
        assert!(validates_logic(&sierpinski(), &demorgan).unwrap().holds());
    }

    #[test]
    fn horn_sequents_internal_examples() {
        let cospan_site = Site::trivial(cospan(), caps());
        let idem = parse_sequent("|- x & x = x").unwrap();
        assert!(holds_internally(&cospan_site, &idem).unwrap().holds());

        let site = sierpinski();
        let weak_open = parse_sequent("x & y = 0 |- y = y & ~x").unwrap();
        assert!(holds_internally(&site, &weak_open).unwrap().holds());

        let lem = parse_sequent("|- 1 = x | ~x").unwrap();
        let verdict = holds_internally(&site, &lem).unwrap();
        let witness = verdict.witness().expect("must fail");
        assert_eq!(witness.object, site.category().object_by_name("b").unwrap());
        assert_eq!(
            witness.assignment,
            vec![("x".to_string(), sieve_of(&site, "b", &["u"]))]
        );
    }

    #[test]
    fn subobject_frames_of_small_sites() {
        let site = Site::trivial(terminal(), caps());
        let star = site.category().object_by_name("*").unwrap();
        let frame = subobject_frame(&site, star).unwrap();
        assert_eq!(frame.element_count(), 2);

        let site = sierpinski();
        let b = site.category().object_by_name("b").unwrap();
        let frame = subobject_frame(&site, b).unwrap();
        assert_eq!(frame.element_count(), 3);
        for x in frame.elements() {
            for y in frame.elements() {
                assert!(frame.leq(x, y) || frame.leq(y, x), "fiber at b is a chain");
            }
        }

        let site = Site::trivial(cospan(), caps());
        let apex = site.category().object_by_name("a").unwrap();
        let frame = subobject_frame(&site, apex).unwrap();
        assert_eq!(frame.element_count(), 5);
        let f = frame.element_by_name("{f}").unwrap();
        let g = frame.element_by_name("{g}").unwrap();
        assert_eq!(frame.meet(f, g), frame.bot());
        assert_eq!(frame.name(frame.join(f, g)), "{f, g}");
    }

    #[test]
    fn fiber_tables_match_the_direct_operations() {
        let site = Site::trivial(cospan(), caps());
        let apex = site.category().object_by_name("a").unwrap();
        let fiber = omega_fiber(&site, apex).unwrap();
        assert_eq!(fiber.elements().len(), 5);
        assert_eq!(fiber.bottom(), omega_bottom(&site, apex));
        assert_eq!(fiber.top(), omega_top(&site, apex));
        for &s in fiber.elements() {
            assert_eq!(fiber.not(s), omega_not(&site, s).unwrap());
            for &t in fiber.elements() {
                assert_eq!(fiber.meet(s, t), omega_meet(&site, s, t).unwrap());
                assert_eq!(fiber.join(s, t), omega_join(&site, s, t).unwrap());
                assert_eq!(fiber.implies(s, t), omega_implies(&site, s, t).unwrap());
                // Negation is implication into the bottom.
                assert_eq!(
                    fiber.not(s),
                    omega_implies(&site, s, fiber.bottom()).unwrap()
                );
            }
        }
    }

    #[test]
    fn invalid_topology_is_rejected_at_site_construction() {
        let cat = cospan();
        let f = cat.arrow_by_name("f").unwrap();
        // `{f}` as a cover of the apex is unstable: its pullback along `g`
        // is empty and empty does not cover `c`.
        let gen = cat.generate_sieve(cat.cod(f), &[f]).unwrap();
        let top = GrothendieckTopology::from_sieves(&cat, [gen]);
        let err = Site::new(cat, top, caps()).unwrap_err();
        assert!(matches!(err, SiteError::InvalidTopology { .. }));
    }
}
