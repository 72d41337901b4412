//! Grothendieck topologies on a finite category: axiom validation, sieve
//! enumeration, the closure operator, and least-topology generation.
//!
//! A [`GrothendieckTopology`] is stored extensionally — the full covering
//! family of every object — so every axiom and every downstream check is a
//! finite iteration. Construction does not validate; [`is_topology`] decides
//! the three axioms and reports witnesses, and `omega::Site::new` insists on
//! a clean report.

use std::collections::BTreeSet;
use std::fmt;

use crate::caps::{CapExceeded, Caps};
use crate::fincat::{ArrowId, FinCategory, ObjId, Sieve};

/// An assignment of covering sieves to every object.
///
/// Intended invariants (decided by [`is_topology`], not by construction):
/// maximality (the maximal sieve covers), stability (pullbacks of covers
/// cover), and transitivity (a sieve all of whose pullbacks along a cover
/// are covers is itself a cover). Upward closure follows from these and is
/// exercised by the test suite rather than stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrothendieckTopology {
    /// Covering sieve masks per object index, in ascending mask order.
    covers: Vec<BTreeSet<u64>>,
}

impl GrothendieckTopology {
    /// The trivial topology: only the maximal sieve covers each object.
    pub fn trivial(cat: &FinCategory) -> Self {
        let covers = cat
            .objects()
            .map(|c| BTreeSet::from([cat.maximal_sieve(c).mask()]))
            .collect();
        GrothendieckTopology { covers }
    }

    /// Builds an unvalidated cover assignment from an explicit sieve family.
    /// The maximal sieve of every object is always included.
    pub fn from_sieves(cat: &FinCategory, sieves: impl IntoIterator<Item = Sieve>) -> Self {
        let mut top = GrothendieckTopology::trivial(cat);
        for s in sieves {
            top.insert(s);
        }
        top
    }

    /// The covering sieves of `c`, in ascending mask order.
    pub fn covers(&self, c: ObjId) -> impl Iterator<Item = Sieve> + '_ {
        self.covers[c.0]
            .iter()
            .map(move |&mask| Sieve::from_mask(c, mask))
    }

    /// Number of covering sieves of `c`.
    pub fn cover_count(&self, c: ObjId) -> usize {
        self.covers[c.0].len()
    }

    /// Total number of covering sieves across all objects.
    pub fn total_covers(&self) -> usize {
        self.covers.iter().map(BTreeSet::len).sum()
    }

    /// Whether the sieve is a covering sieve of its root.
    pub fn is_covering(&self, s: Sieve) -> bool {
        self.covers[s.root().0].contains(&s.mask())
    }

    /// Whether the empty sieve covers `c` (the degenerate situation in which
    /// the object is forced to be "nowhere").
    pub fn empty_covers(&self, c: ObjId) -> bool {
        self.covers[c.0].contains(&0)
    }

    /// Objectwise inclusion: every cover of `other` is a cover of `self`.
    pub fn includes(&self, other: &GrothendieckTopology) -> bool {
        self.covers
            .iter()
            .zip(&other.covers)
            .all(|(big, small)| small.is_subset(big))
    }

    pub(crate) fn insert(&mut self, s: Sieve) -> bool {
        self.covers[s.root().0].insert(s.mask())
    }

    pub(crate) fn contains_mask(&self, c: ObjId, mask: u64) -> bool {
        self.covers[c.0].contains(&mask)
    }
}

/// The three axioms a cover assignment must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologyAxiom {
    Maximality,
    Stability,
    Transitivity,
}

impl fmt::Display for TopologyAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            TopologyAxiom::Maximality => "maximality",
            TopologyAxiom::Stability => "stability",
            TopologyAxiom::Transitivity => "transitivity",
        };
        f.write_str(name)
    }
}

/// A witnessed axiom failure found by [`is_topology`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyViolation {
    pub axiom: TopologyAxiom,
    /// The object at which the axiom fails.
    pub object: ObjId,
    /// Maximality: the missing maximal sieve. Stability: the cover whose
    /// pullback is not a cover. Transitivity: the sieve that should cover
    /// but does not.
    pub sieve: Sieve,
    /// Stability only: the arrow along which the pullback escapes.
    pub arrow: Option<ArrowId>,
    /// Transitivity only: the cover that forces the sieve.
    pub via: Option<Sieve>,
}

impl TopologyViolation {
    /// Renders the violation with names from the category.
    pub fn describe(&self, cat: &FinCategory) -> String {
        let obj = cat.object_name(self.object);
        match self.axiom {
            TopologyAxiom::Maximality => {
                format!("maximality fails at `{obj}`: the maximal sieve is not a cover")
            }
            TopologyAxiom::Stability => format!(
                "stability fails at `{obj}`: pullback of cover {} along `{}` is not a cover",
                cat.sieve_to_string(self.sieve),
                self.arrow.map(|f| cat.arrow_name(f)).unwrap_or("?"),
            ),
            TopologyAxiom::Transitivity => format!(
                "transitivity fails at `{obj}`: {} is forced by cover {} but is not a cover",
                cat.sieve_to_string(self.sieve),
                self.via.map(|s| cat.sieve_to_string(s)).unwrap_or_default(),
            ),
        }
    }
}

fn check_fanin(cat: &FinCategory, c: ObjId, caps: &Caps) -> Result<usize, CapExceeded> {
    let k = cat.fan_in(c).len();
    let bound = caps.fanin_bound();
    if k > bound {
        return Err(CapExceeded::new(
            format!("fan-in of object `{}`", cat.object_name(c)),
            k,
            bound,
        ));
    }
    Ok(k)
}

/// Every sieve on `c`: the precomposition-closed subsets of its fan-in, in
/// ascending mask order.
pub fn all_sieves(cat: &FinCategory, c: ObjId, caps: &Caps) -> Result<Vec<Sieve>, CapExceeded> {
    let k = check_fanin(cat, c, caps)?;
    let mut out = Vec::new();
    for mask in 0..(1u64 << k) {
        if cat.is_closed_mask(c, mask) {
            out.push(Sieve::from_mask(c, mask));
        }
    }
    Ok(out)
}

/// Decides the three topology axioms for a cover assignment, reporting every
/// violation (an empty list means the assignment is a Grothendieck topology).
pub fn is_topology(
    cat: &FinCategory,
    top: &GrothendieckTopology,
    caps: &Caps,
) -> Result<Vec<TopologyViolation>, CapExceeded> {
    let mut violations = Vec::new();
    for c in cat.objects() {
        if !top.is_covering(cat.maximal_sieve(c)) {
            violations.push(TopologyViolation {
                axiom: TopologyAxiom::Maximality,
                object: c,
                sieve: cat.maximal_sieve(c),
                arrow: None,
                via: None,
            });
        }
        for s in top.covers(c) {
            for &f in cat.fan_in(c) {
                let pulled = Sieve::from_mask(cat.dom(f), cat.pull_mask(f, s.mask()));
                if !top.is_covering(pulled) {
                    violations.push(TopologyViolation {
                        axiom: TopologyAxiom::Stability,
                        object: c,
                        sieve: s,
                        arrow: Some(f),
                        via: None,
                    });
                }
            }
        }
        for r in all_sieves(cat, c, caps)? {
            if top.is_covering(r) {
                continue;
            }
            let forced_by = top.covers(c).find(|s| {
                cat.sieve_arrows(*s).iter().all(|&f| {
                    let pulled = Sieve::from_mask(cat.dom(f), cat.pull_mask(f, r.mask()));
                    top.is_covering(pulled)
                })
            });
            if let Some(via) = forced_by {
                violations.push(TopologyViolation {
                    axiom: TopologyAxiom::Transitivity,
                    object: c,
                    sieve: r,
                    arrow: None,
                    via: Some(via),
                });
            }
        }
    }
    Ok(violations)
}

/// The least Grothendieck topology containing `base` (trivial if absent) in
/// which every generator sieve covers its root.
///
/// Runs the standard saturation: seed with the base, the maximal sieves, and
/// the generators, then repeatedly add everything forced by stability,
/// upward closure, and transitivity until a fixed point is reached. Each
/// step only adds sieves that every topology containing the seed must
/// contain, so the fixed point is the least such topology.
pub fn generate_topology(
    cat: &FinCategory,
    base: Option<&GrothendieckTopology>,
    generators: &[Sieve],
    caps: &Caps,
) -> Result<GrothendieckTopology, CapExceeded> {
    let all: Vec<Vec<Sieve>> = cat
        .objects()
        .map(|c| all_sieves(cat, c, caps))
        .collect::<Result<_, _>>()?;

    let mut top = match base {
        Some(base) => {
            let mut t = GrothendieckTopology::trivial(cat);
            for c in cat.objects() {
                for s in base.covers(c) {
                    t.insert(s);
                }
            }
            t
        }
        None => GrothendieckTopology::trivial(cat),
    };
    for &g in generators {
        top.insert(g);
    }

    loop {
        let mut changed = false;

        // Stability: pullbacks of covers along every arrow.
        for c in cat.objects() {
            let snapshot: Vec<Sieve> = top.covers(c).collect();
            for s in snapshot {
                for &f in cat.fan_in(c) {
                    let pulled = Sieve::from_mask(cat.dom(f), cat.pull_mask(f, s.mask()));
                    changed |= top.insert(pulled);
                }
            }
        }

        // Upward closure (a special case of transitivity, applied eagerly).
        for c in cat.objects() {
            let snapshot: Vec<Sieve> = top.covers(c).collect();
            for r in &all[c.0] {
                if top.is_covering(*r) {
                    continue;
                }
                if snapshot
                    .iter()
                    .any(|s| s.mask() & !r.mask() == 0 && s.root() == r.root())
                {
                    top.insert(*r);
                    changed = true;
                }
            }
        }

        // Transitivity: sieves covered locally along some cover.
        for c in cat.objects() {
            let candidates: Vec<Sieve> = all[c.0]
                .iter()
                .copied()
                .filter(|r| !top.is_covering(*r))
                .collect();
            let snapshot: Vec<Sieve> = top.covers(c).collect();
            for r in candidates {
                let forced = snapshot.iter().any(|s| {
                    cat.sieve_arrows(*s)
                        .iter()
                        .all(|&f| top.contains_mask(cat.dom(f), cat.pull_mask(f, r.mask())))
                });
                if forced {
                    top.insert(r);
                    changed = true;
                }
            }
        }

        if !changed {
            return Ok(top);
        }
    }
}

/// The closure of a sieve: all arrows whose pullback of the sieve covers
/// their domain. Closed sieves (fixed points) are the truth values of the
/// site.
pub fn closure(cat: &FinCategory, top: &GrothendieckTopology, s: Sieve) -> Sieve {
    let c = s.root();
    let mut mask = 0u64;
    for (i, &f) in cat.fan_in(c).iter().enumerate() {
        if top.contains_mask(cat.dom(f), cat.pull_mask(f, s.mask())) {
            mask |= 1 << i;
        }
    }
    Sieve::from_mask(c, mask)
}

/// Whether a sieve equals its closure.
pub fn is_closed(cat: &FinCategory, top: &GrothendieckTopology, s: Sieve) -> bool {
    closure(cat, top, s) == s
}

/// All closed sieves on `c`, in ascending mask order.
pub fn closed_sieves(
    cat: &FinCategory,
    top: &GrothendieckTopology,
    c: ObjId,
    caps: &Caps,
) -> Result<Vec<Sieve>, CapExceeded> {
    Ok(all_sieves(cat, c, caps)?
        .into_iter()
        .filter(|&s| is_closed(cat, top, s))
        .collect())
}

/// Every Grothendieck topology on the category, by exhaustive search.
///
/// An oracle for minimality and maximality arguments; guarded by
/// `caps.max_enum_arrows` because the candidate space is exponential in the
/// total sieve count.
pub fn enumerate_topologies(
    cat: &FinCategory,
    caps: &Caps,
) -> Result<Vec<GrothendieckTopology>, CapExceeded> {
    if cat.arrow_count() > caps.max_enum_arrows {
        return Err(CapExceeded::new(
            "total arrow count for topology enumeration",
            cat.arrow_count(),
            caps.max_enum_arrows,
        ));
    }
    // Optional sieves per object: everything except the mandatory maximal.
    let mut optional: Vec<Vec<Sieve>> = Vec::new();
    for c in cat.objects() {
        optional.push(
            all_sieves(cat, c, caps)?
                .into_iter()
                .filter(|&s| s != cat.maximal_sieve(c))
                .collect(),
        );
    }

    let mut found = Vec::new();
    let mut choice = vec![0u64; cat.object_count()];
    loop {
        let mut top = GrothendieckTopology::trivial(cat);
        for c in cat.objects() {
            for (i, &s) in optional[c.0].iter().enumerate() {
                if choice[c.0] & (1 << i) != 0 {
                    top.insert(s);
                }
            }
        }
        if is_topology(cat, &top, caps)?.is_empty() {
            found.push(top);
        }

        // Advance the per-object subset counter (last object fastest).
        let mut done = true;
        for c in (0..cat.object_count()).rev() {
            choice[c] += 1;
            if choice[c] < (1u64 << optional[c].len()) {
                done = false;
                break;
            }
            choice[c] = 0;
        }
        if done {
            return Ok(found);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{validate_category, CategoryData};

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

    /// The topology on the walking arrow in which `{u}` covers `b`; the
    /// empty sieve stays non-covering everywhere.
    fn dense_walking_arrow() -> (FinCategory, GrothendieckTopology) {
        let cat = walking_arrow();
        let b = cat.object_by_name("b").unwrap();
        let u = cat.arrow_by_name("u").unwrap();
        let gen = cat.generate_sieve(b, &[u]).unwrap();
        let top = generate_topology(&cat, None, &[gen], &caps()).unwrap();
        (cat, top)
    }

    #[test]
    fn all_sieves_on_terminal() {
        let cat = terminal();
        let sieves = all_sieves(&cat, ObjId(0), &caps()).unwrap();
        assert_eq!(sieves.len(), 2);
    }

    #[test]
    fn all_sieves_on_walking_arrow() {
        let cat = walking_arrow();
        let b = cat.object_by_name("b").unwrap();
        let sieves = all_sieves(&cat, b, &caps()).unwrap();
        let rendered: Vec<String> = sieves.iter().map(|&s| cat.sieve_to_string(s)).collect();
        assert_eq!(rendered, vec!["{}", "{u}", "{id_b, u}"]);
    }

    #[test]
    fn all_sieves_on_cospan_apex() {
        let cat = cospan();
        let a = cat.object_by_name("a").unwrap();
        let sieves = all_sieves(&cat, a, &caps()).unwrap();
        let rendered: Vec<String> = sieves.iter().map(|&s| cat.sieve_to_string(s)).collect();
        assert_eq!(rendered, vec!["{}", "{f}", "{g}", "{f, g}", "{id_a, f, g}"]);
    }

    #[test]
    fn trivial_assignment_is_a_topology() {
        let cat = cospan();
        let top = GrothendieckTopology::trivial(&cat);
        assert!(is_topology(&cat, &top, &caps()).unwrap().is_empty());
    }

    #[test]
    fn unstable_assignment_is_reported() {
        let cat = walking_arrow();
        let b = cat.object_by_name("b").unwrap();
        let u = cat.arrow_by_name("u").unwrap();
        let mut top = GrothendieckTopology::trivial(&cat);
        top.insert(cat.generate_sieve(b, &[u]).unwrap());
        top.insert(cat.empty_sieve(b));
        let violations = is_topology(&cat, &top, &caps()).unwrap();
        assert!(violations
            .iter()
            .any(|v| v.axiom == TopologyAxiom::Stability));
    }

    #[test]
    fn missing_maximal_sieve_is_reported() {
        let cat = walking_arrow();
        let b = cat.object_by_name("b").unwrap();
        let a = cat.object_by_name("a").unwrap();
        let u = cat.arrow_by_name("u").unwrap();
        let top = GrothendieckTopology {
            covers: vec![
                BTreeSet::from([cat.maximal_sieve(a).mask()]),
                BTreeSet::from([cat.generate_sieve(b, &[u]).unwrap().mask()]),
            ],
        };
        let violations = is_topology(&cat, &top, &caps()).unwrap();
        assert!(violations
            .iter()
            .any(|v| v.axiom == TopologyAxiom::Maximality && v.object == b));
    }

    #[test]
    fn generation_without_generators_is_trivial() {
        let cat = cospan();
        let top = generate_topology(&cat, None, &[], &caps()).unwrap();
        assert_eq!(top, GrothendieckTopology::trivial(&cat));
    }

    #[test]
    fn dense_topology_on_walking_arrow() {
        let (cat, top) = dense_walking_arrow();
        let a = cat.object_by_name("a").unwrap();
        let b = cat.object_by_name("b").unwrap();
        let u = cat.arrow_by_name("u").unwrap();
        assert!(is_topology(&cat, &top, &caps()).unwrap().is_empty());
        assert_eq!(top.cover_count(a), 1);
        let covers_b: Vec<Sieve> = top.covers(b).collect();
        assert_eq!(
            covers_b,
            vec![cat.generate_sieve(b, &[u]).unwrap(), cat.maximal_sieve(b)]
        );
    }

    #[test]
    fn empty_sieve_generator_degenerates_the_terminal_site() {
        let cat = terminal();
        let star = ObjId(0);
        let top = generate_topology(&cat, None, &[cat.empty_sieve(star)], &caps()).unwrap();
        assert_eq!(top.cover_count(star), 2);
        assert!(top.empty_covers(star));
        assert!(is_topology(&cat, &top, &caps()).unwrap().is_empty());
    }

    #[test]
    fn closure_under_trivial_topology_is_identity() {
        let cat = walking_arrow();
        let b = cat.object_by_name("b").unwrap();
        let top = GrothendieckTopology::trivial(&cat);
        for s in all_sieves(&cat, b, &caps()).unwrap() {
            assert_eq!(closure(&cat, &top, s), s);
        }
    }

    #[test]
    fn closure_under_dense_topology() {
        let (cat, top) = dense_walking_arrow();
        let b = cat.object_by_name("b").unwrap();
        let u = cat.arrow_by_name("u").unwrap();
        assert_eq!(closure(&cat, &top, cat.empty_sieve(b)), cat.empty_sieve(b));
        let s = cat.generate_sieve(b, &[u]).unwrap();
        assert_eq!(closure(&cat, &top, s), cat.maximal_sieve(b));
        assert_eq!(
            closure(&cat, &top, cat.maximal_sieve(b)),
            cat.maximal_sieve(b)
        );
    }

    #[test]
    fn closed_sieves_under_trivial_and_dense_topologies() {
        let (cat, dense) = dense_walking_arrow();
        let b = cat.object_by_name("b").unwrap();
        let trivial = GrothendieckTopology::trivial(&cat);
        assert_eq!(closed_sieves(&cat, &trivial, b, &caps()).unwrap().len(), 3);
        let closed = closed_sieves(&cat, &dense, b, &caps()).unwrap();
        assert_eq!(closed, vec![cat.empty_sieve(b), cat.maximal_sieve(b)]);
    }

    #[test]
    fn topology_counts_on_tiny_categories() {
        assert_eq!(enumerate_topologies(&terminal(), &caps()).unwrap().len(), 2);
        assert_eq!(
            enumerate_topologies(&walking_arrow(), &caps())
                .unwrap()
                .len(),
            4
        );
        assert_eq!(enumerate_topologies(&cospan(), &caps()).unwrap().len(), 8);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let cat = cospan();
        let caps = Caps {
            max_enum_arrows: 4,
            ..Caps::default()
        };
        assert!(enumerate_topologies(&cat, &caps).is_err());
    }

    #[test]
    fn generated_topologies_are_upward_closed() {
        let (cat, top) = dense_walking_arrow();
        for c in cat.objects() {
            for s in top.covers(c) {
                for r in all_sieves(&cat, c, &caps()).unwrap() {
                    if cat.sieve_subset(s, r).unwrap() {
                        assert!(top.is_covering(r));
                    }
                }
            }
        }
    }
}
