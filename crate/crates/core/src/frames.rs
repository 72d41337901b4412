//! Finite frames (complete Heyting algebras, i.e. finite distributive
//! lattices), nuclei, filters, filter quotients, smallest sublocales for a
//! logic, and the direct fixset descriptions of the De Morgan and
//! Gödel-Dummett sublocales.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::caps::{CapExceeded, Caps};
use crate::fincat::Sieve;
use crate::logic::{eval_in_frame, Term};

/// Index of an element within its [`FiniteFrame`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FrameElt(pub usize);

/// A defect in frame, nucleus, or filter input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("a frame needs at least one element")]
    Empty,
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
    #[error("order is not antisymmetric: `{a}` and `{b}` are below each other")]
    NotAntisymmetric { a: String, b: String },
    #[error("elements `{a}` and `{b}` have no greatest lower bound")]
    MissingMeet { a: String, b: String },
    #[error("elements `{a}` and `{b}` have no least upper bound")]
    MissingJoin { a: String, b: String },
    #[error("lattice is not distributive at (`{a}`, `{b}`, `{c}`)")]
    NotDistributive { a: String, b: String, c: String },
    #[error("map has {got} entries, frame has {expected} elements")]
    WrongMapLength { expected: usize, got: usize },
    #[error("map is not inflationary at `{at}`")]
    NotInflationary { at: String },
    #[error("map is not idempotent at `{at}`")]
    NotIdempotent { at: String },
    #[error("map does not preserve the meet of `{a}` and `{b}`")]
    NotMeetPreserving { a: String, b: String },
    #[error("filter does not contain the top element")]
    FilterMissingTop,
    #[error("filter contains `{member}` but not `{above}` above it")]
    FilterNotUpward { member: String, above: String },
    #[error("filter is not closed under the meet of `{a}` and `{b}`")]
    FilterNotMeetClosed { a: String, b: String },
    #[error(transparent)]
    Cap(#[from] CapExceeded),
}

/// A validated finite frame: a bounded distributive lattice with its Heyting
/// implication tabulated.
///
/// Distributivity is exactly what makes a finite bounded lattice a frame
/// (finite meets distribute over the finite joins, and the relative
/// pseudocomplement `a -> b` exists as the join of `{x | x & a <= b}`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFrame {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    imp: Vec<Vec<usize>>,
    bot: usize,
    top: usize,
}

impl FiniteFrame {
    /// Validates an order (given as `(lower, upper)` pairs over element
    /// indices; reflexivity and transitivity are taken for free) into a
    /// frame.
    pub fn new(
        names: Vec<String>,
        order: &[(usize, usize)],
        caps: &Caps,
    ) -> Result<FiniteFrame, FrameError> {
        let n = names.len();
        if n == 0 {
            return Err(FrameError::Empty);
        }
        if n > caps.max_frame {
            return Err(CapExceeded::new("frame element count", n, caps.max_frame).into());
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(FrameError::DuplicateName(name.clone()));
            }
        }

        // Reflexive-transitive closure of the given pairs.
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(lo, hi) in order {
            leq[lo][hi] = true;
        }
        for k in 0..n {
            // Row `k` cannot gain entries during its own phase, so a copy
            // sidesteps aliasing between the read and written rows.
            let via = leq[k].clone();
            for row in leq.iter_mut() {
                if row[k] {
                    for (j, &step) in via.iter().enumerate() {
                        if step {
                            row[j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(FrameError::NotAntisymmetric {
                        a: names[i].clone(),
                        b: names[j].clone(),
                    });
                }
            }
        }

        // Pairwise greatest lower / least upper bounds.
        let glb = |a: usize, b: usize| -> Option<usize> {
            let bounds: Vec<usize> = (0..n).filter(|&z| leq[z][a] && leq[z][b]).collect();
            bounds
                .iter()
                .copied()
                .find(|&z| bounds.iter().all(|&w| leq[w][z]))
        };
        let lub = |a: usize, b: usize| -> Option<usize> {
            let bounds: Vec<usize> = (0..n).filter(|&z| leq[a][z] && leq[b][z]).collect();
            bounds
                .iter()
                .copied()
                .find(|&z| bounds.iter().all(|&w| leq[z][w]))
        };
        let mut meet = vec![vec![0usize; n]; n];
        let mut join = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                meet[a][b] = glb(a, b).ok_or_else(|| FrameError::MissingMeet {
                    a: names[a].clone(),
                    b: names[b].clone(),
                })?;
                join[a][b] = lub(a, b).ok_or_else(|| FrameError::MissingJoin {
                    a: names[a].clone(),
                    b: names[b].clone(),
                })?;
            }
        }
        let bot = (0..n).fold(0, |acc, x| meet[acc][x]);
        let top = (0..n).fold(0, |acc, x| join[acc][x]);

        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]] {
                        return Err(FrameError::NotDistributive {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            c: names[c].clone(),
                        });
                    }
                }
            }
        }

        // Heyting implication: the largest x with x & a <= b. In a finite
        // distributive lattice the candidate set is join-closed, so its join
        // is itself a candidate.
        let mut imp = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let x = (0..n)
                    .filter(|&x| leq[meet[x][a]][b])
                    .fold(bot, |acc, x| join[acc][x]);
                debug_assert!(leq[meet[x][a]][b], "residuation must hold");
                imp[a][b] = x;
            }
        }

        Ok(FiniteFrame {
            names,
            leq,
            meet,
            join,
            imp,
            bot,
            top,
        })
    }

    /// Number of elements.
    pub fn element_count(&self) -> usize {
        self.names.len()
    }

    /// All elements, in index order.
    pub fn elements(&self) -> impl Iterator<Item = FrameElt> {
        (0..self.element_count()).map(FrameElt)
    }

    /// The order relation.
    pub fn leq(&self, a: FrameElt, b: FrameElt) -> bool {
        self.leq[a.0][b.0]
    }

    /// Binary meet.
    pub fn meet(&self, a: FrameElt, b: FrameElt) -> FrameElt {
        FrameElt(self.meet[a.0][b.0])
    }

    /// Binary join.
    pub fn join(&self, a: FrameElt, b: FrameElt) -> FrameElt {
        FrameElt(self.join[a.0][b.0])
    }

    /// Heyting implication.
    pub fn imp(&self, a: FrameElt, b: FrameElt) -> FrameElt {
        FrameElt(self.imp[a.0][b.0])
    }

    /// Pseudocomplement `a -> 0`.
    pub fn neg(&self, a: FrameElt) -> FrameElt {
        self.imp(a, self.bot())
    }

    /// The bottom element.
    pub fn bot(&self) -> FrameElt {
        FrameElt(self.bot)
    }

    /// The top element.
    pub fn top(&self) -> FrameElt {
        FrameElt(self.top)
    }

    /// Join of arbitrarily many elements (empty join is bottom).
    pub fn join_all(&self, elts: impl IntoIterator<Item = FrameElt>) -> FrameElt {
        elts.into_iter()
            .fold(self.bot(), |acc, x| self.join(acc, x))
    }

    /// Meet of arbitrarily many elements (empty meet is top).
    pub fn meet_all(&self, elts: impl IntoIterator<Item = FrameElt>) -> FrameElt {
        elts.into_iter()
            .fold(self.top(), |acc, x| self.meet(acc, x))
    }

    /// Name of an element.
    pub fn name(&self, e: FrameElt) -> &str {
        &self.names[e.0]
    }

    /// Looks an element up by name.
    pub fn element_by_name(&self, name: &str) -> Option<FrameElt> {
        self.names.iter().position(|n| n == name).map(FrameElt)
    }

    /// Elements below `a`, ascending.
    pub fn downset(&self, a: FrameElt) -> Vec<FrameElt> {
        self.elements().filter(|&x| self.leq(x, a)).collect()
    }

    /// Pointwise comparison of two nuclei in the frame order.
    pub fn nucleus_leq(&self, lo: &Nucleus, hi: &Nucleus) -> bool {
        self.elements().all(|a| self.leq(lo.apply(a), hi.apply(a)))
    }
}

/// An inflationary, idempotent, meet-preserving endomap of a frame. Nuclei
/// are in bijection with the sublocales of the frame; the fixset carries the
/// quotient frame structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nucleus {
    map: Vec<usize>,
}

impl Nucleus {
    /// Validates the three nucleus laws.
    pub fn new(frame: &FiniteFrame, map: Vec<FrameElt>) -> Result<Nucleus, FrameError> {
        let n = frame.element_count();
        if map.len() != n {
            return Err(FrameError::WrongMapLength {
                expected: n,
                got: map.len(),
            });
        }
        for a in frame.elements() {
            if !frame.leq(a, map[a.0]) {
                return Err(FrameError::NotInflationary {
                    at: frame.name(a).to_string(),
                });
            }
        }
        for a in frame.elements() {
            if map[map[a.0].0] != map[a.0] {
                return Err(FrameError::NotIdempotent {
                    at: frame.name(a).to_string(),
                });
            }
        }
        for a in frame.elements() {
            for b in frame.elements() {
                let lhs = map[frame.meet(a, b).0];
                let rhs = frame.meet(map[a.0], map[b.0]);
                if lhs != rhs {
                    return Err(FrameError::NotMeetPreserving {
                        a: frame.name(a).to_string(),
                        b: frame.name(b).to_string(),
                    });
                }
            }
        }
        Ok(Nucleus {
            map: map.into_iter().map(|e| e.0).collect(),
        })
    }

    /// The identity nucleus.
    pub fn identity(frame: &FiniteFrame) -> Nucleus {
        Nucleus {
            map: (0..frame.element_count()).collect(),
        }
    }

    /// Applies the nucleus.
    pub fn apply(&self, a: FrameElt) -> FrameElt {
        FrameElt(self.map[a.0])
    }

    /// The fixed elements, ascending.
    pub fn fixset(&self) -> Vec<FrameElt> {
        self.map
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i == j)
            .map(|(i, _)| FrameElt(i))
            .collect()
    }
}

/// A filter: an upward-closed, meet-closed subset containing the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filter {
    members: Vec<bool>,
}

impl Filter {
    /// Validates an explicit member set.
    pub fn new(frame: &FiniteFrame, members: &[FrameElt]) -> Result<Filter, FrameError> {
        let mut flags = vec![false; frame.element_count()];
        for &m in members {
            flags[m.0] = true;
        }
        if !flags[frame.top().0] {
            return Err(FrameError::FilterMissingTop);
        }
        for a in frame.elements() {
            if !flags[a.0] {
                continue;
            }
            for b in frame.elements() {
                if frame.leq(a, b) && !flags[b.0] {
                    return Err(FrameError::FilterNotUpward {
                        member: frame.name(a).to_string(),
                        above: frame.name(b).to_string(),
                    });
                }
                if flags[b.0] && !flags[frame.meet(a, b).0] {
                    return Err(FrameError::FilterNotMeetClosed {
                        a: frame.name(a).to_string(),
                        b: frame.name(b).to_string(),
                    });
                }
            }
        }
        Ok(Filter { members: flags })
    }

    /// Membership test.
    pub fn contains(&self, a: FrameElt) -> bool {
        self.members[a.0]
    }

    /// The members, ascending.
    pub fn members(&self) -> Vec<FrameElt> {
        self.members
            .iter()
            .enumerate()
            .filter(|&(_, &m)| m)
            .map(|(i, _)| FrameElt(i))
            .collect()
    }

    /// Whether the filter contains the bottom element (and hence everything).
    pub fn is_improper(&self, frame: &FiniteFrame) -> bool {
        self.contains(frame.bot())
    }
}

/// The smallest filter containing the seeds: the upward closure of all
/// finite meets of seeds (the empty meet being the top).
pub fn filter_generated(frame: &FiniteFrame, seeds: &[FrameElt]) -> Filter {
    let mut flags = vec![false; frame.element_count()];
    flags[frame.top().0] = true;
    for &s in seeds {
        flags[s.0] = true;
    }
    // Close under binary meets.
    loop {
        let members: Vec<usize> = (0..flags.len()).filter(|&i| flags[i]).collect();
        let mut changed = false;
        for &a in &members {
            for &b in &members {
                let m = frame.meet(FrameElt(a), FrameElt(b)).0;
                if !flags[m] {
                    flags[m] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    // Close upward.
    for a in frame.elements() {
        if flags[a.0] {
            for b in frame.elements() {
                if frame.leq(a, b) {
                    flags[b.0] = true;
                }
            }
        }
    }
    Filter { members: flags }
}

/// A filter quotient: the equivalence classes of `a ~ b iff
/// (a -> b) & (b -> a) in F`, the induced greatest-representative nucleus,
/// and the quotient frame carried by the representatives.
#[derive(Debug, Clone)]
pub struct FilterQuotient {
    /// The partition, each class ascending, classes ordered by their
    /// greatest representative.
    pub classes: Vec<Vec<FrameElt>>,
    /// Element index → class index.
    pub projection: Vec<usize>,
    /// Maps every element to the greatest member of its class.
    pub nucleus: Nucleus,
    /// The quotient as a frame over the greatest representatives (names are
    /// inherited from the representatives).
    pub frame: FiniteFrame,
    /// True when the filter was improper and everything collapsed to a
    /// single point.
    pub collapsed: bool,
}

/// Quotients a frame by a filter.
///
/// Classes are join-closed (an invariant of the construction, exercised by
/// the test suites), so mapping each element to the join of its class is a
/// well-defined nucleus whose fixset carries the quotient frame.
pub fn quotient_by_filter(frame: &FiniteFrame, filter: &Filter) -> FilterQuotient {
    let equivalent = |a: FrameElt, b: FrameElt| -> bool {
        filter.contains(frame.meet(frame.imp(a, b), frame.imp(b, a)))
    };

    let n = frame.element_count();
    let mut rep = vec![0usize; n];
    for a in frame.elements() {
        let class_join = frame.join_all(frame.elements().filter(|&b| equivalent(a, b)));
        assert!(
            equivalent(a, class_join),
            "filter-quotient classes must be join-closed"
        );
        rep[a.0] = class_join.0;
    }

    let reps: Vec<usize> = {
        let mut sorted: Vec<usize> = rep.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted
    };
    let classes: Vec<Vec<FrameElt>> = reps
        .iter()
        .map(|&r| {
            frame
                .elements()
                .filter(|&a| rep[a.0] == r)
                .collect::<Vec<_>>()
        })
        .collect();
    let projection: Vec<usize> = (0..n)
        .map(|a| reps.iter().position(|&r| r == rep[a]).unwrap())
        .collect();
    let nucleus = Nucleus::new(frame, rep.iter().map(|&r| FrameElt(r)).collect::<Vec<_>>())
        .expect("the greatest-representative map of a filter quotient is a nucleus");

    let names: Vec<String> = reps
        .iter()
        .map(|&r| frame.name(FrameElt(r)).to_string())
        .collect();
    let mut order = Vec::new();
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            if i != j && frame.leq(FrameElt(a), FrameElt(b)) {
                order.push((i, j));
            }
        }
    }
    let caps = Caps {
        max_frame: n.max(1),
        ..Caps::default()
    };
    let quotient_frame =
        FiniteFrame::new(names, &order, &caps).expect("a filter quotient of a frame is a frame");

    FilterQuotient {
        classes,
        projection,
        nucleus,
        frame: quotient_frame,
        collapsed: filter.is_improper(frame),
    }
}

/// Upper bound on the assignment scans performed by [`l_sublocale`].
const ASSIGNMENT_SCAN_LIMIT: u128 = 1 << 22;

/// The smallest sublocale of the frame satisfying an axiom, as a filter
/// quotient.
#[derive(Debug, Clone)]
pub struct Sublocale {
    /// The distinct values of the axiom over all assignments, ascending.
    pub seeds: Vec<FrameElt>,
    /// The filter those values generate.
    pub filter: Filter,
    /// The quotient by that filter.
    pub quotient: FilterQuotient,
}

/// Computes the smallest sublocale satisfying `axiom`: quotient by the
/// filter generated by every value the axiom takes.
pub fn l_sublocale(frame: &FiniteFrame, axiom: &Term) -> Result<Sublocale, CapExceeded> {
    let vars = axiom.free_vars();
    let n = frame.element_count();
    let total = (n as u128).pow(vars.len() as u32);
    if total > ASSIGNMENT_SCAN_LIMIT {
        return Err(CapExceeded::new(
            "frame assignment scan",
            total.min(usize::MAX as u128) as usize,
            ASSIGNMENT_SCAN_LIMIT as usize,
        ));
    }

    let mut seeds = BTreeSet::new();
    let mut indices = vec![0usize; vars.len()];
    loop {
        let env: std::collections::BTreeMap<String, FrameElt> = vars
            .iter()
            .zip(&indices)
            .map(|(v, &i)| (v.clone(), FrameElt(i)))
            .collect();
        let value =
            eval_in_frame(axiom, frame, &env).expect("assignment covers the axiom's variables");
        seeds.insert(value);

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
            break;
        }
    }

    let seeds: Vec<FrameElt> = seeds.into_iter().collect();
    let filter = filter_generated(frame, &seeds);
    let quotient = quotient_by_filter(frame, &filter);
    Ok(Sublocale {
        seeds,
        filter,
        quotient,
    })
}

/// A sublocale given directly by its fixset and reflection map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectSublocale {
    /// The member elements, ascending.
    pub members: Vec<FrameElt>,
    /// Sends each element to the least member above it.
    pub reflection: Nucleus,
}

/// A direct sublocale construction, as compared against the filter-quotient
/// ground truth.
pub type DirectConstruction = fn(&FiniteFrame) -> Result<DirectSublocale, FrameError>;

fn reflection_into(frame: &FiniteFrame, members: &[FrameElt]) -> Result<Nucleus, FrameError> {
    let map: Vec<FrameElt> = frame
        .elements()
        .map(|l| frame.meet_all(members.iter().copied().filter(|&m| frame.leq(l, m))))
        .collect();
    Nucleus::new(frame, map)
}

/// The De Morgan sublocale described directly: the elements `l` such that
/// for all `r <= a`, if every `b <= a` that either misses `r` (`b & r = 0`)
/// or meets `r` everywhere (every nonzero `c <= b` has `c & r != 0`) lies
/// below `l`, then `a <= l`. The reflection sends `l` to the least such
/// element above it.
pub fn demorganization_direct(frame: &FiniteFrame) -> Result<DirectSublocale, FrameError> {
    let is_member = |l: FrameElt| -> bool {
        for a in frame.elements() {
            for r in frame.elements() {
                if !frame.leq(r, a) {
                    continue;
                }
                let forced = frame.elements().filter(|&b| frame.leq(b, a)).all(|b| {
                    let misses = frame.meet(b, r) == frame.bot();
                    let meets_everywhere = frame
                        .elements()
                        .filter(|&c| c != frame.bot() && frame.leq(c, b))
                        .all(|c| frame.meet(c, r) != frame.bot());
                    if misses || meets_everywhere {
                        frame.leq(b, l)
                    } else {
                        true
                    }
                });
                if forced && !frame.leq(a, l) {
                    return false;
                }
            }
        }
        true
    };
    let members: Vec<FrameElt> = frame.elements().filter(|&l| is_member(l)).collect();
    let reflection = reflection_into(frame, &members)?;
    Ok(DirectSublocale {
        members,
        reflection,
    })
}

/// The Gödel-Dummett sublocale described directly: the elements `l` such
/// that whenever `r, s <= c` and both `(r -> s) & c` and `(s -> r) & c` lie
/// below `l`, so does `c`.
pub fn gd_sublocale_direct(frame: &FiniteFrame) -> Result<DirectSublocale, FrameError> {
    let is_member = |l: FrameElt| -> bool {
        for c in frame.elements() {
            for r in frame.elements() {
                if !frame.leq(r, c) {
                    continue;
                }
                for s in frame.elements() {
                    if !frame.leq(s, c) {
                        continue;
                    }
                    let rs = frame.meet(frame.imp(r, s), c);
                    let sr = frame.meet(frame.imp(s, r), c);
                    if frame.leq(rs, l) && frame.leq(sr, l) && !frame.leq(c, l) {
                        return false;
                    }
                }
            }
        }
        true
    };
    let members: Vec<FrameElt> = frame.elements().filter(|&l| is_member(l)).collect();
    let reflection = reflection_into(frame, &members)?;
    Ok(DirectSublocale {
        members,
        reflection,
    })
}

/// Compares the direct De Morgan / Gödel-Dummett descriptions against the
/// filter-quotient construction (the ground truth) and reports every
/// difference found. An empty report means they agree on this frame.
pub fn direct_description_discrepancies(frame: &FiniteFrame) -> Vec<String> {
    let mut report = Vec::new();
    let cases: [(&str, DirectConstruction); 2] = [
        ("demorgan", demorganization_direct),
        ("goedel_dummett", gd_sublocale_direct),
    ];
    for (name, direct_fn) in cases {
        let spec = crate::logic::logic_by_name(name).expect("registry logic");
        let quotient = match l_sublocale(frame, &spec.axiom) {
            Ok(sub) => sub.quotient,
            Err(e) => {
                report.push(format!("{name}: filter quotient failed: {e}"));
                continue;
            }
        };
        let direct = match direct_fn(frame) {
            Ok(d) => d,
            Err(e) => {
                report.push(format!("{name}: direct description failed: {e}"));
                continue;
            }
        };
        if direct.reflection != quotient.nucleus {
            report.push(format!(
                "{name}: reflection map differs from the quotient nucleus"
            ));
        }
        if direct.members != quotient.nucleus.fixset() {
            report.push(format!(
                "{name}: direct member set differs from the quotient fixset"
            ));
        }
    }
    report
}

/// The density and openness checks for a nucleus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NucleusChecks {
    /// `j(0) = 0`.
    pub dense: bool,
    /// `j(a & b) = j(0)` implies `j(b) = j(b & ~a)`.
    pub weakly_open: bool,
    /// `j(c & a) <= j(b)` implies `j(c) <= j(a -> b)`.
    pub implicationally_open: bool,
}

/// Evaluates the three checks by literal quantification.
pub fn nucleus_checks(frame: &FiniteFrame, j: &Nucleus) -> NucleusChecks {
    let dense = j.apply(frame.bot()) == frame.bot();

    let mut weakly_open = true;
    'weak: for a in frame.elements() {
        for b in frame.elements() {
            if j.apply(frame.meet(a, b)) == j.apply(frame.bot())
                && j.apply(b) != j.apply(frame.meet(b, frame.neg(a)))
            {
                weakly_open = false;
                break 'weak;
            }
        }
    }

    let mut implicationally_open = true;
    'imp: for a in frame.elements() {
        for b in frame.elements() {
            for c in frame.elements() {
                if frame.leq(j.apply(frame.meet(c, a)), j.apply(b))
                    && !frame.leq(j.apply(c), j.apply(frame.imp(a, b)))
                {
                    implicationally_open = false;
                    break 'imp;
                }
            }
        }
    }

    NucleusChecks {
        dense,
        weakly_open,
        implicationally_open,
    }
}

/// Every nucleus on the frame, via its fixset: a subset containing the top
/// and closed under meets induces the map "least member above"; the three
/// laws are then checked explicitly. Ordered by ascending fixset bitmask.
pub fn enumerate_nuclei(frame: &FiniteFrame, caps: &Caps) -> Result<Vec<Nucleus>, CapExceeded> {
    let n = frame.element_count();
    if n > caps.max_nuclei_frame {
        return Err(CapExceeded::new(
            "frame size for nucleus enumeration",
            n,
            caps.max_nuclei_frame,
        ));
    }
    let mut out = Vec::new();
    for subset in 0u64..(1 << n) {
        if subset & (1 << frame.top().0) == 0 {
            continue;
        }
        let members: Vec<FrameElt> = (0..n)
            .filter(|&i| subset & (1 << i) != 0)
            .map(FrameElt)
            .collect();
        let meet_closed = members.iter().all(|&a| {
            members
                .iter()
                .all(|&b| subset & (1 << frame.meet(a, b).0) != 0)
        });
        if !meet_closed {
            continue;
        }
        if let Ok(nucleus) = reflection_into(frame, &members) {
            out.push(nucleus);
        }
    }
    Ok(out)
}

/// Every nucleus on the frame, by exhaustive map search with inflationary
/// and monotonicity pruning. Slow oracle backing [`enumerate_nuclei`].
pub fn enumerate_nuclei_bruteforce(
    frame: &FiniteFrame,
    caps: &Caps,
) -> Result<Vec<Nucleus>, CapExceeded> {
    let n = frame.element_count();
    if n > caps.max_nuclei_frame {
        return Err(CapExceeded::new(
            "frame size for nucleus enumeration",
            n,
            caps.max_nuclei_frame,
        ));
    }

    fn search(frame: &FiniteFrame, partial: &mut Vec<FrameElt>, out: &mut Vec<Nucleus>) {
        let i = partial.len();
        if i == frame.element_count() {
            if let Ok(nucleus) = Nucleus::new(frame, partial.clone()) {
                out.push(nucleus);
            }
            return;
        }
        let a = FrameElt(i);
        for cand in frame.elements() {
            if !frame.leq(a, cand) {
                continue;
            }
            // Monotonicity against already-assigned arguments (a necessary
            // condition for meet preservation).
            let consistent = (0..i).all(|k| {
                let b = FrameElt(k);
                (!frame.leq(b, a) || frame.leq(partial[k], cand))
                    && (!frame.leq(a, b) || frame.leq(cand, partial[k]))
            });
            if !consistent {
                continue;
            }
            partial.push(cand);
            search(frame, partial, out);
            partial.pop();
        }
    }

    let mut out = Vec::new();
    search(frame, &mut Vec::new(), &mut out);
    Ok(out)
}

/// The quotient frame carried by a nucleus's fixset: order, meets, and the
/// implication are inherited; joins are the nucleus applied to the ambient
/// join, which the order-theoretic construction recovers as least upper
/// bounds within the fixset.
pub fn nucleus_quotient_frame(frame: &FiniteFrame, j: &Nucleus) -> FiniteFrame {
    let fixed = j.fixset();
    let names: Vec<String> = fixed.iter().map(|&a| frame.name(a).to_string()).collect();
    let mut order = Vec::new();
    for (i, &a) in fixed.iter().enumerate() {
        for (k, &b) in fixed.iter().enumerate() {
            if i != k && frame.leq(a, b) {
                order.push((i, k));
            }
        }
    }
    let caps = Caps {
        max_frame: frame.element_count().max(1),
        ..Caps::default()
    };
    FiniteFrame::new(names, &order, &caps).expect("a nucleus fixset carries a frame")
}

/// The poset category of the frame under its canonical coverage: a sieve on
/// `a` covers exactly when the join of its domains is `a` (in particular the
/// empty sieve covers the bottom). Object `i` of the site corresponds to
/// frame element `i`.
pub fn site_from_frame(
    frame: &FiniteFrame,
    caps: &Caps,
) -> Result<crate::omega::Site, CapExceeded> {
    let n = frame.element_count();
    let mut data = crate::fincat::CategoryData::default();
    for a in frame.elements() {
        data.objects.push(frame.name(a).to_string());
    }
    let id_name = |i: usize| format!("id{i}");
    let le_name = |i: usize, j: usize| format!("le_{i}_{j}");
    let arrow_name = |i: usize, j: usize| if i == j { id_name(i) } else { le_name(i, j) };
    for i in 0..n {
        data.arrows.push((
            id_name(i),
            frame.name(FrameElt(i)).to_string(),
            frame.name(FrameElt(i)).to_string(),
        ));
        data.identities
            .push((frame.name(FrameElt(i)).to_string(), id_name(i)));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && frame.leq(FrameElt(i), FrameElt(j)) {
                data.arrows.push((
                    le_name(i, j),
                    frame.name(FrameElt(i)).to_string(),
                    frame.name(FrameElt(j)).to_string(),
                ));
            }
        }
    }
    // Every composable pair: x <= y <= z composes to x <= z.
    for y in 0..n {
        for z in 0..n {
            if !frame.leq(FrameElt(y), FrameElt(z)) {
                continue;
            }
            for x in 0..n {
                if frame.leq(FrameElt(x), FrameElt(y)) {
                    data.composites
                        .push((arrow_name(y, z), arrow_name(x, y), arrow_name(x, z)));
                }
            }
        }
    }
    let cat = crate::fincat::validate_category(&data, caps).map_err(|errs| {
        match errs.into_iter().next() {
            Some(crate::fincat::CategoryError::Cap(c)) => c,
            other => panic!("the poset category of a frame is valid: {other:?}"),
        }
    })?;

    let mut covering = Vec::new();
    for (i, c) in cat.objects().enumerate() {
        for s in crate::coverage::all_sieves(&cat, c, caps)? {
            let join = frame.join_all(
                cat.sieve_arrows(s)
                    .into_iter()
                    .map(|f| FrameElt(cat.dom(f).0)),
            );
            if join == FrameElt(i) {
                covering.push(s);
            }
        }
    }
    let topology = crate::coverage::GrothendieckTopology::from_sieves(&cat, covering);
    match crate::omega::Site::new(cat, topology, *caps) {
        Ok(site) => Ok(site),
        Err(crate::omega::SiteError::Cap(c)) => Err(c),
        Err(e) => panic!("the canonical coverage of a frame is a topology: {e}"),
    }
}

/// The sieve on the site's top object whose domains are the elements below
/// `a`. Requires a site built by [`site_from_frame`] on this frame.
pub fn element_sieve(frame: &FiniteFrame, site: &crate::omega::Site, a: FrameElt) -> Sieve {
    let cat = site.category();
    let top = crate::fincat::ObjId(frame.top().0);
    let members: Vec<_> = cat
        .fan_in(top)
        .iter()
        .copied()
        .filter(|&f| frame.leq(FrameElt(cat.dom(f).0), a))
        .collect();
    cat.sieve_from_arrows(top, &members)
        .expect("a downset is a sieve on the top object")
}

/// The frame element represented by a sieve on the site's top object: the
/// join of the domains of its members.
pub fn sieve_element(frame: &FiniteFrame, site: &crate::omega::Site, s: Sieve) -> FrameElt {
    let cat = site.category();
    frame.join_all(
        cat.sieve_arrows(s)
            .into_iter()
            .map(|f| FrameElt(cat.dom(f).0)),
    )
}

/// The nucleus a topology refinement induces on the frame through the
/// canonical site: an element maps to the one representing the refined
/// closure of its sieve.
pub fn induced_nucleus(
    frame: &FiniteFrame,
    site: &crate::omega::Site,
    finer: &crate::coverage::GrothendieckTopology,
) -> Result<Nucleus, FrameError> {
    let map: Vec<FrameElt> = frame
        .elements()
        .map(|a| {
            let closed =
                crate::coverage::closure(site.category(), finer, element_sieve(frame, site, a));
            sieve_element(frame, site, closed)
        })
        .collect();
    Nucleus::new(frame, map)
}

/// Size limit for exhaustive frame-homomorphism enumeration.
const HOMOMORPHISM_ENUM_LIMIT: usize = 6;

/// Every frame homomorphism (bound-, meet-, and join-preserving map) from
/// `source` to `target`, by pruned exhaustive search. An oracle for the
/// universal property of filter quotients; both frames must have at most
/// six elements.
pub fn frame_homomorphisms(
    source: &FiniteFrame,
    target: &FiniteFrame,
) -> Result<Vec<Vec<FrameElt>>, CapExceeded> {
    for (frame, role) in [(source, "source"), (target, "target")] {
        if frame.element_count() > HOMOMORPHISM_ENUM_LIMIT {
            return Err(CapExceeded::new(
                format!("{role} frame size for homomorphism enumeration"),
                frame.element_count(),
                HOMOMORPHISM_ENUM_LIMIT,
            ));
        }
    }

    fn valid_so_far(source: &FiniteFrame, target: &FiniteFrame, partial: &[FrameElt]) -> bool {
        let i = partial.len() - 1;
        let a = FrameElt(i);
        if a == source.bot() && partial[i] != target.bot() {
            return false;
        }
        if a == source.top() && partial[i] != target.top() {
            return false;
        }
        for k in 0..=i {
            let b = FrameElt(k);
            let m = source.meet(a, b);
            if m.0 <= i && target.meet(partial[i], partial[k]) != partial[m.0] {
                return false;
            }
            let j = source.join(a, b);
            if j.0 <= i && target.join(partial[i], partial[k]) != partial[j.0] {
                return false;
            }
        }
        true
    }

    fn search(
        source: &FiniteFrame,
        target: &FiniteFrame,
        partial: &mut Vec<FrameElt>,
        out: &mut Vec<Vec<FrameElt>>,
    ) {
        if partial.len() == source.element_count() {
            // Final full check: meets/joins whose result index exceeded the
            // operand indices were skipped during construction.
            let full = source.elements().all(|a| {
                source.elements().all(|b| {
                    target.meet(partial[a.0], partial[b.0]) == partial[source.meet(a, b).0]
                        && target.join(partial[a.0], partial[b.0]) == partial[source.join(a, b).0]
                })
            });
            if full {
                out.push(partial.clone());
            }
            return;
        }
        for cand in target.elements() {
            partial.push(cand);
            if valid_so_far(source, target, partial) {
                search(source, target, partial, out);
            }
            partial.pop();
        }
    }

    let mut out = Vec::new();
    search(source, target, &mut Vec::new(), &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{logic_by_name, parse_term};

    fn caps() -> Caps {
        Caps::default()
    }

    fn chain(n: usize) -> FiniteFrame {
        let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let order: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        FiniteFrame::new(names, &order, &caps()).unwrap()
    }

    /// The five-element frame 0 < a, b < c < 1 with a & b = 0.
    fn fork() -> FiniteFrame {
        let names = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        let order = [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)];
        FiniteFrame::new(names, &order, &caps()).unwrap()
    }

    /// The Boolean algebra on two atoms: 0 < a, b < 1.
    fn bool4() -> FiniteFrame {
        let names = ["0", "a", "b", "1"].map(String::from).to_vec();
        let order = [(0, 1), (0, 2), (1, 3), (2, 3)];
        FiniteFrame::new(names, &order, &caps()).unwrap()
    }

    fn e(frame: &FiniteFrame, name: &str) -> FrameElt {
        frame.element_by_name(name).unwrap()
    }

    #[test]
    fn implication_basics() {
        let f = fork();
        for a in f.elements() {
            assert_eq!(f.imp(a, a), f.top());
            assert_eq!(f.imp(a, f.top()), f.top());
        }
        let three = chain(3);
        let m = FrameElt(1);
        assert_eq!(three.neg(m), three.bot());
        assert_eq!(f.imp(e(&f, "a"), e(&f, "b")), e(&f, "b"));
    }

    #[test]
    fn residuation_holds_on_the_fork() {
        let f = fork();
        for a in f.elements() {
            for b in f.elements() {
                for x in f.elements() {
                    assert_eq!(
                        f.leq(x, f.imp(a, b)),
                        f.leq(f.meet(x, a), b),
                        "residuation at x={x:?} a={a:?} b={b:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn non_lattice_order_is_rejected() {
        // Two incomparable tops: no join for the two atoms.
        let names = ["0", "a", "b", "x", "y"].map(String::from).to_vec();
        let order = [(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4)];
        let err = FiniteFrame::new(names, &order, &caps()).unwrap_err();
        assert!(matches!(err, FrameError::MissingJoin { .. }));
    }

    #[test]
    fn non_distributive_lattice_is_rejected() {
        // The diamond M3: three incomparable midpoints.
        let names = ["0", "x", "y", "z", "1"].map(String::from).to_vec();
        let order = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)];
        let err = FiniteFrame::new(names, &order, &caps()).unwrap_err();
        assert!(matches!(err, FrameError::NotDistributive { .. }));
    }

    #[test]
    fn filter_generation_examples() {
        let f = fork();
        assert_eq!(filter_generated(&f, &[]).members(), vec![f.top()]);
        assert_eq!(
            filter_generated(&f, &[e(&f, "c")]).members(),
            vec![e(&f, "c"), f.top()]
        );
        let improper = filter_generated(&f, &[e(&f, "a"), e(&f, "b")]);
        assert_eq!(improper.members().len(), 5);
        assert!(improper.is_improper(&f));
    }

    #[test]
    fn quotient_by_trivial_filter_is_identity() {
        let f = fork();
        let q = quotient_by_filter(&f, &filter_generated(&f, &[]));
        assert_eq!(q.classes.len(), 5);
        assert_eq!(q.nucleus, Nucleus::identity(&f));
        assert!(!q.collapsed);
    }

    #[test]
    fn quotient_of_three_chain_by_upper_filter() {
        let three = chain(3);
        let filter = filter_generated(&three, &[FrameElt(1)]);
        let q = quotient_by_filter(&three, &filter);
        assert_eq!(
            q.classes,
            vec![vec![FrameElt(0)], vec![FrameElt(1), FrameElt(2)]]
        );
        assert_eq!(q.frame.element_count(), 2);
    }

    #[test]
    fn quotient_of_fork_merges_c_into_top() {
        let f = fork();
        let q = quotient_by_filter(&f, &filter_generated(&f, &[e(&f, "c")]));
        assert_eq!(q.frame.element_count(), 4);
        assert_eq!(
            q.classes,
            vec![
                vec![e(&f, "0")],
                vec![e(&f, "a")],
                vec![e(&f, "b")],
                vec![e(&f, "c"), e(&f, "1")],
            ]
        );
        // The quotient is the Boolean diamond: the two atoms complement.
        let qa = q.frame.element_by_name("a").unwrap();
        let qb = q.frame.element_by_name("b").unwrap();
        assert_eq!(q.frame.join(qa, qb), q.frame.top());
        assert_eq!(q.frame.meet(qa, qb), q.frame.bot());
    }

    #[test]
    fn improper_filter_collapses_to_a_point() {
        let f = fork();
        let q = quotient_by_filter(&f, &filter_generated(&f, &[e(&f, "a"), e(&f, "b")]));
        assert!(q.collapsed);
        assert_eq!(q.frame.element_count(), 1);
    }

    #[test]
    fn classical_sublocale_of_three_chain() {
        let three = chain(3);
        let classical = logic_by_name("classical").unwrap();
        let sub = l_sublocale(&three, &classical.axiom).unwrap();
        assert_eq!(sub.quotient.frame.element_count(), 2);
        assert!(sub.filter.contains(FrameElt(1)));
    }

    #[test]
    fn demorgan_sublocale_of_fork_is_the_diamond() {
        let f = fork();
        let spec = logic_by_name("demorgan").unwrap();
        let sub = l_sublocale(&f, &spec.axiom).unwrap();
        assert_eq!(sub.seeds, vec![e(&f, "c"), f.top()]);
        assert_eq!(sub.quotient.frame.element_count(), 4);
        assert_eq!(
            sub.quotient.nucleus.fixset(),
            vec![e(&f, "0"), e(&f, "a"), e(&f, "b"), f.top()]
        );
    }

    #[test]
    fn sublocale_of_boolean_frame_is_identity() {
        let b = bool4();
        for spec in crate::logic::registry() {
            let sub = l_sublocale(&b, &spec.axiom).unwrap();
            assert_eq!(sub.quotient.nucleus, Nucleus::identity(&b), "{}", spec.name);
        }
    }

    #[test]
    fn direct_demorganization_examples() {
        let b = bool4();
        let direct = demorganization_direct(&b).unwrap();
        assert_eq!(direct.members.len(), 4);
        assert_eq!(direct.reflection, Nucleus::identity(&b));

        let f = fork();
        let direct = demorganization_direct(&f).unwrap();
        assert_eq!(
            direct.members,
            vec![e(&f, "0"), e(&f, "a"), e(&f, "b"), f.top()]
        );
        assert!(direct.members.contains(&f.top()));
        assert!(direct_description_discrepancies(&f).is_empty());
    }

    #[test]
    fn direct_gd_sublocale_examples() {
        for n in 2..=5 {
            let c = chain(n);
            let direct = gd_sublocale_direct(&c).unwrap();
            assert_eq!(direct.members.len(), n, "chains satisfy the logic");
        }
        let f = fork();
        let direct = gd_sublocale_direct(&f).unwrap();
        assert!(!direct.members.contains(&e(&f, "c")));
        assert_eq!(
            direct.members,
            vec![e(&f, "0"), e(&f, "a"), e(&f, "b"), f.top()]
        );
    }

    #[test]
    fn nucleus_check_examples() {
        let f = fork();
        let id = Nucleus::identity(&f);
        assert_eq!(
            nucleus_checks(&f, &id),
            NucleusChecks {
                dense: true,
                weakly_open: true,
                implicationally_open: true
            }
        );

        // The open nucleus u -> (-) at u = a: weakly open but not dense.
        let u = e(&f, "a");
        let map: Vec<FrameElt> = f.elements().map(|x| f.imp(u, x)).collect();
        let open = Nucleus::new(&f, map).unwrap();
        let checks = nucleus_checks(&f, &open);
        assert!(!checks.dense);
        assert!(checks.weakly_open);
        assert!(checks.implicationally_open);

        // Double negation: dense and weakly open.
        let map: Vec<FrameElt> = f.elements().map(|x| f.neg(f.neg(x))).collect();
        let nn = Nucleus::new(&f, map).unwrap();
        let checks = nucleus_checks(&f, &nn);
        assert!(checks.dense);
        assert!(checks.weakly_open);
    }

    #[test]
    fn invalid_nucleus_maps_are_rejected() {
        let three = chain(3);
        // Not inflationary.
        let err = Nucleus::new(&three, vec![FrameElt(0), FrameElt(0), FrameElt(2)]).unwrap_err();
        assert!(matches!(err, FrameError::NotInflationary { .. }));
        // Not idempotent.
        let err = Nucleus::new(&three, vec![FrameElt(1), FrameElt(2), FrameElt(2)]).unwrap_err();
        assert!(matches!(err, FrameError::NotIdempotent { .. }));
    }

    #[test]
    fn nucleus_counts_on_small_frames() {
        let cases: Vec<(FiniteFrame, usize)> = vec![
            (chain(2), 2),
            (chain(3), 4),
            (chain(4), 8),
            (chain(5), 16),
            (fork(), 8),
            (bool4(), 4),
        ];
        for (frame, expected) in cases {
            let fast = enumerate_nuclei(&frame, &caps()).unwrap();
            assert_eq!(fast.len(), expected);
            let brute = enumerate_nuclei_bruteforce(&frame, &caps()).unwrap();
            assert_eq!(fast.len(), brute.len());
            for nucleus in &brute {
                assert!(fast.contains(nucleus));
            }
        }
    }

    #[test]
    fn identity_is_always_a_nucleus() {
        let f = fork();
        let id = Nucleus::identity(&f);
        assert!(enumerate_nuclei(&f, &caps()).unwrap().contains(&id));
    }

    #[test]
    fn homomorphism_enumeration_finds_the_projection() {
        let three = chain(3);
        let two = chain(2);
        let homs = frame_homomorphisms(&three, &two).unwrap();
        // 0 then the two monotone surjections/injections compatible with
        // bounds: [0,0,1] and [0,1,1].
        assert_eq!(
            homs,
            vec![
                vec![FrameElt(0), FrameElt(0), FrameElt(1)],
                vec![FrameElt(0), FrameElt(1), FrameElt(1)],
            ]
        );
    }

    #[test]
    fn canonical_site_of_the_two_chain() {
        let two = chain(2);
        let site = site_from_frame(&two, &caps()).unwrap();
        let cat = site.category();
        assert_eq!(cat.object_count(), 2);
        assert_eq!(cat.arrow_count(), 3);

        let bot = crate::fincat::ObjId(0);
        let top = crate::fincat::ObjId(1);
        // The empty sieve covers the bottom (its join is the empty join).
        assert_eq!(
            site.topology().covers(bot).collect::<Vec<_>>(),
            vec![cat.empty_sieve(bot), cat.maximal_sieve(bot)]
        );
        // Only the maximal sieve reaches the top: the lower element alone
        // joins to itself, not to the top.
        assert_eq!(
            site.topology().covers(top).collect::<Vec<_>>(),
            vec![cat.maximal_sieve(top)]
        );
    }

    #[test]
    fn canonical_site_of_the_fork_covers_c_by_its_atoms() {
        let f = fork();
        let site = site_from_frame(&f, &caps()).unwrap();
        let c = crate::fincat::ObjId(3);
        let covers: Vec<_> = site.topology().covers(c).collect();
        assert_eq!(covers.len(), 2, "the atom sieve and the maximal sieve");
        let atoms = element_sieve(&f, &site, e(&f, "c"));
        assert!(covers.contains(&site.category().maximal_sieve(c)));
        // The non-maximal cover is {0, a, b} seen from c.
        let small = covers
            .iter()
            .copied()
            .find(|&s| s != site.category().maximal_sieve(c))
            .unwrap();
        assert_eq!(sieve_element(&f, &site, atoms), e(&f, "c"));
        assert_eq!(
            site.category().sieve_arrows(small).len(),
            3,
            "three strictly-below elements cover c"
        );
    }

    #[test]
    fn element_sieve_round_trips() {
        let f = fork();
        let site = site_from_frame(&f, &caps()).unwrap();
        for a in f.elements() {
            let s = element_sieve(&f, &site, a);
            assert_eq!(sieve_element(&f, &site, s), a);
            assert!(site.is_closed(s), "downset sieves are closed canonically");
        }
    }

    #[test]
    fn induced_nucleus_of_the_base_topology_is_identity() {
        let f = fork();
        let site = site_from_frame(&f, &caps()).unwrap();
        let j = induced_nucleus(&f, &site, site.topology()).unwrap();
        assert_eq!(j, Nucleus::identity(&f));
    }

    #[test]
    fn topology_refinement_and_filter_quotient_induce_the_same_nucleus() {
        let f = fork();
        let site = site_from_frame(&f, &caps()).unwrap();
        for name in ["classical", "demorgan", "goedel_dummett"] {
            let spec = logic_by_name(name).unwrap();
            let k = crate::ltop::l_topology(&site, &spec.axiom).unwrap();
            let from_site = induced_nucleus(&f, &site, &k).unwrap();
            let from_filter = l_sublocale(&f, &spec.axiom).unwrap().quotient.nucleus;
            assert_eq!(from_site, from_filter, "{name}");
            // Frozen for this frame: everything at or above `c` collapses
            // into the top; the Boolean diamond below is untouched.
            assert_eq!(
                from_site.fixset(),
                vec![e(&f, "0"), e(&f, "a"), e(&f, "b"), f.top()],
                "{name}"
            );
        }
    }

    #[test]
    fn frame_and_canonical_site_agree_on_axioms() {
        use crate::logic::{frame_satisfies_logic, registry};
        use crate::omega::validates_logic;
        for frame in [chain(3), fork(), bool4()] {
            let site = site_from_frame(&frame, &caps()).unwrap();
            for spec in registry() {
                assert_eq!(
                    frame_satisfies_logic(&frame, &spec).holds(),
                    validates_logic(&site, &spec).unwrap().holds(),
                    "{} on a {}-element frame",
                    spec.name,
                    frame.element_count()
                );
            }
        }
    }

    #[test]
    fn nucleus_quotient_frames() {
        let f = fork();
        let id = Nucleus::identity(&f);
        assert_eq!(nucleus_quotient_frame(&f, &id).element_count(), 5);

        let u = e(&f, "a");
        let map: Vec<FrameElt> = f.elements().map(|x| f.imp(u, x)).collect();
        let open = Nucleus::new(&f, map).unwrap();
        let q = nucleus_quotient_frame(&f, &open);
        assert_eq!(q.element_count(), 2, "fixset of `a -> _` is {{b, 1}}");
        assert_eq!(q.bot(), q.element_by_name("b").unwrap());
    }

    #[test]
    fn kp_axiom_parses_and_is_not_admissible() {
        let kp = logic_by_name("kreisel_putnam").unwrap();
        assert!(!kp.admissible);
        assert_eq!(
            kp.axiom,
            parse_term("(~p -> q | r) -> (~p -> q) | (~p -> r)").unwrap()
        );
    }
}
