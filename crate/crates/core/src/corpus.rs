//! The verification corpus: a fixed family of small categories, sites, and
//! frames, together with the law suites that run over them.
//!
//! The integration tests and the `corpus` CLI command both call into this
//! module, so a release binary and `cargo test` exercise exactly the same
//! checks. Every suite returns a [`CriterionReport`] instead of panicking:
//! a failed law becomes a recorded failure line, and resource-cap errors on
//! corpus entries (which are sized to fit the default caps) are reported the
//! same way.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coverage::{all_sieves, enumerate_topologies, generate_topology, GrothendieckTopology};
use crate::criteria::{
    gd_factorization, is_groupoid, is_indecomposable, is_indecomposable_bruteforce,
    kp_presheaf_criterion, right_ore,
};
use crate::fincat::{validate_category, CategoryData, FinCategory, Sieve};
use crate::frames::{
    demorganization_direct, direct_description_discrepancies, enumerate_nuclei,
    gd_sublocale_direct, induced_nucleus, l_sublocale, nucleus_checks, nucleus_quotient_frame,
    site_from_frame, DirectConstruction, FiniteFrame,
};
use crate::logic::{
    frame_satisfies_logic, holds_in_frame, parse_sequent, parse_term, registry, HornSequent,
    LogicSpec, Term,
};
use crate::ltop::{
    booleanization, demorgan_generators_direct, demorganization, is_dense_over,
    is_implicationally_open, is_weakly_open, l_topology, l_topology_maximality_check,
    relativization_check, stably_nonempty_topology, LtopError,
};
use crate::omega::{holds_internally, omega_fiber, validates_logic, Site};
use crate::Caps;

// ---------------------------------------------------------------------------
// Category builders
// ---------------------------------------------------------------------------

fn build(name: &str, data: CategoryData, caps: &Caps) -> FinCategory {
    validate_category(&data, caps)
        .unwrap_or_else(|errors| panic!("corpus category `{name}` failed validation: {errors:?}"))
}

/// A poset as a category: one arrow `le_<lo>_<hi>` per strict relation,
/// identities first, composites read off transitivity.
fn poset_category(objects: &[String], leq: impl Fn(usize, usize) -> bool) -> CategoryData {
    let n = objects.len();
    let arrow_name = |i: usize, j: usize| {
        if i == j {
            format!("id_{}", objects[i])
        } else {
            format!("le_{}_{}", objects[i], objects[j])
        }
    };
    let mut arrows = Vec::new();
    let mut identities = Vec::new();
    for (i, obj) in objects.iter().enumerate() {
        arrows.push((arrow_name(i, i), obj.clone(), obj.clone()));
        identities.push((obj.clone(), arrow_name(i, i)));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && leq(i, j) {
                arrows.push((arrow_name(i, j), objects[i].clone(), objects[j].clone()));
            }
        }
    }
    let mut composites = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !leq(i, j) {
                continue;
            }
            for k in 0..n {
                if leq(j, k) {
                    composites.push((arrow_name(j, k), arrow_name(i, j), arrow_name(i, k)));
                }
            }
        }
    }
    CategoryData {
        objects: objects.to_vec(),
        arrows,
        identities,
        composites,
    }
}

/// A monoid of self-maps of `{0, …, points-1}` as a one-object category.
/// `maps[0]` must be the identity map and the family must be closed under
/// composition; arrows are named `t<images>` (the identity is `id`).
fn transformation_monoid(points: usize, maps: &[Vec<usize>]) -> CategoryData {
    let name = |m: &[usize]| -> String {
        if m.iter().enumerate().all(|(i, &v)| i == v) {
            "id".to_string()
        } else {
            let digits: String = m.iter().map(|v| v.to_string()).collect();
            format!("t{digits}")
        }
    };
    assert_eq!(name(&maps[0]), "id", "maps[0] must be the identity");

    let arrows: Vec<(String, String, String)> = maps
        .iter()
        .map(|m| (name(m), "*".to_string(), "*".to_string()))
        .collect();
    let mut composites = Vec::new();
    for g in maps {
        for f in maps {
            let gf: Vec<usize> = (0..points).map(|x| g[f[x]]).collect();
            assert!(
                maps.contains(&gf),
                "transformation family not closed under composition"
            );
            composites.push((name(g), name(f), name(&gf)));
        }
    }
    CategoryData {
        objects: vec!["*".to_string()],
        arrows,
        identities: vec![("*".to_string(), "id".to_string())],
        composites,
    }
}

/// Disjoint union of two categories; names are suffixed with `_<tag>` to
/// stay unique.
fn disjoint_union(left: &CategoryData, right: &CategoryData) -> CategoryData {
    let tag = |data: &CategoryData, suffix: &str| -> CategoryData {
        let rename = |s: &str| format!("{s}_{suffix}");
        CategoryData {
            objects: data.objects.iter().map(|o| rename(o)).collect(),
            arrows: data
                .arrows
                .iter()
                .map(|(a, d, c)| (rename(a), rename(d), rename(c)))
                .collect(),
            identities: data
                .identities
                .iter()
                .map(|(o, a)| (rename(o), rename(a)))
                .collect(),
            composites: data
                .composites
                .iter()
                .map(|(g, f, gf)| (rename(g), rename(f), rename(gf)))
                .collect(),
        }
    };
    let mut out = tag(left, "1");
    let other = tag(right, "2");
    out.objects.extend(other.objects);
    out.arrows.extend(other.arrows);
    out.identities.extend(other.identities);
    out.composites.extend(other.composites);
    out
}

/// A random four-element poset: each pair `i < j` of indices is related with
/// probability 1/2, then closed transitively. Seeded, hence reproducible.
fn random_poset4(seed: u64) -> CategoryData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 4;
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for (i, row) in leq.iter_mut().enumerate() {
        for slot in row[i + 1..].iter_mut() {
            if rng.gen_bool(0.5) {
                *slot = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    poset_category(&names, |i, j| leq[i][j])
}

/// The monoid generated by one random non-identity self-map of a 3-element
/// set: `{id, f, f², …}` up to the first repetition. Seeded.
fn random_cyclic_monoid3(seed: u64) -> CategoryData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = 3;
    let id: Vec<usize> = (0..points).collect();
    let f: Vec<usize> = loop {
        let candidate: Vec<usize> = (0..points).map(|_| rng.gen_range(0..points)).collect();
        if candidate != id {
            break candidate;
        }
    };
    let mut maps = vec![id];
    let mut power = f.clone();
    while !maps.contains(&power) {
        maps.push(power.clone());
        power = (0..points).map(|x| f[power[x]]).collect();
    }
    transformation_monoid(points, &maps)
}

fn terminal_data() -> CategoryData {
    CategoryData::new(
        &["*"],
        &[("id", "*", "*")],
        &[("*", "id")],
        &[("id", "id", "id")],
    )
}

fn walking_arrow_data() -> CategoryData {
    CategoryData::new(
        &["a", "b"],
        &[("id_a", "a", "a"), ("id_b", "b", "b"), ("u", "a", "b")],
        &[("a", "id_a"), ("b", "id_b")],
        &[
            ("id_a", "id_a", "id_a"),
            ("id_b", "id_b", "id_b"),
            ("u", "id_a", "u"),
            ("id_b", "u", "u"),
        ],
    )
}

fn span_data() -> CategoryData {
    CategoryData::new(
        &["a", "b", "c"],
        &[
            ("id_a", "a", "a"),
            ("id_b", "b", "b"),
            ("id_c", "c", "c"),
            ("f", "a", "b"),
            ("g", "a", "c"),
        ],
        &[("a", "id_a"), ("b", "id_b"), ("c", "id_c")],
        &[
            ("id_a", "id_a", "id_a"),
            ("id_b", "id_b", "id_b"),
            ("id_c", "id_c", "id_c"),
            ("f", "id_a", "f"),
            ("id_b", "f", "f"),
            ("g", "id_a", "g"),
            ("id_c", "g", "g"),
        ],
    )
}

fn cospan2_data() -> CategoryData {
    CategoryData::new(
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
    )
}

fn cospan3_data() -> CategoryData {
    CategoryData::new(
        &["a", "b", "c", "d"],
        &[
            ("id_a", "a", "a"),
            ("id_b", "b", "b"),
            ("id_c", "c", "c"),
            ("id_d", "d", "d"),
            ("f", "b", "a"),
            ("g", "c", "a"),
            ("h", "d", "a"),
        ],
        &[("a", "id_a"), ("b", "id_b"), ("c", "id_c"), ("d", "id_d")],
        &[
            ("id_a", "id_a", "id_a"),
            ("id_b", "id_b", "id_b"),
            ("id_c", "id_c", "id_c"),
            ("id_d", "id_d", "id_d"),
            ("id_a", "f", "f"),
            ("f", "id_b", "f"),
            ("id_a", "g", "g"),
            ("g", "id_c", "g"),
            ("id_a", "h", "h"),
            ("h", "id_d", "h"),
        ],
    )
}

fn parallel_pair_data() -> CategoryData {
    CategoryData::new(
        &["a", "b"],
        &[
            ("id_a", "a", "a"),
            ("id_b", "b", "b"),
            ("f", "a", "b"),
            ("g", "a", "b"),
        ],
        &[("a", "id_a"), ("b", "id_b")],
        &[
            ("id_a", "id_a", "id_a"),
            ("id_b", "id_b", "id_b"),
            ("f", "id_a", "f"),
            ("id_b", "f", "f"),
            ("g", "id_a", "g"),
            ("id_b", "g", "g"),
        ],
    )
}

fn c2_data() -> CategoryData {
    CategoryData::new(
        &["*"],
        &[("id", "*", "*"), ("s", "*", "*")],
        &[("*", "id")],
        &[
            ("id", "id", "id"),
            ("s", "id", "s"),
            ("id", "s", "s"),
            ("s", "s", "id"),
        ],
    )
}

fn c3_data() -> CategoryData {
    CategoryData::new(
        &["*"],
        &[("id", "*", "*"), ("r", "*", "*"), ("rr", "*", "*")],
        &[("*", "id")],
        &[
            ("id", "id", "id"),
            ("r", "id", "r"),
            ("rr", "id", "rr"),
            ("id", "r", "r"),
            ("r", "r", "rr"),
            ("rr", "r", "id"),
            ("id", "rr", "rr"),
            ("r", "rr", "id"),
            ("rr", "rr", "r"),
        ],
    )
}

fn idem2_data() -> CategoryData {
    CategoryData::new(
        &["*"],
        &[("id", "*", "*"), ("e", "*", "*")],
        &[("*", "id")],
        &[
            ("id", "id", "id"),
            ("e", "id", "e"),
            ("id", "e", "e"),
            ("e", "e", "e"),
        ],
    )
}

fn discrete2_data() -> CategoryData {
    CategoryData::new(
        &["a", "b"],
        &[("id_a", "a", "a"), ("id_b", "b", "b")],
        &[("a", "id_a"), ("b", "id_b")],
        &[("id_a", "id_a", "id_a"), ("id_b", "id_b", "id_b")],
    )
}

fn chain_category(n: usize) -> CategoryData {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    poset_category(&names, |i, j| i <= j)
}

/// The thirty corpus categories, in a fixed deterministic order.
pub fn corpus_categories(caps: &Caps) -> Vec<(String, FinCategory)> {
    let s3_maps: Vec<Vec<usize>> = vec![
        vec![0, 1, 2],
        vec![0, 2, 1],
        vec![1, 0, 2],
        vec![1, 2, 0],
        vec![2, 0, 1],
        vec![2, 1, 0],
    ];
    let diamond = {
        let names: Vec<String> = ["bot", "l", "r", "top"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        // bot below everything, l and r incomparable, top above everything.
        poset_category(&names, |i, j| i == j || i == 0 || j == 3)
    };
    let square = {
        let names: Vec<String> = (0..4).map(|i| format!("p{}{}", i / 2, i % 2)).collect();
        poset_category(&names, |i, j| i / 2 <= j / 2 && i % 2 <= j % 2)
    };
    let grid2x3 = {
        let names: Vec<String> = (0..6).map(|i| format!("g{}{}", i / 3, i % 3)).collect();
        poset_category(&names, |i, j| i / 3 <= j / 3 && i % 3 <= j % 3)
    };

    let entries: Vec<(&str, CategoryData)> = vec![
        ("terminal", terminal_data()),
        ("walking_arrow", walking_arrow_data()),
        ("span", span_data()),
        ("cospan2", cospan2_data()),
        ("cospan3", cospan3_data()),
        ("parallel_pair", parallel_pair_data()),
        ("c2", c2_data()),
        ("c3", c3_data()),
        ("s3", transformation_monoid(3, &s3_maps)),
        ("idem2", idem2_data()),
        ("chain2", chain_category(2)),
        ("chain3", chain_category(3)),
        ("chain4", chain_category(4)),
        ("chain5", chain_category(5)),
        ("diamond", diamond),
        ("square", square),
        ("grid2x3", grid2x3),
        ("discrete2", discrete2_data()),
        ("c3_plus_c3", disjoint_union(&c3_data(), &c3_data())),
        (
            "two_arrows",
            disjoint_union(&walking_arrow_data(), &walking_arrow_data()),
        ),
        (
            "mono_t2",
            transformation_monoid(2, &[vec![0, 1], vec![1, 0], vec![0, 0], vec![1, 1]]),
        ),
        (
            "mono_consts3",
            transformation_monoid(
                3,
                &[vec![0, 1, 2], vec![0, 0, 0], vec![1, 1, 1], vec![2, 2, 2]],
            ),
        ),
        (
            "mono_rz3",
            transformation_monoid(3, &[vec![0, 1, 2], vec![0, 0, 2], vec![0, 2, 2]]),
        ),
        (
            "mono_rot_const3",
            transformation_monoid(
                3,
                &[
                    vec![0, 1, 2],
                    vec![1, 2, 0],
                    vec![2, 0, 1],
                    vec![0, 0, 0],
                    vec![1, 1, 1],
                    vec![2, 2, 2],
                ],
            ),
        ),
        ("rposet4_1", random_poset4(11)),
        ("rposet4_2", random_poset4(22)),
        ("rposet4_3", random_poset4(33)),
        ("rposet4_4", random_poset4(44)),
        ("rmono3_1", random_cyclic_monoid3(7)),
        ("rmono3_2", random_cyclic_monoid3(8)),
    ];
    entries
        .into_iter()
        .map(|(name, data)| (name.to_string(), build(name, data, caps)))
        .collect()
}

// ---------------------------------------------------------------------------
// Frame builders
// ---------------------------------------------------------------------------

fn frame_from_pairs(
    name: &str,
    names: &[&str],
    pairs: &[(usize, usize)],
    caps: &Caps,
) -> FiniteFrame {
    FiniteFrame::new(names.iter().map(|s| s.to_string()).collect(), pairs, caps)
        .unwrap_or_else(|e| panic!("corpus frame `{name}` failed validation: {e}"))
}

fn chain_frame(n: usize, caps: &Caps) -> FiniteFrame {
    let names: Vec<String> = match n {
        1 => vec!["1".to_string()],
        2 => vec!["0".to_string(), "1".to_string()],
        3 => vec!["0".to_string(), "m".to_string(), "1".to_string()],
        _ => {
            let mut v = vec!["0".to_string()];
            v.extend((1..n - 1).map(|i| format!("m{i}")));
            v.push("1".to_string());
            v
        }
    };
    let pairs: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    FiniteFrame::new(names, &pairs, caps).expect("chains are frames")
}

/// The lattice of downward-closed point sets of a finite poset, ordered by
/// inclusion. Every such lattice is distributive, so this always validates.
fn downset_frame(
    name: &str,
    points: &[&str],
    strict: &[(usize, usize)],
    caps: &Caps,
) -> FiniteFrame {
    let n = points.len();
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(lo, hi) in strict {
        leq[lo][hi] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    let downclosed = |mask: u32| -> bool {
        (0..n).all(|j| mask & (1 << j) == 0 || (0..n).all(|i| !leq[i][j] || mask & (1 << i) != 0))
    };
    let masks: Vec<u32> = (0..1u32 << n).filter(|&m| downclosed(m)).collect();
    let set_name = |mask: u32| -> String {
        let members: Vec<&str> = (0..n)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| points[i])
            .collect();
        format!("{{{}}}", members.join(","))
    };
    let names: Vec<String> = masks.iter().map(|&m| set_name(m)).collect();
    let mut pairs = Vec::new();
    for (i, &mi) in masks.iter().enumerate() {
        for (j, &mj) in masks.iter().enumerate() {
            if mi & !mj == 0 {
                pairs.push((i, j));
            }
        }
    }
    FiniteFrame::new(names, &pairs, caps)
        .unwrap_or_else(|e| panic!("corpus frame `{name}` failed validation: {e}"))
}

/// The thirteen corpus frames, in a fixed deterministic order. All have at
/// most nine elements.
pub fn corpus_frames(caps: &Caps) -> Vec<(String, FiniteFrame)> {
    let entries: Vec<(&str, FiniteFrame)> = vec![
        ("fchain1", chain_frame(1, caps)),
        ("fchain2", chain_frame(2, caps)),
        ("fchain3", chain_frame(3, caps)),
        ("fchain4", chain_frame(4, caps)),
        ("fchain5", chain_frame(5, caps)),
        (
            // 0 < a,b < c < 1 with a ∧ b = 0 and a ∨ b = c.
            "fork",
            frame_from_pairs(
                "fork",
                &["0", "a", "b", "c", "1"],
                &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)],
                caps,
            ),
        ),
        (
            // 0 < m < a,b < 1 with a ∧ b = m and a ∨ b = 1.
            "downfork",
            frame_from_pairs(
                "downfork",
                &["0", "m", "a", "b", "1"],
                &[(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)],
                caps,
            ),
        ),
        (
            "bool4",
            frame_from_pairs(
                "bool4",
                &["0", "a", "b", "1"],
                &[(0, 1), (0, 2), (1, 3), (2, 3)],
                caps,
            ),
        ),
        (
            // Free Boolean lattice on three atoms.
            "bool8",
            downset_frame("bool8", &["x", "y", "z"], &[], caps),
        ),
        (
            // Downsets of the four-point diamond order w0 < w1,w2 < w3.
            "kripke_diamond",
            downset_frame(
                "kripke_diamond",
                &["w0", "w1", "w2", "w3"],
                &[(0, 1), (0, 2), (1, 3), (2, 3)],
                caps,
            ),
        ),
        (
            // 0 < a,b < c < d < 1: the fork with a two-step chain on top.
            "penta",
            frame_from_pairs(
                "penta",
                &["0", "a", "b", "c", "d", "1"],
                &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 5)],
                caps,
            ),
        ),
        (
            // Product of two three-element chains.
            "grid9",
            downset_frame("grid9", &["u1", "u2", "v1", "v2"], &[(0, 1), (2, 3)], caps),
        ),
        (
            // Downsets of the N-shaped order x < y > z < w.
            "kripke_n",
            downset_frame(
                "kripke_n",
                &["x", "y", "z", "w"],
                &[(0, 1), (2, 1), (2, 3)],
                caps,
            ),
        ),
    ];
    entries
        .into_iter()
        .map(|(name, frame)| (name.to_string(), frame))
        .collect()
}

// ---------------------------------------------------------------------------
// Sites and sequent battery
// ---------------------------------------------------------------------------

/// Every corpus category with its trivial coverage, plus the double-negation
/// and De Morgan refinements where they differ. Names carry the flavor, e.g.
/// `cospan2 (de-morgan)`.
pub fn corpus_sites(caps: &Caps) -> Vec<(String, Site)> {
    let mut out = Vec::new();
    for (name, cat) in corpus_categories(caps) {
        let trivial = Site::trivial(cat, *caps);
        let boolean = booleanization(&trivial)
            .unwrap_or_else(|e| panic!("double-negation refinement of `{name}`: {e}"));
        let demorgan = demorganization(&trivial)
            .unwrap_or_else(|e| panic!("de-morgan refinement of `{name}`: {e}"));

        let mut flavors: Vec<(String, GrothendieckTopology)> = Vec::new();
        if boolean != *trivial.topology() {
            flavors.push((format!("{name} (double-negation)"), boolean.clone()));
        }
        if demorgan != *trivial.topology() && demorgan != boolean {
            flavors.push((format!("{name} (de-morgan)"), demorgan));
        }
        for (flavor_name, topology) in flavors {
            let site = trivial
                .with_topology(topology)
                .unwrap_or_else(|e| panic!("refined coverage of `{name}` is invalid: {e}"));
            out.push((flavor_name, site));
        }
        out.push((format!("{name} (trivial)"), trivial));
    }
    // Trivial sites last within a category would scramble reading order;
    // sort by name for a stable, human-scannable report.
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// The Horn sequents exercised against both frame semantics and internal
/// site semantics. Some are intuitionistically valid, some discriminate
/// between logics; agreement of the two semantics is what the suites check.
pub fn horn_battery() -> Vec<(String, HornSequent)> {
    [
        "|- x & x = x",
        "|- x | (y & z) = (x | y) & (x | z)",
        "|- ~(x | y) = ~x & ~y",
        "x = y |- ~x = ~y",
        "x & y = 0 |- y = y & ~x",
        "x -> y = 1 |- x & y = x",
        "x | ~x",
        "~x | ~~x",
        "(x -> y) | (y -> x)",
        "(~x -> y | z) -> (~x -> y) | (~x -> z)",
        "(x -> y) | ((x -> y) -> x)",
        "~~x -> x",
    ]
    .iter()
    .map(|text| {
        (
            text.to_string(),
            parse_sequent(text).expect("battery sequents are well formed"),
        )
    })
    .collect()
}

/// The registry logics whose axioms are joins of `|`-free terms — the shape
/// for which the smallest dense topology and sublocale constructions apply.
pub fn admissible_logics() -> Vec<LogicSpec> {
    registry()
        .into_iter()
        .filter(|spec| spec.admissible)
        .collect()
}

// ---------------------------------------------------------------------------
// Criterion reports
// ---------------------------------------------------------------------------

/// The outcome of one verification suite: how many individual comparisons
/// ran and a description of each one that failed.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl CriterionReport {
    fn new(name: &'static str) -> CriterionReport {
        CriterionReport {
            name,
            checks: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    fn fail(&mut self, message: String) {
        self.checks += 1;
        self.failures.push(message);
    }

    /// One `PASS`/`FAIL` line suitable for a test log.
    pub fn line(&self) -> String {
        if self.passed() {
            format!("PASS {} ({} checks)", self.name, self.checks)
        } else {
            format!(
                "FAIL {} ({} of {} checks failed; first: {})",
                self.name,
                self.failures.len(),
                self.checks,
                self.failures[0]
            )
        }
    }
}

/// Internal validity of each registry logic on every trivial corpus site
/// versus the matching structural criterion on the underlying category.
pub fn presheaf_oracle_matrix(caps: &Caps) -> CriterionReport {
    let mut report = CriterionReport::new("presheaf-oracle-matrix");
    for (name, cat) in corpus_categories(caps) {
        let kp = match kp_presheaf_criterion(&cat, caps) {
            Ok(v) => v,
            Err(e) => {
                report.fail(format!("{name}: {e}"));
                continue;
            }
        };
        let expectations = [
            ("classical", is_groupoid(&cat)),
            ("demorgan", right_ore(&cat)),
            ("goedel_dummett", gd_factorization(&cat)),
            ("kreisel_putnam", kp),
        ];
        let site = Site::trivial(cat, *caps);
        for spec in registry() {
            let expected = expectations
                .iter()
                .find(|(n, _)| *n == spec.name)
                .expect("every registry logic has a structural criterion")
                .1;
            match validates_logic(&site, &spec) {
                Ok(verdict) => report.check(verdict.holds() == expected, || {
                    format!(
                        "{name}: internal validity of {} is {} but the structural criterion says {}",
                        spec.name,
                        verdict.holds(),
                        expected
                    )
                }),
                Err(e) => report.fail(format!("{name}/{}: {e}", spec.name)),
            }
        }
    }
    report
}

/// The two indecomposability deciders (submask brute force versus the
/// pairwise common-factor characterization) on every sieve of every corpus
/// category.
pub fn indecomposability_agreement(caps: &Caps) -> CriterionReport {
    let mut report = CriterionReport::new("indecomposability-agreement");
    for (name, cat) in corpus_categories(caps) {
        for c in cat.objects() {
            let sieves = match all_sieves(&cat, c, caps) {
                Ok(s) => s,
                Err(e) => {
                    report.fail(format!("{name}/{}: {e}", cat.object_name(c)));
                    continue;
                }
            };
            for s in sieves {
                let brute = is_indecomposable_bruteforce(&cat, s);
                let characterized = is_indecomposable(&cat, s);
                report.check(brute == characterized, || {
                    format!(
                        "{name}: sieve {} on {}: brute force says {brute}, characterization says {characterized}",
                        cat.sieve_to_string(s),
                        cat.object_name(c)
                    )
                });
            }
        }
    }
    report
}

/// Bounded-lattice laws, residuation, `~S = S -> 0`, and pullback
/// naturality of all five operations, on every truth-value fiber of every
/// corpus site.
pub fn heyting_fiber_suite(caps: &Caps) -> CriterionReport {
    let mut report = CriterionReport::new("heyting-fiber-laws");
    'site: for (name, site) in corpus_sites(caps) {
        let cat = site.category();
        let mut fibers = Vec::new();
        for c in cat.objects() {
            match omega_fiber(&site, c) {
                Ok(f) => fibers.push(f),
                Err(e) => {
                    report.fail(format!("{name}/{}: {e}", cat.object_name(c)));
                    continue 'site;
                }
            }
        }

        let leq =
            |s: Sieve, t: Sieve| -> bool { cat.sieve_subset(s, t).expect("operands share a root") };

        for fiber in &fibers {
            let obj = cat.object_name(fiber.object());
            let elems = fiber.elements();
            for &x in elems {
                report.check(fiber.meet(x, fiber.top()) == x, || {
                    format!("{name}/{obj}: S & 1 != S for {}", cat.sieve_to_string(x))
                });
                report.check(fiber.join(x, fiber.bottom()) == x, || {
                    format!("{name}/{obj}: S | 0 != S for {}", cat.sieve_to_string(x))
                });
                report.check(fiber.meet(x, x) == x && fiber.join(x, x) == x, || {
                    format!(
                        "{name}/{obj}: idempotence fails for {}",
                        cat.sieve_to_string(x)
                    )
                });
                report.check(fiber.not(x) == fiber.implies(x, fiber.bottom()), || {
                    format!("{name}/{obj}: ~S != S -> 0 for {}", cat.sieve_to_string(x))
                });
            }
            for &x in elems {
                for &y in elems {
                    report.check(
                        fiber.meet(x, y) == fiber.meet(y, x)
                            && fiber.join(x, y) == fiber.join(y, x),
                        || format!("{name}/{obj}: commutativity fails"),
                    );
                    report.check(
                        fiber.meet(x, fiber.join(x, y)) == x
                            && fiber.join(x, fiber.meet(x, y)) == x,
                        || format!("{name}/{obj}: absorption fails"),
                    );
                    for &z in elems {
                        report.check(
                            fiber.meet(fiber.meet(x, y), z) == fiber.meet(x, fiber.meet(y, z))
                                && fiber.join(fiber.join(x, y), z)
                                    == fiber.join(x, fiber.join(y, z)),
                            || format!("{name}/{obj}: associativity fails"),
                        );
                        report.check(
                            leq(fiber.meet(x, y), z) == leq(x, fiber.implies(y, z)),
                            || {
                                format!(
                                    "{name}/{obj}: residuation fails at ({}, {}, {})",
                                    cat.sieve_to_string(x),
                                    cat.sieve_to_string(y),
                                    cat.sieve_to_string(z)
                                )
                            },
                        );
                    }
                }
            }
        }

        for f in cat.arrows() {
            let fiber_c = &fibers[cat.cod(f).0];
            let fiber_d = &fibers[cat.dom(f).0];
            let pull = |s: Sieve| -> Sieve {
                cat.pullback_sieve(f, s)
                    .expect("sieve rooted at the codomain")
            };
            let arrow = cat.arrow_name(f);

            let mut pullbacks_closed = true;
            for &x in fiber_c.elements() {
                if !site.is_closed(pull(x)) {
                    report.fail(format!(
                        "{name}: pullback of closed sieve {} along {arrow} is not closed",
                        cat.sieve_to_string(x)
                    ));
                    pullbacks_closed = false;
                }
            }
            if !pullbacks_closed {
                continue;
            }

            report.check(
                pull(fiber_c.bottom()) == fiber_d.bottom() && pull(fiber_c.top()) == fiber_d.top(),
                || format!("{name}: pullback along {arrow} moves the bounds"),
            );
            for &x in fiber_c.elements() {
                report.check(pull(fiber_c.not(x)) == fiber_d.not(pull(x)), || {
                    format!(
                        "{name}: ~ not natural along {arrow} at {}",
                        cat.sieve_to_string(x)
                    )
                });
                for &y in fiber_c.elements() {
                    report.check(
                        pull(fiber_c.meet(x, y)) == fiber_d.meet(pull(x), pull(y))
                            && pull(fiber_c.join(x, y)) == fiber_d.join(pull(x), pull(y))
                            && pull(fiber_c.implies(x, y)) == fiber_d.implies(pull(x), pull(y)),
                        || {
                            format!(
                                "{name}: operation not natural along {arrow} at ({}, {})",
                                cat.sieve_to_string(x),
                                cat.sieve_to_string(y)
                            )
                        },
                    );
                }
            }
        }
    }
    report
}

/// For each smallest-dense-refinement construction: density over the base,
/// satisfaction of its own logic, and idempotence — plus the two independent
/// descriptions (stably nonempty sieves for the double-negation refinement
/// of a trivial site; the direct generating family for the De Morgan
/// refinement of any site with a dense base).
pub fn l_topology_suite(caps: &Caps) -> CriterionReport {
    let mut report = CriterionReport::new("l-topology-properties");
    for (name, site) in corpus_sites(caps) {
        let cat = site.category();
        for spec in admissible_logics() {
            let k = match l_topology(&site, &spec.axiom) {
                Ok(k) => k,
                Err(e) => {
                    report.fail(format!("{name}/{}: {e}", spec.name));
                    continue;
                }
            };
            match is_dense_over(&site, &k) {
                Ok(dense) => report.check(dense, || {
                    format!(
                        "{name}/{}: refinement is not dense over the base",
                        spec.name
                    )
                }),
                Err(e) => report.fail(format!("{name}/{}: {e}", spec.name)),
            }
            let k_site = match site.with_topology(k.clone()) {
                Ok(s) => s,
                Err(e) => {
                    report.fail(format!(
                        "{name}/{}: refined coverage invalid: {e}",
                        spec.name
                    ));
                    continue;
                }
            };
            match validates_logic(&k_site, &spec) {
                Ok(verdict) => report.check(verdict.holds(), || {
                    format!(
                        "{name}/{}: refined site does not satisfy its own logic; witness {}",
                        spec.name,
                        verdict
                            .witness()
                            .map(|w| w.describe(cat))
                            .unwrap_or_default()
                    )
                }),
                Err(e) => report.fail(format!("{name}/{}: {e}", spec.name)),
            }
            match l_topology(&k_site, &spec.axiom) {
                Ok(k2) => report.check(k2 == k, || {
                    format!("{name}/{}: refinement is not idempotent", spec.name)
                }),
                Err(e) => report.fail(format!("{name}/{}: {e}", spec.name)),
            }
        }

        if *site.topology() == GrothendieckTopology::trivial(cat) {
            match (booleanization(&site), stably_nonempty_topology(cat, caps)) {
                (Ok(via_axiom), Ok(oracle)) => report.check(via_axiom == oracle, || {
                    format!("{name}: double-negation refinement differs from the stably-nonempty coverage")
                }),
                (Err(e), _) | (_, Err(e)) => report.fail(format!("{name}: {e}")),
            }
        }

        match demorgan_generators_direct(&site) {
            Ok(generators) => {
                match (
                    generate_topology(cat, Some(site.topology()), &generators, caps),
                    demorganization(&site),
                ) {
                    (Ok(direct), Ok(via_axiom)) => report.check(direct == via_axiom, || {
                        format!(
                            "{name}: De Morgan refinement differs from the direct generating family"
                        )
                    }),
                    (Err(e), _) | (_, Err(e)) => report.fail(format!("{name}: {e}")),
                }
            }
            // A base coverage where some empty sieve covers has no direct
            // description; that case is out of scope here.
            Err(LtopError::Degenerate(_)) => {}
            Err(e) => report.fail(format!("{name}: {e}")),
        }
    }
    report
}

/// On every corpus site whose category is small enough to enumerate all
/// coverages: the refinement is the least coverage containing its
/// generators, and refining further preserves the logic exactly for the
/// appropriately open coverages.
pub fn minimality_suite(caps: &Caps) -> CriterionReport {
    let mut report = CriterionReport::new("least-topology-and-openness");
    for (name, site) in corpus_sites(caps) {
        if site.category().arrow_count() > caps.max_enum_arrows {
            continue;
        }
        for spec in admissible_logics() {
            match l_topology_maximality_check(&site, &spec.axiom) {
                Ok(problems) => {
                    report.checks += 1;
                    report.failures.extend(
                        problems
                            .into_iter()
                            .map(|p| format!("{name}/{}: {p}", spec.name)),
                    );
                }
                Err(e) => report.fail(format!("{name}/{}: {e}", spec.name)),
            }
        }
    }
    report
}

/// Computing the smallest dense refinement after passing to a finer
/// coverage agrees with joining the refinements, for every corpus site and
/// every suitably open finer coverage.
pub fn relativization_suite(caps: &Caps) -> CriterionReport {
    let mut report = CriterionReport::new("relativization");
    for (name, site) in corpus_sites(caps) {
        let cat = site.category();
        let mut candidates: Vec<GrothendieckTopology> = Vec::new();
        if cat.arrow_count() <= caps.max_enum_arrows {
            match enumerate_topologies(cat, caps) {
                Ok(all) => {
                    candidates.extend(all.into_iter().filter(|k| k.includes(site.topology())))
                }
                Err(e) => {
                    report.fail(format!("{name}: {e}"));
                    continue;
                }
            }
        } else {
            candidates.push(site.topology().clone());
            for refined in [booleanization(&site), demorganization(&site)] {
                match refined {
                    Ok(k) => {
                        if !candidates.contains(&k) {
                            candidates.push(k);
                        }
                    }
                    Err(e) => report.fail(format!("{name}: {e}")),
                }
            }
        }

        for spec in admissible_logics() {
            for k in &candidates {
                let open = if spec.axiom.mentions_implication() {
                    is_implicationally_open(&site, k)
                } else {
                    is_weakly_open(&site, k)
                };
                match open {
                    Ok(true) => {}
                    Ok(false) => continue,
                    Err(e) => {
                        report.fail(format!("{name}/{}: {e}", spec.name));
                        continue;
                    }
                }
                match relativization_check(&site, k, &spec.axiom) {
                    Ok(agrees) => report.check(agrees, || {
                        format!(
                            "{name}/{}: refinement after passing to a finer coverage differs from the join",
                            spec.name
                        )
                    }),
                    Err(e) => report.fail(format!("{name}/{}: {e}", spec.name)),
                }
            }
        }
    }
    report
}

/// Frame semantics versus internal site semantics through the canonical
/// coverage: sequent-by-sequent agreement on the Horn battery, and equality
/// of the nucleus induced by the site-level refinement with the sublocale
/// nucleus computed by the filter quotient.
pub fn frame_site_bridge_suite(caps: &Caps) -> CriterionReport {
    let mut report = CriterionReport::new("frame-site-bridge");
    let battery = horn_battery();
    for (name, frame) in corpus_frames(caps) {
        let site = match site_from_frame(&frame, caps) {
            Ok(s) => s,
            Err(e) => {
                report.fail(format!("{name}: {e}"));
                continue;
            }
        };
        for (text, sequent) in &battery {
            let in_frame = holds_in_frame(&frame, sequent).holds();
            match holds_internally(&site, sequent) {
                Ok(verdict) => report.check(verdict.holds() == in_frame, || {
                    format!(
                        "{name}: `{text}` holds in the frame: {in_frame}, internally: {}",
                        verdict.holds()
                    )
                }),
                Err(e) => report.fail(format!("{name}: `{text}`: {e}")),
            }
        }
        for spec in admissible_logics() {
            let outcome = l_topology(&site, &spec.axiom)
                .map_err(|e| e.to_string())
                .and_then(|k| induced_nucleus(&frame, &site, &k).map_err(|e| e.to_string()))
                .and_then(|induced| {
                    l_sublocale(&frame, &spec.axiom)
                        .map(|sub| (induced, sub.quotient.nucleus))
                        .map_err(|e| e.to_string())
                });
            match outcome {
                Ok((induced, direct)) => report.check(
                    frame.elements().all(|a| induced.apply(a) == direct.apply(a)),
                    || {
                        format!(
                            "{name}/{}: nucleus induced through the canonical site differs from the filter quotient",
                            spec.name
                        )
                    },
                ),
                Err(e) => report.fail(format!("{name}/{}: {e}", spec.name)),
            }
        }
    }
    report
}

/// On every corpus frame small enough to enumerate nuclei: the sublocale
/// nucleus of each admissible logic is dense, its quotient satisfies the
/// logic, and among the suitably open nuclei it is pointwise least with a
/// satisfying quotient.
pub fn nucleus_enumeration_suite(caps: &Caps) -> CriterionReport {
    let mut report = CriterionReport::new("nucleus-enumeration");
    for (name, frame) in corpus_frames(caps) {
        if frame.element_count() > caps.max_nuclei_frame {
            continue;
        }
        let nuclei = match enumerate_nuclei(&frame, caps) {
            Ok(n) => n,
            Err(e) => {
                report.fail(format!("{name}: {e}"));
                continue;
            }
        };
        for spec in admissible_logics() {
            let sub = match l_sublocale(&frame, &spec.axiom) {
                Ok(s) => s,
                Err(e) => {
                    report.fail(format!("{name}/{}: {e}", spec.name));
                    continue;
                }
            };
            let j_l = &sub.quotient.nucleus;
            report.check(nucleus_checks(&frame, j_l).dense, || {
                format!("{name}/{}: sublocale nucleus is not dense", spec.name)
            });
            report.check(
                frame_satisfies_logic(&sub.quotient.frame, &spec).holds(),
                || {
                    format!(
                        "{name}/{}: sublocale quotient does not satisfy its logic",
                        spec.name
                    )
                },
            );
            for j in &nuclei {
                let checks = nucleus_checks(&frame, j);
                let open = if spec.axiom.mentions_implication() {
                    checks.implicationally_open
                } else {
                    checks.weakly_open
                };
                if !open {
                    continue;
                }
                let satisfies =
                    frame_satisfies_logic(&nucleus_quotient_frame(&frame, j), &spec).holds();
                let dominates = frame.nucleus_leq(j_l, j);
                report.check(satisfies == dominates, || {
                    let fixset: Vec<&str> =
                        j.fixset().into_iter().map(|e| frame.name(e)).collect();
                    format!(
                        "{name}/{}: open nucleus with fixset {{{}}} satisfies the logic: {satisfies}, dominates the sublocale nucleus: {dominates}",
                        spec.name,
                        fixset.join(", ")
                    )
                });
            }
        }
    }
    report
}

/// The literal membership predicates for the De Morgan and linear-order
/// sublocales versus the filter-quotient construction, on every corpus
/// frame; plus the worked five-element example, whose both sublocales are
/// the four-element Boolean diamond.
pub fn direct_description_suite(caps: &Caps) -> CriterionReport {
    let mut report = CriterionReport::new("direct-descriptions");
    let mut fork = None;
    for (name, frame) in corpus_frames(caps) {
        let issues = direct_description_discrepancies(&frame);
        report.checks += 1;
        report
            .failures
            .extend(issues.into_iter().map(|i| format!("{name}: {i}")));
        if name == "fork" {
            fork = Some(frame);
        }
    }

    let fork = fork.expect("the corpus contains the five-element fork frame");
    let constructions: [(&str, DirectConstruction); 2] = [
        ("de-morgan", demorganization_direct),
        ("linear-order", gd_sublocale_direct),
    ];
    for (label, construct) in constructions {
        match construct(&fork) {
            Ok(sub) => {
                let members: Vec<&str> = sub.members.iter().map(|&e| fork.name(e)).collect();
                report.check(members == ["0", "a", "b", "1"], || {
                    format!(
                        "fork: {label} sublocale is {{{}}}, expected {{0, a, b, 1}}",
                        members.join(", ")
                    )
                });
                let quotient = nucleus_quotient_frame(&fork, &sub.reflection);
                let classical = registry()
                    .into_iter()
                    .find(|s| s.name == "classical")
                    .expect("registry lists classical");
                report.check(
                    quotient.element_count() == 4
                        && frame_satisfies_logic(&quotient, &classical).holds(),
                    || format!("fork: {label} quotient is not the Boolean diamond"),
                );
            }
            Err(e) => report.fail(format!("fork: {label}: {e}")),
        }
    }
    report
}

fn random_term(rng: &mut ChaCha8Rng, depth: usize) -> Term {
    const VARS: [&str; 6] = ["p", "q", "r", "x", "y", "z"];
    if depth >= 5 || rng.gen_range(0..10) < 3 {
        return match rng.gen_range(0..4) {
            0 => Term::Zero,
            1 => Term::One,
            _ => Term::var(VARS[rng.gen_range(0..VARS.len())]),
        };
    }
    match rng.gen_range(0..4) {
        0 => Term::not(random_term(rng, depth + 1)),
        1 => Term::and(random_term(rng, depth + 1), random_term(rng, depth + 1)),
        2 => Term::or(random_term(rng, depth + 1), random_term(rng, depth + 1)),
        _ => Term::imp(random_term(rng, depth + 1), random_term(rng, depth + 1)),
    }
}

/// Printing a generated term and parsing the result reproduces the term,
/// for `count` seeded random syntax trees.
pub fn term_round_trip(count: usize, seed: u64) -> CriterionReport {
    let mut report = CriterionReport::new("term-print-parse-round-trip");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..count {
        let term = random_term(&mut rng, 0);
        let text = term.to_string();
        match parse_term(&text) {
            Ok(back) => report.check(back == term, || {
                format!("case {case}: `{text}` reparsed as `{back}`")
            }),
            Err(e) => report.fail(format!("case {case}: `{text}` failed to parse: {e}")),
        }
    }
    report
}

/// Seed for the round-trip suite, fixed so reports are reproducible.
pub const ROUND_TRIP_SEED: u64 = 0x5ea1ab1e;

/// Number of round-trip cases run by the full suite.
pub const ROUND_TRIP_CASES: usize = 1000;

/// Runs every suite over the corpus, in a fixed order.
pub fn full_suite(caps: &Caps) -> Vec<CriterionReport> {
    vec![
        presheaf_oracle_matrix(caps),
        indecomposability_agreement(caps),
        heyting_fiber_suite(caps),
        l_topology_suite(caps),
        minimality_suite(caps),
        relativization_suite(caps),
        frame_site_bridge_suite(caps),
        nucleus_enumeration_suite(caps),
        direct_description_suite(caps),
        term_round_trip(ROUND_TRIP_CASES, ROUND_TRIP_SEED),
    ]
}
