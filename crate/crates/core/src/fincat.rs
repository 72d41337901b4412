//! Finite categories with explicit composition tables, and the sieve
//! calculus: generation, pullback, and the lattice operations.
//!
//! A [`FinCategory`] is produced only by [`validate_category`], which checks
//! the identity, associativity, and endpoint-coherence laws exhaustively over
//! the finite tables. A [`Sieve`] is a precomposition-closed set of arrows
//! with a common codomain, stored as a bitmask over the codomain's fan-in
//! index; all sieve operations preserve closure by construction.

use std::collections::HashMap;

use thiserror::Error;

use crate::caps::{CapExceeded, Caps};

/// Index of an object within its [`FinCategory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub usize);

/// Index of an arrow within its [`FinCategory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArrowId(pub usize);

/// Raw input tables for [`validate_category`], in terms of human-readable
/// names. Internally both objects and arrows become dense indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CategoryData {
    /// Object names.
    pub objects: Vec<String>,
    /// `(arrow, domain, codomain)` triples.
    pub arrows: Vec<(String, String, String)>,
    /// `(object, identity arrow)` pairs, one per object.
    pub identities: Vec<(String, String)>,
    /// `(g, f, g_after_f)` triples: the composite of `g` after `f`.
    pub composites: Vec<(String, String, String)>,
}

impl CategoryData {
    /// Convenience builder used by the corpus and tests.
    pub fn new(
        objects: &[&str],
        arrows: &[(&str, &str, &str)],
        identities: &[(&str, &str)],
        composites: &[(&str, &str, &str)],
    ) -> Self {
        CategoryData {
            objects: objects.iter().map(|s| s.to_string()).collect(),
            arrows: arrows
                .iter()
                .map(|(n, d, c)| (n.to_string(), d.to_string(), c.to_string()))
                .collect(),
            identities: identities
                .iter()
                .map(|(o, a)| (o.to_string(), a.to_string()))
                .collect(),
            composites: composites
                .iter()
                .map(|(g, f, gf)| (g.to_string(), f.to_string(), gf.to_string()))
                .collect(),
        }
    }
}

/// A defect found while validating raw category tables.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("duplicate object name `{0}`")]
    DuplicateObject(String),
    #[error("duplicate arrow name `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` references unknown object `{object}`")]
    UnknownObject { arrow: String, object: String },
    #[error("{context} references unknown arrow `{name}`")]
    UnknownArrow { context: String, name: String },
    #[error("identity entry references unknown object `{0}`")]
    IdentityUnknownObject(String),
    #[error("object `{0}` has no identity arrow")]
    MissingIdentity(String),
    #[error("object `{object}` has conflicting identity entries `{first}` and `{second}`")]
    ConflictingIdentity {
        object: String,
        first: String,
        second: String,
    },
    #[error("identity arrow `{arrow}` of object `{object}` does not loop on it")]
    IdentityNotLoop { object: String, arrow: String },
    #[error("missing composite `{outer}` after `{inner}`")]
    MissingComposite { outer: String, inner: String },
    #[error("composite declared for non-composable pair `{outer}` after `{inner}`")]
    NotComposable { outer: String, inner: String },
    #[error("conflicting composites `{first}` and `{second}` for `{outer}` after `{inner}`")]
    ConflictingComposite {
        outer: String,
        inner: String,
        first: String,
        second: String,
    },
    #[error("composite `{outer}` after `{inner}` = `{composite}` has the wrong endpoints")]
    CompositeEndpoints {
        outer: String,
        inner: String,
        composite: String,
    },
    #[error("identity law fails at `{arrow}`")]
    IdentityLaw { arrow: String },
    #[error("associativity fails at `{h}` after `{g}` after `{f}`")]
    Associativity { h: String, g: String, f: String },
    #[error(transparent)]
    Cap(#[from] CapExceeded),
}

/// An invalid sieve operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SieveError {
    #[error("arrow `{arrow}` has codomain `{actual}`, expected `{expected}`")]
    WrongCodomain {
        arrow: String,
        actual: String,
        expected: String,
    },
    #[error("sieve roots differ: `{left}` vs `{right}`")]
    RootMismatch { left: String, right: String },
    #[error("arrow set is not precomposition-closed: `{arrow}` is in, `{missing}` is not")]
    NotClosed { arrow: String, missing: String },
}

/// A validated finite category.
///
/// Objects and arrows are dense indices; names are kept for reporting. The
/// composition table is total on composable pairs and all categorical laws
/// have been checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    object_names: Vec<String>,
    arrow_names: Vec<String>,
    dom: Vec<ObjId>,
    cod: Vec<ObjId>,
    identity: Vec<ArrowId>,
    /// `compose[g][f]` is `Some(g after f)` exactly when `cod(f) = dom(g)`.
    compose: Vec<Vec<Option<ArrowId>>>,
    /// Arrows into each object, ascending; bit `i` of a sieve mask at `c`
    /// stands for `fan_in[c][i]`.
    fan_in: Vec<Vec<ArrowId>>,
    /// Position of each arrow within the fan-in index of its codomain.
    fan_pos: Vec<usize>,
    /// `precomp[f]` is the mask (at `cod(f)`) of all composites `f after g`
    /// with `g` ranging over the arrows into `dom(f)`.
    precomp: Vec<u64>,
}

/// A precomposition-closed set of arrows with a common codomain.
///
/// Sieves are plain values (root object plus bitmask); they are created and
/// interpreted by the [`FinCategory`] they belong to. The derived order is
/// root-then-mask, which gives every enumeration in the crate a stable,
/// deterministic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sieve {
    root: ObjId,
    mask: u64,
}

impl Sieve {
    /// The object whose incoming arrows the sieve selects from.
    pub fn root(&self) -> ObjId {
        self.root
    }

    pub(crate) fn mask(&self) -> u64 {
        self.mask
    }

    pub(crate) fn from_mask(root: ObjId, mask: u64) -> Sieve {
        Sieve { root, mask }
    }
}

/// Validates raw tables into a [`FinCategory`], or reports every defect
/// found.
///
/// Validation proceeds in phases (name resolution, table shape, categorical
/// laws, fan-in caps); all defects of the failing phase are reported
/// together.
pub fn validate_category(
    data: &CategoryData,
    caps: &Caps,
) -> Result<FinCategory, Vec<CategoryError>> {
    let mut errors = Vec::new();

    // Phase 1: intern names.
    let mut object_index: HashMap<&str, usize> = HashMap::new();
    for (i, name) in data.objects.iter().enumerate() {
        if object_index.insert(name, i).is_some() {
            errors.push(CategoryError::DuplicateObject(name.clone()));
        }
    }
    let mut arrow_index: HashMap<&str, usize> = HashMap::new();
    for (i, (name, _, _)) in data.arrows.iter().enumerate() {
        if arrow_index.insert(name, i).is_some() {
            errors.push(CategoryError::DuplicateArrow(name.clone()));
        }
    }
    let mut dom = Vec::with_capacity(data.arrows.len());
    let mut cod = Vec::with_capacity(data.arrows.len());
    for (name, d, c) in &data.arrows {
        match (object_index.get(d.as_str()), object_index.get(c.as_str())) {
            (Some(&d), Some(&c)) => {
                dom.push(ObjId(d));
                cod.push(ObjId(c));
            }
            (d_found, c_found) => {
                if d_found.is_none() {
                    errors.push(CategoryError::UnknownObject {
                        arrow: name.clone(),
                        object: d.clone(),
                    });
                }
                if c_found.is_none() {
                    errors.push(CategoryError::UnknownObject {
                        arrow: name.clone(),
                        object: c.clone(),
                    });
                }
            }
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }

    let n_obj = data.objects.len();
    let n_arr = data.arrows.len();

    // Phase 2: identities and the composition table.
    let mut identity: Vec<Option<ArrowId>> = vec![None; n_obj];
    for (obj, arr) in &data.identities {
        let Some(&c) = object_index.get(obj.as_str()) else {
            errors.push(CategoryError::IdentityUnknownObject(obj.clone()));
            continue;
        };
        let Some(&f) = arrow_index.get(arr.as_str()) else {
            errors.push(CategoryError::UnknownArrow {
                context: format!("identity entry for `{obj}`"),
                name: arr.clone(),
            });
            continue;
        };
        if let Some(first) = identity[c] {
            errors.push(CategoryError::ConflictingIdentity {
                object: obj.clone(),
                first: data.arrows[first.0].0.clone(),
                second: arr.clone(),
            });
            continue;
        }
        if dom[f] != ObjId(c) || cod[f] != ObjId(c) {
            errors.push(CategoryError::IdentityNotLoop {
                object: obj.clone(),
                arrow: arr.clone(),
            });
            continue;
        }
        identity[c] = Some(ArrowId(f));
    }
    for (c, id) in identity.iter().enumerate() {
        if id.is_none() {
            errors.push(CategoryError::MissingIdentity(data.objects[c].clone()));
        }
    }

    let mut compose: Vec<Vec<Option<ArrowId>>> = vec![vec![None; n_arr]; n_arr];
    for (g_name, f_name, gf_name) in &data.composites {
        let mut lookup = |name: &String| -> Option<usize> {
            let found = arrow_index.get(name.as_str()).copied();
            if found.is_none() {
                errors.push(CategoryError::UnknownArrow {
                    context: format!("composite `{g_name}` after `{f_name}`"),
                    name: name.clone(),
                });
            }
            found
        };
        let (Some(g), Some(f), Some(gf)) = (lookup(g_name), lookup(f_name), lookup(gf_name)) else {
            continue;
        };
        if cod[f] != dom[g] {
            errors.push(CategoryError::NotComposable {
                outer: g_name.clone(),
                inner: f_name.clone(),
            });
            continue;
        }
        if let Some(first) = compose[g][f] {
            if first != ArrowId(gf) {
                errors.push(CategoryError::ConflictingComposite {
                    outer: g_name.clone(),
                    inner: f_name.clone(),
                    first: data.arrows[first.0].0.clone(),
                    second: gf_name.clone(),
                });
            }
            continue;
        }
        if dom[gf] != dom[f] || cod[gf] != cod[g] {
            errors.push(CategoryError::CompositeEndpoints {
                outer: g_name.clone(),
                inner: f_name.clone(),
                composite: gf_name.clone(),
            });
            continue;
        }
        compose[g][f] = Some(ArrowId(gf));
    }
    for g in 0..n_arr {
        for f in 0..n_arr {
            if cod[f] == dom[g] && compose[g][f].is_none() {
                errors.push(CategoryError::MissingComposite {
                    outer: data.arrows[g].0.clone(),
                    inner: data.arrows[f].0.clone(),
                });
            }
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }

    // Phase 3: categorical laws over the now-total table.
    let identity: Vec<ArrowId> = identity.into_iter().map(Option::unwrap).collect();
    let comp = |g: usize, f: usize| compose[g][f].expect("totality checked above").0;
    for f in 0..n_arr {
        let id_cod = identity[cod[f].0].0;
        let id_dom = identity[dom[f].0].0;
        if comp(id_cod, f) != f || comp(f, id_dom) != f {
            errors.push(CategoryError::IdentityLaw {
                arrow: data.arrows[f].0.clone(),
            });
        }
    }
    for h in 0..n_arr {
        for g in 0..n_arr {
            if cod[g] != dom[h] {
                continue;
            }
            for (f, f_cod) in cod.iter().enumerate() {
                if *f_cod != dom[g] {
                    continue;
                }
                if comp(comp(h, g), f) != comp(h, comp(g, f)) {
                    errors.push(CategoryError::Associativity {
                        h: data.arrows[h].0.clone(),
                        g: data.arrows[g].0.clone(),
                        f: data.arrows[f].0.clone(),
                    });
                }
            }
        }
    }

    // Phase 4: fan-in caps and index caches.
    let mut fan_in: Vec<Vec<ArrowId>> = vec![Vec::new(); n_obj];
    for f in 0..n_arr {
        fan_in[cod[f].0].push(ArrowId(f));
    }
    let bound = caps.fanin_bound();
    for (c, arrows) in fan_in.iter().enumerate() {
        if arrows.len() > bound {
            errors.push(
                CapExceeded::new(
                    format!("fan-in of object `{}`", data.objects[c]),
                    arrows.len(),
                    bound,
                )
                .into(),
            );
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }

    let mut fan_pos = vec![0usize; n_arr];
    for arrows in &fan_in {
        for (i, f) in arrows.iter().enumerate() {
            fan_pos[f.0] = i;
        }
    }
    let mut precomp = vec![0u64; n_arr];
    for f in 0..n_arr {
        let mut mask = 0u64;
        for &g in &fan_in[dom[f].0] {
            let fg = comp(f, g.0);
            mask |= 1 << fan_pos[fg];
        }
        precomp[f] = mask;
    }

    Ok(FinCategory {
        object_names: data.objects.clone(),
        arrow_names: data.arrows.iter().map(|(n, _, _)| n.clone()).collect(),
        dom,
        cod,
        identity,
        compose,
        fan_in,
        fan_pos,
        precomp,
    })
}

impl FinCategory {
    /// Number of objects.
    pub fn object_count(&self) -> usize {
        self.object_names.len()
    }

    /// Number of arrows.
    pub fn arrow_count(&self) -> usize {
        self.arrow_names.len()
    }

    /// All objects, in index order.
    pub fn objects(&self) -> impl Iterator<Item = ObjId> {
        (0..self.object_count()).map(ObjId)
    }

    /// All arrows, in index order.
    pub fn arrows(&self) -> impl Iterator<Item = ArrowId> {
        (0..self.arrow_count()).map(ArrowId)
    }

    /// Domain of an arrow.
    pub fn dom(&self, f: ArrowId) -> ObjId {
        self.dom[f.0]
    }

    /// Codomain of an arrow.
    pub fn cod(&self, f: ArrowId) -> ObjId {
        self.cod[f.0]
    }

    /// The identity arrow of an object.
    pub fn identity(&self, c: ObjId) -> ArrowId {
        self.identity[c.0]
    }

    /// Whether `f` is an identity arrow.
    pub fn is_identity(&self, f: ArrowId) -> bool {
        self.identity[self.dom(f).0] == f
    }

    /// The composite of `g` after `f`, or `None` when `cod(f) != dom(g)`.
    pub fn compose(&self, g: ArrowId, f: ArrowId) -> Option<ArrowId> {
        self.compose[g.0][f.0]
    }

    /// Name of an object.
    pub fn object_name(&self, c: ObjId) -> &str {
        &self.object_names[c.0]
    }

    /// Name of an arrow.
    pub fn arrow_name(&self, f: ArrowId) -> &str {
        &self.arrow_names[f.0]
    }

    /// Looks an object up by name.
    pub fn object_by_name(&self, name: &str) -> Option<ObjId> {
        self.object_names.iter().position(|n| n == name).map(ObjId)
    }

    /// Looks an arrow up by name.
    pub fn arrow_by_name(&self, name: &str) -> Option<ArrowId> {
        self.arrow_names.iter().position(|n| n == name).map(ArrowId)
    }

    /// The arrows into `c`, in ascending index order. Bit `i` of a sieve
    /// mask rooted at `c` refers to element `i` of this slice.
    pub fn fan_in(&self, c: ObjId) -> &[ArrowId] {
        &self.fan_in[c.0]
    }

    pub(crate) fn fanin_mask(&self, c: ObjId) -> u64 {
        let k = self.fan_in[c.0].len();
        if k == 64 {
            u64::MAX
        } else {
            (1u64 << k) - 1
        }
    }

    pub(crate) fn arrow_bit(&self, f: ArrowId) -> u64 {
        1u64 << self.fan_pos[f.0]
    }

    /// Pulls a mask at `cod(f)` back to a mask at `dom(f)`.
    pub(crate) fn pull_mask(&self, f: ArrowId, mask: u64) -> u64 {
        let mut out = 0u64;
        for (i, &g) in self.fan_in[self.dom(f).0].iter().enumerate() {
            let fg = self.compose[f.0][g.0].expect("composable by construction");
            if mask & self.arrow_bit(fg) != 0 {
                out |= 1 << i;
            }
        }
        out
    }

    /// Closes a mask at `c` under precomposition.
    pub(crate) fn close_mask(&self, c: ObjId, mask: u64) -> u64 {
        let mut out = mask;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= self.precomp[self.fan_in[c.0][i].0];
        }
        out
    }

    pub(crate) fn is_closed_mask(&self, c: ObjId, mask: u64) -> bool {
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.precomp[self.fan_in[c.0][i].0] & !mask != 0 {
                return false;
            }
        }
        true
    }

    /// The empty sieve on `c`.
    pub fn empty_sieve(&self, c: ObjId) -> Sieve {
        Sieve::from_mask(c, 0)
    }

    /// The maximal sieve on `c`: all arrows into `c`.
    pub fn maximal_sieve(&self, c: ObjId) -> Sieve {
        Sieve::from_mask(c, self.fanin_mask(c))
    }

    /// Whether `s` is the maximal sieve on its root.
    pub fn is_maximal(&self, s: Sieve) -> bool {
        s.mask == self.fanin_mask(s.root)
    }

    /// The member arrows of a sieve, ascending.
    pub fn sieve_arrows(&self, s: Sieve) -> Vec<ArrowId> {
        self.fan_in[s.root.0]
            .iter()
            .enumerate()
            .filter(|(i, _)| s.mask & (1 << i) != 0)
            .map(|(_, &f)| f)
            .collect()
    }

    /// Number of member arrows.
    pub fn sieve_len(&self, s: Sieve) -> usize {
        s.mask.count_ones() as usize
    }

    /// Whether the sieve contains a given arrow.
    pub fn sieve_contains(&self, s: Sieve, f: ArrowId) -> bool {
        self.cod(f) == s.root && s.mask & self.arrow_bit(f) != 0
    }

    /// Builds a sieve from an explicit arrow set, verifying both the common
    /// codomain and precomposition closure.
    pub fn sieve_from_arrows(&self, root: ObjId, arrows: &[ArrowId]) -> Result<Sieve, SieveError> {
        let mut mask = 0u64;
        for &f in arrows {
            if self.cod(f) != root {
                return Err(SieveError::WrongCodomain {
                    arrow: self.arrow_name(f).to_string(),
                    actual: self.object_name(self.cod(f)).to_string(),
                    expected: self.object_name(root).to_string(),
                });
            }
            mask |= self.arrow_bit(f);
        }
        for &f in arrows {
            let missing = self.precomp[f.0] & !mask;
            if missing != 0 {
                let i = missing.trailing_zeros() as usize;
                return Err(SieveError::NotClosed {
                    arrow: self.arrow_name(f).to_string(),
                    missing: self.arrow_name(self.fan_in[root.0][i]).to_string(),
                });
            }
        }
        Ok(Sieve::from_mask(root, mask))
    }

    /// The smallest sieve on `root` containing the generators: their closure
    /// under precomposition.
    pub fn generate_sieve(&self, root: ObjId, generators: &[ArrowId]) -> Result<Sieve, SieveError> {
        let mut mask = 0u64;
        for &f in generators {
            if self.cod(f) != root {
                return Err(SieveError::WrongCodomain {
                    arrow: self.arrow_name(f).to_string(),
                    actual: self.object_name(self.cod(f)).to_string(),
                    expected: self.object_name(root).to_string(),
                });
            }
            mask |= self.arrow_bit(f);
        }
        Ok(Sieve::from_mask(root, self.close_mask(root, mask)))
    }

    /// The pullback of `s` along `f`: all arrows `g` into `dom(f)` whose
    /// composite with `f` lies in `s`. Requires `cod(f) = root(s)`.
    pub fn pullback_sieve(&self, f: ArrowId, s: Sieve) -> Result<Sieve, SieveError> {
        if self.cod(f) != s.root {
            return Err(SieveError::WrongCodomain {
                arrow: self.arrow_name(f).to_string(),
                actual: self.object_name(self.cod(f)).to_string(),
                expected: self.object_name(s.root).to_string(),
            });
        }
        Ok(Sieve::from_mask(self.dom(f), self.pull_mask(f, s.mask)))
    }

    fn same_root(&self, s: Sieve, t: Sieve) -> Result<ObjId, SieveError> {
        if s.root != t.root {
            return Err(SieveError::RootMismatch {
                left: self.object_name(s.root).to_string(),
                right: self.object_name(t.root).to_string(),
            });
        }
        Ok(s.root)
    }

    /// Set union of two sieves with a common root (always a sieve).
    pub fn sieve_union(&self, s: Sieve, t: Sieve) -> Result<Sieve, SieveError> {
        let root = self.same_root(s, t)?;
        Ok(Sieve::from_mask(root, s.mask | t.mask))
    }

    /// Set intersection of two sieves with a common root (always a sieve).
    pub fn sieve_intersection(&self, s: Sieve, t: Sieve) -> Result<Sieve, SieveError> {
        let root = self.same_root(s, t)?;
        Ok(Sieve::from_mask(root, s.mask & t.mask))
    }

    /// Whether `s ⊆ t` as arrow sets (roots must agree).
    pub fn sieve_subset(&self, s: Sieve, t: Sieve) -> Result<bool, SieveError> {
        self.same_root(s, t)?;
        Ok(s.mask & !t.mask == 0)
    }

    /// Renders a sieve as `{name, …}` for reports.
    pub fn sieve_to_string(&self, s: Sieve) -> String {
        let names: Vec<&str> = self
            .sieve_arrows(s)
            .iter()
            .map(|&f| self.arrow_name(f))
            .collect();
        format!("{{{}}}", names.join(", "))
    }
}
