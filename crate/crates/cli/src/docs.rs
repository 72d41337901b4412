//! Versioned JSON documents describing sites and frames.
//!
//! A document identifies itself through a `format` tag: [`SITE_FORMAT`] for
//! a category with a coverage descriptor, [`FRAME_FORMAT`] for a finite
//! frame. Loading is two-phase: [`parse_document`] checks only the JSON
//! shape, while [`SiteDocument::to_site`] and [`FrameDocument::to_frame`]
//! validate the declared structure against the category, topology, and
//! lattice laws, reporting every violation found.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use sheafcalc_core::corpus::{corpus_frames, corpus_sites, CriterionReport};
use sheafcalc_core::coverage::{all_sieves, GrothendieckTopology};
use sheafcalc_core::fincat::validate_category;
use sheafcalc_core::frames::{FiniteFrame, FrameElt, FrameError};
use sheafcalc_core::omega::{Site, SiteError};
use sheafcalc_core::{ArrowId, CapExceeded, Caps, CategoryData, FinCategory, ObjId};

/// Format tag identifying a site document.
pub const SITE_FORMAT: &str = "sheafcalc/site@1";

/// Format tag identifying a frame document.
pub const FRAME_FORMAT: &str = "sheafcalc/frame@1";

/// Why a document could not be turned into a validated structure.
#[derive(Debug, Error)]
pub enum LoadError {
    /// The text is not a document at all: bad JSON, a missing or unknown
    /// `format` tag, or fields that do not match the declared format.
    #[error("{0}")]
    Malformed(String),
    /// The document parsed, but the structure it declares breaks its laws;
    /// one diagnostic per violation.
    #[error("{}", diagnostics.join("\n"))]
    Invalid { diagnostics: Vec<String> },
    /// Validation hit a resource cap.
    #[error(transparent)]
    Cap(#[from] CapExceeded),
}

impl LoadError {
    fn invalid(diagnostic: impl Into<String>) -> LoadError {
        LoadError::Invalid {
            diagnostics: vec![diagnostic.into()],
        }
    }
}

/// A finite category with a coverage descriptor, as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteDocument {
    /// Must equal [`SITE_FORMAT`].
    pub format: String,
    /// Object names.
    pub objects: Vec<String>,
    /// All arrows, identities included.
    pub arrows: Vec<ArrowDecl>,
    /// One identity assignment per object.
    pub identities: Vec<IdentityDecl>,
    /// The composition table. Entries whose outer or inner arrow is a
    /// declared identity are implied by the identity law and may be
    /// omitted; everything else must be listed.
    pub composites: Vec<CompositeDecl>,
    /// Which sieves cover.
    pub coverage: CoverageDecl,
}

/// An arrow `id : dom -> cod`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDecl {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

/// Names the identity arrow of one object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityDecl {
    pub object: String,
    pub arrow: String,
}

/// One composition-table entry: `after ∘ first = equals`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositeDecl {
    pub after: String,
    pub first: String,
    pub equals: String,
}

/// How the document's coverage is specified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CoverageDecl {
    /// Only maximal sieves cover.
    Trivial,
    /// Explicit per-object generating sieves, saturated at load time.
    Explicit { covers: Vec<CoverDecl> },
    /// For poset-shaped categories only: a sieve covers exactly when the
    /// join of its arrows' domains (in the frame of objects) is the object
    /// itself.
    CanonicalFrame,
}

/// Generators of one covering sieve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverDecl {
    pub object: String,
    pub arrows: Vec<String>,
}

/// A finite frame presented by element names and order pairs, as stored on
/// disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDocument {
    /// Must equal [`FRAME_FORMAT`].
    pub format: String,
    /// Element names.
    pub elements: Vec<String>,
    /// `[lower, upper]` pairs; the order is their reflexive-transitive
    /// closure.
    pub order: Vec<(String, String)>,
}

/// A parsed document of either kind.
#[derive(Debug, Clone)]
pub enum Document {
    Site(SiteDocument),
    Frame(FrameDocument),
}

/// Parses JSON text into a document, dispatching on the `format` tag.
///
/// Only the shape is checked here; the laws of the declared structure are
/// checked by [`SiteDocument::to_site`] and [`FrameDocument::to_frame`].
pub fn parse_document(text: &str) -> Result<Document, LoadError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| LoadError::Malformed(format!("invalid JSON: {e}")))?;
    let tag = value
        .get("format")
        .and_then(|v| v.as_str())
        .ok_or_else(|| LoadError::Malformed("missing string `format` tag".to_string()))?
        .to_string();
    match tag.as_str() {
        SITE_FORMAT => serde_json::from_value(value)
            .map(Document::Site)
            .map_err(|e| LoadError::Malformed(format!("not a valid site document: {e}"))),
        FRAME_FORMAT => serde_json::from_value(value)
            .map(Document::Frame)
            .map_err(|e| LoadError::Malformed(format!("not a valid frame document: {e}"))),
        other => Err(LoadError::Malformed(format!(
            "unknown format `{other}` (expected `{SITE_FORMAT}` or `{FRAME_FORMAT}`)"
        ))),
    }
}

impl SiteDocument {
    /// Validates the document into a [`Site`].
    pub fn to_site(&self, caps: &Caps) -> Result<Site, LoadError> {
        let mut composites: Vec<(String, String, String)> = self
            .composites
            .iter()
            .map(|c| (c.after.clone(), c.first.clone(), c.equals.clone()))
            .collect();
        // Composites with an identity are forced by the identity law; fill
        // them in so documents need not spell them out. A document entry
        // that disagrees with the filled-in one is still diagnosed, because
        // the validator rejects conflicting table entries.
        for decl in &self.identities {
            let identity = match self.arrows.iter().find(|a| a.id == decl.arrow) {
                Some(a) if a.dom == decl.object && a.cod == decl.object => a,
                // Dangling or non-loop identity declarations are diagnosed
                // by the validator itself.
                _ => continue,
            };
            for arrow in &self.arrows {
                if arrow.cod == decl.object {
                    composites.push((identity.id.clone(), arrow.id.clone(), arrow.id.clone()));
                }
                if arrow.dom == decl.object && arrow.id != identity.id {
                    composites.push((arrow.id.clone(), identity.id.clone(), arrow.id.clone()));
                }
            }
        }
        let data = CategoryData {
            objects: self.objects.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| (a.id.clone(), a.dom.clone(), a.cod.clone()))
                .collect(),
            identities: self
                .identities
                .iter()
                .map(|i| (i.object.clone(), i.arrow.clone()))
                .collect(),
            composites,
        };
        let cat = validate_category(&data, caps).map_err(|errors| {
            let mut cap = None;
            let diagnostics: Vec<String> = errors
                .iter()
                .inspect(|e| {
                    if let sheafcalc_core::fincat::CategoryError::Cap(c) = e {
                        cap.get_or_insert_with(|| c.clone());
                    }
                })
                .map(|e| e.to_string())
                .collect();
            match cap {
                Some(c) => LoadError::Cap(c),
                None => LoadError::Invalid { diagnostics },
            }
        })?;
        let topology = match &self.coverage {
            CoverageDecl::Trivial => GrothendieckTopology::trivial(&cat),
            CoverageDecl::Explicit { covers } => {
                let mut sieves = Vec::new();
                for cover in covers {
                    let root = lookup_object(&cat, &cover.object)?;
                    let generators = cover
                        .arrows
                        .iter()
                        .map(|name| lookup_arrow(&cat, name))
                        .collect::<Result<Vec<ArrowId>, LoadError>>()?;
                    let sieve = cat
                        .generate_sieve(root, &generators)
                        .map_err(|e| LoadError::invalid(e.to_string()))?;
                    sieves.push(sieve);
                }
                GrothendieckTopology::from_sieves(&cat, sieves)
            }
            CoverageDecl::CanonicalFrame => canonical_topology(&cat, caps)?,
        };
        Site::new(cat, topology, *caps).map_err(|e| match e {
            SiteError::InvalidTopology { violations } => LoadError::Invalid {
                diagnostics: violations,
            },
            SiteError::Cap(c) => LoadError::Cap(c),
        })
    }

    /// Serializes a site back into a document with fully saturated explicit
    /// coverage, so that reloading reproduces the same topology.
    pub fn from_site(site: &Site) -> SiteDocument {
        let cat = site.category();
        let arrows = cat
            .arrows()
            .map(|f| ArrowDecl {
                id: cat.arrow_name(f).to_string(),
                dom: cat.object_name(cat.dom(f)).to_string(),
                cod: cat.object_name(cat.cod(f)).to_string(),
            })
            .collect();
        let identities = cat
            .objects()
            .map(|c| IdentityDecl {
                object: cat.object_name(c).to_string(),
                arrow: cat.arrow_name(cat.identity(c)).to_string(),
            })
            .collect();
        let mut composites = Vec::new();
        for g in cat.arrows() {
            for f in cat.arrows() {
                if cat.dom(g) != cat.cod(f) || cat.is_identity(g) || cat.is_identity(f) {
                    continue;
                }
                let gf = cat
                    .compose(g, f)
                    .expect("validated categories have total composition on composable pairs");
                composites.push(CompositeDecl {
                    after: cat.arrow_name(g).to_string(),
                    first: cat.arrow_name(f).to_string(),
                    equals: cat.arrow_name(gf).to_string(),
                });
            }
        }
        let mut covers = Vec::new();
        for c in cat.objects() {
            for s in site.topology().covers(c) {
                covers.push(CoverDecl {
                    object: cat.object_name(c).to_string(),
                    arrows: cat
                        .sieve_arrows(s)
                        .iter()
                        .map(|&f| cat.arrow_name(f).to_string())
                        .collect(),
                });
            }
        }
        SiteDocument {
            format: SITE_FORMAT.to_string(),
            objects: (0..cat.object_count())
                .map(|i| cat.object_name(ObjId(i)).to_string())
                .collect(),
            arrows,
            identities,
            composites,
            coverage: CoverageDecl::Explicit { covers },
        }
    }
}

fn lookup_object(cat: &FinCategory, name: &str) -> Result<ObjId, LoadError> {
    cat.object_by_name(name)
        .ok_or_else(|| LoadError::invalid(format!("coverage references unknown object `{name}`")))
}

fn lookup_arrow(cat: &FinCategory, name: &str) -> Result<ArrowId, LoadError> {
    cat.arrow_by_name(name)
        .ok_or_else(|| LoadError::invalid(format!("coverage references unknown arrow `{name}`")))
}

/// The canonical coverage of a poset-shaped category: a sieve covers when
/// the join of its arrows' domains is the root. Requires the objects to
/// form a finite distributive lattice under the arrow-existence order.
fn canonical_topology(cat: &FinCategory, caps: &Caps) -> Result<GrothendieckTopology, LoadError> {
    let n = cat.object_count();
    let mut hom_count = vec![vec![0usize; n]; n];
    for f in cat.arrows() {
        hom_count[cat.dom(f).0][cat.cod(f).0] += 1;
    }
    for (i, row) in hom_count.iter().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            if count > 1 {
                return Err(LoadError::invalid(format!(
                    "canonical-frame coverage requires at most one arrow between any two \
                     objects, but `{}` -> `{}` has {count}",
                    cat.object_name(ObjId(i)),
                    cat.object_name(ObjId(j)),
                )));
            }
        }
    }
    let names = (0..n)
        .map(|i| cat.object_name(ObjId(i)).to_string())
        .collect();
    let mut order = Vec::new();
    for (i, row) in hom_count.iter().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            if count > 0 {
                order.push((i, j));
            }
        }
    }
    let frame = FiniteFrame::new(names, &order, caps).map_err(|e| match e {
        FrameError::Cap(c) => LoadError::Cap(c),
        other => LoadError::invalid(format!(
            "canonical-frame coverage requires the objects to form a finite distributive \
             lattice: {other}"
        )),
    })?;
    let mut sieves = Vec::new();
    for c in cat.objects() {
        for s in all_sieves(cat, c, caps)? {
            let join = frame.join_all(cat.sieve_arrows(s).iter().map(|&f| FrameElt(cat.dom(f).0)));
            if join == FrameElt(c.0) {
                sieves.push(s);
            }
        }
    }
    Ok(GrothendieckTopology::from_sieves(cat, sieves))
}

impl FrameDocument {
    /// Validates the document into a [`FiniteFrame`].
    pub fn to_frame(&self, caps: &Caps) -> Result<FiniteFrame, LoadError> {
        let index = |name: &str| -> Result<usize, LoadError> {
            self.elements.iter().position(|e| e == name).ok_or_else(|| {
                LoadError::invalid(format!("order references unknown element `{name}`"))
            })
        };
        let mut order = Vec::with_capacity(self.order.len());
        for (lo, hi) in &self.order {
            order.push((index(lo)?, index(hi)?));
        }
        FiniteFrame::new(self.elements.clone(), &order, caps).map_err(|e| match e {
            FrameError::Cap(c) => LoadError::Cap(c),
            other => LoadError::invalid(other.to_string()),
        })
    }

    /// Serializes a frame back into a document listing every strict order
    /// pair.
    pub fn from_frame(frame: &FiniteFrame) -> FrameDocument {
        let mut order = Vec::new();
        for a in frame.elements() {
            for b in frame.elements() {
                if a != b && frame.leq(a, b) {
                    order.push((frame.name(a).to_string(), frame.name(b).to_string()));
                }
            }
        }
        FrameDocument {
            format: FRAME_FORMAT.to_string(),
            elements: frame
                .elements()
                .map(|e| frame.name(e).to_string())
                .collect(),
            order,
        }
    }
}

/// Serializes every corpus site and frame to a document and reloads it,
/// requiring the round trip to reproduce the same topology (respectively
/// the same frame).
pub fn document_round_trip_suite(caps: &Caps) -> CriterionReport {
    let mut report = CriterionReport {
        name: "document-round-trip",
        checks: 0,
        failures: Vec::new(),
    };
    for (name, site) in corpus_sites(caps) {
        report.checks += 1;
        let doc = SiteDocument::from_site(&site);
        let text = match serde_json::to_string(&doc) {
            Ok(text) => text,
            Err(e) => {
                report
                    .failures
                    .push(format!("{name}: serialization failed: {e}"));
                continue;
            }
        };
        match parse_document(&text) {
            Ok(Document::Site(reparsed)) => match reparsed.to_site(caps) {
                Ok(reloaded) if reloaded.topology() == site.topology() => {}
                Ok(_) => report
                    .failures
                    .push(format!("{name}: coverage changed across the round trip")),
                Err(e) => report.failures.push(format!("{name}: reload failed: {e}")),
            },
            Ok(Document::Frame(_)) => report
                .failures
                .push(format!("{name}: reparsed as a frame document")),
            Err(e) => report.failures.push(format!("{name}: reparse failed: {e}")),
        }
    }
    for (name, frame) in corpus_frames(caps) {
        report.checks += 1;
        let doc = FrameDocument::from_frame(&frame);
        let text = match serde_json::to_string(&doc) {
            Ok(text) => text,
            Err(e) => {
                report
                    .failures
                    .push(format!("{name}: serialization failed: {e}"));
                continue;
            }
        };
        match parse_document(&text) {
            Ok(Document::Frame(reparsed)) => match reparsed.to_frame(caps) {
                Ok(reloaded) if reloaded == frame => {}
                Ok(_) => report
                    .failures
                    .push(format!("{name}: frame changed across the round trip")),
                Err(e) => report.failures.push(format!("{name}: reload failed: {e}")),
            },
            Ok(Document::Site(_)) => report
                .failures
                .push(format!("{name}: reparsed as a site document")),
            Err(e) => report.failures.push(format!("{name}: reparse failed: {e}")),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_tag_is_checked() {
        assert!(matches!(
            parse_document("{\"format\": \"sheafcalc/other@9\"}"),
            Err(LoadError::Malformed(_))
        ));
        assert!(matches!(
            parse_document("{\"objects\": []}"),
            Err(LoadError::Malformed(_))
        ));
        assert!(matches!(
            parse_document("not json"),
            Err(LoadError::Malformed(_))
        ));
    }

    #[test]
    fn corpus_sites_round_trip_through_documents() {
        let caps = Caps::default();
        for (name, site) in corpus_sites(&caps) {
            let doc = SiteDocument::from_site(&site);
            let text = serde_json::to_string(&doc).expect("document serializes");
            let reparsed = match parse_document(&text) {
                Ok(Document::Site(d)) => d,
                other => panic!("{name}: expected a site document, got {other:?}"),
            };
            let reloaded = reparsed
                .to_site(&caps)
                .unwrap_or_else(|e| panic!("{name}: reload failed: {e}"));
            assert_eq!(
                reloaded.topology(),
                site.topology(),
                "{name}: topology changed across serialization"
            );
        }
    }

    #[test]
    fn corpus_frames_round_trip_through_documents() {
        let caps = Caps::default();
        for (name, frame) in corpus_frames(&caps) {
            let doc = FrameDocument::from_frame(&frame);
            let text = serde_json::to_string(&doc).expect("document serializes");
            let reparsed = match parse_document(&text) {
                Ok(Document::Frame(d)) => d,
                other => panic!("{name}: expected a frame document, got {other:?}"),
            };
            let reloaded = reparsed
                .to_frame(&caps)
                .unwrap_or_else(|e| panic!("{name}: reload failed: {e}"));
            assert_eq!(
                reloaded, frame,
                "{name}: frame changed across serialization"
            );
        }
    }

    #[test]
    fn canonical_frame_coverage_matches_join_covers() {
        // The poset 0 < a, b < 1 (a, b incomparable) is a frame; the sieve
        // generated by {a -> 1, b -> 1} joins to 1, so it must cover.
        let caps = Caps::default();
        let doc = SiteDocument {
            format: SITE_FORMAT.to_string(),
            objects: vec!["0".into(), "a".into(), "b".into(), "1".into()],
            arrows: vec![
                ArrowDecl {
                    id: "id_0".into(),
                    dom: "0".into(),
                    cod: "0".into(),
                },
                ArrowDecl {
                    id: "id_a".into(),
                    dom: "a".into(),
                    cod: "a".into(),
                },
                ArrowDecl {
                    id: "id_b".into(),
                    dom: "b".into(),
                    cod: "b".into(),
                },
                ArrowDecl {
                    id: "id_1".into(),
                    dom: "1".into(),
                    cod: "1".into(),
                },
                ArrowDecl {
                    id: "le_0_a".into(),
                    dom: "0".into(),
                    cod: "a".into(),
                },
                ArrowDecl {
                    id: "le_0_b".into(),
                    dom: "0".into(),
                    cod: "b".into(),
                },
                ArrowDecl {
                    id: "le_0_1".into(),
                    dom: "0".into(),
                    cod: "1".into(),
                },
                ArrowDecl {
                    id: "le_a_1".into(),
                    dom: "a".into(),
                    cod: "1".into(),
                },
                ArrowDecl {
                    id: "le_b_1".into(),
                    dom: "b".into(),
                    cod: "1".into(),
                },
            ],
            identities: vec![
                IdentityDecl {
                    object: "0".into(),
                    arrow: "id_0".into(),
                },
                IdentityDecl {
                    object: "a".into(),
                    arrow: "id_a".into(),
                },
                IdentityDecl {
                    object: "b".into(),
                    arrow: "id_b".into(),
                },
                IdentityDecl {
                    object: "1".into(),
                    arrow: "id_1".into(),
                },
            ],
            composites: vec![
                CompositeDecl {
                    after: "le_a_1".into(),
                    first: "le_0_a".into(),
                    equals: "le_0_1".into(),
                },
                CompositeDecl {
                    after: "le_b_1".into(),
                    first: "le_0_b".into(),
                    equals: "le_0_1".into(),
                },
            ],
            coverage: CoverageDecl::CanonicalFrame,
        };
        let site = doc.to_site(&caps).expect("diamond poset is a frame");
        let cat = site.category();
        let top = cat.object_by_name("1").unwrap();
        let legs = [
            cat.arrow_by_name("le_a_1").unwrap(),
            cat.arrow_by_name("le_b_1").unwrap(),
        ];
        let two_legs = cat.generate_sieve(top, &legs).unwrap();
        assert!(site.topology().is_covering(two_legs));
        let one_leg = cat.generate_sieve(top, &legs[..1]).unwrap();
        assert!(!site.topology().is_covering(one_leg));
        // Every emitted document reloads to the same topology.
        let doc2 = SiteDocument::from_site(&site);
        let text = serde_json::to_string(&doc2).unwrap();
        match parse_document(&text).unwrap() {
            Document::Site(d) => {
                assert_eq!(d.to_site(&caps).unwrap().topology(), site.topology());
            }
            Document::Frame(_) => panic!("expected a site document"),
        }
    }
}
