//! Category- and site-level characterizations of which propositional logics
//! a classifier satisfies. These are independent oracles: they never touch
//! the classifier operations, so agreement with internal validity is a
//! meaningful cross-check.

use crate::caps::{CapExceeded, Caps};
use crate::coverage::all_sieves;
use crate::fincat::{ArrowId, FinCategory, Sieve};
use crate::omega::Site;

/// Whether every arrow has a two-sided inverse. Presheaves over a groupoid
/// satisfy classical logic, and conversely.
pub fn is_groupoid(cat: &FinCategory) -> bool {
    cat.arrows().all(|f| {
        cat.arrows().any(|g| {
            cat.compose(g, f) == Some(cat.identity(cat.dom(f)))
                && cat.compose(f, g) == Some(cat.identity(cat.cod(f)))
        })
    })
}

/// The right Ore condition: every cospan `f: b -> a <- c :g` admits arrows
/// `h: d -> b`, `k: d -> c` with `f∘h = g∘k`. Presheaves satisfy De Morgan
/// logic exactly over such categories.
pub fn right_ore(cat: &FinCategory) -> bool {
    cat.arrows().all(|f| {
        cat.arrows().filter(|&g| cat.cod(g) == cat.cod(f)).all(|g| {
            cat.arrows().any(|h| {
                cat.cod(h) == cat.dom(f)
                    && cat.arrows().any(|k| {
                        cat.cod(k) == cat.dom(g)
                            && cat.dom(k) == cat.dom(h)
                            && cat.compose(f, h) == cat.compose(g, k)
                    })
            })
        })
    })
}

/// Whether `f` equals `g` composed with some arrow.
fn factors_through(cat: &FinCategory, f: ArrowId, g: ArrowId) -> bool {
    cat.arrows().any(|x| cat.compose(g, x) == Some(f))
}

/// Whether of any two arrows with common codomain, one factors through the
/// other. Presheaves satisfy Gödel-Dummett logic exactly over such
/// categories.
pub fn gd_factorization(cat: &FinCategory) -> bool {
    cat.arrows().all(|f| {
        cat.arrows()
            .filter(|&g| cat.cod(g) == cat.cod(f))
            .all(|g| factors_through(cat, f, g) || factors_through(cat, g, f))
    })
}

/// The Gödel-Dummett criterion for an arbitrary site: for every pair of
/// closed sieves `R`, `S` on every object, the comparison sieve
/// `{f | f*(R) ⊆ f*(S) or f*(S) ⊆ f*(R)}` covers.
pub fn gd_site_criterion(site: &Site) -> Result<bool, CapExceeded> {
    let cat = site.category();
    for c in cat.objects() {
        let closed = site.closed_sieves(c)?;
        for &r in &closed {
            for &s in &closed {
                let mut comparison = 0u64;
                for (pos, &f) in cat.fan_in(c).iter().enumerate() {
                    let pr = cat.pull_mask(f, r.mask());
                    let ps = cat.pull_mask(f, s.mask());
                    if pr & !ps == 0 || ps & !pr == 0 {
                        comparison |= 1 << pos;
                    }
                }
                if !site.topology().is_covering(Sieve::from_mask(c, comparison)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether every arrow into the sieve's root pulls it back to something
/// nonempty.
pub fn is_stably_nonempty(cat: &FinCategory, s: Sieve) -> bool {
    cat.fan_in(s.root())
        .iter()
        .all(|&f| cat.pull_mask(f, s.mask()) != 0)
}

/// Whether the sieve cannot be written as a union of two proper subsieves.
/// Quantifies over all subsieve pairs: the definition, used as an oracle.
pub fn is_indecomposable_bruteforce(cat: &FinCategory, r: Sieve) -> bool {
    let c = r.root();
    let full = r.mask();
    // Proper subsieves of r.
    let mut subsieves = Vec::new();
    let mut sub = full;
    loop {
        sub = sub.wrapping_sub(1) & full;
        if sub == full {
            break;
        }
        if cat.is_closed_mask(c, sub) {
            subsieves.push(sub);
        }
        if sub == 0 {
            break;
        }
    }
    !subsieves
        .iter()
        .any(|&s| subsieves.iter().any(|&t| s | t == full))
}

/// Indecomposability by its factoring characterization: any two members
/// factor through a common member.
pub fn is_indecomposable(cat: &FinCategory, r: Sieve) -> bool {
    let members = cat.sieve_arrows(r);
    members.iter().all(|&f| {
        members.iter().all(|&g| {
            members
                .iter()
                .any(|&h| factors_through(cat, f, h) && factors_through(cat, g, h))
        })
    })
}

/// The negation of a sieve in the presheaf classifier (trivial topology):
/// the arrows whose pullback of the sieve is empty.
fn presheaf_not_mask(cat: &FinCategory, c: crate::fincat::ObjId, mask: u64) -> u64 {
    let mut out = 0u64;
    for (pos, &f) in cat.fan_in(c).iter().enumerate() {
        if cat.pull_mask(f, mask) == 0 {
            out |= 1 << pos;
        }
    }
    out
}

/// The Kreisel-Putnam criterion for presheaves: every sieve fixed by double
/// negation (equivalently, every sieve in the image of negation) is
/// indecomposable.
pub fn kp_presheaf_criterion(cat: &FinCategory, caps: &Caps) -> Result<bool, CapExceeded> {
    for c in cat.objects() {
        for s in all_sieves(cat, c, caps)? {
            let nn = presheaf_not_mask(cat, c, presheaf_not_mask(cat, c, s.mask()));
            if nn == s.mask() && !is_indecomposable(cat, s) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
