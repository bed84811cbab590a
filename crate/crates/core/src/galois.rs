//! The fix relation between submonoids and subfunctors of `U`, and the
//! Galois connection it induces.
//!
//! A homomorphism `h: B → A` fixes a subfunctor `V ⊆ U` when every `h(b)`
//! acts as the identity on every `V(M)`. `Inv h` is the largest subfunctor
//! fixed by `h` and `Stab V` the largest submonoid fixing `V`. Both are
//! computed relative to a [`Site`], twice each: once through the categorical
//! construction and once pointwise.

pub mod relation;

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use crate::actions::Site;
use crate::ends::{Diagram, FunctorData, TannakianContext};
use crate::error::{Error, Result};
use crate::finset::{self, is_subset, FinMap};
use crate::monoid::{enumerate_submonoids, Monoid, MonoidHom, Submonoid};

/// A subfunctor of `U` over a site, stored as one subset per object.
#[derive(Clone)]
pub struct Subfunctor {
    site: Site,
    subsets: Vec<Vec<usize>>,
}

impl Subfunctor {
    /// Checks that every site morphism maps `V(M)` into `V(N)`.
    pub fn new(site: &Site, subsets: Vec<Vec<usize>>) -> Result<Self> {
        if subsets.len() != site.len() {
            return Err(Error::Mismatch(format!("{} subsets for {} site objects", subsets.len(), site.len())));
        }
        let mut subsets = subsets;
        for (i, s) in subsets.iter_mut().enumerate() {
            s.sort_unstable();
            s.dedup();
            if s.last().is_some_and(|&x| x >= site.action(i).len()) {
                return Err(Error::Mismatch(format!("subset of `{}` leaves the carrier", site.name(i))));
            }
        }
        for (i, j, f) in site.arrows() {
            if let Some(&x) = subsets[i].iter().find(|&&x| subsets[j].binary_search(&f.at(x)).is_err()) {
                return Err(Error::NotNatural(format!(
                    "a morphism `{}` → `{}` sends `{}` to `{}`, outside the subset",
                    site.name(i),
                    site.name(j),
                    site.action(i).carrier().get(x),
                    site.action(j).carrier().get(f.at(x)),
                )));
            }
        }
        Ok(Subfunctor { site: site.clone(), subsets })
    }

    /// Looks elements up by label; objects not listed get the empty subset.
    pub fn from_labels<'a, I, L>(site: &Site, subsets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, L)>,
        L: IntoIterator<Item = &'a str>,
    {
        let mut out = vec![Vec::new(); site.len()];
        for (name, labels) in subsets {
            let i = site.find(name).ok_or_else(|| Error::SiteMismatch(format!("no site object `{name}`")))?;
            let carrier = site.action(i).carrier();
            for label in labels {
                let x = carrier.position_by_label(label).ok_or_else(|| Error::NotAMember {
                    elem: label.to_string(),
                    set: name.to_string(),
                })?;
                out[i].push(x);
            }
        }
        Self::new(site, out)
    }

    pub fn whole(site: &Site) -> Self {
        Subfunctor { site: site.clone(), subsets: (0..site.len()).map(|i| (0..site.action(i).len()).collect()).collect() }
    }

    pub fn empty(site: &Site) -> Self {
        Subfunctor { site: site.clone(), subsets: vec![Vec::new(); site.len()] }
    }

    pub fn site(&self) -> &Site {
        &self.site
    }

    pub fn subset(&self, object: usize) -> &[usize] {
        &self.subsets[object]
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn labels(&self, object: usize) -> Vec<String> {
        let carrier = self.site.action(object).carrier();
        self.subsets[object].iter().map(|&x| carrier.get(x).to_string()).collect()
    }

    pub fn size(&self) -> usize {
        self.subsets.iter().map(Vec::len).sum()
    }

    /// Componentwise inclusion.
    pub fn is_subset_of(&self, other: &Subfunctor) -> bool {
        self.site.same_as(&other.site) && self.subsets.iter().zip(&other.subsets).all(|(a, b)| is_subset(a, b))
    }

    /// `V` as functor data over the site's diagram, with `α: V → U`.
    pub fn functor_data(&self, d: &Diagram) -> Result<(FunctorData, Vec<FinMap>)> {
        FunctorData::restriction(d, &self.subsets)
    }

    fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| self.subsets.cmp(&other.subsets))
    }
}

impl PartialEq for Subfunctor {
    fn eq(&self, other: &Self) -> bool {
        self.subsets == other.subsets && self.site.same_as(&other.site)
    }
}

impl Eq for Subfunctor {}

impl fmt::Debug for Subfunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for i in 0..self.site.len() {
            m.entry(&self.site.name(i), &self.labels(i));
        }
        m.finish()
    }
}

/// Every subfunctor of `U` over the site, smallest first. Fails when the
/// site has more than `max_elements` elements in total or the lattice has
/// more than `limit` members.
pub fn enumerate_subfunctors(site: &Site, max_elements: usize, limit: usize) -> Result<Vec<Subfunctor>> {
    let offsets: Vec<usize> = std::iter::once(0)
        .chain((0..site.len()).scan(0, |acc, i| {
            *acc += site.action(i).len();
            Some(*acc)
        }))
        .collect();
    let n = *offsets.last().unwrap();
    if n > max_elements {
        return Err(Error::SizeLimit {
            what: "subfunctor enumeration".into(),
            needed: 1u128.checked_shl(n as u32).unwrap_or(u128::MAX),
            limit: 1u64.checked_shl(max_elements as u32).unwrap_or(u64::MAX),
        });
    }
    let owner: Vec<usize> = (0..site.len()).flat_map(|i| std::iter::repeat_n(i, site.action(i).len())).collect();
    // everything a single element forces into the subfunctor
    let closure: Vec<Vec<usize>> = (0..n)
        .map(|e| {
            let mut seen = vec![false; n];
            let mut stack = vec![e];
            seen[e] = true;
            while let Some(x) = stack.pop() {
                let i = owner[x];
                for j in 0..site.len() {
                    for f in site.homs(i, j) {
                        let y = offsets[j] + f.at(x - offsets[i]);
                        if !seen[y] {
                            seen[y] = true;
                            stack.push(y);
                        }
                    }
                }
            }
            (0..n).filter(|&y| seen[y]).collect()
        })
        .collect();

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        In,
        Out,
    }
    fn go(e: usize, marks: &mut Vec<Mark>, closure: &[Vec<usize>], out: &mut Vec<Vec<bool>>, limit: usize) -> bool {
        if out.len() > limit {
            return false;
        }
        let Some(e) = (e..marks.len()).find(|&k| marks[k] == Mark::Open) else {
            out.push(marks.iter().map(|&m| m == Mark::In).collect());
            return true;
        };
        marks[e] = Mark::Out;
        if !go(e + 1, marks, closure, out, limit) {
            return false;
        }
        if closure[e].iter().all(|&y| marks[y] != Mark::Out || y == e) {
            let saved = marks.clone();
            for &y in &closure[e] {
                marks[y] = Mark::In;
            }
            if !go(e + 1, marks, closure, out, limit) {
                return false;
            }
            *marks = saved;
        }
        marks[e] = Mark::Open;
        true
    }
    let mut found = Vec::new();
    if !go(0, &mut vec![Mark::Open; n], &closure, &mut found, limit) {
        return Err(Error::SizeLimit {
            what: "subfunctor enumeration".into(),
            needed: found.len() as u128,
            limit: limit as u64,
        });
    }
    let mut subs: Vec<Subfunctor> = found
        .into_iter()
        .map(|bits| Subfunctor {
            site: site.clone(),
            subsets: (0..site.len())
                .map(|i| (0..site.action(i).len()).filter(|&x| bits[offsets[i] + x]).collect())
                .collect(),
        })
        .collect();
    subs.sort_by(Subfunctor::cmp_canonical);
    Ok(subs)
}

fn check_hom(h: &MonoidHom, site: &Site) -> Result<()> {
    if h.dst() != site.monoid() {
        return Err(Error::MonoidMismatch("homomorphism does not land in the site's monoid".into()));
    }
    Ok(())
}

/// Whether every `h(b)` fixes every element of every `V(M)`.
pub fn fixes(h: &MonoidHom, v: &Subfunctor) -> Result<bool> {
    check_hom(h, &v.site)?;
    Ok((0..v.site.len()).all(|i| {
        let m = v.site.action(i);
        (0..h.src().len()).all(|b| v.subsets[i].iter().all(|&x| m.act(h.at(b), x) == x))
    }))
}

/// `Inv h`: per object, the equalizer of
/// `[h, X] ∘ curry(r ∘ swap)` and `[h, X] ∘ curry(π₁)` as maps `X → [B, X]`.
pub fn invariants(h: &MonoidHom, site: &Site) -> Result<Subfunctor> {
    check_hom(h, site)?;
    let a = h.dst().carrier();
    let mut subsets = Vec::with_capacity(site.len());
    for i in 0..site.len() {
        let m = site.action(i);
        let x = m.carrier();
        let r = finset::swap(x, a).then(&m.action_map())?;
        let xa = finset::product(x, a);
        let proj = xa.fst.clone();
        let restrict = finset::precompose(h.map(), x)?;
        let acting = finset::curry(&r, x, a)?.then(&restrict)?;
        let resting = finset::curry(&proj, x, a)?.then(&restrict)?;
        subsets.push(finset::equalizer(&acting, &resting)?.positions().to_vec());
    }
    Subfunctor::new(site, subsets)
}

/// `Inv h` by the pointwise formula `{x : h(b)·x = x for all b}`.
pub fn invariants_oracle(h: &MonoidHom, site: &Site) -> Result<Subfunctor> {
    check_hom(h, site)?;
    let subsets = (0..site.len())
        .map(|i| {
            let m = site.action(i);
            (0..m.len()).filter(|&x| (0..h.src().len()).all(|b| m.act(h.at(b), x) == x)).collect()
        })
        .collect();
    Subfunctor::new(site, subsets)
}

/// `Stab V = {a : a·v = v for every object M and v ∈ V(M)}`.
pub fn stabilizer(v: &Subfunctor) -> Result<Submonoid> {
    let a = v.site.monoid();
    let positions: Vec<usize> = (0..a.len())
        .filter(|&g| (0..v.site.len()).all(|i| v.subsets[i].iter().all(|&x| v.site.action(i).act(g, x) == x)))
        .collect();
    Submonoid::new(a, &positions)
}

/// `Stab V` as the equalizer of `A ⇉ End[U] → [V, U]`, built from a fresh
/// context. Use [`stabilizer_in`] to share one context across many calls.
pub fn stabilizer_via_end(v: &Subfunctor, limit: u64) -> Result<Submonoid> {
    stabilizer_in(&TannakianContext::new(&v.site, limit)?, v)
}

pub fn stabilizer_in(ctx: &TannakianContext, v: &Subfunctor) -> Result<Submonoid> {
    if !ctx.site().same_as(&v.site) {
        return Err(Error::SiteMismatch("subfunctor is over another site".into()));
    }
    Submonoid::new(v.site.monoid(), &ctx.stabilizer_positions(&v.subsets)?)
}

#[derive(Clone, Debug)]
pub struct SubmonoidEntry {
    pub sub: Submonoid,
    pub inv: Subfunctor,
    pub stab_inv: Submonoid,
    pub closed: bool,
}

#[derive(Clone, Debug)]
pub struct SubfunctorEntry {
    pub sub: Subfunctor,
    pub stab: Submonoid,
    pub inv_stab: Subfunctor,
    pub closed: bool,
}

/// Every submonoid with its invariants and their stabilizer, every image
/// subfunctor with its stabilizer and its invariants, and the bijection
/// between the closed objects on both sides.
#[derive(Clone, Debug)]
pub struct Correspondence {
    pub site: Site,
    pub submonoids: Vec<SubmonoidEntry>,
    pub subfunctors: Vec<SubfunctorEntry>,
    /// `(submonoid index, subfunctor index)` for each closed submonoid.
    pub bijection: Vec<(usize, usize)>,
    /// `S ⊆ S′` exactly when `Inv S′ ⊆ Inv S`, over the bijection.
    pub order_reversing: bool,
}

impl Correspondence {
    pub fn closed_submonoids(&self) -> impl Iterator<Item = &SubmonoidEntry> {
        self.submonoids.iter().filter(|e| e.closed)
    }

    pub fn closed_subfunctors(&self) -> impl Iterator<Item = &SubfunctorEntry> {
        self.subfunctors.iter().filter(|e| e.closed)
    }
}

pub fn galois_correspondence(m: &Monoid, site: &Site) -> Result<Correspondence> {
    if site.monoid() != m {
        return Err(Error::MonoidMismatch("site is over another monoid".into()));
    }
    let submonoids: Vec<SubmonoidEntry> = enumerate_submonoids(m)
        .into_par_iter()
        .map(|sub| {
            let inv = invariants(sub.inclusion(), site)?;
            let stab_inv = stabilizer(&inv)?;
            let closed = stab_inv == sub;
            Ok(SubmonoidEntry { sub, inv, stab_inv, closed })
        })
        .collect::<Result<_>>()?;
    let mut images: Vec<Subfunctor> = Vec::new();
    for e in &submonoids {
        if !images.contains(&e.inv) {
            images.push(e.inv.clone());
        }
    }
    images.sort_by(Subfunctor::cmp_canonical);
    let subfunctors: Vec<SubfunctorEntry> = images
        .into_iter()
        .map(|sub| {
            let stab = stabilizer(&sub)?;
            let inv_stab = invariants(stab.inclusion(), site)?;
            let closed = inv_stab == sub;
            Ok(SubfunctorEntry { sub, stab, inv_stab, closed })
        })
        .collect::<Result<_>>()?;
    let bijection: Vec<(usize, usize)> = submonoids
        .iter()
        .enumerate()
        .filter(|(_, e)| e.closed)
        .map(|(i, e)| (i, subfunctors.iter().position(|f| f.sub == e.inv).expect("image subfunctor")))
        .collect();
    let order_reversing = bijection.iter().all(|&(i, j)| {
        bijection.iter().all(|&(k, l)| {
            submonoids[i].sub.is_subset_of(&submonoids[k].sub) == subfunctors[l].sub.is_subset_of(&subfunctors[j].sub)
        })
    });
    Ok(Correspondence { site: site.clone(), submonoids, subfunctors, bijection, order_reversing })
}

/// The five Galois-connection laws, each checked over every submonoid and
/// every tested subfunctor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConnectionLaws {
    /// `S ⊆ Stab(Inv S)`.
    pub unit_submonoids: bool,
    /// `V ⊆ Inv(Stab V)`.
    pub unit_subfunctors: bool,
    /// `Inv(Stab(Inv S)) = Inv S`.
    pub inv_closure: bool,
    /// `Stab(Inv(Stab V)) = Stab V`.
    pub stab_closure: bool,
    /// Both maps reverse inclusion.
    pub antitone: bool,
    pub submonoids_tested: usize,
    pub subfunctors_tested: usize,
}

impl ConnectionLaws {
    pub fn all_hold(&self) -> bool {
        self.unit_submonoids && self.unit_subfunctors && self.inv_closure && self.stab_closure && self.antitone
    }
}

/// Sites with at most this many elements get every subfunctor tested;
/// larger sites test the invariant images plus the empty and whole ones.
pub const EXHAUSTIVE_SUBFUNCTOR_ELEMENTS: usize = 16;

pub fn connection_laws(m: &Monoid, site: &Site) -> Result<ConnectionLaws> {
    if site.monoid() != m {
        return Err(Error::MonoidMismatch("site is over another monoid".into()));
    }
    let subs = enumerate_submonoids(m);
    let invs: Vec<Subfunctor> = subs.iter().map(|s| invariants(s.inclusion(), site)).collect::<Result<_>>()?;
    let total: usize = (0..site.len()).map(|i| site.action(i).len()).sum();
    let mut tested: Vec<Subfunctor> = if total <= EXHAUSTIVE_SUBFUNCTOR_ELEMENTS {
        enumerate_subfunctors(site, EXHAUSTIVE_SUBFUNCTOR_ELEMENTS, 1 << 16)?
    } else {
        let mut v = invs.clone();
        v.push(Subfunctor::empty(site));
        v.push(Subfunctor::whole(site));
        v
    };
    tested.sort_by(Subfunctor::cmp_canonical);
    tested.dedup();
    let stabs: Vec<Submonoid> = tested.iter().map(stabilizer).collect::<Result<_>>()?;

    let mut laws = ConnectionLaws {
        unit_submonoids: true,
        unit_subfunctors: true,
        inv_closure: true,
        stab_closure: true,
        antitone: true,
        submonoids_tested: subs.len(),
        subfunctors_tested: tested.len(),
    };
    for (s, inv) in subs.iter().zip(&invs) {
        let stab_inv = stabilizer(inv)?;
        laws.unit_submonoids &= s.is_subset_of(&stab_inv);
        laws.inv_closure &= invariants(stab_inv.inclusion(), site)? == *inv;
    }
    for (v, stab) in tested.iter().zip(&stabs) {
        let inv_stab = invariants(stab.inclusion(), site)?;
        laws.unit_subfunctors &= v.is_subset_of(&inv_stab);
        laws.stab_closure &= stabilizer(&inv_stab)? == *stab;
    }
    for (s, inv_s) in subs.iter().zip(&invs) {
        for (t, inv_t) in subs.iter().zip(&invs) {
            if s.is_subset_of(t) {
                laws.antitone &= inv_t.is_subset_of(inv_s);
            }
        }
    }
    for (v, stab_v) in tested.iter().zip(&stabs) {
        for (w, stab_w) in tested.iter().zip(&stabs) {
            if v.is_subset_of(w) {
                laws.antitone &= stab_w.is_subset_of(stab_v);
            }
        }
    }
    Ok(laws)
}
