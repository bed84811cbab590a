//! Ends of hom-bifunctors over finite concrete diagrams.
//!
//! A [`Diagram`] is a small category whose objects are finite sets and whose
//! arrows are maps between them. Functor data assigns a set to every object
//! and a map to every arrow. The internal Nat `[V, W]` is the set of families
//! `(φ_M: V M → W M)` satisfying the wedge condition `W f ∘ φ_M = φ_N ∘ V f`
//! for every arrow `f: M → N`. With `V = W` the families compose and form
//! the End monoid.
//!
//! Families are found by constraint propagation over the variables
//! `(M, v ∈ V M)`. The answer is the same set a full product scan would
//! filter, but without visiting the product. A node budget bounds the search.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::actions::{trivial_action, MAction, Site};
use crate::error::{Error, Result};
use crate::finset::{self, decode_table, Elem, FinMap, FinSet};
use crate::monoid::{Monoid, MonoidHom};
use crate::search::{Exhausted, Propagator};

/// Default budget for end computations, in search nodes.
pub const DEFAULT_MAX_FAMILIES: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub src: usize,
    pub dst: usize,
    pub map: FinMap,
}

struct DiagramData {
    names: Vec<String>,
    sets: Vec<FinSet>,
    arrows: Vec<Arrow>,
    index: HashMap<(usize, usize, Vec<usize>), usize>,
}

/// A finite concrete category.
#[derive(Clone)]
pub struct Diagram(Arc<DiagramData>);

impl Diagram {
    fn build(names: Vec<String>, sets: Vec<FinSet>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut sorted: Vec<&String> = names.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement(w[0].clone()));
        }
        if names.len() != sets.len() {
            return Err(Error::Mismatch("one set per object".into()));
        }
        let mut index = HashMap::with_capacity(arrows.len());
        for (k, a) in arrows.iter().enumerate() {
            if a.src >= sets.len() || a.dst >= sets.len() || *a.map.dom() != sets[a.src] || *a.map.cod() != sets[a.dst] {
                return Err(Error::Mismatch(format!("arrow {k} does not match its endpoints")));
            }
            index.entry((a.src, a.dst, a.map.table().to_vec())).or_insert(k);
        }
        Ok(Diagram(Arc::new(DiagramData { names, sets, arrows, index })))
    }

    /// A diagram from explicit arrows; identities and composites must be present.
    pub fn new(names: Vec<String>, sets: Vec<FinSet>, arrows: Vec<Arrow>) -> Result<Self> {
        let d = Self::build(names, sets, arrows)?;
        for i in 0..d.len() {
            if d.find_arrow(i, i, FinMap::identity(d.set(i)).table()).is_none() {
                return Err(Error::NotFunctorial(format!("no identity on `{}`", d.name(i))));
            }
        }
        for f in d.arrows() {
            for g in d.arrows().iter().filter(|g| g.src == f.dst) {
                let gf = f.map.then(&g.map)?;
                if d.find_arrow(f.src, g.dst, gf.table()).is_none() {
                    return Err(Error::NotFunctorial(format!(
                        "composite `{}` → `{}` missing",
                        d.name(f.src),
                        d.name(g.dst)
                    )));
                }
            }
        }
        Ok(d)
    }

    /// The underlying category of a site.
    pub fn of_site(site: &Site) -> Self {
        let names = site.objects().iter().map(|o| o.name.clone()).collect();
        let sets = site.objects().iter().map(|o| o.action.carrier().clone()).collect();
        let arrows = site.arrows().map(|(src, dst, f)| Arrow { src, dst, map: f.clone() }).collect();
        Self::build(names, sets, arrows).expect("site diagram")
    }

    /// The full subcategory of finite sets on `sets`: every map is an arrow.
    pub fn full(names: Vec<String>, sets: Vec<FinSet>, limit: u64) -> Result<Self> {
        let total: u128 = sets
            .iter()
            .flat_map(|x| sets.iter().map(move |y| (y.len() as u128).saturating_pow(x.len() as u32)))
            .fold(0u128, |acc, n| acc.saturating_add(n));
        if total > limit as u128 {
            return Err(Error::SizeLimit { what: "full subcategory of sets".into(), needed: total, limit });
        }
        let mut arrows = Vec::with_capacity(total as usize);
        for (i, x) in sets.iter().enumerate() {
            for (j, y) in sets.iter().enumerate() {
                arrows.extend(finset::hom_set(x, y).into_iter().map(|map| Arrow { src: i, dst: j, map }));
            }
        }
        Self::build(names, sets, arrows)
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn set(&self, i: usize) -> &FinSet {
        &self.0.sets[i]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.0.arrows
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn find_arrow(&self, src: usize, dst: usize, table: &[usize]) -> Option<usize> {
        self.0.index.get(&(src, dst, table.to_vec())).copied()
    }
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.names == other.0.names && self.0.sets == other.0.sets && self.0.arrows == other.0.arrows)
    }
}

impl Eq for Diagram {}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Diagram{:?} ({} arrows)", self.0.names, self.0.arrows.len())
    }
}

/// A functor from a diagram into finite sets, given by its values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorData {
    diagram: Diagram,
    carriers: Vec<FinSet>,
    maps: Vec<FinMap>,
}

impl FunctorData {
    /// The inclusion of the diagram into sets.
    pub fn forgetful(d: &Diagram) -> Self {
        FunctorData {
            diagram: d.clone(),
            carriers: d.0.sets.clone(),
            maps: d.arrows().iter().map(|a| a.map.clone()).collect(),
        }
    }

    /// Checked construction: shapes, identities and composites.
    pub fn from_parts(d: &Diagram, carriers: Vec<FinSet>, maps: Vec<FinMap>) -> Result<Self> {
        if carriers.len() != d.len() || maps.len() != d.arrows().len() {
            return Err(Error::Mismatch("functor data does not cover the diagram".into()));
        }
        for (k, a) in d.arrows().iter().enumerate() {
            if *maps[k].dom() != carriers[a.src] || *maps[k].cod() != carriers[a.dst] {
                return Err(Error::NotFunctorial(format!("image of arrow {k} has the wrong endpoints")));
            }
            let is_identity = a.src == a.dst && a.map.table().iter().enumerate().all(|(i, &j)| i == j);
            if is_identity && maps[k] != FinMap::identity(&carriers[a.src]) {
                return Err(Error::NotFunctorial(format!("identity on `{}` not preserved", d.name(a.src))));
            }
        }
        for (kf, f) in d.arrows().iter().enumerate() {
            for (kg, g) in d.arrows().iter().enumerate().filter(|(_, g)| g.src == f.dst) {
                let gf = f.map.then(&g.map)?;
                if let Some(kh) = d.find_arrow(f.src, g.dst, gf.table()) {
                    if maps[kf].then(&maps[kg])? != maps[kh] {
                        return Err(Error::NotFunctorial(format!(
                            "composite `{}` → `{}` → `{}` not preserved",
                            d.name(f.src),
                            d.name(f.dst),
                            d.name(g.dst)
                        )));
                    }
                }
            }
        }
        Ok(FunctorData { diagram: d.clone(), carriers, maps })
    }

    /// The subfunctor of the forgetful functor picked out by `subsets`
    /// (ascending positions per object), with its inclusions.
    pub fn restriction(d: &Diagram, subsets: &[Vec<usize>]) -> Result<(Self, Vec<FinMap>)> {
        if subsets.len() != d.len() {
            return Err(Error::Mismatch("one subset per object".into()));
        }
        let carriers: Vec<FinSet> = (0..d.len()).map(|i| d.set(i).subset(&subsets[i])).collect();
        let inclusions: Vec<FinMap> = (0..d.len())
            .map(|i| FinMap::new(carriers[i].clone(), d.set(i).clone(), subsets[i].clone()))
            .collect::<Result<_>>()?;
        let mut maps = Vec::with_capacity(d.arrows().len());
        for a in d.arrows() {
            let image: Option<Vec<usize>> =
                subsets[a.src].iter().map(|&x| subsets[a.dst].binary_search(&a.map.at(x)).ok()).collect();
            let Some(image) = image else {
                return Err(Error::NotNatural(format!(
                    "a map `{}` → `{}` leaves the subset",
                    d.name(a.src),
                    d.name(a.dst)
                )));
            };
            maps.push(FinMap::new(carriers[a.src].clone(), carriers[a.dst].clone(), image)?);
        }
        Ok((FunctorData { diagram: d.clone(), carriers, maps }, inclusions))
    }

    /// `W ∘ G` for `G: D′ → D`.
    pub fn along(&self, g: &DiagramFunctor) -> Result<Self> {
        if g.dst != self.diagram {
            return Err(Error::SiteMismatch("functor does not land in this diagram".into()));
        }
        Ok(FunctorData {
            diagram: g.src.clone(),
            carriers: g.objects.iter().map(|&i| self.carriers[i].clone()).collect(),
            maps: g.arrows.iter().map(|&k| self.maps[k].clone()).collect(),
        })
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn carrier(&self, i: usize) -> &FinSet {
        &self.carriers[i]
    }

    pub fn map(&self, k: usize) -> &FinMap {
        &self.maps[k]
    }
}

/// A functor between concrete diagrams, given on objects and arrows.
#[derive(Clone, Debug)]
pub struct DiagramFunctor {
    src: Diagram,
    dst: Diagram,
    objects: Vec<usize>,
    arrows: Vec<usize>,
}

impl DiagramFunctor {
    /// The functor acting on objects by `objects` and on arrows by keeping
    /// the underlying map. Each source set must equal its image set.
    pub fn concrete(src: &Diagram, dst: &Diagram, objects: Vec<usize>) -> Result<Self> {
        if objects.len() != src.len() {
            return Err(Error::Mismatch("one image per object".into()));
        }
        for (i, &j) in objects.iter().enumerate() {
            if j >= dst.len() || src.set(i) != dst.set(j) {
                return Err(Error::NotFunctorial(format!("`{}` has no matching image", src.name(i))));
            }
        }
        let arrows = src
            .arrows()
            .iter()
            .map(|a| {
                dst.find_arrow(objects[a.src], objects[a.dst], a.map.table()).ok_or_else(|| {
                    Error::NotFunctorial(format!(
                        "a map `{}` → `{}` has no image",
                        src.name(a.src),
                        src.name(a.dst)
                    ))
                })
            })
            .collect::<Result<_>>()?;
        Ok(DiagramFunctor { src: src.clone(), dst: dst.clone(), objects, arrows })
    }

    /// Inclusion of a diagram whose objects appear by name in `dst`.
    pub fn inclusion(src: &Diagram, dst: &Diagram) -> Result<Self> {
        let objects = (0..src.len())
            .map(|i| dst.find(src.name(i)).ok_or_else(|| Error::SiteMismatch(format!("`{}` missing", src.name(i)))))
            .collect::<Result<_>>()?;
        Self::concrete(src, dst, objects)
    }

    pub fn identity(d: &Diagram) -> Self {
        DiagramFunctor { src: d.clone(), dst: d.clone(), objects: (0..d.len()).collect(), arrows: (0..d.arrows().len()).collect() }
    }

    pub fn then(&self, next: &DiagramFunctor) -> Result<Self> {
        if self.dst != next.src {
            return Err(Error::Mismatch("functors are not composable".into()));
        }
        Ok(DiagramFunctor {
            src: self.src.clone(),
            dst: next.dst.clone(),
            objects: self.objects.iter().map(|&i| next.objects[i]).collect(),
            arrows: self.arrows.iter().map(|&k| next.arrows[k]).collect(),
        })
    }

    pub fn src(&self) -> &Diagram {
        &self.src
    }

    pub fn dst(&self) -> &Diagram {
        &self.dst
    }

    pub fn object(&self, i: usize) -> usize {
        self.objects[i]
    }
}

/// An internal Nat `[V, W]`: its carrier of families and their components.
#[derive(Clone)]
pub struct EndObject {
    v: FunctorData,
    w: FunctorData,
    offsets: Vec<usize>,
    families: Vec<Vec<usize>>,
    carrier: FinSet,
    index: HashMap<Vec<usize>, usize>,
}

impl EndObject {
    pub fn diagram(&self) -> &Diagram {
        &self.v.diagram
    }

    pub fn v(&self) -> &FunctorData {
        &self.v
    }

    pub fn w(&self) -> &FunctorData {
        &self.w
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    /// All components of family `i`, concatenated in object order.
    pub fn family(&self, i: usize) -> &[usize] {
        &self.families[i]
    }

    /// `φ_M` of family `i` as a table.
    pub fn component(&self, i: usize, object: usize) -> &[usize] {
        &self.families[i][self.offsets[object]..self.offsets[object + 1]]
    }

    pub fn component_map(&self, i: usize, object: usize) -> FinMap {
        let t = self.component(i, object);
        FinMap::from_fn(self.v.carrier(object), self.w.carrier(object), |x| t[x])
    }

    pub fn index_of(&self, family: &[usize]) -> Option<usize> {
        self.index.get(family).copied()
    }

    /// `λ_M: [V, W] → [V M, W M]`.
    pub fn projection(&self, object: usize) -> Result<FinMap> {
        let cod = finset::exponential(self.v.carrier(object), self.w.carrier(object))?;
        let base = self.w.carrier(object).len();
        Ok(FinMap::from_fn(&self.carrier, &cod, |i| finset::encode_table(self.component(i, object), base)))
    }

    /// Re-checks the wedge condition for an arbitrary family.
    pub fn is_wedge(&self, family: &[usize]) -> bool {
        let d = self.diagram();
        family.len() == *self.offsets.last().unwrap()
            && d.arrows().iter().enumerate().all(|(k, a)| {
                (0..self.v.carriers[a.src].len()).all(|x| {
                    family[self.offsets[a.dst] + self.v.maps[k].at(x)] == self.w.maps[k].at(family[self.offsets[a.src] + x])
                })
            })
    }

    /// The identity family, when `V = W`.
    pub fn unit(&self) -> Option<usize> {
        if self.v != self.w {
            return None;
        }
        let id: Vec<usize> = (0..self.diagram().len()).flat_map(|m| 0..self.v.carriers[m].len()).collect();
        self.index_of(&id)
    }

    fn lookup(&self, family: &[usize], what: &str) -> Result<usize> {
        self.index_of(family).ok_or_else(|| Error::NotNatural(format!("{what} is not a wedge")))
    }
}

impl fmt::Debug for EndObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EndObject({} families over {:?})", self.len(), self.diagram())
    }
}

/// `[V, W]`: every family satisfying the wedge condition, canonically ordered.
pub fn internal_nat(v: &FunctorData, w: &FunctorData, limit: u64) -> Result<EndObject> {
    if v.diagram != w.diagram {
        return Err(Error::SiteMismatch("functors live over different diagrams".into()));
    }
    let d = &v.diagram;
    let mut offsets = vec![0];
    for m in 0..d.len() {
        offsets.push(offsets[m] + v.carriers[m].len());
    }
    let domains: Vec<usize> = (0..d.len()).flat_map(|m| std::iter::repeat_n(w.carriers[m].len(), v.carriers[m].len())).collect();
    let mut p = Propagator::new(domains);
    for (k, a) in d.arrows().iter().enumerate() {
        let t = p.add_table(w.maps[k].table().to_vec());
        for x in 0..v.carriers[a.src].len() {
            p.add_rule(offsets[a.src] + x, offsets[a.dst] + v.maps[k].at(x), t);
        }
    }
    let solutions = p.solutions(limit).map_err(|Exhausted(_)| {
        let needed = (0..d.len()).fold(1u128, |acc, m| {
            acc.saturating_mul((w.carriers[m].len() as u128).saturating_pow(v.carriers[m].len() as u32))
        });
        Error::SizeLimit { what: format!("end over {} objects", d.len()), needed, limit }
    })?;

    let elems: Vec<Elem> = solutions
        .iter()
        .map(|s| {
            Elem::func(
                (0..d.len())
                    .map(|m| {
                        let comp = Elem::func(
                            (0..v.carriers[m].len())
                                .map(|x| (v.carriers[m].get(x), w.carriers[m].get(s[offsets[m] + x])))
                                .collect(),
                        );
                        (Elem::sym(d.name(m)), comp)
                    })
                    .collect(),
            )
        })
        .collect();
    let mut order: Vec<usize> = (0..solutions.len()).collect();
    order.sort_by(|&i, &j| elems[i].cmp(&elems[j]));
    let carrier = FinSet::new(order.iter().map(|&i| elems[i].clone()))?;
    let mut slots: Vec<Option<Vec<usize>>> = solutions.into_iter().map(Some).collect();
    let families: Vec<Vec<usize>> = order.iter().map(|&i| slots[i].take().unwrap()).collect();
    let index = families.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
    Ok(EndObject { v: v.clone(), w: w.clone(), offsets, families, carrier, index })
}

/// `End[W]` under componentwise composition with the identity family as unit.
pub fn end_monoid(e: &EndObject) -> Result<Monoid> {
    let unit = e.unit().ok_or_else(|| Error::Mismatch("end monoid needs V = W".into()))?;
    let n = e.len();
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (phi, psi) = (e.family(i), e.family(j));
            let mut comp = Vec::with_capacity(phi.len());
            for m in 0..e.diagram().len() {
                let off = e.offsets[m];
                comp.extend((0..e.v.carriers[m].len()).map(|x| phi[off + psi[off + x]]));
            }
            table.push(e.lookup(&comp, "composite family")?);
        }
    }
    Monoid::new(e.carrier.clone(), table, unit)
}

/// The action of `End[U]` on `U M` through `λ_M`.
pub fn universal_action(e: &EndObject, end: &Monoid, object: usize) -> Result<MAction> {
    if end.carrier() != e.carrier() {
        return Err(Error::MonoidMismatch("monoid is not this end".into()));
    }
    MAction::from_fn(end, e.w.carrier(object), |phi, x| e.component(phi, object)[x])
}

/// Maps `[V, W] → [V G, W G]` by `φ ↦ (φ_{G X})_X`, landing in `target`.
pub fn restrict_end_into(e: &EndObject, g: &DiagramFunctor, target: &EndObject) -> Result<FinMap> {
    if target.v != e.v.along(g)? || target.w != e.w.along(g)? {
        return Err(Error::SiteMismatch("target is not the restricted end".into()));
    }
    let table = (0..e.len())
        .map(|i| {
            let family: Vec<usize> =
                g.objects.iter().flat_map(|&m| e.component(i, m).iter().copied()).collect();
            target.lookup(&family, "restricted family")
        })
        .collect::<Result<_>>()?;
    FinMap::new(e.carrier.clone(), target.carrier.clone(), table)
}

/// The restriction homomorphism `|G: End[W] → End[W G]`.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub end: EndObject,
    pub hom: MonoidHom,
}

pub fn restrict_end(e: &EndObject, g: &DiagramFunctor, limit: u64) -> Result<Restriction> {
    let wg = e.w.along(g)?;
    let target = internal_nat(&wg, &wg, limit)?;
    let map = restrict_end_into(e, g, &target)?;
    let hom = MonoidHom::new(end_monoid(e)?, end_monoid(&target)?, map)?;
    Ok(Restriction { end: target, hom })
}

/// `End[U]` over a site with its monoid and `ρ: A → End[U]`.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub site: Site,
    pub end: EndObject,
    pub monoid: Monoid,
    pub rho: MonoidHom,
}

impl Reconstruction {
    pub fn new(site: &Site, limit: u64) -> Result<Self> {
        let d = Diagram::of_site(site);
        let u = FunctorData::forgetful(&d);
        let end = internal_nat(&u, &u, limit)?;
        let monoid = end_monoid(&end)?;
        let rho = rho(site, &end, &monoid)?;
        Ok(Reconstruction { site: site.clone(), end, monoid, rho })
    }

    /// Pairs of monoid elements that act identically on every site object.
    pub fn kernel_pairs(&self) -> Vec<(usize, usize)> {
        self.rho.kernel_pairs()
    }

    /// Restricting the universal action along `ρ` gives back each site action.
    pub fn lift_reproduces_actions(&self) -> Result<bool> {
        for m in 0..self.site.len() {
            let lifted = universal_action(&self.end, &self.monoid, m)?;
            let back = crate::actions::restrict_action(&self.rho, &lifted)?;
            if back != *self.site.action(m) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `ρ(a) = (x ↦ a·x)_M`, a homomorphism `A → End[U]`.
pub fn rho(site: &Site, end: &EndObject, end_monoid: &Monoid) -> Result<MonoidHom> {
    if *end.diagram() != Diagram::of_site(site) || end.v != end.w || end.v != FunctorData::forgetful(end.diagram()) {
        return Err(Error::SiteMismatch("end is not End[U] over this site".into()));
    }
    let a = site.monoid();
    let table = (0..a.len())
        .map(|g| {
            let family: Vec<usize> =
                (0..site.len()).flat_map(|m| (0..site.action(m).len()).map(move |x| site.action(m).act(g, x))).collect();
            end.lookup(&family, "act-by-a family")
        })
        .collect::<Result<_>>()?;
    MonoidHom::new(a.clone(), end_monoid.clone(), FinMap::new(a.carrier().clone(), end.carrier.clone(), table)?)
}

/// `[α, U]: End[U] → [V, U]`, restricting each family along `α: V → U`.
#[derive(Clone, Debug)]
pub struct Precomposition {
    pub nat: EndObject,
    pub map: FinMap,
    /// `λ_M ∘ [α, U] = [α_M, U M] ∘ λ_M` for every object.
    pub square_commutes: bool,
}

pub fn precompose(end_u: &EndObject, v: &FunctorData, alpha: &[FinMap], limit: u64) -> Result<Precomposition> {
    let d = end_u.diagram();
    if v.diagram != *d {
        return Err(Error::SiteMismatch("subfunctor over another site".into()));
    }
    if alpha.len() != d.len() || (0..d.len()).any(|m| *alpha[m].dom() != v.carriers[m] || *alpha[m].cod() != end_u.v.carriers[m]) {
        return Err(Error::Mismatch("inclusions do not match the functors".into()));
    }
    let nat = internal_nat(v, &end_u.w, limit)?;
    let table = (0..end_u.len())
        .map(|i| {
            let family: Vec<usize> = (0..d.len())
                .flat_map(|m| alpha[m].table().iter().map(move |&x| end_u.component(i, m)[x]))
                .collect();
            nat.lookup(&family, "restricted family")
        })
        .collect::<Result<_>>()?;
    let map = FinMap::new(end_u.carrier.clone(), nat.carrier.clone(), table)?;
    let mut square_commutes = true;
    for (m, a) in alpha.iter().enumerate() {
        let top = map.then(&nat.projection(m)?)?;
        let bottom = end_u.projection(m)?.then(&finset::precompose(a, &end_u.w.carriers[m])?)?;
        square_commutes &= top == bottom;
    }
    Ok(Precomposition { nat, map, square_commutes })
}

/// The full subcategory of sets on the distinct carriers of a site, with the
/// object map `U` sending each site object to its carrier.
pub fn base_diagram(sets: &[FinSet], limit: u64) -> Result<Diagram> {
    let mut distinct: Vec<FinSet> = Vec::new();
    for s in sets {
        if !distinct.contains(s) {
            distinct.push(s.clone());
        }
    }
    let names = (0..distinct.len()).map(|i| format!("X{i}")).collect();
    Diagram::full(names, distinct, limit)
}

fn carrier_functor(src: &Diagram, base: &Diagram) -> Result<DiagramFunctor> {
    let objects = (0..src.len())
        .map(|i| {
            (0..base.len())
                .find(|&j| base.set(j) == src.set(i))
                .ok_or_else(|| Error::SiteMismatch(format!("carrier of `{}` is not a base set", src.name(i))))
        })
        .collect::<Result<_>>()?;
    DiagramFunctor::concrete(src, base, objects)
}

/// Everything a stabilizer-through-ends computation needs for one site,
/// computed once and shared across subfunctors.
#[derive(Clone, Debug)]
pub struct TannakianContext {
    pub reconstruction: Reconstruction,
    pub base: Diagram,
    pub end_base: EndObject,
    /// `(|U) η ε: A → End[U]`.
    pub trivial: FinMap,
    limit: u64,
}

impl TannakianContext {
    pub fn new(site: &Site, limit: u64) -> Result<Self> {
        let reconstruction = Reconstruction::new(site, limit)?;
        let d = reconstruction.end.diagram().clone();
        let sets: Vec<FinSet> = (0..d.len()).map(|i| d.set(i).clone()).collect();
        let base = base_diagram(&sets, limit)?;
        let c = FunctorData::forgetful(&base);
        let end_base = internal_nat(&c, &c, limit)?;
        let restrict_u = restrict_end_into(&end_base, &carrier_functor(&d, &base)?, &reconstruction.end)?;
        let a = site.monoid();
        let epsilon = FinMap::terminal(a.carrier());
        let eta_at = end_base.unit().ok_or_else(|| Error::NotNatural("identity family missing".into()))?;
        let eta = FinMap::constant(&FinSet::singleton(), end_base.carrier(), eta_at);
        let trivial = epsilon.then(&eta)?.then(&restrict_u)?;
        Ok(TannakianContext { reconstruction, base, end_base, trivial, limit })
    }

    pub fn site(&self) -> &Site {
        &self.reconstruction.site
    }

    pub fn diagram(&self) -> &Diagram {
        self.reconstruction.end.diagram()
    }

    /// Positions of the equalizer of `[α, U] ∘ ρ` and `[α, U] ∘ (|U) η ε`.
    pub fn stabilizer_positions(&self, subsets: &[Vec<usize>]) -> Result<Vec<usize>> {
        let (v, alpha) = FunctorData::restriction(self.diagram(), subsets)?;
        let pre = precompose(&self.reconstruction.end, &v, &alpha, self.limit)?;
        let via_rho = self.reconstruction.rho.map().then(&pre.map)?;
        let via_trivial = self.trivial.then(&pre.map)?;
        Ok(finset::equalizer(&via_rho, &via_trivial)?.positions().to_vec())
    }
}

/// Outcome of the two identities relating the ends over a site and over
/// its underlying sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AugmentationReport {
    /// `(|E)(|U) = id` on `End[C]`.
    pub roundtrip_is_identity: bool,
    /// `(|U) η ε = ∫ curry(ε ⊗ U M)`.
    pub trivial_path_matches: bool,
}

impl AugmentationReport {
    pub fn holds(&self) -> bool {
        self.roundtrip_is_identity && self.trivial_path_matches
    }
}

/// Checks both identities elementwise. The site is extended by `E X` for
/// every base set so that `E` lands in it.
pub fn augmentation_diagram_check(m: &Monoid, site: &Site, base_sets: &[FinSet], limit: u64) -> Result<AugmentationReport> {
    if site.monoid() != m {
        return Err(Error::MonoidMismatch("site is over another monoid".into()));
    }
    let base = base_diagram(base_sets, limit)?;
    let c = FunctorData::forgetful(&base);
    let end_base = internal_nat(&c, &c, limit)?;

    let mut objects: Vec<(String, MAction)> =
        site.objects().iter().map(|o| (o.name.clone(), o.action.clone())).collect();
    objects.extend((0..base.len()).map(|i| (format!("E({})", base.name(i)), trivial_action(m, base.set(i)))));
    let plus = Site::new(m, objects)?;
    let dplus = Diagram::of_site(&plus);
    let uplus = FunctorData::forgetful(&dplus);
    let end_plus = internal_nat(&uplus, &uplus, limit)?;
    let g_u = carrier_functor(&dplus, &base)?;
    let g_e = DiagramFunctor::concrete(&base, &dplus, (0..base.len()).map(|i| site.len() + i).collect())?;
    let there = restrict_end_into(&end_base, &g_u, &end_plus)?;
    let back = restrict_end_into(&end_plus, &g_e, &end_base)?;
    let roundtrip_is_identity = there.then(&back)? == FinMap::identity(end_base.carrier());

    let recon = Reconstruction::new(site, limit)?;
    let d = recon.end.diagram();
    let restrict_u = restrict_end_into(&end_base, &carrier_functor(d, &base)?, &recon.end)?;
    let eta = end_base.unit().ok_or_else(|| Error::NotNatural("identity family missing".into()))?;
    let trivial = FinMap::terminal(m.carrier())
        .then(&FinMap::constant(&FinSet::singleton(), end_base.carrier(), eta))?
        .then(&restrict_u)?;
    let mut trivial_path_matches = true;
    for k in 0..site.len() {
        let x = d.set(k);
        let proj = FinMap::from_fn(&finset::product(m.carrier(), x).set, x, |p| p % x.len().max(1));
        let curried = finset::curry(&proj, m.carrier(), x)?;
        for a in 0..m.len() {
            let expected = decode_table(curried.at(a), x.len(), x.len());
            trivial_path_matches &= recon.end.component(trivial.at(a), k) == expected.as_slice();
        }
    }
    Ok(AugmentationReport { roundtrip_is_identity, trivial_path_matches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{canonical_site, free_action, SiteSpec};
    use crate::fixtures;
    use crate::monoid::trivial_monoid;

    const LIMIT: u64 = DEFAULT_MAX_FAMILIES;

    fn free_site(m: &Monoid) -> Site {
        Site::new(m, vec![("F(1)".into(), free_action(m, &FinSet::singleton()))]).unwrap()
    }

    fn end_u(site: &Site) -> EndObject {
        let d = Diagram::of_site(site);
        let u = FunctorData::forgetful(&d);
        internal_nat(&u, &u, LIMIT).unwrap()
    }

    #[test]
    fn internal_nat_examples() {
        let z2 = fixtures::z2();
        let pt = Site::new(&z2, vec![("E(1)".into(), trivial_action(&z2, &FinSet::singleton()))]).unwrap();
        assert_eq!(end_u(&pt).len(), 1);
        assert_eq!(end_u(&free_site(&z2)).len(), 2);
        assert_eq!(end_u(&free_site(&fixtures::s3())).len(), 6);
    }

    #[test]
    fn internal_nat_matches_product_filter() {
        let s3 = fixtures::s3();
        let site = canonical_site(&s3, &"cosets".parse().unwrap()).unwrap();
        // drop the 6-element objects so the product stays small
        let small: Vec<(String, MAction)> = site
            .objects()
            .iter()
            .filter(|o| o.action.len() <= 3)
            .map(|o| (o.name.clone(), o.action.clone()))
            .collect();
        let site = Site::new(&s3, small).unwrap();
        let e = end_u(&site);
        let d = e.diagram().clone();
        let sizes: Vec<usize> = (0..d.len()).map(|m| d.set(m).len()).collect();
        let total: usize = sizes.iter().sum();
        let bases: Vec<usize> = sizes.iter().flat_map(|&n| std::iter::repeat_n(n, n)).collect();
        let count: usize = bases.iter().product();
        let mut brute = 0;
        let mut digits = vec![0; total];
        for _ in 0..count {
            if e.is_wedge(&digits) {
                assert!(e.index_of(&digits).is_some());
                brute += 1;
            }
            for k in (0..total).rev() {
                digits[k] += 1;
                if digits[k] < bases[k] {
                    break;
                }
                digits[k] = 0;
            }
        }
        assert_eq!(brute, e.len());
        assert!((0..e.len()).all(|i| e.is_wedge(e.family(i))));
    }

    #[test]
    fn end_monoid_examples() {
        let z2 = fixtures::z2();
        let pt = Site::new(&z2, vec![("E(1)".into(), trivial_action(&z2, &FinSet::singleton()))]).unwrap();
        assert_eq!(end_monoid(&end_u(&pt)).unwrap().len(), 1);
        let e = end_monoid(&end_u(&free_site(&z2))).unwrap();
        assert!(e.len() == 2 && e.is_group());
        let e = end_monoid(&end_u(&free_site(&fixtures::s3()))).unwrap();
        assert!(e.len() == 6 && e.is_group() && !e.is_commutative());
    }

    #[test]
    fn projections_are_homomorphisms() {
        let site = canonical_site(&fixtures::s3(), &"free+cosets".parse().unwrap()).unwrap();
        let e = end_u(&site);
        let m = end_monoid(&e).unwrap();
        for obj in 0..site.len() {
            let unit = e.component(m.unit(), obj);
            assert!(unit.iter().enumerate().all(|(i, &j)| i == j));
            for a in 0..m.len() {
                for b in 0..m.len() {
                    let (pa, pb) = (e.component(a, obj), e.component(b, obj));
                    let composed: Vec<usize> = pb.iter().map(|&x| pa[x]).collect();
                    assert_eq!(e.component(m.mul(a, b), obj), composed.as_slice());
                }
            }
        }
    }

    #[test]
    fn end_monoid_requires_equal_functors() {
        let site = free_site(&fixtures::z2());
        let d = Diagram::of_site(&site);
        let u = FunctorData::forgetful(&d);
        let (v, _) = FunctorData::restriction(&d, &[vec![]]).unwrap();
        let nat = internal_nat(&v, &u, LIMIT).unwrap();
        assert_eq!(nat.len(), 1);
        assert!(end_monoid(&nat).is_err());
    }

    #[test]
    fn restriction_examples() {
        let site = canonical_site(&fixtures::s3(), &"free+cosets".parse().unwrap()).unwrap();
        let e = end_u(&site);
        let d = e.diagram().clone();
        let id = restrict_end(&e, &DiagramFunctor::identity(&d), LIMIT).unwrap();
        assert!((0..e.len()).all(|i| id.hom.at(i) == i));

        // one-object sub-site: restriction is the projection onto that object
        let f1 = Diagram::of_site(&free_site(&fixtures::s3()));
        let g = DiagramFunctor::inclusion(&f1, &d).unwrap();
        let r = restrict_end(&e, &g, LIMIT).unwrap();
        let obj = d.find("F(1)").unwrap();
        for i in 0..e.len() {
            assert_eq!(r.end.component(r.hom.at(i), 0), e.component(i, obj));
        }
    }

    #[test]
    fn restriction_is_functorial() {
        let s3 = fixtures::s3();
        let big = canonical_site(&s3, &"free+cosets".parse().unwrap()).unwrap();
        let mid_objects: Vec<(String, MAction)> =
            big.objects().iter().take(3).map(|o| (o.name.clone(), o.action.clone())).collect();
        let mid = Site::new(&s3, mid_objects).unwrap();
        let small = free_site(&s3);
        let (db, dm, ds) = (Diagram::of_site(&big), Diagram::of_site(&mid), Diagram::of_site(&small));
        let g1 = DiagramFunctor::inclusion(&dm, &db).unwrap();
        let g2 = DiagramFunctor::inclusion(&ds, &dm).unwrap();
        let e = end_u(&big);
        let step1 = restrict_end(&e, &g1, LIMIT).unwrap();
        let step2 = restrict_end(&step1.end, &g2, LIMIT).unwrap();
        let direct = restrict_end(&e, &g2.then(&g1).unwrap(), LIMIT).unwrap();
        assert_eq!(step1.hom.then(&step2.hom).unwrap().map().table(), direct.hom.map().table());
    }

    #[test]
    fn rho_examples() {
        let t = trivial_monoid();
        let r = Reconstruction::new(&free_site(&t), LIMIT).unwrap();
        assert_eq!(r.monoid.len(), 1);
        for m in [fixtures::z2(), fixtures::z3(), fixtures::s3(), fixtures::e2()] {
            let r = Reconstruction::new(&free_site(&m), LIMIT).unwrap();
            assert!(r.rho.is_bijective());
            assert!(r.lift_reproduces_actions().unwrap());
        }
        let s3 = fixtures::s3();
        let top = Site::new(&s3, vec![("E(1)".into(), trivial_action(&s3, &FinSet::singleton()))]).unwrap();
        let r = Reconstruction::new(&top, LIMIT).unwrap();
        assert_eq!(r.kernel_pairs().len(), 15);
        assert!(r.lift_reproduces_actions().unwrap());
    }

    #[test]
    fn rho_is_injective_when_free_object_present() {
        for (_, m) in fixtures::named_monoids().into_iter().filter(|(_, m)| m.len() <= 6) {
            let site = canonical_site(&m, &SiteSpec::default_for(&m)).unwrap();
            let r = Reconstruction::new(&site, LIMIT).unwrap();
            assert!(r.rho.is_injective());
        }
    }

    #[test]
    fn augmentation_examples() {
        for m in [fixtures::z2(), trivial_monoid(), fixtures::s3(), fixtures::e2()] {
            let site = canonical_site(&m, &SiteSpec::default_for(&m)).unwrap();
            let sets: Vec<FinSet> = site.objects().iter().map(|o| o.action.carrier().clone()).collect();
            let r = augmentation_diagram_check(&m, &site, &sets, LIMIT).unwrap();
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn precompose_examples() {
        let site = canonical_site(&fixtures::s3(), &"free+cosets".parse().unwrap()).unwrap();
        let e = end_u(&site);
        let d = e.diagram().clone();
        let whole: Vec<Vec<usize>> = (0..d.len()).map(|m| (0..d.set(m).len()).collect()).collect();
        let (v, alpha) = FunctorData::restriction(&d, &whole).unwrap();
        let p = precompose(&e, &v, &alpha, LIMIT).unwrap();
        assert!(p.map.is_bijective() && p.square_commutes);

        let empty = vec![Vec::new(); d.len()];
        let (v, alpha) = FunctorData::restriction(&d, &empty).unwrap();
        let p = precompose(&e, &v, &alpha, LIMIT).unwrap();
        assert_eq!(p.nat.len(), 1);
        assert!(p.square_commutes);
    }

    #[test]
    fn non_natural_subset_is_rejected() {
        let site = free_site(&fixtures::z2());
        let d = Diagram::of_site(&site);
        assert!(matches!(FunctorData::restriction(&d, &[vec![0]]), Err(Error::NotNatural(_))));
    }

    #[test]
    fn size_guard_trips() {
        let site = free_site(&fixtures::s3());
        let d = Diagram::of_site(&site);
        let u = FunctorData::forgetful(&d);
        let err = internal_nat(&u, &u, 3).unwrap_err();
        assert!(matches!(err, Error::SizeLimit { limit: 3, needed: 46656, .. }));
        assert!(Diagram::full(vec!["X".into()], vec![FinSet::range(6)], 1000).is_err());
    }

    #[test]
    fn empty_site_end_is_terminal() {
        let site = Site::new(&fixtures::z3(), vec![]).unwrap();
        let ctx = TannakianContext::new(&site, LIMIT).unwrap();
        assert_eq!(ctx.reconstruction.end.len(), 1);
        assert_eq!(ctx.stabilizer_positions(&[]).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn from_parts_checks_composites() {
        let site = canonical_site(&fixtures::z2(), &"free+trivial".parse().unwrap()).unwrap();
        let d = Diagram::of_site(&site);
        let u = FunctorData::forgetful(&d);
        assert_eq!(FunctorData::from_parts(&d, u.carriers.clone(), u.maps.clone()).unwrap(), u);
        let mut broken = u.maps.clone();
        let k = d.arrows().iter().position(|a| a.src == 0 && a.dst == 0 && a.map.at(0) != 0).unwrap();
        broken[k] = FinMap::constant(d.set(0), d.set(0), 0);
        assert!(matches!(FunctorData::from_parts(&d, u.carriers.clone(), broken), Err(Error::NotFunctorial(_))));
    }
}
