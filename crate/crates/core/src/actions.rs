//! Finite monoid actions: the Eilenberg–Moore category of `A × −`.
//!
//! An [`MAction`] is a set with an associative, unital action table and an
//! [`EquivariantMap`] commutes with the actions. The functors that appear in
//! the invariant computations are all here:
//!
//! - `U` forgets the action ([`MAction::carrier`]),
//! - `F` builds free actions ([`free_action`]),
//! - `E` equips a set with the trivial action ([`trivial_action`]),
//! - `H` restricts along a homomorphism ([`restrict_action`]),
//! - `Γ` takes fixed points, right adjoint to `E` ([`fixed_points`]),
//! - `K` coinduces, right adjoint to `H` ([`coinduct`]).
//!
//! A [`Site`] is a finite full subcategory of actions; its morphisms are
//! always derived by exhaustive enumeration.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::finset::{self, Elem, Equalizer, FinMap, FinSet};
use crate::monoid::{self, Monoid, MonoidHom, Submonoid};
use crate::search::Propagator;

/// A finite `A`-action `r: A × X → X`.
#[derive(Clone, PartialEq, Eq)]
pub struct MAction {
    monoid: Monoid,
    carrier: FinSet,
    table: Arc<[usize]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionViolation {
    #[error("{a}·({b}·{x}) ≠ ({a}{b})·{x}")]
    Associativity { a: String, b: String, x: String },
    #[error("{unit}·{x} = {got}, expected {x}")]
    Unit { unit: String, x: String, got: String },
}

impl MAction {
    /// Builds and validates an action; `table[a * |X| + x]` is `a·x`.
    pub fn new(monoid: Monoid, carrier: FinSet, table: Vec<usize>) -> Result<Self> {
        let m = Self::new_unchecked(monoid, carrier, table)?;
        validate_action(&m)?;
        Ok(m)
    }

    pub fn new_unchecked(monoid: Monoid, carrier: FinSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != monoid.len() * carrier.len() {
            return Err(Error::Mismatch(format!(
                "action table has {} cells, expected {}",
                table.len(),
                monoid.len() * carrier.len()
            )));
        }
        if table.iter().any(|&x| x >= carrier.len()) {
            return Err(Error::Mismatch("action table leaves the carrier".into()));
        }
        Ok(MAction { monoid, carrier, table: table.into() })
    }

    pub fn from_fn(monoid: &Monoid, carrier: &FinSet, act: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let n = carrier.len();
        let table = (0..monoid.len() * n).map(|k| act(k / n.max(1), k % n.max(1))).collect();
        Self::new(monoid.clone(), carrier.clone(), table)
    }

    /// An action from its structure map `A × X → X`.
    pub fn from_map(monoid: &Monoid, r: &FinMap) -> Result<Self> {
        if *r.dom() != finset::product(monoid.carrier(), r.cod()).set {
            return Err(Error::NotAProduct);
        }
        Self::new(monoid.clone(), r.cod().clone(), r.table().to_vec())
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    /// The underlying set, `U M`.
    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn act(&self, a: usize, x: usize) -> usize {
        self.table[a * self.carrier.len() + x]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// The structure map `r: A × X → X`.
    pub fn action_map(&self) -> FinMap {
        let dom = finset::product(self.monoid.carrier(), &self.carrier).set;
        FinMap::from_fn(&dom, &self.carrier, |i| self.table[i])
    }

    /// `x ↦ a·x` as a self-map of the carrier.
    pub fn translation(&self, a: usize) -> FinMap {
        FinMap::from_fn(&self.carrier, &self.carrier, |x| self.act(a, x))
    }
}

impl fmt::Debug for MAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MAction{:?}", self.carrier)
    }
}

/// Checks `a·(b·x) = (ab)·x` and `e·x = x`.
pub fn validate_action(m: &MAction) -> Result<(), ActionViolation> {
    let a_ = &m.monoid;
    let e = a_.unit();
    for x in 0..m.len() {
        let got = m.act(e, x);
        if got != x {
            return Err(ActionViolation::Unit {
                unit: a_.label(e),
                x: m.carrier.get(x).to_string(),
                got: m.carrier.get(got).to_string(),
            });
        }
    }
    for a in 0..a_.len() {
        for b in 0..a_.len() {
            let ab = a_.mul(a, b);
            for x in 0..m.len() {
                if m.act(a, m.act(b, x)) != m.act(ab, x) {
                    return Err(ActionViolation::Associativity {
                        a: a_.label(a),
                        b: a_.label(b),
                        x: m.carrier.get(x).to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// `F X = (A × X, μ_X)`: `a·(b, x) = (ab, x)`.
pub fn free_action(m: &Monoid, x: &FinSet) -> MAction {
    let carrier = finset::product(m.carrier(), x).set;
    let n = x.len();
    MAction::from_fn(m, &carrier, |a, p| m.mul(a, p / n) * n + p % n).expect("free action")
}

/// `E X = (X, e_X)`: every element acts as the identity.
pub fn trivial_action(m: &Monoid, x: &FinSet) -> MAction {
    MAction::from_fn(m, x, |_, p| p).expect("trivial action")
}

/// `A` acting on its own carrier by left multiplication.
pub fn regular_action(m: &Monoid) -> MAction {
    MAction::from_fn(m, m.carrier(), |a, b| m.mul(a, b)).expect("regular action")
}

/// `H M = (X, r_M ∘ (h × X))`: restriction along `h: B → A`.
pub fn restrict_action(h: &MonoidHom, action: &MAction) -> Result<MAction> {
    if h.dst() != action.monoid() {
        return Err(Error::MonoidMismatch("action is not over the homomorphism's target".into()));
    }
    let n = action.len();
    let table = (0..h.src().len() * n).map(|k| action.act(h.at(k / n), k % n)).collect();
    MAction::new_unchecked(h.src().clone(), action.carrier.clone(), table)
}

/// Left cosets `G/H` with the translation action. Requires a group.
pub fn coset_action(g: &Monoid, h: &Submonoid) -> Result<MAction> {
    if let Some(w) = monoid::hopf_witness(g) {
        return Err(Error::NotHopf { witness: g.label(w) });
    }
    if h.parent() != g {
        return Err(Error::MonoidMismatch("subgroup of a different monoid".into()));
    }
    let n = g.len();
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    let mut owner = vec![usize::MAX; n];
    for a in 0..n {
        if owner[a] != usize::MAX {
            continue;
        }
        let mut c: Vec<usize> = h.positions().iter().map(|&k| g.mul(a, k)).collect();
        c.sort_unstable();
        for &x in &c {
            owner[x] = cosets.len();
        }
        cosets.push(c);
    }
    let label = |c: &[usize]| format!("{{{}}}", c.iter().map(|&x| g.label(x)).collect::<Vec<_>>().join(","));
    let carrier = FinSet::from_symbols(cosets.iter().map(|c| label(c)))?;
    let pos: Vec<usize> = cosets.iter().map(|c| carrier.index_of(&Elem::sym(label(c))).unwrap()).collect();
    let mut rep = vec![0; cosets.len()];
    for (k, c) in cosets.iter().enumerate() {
        rep[pos[k]] = c[0];
    }
    MAction::from_fn(g, &carrier, |a, p| pos[owner[g.mul(a, rep[p])]])
}

/// A map commuting with the actions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquivariantMap {
    src: MAction,
    dst: MAction,
    map: FinMap,
}

impl EquivariantMap {
    pub fn new(src: MAction, dst: MAction, map: FinMap) -> Result<Self> {
        if src.monoid != dst.monoid {
            return Err(Error::MonoidMismatch("equivariant map between different monoids".into()));
        }
        if *map.dom() != src.carrier || *map.cod() != dst.carrier {
            return Err(Error::Mismatch("map does not go between the carriers".into()));
        }
        if !is_equivariant(&src, &dst, &map) {
            return Err(Error::NotNatural("map does not commute with the actions".into()));
        }
        Ok(EquivariantMap { src, dst, map })
    }

    pub fn src(&self) -> &MAction {
        &self.src
    }

    pub fn dst(&self) -> &MAction {
        &self.dst
    }

    pub fn map(&self) -> &FinMap {
        &self.map
    }

    pub fn then(&self, next: &EquivariantMap) -> Result<EquivariantMap> {
        if self.dst != next.src {
            return Err(Error::Mismatch("composite of equivariant maps".into()));
        }
        Ok(EquivariantMap { src: self.src.clone(), dst: next.dst.clone(), map: self.map.then(&next.map)? })
    }
}

pub fn is_equivariant(src: &MAction, dst: &MAction, f: &FinMap) -> bool {
    (0..src.monoid.len()).all(|a| (0..src.len()).all(|x| f.at(src.act(a, x)) == dst.act(a, f.at(x))))
}

/// Tables of all equivariant maps `M → N`, in lexicographic order.
pub(crate) fn equivariant_tables(src: &MAction, dst: &MAction) -> Vec<Vec<usize>> {
    let mut p = Propagator::new(vec![dst.len(); src.len()]);
    for a in 0..src.monoid.len() {
        let t = p.add_table((0..dst.len()).map(|y| dst.act(a, y)).collect());
        for x in 0..src.len() {
            p.add_rule(x, src.act(a, x), t);
        }
    }
    p.solutions(u64::MAX).expect("unbounded search")
}

/// All equivariant maps `M → N` in canonical order.
pub fn equivariant_maps(src: &MAction, dst: &MAction) -> Result<Vec<EquivariantMap>> {
    if src.monoid != dst.monoid {
        return Err(Error::MonoidMismatch("equivariant maps between different monoids".into()));
    }
    Ok(equivariant_tables(src, dst)
        .into_iter()
        .map(|t| EquivariantMap {
            src: src.clone(),
            dst: dst.clone(),
            map: FinMap::from_fn(&src.carrier, &dst.carrier, |x| t[x]),
        })
        .collect())
}

/// `Γ M`: the elements every monoid element fixes, with their inclusion.
pub fn fixed_points(m: &MAction) -> Equalizer {
    let positions: Vec<usize> =
        (0..m.len()).filter(|&x| (0..m.monoid.len()).all(|a| m.act(a, x) == x)).collect();
    let set = m.carrier.subset(&positions);
    let inclusion = FinMap::new(set.clone(), m.carrier.clone(), positions).expect("subset inclusion");
    Equalizer { set, inclusion }
}

/// Outcome of an adjunction check: the two hom-set sizes and whether the
/// transposition map is a bijection natural in both variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub left: usize,
    pub right: usize,
    pub bijective: bool,
    pub natural: bool,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.left == self.right && self.bijective && self.natural
    }
}

fn is_bijection(forward: &[usize], backward: &[usize]) -> bool {
    forward.len() == backward.len()
        && forward.iter().enumerate().all(|(i, &j)| j < backward.len() && backward[j] == i)
}

/// Checks `E ⊣ Γ`: equivariant maps `E X → M` correspond to maps `X → Γ M`.
pub fn adjunction_check_e_gamma(m: &Monoid, x: &FinSet, target: &MAction) -> Result<AdjunctionReport> {
    if target.monoid() != m {
        return Err(Error::MonoidMismatch("action is not over the given monoid".into()));
    }
    let ex = trivial_action(m, x);
    let gamma = fixed_points(target);
    let left = equivariant_tables(&ex, target);
    let right = finset::hom_set(x, &gamma.set);
    let incl = gamma.inclusion.table();
    let position_in_gamma = |y: usize| incl.binary_search(&y).ok();

    // transpose: corestrict an equivariant map to the fixed points
    let transpose = |t: &[usize]| -> Option<Vec<usize>> { t.iter().map(|&y| position_in_gamma(y)).collect() };
    let index_right = |t: &[usize]| finset::encode_table(t, gamma.set.len());
    let forward: Option<Vec<usize>> = left.iter().map(|t| transpose(t).map(|u| index_right(&u))).collect();
    let Some(forward) = forward else {
        return Ok(AdjunctionReport { left: left.len(), right: right.len(), bijective: false, natural: false });
    };
    let backward: Vec<usize> = right
        .iter()
        .map(|g| {
            let t: Vec<usize> = g.table().iter().map(|&k| incl[k]).collect();
            left.binary_search(&t).unwrap_or(usize::MAX)
        })
        .collect();
    let bijective = is_bijection(&forward, &backward);

    // naturality in X (precompose with u: X → X) and in M (postcompose with ψ: M → M)
    let endos_x = finset::hom_set(x, x);
    let endos_m = equivariant_tables(target, target);
    let mut natural = true;
    'outer: for (i, t) in left.iter().enumerate() {
        let theta = decode(forward[i], x.len(), gamma.set.len());
        for u in endos_x.iter().take(16) {
            for psi in endos_m.iter().take(16) {
                let moved: Vec<usize> = u.table().iter().map(|&p| psi[t[p]]).collect();
                let Some(lhs) = transpose(&moved) else {
                    natural = false;
                    break 'outer;
                };
                let rhs: Vec<usize> = u
                    .table()
                    .iter()
                    .map(|&p| position_in_gamma(psi[incl[theta[p]]]).unwrap_or(usize::MAX))
                    .collect();
                if lhs != rhs {
                    natural = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(AdjunctionReport { left: left.len(), right: right.len(), bijective, natural })
}

fn decode(index: usize, len: usize, base: usize) -> Vec<usize> {
    finset::decode_table(index, len, base)
}

/// `K N`: the right adjoint of restriction along `h: B → A`.
///
/// The carrier is the set of `B`-equivariant maps `φ: A → N`, where `B` acts
/// on `A` through `h` and left multiplication, and `A` acts by
/// `(a·φ)(a') = φ(a'a)`. Elements are encoded as function tables.
pub fn coinduct(h: &MonoidHom, n: &MAction) -> Result<MAction> {
    if h.src() != n.monoid() {
        return Err(Error::MonoidMismatch("action is not over the homomorphism's source".into()));
    }
    let a = h.dst();
    let restricted_regular = restrict_action(h, &regular_action(a))?;
    let tables = equivariant_tables(&restricted_regular, n);
    let elems: Vec<Elem> = tables
        .iter()
        .map(|t| FinMap::from_fn(a.carrier(), n.carrier(), |k| t[k]).to_elem())
        .collect();
    let carrier = FinSet::new(elems.iter().cloned())?;
    let pos: Vec<usize> = elems.iter().map(|e| carrier.index_of(e).unwrap()).collect();
    let mut table_at = vec![0; tables.len()];
    for (k, &p) in pos.iter().enumerate() {
        table_at[p] = k;
    }
    let lookup = |t: &[usize]| pos[tables.binary_search_by(|probe| probe.as_slice().cmp(t)).expect("closed under the action")];
    MAction::from_fn(a, &carrier, |g, p| {
        let phi = &tables[table_at[p]];
        let moved: Vec<usize> = (0..a.len()).map(|k| phi[a.mul(k, g)]).collect();
        lookup(&moved)
    })
}

/// Evaluation at the unit, `H K N → N`: the counit of restriction ⊣ coinduction.
pub fn coinduct_counit(h: &MonoidHom, n: &MAction) -> Result<EquivariantMap> {
    let k = coinduct(h, n)?;
    let hk = restrict_action(h, &k)?;
    let e = h.dst().unit();
    let map = FinMap::from_fn(k.carrier(), n.carrier(), |p| {
        let phi = k.carrier().get(p);
        let table = phi.as_func().expect("function element");
        n.carrier().index_of(&table[e].1).expect("value in N")
    });
    EquivariantMap::new(hk, n.clone(), map)
}

/// Checks restriction ⊣ coinduction: `B`-maps `H M → N` correspond to
/// `A`-maps `M → K N` via `f ↦ (x ↦ (a ↦ f(a·x)))`.
pub fn adjunction_check_restrict_coinduct(h: &MonoidHom, m: &MAction, n: &MAction) -> Result<AdjunctionReport> {
    if h.dst() != m.monoid() || h.src() != n.monoid() {
        return Err(Error::MonoidMismatch("actions do not match the homomorphism".into()));
    }
    let a = h.dst();
    let hm = restrict_action(h, m)?;
    let k = coinduct(h, n)?;
    let left = equivariant_tables(&hm, n);
    let right = equivariant_tables(m, &k);

    let elem_of = |phi: Vec<usize>| FinMap::from_fn(a.carrier(), n.carrier(), |i| phi[i]).to_elem();
    let transpose = |f: &[usize]| -> Option<Vec<usize>> {
        (0..m.len()).map(|x| k.carrier().index_of(&elem_of((0..a.len()).map(|g| f[m.act(g, x)]).collect()))).collect()
    };
    let untranspose = |g: &[usize]| -> Vec<usize> {
        (0..m.len())
            .map(|x| {
                let phi = k.carrier().get(g[x]);
                n.carrier().index_of(&phi.as_func().unwrap()[a.unit()].1).unwrap()
            })
            .collect()
    };
    let forward: Option<Vec<usize>> =
        left.iter().map(|f| transpose(f).and_then(|t| right.binary_search(&t).ok())).collect();
    let Some(forward) = forward else {
        return Ok(AdjunctionReport { left: left.len(), right: right.len(), bijective: false, natural: false });
    };
    let backward: Vec<usize> =
        right.iter().map(|g| left.binary_search(&untranspose(g)).unwrap_or(usize::MAX)).collect();
    let bijective = is_bijection(&forward, &backward);

    // naturality: precompose with A-endos of M, postcompose with B-endos of N
    let endos_m = equivariant_tables(m, m);
    let endos_n = equivariant_tables(n, n);
    let k_map = |psi: &[usize], p: usize| -> usize {
        let phi = k.carrier().get(p);
        let moved: Vec<usize> = phi
            .as_func()
            .unwrap()
            .iter()
            .map(|(_, y)| psi[n.carrier().index_of(y).unwrap()])
            .collect();
        k.carrier().index_of(&elem_of(moved)).unwrap_or(usize::MAX)
    };
    let mut natural = true;
    'outer: for (i, f) in left.iter().enumerate() {
        let theta = &right[forward[i]];
        for u in endos_m.iter().take(16) {
            for psi in endos_n.iter().take(16) {
                let moved: Vec<usize> = u.iter().map(|&x| psi[f[x]]).collect();
                let lhs = transpose(&moved);
                let rhs: Vec<usize> = u.iter().map(|&x| k_map(psi, theta[x])).collect();
                if lhs.as_ref() != Some(&rhs) {
                    natural = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(AdjunctionReport { left: left.len(), right: right.len(), bijective, natural })
}

/// A named object of a site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiteObject {
    pub name: String,
    pub action: MAction,
}

struct SiteData {
    monoid: Monoid,
    objects: Vec<SiteObject>,
    homs: Vec<Vec<Vec<FinMap>>>,
}

/// A finite full subcategory of `A`-actions.
#[derive(Clone)]
pub struct Site(Arc<SiteData>);

impl Site {
    /// Builds the full subcategory on the given objects; every equivariant map
    /// between listed objects becomes a morphism.
    pub fn new(monoid: &Monoid, objects: Vec<(String, MAction)>) -> Result<Self> {
        let mut names: Vec<&str> = objects.iter().map(|(n, _)| n.as_str()).collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement(w[0].to_string()));
        }
        if let Some((name, _)) = objects.iter().find(|(_, m)| m.monoid() != monoid) {
            return Err(Error::MonoidMismatch(format!("site object `{name}` is over another monoid")));
        }
        let objects: Vec<SiteObject> =
            objects.into_iter().map(|(name, action)| SiteObject { name, action }).collect();
        let k = objects.len();
        let homs: Vec<Vec<FinMap>> = (0..k * k)
            .into_par_iter()
            .map(|ij| {
                let (s, d) = (&objects[ij / k].action, &objects[ij % k].action);
                equivariant_tables(s, d)
                    .into_iter()
                    .map(|t| FinMap::from_fn(s.carrier(), d.carrier(), |x| t[x]))
                    .collect()
            })
            .collect();
        let mut rows = vec![Vec::new(); k];
        for (ij, h) in homs.into_iter().enumerate() {
            rows[ij / k].push(h);
        }
        Ok(Site(Arc::new(SiteData { monoid: monoid.clone(), objects, homs: rows })))
    }

    pub fn monoid(&self) -> &Monoid {
        &self.0.monoid
    }

    pub fn objects(&self) -> &[SiteObject] {
        &self.0.objects
    }

    pub fn len(&self) -> usize {
        self.0.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.objects.is_empty()
    }

    pub fn action(&self, i: usize) -> &MAction {
        &self.0.objects[i].action
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.objects[i].name
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.0.objects.iter().position(|o| o.name == name)
    }

    /// Morphisms from object `i` to object `j`, in canonical order.
    pub fn homs(&self, i: usize, j: usize) -> &[FinMap] {
        &self.0.homs[i][j]
    }

    /// Every morphism as `(source, target, map)`.
    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize, &FinMap)> + '_ {
        let k = self.len();
        (0..k).flat_map(move |i| (0..k).flat_map(move |j| self.homs(i, j).iter().map(move |f| (i, j, f))))
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows().count()
    }

    /// Same objects (by name and action) as `other`.
    pub fn same_as(&self, other: &Site) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.monoid == other.0.monoid && self.0.objects == other.0.objects)
    }
}

impl fmt::Debug for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.objects.iter().map(|o| &o.name)).finish()
    }
}

/// One component of a site description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SitePart {
    /// `F(X)` for `X` of the given size; `free` means `F(1)`.
    Free(usize),
    /// `G/H` for every subgroup `H`; groups only.
    Cosets,
    /// `E(1)`.
    Trivial,
    /// Actions supplied by the caller, tagged with their source.
    Custom(String),
}

/// A `+`-separated site description such as `free+cosets`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiteSpec(pub Vec<SitePart>);

impl SiteSpec {
    /// `free+cosets` for groups, `free+trivial` otherwise.
    pub fn default_for(m: &Monoid) -> SiteSpec {
        if monoid::is_hopf(m) {
            SiteSpec(vec![SitePart::Free(1), SitePart::Cosets])
        } else {
            SiteSpec(vec![SitePart::Free(1), SitePart::Trivial])
        }
    }
}

impl FromStr for SiteSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            // custom paths may contain '+', so they swallow the remainder
            if let Some(dir) = rest.strip_prefix("custom:") {
                parts.push(SitePart::Custom(dir.to_string()));
                break;
            }
            let (head, tail) = rest.split_once('+').unwrap_or((rest, ""));
            parts.push(match head {
                "free" => SitePart::Free(1),
                "cosets" => SitePart::Cosets,
                "trivial" => SitePart::Trivial,
                other => match other.strip_prefix("free:").map(str::parse::<usize>) {
                    Some(Ok(k)) => SitePart::Free(k),
                    _ => return Err(Error::SiteSpec(s.to_string())),
                },
            });
            rest = tail;
        }
        if parts.is_empty() {
            return Err(Error::SiteSpec(s.to_string()));
        }
        Ok(SiteSpec(parts))
    }
}

impl fmt::Display for SiteSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|p| match p {
                SitePart::Free(1) => "free".to_string(),
                SitePart::Free(k) => format!("free:{k}"),
                SitePart::Cosets => "cosets".to_string(),
                SitePart::Trivial => "trivial".to_string(),
                SitePart::Custom(d) => format!("custom:{d}"),
            })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

/// Name of the coset object `G/H`.
pub fn coset_object_name(h: &Submonoid) -> String {
    format!("G/{{{}}}", h.labels().join(","))
}

/// Resolves a `custom:<src>` part to named actions.
pub type CustomLoader<'a> = dyn FnMut(&str) -> Result<Vec<(String, MAction)>> + 'a;

/// Builds the site a spec describes. Custom parts are resolved by `custom`.
pub fn canonical_site_with(m: &Monoid, spec: &SiteSpec, custom: &mut CustomLoader<'_>) -> Result<Site> {
    let mut objects = Vec::new();
    for part in &spec.0 {
        match part {
            SitePart::Free(1) => objects.push(("F(1)".to_string(), free_action(m, &FinSet::singleton()))),
            SitePart::Free(k) => objects.push((format!("F({k})"), free_action(m, &FinSet::range(*k)))),
            SitePart::Cosets => {
                for h in monoid::enumerate_subgroups(m) {
                    objects.push((coset_object_name(&h), coset_action(m, &h)?));
                }
            }
            SitePart::Trivial => objects.push(("E(1)".to_string(), trivial_action(m, &FinSet::singleton()))),
            SitePart::Custom(src) => objects.extend(custom(src)?),
        }
    }
    Site::new(m, objects)
}

/// Builds a site from built-in parts only.
pub fn canonical_site(m: &Monoid, spec: &SiteSpec) -> Result<Site> {
    canonical_site_with(m, spec, &mut |src| Err(Error::SiteSpec(format!("custom:{src} needs a loader"))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::monoid::{enumerate_homs, enumerate_subgroups, trivial_monoid};

    fn z2_swap() -> MAction {
        let z2 = fixtures::z2();
        let s = z2.position("s").unwrap();
        MAction::from_fn(&z2, &FinSet::range(2), |a, x| if a == s { 1 - x } else { x }).unwrap()
    }

    #[test]
    fn validation_examples() {
        let z2 = fixtures::z2();
        assert_eq!(validate_action(&regular_action(&z2)), Ok(()));
        assert_eq!(validate_action(&z2_swap()), Ok(()));
        let bad = MAction::new_unchecked(z2.clone(), FinSet::range(2), vec![1, 1, 1, 0]).unwrap();
        assert_eq!(
            validate_action(&bad),
            Err(ActionViolation::Unit { unit: "e".into(), x: "0".into(), got: "1".into() })
        );
    }

    #[test]
    fn free_action_examples() {
        let z2 = fixtures::z2();
        let f1 = free_action(&z2, &FinSet::singleton());
        assert_eq!(f1.len(), 2);
        let s = z2.position("s").unwrap();
        assert_eq!(f1.translation(s).table(), &[1, 0]);
        assert!(free_action(&z2, &FinSet::empty()).is_empty());
        assert_eq!(free_action(&fixtures::s3(), &FinSet::range(2)).len(), 12);
    }

    #[test]
    fn trivial_action_examples() {
        let z2 = fixtures::z2();
        let t = trivial_action(&z2, &FinSet::range(2));
        assert_eq!(t.act(z2.position("s").unwrap(), 0), 0);
        assert_eq!(t.carrier(), &FinSet::range(2));
        assert_eq!(validate_action(&trivial_action(&fixtures::s3(), &FinSet::range(3))), Ok(()));
    }

    #[test]
    fn restriction_examples() {
        let s3 = fixtures::s3();
        let nat = fixtures::natural_action(3);
        assert_eq!(restrict_action(&MonoidHom::identity(&s3), &nat).unwrap(), nat);

        let unit = crate::monoid::Submonoid::unit_only(&s3);
        let r = restrict_action(unit.inclusion(), &nat).unwrap();
        assert!((0..3).all(|x| r.act(0, x) == x));

        let c2 = enumerate_subgroups(&s3).into_iter().find(|h| h.labels() == ["(12)", "e"]).unwrap();
        let r = restrict_action(c2.inclusion(), &nat).unwrap();
        let s = r.monoid().position("(12)").unwrap();
        let labels: Vec<String> = (0..3).map(|x| r.carrier().get(r.act(s, x)).to_string()).collect();
        assert_eq!(labels, ["2", "1", "3"]);
        assert_eq!(validate_action(&r), Ok(()));
    }

    #[test]
    fn restriction_respects_composition() {
        let s3 = fixtures::s3();
        let nat = fixtures::natural_action(3);
        for g in enumerate_homs(&fixtures::z2(), &s3) {
            for h in enumerate_homs(&fixtures::z2(), &fixtures::z2()) {
                let gh = h.then(&g).unwrap();
                let lhs = restrict_action(&gh, &nat).unwrap();
                let rhs = restrict_action(&h, &restrict_action(&g, &nat).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn restriction_rejects_wrong_monoid() {
        let h = MonoidHom::identity(&fixtures::z3());
        assert!(matches!(restrict_action(&h, &z2_swap()), Err(Error::MonoidMismatch(_))));
    }

    #[test]
    fn equivariant_map_examples() {
        for g in [fixtures::z3(), fixtures::s3(), fixtures::klein()] {
            let f1 = free_action(&g, &FinSet::singleton());
            assert_eq!(equivariant_maps(&f1, &f1).unwrap().len(), g.len());
        }
        let z2 = fixtures::z2();
        let pt = trivial_action(&z2, &FinSet::singleton());
        assert_eq!(equivariant_maps(&z2_swap(), &pt).unwrap().len(), 1);
        let two = trivial_action(&z2, &FinSet::range(2));
        let maps = equivariant_maps(&z2_swap(), &two).unwrap();
        assert_eq!(maps.len(), 2);
        assert!(maps.iter().all(|f| f.map().at(0) == f.map().at(1)));
    }

    #[test]
    fn equivariant_maps_match_filtered_hom_set() {
        let s3 = fixtures::s3();
        let objects: Vec<MAction> = enumerate_subgroups(&s3)
            .iter()
            .map(|h| coset_action(&s3, h).unwrap())
            .chain([fixtures::natural_action(3)])
            .collect();
        for m in &objects {
            for n in &objects {
                let brute: Vec<FinMap> = finset::hom_set(m.carrier(), n.carrier())
                    .into_iter()
                    .filter(|f| is_equivariant(m, n, f))
                    .collect();
                let fast: Vec<FinMap> = equivariant_maps(m, n).unwrap().into_iter().map(|f| f.map).collect();
                assert_eq!(fast, brute);
            }
        }
    }

    #[test]
    fn free_forgetful_count() {
        // equivariant maps F(1) → M correspond to elements of M
        for (_, g) in fixtures::groups_up_to_6() {
            let f1 = free_action(&g, &FinSet::singleton());
            for h in enumerate_subgroups(&g) {
                let m = coset_action(&g, &h).unwrap();
                assert_eq!(equivariant_maps(&f1, &m).unwrap().len(), m.len());
            }
        }
    }

    #[test]
    fn fixed_point_examples() {
        assert!(fixed_points(&z2_swap()).set.is_empty());
        let t = trivial_action(&fixtures::z3(), &FinSet::range(3));
        assert_eq!(fixed_points(&t).set, FinSet::range(3));
        assert!(fixed_points(&fixtures::natural_action(3)).set.is_empty());
    }

    #[test]
    fn fixed_points_are_equivariant_subobject() {
        let s3 = fixtures::s3();
        for h in enumerate_subgroups(&s3) {
            let m = coset_action(&s3, &h).unwrap();
            let fp = fixed_points(&m);
            let sub = trivial_action(&s3, &fp.set);
            assert!(is_equivariant(&sub, &m, &fp.inclusion));
        }
    }

    #[test]
    fn e_gamma_examples() {
        let z2 = fixtures::z2();
        let one = FinSet::singleton();
        let r = adjunction_check_e_gamma(&z2, &one, &trivial_action(&z2, &FinSet::range(2))).unwrap();
        assert_eq!((r.left, r.right), (2, 2));
        assert!(r.holds());
        let r = adjunction_check_e_gamma(&z2, &one, &z2_swap()).unwrap();
        assert_eq!((r.left, r.right), (0, 0));
        assert!(r.holds());
        let r = adjunction_check_e_gamma(&z2, &FinSet::empty(), &z2_swap()).unwrap();
        assert_eq!((r.left, r.right), (1, 1));
        assert!(r.holds());
    }

    #[test]
    fn coinduct_along_identity_is_isomorphic() {
        for (_, m) in fixtures::core_monoids() {
            let id = MonoidHom::identity(&m);
            for n in [regular_action(&m), trivial_action(&m, &FinSet::range(2))] {
                let k = coinduct(&id, &n).unwrap();
                assert_eq!(validate_action(&k), Ok(()));
                assert_eq!(k.len(), n.len());
                let counit = coinduct_counit(&id, &n).unwrap();
                assert!(counit.map().is_bijective());
            }
        }
    }

    #[test]
    fn coinduct_from_trivial_monoid_is_all_maps() {
        let a = fixtures::z3();
        let t = trivial_monoid();
        let h = MonoidHom::from_fn(&t, &a, |_| a.unit()).unwrap();
        let x = trivial_action(&t, &FinSet::range(2));
        let k = coinduct(&h, &x).unwrap();
        assert_eq!(k.len(), 8);
        assert_eq!(validate_action(&k), Ok(()));
        // (g·φ)(a') = φ(a'g): translate a table and compare
        let g = a.position("g").unwrap();
        for p in 0..k.len() {
            let phi = k.carrier().get(p);
            let moved = k.carrier().get(k.act(g, p));
            for a1 in 0..a.len() {
                assert_eq!(moved.as_func().unwrap()[a1].1, phi.as_func().unwrap()[a.mul(a1, g)].1);
            }
        }
    }

    #[test]
    fn coinduct_of_singleton_is_singleton() {
        let s3 = fixtures::s3();
        let c2 = enumerate_subgroups(&s3).into_iter().nth(1).unwrap();
        let pt = trivial_action(c2.monoid(), &FinSet::singleton());
        assert_eq!(coinduct(c2.inclusion(), &pt).unwrap().len(), 1);
    }

    #[test]
    fn restriction_coinduction_adjunction() {
        let s3 = fixtures::s3();
        for h in enumerate_subgroups(&s3) {
            let b = h.monoid();
            let ns = [regular_action(b), trivial_action(b, &FinSet::range(2))];
            let ms = [fixtures::natural_action(3), free_action(&s3, &FinSet::singleton())];
            for n in &ns {
                for m in &ms {
                    let r = adjunction_check_restrict_coinduct(h.inclusion(), m, n).unwrap();
                    assert!(r.holds(), "{h:?} {r:?}");
                }
            }
        }
    }

    #[test]
    fn site_examples() {
        let z2 = fixtures::z2();
        let site = canonical_site(&z2, &"free+trivial".parse().unwrap()).unwrap();
        assert_eq!(site.len(), 2);
        let s3 = canonical_site(&fixtures::s3(), &"cosets".parse().unwrap()).unwrap();
        assert_eq!(s3.len(), 6);
        let z3 = canonical_site(&fixtures::z3(), &"free".parse().unwrap()).unwrap();
        assert_eq!(z3.homs(0, 0).len(), 3);
    }

    #[test]
    fn cosets_require_a_group() {
        let err = canonical_site(&fixtures::e2(), &"cosets".parse().unwrap()).unwrap_err();
        assert_eq!(err, Error::NotHopf { witness: "z".into() });
    }

    #[test]
    fn site_spec_parsing() {
        let s: SiteSpec = "free+cosets".parse().unwrap();
        assert_eq!(s.0, [SitePart::Free(1), SitePart::Cosets]);
        let s: SiteSpec = "free:2+trivial+custom:/tmp/a+b".parse().unwrap();
        assert_eq!(s.0, [SitePart::Free(2), SitePart::Trivial, SitePart::Custom("/tmp/a+b".into())]);
        assert_eq!(s.to_string(), "free:2+trivial+custom:/tmp/a+b");
        assert!("bogus".parse::<SiteSpec>().is_err());
        assert!("".parse::<SiteSpec>().is_err());
    }

    #[test]
    fn site_is_closed_under_composition() {
        let site = canonical_site(&fixtures::s3(), &"free+cosets".parse().unwrap()).unwrap();
        for (i, j, f) in site.arrows() {
            assert!(site.homs(i, i).contains(&FinMap::identity(site.action(i).carrier())));
            for g in (0..site.len()).flat_map(|k| site.homs(j, k).iter()) {
                let gf = f.then(g).unwrap();
                let k = (0..site.len()).find(|&k| site.action(k).carrier() == gf.cod()).unwrap();
                assert!(site.homs(i, k).contains(&gf));
            }
        }
    }

    #[test]
    fn duplicate_site_names_rejected() {
        let z2 = fixtures::z2();
        assert!(canonical_site(&z2, &"free+free".parse().unwrap()).is_err());
    }
}
