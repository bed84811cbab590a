//! Finite monoids, homomorphisms and the augmented monad `A × −`.
//!
//! A monoid is given by its Cayley table over a [`FinSet`]. Every monoid `A`
//! determines the monad `T = A × −` on finite sets, with multiplication
//! `m × −` and unit `u × −`; its Eilenberg–Moore category is the category of
//! `A`-actions (see [`crate::actions`]). The augmentation `T → Id` comes from
//! the unique map `A → 1`.
//!
//! In the cartesian setting a monoid is Hopf exactly when the fusion map
//! `(a, b) ↦ (a, ab)` is invertible, i.e. when it is a group, and the
//! antipode is inversion.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::finset::{self, Elem, FinMap, FinSet};

/// A finite monoid given by its multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct Monoid {
    carrier: FinSet,
    table: Arc<[usize]>,
    unit: usize,
}

/// A failed monoid axiom, naming the offending elements.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidViolation {
    #[error("({a}·{b})·{c} = {lhs} but {a}·({b}·{c}) = {rhs}")]
    Associativity { a: String, b: String, c: String, lhs: String, rhs: String },
    #[error("{unit}·{a} = {got}, expected {a}")]
    LeftUnit { unit: String, a: String, got: String },
    #[error("{a}·{unit} = {got}, expected {a}")]
    RightUnit { unit: String, a: String, got: String },
}

impl Monoid {
    /// Builds and validates a monoid. `table[a * n + b]` is the position of `ab`.
    pub fn new(carrier: FinSet, table: Vec<usize>, unit: usize) -> Result<Self> {
        let m = Self::new_unchecked(carrier, table, unit)?;
        validate_monoid(&m)?;
        Ok(m)
    }

    /// Builds a multiplication table without checking the monoid axioms.
    /// The table must still be total and land in the carrier.
    pub fn new_unchecked(carrier: FinSet, table: Vec<usize>, unit: usize) -> Result<Self> {
        let n = carrier.len();
        if table.len() != n * n {
            return Err(Error::Mismatch(format!("table has {} cells, expected {}", table.len(), n * n)));
        }
        if table.iter().any(|&c| c >= n) || (unit >= n && n > 0) || n == 0 {
            return Err(Error::Mismatch("table or unit outside the carrier".into()));
        }
        Ok(Monoid { carrier, table: table.into(), unit })
    }

    pub fn from_fn(carrier: FinSet, unit: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let n = carrier.len();
        let table = (0..n * n).map(|i| mul(i / n, i % n)).collect();
        Self::new(carrier, table, unit)
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.len() + b]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn elem(&self, a: usize) -> Elem {
        self.carrier.get(a)
    }

    pub fn label(&self, a: usize) -> String {
        self.carrier.get(a).to_string()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.carrier.position_by_label(label)
    }

    /// The multiplication `m: A × A → A`.
    pub fn multiplication_map(&self) -> FinMap {
        let dom = finset::product(&self.carrier, &self.carrier).set;
        FinMap::from_fn(&dom, &self.carrier, |i| self.table[i])
    }

    /// The unit `u: 1 → A`.
    pub fn unit_map(&self) -> FinMap {
        FinMap::constant(&FinSet::singleton(), &self.carrier, self.unit)
    }

    /// A two-sided inverse of `a`, found by direct search.
    pub fn inverse(&self, a: usize) -> Option<usize> {
        (0..self.len()).find(|&b| self.mul(a, b) == self.unit && self.mul(b, a) == self.unit)
    }

    pub fn is_group(&self) -> bool {
        (0..self.len()).all(|a| self.inverse(a).is_some())
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.len()).all(|a| (0..self.len()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Cartesian product monoid `A × B`.
    pub fn direct_product(&self, other: &Monoid) -> Monoid {
        let carrier = finset::product(&self.carrier, &other.carrier).set;
        let m = other.len();
        Monoid::from_fn(carrier, self.unit * m + other.unit, |x, y| {
            self.mul(x / m, y / m) * m + other.mul(x % m, y % m)
        })
        .expect("product of monoids is a monoid")
    }
}

impl fmt::Debug for Monoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monoid{:?}", self.carrier)
    }
}

/// Checks associativity and both unit laws.
pub fn validate_monoid(m: &Monoid) -> Result<(), MonoidViolation> {
    let n = m.len();
    let e = m.unit;
    for a in 0..n {
        if m.mul(e, a) != a {
            return Err(MonoidViolation::LeftUnit { unit: m.label(e), a: m.label(a), got: m.label(m.mul(e, a)) });
        }
        if m.mul(a, e) != a {
            return Err(MonoidViolation::RightUnit { unit: m.label(e), a: m.label(a), got: m.label(m.mul(a, e)) });
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = m.mul(a, b);
            for c in 0..n {
                let lhs = m.mul(ab, c);
                let rhs = m.mul(a, m.mul(b, c));
                if lhs != rhs {
                    return Err(MonoidViolation::Associativity {
                        a: m.label(a),
                        b: m.label(b),
                        c: m.label(c),
                        lhs: m.label(lhs),
                        rhs: m.label(rhs),
                    });
                }
            }
        }
    }
    Ok(())
}

/// A monoid homomorphism `h: src → dst`, i.e. the monad map `h × −`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonoidHom {
    src: Monoid,
    dst: Monoid,
    map: FinMap,
}

impl MonoidHom {
    pub fn new(src: Monoid, dst: Monoid, map: FinMap) -> Result<Self> {
        let h = MonoidHom { src, dst, map };
        h.validate()?;
        Ok(h)
    }

    pub fn from_fn(src: &Monoid, dst: &Monoid, f: impl Fn(usize) -> usize) -> Result<Self> {
        let map = FinMap::new(src.carrier.clone(), dst.carrier.clone(), (0..src.len()).map(f).collect())?;
        Self::new(src.clone(), dst.clone(), map)
    }

    pub fn identity(m: &Monoid) -> Self {
        MonoidHom { src: m.clone(), dst: m.clone(), map: FinMap::identity(&m.carrier) }
    }

    pub fn src(&self) -> &Monoid {
        &self.src
    }

    pub fn dst(&self) -> &Monoid {
        &self.dst
    }

    pub fn map(&self) -> &FinMap {
        &self.map
    }

    pub fn at(&self, a: usize) -> usize {
        self.map.at(a)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MonoidHom) -> Result<MonoidHom> {
        if self.dst != next.src {
            return Err(Error::MonoidMismatch("composite of homomorphisms".into()));
        }
        Ok(MonoidHom { src: self.src.clone(), dst: next.dst.clone(), map: self.map.then(&next.map)? })
    }

    pub fn validate(&self) -> Result<()> {
        if *self.map.dom() != self.src.carrier || *self.map.cod() != self.dst.carrier {
            return Err(Error::NotAHomomorphism("map does not go between the carriers".into()));
        }
        if self.at(self.src.unit) != self.dst.unit {
            return Err(Error::NotAHomomorphism(format!(
                "unit {} ↦ {}",
                self.src.label(self.src.unit),
                self.dst.label(self.at(self.src.unit))
            )));
        }
        let n = self.src.len();
        for a in 0..n {
            for b in 0..n {
                if self.at(self.src.mul(a, b)) != self.dst.mul(self.at(a), self.at(b)) {
                    return Err(Error::NotAHomomorphism(format!(
                        "h({}·{}) ≠ h({})·h({})",
                        self.src.label(a),
                        self.src.label(b),
                        self.src.label(a),
                        self.src.label(b)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_injective(&self) -> bool {
        self.map.is_injective()
    }

    pub fn is_bijective(&self) -> bool {
        self.map.is_bijective()
    }

    /// Pairs `(a, b)`, `a < b`, identified by the homomorphism.
    pub fn kernel_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.src.len();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.at(a) == self.at(b))
            .collect()
    }
}

/// The augmentation `ε: A → 1` of a monoid.
#[derive(Clone, Debug)]
pub struct Augmentation {
    pub owner: Monoid,
    pub counit: FinMap,
}

impl Augmentation {
    /// `ε` as a homomorphism into the trivial monoid.
    pub fn as_hom(&self) -> MonoidHom {
        MonoidHom::from_fn(&self.owner, &trivial_monoid(), |_| 0).expect("counit is a homomorphism")
    }
}

/// The one augmentation a monoid in finite sets has.
pub fn canonical_augmentation(m: &Monoid) -> Augmentation {
    Augmentation { owner: m.clone(), counit: FinMap::terminal(m.carrier()) }
}

/// The monoid on `{•}`.
pub fn trivial_monoid() -> Monoid {
    Monoid::new(FinSet::singleton(), vec![0], 0).expect("trivial monoid")
}

/// A submonoid together with its inclusion homomorphism.
#[derive(Clone, Debug)]
pub struct Submonoid {
    parent: Monoid,
    positions: Vec<usize>,
    monoid: Monoid,
    inclusion: MonoidHom,
}

impl PartialEq for Submonoid {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.positions == other.positions
    }
}

impl Eq for Submonoid {}

impl Submonoid {
    /// Checks that the positions contain the unit and are closed.
    pub fn new(parent: &Monoid, positions: &[usize]) -> Result<Self> {
        let mut positions = positions.to_vec();
        positions.sort_unstable();
        positions.dedup();
        if positions.iter().any(|&p| p >= parent.len()) {
            return Err(Error::NotASubmonoid("position outside the carrier".into()));
        }
        if positions.binary_search(&parent.unit).is_err() {
            return Err(Error::NotASubmonoid("missing the unit".into()));
        }
        let local = |p: usize| positions.binary_search(&p).ok();
        let k = positions.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &positions {
            for &b in &positions {
                let ab = parent.mul(a, b);
                table.push(local(ab).ok_or_else(|| {
                    Error::NotASubmonoid(format!(
                        "{}·{} = {} escapes",
                        parent.label(a),
                        parent.label(b),
                        parent.label(ab)
                    ))
                })?);
            }
        }
        let carrier = parent.carrier.subset(&positions);
        let unit = local(parent.unit).unwrap();
        let monoid = Monoid::new_unchecked(carrier.clone(), table, unit)?;
        let map = FinMap::new(carrier, parent.carrier.clone(), positions.clone())?;
        let inclusion = MonoidHom { src: monoid.clone(), dst: parent.clone(), map };
        Ok(Submonoid { parent: parent.clone(), positions, monoid, inclusion })
    }

    pub fn whole(parent: &Monoid) -> Self {
        Self::new(parent, &(0..parent.len()).collect::<Vec<_>>()).expect("whole monoid")
    }

    pub fn unit_only(parent: &Monoid) -> Self {
        Self::new(parent, &[parent.unit]).expect("unit submonoid")
    }

    pub fn parent(&self) -> &Monoid {
        &self.parent
    }

    /// Positions of the members in the parent, ascending.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    pub fn inclusion(&self) -> &MonoidHom {
        &self.inclusion
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, a: usize) -> bool {
        self.positions.binary_search(&a).is_ok()
    }

    pub fn is_subset_of(&self, other: &Submonoid) -> bool {
        finset::is_subset(&self.positions, &other.positions)
    }

    pub fn labels(&self) -> Vec<String> {
        self.positions.iter().map(|&p| self.parent.label(p)).collect()
    }

    pub fn is_group(&self) -> bool {
        self.monoid.is_group()
    }

    pub fn intersection(&self, other: &Submonoid) -> Submonoid {
        let common: Vec<usize> = self.positions.iter().copied().filter(|p| other.contains(*p)).collect();
        Submonoid::new(&self.parent, &common).expect("intersection of submonoids")
    }
}

/// All submonoids, ordered by size and then by member positions.
///
/// Exhaustive over subsets containing the unit; intended for monoids of
/// order up to about 12.
pub fn enumerate_submonoids(m: &Monoid) -> Vec<Submonoid> {
    let n = m.len();
    assert!(n <= 24, "submonoid enumeration is exhaustive over subsets; order {n} is too large");
    let others: Vec<usize> = (0..n).filter(|&a| a != m.unit).collect();
    let mut found: Vec<Vec<usize>> = Vec::new();
    for mask in 0u32..(1u32 << others.len()) {
        let mut members = vec![false; n];
        members[m.unit] = true;
        for (bit, &a) in others.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                members[a] = true;
            }
        }
        let closed = (0..n)
            .filter(|&a| members[a])
            .all(|a| (0..n).filter(|&b| members[b]).all(|b| members[m.mul(a, b)]));
        if closed {
            found.push((0..n).filter(|&a| members[a]).collect());
        }
    }
    found.sort_by(|a, b| finset::cmp_positions(a, b));
    found.into_iter().map(|p| Submonoid::new(m, &p).expect("closed subset")).collect()
}

/// Submonoids in which every element is invertible.
pub fn enumerate_subgroups(m: &Monoid) -> Vec<Submonoid> {
    enumerate_submonoids(m).into_iter().filter(Submonoid::is_group).collect()
}

/// The fusion map `A × A → A × A`, `(a, b) ↦ (a, ab)`.
pub fn fusion_morphism(m: &Monoid) -> FinMap {
    let aa = finset::product(m.carrier(), m.carrier()).set;
    let n = m.len();
    FinMap::from_fn(&aa, &aa, |i| {
        let (a, b) = (i / n, i % n);
        a * n + m.mul(a, b)
    })
}

pub fn is_hopf(m: &Monoid) -> bool {
    fusion_morphism(m).is_bijective()
}

/// First element (in canonical order) with no two-sided inverse.
pub fn hopf_witness(m: &Monoid) -> Option<usize> {
    (0..m.len()).find(|&a| m.inverse(a).is_none())
}

/// The antipode `s: A → A` of a Hopf monoid, read off the inverse of the
/// fusion map: `s(a)` is the `b` with `(a, b) ↦ (a, e)`.
pub fn antipode(m: &Monoid) -> Result<FinMap> {
    let fusion = fusion_morphism(m);
    let n = m.len();
    if !fusion.is_bijective() {
        let witness = hopf_witness(m).map(|a| m.label(a)).unwrap_or_default();
        return Err(Error::NotHopf { witness });
    }
    let mut inverse = vec![0; n * n];
    for (i, &j) in fusion.table().iter().enumerate() {
        inverse[j] = i;
    }
    Ok(FinMap::from_fn(m.carrier(), m.carrier(), |a| inverse[a * n + m.unit()] % n))
}

/// Calls `visit` with the image table of every homomorphism from `src` into
/// the monoid `(0..dst_len, dst_mul, dst_unit)`. Tables arrive in
/// lexicographic order.
pub fn for_each_hom_into(
    src: &Monoid,
    dst_len: usize,
    dst_unit: usize,
    dst_mul: &dyn Fn(usize, usize) -> usize,
    visit: &mut dyn FnMut(&[usize]),
) {
    const UNSET: usize = usize::MAX;
    let n = src.len();

    fn close(
        src: &Monoid,
        dst_mul: &dyn Fn(usize, usize) -> usize,
        vals: &mut [usize],
        trail: &mut Vec<usize>,
        start: usize,
    ) -> bool {
        let mut queue = vec![start];
        while let Some(a) = queue.pop() {
            for b in 0..src.len() {
                if vals[b] == UNSET {
                    continue;
                }
                for (x, y) in [(a, b), (b, a)] {
                    let xy = src.mul(x, y);
                    let want = dst_mul(vals[x], vals[y]);
                    if vals[xy] == UNSET {
                        vals[xy] = want;
                        trail.push(xy);
                        queue.push(xy);
                    } else if vals[xy] != want {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn dfs(
        src: &Monoid,
        dst_len: usize,
        dst_mul: &dyn Fn(usize, usize) -> usize,
        vals: &mut Vec<usize>,
        trail: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        let Some(a) = vals.iter().position(|&v| v == UNSET) else {
            visit(vals);
            return;
        };
        for v in 0..dst_len {
            let mark = trail.len();
            vals[a] = v;
            trail.push(a);
            if close(src, dst_mul, vals, trail, a) {
                dfs(src, dst_len, dst_mul, vals, trail, visit);
            }
            for &t in &trail[mark..] {
                vals[t] = UNSET;
            }
            trail.truncate(mark);
        }
    }

    let mut vals = vec![UNSET; n];
    let mut trail = Vec::new();
    vals[src.unit()] = dst_unit;
    if close(src, dst_mul, &mut vals, &mut trail, src.unit()) {
        dfs(src, dst_len, dst_mul, &mut vals, &mut trail, visit);
    }
}

/// All homomorphisms `src → dst`, in lexicographic order of their tables.
pub fn enumerate_homs(src: &Monoid, dst: &Monoid) -> Vec<MonoidHom> {
    let mut out = Vec::new();
    for_each_hom_into(src, dst.len(), dst.unit(), &|a, b| dst.mul(a, b), &mut |t| {
        let map = FinMap::new(src.carrier().clone(), dst.carrier().clone(), t.to_vec()).expect("table in range");
        out.push(MonoidHom { src: src.clone(), dst: dst.clone(), map });
    });
    out
}
