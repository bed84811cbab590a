//! The ambient category of finite sets.
//!
//! A [`FinSet`] is a canonically ordered list of distinct [`Elem`]s and a
//! [`FinMap`] is a total table between two of them. Products and
//! exponentials are first-class sets whose elements are pairs and function
//! tables, so the sets of maps used by currying are ordinary objects.
//!
//! Products and exponentials are stored symbolically: their elements are
//! computed from an index on demand, which keeps `[A, X]` cheap to carry
//! around even when it has tens of thousands of members.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An element of a finite set.
///
/// Symbols are opaque names, pairs are elements of products and functions
/// are elements of exponentials. The derived order compares symbols
/// lexicographically, pairs componentwise and functions by their tables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elem {
    Sym(Arc<str>),
    Pair(Arc<(Elem, Elem)>),
    Func(Arc<[(Elem, Elem)]>),
}

impl Elem {
    pub fn sym(name: impl AsRef<str>) -> Self {
        Elem::Sym(Arc::from(name.as_ref()))
    }

    pub fn pair(a: Elem, b: Elem) -> Self {
        Elem::Pair(Arc::new((a, b)))
    }

    pub fn func(table: Vec<(Elem, Elem)>) -> Self {
        Elem::Func(table.into())
    }

    pub fn as_pair(&self) -> Option<(&Elem, &Elem)> {
        match self {
            Elem::Pair(p) => Some((&p.0, &p.1)),
            _ => None,
        }
    }

    pub fn as_func(&self) -> Option<&[(Elem, Elem)]> {
        match self {
            Elem::Func(t) => Some(t),
            _ => None,
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Sym(s) => f.write_str(s),
            Elem::Pair(p) => write!(f, "({},{})", p.0, p.1),
            Elem::Func(t) => {
                f.write_str("{")?;
                for (i, (x, y)) in t.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}↦{y}")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

enum Repr {
    Explicit(Vec<Elem>),
    Product(FinSet, FinSet),
    Exponential { dom: FinSet, cod: FinSet, len: usize },
}

/// A finite set with canonically ordered, distinct elements.
#[derive(Clone)]
pub struct FinSet(Arc<Repr>);

/// Symbol used for the single element of the unit object.
pub const POINT: &str = "•";

impl FinSet {
    /// Builds a set, sorting the elements into canonical order.
    pub fn new(elems: impl IntoIterator<Item = Elem>) -> Result<Self> {
        let mut elems: Vec<Elem> = elems.into_iter().collect();
        elems.sort();
        if let Some(w) = elems.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement(w[0].to_string()));
        }
        Ok(FinSet(Arc::new(Repr::Explicit(elems))))
    }

    pub fn from_symbols<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::new(names.into_iter().map(Elem::sym))
    }

    /// `{0, 1, …, n-1}` as symbols.
    pub fn range(n: usize) -> Self {
        Self::from_symbols((0..n).map(|i| i.to_string())).expect("distinct numerals")
    }

    pub fn empty() -> Self {
        FinSet(Arc::new(Repr::Explicit(Vec::new())))
    }

    /// The unit object `{•}`.
    pub fn singleton() -> Self {
        FinSet(Arc::new(Repr::Explicit(vec![Elem::sym(POINT)])))
    }

    pub fn len(&self) -> usize {
        match &*self.0 {
            Repr::Explicit(v) => v.len(),
            Repr::Product(x, y) => x.len() * y.len(),
            Repr::Exponential { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The element at canonical position `i`.
    ///
    /// Panics when `i` is out of range.
    pub fn get(&self, i: usize) -> Elem {
        assert!(i < self.len(), "index {i} out of range for set of size {}", self.len());
        match &*self.0 {
            Repr::Explicit(v) => v[i].clone(),
            Repr::Product(x, y) => {
                let n = y.len();
                Elem::pair(x.get(i / n), y.get(i % n))
            }
            Repr::Exponential { dom, cod, .. } => {
                let digits = decode_table(i, dom.len(), cod.len());
                Elem::func(dom.iter().zip(digits).map(|(x, z)| (x, cod.get(z))).collect())
            }
        }
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        match &*self.0 {
            Repr::Explicit(v) => v.binary_search(e).ok(),
            Repr::Product(x, y) => {
                let (a, b) = e.as_pair()?;
                Some(x.index_of(a)? * y.len() + y.index_of(b)?)
            }
            Repr::Exponential { dom, cod, .. } => {
                let t = e.as_func()?;
                if t.len() != dom.len() {
                    return None;
                }
                let mut digits = Vec::with_capacity(t.len());
                for (i, (x, z)) in t.iter().enumerate() {
                    if dom.index_of(x)? != i {
                        return None;
                    }
                    digits.push(cod.index_of(z)?);
                }
                Some(encode_table(&digits, cod.len()))
            }
        }
    }

    pub fn contains(&self, e: &Elem) -> bool {
        self.index_of(e).is_some()
    }

    /// Finds an element by its printed form.
    pub fn position_by_label(&self, label: &str) -> Option<usize> {
        self.iter().position(|e| e.to_string() == label)
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = Elem> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// The sub-collection at the given (ascending) positions.
    pub fn subset(&self, positions: &[usize]) -> FinSet {
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        FinSet(Arc::new(Repr::Explicit(positions.iter().map(|&i| self.get(i)).collect())))
    }

    /// The factors when this set was built by [`product`].
    pub fn factors(&self) -> Option<(&FinSet, &FinSet)> {
        match &*self.0 {
            Repr::Product(x, y) => Some((x, y)),
            _ => None,
        }
    }

    /// Domain and codomain when this set was built by [`exponential`].
    pub fn exponent_parts(&self) -> Option<(&FinSet, &FinSet)> {
        match &*self.0 {
            Repr::Exponential { dom, cod, .. } => Some((dom, cod)),
            _ => None,
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.iter().map(|e| e.to_string()).collect()
    }
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.len() != other.len() {
            return false;
        }
        if self.is_empty() {
            return true;
        }
        match (&*self.0, &*other.0) {
            (Repr::Product(a, b), Repr::Product(c, d)) => a == c && b == d,
            (
                Repr::Exponential { dom: a, cod: b, .. },
                Repr::Exponential { dom: c, cod: d, .. },
            ) => (a == c && b == d) || self.iter().eq(other.iter()),
            (Repr::Explicit(a), Repr::Explicit(b)) => a == b,
            _ => self.iter().eq(other.iter()),
        }
    }
}

impl Eq for FinSet {}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 16;
        f.write_str("{")?;
        for (i, e) in self.iter().take(SHOWN).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        if self.len() > SHOWN {
            write!(f, ", … ({} total)", self.len())?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Position of a function table among all tables of its length, with the
/// first entry most significant.
pub fn encode_table(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

/// Inverse of [`encode_table`].
pub fn decode_table(mut index: usize, len: usize, base: usize) -> Vec<usize> {
    let mut digits = vec![0; len];
    for slot in digits.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    digits
}

/// `base^len`, or `None` when it does not fit in a `usize`.
pub fn table_count(base: usize, len: usize) -> Option<usize> {
    base.checked_pow(u32::try_from(len).ok()?)
}

/// A total map between finite sets, stored as a table of codomain positions.
#[derive(Clone, PartialEq, Eq)]
pub struct FinMap {
    dom: FinSet,
    cod: FinSet,
    table: Arc<[usize]>,
}

impl FinMap {
    pub fn new(dom: FinSet, cod: FinSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.len() {
            return Err(Error::Mismatch(format!(
                "table has {} entries for a domain of size {}",
                table.len(),
                dom.len()
            )));
        }
        if let Some(i) = table.iter().position(|&t| t >= cod.len()) {
            return Err(Error::NotAMember {
                elem: format!("image #{} of `{}`", table[i], dom.get(i)),
                set: format!("{cod}"),
            });
        }
        Ok(FinMap { dom, cod, table: table.into() })
    }

    pub fn from_fn(dom: &FinSet, cod: &FinSet, f: impl Fn(usize) -> usize) -> Self {
        let table: Vec<usize> = (0..dom.len()).map(f).collect();
        debug_assert!(table.iter().all(|&t| t < cod.len()));
        FinMap { dom: dom.clone(), cod: cod.clone(), table: table.into() }
    }

    /// Builds a map from an association list, which must cover the domain.
    pub fn from_pairs(
        dom: &FinSet,
        cod: &FinSet,
        pairs: impl IntoIterator<Item = (Elem, Elem)>,
    ) -> Result<Self> {
        let mut table = vec![usize::MAX; dom.len()];
        for (x, y) in pairs {
            let i = dom.index_of(&x).ok_or_else(|| Error::NotAMember {
                elem: x.to_string(),
                set: format!("{dom}"),
            })?;
            let j = cod.index_of(&y).ok_or_else(|| Error::NotAMember {
                elem: y.to_string(),
                set: format!("{cod}"),
            })?;
            table[i] = j;
        }
        if let Some(i) = table.iter().position(|&t| t == usize::MAX) {
            return Err(Error::PartialMap(dom.get(i).to_string()));
        }
        Self::new(dom.clone(), cod.clone(), table)
    }

    pub fn identity(x: &FinSet) -> Self {
        Self::from_fn(x, x, |i| i)
    }

    pub fn constant(dom: &FinSet, cod: &FinSet, at: usize) -> Self {
        Self::from_fn(dom, cod, |_| at)
    }

    /// The unique map into the singleton.
    pub fn terminal(dom: &FinSet) -> Self {
        Self::from_fn(dom, &FinSet::singleton(), |_| 0)
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Image of the element at position `i`, as a position.
    pub fn at(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn apply(&self, x: &Elem) -> Option<Elem> {
        self.dom.index_of(x).map(|i| self.cod.get(self.table[i]))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &FinMap) -> Result<FinMap> {
        if self.cod != next.dom {
            return Err(Error::Mismatch("codomain and domain differ in composite".into()));
        }
        Ok(FinMap::from_fn(&self.dom, &next.cod, |i| next.table[self.table[i]]))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        self.table.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        for &t in self.table.iter() {
            seen[t] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective()
    }

    /// This map as an element of `[dom, cod]`.
    pub fn to_elem(&self) -> Elem {
        Elem::func(
            self.table.iter().enumerate().map(|(i, &j)| (self.dom.get(i), self.cod.get(j))).collect(),
        )
    }

    /// Position of this map inside `exponential(dom, cod)`.
    pub fn exponential_index(&self) -> usize {
        encode_table(&self.table, self.cod.len())
    }
}

impl fmt::Debug for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_elem())
    }
}

/// A product with its projections.
#[derive(Clone, Debug)]
pub struct Product {
    pub set: FinSet,
    pub fst: FinMap,
    pub snd: FinMap,
}

impl Product {
    /// The pairing `⟨f, g⟩: Z → X × Y`.
    pub fn pair(&self, f: &FinMap, g: &FinMap) -> Result<FinMap> {
        let (x, y) = self.set.factors().expect("product set");
        if f.dom != g.dom || f.cod != *x || g.cod != *y {
            return Err(Error::Mismatch("pairing legs do not match the product".into()));
        }
        Ok(FinMap::from_fn(&f.dom, &self.set, |i| f.table[i] * y.len() + g.table[i]))
    }
}

pub fn product(x: &FinSet, y: &FinSet) -> Product {
    let set = FinSet(Arc::new(Repr::Product(x.clone(), y.clone())));
    let n = y.len();
    let fst = FinMap::from_fn(&set, x, |i| i / n);
    let snd = FinMap::from_fn(&set, y, |i| i % n);
    Product { set, fst, snd }
}

/// The internal hom `[X, Z]`: all total maps `X → Z`.
pub fn exponential(x: &FinSet, z: &FinSet) -> Result<FinSet> {
    let len = table_count(z.len(), x.len()).ok_or_else(|| Error::SizeLimit {
        what: "exponential".into(),
        needed: (z.len() as u128).saturating_pow(x.len().min(u32::MAX as usize) as u32),
        limit: usize::MAX as u64,
    })?;
    Ok(FinSet(Arc::new(Repr::Exponential { dom: x.clone(), cod: z.clone(), len })))
}

/// `f × g: X × Y → X' × Y'`.
pub fn product_map(f: &FinMap, g: &FinMap) -> FinMap {
    let dom = product(&f.dom, &g.dom).set;
    let cod = product(&f.cod, &g.cod).set;
    let (n, m) = (g.dom.len(), g.cod.len());
    FinMap::from_fn(&dom, &cod, |i| f.table[i / n] * m + g.table[i % n])
}

/// The symmetry `X × Y → Y × X`.
pub fn swap(x: &FinSet, y: &FinSet) -> FinMap {
    let dom = product(x, y).set;
    let cod = product(y, x).set;
    let (nx, ny) = (x.len(), y.len());
    FinMap::from_fn(&dom, &cod, |i| (i % ny) * nx + i / ny)
}

/// Currying: `f: Y × X → Z` becomes `Y → [X, Z]`.
pub fn curry(f: &FinMap, y: &FinSet, x: &FinSet) -> Result<FinMap> {
    if *f.dom() != product(y, x).set {
        return Err(Error::NotAProduct);
    }
    let cod = exponential(x, f.cod())?;
    let (nx, nz) = (x.len(), f.cod().len());
    Ok(FinMap::from_fn(y, &cod, |j| encode_table(&f.table[j * nx..(j + 1) * nx], nz)))
}

/// Uncurrying: `g: Y → [X, Z]` becomes `Y × X → Z`.
pub fn uncurry(g: &FinMap, x: &FinSet, z: &FinSet) -> Result<FinMap> {
    if *g.cod() != exponential(x, z)? {
        return Err(Error::NotAnExponential);
    }
    let dom = product(g.dom(), x).set;
    let nx = x.len();
    let nz = z.len();
    Ok(FinMap::from_fn(&dom, z, |i| {
        let f = g.table[i / nx];
        let pos = i % nx;
        // digit `pos` of the table encoded by `f`
        (f / nz.pow((nx - 1 - pos) as u32)) % nz
    }))
}

/// Evaluation `[X, Z] × X → Z`, the counit of currying.
pub fn evaluation(x: &FinSet, z: &FinSet) -> Result<FinMap> {
    let exp = exponential(x, z)?;
    let dom = product(&exp, x).set;
    let nx = x.len();
    Ok(FinMap::from_fn(&dom, z, |i| decode_table(i / nx, nx, z.len())[i % nx]))
}

/// Coevaluation `Y → [X, Y × X]`, the unit of currying.
pub fn coevaluation(y: &FinSet, x: &FinSet) -> Result<FinMap> {
    let yx = product(y, x).set;
    let cod = exponential(x, &yx)?;
    let nx = x.len();
    Ok(FinMap::from_fn(y, &cod, |j| {
        let digits: Vec<usize> = (0..nx).map(|i| j * nx + i).collect();
        encode_table(&digits, yx.len())
    }))
}

/// `[f, Z]: [Y, Z] → [X, Z]`, precomposition with `f: X → Y`.
pub fn precompose(f: &FinMap, z: &FinSet) -> Result<FinMap> {
    let src = exponential(f.cod(), z)?;
    let dst = exponential(f.dom(), z)?;
    let (ny, nz) = (f.cod().len(), z.len());
    Ok(FinMap::from_fn(&src, &dst, |k| {
        let t = decode_table(k, ny, nz);
        let pulled: Vec<usize> = f.table.iter().map(|&y| t[y]).collect();
        encode_table(&pulled, nz)
    }))
}

/// `[X, g]: [X, Z] → [X, W]`, postcomposition with `g: Z → W`.
pub fn postcompose(x: &FinSet, g: &FinMap) -> Result<FinMap> {
    let src = exponential(x, g.dom())?;
    let dst = exponential(x, g.cod())?;
    let (nx, nz, nw) = (x.len(), g.dom().len(), g.cod().len());
    Ok(FinMap::from_fn(&src, &dst, |k| {
        let t = decode_table(k, nx, nz);
        let pushed: Vec<usize> = t.iter().map(|&z| g.table[z]).collect();
        encode_table(&pushed, nw)
    }))
}

/// An equalizer object with its inclusion.
#[derive(Clone, Debug)]
pub struct Equalizer {
    pub set: FinSet,
    pub inclusion: FinMap,
}

impl Equalizer {
    /// Positions (in the common domain) of the equalized elements.
    pub fn positions(&self) -> &[usize] {
        self.inclusion.table()
    }
}

pub fn equalizer(f: &FinMap, g: &FinMap) -> Result<Equalizer> {
    if f.dom != g.dom || f.cod != g.cod {
        return Err(Error::Mismatch("equalizer of maps with different shapes".into()));
    }
    let positions: Vec<usize> = (0..f.dom.len()).filter(|&i| f.table[i] == g.table[i]).collect();
    let set = f.dom.subset(&positions);
    let inclusion = FinMap::new(set.clone(), f.dom.clone(), positions)?;
    Ok(Equalizer { set, inclusion })
}

/// All maps `X → Y` in canonical order.
pub fn hom_set(x: &FinSet, y: &FinSet) -> Vec<FinMap> {
    let count = table_count(y.len(), x.len()).expect("hom-set size overflows usize");
    (0..count)
        .map(|k| FinMap {
            dom: x.clone(),
            cod: y.clone(),
            table: decode_table(k, x.len(), y.len()).into(),
        })
        .collect()
}

/// Lexicographic comparison of two ascending position lists.
pub fn cmp_positions(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// `a ⊆ b` for ascending position lists.
pub fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.by_ref().any(|y| y == x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(names: &[&str]) -> FinSet {
        FinSet::from_symbols(names.iter().copied()).unwrap()
    }

    #[test]
    fn duplicates_rejected() {
        assert!(matches!(FinSet::from_symbols(["a", "a"]), Err(Error::DuplicateElement(_))));
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let s = set(&["b", "a", "c"]);
        assert_eq!(s.labels(), ["a", "b", "c"]);
    }

    #[test]
    fn product_examples() {
        let p = product(&set(&["a"]), &set(&["0", "1"]));
        assert_eq!(p.set.labels(), ["(a,0)", "(a,1)"]);
        assert!(product(&FinSet::empty(), &set(&["x"])).set.is_empty());
        assert_eq!(product(&FinSet::range(3), &FinSet::range(4)).set.len(), 12);
    }

    #[test]
    fn product_is_sorted_like_explicit_pairs() {
        let x = set(&["a", "b", "c"]);
        let y = set(&["0", "1"]);
        let p = product(&x, &y).set;
        let explicit =
            FinSet::new(x.iter().flat_map(|a| y.iter().map(move |b| Elem::pair(a.clone(), b)))).unwrap();
        assert_eq!(p, explicit);
        assert!(p.iter().eq(explicit.iter()));
    }

    #[test]
    fn pairing_and_projections() {
        let x = FinSet::range(2);
        let y = FinSet::range(3);
        let p = product(&x, &y);
        let z = FinSet::range(4);
        let f = FinMap::from_fn(&z, &x, |i| i % 2);
        let g = FinMap::from_fn(&z, &y, |i| i % 3);
        let h = p.pair(&f, &g).unwrap();
        assert_eq!(h.then(&p.fst).unwrap(), f);
        assert_eq!(h.then(&p.snd).unwrap(), g);
    }

    #[test]
    fn exponential_examples() {
        let b = FinSet::range(2);
        assert_eq!(exponential(&b, &b).unwrap().len(), 4);
        let e = exponential(&FinSet::empty(), &b).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.get(0).to_string(), "{}");
        assert_eq!(exponential(&FinSet::range(3), &FinSet::singleton()).unwrap().len(), 1);
    }

    #[test]
    fn exponential_elements_follow_table_order() {
        let e = exponential(&FinSet::range(2), &FinSet::range(2)).unwrap();
        assert_eq!(e.labels(), ["{0↦0,1↦0}", "{0↦0,1↦1}", "{0↦1,1↦0}", "{0↦1,1↦1}"]);
        let explicit = FinSet::new(e.iter()).unwrap();
        assert!(e.iter().eq(explicit.iter()));
        for (i, el) in e.iter().enumerate() {
            assert_eq!(e.index_of(&el), Some(i));
        }
    }

    #[test]
    fn hom_set_examples() {
        assert_eq!(hom_set(&FinSet::range(2), &FinSet::range(1)).len(), 1);
        assert_eq!(hom_set(&FinSet::range(1), &FinSet::range(2)).len(), 2);
        let all = hom_set(&FinSet::range(3), &FinSet::range(2));
        assert_eq!(all.len(), 8);
        assert!(all.windows(2).all(|w| w[0].to_elem() < w[1].to_elem()));
    }

    #[test]
    fn curry_of_projection_is_constant() {
        let y = set(&["p", "q", "r"]);
        let x = FinSet::singleton();
        let p = product(&y, &x);
        let c = curry(&p.fst, &y, &x).unwrap();
        for (j, el) in y.iter().enumerate() {
            assert_eq!(c.cod().get(c.at(j)).to_string(), format!("{{•↦{el}}}"));
        }
    }

    #[test]
    fn uncurry_of_identity_element_is_second_projection() {
        let y = FinSet::range(2);
        let x = FinSet::range(3);
        let exp = exponential(&x, &x).unwrap();
        let id = FinMap::identity(&x).exponential_index();
        let g = FinMap::constant(&y, &exp, id);
        let u = uncurry(&g, &x, &x).unwrap();
        assert_eq!(u, product(&y, &x).snd);
    }

    #[test]
    fn curry_and_uncurry_are_inverse_bijections() {
        let two = FinSet::range(2);
        let (y, x, z) = (two.clone(), set(&["a", "b"]), two.clone());
        let yx = product(&y, &x).set;
        let exp = exponential(&x, &z).unwrap();
        let lhs = hom_set(&yx, &z);
        let rhs = hom_set(&y, &exp);
        assert_eq!(lhs.len(), 16);
        assert_eq!(rhs.len(), 16);
        for f in &lhs {
            assert_eq!(&uncurry(&curry(f, &y, &x).unwrap(), &x, &z).unwrap(), f);
        }
        for g in &rhs {
            assert_eq!(&curry(&uncurry(g, &x, &z).unwrap(), &y, &x).unwrap(), g);
        }
    }

    #[test]
    fn curry_matches_unit_formula() {
        // curry(f) = [X, f] ∘ coev and uncurry(g) = ev ∘ (g × X)
        let y = FinSet::range(2);
        let x = FinSet::range(2);
        let z = FinSet::range(3);
        let yx = product(&y, &x).set;
        let coev = coevaluation(&y, &x).unwrap();
        let ev = evaluation(&x, &z).unwrap();
        for f in hom_set(&yx, &z) {
            let via_unit = coev.then(&postcompose(&x, &f).unwrap()).unwrap();
            let c = curry(&f, &y, &x).unwrap();
            assert_eq!(via_unit, c);
            let via_counit = product_map(&c, &FinMap::identity(&x)).then(&ev).unwrap();
            assert_eq!(uncurry(&c, &x, &z).unwrap(), via_counit);
        }
    }

    #[test]
    fn curry_rejects_non_product_domain() {
        let f = FinMap::identity(&FinSet::range(4));
        assert_eq!(curry(&f, &FinSet::range(2), &FinSet::range(3)), Err(Error::NotAProduct));
        let g = FinMap::identity(&FinSet::range(2));
        assert_eq!(uncurry(&g, &FinSet::range(2), &FinSet::range(2)), Err(Error::NotAnExponential));
    }

    #[test]
    fn equalizer_examples() {
        let b = FinSet::range(2);
        let id = FinMap::identity(&b);
        assert_eq!(equalizer(&id, &id).unwrap().set, b);
        let sw = FinMap::from_fn(&b, &b, |i| 1 - i);
        assert!(equalizer(&id, &sw).unwrap().set.is_empty());
        let t = FinSet::range(3);
        let e = equalizer(&FinMap::identity(&t), &FinMap::constant(&t, &t, 0)).unwrap();
        assert_eq!(e.set.labels(), ["0"]);
    }

    #[test]
    fn equalizer_universal_property() {
        let x = FinSet::range(3);
        let y = FinSet::range(2);
        let probe = FinSet::range(2);
        for f in hom_set(&x, &y) {
            for g in hom_set(&x, &y) {
                let eq = equalizer(&f, &g).unwrap();
                let e = &eq.inclusion;
                assert_eq!(e.then(&f).unwrap(), e.then(&g).unwrap());
                for m in hom_set(&probe, &x) {
                    let factors: Vec<FinMap> = hom_set(&probe, &eq.set)
                        .into_iter()
                        .filter(|u| u.then(e).unwrap() == m)
                        .collect();
                    let equalizes = m.then(&f).unwrap() == m.then(&g).unwrap();
                    assert_eq!(factors.len(), usize::from(equalizes));
                }
            }
        }
    }

    #[test]
    fn equalizer_shape_mismatch() {
        let f = FinMap::identity(&FinSet::range(2));
        let g = FinMap::identity(&FinSet::range(3));
        assert!(matches!(equalizer(&f, &g), Err(Error::Mismatch(_))));
    }

    #[test]
    fn from_pairs_requires_totality() {
        let x = FinSet::range(2);
        let err = FinMap::from_pairs(&x, &x, [(Elem::sym("0"), Elem::sym("1"))]);
        assert_eq!(err, Err(Error::PartialMap("1".into())));
    }

    #[test]
    fn precompose_and_postcompose_agree_with_composition() {
        let x = FinSet::range(2);
        let y = FinSet::range(3);
        let z = FinSet::range(2);
        for f in hom_set(&x, &y) {
            let pre = precompose(&f, &z).unwrap();
            for (k, g) in hom_set(&y, &z).into_iter().enumerate() {
                assert_eq!(pre.at(k), f.then(&g).unwrap().exponential_index());
            }
        }
        for g in hom_set(&y, &z) {
            let post = postcompose(&x, &g).unwrap();
            for (k, f) in hom_set(&x, &y).into_iter().enumerate() {
                assert_eq!(post.at(k), f.then(&g).unwrap().exponential_index());
            }
        }
    }

    #[test]
    fn swap_is_involutive() {
        let x = FinSet::range(2);
        let y = FinSet::range(3);
        let s = swap(&x, &y).then(&swap(&y, &x)).unwrap();
        assert_eq!(s, FinMap::identity(&product(&x, &y).set));
    }
}
