//! Finite functorial relations and their universal solutions.
//!
//! A relation `R ⊆ X × Y` between preorders is functorial when it is closed
//! downward in both arguments. The representant `R* x` is the greatest `y`
//! related to `x`; `R_* y` is the greatest `x` related to `y`. When no
//! greatest element exists the representant is absent.

use crate::error::{Error, Result};

/// A reflexive, transitive order on `0..n`, stored as a full table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preorder {
    labels: Vec<String>,
    leq: Vec<bool>,
}

impl Preorder {
    pub fn new(labels: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        let n = labels.len();
        if leq.len() != n * n {
            return Err(Error::Mismatch(format!("order table has {} cells, expected {}", leq.len(), n * n)));
        }
        let p = Preorder { labels, leq };
        if let Some(x) = (0..n).find(|&x| !p.leq(x, x)) {
            return Err(Error::Mismatch(format!("order is not reflexive at `{}`", p.labels[x])));
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if p.leq(x, y) && p.leq(y, z) && !p.leq(x, z) {
                        return Err(Error::Mismatch(format!(
                            "order is not transitive at `{}` ≤ `{}` ≤ `{}`",
                            p.labels[x], p.labels[y], p.labels[z]
                        )));
                    }
                }
            }
        }
        Ok(p)
    }

    pub fn from_fn(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = labels.len();
        let table = (0..n * n).map(|k| leq(k / n, k % n)).collect();
        Self::new(labels, table)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.labels.len() + y]
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    /// A greatest element of `candidates`, the first one when several are equivalent.
    pub fn greatest(&self, candidates: &[usize]) -> Option<usize> {
        candidates.iter().copied().find(|&g| candidates.iter().all(|&c| self.leq(c, g)))
    }
}

#[derive(Clone, Debug)]
pub struct FiniteRelation {
    left: Preorder,
    right: Preorder,
    holds: Vec<bool>,
}

/// `R*` and `R_*`, with `None` where no greatest related element exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representants {
    pub upper: Vec<Option<usize>>,
    pub lower: Vec<Option<usize>>,
}

impl Representants {
    pub fn undefined_left(&self) -> Vec<usize> {
        (0..self.upper.len()).filter(|&x| self.upper[x].is_none()).collect()
    }

    pub fn undefined_right(&self) -> Vec<usize> {
        (0..self.lower.len()).filter(|&y| self.lower[y].is_none()).collect()
    }
}

impl FiniteRelation {
    /// Checks functoriality: `x′ ≤ x`, `y′ ≤ y` and `x R y` imply `x′ R y′`.
    pub fn new(left: Preorder, right: Preorder, holds: Vec<bool>) -> Result<Self> {
        if holds.len() != left.len() * right.len() {
            return Err(Error::Mismatch("relation table does not match the preorders".into()));
        }
        let r = FiniteRelation { left, right, holds };
        for x in 0..r.left.len() {
            for y in 0..r.right.len() {
                if !r.holds(x, y) {
                    continue;
                }
                for x1 in (0..r.left.len()).filter(|&x1| r.left.leq(x1, x)) {
                    for y1 in (0..r.right.len()).filter(|&y1| r.right.leq(y1, y)) {
                        if !r.holds(x1, y1) {
                            return Err(Error::NonFunctorialRelation(format!(
                                "`{}` R `{}` but not `{}` R `{}`",
                                r.left.label(x),
                                r.right.label(y),
                                r.left.label(x1),
                                r.right.label(y1)
                            )));
                        }
                    }
                }
            }
        }
        Ok(r)
    }

    pub fn from_fn(left: Preorder, right: Preorder, holds: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let m = right.len();
        let table = (0..left.len() * m).map(|k| holds(k / m, k % m)).collect();
        Self::new(left, right, table)
    }

    pub fn holds(&self, x: usize, y: usize) -> bool {
        self.holds[x * self.right.len() + y]
    }

    pub fn left(&self) -> &Preorder {
        &self.left
    }

    pub fn right(&self) -> &Preorder {
        &self.right
    }

    pub fn representants(&self) -> Representants {
        let upper = (0..self.left.len())
            .map(|x| {
                let related: Vec<usize> = (0..self.right.len()).filter(|&y| self.holds(x, y)).collect();
                self.right.greatest(&related)
            })
            .collect();
        let lower = (0..self.right.len())
            .map(|y| {
                let related: Vec<usize> = (0..self.left.len()).filter(|&x| self.holds(x, y)).collect();
                self.left.greatest(&related)
            })
            .collect();
        Representants { upper, lower }
    }
}
