//! Finite lattices over dense element indices `0..n`.
//!
//! A [`Lattice`] is built either from a cover relation ([`Lattice::new`]) or
//! from a complete order relation ([`Lattice::from_order`]). Construction
//! computes the reflexive-transitive closure, checks that it is a partial
//! order, and materializes the meet and join tables by brute-force glb/lub
//! search. A value of type `Lattice` is therefore always a lattice.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::bitset::ElementSet;
use crate::error::{Error, MissingBound, Result};
use crate::filter::Filter;

/// Element index inside a [`Lattice`].
pub type Element = usize;

/// Identity shared by a lattice and its clones; families and representations
/// remember the identity of the lattice they were built over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeId(u64);

impl LatticeId {
    fn fresh() -> Self {
        static NEXT: AtomicU64 = AtomicU64::new(0);
        LatticeId(NEXT.fetch_add(1, Ordering::Relaxed))
    }
}

#[derive(Debug, Clone)]
pub struct Lattice {
    id: LatticeId,
    names: Vec<String>,
    index: HashMap<String, Element>,
    /// `up[a] = { b : a <= b }`, i.e. the principal filter of `a`.
    up: Vec<ElementSet>,
    /// `down[a] = { b : b <= a }`.
    down: Vec<ElementSet>,
    meet_table: Vec<Element>,
    join_table: Vec<Element>,
    bottom: Element,
    top: Element,
}

impl Lattice {
    /// Builds a lattice from element names and a cover relation given as
    /// `(lower, upper)` name pairs. The order is the reflexive-transitive
    /// closure of the covers; redundant (non-cover) pairs are accepted.
    pub fn new<S, P>(names: &[S], covers: &[(P, P)]) -> Result<Self>
    where
        S: AsRef<str>,
        P: AsRef<str>,
    {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_owned()).collect();
        let index = name_index(&names)?;
        let n = names.len();

        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for (lo, hi) in covers {
            let lo = lookup(&index, lo.as_ref())?;
            let hi = lookup(&index, hi.as_ref())?;
            if lo == hi {
                return Err(Error::Cycle {
                    a: names[lo].clone(),
                    b: names[hi].clone(),
                });
            }
            rel[lo][hi] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if rel[i][k] {
                    for j in 0..n {
                        if rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if rel[i][j] && rel[j][i] {
                    return Err(Error::Cycle {
                        a: names[i].clone(),
                        b: names[j].clone(),
                    });
                }
            }
        }
        Self::from_closed(names, index, &rel)
    }

    /// Builds a lattice from a full order relation: `leq[a][b]` is `a <= b`.
    /// The relation must already be reflexive, antisymmetric and transitive.
    pub fn from_order<S: AsRef<str>>(names: &[S], leq: &[Vec<bool>]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_owned()).collect();
        let index = name_index(&names)?;
        let n = names.len();
        assert!(
            leq.len() == n && leq.iter().all(|r| r.len() == n),
            "order matrix must be {n}x{n}"
        );
        for i in 0..n {
            assert!(leq[i][i], "order relation is not reflexive at {i}");
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Cycle {
                        a: names[i].clone(),
                        b: names[j].clone(),
                    });
                }
                for k in 0..n {
                    assert!(
                        !(leq[i][j] && leq[j][k]) || leq[i][k],
                        "order relation is not transitive at ({i}, {j}, {k})"
                    );
                }
            }
        }
        Self::from_closed(names, index, leq)
    }

    fn from_closed(names: Vec<String>, index: HashMap<String, Element>, rel: &[Vec<bool>]) -> Result<Self> {
        let n = names.len();
        let up: Vec<ElementSet> = (0..n)
            .map(|a| ElementSet::from_indices(n, (0..n).filter(|&b| rel[a][b])))
            .collect();
        let down: Vec<ElementSet> = (0..n)
            .map(|a| ElementSet::from_indices(n, (0..n).filter(|&b| rel[b][a])))
            .collect();

        let mut meet_table = vec![0; n * n];
        let mut join_table = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let lower = down[a].intersection(&down[b]);
                let glb = lower.iter().find(|&g| lower.is_subset(&down[g]));
                let upper = up[a].intersection(&up[b]);
                let lub = upper.iter().find(|&l| upper.is_subset(&up[l]));
                let (Some(glb), Some(lub)) = (glb, lub) else {
                    return Err(Error::NotALattice {
                        a: names[a].clone(),
                        b: names[b].clone(),
                        missing: if glb.is_none() {
                            MissingBound::Meet
                        } else {
                            MissingBound::Join
                        },
                    });
                };
                meet_table[a * n + b] = glb;
                meet_table[b * n + a] = glb;
                join_table[a * n + b] = lub;
                join_table[b * n + a] = lub;
            }
        }

        let bottom = (0..n).find(|&x| up[x].is_full()).expect("finite lattice has a bottom");
        let top = (0..n).find(|&x| down[x].is_full()).expect("finite lattice has a top");

        Ok(Lattice {
            id: LatticeId::fresh(),
            names,
            index,
            up,
            down,
            meet_table,
            join_table,
            bottom,
            top,
        })
    }

    pub fn id(&self) -> LatticeId {
        self.id
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.size()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Display name of an element. Panics on an out-of-range index.
    pub fn name(&self, a: Element) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<Element> {
        self.index.get(name).copied()
    }

    pub fn bottom(&self) -> Element {
        self.bottom
    }

    pub fn top(&self) -> Element {
        self.top
    }

    /// `a <= b`. Panics on an out-of-range index.
    #[inline]
    pub fn leq(&self, a: Element, b: Element) -> bool {
        self.up[a].contains(b)
    }

    pub fn meet(&self, a: Element, b: Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.meet_of(a, b))
    }

    pub fn join(&self, a: Element, b: Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.join_of(a, b))
    }

    #[inline]
    pub(crate) fn meet_of(&self, a: Element, b: Element) -> Element {
        self.meet_table[a * self.size() + b]
    }

    #[inline]
    pub(crate) fn join_of(&self, a: Element, b: Element) -> Element {
        self.join_table[a * self.size() + b]
    }

    pub(crate) fn check(&self, a: Element) -> Result<()> {
        if a < self.size() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: a,
                size: self.size(),
            })
        }
    }

    /// `{ b : a <= b }` as a plain element set.
    pub fn up_set(&self, a: Element) -> &ElementSet {
        &self.up[a]
    }

    /// `{ b : b <= a }`.
    pub fn down_set(&self, a: Element) -> &ElementSet {
        &self.down[a]
    }

    /// The principal filter `[a)`.
    pub fn principal_filter(&self, a: Element) -> Result<Filter> {
        self.check(a)?;
        Ok(Filter::from_trusted(self.up[a].clone()))
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    self.meet_of(a, self.join_of(b, c)) == self.join_of(self.meet_of(a, b), self.meet_of(a, c))
                })
            })
        })
    }

    /// The cover relation (Hasse diagram edges) as `(lower, upper)` pairs in
    /// ascending order.
    pub fn covers(&self) -> Vec<(Element, Element)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.up[a].iter() {
                if a == b {
                    continue;
                }
                let strictly_between = self.up[a]
                    .intersection(&self.down[b])
                    .iter()
                    .any(|c| c != a && c != b);
                if !strictly_between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Length of the longest chain from the bottom to each element.
    pub fn heights(&self) -> Vec<usize> {
        let n = self.size();
        let mut order: Vec<Element> = (0..n).collect();
        order.sort_by_key(|&a| self.down[a].len());
        let mut height = vec![0; n];
        for &a in &order {
            height[a] = self.down[a]
                .iter()
                .filter(|&b| b != a)
                .map(|b| height[b] + 1)
                .max()
                .unwrap_or(0);
        }
        height
    }

    /// Elements sorted by `(height, index)`: a fixed linear extension of the
    /// order, bottom first and top last.
    pub fn linear_extension(&self) -> Vec<Element> {
        let height = self.heights();
        let mut order: Vec<Element> = self.elements().collect();
        order.sort_by_key(|&a| (height[a], a));
        order
    }

    /// Renders an element set as `{x, y, ...}` using display names.
    pub fn render_set(&self, set: &ElementSet) -> String {
        let parts: Vec<&str> = set.iter().map(|i| self.name(i)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// A full element set over this lattice.
    pub fn element_set<I: IntoIterator<Item = Element>>(&self, members: I) -> ElementSet {
        ElementSet::from_indices(self.size(), members)
    }

    /// Element set from display names. Unknown names are reported.
    pub fn element_set_by_name<S: AsRef<str>>(&self, members: &[S]) -> Result<ElementSet> {
        let mut set = ElementSet::empty(self.size());
        for m in members {
            set.insert(lookup(&self.index, m.as_ref())?);
        }
        Ok(set)
    }
}

fn name_index(names: &[String]) -> Result<HashMap<String, Element>> {
    if names.is_empty() {
        return Err(Error::EmptyLattice);
    }
    let mut index = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(Error::DuplicateName(name.clone()));
        }
    }
    Ok(index)
}

fn lookup(index: &HashMap<String, Element>, name: &str) -> Result<Element> {
    index.get(name).copied().ok_or_else(|| Error::UnknownName(name.to_owned()))
}
