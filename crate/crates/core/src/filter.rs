//! Filters and filter families.
//!
//! A filter is a nonempty, upward-closed, meet-closed element set. The whole
//! carrier is a filter (the improper one, `[bottom)`); prime filters are
//! additionally proper.
//!
//! Families are kept in canonical order (cardinality, then ascending member
//! lists), so a family index names the same filter on every run.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::bitset::{ElementSet, IndexSet};
use crate::error::{Error, Result};
use crate::lattice::{Element, Lattice, LatticeId};

/// Above this size `all_filters` skips subset enumeration and returns the
/// principal filters directly.
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Filter {
    members: ElementSet,
}

impl Filter {
    /// Validates `members` against `lattice`.
    pub fn new(lattice: &Lattice, members: ElementSet) -> Result<Self, FilterDefect> {
        check_filter(lattice, &members)?;
        Ok(Filter { members })
    }

    pub(crate) fn from_trusted(members: ElementSet) -> Self {
        Filter { members }
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn contains(&self, a: Element) -> bool {
        self.members.contains(a)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Why an element set is not a filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterDefect {
    Empty,
    /// Outside the lattice's index range.
    OutOfRange { index: usize },
    /// `x` is a member, `x <= y`, but `y` is not.
    NotUpwardClosed { x: Element, y: Element },
    /// `x` and `y` are members but `x ∧ y` is not.
    NotMeetClosed { x: Element, y: Element },
}

impl FilterDefect {
    pub fn describe(&self, lattice: &Lattice) -> String {
        match *self {
            FilterDefect::Empty => "empty".to_owned(),
            FilterDefect::OutOfRange { index } => format!("index {index} out of range"),
            FilterDefect::NotUpwardClosed { x, y } => format!(
                "missing {} above {}",
                lattice.name(y),
                lattice.name(x)
            ),
            FilterDefect::NotMeetClosed { x, y } => {
                format!("missing {}∧{}", lattice.name(x), lattice.name(y))
            }
        }
    }
}

pub fn check_filter(lattice: &Lattice, set: &ElementSet) -> Result<(), FilterDefect> {
    if set.universe() != lattice.size() {
        return Err(FilterDefect::OutOfRange {
            index: set.universe().max(lattice.size()),
        });
    }
    if set.is_empty() {
        return Err(FilterDefect::Empty);
    }
    for x in set.iter() {
        if let Some(y) = lattice.up_set(x).difference(set).first() {
            return Err(FilterDefect::NotUpwardClosed { x, y });
        }
    }
    for x in set.iter() {
        for y in set.iter().filter(|&y| y > x) {
            if !set.contains(lattice.meet_of(x, y)) {
                return Err(FilterDefect::NotMeetClosed { x, y });
            }
        }
    }
    Ok(())
}

pub fn is_filter(lattice: &Lattice, set: &ElementSet) -> bool {
    check_filter(lattice, set).is_ok()
}

/// A proper filter `S` such that `a ∨ b ∈ S` implies `a ∈ S` or `b ∈ S`.
pub fn is_prime_filter(lattice: &Lattice, set: &ElementSet) -> bool {
    if !is_filter(lattice, set) || set.is_full() {
        return false;
    }
    lattice.elements().all(|a| {
        lattice
            .elements()
            .all(|b| !set.contains(lattice.join_of(a, b)) || set.contains(a) || set.contains(b))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    All,
    Principal,
    Prime,
    Custom,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::All => "all",
            FamilyKind::Principal => "principal",
            FamilyKind::Prime => "prime",
            FamilyKind::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilyId(u64);

impl FamilyId {
    fn fresh() -> Self {
        static NEXT: AtomicU64 = AtomicU64::new(0);
        FamilyId(NEXT.fetch_add(1, Ordering::Relaxed))
    }
}

/// A finite set of filters of one lattice, in canonical order.
#[derive(Debug, Clone)]
pub struct FilterFamily {
    id: FamilyId,
    lattice: LatticeId,
    lattice_size: usize,
    kind: FamilyKind,
    filters: Vec<Filter>,
    position: HashMap<ElementSet, usize>,
    /// `above[i] = { j : filters[i] ⊆ filters[j] }`.
    above: Vec<IndexSet>,
}

impl FilterFamily {
    fn assemble(lattice: &Lattice, kind: FamilyKind, mut sets: Vec<ElementSet>) -> Self {
        sets.sort();
        sets.dedup();
        let position = sets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let above = sets
            .iter()
            .map(|x| IndexSet::from_indices(sets.len(), (0..sets.len()).filter(|&j| x.is_subset(&sets[j]))))
            .collect();
        FilterFamily {
            id: FamilyId::fresh(),
            lattice: lattice.id(),
            lattice_size: lattice.size(),
            kind,
            filters: sets.into_iter().map(Filter::from_trusted).collect(),
            position,
            above,
        }
    }

    /// A custom family; every set is validated as a filter. Duplicates are
    /// merged.
    pub fn custom(lattice: &Lattice, sets: Vec<ElementSet>) -> Result<Self> {
        for s in &sets {
            check_filter(lattice, s).map_err(|d| Error::NotAFilter(d.describe(lattice)))?;
        }
        Ok(Self::assemble(lattice, FamilyKind::Custom, sets))
    }

    pub fn id(&self) -> FamilyId {
        self.id
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.filters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filters.is_empty()
    }

    pub fn filters(&self) -> &[Filter] {
        &self.filters
    }

    pub fn get(&self, i: usize) -> Option<&Filter> {
        self.filters.get(i)
    }

    /// Family index of the filter with exactly these members.
    pub fn position(&self, members: &ElementSet) -> Option<usize> {
        self.position.get(members).copied()
    }

    /// Family indices of members that include `filters[i]`.
    pub fn above(&self, i: usize) -> &IndexSet {
        &self.above[i]
    }

    pub fn is_over(&self, lattice: &Lattice) -> bool {
        self.lattice == lattice.id() && self.lattice_size == lattice.size()
    }

    pub(crate) fn ensure_over(&self, lattice: &Lattice) -> Result<()> {
        if self.is_over(lattice) {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }

    /// The same filters as plain element sets.
    pub fn member_sets(&self) -> Vec<ElementSet> {
        self.filters.iter().map(|f| f.members.clone()).collect()
    }
}

/// Every filter of `lattice`.
///
/// Up to [`BRUTE_FORCE_LIMIT`] elements the filters are found by a pruned
/// search over upward-closed sets and then checked against the principal
/// filters; a mismatch is a bug and panics. Above the limit the principal
/// filters are returned directly, since every filter of a finite lattice is
/// principal.
pub fn all_filters(lattice: &Lattice) -> FilterFamily {
    let principal = principal_filters(lattice);
    if lattice.size() > BRUTE_FORCE_LIMIT {
        log::warn!(
            "lattice has {} elements; all_filters uses principal filters without the subset cross-check",
            lattice.size()
        );
        return FilterFamily::assemble(lattice, FamilyKind::All, principal.member_sets());
    }
    let found = FilterFamily::assemble(lattice, FamilyKind::All, enumerate_filters(lattice));
    assert_eq!(
        found.member_sets(),
        principal.member_sets(),
        "filter enumeration disagrees with the principal filters"
    );
    found
}

pub fn principal_filters(lattice: &Lattice) -> FilterFamily {
    let sets = lattice.elements().map(|a| lattice.up_set(a).clone()).collect();
    FilterFamily::assemble(lattice, FamilyKind::Principal, sets)
}

pub fn prime_filters(lattice: &Lattice) -> FilterFamily {
    let sets = all_filters(lattice)
        .member_sets()
        .into_iter()
        .filter(|s| is_prime_filter(lattice, s))
        .collect();
    FilterFamily::assemble(lattice, FamilyKind::Prime, sets)
}

/// Search over element sets deciding elements from the top down. An element
/// may join only when everything above it already has, and may stay out only
/// when it is not the meet of two members. Every nonempty leaf is a filter.
fn enumerate_filters(lattice: &Lattice) -> Vec<ElementSet> {
    let mut order = lattice.linear_extension();
    order.reverse();
    let mut out = Vec::new();
    let mut current = ElementSet::empty(lattice.size());
    search_filters(lattice, &order, 0, &mut current, &mut out);
    out
}

fn search_filters(
    lattice: &Lattice,
    order: &[Element],
    depth: usize,
    current: &mut ElementSet,
    out: &mut Vec<ElementSet>,
) {
    let Some(&x) = order.get(depth) else {
        if !current.is_empty() {
            out.push(current.clone());
        }
        return;
    };
    let mut strictly_above = lattice.up_set(x).clone();
    strictly_above.remove(x);
    if strictly_above.is_subset(current) {
        current.insert(x);
        search_filters(lattice, order, depth + 1, current, out);
        current.remove(x);
    }
    let forced = current
        .iter()
        .any(|y| current.iter().any(|z| lattice.meet_of(y, z) == x));
    if !forced {
        search_filters(lattice, order, depth + 1, current, out);
    }
}

/// Outcome of a separation check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Separation {
    Separating,
    /// No member contains exactly one of `a`, `b`.
    Unseparated { a: Element, b: Element },
}

impl Separation {
    pub fn holds(&self) -> bool {
        matches!(self, Separation::Separating)
    }
}

/// Whether every pair of distinct elements is split by some member of the
/// family. The first unseparated pair in index order is reported.
pub fn is_separating(lattice: &Lattice, family: &FilterFamily) -> Result<Separation> {
    family.ensure_over(lattice)?;
    for a in lattice.elements() {
        for b in lattice.elements().filter(|&b| b > a) {
            let split = family
                .filters()
                .iter()
                .any(|x| x.contains(a) != x.contains(b));
            if !split {
                return Ok(Separation::Unseparated { a, b });
            }
        }
    }
    Ok(Separation::Separating)
}

/// Two members whose union is not a filter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionWitness {
    pub x: usize,
    pub y: usize,
    pub union: ElementSet,
    pub defect: FilterDefect,
}

/// Looks for `X, Y` in the family whose union is not a filter, scanning pairs
/// in family order.
///
/// In a finite lattice the union of two filters is a filter only when one
/// contains the other, so the union then is a member again: `None` means the
/// family is closed under union.
pub fn union_closure_witness(lattice: &Lattice, family: &FilterFamily) -> Result<Option<UnionWitness>> {
    family.ensure_over(lattice)?;
    let members = family.filters();
    for (x, fx) in members.iter().enumerate() {
        for (y, fy) in members.iter().enumerate().skip(x + 1) {
            let union = fx.members().union(fy.members());
            if let Err(defect) = check_filter(lattice, &union) {
                return Ok(Some(UnionWitness { x, y, union, defect }));
            }
            debug_assert!(family.position(&union).is_some());
        }
    }
    Ok(None)
}
