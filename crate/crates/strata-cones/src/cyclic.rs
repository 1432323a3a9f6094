//! The cyclic index circle `E_n = {1, …, n}` and its chain diagrams.
//!
//! Everything downstream is indexed by residues mod `n`, written as the
//! canonical representatives `1, …, n`.  A *stratum* is a pair of subsets
//! `(R, S)` of `E_n` with `S` nonempty; the *chain diagram* connects `i` to
//! `i + 1` exactly when `i + 1 ∉ S`, with a plain edge when `i ∈ R` and a
//! dotted edge otherwise.  The map [`phi`] picks, for each stratum, the
//! unique sign set that is admissible for the diagram and positive at the
//! component heads; it is the combinatorial heart of the cone constructions
//! in [`crate::pcone`].

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Canonical 1-based index on the circle, always in `1..=n`.
pub type Index = usize;

/// Largest supported circle size (members are stored in a `u64` mask).
pub const MAX_CIRCLE: usize = 64;

/// Errors from cyclic-index arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclicError {
    /// The ambient circle size is zero or above [`MAX_CIRCLE`].
    #[error("invalid circle size n = {0}; expected 1 ≤ n ≤ {MAX_CIRCLE}")]
    InvalidCircle(usize),
    /// An index lies outside `1..=n`.
    #[error("index {index} out of range for circle of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    /// Two objects live on circles of different sizes.
    #[error("ambient size mismatch: expected n = {expected}, found n = {found}")]
    AmbientMismatch { expected: usize, found: usize },
    /// The operation requires a nonempty stratum `S`.
    #[error("empty stratum: S must be nonempty")]
    EmptyStratum,
    /// The index is not a member of the given set.
    #[error("index {index} is not a member of the set")]
    NotAMember { index: usize },
    /// The operation requires at least two stratum elements.
    #[error("stratum too small: |S| = {len}, need at least 2")]
    StratumTooSmall { len: usize },
}

/// Reduces an arbitrary integer to its canonical representative in `1..=n`.
///
/// ```
/// use strata_cones::cyclic::reduce;
/// assert_eq!(reduce(0, 8), 8);
/// assert_eq!(reduce(9, 8), 1);
/// assert_eq!(reduce(-4, 7), 3);
/// ```
pub fn reduce(k: i64, n: usize) -> Index {
    debug_assert!(n >= 1);
    let n = n as i64;
    let r = k.rem_euclid(n);
    if r == 0 {
        n as Index
    } else {
        r as Index
    }
}

/// A subset of the circle `E_n`, stored as a bitmask.
///
/// Members are canonical indices in `1..=n`; the set remembers its ambient
/// circle size, and operations between sets require equal ambients.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "Vec<usize>")]
pub struct IndexSet {
    n: usize,
    mask: u64,
}

impl From<IndexSet> for Vec<usize> {
    fn from(s: IndexSet) -> Self {
        s.members()
    }
}

impl IndexSet {
    fn check_n(n: usize) -> Result<(), CyclicError> {
        if n == 0 || n > MAX_CIRCLE {
            return Err(CyclicError::InvalidCircle(n));
        }
        Ok(())
    }

    /// The empty subset of `E_n`.
    pub fn empty(n: usize) -> Result<Self, CyclicError> {
        Self::check_n(n)?;
        Ok(IndexSet { n, mask: 0 })
    }

    /// The full circle `E_n`.
    pub fn full(n: usize) -> Result<Self, CyclicError> {
        Self::check_n(n)?;
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Ok(IndexSet { n, mask })
    }

    /// Builds a set from 1-based members, rejecting out-of-range indices.
    pub fn from_members<I>(n: usize, members: I) -> Result<Self, CyclicError>
    where
        I: IntoIterator<Item = usize>,
    {
        Self::check_n(n)?;
        let mut mask = 0u64;
        for i in members {
            if i == 0 || i > n {
                return Err(CyclicError::IndexOutOfRange { index: i, n });
            }
            mask |= 1 << (i - 1);
        }
        Ok(IndexSet { n, mask })
    }

    /// Ambient circle size.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        *self == IndexSet::full(self.n).expect("ambient validated at construction")
    }

    /// Membership of a canonical index; out-of-range indices are never members.
    pub fn contains(&self, i: Index) -> bool {
        i >= 1 && i <= self.n && self.mask & (1 << (i - 1)) != 0
    }

    /// Members in ascending order.
    pub fn members(&self) -> Vec<Index> {
        (1..=self.n).filter(|&i| self.contains(i)).collect()
    }

    /// Iterates members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = Index> + '_ {
        (1..=self.n).filter(|&i| self.contains(i))
    }

    /// The set with `i` added (must be in range).
    pub fn with(&self, i: Index) -> Result<Self, CyclicError> {
        if i == 0 || i > self.n {
            return Err(CyclicError::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(IndexSet {
            n: self.n,
            mask: self.mask | (1 << (i - 1)),
        })
    }

    /// The set with `i` removed; errors if `i` is not a member.
    pub fn without(&self, i: Index) -> Result<Self, CyclicError> {
        if !self.contains(i) {
            return Err(CyclicError::NotAMember { index: i });
        }
        Ok(IndexSet {
            n: self.n,
            mask: self.mask & !(1 << (i - 1)),
        })
    }

    /// The complement within `E_n`.
    pub fn complement(&self) -> Self {
        let full = IndexSet::full(self.n).expect("ambient validated at construction");
        IndexSet {
            n: self.n,
            mask: full.mask & !self.mask,
        }
    }

    /// Raw membership mask (bit `i - 1` set iff `i` is a member).
    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Rebuilds a set from a raw mask, rejecting bits outside `1..=n`.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self, CyclicError> {
        let full = IndexSet::full(n)?;
        if mask & !full.mask != 0 {
            return Err(CyclicError::IndexOutOfRange {
                index: (64 - mask.leading_zeros()) as usize,
                n,
            });
        }
        Ok(IndexSet { n, mask })
    }

    /// The sign `δ^{(i)}`: `-1` if `i` is a member, `+1` otherwise.
    ///
    /// The index is reduced mod `n` first, so any integer is accepted.
    pub fn sign_at(&self, k: i64) -> i64 {
        if self.contains(reduce(k, self.n)) {
            -1
        } else {
            1
        }
    }

    /// Enumerates all subsets of `E_n` (ascending mask order).
    pub fn all_subsets(n: usize) -> Result<impl Iterator<Item = IndexSet>, CyclicError> {
        Self::check_n(n)?;
        if n > 32 {
            // 2^n iterations would be astronomically large anyway.
            return Err(CyclicError::InvalidCircle(n));
        }
        Ok((0u64..(1u64 << n)).map(move |mask| IndexSet { n, mask }))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Cyclic interval kinds: which endpoints are included.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IntervalKind {
    /// `[a, b]`
    Closed,
    /// `]a, b]`
    OpenLeft,
    /// `[a, b[`
    OpenRight,
    /// `]a, b[`
    Open,
}

/// The cyclic interval from `a` to `b`, walking forward, in walk order.
///
/// The closed interval starts at `a` and walks forward (wrapping past `n`)
/// until it reaches `b`; the open variants drop the corresponding endpoints.
/// In particular `interval(a, a, n, Closed)` is `{a}` and the half-open
/// variants of it are empty.
pub fn interval(a: Index, b: Index, n: usize, kind: IntervalKind) -> Result<Vec<Index>, CyclicError> {
    IndexSet::check_n(n)?;
    for i in [a, b] {
        if i == 0 || i > n {
            return Err(CyclicError::IndexOutOfRange { index: i, n });
        }
    }
    let len = reduce(b as i64 - a as i64, n as usize);
    // `len` is the walk length from a to b, in 1..=n; a == b gives n ... except
    // that a closed interval [a, a] is the single point, not the full circle.
    let steps = if a == b { 0 } else { len };
    let mut out: Vec<Index> = (0..=steps).map(|k| reduce(a as i64 + k as i64, n)).collect();
    match kind {
        IntervalKind::Closed => {}
        IntervalKind::OpenLeft => {
            out.remove(0);
        }
        IntervalKind::OpenRight => {
            out.pop();
        }
        IntervalKind::Open => {
            out.remove(0);
            if !out.is_empty() {
                out.pop();
            }
        }
    }
    Ok(out)
}

/// The element of `S` that follows `x` strictly cyclically.
///
/// Walks forward from `x + 1`; a singleton `S = {s}` wraps back to `s`.
pub fn follows(x: Index, s: &IndexSet) -> Result<Index, CyclicError> {
    let n = s.n();
    if x == 0 || x > n {
        return Err(CyclicError::IndexOutOfRange { index: x, n });
    }
    if s.is_empty() {
        return Err(CyclicError::EmptyStratum);
    }
    for k in 1..=n as i64 {
        let c = reduce(x as i64 + k, n);
        if s.contains(c) {
            return Ok(c);
        }
    }
    unreachable!("nonempty set must contain a successor")
}

/// The gap `γ(x)`: the smallest `γ ≥ 1` with `x - γ ∈ S`.
///
/// For `x ∈ S` this is the size of the chain-diagram component whose head
/// is `x - 1`; a singleton `S = {x}` gives `γ(x) = n`.
pub fn gamma(x: Index, s: &IndexSet) -> Result<usize, CyclicError> {
    let n = s.n();
    if x == 0 || x > n {
        return Err(CyclicError::IndexOutOfRange { index: x, n });
    }
    if s.is_empty() {
        return Err(CyclicError::EmptyStratum);
    }
    for g in 1..=n as i64 {
        if s.contains(reduce(x as i64 - g, n)) {
            return Ok(g as usize);
        }
    }
    unreachable!("nonempty set must contain a predecessor")
}

/// Edge style in a chain diagram.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    /// `from ∈ R`: membership propagates equally across the edge.
    Plain,
    /// `from ∉ R`: membership alternates across the edge.
    Dotted,
}

/// An edge `from — from+1` of the chain diagram.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Edge {
    pub from: Index,
    pub to: Index,
    pub kind: EdgeKind,
}

/// A connected component of the chain diagram.
///
/// Members are listed in walk order from tail to head.  The tail is the
/// unique stratum element in the component; the head is the vertex whose
/// successor starts the next component.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Component {
    pub members: Vec<Index>,
    pub tail: Index,
    pub head: Index,
}

/// The chain diagram `Γ_n(R, S)`.
///
/// Vertices are `1..=n`; `i` and `i + 1` are joined exactly when
/// `i + 1 ∉ S`, by a plain edge when `i ∈ R` and a dotted edge otherwise.
/// Components are in bijection with `S` (each contains exactly one stratum
/// element, its tail) and the heads are exactly `{s - 1 : s ∈ S}`.
///
/// When `|S| = 1` the diagram is a single path covering the whole circle;
/// the tail/head convention (tail `s`, head `s - 1`) still applies.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ChainDiagram {
    n: usize,
    r: IndexSet,
    s: IndexSet,
    edges: Vec<Edge>,
    components: Vec<Component>,
}

impl ChainDiagram {
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn r(&self) -> &IndexSet {
        &self.r
    }
    pub fn s(&self) -> &IndexSet {
        &self.s
    }
    /// Edges in ascending order of `from`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    /// Components in ascending order of tail.
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// The component containing index `i`.
    pub fn component_of(&self, i: Index) -> &Component {
        self.components
            .iter()
            .find(|c| c.members.contains(&i))
            .expect("components partition the circle")
    }

    /// Whether `T` is admissible for this diagram: every dotted edge has
    /// exactly one endpoint in `T`, every plain edge has both or neither.
    pub fn is_admissible(&self, t: &IndexSet) -> Result<bool, CyclicError> {
        if t.n() != self.n {
            return Err(CyclicError::AmbientMismatch {
                expected: self.n,
                found: t.n(),
            });
        }
        Ok(self.edges.iter().all(|e| {
            let (a, b) = (t.contains(e.from), t.contains(e.to));
            match e.kind {
                EdgeKind::Plain => a == b,
                EdgeKind::Dotted => a != b,
            }
        }))
    }
}

fn check_stratum(n: usize, r: &IndexSet, s: &IndexSet) -> Result<(), CyclicError> {
    IndexSet::check_n(n)?;
    for set in [r, s] {
        if set.n() != n {
            return Err(CyclicError::AmbientMismatch {
                expected: n,
                found: set.n(),
            });
        }
    }
    if s.is_empty() {
        return Err(CyclicError::EmptyStratum);
    }
    Ok(())
}

/// Builds the chain diagram `Γ_n(R, S)`.  `S` must be nonempty.
pub fn chain_diagram(n: usize, r: &IndexSet, s: &IndexSet) -> Result<ChainDiagram, CyclicError> {
    check_stratum(n, r, s)?;
    let edges: Vec<Edge> = (1..=n)
        .filter_map(|i| {
            let to = reduce(i as i64 + 1, n);
            if s.contains(to) {
                None
            } else {
                Some(Edge {
                    from: i,
                    to,
                    kind: if r.contains(i) {
                        EdgeKind::Plain
                    } else {
                        EdgeKind::Dotted
                    },
                })
            }
        })
        .collect();
    let components = s
        .iter()
        .map(|tail| {
            let head = reduce(follows(tail, s)? as i64 - 1, n);
            let members = if s.len() == 1 {
                // Single component covering the whole circle, walked from the tail.
                interval(tail, reduce(tail as i64 - 1, n), n, IntervalKind::Closed)?
            } else {
                interval(tail, head, n, IntervalKind::Closed)?
            };
            Ok(Component { members, tail, head })
        })
        .collect::<Result<Vec<_>, CyclicError>>()?;
    Ok(ChainDiagram {
        n,
        r: *r,
        s: *s,
        edges,
        components,
    })
}

/// The sign set `Φ_R(S)`: the unique subset of `E_n` that is admissible for
/// the chain diagram and agrees with `R` at every component head.
///
/// Anchoring at the heads and propagating backwards along each component
/// determines membership everywhere; uniqueness is exercised by the
/// exhaustive tests below.  `S` must be nonempty.
pub fn phi(n: usize, r: &IndexSet, s: &IndexSet) -> Result<IndexSet, CyclicError> {
    let diagram = chain_diagram(n, r, s)?;
    let mut t = IndexSet::empty(n)?;
    for comp in diagram.components() {
        // Head anchor: h ∈ T ⟺ h ∈ R.
        let mut in_t = r.contains(comp.head);
        if in_t {
            t = t.with(comp.head)?;
        }
        // Walk backwards from the head; edge (i, i+1) relates i to i+1.
        for &i in comp.members.iter().rev().skip(1) {
            in_t = if r.contains(i) { in_t } else { !in_t };
            if in_t {
                t = t.with(i)?;
            }
        }
    }
    Ok(t)
}

/// The closed-form variant of `phi` published for the case `R = ∅`:
/// `{s - i : s ∈ S, i odd, 1 ≤ i < γ(s)}`.
///
/// This formula disagrees with [`phi`] in general; the verification suites
/// adjudicate the two against the recursion oracle and record the outcome
/// in the report's discrepancy ledger.
pub fn phi_paper_variant(n: usize, s: &IndexSet) -> Result<IndexSet, CyclicError> {
    IndexSet::check_n(n)?;
    if s.n() != n {
        return Err(CyclicError::AmbientMismatch {
            expected: n,
            found: s.n(),
        });
    }
    if s.is_empty() {
        return Err(CyclicError::EmptyStratum);
    }
    let mut t = IndexSet::empty(n)?;
    for x in s.iter() {
        let g = gamma(x, s)?;
        for i in (1..g).step_by(2) {
            t = t.with(reduce(x as i64 - i as i64, n))?;
        }
    }
    Ok(t)
}

/// Whether `j ∈ S` is removable: `Φ_R(S) = Φ_R(S \ {j})`.
///
/// Requires `j ∈ S` and `|S| ≥ 2`.
pub fn is_removable(j: Index, n: usize, r: &IndexSet, s: &IndexSet) -> Result<bool, CyclicError> {
    check_stratum(n, r, s)?;
    if !s.contains(j) {
        return Err(CyclicError::NotAMember { index: j });
    }
    if s.len() < 2 {
        return Err(CyclicError::StratumTooSmall { len: s.len() });
    }
    Ok(phi(n, r, s)? == phi(n, r, &s.without(j)?)?)
}

/// Whether the stratum is irreducible: no single element is removable.
///
/// A singleton stratum is vacuously irreducible (removability needs
/// `|S| ≥ 2`).
pub fn is_irreducible(n: usize, r: &IndexSet, s: &IndexSet) -> Result<bool, CyclicError> {
    check_stratum(n, r, s)?;
    if s.len() < 2 {
        return Ok(true);
    }
    for j in s.iter() {
        if is_removable(j, n, r, s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cyclic rotation by `σ^t` (`σ` sends index `i` to `i + 1`).
pub trait SigmaShift {
    fn sigma_shift(&self, t: i64) -> Self;
}

impl SigmaShift for IndexSet {
    fn sigma_shift(&self, t: i64) -> Self {
        let shifted = self.iter().map(|i| reduce(i as i64 + t, self.n));
        IndexSet::from_members(self.n, shifted).expect("shift preserves range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, members: &[usize]) -> IndexSet {
        IndexSet::from_members(n, members.iter().copied()).unwrap()
    }

    #[test]
    fn reduce_canonical_representatives() {
        assert_eq!(reduce(0, 8), 8);
        assert_eq!(reduce(9, 8), 1);
        assert_eq!(reduce(-4, 7), 3);
        assert_eq!(reduce(7, 7), 7);
        assert_eq!(reduce(-7, 7), 7);
        assert_eq!(reduce(1, 1), 1);
        assert_eq!(reduce(-5, 1), 1);
    }

    #[test]
    fn interval_walks_forward_cyclically() {
        assert_eq!(
            interval(6, 3, 8, IntervalKind::Closed).unwrap(),
            vec![6, 7, 8, 1, 2, 3]
        );
        assert_eq!(
            interval(6, 3, 8, IntervalKind::OpenLeft).unwrap(),
            vec![7, 8, 1, 2, 3]
        );
        assert_eq!(
            interval(6, 3, 8, IntervalKind::OpenRight).unwrap(),
            vec![6, 7, 8, 1, 2]
        );
        assert_eq!(
            interval(6, 3, 8, IntervalKind::Open).unwrap(),
            vec![7, 8, 1, 2]
        );
        assert_eq!(interval(4, 4, 8, IntervalKind::Closed).unwrap(), vec![4]);
        assert!(interval(4, 4, 8, IntervalKind::OpenRight).unwrap().is_empty());
        assert!(interval(4, 5, 8, IntervalKind::Open).unwrap().is_empty());
        assert!(interval(0, 3, 8, IntervalKind::Closed).is_err());
    }

    #[test]
    fn follows_wraps_and_handles_singletons() {
        assert_eq!(follows(4, &set(8, &[4, 6])).unwrap(), 6);
        assert_eq!(follows(6, &set(8, &[4, 6])).unwrap(), 4);
        assert_eq!(follows(2, &set(5, &[2])).unwrap(), 2);
        assert_eq!(follows(1, &set(8, &[4, 6])).unwrap(), 4);
        assert!(follows(1, &IndexSet::empty(8).unwrap()).is_err());
    }

    #[test]
    fn gamma_counts_back_to_the_stratum() {
        assert_eq!(gamma(3, &set(7, &[1, 3])).unwrap(), 2);
        assert_eq!(gamma(1, &set(7, &[1, 3])).unwrap(), 5);
        assert_eq!(gamma(2, &set(2, &[2])).unwrap(), 2);
    }

    #[test]
    fn chain_diagram_running_example() {
        // n = 8, R = {1,3}, S = {4,6}: components {4,5} and {6,7,8,1,2,3}.
        let d = chain_diagram(8, &set(8, &[1, 3]), &set(8, &[4, 6])).unwrap();
        let comps = d.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].members, vec![4, 5]);
        assert_eq!((comps[0].tail, comps[0].head), (4, 5));
        assert_eq!(comps[1].members, vec![6, 7, 8, 1, 2, 3]);
        assert_eq!((comps[1].tail, comps[1].head), (6, 3));
        // Edge kinds: only (1,2) is plain (1 ∈ R and 2 ∉ S).
        let plain: Vec<Index> = d
            .edges()
            .iter()
            .filter(|e| e.kind == EdgeKind::Plain)
            .map(|e| e.from)
            .collect();
        assert_eq!(plain, vec![1]);
        // No edges into stratum elements.
        assert!(d.edges().iter().all(|e| !d.s().contains(e.to)));
    }

    #[test]
    fn chain_diagram_all_dotted_example() {
        let d = chain_diagram(7, &IndexSet::empty(7).unwrap(), &set(7, &[1, 3])).unwrap();
        let comps = d.components();
        assert_eq!(comps[0].members, vec![1, 2]);
        assert_eq!((comps[0].tail, comps[0].head), (1, 2));
        assert_eq!(comps[1].members, vec![3, 4, 5, 6, 7]);
        assert_eq!((comps[1].tail, comps[1].head), (3, 7));
        assert!(d.edges().iter().all(|e| e.kind == EdgeKind::Dotted));
    }

    #[test]
    fn chain_diagram_singleton_covers_circle() {
        let d = chain_diagram(5, &IndexSet::empty(5).unwrap(), &set(5, &[2])).unwrap();
        let comps = d.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].members, vec![2, 3, 4, 5, 1]);
        assert_eq!((comps[0].tail, comps[0].head), (2, 1));
        assert_eq!(d.edges().len(), 4);
    }

    #[test]
    fn empty_stratum_is_rejected() {
        let empty = IndexSet::empty(6).unwrap();
        let r = set(6, &[1]);
        assert_eq!(
            chain_diagram(6, &r, &empty).unwrap_err(),
            CyclicError::EmptyStratum
        );
        assert_eq!(phi(6, &r, &empty).unwrap_err(), CyclicError::EmptyStratum);
        assert_eq!(
            phi_paper_variant(6, &empty).unwrap_err(),
            CyclicError::EmptyStratum
        );
    }

    #[test]
    fn admissibility_rules() {
        let d = chain_diagram(8, &set(8, &[1, 3]), &set(8, &[4, 6])).unwrap();
        assert!(d.is_admissible(&set(8, &[3, 4, 6, 8])).unwrap());
        // Flipping membership at a single dotted-edge endpoint breaks it.
        assert!(!d.is_admissible(&set(8, &[3, 4, 5, 6, 8])).unwrap());
        // A diagram with a plain edge relates 1 and 2 equally.
        assert!(!d.is_admissible(&set(8, &[1, 4, 6])).unwrap());
    }

    #[test]
    fn phi_running_example() {
        assert_eq!(
            phi(8, &set(8, &[1, 3]), &set(8, &[4, 6])).unwrap(),
            set(8, &[3, 4, 6, 8])
        );
    }

    #[test]
    fn phi_pipeline_value_for_the_adjudicated_example() {
        // n = 7, R = ∅, S = {1,3}: the pipeline yields {1,4,6}; the verify
        // suites confirm this value against the recursion oracle.
        assert_eq!(
            phi(7, &IndexSet::empty(7).unwrap(), &set(7, &[1, 3])).unwrap(),
            set(7, &[1, 4, 6])
        );
    }

    #[test]
    fn phi_on_the_full_stratum_returns_r() {
        for n in 1..=12 {
            for r_mask in 0..(1u64 << n) {
                let r = IndexSet::from_mask(n, r_mask).unwrap();
                let full = IndexSet::full(n).unwrap();
                assert_eq!(phi(n, &r, &full).unwrap(), r, "n={n} R={r}");
            }
        }
    }

    #[test]
    fn phi_is_the_unique_admissible_positive_sign_set() {
        // Exhaustive over n ≤ 10: T = phi(n,R,S) is admissible, positive at
        // heads, and no other subset of E_n is both.  The inner scan over all
        // 2^n candidates runs on raw masks; rot moves the bit of index i+1
        // onto the bit of index i.
        for n in 1..=10usize {
            let full: u64 = (1u64 << n) - 1;
            let rot = |m: u64| ((m >> 1) | ((m & 1) << (n - 1))) & full;
            for r_mask in 0..=full {
                for s_mask in 1..=full {
                    let edges = full & !rot(s_mask);
                    let plain = edges & r_mask;
                    let dotted = edges & !r_mask;
                    let heads = rot(s_mask);
                    let r = IndexSet::from_mask(n, r_mask).unwrap();
                    let s = IndexSet::from_mask(n, s_mask).unwrap();
                    let t = phi(n, &r, &s).unwrap().mask();
                    let mut count = 0u32;
                    for cand in 0..=full {
                        let diff = cand ^ rot(cand);
                        let admissible = diff & dotted == dotted && diff & plain == 0;
                        let positive = (cand ^ r_mask) & heads == 0;
                        if admissible && positive {
                            count += 1;
                            assert_eq!(cand, t, "n={n} R={r} S={s}");
                        }
                    }
                    assert_eq!(count, 1, "n={n} R={r} S={s}");
                }
            }
        }
    }

    #[test]
    fn phi_is_sigma_equivariant() {
        for n in [5usize, 7, 8] {
            for r_mask in 0..(1u64 << n) {
                let r = IndexSet::from_mask(n, r_mask).unwrap();
                for s_mask in 1..(1u64 << n) {
                    let s = IndexSet::from_mask(n, s_mask).unwrap();
                    for t in [1i64, 3] {
                        let lhs = phi(n, &r.sigma_shift(t), &s.sigma_shift(t)).unwrap();
                        let rhs = phi(n, &r, &s).unwrap().sigma_shift(t);
                        assert_eq!(lhs, rhs, "n={n} R={r} S={s} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn phi_matches_corrected_closed_form_when_r_is_empty() {
        // For R = ∅ the head-anchored walk gives {s - i : i even, 2 ≤ i ≤ γ(s)};
        // the published odd-index variant disagrees (see the discrepancy ledger).
        for n in 1..=8usize {
            let r = IndexSet::empty(n).unwrap();
            for s in IndexSet::all_subsets(n).unwrap().filter(|s| !s.is_empty()) {
                let mut expect = IndexSet::empty(n).unwrap();
                for x in s.iter() {
                    let g = gamma(x, &s).unwrap();
                    for i in (2..=g).step_by(2) {
                        expect = expect.with(reduce(x as i64 - i as i64, n)).unwrap();
                    }
                }
                assert_eq!(phi(n, &r, &s).unwrap(), expect, "n={n} S={s}");
            }
        }
    }

    #[test]
    fn paper_variant_frozen_values() {
        assert_eq!(
            phi_paper_variant(7, &set(7, &[1, 3])).unwrap(),
            set(7, &[2, 5, 7])
        );
        assert_eq!(phi_paper_variant(2, &set(2, &[2])).unwrap(), set(2, &[1]));
        for n in 1..=8 {
            let full = IndexSet::full(n).unwrap();
            assert!(phi_paper_variant(n, &full).unwrap().is_empty());
        }
    }

    #[test]
    fn removability_frozen_values() {
        let empty7 = IndexSet::empty(7).unwrap();
        assert!(is_removable(1, 7, &empty7, &set(7, &[1, 3])).unwrap());
        let empty2 = IndexSet::empty(2).unwrap();
        assert!(!is_removable(1, 2, &empty2, &set(2, &[1, 2])).unwrap());
        assert!(is_irreducible(2, &empty2, &set(2, &[1, 2])).unwrap());
        let empty4 = IndexSet::empty(4).unwrap();
        assert!(is_removable(1, 4, &empty4, &set(4, &[1, 3])).unwrap());
        assert!(is_removable(3, 4, &empty4, &set(4, &[1, 3])).unwrap());
        assert!(!is_irreducible(4, &empty4, &set(4, &[1, 3])).unwrap());
        // Preconditions.
        assert!(is_removable(2, 4, &empty4, &set(4, &[1, 3])).is_err());
        assert!(is_removable(1, 4, &empty4, &set(4, &[1])).is_err());
    }

    #[test]
    fn index_set_basics() {
        let s = set(8, &[4, 6]);
        assert_eq!(s.members(), vec![4, 6]);
        assert_eq!(s.len(), 2);
        assert!(!s.contains(5));
        assert!(!s.contains(0));
        assert_eq!(s.complement().members(), vec![1, 2, 3, 5, 7, 8]);
        assert_eq!(s.to_string(), "{4,6}");
        assert_eq!(IndexSet::empty(3).unwrap().to_string(), "{}");
        assert_eq!(s.sign_at(4), -1);
        assert_eq!(s.sign_at(5), 1);
        assert_eq!(s.sign_at(12), -1);
        assert_eq!(s.sign_at(0), 1);
        assert!(IndexSet::from_members(4, [5]).is_err());
        assert!(IndexSet::from_members(0, []).is_err());
        assert_eq!(s.sigma_shift(3).members(), vec![1, 7]);
        assert_eq!(s.sigma_shift(-4).members(), vec![2, 8]);
        assert_eq!(s.sigma_shift(8), s);
    }
}
