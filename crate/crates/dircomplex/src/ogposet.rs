//! Oriented graded posets: Hasse diagrams with signed covering edges,
//! closure, input/output boundaries, thinness, and skeleta.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::set::ElemSet;

/// Orientation label on a covering edge, with the sign-rule multiplication.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    /// Sign-rule product: like signs give `+`, unlike signs give `-`.
    pub fn mul(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// `(-)^k` as a sign.
    pub fn from_parity(k: usize) -> Sign {
        if k % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Which boundary to take.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Minus,
    Plus,
    Both,
}

impl From<Sign> for Side {
    fn from(s: Sign) -> Side {
        match s {
            Sign::Minus => Side::Minus,
            Sign::Plus => Side::Plus,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("cover refers to unknown element index {0}")]
    UnknownIndex(usize),
    #[error("duplicate cover edge {upper} -> {lower}")]
    DuplicateEdge { upper: usize, lower: usize },
    #[error("covering relation contains a cycle")]
    CyclicCovers,
    #[error("cover {upper} -> {lower} is implied by a chain of shorter covers")]
    TransitiveEdge { upper: usize, lower: usize },
    #[error("element {0} has descending paths of unequal length")]
    NotGraded(usize),
    #[error("element {element} declares dimension {declared} but grading computes {computed}")]
    DimMismatch {
        element: usize,
        declared: usize,
        computed: usize,
    },
    #[error("duplicate element name {0:?}")]
    DuplicateName(String),
}

/// Raw element descriptor fed to [`build_ogp`].
#[derive(Clone, Debug)]
pub struct RawElement {
    pub name: String,
    pub dim: Option<usize>,
}

impl RawElement {
    pub fn named(name: impl Into<String>) -> Self {
        RawElement {
            name: name.into(),
            dim: None,
        }
    }

    pub fn with_dim(name: impl Into<String>, dim: usize) -> Self {
        RawElement {
            name: name.into(),
            dim: Some(dim),
        }
    }
}

/// A finite graded poset with a `{+,-}`-labelled Hasse diagram.
///
/// Elements are indexed `0..size()`, ordered by (dimension, construction
/// order); the poset is immutable after construction and all validity checks
/// run in [`build_ogp`]. Covers are stored in both directions.
#[derive(Clone, Debug)]
pub struct OrientedGradedPoset {
    names: Vec<String>,
    dims: Vec<usize>,
    /// `up[x]` lists `(y, sign)` for every `y` covering `x`.
    up: Vec<Vec<(usize, Sign)>>,
    /// `down[x]` lists `(y, sign)` for every `y` covered by `x`.
    down: Vec<Vec<(usize, Sign)>>,
    downsets: Vec<ElemSet>,
    by_dim: Vec<Vec<usize>>,
}

pub type Poset = Arc<OrientedGradedPoset>;

/// Validates raw data and returns the poset together with the permutation
/// `old index -> new index` produced by the canonical (dim, input order) sort.
pub fn build_ogp(
    elements: Vec<RawElement>,
    covers: &[(usize, usize, Sign)],
) -> Result<(Poset, Vec<usize>), BuildError> {
    let n = elements.len();
    for &(u, l, _) in covers {
        if u >= n {
            return Err(BuildError::UnknownIndex(u));
        }
        if l >= n {
            return Err(BuildError::UnknownIndex(l));
        }
    }
    {
        let mut seen = HashMap::new();
        for &(u, l, _) in covers {
            if seen.insert((u, l), ()).is_some() {
                return Err(BuildError::DuplicateEdge { upper: u, lower: l });
            }
        }
    }
    {
        let mut names = HashMap::new();
        for e in &elements {
            if names.insert(e.name.clone(), ()).is_some() {
                return Err(BuildError::DuplicateName(e.name.clone()));
            }
        }
    }

    let mut down_raw: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut up_raw: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, l, _) in covers {
        down_raw[u].push(l);
        up_raw[l].push(u);
    }

    // Topological order along the cover DAG, top to bottom.
    let topo = toposort(n, &down_raw).ok_or(BuildError::CyclicCovers)?;

    // Downsets from the raw graph, needed for the transitive-reduction check.
    let mut downsets_raw: Vec<ElemSet> = vec![ElemSet::empty(n); n];
    for &x in topo.iter().rev() {
        let mut s = ElemSet::singleton(n, x);
        for &l in &down_raw[x] {
            s.union_with(&downsets_raw[l]);
        }
        downsets_raw[x] = s;
    }
    for &(u, l, _) in covers {
        for &m in &down_raw[u] {
            if m != l && downsets_raw[m].contains(l) {
                return Err(BuildError::TransitiveEdge { upper: u, lower: l });
            }
        }
    }

    // Grading: every cover drops dimension by exactly one.
    let mut dims = vec![0usize; n];
    for &x in topo.iter().rev() {
        if down_raw[x].is_empty() {
            dims[x] = 0;
        } else {
            let d0 = dims[down_raw[x][0]];
            if down_raw[x].iter().any(|&l| dims[l] != d0) {
                return Err(BuildError::NotGraded(x));
            }
            dims[x] = d0 + 1;
        }
    }
    for (i, e) in elements.iter().enumerate() {
        if let Some(d) = e.dim {
            if d != dims[i] {
                return Err(BuildError::DimMismatch {
                    element: i,
                    declared: d,
                    computed: dims[i],
                });
            }
        }
    }

    // Canonical enumeration: stable sort by (dim, input order).
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (dims[i], i));
    let mut perm = vec![0usize; n];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }

    let mut names = vec![String::new(); n];
    let mut new_dims = vec![0usize; n];
    for (old, e) in elements.into_iter().enumerate() {
        names[perm[old]] = e.name;
        new_dims[perm[old]] = dims[old];
    }
    let mut up: Vec<Vec<(usize, Sign)>> = vec![Vec::new(); n];
    let mut down: Vec<Vec<(usize, Sign)>> = vec![Vec::new(); n];
    let mut sorted_covers: Vec<(usize, usize, Sign)> = covers
        .iter()
        .map(|&(u, l, s)| (perm[u], perm[l], s))
        .collect();
    sorted_covers.sort();
    for (u, l, s) in sorted_covers {
        down[u].push((l, s));
        up[l].push((u, s));
    }

    let max_dim = new_dims.iter().copied().max().map_or(0, |d| d + 1);
    let mut by_dim = vec![Vec::new(); max_dim];
    for (i, &d) in new_dims.iter().enumerate() {
        by_dim[d].push(i);
    }

    let mut downsets: Vec<ElemSet> = vec![ElemSet::empty(n); n];
    for i in 0..n {
        // Indices are sorted by dim, so lower covers are already computed.
        let mut s = ElemSet::singleton(n, i);
        for &(l, _) in &down[i] {
            s.union_with(&downsets[l]);
        }
        downsets[i] = s;
    }

    Ok((
        Arc::new(OrientedGradedPoset {
            names,
            dims: new_dims,
            up,
            down,
            downsets,
            by_dim,
        }),
        perm,
    ))
}

fn toposort(n: usize, down: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    for lows in down {
        for &l in lows {
            indeg[l] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(x) = queue.pop() {
        out.push(x);
        for &l in &down[x] {
            indeg[l] -= 1;
            if indeg[l] == 0 {
                queue.push(l);
            }
        }
    }
    (out.len() == n).then_some(out)
}

/// Witness of a failed oriented-thinness check: the length-2 interval
/// `[lower, upper]` that is not a well-signed diamond. `lower = None` means
/// the synthesized bottom element of `P_bot`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinFailure {
    pub lower: Option<usize>,
    pub upper: usize,
}

impl OrientedGradedPoset {
    pub fn size(&self) -> usize {
        self.names.len()
    }

    /// Dimension of the whole poset; `-1` when empty.
    pub fn dim(&self) -> i64 {
        self.dims.iter().copied().max().map_or(-1, |d| d as i64)
    }

    pub fn dim_of(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Elements covering `x`, with edge signs.
    pub fn covers_up(&self, x: usize) -> &[(usize, Sign)] {
        &self.up[x]
    }

    /// Elements covered by `x`, with edge signs.
    pub fn covers_down(&self, x: usize) -> &[(usize, Sign)] {
        &self.down[x]
    }

    pub fn all_covers(&self) -> impl Iterator<Item = (usize, usize, Sign)> + '_ {
        (0..self.size()).flat_map(move |u| self.down[u].iter().map(move |&(l, s)| (u, l, s)))
    }

    pub fn elements_of_dim(&self, d: usize) -> &[usize] {
        self.by_dim.get(d).map_or(&[], |v| v.as_slice())
    }

    pub fn downset(&self, x: usize) -> &ElemSet {
        &self.downsets[x]
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.downsets[y].contains(x)
    }

    pub fn empty_set(&self) -> ElemSet {
        ElemSet::empty(self.size())
    }

    pub fn full_set(&self) -> ElemSet {
        ElemSet::full(self.size())
    }

    /// Smallest downward-closed superset of `s`.
    pub fn closure(&self, s: &ElemSet) -> ElemSet {
        let mut out = ElemSet::empty(self.size());
        for x in s.iter() {
            out.union_with(&self.downsets[x]);
        }
        out
    }

    pub fn closure_of(&self, indices: &[usize]) -> Result<ElemSet, BuildError> {
        for &i in indices {
            if i >= self.size() {
                return Err(BuildError::UnknownIndex(i));
            }
        }
        Ok(self.closure(&ElemSet::from_indices(self.size(), indices.iter().copied())))
    }

    pub fn is_closed(&self, s: &ElemSet) -> bool {
        s.iter().all(|x| self.downsets[x].is_subset(s))
    }

    /// Maximal elements of a subset: members covered by no other member.
    pub fn maximal_in(&self, s: &ElemSet) -> Vec<usize> {
        s.iter()
            .filter(|&x| !self.up[x].iter().any(|&(y, _)| s.contains(y)))
            .collect()
    }

    /// Dimension of a closed subset (`-1` for the empty set).
    pub fn dim_of_subset(&self, s: &ElemSet) -> i64 {
        s.iter().map(|x| self.dims[x] as i64).max().unwrap_or(-1)
    }

    /// The grading `\Delta_n^side` of a closed subset: its `n`-dimensional
    /// elements all of whose covers inside the subset carry the given sign.
    pub fn granular_boundary(&self, u: &ElemSet, n: usize, side: Side) -> ElemSet {
        match side {
            Side::Both => self
                .granular_boundary(u, n, Side::Minus)
                .union(&self.granular_boundary(u, n, Side::Plus)),
            Side::Minus | Side::Plus => {
                let want = if side == Side::Minus {
                    Sign::Minus
                } else {
                    Sign::Plus
                };
                let mut out = ElemSet::empty(self.size());
                for x in u.iter() {
                    if self.dims[x] == n
                        && self.up[x]
                            .iter()
                            .all(|&(y, s)| !u.contains(y) || s == want)
                    {
                        out.insert(x);
                    }
                }
                out
            }
        }
    }

    /// The boundary `\partial_n^side` of a closed subset: the closure of the
    /// granular boundary plus every element whose entire up-set within the
    /// subset has dimension at most `n`.
    pub fn boundary(&self, u: &ElemSet, n: usize, side: Side) -> ElemSet {
        match side {
            Side::Both => self
                .boundary(u, n, Side::Minus)
                .union(&self.boundary(u, n, Side::Plus)),
            _ => {
                let mut out = self.closure(&self.granular_boundary(u, n, side));
                // Elements of u dominated only by low-dimensional elements.
                let mut tall = ElemSet::empty(self.size());
                for x in u.iter() {
                    if self.dims[x] > n {
                        tall.union_with(&self.downsets[x]);
                    }
                }
                out.union_with(&u.minus(&tall));
                out
            }
        }
    }

    /// `\partial^side` at codimension one: `\partial_{n-1}` for an
    /// `n`-dimensional subset. Zero-dimensional subsets have empty boundary.
    pub fn boundary_codim1(&self, u: &ElemSet, side: Side) -> ElemSet {
        match self.dim_of_subset(u) {
            d if d <= 0 => ElemSet::empty(self.size()),
            d => self.boundary(u, (d - 1) as usize, side),
        }
    }

    /// Boundary of the atom generated by a single element.
    pub fn element_boundary(&self, x: usize, n: usize, side: Side) -> ElemSet {
        self.boundary(&self.downsets[x], n, side)
    }

    /// Checks that every length-2 interval of `P_bot` is a diamond whose
    /// signs multiply per the oriented-thinness rule.
    pub fn oriented_thin(&self) -> Result<(), ThinFailure> {
        for y in 0..self.size() {
            let dy = self.dims[y];
            if dy == 1 {
                // Interval [bot, y]: bottom covers are synthesized with +.
                let mids = &self.down[y];
                if mids.len() != 2 || mids[0].1.mul(mids[1].1) != Sign::Minus {
                    return Err(ThinFailure {
                        lower: None,
                        upper: y,
                    });
                }
            }
            if dy < 2 {
                continue;
            }
            for x in self.downsets[y].iter() {
                if self.dims[x] + 2 != dy {
                    continue;
                }
                let mids: Vec<(Sign, Sign)> = self.down[y]
                    .iter()
                    .filter_map(|&(z, a)| {
                        self.down[z]
                            .iter()
                            .find(|&&(w, _)| w == x)
                            .map(|&(_, b)| (a, b))
                    })
                    .collect();
                let ok = mids.len() == 2
                    && mids[0].0.mul(mids[0].1).mul(mids[1].0.mul(mids[1].1)) == Sign::Minus;
                if !ok {
                    return Err(ThinFailure {
                        lower: Some(x),
                        upper: y,
                    });
                }
            }
        }
        Ok(())
    }

    /// Restriction to the elements of dimension at most `n`, with the
    /// inclusion into the original poset as an index table.
    pub fn skeleton(&self, n: usize) -> (Poset, Vec<usize>) {
        let keep = ElemSet::from_indices(
            self.size(),
            (0..self.size()).filter(|&x| self.dims[x] <= n),
        );
        self.extract(&keep)
    }

    /// Extracts a closed subset as a standalone poset. Returns the new poset
    /// and the embedding `new index -> old index`.
    ///
    /// Panics if the subset is not closed (callers hold that invariant).
    pub fn extract(&self, s: &ElemSet) -> (Poset, Vec<usize>) {
        assert!(self.is_closed(s), "extract: subset is not closed");
        let members: Vec<usize> = s.iter().collect();
        let mut old_to_new = HashMap::new();
        for (new, &old) in members.iter().enumerate() {
            old_to_new.insert(old, new);
        }
        let elements = members
            .iter()
            .map(|&old| RawElement::with_dim(self.names[old].clone(), self.dims[old]))
            .collect();
        let mut covers = Vec::new();
        for &old in &members {
            for &(l, sg) in &self.down[old] {
                covers.push((old_to_new[&old], old_to_new[&l], sg));
            }
        }
        let (poset, perm) = build_ogp(elements, &covers).expect("closed subset stays valid");
        let mut embed = vec![0usize; members.len()];
        for (raw_new, &old) in members.iter().enumerate() {
            embed[perm[raw_new]] = old;
        }
        (poset, embed)
    }

    /// (dimension, purity, maximal elements) of a closed subset.
    pub fn subset_profile(&self, u: &ElemSet) -> (i64, bool, Vec<usize>) {
        let dim = self.dim_of_subset(u);
        let maxima = self.maximal_in(u);
        let pure = maxima.iter().all(|&x| self.dims[x] as i64 == dim);
        (dim, pure, maxima)
    }

    /// Structural equality up to renaming: same dims and signed covers under
    /// the identity indexing.
    pub fn same_shape(&self, other: &OrientedGradedPoset) -> bool {
        self.dims == other.dims && self.up == other.up
    }
}

/// Disambiguates `base` against a set of taken names by appending primes.
pub(crate) fn fresh_name(taken: &mut std::collections::HashSet<String>, base: String) -> String {
    let mut name = base;
    while !taken.insert(name.clone()) {
        name.push('\'');
    }
    name
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::generate_poset;

    fn globe(n: usize) -> Poset {
        generate_poset(crate::constructions::Generator::Globe, n).unwrap()
    }

    #[test]
    fn terminal_complex() {
        let (p, _) = build_ogp(vec![RawElement::named("x")], &[]).unwrap();
        assert_eq!(p.size(), 1);
        assert_eq!(p.dim(), 0);
    }

    #[test]
    fn globe_data_valid() {
        // O^1 from raw data: 3 elements, two signed covers.
        let (p, _) = build_ogp(
            vec![
                RawElement::named("0-"),
                RawElement::named("0+"),
                RawElement::named("1"),
            ],
            &[(2, 0, Sign::Minus), (2, 1, Sign::Plus)],
        )
        .unwrap();
        assert_eq!(
            (0..3).map(|i| p.dim_of(i)).collect::<Vec<_>>(),
            vec![0, 0, 1]
        );
    }

    #[test]
    fn transitive_edge_rejected() {
        // Chain a > b > c > d with a skipping cover a > c.
        let els = vec![
            RawElement::named("a"),
            RawElement::named("b"),
            RawElement::named("c"),
            RawElement::named("d"),
        ];
        let covers = [
            (0, 1, Sign::Minus),
            (1, 2, Sign::Minus),
            (2, 3, Sign::Minus),
            (0, 2, Sign::Plus),
        ];
        assert_eq!(
            build_ogp(els, &covers).unwrap_err(),
            BuildError::TransitiveEdge { upper: 0, lower: 2 }
        );
    }

    #[test]
    fn cyclic_covers_rejected() {
        let els = vec![RawElement::named("a"), RawElement::named("b")];
        let covers = [(0, 1, Sign::Minus), (1, 0, Sign::Plus)];
        assert_eq!(build_ogp(els, &covers).unwrap_err(), BuildError::CyclicCovers);
    }

    #[test]
    fn not_graded_rejected() {
        // a covers b and c, b covers d, c minimal: paths from a disagree.
        let els = vec![
            RawElement::named("a"),
            RawElement::named("b"),
            RawElement::named("c"),
            RawElement::named("d"),
        ];
        let covers = [
            (0, 1, Sign::Minus),
            (0, 2, Sign::Plus),
            (1, 3, Sign::Minus),
        ];
        assert!(matches!(
            build_ogp(els, &covers).unwrap_err(),
            BuildError::NotGraded(_)
        ));
    }

    #[test]
    fn dim_mismatch_rejected() {
        let els = vec![
            RawElement::named("x"),
            RawElement::with_dim("y", 2),
        ];
        let covers = [(1, 0, Sign::Minus)];
        assert!(matches!(
            build_ogp(els, &covers).unwrap_err(),
            BuildError::DimMismatch { .. }
        ));
    }

    #[test]
    fn closure_examples() {
        let g2 = globe(2);
        let top = g2.index_of_name("2").unwrap();
        let whole = g2.closure(&ElemSet::singleton(g2.size(), top));
        assert_eq!(whole.len(), 5);

        let e_minus = g2.index_of_name("1-").unwrap();
        let c = g2.closure(&ElemSet::singleton(g2.size(), e_minus));
        let names: Vec<&str> = c.iter().map(|x| g2.name(x)).collect();
        assert_eq!(names, vec!["0-", "0+", "1-"]);

        assert!(g2.closure(&g2.empty_set()).is_empty());
    }

    #[test]
    fn closure_idempotent_monotone() {
        let g3 = globe(3);
        let s = ElemSet::from_indices(g3.size(), [3, 5]);
        let c = g3.closure(&s);
        assert_eq!(g3.closure(&c), c);
        let bigger = g3.closure(&s.union(&ElemSet::singleton(g3.size(), 6)));
        assert!(c.is_subset(&bigger));
    }

    #[test]
    fn globe_boundary() {
        let g2 = globe(2);
        let whole = g2.full_set();
        let b = g2.boundary(&whole, 1, Side::Minus);
        let names: Vec<&str> = b.iter().map(|x| g2.name(x)).collect();
        assert_eq!(names, vec!["0-", "0+", "1-"]);
        // n >= dim U leaves the subset unchanged.
        assert_eq!(g2.boundary(&whole, 2, Side::Minus), whole);
        assert_eq!(g2.boundary(&whole, 5, Side::Plus), whole);
    }

    #[test]
    fn boundary_idempotent_at_level() {
        let g3 = globe(3);
        let whole = g3.full_set();
        for n in 0..3 {
            for side in [Side::Minus, Side::Plus, Side::Both] {
                let b = g3.boundary(&whole, n, side);
                assert_eq!(g3.boundary(&b, n, side), b);
            }
        }
    }

    #[test]
    fn thinness_globe_and_mutant() {
        assert!(globe(3).oriented_thin().is_ok());

        // Flip one sign in O^2: the diamond rule breaks somewhere.
        let g2 = globe(2);
        let els: Vec<RawElement> = (0..g2.size())
            .map(|i| RawElement::named(g2.name(i)))
            .collect();
        let covers: Vec<(usize, usize, Sign)> = g2
            .all_covers()
            .map(|(u, l, s)| {
                if g2.name(u) == "2" && g2.name(l) == "1-" {
                    (u, l, s.flip())
                } else {
                    (u, l, s)
                }
            })
            .collect();
        let (mutant, _) = build_ogp(els, &covers).unwrap();
        assert!(mutant.oriented_thin().is_err());

        let (point, _) = build_ogp(vec![RawElement::named("x")], &[]).unwrap();
        assert!(point.oriented_thin().is_ok());
    }

    #[test]
    fn skeleton_examples() {
        let g3 = globe(3);
        let (sk1, _) = g3.skeleton(1);
        assert_eq!(sk1.size(), 4);
        let (sk3, _) = g3.skeleton(3);
        assert!(sk3.same_shape(&g3));
    }

    #[test]
    fn subset_profiles() {
        let g2 = globe(2);
        let (d, pure, maxima) = g2.subset_profile(&g2.full_set());
        assert_eq!((d, pure), (2, true));
        assert_eq!(maxima.len(), 1);

        let (d, pure, m) = g2.subset_profile(&g2.empty_set());
        assert_eq!((d, pure, m.len()), (-1, true, 0));

        // An edge together with a disjoint point is impure.
        let (p, _) = build_ogp(
            vec![
                RawElement::named("a"),
                RawElement::named("b"),
                RawElement::named("c"),
                RawElement::named("e"),
            ],
            &[(3, 0, Sign::Minus), (3, 1, Sign::Plus)],
        )
        .unwrap();
        let (d, pure, _) = p.subset_profile(&p.full_set());
        assert_eq!((d, pure), (1, false));
    }
}
