//! Molecule recognition and certification: decomposition witnesses,
//! spherical boundaries, directed and regular complexes, layerings, binary
//! splits, and merger trees.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use thiserror::Error;

use crate::maps::{find_unique_iso, pushout_inclusions, MapError, OgpMap};
use crate::ogposet::{OrientedGradedPoset, Poset, Side};
use crate::set::ElemSet;

#[derive(Debug, Error)]
pub enum MoleculeError {
    #[error("subset is not a molecule")]
    NotAMolecule,
    #[error("molecule does not have spherical boundary")]
    NotSpherical,
    #[error("subset belongs to a different host poset")]
    HostMismatch,
    #[error("no layering exists")]
    NoLayering,
    #[error("boundaries do not match: {0}")]
    BoundaryMismatch(String),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Binary certificate that a closed subset is a molecule: leaves are atoms,
/// internal nodes are pastings `left #_k right`.
#[derive(Clone, Debug)]
pub struct Witness {
    pub set: ElemSet,
    pub node: WitnessNode,
}

#[derive(Clone, Debug)]
pub enum WitnessNode {
    Atom,
    Paste {
        k: usize,
        left: Rc<Witness>,
        right: Rc<Witness>,
    },
}

impl Witness {
    pub fn leaf_count(&self) -> usize {
        match &self.node {
            WitnessNode::Atom => 1,
            WitnessNode::Paste { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    /// All subsets labelling nodes of the witness.
    pub fn node_sets(&self) -> Vec<&ElemSet> {
        let mut out = vec![&self.set];
        if let WitnessNode::Paste { left, right, .. } = &self.node {
            out.extend(left.node_sets());
            out.extend(right.node_sets());
        }
        out
    }
}

/// Per-host memo table for molecule recognition and submolecule queries.
pub struct MoleculeCtx<'p> {
    host: &'p OrientedGradedPoset,
    cache: RefCell<HashMap<ElemSet, Option<Rc<Witness>>>>,
    submol: RefCell<HashMap<(ElemSet, ElemSet), bool>>,
}

/// Structured split search gives up beyond this many candidate maximal
/// elements per level; the exhaustive fallback below this subset size.
const SPLIT_SUBSET_CAP: usize = 18;
const EXHAUSTIVE_CAP: usize = 14;

impl<'p> MoleculeCtx<'p> {
    pub fn new(host: &'p OrientedGradedPoset) -> Self {
        MoleculeCtx {
            host,
            cache: RefCell::new(HashMap::new()),
            submol: RefCell::new(HashMap::new()),
        }
    }

    pub fn host(&self) -> &'p OrientedGradedPoset {
        self.host
    }

    /// True iff the closed subset has a greatest element.
    pub fn is_atom(&self, u: &ElemSet) -> bool {
        greatest_of(self.host, u).is_some()
    }

    /// Witness-producing molecule recognition.
    pub fn is_molecule(&self, u: &ElemSet) -> Option<Rc<Witness>> {
        if let Some(hit) = self.cache.borrow().get(u) {
            return hit.clone();
        }
        // Pre-seed to cut infinite regress on (impossible) reentrant sets.
        self.cache.borrow_mut().insert(u.clone(), None);
        let result = self.decide(u);
        self.cache.borrow_mut().insert(u.clone(), result.clone());
        result
    }

    fn decide(&self, u: &ElemSet) -> Option<Rc<Witness>> {
        if u.is_empty() {
            return None;
        }
        if greatest_of(self.host, u).is_some() {
            return Some(Rc::new(Witness {
                set: u.clone(),
                node: WitnessNode::Atom,
            }));
        }
        let n = self.host.dim_of_subset(u);
        debug_assert!(n >= 0);
        for k in (0..n as usize).rev() {
            if let Some(w) = self.split_at(u, k) {
                return Some(w);
            }
        }
        if u.len() <= EXHAUSTIVE_CAP {
            return self.exhaustive(u);
        }
        None
    }

    /// Tries candidate splits `U = (bnd_k^- U ∪ clos S) #_k (bnd_k^+ U ∪ clos S^c)`
    /// over subsets S of the maximal elements above dimension k. Singleton
    /// prefixes and suffixes come first, which is the layering order.
    fn split_at(&self, u: &ElemSet, k: usize) -> Option<Rc<Witness>> {
        let mut found = None;
        self.scan_splits(u, k, |ctx, u1, u2| {
            if let Some(w) = ctx.check_split(u, k, u1, u2) {
                found = Some(w);
                true
            } else {
                false
            }
        });
        found
    }

    /// Enumerates candidate `#_k` partitions of the tall maximal elements,
    /// cheapest-to-reject first: a bitmask of forced co-memberships prunes
    /// separations that shared covers rule out before any set is built.
    /// The callback returns `true` to stop the scan.
    fn scan_splits(
        &self,
        u: &ElemSet,
        k: usize,
        mut cb: impl FnMut(&Self, &ElemSet, &ElemSet) -> bool,
    ) {
        let host = self.host;
        let tall: Vec<usize> = host
            .maximal_in(u)
            .into_iter()
            .filter(|&x| host.dim_of(x) > k)
            .collect();
        let m = tall.len();
        if !(2..=SPLIT_SUBSET_CAP).contains(&m) {
            return;
        }
        let lower_minus = host.boundary(u, k, Side::Minus);
        let lower_plus = host.boundary(u, k, Side::Plus);
        let closures: Vec<ElemSet> = tall.iter().map(|&x| host.downset(x).clone()).collect();

        // needs[i]: if tall[i] goes left, these must go left too. Shared
        // elements above level k force co-membership; a shared k-element
        // with a minus cover under the left candidate (or a plus cover
        // under the right one) cannot lie in the interface.
        let mut needs = vec![0u32; m];
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                let shared = closures[i].intersect(&closures[j]);
                if host.dim_of_subset(&shared) > k as i64 {
                    needs[i] |= 1 << j;
                    needs[j] |= 1 << i;
                    continue;
                }
                let mut separable = true;
                'shared: for z in shared.iter() {
                    if host.dim_of(z) != k {
                        continue;
                    }
                    for &(up, s) in host.covers_up(z) {
                        if s == Sign::Minus && closures[i].contains(up) {
                            separable = false;
                            break 'shared;
                        }
                        if s == Sign::Plus && closures[j].contains(up) {
                            separable = false;
                            break 'shared;
                        }
                    }
                }
                if !separable {
                    // i on the left with j on the right is impossible.
                    needs[i] |= 1 << j;
                }
            }
        }

        let full = (1u32 << m) - 1;
        let mut sizes: Vec<u32> = (1..m as u32).collect();
        sizes.sort_by_key(|&c| c.min(m as u32 - c));
        for c in sizes {
            // Gosper's hack over masks of fixed popcount.
            let mut mask = (1u32 << c) - 1;
            while mask <= full {
                if mask != 0 && mask != full && compatible(mask, &needs) {
                    let mut u1 = lower_minus.clone();
                    let mut u2 = lower_plus.clone();
                    for (i, cl) in closures.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            u1.union_with(cl);
                        } else {
                            u2.union_with(cl);
                        }
                    }
                    if cb(self, &u1, &u2) {
                        return;
                    }
                }
                let lo = mask & mask.wrapping_neg();
                let lz = (mask + lo) & !mask;
                if lz == 0 {
                    break;
                }
                mask = mask + lo + (lz / lo / 2) - 1;
                if mask > full {
                    break;
                }
            }
        }
    }

    fn check_split(&self, u: &ElemSet, k: usize, u1: &ElemSet, u2: &ElemSet) -> Option<Rc<Witness>> {
        let host = self.host;
        if u1 == u || u2 == u {
            return None;
        }
        if &u1.union(u2) != u {
            return None;
        }
        let inter = u1.intersect(u2);
        if host.boundary(u1, k, Side::Plus) != inter || host.boundary(u2, k, Side::Minus) != inter {
            return None;
        }
        let left = self.is_molecule(u1)?;
        let right = self.is_molecule(u2)?;
        Some(Rc::new(Witness {
            set: u.clone(),
            node: WitnessNode::Paste { k, left, right },
        }))
    }

    /// Complete search over closed partitions, feasible for small subsets.
    fn exhaustive(&self, u: &ElemSet) -> Option<Rc<Witness>> {
        let host = self.host;
        let members: Vec<usize> = u.iter().collect();
        let n = self.host.dim_of_subset(u);
        for mask in 1..(1u32 << members.len()) - 1 {
            let u1 = ElemSet::from_indices(
                host.size(),
                members
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &x)| x),
            );
            if !host.is_closed(&u1) {
                continue;
            }
            for k in 0..n as usize {
                let u2 = u.minus(&u1).union(&host.boundary(&u1, k, Side::Plus));
                if !host.is_closed(&u2) {
                    continue;
                }
                if let Some(w) = self.check_split(u, k, &u1, &u2) {
                    return Some(w);
                }
            }
        }
        None
    }

    /// Spherical boundary via the level-indexed intersection equalities.
    pub fn has_spherical_boundary(&self, u: &ElemSet) -> Result<bool, MoleculeError> {
        if self.is_molecule(u).is_none() {
            return Err(MoleculeError::NotAMolecule);
        }
        Ok(self.spherical_unchecked(u))
    }

    fn spherical_unchecked(&self, u: &ElemSet) -> bool {
        let host = self.host;
        let n = host.dim_of_subset(u);
        for k in 0..n.max(0) as usize {
            let inter = host
                .boundary(u, k, Side::Minus)
                .intersect(&host.boundary(u, k, Side::Plus));
            let expected = if k == 0 {
                ElemSet::empty(host.size())
            } else {
                host.boundary(u, k - 1, Side::Both)
            };
            if inter != expected {
                return false;
            }
        }
        true
    }

    /// Submolecule order: `V ⊑ U` iff `V` labels a node of some
    /// decomposition of `U`. Memoized search over candidate splits.
    pub fn is_submolecule(&self, v: &ElemSet, u: &ElemSet) -> bool {
        if !v.is_subset(u) {
            return false;
        }
        if v == u {
            return self.is_molecule(u).is_some();
        }
        if let Some(&hit) = self.submol.borrow().get(&(v.clone(), u.clone())) {
            return hit;
        }
        self.submol
            .borrow_mut()
            .insert((v.clone(), u.clone()), false);
        let result = self.submol_search(v, u);
        self.submol
            .borrow_mut()
            .insert((v.clone(), u.clone()), result);
        result
    }

    fn submol_search(&self, v: &ElemSet, u: &ElemSet) -> bool {
        if self.is_molecule(u).is_none() || self.is_molecule(v).is_none() {
            return false;
        }
        let host = self.host;
        let n = host.dim_of_subset(u);
        for k in (0..n.max(0) as usize).rev() {
            let tall: Vec<usize> = host
                .maximal_in(u)
                .into_iter()
                .filter(|&x| host.dim_of(x) > k)
                .collect();
            if tall.len() < 2 || tall.len() > SPLIT_SUBSET_CAP {
                continue;
            }
            let lower_minus = host.boundary(u, k, Side::Minus);
            let lower_plus = host.boundary(u, k, Side::Plus);
            let closures: Vec<ElemSet> = tall.iter().map(|&x| host.downset(x).clone()).collect();
            let m = tall.len();
            for mask in 1u32..(1u32 << m) - 1 {
                let mut u1 = lower_minus.clone();
                let mut u2 = lower_plus.clone();
                for (i, c) in closures.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        u1.union_with(c);
                    } else {
                        u2.union_with(c);
                    }
                }
                if self.check_split(u, k, &u1, &u2).is_none() {
                    continue;
                }
                if (v.is_subset(&u1) && self.is_submolecule(v, &u1))
                    || (v.is_subset(&u2) && self.is_submolecule(v, &u2))
                {
                    return true;
                }
            }
        }
        false
    }
}

fn greatest_of(host: &OrientedGradedPoset, u: &ElemSet) -> Option<usize> {
    u.iter().find(|&x| host.downset(x) == u)
}

/// Linear-time verification of a decomposition witness.
pub fn check_witness(host: &OrientedGradedPoset, u: &ElemSet, w: &Witness) -> bool {
    if &w.set != u || !host.is_closed(u) {
        return false;
    }
    match &w.node {
        WitnessNode::Atom => greatest_of(host, u).is_some(),
        WitnessNode::Paste { k, left, right } => {
            let inter = left.set.intersect(&right.set);
            left.set.union(&right.set) == *u
                && left.set != *u
                && right.set != *u
                && host.boundary(&left.set, *k, Side::Plus) == inter
                && host.boundary(&right.set, *k, Side::Minus) == inter
                && (*k as i64) < host.dim_of_subset(u)
                && check_witness(host, &left.set, left)
                && check_witness(host, &right.set, right)
        }
    }
}

/// Orders the top-dimensional elements of a pure molecule so that every
/// prefix/suffix pair is a valid codimension-1 pasting of the whole.
pub fn layering(host: &OrientedGradedPoset, u: &ElemSet) -> Result<Vec<usize>, MoleculeError> {
    let n = host.dim_of_subset(u);
    if n < 0 {
        return Err(MoleculeError::NoLayering);
    }
    let tops: Vec<usize> = u.iter().filter(|&x| host.dim_of(x) as i64 == n).collect();
    if tops.len() <= 1 {
        return Ok(tops);
    }
    let k = (n - 1) as usize;
    let lower_minus = host.boundary(u, k, Side::Minus);
    let lower_plus = host.boundary(u, k, Side::Plus);

    fn go(
        host: &OrientedGradedPoset,
        u: &ElemSet,
        k: usize,
        lower_minus: &ElemSet,
        lower_plus: &ElemSet,
        placed: &mut Vec<usize>,
        prefix: &mut ElemSet,
        remaining: &mut Vec<usize>,
    ) -> bool {
        if remaining.is_empty() {
            return true;
        }
        for i in 0..remaining.len() {
            let x = remaining[i];
            let mut u1 = prefix.union(host.downset(x));
            u1.union_with(lower_minus);
            let mut u2 = lower_plus.clone();
            for &y in remaining.iter() {
                if y != x {
                    u2.union_with(host.downset(y));
                }
            }
            let inter = u1.intersect(&u2);
            let ok = u1.union(&u2) == *u
                && host.boundary(&u1, k, Side::Plus) == inter
                && host.boundary(&u2, k, Side::Minus) == inter;
            if !ok {
                continue;
            }
            let saved = prefix.clone();
            prefix.union_with(host.downset(x));
            placed.push(x);
            remaining.remove(i);
            if go(host, u, k, lower_minus, lower_plus, placed, prefix, remaining) {
                return true;
            }
            remaining.insert(i, x);
            placed.pop();
            *prefix = saved;
        }
        false
    }

    let mut placed = Vec::new();
    let mut prefix = ElemSet::empty(host.size());
    let mut remaining = tops;
    if go(
        host,
        u,
        k,
        &lower_minus,
        &lower_plus,
        &mut placed,
        &mut prefix,
        &mut remaining,
    ) {
        Ok(placed)
    } else {
        Err(MoleculeError::NoLayering)
    }
}

/// One binary split of a spherical molecule, with its padded pasting halves.
#[derive(Clone, Debug)]
pub struct BinarySplit {
    pub u1: ElemSet,
    pub u2: ElemSet,
    pub padded1: ElemSet,
    pub padded2: ElemSet,
}

/// All binary splits of a spherical molecule, found by partitioning its
/// top cells and validating the three split conditions.
pub fn binary_splits(ctx: &MoleculeCtx, u: &ElemSet) -> Result<Vec<BinarySplit>, MoleculeError> {
    if !ctx.has_spherical_boundary(u)? {
        return Err(MoleculeError::NotSpherical);
    }
    let host = ctx.host();
    let n = host.dim_of_subset(u);
    if n <= 0 {
        return Ok(Vec::new());
    }
    let tops: Vec<usize> = u
        .iter()
        .filter(|&x| host.dim_of(x) as i64 == n)
        .collect();
    if tops.len() < 2 || tops.len() > SPLIT_SUBSET_CAP {
        return Ok(Vec::new());
    }
    let bnd_minus = host.boundary_codim1(u, Side::Minus);
    let bnd_plus = host.boundary_codim1(u, Side::Plus);
    let k = (n - 1) as usize;

    let mut out = Vec::new();
    for mask in 1u32..(1u32 << tops.len()) - 1 {
        let mut u1 = ElemSet::empty(host.size());
        let mut u2 = ElemSet::empty(host.size());
        for (i, &x) in tops.iter().enumerate() {
            if mask & (1 << i) != 0 {
                u1.union_with(host.downset(x));
            } else {
                u2.union_with(host.downset(x));
            }
        }
        if u1.union(&u2) != *u {
            continue;
        }
        let inter = u1.intersect(&u2);
        if !inter.is_subset(
            &host
                .boundary_codim1(&u1, Side::Plus)
                .intersect(&host.boundary_codim1(&u2, Side::Minus)),
        ) {
            continue;
        }
        let padded1 = u1.union(&bnd_minus);
        let padded2 = u2.union(&bnd_plus);
        let pinter = padded1.intersect(&padded2);
        if host.boundary(&padded1, k, Side::Plus) != pinter
            || host.boundary(&padded2, k, Side::Minus) != pinter
        {
            continue;
        }
        let spherical = |s: &ElemSet| matches!(ctx.has_spherical_boundary(s), Ok(true));
        if !spherical(&u1) || !spherical(&u2) {
            continue;
        }
        if ctx.is_molecule(&padded1).is_none() || ctx.is_molecule(&padded2).is_none() {
            continue;
        }
        if !ctx.is_submolecule(&u1, &padded1) || !ctx.is_submolecule(&u2, &padded2) {
            continue;
        }
        out.push(BinarySplit {
            u1,
            u2,
            padded1,
            padded2,
        });
    }
    Ok(out)
}

/// Rooted binary tree certifying a decomposition into unsplittable pieces.
#[derive(Clone, Debug)]
pub struct MergerTree {
    pub set: ElemSet,
    pub children: Option<Box<(MergerTree, MergerTree)>>,
}

impl MergerTree {
    pub fn leaf_count(&self) -> usize {
        match &self.children {
            None => 1,
            Some(c) => c.0.leaf_count() + c.1.leaf_count(),
        }
    }
}

/// Greedy merger tree: split until unsplittable leaves remain.
pub fn merger_tree(ctx: &MoleculeCtx, u: &ElemSet) -> Result<MergerTree, MoleculeError> {
    let splits = binary_splits(ctx, u)?;
    match splits.into_iter().next() {
        None => Ok(MergerTree {
            set: u.clone(),
            children: None,
        }),
        Some(split) => {
            let left = merger_tree(ctx, &split.u1)?;
            let right = merger_tree(ctx, &split.u2)?;
            Ok(MergerTree {
                set: u.clone(),
                children: Some(Box::new((left, right))),
            })
        }
    }
}

/// Level of validity checked by [`check_complex`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexLevel {
    Directed,
    Regular,
}

/// First element failing the directed/regular complex axioms, if any.
pub fn check_complex(host: &OrientedGradedPoset, level: ComplexLevel) -> Result<(), usize> {
    let ctx = MoleculeCtx::new(host);
    for x in 0..host.size() {
        let n = host.dim_of(x);
        if n > 0 {
            for side in [Side::Minus, Side::Plus] {
                let b = host.element_boundary(x, n - 1, side);
                if ctx.is_molecule(&b).is_none() {
                    return Err(x);
                }
            }
            if n >= 2 {
                for alpha in [Side::Minus, Side::Plus] {
                    for beta in [Side::Minus, Side::Plus] {
                        let inner = host.element_boundary(x, n - 1, beta);
                        let lhs = host.boundary(&inner, n - 2, alpha);
                        let rhs = host.element_boundary(x, n - 2, alpha);
                        if lhs != rhs {
                            return Err(x);
                        }
                    }
                }
            }
        }
        if level == ComplexLevel::Regular && !ctx.spherical_unchecked(host.downset(x)) {
            return Err(x);
        }
    }
    Ok(())
}

/// Pushout composition: glues two molecules along the unique isomorphism
/// `bnd_k^+ U ≅ bnd_k^- V` and returns the composite with its inclusions.
pub fn paste(u: &Poset, v: &Poset, k: usize) -> Result<(Poset, OgpMap, OgpMap), MoleculeError> {
    let ctx_u = MoleculeCtx::new(u);
    let ctx_v = MoleculeCtx::new(v);
    if ctx_u.is_molecule(&u.full_set()).is_none() || ctx_v.is_molecule(&v.full_set()).is_none() {
        return Err(MoleculeError::NotAMolecule);
    }
    let bu = u.boundary(&u.full_set(), k, Side::Plus);
    let bv = v.boundary(&v.full_set(), k, Side::Minus);
    let (bu_poset, bu_embed) = u.extract(&bu);
    let (bv_poset, bv_embed) = v.extract(&bv);
    let iso = find_unique_iso(&bu_poset, &bv_poset)?
        .ok_or_else(|| MoleculeError::BoundaryMismatch(format!("no iso along level {k}")))?;
    let i1 = crate::maps::embedding_map(&bu_poset, u, bu_embed);
    let i2 = iso.then(&crate::maps::embedding_map(&bv_poset, v, bv_embed))?;
    let (glued, j1, j2) = pushout_inclusions(&i1, &i2)?;

    // The composite must again be a molecule equal to j1(U) #_k j2(V).
    let gu = j1.image();
    let gv = j2.image();
    let inter = gu.intersect(&gv);
    assert!(
        glued.boundary(&gu, k, Side::Plus) == inter
            && glued.boundary(&gv, k, Side::Minus) == inter,
        "paste: glued halves do not meet along the level-{k} boundary"
    );
    let ctx = MoleculeCtx::new(&glued);
    assert!(
        ctx.is_molecule(&glued.full_set()).is_some(),
        "paste: result is not a molecule"
    );
    // Boundary compatibility below the pasting level.
    let n = glued.dim();
    if n >= 1 && (k as i64) < n - 1 {
        for side in [Side::Minus, Side::Plus] {
            let whole = glued.boundary_codim1(&glued.full_set(), side);
            let part = j1
                .image_of_set(&u.boundary_codim1(&u.full_set(), side))
                .union(&j2.image_of_set(&v.boundary_codim1(&v.full_set(), side)));
            assert_eq!(whole, part, "paste: boundary of composite mismatch");
        }
    }
    Ok((glued, j1, j2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{generate_poset, Generator};
    use crate::ogposet::{build_ogp, RawElement, Sign};

    fn globe(n: usize) -> Poset {
        generate_poset(Generator::Globe, n).unwrap()
    }

    fn simplex(n: usize) -> Poset {
        generate_poset(Generator::Simplex, n).unwrap()
    }

    fn two_edge_path() -> Poset {
        paste(&globe(1), &globe(1), 0).unwrap().0
    }

    #[test]
    fn atoms() {
        let g3 = globe(3);
        let ctx = MoleculeCtx::new(&g3);
        assert!(ctx.is_atom(&g3.full_set()));
        assert!(!ctx.is_atom(&g3.empty_set()));

        let path = two_edge_path();
        let ctx = MoleculeCtx::new(&path);
        assert!(!ctx.is_atom(&path.full_set()));
    }

    #[test]
    fn molecule_witnesses() {
        let d3 = simplex(3);
        let ctx = MoleculeCtx::new(&d3);
        let w = ctx.is_molecule(&d3.full_set()).unwrap();
        assert!(matches!(w.node, WitnessNode::Atom));
        assert!(check_witness(&d3, &d3.full_set(), &w));

        let path = two_edge_path();
        let ctx = MoleculeCtx::new(&path);
        let w = ctx.is_molecule(&path.full_set()).unwrap();
        match &w.node {
            WitnessNode::Paste { k, .. } => assert_eq!(*k, 0),
            _ => panic!("expected a pasting"),
        }
        assert!(check_witness(&path, &path.full_set(), &w));
    }

    #[test]
    fn sphere_is_not_a_molecule() {
        // O^2 with the top removed: both 1-cells retained.
        let g2 = globe(2);
        let mut s = g2.full_set();
        s.remove(g2.index_of_name("2").unwrap());
        let ctx = MoleculeCtx::new(&g2);
        assert!(ctx.is_molecule(&s).is_none());
    }

    #[test]
    fn bad_witnesses_rejected() {
        let path = two_edge_path();
        let ctx = MoleculeCtx::new(&path);
        let w = ctx.is_molecule(&path.full_set()).unwrap();
        // Wrong k at the node.
        if let WitnessNode::Paste { left, right, .. } = &w.node {
            let wrong = Witness {
                set: path.full_set(),
                node: WitnessNode::Paste {
                    k: 1,
                    left: left.clone(),
                    right: right.clone(),
                },
            };
            assert!(!check_witness(&path, &path.full_set(), &wrong));
        }
        // Leaf without a greatest element.
        let fake = Witness {
            set: path.full_set(),
            node: WitnessNode::Atom,
        };
        assert!(!check_witness(&path, &path.full_set(), &fake));
    }

    #[test]
    fn spherical_boundaries() {
        let path = two_edge_path();
        let ctx = MoleculeCtx::new(&path);
        assert!(ctx.has_spherical_boundary(&path.full_set()).unwrap());

        for n in 1..4 {
            let g = globe(n);
            let ctx = MoleculeCtx::new(&g);
            assert!(ctx.has_spherical_boundary(&g.full_set()).unwrap());
        }

        let (horizontal, _, _) = paste(&globe(2), &globe(2), 0).unwrap();
        let ctx = MoleculeCtx::new(&horizontal);
        assert!(!ctx.has_spherical_boundary(&horizontal.full_set()).unwrap());
    }

    #[test]
    fn complexes() {
        assert!(check_complex(&simplex(4), ComplexLevel::Regular).is_ok());

        // Flipping one diamond sign in O^2 breaks the axioms.
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
        assert!(check_complex(&mutant, ComplexLevel::Directed).is_err());
    }

    #[test]
    fn layering_examples() {
        let (p3, _, _) = paste(&two_edge_path(), &globe(1), 0).unwrap();
        let order = layering(&p3, &p3.full_set()).unwrap();
        assert_eq!(order.len(), 3);
        // Prefixes must walk left to right along the path.
        let names: Vec<&str> = order.iter().map(|&x| p3.name(x)).collect();
        assert_eq!(names.len(), 3);

        let g2 = globe(2);
        assert_eq!(layering(&g2, &g2.full_set()).unwrap().len(), 1);
    }

    #[test]
    fn splits_and_merger_trees() {
        let g2 = globe(2);
        let ctx = MoleculeCtx::new(&g2);
        assert!(binary_splits(&ctx, &g2.full_set()).unwrap().is_empty());

        let (vert, _, _) = paste(&globe(2), &globe(2), 1).unwrap();
        let ctx = MoleculeCtx::new(&vert);
        let splits = binary_splits(&ctx, &vert.full_set()).unwrap();
        assert_eq!(splits.len(), 1); // the pair is ordered by the conditions

        let path = two_edge_path();
        let ctx = MoleculeCtx::new(&path);
        let splits = binary_splits(&ctx, &path.full_set()).unwrap();
        assert_eq!(splits.len(), 1);

        let (triple, _, _) = paste(&vert, &globe(2), 1).unwrap();
        let ctx = MoleculeCtx::new(&triple);
        let tree = merger_tree(&ctx, &triple.full_set()).unwrap();
        assert_eq!(tree.leaf_count(), 3);

        // Two maximal elements always admit a split.
        let tree = {
            let ctx = MoleculeCtx::new(&vert);
            merger_tree(&ctx, &vert.full_set()).unwrap()
        };
        assert!(tree.leaf_count() >= 2);
    }

    #[test]
    fn paste_examples() {
        let path = two_edge_path();
        assert_eq!(path.size(), 5);

        let (vert, _, _) = paste(&globe(2), &globe(2), 1).unwrap();
        assert_eq!(vert.size(), 7);
        let ctx = MoleculeCtx::new(&vert);
        assert!(ctx.has_spherical_boundary(&vert.full_set()).unwrap());

        let (horiz, _, _) = paste(&globe(2), &globe(2), 0).unwrap();
        let ctx = MoleculeCtx::new(&horiz);
        assert!(ctx.is_molecule(&horiz.full_set()).is_some());
        assert!(!ctx.has_spherical_boundary(&horiz.full_set()).unwrap());

        assert!(matches!(
            paste(&two_edge_path(), &globe(1), 1),
            Err(MoleculeError::BoundaryMismatch(_))
        ));
    }

    #[test]
    fn paste_associative_up_to_unique_iso() {
        let g1 = globe(1);
        let (ab, _, _) = paste(&g1, &g1, 0).unwrap();
        let (ab_c, _, _) = paste(&ab, &g1, 0).unwrap();
        let (bc, _, _) = paste(&g1, &g1, 0).unwrap();
        let (a_bc, _, _) = paste(&g1, &bc, 0).unwrap();
        assert!(find_unique_iso(&ab_c, &a_bc).unwrap().is_some());
    }

    #[test]
    fn interior_cover_counts() {
        // Lemma on molecules: interior codimension-1 elements are covered by
        // exactly two elements with opposite orientations.
        for p in [two_edge_path(), paste(&globe(2), &globe(2), 1).unwrap().0] {
            let u = p.full_set();
            let n = p.dim() as usize;
            let dm = p.granular_boundary(&u, n - 1, Side::Minus);
            let dp = p.granular_boundary(&u, n - 1, Side::Plus);
            let dboth = dm.union(&dp);
            let dinter = dm.intersect(&dp);
            for x in p.elements_of_dim(n - 1).iter().copied() {
                let ups: Vec<_> = p.covers_up(x).to_vec();
                if dinter.contains(x) {
                    assert!(ups.is_empty());
                } else if dboth.contains(x) {
                    assert_eq!(ups.len(), 1);
                } else {
                    assert_eq!(ups.len(), 2);
                    assert_ne!(ups[0].1, ups[1].1);
                }
            }
        }
    }
}
