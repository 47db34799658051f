//! Maps of oriented graded posets: validation against the boundary
//! condition, hom-set enumeration, unique isomorphisms, factorization,
//! pushouts of inclusions, and cell classification.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::ogposet::{build_ogp, Poset, RawElement, Sign};
use crate::set::ElemSet;

#[derive(Debug, Error)]
pub enum MapError {
    #[error("assignment must name an image for all {expected} source elements, got {got}")]
    NotTotal { expected: usize, got: usize },
    #[error("assignment sends element {0} outside the target")]
    OutOfRange(usize),
    #[error("boundary condition fails at element {element}, level {level}, side {side}")]
    NotAMap {
        element: usize,
        level: usize,
        side: Sign,
    },
    #[error("maps have mismatched hosts")]
    HostMismatch,
    #[error("hom-set enumeration limit exceeded ({0} elements)")]
    SizeLimit(usize),
    #[error("two distinct isomorphisms found; inputs are outside the rigidity lemma")]
    NotUnique,
    #[error("pushout legs must be inclusions with a common source")]
    NotASpan,
    #[error("glued cover {upper} -> {lower} receives conflicting signs")]
    OrientationConflict { upper: usize, lower: usize },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

/// A validated map of oriented graded posets: a total function commuting
/// with all boundary operators.
#[derive(Clone)]
pub struct OgpMap {
    source: Poset,
    target: Poset,
    assign: Vec<usize>,
}

impl std::fmt::Debug for OgpMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OgpMap")
            .field("assign", &self.assign)
            .finish()
    }
}

impl PartialEq for OgpMap {
    fn eq(&self, other: &Self) -> bool {
        self.assign == other.assign
            && self.source.same_shape(&other.source)
            && self.target.same_shape(&other.target)
    }
}

impl OgpMap {
    pub fn source(&self) -> &Poset {
        &self.source
    }

    pub fn target(&self) -> &Poset {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assign[x]
    }

    pub fn image_of_set(&self, s: &ElemSet) -> ElemSet {
        ElemSet::from_indices(self.target.size(), s.iter().map(|x| self.assign[x]))
    }

    pub fn image(&self) -> ElemSet {
        ElemSet::from_indices(self.target.size(), self.assign.iter().copied())
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.assign.len()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target.size()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn identity(p: &Poset) -> OgpMap {
        OgpMap {
            source: Arc::clone(p),
            target: Arc::clone(p),
            assign: (0..p.size()).collect(),
        }
    }

    /// `self;other` (diagrammatic order).
    pub fn then(&self, other: &OgpMap) -> Result<OgpMap, MapError> {
        if !self.target.same_shape(&other.source) {
            return Err(MapError::HostMismatch);
        }
        Ok(OgpMap {
            source: Arc::clone(&self.source),
            target: Arc::clone(&other.target),
            assign: self.assign.iter().map(|&x| other.assign[x]).collect(),
        })
    }

    /// Inverse of an isomorphism.
    pub fn invert(&self) -> Result<OgpMap, MapError> {
        if !self.is_iso() {
            return Err(MapError::PreconditionFailed("map is not an iso".into()));
        }
        let mut assign = vec![0usize; self.target.size()];
        for (x, &y) in self.assign.iter().enumerate() {
            assign[y] = x;
        }
        Ok(OgpMap {
            source: Arc::clone(&self.target),
            target: Arc::clone(&self.source),
            assign,
        })
    }
}

/// Validates a raw assignment as a map: for every element `x`, every level
/// `n` up to the source dimension, and both signs, the image of the boundary
/// of `x` must equal the boundary of the image of `x`.
pub fn check_map(source: &Poset, target: &Poset, assign: Vec<usize>) -> Result<OgpMap, MapError> {
    if assign.len() != source.size() {
        return Err(MapError::NotTotal {
            expected: source.size(),
            got: assign.len(),
        });
    }
    for &y in &assign {
        if y >= target.size() {
            return Err(MapError::OutOfRange(y));
        }
    }
    let map = OgpMap {
        source: Arc::clone(source),
        target: Arc::clone(target),
        assign,
    };
    let max_n = source.dim().max(0) as usize;
    for x in 0..source.size() {
        for n in 0..=max_n {
            for sign in [Sign::Minus, Sign::Plus] {
                let lhs = map.image_of_set(&source.element_boundary(x, n, sign.into()));
                let rhs = target.element_boundary(map.assign[x], n, sign.into());
                if lhs != rhs {
                    return Err(MapError::NotAMap {
                        element: x,
                        level: n,
                        side: sign,
                    });
                }
            }
        }
    }
    Ok(map)
}

/// Builds the inclusion map from an `extract`-style embedding table.
pub(crate) fn embedding_map(sub: &Poset, host: &Poset, embed: Vec<usize>) -> OgpMap {
    check_map(sub, host, embed).expect("closed embeddings are maps")
}

struct SearchCtx<'a> {
    source: &'a Poset,
    target: &'a Poset,
    inclusions_only: bool,
    /// Source elements, highest dimension first.
    order: Vec<usize>,
    out: Vec<OgpMap>,
    limit: Option<usize>,
}

/// Brute-force enumeration of all maps (or all inclusions) `source -> target`
/// in a deterministic order. Both posets must be desk-scale.
pub fn enumerate_maps(
    source: &Poset,
    target: &Poset,
    inclusions_only: bool,
) -> Result<Vec<OgpMap>, MapError> {
    enumerate_maps_bounded(source, target, inclusions_only, None)
}

const ENUM_SOURCE_LIMIT: usize = 64;
const ENUM_TARGET_LIMIT: usize = 256;

fn enumerate_maps_bounded(
    source: &Poset,
    target: &Poset,
    inclusions_only: bool,
    limit: Option<usize>,
) -> Result<Vec<OgpMap>, MapError> {
    if source.size() > ENUM_SOURCE_LIMIT {
        return Err(MapError::SizeLimit(source.size()));
    }
    if target.size() > ENUM_TARGET_LIMIT {
        return Err(MapError::SizeLimit(target.size()));
    }
    if source.size() == 0 {
        return Ok(vec![OgpMap {
            source: Arc::clone(source),
            target: Arc::clone(target),
            assign: Vec::new(),
        }]);
    }
    let mut order: Vec<usize> = (0..source.size()).collect();
    order.sort_by_key(|&x| std::cmp::Reverse((source.dim_of(x), std::cmp::Reverse(x))));
    let mut ctx = SearchCtx {
        source,
        target,
        inclusions_only,
        order,
        out: Vec::new(),
        limit,
    };
    let mut assign = vec![usize::MAX; source.size()];
    let mut used = ElemSet::empty(target.size());
    search(&mut ctx, 0, &mut assign, &mut used);
    Ok(ctx.out)
}

fn search(ctx: &mut SearchCtx, depth: usize, assign: &mut Vec<usize>, used: &mut ElemSet) {
    if ctx.limit.is_some_and(|l| ctx.out.len() >= l) {
        return;
    }
    if depth == ctx.order.len() {
        if let Ok(map) = check_map(ctx.source, ctx.target, assign.clone()) {
            ctx.out.push(map);
        }
        return;
    }
    let x = ctx.order[depth];
    'cand: for y in 0..ctx.target.size() {
        if ctx.inclusions_only {
            if used.contains(y) || ctx.target.dim_of(y) != ctx.source.dim_of(x) {
                continue;
            }
        } else if ctx.target.dim_of(y) > ctx.source.dim_of(x) {
            continue;
        }
        // Elements above x were assigned first; x's image must sit inside
        // the image closure of each assigned element covering x, with the
        // cover preserved sign-exactly in the inclusion case.
        for &(up, s) in ctx.source.covers_up(x) {
            let fy = assign[up];
            if fy == usize::MAX {
                continue;
            }
            if ctx.inclusions_only {
                if !ctx
                    .target
                    .covers_down(fy)
                    .iter()
                    .any(|&(l, ls)| l == y && ls == s)
                {
                    continue 'cand;
                }
            } else if !ctx.target.le(y, fy) {
                continue 'cand;
            }
        }
        assign[x] = y;
        used.insert(y);
        search(ctx, depth + 1, assign, used);
        used.remove(y);
        assign[x] = usize::MAX;
        if ctx.limit.is_some_and(|l| ctx.out.len() >= l) {
            return;
        }
    }
}

/// Iterated colour refinement signature used to prune the iso search.
fn refine_colours(p: &Poset) -> Vec<u64> {
    fn hash_of(data: &impl std::hash::Hash) -> u64 {
        use std::hash::{Hasher, DefaultHasher};
        let mut h = DefaultHasher::new();
        data.hash(&mut h);
        h.finish()
    }
    let mut colour: Vec<u64> = (0..p.size())
        .map(|x| {
            let mut ups: Vec<Sign> = p.covers_up(x).iter().map(|&(_, s)| s).collect();
            ups.sort();
            let mut downs: Vec<Sign> = p.covers_down(x).iter().map(|&(_, s)| s).collect();
            downs.sort();
            hash_of(&(p.dim_of(x), ups, downs))
        })
        .collect();
    for _ in 0..p.size().min(8) {
        let next: Vec<u64> = (0..p.size())
            .map(|x| {
                let mut ups: Vec<(Sign, u64)> =
                    p.covers_up(x).iter().map(|&(y, s)| (s, colour[y])).collect();
                ups.sort();
                let mut downs: Vec<(Sign, u64)> = p
                    .covers_down(x)
                    .iter()
                    .map(|&(y, s)| (s, colour[y]))
                    .collect();
                downs.sort();
                hash_of(&(colour[x], ups, downs))
            })
            .collect();
        if next == colour {
            break;
        }
        colour = next;
    }
    colour
}

/// Finds the isomorphism between two molecules of regular directed
/// complexes, if one exists. Rigidity makes it unique; if a second distinct
/// isomorphism is ever found the inputs were outside the lemma's hypotheses
/// and `NotUnique` is raised.
pub fn find_unique_iso(a: &Poset, b: &Poset) -> Result<Option<OgpMap>, MapError> {
    if a.size() != b.size() {
        return Ok(None);
    }
    if a.size() == 0 {
        return Ok(Some(OgpMap {
            source: Arc::clone(a),
            target: Arc::clone(b),
            assign: Vec::new(),
        }));
    }
    let ca = refine_colours(a);
    let cb = refine_colours(b);
    {
        let mut sa = ca.clone();
        let mut sb = cb.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return Ok(None);
        }
    }

    // Assign elements in order of ascending candidate count.
    let mut order: Vec<usize> = (0..a.size()).collect();
    let mut cand_count = vec![0usize; a.size()];
    for x in 0..a.size() {
        cand_count[x] = (0..b.size()).filter(|&y| cb[y] == ca[x]).count();
    }
    order.sort_by_key(|&x| (cand_count[x], x));

    struct IsoCtx<'a> {
        a: &'a Poset,
        b: &'a Poset,
        ca: Vec<u64>,
        cb: Vec<u64>,
        order: Vec<usize>,
        found: Vec<Vec<usize>>,
    }
    fn go(ctx: &mut IsoCtx, depth: usize, assign: &mut Vec<usize>, used: &mut ElemSet) {
        if ctx.found.len() >= 2 {
            return;
        }
        if depth == ctx.order.len() {
            ctx.found.push(assign.clone());
            return;
        }
        let x = ctx.order[depth];
        'cand: for y in 0..ctx.b.size() {
            if used.contains(y) || ctx.cb[y] != ctx.ca[x] {
                continue;
            }
            // Signed covers must match exactly against already-placed
            // neighbours, in both directions.
            for &(u, s) in ctx.a.covers_up(x) {
                let fu = assign[u];
                if fu != usize::MAX
                    && !ctx.b.covers_up(y).iter().any(|&(v, t)| v == fu && t == s)
                {
                    continue 'cand;
                }
            }
            for &(d, s) in ctx.a.covers_down(x) {
                let fd = assign[d];
                if fd != usize::MAX
                    && !ctx.b.covers_down(y).iter().any(|&(v, t)| v == fd && t == s)
                {
                    continue 'cand;
                }
            }
            assign[x] = y;
            used.insert(y);
            go(ctx, depth + 1, assign, used);
            used.remove(y);
            assign[x] = usize::MAX;
            if ctx.found.len() >= 2 {
                return;
            }
        }
    }

    let mut ctx = IsoCtx {
        a,
        b,
        ca,
        cb,
        order,
        found: Vec::new(),
    };
    let mut assign = vec![usize::MAX; a.size()];
    let mut used = ElemSet::empty(b.size());
    go(&mut ctx, 0, &mut assign, &mut used);

    match ctx.found.len() {
        0 => Ok(None),
        1 => {
            let assign = ctx.found.pop().unwrap();
            // Candidate respects all signed covers bijectively, but run the
            // full boundary validation anyway.
            match check_map(a, b, assign) {
                Ok(m) => Ok(Some(m)),
                Err(_) => Ok(None),
            }
        }
        _ => {
            // Both candidates must actually be maps before we cry foul.
            let maps: Vec<OgpMap> = ctx
                .found
                .iter()
                .filter_map(|asg| check_map(a, b, asg.clone()).ok())
                .collect();
            match maps.len() {
                0 => Ok(None),
                1 => Ok(Some(maps.into_iter().next().unwrap())),
                _ => Err(MapError::NotUnique),
            }
        }
    }
}

/// Epi-mono factorization: every map factors as a surjection onto its closed
/// image followed by an inclusion.
pub fn image_factorization(f: &OgpMap) -> (OgpMap, OgpMap) {
    let img = f.image();
    let (mid, embed) = f.target().extract(&img);
    let mut old_to_new = HashMap::new();
    for (new, &old) in embed.iter().enumerate() {
        old_to_new.insert(old, new);
    }
    let surj = OgpMap {
        source: Arc::clone(f.source()),
        target: Arc::clone(&mid),
        assign: f.assign.iter().map(|&y| old_to_new[&y]).collect(),
    };
    let incl = embedding_map(&mid, f.target(), embed);
    (surj, incl)
}

/// Pushout of a span of inclusions, created on underlying sets. Elements are
/// numbered with all of `P1` first, then `P2` minus the glued image.
pub fn pushout_inclusions(
    i1: &OgpMap,
    i2: &OgpMap,
) -> Result<(Poset, OgpMap, OgpMap), MapError> {
    if !i1.is_injective() || !i2.is_injective() {
        return Err(MapError::NotASpan);
    }
    if !i1.source().same_shape(i2.source()) {
        return Err(MapError::NotASpan);
    }
    let p1 = i1.target();
    let p2 = i2.target();
    let q = i1.source();

    let n1 = p1.size();
    // Map from p2 indices to glued indices.
    let mut glue2: Vec<Option<usize>> = vec![None; p2.size()];
    for x in 0..q.size() {
        glue2[i2.apply(x)] = Some(i1.apply(x));
    }
    let mut taken: std::collections::HashSet<String> =
        (0..n1).map(|x| p1.name(x).to_string()).collect();
    let mut p2_to_new: Vec<usize> = vec![usize::MAX; p2.size()];
    let mut elements: Vec<RawElement> = (0..n1)
        .map(|x| RawElement::with_dim(p1.name(x), p1.dim_of(x)))
        .collect();
    for y in 0..p2.size() {
        match glue2[y] {
            Some(x1) => p2_to_new[y] = x1,
            None => {
                let name =
                    crate::ogposet::fresh_name(&mut taken, p2.name(y).to_string());
                p2_to_new[y] = elements.len();
                elements.push(RawElement::with_dim(name, p2.dim_of(y)));
            }
        }
    }

    let mut covers: HashMap<(usize, usize), Sign> = HashMap::new();
    for (u, l, s) in p1.all_covers() {
        covers.insert((u, l), s);
    }
    for (u, l, s) in p2.all_covers() {
        let key = (p2_to_new[u], p2_to_new[l]);
        if let Some(&prev) = covers.get(&key) {
            if prev != s {
                return Err(MapError::OrientationConflict {
                    upper: key.0,
                    lower: key.1,
                });
            }
        } else {
            covers.insert(key, s);
        }
    }
    let mut cover_list: Vec<(usize, usize, Sign)> =
        covers.into_iter().map(|((u, l), s)| (u, l, s)).collect();
    cover_list.sort();

    let (pushout, perm) = build_ogp(elements, &cover_list)
        .map_err(|e| MapError::PreconditionFailed(format!("pushout is not a valid poset: {e}")))?;
    let j1 = check_map(p1, &pushout, (0..n1).map(|x| perm[x]).collect())?;
    let j2 = check_map(
        p2,
        &pushout,
        (0..p2.size()).map(|y| perm[p2_to_new[y]]).collect(),
    )?;
    Ok((pushout, j1, j2))
}

/// Reverses a strictly dimension-dropping surjection of atoms through the
/// top-dimensional dual: the result agrees with `p` away from the greatest
/// element, which is sent to the greatest element of the target.
pub fn reverse_surjection(p: &OgpMap) -> Result<OgpMap, MapError> {
    let u = p.source();
    let v = p.target();
    let top_u = greatest(u).ok_or_else(|| {
        MapError::PreconditionFailed("source is not an atom".into())
    })?;
    let top_v = greatest(v).ok_or_else(|| {
        MapError::PreconditionFailed("target is not an atom".into())
    })?;
    if !p.is_surjective() {
        return Err(MapError::PreconditionFailed("map is not surjective".into()));
    }
    if u.dim() <= v.dim() {
        return Err(MapError::PreconditionFailed(
            "source dimension must strictly exceed target dimension".into(),
        ));
    }
    let n = u.dim() as usize;
    let dual = crate::constructions::dual(u, &crate::constructions::DualSet::levels([n]));
    let mut assign = p.assignment().to_vec();
    assign[top_u] = top_v;
    check_map(&dual, v, assign)
}

pub fn greatest(p: &Poset) -> Option<usize> {
    let full = p.full_set();
    let maxima = p.maximal_in(&full);
    (maxima.len() == 1).then(|| maxima[0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellClass {
    Nondegenerate,
    Degenerate,
}

/// Splits a cell (a map from an atom) into surjection and inclusion, and
/// classifies it as degenerate when the image drops dimension.
pub fn classify_cell(x: &OgpMap) -> Result<(CellClass, OgpMap, OgpMap), MapError> {
    if greatest(x.source()).is_none() {
        return Err(MapError::PreconditionFailed("source is not an atom".into()));
    }
    let (surj, incl) = image_factorization(x);
    let class = if surj.target().dim() < x.source().dim() {
        CellClass::Degenerate
    } else {
        CellClass::Nondegenerate
    };
    Ok((class, surj, incl))
}

/// Search-bounded irreducibility: a nondegenerate cell with no non-identity
/// equal-dimension surjective factorization found by hom-set enumeration.
/// `None` means the search limits were exceeded and no verdict is given.
pub fn is_irreducible_bounded(x: &OgpMap) -> Option<bool> {
    let (class, _, _) = classify_cell(x).ok()?;
    if class == CellClass::Degenerate {
        return Some(false);
    }
    let u = x.source();
    let complex = x.target();
    let n = u.dim();
    for z in 0..complex.size() {
        if complex.dim_of(z) as i64 != n {
            continue;
        }
        let (atom, embed) = complex.extract(complex.downset(z));
        if atom.size() >= u.size() {
            continue;
        }
        let incl = embedding_map(&atom, complex, embed);
        let surjs = enumerate_maps_bounded(u, &atom, false, None).ok()?;
        for p in surjs {
            if p.is_surjective() && p.then(&incl).ok()? == *x {
                return Some(false);
            }
        }
    }
    Some(true)
}
