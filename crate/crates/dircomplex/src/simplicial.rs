//! Order complexes of posets, integer chain complexes, Smith normal form,
//! homology, Euler characteristics, and the last-vertex map.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::ogposet::{OrientedGradedPoset, Poset};
use crate::set::ElemSet;

/// Nondegenerate simplices of the nerve of a poset: per degree, the strictly
/// increasing chains, each stored as a sorted index tuple.
#[derive(Clone, Debug)]
pub struct OrderedComplex {
    pub chains: Vec<Vec<Vec<usize>>>,
}

impl OrderedComplex {
    pub fn dim(&self) -> i64 {
        self.chains.len() as i64 - 1
    }

    pub fn count(&self, k: usize) -> usize {
        self.chains.get(k).map_or(0, |c| c.len())
    }
}

/// All strict chains of a poset restricted to a closed subset. Element
/// indices are already a linear extension, so chains are ascending tuples.
pub fn nerve_of_subset(p: &OrientedGradedPoset, s: &ElemSet) -> OrderedComplex {
    let members: Vec<usize> = s.iter().collect();
    let mut chains: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut current: Vec<Vec<usize>> = members.iter().map(|&x| vec![x]).collect();
    while !current.is_empty() {
        chains.push(current.clone());
        let mut next = Vec::new();
        for chain in &current {
            let last = *chain.last().unwrap();
            for &y in &members {
                if y > last && p.le(last, y) {
                    let mut ext = chain.clone();
                    ext.push(y);
                    next.push(ext);
                }
            }
        }
        current = next;
    }
    OrderedComplex { chains }
}

pub fn nerve(p: &Poset) -> OrderedComplex {
    nerve_of_subset(p, &p.full_set())
}

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                m[(i, j)] = BigInt::from(v);
            }
        }
        m
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntegerMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Boundary matrices of an ordered complex, with the alternating-sign face
/// rule; `∂ ∘ ∂ = 0` is asserted.
pub fn boundary_matrices(c: &OrderedComplex) -> Vec<IntegerMatrix> {
    let sparse = sparse_boundaries(c);
    let mut out = Vec::new();
    for k in 0..sparse.len() {
        let rows = c.count(k);
        let cols = c.count(k + 1);
        let mut m = IntegerMatrix::zero(rows, cols);
        for (j, col) in sparse[k].iter().enumerate() {
            for (&i, v) in col {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        let _ = cols;
        out.push(m);
    }
    out
}

type SparseCol = HashMap<usize, i64>;

/// `result[k][j]` is the boundary of the `j`-th `(k+1)`-chain as a column
/// over the `k`-chains.
fn sparse_boundaries(c: &OrderedComplex) -> Vec<Vec<SparseCol>> {
    let mut out = Vec::new();
    for k in 1..c.chains.len() {
        let index: HashMap<&[usize], usize> = c.chains[k - 1]
            .iter()
            .enumerate()
            .map(|(i, ch)| (ch.as_slice(), i))
            .collect();
        let cols: Vec<SparseCol> = c.chains[k]
            .iter()
            .map(|chain| {
                let mut col = SparseCol::new();
                for drop in 0..chain.len() {
                    let mut face: Vec<usize> = chain.clone();
                    face.remove(drop);
                    let row = index[face.as_slice()];
                    let sign = if drop % 2 == 0 { 1 } else { -1 };
                    *col.entry(row).or_insert(0) += sign;
                }
                col.retain(|_, v| *v != 0);
                col
            })
            .collect();
        out.push(cols);
    }
    // d∘d = 0 on the nose.
    for k in 1..out.len() {
        for col in &out[k] {
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for (&mid, &v) in col {
                for (&row, &w) in &out[k - 1][mid] {
                    *acc.entry(row).or_insert(0) += v * w;
                }
            }
            assert!(acc.values().all(|&v| v == 0), "boundary of boundary is not zero");
        }
    }
    out
}

/// Smith normal form: invariant factors (each dividing the next) and rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub factors: Vec<BigInt>,
    pub rank: usize,
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SnfResult {
    let (d, _, _) = smith_normal_form_with_transforms(m);
    let mut factors = Vec::new();
    for t in 0..d.rows.min(d.cols) {
        if d[(t, t)].is_zero() {
            break;
        }
        factors.push(d[(t, t)].abs());
    }
    SnfResult {
        rank: factors.len(),
        factors,
    }
}

/// Full SNF: returns `(D, U, V)` with `U * M * V = D`, `U` and `V` products
/// of elementary row/column operations.
pub fn smith_normal_form_with_transforms(
    m: &IntegerMatrix,
) -> (IntegerMatrix, IntegerMatrix, IntegerMatrix) {
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(m.rows);
    let mut v = IntegerMatrix::identity(m.cols);
    let mut t = 0usize;

    while t < d.rows.min(d.cols) {
        // Magnitude-minimizing pivot over the active submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..d.rows {
            for j in t..d.cols {
                if d[(i, j)].is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if d[(i, j)].abs() < d[(pi, pj)].abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut d, &mut u, t, pi);
        swap_cols(&mut d, &mut v, t, pj);

        let mut clean = true;
        for i in t + 1..d.rows {
            if !d[(i, t)].is_zero() {
                let q = div_nearest(&d[(i, t)], &d[(t, t)]);
                row_sub(&mut d, &mut u, i, t, &q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..d.cols {
            if !d[(t, j)].is_zero() {
                let q = div_nearest(&d[(t, j)], &d[(t, t)]);
                col_sub(&mut d, &mut v, j, t, &q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // smaller remainders appeared; pick a new pivot
        }
        // Divisibility sweep: fold a non-divisible entry into row t.
        let mut retry = false;
        'sweep: for i in t + 1..d.rows {
            for j in t + 1..d.cols {
                if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                    row_add(&mut d, &mut u, t, i);
                    retry = true;
                    break 'sweep;
                }
            }
        }
        if retry {
            continue;
        }
        if d[(t, t)].is_negative() {
            negate_row(&mut d, &mut u, t);
        }
        t += 1;
    }
    (d, u, v)
}

fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    // Round-to-nearest quotient keeps remainders at most |b|/2.
    let (q, r) = a.div_rem(b);
    let two_r: BigInt = &r * 2;
    if two_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn swap_rows(d: &mut IntegerMatrix, u: &mut IntegerMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..d.cols {
        let tmp = d[(a, j)].clone();
        d[(a, j)] = d[(b, j)].clone();
        d[(b, j)] = tmp;
    }
    for j in 0..u.cols {
        let tmp = u[(a, j)].clone();
        u[(a, j)] = u[(b, j)].clone();
        u[(b, j)] = tmp;
    }
}

fn swap_cols(d: &mut IntegerMatrix, v: &mut IntegerMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..d.rows {
        let tmp = d[(i, a)].clone();
        d[(i, a)] = d[(i, b)].clone();
        d[(i, b)] = tmp;
    }
    for i in 0..v.rows {
        let tmp = v[(i, a)].clone();
        v[(i, a)] = v[(i, b)].clone();
        v[(i, b)] = tmp;
    }
}

fn row_sub(d: &mut IntegerMatrix, u: &mut IntegerMatrix, i: usize, t: usize, q: &BigInt) {
    for j in 0..d.cols {
        let sub = q * &d[(t, j)];
        d[(i, j)] -= sub;
    }
    for j in 0..u.cols {
        let sub = q * &u[(t, j)];
        u[(i, j)] -= sub;
    }
}

fn col_sub(d: &mut IntegerMatrix, v: &mut IntegerMatrix, j: usize, t: usize, q: &BigInt) {
    for i in 0..d.rows {
        let sub = q * &d[(i, t)];
        d[(i, j)] -= sub;
    }
    for i in 0..v.rows {
        let sub = q * &v[(i, t)];
        v[(i, j)] -= sub;
    }
}

fn row_add(d: &mut IntegerMatrix, u: &mut IntegerMatrix, t: usize, i: usize) {
    for j in 0..d.cols {
        let add = d[(i, j)].clone();
        d[(t, j)] += add;
    }
    for j in 0..u.cols {
        let add = u[(i, j)].clone();
        u[(t, j)] += add;
    }
}

fn negate_row(d: &mut IntegerMatrix, u: &mut IntegerMatrix, t: usize) {
    for j in 0..d.cols {
        let v = -d[(t, j)].clone();
        d[(t, j)] = v;
    }
    for j in 0..u.cols {
        let v = -u[(t, j)].clone();
        u[(t, j)] = v;
    }
}

/// One homology group: free rank plus invariant-factor torsion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for _ in 0..self.betti {
            parts.push("Z".to_string());
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologySummary {
    pub reduced: bool,
    pub groups: Vec<HomologyGroup>,
}

impl HomologySummary {
    pub fn is_trivial(&self) -> bool {
        self.groups
            .iter()
            .all(|g| g.betti == 0 && g.torsion.is_empty())
    }
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tilde = if self.reduced { "~" } else { "" };
        for (k, g) in self.groups.iter().enumerate() {
            writeln!(f, "H{tilde}_{k} = {g}")?;
        }
        Ok(())
    }
}

/// A chain complex held as sparse columns, amenable to elementary
/// reductions before the exact SNF step.
struct SparseComplex {
    /// `counts[k]` = number of alive k-cells.
    alive: Vec<Vec<bool>>,
    /// `cols[k][j]` = boundary of the j-th (k+1)-cell.
    cols: Vec<Vec<HashMap<usize, BigInt>>>,
}

impl SparseComplex {
    fn from_nerve(c: &OrderedComplex, reduced: bool) -> Self {
        let sparse = sparse_boundaries(c);
        let degrees = c.chains.len();
        let mut alive: Vec<Vec<bool>> = (0..degrees).map(|k| vec![true; c.count(k)]).collect();
        let mut cols: Vec<Vec<HashMap<usize, BigInt>>> = sparse
            .into_iter()
            .map(|level| {
                level
                    .into_iter()
                    .map(|col| {
                        col.into_iter()
                            .map(|(r, v)| (r, BigInt::from(v)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        if reduced && degrees > 0 {
            // Augmentation: one (-1)-cell that every vertex maps onto.
            let aug: Vec<HashMap<usize, BigInt>> = (0..c.count(0))
                .map(|_| HashMap::from([(0usize, BigInt::one())]))
                .collect();
            cols.insert(0, aug);
            alive.insert(0, vec![true; 1]);
        }
        SparseComplex { alive, cols }
    }

    /// Cancels pairs `(a, b)` with `<∂b, a> = ±1`, preserving integral
    /// homology; the residual complex is what SNF sees.
    fn reduce(&mut self) {
        for k in 0..self.cols.len() {
            loop {
                let mut pair: Option<(usize, usize)> = None;
                'outer: for (j, col) in self.cols[k].iter().enumerate() {
                    if !self.alive[k + 1][j] {
                        continue;
                    }
                    for (&r, v) in col {
                        if v.abs().is_one() {
                            pair = Some((r, j));
                            break 'outer;
                        }
                    }
                }
                let Some((a, b)) = pair else { break };
                let lambda = self.cols[k][b][&a].clone();
                let base = self.cols[k][b].clone();
                // Clear `a` from every other column at this level.
                for j in 0..self.cols[k].len() {
                    if j == b || !self.alive[k + 1][j] {
                        continue;
                    }
                    let coeff = match self.cols[k][j].get(&a) {
                        Some(c) => c.clone(),
                        None => continue,
                    };
                    let factor = &coeff / &lambda; // lambda = ±1
                    for (&r, v) in &base {
                        let entry = self.cols[k][j].entry(r).or_insert_with(BigInt::zero);
                        *entry -= &factor * v;
                    }
                    self.cols[k][j].retain(|_, v| !v.is_zero());
                }
                // Drop `b` from the level above.
                if k + 1 < self.cols.len() {
                    for col in self.cols[k + 1].iter_mut() {
                        col.remove(&b);
                    }
                }
                self.alive[k][a] = false;
                self.alive[k + 1][b] = false;
                self.cols[k][b].clear();
            }
        }
    }

    /// Dense matrices of the residual complex, with a row/col index per
    /// surviving cell.
    fn residual_matrices(&self) -> (Vec<usize>, Vec<IntegerMatrix>) {
        let renumber: Vec<HashMap<usize, usize>> = self
            .alive
            .iter()
            .map(|lv| {
                lv.iter()
                    .enumerate()
                    .filter(|(_, &a)| a)
                    .enumerate()
                    .map(|(new, (old, _))| (old, new))
                    .collect()
            })
            .collect();
        let counts: Vec<usize> = renumber.iter().map(|m| m.len()).collect();
        let mut mats = Vec::new();
        for k in 0..self.cols.len() {
            let mut m = IntegerMatrix::zero(counts[k], counts[k + 1]);
            for (j, col) in self.cols[k].iter().enumerate() {
                if !self.alive[k + 1][j] {
                    continue;
                }
                let nj = renumber[k + 1][&j];
                for (&r, v) in col {
                    m[(renumber[k][&r], nj)] = v.clone();
                }
            }
            mats.push(m);
        }
        (counts, mats)
    }
}

/// Integer homology of the nerve, per degree; `reduced` augments degree -1.
pub fn homology(c: &OrderedComplex, reduced: bool) -> HomologySummary {
    let degrees = c.chains.len();
    if degrees == 0 {
        return HomologySummary {
            reduced,
            groups: Vec::new(),
        };
    }
    let mut sc = SparseComplex::from_nerve(c, reduced);
    sc.reduce();
    let (counts, mats) = sc.residual_matrices();
    // counts has one entry per chain degree (plus the augmentation slot).
    let snfs: Vec<SnfResult> = mats.iter().map(smith_normal_form).collect();
    let offset = if reduced { 1 } else { 0 };
    let mut groups = Vec::new();
    for k in 0..degrees {
        let idx = k + offset;
        let rank_in = if idx > 0 { snfs[idx - 1].rank } else { 0 };
        let rank_out = snfs.get(idx).map_or(0, |s| s.rank);
        let betti = counts[idx] - rank_in - rank_out;
        let torsion: Vec<BigInt> = snfs
            .get(idx)
            .map(|s| {
                s.factors
                    .iter()
                    .filter(|f| f.abs() > BigInt::one())
                    .cloned()
                    .collect()
            })
            .unwrap_or_default();
        groups.push(HomologyGroup { betti, torsion });
    }
    HomologySummary { reduced, groups }
}

/// Euler characteristic both ways: by signed element count and by signed
/// chain count of the nerve. The two agree on every poset.
pub fn euler(p: &Poset) -> (i64, i64) {
    let by_elements: i64 = (0..p.size())
        .map(|x| if p.dim_of(x) % 2 == 0 { 1 } else { -1 })
        .sum();
    let c = nerve(p);
    let by_chains: i64 = c
        .chains
        .iter()
        .enumerate()
        .map(|(k, level)| {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            sign * level.len() as i64
        })
        .sum();
    assert_eq!(by_elements, by_chains, "euler characteristics disagree");
    (by_elements, by_chains)
}

/// The last-vertex map `Δ^n -> [n]`: a word maps to `n` minus its count of
/// trailing `⊥`s. Monotone by construction; validated here.
pub fn last_vertex_map(n: usize) -> (Poset, Vec<usize>) {
    let p = crate::constructions::simplex(n);
    let assign: Vec<usize> = (0..p.size())
        .map(|x| {
            let trailing_bot = p
                .name(x)
                .chars()
                .rev()
                .take_while(|&c| c == '⊥')
                .count();
            n - trailing_bot
        })
        .collect();
    for x in 0..p.size() {
        for y in 0..p.size() {
            if p.le(x, y) {
                assert!(assign[x] <= assign[y], "last vertex map must be monotone");
            }
        }
    }
    (p, assign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{generate_poset, globe, simplex, Generator};
    use crate::ogposet::Side;

    #[test]
    fn nerve_counts() {
        let o1 = globe(1);
        let c = nerve(&o1);
        assert_eq!((c.count(0), c.count(1)), (3, 2));

        let d2 = simplex(2);
        let c = nerve(&d2);
        assert_eq!((c.count(0), c.count(1), c.count(2)), (7, 12, 6));

        let pt = generate_poset(Generator::Point, 0).unwrap();
        assert_eq!(nerve(&pt).count(0), 1);
    }

    #[test]
    fn boundary_matrix_basics() {
        let d2 = simplex(2);
        let mats = boundary_matrices(&nerve(&d2));
        assert_eq!(mats.len(), 2);
        // An edge chain maps to the difference of its endpoints.
        let m = &mats[0];
        for j in 0..m.cols {
            let col_sum: BigInt = (0..m.rows).map(|i| m[(i, j)].clone()).sum();
            assert!(col_sum.is_zero());
        }

        // Path with three vertices: rank of d1 is 2.
        let path = crate::molecule::paste(&globe(1), &globe(1), 0).unwrap().0;
        let (sk0, _) = path.skeleton(0);
        let _ = sk0;
        let c = nerve(&path);
        let mats = boundary_matrices(&c);
        assert_eq!(smith_normal_form(&mats[0]).rank, 4);
    }

    #[test]
    fn snf_examples() {
        let m = IntegerMatrix::from_rows(vec![vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.factors, vec![BigInt::from(1), BigInt::from(6)]);

        let z = IntegerMatrix::zero(3, 2);
        assert_eq!(smith_normal_form(&z).rank, 0);

        let id = IntegerMatrix::identity(3);
        let snf = smith_normal_form(&id);
        assert_eq!(snf.factors, vec![BigInt::one(); 3]);
    }

    #[test]
    fn snf_transforms_reconstruct() {
        let m = IntegerMatrix::from_rows(vec![
            vec![2, 4, 4],
            vec![-6, 6, 12],
            vec![10, 4, 16],
        ]);
        let (d, u, v) = smith_normal_form_with_transforms(&m);
        assert_eq!(u.mul(&m).mul(&v), d);
        // Factors divide in sequence.
        let snf = smith_normal_form(&m);
        for w in snf.factors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn snf_preserves_determinant_magnitude() {
        let m = IntegerMatrix::from_rows(vec![vec![3, 1], vec![1, 3]]);
        let snf = smith_normal_form(&m);
        let prod: BigInt = snf.factors.iter().product();
        assert_eq!(prod, BigInt::from(8)); // |det| = 8
    }

    #[test]
    fn homology_examples() {
        // Any globe nerve is a ball: trivial reduced homology.
        for n in 0..4 {
            let g = globe(n);
            let h = homology(&nerve(&g), true);
            assert!(h.is_trivial(), "O^{n} should be a ball");
        }

        // The boundary of O^3 is a 2-sphere.
        let g3 = globe(3);
        let b = g3.boundary_codim1(&g3.full_set(), Side::Both);
        let h = homology(&nerve_of_subset(&g3, &b), true);
        assert_eq!(h.groups[2].betti, 1);
        assert!(h.groups[2].torsion.is_empty());
        assert_eq!(h.groups[0].betti, 0);
        assert_eq!(h.groups[1].betti, 0);

        // Two disjoint points, unreduced: H_0 = Z^2.
        let (two, _) = crate::ogposet::build_ogp(
            vec![
                crate::ogposet::RawElement::named("a"),
                crate::ogposet::RawElement::named("b"),
            ],
            &[],
        )
        .unwrap();
        let h = homology(&nerve(&two), false);
        assert_eq!(h.groups[0].betti, 2);
    }

    #[test]
    fn homology_reduction_agrees_with_direct_snf() {
        // Same answer with and without the elementary-reduction pre-pass.
        let d3 = simplex(3);
        let c = nerve(&d3);
        let fast = homology(&c, true);

        let mats = boundary_matrices(&c);
        let snfs: Vec<SnfResult> = mats.iter().map(smith_normal_form).collect();
        // Unreduced betti_0 should be 1 and everything else 0 for a ball.
        let betti0 = c.count(0) - snfs[0].rank;
        assert_eq!(betti0, 1);
        for k in 1..c.chains.len() {
            let rank_in = snfs[k - 1].rank;
            let rank_out = snfs.get(k).map_or(0, |s| s.rank);
            assert_eq!(c.count(k) - rank_in - rank_out, 0);
        }
        assert!(fast.is_trivial());
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler(&globe(2)), (1, 1));
        assert_eq!(euler(&simplex(3)), (1, 1));
        let g3 = globe(3);
        let b = g3.boundary_codim1(&g3.full_set(), Side::Both);
        let (bp, _) = g3.extract(&b);
        assert_eq!(euler(&bp), (2, 2));
    }

    #[test]
    fn last_vertex_examples() {
        let (p, assign) = last_vertex_map(1);
        let at = |name: &str| assign[p.index_of_name(name).unwrap()];
        assert_eq!(at("⊤⊤"), 1);
        assert_eq!(at("⊥⊤"), 1);
        assert_eq!(at("⊤⊥"), 0);

        let (_, assign) = last_vertex_map(0);
        assert!(assign.iter().all(|&v| v == 0));

        let (p, assign) = last_vertex_map(2);
        assert_eq!(assign[p.index_of_name("⊤⊥⊤").unwrap()], 2);
    }
}
