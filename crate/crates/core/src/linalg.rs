//! Exact elimination: rank, pivots, null spaces, and an incremental sparse
//! echelon form for greedy rank augmentation.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Dense coordinates relative to some ordered basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoordVector(Vec<Scalar>);

impl CoordVector {
    pub fn new(entries: Vec<Scalar>) -> Self {
        CoordVector(entries)
    }

    pub fn zeros(len: usize, field: Field) -> Self {
        CoordVector(vec![field.zero(); len])
    }

    pub fn unit(len: usize, index: usize, field: Field) -> Self {
        let mut v = CoordVector::zeros(len, field);
        v.0[index] = field.one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    /// Nonzero entries as `(index, value)` pairs.
    pub fn to_sparse(&self) -> SparseVec {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect()
    }
}

impl std::ops::Index<usize> for CoordVector {
    type Output = Scalar;
    fn index(&self, index: usize) -> &Scalar {
        &self.0[index]
    }
}

/// Sparse row: strictly increasing column indices, no stored zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Reduced row echelon form of a row set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    /// Nonzero rows of the reduced form; row `r` has a leading 1 at
    /// `pivots[r]` and zeros in every other pivot column.
    pub rows: Vec<CoordVector>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// A list of equal-length rows with a lazily cached echelon form.
#[derive(Debug, Clone)]
pub struct RowSpace {
    field: Field,
    width: usize,
    rows: Vec<CoordVector>,
    echelon: OnceLock<Echelon>,
}

impl RowSpace {
    pub fn new(field: Field, width: usize, rows: Vec<CoordVector>) -> Result<Self> {
        for (r, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::RaggedRows {
                    row: r,
                    expected: width,
                    found: row.len(),
                });
            }
            if let Some(v) = row.entries().iter().find(|v| v.field() != field) {
                return Err(Error::FieldMismatch {
                    expected: field,
                    found: v.field(),
                });
            }
        }
        Ok(RowSpace {
            field,
            width,
            rows,
            echelon: OnceLock::new(),
        })
    }

    /// Infers the width from the first row. An empty list has width 0.
    pub fn from_rows(field: Field, rows: Vec<CoordVector>) -> Result<Self> {
        let width = rows.first().map_or(0, CoordVector::len);
        RowSpace::new(field, width, rows)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[CoordVector] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn echelon(&self) -> &Echelon {
        self.echelon
            .get_or_init(|| gauss_jordan(self.width, &self.rows))
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.echelon().pivots
    }
}

/// Rank and pivot columns of a row set.
pub fn rank_and_echelon(rows: &RowSpace) -> (usize, Vec<usize>) {
    let e = rows.echelon();
    (e.rank(), e.pivots.clone())
}

/// Gauss-Jordan elimination, scanning columns left to right and pivoting on
/// the first remaining row with a nonzero entry. The pivot row is
/// normalized immediately, so the output is the unique reduced form.
fn gauss_jordan(width: usize, rows: &[CoordVector]) -> Echelon {
    let mut m: Vec<Vec<Scalar>> = rows.iter().map(|r| r.entries().to_vec()).collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..width {
        let Some(found) = (next..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(next, found);
        let inv = m[next][col].inverse().expect("pivot is nonzero");
        if !inv.is_one() {
            for v in &mut m[next][col..] {
                *v = &*v * &inv;
            }
        }
        let (before, rest) = m.split_at_mut(next);
        let (pivot_row, after) = rest.split_first_mut().expect("pivot row exists");
        for row in before.iter_mut().chain(after.iter_mut()) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for c in col..width {
                if !pivot_row[c].is_zero() {
                    row[c] = &row[c] - &(&factor * &pivot_row[c]);
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    m.truncate(next);
    Echelon {
        rows: m.into_iter().map(CoordVector::new).collect(),
        pivots,
    }
}

/// Null space of a linear map given by the images of the domain basis
/// vectors: `map_rows.rows()[k]` is the image of the `k`-th domain basis
/// vector, so the result spans `{c : sum_k c_k * row_k = 0}`.
///
/// Basis vectors come out in free-variable order, each with a 1 in its
/// free coordinate.
pub fn kernel_basis(map_rows: &RowSpace, domain_dim: usize) -> Result<Vec<CoordVector>> {
    if map_rows.len() != domain_dim {
        return Err(Error::DimensionMismatch {
            expected: domain_dim,
            found: map_rows.len(),
        });
    }
    let field = map_rows.field();
    // Columns of the map matrix are the rows of the transpose.
    let transpose: Vec<CoordVector> = (0..map_rows.width())
        .map(|c| {
            CoordVector::new(
                map_rows
                    .rows()
                    .iter()
                    .map(|row| row[c].clone())
                    .collect(),
            )
        })
        .collect();
    let echelon = gauss_jordan(domain_dim, &transpose);
    let mut is_pivot = vec![false; domain_dim];
    for &p in &echelon.pivots {
        is_pivot[p] = true;
    }
    let basis = (0..domain_dim)
        .filter(|&f| !is_pivot[f])
        .map(|free| {
            let mut v = CoordVector::unit(domain_dim, free, field);
            for (row, &p) in echelon.rows.iter().zip(&echelon.pivots) {
                if !row[free].is_zero() {
                    v.0[p] = -&row[free];
                }
            }
            v
        })
        .collect();
    Ok(basis)
}

/// Echelon form grown one row at a time, over sparse rows.
///
/// Each stored row has a distinct leading column normalized to 1. A new row
/// is reduced against stored rows in increasing leading-column order; if a
/// residual survives, it is stored and the rank grows.
#[derive(Debug, Clone)]
pub struct IncrementalEchelon {
    field: Field,
    width: usize,
    rows: Vec<SparseVec>,
    by_lead: HashMap<usize, usize>,
}

impl IncrementalEchelon {
    pub fn new(field: Field, width: usize) -> Self {
        IncrementalEchelon {
            field,
            width,
            rows: Vec::new(),
            by_lead: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Leading columns of the stored rows, in insertion order.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    fn reduce(&self, row: &SparseVec) -> Result<BTreeMap<usize, Scalar>> {
        let mut acc = BTreeMap::new();
        for (c, v) in row {
            if *c >= self.width {
                return Err(Error::DimensionMismatch {
                    expected: self.width,
                    found: c + 1,
                });
            }
            if v.field() != self.field {
                return Err(Error::FieldMismatch {
                    expected: self.field,
                    found: v.field(),
                });
            }
            if !v.is_zero() {
                acc.insert(*c, v.clone());
            }
        }
        let mut floor = 0;
        while let Some((&lead, factor)) = acc.range(floor..).next() {
            let Some(&r) = self.by_lead.get(&lead) else {
                floor = lead + 1;
                continue;
            };
            let factor = factor.clone();
            for (c, v) in &self.rows[r] {
                let term = &factor * v;
                match acc.get_mut(c) {
                    Some(cur) => {
                        *cur = &*cur - &term;
                        if cur.is_zero() {
                            acc.remove(c);
                        }
                    }
                    None => {
                        acc.insert(*c, -term);
                    }
                }
            }
        }
        Ok(acc)
    }

    /// Whether `row` lies in the span of the stored rows.
    pub fn contains(&self, row: &SparseVec) -> Result<bool> {
        Ok(self.reduce(row)?.is_empty())
    }

    /// Adds `row` if it is independent of the stored rows; returns whether
    /// the rank grew.
    pub fn insert(&mut self, row: &SparseVec) -> Result<bool> {
        let residual = self.reduce(row)?;
        let Some((&lead, lead_value)) = residual.iter().next() else {
            return Ok(false);
        };
        let inv = lead_value.inverse()?;
        let normalized: SparseVec = residual
            .into_iter()
            .map(|(c, v)| (c, if inv.is_one() { v } else { &v * &inv }))
            .collect();
        self.by_lead.insert(lead, self.rows.len());
        self.rows.push(normalized);
        Ok(true)
    }
}

/// Rank of a set of sparse rows via [`IncrementalEchelon`].
pub fn sparse_rank<'a>(
    field: Field,
    width: usize,
    rows: impl IntoIterator<Item = &'a SparseVec>,
) -> Result<usize> {
    let mut echelon = IncrementalEchelon::new(field, width);
    for row in rows {
        echelon.insert(row)?;
    }
    Ok(echelon.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rational;

    fn row(values: &[i64]) -> CoordVector {
        CoordVector::new(values.iter().map(|&v| Q.from_i64(v)).collect())
    }

    fn space(rows: &[&[i64]]) -> RowSpace {
        RowSpace::from_rows(Q, rows.iter().map(|r| row(r)).collect()).unwrap()
    }

    /// Brute-force rank: the largest k with a nonzero k x k minor, each
    /// determinant expanded over all permutations.
    fn minor_rank(m: &[Vec<i64>]) -> usize {
        use itertools::Itertools;
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        for k in (1..=rows.min(cols)).rev() {
            for rs in (0..rows).combinations(k) {
                for cs in (0..cols).combinations(k) {
                    let mut det = 0i128;
                    for perm in (0..k).permutations(k) {
                        let mut inversions = 0;
                        for a in 0..k {
                            for b in a + 1..k {
                                if perm[a] > perm[b] {
                                    inversions += 1;
                                }
                            }
                        }
                        let sign = if inversions % 2 == 0 { 1 } else { -1 };
                        let prod: i128 = (0..k).map(|a| m[rs[a]][cs[perm[a]]] as i128).product();
                        det += sign * prod;
                    }
                    if det != 0 {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn small_ranks() {
        assert_eq!(space(&[&[1, 0], &[0, 1], &[1, 1]]).rank(), 2);
        assert_eq!(RowSpace::from_rows(Q, vec![]).unwrap().rank(), 0);
        assert_eq!(space(&[&[0, 0, 0]]).rank(), 0);
    }

    #[test]
    fn pivots_follow_first_nonzero_columns() {
        let s = space(&[&[0, 2, 4], &[0, 1, 2], &[0, 0, 3]]);
        assert_eq!(rank_and_echelon(&s), (2, vec![1, 2]));
        assert_eq!(s.echelon().rows, vec![row(&[0, 1, 0]), row(&[0, 0, 1])]);
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = RowSpace::from_rows(Q, vec![row(&[1, 2]), row(&[1])]).unwrap_err();
        assert!(matches!(err, Error::RaggedRows { row: 1, .. }));
    }

    #[test]
    fn kernel_of_zero_and_identity_maps() {
        let zero = space(&[&[0, 0], &[0, 0], &[0, 0], &[0, 0]]);
        let k = kernel_basis(&zero, 4).unwrap();
        assert_eq!(k, (0..4).map(|i| CoordVector::unit(4, i, Q)).collect::<Vec<_>>());

        let id = space(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(kernel_basis(&id, 3).unwrap().is_empty());

        assert!(matches!(
            kernel_basis(&id, 4),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = space(&[&[1, 2], &[2, 4], &[0, 1], &[1, 3]]);
        let k = kernel_basis(&m, 4).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            for c in 0..2 {
                let mut sum = Q.zero();
                for (r, coeff) in v.entries().iter().enumerate() {
                    sum = &sum + &(coeff * &m.rows()[r][c]);
                }
                assert!(sum.is_zero());
            }
        }
    }

    #[test]
    fn incremental_matches_dense() {
        let rows = [vec![0, 1, 1, 0], vec![1, 0, 0, 1], vec![1, 1, 1, 1], vec![0, 0, 2, 0]];
        let mut inc = IncrementalEchelon::new(Q, 4);
        let grew: Vec<bool> = rows
            .iter()
            .map(|r| inc.insert(&row(r).to_sparse()).unwrap())
            .collect();
        assert_eq!(grew, vec![true, true, false, true]);
        assert_eq!(inc.rank(), 3);
        assert!(inc.contains(&row(&[1, 2, 2, 1]).to_sparse()).unwrap());
        assert!(!inc.contains(&row(&[0, 0, 0, 1]).to_sparse()).unwrap());
    }

    fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        proptest::collection::vec(proptest::collection::vec(-2i64..=2, cols), rows)
    }

    fn to_space(m: &[Vec<i64>]) -> RowSpace {
        RowSpace::new(Q, m[0].len(), m.iter().map(|r| row(r)).collect()).unwrap()
    }

    proptest! {
        #[test]
        fn rank_matches_minor_oracle(m in matrix(4, 4)) {
            prop_assert_eq!(to_space(&m).rank(), minor_rank(&m));
        }

        #[test]
        fn rank_nullity(m in matrix(6, 3)) {
            let s = to_space(&m);
            let k = kernel_basis(&s, 6).unwrap();
            prop_assert_eq!(s.rank() + k.len(), 6);
        }

        #[test]
        fn rank_ignores_row_order(m in matrix(5, 4), seed in any::<u64>()) {
            let mut shuffled = m.clone();
            // deterministic Fisher-Yates from the seed
            let mut state = seed | 1;
            for i in (1..shuffled.len()).rev() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                shuffled.swap(i, (state % (i as u64 + 1)) as usize);
            }
            prop_assert_eq!(to_space(&m).rank(), to_space(&shuffled).rank());
        }

        #[test]
        fn sparse_rank_matches_dense(m in matrix(6, 5)) {
            let sparse: Vec<SparseVec> = m.iter().map(|r| row(r).to_sparse()).collect();
            prop_assert_eq!(sparse_rank(Q, 5, &sparse).unwrap(), to_space(&m).rank());
        }

        #[test]
        fn prime_field_rank_at_most_rational(m in matrix(4, 4)) {
            let f = Field::Prime(3);
            let rows = m.iter()
                .map(|r| CoordVector::new(r.iter().map(|&v| f.from_i64(v)).collect()))
                .collect();
            let p = RowSpace::new(f, 4, rows).unwrap();
            prop_assert!(p.rank() <= to_space(&m).rank());
        }
    }
}
