//! The tensor square `A (x) A` of a matrix algebra and the multiplication
//! map `mu : A (x) A -> A` as an explicit matrix.
//!
//! Coordinates of `b_s (x) b_t` (0-based basis indices) live at column
//! `s * d + t`. This rule is shared by every module and by the certificate
//! format.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::ladder::LadderSpace;
use crate::linalg::{kernel_basis, CoordVector, RowSpace, SparseVec};
use crate::matrix::{ProductKind, SparseMatrix};
use crate::scalar::Field;

/// An algebra spanned by distinct elementary matrices, with its tensor
/// square indexing.
#[derive(Debug, Clone)]
pub struct TensorSpace {
    n: usize,
    field: Field,
    basis: Vec<SparseMatrix>,
    index: HashMap<(usize, usize), usize>,
}

impl TensorSpace {
    /// Every basis element must be an elementary matrix `e_{i,j}`, and no
    /// position may repeat.
    pub fn new(n: usize, field: Field, basis: Vec<SparseMatrix>) -> Result<Self> {
        let mut index = HashMap::with_capacity(basis.len());
        for (k, b) in basis.iter().enumerate() {
            if b.n() != n {
                return Err(Error::SizeMismatch(n, b.n()));
            }
            if b.field() != field {
                return Err(Error::FieldMismatch {
                    expected: field,
                    found: b.field(),
                });
            }
            let pos = b.as_elementary().ok_or(Error::NonElementaryBasis(k))?;
            if index.insert(pos, k).is_some() {
                return Err(Error::DuplicateBasis(pos.0, pos.1));
            }
        }
        Ok(TensorSpace {
            n,
            field,
            basis,
            index,
        })
    }

    pub fn from_positions(
        n: usize,
        field: Field,
        positions: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let basis = positions
            .into_iter()
            .map(|(i, j)| SparseMatrix::elementary(n, i, j, field))
            .collect::<Result<Vec<_>>>()?;
        TensorSpace::new(n, field, basis)
    }

    pub fn from_ladder_space(space: &LadderSpace) -> Self {
        TensorSpace::new(space.n(), space.field(), space.basis().to_vec())
            .expect("ladder bases are distinct elementary matrices")
    }

    /// `gl_m`: all `m x m` matrix units, row-major.
    pub fn gl(m: usize, field: Field) -> Result<Self> {
        let positions: Vec<_> = (1..=m).flat_map(|i| (1..=m).map(move |j| (i, j))).collect();
        TensorSpace::from_positions(m, field, positions)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn d(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseMatrix] {
        &self.basis
    }

    /// Column of `b_s (x) b_t`.
    pub fn column(&self, s: usize, t: usize) -> usize {
        s * self.d() + t
    }

    /// Inverse of [`column`](Self::column).
    pub fn pair(&self, column: usize) -> (usize, usize) {
        (column / self.d(), column % self.d())
    }

    pub fn contains(&self, m: &SparseMatrix) -> bool {
        self.sparse_coords(m).is_ok()
    }

    pub fn contains_identity(&self) -> bool {
        (1..=self.n).all(|i| self.index.contains_key(&(i, i)))
    }

    /// Basis index of position `(i, j)`, if the algebra contains `e_{i,j}`.
    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        self.index.get(&(i, j)).copied()
    }

    /// Nonzero coordinates of `m` in the basis, sorted by basis index.
    pub fn sparse_coords(&self, m: &SparseMatrix) -> Result<SparseVec> {
        if m.n() != self.n {
            return Err(Error::SizeMismatch(self.n, m.n()));
        }
        if m.field() != self.field {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: m.field(),
            });
        }
        let mut coords = m
            .entries()
            .map(|(i, j, v)| {
                self.index
                    .get(&(i, j))
                    .map(|&k| (k, v.clone()))
                    .ok_or(Error::NotInAlgebra { row: i, col: j })
            })
            .collect::<Result<SparseVec>>()?;
        coords.sort_unstable_by_key(|&(k, _)| k);
        Ok(coords)
    }

    pub fn coords(&self, m: &SparseMatrix) -> Result<CoordVector> {
        let mut v = CoordVector::zeros(self.d(), self.field).into_entries();
        for (k, value) in self.sparse_coords(m)? {
            v[k] = value;
        }
        Ok(CoordVector::new(v))
    }

    /// The algebra element with the given coordinates.
    pub fn element(&self, coords: &CoordVector) -> Result<SparseMatrix> {
        if coords.len() != self.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                found: coords.len(),
            });
        }
        let entries = coords
            .entries()
            .iter()
            .zip(&self.basis)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, b)| {
                let (i, j) = b.as_elementary().expect("elementary basis");
                (i, j, c.clone())
            });
        SparseMatrix::from_entries(self.n, self.field, entries.collect::<Vec<_>>())
    }

    /// Sparse coordinates of `u (x) v`: entry `u_s * v_t` at column `s*d + t`.
    pub fn sparse_tensor_coords(&self, u: &SparseMatrix, v: &SparseMatrix) -> Result<SparseVec> {
        let cu = self.sparse_coords(u)?;
        let cv = self.sparse_coords(v)?;
        let mut out = Vec::with_capacity(cu.len() * cv.len());
        for (s, a) in &cu {
            for (t, b) in &cv {
                out.push((self.column(*s, *t), a * b));
            }
        }
        Ok(out)
    }
}

/// `u (x) v`, tagged with the family that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankOneTensor {
    pub label: String,
    pub u: SparseMatrix,
    pub v: SparseMatrix,
}

impl RankOneTensor {
    /// Checks that both factors are nonzero members of `space`.
    pub fn new(
        space: &TensorSpace,
        label: impl Into<String>,
        u: SparseMatrix,
        v: SparseMatrix,
    ) -> Result<Self> {
        let t = RankOneTensor {
            label: label.into(),
            u,
            v,
        };
        t.check_members(space)?;
        Ok(t)
    }

    pub fn check_members(&self, space: &TensorSpace) -> Result<()> {
        if self.u.is_zero() || self.v.is_zero() {
            return Err(Error::ZeroFactor);
        }
        space.sparse_coords(&self.u)?;
        space.sparse_coords(&self.v)?;
        Ok(())
    }

    /// The same pair with the factors swapped.
    pub fn swapped(&self, label: impl Into<String>) -> Self {
        RankOneTensor {
            label: label.into(),
            u: self.v.clone(),
            v: self.u.clone(),
        }
    }
}

pub fn tensor_coords(t: &RankOneTensor, space: &TensorSpace) -> Result<CoordVector> {
    let d = space.d();
    let mut v = CoordVector::zeros(d * d, space.field()).into_entries();
    for (c, value) in space.sparse_tensor_coords(&t.u, &t.v)? {
        v[c] = value;
    }
    Ok(CoordVector::new(v))
}

/// The multiplication map as a `d^2 x d` table: `columns[s*d + t]` holds the
/// coordinates of `mu(b_s (x) b_t)` in the algebra basis.
#[derive(Debug)]
pub struct MuMap {
    kind: ProductKind,
    d: usize,
    columns: RowSpace,
    kernel: OnceLock<Vec<CoordVector>>,
}

/// Builds `mu` for `space` under `kind`. Fails if some product of basis
/// elements leaves the span.
pub fn build_mu(space: &TensorSpace, kind: ProductKind) -> Result<MuMap> {
    let d = space.d();
    let mut columns = Vec::with_capacity(d * d);
    for (s, bs) in space.basis().iter().enumerate() {
        for (t, bt) in space.basis().iter().enumerate() {
            let product = bs.product(bt, kind)?;
            let coords = space.coords(&product).map_err(|e| match e {
                Error::NotInAlgebra { .. } => Error::NotClosed(s, t),
                other => other,
            })?;
            columns.push(coords);
        }
    }
    Ok(MuMap {
        kind,
        d,
        columns: RowSpace::new(space.field(), d, columns)?,
        kernel: OnceLock::new(),
    })
}

impl MuMap {
    pub fn kind(&self) -> ProductKind {
        self.kind
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn columns(&self) -> &[CoordVector] {
        self.columns.rows()
    }

    pub fn rank(&self) -> usize {
        self.columns.rank()
    }

    /// `d^2 - rank`.
    pub fn kernel_dim(&self) -> usize {
        self.d * self.d - self.rank()
    }

    /// Explicit kernel basis, computed on first use.
    pub fn kernel_basis(&self) -> &[CoordVector] {
        self.kernel.get_or_init(|| {
            kernel_basis(&self.columns, self.d * self.d).expect("column count is d^2")
        })
    }

    /// `mu` applied to sparse tensor coordinates.
    pub fn apply_sparse(&self, coords: &SparseVec) -> Result<CoordVector> {
        let field = self.columns.field();
        let mut out = CoordVector::zeros(self.d, field).into_entries();
        for (c, a) in coords {
            let col = self.columns.rows().get(*c).ok_or(Error::DimensionMismatch {
                expected: self.d * self.d,
                found: c + 1,
            })?;
            for (k, b) in col.entries().iter().enumerate() {
                if !b.is_zero() {
                    out[k] = &out[k] + &a.checked_mul(b)?;
                }
            }
        }
        Ok(CoordVector::new(out))
    }

    pub fn apply(&self, coords: &CoordVector) -> Result<CoordVector> {
        if coords.len() != self.d * self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d * self.d,
                found: coords.len(),
            });
        }
        self.apply_sparse(&coords.to_sparse())
    }
}

/// Whether `t` lies in `Ker mu`, computed two ways: through `mu`'s matrix
/// applied to the tensor coordinates, and as the direct product of the
/// factors. The routes must agree.
pub fn in_kernel(t: &RankOneTensor, space: &TensorSpace, mu: &MuMap) -> Result<bool> {
    let via_mu = mu.apply_sparse(&space.sparse_tensor_coords(&t.u, &t.v)?)?.is_zero();
    let via_product = t.u.product(&t.v, mu.kind())?.is_zero();
    if via_mu != via_product {
        return Err(Error::RouteDisagreement(t.label.clone()));
    }
    Ok(via_mu)
}
