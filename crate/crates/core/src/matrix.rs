//! Sparse exact square matrices and the two products on them.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Which multiplication an algebra is considered under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProductKind {
    /// `xy`
    Associative,
    /// `[x, y] = xy - yx`
    Lie,
}

impl fmt::Display for ProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProductKind::Associative => "associative",
            ProductKind::Lie => "lie",
        })
    }
}

/// An `n x n` matrix storing only its nonzero entries, keyed by 1-based
/// `(row, col)`. Iteration is row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseMatrix {
    n: usize,
    field: Field,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMatrix {
    pub fn zero(n: usize, field: Field) -> Self {
        SparseMatrix {
            n,
            field,
            entries: BTreeMap::new(),
        }
    }

    /// The matrix unit `e_{i,j}`.
    pub fn elementary(n: usize, i: usize, j: usize, field: Field) -> Result<Self> {
        let mut m = SparseMatrix::zero(n, field);
        m.set(i, j, field.one())?;
        Ok(m)
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = SparseMatrix::zero(n, field);
        for i in 1..=n {
            m.entries.insert((i, i), field.one());
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triples; repeated positions
    /// are summed.
    pub fn from_entries(
        n: usize,
        field: Field,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self> {
        let mut m = SparseMatrix::zero(n, field);
        for (i, j, value) in entries {
            let current = m.get(i, j)?;
            if value.field() != field {
                return Err(Error::FieldMismatch {
                    expected: field,
                    found: value.field(),
                });
            }
            m.set(i, j, &current + &value)?;
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    fn check_index(&self, i: usize, j: usize) -> Result<()> {
        if i == 0 || j == 0 || i > self.n || j > self.n {
            return Err(Error::IndexOutOfRange {
                n: self.n,
                row: i,
                col: j,
            });
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> Result<Scalar> {
        self.check_index(i, j)?;
        Ok(self
            .entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| self.field.zero()))
    }

    /// Sets an entry, removing it when `value` is zero.
    pub fn set(&mut self, i: usize, j: usize, value: Scalar) -> Result<()> {
        self.check_index(i, j)?;
        if value.field() != self.field {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: value.field(),
            });
        }
        if value.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), value);
        }
        Ok(())
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// The single position of an elementary matrix `e_{i,j}`, if it is one.
    pub fn as_elementary(&self) -> Option<(usize, usize)> {
        match self.entries.iter().next() {
            Some((&pos, v)) if self.entries.len() == 1 && v.is_one() => Some(pos),
            _ => None,
        }
    }

    fn check_compatible(&self, other: &SparseMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: other.field,
            });
        }
        Ok(())
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: &Scalar, other: &SparseMatrix) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (&(i, j), v) in &other.entries {
            let sum = match out.entries.get(&(i, j)) {
                Some(cur) => cur.checked_add(&factor.checked_mul(v)?)?,
                None => factor.checked_mul(v)?,
            };
            out.set(i, j, sum)?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<Self> {
        self.add_scaled(&self.field.one(), other)
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<Self> {
        self.add_scaled(&-self.field.one(), other)
    }

    pub fn scale(&self, factor: &Scalar) -> Result<Self> {
        SparseMatrix::zero(self.n, self.field).add_scaled(factor, self)
    }

    /// Associative product `xy`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<Self> {
        self.check_compatible(other)?;
        let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            for (&(_, j), b) in other.entries.range((k, 1)..=(k, other.n)) {
                let term = a * b;
                acc.entry((i, j))
                    .and_modify(|cur| *cur = &*cur + &term)
                    .or_insert(term);
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(SparseMatrix {
            n: self.n,
            field: self.field,
            entries: acc,
        })
    }

    /// `xy` or `[x, y] = xy - yx` depending on `kind`.
    pub fn product(&self, other: &SparseMatrix, kind: ProductKind) -> Result<Self> {
        match kind {
            ProductKind::Associative => self.mul(other),
            ProductKind::Lie => self.mul(other)?.sub(&other.mul(self)?),
        }
    }
}

/// Free-function form of [`SparseMatrix::product`].
pub fn mat_product(x: &SparseMatrix, y: &SparseMatrix, kind: ProductKind) -> Result<SparseMatrix> {
    x.product(y, kind)
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, j, v) in self.entries() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if v.is_one() {
                write!(f, "e({i},{j})")?;
            } else {
                write!(f, "({v:?})e({i},{j})")?;
            }
        }
        Ok(())
    }
}
