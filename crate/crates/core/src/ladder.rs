//! Ladders and the staircase matrix spaces they parameterize.
//!
//! A step `(i, j)` contributes every position with row `<= i` and column
//! `>= j`; the ladder space is the span of the union. Upper-triangular
//! ladders (`i_t < j_{t+1}`) are exactly the ones whose space is closed
//! under multiplication.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ProductKind, SparseMatrix};
use crate::scalar::Field;

/// A `k`-step ladder on `n`. Steps are sorted and strictly increasing in
/// both coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LadderWire", into = "LadderWire")]
pub struct Ladder {
    n: usize,
    steps: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LadderWire {
    n: usize,
    steps: Vec<[usize; 2]>,
}

impl TryFrom<LadderWire> for Ladder {
    type Error = Error;
    fn try_from(w: LadderWire) -> Result<Self> {
        Ladder::new(w.n, w.steps.into_iter().map(|[i, j]| (i, j)))
    }
}

impl From<Ladder> for LadderWire {
    fn from(l: Ladder) -> Self {
        LadderWire {
            n: l.n,
            steps: l.steps.into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }
}

impl Ladder {
    /// Validates and sorts the steps (by row index).
    pub fn new(n: usize, steps: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLadder("ambient size must be positive".into()));
        }
        let mut steps: Vec<_> = steps.into_iter().collect();
        if steps.is_empty() {
            return Err(Error::InvalidLadder("a ladder needs at least one step".into()));
        }
        steps.sort_unstable();
        for &(i, j) in &steps {
            if i == 0 || j == 0 || i > n || j > n {
                return Err(Error::InvalidLadder(format!(
                    "step ({i}, {j}) is outside 1..={n}"
                )));
            }
        }
        for (&(i0, j0), &(i1, j1)) in steps.iter().tuple_windows() {
            if i0 >= i1 || j0 >= j1 {
                return Err(Error::InvalidLadder(format!(
                    "steps ({i0}, {j0}) and ({i1}, {j1}) are not strictly increasing"
                )));
            }
        }
        Ok(Ladder { n, steps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[(usize, usize)] {
        &self.steps
    }

    pub fn k(&self) -> usize {
        self.steps.len()
    }

    /// `i_t < j_{t+1}` for every consecutive pair of steps.
    pub fn is_upper_triangular(&self) -> bool {
        self.steps
            .iter()
            .tuple_windows()
            .all(|(&(i, _), &(_, j_next))| i < j_next)
    }

    /// Whether `(i, j)` lies in the ladder's position set.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        j <= self.n && self.steps.iter().any(|&(it, jt)| i <= it && jt <= j)
    }

    /// All positions in row-major order.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        (1..=self.n)
            .cartesian_product(1..=self.n)
            .filter(|&(i, j)| self.contains(i, j))
            .collect()
    }
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} {{", self.n)?;
        for (t, (i, j)) in self.steps.iter().enumerate() {
            if t > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({i},{j})")?;
        }
        write!(f, "}}")
    }
}

/// Free-function form of [`Ladder::is_upper_triangular`].
pub fn is_upper_triangular(ladder: &Ladder) -> bool {
    ladder.is_upper_triangular()
}

/// The ladder matrices `M_L`: one elementary matrix per position, row-major.
#[derive(Debug, Clone)]
pub struct LadderSpace {
    ladder: Ladder,
    field: Field,
    positions: BTreeSet<(usize, usize)>,
    basis: Vec<SparseMatrix>,
}

impl LadderSpace {
    pub fn ladder(&self) -> &Ladder {
        &self.ladder
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.ladder.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn positions(&self) -> &BTreeSet<(usize, usize)> {
        &self.positions
    }

    pub fn basis(&self) -> &[SparseMatrix] {
        &self.basis
    }

    /// Whether every entry of `m` sits at an allowed position.
    pub fn supports(&self, m: &SparseMatrix) -> bool {
        m.entries().all(|(i, j, _)| self.positions.contains(&(i, j)))
    }
}

pub fn ladder_space(ladder: &Ladder, field: Field) -> LadderSpace {
    let positions: BTreeSet<_> = ladder.positions().into_iter().collect();
    let basis = positions
        .iter()
        .map(|&(i, j)| SparseMatrix::elementary(ladder.n, i, j, field).expect("position in range"))
        .collect();
    LadderSpace {
        ladder: ladder.clone(),
        field,
        positions,
        basis,
    }
}

/// Whether the product of every ordered pair of basis elements stays in
/// the position set.
pub fn is_closed(space: &LadderSpace, kind: ProductKind) -> bool {
    space.basis.iter().all(|x| {
        space.basis.iter().all(|y| {
            let p = x.product(y, kind).expect("same size and field");
            space.supports(&p)
        })
    })
}

/// The ladder whose space is the block upper triangular algebra of the
/// partition `(n_1, ..., n_k)`: step `t` is `(n_1 + .. + n_t, 1 + n_1 + .. + n_{t-1})`.
pub fn partition_to_ladder(partition: &[usize]) -> Result<Ladder> {
    if partition.is_empty() {
        return Err(Error::InvalidPartition("empty partition".into()));
    }
    if let Some(p) = partition.iter().position(|&part| part == 0) {
        return Err(Error::InvalidPartition(format!("part {p} is not positive")));
    }
    let n = partition.iter().sum();
    let mut before = 0;
    let steps = partition.iter().map(|&part| {
        let step = (before + part, before + 1);
        before += part;
        step
    });
    Ladder::new(n, steps.collect::<Vec<_>>())
}

/// Every `k`-step ladder on `n`, ordered lexicographically by
/// (row indices, column indices). There are `C(n, k)^2` of them.
pub fn enumerate_ladders(n: usize, k: usize) -> Result<Vec<Ladder>> {
    if k == 0 || k > n {
        return Err(Error::InvalidLadder(format!(
            "step count {k} must lie in 1..={n}"
        )));
    }
    let subsets: Vec<Vec<usize>> = (1..=n).combinations(k).collect();
    Ok(subsets
        .iter()
        .cartesian_product(&subsets)
        .map(|(rows, cols)| Ladder {
            n,
            steps: rows.iter().copied().zip(cols.iter().copied()).collect(),
        })
        .collect())
}

/// Block sizes of a non-abelian one-step ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockProfile {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
}

impl BlockProfile {
    pub fn new(n1: usize, n2: usize, n3: usize) -> Result<Self> {
        if n2 == 0 {
            return Err(Error::InvalidLadder("middle block must be nonempty".into()));
        }
        Ok(BlockProfile { n1, n2, n3 })
    }

    pub fn n(&self) -> usize {
        self.n1 + self.n2 + self.n3
    }

    /// The one-step ladder `(n1 + n2, n1 + 1)` on `n1 + n2 + n3`.
    pub fn ladder(&self) -> Ladder {
        Ladder::new(self.n(), [(self.n1 + self.n2, self.n1 + 1)]).expect("valid by construction")
    }

    /// `dim M_L = (n1 + n2)(n2 + n3)`.
    pub fn algebra_dim(&self) -> usize {
        (self.n1 + self.n2) * (self.n2 + self.n3)
    }
}

impl fmt::Display for BlockProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.n1, self.n2, self.n3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneStepShape {
    /// `i_1 < j_1`: every product vanishes.
    Abelian,
    Blocks(BlockProfile),
}

pub fn block_profile(ladder: &Ladder) -> Result<OneStepShape> {
    let &[(i1, j1)] = ladder.steps() else {
        return Err(Error::NotOneStep(ladder.k()));
    };
    if i1 < j1 {
        return Ok(OneStepShape::Abelian);
    }
    Ok(OneStepShape::Blocks(BlockProfile {
        n1: j1 - 1,
        n2: i1 - j1 + 1,
        n3: ladder.n() - i1,
    }))
}
