//! Explicit rank-one basis of `Ker mu` for a one-step ladder Lie algebra.
//!
//! A non-abelian one-step ladder `(i1, j1)` on `n` splits into blocks of
//! sizes `n1 = j1 - 1`, `n2 = i1 - j1 + 1`, `n3 = n - i1`:
//!
//! ```text
//!          n1   n2   n3
//!   n1  [  0    l    a  ]
//!   n2  [  0    h    r  ]
//!   n3  [  0    0    0  ]
//! ```
//!
//! `h` is a copy of `gl_{n2}`; the bracket sends `h x l -> l`, `h x r -> r`,
//! `l x r -> a` and kills every other block pairing. `Ker mu` therefore
//! decomposes by block pairing, and each piece gets its own family of
//! commuting pairs. The `h (x) h` piece is filled by the rank-one search on
//! `gl_{n2}`. Independence of the whole list is never assumed: the
//! assembled certificate goes through [`verify_certificate`].
//!
//! [`verify_certificate`]: crate::certificate::verify_certificate

use std::fmt;
use std::ops::RangeInclusive;

use crate::certificate::{
    abelian_certificate, default_budget, search_spanning, AlgebraDescriptor, Certificate,
    FamilyCount, SearchOutcome,
};
use crate::error::{Error, Result};
use crate::ladder::{block_profile, BlockProfile, Ladder, LadderSpace, OneStepShape};
use crate::matrix::{ProductKind, SparseMatrix};
use crate::scalar::Field;
use crate::tensor::{build_mu, RankOneTensor, TensorSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockLabel {
    H,
    L,
    R,
    A,
}

impl BlockLabel {
    pub const ALL: [BlockLabel; 4] = [BlockLabel::H, BlockLabel::L, BlockLabel::R, BlockLabel::A];

    /// 1-based row range of the block.
    pub fn rows(self, p: &BlockProfile) -> RangeInclusive<usize> {
        match self {
            BlockLabel::H | BlockLabel::R => middle(p),
            BlockLabel::L | BlockLabel::A => top(p),
        }
    }

    /// 1-based column range of the block.
    pub fn cols(self, p: &BlockProfile) -> RangeInclusive<usize> {
        match self {
            BlockLabel::H | BlockLabel::L => middle(p),
            BlockLabel::R | BlockLabel::A => right(p),
        }
    }

    /// Positions of the block, row-major.
    pub fn positions(self, p: &BlockProfile) -> Vec<(usize, usize)> {
        let cols = self.cols(p);
        self.rows(p)
            .flat_map(|i| cols.clone().map(move |j| (i, j)))
            .collect()
    }

    /// Which block `[x, y]` lands in for `x` in `self` and `y` in `other`;
    /// `None` when the bracket vanishes identically.
    pub fn bracket_target(self, other: BlockLabel) -> Option<BlockLabel> {
        use BlockLabel::*;
        match (self, other) {
            (H, H) => Some(H),
            (H, L) | (L, H) => Some(L),
            (H, R) | (R, H) => Some(R),
            (L, R) | (R, L) => Some(A),
            _ => None,
        }
    }
}

impl fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockLabel::H => "h",
            BlockLabel::L => "l",
            BlockLabel::R => "r",
            BlockLabel::A => "a",
        })
    }
}

fn top(p: &BlockProfile) -> RangeInclusive<usize> {
    1..=p.n1
}

fn middle(p: &BlockProfile) -> RangeInclusive<usize> {
    p.n1 + 1..=p.n1 + p.n2
}

fn right(p: &BlockProfile) -> RangeInclusive<usize> {
    p.n1 + p.n2 + 1..=p.n()
}

/// The block holding position `(i, j)`, or `None` outside the ladder.
pub fn block_of(p: &BlockProfile, i: usize, j: usize) -> Option<BlockLabel> {
    BlockLabel::ALL
        .into_iter()
        .find(|b| b.rows(p).contains(&i) && b.cols(p).contains(&j))
}

/// Every tensor family of the construction, in assembly order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyLabel {
    PairHA,
    PairLA,
    PairRA,
    PairAA,
    PairLL,
    PairRR,
    GlH,
    T,
    S,
    R,
    TMirror,
    SMirror,
    RMirror,
    U,
    V,
    W,
}

impl FamilyLabel {
    pub const ALL: [FamilyLabel; 16] = [
        FamilyLabel::PairHA,
        FamilyLabel::PairLA,
        FamilyLabel::PairRA,
        FamilyLabel::PairAA,
        FamilyLabel::PairLL,
        FamilyLabel::PairRR,
        FamilyLabel::GlH,
        FamilyLabel::T,
        FamilyLabel::S,
        FamilyLabel::R,
        FamilyLabel::TMirror,
        FamilyLabel::SMirror,
        FamilyLabel::RMirror,
        FamilyLabel::U,
        FamilyLabel::V,
        FamilyLabel::W,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyLabel::PairHA => "pair-h-a",
            FamilyLabel::PairLA => "pair-l-a",
            FamilyLabel::PairRA => "pair-r-a",
            FamilyLabel::PairAA => "pair-a-a",
            FamilyLabel::PairLL => "pair-l-l",
            FamilyLabel::PairRR => "pair-r-r",
            FamilyLabel::GlH => "gl-h",
            FamilyLabel::T => "T",
            FamilyLabel::S => "S",
            FamilyLabel::R => "R",
            FamilyLabel::TMirror => "T-mirror",
            FamilyLabel::SMirror => "S-mirror",
            FamilyLabel::RMirror => "R-mirror",
            FamilyLabel::U => "U",
            FamilyLabel::V => "V",
            FamilyLabel::W => "W",
        }
    }

    /// Closed-form size of the family.
    pub fn expected_count(self, p: &BlockProfile) -> usize {
        let (n1, n2, n3) = (p.n1, p.n2, p.n3);
        match self {
            FamilyLabel::PairHA => 2 * n1 * n2 * n2 * n3,
            FamilyLabel::PairLA => 2 * n1 * n1 * n2 * n3,
            FamilyLabel::PairRA => 2 * n1 * n2 * n3 * n3,
            FamilyLabel::PairAA => n1 * n1 * n3 * n3,
            FamilyLabel::PairLL => n1 * n1 * n2 * n2,
            FamilyLabel::PairRR => n2 * n2 * n3 * n3,
            FamilyLabel::GlH => n2.pow(4) - n2 * n2 + 1,
            FamilyLabel::T => 2 * n2.pow(3) * n3 - 2 * n2 * n2 * n3,
            FamilyLabel::S => 2 * n2 * n2 * n3 - 2 * n2 * n3,
            FamilyLabel::R => n2 * n3,
            FamilyLabel::TMirror => 2 * n1 * n2.pow(3) - 2 * n1 * n2 * n2,
            FamilyLabel::SMirror => 2 * n1 * n2 * n2 - 2 * n1 * n2,
            FamilyLabel::RMirror => n1 * n2,
            FamilyLabel::U => 2 * n1 * n2 * n2 * n3 - 2 * n1 * n2 * n3,
            FamilyLabel::V => 2 * n1 * n2 * n3 - 2 * n1 * n3,
            FamilyLabel::W => n1 * n3,
        }
    }
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySpec {
    pub label: FamilyLabel,
    pub expected: usize,
}

/// Per-family counts in assembly order. They sum to
/// [`kernel_dim_polynomial`].
pub fn expected_counts(p: &BlockProfile) -> Vec<FamilySpec> {
    FamilyLabel::ALL
        .into_iter()
        .map(|label| FamilySpec {
            label,
            expected: label.expected_count(p),
        })
        .collect()
}

/// `dim Ker mu` as a polynomial in the block sizes.
pub fn kernel_dim_polynomial(p: &BlockProfile) -> usize {
    let (n1, n2, n3) = (p.n1 as i128, p.n2 as i128, p.n3 as i128);
    let value = n1 * n1 * n2 * n2
        + 2 * n1 * n1 * n2 * n3
        + n1 * n1 * n3 * n3
        + 2 * n1 * n2.pow(3)
        + 4 * n1 * n2 * n2 * n3
        + 2 * n1 * n2 * n3 * n3
        - n1 * n2
        - n1 * n3
        + n2.pow(4)
        + 2 * n2.pow(3) * n3
        + n2 * n2 * n3 * n3
        - n2 * n2
        - n2 * n3
        + 1;
    usize::try_from(value).expect("kernel dimension is positive")
}

/// Tensors still needed after the block pairings and the `h (x) h` piece:
/// `2 n1 n2^3 + 2 n2^3 n3 + 2 n1 n2^2 n3 - n1 n2 - n1 n3 - n2 n3`.
pub fn remainder_after_pairings(p: &BlockProfile) -> usize {
    let (n1, n2, n3) = (p.n1, p.n2, p.n3);
    2 * n1 * n2.pow(3) + 2 * n2.pow(3) * n3 + 2 * n1 * n2 * n2 * n3
        - n1 * n2
        - n1 * n3
        - n2 * n3
}

/// Checks the block containment table on every pair of basis elements.
pub fn multiplication_table_check(p: &BlockProfile, space: &LadderSpace) -> bool {
    let label = |b: &SparseMatrix| {
        b.as_elementary()
            .and_then(|(i, j)| block_of(p, i, j))
    };
    space.basis().iter().all(|x| {
        space.basis().iter().all(|y| {
            let (Some(bx), Some(by)) = (label(x), label(y)) else {
                return false;
            };
            let bracket = x.product(y, ProductKind::Lie).expect("one algebra");
            match bx.bracket_target(by) {
                None => bracket.is_zero(),
                Some(target) => bracket
                    .entries()
                    .all(|(i, j, _)| block_of(p, i, j) == Some(target)),
            }
        })
    })
}

/// Builds matrices for one profile.
struct Builder {
    n: usize,
    field: Field,
}

impl Builder {
    fn e(&self, i: usize, j: usize) -> SparseMatrix {
        SparseMatrix::elementary(self.n, i, j, self.field).expect("index inside the profile")
    }

    fn plus(&self, a: (usize, usize), b: (usize, usize)) -> SparseMatrix {
        self.e(a.0, a.1).add(&self.e(b.0, b.1)).expect("same shape")
    }

    fn minus(&self, a: (usize, usize), b: (usize, usize)) -> SparseMatrix {
        self.e(a.0, a.1).sub(&self.e(b.0, b.1)).expect("same shape")
    }

    fn tensor(&self, label: FamilyLabel, u: SparseMatrix, v: SparseMatrix) -> RankOneTensor {
        RankOneTensor {
            label: label.as_str().to_string(),
            u,
            v,
        }
    }
}

/// Appends `x (x) y` for all `x` in `first`, `y` in `second`.
fn all_pairs(
    b: &Builder,
    label: FamilyLabel,
    first: &[(usize, usize)],
    second: &[(usize, usize)],
    out: &mut Vec<RankOneTensor>,
) {
    for &(i, j) in first {
        for &(k, l) in second {
            out.push(b.tensor(label, b.e(i, j), b.e(k, l)));
        }
    }
}

/// Appends every tensor of `family` followed by its swap, keeping the
/// family label.
fn with_swaps(family: Vec<RankOneTensor>, out: &mut Vec<RankOneTensor>) {
    let swaps: Vec<_> = family.iter().map(|t| t.swapped(t.label.clone())).collect();
    out.extend(family);
    out.extend(swaps);
}

/// Elementary tensors of the nine block pairings the bracket kills.
pub fn pairing_families(p: &BlockProfile, field: Field) -> Vec<RankOneTensor> {
    use BlockLabel::*;
    let b = Builder { n: p.n(), field };
    let pos = |x: BlockLabel| x.positions(p);
    let mut out = Vec::new();
    for (label, x, y, both_orders) in [
        (FamilyLabel::PairHA, H, A, true),
        (FamilyLabel::PairLA, L, A, true),
        (FamilyLabel::PairRA, R, A, true),
        (FamilyLabel::PairAA, A, A, false),
        (FamilyLabel::PairLL, L, L, false),
        (FamilyLabel::PairRR, R, R, false),
    ] {
        all_pairs(&b, label, &pos(x), &pos(y), &mut out);
        if both_orders {
            all_pairs(&b, label, &pos(y), &pos(x), &mut out);
        }
    }
    out
}

/// `T`, `S` and `R`: the kernel of `mu` on `h (x) r + r (x) h`, completed
/// modulo `h (x) h` and `r (x) r`.
pub fn families_h_r(p: &BlockProfile, field: Field) -> Vec<RankOneTensor> {
    let b = Builder { n: p.n(), field };
    let (h, r) = (middle(p), right(p));
    let last = p.n1 + p.n2;
    let mut out = Vec::new();

    let mut t = Vec::new();
    for i in h.clone() {
        for j in h.clone() {
            for l in h.clone().filter(|&l| l != j) {
                for q in r.clone() {
                    t.push(b.tensor(FamilyLabel::T, b.e(i, j), b.e(l, q)));
                }
            }
        }
    }
    with_swaps(t, &mut out);

    let mut s = Vec::new();
    for i in h.clone() {
        for j in p.n1 + 1..last {
            for q in r.clone() {
                s.push(b.tensor(
                    FamilyLabel::S,
                    b.minus((i, j), (i, j + 1)),
                    b.plus((j, q), (j + 1, q)),
                ));
            }
        }
    }
    with_swaps(s, &mut out);

    for i in h {
        for q in r.clone() {
            let x = b.plus((i, i), (i, q));
            out.push(b.tensor(FamilyLabel::R, x.clone(), x));
        }
    }
    out
}

/// Mirror images of `T`, `S`, `R` for `h (x) l + l (x) h`.
pub fn families_h_l(p: &BlockProfile, field: Field) -> Vec<RankOneTensor> {
    let b = Builder { n: p.n(), field };
    let h = middle(p);
    let last = p.n1 + p.n2;
    let mut out = Vec::new();

    // [e_{j,k}, e_{p,i}] = -delta_{i,j} e_{p,k}
    let mut t = Vec::new();
    for row in top(p) {
        for i in h.clone() {
            for j in h.clone().filter(|&j| j != i) {
                for k in h.clone() {
                    t.push(b.tensor(FamilyLabel::TMirror, b.e(j, k), b.e(row, i)));
                }
            }
        }
    }
    with_swaps(t, &mut out);

    let mut s = Vec::new();
    for row in top(p) {
        for j in p.n1 + 1..last {
            for k in h.clone() {
                s.push(b.tensor(
                    FamilyLabel::SMirror,
                    b.plus((row, j), (row, j + 1)),
                    b.minus((j, k), (j + 1, k)),
                ));
            }
        }
    }
    with_swaps(s, &mut out);

    for row in top(p) {
        for i in h.clone() {
            let x = b.plus((row, i), (i, i));
            out.push(b.tensor(FamilyLabel::RMirror, x.clone(), x));
        }
    }
    out
}

/// `U`, `V` and `W`: the kernel of `mu` on `l (x) r + r (x) l`.
pub fn families_l_r(p: &BlockProfile, field: Field) -> Vec<RankOneTensor> {
    let b = Builder { n: p.n(), field };
    let (h, r) = (middle(p), right(p));
    let last = p.n1 + p.n2;
    let mut out = Vec::new();

    let mut u = Vec::new();
    for i in top(p) {
        for j in h.clone() {
            for l in h.clone().filter(|&l| l != j) {
                for q in r.clone() {
                    u.push(b.tensor(FamilyLabel::U, b.e(i, j), b.e(l, q)));
                }
            }
        }
    }
    with_swaps(u, &mut out);

    let mut v = Vec::new();
    for i in top(p) {
        for j in p.n1 + 1..last {
            for q in r.clone() {
                v.push(b.tensor(
                    FamilyLabel::V,
                    b.minus((i, j), (i, j + 1)),
                    b.plus((j, q), (j + 1, q)),
                ));
            }
        }
    }
    with_swaps(v, &mut out);

    for i in top(p) {
        for q in r.clone() {
            let x = b.plus((i, last), (last, q));
            out.push(b.tensor(FamilyLabel::W, x.clone(), x));
        }
    }
    out
}

/// Rank-one basis of `Ker mu` on `h (x) h`, found by searching `gl_{n2}`
/// and shifting the result into the middle block.
pub fn gl_h_family(p: &BlockProfile, field: Field, budget: Option<usize>) -> Result<Vec<RankOneTensor>> {
    let gl = TensorSpace::gl(p.n2, field)?;
    let mu = build_mu(&gl, ProductKind::Lie)?;
    let budget = budget.unwrap_or_else(|| default_budget(gl.d()));
    let found = match search_spanning(&gl, &mu, budget)? {
        SearchOutcome::Spanning { tensors, .. } => tensors,
        SearchOutcome::Exhausted {
            rank, kernel_dim, ..
        } => {
            return Err(Error::SearchExhausted {
                budget,
                rank,
                kernel_dim,
            })
        }
    };
    let shift = |m: &SparseMatrix| {
        SparseMatrix::from_entries(
            p.n(),
            field,
            m.entries()
                .map(|(i, j, v)| (i + p.n1, j + p.n1, v.clone()))
                .collect::<Vec<_>>(),
        )
    };
    found
        .iter()
        .map(|t| {
            Ok(RankOneTensor {
                label: FamilyLabel::GlH.as_str().to_string(),
                u: shift(&t.u)?,
                v: shift(&t.v)?,
            })
        })
        .collect()
}

/// The full certificate for the one-step ladder `{(i1, j1)}` on `n`, over
/// the rationals.
pub fn assemble_one_step_certificate(n: usize, i1: usize, j1: usize) -> Result<Certificate> {
    assemble_one_step_certificate_in(Field::Rational, n, i1, j1, None)
}

pub fn assemble_one_step_certificate_in(
    field: Field,
    n: usize,
    i1: usize,
    j1: usize,
    budget: Option<usize>,
) -> Result<Certificate> {
    let ladder = Ladder::new(n, [(i1, j1)])?;
    let algebra = AlgebraDescriptor::LadderLie(ladder.clone());
    let p = match block_profile(&ladder)? {
        OneStepShape::Abelian => return abelian_certificate(algebra, field),
        OneStepShape::Blocks(p) => p,
    };

    let specs = expected_counts(&p);
    let mut tensors = pairing_families(&p, field);
    tensors.extend(gl_h_family(&p, field, budget)?);
    tensors.extend(families_h_r(&p, field));
    tensors.extend(families_h_l(&p, field));
    tensors.extend(families_l_r(&p, field));

    for spec in &specs {
        let found = tensors
            .iter()
            .filter(|t| t.label == spec.label.as_str())
            .count();
        if found != spec.expected {
            return Err(Error::FamilyCount {
                label: spec.label.as_str().to_string(),
                expected: spec.expected,
                found,
            });
        }
    }

    Ok(Certificate {
        algebra,
        field,
        claimed_kernel_dim: kernel_dim_polynomial(&p),
        families: specs
            .iter()
            .map(|s| FamilyCount {
                label: s.label.as_str().to_string(),
                expected: s.expected,
            })
            .collect(),
        tensors,
    })
}
