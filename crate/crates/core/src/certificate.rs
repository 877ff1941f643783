//! Rank-one spanning certificates for `Ker mu`.
//!
//! An algebra is zero product determined exactly when `Ker mu` is spanned by
//! the rank-one tensors it contains. A [`Certificate`] lists such tensors;
//! [`verify_certificate`] rebuilds `mu` from the algebra descriptor alone
//! and checks membership, independence and count with exact ranks. A
//! verified certificate proves the property. A failed verification or an
//! exhausted search proves nothing about the algebra.

use std::fmt;

use crate::error::{Error, Result};
use crate::ladder::{ladder_space, Ladder};
use crate::linalg::{kernel_basis, CoordVector, IncrementalEchelon, RowSpace};
use crate::matrix::{ProductKind, SparseMatrix};
use crate::scalar::Field;
use crate::tensor::{build_mu, in_kernel, MuMap, RankOneTensor, TensorSpace};

/// Which Lie algebra a certificate talks about.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AlgebraDescriptor {
    /// The ladder matrices `M_L` under the bracket.
    LadderLie(Ladder),
    /// All `m x m` matrices under the bracket.
    GlLie(usize),
}

impl AlgebraDescriptor {
    pub fn tensor_space(&self, field: Field) -> Result<TensorSpace> {
        match self {
            AlgebraDescriptor::LadderLie(l) => {
                Ok(TensorSpace::from_ladder_space(&ladder_space(l, field)))
            }
            AlgebraDescriptor::GlLie(m) => {
                if *m == 0 {
                    return Err(Error::MalformedCertificate("gl_0 is not an algebra".into()));
                }
                TensorSpace::gl(*m, field)
            }
        }
    }

    pub fn product_kind(&self) -> ProductKind {
        ProductKind::Lie
    }

    pub fn n(&self) -> usize {
        match self {
            AlgebraDescriptor::LadderLie(l) => l.n(),
            AlgebraDescriptor::GlLie(m) => *m,
        }
    }
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraDescriptor::LadderLie(l) => write!(f, "ladder-lie {l}"),
            AlgebraDescriptor::GlLie(m) => write!(f, "gl-lie m={m}"),
        }
    }
}

/// A labeled group of tensors and how many the construction promises.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilyCount {
    pub label: String,
    pub expected: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub algebra: AlgebraDescriptor,
    pub field: Field,
    /// What the producer believes `dim Ker mu` is. Verification recomputes
    /// it and never reads this.
    pub claimed_kernel_dim: usize,
    pub families: Vec<FamilyCount>,
    pub tensors: Vec<RankOneTensor>,
}

impl Certificate {
    /// Families are derived from consecutive runs of equal labels.
    pub fn from_tensors(
        algebra: AlgebraDescriptor,
        field: Field,
        claimed_kernel_dim: usize,
        tensors: Vec<RankOneTensor>,
    ) -> Self {
        let mut families: Vec<FamilyCount> = Vec::new();
        for t in &tensors {
            match families.last_mut() {
                Some(f) if f.label == t.label => f.expected += 1,
                _ => families.push(FamilyCount {
                    label: t.label.clone(),
                    expected: 1,
                }),
            }
        }
        Certificate {
            algebra,
            field,
            claimed_kernel_dim,
            families,
            tensors,
        }
    }

    pub fn family_total(&self) -> usize {
        self.families.iter().map(|f| f.expected).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    ProvenZpd,
    FailedKernelMembership,
    FailedSpan,
    CountMismatch,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ProvenZpd => "proven-zpd",
            Verdict::FailedKernelMembership => "failed-kernel-membership",
            Verdict::FailedSpan => "failed-span",
            Verdict::CountMismatch => "count-mismatch",
        }
    }

    pub fn parse(text: &str) -> Option<Verdict> {
        [
            Verdict::ProvenZpd,
            Verdict::FailedKernelMembership,
            Verdict::FailedSpan,
            Verdict::CountMismatch,
        ]
        .into_iter()
        .find(|v| v.as_str() == text)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VerificationReport {
    pub kernel_dim: usize,
    pub tensor_count: usize,
    pub span_rank: usize,
    /// Index of the first tensor whose factors do not commute.
    pub first_noncommuting: Option<usize>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn is_proven(&self) -> bool {
        self.verdict == Verdict::ProvenZpd
    }
}

/// Re-derives `mu` from the descriptor and checks that every tensor lies
/// in `Ker mu`, the tensors are independent and their number equals
/// `dim Ker mu`.
pub fn verify_certificate(cert: &Certificate) -> Result<VerificationReport> {
    let space = cert.algebra.tensor_space(cert.field)?;
    let mu = build_mu(&space, cert.algebra.product_kind())?;
    let kernel_dim = mu.kernel_dim();
    let d = space.d();

    let mut echelon = IncrementalEchelon::new(cert.field, d * d);
    let mut first_noncommuting = None;
    for (k, t) in cert.tensors.iter().enumerate() {
        t.check_members(&space)?;
        if first_noncommuting.is_none() && !in_kernel(t, &space, &mu)? {
            first_noncommuting = Some(k);
        }
        echelon.insert(&space.sparse_tensor_coords(&t.u, &t.v)?)?;
    }
    let tensor_count = cert.tensors.len();
    let span_rank = echelon.rank();
    let verdict = if first_noncommuting.is_some() {
        Verdict::FailedKernelMembership
    } else if span_rank < kernel_dim {
        Verdict::FailedSpan
    } else if span_rank != tensor_count {
        Verdict::CountMismatch
    } else {
        Verdict::ProvenZpd
    };
    Ok(VerificationReport {
        kernel_dim,
        tensor_count,
        span_rank,
        first_noncommuting,
        verdict,
    })
}

/// Basis of `{v in A : u * v = 0}` for the given product, by exact
/// elimination of the map `v -> u * v` restricted to `A`.
pub fn annihilator(u: &SparseMatrix, space: &TensorSpace, kind: ProductKind) -> Result<Vec<SparseMatrix>> {
    space.sparse_coords(u)?;
    let images = space
        .basis()
        .iter()
        .map(|b| space.coords(&u.product(b, kind)?))
        .collect::<Result<Vec<CoordVector>>>()?;
    let map = RowSpace::new(space.field(), space.d(), images)?;
    kernel_basis(&map, space.d())?
        .iter()
        .map(|c| space.element(c))
        .collect()
}

/// Basis of the elements of `A` commuting with `u`.
pub fn centralizer(u: &SparseMatrix, space: &TensorSpace) -> Result<Vec<SparseMatrix>> {
    annihilator(u, space, ProductKind::Lie)
}

/// Label carried by tensors found by [`search_spanning`].
pub const SEARCH_LABEL: &str = "search";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// Independent rank-one kernel tensors, as many as `dim Ker mu`.
    Spanning {
        tensors: Vec<RankOneTensor>,
        tried: usize,
    },
    /// The pool or the budget ran out first.
    Exhausted {
        tried: usize,
        rank: usize,
        kernel_dim: usize,
    },
}

/// Default candidate budget, `100 d^2`. `gl_6` needs about `55 d^2`.
pub fn default_budget(d: usize) -> usize {
    100 * d * d
}

/// First factors tried by the search: basis elements, then `b_s + b_t` and
/// `b_s - b_t` for `s < t` in lexicographic order, then the identity when
/// the algebra contains it, then `b_r + b_s + b_t` for `r < s < t`.
///
/// The three-term sums are needed from `gl_3` on: tensors built from one-
/// and two-term factors miss the cycle directions such as
/// `e12 (x) e21 + e23 (x) e32 + e31 (x) e13`, which `e12 + e23 + e31`
/// commuting with its square supplies.
fn candidate_pool(space: &TensorSpace) -> impl Iterator<Item = SparseMatrix> + '_ {
    let basis = space.basis();
    let d = basis.len();
    let one = space.field().one();
    let minus_one = -&one;
    let pairs = (0..d).flat_map(move |s| (s + 1..d).map(move |t| (s, t)));
    let sums = pairs.flat_map(move |(s, t)| {
        [one.clone(), minus_one.clone()]
            .into_iter()
            .map(move |sign| basis[s].add_scaled(&sign, &basis[t]).expect("same algebra"))
    });
    let identity = space
        .contains_identity()
        .then(|| SparseMatrix::identity(space.n(), space.field()));
    let triples = (0..d).flat_map(move |r| {
        (r + 1..d).flat_map(move |s| (s + 1..d).map(move |t| (r, s, t)))
    });
    let triple_sums = triples.map(move |(r, s, t)| {
        basis[r]
            .add(&basis[s])
            .and_then(|x| x.add(&basis[t]))
            .expect("same algebra")
    });
    basis
        .iter()
        .cloned()
        .chain(sums)
        .chain(identity)
        .chain(triple_sums)
}

/// Greedy deterministic search for a rank-one basis of `Ker mu`.
///
/// For each pool element `u`, every annihilator basis vector `v` gives a
/// kernel tensor `u (x) v`; it is kept when it raises the rank of the
/// tensors kept so far. `budget` caps the number of tensors examined.
pub fn search_spanning(space: &TensorSpace, mu: &MuMap, budget: usize) -> Result<SearchOutcome> {
    let kernel_dim = mu.kernel_dim();
    let d = space.d();
    let mut echelon = IncrementalEchelon::new(space.field(), d * d);
    let mut kept = Vec::with_capacity(kernel_dim);
    let mut tried = 0;
    if kernel_dim == 0 {
        return Ok(SearchOutcome::Spanning { tensors: kept, tried });
    }
    for u in candidate_pool(space) {
        for v in annihilator(&u, space, mu.kind())? {
            if tried == budget {
                return Ok(SearchOutcome::Exhausted {
                    tried,
                    rank: echelon.rank(),
                    kernel_dim,
                });
            }
            tried += 1;
            if echelon.insert(&space.sparse_tensor_coords(&u, &v)?)? {
                kept.push(RankOneTensor {
                    label: SEARCH_LABEL.to_string(),
                    u: u.clone(),
                    v,
                });
                if echelon.rank() == kernel_dim {
                    return Ok(SearchOutcome::Spanning { tensors: kept, tried });
                }
            }
        }
    }
    Ok(SearchOutcome::Exhausted {
        tried,
        rank: echelon.rank(),
        kernel_dim,
    })
}

/// Runs the search on `gl_m` and packages the result.
pub fn gl_certificate(m: usize, field: Field, budget: Option<usize>) -> Result<Option<Certificate>> {
    let algebra = AlgebraDescriptor::GlLie(m);
    let space = algebra.tensor_space(field)?;
    let mu = build_mu(&space, ProductKind::Lie)?;
    let budget = budget.unwrap_or_else(|| default_budget(space.d()));
    Ok(match search_spanning(&space, &mu, budget)? {
        SearchOutcome::Spanning { tensors, .. } => Some(Certificate::from_tensors(
            algebra,
            field,
            mu.kernel_dim(),
            tensors,
        )),
        SearchOutcome::Exhausted { .. } => None,
    })
}

/// Label carried by the all-elementary tensors of an abelian algebra.
pub const ABELIAN_LABEL: &str = "abelian";

/// For an algebra with identically zero product: every `b_s (x) b_t`.
pub fn abelian_certificate(algebra: AlgebraDescriptor, field: Field) -> Result<Certificate> {
    let space = algebra.tensor_space(field)?;
    let mu = build_mu(&space, algebra.product_kind())?;
    if mu.rank() != 0 {
        return Err(Error::NotAbelian(mu.rank()));
    }
    let tensors = space
        .basis()
        .iter()
        .flat_map(|u| {
            space.basis().iter().map(move |v| RankOneTensor {
                label: ABELIAN_LABEL.to_string(),
                u: u.clone(),
                v: v.clone(),
            })
        })
        .collect();
    Ok(Certificate::from_tensors(algebra, field, mu.kernel_dim(), tensors))
}
