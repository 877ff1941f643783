//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Every comparison is an exact integer or
//! structural equality: tolerance 0.
//!
//! Run with `cargo test -p ladder-zpd-cli --test acceptance`.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};

use ladder_zpd::certificate::{
    gl_certificate, verify_certificate, AlgebraDescriptor, Certificate, Verdict,
    VerificationReport, ABELIAN_LABEL,
};
use ladder_zpd::json::{certificate_from_json, certificate_to_json, report_from_json, write_certificate, WriteGuard};
use ladder_zpd::ladder::{block_profile, enumerate_ladders, is_closed, ladder_space, BlockProfile, Ladder, OneStepShape};
use ladder_zpd::matrix::{ProductKind, SparseMatrix};
use ladder_zpd::onestep::{
    assemble_one_step_certificate, expected_counts, kernel_dim_polynomial, remainder_after_pairings, FamilyLabel,
};
use ladder_zpd::tensor::{build_mu, RankOneTensor, TensorSpace};
use ladder_zpd::Field;

const TOLERANCE: &str = "tolerance 0 (exact)";

// ---- independent oracles ----

/// Ladder positions straight from the definition.
fn oracle_positions(n: usize, steps: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if steps.iter().any(|&(it, jt)| i <= it && jt <= j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// `[e_ij, e_kl] = delta_jk e_il - delta_li e_kj` as `(row, col, coeff)`.
fn oracle_bracket(a: (usize, usize), b: (usize, usize)) -> Vec<(usize, usize, i64)> {
    let mut out = Vec::new();
    if a.1 == b.0 {
        out.push((a.0, b.1, 1));
    }
    if b.1 == a.0 {
        out.push((b.0, a.1, -1));
    }
    out
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
fn bareiss_rank(mut m: Vec<Vec<i128>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev: i128 = 1;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let num = m[r][k]
                    .checked_mul(m[rank][c])
                    .and_then(|x| x.checked_sub(m[r][c].checked_mul(m[rank][k])?))
                    .expect("no overflow");
                m[r][k] = num / prev;
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// `dim Ker mu` for the bracket on the span of `positions`, computed in
/// ambient `n x n` coordinates.
fn oracle_kernel_dim(n: usize, positions: &[(usize, usize)]) -> usize {
    let d = positions.len();
    let mut m = vec![vec![0i128; d * d]; n * n];
    for (s, &a) in positions.iter().enumerate() {
        for (t, &b) in positions.iter().enumerate() {
            for (i, j, c) in oracle_bracket(a, b) {
                m[(i - 1) * n + (j - 1)][s * d + t] += c as i128;
            }
        }
    }
    d * d - bareiss_rank(m)
}

fn oracle_upper_triangular(steps: &[(usize, usize)]) -> bool {
    steps.windows(2).all(|w| w[0].0 < w[1].1)
}

fn oracle_closed(positions: &[(usize, usize)], kind: ProductKind) -> bool {
    let set: BTreeSet<_> = positions.iter().copied().collect();
    positions.iter().all(|&a| {
        positions.iter().all(|&b| {
            let terms = match kind {
                ProductKind::Associative => {
                    if a.1 == b.0 {
                        vec![(a.0, b.1)]
                    } else {
                        vec![]
                    }
                }
                ProductKind::Lie if a == b => vec![],
                ProductKind::Lie => oracle_bracket(a, b).into_iter().map(|(i, j, _)| (i, j)).collect(),
            };
            terms.iter().all(|p| set.contains(p))
        })
    })
}

fn oracle_polynomial(n1: usize, n2: usize, n3: usize) -> usize {
    let d = (n1 + n2) * (n2 + n3);
    d * d - d + 1
}

// ---- shared inputs ----

fn one_step_ladders(ns: std::ops::RangeInclusive<usize>) -> Vec<(usize, usize, usize)> {
    ns.flat_map(|n| (1..=n).flat_map(move |i| (1..=n).map(move |j| (n, i, j))))
        .collect()
}

fn profile_of(n: usize, i1: usize, j1: usize) -> Option<BlockProfile> {
    match block_profile(&Ladder::new(n, [(i1, j1)]).unwrap()).unwrap() {
        OneStepShape::Abelian => None,
        OneStepShape::Blocks(p) => Some(p),
    }
}

struct Suite {
    one_step: Vec<((usize, usize, usize), Certificate)>,
    gl: Vec<(usize, Certificate)>,
}

impl Suite {
    fn build() -> Self {
        let one_step = one_step_ladders(2..=6)
            .into_iter()
            .map(|(n, i, j)| ((n, i, j), assemble_one_step_certificate(n, i, j).unwrap()))
            .collect();
        let gl = (1..=4)
            .map(|m| (m, gl_certificate(m, Field::Rational, None).unwrap().expect("search spans")))
            .collect();
        Suite { one_step, gl }
    }

    fn all(&self) -> impl Iterator<Item = &Certificate> {
        self.one_step.iter().map(|(_, c)| c).chain(self.gl.iter().map(|(_, c)| c))
    }
}

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---- criteria ----

fn one_step_certificates(suite: &Suite) -> Outcome {
    for ((n, i, j), cert) in &suite.one_step {
        let report = verify_certificate(cert).map_err(|e| e.to_string())?;
        let oracle = oracle_kernel_dim(*n, &oracle_positions(*n, &[(*i, *j)]));
        ensure(report.verdict == Verdict::ProvenZpd, || format!("n={n} ({i},{j}): {}", report.verdict))?;
        ensure(report.kernel_dim == oracle, || format!("n={n} ({i},{j}): kernel {} vs oracle {oracle}", report.kernel_dim))?;
        ensure(cert.tensors.len() == oracle, || format!("n={n} ({i},{j}): {} tensors vs {oracle}", cert.tensors.len()))?;
        if let Some(p) = profile_of(*n, *i, *j) {
            ensure(kernel_dim_polynomial(&p) == oracle, || format!("polynomial at {p}"))?;
        }
    }
    Ok(format!("{} one-step ladders, n = 2..6, all proven-zpd; count = polynomial = oracle dim Ker mu", suite.one_step.len()))
}

fn bookkeeping() -> Outcome {
    let mut points = 0;
    for n1 in 0..=5 {
        for n2 in 1..=5 {
            for n3 in 0..=5 {
                let p = BlockProfile::new(n1, n2, n3).unwrap();
                let poly = kernel_dim_polynomial(&p);
                ensure(poly == oracle_polynomial(n1, n2, n3), || format!("polynomial at {p}"))?;
                let counts = expected_counts(&p);
                let total: usize = counts.iter().map(|s| s.expected).sum();
                ensure(total == poly, || format!("ledger sum {total} at {p}"))?;
                let remainder = 2 * n1 * n2.pow(3) + 2 * n2.pow(3) * n3 + 2 * n1 * n2 * n2 * n3
                    - n1 * n2
                    - n1 * n3
                    - n2 * n3;
                let constructed: usize = counts
                    .iter()
                    .filter(|s| !s.label.as_str().starts_with("pair-") && s.label != FamilyLabel::GlH)
                    .map(|s| s.expected)
                    .sum();
                ensure(remainder_after_pairings(&p) == remainder, || format!("remainder at {p}"))?;
                ensure(constructed == remainder, || format!("constructed {constructed} vs remainder {remainder} at {p}"))?;
                points += 1;
            }
        }
    }
    Ok(format!("{points} grid points: polynomial = d^2 - d + 1, ledger sum = polynomial, remainder matched"))
}

fn closure_equivalence() -> Outcome {
    let mut count = 0;
    for n in 1..=4 {
        for k in 1..=n {
            for ladder in enumerate_ladders(n, k).unwrap() {
                let positions = oracle_positions(n, ladder.steps());
                let space = ladder_space(&ladder, Field::Rational);
                let ut = ladder.is_upper_triangular();
                let assoc = is_closed(&space, ProductKind::Associative);
                let lie = is_closed(&space, ProductKind::Lie);
                ensure(ut == oracle_upper_triangular(ladder.steps()), || format!("{ladder}: upper triangularity"))?;
                ensure(assoc == oracle_closed(&positions, ProductKind::Associative), || format!("{ladder}: associative oracle"))?;
                ensure(lie == oracle_closed(&positions, ProductKind::Lie), || format!("{ladder}: lie oracle"))?;
                ensure(assoc == ut, || format!("{ladder}: associative closure {assoc}, upper triangular {ut}"))?;
                ensure(!ut || lie, || format!("{ladder}: upper triangular but not lie-closed"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} ladders with n <= 4: closed (assoc) <=> upper triangular, upper triangular => closed (lie)"))
}

fn gl_bases(suite: &Suite) -> Outcome {
    let mut sizes = Vec::new();
    for (m, cert) in &suite.gl {
        let report = verify_certificate(cert).map_err(|e| e.to_string())?;
        let expected = m.pow(4) - m * m + 1;
        ensure(report.is_proven(), || format!("gl_{m}: {}", report.verdict))?;
        ensure(cert.tensors.len() == expected, || format!("gl_{m}: {} tensors, expected {expected}", cert.tensors.len()))?;
        ensure(
            report.kernel_dim == oracle_kernel_dim(*m, &oracle_positions(*m, &[(*m, 1)])),
            || format!("gl_{m}: oracle kernel"),
        )?;
        sizes.push(cert.tensors.len().to_string());
    }
    Ok(format!("gl_m for m = 1..4 (m = 4 is the optional case): sizes {}", sizes.join(", ")))
}

fn abelian_ladders() -> Outcome {
    let mut count = 0;
    for (n, i, j) in one_step_ladders(2..=6).into_iter().filter(|&(_, i, j)| i < j) {
        let cert = assemble_one_step_certificate(n, i, j).map_err(|e| e.to_string())?;
        let d = oracle_positions(n, &[(i, j)]).len();
        let report = verify_certificate(&cert).map_err(|e| e.to_string())?;
        ensure(report.is_proven(), || format!("n={n} ({i},{j}): {}", report.verdict))?;
        ensure(cert.tensors.len() == d * d, || format!("n={n} ({i},{j}): {} tensors for d={d}", cert.tensors.len()))?;
        ensure(
            cert.tensors.iter().all(|t| {
                t.label == ABELIAN_LABEL && t.u.as_elementary().is_some() && t.v.as_elementary().is_some()
            }),
            || format!("n={n} ({i},{j}): non-elementary tensor"),
        )?;
        ensure(
            cert.tensors.iter().map(|t| (t.u.as_elementary(), t.v.as_elementary())).collect::<BTreeSet<_>>().len() == d * d,
            || format!("n={n} ({i},{j}): repeated elementary tensor"),
        )?;
        count += 1;
    }
    Ok(format!("{count} abelian one-step ladders with n <= 6: all d^2 elementary tensors, proven-zpd"))
}

fn membership(suite: &Suite) -> Outcome {
    let mut checked = 0;
    for cert in suite.all() {
        let space = cert.algebra.tensor_space(cert.field).map_err(|e| e.to_string())?;
        let mu = build_mu(&space, ProductKind::Lie).map_err(|e| e.to_string())?;
        for (k, t) in cert.tensors.iter().enumerate() {
            let bracket_zero = t.u.product(&t.v, ProductKind::Lie).map_err(|e| e.to_string())?.is_zero();
            let coords = space.sparse_tensor_coords(&t.u, &t.v).map_err(|e| e.to_string())?;
            let mu_zero = mu.apply_sparse(&coords).map_err(|e| e.to_string())?.is_zero();
            ensure(bracket_zero == mu_zero, || format!("{}: tensor {k}: routes disagree", cert.algebra))?;
            ensure(bracket_zero, || format!("{}: tensor {k} ({}) not in Ker mu", cert.algebra, t.label))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} tensors: bracket = 0 and mu(coords) = 0, routes agree"))
}

fn noncommuting_pair(space: &TensorSpace) -> Option<(SparseMatrix, SparseMatrix)> {
    let basis = space.basis();
    basis.iter().find_map(|x| {
        basis
            .iter()
            .find(|y| !x.product(y, ProductKind::Lie).unwrap().is_zero())
            .map(|y| (x.clone(), y.clone()))
    })
}

fn tamper(suite: &Suite) -> Outcome {
    let targets: Vec<&Certificate> = suite
        .one_step
        .iter()
        .filter(|((n, i, j), _)| matches!((n, i, j), (3, 2, 2) | (4, 3, 2) | (4, 2, 1) | (5, 4, 2) | (4, 2, 3)))
        .map(|(_, c)| c)
        .chain(suite.gl.iter().filter(|(m, _)| *m <= 3).map(|(_, c)| c))
        .collect();
    let mut cases = 0;
    for cert in targets {
        let space = cert.algebra.tensor_space(cert.field).map_err(|e| e.to_string())?;
        let pair = noncommuting_pair(&space);
        for k in 0..cert.tensors.len() {
            let verify = |c: &Certificate| -> Result<VerificationReport, String> {
                verify_certificate(c).map_err(|e| e.to_string())
            };

            let mut deleted = cert.clone();
            deleted.tensors.remove(k);
            let r = verify(&deleted)?;
            ensure(r.verdict == Verdict::FailedSpan, || format!("{}: delete {k}: {}", cert.algebra, r.verdict))?;

            let mut duplicated = cert.clone();
            duplicated.tensors.push(cert.tensors[k].clone());
            let r = verify(&duplicated)?;
            ensure(
                r.verdict == Verdict::CountMismatch && r.span_rank < r.tensor_count,
                || format!("{}: duplicate {k}: {}", cert.algebra, r.verdict),
            )?;
            cases += 2;

            if let Some((u, v)) = &pair {
                let mut replaced = cert.clone();
                replaced.tensors[k] = RankOneTensor {
                    label: "tampered".into(),
                    u: u.clone(),
                    v: v.clone(),
                };
                let r = verify(&replaced)?;
                ensure(
                    r.verdict == Verdict::FailedKernelMembership && r.first_noncommuting == Some(k),
                    || format!("{}: replace {k}: {}", cert.algebra, r.verdict),
                )?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} tampered certificates: delete -> failed-span, noncommuting -> failed-kernel-membership, duplicate -> rank < count"))
}

fn cross_field() -> Outcome {
    let f101 = Field::prime(101).unwrap();
    let mut count = 0;
    for (n, i, j) in one_step_ladders(1..=5) {
        let algebra = AlgebraDescriptor::LadderLie(Ladder::new(n, [(i, j)]).unwrap());
        let dim = |field: Field| {
            let space = algebra.tensor_space(field).unwrap();
            build_mu(&space, ProductKind::Lie).unwrap().kernel_dim()
        };
        let (q, p) = (dim(Field::Rational), dim(f101));
        let oracle = oracle_kernel_dim(n, &oracle_positions(n, &[(i, j)]));
        ensure(q == p && q == oracle, || format!("n={n} ({i},{j}): Q {q}, F_101 {p}, oracle {oracle}"))?;
        count += 1;
    }
    Ok(format!("{count} one-step ladders with n <= 5: dim Ker mu over F_101 = over Q = oracle"))
}

fn serialization(suite: &Suite) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut count = 0;
    for (k, cert) in suite.all().enumerate() {
        let text = certificate_to_json(cert);
        let back = certificate_from_json(&text).map_err(|e| e.to_string())?;
        ensure(&back == cert, || format!("{}: value changed on round trip", cert.algebra))?;
        ensure(certificate_to_json(&back) == text, || format!("{}: bytes changed on round trip", cert.algebra))?;
        ensure(certificate_to_json(cert) == text, || format!("{}: nondeterministic write", cert.algebra))?;

        let report = verify_certificate(cert).map_err(|e| e.to_string())?;
        let path = dir.path().join(format!("cert-{k}.json"));
        write_certificate(&path, cert, WriteGuard::Verified(&report)).map_err(|e| e.to_string())?;
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = ladder_zpd_cli::run(
            ["ladder-zpd", "cert-verify", path.to_str().unwrap(), "--json"],
            &mut out,
            &mut err,
        );
        ensure(code == 0, || format!("{}: cert-verify exit {code}: {}", cert.algebra, String::from_utf8_lossy(&err)))?;
        let reread = report_from_json(&String::from_utf8(out).unwrap()).map_err(|e| e.to_string())?;
        ensure(reread == report, || format!("{}: file report differs from in-memory report", cert.algebra))?;
        count += 1;
    }
    Ok(format!("{count} certificates: JSON round trip byte-identical, cert-verify report = in-memory report"))
}

fn main() {
    let suite = Suite::build();
    let criteria: Vec<Criterion<'_>> = vec![
        ("one-step certificates up to n = 6", Box::new(|| one_step_certificates(&suite))),
        ("dimension bookkeeping", Box::new(bookkeeping)),
        ("closure and upper triangularity", Box::new(closure_equivalence)),
        ("rank-one basis of gl_m", Box::new(|| gl_bases(&suite))),
        ("abelian one-step ladders", Box::new(abelian_ladders)),
        ("kernel membership of every tensor", Box::new(|| membership(&suite))),
        ("tamper detection", Box::new(|| tamper(&suite))),
        ("cross-field consistency", Box::new(cross_field)),
        ("serialization", Box::new(|| serialization(&suite))),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}; {TOLERANCE}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}; {TOLERANCE}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
