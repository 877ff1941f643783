//! Canonical JSON for certificates and verification reports.
//!
//! Keys are emitted in sorted order and tensors in list order, so writing
//! the same certificate twice gives identical bytes. Certificates carry no
//! verdict; readers must call [`verify_certificate`] themselves.
//!
//! [`verify_certificate`]: crate::certificate::verify_certificate

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::certificate::{AlgebraDescriptor, Certificate, FamilyCount, VerificationReport, Verdict};
use crate::error::{Error, Result};
use crate::ladder::Ladder;
use crate::matrix::SparseMatrix;
use crate::scalar::Field;
use crate::tensor::RankOneTensor;

pub const FORMAT_VERSION: u64 = 1;

// Field order in every wire struct is alphabetical; serde emits fields in
// declaration order.

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum AlgebraWire {
    LadderLie { n: usize, steps: Vec<(usize, usize)> },
    GlLie { m: usize },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum FieldWire {
    Prime { modulus: u64 },
    Rational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyWire {
    count: usize,
    label: String,
}

type EntryWire = (usize, usize, String);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorWire {
    family: String,
    u: Vec<EntryWire>,
    v: Vec<EntryWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateWire {
    algebra: AlgebraWire,
    claimed_kernel_dim: usize,
    families: Vec<FamilyWire>,
    field: FieldWire,
    format_version: u64,
    tensors: Vec<TensorWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportWire {
    first_noncommuting: Option<usize>,
    kernel_dim: usize,
    span_rank: usize,
    tensor_count: usize,
    verdict: String,
}

fn matrix_to_wire(m: &SparseMatrix) -> Vec<EntryWire> {
    m.entries().map(|(i, j, v)| (i, j, v.to_text())).collect()
}

fn matrix_from_wire(n: usize, field: Field, entries: &[EntryWire]) -> Result<SparseMatrix> {
    let mut seen = BTreeSet::new();
    let mut m = SparseMatrix::zero(n, field);
    for (i, j, text) in entries {
        if !seen.insert((*i, *j)) {
            return Err(Error::MalformedCertificate(format!(
                "entry ({i}, {j}) appears twice"
            )));
        }
        m.set(*i, *j, field.parse(text)?)?;
    }
    Ok(m)
}

fn field_to_wire(field: Field) -> FieldWire {
    match field {
        Field::Rational => FieldWire::Rational,
        Field::Prime(p) => FieldWire::Prime { modulus: p },
    }
}

/// Canonical pretty-printed JSON, newline-terminated.
pub fn certificate_to_json(cert: &Certificate) -> String {
    let wire = CertificateWire {
        algebra: match &cert.algebra {
            AlgebraDescriptor::LadderLie(l) => AlgebraWire::LadderLie {
                n: l.n(),
                steps: l.steps().to_vec(),
            },
            AlgebraDescriptor::GlLie(m) => AlgebraWire::GlLie { m: *m },
        },
        claimed_kernel_dim: cert.claimed_kernel_dim,
        families: cert
            .families
            .iter()
            .map(|f| FamilyWire {
                count: f.expected,
                label: f.label.clone(),
            })
            .collect(),
        field: field_to_wire(cert.field),
        format_version: FORMAT_VERSION,
        tensors: cert
            .tensors
            .iter()
            .map(|t| TensorWire {
                family: t.label.clone(),
                u: matrix_to_wire(&t.u),
                v: matrix_to_wire(&t.v),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&wire).expect("wire types always serialize");
    text.push('\n');
    text
}

pub fn certificate_from_json(text: &str) -> Result<Certificate> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    match value.get("format_version").map(|v| v.as_u64()) {
        Some(Some(FORMAT_VERSION)) => {}
        Some(Some(v)) => return Err(Error::UnsupportedVersion(v)),
        _ => {
            return Err(Error::MalformedCertificate(
                "missing or non-integer format_version".into(),
            ))
        }
    }
    let wire: CertificateWire = serde_json::from_value(value)?;

    let algebra = match wire.algebra {
        AlgebraWire::LadderLie { n, steps } => AlgebraDescriptor::LadderLie(Ladder::new(n, steps)?),
        AlgebraWire::GlLie { m: 0 } => {
            return Err(Error::MalformedCertificate("gl_0 is not an algebra".into()))
        }
        AlgebraWire::GlLie { m } => AlgebraDescriptor::GlLie(m),
    };
    let field = match wire.field {
        FieldWire::Rational => Field::Rational,
        FieldWire::Prime { modulus } => Field::prime(modulus)?,
    };
    let n = algebra.n();
    let tensors = wire
        .tensors
        .iter()
        .map(|t| {
            Ok(RankOneTensor {
                label: t.family.clone(),
                u: matrix_from_wire(n, field, &t.u)?,
                v: matrix_from_wire(n, field, &t.v)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(Certificate {
        algebra,
        field,
        claimed_kernel_dim: wire.claimed_kernel_dim,
        families: wire
            .families
            .into_iter()
            .map(|f| FamilyCount {
                label: f.label,
                expected: f.count,
            })
            .collect(),
        tensors,
    })
}

/// How a certificate earned the right to be written.
#[derive(Debug, Clone, Copy)]
pub enum WriteGuard<'a> {
    /// A report for this exact certificate with verdict proven-zpd.
    Verified(&'a VerificationReport),
    /// The caller knowingly writes an unchecked certificate.
    Unverified,
}

pub fn write_certificate(path: impl AsRef<Path>, cert: &Certificate, guard: WriteGuard<'_>) -> Result<()> {
    if let WriteGuard::Verified(report) = guard {
        if !report.is_proven() || report.tensor_count != cert.tensors.len() {
            return Err(Error::UnverifiedWrite);
        }
    }
    fs::write(path, certificate_to_json(cert))?;
    Ok(())
}

pub fn read_certificate(path: impl AsRef<Path>) -> Result<Certificate> {
    certificate_from_json(&fs::read_to_string(path)?)
}

pub fn report_to_json(report: &VerificationReport) -> String {
    let wire = ReportWire {
        first_noncommuting: report.first_noncommuting,
        kernel_dim: report.kernel_dim,
        span_rank: report.span_rank,
        tensor_count: report.tensor_count,
        verdict: report.verdict.as_str().to_string(),
    };
    let mut text = serde_json::to_string_pretty(&wire).expect("wire types always serialize");
    text.push('\n');
    text
}

pub fn report_from_json(text: &str) -> Result<VerificationReport> {
    let wire: ReportWire = serde_json::from_str(text)?;
    let verdict = Verdict::parse(&wire.verdict)
        .ok_or_else(|| Error::MalformedCertificate(format!("unknown verdict {:?}", wire.verdict)))?;
    Ok(VerificationReport {
        kernel_dim: wire.kernel_dim,
        tensor_count: wire.tensor_count,
        span_rank: wire.span_rank,
        first_noncommuting: wire.first_noncommuting,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::{gl_certificate, verify_certificate};
    use crate::onestep::assemble_one_step_certificate;

    fn n3() -> Certificate {
        assemble_one_step_certificate(3, 2, 2).unwrap()
    }

    #[test]
    fn round_trip() {
        let cert = n3();
        let text = certificate_to_json(&cert);
        let back = certificate_from_json(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(certificate_to_json(&back), text);
        assert_eq!(certificate_to_json(&cert), text);
    }

    #[test]
    fn round_trip_gl_prime() {
        let cert = gl_certificate(2, Field::prime(101).unwrap(), None).unwrap().unwrap();
        let back = certificate_from_json(&certificate_to_json(&cert)).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn layout() {
        let text = certificate_to_json(&n3());
        let head: Vec<&str> = text.lines().take(6).collect();
        assert_eq!(
            head,
            [
                "{",
                "  \"algebra\": {",
                "    \"kind\": \"ladder-lie\",",
                "    \"n\": 3,",
                "    \"steps\": [",
                "      [",
            ]
        );
        let keys: Vec<_> = ["\"algebra\"", "\"claimed_kernel_dim\"", "\"families\"", "\"field\"", "\"format_version\"", "\"tensors\""]
            .iter()
            .map(|k| text.find(&format!("  {k}:")).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(text.contains("\"field\": {\n    \"kind\": \"rational\"\n  }"));
    }

    #[test]
    fn rejects_zero_index() {
        let text = certificate_to_json(&n3()).replacen("[\n          2,\n          2,", "[\n          0,\n          1,", 1);
        match certificate_from_json(&text) {
            Err(Error::IndexOutOfRange { row: 0, col: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        let good = certificate_to_json(&n3());
        let v2 = good.replace("\"format_version\": 1", "\"format_version\": 2");
        assert!(matches!(certificate_from_json(&v2), Err(Error::UnsupportedVersion(2))));
        let bad_scalar = good.replacen("\"1\"", "\"1/0\"", 1);
        assert!(matches!(certificate_from_json(&bad_scalar), Err(Error::Scalar(_))));
        let junk = good.replacen("\"1\"", "\"one\"", 1);
        assert!(matches!(certificate_from_json(&junk), Err(Error::Scalar(_))));
        assert!(matches!(certificate_from_json("{"), Err(Error::Json(_))));
        let extra = good.replacen("{", "{\"verdict\": \"proven-zpd\",", 1);
        assert!(certificate_from_json(&extra).is_err());
        let composite = good.replace("\"kind\": \"rational\"", "\"kind\": \"prime\", \"modulus\": 100");
        assert!(matches!(certificate_from_json(&composite), Err(Error::Scalar(_))));
    }

    #[test]
    fn rejects_duplicate_entry() {
        let text = r#"{"algebra":{"kind":"gl-lie","m":1},"claimed_kernel_dim":1,"families":[],
            "field":{"kind":"rational"},"format_version":1,
            "tensors":[{"family":"x","u":[[1,1,"1"],[1,1,"1"]],"v":[[1,1,"1"]]}]}"#;
        assert!(matches!(certificate_from_json(text), Err(Error::MalformedCertificate(_))));
    }

    #[test]
    fn write_guard() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        let mut cert = n3();
        let report = verify_certificate(&cert).unwrap();
        write_certificate(&path, &cert, WriteGuard::Verified(&report)).unwrap();
        assert_eq!(read_certificate(&path).unwrap(), cert);

        cert.tensors.pop();
        let bad = verify_certificate(&cert).unwrap();
        assert!(matches!(
            write_certificate(&path, &cert, WriteGuard::Verified(&bad)),
            Err(Error::UnverifiedWrite)
        ));
        assert!(matches!(
            write_certificate(&path, &cert, WriteGuard::Verified(&report)),
            Err(Error::UnverifiedWrite)
        ));
        write_certificate(&path, &cert, WriteGuard::Unverified).unwrap();
        assert_eq!(read_certificate(&path).unwrap().tensors.len(), 12);
    }

    #[test]
    fn report_round_trip() {
        let report = verify_certificate(&n3()).unwrap();
        let text = report_to_json(&report);
        assert_eq!(report_from_json(&text).unwrap(), report);
        assert!(text.contains("\"verdict\": \"proven-zpd\""));
        assert!(text.contains("\"first_noncommuting\": null"));
    }
}
