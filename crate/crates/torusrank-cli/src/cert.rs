//! Certificate documents: the machine-readable JSON that every decision
//! ships with, and the third-party replay that re-checks its claims.
//!
//! All integers are serialized as decimal strings; conjugator entries can
//! exceed double precision after chain accumulation, and a certificate
//! that silently truncates is worse than none.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use torusrank::exactmat::ColVec;
use torusrank::{oracle, Certificate, Decision, Mat, OrbitSet};

pub const KIND_MOD_D: &str = "mod_d";
pub const KIND_ORBIT_WITNESS: &str = "orbit_witness";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub n: usize,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainDoc {
    pub p: Vec<Vec<String>>,
    pub p_inv: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrimeSetsDoc {
    pub p: Vec<String>,
    pub p1: Vec<String>,
    pub p2: Vec<String>,
    pub p3: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceDoc {
    pub case_label: String,
    pub s: String,
    pub t: String,
    pub minors: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_values: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_sets: Option<PrimeSetsDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub input_matrix: MatrixDoc,
    pub verdict: String,
    pub d: String,
    pub certificate_kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_vectors: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugator_chain: Option<ChainDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceDoc>,
    pub verified: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub verification_skipped: bool,
    pub rank_statement: String,
}

pub fn mat_to_doc(m: &Mat) -> MatrixDoc {
    MatrixDoc {
        n: m.rows(),
        rows: (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.at(i, j).to_string()).collect())
            .collect(),
    }
}

pub fn doc_to_mat(d: &MatrixDoc) -> Result<Mat, String> {
    if d.rows.len() != d.n || d.rows.iter().any(|r| r.len() != d.n) {
        return Err("matrix document shape mismatch".into());
    }
    let mut entries = Vec::with_capacity(d.n * d.n);
    for row in &d.rows {
        for e in row {
            entries.push(BigInt::from_str(e).map_err(|_| format!("non-integer token {e:?}"))?);
        }
    }
    Mat::new(d.n, d.n, entries).map_err(|e| e.to_string())
}

fn mat_rows_strings(m: &Mat) -> Vec<Vec<String>> {
    mat_to_doc(m).rows
}

fn vec_strings(v: &ColVec) -> Vec<String> {
    v.entries().iter().map(|e| e.to_string()).collect()
}

/// Assembles the document for a decision on `a`.
pub fn build_certificate(
    a: &Mat,
    decision: &Decision,
    verified: bool,
    verification_skipped: bool,
) -> CertificateDoc {
    let (kind, witness_vectors, conjugator_chain, trace) = match &decision.certificate {
        Certificate::ModDObstruction { .. } => (KIND_MOD_D, None, None, None),
        Certificate::OrbitWitness(w) => (
            KIND_ORBIT_WITNESS,
            Some(w.orbit_set.vectors().iter().map(vec_strings).collect()),
            Some(ChainDoc {
                p: mat_rows_strings(&w.conjugator.p),
                p_inv: mat_rows_strings(&w.conjugator.p_inv),
            }),
            Some(TraceDoc {
                case_label: w.trace.case_label.to_string(),
                s: w.trace.s.to_string(),
                t: w.trace.t.to_string(),
                minors: w
                    .trace
                    .minors
                    .iter()
                    .map(|(n, v)| (n.clone(), v.to_string()))
                    .collect(),
                c_values: w
                    .trace
                    .c_values
                    .as_ref()
                    .map(|cs| cs.iter().map(|c| c.to_string()).collect()),
                prime_sets: w.trace.prime_sets.as_ref().map(|s| PrimeSetsDoc {
                    p: s.all.iter().map(|p| p.to_string()).collect(),
                    p1: s.p1.iter().map(|p| p.to_string()).collect(),
                    p2: s.p2.iter().map(|p| p.to_string()).collect(),
                    p3: s.p3.iter().map(|p| p.to_string()).collect(),
                }),
            }),
        ),
    };
    CertificateDoc {
        input_matrix: mat_to_doc(a),
        verdict: decision.verdict.to_string(),
        d: decision.d.to_string(),
        certificate_kind: kind.to_string(),
        witness_vectors,
        conjugator_chain,
        trace,
        verified,
        verification_skipped,
        rank_statement: decision.rank_statement.to_string(),
    }
}

/// Replays a certificate's claims against a matrix, trusting nothing from
/// the decision pipeline.
///
/// FULL_RANK: `d != 1` and every entry of `A - a11*I` divisible by d
/// (`d = 0` demands `A = a11*I` exactly). NOT_FULL_RANK: the witness
/// vectors number n - 1, are distinct, and generate under the orbit check.
/// Both directions also re-check unimodularity and the n constraint.
pub fn verify_certificate(matrix: &Mat, doc: &CertificateDoc) -> Result<(), String> {
    let doc_mat = doc_to_mat(&doc.input_matrix)?;
    if &doc_mat != matrix {
        return Err("certificate was issued for a different matrix".into());
    }
    let n = matrix.rows();
    if n == 2 {
        return Err("criterion does not apply to n = 2".into());
    }
    let det = matrix.det().map_err(|e| e.to_string())?;
    if !det.abs().is_one() {
        return Err(format!("matrix is not unimodular (det = {det})"));
    }
    let d = BigInt::from_str(&doc.d).map_err(|_| "unreadable d".to_string())?;
    let shifted = matrix
        .sub_scalar_diag(matrix.at(0, 0))
        .map_err(|e| e.to_string())?;

    match doc.verdict.as_str() {
        "FULL_RANK" => {
            if doc.certificate_kind != KIND_MOD_D {
                return Err(format!(
                    "FULL_RANK must carry a {KIND_MOD_D} certificate, found {}",
                    doc.certificate_kind
                ));
            }
            if d.is_one() {
                return Err("claimed obstruction with d = 1".into());
            }
            if d.is_zero() {
                if !shifted.is_zero() {
                    return Err("d = 0 but A != a11*I".into());
                }
            } else {
                for e in shifted.entries() {
                    if !(e % &d).is_zero() {
                        return Err(format!("entry {e} not divisible by d = {d}"));
                    }
                }
            }
            Ok(())
        }
        "NOT_FULL_RANK" => {
            if doc.certificate_kind != KIND_ORBIT_WITNESS {
                return Err(format!(
                    "NOT_FULL_RANK must carry an {KIND_ORBIT_WITNESS} certificate, found {}",
                    doc.certificate_kind
                ));
            }
            let rows = doc
                .witness_vectors
                .as_ref()
                .ok_or("missing witness vectors")?;
            if rows.len() != n - 1 {
                return Err(format!("witness has {} vectors, expected {}", rows.len(), n - 1));
            }
            let mut vectors = Vec::with_capacity(rows.len());
            for r in rows {
                if r.len() != n {
                    return Err("witness vector of wrong dimension".into());
                }
                let entries = r
                    .iter()
                    .map(|e| BigInt::from_str(e).map_err(|_| format!("non-integer token {e:?}")))
                    .collect::<Result<Vec<_>, _>>()?;
                vectors.push(ColVec::new(entries).map_err(|e| e.to_string())?);
            }
            let set = OrbitSet::new(vectors).map_err(|e| e.to_string())?;
            match oracle::is_generating(matrix, &set) {
                Ok(true) => Ok(()),
                Ok(false) => Err("witness vectors do not generate".into()),
                Err(e) => Err(e.to_string()),
            }
        }
        other => Err(format!("unknown verdict {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use torusrank::decide_full_rank;

    #[test]
    fn self_emitted_certificates_replay() {
        for rows in [
            vec![vec![1i64, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]],
        ] {
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let a = Mat::from_i64_rows(&refs);
            let dec = decide_full_rank(&a).unwrap();
            let doc = build_certificate(&a, &dec, true, false);
            verify_certificate(&a, &doc).unwrap();
        }
    }

    #[test]
    fn tampered_witness_fails_replay() {
        let a = Mat::from_i64_rows(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let dec = decide_full_rank(&a).unwrap();
        let mut doc = build_certificate(&a, &dec, true, false);
        let w = doc.witness_vectors.as_mut().unwrap();
        w[0][0] = "999".into();
        let out = verify_certificate(&a, &doc);
        assert!(out.is_err());
    }

    #[test]
    fn certificate_for_other_matrix_fails() {
        let a = Mat::from_i64_rows(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let b = Mat::identity(3);
        let dec = decide_full_rank(&a).unwrap();
        let doc = build_certificate(&a, &dec, true, false);
        assert!(verify_certificate(&b, &doc).is_err());
    }
}
