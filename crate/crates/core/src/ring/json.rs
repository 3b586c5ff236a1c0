//! Canonical JSON interchange for matrices over F_p[x1^±, ..., xD^±].
//!
//! Serialization is byte-deterministic: struct field order is fixed, terms in
//! every entry come out sorted by exponent vector (lexicographic), and no
//! whitespace variation is possible with compact output.

use serde::{Deserialize, Serialize};

use crate::error::{CaError, Result};
use crate::ring::matrix::PolyMatrix;
use crate::ring::poly::{LaurentPoly, Ring, RingDesc};

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TermJson {
    pub c: u64,
    pub e: Vec<i64>,
}

/// Wire format for a matrix. `entries[i][j]` is the term list of the (i, j)
/// entry, empty for zero.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct MatrixJson {
    pub p: u64,
    pub vars: Vec<String>,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Vec<TermJson>>>,
}

pub fn poly_terms_json(p: &LaurentPoly) -> Vec<TermJson> {
    p.terms()
        .map(|(e, c)| TermJson { c, e: e.clone() })
        .collect()
}

pub fn matrix_to_json(m: &PolyMatrix) -> MatrixJson {
    let entries = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| poly_terms_json(m.at(i, j))).collect())
        .collect();
    MatrixJson {
        p: m.ring().p(),
        vars: m.ring().vars().to_vec(),
        rows: m.rows(),
        cols: m.cols(),
        entries,
    }
}

pub fn matrix_to_string(m: &PolyMatrix) -> String {
    serde_json::to_string(&matrix_to_json(m)).expect("matrix serialization")
}

pub fn matrix_to_string_pretty(m: &PolyMatrix) -> String {
    serde_json::to_string_pretty(&matrix_to_json(m)).expect("matrix serialization")
}

pub fn matrix_from_json(j: &MatrixJson) -> Result<PolyMatrix> {
    let ring: Ring = RingDesc::new_owned(j.p, j.vars.clone())?;
    if j.entries.len() != j.rows {
        return Err(CaError::Parse(format!(
            "expected {} rows, found {}",
            j.rows,
            j.entries.len()
        )));
    }
    let mut entries = Vec::with_capacity(j.rows * j.cols);
    for row in &j.entries {
        if row.len() != j.cols {
            return Err(CaError::Parse(format!(
                "expected {} cols, found {}",
                j.cols,
                row.len()
            )));
        }
        for terms in row {
            let mut p = LaurentPoly::zero(&ring);
            for t in terms {
                if t.e.len() != ring.num_vars() {
                    return Err(CaError::Parse(format!(
                        "exponent vector of length {}, expected {}",
                        t.e.len(),
                        ring.num_vars()
                    )));
                }
                p.add_term(&t.e, t.c as i64);
            }
            entries.push(p);
        }
    }
    PolyMatrix::new(&ring, j.rows, j.cols, entries)
}

pub fn matrix_from_str(s: &str) -> Result<PolyMatrix> {
    let j: MatrixJson =
        serde_json::from_str(s).map_err(|e| CaError::Parse(format!("bad matrix JSON: {e}")))?;
    matrix_from_json(&j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_determinism() {
        let ring = RingDesc::new(5, &["x", "y"]).unwrap();
        let mut m = PolyMatrix::zero(&ring, 2, 2);
        m.set(0, 0, LaurentPoly::from_terms(&ring, &[(vec![1, -1], 2), (vec![0, 0], 1)]));
        m.set(1, 0, LaurentPoly::var(&ring, 1));
        let s1 = matrix_to_string(&m);
        let back = matrix_from_str(&s1).unwrap();
        assert_eq!(back, m);
        let s2 = matrix_to_string(&back);
        assert_eq!(s1, s2);
    }

    #[test]
    fn terms_come_out_sorted() {
        let ring = RingDesc::new(3, &["x"]).unwrap();
        let m = PolyMatrix::new(
            &ring,
            1,
            1,
            vec![LaurentPoly::from_terms(&ring, &[(vec![2], 1), (vec![-1], 1), (vec![0], 2)])],
        )
        .unwrap();
        let j = matrix_to_json(&m);
        let exps: Vec<i64> = j.entries[0][0].iter().map(|t| t.e[0]).collect();
        assert_eq!(exps, vec![-1, 0, 2]);
    }

    #[test]
    fn unreduced_input_is_normalized() {
        let s = r#"{"p":3,"vars":["x"],"rows":1,"cols":1,"entries":[[[{"c":4,"e":[0]},{"c":2,"e":[0]}]]]}"#;
        let m = matrix_from_str(s).unwrap();
        assert!(m.at(0, 0).is_zero());
    }

    #[test]
    fn bad_shape_rejected() {
        let s = r#"{"p":3,"vars":["x"],"rows":2,"cols":1,"entries":[[[]]]}"#;
        assert!(matrix_from_str(s).is_err());
    }
}
