//! Invariants of Laurent ideals: unit test, Krull dimension, grade; ranks of
//! matrices over the fraction field; and the exactness criterion for two-step
//! complexes of free modules.

use crate::error::{CaError, Result};
use crate::ring::matrix::PolyMatrix;
use crate::ring::poly::{LaurentPoly, Ring};

use super::buchberger::{basis_is_unit, groebner_basis, leading_term, Caps};
use super::module::ModuleBasis;
use super::order::MonOrder;

/// Groebner basis (degrevlex, polynomial ring in the same variables) of the
/// contraction of the Laurent ideal generated by `gens`.
///
/// Denominators are cleared per generator, then the ideal is saturated by the
/// product of all variables: adjoin t, add t*x1*...*xD - 1, eliminate t.
pub fn laurent_ideal_gb(gens: &[LaurentPoly], caps: &Caps) -> Result<Vec<LaurentPoly>> {
    let ring = match gens.first() {
        Some(g) => g.ring().clone(),
        None => return Ok(Vec::new()),
    };
    let d = ring.num_vars();
    let ext = ring.with_var("t#")?;
    let mut ext_gens: Vec<LaurentPoly> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        ext_gens.push(g.to_poly_subring().insert_var(&ext, d));
    }
    if ext_gens.is_empty() {
        return Ok(Vec::new());
    }
    // t * x1...xD - 1
    let mut e = vec![1i64; d + 1];
    e[d] = 1;
    let sat = LaurentPoly::from_terms(&ext, &[(e, 1), (vec![0; d + 1], -1)]);
    ext_gens.push(sat);
    let gb = groebner_basis(&ext_gens, MonOrder::Elim(d), caps)?;
    // Keep elements free of t and drop the t coordinate.
    let mut out = Vec::new();
    for f in gb {
        let (le, _) = leading_term(&f, MonOrder::Elim(d));
        if le[d] != 0 {
            continue;
        }
        out.push(f.var_coeff(d, 0)?);
    }
    Ok(out)
}

/// Is the Laurent ideal generated by `gens` the whole ring?
pub fn is_unit_ideal(gens: &[LaurentPoly], caps: &Caps) -> Result<bool> {
    let gb = laurent_ideal_gb(gens, caps)?;
    Ok(basis_is_unit(&gb))
}

/// Krull dimension of R/I for a Laurent ideal I, `None` for the unit ideal.
///
/// Computed as the maximal size of a variable subset S such that no leading
/// monomial of the saturated Groebner basis has support inside S.
pub fn krull_dimension(gens: &[LaurentPoly], caps: &Caps) -> Result<Option<usize>> {
    let ring = match gens.first() {
        Some(g) => g.ring().clone(),
        None => return Err(CaError::Domain("dimension of empty generator list".into())),
    };
    let d = ring.num_vars();
    let gb = laurent_ideal_gb(gens, caps)?;
    if basis_is_unit(&gb) {
        return Ok(None);
    }
    if gb.is_empty() {
        return Ok(Some(d));
    }
    let leads: Vec<Vec<i64>> = gb
        .iter()
        .map(|f| leading_term(f, MonOrder::DegRevLex).0)
        .collect();
    let mut best = 0usize;
    for mask in 0u32..(1u32 << d) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let independent = leads.iter().all(|e| {
            // Some variable outside S appears in this leading monomial.
            e.iter()
                .enumerate()
                .any(|(i, &k)| k > 0 && mask & (1 << i) == 0)
        });
        if independent {
            best = size;
        }
    }
    Ok(Some(best))
}

/// Grade (depth of the ideal) of a Laurent ideal over F_p[x^±], computed as
/// D - dim(R/I); the ring is Cohen-Macaulay so this equals the length of a
/// maximal regular sequence. The unit ideal gets the sentinel D + 1.
pub fn grade(gens: &[LaurentPoly], caps: &Caps) -> Result<usize> {
    let ring = match gens.first() {
        Some(g) => g.ring().clone(),
        None => return Err(CaError::Domain("grade of empty generator list".into())),
    };
    let d = ring.num_vars();
    if gens.iter().all(|g| g.is_zero()) {
        return Ok(0);
    }
    match krull_dimension(gens, caps)? {
        None => Ok(d + 1),
        Some(dim) => Ok(d - dim),
    }
}

/// Rank of a matrix over the fraction field of the Laurent ring, by
/// fraction-free Gaussian elimination.
pub fn rank(m: &PolyMatrix) -> Result<usize> {
    let mut a: Vec<Vec<LaurentPoly>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.at(i, j).clone()).collect())
        .collect();
    let rows = m.rows();
    let cols = m.cols();
    let mut rank = 0usize;
    let mut row = 0usize;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let pivot = (row..rows).find(|&i| !a[i][col].is_zero());
        let Some(pi) = pivot else { continue };
        a.swap(row, pi);
        let (top, rest) = a.split_at_mut(row + 1);
        let prow = &top[row];
        for r in rest.iter_mut() {
            if r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for c in 0..cols {
                // r <- pivot * r - f * prow, a cross-multiplication step.
                r[c] = prow[col]
                    .checked_mul(&r[c])?
                    .checked_sub(&f.checked_mul(&prow[c])?)?;
            }
        }
        rank += 1;
        row += 1;
    }
    Ok(rank)
}

/// All k x k minors of `m` as generators of the determinantal ideal.
pub fn determinantal_ideal(m: &PolyMatrix, k: usize) -> Vec<LaurentPoly> {
    m.minors(k)
}

/// Verdict of the exactness check for `F^a --m--> F^b --n--> F^c`.
#[derive(Clone, Debug)]
pub struct ExactnessReport {
    pub composite_zero: bool,
    pub rank_m: usize,
    pub rank_n: usize,
    pub ranks_add_up: bool,
    pub grade_m: usize,
    pub grade_n: usize,
    pub exact: bool,
}

/// Buchsbaum-Eisenbud criterion for exactness at the middle module of
///// `F^a --m--> F^b --n--> F^c`: the composite vanishes, rank m + rank n = b,
/// grade I_{rank n}(n) >= 1, and grade I_{rank m}(m) >= 2.
pub fn check_complex_exact(m: &PolyMatrix, n: &PolyMatrix, caps: &Caps) -> Result<ExactnessReport> {
    if n.cols() != m.rows() {
        return Err(CaError::Shape(format!(
            "complex shapes do not compose: {}x{} after {}x{}",
            n.rows(),
            n.cols(),
            m.rows(),
            m.cols()
        )));
    }
    let composite_zero = n.mul(m)?.is_zero();
    let rank_m = rank(m)?;
    let rank_n = rank(n)?;
    let ranks_add_up = rank_m + rank_n == m.rows();
    let grade_of = |mat: &PolyMatrix, k: usize| -> Result<usize> {
        if k == 0 {
            // I_0 is the unit ideal by convention.
            return Ok(mat.ring().num_vars() + 1);
        }
        let minors = determinantal_ideal(mat, k);
        grade(&minors, caps)
    };
    let grade_m = grade_of(m, rank_m)?;
    let grade_n = grade_of(n, rank_n)?;
    let exact = composite_zero && ranks_add_up && grade_n >= 1 && grade_m >= 2;
    Ok(ExactnessReport {
        composite_zero,
        rank_m,
        rank_n,
        ranks_add_up,
        grade_m,
        grade_n,
        exact,
    })
}

/// Membership of a column vector in the Laurent span of the columns of `m`,
/// with an exact certificate `c` such that `m * c = v`.
///
/// Works through the polynomial subring: clears denominators, then tries
/// (x1...xD)^k * v for k = 0..=`sat_cap` against a module Groebner basis.
pub fn laurent_module_membership(
    m: &PolyMatrix,
    v: &PolyMatrix,
    sat_cap: usize,
    caps: &Caps,
) -> Result<Option<PolyMatrix>> {
    if v.cols() != 1 || v.rows() != m.rows() {
        return Err(CaError::Shape("membership target must be a conforming column".into()));
    }
    let ring: Ring = m.ring().clone();
    let d = ring.num_vars();
    // Per-column clearing shifts, needed to undo the certificate later.
    let col_shift: Vec<Vec<i64>> = (0..m.cols())
        .map(|j| {
            let mut s = vec![0i64; d];
            for i in 0..m.rows() {
                let cs = m.at(i, j).clearing_shift();
                for (a, b) in s.iter_mut().zip(cs.iter()) {
                    *a = (*a).max(*b);
                }
            }
            s
        })
        .collect();
    let cleared = PolyMatrix::from_fn(&ring, m.rows(), m.cols(), |i, j| {
        m.at(i, j).mul_monomial(&col_shift[j], 1)
    });
    let basis = ModuleBasis::new(&cleared, MonOrder::DegRevLex, caps)?;
    let mut v_shift = vec![0i64; d];
    for i in 0..v.rows() {
        let cs = v.at(i, 0).clearing_shift();
        for (a, b) in v_shift.iter_mut().zip(cs.iter()) {
            *a = (*a).max(*b);
        }
    }
    for k in 0..=sat_cap {
        let extra = vec![k as i64; d];
        let total: Vec<i64> = v_shift.iter().zip(extra.iter()).map(|(a, b)| a + b).collect();
        let target: Vec<LaurentPoly> = (0..v.rows())
            .map(|i| v.at(i, 0).mul_monomial(&total, 1))
            .collect();
        if let Some(cof) = basis.membership(&target)? {
            // cleared * cof = x^total * v; undo the shifts.
            let back: Vec<i64> = total.iter().map(|t| -t).collect();
            let cert: Vec<LaurentPoly> = cof
                .iter()
                .zip(col_shift.iter())
                .map(|(c, s)| {
                    let undo: Vec<i64> = s.iter().zip(back.iter()).map(|(a, b)| a + b).collect();
                    c.mul_monomial(&undo, 1)
                })
                .collect();
            let cert = PolyMatrix::new(&ring, m.cols(), 1, cert)?;
            let check = m.mul(&cert)?;
            if &check != v {
                return Err(CaError::Internal(
                    "membership certificate failed verification".into(),
                ));
            }
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::RingDesc;

    fn ring(p: u64, vars: &[&str]) -> Ring {
        RingDesc::new(p, vars).unwrap()
    }

    #[test]
    fn unit_ideal_needs_saturation() {
        // (x) is the unit ideal in F_5[x^±] even though it is proper in F_5[x].
        let r = ring(5, &["x"]);
        let x = LaurentPoly::var(&r, 0);
        assert!(is_unit_ideal(&[x], &Caps::default()).unwrap());
        // (x - 1) stays proper.
        let f = LaurentPoly::from_terms(&r, &[(vec![1], 1), (vec![0], -1)]);
        assert!(!is_unit_ideal(&[f], &Caps::default()).unwrap());
    }

    #[test]
    fn dimension_and_grade() {
        let r = ring(5, &["x", "y"]);
        let f = LaurentPoly::from_terms(&r, &[(vec![1, 0], 1), (vec![0, 0], -1)]);
        let g = LaurentPoly::from_terms(&r, &[(vec![0, 1], 1), (vec![0, 0], -1)]);
        // V(x-1) is a curve in the 2-torus: dim 1, grade 1.
        assert_eq!(krull_dimension(&[f.clone()], &Caps::default()).unwrap(), Some(1));
        assert_eq!(grade(&[f.clone()], &Caps::default()).unwrap(), 1);
        // V(x-1, y-1) is a point: dim 0, grade 2.
        assert_eq!(
            krull_dimension(&[f.clone(), g.clone()], &Caps::default()).unwrap(),
            Some(0)
        );
        assert_eq!(grade(&[f, g], &Caps::default()).unwrap(), 2);
        // Unit ideal: sentinel D + 1.
        let one = LaurentPoly::one(&r);
        assert_eq!(grade(&[one], &Caps::default()).unwrap(), 3);
    }

    #[test]
    fn rank_over_fraction_field() {
        let r = ring(5, &["x"]);
        let x = LaurentPoly::var(&r, 0);
        // [[x, x^2], [1, x]] has rank 1.
        let m = PolyMatrix::new(
            &r,
            2,
            2,
            vec![
                x.clone(),
                x.checked_mul(&x).unwrap(),
                LaurentPoly::one(&r),
                x.clone(),
            ],
        )
        .unwrap();
        assert_eq!(rank(&m).unwrap(), 1);
        assert_eq!(rank(&PolyMatrix::identity(&r, 3)).unwrap(), 3);
        assert_eq!(rank(&PolyMatrix::zero(&r, 2, 2)).unwrap(), 0);
    }

    #[test]
    fn koszul_complex_is_exact() {
        // R^1 --(f, g)^T--> R^2 --(-g, f)--> R^1 with f = x-1, g = y-1.
        let r = ring(3, &["x", "y"]);
        let f = LaurentPoly::from_terms(&r, &[(vec![1, 0], 1), (vec![0, 0], -1)]);
        let g = LaurentPoly::from_terms(&r, &[(vec![0, 1], 1), (vec![0, 0], -1)]);
        let m = PolyMatrix::new(&r, 2, 1, vec![f.clone(), g.clone()]).unwrap();
        let n = PolyMatrix::new(&r, 1, 2, vec![g.neg(), f.clone()]).unwrap();
        let rep = check_complex_exact(&m, &n, &Caps::default()).unwrap();
        assert!(rep.composite_zero);
        assert!(rep.exact, "{rep:?}");
    }

    #[test]
    fn broken_complex_detected() {
        // Same shape but with g = x-1 too: composite is zero only if f*g = g*f
        // (it is), yet the homology is nontrivial since both map to the same line.
        let r = ring(3, &["x", "y"]);
        let f = LaurentPoly::from_terms(&r, &[(vec![1, 0], 1), (vec![0, 0], -1)]);
        let m = PolyMatrix::new(&r, 2, 1, vec![f.clone(), f.clone()]).unwrap();
        let n = PolyMatrix::new(&r, 1, 2, vec![f.neg(), f.clone()]).unwrap();
        let rep = check_complex_exact(&m, &n, &Caps::default()).unwrap();
        assert!(rep.composite_zero);
        assert!(!rep.exact, "{rep:?}");
    }

    #[test]
    fn laurent_membership_with_units() {
        let r = ring(5, &["x"]);
        let x = LaurentPoly::var(&r, 0);
        // v = 1 is in the Laurent span of the single column (x^-1).
        let m = PolyMatrix::new(&r, 1, 1, vec![x.unit_inverse().unwrap()]).unwrap();
        let v = PolyMatrix::new(&r, 1, 1, vec![LaurentPoly::one(&r)]).unwrap();
        let cert = laurent_module_membership(&m, &v, 3, &Caps::default())
            .unwrap()
            .unwrap();
        assert_eq!(m.mul(&cert).unwrap(), v);
    }
}
