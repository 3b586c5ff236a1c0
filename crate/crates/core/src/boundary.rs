//! Boundary algebra of a circuit-like QCA along one lattice axis.
//!
//! Writing the symplectic matrix as Q = A + z B with A, B free of the chosen
//! axis variable z, the columns of B describe how operators straddle a cut
//! perpendicular to that axis. The image of B is a free module; pulling the
//! symplectic form back along a free basis B0 produces an antihermitian,
//! invertible matrix Xi with vanishing constant diagonal. Xi is the complete
//! boundary invariant of the QCA.

use crate::error::{CaError, Result};
use crate::groebner::{
    check_complex_exact, is_unit_ideal, laurent_module_membership, rank, Caps, ExactnessReport,
};
use crate::ring::fp::FpScalar;
use crate::ring::matrix::{combinations, PolyMatrix};
use crate::ring::poly::LaurentPoly;
use crate::symplectic::{lambda, SymplecticMatrix};

/// The two halves of Q = A + z B, over the ring without the axis variable.
#[derive(Clone, Debug)]
pub struct BoundarySplit {
    pub a: PolyMatrix,
    pub b: PolyMatrix,
    pub q: usize,
}

/// Split along `axis`. The entries of Q must only use z-exponents 0 and 1;
/// anything else is a precondition error carrying the normalization recipe.
pub fn split_z(qca: &SymplecticMatrix, axis: usize) -> Result<BoundarySplit> {
    let m = qca.matrix();
    let mut lo = 0i64;
    let mut hi = 0i64;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if let Some((l, h)) = m.at(i, j).exp_range(axis) {
                lo = lo.min(l);
                hi = hi.max(h);
            }
        }
    }
    if lo < 0 || hi > 1 {
        let var = &qca.ring().vars()[axis];
        return Err(CaError::Precondition(format!(
            "entries use {var}-exponents in [{lo}, {hi}]; multiply Q by the unit {var}^{} and \
             coarse-grain the axis by a factor of {} first",
            -lo,
            (hi - lo).max(1)
        )));
    }
    let a = m.var_coeff(axis, 0)?;
    let b = m.var_coeff(axis, 1)?;
    Ok(BoundarySplit {
        a,
        b,
        q: qca.q(),
    })
}

impl BoundarySplit {
    /// The structural identities of the split: A^dag lam B = 0,
    /// A^dag lam A + B^dag lam B = lam, and B lam A^dag = 0.
    pub fn verify_identities(&self) -> Result<()> {
        let ring = self.a.ring();
        let lam = lambda(ring, self.q);
        if !self.a.dagger().mul(&lam)?.mul(&self.b)?.is_zero() {
            return Err(CaError::Internal("A^dag lambda B != 0".into()));
        }
        let sum = self
            .a
            .dagger()
            .mul(&lam)?
            .mul(&self.a)?
            .add(&self.b.dagger().mul(&lam)?.mul(&self.b)?)?;
        if sum != lam {
            return Err(CaError::Internal(
                "A^dag lambda A + B^dag lambda B != lambda".into(),
            ));
        }
        if !self.b.mul(&lam)?.mul(&self.a.dagger())?.is_zero() {
            return Err(CaError::Internal("B lambda A^dag != 0".into()));
        }
        Ok(())
    }
}

/// A free basis of the column span of `b`: columns b0 with b = b0 * c and the
/// span of b0 equal to the span of b, certified exactly.
#[derive(Clone, Debug)]
pub struct FreeBasis {
    pub b0: PolyMatrix,
    pub coeffs: PolyMatrix,
}

fn certify_columns(
    b: &PolyMatrix,
    cols: &[usize],
    r: usize,
    caps: &Caps,
) -> Result<Option<FreeBasis>> {
    let cand = b.columns(cols);
    if rank(&cand)? != r {
        return Ok(None);
    }
    // Freeness: the r-th determinantal ideal of the candidate is the unit
    // ideal, so the columns stay independent at every point of the torus.
    let minors = cand.minors(r);
    if !is_unit_ideal(&minors, caps)? {
        return Ok(None);
    }
    // Span: every column of b must be a Laurent combination of the candidate.
    let ring = b.ring();
    let mut coeffs = PolyMatrix::zero(ring, r, b.cols());
    for j in 0..b.cols() {
        if cols.contains(&j) {
            let pos = cols.iter().position(|&c| c == j).unwrap();
            coeffs.set(pos, j, LaurentPoly::one(ring));
            continue;
        }
        let v = b.column(j);
        match laurent_module_membership(&cand, &v, 6, caps)? {
            Some(cert) => {
                for i in 0..r {
                    coeffs.set(i, j, cert.at(i, 0).clone());
                }
            }
            None => return Ok(None),
        }
    }
    Ok(Some(FreeBasis {
        b0: cand,
        coeffs,
    }))
}

/// Find a certified free basis among the columns of `b`.
///
/// Tries the nonzero columns directly, then the trailing candidates first
/// (the natural normal form puts the basis in the last columns), then every
/// subset of the right size.
pub fn free_basis(b: &PolyMatrix, caps: &Caps) -> Result<FreeBasis> {
    let r = rank(b)?;
    if r == 0 {
        return Err(CaError::Domain("zero matrix has no free basis".into()));
    }
    let nonzero: Vec<usize> = (0..b.cols()).filter(|&j| !b.column(j).is_zero()).collect();
    if nonzero.len() == r {
        if let Some(fb) = certify_columns(b, &nonzero, r, caps)? {
            return Ok(fb);
        }
    }
    // Trailing r nonzero columns.
    if nonzero.len() > r {
        let tail: Vec<usize> = nonzero[nonzero.len() - r..].to_vec();
        if let Some(fb) = certify_columns(b, &tail, r, caps)? {
            return Ok(fb);
        }
    }
    for subset in combinations(nonzero.len(), r) {
        let cols: Vec<usize> = subset.iter().map(|&i| nonzero[i]).collect();
        if let Some(fb) = certify_columns(b, &cols, r, caps)? {
            return Ok(fb);
        }
    }
    Err(CaError::Domain(
        "no column subset of B is a certified free basis; the image may not be free \
         on column submatrices"
            .into(),
    ))
}

/// The boundary form and the data used to build it.
#[derive(Clone, Debug)]
pub struct BoundaryForm {
    pub split: BoundarySplit,
    pub basis: FreeBasis,
    pub xi: PolyMatrix,
    /// Scalar c with det Xi = c^2, when the determinant is constant.
    pub det_sqrt: Option<FpScalar>,
}

/// Check the defining properties of a boundary form: antihermitian,
/// invertible, and zero constant term on the diagonal.
pub fn validate_form(xi: &PolyMatrix) -> Result<()> {
    if !xi.is_square() {
        return Err(CaError::Shape("form must be square".into()));
    }
    if xi.dagger() != xi.neg() {
        return Err(CaError::Domain("form is not antihermitian".into()));
    }
    for i in 0..xi.rows() {
        if !xi.at(i, i).constant_coeff().is_zero() {
            return Err(CaError::Domain(format!(
                "diagonal entry {i} has a nonzero constant term"
            )));
        }
    }
    let det = xi.determinant()?;
    if det.as_unit().is_none() {
        return Err(CaError::Domain(format!("form determinant {det} is not a unit")));
    }
    Ok(())
}

/// Extract the antihermitian boundary form Xi = B0^dag lambda B0 of a QCA
/// along the given axis.
pub fn antihermitian_form(qca: &SymplecticMatrix, axis: usize, caps: &Caps) -> Result<BoundaryForm> {
    let split = split_z(qca, axis)?;
    split.verify_identities()?;
    let basis = free_basis(&split.b, caps)?;
    let lam = lambda(split.b.ring(), split.q);
    let xi = basis.b0.dagger().mul(&lam)?.mul(&basis.b0)?;
    validate_form(&xi)?;
    let det = xi.determinant()?;
    let det_sqrt = det.as_unit().and_then(|(c, e)| {
        if e.iter().all(|&k| k == 0) {
            c.sqrt()
        } else {
            None
        }
    });
    Ok(BoundaryForm {
        split,
        basis,
        xi,
        det_sqrt,
    })
}

/// Exactness of hops --> boundary algebra --> bulk relations: with B the
/// z-coefficient of Q and n = B^dag lambda, check that the columns of `hops`
/// generate the kernel of n as a free resolution step.
pub fn boundary_commutant_check(
    qca: &SymplecticMatrix,
    axis: usize,
    hops: &PolyMatrix,
    caps: &Caps,
) -> Result<ExactnessReport> {
    let split = split_z(qca, axis)?;
    let lam = lambda(split.b.ring(), split.q);
    let n = split.b.dagger().mul(&lam)?;
    check_complex_exact(hops, &n, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::{Ring, RingDesc};
    use crate::symplectic::{circuit, ElementaryGate};

    fn ring(p: u64, vars: &[&str]) -> Ring {
        RingDesc::new(p, vars).unwrap()
    }

    /// A small circuit-like QCA in one dimension built from gates using z
    /// only through a controlled phase, then shifted into {0, 1} range.
    fn sample_qca(p: u64) -> SymplecticMatrix {
        let r = ring(p, &["z"]);
        let z = LaurentPoly::var(&r, 0);
        let f = z.checked_add(&z.bar()).unwrap();
        let c = circuit(
            &r,
            1,
            &[
                ElementaryGate::Hadamard { i: 0 },
                ElementaryGate::ControlPhase { i: 0, f },
            ],
        )
        .unwrap();
        c
    }

    #[test]
    fn split_rejects_out_of_range_exponents() {
        let q = sample_qca(5);
        match split_z(&q, 0) {
            Err(CaError::Precondition(msg)) => {
                assert!(msg.contains("coarse-grain"), "{msg}");
            }
            other => panic!("expected precondition error, got {other:?}"),
        }
    }

    #[test]
    fn shift_qca_splits_cleanly() {
        // The pure shift on one qudit: diag(z, z^-1)? Not in range; use the
        // two-qudit X-shift diag(z, 1, z^-1... keep it simpler: control-X by z.
        let r = ring(3, &["z"]);
        let z = LaurentPoly::var(&r, 0);
        let q = circuit(
            &r,
            2,
            &[ElementaryGate::ControlX {
                i: 0,
                j: 1,
                a: z.clone(),
            }],
        )
        .unwrap();
        match split_z(&q, 0) {
            Err(CaError::Precondition(_)) => {} // bar(z) = z^-1 appears
            Ok(split) => split.verify_identities().unwrap(),
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn free_basis_of_padded_matrix() {
        // b = [b0 | b0 * x | 0] should come back as rank-1 with basis b0.
        let r = ring(5, &["x"]);
        let x = LaurentPoly::var(&r, 0);
        let one = LaurentPoly::one(&r);
        let b = PolyMatrix::new(
            &r,
            2,
            3,
            vec![
                one.clone(),
                x.clone(),
                LaurentPoly::zero(&r),
                x.clone(),
                x.checked_mul(&x).unwrap(),
                LaurentPoly::zero(&r),
            ],
        )
        .unwrap();
        let fb = free_basis(&b, &Caps::default()).unwrap();
        assert_eq!(fb.b0.cols(), 1);
        assert_eq!(fb.b0.mul(&fb.coeffs).unwrap(), b);
    }

    #[test]
    fn validate_form_checks() {
        let r = ring(5, &["x"]);
        let x = LaurentPoly::var(&r, 0);
        let d = x.checked_sub(&x.bar()).unwrap(); // x - x^-1, antihermitian
        let m = PolyMatrix::new(&r, 1, 1, vec![d]).unwrap();
        // x - x^-1 is antihermitian with zero constant term but not a unit.
        assert!(validate_form(&m).is_err());
        let u = PolyMatrix::new(
            &r,
            2,
            2,
            vec![
                LaurentPoly::zero(&r),
                LaurentPoly::one(&r),
                LaurentPoly::constant(&r, -1),
                LaurentPoly::zero(&r),
            ],
        )
        .unwrap();
        validate_form(&u).unwrap();
    }
}
