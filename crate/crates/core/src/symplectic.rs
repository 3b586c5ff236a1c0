//! Symplectic matrices over the Laurent ring and the Clifford gate set.
//!
//! A translation-invariant Clifford QCA on q prime-p qudits per site is a
//! 2q x 2q matrix Q with Q^dag lambda_q Q = lambda_q, where
//! lambda_q = [[0, I], [-I, 0]] and dag transposes and inverts variables.

use crate::error::{CaError, Result};
use crate::ring::fp::FpScalar;
use crate::ring::matrix::PolyMatrix;
use crate::ring::poly::{LaurentPoly, Ring};

/// The standard symplectic form lambda_q.
pub fn lambda(ring: &Ring, q: usize) -> PolyMatrix {
    PolyMatrix::from_fn(ring, 2 * q, 2 * q, |i, j| {
        if j == i + q {
            LaurentPoly::one(ring)
        } else if i == j + q {
            LaurentPoly::constant(ring, -1)
        } else {
            LaurentPoly::zero(ring)
        }
    })
}

/// Does `m` preserve lambda_q?
pub fn is_symplectic(m: &PolyMatrix, q: usize) -> Result<bool> {
    if m.rows() != 2 * q || m.cols() != 2 * q {
        return Err(CaError::Shape(format!(
            "symplectic check needs a {0}x{0} matrix, got {1}x{2}",
            2 * q,
            m.rows(),
            m.cols()
        )));
    }
    let lam = lambda(m.ring(), q);
    Ok(m.dagger().mul(&lam)?.mul(m)? == lam)
}

/// A matrix verified symplectic at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticMatrix {
    mat: PolyMatrix,
    q: usize,
}

impl SymplecticMatrix {
    pub fn new(mat: PolyMatrix, q: usize) -> Result<Self> {
        if !is_symplectic(&mat, q)? {
            return Err(CaError::Domain(
                "matrix does not preserve the symplectic form".into(),
            ));
        }
        Ok(SymplecticMatrix { mat, q })
    }

    pub fn identity(ring: &Ring, q: usize) -> Self {
        SymplecticMatrix {
            mat: PolyMatrix::identity(ring, 2 * q),
            q,
        }
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> PolyMatrix {
        self.mat
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn ring(&self) -> &Ring {
        self.mat.ring()
    }

    pub fn compose(&self, other: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        if self.q != other.q {
            return Err(CaError::Shape("composing different qudit counts".into()));
        }
        Ok(SymplecticMatrix {
            mat: self.mat.mul(&other.mat)?,
            q: self.q,
        })
    }

    /// Exact inverse: Q^-1 = -lambda Q^dag lambda.
    pub fn inverse(&self) -> Result<SymplecticMatrix> {
        let lam = lambda(self.ring(), self.q);
        let inv = lam.mul(&self.mat.dagger())?.mul(&lam)?.neg();
        Ok(SymplecticMatrix {
            mat: inv,
            q: self.q,
        })
    }

    /// The determinant is always a unit of norm one: det = a * x^e with
    /// a = +-1 and det * bar(det) = 1. When det = c * bar(c)^-1 has a
    /// monomial solution (a = 1, all exponents even), return that c.
    pub fn det_class(&self) -> Result<Option<LaurentPoly>> {
        let det = self.mat.determinant()?;
        let (c, e) = det
            .as_unit()
            .ok_or_else(|| CaError::Internal("symplectic determinant is not a unit".into()))?;
        if c.value() != 1 || e.iter().any(|k| k % 2 != 0) {
            return Ok(None);
        }
        let half: Vec<i64> = e.iter().map(|k| k / 2).collect();
        Ok(Some(LaurentPoly::monomial(self.ring(), &half, 1)))
    }

    /// Entrywise coefficient of `x_axis^k`, over the smaller ring.
    pub fn var_coeff(&self, axis: usize, k: i64) -> Result<PolyMatrix> {
        self.mat.var_coeff(axis, k)
    }

    pub fn coarse_grain(&self, axis: usize, n: usize) -> Result<SymplecticMatrix> {
        // Blow up each scalar to an n x n block, then permute rows/cols so the
        // first q*n coordinates are again the "X" half.
        let g = self.mat.coarse_grain(axis, n)?;
        let ring = g.ring().clone();
        let q = self.q;
        let perm: Vec<usize> = (0..2 * q * n)
            .map(|i| {
                let (half, rest) = if i < q * n { (0, i) } else { (1, i - q * n) };
                let (site, sub) = (rest / n, rest % n);
                (half * q + site) * n + sub
            })
            .collect();
        let permuted = PolyMatrix::from_fn(&ring, 2 * q * n, 2 * q * n, |i, j| {
            g.at(perm[i], perm[j]).clone()
        });
        SymplecticMatrix::new(permuted, q * n)
    }
}

/// The elementary Clifford gate set. Row/column indices are zero-based into
/// the 2q coordinates; `i`, `j` index the first half.
#[derive(Clone, Debug)]
pub enum ElementaryGate {
    /// Single-site Fourier gate on qudit `i`.
    Hadamard { i: usize },
    /// Controlled phase on qudit `i` with selfadjoint polynomial `f = bar f`.
    ControlPhase { i: usize, f: LaurentPoly },
    /// Controlled X from qudit `i` to `j != i` with any polynomial `a`.
    ControlX { i: usize, j: usize, a: LaurentPoly },
    /// Single-qudit rescaling by a unit monomial `c`.
    Scale { i: usize, c: LaurentPoly },
}

/// I + f * e_{a,b}.
fn elem(ring: &Ring, n: usize, a: usize, b: usize, f: &LaurentPoly) -> PolyMatrix {
    let mut m = PolyMatrix::identity(ring, n);
    let cur = m.at(a, b).checked_add(f).unwrap();
    m.set(a, b, cur);
    m
}

/// The symplectic matrix of one elementary gate for q qudits per site.
pub fn gate_matrix(ring: &Ring, q: usize, gate: &ElementaryGate) -> Result<SymplecticMatrix> {
    let n = 2 * q;
    let mat = match gate {
        ElementaryGate::Hadamard { i } => {
            if *i >= q {
                return Err(CaError::Domain(format!("gate index {i} out of range")));
            }
            let m1 = LaurentPoly::constant(ring, -1);
            let p1 = LaurentPoly::one(ring);
            elem(ring, n, *i, i + q, &m1)
                .mul(&elem(ring, n, i + q, *i, &p1))?
                .mul(&elem(ring, n, *i, i + q, &m1))?
        }
        ElementaryGate::ControlPhase { i, f } => {
            if *i >= q {
                return Err(CaError::Domain(format!("gate index {i} out of range")));
            }
            if f.bar() != *f {
                return Err(CaError::Domain(format!(
                    "control-phase polynomial {f} is not selfadjoint"
                )));
            }
            elem(ring, n, i + q, *i, f)
        }
        ElementaryGate::ControlX { i, j, a } => {
            if *i >= q || *j >= q || i == j {
                return Err(CaError::Domain(format!(
                    "control-X indices ({i}, {j}) out of range"
                )));
            }
            elem(ring, n, *i, *j, a).mul(&elem(ring, n, j + q, i + q, &a.bar().neg()))?
        }
        ElementaryGate::Scale { i, c } => {
            if *i >= q {
                return Err(CaError::Domain(format!("gate index {i} out of range")));
            }
            let cinv_bar = c.unit_inverse()?.bar();
            let one = LaurentPoly::one(ring);
            elem(ring, n, *i, *i, &c.checked_sub(&one)?)
                .mul(&elem(ring, n, i + q, i + q, &cinv_bar.checked_sub(&one)?))?
        }
    };
    SymplecticMatrix::new(mat, q)
}

/// Compose a word of gates, leftmost applied last.
pub fn circuit(ring: &Ring, q: usize, gates: &[ElementaryGate]) -> Result<SymplecticMatrix> {
    let mut acc = SymplecticMatrix::identity(ring, q);
    for g in gates {
        acc = acc.compose(&gate_matrix(ring, q, g)?)?;
    }
    Ok(acc)
}

/// A translation-invariant Pauli operator: a column over R^{2q}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliVector {
    col: PolyMatrix,
    q: usize,
}

impl PauliVector {
    pub fn new(col: PolyMatrix, q: usize) -> Result<Self> {
        if col.cols() != 1 || col.rows() != 2 * q {
            return Err(CaError::Shape(format!(
                "Pauli vector must be {}x1, got {}x{}",
                2 * q,
                col.rows(),
                col.cols()
            )));
        }
        Ok(PauliVector { col, q })
    }

    pub fn column(&self) -> &PolyMatrix {
        &self.col
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn neg(&self) -> PauliVector {
        PauliVector {
            col: self.col.neg(),
            q: self.q,
        }
    }

    pub fn apply(&self, s: &SymplecticMatrix) -> Result<PauliVector> {
        PauliVector::new(s.matrix().mul(&self.col)?, self.q)
    }

    /// The sesquilinear pairing u^dag lambda v, a scalar in R.
    pub fn pairing(&self, other: &PauliVector) -> Result<LaurentPoly> {
        if self.q != other.q {
            return Err(CaError::Shape("pairing different qudit counts".into()));
        }
        let lam = lambda(self.col.ring(), self.q);
        let m = self.col.dagger().mul(&lam)?.mul(&other.col)?;
        Ok(m.at(0, 0).clone())
    }

    /// The scalar exponent m with P Q = omega^m Q P for the finite-support
    /// operators P, Q these columns represent: the constant coefficient of
    /// the pairing.
    pub fn commutation_exponent(&self, other: &PauliVector) -> Result<FpScalar> {
        Ok(self.pairing(other)?.constant_coeff())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::RingDesc;

    fn ring(p: u64, vars: &[&str]) -> Ring {
        RingDesc::new(p, vars).unwrap()
    }

    #[test]
    fn gates_are_symplectic() {
        let r = ring(5, &["x"]);
        let x = LaurentPoly::var(&r, 0);
        let f = x.checked_add(&x.bar()).unwrap(); // x + x^-1 is selfadjoint
        let gates = [
            ElementaryGate::Hadamard { i: 0 },
            ElementaryGate::ControlPhase { i: 1, f },
            ElementaryGate::ControlX {
                i: 0,
                j: 1,
                a: x.clone(),
            },
            ElementaryGate::Scale {
                i: 1,
                c: x.mul_monomial(&[1], 3),
            },
        ];
        for g in &gates {
            gate_matrix(&r, 2, g).unwrap();
        }
        let c = circuit(&r, 2, &gates).unwrap();
        assert!(is_symplectic(c.matrix(), 2).unwrap());
        let inv = c.inverse().unwrap();
        assert_eq!(
            c.compose(&inv).unwrap().into_matrix(),
            PolyMatrix::identity(&r, 4)
        );
    }

    #[test]
    fn non_selfadjoint_phase_rejected() {
        let r = ring(5, &["x"]);
        let x = LaurentPoly::var(&r, 0);
        assert!(gate_matrix(&r, 1, &ElementaryGate::ControlPhase { i: 0, f: x }).is_err());
    }

    #[test]
    fn hadamard_swaps_with_sign() {
        let r = ring(3, &["x"]);
        let h = gate_matrix(&r, 1, &ElementaryGate::Hadamard { i: 0 }).unwrap();
        // On one qudit: e_X -> -e_Z? Check action on basis columns.
        let m = h.matrix();
        assert_eq!(*m.at(1, 0), LaurentPoly::one(&r));
        assert_eq!(*m.at(0, 1), LaurentPoly::constant(&r, -1));
        assert!(m.at(0, 0).is_zero() && m.at(1, 1).is_zero());
    }

    #[test]
    fn det_class_of_scale_gate() {
        let r = ring(5, &["x"]);
        let c = LaurentPoly::monomial(&r, &[2], 3);
        let g = gate_matrix(&r, 1, &ElementaryGate::Scale { i: 0, c: c.clone() }).unwrap();
        // det = c * bar(c)^-1 = x^4 (coefficients cancel), class x^2.
        let cls = g.det_class().unwrap().unwrap();
        assert_eq!(cls, LaurentPoly::monomial(&r, &[2], 1));
    }

    #[test]
    fn pairing_and_commutation() {
        let r = ring(5, &["x"]);
        let q = 1;
        let x = LaurentPoly::var(&r, 0);
        let u = PauliVector::new(
            PolyMatrix::new(&r, 2, 1, vec![LaurentPoly::one(&r), LaurentPoly::zero(&r)]).unwrap(),
            q,
        )
        .unwrap();
        let v = PauliVector::new(
            PolyMatrix::new(&r, 2, 1, vec![LaurentPoly::zero(&r), x.clone()]).unwrap(),
            q,
        )
        .unwrap();
        // <u, v> = x: X at origin vs Z at site 1 commute, exponent 0.
        assert_eq!(u.pairing(&v).unwrap(), x);
        assert!(u.commutation_exponent(&v).unwrap().is_zero());
        // Against Z at the origin the exponent is 1.
        let w = PauliVector::new(
            PolyMatrix::new(&r, 2, 1, vec![LaurentPoly::zero(&r), LaurentPoly::one(&r)]).unwrap(),
            q,
        )
        .unwrap();
        assert_eq!(u.commutation_exponent(&w).unwrap().value(), 1);
        // Antisymmetry: <v, u> = -bar<u, v>.
        assert_eq!(v.pairing(&u).unwrap(), u.pairing(&v).unwrap().bar().neg());
    }
}
