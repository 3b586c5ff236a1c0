//! Laurent polynomials over F_p in finitely many variables.
//!
//! Terms are kept in a sorted map keyed by exponent vector (lexicographic
//! order on `Vec<i64>`), which makes every polynomial canonical and the
//! serialization byte-deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{CaError, Result};
use crate::ring::fp::{is_prime, FpScalar};

/// Ring descriptor: the prime modulus and the ordered list of variable names.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct RingDesc {
    p: u64,
    vars: Vec<String>,
}

/// Shared handle to a ring descriptor.
pub type Ring = Arc<RingDesc>;

impl RingDesc {
    pub fn new(p: u64, vars: &[&str]) -> Result<Ring> {
        if !is_prime(p) {
            return Err(CaError::Domain(format!("{p} is not prime")));
        }
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        for (i, a) in names.iter().enumerate() {
            if names[i + 1..].contains(a) {
                return Err(CaError::Domain(format!("duplicate variable name {a}")));
            }
        }
        Ok(Arc::new(RingDesc { p, vars: names }))
    }

    pub fn new_owned(p: u64, vars: Vec<String>) -> Result<Ring> {
        let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        RingDesc::new(p, &refs)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Descriptor with one variable removed (for boundary splits).
    pub fn without_var(&self, axis: usize) -> Result<Ring> {
        if axis >= self.vars.len() {
            return Err(CaError::Domain(format!("axis {axis} out of range")));
        }
        let mut vars = self.vars.clone();
        vars.remove(axis);
        RingDesc::new_owned(self.p, vars)
    }

    /// Descriptor with a variable appended at the end.
    pub fn with_var(&self, name: &str) -> Result<Ring> {
        let mut vars = self.vars.clone();
        vars.push(name.to_string());
        RingDesc::new_owned(self.p, vars)
    }

    /// Descriptor with the axis variable renamed (coarse-graining convention).
    pub fn rename_var(&self, axis: usize, name: &str) -> Result<Ring> {
        let mut vars = self.vars.clone();
        vars[axis] = name.to_string();
        RingDesc::new_owned(self.p, vars)
    }

    pub fn same(a: &Ring, b: &Ring) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    pub fn require_same(a: &Ring, b: &Ring) -> Result<()> {
        if RingDesc::same(a, b) {
            Ok(())
        } else {
            Err(CaError::RingMismatch(format!(
                "F_{}[{}] vs F_{}[{}]",
                a.p,
                a.vars.join(","),
                b.p,
                b.vars.join(",")
            )))
        }
    }
}

/// An exponent vector; negative entries are allowed.
pub type Exps = Vec<i64>;

/// Which binary operation `poly_arith` performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Exact multivariate Laurent polynomial over F_p.
///
/// Invariants: no stored coefficient is zero mod p, every exponent vector has
/// length `ring.num_vars()`, coefficients lie in `[1, p)`.
#[derive(Clone)]
pub struct LaurentPoly {
    ring: Ring,
    terms: BTreeMap<Exps, u64>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        RingDesc::same(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for LaurentPoly {}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl LaurentPoly {
    pub fn zero(ring: &Ring) -> Self {
        LaurentPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: &Ring, c: i64) -> Self {
        Self::monomial(ring, &vec![0; ring.num_vars()], c)
    }

    /// The single term `c * x^e`.
    pub fn monomial(ring: &Ring, exps: &[i64], c: i64) -> Self {
        assert_eq!(exps.len(), ring.num_vars(), "exponent vector length");
        let c = FpScalar::reduced(c, ring.p());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps.to_vec(), c.value());
        }
        LaurentPoly {
            ring: ring.clone(),
            terms,
        }
    }

    /// The variable with the given index.
    pub fn var(ring: &Ring, idx: usize) -> Self {
        let mut e = vec![0; ring.num_vars()];
        e[idx] = 1;
        Self::monomial(ring, &e, 1)
    }

    /// Build from a term list; repeated exponent vectors accumulate.
    pub fn from_terms(ring: &Ring, terms: &[(Vec<i64>, i64)]) -> Self {
        let mut out = Self::zero(ring);
        for (e, c) in terms {
            out.add_term(e, *c);
        }
        out
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&vec![0; self.ring.num_vars()])
                .is_some_and(|&c| c == 1)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, u64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coeff(&self, exps: &[i64]) -> u64 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    /// Constant-monomial coefficient.
    pub fn constant_coeff(&self) -> FpScalar {
        FpScalar::reduced(
            self.coeff(&vec![0; self.ring.num_vars()]) as i64,
            self.p(),
        )
    }

    pub(crate) fn add_term(&mut self, exps: &[i64], c: i64) {
        assert_eq!(exps.len(), self.ring.num_vars(), "exponent vector length");
        let p = self.p();
        let c = FpScalar::reduced(c, p);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps.to_vec()).or_insert(0);
        *entry = (*entry + c.value()) % p;
        if *entry == 0 {
            self.terms.remove(exps);
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        RingDesc::require_same(&self.ring, &other.ring)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c as i64);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        RingDesc::require_same(&self.ring, &other.ring)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, -(c as i64));
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        RingDesc::require_same(&self.ring, &other.ring)?;
        let mut out = Self::zero(&self.ring);
        let p = self.p();
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(&e, (ca * cb % p) as i64);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(&self.ring);
        for (e, c) in self.terms() {
            out.add_term(e, -(c as i64));
        }
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Self::zero(&self.ring);
        for (e, t) in self.terms() {
            out.add_term(e, t as i64 * (((c % self.p() as i64) + self.p() as i64) % self.p() as i64));
        }
        out
    }

    /// Multiply by the monomial `c * x^shift`.
    pub fn mul_monomial(&self, shift: &[i64], c: i64) -> Self {
        let mut out = Self::zero(&self.ring);
        for (e, t) in self.terms() {
            let ne: Vec<i64> = e.iter().zip(shift).map(|(a, b)| a + b).collect();
            out.add_term(&ne, t as i64);
        }
        out.scale(c)
    }

    /// The involution: every variable is inverted, coefficients fixed.
    pub fn bar(&self) -> Self {
        let mut out = Self::zero(&self.ring);
        for (e, c) in self.terms() {
            let ne: Vec<i64> = e.iter().map(|a| -a).collect();
            out.add_term(&ne, c as i64);
        }
        out
    }

    /// Is this a unit, i.e. a single term `c * x^e` with `c != 0`?
    pub fn as_unit(&self) -> Option<(FpScalar, Exps)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        Some((FpScalar::reduced(*c as i64, self.p()), e.clone()))
    }

    /// Inverse of a unit monomial.
    pub fn unit_inverse(&self) -> Result<Self> {
        let (c, e) = self
            .as_unit()
            .ok_or_else(|| CaError::Domain(format!("{self} is not a unit monomial")))?;
        let ci = c.inv()?;
        let ne: Vec<i64> = e.iter().map(|a| -a).collect();
        Ok(Self::monomial(&self.ring, &ne, ci.value() as i64))
    }

    /// Per-variable exponent range over all terms, `None` when zero.
    pub fn exp_range(&self, var: usize) -> Option<(i64, i64)> {
        let mut range: Option<(i64, i64)> = None;
        for (e, _) in self.terms() {
            let v = e[var];
            range = Some(match range {
                None => (v, v),
                Some((lo, hi)) => (lo.min(v), hi.max(v)),
            });
        }
        range
    }

    /// Coefficient of `x_axis^k`, as a polynomial over the ring with that
    /// variable removed.
    pub fn var_coeff(&self, axis: usize, k: i64) -> Result<Self> {
        let sub = self.ring.without_var(axis)?;
        let mut out = Self::zero(&sub);
        for (e, c) in self.terms() {
            if e[axis] == k {
                let mut ne = e.clone();
                ne.remove(axis);
                out.add_term(&ne, c as i64);
            }
        }
        Ok(out)
    }

    /// Embed into a ring with one more variable, inserted at `axis`.
    pub fn insert_var(&self, target: &Ring, axis: usize) -> Self {
        let mut out = Self::zero(target);
        for (e, c) in self.terms() {
            let mut ne = e.clone();
            ne.insert(axis, 0);
            out.add_term(&ne, c as i64);
        }
        out
    }

    /// Evaluate at a point of the torus (all coordinates nonzero).
    pub fn eval(&self, point: &[FpScalar]) -> Result<FpScalar> {
        if point.len() != self.ring.num_vars() {
            return Err(CaError::Shape("evaluation point arity".into()));
        }
        let p = self.p();
        let mut acc = FpScalar::zero(p);
        for (e, c) in self.terms() {
            let mut t = FpScalar::reduced(c as i64, p);
            for (x, &k) in point.iter().zip(e.iter()) {
                let f = if k >= 0 {
                    x.pow(k as u64)
                } else {
                    x.inv()?.pow((-k) as u64)
                };
                t = t.mul(&f)?;
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Substitute each variable by the given Laurent polynomial over a target
    /// ring. Negative exponents require the images to be unit monomials.
    pub fn substitute(&self, target: &Ring, images: &[LaurentPoly]) -> Result<Self> {
        if images.len() != self.ring.num_vars() {
            return Err(CaError::Shape("substitution arity".into()));
        }
        let mut acc = Self::zero(target);
        for (e, c) in self.terms() {
            let mut t = Self::constant(target, c as i64);
            for (img, &k) in images.iter().zip(e.iter()) {
                let f = if k >= 0 {
                    img.pow(k as u64)?
                } else {
                    img.unit_inverse()?.pow((-k) as u64)?
                };
                t = t.checked_mul(&f)?;
            }
            acc = acc.checked_add(&t)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u64) -> Result<Self> {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// Minimal monomial shift making every exponent nonnegative.
    pub fn clearing_shift(&self) -> Exps {
        let d = self.ring.num_vars();
        let mut shift = vec![0i64; d];
        for (e, _) in self.terms() {
            for (s, &k) in shift.iter_mut().zip(e.iter()) {
                if k < *s {
                    *s = k;
                }
            }
        }
        shift.iter().map(|s| -s).collect()
    }

    /// Shifted into the polynomial subring (no negative exponents).
    pub fn to_poly_subring(&self) -> Self {
        self.mul_monomial(&self.clearing_shift(), 1)
    }

    /// True when no exponent is negative.
    pub fn is_poly(&self) -> bool {
        self.terms().all(|(e, _)| e.iter().all(|&k| k >= 0))
    }

    /// Exact division; errors when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Self) -> Result<Self> {
        RingDesc::require_same(&self.ring, &other.ring)?;
        if other.is_zero() {
            return Err(CaError::Domain("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let p = self.p();
        // Exact quotients live in a known exponent box: per variable, leading
        // and trailing terms of a product never cancel, so the quotient range
        // is the difference of the operand ranges.
        let d = self.ring.num_vars();
        let mut qlo = vec![0i64; d];
        let mut qhi = vec![0i64; d];
        for i in 0..d {
            let (alo, ahi) = self.exp_range(i).unwrap();
            let (blo, bhi) = other.exp_range(i).unwrap();
            qlo[i] = alo - blo;
            qhi[i] = ahi - bhi;
            if qlo[i] > qhi[i] {
                return Err(CaError::Domain("inexact division".into()));
            }
        }
        // Leading term under lex (the last map entry).
        let (le, lc) = other.terms.iter().next_back().unwrap();
        let lc_inv = FpScalar::reduced(*lc as i64, p).inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.ring);
        while !rem.is_zero() {
            let (re, rc) = {
                let (e, c) = rem.terms.iter().next_back().unwrap();
                (e.clone(), *c)
            };
            let qe: Vec<i64> = re.iter().zip(le.iter()).map(|(a, b)| a - b).collect();
            if qe
                .iter()
                .enumerate()
                .any(|(i, &k)| k < qlo[i] || k > qhi[i])
            {
                return Err(CaError::Domain("inexact division".into()));
            }
            let qc = FpScalar::reduced(rc as i64, p).mul(&lc_inv)?;
            let qterm = Self::monomial(&self.ring, &qe, qc.value() as i64);
            let prod = qterm.checked_mul(other)?;
            let next = rem.checked_sub(&prod)?;
            // Lex-leading term must strictly drop, otherwise not divisible.
            if let Some((ne, _)) = next.terms.iter().next_back() {
                if ne >= &re {
                    return Err(CaError::Domain("inexact division".into()));
                }
            }
            quot = quot.checked_add(&qterm)?;
            rem = next;
        }
        Ok(quot)
    }
}

/// Single dispatch point for binary arithmetic.
pub fn poly_arith(a: &LaurentPoly, b: &LaurentPoly, which: PolyOp) -> Result<LaurentPoly> {
    match which {
        PolyOp::Add => a.checked_add(b),
        PolyOp::Sub => a.checked_sub(b),
        PolyOp::Mul => a.checked_mul(b),
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, vars: &[String], e: &[i64], c: u64, first: bool) -> fmt::Result {
    if !first {
        write!(f, " + ")?;
    }
    let trivial = e.iter().all(|&k| k == 0);
    if c != 1 || trivial {
        write!(f, "{c}")?;
        if !trivial {
            write!(f, "*")?;
        }
    }
    let mut started = false;
    for (name, &k) in vars.iter().zip(e.iter()) {
        if k == 0 {
            continue;
        }
        if started {
            write!(f, "*")?;
        }
        started = true;
        if k == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{k}")?;
        }
    }
    Ok(())
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            fmt_term(f, self.ring.vars(), e, c, first)?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, vars: &[&str]) -> Ring {
        RingDesc::new(p, vars).unwrap()
    }

    #[test]
    fn additive_inverse_cancels() {
        // (y-1) + (1-y) = 0 over F_3[y^±]
        let r = ring(3, &["y"]);
        let a = LaurentPoly::from_terms(&r, &[(vec![1], 1), (vec![0], -1)]);
        let b = LaurentPoly::from_terms(&r, &[(vec![0], 1), (vec![1], -1)]);
        assert!(poly_arith(&a, &b, PolyOp::Add).unwrap().is_zero());
    }

    #[test]
    fn laurent_product_reduces() {
        // (y-1)(y^-1 - 1) = 2 - y - y^-1 over F_5
        let r = ring(5, &["y"]);
        let a = LaurentPoly::from_terms(&r, &[(vec![1], 1), (vec![0], -1)]);
        let b = LaurentPoly::from_terms(&r, &[(vec![-1], 1), (vec![0], -1)]);
        let expect =
            LaurentPoly::from_terms(&r, &[(vec![0], 2), (vec![1], -1), (vec![-1], -1)]);
        assert_eq!(poly_arith(&a, &b, PolyOp::Mul).unwrap(), expect);
    }

    #[test]
    fn unit_cancellation() {
        // x * x^-1 = 1 over F_7
        let r = ring(7, &["x"]);
        let x = LaurentPoly::var(&r, 0);
        let xi = x.unit_inverse().unwrap();
        assert!(x.checked_mul(&xi).unwrap().is_one());
    }

    #[test]
    fn ring_mismatch_is_error() {
        let a = LaurentPoly::one(&ring(3, &["x"]));
        let b = LaurentPoly::one(&ring(5, &["x"]));
        assert!(poly_arith(&a, &b, PolyOp::Add).is_err());
    }

    #[test]
    fn bar_is_involutive() {
        let r = ring(5, &["x", "y"]);
        let a = LaurentPoly::from_terms(&r, &[(vec![2, -1], 3), (vec![0, 1], 1)]);
        assert_eq!(a.bar().bar(), a);
    }

    #[test]
    fn exact_division() {
        let r = ring(7, &["x", "y"]);
        let a = LaurentPoly::from_terms(&r, &[(vec![1, 0], 1), (vec![0, 1], -1)]);
        let b = LaurentPoly::from_terms(&r, &[(vec![1, 1], 2), (vec![0, 0], 5)]);
        let prod = a.checked_mul(&b).unwrap();
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        let bad = prod.checked_add(&LaurentPoly::one(&r)).unwrap();
        assert!(bad.div_exact(&a).is_err());
    }

    #[test]
    fn display_pretty() {
        let r = ring(3, &["x", "y"]);
        let a = LaurentPoly::from_terms(&r, &[(vec![0, 0], 2), (vec![1, -1], 2), (vec![0, 1], 1)]);
        assert_eq!(format!("{a}"), "2 + y + 2*x*y^-1");
    }
}
