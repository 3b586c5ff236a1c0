//! Buchberger's algorithm over the polynomial subring of F_p[x^±].
//!
//! All inputs here must have nonnegative exponents; Laurent ideals enter
//! through the clearing-and-saturation transfer in the parent module.

use crate::error::{CaError, Result};
use crate::ring::fp::FpScalar;
use crate::ring::poly::LaurentPoly;

use super::order::{cmp_exps, divides, lcm_exps, MonOrder};

/// Resource caps for basis computations. Hitting any cap is an error, not a
/// wrong answer.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub max_basis: usize,
    pub max_pairs: usize,
    pub max_degree: i64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_basis: 2000,
            max_pairs: 200_000,
            max_degree: 120,
        }
    }
}

/// Leading term of a nonzero polynomial under the given order.
pub fn leading_term(f: &LaurentPoly, ord: MonOrder) -> (Vec<i64>, u64) {
    let mut best: Option<(Vec<i64>, u64)> = None;
    for (e, c) in f.terms() {
        match &best {
            None => best = Some((e.clone(), c)),
            Some((be, _)) => {
                if cmp_exps(e, be, ord) == std::cmp::Ordering::Greater {
                    best = Some((e.clone(), c));
                }
            }
        }
    }
    best.expect("leading term of zero polynomial")
}

fn total_degree(f: &LaurentPoly) -> i64 {
    f.terms().map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
}

/// Full normal form of `f` modulo `basis`.
pub fn reduce(f: &LaurentPoly, basis: &[LaurentPoly], ord: MonOrder) -> Result<LaurentPoly> {
    let ring = f.ring().clone();
    let p = ring.p();
    let mut work = f.clone();
    let mut out = LaurentPoly::zero(&ring);
    while !work.is_zero() {
        let (le, lc) = leading_term(&work, ord);
        let mut reduced = false;
        for g in basis {
            if g.is_zero() {
                continue;
            }
            let (ge, gc) = leading_term(g, ord);
            if divides(&ge, &le) {
                let shift: Vec<i64> = le.iter().zip(ge.iter()).map(|(a, b)| a - b).collect();
                let coef = FpScalar::reduced(lc as i64, p)
                    .mul(&FpScalar::reduced(gc as i64, p).inv()?)?;
                let sub = g.mul_monomial(&shift, coef.value() as i64);
                work = work.checked_sub(&sub)?;
                reduced = true;
                break;
            }
        }
        if !reduced {
            let term = LaurentPoly::monomial(&ring, &le, lc as i64);
            out = out.checked_add(&term)?;
            work = work.checked_sub(&term)?;
        }
    }
    Ok(out)
}

fn s_poly(f: &LaurentPoly, g: &LaurentPoly, ord: MonOrder) -> Result<LaurentPoly> {
    let p = f.ring().p();
    let (fe, fc) = leading_term(f, ord);
    let (ge, gc) = leading_term(g, ord);
    let l = lcm_exps(&fe, &ge);
    let sf: Vec<i64> = l.iter().zip(fe.iter()).map(|(a, b)| a - b).collect();
    let sg: Vec<i64> = l.iter().zip(ge.iter()).map(|(a, b)| a - b).collect();
    let fc_inv = FpScalar::reduced(fc as i64, p).inv()?;
    let gc_inv = FpScalar::reduced(gc as i64, p).inv()?;
    let a = f.mul_monomial(&sf, fc_inv.value() as i64);
    let b = g.mul_monomial(&sg, gc_inv.value() as i64);
    a.checked_sub(&b)
}

/// Reduced Groebner basis of the ideal generated by `gens` (all polynomial).
pub fn groebner_basis(
    gens: &[LaurentPoly],
    ord: MonOrder,
    caps: &Caps,
) -> Result<Vec<LaurentPoly>> {
    let mut basis: Vec<LaurentPoly> = Vec::new();
    for g in gens {
        if !g.is_poly() {
            return Err(CaError::Precondition(
                "Groebner input has negative exponents; clear denominators first".into(),
            ));
        }
        if !g.is_zero() {
            basis.push(g.clone());
        }
    }
    if basis.is_empty() {
        return Ok(basis);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pairs.push((i, j));
        }
    }
    let mut processed = 0usize;
    while let Some((i, j)) = pairs.pop() {
        processed += 1;
        if processed > caps.max_pairs {
            return Err(CaError::ResourceCap(format!(
                "Groebner pair limit {} exceeded",
                caps.max_pairs
            )));
        }
        let (fe, _) = leading_term(&basis[i], ord);
        let (ge, _) = leading_term(&basis[j], ord);
        // Product criterion: coprime leading monomials reduce to zero.
        if fe.iter().zip(ge.iter()).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let s = s_poly(&basis[i], &basis[j], ord)?;
        let r = reduce(&s, &basis, ord)?;
        if r.is_zero() {
            continue;
        }
        if total_degree(&r) > caps.max_degree {
            return Err(CaError::ResourceCap(format!(
                "Groebner degree limit {} exceeded",
                caps.max_degree
            )));
        }
        let k = basis.len();
        if k + 1 > caps.max_basis {
            return Err(CaError::ResourceCap(format!(
                "Groebner basis size limit {} exceeded",
                caps.max_basis
            )));
        }
        for i in 0..k {
            pairs.push((i, k));
        }
        basis.push(r);
    }
    Ok(reduce_basis(&basis, ord)?)
}

/// Inter-reduce and normalize a basis: minimal, monic, fully reduced tails.
fn reduce_basis(basis: &[LaurentPoly], ord: MonOrder) -> Result<Vec<LaurentPoly>> {
    let mut kept: Vec<LaurentPoly> = Vec::new();
    for (i, f) in basis.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let (fe, _) = leading_term(f, ord);
        let redundant = basis.iter().enumerate().any(|(j, g)| {
            if i == j || g.is_zero() {
                return false;
            }
            let (ge, _) = leading_term(g, ord);
            divides(&ge, &fe) && (ge != fe || j < i)
        });
        if !redundant {
            kept.push(f.clone());
        }
    }
    let mut out = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let others: Vec<LaurentPoly> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let r = reduce(&kept[i], &others, ord)?;
        if r.is_zero() {
            continue;
        }
        let p = r.ring().p();
        let (_, lc) = leading_term(&r, ord);
        let inv = FpScalar::reduced(lc as i64, p).inv()?;
        out.push(r.mul_monomial(&vec![0; r.ring().num_vars()], inv.value() as i64));
    }
    // Canonical output order: sort by leading monomial.
    out.sort_by(|a, b| {
        let (ae, _) = leading_term(a, ord);
        let (be, _) = leading_term(b, ord);
        cmp_exps(&ae, &be, ord)
    });
    Ok(out)
}

/// Does the basis (of a polynomial ideal) contain a nonzero constant?
pub fn basis_is_unit(basis: &[LaurentPoly]) -> bool {
    basis.iter().any(|f| {
        f.num_terms() == 1 && f.terms().all(|(e, _)| e.iter().all(|&k| k == 0))
    })
}
