//! Groebner bases for submodules of free modules, position-over-term order,
//! with cofactor tracking so membership comes with an exact certificate.

use crate::error::{CaError, Result};
use crate::ring::fp::FpScalar;
use crate::ring::matrix::PolyMatrix;
use crate::ring::poly::{LaurentPoly, Ring};

use super::buchberger::Caps;
use super::order::{cmp_exps, divides, lcm_exps, MonOrder};

/// A free-module element together with its expression in the original
/// generators: `vec = sum_j cof[j] * gen_j`.
#[derive(Clone, Debug)]
struct ModElem {
    vec: Vec<LaurentPoly>,
    cof: Vec<LaurentPoly>,
}

impl ModElem {
    fn is_zero(&self) -> bool {
        self.vec.iter().all(|c| c.is_zero())
    }
}

/// Leading (position, monomial, coefficient) under POT: lower position beats
/// higher, ties broken by the monomial order.
fn leading(v: &[LaurentPoly], ord: MonOrder) -> Option<(usize, Vec<i64>, u64)> {
    let mut best: Option<(usize, Vec<i64>, u64)> = None;
    for (pos, comp) in v.iter().enumerate() {
        if comp.is_zero() {
            continue;
        }
        for (e, c) in comp.terms() {
            let better = match &best {
                None => true,
                Some((bp, be, _)) => {
                    pos < *bp
                        || (pos == *bp && cmp_exps(e, be, ord) == std::cmp::Ordering::Greater)
                }
            };
            if better {
                best = Some((pos, e.clone(), c));
            }
        }
    }
    best
}

fn sub_scaled(
    target: &mut ModElem,
    g: &ModElem,
    shift: &[i64],
    c: u64,
) -> Result<()> {
    for (t, s) in target.vec.iter_mut().zip(g.vec.iter()) {
        *t = t.checked_sub(&s.mul_monomial(shift, c as i64))?;
    }
    for (t, s) in target.cof.iter_mut().zip(g.cof.iter()) {
        *t = t.checked_sub(&s.mul_monomial(shift, c as i64))?;
    }
    Ok(())
}

/// Groebner basis of the column span of `gens` (a list of column vectors),
/// every element carrying cofactors in the original generators.
pub struct ModuleBasis {
    ring: Ring,
    rows: usize,
    ngens: usize,
    elems: Vec<ModElem>,
    ord: MonOrder,
}

impl ModuleBasis {
    /// Build from the columns of `m`; all entries must be polynomial.
    pub fn new(m: &PolyMatrix, ord: MonOrder, caps: &Caps) -> Result<ModuleBasis> {
        let ring = m.ring().clone();
        let rows = m.rows();
        let ngens = m.cols();
        let mut elems: Vec<ModElem> = Vec::new();
        for j in 0..ngens {
            let vec: Vec<LaurentPoly> = (0..rows).map(|i| m.at(i, j).clone()).collect();
            for c in &vec {
                if !c.is_poly() {
                    return Err(CaError::Precondition(
                        "module generators must be polynomial; clear denominators first".into(),
                    ));
                }
            }
            let mut cof = vec![LaurentPoly::zero(&ring); ngens];
            cof[j] = LaurentPoly::one(&ring);
            let e = ModElem { vec, cof };
            if !e.is_zero() {
                elems.push(e);
            }
        }
        let mut basis = ModuleBasis {
            ring,
            rows,
            ngens,
            elems,
            ord,
        };
        basis.complete(caps)?;
        Ok(basis)
    }

    fn complete(&mut self, caps: &Caps) -> Result<()> {
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for i in 0..self.elems.len() {
            for j in i + 1..self.elems.len() {
                pairs.push((i, j));
            }
        }
        let mut processed = 0usize;
        while let Some((i, j)) = pairs.pop() {
            processed += 1;
            if processed > caps.max_pairs {
                return Err(CaError::ResourceCap(format!(
                    "module pair limit {} exceeded",
                    caps.max_pairs
                )));
            }
            let (pi, ei, ci) = leading(&self.elems[i].vec, self.ord).unwrap();
            let (pj, ej, cj) = leading(&self.elems[j].vec, self.ord).unwrap();
            if pi != pj {
                continue;
            }
            let p = self.ring.p();
            let l = lcm_exps(&ei, &ej);
            let si: Vec<i64> = l.iter().zip(ei.iter()).map(|(a, b)| a - b).collect();
            let sj: Vec<i64> = l.iter().zip(ej.iter()).map(|(a, b)| a - b).collect();
            let ci_inv = FpScalar::reduced(ci as i64, p).inv()?.value();
            let cj_inv = FpScalar::reduced(cj as i64, p).inv()?.value();
            let mut s = ModElem {
                vec: self.elems[i]
                    .vec
                    .iter()
                    .map(|c| c.mul_monomial(&si, ci_inv as i64))
                    .collect(),
                cof: self.elems[i]
                    .cof
                    .iter()
                    .map(|c| c.mul_monomial(&si, ci_inv as i64))
                    .collect(),
            };
            sub_scaled(&mut s, &self.elems[j], &sj, cj_inv)?;
            // Reuse sub_scaled with coefficient: s = g_i/lt - g_j/lt done above.
            let r = self.reduce_elem(s)?;
            if r.0.is_zero() {
                continue;
            }
            let k = self.elems.len();
            if k + 1 > caps.max_basis {
                return Err(CaError::ResourceCap(format!(
                    "module basis size limit {} exceeded",
                    caps.max_basis
                )));
            }
            for i in 0..k {
                pairs.push((i, k));
            }
            self.elems.push(r.0);
        }
        Ok(())
    }

    /// Fully reduce an element, keeping cofactors in sync; the element minus
    /// its normal form always stays in the span of the basis.
    fn reduce_elem(&self, mut work: ModElem) -> Result<(ModElem, Vec<LaurentPoly>)> {
        let p = self.ring.p();
        let mut nf: Vec<LaurentPoly> = vec![LaurentPoly::zero(&self.ring); self.rows];
        'outer: while let Some((pos, e, c)) = leading(&work.vec, self.ord) {
            for g in &self.elems {
                let (gp, ge, gc) = leading(&g.vec, self.ord).unwrap();
                if gp == pos && divides(&ge, &e) {
                    let shift: Vec<i64> = e.iter().zip(ge.iter()).map(|(a, b)| a - b).collect();
                    let coef = FpScalar::reduced(c as i64, p)
                        .mul(&FpScalar::reduced(gc as i64, p).inv()?)?;
                    sub_scaled(&mut work, g, &shift, coef.value())?;
                    continue 'outer;
                }
            }
            let term = LaurentPoly::monomial(&self.ring, &e, c as i64);
            nf[pos] = nf[pos].checked_add(&term)?;
            work.vec[pos] = work.vec[pos].checked_sub(&term)?;
        }
        let cof = work.cof.clone();
        work.vec = nf.clone();
        Ok((
            ModElem {
                vec: nf,
                cof: work.cof,
            },
            cof,
        ))
    }

    /// If `v` lies in the span, return cofactors `c` with `gens * c = v`.
    pub fn membership(&self, v: &[LaurentPoly]) -> Result<Option<Vec<LaurentPoly>>> {
        if v.len() != self.rows {
            return Err(CaError::Shape("membership vector length".into()));
        }
        for c in v {
            if !c.is_poly() {
                return Err(CaError::Precondition(
                    "membership target must be polynomial".into(),
                ));
            }
        }
        let work = ModElem {
            vec: v.to_vec(),
            cof: vec![LaurentPoly::zero(&self.ring); self.ngens],
        };
        let (nf, cof) = self.reduce_elem(work)?;
        if !nf.is_zero() {
            return Ok(None);
        }
        // v reduced to zero: v = -sum cof_j gen_j, so negate.
        Ok(Some(cof.iter().map(|c| c.neg()).collect()))
    }
}
