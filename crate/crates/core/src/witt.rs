//! Witt-group machinery for antihermitian forms: congruence witnesses,
//! explicit inverses and exponent bounds, constructive reduction over F_p and
//! F_p[x^±], and reconstruction of a QCA from a boundary form.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boundary::{free_basis, validate_form};
use crate::error::{CaError, Result};
use crate::groebner::Caps;
use crate::ring::fp::FpScalar;
use crate::ring::fpmat::FpMatrix;
use crate::ring::matrix::PolyMatrix;
use crate::ring::poly::{LaurentPoly, Ring};
use crate::symplectic::{lambda, SymplecticMatrix};

/// An invertible antihermitian form with zero constant terms on the diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntihermitianForm {
    xi: PolyMatrix,
}

impl AntihermitianForm {
    pub fn new(xi: PolyMatrix) -> Result<Self> {
        if xi.rows() % 2 != 0 {
            return Err(CaError::Domain(
                "antihermitian forms with zero constant diagonal have even dimension".into(),
            ));
        }
        validate_form(&xi)?;
        Ok(AntihermitianForm { xi })
    }

    /// The standard hyperbolic form lambda_n.
    pub fn hyperbolic(ring: &Ring, n: usize) -> Self {
        AntihermitianForm {
            xi: lambda(ring, n),
        }
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.xi
    }

    pub fn ring(&self) -> &Ring {
        self.xi.ring()
    }

    pub fn dimension(&self) -> usize {
        self.xi.rows()
    }

    /// The matrix inverse, which is again a valid form.
    pub fn inverse(&self) -> Result<AntihermitianForm> {
        AntihermitianForm::new(self.xi.inverse()?)
    }

    pub fn direct_sum(&self, other: &AntihermitianForm) -> Result<AntihermitianForm> {
        AntihermitianForm::new(self.xi.direct_sum(&other.xi)?)
    }
}

/// An invertible E with dagger(E) * source * E = target, re-verified on
/// construction.
#[derive(Clone, Debug)]
pub struct CongruenceWitness {
    pub e: PolyMatrix,
    pub source: PolyMatrix,
    pub target: PolyMatrix,
}

impl CongruenceWitness {
    pub fn new(e: PolyMatrix, source: PolyMatrix, target: PolyMatrix) -> Result<Self> {
        let got = e.dagger().mul(&source)?.mul(&e)?;
        if got != target {
            return Err(CaError::Internal(
                "congruence witness failed re-verification".into(),
            ));
        }
        let det = e.determinant()?;
        if det.as_unit().is_none() {
            return Err(CaError::Internal("congruence witness is not invertible".into()));
        }
        Ok(CongruenceWitness { e, source, target })
    }

    /// Composition: first `self`, then `next` (whose source is our target).
    pub fn then(&self, next: &CongruenceWitness) -> Result<CongruenceWitness> {
        if self.target != next.source {
            return Err(CaError::Shape("witness chain mismatch".into()));
        }
        CongruenceWitness::new(self.e.mul(&next.e)?, self.source.clone(), next.target.clone())
    }
}

/// Split an antihermitian scalar h = s - dagger(s). The constant term of h is
/// zero (forced when p is odd; required input otherwise), and the positive-lex
/// half of the support goes to s.
pub fn msplit_scalar(h: &LaurentPoly) -> Result<LaurentPoly> {
    if h.checked_add(&h.bar())?.is_zero() == false {
        return Err(CaError::Domain(format!("{h} is not antihermitian")));
    }
    let zero = vec![0i64; h.ring().num_vars()];
    let mut s = LaurentPoly::zero(h.ring());
    for (e, c) in h.terms() {
        if *e == zero {
            return Err(CaError::Domain(format!(
                "{h} has a nonzero constant term and cannot be split"
            )));
        }
        if e.iter().find(|&&k| k != 0).is_some_and(|&k| k > 0) {
            s.add_term(e, c as i64);
        }
    }
    let check = s.checked_sub(&s.bar())?;
    if check != *h {
        return Err(CaError::Internal("monomial split failed".into()));
    }
    Ok(s)
}

/// M with Xi = M - dagger(M): upper triangle kept, diagonal split monomially.
pub fn msplit(xi: &PolyMatrix) -> Result<PolyMatrix> {
    let ring = xi.ring().clone();
    let n = xi.rows();
    let mut m = PolyMatrix::zero(&ring, n, n);
    for i in 0..n {
        for j in 0..n {
            if i < j {
                m.set(i, j, xi.at(i, j).clone());
            } else if i == j {
                m.set(i, i, msplit_scalar(xi.at(i, i))?);
            }
        }
    }
    let check = m.sub(&m.dagger())?;
    if check != *xi {
        return Err(CaError::Internal("M-split failed re-verification".into()));
    }
    Ok(m)
}

/// Witness from Xi (+) Xi^-1 to the hyperbolic form:
/// E = [[I, Xi^-1],[0, I]] * [[I, 0],[-M, I]] with Xi = M - dagger(M).
pub fn inverse_witness(x: &AntihermitianForm) -> Result<CongruenceWitness> {
    let ring = x.ring().clone();
    let n = x.dimension();
    let xi = x.matrix();
    let xi_inv = xi.inverse()?;
    let m = msplit(xi)?;
    let id = PolyMatrix::identity(&ring, n);
    let zero = PolyMatrix::zero(&ring, n, n);
    let upper = block2(&id, &xi_inv, &zero, &id)?;
    let lower = block2(&id, &zero, &m.neg(), &id)?;
    let e = upper.mul(&lower)?;
    let source = xi.direct_sum(&xi_inv)?;
    let target = lambda(&ring, n);
    CongruenceWitness::new(e, source, target)
}

fn block2(
    a: &PolyMatrix,
    b: &PolyMatrix,
    c: &PolyMatrix,
    d: &PolyMatrix,
) -> Result<PolyMatrix> {
    a.hstack(b)?.vstack(&c.hstack(d)?)
}

/// A square root of -1 in F_p when p = 1 mod 4.
pub fn sqrt_minus_one(p: u64) -> Option<FpScalar> {
    FpScalar::reduced(-1, p).sqrt().filter(|_| p % 4 == 1 || p == 2)
}

/// A solution of x^2 + y^2 + 1 = 0 over F_p, p odd.
pub fn solve_sum_of_squares(p: u64) -> Result<(FpScalar, FpScalar)> {
    if p == 2 {
        return Err(CaError::Domain("sum-of-squares solver needs odd p".into()));
    }
    for x in 0..p {
        let xs = FpScalar::reduced(x as i64, p);
        let rest = FpScalar::reduced(-1, p).sub(&xs.mul(&xs)?)?;
        if let Some(y) = rest.sqrt() {
            return Ok((xs, y));
        }
    }
    Err(CaError::Internal(format!(
        "x^2 + y^2 + 1 = 0 unexpectedly unsolvable mod {p}"
    )))
}

/// U over F_p (n = 2 or 4 columns) with U^T U equal to adjacent hyperbolic
/// pairs [[0,1],[1,0]] (+) ... , built from sqrt(-1) or a sum-of-squares pair.
fn scalar_hyperbolic_congruence(p: u64, n: usize) -> Result<FpMatrix> {
    let one = FpScalar::one(p);
    let half = FpScalar::reduced(2, p).inv()?;
    match n {
        2 => {
            let i = sqrt_minus_one(p).ok_or_else(|| {
                CaError::Domain(format!("-1 is not a square mod {p}; need n = 4"))
            })?;
            // Columns (1, i) and (1, -i)/2.
            let mut u = FpMatrix::zero(p, 2, 2);
            u.set(0, 0, one);
            u.set(1, 0, i);
            u.set(0, 1, half);
            u.set(1, 1, i.neg().mul(&half)?);
            Ok(u)
        }
        4 => {
            let (a, b) = solve_sum_of_squares(p)?;
            // Isotropic pair u1 = (1, a, b, 0), u2 = (0, -b, a, 1) for the
            // identity form; complete each to a hyperbolic pair.
            let u1 = vec![one, a, b, FpScalar::zero(p)];
            let u2 = vec![FpScalar::zero(p), b.neg(), a, one];
            let (w1, w2) = complete_hyperbolic_pairs(p, &u1, &u2)?;
            let cols = [u1, w1, u2, w2];
            Ok(FpMatrix::from_fn(p, 4, 4, |i, j| cols[j][i]))
        }
        _ => Err(CaError::Domain("exponent witness needs n = 2 or 4".into())),
    }
}

fn dot(p: u64, a: &[FpScalar], b: &[FpScalar]) -> Result<FpScalar> {
    let mut acc = FpScalar::zero(p);
    for (x, y) in a.iter().zip(b.iter()) {
        acc = acc.add(&x.mul(y)?)?;
    }
    Ok(acc)
}

/// Given isotropic u1, u2 with u1 . u2 = 0 for the identity form on F_p^4,
/// find isotropic w1, w2 with ui . wj = delta_ij and w1 . w2 = 0.
fn complete_hyperbolic_pairs(
    p: u64,
    u1: &[FpScalar],
    u2: &[FpScalar],
) -> Result<(Vec<FpScalar>, Vec<FpScalar>)> {
    let half = FpScalar::reduced(2, p).inv()?;
    // w1: u1.w = 1, u2.w = 0.
    let m1 = FpMatrix::from_fn(p, 2, 4, |i, j| if i == 0 { u1[j] } else { u2[j] });
    let w1 = m1
        .solve(&[FpScalar::one(p), FpScalar::zero(p)])
        .ok_or_else(|| CaError::Internal("hyperbolic completion solve failed".into()))?;
    // Isotropize: w1' = w1 - (w1.w1 / 2) u1 keeps both pairings.
    let c1 = dot(p, &w1, &w1)?.mul(&half)?;
    let w1: Vec<FpScalar> = w1
        .iter()
        .zip(u1.iter())
        .map(|(w, u)| w.sub(&c1.mul(u).unwrap()).unwrap())
        .collect();
    // w2: u1.w = 0, u2.w = 1, w1.w = 0.
    let rows = [u1.to_vec(), u2.to_vec(), w1.clone()];
    let m2 = FpMatrix::from_fn(p, 3, 4, |i, j| rows[i][j]);
    let w2 = m2
        .solve(&[FpScalar::zero(p), FpScalar::one(p), FpScalar::zero(p)])
        .ok_or_else(|| CaError::Internal("hyperbolic completion solve failed".into()))?;
    let c2 = dot(p, &w2, &w2)?.mul(&half)?;
    let w2: Vec<FpScalar> = w2
        .iter()
        .zip(u2.iter())
        .map(|(w, u)| w.sub(&c2.mul(u).unwrap()).unwrap())
        .collect();
    Ok((w1, w2))
}

/// Witness that I_n (x) Xi is hyperbolic, n = 2 for p = 1 mod 4 and n = 4
/// for p = 3 mod 4. Returns (n, witness).
pub fn exponent_witness(x: &AntihermitianForm) -> Result<(usize, CongruenceWitness)> {
    let ring = x.ring().clone();
    let p = ring.p();
    if p == 2 {
        return Err(CaError::Domain(
            "exponent witness requires odd characteristic".into(),
        ));
    }
    let n = if p % 4 == 1 { 2 } else { 4 };
    let r = x.dimension();
    let xi = x.matrix();
    let u = scalar_hyperbolic_congruence(p, n)?;
    // Step 1: (U (x) I_r) maps I_n (x) Xi to adjacent blocks [[0,Xi],[Xi,0]].
    let u_poly = PolyMatrix::from_fn(&ring, n, n, |i, j| {
        LaurentPoly::constant(&ring, u.at(i, j).value() as i64)
    });
    let step1 = u_poly.kron(&PolyMatrix::identity(&ring, r))?;
    // Step 2: per adjacent block, diag(I, Xi^-1) turns [[0,Xi],[Xi,0]] into
    // lambda_r.
    let xi_inv = xi.inverse()?;
    let mut step2 = PolyMatrix::identity(&ring, 0);
    for _ in 0..n / 2 {
        let blk = PolyMatrix::identity(&ring, r).direct_sum(&xi_inv)?;
        step2 = step2.direct_sum(&blk)?;
    }
    // Step 3: permute the n/2 copies of lambda_r into one lambda_{(n/2) r}.
    let copies = n / 2;
    let total = copies * 2 * r;
    let mut perm = PolyMatrix::zero(&ring, total, total);
    for c in 0..copies {
        for i in 0..r {
            // X coordinate i of copy c sits at 2rc + i, goes to rc + i.
            perm.set(2 * r * c + i, r * c + i, LaurentPoly::one(&ring));
            // Z coordinate i of copy c sits at 2rc + r + i, goes to
            // r*copies + rc + i.
            perm.set(
                2 * r * c + r + i,
                r * copies + r * c + i,
                LaurentPoly::one(&ring),
            );
        }
    }
    let e = step1.mul(&step2)?.mul(&perm)?;
    let mut source = PolyMatrix::identity(&ring, 0);
    for _ in 0..n {
        source = source.direct_sum(xi)?;
    }
    let target = lambda(&ring, copies * r);
    let w = CongruenceWitness::new(e, source, target)?;
    Ok((n, w))
}

/// Tuning knobs for the D = 1 Witt reduction.
#[derive(Clone, Copy, Debug)]
pub struct ReduceOptions {
    /// Degree cap for the exhaustive isotropic search.
    pub degree_cap: i64,
    /// Budget of vectors tried per exhaustive round before going random.
    pub search_budget: u64,
    /// Randomized search trials.
    pub random_trials: u64,
    pub seed: u64,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            degree_cap: 6,
            search_budget: 2_000_000,
            random_trials: 500_000,
            seed: 7,
        }
    }
}

/// Reduce an antihermitian form over F_p or F_p[x^±] to the hyperbolic form,
/// returning (n, witness) with dagger(E) Xi E = lambda_n.
pub fn witt_reduce_d1(x: &AntihermitianForm, opts: &ReduceOptions) -> Result<(usize, CongruenceWitness)> {
    let ring = x.ring().clone();
    if ring.num_vars() > 1 {
        return Err(CaError::Precondition(
            "Witt reduction is implemented for rings with at most one variable".into(),
        ));
    }
    let dim = x.dimension();
    let n = dim / 2;
    let e = reduce_to_lambda(x.matrix(), opts)?;
    let w = CongruenceWitness::new(e, x.matrix().clone(), lambda(&ring, n))?;
    Ok((n, w))
}

fn reduce_to_lambda(xi: &PolyMatrix, opts: &ReduceOptions) -> Result<PolyMatrix> {
    let ring = xi.ring().clone();
    let dim = xi.rows();
    if dim == 0 {
        return Ok(PolyMatrix::identity(&ring, 0));
    }
    // Strategy 1: greedy degree-width reduction to a constant form, then the
    // scalar symplectic Gram-Schmidt. Random constant rescrambles give the
    // greedy pass several starting points.
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for attempt in 0..24 {
        let (start, pre) = if attempt == 0 {
            (xi.clone(), PolyMatrix::identity(&ring, dim))
        } else {
            let g = random_constant_invertible(&ring, dim, &mut rng)?;
            (g.dagger().mul(xi)?.mul(&g)?, g)
        };
        if let Some((cform, w)) = constant_reduce(&start)? {
            let t = constant_symplectic_basis(&cform)?;
            let t_poly = PolyMatrix::from_fn(&ring, dim, dim, |i, j| {
                LaurentPoly::constant(&ring, t.at(i, j).value() as i64)
            });
            let e = pre.mul(&w)?.mul(&t_poly)?;
            return Ok(e);
        }
    }
    // Strategy 2: isotropic vector, hyperbolic pair, split, recurse.
    let v = find_isotropic(xi, opts)?;
    let v = make_primitive(&v)?;
    split_and_recurse(xi, &v, opts)
}

fn random_constant_invertible(
    ring: &Ring,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PolyMatrix> {
    let p = ring.p();
    loop {
        let m = FpMatrix::from_fn(p, n, n, |_, _| {
            FpScalar::reduced(rng.gen_range(0..p) as i64, p)
        });
        if m.inverse().is_some() {
            return Ok(PolyMatrix::from_fn(ring, n, n, |i, j| {
                LaurentPoly::constant(ring, m.at(i, j).value() as i64)
            }));
        }
    }
}

/// Per-column exponent window of the single ring variable.
fn column_windows(xi: &PolyMatrix) -> Vec<(i64, i64)> {
    let n = xi.rows();
    (0..n)
        .map(|j| {
            let mut lo = i64::MAX;
            let mut hi = i64::MIN;
            for i in 0..n {
                if let Some((l, h)) = xi.at(i, j).exp_range(0) {
                    lo = lo.min(l);
                    hi = hi.max(h);
                }
            }
            if lo > hi {
                (0, 0)
            } else {
                (lo, hi)
            }
        })
        .collect()
}

/// Zero exactly on constant matrices: column widths dominate, centered
/// windows break ties.
fn spread_measure(xi: &PolyMatrix) -> i64 {
    column_windows(xi)
        .iter()
        .map(|&(l, h)| (h - l) * 1_000_000 + (l + h).abs())
        .sum()
}

/// Try to congruence-reduce to a constant matrix by greedy local search over
/// single-column monomial shifts and extreme-coefficient kernel folds.
/// Returns the constant form (as an FpMatrix) and the accumulated congruence
/// on success.
fn constant_reduce(xi: &PolyMatrix) -> Result<Option<(FpMatrix, PolyMatrix)>> {
    let ring = xi.ring().clone();
    let n = xi.rows();
    let p = ring.p();
    let mut cur = xi.clone();
    let mut acc = PolyMatrix::identity(&ring, n);
    if ring.num_vars() == 0 {
        let c = FpMatrix::from_fn(p, n, n, |i, j| cur.at(i, j).constant_coeff());
        return Ok(Some((c, acc)));
    }
    for _ in 0..600 {
        let phi = spread_measure(&cur);
        if phi == 0 {
            let c = FpMatrix::from_fn(p, n, n, |i, j| cur.at(i, j).constant_coeff());
            return Ok(Some((c, acc)));
        }
        let mut moves: Vec<PolyMatrix> = Vec::new();
        // Single-column monomial rescalings x^{±1}; the dagger shifts the
        // matching row the opposite way.
        for j in 0..n {
            for s in [1i64, -1] {
                moves.push(PolyMatrix::from_fn(&ring, n, n, |a, b| {
                    if a == b {
                        LaurentPoly::monomial(&ring, &[if a == j { s } else { 0 }], 1)
                    } else {
                        LaurentPoly::zero(&ring)
                    }
                }));
            }
        }
        // Kernel folds of the top and bottom coefficient matrices.
        let win = column_windows(&cur);
        for top in [true, false] {
            let coeff = FpMatrix::from_fn(p, n, n, |i, j| {
                let d = if top { win[j].1 } else { win[j].0 };
                FpScalar::reduced(cur.at(i, j).coeff(&[d]) as i64, p)
            });
            for k in coeff.kernel_basis() {
                let support: Vec<usize> = (0..n).filter(|&j| !k[j].is_zero()).collect();
                if support.is_empty() {
                    continue;
                }
                // Fold into the extremal column of the support, shifting the
                // other contributions so all extreme terms align and cancel.
                let j0 = *support
                    .iter()
                    .max_by_key(|&&j| if top { win[j].1 } else { -win[j].0 })
                    .unwrap();
                let d0 = if top { win[j0].1 } else { win[j0].0 };
                moves.push(PolyMatrix::from_fn(&ring, n, n, |i, j| {
                    if j == j0 && !k[i].is_zero() {
                        let di = if top { win[i].1 } else { win[i].0 };
                        LaurentPoly::monomial(&ring, &[d0 - di], k[i].value() as i64)
                    } else if i == j {
                        LaurentPoly::one(&ring)
                    } else {
                        LaurentPoly::zero(&ring)
                    }
                }));
            }
        }
        let mut best: Option<(i64, PolyMatrix, PolyMatrix)> = None;
        for g in moves {
            let cand = g.dagger().mul(&cur)?.mul(&g)?;
            let m = spread_measure(&cand);
            if m < phi && best.as_ref().map_or(true, |(bm, _, _)| m < *bm) {
                best = Some((m, cand, g));
            }
        }
        match best {
            Some((_, cand, g)) => {
                cur = cand;
                acc = acc.mul(&g)?;
            }
            None => return Ok(None),
        }
    }
    Ok(None)
}

/// Symplectic Gram-Schmidt for a constant invertible alternating matrix with
/// zero diagonal: T with T^T C T = lambda_{n/2}.
fn constant_symplectic_basis(c: &FpMatrix) -> Result<FpMatrix> {
    let p = c.p;
    let n = c.rows;
    let pair = |a: &[FpScalar], b: &[FpScalar]| -> Result<FpScalar> {
        let mut acc = FpScalar::zero(p);
        for i in 0..n {
            for j in 0..n {
                acc = acc.add(&a[i].mul(&c.at(i, j))?.mul(&b[j])?)?;
            }
        }
        Ok(acc)
    };
    let mut basis: Vec<Vec<FpScalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        FpScalar::one(p)
                    } else {
                        FpScalar::zero(p)
                    }
                })
                .collect()
        })
        .collect();
    let mut xs: Vec<Vec<FpScalar>> = Vec::new();
    let mut zs: Vec<Vec<FpScalar>> = Vec::new();
    while !basis.is_empty() {
        let u = basis[0].clone();
        // Find a partner with <u, w> != 0; exists since C is invertible on
        // the remaining span.
        let widx = basis
            .iter()
            .position(|w| !pair(&u, w).map(|s| s.is_zero()).unwrap_or(true));
        let widx = widx.ok_or_else(|| {
            CaError::Internal("degenerate block in symplectic Gram-Schmidt".into())
        })?;
        let s = pair(&u, &basis[widx])?;
        let sinv = s.inv()?;
        let w: Vec<FpScalar> = basis[widx].iter().map(|v| v.mul(&sinv).unwrap()).collect();
        // Project the rest onto the orthogonal complement of (u, w).
        let mut rest: Vec<Vec<FpScalar>> = Vec::new();
        for (idx, e) in basis.iter().enumerate() {
            if idx == 0 || idx == widx {
                continue;
            }
            let a = pair(&u, e)?;
            let b = pair(&w, e)?;
            // e' = e - w <u,e> + u <w,e>
            let e2: Vec<FpScalar> = (0..n)
                .map(|i| {
                    e[i].sub(&w[i].mul(&a).unwrap())
                        .unwrap()
                        .add(&u[i].mul(&b).unwrap())
                        .unwrap()
                })
                .collect();
            rest.push(e2);
        }
        // Drop dependent vectors so the recursion sees a basis.
        let mut indep: Vec<Vec<FpScalar>> = Vec::new();
        for v in rest {
            let mut probe = FpMatrix::zero(p, indep.len() + 1, n);
            for (r, b) in indep.iter().chain(std::iter::once(&v)).enumerate() {
                for j in 0..n {
                    probe.set(r, j, b[j]);
                }
            }
            if probe.rank() == indep.len() + 1 {
                indep.push(v);
            }
        }
        xs.push(u);
        zs.push(w);
        basis = indep;
    }
    let cols: Vec<Vec<FpScalar>> = xs.into_iter().chain(zs).collect();
    let t = FpMatrix::from_fn(p, n, cols.len(), |i, j| cols[j][i]);
    Ok(t)
}

fn form_value(xi: &PolyMatrix, v: &PolyMatrix) -> Result<LaurentPoly> {
    Ok(v.dagger().mul(xi)?.mul(v)?.at(0, 0).clone())
}

/// Degree-bounded exhaustive isotropic search with a randomized fallback.
fn find_isotropic(xi: &PolyMatrix, opts: &ReduceOptions) -> Result<PolyMatrix> {
    let ring = xi.ring().clone();
    let n = xi.rows();
    // Zero diagonal entries give unit-vector solutions at once.
    for i in 0..n {
        if xi.at(i, i).is_zero() {
            let mut v = PolyMatrix::zero(&ring, n, 1);
            v.set(i, 0, LaurentPoly::one(&ring));
            return Ok(v);
        }
    }
    let p = ring.p();
    for d in 0..=opts.degree_cap {
        let monos = (2 * d + 1) as u32;
        let per_entry = (p as u128).pow(monos);
        let total = per_entry.checked_pow(n as u32);
        if total.is_none() || total.unwrap() > opts.search_budget as u128 {
            break;
        }
        let mut counter = vec![0u64; n * monos as usize];
        loop {
            // Skip the zero vector; test the current assignment.
            if counter.iter().any(|&c| c != 0) {
                let mut v = PolyMatrix::zero(&ring, n, 1);
                for i in 0..n {
                    let mut poly = LaurentPoly::zero(&ring);
                    for (mi, e) in (-d..=d).enumerate() {
                        let c = counter[i * monos as usize + mi];
                        if c != 0 {
                            poly.add_term(&[e], c as i64);
                        }
                    }
                    v.set(i, 0, poly);
                }
                if !v.is_zero() && form_value(xi, &v)?.is_zero() {
                    return Ok(v);
                }
            }
            // Odometer increment.
            let mut idx = 0;
            loop {
                if idx == counter.len() {
                    break;
                }
                counter[idx] += 1;
                if counter[idx] < p {
                    break;
                }
                counter[idx] = 0;
                idx += 1;
            }
            if idx == counter.len() {
                break;
            }
        }
    }
    // Randomized: sparse candidates inside the degree cap.
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e3779b97f4a7c15);
    let d = opts.degree_cap;
    for _ in 0..opts.random_trials {
        let mut v = PolyMatrix::zero(&ring, n, 1);
        for i in 0..n {
            let mut poly = LaurentPoly::zero(&ring);
            let terms = rng.gen_range(0..3);
            for _ in 0..terms {
                let e = rng.gen_range(-d..=d);
                let c = rng.gen_range(1..p) as i64;
                poly.add_term(&[e], c);
            }
            v.set(i, 0, poly);
        }
        if !v.is_zero() && form_value(xi, &v)?.is_zero() {
            return Ok(v);
        }
    }
    Err(CaError::ResourceCap(format!(
        "no isotropic vector found within degree cap {}",
        opts.degree_cap
    )))
}

// --- univariate polynomial helpers (ring with exactly one variable) ---

fn uni_deg(a: &LaurentPoly) -> i64 {
    a.exp_range(0).map(|(_, h)| h).unwrap_or(-1)
}

fn uni_divrem(a: &LaurentPoly, b: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly)> {
    let ring = a.ring().clone();
    let p = ring.p();
    if b.is_zero() {
        return Err(CaError::Domain("univariate division by zero".into()));
    }
    let db = uni_deg(b);
    let lb = FpScalar::reduced(b.coeff(&[db]) as i64, p).inv()?;
    let mut r = a.clone();
    let mut q = LaurentPoly::zero(&ring);
    while !r.is_zero() && uni_deg(&r) >= db {
        let dr = uni_deg(&r);
        let c = FpScalar::reduced(r.coeff(&[dr]) as i64, p).mul(&lb)?;
        let t = LaurentPoly::monomial(&ring, &[dr - db], c.value() as i64);
        q = q.checked_add(&t)?;
        r = r.checked_sub(&t.checked_mul(b)?)?;
    }
    Ok((q, r))
}

fn uni_monic(a: &LaurentPoly) -> Result<LaurentPoly> {
    if a.is_zero() {
        return Ok(a.clone());
    }
    let p = a.ring().p();
    let lc = FpScalar::reduced(a.coeff(&[uni_deg(a)]) as i64, p).inv()?;
    Ok(a.mul_monomial(&[0], lc.value() as i64))
}

fn uni_gcd(a: &LaurentPoly, b: &LaurentPoly) -> Result<LaurentPoly> {
    let mut x = a.to_poly_subring();
    let mut y = b.to_poly_subring();
    while !y.is_zero() {
        let (_, r) = uni_divrem(&x, &y)?;
        x = y;
        y = r;
    }
    uni_monic(&x)
}

/// (g, s, t) with s a + t b = g, g monic.
fn uni_ext_gcd(a: &LaurentPoly, b: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly, LaurentPoly)> {
    let ring = a.ring().clone();
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (LaurentPoly::one(&ring), LaurentPoly::zero(&ring));
    let (mut t0, mut t1) = (LaurentPoly::zero(&ring), LaurentPoly::one(&ring));
    while !r1.is_zero() {
        let (q, r) = uni_divrem(&r0, &r1)?;
        let s = s0.checked_sub(&q.checked_mul(&s1)?)?;
        let t = t0.checked_sub(&q.checked_mul(&t1)?)?;
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    // Normalize to a monic gcd.
    let p = ring.p();
    if r0.is_zero() {
        return Ok((r0, s0, t0));
    }
    let lc = FpScalar::reduced(r0.coeff(&[uni_deg(&r0)]) as i64, p).inv()?;
    let c = lc.value() as i64;
    Ok((
        r0.mul_monomial(&[0], c),
        s0.mul_monomial(&[0], c),
        t0.mul_monomial(&[0], c),
    ))
}

/// Divide the column vector by its polynomial content.
fn make_primitive(v: &PolyMatrix) -> Result<PolyMatrix> {
    let ring = v.ring().clone();
    if ring.num_vars() == 0 {
        return Ok(v.clone());
    }
    let mut g = LaurentPoly::zero(&ring);
    for i in 0..v.rows() {
        if v.at(i, 0).is_zero() {
            continue;
        }
        g = if g.is_zero() {
            v.at(i, 0).to_poly_subring()
        } else {
            uni_gcd(&g, v.at(i, 0))?
        };
    }
    if g.is_zero() || g.is_one() {
        return Ok(v.clone());
    }
    let mut out = PolyMatrix::zero(&ring, v.rows(), 1);
    for i in 0..v.rows() {
        let e = v.at(i, 0);
        if e.is_zero() {
            continue;
        }
        // Entry = unit * poly; the gcd divides the poly part exactly.
        let shifted = e.to_poly_subring();
        let q = shifted.div_exact(&g)?;
        let unit_back: Vec<i64> = e
            .clearing_shift()
            .iter()
            .map(|s| -s)
            .collect();
        out.set(i, 0, q.mul_monomial(&unit_back, 1));
    }
    Ok(out)
}

/// Solve sum_i r_i w_i = 1 for a primitive Laurent row (r_1, ..., r_n).
fn solve_unimodular_row(r: &[LaurentPoly]) -> Result<Vec<LaurentPoly>> {
    let ring = r[0].ring().clone();
    if ring.num_vars() == 0 {
        for (i, e) in r.iter().enumerate() {
            if !e.is_zero() {
                let inv = e.constant_coeff().inv()?;
                let mut out = vec![LaurentPoly::zero(&ring); r.len()];
                out[i] = LaurentPoly::constant(&ring, inv.value() as i64);
                return Ok(out);
            }
        }
        return Err(CaError::Domain("zero row is not unimodular".into()));
    }
    // Shift each entry to the polynomial subring, then run a sequential
    // extended gcd; the combined gcd must be a unit monomial.
    let shifts: Vec<Vec<i64>> = r.iter().map(|e| e.clearing_shift()).collect();
    let polys: Vec<LaurentPoly> = r
        .iter()
        .zip(shifts.iter())
        .map(|(e, s)| e.mul_monomial(s, 1))
        .collect();
    let mut g = LaurentPoly::zero(&ring);
    let mut cof: Vec<LaurentPoly> = vec![LaurentPoly::zero(&ring); r.len()];
    for (i, pi) in polys.iter().enumerate() {
        if pi.is_zero() {
            continue;
        }
        if g.is_zero() {
            g = pi.clone();
            cof[i] = LaurentPoly::one(&ring);
            continue;
        }
        let (g2, s, t) = uni_ext_gcd(&g, pi)?;
        for c in cof.iter_mut() {
            *c = c.checked_mul(&s)?;
        }
        cof[i] = t;
        g = g2;
    }
    let (gc, ge) = g.as_unit().ok_or_else(|| {
        CaError::Internal(format!("row gcd {g} is not a unit; row not primitive"))
    })?;
    let ginv = LaurentPoly::monomial(&ring, &[-ge[0]], gc.inv()?.value() as i64);
    let out: Vec<LaurentPoly> = cof
        .iter()
        .zip(shifts.iter())
        .map(|(c, s)| c.mul_monomial(s, 1).checked_mul(&ginv).unwrap())
        .collect();
    Ok(out)
}

/// Given a primitive isotropic v, build a hyperbolic pair, split off its
/// orthogonal complement, and recurse.
fn split_and_recurse(xi: &PolyMatrix, v: &PolyMatrix, opts: &ReduceOptions) -> Result<PolyMatrix> {
    let ring = xi.ring().clone();
    let n = xi.rows();
    // Row v^dag Xi is unimodular; solve for <v, w> = 1.
    let row = v.dagger().mul(xi)?;
    let row_entries: Vec<LaurentPoly> = (0..n).map(|j| row.at(0, j).clone()).collect();
    let wvec = solve_unimodular_row(&row_entries)?;
    let mut w = PolyMatrix::zero(&ring, n, 1);
    for i in 0..n {
        w.set(i, 0, wvec[i].clone());
    }
    // Isotropize w without changing <v, w> = 1: w <- w - v s with
    // s - bar(s) = -<w, w>.
    let h = form_value(xi, &w)?;
    if !h.is_zero() {
        let s = msplit_scalar(&h.neg())?;
        w = w.sub(&v.scale(&s))?;
    }
    debug_assert!(form_value(xi, &w)?.is_zero());
    // Projector onto span(v, w) along the orthogonal complement.
    let pmat = v.hstack(&w)?;
    let lam1_inv = PolyMatrix::from_fn(&ring, 2, 2, |i, j| match (i, j) {
        (0, 1) => LaurentPoly::constant(&ring, -1),
        (1, 0) => LaurentPoly::one(&ring),
        _ => LaurentPoly::zero(&ring),
    });
    let proj = pmat.mul(&lam1_inv)?.mul(&pmat.dagger())?.mul(xi)?;
    let comp = PolyMatrix::identity(&ring, n).sub(&proj)?;
    if n == 2 {
        let e = pmat;
        return Ok(e);
    }
    let fb = free_basis(&comp, &Caps::default())?;
    let c = fb.b0;
    if c.cols() != n - 2 {
        return Err(CaError::Internal(format!(
            "orthogonal complement has rank {} instead of {}",
            c.cols(),
            n - 2
        )));
    }
    let xi2 = c.dagger().mul(xi)?.mul(&c)?;
    let t2 = reduce_to_lambda(&xi2, opts)?;
    let lifted = c.mul(&t2)?;
    let half = (n - 2) / 2;
    let xcols: Vec<usize> = (0..half).collect();
    let zcols: Vec<usize> = (half..n - 2).collect();
    let e = v
        .hstack(&lifted.columns(&xcols))?
        .hstack(&w)?
        .hstack(&lifted.columns(&zcols))?;
    Ok(e)
}

/// Lemma XitoQCA: a QCA over one more variable whose boundary form along that
/// axis is exactly the given form.
pub struct QcaFromForm {
    pub qca: SymplecticMatrix,
    pub axis: usize,
    /// Whether the exact round-trip normalization could be applied.
    pub normalized: bool,
}

pub fn qca_from_form(x: &AntihermitianForm, axis_name: &str) -> Result<QcaFromForm> {
    let sub = x.ring().clone();
    let r = x.dimension();
    let xi = x.matrix();
    // W with dagger(W) diag(-Xi, Xi) W = lambda: the inverse-witness machinery
    // applied to -Xi, bridged by diag(I, Xi^-1) which maps Xi to -Xi^-1.
    let neg = AntihermitianForm::new(xi.neg())?;
    let iw = inverse_witness(&neg)?;
    let xi_inv = xi.inverse()?;
    let bridge = PolyMatrix::identity(&sub, r).direct_sum(&xi_inv)?;
    let w = bridge.mul(&iw.e)?;
    // Verify dagger(W) diag(-Xi, Xi) W = lambda_r.
    let src = xi.neg().direct_sum(xi)?;
    CongruenceWitness::new(w.clone(), src, lambda(&sub, r))?;
    let eprime = w.inverse()?;
    // Q = E' diag(I, z I) E'^-1 over the extended ring.
    let ring = sub.with_var(axis_name)?;
    let axis = sub.num_vars();
    let eprime_ext = eprime.insert_var(&ring, axis);
    let w_ext = w.insert_var(&ring, axis);
    let z = LaurentPoly::var(&ring, axis);
    let zblock = PolyMatrix::identity(&ring, r)
        .direct_sum(&PolyMatrix::identity(&ring, r).scale(&z))?;
    let q_raw = eprime_ext.mul(&zblock)?.mul(&w_ext)?;
    // Normalize so the extraction's "trailing columns" convention returns Xi
    // entry-for-entry: right-compose with diag(dagger(X2), X2^-1) where X2 is
    // the lower-right block of E'^-1 = W, when that block is invertible.
    let x2 = w.submatrix(
        &(r..2 * r).collect::<Vec<_>>(),
        &(r..2 * r).collect::<Vec<_>>(),
    );
    let (qmat, normalized) = match x2.inverse() {
        Ok(x2inv) => {
            let v = x2.dagger().direct_sum(&x2inv)?;
            (q_raw.mul(&v.insert_var(&ring, axis))?, true)
        }
        Err(_) => (q_raw, false),
    };
    let qca = SymplecticMatrix::new(qmat, r)?;
    Ok(QcaFromForm {
        qca,
        axis,
        normalized,
    })
}

/// Class of the scalar quadratic form f u^2 over F_p in the Witt group of
/// quadratic forms: Z2 x Z2 when p = 1 mod 4, Z4 when p = 3 mod 4.
#[derive(Clone, Debug, Eq)]
pub struct QuadFormClass {
    pub p: u64,
    pub f: FpScalar,
    pub f_is_square: bool,
    /// "Z2xZ2" or "Z4".
    pub group: &'static str,
    pub label: String,
}

impl PartialEq for QuadFormClass {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f_is_square == other.f_is_square
    }
}

pub fn classify_theta(p: u64, f: FpScalar) -> Result<QuadFormClass> {
    if p == 2 {
        return Err(CaError::Domain(
            "quadratic form classification needs odd p".into(),
        ));
    }
    if f.is_zero() {
        return Err(CaError::Domain("f must be a unit".into()));
    }
    let square = f.is_square();
    let group = if p % 4 == 1 { "Z2xZ2" } else { "Z4" };
    let label = match (p % 4 == 1, square) {
        (true, true) => "(1,0): square generator".to_string(),
        (true, false) => "(0,1): nonsquare generator".to_string(),
        (false, true) => "1: order-4 generator".to_string(),
        (false, false) => "3: inverse order-4 generator".to_string(),
    };
    Ok(QuadFormClass {
        p,
        f,
        f_is_square: square,
        group,
        label,
    })
}

/// The normalized quadratic Gauss sum F(p, f) = p^{-1/2} sum_k e^{2 pi i f k^2 / p}.
/// The single floating-point computation in this crate.
pub fn gauss_sum(p: u64, f: i64) -> Result<Complex64> {
    if p == 2 {
        return Err(CaError::Domain("Gauss sums computed for odd p".into()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let fp = FpScalar::reduced(f, p);
    if fp.is_zero() {
        return Err(CaError::Domain("f must be a unit".into()));
    }
    for k in 1..=p {
        let e = fp.mul(&FpScalar::reduced((k * k) as i64, p))?;
        let phase = 2.0 * std::f64::consts::PI * (e.value() as f64) / (p as f64);
        acc += Complex64::new(phase.cos(), phase.sin());
    }
    Ok(acc / (p as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::RingDesc;

    fn ring(p: u64, vars: &[&str]) -> Ring {
        RingDesc::new(p, vars).unwrap()
    }

    #[test]
    fn msplit_round_trip() {
        let r = ring(5, &["x", "y"]);
        let x = LaurentPoly::var(&r, 0);
        let h = x.checked_sub(&x.bar()).unwrap();
        let s = msplit_scalar(&h).unwrap();
        assert_eq!(s.checked_sub(&s.bar()).unwrap(), h);
        // Char 2: x + x^-1 is antihermitian, splits as x.
        let r2 = ring(2, &["x"]);
        let x2 = LaurentPoly::var(&r2, 0);
        let h2 = x2.checked_add(&x2.bar()).unwrap();
        assert_eq!(msplit_scalar(&h2).unwrap(), x2);
    }

    #[test]
    fn inverse_witness_on_hyperbolic() {
        for p in [2u64, 3, 5] {
            let r = ring(p, &["x"]);
            let h = AntihermitianForm::hyperbolic(&r, 1);
            inverse_witness(&h).unwrap();
        }
    }

    #[test]
    fn sum_of_squares_examples() {
        let (x, y) = solve_sum_of_squares(3).unwrap();
        assert_eq!(
            x.mul(&x).unwrap().add(&y.mul(&y).unwrap()).unwrap().value(),
            2
        );
        let (x, y) = solve_sum_of_squares(7).unwrap();
        let s = x.mul(&x).unwrap().add(&y.mul(&y).unwrap()).unwrap();
        assert_eq!(s, FpScalar::reduced(-1, 7));
        assert!(sqrt_minus_one(5).is_some());
        assert!(sqrt_minus_one(7).is_none());
    }

    #[test]
    fn exponent_witness_on_hyperbolic() {
        let r5 = ring(5, &["x"]);
        let (n, _) = exponent_witness(&AntihermitianForm::hyperbolic(&r5, 1)).unwrap();
        assert_eq!(n, 2);
        let r3 = ring(3, &["x"]);
        let (n, _) = exponent_witness(&AntihermitianForm::hyperbolic(&r3, 1)).unwrap();
        assert_eq!(n, 4);
    }

    #[test]
    fn reduce_spec_example() {
        // [[0, x],[-x^-1, 0]] over F_3[x^±] reduces to lambda_1.
        let r = ring(3, &["x"]);
        let x = LaurentPoly::var(&r, 0);
        let xi = PolyMatrix::new(
            &r,
            2,
            2,
            vec![
                LaurentPoly::zero(&r),
                x.clone(),
                x.unit_inverse().unwrap().neg(),
                LaurentPoly::zero(&r),
            ],
        )
        .unwrap();
        let form = AntihermitianForm::new(xi).unwrap();
        let (n, w) = witt_reduce_d1(&form, &ReduceOptions::default()).unwrap();
        assert_eq!(n, 1);
        assert_eq!(
            w.e.dagger().mul(&w.source).unwrap().mul(&w.e).unwrap(),
            lambda(&r, 1)
        );
    }

    #[test]
    fn reduce_constant_scramble() {
        // A constant congruence scramble of lambda_2 over F_5 (D = 0 ring).
        let r = ring(5, &[]);
        let lam = lambda(&r, 2);
        let g = PolyMatrix::from_fn(&r, 4, 4, |i, j| {
            LaurentPoly::constant(&r, [[1, 2, 0, 1], [0, 1, 3, 0], [3, 0, 1, 2], [0, 0, 0, 1]][i][j])
        });
        let xi = g.dagger().mul(&lam).unwrap().mul(&g).unwrap();
        let form = AntihermitianForm::new(xi).unwrap();
        let (n, _) = witt_reduce_d1(&form, &ReduceOptions::default()).unwrap();
        assert_eq!(n, 2);
    }

    #[test]
    fn gauss_sum_values() {
        let f51 = gauss_sum(5, 1).unwrap();
        assert!((f51 - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        let f31 = gauss_sum(3, 1).unwrap();
        assert!((f31 - Complex64::new(0.0, 1.0)).norm() < 1e-9);
        // Conjugation: F(p,1)* = F(p,-1).
        for p in [3u64, 5, 7, 11] {
            let a = gauss_sum(p, 1).unwrap();
            let b = gauss_sum(p, -1).unwrap();
            assert!((a.conj() - b).norm() < 1e-9);
        }
    }

    #[test]
    fn classify_theta_square_invariance() {
        for p in [3u64, 5, 7, 11, 13] {
            for f in 1..p {
                let fs = FpScalar::reduced(f as i64, p);
                let base = classify_theta(p, fs).unwrap();
                for h in 1..p {
                    let hs = FpScalar::reduced(h as i64, p);
                    let scaled = fs.mul(&hs.mul(&hs).unwrap()).unwrap();
                    assert_eq!(base, classify_theta(p, scaled).unwrap());
                }
            }
        }
    }

    #[test]
    fn qca_from_hyperbolic_form() {
        let r = ring(3, &["x"]);
        let h = AntihermitianForm::hyperbolic(&r, 1);
        let out = qca_from_form(&h, "z").unwrap();
        assert_eq!(out.qca.q(), 2);
        assert!(out.normalized);
    }
}
