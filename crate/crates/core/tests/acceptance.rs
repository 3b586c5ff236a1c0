//! The ten headline checks, one pass/fail line each.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use clifqca::boundary::{antihermitian_form, split_z};
use clifqca::catalog::{
    build_bundle, display_congruence, smallest_nonsquare, sum_of_squares_anisotropic,
    surface_exactness, topological_spin, xi_p2,
};
use clifqca::groebner::{check_complex_exact, is_unit_ideal, rank, Caps};
use clifqca::ring::fp::FpScalar;
use clifqca::ring::matrix::PolyMatrix;
use clifqca::ring::poly::{LaurentPoly, Ring, RingDesc};
use clifqca::symplectic::{is_symplectic, lambda};
use clifqca::witt::{
    exponent_witness, gauss_sum, qca_from_form, solve_sum_of_squares, witt_reduce_d1,
    AntihermitianForm, ReduceOptions,
};

fn report(n: usize, name: &str, ok: bool) {
    println!("{}: criterion {n} - {name}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} ({name}) failed");
}

fn sweep_pf() -> Vec<(u64, i64)> {
    [3u64, 5, 7, 11, 13]
        .iter()
        .flat_map(|&p| [(p, 1i64), (p, smallest_nonsquare(p) as i64)])
        .collect()
}

#[test]
fn criterion_01_symplecticity() {
    let mut ok = true;
    for (p, f) in sweep_pf() {
        let b = build_bundle(p, f).unwrap();
        ok &= is_symplectic(b.qca.matrix(), 2).unwrap();
    }
    report(1, "Q_{p,f} symplectic across the (p, f) sweep", ok);
}

#[test]
fn criterion_02_boundary_form() {
    let mut ok = true;
    for (p, f) in sweep_pf() {
        let b = build_bundle(p, f).unwrap();
        let bf = antihermitian_form(&b.qca, 2, &Caps::default()).unwrap();
        // Entry-for-entry after the documented diagonal unit change of basis.
        let d = display_congruence(&bf.xi, b.xi.matrix()).unwrap();
        ok &= d.dagger().mul(b.xi.matrix()).unwrap().mul(&d).unwrap() == bf.xi;
        let det = bf.xi.determinant().unwrap();
        let expect = FpScalar::reduced(4 * f * f, p).value() as i64;
        ok &= det == LaurentPoly::constant(&b.plane, expect);
    }
    report(2, "extracted boundary form matches the display, det = 4f^2", ok);
}

#[test]
fn criterion_03_p2_form_round_trip() {
    let x = xi_p2().unwrap();
    let out = qca_from_form(&x, "z").unwrap();
    let mut ok = out.normalized;
    let axis = out.axis;
    let bf = antihermitian_form(&out.qca, axis, &Caps::default()).unwrap();
    ok &= bf.xi == *x.matrix();
    report(3, "Xi_{p=2} validates and round-trips through qca_from_form", ok);
}

#[test]
fn criterion_04_surface_exactness() {
    let mut ok = true;
    for p in [3u64, 5, 7] {
        for f in [1i64, smallest_nonsquare(p) as i64] {
            ok &= surface_exactness(p, f, &Caps::default()).unwrap().exact;
        }
    }
    // Negative control: delete one term of the surface generator.
    let b = build_bundle(3, 1).unwrap();
    let mut bd = b.sigma_bd.clone();
    let term = LaurentPoly::monomial(&b.plane, &[1, 1], 1);
    bd.set(2, 0, bd.at(2, 0).checked_sub(&term).unwrap());
    let lam2 = lambda(&b.plane, 2);
    let n = b.b_top.hstack(&bd).unwrap().dagger().mul(&lam2).unwrap();
    ok &= !check_complex_exact(&bd, &n, &Caps::default()).unwrap().exact;
    report(4, "surface local topological order certificates", ok);
}

#[test]
fn criterion_05_topological_spin() {
    let mut ok = true;
    for p in [3u64, 5, 7] {
        for f in [1i64, 2] {
            let expect = FpScalar::reduced(4 * f, p).inv().unwrap();
            for n in [1u64, 2, 3] {
                ok &= topological_spin(p, f, n).unwrap() == expect;
            }
        }
    }
    report(5, "topological spin m = 1/(4f), independent of string length", ok);
}

fn random_invertible(ring: &Ring, dim: usize, rng: &mut ChaCha8Rng) -> PolyMatrix {
    let p = ring.p();
    let mut e = PolyMatrix::identity(ring, dim);
    // Product of elementary row additions and unit diagonal scalings keeps
    // the result invertible with small entry degrees.
    for _ in 0..4 {
        let i = rng.gen_range(0..dim);
        let mut j = rng.gen_range(0..dim);
        while j == i {
            j = rng.gen_range(0..dim);
        }
        let c = rng.gen_range(1..p) as i64;
        let k = if ring.num_vars() == 1 {
            vec![rng.gen_range(-1..=1i64)]
        } else {
            vec![]
        };
        let mut g = PolyMatrix::identity(ring, dim);
        g.set(i, j, LaurentPoly::monomial(ring, &k, c));
        e = e.mul(&g).unwrap();
    }
    let i = rng.gen_range(0..dim);
    let c = rng.gen_range(1..p) as i64;
    let k = if ring.num_vars() == 1 {
        vec![rng.gen_range(-1..=1i64)]
    } else {
        vec![]
    };
    let mut g = PolyMatrix::identity(ring, dim);
    g.set(i, i, LaurentPoly::monomial(ring, &k, c));
    e.mul(&g).unwrap()
}

#[test]
fn criterion_06_witt_reduction_scrambles() {
    let start = std::time::Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut ok = true;
    for trial in 0..50 {
        let p = [2u64, 3, 5][trial % 3];
        let n = 1 + trial % 3;
        let ring = RingDesc::new(p, &["x"]).unwrap();
        let lam = lambda(&ring, n);
        let e = random_invertible(&ring, 2 * n, &mut rng);
        let xi = e.dagger().mul(&lam).unwrap().mul(&e).unwrap();
        let form = AntihermitianForm::new(xi.clone()).unwrap();
        let (m, w) = witt_reduce_d1(&form, &ReduceOptions::default()).unwrap();
        ok &= m == n;
        ok &= w.e.dagger().mul(&xi).unwrap().mul(&w.e).unwrap() == lambda(&ring, n);
    }
    let elapsed = start.elapsed();
    ok &= elapsed.as_secs() < 60;
    report(
        6,
        &format!("50 scrambled hyperbolic forms reduced in {elapsed:.2?}"),
        ok,
    );
}

#[test]
fn criterion_07_exponent_witnesses() {
    let b5 = build_bundle(5, 1).unwrap();
    let (n5, _) = exponent_witness(&b5.xi).unwrap();
    let b3 = build_bundle(3, 1).unwrap();
    let (n3, _) = exponent_witness(&b3.xi).unwrap();
    report(
        7,
        "exponent witnesses: n = 2 at p = 5 and n = 4 at p = 3",
        n5 == 2 && n3 == 4,
    );
}

#[test]
fn criterion_08_split_identities() {
    let mut ok = true;
    let mut corpus: Vec<(clifqca::symplectic::SymplecticMatrix, usize)> = Vec::new();
    for (p, f) in sweep_pf() {
        let b = build_bundle(p, f).unwrap();
        corpus.push((b.qca, 2));
    }
    let one_var = RingDesc::new(3, &["x"]).unwrap();
    let h1 = AntihermitianForm::hyperbolic(&one_var, 1);
    let rec = qca_from_form(&h1, "z").unwrap();
    let axis = rec.axis;
    corpus.push((rec.qca, axis));
    for (qca, axis) in corpus {
        let split = split_z(&qca, axis).unwrap();
        ok &= split.verify_identities().is_ok();
        let ra = rank(&split.a).unwrap();
        let rb = rank(&split.b).unwrap();
        ok &= ra + rb == 2 * split.q;
        ok &= is_unit_ideal(&split.a.minors(ra), &Caps::default()).unwrap();
        ok &= is_unit_ideal(&split.b.minors(rb), &Caps::default()).unwrap();
    }
    report(8, "boundary split identities and rank decomposition", ok);
}

#[test]
fn criterion_09_gauss_sums() {
    let mut ok = true;
    let f51 = gauss_sum(5, 1).unwrap();
    ok &= (f51.re - 1.0).abs() < 1e-9 && f51.im.abs() < 1e-9;
    let f31 = gauss_sum(3, 1).unwrap();
    ok &= f31.re.abs() < 1e-9 && (f31.im - 1.0).abs() < 1e-9;
    for p in [3u64, 5, 7] {
        let g = smallest_nonsquare(p) as i64;
        let sum = gauss_sum(p, 1).unwrap() + gauss_sum(p, g).unwrap();
        ok &= sum.norm() < 1e-9;
    }
    report(9, "quadratic Gauss sum values and nonsquare cancellation", ok);
}

#[test]
fn criterion_10_anisotropy() {
    let mut ok = true;
    for p in [3u64, 5, 7, 11, 13] {
        // u^2 + v^2 = -1 is always solvable.
        let (u, v) = solve_sum_of_squares(p).unwrap();
        let s = u.mul(&u).unwrap().add(&v.mul(&v).unwrap()).unwrap();
        ok &= s == FpScalar::reduced(-1, p);
        let anisotropic = sum_of_squares_anisotropic(p, 1).unwrap();
        ok &= anisotropic == (p % 4 == 3);
        if p % 4 == 3 {
            ok &= sum_of_squares_anisotropic(p, smallest_nonsquare(p) as i64).unwrap();
        }
    }
    report(10, "sum-of-squares solvability and anisotropy split by p mod 4", ok);
}
