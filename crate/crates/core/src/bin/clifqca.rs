//! Command-line driver: verification, boundary-form extraction, Witt
//! reduction, QCA reconstruction, and the example catalog.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use clifqca::boundary::{antihermitian_form, split_z};
use clifqca::catalog::{
    build_bundle, smallest_nonsquare, surface_exactness, topological_spin, xi_p2,
};
use clifqca::error::{CaError, Result};
use clifqca::groebner::Caps;
use clifqca::ring::json::{matrix_from_str, matrix_to_json, matrix_to_string, MatrixJson};
use clifqca::ring::matrix::PolyMatrix;
use clifqca::symplectic::{is_symplectic, SymplecticMatrix};
use clifqca::witt::{
    gauss_sum, qca_from_form, witt_reduce_d1, AntihermitianForm, CongruenceWitness, ReduceOptions,
};

#[derive(Parser)]
#[command(name = "clifqca", about = "Exact Clifford QCA and antihermitian form toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Pretty,
}

#[derive(Args)]
struct CapArgs {
    /// Groebner basis size cap.
    #[arg(long, default_value_t = 2000)]
    max_basis: usize,
    /// Groebner S-pair cap.
    #[arg(long, default_value_t = 200_000)]
    max_pairs: usize,
    /// Groebner total-degree cap.
    #[arg(long, default_value_t = 120)]
    max_degree: i64,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps {
            max_basis: self.max_basis,
            max_pairs: self.max_pairs,
            max_degree: self.max_degree,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a matrix file for symplecticity and report its determinant class.
    Verify {
        /// Path to a matrix in the canonical JSON format.
        input: String,
    },
    /// Split along an axis, extract the boundary form, and reduce it when the
    /// boundary ring has at most one variable.
    Pipeline {
        input: String,
        /// Axis variable name (e.g. "z").
        #[arg(long)]
        axis: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Isotropic-search degree cap for the reduction step.
        #[arg(long, default_value_t = 6)]
        degree_cap: i64,
        /// Seed for randomized reduction fallbacks.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Reduce an antihermitian form over F_p or F_p[x^pm] to lambda_n.
    WittReduce {
        input: String,
        #[arg(long, default_value_t = 6)]
        degree_cap: i64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Build a QCA one dimension up whose boundary form is the given form.
    QcaFromForm {
        input: String,
        /// Name for the new axis variable.
        #[arg(long, default_value = "z")]
        axis: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Dump a member of the example bundle, or verify the whole sweep.
    Catalog {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: i64,
        /// One of: sigma_toric, sigma_qca, q, xi, sigma_bd, b_top, h_x, h_y,
        /// xi_p2.
        #[arg(long)]
        member: Option<String>,
        /// Run the full identity sweep over p in {3,5,7,11,13} and
        /// f in {1, smallest nonsquare}.
        #[arg(long)]
        verify_all: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Topological spin m with theta = omega^m for the surface anyon.
    Spin {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: i64,
        /// Hopping string length.
        #[arg(long, default_value_t = 1)]
        n: u64,
    },
    /// Buchsbaum-Eisenbud surface local-topological-order certificate.
    Exactness {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: i64,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Normalized quadratic Gauss sum F(p, f) (the sole floating-point output).
    Gauss {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: i64,
    },
}

#[derive(Serialize)]
struct VerifyReport {
    symplectic: bool,
    det_class: Option<String>,
    q: usize,
}

#[derive(Serialize)]
struct WitnessJson {
    n: usize,
    e: MatrixJson,
    source: MatrixJson,
    target: MatrixJson,
    verified: bool,
}

fn witness_json(n: usize, w: &CongruenceWitness) -> Result<WitnessJson> {
    // Re-verify before anything is written; an unverified witness is never
    // emitted.
    CongruenceWitness::new(w.e.clone(), w.source.clone(), w.target.clone())?;
    Ok(WitnessJson {
        n,
        e: matrix_to_json(&w.e),
        source: matrix_to_json(&w.source),
        target: matrix_to_json(&w.target),
        verified: true,
    })
}

#[derive(Serialize)]
struct PipelineReport {
    q: usize,
    a: MatrixJson,
    b: MatrixJson,
    b0: Option<MatrixJson>,
    xi: Option<MatrixJson>,
    det_sqrt: Option<u64>,
    witness: Option<WitnessJson>,
}

#[derive(Serialize)]
struct ExactnessJson {
    composite_zero: bool,
    rank_m: usize,
    rank_n: usize,
    ranks_add_up: bool,
    grade_m: usize,
    grade_n: usize,
    exact: bool,
}

fn read_matrix(path: &str) -> Result<PolyMatrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| CaError::Parse(format!("cannot read {path}: {e}")))?;
    matrix_from_str(&text)
}

fn render(m: &PolyMatrix, format: Format) -> String {
    match format {
        Format::Json => matrix_to_string(m),
        Format::Pretty => {
            let mut out = String::new();
            for i in 0..m.rows() {
                let row: Vec<String> = (0..m.cols()).map(|j| m.at(i, j).to_string()).collect();
                out.push('[');
                out.push_str(&row.join(", "));
                out.push_str("]\n");
            }
            out.pop();
            out
        }
    }
}

fn cmd_verify(input: &str) -> Result<i32> {
    let m = read_matrix(input)?;
    if m.rows() % 2 != 0 {
        return Err(CaError::Shape(format!(
            "a symplectic matrix has even dimension, got {} rows",
            m.rows()
        )));
    }
    let q = m.rows() / 2;
    let symplectic = m.is_square() && is_symplectic(&m, q)?;
    let det_class = if symplectic {
        SymplecticMatrix::new(m.clone(), q)?
            .det_class()?
            .map(|d| d.to_string())
    } else {
        None
    };
    let report = VerifyReport {
        symplectic,
        det_class,
        q,
    };
    println!("{}", serde_json::to_string(&report).unwrap());
    Ok(if symplectic { 0 } else { 1 })
}

fn cmd_pipeline(
    input: &str,
    axis: &str,
    format: Format,
    degree_cap: i64,
    seed: u64,
    caps: &Caps,
) -> Result<i32> {
    let m = read_matrix(input)?;
    let q = m.rows() / 2;
    if !is_symplectic(&m, q)? {
        return Err(CaError::Precondition("input is not symplectic".into()));
    }
    let qca = SymplecticMatrix::new(m, q)?;
    let axis_idx = qca
        .ring()
        .var_index(axis)
        .ok_or_else(|| CaError::Domain(format!("no variable named {axis}")))?;
    let split = split_z(&qca, axis_idx)?;
    split.verify_identities()?;
    let (b0, xi, det_sqrt, witness) = if split.b.is_zero() {
        // Identity-like QCA: empty boundary algebra, trivially hyperbolic.
        let sub = split.b.ring().clone();
        let empty = PolyMatrix::zero(&sub, 0, 0);
        let w = CongruenceWitness::new(empty.clone(), empty.clone(), empty.clone())?;
        (None, Some(empty), None, Some(witness_json(0, &w)?))
    } else {
        let bf = antihermitian_form(&qca, axis_idx, caps)?;
        let sub = bf.xi.ring().clone();
        let witness = if sub.num_vars() <= 1 {
            let form = AntihermitianForm::new(bf.xi.clone())?;
            let opts = ReduceOptions {
                degree_cap,
                seed,
                ..ReduceOptions::default()
            };
            let (n, w) = witt_reduce_d1(&form, &opts)?;
            Some(witness_json(n, &w)?)
        } else {
            None
        };
        (
            Some(bf.basis.b0.clone()),
            Some(bf.xi.clone()),
            bf.det_sqrt.map(|c| c.value()),
            witness,
        )
    };
    if format == Format::Pretty {
        println!("A =\n{}", render(&split.a, format));
        println!("B =\n{}", render(&split.b, format));
        if let Some(b0m) = &b0 {
            println!("B0 =\n{}", render(b0m, format));
        }
        if let Some(xim) = &xi {
            println!("Xi =\n{}", render(xim, format));
        }
        if let Some(w) = &witness {
            println!("witness: n = {}, verified = {}", w.n, w.verified);
        }
        return Ok(0);
    }
    let report = PipelineReport {
        q,
        a: matrix_to_json(&split.a),
        b: matrix_to_json(&split.b),
        b0: b0.as_ref().map(matrix_to_json),
        xi: xi.as_ref().map(matrix_to_json),
        det_sqrt,
        witness,
    };
    println!("{}", serde_json::to_string(&report).unwrap());
    Ok(0)
}

fn cmd_witt_reduce(input: &str, degree_cap: i64, seed: u64) -> Result<i32> {
    let m = read_matrix(input)?;
    let form = AntihermitianForm::new(m)?;
    let opts = ReduceOptions {
        degree_cap,
        seed,
        ..ReduceOptions::default()
    };
    let (n, w) = witt_reduce_d1(&form, &opts)?;
    println!("{}", serde_json::to_string(&witness_json(n, &w)?).unwrap());
    Ok(0)
}

fn cmd_qca_from_form(input: &str, axis: &str, format: Format) -> Result<i32> {
    let m = read_matrix(input)?;
    let form = AntihermitianForm::new(m)?;
    let out = qca_from_form(&form, axis)?;
    if format == Format::Pretty {
        println!("{}", render(out.qca.matrix(), format));
    } else {
        #[derive(Serialize)]
        struct QcaReport {
            q: usize,
            axis: usize,
            normalized: bool,
            qca: MatrixJson,
        }
        let report = QcaReport {
            q: out.qca.q(),
            axis: out.axis,
            normalized: out.normalized,
            qca: matrix_to_json(out.qca.matrix()),
        };
        println!("{}", serde_json::to_string(&report).unwrap());
    }
    Ok(0)
}

fn cmd_catalog(
    p: u64,
    f: i64,
    member: Option<&str>,
    verify_all: bool,
    format: Format,
) -> Result<i32> {
    if verify_all {
        for p in [3u64, 5, 7, 11, 13] {
            for f in [1, smallest_nonsquare(p) as i64] {
                build_bundle(p, f)?;
                println!("p={p} f={f}: all identities hold");
            }
        }
        return Ok(0);
    }
    let Some(member) = member else {
        return Err(CaError::Domain(
            "pass --member NAME or --verify-all".into(),
        ));
    };
    if member == "xi_p2" {
        println!("{}", render(xi_p2()?.matrix(), format));
        return Ok(0);
    }
    let b = build_bundle(p, f)?;
    let m = match member {
        "sigma_toric" => &b.sigma_toric,
        "sigma_qca" => &b.sigma_qca,
        "q" => b.qca.matrix(),
        "xi" => b.xi.matrix(),
        "sigma_bd" => &b.sigma_bd,
        "b_top" => &b.b_top,
        "h_x" => &b.h_x,
        "h_y" => &b.h_y,
        other => {
            return Err(CaError::Domain(format!("unknown bundle member {other}")));
        }
    };
    println!("{}", render(m, format));
    Ok(0)
}

fn cmd_spin(p: u64, f: i64, n: u64) -> Result<i32> {
    let m = topological_spin(p, f, n)?;
    let expect = clifqca::ring::fp::FpScalar::reduced(4 * f, p).inv()?;
    #[derive(Serialize)]
    struct SpinReport {
        p: u64,
        f: i64,
        n: u64,
        m: u64,
        expected: u64,
        matches: bool,
    }
    let matches = m == expect;
    let report = SpinReport {
        p,
        f,
        n,
        m: m.value(),
        expected: expect.value(),
        matches,
    };
    println!("{}", serde_json::to_string(&report).unwrap());
    Ok(if matches { 0 } else { 1 })
}

fn cmd_exactness(p: u64, f: i64, caps: &Caps) -> Result<i32> {
    let rep = surface_exactness(p, f, caps)?;
    let out = ExactnessJson {
        composite_zero: rep.composite_zero,
        rank_m: rep.rank_m,
        rank_n: rep.rank_n,
        ranks_add_up: rep.ranks_add_up,
        grade_m: rep.grade_m,
        grade_n: rep.grade_n,
        exact: rep.exact,
    };
    println!("{}", serde_json::to_string(&out).unwrap());
    Ok(if rep.exact { 0 } else { 1 })
}

fn cmd_gauss(p: u64, f: i64) -> Result<i32> {
    let v = gauss_sum(p, f)?;
    #[derive(Serialize)]
    struct GaussReport {
        p: u64,
        f: i64,
        /// Floating-point values; everything else in this tool is exact.
        re: f64,
        im: f64,
    }
    let report = GaussReport {
        p,
        f,
        re: v.re,
        im: v.im,
    };
    println!("{}", serde_json::to_string(&report).unwrap());
    Ok(0)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify { input } => cmd_verify(&input),
        Command::Pipeline {
            input,
            axis,
            format,
            degree_cap,
            seed,
            caps,
        } => cmd_pipeline(&input, &axis, format, degree_cap, seed, &caps.caps()),
        Command::WittReduce {
            input,
            degree_cap,
            seed,
        } => cmd_witt_reduce(&input, degree_cap, seed),
        Command::QcaFromForm {
            input,
            axis,
            format,
        } => cmd_qca_from_form(&input, &axis, format),
        Command::Catalog {
            p,
            f,
            member,
            verify_all,
            format,
        } => cmd_catalog(p, f, member.as_deref(), verify_all, format),
        Command::Spin { p, f, n } => cmd_spin(p, f, n),
        Command::Exactness { p, f, caps } => cmd_exactness(p, f, &caps.caps()),
        Command::Gauss { p, f } => cmd_gauss(p, f),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
