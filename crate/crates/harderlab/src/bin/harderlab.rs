//! Command-line front end. Every subcommand prints human-readable text on
//! stdout; `--json PATH` additionally writes a machine report. Exit codes:
//! 0 success, 1 assertion failure, 2 usage error, 3 capability/budget.

use clap::{Args, Parser, Subcommand};
use harderlab::diffop::{self, Weight};
use harderlab::eisenstein::{eisenstein_coeff, EisensteinSpec};
use harderlab::epsilon::{self, eval_epsilon};
use harderlab::error::Error;
use harderlab::exact::{format_rat, parse_rat};
use harderlab::fixtures::locate_fixtures;
use harderlab::lifts::{self, parse_parameter_json};
use harderlab::lvalue;
use harderlab::qexp;
use harderlab::siegel::{self, HalfIntegralMat};
use harderlab::special::{self, KroneckerChar};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "harderlab",
    version,
    about = "exact computations around Harder-type congruences"
)]
struct Cli {
    /// write a machine-readable JSON report to this path
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// worker threads for enumeration-heavy subcommands
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// special values of zeta and Dirichlet L at non-positive integers
    Special {
        #[command(subcommand)]
        sub: SpecialCmd,
    },
    /// level-one elliptic eigenforms
    Elliptic {
        #[command(subcommand)]
        sub: EllipticCmd,
    },
    /// period-free critical L-value ratios and the divisibility scan
    Lratio(LratioArgs),
    /// local Siegel series F_p by brute-force character sums
    Fp(FpArgs),
    /// Fourier coefficients of Siegel-Eisenstein series
    Eisenstein(EisArgs),
    /// differential operator kernels and the delta-calculus
    Diffop {
        #[command(subcommand)]
        sub: DiffopCmd,
    },
    /// pullback coefficients
    Epsilon(EpsArgs),
    /// lift weight merges and sign conditions
    Lifts {
        #[command(subcommand)]
        sub: LiftsCmd,
    },
    /// fixture-driven verification of the worked congruence cases
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum SpecialCmd {
    /// zeta(1 - k)
    ZetaNeg {
        #[arg(long)]
        k: i64,
    },
    /// L(1 - m, chi_D)
    LNeg {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        disc: i64,
    },
}

#[derive(Subcommand)]
enum EllipticCmd {
    /// eigenform coefficients as JSON {weight, D, coeffs}
    Eigenform {
        #[arg(long)]
        weight: i64,
        #[arg(long, default_value_t = 20)]
        prec: usize,
    },
}

#[derive(Args)]
struct LratioArgs {
    #[arg(long)]
    k: i64,
    #[arg(long)]
    j: i64,
    #[arg(long, default_value_t = 200)]
    pmax: u64,
}

#[derive(Args)]
struct FpArgs {
    #[arg(long)]
    p: u64,
    #[arg(long = "twoT")]
    two_t: String,
}

#[derive(Args)]
struct EisArgs {
    #[arg(long)]
    degree: usize,
    #[arg(long)]
    weight: i64,
    #[arg(long = "twoT")]
    two_t: String,
    #[arg(long)]
    normalized: bool,
}

#[derive(Subcommand)]
enum DiffopCmd {
    /// the kernel polynomial Q_l for the (n1, n2) partition
    Ql {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        /// concrete even weight; omitted = formal k
        #[arg(long)]
        k: Option<i64>,
    },
    /// re-derive the fundamental-formula table and the closed-form action
    VerifyAppendixB {
        #[arg(long, default_value_t = 2)]
        l: u32,
    },
}

#[derive(Args)]
struct EpsArgs {
    #[arg(long)]
    k: i64,
    #[arg(long)]
    l: i64,
    #[arg(long)]
    n1: usize,
    #[arg(long)]
    n2: usize,
    #[arg(long)]
    t1: String,
    #[arg(long)]
    t2: String,
    #[arg(long)]
    u1: Option<String>,
    #[arg(long)]
    u2: Option<String>,
}

#[derive(Subcommand)]
enum LiftsCmd {
    /// merged weight sequences of the lift families
    Weights {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = 0)]
        j: i64,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        d: i64,
    },
    /// evaluate the sign condition for a parameter given as JSON
    SignCheck {
        #[arg(long)]
        spec: String,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    case: String,
    #[arg(long)]
    fixtures: Option<PathBuf>,
}

fn parse_int_matrix(s: &str) -> Result<Vec<Vec<i64>>, Error> {
    serde_json::from_str(s).map_err(|e| Error::Usage(format!("invalid matrix JSON: {e}")))
}

fn run(cli: Cli) -> Result<i32, Error> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Usage(format!("thread pool: {e}")))?;
    }
    #[allow(unused_assignments)]
    let mut json_out: Option<String> = None;
    let mut exit = 0i32;
    match cli.command {
        Command::Special { sub } => match sub {
            SpecialCmd::ZetaNeg { k } => {
                let v = special::zeta_neg(k)?;
                println!("zeta({}) = {}", 1 - k, format_rat(&v));
                json_out = Some(format!(
                    "{{\"s\":{},\"value\":\"{}\"}}",
                    1 - k,
                    format_rat(&v)
                ));
            }
            SpecialCmd::LNeg { m, disc } => {
                let chi = KroneckerChar::from_disc(disc)?;
                let v = special::l_neg(m, &chi)?;
                println!("L({}, chi_{}) = {}", 1 - m, chi.disc(), format_rat(&v));
                json_out = Some(format!(
                    "{{\"s\":{},\"disc\":{},\"value\":\"{}\"}}",
                    1 - m,
                    chi.disc(),
                    format_rat(&v)
                ));
            }
        },
        Command::Elliptic { sub } => match sub {
            EllipticCmd::Eigenform { weight, prec } => {
                let forms = qexp::eigenforms(weight, prec)?;
                let mut blobs = Vec::new();
                for f in &forms {
                    let coeffs: Vec<String> = f
                        .eigen_coeffs
                        .coeffs()
                        .iter()
                        .map(|c| format!("\"{c}\""))
                        .collect();
                    blobs.push(format!(
                        "{{\"weight\":{},\"D\":{},\"label\":\"{}\",\"coeffs\":[{}]}}",
                        f.weight,
                        f.hecke_field_d,
                        f.label,
                        coeffs.join(",")
                    ));
                    println!(
                        "weight {} form {}: field D = {}, a(2) = {}",
                        f.weight,
                        f.label,
                        f.hecke_field_d,
                        f.coeff(2)
                    );
                }
                json_out = Some(format!("[{}]", blobs.join(",")));
            }
        },
        Command::Lratio(a) => {
            let weight = 2 * a.k + a.j - 2;
            let l1 = a.k + a.j;
            let l2 = lvalue::harder_denominator_point(a.k, a.j);
            let n_coeffs = lvalue::terms_needed(weight, 1040);
            let forms = qexp::eigenforms(weight, n_coeffs)?;
            let mut ratios = Vec::new();
            for f in forms.iter().filter(|f| f.label == "+") {
                let r = lvalue::critical_ratio(f, l1, l2)?;
                println!(
                    "ratio Lambda({l1})/Lambda({l2}) for weight {weight}: {}",
                    r.value
                );
                println!("  norm = {}", format_rat(&r.value.norm()));
                ratios.push(r.value);
            }
            let hits = lvalue::harder_prime_scan(a.k, a.j, a.pmax)?;
            let ps: Vec<String> = hits.iter().map(|h| h.p.to_string()).collect();
            println!("qualifying primes up to {}: {{{}}}", a.pmax, ps.join(", "));
            let ratio_strs: Vec<String> = ratios.iter().map(|r| format!("\"{r}\"")).collect();
            json_out = Some(format!(
                "{{\"k_j\":{l2},\"ratio\":[{}],\"qualifying_primes\":[{}]}}",
                ratio_strs.join(","),
                ps.join(",")
            ));
        }
        Command::Fp(a) => {
            let b = HalfIntegralMat::parse_json(&a.two_t)?;
            let r = siegel::fp(&b, a.p)?;
            let gamma_str = siegel::LocalSeriesPoly {
                p: a.p,
                coeffs: r.gamma.polynomial(),
            }
            .display();
            println!("gamma_{}(B, X) = {}", a.p, gamma_str);
            println!("F_{}(B, X) = {}", a.p, r.fp.display());
            println!("depth used: {}", r.depth_used);
            json_out = Some(format!(
                "{{\"gamma\":\"{}\",\"F\":\"{}\",\"depth_used\":{}}}",
                gamma_str,
                r.fp.display(),
                r.depth_used
            ));
        }
        Command::Eisenstein(a) => {
            let t = HalfIntegralMat::parse_json(&a.two_t)?;
            let spec = EisensteinSpec::new(a.degree, a.weight, a.normalized)?;
            let v = eisenstein_coeff(&spec, &t)?;
            let name = if a.normalized { "normalized" } else { "unnormalized" };
            println!(
                "a(T, {name} E_{{{},{}}}) = {}",
                a.degree,
                a.weight,
                format_rat(&v)
            );
            json_out = Some(format!("{{\"value\":\"{}\"}}", format_rat(&v)));
        }
        Command::Diffop { sub } => match sub {
            DiffopCmd::Ql { l, n1, n2, k } => {
                let weight = match k {
                    Some(kv) => Weight::Numeric(parse_rat(&kv.to_string())?),
                    None => Weight::Formal,
                };
                let q = diffop::ql_kernel(l, n1, n2, &weight)?;
                println!("Q_{l} for partition ({n1}, {n2}): {} terms", q.num_terms());
                println!("{q}");
                json_out = Some(format!("{{\"terms\":{},\"poly\":\"{q}\"}}", q.num_terms()));
            }
            DiffopCmd::VerifyAppendixB { l } => {
                let report = diffop::verify_fundamental_table();
                let (pass, total) = report.count();
                println!("fundamental formulas: {pass}/{total} pass");
                for row in &report.rows {
                    if !row.pass {
                        println!("  FAIL {}: computed {}", row.name, row.computed);
                    }
                }
                diffop::verify_product_lemmas(2, 2)?;
                println!("graded product lemmas: pass");
                for ll in 0..=l {
                    diffop::action_on_delta(ll)?;
                    println!("closed-form action at l = {ll}: pass");
                }
                if !report.all_pass() {
                    exit = 1;
                }
                json_out = Some(format!(
                    "{{\"table_pass\":{pass},\"table_total\":{total},\"action_max_l\":{l}}}"
                ));
            }
        },
        Command::Epsilon(a) => {
            let t1 = HalfIntegralMat::parse_json(&a.t1)?;
            let t2 = HalfIntegralMat::parse_json(&a.t2)?;
            if t1.size() != a.n1 || t2.size() != a.n2 {
                return Err(Error::Usage("matrix sizes disagree with --n1/--n2".into()));
            }
            let value = epsilon::epsilon(a.k, a.l, &t1, &t2)?;
            match (&a.u1, &a.u2) {
                (Some(u1), Some(u2)) => {
                    let m1 = parse_int_matrix(u1)?;
                    let m2 = parse_int_matrix(u2)?;
                    // match slots by shape: the 2 x n1 one is U
                    let (u, v) = if m1.first().map(|r| r.len()) == Some(a.n1) && a.n1 != a.n2 {
                        (m1, m2)
                    } else if m2.first().map(|r| r.len()) == Some(a.n1) && a.n1 != a.n2 {
                        (m2, m1)
                    } else {
                        (m1, m2)
                    };
                    let x = eval_epsilon(&value, &u, &v)?;
                    println!("epsilon value = {}", format_rat(&x));
                    json_out = Some(format!("{{\"value\":\"{}\"}}", format_rat(&x)));
                }
                _ => {
                    println!("epsilon polynomial ({} terms):", value.value.num_terms());
                    println!("{}", value.value);
                    json_out = Some(format!(
                        "{{\"terms\":{},\"poly\":\"{}\"}}",
                        value.value.num_terms(),
                        value.value
                    ));
                }
            }
        }
        Command::Lifts { sub } => match sub {
            LiftsCmd::Weights { theorem, k, j, n, d } => {
                if n != 0 {
                    return Err(Error::Usage(
                        "base eigenform weights for n > 0 are not wired through the CLI".into(),
                    ));
                }
                let merged = match theorem.as_str() {
                    "atobe1" => lifts::atobe1_weight(k, j, &[], d)?,
                    "atobe2" => lifts::atobe2_weight(k, d, &[])?.0,
                    other => return Err(Error::Usage(format!("unknown theorem {other:?}"))),
                };
                println!("merged weight: {merged:?}");
                let strs: Vec<String> = merged.iter().map(|x| x.to_string()).collect();
                json_out = Some(format!("{{\"weights\":[{}]}}", strs.join(",")));
            }
            LiftsCmd::SignCheck { spec } => {
                let psi = parse_parameter_json(&spec)?;
                let ok = lifts::sign_condition(&psi)?;
                let ic = lifts::inf_char(&psi);
                println!(
                    "infinitesimal character (doubled): {:?}",
                    ic.twice_eigenvalues
                );
                println!("sign condition: {}", if ok { "holds" } else { "fails" });
                if !ok {
                    exit = 1;
                }
                json_out = Some(format!("{{\"sign_condition\":{ok}}}"));
            }
        },
        Command::Verify(a) => {
            let store = locate_fixtures(a.fixtures.as_deref())?;
            let t0 = std::time::Instant::now();
            let mut report = epsilon::verify_section8(&a.case, &store)?;
            report.elapsed_ms = t0.elapsed().as_millis();
            report.print_human();
            if !report.passed() {
                exit = 1;
            }
            json_out = Some(report.to_json());
        }
    }
    if let (Some(path), Some(body)) = (cli.json.as_ref(), json_out) {
        std::fs::write(path, body)?;
    }
    Ok(exit)
}


fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
