mod domfile;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hyperdom::bounds::{self, LedgerOptions, TableFormat};
use hyperdom::codes::{double_dominating, hamming_graph_code_materialised};
use hyperdom::coverage::{check_domination_with, CheckOptions, DEFAULT_MAX_DIM, DEFAULT_MAX_UNDOMINATED, HARD_MAX_DIM};
use hyperdom::wedge::{canonical_decomposition, construct, theta2, MDecomposition};
use hyperdom::{oracle, Error};

/// Dominating sets of hypercubes: constructions, verification and bounds.
#[derive(Parser)]
#[command(name = "hyperdom", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print Θ²(q) = (θ, ξ, ψ, ξ').
    Theta { q: u64 },
    /// Print the canonical decompositions of 2^nhat − 1.
    Decompose {
        nhat: usize,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Build a dominating set and write it as a .dom file (or directory).
    Construct {
        kind: Kind,
        /// k for `hamming` (Q_{2^k−1}).
        k: Option<usize>,
        #[arg(long)]
        nhat: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        /// Explicit S for `wedge`, comma separated; default is canonical.
        #[arg(long, value_delimiter = ',')]
        s: Option<Vec<usize>>,
        /// Input set for `double`.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Check domination of the result before writing.
        #[arg(long)]
        verify: bool,
    },
    /// Check that a .dom file dominates Q_dim.
    Verify {
        #[arg(long)]
        dim: usize,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        histogram: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_UNDOMINATED)]
        max_undominated: usize,
        #[arg(long)]
        threads: Option<usize>,
        /// Raise the dimension cap to the hard limit.
        #[arg(long)]
        allow_large: bool,
    },
    /// Emit the bounds ledger.
    Bounds {
        #[arg(long, default_value_t = 33)]
        max_n: usize,
        #[arg(long, default_value = "figure1")]
        format: String,
        /// Replace the bundled seed file.
        #[arg(long)]
        seeds: Option<PathBuf>,
        /// Try every decomposition, not just the canonical ones.
        #[arg(long)]
        sweep: bool,
    },
    /// Lower bound (and optionally the exact value) of the largest
    /// 3-separated subset of Q_s.
    Lambda {
        s: usize,
        #[arg(long)]
        exact: bool,
    },
    /// Exact domination number of Q_n, n ≤ 6.
    Gamma { n: usize },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Hamming,
    Double,
    Wedge,
}

/// Errors that mean "too big to do here".
#[derive(Debug)]
struct Refusal(String);

impl std::fmt::Display for Refusal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Refusal {}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Refusal>().is_some() {
        return 3;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::DimensionOverLimit { .. } | Error::SearchInfeasible { .. } | Error::TooLarge(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Theta { q } => {
            let t = theta2(q);
            println!("theta={} xi={} psi={} xi'={}", t.theta, t.xi, t.psi, t.xi_prime);
        }
        Cmd::Decompose { nhat, m } => decompose(nhat, m)?,
        Cmd::Construct { kind, k, nhat, m, s, input, out, verify } => {
            return construct_cmd(kind, k, nhat, m, s, input, out, verify);
        }
        Cmd::Verify { dim, input, histogram, max_undominated, threads, allow_large } => {
            let set = domfile::read(&input)?;
            let opts = CheckOptions { max_dim: max_dim(allow_large)?, histogram, max_undominated, threads };
            return report(dim, &set, &opts);
        }
        Cmd::Bounds { max_n, format, seeds, sweep } => {
            let format: TableFormat = format.parse()?;
            if max_n > bounds::MAX_LEDGER_N {
                return Err(Refusal(format!("the ledger covers n <= {}, got {max_n}", bounds::MAX_LEDGER_N)).into());
            }
            let seeds = match seeds {
                Some(p) => Some(bounds::parse_seeds(
                    &std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?,
                )?),
                None => None,
            };
            let entries = bounds::best_bounds(max_n, &LedgerOptions { sweep_decompositions: sweep, seeds })?;
            print!("{}", bounds::render_table(&entries, format));
        }
        Cmd::Lambda { s, exact } => {
            if s == 0 {
                bail!("s must be at least 1");
            }
            let mut line = format!("lower={}", bounds::lambda_lower_big(s));
            if exact {
                let r = oracle::brute_force_lambda(s)?;
                write!(line, " exact={}", r.value)?;
                println!("{line}");
                for w in &r.witness {
                    println!("{w}");
                }
            } else {
                println!("{line}");
            }
        }
        Cmd::Gamma { n } => {
            let r = oracle::brute_force_gamma(n)?;
            println!("gamma={}", r.value);
            for w in &r.witness {
                println!("{w}");
            }
        }
    }
    Ok(0)
}

/// Dimension cap: `--allow-large` > `HYPERDOM_MAX_DIM` > default.
fn max_dim(allow_large: bool) -> Result<usize> {
    if allow_large {
        return Ok(HARD_MAX_DIM);
    }
    match std::env::var("HYPERDOM_MAX_DIM") {
        Ok(v) => {
            let d: usize = v.trim().parse().with_context(|| format!("HYPERDOM_MAX_DIM={v:?}"))?;
            Ok(d.min(HARD_MAX_DIM))
        }
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

fn report(dim: usize, set: &hyperdom::VertexSet, opts: &CheckOptions) -> Result<u8> {
    let r = check_domination_with(dim, set, opts)?;
    let total = r.vertex_count();
    println!(
        "dim={dim} members={} covered={}/{total} dominated={}",
        set.len(),
        r.covered_count,
        if r.is_dominated() { "yes" } else { "no" }
    );
    if !r.is_dominated() {
        println!("undominated_total={}", r.undominated_total);
        for w in &r.undominated {
            println!("undominated {w}");
        }
    }
    if let Some(h) = &r.multiplicity_histogram {
        for (k, c) in h {
            println!("multiplicity {k}: {c}");
        }
    }
    Ok(if r.is_dominated() { 0 } else { 1 })
}

fn decompose(nhat: usize, m: Option<usize>) -> Result<()> {
    let t = theta2(1u64 << nhat.min(62));
    let show = |d: &MDecomposition| {
        let s: Vec<String> = d.s().iter().map(|x| x.to_string()).collect();
        println!("m={} S={{{}}} target_n={}", d.m(), s.join(","), d.target_n());
    };
    match m {
        Some(m) => {
            if nhat >= 3 && m as u64 > t.psi {
                bail!("m = {m} is out of range for nhat = {nhat} (need m <= {})", t.psi);
            }
            show(&canonical_decomposition(nhat, m)?);
        }
        None => {
            let mut m = 0;
            while let Ok(d) = canonical_decomposition(nhat, m) {
                show(&d);
                m += 1;
            }
            if m == 0 {
                canonical_decomposition(nhat, 0)?;
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn construct_cmd(
    kind: Kind,
    k: Option<usize>,
    nhat: Option<usize>,
    m: Option<usize>,
    s: Option<Vec<usize>>,
    input: Option<PathBuf>,
    out: PathBuf,
    verify: bool,
) -> Result<u8> {
    let check = |set: &hyperdom::VertexSet| -> Result<u8> {
        if !verify {
            return Ok(0);
        }
        let opts = CheckOptions { max_dim: max_dim(false)?, ..Default::default() };
        report(set.dim(), set, &opts)
    };
    match kind {
        Kind::Hamming => {
            let Some(k) = k.or(nhat) else { bail!("construct hamming needs k") };
            let code = hamming_graph_code_materialised(k)?;
            let set = code.code().expect("materialised");
            println!("hamming k={k} dim={} predicted={} size={}", set.dim(), 1u64 << code.free_len(), set.len());
            domfile::write(&out, set)?;
            check(set)
        }
        Kind::Double => {
            let Some(input) = input else { bail!("construct double needs --in") };
            let delta = domfile::read(&input)?;
            if delta.dim() > 12 {
                return Err(Refusal(format!("doubling Q_{} gives Q_{}", delta.dim(), 2 * delta.dim() + 1)).into());
            }
            let set = double_dominating(&delta);
            println!(
                "double dim={} predicted={} size={}",
                set.dim(),
                (delta.len() as u64) << delta.dim(),
                set.len()
            );
            domfile::write(&out, &set)?;
            check(&set)
        }
        Kind::Wedge => {
            let Some(nhat) = nhat else { bail!("construct wedge needs --nhat") };
            let m = m.unwrap_or(0);
            let decomp = match s {
                Some(s) => MDecomposition::new((1usize << nhat.min(40)) - 1, m, s)?,
                None => canonical_decomposition(nhat, m)?,
            };
            if !decomp.satisfies_theorem() {
                bail!("m = {m} with |S| = {} is out of range (need m + |S| < theta)", decomp.s().len());
            }
            let r = construct(&decomp)?;
            println!(
                "wedge n={} D={} (predicted {}) V={} (predicted {}) result={}",
                r.target_n,
                r.d.len(),
                r.predicted_d,
                r.v.len(),
                r.predicted_v,
                r.result.len()
            );
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            domfile::write(&out.join("D.dom"), &r.d)?;
            domfile::write(&out.join("V.dom"), &r.v)?;
            domfile::write(&out.join("result.dom"), &r.result)?;
            let meta: BTreeMap<String, String> = std::iter::once(("nhat".to_string(), nhat.to_string()))
                .chain(r.metadata())
                .collect();
            let mut text = String::new();
            for (k, v) in meta {
                writeln!(text, "{k}={v}")?;
            }
            std::fs::write(out.join("meta.txt"), text)?;
            check(&r.result)
        }
    }
}
