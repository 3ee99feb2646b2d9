//! Command-line front end.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::cohomology::{classify_pointed, inflate, kappa, product_cocycle, Cocycle3};
use crate::cyclo::{factorize, is_prime};
use crate::equiv::{find_equivalence, galois_permutation, is_equivalence};
use crate::groups::{Group, GroupKind};
use crate::modular::{compute_modular_data, kronecker, verify_modular, ModularData, VerificationReport, VerlindePolicy};
use crate::reproduce::{matches_kronecker, reproduce, validate};
use crate::simples::metacyclic_rank;

pub const EXIT_OK: u8 = 0;
pub const EXIT_NOT_EQUIVALENT: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_VERIFICATION: u8 = 3;

/// Ranks above this need an explicit opt-in for the product run.
const LARGE_RANK: u64 = 2000;

#[derive(Parser, Debug)]
#[command(name = "moddata", version, about = "Exact modular data of twisted Drinfeld doubles")]
pub struct Cli {
    /// Worker threads for the parallel S-matrix and verification loops.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print machine-readable JSON to standard output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute and verify (S, T) for a group and twist.
    Compute(ComputeArgs),
    /// Decide whether two modular data files agree up to relabeling.
    Compare {
        path1: PathBuf,
        path2: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count pointed fusion categories of dimension p*q.
    Classify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
    },
    /// Re-run the modular axiom checks on a data file.
    Verify {
        path: PathBuf,
        /// Also compute the Galois permutation for this exponent.
        #[arg(long)]
        t: Option<i64>,
    },
    /// Re-derive every claim of the catalog for the given primes.
    Reproduce {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Allow product runs above rank 2000 (slow, memory hungry).
        #[arg(long)]
        allow_large: bool,
    },
}

#[derive(Args, Debug)]
struct ComputeArgs {
    /// Group spec: `pq:5,11`, `pq:5,11,n=3`, `cyclic:35`, `prod:(X)x(Y)`.
    spec: Option<String>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    /// Second factor prime; builds `prod:(pq:p,q)x(pq:p,r)`.
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, default_value_t = 0)]
    u: u64,
    #[arg(long, default_value_t = 0)]
    v: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure(u8, String);

type CliResult = Result<u8, Failure>;

fn invalid(msg: impl std::fmt::Display) -> Failure {
    Failure(EXIT_INVALID, msg.to_string())
}

pub fn run_from_env() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli))
}

pub fn run(cli: Cli) -> u8 {
    if let Some(k) = cli.threads {
        // ignore the error when a pool is already installed (repeated calls)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    let json = cli.json;
    let result = match cli.command {
        Command::Compute(args) => cmd_compute(&args, json),
        Command::Compare { path1, path2, out } => cmd_compare(&path1, &path2, out.as_deref(), json),
        Command::Classify { p, q } => cmd_classify(p, q, json),
        Command::Verify { path, t } => cmd_verify(&path, t, json),
        Command::Reproduce { p, q, r, out, allow_large } => cmd_reproduce(p, q, r, out.as_deref(), allow_large, json),
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

fn group_spec(args: &ComputeArgs) -> Result<String, Failure> {
    match (&args.spec, args.p, args.q) {
        (Some(s), None, None) => Ok(s.clone()),
        (None, Some(p), Some(q)) => {
            let n = args.n.map(|n| format!(",n={n}")).unwrap_or_default();
            Ok(match args.r {
                Some(r) => format!("prod:(pq:{p},{q}{n})x(pq:{p},{r}{n})"),
                None => format!("pq:{p},{q}{n}"),
            })
        }
        (Some(_), _, _) => Err(invalid("give either a spec string or --p/--q, not both")),
        _ => Err(invalid("missing group: give a spec string or --p and --q")),
    }
}

/// The twist selected by `u` (and `v` on products).
pub fn cocycle_for(group: &Group, u: u64, v: u64, p_hint: Option<u64>) -> Result<Cocycle3, String> {
    match group.kind() {
        GroupKind::Metacyclic { p, .. } => {
            if u >= *p {
                return Err(format!("u = {u} out of range 0..{p}"));
            }
            inflate(&kappa(*p, u).map_err(|e| e.to_string())?, group).map_err(|e| e.to_string())
        }
        GroupKind::Cyclic { n } => {
            if u == 0 {
                return Ok(Cocycle3::trivial(group));
            }
            let p = match p_hint {
                Some(p) => p,
                None => factorize(*n).first().map(|&(p, _)| p).ok_or("cyclic group of order 1 has no twist")?,
            };
            if u >= p {
                return Err(format!("u = {u} out of range 0..{p}"));
            }
            inflate(&kappa(p, u).map_err(|e| e.to_string())?, group).map_err(|e| e.to_string())
        }
        GroupKind::Product(l, r) => {
            if u == 0 && v == 0 {
                return Ok(Cocycle3::trivial(group));
            }
            let bound = match l.kind() {
                GroupKind::Metacyclic { p, .. } => *p,
                _ => 0,
            };
            if u >= bound || v >= bound {
                return Err(format!("(u, v) = ({u}, {v}) out of range for {}", group.spec()));
            }
            product_cocycle(l, r, u, v).map_err(|e| e.to_string())
        }
    }
}

fn policy_for(rank: usize) -> VerlindePolicy {
    if rank <= 25 {
        VerlindePolicy::Full
    } else {
        VerlindePolicy::Sampled { count: 200, seed: 0x5eed }
    }
}

/// Above this rank the cubic matrix products are replaced by the factor
/// strategy on products.
const DIRECT_VERIFY_RANK: usize = 400;

fn cmd_compute(args: &ComputeArgs, json: bool) -> CliResult {
    let spec = group_spec(args)?;
    let group: Group = spec.parse().map_err(|e| invalid(format!("{spec}: {e}")))?;
    let omega = cocycle_for(&group, args.u, args.v, args.p).map_err(invalid)?;
    let (md, simples) = compute_modular_data(&omega).map_err(invalid)?;

    let (passed, summary) = if md.rank() <= DIRECT_VERIFY_RANK {
        let report = verify_modular(&md, policy_for(md.rank()));
        (report.all_passed(), report_json(&report))
    } else if let GroupKind::Product(l, r) = group.kind() {
        // exact O(rank^3) checks are out of reach; verify the factors and
        // that the data is their Kronecker product
        let (wl, wr) = omega.split_product().ok_or_else(|| invalid("cocycle does not split"))?;
        let ml = compute_modular_data(&wl).map_err(invalid)?.0;
        let mr = compute_modular_data(&wr).map_err(invalid)?.0;
        let (rl, rr) = (verify_modular(&ml, policy_for(ml.rank())), verify_modular(&mr, policy_for(mr.rank())));
        let kron_ok = matches_kronecker(&md, &simples, &kronecker(&ml, &mr));
        let passed = rl.all_passed() && rr.all_passed() && kron_ok;
        let summary = json!({
            "strategy": "factors",
            "left": { "group": l.spec(), "checks": report_json(&rl) },
            "right": { "group": r.spec(), "checks": report_json(&rr) },
            "kronecker": kron_ok,
        });
        (passed, summary)
    } else {
        return Err(invalid(format!("rank {} too large for exact verification", md.rank())));
    };

    if let Some(path) = &args.out {
        fs::write(path, md.to_json()).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    }
    if json {
        let out = json!({
            "group": md.meta().group,
            "twist": md.meta().twist,
            "rank": md.rank(),
            "conductor": md.conductor(),
            "verified": passed,
            "verification": summary,
        });
        println!("{out}");
    } else {
        println!("group {}", md.meta().group);
        println!("twist {:?}", md.meta().twist);
        println!("rank {}", md.rank());
        println!("conductor {}", md.conductor());
        println!("verification {} {}", if passed { "pass" } else { "FAIL" }, summary);
    }
    Ok(if passed { EXIT_OK } else { EXIT_VERIFICATION })
}

fn report_json(report: &VerificationReport) -> serde_json::Value {
    serde_json::to_value(&report.checks).expect("serializable")
}

fn load(path: &Path) -> Result<ModularData, Failure> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    ModularData::from_json(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn cmd_compare(path1: &Path, path2: &Path, out: Option<&Path>, json: bool) -> CliResult {
    let md1 = load(path1)?;
    let md2 = load(path2)?;
    match find_equivalence(&md1, &md2) {
        Some(pi) => {
            if !is_equivalence(&md1, &md2, &pi) {
                return Err(Failure(EXIT_VERIFICATION, "witness failed re-verification".into()));
            }
            let text = serde_json::to_string(&pi).expect("serializable");
            if let Some(path) = out {
                fs::write(path, &text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            }
            if json {
                println!("{}", json!({ "equivalent": true, "permutation": pi }));
            } else {
                println!("equivalent");
                println!("{text}");
            }
            Ok(EXIT_OK)
        }
        None => {
            if json {
                println!("{}", json!({ "equivalent": false }));
            } else {
                println!("not equivalent");
            }
            Ok(EXIT_NOT_EQUIVALENT)
        }
    }
}

fn cmd_classify(p: u64, q: u64, json: bool) -> CliResult {
    if !is_prime(p) || !is_prime(q) {
        return Err(invalid(format!("{p} and {q} must both be prime")));
    }
    if p >= q {
        return Err(invalid(format!("need p < q, got p = {p}, q = {q}")));
    }
    let c = classify_pointed(p, q).map_err(invalid)?;
    let condition = match c.branch {
        crate::cohomology::ClassificationBranch::OddDividing => "p odd and p | q-1",
        crate::cohomology::ClassificationBranch::OddNotDividing => "p odd and p does not divide q-1",
        crate::cohomology::ClassificationBranch::Dihedral => "p = 2",
    };
    if json {
        let out = json!({
            "p": p, "q": q,
            "orbits_p": c.orbits_p, "orbits_q": c.orbits_q,
            "abelian": c.abelian, "nonabelian": c.nonabelian,
            "total": c.total, "condition": condition,
        });
        println!("{out}");
    } else {
        println!("orbits on H^3(Z_{p}): {}", c.orbits_p);
        println!("orbits on H^3(Z_{q}): {}", c.orbits_q);
        println!("cyclic group Z_{}: {}", p * q, c.abelian);
        println!("nonabelian group: {}", c.nonabelian);
        println!("condition: {condition}");
        println!("total {}", c.total);
    }
    Ok(EXIT_OK)
}

fn cmd_verify(path: &Path, t: Option<i64>, json: bool) -> CliResult {
    let md = load(path)?;
    if md.rank() > DIRECT_VERIFY_RANK {
        return Err(invalid(format!("rank {} too large for exact verification", md.rank())));
    }
    let report = verify_modular(&md, policy_for(md.rank()));
    let galois = t.map(|t| galois_permutation(&md, t));
    let galois_ok = galois.as_ref().is_none_or(|g| g.is_ok());
    if json {
        let g = galois.as_ref().map(|g| match g {
            Ok(pi) => json!({ "ok": true, "permutation": pi }),
            Err(e) => json!({ "ok": false, "error": e.to_string() }),
        });
        println!("{}", json!({ "rank": md.rank(), "checks": report_json(&report), "galois": g }));
    } else {
        println!("rank {}", md.rank());
        for c in &report.checks {
            println!("{:<20} {} {}", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail);
        }
        match &galois {
            Some(Ok(pi)) => println!("galois permutation {}", serde_json::to_string(pi).expect("serializable")),
            Some(Err(e)) => println!("galois FAIL {e}"),
            None => {}
        }
    }
    Ok(if report.all_passed() && galois_ok { EXIT_OK } else { EXIT_VERIFICATION })
}

fn cmd_reproduce(p: u64, q: u64, r: Option<u64>, out: Option<&Path>, allow_large: bool, json: bool) -> CliResult {
    validate(p, q, r).map_err(invalid)?;
    if let Some(r) = r {
        let rank = metacyclic_rank(p, q) * metacyclic_rank(p, r);
        if rank > LARGE_RANK && !allow_large {
            return Err(invalid(format!(
                "product rank {rank} needs hours and tens of GB for the {} direct runs; pass --allow-large to proceed",
                p * p
            )));
        }
    }
    let report = reproduce(p, q, r).map_err(invalid)?;
    if let Some(path) = out {
        fs::write(path, report.to_json()).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    }
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_table());
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFICATION })
}
