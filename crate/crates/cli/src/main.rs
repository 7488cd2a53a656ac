use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use hyperlat::claims::{self, RunConfig};
use hyperlat::lattices::catalog::{catalog, listing_names};
use hyperlat::lorentz::{LorentzLattice, LorentzVector};
use hyperlat::reduce::census::{orbit_census, CensusOptions};
use hyperlat::reduce::{Certificate, Reducer};
use hyperlat::rings::Scalar;
use hyperlat::zlat::{self, q_to_f64};

const FORMAT: u32 = 1;

#[derive(Parser)]
#[command(name = "hyperlat", version, about = "Hermitian lattices, Lorentzian reflections and null-vector reduction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog lattices, or print one Gram matrix
    Catalog {
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce a primitive null vector of Λ ⊕ II₁,₁ and write a certificate
    Reduce {
        /// definite part Λ, by catalog name
        #[arg(long)]
        lattice: String,
        /// vector as JSON: [λ…, μ, ν] coordinate arrays or {"lambda","mu","nu"}; @path reads a file
        vector: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// write the height trace as CSV
        #[arg(long)]
        dump_trace: Option<PathBuf>,
    },
    /// Check a claim (or `all`) and print its report
    Verify {
        claim: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// sample or instance count, overriding the claim's default
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Orbit census of primitive null vectors of Λ ⊕ II₁,₁ up to a height bound
    Census {
        #[arg(long)]
        lattice: String,
        /// bound on |ht|², an integer or p/q
        #[arg(long)]
        bound: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// random walks used to search for unit witnesses
        #[arg(long)]
        budget: Option<usize>,
        /// exit 1 unless the census finds this many classes
        #[arg(long)]
        expect: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

type Res = Result<bool, Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn check<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Check(e.to_string())
}

fn emit<T: Serialize>(value: &T, out: &Option<PathBuf>) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(check)?;
    s.push('\n');
    match out {
        Some(p) => std::fs::write(p, s).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

fn cmd_catalog(name: Option<String>, out: &Option<PathBuf>) -> Res {
    match name {
        None => {
            let mut entries = Vec::new();
            for n in listing_names() {
                let l = catalog(&n).map_err(check)?;
                entries.push(json!({ "name": n, "fingerprint": l.fingerprint() }));
            }
            emit(&json!({ "format": FORMAT, "entries": entries }), out)?;
        }
        Some(n) => {
            let l = catalog(&n).map_err(usage)?;
            let selfdual = l.is_selfdual().map_err(check)?;
            emit(
                &json!({
                    "format": FORMAT,
                    "name": n,
                    "ring": l.ring(),
                    "rank": l.rank(),
                    "gram": l.gram().rows,
                    "selfdual": selfdual,
                    "even": l.is_even(),
                    "fingerprint": l.fingerprint(),
                }),
                out,
            )?;
        }
    }
    Ok(true)
}

fn parse_vector(l: &LorentzLattice, text: &str) -> Result<LorentzVector, Failure> {
    let text = match text.strip_prefix('@') {
        Some(p) => std::fs::read_to_string(p).map_err(|e| usage(format!("{p}: {e}")))?,
        None => text.to_string(),
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| usage(format!("vector is not JSON: {e}")))?;
    let ring = l.ring();
    let vec = match v {
        Value::Object(_) => serde_json::from_value::<LorentzVector>(v).map_err(|e| usage(format!("bad vector: {e}")))?,
        Value::Array(items) => {
            let mut flat = Vec::new();
            for (k, item) in items.into_iter().enumerate() {
                let item = match item {
                    Value::Array(_) => json!({ "ring": ring, "coords": item }),
                    other => other,
                };
                let s: Scalar = serde_json::from_value(item)
                    .map_err(|e| usage(format!("bad entry {k}: {e}")))?;
                flat.push(s);
            }
            if flat.len() != l.dim() {
                return Err(usage(format!("expected {} entries, got {}", l.dim(), flat.len())));
            }
            LorentzVector::from_flat(&flat)
        }
        _ => return Err(usage("vector must be an array or an object")),
    };
    if vec.lambda.len() != l.n() || vec.ring() != ring {
        return Err(usage("vector does not match the lattice"));
    }
    Ok(vec)
}

fn write_trace(c: &Certificate, path: &PathBuf) -> Result<(), Failure> {
    let io = |e: csv::Error| usage(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["step", "height_norm", "height_norm_float"]).map_err(io)?;
    for (k, h) in c.height_trace.iter().enumerate() {
        w.write_record([k.to_string(), h.to_string(), q_to_f64(h).to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn cmd_reduce(lattice: &str, vector: &str, out: &Option<PathBuf>, trace: &Option<PathBuf>) -> Res {
    let base = catalog(lattice).map_err(usage)?;
    if !base.is_positive_definite() {
        return Err(usage(format!("{lattice} is not positive definite")));
    }
    let l = LorentzLattice::new(base);
    let v = parse_vector(&l, vector)?;
    let reducer = Reducer::new(l.clone());
    let cert = reducer.reduce(&v).map_err(usage)?;
    cert.verify(&l).map_err(check)?;
    if let Some(p) = trace {
        write_trace(&cert, p)?;
    }
    emit(
        &json!({ "format": FORMAT, "lattice": lattice, "verified": true, "certificate": cert }),
        out,
    )?;
    Ok(true)
}

fn cmd_verify(claim: &str, cfg: &RunConfig, out: &Option<PathBuf>) -> Res {
    let ids = if claim == "all" { claims::claim_ids() } else { vec![claim.to_string()] };
    let mut reports = Vec::new();
    for id in &ids {
        let r = claims::verify(id, cfg).map_err(|e| match e {
            claims::ClaimError::UnknownClaim(_) => usage(e),
            other => check(other),
        })?;
        reports.push(r);
    }
    reports.sort_by(|a, b| a.claim.cmp(&b.claim));
    let ok = reports.iter().all(|r| r.passed());
    if claim == "all" {
        emit(&json!({ "format": FORMAT, "reports": reports }), out)?;
    } else {
        emit(&reports[0], out)?;
    }
    Ok(ok)
}

fn cmd_census(
    lattice: &str,
    bound: &str,
    seed: u64,
    budget: Option<usize>,
    expect: Option<usize>,
    out: &Option<PathBuf>,
) -> Res {
    let base = catalog(lattice).map_err(usage)?;
    let bound = zlat::parse_q(bound).ok_or_else(|| usage(format!("bad bound {bound:?}")))?;
    let l = LorentzLattice::new(base);
    let mut opts = CensusOptions { seed, ..Default::default() };
    if let Some(b) = budget {
        opts.witness_walks = b;
    }
    let rep = orbit_census(&l, &bound, &opts).map_err(check)?;
    let ok = expect.map_or(true, |e| e == rep.class_count());
    emit(&json!({ "format": FORMAT, "census": rep, "class_count": rep.class_count() }), out)?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Catalog { name, out } => cmd_catalog(name.clone(), out),
        Command::Reduce { lattice, vector, out, dump_trace } => cmd_reduce(lattice, vector, out, dump_trace),
        Command::Verify { claim, seed, budget, out } => {
            cmd_verify(claim, &RunConfig { seed: *seed, budget: *budget }, out)
        }
        Command::Census { lattice, bound, seed, budget, expect, out } => {
            cmd_census(lattice, bound, *seed, *budget, *expect, out)
        }
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
