use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use ybh_core::complex::TupleBasis;
use ybh_core::links::random_braids;
use ybh_core::{
    cohomology, from_rump, invariant, invariant_unchecked, markov_check, parse_braid, splitting_report, verify_solution,
    AbelianGroupInvariants, ChainComplex, CocycleTable, Coefficients, Error, FiniteMagma, HomologyCalculator, Limits,
    Theory,
};

const CAPS: &str = "\
Degree caps: H_n needs the boundary ∂_{n+1} with m^(n+1) columns, capped at 2^16
unless --force is given. Largest default degree by magma size m:
  m=2: n<=15   m=3: n<=9   m=4: n<=7   m=5..6: n<=5   m=7..16: n<=3
Typical runtimes: m=4, n=5 takes well under a second; m=16, n=3 takes about a minute.";

#[derive(Parser)]
#[command(name = "ybh", version, about = "Rump right quasigroups, Yang-Baxter homology and cocycle link invariants", after_help = CAPS)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MagmaArg {
    /// cyclic:n, dihedral:n, alexander:n:t, trivial:n, x4, x16 or file:PATH
    /// (order on the first line, then 1-based Cayley table rows).
    #[arg(long)]
    magma: String,
}

#[derive(Subcommand)]
enum Command {
    /// Structure of the magma and of its Yang-Baxter solution.
    Check {
        #[command(flatten)]
        magma: MagmaArg,
    },
    /// Homology groups H_n for one or all theories.
    #[command(after_help = CAPS)]
    Homology {
        #[command(flatten)]
        magma: MagmaArg,
        /// yb, d or nyb; all three when omitted.
        #[arg(long)]
        theory: Option<Theory>,
        /// A single degree.
        #[arg(long, conflicts_with = "max_degree")]
        degree: Option<usize>,
        /// Degrees 1..=N.
        #[arg(long)]
        max_degree: Option<usize>,
        /// Coefficients Z/m; integral when omitted or 0.
        #[arg(long = "mod", default_value_t = 0)]
        modulus: u64,
        /// Lift the size cap.
        #[arg(long)]
        force: bool,
    },
    /// H^n(X; Z/m) with a generating set of cocycles (0-based tuples).
    #[command(after_help = CAPS)]
    Cocycles {
        #[command(flatten)]
        magma: MagmaArg,
        #[arg(long, default_value = "nyb")]
        theory: Theory,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long)]
        force: bool,
    },
    /// The cocycle invariant of a braid closure.
    Invariant {
        #[command(flatten)]
        magma: MagmaArg,
        /// builtin:product-mod:k, builtin:zero:k or a cocycle file.
        #[arg(long)]
        cocycle: String,
        /// Whitespace-separated letters: i is σ_i, -i its inverse.
        #[arg(long, allow_hyphen_values = true)]
        braid: String,
        /// Strand count, at least 1 + max |letter|.
        #[arg(long)]
        strands: Option<usize>,
        /// Skip the cocycle check; the result need not be an invariant.
        #[arg(long = "unsafe")]
        skip_check: bool,
    },
    /// Runs every applicable consistency check.
    #[command(after_help = CAPS)]
    Verify {
        #[command(flatten)]
        magma: MagmaArg,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long)]
        force: bool,
    },
}

/// Outcome of a command: `Ok(true)` passes, `Ok(false)` is a mathematical failure.
type Outcome = Result<bool, Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.command {
        Command::Check { magma } => check(&magma.magma, cli.json),
        Command::Homology { magma, theory, degree, max_degree, modulus, force } => {
            let degrees = match (degree, max_degree) {
                (Some(n), _) => n..=n,
                (None, Some(n)) => 1..=n,
                (None, None) => 1..=3,
            };
            homology_cmd(&magma.magma, theory, degrees, modulus, force, cli.json)
        }
        Command::Cocycles { magma, theory, degree, modulus, force } => {
            cocycles_cmd(&magma.magma, theory, degree, modulus, force, cli.json)
        }
        Command::Invariant { magma, cocycle, braid, strands, skip_check } => {
            invariant_cmd(&magma.magma, &cocycle, &braid, strands, skip_check, cli.json)
        }
        Command::Verify { magma, max_degree, force } => verify_cmd(&magma.magma, max_degree, force, cli.json),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotRightQuasigroup
        | Error::NotRump
        | Error::NotRightNondegenerate
        | Error::NotRumpSolution
        | Error::Cocycle(_) => 1,
        _ => 2,
    }
}

fn limits(force: bool) -> Limits {
    Limits { force, ..Limits::default() }
}

fn load_magma(spec: &str) -> Result<FiniteMagma, Error> {
    FiniteMagma::builtin(spec)
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn check(spec: &str, as_json: bool) -> Outcome {
    let magma = load_magma(spec)?;
    let structure = magma.structure_report();
    let solution = from_rump(&magma).ok().map(|r| verify_solution(&r));
    let passed = solution.is_some_and(|s| structure.rump && s.ybe && s.involutive);
    if as_json {
        print_json(&json!({ "structure": structure, "solution": solution, "passed": passed }));
    } else {
        let s = serde_json::to_value(structure).expect("serializable");
        for (k, v) in s.as_object().expect("object") {
            println!("{k}={v}");
        }
        match solution {
            Some(r) => {
                let r = serde_json::to_value(r).expect("serializable");
                for (k, v) in r.as_object().expect("object") {
                    println!("{k}={v}");
                }
            }
            None => println!("solution: not a Rump right quasigroup"),
        }
    }
    Ok(passed)
}

fn homology_cmd(
    spec: &str,
    theory: Option<Theory>,
    degrees: std::ops::RangeInclusive<usize>,
    modulus: u64,
    force: bool,
    as_json: bool,
) -> Outcome {
    if *degrees.start() == 0 {
        return Err(Error::Parse("degrees start at 1".into()));
    }
    let magma = load_magma(spec)?;
    let complex = ChainComplex::from_magma(&magma)?;
    let coefficients = Coefficients::from_modulus(modulus)?;
    let theories: Vec<Theory> = theory.map_or(Theory::ALL.to_vec(), |t| vec![t]);
    let mut table: Vec<(Theory, Vec<AbelianGroupInvariants>)> = Vec::new();
    for &t in &theories {
        let mut calc = HomologyCalculator::new(&complex, limits(force));
        let groups = degrees.clone().map(|n| calc.homology(n, t, coefficients)).collect::<Result<Vec<_>, _>>()?;
        table.push((t, groups));
    }
    if as_json {
        let rows: Vec<Value> = table
            .iter()
            .flat_map(|(t, groups)| {
                degrees.clone().zip(groups).map(move |(n, g)| {
                    json!({ "theory": t.label(), "degree": n, "group": g.to_json(), "text": g.to_string() })
                })
            })
            .collect();
        print_json(&json!({ "magma": spec, "modulus": modulus, "homology": rows }));
    } else if table.len() == 1 && degrees.clone().count() == 1 {
        println!("{}", table[0].1[0]);
    } else {
        let mut header = vec!["n".to_string()];
        header.extend(degrees.clone().map(|n| n.to_string()));
        let mut rows = vec![header];
        for (t, groups) in &table {
            let mut row = vec![format!("H^{}", t.label())];
            row.extend(groups.iter().map(ToString::to_string));
            rows.push(row);
        }
        print_table(&rows);
    }
    Ok(true)
}

fn print_table(rows: &[Vec<String>]) {
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    for row in rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
        println!("{}", cells.join("  ").trim_end());
    }
}

fn cocycles_cmd(spec: &str, theory: Theory, degree: usize, modulus: u64, force: bool, as_json: bool) -> Outcome {
    let magma = load_magma(spec)?;
    let complex = ChainComplex::from_magma(&magma)?;
    let result = cohomology(&complex, degree, theory, modulus, limits(force))?;
    let tb = TupleBasis::new(magma.size(), degree)?;
    let nonzero = |c: &ybh_core::Cochain| -> Vec<(Vec<u32>, u64)> {
        c.values.iter().filter(|v| v.1 != 0).map(|&(rank, v)| (tb.unrank(rank), v)).collect()
    };
    if as_json {
        let cocycles: Vec<Value> = result.cocycles.iter().map(|c| json!(nonzero(c))).collect();
        print_json(&json!({
            "magma": spec,
            "theory": theory.label(),
            "degree": degree,
            "modulus": modulus,
            "group": result.group.to_json(),
            "text": result.group.to_string(),
            "cocycles": cocycles,
        }));
    } else {
        println!("H^{degree}_{}(X; Z_{modulus}) = {}", theory.label(), result.group);
        for (i, c) in result.cocycles.iter().enumerate() {
            println!("# cocycle {}", i + 1);
            println!("mod {modulus}");
            for (t, v) in nonzero(c) {
                let t: Vec<String> = t.iter().map(u32::to_string).collect();
                println!("{} {v}", t.join(" "));
            }
        }
    }
    Ok(true)
}

fn load_cocycle(spec: &str, size: usize) -> Result<CocycleTable, Error> {
    if spec.starts_with("builtin:") {
        CocycleTable::parse(spec, size)
    } else {
        CocycleTable::parse(&fs::read_to_string(spec)?, size)
    }
}

fn invariant_cmd(spec: &str, cocycle: &str, braid: &str, strands: Option<usize>, skip_check: bool, as_json: bool) -> Outcome {
    let magma = load_magma(spec)?;
    let phi = load_cocycle(cocycle, magma.size())?;
    let braid = parse_braid(braid, strands)?;
    let value = if skip_check { invariant_unchecked(&magma, &phi, &braid)? } else { invariant(&magma, &phi, &braid)? };
    if as_json {
        print_json(&value.to_json());
    } else {
        println!("{value}");
    }
    Ok(true)
}

struct CheckLine {
    name: String,
    passed: bool,
    detail: String,
}

fn verify_cmd(spec: &str, max_degree: usize, force: bool, as_json: bool) -> Outcome {
    let magma = load_magma(spec)?;
    let mut lines = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| lines.push(CheckLine { name: name.into(), passed, detail });
    let structure = magma.structure_report();
    push("rump", structure.rump, format!("right quasigroup={}", structure.right_quasigroup));
    if structure.rump {
        let m = magma.size();
        let report = verify_solution(&from_rump(&magma)?);
        push("ybe", report.ybe, String::new());
        push("involutive", report.involutive, String::new());
        push(
            "left non-degenerate iff uniquely 2-divisible",
            report.left_nondegenerate == structure.uniquely_2_divisible,
            format!("left non-degenerate={}", report.left_nondegenerate),
        );
        let failures = magma.rump_identity_failures()?;
        let detail = failures.iter().map(|f| format!("{} at {:?}", f.check, f.pair)).collect::<Vec<_>>().join("; ");
        push("rump identities", failures.is_empty(), detail);

        let limits = limits(force);
        let complex = ChainComplex::from_magma(&magma)?;
        let complex_degree = complex_cap(m, max_degree, limits);
        let report = complex.verify(complex_degree)?;
        let detail = report.counterexamples.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
        push(&format!("complex checks (n<={complex_degree})"), report.passed(), detail);

        let splitting = splitting_report(&magma, max_degree, limits)?;
        let detail = splitting
            .rows
            .iter()
            .map(|r| format!("n={}: {} = ({}) + ({})", r.degree, r.yb, r.normalized, r.degenerate))
            .collect::<Vec<_>>()
            .join("; ");
        let name = if splitting.cyclic_rack { "splitting (theorem)" } else { "splitting (conjecture)" };
        push(name, splitting.all_split(), detail);

        let (passed, detail) = markov_suite(&magma, &complex, limits)?;
        push("markov invariance", passed, detail);
    }
    let passed = lines.iter().all(|l| l.passed);
    if as_json {
        let checks: Vec<Value> =
            lines.iter().map(|l| json!({ "name": l.name, "passed": l.passed, "detail": l.detail })).collect();
        print_json(&json!({ "magma": spec, "passed": passed, "checks": checks }));
    } else {
        for l in &lines {
            let status = if l.passed { "pass" } else { "FAIL" };
            if l.detail.is_empty() {
                println!("{status}  {}", l.name);
            } else {
                println!("{status}  {}: {}", l.name, l.detail);
            }
        }
        println!("{}", if passed { "all checks passed" } else { "some checks failed" });
    }
    Ok(passed)
}

/// `∂∂ = 0` checks build `∂_n` with `m^n` columns.
fn complex_cap(m: usize, max_degree: usize, limits: Limits) -> usize {
    (2..=max_degree.max(2))
        .take_while(|&n| limits.force || (m as u64).pow(n as u32) <= limits.max_columns)
        .last()
        .unwrap_or(2)
}

/// Φ under Markov moves for the mod-2 degree-2 cocycle generators and a
/// few random braids.
fn markov_suite(magma: &FiniteMagma, complex: &ChainComplex, limits: Limits) -> Result<(bool, String), Error> {
    let m = magma.size();
    let mut tables = vec![CocycleTable::zero(m, 2)];
    match cohomology(complex, 2, Theory::Normalized, 2, limits) {
        Ok(c) => {
            for cochain in c.cocycles.iter().take(3) {
                tables.push(CocycleTable::from_cochain(cochain, m)?);
            }
        }
        Err(Error::ResourceLimit(_)) => {}
        Err(e) => return Err(e),
    }
    let max_strands = if m <= 4 { 3 } else { 2 };
    let braids = random_braids(0x5eed, 4, max_strands, 6);
    let mut checked = 0;
    for phi in &tables {
        phi.verify(magma)?;
        for (seed, braid) in braids.iter().enumerate() {
            let report = markov_check(magma, phi, braid, 4, seed as u64)?;
            checked += report.moves_checked;
            if let Some(f) = report.failures.first() {
                return Ok((false, format!("{} gives {} instead of {}", f.moved, f.found, f.expected)));
            }
        }
    }
    Ok((true, format!("{checked} moves over {} cocycles", tables.len())))
}
