//! `forbid`: exact searches, closed-form bounds, and witness pipelines for
//! codes and set families with forbidden agreement patterns.
//!
//! Exit codes: 0 success or witness found, 1 witness absent, 2 usage or
//! input error, 3 budget exhausted.

mod report;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use forbid_core::bounds::ledger::{constant_ledger, LedgerContext, LedgerValue};
use forbid_core::bounds::{self, primes};
use forbid_core::code::PAIR_SCAN_LIMIT;
use forbid_core::constructions;
use forbid_core::drc;
use forbid_core::io as fio;
use forbid_core::pipelines::{self, PipelineConfig};
use forbid_core::search::{self, ProofStatus, SearchBudget, SearchResult, SunflowerWitness};
use forbid_core::word::CoordinatePartition;
use forbid_core::{Code, Error, Result};

use report::{
    code_rows, exit_code, family_rows, subset_family_rows, word_line, word_row, Format, Report,
    EXIT_ABSENT, EXIT_BUDGET, EXIT_OK,
};

#[derive(Parser)]
#[command(
    name = "forbid",
    version,
    about = "searches, bounds, and pipelines for forbidden Hamming configurations"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form bounds and the evaluated constant chains.
    Bounds {
        #[command(subcommand)]
        op: BoundsCmd,
    },
    /// Exact maximum searches; the kind is inferred from the flags given.
    Search(SearchArgs),
    /// Count pairs at one distance, or print the whole distance set.
    Pairs(PairsArgs),
    /// Dependent-random-choice sampling, plans, and distance-pair extraction.
    Extract {
        #[command(subcommand)]
        op: ExtractCmd,
    },
    /// Find or build sunflower witnesses.
    Sunflower {
        #[command(subcommand)]
        op: SunflowerCmd,
    },
    /// Cross pairs between two codes at a target distance.
    Cross(CrossArgs),
    /// Supersaturation capture experiment with exact expectations.
    Supersat(SupersatArgs),
    /// Write reference constructions in the text formats.
    Construct {
        #[command(subcommand)]
        op: ConstructCmd,
    },
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Intersection-avoidance bound C(n, k-l-1) with its hypotheses.
    Fw {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
    },
    /// Compact form of the avoidance rate at slack eps.
    Rate {
        #[arg(long)]
        eps: String,
    },
    /// Chernoff exponent f_q(alpha) for the binomial tail.
    Chernoff {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        alpha: String,
    },
    /// Exact tail sum S_q(alpha, n).
    Tail {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: u64,
    },
    /// Ball bound for codes whose distances fall in l residue classes.
    Modp {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        l: u64,
    },
    /// Check a code's distances against residue classes mod a prime p.
    CheckModp {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: u64,
        /// Allowed nonzero residues, comma separated.
        #[arg(long)]
        classes: String,
    },
    /// Optimal anticode radius r*(n, q, t).
    AkRstar {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        t: u64,
    },
    /// Anticode cardinality at radius r.
    AkSize {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        r: u64,
    },
    /// Balanced prime split of s, minimizing the largest deviation.
    Split {
        #[arg(long)]
        s: u64,
        #[arg(long, default_value_t = 3)]
        parts: usize,
    },
    /// Binary entropy H(x).
    Entropy {
        #[arg(long)]
        x: String,
    },
    /// Evaluated constant chain for a pipeline context.
    Ledger {
        #[arg(long)]
        eps: String,
        /// One of fr-sets, code-case1, code-case2, sunflower, cross, supersat.
        #[arg(long)]
        context: String,
        /// Petal count, for --context sunflower.
        #[arg(long)]
        k: Option<u64>,
        /// Capture density, for --context supersat.
        #[arg(long)]
        eta: Option<String>,
        /// Alphabet size, for --context supersat.
        #[arg(long)]
        q: Option<u64>,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    /// Alphabet size; selects a code search together with --forbid or
    /// --max-diameter.
    #[arg(long)]
    q: Option<u16>,
    /// Forbidden distances, comma separated.
    #[arg(long)]
    forbid: Option<String>,
    /// Set size; selects a family search together with --l.
    #[arg(long)]
    k: Option<usize>,
    /// Forbidden intersection size.
    #[arg(long)]
    l: Option<usize>,
    /// Search permutation families avoiding distance --d.
    #[arg(long)]
    perm: bool,
    #[arg(long)]
    d: Option<usize>,
    /// Cap on the realized diameter.
    #[arg(long)]
    max_diameter: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    max_vertices: usize,
    #[arg(long, default_value_t = 100_000_000)]
    budget_nodes: u64,
    #[arg(long)]
    budget_seconds: Option<u64>,
    /// Only consider solutions through the lexicographically first object;
    /// sound on the vertex-transitive instances searched here.
    #[arg(long)]
    fix_first: bool,
}

#[derive(Args)]
struct PairsArgs {
    #[arg(long)]
    input: PathBuf,
    /// With a distance: count the pairs and show the first one. Without:
    /// print the realized distance set.
    #[arg(long)]
    d: Option<usize>,
    /// Allow the quadratic pair scan on codes above the opt-in limit.
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum ExtractCmd {
    /// Find two code words at exactly distance d via the decomposition
    /// pipeline.
    Pair {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "1/4")]
        eps: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample size per dependent-random-choice round.
        #[arg(long, default_value_t = 2)]
        t: u32,
        #[arg(long, default_value_t = 20)]
        retries: u32,
    },
    /// One dependent-random-choice round on a two-block coordinate split.
    Drc {
        #[arg(long)]
        input: PathBuf,
        /// Size of the left coordinate block.
        #[arg(long)]
        left: usize,
        #[arg(long, default_value_t = 2)]
        t: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        retries: u32,
    },
    /// Print the verified decomposition plan: --d for a distance plan,
    /// --k and --l for an intersection plan.
    Plan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long, default_value = "1/4")]
        eps: String,
    },
}

#[derive(Subcommand)]
enum SunflowerCmd {
    /// Build a k-petal witness by per-block pair extraction.
    Extract {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        t: u32,
        #[arg(long, default_value_t = 20)]
        retries: u32,
    },
    /// Exhaustive search for a weak (default) or strong sunflower.
    Find {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Require one common agreement set instead of one agreement count.
        #[arg(long)]
        strong: bool,
    },
}

#[derive(Args)]
struct CrossArgs {
    #[arg(long)]
    input: PathBuf,
    /// The partner code D.
    #[arg(long)]
    partner: PathBuf,
    #[arg(long)]
    d: usize,
    /// Drop words whose nearest partner is further than gamma * n.
    #[arg(long)]
    gamma: String,
}

#[derive(Args)]
struct SupersatArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    eta: String,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Even-weight binary code of length n.
    Parity {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Extremal bounded-diameter anticode K_r.
    AkAnticode {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u16,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// All large and all small subsets of [n], avoiding intersection l.
    LargeSmall {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        /// Also add the odd-case midsize layer through element 1.
        #[arg(long)]
        midsize: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Two block-permutation families whose cross distances all equal n.
    PermBlocks {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Where the second family goes when --output is used.
        #[arg(long)]
        output2: Option<PathBuf>,
    },
    /// Permutation family avoiding distance d.
    PermAvoiding {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let mut rep = Report::new(cli.format, std::env::args().collect());
    let status = match run(cli.cmd, &mut rep) {
        Ok(code) => code,
        Err(e) => {
            rep.error(&e);
            exit_code(&e)
        }
    };
    rep.finish();
    std::process::exit(status);
}

fn usage(msg: &str) -> Error {
    Error::domain(msg)
}

fn parse_csv_usize(s: &str, what: &str) -> Result<BTreeSet<usize>> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| usage(&format!("{what}: `{t}` is not a natural number")))
        })
        .collect()
}

fn load_code(rep: &mut Report, path: &Path) -> Result<Code> {
    let loaded = fio::read_code(path)?;
    if !loaded.duplicate_lines.is_empty() {
        eprintln!(
            "warning: {}: dropped duplicate words on lines {:?}",
            path.display(),
            loaded.duplicate_lines
        );
        rep.set(
            "duplicate_lines",
            serde_json::json!(loaded.duplicate_lines),
        );
    }
    Ok(loaded.value)
}

fn emit_code(rep: &mut Report, code: &Code, output: Option<&Path>) -> Result<()> {
    rep.kv("words", code.len());
    match output {
        Some(path) => {
            fio::write_code(code, path)?;
            rep.kv("output", path.display());
        }
        None => {
            rep.line(fio::code_to_string(code).trim_end());
            rep.set("code", code_rows(code));
        }
    }
    Ok(())
}

fn run(cmd: Cmd, rep: &mut Report) -> Result<i32> {
    match cmd {
        Cmd::Bounds { op } => run_bounds(op, rep),
        Cmd::Search(a) => run_search(a, rep),
        Cmd::Pairs(a) => run_pairs(a, rep),
        Cmd::Extract { op } => run_extract(op, rep),
        Cmd::Sunflower { op } => run_sunflower(op, rep),
        Cmd::Cross(a) => run_cross(a, rep),
        Cmd::Supersat(a) => run_supersat(a, rep),
        Cmd::Construct { op } => run_construct(op, rep),
    }
}

fn ledger_value_line(v: &LedgerValue) -> String {
    match v {
        LedgerValue::Rational(r) => {
            let approx = v.approx().unwrap_or(f64::NAN);
            format!("{r} (~{approx:.6e})")
        }
        LedgerValue::Natural(n) => n.to_string(),
        LedgerValue::Real(x) => format!("{x}"),
        LedgerValue::NotEvaluated => "not evaluated".into(),
    }
}

fn run_bounds(op: BoundsCmd, rep: &mut Report) -> Result<i32> {
    match op {
        BoundsCmd::Fw { n, k, l } => {
            let r = bounds::frankl_wilson_bound(n, k, l)?;
            match &r.value {
                Some(v) => rep.kv("value", v),
                None => rep.kv("value", "not applicable"),
            }
            for h in &r.hypotheses {
                rep.line(format!(
                    "hypothesis {}: {}",
                    h.name,
                    if h.ok { "ok" } else { "VIOLATED" }
                ));
            }
            if !r.all_hypotheses_hold() {
                rep.line("bound not applicable: the value is printed for reference only");
            }
            rep.set("report", r.to_json());
            Ok(EXIT_OK)
        }
        BoundsCmd::Rate { eps } => {
            let e = bounds::parse_rational(&eps)?;
            rep.kv("rate", bounds::compact_fw_rate(&e)?);
            Ok(EXIT_OK)
        }
        BoundsCmd::Chernoff { q, alpha } => {
            let a = bounds::parse_rational(&alpha)?;
            rep.kv("exponent", bounds::chernoff_exponent(q, &a)?);
            Ok(EXIT_OK)
        }
        BoundsCmd::Tail { q, alpha, n } => {
            let a = bounds::parse_rational(&alpha)?;
            rep.kv("tail_sum", bounds::tail_sum(q, &a, n)?);
            Ok(EXIT_OK)
        }
        BoundsCmd::Modp { n, q, l } => {
            rep.kv("bound", bounds::modp_code_bound(n, q, l)?);
            Ok(EXIT_OK)
        }
        BoundsCmd::CheckModp { input, p, classes } => {
            let code = load_code(rep, &input)?;
            let classes: BTreeSet<u64> = parse_csv_usize(&classes, "classes")?
                .into_iter()
                .map(|c| c as u64)
                .collect();
            let ok = bounds::check_modp_code(&code, p, &classes)?;
            rep.kv("conforms", ok);
            Ok(if ok { EXIT_OK } else { EXIT_ABSENT })
        }
        BoundsCmd::AkRstar { n, q, t } => {
            rep.kv("r_star", bounds::ak_r_star(n, q, t)?);
            Ok(EXIT_OK)
        }
        BoundsCmd::AkSize { n, q, t, r } => {
            rep.kv("size", bounds::ak_anticode_size(n, q, t, r)?);
            Ok(EXIT_OK)
        }
        BoundsCmd::Split { s, parts } => {
            let split = primes::split_into_primes(s, parts)?;
            let parts_str: Vec<String> = split.parts.iter().map(|p| p.to_string()).collect();
            rep.kv("parts", parts_str.join(" "));
            rep.kv("deviation", split.deviation());
            rep.set("parts_list", serde_json::json!(split.parts));
            Ok(EXIT_OK)
        }
        BoundsCmd::Entropy { x } => {
            let x = bounds::parse_rational(&x)?;
            rep.kv("entropy", bounds::binary_entropy(&x)?);
            Ok(EXIT_OK)
        }
        BoundsCmd::Ledger {
            eps,
            context,
            k,
            eta,
            q,
        } => {
            let eps = bounds::parse_rational(&eps)?;
            let ctx = match context.as_str() {
                "fr-sets" => LedgerContext::FrSets,
                "code-case1" => LedgerContext::CodeCase1,
                "code-case2" => LedgerContext::CodeCase2,
                "cross" => LedgerContext::Cross,
                "sunflower" => LedgerContext::Sunflower {
                    k: k.ok_or_else(|| usage("--context sunflower needs --k"))?,
                },
                "supersat" => LedgerContext::Supersat {
                    eta: bounds::parse_rational(
                        &eta.ok_or_else(|| usage("--context supersat needs --eta"))?,
                    )?,
                    q: q.ok_or_else(|| usage("--context supersat needs --q"))?,
                },
                other => return Err(usage(&format!("unknown ledger context `{other}`"))),
            };
            let ledger = constant_ledger(&eps, ctx)?;
            for e in &ledger.entries {
                rep.line(format!(
                    "{} = {}  ({})",
                    e.name,
                    ledger_value_line(&e.value),
                    e.citation
                ));
            }
            rep.set("ledger", ledger.to_json());
            Ok(EXIT_OK)
        }
    }
}

fn report_search<W>(
    rep: &mut Report,
    res: &SearchResult<W>,
    witness_lines: String,
    witness_json: serde_json::Value,
) -> i32 {
    rep.kv("optimum", res.optimum);
    rep.kv("nodes", res.nodes_explored);
    match res.proof_status {
        ProofStatus::Optimal => rep.kv("status", "optimal"),
        ProofStatus::TimeoutLowerBound => rep.kv("status", "timeout_lower_bound"),
    }
    rep.line("witness:");
    rep.line(witness_lines.trim_end());
    let mut json = res.to_json();
    json["witness"] = witness_json;
    rep.set("result", json);
    match res.proof_status {
        ProofStatus::Optimal => EXIT_OK,
        ProofStatus::TimeoutLowerBound => EXIT_BUDGET,
    }
}

fn run_search(a: SearchArgs, rep: &mut Report) -> Result<i32> {
    let budget = SearchBudget {
        max_vertices: a.max_vertices,
        max_nodes: a.budget_nodes,
        time_limit: a.budget_seconds.map(Duration::from_secs),
        fix_first: a.fix_first,
    };
    if a.perm {
        let d = a.d.ok_or_else(|| usage("--perm needs --d"))?;
        let res = search::max_perm_family_avoiding(a.n, d, &budget)?;
        let text = fio::code_to_string(res.witness.as_code());
        let json = code_rows(res.witness.as_code());
        return Ok(report_search(rep, &res, text, json));
    }
    if let Some(t_diam) = a.max_diameter {
        let q = a.q.ok_or_else(|| usage("--max-diameter needs --q"))?;
        if t_diam > a.n {
            return Err(usage("--max-diameter cannot exceed --n"));
        }
        let res = search::max_code_with_diameter(a.n, q, a.n - t_diam, &budget)?;
        let text = fio::code_to_string(&res.witness);
        let json = code_rows(&res.witness);
        return Ok(report_search(rep, &res, text, json));
    }
    if let Some(forbid) = &a.forbid {
        let q = a.q.ok_or_else(|| usage("--forbid needs --q"))?;
        let forbidden = parse_csv_usize(forbid, "forbid")?;
        let res = search::max_code_avoiding(a.n, q, &forbidden, &budget)?;
        let text = fio::code_to_string(&res.witness);
        let json = code_rows(&res.witness);
        return Ok(report_search(rep, &res, text, json));
    }
    match (a.k, a.l) {
        (Some(k), Some(l)) => {
            let res = search::max_avoiding_family(a.n, k, l, &budget)?;
            let text = fio::family_to_string(&res.witness);
            let json = family_rows(&res.witness);
            Ok(report_search(rep, &res, text, json))
        }
        (Some(_), None) | (None, Some(_)) => Err(usage("family search needs both --k and --l")),
        (None, None) => Err(usage(
            "search needs --k/--l (family), --q/--forbid or --q/--max-diameter (code), or --perm/--d",
        )),
    }
}

fn run_pairs(a: PairsArgs, rep: &mut Report) -> Result<i32> {
    let code = load_code(rep, &a.input)?;
    match a.d {
        None => {
            let ds = if a.force {
                code.distance_set_forced()
            } else {
                code.distance_set()?
            };
            let dists: Vec<usize> = ds.iter().collect();
            let strs: Vec<String> = dists.iter().map(|d| d.to_string()).collect();
            rep.kv("distances", strs.join(" "));
            rep.set("distance_set", serde_json::json!(dists));
            Ok(EXIT_OK)
        }
        Some(d) => {
            if code.len() > PAIR_SCAN_LIMIT && !a.force {
                return Err(Error::ScanTooLarge {
                    size: code.len(),
                    limit: PAIR_SCAN_LIMIT,
                });
            }
            let count = search::count_pairs_at_distance(&code, d);
            rep.kv("pairs", count);
            if let Some((x, y)) = search::find_pair_at_distance(&code, d) {
                rep.line(format!("first: {}", word_line(&x)));
                rep.line(format!("       {}", word_line(&y)));
                rep.set("first_pair", serde_json::json!([word_row(&x), word_row(&y)]));
                Ok(EXIT_OK)
            } else {
                rep.line(format!("no pair at distance {d}"));
                Ok(EXIT_ABSENT)
            }
        }
    }
}

fn run_extract(op: ExtractCmd, rep: &mut Report) -> Result<i32> {
    match op {
        ExtractCmd::Pair {
            input,
            d,
            eps,
            seed,
            t,
            retries,
        } => {
            let code = load_code(rep, &input)?;
            let eps = bounds::parse_rational(&eps)?;
            let cfg = PipelineConfig {
                t,
                max_retries: retries,
                ..PipelineConfig::default()
            };
            rep.kv("seed", seed);
            match pipelines::extract_distance_pair_with(&code, d, &eps, seed, &cfg)? {
                Some((x, y)) => {
                    rep.line(format!("pair: {}", word_line(&x)));
                    rep.line(format!("      {}", word_line(&y)));
                    rep.set("pair", serde_json::json!([word_row(&x), word_row(&y)]));
                    Ok(EXIT_OK)
                }
                None => {
                    rep.line(format!("no pair found at distance {d}"));
                    rep.set("pair", serde_json::Value::Null);
                    Ok(EXIT_ABSENT)
                }
            }
        }
        ExtractCmd::Drc {
            input,
            left,
            t,
            seed,
            retries,
        } => {
            let code = load_code(rep, &input)?;
            if left == 0 || left >= code.n() {
                return Err(usage("--left must split the coordinates into two blocks"));
            }
            let part = CoordinatePartition::contiguous(&[left, code.n() - left])?;
            let g = drc::build_bipartite(&code, &part)?;
            let out = drc::drc_sample(&g, t, seed, retries)?;
            let verified = drc::verify_outcome(&g, &out);
            rep.kv("selected", out.selected.len());
            rep.kv("succeeded", out.succeeded);
            rep.kv("verified", verified);
            rep.kv("retries", out.retries_used);
            rep.kv("seed", seed);
            let mut json = out.to_json();
            json["verified"] = serde_json::json!(verified);
            rep.set("outcome", json);
            Ok(if out.succeeded && verified {
                EXIT_OK
            } else {
                EXIT_ABSENT
            })
        }
        ExtractCmd::Plan { n, d, k, l, eps } => {
            let eps = bounds::parse_rational(&eps)?;
            let plan = match (d, k, l) {
                (Some(d), None, None) => pipelines::code_distance_decompose(n, d, &eps)?,
                (None, Some(k), Some(l)) => pipelines::fr_decompose(n, k, l, &eps)?,
                _ => return Err(usage("plan needs --d alone, or --k with --l")),
            };
            let json = plan.to_json();
            rep.line(
                serde_json::to_string_pretty(&json)
                    .expect("plan is valid JSON"),
            );
            rep.set("plan", json);
            Ok(EXIT_OK)
        }
    }
}

fn report_sunflower(rep: &mut Report, w: &SunflowerWitness) {
    rep.kv("agreement", w.agreement);
    if let Some(s) = &w.agreement_set {
        let elems: Vec<String> = s.iter().map(|e| (e + 1).to_string()).collect();
        rep.kv("agreement_set", elems.join(" "));
    }
    rep.line("petals:");
    for p in &w.petals {
        rep.line(format!("  {}", word_line(p)));
    }
    let rows: Vec<serde_json::Value> = w.petals.iter().map(word_row).collect();
    rep.set("petals", serde_json::json!(rows));
}

fn run_sunflower(op: SunflowerCmd, rep: &mut Report) -> Result<i32> {
    match op {
        SunflowerCmd::Extract {
            input,
            k,
            d,
            seed,
            t,
            retries,
        } => {
            let code = load_code(rep, &input)?;
            let cfg = PipelineConfig {
                t,
                max_retries: retries,
                ..PipelineConfig::default()
            };
            rep.kv("seed", seed);
            match pipelines::sunflower_cube_extract_with(&code, k, d, seed, &cfg)? {
                Some(w) => {
                    report_sunflower(rep, &w);
                    Ok(EXIT_OK)
                }
                None => {
                    rep.line(format!("no {k}-petal witness at block distance {d}"));
                    Ok(EXIT_ABSENT)
                }
            }
        }
        SunflowerCmd::Find { input, k, strong } => {
            let code = load_code(rep, &input)?;
            let found = if strong {
                search::find_strong_sunflower(&code, k)?
            } else {
                search::find_weak_sunflower(&code, k)?
            };
            match found {
                Some(w) => {
                    report_sunflower(rep, &w);
                    Ok(EXIT_OK)
                }
                None => {
                    rep.line(format!(
                        "no {} {k}-sunflower",
                        if strong { "strong" } else { "weak" }
                    ));
                    Ok(EXIT_ABSENT)
                }
            }
        }
    }
}

fn run_cross(a: CrossArgs, rep: &mut Report) -> Result<i32> {
    let c = load_code(rep, &a.input)?;
    let d_code = load_code(rep, &a.partner)?;
    let gamma = bounds::parse_rational(&a.gamma)?;
    let out = pipelines::cross_pair_finder(&c, &d_code, a.d, &gamma)?;
    rep.kv("dropped", out.dropped);
    rep.set("outcome", out.to_json());
    match &out.pair {
        Some((x, y)) => {
            rep.line(format!("pair: {}", word_line(x)));
            rep.line(format!("      {}", word_line(y)));
            Ok(EXIT_OK)
        }
        None => {
            rep.line(format!("no cross pair at distance {}", a.d));
            Ok(EXIT_ABSENT)
        }
    }
}

fn run_supersat(a: SupersatArgs, rep: &mut Report) -> Result<i32> {
    let code = load_code(rep, &a.input)?;
    let eta = bounds::parse_rational(&a.eta)?;
    let out = pipelines::supersat_experiment(&code, a.d, &eta, a.trials, a.seed)?;
    rep.kv("trials", out.trials);
    rep.kv("seed", out.seed);
    rep.kv("r", out.r);
    rep.kv("m", out.m);
    rep.kv("observed_x_mean", &out.observed_x_mean);
    rep.kv("expected_x", &out.expected_x);
    rep.kv("observed_y_mean", &out.observed_y_mean);
    rep.kv("expected_y", &out.expected_y);
    rep.set("experiment", out.to_json());
    Ok(EXIT_OK)
}

fn run_construct(op: ConstructCmd, rep: &mut Report) -> Result<i32> {
    match op {
        ConstructCmd::Parity { n, output } => {
            let c = constructions::parity_code(n)?;
            emit_code(rep, &c, output.as_deref())?;
        }
        ConstructCmd::AkAnticode { n, q, t, r, output } => {
            let c = constructions::ak_anticode(n, q, t, r)?;
            emit_code(rep, &c, output.as_deref())?;
        }
        ConstructCmd::LargeSmall {
            n,
            l,
            midsize,
            output,
        } => {
            let f = constructions::large_small_family(n, l, midsize)?;
            rep.kv("sets", f.len());
            rep.kv("l_avoiding", f.is_l_avoiding(l));
            match output {
                Some(path) => {
                    fio::write_subset_family(&f, &path)?;
                    rep.kv("output", path.display());
                }
                None => {
                    rep.line(fio::subset_family_to_string(&f).trim_end());
                    rep.set("family", subset_family_rows(&f));
                }
            }
        }
        ConstructCmd::PermBlocks { n, output, output2 } => {
            let (a, b) = constructions::perm_block_families(n)?;
            rep.kv("first_size", a.len());
            rep.kv("second_size", b.len());
            match (&output, &output2) {
                (Some(p1), Some(p2)) => {
                    fio::write_code(a.as_code(), p1)?;
                    fio::write_code(b.as_code(), p2)?;
                    rep.kv("output", p1.display());
                    rep.kv("output2", p2.display());
                }
                (None, None) => {
                    rep.line(fio::code_to_string(a.as_code()).trim_end());
                    rep.line("# second family");
                    rep.line(fio::code_to_string(b.as_code()).trim_end());
                    rep.set("first", code_rows(a.as_code()));
                    rep.set("second", code_rows(b.as_code()));
                }
                _ => return Err(usage("perm-blocks writes both files: give --output and --output2")),
            }
        }
        ConstructCmd::PermAvoiding { n, d, output } => {
            let f = constructions::perm_avoiding_construction(n, d)?;
            emit_code(rep, f.as_code(), output.as_deref())?;
        }
    }
    Ok(EXIT_OK)
}
