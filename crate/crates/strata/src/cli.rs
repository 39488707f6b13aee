//! Command-line front end. Every subcommand builds a [`Report`] whose
//! primary `result` can be asserted with `--expect`.
//!
//! Exit codes: 0 success, 1 computation mismatch or failure, 2 usage or
//! input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use strata_core::graphs::enumerate_stable_graphs;
use strata_core::induction::{
    basecase_region, ckgp_known, exclusion_reasons, filling_conditions, in_basecase_region, motive_shape, MotiveShape,
    MotiveSymbol, Triple,
};
use strata_core::integrals::{psi_integral, psi_integral_dvv};
use strata_core::linalg::{is_prime, DEFAULT_PRIMES};
use strata_core::omega::{omega_pair_with, DEFAULT_EPSILON};
use strata_core::rational::fmt_q;
use strata_core::reps::{dim_specht, induce, restrict, Partition, SnRepSum};
use strata_core::strata::{integrate, pairing_rank_with, product, TautClass};

use crate::assemble::pairing_rank;
use crate::checks::{cases_document, sample_cases, CheckCase};
use crate::json::{parse_class, to_value, ClassJson, GraphJson, SCHEMA};
use crate::og::{self, OgFile};

/// Environment variable holding the default worker-thread count.
pub const THREADS_ENV: &str = "STRATA_THREADS";

#[derive(Parser, Debug)]
#[command(name = "strata", version, about = "Exact intersection numbers, decorated strata and ω-classes on moduli of stable curves")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ConfigArgs {
    /// Primes for modular rank (comma list; at least 3, distinct, each > 2^30)
    #[arg(long, global = true, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    /// Worker threads for matrix assembly
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for sampled batteries
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Sign ε of ⟨ω̌, ω⟩ relative to ⟨ω, ω̌⟩ = 1
    #[arg(long, global = true, default_value_t = DEFAULT_EPSILON, allow_negative_numbers = true)]
    pub epsilon: i32,
    /// Expected primary result; exit 1 on mismatch
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub expect: Option<String>,
    /// Write replayable ψ/κ check cases (JSON) to this file
    #[arg(long, global = true)]
    pub emit_checks: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub primes: Vec<u64>,
    pub threads: usize,
    pub format: Format,
    pub seed: u64,
    pub epsilon: i32,
}

impl RunConfig {
    pub fn from_args(a: &ConfigArgs) -> Result<Self, CliError> {
        let primes = a.primes.clone().unwrap_or_else(|| DEFAULT_PRIMES.to_vec());
        if primes.len() < 3 {
            return Err(CliError::Usage("at least 3 primes are required".into()));
        }
        let mut sorted = primes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != primes.len() {
            return Err(CliError::Usage("primes must be pairwise distinct".into()));
        }
        if let Some(p) = primes.iter().find(|&&p| p <= 1 << 30 || p >= 1 << 62 || !is_prime(p)) {
            return Err(CliError::Usage(format!("{p} is not a prime in (2^30, 2^62)")));
        }
        if a.epsilon != 1 && a.epsilon != -1 {
            return Err(CliError::Usage("epsilon must be 1 or -1".into()));
        }
        let threads = a.threads.unwrap_or(1);
        if threads == 0 {
            return Err(CliError::Usage("threads must be positive".into()));
        }
        Ok(RunConfig { primes, threads, format: a.format, seed: a.seed, epsilon: a.epsilon })
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate stable graphs of type (g, n)
    Graphs {
        g: u32,
        n: usize,
        /// Only graphs with at most this many edges
        #[arg(long)]
        max_edges: Option<usize>,
    },
    /// Integrate ψ-monomials or classes
    Integrate {
        #[command(subcommand)]
        what: IntegrateCmd,
    },
    /// Pairing matrix of degree-d generators against the complementary degree
    Pair {
        g: u32,
        n: usize,
        /// Cohomological degree (even)
        d: usize,
        /// Write the exact matrix as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Include wall-clock timings (makes the report run-dependent)
        #[arg(long)]
        timings: bool,
    },
    /// Product of two classes given as JSON files
    Product {
        a: PathBuf,
        b: PathBuf,
    },
    /// ω-decorated classes
    Omega {
        #[command(subcommand)]
        what: OmegaCmd,
    },
    /// Symmetric-group representations (partitions as comma lists)
    Reps {
        #[command(subcommand)]
        what: RepsCmd,
    },
    /// Base-case region of the generation theorem in degree k
    Region {
        #[arg(long)]
        k: u32,
        /// Assert that some (g, n, k') lies in the region
        #[arg(long, value_name = "G,N")]
        contains: Vec<String>,
        /// Assert that no (g, n, k') lies in the region
        #[arg(long, value_name = "G,N")]
        excludes: Vec<String>,
    },
    /// Filling-criterion conditions for (g, n, k)
    Fill { g: u32, n: usize, k: u32 },
    /// Semisimple motive bookkeeping
    Motive {
        #[command(subcommand)]
        what: MotiveCmd,
    },
    /// Run the built-in consistency battery
    Verify {
        /// Also run the large ω-rank computations (minutes)
        #[arg(long)]
        full: bool,
        /// Number of sampled check cases for --emit-checks
        #[arg(long, default_value_t = 25)]
        cases: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum IntegrateCmd {
    /// ⟨τ_{a1}…τ_{an}⟩_g
    Psi {
        g: u32,
        #[arg(value_delimiter = ',')]
        exponents: Vec<u32>,
    },
    /// Integral of a class given as JSON
    Class { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum OmegaCmd {
    /// Rank of the pairing matrix of the classes in a .og file against its battery
    Rank {
        #[arg(long)]
        file: PathBuf,
    },
    /// Pairing of the first classes of two .og files
    Pair { a: PathBuf, b: PathBuf },
    /// The figure-2 pipeline (needs transcribed figure data)
    Figure2 {
        #[arg(long, default_value = "data/figure2.og")]
        data: PathBuf,
    },
    /// Print a generated family in .og form
    Emit {
        family: String,
        #[arg(value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum RepsCmd {
    /// Ind_{S_a×S_b}(V_λ ⊠ V_μ)
    Induce { lambda: String, mu: String },
    /// Restriction of V_λ to S_{n−1}
    Restrict { lambda: String },
    /// Dimension of V_λ
    Dim { lambda: String },
}

#[derive(Subcommand, Debug)]
pub enum MotiveCmd {
    /// Known shape of H^k(M̄_{g,n})^ss
    Shape { g: u32, n: usize, k: u32 },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Failure(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Failure(m) => write!(f, "error: {m}"),
        }
    }
}

fn fail(e: impl std::fmt::Display) -> CliError {
    CliError::Failure(e.to_string())
}

/// The outcome of a subcommand.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    /// The primary value compared by `--expect`.
    pub result: String,
    pub details: Value,
    pub text: String,
    pub csv: Option<String>,
    /// Failed assertions (exit 1 when nonempty).
    pub failures: Vec<String>,
    pub checks: Vec<CheckCase>,
}

impl Report {
    fn new(command: &str, result: impl Into<String>, details: Value, text: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            result: result.into(),
            details,
            text: text.into(),
            csv: None,
            failures: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({"schema": SCHEMA, "command": self.command, "result": self.result});
        if let (Value::Object(m), Value::Object(d)) = (&mut v, &self.details) {
            for (k, x) in d {
                m.insert(k.clone(), x.clone());
            }
        }
        if !self.failures.is_empty() {
            v["failures"] = json!(self.failures);
        }
        v
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.to_json()).unwrap() + "\n",
            Format::Csv => self.csv.clone().unwrap_or_else(|| format!("result\n{}\n", self.result)),
            Format::Text => {
                let mut t = self.text.clone();
                if !t.ends_with('\n') {
                    t.push('\n');
                }
                t
            }
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_og(path: &Path) -> Result<OgFile, CliError> {
    og::parse(&read(path)?).map_err(|e| CliError::Input(format!("{}:{}: {}", path.display(), e.line, e.message)))
}

fn load_class(path: &Path) -> Result<TautClass, CliError> {
    let v: Value = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Input(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))?;
    parse_class(&v).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_partition(s: &str) -> Result<Partition, CliError> {
    let parts: Vec<u32> = if s.trim().is_empty() {
        Vec::new()
    } else {
        s.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>().map_err(|_| CliError::Usage(format!("`{s}` is not a comma list of integers")))?
    };
    Partition::new(parts).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_pair(s: &str) -> Result<(u32, usize), CliError> {
    let bad = || CliError::Usage(format!("`{s}` is not G,N"));
    let (g, n) = s.split_once(',').ok_or_else(bad)?;
    Ok((g.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?))
}

fn rep_json(s: &SnRepSum) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .iter()
        .rev()
        .map(|(l, m)| json!({"partition": l.parts(), "multiplicity": m, "dim": dim_specht(l).to_string()}))
        .collect();
    json!({"n": s.n(), "terms": terms, "dim": s.dim().to_string()})
}

fn shape_string(s: &MotiveShape) -> String {
    match s {
        MotiveShape::Unknown => "unknown".into(),
        MotiveShape::SpannedBy(set) if set.is_empty() => "0".into(),
        MotiveShape::SpannedBy(set) => set
            .iter()
            .map(|&(a, x)| {
                let sym = match (a, x) {
                    (0, MotiveSymbol::Unit) => "1".to_string(),
                    (0, x) => x.as_str().to_string(),
                    (a, MotiveSymbol::Unit) => format!("L^{a}"),
                    (a, x) => format!("L^{a}*{}", x.as_str()),
                };
                format!("+{sym}")
            })
            .collect::<Vec<_>>()
            .join(" "),
    }
}

fn triple_json(t: Triple) -> Value {
    json!([t.g, t.n, t.k])
}

fn cmd_graphs(g: u32, n: usize, max_edges: Option<usize>) -> Result<Report, CliError> {
    let gs = enumerate_stable_graphs(g, n, max_edges).map_err(|e| CliError::Usage(e.to_string()))?;
    let list: Vec<Value> = gs
        .iter()
        .map(|x| json!({"graph": to_value(&GraphJson(x)), "automorphisms": x.automorphism_order(), "edges": x.num_edges()}))
        .collect();
    let mut text = format!("{} stable graphs of type ({g},{n})\n", gs.len());
    for x in &gs {
        let _ = writeln!(text, "{} |Aut|={}", serde_json::to_string(&GraphJson(x)).unwrap(), x.automorphism_order());
    }
    Ok(Report::new("graphs", gs.len().to_string(), json!({"g": g, "n": n, "count": gs.len(), "graphs": list}), text))
}

fn cmd_integrate(what: &IntegrateCmd) -> Result<Report, CliError> {
    match what {
        IntegrateCmd::Psi { g, exponents } => {
            if 2 * *g as i64 - 2 + exponents.len() as i64 <= 0 {
                return Err(CliError::Usage(format!("(g, n) = ({g}, {}) is unstable", exponents.len())));
            }
            let v = psi_integral(*g, exponents);
            let dvv = psi_integral_dvv(*g, exponents);
            if v != dvv {
                return Err(fail("the two evaluation paths disagree"));
            }
            let r = fmt_q(&v);
            let mut rep = Report::new("integrate psi", r.clone(), json!({"g": g, "exponents": exponents}), r.clone());
            rep.checks.push(CheckCase::psi_integral("integrate".into(), *g, exponents, &v));
            Ok(rep)
        }
        IntegrateCmd::Class { file } => {
            let x = load_class(file)?;
            let v = integrate(&x);
            let r = fmt_q(&v);
            let mut rep = Report::new("integrate class", r.clone(), json!({"g": x.genus(), "n": x.n()}), r);
            rep.checks.push(CheckCase::integral("integrate".into(), &x, &v));
            Ok(rep)
        }
    }
}

fn cmd_pair(cfg: &RunConfig, g: u32, n: usize, d: usize, csv: Option<&Path>, timings: bool) -> Result<Report, CliError> {
    let t0 = Instant::now();
    let pr = pairing_rank_with(g, n, d, &cfg.primes).map_err(|e| CliError::Usage(e.to_string()))?;
    let elapsed = t0.elapsed().as_secs_f64();
    let mut matrix = String::new();
    for row in &pr.matrix {
        let cells: Vec<String> = row.iter().map(fmt_q).collect();
        matrix.push_str(&cells.join(","));
        matrix.push('\n');
    }
    if let Some(p) = csv {
        std::fs::write(p, &matrix).map_err(|e| fail(format!("{}: {e}", p.display())))?;
    }
    let mut details = json!({
        "g": g, "n": n, "degree": d, "rank": pr.rank(),
        "dims": [pr.rows.len(), pr.cols.len()],
        "per_prime": pr.certificate.per_prime.iter().map(|(p, r)| json!([p, r])).collect::<Vec<_>>(),
        "agree": pr.certificate.agree,
        "exact": pr.certificate.exact,
    });
    if timings {
        details["timings"] = json!({"total_seconds": elapsed});
    }
    let text = format!("rank {} ({} × {})", pr.rank(), pr.rows.len(), pr.cols.len());
    let mut rep = Report::new("pair", pr.rank().to_string(), details, text);
    rep.csv = Some(matrix);
    Ok(rep)
}

fn cmd_product(a: &Path, b: &Path) -> Result<Report, CliError> {
    let x = load_class(a)?;
    let y = load_class(b)?;
    let xy = product(&x, &y).map_err(|e| CliError::Input(e.to_string()))?;
    let top = xy.degree() == 2 * xy.dim();
    let value = to_value(&ClassJson(&xy));
    let result = if top { fmt_q(&integrate(&xy)) } else { format!("{} terms", xy.terms().len()) };
    let text = serde_json::to_string_pretty(&value).unwrap();
    let mut details = json!({"class": value});
    if top {
        details["integral"] = json!(result);
    }
    let mut rep = Report::new("product", result, details, text);
    rep.checks.push(CheckCase::product("product".into(), &x, &y, &xy));
    Ok(rep)
}

fn cmd_omega(cfg: &RunConfig, what: &OmegaCmd) -> Result<Report, CliError> {
    match what {
        OmegaCmd::Rank { file } => {
            let f = load_og(file)?;
            if f.rows.is_empty() {
                return Err(CliError::Input(format!("{}: no classes", file.display())));
            }
            let battery = if f.has_battery {
                f.battery.clone()
            } else {
                return Err(CliError::Input(format!("{}: no battery section", file.display())));
            };
            let cert = pairing_rank(&f.rows, &battery, cfg.epsilon, &cfg.primes).map_err(CliError::Input)?;
            if !cert.agree {
                return Err(fail("modular ranks disagree across primes"));
            }
            let details = json!({
                "file": file.display().to_string(),
                "rows": f.rows.len(), "cols": battery.len(), "rank": cert.rank,
                "per_prime": cert.per_prime.iter().map(|(p, r)| json!([p, r])).collect::<Vec<_>>(),
                "epsilon": cfg.epsilon,
            });
            let text = format!("rank {} ({} classes × {} battery)", cert.rank, f.rows.len(), battery.len());
            Ok(Report::new("omega rank", cert.rank.to_string(), details, text))
        }
        OmegaCmd::Pair { a, b } => {
            let fa = load_og(a)?;
            let fb = load_og(b)?;
            let x = fa.rows.first().ok_or_else(|| CliError::Input(format!("{}: no classes", a.display())))?;
            let y = fb.rows.first().ok_or_else(|| CliError::Input(format!("{}: no classes", b.display())))?;
            let v = omega_pair_with(&x.to_omega().map_err(CliError::Input)?, &y.to_omega().map_err(CliError::Input)?, cfg.epsilon)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let r = fmt_q(&v);
            Ok(Report::new("omega pair", r.clone(), json!({"epsilon": cfg.epsilon}), r))
        }
        OmegaCmd::Figure2 { data } => figure2(cfg, data),
        OmegaCmd::Emit { family, params } => {
            let mut src = format!("family {family}");
            for p in params {
                src.push(' ');
                src.push_str(p);
            }
            let f = og::parse(&src).map_err(|e| CliError::Usage(e.message))?;
            let mut out = String::new();
            for x in &f.rows {
                og::write_class(&mut out, &x.to_omega().map_err(fail)?);
            }
            Ok(Report::new("omega emit", f.rows.len().to_string(), json!({"family": family, "classes": f.rows.len()}), out))
        }
    }
}

#[cfg(feature = "figure2")]
fn figure2(cfg: &RunConfig, data: &Path) -> Result<Report, CliError> {
    // rows: the pulled-back classes; battery: the figure's columns
    let f = load_og(data)?;
    let cert = pairing_rank(&f.rows, &f.battery, cfg.epsilon, &cfg.primes).map_err(CliError::Input)?;
    let relations = f.rows.len() - cert.rank;
    let total = 891 - 55;
    let details = json!({"rank": cert.rank, "relations": relations, "count": total});
    Ok(Report::new("omega figure2", format!("{} {} {}", cert.rank, relations, total), details, format!("rank {} relations {relations}", cert.rank)))
}

#[cfg(not(feature = "figure2"))]
fn figure2(_cfg: &RunConfig, _data: &Path) -> Result<Report, CliError> {
    Err(fail("built without the `figure2` feature: the figure data is not available"))
}

fn cmd_reps(what: &RepsCmd) -> Result<Report, CliError> {
    match what {
        RepsCmd::Induce { lambda, mu } => {
            let s = induce(&parse_partition(lambda)?, &parse_partition(mu)?);
            Ok(Report::new("reps induce", s.to_string(), rep_json(&s), s.to_string()))
        }
        RepsCmd::Restrict { lambda } => {
            let l = parse_partition(lambda)?;
            if l.is_empty() {
                return Err(CliError::Usage("cannot restrict the empty partition".into()));
            }
            let s = restrict(&l);
            Ok(Report::new("reps restrict", s.to_string(), rep_json(&s), s.to_string()))
        }
        RepsCmd::Dim { lambda } => {
            let l = parse_partition(lambda)?;
            let d = dim_specht(&l).to_string();
            Ok(Report::new("reps dim", d.clone(), json!({"partition": l.parts()}), d))
        }
    }
}

fn cmd_region(k: u32, contains: &[String], excludes: &[String]) -> Result<Report, CliError> {
    let region = basecase_region(k);
    // excluded triples in a window around the region, each with its reasons
    let (gmax, nmax) = (3 * k / 2 + 2, k as usize + 2);
    let mut excluded = Vec::new();
    for g in 0..=gmax {
        for n in 0..=nmax {
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            for kp in 0..=k {
                let t = Triple::new(g, n, kp);
                if !in_basecase_region(k, t) {
                    let reasons: Vec<&str> = exclusion_reasons(t).iter().map(|r| r.as_str()).collect();
                    excluded.push(json!({"triple": triple_json(t), "reasons": reasons}));
                }
            }
        }
    }
    let mut failures = Vec::new();
    let mut checks = Vec::new();
    for c in contains {
        let (g, n) = parse_pair(c)?;
        let ok = region.iter().any(|t| t.g == g && t.n == n);
        checks.push(json!({"contains": [g, n], "ok": ok}));
        if !ok {
            failures.push(format!("({g},{n}) is not in the region"));
        }
    }
    for c in excludes {
        let (g, n) = parse_pair(c)?;
        let inside: Vec<Triple> = region.iter().filter(|t| t.g == g && t.n == n).copied().collect();
        checks.push(json!({"excludes": [g, n], "ok": inside.is_empty()}));
        if !inside.is_empty() {
            failures.push(format!("({g},{n}) is in the region"));
        }
    }
    let pairs: std::collections::BTreeSet<(u32, usize)> = region.iter().map(|t| (t.g, t.n)).collect();
    let mut text = format!("base-case region for k = {k}: {} triples, {} pairs (g',n')\n", region.len(), pairs.len());
    for (g, n) in &pairs {
        let _ = writeln!(text, "({g},{n})");
    }
    let mut csv = String::from("g,n,k,in_region,reasons\n");
    for t in &region {
        let _ = writeln!(csv, "{},{},{},true,", t.g, t.n, t.k);
    }
    for e in &excluded {
        let t = &e["triple"];
        let reasons: Vec<&str> = e["reasons"].as_array().unwrap().iter().map(|r| r.as_str().unwrap()).collect();
        let _ = writeln!(csv, "{},{},{},false,{}", t[0], t[1], t[2], reasons.join(";"));
    }
    let details = json!({
        "k": k,
        "region": region.iter().map(|&t| triple_json(t)).collect::<Vec<_>>(),
        "excluded": excluded,
        "checks": checks,
    });
    let mut rep = Report::new("region", region.len().to_string(), details, text);
    rep.csv = Some(csv);
    rep.failures = failures;
    Ok(rep)
}

fn cmd_fill(g: u32, n: usize, k: u32) -> Result<Report, CliError> {
    let conds = filling_conditions(g, n, k).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut text = String::new();
    let mut list = Vec::new();
    for c in &conds {
        let t = c.triple;
        let reasons: Vec<&str> = exclusion_reasons(t).iter().map(|r| r.as_str()).collect();
        let ckgp = ckgp_known(t.g, t.n).as_str();
        let _ = writeln!(
            text,
            "{}{} reasons=[{}] ckgp={ckgp}",
            t,
            if c.is_head() { " head" } else { "" },
            reasons.join(",")
        );
        list.push(json!({"triple": triple_json(t), "head": c.is_head(), "reasons": reasons, "ckgp": ckgp}));
    }
    let details = json!({"ambient": [g, n, k], "conditions": list});
    Ok(Report::new("fill", conds.len().to_string(), details, text))
}

fn cmd_motive(what: &MotiveCmd) -> Result<Report, CliError> {
    let MotiveCmd::Shape { g, n, k } = what;
    let s = motive_shape(*g, *n, *k).map_err(|e| CliError::Usage(e.to_string()))?;
    let r = shape_string(&s);
    Ok(Report::new("motive shape", r.clone(), json!({"g": g, "n": n, "k": k}), r))
}

fn cmd_verify(cfg: &RunConfig, full: bool, cases: usize) -> Result<Report, CliError> {
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool| {
        lines.push(json!({"check": name, "ok": ok}));
        if !ok {
            failures.push(name.to_string());
        }
    };
    use strata_core::rational::{q, qi};
    check("psi: <t0^3>_0 = 1", psi_integral(0, &[0, 0, 0]) == qi(1));
    check("psi: <t1>_1 = 1/24", psi_integral(1, &[1]) == q(1, 24));
    check("psi: <t4>_2 = 1/1152", psi_integral(2, &[4]) == q(1, 1152));
    let pr = pairing_rank_with(0, 5, 2, &cfg.primes).map_err(fail)?;
    check("pairing rank (0,5,2) = 5", pr.rank() == 5);
    check("dim V(2,1^10) = 11", dim_specht(&Partition::hook(2, 10)) == 11.into());
    check("dim V(3,1^9) = 55", dim_specht(&Partition::hook(3, 9)) == 55.into());
    let m = induce(&Partition::row(2), &Partition::column(10));
    check("Ind(1 ⊠ sgn) = V(2,1^10) + V(3,1^9)", m.terms().len() == 2 && m.dim() == 66.into());
    let r17 = basecase_region(17);
    check("region(17) ∋ (1,17), (2,14)", [(1, 17), (2, 14)].iter().all(|&(g, n)| r17.iter().any(|t| t.g == g && t.n == n)));
    let small: Vec<(&str, usize)> = if full {
        vec![("m112", 11), ("m113", 429), ("m114", 6006)]
    } else {
        vec![("m112", 11), ("m113", 429)]
    };
    for (name, expected) in small {
        let src = match name {
            "m112" => "family m112\nbattery\nfamily pulled-back n=12 pol=antihol\n",
            "m113" => "family one-tail n=13 pol=hol\nbattery\nfamily conjugates\n",
            _ => "family one-tail n=14 pol=hol\nbattery\nfamily two-tail n=14 pol=antihol\n",
        };
        let f = og::parse(src).map_err(fail)?;
        let rank = pairing_rank(&f.rows, &f.battery, cfg.epsilon, &cfg.primes).map_err(fail)?.rank;
        check(&format!("omega rank {name} = {expected}"), rank == expected);
    }
    if full {
        let rank = strata_core::omega::omega_pullback_rank_m212().map_err(fail)?;
        check("omega pullback rank m212 = 264", rank == 264);
    }
    let sampled = if cases > 0 { sample_cases(cases, cfg.seed).map_err(fail)? } else { Vec::new() };
    let passed = lines.iter().filter(|l| l["ok"] == true).count();
    let total = lines.len();
    let text = lines
        .iter()
        .map(|l| format!("{} {}", if l["ok"] == true { "PASS" } else { "FAIL" }, l["check"].as_str().unwrap()))
        .collect::<Vec<_>>()
        .join("\n");
    let result = if failures.is_empty() { "pass" } else { "fail" };
    let mut rep = Report::new("verify", result, json!({"checks": lines, "passed": passed, "total": total}), text);
    rep.failures = failures;
    rep.checks = sampled;
    Ok(rep)
}

/// Runs one parsed command line and returns the report.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let cfg = RunConfig::from_args(&cli.config)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build().map_err(fail)?;
    pool.install(|| match &cli.command {
        Command::Graphs { g, n, max_edges } => cmd_graphs(*g, *n, *max_edges),
        Command::Integrate { what } => cmd_integrate(what),
        Command::Pair { g, n, d, csv, timings } => cmd_pair(&cfg, *g, *n, *d, csv.as_deref(), *timings),
        Command::Product { a, b } => cmd_product(a, b),
        Command::Omega { what } => cmd_omega(&cfg, what),
        Command::Reps { what } => cmd_reps(what),
        Command::Region { k, contains, excludes } => cmd_region(*k, contains, excludes),
        Command::Fill { g, n, k } => cmd_fill(*g, *n, *k),
        Command::Motive { what } => cmd_motive(what),
        Command::Verify { full, cases } => cmd_verify(&cfg, *full, *cases),
    })
}

/// Parses `args`, runs, prints and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return e.code();
        }
    };
    print!("{}", report.render(cli.config.format));
    if let Some(path) = &cli.config.emit_checks {
        let doc = cases_document(&report.checks);
        if let Err(e) = std::fs::write(path, serde_json::to_string_pretty(&doc).unwrap() + "\n") {
            eprintln!("error: {}: {e}", path.display());
            return 1;
        }
    }
    let mut code = 0;
    for f in &report.failures {
        eprintln!("check failed: {f}");
        code = 1;
    }
    if let Some(exp) = &cli.config.expect {
        if exp.trim() != report.result.trim() {
            eprintln!("mismatch: expected {exp}, got {}", report.result);
            code = 1;
        }
    }
    code
}
