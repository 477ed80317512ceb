//! Command-line front end: argument parsing, dispatch and JSON/CSV reports.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::gallagher::{audit_gamma, check_coset_bound, gallagher_report, verify_submultiplicativity};
use crate::genericity::genericity_sweep;
use crate::group::{corpus, parse_group_file, parse_word, Caps, FiniteGroup, Group, Subgroup};
use crate::malcev::{root_density, vanishing_density, IntPolynomial, MalcevGroup};
use crate::nildegree::{dc_k_exact, dphi_exact, p_k_exact, to_f64};
use crate::pgroups::{GkGroup, GkSpec};
use crate::sampling::{estimate_dc_k, EstimateResult, FolnerBox, FreeBall, RandomWalk, StepDistribution};

#[derive(Debug, Parser)]
#[command(name = "nilprob", version, about = "Degrees of k-step nilpotence over finite, nilpotent and free groups")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Seed for stochastic commands (required by `estimate` and `generic`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub trials: u64,
    /// Largest group a closure may build.
    #[arg(long, global = true, default_value_t = 200_000)]
    pub cap_order: usize,
    /// Largest number of word evaluations in an exhaustive count.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    pub cap_evals: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact dc^k(G).
    Dc {
        #[arg(long)]
        group: String,
        #[arg(short)]
        k: usize,
    },
    /// Exact P^k(G, g).
    Pofg {
        #[arg(long)]
        group: String,
        /// Element label, e.g. `(1,2,3)`.
        #[arg(long)]
        element: String,
        #[arg(short)]
        k: usize,
    },
    /// Exact satisfaction probability of an equation.
    Dphi {
        #[arg(long)]
        group: String,
        /// Word file with tokens `x1 x2^-1 c:<label>`.
        #[arg(long, conflicts_with = "word_text")]
        word: Option<PathBuf>,
        #[arg(long)]
        word_text: Option<String>,
    },
    /// Submultiplicativity and Γ-graph checks for a normal subgroup.
    Gallagher {
        #[arg(long)]
        group: String,
        /// `center`, `derived`, `trivial`, `whole`, `order=<n>`, `v4`, or
        /// generator labels separated by `;`.
        #[arg(long)]
        normal: String,
        #[arg(short)]
        k: usize,
        /// Audit every (g, xN) rather than g = 1 and each coset.
        #[arg(long)]
        full_audit: bool,
    },
    /// Build G_k(n, r, s) and check its series.
    Pgroup {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        n: usize,
        #[arg(short, default_value_t = 1)]
        r: usize,
        #[arg(short, default_value_t = 1)]
        s: usize,
        /// Also run the sharp-subgroup and maximal-subgroup audits.
        #[arg(long)]
        verify_all: bool,
    },
    /// Mal'cev group data and finite quotients.
    Malcev {
        /// `heisenberg`, `ut4`, `zn(<m>)` or a Mal'cev file.
        #[arg(long)]
        group: String,
        #[arg(long)]
        quotient: Option<u64>,
        /// Compute dc^k of the quotient.
        #[arg(long)]
        dc: Option<usize>,
    },
    /// Root densities of a polynomial modulo each n.
    Rootdensity {
        /// File holding one polynomial.
        #[arg(long, conflicts_with = "poly_text")]
        poly: Option<PathBuf>,
        #[arg(long)]
        poly_text: Option<String>,
        /// Mal'cev group whose coordinates the variables are (default heisenberg).
        #[arg(long)]
        group: Option<String>,
        /// Variable names, comma separated (default `v1..vm,w1..wm`).
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
    /// Monte Carlo dc^k under a sampler.
    Estimate {
        /// `walk:<group>:steps=<n,...>`, `box:<group>:side=<n,...>` or
        /// `ball:free<r>:radius=<n,...>`.
        #[arg(long)]
        sampler: String,
        #[arg(long, default_value_t = 1)]
        dc: usize,
    },
    /// Free-basis and Delzant fractions of random tuples in F_r.
    Generic {
        #[arg(long)]
        rank: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        radius: Vec<usize>,
    },
    /// Run the acceptance suite.
    Acceptance {
        /// Criterion ids or names to run.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, witness: Option<String>) -> Self {
        Check { name: name.into(), passed, witness }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl Report {
    fn new(command: &str, inputs: Value, results: Value) -> Self {
        Report {
            command: command.into(),
            inputs,
            results,
            checks: Vec::new(),
            table: None,
            version: env!("CARGO_PKG_VERSION"),
            elapsed_ms: None,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// The table when there is one, else `key,value` lines flattened from
    /// the results and checks.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.table {
            Some(t) => {
                out.push_str(&t.header.join(","));
                out.push('\n');
                for row in &t.rows {
                    out.push_str(&row.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
                    out.push('\n');
                }
            }
            None => {
                out.push_str("key,value\n");
                let mut flat = Vec::new();
                flatten("", &self.results, &mut flat);
                for c in &self.checks {
                    flat.push((format!("check.{}", c.name), c.passed.to_string()));
                }
                for (k, v) in flat {
                    out.push_str(&format!("{},{}\n", csv_field(&k), csv_field(&v)));
                }
            }
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// `{"num": "...", "den": "...", "decimal": ...}`.
pub fn rational_json(r: &BigRational) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string(), "decimal": to_f64(r) })
}

fn estimate_json(r: &EstimateResult) -> Value {
    serde_json::to_value(r).expect("estimates serialize")
}

fn caps(g: &GlobalOpts) -> Result<Caps> {
    if g.cap_order == 0 || g.cap_evals == 0 {
        return Err(Error::PreconditionFailed("caps must be positive".into()));
    }
    Ok(Caps { order: g.cap_order, evals: g.cap_evals, ..Caps::default() })
}

fn require_seed(g: &GlobalOpts, command: &str) -> Result<u64> {
    g.seed.ok_or_else(|| Error::PreconditionFailed(format!("`{command}` is stochastic and needs --seed")))
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

/// `builtin:<name>` or a group definition file.
pub fn load_group(spec: &str, caps: &Caps) -> Result<FiniteGroup> {
    match spec.strip_prefix("builtin:") {
        Some(name) => corpus::builtin(name),
        None => parse_group_file(&read(Path::new(spec))?, caps),
    }
}

fn load_malcev(spec: &str) -> Result<MalcevGroup> {
    match MalcevGroup::builtin(spec.strip_prefix("builtin:").unwrap_or(spec)) {
        Ok(g) => Ok(g),
        Err(Error::UnknownGroup(_)) if Path::new(spec).exists() => MalcevGroup::from_text(&read(Path::new(spec))?),
        Err(e) => Err(e),
    }
}

fn label(g: &FiniteGroup, x: &str) -> Result<usize> {
    g.find_label(x.trim()).ok_or_else(|| Error::InvalidElement(format!("no element labelled `{x}`")))
}

/// Resolves `--normal` and verifies normality.
pub fn resolve_normal(g: &FiniteGroup, spec: &str) -> Result<Subgroup> {
    let by_order = |order: usize| -> Result<Subgroup> {
        let mut found = g.normal_subgroups().into_iter().filter(|s| s.order() == order);
        match (found.next(), found.next()) {
            (Some(s), None) => Ok(s),
            (None, _) => Err(Error::NotNormal(format!("no normal subgroup of order {order}"))),
            _ => Err(Error::PreconditionFailed(format!("several normal subgroups of order {order}"))),
        }
    };
    let n = match spec.trim() {
        "center" | "centre" | "z" => g.center(),
        "derived" => g.commutator_subgroup(&g.whole(), &g.whole()),
        "trivial" | "1" => g.trivial_subgroup(),
        "whole" | "G" => g.whole(),
        "v4" => by_order(4)?,
        s if s.starts_with("order=") => {
            by_order(s["order=".len()..].parse().map_err(|_| Error::parse(1, format!("bad order in `{s}`")))?)?
        }
        s => {
            let gens = s.split(';').filter(|t| !t.trim().is_empty()).map(|t| label(g, t)).collect::<Result<Vec<_>>>()?;
            g.subgroup_generated(&gens)
        }
    };
    if !g.is_normal(&n) {
        return Err(Error::NotNormal(format!("`{spec}` generates a subgroup that is not normal")));
    }
    Ok(n)
}

/// Parses the command line, runs it and writes the report. Returns the
/// process exit code: 0 on success, 1 when a check failed, 2 on error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let text = match cli.global.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            let written = match &cli.global.out {
                Some(path) => std::fs::write(path, text).map_err(Error::from),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 2;
            }
            if report.all_passed() { 0 } else { 1 }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Result<Report> {
    let start = Instant::now();
    let g = &cli.global;
    let caps = caps(g)?;
    let mut report = match &cli.command {
        Command::Dc { group, k } => {
            let grp = load_group(group, &caps)?;
            let dc = dc_k_exact(&grp, *k);
            Report::new("dc", json!({ "group": group, "k": k, "order": grp.order() }), json!({ "dc": rational_json(&dc) }))
        }
        Command::Pofg { group, element, k } => {
            let grp = load_group(group, &caps)?;
            let x = label(&grp, element)?;
            let p = p_k_exact(&grp, x, *k)?;
            Report::new("pofg", json!({ "group": group, "element": element, "k": k }), json!({ "p": rational_json(&p) }))
        }
        Command::Dphi { group, word, word_text } => {
            let grp = load_group(group, &caps)?;
            let text = match (word, word_text) {
                (Some(path), _) => read(path)?,
                (None, Some(t)) => t.clone(),
                (None, None) => return Err(Error::PreconditionFailed("give --word or --word-text".into())),
            };
            let w = parse_word(&text, |l| grp.find_label(l), |&c| grp.inv(c))?;
            let d = dphi_exact(&grp, &w, caps.evals)?;
            Report::new(
                "dphi",
                json!({ "group": group, "word": text.trim(), "arity": w.arity() }),
                json!({ "dphi": rational_json(&d) }),
            )
        }
        Command::Gallagher { group, normal, k, full_audit } => gallagher_cmd(group, normal, *k, *full_audit, &caps)?,
        Command::Pgroup { p, k, n, r, s, verify_all } => pgroup_cmd(*p, *k, *n, *r, *s, *verify_all, &caps)?,
        Command::Malcev { group, quotient, dc } => malcev_cmd(group, *quotient, *dc, &caps)?,
        Command::Rootdensity { poly, poly_text, group, vars, primes } => {
            let text = match (poly, poly_text) {
                (Some(path), _) => read(path)?,
                (None, Some(t)) => t.clone(),
                (None, None) => return Err(Error::PreconditionFailed("give --poly or --poly-text".into())),
            };
            rootdensity_cmd(text.trim(), group.as_deref(), vars, primes, &caps)?
        }
        Command::Estimate { sampler, dc } => estimate_cmd(sampler, *dc, g.trials, require_seed(g, "estimate")?)?,
        Command::Generic { rank, radius } => {
            let seed = require_seed(g, "generic")?;
            let sweep = genericity_sweep(*rank, radius, g.trials, seed)?;
            let mut report = Report::new(
                "generic",
                json!({ "rank": rank, "radius": radius, "trials": g.trials, "seed": seed }),
                serde_json::to_value(&sweep).expect("results serialize"),
            );
            for r in &sweep {
                report.checks.push(Check::new(
                    format!("soundness at radius {}", r.radius),
                    r.delzant_count <= r.basis_count,
                    None,
                ));
            }
            report.table = Some(Table {
                header: ["rank", "radius", "trials", "seed", "delzant_frac", "basis_frac", "basis_ci_low", "basis_ci_high"]
                    .map(String::from)
                    .to_vec(),
                rows: sweep
                    .iter()
                    .map(|r| {
                        vec![
                            r.rank.to_string(),
                            r.radius.to_string(),
                            r.trials.to_string(),
                            r.seed.to_string(),
                            r.delzant_frac.to_string(),
                            r.basis_frac.to_string(),
                            r.basis_ci.0.to_string(),
                            r.basis_ci.1.to_string(),
                        ]
                    })
                    .collect(),
            });
            report
        }
        Command::Acceptance { only } => {
            let results = crate::acceptance::run(only)?;
            for r in &results {
                eprintln!("{}", r.line());
            }
            let mut report = Report::new("acceptance", json!({ "only": only }), serde_json::to_value(&results).expect("serialize"));
            report.checks = results.iter().map(|r| Check::new(format!("{} {}", r.id, r.name), r.passed, Some(r.detail.clone()))).collect();
            report
        }
    };
    if g.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis());
    }
    Ok(report)
}

fn gallagher_cmd(group: &str, normal: &str, k: usize, full_audit: bool, caps: &Caps) -> Result<Report> {
    let grp = load_group(group, caps)?;
    let n = resolve_normal(&grp, normal)?;
    let inputs = json!({ "group": group, "normal": normal, "k": k, "full_audit": full_audit, "normal_order": n.order() });
    let (sub, coset, audits) = if full_audit {
        let rep = gallagher_report(&grp, &n, k, caps)?;
        (rep.submultiplicativity, rep.coset_bound, rep.audits)
    } else {
        let q = grp.quotient(&n)?;
        let audits = (0..q.quotient.order())
            .map(|c| audit_gamma(&grp, &n, 0, q.section[c], k, caps))
            .collect::<Result<Vec<_>>>()?;
        (verify_submultiplicativity(&grp, &n, k)?, check_coset_bound(&grp, &n, k, caps)?, audits)
    };
    let audit_json: Vec<Value> = audits
        .iter()
        .map(|a| {
            json!({
                "g": grp.label(a.g),
                "x": grp.label(a.x),
                "o": a.o,
                "vertices": a.vertices,
                "edges": a.edges,
                "periods": a.periods,
                "levels": a.histograms.iter().map(|h| json!({ "component": h.component, "r": h.r, "h": h.h })).collect::<Vec<_>>(),
                "ok": a.ok(),
                "failure": a.failure,
            })
        })
        .collect();
    let mut report = Report::new(
        "gallagher",
        inputs,
        json!({
            "dc_G": rational_json(&sub.lhs),
            "dc_N": rational_json(&sub.dc_n),
            "dc_quotient": rational_json(&sub.dc_quotient),
            "product": rational_json(&sub.rhs),
            "coset_bound": { "bound": coset.bound, "max": coset.max },
            "audits": audit_json,
        }),
    );
    report.checks.push(Check::new("submultiplicativity", sub.ok, None));
    report.checks.push(Check::new(
        "coset bound",
        coset.ok,
        coset.witness.map(|w| w.iter().map(|&x| grp.label(x).to_string()).collect::<Vec<_>>().join(" ")),
    ));
    for (name, f) in [
        ("edges", (|a: &crate::gallagher::GammaAudit| a.edges_ok) as fn(&crate::gallagher::GammaAudit) -> bool),
        ("levels agree", |a| a.levels_agree),
        ("period property", |a| a.period_ok),
        ("adjacent property", |a| a.adjacent_ok),
        ("rearrangement", |a| a.rearrangement_ok),
        ("theta bijection", |a| a.theta_ok),
        ("coset proposition", |a| a.prop_ok),
    ] {
        let bad = audits.iter().find(|a| !f(a));
        report.checks.push(Check::new(
            name,
            bad.is_none(),
            bad.map(|a| format!("g = {}, x = {}", grp.label(a.g), grp.label(a.x))),
        ));
    }
    Ok(report)
}

fn pgroup_cmd(p: u64, k: usize, n: usize, r: usize, s: usize, verify_all: bool, caps: &Caps) -> Result<Report> {
    let spec = GkSpec::new(p, k, n, r, s)?;
    let g = GkGroup::new(spec, caps)?;
    let series = g.verify_series();
    let mut results = Map::new();
    results.insert("order".into(), json!(g.group.order()));
    results.insert("class".into(), json!(series.class));
    results.insert("centre_order".into(), json!(series.centre_order));
    results.insert("lower_central_orders".into(), json!(series.lower_orders));
    results.insert("upper_central_orders".into(), json!(series.upper_orders));
    let mut checks = vec![Check::new("central series", series.ok, series.witness.clone())];
    if verify_all {
        if r == 1 && s == 1 && k >= 1 {
            let sharp = g.sharp_subgroup()?;
            let index = g.group.order() / sharp.order();
            let class_ok = g.group.is_nilpotent_of_class_at_most(&sharp, k);
            results.insert("sharp_index".into(), json!(index));
            checks.push(Check::new(
                "sharp subgroup",
                index == (p as usize).pow(n as u32) && class_ok,
                Some(format!("index {index}, class at most {k}: {class_ok}")),
            ));
        } else {
            checks.push(Check::new("sharp subgroup", true, Some("skipped: needs r = s = 1 and k >= 1".into())));
        }
        if n <= 2 {
            let rep = g.no_small_nilpotent_subgroups()?;
            results.insert("maximal_subgroups".into(), json!(rep.maximal_subgroups));
            checks.push(Check::new("no small k-step nilpotent subgroup", rep.ok, rep.witness));
        } else {
            checks.push(Check::new("no small k-step nilpotent subgroup", true, Some("skipped: needs n <= 2".into())));
        }
    }
    let mut report = Report::new("pgroup", json!({ "p": p, "k": k, "n": n, "r": r, "s": s }), Value::Object(results));
    report.checks = checks;
    Ok(report)
}

fn malcev_cmd(group: &str, quotient: Option<u64>, dc: Option<usize>, caps: &Caps) -> Result<Report> {
    let h = load_malcev(group)?;
    let names: Vec<String> = (1..=h.m).map(|i| format!("v{i}")).chain((1..=h.m).map(|i| format!("w{i}"))).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut results = Map::new();
    results.insert("name".into(), json!(h.name));
    results.insert("m".into(), json!(h.m));
    results.insert("n0".into(), json!(h.n0));
    results.insert("mu".into(), json!(h.mu.iter().map(|p| p.render(&refs)).collect::<Vec<_>>()));
    let mut checks = vec![Check::new("symbolic group axioms", h.check_symbolic_axioms().is_ok(), None)];
    if let Some(n) = quotient {
        let q = h.finite_quotient(n, caps)?;
        results.insert("quotient_order".into(), json!(q.order()));
        checks.push(Check::new("|G(n)| = n^m", q.order() as u128 == (n as u128).pow(h.m as u32), None));
        if let Some(k) = dc {
            results.insert("dc".into(), rational_json(&dc_k_exact(&q, k)));
        }
    } else if dc.is_some() {
        return Err(Error::PreconditionFailed("--dc needs --quotient".into()));
    }
    let mut report = Report::new("malcev", json!({ "group": group, "quotient": quotient, "dc": dc }), Value::Object(results));
    report.checks = checks;
    Ok(report)
}

fn rootdensity_cmd(text: &str, group: Option<&str>, vars: &[String], primes: &[u64], caps: &Caps) -> Result<Report> {
    let malcev = match (group, vars.is_empty()) {
        (Some(gr), _) => Some(load_malcev(gr)?),
        (None, true) => Some(MalcevGroup::heisenberg()),
        (None, false) => None,
    };
    let names: Vec<String> = if !vars.is_empty() {
        vars.to_vec()
    } else {
        let m = malcev.as_ref().map_or(0, |g| g.m);
        (1..=m).map(|i| format!("v{i}")).chain((1..=m).map(|i| format!("w{i}"))).collect()
    };
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let poly = IntPolynomial::parse(text, &refs)?;
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for &n in primes {
        let d = match &malcev {
            Some(g) => root_density(g, &poly, n, caps)?,
            None => vanishing_density(&poly, n, caps.evals)?,
        };
        rows.push(vec![n.to_string(), d.numer().to_string(), d.denom().to_string(), to_f64(&d).to_string()]);
        values.push(json!({ "n": n, "density": rational_json(&d) }));
    }
    let mut report = Report::new(
        "rootdensity",
        json!({ "polynomial": text, "group": malcev.as_ref().map(|g| g.name.clone()), "vars": names, "moduli": primes }),
        Value::Array(values),
    );
    report.table = Some(Table { header: ["n", "num", "den", "decimal"].map(String::from).to_vec(), rows });
    Ok(report)
}

struct SamplerSpec {
    kind: String,
    group: String,
    param: String,
    values: Vec<u64>,
}

fn parse_sampler(spec: &str) -> Result<SamplerSpec> {
    let bad = || Error::parse(1, format!("sampler `{spec}` is not `<kind>:<group>:<param>=<n,...>`"));
    let mut parts = spec.splitn(3, ':');
    let (kind, group, rest) = (parts.next().ok_or_else(bad)?, parts.next().ok_or_else(bad)?, parts.next().ok_or_else(bad)?);
    let (param, list) = rest.split_once('=').ok_or_else(bad)?;
    let values = list.split(',').map(|v| v.trim().parse::<u64>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
    let expected = match kind {
        "walk" => "steps",
        "box" => "side",
        "ball" => "radius",
        _ => return Err(bad()),
    };
    if param != expected {
        return Err(Error::parse(1, format!("`{kind}` samplers take `{expected}=`, not `{param}=`")));
    }
    Ok(SamplerSpec { kind: kind.into(), group: group.into(), param: param.into(), values })
}

fn walk_estimate<G>(group: &G, gens: &[G::Elem], steps: usize, k: usize, trials: u64, seed: u64) -> Result<EstimateResult>
where
    G: Group + Sync,
    G::Elem: Send + Sync + Clone + PartialEq + std::fmt::Debug,
{
    let walk = RandomWalk { group, step: StepDistribution::lazy(group, gens)?, steps };
    estimate_dc_k(&walk, k, trials, seed)
}

fn box_weights(g: &MalcevGroup) -> Result<Vec<u32>> {
    match g.name.as_str() {
        "heisenberg" => Ok(vec![2, 1, 1]),
        "ut4" => Ok(vec![3, 2, 2, 1, 1, 1]),
        n if n.starts_with("zn") => Ok(vec![1; g.m]),
        other => Err(Error::PreconditionFailed(format!("no Følner weights known for `{other}`"))),
    }
}

fn estimate_cmd(sampler: &str, k: usize, trials: u64, seed: u64) -> Result<Report> {
    let spec = parse_sampler(sampler)?;
    let mut results = Vec::new();
    for &v in &spec.values {
        let r = match spec.kind.as_str() {
            "walk" => match MalcevGroup::builtin(&spec.group) {
                Ok(h) => match h.fast() {
                    Some(fast) => {
                        let gens: Vec<Vec<i128>> = h
                            .top_generators()
                            .iter()
                            .map(|e| e.iter().map(|c| i128::try_from(c).expect("unit vector")).collect())
                            .collect();
                        walk_estimate(&fast, &gens, v as usize, k, trials, seed)?
                    }
                    None => walk_estimate(&h, &h.top_generators(), v as usize, k, trials, seed)?,
                },
                Err(_) => {
                    let g = corpus::builtin(&spec.group)?;
                    walk_estimate(&g, &g.generators().to_vec(), v as usize, k, trials, seed)?
                }
            },
            "box" => {
                let h = MalcevGroup::builtin(&spec.group)?;
                let weights = box_weights(&h)?;
                estimate_dc_k(&FolnerBox::new(h, v, weights)?, k, trials, seed)?
            }
            _ => {
                let rank: usize = spec
                    .group
                    .strip_prefix("free")
                    .and_then(|r| r.parse().ok())
                    .ok_or_else(|| Error::UnknownGroup(spec.group.clone()))?;
                estimate_dc_k(&FreeBall::new(rank, v as usize)?, k, trials, seed)?
            }
        };
        results.push((v, r));
    }
    let rows = results
        .iter()
        .map(|(v, r)| {
            vec![
                sampler.to_string(),
                v.to_string(),
                k.to_string(),
                r.point.to_string(),
                r.ci_low.to_string(),
                r.ci_high.to_string(),
                r.successes.to_string(),
                r.trials.to_string(),
                r.seed.to_string(),
            ]
        })
        .collect();
    let res = if results.len() == 1 {
        estimate_json(&results[0].1)
    } else {
        Value::Array(results.iter().map(|(v, r)| json!({ spec.param.clone(): v, "estimate": estimate_json(r) })).collect())
    };
    let mut report = Report::new("estimate", json!({ "sampler": sampler, "dc": k, "trials": trials, "seed": seed }), res);
    report.table = Some(Table {
        header: ["sampler", spec.param.as_str(), "k", "point", "ci_low", "ci_high", "successes", "trials", "seed"]
            .map(String::from)
            .to_vec(),
        rows,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Result<Report> {
        let cli = Cli::try_parse_from(std::iter::once("nilprob").chain(args.iter().copied())).unwrap();
        execute(&cli)
    }

    #[test]
    fn dc_reports_exact_values() {
        let r = run(&["dc", "--group", "builtin:sym3", "-k", "1"]).unwrap();
        assert_eq!(r.results["dc"]["num"], "1");
        assert_eq!(r.results["dc"]["den"], "2");
        let r = run(&["dc", "--group", "builtin:sym3", "-k", "0"]).unwrap();
        assert_eq!(r.results["dc"]["den"], "6");
    }

    #[test]
    fn reports_are_reproducible() {
        let args = ["estimate", "--sampler", "ball:free2:radius=4", "--trials", "500", "--seed", "3"];
        assert_eq!(run(&args).unwrap().to_json(), run(&args).unwrap().to_json());
        assert!(run(&["estimate", "--sampler", "ball:free2:radius=4"]).is_err());
        assert!(run(&["generic", "--rank", "2", "--radius", "3"]).is_err());
    }

    #[test]
    fn gallagher_on_sym4() {
        let r = run(&["gallagher", "--group", "builtin:sym4", "--normal", "v4", "-k", "1", "--full-audit"]).unwrap();
        assert!(r.all_passed(), "{:?}", r.checks);
        let r = run(&["gallagher", "--group", "builtin:sym4", "--normal", "(1,2)", "-k", "1"]);
        assert!(matches!(r, Err(Error::NotNormal(_))));
    }

    #[test]
    fn csv_sweeps() {
        let r = run(&["estimate", "--sampler", "walk:heisenberg:steps=5,10", "--trials", "200", "--seed", "1"]).unwrap();
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("sampler,steps,k,"));
        let r = run(&["dc", "--group", "builtin:dih8", "-k", "1"]).unwrap();
        assert!(r.to_csv().contains("dc.num,5"));
    }

    #[test]
    fn malcev_and_rootdensity() {
        let r = run(&["malcev", "--group", "heisenberg", "--quotient", "3", "--dc", "1"]).unwrap();
        assert_eq!(r.results["dc"]["num"], "11");
        assert!(matches!(run(&["malcev", "--group", "heisenberg", "--quotient", "2"]), Err(Error::NotCoprime { .. })));
        let r = run(&["rootdensity", "--poly-text", "v1", "--primes", "3,5"]).unwrap();
        assert_eq!(r.results[1]["density"]["den"], "5");
    }
}
