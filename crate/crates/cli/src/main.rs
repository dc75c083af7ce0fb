use std::cell::RefCell;
use std::io::Write;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use klmult_core::covex::{shuffle_data, theta};
use klmult_core::perm::{bounding_b, flag_b, is_covexillary, render_diagram, shape_lambda};
use klmult_core::poly::{buchberger_with_deadline, initial_ideal, kl_generators};
use klmult_core::report::{
    analyze_pair, composite_order, format_basis, schubert_degeneration, AnalysisOptions,
    PairReport, Shuffle,
};
use klmult_core::sweep::{parse_pair_filter, sweep, Execution, SweepSummary};
use klmult_core::tabpipe::{
    enumerate_flagged_ssyt, enumerate_set_valued, hilbert_series_covexillary, pipe_dreams,
};
use klmult_core::{BigInt, Error, Permutation};
use serde_json::json;

thread_local! {
    static OUT: RefCell<String> = const { RefCell::new(String::new()) };
}

// Output is buffered and written once, so a closed pipe is not a panic.
macro_rules! say {
    () => { say_raw("\n") };
    ($($arg:tt)*) => {{
        say_raw(&format!($($arg)*));
        say_raw("\n");
    }};
}

fn say_raw(s: &str) {
    OUT.with(|o| o.borrow_mut().push_str(s));
}

fn flush() {
    let text = OUT.with(|o| std::mem::take(&mut *o.borrow_mut()));
    let mut stdout = std::io::stdout().lock();
    let _ = stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush());
}

const EXIT_DOMAIN: u8 = 2;
const EXIT_THEOREM: u8 = 3;

/// Multiplicities and Hilbert series of Schubert varieties at torus fixed points.
#[derive(Parser, Debug)]
#[command(name = "klmult", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct PairArgs {
    /// Torus fixed point `e_v`, in one-line notation.
    #[arg(long)]
    v: Permutation,
    /// Schubert variety `X_w`, in one-line notation.
    #[arg(long)]
    w: Permutation,
}

#[derive(Args, Debug)]
struct Common {
    /// Tie-breaking variable order of the degeneration.
    #[arg(long, default_value = "covex")]
    shuffle: Shuffle,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Give up (exit 2) after this many seconds.
    #[arg(long)]
    budget_seconds: Option<f64>,
    /// Include per-stage timings in reports.
    #[arg(long)]
    timings: bool,
    /// Search-node budget for the vertex decomposability check (skipped if absent).
    #[arg(long)]
    vd_budget: Option<usize>,
}

impl Common {
    fn options(&self) -> AnalysisOptions {
        AnalysisOptions {
            shuffle: self.shuffle,
            deadline: self
                .budget_seconds
                .map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0))),
            vertex_decomposable_budget: self.vd_budget,
            timings: self.timings,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ObjectKind {
    Tableaux,
    Pipedreams,
    Setvalued,
    Theta,
    Diagram,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Multiplicity by every applicable method, with cross-checks.
    Mult {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Hilbert series numerator and expansions (covexillary `w`).
    Hilbert {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        json: bool,
        /// Number of expansion coefficients to print.
        #[arg(long, default_value_t = 12)]
        terms: usize,
    },
    /// List combinatorial objects attached to the pair (covexillary `w`).
    Objects {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum)]
        kind: ObjectKind,
        /// Entry count for set-valued tableaux.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Reduced Gröbner basis, initial ideal and its prime decomposition.
    Groebner {
        /// Torus fixed point `e_v` (not used with --schubert).
        #[arg(long, required_unless_present = "schubert")]
        v: Option<Permutation>,
        #[arg(long)]
        w: Permutation,
        /// Degenerate the Schubert determinantal ideal of `w` under pure lex
        /// (--shuffle sw-ne or se-nw) instead of the Kazhdan-Lusztig ideal.
        #[arg(long)]
        schubert: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Analyze every pair `v ≤ w` in `S_n`.
    Sweep {
        #[arg(long)]
        n: usize,
        /// `;`-separated `w:v` patterns, `*` matching anything.
        #[arg(long)]
        pairs: Option<String>,
        #[arg(long)]
        covexillary_only: bool,
        /// Worker threads (0 = one per core); KLMULT_WORKERS overrides.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug)]
enum Failure {
    Domain(String),
    Theorem(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent(_) => Failure::Theorem(e.to_string()),
            e => Failure::Domain(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Mult { pair, common } => cmd_mult(&pair, &common),
        Command::Hilbert { pair, json, terms } => cmd_hilbert(&pair, json, terms),
        Command::Objects {
            pair,
            kind,
            k,
            json,
        } => cmd_objects(&pair, kind, k, json),
        Command::Groebner {
            v,
            w,
            schubert,
            common,
        } => cmd_groebner(v.as_ref(), &w, schubert, &common),
        Command::Sweep {
            n,
            pairs,
            covexillary_only,
            workers,
            common,
        } => cmd_sweep(n, pairs.as_deref(), covexillary_only, workers, &common),
    };
    flush();
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_DOMAIN)
        }
        Err(Failure::Theorem(msg)) => {
            eprintln!("cross-check failure: {msg}");
            ExitCode::from(EXIT_THEOREM)
        }
    }
}

fn to_json(r: &PairReport) -> String {
    serde_json::to_string(r).expect("report serializes")
}

fn list(xs: &[usize]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn print_report(r: &PairReport) {
    say!("v = {}", r.v);
    say!("w = {}", r.w);
    say!("covexillary: {}", if r.covexillary { "yes" } else { "no" });
    say!("shuffle: {}", r.shuffle);
    if let Some(t) = &r.theta {
        say!("theta: {t}");
    }
    if let Some(l) = &r.lambda {
        say!("lambda: {}", list(l));
    }
    if let Some(b) = &r.flag_big_b {
        say!("B(theta): {}", list(b));
    }
    if let Some(b) = &r.flag_b {
        say!("b(theta): {}", list(b));
    }
    let show = |x: Option<u64>| x.map_or("-".to_string(), |m| m.to_string());
    say!(
        "multiplicity: tableau {}, det {}, facets {}, degree {}",
        show(r.mult_tableau),
        show(r.mult_det),
        show(r.mult_facets),
        r.mult_degree
    );
    let g = klmult_core::UniPoly::from_i64(&r.g_numerator);
    say!("numerator: {} = {}", g.format_one_minus_t(), g);
    say!("initial ideal: <{}>", r.initial_ideal.join(", "));
    for (name, ok) in &r.checks {
        let tag = match (
            ok,
            klmult_core::report::is_theorem_check(name, r.covexillary, r.shuffle),
        ) {
            (true, _) => "ok",
            (false, true) => "FAIL",
            (false, false) => "fails (finding)",
        };
        say!("check {name}: {tag}");
    }
    if let Some(t) = &r.timings {
        for (stage, us) in t {
            say!("time {stage}: {us} us");
        }
    }
}

fn cmd_mult(pair: &PairArgs, common: &Common) -> Outcome {
    let r = analyze_pair(&pair.v, &pair.w, &common.options())?;
    if common.json {
        say!("{}", to_json(&r));
    } else {
        print_report(&r);
    }
    let failed = r.theorem_failures();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Theorem(format!(
            "{}:{} failed {}",
            r.w,
            r.v,
            failed.join(", ")
        )))
    }
}

fn require_covexillary(w: &Permutation) -> Outcome {
    if is_covexillary(w) {
        Ok(())
    } else {
        Err(Error::NotCovexillary(w.to_string()).into())
    }
}

fn ints(xs: &[BigInt]) -> Result<Vec<i64>, Failure> {
    xs.iter()
        .map(|x| {
            i64::try_from(x).map_err(|_| Failure::Domain(format!("coefficient {x} overflows")))
        })
        .collect()
}

fn cmd_hilbert(pair: &PairArgs, json: bool, terms: usize) -> Outcome {
    require_covexillary(&pair.w)?;
    let h = hilbert_series_covexillary(&pair.v, &pair.w)?;
    let local = ints(&h.numerator.series_over_one_minus_t(h.local_exponent, terms))?;
    let tangent = ints(
        &h.numerator
            .series_over_one_minus_t(h.tangent_exponent, terms),
    )?;
    let numerator = h
        .numerator
        .to_i64_vec()
        .ok_or_else(|| Failure::Domain("numerator overflows".into()))?;
    if json {
        let out = json!({
            "schema": 1,
            "v": pair.v,
            "w": pair.w,
            "numerator": numerator,
            "local_exponent": h.local_exponent,
            "tangent_exponent": h.tangent_exponent,
            "local_series": local,
            "tangent_series": tangent,
        });
        say!("{out}");
    } else {
        say!(
            "numerator: {} = {}",
            h.numerator.format_one_minus_t(),
            h.numerator
        );
        say!("local ring: numerator / (1 - t)^{}", h.local_exponent);
        say!("  {}", join(&local));
        say!("tangent cone: numerator / (1 - t)^{}", h.tangent_exponent);
        say!("  {}", join(&tangent));
    }
    Ok(())
}

fn join(xs: &[i64]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_objects(pair: &PairArgs, kind: ObjectKind, k: Option<usize>, json: bool) -> Outcome {
    let (v, w) = (&pair.v, &pair.w);
    let items: Vec<String> = match kind {
        ObjectKind::Diagram => vec![render_diagram(w)],
        ObjectKind::Theta => {
            require_covexillary(w)?;
            vec![theta(v, w)?.to_string()]
        }
        ObjectKind::Tableaux => {
            require_covexillary(w)?;
            let t = theta(v, w)?;
            enumerate_flagged_ssyt(&shape_lambda(w)?, &flag_b(&t)?)?
                .iter()
                .map(ToString::to_string)
                .collect()
        }
        ObjectKind::Pipedreams => {
            require_covexillary(w)?;
            let t = theta(v, w)?;
            pipe_dreams(&bounding_b(&t)?, &shape_lambda(w)?)?
                .iter()
                .map(|pd| pd.render())
                .collect()
        }
        ObjectKind::Setvalued => {
            require_covexillary(w)?;
            let k = k.ok_or_else(|| Failure::Domain("--kind setvalued needs --k".into()))?;
            let t = theta(v, w)?;
            enumerate_set_valued(&shape_lambda(w)?, &flag_b(&t)?, k)?
                .iter()
                .map(ToString::to_string)
                .collect()
        }
    };
    if json {
        let kind = format!("{kind:?}").to_lowercase();
        say!(
            "{}",
            json!({"schema": 1, "v": v, "w": w, "kind": kind, "objects": items})
        );
    } else {
        for (idx, item) in items.iter().enumerate() {
            if idx > 0 {
                say!();
            }
            say_raw(item);
            if !item.ends_with('\n') {
                say!();
            }
        }
    }
    Ok(())
}

fn cmd_groebner(
    v: Option<&Permutation>,
    w: &Permutation,
    schubert: bool,
    common: &Common,
) -> Outcome {
    let opts = common.options();
    let (ord, shuffle, gb, init) = match v {
        Some(v) if !schubert => {
            let (ord, shuffle) = composite_order(v, w, common.shuffle)?;
            let gens = kl_generators(v, w)?;
            let gb = buchberger_with_deadline(&gens, &ord, opts.deadline)?;
            let init = initial_ideal(&gb, &ord)?;
            (ord, shuffle, gb, init)
        }
        _ => {
            let (ord, gb, init) = schubert_degeneration(w, common.shuffle, opts.deadline)?;
            (ord, common.shuffle, gb, init)
        }
    };
    let basis = format_basis(&gb, &ord)?;
    let init_gens: Vec<String> = init.generators().iter().map(ToString::to_string).collect();
    let components: Vec<String> = if init.universe().len() <= 64 {
        init.radical()
            .prime_decomposition()?
            .iter()
            .map(ToString::to_string)
            .collect()
    } else {
        Vec::new()
    };
    let order: Vec<String> = ord
        .priority()
        .iter()
        .map(|c| format!("z[{}][{}]", c.i, c.j))
        .collect();
    let shuffles = match v {
        Some(v) if shuffle == Shuffle::Covex && !schubert => shuffle_data(v, w)
            .ok()
            .map(|d| (d.rho.to_string(), d.chi.to_string())),
        _ => None,
    };
    if common.json {
        let mut out = json!({
            "schema": 1,
            "v": v,
            "w": w,
            "shuffle": shuffle,
            "priority": order,
            "basis": basis,
            "initial_ideal": init_gens,
            "squarefree": init.is_squarefree(),
            "components": components,
        });
        if let Some((rho, chi)) = &shuffles {
            out["rho"] = json!(rho);
            out["chi"] = json!(chi);
        }
        say!("{out}");
    } else {
        say!("shuffle: {shuffle}");
        if let Some((rho, chi)) = &shuffles {
            say!("rho: {rho}");
            say!("chi: {chi}");
        }
        say!("priority: {}", order.join(" > "));
        say!("reduced basis ({}):", basis.len());
        for g in &basis {
            say!("  {g}");
        }
        say!("initial ideal: <{}>", init_gens.join(", "));
        say!("squarefree: {}", init.is_squarefree());
        say!("components ({}):", components.len());
        for c in &components {
            say!("  {c}");
        }
    }
    Ok(())
}

fn worker_count(flag: usize) -> Result<usize, Failure> {
    match std::env::var("KLMULT_WORKERS") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Domain(format!("KLMULT_WORKERS={s:?} is not a worker count"))),
        Err(_) => Ok(flag),
    }
}

const MAX_SWEEP_N: usize = 7;

fn cmd_sweep(
    n: usize,
    pairs: Option<&str>,
    covexillary_only: bool,
    workers: usize,
    common: &Common,
) -> Outcome {
    let filter = match pairs {
        Some(p) => parse_pair_filter(p)?,
        None => Vec::new(),
    };
    if n == 0 || n > MAX_SWEEP_N {
        return Err(Failure::Domain(format!(
            "sweep supports 1 <= n <= {MAX_SWEEP_N}, got {n}"
        )));
    }
    let workers = worker_count(workers)?;
    let exec = if cfg!(feature = "parallel") && workers != 1 {
        Execution::Parallel { workers }
    } else {
        Execution::Sequential
    };
    let (reports, summary) = sweep(n, covexillary_only, &filter, &common.options(), exec)?;
    if common.json {
        for r in &reports {
            say!("{}", to_json(r));
        }
        say!("{}", json!({"schema": 1, "summary": summary}));
    } else {
        print_summary(&summary);
    }
    if summary.has_theorem_failures() {
        let names: Vec<&str> = summary
            .theorem_failures
            .keys()
            .map(String::as_str)
            .collect();
        Err(Failure::Theorem(format!(
            "theorem-level checks failed: {}",
            names.join(", ")
        )))
    } else {
        Ok(())
    }
}

fn print_summary(s: &SweepSummary) {
    say!("pairs: {}", s.pairs);
    say!("errors: {}", s.errors.len());
    for e in &s.errors {
        say!("  {e}");
    }
    let section = |title: &str, m: &std::collections::BTreeMap<String, Vec<String>>| {
        say!("{title}: {}", m.len());
        for (name, pairs) in m {
            say!("  {name}: {} pair(s)", pairs.len());
            for p in pairs {
                say!("    {p}");
            }
        }
    };
    section("theorem-level failures", &s.theorem_failures);
    section("findings", &s.findings);
}
