use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grres::report::{full_report, residual_stage, style_name, Verdict};
use grres::staircase::CheckedStaircase;
use grres::{
    build_staircase, build_theta_staircase, enumerate, ext_table, fullness_determinant, orbit_of, BigInt,
    ExactKTheory, Filter, Rect, Style, TwistedSchur, Weight,
};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "grres", version, about = "Verification reports for exceptional collections on G(k,n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List diagrams in the k x (n-k) box.
    Diagrams {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all")]
        filter: String,
    },
    /// Cyclic orbits, one per minimal upper triangular representative.
    Orbits {
        #[command(flatten)]
        common: Common,
    },
    /// The Kapranov or Fonarev collection.
    Collection {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "fonarev")]
        style: StyleArg,
    },
    /// Ext^•(Σ^λ U*, Σ^μ U*(t)).
    Ext {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        twist: i64,
    },
    /// Full Ext Gram matrix of a collection with its semiorthogonality violations.
    Gram {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "fonarev")]
        style: StyleArg,
    },
    /// A staircase complex, for --lambda with λ1 = n-k or for θ with --theta.
    Staircase {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "theta")]
        lambda: Option<String>,
        #[arg(long)]
        theta: bool,
    },
    /// Residual classes, their Gram matrix and the τ_R orbits.
    Residual {
        #[command(flatten)]
        common: Common,
    },
    /// Determinant of the Fonarev classes in the Kapranov basis.
    Fullness {
        #[command(flatten)]
        common: Common,
    },
    /// Every stage at once.
    Report {
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Diagrams { common, .. }
            | Command::Orbits { common }
            | Command::Collection { common, .. }
            | Command::Ext { common, .. }
            | Command::Gram { common, .. }
            | Command::Staircase { common, .. }
            | Command::Residual { common }
            | Command::Fullness { common }
            | Command::Report { common } => common,
        }
    }
}

#[derive(Args)]
struct Common {
    #[arg(long, allow_hyphen_values = true)]
    k: i64,
    #[arg(long, allow_hyphen_values = true)]
    n: i64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads; defaults to all cores.
    #[arg(long, env = "GRRES_JOBS")]
    jobs: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Largest C(n,k) accepted by the expensive commands.
    #[arg(long, default_value_t = 3003)]
    cap: u64,
    /// Run even when C(n,k) exceeds --cap.
    #[arg(long)]
    force: bool,
    /// Report wall-clock time per stage.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    Kapranov,
    Fonarev,
}

impl From<StyleArg> for Style {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::Kapranov => Style::Kapranov,
            StyleArg::Fonarev => Style::Fonarev,
        }
    }
}

/// Anything that ends the run with exit status 2.
struct Failure(String);

impl From<grres::Error> for Failure {
    fn from(e: grres::Error) -> Self {
        Failure(e.to_string())
    }
}

struct Output {
    json: Value,
    csv: Option<String>,
    pretty: Option<String>,
    passed: bool,
}

impl Output {
    fn info(value: impl Serialize) -> Result<Self, Failure> {
        Ok(Output { json: to_value(value)?, csv: None, pretty: None, passed: true })
    }
}

fn number(v: &BigInt) -> Value {
    Value::Number(v.to_string().parse().expect("integers are valid JSON numbers"))
}

fn to_value(value: impl Serialize) -> Result<Value, Failure> {
    serde_json::to_value(value).map_err(|e| Failure(format!("serialization failed: {e}")))
}

fn parse_weight(s: &str) -> Result<Weight, Failure> {
    let entries = s
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|_| Failure(format!("bad weight entry {p:?} in {s:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Weight::new(entries)?)
}

fn padded(rect: Rect, w: &Weight) -> Result<Weight, Failure> {
    let mut e = w.entries().to_vec();
    if e.len() > rect.k() {
        return Err(Failure(format!("weight {w} has more than k = {} entries", rect.k())));
    }
    if e.len() < rect.k() && w.last() < 0 {
        return Err(Failure(format!("cannot pad {w} with zeros: last entry is negative")));
    }
    e.resize(rect.k(), 0);
    Ok(Weight::new(e)?)
}

fn guard(rect: Rect, common: &Common) -> Result<(), Failure> {
    if rect.count() > common.cap && !common.force {
        return Err(Failure(format!(
            "C({},{}) = {} exceeds the size cap {}; pass --force or raise --cap",
            rect.n(),
            rect.k(),
            rect.count(),
            common.cap
        )));
    }
    Ok(())
}

fn csv_matrix<T: ToString>(rows: &[Vec<T>]) -> String {
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

fn with_timing(mut json: Value, timing: bool, started: Instant) -> Value {
    if timing {
        if let Value::Object(map) = &mut json {
            map.entry("timings_us").or_insert(json!({ "total": started.elapsed().as_micros() as u64 }));
        }
    }
    json
}

fn run(command: &Command) -> Result<Output, Failure> {
    let started = Instant::now();
    let common = command.common();
    let rect = Rect::new(common.k, common.n)?;
    let mut out = match command {
        Command::Diagrams { filter, .. } => {
            let filter: Filter = filter.parse()?;
            let ds = enumerate(rect, filter);
            let rows: Vec<Vec<usize>> = ds.iter().map(|d| d.parts().to_vec()).collect();
            let pretty = ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n") + "\n";
            Output { json: to_value(&ds)?, csv: Some(csv_matrix(&rows)), pretty: Some(pretty), passed: true }
        }
        Command::Orbits { .. } => {
            let orbits: Vec<Value> = enumerate(rect, Filter::MinimalUpper)
                .iter()
                .map(|d| {
                    let o = orbit_of(d);
                    json!({ "representative": o.representative, "length": o.len(), "members": o.members })
                })
                .collect();
            let mut csv = String::from("representative,length\n");
            for o in &orbits {
                let rep: Vec<String> =
                    o["representative"].as_array().into_iter().flatten().map(|v| v.to_string()).collect();
                let _ = writeln!(csv, "\"{}\",{}", rep.join(" "), o["length"]);
            }
            Output { json: Value::Array(orbits), csv: Some(csv), pretty: None, passed: true }
        }
        Command::Collection { style, .. } => {
            let c = grres::collections::build(rect, (*style).into());
            let ok = c.len() as u64 == rect.count();
            Output { passed: ok, ..Output::info(&c)? }
        }
        Command::Ext { lambda, mu, twist, .. } => {
            let e = TwistedSchur::new(rect, padded(rect, &parse_weight(lambda)?)?, 0)?;
            let f = TwistedSchur::new(rect, padded(rect, &parse_weight(mu)?)?, *twist)?;
            let table = ext_table::<BigInt>(&e, &f)?;
            let mut csv = String::from("degree,dim\n");
            for (d, v) in table.dims() {
                let _ = writeln!(csv, "{d},{v}");
            }
            let json = json!({
                "box": rect,
                "source": e,
                "target": f,
                "ext": table,
                "euler": number(&table.euler()),
            });
            Output { json, csv: Some(csv), pretty: None, passed: true }
        }
        Command::Gram { style, .. } => {
            guard(rect, common)?;
            let kt = ExactKTheory::new(rect)?;
            let collection = grres::collections::build(rect, (*style).into());
            let (g, violations) = grres::gram(kt.engine(), &collection.bundles(), grres::GramMode::FullExt)?;
            let passed = violations.is_empty() && g.is_upper_unitriangular();
            let violations: Vec<Value> = violations
                .iter()
                .map(|v| json!({ "row": v.row, "col": v.col, "degree": v.degree, "dim": number(&v.dim) }))
                .collect();
            let json = json!({
                "box": rect,
                "style": style_name((*style).into()),
                "gram": g,
                "violations": violations,
                "verdict": Verdict::from_bool(passed),
            });
            Output { json, csv: Some(csv_matrix(&g.entries)), pretty: None, passed }
        }
        Command::Staircase { lambda, theta, .. } => {
            guard(rect, common)?;
            let kt = ExactKTheory::new(rect)?;
            if *theta {
                let (k, n) = (rect.k(), rect.n());
                if k < 2 || n % k != 0 || n / k < 2 {
                    return Err(Failure(format!("--theta needs n = k m with k, m >= 2 (got k={k}, n={n})")));
                }
                let (complex, ledger) = build_theta_staircase(k, n / k)?;
                let k_exact = complex.k_exact(&kt)?;
                let hom_gaps = complex.hom_gaps(&kt)?;
                let passed = k_exact && hom_gaps.is_empty() && ledger.is_complete();
                let json = json!({
                    "staircase": CheckedStaircase { complex, k_exact },
                    "hom_gaps": hom_gaps,
                    "ledger": ledger,
                });
                Output { json, csv: None, pretty: None, passed }
            } else {
                let Some(lambda) = lambda else {
                    return Err(Failure("staircase needs --lambda or --theta".into()));
                };
                let w = padded(rect, &parse_weight(lambda)?)?;
                let d = w.as_diagram(rect).ok_or_else(|| Failure(format!("{w} is not a diagram in {rect}")))?;
                let complex = build_staircase(rect, &d)?;
                let k_exact = complex.k_exact(&kt)?;
                let hom_gaps = complex.hom_gaps(&kt)?;
                let json = json!({ "staircase": CheckedStaircase { complex, k_exact }, "hom_gaps": hom_gaps });
                Output { json, csv: None, pretty: None, passed: k_exact }
            }
        }
        Command::Residual { .. } => {
            guard(rect, common)?;
            let kt = ExactKTheory::new(rect)?;
            let (mut rep, stage) = residual_stage(&kt)?;
            rep.fullness_det = Some(fullness_determinant(&kt)?);
            Output {
                json: to_value(&rep)?,
                csv: Some(csv_matrix(&rep.residual_gram)),
                pretty: None,
                passed: stage.verdict != Verdict::Fail,
            }
        }
        Command::Fullness { .. } => {
            guard(rect, common)?;
            let kt = ExactKTheory::new(rect)?;
            let det = fullness_determinant(&kt)?;
            let ok = abs_is_one(&det);
            let json = json!({ "box": rect, "determinant": number(&det), "verdict": Verdict::from_bool(ok) });
            Output { json, csv: Some(format!("determinant\n{det}\n")), pretty: None, passed: ok }
        }
        Command::Report { .. } => {
            guard(rect, common)?;
            let rep = full_report(rect, common.timing)?;
            let pretty = pretty_report(&rep);
            let passed = rep.verdict != Verdict::Fail;
            return Ok(Output { json: to_value(&rep)?, csv: None, pretty: Some(pretty), passed });
        }
    };
    out.json = with_timing(out.json, common.timing, started);
    Ok(out)
}

fn abs_is_one(v: &BigInt) -> bool {
    *v == BigInt::from(1) || *v == BigInt::from(-1)
}

fn pretty_report(rep: &grres::Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}  overall: {:?}", rep.rect, rep.verdict);
    for c in &rep.collections {
        let _ = writeln!(s, "  collection {:<9} {:?}  objects {} support {:?}", c.style, c.verdict, c.objects, c.support_partition);
    }
    for g in &rep.gram {
        let _ = writeln!(s, "  gram       {:<9} {:?}  violations {}", g.style, g.verdict, g.violations.len());
    }
    let r = &rep.residual;
    let _ = writeln!(
        s,
        "  residual             {:?}  rank {} short {:?} tau {:?}",
        r.verdict, r.residual_rank, r.short_diagrams, r.tau_orbit_ok
    );
    let _ = writeln!(s, "  fullness             {:?}  det {}", rep.fullness.verdict, rep.fullness.determinant);
    let st = &rep.staircase;
    let _ = writeln!(s, "  staircase            {:?}  checked {} not exact {}", st.verdict, st.checked, st.not_k_exact.len());
    if let Some(t) = &rep.timings_us {
        for (stage, us) in t {
            let _ = writeln!(s, "  time {stage:<12} {:.3} s", *us as f64 / 1e6);
        }
    }
    s
}

fn emit(out: &Output, format: Format, path: Option<&PathBuf>) -> Result<(), Failure> {
    let text = match format {
        Format::Json => serde_json::to_string(&out.json).map_err(|e| Failure(e.to_string()))? + "\n",
        Format::Csv => out.csv.clone().ok_or_else(|| Failure("csv output is not available for this command".into()))?,
        Format::Pretty => match &out.pretty {
            Some(p) => p.clone(),
            None => serde_json::to_string_pretty(&out.json).map_err(|e| Failure(e.to_string()))? + "\n",
        },
    };
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = cli.command.common();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = common.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("grres: cannot start worker pool: {e}");
            return ExitCode::from(2);
        }
    };
    let result = pool.install(|| run(&cli.command)).and_then(|out| {
        emit(&out, common.format, common.output.as_ref())?;
        Ok(out.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("grres: {msg}");
            ExitCode::from(2)
        }
    }
}
