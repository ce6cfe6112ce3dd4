use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bezout_core::backends::{
    certify_main_bound, solve_main_pipeline, solve_quadrature, solve_residue, BackendError,
    CeilingTable,
};
use bezout_core::harness::{run_certify, run_examples, run_figures, FigureError, RunConfig};
use bezout_core::quadrature::QuadratureConfig;
use bezout_core::regions::{
    build_region_with_retry, RegionError, RegionKind, RegionSpec, SvgScene,
};
use bezout_core::roots::RootError;
use bezout_core::separation::{delta, SeparationError};
use bezout_core::sylvester::{build, inverse_norm_report, resultant, solve_rhs, SylvesterError};
use bezout_core::{find_roots, BezoutSolution, Polynomial, RootSet};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "bezout",
    version,
    about = "Minimal Bézout cofactors and their separation bounds"
)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override a named tolerance, e.g. `--tol agreement=1e-6`.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tolerances: Vec<String>,
    /// Directory for reports and figures.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Pair {
    /// JSON file holding `A` as `{"coeffs": [[re, im], ...]}`.
    a: PathBuf,
    /// JSON file holding `B`.
    b: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendChoice {
    Sylvester,
    Residue,
    Quadrature,
    Reversed,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindChoice {
    Ea,
    Eb,
    Da,
    Db,
    Daea,
    Dbeb,
}

impl KindChoice {
    fn kind(self) -> RegionKind {
        match self {
            KindChoice::Ea => RegionKind::EA,
            KindChoice::Eb => RegionKind::EB,
            KindChoice::Da => RegionKind::DA,
            KindChoice::Db => RegionKind::DB,
            KindChoice::Daea => RegionKind::DAEA,
            KindChoice::Dbeb => RegionKind::DBEB,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve A R + B S = P.
    Solve {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum, default_value = "sylvester")]
        backend: BackendChoice,
        /// `one`, `monomial:<t>` or a polynomial JSON file.
        #[arg(long, default_value = "one")]
        rhs: String,
    },
    /// delta, the delta-tilde bracket and the sandwich check.
    Delta {
        #[command(flatten)]
        pair: Pair,
    },
    /// Roots of one polynomial with their residuals.
    Roots { poly: PathBuf },
    /// Boundary arcs of the separation regions.
    Regions {
        #[command(flatten)]
        pair: Pair,
        #[arg(long = "kind", value_enum, default_values = ["ea", "eb"])]
        kinds: Vec<KindChoice>,
        /// Use the image under z -> 1/z.
        #[arg(long)]
        inverted: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Dump the arcs (circle, angles, direction) as JSON.
        #[arg(long)]
        arcs: Option<PathBuf>,
    },
    /// Sylvester matrix, resultant triple and inverse-norm ratio.
    Sylvester {
        #[command(flatten)]
        pair: Pair,
        /// Constant for the inverse-norm bound.
        #[arg(long)]
        c3: Option<f64>,
    },
    /// Run every check over a seeded random ensemble.
    Certify {
        #[arg(long, default_value_t = 500)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        degree_min: usize,
        #[arg(long, default_value_t = 5)]
        degree_max: usize,
        #[arg(long, default_value_t = 0.05)]
        delta_floor: f64,
        /// Separation probes per instance.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        timing: bool,
    },
    /// The closed-form example families.
    Examples,
    /// Rebuild the region figures as SVG.
    Figures,
}

enum Failure {
    Usage(String),
    Check(String),
    NonConvergence(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
            Failure::NonConvergence(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Check(m) | Failure::NonConvergence(m) => m,
        }
    }
}

impl From<RootError> for Failure {
    fn from(e: RootError) -> Self {
        match e {
            RootError::NonConvergence => Failure::NonConvergence(e.to_string()),
            RootError::DegreeZero => Failure::Usage(e.to_string()),
        }
    }
}

impl From<BackendError> for Failure {
    fn from(e: BackendError) -> Self {
        match e {
            BackendError::Quadrature(_) | BackendError::Roots(RootError::NonConvergence) => {
                Failure::NonConvergence(e.to_string())
            }
            BackendError::RhsDegree { .. }
            | BackendError::Sylvester(SylvesterError::ConstantPolynomial) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Check(e.to_string()),
        }
    }
}

impl From<SylvesterError> for Failure {
    fn from(e: SylvesterError) -> Self {
        match e {
            SylvesterError::SingularSystem(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<SeparationError> for Failure {
    fn from(e: SeparationError) -> Self {
        match e {
            SeparationError::Roots(r) => r.into(),
            SeparationError::Constant => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

impl From<RegionError> for Failure {
    fn from(e: RegionError) -> Self {
        Failure::Check(e.to_string())
    }
}

impl From<FigureError> for Failure {
    fn from(e: FigureError) -> Self {
        match e {
            FigureError::Io(e) => Failure::Usage(e.to_string()),
            FigureError::Region(e) => e.into(),
        }
    }
}

type Outcome = Result<Value, Failure>;

struct Output {
    json: bool,
}

impl Output {
    fn emit(&self, value: &Value, text: impl FnOnce() -> String) {
        if self.json {
            println!(
                "{}",
                serde_json::to_string_pretty(value).expect("values serialize")
            );
        } else {
            print!("{}", text());
        }
    }
}

fn read_poly(path: &Path) -> Result<Polynomial, Failure> {
    let raw =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&raw).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_pair(pair: &Pair) -> Result<(Polynomial, Polynomial), Failure> {
    let a = read_poly(&pair.a)?;
    let b = read_poly(&pair.b)?;
    if a.degree() == 0 || b.degree() == 0 {
        return Err(Failure::Usage(
            "both polynomials must be nonconstant".into(),
        ));
    }
    Ok((a, b))
}

fn parse_rhs(spec: &str) -> Result<Polynomial, Failure> {
    if spec == "one" {
        return Ok(Polynomial::one());
    }
    if let Some(t) = spec.strip_prefix("monomial:") {
        let t: usize = t
            .parse()
            .map_err(|_| Failure::Usage(format!("bad monomial degree `{t}`")))?;
        return Ok(Polynomial::monomial(t));
    }
    read_poly(Path::new(spec))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn fmt_poly(p: &Polynomial) -> String {
    p.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| format!("({:+.6e}{:+.6e}i) z^{i}", c.re, c.im))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn roots_of(a: &Polynomial, b: &Polynomial) -> Result<(RootSet, RootSet), Failure> {
    Ok((find_roots(a)?, find_roots(b)?))
}

fn cmd_solve(
    cfg: &RunConfig,
    out: &Output,
    pair: &Pair,
    backend: BackendChoice,
    rhs: &str,
) -> Outcome {
    let (a, b) = read_pair(pair)?;
    let p = parse_rhs(rhs)?;
    let qcfg = QuadratureConfig::default();
    let reference = solve_rhs(&build(&a, &b)?, &p)?;
    let mut solutions: Vec<BezoutSolution> = Vec::new();
    let need_roots = backend != BackendChoice::Sylvester;
    let roots = if need_roots {
        Some(roots_of(&a, &b)?)
    } else {
        None
    };
    let wants = |c: BackendChoice| backend == c || backend == BackendChoice::All;
    if wants(BackendChoice::Sylvester) {
        solutions.push(reference.clone());
    }
    if let Some((ra, rb)) = &roots {
        if wants(BackendChoice::Residue) {
            solutions.push(solve_residue(&a, &b, ra, rb, &p)?);
        }
        if wants(BackendChoice::Quadrature) {
            let spec = RegionSpec::from_roots(RegionKind::EA, ra, rb)?;
            let (g1, used) = build_region_with_retry(&spec)?;
            let (g2, _) = build_region_with_retry(&used.with_kind(RegionKind::EB))?;
            solutions.push(solve_quadrature(&a, &b, ra, rb, &g1, &g2, &p, &qcfg)?);
        }
    }
    if wants(BackendChoice::Reversed) {
        if p != Polynomial::one() {
            return Err(Failure::Usage(
                "the reversed pipeline solves for P = 1 only".into(),
            ));
        }
        solutions.push(solve_main_pipeline(&a, &b, &qcfg)?);
    }

    let scale = 1.0
        + reference
            .r
            .coeff_norm()
            .value()
            .max(reference.s.coeff_norm().value());
    let gaps: Vec<f64> = solutions.iter().map(|s| s.distance(&reference)).collect();
    let agree = gaps.iter().all(|&g| g <= cfg.tol("agreement") * scale);
    let residual_ok = solutions
        .iter()
        .all(|s| s.residual <= cfg.tol("residual") * scale);

    let certification = if p == Polynomial::one() {
        let (ra, rb) = match roots {
            Some(r) => r,
            None => roots_of(&a, &b)?,
        };
        let d = delta(&a, &b, &ra, &rb)?;
        Some(certify_main_bound(
            &a,
            &b,
            &reference,
            d.delta,
            &CeilingTable::builtin(),
        ))
    } else {
        None
    };
    let value = json!({
        "solutions": solutions,
        "gaps_to_sylvester": gaps,
        "agreement_ok": agree,
        "residual_ok": residual_ok,
        "certification": certification,
    });
    out.emit(&value, || {
        let mut s = String::new();
        for (sol, gap) in solutions.iter().zip(&gaps) {
            let _ = writeln!(
                s,
                "[{}] residual {:.3e}, gap {:.3e}",
                sol.backend.label(),
                sol.residual,
                gap
            );
            let _ = writeln!(s, "  R = {}", fmt_poly(&sol.r));
            let _ = writeln!(s, "  S = {}", fmt_poly(&sol.s));
        }
        if let Some(c) = &certification {
            let _ = writeln!(
                s,
                "delta {:.6e}  |R| d^2 = {:.4e}  |S| d^2 = {:.4e}  ceiling {:?}",
                c.delta, c.ratio_r, c.ratio_s, c.ceiling
            );
        }
        s
    });
    if agree && residual_ok {
        Ok(value)
    } else {
        Err(Failure::Check(
            "backends disagree or residual above tolerance".into(),
        ))
    }
}

fn cmd_delta(out: &Output, pair: &Pair) -> Outcome {
    let (a, b) = read_pair(pair)?;
    let (ra, rb) = roots_of(&a, &b)?;
    let report = delta(&a, &b, &ra, &rb)?;
    let value = json!(report);
    out.emit(&value, || {
        format!(
            "delta        {:.12e}\ndelta~       [{:.12e}, {:.12e}]\nargmin       {}\ntilde at     {}\nsandwich ok  {}\n",
            report.delta,
            report.delta_tilde_lower,
            report.delta_tilde_upper,
            report.argmin_witness,
            report.tilde_witness,
            report.sandwich_ok
        )
    });
    if report.sandwich_ok {
        Ok(value)
    } else {
        Err(Failure::Check("sandwich check failed".into()))
    }
}

fn cmd_roots(out: &Output, path: &Path) -> Outcome {
    let p = read_poly(path)?;
    let set = find_roots(&p)?;
    let value = json!(set);
    out.emit(&value, || {
        let mut s = String::new();
        for (r, res) in set.roots.iter().zip(&set.residuals) {
            let _ = writeln!(s, "{:+.15e} {:+.15e}i   |p| = {:.2e}", r.re, r.im, res);
        }
        s
    });
    if set.verified {
        Ok(value)
    } else {
        Err(Failure::Check("root residuals above tolerance".into()))
    }
}

fn cmd_regions(
    cfg: &RunConfig,
    out: &Output,
    pair: &Pair,
    kinds: &[KindChoice],
    inverted: bool,
    svg: Option<&Path>,
    arcs: Option<&Path>,
) -> Outcome {
    let (a, b) = read_pair(pair)?;
    let (ra, rb) = roots_of(&a, &b)?;
    let base = RegionSpec::from_roots(RegionKind::EA, &ra, &rb)?;
    let mut contours = Vec::new();
    for k in kinds {
        let kind = if inverted {
            k.kind().inverted()
        } else {
            k.kind()
        };
        let (c, _) = build_region_with_retry(&base.with_kind(kind))?;
        contours.push(c);
    }
    let summary: Vec<Value> = contours
        .iter()
        .map(|c| {
            json!({
                "kind": c.kind.name(),
                "components": c.loop_count,
                "length": c.total_length,
                "nested": c.nested,
                "orientation_certificate": c.orientation_certificate,
            })
        })
        .collect();
    let svg = svg
        .map(Path::to_path_buf)
        .or_else(|| cfg.out_dir.as_ref().map(|d| d.join("regions.svg")));
    if let Some(path) = &svg {
        let mut scene = SvgScene::default();
        for (c, color) in contours.iter().zip(
            [
                "#1f4e9c", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e", "#212f3d",
            ]
            .iter()
            .cycle(),
        ) {
            scene.contour(c, color, Some(color));
        }
        let (pa, pb): (Vec<_>, Vec<_>) = if inverted {
            (
                ra.roots.iter().map(|z| z.inv()).collect(),
                rb.roots.iter().map(|z| z.inv()).collect(),
            )
        } else {
            (ra.roots.clone(), rb.roots.clone())
        };
        scene
            .markers(&pa, "#1f4e9c", Some("α"))
            .markers(&pb, "#b03a2e", Some("β"));
        write_file(path, &scene.render())?;
    }
    if let Some(path) = arcs {
        let dump = serde_json::to_string_pretty(&contours).expect("contours serialize");
        write_file(path, &dump)?;
    }
    let value = json!({ "regions": summary, "svg": svg });
    out.emit(&value, || {
        let mut s = String::new();
        for c in &contours {
            let _ = writeln!(
                s,
                "{:<10} {} component(s), length {:.6}{}",
                c.kind.name(),
                c.loop_count,
                c.total_length,
                if c.nested { ", nested" } else { "" }
            );
        }
        s
    });
    Ok(value)
}

fn cmd_sylvester(cfg: &RunConfig, out: &Output, pair: &Pair, c3: Option<f64>) -> Outcome {
    let (a, b) = read_pair(pair)?;
    let (ra, rb) = roots_of(&a, &b)?;
    let m = build(&a, &b)?;
    let res = resultant(&a, &b, &ra, &rb)?;
    let d = delta(&a, &b, &ra, &rb)?;
    let inv = inverse_norm_report(&a, &b, d.delta, c3)?;
    let value = json!({
        "matrix": m.entries.to_rows(),
        "resultant": res,
        "delta": d.delta,
        "inverse": inv,
    });
    out.emit(&value, || {
        let mut s = String::new();
        for row in m.entries.to_rows() {
            let cells: Vec<String> = row
                .iter()
                .map(|c| format!("{:>9.4}{:+.4}i", c.re, c.im))
                .collect();
            let _ = writeln!(s, "{}", cells.join(" "));
        }
        let _ = writeln!(s, "|det|               {:.12e}", res.determinant.norm());
        let _ = writeln!(s, "|b_K|^N prod|A(b)|  {:.12e}", res.via_roots_of_b);
        let _ = writeln!(s, "|a_N|^K prod|B(a)|  {:.12e}", res.via_roots_of_a);
        let _ = writeln!(s, "relative gap        {:.3e}", res.max_relative_gap);
        let _ = writeln!(s, "delta               {:.6e}", d.delta);
        let _ = writeln!(s, "max |inverse entry| {:.6e}", inv.max_entry_norm);
        let _ = writeln!(
            s,
            "bound               {:.6e} ({})",
            inv.bound, inv.c3_label
        );
        let _ = writeln!(s, "ratio               {:.6e}", inv.ratio);
        s
    });
    if res.agrees(cfg.tol("resultant")) && inv.within_bound {
        Ok(value)
    } else {
        Err(Failure::Check(
            "resultant formulas disagree or inverse above bound".into(),
        ))
    }
}

fn report_path(cfg: &RunConfig, name: &str) -> Option<PathBuf> {
    cfg.out_dir.as_ref().map(|d| d.join(name))
}

fn cmd_certify(cfg: &RunConfig, out: &Output) -> Outcome {
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let report = run_certify(cfg);
    let value = json!(report);
    if let Some(path) = report_path(cfg, "cert_report.json") {
        write_file(
            &path,
            &serde_json::to_string_pretty(&value).expect("report serializes"),
        )?;
    }
    if !out.json {
        for w in &report.warnings {
            eprintln!("warning: {w}");
        }
    }
    out.emit(&value, || report.summary());
    if report.passed() {
        Ok(value)
    } else {
        let first: Vec<String> = report
            .failures()
            .iter()
            .take(5)
            .map(|(i, f)| format!("#{i}: {f}"))
            .collect();
        Err(Failure::Check(format!(
            "{} failed record(s): {}",
            report.aggregate.failed_records,
            first.join("; ")
        )))
    }
}

fn cmd_examples(cfg: &RunConfig, out: &Output) -> Outcome {
    let report = run_examples(cfg.tol("examples"));
    let value = json!(report);
    if let Some(path) = report_path(cfg, "examples.json") {
        write_file(
            &path,
            &serde_json::to_string_pretty(&value).expect("report serializes"),
        )?;
    }
    out.emit(&value, || report.table());
    if report.all_ok {
        Ok(value)
    } else {
        Err(Failure::Check(
            "an example does not match its closed form".into(),
        ))
    }
}

fn cmd_figures(cfg: &RunConfig, out: &Output) -> Outcome {
    let dir = cfg
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("figures"));
    let report = run_figures(&dir)?;
    let value = json!(report);
    out.emit(&value, || {
        format!(
            "E_A components {}\nE_B components {}\nGamma_1 windings at alpha {:?}, at beta {:?}\nwritten to {}: {}\n",
            report.e_a_components,
            report.e_b_components,
            report.gamma1_windings_alpha,
            report.gamma1_windings_beta,
            dir.display(),
            report.files.join(", ")
        )
    });
    if report.all_ok {
        Ok(value)
    } else {
        Err(Failure::Check(
            "figure component counts or windings differ from the expected values".into(),
        ))
    }
}

fn run(cli: Cli) -> Outcome {
    let mut cfg = RunConfig::default();
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    for t in &cli.tolerances {
        cfg.set_tolerance(t)
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    cfg.out_dir = cli.out.clone();
    let out = Output { json: cli.json };
    match &cli.command {
        Command::Solve { pair, backend, rhs } => cmd_solve(&cfg, &out, pair, *backend, rhs),
        Command::Delta { pair } => cmd_delta(&out, pair),
        Command::Roots { poly } => cmd_roots(&out, poly),
        Command::Regions {
            pair,
            kinds,
            inverted,
            svg,
            arcs,
        } => cmd_regions(
            &cfg,
            &out,
            pair,
            kinds,
            *inverted,
            svg.as_deref(),
            arcs.as_deref(),
        ),
        Command::Sylvester { pair, c3 } => cmd_sylvester(&cfg, &out, pair, *c3),
        Command::Certify {
            size,
            degree_min,
            degree_max,
            delta_floor,
            samples,
            timing,
        } => {
            cfg.ensemble_size = *size;
            cfg.degree_min = *degree_min;
            cfg.degree_max = *degree_max;
            cfg.delta_floor = *delta_floor;
            cfg.separation_samples = *samples;
            cfg.record_timing = *timing;
            cmd_certify(&cfg, &out)
        }
        Command::Examples => cmd_examples(&cfg, &out),
        Command::Figures => cmd_figures(&cfg, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(_) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
