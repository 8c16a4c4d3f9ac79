use std::io::Read;
use std::path::Path;

use mvss::abelian::{smith_normal_form, AbelianError, FgAbGroup, IntMatrix};
use mvss::assembly::{
    assemble_target, build_ideal_chain_e1, build_mv_e1, subsets_of_size, truncation_sweep,
    AssemblyError, IdealChainInput, MvE1, MvInput, MvInputSpec, Piece,
};
use mvss::coarse::{
    check_excision_many, disjoint_rays, parse_weight, CoarseError, ExcisionParams, Interval,
    Metric, ProductSet,
};
use mvss::pages::{run_to_infinity, Bidegree, Grading, Page, PageError, PageSpec};
use mvss::simplex::{verify, SimplexError};
use num_rational::Rational64;
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::args::{
    Cli, Command, CustomCover, ExcisionArgs, Format, MetricKind, RunArgs, SimplexAction, SnfArgs,
    SweepArgs,
};
use crate::render;
use crate::report::{CellLayout, ExcisionSummary, InputKind, RunReport, SnfReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_AMBIGUOUS: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{what}: {message} at line {line}, column {column}")]
    Json {
        what: String,
        message: String,
        line: usize,
        column: usize,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Coarse(#[from] CoarseError),
    #[error(transparent)]
    Page(#[from] PageError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
}

/// What a command printed and how it ended.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn execute(cli: &Cli) -> Outcome {
    let mut out = Outcome::default();
    let result = match &cli.command {
        Command::Run(args) => cmd_run(cli, args, &mut out),
        Command::Snf(args) => cmd_snf(cli, args, &mut out),
        Command::Excision(args) => cmd_excision(cli, args, &mut out),
        Command::Simplex { action } => cmd_simplex(cli, action, &mut out),
        Command::Sweep(args) => cmd_sweep(cli, args, &mut out),
    };
    match result {
        Ok(code) => out.code = code,
        Err(e) => {
            out.stderr.push_str(&format!("error: {e}\n"));
            out.code = EXIT_ERROR;
        }
    }
    out
}

fn grading(cli: &Cli) -> Result<Grading, CliError> {
    Ok(Grading::new(cli.period.unwrap_or(2))?)
}

fn emit<T: Serialize>(cli: &Cli, out: &mut Outcome, value: &T, table: impl FnOnce(&T) -> String) {
    match cli.format {
        Format::Json => {
            out.stdout
                .push_str(&serde_json::to_string_pretty(value).expect("reports serialize"));
            out.stdout.push('\n');
        }
        Format::Table => out.stdout.push_str(&table(value)),
    }
}

fn echo(cli: &Cli, out: &mut Outcome, raw: &str) {
    if cli.verbose {
        out.stderr.push_str(raw);
        if !raw.ends_with('\n') {
            out.stderr.push('\n');
        }
    }
}

fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Json {
        what: what.to_string(),
        message: e
            .to_string()
            .split(" at line ")
            .next()
            .unwrap_or_default()
            .to_string(),
        line: e.line(),
        column: e.column(),
    })
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(io)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

/// Picks the input shape from its top-level keys.
fn detect(text: &str) -> Result<InputKind, CliError> {
    let value: serde_json::Value = parse_json(text, "input")?;
    let Some(obj) = value.as_object() else {
        return Err(CliError::Invalid("input must be a JSON object".into()));
    };
    if obj.contains_key("labels") {
        Ok(InputKind::MayerVietoris)
    } else if obj.contains_key("length") {
        Ok(InputKind::IdealChain)
    } else if obj.contains_key("cells") || obj.contains_key("cap") {
        Ok(InputKind::Page)
    } else {
        Err(CliError::Invalid(
            "cannot tell the input shape: expected \"labels\" (Mayer-Vietoris), \"length\" (ideal chain) or \"cells\" (first page)".into(),
        ))
    }
}

fn nonzero_cells(page: &Page) -> Vec<Piece> {
    page.nonzero_cells()
        .map(|(at, g)| Piece {
            p: at.p,
            q: at.q,
            group: g.clone(),
        })
        .collect()
}

/// Whether some `d¹` could be nonzero but none was given.
fn adjacent_without_d1(page: &Page, has_d1: bool) -> bool {
    !has_d1
        && page
            .nonzero_cells()
            .any(|(at, _)| at.p > 0 && !page.group(Bidegree::new(at.p - 1, at.q)).is_zero())
}

fn finish_run(
    source: String,
    kind: InputKind,
    page: Page,
    mv: Option<&MvE1>,
    mut warnings: Vec<String>,
) -> Result<RunReport, CliError> {
    let e1 = nonzero_cells(&page);
    let run = run_to_infinity(page)?;
    let target = assemble_target(&run);
    let (mode, d1_status, layout) = match mv {
        Some(e1) => {
            if let Some(w) = e1.d1_status.warning() {
                warnings.push(w.to_string());
            }
            let layout = e1
                .layout
                .iter()
                .filter(|(_, s)| !s.is_empty())
                .map(|(at, s)| CellLayout {
                    p: at.p,
                    q: at.q,
                    summands: s.clone(),
                })
                .collect();
            (Some(e1.mode), Some(e1.d1_status), layout)
        }
        None => (None, None, Vec::new()),
    };
    Ok(RunReport {
        source,
        kind,
        mode,
        d1_status,
        warnings,
        e1,
        layout,
        target,
    })
}

fn run_mv(source: String, kind: InputKind, input: &MvInput) -> Result<RunReport, CliError> {
    let e1 = build_mv_e1(input)?;
    finish_run(source, kind, e1.page.clone(), Some(&e1), Vec::new())
}

pub fn run_report(cli: &Cli, args: &RunArgs, out: &mut Outcome) -> Result<RunReport, CliError> {
    if let Some(builtin) = args.builtin {
        let cap = args.cap.unwrap_or(builtin.default_cap());
        echo(
            cli,
            out,
            &serde_json::json!({"builtin": builtin, "cap": cap, "period": cli.period.unwrap_or(2)})
                .to_string(),
        );
        let input = builtin.family().truncate(cap, grading(cli)?)?;
        return run_mv(builtin.to_string(), InputKind::Builtin, &input);
    }
    let path = args
        .input
        .as_deref()
        .expect("clap requires --builtin or --input");
    let text = read_input(path)?;
    echo(cli, out, &text);
    let source = path.display().to_string();
    match detect(&text)? {
        InputKind::MayerVietoris => {
            let spec: MvInputSpec = parse_json(&text, "Mayer-Vietoris input")?;
            let input = spec.to_input(cli.period)?;
            run_mv(source, InputKind::MayerVietoris, &input)
        }
        InputKind::IdealChain => {
            let mut spec: IdealChainInput = parse_json(&text, "ideal-chain input")?;
            if let Some(p) = cli.period {
                spec.period = p;
            }
            let page = build_ideal_chain_e1(&spec)?;
            let mut warnings = Vec::new();
            if adjacent_without_d1(&page, !spec.d1.is_empty()) {
                warnings.push("differentials assumed zero".to_string());
            }
            finish_run(source, InputKind::IdealChain, page, None, warnings)
        }
        _ => {
            let mut spec: PageSpec = parse_json(&text, "first-page input")?;
            if let Some(p) = cli.period {
                spec.period = p;
            }
            let page = spec.build()?;
            let check = page.validate();
            if !check.valid {
                return Err(PageError::Invalid {
                    r: 1,
                    issues: check.issues,
                }
                .into());
            }
            let mut warnings = Vec::new();
            if adjacent_without_d1(&page, !spec.d1.is_empty()) {
                warnings.push("differentials assumed zero".to_string());
            }
            finish_run(source, InputKind::Page, page, None, warnings)
        }
    }
}

fn cmd_run(cli: &Cli, args: &RunArgs, out: &mut Outcome) -> Result<i32, CliError> {
    let report = run_report(cli, args, out)?;
    emit(cli, out, &report, render::run);
    Ok(if report.target.is_ambiguous() {
        EXIT_AMBIGUOUS
    } else {
        EXIT_OK
    })
}

fn cmd_snf(cli: &Cli, args: &SnfArgs, out: &mut Outcome) -> Result<i32, CliError> {
    echo(cli, out, &args.matrix);
    let matrix: IntMatrix = parse_json(&args.matrix, "--matrix")?;
    let snf = smith_normal_form(&matrix);
    snf.verify(&matrix).map_err(CliError::Invalid)?;
    let invariant_factors = snf.invariant_factors();
    let cokernel = FgAbGroup::from_orders(matrix.rows() - snf.rank, &invariant_factors);
    let report = SnfReport {
        matrix,
        u: snf.u,
        d: snf.d,
        v: snf.v,
        rank: snf.rank,
        invariant_factors,
        cokernel,
    };
    emit(cli, out, &report, render::snf);
    Ok(EXIT_OK)
}

fn describe_interval(i: &Interval) -> String {
    match (i.lo, i.hi) {
        (None, None) => "ℤ".into(),
        (Some(a), None) => format!("[{a}, ∞)"),
        (None, Some(b)) => format!("(-∞, {b}]"),
        (Some(a), Some(b)) => format!("[{a}, {b}]"),
    }
}

fn describe(set: &ProductSet) -> String {
    set.intervals
        .iter()
        .map(describe_interval)
        .collect::<Vec<_>>()
        .join(" × ")
}

pub fn excision_summary(args: &ExcisionArgs) -> Result<ExcisionSummary, CliError> {
    let (name, cover, members) = match (args.builtin, args.custom) {
        (Some(b), _) => {
            let spaces = b.blocky_cover()?;
            let members = spaces.iter().map(|s| s.to_string()).collect();
            (
                b.to_string(),
                spaces.iter().map(ProductSet::from).collect::<Vec<_>>(),
                members,
            )
        }
        (None, Some(CustomCover::DisjointRays)) => {
            if args.gap < 1 {
                return Err(CliError::Invalid("--gap must be at least 1".into()));
            }
            let cover = disjoint_rays(args.gap);
            let members = cover.iter().map(describe).collect();
            (format!("disjoint-rays:{}", args.gap), cover, members)
        }
        (None, None) => unreachable!("clap requires --builtin or --custom"),
    };
    let n = cover[0].dim();
    let metric = match (args.metric, &args.weights) {
        (MetricKind::D1, None) => Metric::D1,
        (MetricKind::Dinf, None) => Metric::DInf,
        (MetricKind::Weighted, Some(w)) => Metric::weighted(
            w.split(',')
                .map(parse_weight)
                .collect::<Result<Vec<_>, _>>()?,
        )?,
        (MetricKind::Weighted, None) => {
            return Err(CliError::Invalid(
                "--metric weighted needs --weights".into(),
            ))
        }
        (_, Some(_)) => {
            return Err(CliError::Invalid(
                "--weights only applies to --metric weighted".into(),
            ))
        }
    };
    let r = args.radius;
    let s = match (args.s, &metric) {
        (Some(s), _) => s,
        (None, Metric::DInf) => r,
        (None, Metric::D1) => n as u64 * r,
        (None, Metric::Weighted(ws)) => {
            if ws.len() != n {
                return Err(CoarseError::DimensionMismatch(n, ws.len()).into());
            }
            let hi = *ws.iter().max().expect("weights are nonempty");
            let lo = *ws.iter().min().expect("weights are nonempty");
            let bound = (hi / lo) * Rational64::from_integer((n as u64 * r) as i64);
            bound.ceil().to_integer() as u64
        }
    };
    let box_half = args.box_half.unwrap_or(2 * (r + s) + 1);
    let params = ExcisionParams {
        radius: r,
        s,
        box_half,
        metric: metric.clone(),
    };
    let subsets: Vec<Vec<usize>> = (1..=cover.len())
        .flat_map(|k| subsets_of_size(cover.len(), k))
        .collect();
    let subfamilies = check_excision_many(&cover, &subsets, &params)?;
    Ok(ExcisionSummary {
        cover: name,
        dim: n,
        members,
        metric,
        radius: r,
        s,
        box_half,
        passed: subfamilies.iter().all(|rep| rep.holds),
        subfamilies,
    })
}

fn cmd_excision(cli: &Cli, args: &ExcisionArgs, out: &mut Outcome) -> Result<i32, CliError> {
    let summary = excision_summary(args)?;
    echo(
        cli,
        out,
        &serde_json::to_string(&summary.metric).expect("metrics serialize"),
    );
    emit(cli, out, &summary, render::excision);
    Ok(EXIT_OK)
}

fn cmd_simplex(cli: &Cli, action: &SimplexAction, out: &mut Outcome) -> Result<i32, CliError> {
    let SimplexAction::Verify { dim, samples } = *action;
    echo(
        cli,
        out,
        &serde_json::json!({"dim": dim, "samples": samples, "seed": cli.seed}).to_string(),
    );
    let report = verify(dim, samples, cli.seed)?;
    emit(cli, out, &report, render::simplex);
    Ok(EXIT_OK)
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs, out: &mut Outcome) -> Result<i32, CliError> {
    let caps = args
        .caps
        .clone()
        .unwrap_or_else(|| (1..=args.builtin.default_cap().max(1)).collect());
    echo(
        cli,
        out,
        &serde_json::json!({"builtin": args.builtin, "caps": caps}).to_string(),
    );
    let report = truncation_sweep(args.builtin.family().as_ref(), &caps, grading(cli)?)?;
    emit(cli, out, &report, render::sweep);
    Ok(EXIT_OK)
}
