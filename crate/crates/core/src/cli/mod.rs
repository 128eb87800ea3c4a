//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or configuration
//! error, 3 budget exceeded. All output is deterministic for a fixed set of
//! arguments.

mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::coarse::GapSet;
use crate::construct::{
    brick_cover_zn, dyadic_demo, even_integers_demo, interval_cover_z, restrict_certificate, tree_cover_free,
    z2_extension_demo, zero_dim_analysis, BrickParams, ConstructError, ZeroDimVerdict,
};
use crate::cover::{certificate_from_json, certificate_to_json, verify_certificate, Certificate, CoverError};
use crate::group::descriptor::parse_group;
use crate::group::{GroupElement, GroupError, GroupKind, GroupModel, Limits, Subgroup};
use crate::rational::{fmt_rat, parse_rat, rat, Rat};

#[derive(Debug, Parser)]
#[command(name = "coarsedim", version, about = "Asymptotic-dimension certificates for discrete groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Group preset (Z, Z2, Z3, F2, F3, Z_mod_m, Dyadic(K)) or JSON.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Radius (ball, norm bound).
    #[arg(long, global = true, value_parser = parse_radius)]
    pub r: Option<Rat>,
    /// Scale radius R; the scale is the ball B(R).
    #[arg(long, alias = "R", global = true)]
    pub scale: Option<i64>,
    /// Window radius.
    #[arg(long, global = true)]
    pub window: Option<i64>,
    #[arg(long, global = true)]
    pub colors: Option<usize>,
    /// Output file (construct) or directory (demo).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest ball that may be enumerated.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    pub budget_balls: usize,
    /// Largest uniform-cost search frontier.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub budget_search: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate a ball and print its size and largest norm.
    Ball,
    /// Print the norm of an element.
    Norm { element: String },
    /// Verify a certificate file.
    Verify { file: PathBuf },
    /// Build one certificate.
    Construct { kind: ConstructKind },
    /// Run a demo pipeline end to end.
    Demo { name: DemoName },
    /// Randomized oracle comparisons.
    Selftest {
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    Interval,
    Brick,
    Tree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    Z,
    Zn,
    Free,
    Dyadic,
    Extension,
    Zerodim,
}

fn parse_radius(s: &str) -> Result<Rat, String> {
    let r = parse_rat(s).map_err(|e| e.to_string())?;
    if r < Rat::from_integer(0) {
        return Err("radius must be nonnegative".into());
    }
    Ok(r)
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error("{stage}: {source}")]
    Stage { stage: String, source: Box<CliError> },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Stage { source, .. } => source.exit_code(),
            CliError::Group(e) if e.is_budget() => 3,
            CliError::Cover(CoverError::Group(e)) if e.is_budget() => 3,
            CliError::Construct(e) if e.is_budget() => 3,
            CliError::Construct(ConstructError::Verification { .. }) => 1,
            CliError::Cover(CoverError::Verification(_)) => 1,
            _ => 2,
        }
    }
}

fn stage<T>(name: &str, r: Result<T, impl Into<CliError>>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Stage { stage: name.into(), source: Box::new(e.into()) })
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

impl Cli {
    fn limits(&self) -> Limits {
        Limits { ball_cap: self.budget_balls, search_cap: self.budget_search }
    }

    fn model(&self, default: &str) -> Result<GroupModel, CliError> {
        let desc = self.group.as_deref().unwrap_or(default);
        Ok(parse_group(desc)?.with_limits(self.limits()))
    }

    fn positive(&self, v: Option<i64>, default: i64, what: &str) -> Result<i64, CliError> {
        let v = v.unwrap_or(default);
        if v < 1 {
            return Err(CliError::Usage(format!("--{what} must be positive, got {v}")));
        }
        Ok(v)
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Ball => {
            let model = cli.model("Z")?;
            let r = cli.r.ok_or_else(|| CliError::Usage("ball needs --r".into()))?;
            let ball = model.ball(r)?;
            writeln!(out, "group\tradius\tsize\tmax_norm")?;
            writeln!(out, "{}\t{}\t{}\t{}", model.describe(), fmt_rat(&r), ball.len(), fmt_rat(&ball.max_norm()))?;
            Ok(0)
        }
        Command::Norm { element } => {
            let model = cli.model("Z")?;
            let g = model.parse(element)?;
            writeln!(out, "element\tnorm")?;
            writeln!(out, "{g}\t{}", fmt_rat(&model.norm(&g)?))?;
            Ok(0)
        }
        Command::Verify { file } => cmd_verify(cli, file, out),
        Command::Construct { kind } => cmd_construct(cli, *kind, out),
        Command::Demo { name } => cmd_demo(cli, *name, out),
        Command::Selftest { cases } => selftest::run(cli.seed, *cases, cli.limits(), out),
    }
}

fn cmd_verify(cli: &Cli, file: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(file)?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
    let fallback = match &cli.group {
        Some(_) => Some(cli.model("Z")?),
        None => None,
    };
    let (model, cert) = certificate_from_json(&v, fallback.as_ref())?;
    let model = model.with_limits(cli.limits());
    let report = verify_certificate(&model, &cert)?;
    write!(out, "{}", report.to_tsv())?;
    Ok(if report.pass { 0 } else { 1 })
}

fn rank_of(model: &GroupModel, want: &str) -> Result<usize, CliError> {
    match (model.kind(), want) {
        (GroupKind::FreeAbelian { rank }, "abelian") | (GroupKind::Free { rank }, "free") => Ok(*rank),
        _ => Err(CliError::Usage(format!("this construction does not apply to {}", model.describe()))),
    }
}

fn cmd_construct(cli: &Cli, kind: ConstructKind, out: &mut dyn Write) -> Result<i32, CliError> {
    let r = cli.positive(cli.scale, 2, "scale")?;
    let (model, cert, trace) = match kind {
        ConstructKind::Interval => {
            let w = cli.positive(cli.window, 20 * r, "window")?;
            let cert = interval_cover_z(r, w)?;
            (GroupModel::integers(), cert, format!("interval cover of Z at scale B({r})"))
        }
        ConstructKind::Brick => {
            let model = cli.model("Z2")?;
            let n = rank_of(&model, "abelian")?;
            let params = BrickParams { window: cli.window, colors: cli.colors, ..BrickParams::new(n, r) };
            let cert = brick_cover_zn(&params)?;
            (model, cert, format!("staggered cubes in Z^{n} at scale B({r})"))
        }
        ConstructKind::Tree => {
            let model = cli.model("F2")?;
            let k = rank_of(&model, "free")?;
            let w = cli.positive(cli.window, 6 * r, "window")?;
            let cert = tree_cover_free(k, r, w, cli.limits())?;
            (model, cert, format!("tree annuli in F{k} at scale B({r})"))
        }
    };
    let json = serde_json::to_string_pretty(&certificate_to_json(&model, &cert)?).expect("JSON value");
    match &cli.out {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => writeln!(out, "{json}")?,
    }
    if let Some(report) = &cert.report {
        writeln!(out, "trace\t{trace}")?;
        write!(out, "{}", report.to_tsv())?;
    }
    Ok(if cert.passes() { 0 } else { 1 })
}

/// Collects summary rows and certificate files for a demo.
struct Bundle<'a> {
    dir: Option<&'a Path>,
    rows: Vec<[String; 3]>,
    ok: bool,
}

impl Bundle<'_> {
    fn record(&mut self, model: &GroupModel, name: &str, cert: &Certificate, detail: String) -> Result<(), CliError> {
        let pass = cert.passes();
        self.ok &= pass;
        if let Some(dir) = self.dir {
            let v = certificate_to_json(model, cert)?;
            let text = serde_json::to_string_pretty(&v).expect("JSON value");
            std::fs::write(dir.join(format!("{name}.json")), text + "\n")?;
        }
        let colors = cert.cover.colors();
        let bound = cert.report.as_ref().map_or_else(|| "-".to_string(), |r| fmt_rat(&r.computed_bound));
        let detail = format!("colors={colors} bound={bound} cells={} {detail}", cert.cover.cells().len());
        self.rows.push([name.into(), if pass { "pass" } else { "FAIL" }.into(), detail.trim_end().into()]);
        Ok(())
    }

    fn note(&mut self, name: &str, result: &str, detail: String) {
        self.rows.push([name.into(), result.into(), detail]);
    }

    fn finish(self, trace: &str, out: &mut dyn Write) -> Result<i32, CliError> {
        let mut table = String::from("stage\tresult\tdetail\n");
        for [a, b, c] in &self.rows {
            table += &format!("{a}\t{b}\t{c}\n");
        }
        if let Some(dir) = self.dir {
            std::fs::write(dir.join("summary.tsv"), &table)?;
        }
        writeln!(out, "trace\t{trace}")?;
        write!(out, "{table}")?;
        Ok(if self.ok { 0 } else { 1 })
    }
}

fn cmd_demo(cli: &Cli, name: DemoName, out: &mut dyn Write) -> Result<i32, CliError> {
    if let Some(dir) = &cli.out {
        std::fs::create_dir_all(dir)?;
    }
    let mut b = Bundle { dir: cli.out.as_deref(), rows: Vec::new(), ok: true };
    let trace = match name {
        DemoName::Z => {
            let z = GroupModel::integers();
            let scales = cli.scale.map_or_else(|| vec![2, 8, 32], |r| vec![r]);
            for r in scales {
                let r = cli.positive(Some(r), 1, "scale")?;
                let w = cli.positive(cli.window, 20 * r, "window")?;
                let cert = stage(&format!("interval R={r}"), interval_cover_z(r, w))?;
                b.record(&z, &format!("z_R{r}"), &cert, format!("window=B({w})"))?;
            }
            "two-color interval covers of Z: asdim(Z) <= 1 on each window"
        }
        DemoName::Zn => {
            let r = cli.positive(cli.scale, 2, "scale")?;
            let ranks = match &cli.group {
                Some(_) => vec![rank_of(&cli.model("Z2")?, "abelian")?],
                None => vec![1, 2, 3],
            };
            for n in ranks {
                let params = BrickParams { window: cli.window, colors: cli.colors, ..BrickParams::new(n, r) };
                let cert = stage(&format!("bricks n={n}"), brick_cover_zn(&params))?;
                let model = GroupModel::free_abelian(n);
                b.record(&model, &format!("zn_{n}"), &cert, format!("side={}", params.default_side()))?;
            }
            "(n+1)-color staggered cube covers of Z^n: asdim(Z^n) <= n on each window"
        }
        DemoName::Free => {
            let model = cli.model("F2")?;
            let k = rank_of(&model, "free")?;
            let r = cli.positive(cli.scale, 2, "scale")?;
            let w = cli.positive(cli.window, 6 * r, "window")?;
            let cert = stage("tree cover", tree_cover_free(k, r, w, cli.limits()))?;
            b.record(&model, &format!("free_F{k}_R{r}"), &cert, format!("window=B({w})"))?;
            let a = Subgroup::generated_by([GroupElement::word(&[1])]);
            let sub = stage("restriction to <a>", restrict_certificate(&model, &cert, &a))?;
            b.record(&model, "free_restricted_a", &sub, String::new())?;
            "two-color annulus covers of a tree: free groups have asdim <= 1; restriction to a subgroup"
        }
        DemoName::Dyadic => {
            let w = cli.positive(cli.window, 40, "window")?;
            let even = stage("2Z to Z", even_integers_demo(w))?;
            b.record(&even.model, "even_subgroup", &even.subgroup_certificate, String::new())?;
            b.record(&even.model, "even_translated", &even.certificate, "representatives=0,1".into())?;
            let kmax = 6;
            let r = cli.scale.unwrap_or(5);
            let dw = cli.window.unwrap_or(20);
            let dy = stage("dyadic", dyadic_demo(kmax, 4, rat(r), rat(dw)))?;
            b.record(&dy.model, "dyadic_subgroup", &dy.subgroup_certificate, "subgroup=<1/16>".into())?;
            let reps = dy.cosets.representatives.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
            b.record(&dy.model, "dyadic_translated", &dy.certificate, format!("representatives={reps}"))?;
            "certificates moved from a subgroup over coset representatives: asdim is a supremum over subgroups"
        }
        DemoName::Extension => {
            let r = cli.positive(cli.scale, 3, "scale")?;
            let w = cli.positive(cli.window, 60, "window")?;
            let run = stage("extension", z2_extension_demo(r, w))?;
            let g = &run.data.total;
            b.record(run.data.quotient(), "quotient", &run.quotient_certificate, String::new())?;
            b.record(g, "kernel", &run.kernel_certificate, String::new())?;
            let req = &run.report.requirement;
            b.note(
                "kernel_requirement",
                "info",
                format!(
                    "thickening=B({}) kernel_scale_size={} kernel_window=B({})",
                    fmt_rat(&req.thickening_radius),
                    req.kernel_scale.len(),
                    fmt_rat(&req.kernel_window_radius)
                ),
            );
            b.record(g, "extension", &run.certificate, String::new())?;
            let axis = Subgroup::generated_by([GroupElement::vector([1, 0])]);
            let sub = stage("restriction", restrict_certificate(g, &run.certificate, &axis))?;
            b.record(g, "restricted", &sub, String::new())?;
            "Z^2 from Z by Z: (n+1)(k+1) colors for an extension, then restriction to Z x {0}"
        }
        DemoName::Zerodim => {
            let model = cli.model("Z")?;
            let k = GapSet::from_window(&model.ball(rat(cli.scale.unwrap_or(1).max(0)))?);
            let bound = cli.r.unwrap_or_else(|| rat(5));
            let w = rat(cli.positive(cli.window, 20, "window")?);
            match stage("zero-dimension search", zero_dim_analysis(&model, &k, bound, w))? {
                ZeroDimVerdict::Certificate(cert) => {
                    let detail = format!("one color, cells are cosets of <K>, search bound={}", fmt_rat(&bound));
                    b.record(&model, "zerodim", &cert, detail)?;
                }
                ZeroDimVerdict::NoCertificate { chain, reason } => {
                    let chain = chain.iter().map(ToString::to_string).collect::<Vec<_>>().join("->");
                    b.note("zerodim", "no-certificate", format!("chain={chain} ({reason})"));
                }
            }
            "asdim 0 iff bounded: the cell through 1 satisfies B = BK"
        }
    };
    b.finish(trace, out)
}
