mod emit;

use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use emit::{Artifact, Registry};
use wrapframe::avl::{parse, parse_atom, satisfies, Atom, Formula};
use wrapframe::fol::{theory_axioms, translate_formula, Fresh};
use wrapframe::minmodel::{minimal_model_set, MinModelError};
use wrapframe::morphism::{is_isomorphic, subsumes, unify_all};
use wrapframe::pipeline::{Outcome, Pipeline};
use wrapframe::scope::{
    apply_constraints, check_instance, solve, transcribe_with, ConstraintSet, DeterminerRegistry, QuantifiedComplex,
    Reading, ScopeError,
};
use wrapframe::{json, Label, Model, Signature};

#[derive(Parser)]
#[command(name = "wrapframe", version, about = "Feature structures with wrappings")]
struct Cli {
    /// Also write every model produced into DIR, for the property-test corpus.
    #[arg(long, global = true, value_name = "DIR")]
    seed_corpus: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Output {
    /// Output format: json, dot, fol, smt or gqt.
    #[arg(long)]
    emit: Option<String>,
    /// Write one file per result into DIR instead of stdout.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Canonical minimal model set of an .avl formula.
    Minmodel {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Run a TOML derivation spec end to end.
    Pipeline {
        spec: PathBuf,
        /// Instance frame, overriding the one named in the spec.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long)]
        max_readings: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Least upper bound of models under path equations.
    Unify {
        #[arg(required = true)]
        models: Vec<PathBuf>,
        /// A path equation such as `@k0 == @b0`; repeatable.
        #[arg(long = "eq")]
        eqs: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Exit 0 iff the first model subsumes the second.
    Subsumes { a: PathBuf, b: PathBuf },
    /// Exit 0 iff the two models are isomorphic.
    Iso { a: PathBuf, b: PathBuf },
    /// Enumerate the readings of a quantified complex.
    Solve {
        #[command(flatten)]
        complex: ComplexArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Readings of a complex transcribed to first-order formulas.
    Transcribe {
        #[command(flatten)]
        complex: ComplexArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Check readings against an instance, or a model against an .avl formula.
    Check {
        /// A complex (with --instance) or a model (with --formula).
        file: PathBuf,
        #[arg(long, conflicts_with = "formula", required_unless_present = "formula")]
        instance: Option<PathBuf>,
        #[arg(long)]
        formula: Option<PathBuf>,
        #[arg(long)]
        top: Option<String>,
        #[arg(long, default_value = "quantifier")]
        constraints: String,
    },
    /// Graphviz rendering of a model.
    Dot { model: PathBuf },
    /// First-order translation of an .avl formula.
    Fol {
        file: PathBuf,
        /// Append the wrapping theory with reachability paths up to DEPTH.
        #[arg(long, value_name = "DEPTH")]
        axioms: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(clap::Args)]
struct ComplexArgs {
    complex: PathBuf,
    /// Label of the top hole when several are possible.
    #[arg(long)]
    top: Option<String>,
    /// Constraint preset applied before solving: quantifier or none.
    #[arg(long, default_value = "quantifier")]
    constraints: String,
    #[arg(long)]
    max_readings: Option<usize>,
}

/// Internal invariant breach; exit code 3.
#[derive(Debug)]
struct Breach(String);

impl std::fmt::Display for Breach {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "internal invariant breach: {}", self.0)
    }
}

impl std::error::Error for Breach {}

fn minmodel_error(e: MinModelError) -> anyhow::Error {
    Breach(e.to_string()).into()
}

fn scope_error(e: ScopeError) -> anyhow::Error {
    match e {
        ScopeError::InvalidReading(_) => Breach(e.to_string()).into(),
        other => other.into(),
    }
}

struct Ctx {
    registry: Registry,
    corpus: Option<(PathBuf, String)>,
    seeded: usize,
}

impl Ctx {
    fn seed(&mut self, m: &Model) -> Result<()> {
        if let Some((dir, cmd)) = &self.corpus {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let p = dir.join(format!("{cmd}-{}.json", self.seeded));
            std::fs::write(&p, json::to_json(m)).with_context(|| format!("writing {}", p.display()))?;
            self.seeded += 1;
        }
        Ok(())
    }

    /// Emits one result, to stdout or to `<out>/<stem>.<format>`.
    fn put(&mut self, output: &Output, default: &str, stem: &str, a: &Artifact) -> Result<()> {
        let fmt = output.emit.as_deref().unwrap_or(default);
        let text = self.registry.get(fmt)?.emit(a)?;
        if let Some(m) = a.model {
            self.seed(m)?;
        }
        match &output.out {
            Some(dir) => {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                let p = dir.join(format!("{stem}.{fmt}"));
                std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
            }
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                if !text.ends_with('\n') {
                    out.write_all(b"\n")?;
                }
            }
        }
        Ok(())
    }
}

fn read(p: &Path) -> Result<String> {
    std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

fn load_model(p: &Path) -> Result<Model> {
    json::from_json(&read(p)?).with_context(|| format!("loading {}", p.display()))
}

fn load_formula(p: &Path) -> Result<Formula> {
    parse(&read(p)?).with_context(|| format!("parsing {}", p.display()))
}

fn preset(name: &str) -> Result<ConstraintSet> {
    match name {
        "quantifier" => Ok(ConstraintSet::quantifier_default()),
        "none" => Ok(ConstraintSet::new()),
        _ => bail!("unknown constraint preset {name:?}; expected quantifier or none"),
    }
}

fn readings(args: &ComplexArgs) -> Result<Vec<Reading>> {
    let m = load_model(&args.complex)?;
    let Some(m) = apply_constraints(&m, &preset(&args.constraints)?) else {
        bail!("an incompatibility constraint fired on {}", args.complex.display());
    };
    let g = match &args.top {
        Some(t) => {
            let l: Label = t.parse().map_err(|_| anyhow::anyhow!("bad top label {t:?}"))?;
            QuantifiedComplex::with_top(m, &l)
        }
        None => QuantifiedComplex::new(m),
    }
    .map_err(scope_error)?;
    let mut rs = solve(&g).map_err(scope_error)?;
    if let Some(n) = args.max_readings {
        rs.truncate(n);
    }
    Ok(rs)
}

fn provenance(r: &Reading) -> String {
    if r.provenance.is_empty() {
        "no logical content".into()
    } else {
        r.provenance.join(" > ")
    }
}

fn run(cli: Cli, ctx: &mut Ctx) -> Result<ExitCode> {
    let dets = DeterminerRegistry::default();
    match cli.cmd {
        Cmd::Minmodel { file, output } => {
            let ms = match minimal_model_set(&load_formula(&file)?) {
                Err(e @ (MinModelError::NoLabelledContent | MinModelError::EmptyWrapping(_))) => {
                    eprintln!("{}: {e}", file.display());
                    return Ok(ExitCode::from(1));
                }
                r => r.map_err(minmodel_error)?,
            };
            if ms.is_empty() {
                eprintln!("{}: no model", file.display());
                return Ok(ExitCode::from(1));
            }
            for (i, m) in ms.iter().enumerate() {
                let a = Artifact { model: Some(m), ..Default::default() };
                ctx.put(&output, "json", &format!("model-{}", i + 1), &a)?;
            }
        }
        Cmd::Pipeline { spec, instance, max_readings, output } => {
            let mut p = Pipeline::load(&spec)?;
            if let Some(i) = instance {
                p.instance = Some(load_model(&i)?);
            }
            let report = p.run_with(&dets);
            let mut any = false;
            for c in &report.combinations {
                let idx = c.index.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
                match &c.outcome {
                    Outcome::Pruned { stage, reason } => println!("combination [{idx}]: pruned at {stage}: {reason}"),
                    Outcome::Solved { readings, .. } => {
                        println!("combination [{idx}]: {} reading(s)", readings.len());
                        for (j, rr) in readings.iter().take(max_readings.unwrap_or(usize::MAX)).enumerate() {
                            any = true;
                            println!("reading {}: {}", j + 1, provenance(&rr.reading));
                            match &rr.transcription {
                                Ok(t) => {
                                    let a = Artifact {
                                        model: Some(&rr.reading.model),
                                        formulas: vec![t.formula.clone()],
                                        gqt: Some(t.gqt.clone()),
                                    };
                                    ctx.put(&output, "fol", &format!("c{idx}-r{}", j + 1).replace(',', "-"), &a)?;
                                }
                                Err(e) => println!("transcription failed: {e}"),
                            }
                            match &rr.verdict {
                                Some(Ok(v)) => println!("instance: {v}"),
                                Some(Err(e)) => println!("instance: error: {e}"),
                                None => {}
                            }
                        }
                    }
                }
            }
            if !any {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Unify { models, eqs, output } => {
            let ms = models.iter().map(|p| load_model(p)).collect::<Result<Vec<_>>>()?;
            let eqs = eqs
                .iter()
                .map(|e| parse_atom(e).with_context(|| format!("equation {e:?}")))
                .collect::<Result<Vec<Atom>>>()?;
            match unify_all(&ms, &eqs) {
                Ok(m) => ctx.put(&output, "json", "unified", &Artifact { model: Some(&m), ..Default::default() })?,
                Err(e) => {
                    eprintln!("{e}");
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Cmd::Subsumes { a, b } => return Ok(verdict(subsumes(&load_model(&a)?, &load_model(&b)?))),
        Cmd::Iso { a, b } => return Ok(verdict(is_isomorphic(&load_model(&a)?, &load_model(&b)?))),
        Cmd::Solve { complex, output } => {
            let rs = readings(&complex)?;
            if rs.is_empty() {
                eprintln!("no reading");
                return Ok(ExitCode::from(1));
            }
            for (j, r) in rs.iter().enumerate() {
                eprintln!("reading {}: {}", j + 1, provenance(r));
                let t = transcribe_with(r, &dets).ok();
                let a = Artifact {
                    model: Some(&r.model),
                    formulas: t.iter().map(|t| t.formula.clone()).collect(),
                    gqt: t.map(|t| t.gqt),
                };
                ctx.put(&output, "json", &format!("reading-{}", j + 1), &a)?;
            }
        }
        Cmd::Transcribe { complex, output } => {
            let rs = readings(&complex)?;
            if rs.is_empty() {
                eprintln!("no reading");
                return Ok(ExitCode::from(1));
            }
            for (j, r) in rs.iter().enumerate() {
                let t = transcribe_with(r, &dets).map_err(scope_error)?;
                let a = Artifact { model: Some(&r.model), formulas: vec![t.formula], gqt: Some(t.gqt) };
                ctx.put(&output, "fol", &format!("reading-{}", j + 1), &a)?;
            }
        }
        Cmd::Check { file, instance, formula, top, constraints } => {
            if let Some(f) = formula {
                return Ok(verdict(satisfies(&load_model(&file)?, &load_formula(&f)?)));
            }
            let inst = load_model(&instance.expect("clap requires --instance or --formula"))?;
            let args = ComplexArgs { complex: file, top, constraints, max_readings: None };
            let rs = readings(&args)?;
            if rs.is_empty() {
                eprintln!("no reading");
                return Ok(ExitCode::from(1));
            }
            let mut all = true;
            for (j, r) in rs.iter().enumerate() {
                let t = transcribe_with(r, &dets).map_err(scope_error)?;
                let v = check_instance(&t.formula, &inst).map_err(scope_error)?;
                println!("reading {}: {v}", j + 1);
                all &= v;
            }
            return Ok(verdict(all));
        }
        Cmd::Dot { model } => {
            let m = load_model(&model)?;
            let out = Output { emit: Some("dot".into()), out: None };
            ctx.put(&out, "dot", "model", &Artifact { model: Some(&m), ..Default::default() })?;
        }
        Cmd::Fol { file, axioms, output } => {
            let f = load_formula(&file)?;
            let mut formulas = vec![translate_formula(&f, &mut Fresh::default())];
            if let Some(depth) = axioms {
                let mut sig = Signature::default();
                f.labels().iter().for_each(|l| sig.add_label(l));
                for m in minimal_model_set(&f).unwrap_or_default() {
                    sig.merge(&Signature::of_model(&m));
                }
                formulas.extend(theory_axioms(&sig, depth));
            }
            ctx.put(&output, "fol", "formula", &Artifact { formulas, ..Default::default() })?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verdict(v: bool) -> ExitCode {
    println!("{v}");
    if v {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn color() -> bool {
    match std::env::var("WRAPFRAME_COLOR").as_deref() {
        Ok("always") => true,
        Ok("never") => false,
        _ => std::io::stderr().is_terminal(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cmd = match &cli.cmd {
        Cmd::Minmodel { .. } => "minmodel",
        Cmd::Pipeline { .. } => "pipeline",
        Cmd::Unify { .. } => "unify",
        Cmd::Subsumes { .. } => "subsumes",
        Cmd::Iso { .. } => "iso",
        Cmd::Solve { .. } => "solve",
        Cmd::Transcribe { .. } => "transcribe",
        Cmd::Check { .. } => "check",
        Cmd::Dot { .. } => "dot",
        Cmd::Fol { .. } => "fol",
    };
    let mut ctx = Ctx { registry: Registry::default(), corpus: cli.seed_corpus.clone().map(|d| (d, cmd.into())), seeded: 0 };
    match run(cli, &mut ctx) {
        Ok(code) => code,
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            let (tag, code) = if e.is::<Breach>() { ("internal error", 3) } else { ("error", 2) };
            if color() {
                eprintln!("\x1b[1;31m{tag}:\x1b[0m {e:#}");
            } else {
                eprintln!("{tag}: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}
