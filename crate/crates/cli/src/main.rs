use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rht_core::dercx::Scope;
use rht_core::galgebra::Rational;
use rht_core::invariants::{
    connecting_image, depth_over_catalog, der_homology, fibre_gottlieb, gottlieb, les_check,
    toral_certificate, GottliebResult,
};
use rht_core::model::{
    chi_pi, classify, cohomology, formal_dimension_estimate, is_pure, parse_document, Item,
    RelativeModel, SullivanModel, DEFAULT_WINDOW,
};
use rht_core::qlinalg::Subspace;
use rht_core::toolkit::{
    build_poset, degree_report, degree_table, enumerate_fibrations, render, Catalog, DegreeEntry,
    EnumerateOptions, Format,
};

#[derive(Parser)]
#[command(
    name = "rht",
    version,
    about = "Rational homotopy invariants of Sullivan models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate model files.
    Validate(Opts),
    /// Homotopy ranks, homotopy Euler number, formal dimension, purity.
    Homotopy(Opts),
    /// Cohomology through `--max-degree`; with `--window` also classify.
    Cohomology(Opts),
    /// Derivation homology over `--degrees`.
    DerHomology(Opts),
    /// Rational Gottlieb groups of spaces, or of the fiber of fibrations.
    Gottlieb(Opts),
    /// Fibre-restricted Gottlieb groups of fibrations.
    FibreGottlieb(Opts),
    /// Image of the connecting map in every fiber degree.
    Connecting(Opts),
    /// Exactness of the long exact sequence over `--degrees`.
    LesCheck(Opts),
    /// Toral-rank certificates for fibrations over degree-2 bases.
    ToralCheck(Opts),
    /// Gottlieb depth of a catalog of fibrations.
    Depth(Opts),
    /// Fibre-restricted Gottlieb poset of a catalog.
    Poset(Opts),
    /// Enumerate fibrations of a fiber (first file) over a base (second file).
    Enumerate(Opts),
}

#[derive(Args)]
struct Opts {
    /// Model files; catalog commands also accept directories.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Degree range `a..b` (inclusive) or a single degree.
    #[arg(long)]
    degrees: Option<DegreeRange>,
    #[arg(long)]
    max_degree: Option<u32>,
    /// Width of the vanishing window above the formal dimension.
    #[arg(long)]
    window: Option<u32>,
    /// Coefficient set for enumeration, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Option<Vec<String>>,
    /// Apply the finiteness gate to every catalog entry.
    #[arg(long)]
    require_finite: bool,
    /// Write the poset as Graphviz DOT to this path (`-` for stdout).
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    /// Derivation scope; defaults to absolute for spaces, relative for fibrations.
    #[arg(long, value_enum)]
    scope: Option<ScopeArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Absolute,
    Relative,
    Ideal,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Scope {
        match s {
            ScopeArg::Absolute => Scope::Absolute,
            ScopeArg::Relative => Scope::Relative,
            ScopeArg::Ideal => Scope::IdealValued,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct DegreeRange(u32, u32);

impl FromStr for DegreeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
        let (a, b) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => (num(s)?, num(s)?),
        };
        if a > b {
            return Err(format!("empty range {s}"));
        }
        Ok(DegreeRange(a, b))
    }
}

impl Opts {
    fn window(&self) -> u32 {
        self.window.unwrap_or(DEFAULT_WINDOW)
    }

    fn gate(&self) -> Option<u32> {
        self.require_finite.then(|| self.window())
    }

    fn range_or(&self, top: u32) -> std::ops::RangeInclusive<u32> {
        match self.degrees {
            Some(DegreeRange(a, b)) => a..=b,
            None => 1..=top,
        }
    }
}

struct Loaded {
    path: PathBuf,
    item: Item,
}

impl Loaded {
    fn name(&self) -> &str {
        match &self.item {
            Item::Space(m) => m.name(),
            Item::Fibration(f) => f.name(),
        }
    }

    fn fibration(&self) -> Result<&RelativeModel> {
        match &self.item {
            Item::Fibration(f) => Ok(f),
            Item::Space(m) => Err(rht_core::Error::Input(format!(
                "`{}` in {} is a space; this command needs a fibration",
                m.name(),
                self.path.display()
            ))
            .into()),
        }
    }

    fn space(&self) -> Result<&SullivanModel> {
        match &self.item {
            Item::Space(m) => Ok(m),
            Item::Fibration(f) => Err(rht_core::Error::Input(format!(
                "`{}` in {} is a fibration; this command needs a space",
                f.name(),
                self.path.display()
            ))
            .into()),
        }
    }
}

fn load(paths: &[PathBuf]) -> Result<Vec<Loaded>> {
    let mut out = Vec::new();
    for path in paths {
        let text = std::fs::read_to_string(path)
            .map_err(|e| rht_core::Error::Input(format!("{}: {e}", path.display())))?;
        let doc = parse_document(&text).with_context(|| path.display().to_string())?;
        out.extend(doc.items.into_iter().map(|item| Loaded {
            path: path.clone(),
            item,
        }));
    }
    Ok(out)
}

/// Text blocks separated by blank lines; JSON as one value or an array.
struct Output {
    json: bool,
    text: Vec<String>,
    values: Vec<Value>,
}

impl Output {
    fn new(json: bool) -> Self {
        Output {
            json,
            text: Vec::new(),
            values: Vec::new(),
        }
    }

    fn push(&mut self, text: String, value: Value) {
        if self.json {
            self.values.push(value);
        } else {
            self.text.push(text);
        }
    }

    fn emit(mut self) {
        if self.json {
            let v = if self.values.len() == 1 {
                self.values.pop().unwrap()
            } else {
                Value::Array(self.values)
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("serializable")
            );
        } else {
            let one_liners = self.text.iter().all(|t| t.lines().count() == 1);
            print!("{}", self.text.join(if one_liners { "" } else { "\n" }));
        }
    }
}

fn entries_from(g: &GottliebResult) -> BTreeMap<u32, DegreeEntry> {
    g.by_degree()
        .into_iter()
        .map(|(n, basis)| {
            (
                n,
                DegreeEntry {
                    dim: basis.len(),
                    basis,
                },
            )
        })
        .collect()
}

fn subspace_entries(s: &Subspace, degrees: &[u32]) -> BTreeMap<u32, DegreeEntry> {
    degrees
        .iter()
        .map(|&n| {
            let basis: Vec<String> = s.piece(n).iter().map(|v| s.render_vector(v)).collect();
            (
                n,
                DegreeEntry {
                    dim: basis.len(),
                    basis,
                },
            )
        })
        .collect()
}

fn fiber_degrees(m: &SullivanModel) -> Vec<u32> {
    m.homotopy_dims().into_iter().map(|(n, _)| n).collect()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Validate(o) => validate(&o),
        Command::Homotopy(o) => homotopy(&o),
        Command::Cohomology(o) => cohomology_cmd(&o),
        Command::DerHomology(o) => der_homology_cmd(&o),
        Command::Gottlieb(o) => gottlieb_cmd(&o, false),
        Command::FibreGottlieb(o) => gottlieb_cmd(&o, true),
        Command::Connecting(o) => connecting(&o),
        Command::LesCheck(o) => les(&o),
        Command::ToralCheck(o) => toral(&o),
        Command::Depth(o) => depth(&o),
        Command::Poset(o) => poset(&o),
        Command::Enumerate(o) => enumerate(&o),
    }
}

fn validate(o: &Opts) -> Result<()> {
    let items = load(&o.files)?;
    let mut out = Output::new(o.json);
    for l in &items {
        let (kind, detail) = match &l.item {
            Item::Space(m) => ("space", format!("{} generators", m.gens().len())),
            Item::Fibration(f) => (
                "fibration",
                format!(
                    "{} base and {} fiber generators",
                    f.base().gens().len(),
                    f.fiber().gens().len()
                ),
            ),
        };
        out.push(
            format!("ok  {kind} {} ({detail})\n", l.name()),
            json!({ "file": l.path.display().to_string(), "kind": kind, "name": l.name() }),
        );
    }
    out.emit();
    Ok(())
}

fn homotopy(o: &Opts) -> Result<()> {
    let items = load(&o.files)?;
    let mut out = Output::new(o.json);
    for l in &items {
        let m = match &l.item {
            Item::Space(m) => m,
            Item::Fibration(f) => f.total(),
        };
        let degrees: BTreeMap<u32, DegreeEntry> = m
            .homotopy_dims()
            .into_iter()
            .map(|(n, dim)| {
                let basis = m
                    .gens()
                    .iter()
                    .filter(|g| g.degree == n)
                    .map(|g| g.name.clone())
                    .collect();
                (n, DegreeEntry { dim, basis })
            })
            .collect();
        let fd = formal_dimension_estimate(m);
        let mut text = degree_table(&format!("homotopy of {}", l.name()), &degrees);
        let fd_text = fd.map_or("unknown".to_string(), |d| d.to_string());
        writeln!(
            text,
            "chi_pi {}  formal dimension {fd_text}  pure {}",
            chi_pi(m),
            is_pure(m)
        )?;
        let mut v = degree_report(l.name(), &degrees, m.validity_bound(), None);
        v["chi_pi"] = json!(chi_pi(m));
        v["formal_dimension"] = json!(fd);
        v["pure"] = json!(is_pure(m));
        out.push(text, v);
    }
    out.emit();
    Ok(())
}

fn cohomology_cmd(o: &Opts) -> Result<()> {
    let items = load(&o.files)?;
    let mut out = Output::new(o.json);
    for l in &items {
        let m = match &l.item {
            Item::Space(m) => m,
            Item::Fibration(f) => f.total(),
        };
        let top = o
            .max_degree
            .or(m.validity_bound())
            .or_else(|| formal_dimension_estimate(m))
            .ok_or_else(|| rht_core::Error::Input(format!("{}: give --max-degree", l.name())))?;
        let degrees: BTreeMap<u32, DegreeEntry> = cohomology(m, top)?
            .into_iter()
            .map(|c| {
                let basis = c.representatives.iter().map(|r| r.to_string()).collect();
                (c.degree, DegreeEntry { dim: c.dim, basis })
            })
            .collect();
        let mut text = degree_table(&format!("cohomology of {}", l.name()), &degrees);
        let mut v = degree_report(l.name(), &degrees, Some(top), o.window);
        if let Some(window) = o.window {
            let r = classify(m, top, window)?;
            writeln!(
                text,
                "elliptic at bound {}  pure {}  F0 candidate {}",
                r.elliptic_at_bound, r.pure, r.f0_candidate
            )?;
            v["elliptic_at_bound"] = json!(r.elliptic_at_bound);
            v["pure"] = json!(r.pure);
            v["f0_candidate"] = json!(r.f0_candidate);
        }
        out.push(text, v);
    }
    out.emit();
    Ok(())
}

fn der_homology_cmd(o: &Opts) -> Result<()> {
    let items = load(&o.files)?;
    let mut out = Output::new(o.json);
    for l in &items {
        let (scope, top) = match &l.item {
            Item::Space(m) => (Scope::Absolute, m.gens().max_degree()),
            Item::Fibration(f) => (Scope::Relative, f.fiber().gens().max_degree()),
        };
        let scope = o.scope.map_or(scope, Scope::from);
        let mut degrees = BTreeMap::new();
        for n in o.range_or(top) {
            let h = match &l.item {
                Item::Space(m) => der_homology(m, n, scope)?,
                Item::Fibration(f) => der_homology(f, n, scope)?,
            };
            degrees.insert(
                n,
                DegreeEntry {
                    dim: h.dim,
                    basis: h.render(),
                },
            );
        }
        let title = format!("derivation homology of {} ({scope:?})", l.name());
        let v = degree_report(l.name(), &degrees, None, None);
        out.push(degree_table(&title, &degrees), v);
    }
    out.emit();
    Ok(())
}

fn gottlieb_cmd(o: &Opts, restricted: bool) -> Result<()> {
    let items = load(&o.files)?;
    let mut out = Output::new(o.json);
    for l in &items {
        let (g, bound) = if restricted {
            let f = l.fibration()?;
            (fibre_gottlieb(f)?, f.total().validity_bound())
        } else {
            let m = match &l.item {
                Item::Space(m) => m,
                Item::Fibration(f) => f.fiber(),
            };
            (gottlieb(m)?, m.validity_bound())
        };
        let degrees = entries_from(&g);
        let kind = if restricted {
            "fibre-restricted Gottlieb"
        } else {
            "Gottlieb"
        };
        let text = degree_table(&format!("{kind} group of {}", l.name()), &degrees);
        out.push(text, degree_report(l.name(), &degrees, bound, None));
    }
    out.emit();
    Ok(())
}

fn connecting(o: &Opts) -> Result<()> {
    let items = load(&o.files)?;
    let mut out = Output::new(o.json);
    for l in &items {
        let f = l.fibration()?;
        let degrees: Vec<u32> = fiber_degrees(f.fiber());
        let mut acc = BTreeMap::new();
        for &n in &degrees {
            acc.extend(subspace_entries(&connecting_image(f, n), &[n]));
        }
        let text = degree_table(&format!("connecting image of {}", l.name()), &acc);
        out.push(text, degree_report(l.name(), &acc, None, None));
    }
    out.emit();
    Ok(())
}

fn les(o: &Opts) -> Result<()> {
    let items = load(&o.files)?;
    let mut out = Output::new(o.json);
    let mut broken = Vec::new();
    for l in &items {
        let f = l.fibration()?;
        let report = les_check(f, o.range_or(f.fiber().gens().max_degree()))?;
        if !report.is_exact() {
            broken.push(l.name().to_string());
        }
        let nodes: Vec<Value> = report
            .nodes
            .iter()
            .map(|n| {
                json!({
                    "label": n.label,
                    "degree": n.degree,
                    "dim": n.dim,
                    "rank_in": n.rank_in,
                    "rank_out": n.rank_out,
                    "exact": n.is_exact(),
                })
            })
            .collect();
        out.push(
            format!("long exact sequence of {}\n{report}", l.name()),
            json!({ "model": l.name(), "exact": report.is_exact(), "nodes": nodes }),
        );
    }
    out.emit();
    if !broken.is_empty() {
        return Err(rht_core::Error::Invariant(format!(
            "sequence not exact for {}",
            broken.join(", ")
        ))
        .into());
    }
    Ok(())
}

fn toral(o: &Opts) -> Result<()> {
    let items = load(&o.files)?;
    let mut out = Output::new(o.json);
    for l in &items {
        let c = toral_certificate(l.fibration()?, o.window())?;
        let fd = c
            .formal_dimension
            .map_or("unknown".to_string(), |d| d.to_string());
        out.push(
            format!(
                "{}: r_0 >= {} {} (formal dimension {fd}, checked through {})\n",
                l.name(),
                c.r,
                c.verdict,
                c.finite_through
            ),
            json!({
                "model": l.name(),
                "r": c.r,
                "verdict": c.verdict.to_string(),
                "formal_dimension": c.formal_dimension,
                "finite_through": c.finite_through,
                "window": o.window(),
            }),
        );
    }
    out.emit();
    Ok(())
}

fn depth(o: &Opts) -> Result<()> {
    let c = Catalog::load(&o.files)?;
    let d = depth_over_catalog(&c.fiber, &c.entries, o.gate())?;
    let chain: Vec<Value> = d
        .chain
        .iter()
        .zip(&d.witness)
        .map(|(s, id)| json!({ "witness": id, "basis": s.render_basis() }))
        .collect();
    let mut text = format!("depth {}\n", d.depth);
    for (s, id) in d.chain.iter().zip(&d.witness) {
        writeln!(text, "  Q({})  <- {id}", s.render_basis().join(", "))?;
    }
    let mut out = Output::new(o.json);
    out.push(
        text,
        json!({ "fiber": c.fiber.name(), "depth": d.depth, "chain": chain }),
    );
    out.emit();
    Ok(())
}

fn write_dot(path: &Path, dot: &str) -> Result<()> {
    if path == Path::new("-") {
        print!("{dot}");
        Ok(())
    } else {
        std::fs::write(path, dot).with_context(|| format!("writing {}", path.display()))
    }
}

fn poset(o: &Opts) -> Result<()> {
    let c = Catalog::load(&o.files)?;
    let p = build_poset(&c, o.gate())?;
    if let Some(path) = &o.dot {
        write_dot(path, &render(&p, Format::Dot))?;
        if path == Path::new("-") {
            return Ok(());
        }
    }
    print!(
        "{}",
        render(&p, if o.json { Format::Json } else { Format::Text })
    );
    Ok(())
}

fn single_space(path: &Path) -> Result<SullivanModel> {
    let items = load(&[path.to_path_buf()])?;
    match &items[..] {
        [l] => Ok(l.space()?.clone()),
        _ => bail!(rht_core::Error::Input(format!(
            "{}: expected exactly one [space] block",
            path.display()
        ))),
    }
}

fn enumerate(o: &Opts) -> Result<()> {
    let [fiber_path, base_path] = &o.files[..] else {
        bail!(rht_core::Error::Input(
            "enumerate takes a fiber file and a base file".into()
        ));
    };
    let fiber = single_space(fiber_path)?;
    let base = single_space(base_path)?;
    let mut opts = EnumerateOptions {
        require_finite: o.gate(),
        ..Default::default()
    };
    if let Some(cs) = &o.coeffs {
        opts.coeffs = cs
            .iter()
            .map(|c| {
                c.trim()
                    .parse::<Rational>()
                    .map_err(|_| anyhow!(rht_core::Error::Input(format!("bad coefficient `{c}`"))))
            })
            .collect::<Result<_>>()?;
    }
    let c = enumerate_fibrations(&fiber, &base, &opts)?;
    if let Some(path) = &o.dot {
        write_dot(path, &render(&build_poset(&c, None)?, Format::Dot))?;
        if path == Path::new("-") {
            return Ok(());
        }
    }
    if o.json {
        let entries = c
            .entries
            .iter()
            .map(|(id, f)| Ok(json!({ "id": id, "fibre_gottlieb": fibre_gottlieb(f)?.basis() })))
            .collect::<Result<Vec<Value>>>()?;
        let doc = json!({ "fiber": fiber.name(), "base": base.name(), "entries": entries });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        print!("{}", c.to_text());
    }
    eprintln!("{} fibrations", c.len());
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<rht_core::Error>() {
        Some(core) if !core.is_validation() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
