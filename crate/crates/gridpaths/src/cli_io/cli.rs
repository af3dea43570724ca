use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::{
    read_dimacs, read_embedding, read_graph, read_representation, render_embedding, render_representation,
    write_embedding, write_graph, write_representation, IoError, RenderOptions,
};
use crate::constructions::{build_end_eater, build_gv, build_separator, GadgetBundle};
use crate::embedding::embed_orthogonal;
use crate::np_reductions::{reduce_3col, reduce_cc, reduce_is, ReductionOutput};
use crate::representation::{
    contact_report, derive_graph, normal_form_report, normalize_b01, refine, triangle_bound_check, validate,
    RepError, Semantics,
};
use crate::sat_reduction::{
    build_reduction_graph, build_reduction_rep, extract_assignment, layout_reduction, Assignment, Formula,
};
use crate::solvers::{
    is_k_colorable, max_edge_disjoint_triangles, max_independent_set, min_clique_cover, min_vertex_cover,
    sat_solve, search_cpg_rep, SatResult, SearchBudget, SearchOutcome,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The question had a negative answer, or a domain precondition failed.
    #[error("{0}")]
    Domain(String),
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: IoError },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => EXIT_NO,
            _ => EXIT_USAGE,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "gridpaths", version, about = "Contact and edge-intersection representations on the grid")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Output file, or prefix for commands that write several files; stdout when absent.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a named graph with its representation.
    Build {
        #[command(subcommand)]
        which: BuildKind,
        #[command(flatten)]
        output: Output,
    },
    /// Check a representation under the given semantics.
    Verify { semantics: SemanticsArg, rep: PathBuf },
    /// Print the graph a representation induces.
    Derive {
        rep: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Weights, contact points and the triangle bound.
    Stats { rep: PathBuf },
    /// Put a 0/1-bend representation of a subcubic triangle-free graph into normal form.
    Normalize {
        graph: PathBuf,
        rep: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Double all coordinates `times` times.
    Refine {
        rep: PathBuf,
        #[arg(long, default_value_t = 1)]
        times: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Build a reduction instance: SAT, independent set, clique cover or 3-colourability.
    Reduce {
        #[command(subcommand)]
        which: ReduceKind,
    },
    /// Read the truth assignment off a representation produced by `reduce sat`.
    ExtractAssignment {
        formula: PathBuf,
        rep: PathBuf,
        #[arg(long, default_value_t = 1)]
        i: u8,
    },
    /// Orthogonal embedding of a planar graph of maximum degree four.
    Embed {
        graph: PathBuf,
        #[arg(long, default_value_t = 8)]
        grid: i64,
        #[command(flatten)]
        output: Output,
    },
    /// Exact solvers for small graphs and formulas.
    Solve {
        #[command(subcommand)]
        which: SolveKind,
    },
    /// Bounded-box search for a CPG representation with at most k bends per path.
    SearchRep {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 8)]
        grid: i64,
        #[command(flatten)]
        output: Output,
    },
    /// Draw a representation or an embedding as SVG.
    Render {
        input: PathBuf,
        #[arg(long, default_value_t = 16)]
        unit: u32,
        #[arg(long)]
        no_labels: bool,
        #[arg(long)]
        no_endpoints: bool,
        /// Colour for label prefix, as `PREFIX=COLOR`; repeatable.
        #[arg(long = "role", value_parser = parse_role)]
        roles: Vec<(String, String)>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum BuildKind {
    /// The separator graph G_k.
    Gk {
        #[arg(long)]
        k: usize,
    },
    EndEater {
        #[arg(long)]
        i: u8,
    },
    Gv,
}

#[derive(Subcommand, Debug)]
pub enum ReduceKind {
    Sat {
        formula: PathBuf,
        #[arg(long, default_value_t = 1)]
        i: u8,
        /// `auto`, or comma-separated `var=0|1` pairs.
        #[arg(long, default_value = "auto")]
        assignment: String,
        /// Embedding of the incidence graph; searched for when absent.
        #[arg(long)]
        embedding: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    Is {
        graph: PathBuf,
        rep: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    Cc {
        graph: PathBuf,
        rep: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    #[command(name = "3col")]
    ThreeCol {
        graph: PathBuf,
        embedding: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand, Debug)]
pub enum SolveKind {
    Mis { graph: PathBuf },
    Vc { graph: PathBuf },
    Cc { graph: PathBuf },
    Kcol {
        #[arg(long)]
        k: usize,
        graph: PathBuf,
    },
    Sat { formula: PathBuf },
    /// Maximum number of pairwise edge-disjoint triangles.
    Tripack { graph: PathBuf },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum SemanticsArg {
    Cpg,
    Epg,
}

fn parse_role(s: &str) -> Result<(String, String), String> {
    s.split_once('=').map(|(a, b)| (a.to_string(), b.to_string())).ok_or_else(|| format!("`{s}` is not PREFIX=COLOR"))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input { path: path.to_path_buf(), source: e.into() })
}

fn load<T>(path: &Path, parse: fn(&str) -> Result<T, IoError>) -> Result<T, CliError> {
    parse(&read_text(path)?).map_err(|source| CliError::Input { path: path.to_path_buf(), source })
}

/// Collects what a command prints or writes.
#[derive(Debug, Default)]
pub struct Report {
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
}

impl Report {
    fn line(&mut self, s: impl AsRef<str>) {
        self.stdout.push_str(s.as_ref());
        self.stdout.push('\n');
    }

    fn emit(&mut self, output: &Output, text: String) {
        match &output.out {
            Some(p) => self.files.push((p.clone(), text)),
            None => self.stdout.push_str(&text),
        }
    }

    /// Writes `<prefix><suffix>` for each part, or prints them in order.
    fn emit_many(&mut self, output: &Output, parts: Vec<(&str, String)>) {
        for (suffix, text) in parts {
            match &output.out {
                Some(p) => {
                    let mut name = p.as_os_str().to_owned();
                    name.push(suffix);
                    self.files.push((PathBuf::from(name), text));
                }
                None => self.stdout.push_str(&text),
            }
        }
    }
}

fn bundle_for(which: &BuildKind) -> Result<GadgetBundle, CliError> {
    Ok(match which {
        BuildKind::Gk { k } => build_separator(*k),
        BuildKind::EndEater { i } => build_end_eater(*i).ok_or_else(|| CliError::Usage(format!("no end-eater E{i}")))?,
        BuildKind::Gv => build_gv(),
    })
}

fn parse_assignment(s: &str, f: &Formula) -> Result<Option<Assignment>, CliError> {
    if s == "auto" {
        return Ok(match sat_solve(f) {
            SatResult::Sat(a) => Some(a),
            SatResult::Unsat => None,
        });
    }
    let mut a = Assignment::new();
    for pair in s.split(',').filter(|p| !p.is_empty()) {
        let (v, b) = pair.split_once('=').ok_or_else(|| CliError::Usage(format!("`{pair}` is not var=0|1")))?;
        let b = match b {
            "1" | "true" => true,
            "0" | "false" => false,
            _ => return Err(CliError::Usage(format!("`{b}` is not a truth value"))),
        };
        a.insert(v.to_string(), b);
    }
    Ok(Some(a))
}

fn reduction_parts(out: &ReductionOutput) -> Vec<(&'static str, String)> {
    let map = serde_json::to_string_pretty(&out.vertex_map).expect("string map");
    vec![
        (".graph", write_graph(&out.out_graph)),
        (".rep.json", write_representation(&out.out_rep)),
        (".map.json", map + "\n"),
    ]
}

fn rep_error(e: RepError) -> CliError {
    domain(e)
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let budget = SearchBudget::default();
    let mut r = Report::default();
    match &cli.command {
        Command::Build { which, output } => {
            let b = bundle_for(which)?;
            let svg = render_representation(&b.rep, &RenderOptions::default());
            if output.out.is_some() {
                r.emit_many(output, vec![(".graph", write_graph(&b.graph)), (".rep.json", write_representation(&b.rep)), (".svg", svg)]);
            } else {
                r.stdout = write_representation(&b.rep);
            }
        }
        Command::Verify { semantics, rep } => {
            let mut rep = load(rep, read_representation)?;
            rep.semantics = match semantics {
                SemanticsArg::Cpg => Semantics::Cpg,
                SemanticsArg::Epg => Semantics::Epg,
            };
            let report = validate(&rep);
            for v in &report.violations {
                r.line(format!("{v:?}"));
            }
            if !report.is_valid() {
                return Err(CliError::Domain(format!("{}{} violation(s)", r.stdout, report.violations.len())));
            }
            r.line(format!("valid: {} paths, max bends {}", rep.paths.len(), rep.max_bends()));
        }
        Command::Derive { rep, output } => {
            let g = derive_graph(&load(rep, read_representation)?).map_err(rep_error)?;
            r.emit(output, write_graph(&g));
        }
        Command::Stats { rep } => {
            let rep = load(rep, read_representation)?;
            let g = derive_graph(&rep).map_err(rep_error)?;
            let report = contact_report(&rep).map_err(rep_error)?;
            r.line(format!("vertices {} edges {} max_bends {}", g.vertex_count(), g.edge_count(), rep.max_bends()));
            r.line(format!("free_endpoints {}", report.free_count()));
            let mut classes: BTreeMap<String, usize> = BTreeMap::new();
            for c in &report.contact_points {
                *classes.entry(format!("{:?}", c.class)).or_default() += 1;
            }
            for (c, n) in classes {
                r.line(format!("contacts {c} {n}"));
            }
            match report.doubled_weight_sum() {
                Some(w) => r.line(format!("weight_sum {}{}", w / 2, if w % 2 == 1 { ".5" } else { "" })),
                None => r.line("weight_sum absent"),
            }
            if rep.semantics == Semantics::Cpg {
                match triangle_bound_check(&rep) {
                    Ok(t) => r.line(format!("triangle_packing {} bound {} holds {}", t.max_packing, t.bound, t.holds)),
                    Err(RepError::FourContactPresent(p)) => r.line(format!("triangle_bound skipped: 4-contact at {p}")),
                    Err(e) => return Err(rep_error(e)),
                }
            }
        }
        Command::Normalize { graph, rep, output } => {
            let g = load(graph, read_graph)?;
            let norm = normalize_b01(&g, &load(rep, read_representation)?).map_err(rep_error)?;
            let nf = normal_form_report(&norm).map_err(rep_error)?;
            if !nf.all() {
                return Err(domain(format!("normal form not reached: {nf:?}")));
            }
            r.emit(output, write_representation(&norm));
        }
        Command::Refine { rep, times, output } => {
            r.emit(output, write_representation(&refine(&load(rep, read_representation)?, *times)));
        }
        Command::Reduce { which } => match which {
            ReduceKind::Sat { formula, i, assignment, embedding, output } => {
                let f = load(formula, read_dimacs)?;
                let arts = build_reduction_graph(&f, *i).map_err(domain)?;
                let a = parse_assignment(assignment, &f)?.ok_or_else(|| domain("formula is unsatisfiable"))?;
                let rep = match embedding {
                    Some(p) => build_reduction_rep(&arts, &a, &load(p, read_embedding)?).map_err(domain)?,
                    None => layout_reduction(&arts, &a, &budget, 8).map_err(domain)?.0,
                };
                let index = serde_json::to_string_pretty(&arts).expect("artifacts serialise") + "\n";
                r.emit_many(
                    output,
                    vec![(".graph", write_graph(&arts.graph)), (".rep.json", write_representation(&rep)), (".index.json", index)],
                );
            }
            ReduceKind::Is { graph, rep, output } => {
                let out = reduce_is(&load(graph, read_graph)?, &load(rep, read_representation)?).map_err(domain)?;
                r.emit_many(output, reduction_parts(&out));
            }
            ReduceKind::Cc { graph, rep, output } => {
                let out = reduce_cc(&load(graph, read_graph)?, &load(rep, read_representation)?).map_err(domain)?;
                r.emit_many(output, reduction_parts(&out));
            }
            ReduceKind::ThreeCol { graph, embedding, output } => {
                let out = reduce_3col(&load(graph, read_graph)?, &load(embedding, read_embedding)?).map_err(domain)?;
                r.emit_many(output, reduction_parts(&out));
            }
        },
        Command::ExtractAssignment { formula, rep, i } => {
            let f = load(formula, read_dimacs)?;
            let arts = build_reduction_graph(&f, *i).map_err(domain)?;
            let a = extract_assignment(&load(rep, read_representation)?, &arts).map_err(domain)?;
            let text: Vec<String> = a.iter().map(|(v, b)| format!("{v}={}", u8::from(*b))).collect();
            r.line(text.join(","));
            if !f.satisfied_by(&a) {
                return Err(CliError::Domain(format!("{}assignment does not satisfy the formula", r.stdout)));
            }
        }
        Command::Embed { graph, grid, output } => {
            let emb = embed_orthogonal(&load(graph, read_graph)?, *grid, &budget).map_err(domain)?;
            r.emit(output, write_embedding(&emb));
        }
        Command::Solve { which } => solve(which, &budget, &mut r)?,
        Command::SearchRep { graph, k, grid, output } => match search_cpg_rep(&load(graph, read_graph)?, *k, *grid, &budget) {
            SearchOutcome::Found(rep) => r.emit(output, write_representation(&rep)),
            SearchOutcome::NotFoundInBox => return Err(domain("no representation in the box")),
            SearchOutcome::BudgetExceeded => return Err(domain("search budget exceeded")),
        },
        Command::Render { input, unit, no_labels, no_endpoints, roles, output } => {
            if *unit < 4 {
                return Err(CliError::Usage("--unit must be at least 4".into()));
            }
            let opts = RenderOptions {
                unit_px: *unit,
                show_labels: !no_labels,
                color_roles: roles.iter().cloned().collect(),
                mark_endpoints: !no_endpoints,
            };
            let text = read_text(input)?;
            let svg = match read_representation(&text) {
                Ok(rep) => render_representation(&rep, &opts),
                Err(rep_err) => match read_embedding(&text) {
                    Ok(emb) => render_embedding(&emb, &opts),
                    Err(_) => return Err(CliError::Input { path: input.clone(), source: rep_err }),
                },
            };
            r.emit(output, svg);
        }
    }
    Ok(r)
}

fn solve(which: &SolveKind, budget: &SearchBudget, r: &mut Report) -> Result<(), CliError> {
    let set = |s: &std::collections::BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(" ");
    match which {
        SolveKind::Mis { graph } => {
            let (n, s) = max_independent_set(&load(graph, read_graph)?, budget).map_err(domain)?;
            r.line(format!("{n}\n{}", set(&s)));
        }
        SolveKind::Vc { graph } => {
            let (n, s) = min_vertex_cover(&load(graph, read_graph)?, budget).map_err(domain)?;
            r.line(format!("{n}\n{}", set(&s)));
        }
        SolveKind::Cc { graph } => {
            let (n, cover) = min_clique_cover(&load(graph, read_graph)?, budget).map_err(domain)?;
            r.line(n.to_string());
            for c in &cover {
                r.line(set(c));
            }
        }
        SolveKind::Kcol { k, graph } => match is_k_colorable(&load(graph, read_graph)?, *k, budget).map_err(domain)? {
            Some(c) => {
                let text: Vec<String> = c.iter().map(|(v, i)| format!("{v}={i}")).collect();
                r.line(text.join(" "));
            }
            None => return Err(domain(format!("not {k}-colourable"))),
        },
        SolveKind::Sat { formula } => match sat_solve(&load(formula, read_dimacs)?) {
            SatResult::Sat(a) => {
                let text: Vec<String> = a.iter().map(|(v, b)| format!("{v}={}", u8::from(*b))).collect();
                r.line(format!("SAT\n{}", text.join(",")));
            }
            SatResult::Unsat => return Err(domain("UNSAT")),
        },
        SolveKind::Tripack { graph } => {
            r.line(max_edge_disjoint_triangles(&load(graph, read_graph)?, budget).map_err(domain)?.to_string());
        }
    }
    Ok(())
}

/// Parses arguments, runs the command and writes its output; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            print!("{}", report.stdout);
            for (path, text) in &report.files {
                if let Err(e) = fs::write(path, text) {
                    eprintln!("{}: {e}", path.display());
                    return EXIT_USAGE;
                }
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
