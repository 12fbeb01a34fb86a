//! `wreathcat`: noncrossing partitions, partition maps, fusion rings and free
//! wreath product fusion rules from the command line.
//!
//! Results are JSON documents on stdout. Failures print a JSON error on stderr
//! and exit with 2 (bad input), 3 (violated hypothesis), 4 (oracle divergence)
//! or 5 (tolerance breach). A result computed outside the hypotheses of the
//! theory is still printed, with exit code 3.

mod cache;
mod error;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use wreathcat_core::fdalg::{
    analyze_graph, delta_identity_deviation, from_classical_graph, satisfies_inverse_trace_bound, AlgebraFile,
    BlockFile, QuantumGraph,
};
use wreathcat_core::fusionring::validate_ring;
use wreathcat_core::ncpart::{compose, count_nc, enumerate_nc, DEFAULT_POINT_LIMIT};
use wreathcat_core::pmap::{
    gram_matrix, gram_rank, verify_calculus_with, CompositionTable, FormMode, LawReport, TpBuilder, VerifyOptions,
};
use wreathcat_core::wreath::{
    decompose_basic_tensor, free_product_decomposition, kac_check, moments, reassembly_holds, ring_is_kac,
    verify_semiring_iso, word_dims, wreath_hom_dim, wreath_tensor, HomMethod, LabelMap, Word,
};
use wreathcat_core::{AlgebraSpec, FusionRing, NcPartition};

use cache::RingCache;
use error::CliError;

/// Largest dense `T_p` that `tp build` will print.
const DENSE_ENTRY_LIMIT: usize = 1 << 22;

#[derive(Parser)]
#[command(name = "wreathcat", version, about = "Noncrossing-partition calculus and free wreath product fusion rules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Tolerance for numerical identities.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print matrices as tab-separated values instead of JSON.
    #[arg(long, global = true)]
    tsv: bool,
    /// Directory for persisted fusion-ring tables.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Noncrossing partitions, written `K/L:[[blocks]]`.
    #[command(subcommand)]
    Nc(NcCommand),
    /// Finite-dimensional algebras with a faithful state.
    #[command(subcommand)]
    Alg(AlgCommand),
    /// Quantum graphs.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// The partition maps `T_p`.
    #[command(subcommand)]
    Tp(TpCommand),
    /// Fusion rings.
    #[command(subcommand)]
    Ring(RingCommand),
    /// Fusion rules of the free wreath product.
    #[command(subcommand)]
    Wreath(WreathCommand),
    /// Moment `h(χ^k)` of the basic character, the Catalan number `C_k`.
    Moments {
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum NcCommand {
    Enum {
        #[arg(long)]
        upper: usize,
        #[arg(long)]
        lower: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// `q ∘ p`: the lower row of `p` glued to the upper row of `q`.
    Compose {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    Tensor {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    Adjoint {
        #[arg(long)]
        p: String,
    },
}

#[derive(Subcommand)]
enum AlgCommand {
    /// Writes an algebra file from `--block SIZE:Q1,...` entries or a preset.
    Make {
        #[arg(long = "block")]
        blocks: Vec<String>,
        #[arg(long, conflicts_with_all = ["blocks", "matrix"])]
        uniform: Option<usize>,
        #[arg(long, conflicts_with = "blocks")]
        matrix: Option<usize>,
        #[arg(long)]
        normalize: bool,
    },
    /// Reports δ-form, trace and weight properties and checks `m_k m_k^* = δ^{k-1}`.
    Verify {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 5)]
        k_max: usize,
    },
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Triviality test and spectral projections of `d`.
    Analyze {
        /// Algebra file carrying `d`.
        #[arg(long, required_unless_present = "adjacency")]
        algebra: Option<String>,
        /// Classical adjacency matrix, rows separated by `;`.
        #[arg(long, conflicts_with = "algebra")]
        adjacency: Option<String>,
    },
}

#[derive(Subcommand)]
enum TpCommand {
    Build {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        p: String,
        #[arg(long, default_value = "delta")]
        mode: FormMode,
    },
    /// Checks the composition, tensor and adjoint laws on all partitions with
    /// at most `k_max` glued points.
    Verify {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 6)]
        k_max: usize,
        #[arg(long, default_value = "delta")]
        mode: FormMode,
    },
    /// Numeric rank of the Gram matrix of `{T_p : p ∈ NC(k, l)}`.
    Gram {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        upper: usize,
        #[arg(long)]
        lower: usize,
    },
}

#[derive(Subcommand)]
enum RingCommand {
    Validate {
        #[arg(long)]
        ring: String,
        /// Label triples to spend.
        #[arg(long, default_value_t = 500)]
        budget: usize,
    },
    Tensor {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// `dim Hom(w1, w2)` for comma-separated label words.
    Homdim {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value = "")]
        w1: String,
        #[arg(long, default_value = "")]
        w2: String,
    },
}

#[derive(Subcommand)]
enum WreathCommand {
    /// `r_x ⊗ r_y` for comma-separated words.
    Tensor {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value = "")]
        x: String,
        #[arg(long, default_value = "")]
        y: String,
    },
    /// `a(α_1) ⊗ … ⊗ a(α_k)` as a sum of irreducibles.
    DecomposeBasic {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value = "")]
        labels: String,
    },
    Homdim {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value = "")]
        upper: String,
        #[arg(long, default_value = "")]
        lower: String,
        #[arg(long, default_value = "both")]
        method: HomMethod,
    },
    Dims {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value = "")]
        word: String,
    },
    Moments {
        #[arg(long)]
        k: usize,
    },
    /// Splits a state into δ-forms on groups of blocks.
    Split {
        #[arg(long)]
        algebra: String,
    },
    Kac {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        algebra: String,
    },
    /// Checks that a label map transports to the wreath fusion semirings.
    IsoCheck {
        #[arg(long)]
        ring: String,
        /// Target ring; defaults to `--ring`.
        #[arg(long)]
        ring2: Option<String>,
        /// `identity` or `from:to` pairs, e.g. `g:g2,g2:g`.
        #[arg(long, default_value = "identity")]
        map: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

/// What a command prints.
enum Body {
    Json(Value),
    Text(String),
}

struct Output {
    body: Body,
    /// Printed document that nonetheless ends with this error's exit code.
    status: Option<CliError>,
}

impl Output {
    fn json(v: Value) -> Self {
        Self { body: Body::Json(v), status: None }
    }

    fn text(s: String) -> Self {
        Self { body: Body::Text(s), status: None }
    }

    fn flag_warnings(mut self, warnings: &[String]) -> Self {
        if !warnings.is_empty() {
            self.status = Some(CliError::Hypothesis(warnings.join("; ")));
        }
        self
    }

    fn fail_unless(mut self, ok: bool, err: impl FnOnce() -> CliError) -> Self {
        if !ok {
            self.status = Some(err());
        }
        self
    }
}

struct Ctx {
    tol: f64,
    seed: u64,
    tsv: bool,
    cache: Option<PathBuf>,
}

/// A ring together with its cache file, stored back when dropped.
struct LoadedRing {
    ring: FusionRing,
    cache: Option<RingCache>,
}

impl Drop for LoadedRing {
    fn drop(&mut self) {
        if let Some(c) = &self.cache {
            if let Err(e) = c.store(&self.ring) {
                eprintln!("warning: could not write ring cache: {e}");
            }
        }
    }
}

impl std::ops::Deref for LoadedRing {
    type Target = FusionRing;
    fn deref(&self) -> &FusionRing {
        &self.ring
    }
}

impl Ctx {
    fn ring(&self, arg: &str) -> Result<LoadedRing, CliError> {
        let (ring, definition) = if Path::new(arg).is_file() {
            let text = fs::read_to_string(arg)?;
            (FusionRing::from_json(&text)?, format!("file:{text}"))
        } else {
            (FusionRing::builtin(arg)?, format!("builtin:{}", arg.trim()))
        };
        let cache = self.cache.as_deref().map(|dir| RingCache::new(dir, &definition));
        if let Some(c) = &cache {
            c.load(&ring);
        }
        Ok(LoadedRing { ring, cache })
    }
}

fn read_algebra_file(arg: &str) -> Result<AlgebraFile, CliError> {
    if Path::new(arg).is_file() {
        return Ok(AlgebraFile::from_json(&fs::read_to_string(arg)?)?);
    }
    let preset = |name: &str| {
        arg.trim()
            .strip_prefix(name)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|n| n.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
    };
    let spec = if let Some(n) = preset("uniform") {
        AlgebraSpec::uniform_commutative(n)
    } else if let Some(n) = preset("matrix") {
        AlgebraSpec::normalized_matrix(n)
    } else {
        return Err(CliError::Parse(format!("{arg:?} is neither a file nor uniform(N) / matrix(N)")));
    };
    Ok(AlgebraFile::from_spec(&spec))
}

fn algebra(arg: &str) -> Result<AlgebraSpec, CliError> {
    Ok(read_algebra_file(arg)?.to_spec()?)
}

/// `K/L:[[blocks]]`.
fn parse_partition(s: &str) -> Result<NcPartition, CliError> {
    let bad = || CliError::Parse(format!("partition {s:?} is not of the form K/L:[[blocks]]"));
    let (shape, blocks) = s.split_once(':').ok_or_else(bad)?;
    let (k, l) = shape.split_once('/').ok_or_else(bad)?;
    let k = k.trim().parse().map_err(|_| bad())?;
    let l = l.trim().parse().map_err(|_| bad())?;
    Ok(NcPartition::parse(k, l, blocks)?)
}

fn format_partition(p: &NcPartition) -> String {
    format!("{}/{}:{p}", p.upper_count(), p.lower_count())
}

fn words(ring: &FusionRing, s: &str) -> Result<Word, CliError> {
    Ok(Word::parse(ring, s)?)
}

fn rational_json(x: &wreathcat_core::Rational) -> Value {
    Value::String(x.to_string())
}

fn algebra_json(a: &AlgebraSpec) -> Value {
    serde_json::to_value(AlgebraFile::from_spec(a)).expect("algebra files serialize")
}

fn law_json(r: &LawReport) -> Value {
    json!({
        "checked": r.checked,
        "max_deviation": r.max_deviation,
        "tolerance": r.tolerance,
        "worst": r.worst,
        "passed": r.passed(),
    })
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let ctx = Ctx { tol: cli.tol, seed: cli.seed, tsv: cli.tsv, cache: cli.cache };
    match cli.command {
        Command::Nc(c) => run_nc(&ctx, c),
        Command::Alg(c) => run_alg(&ctx, c),
        Command::Graph(c) => run_graph(&ctx, c),
        Command::Tp(c) => run_tp(&ctx, c),
        Command::Ring(c) => run_ring(&ctx, c),
        Command::Wreath(c) => run_wreath(&ctx, c),
        Command::Moments { k } => moments_doc(k),
    }
}

fn moments_doc(k: usize) -> Result<Output, CliError> {
    Ok(Output::json(json!({"k": k, "moment": moments(k)?})))
}

fn run_nc(ctx: &Ctx, c: NcCommand) -> Result<Output, CliError> {
    Ok(match c {
        NcCommand::Enum { upper, lower, count_only } => {
            if count_only {
                return Ok(Output::json(json!({"count": count_nc(upper, lower, DEFAULT_POINT_LIMIT)?})));
            }
            let parts = enumerate_nc(upper, lower)?;
            let names: Vec<String> = parts.iter().map(format_partition).collect();
            if ctx.tsv {
                Output::text(names.iter().map(|n| format!("{n}\n")).collect())
            } else {
                Output::json(json!({"count": names.len(), "partitions": names}))
            }
        }
        NcCommand::Compose { p, q } => {
            let (p, q) = (parse_partition(&p)?, parse_partition(&q)?);
            let r = compose(&q, &p)?;
            Output::json(json!({
                "result": format_partition(&r.result),
                "central_blocks": r.central_blocks,
                "cycles": r.cycles,
            }))
        }
        NcCommand::Tensor { p, q } => {
            let (p, q) = (parse_partition(&p)?, parse_partition(&q)?);
            Output::json(json!({"result": format_partition(&p.tensor(&q))}))
        }
        NcCommand::Adjoint { p } => Output::json(json!({"result": format_partition(&parse_partition(&p)?.adjoint())})),
    })
}

fn parse_block(s: &str) -> Result<BlockFile, CliError> {
    let bad = || CliError::Parse(format!("block {s:?} is not of the form SIZE:Q1,Q2,..."));
    let (size, q) = s.split_once(':').ok_or_else(bad)?;
    let size: usize = size.trim().parse().map_err(|_| bad())?;
    let mut q: Vec<String> = q.split(',').map(|x| x.trim().to_string()).collect();
    // A single weight is repeated along the diagonal.
    if q.len() == 1 && size > 1 {
        q = vec![q[0].clone(); size];
    }
    Ok(BlockFile { size, q })
}

fn run_alg(ctx: &Ctx, c: AlgCommand) -> Result<Output, CliError> {
    match c {
        AlgCommand::Make { blocks, uniform, matrix, normalize } => {
            let spec = match (uniform, matrix) {
                (Some(n), _) => AlgebraSpec::uniform_commutative(n),
                (_, Some(n)) => AlgebraSpec::normalized_matrix(n),
                _ => {
                    let blocks = blocks.iter().map(|b| parse_block(b)).collect::<Result<Vec<_>, _>>()?;
                    AlgebraFile { blocks, normalize, d: None }.to_spec()?
                }
            };
            Ok(Output::json(algebra_json(&spec)))
        }
        AlgCommand::Verify { algebra: arg, k_max } => {
            let a = algebra(&arg)?;
            let blocks: Vec<Value> = a
                .blocks()
                .iter()
                .map(|b| {
                    json!({
                        "size": b.size,
                        "trace_q": rational_json(&b.trace_q()),
                        "trace_q_inv": rational_json(&b.trace_q_inv()),
                    })
                })
                .collect();
            let mut doc = json!({
                "dim": a.dim(),
                "state": a.is_state(),
                "delta_form": a.is_delta_form(),
                "delta": a.delta().map(rational_json),
                "tracial": a.is_tracial(),
                "inverse_trace_bound": satisfies_inverse_trace_bound(&a),
                "blocks": blocks,
                "warnings": a.small_dimension_warning().into_iter().collect::<Vec<_>>(),
            });
            let mut worst = 0.0f64;
            if a.is_delta_form() {
                let devs = delta_identity_deviation::<f64>(&a, k_max)?;
                worst = devs.iter().fold(0.0, |m, d| m.max(d.1));
                doc["delta_identity"] =
                    devs.iter().map(|(k, d)| json!({"k": k, "deviation": d})).collect::<Vec<_>>().into();
            }
            let tol = ctx.tol;
            Ok(Output::json(doc).fail_unless(worst <= tol, || {
                CliError::Tolerance(format!("m_k m_k^* deviates from δ^(k-1) id by {worst:e} > {tol:e}"))
            }))
        }
    }
}

fn parse_adjacency(s: &str) -> Result<Vec<Vec<u8>>, CliError> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<u8>().map_err(|_| CliError::Parse(format!("bad adjacency entry {x:?}"))))
                .collect()
        })
        .collect()
}

fn run_graph(ctx: &Ctx, c: GraphCommand) -> Result<Output, CliError> {
    let GraphCommand::Analyze { algebra, adjacency } = c;
    let g: QuantumGraph = match (algebra, adjacency) {
        (_, Some(adj)) => from_classical_graph(&parse_adjacency(&adj)?)?,
        (Some(arg), None) => read_algebra_file(&arg)?
            .to_graph()?
            .ok_or_else(|| CliError::Parse("algebra file has no \"d\" matrix".into()))?,
        (None, None) => return Err(CliError::Parse("need --algebra or --adjacency".into())),
    };
    let r = analyze_graph(&g, ctx.tol)?;
    let projections: Vec<Value> = r
        .spectral_projections
        .iter()
        .map(|p| {
            let rank: f64 = (0..p.projection.nrows()).map(|i| p.projection[(i, i)].re).sum();
            json!({"eigenvalue": [p.eigenvalue.re, p.eigenvalue.im], "rank": rank.round() as u64})
        })
        .collect();
    let defect = if r.projection_defect.is_finite() { json!(r.projection_defect) } else { Value::Null };
    Ok(Output::json(json!({
        "trivial": r.trivial,
        "trivial_residual": r.trivial_residual,
        "normal": r.normal,
        "normal_defect": g.normal_defect(),
        "spectral_projections": projections,
        "projection_defect": defect,
    })))
}

fn run_tp(ctx: &Ctx, c: TpCommand) -> Result<Output, CliError> {
    match c {
        TpCommand::Build { algebra: arg, p, mode } => {
            let a = algebra(&arg)?;
            let p = parse_partition(&p)?;
            let entries = u32::try_from(p.point_count())
                .ok()
                .and_then(|e| a.dim().checked_pow(e))
                .filter(|&n| n <= DENSE_ENTRY_LIMIT)
                .ok_or_else(|| {
                    CliError::Parse(format!("T_p has dim(B)^{} entries, above {DENSE_ENTRY_LIMIT}", p.point_count()))
                })?;
            let builder = match mode {
                FormMode::DeltaForm => TpBuilder::<f64>::new(&a),
                FormMode::OneForm => TpBuilder::<f64>::for_mode(&a, mode)?,
            };
            let op = builder.dense(&p);
            debug_assert_eq!(op.rows() * op.cols(), entries);
            if ctx.tsv {
                return Ok(Output::text(op.to_tsv()));
            }
            Ok(Output::json(json!({
                "partition": format_partition(&p),
                "mode": mode.name(),
                "rows": op.rows(),
                "cols": op.cols(),
                "data": op.data(),
            })))
        }
        TpCommand::Verify { algebra: arg, k_max, mode } => {
            let a = algebra(&arg)?;
            let table = CompositionTable::new(k_max)?;
            let opts = VerifyOptions { k_max, tol: ctx.tol, exact_tol: 1e-12 };
            let r = verify_calculus_with::<f64>(&a, mode, &opts, &table)?;
            let doc = json!({
                "mode": r.mode.name(),
                "k_max": r.k_max,
                "coefficient_base": r.coefficient_base,
                "composition": law_json(&r.composition),
                "tensor": law_json(&r.tensor),
                "adjoint": law_json(&r.adjoint),
                "passed": r.passed(),
            });
            Ok(Output::json(doc).fail_unless(r.passed(), || {
                CliError::Tolerance("a partition-calculus law missed its tolerance".into())
            }))
        }
        TpCommand::Gram { algebra: arg, upper, lower } => {
            let a = algebra(&arg)?;
            if ctx.tsv {
                let g = gram_matrix::<f64>(&a, upper, lower)?;
                let n = (g.len() as f64).sqrt().round() as usize;
                let text = g
                    .chunks(n.max(1))
                    .map(|row| row.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join("\t") + "\n")
                    .collect();
                return Ok(Output::text(text));
            }
            let r = gram_rank(&a, upper, lower)?;
            let warnings: Vec<String> = r.warning.iter().cloned().collect();
            Ok(Output::json(json!({
                "upper": r.upper,
                "lower": r.lower,
                "rank": r.rank,
                "partitions": r.partitions,
                "full_rank": r.is_full(),
                "eigenvalues": r.eigenvalues,
                "warnings": warnings,
            }))
            .flag_warnings(&warnings))
        }
    }
}

fn run_ring(ctx: &Ctx, c: RingCommand) -> Result<Output, CliError> {
    match c {
        RingCommand::Validate { ring, budget } => {
            let ring = ctx.ring(&ring)?;
            let r = validate_ring(&ring, budget);
            Ok(Output::json(json!({
                "ring": ring.name(),
                "passed": r.passed(),
                "labels_checked": r.labels_checked,
                "pairs_checked": r.pairs_checked,
                "triples_checked": r.triples_checked,
                "violations": r.violations,
            }))
            .fail_unless(r.passed(), || CliError::Tolerance("fusion ring data is inconsistent".into())))
        }
        RingCommand::Tensor { ring, a, b } => {
            let ring = ctx.ring(&ring)?;
            let (a, b) = (ring.parse_label(&a)?, ring.parse_label(&b)?);
            let map: serde_json::Map<String, Value> =
                ring.tensor(a, b)?.iter().map(|&(c, m)| (ring.format_label(c), json!(m))).collect();
            Ok(Output::json(Value::Object(map)))
        }
        RingCommand::Homdim { ring, w1, w2 } => {
            let ring = ctx.ring(&ring)?;
            let (w1, w2) = (words(&ring, &w1)?, words(&ring, &w2)?);
            Ok(Output::json(json!({"dim": ring.hom_dim(w1.letters(), w2.letters())?})))
        }
    }
}

fn run_wreath(ctx: &Ctx, c: WreathCommand) -> Result<Output, CliError> {
    match c {
        WreathCommand::Tensor { ring, x, y } => {
            let ring = ctx.ring(&ring)?;
            let (x, y) = (words(&ring, &x)?, words(&ring, &y)?);
            Ok(Output::json(wreath_tensor(&ring, &x, &y)?.to_json(&ring)))
        }
        WreathCommand::DecomposeBasic { ring, labels } => {
            let ring = ctx.ring(&ring)?;
            let w = words(&ring, &labels)?;
            Ok(Output::json(decompose_basic_tensor(&ring, w.letters())?.to_json(&ring)))
        }
        WreathCommand::Homdim { ring, algebra: arg, upper, lower, method } => {
            let ring = ctx.ring(&ring)?;
            let a = algebra(&arg)?;
            let (up, low) = (words(&ring, &upper)?, words(&ring, &lower)?);
            let r = wreath_hom_dim(&ring, &a, up.letters(), low.letters(), method)?;
            Ok(Output::json(json!({
                "dim": r.value,
                "partitions": r.partitions,
                "fusion": r.fusion,
                "well_decorated": r.well_decorated,
                "warnings": r.warnings,
            }))
            .flag_warnings(&r.warnings))
        }
        WreathCommand::Dims { ring, algebra: arg, word } => {
            let ring = ctx.ring(&ring)?;
            let a = algebra(&arg)?;
            let w = words(&ring, &word)?;
            let d = word_dims(&ring, &a, &w)?;
            Ok(Output::json(json!({
                "word": w.format(&ring),
                "dim": d.dim,
                "qdim": d.qdim,
                "warnings": d.warnings,
            }))
            .flag_warnings(&d.warnings))
        }
        WreathCommand::Moments { k } => moments_doc(k),
        WreathCommand::Split { algebra: arg } => {
            let a = algebra(&arg)?;
            let comps = free_product_decomposition(&a)?;
            let list: Vec<Value> = comps
                .iter()
                .map(|c| {
                    json!({
                        "blocks": c.blocks,
                        "delta": rational_json(&c.delta),
                        "weight": rational_json(&c.weight),
                        "form_delta": rational_json(&c.form_delta),
                        "algebra": algebra_json(&c.algebra),
                    })
                })
                .collect();
            let ok = reassembly_holds(&a, &comps);
            Ok(Output::json(json!({"components": list, "reassembly": ok}))
                .fail_unless(ok, || CliError::Tolerance("components do not reassemble ψ".into())))
        }
        WreathCommand::Kac { ring, algebra: arg } => {
            let ring = ctx.ring(&ring)?;
            let a = algebra(&arg)?;
            Ok(Output::json(json!({
                "kac": kac_check(&ring, &a),
                "tracial": a.is_tracial(),
                "ring_kac": ring_is_kac(&ring),
            })))
        }
        WreathCommand::IsoCheck { ring, ring2, map, samples } => {
            let r1 = ctx.ring(&ring)?;
            let r2 = match &ring2 {
                Some(name) => Some(ctx.ring(name)?),
                None => None,
            };
            let target: &FusionRing = r2.as_deref().unwrap_or(&r1);
            let phi = LabelMap::parse(&r1, target, &map)?;
            let r = verify_semiring_iso(&r1, target, &phi, samples, ctx.seed)?;
            let failures: Vec<Value> =
                r.failures.iter().map(|(x, y, what)| json!({"x": x, "y": y, "law": what})).collect();
            let mut out = Output::json(json!({
                "passed": r.passed(),
                "pairs_checked": r.pairs_checked,
                "precondition_failures": r.precondition_failures,
                "failures": failures,
            }));
            if !r.precondition_failures.is_empty() {
                out.status = Some(CliError::Hypothesis(format!(
                    "φ is not a fusion-ring isomorphism: {}",
                    r.precondition_failures.join("; ")
                )));
            } else if !r.failures.is_empty() {
                out.status = Some(CliError::Divergence("transported products differ".into()));
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli);
    let (output, status) = match result {
        Ok(o) => (Some(o.body), o.status),
        Err(e) => (None, Some(e)),
    };
    match output {
        Some(Body::Json(v)) => println!("{v}"),
        Some(Body::Text(s)) => print!("{s}"),
        None => {}
    }
    match status {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
