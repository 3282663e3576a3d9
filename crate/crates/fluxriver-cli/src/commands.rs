//! Subcommand wiring: validate, river, pixels, decide, synth.

use crate::config::{self, RunConfig};
use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use fluxriver::aggregate::{aggregate_votes, decide_all, WeightTable};
use fluxriver::ingest;
use fluxriver::layout::{layout_dualflux, layout_stacked, layout_themeriver, RiverGeometry, Smoothing};
use fluxriver::pixelmap::{build_panel, SortScheme, DEFAULT_METHOD_ORDER};
use fluxriver::render::{
    compose_figure, render_legend, render_pixels, render_river, Canvas, Margins, PixelParts,
    Placement, SvgDoc,
};
use fluxriver::synth::{self, SynthSpec};
use fluxriver::types::{AccuracyBasis, Power, WeightKind, WeightingScheme};
use fluxriver::Bundle;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Subcommand)]
pub enum Command {
    /// Parse inputs and report dimensions; exit 0 iff all invariants hold.
    Validate(ValidateArgs),
    /// Render a river design (stacked, themeriver, or dualflux) to SVG.
    River(RiverArgs),
    /// Render per-model pixel maps, optionally with weight grids and rivers.
    Pixels(PixelsArgs),
    /// Print the per-step ensemble decision as CSV.
    Decide(DecideArgs),
    /// Generate a synthetic bundle and write it in the ingest formats.
    Synth(SynthArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Prediction log CSV (model_id,time_step,mood).
    #[arg(long)]
    predictions: Option<PathBuf>,
    /// Model metadata CSV with cm_<true>_<pred> confusion columns.
    #[arg(long)]
    models: Option<PathBuf>,
    /// JSON bundle carrying moods, models, and predictions together.
    #[arg(long)]
    bundle: Option<PathBuf>,
    /// JSON config supplying defaults for any flag.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DesignArg {
    Stacked,
    Themeriver,
    Dualflux,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeightingArg {
    None,
    Alpha,
    Alpha2,
    Alpha3,
    Acc,
    Acc2,
    F1,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    Precision,
    Recall,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SmoothingArg {
    Blocky,
    Smooth,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SortArg {
    Accuracy,
    MethodInterval,
    IntervalAccuracy,
}

#[derive(Args)]
pub struct RiverArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Visual design to lay out.
    #[arg(long, value_enum)]
    design: Option<DesignArg>,
    /// Vote weighting scheme.
    #[arg(long, value_enum)]
    weighting: Option<WeightingArg>,
    /// Class-accuracy reading of the confusion matrix.
    #[arg(long, value_enum)]
    basis: Option<BasisArg>,
    /// Rescale every step so its votes sum to 1.
    #[arg(long)]
    normalize: bool,
    /// Dual-flux drawing mode.
    #[arg(long, value_enum)]
    smoothing: Option<SmoothingArg>,
    /// Canvas width in pixels.
    #[arg(long)]
    width: Option<f64>,
    /// Canvas height in pixels.
    #[arg(long)]
    height: Option<f64>,
    /// Append a mood legend below the river.
    #[arg(long)]
    legend: bool,
    /// Output SVG path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct PixelsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Row sorting scheme.
    #[arg(long, value_enum)]
    sort: Option<SortArg>,
    /// Add a class-accuracy weight panel for this power (repeatable, 1-3).
    #[arg(long)]
    weights: Vec<u32>,
    /// Draw the matching dual-flux river above each panel.
    #[arg(long)]
    with_river: bool,
    /// Weighting for the river above the prediction grid.
    #[arg(long, value_enum)]
    weighting: Option<WeightingArg>,
    /// Class-accuracy reading of the confusion matrix.
    #[arg(long, value_enum)]
    basis: Option<BasisArg>,
    /// Rescale every step so its votes sum to 1.
    #[arg(long)]
    normalize: bool,
    /// Dual-flux drawing mode for companion rivers.
    #[arg(long, value_enum)]
    smoothing: Option<SmoothingArg>,
    /// Pixel cell width.
    #[arg(long)]
    cell_w: Option<f64>,
    /// Pixel cell height.
    #[arg(long)]
    cell_h: Option<f64>,
    /// Append a legend below the panels.
    #[arg(long)]
    legend: bool,
    /// Output SVG path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct DecideArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum)]
    weighting: Option<WeightingArg>,
    #[arg(long, value_enum)]
    basis: Option<BasisArg>,
    #[arg(long)]
    normalize: bool,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SynthArgs {
    /// Named fixture recipe.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of models.
    #[arg(long)]
    m: Option<usize>,
    /// Number of unit sections.
    #[arg(long)]
    n: Option<usize>,
    /// Number of moods.
    #[arg(long)]
    k: Option<usize>,
    /// Deviation probability scale in [0, 1].
    #[arg(long)]
    noise: Option<f64>,
    /// Comma-separated 1-based steps where the dominant mood switches.
    #[arg(long)]
    change_points: Option<String>,
    /// Accuracy range as lo,hi.
    #[arg(long)]
    spread: Option<String>,
    /// Directory receiving predictions.csv, models.csv, bundle.json,
    /// synthspec.json.
    #[arg(long)]
    out_dir: PathBuf,
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Validate(args) => cmd_validate(args),
        Command::River(args) => cmd_river(args),
        Command::Pixels(args) => cmd_pixels(args),
        Command::Decide(args) => cmd_decide(args),
        Command::Synth(args) => cmd_synth(args),
    }
}

fn load_bundle(input: &InputArgs, cfg: &RunConfig) -> Result<Bundle> {
    let bundle_path = input.bundle.clone().or_else(|| cfg.bundle.clone());
    let mut bundle = if let Some(path) = bundle_path {
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading bundle {}", path.display()))?;
        ingest::parse_bundle_json(&text)?
    } else {
        let pred_path = input
            .predictions
            .clone()
            .or_else(|| cfg.predictions.clone())
            .context("no input: pass --predictions with --models, or --bundle")?;
        let models_path = input
            .models
            .clone()
            .or_else(|| cfg.models.clone())
            .context("no model metadata: pass --models")?;
        let preds = std::fs::read_to_string(&pred_path)
            .with_context(|| format!("reading predictions {}", pred_path.display()))?;
        let models = std::fs::read_to_string(&models_path)
            .with_context(|| format!("reading models {}", models_path.display()))?;
        ingest::parse_bundle_csv(&preds, &models)?
    };
    if let Some(palette) = &cfg.palette {
        for (label, color) in palette {
            bundle.mood_set.set_color(label, color);
        }
    }
    Ok(bundle)
}

fn parse_enum<T: ValueEnum>(name: &str, text: &str) -> Result<T> {
    T::from_str(text, false).map_err(|_| anyhow::anyhow!("config {name} value {text:?} is invalid"))
}

fn pick_enum<T: ValueEnum + Copy>(
    flag: Option<T>,
    cfg: Option<&String>,
    name: &str,
    default: T,
) -> Result<T> {
    match (flag, cfg) {
        (Some(v), _) => Ok(v),
        (None, Some(text)) => parse_enum(name, text),
        (None, None) => Ok(default),
    }
}

fn scheme_from(
    weighting: WeightingArg,
    basis: BasisArg,
    normalized: bool,
) -> WeightingScheme {
    let kind = match weighting {
        WeightingArg::None => WeightKind::Unweighted,
        WeightingArg::Alpha => WeightKind::ClassAccuracyPower(Power::One),
        WeightingArg::Alpha2 => WeightKind::ClassAccuracyPower(Power::Two),
        WeightingArg::Alpha3 => WeightKind::ClassAccuracyPower(Power::Three),
        WeightingArg::Acc => WeightKind::OverallAccuracy,
        WeightingArg::Acc2 => WeightKind::OverallAccuracySquared,
        WeightingArg::F1 => WeightKind::MacroF1,
    };
    let basis = match basis {
        BasisArg::Precision => AccuracyBasis::PredictedClassPrecision,
        BasisArg::Recall => AccuracyBasis::TrueClassRecall,
    };
    WeightingScheme { kind, normalized, basis }
}

fn out_path(flag: Option<PathBuf>, cfg: &RunConfig) -> Result<PathBuf> {
    flag.or_else(|| cfg.out.clone()).context("no output path: pass --out")
}

fn cmd_validate(args: ValidateArgs) -> Result<()> {
    let cfg = config::load(args.input.config.as_deref())?;
    let bundle = load_bundle(&args.input, &cfg)?;
    let pm = &bundle.predictions;
    println!(
        "{} models, {} steps, {} moods",
        pm.n_models(),
        pm.n_steps(),
        bundle.k()
    );
    let labels: Vec<&str> = bundle.mood_set.moods().iter().map(|m| m.label.as_str()).collect();
    println!("moods: {}", labels.join(", "));
    // completeness makes the unweighted total m at every step; say so
    let vs = aggregate_votes(pm, &bundle.meta, bundle.k(), &WeightingScheme::unweighted())?;
    let min = vs.totals().iter().cloned().fold(f64::INFINITY, f64::min);
    let max = vs.totals().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        println!("per-step unweighted totals: {min} (uniform)");
    } else {
        println!("per-step unweighted totals: min {min}, max {max}");
    }
    println!("ok");
    Ok(())
}

fn geometry_for(
    design: DesignArg,
    smoothing: SmoothingArg,
    vs: &fluxriver::VoteSeries,
) -> RiverGeometry {
    match design {
        DesignArg::Stacked => layout_stacked(vs),
        DesignArg::Themeriver => layout_themeriver(vs),
        DesignArg::Dualflux => layout_dualflux(
            vs,
            match smoothing {
                SmoothingArg::Blocky => Smoothing::Blocky,
                SmoothingArg::Smooth => Smoothing::Smooth,
            },
        ),
    }
}

const MARGIN: f64 = 8.0;

fn river_canvas(geometry: &RiverGeometry, width: f64, height: f64) -> Result<Canvas> {
    Ok(Canvas::fit(
        geometry.x_domain,
        geometry.y_range(),
        width,
        height,
        Margins::uniform(MARGIN),
        3,
    )?)
}

fn cmd_river(args: RiverArgs) -> Result<()> {
    let cfg = config::load(args.input.config.as_deref())?;
    let bundle = load_bundle(&args.input, &cfg)?;
    let design = pick_enum(args.design, cfg.design.as_ref(), "design", DesignArg::Dualflux)?;
    let weighting = pick_enum(args.weighting, cfg.weighting.as_ref(), "weighting", WeightingArg::None)?;
    let basis = pick_enum(args.basis, cfg.basis.as_ref(), "basis", BasisArg::Precision)?;
    let smoothing = pick_enum(args.smoothing, cfg.smoothing.as_ref(), "smoothing", SmoothingArg::Smooth)?;
    let normalized = args.normalize || cfg.normalize.unwrap_or(false);
    let scheme = scheme_from(weighting, basis, normalized);
    let width = args.width.or(cfg.width).unwrap_or(900.0);
    let height = args.height.or(cfg.height).unwrap_or(300.0);

    let vs = aggregate_votes(&bundle.predictions, &bundle.meta, bundle.k(), &scheme)?;
    let geometry = geometry_for(design, smoothing, &vs);
    let canvas = river_canvas(&geometry, width, height)?;
    let river = render_river(&geometry, &canvas, &bundle.mood_set)?;
    let doc = if args.legend {
        let legend = render_legend(&bundle.mood_set, &[]);
        let below = Placement { dx: MARGIN, dy: river.height, align_group: None };
        compose_figure(&[
            (river, Placement { dx: 0.0, dy: 0.0, align_group: None }),
            (legend, below),
        ])?
    } else {
        river
    };
    let out = out_path(args.out, &cfg)?;
    write_text(&out, &doc.to_svg_string())
}

fn cmd_pixels(args: PixelsArgs) -> Result<()> {
    let cfg = config::load(args.input.config.as_deref())?;
    let bundle = load_bundle(&args.input, &cfg)?;
    let sort = pick_enum(args.sort, cfg.sort.as_ref(), "sort", SortArg::Accuracy)?;
    let weighting = pick_enum(args.weighting, cfg.weighting.as_ref(), "weighting", WeightingArg::None)?;
    let basis = pick_enum(args.basis, cfg.basis.as_ref(), "basis", BasisArg::Precision)?;
    let smoothing = pick_enum(args.smoothing, cfg.smoothing.as_ref(), "smoothing", SmoothingArg::Smooth)?;
    let normalized = args.normalize || cfg.normalize.unwrap_or(false);
    let with_river = args.with_river || cfg.with_river.unwrap_or(false);
    let cell_w = args.cell_w.or(cfg.cell_w).unwrap_or(12.0);
    let cell_h = args.cell_h.or(cfg.cell_h).unwrap_or(3.0);
    let river_height = cfg.river_height.unwrap_or(160.0);
    let weight_flags = if args.weights.is_empty() {
        cfg.weights.clone().unwrap_or_default()
    } else {
        args.weights.clone()
    };
    let mut powers = Vec::with_capacity(weight_flags.len());
    for p in &weight_flags {
        powers.push(Power::from_exponent(*p).with_context(|| format!("--weights {p}: power must be 1, 2, or 3"))?);
    }

    let scheme = scheme_from(weighting, basis, normalized);
    let sort_scheme = match sort {
        SortArg::Accuracy => SortScheme::AccuracyDesc,
        SortArg::MethodInterval => SortScheme::MethodThenInterval,
        SortArg::IntervalAccuracy => SortScheme::IntervalThenAccuracy,
    };
    let accuracy_basis = match basis {
        BasisArg::Precision => AccuracyBasis::PredictedClassPrecision,
        BasisArg::Recall => AccuracyBasis::TrueClassRecall,
    };
    let method_order_strings = cfg
        .method_order
        .clone()
        .unwrap_or_else(|| DEFAULT_METHOD_ORDER.iter().map(|s| s.to_string()).collect());
    let method_order: Vec<&str> = method_order_strings.iter().map(|s| s.as_str()).collect();

    let pm = &bundle.predictions;
    let (m, n) = (pm.n_models(), pm.n_steps());
    let grid_w = n as f64 * cell_w;
    let grid_h = m as f64 * cell_h;
    let panel_w = grid_w + 2.0 * MARGIN;
    let panel_h = grid_h + 2.0 * MARGIN;
    let x_domain = (0.5, n as f64 + 0.5);
    let panel_canvas = Canvas::fit(x_domain, (0.0, 1.0), panel_w, panel_h, Margins::uniform(MARGIN), 3)?;
    let gap = 6.0;
    let bar_w = 10.0;

    let smoothing_mode = match smoothing {
        SmoothingArg::Blocky => Smoothing::Blocky,
        SmoothingArg::Smooth => Smoothing::Smooth,
    };
    let river_for = |scheme: &WeightingScheme| -> Result<SvgDoc> {
        let vs = aggregate_votes(pm, &bundle.meta, bundle.k(), scheme)?;
        let geometry = layout_dualflux(&vs, smoothing_mode);
        let canvas = Canvas::fit(
            x_domain,
            geometry.y_range(),
            panel_w,
            river_height,
            Margins::uniform(MARGIN),
            3,
        )?;
        Ok(render_river(&geometry, &canvas, &bundle.mood_set)?)
    };

    let mut parts: Vec<(SvgDoc, Placement)> = Vec::new();
    let row_y = if with_river { river_height + gap } else { 0.0 };
    let mut cursor = 0.0f64;
    let mut group = 1u32;

    // prediction panel, with its river above when requested
    let pred_panel = build_panel(pm, &bundle.meta, sort_scheme, None, Power::One, &method_order)?;
    let pred_doc = render_pixels(
        &pred_panel,
        &panel_canvas,
        &bundle.mood_set,
        &PixelParts { predictions: true, weights: false, side_bar: powers.is_empty(), gap, bar_width: bar_w },
    )?;
    if with_river {
        parts.push((
            river_for(&scheme)?,
            Placement { dx: cursor, dy: 0.0, align_group: Some(group) },
        ));
    }
    let pred_width = pred_doc.width;
    parts.push((pred_doc, Placement { dx: cursor, dy: row_y, align_group: Some(group) }));
    cursor += pred_width + gap;
    group += 1;

    // one weight panel per requested power: accuracy bar, then the map
    for power in &powers {
        let table = WeightTable::new(&bundle.meta, accuracy_basis, *power);
        let panel = build_panel(pm, &bundle.meta, sort_scheme, Some(&table), *power, &method_order)?;
        let bar_doc = render_pixels(
            &panel,
            &panel_canvas,
            &bundle.mood_set,
            &PixelParts { predictions: false, weights: false, side_bar: true, gap, bar_width: bar_w },
        )?;
        // the bar doc carries the canvas margins on both sides; place the map
        // so its grid starts one margin after the bar
        let bar_span = MARGIN + bar_w + gap;
        let map_doc = render_pixels(
            &panel,
            &panel_canvas,
            &bundle.mood_set,
            &PixelParts { predictions: false, weights: true, side_bar: false, gap, bar_width: bar_w },
        )?;
        let map_dx = cursor + bar_span;
        if with_river {
            let river_scheme = WeightingScheme {
                kind: WeightKind::ClassAccuracyPower(*power),
                normalized,
                basis: accuracy_basis,
            };
            parts.push((
                river_for(&river_scheme)?,
                Placement { dx: map_dx, dy: 0.0, align_group: Some(group) },
            ));
        }
        parts.push((bar_doc, Placement { dx: cursor, dy: row_y, align_group: None }));
        let map_width = map_doc.width;
        parts.push((map_doc, Placement { dx: map_dx, dy: row_y, align_group: Some(group) }));
        cursor = map_dx + map_width + gap;
        group += 1;
    }

    if args.legend {
        let ramps: Vec<&str> = if powers.is_empty() { vec![] } else { vec!["class-accuracy"] };
        let legend = render_legend(&bundle.mood_set, &ramps);
        parts.push((legend, Placement { dx: MARGIN, dy: row_y + panel_h + gap, align_group: None }));
    }

    let doc = compose_figure(&parts)?;
    let out = out_path(args.out, &cfg)?;
    write_text(&out, &doc.to_svg_string())
}

fn cmd_decide(args: DecideArgs) -> Result<()> {
    let cfg = config::load(args.input.config.as_deref())?;
    let bundle = load_bundle(&args.input, &cfg)?;
    let weighting = pick_enum(args.weighting, cfg.weighting.as_ref(), "weighting", WeightingArg::None)?;
    let basis = pick_enum(args.basis, cfg.basis.as_ref(), "basis", BasisArg::Precision)?;
    let normalized = args.normalize || cfg.normalize.unwrap_or(false);
    let scheme = scheme_from(weighting, basis, normalized);
    let vs = aggregate_votes(&bundle.predictions, &bundle.meta, bundle.k(), &scheme)?;
    let decisions = decide_all(vs.per_mood());
    let mut out = String::from("time_step,mood\n");
    for (t, mood) in decisions.iter().enumerate() {
        let _ = writeln!(out, "{},{}", t + 1, bundle.mood_set.label(*mood));
    }
    match args.out.or_else(|| cfg.out.clone()) {
        Some(path) => write_text(&path, &out),
        None => {
            print!("{out}");
            Ok(())
        }
    }
}

fn cmd_synth(args: SynthArgs) -> Result<()> {
    let mut spec = match args.preset.as_deref() {
        Some("appassionata-like") => SynthSpec::appassionata_like(),
        Some(other) => bail!("unknown preset {other:?} (available: appassionata-like)"),
        None => SynthSpec {
            seed: 0,
            m: 20,
            n: 30,
            k: 4,
            mood_change_points: vec![],
            segment_moods: None,
            noise: 0.3,
            accuracy_spread: (0.4, 0.8),
        },
    };
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    if let Some(m) = args.m {
        spec.m = m;
    }
    if let Some(n) = args.n {
        spec.n = n;
    }
    if let Some(k) = args.k {
        spec.k = k;
    }
    if let Some(noise) = args.noise {
        spec.noise = noise;
    }
    if let Some(points) = &args.change_points {
        spec.mood_change_points = points
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| s.trim().parse::<usize>().context("bad --change-points entry"))
            .collect::<Result<Vec<_>>>()?;
    }
    if let Some(spread) = &args.spread {
        let (lo, hi) = spread
            .split_once(',')
            .context("--spread needs lo,hi")?;
        spec.accuracy_spread = (
            lo.trim().parse().context("bad --spread low bound")?,
            hi.trim().parse().context("bad --spread high bound")?,
        );
    }

    let bundle = synth::generate(&spec)?;
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let csvs = ingest::serialize_bundle(&bundle);
    write_text(&args.out_dir.join("predictions.csv"), &csvs.predictions)?;
    write_text(&args.out_dir.join("models.csv"), &csvs.models)?;
    write_text(
        &args.out_dir.join("bundle.json"),
        &ingest::serialize_bundle_json(&bundle),
    )?;
    let mut spec_json = serde_json::to_string_pretty(&spec)?;
    spec_json.push('\n');
    write_text(&args.out_dir.join("synthspec.json"), &spec_json)?;
    println!(
        "wrote predictions.csv, models.csv, bundle.json, synthspec.json to {}",
        args.out_dir.display()
    );
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
