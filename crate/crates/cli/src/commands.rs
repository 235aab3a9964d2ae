//! Implementations behind the CLI commands.

use crate::manifest::{manifest_path, RunManifest};
use crate::{CliError, CliResult};
use csc_core::io;
use csc_core::pipeline::{
    block_error_scatter, denoise_csc_at, denoise_omp, lambda_grid_search,
    patch_dictionary_from_filters, DenoiseConfig, GridSpec, MixedAlgorithm, OmpConfig,
    WeightingMode,
};
use csc_core::report::{
    block_error_csv, metrics_csv, psnr_table_csv, scatter_svg, MetricsRow, ScatterSeries,
};
use csc_core::signal::{
    add_gaussian_noise, psnr, tikhonov_lowpass, Dictionary, Image, NoiseConfig,
};
use csc_core::solvers::PenaltyKind;
use csc_core::weighting::ActivitySource;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::time::Instant;

// --- shared plumbing ------------------------------------------------------

pub fn data_err(e: impl std::fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}

fn write_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Data(format!("writing {}: {e}", path.display()))
}

/// Load an image, sniffing CIMG1 vs PGM by magic bytes.
pub fn read_image_any(path: &Path) -> CliResult<Image> {
    let mut magic = [0u8; 2];
    {
        use std::io::Read;
        let mut f = std::fs::File::open(path)
            .map_err(|e| CliError::Data(format!("opening {}: {e}", path.display())))?;
        let _ = f.read(&mut magic).map_err(|e| data_err(e))?;
    }
    if &magic == b"P5" {
        io::read_pgm(path).map_err(data_err)
    } else {
        io::read_image(path).map_err(data_err)
    }
}

/// Write an image, choosing the format from the output extension
/// (.pgm quantizes, anything else is lossless CIMG1).
pub fn write_image_any(path: &Path, img: &Image) -> CliResult<()> {
    let by_ext = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("pgm"))
        .unwrap_or(false);
    if by_ext {
        io::write_pgm(path, img).map_err(data_err)
    } else {
        io::write_image(path, img).map_err(data_err)
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Worker cap from CSC_THREADS; defaults to 1 so runs are predictable.
pub fn thread_cap() -> usize {
    std::env::var("CSC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(1)
}

// --- addnoise -------------------------------------------------------------

pub struct AddNoiseArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    pub preview: Option<PathBuf>,
    pub sigma: f64,
    pub seed: u64,
}

pub fn cmd_addnoise(a: &AddNoiseArgs, argv: &[String]) -> CliResult<()> {
    let start = Instant::now();
    let clean = read_image_any(&a.input)?;
    let noisy = add_gaussian_noise(
        &clean,
        &NoiseConfig {
            sigma: a.sigma,
            seed: a.seed,
        },
    )
    .map_err(CliError::from)?;
    write_image_any(&a.output, &noisy)?;
    let preview = a
        .preview
        .clone()
        .unwrap_or_else(|| a.output.with_extension("pgm"));
    io::write_pgm(&preview, &noisy).map_err(data_err)?;
    let p = psnr(&clean, &noisy).map_err(data_err)?;
    println!("psnr_db {p}");

    let mut m = RunManifest::new(
        "addnoise",
        argv,
        json!({ "sigma": a.sigma, "seed": a.seed }),
    );
    m.inputs = vec![a.input.display().to_string()];
    m.outputs = vec![
        a.output.display().to_string(),
        preview.display().to_string(),
    ];
    m.seed = Some(a.seed);
    m.wall_time_s = start.elapsed().as_secs_f64();
    let mp = manifest_path(&a.output);
    m.write(&mp).map_err(write_err(&mp))?;
    Ok(())
}

// --- denoise --------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    L1,
    L1inf,
    L12,
    Omp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum WeightingArg {
    None,
    Group,
    Inner,
    GroupInner,
    L1corr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ActivityArg {
    Analysis,
    ImageEnergy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum AlgorithmArg {
    Nested,
    Nonneg,
}

pub struct DenoiseArgs {
    pub input: PathBuf,
    pub dict: PathBuf,
    pub output: PathBuf,
    pub method: MethodArg,
    pub lambda: Option<f64>,
    pub grid: bool,
    pub grid_count: usize,
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub reference: Option<PathBuf>,
    pub sigma: f64,
    pub weighting: WeightingArg,
    pub activity: ActivityArg,
    pub algorithm: AlgorithmArg,
    pub lowpass_lambda: f64,
    pub max_iter: Option<usize>,
    pub rho: Option<f64>,
    pub alpha0: Option<f64>,
    pub alpha1: Option<f64>,
    pub metrics: Option<PathBuf>,
}

fn weighting_mode(w: WeightingArg) -> WeightingMode {
    match w {
        WeightingArg::None => WeightingMode::Plain,
        WeightingArg::Group => WeightingMode::Group,
        WeightingArg::Inner => WeightingMode::Inner,
        WeightingArg::GroupInner => WeightingMode::GroupInner,
        WeightingArg::L1corr => WeightingMode::L1Corr,
    }
}

fn denoise_config(a: &DenoiseArgs, kind: PenaltyKind) -> DenoiseConfig {
    let mut cfg = DenoiseConfig::new(kind, a.lambda.unwrap_or(0.0));
    cfg.lowpass_lambda = a.lowpass_lambda;
    cfg.weighting = weighting_mode(a.weighting);
    cfg.activity_source = match a.activity {
        ActivityArg::Analysis => ActivitySource::Analysis,
        ActivityArg::ImageEnergy => ActivitySource::ImageEnergy,
    };
    cfg.algorithm = match a.algorithm {
        AlgorithmArg::Nested => MixedAlgorithm::Nested,
        AlgorithmArg::Nonneg => MixedAlgorithm::Nonneg,
    };
    if a.max_iter.is_some() || a.rho.is_some() || a.alpha0.is_some() || a.alpha1.is_some() {
        let mut admm =
            csc_core::solvers::AdmmConfig::defaults_for(kind, a.lambda.unwrap_or(0.1));
        if let Some(n) = a.max_iter {
            admm.max_iter = n;
        }
        if let Some(v) = a.rho {
            admm.rho = v;
        }
        if let Some(v) = a.alpha0 {
            admm.alpha0 = v;
            admm.alpha1 = 1.0 / v;
        }
        if let Some(v) = a.alpha1 {
            admm.alpha1 = v;
        }
        cfg.admm = Some(admm);
    }
    cfg
}

pub fn cmd_denoise(a: &DenoiseArgs, argv: &[String]) -> CliResult<()> {
    let start = Instant::now();
    let noisy = read_image_any(&a.input)?;
    let dict = io::read_dictionary(&a.dict).map_err(data_err)?;
    let dict = if dict.is_normalized() {
        dict
    } else {
        dict.normalize().map_err(data_err)?
    };
    let reference = a.reference.as_ref().map(|p| read_image_any(p)).transpose()?;

    let (label, denoised, lambda, rho, alpha0, alpha1, iterations) = match a.method {
        MethodArg::Omp => {
            let pd = patch_dictionary_from_filters(&dict);
            let cfg = OmpConfig {
                lowpass_lambda: a.lowpass_lambda,
                ..OmpConfig::default()
            };
            let out = denoise_omp(
                &noisy,
                &pd,
                (dict.filter_h(), dict.filter_w()),
                a.sigma,
                &cfg,
            )
            .map_err(CliError::from)?;
            ("omp".to_string(), out, f64::NAN, f64::NAN, f64::NAN, f64::NAN, 0)
        }
        m => {
            let kind = match m {
                MethodArg::L1 => PenaltyKind::L1,
                MethodArg::L1inf => PenaltyKind::L1Inf,
                MethodArg::L12 => PenaltyKind::L12,
                MethodArg::Omp => unreachable!(),
            };
            let cfg = denoise_config(a, kind);
            let (lambda, img, iterations, functional) = if a.grid {
                let reference = reference.as_ref().ok_or_else(|| {
                    CliError::Usage("--grid requires --reference for PSNR scoring".into())
                })?;
                let grid = GridSpec {
                    count: a.grid_count,
                    lo: a.grid_lo,
                    hi: a.grid_hi,
                }
                .lambdas(a.sigma)
                .map_err(CliError::from)?;
                let (best_l, _p, img, table) =
                    lambda_grid_search(&noisy, reference, &dict, &cfg, &grid)
                        .map_err(CliError::solver)?;
                let iters = table
                    .iter()
                    .find(|t| t.lambda == best_l)
                    .map(|t| t.iterations)
                    .unwrap_or(0);
                for t in &table {
                    println!("grid lambda {} psnr_db {}", t.lambda, t.psnr);
                }
                (best_l, img, iters, f64::NAN)
            } else {
                let lambda = a.lambda.ok_or_else(|| {
                    CliError::Usage("either --lambda or --grid is required".into())
                })?;
                let (img, res) =
                    denoise_csc_at(&noisy, &dict, &cfg, lambda).map_err(CliError::solver)?;
                let f = res.functional.last().copied().unwrap_or(f64::NAN);
                (lambda, img, res.iterations, f)
            };
            let admm = csc_core::solvers::AdmmConfig::defaults_for(kind, lambda);
            let admm = cfg.admm.unwrap_or(admm);
            if functional.is_finite() {
                println!("functional {functional}");
            }
            let label = match kind {
                PenaltyKind::L1 => "l1",
                PenaltyKind::L1Inf => "l1inf",
                PenaltyKind::L12 => "l12",
            };
            (
                label.to_string(),
                img,
                lambda,
                admm.rho,
                admm.alpha0,
                admm.alpha1,
                iterations,
            )
        }
    };

    write_image_any(&a.output, &denoised)?;
    let measured = match &reference {
        Some(r) => psnr(r, &denoised).map_err(data_err)?,
        None => f64::NAN,
    };
    if measured.is_finite() {
        println!("psnr_db {measured}");
    }
    println!("lambda {lambda}");

    let metrics = a
        .metrics
        .clone()
        .unwrap_or_else(|| a.output.with_extension("metrics.csv"));
    let row = MetricsRow {
        method: label.clone(),
        image: stem(&a.input),
        lambda,
        rho,
        alpha0,
        alpha1,
        iterations,
        psnr: measured,
        wall_time: start.elapsed().as_secs_f64(),
    };
    std::fs::write(&metrics, metrics_csv(&[row])).map_err(write_err(&metrics))?;

    let mut m = RunManifest::new(
        "denoise",
        argv,
        json!({
            "method": label,
            "lambda": lambda,
            "sigma": a.sigma,
            "weighting": format!("{:?}", a.weighting),
            "algorithm": format!("{:?}", a.algorithm),
            "lowpass_lambda": a.lowpass_lambda,
            "grid": a.grid,
        }),
    );
    m.inputs = vec![a.input.display().to_string(), a.dict.display().to_string()];
    m.outputs = vec![
        a.output.display().to_string(),
        metrics.display().to_string(),
    ];
    m.wall_time_s = start.elapsed().as_secs_f64();
    let mp = manifest_path(&a.output);
    m.write(&mp).map_err(write_err(&mp))?;
    Ok(())
}

// --- benchmark ------------------------------------------------------------

pub struct BenchmarkArgs {
    pub images: Vec<PathBuf>,
    pub dict: PathBuf,
    pub methods: Vec<String>,
    pub out_dir: PathBuf,
    pub sigma: f64,
    pub seed: u64,
    pub grid_count: usize,
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub block: (usize, usize),
    pub lowpass_lambda: f64,
}

/// One benchmark method token: penalty plus its standard weighting.
struct MethodSpec {
    label: String,
    kind: Option<PenaltyKind>, // None = OMP
    weighting: WeightingMode,
}

fn parse_method(token: &str) -> CliResult<MethodSpec> {
    let (kind, weighting) = match token {
        "l1" => (Some(PenaltyKind::L1), WeightingMode::Plain),
        "l1w" => (Some(PenaltyKind::L1), WeightingMode::L1Corr),
        "l1inf" => (Some(PenaltyKind::L1Inf), WeightingMode::Plain),
        "l1infw" => (Some(PenaltyKind::L1Inf), WeightingMode::Group),
        "l12" => (Some(PenaltyKind::L12), WeightingMode::Plain),
        "l12w" => (Some(PenaltyKind::L12), WeightingMode::Group),
        "omp" => (None, WeightingMode::Plain),
        other => {
            return Err(CliError::Usage(format!(
                "unknown method {other:?}; expected one of \
                 l1, l1w, l1inf, l1infw, l12, l12w, omp"
            )))
        }
    };
    Ok(MethodSpec {
        label: token.to_string(),
        kind,
        weighting,
    })
}

struct ImageOutcome {
    name: String,
    psnrs: Vec<f64>,
    block_csvs: Vec<(String, String)>, // (method label, csv body)
    scatter: String,
    noisy: Image,
    denoised: Vec<Image>,
}

fn benchmark_one_image(
    idx: usize,
    path: &Path,
    dict: &Dictionary,
    methods: &[MethodSpec],
    a: &BenchmarkArgs,
) -> CliResult<ImageOutcome> {
    let clean = read_image_any(path)?;
    let noisy = add_gaussian_noise(
        &clean,
        &NoiseConfig {
            sigma: a.sigma,
            seed: a.seed.wrapping_add(idx as u64),
        },
    )
    .map_err(CliError::from)?;
    let grid = GridSpec {
        count: a.grid_count,
        lo: a.grid_lo,
        hi: a.grid_hi,
    }
    .lambdas(a.sigma)
    .map_err(CliError::from)?;
    let (_, clean_hp) = tikhonov_lowpass(&clean, a.lowpass_lambda).map_err(data_err)?;

    let mut psnrs = Vec::new();
    let mut block_csvs = Vec::new();
    let mut series = Vec::new();
    let mut denoised_all = Vec::new();
    {
        let (_, noisy_hp) = tikhonov_lowpass(&noisy, a.lowpass_lambda).map_err(data_err)?;
        let recs = block_error_scatter("noisy", &clean_hp, &noisy_hp, a.block)
            .map_err(CliError::from)?;
        series.push(ScatterSeries {
            label: "noisy".into(),
            points: recs.iter().map(|r| (r.ref_norm, r.error)).collect(),
        });
    }
    for spec in methods {
        let denoised = match spec.kind {
            None => {
                let pd = patch_dictionary_from_filters(dict);
                let cfg = OmpConfig {
                    lowpass_lambda: a.lowpass_lambda,
                    ..OmpConfig::default()
                };
                denoise_omp(
                    &noisy,
                    &pd,
                    (dict.filter_h(), dict.filter_w()),
                    a.sigma,
                    &cfg,
                )
                .map_err(CliError::solver)?
            }
            Some(kind) => {
                let mut cfg = DenoiseConfig::new(kind, 0.0);
                cfg.lowpass_lambda = a.lowpass_lambda;
                cfg.weighting = spec.weighting;
                let (_l, _p, img, _t) = lambda_grid_search(&noisy, &clean, dict, &cfg, &grid)
                    .map_err(CliError::solver)?;
                img
            }
        };
        psnrs.push(psnr(&clean, &denoised).map_err(data_err)?);
        let (_, test_hp) = tikhonov_lowpass(&denoised, a.lowpass_lambda).map_err(data_err)?;
        let recs = block_error_scatter(&spec.label, &clean_hp, &test_hp, a.block)
            .map_err(CliError::from)?;
        series.push(ScatterSeries {
            label: spec.label.clone(),
            points: recs.iter().map(|r| (r.ref_norm, r.error)).collect(),
        });
        block_csvs.push((spec.label.clone(), block_error_csv(&recs)));
        denoised_all.push(denoised);
    }
    let name = stem(path);
    let scatter = scatter_svg(
        &format!("block errors: {name}"),
        "reference block norm",
        "block error",
        &series,
    );
    Ok(ImageOutcome {
        name,
        psnrs,
        block_csvs,
        scatter,
        noisy,
        denoised: denoised_all,
    })
}

pub fn cmd_benchmark(a: &BenchmarkArgs, argv: &[String]) -> CliResult<()> {
    let start = Instant::now();
    if a.images.is_empty() || a.methods.is_empty() {
        return Err(CliError::Usage(
            "benchmark needs at least one image and one method".into(),
        ));
    }
    let methods: Vec<MethodSpec> = a
        .methods
        .iter()
        .map(|m| parse_method(m))
        .collect::<CliResult<_>>()?;
    let dict = io::read_dictionary(&a.dict).map_err(data_err)?;
    let dict = if dict.is_normalized() {
        dict
    } else {
        dict.normalize().map_err(data_err)?
    };
    std::fs::create_dir_all(&a.out_dir)
        .map_err(|e| CliError::Data(format!("creating {}: {e}", a.out_dir.display())))?;

    let workers = thread_cap().min(a.images.len());
    let mut outcomes: Vec<Option<CliResult<ImageOutcome>>> = Vec::new();
    outcomes.resize_with(a.images.len(), || None);
    if workers <= 1 {
        for (i, path) in a.images.iter().enumerate() {
            outcomes[i] = Some(benchmark_one_image(i, path, &dict, &methods, a));
        }
    } else {
        // round-robin static partition keeps assembly order deterministic
        let slots: Vec<_> = outcomes.iter_mut().enumerate().collect();
        std::thread::scope(|scope| {
            let mut pending = slots;
            let mut shards: Vec<Vec<(usize, &mut Option<CliResult<ImageOutcome>>)>> =
                (0..workers).map(|_| Vec::new()).collect();
            let mut k = 0;
            while let Some(slot) = pending.pop() {
                shards[k % workers].push(slot);
                k += 1;
            }
            for shard in shards {
                let dict = &dict;
                let methods = &methods;
                let images = &a.images;
                scope.spawn(move || {
                    for (i, out) in shard {
                        *out = Some(benchmark_one_image(i, &images[i], dict, methods, a));
                    }
                });
            }
        });
    }

    let mut image_names = Vec::new();
    let mut cells: Vec<Vec<f64>> = vec![Vec::new(); methods.len()];
    let mut outputs = Vec::new();
    for (i, slot) in outcomes.into_iter().enumerate() {
        let o = slot.expect("every image processed")?;
        image_names.push(o.name.clone());
        for (j, &p) in o.psnrs.iter().enumerate() {
            cells[j].push(p);
        }
        let noisy_path = a.out_dir.join(format!("{}_noisy.cimg", o.name));
        io::write_image(&noisy_path, &o.noisy).map_err(data_err)?;
        outputs.push(noisy_path.display().to_string());
        for (spec, img) in methods.iter().zip(&o.denoised) {
            let p = a.out_dir.join(format!("{}_{}.cimg", o.name, spec.label));
            io::write_image(&p, img).map_err(data_err)?;
            outputs.push(p.display().to_string());
        }
        for (label, csv) in &o.block_csvs {
            let p = a.out_dir.join(format!("blockerr_{}_{}.csv", o.name, label));
            std::fs::write(&p, csv).map_err(write_err(&p))?;
            outputs.push(p.display().to_string());
        }
        let p = a.out_dir.join(format!("scatter_{}.svg", o.name));
        std::fs::write(&p, &o.scatter).map_err(write_err(&p))?;
        outputs.push(p.display().to_string());
        let _ = i;
    }

    let labels: Vec<String> = methods.iter().map(|m| m.label.clone()).collect();
    let table = psnr_table_csv(&labels, &image_names, &cells);
    let table_path = a.out_dir.join("table.csv");
    std::fs::write(&table_path, &table).map_err(write_err(&table_path))?;
    outputs.push(table_path.display().to_string());
    print!("{table}");

    let mut m = RunManifest::new(
        "benchmark",
        argv,
        json!({
            "methods": labels,
            "sigma": a.sigma,
            "seed": a.seed,
            "grid_count": a.grid_count,
            "grid_lo": a.grid_lo,
            "grid_hi": a.grid_hi,
            "block": [a.block.0, a.block.1],
            "lowpass_lambda": a.lowpass_lambda,
        }),
    );
    m.inputs = a.images.iter().map(|p| p.display().to_string()).collect();
    m.inputs.push(a.dict.display().to_string());
    m.outputs = outputs;
    m.seed = Some(a.seed);
    m.wall_time_s = start.elapsed().as_secs_f64();
    let mp = a.out_dir.join("benchmark.manifest.json");
    m.write(&mp).map_err(write_err(&mp))?;
    Ok(())
}

// --- blockerr -------------------------------------------------------------

pub struct BlockErrArgs {
    pub reference: PathBuf,
    pub test: PathBuf,
    pub output: PathBuf,
    pub svg: Option<PathBuf>,
    pub block: (usize, usize),
    pub method: String,
    pub lowpass_lambda: f64,
}

pub fn cmd_blockerr(a: &BlockErrArgs, argv: &[String]) -> CliResult<()> {
    let start = Instant::now();
    let reference = read_image_any(&a.reference)?;
    let test = read_image_any(&a.test)?;
    let (_, ref_hp) = tikhonov_lowpass(&reference, a.lowpass_lambda).map_err(data_err)?;
    let (_, test_hp) = tikhonov_lowpass(&test, a.lowpass_lambda).map_err(data_err)?;
    let recs =
        block_error_scatter(&a.method, &ref_hp, &test_hp, a.block).map_err(CliError::from)?;
    std::fs::write(&a.output, block_error_csv(&recs)).map_err(write_err(&a.output))?;
    let mut outputs = vec![a.output.display().to_string()];
    if let Some(svg_path) = &a.svg {
        let series = [ScatterSeries {
            label: a.method.clone(),
            points: recs.iter().map(|r| (r.ref_norm, r.error)).collect(),
        }];
        std::fs::write(
            svg_path,
            scatter_svg("block errors", "reference block norm", "block error", &series),
        )
        .map_err(write_err(svg_path))?;
        outputs.push(svg_path.display().to_string());
    }

    let mut m = RunManifest::new(
        "blockerr",
        argv,
        json!({
            "block": [a.block.0, a.block.1],
            "method": a.method,
            "lowpass_lambda": a.lowpass_lambda,
        }),
    );
    m.inputs = vec![
        a.reference.display().to_string(),
        a.test.display().to_string(),
    ];
    m.outputs = outputs;
    m.wall_time_s = start.elapsed().as_secs_f64();
    let mp = manifest_path(&a.output);
    m.write(&mp).map_err(write_err(&mp))?;
    Ok(())
}

// --- dictinfo, psnr, convert ---------------------------------------------

pub fn cmd_dictinfo(path: &Path) -> CliResult<()> {
    let d = io::read_dictionary(path).map_err(data_err)?;
    println!("filters {}", d.num_filters());
    println!("filter_h {}", d.filter_h());
    println!("filter_w {}", d.filter_w());
    println!("normalized {}", d.is_normalized());
    for m in 0..d.num_filters() {
        let norm = d
            .filter(m)
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt();
        println!("filter {m} l2_norm {norm}");
    }
    Ok(())
}

pub fn cmd_psnr(reference: &Path, test: &Path) -> CliResult<()> {
    let r = read_image_any(reference)?;
    let t = read_image_any(test)?;
    let p = psnr(&r, &t).map_err(data_err)?;
    if p.is_infinite() {
        println!("psnr_db inf");
    } else {
        println!("psnr_db {p}");
    }
    Ok(())
}

pub fn cmd_convert(input: &Path, output: &Path, argv: &[String]) -> CliResult<()> {
    let start = Instant::now();
    let img = read_image_any(input)?;
    write_image_any(output, &img)?;
    let mut m = RunManifest::new("convert", argv, json!({}));
    m.inputs = vec![input.display().to_string()];
    m.outputs = vec![output.display().to_string()];
    m.wall_time_s = start.elapsed().as_secs_f64();
    let mp = manifest_path(output);
    m.write(&mp).map_err(write_err(&mp))?;
    Ok(())
}
