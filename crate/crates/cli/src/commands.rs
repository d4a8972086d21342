use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process;

use serde::Serialize;
use surround_core::geometry::{detect_regions, DepthAxis};
use surround_core::io::{
    load_depth, load_mask, load_scene_with_defaults, load_wav_downmixed, read_json, save_scene,
    write_json, write_multichannel_wav, write_regions_json, write_report_json, ImageSize,
    RegionsDocument, RenderOverrides, RenderParams, SceneDescription,
};
use surround_core::metrics::compare;
use surround_core::render::{render, resample};
use surround_core::{AudioInput, MappingConfig, MetricParams, MicArray, SimilarityReport};

use crate::config::{relative_to, ConfigFile};
use crate::error::{CliError, CliResult};
use crate::{AxisArg, Command, MappingFlags, MetricFlags, RenderFlags};

pub fn run(command: Command, cfg: &ConfigFile) -> CliResult {
    match command {
        Command::Geometry {
            mask,
            depth,
            min_area,
            output,
            mapping,
        } => {
            let mapping = mapping.apply(cfg.mapping);
            cmd_geometry(
                &mask,
                &depth,
                min_area.unwrap_or(cfg.min_area()),
                &mapping,
                &output,
            )
        }
        Command::Render {
            scene,
            output,
            render,
            mapping,
        } => cmd_render(
            &scene,
            &output,
            &render.overrides(),
            cfg,
            &mapping.apply(cfg.mapping),
        ),
        Command::Metrics {
            a,
            b,
            manifest,
            output,
            csv,
            params,
        } => {
            let params = params.apply(cfg.metrics.clone());
            params.validate()?;
            match (a, b, manifest) {
                (Some(a), Some(b), None) => cmd_metrics(&a, &b, &output, &params),
                (None, None, Some(m)) => {
                    let csv = csv.unwrap_or_else(|| output.with_extension("csv"));
                    cmd_metrics_batch(&m, &output, &csv, &params)
                }
                _ => Err(CliError::Input(
                    "give either two WAV paths or --manifest".into(),
                )),
            }
        }
        Command::Pipeline {
            mask,
            depth,
            clips,
            output,
            regions,
            scene_out,
            min_area,
            generator,
            render,
            mapping,
        } => {
            let args = PipelineArgs {
                regions: regions.unwrap_or_else(|| output.with_extension("regions.json")),
                mask,
                depth,
                clips,
                output,
                scene_out,
                min_area: min_area.unwrap_or(cfg.min_area()),
                generator,
                render: render.overrides().resolve(&cfg.render_defaults()),
                mapping: mapping.apply(cfg.mapping),
            };
            cmd_pipeline(&args)
        }
    }
}

impl RenderFlags {
    fn overrides(&self) -> RenderOverrides {
        RenderOverrides {
            sample_rate: self.sample_rate,
            speed_of_sound: self.speed_of_sound,
            attenuation_clamp: self.attenuation_clamp,
            fractional_delay: self.fractional_delay.then_some(true),
            lfe_lowpass: self.lfe_lowpass.then_some(true),
            output_format: self.output_format.map(Into::into),
        }
    }
}

impl MappingFlags {
    fn apply(&self, mut m: MappingConfig) -> MappingConfig {
        if let Some(v) = self.lateral_extent {
            m.lateral_extent = v;
        }
        if let Some(v) = self.frontal_extent {
            m.frontal_extent = v;
        }
        if let Some(v) = self.vertical_extent {
            m.vertical_extent = v;
        }
        if let Some(a) = self.depth_axis {
            m.depth_axis = match a {
                AxisArg::Frontal => DepthAxis::Frontal,
                AxisArg::Vertical => DepthAxis::Vertical,
                AxisArg::Lateral => DepthAxis::Lateral,
            };
        }
        m
    }
}

impl MetricFlags {
    fn apply(&self, mut p: MetricParams) -> MetricParams {
        if let Some(v) = self.sample_rate {
            p.sample_rate = v;
        }
        if let Some(v) = self.frame_length {
            p.frame_length = v;
        }
        if let Some(v) = self.hop_length {
            p.hop_length = v;
        }
        if let Some(v) = self.n_mfcc {
            p.n_mfcc = v;
        }
        if let Some(v) = self.spectrum_window {
            p.spectrum_window = v;
        }
        p
    }
}

fn detect(
    mask: &Path,
    depth: &Path,
    min_area: f64,
    mapping: &MappingConfig,
) -> CliResult<RegionsDocument> {
    mapping.validate()?;
    let mask = load_mask(mask)?;
    let depth = load_depth(depth)?;
    let regions = detect_regions(&mask, &depth, min_area)?;
    let (width, height) = mask.dims();
    let doc = RegionsDocument::from_regions(&regions, ImageSize { width, height }, mapping)?;
    log::info!(
        "regions={} width={width} height={height}",
        doc.regions.len()
    );
    Ok(doc)
}

pub fn cmd_geometry(
    mask: &Path,
    depth: &Path,
    min_area: f64,
    mapping: &MappingConfig,
    output: &Path,
) -> CliResult {
    let doc = detect(mask, depth, min_area, mapping)?;
    write_regions_json(&doc, output)?;
    println!("{} region(s) -> {}", doc.regions.len(), output.display());
    Ok(())
}

fn render_scene(scene: &SceneDescription, mapping: &MappingConfig, output: &Path) -> CliResult {
    let placements = scene.placements(mapping)?;
    let room = scene.render.room(scene.image);
    let audio = render(&placements, &MicArray::default(), &room)?;
    write_multichannel_wav(&audio, output, scene.render.output_format)?;
    log::info!(
        "sources={} samples={} sample_rate={} peak={}",
        placements.len(),
        audio.len(),
        audio.sample_rate(),
        audio.peak()
    );
    println!(
        "{} source(s), {:.3} s at {} Hz -> {}",
        placements.len(),
        audio.len() as f64 / f64::from(audio.sample_rate()),
        audio.sample_rate(),
        output.display()
    );
    Ok(())
}

pub fn cmd_render(
    scene: &Path,
    output: &Path,
    flags: &RenderOverrides,
    cfg: &ConfigFile,
    mapping: &MappingConfig,
) -> CliResult {
    let mut scene = load_scene_with_defaults(scene, &cfg.render_defaults())?;
    scene.render = flags.resolve(&scene.render);
    render_scene(&scene, mapping, output)
}

fn load_for_metrics(path: &Path, params: &MetricParams) -> CliResult<AudioInput> {
    let clip = load_wav_downmixed(path)?;
    Ok(AudioInput::Mono(resample(&clip, params.sample_rate)?))
}

fn compare_files(a: &Path, b: &Path, params: &MetricParams) -> CliResult<SimilarityReport> {
    let report = compare(
        &load_for_metrics(a, params)?,
        &load_for_metrics(b, params)?,
        params,
    )?;
    Ok(report)
}

fn summary(r: &SimilarityReport) -> String {
    format!(
        "mfcc_dtw={:.6} zcr={:.6} chroma={:.6} spectral_contrast={:.6}",
        r.mfcc_dtw, r.zcr, r.chroma, r.spectral_contrast
    )
}

pub fn cmd_metrics(a: &Path, b: &Path, output: &Path, params: &MetricParams) -> CliResult {
    let report = compare_files(a, b, params)?;
    write_report_json(&report, output)?;
    println!("{}", summary(&report));
    Ok(())
}

#[derive(Debug, Serialize)]
struct PairReport<'a> {
    a: &'a Path,
    b: &'a Path,
    #[serde(flatten)]
    report: SimilarityReport,
}

/// Reads `path_a path_b` pairs, one per line, separated by whitespace or a
/// comma. Blank lines and `#` comments are ignored; relative paths resolve
/// against the manifest's directory.
pub fn read_pairs(manifest: &Path) -> CliResult<Vec<(PathBuf, PathBuf)>> {
    let text = fs::read_to_string(manifest)
        .map_err(|e| CliError::Io(format!("{}: {e}", manifest.display())))?;
    let base = manifest.parent().unwrap_or(Path::new(""));
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        match fields.as_slice() {
            [a, b] => pairs.push((relative_to(base, a), relative_to(base, b))),
            _ => {
                return Err(CliError::Input(format!(
                    "{}:{}: expected two paths, found {}",
                    manifest.display(),
                    n + 1,
                    fields.len()
                )))
            }
        }
    }
    if pairs.is_empty() {
        return Err(CliError::Input(format!(
            "{}: no pairs listed",
            manifest.display()
        )));
    }
    Ok(pairs)
}

pub fn cmd_metrics_batch(
    manifest: &Path,
    output: &Path,
    csv_path: &Path,
    params: &MetricParams,
) -> CliResult {
    let pairs = read_pairs(manifest)?;
    let mut reports = Vec::with_capacity(pairs.len());
    for (a, b) in &pairs {
        let report = compare_files(a, b, params)?;
        log::info!("a={} b={} {}", a.display(), b.display(), summary(&report));
        reports.push(PairReport { a, b, report });
    }
    write_json(&reports, output)?;

    let mut w = csv::Writer::from_path(csv_path)?;
    w.write_record(["a", "b", "mfcc_dtw", "zcr", "chroma", "spectral_contrast"])?;
    for r in &reports {
        w.write_record([
            r.a.display().to_string(),
            r.b.display().to_string(),
            r.report.mfcc_dtw.to_string(),
            r.report.zcr.to_string(),
            r.report.chroma.to_string(),
            r.report.spectral_contrast.to_string(),
        ])?;
    }
    w.flush()
        .map_err(|e| CliError::Io(format!("{}: {e}", csv_path.display())))?;

    let n = reports.len() as f64;
    let mean =
        |f: fn(&SimilarityReport) -> f64| reports.iter().map(|r| f(&r.report)).sum::<f64>() / n;
    println!(
        "{} pair(s): mean mfcc_dtw={:.6} zcr={:.6} chroma={:.6} spectral_contrast={:.6}",
        reports.len(),
        mean(|r| r.mfcc_dtw),
        mean(|r| r.zcr),
        mean(|r| r.chroma),
        mean(|r| r.spectral_contrast)
    );
    Ok(())
}

pub struct PipelineArgs {
    pub mask: PathBuf,
    pub depth: PathBuf,
    pub clips: PathBuf,
    pub output: PathBuf,
    pub regions: PathBuf,
    pub scene_out: Option<PathBuf>,
    pub min_area: f64,
    pub generator: Option<String>,
    pub render: RenderParams,
    pub mapping: MappingConfig,
}

/// Runs the generator template for one region; returns the WAV it wrote.
fn generate_clip(template: &str, id: &str, label: u32, dir: &Path) -> CliResult<PathBuf> {
    let out = dir.join(format!("generated.{id}.wav"));
    let cmd = template
        .replace("{id}", id)
        .replace("{label}", &label.to_string())
        .replace("{out}", &out.display().to_string());
    log::info!("generator cmd={cmd:?}");
    let status = process::Command::new("sh")
        .arg("-c")
        .arg(&cmd)
        .status()
        .map_err(|e| CliError::Io(format!("generator `{cmd}`: {e}")))?;
    if !status.success() {
        return Err(CliError::Input(format!(
            "generator `{cmd}` failed with {status}"
        )));
    }
    if !out.is_file() {
        return Err(CliError::Input(format!(
            "generator `{cmd}` did not write {}",
            out.display()
        )));
    }
    Ok(out)
}

pub fn cmd_pipeline(args: &PipelineArgs) -> CliResult {
    let doc = detect(&args.mask, &args.depth, args.min_area, &args.mapping)?;
    write_regions_json(&doc, &args.regions)?;

    let raw: BTreeMap<String, String> = read_json(&args.clips)?;
    let clip_dir = args.clips.parent().unwrap_or(Path::new("")).to_path_buf();
    let mut clips: BTreeMap<String, PathBuf> = raw
        .iter()
        .map(|(k, v)| (k.clone(), relative_to(&clip_dir, v)))
        .collect();

    if let Some(template) = &args.generator {
        let out_dir = args.output.parent().unwrap_or(Path::new("")).to_path_buf();
        for r in &doc.regions {
            if !clips.contains_key(&r.id) && !clips.contains_key(&r.label.to_string()) {
                let path = generate_clip(template, &r.id, r.label, &out_dir)?;
                clips.insert(r.id.clone(), path);
            }
        }
    }

    // Paths in `clips` are already resolved, so the base dir only matters for
    // a saved scene: keep it next to the scene file by storing absolute paths.
    let clips: BTreeMap<String, PathBuf> = clips
        .into_iter()
        .map(|(k, v)| (k, std::path::absolute(&v).unwrap_or(v)))
        .collect();
    let (scene, skipped) = SceneDescription::from_regions(&doc, &clips, args.render, clip_dir);
    for id in &skipped {
        log::warn!("region={id} skipped: no clip assigned");
    }
    let scene = scene.ok_or_else(|| {
        CliError::Input(format!(
            "{}: no clip matches any of the {} detected region(s)",
            args.clips.display(),
            doc.regions.len()
        ))
    })?;
    if let Some(p) = &args.scene_out {
        save_scene(&scene, p)?;
    }
    render_scene(&scene, &args.mapping, &args.output)
}
