use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use serde::Serialize;

use fractalts_core::mfdfa::{fit_scaling, fluctuation_table, log_spaced_taus, q_range};
use fractalts_core::series::{format_f64, to_csv};
use fractalts_core::synth::GeneratorSpec;
use fractalts_core::{
    align_by_date, cross_correlation, load_csv, AnalysisConfig, Column, HurstSpectrum, TimeSeries,
};

use crate::args::{Command, Format, GenerateArgs, GridArgs, Kind};
use crate::manifest::{EffectiveConfig, GridSpec, InputSpec, Invocation, RunManifest};
use crate::output::{write_all, Output};

/// First date stamped on generated series.
pub const GENERATED_START: (i32, u32, u32) = (2000, 1, 1);

/// Turns parsed arguments into a fully defaulted invocation plus its output
/// directory.
pub fn resolve(command: Command) -> Result<(Invocation, PathBuf)> {
    Ok(match command {
        Command::Analyze(a) => {
            let inputs = a
                .input
                .iter()
                .map(|p| input_spec(p, &a.column, a.date_column.as_deref()))
                .collect();
            (
                Invocation::Analyze {
                    inputs,
                    grid: grid_spec(&a.grid),
                    format: a.format,
                },
                a.out,
            )
        }
        Command::Fluct(a) => (
            Invocation::Fluct {
                input: input_spec(&a.input, &a.column, a.date_column.as_deref()),
                grid: grid_spec(&a.grid),
                format: a.format,
            },
            a.out,
        ),
        Command::Xcorr(a) => {
            if a.input.len() != 2 {
                bail!("xcorr needs exactly two --input files, got {}", a.input.len());
            }
            let (col_a, col_b) = match a.column.as_slice() {
                [c] => (c.clone(), c.clone()),
                [ca, cb] => (ca.clone(), cb.clone()),
                other => bail!("xcorr takes one or two --column values, got {}", other.len()),
            };
            (
                Invocation::Xcorr {
                    a: input_spec(&a.input[0], &col_a, Some(&a.date_column)),
                    b: input_spec(&a.input[1], &col_b, Some(&a.date_column)),
                    max_lag: a.max_lag,
                    format: a.format,
                },
                a.out,
            )
        }
        Command::Generate(g) => generate_invocation(g)?,
        Command::Replay(r) => {
            let text = fs::read_to_string(&r.manifest)
                .with_context(|| format!("reading manifest {}", r.manifest.display()))?;
            let manifest: RunManifest = serde_json::from_str(&text)
                .with_context(|| format!("parsing manifest {}", r.manifest.display()))?;
            let dir = r.out.unwrap_or_else(|| {
                r.manifest
                    .parent()
                    .map(Path::to_path_buf)
                    .unwrap_or_else(|| PathBuf::from("."))
            });
            (manifest.invocation, dir)
        }
    })
}

fn generate_invocation(g: GenerateArgs) -> Result<(Invocation, PathBuf)> {
    let spec = match g.kind {
        Kind::WhiteNoise => GeneratorSpec::WhiteNoise {
            length: g.length,
            seed: g.seed,
        },
        Kind::Fgn => GeneratorSpec::Fgn {
            h: g.h,
            length: g.length,
            seed: g.seed,
        },
        Kind::Cascade => GeneratorSpec::Cascade {
            p: g.p,
            levels: g.levels,
            seed: g.seed,
        },
    };
    spec.validate()?;
    let ext = match g.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let out = g.out.unwrap_or_else(|| {
        let kind = match g.kind {
            Kind::WhiteNoise => "white_noise",
            Kind::Fgn => "fgn",
            Kind::Cascade => "cascade",
        };
        PathBuf::from(format!("{kind}.{ext}"))
    });
    let file_name = out
        .file_name()
        .and_then(|s| s.to_str())
        .context("--out must name a file")?
        .to_owned();
    let dir = out
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    Ok((
        Invocation::Generate {
            spec,
            file_name,
            format: g.format,
        },
        dir,
    ))
}

fn input_spec(path: &Path, column: &str, date_column: Option<&str>) -> InputSpec {
    InputSpec {
        path: fs::canonicalize(path).unwrap_or_else(|_| path.to_path_buf()),
        column: column.to_owned(),
        date_column: date_column.map(str::to_owned),
    }
}

fn grid_spec(g: &GridArgs) -> GridSpec {
    GridSpec {
        q_min: g.q_min,
        q_max: g.q_max,
        q_step: g.q_step,
        order: g.order,
        tau_min: g.tau_min,
        tau_max: g.tau_max,
        tau_count: g.tau_count,
        fit_min: g.fit_min,
        fit_max: g.fit_max,
    }
}

/// The concrete analysis grids for a series of length `len`.
pub fn analysis_config(grid: &GridSpec, len: usize) -> Result<AnalysisConfig<f64>> {
    let lo = grid
        .tau_min
        .unwrap_or((grid.order + 2).max(fractalts_core::mfdfa::DEFAULT_TAU_FLOOR));
    let hi = grid.tau_max.unwrap_or(len / 4);
    let fit_range = match (grid.fit_min, grid.fit_max) {
        (None, None) => None,
        (a, b) => Some((a.unwrap_or(0), b.unwrap_or(usize::MAX))),
    };
    let config = AnalysisConfig {
        q_grid: q_range(grid.q_min, grid.q_max, grid.q_step)?,
        tau_grid: log_spaced_taus(lo, hi, grid.tau_count),
        detrend_order: grid.order,
        fit_range,
    };
    config.validate(len)?;
    Ok(config)
}

fn load(input: &InputSpec) -> Result<TimeSeries<f64>> {
    Ok(load_csv(
        &input.path,
        Column::parse(&input.column),
        input.date_column.as_deref(),
    )?)
}

/// Runs an invocation, writing outputs (and the manifest) into `dir`.
/// Returns the written paths. Warnings go to standard error.
pub fn execute(invocation: &Invocation, dir: &Path) -> Result<Vec<PathBuf>> {
    let (mut outputs, effective, manifest_name) = match invocation {
        Invocation::Analyze {
            inputs,
            grid,
            format,
        } => run_analyze(inputs, grid, *format)?,
        Invocation::Fluct {
            input,
            grid,
            format,
        } => run_fluct(input, grid, *format)?,
        Invocation::Xcorr {
            a,
            b,
            max_lag,
            format,
        } => run_xcorr(a, b, *max_lag, *format)?,
        Invocation::Generate {
            spec,
            file_name,
            format,
        } => run_generate(spec, file_name, *format)?,
    };
    let manifest = RunManifest::new(invocation.clone(), effective);
    outputs.push(Output::json(manifest_name, &manifest)?);
    write_all(dir, &outputs)
}

type Rendered = (Vec<Output>, Vec<EffectiveConfig>, String);

#[derive(Serialize)]
struct SpectrumSummary<'a> {
    series: &'a str,
    length: usize,
    q_min: f64,
    h_q_min: f64,
    q_max: f64,
    h_q_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    hurst: Option<f64>,
    delta_h: f64,
    detrend_order: usize,
    fit_taus: &'a [usize],
}

fn q_label(q: f64) -> String {
    format!("h(q={q})")
}

fn run_analyze(inputs: &[InputSpec], grid: &GridSpec, format: Format) -> Result<Rendered> {
    let mut outputs = Vec::new();
    let mut effective = Vec::new();
    let mut rows: Vec<(String, HurstSpectrum<f64>)> = Vec::new();
    let mut seen = HashSet::new();
    for input in inputs {
        let series = load(input)?;
        let name = series.name().to_owned();
        if !seen.insert(name.clone()) {
            bail!("two inputs share the series name {name:?}");
        }
        let config = analysis_config(grid, series.len())
            .with_context(|| format!("series {name}"))?;
        let table = fluctuation_table(&series, &config).with_context(|| format!("series {name}"))?;
        let spectrum = fit_scaling(&table, config.fit_range).with_context(|| format!("series {name}"))?;
        if spectrum.hurst.is_none() {
            eprintln!("warning: q grid does not contain 2; Hurst exponent omitted for {name}");
        }
        match format {
            Format::Csv => outputs.push(Output::new(format!("{name}.hq.csv"), spectrum.to_csv())),
            Format::Json => outputs.push(Output::json(format!("{name}.hq.json"), &spectrum)?),
        }
        let (q_min, h_q_min) = spectrum.h_min_q();
        let (q_max, h_q_max) = spectrum.h_max_q();
        let summary = SpectrumSummary {
            series: &name,
            length: series.len(),
            q_min,
            h_q_min,
            q_max,
            h_q_max,
            hurst: spectrum.hurst,
            delta_h: spectrum.delta_h,
            detrend_order: config.detrend_order,
            fit_taus: &spectrum.fit_taus,
        };
        outputs.push(Output::json(format!("{name}.summary.json"), &summary)?);
        effective.push(EffectiveConfig {
            series: name.clone(),
            length: series.len(),
            config,
        });
        rows.push((name, spectrum));
    }

    let (q_lo, _) = rows[0].1.h_min_q();
    let (q_hi, _) = rows[0].1.h_max_q();
    let mut table = format!("series,{},{},H,delta_h\n", q_label(q_lo), q_label(q_hi));
    for (name, s) in &rows {
        table.push_str(&format!(
            "{name},{},{},{},{}\n",
            format_f64(s.h_min_q().1),
            format_f64(s.h_max_q().1),
            s.hurst.map(format_f64).unwrap_or_default(),
            format_f64(s.delta_h)
        ));
    }
    let label = if rows.len() == 1 { rows[0].0.clone() } else { "batch".to_owned() };
    outputs.push(Output::new(format!("{label}.table.csv"), table));
    Ok((outputs, effective, format!("{label}.analyze.manifest.json")))
}

fn run_fluct(input: &InputSpec, grid: &GridSpec, format: Format) -> Result<Rendered> {
    let series = load(input)?;
    let name = series.name().to_owned();
    let config = analysis_config(grid, series.len())?;
    let table = fluctuation_table(&series, &config)?;
    let output = match format {
        Format::Csv => {
            let mut body = String::from("q,tau,log_tau,log_F\n");
            for (qi, &q) in table.q_grid.iter().enumerate() {
                for (ti, &tau) in table.tau_grid.iter().enumerate() {
                    body.push_str(&format!(
                        "{},{tau},{},{}\n",
                        format_f64(q),
                        format_f64((tau as f64).ln()),
                        format_f64(table.get(qi, ti).ln())
                    ));
                }
            }
            Output::new(format!("{name}.fluct.csv"), body)
        }
        Format::Json => Output::json(format!("{name}.fluct.json"), &table)?,
    };
    let effective = vec![EffectiveConfig {
        series: name.clone(),
        length: series.len(),
        config,
    }];
    Ok((vec![output], effective, format!("{name}.fluct.manifest.json")))
}

#[derive(Serialize)]
struct XcorrSummary<'a> {
    a: &'a str,
    b: &'a str,
    aligned_length: usize,
    first_date: Option<NaiveDate>,
    last_date: Option<NaiveDate>,
    max_lag: usize,
    peak_lag: i64,
    peak_value: f64,
}

fn run_xcorr(a: &InputSpec, b: &InputSpec, max_lag: usize, format: Format) -> Result<Rendered> {
    let sa = load(a)?;
    let sb = load(b)?;
    let (sa, sb) = align_by_date(&sa, &sb)?;
    let ccf = cross_correlation(&sa, &sb, max_lag)?;
    let labels = sa.labels().unwrap_or_default();
    let summary = XcorrSummary {
        a: sa.name(),
        b: sb.name(),
        aligned_length: sa.len(),
        first_date: labels.first().copied(),
        last_date: labels.last().copied(),
        max_lag,
        peak_lag: ccf.peak_lag,
        peak_value: ccf.peak_value,
    };
    let table = match format {
        Format::Csv => Output::new("xcorr.csv", ccf.to_csv()),
        Format::Json => Output::json("xcorr.json", &ccf)?,
    };
    let outputs = vec![table, Output::json("xcorr.summary.json", &summary)?];
    Ok((outputs, Vec::new(), "xcorr.manifest.json".to_owned()))
}

fn run_generate(spec: &GeneratorSpec, file_name: &str, format: Format) -> Result<Rendered> {
    let raw = spec.generate()?;
    let (y, m, d) = GENERATED_START;
    let start = NaiveDate::from_ymd_opt(y, m, d).expect("valid start date");
    let labels: Vec<NaiveDate> = start.iter_days().take(raw.len()).collect();
    let name = raw.name().to_owned();
    let series = TimeSeries::with_labels(name, raw.into_values(), labels)?;
    let body = match format {
        Format::Csv => Output::new(file_name, to_csv(&series)),
        Format::Json => Output::json(file_name, &series)?,
    };
    let stem = Path::new(file_name)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or(file_name);
    Ok((vec![body], Vec::new(), format!("{stem}.manifest.json")))
}
