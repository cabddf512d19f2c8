//! Command implementations: thin adapters from experiment specs to the
//! numeric layer, emitting deterministic CSV/JSON artifacts.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};

use roughlab_core::area::AreaPrefix;
use roughlab_core::enhance::{enhancibility_probe, weak_geometric_probe, ProbeConfig};
use roughlab_core::lacunary::{harmonic_blocks, LacunarySeries};
use roughlab_core::path::{fmt_f64, Tensor2};
use roughlab_core::variation::p_variation;
use roughlab_core::young::{envelope_constants, partial_sum_constant, rs_integrate};

use crate::spec::{CommandKind, ExperimentSpec, OutputFormat, OutputSpec, ProbeKind, ScheduleSpec};

pub struct RunContext {
    pub spec_dir: PathBuf,
    pub out_dir: PathBuf,
    pub tol_override: Option<f64>,
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    let mut f = fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
    f.write_all(contents.as_bytes())?;
    Ok(path)
}

fn tensor_row(t: &Tensor2) -> String {
    t.entries()
        .iter()
        .map(|v| fmt_f64(*v))
        .collect::<Vec<_>>()
        .join(",")
}

fn tensor_header(d: usize) -> String {
    let mut cols = Vec::new();
    for i in 1..=d {
        for j in 1..=d {
            cols.push(format!("a{i}{j}"));
        }
    }
    cols.join(",")
}

fn input_of(spec: &ExperimentSpec) -> anyhow::Result<&crate::spec::InputSpec> {
    spec.input
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("{} requires an input", spec.command.name()))
}

fn output_format(spec: &ExperimentSpec) -> OutputFormat {
    spec.output
        .as_ref()
        .map(|o| o.format)
        .unwrap_or(OutputFormat::Csv)
}

pub fn run(spec: &ExperimentSpec, ctx: &RunContext) -> anyhow::Result<Vec<PathBuf>> {
    match spec.command {
        CommandKind::Pvar => run_pvar(spec, ctx),
        CommandKind::Area => run_area(spec, ctx),
        CommandKind::Integrate => run_integrate(spec, ctx),
        CommandKind::Lacunary => run_lacunary(spec, ctx),
        CommandKind::Probe => run_probe(spec, ctx),
        CommandKind::Constants => run_constants(spec, ctx),
    }
}

fn run_pvar(spec: &ExperimentSpec, ctx: &RunContext) -> anyhow::Result<Vec<PathBuf>> {
    let path = input_of(spec)?.materialize(&ctx.spec_dir)?;
    let p = spec.pvar_exponent()?;
    let report = p_variation(&path, p)?;
    if output_format(spec) == OutputFormat::Json {
        #[derive(serde::Serialize)]
        struct PvarOut {
            p: f64,
            value: f64,
            partition_indices: Vec<usize>,
            partition_times: Vec<f64>,
        }
        let out = PvarOut {
            p: report.p,
            value: report.value,
            partition_indices: report.optimal_partition.indices().to_vec(),
            partition_times: report
                .optimal_partition
                .indices()
                .iter()
                .map(|&i| path.time(i))
                .collect(),
        };
        let json = serde_json::to_string_pretty(&out)? + "\n";
        return Ok(vec![write_artifact(&ctx.out_dir, "pvar.json", &json)?]);
    }
    let mut summary = String::from("p,value,partition_points\n");
    summary.push_str(&format!(
        "{},{},{}\n",
        fmt_f64(report.p),
        fmt_f64(report.value),
        report.optimal_partition.len()
    ));
    let mut partition = String::from("index,t\n");
    for &i in report.optimal_partition.indices() {
        partition.push_str(&format!("{i},{}\n", fmt_f64(path.time(i))));
    }
    Ok(vec![
        write_artifact(&ctx.out_dir, "pvar.csv", &summary)?,
        write_artifact(&ctx.out_dir, "pvar_partition.csv", &partition)?,
    ])
}

fn run_area(spec: &ExperimentSpec, ctx: &RunContext) -> anyhow::Result<Vec<PathBuf>> {
    let path = input_of(spec)?.materialize(&ctx.spec_dir)?;
    let w = spec.parameters.window_points.unwrap_or(16);
    if w < 2 || w > path.len() {
        bail!("window_points must be in 2..={}, got {w}", path.len());
    }
    let n = path.len();
    let grid: Vec<usize> = (0..w).map(|j| j * (n - 1) / (w - 1)).collect();
    let pre = AreaPrefix::new(&path);
    if output_format(spec) == OutputFormat::Json {
        #[derive(serde::Serialize)]
        struct Row {
            s: f64,
            t: f64,
            area: Tensor2,
        }
        let mut rows = Vec::new();
        for (gi, &i) in grid.iter().enumerate() {
            for &j in grid.iter().skip(gi) {
                rows.push(Row {
                    s: path.time(i),
                    t: path.time(j),
                    area: pre.eval_idx(i, j)?,
                });
            }
        }
        let json = serde_json::to_string_pretty(&rows)? + "\n";
        return Ok(vec![write_artifact(&ctx.out_dir, "area.json", &json)?]);
    }
    let mut table = format!("s,t,{}\n", tensor_header(path.dim()));
    for (gi, &i) in grid.iter().enumerate() {
        for &j in grid.iter().skip(gi) {
            let a = pre.eval_idx(i, j)?;
            table.push_str(&format!(
                "{},{},{}\n",
                fmt_f64(path.time(i)),
                fmt_f64(path.time(j)),
                tensor_row(&a)
            ));
        }
    }
    Ok(vec![write_artifact(&ctx.out_dir, "area.csv", &table)?])
}

fn run_integrate(spec: &ExperimentSpec, ctx: &RunContext) -> anyhow::Result<Vec<PathBuf>> {
    let path1 = input_of(spec)?.materialize(&ctx.spec_dir)?;
    let path2 = match &spec.parameters.path2 {
        Some(i) => i.materialize(&ctx.spec_dir)?,
        None => path1.clone(),
    };
    let schedule_spec = spec
        .parameters
        .schedule
        .clone()
        .unwrap_or(ScheduleSpec::Nested { lo: 2, hi: 30 });
    let schedule = schedule_spec.build(&path1)?;
    let tol = ctx
        .tol_override
        .or(spec.parameters.tol)
        .unwrap_or(1e-8);
    let report = rs_integrate(&path1, &path2, &schedule, tol)?;

    // integral path as CSV when converged; the JSON report carries the rest
    let mut artifacts = Vec::new();
    if let Some(ipath) = &report.integral_path {
        let mut csv = format!("t,{}\n", tensor_header(path1.dim()));
        for (j, tensor) in ipath.iter().enumerate() {
            csv.push_str(&format!("{},{}\n", fmt_f64(path1.time(j)), tensor_row(tensor)));
        }
        artifacts.push(write_artifact(&ctx.out_dir, "integral.csv", &csv)?);
    }
    #[derive(serde::Serialize)]
    struct ReportOut<'a> {
        status: roughlab_core::young::ConvergenceStatus,
        tol: f64,
        levels: &'a [roughlab_core::young::ConvergenceLevel],
        final_value: &'a Option<Tensor2>,
    }
    let out = ReportOut {
        status: report.status,
        tol,
        levels: &report.levels,
        final_value: &report.final_value,
    };
    let json = serde_json::to_string_pretty(&out)? + "\n";
    artifacts.push(write_artifact(&ctx.out_dir, "integrate.json", &json)?);
    Ok(artifacts)
}

fn run_lacunary(spec: &ExperimentSpec, ctx: &RunContext) -> anyhow::Result<Vec<PathBuf>> {
    let series_spec = spec
        .parameters
        .series
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("lacunary requires parameters.series"))?;
    let blocks = harmonic_blocks(series_spec.c, series_spec.l1, series_spec.blocks)?;
    let boundaries = blocks.boundaries().to_vec();
    let series = LacunarySeries::alternating(blocks, series_spec.truncation)?;

    // rows: explicit n_list, or block boundaries plus a log-spaced ladder;
    // the ladder is clamped to the covered range (an untruncated series has
    // no closed form beyond its last block boundary)
    let n_cap = if series_spec.truncation.is_some() {
        u64::MAX
    } else {
        *boundaries.last().unwrap()
    };
    let mut levels: Vec<u64> = match (&spec.parameters.n_list, spec.parameters.n_max) {
        (Some(list), _) => list.clone(),
        (None, Some(n_max)) => {
            let n_max = n_max.min(n_cap);
            let mut v: Vec<u64> = boundaries
                .iter()
                .copied()
                .filter(|&b| b > series_spec.l1 && b <= n_max)
                .collect();
            let mut n = series_spec.l1 + 1;
            while n <= n_max {
                v.push(n);
                n = (n * 3 / 2).max(n + 1);
            }
            v.push(n_max);
            v
        }
        (None, None) => bail!("lacunary requires parameters.n_list or parameters.n_max"),
    };
    levels.sort_unstable();
    levels.dedup();

    let rows: Vec<(u64, f64, usize)> = levels
        .iter()
        .map(|&n| -> anyhow::Result<_> {
            let value = series.bracket_sum_closed(n)?;
            let block = series
                .blocks()
                .block_of((n - 1).min(series.truncation()))
                .unwrap_or(0);
            Ok((n, value, block))
        })
        .collect::<anyhow::Result<_>>()?;
    if output_format(spec) == OutputFormat::Json {
        #[derive(serde::Serialize)]
        struct Row {
            n: u64,
            value: f64,
            block_index: usize,
        }
        let out: Vec<Row> = rows
            .iter()
            .map(|&(n, value, block_index)| Row {
                n,
                value,
                block_index,
            })
            .collect();
        let json = serde_json::to_string_pretty(&out)? + "\n";
        return Ok(vec![write_artifact(&ctx.out_dir, "lacunary.json", &json)?]);
    }
    let mut table = String::from("N,value,block_index\n");
    for &(n, value, block) in &rows {
        table.push_str(&format!("{n},{},{block}\n", fmt_f64(value)));
    }
    Ok(vec![write_artifact(&ctx.out_dir, "lacunary.csv", &table)?])
}

fn run_probe(spec: &ExperimentSpec, ctx: &RunContext) -> anyhow::Result<Vec<PathBuf>> {
    let path = input_of(spec)?.materialize(&ctx.spec_dir)?;
    let schedule_spec = spec
        .parameters
        .schedule
        .clone()
        .unwrap_or(ScheduleSpec::Nested { lo: 2, hi: 30 });
    let schedule = schedule_spec.build(&path)?;
    let mut cfg = ProbeConfig::default();
    if let Some(t) = ctx.tol_override.or(spec.parameters.tol) {
        cfg.tol = t;
    }
    let kind = spec.parameters.probe.unwrap_or(ProbeKind::Enhancibility);
    let report = match kind {
        ProbeKind::Enhancibility => enhancibility_probe(&path, &schedule, &cfg)?,
        ProbeKind::WeakGeometric => {
            weak_geometric_probe(&path, &schedule, spec.parameters.delta_fractions.clone(), &cfg)?
        }
    };
    let json = serde_json::to_string_pretty(&report)? + "\n";
    Ok(vec![write_artifact(&ctx.out_dir, "probe.json", &json)?])
}

fn run_constants(spec: &ExperimentSpec, ctx: &RunContext) -> anyhow::Result<Vec<PathBuf>> {
    let a_values = spec
        .parameters
        .a_values
        .clone()
        .unwrap_or_else(|| vec![0.25, 0.5, 1.0]);
    let p_values = spec
        .parameters
        .p_values
        .clone()
        .unwrap_or_else(|| vec![1.5, 2.0, 3.0]);
    let m = spec.parameters.m_bound.unwrap_or(1.0);
    #[derive(serde::Serialize)]
    struct Row {
        a: f64,
        p: f64,
        m_bound: f64,
        c_sum: f64,
        c_holder: f64,
        c_pvar: f64,
    }
    let mut rows = Vec::new();
    for &a in &a_values {
        for &p in &p_values {
            let c_sum = partial_sum_constant(a, p)?;
            let env = envelope_constants(a, p, m)?;
            rows.push(Row {
                a,
                p,
                m_bound: m,
                c_sum,
                c_holder: env.holder,
                c_pvar: env.p_var,
            });
        }
    }
    if output_format(spec) == OutputFormat::Json {
        let json = serde_json::to_string_pretty(&rows)? + "\n";
        return Ok(vec![write_artifact(&ctx.out_dir, "constants.json", &json)?]);
    }
    let mut table = String::from("a,p,m_bound,c_sum,c_holder,c_pvar\n");
    for r in &rows {
        table.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_f64(r.a),
            fmt_f64(r.p),
            fmt_f64(r.m_bound),
            fmt_f64(r.c_sum),
            fmt_f64(r.c_holder),
            fmt_f64(r.c_pvar)
        ));
    }
    Ok(vec![write_artifact(&ctx.out_dir, "constants.csv", &table)?])
}

/// Resolve the output directory: CLI --out wins, then the spec, then cwd.
pub fn resolve_out_dir(spec: &ExperimentSpec, cli_out: Option<&Path>, spec_dir: &Path) -> PathBuf {
    if let Some(o) = cli_out {
        return o.to_path_buf();
    }
    match &spec.output {
        Some(OutputSpec { dir, .. }) => {
            if dir.is_absolute() {
                dir.clone()
            } else {
                spec_dir.join(dir)
            }
        }
        None => PathBuf::from("."),
    }
}
