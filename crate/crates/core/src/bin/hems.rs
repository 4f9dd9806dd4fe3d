//! Command-line front end: forecasting, ARX fitting, case runs and sweeps.
//!
//! Exit status: 0 on success, 1 for invalid input or configuration, 2 when
//! the data are degenerate or the problem infeasible.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chrono::Timelike;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use hems_core::forecast::{build_features, compare_models, normalize_occupancy, ForecastReport, ModelKind};
use hems_core::io::synth::{generate_synthetic, write_synthetic, Profile, DEFAULT_DAYS};
use hems_core::io::timeseries::{csv_error, TIMESTAMP_FORMAT};
use hems_core::io::{load_config, load_timeseries_csv, RunConfig};
use hems_core::model::{ArxModel, ExogenousInputs};
use hems_core::objectives::Budgets;
use hems_core::scenario::report::{
    ensure_dir, setpoint_rows, sweep_rows, transfer_rows, write_case_files, write_json, write_rows, CaseSummary,
    SETPOINTS_FILE, SUMMARY_FILE, SWEEP_FILE, TRANSFERS_FILE,
};
use hems_core::scenario::{budget_sweep, run_case, CaseKind};
use hems_core::{Error, Result};

#[derive(Parser)]
#[command(name = "hems", version, about = "Robust demand-response scheduling for a smart home")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Rf,
    Gbm,
    Mlp,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    A,
    B,
    C,
    D,
}

impl From<CaseArg> for CaseKind {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::A => CaseKind::A,
            CaseArg::B => CaseKind::B,
            CaseArg::C => CaseKind::C,
            CaseArg::D => CaseKind::D,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepCaseArg {
    B,
    D,
}

#[derive(Subcommand)]
enum Command {
    /// Train occupancy regressors on a demand history and score them.
    Forecast {
        /// CSV with columns timestamp,demand_kw,occupancy.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        model: ModelArg,
        /// Overrides the configured forecast seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Report file name inside the output directory.
        #[arg(long, default_value = "forecast_report.json")]
        report: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit the ARX cooling model to a history of AC load and its inputs.
    FitArx {
        /// CSV with columns timestamp,ac_kw,outdoor_temp_c,occupancy,setpoint_c.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        lags: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one case study.
    RunCase {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Both budgets; overrides the configured ones.
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run case (b) or (d) along the diagonal budget grid.
    SweepBudgets {
        #[arg(long, value_enum)]
        case: SweepCaseArg,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a seeded synthetic household history.
    SynthData {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_DAYS)]
        days: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run all four cases and compare their schedules.
    Compare {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
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
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_degenerate() { 2 } else { 1 })
        }
    }
}

fn config(path: Option<&Path>) -> Result<RunConfig> {
    match path {
        Some(p) => load_config(p),
        None => Ok(RunConfig::default()),
    }
}

fn budgets(cfg: &RunConfig, gamma: Option<f64>) -> Budgets {
    gamma.map_or_else(|| cfg.budgets(), Budgets::diagonal)
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Forecast {
            input,
            model,
            seed,
            report,
            config: cfg_path,
            out,
        } => forecast(&input, model, seed, &report, cfg_path.as_deref(), &out),
        Command::FitArx { input, lags, out } => fit_arx(&input, &lags, &out),
        Command::RunCase {
            case,
            config: cfg_path,
            gamma,
            out,
        } => {
            let cfg = config(cfg_path.as_deref())?;
            let case_cfg = cfg.case_config()?;
            let report = run_case(case.into(), &case_cfg, budgets(&cfg, gamma), &cfg.ga)?;
            let names: Vec<String> = case_cfg.appliances.iter().map(|a| a.name.clone()).collect();
            let files = write_case_files(&out, &report, &names, case_cfg.first_hour)?;
            write_json(
                &out.join(SUMMARY_FILE),
                &json!({
                    "config": &cfg,
                    "arx": &case_cfg.arx,
                    "result": CaseSummary::from(&report),
                }),
            )?;
            println!("case {}: cost {:.4}", report.case, report.cost);
            print_written(
                &out,
                files
                    .iter()
                    .map(PathBuf::as_path)
                    .chain([out.join(SUMMARY_FILE).as_path()]),
            );
            Ok(())
        }
        Command::SweepBudgets {
            case,
            config: cfg_path,
            out,
        } => {
            let cfg = config(cfg_path.as_deref())?;
            let case_cfg = cfg.case_config()?;
            let kind = match case {
                SweepCaseArg::B => CaseKind::B,
                SweepCaseArg::D => CaseKind::D,
            };
            let sweep = budget_sweep(&case_cfg, kind, &cfg.sweep_gammas(), &cfg.ga)?;
            ensure_dir(&out)?;
            write_rows(&out.join(SWEEP_FILE), &sweep_rows(&sweep))?;
            write_json(
                &out.join(SUMMARY_FILE),
                &json!({
                    "config": &cfg,
                    "case": kind,
                    "monotone": sweep.is_monotone(),
                    "decreases_at": &sweep.decreases,
                    "rows": &sweep.rows,
                }),
            )?;
            for r in &sweep.rows {
                println!("gamma {:>5}: cost {:.4}", r.gamma, r.cost);
            }
            if !sweep.is_monotone() {
                eprintln!("warning: cost decreased at gamma {:?}", sweep.decreases);
            }
            print_written(&out, [out.join(SWEEP_FILE).as_path(), out.join(SUMMARY_FILE).as_path()]);
            Ok(())
        }
        Command::SynthData { seed, days, out } => {
            if days == 0 {
                return Err(Error::Validation {
                    field: "days".into(),
                    reason: "must be at least 1".into(),
                });
            }
            ensure_dir(&out)?;
            let data = generate_synthetic(seed, Profile::SummerWeekday, days);
            let files = write_synthetic(&data, &out)?;
            print_written(&out, files.iter().map(PathBuf::as_path));
            Ok(())
        }
        Command::Compare {
            config: cfg_path,
            gamma,
            out,
        } => compare(cfg_path.as_deref(), gamma, &out),
    }
}

fn print_written<'a>(out: &Path, files: impl IntoIterator<Item = &'a Path>) {
    for f in files {
        println!("wrote {}", f.strip_prefix(out).map_or(f, |p| p).display());
    }
}

#[derive(Serialize)]
struct ForecastOutput<'a> {
    input: &'a Path,
    rows: usize,
    gaps: &'a [hems_core::io::Gap],
    seed: u64,
    lag_count: usize,
    report: &'a ForecastReport,
}

fn forecast(
    input: &Path,
    model: ModelArg,
    seed: Option<u64>,
    report_name: &Path,
    cfg_path: Option<&Path>,
    out: &Path,
) -> Result<()> {
    let cfg = config(cfg_path)?;
    let seed = seed.unwrap_or(cfg.seeds.forecast);
    let loaded = load_timeseries_csv(input, &["demand_kw", "occupancy"])?;
    let table = &loaded.table;
    let hours: Vec<u32> = table.timestamps.iter().map(|t| t.hour()).collect();
    let demand = table.column("demand_kw").expect("loaded column");
    let occupancy = table.column("occupancy").expect("loaded column");
    let data = build_features(demand, occupancy, &hours, cfg.forecast.lag_count)?
        .split_chronological(cfg.forecast.test_fraction)?;
    let kinds: Vec<ModelKind> = match model {
        ModelArg::Rf => vec![ModelKind::RandomForest],
        ModelArg::Gbm => vec![ModelKind::Gbm],
        ModelArg::Mlp => vec![ModelKind::Mlp],
        ModelArg::All => ModelKind::ALL.to_vec(),
    };
    let report = compare_models(&data, &kinds, &cfg.forecast, seed)?;

    ensure_dir(out)?;
    let best = report.best_score();
    let normalized = normalize_occupancy(&best.test_predictions, report.max_training_occupancy)?;
    let csv_path = out.join("forecast.csv");
    let csv_path = csv_path.as_path();
    let csv_err = |row: usize| move |e: csv::Error| csv_error(csv_path, row, e);
    let mut w = csv::Writer::from_path(csv_path).map_err(csv_err(0))?;
    let mut header = vec!["timestamp".to_string(), "actual".to_string()];
    header.extend(report.scores.iter().map(|s| s.kind.to_string()));
    header.push("normalized".into());
    w.write_record(&header).map_err(csv_err(0))?;
    for (i, &row) in report.test_rows.iter().enumerate() {
        let mut rec = vec![
            table.timestamps[row].format(TIMESTAMP_FORMAT).to_string(),
            report.test_actual[i].to_string(),
        ];
        rec.extend(report.scores.iter().map(|s| s.test_predictions[i].to_string()));
        rec.push(normalized[i].to_string());
        w.write_record(&rec).map_err(csv_err(i + 1))?;
    }
    w.flush().map_err(|e| Error::io(csv_path, e))?;

    let report_path = out.join(report_name);
    write_json(
        &report_path,
        &ForecastOutput {
            input,
            rows: table.len(),
            gaps: &loaded.gaps,
            seed,
            lag_count: cfg.forecast.lag_count,
            report: &report,
        },
    )?;
    for s in &report.scores {
        println!(
            "{:>3}: test mse {:.5} rmse {:.5} mae {:.5}",
            s.kind, s.test.mse, s.test.rmse, s.test.mae
        );
    }
    println!("best: {}", report.best);
    if !report.zero_variance_columns.is_empty() {
        eprintln!("warning: zero-variance features {:?}", report.zero_variance_columns);
    }
    if !loaded.gaps.is_empty() {
        eprintln!("warning: {} gap(s) in the input history", loaded.gaps.len());
    }
    print_written(out, [csv_path, report_path.as_path()]);
    Ok(())
}

fn fit_arx(input: &Path, lags: &[usize], out: &Path) -> Result<()> {
    let cols = ["ac_kw", "outdoor_temp_c", "occupancy", "setpoint_c"];
    let loaded = load_timeseries_csv(input, &cols)?;
    if !loaded.gaps.is_empty() {
        return Err(Error::InsufficientData(format!(
            "{} gap(s) in the history break the lag structure",
            loaded.gaps.len()
        )));
    }
    let t = &loaded.table;
    let col = |n: &str| t.column(n).expect("loaded column");
    let exog = ExogenousInputs {
        outdoor_temp: col("outdoor_temp_c"),
        occupancy: col("occupancy"),
        setpoint: col("setpoint_c"),
    };
    let model = ArxModel::fit(col("ac_kw"), exog, lags)?;
    ensure_dir(out)?;
    let path = out.join("arx.json");
    write_json(&path, &model)?;
    println!("alpha {:?}", model.alpha());
    println!("beta  {:?}", model.beta());
    print_written(out, [path.as_path()]);
    Ok(())
}

fn compare(cfg_path: Option<&Path>, gamma: Option<f64>, out: &Path) -> Result<()> {
    let cfg = config(cfg_path)?;
    let case_cfg = cfg.case_config()?;
    let budgets = budgets(&cfg, gamma);
    let names: Vec<String> = case_cfg.appliances.iter().map(|a| a.name.clone()).collect();
    let mut reports = Vec::new();
    for kind in CaseKind::ALL {
        let r = run_case(kind, &case_cfg, budgets, &cfg.ga)?;
        write_case_files(&out.join(format!("case_{kind}")), &r, &names, case_cfg.first_hour)?;
        println!("case {kind}: cost {:.4}", r.cost);
        reports.push(r);
    }
    let (c, d) = (&reports[2], &reports[3]);
    write_rows(
        &out.join(SETPOINTS_FILE),
        &setpoint_rows(case_cfg.first_hour, Some(c), Some(d)),
    )?;
    let transfers: Vec<_> = transfer_rows(c).into_iter().chain(transfer_rows(d)).collect();
    write_rows(&out.join(TRANSFERS_FILE), &transfers)?;
    let summaries: Vec<CaseSummary> = reports.iter().map(CaseSummary::from).collect();
    let base = reports[0].cost;
    write_json(
        &out.join(SUMMARY_FILE),
        &json!({
            "config": &cfg,
            "arx": &case_cfg.arx,
            "cases": summaries,
            "relative_to_case_a": reports.iter().map(|r| (r.case, r.cost / base - 1.0)).collect::<Vec<_>>(),
        }),
    )?;
    print_written(
        out,
        [
            out.join(SETPOINTS_FILE).as_path(),
            out.join(TRANSFERS_FILE).as_path(),
            out.join(SUMMARY_FILE).as_path(),
        ],
    );
    Ok(())
}
