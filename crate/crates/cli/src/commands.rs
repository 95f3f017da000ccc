use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use ghzw_core::analysis::{
    conversion_report, monte_carlo_uncertainties, write_plot_data, FidelitySummary, LocalOptOptions, MonteCarloOptions,
    PlotBasis, ReportOptions, Statistic, UncertaintyReport,
};
use ghzw_core::povm::{
    apply_filter_all, convert_ghz_to_w, fidelity_ghz3_analytic, fidelity_wn_analytic, success_probability_analytic,
    FilterBasis, FilterStrength,
};
use ghzw_core::qstate::{make_ghz, make_w_hv, make_w_prime, LocalUnitary, QuantumState, Sign, State};
use ghzw_core::rng::derive_seed;
use ghzw_core::tomography::{
    read_counts_csv, read_counts_json, reconstruct_mle, shots_for_peak, simulate_counts, write_counts_csv,
    write_counts_json, Initializer, MleOptions, NoiseModel, SimulationConfig,
};
use ghzw_core::{analysis, CountRecord64, DensityMatrix64, MleOptions64, ReconstructionResult64};
use serde_json::{json, Value};

use crate::args::*;
use crate::{CliError, CliResult, Context};

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))
}

fn write_json_to(path: Option<&Path>, value: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    match path {
        Some(p) => {
            let mut w = create(p)?;
            writeln!(w, "{text}").and_then(|_| w.flush()).map_err(|e| CliError::io(e.to_string()))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn read_counts(path: &Path) -> CliResult<Vec<CountRecord64>> {
    let r = open(path)?;
    Ok(if is_json(path) { read_counts_json(r)? } else { read_counts_csv(r)? })
}

fn write_counts(path: Option<&Path>, records: &[CountRecord64]) -> CliResult<()> {
    match path {
        Some(p) if is_json(p) => Ok(write_counts_json(create(p)?, records)?),
        Some(p) => Ok(write_counts_csv(create(p)?, records)?),
        None => Ok(write_counts_csv(io::stdout().lock(), records)?),
    }
}

/// Reads a state JSON, or the `rho` field of a reconstruction JSON.
fn read_state(path: &Path) -> CliResult<State<f64>> {
    let mut value: Value = serde_json::from_reader(open(path)?).map_err(ghzw_core::Error::from)?;
    if let Some(rho) = value.get_mut("rho") {
        value = rho.take();
    }
    if let Some(state) = value.get_mut("state").filter(|s| s.is_object()) {
        value = state.take();
    }
    Ok(serde_json::from_value(value).map_err(ghzw_core::Error::from)?)
}

fn n_from_records(records: &[CountRecord64]) -> CliResult<usize> {
    records.first().map(|r| r.setting.n_qubits()).ok_or_else(|| CliError::validation("count table is empty"))
}

fn mle_options(args: &MleArgs) -> MleOptions64 {
    MleOptions {
        max_iterations: args.max_iterations,
        tolerance: args.tolerance,
        initializer: if args.mixed_start { Initializer::MaximallyMixed } else { Initializer::LinearInversion },
        ..MleOptions::default()
    }
}

fn summary_json(s: &FidelitySummary<f64>) -> Value {
    json!({
        "fidelity_ghz_canonical": s.ghz_canonical,
        "fidelity_w_canonical": s.w_canonical,
        "fidelity_ghz_local_opt": s.ghz_local_opt,
        "fidelity_w_local_opt": s.w_local_opt,
    })
}

fn uncertainty_json(reports: &[UncertaintyReport<f64>]) -> Value {
    let mut map = serde_json::Map::new();
    for r in reports {
        map.insert(
            r.statistic.name().to_string(),
            json!({
                "point_estimate": r.point_estimate,
                "mean": r.mean,
                "std_dev": r.std_dev,
                "n_trials": r.n_trials,
                "n_failed": r.n_failed,
            }),
        );
    }
    Value::Object(map)
}

fn reconstruction_json(r: &ReconstructionResult64) -> Value {
    json!({
        "iterations": r.iterations,
        "converged": r.converged,
        "termination": r.termination,
        "log_likelihood": r.log_likelihood,
        "scale": r.scale,
        "purity": r.rho.purity(),
    })
}

pub fn state(args: &StateArgs, ctx: &mut Context) -> CliResult<()> {
    let sign = if args.sign == "minus" { Sign::Minus } else { Sign::Plus };
    let st = match args.kind {
        StateKindArg::Ghz => make_ghz::<f64>(args.n, sign)?,
        StateKindArg::W => make_w_hv(args.n)?,
        StateKindArg::Wprime => make_w_prime(args.n)?,
    };
    let value = State::from(st).to_json_value();
    write_json_to(args.out.as_deref(), &value)?;
    if let Some(p) = &args.out {
        ctx.out.put("kind", format!("{:?}", args.kind).to_lowercase());
        ctx.out.put("n_qubits", args.n);
        ctx.out.put("out", p.display().to_string());
    }
    Ok(())
}

pub fn filter(args: &FilterArgs, ctx: &mut Context) -> CliResult<()> {
    let input = read_state(&args.input)?;
    let strength = FilterStrength::from_a_squared(args.a_squared)?;
    let basis = match args.basis {
        BasisArg::Da => FilterBasis::Da,
        BasisArg::Hv => FilterBasis::Hv,
    };
    let swap = LocalUnitary::<f64>::da_swap();
    let n = input.n_qubits();
    let (state, p) = match input {
        State::Pure(s) => {
            let s = if args.relabel { s.apply_local(swap.matrix(), 0)? } else { s };
            let o = apply_filter_all(&s, strength, basis)?;
            (State::Pure(o.output_state), o.success_probability)
        }
        State::Density(d) => {
            let d = if args.relabel { QuantumState::apply_local(&d, swap.matrix(), 0)? } else { d };
            let o = apply_filter_all(&d, strength, basis)?;
            (State::Density(o.output_state), o.success_probability)
        }
    };
    let doc = json!({ "success_probability": p, "state": state.to_json_value(), "a_squared": args.a_squared });
    write_json_to(args.out.as_deref(), &doc)?;
    if args.out.is_none() {
        return Ok(());
    }
    if strength.is_identity() {
        ctx.out.note("a_squared=1: the filter is the identity and the input state is unchanged");
    }
    let rho = state.to_density();
    ctx.out.put("n_qubits", n);
    ctx.out.put("a_squared", args.a_squared);
    ctx.out.put("success_probability", p);
    ctx.out.put("fidelity_w_prime", analysis::fidelity_pure(&rho, &make_w_prime(n)?)?);
    ctx.out.put("fidelity_ghz", analysis::fidelity_pure(&rho, &make_ghz(n, Sign::Plus)?)?);
    if n >= 2 {
        ctx.out.put("analytic_success_probability", success_probability_analytic(n, strength)?);
        ctx.out.put("analytic_fidelity_w_prime", fidelity_wn_analytic(n, strength)?);
    }
    if n == 3 {
        ctx.out.put("analytic_fidelity_ghz", fidelity_ghz3_analytic(strength));
    }
    Ok(())
}

pub fn tomo_sim(args: &SimArgs, ctx: &mut Context) -> CliResult<()> {
    let rho = read_state(&args.input)?.to_density();
    let shots = match (args.shots, args.peak) {
        (Some(s), _) => s,
        (None, Some(p)) => shots_for_peak(&rho, p)?,
        (None, None) => return Err(CliError::validation("one of --shots or --peak is required")),
    };
    let noise = match args.noise {
        NoiseArg::None => NoiseModel::None,
        NoiseArg::Poisson => NoiseModel::Poisson,
    };
    let seed = ctx.seed(args.out.is_none());
    let config = SimulationConfig { background_rate: args.background, ..SimulationConfig::new(shots, noise, seed) };
    let records = simulate_counts(&rho, &config)?;
    write_counts(args.out.as_deref(), &records)?;
    if let Some(p) = &args.out {
        ctx.out.put("n_qubits", rho.n_qubits());
        ctx.out.put("settings", records.len());
        ctx.out.put("shots_per_setting", shots);
        ctx.out.put("total_counts", records.iter().map(|r| r.raw_counts).sum::<u64>());
        ctx.out.put("max_counts", records.iter().map(|r| r.raw_counts).max().unwrap_or(0));
        ctx.out.put("out", p.display().to_string());
    }
    Ok(())
}

fn converged_or_fail(rec: &ReconstructionResult64, what: &str) -> CliResult<()> {
    if rec.converged {
        Ok(())
    } else {
        Err(CliError::convergence(format!(
            "{what} reconstruction did not converge within {} iterations",
            rec.iterations
        )))
    }
}

pub fn tomo_reconstruct(args: &ReconstructArgs, ctx: &mut Context) -> CliResult<()> {
    let records = read_counts(&args.counts)?;
    let n = n_from_records(&records)?;
    let rec = reconstruct_mle(&records, n, &mle_options(&args.mle))?;
    write_json_to(args.out.as_deref(), &serde_json::to_value(&rec).expect("serializable"))?;
    if args.out.is_some() {
        ctx.out.put("n_qubits", n);
        ctx.out.put("reconstruction", reconstruction_json(&rec));
        ctx.out.put("fidelity_ghz_canonical", analysis::fidelity_pure(&rec.rho, &make_ghz(n, Sign::Plus)?)?);
        ctx.out.put("fidelity_w_canonical", analysis::fidelity_pure(&rec.rho, &make_w_prime(n)?)?);
    }
    converged_or_fail(&rec, "maximum-likelihood")
}

fn local_opt(args: &LocalOptArgs, seed: u64) -> LocalOptOptions {
    LocalOptOptions { starts: args.starts, seed, ..LocalOptOptions::default() }
}

pub fn analyze(args: &AnalyzeArgs, ctx: &mut Context) -> CliResult<()> {
    let rho = read_state(&args.input)?.to_density();
    let n = rho.n_qubits();
    let master = ctx.seed(false);
    let lo = local_opt(&args.local_opt, derive_seed(master, 1));
    let mc = args.montecarlo.map(|n_trials| MonteCarloOptions {
        n_trials,
        seed: derive_seed(master, 2),
        mle: mle_options(&args.mle),
        local_opt: lo,
    });
    if mc.is_some() && args.counts.is_none() {
        return Err(CliError::validation("--montecarlo needs --counts"));
    }
    let counts = args.counts.as_deref().map(read_counts).transpose()?;
    if let Some(c) = &counts {
        if n_from_records(c)? != n {
            return Err(CliError::validation("count table and state have different qubit counts"));
        }
    }

    ctx.out.put("n_qubits", n);
    if let Some(before_path) = &args.before {
        let before = read_state(before_path)?.to_density();
        let before_counts = args.before_counts.as_deref().map(read_counts).transpose()?;
        if mc.is_some() && before_counts.is_none() {
            return Err(CliError::validation("--montecarlo with --before needs --before-counts"));
        }
        let pair = match (&before_counts, &counts) {
            (Some(b), Some(a)) => Some((b.as_slice(), a.as_slice())),
            _ => None,
        };
        let report = conversion_report(&before, &rho, pair, &ReportOptions { local_opt: lo, monte_carlo: mc })?;
        if args.table {
            ctx.table = Some(report.to_string());
        }
        put_report(ctx, &report);
    } else {
        let summary = FidelitySummary::compute(&rho, &lo)?;
        ctx.out.put("fidelity", summary_json(&summary));
        if let (Some(mc), Some(c)) = (&mc, &counts) {
            let unc = monte_carlo_uncertainties(c, n, &Statistic::ALL, mc)?;
            ctx.out.put("uncertainty", uncertainty_json(&unc));
            if args.table {
                let mut t = String::new();
                for u in &unc {
                    t += &format!("{:<26} {:.4} ± {:.4}\n", u.statistic.name(), summary.get(u.statistic), u.std_dev);
                }
                ctx.table = Some(t.trim_end().to_string());
            }
        } else if args.table {
            let t: Vec<String> =
                Statistic::ALL.iter().map(|s| format!("{:<26} {:.4}", s.name(), summary.get(*s))).collect();
            ctx.table = Some(t.join("\n"));
        }
    }
    if let Some(p) = &args.plot_data {
        let basis = match args.plot_basis {
            PlotBasisArg::Hv => PlotBasis::Hv,
            PlotBasisArg::Da => PlotBasis::Da,
        };
        write_plot_data(create(p)?, &rho, basis)?;
        ctx.out.put("plot_data", p.display().to_string());
    }
    Ok(())
}

fn put_report(ctx: &mut Context, report: &analysis::ConversionReport<f64>) {
    ctx.out.put("input", summary_json(&report.input));
    ctx.out.put("output", summary_json(&report.output));
    if let Some(u) = &report.input_uncertainty {
        ctx.out.put("input_uncertainty", uncertainty_json(u));
    }
    if let Some(u) = &report.output_uncertainty {
        ctx.out.put("output_uncertainty", uncertainty_json(u));
    }
    let r = &report.reference;
    ctx.out.put(
        "experimental_reference",
        json!({
            "ghz_before": r.ghz_before.0, "ghz_before_std": r.ghz_before.1,
            "ghz_after": r.ghz_after.0, "ghz_after_std": r.ghz_after.1,
            "w_before": r.w_before.0, "w_before_std": r.w_before.1,
            "w_after": r.w_after.0, "w_after_std": r.w_after.1,
        }),
    );
}

pub fn pipeline(args: &PipelineArgs, ctx: &mut Context) -> CliResult<()> {
    let master = ctx.seed(false);
    let strength = FilterStrength::from_a_squared(args.a_squared)?;
    let ghz = make_ghz::<f64>(args.n, Sign::Plus)?;
    let converted = convert_ghz_to_w(args.n, strength)?;
    let (rho_in, rho_out): (DensityMatrix64, DensityMatrix64) = (ghz.to_density(), converted.output_state.to_density());
    let noise = match args.noise {
        NoiseArg::None => NoiseModel::None,
        NoiseArg::Poisson => NoiseModel::Poisson,
    };
    let counts_in = simulate_counts(&rho_in, &SimulationConfig::new(args.shots, noise, derive_seed(master, 0)))?;
    let counts_out = simulate_counts(&rho_out, &SimulationConfig::new(args.shots, noise, derive_seed(master, 1)))?;
    let mle = mle_options(&args.mle);
    let rec_in = reconstruct_mle(&counts_in, args.n, &mle)?;
    let rec_out = reconstruct_mle(&counts_out, args.n, &mle)?;

    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("cannot create {}: {e}", dir.display())))?;
        write_json_to(Some(&dir.join("ghz.json")), &State::from(ghz.clone()).to_json_value())?;
        let filtered = json!({
            "success_probability": converted.success_probability,
            "state": State::from(converted.output_state.clone()).to_json_value(),
            "a_squared": args.a_squared,
        });
        write_json_to(Some(&dir.join("filtered.json")), &filtered)?;
        write_counts(Some(&dir.join("counts_in.csv")), &counts_in)?;
        write_counts(Some(&dir.join("counts_out.csv")), &counts_out)?;
        write_json_to(
            Some(&dir.join("reconstruction_in.json")),
            &serde_json::to_value(&rec_in).expect("serializable"),
        )?;
        write_json_to(
            Some(&dir.join("reconstruction_out.json")),
            &serde_json::to_value(&rec_out).expect("serializable"),
        )?;
        ctx.out.put("out_dir", dir.display().to_string());
    }

    let lo = local_opt(&args.local_opt, derive_seed(master, 3));
    let mc = args.montecarlo.map(|n_trials| MonteCarloOptions {
        n_trials,
        seed: derive_seed(master, 2),
        mle,
        local_opt: lo,
    });
    let pair = mc.as_ref().map(|_| (counts_in.as_slice(), counts_out.as_slice()));
    let report = conversion_report(&rec_in.rho, &rec_out.rho, pair, &ReportOptions { local_opt: lo, monte_carlo: mc })?;

    ctx.out.put("n_qubits", args.n);
    ctx.out.put("a_squared", args.a_squared);
    ctx.out.put("shots_per_setting", args.shots);
    ctx.out.put("success_probability", converted.success_probability);
    ctx.out.put("analytic_fidelity_w_prime", fidelity_wn_analytic(args.n, strength)?);
    ctx.out.put("reconstruction_in", reconstruction_json(&rec_in));
    ctx.out.put("reconstruction_out", reconstruction_json(&rec_out));
    put_report(ctx, &report);
    if args.table {
        ctx.table = Some(report.to_string());
    }
    converged_or_fail(&rec_in, "input-state")?;
    converged_or_fail(&rec_out, "output-state")
}
