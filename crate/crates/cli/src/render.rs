//! Subcommand implementations: compute through the library, emit CSV, SVG,
//! text, or JSON.

use std::fs;
use std::io::Write as IoWrite;
use std::path::Path;

use num_traits::ToPrimitive;
use serde_json::json;

use cwmarket::{
    bin_observations, critical_beta, empirical_distribution, expected_counts, free_energy,
    gibbs_static_pmf, hamiltonian_series, independent_pmf, parse_trades, simulate_trajectory,
    solve_magnetization, stability_threshold, stationary_distribution, test_independence,
    top_traders, windowize, ClassScheme, DistributionTable, Error, InactiveRule, ModelParams,
    Result, SamplerSpec, SelfConsistency, ShellLabel, SpinConfiguration, TieRule, TradeFormat,
    WindowingPolicy, INDEPENDENT_WINDOWS_CAVEAT,
};

use crate::parse;
use crate::svg;
use crate::TestArgs;

fn table_csv(table: &DistributionTable<ShellLabel>) -> String {
    let mut out = String::from("pair_sum,abs_spin_sum,hamiltonian,count,probability\n");
    for (label, count, p) in table.iter() {
        let h = label.hamiltonian();
        out.push_str(&format!(
            "{},{},{}/{},{},{}\n",
            label.pair_sum(),
            label.abs_spin_sum(),
            h.numer(),
            h.denom(),
            count,
            p
        ));
    }
    out
}

pub fn dist(n: usize, beta: f64, out: &Path) -> Result<()> {
    let table = if beta == 0.0 {
        independent_pmf(n)?
    } else {
        gibbs_static_pmf(n, beta)?
    };
    let csv = table_csv(&table);
    print!("{csv}");
    fs::create_dir_all(out)?;
    let stem = format!("dist_n{n}_beta{beta}");
    fs::write(out.join(format!("{stem}.csv")), &csv)?;
    let labels: Vec<i64> = table.labels().iter().map(|l| l.pair_sum()).collect();
    let title = format!("interaction energy distribution (N={n}, beta={beta})");
    let image = svg::histogram(&title, &labels, table.probs());
    fs::write(out.join(format!("{stem}.svg")), image)?;
    Ok(())
}

pub fn meanfield(beta: f64, m_prev: f64, tolerance: f64, as_json: bool) -> Result<()> {
    let sc = SelfConsistency::new(beta, m_prev, tolerance)?;
    let roots = solve_magnetization(&sc);
    let threshold = if beta > 0.0 {
        Some(stability_threshold(beta)?)
    } else {
        None
    };
    let critical = if m_prev != 0.0 {
        Some(critical_beta(m_prev)?)
    } else {
        None
    };
    let curvature = free_energy(0.0, m_prev, beta)?.curvature;

    if as_json {
        let value = json!({
            "beta": beta,
            "m_prev": m_prev,
            "roots": roots.roots(),
            "stable": roots.stable_flags(),
            "critical_beta": critical,
            "stability_threshold": threshold,
            "curvature_at_zero": curvature,
        });
        println!("{value}");
        return Ok(());
    }

    println!("self-consistency m = tanh(beta m m_prev^2 / 2) at beta={beta}, m_prev={m_prev}");
    println!("roots ({}):", roots.len());
    for (root, stable) in roots.roots().iter().zip(roots.stable_flags()) {
        let flag = if *stable { "stable" } else { "unstable" };
        println!("  m = {root:+.12}  ({flag})");
    }
    match critical {
        Some(value) => println!("critical beta at this m_prev: {value}"),
        None => println!("critical beta at this m_prev: none (m_prev = 0)"),
    }
    if let Some(value) = threshold {
        println!("stability threshold sqrt(2/beta): {value:.12}");
    }
    println!("free-energy curvature at m = 0: {curvature:.12}");
    Ok(())
}

pub fn simulate(
    n: usize,
    beta: f64,
    steps: usize,
    seed: u64,
    burn_in: usize,
    out: Option<&Path>,
    as_json: bool,
) -> Result<()> {
    let params = ModelParams::new(n, beta)?;
    let spec = SamplerSpec::new(params, steps, seed, SpinConfiguration::all_plus(n)?)?;
    let trajectory = simulate_trajectory(&spec)?;
    let occupancy = empirical_distribution(&trajectory, burn_in)?;
    let stationary = stationary_distribution(n, beta)?;
    let tv = occupancy.total_variation(&stationary);

    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        let mut file =
            fs::File::create(dir.join(format!("trajectory_n{n}_beta{beta}_seed{seed}.csv")))?;
        writeln!(file, "step,spin_sum,pair_sum,magnetization")?;
        for (step, (shell, m)) in trajectory
            .shells()
            .iter()
            .zip(trajectory.magnetizations())
            .enumerate()
        {
            writeln!(
                file,
                "{step},{},{},{}",
                m.spin_sum(),
                shell.pair_sum(),
                m.as_f64()
            )?;
        }
    }

    if as_json {
        let rows: Vec<_> = occupancy
            .iter()
            .zip(stationary.probs())
            .map(|((label, count, p), pi)| {
                json!({
                    "pair_sum": label.pair_sum(),
                    "count": count.to_u64(),
                    "frequency": p,
                    "stationary_probability": pi,
                })
            })
            .collect();
        let value = json!({
            "n_traders": n,
            "beta": beta,
            "steps": steps,
            "seed": seed,
            "burn_in": burn_in,
            "generator": trajectory.generator(),
            "occupancy": rows,
            "total_variation_vs_stationary": tv,
        });
        println!("{value}");
        return Ok(());
    }

    println!("pair_sum,count,frequency,stationary_probability");
    for ((label, count, p), pi) in occupancy.iter().zip(stationary.probs()) {
        println!("{},{},{},{}", label.pair_sum(), count, p, pi);
    }
    eprintln!(
        "generator {}; total variation vs stationary law: {tv:.6}",
        trajectory.generator()
    );
    Ok(())
}

pub fn test(args: &TestArgs) -> Result<()> {
    let file = fs::File::open(&args.input)?;
    let parsed = parse_trades(file, &TradeFormat::default())?;
    if parsed.records.is_empty() {
        return Err(Error::Format("no valid trade records".into()));
    }

    let traders: Vec<String> = match &args.traders {
        Some(list) => list
            .split(',')
            .map(|t| t.trim().to_string())
            .filter(|t| !t.is_empty())
            .collect(),
        None => top_traders(&parsed.records, args.n_top),
    };
    let n = traders.len();

    let inactive_rule = match args.inactive_rule.as_str() {
        "drop-window" => InactiveRule::DropWindow,
        _ => InactiveRule::CarryForward,
    };
    let tie_rule = match args.tie_rule.as_str() {
        "net-quantity" => TieRule::NetQuantity,
        _ => TieRule::CarryForward,
    };
    let policy = WindowingPolicy::new(
        parse::duration_us(&args.window)?,
        traders,
        inactive_rule,
        tie_rule,
    )?;
    let series = windowize(&parsed.records, &policy)?;
    if series.is_empty() {
        return Err(Error::Windowing("no resolvable windows".into()));
    }
    let h_series = hamiltonian_series(&series);

    let null_pmf = independent_pmf(n)?;
    let support: Vec<i64> = null_pmf.labels().iter().map(|l| l.pair_sum()).collect();
    let scheme = match &args.classes {
        Some(spec) => ClassScheme::new(parse::class_spec(spec, &support)?, &support)?,
        None => ClassScheme::tail_merged(&null_pmf, h_series.len() as u64, 2.0)?,
    };
    let observed = bin_observations(&h_series, &scheme)?;
    let expected = expected_counts(&scheme, h_series.len() as u64, &null_pmf)?;
    let report = test_independence(&h_series, &scheme, args.alpha, &null_pmf)?;

    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        let mut buffer = Vec::new();
        series.to_csv(&mut buffer)?;
        fs::write(dir.join("spin_series.csv"), buffer)?;
    }

    let class_names: Vec<String> = scheme
        .classes()
        .iter()
        .map(|class| {
            let parts: Vec<String> = class.iter().map(|t| t.to_string()).collect();
            format!("{{{}}}", parts.join(","))
        })
        .collect();

    if args.json {
        let value = json!({
            "input": args.input.display().to_string(),
            "n_traders": n,
            "trader_set": series.trader_set(),
            "window": args.window,
            "n_windows": series.len(),
            "dropped_windows": series.dropped().len(),
            "row_errors": parsed.row_errors.len(),
            "classes": scheme.classes(),
            "observed": observed,
            "expected": expected,
            "statistic": report.statistic,
            "df": report.df,
            "p_value": report.p_value,
            "alpha": report.alpha,
            "critical_value": report.critical_value,
            "reject": report.reject,
            "caveat": INDEPENDENT_WINDOWS_CAVEAT,
        });
        println!("{value}");
        return Ok(());
    }

    println!(
        "chi-square independence test: N={n} traders, {} windows, alpha={}",
        series.len(),
        report.alpha
    );
    println!("class            observed  expected");
    for ((name, o), e) in class_names.iter().zip(&observed).zip(&expected) {
        println!("{name:<16} {o:<9} {e:.6}");
    }
    println!("statistic S = {:.6}", report.statistic);
    println!("degrees of freedom = {}", report.df);
    println!("p-value = {:.6}", report.p_value);
    println!(
        "critical value at alpha={}: {:.6}",
        report.alpha, report.critical_value
    );
    if report.reject {
        println!("decision: reject independence (S > C)");
    } else {
        println!("decision: fail to reject independence (S <= C)");
    }
    println!("note: {INDEPENDENT_WINDOWS_CAVEAT}");
    if !series.dropped().is_empty() || !parsed.row_errors.is_empty() {
        println!(
            "dropped windows: {}; parse row errors: {}",
            series.dropped().len(),
            parsed.row_errors.len()
        );
    }
    Ok(())
}
