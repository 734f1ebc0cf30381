use std::collections::BTreeMap;
use std::path::Path;

use identinet_core::action::{self, DeviationMode, IterOptions};
use identinet_core::game::{
    self, cascade, enumerate_equilibria, find_blocking_set, full_diffusion_conditions, relative_cost, CascadeMode,
    Orientation, Side,
};
use identinet_core::io::{self, Instance, SideLabels};
use identinet_core::netcore::{link_difference, IdentityAssignment};
use identinet_core::scenarios::{self, ScenarioConfig, ScenarioKind};
use identinet_core::welfare::{self, compare};
use identinet_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::output::{CliError, CliResult, Sink};
use crate::{
    BlockingArgs, CascadeArgs, Cli, Command, Deviation, EquilibriaArgs, Format, InputArgs, Method, Mode, ScenarioArgs,
    SideArgs, SolveArgs,
};

pub fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Validate(a) => validate(a),
        Command::Solve(a) => solve(cli, a),
        Command::Cascade(a) => run_cascade(cli, a),
        Command::Equilibria(a) => equilibria(cli, a),
        Command::Blocking(a) => blocking(cli, a),
        Command::Welfare(a) => run_welfare(cli, a),
        Command::Scenario(a) => scenario(cli, a),
    }
}

fn config_of<T: Serialize>(cli: &Cli, args: &T) -> serde_json::Value {
    json!({ "args": args, "format": cli.format })
}

fn sink(cli: &Cli) -> CliResult<Sink> {
    Sink::new(cli.output_dir.clone(), cli.format)
}

fn validate(a: &InputArgs) -> CliResult {
    let text = read(&a.input)?;
    let report = io::validate_json(&text)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if report.is_ok() {
        println!("{}", report.summary());
        return Ok(());
    }
    for e in &report.errors {
        println!("error: {e}");
    }
    Err(CliError::Rejected(report.summary()))
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Rejected(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> CliResult<Instance> {
    Ok(Instance::from_json(&read(path)?)?)
}

fn solve(cli: &Cli, a: &SolveArgs) -> CliResult {
    let inst = load(&a.input)?;
    let (soc, assign) = (&inst.society, &inst.assignment);
    let profile = match a.method {
        Method::Direct => action::solve_actions(soc, assign)?,
        Method::Iterative => {
            let x0: Vec<f64> = match a.seed {
                Some(seed) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let top = 2.0 * soc.pop().abilities().iter().copied().fold(1.0, f64::max);
                    (0..soc.n()).map(|_| rng.random_range(0.0..top)).collect()
                }
                None => vec![0.0; soc.n()],
            };
            action::solve_actions_iterative(soc, assign, &x0, IterOptions { tol: a.tol, max_iters: a.max_iters })?
        }
    };
    let mode = match a.deviation {
        Deviation::Fixed => DeviationMode::FixedProfile,
        Deviation::Resolve => DeviationMode::Resolve,
    };
    let table = action::value_table(soc, assign, &profile, mode)?;

    let mut out = sink(cli)?;
    out.json("profile.json", &profile)?;
    out.text("profile.csv", Format::Csv, &io::profile_csv(soc, assign, &profile)?)?;
    out.json("values.json", &io::label_value_table(soc.identities(), &table))?;
    out.text("values.csv", Format::Csv, &io::value_table_csv(soc.identities(), &table)?)?;
    if cli.format == Some(Format::Dot) || cli.format.is_none() {
        out.text("profile.dot", Format::Dot, &identity_dot(&inst, assign, Some(&profile.x)))?;
    }
    out.finish("solve", config_of(cli, a), a.seed)?;

    let residual = action::max_foc_residual(soc, assign, &profile.x);
    match profile.iterations {
        Some(k) => println!("solved n={} method=iterative iterations={k} max_foc_residual={residual:e}", soc.n()),
        None => println!("solved n={} method=direct max_foc_residual={residual:e}", soc.n()),
    }
    Ok(())
}

/// DOT of an arbitrary (possibly multi-identity) profile.
fn identity_dot(inst: &Instance, assign: &IdentityAssignment, x: Option<&[f64]>) -> String {
    let ids = inst.society.identities();
    if ids.len() == 2 {
        let o = Orientation { a: identinet_core::netcore::IdentityId(0), b: identinet_core::netcore::IdentityId(1) };
        if let Ok(sides) = o.to_sides(assign) {
            return io::snapshot_dot("profile", inst.society.net(), &sides, &SideLabels::from_orientation(o, ids), x);
        }
    }
    // more than two identities: colour only the first one distinctly
    let sides: Vec<Side> = assign.ids().iter().map(|id| if id.0 == 0 { Side::A } else { Side::B }).collect();
    let labels = SideLabels { a: ids.specs()[0].label.clone(), b: "other".into() };
    io::snapshot_dot("profile", inst.society.net(), &sides, &labels, x)
}

fn orientation(inst: &Instance, s: &SideArgs) -> CliResult<Orientation> {
    let ids = inst.society.identities();
    match &s.sides {
        Some(labels) => Ok(Orientation::from_labels(ids, &labels[0], &labels[1])?),
        None => Ok(Orientation::from_labels(ids, &ids.specs()[0].label, &ids.specs()[1].label)?),
    }
}

fn resolve_c(inst: &Instance, o: Orientation, c: Option<f64>) -> CliResult<f64> {
    if let Some(c) = c {
        return Ok(c);
    }
    let ids = inst.society.identities();
    Ok(relative_cost(ids.get(o.a), ids.get(o.b), inst.society.pop())?.c)
}

#[derive(Serialize)]
struct CascadeSummary {
    sides: SideLabels,
    c_schedule: Vec<f64>,
    rounds: usize,
    switches: usize,
    converged: bool,
    final_a_fraction: f64,
    stall_set: Vec<usize>,
    cycles: usize,
    diffusion: Option<game::DiffusionReport>,
}

fn run_cascade(cli: &Cli, a: &CascadeArgs) -> CliResult {
    let inst = load(&a.input)?;
    let o = orientation(&inst, &a.sides)?;
    let schedule = match &a.c_schedule {
        Some(s) => s.clone(),
        None => vec![resolve_c(&inst, o, a.sides.c)?],
    };
    let mode = match a.mode {
        Mode::Monotone => CascadeMode::Monotone,
        Mode::General => CascadeMode::General,
    };
    let net = inst.society.net();
    let initial = o.to_sides(&inst.assignment)?;
    let trace = cascade(net, &initial, &schedule, mode)?;
    let labels = SideLabels::from_orientation(o, inst.society.identities());
    let last = *schedule.last().expect("non-empty schedule");
    let diffusion = if last <= 0.0 { Some(full_diffusion_conditions(net, last)?) } else { None };
    let summary = CascadeSummary {
        sides: labels.clone(),
        c_schedule: schedule.clone(),
        rounds: trace.rounds.len(),
        switches: trace.switch_count(),
        converged: trace.converged,
        final_a_fraction: trace.a_fraction(),
        stall_set: trace.stall_set(),
        cycles: trace.cycles.len(),
        diffusion,
    };

    let mut out = sink(cli)?;
    out.json("trace.json", &trace)?;
    out.json("summary.json", &summary)?;
    out.text("trace.csv", Format::Csv, &io::trace_csv(&trace, &labels)?)?;
    if cli.format.is_none_or(|f| f == Format::Dot) {
        let mut dot = String::new();
        let snapshots = std::iter::once((0, &trace.initial)).chain(trace.rounds.iter().map(|r| (r.round, &r.assignment)));
        for (round, sides) in snapshots {
            let assign = o.to_assignment(sides, inst.society.identities())?;
            let x = action::solve_actions(&inst.society, &assign)?.x;
            dot.push_str(&io::snapshot_dot(&format!("round_{round}"), net, sides, &labels, Some(&x)));
        }
        out.text("trace.dot", Format::Dot, &dot)?;
    }
    out.finish("cascade", config_of(cli, a), None)?;

    println!(
        "rounds={} final_a_fraction={} stall_set={:?} converged={}",
        summary.rounds,
        io::fmt_f64(summary.final_a_fraction),
        summary.stall_set,
        summary.converged
    );
    if !trace.cycles.is_empty() {
        println!("synchronous updates cycled in {} phase(s); re-ran sequentially", trace.cycles.len());
    }
    Ok(())
}

fn equilibria(cli: &Cli, a: &EquilibriaArgs) -> CliResult {
    let inst = load(&a.input)?;
    let o = orientation(&inst, &a.sides)?;
    let c = resolve_c(&inst, o, a.sides.c)?;
    let labels = SideLabels::from_orientation(o, inst.society.identities());
    let eqs = enumerate_equilibria(inst.society.net(), c, a.enumerate_limit)?;
    let named: Vec<Vec<&str>> = eqs.iter().map(|e| e.iter().map(|&s| labels.get(s)).collect()).collect();

    let mut out = sink(cli)?;
    out.json("equilibria.json", &json!({ "c": c, "sides": labels, "count": eqs.len(), "equilibria": named }))?;
    let mut csv = String::from("equilibrium,node,identity\n");
    for (k, e) in named.iter().enumerate() {
        for (i, l) in e.iter().enumerate() {
            csv.push_str(&format!("{k},{i},{l}\n"));
        }
    }
    out.text("equilibria.csv", Format::Csv, &csv)?;
    out.finish("equilibria", config_of(cli, a), None)?;

    println!("equilibria={}", eqs.len());
    for e in &named {
        println!("  {}", e.join(" "));
    }
    Ok(())
}

fn blocking(cli: &Cli, a: &BlockingArgs) -> CliResult {
    let inst = load(&a.input)?;
    let o = orientation(&inst, &a.sides)?;
    let c = resolve_c(&inst, o, a.sides.c)?;
    if c > 0.0 {
        return Err(CliError::Core(Error::Precondition(format!(
            "c = {c} > 0: side A is intrinsically worse; swap the sides with --sides"
        ))));
    }
    let net = inst.society.net();
    let set = find_blocking_set(net, c, a.subset.as_deref())?;
    let k = if set.is_empty() { Vec::new() } else { link_difference(net, &set)?.ks() };

    let mut out = sink(cli)?;
    out.json(
        "blocking.json",
        &json!({ "c": c, "subset": a.subset, "blocking_set": set, "k": k, "sides": SideLabels::from_orientation(o, inst.society.identities()) }),
    )?;
    let mut csv = String::from("node,k\n");
    for (i, kv) in set.iter().zip(&k) {
        csv.push_str(&format!("{i},{kv}\n"));
    }
    out.text("blocking.csv", Format::Csv, &csv)?;
    out.finish("blocking", config_of(cli, a), None)?;

    println!("blocking_set={set:?}");
    Ok(())
}

fn run_welfare(cli: &Cli, a: &InputArgs) -> CliResult {
    let inst = load(&a.input)?;
    let soc = &inst.society;
    let base = welfare::welfare(soc, &inst.assignment)?;
    let mut uniform = BTreeMap::new();
    let mut deltas = BTreeMap::new();
    for id in soc.identities().ids() {
        let label = format!("all-{}", soc.identities().get(id).label);
        let r = welfare::welfare(soc, &IdentityAssignment::uniform(soc.n(), id, soc.identities())?)?;
        deltas.insert(label.clone(), compare(&base, &r));
        uniform.insert(label, r);
    }

    let mut out = sink(cli)?;
    out.json("welfare.json", &json!({ "profile": base, "uniform": uniform, "delta_vs_profile": deltas }))?;
    let mut csv = String::from("assignment,total_utility,total_action\n");
    csv.push_str(&format!("profile,{},{}\n", io::fmt_f64(base.total_utility), io::fmt_f64(base.total_action)));
    for (k, r) in &uniform {
        csv.push_str(&format!("{k},{},{}\n", io::fmt_f64(r.total_utility), io::fmt_f64(r.total_action)));
    }
    out.text("welfare.csv", Format::Csv, &csv)?;
    out.finish("welfare", config_of(cli, a), None)?;

    println!(
        "total_utility={} total_action={}",
        io::fmt_f64(base.total_utility),
        io::fmt_f64(base.total_action)
    );
    Ok(())
}

fn scenario(cli: &Cli, a: &ScenarioArgs) -> CliResult {
    let mut config: ScenarioConfig = match &a.config {
        Some(p) => serde_json::from_str(&read(p)?).map_err(Error::from)?,
        None => ScenarioConfig::default(),
    };
    if let Some(k) = &a.kind {
        config.kind = serde_json::from_value(json!(k))
            .map_err(|_| CliError::Core(Error::InvalidParameter(format!("unknown scenario kind {k:?}"))))?;
    }
    if let Some(n) = a.n {
        config.n = n;
    }
    if let Some(d) = a.d {
        config.d = d;
    }
    if let Some(s) = a.seed {
        config.seed = s;
    }
    config.bridge |= a.bridge;

    let g = scenarios::generate(&config)?;
    let net = g.instance.society.net();
    let mut report = json!({
        "config": config,
        "groups": g.groups,
        "bridge": g.bridge,
        "regular_degree": scenarios::regular_degree(net),
        "components": net.component_count(),
    });
    let mut line = format!("generated n={} m_edges={} components={}", net.n(), net.edge_count(), net.component_count());
    if matches!(config.kind, ScenarioKind::Cafeteria1 | ScenarioKind::Cafeteria2) {
        let reach = config.d as f64 + 2.0;
        let cs = a.c.clone().unwrap_or_else(|| {
            let steps = (2.0 * reach).round() as i64;
            (-steps..=steps).map(|k| k as f64 * 0.5).collect()
        });
        let checks = cs
            .iter()
            .map(|&c| scenarios::policy_solution_check(&g, config.kind, c))
            .collect::<Result<Vec<_>, _>>()?;
        if config.kind == ScenarioKind::Cafeteria1 {
            let (lo, hi) = scenarios::equilibrium_region(net, &g.groups);
            report["equilibrium_region"] = json!({ "lower_exclusive": lo, "upper_inclusive": hi });
            line.push_str(&format!(" equilibrium_region=({}, {}]", io::fmt_f64(lo), io::fmt_f64(hi)));
        } else {
            report["boundary_band"] = json!(scenarios::BOUNDARY_BAND);
        }
        report["checks"] = json!(checks);
    }

    let mut out = sink(cli)?;
    out.text("instance.json", Format::Json, &g.instance.to_json()?)?;
    out.json("scenario.json", &report)?;
    out.finish("scenario", json!({ "config": config, "c": a.c, "format": cli.format }), Some(config.seed))?;
    println!("{line}");
    Ok(())
}
