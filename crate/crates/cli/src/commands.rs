//! Subcommand implementations. Each writes its artifacts through
//! [`Artifacts`] and reports a [`Verdict`].

use anyhow::{bail, Context, Result};
use serde::Serialize;

use oneperc::bounds::{
    eval_closed_form, fiber_curve, k_indep_line_threshold, lattice_lower_bounds, line_product_bound, p_star,
    pstar_table, truncate_decimal, Curve, LineBound,
};
use oneperc::constructions::{
    independence_order, is_maximiser, named_construction, threshold_table, Construction, Family,
};
use oneperc::graph::builtin_graph;
use oneperc::json::{exact_weight, MeasureJson};
use oneperc::lattice::{
    couple_left_down, ladder_window_check, sample_left_down, sample_onld_construction, sample_shell_construction,
    SampleStats, WindowConfig,
};
use oneperc::lp::{build_lp, certify_extremal, solve, support_method, Direction};
use oneperc::scalar::{format_rational, int, Scalar};
use oneperc::{Measure, Rational, VertexBasedMeasure};

use crate::output::Artifacts;
use crate::parse::Grid;
use crate::{
    BoundCommand, CertifyArgs, Cli, Command, ConstructArgs, CurveArgs, LpCommand, LpSolveArgs, LpSupportArgs,
    PstarArgs, SimulateCommand, Verdict, WindowArgs,
};

type Rows = Vec<Vec<String>>;

fn r(x: &Rational) -> String {
    format_rational(x)
}

fn f(x: f64) -> String {
    format!("{x}")
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::Min => "min",
        Direction::Max => "max",
    }
}

/// File-name-safe form of a generator or graph name.
fn slug(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

fn report(verdict: Verdict, what: &str) -> Verdict {
    println!("{} {what}", verdict.label());
    verdict
}

pub fn run(cli: &Cli, argv: &[String]) -> Result<Verdict> {
    let mut out = Artifacts::new(&cli.out_dir)?;
    let verdict = match &cli.command {
        Command::Curve(args) => curve(cli.grid.as_ref(), args, &mut out)?,
        Command::Lp(LpCommand::Solve(args)) => lp_solve(args, &mut out)?,
        Command::Lp(LpCommand::Support(args)) => lp_support(cli.grid.as_ref(), args, &mut out)?,
        Command::Construct(args) => construct(args, &mut out)?,
        Command::Certify(args) => certify(args, &mut out)?,
        Command::Pstar(args) => pstar(args, &mut out)?,
        Command::Bound(cmd) => bound(cmd, &mut out)?,
        Command::Simulate(cmd) => simulate(cli.seed, cmd, &mut out)?,
        Command::Extremes => extremes(cli.grid.as_ref(), &mut out)?,
    };
    out.finish(argv, cli.seed)?;
    Ok(verdict)
}

fn grid_or(grid: Option<&Grid>, default: &str) -> Result<Vec<Rational>> {
    let g = match grid {
        Some(g) => g.clone(),
        None => default.parse().map_err(anyhow::Error::msg)?,
    };
    Ok(g.points())
}

fn curve(grid: Option<&Grid>, args: &CurveArgs, out: &mut Artifacts) -> Result<Verdict> {
    let curve = Curve::parse(&args.family, &args.graph, args.k)?;
    let points = grid_or(grid, "0:1:21")?;
    let graph = if args.lp {
        if args.k != 1 {
            bail!("--lp compares against the 1-independent programme; drop --k");
        }
        Some(builtin_graph(&args.graph)?)
    } else {
        None
    };
    let direction = if args.family == "F" {
        Direction::Max
    } else {
        Direction::Min
    };
    let mut rows: Rows = Vec::new();
    let mut agree_all = true;
    let breakpoints = curve.breakpoints();
    let unit = Rational::zero()..=Rational::one();
    for p in &points {
        if !unit.contains(p) {
            let mut row = vec![
                r(p),
                String::new(),
                "false".into(),
                String::new(),
                f(p.to_f64()),
                String::new(),
            ];
            if graph.is_some() {
                row.extend([String::new(), String::new()]);
            }
            rows.push(row);
            continue;
        }
        let value = eval_closed_form(&curve, p);
        // Pieces are numbered from 0; a breakpoint belongs to the piece below it.
        let piece = breakpoints.iter().filter(|&&b| p.to_f64() > b).count();
        let mut row = vec![
            r(p),
            r(&value),
            "true".into(),
            piece.to_string(),
            f(p.to_f64()),
            f(value.to_f64()),
        ];
        if let Some(g) = &graph {
            let lp = solve(&build_lp(g, p, direction)?)?;
            let agree = lp.optimum == value;
            agree_all &= agree;
            row.extend([r(&lp.optimum), agree.to_string()]);
        }
        rows.push(row);
    }
    let mut header = vec!["p", "value", "valid", "piece_id", "p_float", "value_float"];
    if graph.is_some() {
        header.extend(["lp_value", "agree"]);
    }
    let kind = if direction == Direction::Max {
        "greatest"
    } else {
        "least"
    };
    out.csv(
        &format!("curve_{kind}_{}_k{}.csv", slug(&args.graph), args.k),
        &header,
        &rows,
    )?;
    let verdict = Verdict::from_bool(agree_all);
    if graph.is_some() {
        report(verdict, &format!("closed form equals LP at {} points", points.len()));
    } else {
        println!("wrote {} points", points.len());
    }
    Ok(verdict)
}

#[derive(Serialize)]
struct LpReport {
    graph: String,
    p: String,
    direction: Direction,
    optimum: String,
    optimum_float: f64,
    certificate: oneperc::lp::Certificate,
    symmetrized_optimum: String,
    rows: usize,
    dual: Vec<String>,
    measure: MeasureJson,
}

fn lp_solve(args: &LpSolveArgs, out: &mut Artifacts) -> Result<Verdict> {
    let graph = builtin_graph(&args.graph)?;
    let lp = build_lp(&graph, &args.p, args.dir)?;
    let sol = solve(&lp)?;
    let measure = sol.measure(&lp)?;
    let symmetrized = measure.symmetrize()?.connectivity_probability()?;
    let verdict = Verdict::from_bool(sol.certificate.holds() && symmetrized == sol.optimum);
    out.json(
        &format!("lp_{}_{}.json", slug(&args.graph), direction_name(args.dir)),
        &LpReport {
            graph: args.graph.clone(),
            p: r(&args.p),
            direction: args.dir,
            optimum: r(&sol.optimum),
            optimum_float: sol.optimum.to_f64(),
            certificate: sol.certificate,
            symmetrized_optimum: r(&symmetrized),
            rows: lp.rows.len(),
            dual: sol.dual.iter().map(r).collect(),
            measure: measure.to_json(),
        },
    )?;
    println!("optimum {} ({})", r(&sol.optimum), sol.optimum.to_f64());
    report(verdict, "duality certificate and symmetrized optimum");
    Ok(verdict)
}

fn lp_support(grid: Option<&Grid>, args: &LpSupportArgs, out: &mut Artifacts) -> Result<Verdict> {
    let graph = builtin_graph(&args.graph)?;
    let points = grid_or(grid, "0:1:21")?;
    let res = support_method(&graph, &args.probe, &points, args.dir)?;
    let rows: Rows = res
        .samples
        .iter()
        .map(|s| {
            vec![
                r(&s.p),
                s.valid.to_string(),
                s.singular.to_string(),
                s.value.as_ref().map(r).unwrap_or_default(),
                s.value.as_ref().map(|v| f(v.to_f64())).unwrap_or_default(),
            ]
        })
        .collect();
    out.csv(
        &format!("support_{}_{}.csv", slug(&args.graph), direction_name(args.dir)),
        &["p", "valid", "singular", "value", "value_float"],
        &rows,
    )?;
    println!(
        "probe {} optimum {}; support size {}",
        r(&res.probe),
        r(&res.probe_optimum),
        res.support.len()
    );
    for piece in &res.pieces {
        println!(
            "valid on [{}, {}] ({} points)",
            r(&piece.lo),
            r(&piece.hi),
            piece.values.len()
        );
    }
    Ok(Verdict::Pass)
}

fn check_measure(measure: &Measure<Rational>, p: &Rational, name: &str) -> Result<Vec<(String, bool)>> {
    measure.validate()?;
    let marginals = measure.marginals();
    let marginal_ok = if is_maximiser(name) {
        marginals.iter().all(|m| m <= p)
    } else {
        marginals.iter().all(|m| m >= p)
    };
    let k = independence_order(name);
    let independent = if k == 1 {
        let report = measure.check_one_independence()?;
        report.passed && report.restriction_passed
    } else {
        measure.check_k_independence(k)?.0
    };
    Ok(vec![
        ("validate".into(), true),
        (format!("{k}-independence"), independent),
        ("marginals".into(), marginal_ok),
    ])
}

fn check_vertex_measure(vbm: &VertexBasedMeasure<Rational>, p: &Rational, name: &str) -> Result<Vec<(String, bool)>> {
    vbm.validate()?;
    let marginals = vbm.edge_marginals();
    let marginal_ok = if is_maximiser(name) {
        marginals.iter().all(|m| m <= p)
    } else {
        marginals.iter().all(|m| m >= p)
    };
    let mut checks = vec![("validate".into(), true), ("marginals".into(), marginal_ok)];
    // Vertex-based measures are 1-independent by construction; small ones are
    // expanded and checked anyway.
    if vbm.graph().m() <= 16 {
        let report = vbm.to_measure()?.check_one_independence()?;
        checks.push(("1-independence".into(), report.passed && report.restriction_passed));
    }
    Ok(checks)
}

fn construct(args: &ConstructArgs, out: &mut Artifacts) -> Result<Verdict> {
    let built = named_construction(&args.name, &args.p)?;
    let file = format!("construct_{}.json", slug(&args.name));
    let checks = match &built {
        Construction::Measure(m) => {
            out.json(&file, &m.to_json())?;
            let checks = check_measure(m, &args.p, &args.name)?;
            println!("connectivity {}", r(&m.connectivity_probability()?));
            checks
        }
        Construction::Vertex(v) => {
            out.json(&file, &v.to_json_with(exact_weight))?;
            check_vertex_measure(v, &args.p, &args.name)?
        }
    };
    let mut verdict = Verdict::Pass;
    for (name, ok) in checks {
        verdict = verdict.and(report(Verdict::from_bool(ok), &name));
    }
    Ok(verdict)
}

#[derive(Serialize)]
struct CertifyReport {
    graph: String,
    p: String,
    direction: Direction,
    measure: String,
    connectivity: String,
    optimum: String,
    pass: bool,
}

fn certify(args: &CertifyArgs, out: &mut Artifacts) -> Result<Verdict> {
    let graph = builtin_graph(&args.graph)?;
    let measure = match args.measure.strip_prefix("builtin:") {
        Some(name) => match named_construction(name, &args.p)? {
            Construction::Measure(m) => m,
            Construction::Vertex(_) => bail!("{name} is vertex-based and too large for the programme"),
        },
        None => {
            let text = std::fs::read_to_string(&args.measure).with_context(|| format!("reading {}", args.measure))?;
            let json: MeasureJson = serde_json::from_str(&text).context("parsing measure JSON")?;
            Measure::<Rational>::from_json(&json)?
        }
    };
    let pass = certify_extremal(&graph, &args.p, &measure, args.dir)?;
    let optimum = solve(&build_lp(&graph, &args.p, args.dir)?)?.optimum;
    out.json(
        "certify.json",
        &CertifyReport {
            graph: args.graph.clone(),
            p: r(&args.p),
            direction: args.dir,
            measure: args.measure.clone(),
            connectivity: r(&measure.connectivity_probability()?),
            optimum: r(&optimum),
            pass,
        },
    )?;
    Ok(report(
        Verdict::from_bool(pass),
        &format!("{} is extremal on {} at p = {}", args.measure, args.graph, r(&args.p)),
    ))
}

fn pstar(args: &PstarArgs, out: &mut Artifacts) -> Result<Verdict> {
    match (&args.fiber, args.table) {
        (Some(fiber), _) => {
            let (curve, v) = fiber_curve(fiber)?;
            let x = p_star(|p| eval_closed_form(&curve, &p), v)?;
            out.csv(
                "pstar.csv",
                &["fiber", "vertices", "pstar"],
                &[vec![fiber.clone(), v.to_string(), f(x)]],
            )?;
            println!("{x:.5} ({x})");
            Ok(Verdict::Pass)
        }
        (None, Some(n_max)) => {
            let table = pstar_table(n_max)?;
            let rows: Rows = table
                .entries
                .iter()
                .map(|(name, x)| vec![name.clone(), f(*x)])
                .collect();
            out.csv("pstar_table.csv", &["fiber", "pstar"], &rows)?;
            for (name, x) in &table.entries {
                println!("{name}\t{x:.5}");
            }
            println!(
                "INFO p*(K_{n_max}) in (5/9, 0.5556): {}",
                if table.limit_consistent { "yes" } else { "no" }
            );
            Ok(report(
                Verdict::from_bool(table.complete_decreasing),
                "p*(K_n) strictly decreasing",
            ))
        }
        (None, None) => bail!("give --fiber or --table"),
    }
}

fn bound(cmd: &BoundCommand, out: &mut Artifacts) -> Result<Verdict> {
    match cmd {
        BoundCommand::Line(args) => {
            let (curve, v) = fiber_curve(&args.fiber)?;
            let fv = eval_closed_form(&curve, &args.p);
            match line_product_bound(&fv, v, &args.p, &args.alpha, args.ell)? {
                LineBound::Bound {
                    value,
                    trace,
                    cap_holds,
                    trace_product,
                } => {
                    let rows: Rows = trace
                        .iter()
                        .map(|s| vec![s.n.to_string(), r(&s.x), f(s.x.to_f64()), r(&s.y), f(s.y.to_f64())])
                        .collect();
                    out.csv("bound_line.csv", &["n", "x", "x_float", "y", "y_float"], &rows)?;
                    println!("f = {}; bound {} ({})", r(&fv), r(&value), value.to_f64());
                    let a = report(Verdict::from_bool(cap_holds), "x_n <= alpha f at every step");
                    let b = report(
                        Verdict::from_bool(trace_product >= value),
                        "recursion product dominates the bound",
                    );
                    Ok(a.and(b))
                }
                LineBound::Unverified { lhs, rhs } => {
                    out.csv("bound_line.csv", &["lhs", "rhs"], &[vec![r(&lhs), r(&rhs)]])?;
                    println!("hypothesis fails: f^2 = {} < {}", lhs.to_f64(), rhs.to_f64());
                    Ok(Verdict::Pass)
                }
            }
        }
        BoundCommand::Lattice(args) => {
            let thetas = if args.theta.is_empty() {
                vec![0.556, 0.592746]
            } else {
                args.theta.clone()
            };
            let mut rows: Rows = Vec::new();
            for &theta in &thetas {
                let (colouring, onld) = lattice_lower_bounds(theta);
                println!(
                    "theta {theta}: colouring {} ({colouring}), on/l/d {} ({onld})",
                    truncate_decimal(colouring, 4),
                    truncate_decimal(onld, 6)
                );
                rows.push(vec![
                    f(theta),
                    f(colouring),
                    truncate_decimal(colouring, 4),
                    f(onld),
                    truncate_decimal(onld, 6),
                ]);
            }
            out.csv(
                "bound_lattice.csv",
                &["theta", "colouring", "colouring_4dp", "onld", "onld_6dp"],
                &rows,
            )?;
            Ok(Verdict::Pass)
        }
        BoundCommand::KLine(args) => {
            let x = k_indep_line_threshold(args.k);
            out.csv(
                "bound_kline.csv",
                &["k", "threshold", "threshold_float"],
                &[vec![args.k.to_string(), r(&x), f(x.to_f64())]],
            )?;
            println!("{} ({})", r(&x), x.to_f64());
            Ok(Verdict::Pass)
        }
        BoundCommand::Thresholds(args) => {
            let family = match args.family.as_str() {
                "path" => Family::Path,
                "complete" => Family::Complete,
                other => bail!("family must be path or complete, got {other:?}"),
            };
            let table = threshold_table(family, args.n_max)?;
            let rows: Rows = table.entries.iter().map(|(n, p)| vec![n.to_string(), f(*p)]).collect();
            out.csv(&format!("thresholds_{}.csv", args.family), &["n", "p_n"], &rows)?;
            for (n, p) in &table.entries {
                println!("{n}\t{p:.6}");
            }
            Ok(Verdict::Pass)
        }
    }
}

fn write_stats(kind: &str, stats: &SampleStats, out: &mut Artifacts) -> Result<Verdict> {
    let freqs = stats.frequencies();
    let edges: Rows = stats
        .edges
        .iter()
        .zip(&stats.open_counts)
        .zip(freqs.iter().zip(&stats.exact_marginals))
        .map(|((((x1, y1), (x2, y2)), c), (fr, ex))| {
            vec![
                x1.to_string(),
                y1.to_string(),
                x2.to_string(),
                y2.to_string(),
                c.to_string(),
                f(*fr),
                f(*ex),
            ]
        })
        .collect();
    out.csv(
        &format!("sim_{kind}_edges.csv"),
        &["x1", "y1", "x2", "y2", "open_count", "frequency", "exact_marginal"],
        &edges,
    )?;
    let trials = stats.config.trials;
    let certs: Rows = stats
        .certificates
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                trials.to_string(),
                c.violations().to_string(),
                Verdict::from_bool(c.holds()).label().to_string(),
            ]
        })
        .collect();
    out.csv(
        &format!("sim_{kind}_certificates.csv"),
        &["certificate", "trials", "violations", "status"],
        &certs,
    )?;
    let mut header = vec!["trial"];
    header.extend(stats.certificates.iter().map(|c| c.name.as_str()));
    let samples: Rows = (0..trials as usize)
        .map(|i| {
            std::iter::once(i.to_string())
                .chain(stats.certificates.iter().map(|c| c.flags[i].to_string()))
                .collect()
        })
        .collect();
    out.csv(&format!("sim_{kind}_samples.csv"), &header, &samples)?;
    let census: Rows = stats
        .component_sizes
        .iter()
        .map(|(s, c)| vec![s.to_string(), c.to_string()])
        .collect();
    out.csv(&format!("sim_{kind}_census.csv"), &["size", "count"], &census)?;

    let mut verdict = Verdict::Pass;
    for c in &stats.certificates {
        verdict = verdict.and(report(
            Verdict::from_bool(c.holds()),
            &format!("{} ({} violations in {trials} samples)", c.name, c.violations()),
        ));
    }
    let band = stats.frequency_report(4.0);
    let sigma = (band.min_exact * (1.0 - band.min_exact) / trials as f64).sqrt();
    println!(
        "{} edge frequencies within 4 sigma of exact: {}/{}; min frequency {:.6} vs exact min {:.6} (4 sigma = {:.6})",
        if band.flagged { "FLAG" } else { "INFO" },
        band.within,
        band.edges,
        band.min_frequency,
        band.min_exact,
        4.0 * sigma
    );
    Ok(verdict)
}

fn window(seed: u64, args: &WindowArgs) -> Result<WindowConfig> {
    Ok(WindowConfig::new(args.radius, seed, args.trials)?)
}

#[derive(Serialize)]
struct EquivalenceJson {
    t: String,
    z: f64,
    exact: bool,
    state_distributions_equal: bool,
    edge_distributions_equal: bool,
    max_abs_difference: f64,
}

#[derive(Serialize)]
struct LadderJson {
    p: String,
    block_length: usize,
    window_length: usize,
    end_rungs_open: bool,
    shared_rung_open: bool,
    block_crossing: String,
    max_component: usize,
    component_bound: usize,
    marginals_hold: bool,
}

fn simulate(seed: u64, cmd: &SimulateCommand, out: &mut Artifacts) -> Result<Verdict> {
    match cmd {
        SimulateCommand::Shell(args) => {
            let stats = sample_shell_construction(&window(seed, args)?)?;
            write_stats("shell", &stats, out)
        }
        SimulateCommand::Onld { window: args, q } => {
            let stats = sample_onld_construction(&window(seed, args)?, q)?;
            println!("exact edge marginal {}", r(&(q * q + (int(1) - q) / int(2))));
            write_stats("onld", &stats, out)
        }
        SimulateCommand::Leftdown { window: args, t } => {
            let stats = sample_left_down(&window(seed, args)?, t.to_f64())?;
            let eq = couple_left_down(t)?;
            out.json(
                "sim_leftdown_equivalence.json",
                &EquivalenceJson {
                    t: r(t),
                    z: eq.z,
                    exact: eq.exact,
                    state_distributions_equal: eq.state_distributions_equal,
                    edge_distributions_equal: eq.edge_distributions_equal,
                    max_abs_difference: eq.max_abs_difference,
                },
            )?;
            let a = report(
                Verdict::from_bool(eq.holds()),
                &format!(
                    "2x2 equivalence of the two formulations ({}, z = {})",
                    if eq.exact { "exact" } else { "float" },
                    eq.z
                ),
            );
            Ok(a.and(write_stats("leftdown", &stats, out)?))
        }
        SimulateCommand::Ladder { p } => {
            let rep = ladder_window_check(p)?;
            out.json(
                "sim_ladder.json",
                &LadderJson {
                    p: r(&rep.p),
                    block_length: rep.block_length,
                    window_length: rep.window_length,
                    end_rungs_open: rep.end_rungs_open,
                    shared_rung_open: rep.shared_rung_open,
                    block_crossing: r(&rep.block_crossing),
                    max_component: rep.max_component,
                    component_bound: rep.component_bound,
                    marginals_hold: rep.marginals_hold,
                },
            )?;
            println!("N = {}, window of {} columns", rep.block_length, rep.window_length);
            let checks = [
                (
                    rep.end_rungs_open,
                    "block end rungs open with probability 1".to_string(),
                ),
                (rep.shared_rung_open, "shared rung open with probability 1".to_string()),
                (
                    rep.block_crossing == int(0),
                    format!("block crossing probability {}", r(&rep.block_crossing)),
                ),
                (
                    rep.max_component <= rep.component_bound,
                    format!(
                        "largest component {} <= 4N - 6 = {}",
                        rep.max_component, rep.component_bound
                    ),
                ),
                (rep.marginals_hold, "every edge marginal >= p".to_string()),
            ];
            Ok(checks.into_iter().fold(Verdict::Pass, |acc, (ok, what)| {
                acc.and(report(Verdict::from_bool(ok), &what))
            }))
        }
    }
}

fn extremes(grid: Option<&Grid>, out: &mut Artifacts) -> Result<Verdict> {
    let points = grid_or(grid, "0:1:101")?;
    let mut ordered = true;
    for name in ["K3", "K4", "C4", "C5"] {
        let graph = builtin_graph(name)?;
        let least = Curve::parse("f", name, 1)?;
        let greatest = Curve::parse("F", name, 1)?;
        let mut rows: Rows = Vec::new();
        for p in &points {
            let lo = eval_closed_form(&least, p);
            let hi = eval_closed_form(&greatest, p);
            let product = Measure::product(graph.clone(), p)?.connectivity_probability()?;
            ordered &= lo <= product && product <= hi;
            rows.push(vec![
                r(p),
                f(p.to_f64()),
                f(lo.to_f64()),
                f(hi.to_f64()),
                f(product.to_f64()),
            ]);
        }
        out.csv(
            &format!("extremes_{name}.csv"),
            &["p", "p_float", "f", "F", "product"],
            &rows,
        )?;
    }
    Ok(report(
        Verdict::from_bool(ordered),
        "f <= product measure <= F on every panel",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs() {
        assert_eq!(slug("line_tiling:20"), "line_tiling_20");
    }
}
