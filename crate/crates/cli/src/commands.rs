use std::fs;
use std::path::Path;

use forestcalc::access::{
    accessibility_measures, axiom_check, judge_monotonicity, monotonicity_delta,
    monotonicity_sweep, AxiomRecord, MeasureKind,
};
use forestcalc::digraph::dimension_fixture;
use forestcalc::forest::{char_poly_coeffs, gershgorin, q_tau_all_routes, qtau_routes};
use forestcalc::ginv::{
    group_inverse, group_inverse_limit, group_inverse_routes, moore_penrose, penrose_report,
};
use forestcalc::markov::{cesaro_limit, observation_matrix, related_chain, simulate_observation};
use forestcalc::oracle::{dense_forest_checks, enumerate_out_forests, oracle_qk};
use forestcalc::{
    analyze_structure, forest_sequence, parse_digraph, Error, Rational, Scalar, WeightedDigraph,
};
use serde_json::{json, Value};

use crate::args::{Command, MeasureArgs};
use crate::render::Report;
use crate::CliError;

type Outcome = Result<Report, CliError>;

fn load(path: &Path) -> Result<WeightedDigraph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_digraph(&text)?)
}

fn vertex(g: &WeightedDigraph, label: &str) -> Result<usize, CliError> {
    g.index_of(label)
        .ok_or_else(|| CliError::Usage(format!("no vertex named '{label}'")))
}

fn names(g: &WeightedDigraph, set: &[usize]) -> Vec<String> {
    set.iter().map(|&v| g.labels()[v].clone()).collect()
}

fn exact<T: Scalar>(xs: &[T]) -> Vec<String> {
    xs.iter().map(Scalar::to_exact_string).collect()
}

fn require_positive(name: &'static str, x: &Rational) -> Result<(), CliError> {
    if *x <= Rational::from_integer(0.into()) {
        return Err(Error::OutOfRange {
            name,
            value: x.to_string(),
            expected: format!("{name} > 0"),
        }
        .into());
    }
    Ok(())
}

pub fn run<T: Scalar>(command: &Command) -> Outcome {
    match command {
        Command::Info(input) => info(&load(&input.path)?),
        Command::Forests(input) => forests::<T>(&load(&input.path)?),
        Command::Qtau { input, tau, route } => {
            require_positive("tau", tau)?;
            qtau::<T>(&load(&input.path)?, &T::from_rational(tau), route.as_deref())
        }
        Command::Limit { input, schedule } => {
            for tau in schedule {
                require_positive("tau", tau)?;
            }
            let schedule: Vec<T> = schedule.iter().map(T::from_rational).collect();
            limit(&load(&input.path)?, &schedule)
        }
        Command::Ginv { input, alpha, route } => {
            ginv::<T>(&load(&input.path)?, &T::from_rational(alpha), route.as_deref())
        }
        Command::Pinv(input) => pinv::<T>(&load(&input.path)?),
        Command::Markov {
            input,
            alpha,
            q,
            trials,
            seed,
            partitions,
            start,
            cesaro,
        } => {
            let g = load(&input.path)?;
            let start = match start {
                Some(label) => vertex(&g, label)?,
                None => 0,
            };
            let sim = (*trials > 0).then_some((*trials, *seed, *partitions, start));
            markov::<T>(&g, &T::from_rational(alpha), &T::from_rational(q), sim, *cesaro)
        }
        Command::Access(m) => access::<T>(m),
        Command::Axioms {
            measure,
            strict,
            monotonicity,
        } => axioms::<T>(measure, *strict, *monotonicity),
        Command::Delta {
            input,
            tau,
            arc,
            delta,
            strict,
        } => {
            require_positive("tau", tau)?;
            require_positive("delta", delta)?;
            let g = load(&input.path)?;
            let (tail, head) = arc
                .split_once(',')
                .ok_or_else(|| CliError::Usage(format!("--arc expects TAIL,HEAD, got '{arc}'")))?;
            let arc = (vertex(&g, tail.trim())?, vertex(&g, head.trim())?);
            delta_cmd::<T>(&g, &T::from_rational(tau), arc, delta, *strict)
        }
        Command::Fixture { n, k, k_in } => fixture(*n, *k, *k_in),
        Command::OracleVerify(input) => oracle_verify::<T>(&load(&input.path)?),
    }
}

fn info(g: &WeightedDigraph) -> Outcome {
    let s = analyze_structure(g);
    let sets = |xs: &[Vec<usize>]| xs.iter().map(|c| names(g, c)).collect::<Vec<_>>();
    let mut r = Report::default();
    r.field("vertices", g.n())
        .field("arcs", g.arcs().len())
        .field("labels", g.labels().to_vec())
        .field("out_dimension", s.out_dim)
        .field("in_dimension", s.in_dim)
        .field("strong_components", sets(&s.strong_components))
        .field("undominated_knots", sets(&s.undominated_knots))
        .field("weak_components", sets(&s.weak_components))
        .line(format!("vertices: {}  arcs: {}", g.n(), g.arcs().len()))
        .line(format!("out-forest dimension v  = {}", s.out_dim))
        .line(format!("in-forest dimension  v' = {}", s.in_dim))
        .line(format!("undominated knots: {:?}", sets(&s.undominated_knots)))
        .line(format!("strong components: {:?}", sets(&s.strong_components)));
    Ok(r)
}

fn forests<T: Scalar>(g: &WeightedDigraph) -> Outcome {
    let seq = forest_sequence::<T>(g)?;
    let labels = g.labels();
    let coeffs = char_poly_coeffs(&seq)?;
    let ger = gershgorin::<T>(g);
    let mut r = Report::default();
    r.field("out_dimension", seq.v)
        .field("sigma", exact(&seq.sigmas))
        .field("total_weight", seq.total_weight().to_exact_string())
        .field("char_poly_coefficients", exact(&coeffs))
        .field("gershgorin_intersection_is_zero", ger.intersection_is_zero)
        .line(format!("v = {}, n - v = {}", seq.v, seq.top()))
        .line(format!("sigma_0..sigma_(n-v): {}", exact(&seq.sigmas).join(", ")))
        .line(format!("total forest weight s = {}", seq.total_weight()))
        .line(format!(
            "characteristic polynomial coefficients (highest power first): {}",
            exact(&coeffs).join(", ")
        ));
    for (k, q) in seq.q.iter().enumerate() {
        r.matrix(&format!("Q_{k}"), q, labels)?;
    }
    r.matrix("jbar", &seq.jbar(), labels)?;
    Ok(r)
}

fn qtau<T: Scalar>(g: &WeightedDigraph, tau: &T, route: Option<&str>) -> Outcome {
    let seq = forest_sequence::<T>(g)?;
    let (used, q) = match route {
        Some(name) => {
            let route = qtau_routes::<T>().get(name)?;
            (vec![route.name()], route.compute(&seq, tau)?)
        }
        None => {
            let mut all = q_tau_all_routes(&seq, tau)?;
            let used = all.iter().map(|(n, _)| *n).collect();
            (used, all.swap_remove(0).1)
        }
    };
    let mut r = Report::default();
    r.field("tau", tau.to_exact_string())
        .field("routes", used.clone())
        .line(format!("tau = {tau}; routes: {}", used.join(", ")));
    r.matrix("q_tau", &q, g.labels())?;
    r.matrix("p1", &q.transpose(), g.labels())?;
    Ok(r)
}

fn limit<T: Scalar>(g: &WeightedDigraph, schedule: &[T]) -> Outcome {
    let rep = group_inverse_limit(g, schedule)?;
    let points: Vec<Value> = rep
        .points
        .iter()
        .map(|p| json!({"tau": p.tau.to_exact_string(), "distance": p.distance}))
        .collect();
    let mut r = Report::default();
    r.field("points", points)
        .field("monotone", rep.monotone())
        .field("final_distance", rep.final_distance());
    for p in &rep.points {
        r.line(format!("tau = {:<12} max |tau (Q(tau) - J̄) - L#| = {:e}", p.tau, p.distance));
    }
    r.line(format!("monotone: {}", rep.monotone()));
    r.matrix("group_inverse", &rep.group_inverse, g.labels())?;
    Ok(r)
}

fn ginv<T: Scalar>(g: &WeightedDigraph, alpha: &T, route: Option<&str>) -> Outcome {
    let x = match route {
        Some(name) => {
            let seq = forest_sequence::<T>(g)?;
            group_inverse_routes::<T>().get(name)?.compute(&seq, alpha)?
        }
        None => group_inverse(g, alpha)?,
    };
    let pen = penrose_report(&g.kirchhoff::<T>(), &x)?;
    let mut r = Report::default();
    r.field("penrose_conditions", pen.conditions.to_vec())
        .field("is_group_inverse", pen.is_group_inverse())
        .line(format!("Penrose conditions (1)-(5): {:?}", pen.conditions));
    r.matrix("group_inverse", &x, g.labels())?;
    Ok(r)
}

fn pinv<T: Scalar>(g: &WeightedDigraph) -> Outcome {
    let x = moore_penrose::<T>(g)?;
    let pen = penrose_report(&g.kirchhoff::<T>(), &x)?;
    let mut r = Report::default();
    r.field("penrose_conditions", pen.conditions.to_vec())
        .field("is_moore_penrose", pen.is_moore_penrose())
        .line(format!("Penrose conditions (1)-(5): {:?}", pen.conditions));
    r.matrix("moore_penrose", &x, g.labels())?;
    Ok(r)
}

fn markov<T: Scalar>(
    g: &WeightedDigraph,
    alpha: &T,
    q: &T,
    sim: Option<(u64, u64, usize, usize)>,
    cesaro: Option<u64>,
) -> Outcome {
    let chain = related_chain(g, alpha)?;
    let obs = observation_matrix(&chain, q)?;
    let labels = g.labels();
    let mut r = Report::default();
    r.field("alpha", alpha.to_exact_string())
        .field("q", q.to_exact_string())
        .field("tau", obs.tau.to_exact_string())
        .field("stochastic", chain.stochastic)
        .line(format!(
            "alpha = {alpha}, q = {q}: observation matrix equals Q(tau) at tau = {}",
            obs.tau
        ))
        .line(format!("P stochastic: {}", chain.stochastic));
    if let Some((trials, seed, partitions, start)) = sim {
        let row = simulate_observation(&chain, q.to_f64(), start, trials, seed, partitions)?;
        let deviation = row
            .frequencies
            .iter()
            .zip(obs.matrix.row(start))
            .map(|(f, p)| (f - p.to_f64()).abs())
            .fold(0.0, f64::max);
        r.field(
            "empirical",
            json!({
                "start": labels[start],
                "trials": trials,
                "seed": seed,
                "partitions": partitions,
                "frequencies": row.frequencies,
                "closed_form": obs.matrix.row(start).iter().map(Scalar::to_f64).collect::<Vec<_>>(),
                "max_deviation": deviation,
            }),
        )
        .line(format!(
            "simulated row {} ({trials} trials, seed {seed}): {:?}; max deviation {deviation:.5}",
            labels[start], row.frequencies
        ));
    }
    r.matrix("p", &chain.p, labels)?;
    r.matrix("observation", &obs.matrix, labels)?;
    if let Some(k) = cesaro {
        let avg = cesaro_limit(&chain, k)?;
        let seq = forest_sequence::<T>(g)?;
        let distance = avg.max_abs_diff(&seq.jbar());
        r.field("cesaro_k", k)
            .field("cesaro_distance_to_jbar", distance)
            .line(format!("Cesàro average over {k} powers: max distance to J̄ = {distance:e}"));
        r.matrix("cesaro", &avg, labels)?;
    }
    Ok(r)
}

fn measure_parameter<T: Scalar>(m: &MeasureArgs, kind: MeasureKind) -> Result<T, CliError> {
    let (value, flag) = match kind {
        MeasureKind::Forest => (&m.tau, "--tau"),
        MeasureKind::Dense => (&m.alpha, "--alpha"),
    };
    let value = value
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("measure '{}' needs {flag}", m.measure)))?;
    Ok(T::from_rational(value))
}

fn access<T: Scalar>(m: &MeasureArgs) -> Outcome {
    let g = load(&m.input.path)?;
    let measure = accessibility_measures::<T>().get(&m.measure)?;
    let param = measure_parameter::<T>(m, measure.kind())?;
    let a = measure.matrices(&g, &param)?;
    let mut r = Report::default();
    r.field("measure", measure.name())
        .field("parameter", param.to_exact_string())
        .line(format!("{} accessibility at {}", measure.name(), param));
    if let Some((b, b_rev)) = &a.alpha_bound {
        r.field("alpha_bound", b.to_exact_string())
            .field("alpha_bound_reverse", b_rev.to_exact_string())
            .line(format!("admissible alpha: 0 < alpha < min({b}, {b_rev})"));
    }
    r.matrix("p1", &a.p1, g.labels())?;
    r.matrix("p2", &a.p2, g.labels())?;
    r.matrix("p3", &a.p3, g.labels())?;
    Ok(r)
}

fn record_line(rec: &AxiomRecord) -> String {
    let mut s = format!(
        "{:<3} {:<20} {:<3} {:<9} {}",
        rec.measure,
        rec.condition.to_string(),
        rec.item,
        if rec.strict { "strict" } else { "nonstrict" },
        rec.verdict
    );
    if let Some(w) = &rec.witness {
        s.push_str(&format!(
            "  witness ({}) values [{}]",
            w.vertices.join(","),
            w.exact.join(", ")
        ));
        if let Some(note) = &w.note {
            s.push_str(&format!(" ({note})"));
        }
        if rec.violations.len() > 1 {
            s.push_str(&format!("  [{} violations]", rec.violations.len()));
        }
    }
    s
}

fn axioms<T: Scalar>(m: &MeasureArgs, strict: bool, monotonicity: bool) -> Outcome {
    let g = load(&m.input.path)?;
    let measure = accessibility_measures::<T>().get(&m.measure)?;
    let param = measure_parameter::<T>(m, measure.kind())?;
    let a = measure.matrices(&g, &param)?;
    let mut report = axiom_check(&a, &g, strict)?;
    if monotonicity {
        report
            .records
            .extend(monotonicity_sweep(&*measure, &g, &param, strict)?.records);
    }
    let mut r = Report::default();
    r.field("measure", measure.name())
        .field("parameter", param.to_exact_string())
        .field("strict", strict)
        .field("records", serde_json::to_value(&report.records)?);
    for rec in &report.records {
        r.line(record_line(rec));
    }
    Ok(r)
}

fn delta_cmd<T: Scalar>(
    g: &WeightedDigraph,
    tau: &T,
    arc: (usize, usize),
    delta: &Rational,
    strict: bool,
) -> Outcome {
    let d = monotonicity_delta::<T>(g, tau, arc, delta)?;
    let perturbed = g.with_increased_weight(arc.0, arc.1, delta)?;
    let mut records = judge_monotonicity("P1", &d.closed_p1, &perturbed, arc, strict)?;
    records.extend(judge_monotonicity("P2", &d.closed_p2, &perturbed, arc, strict)?);
    let labels = g.labels();
    let mut r = Report::default();
    r.field("arc", vec![labels[arc.0].clone(), labels[arc.1].clone()])
        .field("tau", tau.to_exact_string())
        .field("delta", delta.to_string())
        .field("denominator_p1", d.denominator_p1.to_exact_string())
        .field("denominator_p2", d.denominator_p2.to_exact_string())
        .field("closed_form_matches_recomputation", true)
        .field("monotonicity", serde_json::to_value(&records)?)
        .line(format!(
            "arc {} -> {}, tau = {tau}, delta = {delta}: closed forms match recomputation",
            labels[arc.0], labels[arc.1]
        ));
    for rec in &records {
        r.line(record_line(rec));
    }
    r.matrix("numerator_p1", &d.numerator_p1, labels)?;
    r.matrix("delta_p1", &d.closed_p1, labels)?;
    r.matrix("numerator_p2", &d.numerator_p2, labels)?;
    r.matrix("delta_p2", &d.closed_p2, labels)?;
    Ok(r)
}

fn fixture(n: usize, k: usize, k_in: usize) -> Outcome {
    let g = dimension_fixture(n, k, k_in)?;
    let s = analyze_structure(&g);
    let edges = g.to_edge_list();
    let mut r = Report::default();
    r.field("edge_list", edges.clone())
        .field("out_dimension", s.out_dim)
        .field("in_dimension", s.in_dim)
        .line(edges.trim_end().to_string());
    Ok(r)
}

fn oracle_verify<T: Scalar>(g: &WeightedDigraph) -> Outcome {
    let seq = forest_sequence::<T>(g)?;
    let top = seq.top();
    let mut q_ok = true;
    let mut sigma_ok = true;
    for k in 0..=top {
        let oracle = oracle_qk(g, k)?.map(T::from_rational);
        q_ok &= oracle.approx_eq(&seq.q[k]);
        let family = enumerate_out_forests(g, k)?;
        sigma_ok &= T::from_rational(&family.total_weight).near(&seq.sigmas[k], 1.0);
    }
    let dense = dense_forest_checks(g)?;
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let mut r = Report::default();
    r.field("n_minus_v", top)
        .field("q_k_equivalence", q_ok)
        .field("sigma_equivalence", sigma_ok)
        .field("dense_forest_properties", dense.holds())
        .line(format!(
            "Q_k equivalence: {} for k=0..n−v (n−v = {top})",
            verdict(q_ok)
        ))
        .line(format!("sigma_k equivalence: {}", verdict(sigma_ok)))
        .line(format!("dense forest properties: {}", verdict(dense.holds())));
    if !(q_ok && sigma_ok && dense.holds()) {
        return Err(CliError::Check(r));
    }
    Ok(r)
}
