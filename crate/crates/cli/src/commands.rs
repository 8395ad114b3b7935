use gjl_core::counterexample::{build_h, family_norm, jets_at_origin, obstruction_demo};
use gjl_core::jet_propagation::{
    propagate, Propagation, COMPATIBILITY_TOL, NEAR_RESONANCE_TOL, RESONANCE_TOL,
};
use gjl_core::pde_crosscheck::{
    crosscheck_report, solve_geodesic, GridShape, GridSolution, MAX_NEWTON,
};
use gjl_core::poly_ops::PolyBasis;
use gjl_core::second_jet::{
    classify_boundary, ode_residual, solve_bvp, SecondJetBoundary, SecondJetPath, CLASSIFY_TOL,
    ODE_RESIDUAL_TOL,
};
use gjl_core::{Error, Result, TimeGrid};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::spec::{PotentialSpec, ProblemSpec};

/// Everything needed to reproduce a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Config {
    SecondJet {
        a0: f64,
        b0: f64,
        a1: f64,
        b1: f64,
        nodes: usize,
    },
    Propagate {
        problem: ProblemSpec,
        max_order: usize,
        nodes: usize,
    },
    Counterexample {
        n: usize,
        nodes: usize,
        norm_b: Option<usize>,
    },
    PdeCheck {
        problem: ProblemSpec,
        nt: usize,
        nx: usize,
        ny: usize,
        delta: Vec<f64>,
        reference_nodes: usize,
    },
}

/// Series for the optional plot: `t, a, b, sigma2`.
pub struct PlotData {
    pub title: String,
    pub t: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub sigma2: Vec<Option<f64>>,
}

pub struct Outcome {
    pub result: Value,
    pub plot: Option<PlotData>,
    pub grid: Option<GridSolution>,
    /// A report that still signals failure, e.g. unconnectable data.
    pub error: Option<Error>,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Self {
            result,
            plot: None,
            grid: None,
            error: None,
        }
    }
}

pub fn tolerances() -> Value {
    json!({
        "classify": CLASSIFY_TOL,
        "ode_residual": ODE_RESIDUAL_TOL,
        "resonance": RESONANCE_TOL,
        "near_resonance": NEAR_RESONANCE_TOL,
        "compatibility": COMPATIBILITY_TOL,
        "pde_newton_max_iterations": MAX_NEWTON,
        "pde_residual": "1e-9 * (1 + delta)",
    })
}

pub fn run(config: &Config) -> Result<Outcome> {
    match config {
        Config::SecondJet {
            a0,
            b0,
            a1,
            b1,
            nodes,
        } => second_jet(*a0, *b0, *a1, *b1, *nodes),
        Config::Propagate {
            problem,
            max_order,
            nodes,
        } => run_propagate(problem, *max_order, *nodes),
        Config::Counterexample { n, nodes, norm_b } => counterexample(*n, *nodes, *norm_b),
        Config::PdeCheck {
            problem,
            nt,
            nx,
            ny,
            delta,
            reference_nodes,
        } => pde_check(
            problem,
            GridShape::new(*nt, *nx, *ny)?,
            delta,
            *reference_nodes,
        ),
    }
}

fn nodewise_sigma2(path: &SecondJetPath) -> Vec<f64> {
    let z = path.z();
    (0..z.values().len())
        .map(|i| path.a_prime.values()[i] * path.b_prime.values()[i] / z.values()[i].powi(2))
        .collect()
}

fn path_plot(title: String, path: &SecondJetPath) -> PlotData {
    PlotData {
        title,
        t: path.grid().nodes().to_vec(),
        a: path.a.values().to_vec(),
        b: path.b.values().to_vec(),
        sigma2: nodewise_sigma2(path).into_iter().map(Some).collect(),
    }
}

fn second_jet(a0: f64, b0: f64, a1: f64, b1: f64, nodes: usize) -> Result<Outcome> {
    let boundary = SecondJetBoundary::new(a0, b0, a1, b1)?;
    let grid = TimeGrid::new(nodes)?;
    if let Err(e @ Error::NotConnectable { violated }) = classify_boundary(&boundary) {
        let mut out = Outcome::ok(json!({ "connectable": false, "violated": violated }));
        out.error = Some(e);
        return Ok(out);
    }
    let path = solve_bvp(&boundary, &grid)?;
    let mut result = json!({
        "connectable": true,
        "class": path.class,
        "t": grid.nodes(),
        "a": path.a.values(),
        "b": path.b.values(),
        "a_prime": path.a_prime.values(),
        "b_prime": path.b_prime.values(),
        "sigma1": path.sigma1.values(),
        "sigma2": path.sigma2,
        "sigma2_nodes": nodewise_sigma2(&path),
        "ode_residual": ode_residual(&path),
        "swapped_axes": path.swapped_axes,
    });
    if let Some(eps) = path.epsilon {
        result["epsilon"] = json!(eps);
    }
    if let Some(h) = path.hyperbola {
        result["hyperbola"] = json!(h);
    }
    let mut out = Outcome::ok(result);
    out.plot = Some(path_plot("second jets".into(), &path));
    Ok(out)
}

fn run_propagate(problem: &ProblemSpec, max_order: usize, nodes: usize) -> Result<Outcome> {
    let grid = TimeGrid::new(nodes)?;
    let phi0 = problem.phi0.jets(max_order)?;
    let phi1 = problem.phi1.jets(max_order)?;
    let outcome = propagate(&phi0, &phi1, max_order, &grid)?;
    let h = outcome.hierarchy();
    let orders: Vec<Value> = h
        .orders
        .iter()
        .map(|(degree, series)| {
            let basis = PolyBasis::new(*degree, gjl_core::poly_ops::Parity::EvenEven)
                .expect("stored degrees are even");
            json!({
                "degree": degree,
                "monomials": basis.monomials(),
                "coefficients": series.iter().map(|s| s.values()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut result = json!({
        "outcome": match outcome { Propagation::Complete(_) => "complete", Propagation::Obstructed { .. } => "obstructed" },
        "class": h.path2.class,
        "t": grid.nodes(),
        "second_jet": { "a": h.path2.a.values(), "b": h.path2.b.values(), "sigma2": h.path2.sigma2 },
        "orders": orders,
        "diagnostics": h.diagnostics,
    });
    if let Some(eps) = h.path2.epsilon {
        result["epsilon"] = json!(eps);
    }
    if let Some(report) = outcome.obstruction() {
        result["obstruction"] = json!(report);
    }
    let mut out = Outcome::ok(result);
    out.plot = Some(path_plot("second jets".into(), &h.path2));
    Ok(out)
}

fn counterexample(n: usize, nodes: usize, norm_b: Option<usize>) -> Result<Outcome> {
    let grid = TimeGrid::new(nodes)?;
    let demo = obstruction_demo(n, &grid)?;
    let mut result = serde_json::to_value(&demo).map_err(|e| Error::Internal(e.to_string()))?;
    if let Some(b) = norm_b {
        result["family_norm"] = json!({ "b": b, "value": family_norm(n, b)? });
    }
    let (a1, b1) = jets_at_origin(&build_h(n)?, 2)?.second_jet();
    let path = solve_bvp(&SecondJetBoundary::new(0.0, 0.0, a1, b1)?, &grid)?;
    let mut out = Outcome::ok(result);
    out.plot = Some(path_plot(format!("second jets joining 0 to h_{n}"), &path));
    Ok(out)
}

fn pde_check(
    problem: &ProblemSpec,
    shape: GridShape,
    delta: &[f64],
    reference_nodes: usize,
) -> Result<Outcome> {
    if problem.phi0 != PotentialSpec::Zero {
        return Err(Error::InvalidArgument(
            "pde-check solves from phi0 = 0; give phi0 as {\"kind\": \"zero\"} or omit it".into(),
        ));
    }
    let phi1 = problem.phi1.potential()?;
    let (a1, b1) = jets_at_origin(&phi1, 2)?.second_jet();
    let reference = solve_bvp(
        &SecondJetBoundary::new(0.0, 0.0, a1, b1)?,
        &TimeGrid::new(reference_nodes)?,
    )?;
    let sol = solve_geodesic(&phi1, shape, delta)?;
    let report = crosscheck_report(&sol, &reference);
    let mut result = serde_json::to_value(&report).map_err(|e| Error::Internal(e.to_string()))?;
    result["solver"] = json!({
        "newton_iterations": sol.newton_iterations,
        "linear_iterations": sol.linear_iterations,
        "min_nondegeneracy": sol.min_nondegeneracy,
        "residual_norm": sol.residual_norm,
    });
    result["reference_class"] = json!(reference.class);
    if reference.epsilon.is_none() {
        result["note"] = json!("reference path has no epsilon (not space-like)");
    }
    let n = report.t.len();
    let mut sigma2 = vec![None; n];
    for (i, v) in report.sigma2.iter().enumerate() {
        sigma2[i + 1] = Some(*v);
    }
    let plot = PlotData {
        title: format!("grid second jets, delta = {:e}", sol.delta),
        t: report.t.clone(),
        a: report.a.clone(),
        b: report.b.clone(),
        sigma2,
    };
    let mut out = Outcome::ok(result);
    out.plot = Some(plot);
    out.grid = Some(sol);
    Ok(out)
}
