use std::f64::consts::PI;
use std::path::Path;

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use gp_core::acceptance::{run_suite, CriterionReport};
use gp_core::bogoliubov::{
    bogoliubov_energy_mf, depletion_closed_form, depletion_integral, excitation_energy, ground_state_energy_gp,
    lhy_energy_per_particle, renormalized_coefficients, EnergyGrid, Kernel, OccupationList,
};
use gp_core::fockspace::{ModeSet, SimulationConfig};
use gp_core::lattice::{
    bogoliubov_lattice_sum, bogoliubov_lattice_sum_with, cube_partial_sums, e_lambda, e_lambda_abel, sum_vs_integral_check,
    ShellTable, SumMethod,
};
use gp_core::scattering::{born_series, eta_highpass, solve_neumann, solve_zero_energy};
use gp_core::{RadialInteraction, RadialPotential};

pub use crate::output::CliError;
use crate::output::{Artifact, Body};
use crate::Format;

/// A potential given as a JSON file path or as inline JSON.
fn load_potential(arg: &str) -> Result<RadialPotential, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| CliError::Input(format!("cannot read potential file {arg}: {e}")))?
    };
    Ok(RadialPotential::from_json(&text)?)
}

/// The flags as given, plus the potential they resolved to.
fn resolved<A: Serialize>(args: &A, pot: Option<&RadialPotential>) -> Value {
    let mut v = serde_json::to_value(args).expect("flag structs serialize");
    if let (Some(p), Value::Object(map)) = (pot, &mut v) {
        map.insert("potential_spec".into(), serde_json::to_value(p.to_spec()).expect("specs serialize"));
    }
    v
}

fn with_config<A: Serialize, R: Serialize>(command: &'static str, args: &A, pot: Option<&RadialPotential>, result: &R) -> Result<Artifact, CliError> {
    let mut a = Artifact::json(command, &(), result)?;
    a.config = resolved(args, pot);
    Ok(a)
}

fn csv_with_config<A: Serialize>(
    command: &'static str,
    args: &A,
    pot: Option<&RadialPotential>,
    header: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
) -> Result<Artifact, CliError> {
    let mut a = Artifact::csv(command, &(), header, rows)?;
    a.config = resolved(args, pot);
    Ok(a)
}

fn positive(name: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Input(format!("--{name} must be positive, got {x}")))
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ScatterArgs {
    /// Potential JSON file (or inline JSON).
    #[arg(long)]
    pub potential: String,
    /// Outer radius of the f(r) profile, in units of R (CSV output).
    #[arg(long, default_value_t = 2.0)]
    pub r_out: f64,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

pub fn scatter(a: &ScatterArgs, fmt: Option<Format>) -> Result<Artifact, CliError> {
    positive("r-out", a.r_out)?;
    let pot = load_potential(&a.potential)?;
    let sol = solve_zero_energy(&pot)?;
    if fmt == Some(Format::Csv) {
        let rows = sol.f_profile(a.r_out * pot.range(), a.points).into_iter().map(|(r, f)| vec![r, f]).collect();
        return csv_with_config("scatter", a, Some(&pot), vec!["r", "f"], rows);
    }
    let identity = sol.integral_identity(&pot)?;
    let result = json!({ "a0": sol.a0, "residual": sol.residual, "integral_identity": identity });
    with_config("scatter", a, Some(&pot), &result)
}

#[derive(Debug, Args, Serialize)]
pub struct BornArgs {
    #[arg(long)]
    pub potential: String,
    /// Highest Born order (0 or 1).
    #[arg(long, default_value_t = 1)]
    pub order: usize,
}

pub fn born(a: &BornArgs) -> Result<Artifact, CliError> {
    let pot = load_potential(&a.potential)?;
    let terms = born_series(&pot, a.order)?;
    let a0 = solve_zero_energy(&pot)?;
    let sum: f64 = terms.iter().sum();
    let result = json!({ "terms": terms, "sum": sum, "a0": a0.a0, "a0_residual": a0.residual, "remainder": a0.a0 - sum });
    with_config("born", a, Some(&pot), &result)
}

#[derive(Debug, Args, Serialize)]
pub struct NeumannArgs {
    #[arg(long)]
    pub potential: String,
    #[arg(long = "N", alias = "n")]
    #[serde(rename = "N")]
    pub n: f64,
    /// Samples of f_N on [0, 1/2] (CSV output).
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

pub fn neumann(a: &NeumannArgs, fmt: Option<Format>) -> Result<Artifact, CliError> {
    let pot = load_potential(&a.potential)?;
    let sol = solve_neumann(&pot, a.n)?;
    if fmt == Some(Format::Csv) {
        let m = a.points.max(2);
        let rows = (0..m)
            .map(|i| {
                let r = 0.5 * i as f64 / (m - 1) as f64;
                vec![r, sol.f(r)]
            })
            .collect();
        return csv_with_config("neumann", a, Some(&pot), vec!["r", "f_N"], rows);
    }
    let (f, df) = sol.boundary_values();
    let result = json!({
        "N": sol.n,
        "lambda": sol.lambda,
        "N_lambda": sol.n * sol.lambda,
        "inner_range": sol.inner_range,
        "f_at_half": f,
        "df_at_half": df,
    });
    with_config("neumann", a, Some(&pot), &result)
}

#[derive(Debug, Args, Serialize)]
pub struct EtaArgs {
    #[arg(long)]
    pub potential: String,
    #[arg(long = "N", alias = "n")]
    #[serde(rename = "N")]
    pub n: f64,
    /// Keep eta on |p| >= mu (default: every nonzero momentum).
    #[arg(long)]
    pub mu: Option<f64>,
    /// Largest tabulated |p|.
    #[arg(long, default_value_t = 20.0 * PI)]
    pub pmax: f64,
}

pub fn eta(a: &EtaArgs, fmt: Option<Format>) -> Result<Artifact, CliError> {
    let pot = load_potential(&a.potential)?;
    let sol = solve_neumann(&pot, a.n)?;
    let table = eta_highpass(&sol, a.mu.unwrap_or(f64::MIN_POSITIVE), a.pmax)?;
    if fmt == Some(Format::Json) {
        let result = json!({ "l2_norm": table.l2_norm(), "table": table });
        return with_config("eta", a, Some(&pot), &result);
    }
    let rows = table
        .shells
        .iter()
        .zip(&table.multiplicity)
        .map(|((k, e), m)| vec![gp_core::scattering::EtaTable::momentum(*k), *e, *m as f64])
        .collect();
    csv_with_config("eta", a, Some(&pot), vec!["p", "eta_p", "multiplicity"], rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ElambdaMethod {
    Raw,
    Averaged,
    Abel,
}

#[derive(Debug, Args, Serialize)]
pub struct ElambdaArgs {
    /// Largest cube level M (raw and averaged methods).
    #[arg(long, default_value_t = 120)]
    pub max_level: u64,
    #[arg(long, value_enum, default_value_t = ElambdaMethod::Averaged)]
    pub method: ElambdaMethod,
    /// Damping values for the Abel method.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.4, 0.3, 0.2, 0.15])]
    pub eps: Vec<f64>,
}

pub fn elambda(a: &ElambdaArgs) -> Result<Artifact, CliError> {
    let result = match a.method {
        ElambdaMethod::Raw | ElambdaMethod::Averaged => {
            let m = if a.method == ElambdaMethod::Raw { SumMethod::Raw } else { SumMethod::Averaged };
            let r = e_lambda(a.max_level, m)?;
            let partial = cube_partial_sums(a.max_level)[a.max_level as usize];
            json!({ "e_lambda": r, "partial_sum": partial })
        }
        ElambdaMethod::Abel => json!({ "e_lambda": e_lambda_abel(&a.eps)? }),
    };
    with_config("elambda", a, None, &result)
}

#[derive(Debug, Args, Serialize)]
pub struct BogsumArgs {
    #[arg(long)]
    pub a0: f64,
    /// Shell cutoff |n|^2 (default: chosen from the sound scale).
    #[arg(long)]
    pub kmax: Option<u64>,
}

pub fn bogsum(a: &BogsumArgs) -> Result<Artifact, CliError> {
    let r = match a.kmax {
        Some(k) => bogoliubov_lattice_sum_with(a.a0, k)?,
        None => bogoliubov_lattice_sum(a.a0)?,
    };
    with_config("bogsum", a, None, &r)
}

#[derive(Debug, Args, Serialize)]
pub struct EnergyArgs {
    #[arg(long)]
    pub potential: String,
    #[arg(long = "N", alias = "n")]
    #[serde(rename = "N")]
    pub n: f64,
}

pub fn energy(a: &EnergyArgs) -> Result<Artifact, CliError> {
    let pot = load_potential(&a.potential)?;
    let e = ground_state_energy_gp(&pot, a.n)?;
    with_config("energy", a, Some(&pot), &e)
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    /// Occupations as "nx/ny/nz:count,...", momenta p = 2 pi n.
    #[arg(long)]
    pub occ: String,
    #[arg(long, conflicts_with = "potential", required_unless_present = "potential")]
    pub a0: Option<f64>,
    /// Take a0 from this potential instead.
    #[arg(long)]
    pub potential: Option<String>,
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Artifact, CliError> {
    let occ: OccupationList = a.occ.parse()?;
    let pot = a.potential.as_deref().map(load_potential).transpose()?;
    let a0 = match (&pot, a.a0) {
        (Some(p), _) => solve_zero_energy(p)?.a0,
        (None, Some(x)) => x,
        (None, None) => return Err(CliError::Usage("give --a0 or --potential".into())),
    };
    let e = excitation_energy(a0, &occ)?;
    let result = json!({ "a0": a0, "occupations": occ, "energy": e });
    with_config("spectrum", a, pot.as_ref(), &result)
}

#[derive(Debug, Args, Serialize)]
pub struct DepletionArgs {
    #[arg(long)]
    pub rho: f64,
    #[arg(long)]
    pub a0: f64,
    /// Also integrate with this potential's transform as the kernel.
    #[arg(long)]
    pub potential: Option<String>,
}

pub fn depletion(a: &DepletionArgs) -> Result<Artifact, CliError> {
    let pot = a.potential.as_deref().map(load_potential).transpose()?;
    let closed = depletion_closed_form(a.rho, a.a0);
    let constant = depletion_integral(a.rho, Kernel::Constant(8.0 * PI * a.a0))?;
    let with_potential = pot.as_ref().map(|p| depletion_integral(a.rho, Kernel::Potential(p))).transpose()?;
    let result = json!({
        "closed_form": closed,
        "integral_constant_kernel": constant,
        "relative_difference": (constant - closed).abs() / closed.abs().max(f64::MIN_POSITIVE),
        "integral_potential_kernel": with_potential,
    });
    with_config("depletion", a, pot.as_ref(), &result)
}

#[derive(Debug, Args, Serialize)]
pub struct LhyArgs {
    #[arg(long)]
    pub rho: f64,
    #[arg(long)]
    pub a0: f64,
}

pub fn lhy(a: &LhyArgs) -> Result<Artifact, CliError> {
    let e = lhy_energy_per_particle(a.rho, a.a0)?;
    let mf = bogoliubov_energy_mf(a.rho, Kernel::Constant(8.0 * PI * a.a0), EnergyGrid::Continuum)?;
    let result = json!({ "lhy": e, "mean_field_continuum": mf });
    with_config("lhy", a, None, &result)
}

#[derive(Debug, Args, Serialize)]
pub struct CoeffsArgs {
    #[arg(long)]
    pub potential: String,
    #[arg(long = "N", alias = "n")]
    #[serde(rename = "N")]
    pub n: f64,
    #[arg(long)]
    pub mu: f64,
    /// Tabulate every lattice shell with |p| <= pmax.
    #[arg(long, default_value_t = 10.0 * PI)]
    pub pmax: f64,
}

pub fn coeffs(a: &CoeffsArgs, fmt: Option<Format>) -> Result<Artifact, CliError> {
    positive("pmax", a.pmax)?;
    let pot = load_potential(&a.potential)?;
    let kmax = (a.pmax / (2.0 * PI)).powi(2).floor() as u64;
    let ps: Vec<f64> = ShellTable::new(kmax).occupied().filter(|(k, _)| *k > 0).map(|(k, _)| 2.0 * PI * (k as f64).sqrt()).collect();
    if ps.is_empty() {
        return Err(CliError::Input(format!("no lattice momenta with 0 < |p| <= {}", a.pmax)));
    }
    let table = renormalized_coefficients(&pot, a.n, a.mu, &ps)?;
    if fmt == Some(Format::Json) {
        return with_config("coeffs", a, Some(&pot), &table);
    }
    let rows = table.rows.iter().map(|r| vec![r.p, r.gamma, r.sigma, r.f, r.g, r.tau, r.omega, r.dispersion]).collect();
    csv_with_config("coeffs", a, Some(&pot), vec!["p", "gamma", "sigma", "F", "G", "tau", "sqrt(F^2-G^2)", "dispersion"], rows)
}

#[derive(Debug, Args, Serialize)]
pub struct SumVsIntegralArgs {
    #[arg(long)]
    pub a0: f64,
    /// Box scale R.
    #[arg(long)]
    pub r_scale: f64,
}

pub fn sum_vs_integral(a: &SumVsIntegralArgs) -> Result<Artifact, CliError> {
    let r = sum_vs_integral_check(a.a0, a.r_scale)?;
    with_config("sum-vs-integral", a, None, &r)
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long = "N", alias = "n")]
    #[serde(rename = "N")]
    pub n: usize,
    /// Modes are all p in 2 pi Z^3 with |p| <= pmax.
    #[arg(long, conflicts_with = "axial", required_unless_present = "axial")]
    pub pmax: Option<f64>,
    /// Use the chain {2 pi k e_1 : |k| <= K} instead of a ball.
    #[arg(long)]
    pub axial: Option<i64>,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long)]
    pub potential: String,
    /// eta is kept on |p| >= eta_mu.
    #[arg(long, default_value_t = 4.0 * PI - 1e-9)]
    pub eta_mu: f64,
    /// Low-momentum cutoff of the cubic generator (0 < nu < eta_mu).
    #[arg(long, default_value_t = 2.0 * PI + 1e-9)]
    pub nu: f64,
    /// Also apply the cubic generator and the final diagonalising transformation.
    #[arg(long)]
    pub cascade: bool,
    /// Use all total-momentum sectors instead of the zero sector.
    #[arg(long)]
    pub all_sectors: bool,
}

pub fn simulate(a: &SimulateArgs) -> Result<Artifact, CliError> {
    let pot = load_potential(&a.potential)?;
    let modes = match (a.axial, a.pmax) {
        (Some(k), _) => ModeSet::axial(k)?,
        (None, Some(p)) => ModeSet::ball(p)?,
        (None, None) => return Err(CliError::Usage("give --pmax or --axial".into())),
    };
    if a.cascade && !(a.nu > 0.0 && a.nu < a.eta_mu) {
        return Err(CliError::Input(format!("need 0 < nu < eta_mu, got nu = {}, eta_mu = {}", a.nu, a.eta_mu)));
    }
    let cfg = SimulationConfig {
        n: a.n,
        modes,
        beta: a.beta,
        kappa: a.kappa,
        potential: pot.clone(),
        eta_mu: a.eta_mu,
        nu: a.nu,
        cascade: a.cascade,
        momentum: if a.all_sectors { None } else { Some([0, 0, 0]) },
    };
    let report = gp_core::fockspace::simulate(&cfg)?;
    let mut art = with_config("simulate", a, Some(&pot), &report)?;
    if let Value::Object(map) = &mut art.config {
        map.insert("mode_labels".into(), serde_json::to_value(cfg.modes.labels()).expect("labels serialize"));
    }
    Ok(art)
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    /// "all" or a comma-separated list of criterion numbers.
    #[arg(long, default_value = "all")]
    pub suite: String,
}

pub fn check(a: &CheckArgs) -> Result<Artifact, CliError> {
    let ids: Vec<u32> = if a.suite.trim() == "all" {
        Vec::new()
    } else {
        a.suite
            .split(',')
            .map(|s| s.trim().parse::<u32>().ok().filter(|i| (1..=13).contains(i)))
            .collect::<Option<_>>()
            .ok_or_else(|| CliError::Usage(format!("--suite must be \"all\" or numbers 1..=13, got {:?}", a.suite)))?
    };
    let reports: Vec<CriterionReport> = run_suite(&ids);
    let failed = reports.iter().filter(|r| !r.passed).count();
    let mut lines: Vec<String> = reports.iter().map(CriterionReport::line).collect();
    lines.push(format!("{} passed, {failed} failed", reports.len() - failed));
    let json = serde_json::to_value(&reports).expect("reports serialize");
    Ok(Artifact {
        command: "check",
        config: serde_json::to_value(a).expect("flags serialize"),
        body: Body::Report { lines, json },
        status: if failed > 0 { 3 } else { 0 },
    })
}
