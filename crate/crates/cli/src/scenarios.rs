use std::path::PathBuf;
use std::time::Instant;

use decoherence_core::evolution::{eigenbasis_supplier, evolve_free_momentum};
use decoherence_core::numerics::{Grid1D, QuadratureRule};
use decoherence_core::observables::{
    arrival_statistics, cat_component_densities, current_series, dwell_statistics, entropy_series, expectation_series,
    position_profile_momentum, transmission_cutoff, transmission_series, visibility, ArrivalOptions,
};
use decoherence_core::spectra::{
    bouncer_position_matrix, build_harmonic_basis, BarrierSpec, BouncerBasis, ScatteringBasis, SpectralBasis,
};
use decoherence_core::states::{
    default_momentum_grid, gaussian_position_amplitude, initial_density_momentum, project_onto_basis,
};
use decoherence_core::wigner::{
    linear_evolution_residual, linear_potential_density, refined_residual, wigner_transform, LinearPotentialSpec,
    ResidualTerms,
};
use decoherence_core::{CatStateSpec, DensityMatrix, Error, InitialState, MilburnParams, Units, WavePacketSpec};
use num_complex::Complex64;

use crate::config::{EntropyBasis, Scenario, ScenarioConfig};
use crate::error::CliResult;
use crate::output::{format_number, OutputSink};

/// Time step of the Wigner residual's central difference.
const RESIDUAL_DELTA: f64 = 2e-3;
const RESIDUAL_TOLERANCE: f64 = 5e-3;

#[derive(Debug, Clone)]
pub struct RunReport {
    pub scenario: Scenario,
    pub output_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
    /// Headline numbers, also written to the metadata file.
    pub summary: Vec<(String, String)>,
}

struct Run<'a> {
    config: &'a ScenarioConfig,
    sink: OutputSink,
    summary: Vec<(String, String)>,
}

impl Run<'_> {
    fn note(&mut self, key: impl Into<String>, value: impl ToString) {
        self.summary.push((key.into(), value.to_string()));
    }

    fn warn(&mut self, w: impl Into<String>) {
        self.sink.warnings.push(w.into());
    }

    fn warn_all(&mut self, context: &str, ws: &[String]) {
        for w in ws {
            self.warn(format!("{context}: {w}"));
        }
    }

    fn params(&self, gamma_inv: f64, hbar: f64) -> CliResult<MilburnParams> {
        Ok(MilburnParams::new(gamma_inv, self.config.map_order, hbar)?)
    }
}

/// Runs a validated scenario and writes its outputs; on failure nothing is left behind.
pub fn run_scenario(config: &ScenarioConfig) -> CliResult<RunReport> {
    let started = Instant::now();
    let mut run = Run {
        config,
        sink: OutputSink::create(&config.output_dir)?,
        summary: Vec::new(),
    };
    let outcome = match config.scenario {
        Scenario::Interference => interference(&mut run),
        Scenario::Tunnel => tunnel(&mut run),
        Scenario::Bouncer => bouncer(&mut run),
        Scenario::Arrival => arrival(&mut run),
        Scenario::Entropy => entropy(&mut run),
        Scenario::Wigner => wigner(&mut run),
    }
    .and_then(|()| {
        let meta = metadata(&run, started.elapsed().as_secs_f64());
        run.sink.write_metadata("run.meta", &meta).map(|_| ())
    });
    if let Err(e) = outcome {
        run.sink.discard();
        return Err(e);
    }
    let (files, warnings) = run.sink.finish();
    Ok(RunReport {
        scenario: config.scenario,
        output_dir: config.output_dir.clone(),
        files,
        warnings,
        summary: run.summary,
    })
}

fn list(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn metadata(run: &Run<'_>, wall_time: f64) -> Vec<(String, String)> {
    let c = run.config;
    let p = &c.physics;
    let g = &c.grids;
    let kv = |k: &str, v: String| (k.to_string(), v);
    let mut out = vec![
        kv("scenario", c.scenario.to_string()),
        kv("map_order", c.map_order.to_string()),
        kv("gamma_inv_list", list(&c.gamma_inv_list)),
        kv("times.count", c.times.len().to_string()),
        kv("times.first", c.times.first().map_or("none".into(), |t| t.to_string())),
        kv("times.last", c.times.last().map_or("none".into(), |t| t.to_string())),
        kv("physics.sigma0", p.sigma0.to_string()),
        kv("physics.x0", p.x0.to_string()),
        kv("physics.p0", p.p0.to_string()),
        kv("physics.v0", p.v0.to_string()),
        kv("physics.l", p.l.to_string()),
        kv("physics.omega", p.omega.to_string()),
        kv("physics.detector_x", p.detector_x.to_string()),
        kv("physics.t_max", p.t_max.to_string()),
        kv("physics.c1", p.c1.to_string()),
        kv("physics.basis", format!("{:?}", p.basis).to_lowercase()),
        kv(
            "grids.momentum_points",
            g.momentum_points.map_or("default".into(), |n| n.to_string()),
        ),
        kv("grids.k_points", g.k_points.to_string()),
        kv("grids.x_points", g.x_points.to_string()),
        kv("grids.x_half_width", g.x_half_width.to_string()),
        kv("grids.n_max", g.n_max.to_string()),
        kv("grids.time_points", g.time_points.to_string()),
        kv("grids.r_points", g.r_points.to_string()),
        kv("grids.u_points", g.u_points.to_string()),
        kv("grids.r_max", g.r_max.to_string()),
        kv("grids.smearing_nodes", g.smearing_nodes.to_string()),
        kv("tolerance.residual", RESIDUAL_TOLERANCE.to_string()),
        kv("tolerance.residual_delta", RESIDUAL_DELTA.to_string()),
    ];
    out.extend(run.summary.iter().cloned());
    out.push(kv("wall_time_s", format!("{wall_time:.3}")));
    out.push(kv("warnings.count", run.sink.warnings.len().to_string()));
    for (i, w) in run.sink.warnings.iter().enumerate() {
        out.push(kv(&format!("warnings.{i}"), w.clone()));
    }
    out
}

fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// The state's default momentum grid, resampled when the config overrides the point count.
fn momentum_grid(state: &InitialState, units: Units, points: Option<usize>) -> CliResult<Grid1D> {
    let g = default_momentum_grid(state, units)?;
    Ok(match points {
        Some(n) => Grid1D::new(g.lower(), g.upper(), n)?,
        None => g,
    })
}

fn interference(run: &mut Run<'_>) -> CliResult<()> {
    let c = run.config;
    let p = c.physics;
    let units = Units::default();
    let cat = CatStateSpec::symmetric(p.sigma0, p.x0, p.p0, units)?;
    let state = InitialState::Cat(cat);
    let grid = momentum_grid(&state, units, c.grids.momentum_points)?;
    let rho0 = initial_density_momentum(&state, grid, units)?;
    run.warn_all("initial state", rho0.warnings());
    let xs = uniform(-c.grids.x_half_width, c.grids.x_half_width, c.grids.x_points);

    let t_names: Vec<String> = c.times.iter().map(|t| format!("P(x;t={t}) [1/length]")).collect();
    let mut header = vec!["x [length]"];
    header.extend(t_names.iter().map(String::as_str));
    for &g in &c.gamma_inv_list {
        let params = run.params(g, units.hbar)?;
        let mut columns = Vec::with_capacity(c.times.len());
        for &t in &c.times {
            let profile = position_profile_momentum(&evolve_free_momentum(&rho0, t, &params)?, &xs)?;
            run.warn_all(&format!("γ⁻¹={g} t={t}"), &profile.warnings);
            columns.push(profile.values);
        }
        let rows = (0..xs.len()).map(|i| {
            let mut row = vec![xs[i]];
            row.extend(columns.iter().map(|col| col[i]));
            row
        });
        run.sink.write_table(&format!("density_g{g}.csv"), &header, rows)?;
    }

    let t0 = units.mass * p.x0 / p.p0;
    run.note("overlap_time", t0);
    let mut rows = Vec::new();
    for &g in &c.gamma_inv_list {
        let params = run.params(g, units.hbar)?;
        let parts = cat_component_densities(&cat, &grid, &xs, t0, &params, units)?;
        let vis = visibility(&parts);
        if let Some((_, v)) = vis.iter().find(|(x, _)| x.abs() < 1e-12) {
            run.note(format!("visibility_at_0.g{g}"), format_number(*v));
        }
        rows.extend(vis.into_iter().map(|(x, v)| vec![g, x, v]));
    }
    run.sink
        .write_table("visibility.csv", &["gamma_inv [time]", "x [length]", "V [1]"], rows)?;
    Ok(())
}

fn tunnel(run: &mut Run<'_>) -> CliResult<()> {
    let c = run.config;
    let p = c.physics;
    let units = Units::default();
    let spec = WavePacketSpec::new(p.sigma0, p.x0, p.p0)?;
    let barrier = BarrierSpec::new(p.v0, p.l)?;
    let k_grid = ScatteringBasis::default_k_grid(&spec, units, c.grids.k_points)?;
    let basis = ScatteringBasis::new(barrier, k_grid, units)?;
    let cv = basis.packet_coefficients(&spec)?;
    run.warn_all("expansion", &cv.warnings);
    let rho0 = DensityMatrix::pure_eigenbasis(&cv, basis.energies(), units)?;
    let stationary = basis.stationary_transmission(&cv);
    run.note("stationary_transmission", format_number(stationary));
    run.note("coverage", format_number(cv.coverage()));

    let t_max = *c.times.last().expect("validated");
    let x_max = transmission_cutoff(&spec, &basis, t_max, units);
    run.note("x_max", x_max);
    for &g in &c.gamma_inv_list {
        let supplier = eigenbasis_supplier(rho0.clone(), run.params(g, units.hbar)?);
        let tr = transmission_series(&supplier, &basis, &c.times, x_max)?;
        run.warn_all(&format!("transmission γ⁻¹={g}"), &tr.warnings);
        let dwell = dwell_statistics(&supplier, &basis, &c.times)?;
        run.warn_all(&format!("dwell γ⁻¹={g}"), &dwell.warnings);
        run.note(
            format!("transmission_final.g{g}"),
            format_number(*tr.values.last().expect("validated")),
        );
        run.note(format!("tau_d.g{g}"), format_number(dwell.tau_d));
        run.note(format!("tau_d_tail.g{g}"), format_number(dwell.tail));
        run.note(format!("tau_d_monochromatic.g{g}"), format_number(dwell.monochromatic));
        let rows = (0..c.times.len()).map(|i| vec![c.times[i], tr.values[i], dwell.series.values[i]]);
        run.sink
            .write_table(&format!("tunnel_g{g}.csv"), &["t [time]", "P_tr [1]", "P_D [1]"], rows)?;
    }
    Ok(())
}

fn bouncer(run: &mut Run<'_>) -> CliResult<()> {
    let c = run.config;
    let p = c.physics;
    let basis = BouncerBasis::natural(c.grids.n_max)?;
    let units = basis.units;
    let spec = WavePacketSpec::new(p.sigma0, p.x0, p.p0)?;
    let cv = project_onto_basis(|z| gaussian_position_amplitude(&spec, z, units), &basis, &basis.rule()?)?;
    run.warn_all("projection", &cv.warnings);
    let rho0 = DensityMatrix::pure_eigenbasis(&cv, basis.energies.clone(), units)?;
    let zm = bouncer_position_matrix(&basis)?;
    run.warn_all("position matrix", &zm.warnings);
    let z = zm.elements.map(|v| Complex64::new(v, 0.0));
    let weights = cv.weights();
    let total: f64 = weights.iter().sum();
    let mixture: f64 = (0..weights.len())
        .map(|n| weights[n] * zm.elements[(n, n)])
        .sum::<f64>()
        / total;
    run.note("coverage", format_number(cv.coverage()));
    run.note("position_tail_mass", format_number(zm.tail_mass));
    run.note("mixture_mean_z", format_number(mixture));

    let mut columns = Vec::new();
    for &g in &c.gamma_inv_list {
        let supplier = eigenbasis_supplier(rho0.clone(), run.params(g, units.hbar)?);
        let s = expectation_series(&supplier, &z, &c.times)?;
        run.warn_all(&format!("⟨z⟩ γ⁻¹={g}"), &s.warnings);
        columns.push(s.values);
    }
    let names: Vec<String> = c
        .gamma_inv_list
        .iter()
        .map(|g| format!("<z>(gamma_inv={g}) [length]"))
        .collect();
    let mut header = vec!["t [time]"];
    header.extend(names.iter().map(String::as_str));
    let rows = (0..c.times.len()).map(|i| {
        let mut row = vec![c.times[i]];
        row.extend(columns.iter().map(|col| col[i]));
        row
    });
    run.sink.write_table("mean_z.csv", &header, rows)?;
    let rows = (0..weights.len()).map(|n| vec![(n + 1) as f64, basis.energies[n], weights[n]]);
    run.sink
        .write_table("coefficients.csv", &["n [1]", "E_n [energy]", "|c_n|^2 [1]"], rows)?;
    Ok(())
}

fn arrival(run: &mut Run<'_>) -> CliResult<()> {
    let c = run.config;
    let p = c.physics;
    let units = Units::default();
    let spec = WavePacketSpec::new(p.sigma0, p.x0, p.p0)?;
    let state = InitialState::Packet(spec);
    let grid = momentum_grid(&state, units, c.grids.momentum_points)?;
    let options = ArrivalOptions {
        units,
        time_points: c.grids.time_points,
        momentum_grid: Some(grid),
    };
    let rho0 = initial_density_momentum(&state, grid, units)?;
    let times = if c.times.is_empty() {
        uniform(0.0, p.t_max, 401)
    } else {
        c.times.clone()
    };

    let mut currents = Vec::new();
    let mut stats_rows = Vec::new();
    for &g in &c.gamma_inv_list {
        let params = run.params(g, units.hbar)?;
        let s = current_series(&rho0, p.detector_x, &times, &params)?;
        run.warn_all(&format!("current γ⁻¹={g}"), &s.warnings);
        currents.push(s.values);
        let st = arrival_statistics(&spec, &params, p.detector_x, p.t_max, &options)?;
        run.warn_all(&format!("arrival γ⁻¹={g}"), &st.warnings);
        run.note(format!("mean_t.g{g}"), format_number(st.mean_t));
        run.note(format!("variance_t.g{g}"), format_number(st.variance_t));
        run.note(format!("tail_mass.g{g}"), format_number(st.tail_mass));
        let predicted_mean = st.predicted_mean.unwrap_or(st.mean_t);
        let predicted_variance = st.predicted_variance.unwrap_or(st.variance_t);
        stats_rows.push(vec![
            g,
            st.mean_t,
            st.variance_t,
            predicted_mean,
            predicted_variance,
            st.normalization,
            st.tail_mass,
            st.current_sign_violation,
        ]);
    }
    let names: Vec<String> = c
        .gamma_inv_list
        .iter()
        .map(|g| format!("J(gamma_inv={g}) [1/time]"))
        .collect();
    let mut header = vec!["t [time]"];
    header.extend(names.iter().map(String::as_str));
    let rows = (0..times.len()).map(|i| {
        let mut row = vec![times[i]];
        row.extend(currents.iter().map(|col| col[i]));
        row
    });
    run.sink.write_table("current.csv", &header, rows)?;
    run.sink.write_table(
        "arrival.csv",
        &[
            "gamma_inv [time]",
            "mean_t [time]",
            "variance_t [time^2]",
            "predicted_mean [time]",
            "predicted_variance [time^2]",
            "normalization [1]",
            "tail_mass [1]",
            "sign_violation [1]",
        ],
        stats_rows,
    )?;
    Ok(())
}

fn entropy(run: &mut Run<'_>) -> CliResult<()> {
    let c = run.config;
    let p = c.physics;
    let spec = WavePacketSpec::new(p.sigma0, p.x0, p.p0)?;
    let rho0 = match p.basis {
        EntropyBasis::Bouncer => {
            let basis = BouncerBasis::natural(c.grids.n_max)?;
            let cv = project_onto_basis(
                |z| gaussian_position_amplitude(&spec, z, basis.units),
                &basis,
                &basis.rule()?,
            )?;
            run.warn_all("projection", &cv.warnings);
            DensityMatrix::pure_eigenbasis(&cv, basis.energies.clone(), basis.units)?
        }
        EntropyBasis::Harmonic => {
            let units = Units::default();
            let basis = build_harmonic_basis(p.omega, c.grids.n_max, units)?;
            let reach = p.x0.abs() + 12.0 * p.sigma0 + 12.0 * (units.hbar / (units.mass * p.omega)).sqrt();
            let rule = QuadratureRule::simpson(-reach, reach, 4001)?;
            let cv = project_onto_basis(|x| gaussian_position_amplitude(&spec, x, units), &basis, &rule)?;
            run.warn_all("projection", &cv.warnings);
            DensityMatrix::pure_eigenbasis(&cv, basis.energies.clone(), units)?
        }
    };
    let hbar = rho0.units().hbar;
    let mut columns = Vec::new();
    for &g in &c.gamma_inv_list {
        let s = entropy_series(&rho0, &run.params(g, hbar)?, &c.times)?;
        run.warn_all(&format!("entropy γ⁻¹={g}"), &s.warnings);
        for key in ["s_l0", "initial_slope", "short_time_slope", "fitted_initial_slope"] {
            if let Some(v) = s.metadata.get(key) {
                run.note(format!("{key}.g{g}"), v);
            }
        }
        columns.push(s.values);
    }
    let names: Vec<String> = c
        .gamma_inv_list
        .iter()
        .map(|g| format!("S_L(gamma_inv={g}) [1]"))
        .collect();
    let mut header = vec!["t [time]"];
    header.extend(names.iter().map(String::as_str));
    let rows = (0..c.times.len()).map(|i| {
        let mut row = vec![c.times[i]];
        row.extend(columns.iter().map(|col| col[i]));
        row
    });
    run.sink.write_table("entropy.csv", &header, rows)?;
    Ok(())
}

fn wigner(run: &mut Run<'_>) -> CliResult<()> {
    let c = run.config;
    let p = c.physics;
    let gr = c.grids;
    let units = Units::default();
    let spec = WavePacketSpec::new(p.sigma0, p.x0, p.p0)?;
    let state = InitialState::Packet(spec);
    let force = LinearPotentialSpec { c1: p.c1 };
    let t_last = *c.times.last().expect("validated") + RESIDUAL_DELTA;
    let width = spec.momentum_width(units);

    // momenta drift by -c1 t; positions spread and fall
    let drift = p.c1 * t_last / units.mass;
    let (p_lo, p_hi) = (p.p0.min(p.p0 - drift), p.p0.max(p.p0 - drift));
    let grid = Grid1D::new(
        p_lo - 10.0 * width,
        p_hi + 10.0 * width,
        gr.momentum_points.unwrap_or(321),
    )?;
    let u_grid = Grid1D::new(p_lo - 6.0 * width, p_hi + 6.0 * width, gr.u_points)?;
    let reach = 7.0 * p.sigma0
        + (p.p0.abs() * t_last + 0.5 * p.c1.abs() * t_last * t_last) / units.mass
        + 4.0 * units.hbar * t_last / (2.0 * units.mass * p.sigma0);
    let r_grid = Grid1D::new(p.x0 - reach, p.x0 + reach, gr.r_points)?;

    for &g in &c.gamma_inv_list {
        let params = run.params(g, units.hbar)?;
        let snapshot = |t: f64| -> decoherence_core::Result<_> {
            let rho = linear_potential_density(&state, grid, units, force, t, &params, gr.smearing_nodes)?;
            wigner_transform(&rho, r_grid, u_grid, gr.r_max)
        };
        for &t in &c.times {
            let field = snapshot(t)?;
            run.warn_all(&format!("W γ⁻¹={g} t={t}"), &field.warnings);
            run.note(format!("norm.g{g}.t{t}"), format_number(field.norm()));
            run.note(format!("min_w.g{g}.t{t}"), format_number(field.min()));
            run.sink.write_field(&format!("wigner_g{g}_t{t}.csv"), &field)?;
            if t < RESIDUAL_DELTA {
                run.warn(format!(
                    "γ⁻¹={g} t={t}: too close to 0 for a central-difference residual"
                ));
                continue;
            }
            let residual = |f: &[_; 3], d: f64| {
                linear_evolution_residual(f, d, force, &params, units.mass, ResidualTerms::default())
            };
            match refined_residual(snapshot, t, RESIDUAL_DELTA, RESIDUAL_TOLERANCE, residual) {
                Ok(r) => {
                    run.note(format!("residual.g{g}.t{t}"), format_number(r.fine));
                    if r.fine > RESIDUAL_TOLERANCE {
                        run.warn(format!("γ⁻¹={g} t={t}: residual {:.3e} above tolerance", r.fine));
                    }
                }
                Err(Error::GridTooCoarse(msg)) => run.warn(format!("γ⁻¹={g} t={t}: {msg}")),
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(())
}
