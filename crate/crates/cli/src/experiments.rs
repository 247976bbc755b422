use anyhow::{Context, Result};
use rayon::prelude::*;
use serde_json::json;
use sgkdv::estimates::{
    beta_functionals, ensemble_partials, kato_constant_probe, probe_data, strichartz_constant_probe,
    EnsembleModel, EnsemblePartial, KatoTriple, ProbeConfig, ProbeResult, Refinement,
    StrichartzPair,
};
use sgkdv::io::{fmt_f64, write_csv, write_ensemble_csv, write_path_binary, write_trace_binary, write_trace_csv};
use sgkdv::manifest::{Experiment, Manifest};
use sgkdv::noise::{convolution_trace, sample_path_stream, tail_trace, Envelope, NoiseSpec};
use sgkdv::oscillatory::{envelope_bound, fit_decay_slope, osc_integral_i, Branch, OscQuery};
use sgkdv::scattering::{decompose, scattering_diagnostic, solve_v, PullbackSpace};
use sgkdv::solver::{ito_drift, simulate_deterministic, simulate_stochastic};

use crate::{Gate, Output};

type Outcome = (Vec<Gate>, serde_json::Value);

pub(crate) fn dispatch(m: &Manifest, out: &Output) -> Result<Outcome> {
    match m.experiment {
        Experiment::Simulate => simulate(m, out),
        Experiment::Oscint => oscint(m, out),
        Experiment::ProbeKato | Experiment::ProbeStrichartz => probes(m, out),
        Experiment::Beta => beta(m, out),
        Experiment::Ensemble => ensemble(m, out),
        Experiment::Scatter => scatter(m, out),
    }
}

fn is_silent(spec: &NoiseSpec) -> bool {
    spec.envelope == Envelope::Zero || spec.phi.l2_norm() == 0.0
}

fn simulate(m: &Manifest, out: &Output) -> Result<Outcome> {
    let cfg = m.solver_config()?;
    let u0 = m.initial_field()?;
    let spec = m.noise_spec()?;
    let stride = m.solver.stride;
    let silent = is_silent(&spec);
    let trace = if silent {
        simulate_deterministic(&u0, &cfg, m.steps(), stride)?
    } else {
        let path = sample_path_stream(spec.seed, 0, cfg.dt, m.steps())?;
        let mut bin = Vec::new();
        let sidecar = write_path_binary(&mut bin, &path)?;
        out.write("path.bin", &bin)?;
        out.json("path.json", &sidecar)?;
        simulate_stochastic(&u0, &cfg, &spec, &path, stride)?
    };
    out.with("trace.csv", |w| write_trace_csv(w, &trace))?;
    out.with("trace.bin", |w| write_trace_binary(w, &trace))?;
    let reports = trace
        .snapshots()
        .iter()
        .zip(trace.times())
        .map(|(u, t)| ito_drift(u, &cfg, &spec, t))
        .collect::<sgkdv::Result<Vec<_>>>()?;
    out.with("energy.csv", |w| {
        write_csv(
            w,
            &["t", "mass", "energy", "f1", "f2", "drift"],
            trace.times().iter().zip(&reports).map(|(t, r)| {
                [*t, r.mass, r.energy, r.f1, r.f2, r.drift].iter().map(|v| fmt_f64(*v)).collect()
            }),
        )
    })?;

    let first = &reports[0];
    let last = reports.last().expect("nonempty trace");
    let mut gates = Vec::new();
    let even = m.solver.k.is_multiple_of(2);
    if silent {
        let dm = (last.mass - first.mass).abs() / first.mass.max(f64::MIN_POSITIVE);
        gates.push(Gate::new("mass-conserved", dm <= 1e-8, format!("relative mass drift {dm:.3e}")));
        if even {
            let de = (last.energy - first.energy).abs() / first.energy.abs().max(f64::MIN_POSITIVE);
            gates.push(Gate::new("energy-conserved", de <= 1e-6, format!("relative energy drift {de:.3e}")));
        }
    }
    if even && m.solver.sign == sgkdv::solver::Sign::Defocusing {
        let min = reports.iter().map(|r| r.energy).fold(f64::INFINITY, f64::min);
        gates.push(Gate::new("energy-nonnegative", min >= 0.0, format!("smallest energy {min:.6e}")));
    }
    Ok((
        gates,
        json!({
            "stochastic": !silent,
            "snapshots": trace.len(),
            "t_end": trace.t_end(),
            "initial": first,
            "final": last,
        }),
    ))
}

fn oscint(m: &Manifest, out: &Output) -> Result<Outcome> {
    let o = &m.oscint;
    let mut gates = Vec::new();
    let mut fits = Vec::new();
    for &[b, alpha] in &o.pairs {
        let fit = fit_decay_slope(b, alpha, Branch::designated(alpha), &o.x)
            .with_context(|| format!("decay fit for b = {b}, alpha = {alpha}"))?;
        let bound = envelope_bound(b, alpha, &o.x)?;
        let values = bound
            .points
            .par_iter()
            .map(|&x| osc_integral_i(&OscQuery::new(b, alpha, x)))
            .collect::<sgkdv::Result<Vec<_>>>()?;
        let mut rows: Vec<(f64, Vec<String>)> = Vec::new();
        let mut holds = true;
        for ((x, r), env) in bound.points.iter().zip(&values).zip(&bound.envelopes) {
            let cap = bound.bound(*x);
            holds &= r.value.norm() <= cap;
            let cells = [*x, r.value.re, r.value.im, r.abs_error, *env, cap];
            rows.push((*x, cells.iter().map(|v| fmt_f64(*v)).collect()));
        }
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        let name = format!("oscint_b{b}_a{alpha}.csv");
        out.with(&name, |w| {
            write_csv(
                w,
                &["x", "Re", "Im", "abs_error", "envelope", "predicted_bound"],
                rows.into_iter().map(|r| r.1),
            )
        })?;
        let gap = (fit.fitted_exponent - fit.predicted_exponent).abs();
        gates.push(Gate::new(
            format!("slope b={b} alpha={alpha}"),
            gap <= o.tolerance,
            format!("fitted {:.4}, predicted {:.4}", fit.fitted_exponent, fit.predicted_exponent),
        ));
        gates.push(Gate::new(
            format!("bound b={b} alpha={alpha}"),
            holds,
            format!("C = {:.4e}, exponent {:.4}", bound.constant, bound.exponent),
        ));
        fits.push(fit);
    }
    out.json("decay_fits.json", &fits)?;
    Ok((gates, json!({ "fits": fits })))
}

/// Per-datum ratios at the base, refined and extended resolutions.
struct ProbeRun {
    label: String,
    runs: [ProbeResult; 3],
}

fn probe_all<F>(cfg: &ProbeConfig, f: F) -> Result<[ProbeResult; 3]>
where
    F: Fn(&ProbeConfig) -> sgkdv::Result<ProbeResult>,
{
    Ok([f(cfg)?, f(&cfg.refined())?, f(&cfg.extended())?])
}

fn probes(m: &Manifest, out: &Output) -> Result<Outcome> {
    let p = &m.probe;
    let cfg = p.config()?;
    let data = probe_data(p.data_seed, p.data);
    let mut runs = Vec::new();
    if m.experiment == Experiment::ProbeKato {
        for e in &p.kato {
            let t = KatoTriple::new(e.p, e.q, e.alpha)?;
            runs.push(ProbeRun {
                label: format!("kato_p{}_q{}_a{}", t.p, t.q, t.alpha),
                runs: probe_all(&cfg, |c| kato_constant_probe(&t, &data, c))?,
            });
        }
    } else {
        for e in &p.strichartz {
            let s = StrichartzPair::from_p(e.p, e.beta)?;
            runs.push(ProbeRun {
                label: format!("strichartz_p{}_q{}_b{}", s.p, s.q, s.beta),
                runs: probe_all(&cfg, |c| strichartz_constant_probe(&s, &data, c))?,
            });
        }
    }
    let mut gates = Vec::new();
    let mut results = Vec::new();
    for r in &runs {
        let [base, refined, extended] = &r.runs;
        out.with(&format!("{}.csv", r.label), |w| {
            write_csv(
                w,
                &["datum", "center", "width", "frequency", "phase", "base", "refined", "extended"],
                data.iter().enumerate().map(|(j, d)| {
                    let mut row = vec![j.to_string()];
                    row.extend(
                        [d.center, d.width, d.frequency, d.phase, base.ratios[j], refined.ratios[j], extended.ratios[j]]
                            .iter()
                            .map(|v| fmt_f64(*v)),
                    );
                    row
                }),
            )
        })?;
        let rf = Refinement::from_ratios(base.ratio, refined.ratio, extended.ratio);
        gates.push(Gate::new(
            format!("refinement {}", r.label),
            rf.drift < p.tolerance,
            format!("ratio {:.6}, drift {:.3e}", rf.base, rf.drift),
        ));
        results.push(json!({ "label": r.label, "refinement": rf, "worst_datum": base.worst }));
    }
    Ok((gates, json!({ "config": cfg, "probes": results })))
}

fn beta(m: &Manifest, out: &Output) -> Result<Outcome> {
    let spec = m.noise_spec()?;
    let k = m.solver.k;
    let b = &m.beta;
    let per_path = (0..b.paths as u64)
        .into_par_iter()
        .map(|stream| {
            let path = sample_path_stream(spec.seed, stream, m.solver.dt, m.steps())?;
            let z = convolution_trace(&spec, &path, m.solver.stride)?;
            b.times.iter().map(|&t| beta_functionals(&z, k, t)).collect()
        })
        .collect::<sgkdv::Result<Vec<Vec<_>>>>()?;
    let mut rows = Vec::new();
    let mut monotone = true;
    let mut coincidence = 0.0f64;
    for (stream, fs) in per_path.iter().enumerate() {
        for (j, f) in fs.iter().enumerate() {
            let a = f.as_array();
            let mut row = vec![stream.to_string(), fmt_f64(f.t)];
            row.extend(a.iter().map(|v| fmt_f64(*v)));
            rows.push(row);
            if j > 0 {
                let prev = fs[j - 1].as_array();
                monotone &= (0..3).all(|i| a[i] >= prev[i] * (1.0 - 1e-12));
            }
            coincidence = coincidence.max((a[2] - a[3]).abs() / a[2].abs().max(f64::MIN_POSITIVE));
        }
    }
    out.with("beta.csv", |w| {
        write_csv(w, &["stream", "T", "alpha1", "alpha2", "alpha3", "alpha4"], rows)
    })?;
    let mut gates = vec![Gate::new(
        "alpha-monotone-in-T",
        monotone,
        "alpha1..alpha3 nondecreasing in T on every path",
    )];
    if k == 4 {
        gates.push(Gate::new(
            "k4-coincidence",
            coincidence <= 1e-9,
            format!("largest relative |alpha3 - alpha4| {coincidence:.3e}"),
        ));
    }
    let n = per_path.len() as f64;
    let means: Vec<serde_json::Value> = (0..b.times.len())
        .map(|j| {
            let mut s = [0.0; 4];
            for fs in &per_path {
                for (acc, v) in s.iter_mut().zip(fs[j].as_array()) {
                    *acc += v * v / n;
                }
            }
            json!({ "T": b.times[j], "mean_square": s })
        })
        .collect();
    Ok((gates, json!({ "paths": b.paths, "means": means })))
}

/// The reference mean of a mass-type estimator at time `t`, when there is one.
pub(crate) fn mass_reference(name: &str, m0: f64, spec: &NoiseSpec, t: f64) -> Option<f64> {
    match name {
        "mass" => Some(m0 + spec.variance(0.0, t)),
        "convolution-mass" => Some(spec.variance(0.0, t)),
        _ => None,
    }
}

/// Expected-mass gates of finished partials, plus a failure gate.
pub(crate) fn ensemble_gates(partials: &[EnsemblePartial], m0: f64, spec: &NoiseSpec) -> Result<(Vec<Gate>, Vec<serde_json::Value>)> {
    let mut gates = Vec::new();
    let mut stats = Vec::new();
    for p in partials {
        let s = p.finish()?;
        if let Some(worst) = s
            .t_grid
            .iter()
            .enumerate()
            .filter_map(|(j, &t)| {
                let r = mass_reference(&s.estimator, m0, spec, t)?;
                let tol = 3.0 * s.standard_error[j] + 1e-12 * r.abs().max(1.0);
                Some((s.mean[j] - r).abs() / tol)
            })
            .reduce(f64::max)
        {
            gates.push(Gate::new(
                format!("expected-{}", s.estimator),
                worst <= 1.0,
                format!("largest deviation {worst:.3} of the 3 SE tolerance"),
            ));
        }
        gates.push(Gate::new(
            format!("members-{}", s.estimator),
            s.failures.is_empty(),
            format!("{} failed members", s.failures.len()),
        ));
        stats.push(serde_json::to_value(&s)?);
    }
    Ok((gates, stats))
}

fn ensemble(m: &Manifest, out: &Output) -> Result<Outcome> {
    let e = &m.ensemble;
    let model = EnsembleModel {
        u0: m.initial_field()?,
        solver: m.solver_config()?,
        noise: m.noise_spec()?,
        steps: m.steps(),
        stride: m.solver.stride,
    };
    let seeds: Vec<u64> = (e.first_stream..e.first_stream + e.paths as u64).collect();
    let partials = ensemble_partials(&model, &m.estimators, &seeds)?;
    for p in &partials {
        out.json(&format!("partial-{}.json", p.estimator), p)?;
        let s = p.finish()?;
        out.with(&format!("ensemble-{}.csv", p.estimator), |w| write_ensemble_csv(w, &s))?;
    }
    let m0 = sgkdv::solver::mass(&model.u0);
    let (gates, stats) = ensemble_gates(&partials, m0, &model.noise)?;
    out.json("reference.json", &json!({ "initial_mass": m0 }))?;
    Ok((gates, json!({ "seeds": seeds, "stats": stats })))
}

fn scatter(m: &Manifest, out: &Output) -> Result<Outcome> {
    let c = &m.scatter;
    let cfg = m.solver_config()?;
    let spec = m.noise_spec()?;
    let u0 = m.initial_field()?;
    let k = m.solver.k;
    let stride = m.solver.stride;
    let space = PullbackSpace::for_degree(k);
    let horizon = m.solver.horizon;
    let tail_horizon = spec.envelope.horizon_for(horizon)?;
    let reports = (0..c.paths as u64)
        .into_par_iter()
        .map(|stream| {
            let path = sample_path_stream(spec.seed, stream, cfg.dt, m.steps())?;
            let u = simulate_stochastic(&u0, &cfg, &spec, &path, stride)?;
            let zstar = tail_trace(&spec, &path, &u.times(), tail_horizon)?;
            let ustar = decompose(&u, &zstar)?;
            let vs = c
                .v_times
                .iter()
                .map(|&t| {
                    let j = ustar.index_of(t).ok_or_else(|| {
                        sgkdv::Error::Misaligned(format!("v time {t} is not a snapshot time"))
                    })?;
                    Ok(solve_v(ustar.snapshot(j), &cfg, &spec, &path, t, stride, tail_horizon)?.v)
                })
                .collect::<sgkdv::Result<Vec<_>>>()?;
            scattering_diagnostic(&u, &c.checkpoints, space, k, &vs)
        })
        .collect::<sgkdv::Result<Vec<_>>>()?;
    let decreasing = reports
        .iter()
        .filter(|r| r.increments_decrease() && r.cauchy_increments.last().is_some_and(|&d| d <= c.final_increment))
        .count();
    let v_trend = reports.iter().filter(|r| r.v_sizes_nonincreasing()).count();
    let need = (c.pass_fraction * c.paths as f64).ceil() as usize;
    out.with("cauchy_increments.csv", |w| {
        write_csv(
            w,
            &["stream", "t", "increment"],
            reports.iter().enumerate().flat_map(|(s, r)| {
                r.cauchy_increments
                    .iter()
                    .zip(&r.t_checkpoints[1..])
                    .map(move |(d, t)| vec![s.to_string(), fmt_f64(*t), fmt_f64(*d)])
            }),
        )
    })?;
    out.json("scatter.json", &reports)?;
    let gates = vec![
        Gate::new(
            "cauchy-increments",
            decreasing >= need,
            format!("{decreasing}/{} paths decrease with final increment <= {:e}", c.paths, c.final_increment),
        ),
        Gate::new(
            "v-scattering-size",
            v_trend >= need,
            format!("{v_trend}/{} paths nonincreasing in T", c.paths),
        ),
    ];
    Ok((
        gates,
        json!({ "space": space, "tail_horizon": tail_horizon, "tail_residual": spec.phi.l2_norm().powi(2) * spec.envelope.tail_mass(tail_horizon) }),
    ))
}
