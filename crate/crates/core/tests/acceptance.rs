//! Acceptance suite. One line per criterion; exits nonzero if any fails.
//!
//! Run a subset by number: `cargo test --test acceptance -- 1 5 6`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sgkdv::estimates::{
    beta_functionals, kato_family_for_pq_order, kato_refinement, probe_data, strichartz_refinement,
    validate_kato, validate_strichartz, KatoTriple, ProbeConfig, StrichartzPair,
};
use sgkdv::noise::{
    convolution_trace, sample_path_stream, stochastic_convolution, tail_decay_probe, tail_fields,
    tail_trace, Envelope, NoiseSpec,
};
use sgkdv::oscillatory::{
    default_decay_grid, envelope_bound, fit_decay_slope, osc_integral_direct, osc_integral_i,
    osc_integral_j, osc_integral_scaled, Branch, OscQuery,
};
use sgkdv::scattering::{decompose, scattering_diagnostic, solve_v, PullbackSpace};
use sgkdv::solver::{
    energy, ground_state, ground_state_residual, mass, simulate_deterministic, simulate_stochastic,
    soliton, Sign, SolverConfig,
};
use sgkdv::{Exponent, Field, Grid};

type Outcome = Result<(bool, String), sgkdv::Error>;
type Criterion = (&'static str, fn() -> Outcome);

// ---- oracles ---------------------------------------------------------------

/// `∫_a^b (1+s)^{-2γ} ds`, γ ≠ 1/2.
fn power_square_integral(gamma: f64, a: f64, b: f64) -> f64 {
    let e = 1.0 - 2.0 * gamma;
    ((1.0 + b).powf(e) - (1.0 + a).powf(e)) / e
}

/// `‖c·e^{-x²}‖₂² = c²√(π/2)` on the line.
fn gaussian_mass(c: f64) -> f64 {
    c * c * (PI / 2.0).sqrt()
}

/// Decay exponents of `I^{b,α}`, written out from the two mechanisms.
fn exponent_oracle(b: f64, alpha: f64) -> f64 {
    if alpha <= -0.5 {
        -(1.0 + alpha)
    } else {
        (2.0 * alpha + 2.0 - b) / (2.0 * (b - 1.0))
    }
}

/// Mean and standard error.
fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

// ---- criteria --------------------------------------------------------------

fn airy_oracle() -> Outcome {
    let worst = (0..81)
        .into_par_iter()
        .map(|i| {
            let x = -20.0 + 0.5 * i as f64;
            let r = osc_integral_i(&OscQuery::new(3.0, 0.0, x))?;
            Ok((r.value.re - AIRY_TABLE[i]).abs().max(r.value.im.abs()))
        })
        .collect::<Result<Vec<f64>, sgkdv::Error>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok((worst <= 1e-6, format!("max error {worst:.2e}")))
}

fn decay_slopes() -> Outcome {
    let pairs = [
        (3.0, -0.75),
        (3.0, -0.6),
        (3.0, 0.0),
        (3.0, 0.25),
        (3.0, 0.5),
        (3.0, 1.0),
        (3.0, 1.4),
        (2.0, -0.75),
        (2.0, 0.0),
        (2.0, 0.5),
    ];
    let xs = default_decay_grid();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut ok = true;
    let mut worst_gap = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for (b, alpha) in pairs {
        let fit = fit_decay_slope(b, alpha, Branch::designated(alpha), &xs)?;
        let gap = (fit.fitted_exponent - exponent_oracle(b, alpha)).abs();
        worst_gap = worst_gap.max(gap);
        // one constant per pair, checked at the sample points and off them
        let bound = envelope_bound(b, alpha, &xs)?;
        let mut points = bound.points.clone();
        for _ in 0..20 {
            let x = 10f64.powf(rng.random_range(2.0..4.0));
            points.push(if rng.random_bool(0.5) { x } else { -x });
        }
        let ratio = points
            .par_iter()
            .map(|&x| Ok(osc_integral_i(&OscQuery::new(b, alpha, x))?.value.norm() / bound.bound(x)))
            .collect::<Result<Vec<f64>, sgkdv::Error>>()?
            .into_iter()
            .fold(0.0, f64::max);
        worst_ratio = worst_ratio.max(ratio);
        if gap > 0.1 || ratio > 1.0 {
            ok = false;
            eprintln!(
                "    b={b} alpha={alpha}: fitted {:.4}, predicted {:.4}, max |I|/bound {ratio:.3}",
                fit.fitted_exponent,
                exponent_oracle(b, alpha)
            );
        }
    }
    Ok((ok, format!("max slope gap {worst_gap:.4}, max |I|/bound {worst_ratio:.3}")))
}

fn evenness_and_scaling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let orders = [1.5, 2.0, 2.5, 3.0, 4.0];
    let mut even_ok = true;
    let mut worst_even = 0.0f64;
    for i in 0..50 {
        let b = orders[i % orders.len()];
        let alpha = rng.random_range(-0.9..(b - 1.0 - 0.1));
        let x = rng.random_range(-60.0..60.0);
        let p = osc_integral_j(&OscQuery::new(b, alpha, x))?;
        let m = osc_integral_j(&OscQuery::new(b, alpha, -x))?;
        let d = (p.value - m.value).norm();
        worst_even = worst_even.max(d);
        even_ok &= d <= 2.0 * p.abs_error.max(m.abs_error);
    }
    let mut scale_ok = true;
    let mut worst_scale = 0.0f64;
    for i in 0..20 {
        let b = [2.0, 3.0, 4.0][i % 3];
        let alpha = rng.random_range(-0.9..(b - 1.0 - 0.1));
        let x = rng.random_range(-30.0..30.0);
        let t = 10f64.powf(rng.random_range(-1.0..1.0));
        let q = OscQuery::new(b, alpha, x).at_time(t);
        let s = osc_integral_scaled(&q)?;
        let d = osc_integral_direct(&q)?;
        let gap = (s.value - d.value).norm();
        let tol = s.abs_error + d.abs_error;
        worst_scale = worst_scale.max(gap / tol);
        scale_ok &= gap <= tol;
    }
    Ok((
        even_ok && scale_ok,
        format!("max |J(x)-J(-x)| {worst_even:.1e}, max scaling gap/error {worst_scale:.3}"),
    ))
}

fn ito_isometry() -> Outcome {
    let gamma = 0.7;
    let c = 0.5;
    let grid = Grid::new(128, 40.0)?;
    let spec = NoiseSpec::new(
        Field::from_fn(&grid, |x| c * (-x * x).exp()),
        Envelope::Power { gamma },
        2025,
    )?;
    let phi2 = gaussian_mass(c);
    let mut ok = true;
    let mut notes = Vec::new();

    let times = [1.0, 5.0];
    let dt = 0.01;
    let sq = (0..2000u64)
        .into_par_iter()
        .map(|s| {
            let path = sample_path_stream(spec.seed, s, dt, 500)?;
            let z = stochastic_convolution(&spec, &path, &times)?;
            Ok(z.snapshots().iter().map(|f| f.l2_norm().powi(2)).collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<Vec<f64>>, sgkdv::Error>>()?;
    for (j, &t) in times.iter().enumerate() {
        let (m, se) = mean_se(&sq.iter().map(|v| v[j]).collect::<Vec<_>>());
        let exact = phi2 * power_square_integral(gamma, 0.0, t);
        let z = (m - exact).abs() / se;
        ok &= z <= 3.0;
        notes.push(format!("z(t={t}) {z:.2} SE"));
    }

    let tail_times = [10.0, 50.0];
    let dt = 0.05;
    let horizon = spec.envelope.horizon_for(50.0)?;
    let sq = (0..2000u64)
        .into_par_iter()
        .map(|s| {
            let path = sample_path_stream(spec.seed, 10_000 + s, dt, 1000)?;
            let z = tail_fields(&spec, &path, &tail_times, horizon)?;
            Ok(z.iter().map(|f| f.l2_norm().powi(2)).collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<Vec<f64>>, sgkdv::Error>>()?;
    for (j, &t) in tail_times.iter().enumerate() {
        let (m, se) = mean_se(&sq.iter().map(|v| v[j]).collect::<Vec<_>>());
        let exact = phi2 * (1.0 + t).powf(1.0 - 2.0 * gamma) / (2.0 * gamma - 1.0);
        let z = (m - exact).abs() / se;
        ok &= z <= 3.0;
        notes.push(format!("z*(t={t}) {z:.2} SE"));
    }

    let probe = tail_decay_probe(&spec, &[40.0, 60.0, 100.0, 160.0, 250.0, 400.0], 1000, 0.2)?;
    let gap = (probe.slope - (1.0 - 2.0 * gamma)).abs();
    ok &= gap <= 0.05;
    notes.push(format!("tail slope {:.4}", probe.slope));
    Ok((ok, notes.join(", ")))
}

fn conservation() -> Outcome {
    let grid = Grid::new(512, 60.0)?;
    let u0 = Field::from_fn(&grid, |x| 0.5 * (-0.5 * x * x).exp());
    let (m0, e0) = (mass(&u0), energy(&u0, 4, Sign::Defocusing));
    let drifts = |dt: f64| -> Result<(f64, f64), sgkdv::Error> {
        let cfg = SolverConfig::new(&grid, 4, Sign::Defocusing, dt)?;
        let steps = (1.0 / dt).round() as usize;
        let u1 = simulate_deterministic(&u0, &cfg, steps, steps)?;
        let u = u1.last();
        Ok((
            (mass(u) - m0).abs() / m0,
            (energy(u, 4, Sign::Defocusing) - e0).abs() / e0.abs(),
        ))
    };
    let (m1, e1) = drifts(0.005)?;
    let (m2, e2) = drifts(0.0025)?;
    let ok = m1 <= 1e-10 && e1 <= 1e-8 && m1 / m2 >= 8.0 && e1 / e2 >= 8.0;
    Ok((
        ok,
        format!(
            "mass {m1:.1e} -> {m2:.1e} ({:.0}x), energy {e1:.1e} -> {e2:.1e} ({:.0}x)",
            m1 / m2,
            e1 / e2
        ),
    ))
}

fn soliton_oracle() -> Outcome {
    let k = 4;
    let grid = Grid::new(1024, 80.0)?;
    // Q = A sech^m(βx), m = 2/k, β = k/2, A^k = (k+2)/2
    let (kf, m, beta) = (k as f64, 2.0 / k as f64, k as f64 / 2.0);
    let amp = ((kf + 2.0) / 2.0).powf(1.0 / kf);
    let q = |x: f64| amp / (beta * x).cosh().powf(m);
    let q2 = |x: f64| {
        let s2 = 1.0 / (beta * x).cosh().powi(2);
        amp * m * beta * beta / (beta * x).cosh().powf(m) * (m - (m + 1.0) * s2)
    };
    let analytic = grid
        .points()
        .iter()
        .map(|&x| (q2(x) - q(x) + q(x).powi(k as i32 + 1)).abs())
        .fold(0.0, f64::max);
    let agree = grid
        .points()
        .iter()
        .map(|&x| (ground_state(k, x) - q(x)).abs())
        .fold(0.0, f64::max);
    let spectral = ground_state_residual(k, &grid);
    let adopted = analytic <= 1e-10 && spectral <= 1e-10 && agree <= 1e-14;

    let u0 = soliton(k, Sign::Focusing, 1.0, 0.0, &grid)?;
    let cfg = SolverConfig::new(&grid, k, Sign::Focusing, 0.001)?;
    let u1 = simulate_deterministic(&u0, &cfg, 1000, 1000)?;
    let exact = Field::from_fn(&grid, |x| q(x - 1.0));
    let err = u1.last().sub(&exact).l2_norm();
    let moved = u1.last().sub(&u0.translate(1.0)).l2_norm();
    Ok((
        adopted && err <= 1e-4 && moved <= 1e-4,
        format!("residual {analytic:.1e} (spectral {spectral:.1e}), ‖u(1) - Q(x-1)‖ {err:.1e}"),
    ))
}

fn expected_mass() -> Outcome {
    let gamma = 0.7;
    let grid = Grid::new(128, 40.0)?;
    let u0 = Field::from_fn(&grid, |x| 0.5 * (-0.5 * x * x).exp());
    let spec = NoiseSpec::new(
        Field::from_fn(&grid, |x| 0.5 * (-x * x).exp()),
        Envelope::Power { gamma },
        31,
    )?;
    let cfg = SolverConfig::new(&grid, 4, Sign::Defocusing, 0.01)?;
    let masses = (0..1000u64)
        .into_par_iter()
        .map(|s| {
            let path = sample_path_stream(spec.seed, s, cfg.dt, 200)?;
            let u = simulate_stochastic(&u0, &cfg, &spec, &path, 50)?;
            Ok(u.snapshots().iter().map(mass).collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<Vec<f64>>, sgkdv::Error>>()?;
    // M(u0) = ‖0.5 e^{-x²/2}‖² = 0.25√π
    let m0 = 0.25 * PI.sqrt();
    let mut ok = true;
    let mut notes = Vec::new();
    for (j, t) in [(1, 0.5), (2, 1.0), (4, 2.0)] {
        let (m, se) = mean_se(&masses.iter().map(|v| v[j]).collect::<Vec<_>>());
        let exact = m0 + gaussian_mass(0.5) * power_square_integral(gamma, 0.0, t);
        let z = (m - exact).abs() / se;
        ok &= z <= 3.0;
        notes.push(format!("t={t}: {z:.2} SE"));
    }
    Ok((ok, notes.join(", ")))
}

fn admissibility_and_probes() -> Outcome {
    let inf = Exponent::Infinity;
    let f = Exponent::Finite;
    let r = Exponent::from_recip;
    // (p, q, order, truth), hand-computed from 2/p = 1/2 - 1/q, α = 2/q - 1/p
    let kato = [
        (f(5.0), f(10.0), 0.0, true),
        (inf, f(2.0), 1.0, true),
        (f(4.0), inf, -0.25, true),
        (r(0.9 / 5.0), r(1.4 / 10.0), 0.1, true),
        (f(5.0), f(10.0), 0.1, false),
        (f(6.0), f(10.0), 0.0, false),
        (f(2.0), inf, -0.5, false),
    ];
    // (p, q, β, truth) from 1/q = ((β+1)/3)(1/2 - 1/p)
    let strichartz = [
        (inf, f(6.0), 0.0, true),
        (inf, f(4.0), 0.5, true),
        (f(2.0), inf, 0.0, true),
        (inf, f(4.0), 0.0, false),
        (inf, r(1.75 / 6.0), 0.75, false),
    ];
    let mut table_ok = true;
    for (p, q, a, truth) in kato {
        let v = validate_kato(p, q, a);
        if v.admissible != truth {
            table_ok = false;
            eprintln!("    kato ({p}, {q}, {a}): got {}, want {truth}", v.diagnostic);
        }
    }
    for (p, q, b, truth) in strichartz {
        let v = validate_strichartz(p, q, b);
        if v.admissible != truth {
            table_ok = false;
            eprintln!("    strichartz ({p}, {q}, {b}): got {}, want {truth}", v.diagnostic);
        }
    }
    for a in [-0.25, 0.0, 0.1] {
        let t = kato_family_for_pq_order(a)?;
        table_ok &= (t.p.recip() - (1.0 - a) / 5.0).abs() < 1e-15
            && (t.q.recip() - (4.0 * a + 1.0) / 10.0).abs() < 1e-15;
    }

    let cfg = ProbeConfig::new(1024, 128.0, 2.0, 0.02)?;
    let data = probe_data(2024, 100);
    let drifts = [
        kato_refinement(&KatoTriple::new(5.0, 10.0, 0.0)?, &data, &cfg)?.drift,
        kato_refinement(&KatoTriple::new(inf, 2.0, 1.0)?, &data, &cfg)?.drift,
        strichartz_refinement(&StrichartzPair::new(inf, 6.0, 0.0)?, &data, &cfg)?.drift,
    ];
    let probes_ok = drifts.iter().all(|d| *d < 0.05);
    Ok((
        table_ok && probes_ok,
        format!(
            "fixture {}, drifts {:.2}% {:.2}% {:.2}%",
            if table_ok { "matches" } else { "differs" },
            100.0 * drifts[0],
            100.0 * drifts[1],
            100.0 * drifts[2]
        ),
    ))
}

fn functionals() -> Outcome {
    let grid = Grid::new(64, 20.0)?;
    let zero = sgkdv::SpaceTimeTrace::new(&grid, 0.0, 0.05, vec![Field::zeros(&grid); 21])?;
    let mut zeros_ok = true;
    for k in [4, 6] {
        zeros_ok &= beta_functionals(&zero, k, 1.0)?.as_array() == [0.0; 4];
    }

    let spec = NoiseSpec::new(
        Field::from_fn(&grid, |x| (-x * x).exp()),
        Envelope::Constant { level: 1.0 },
        8,
    )?;
    let ts = [1.0, 2.0, 4.0, 8.0];
    let per_path = (0..200u64)
        .into_par_iter()
        .map(|s| {
            let path = sample_path_stream(spec.seed, s, 0.05, 160)?;
            let z = convolution_trace(&spec, &path, 1)?;
            ts.iter()
                .map(|&t| beta_functionals(&z, 4, t))
                .collect::<Result<Vec<_>, sgkdv::Error>>()
        })
        .collect::<Result<Vec<_>, sgkdv::Error>>()?;
    let coincide = per_path
        .iter()
        .flatten()
        .map(|b| (b.alpha3 - b.alpha4).abs() / b.alpha3)
        .fold(0.0, f64::max);
    let means: Vec<f64> = (0..ts.len())
        .map(|j| per_path.iter().map(|v| v[j].alpha1.powi(2)).sum::<f64>() / per_path.len() as f64)
        .collect();
    let slope = loglog_slope(&ts, &means);
    Ok((
        zeros_ok && coincide <= 1e-9 && (0.8..=1.2).contains(&slope),
        format!("zeros {zeros_ok}, max |α3-α4|/α3 {coincide:.1e}, E[α1²] slope {slope:.3}"),
    ))
}

fn scattering_k(k: u32) -> Result<(usize, usize, f64), sgkdv::Error> {
    let grid = Grid::new(512, 50.0)?;
    let space = PullbackSpace::for_degree(k);
    let shape = Field::from_fn(&grid, |x| (-0.5 * x * x).exp());
    let u0 = shape.scaled(0.1 / shape.l2_norm());
    let w = 0.15;
    let bump = Field::from_fn(&grid, |x| x * (-x * x / (2.0 * w * w)).exp());
    let spec = NoiseSpec::new(bump.scaled(1e-3 / space.norm(&bump)), Envelope::Power { gamma: 0.7 }, 77)?;
    let cfg = SolverConfig::new(&grid, k, Sign::Defocusing, 0.01)?;
    let stride = 10;
    let tail_horizon = spec.envelope.horizon_for(40.0)?;
    let reports = (0..20u64)
        .into_par_iter()
        .map(|s| {
            let path = sample_path_stream(spec.seed, s, cfg.dt, 4000)?;
            let u = simulate_stochastic(&u0, &cfg, &spec, &path, stride)?;
            let ustar = decompose(&u, &tail_trace(&spec, &path, &u.times(), tail_horizon)?)?;
            let vs = [5.0, 10.0, 20.0]
                .iter()
                .map(|&t| {
                    let j = ustar.index_of(t).expect("snapshot time");
                    Ok(solve_v(ustar.snapshot(j), &cfg, &spec, &path, t, stride, tail_horizon)?.v)
                })
                .collect::<Result<Vec<_>, sgkdv::Error>>()?;
            scattering_diagnostic(&u, &[10.0, 20.0, 40.0], space, k, &vs)
        })
        .collect::<Result<Vec<_>, sgkdv::Error>>()?;
    let a = reports
        .iter()
        .filter(|r| r.increments_decrease() && *r.cauchy_increments.last().unwrap() <= 1e-3)
        .count();
    let b = reports.iter().filter(|r| r.v_sizes_nonincreasing()).count();
    let last = reports
        .iter()
        .map(|r| *r.cauchy_increments.last().unwrap())
        .fold(0.0, f64::max);
    Ok((a, b, last))
}

fn scattering() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for k in [4, 6] {
        let (a, b, last) = scattering_k(k)?;
        ok &= a >= 18 && b >= 18;
        notes.push(format!("k={k}: increments {a}/20, v sizes {b}/20, max final {last:.1e}"));
    }
    Ok((ok, notes.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("airy oracle", airy_oracle),
        ("decay slopes and envelope bound", decay_slopes),
        ("J evenness and time scaling", evenness_and_scaling),
        ("Ito isometry and tail decay", ito_isometry),
        ("mass and energy conservation", conservation),
        ("soliton oracle", soliton_oracle),
        ("expected mass under noise", expected_mass),
        ("admissibility fixture and probes", admissibility_and_probes),
        ("beta functionals", functionals),
        ("scattering trends", scattering),
    ];
    let wanted: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        let mark = if passed { "PASS" } else { "FAIL" };
        println!("{mark} {id:>2}. {name}: {detail} [{:.1}s]", start.elapsed().as_secs_f64());
        if !passed {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

// 2π·3^{-1/3}·Ai(3^{-1/3}x) at x = -20, -19.5, …, 20, from mpmath at 30 digits
const AIRY_TABLE: [f64; 81] = [
    -0.7732156293642247,
    0.7557437778755814,
    1.2219710584506154,
    -0.007411201881513296,
    -1.2363275127520519,
    -0.8344573389047031,
    0.650757803679491,
    1.326197767755351,
    0.3766324011286184,
    -1.0307606604345143,
    -1.2502141552786752,
    -0.05933235420123223,
    1.205613598708724,
    1.200276827301617,
    -0.038143688439228156,
    -1.2480253193005153,
    -1.2714654365245737,
    -0.12169514502939341,
    1.1446608359729264,
    1.445263999221645,
    0.5686600105844335,
    -0.7579457932635275,
    -1.5307534676135501,
    -1.2271572898062262,
    -0.09918298192718204,
    1.099786309098944,
    1.6527755536414663,
    1.2882480902800377,
    0.25176996074893526,
    -0.9133533823734713,
    -1.6825091795505631,
    -1.7776677728477066,
    -1.2250961391852457,
    -0.2699883638698564,
    0.7690405980697484,
    1.6264574055239642,
    2.155708275481456,
    2.3330570858217805,
    2.221964623847285,
    1.9255041512428557,
    1.5466858841559796,
    1.165182867017061,
    0.829882025672127,
    0.5621128753862925,
    0.363720980756852,
    0.22562955641885163,
    0.13457452955407104,
    0.07735943709214622,
    0.04294682258189024,
    0.023066158339969736,
    0.012003460771056502,
    0.006060459081026716,
    0.0029722684336586282,
    0.0014174751084002426,
    0.0006579663398338954,
    0.00029752946877827227,
    0.00013117119571050108,
    5.6421496415854204e-05,
    2.3694025421810673e-05,
    9.720527507623494e-06,
    3.8980449547508956e-06,
    1.5287695750480237e-06,
    5.866678065034517e-07,
    2.2039446096024958e-07,
    8.108828242851494e-08,
    2.9231035158888416e-08,
    1.0328291713508859e-08,
    3.5782553170437845e-09,
    1.2159748349873206e-09,
    4.054454856999127e-10,
    1.3268812880766968e-10,
    4.263379114651176e-11,
    1.345310868452289e-11,
    4.170202116070336e-12,
    1.270196965141912e-12,
    3.802537312287917e-13,
    1.1190997148781882e-13,
    3.2385993027808764e-14,
    9.217966041317192e-15,
    2.5810420910471713e-15,
    7.110929320045367e-16,
];
