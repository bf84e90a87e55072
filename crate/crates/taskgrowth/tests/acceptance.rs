//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::time::{Duration, Instant};

use rand::Rng;
use taskgrowth::{pipeline, Config};
use taskgrowth_core::dynamics::{simulate, ModelParams, Shock, ShockSchedule, SimConfig, Trajectory};
use taskgrowth_core::production::{FactorEndowment, FrictionParams, FrontierSearch, StaticModel};
use taskgrowth_core::profile::{Elasticity, ProductivityProfile, ProfilePair};
use taskgrowth_core::rng::seeded;
use taskgrowth_core::surrogate::{fit_forest, shapley_values, ForestParams, ShapleyMode, TreeParams};
use taskgrowth_core::sweep::{spearman, Sampling, SweepDataset, Target};
use taskgrowth_core::ParamName;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, budget: Duration) -> Result<(), String> {
    ensure(elapsed < budget, format!("runtime {elapsed:.2?} exceeds {budget:?}"))
}

fn constant_model(k: f64, l: f64, gamma: f64) -> StaticModel {
    StaticModel {
        endowment: FactorEndowment::new(k, l, 0.0).unwrap(),
        sigma: Elasticity::new(2.0).unwrap(),
        profiles: ProfilePair::constant(),
        task_mass: 1.0,
        knowledge: 1.0,
        beta: 0.3,
        friction: FrictionParams::new(gamma, 2.0, 0.0).unwrap(),
    }
}

fn closed_form_frontier() -> Check {
    let t = Instant::now();
    let mut notes = Vec::new();
    for kl in [1.0, 3.0] {
        let z = constant_model(kl, 1.0, 0.0).optimal_frontier(&FrontierSearch::default()).map_err(|e| e.to_string())?;
        let want = kl / (kl + 1.0);
        ensure((z - want).abs() < 1e-6, format!("K/L={kl}: z*={z}, want {want}"))?;
        notes.push(format!("K/L={kl} |z*-K/(K+L)|={:.1e}", (z - want).abs()));
    }
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{} ({:.1?})", notes.join(", "), t.elapsed()))
}

fn random_model(g: &mut impl Rng) -> StaticModel {
    let sigma = loop {
        let s = g.gen_range(0.8..3.0);
        if (s - 1.0f64).abs() > 0.05 {
            break s;
        }
    };
    let rate_k = g.gen_range(0.0..0.5);
    let capital = if g.gen_bool(0.5) {
        ProductivityProfile::constant(g.gen_range(0.5..2.0))
    } else {
        ProductivityProfile::exponential(g.gen_range(0.5..2.0), rate_k)
    };
    let labor = if capital.shape == 0.0 && g.gen_bool(0.5) {
        ProductivityProfile::power(g.gen_range(0.5..2.0), g.gen_range(0.0..2.0), g.gen_range(0.1..1.0))
    } else {
        ProductivityProfile::exponential(g.gen_range(0.5..2.0), rate_k + g.gen_range(0.0..2.0))
    };
    StaticModel {
        endowment: FactorEndowment::new(g.gen_range(0.5..5.0), g.gen_range(0.5..2.0), g.gen_range(0.0..0.03)).unwrap(),
        sigma: Elasticity::new(sigma).unwrap(),
        profiles: ProfilePair { capital, labor },
        task_mass: g.gen_range(1.0..2.0),
        knowledge: g.gen_range(0.1..2.0),
        beta: g.gen_range(0.2..0.6),
        friction: FrictionParams::frictionless(),
    }
}

fn labor_share_monotone() -> Check {
    let mut g = seeded(2);
    let mut worst = f64::NEG_INFINITY;
    for case in 0..20 {
        let m = random_model(&mut g);
        let rows = m.statics_sweep(256, 3.0).map_err(|e| format!("case {case}: {e}"))?;
        for w in rows.windows(2) {
            let rise = w[1].eq.labor_share - w[0].eq.labor_share;
            worst = worst.max(rise);
            ensure(rise <= 1e-9, format!("case {case}: s_L rises by {rise:e} at z*={}", w[1].eq.z_star))?;
        }
    }
    Ok(format!("20 parameterizations x 256 points, largest step {worst:.1e}"))
}

fn wage_hump() -> Check {
    let m = constant_model(3.0, 1.0, 0.0);
    let rows = m.statics_sweep(256, 3.0).map_err(|e| e.to_string())?;
    let argmax = (0..rows.len()).max_by(|&a, &b| rows[a].eq.wage.total_cmp(&rows[b].eq.wage)).unwrap();
    ensure(argmax > 0 && argmax < rows.len() - 1, format!("argmax of w at grid index {argmax}"))?;
    let w = |z: f64| m.wage_and_labor_share(z).unwrap().0;
    for (z, want, tol) in [(0.0, 1.0, 1e-12), (0.2, 1.4928, 1e-4), (0.8, 0.8926, 5e-4)] {
        ensure((w(z) - want).abs() < tol, format!("w({z})={} vs {want}", w(z)))?;
    }
    Ok(format!(
        "argmax at z*={:.4}; w(0)={:.6} w(0.2)={:.6} w(0.8)={:.6}",
        rows[argmax].eq.z_star,
        w(0.0),
        w(0.2),
        w(0.8)
    ))
}

fn knowledge_steady_state() -> Check {
    let t = Instant::now();
    let mut cfg = SimConfig { horizon: 300.0, dt: 0.5, ..SimConfig::default() };
    cfg.params.growth.lambda = 0.0;
    cfg.params.growth.chi = 0.0;
    let gp = cfg.params.growth;
    let r = cfg.params.rd_share * cfg.params.labor_supply;
    let k_star = (gp.zeta * cfg.params.gpt0.powf(gp.xi) * r.powf(gp.alpha) / gp.kappa).powf(1.0 / (gp.theta - gp.phi));
    let traj = simulate(&cfg).map_err(|e| e.to_string())?;
    let settled = traj
        .points
        .iter()
        .find(|p| p.g_knowledge.abs() * p.knowledge < 1e-6)
        .ok_or("flow never fell below 1e-6")?;
    let rel = (settled.knowledge - k_star).abs() / k_star;
    ensure(rel < 0.01, format!("K={} vs K*={k_star} at t={}", settled.knowledge, settled.t))?;
    let end = traj.last().unwrap().knowledge;
    ensure((end - k_star).abs() / k_star < 0.01, format!("final K={end} vs K*={k_star}"))?;
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!(
        "K*={k_star:.6}; |flow|<1e-6 at t={} with K={:.6} (rel err {rel:.1e}); final rel err {:.1e} ({:.1?})",
        settled.t,
        settled.knowledge,
        (end - k_star).abs() / k_star,
        t.elapsed()
    ))
}

fn exponential_config(dt: f64) -> SimConfig {
    let mut cfg = SimConfig { horizon: 50.0, dt, ..SimConfig::default() };
    cfg.params.growth.phi = 1.0;
    cfg.params.growth.kappa = 0.0;
    cfg.params.growth.lambda = 0.0;
    cfg
}

fn exponential_regime() -> Check {
    let cfg = exponential_config(0.01);
    let p = &cfg.params;
    let rate = p.growth.zeta * (p.rd_share * p.labor_supply).powf(p.growth.alpha);
    let traj = simulate(&cfg).map_err(|e| e.to_string())?;
    let end = traj.last().unwrap();
    let measured = (end.knowledge / p.knowledge0).ln() / end.t;
    let rel = (measured - rate).abs() / rate;
    ensure(rel < 1e-4, format!("measured {measured} vs {rate}"))?;
    let error = |dt: f64| -> Result<f64, String> {
        let c = exponential_config(dt);
        let tr = simulate(&c).map_err(|e| e.to_string())?;
        let e = tr.last().unwrap();
        Ok((e.knowledge - c.params.knowledge0 * (rate * e.t).exp()).abs())
    };
    let ratio = error(1.0)? / error(0.5)?;
    ensure((3.0..=5.0).contains(&ratio), format!("dt-halving error ratio {ratio}"))?;
    Ok(format!("growth {measured:.8} vs {rate:.8} (rel {rel:.1e}); dt-halving error ratio {ratio:.3}"))
}

fn friction_sensitivity() -> Check {
    let p = ModelParams::default();
    let econ = p.resolve().map_err(|e| e.to_string())?;
    let mut zs = Vec::new();
    for gamma in [0.0, 0.3, 0.6, 1.0] {
        let mut m = econ.static_model(p.knowledge0, p.task_mass0);
        m.friction = FrictionParams::new(gamma, p.eta, p.friction_base).unwrap();
        zs.push(m.optimal_frontier(&FrontierSearch::default()).map_err(|e| e.to_string())?);
    }
    ensure(zs.windows(2).all(|w| w[1] <= w[0]), format!("z* over gamma: {zs:?}"))?;
    Ok(format!("z* at gamma 0/0.3/0.6/1.0 = {:.5}/{:.5}/{:.5}/{:.5}", zs[0], zs[1], zs[2], zs[3]))
}

fn knowledge_scaling() -> Check {
    let base = constant_model(3.0, 1.0, 0.0);
    let mut base = StaticModel { profiles: ProfilePair::default(), ..base };
    base.knowledge = 0.7;
    let mut worst_w: f64 = 0.0;
    let mut worst_s: f64 = 0.0;
    for z in [0.1, 0.35, 0.6, 0.9] {
        let (w0, s0) = base.wage_and_labor_share(z).unwrap();
        for c in [0.01, 0.5, 2.0, 37.0] {
            let m = StaticModel { knowledge: base.knowledge * c, ..base };
            let (w1, s1) = m.wage_and_labor_share(z).unwrap();
            worst_w = worst_w.max((w1 / (w0 * c.powf(base.beta)) - 1.0).abs());
            worst_s = worst_s.max((s1 - s0).abs());
        }
    }
    ensure(worst_w < 1e-12 && worst_s < 1e-12, format!("wage rel err {worst_w:e}, s_L err {worst_s:e}"))?;
    Ok(format!("max wage rel err {worst_w:.1e}, max s_L change {worst_s:.1e}"))
}

fn sweep_reproduction(ds: &SweepDataset, elapsed: Duration) -> Check {
    let conv: Vec<_> = ds.converged().collect();
    ensure(!conv.is_empty(), "no converged rows")?;
    let z: Vec<f64> = conv.iter().map(|r| r.z_star).collect();
    let s: Vec<f64> = conv.iter().map(|r| r.labor_share).collect();
    let kl: Vec<f64> = conv.iter().map(|r| r.feature(ParamName::CapitalLaborRatio)).collect();
    let (rz, rk) = (spearman(&z, &s), spearman(&kl, &s));
    ensure(rz < 0.0 && rk < 0.0, format!("rho(z*,s_L)={rz}, rho(K/L,s_L)={rk}"))?;
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "500 runs, {} converged ({:.1}%); rho(z*,s_L)={rz:.3}, rho(K/L,s_L)={rk:.3} ({:.1?})",
        conv.len(),
        100.0 * ds.converged_fraction(),
        elapsed
    ))
}

fn surrogate_attribution(ds: &SweepDataset) -> Check {
    let sc = Config::default().surrogate;
    let kl = ParamName::CapitalLaborRatio.index();
    let mut ranks = Vec::new();
    let mut r2 = Vec::new();
    for seed in 0..5 {
        let a = pipeline::analyze(ds, Target::LaborShare, &sc, seed).map_err(|e| e.to_string())?;
        let rank = a.importance.ranking().iter().position(|&i| i == kl).unwrap() + 1;
        ranks.push(rank);
        r2.push(a.validation_r2);
    }
    ensure(ranks.iter().all(|&r| r <= 2), format!("K_over_L impurity ranks {ranks:?}"))?;
    let r2s: Vec<String> = r2.iter().map(|v| format!("{v:.3}")).collect();
    let soft = if r2.iter().all(|&v| v >= 0.7) { "meets" } else { "below" };
    Ok(format!(
        "K_over_L ranks {ranks:?} over 5 seeds; validation R2 [{}] ({soft} the 0.7 soft target, not gated)",
        r2s.join(", ")
    ))
}

/// Ridge regression on a tiny design, solved by Gaussian elimination.
fn ridge(x: &[Vec<f64>], y: &[f64], lambda: f64) -> Vec<f64> {
    let p = x[0].len();
    let mut a = vec![vec![0.0; p + 1]; p];
    for (row, &t) in x.iter().zip(y) {
        for i in 0..p {
            for j in 0..p {
                a[i][j] += row[i] * row[j];
            }
            a[i][p] += row[i] * t;
        }
    }
    for (i, r) in a.iter_mut().enumerate() {
        r[i] += lambda;
    }
    for c in 0..p {
        let piv = (c..p).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, piv);
        let pivot = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != c {
                let f = row[c] / pivot[c];
                for (dst, src) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *dst -= f * src;
                }
            }
        }
    }
    (0..p).map(|i| a[i][p] / a[i][i]).collect()
}

fn shapley_axioms() -> Check {
    let mut g = seeded(10);
    let mut worst_eff: f64 = 0.0;
    for case in 0..20 {
        let x: Vec<Vec<f64>> = (0..80).map(|_| (0..6).map(|_| g.gen::<f64>()).collect()).collect();
        let y: Vec<f64> = x.iter().map(|r| (4.0 * r[0]).sin() + r[1] * r[2] + 0.1 * g.gen::<f64>()).collect();
        let depth = [Some(2), Some(4), None][case % 3];
        let params = ForestParams { n_trees: 5, tree: TreeParams { max_depth: depth, ..TreeParams::default() }, ..ForestParams::default() };
        let forest = fit_forest(&x, &y, &params, case as u64).map_err(|e| e.to_string())?;
        let r = shapley_values(|v| forest.predict_unchecked(v), &x[case], &x[40..48], ShapleyMode::Exact)
            .map_err(|e| e.to_string())?;
        worst_eff = worst_eff.max(r.efficiency_gap().abs());
    }
    ensure(worst_eff <= 1e-9, format!("efficiency gap {worst_eff:e}"))?;

    // a constant training column is never split on, so the forest never reads it
    let x: Vec<Vec<f64>> = (0..60).map(|_| vec![g.gen(), g.gen(), 0.5]).collect();
    let y: Vec<f64> = x.iter().map(|r| r[0] + 2.0 * r[1]).collect();
    let forest = fit_forest(&x, &y, &ForestParams { n_trees: 10, ..ForestParams::default() }, 3).map_err(|e| e.to_string())?;
    let r = shapley_values(|v| forest.predict_unchecked(v), &[0.9, 0.1, 99.0], &x[..10], ShapleyMode::Exact)
        .map_err(|e| e.to_string())?;
    ensure(r.values[2] == 0.0, format!("dummy feature got {}", r.values[2]))?;

    let x: Vec<Vec<f64>> = (0..50).map(|_| (0..3).map(|_| g.gen::<f64>()).collect()).collect();
    let y: Vec<f64> = x.iter().map(|r| 1.5 * r[0] - 0.7 * r[1] + 2.0 * r[2]).collect();
    let dup: Vec<Vec<f64>> = x.iter().map(|r| vec![r[0], r[1], r[2], r[2]]).collect();
    let w = ridge(&dup, &y, 1e-8);
    let f = |v: &[f64]| v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
    let r = shapley_values(f, &dup[7], &dup[20..30], ShapleyMode::Exact).map_err(|e| e.to_string())?;
    let sym = (r.values[2] - r.values[3]).abs();
    ensure(sym <= 1e-9, format!("duplicated features differ by {sym:e}"))?;

    let weights = [0.3, -1.2, 2.5, 0.0, 4.0];
    let bg: Vec<Vec<f64>> = (0..9).map(|_| (0..5).map(|_| g.gen_range(-1.0..1.0)).collect()).collect();
    let xi = [0.2, -0.4, 0.9, 0.3, -0.8];
    let lin = |v: &[f64]| v.iter().zip(&weights).map(|(a, b)| a * b).sum::<f64>();
    let r = shapley_values(lin, &xi, &bg, ShapleyMode::Exact).map_err(|e| e.to_string())?;
    let mut lin_err: f64 = 0.0;
    for i in 0..5 {
        let mean = bg.iter().map(|b| b[i]).sum::<f64>() / bg.len() as f64;
        lin_err = lin_err.max((r.values[i] - weights[i] * (xi[i] - mean)).abs());
    }
    ensure(lin_err <= 1e-12, format!("linear closed form error {lin_err:e}"))?;
    Ok(format!(
        "efficiency gap {worst_eff:.1e} over 20 forests; dummy 0 exactly; duplicate gap {sym:.1e}; linear error {lin_err:.1e}"
    ))
}

fn response(shocked: &Trajectory, base: &Trajectory, i: usize) -> (f64, f64) {
    let (a, b) = (&shocked.points[i], &base.points[i]);
    (a.wage / b.wage - 1.0, a.labor_share / b.labor_share - 1.0)
}

fn policy_shock_symmetry() -> Check {
    let cfg = SimConfig::default();
    let base = simulate(&cfg).map_err(|e| e.to_string())?;
    let run = |m: f64| -> Result<Trajectory, String> {
        let shock = Shock { params: vec![ParamName::CapitalLaborRatio, ParamName::Theta], multiplier: m, start: 15.0, end: 25.0 };
        let c = SimConfig { shocks: ShockSchedule::new(vec![shock]).map_err(|e| e.to_string())?, ..cfg.clone() };
        simulate(&c).map_err(|e| e.to_string())
    };
    let (up, down) = (run(1.1)?, run(0.9)?);
    // last record inside the shock window
    let i = base.points.iter().rposition(|p| p.t < 25.0 - 1e-9).unwrap();
    let (uw, us) = response(&up, &base, i);
    let (dw, ds) = response(&down, &base, i);
    for (name, u, d) in [("w", uw, dw), ("s_L", us, ds)] {
        ensure(u * d < 0.0, format!("{name}: responses {u:+.4} and {d:+.4} share a sign"))?;
        let (lo, hi) = (u.abs().min(d.abs()), u.abs().max(d.abs()));
        ensure(lo >= 0.7 * hi, format!("{name}: magnitudes {u:+.4}/{d:+.4} differ by more than 30%"))?;
        ensure((0.01..=0.08).contains(&lo) && hi <= 0.08, format!("{name}: magnitudes {u:+.4}/{d:+.4} outside 1%-8%"))?;
    }
    Ok(format!(
        "at t={:.1}: w {:+.2}%/{:+.2}%, s_L {:+.2}%/{:+.2}% for x1.10/x0.90",
        base.points[i].t,
        100.0 * uw,
        100.0 * dw,
        100.0 * us,
        100.0 * ds
    ))
}

fn main() {
    let mut results: Vec<(&str, Check)> = vec![
        ("1 closed-form frontier", closed_form_frontier()),
        ("2 labor-share monotonicity", labor_share_monotone()),
        ("3 wage hump", wage_hump()),
        ("4 knowledge steady state", knowledge_steady_state()),
        ("5 exponential regime", exponential_regime()),
        ("6 friction sensitivity", friction_sensitivity()),
        ("7 knowledge-scaling exactness", knowledge_scaling()),
    ];
    let t = Instant::now();
    let sweep = pipeline::sweep(&Config::default(), 500, 7, Sampling::Uniform);
    let elapsed = t.elapsed();
    match sweep {
        Ok(out) => {
            results.push(("8 sweep reproduction", sweep_reproduction(&out.dataset, elapsed)));
            results.push(("9 surrogate attribution", surrogate_attribution(&out.dataset)));
        }
        Err(e) => {
            results.push(("8 sweep reproduction", Err(e.to_string())));
            results.push(("9 surrogate attribution", Err("no sweep dataset".into())));
        }
    }
    results.push(("10 Shapley axioms", shapley_axioms()));
    results.push(("11 policy-shock symmetry", policy_shock_symmetry()));

    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
