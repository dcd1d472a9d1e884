use std::f64::consts::TAU;

use anyhow::{Context, Result};
use foucault::dos::peak_bin;
use foucault::dynamics::FlowKind;
use foucault::exec::derive_seed;
use foucault::full::compare_reduced_full;
use foucault::io::{fmt_f64, write_dos_csv, write_ensemble_csv, write_spectrum_csv, write_trajectory_csv};
use foucault::lmg::{build_hamiltonian, eigen_spectrum, spectrum_point, spectrum_sweep, SpectrumOptions};
use foucault::scenarios::{squeeze_ensemble, zeno_run, EnsembleSpec, ZenoProtocol};
use foucault::stationary::{critical_s0, separatrix_and_regions, stationary_points, Regime};
use foucault::{hamiltonian_h, integrate, Exec, PendulumConfig, StokesState};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{linspace, Config};
use crate::manifest::Outputs;
use crate::Format;

pub struct Ctx<'a> {
    pub out: &'a mut Outputs,
    pub format: Format,
    pub seed: u64,
    pub exec: Exec,
    pub derived_seeds: Vec<(String, u64)>,
}

impl Ctx<'_> {
    fn name(&self, stem: &str) -> String {
        match self.format {
            Format::Csv => format!("{stem}.csv"),
            Format::Json => format!("{stem}.json"),
        }
    }

    /// Write `rows` under `stem` as CSV (with `header`) or as a JSON array of `json_rows`.
    fn write_table<T: Serialize>(&mut self, stem: &str, header: &str, rows: &[Vec<String>], json_rows: &T) -> Result<()> {
        match self.format {
            Format::Csv => {
                let mut text = String::from(header);
                text.push('\n');
                for r in rows {
                    text.push_str(&r.join(","));
                    text.push('\n');
                }
                self.out.write(&self.name(stem), text.as_bytes())
            }
            Format::Json => self.out.write_json(&self.name(stem), json_rows),
        }
    }
}

pub enum Status {
    Ok,
    AcceptanceFailed,
}

pub struct Report {
    pub params: Value,
    pub status: Status,
}

fn ok(params: Value) -> Result<Report> {
    Ok(Report {
        params,
        status: Status::Ok,
    })
}

fn advise(c: &PendulumConfig) {
    for a in c.advisories() {
        eprintln!("note: {a}");
    }
}

fn pendulum(cfg: &Config) -> Result<PendulumConfig> {
    let c = cfg.pendulum.config();
    c.validate()?;
    advise(&c);
    Ok(c)
}

fn unit_u(omega: f64, n: u32) -> f64 {
    3.0 / 16.0 * omega * n as f64
}

pub fn simulate(cfg: &Config, ctx: &mut Ctx) -> Result<Report> {
    let c = pendulum(cfg)?;
    let s = &cfg.simulate;
    let flow: FlowKind = s.flow.parse()?;
    let init = StokesState::new(s.s1, s.s2, s.s3);
    let tr = integrate(init, &c, flow, s.t_end, s.dt)?;
    match ctx.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_trajectory_csv(&mut buf, &tr)?;
            ctx.out.write("trajectory.csv", &buf)?;
        }
        Format::Json => ctx.out.write_json("trajectory.json", &tr)?,
    }
    println!(
        "{} samples, flow {}, max relative drift H {:.2e}, s0 {:.2e}",
        tr.len(),
        flow.name(),
        tr.h_drift(),
        tr.s0_drift()
    );
    ok(json!({ "pendulum": cfg.pendulum, "simulate": s }))
}

pub fn stationary(cfg: &Config, ctx: &mut Ctx) -> Result<Report> {
    let c = pendulum(cfg)?;
    let s0 = cfg.stationary.s0;
    let set = stationary_points(&c, s0)?;
    let classifier = if set.regime == Regime::FourPoint {
        Some(separatrix_and_regions(&set, &c)?)
    } else {
        None
    };
    match ctx.format {
        Format::Csv => {
            let mut text = String::from("s1,s2,s3,stability,H,residual\n");
            for p in &set.points {
                text.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt_f64(p.state.s1),
                    fmt_f64(p.state.s2),
                    fmt_f64(p.state.s3),
                    p.stability,
                    fmt_f64(hamiltonian_h(p.state, &c)),
                    fmt_f64(p.residual)
                ));
            }
            ctx.out.write("stationary.csv", text.as_bytes())?;
        }
        Format::Json => ctx.out.write_json(
            "stationary.json",
            &json!({
                "set": set,
                "separatrix": classifier.as_ref().map(|k| json!({
                    "h": k.separatrix_h,
                    "saddle": k.saddle,
                    "lobe_side": k.lobe_side,
                })),
            }),
        )?,
    }
    println!(
        "regime {}, {} stationary points, s0_crit = {}",
        set.regime,
        set.points.len(),
        set.s0_crit
    );
    ok(json!({ "pendulum": cfg.pendulum, "stationary": cfg.stationary }))
}

pub fn critical(cfg: &Config, ctx: &mut Ctx) -> Result<Report> {
    let k = &cfg.critical;
    let base = pendulum(cfg)?;
    let dws = linspace(0.0, k.delta_omega_max, k.steps)?;
    let ws = linspace(0.0, k.omega_rot_max, k.steps)?;
    let mut rows = Vec::new();
    let mut objs = Vec::new();
    for &dw in &dws {
        for &w in &ws {
            let v = critical_s0(&base.with_delta_omega(dw).with_rotation(w));
            rows.push(vec![fmt_f64(dw), fmt_f64(w), fmt_f64(v)]);
            objs.push(json!({ "delta_omega": dw, "omega_rot": w, "s0_crit": v }));
        }
    }
    ctx.write_table("critical", "delta_omega,omega_rot,s0_crit", &rows, &objs)?;
    println!("{} grid points", rows.len());
    ok(json!({ "pendulum": cfg.pendulum, "critical": k }))
}

pub fn spectrum(cfg: &Config, ctx: &mut Ctx) -> Result<Report> {
    let s = &cfg.spectrum;
    let u = unit_u(cfg.pendulum.omega, s.n);
    let base = pendulum(cfg)?.with_rotation(s.omega_rot_u * u);
    let grid: Vec<f64> = linspace(s.from_u, s.to_u, s.steps)?.iter().map(|f| f * u).collect();
    let spectra = ctx.exec.map(&grid, |&dw| {
        build_hamiltonian(s.n, &base.with_delta_omega(dw)).and_then(|h| eigen_spectrum(&h))
    });
    let spectra: Vec<Vec<f64>> = spectra.into_iter().collect::<foucault::Result<_>>()?;
    let mut rows = Vec::new();
    let mut objs = Vec::new();
    for (dw, e) in grid.iter().zip(&spectra) {
        for (i, v) in e.iter().enumerate() {
            rows.push(vec![fmt_f64(*dw), i.to_string(), fmt_f64(*v)]);
        }
        objs.push(json!({ "delta_omega": dw, "eigenvalues": e }));
    }
    ctx.write_table("spectrum", "delta_omega,index,eigenvalue", &rows, &objs)?;
    println!("{} grid points x {} levels (u = {u})", grid.len(), s.n + 1);
    ok(json!({ "pendulum": cfg.pendulum, "spectrum": s }))
}

pub fn dos(cfg: &Config, ctx: &mut Ctx) -> Result<Report> {
    let d = &cfg.dos;
    let u = unit_u(cfg.pendulum.omega, d.n);
    let c = pendulum(cfg)?
        .with_delta_omega(d.delta_omega_u * u)
        .with_rotation(d.omega_rot_u * u);
    let opts = SpectrumOptions {
        n_bins: d.n_bins,
        n_samples: d.n_samples,
        seed: ctx.seed,
    };
    ctx.derived_seeds.push(("classical_monte_carlo".into(), ctx.seed));
    let r = spectrum_point(d.n, &c, &opts, ctx.exec)?;
    let s0 = 0.5 * d.n as f64;
    let set = stationary_points(&c, s0)?;
    let sep_eps = set.separatrix_h.map(|h| h / (s0 * s0));
    let sep_bin = sep_eps.and_then(|e| r.bins.index(e));
    let summary = json!({
        "regime": set.regime.to_string(),
        "separatrix_epsilon": sep_eps,
        "separatrix_bin": sep_bin,
        "quantum_peak_bin": peak_bin(&r.quantum_density()),
        "classical_peak_bin": peak_bin(&r.classical_dos),
        "bin_width": r.bins.width(),
    });
    match ctx.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_dos_csv(&mut buf, &r)?;
            ctx.out.write("dos.csv", &buf)?;
        }
        Format::Json => ctx.out.write_json(
            "dos.json",
            &json!({
                "bin_edges": r.bin_edges,
                "quantum_density": r.quantum_density(),
                "classical_density": r.classical_dos,
            }),
        )?,
    }
    ctx.out.write_json("dos_summary.json", &summary)?;
    match sep_bin {
        Some(b) => println!("regime {}, separatrix in bin {b}", set.regime),
        None => println!("regime {}, no separatrix", set.regime),
    }
    ok(json!({ "pendulum": cfg.pendulum, "dos": d }))
}

pub fn zeno(cfg: &Config, ctx: &mut Ctx) -> Result<Report> {
    let z = &cfg.zeno;
    let base = ZenoProtocol {
        n_filters: 0,
        omega_rot: z.omega_rot,
        gamma_filter: z.gamma_filter,
        filter_duration: z.filter_duration,
        s0: z.s0,
    };
    let runs = ctx
        .exec
        .map_range(z.max_filters as usize + 1, |n| zeno_run(&base.with_filters(n as u32)))
        .into_iter()
        .collect::<foucault::Result<Vec<_>>>()?;
    let rows: Vec<Vec<String>> = runs
        .iter()
        .map(|r| vec![r.protocol.n_filters.to_string(), fmt_f64(r.fraction), fmt_f64(r.ideal)])
        .collect();
    let objs: Vec<Value> = runs
        .iter()
        .map(|r| json!({ "n": r.protocol.n_filters, "fraction": r.fraction, "ideal": r.ideal }))
        .collect();
    ctx.write_table("zeno", "n,fraction,ideal", &rows, &objs)?;
    if let Some(last) = runs.last() {
        println!("n = {}: fraction {:.4} (ideal {:.4})", last.protocol.n_filters, last.fraction, last.ideal);
    }
    ok(json!({ "zeno": z }))
}

pub fn squeeze(cfg: &Config, ctx: &mut Ctx) -> Result<Report> {
    let q = &cfg.squeeze;
    let c = pendulum(cfg)?;
    let spec = EnsembleSpec {
        n_members: q.n_members,
        s0: q.s0,
        spread: q.spread,
        seed: ctx.seed,
    };
    ctx.derived_seeds.push(("ensemble".into(), ctx.seed));
    let tau = q.tau.unwrap_or_else(|| spec.mid_window_tau(&c));
    let r = squeeze_ensemble(&spec, &c, tau, ctx.exec)?;
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    let (lo, hi) = spec.window(&c);
    ctx.out.write_json(
        "squeeze_summary.json",
        &json!({
            "tau": r.tau,
            "window": [lo, hi],
            "covariance": r.covariance,
            "delta_plus": r.delta_plus,
            "delta_minus": r.delta_minus,
            "alpha": r.alpha,
            "predicted_delta_plus": r.predicted_delta_plus,
            "predicted_delta_minus": r.predicted_delta_minus,
            "predicted_alpha": r.predicted_alpha,
            "warnings": r.warnings,
        }),
    )?;
    match ctx.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_ensemble_csv(&mut buf, &r.members)?;
            ctx.out.write("ensemble.csv", &buf)?;
        }
        Format::Json => ctx.out.write_json("ensemble.json", &r.members)?,
    }
    println!(
        "tau {:.4}: delta+ {:.4e} (pred {:.4e}), delta- {:.4e} (pred {:.4e}), alpha {:.4e}",
        r.tau, r.delta_plus, r.predicted_delta_plus, r.delta_minus, r.predicted_delta_minus, r.alpha
    );
    let mut params = json!({ "pendulum": cfg.pendulum, "squeeze": q });
    params["squeeze"]["tau"] = json!(tau);
    ok(params)
}

pub fn validate(cfg: &Config, ctx: &mut Ctx) -> Result<Report> {
    let v = &cfg.validate;
    let base = pendulum(cfg)?;
    let mut cases = Vec::new();
    for &s0 in &v.s0 {
        for &dw in &v.delta_omega {
            for &w in &v.omega_rot {
                cases.push((s0, dw, w));
            }
        }
    }
    if cases.is_empty() {
        return Err(crate::InputError("validation grid is empty".into()).into());
    }
    let t_end = v.periods * TAU / base.omega;
    let devs = ctx
        .exec
        .map(&cases, |&(s0, dw, w)| {
            let c = base.with_delta_omega(dw).with_rotation(w);
            let init = StokesState::new(1.0, 1.0, 1.0) * (s0 / 3f64.sqrt());
            compare_reduced_full(init, &c, t_end).map(|r| r.max_deviation)
        })
        .into_iter()
        .collect::<foucault::Result<Vec<_>>>()
        .context("reduced-vs-full comparison")?;
    let mut rows = Vec::new();
    let mut objs = Vec::new();
    println!("{:>8} {:>12} {:>12} {:>14}  result", "s0", "delta_omega", "omega_rot", "max_deviation");
    for (&(s0, dw, w), &d) in cases.iter().zip(&devs) {
        let pass = d < v.tolerance;
        println!("{s0:>8} {dw:>12} {w:>12} {d:>14.6}  {}", if pass { "PASS" } else { "FAIL" });
        rows.push(vec![fmt_f64(s0), fmt_f64(dw), fmt_f64(w), fmt_f64(d), pass.to_string()]);
        objs.push(json!({ "s0": s0, "delta_omega": dw, "omega_rot": w, "max_deviation": d, "pass": pass }));
    }
    ctx.write_table("validate", "s0,delta_omega,omega_rot,max_deviation,pass", &rows, &objs)?;
    let failed = objs.iter().filter(|o| o["pass"] == false).count();
    println!("{} of {} cases within {}", cases.len() - failed, cases.len(), v.tolerance);
    Ok(Report {
        params: json!({ "pendulum": cfg.pendulum, "validate": v }),
        status: if failed == 0 { Status::Ok } else { Status::AcceptanceFailed },
    })
}

pub fn sweep(cfg: &Config, ctx: &mut Ctx) -> Result<Report> {
    let s = &cfg.sweep;
    let u = unit_u(cfg.pendulum.omega, s.n);
    let template = pendulum(cfg)?.with_rotation(s.omega_rot_u * u);
    let grid: Vec<f64> = linspace(s.from_u, s.to_u, s.steps)?.iter().map(|f| f * u).collect();
    let opts = SpectrumOptions {
        n_bins: s.n_bins,
        n_samples: s.n_samples,
        seed: ctx.seed,
    };
    let results = spectrum_sweep(s.n, &template, &grid, &opts, ctx.exec)?;
    for (i, r) in results.iter().enumerate() {
        ctx.derived_seeds.push((format!("sweep_point_{i}"), r.seed));
        debug_assert_eq!(r.seed, derive_seed(ctx.seed, i as u64));
    }
    match ctx.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_spectrum_csv(&mut buf, &results)?;
            ctx.out.write("spectrum.csv", &buf)?;
            for (i, r) in results.iter().enumerate() {
                let mut buf = Vec::new();
                write_dos_csv(&mut buf, r)?;
                ctx.out.write(&format!("dos_{i:03}.csv"), &buf)?;
            }
        }
        Format::Json => {
            let points: Vec<Value> = results
                .iter()
                .map(|r| {
                    json!({
                        "delta_omega": r.config.delta_omega,
                        "seed": r.seed,
                        "eigenvalues": r.eigenvalues,
                        "bin_edges": r.bin_edges,
                        "quantum_density": r.quantum_density(),
                        "classical_density": r.classical_dos,
                    })
                })
                .collect();
            ctx.out.write_json("sweep.json", &points)?;
        }
    }
    println!("{} sweep points (u = {u})", results.len());
    ok(json!({ "pendulum": cfg.pendulum, "sweep": s }))
}
