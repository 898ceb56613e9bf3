use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;

use super::config::{ConstantFamily, ExperimentConfig};
use crate::error::Result;
use crate::estimates::{
    check_classical_estimates, check_mild_estimates, compute_constants, scan_constants, ConstantInputs,
    EstimateReport,
};
use crate::frac_core::TimeMesh;
use crate::solver::{fmt17, mild_residual, solve_direct, solve_vie, ProblemSpec, Scheme, Trajectory};
use crate::verify::{
    check_regularity_rates, convergence_study, corpus, f_bound, mode_oracle, z_consistency_check, RegularityConfig,
};

/// Outcome of a subcommand: the human summary and whether every check passed.
pub struct Outcome {
    pub report: String,
    pub pass: bool,
}

impl Outcome {
    fn new() -> Self {
        Self {
            report: String::new(),
            pass: true,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.report.push_str(s.as_ref());
        self.report.push('\n');
    }

    fn check(&mut self, label: impl AsRef<str>, ok: bool) {
        self.pass &= ok;
        self.line(format!("[{}] {}", if ok { "PASS" } else { "FAIL" }, label.as_ref()));
    }

    fn absorb(&mut self, other: Outcome) {
        self.pass &= other.pass;
        self.report.push_str(&other.report);
    }
}

fn write(out: &Path, name: &str, text: &str) -> Result<()> {
    fs::create_dir_all(out)?;
    fs::write(out.join(name), text)?;
    Ok(())
}

fn mesh(cfg: &ExperimentConfig, p: &ProblemSpec) -> Result<Arc<TimeMesh>> {
    p.mesh(cfg.mesh.intervals, cfg.grading())
}

fn solve(p: &ProblemSpec, mesh: &Arc<TimeMesh>, scheme: Scheme) -> Result<Trajectory> {
    match scheme {
        Scheme::Vie => solve_vie(p, mesh),
        Scheme::Direct => solve_direct(p, mesh),
    }
}

pub fn run_solve(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let p = cfg.problem_spec()?;
    let mesh = mesh(cfg, &p)?;
    let mut o = Outcome::new();
    let mut trajs = Vec::new();
    for s in cfg.run.scheme.schemes() {
        let tr = solve(&p, &mesh, s)?;
        write(out, &format!("trajectory_{}.csv", s.name()), &tr.to_csv())?;
        o.line(format!("{}: {} nodes, mild residual {:.3e}", s.name(), mesh.len(), mild_residual(&p, &tr)?));
        if p.forcing.is_zero() && p.source.is_zero() {
            let lambda = p.basis.lambda()[0];
            let mut worst: f64 = 0.0;
            for (&t, u) in mesh.nodes().iter().zip(&tr.states) {
                let e = p.u0[0] * mode_oracle(p.alpha.value(), p.kappa, lambda, t)?;
                worst = worst.max((u[0] - e).abs());
            }
            o.line(format!("{}: max |d_1 - oracle| = {worst:.3e}", s.name()));
        }
        trajs.push(tr);
    }
    if let [a, b] = trajs.as_slice() {
        o.line(format!("max cross-scheme difference {:.3e}", a.max_distance(b)));
    }
    Ok(o)
}

fn constants_csv(p: &ProblemSpec, family: ConstantFamily) -> Result<(String, String)> {
    let set = compute_constants(p)?;
    if family == ConstantFamily::Classical {
        set.classical()?;
    }
    let mut csv = String::from("name,value,note\n");
    let mut text = String::new();
    for (name, value, note) in set.table() {
        let mild = matches!(name, "C_P" | "C_R" | "rho_alpha" | "C1" | "C2" | "C3" | "C4" | "C5");
        let keep = match family {
            ConstantFamily::All => true,
            ConstantFamily::Mild => mild,
            ConstantFamily::Classical => !mild || matches!(name, "C_P" | "C_R" | "rho_alpha"),
        };
        if keep {
            let _ = writeln!(csv, "{name},{},{note}", fmt17(value));
            let _ = writeln!(text, "{name:>10} = {value:.6e}  ({note})");
        }
    }
    Ok((csv, text))
}

pub fn run_constants(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let p = cfg.problem_spec()?;
    let (csv, text) = constants_csv(&p, cfg.run.constants)?;
    write(out, "constants.csv", &csv)?;
    let mut o = Outcome::new();
    o.line(format!("constants at alpha = {}, T = {}", p.alpha.value(), p.horizon));
    o.report.push_str(&text);
    Ok(o)
}

fn estimates_for(p: &ProblemSpec, tr: &Trajectory, slack: f64) -> Result<EstimateReport> {
    let set = compute_constants(p)?;
    let mut rep = check_mild_estimates(p, tr, &set, slack)?;
    if p.alpha.classical_regime() {
        rep.extend(check_classical_estimates(p, tr, &set, slack)?);
    }
    Ok(rep)
}

fn summarize(o: &mut Outcome, prefix: &str, rep: &EstimateReport) {
    for r in &rep.rows {
        let note = if r.note.is_empty() { String::new() } else { format!(" [{}]", r.note) };
        o.check(
            format!("{prefix}{} lhs={:.4e} rhs={:.4e} at t={:.3e}{note}", r.id, r.lhs, r.rhs, r.worst_t),
            r.pass,
        );
    }
}

pub fn run_verify_estimates(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let p = cfg.problem_spec()?;
    let mesh = mesh(cfg, &p)?;
    let (csv, _) = constants_csv(&p, ConstantFamily::All)?;
    write(out, "constants.csv", &csv)?;
    let mut o = Outcome::new();
    for s in cfg.run.scheme.schemes() {
        let tr = solve(&p, &mesh, s)?;
        let rep = estimates_for(&p, &tr, cfg.run.slack)?;
        write(out, &format!("estimates_{}.csv", s.name()), &rep.to_csv())?;
        summarize(&mut o, &format!("{} ", s.name()), &rep);
    }
    Ok(o)
}

pub fn run_scan(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let p = cfg.problem_spec()?;
    let scan = scan_constants(&cfg.run.alpha_grid, &ConstantInputs::of(&p))?;
    let mut csv = String::from("alpha,rho,c2,c7,c8,c9,c11\n");
    for r in &scan.rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            fmt17(r.alpha),
            fmt17(r.rho),
            fmt17(r.c2),
            fmt17(r.c7),
            fmt17(r.c8),
            fmt17(r.c9),
            fmt17(r.c11)
        );
    }
    write(out, "scan.csv", &csv)?;
    let mut o = Outcome::new();
    o.check("C7 and C11 grow as alpha decreases to 1/2", scan.blows_up_near_half);
    o.check("classical constants finite at the largest alpha", scan.bounded_near_one);
    o.check("rho_alpha increasing", scan.rho_increasing);
    Ok(o)
}

pub fn run_rates(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let p = cfg.problem_spec()?;
    let mesh = mesh(cfg, &p)?;
    rates_for(&p, &mesh, cfg, out)
}

fn rates_for(p: &ProblemSpec, mesh: &Arc<TimeMesh>, cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let tr = solve_vie(p, mesh)?;
    let [lo, hi] = cfg.run.rate_window;
    let mut csv = String::from("quantity,q,exponent,intercept,max_residual,t_lo,t_hi,weighted_exponent,required,pass\n");
    let mut o = Outcome::new();
    for &q in &cfg.run.rate_orders {
        let rc = RegularityConfig {
            window: (lo * p.horizon, hi * p.horizon),
            ..RegularityConfig::new(q, p.horizon)
        };
        let rep = check_regularity_rates(p, &tr, &rc)?;
        for r in &rep.rows {
            let _ = writeln!(
                csv,
                "{},{q},{},{},{},{},{},{},{},{}",
                r.quantity,
                fmt17(r.fit.exponent),
                fmt17(r.fit.intercept),
                fmt17(r.fit.max_residual),
                fmt17(r.fit.window.0),
                fmt17(r.fit.window.1),
                fmt17(r.weighted_exponent),
                fmt17(r.required),
                r.pass
            );
            let label = format!(
                "t^{q} ||{}|| ~ t^{:.4} (required >= {:.3})",
                r.quantity, r.weighted_exponent, r.required
            );
            if r.informational {
                o.line(format!("[INFO] {label}"));
            } else {
                o.check(label, r.pass);
            }
        }
    }
    write(out, "rates.csv", &csv)?;
    let z = z_consistency_check(p, &tr)?;
    let f0 = f_bound(p, &tr, 0)?;
    let f1 = f_bound(p, &tr, 1)?;
    write(
        out,
        "z_check.csv",
        &format!(
            "residual,differential_residual,identity_residual,f_bound_q0,f_bound_q1\n{},{},{},{},{}\n",
            fmt17(z.residual),
            fmt17(z.differential_residual),
            fmt17(z.identity_residual),
            fmt17(f0),
            fmt17(f1)
        ),
    )?;
    o.line(format!(
        "z = t u': residual {:.3e}, differential form {:.3e}, identity {:.3e}",
        z.residual, z.differential_residual, z.identity_residual
    ));
    o.line(format!("f-bound: q=0 {f0:.4e}, q=1 {f1:.4e}"));
    Ok(o)
}

pub fn run_convergence(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    convergence_for(&cfg.problem_spec()?, cfg, out)
}

fn convergence_for(base: &ProblemSpec, cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let mut csv = String::from("scheme,sigma,mode,intervals,error,order\n");
    let mut o = Outcome::new();
    for man in cfg.manufactured() {
        let p = man.problem(base)?;
        let term = man.terms[0];
        for s in cfg.run.scheme.schemes() {
            let exact = |t: f64| man.exact(t, p.modes());
            let tab = convergence_study(&p, &exact, &cfg.run.convergence_intervals, s)?;
            for r in &tab.rows {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    s.name(),
                    fmt17(term.sigma),
                    term.mode,
                    r.intervals,
                    fmt17(r.error),
                    r.order.map(fmt17).unwrap_or_default()
                );
            }
            let order = tab.finest_order().unwrap_or(f64::NAN);
            o.check(
                format!(
                    "{} u = t^{} w_{}: order {order:.3} (>= {})",
                    s.name(),
                    term.sigma,
                    term.mode,
                    cfg.run.min_order
                ),
                order >= cfg.run.min_order,
            );
        }
    }
    write(out, "convergence.csv", &csv)?;
    Ok(o)
}

/// Estimates and residual refinement on every corpus problem, then the scan,
/// rates and convergence subcommands.
pub fn run_all(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let basis = cfg.basis()?;
    let entries = corpus(&basis, cfg.problem.kappa, cfg.problem.horizon)?;
    let levels = &cfg.run.convergence_intervals;
    let results: Vec<Result<Outcome>> = entries
        .par_iter()
        .map(|e| {
            let dir: PathBuf = out.join(&e.label);
            let p = &e.problem;
            let mut o = Outcome::new();
            o.line(format!("== {}", e.label));
            let m = p.mesh(cfg.mesh.intervals, p.alpha.default_grading())?;
            let mut cross = Vec::new();
            for s in cfg.run.scheme.schemes() {
                let tr = solve(p, &m, s)?;
                let rep = estimates_for(p, &tr, cfg.run.slack)?;
                write(&dir, &format!("estimates_{}.csv", s.name()), &rep.to_csv())?;
                summarize(&mut o, &format!("{} ", s.name()), &rep);
                let mut res = Vec::new();
                for &n in levels {
                    let mm = p.default_mesh(n)?;
                    res.push(mild_residual(p, &solve(p, &mm, s)?)?);
                }
                let mono = res.windows(2).all(|w| w[1] < w[0]);
                let shown: Vec<String> = res.iter().map(|r| format!("{r:.2e}")).collect();
                o.check(format!("{} mild residual decreasing: {}", s.name(), shown.join(" ")), mono);
                cross.push(tr);
            }
            if let [a, b] = cross.as_slice() {
                o.line(format!("cross-scheme difference {:.3e}", a.max_distance(b)));
            }
            Ok(o)
        })
        .collect();
    let mut o = Outcome::new();
    for r in results {
        o.absorb(r?);
    }
    o.line("== scan-alpha");
    o.absorb(run_scan(cfg, &out.join("scan-alpha"))?);
    for e in &entries {
        let p = &e.problem;
        if e.forcing == "zero" {
            o.line(format!("== rates {}", e.label));
            let m = p.mesh(cfg.mesh.intervals, p.alpha.default_grading())?;
            o.absorb(rates_for(p, &m, cfg, &out.join("rates").join(&e.label))?);
        }
        o.line(format!("== convergence {}", e.label));
        o.absorb(convergence_for(p, cfg, &out.join("convergence").join(&e.label))?);
    }
    Ok(o)
}
