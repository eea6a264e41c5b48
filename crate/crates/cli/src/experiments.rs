//! The experiment catalog: each named experiment builds its model, runs the
//! solvers, judges its checks against pinned tolerances, and emits a JSON
//! report plus CSV tables.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use rayon::prelude::*;

use ssb_core::eigen::{cluster_degeneracies, eigensolve, residual_bound, residual_norm, Spectrum};
use ssb_core::lattice::{
    assemble_hamiltonian, build_grid, inner, norm, split_domain, Grid, SplitDomain, SplitOperator,
};
use ssb_core::models;
use ssb_core::quantize::{find_subbarrier_levels_with, splitting_sweep_with, Parity, WellGeometry};
use ssb_core::spinor::{
    analytic_spectrum, build_spinor_model, fd_spectrum, ground_pair, sigma3_commutator_check,
    to_field_form, GOLDEN_RATIO,
};
use ssb_core::symmetry::{
    build_nonoverlapping_pair, detect_ssb, parity_apply, project_right, symmetry_respecting_pair,
    DenseInvolution, SymmetryOp,
};

use crate::config::{ExperimentConfig, GridConfig, Overrides, ResolvedConfig, Resolver};
use crate::report::{fmt_f64, write_csv, Check, Report, SpectrumSummary};

pub const EXPERIMENTS: &[(&str, &str)] = &[
    (
        "sombrero-gap",
        "quartic double well: strictly split low levels, unbroken parity verdict",
    ),
    (
        "sextic-ground",
        "factorized sextic well: zero ground energy and the closed-form ground state",
    ),
    (
        "double-oscillator-limit",
        "double oscillator: tunneling splitting shrinking with well separation",
    ),
    (
        "ualpha-levels",
        "finite square double well: transcendental levels against the grid solver",
    ),
    (
        "uinf-ssb",
        "decoupled double well: doubly degenerate ladder and a non-overlapping ground pair",
    ),
    (
        "barrier-theorem",
        "half-line projection of decoupled-well eigenstates stays an eigenstate",
    ),
    (
        "spinor-ssb",
        "two-channel oscillator model: internal symmetry broken at the ground level only",
    ),
    (
        "pair-lemma",
        "randomized construction of non-overlapping symmetry-breaking pairs",
    ),
];

/// Run one experiment end to end; returns the report and where it was
/// written.
pub fn run_experiment(
    name: &str,
    file: ExperimentConfig,
    flags: Overrides,
) -> anyhow::Result<(Report, PathBuf)> {
    let resolver = Resolver::new(name, file, flags)?;
    let out = resolver.output();
    let mut report = match name {
        "sombrero-gap" => sombrero_gap(&resolver, &out),
        "sextic-ground" => sextic_ground(&resolver, &out),
        "double-oscillator-limit" => double_oscillator_limit(&resolver, &out),
        "ualpha-levels" => ualpha_levels(&resolver, &out),
        "uinf-ssb" => uinf_ssb(&resolver, &out),
        "barrier-theorem" => barrier_theorem(&resolver, &out),
        "spinor-ssb" => spinor_ssb(&resolver, &out),
        "pair-lemma" => pair_lemma(&resolver, &out),
        other => bail!("unknown experiment '{other}'; see `ssb-lab list`"),
    }?;
    report.finish();
    let path = report.write(&out)?;
    Ok((report, path))
}

fn base_config(resolver: &Resolver, name: &str, grid: Option<GridConfig>) -> ResolvedConfig {
    ResolvedConfig {
        experiment: name.into(),
        grid,
        degeneracy_tol: resolver.degeneracy_tol(),
        residual_tol: resolver.residual_tol(),
        output: resolver.output().display().to_string(),
        jobs: resolver.jobs(),
        params: BTreeMap::new(),
    }
}

fn param(report: &mut ResolvedConfig, key: &str, value: impl Into<serde_json::Value>) {
    report.params.insert(key.into(), value.into());
}

fn grid_from(cfg: GridConfig) -> anyhow::Result<Grid> {
    Ok(build_grid(cfg.xmin, cfg.xmax, cfg.n)?)
}

fn pool(jobs: usize) -> anyhow::Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .context("cannot build worker pool")
}

// ---------------------------------------------------------------- sombrero

fn sombrero_gap(resolver: &Resolver, out: &Path) -> anyhow::Result<Report> {
    let lambda = resolver.f64_param(|p| p.lambda, 1.0);
    let mu = resolver.f64_param(|p| p.mu, 1.0);
    let grid_cfg = resolver.grid(GridConfig {
        xmin: -4.0,
        xmax: 4.0,
        n: 1601,
    });
    let tol = resolver.degeneracy_tol();

    let mut config = base_config(resolver, "sombrero-gap", Some(grid_cfg));
    param(&mut config, "lambda", lambda);
    param(&mut config, "mu", mu);
    let mut report = Report::new(config);

    let model = models::quartic_sombrero(lambda, mu)?;
    let grid = grid_from(grid_cfg)?;
    let v = model.sample(&grid)?;
    let op = assemble_hamiltonian(&grid, &v, 1.0, 1.0)?;
    let spec = eigensolve(&op, 6, &grid)?;
    let clusters = cluster_degeneracies(spec.levels(), tol)?;
    let verdict = detect_ssb(&spec, &op, &SymmetryOp::Parity, tol)?;

    let gap = spec.level(1) - spec.level(0);
    report
        .checks
        .push(Check::greater("level gap E1 - E0", gap, 10.0 * tol));
    report
        .checks
        .push(Check::holds("parity verdict unbroken", !verdict.broken));
    report.checks.push(Check::less(
        "parity commutator probe",
        verdict.commutator_norm,
        1e-12,
    ));

    report.values.insert("gap".into(), gap);
    report.values.insert("ground_energy".into(), spec.level(0));

    let rows: Vec<Vec<String>> = spec
        .levels()
        .iter()
        .enumerate()
        .map(|(i, &e)| vec![i.to_string(), fmt_f64(e)])
        .collect();
    write_csv(out, "levels.csv", &["index", "energy"], &rows)?;
    report.tables.push("levels.csv".into());

    report.spectrum = Some(SpectrumSummary::new(&spec));
    report.degeneracy = Some(clusters);
    report.ssb = Some(verdict);
    Ok(report)
}

// ------------------------------------------------------------------ sextic

fn sextic_ground(resolver: &Resolver, out: &Path) -> anyhow::Result<Report> {
    let a = resolver.a_sextic(1.0);
    let mass = resolver.f64_param(|p| p.mass, 1.0);
    let hbar = resolver.f64_param(|p| p.hbar, 1.0);
    let grid_cfg = resolver.grid(GridConfig {
        xmin: -3.0,
        xmax: 3.0,
        n: 2001,
    });

    let mut config = base_config(resolver, "sextic-ground", Some(grid_cfg));
    param(&mut config, "a_sextic", a);
    param(&mut config, "mass", mass);
    param(&mut config, "hbar", hbar);
    let mut report = Report::new(config);

    let model = models::sextic_factorized(a, mass, hbar)?;
    let grid = grid_from(grid_cfg)?;
    let v = model.sample(&grid)?;
    let op = assemble_hamiltonian(&grid, &v, mass, hbar)?;
    let spec = eigensolve(&op, 2, &grid)?;
    let exact = model
        .analytic()
        .and_then(|o| o.ground_form.as_ref())
        .ok_or_else(|| anyhow!("sextic model carries no ground form"))?
        .sampled_normalized(&grid)?;

    let e0 = spec.level(0);
    let dist = norm(
        &spec
            .vector(0)
            .iter()
            .zip(&exact)
            .map(|(x, y)| x - y)
            .collect::<Vec<_>>(),
        grid.h(),
    );
    let annihilator = models::annihilator_residual(a, &grid)?;

    report
        .checks
        .push(Check::less("|ground energy|", e0.abs(), 1e-4));
    report.checks.push(Check::less(
        "ground state L2 distance to closed form",
        dist,
        1e-3,
    ));
    report.checks.push(Check::less(
        "annihilation residual of the closed form",
        annihilator,
        1e-4,
    ));

    report.values.insert("ground_energy".into(), e0);
    report.values.insert("l2_distance".into(), dist);
    report
        .values
        .insert("annihilator_residual".into(), annihilator);

    let rows: Vec<Vec<String>> = (0..grid.n())
        .map(|i| {
            vec![
                fmt_f64(grid.x(i)),
                fmt_f64(spec.vector(0)[i]),
                fmt_f64(exact[i]),
            ]
        })
        .collect();
    write_csv(
        out,
        "ground_state.csv",
        &["x", "psi_fd", "psi_exact"],
        &rows,
    )?;
    report.tables.push("ground_state.csv".into());

    report.spectrum = Some(SpectrumSummary::new(&spec));
    Ok(report)
}

// ------------------------------------------------------- double oscillator

fn double_oscillator_limit(resolver: &Resolver, out: &Path) -> anyhow::Result<Report> {
    let mass = resolver.f64_param(|p| p.mass, 1.0);
    let omega = resolver.f64_param(|p| p.omega, 1.0);
    let hbar = resolver.f64_param(|p| p.hbar, 1.0);
    let n = resolver
        .grid(GridConfig {
            xmin: 0.0,
            xmax: 0.0,
            n: 1601,
        })
        .n;
    let separations = resolver.list_param(
        |p| p.separations.clone(),
        &[0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0],
    );

    let mut config = base_config(resolver, "double-oscillator-limit", None);
    param(&mut config, "mass", mass);
    param(&mut config, "omega", omega);
    param(&mut config, "hbar", hbar);
    param(&mut config, "separations", separations.clone());
    param(&mut config, "grid_n", n as u64);
    let mut report = Report::new(config);

    let worker = pool(resolver.jobs())?;
    let results: Vec<anyhow::Result<(f64, f64, f64)>> = worker.install(|| {
        separations
            .par_iter()
            .map(|&a| {
                let model = models::double_oscillator(mass, omega, a)?;
                let grid = model.grid_for(n)?;
                let v = model.sample(&grid)?;
                let op = assemble_hamiltonian(&grid, &v, mass, hbar)?;
                let spec = eigensolve(&op, 2, &grid)?;
                Ok((a, spec.level(0), spec.level(1)))
            })
            .collect()
    });
    let mut rows = Vec::new();
    let mut gaps = Vec::new();
    for r in results {
        let (a, e0, e1) = r?;
        gaps.push(e1 - e0);
        rows.push(vec![fmt_f64(a), fmt_f64(e0), fmt_f64(e1), fmt_f64(e1 - e0)]);
    }
    write_csv(out, "splitting.csv", &["a", "e0", "e1", "gap"], &rows)?;
    report.tables.push("splitting.csv".into());

    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    report
        .checks
        .push(Check::holds("splitting strictly decreasing", decreasing));
    report.checks.push(Check::less(
        "splitting decay across the sweep",
        gaps.last().unwrap() / gaps.first().unwrap(),
        0.1,
    ));
    report
        .values
        .insert("first_gap".into(), *gaps.first().unwrap());
    report
        .values
        .insert("last_gap".into(), *gaps.last().unwrap());
    Ok(report)
}

// ------------------------------------------------------------- finite well

fn ualpha_levels(resolver: &Resolver, out: &Path) -> anyhow::Result<Report> {
    let a = resolver.f64_param(|p| p.a, 2.0);
    let b = resolver.f64_param(|p| p.b, 0.5);
    let mass = resolver.f64_param(|p| p.mass, 1.0);
    let hbar = resolver.f64_param(|p| p.hbar, 1.0);
    let level = resolver.u32_param(|p| p.level, 1);
    let oracle_n = resolver
        .grid(GridConfig {
            xmin: -a,
            xmax: a,
            n: ssb_core::quantize::DEFAULT_ORACLE_N,
        })
        .n;
    let single = resolver.f64_param(|p| p.alpha, f64::NAN);
    let alphas = if single.is_finite() {
        vec![single]
    } else {
        resolver.list_param(
            |p| p.alphas.clone(),
            &[10.0, 20.0, 50.0, 100.0, 200.0, 500.0],
        )
    };

    let mut config = base_config(resolver, "ualpha-levels", None);
    param(&mut config, "a", a);
    param(&mut config, "b", b);
    param(&mut config, "mass", mass);
    param(&mut config, "hbar", hbar);
    param(&mut config, "alphas", alphas.clone());
    param(&mut config, "level", level);
    param(&mut config, "oracle_n", oracle_n as u64);
    let mut report = Report::new(config);

    let worker = pool(resolver.jobs())?;
    type AlphaReports = (
        f64,
        ssb_core::quantize::RootReport,
        ssb_core::quantize::RootReport,
    );
    let per_alpha: Vec<anyhow::Result<AlphaReports>> = worker.install(|| {
        alphas
            .par_iter()
            .map(|&alpha| {
                let g = WellGeometry::new(alpha, a, b, mass, hbar)?;
                let even = find_subbarrier_levels_with(&g, Parity::Even, oracle_n)?;
                let odd = find_subbarrier_levels_with(&g, Parity::Odd, oracle_n)?;
                Ok((alpha, even, odd))
            })
            .collect()
    });

    let mut root_rows = Vec::new();
    let mut counts_match = true;
    let mut max_rel: f64 = 0.0;
    for r in &per_alpha {
        let (alpha, even, odd) = r.as_ref().map_err(|e| anyhow!("{e}"))?;
        for rep in [even, odd] {
            counts_match &= rep.roots.len() == rep.fd_levels.len();
            for (i, root) in rep.roots.iter().enumerate() {
                let fd = rep.fd_levels.get(i).copied();
                let rel = rep.oracle_match.get(i).copied();
                if let Some(rel) = rel {
                    max_rel = max_rel.max(rel);
                }
                root_rows.push(vec![
                    fmt_f64(*alpha),
                    format!("{:?}", rep.parity).to_lowercase(),
                    i.to_string(),
                    fmt_f64(*root),
                    fd.map(fmt_f64).unwrap_or_default(),
                    rel.map(fmt_f64).unwrap_or_default(),
                    fmt_f64(rep.residuals[i]),
                ]);
            }
        }
    }
    write_csv(
        out,
        "roots.csv",
        &[
            "alpha", "parity", "index", "e_root", "e_fd", "rel_err", "residual",
        ],
        &root_rows,
    )?;
    report.tables.push("roots.csv".into());

    let base = WellGeometry::new(alphas[0], a, b, mass, hbar)?;
    let table = splitting_sweep_with(&alphas, &base, level, oracle_n)?;
    let sweep_rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r.alpha),
                r.e_even.map(fmt_f64).unwrap_or_default(),
                r.e_odd.map(fmt_f64).unwrap_or_default(),
                r.delta.map(fmt_f64).unwrap_or_default(),
                r.flagged.to_string(),
            ]
        })
        .collect();
    write_csv(
        out,
        "splitting.csv",
        &["alpha", "e_even", "e_odd", "delta", "flagged"],
        &sweep_rows,
    )?;
    report.tables.push("splitting.csv".into());

    let deltas: Vec<f64> = table.rows.iter().filter_map(|r| r.delta).collect();
    let decreasing = deltas.len() == table.rows.len() && deltas.windows(2).all(|w| w[1] < w[0]);

    report.checks.push(Check::holds(
        "root counts equal FD counts per parity",
        counts_match,
    ));
    report
        .checks
        .push(Check::less("max relative root error vs FD", max_rel, 1e-3));
    if alphas.len() > 1 {
        report
            .checks
            .push(Check::holds("splitting strictly decreasing", decreasing));
    }
    if let Some(threshold) = table.threshold_alpha {
        report.values.insert("threshold_alpha".into(), threshold);
    }
    report.values.insert("max_rel_err".into(), max_rel);
    Ok(report)
}

// ---------------------------------------------------------- decoupled well

struct UinfSolution {
    grid: Grid,
    split: SplitDomain,
    op: SplitOperator,
    merged: Spectrum,
}

fn solve_uinf(
    a: f64,
    b: f64,
    mass: f64,
    hbar: f64,
    n: usize,
    k_per_well: usize,
) -> anyhow::Result<UinfSolution> {
    let model = models::double_infinite_well(a, b)?;
    let grid = model.grid_for(n)?;
    let barrier = *model.barrier().unwrap();
    let split = split_domain(&grid, &barrier)?;
    let zeros_l = vec![0.0; split.left.n()];
    let zeros_r = vec![0.0; split.right.n()];
    let op = split.operator(&zeros_l, &zeros_r, mass, hbar)?;
    let left = eigensolve(op.left(), k_per_well, &split.left)?;
    let right = eigensolve(op.right(), k_per_well, &split.right)?;
    let spec_l = Spectrum::from_parts(
        left.levels().to_vec(),
        (0..k_per_well)
            .map(|j| split.embed_left(left.vector(j)))
            .collect(),
        grid.clone(),
    )?;
    let spec_r = Spectrum::from_parts(
        right.levels().to_vec(),
        (0..k_per_well)
            .map(|j| split.embed_right(right.vector(j)))
            .collect(),
        grid.clone(),
    )?;
    Ok(UinfSolution {
        grid: grid.clone(),
        split,
        op,
        merged: spec_l.merge(&spec_r)?,
    })
}

fn uinf_ssb(resolver: &Resolver, out: &Path) -> anyhow::Result<Report> {
    let a = resolver.f64_param(|p| p.a, 2.0);
    let b = resolver.f64_param(|p| p.b, 0.5);
    let mass = resolver.f64_param(|p| p.mass, 1.0);
    let hbar = resolver.f64_param(|p| p.hbar, 1.0);
    let n = resolver
        .grid(GridConfig {
            xmin: -a,
            xmax: a,
            n: 3199,
        })
        .n;
    let tol = resolver.degeneracy_tol();

    let mut config = base_config(resolver, "uinf-ssb", None);
    param(&mut config, "a", a);
    param(&mut config, "b", b);
    param(&mut config, "mass", mass);
    param(&mut config, "hbar", hbar);
    param(&mut config, "grid_n", n as u64);
    let mut report = Report::new(config);

    let solution = solve_uinf(a, b, mass, hbar, n, 5)?;
    let grid = &solution.grid;
    let formula = models::double_infinite_well(a, b)?
        .analytic()
        .unwrap()
        .levels
        .clone()
        .unwrap();

    let clusters = cluster_degeneracies(solution.merged.levels(), tol)?;
    let mut max_rel: f64 = 0.0;
    let mut all_double = true;
    let mut level_rows = Vec::new();
    for (i, c) in clusters.clusters.iter().take(5).enumerate() {
        let exact = formula.energy(i as u32 + 1, mass, hbar);
        let rel = (c.mean_energy - exact).abs() / exact;
        max_rel = max_rel.max(rel);
        all_double &= c.multiplicity == 2;
        level_rows.push(vec![
            (i + 1).to_string(),
            fmt_f64(c.mean_energy),
            fmt_f64(exact),
            fmt_f64(rel),
            c.multiplicity.to_string(),
        ]);
    }
    write_csv(
        out,
        "levels.csv",
        &["n", "energy", "exact", "rel_err", "multiplicity"],
        &level_rows,
    )?;
    report.tables.push("levels.csv".into());

    let verdict = detect_ssb(&solution.merged, &solution.op, &SymmetryOp::Parity, tol)?;
    let overlap = verdict.pair_overlap.abs();

    let mut pair_rows = Vec::new();
    if let Some((l_state, r_state)) = &verdict.pair {
        let (plus, minus) = symmetry_respecting_pair(l_state, r_state, grid.h(), 1e-9)?;
        for i in 0..grid.n() {
            pair_rows.push(vec![
                fmt_f64(grid.x(i)),
                fmt_f64(l_state[i]),
                fmt_f64(r_state[i]),
                fmt_f64(plus[i]),
                fmt_f64(minus[i]),
            ]);
        }
        write_csv(
            out,
            "pair.csv",
            &["x", "psi_left", "psi_right", "even", "odd"],
            &pair_rows,
        )?;
        report.tables.push("pair.csv".into());

        // cross-check the detected pair against the closed-form well states
        let exact_l = models::uinf_eigenfunction(1, models::WellSide::Left, a, b, grid)?;
        let exact_r = models::uinf_eigenfunction(1, models::WellSide::Right, a, b, grid)?;
        let localized = |state: &[f64]| -> f64 {
            inner(state, &exact_l, grid.h())
                .abs()
                .max(inner(state, &exact_r, grid.h()).abs())
        };
        let loc = localized(l_state).min(localized(r_state));
        report.checks.push(Check::greater(
            "pair overlap with a closed-form well state",
            loc,
            0.999,
        ));
    }

    report.checks.push(Check::holds(
        "first 5 clusters doubly degenerate",
        clusters.clusters.len() >= 5 && all_double,
    ));
    report.checks.push(Check::less(
        "max relative error vs closed-form ladder",
        max_rel,
        1e-3,
    ));
    report
        .checks
        .push(Check::less("pair overlap |<L|R>|", overlap, 1e-12));
    report
        .checks
        .push(Check::holds("parity verdict broken", verdict.broken));

    report
        .values
        .insert("ground_energy".into(), solution.merged.level(0));
    report.values.insert("max_rel_err".into(), max_rel);
    report.spectrum = Some(SpectrumSummary::new(&solution.merged));
    report.degeneracy = Some(clusters);
    report.ssb = Some(verdict);
    Ok(report)
}

// --------------------------------------------------------- barrier theorem

fn barrier_theorem(resolver: &Resolver, out: &Path) -> anyhow::Result<Report> {
    let a = resolver.f64_param(|p| p.a, 2.0);
    let b = resolver.f64_param(|p| p.b, 0.5);
    let mass = resolver.f64_param(|p| p.mass, 1.0);
    let hbar = resolver.f64_param(|p| p.hbar, 1.0);
    let n = resolver
        .grid(GridConfig {
            xmin: -a,
            xmax: a,
            n: 3199,
        })
        .n;
    let levels = resolver.u32_param(|p| p.level, 5) as usize;

    let mut config = base_config(resolver, "barrier-theorem", None);
    param(&mut config, "a", a);
    param(&mut config, "b", b);
    param(&mut config, "mass", mass);
    param(&mut config, "hbar", hbar);
    param(&mut config, "grid_n", n as u64);
    param(&mut config, "levels", levels as u64);
    let mut report = Report::new(config);

    let model = models::double_infinite_well(a, b)?;
    let barrier = *model.barrier().unwrap();
    let solution = solve_uinf(a, b, mass, hbar, n, levels)?;
    let grid = &solution.grid;
    let left = eigensolve(solution.op.left(), levels, &solution.split.left)?;
    let bound = resolver
        .residual_tol()
        .unwrap_or_else(|| residual_bound(solution.op.left()));

    let mut rows = Vec::new();
    let mut max_residual: f64 = 0.0;
    let mut max_overlap: f64 = 0.0;
    for j in 0..levels {
        let e = left.level(j);
        let psi_l = solution.split.embed_left(left.vector(j));
        let psi_r = parity_apply(&psi_l, grid)?;
        let (even, _) = symmetry_respecting_pair(&psi_l, &psi_r, grid.h(), 1e-9)?;
        let proj = project_right(&even, grid, &barrier)?;
        let r = residual_norm(&solution.op, &proj.samples, e, grid.h())?;
        let image = parity_apply(&proj.samples, grid)?;
        let ov = inner(&proj.samples, &image, grid.h()).abs();
        max_residual = max_residual.max(r);
        max_overlap = max_overlap.max(ov);
        rows.push(vec![
            (j + 1).to_string(),
            fmt_f64(e),
            fmt_f64(r),
            fmt_f64(bound),
            fmt_f64(ov),
        ]);
    }
    write_csv(
        out,
        "projection.csv",
        &[
            "n",
            "energy",
            "projected_residual",
            "residual_bound",
            "image_overlap",
        ],
        &rows,
    )?;
    report.tables.push("projection.csv".into());

    report.checks.push(Check::less(
        "max projected residual vs 10x bound",
        max_residual,
        10.0 * bound,
    ));
    report.checks.push(Check::less(
        "max overlap with parity image",
        max_overlap,
        1e-12,
    ));
    report.values.insert("max_residual".into(), max_residual);
    report.values.insert("residual_bound".into(), bound);
    Ok(report)
}

// ------------------------------------------------------------------ spinor

fn spinor_ssb(resolver: &Resolver, out: &Path) -> anyhow::Result<Report> {
    let omega_plus = resolver.f64_param(|p| p.omega_plus, GOLDEN_RATIO);
    let omega_minus = resolver.f64_param(|p| p.omega_minus, 1.0);
    let mass = resolver.f64_param(|p| p.mass, 1.0);
    let hbar = resolver.f64_param(|p| p.hbar, 1.0);
    let grid_cfg = resolver.grid(GridConfig {
        xmin: -8.0,
        xmax: 8.0,
        n: 1601,
    });
    let tol = resolver.degeneracy_tol();

    let mut config = base_config(resolver, "spinor-ssb", Some(grid_cfg));
    param(&mut config, "omega_plus", omega_plus);
    param(&mut config, "omega_minus", omega_minus);
    param(&mut config, "mass", mass);
    param(&mut config, "hbar", hbar);
    let mut report = Report::new(config);

    let model = build_spinor_model(omega_plus, omega_minus, mass, hbar)?;
    let grid = grid_from(grid_cfg)?;
    if let Some((p, q)) = model.commensurate_warning {
        report.values.insert("commensurate_p".into(), p as f64);
        report.values.insert("commensurate_q".into(), q as f64);
    }

    let k = 8;
    let fd = fd_spectrum(&model, &grid, k)?;
    let ladder = analytic_spectrum(&model, k as u32);
    let floor = hbar * omega_minus.min(omega_plus);
    let mut max_err: f64 = 0.0;
    let mut rows = Vec::new();
    for (j, exact) in ladder.iter().enumerate().take(k) {
        let err = (fd.level(j) - exact.energy).abs() / exact.energy.abs().max(floor);
        max_err = max_err.max(err);
        rows.push(vec![
            j.to_string(),
            exact.n.to_string(),
            format!("{:?}", exact.channel).to_lowercase(),
            fmt_f64(exact.energy),
            fmt_f64(fd.level(j)),
            fmt_f64(err),
        ]);
    }
    write_csv(
        out,
        "spectrum.csv",
        &["index", "n", "channel", "e_analytic", "e_fd", "rel_err"],
        &rows,
    )?;
    report.tables.push("spectrum.csv".into());

    let energies: Vec<f64> = ladder.iter().map(|l| l.energy).collect();
    let clusters = cluster_degeneracies(&energies, tol)?;
    let mult = clusters.multiplicities();
    let pattern_ok = mult[0] == 2 && mult[1..].iter().all(|&m| m == 1);

    let (psi_r, psi_l) = ground_pair(&model, &grid)?;
    let overlap = psi_l.inner(&psi_r, grid.h()).abs();
    let exchange_exact = psi_r.sigma3() == psi_l;
    let commutator = sigma3_commutator_check(&model, &grid)?;

    let pair_rows: Vec<Vec<String>> = (0..grid.n())
        .map(|i| {
            vec![
                fmt_f64(grid.x(i)),
                fmt_f64(psi_r.up[i]),
                fmt_f64(psi_r.down[i]),
                fmt_f64(psi_l.up[i]),
                fmt_f64(psi_l.down[i]),
            ]
        })
        .collect();
    write_csv(
        out,
        "pair.csv",
        &["x", "up_r", "down_r", "up_l", "down_l"],
        &pair_rows,
    )?;
    report.tables.push("pair.csv".into());

    let field = to_field_form(&model);
    let direct = model.hamiltonian(&grid)?;
    let (up, down) = field.reconstruct_hamiltonians(&grid)?;
    let scale = direct.up.inf_norm();
    let mut max_entry: f64 = 0.0;
    for (d, r) in [(&direct.up, &up), (&direct.down, &down)] {
        for (x, y) in d.diag().iter().zip(r.diag()) {
            max_entry = max_entry.max((x - y).abs());
        }
        for (x, y) in d.offdiag().iter().zip(r.offdiag()) {
            max_entry = max_entry.max((x - y).abs());
        }
    }

    // verdict on the FD spectrum; the cluster scale is the grid error of the
    // two near-zero channel ground levels
    let verdict = detect_ssb(&fd, &direct, &SymmetryOp::Sigma3, tol.max(1e-4))?;

    report.checks.push(Check::less(
        "max FD error vs closed-form ladder",
        max_err,
        1e-3,
    ));
    report.checks.push(Check::holds(
        "ground doubly degenerate, excited simple",
        pattern_ok,
    ));
    report
        .checks
        .push(Check::less("ground pair overlap", overlap, 1e-10));
    report.checks.push(Check::holds(
        "channel flip exchanges the pair exactly",
        exchange_exact,
    ));
    report.checks.push(Check::less(
        "channel-flip commutator probe",
        commutator,
        1e-14,
    ));
    report.checks.push(Check::less(
        "field-form round trip max entry difference",
        max_entry,
        1e-14 * scale,
    ));
    report.checks.push(Check::holds(
        "internal symmetry verdict broken",
        verdict.broken,
    ));

    report.values.insert("omega0".into(), field.omega0);
    report
        .values
        .insert("omega_delta_sq".into(), field.omega_delta_sq);
    report.values.insert("epsilon0".into(), field.epsilon0);
    report
        .values
        .insert("epsilon_delta".into(), field.epsilon_delta);
    report.values.insert("ratio".into(), model.ratio);

    report.spectrum = Some(SpectrumSummary::new(&fd));
    report.degeneracy = Some(clusters);
    report.ssb = Some(verdict);
    Ok(report)
}

// -------------------------------------------------------------- pair lemma

/// Random orthogonal involution with both +1 and -1 eigenvalues, plus a
/// unit vector whose overlap with its own image is exactly `s`.
fn involution_with_overlap(rng: &mut Pcg64, dim: usize, s: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= dot * bi;
            }
        }
        let nv: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nv > 1e-3 {
            v.iter_mut().for_each(|x| *x /= nv);
            basis.push(v);
        }
    }
    let mut signs: Vec<f64> = (0..dim)
        .map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
        .collect();
    signs[0] = 1.0;
    signs[1] = -1.0;
    let mut mat = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = 0.0;
            for (k, bvec) in basis.iter().enumerate() {
                acc += bvec[i] * signs[k] * bvec[j];
            }
            mat[i * dim + j] = acc;
        }
    }
    let theta = 0.5 * s.acos();
    let (ct, st) = (theta.cos(), theta.sin());
    let a: Vec<f64> = (0..dim)
        .map(|i| ct * basis[0][i] + st * basis[1][i])
        .collect();
    let b: Vec<f64> = (0..dim)
        .map(|i| ct * basis[0][i] - st * basis[1][i])
        .collect();
    (mat, a, b)
}

fn pair_lemma(resolver: &Resolver, out: &Path) -> anyhow::Result<Report> {
    let trials = resolver.u32_param(|p| p.trials, 1000);
    let seed = resolver.u64_param(|p| p.seed, 42);

    let mut config = base_config(resolver, "pair-lemma", None);
    param(&mut config, "trials", trials);
    param(&mut config, "seed", seed);
    let mut report = Report::new(config);

    let mut rng = Pcg64::seed_from_u64(seed);
    let mut worst_overlap: f64 = 0.0;
    let mut worst_exchange: f64 = 0.0;
    let mut worst_span: f64 = 0.0;
    let mut worst_eigen: f64 = 0.0;
    let mut rows = Vec::new();
    for trial in 0..trials {
        let dim = rng.gen_range(2usize..=8);
        let s = rng.gen_range(-0.99f64..0.99);
        let (mat, a, b) = involution_with_overlap(&mut rng, dim, s);
        let u = SymmetryOp::Custom(DenseInvolution::new(dim, mat)?);
        let (l, r) = build_nonoverlapping_pair(&a, &b, &u, 1.0, 1e-8)?;
        let overlap = inner(&l, &r, 1.0).abs();
        let ul = u.apply(&l)?;
        let exchange = norm(
            &ul.iter().zip(&r).map(|(x, y)| x - y).collect::<Vec<_>>(),
            1.0,
        );
        let mut span: f64 = 0.0;
        for v in [&a, &b] {
            let cl = inner(v, &l, 1.0);
            let cr = inner(v, &r, 1.0);
            let recon: Vec<f64> = l.iter().zip(&r).map(|(x, y)| cl * x + cr * y).collect();
            span = span.max(norm(
                &v.iter().zip(&recon).map(|(x, y)| x - y).collect::<Vec<_>>(),
                1.0,
            ));
        }
        let (plus, minus) = symmetry_respecting_pair(&l, &r, 1.0, 1e-10)?;
        let uplus = u.apply(&plus)?;
        let uminus = u.apply(&minus)?;
        let eig = norm(
            &uplus
                .iter()
                .zip(&plus)
                .map(|(x, y)| x - y)
                .collect::<Vec<_>>(),
            1.0,
        )
        .max(norm(
            &uminus
                .iter()
                .zip(&minus)
                .map(|(x, y)| x + y)
                .collect::<Vec<_>>(),
            1.0,
        ));
        worst_overlap = worst_overlap.max(overlap);
        worst_exchange = worst_exchange.max(exchange);
        worst_span = worst_span.max(span);
        worst_eigen = worst_eigen.max(eig);
        rows.push(vec![
            trial.to_string(),
            dim.to_string(),
            fmt_f64(s),
            fmt_f64(overlap),
            fmt_f64(exchange),
            fmt_f64(span),
        ]);
    }
    write_csv(
        out,
        "trials.csv",
        &[
            "trial",
            "dim",
            "overlap_ab",
            "pair_overlap",
            "exchange_defect",
            "span_defect",
        ],
        &rows,
    )?;
    report.tables.push("trials.csv".into());

    report
        .checks
        .push(Check::less("worst pair overlap", worst_overlap, 1e-12));
    report
        .checks
        .push(Check::less("worst exchange defect", worst_exchange, 1e-12));
    report
        .checks
        .push(Check::less("worst span defect", worst_span, 1e-12));
    report
        .checks
        .push(Check::less("worst eigenvalue defect", worst_eigen, 1e-12));
    report.values.insert("trials_run".into(), trials as f64);
    Ok(report)
}

// --------------------------------------------------------------- catalogue

pub fn print_catalog() {
    println!("experiments:");
    for (name, blurb) in EXPERIMENTS {
        println!("  {name:<26} {blurb}");
    }
    println!();
    println!("figures (emit plot data as CSV):");
    println!("  1  quartic double well, sampled x, V(x)");
    println!("  2  factorized sextic well with its ground form, x, V(x), f(x)");
    println!("  3  double oscillator, sampled x, V(x)");
    println!("  4  finite square double well, piecewise segments");
    println!("  5  decoupled double well, piecewise segments (walls blank)");
    println!();
    println!("defaults: hbar = m = 1; degeneracy tolerance 1e-8;");
    println!("geometry a = 2, b = 0.5; sombrero lambda = mu = 1;");
    println!("spinor frequencies (golden ratio, 1); output directory ./out");
    println!("(override with SSB_LAB_OUT or --out).");
}
