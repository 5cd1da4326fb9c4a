//! The subcommands. Each builds a [`Report`] from a resolved [`SpaceConfig`].

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::config::{SpaceConfig, Tolerances};
use super::report::{Check, DataTable, Report};
use crate::algebra::verify_clifford;
use crate::catalog::expected_symmetric;
use crate::error::Result;
use crate::geometry::{distance_from_origin, SymmetryVerdict};
use crate::group::{BallPoint, GroupElement, Space};
use crate::radial::{
    gaussian_bump, uniform_grid, Gaussian, HeatConfig, RadialFunction, RadialProfile,
};
use crate::sampling::{ball_vector, seeded_rng, standard_normal_vector, unit_vector, SweepRng};

/// Outer radius of the heat grid when `--rho-max` is not given.
const HEAT_RHO_MAX: f64 = 12.0;
/// Radii of the density and harmonicity checks in `verify`.
const VERIFY_RADII: [f64; 3] = [0.5, 1.0, 2.0];
const DENSITY_RADII: [f64; 3] = [0.3, 1.0, 2.0];
/// Metric perturbation for the harmonicity control.
const CONTROL_CENTER_SCALE: f64 = 2.0;
const FD_STEP: f64 = 1e-5;

fn random_group_element(space: &Space, rng: &mut SweepRng) -> GroupElement {
    let x = standard_normal_vector(rng, space.m());
    let z = standard_normal_vector(rng, space.k());
    let a = (0.5 * rng.sample::<f64, _>(rand_distr::StandardNormal)).exp();
    space.element(x, z, a).expect("dimensions match")
}

fn random_ball_point(space: &Space, rng: &mut SweepRng, max_r: f64) -> BallPoint {
    BallPoint::from_coordinates(&ball_vector(rng, space.dim(), max_r), space.m(), space.k())
        .expect("inside the ball")
}

pub fn check_algebra(space: &Space, tol: &Tolerances, rng: &mut SweepRng) -> Result<Vec<Check>> {
    let report = verify_clifford(space.algebra().module());
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let z = standard_normal_vector(rng, space.k());
        let j = space.algebra().j_matrix(&z)?;
        let id = DMatrix::<f64>::identity(space.m(), space.m());
        worst = worst.max((&j * &j + id * z.norm_squared()).amax());
    }
    Ok(vec![
        Check::at_most(
            "clifford_relations",
            report.max_deviation(),
            tol.tol_clifford,
        ),
        Check::at_most("j_squared", worst, tol.tol_clifford),
    ])
}

pub fn check_group(
    space: &Space,
    tol: &Tolerances,
    points: usize,
    rng: &mut SweepRng,
) -> Vec<Check> {
    let e = space.identity();
    let (mut assoc, mut ident, mut inv) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..points {
        let s = random_group_element(space, rng);
        let t = random_group_element(space, rng);
        let u = random_group_element(space, rng);
        let left = space.multiply(&space.multiply(&s, &t), &u);
        let right = space.multiply(&s, &space.multiply(&t, &u));
        assoc = assoc.max(left.max_abs_diff(&right));
        ident = ident
            .max(space.multiply(&s, &e).max_abs_diff(&s))
            .max(space.multiply(&e, &s).max_abs_diff(&s));
        let si = space.inverse(&s);
        inv = inv
            .max(space.multiply(&s, &si).max_abs_diff(&e))
            .max(space.multiply(&si, &s).max_abs_diff(&e));
    }
    vec![
        Check::at_most("group_associativity", assoc, tol.tol_group),
        Check::at_most("group_identity", ident, tol.tol_group),
        Check::at_most("group_inverse", inv, tol.tol_group),
    ]
}

/// Central-difference Jacobian of `s ↦ g·s` in `(X, Z, a)` coordinates.
fn numeric_left_translation(space: &Space, g: &GroupElement, s: &GroupElement) -> DMatrix<f64> {
    let (m, k) = (space.m(), space.k());
    let n = space.dim();
    let base = s.to_coordinates();
    let at = |c: &DVector<f64>| {
        let p = space
            .element(c.rows(0, m).into(), c.rows(m, k).into(), c[n - 1])
            .expect("a stays positive");
        space.multiply(g, &p).to_coordinates()
    };
    let mut jac = DMatrix::zeros(n, n);
    for j in 0..n {
        // the product is affine in `s`, so a wide step only reduces rounding
        let h = 1e-3 * base[j].abs().max(1.0);
        let mut fwd = base.clone();
        let mut bwd = base.clone();
        fwd[j] += h;
        bwd[j] -= h;
        jac.set_column(j, &((at(&fwd) - at(&bwd)) / (2.0 * h)));
    }
    jac
}

pub fn check_haar(space: &Space, tol: &Tolerances, rng: &mut SweepRng) -> Vec<Check> {
    let q = space.homogeneous_dimension() as i32;
    let (mut worst, mut spread) = (0.0_f64, 0.0_f64);
    for _ in 0..10 {
        let g = random_group_element(space, rng);
        let expected = g.a().powi(q + 1);
        let dets: Vec<f64> = (0..5)
            .map(|_| {
                let s = random_group_element(space, rng);
                numeric_left_translation(space, &g, &s).determinant()
            })
            .collect();
        for d in &dets {
            worst = worst.max((d - expected).abs() / expected);
        }
        let (lo, hi) = dets
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &d| {
                (lo.min(d), hi.max(d))
            });
        spread = spread.max((hi - lo) / expected);
    }
    vec![
        Check::at_most("haar_jacobian", worst, tol.tol_haar),
        Check::at_most("haar_base_point_spread", spread, tol.tol_haar * 1e-2),
    ]
}

pub fn check_models(
    space: &Space,
    tol: &Tolerances,
    points: usize,
    rng: &mut SweepRng,
) -> Result<Vec<Check>> {
    let mut round_trip = 0.0_f64;
    for _ in 0..points {
        let b = random_ball_point(space, rng, 0.95);
        let back = space.cayley_inv(&space.cayley(&b)?)?;
        round_trip = round_trip.max((back.to_coordinates() - b.to_coordinates()).amax());
        let s = random_group_element(space, rng);
        let back = space.ball_to_group(&space.group_to_ball(&s)?)?;
        let scale = s.to_coordinates().amax().max(1.0);
        round_trip = round_trip.max(back.max_abs_diff(&s) / scale);
    }
    let d = chart_differential_at_identity(space)?;
    let n = space.dim();
    let chart = (d - DMatrix::<f64>::identity(n, n) * 0.5).amax();
    Ok(vec![
        Check::at_most("cayley_round_trip", round_trip, tol.tol_cayley),
        Check::at_most("chart_differential_half_identity", chart, tol.tol_chart),
    ])
}

/// Central-difference differential of `S → B` at the identity.
fn chart_differential_at_identity(space: &Space) -> Result<DMatrix<f64>> {
    let (m, k) = (space.m(), space.k());
    let n = space.dim();
    let e = space.identity().to_coordinates();
    let at = |c: &DVector<f64>| -> Result<DVector<f64>> {
        let s = space.element(c.rows(0, m).into(), c.rows(m, k).into(), c[n - 1])?;
        Ok(space.group_to_ball(&s)?.to_coordinates())
    };
    let mut d = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut fwd = e.clone();
        let mut bwd = e.clone();
        fwd[j] += FD_STEP;
        bwd[j] -= FD_STEP;
        d.set_column(j, &((at(&fwd)? - at(&bwd)?) / (2.0 * FD_STEP)));
    }
    Ok(d)
}

/// One row per radius: closed forms, direction-averaged numeric density,
/// worst relative error and relative spread over directions.
fn density_rows(
    space: &Space,
    radii: &[f64],
    directions: usize,
    rng: &mut SweepRng,
) -> Result<DataTable> {
    let mut table = DataTable::new(
        "density",
        &[
            "rho",
            "omega_closed",
            "omega_r_form",
            "omega_numeric",
            "rel_error",
            "rel_spread",
        ],
    );
    for &rho in radii {
        let closed = space.density_omega(rho);
        let r_form = space.density_omega_r_form(rho);
        let values = (0..directions)
            .map(|_| space.volume_density_numeric(rho, &unit_vector(rng, space.dim())))
            .collect::<Result<Vec<_>>>()?;
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let err = values
            .iter()
            .map(|v| (v - closed).abs() / closed)
            .fold(0.0, f64::max);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        table.push(vec![rho, closed, r_form, mean, err, (hi - lo) / closed]);
    }
    Ok(table)
}

fn density_checks(table: &DataTable, tol: &Tolerances) -> Vec<Check> {
    let col_max = |j: usize| table.rows.iter().map(|r| r[j]).fold(0.0, f64::max);
    let closed = table
        .rows
        .iter()
        .map(|r| (r[1] - r[2]).abs() / r[1])
        .fold(0.0, f64::max);
    vec![
        Check::at_most("density_closed_forms", closed, tol.tol_closed_form),
        Check::at_most("density_numeric", col_max(4), tol.tol_density),
        Check::at_most("density_direction_spread", col_max(5), tol.tol_spread),
    ]
}

/// Paths sampled at about `rows_per_path` arc lengths; columns as in the `geodesic` command.
fn geodesic_rows(
    space: &Space,
    config: &SpaceConfig,
    directions: usize,
    rows_per_path: usize,
    rng: &mut SweepRng,
) -> Result<(DataTable, Vec<Check>)> {
    let g = &config.grid;
    let tol = &config.tolerances;
    let mut table = DataTable::new(
        "geodesic",
        &[
            "direction",
            "arc_length",
            "radius",
            "rho",
            "distance_error",
            "transverse",
            "speed_error",
        ],
    );
    let (mut transverse, mut distance, mut truncated) = (0.0_f64, 0.0_f64, false);
    for d in 0..directions {
        let dir = unit_vector(rng, space.dim());
        let path = space.geodesic_integrate(&dir, g.length, g.step)?;
        truncated |= path.truncated;
        transverse = transverse.max(path.max_transverse_deviation());
        let every = (path.samples.len() / rows_per_path.max(1)).max(1);
        for (i, s) in path.samples.iter().enumerate() {
            let rho = distance_from_origin(&s.point);
            distance = distance.max((rho - s.arc_length).abs());
            if i % every == 0 || i + 1 == path.samples.len() {
                let p = s.point.to_coordinates();
                let off = (&p - &dir * p.dot(&dir)).norm();
                table.push(vec![
                    d as f64,
                    s.arc_length,
                    s.point.radius(),
                    rho,
                    rho - s.arc_length,
                    off,
                    s.speed_error,
                ]);
            }
        }
    }
    let checks = vec![
        Check::at_most("geodesic_transverse", transverse, tol.tol_geodesic),
        Check::at_most("geodesic_distance", distance, tol.tol_distance),
        Check::holds("geodesic_full_length", !truncated),
    ];
    Ok((table, checks))
}

pub fn check_harmonicity(
    space: &Space,
    tol: &Tolerances,
    directions: usize,
    rng: &mut SweepRng,
) -> Result<Vec<Check>> {
    let f = Gaussian::default();
    let (mut spread, mut mismatch) = (0.0_f64, 0.0_f64);
    for rho in VERIFY_RADII {
        let r = space.harmonicity_check(&f, rho, directions, tol.tol_harmonic, rng)?;
        let scale = 1.0 + r.radial_value.abs();
        spread = spread.max(r.spread / scale);
        mismatch = mismatch.max(r.max_deviation / scale);
    }
    let control = space.with_center_scale(CONTROL_CENTER_SCALE)?;
    let r = control.harmonicity_check(&f, 1.0, directions, tol.tol_harmonic, rng)?;
    let control_spread = r.spread / (1.0 + r.radial_value.abs());
    Ok(vec![
        Check::at_most("harmonic_spread", spread, tol.tol_harmonic),
        Check::at_most("harmonic_matches_radial", mismatch, tol.tol_harmonic),
        Check::at_least(
            "harmonic_control_detected",
            control_spread,
            tol.tol_harmonic,
        ),
    ])
}

/// The finite-volume radial Laplacian of a Gaussian against `-(f'' + b f')`.
pub fn check_radial_laplacian(space: &Space, tol: &Tolerances) -> Result<Vec<Check>> {
    let f = Gaussian::default();
    let grid = uniform_grid(3.0, 3001)?;
    let profile = RadialProfile::sample(grid, |r| f.value(r))?;
    let lap = space.radial_laplacian(&profile)?;
    let mut worst = 0.0_f64;
    for (&rho, &v) in lap.profile.grid().iter().zip(lap.profile.values()) {
        if rho >= 0.1 {
            let exact = space.radial_generator(rho, f.d1(rho), f.d2(rho))?;
            worst = worst.max((v - exact).abs() / (1.0 + exact.abs()));
        }
    }
    Ok(vec![Check::at_most(
        "radial_laplacian",
        worst,
        tol.tol_harmonic,
    )])
}

fn symmetry_check(space: &Space, config: &SpaceConfig, report: &mut Report) -> Vec<Check> {
    let tol = &config.tolerances;
    let data = space.curvature();
    let rel = data.relative_nabla_riemann();
    let verdict = if rel <= tol.tol_symmetric {
        SymmetryVerdict::Symmetric
    } else if rel >= tol.tol_nonsymmetric {
        SymmetryVerdict::Nonsymmetric
    } else {
        SymmetryVerdict::Indeterminate
    };
    let expected = expected_symmetric(&config.spec);
    report.info("riemann_norm", data.riemann_norm());
    report.info("nabla_riemann_norm", data.nabla_riemann_norm());
    report.info("relative_nabla_riemann", rel);
    report.info("verdict", verdict);
    report.info("is_symmetric", verdict == SymmetryVerdict::Symmetric);
    report.info("expected_symmetric", expected);
    let dichotomy = if expected {
        Check::at_most("symmetry_dichotomy", rel, tol.tol_symmetric)
    } else {
        Check::at_least("symmetry_dichotomy", rel, tol.tol_nonsymmetric)
    };
    vec![
        Check::at_most(
            "riemann_symmetries",
            data.symmetry_residuals().max(),
            tol.tol_sectional,
        ),
        dichotomy,
    ]
}

pub fn check_subalgebras(
    space: &Space,
    tol: &Tolerances,
    rng: &mut SweepRng,
) -> Result<Vec<Check>> {
    let (mut second, mut sectional) = (0.0_f64, 0.0_f64);
    for _ in 0..3 {
        let x0 = unit_vector(rng, space.m());
        let z0 = unit_vector(rng, space.k());
        let r = space.totally_geodesic_check(&x0, &z0)?;
        second = second.max(r.second_fundamental_form);
        sectional = sectional.max(r.max_sectional_deviation);
    }
    Ok(vec![
        Check::at_most(
            "subalgebra_second_fundamental_form",
            second,
            tol.tol_subalgebra,
        ),
        Check::at_most("subalgebra_sectional", sectional, tol.tol_sectional),
    ])
}

fn heat_config(config: &SpaceConfig) -> HeatConfig {
    let g = &config.grid;
    HeatConfig {
        rho_max: if config.rho_max_set {
            g.rho_max
        } else {
            HEAT_RHO_MAX
        },
        n_grid: g.n_grid,
        t_end: g.t_end,
        n_steps: g.n_steps,
        ..HeatConfig::default()
    }
}

fn run_heat(
    space: &Space,
    config: &SpaceConfig,
) -> Result<(crate::radial::HeatSolution, Vec<Check>)> {
    let hc = heat_config(config);
    let grid = hc.grid()?;
    let step = grid[1] - grid[0];
    let init = gaussian_bump(space, &grid, (0.5_f64).max(3.0 * step))?;
    let sol = space.heat_solve(&hc, &init)?;
    let tol = &config.tolerances;
    let checks = vec![
        Check::at_most("heat_mass_drift", sol.mass_drift, tol.tol_mass),
        Check::at_most(
            "heat_undershoot",
            (-sol.min_value).max(0.0),
            tol.tol_positivity,
        ),
        Check::holds(
            "heat_second_moment_increasing",
            sol.second_moment_increasing(),
        ),
    ];
    Ok((sol, checks))
}

pub fn verify(config: &SpaceConfig) -> Result<Report> {
    let space = Space::from_spec(&config.spec)?;
    let tol = &config.tolerances;
    let g = &config.grid;
    let mut rng = seeded_rng(config.seed);
    let mut report = Report::new("verify", config);
    report.info("dim", space.dim());
    report.info("homogeneous_dimension", space.homogeneous_dimension());
    report.timed(|| check_algebra(&space, tol, &mut rng))?;
    report.timed(|| Ok::<_, crate::Error>(check_group(&space, tol, g.points, &mut rng)))?;
    report.timed(|| Ok::<_, crate::Error>(check_haar(&space, tol, &mut rng)))?;
    report.timed(|| check_models(&space, tol, g.points, &mut rng))?;
    report.timed(|| {
        Ok::<_, crate::Error>(density_checks(
            &density_rows(&space, &DENSITY_RADII, g.directions, &mut rng)?,
            tol,
        ))
    })?;
    report.timed(|| geodesic_rows(&space, config, g.directions, 1, &mut rng).map(|(_, c)| c))?;
    report.timed(|| check_harmonicity(&space, tol, g.directions, &mut rng))?;
    report.timed(|| check_radial_laplacian(&space, tol))?;
    let symmetry = symmetry_check(&space, config, &mut report);
    report.timed(|| Ok::<_, crate::Error>(symmetry))?;
    report.timed(|| check_subalgebras(&space, tol, &mut rng))?;
    report.timed(|| run_heat(&space, config).map(|(_, c)| c))?;
    Ok(report)
}

pub fn density(config: &SpaceConfig) -> Result<Report> {
    let space = Space::from_spec(&config.spec)?;
    let g = &config.grid;
    let mut rng = seeded_rng(config.seed);
    let mut report = Report::new("density", config);
    let radii: Vec<f64> = (1..=g.samples)
        .map(|i| g.rho_max * i as f64 / g.samples as f64)
        .collect();
    let table = density_rows(&space, &radii, g.directions, &mut rng)?;
    for c in density_checks(&table, &config.tolerances) {
        report.push(c);
    }
    report.data.push(table);
    Ok(report)
}

pub fn geodesic(config: &SpaceConfig) -> Result<Report> {
    let space = Space::from_spec(&config.spec)?;
    let mut rng = seeded_rng(config.seed);
    let mut report = Report::new("geodesic", config);
    let (table, checks) = geodesic_rows(&space, config, config.grid.directions, 20, &mut rng)?;
    for c in checks {
        report.push(c);
    }
    report.data.push(table);
    Ok(report)
}

pub fn heat(config: &SpaceConfig) -> Result<Report> {
    let space = Space::from_spec(&config.spec)?;
    let mut config = config.clone();
    config.grid.rho_max = heat_config(&config).rho_max;
    let (sol, checks) = run_heat(&space, &config)?;
    let mut report = Report::new("heat", &config);
    report.info("stiffness_ratio", sol.stiffness_ratio);
    for d in &sol.diagnostics {
        report.info("diagnostic", d);
    }
    for c in checks {
        report.push(c);
    }
    let names: Vec<String> = sol.times.iter().map(|t| format!("u(t={t})")).collect();
    let mut columns = vec!["rho"];
    columns.extend(names.iter().map(String::as_str));
    let mut profiles = DataTable::new("profiles", &columns);
    let grid = sol.profiles[0].grid();
    for (i, &rho) in grid.iter().enumerate() {
        let mut row = vec![rho];
        row.extend(sol.profiles.iter().map(|p| p.values()[i]));
        profiles.push(row);
    }
    let mut ledger = DataTable::new(
        "mass_ledger",
        &["time", "mass", "second_moment", "min_value"],
    );
    for rec in sol.ledger.iter().filter(|r| sol.times.contains(&r.time)) {
        ledger.push(vec![rec.time, rec.mass, rec.second_moment, rec.min_value]);
    }
    report.data.push(profiles);
    report.data.push(ledger);
    Ok(report)
}

pub fn curvature(config: &SpaceConfig) -> Result<Report> {
    let space = Space::from_spec(&config.spec)?;
    let mut report = Report::new("curvature", config);
    let checks = symmetry_check(&space, config, &mut report);
    for c in checks {
        report.push(c);
    }
    let n = space.dim();
    let data = space.curvature();
    let mut table = DataTable::new("sectional", &["i", "j", "sectional"]);
    for i in 0..n {
        for j in (i + 1)..n {
            let ei = DVector::from_fn(n, |p, _| if p == i { 1.0 } else { 0.0 });
            let ej = DVector::from_fn(n, |p, _| if p == j { 1.0 } else { 0.0 });
            table.push(vec![i as f64, j as f64, data.sectional(&ei, &ej)?]);
        }
    }
    report.data.push(table);
    Ok(report)
}
