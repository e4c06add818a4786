//! The six subcommands.

use gravprobe::checks::{self, CheckRecord};
use gravprobe::models::fsw::{fsw_point, FswSweepRow};
use gravprobe::models::ho::{
    ho2d_qfi, ho2d_weighted_ratio, ho_eigenstate_qfi, ho_perturbed_superposition_qfi,
    ho_static_superposition_qfi, HarmonicProbe, Ho2State,
};
use gravprobe::models::isw::{isw_weighted_ratio, isw_weighted_ratio_3d};
use gravprobe::units::{UnitMode, UnitSystem};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::output::{self, records_table, write_table, Cell, Table};
use crate::CliError;

const QFI_UNITS_HO: &str = "(hbar*omega*m)^2/(M_P*c)^4";

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn report_outcome(
    config: &RunConfig,
    name: &str,
    records: Vec<CheckRecord>,
) -> Result<(), CliError> {
    if records.is_empty() {
        return Ok(());
    }
    let records: Vec<CheckRecord> = records
        .into_iter()
        .map(|r| r.with_tolerance_override(config.tolerance_override))
        .collect();
    let table = records_table(name, &records);
    let path = write_table(config, &table)?;
    output::print_records(&records);
    let failed = records.iter().filter(|r| !r.pass).count();
    println!(
        "{}: {}/{} checks passed -> {}",
        name,
        records.len() - failed,
        records.len(),
        path.display()
    );
    if failed > 0 {
        return Err(CliError::ValidationFailed(failed));
    }
    Ok(())
}

/// table1: the oscillator comparison table (natural-unit rationals in
/// units (hbar omega m)^2 / (M_P c)^4).
pub fn cmd_table1(config: &RunConfig) -> Result<(), CliError> {
    output::ensure_writable(&config.out_dir)?;
    let p1 = HarmonicProbe::new(1.0, 1, 32, UnitSystem::natural())?;
    let p2 = HarmonicProbe::new(1.0, 2, 12, UnitSystem::natural())?;
    let q0 = ho_eigenstate_qfi(&p1, 0)?.value;
    let q1 = ho_eigenstate_qfi(&p1, 1)?.value;
    let q01 = ho_static_superposition_qfi(&p1, (0, 1))?.value;

    let mut table = Table::new(
        "table1",
        &[
            "row",
            "state_1d_a",
            "state_1d_b",
            "qfi_1d_a",
            "qfi_1d_b",
            "state_2d",
            "qfi_2d",
            "weighted_ratio",
            "units",
            "method",
        ],
    );
    let rows: [(i64, &str, &str, f64, Option<f64>, Ho2State); 4] = [
        (1, "|0>", "", q0, None, Ho2State::Ground),
        (2, "|0>", "|1>", q0, Some(q1), Ho2State::Excited10),
        (
            3,
            "|0>",
            "(|0>+|1>)/sqrt2",
            q0,
            Some(q01),
            Ho2State::SupGround01,
        ),
        (4, "(|0>+|1>)/sqrt2", "", q01, None, Ho2State::Sup1001),
    ];
    for (row, sa, sb, qa, qb, state) in rows {
        let q2 = ho2d_qfi(&p2, state)?.value;
        let ratio = ho2d_weighted_ratio(&p2, state)?;
        table.push(vec![
            Cell::Integer(row),
            Cell::Text(sa.to_string()),
            Cell::Text(sb.to_string()),
            Cell::Number(qa),
            match qb {
                Some(v) => Cell::Number(v),
                None => Cell::Text(String::new()),
            },
            Cell::Text(state.label().to_string()),
            Cell::Number(q2),
            Cell::Number(ratio),
            Cell::Text(QFI_UNITS_HO.to_string()),
            Cell::Text("closed_form".to_string()),
        ]);
    }
    let path = write_table(config, &table)?;
    println!("table1 -> {}", path.display());

    if config.validate {
        report_outcome(config, "table1_report", checks::criterion_1_table1())?;
    }
    Ok(())
}

/// fsw-figure: ground-state QFI sweeps of the finite well (natural units).
pub fn cmd_fsw_figure(config: &RunConfig) -> Result<(), CliError> {
    if config.units != UnitMode::Natural {
        return Err(CliError::Config(
            "the finite-well figure is defined in natural units (hbar = c = M_P = m = 1)".into(),
        ));
    }
    output::ensure_writable(&config.out_dir)?;
    let units = UnitSystem::natural();
    let n = config.sweep_points;

    // depth sweep per width; windows scale as 1/a^2 so every curve resolves
    // its own threshold structure
    let mut depth_table = Table::new(
        "fsw_qfi_vs_depth",
        &[
            "half_width",
            "depth",
            "bound_states",
            "ground_energy",
            "qfi",
            "units",
            "method",
        ],
    );
    for a in [1.0, 1.5, 2.0] {
        let grid = linspace(0.3 / (a * a), config.fsw_v0_max / (a * a), n);
        let rows: Result<Vec<FswSweepRow>, gravprobe::Error> =
            grid.par_iter().map(|&v0| fsw_point(a, v0, units)).collect();
        for r in rows? {
            depth_table.push(vec![
                Cell::Number(r.half_width),
                Cell::Number(r.depth),
                Cell::Integer(r.bound_states as i64),
                Cell::Number(r.ground_energy),
                Cell::Number(r.qfi),
                Cell::Text("1/gamma^2 (natural units)".to_string()),
                Cell::Text("perturbative_ket".to_string()),
            ]);
        }
    }
    let p1 = write_table(config, &depth_table)?;

    let mut width_table = Table::new(
        "fsw_qfi_vs_width",
        &[
            "half_width",
            "depth",
            "bound_states",
            "ground_energy",
            "qfi",
            "units",
            "method",
        ],
    );
    let mut energy_table = Table::new(
        "fsw_qfi_vs_energy",
        &[
            "ground_energy",
            "half_width",
            "depth",
            "bound_states",
            "qfi",
            "units",
            "method",
        ],
    );
    for v0 in [10f64.sqrt(), 75f64.sqrt(), 250f64.sqrt()] {
        let grid = linspace(config.fsw_a_min, config.fsw_a_max, n);
        let rows: Result<Vec<FswSweepRow>, gravprobe::Error> =
            grid.par_iter().map(|&a| fsw_point(a, v0, units)).collect();
        for r in &rows? {
            width_table.push(vec![
                Cell::Number(r.half_width),
                Cell::Number(r.depth),
                Cell::Integer(r.bound_states as i64),
                Cell::Number(r.ground_energy),
                Cell::Number(r.qfi),
                Cell::Text("1/gamma^2 (natural units)".to_string()),
                Cell::Text("perturbative_ket".to_string()),
            ]);
            energy_table.push(vec![
                Cell::Number(r.ground_energy),
                Cell::Number(r.half_width),
                Cell::Number(r.depth),
                Cell::Integer(r.bound_states as i64),
                Cell::Number(r.qfi),
                Cell::Text("1/gamma^2 (natural units)".to_string()),
                Cell::Text("perturbative_ket".to_string()),
            ]);
        }
    }
    let p2 = write_table(config, &width_table)?;
    let p3 = write_table(config, &energy_table)?;
    println!(
        "fsw-figure -> {}, {}, {}",
        p1.display(),
        p2.display(),
        p3.display()
    );
    if config.validate {
        report_outcome(
            config,
            "fsw_figure_report",
            checks::criterion_6_fsw_figure(),
        )?;
    }
    Ok(())
}

/// ho-figure: QFI of evolved perturbed superpositions against time
/// (natural units).
pub fn cmd_ho_figure(config: &RunConfig) -> Result<(), CliError> {
    if config.units != UnitMode::Natural {
        return Err(CliError::Config(
            "the oscillator figure is defined in natural units".into(),
        ));
    }
    output::ensure_writable(&config.out_dir)?;
    let probe = HarmonicProbe::new(1.0, 1, 32, UnitSystem::natural())?;
    let ts = linspace(0.0, config.ho_t_max, config.sweep_points);
    let pairs: Vec<(usize, usize)> = [2usize, 3, 4]
        .into_iter()
        .flat_map(|n| [(0usize, n), (1usize, n)])
        .collect();

    let mut jobs = Vec::new();
    for &pair in &pairs {
        for &t in &ts {
            jobs.push((pair, t));
        }
    }
    let gamma = config.ho_gamma;
    let results: Result<Vec<f64>, _> = jobs
        .par_iter()
        .map(|&(pair, t)| ho_perturbed_superposition_qfi(&probe, pair, t, gamma).map(|q| q.value))
        .collect();
    let results = results?;

    let mut table = Table::new(
        "ho_qfi_vs_time",
        &[
            "pair_low",
            "pair_high",
            "t",
            "gamma",
            "qfi",
            "units",
            "method",
        ],
    );
    for (job, value) in jobs.iter().zip(results) {
        table.push(vec![
            Cell::Integer(job.0 .0 as i64),
            Cell::Integer(job.0 .1 as i64),
            Cell::Number(job.1),
            Cell::Number(gamma),
            Cell::Number(value),
            Cell::Text(QFI_UNITS_HO.to_string()),
            Cell::Text("fidelity_fd".to_string()),
        ]);
    }
    let path = write_table(config, &table)?;
    println!("ho-figure -> {}", path.display());
    if config.validate {
        report_outcome(
            config,
            "ho_figure_report",
            checks::criterion_7_ho_hierarchy(),
        )?;
    }
    Ok(())
}

const MEV_PER_C: f64 = 1.602176634e-13 / 2.99e8;

/// comparison: the three systems against probe energy, SI units.
pub fn cmd_comparison(config: &RunConfig) -> Result<(), CliError> {
    if config.units != UnitMode::Si {
        return Err(CliError::Config(
            "the comparison figure is defined in SI units; pass --units si".into(),
        ));
    }
    output::ensure_writable(&config.out_dir)?;
    let units = config.unit_system();
    let n = config.sweep_points;

    // sweep beyond the physically motivated windows and flag membership
    let free_rows: Result<Vec<_>, CliError> = linspace(
        config.free_sigma_max_mev / n as f64,
        2.0 * config.free_sigma_max_mev,
        n,
    )
    .into_par_iter()
    .map(|sigma_mev| {
        let probe = gravprobe::models::free::FreeGaussianProbe::new(
            config.free_p0_mev * MEV_PER_C,
            sigma_mev * MEV_PER_C,
            1.0,
            units,
        )?;
        let q = gravprobe::models::free::free_gaussian_qfi(&probe);
        let physical = sigma_mev <= config.free_sigma_max_mev;
        Ok((sigma_mev, probe.mean_energy(), q.value, physical))
    })
    .collect();
    let mut free_table = Table::new(
        "comparison_free",
        &[
            "sigma_mev_per_c",
            "energy_joule",
            "qfi",
            "in_physical_range",
            "units",
            "method",
        ],
    );
    for (sigma, energy, qfi, physical) in free_rows? {
        free_table.push(vec![
            Cell::Number(sigma),
            Cell::Number(energy),
            Cell::Number(qfi),
            Cell::Integer(physical as i64),
            Cell::Text("1/gamma^2 (SI)".to_string()),
            Cell::Text("closed_form".to_string()),
        ]);
    }

    let isw_rows: Result<Vec<_>, CliError> =
        linspace(0.5 * config.isw_a_min_nm, 2.0 * config.isw_a_max_nm, n)
            .into_par_iter()
            .map(|a_nm| {
                let probe =
                    gravprobe::models::isw::InfiniteWellProbe::new(a_nm * 1e-9, vec![1], units)?;
                let q = gravprobe::models::isw::isw_closed_forms(&probe, 1.0, &[4])?;
                let physical = a_nm >= config.isw_a_min_nm && a_nm <= config.isw_a_max_nm;
                Ok((a_nm, q.extra["mean_energy"], q.value, physical))
            })
            .collect();
    let mut isw_table = Table::new(
        "comparison_isw",
        &[
            "width_nm",
            "energy_joule",
            "qfi",
            "in_physical_range",
            "units",
            "method",
        ],
    );
    for (a, energy, qfi, physical) in isw_rows? {
        isw_table.push(vec![
            Cell::Number(a),
            Cell::Number(energy),
            Cell::Number(qfi),
            Cell::Integer(physical as i64),
            Cell::Text("1/gamma^2 (SI)".to_string()),
            Cell::Text("closed_form".to_string()),
        ]);
    }

    let omega_lo = 0.5 * config.ho_omega_min;
    let omega_hi = 2.0 * config.ho_omega_max;
    let ho_rows: Result<Vec<_>, CliError> = (0..n)
        .into_par_iter()
        .map(|i| {
            let omega = omega_lo * (omega_hi / omega_lo).powf(i as f64 / (n - 1) as f64);
            let probe = HarmonicProbe::new(omega, 1, 24, units)?;
            let q = ho_perturbed_superposition_qfi(&probe, (1, 4), 1.0, config.ho_gamma)?;
            let energy = units.hbar * omega * 3.0; // mean of levels 1 and 4 plus zero point
            let physical = omega >= config.ho_omega_min && omega <= config.ho_omega_max;
            Ok((omega, energy, q.value, physical))
        })
        .collect();
    let mut ho_table = Table::new(
        "comparison_ho",
        &[
            "omega_per_s",
            "energy_joule",
            "qfi",
            "in_physical_range",
            "units",
            "method",
        ],
    );
    let mut ho_min_phys = f64::INFINITY;
    let mut isw_max_phys = f64::NEG_INFINITY;
    let ho_rows = ho_rows?;
    for (omega, energy, qfi, physical) in &ho_rows {
        if *physical {
            ho_min_phys = ho_min_phys.min(*qfi);
        }
        ho_table.push(vec![
            Cell::Number(*omega),
            Cell::Number(*energy),
            Cell::Number(*qfi),
            Cell::Integer(*physical as i64),
            Cell::Text("1/gamma^2 (SI)".to_string()),
            Cell::Text("phase_variance".to_string()),
        ]);
    }
    for row in &isw_table.rows {
        if let (Cell::Number(q), Cell::Integer(1)) = (&row[2], &row[3]) {
            isw_max_phys = isw_max_phys.max(*q);
        }
    }

    let p1 = write_table(config, &free_table)?;
    let p2 = write_table(config, &isw_table)?;
    let p3 = write_table(config, &ho_table)?;
    println!(
        "comparison -> {}, {}, {}",
        p1.display(),
        p2.display(),
        p3.display()
    );
    println!(
        "log10(min oscillator / max well) over the physical ranges = {:.4}",
        (ho_min_phys / isw_max_phys).log10()
    );
    if config.validate {
        report_outcome(
            config,
            "comparison_report",
            checks::criterion_8_comparison(),
        )?;
    }
    Ok(())
}

/// ratio-surface: the dimensional enhancement ratio over quantum numbers.
pub fn cmd_ratio_surface(config: &RunConfig) -> Result<(), CliError> {
    output::ensure_writable(&config.out_dir)?;
    let max_n = config.ratio_max_n;
    let mut surface = Table::new(
        "ratio_surface_2d",
        &["nx", "ny", "ratio", "units", "method"],
    );
    let mut grid_max = f64::NEG_INFINITY;
    let mut max_on_diagonal = false;
    for nx in 1..=max_n {
        for ny in 1..=max_n {
            if nx == 1 && ny == 1 {
                continue; // the probe coincides with the ground state
            }
            let r = isw_weighted_ratio(nx, ny)?;
            if r > grid_max {
                grid_max = r;
                max_on_diagonal = nx == ny;
            }
            surface.push(vec![
                Cell::Integer(nx as i64),
                Cell::Integer(ny as i64),
                Cell::Number(r),
                Cell::Text("dimensionless (QFI ratio)".to_string()),
                Cell::Text("closed_form".to_string()),
            ]);
        }
    }
    let mut diag3 = Table::new(
        "ratio_surface_3d_diagonal",
        &["n", "ratio", "units", "method"],
    );
    for n in 2..=max_n {
        diag3.push(vec![
            Cell::Integer(n as i64),
            Cell::Number(isw_weighted_ratio_3d(n, n, n)?),
            Cell::Text("dimensionless (QFI ratio)".to_string()),
            Cell::Text("closed_form".to_string()),
        ]);
    }
    let p1 = write_table(config, &surface)?;
    let p2 = write_table(config, &diag3)?;
    println!("ratio-surface -> {}, {}", p1.display(), p2.display());

    if config.validate {
        let mut records = vec![
            CheckRecord::compare("ratio_surface/grid_max_is_8", 8.0, grid_max, 1e-12),
            CheckRecord::holds("ratio_surface/max_on_diagonal", max_on_diagonal),
        ];
        records.push(CheckRecord::compare(
            "ratio_surface/off_diagonal_below_8",
            441.0 / 225.0,
            isw_weighted_ratio(2, 1)?,
            1e-12,
        ));
        report_outcome(config, "ratio_surface_report", records)?;
    }
    Ok(())
}

/// validate: the full cross-check suite.
pub fn cmd_validate(config: &RunConfig) -> Result<(), CliError> {
    output::ensure_writable(&config.out_dir)?;
    if !config.validate {
        let table = records_table("validation_report", &[]);
        let path = write_table(config, &table)?;
        println!("validation disabled; empty report -> {}", path.display());
        return Ok(());
    }
    let records = checks::run_all(config.seed, config.tolerance_override);
    report_outcome(config, "validation_report", records)
}
