use otto_core::cycle::{self, heats_and_work, operation_mode};
use otto_core::engine::{
    eta_mew_ht, eta_mew_lt, eta_mew_ss, eta_ss_max, eta_w_ht, eta_w_lt, eta_w_ss, loss_ew_ad,
    loss_report, loss_w_ad, work_ratio,
};
use otto_core::exec::map_slice;
use otto_core::fridge::{tau_from_zeta_c, zeta_chi_ht, zeta_chi_lt, zeta_chi_ss, zeta_max_ss};
use otto_core::protocol::{lambda_of_ramp, FrequencyRamp, RampShape};
use otto_core::{
    Adiabaticity, Drive, Execution, Frequencies, OperationMode, Reservoirs, Result, TempRegime,
};
use serde_json::{json, Value};

use crate::table::{rounded, Table};

fn collect_rows(table: &mut Table, rows: Vec<Result<Vec<f64>>>) -> Result<()> {
    for row in rows {
        table.push(row?);
    }
    Ok(())
}

pub fn engine_curves(grid: &[f64], exec: Execution) -> Result<Table> {
    let mut table = Table::new(vec![
        "eta_C",
        "eta_mew_ht",
        "eta_mew_lt",
        "eta_w_ht",
        "eta_w_lt",
        "eta_mew_ss",
        "eta_w_ss",
        "eta_ss_max",
        "delta_mew_w_ht",
        "delta_mew_w_ss",
    ]);
    let rows = map_slice(exec, grid, |&eta_c| {
        let mew_ht = eta_mew_ht(eta_c)?;
        let w_ht = eta_w_ht(eta_c)?;
        let mew_ss = eta_mew_ss(1.0 - eta_c)?;
        let w_ss = eta_w_ss(eta_c)?;
        Ok(vec![
            eta_c,
            mew_ht,
            eta_mew_lt(eta_c)?,
            w_ht,
            eta_w_lt(eta_c)?,
            mew_ss,
            w_ss,
            eta_ss_max(eta_c)?,
            mew_ht - w_ht,
            mew_ss - w_ss,
        ])
    });
    collect_rows(&mut table, rows)?;
    Ok(table)
}

/// Sudden-switch columns are `nan` below `zeta_C = 1`, where no cooling
/// window exists.
pub fn fridge_curves(grid: &[f64], exec: Execution) -> Result<Table> {
    let mut table = Table::new(vec![
        "zeta_C",
        "zeta_chi_ht",
        "zeta_chi_lt",
        "zeta_chi_ss",
        "zeta_max_ss",
    ]);
    let rows = map_slice(exec, grid, |&zeta_c| {
        let (chi_ss, max_ss) = if zeta_c >= 1.0 {
            (zeta_chi_ss(tau_from_zeta_c(zeta_c))?, zeta_max_ss(zeta_c)?)
        } else {
            (f64::NAN, f64::NAN)
        };
        Ok(vec![
            zeta_c,
            zeta_chi_ht(zeta_c)?,
            zeta_chi_lt(zeta_c)?,
            chi_ss,
            max_ss,
        ])
    });
    collect_rows(&mut table, rows)?;
    Ok(table)
}

pub fn loss_compare(grid: &[f64], exec: Execution) -> Result<Table> {
    let mut table = Table::new(vec![
        "eta_C",
        "R_ew_ad",
        "R_w_ad",
        "R_ew_ss",
        "R_w_ss",
        "work_ratio_ad",
        "work_ratio_ss",
    ]);
    let rows = map_slice(exec, grid, |&eta_c| {
        let tau = 1.0 - eta_c;
        Ok(vec![
            eta_c,
            loss_ew_ad(eta_c)?,
            loss_w_ad(eta_c)?,
            loss_report(eta_mew_ss(tau)?, eta_c)?.r,
            loss_report(eta_w_ss(eta_c)?, eta_c)?.r,
            work_ratio(Drive::Adiabatic, tau)?,
            work_ratio(Drive::SuddenSwitch, tau)?,
        ])
    });
    collect_rows(&mut table, rows)?;
    Ok(table)
}

#[derive(Clone, Copy, Debug)]
pub enum Stroke {
    Compression,
    Expansion,
}

pub struct LambdaArgs {
    pub shape: RampShape,
    pub stroke: Stroke,
    pub omega_c: f64,
    pub omega_h: f64,
    pub rtol: f64,
    pub atol: f64,
}

pub fn lambda_table(args: &LambdaArgs, durations: &[f64], exec: Execution) -> Result<Table> {
    let f = Frequencies::new(args.omega_c, args.omega_h)?;
    let mut table = Table::new(vec!["T", "lambda"]);
    let rows = map_slice(exec, durations, |&t| {
        let ramp = match args.stroke {
            Stroke::Compression => FrequencyRamp::compression(args.shape, &f, t)?,
            Stroke::Expansion => FrequencyRamp::expansion(args.shape, &f, t)?,
        };
        Ok(vec![t, lambda_of_ramp(&ramp, args.rtol, args.atol)?.lambda])
    });
    collect_rows(&mut table, rows)?;
    Ok(table)
}

pub struct CycleArgs {
    pub beta_c: f64,
    pub beta_h: f64,
    pub omega_c: f64,
    pub omega_h: f64,
    pub drive: CycleDrive,
    pub regime: TempRegime,
}

pub enum CycleDrive {
    Adiabatic,
    SuddenSwitch,
    Custom(f64),
    Ramp { shape: RampShape, duration: f64 },
}

/// Energetics of one cycle as JSON, plus its operation mode.
pub fn cycle_report(args: &CycleArgs, digits: usize) -> Result<(Value, OperationMode)> {
    let r = Reservoirs::new(args.beta_c, args.beta_h)?;
    let f = Frequencies::new(args.omega_c, args.omega_h)?;
    let (lam, drive_name) = match args.drive {
        CycleDrive::Adiabatic => (Adiabaticity::adiabatic(), "adiabatic"),
        CycleDrive::SuddenSwitch => (Adiabaticity::sudden_switch(&f), "sudden-switch"),
        CycleDrive::Custom(l) => (Adiabaticity::custom(l)?, "custom"),
        CycleDrive::Ramp { shape, duration } => {
            let ramp = FrequencyRamp::compression(shape, &f, duration)?;
            let l = lambda_of_ramp(
                &ramp,
                otto_core::protocol::DEFAULT_RTOL,
                otto_core::protocol::DEFAULT_ATOL,
            )?;
            (Adiabaticity::custom(l.lambda)?, "ramp")
        }
    };
    let e = heats_and_work(&r, &f, &lam, args.regime);
    let mode = operation_mode(&e);
    let n = |v: f64| rounded(v, digits);
    let value = json!({
        "inputs": {
            "beta_c": n(args.beta_c),
            "beta_h": n(args.beta_h),
            "omega_c": n(args.omega_c),
            "omega_h": n(args.omega_h),
            "drive": drive_name,
            "regime": args.regime,
        },
        "lambda": n(lam.lambda()),
        "z": n(f.z()),
        "tau": n(r.tau()),
        "eta_carnot": n(r.eta_carnot()),
        "zeta_carnot": n(r.zeta_carnot()),
        "energies": {
            "h_a": n(e.energies.h_a),
            "h_b": n(e.energies.h_b),
            "h_c": n(e.energies.h_c),
            "h_d": n(e.energies.h_d),
        },
        "q_h": n(e.q_h),
        "q_c": n(e.q_c),
        "w_ext": n(e.w_ext),
        "w_in": n(e.w_in()),
        "mode": mode,
        "efficiency": cycle::efficiency(&e).map(n).unwrap_or(Value::Null),
        "cop": cycle::cop(&e).map(n).unwrap_or(Value::Null),
    });
    Ok((value, mode))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn engine_columns_ordered() {
        let grid: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
        let t = engine_curves(&grid, Execution::Sequential).unwrap();
        for row in &t.rows {
            assert!(row[2] >= row[1] && row[1] >= row[3]);
        }
    }

    #[test]
    fn fridge_nan_below_one() {
        let t = fridge_curves(&[0.5, 1.0, 2.0], Execution::Sequential).unwrap();
        assert!(t.rows[0][3].is_nan() && t.rows[0][4].is_nan());
        assert_eq!(t.rows[1][3], 0.0);
        assert_eq!(t.rows[1][4], 0.0);
        assert!(t.rows[2][3] > 0.0);
    }

    #[test]
    fn parallel_rows_match_sequential() {
        let grid: Vec<f64> = (1..100).map(|i| i as f64 / 100.0).collect();
        assert_eq!(
            loss_compare(&grid, Execution::Sequential).unwrap(),
            loss_compare(&grid, Execution::Parallel).unwrap()
        );
    }
}
