//! `provchain gasreport --storage PATH --event PATH`

use std::fs;
use std::path::Path;

use provchain_core::contract_vm::{GasPoint, GasSeries, RecordMode};

use super::CliError;

/// Pull one series out of a gas.csv. Single-mode files are taken as-is
/// (warning if mislabeled); dual-mode files yield the requested mode.
fn extract(path: &Path, want: RecordMode) -> Result<Vec<GasPoint>, CliError> {
    let body = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let series = GasSeries::from_csv(&body)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let mut modes: Vec<RecordMode> = Vec::new();
    for p in &series.points {
        if !modes.contains(&p.mode) {
            modes.push(p.mode);
        }
    }
    let points = if modes.len() == 1 {
        if modes[0] != want {
            eprintln!(
                "warning: {} holds a {}-mode series but was passed as --{}",
                path.display(),
                modes[0],
                want
            );
        }
        series.points
    } else {
        series.mode_points(want)
    };
    let mut points = points;
    points.sort_by_key(|p| p.n);
    Ok(points)
}

fn schedule_id(path: &Path) -> Result<String, CliError> {
    let body = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(GasSeries::from_csv(&body)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?
        .schedule_id)
}

fn slope(points: &[GasPoint]) -> f64 {
    if points.len() < 2 {
        return points.first().map(|p| p.total_gas as f64).unwrap_or(0.0);
    }
    let first = points.first().unwrap();
    let last = points.last().unwrap();
    (last.total_gas - first.total_gas) as f64 / (last.n - first.n) as f64
}

pub fn run(storage_path: &Path, event_path: &Path) -> Result<(), CliError> {
    let storage = extract(storage_path, RecordMode::Storage)?;
    let event = extract(event_path, RecordMode::Event)?;
    let storage_schedule = schedule_id(storage_path)?;
    let event_schedule = schedule_id(event_path)?;

    if storage_schedule != event_schedule {
        return Err(CliError::usage(format!(
            "mismatched scenarios: schedule {storage_schedule} vs {event_schedule}"
        )));
    }
    let storage_ns: Vec<u64> = storage.iter().map(|p| p.n).collect();
    let event_ns: Vec<u64> = event.iter().map(|p| p.n).collect();
    if storage_ns != event_ns {
        return Err(CliError::usage(
            "mismatched scenarios: the two files cover different submission counts".to_string(),
        ));
    }

    if storage.iter().map(|p| p.total_gas).collect::<Vec<_>>()
        == event.iter().map(|p| p.total_gas).collect::<Vec<_>>()
    {
        eprintln!("warning: the two gas series are identical");
    }

    println!("n,storage_gas,event_gas,ratio");
    let mut event_always_below = true;
    for (s, e) in storage.iter().zip(&event) {
        let ratio = e.total_gas as f64 / s.total_gas as f64;
        if e.total_gas >= s.total_gas {
            event_always_below = false;
        }
        println!("{},{},{},{:.4}", s.n, s.total_gas, e.total_gas, ratio);
    }

    let last_ratio =
        event.last().unwrap().total_gas as f64 / storage.last().unwrap().total_gas as f64;
    println!("# schedule_id: {storage_schedule}");
    println!("# storage_slope: {:.1}", slope(&storage));
    println!("# event_slope: {:.1}", slope(&event));
    println!("# event_storage_ratio_at_max_n: {last_ratio:.4}");
    println!("# event_below_storage_at_every_n: {event_always_below}");
    if !event_always_below {
        eprintln!("warning: event-mode gas is not strictly below storage-mode gas");
    }
    Ok(())
}
