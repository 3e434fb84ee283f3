//! Signal and table CSV files. The first line is always a header.

use std::io::Write;
use std::path::Path;

use nabla_fc_core::simulator::Trajectory;
use nabla_fc_core::{GridIndex, SampledSignal};

use crate::error::{CliError, CliResult};
use crate::format::number;

/// Reads `k,x` or `k,x1,…,xd` rows with contiguous `k`.
///
/// Returns the first grid index and the row-major samples.
pub fn read_signal_rows(path: &Path) -> CliResult<(GridIndex, usize, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| malformed(path, e))?;
    let width = reader.headers().map_err(|e| malformed(path, e))?.len();
    if width < 2 {
        return Err(CliError::Usage(format!("{}: expected columns k,x1,…", path.display())));
    }
    let dimension = width - 1;
    let mut first = None;
    let mut data = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| malformed(path, e))?;
        let k: GridIndex = record[0]
            .parse()
            .map_err(|_| CliError::Usage(format!("{}: row {}: bad index {:?}", path.display(), i + 1, &record[0])))?;
        let start = *first.get_or_insert(k);
        if k != start + i as GridIndex {
            return Err(CliError::Usage(format!("{}: indices must be contiguous, found k={k} at row {}", path.display(), i + 1)));
        }
        for field in record.iter().skip(1) {
            let v: f64 = field
                .parse()
                .map_err(|_| CliError::Usage(format!("{}: row {}: bad number {field:?}", path.display(), i + 1)))?;
            data.push(v);
        }
    }
    match first {
        Some(first) => Ok((first, dimension, data)),
        None => Err(CliError::Data(format!("{}: no samples", path.display()))),
    }
}

fn malformed(path: &Path, e: csv::Error) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

/// Writes rows of numbers under `header`, the first column as an integer index.
pub fn write_indexed<W: Write>(out: W, header: &[String], rows: impl IntoIterator<Item = (GridIndex, Vec<f64>)>) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(header)?;
    for (k, values) in rows {
        let mut record = vec![k.to_string()];
        record.extend(values.into_iter().map(number));
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn component_header(first: &str, prefix: &str, dimension: usize) -> Vec<String> {
    let mut header = vec![first.to_string()];
    if dimension == 1 && prefix == "value" {
        header.push(prefix.to_string());
    } else {
        header.extend((1..=dimension).map(|i| format!("{prefix}{i}")));
    }
    header
}

/// `k,x1,…,xd,iters`, starting with the initial state.
pub fn write_trajectory<W: Write>(out: W, traj: &Trajectory) -> csv::Result<()> {
    let mut header = component_header("k", "x", traj.dimension());
    header.push("iters".into());
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(&header)?;
    for ((k, state), iters) in traj.states().zip(traj.iterations()) {
        let mut record = vec![k.to_string()];
        record.extend(state.iter().map(|&v| number(v)));
        record.push(iters.to_string());
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Signal in the same layout [`read_signal_rows`] accepts.
pub fn write_signal<W: Write>(out: W, signal: &SampledSignal) -> csv::Result<()> {
    let header = component_header("k", "x", signal.dimension());
    write_indexed(out, &header, signal.rows().map(|(k, r)| (k, r.to_vec())))
}

pub fn csv_error(path: &Path) -> impl FnOnce(csv::Error) -> CliError + '_ {
    move |e| match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::Io { path: path.to_path_buf(), source },
        other => CliError::Data(format!("{}: {other:?}", path.display())),
    }
}
