//! Matrix file I/O.
//!
//! JSON format: `{"rows": m, "cols": n, "entries": [[re, im], ...]}` with
//! `rows * cols` finite entries in row-major order.
//!
//! CSV format (real matrices only): first line `rows,cols`, then one
//! comma-separated line per row.

use anyhow::{bail, Context};
use serde::Deserialize;

use gknorms_core::{Complex, DenseMatrix};

#[derive(Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

pub fn read_matrix(path: &str, format: &str) -> anyhow::Result<DenseMatrix> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    match format {
        "json" => read_json(&text),
        "csv" => read_csv(&text),
        other => bail!("unknown format: {other}"),
    }
}

fn read_json(text: &str) -> anyhow::Result<DenseMatrix> {
    let file: MatrixFile = serde_json::from_str(text).context("parsing matrix JSON")?;
    if file.entries.len() != file.rows * file.cols {
        bail!(
            "matrix file declares {}x{} but carries {} entries",
            file.rows,
            file.cols,
            file.entries.len()
        );
    }
    let entries: Vec<Complex> = file
        .entries
        .iter()
        .map(|&[re, im]| Complex::new(re, im))
        .collect();
    DenseMatrix::new(file.rows, file.cols, entries).map_err(|e| anyhow::anyhow!("{e}"))
}

fn read_csv(text: &str) -> anyhow::Result<DenseMatrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().context("empty CSV matrix file")?;
    let dims: Vec<usize> = header
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .context("CSV header must be `rows,cols`")?;
    if dims.len() != 2 {
        bail!("CSV header must be `rows,cols`");
    }
    let (rows, cols) = (dims[0], dims[1]);
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, line) in lines.enumerate() {
        if i >= rows {
            bail!("CSV file has more than {rows} data rows");
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .with_context(|| format!("parsing CSV row {}", i + 1))?;
        if vals.len() != cols {
            bail!("CSV row {} has {} values, expected {cols}", i + 1, vals.len());
        }
        entries.extend(vals.into_iter().map(|v| Complex::new(v, 0.0)));
    }
    if entries.len() != rows * cols {
        bail!("CSV file has fewer than {rows} data rows");
    }
    DenseMatrix::new(rows, cols, entries).map_err(|e| anyhow::anyhow!("{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_values() {
        let m = read_csv("2,2\n1,1\n1,-1\n").unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m[(1, 1)].re, -1.0);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"rows":1,"cols":2,"entries":[[1.0,0.5],[-2.0,0.0]]}"#;
        let m = read_json(text).unwrap();
        assert_eq!(m[(0, 0)], Complex::new(1.0, 0.5));
    }

    #[test]
    fn json_rejects_bad_count() {
        let text = r#"{"rows":2,"cols":2,"entries":[[1.0,0.0]]}"#;
        assert!(read_json(text).is_err());
    }
}
