//! Plain-text matrix dump: a `rows cols` header line followed by one line
//! per row, entries in 17-significant-digit scientific notation so every
//! finite double round-trips bit-identically.

use qsvand::DenseMatrix;

use crate::CliError;

pub fn format_matrix(m: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix, CliError> {
    let bad = |msg: String| CliError::Input(format!("matrix dump: {msg}"));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty input".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|e| bad(format!("bad header {header:?}: {e}"))))
        .collect::<Result<_, _>>()?;
    let [rows, cols] = dims[..] else {
        return Err(bad(format!("header {header:?} must be `rows cols`")));
    };
    let mut data = Vec::with_capacity(rows * cols);
    for (i, line) in lines.enumerate().take(rows) {
        let before = data.len();
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|e| bad(format!("row {i}: bad entry {tok:?}: {e}")))?;
            data.push(v);
        }
        if data.len() - before != cols {
            return Err(bad(format!(
                "row {i} has {} entries, expected {cols}",
                data.len() - before
            )));
        }
    }
    if data.len() != rows * cols {
        return Err(bad(format!("expected {rows} rows, found {}", data.len() / cols.max(1))));
    }
    Ok(DenseMatrix::from_row_major(rows, cols, data))
}
