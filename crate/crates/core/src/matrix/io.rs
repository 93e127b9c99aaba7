//! Plain-text matrix format: a `rows cols` header line followed by `rows`
//! lines of `cols` whitespace-separated scalars.

use std::io::{BufRead, Write};

use super::{Matrix, Scalar};
use crate::error::{MatmulError, Result};

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(MatmulError::Parse { line, msg: msg.into() })
}

pub fn read_matrix<T: Scalar, R: BufRead>(reader: R) -> Result<Matrix<T>> {
    let mut lines = reader
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));

    let (hline, header) = match lines.next() {
        Some((n, l)) => (n, l?),
        None => return parse_err(1, "empty input, expected \"rows cols\" header"),
    };
    let dims: Vec<&str> = header.split_whitespace().collect();
    let [r, c] = dims[..] else {
        return parse_err(hline, format!("expected \"rows cols\", got {header:?}"));
    };
    let parse_dim = |s: &str| match s.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => parse_err(hline, format!("invalid extent {s:?}")),
    };
    let (rows, cols) = (parse_dim(r)?, parse_dim(c)?);

    let mut data = Vec::with_capacity(rows * cols);
    for row in 0..rows {
        let (n, line) = match lines.next() {
            Some((n, l)) => (n, l?),
            None => return parse_err(hline + row + 1, format!("expected {rows} rows, found {row}")),
        };
        let before = data.len();
        for tok in line.split_whitespace() {
            match tok.parse::<T>() {
                Ok(v) => data.push(v),
                Err(_) => return parse_err(n, format!("invalid scalar {tok:?}")),
            }
        }
        if data.len() - before != cols {
            return parse_err(n, format!("expected {cols} entries, found {}", data.len() - before));
        }
    }
    if let Some((n, _)) = lines.next() {
        return parse_err(n, "trailing data after last row");
    }
    Matrix::new(rows, cols, data)
}

pub fn write_matrix<T: Scalar, W: Write>(m: &Matrix<T>, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", m.rows(), m.cols())?;
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|v| v.to_text()).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_integer_matrix() {
        let m: Matrix<i64> = read_matrix("2 3\n1 2 3\n4 5 -6\n".as_bytes()).unwrap();
        assert_eq!(m, Matrix::from_rows(&[[1, 2, 3], [4, 5, -6]]).unwrap());
    }

    #[test]
    fn writes_integers_verbatim() {
        let m = Matrix::from_rows(&[[19i64, 22], [43, 50]]).unwrap();
        let mut buf = Vec::new();
        write_matrix(&m, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "2 2\n19 22\n43 50\n");
    }

    #[test]
    fn reals_round_trip_exactly() {
        let m = Matrix::from_rows(&[[0.1f64, -1.0 / 3.0], [1e-300, 12345.678]]).unwrap();
        let mut buf = Vec::new();
        write_matrix(&m, &mut buf).unwrap();
        let back: Matrix<f64> = read_matrix(buf.as_slice()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = read_matrix::<i64, _>("2 2\n1 2\n3 x\n".as_bytes()).unwrap_err();
        assert!(matches!(e, MatmulError::Parse { line: 3, .. }), "{e}");
        let e = read_matrix::<i64, _>("2 2\n1 2 3\n".as_bytes()).unwrap_err();
        assert!(matches!(e, MatmulError::Parse { line: 2, .. }), "{e}");
        let e = read_matrix::<i64, _>("".as_bytes()).unwrap_err();
        assert!(matches!(e, MatmulError::Parse { .. }));
        let e = read_matrix::<i64, _>("0 2\n".as_bytes()).unwrap_err();
        assert!(matches!(e, MatmulError::Parse { line: 1, .. }));
        let e = read_matrix::<i64, _>("1 1\n1\n2\n".as_bytes()).unwrap_err();
        assert!(matches!(e, MatmulError::Parse { line: 3, .. }));
    }
}
