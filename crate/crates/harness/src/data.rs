//! CSV ingestion. Schema: header `u,delta,z1..zd[,y]`, `delta` in `{0, 1}`.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use ipcw_core::survival::{CensoredObservation, CensoredSample};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    U,
    Delta,
    Z(usize),
    Y,
}

fn parse_header(header: &csv::StringRecord) -> Result<Vec<Column>> {
    let mut columns = Vec::with_capacity(header.len());
    for (i, name) in header.iter().enumerate() {
        let name = name.trim();
        let col = match name {
            "u" => Column::U,
            "delta" => Column::Delta,
            "y" => Column::Y,
            z if z.starts_with('z') => match z[1..].parse::<usize>() {
                Ok(k) if k >= 1 => Column::Z(k),
                _ => return Err(csv_err(1, name, "covariate columns are named z1, z2, ...")),
            },
            other => {
                return Err(csv_err(
                    1,
                    other,
                    &format!("unknown column at position {}", i + 1),
                ))
            }
        };
        columns.push(col);
    }
    let expected: Vec<Column> = {
        let d = columns.iter().filter(|c| matches!(c, Column::Z(_))).count();
        let mut e = vec![Column::U, Column::Delta];
        e.extend((1..=d).map(Column::Z));
        if columns.contains(&Column::Y) {
            e.push(Column::Y);
        }
        e
    };
    if columns != expected {
        return Err(HarnessError::CsvFormat(format!(
            "header must read u,delta,z1..zd[,y]; got {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(columns)
}

fn csv_err(row: usize, column: &str, message: &str) -> HarnessError {
    HarnessError::Csv {
        row,
        column: column.to_string(),
        message: message.to_string(),
    }
}

fn column_name(c: Column) -> String {
    match c {
        Column::U => "u".into(),
        Column::Delta => "delta".into(),
        Column::Z(k) => format!("z{k}"),
        Column::Y => "y".into(),
    }
}

/// Reads observations from CSV text. Row numbers in diagnostics count the
/// header as row 1.
pub fn read_observations(reader: impl Read) -> Result<Vec<CensoredObservation>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| HarnessError::CsvFormat(e.to_string()))?
        .clone();
    let columns = parse_header(&header)?;
    let mut out = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| HarnessError::CsvFormat(format!("row {row}: {e}")))?;
        let mut obs = CensoredObservation::new(0.0, false);
        for (field, &col) in record.iter().zip(&columns) {
            match col {
                Column::Delta => {
                    obs.delta = match field {
                        "0" => false,
                        "1" => true,
                        _ => {
                            return Err(csv_err(
                                row,
                                "delta",
                                &format!("expected 0 or 1, got {field:?}"),
                            ))
                        }
                    }
                }
                _ => {
                    let v: f64 = field.parse().map_err(|_| {
                        csv_err(row, &column_name(col), &format!("not a number: {field:?}"))
                    })?;
                    if !v.is_finite() {
                        return Err(csv_err(row, &column_name(col), "value must be finite"));
                    }
                    match col {
                        Column::U => obs.u = v,
                        Column::Z(_) => obs.z.push(v),
                        Column::Y => obs.y = Some(v),
                        Column::Delta => unreachable!(),
                    }
                }
            }
        }
        out.push(obs);
    }
    Ok(out)
}

pub fn read_sample(path: &Path, tau: f64) -> Result<CensoredSample> {
    let file = File::open(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let obs = read_observations(file)?;
    Ok(CensoredSample::new(obs, tau)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_covariates_and_response() {
        let text = "u,delta,z1,z2,y\n0.5,1,0.1,0.2,0.7\n0.25,0,0.3,0.4,0.1\n";
        let obs = read_observations(text.as_bytes()).unwrap();
        assert_eq!(obs.len(), 2);
        assert_eq!(obs[0].z, vec![0.1, 0.2]);
        assert_eq!(obs[1].y, Some(0.1));
        assert!(!obs[1].delta);
    }

    #[test]
    fn rejects_bad_delta() {
        let err = read_observations("u,delta\n1,1\n2,yes\n".as_bytes()).unwrap_err();
        match err {
            HarnessError::Csv { row, column, .. } => {
                assert_eq!(row, 3);
                assert_eq!(column, "delta");
            }
            e => panic!("{e}"),
        }
        assert!(read_observations("u,delta\n1,2\n".as_bytes()).is_err());
        assert!(read_observations("u,delta\n1,\n".as_bytes()).is_err());
    }

    #[test]
    fn rejects_bad_numbers_and_headers() {
        let err = read_observations("u,delta,z1\n1,1,abc\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("row 2, column z1"), "{err}");
        assert!(read_observations("u,delta,z2\n1,1,0\n".as_bytes()).is_err());
        assert!(read_observations("delta,u\n1,1\n".as_bytes()).is_err());
        assert!(read_observations("u,delta\n1,1,3\n".as_bytes()).is_err());
        assert!(read_observations("u,delta\nNaN,1\n".as_bytes()).is_err());
    }
}
