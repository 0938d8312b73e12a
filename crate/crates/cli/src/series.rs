//! Price and return series from CSV.
//!
//! One record per quotation time, either `value` or `timestamp,value`. A
//! header line is recognized when the value column of the first record is
//! not a number. Timestamps are kept as opaque text.

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub values: Vec<f64>,
    pub timestamps: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Prices,
    Returns,
}

impl SeriesKind {
    fn noun(self) -> &'static str {
        match self {
            SeriesKind::Prices => "price",
            SeriesKind::Returns => "return",
        }
    }

    fn min_rows(self) -> usize {
        match self {
            SeriesKind::Prices => 2,
            SeriesKind::Returns => 1,
        }
    }
}

pub fn parse_price_csv(bytes: &[u8]) -> Result<Series, CliError> {
    parse_series(bytes, SeriesKind::Prices)
}

pub fn parse_series(bytes: &[u8], kind: SeriesKind) -> Result<Series, CliError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| CliError::Input(format!("input is not UTF-8: {e}")))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut values = Vec::new();
    let mut timestamps = Vec::new();
    let mut width = None;
    for (n, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Input(format!("malformed CSV: {e}")))?;
        let row = record.position().map_or(n as u64 + 1, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if !matches!(record.len(), 1 | 2) {
            return Err(CliError::Input(format!(
                "row {row}: expected 1 or 2 columns, found {}",
                record.len()
            )));
        }
        let field = &record[record.len() - 1];
        let parsed = field.parse::<f64>();
        if n == 0 && parsed.is_err() {
            // header
            continue;
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(CliError::Input(format!(
                    "row {row}: expected {w} columns, found {}",
                    record.len()
                )))
            }
            Some(_) => {}
        }
        let value = parsed.map_err(|_| {
            CliError::Input(format!(
                "row {row}: {} {field:?} is not a number",
                kind.noun()
            ))
        })?;
        let valid = match kind {
            SeriesKind::Prices => value.is_finite() && value > 0.0,
            SeriesKind::Returns => value.is_finite(),
        };
        if !valid {
            let need = match kind {
                SeriesKind::Prices => "positive and finite",
                SeriesKind::Returns => "finite",
            };
            return Err(CliError::Input(format!(
                "row {row}: {} {value} must be {need}",
                kind.noun()
            )));
        }
        if record.len() == 2 {
            timestamps.push(record[0].to_owned());
        }
        values.push(value);
    }

    if values.is_empty() {
        return Err(CliError::Input(format!("no {} values found", kind.noun())));
    }
    if values.len() < kind.min_rows() {
        return Err(CliError::Input(format!(
            "need at least {} {} rows, found {}",
            kind.min_rows(),
            kind.noun(),
            values.len()
        )));
    }
    let timestamps = (width == Some(2)).then_some(timestamps);
    Ok(Series { values, timestamps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn message(r: Result<Series, CliError>) -> String {
        match r {
            Err(CliError::Input(m)) => m,
            other => panic!("expected input error, got {other:?}"),
        }
    }

    #[test]
    fn header_and_single_column() {
        let s = parse_price_csv(b"price\n100\n105\n").unwrap();
        assert_eq!(s.values, vec![100.0, 105.0]);
        assert_eq!(s.timestamps, None);
    }

    #[test]
    fn timestamps_are_kept() {
        let s = parse_price_csv(b"2020-01-01,100\n2020-01-02,105\n").unwrap();
        assert_eq!(s.values, vec![100.0, 105.0]);
        assert_eq!(s.timestamps.unwrap(), vec!["2020-01-01", "2020-01-02"]);
        let s = parse_price_csv(b"date,price\r\nmon,1.5\r\ntue,2\r\n").unwrap();
        assert_eq!(s.values, vec![1.5, 2.0]);
    }

    #[test]
    fn errors_name_the_row() {
        assert!(message(parse_price_csv(b"100\n-5\n")).starts_with("row 2:"));
        assert!(message(parse_price_csv(b"price\n100\n0\n")).starts_with("row 3:"));
        assert!(message(parse_price_csv(b"100\nabc\n")).contains("row 2"));
        assert!(message(parse_price_csv(b"100\n1,2,3\n")).contains("row 2"));
        assert!(message(parse_price_csv(b"t,100\n101\n")).contains("row 2"));
        assert!(message(parse_price_csv(b"")).contains("no price"));
        assert!(message(parse_price_csv(b"price\n100\n")).contains("at least 2"));
        assert!(message(parse_price_csv(b"100\ninf\n")).contains("row 2"));
    }

    #[test]
    fn returns_may_be_negative() {
        let s = parse_series(b"h\n0.1\n-0.2\n", SeriesKind::Returns).unwrap();
        assert_eq!(s.values, vec![0.1, -0.2]);
        assert!(parse_series(b"0.5\n", SeriesKind::Returns).is_ok());
        assert!(parse_series(b"nan\n", SeriesKind::Returns).is_err());
    }
}
