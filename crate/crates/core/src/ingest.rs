//! CSV ingestion and serialization for price series.
//!
//! Input is UTF-8, comma-delimited, with a required header row. Column
//! names and the date pattern are configurable; rows whose value cell is
//! empty are skipped and counted. Rows are sorted by date after parsing,
//! so unsorted exports are accepted; duplicate dates are a hard error.

use std::io::{Read, Write};
use std::path::Path;

use chrono::format::{Item, StrftimeItems};
use chrono::NaiveDate;

use crate::error::{EmhError, Result};
use crate::series::{PricePoint, PriceSeries, MIN_SERIES_LEN};

/// Default date pattern (ISO-8601 day resolution).
pub const DEFAULT_DATE_FORMAT: &str = "%Y-%m-%d";

/// Column names and parsing options for a CSV load.
#[derive(Clone, Debug)]
pub struct CsvSpec {
    pub date_column: String,
    pub value_column: String,
    pub date_format: String,
    /// Strip `,` thousands separators from value cells before parsing.
    pub strip_thousands: bool,
}

impl Default for CsvSpec {
    fn default() -> Self {
        Self {
            date_column: "Date".to_string(),
            value_column: "Close".to_string(),
            date_format: DEFAULT_DATE_FORMAT.to_string(),
            strip_thousands: false,
        }
    }
}

/// Result of a CSV load: the validated series plus the count of rows that
/// were skipped for having an empty value cell.
#[derive(Clone, Debug)]
pub struct ParsedCsv {
    pub series: PriceSeries,
    pub rows_skipped: usize,
}

/// Rejects date patterns chrono cannot format or parse.
pub fn validate_date_format(pattern: &str) -> Result<()> {
    if StrftimeItems::new(pattern).any(|item| matches!(item, Item::Error)) {
        return Err(EmhError::InvalidDateFormat(pattern.to_string()));
    }
    Ok(())
}

/// Parses a CSV stream into a date-sorted `PriceSeries`.
///
/// Row numbers in errors are 1-based file lines (the header is row 1).
pub fn parse_csv_reader<R: Read>(label: &str, reader: R, spec: &CsvSpec) -> Result<ParsedCsv> {
    validate_date_format(&spec.date_format)?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr.headers()?.clone();
    let date_idx = headers
        .iter()
        .position(|h| h == spec.date_column)
        .ok_or_else(|| EmhError::MissingColumn(spec.date_column.clone()))?;
    let value_idx = headers
        .iter()
        .position(|h| h == spec.value_column)
        .ok_or_else(|| EmhError::MissingColumn(spec.value_column.clone()))?;

    let mut rows: Vec<(usize, NaiveDate, f64)> = Vec::new();
    let mut rows_skipped = 0usize;
    for (i, record) in rdr.records().enumerate() {
        let row = i + 2;
        let record = record?;
        let value_raw = record.get(value_idx).unwrap_or("");
        if value_raw.is_empty() {
            rows_skipped += 1;
            continue;
        }
        let date_raw = record.get(date_idx).unwrap_or("");
        let date =
            NaiveDate::parse_from_str(date_raw, &spec.date_format).map_err(|_| EmhError::BadCell {
                row,
                field: "date",
                value: date_raw.to_string(),
            })?;
        let cleaned = if spec.strip_thousands {
            value_raw.replace(',', "")
        } else {
            value_raw.to_string()
        };
        let close: f64 = cleaned.parse().map_err(|_| EmhError::BadCell {
            row,
            field: "value",
            value: value_raw.to_string(),
        })?;
        rows.push((row, date, close));
    }

    rows.sort_by_key(|&(_, date, _)| date);
    for w in rows.windows(2) {
        if w[0].1 == w[1].1 {
            return Err(EmhError::DuplicateDate {
                row: w[1].0,
                date: w[1].1,
            });
        }
    }
    if rows.len() < MIN_SERIES_LEN {
        return Err(EmhError::TooShort {
            label: label.to_string(),
            n: rows.len(),
            min: MIN_SERIES_LEN,
        });
    }

    let points = rows
        .into_iter()
        .map(|(_, date, close)| PricePoint { date, close })
        .collect();
    Ok(ParsedCsv {
        series: PriceSeries::new(label, points)?,
        rows_skipped,
    })
}

/// Parses CSV text; see [`parse_csv_reader`].
pub fn parse_csv_str(label: &str, text: &str, spec: &CsvSpec) -> Result<ParsedCsv> {
    parse_csv_reader(label, text.as_bytes(), spec)
}

/// Loads a CSV file, labelling the series by the file stem.
pub fn parse_csv_path(path: &Path, spec: &CsvSpec) -> Result<ParsedCsv> {
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".to_string());
    let file = std::fs::File::open(path)?;
    parse_csv_reader(&label, file, spec)
}

/// Writes a series in the same CSV format the parser reads.
///
/// Closes are written with the shortest representation that round-trips,
/// so `parse_csv` of the output reproduces the series exactly.
pub fn write_csv<W: Write>(series: &PriceSeries, spec: &CsvSpec, writer: W) -> Result<()> {
    validate_date_format(&spec.date_format)?;
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record([spec.date_column.as_str(), spec.value_column.as_str()])?;
    for p in series.points() {
        wtr.write_record([
            p.date.format(&spec.date_format).to_string(),
            format!("{}", p.close),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Serializes a series to a CSV string; see [`write_csv`].
pub fn to_csv_string(series: &PriceSeries, spec: &CsvSpec) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(series, spec, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}
