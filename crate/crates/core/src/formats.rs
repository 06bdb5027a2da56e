//! Text formats shared between the library and the command line.
//!
//! Sequences are CSV with header `n,value`, rows for `n = 1, 2, ...` without
//! gaps. Zeta series are CSV with header `m,numerator,denominator`. Every
//! integer is written as an exact decimal.

use std::fmt::Display;
use std::io::{Read, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::orbits::{CountSequence, SequenceKind};

/// Serializes any `Display` value as a JSON string.
pub fn ser_display<T: Display, S: Serializer>(value: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(value)
}

/// Serializes a slice of `Display` values as a list of strings.
pub fn ser_display_vec<T: Display, S: Serializer>(values: &[T], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(|v| v.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}

#[derive(Serialize, Deserialize)]
struct SequenceRecord {
    n: u64,
    value: String,
}

/// Reads a sequence CSV into a sequence of the given kind.
pub fn read_sequence_csv<R: Read>(reader: R, kind: SequenceKind) -> Result<CountSequence> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    if headers.iter().collect::<Vec<_>>() != ["n", "value"] {
        return Err(Error::Parse(format!("expected header `n,value`, got `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let mut values = Vec::new();
    for (i, rec) in rdr.deserialize::<SequenceRecord>().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let expected = i as u64 + 1;
        if rec.n != expected {
            return Err(Error::Parse(format!("row {expected}: expected n = {expected}, got {}", rec.n)));
        }
        let v: BigInt = rec
            .value
            .parse()
            .map_err(|_| Error::Parse(format!("row {expected}: not an integer: `{}`", rec.value)))?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::Parse("sequence file has no rows".into()));
    }
    Ok(CountSequence::new(kind, values))
}

pub fn write_sequence_csv<W: Write>(writer: W, seq: &CountSequence) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    for (i, v) in seq.values().iter().enumerate() {
        wtr.serialize(SequenceRecord {
            n: i as u64 + 1,
            value: v.to_string(),
        })
        .map_err(csv_err)?;
    }
    wtr.flush().map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Serialize, Deserialize)]
struct ZetaRecord {
    m: u64,
    numerator: String,
    denominator: String,
}

/// Writes `c_0, ..., c_M` as `m,numerator,denominator` in lowest terms.
pub fn write_zeta_csv<W: Write>(writer: W, coeffs: &[BigRational]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    for (m, c) in coeffs.iter().enumerate() {
        wtr.serialize(ZetaRecord {
            m: m as u64,
            numerator: c.numer().to_string(),
            denominator: c.denom().to_string(),
        })
        .map_err(csv_err)?;
    }
    wtr.flush().map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_zeta_csv<R: Read>(reader: R) -> Result<Vec<BigRational>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize::<ZetaRecord>().enumerate() {
        let rec = rec.map_err(csv_err)?;
        if rec.m != i as u64 {
            return Err(Error::Parse(format!("expected m = {i}, got {}", rec.m)));
        }
        let bad = || Error::Parse(format!("row m = {i}: bad rational"));
        let num: BigInt = rec.numerator.parse().map_err(|_| bad())?;
        let den: BigInt = rec.denominator.parse().map_err(|_| bad())?;
        if den == BigInt::from(0) {
            return Err(bad());
        }
        out.push(BigRational::new(num, den));
    }
    Ok(out)
}

/// One row of the extended construction table.
#[derive(Clone, Debug, Serialize)]
pub struct ConstructRow {
    pub n: u64,
    pub p: String,
    pub g: String,
    #[serde(rename = "K")]
    pub k: u64,
    #[serde(rename = "F_factored")]
    pub f_factored: String,
    #[serde(rename = "F_log")]
    pub f_log: String,
    #[serde(rename = "L_exact")]
    pub l_exact: String,
    #[serde(rename = "L_claimed")]
    pub l_claimed: String,
    pub rate: String,
}

/// Writes rows under the header `n,p,g,K,F_factored,F_log,L_exact,L_claimed,rate`.
pub fn write_construct_csv<W: Write>(writer: W, rows: &[ConstructRow]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    for r in rows {
        wtr.serialize(r).map_err(csv_err)?;
    }
    wtr.flush().map_err(|e| Error::Parse(e.to_string()))
}
