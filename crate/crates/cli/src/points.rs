//! Points CSV: `grade,re_t,im_t,re_value,im_value,survivor,residual`.
//!
//! Doubles are written with 17 significant digits, so reading a file back
//! reproduces the points bit for bit.

use std::io::{Read, Write};

use insola::insola::RelationPoint;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

pub const HEADER: [&str; 7] = [
    "grade", "re_t", "im_t", "re_value", "im_value", "survivor", "residual",
];

#[derive(Debug, Error)]
pub enum PointsError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("unexpected header {0:?}")]
    Header(Vec<String>),
    #[error("row {row}, column {column}: cannot parse {value:?}")]
    Field {
        row: usize,
        column: &'static str,
        value: String,
    },
}

pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_points<W: Write>(out: W, points: &[RelationPoint]) -> Result<(), PointsError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for p in points {
        w.write_record([
            p.grade.to_string(),
            format_f64(p.t.re),
            format_f64(p.t.im),
            format_f64(p.value.re),
            format_f64(p.value.im),
            p.survivor.to_string(),
            format_f64(p.residual),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_points<R: Read>(input: R) -> Result<Vec<RelationPoint>, PointsError> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?;
    if header.iter().ne(HEADER) {
        return Err(PointsError::Header(
            header.iter().map(String::from).collect(),
        ));
    }
    let mut points = Vec::new();
    for (row, record) in r.records().enumerate() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("");
        let bad = |i: usize| PointsError::Field {
            row: row + 1,
            column: HEADER[i],
            value: field(i).to_string(),
        };
        let num = |i: usize| field(i).parse::<f64>().map_err(|_| bad(i));
        let survivor = match field(5) {
            "true" => true,
            "false" => false,
            _ => return Err(bad(5)),
        };
        points.push(RelationPoint {
            grade: field(0).parse().map_err(|_| bad(0))?,
            t: Complex64::new(num(1)?, num(2)?),
            value: Complex64::new(num(3)?, num(4)?),
            survivor,
            residual: num(6)?,
        });
    }
    Ok(points)
}

/// JSON form of a point, with the reference value when one is known.
#[derive(Debug, Serialize)]
pub struct PointRecord {
    pub grade: usize,
    pub re_t: f64,
    pub im_t: f64,
    pub re_value: f64,
    pub im_value: f64,
    pub survivor: bool,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<[f64; 2]>,
}

impl PointRecord {
    pub fn new(p: &RelationPoint, reference: Option<Complex64>) -> Self {
        PointRecord {
            grade: p.grade,
            re_t: p.t.re,
            im_t: p.t.im,
            re_value: p.value.re,
            im_value: p.value.im,
            survivor: p.survivor,
            residual: p.residual,
            reference: reference.map(|v| [v.re, v.im]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(grade: usize, survivor: bool) -> RelationPoint {
        RelationPoint {
            t: Complex64::new(0.1, -1.0 / 3.0),
            value: Complex64::new(1e-300, 2.5e17),
            grade,
            survivor,
            residual: 1.0 / 7.0,
        }
    }

    #[test]
    fn header_and_booleans() {
        let mut buf = Vec::new();
        write_points(&mut buf, &[point(3, true), point(4, false)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("grade,re_t,im_t,re_value,im_value,survivor,residual")
        );
        assert!(lines.next().unwrap().contains(",true,"));
        assert!(lines.next().unwrap().contains(",false,"));
    }

    #[test]
    fn round_trip() {
        let pts = vec![point(1, true), point(39, false)];
        let mut buf = Vec::new();
        write_points(&mut buf, &pts).unwrap();
        assert_eq!(read_points(buf.as_slice()).unwrap(), pts);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            read_points("a,b\n".as_bytes()),
            Err(PointsError::Header(_))
        ));
        let row = "grade,re_t,im_t,re_value,im_value,survivor,residual\n1,0,0,0,0,yes,0\n";
        assert!(matches!(
            read_points(row.as_bytes()),
            Err(PointsError::Field {
                column: "survivor",
                ..
            })
        ));
    }
}
