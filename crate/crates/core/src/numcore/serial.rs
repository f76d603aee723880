//! JSON entries for scalars and matrices: plain numbers, or exact `"p/q"`
//! strings.

use serde::{Deserialize, Serialize};

use super::{parse_rational, Mat, NumError, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Num(f64),
    Text(String),
}

impl Entry {
    pub fn of<T: Scalar>(x: &T) -> Entry {
        match x.exact_string() {
            Some(s) => Entry::Text(s),
            None => Entry::Num(x.to_f64()),
        }
    }

    pub fn to_scalar<T: Scalar>(&self) -> Result<T, String> {
        match self {
            Entry::Num(v) if v.is_finite() => Ok(T::from_f64(*v)),
            Entry::Num(v) => Err(format!("non-finite entry {v}")),
            Entry::Text(s) => parse_rational(s).map(|r| T::from_rational(&r)),
        }
    }
}

pub type MatEntries = Vec<Vec<Entry>>;

pub fn mat_to_entries<T: Scalar>(m: &Mat<T>) -> MatEntries {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(Entry::of).collect())
        .collect()
}

pub fn mat_from_entries<T: Scalar>(rows: &MatEntries) -> Result<Mat<T>, String> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(Entry::to_scalar).collect::<Result<Vec<T>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Mat::from_rows(rows).map_err(|e: NumError| e.to_string())
}

pub fn vec_to_entries<T: Scalar>(v: &[T]) -> Vec<Entry> {
    v.iter().map(Entry::of).collect()
}

pub fn vec_from_entries<T: Scalar>(v: &[Entry]) -> Result<Vec<T>, String> {
    v.iter().map(Entry::to_scalar).collect()
}
