//! Scan of Margulis invariants over conjugacy classes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{neutral_of_element, MargulisContext, MargulisError};
use crate::cocycle::AffineDeformation;
use crate::freegroup::{conjugacy_representatives, Word};
use crate::numcore::Scalar;

/// Invariants at or below this value count as non-positive, and the minimal
/// ratio must exceed the threshold by this much.
pub const POSITIVITY_MARGIN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MargulisRecord {
    pub word: String,
    pub length: usize,
    pub t: f64,
    pub alpha: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MargulisReport {
    pub max_len: usize,
    /// How conjugacy classes are represented.
    pub representatives: String,
    pub threshold: f64,
    pub words_scanned: usize,
    pub min_ratio: f64,
    pub min_ratio_word: String,
    /// Largest and smallest invariants when some invariant is not positive.
    pub opposite_sign_witness: Option<(String, String)>,
    pub sign_violations: Vec<String>,
    pub verdict: Verdict,
    #[serde(skip)]
    pub records: Vec<MargulisRecord>,
}

impl MargulisReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// CSV with columns `word,length,t,alpha,alpha/t`.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut out = csv::Writer::from_writer(Vec::new());
        out.write_record(["word", "length", "t", "alpha", "alpha/t"])?;
        for r in &self.records {
            out.write_record([
                r.word.clone(),
                r.length.to_string(),
                format!("{:.12e}", r.t),
                format!("{:.12e}", r.alpha),
                format!("{:.12e}", r.ratio),
            ])?;
        }
        let bytes = out.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn record<T: Scalar>(
    ctx: &MargulisContext<'_, T>,
    def: &AffineDeformation<T>,
    w: &Word,
) -> Result<MargulisRecord, MargulisError> {
    let cert = neutral_of_element(ctx, w)?;
    let alpha = ctx.form().pair(&def.eval(w), &cert.neutral).to_f64();
    let t = cert.translation_length;
    Ok(MargulisRecord {
        word: w.to_string(),
        length: w.len(),
        t,
        alpha,
        ratio: alpha / t,
    })
}

/// Margulis invariants of one representative per conjugacy class of words up
/// to `max_len`. Passes when every invariant is positive and the smallest
/// `alpha / t` exceeds `threshold`.
pub fn properness_scan<T: Scalar>(
    ctx: &MargulisContext<'_, T>,
    def: &AffineDeformation<T>,
    max_len: usize,
    threshold: f64,
) -> Result<MargulisReport, MargulisError> {
    if max_len == 0 {
        return Err(MargulisError::NotRegular {
            word: String::new(),
            reason: "scan length must be at least 1".into(),
        });
    }
    let words = conjugacy_representatives(def.representation().rank(), max_len);
    let records = words
        .par_iter()
        .map(|w| {
            record(ctx, def, w).map_err(|e| MargulisError::AtWord {
                word: w.to_string(),
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let min = records
        .iter()
        .min_by(|a, b| a.ratio.total_cmp(&b.ratio))
        .expect("at least one word");
    let sign_violations: Vec<String> = records
        .iter()
        .filter(|r| !(r.alpha > POSITIVITY_MARGIN))
        .map(|r| r.word.clone())
        .collect();
    let opposite_sign_witness = if sign_violations.is_empty() {
        None
    } else {
        let hi = records.iter().max_by(|a, b| a.alpha.total_cmp(&b.alpha)).expect("nonempty");
        let lo = records.iter().min_by(|a, b| a.alpha.total_cmp(&b.alpha)).expect("nonempty");
        Some((hi.word.clone(), lo.word.clone()))
    };
    let verdict = if sign_violations.is_empty() && min.ratio > threshold + POSITIVITY_MARGIN {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(MargulisReport {
        max_len,
        representatives: "cyclically reduced, lexicographically least rotation".into(),
        threshold,
        words_scanned: records.len(),
        min_ratio: min.ratio,
        min_ratio_word: min.word.clone(),
        opposite_sign_witness,
        sign_violations,
        verdict,
        records,
    })
}
