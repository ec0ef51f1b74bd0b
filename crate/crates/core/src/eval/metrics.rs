use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Scoring function for predicted labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    MacroF1,
    MacroRecall,
    /// F1 of one designated class.
    PositiveF1(String),
    /// Labels mapped to numbers (parsed when every label is numeric,
    /// otherwise their rank in sorted order) and correlated.
    Pearson,
}

impl Metric {
    pub fn score<S: AsRef<str>>(&self, y_true: &[S], y_pred: &[S]) -> Result<f64> {
        match self {
            Metric::MacroF1 => macro_f1(y_true, y_pred),
            Metric::MacroRecall => macro_recall(y_true, y_pred),
            Metric::PositiveF1(p) => class_f1(y_true, y_pred, p),
            Metric::Pearson => {
                check_lengths(y_true.len(), y_pred.len())?;
                let (a, b) = ordinal_values(y_true, y_pred);
                pearson(&a, &b)
            }
        }
    }

    pub fn name(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::MacroF1 => f.write_str("macro-f1"),
            Metric::MacroRecall => f.write_str("macro-recall"),
            Metric::PositiveF1(p) => write!(f, "f1:{p}"),
            Metric::Pearson => f.write_str("pearson"),
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "macro-f1" | "macrof1" | "macro_f1" => Ok(Metric::MacroF1),
            "macro-recall" | "macrorecall" | "macro_recall" => Ok(Metric::MacroRecall),
            "pearson" => Ok(Metric::Pearson),
            _ => match s.strip_prefix("f1:") {
                Some(p) if !p.is_empty() => Ok(Metric::PositiveF1(p.into())),
                _ => Err(Error::InvalidParameter(alloc::format!("unknown metric `{s}`"))),
            },
        }
    }
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch { left: a, right: b });
    }
    if a == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

struct Counts {
    tp: usize,
    fp: usize,
    fn_: usize,
}

fn counts<S: AsRef<str>>(y_true: &[S], y_pred: &[S], class: &str) -> Counts {
    let mut c = Counts { tp: 0, fp: 0, fn_: 0 };
    for (t, p) in y_true.iter().zip(y_pred) {
        let (t, p) = (t.as_ref() == class, p.as_ref() == class);
        match (t, p) {
            (true, true) => c.tp += 1,
            (false, true) => c.fp += 1,
            (true, false) => c.fn_ += 1,
            _ => {}
        }
    }
    c
}

fn f1_of(c: &Counts) -> f64 {
    let denom = 2 * c.tp + c.fp + c.fn_;
    if denom == 0 {
        0.0
    } else {
        2.0 * c.tp as f64 / denom as f64
    }
}

fn class_f1<S: AsRef<str>>(y_true: &[S], y_pred: &[S], class: &str) -> Result<f64> {
    check_lengths(y_true.len(), y_pred.len())?;
    Ok(f1_of(&counts(y_true, y_pred, class)))
}

/// Unweighted mean of per-class F1 over the classes present in either
/// argument.
pub fn macro_f1<S: AsRef<str>>(y_true: &[S], y_pred: &[S]) -> Result<f64> {
    check_lengths(y_true.len(), y_pred.len())?;
    let classes: BTreeSet<&str> = y_true.iter().chain(y_pred).map(AsRef::as_ref).collect();
    let total: f64 = classes.iter().map(|c| f1_of(&counts(y_true, y_pred, c))).sum();
    Ok(total / classes.len() as f64)
}

/// Unweighted mean of per-class recall over the classes of `y_true`.
pub fn macro_recall<S: AsRef<str>>(y_true: &[S], y_pred: &[S]) -> Result<f64> {
    check_lengths(y_true.len(), y_pred.len())?;
    let classes: BTreeSet<&str> = y_true.iter().map(AsRef::as_ref).collect();
    let total: f64 = classes
        .iter()
        .map(|c| {
            let k = counts(y_true, y_pred, c);
            k.tp as f64 / (k.tp + k.fn_) as f64
        })
        .sum();
    Ok(total / classes.len() as f64)
}

/// Macro-recall over encoded labels; classes absent from `y_true` are skipped.
pub fn balanced_accuracy(y_true: &[usize], y_pred: &[usize], n_classes: usize) -> f64 {
    let mut hit = alloc::vec![0usize; n_classes];
    let mut tot = alloc::vec![0usize; n_classes];
    for (&t, &p) in y_true.iter().zip(y_pred) {
        tot[t] += 1;
        if t == p {
            hit[t] += 1;
        }
    }
    let present: Vec<f64> = (0..n_classes).filter(|&c| tot[c] > 0).map(|c| hit[c] as f64 / tot[c] as f64).collect();
    if present.is_empty() {
        0.0
    } else {
        present.iter().sum::<f64>() / present.len() as f64
    }
}

pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    check_lengths(a.len(), b.len())?;
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        cov += dx * dy;
        va += dx * dx;
        vb += dy * dy;
    }
    if va == 0.0 || vb == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok((cov / libm::sqrt(va * vb)).clamp(-1.0, 1.0))
}

fn ordinal_values<S: AsRef<str>>(y_true: &[S], y_pred: &[S]) -> (Vec<f64>, Vec<f64>) {
    let parsed: Option<(Vec<f64>, Vec<f64>)> = (|| {
        let a = y_true.iter().map(|s| s.as_ref().trim().parse::<f64>().ok()).collect::<Option<Vec<_>>>()?;
        let b = y_pred.iter().map(|s| s.as_ref().trim().parse::<f64>().ok()).collect::<Option<Vec<_>>>()?;
        Some((a, b))
    })();
    if let Some(p) = parsed {
        return p;
    }
    let classes: Vec<&str> = y_true.iter().chain(y_pred).map(AsRef::as_ref).collect::<BTreeSet<_>>().into_iter().collect();
    let rank = |s: &S| classes.binary_search(&s.as_ref()).unwrap_or(0) as f64;
    (y_true.iter().map(rank).collect(), y_pred.iter().map(rank).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn macro_f1_hand_case() {
        // A: P=1, R=1/2 -> 2/3; B: P=2/3, R=1 -> 0.8
        let v = macro_f1(&["A", "A", "B", "B"], &["A", "B", "B", "B"]).unwrap();
        assert!((v - (2.0 / 3.0 + 0.8) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn macro_f1_edges() {
        assert_eq!(macro_f1(&["a", "b"], &["a", "b"]).unwrap(), 1.0);
        assert_eq!(macro_f1(&["a", "a"], &["a", "a"]).unwrap(), 1.0);
        // class never predicted contributes 0
        assert_eq!(macro_f1(&["a", "b"], &["a", "a"]).unwrap(), (2.0 / 3.0) / 2.0);
        assert!(macro_f1(&["a"], &["a", "b"]).is_err());
        let empty: [&str; 0] = [];
        assert!(macro_f1(&empty, &empty).is_err());
    }

    #[test]
    fn macro_recall_hand_case() {
        let v = macro_recall(&["A", "A", "B", "B"], &["A", "B", "B", "B"]).unwrap();
        assert!((v - 0.75).abs() < 1e-12);
    }

    #[test]
    fn pearson_cases() {
        let v = [1.0, 2.0, 3.0];
        assert!((pearson(&v, &v).unwrap() - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        assert!((pearson(&v, &neg).unwrap() + 1.0).abs() < 1e-12);
        assert!((pearson(&v, &[1.0, 2.0, 4.0]).unwrap() - 0.981_980_506_061_965_7).abs() < 1e-9);
        assert_eq!(pearson(&v, &[1.0, 1.0, 1.0]), Err(Error::UndefinedCorrelation));
    }

    #[test]
    fn metric_parsing_round_trips() {
        for m in [Metric::MacroF1, Metric::MacroRecall, Metric::Pearson, Metric::PositiveF1("pos".into())] {
            assert_eq!(m.name().parse::<Metric>().unwrap(), m);
        }
        assert!("accuracy".parse::<Metric>().is_err());
    }

    #[test]
    fn pearson_metric_on_numeric_labels() {
        let m = Metric::Pearson;
        assert!((m.score(&["1", "2", "3"], &["1", "2", "4"]).unwrap() - 0.981_980_506_061_965_7).abs() < 1e-9);
        assert!((m.score(&["lo", "mid", "hi"], &["lo", "mid", "hi"]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn balanced_accuracy_matches_macro_recall() {
        let t = [0, 0, 1, 1, 2];
        let p = [0, 1, 1, 1, 0];
        let s: Vec<alloc::string::String> = t.iter().map(|v| alloc::format!("{v}")).collect();
        let q: Vec<alloc::string::String> = p.iter().map(|v| alloc::format!("{v}")).collect();
        assert!((balanced_accuracy(&t, &p, 3) - macro_recall(&s, &q).unwrap()).abs() < 1e-12);
    }
}
