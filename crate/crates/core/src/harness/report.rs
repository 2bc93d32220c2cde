use std::fmt::{self, Write as _};

use crate::dsl::format_number;
use crate::metrics::MetricsRecord;

/// One row of the Dice distribution table.
#[derive(Clone, Debug, PartialEq)]
pub struct DiceBin {
    pub label: &'static str,
    pub count: usize,
    pub fraction: f64,
}

/// Summary over the successfully scored cases of a batch.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateReport {
    pub scored: usize,
    pub skipped: usize,
    pub errors: usize,
    /// Mean Dice, Jaccard, sensitivity, specificity and accuracy.
    pub means: [f64; 5],
    /// Cumulative bins `> 0.9`, `> 0.8`, `> 0.7`, then `< 0.5` and `= 0`.
    pub bins: Vec<DiceBin>,
}

pub const INDEX_NAMES: [&str; 5] = ["dice", "jaccard", "sensitivity", "specificity", "accuracy"];

impl AggregateReport {
    pub fn from_records(records: &[MetricsRecord], skipped: usize, errors: usize) -> Self {
        let n = records.len();
        let mut means = [0.0; 5];
        if n > 0 {
            for r in records {
                for (m, v) in means.iter_mut().zip(indexes(r)) {
                    *m += v;
                }
            }
            means.iter_mut().for_each(|m| *m /= n as f64);
        }
        type Pred = fn(f64) -> bool;
        let bins: [(&'static str, Pred); 5] = [
            ("Dice > 0.9", |d| d > 0.9),
            ("Dice > 0.8", |d| d > 0.8),
            ("Dice > 0.7", |d| d > 0.7),
            ("Dice < 0.5", |d| d < 0.5),
            ("Dice = 0", |d| d == 0.0),
        ];
        let bins = bins
            .iter()
            .map(|&(label, pred)| {
                let count = records.iter().filter(|r| pred(r.dice)).count();
                DiceBin {
                    label,
                    count,
                    fraction: if n == 0 { 0.0 } else { count as f64 / n as f64 },
                }
            })
            .collect();
        AggregateReport {
            scored: n,
            skipped,
            errors,
            means,
            bins,
        }
    }

    pub fn bin(&self, label: &str) -> Option<&DiceBin> {
        self.bins.iter().find(|b| b.label == label)
    }
}

pub(crate) fn indexes(r: &MetricsRecord) -> [f64; 5] {
    [r.dice, r.jaccard, r.sensitivity, r.specificity, r.accuracy]
}

impl fmt::Display for AggregateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        writeln!(
            s,
            "cases scored: {}  skipped: {}  errors: {}",
            self.scored, self.skipped, self.errors
        )?;
        writeln!(s)?;
        writeln!(s, "{:<14}{:>8}{:>12}", "", "images", "fraction")?;
        for b in &self.bins {
            writeln!(s, "{:<14}{:>8}{:>12}", b.label, b.count, format_number(b.fraction))?;
        }
        writeln!(s)?;
        writeln!(s, "mean indexes")?;
        for (name, m) in INDEX_NAMES.iter().zip(self.means) {
            writeln!(s, "  {:<12}{:>10}", name, format_number(m))?;
        }
        f.write_str(&s)
    }
}
