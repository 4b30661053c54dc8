//! Power studies: finite-sample null critical values, then rejection
//! frequencies under each alternative.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::ContinuousDist;
use crate::empirical::LevelTable;
use crate::error::{invalid, Result};
use crate::montecarlo::alternatives::{fill_alternative, Alternative};
use crate::montecarlo::null::{check_tail_size, null_statistics};
use crate::rng::RngStream;
use crate::stats::onesample::StatKind;
use crate::stats::report::{check_alpha, upper_critical_value};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerStudyConfig {
    pub n: usize,
    pub p_list: Vec<u32>,
    pub alternatives: Vec<Alternative>,
    pub alpha: f64,
    pub m_null: usize,
    pub m_power: usize,
    pub seed: u64,
    pub statistic: StatKind,
}

impl PowerStudyConfig {
    /// The standard eight-alternative table for orders 0..=3 with 10⁴
    /// replications on each side.
    pub fn standard(n: usize, alpha: f64, seed: u64) -> Self {
        Self {
            n,
            p_list: vec![0, 1, 2, 3],
            alternatives: Alternative::standard_set(),
            alpha,
            m_null: 10_000,
            m_power: 10_000,
            seed,
            statistic: StatKind::Ks,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        self.statistic.validate()?;
        if self.n < 1 {
            return Err(invalid("n", "sample size must be positive"));
        }
        if self.p_list.is_empty() {
            return Err(invalid("p", "at least one order required"));
        }
        if self.alternatives.is_empty() {
            return Err(invalid("alternatives", "at least one alternative required"));
        }
        if self.m_power < 1 {
            return Err(invalid("M_power", "must be at least 1"));
        }
        check_tail_size(self.m_null, self.alpha)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerRow {
    pub alternative: String,
    /// Rejection counts, one per order in `p_list`.
    pub rejections: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerTable {
    pub config: PowerStudyConfig,
    /// Critical value for each order in `p_list`.
    pub critical_values: Vec<f64>,
    pub rows: Vec<PowerRow>,
}

impl PowerTable {
    /// Rejection rate in `[0, 1]` at full precision.
    pub fn rate(&self, row: usize, col: usize) -> f64 {
        self.rows[row].rejections[col] as f64 / self.config.m_power as f64
    }

    /// Rejection percentage rounded half-up to an integer.
    pub fn percent(&self, row: usize, col: usize) -> u32 {
        let exact = 100 * self.rows[row].rejections[col];
        let m = self.config.m_power;
        ((2 * exact + m) / (2 * m)) as u32
    }

    /// Row index of the alternative with the given label (`"A2"`, ...).
    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.rows.iter().position(|r| r.alternative == label)
    }

    /// Column index of order `p`.
    pub fn col_index(&self, p: u32) -> Option<usize> {
        self.config.p_list.iter().position(|&q| q == p)
    }

    fn column_prefix(&self) -> &'static str {
        match self.config.statistic {
            StatKind::Ks => "S",
            StatKind::Cvm => "T",
            StatKind::Omega { .. } => "omega",
        }
    }

    /// Alternatives as rows, orders as columns, integer percentages.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let prefix = self.column_prefix();
        let mut header = vec!["alternative".to_string()];
        header.extend(self.config.p_list.iter().map(|p| format!("{prefix}^({p})")));
        w.write_record(&header)?;
        for (i, row) in self.rows.iter().enumerate() {
            let mut rec = vec![row.alternative.clone()];
            rec.extend((0..self.config.p_list.len()).map(|j| self.percent(i, j).to_string()));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|source| crate::error::Error::Io {
            path: "<power table>".into(),
            source,
        })
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// Runs the study. Null replicate `r` uses substream `(seed, "null", r)`;
/// power replicate `r` of alternative `a` uses `(seed, "power", a, r)`.
/// All orders are evaluated on the same samples.
pub fn power_study(config: &PowerStudyConfig) -> Result<PowerTable> {
    config.validate()?;
    let root = RngStream::new(config.seed);
    let n = config.n;
    let kind = config.statistic;

    let null = null_statistics(kind, &config.p_list, n, config.m_null, root.labeled("null"))?;
    let critical_values: Vec<f64> = null
        .into_iter()
        .map(|mut d| {
            d.sort_by(f64::total_cmp);
            upper_critical_value(&d, config.alpha)
        })
        .collect();

    let tables: Vec<LevelTable> = config
        .p_list
        .iter()
        .map(|&p| LevelTable::new(n, p))
        .collect();
    let power_root = root.labeled("power");
    let mut rows = Vec::with_capacity(config.alternatives.len());
    for (a, alt) in config.alternatives.iter().enumerate() {
        let cell = power_root.substream(a as u64);
        let rejections = (0..config.m_power)
            .into_par_iter()
            .map_init(
                || (Vec::new(), Vec::new()),
                |(draws, scores), r| {
                    let mut rng = cell.substream(r as u64).rng();
                    fill_alternative(alt, n, &mut rng, draws);
                    // Scores under the uniform null are the data themselves.
                    scores.clear();
                    scores.extend(draws.iter().map(|&x| x.clamp(0.0, 1.0)));
                    scores.sort_by(f64::total_cmp);
                    tables
                        .iter()
                        .zip(&critical_values)
                        .map(|(t, &c)| kind.from_scores(scores, t).map(|s| usize::from(s > c)))
                        .collect::<Result<Vec<usize>>>()
                },
            )
            .try_reduce(
                || vec![0; tables.len()],
                |mut acc, v| {
                    acc.iter_mut().zip(v).for_each(|(a, b)| *a += b);
                    Ok(acc)
                },
            )?;
        rows.push(PowerRow {
            alternative: alt.label(),
            rejections,
        });
    }
    Ok(PowerTable {
        config: config.clone(),
        critical_values,
        rows,
    })
}
