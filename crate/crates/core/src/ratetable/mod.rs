//! Population mortality tables: dense per-day hazard matrices indexed by age
//! year and calendar year, plus the covariate-keyed collections around them.

mod hmd;
mod life;
mod parse;

pub use hmd::{read_hmd_file, read_hmd_rate_table};
pub use life::{DayIncrements, DayTerm, Life};
pub use parse::{read_ratetable, read_ratetable_file, write_ratetable};

use crate::error::{Error, Result};

/// Fixed year length, in days. No calendar arithmetic is done anywhere.
pub const DAYS_PER_YEAR: f64 = 365.241;

/// Clamps a time in days to the year range `[min_year, max_year]` and returns
/// the integral year index: `floor(min(max(days / 365.241, min), max))`.
///
/// Out-of-range ages and dates saturate on the terminal row/column, so the
/// terminal cell's rate applies forever.
#[inline]
pub fn clamped_year_index(days: f64, min_year: i32, max_year: i32) -> i32 {
    let years = days / DAYS_PER_YEAR;
    let clamped = years.max(min_year as f64).min(max_year as f64);
    clamped.floor() as i32
}

/// A dense matrix of daily hazard rates, rows indexed by age year in
/// `[age_min, age_max]` and columns by calendar year in `[date_min, date_max]`.
///
/// Storage is row-major by age so that sweeping dates at a fixed age stays in
/// cache inside the estimator loops.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicRateTable {
    rates: Vec<f64>,
    age_min: i32,
    age_max: i32,
    date_min: i32,
    date_max: i32,
    n_dates: usize,
}

impl BasicRateTable {
    /// Builds a table from daily hazard rates in row-major (age-major) order.
    pub fn new(
        rates: Vec<f64>,
        age_min: i32,
        age_max: i32,
        date_min: i32,
        date_max: i32,
    ) -> Result<Self> {
        if age_min >= age_max || date_min >= date_max {
            return Err(Error::InvalidBounds {
                age_min,
                age_max,
                date_min,
                date_max,
            });
        }
        let n_ages = (age_max - age_min + 1) as usize;
        let n_dates = (date_max - date_min + 1) as usize;
        if rates.len() != n_ages * n_dates {
            return Err(Error::RateMatrixShape {
                got: rates.len(),
                expected: n_ages * n_dates,
                n_ages,
                n_dates,
            });
        }
        for (idx, &rate) in rates.iter().enumerate() {
            if !rate.is_finite() || rate < 0.0 {
                return Err(Error::InvalidRate {
                    age_year: age_min + (idx / n_dates) as i32,
                    date_year: date_min + (idx % n_dates) as i32,
                    value: rate,
                });
            }
        }
        Ok(Self {
            rates,
            age_min,
            age_max,
            date_min,
            date_max,
            n_dates,
        })
    }

    /// Converts yearly death probabilities to daily rates under a piecewise
    /// constant hazard: `rate = -ln(1 - q) / 365.241`.
    pub fn from_annual_probabilities(
        annual_q: Vec<f64>,
        age_min: i32,
        age_max: i32,
        date_min: i32,
        date_max: i32,
    ) -> Result<Self> {
        if age_min >= age_max || date_min >= date_max {
            return Err(Error::InvalidBounds {
                age_min,
                age_max,
                date_min,
                date_max,
            });
        }
        let n_dates = (date_max - date_min + 1) as usize;
        let rates = annual_q
            .iter()
            .enumerate()
            .map(|(idx, &q)| {
                if !q.is_finite() || !(0.0..1.0).contains(&q) {
                    return Err(Error::InvalidAnnualProbability {
                        age_year: age_min + (idx / n_dates) as i32,
                        date_year: date_min + (idx % n_dates) as i32,
                        value: q,
                    });
                }
                Ok(-(-q).ln_1p() / DAYS_PER_YEAR)
            })
            .collect::<Result<Vec<f64>>>()?;
        Self::new(rates, age_min, age_max, date_min, date_max)
    }

    /// Daily hazard at the cell addressed by year indices (not clamped).
    #[inline]
    pub fn rate_at(&self, age_year: i32, date_year: i32) -> f64 {
        debug_assert!((self.age_min..=self.age_max).contains(&age_year));
        debug_assert!((self.date_min..=self.date_max).contains(&date_year));
        let row = (age_year - self.age_min) as usize;
        let col = (date_year - self.date_min) as usize;
        self.rates[row * self.n_dates + col]
    }

    /// Daily hazard for an age and date given in days, with clamping.
    #[inline]
    pub fn daily_hazard(&self, age_days: f64, date_days: f64) -> f64 {
        let age = clamped_year_index(age_days, self.age_min, self.age_max);
        let date = clamped_year_index(date_days, self.date_min, self.date_max);
        self.rate_at(age, date)
    }

    pub fn age_bounds(&self) -> (i32, i32) {
        (self.age_min, self.age_max)
    }

    pub fn date_bounds(&self) -> (i32, i32) {
        (self.date_min, self.date_max)
    }

    pub fn n_ages(&self) -> usize {
        (self.age_max - self.age_min + 1) as usize
    }

    pub fn n_dates(&self) -> usize {
        self.n_dates
    }

    pub(crate) fn rates(&self) -> &[f64] {
        &self.rates
    }
}

/// A collection of [`BasicRateTable`]s keyed by covariate values, one value
/// per named axis (e.g. country, sex).
#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    axes: Vec<String>,
    /// Keys sorted lexicographically; `tables[i]` belongs to `keys[i]`.
    keys: Vec<Vec<String>>,
    tables: Vec<BasicRateTable>,
}

impl RateTable {
    /// Builds a rate table from `(covariate key, table)` pairs. Every key must
    /// have one value per axis and all tables must share identical bounds.
    pub fn new(axes: Vec<String>, entries: Vec<(Vec<String>, BasicRateTable)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyRateTable);
        }
        let mut entries = entries;
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let first_bounds = (entries[0].1.age_bounds(), entries[0].1.date_bounds());
        let mut keys = Vec::with_capacity(entries.len());
        let mut tables = Vec::with_capacity(entries.len());
        for (key, table) in entries {
            if key.len() != axes.len() {
                return Err(Error::CovariateArity {
                    got: key.len(),
                    expected: axes.len(),
                    axes: axes.clone(),
                });
            }
            if (table.age_bounds(), table.date_bounds()) != first_bounds {
                return Err(Error::MismatchedBounds { key });
            }
            if keys.last() == Some(&key) {
                return Err(Error::DuplicateCombination { key });
            }
            keys.push(key);
            tables.push(table);
        }
        Ok(Self { axes, keys, tables })
    }

    /// Wraps a single table with no covariate axes.
    pub fn single(table: BasicRateTable) -> Self {
        Self {
            axes: Vec::new(),
            keys: vec![Vec::new()],
            tables: vec![table],
        }
    }

    pub fn axes(&self) -> &[String] {
        &self.axes
    }

    pub fn age_bounds(&self) -> (i32, i32) {
        self.tables[0].age_bounds()
    }

    pub fn date_bounds(&self) -> (i32, i32) {
        self.tables[0].date_bounds()
    }

    /// Distinct values available for one axis, sorted.
    pub fn available_covariates(&self, axis: &str) -> Result<Vec<&str>> {
        let pos = self.axis_position(axis)?;
        let mut values: Vec<&str> = self.keys.iter().map(|k| k[pos].as_str()).collect();
        values.sort_unstable();
        values.dedup();
        Ok(values)
    }

    pub(crate) fn axis_position(&self, axis: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|a| a == axis)
            .ok_or_else(|| Error::UnknownAxis {
                axis: axis.to_string(),
                available: self.axes.clone(),
            })
    }

    /// Index of the table for a covariate key; errors name the offending axis
    /// and value, or the missing combination.
    pub(crate) fn table_index(&self, key: &[&str]) -> Result<usize> {
        if key.len() != self.axes.len() {
            return Err(Error::CovariateArity {
                got: key.len(),
                expected: self.axes.len(),
                axes: self.axes.clone(),
            });
        }
        if let Ok(idx) = self
            .keys
            .binary_search_by(|probe| probe.iter().map(String::as_str).cmp(key.iter().copied()))
        {
            return Ok(idx);
        }
        // Identify why: an unknown per-axis value, or a missing combination.
        for (pos, (axis, &value)) in self.axes.iter().zip(key).enumerate() {
            if !self.keys.iter().any(|k| k[pos] == value) {
                let available = self
                    .available_covariates(axis)
                    .expect("axis name comes from self")
                    .into_iter()
                    .map(str::to_string)
                    .collect();
                return Err(Error::UnknownCovariateValue {
                    axis: axis.clone(),
                    value: value.to_string(),
                    available,
                });
            }
        }
        Err(Error::MissingCombination {
            key: key.iter().map(|s| s.to_string()).collect(),
        })
    }

    /// The table stored for a covariate key.
    pub fn table(&self, key: &[&str]) -> Result<&BasicRateTable> {
        Ok(&self.tables[self.table_index(key)?])
    }

    /// Daily hazard for the given age and date (days) and covariate values.
    pub fn daily_hazard(&self, age_days: f64, date_days: f64, key: &[&str]) -> Result<f64> {
        Ok(self.table(key)?.daily_hazard(age_days, date_days))
    }

    /// Iterates `(key, table)` pairs in sorted key order.
    pub fn iter(&self) -> impl Iterator<Item = (&[String], &BasicRateTable)> {
        self.keys
            .iter()
            .map(|k| k.as_slice())
            .zip(self.tables.iter())
    }
}
