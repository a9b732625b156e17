use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced while building rate tables, loading cohorts, or fitting estimators.
#[derive(Debug, Error)]
pub enum Error {
    // ----- rate tables -----
    #[error("rate table bounds must satisfy age_min < age_max and date_min < date_max (got ages {age_min}..={age_max}, dates {date_min}..={date_max})")]
    InvalidBounds {
        age_min: i32,
        age_max: i32,
        date_min: i32,
        date_max: i32,
    },
    #[error("rate matrix has {got} entries, expected {expected} ({n_ages} ages x {n_dates} dates)")]
    RateMatrixShape {
        got: usize,
        expected: usize,
        n_ages: usize,
        n_dates: usize,
    },
    #[error("rate for age year {age_year}, date year {date_year} is {value}; rates must be finite and >= 0")]
    InvalidRate {
        age_year: i32,
        date_year: i32,
        value: f64,
    },
    #[error("annual death probability for age year {age_year}, date year {date_year} is {value}; probabilities must lie in [0, 1)")]
    InvalidAnnualProbability {
        age_year: i32,
        date_year: i32,
        value: f64,
    },
    #[error("rate table has no axis named `{axis}`; axes are: {available:?}")]
    UnknownAxis { axis: String, available: Vec<String> },
    #[error("unknown value `{value}` for axis `{axis}`; available values are: {available:?}")]
    UnknownCovariateValue {
        axis: String,
        value: String,
        available: Vec<String>,
    },
    #[error("covariate lookup got {got} values for {expected} axes ({axes:?})")]
    CovariateArity {
        got: usize,
        expected: usize,
        axes: Vec<String>,
    },
    #[error("no table stored for covariate combination {key:?}")]
    MissingCombination { key: Vec<String> },
    #[error("rate table is empty; at least one table is required")]
    EmptyRateTable,
    #[error("all tables in a rate table must share age/date bounds; table {key:?} disagrees with the first table")]
    MismatchedBounds { key: Vec<String> },
    #[error("duplicate table for covariate combination {key:?}")]
    DuplicateCombination { key: Vec<String> },
    #[error("life expectation diverges: the terminal cell rate (age {age_year}, date {date_year}) is zero")]
    DivergentExpectation { age_year: i32, date_year: i32 },

    // ----- rate table file format -----
    #[error("rate table file: {message} (line {line})")]
    RateTableFormat { message: String, line: usize },
    #[error("rate table file declares unsupported version `{version}`; this reader supports `ratetable v1`")]
    UnsupportedRateTableVersion { version: String },
    #[error("rate table file declares step `{step}`; only yearly axes are supported")]
    UnsupportedAxisStep { step: String },
    #[error("rate table file is missing cell (key {key:?}, age {age_year}, date {date_year})")]
    MissingCell {
        key: Vec<String>,
        age_year: i32,
        date_year: i32,
    },

    // ----- cohorts -----
    #[error("cohort file is missing column `{name}`; available columns are: {available:?}")]
    MissingColumn { name: String, available: Vec<String> },
    #[error("cohort row {row}: column `{column}` value `{value}` is not {expected}")]
    BadCell {
        row: usize,
        column: String,
        value: String,
        expected: &'static str,
    },
    #[error("cohort is empty")]
    EmptyCohort,

    // ----- formulas -----
    #[error("formula syntax error at byte {position}: expected {expected}, found `{found}`")]
    FormulaSyntax {
        position: usize,
        expected: &'static str,
        found: String,
    },
    #[error("column `{name}` is used more than once in the formula")]
    DuplicateFormulaColumn { name: String },

    // ----- binding -----
    #[error("rate table axis `{axis}` has no matching cohort column `{column}`; cohort columns are: {available:?}")]
    UnmatchedAxis {
        axis: String,
        column: String,
        available: Vec<String>,
    },

    // ----- estimation / inference -----
    #[error("daily grid needs at least one day")]
    EmptyGrid,
    #[error("group `{label}` is empty")]
    EmptyGroup { label: String },
    #[error("grouping produced a single group; the test needs at least two")]
    SingleGroup,
    #[error("no patient is ever at risk on the requested grid")]
    NoAtRisk,
    #[error("fits were computed on different grids ({left} vs {right} days)")]
    GridMismatch { left: usize, right: usize },
    #[error("confidence level must lie strictly between 0 and 1 (got {level})")]
    InvalidLevel { level: f64 },
    #[error("curve fitting does not accept Strata terms; use the test for stratified comparisons")]
    StrataInFit,
    #[error("time points must be sorted, finite and >= 0")]
    InvalidTimePoints,
    #[error("dense population terms would need {required} entries, over the budget of {budget}; stream per patient instead")]
    PopulationTermsBudget { required: usize, budget: usize },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error on {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
