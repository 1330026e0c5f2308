//! Problem configuration: the TOML format, validation into core types, and
//! the normalized echo that goes into every report.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use proreg_core::homcomplex::{ComplexError, FPGradedModule, SESOfModules};
use proreg_core::koszul::{KoszulError, Sequence};
use proreg_core::polyring::{
    display_polynomial, parse_polynomial, GradedRingContext, PolyError, Polynomial,
};
use proreg_core::{exactlin::FieldError, FieldSpec, GradedFreeModule, PolyMatrix};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("config parse error at line {line}, column {column}: {message}")]
    ParseError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid polynomial in `{field}` at offset {offset}: {message}")]
    PolyParse {
        field: String,
        offset: usize,
        message: String,
    },
    #[error("modulus {0} is not a prime in the supported range")]
    NonPrimeModulus(u64),
    #[error("`{field}` must be homogeneous: `{value}`")]
    NonHomogeneousInput { field: String, value: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// On-disk shape: everything optional that has a default.
#[derive(Debug, Clone, Deserialize)]
struct FileConfig {
    p: Option<u64>,
    variables: Vec<String>,
    degrees: Option<Vec<i64>>,
    #[serde(default)]
    quotient: Vec<String>,
    sequence: Vec<String>,
    module: Option<RawModule>,
    ses: Option<RawSes>,
    bounds: Option<FileBounds>,
}

#[derive(Debug, Clone, Deserialize, Serialize, PartialEq, Eq)]
pub struct RawModule {
    pub generators: Vec<i64>,
    /// Relation columns; each inner list has one entry per generator.
    #[serde(default)]
    pub relations: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize, Serialize, PartialEq, Eq)]
pub struct RawSes {
    pub m1: RawModule,
    pub m2: RawModule,
    pub m3: RawModule,
    /// Row-major matrix of the injection (m2.rank x m1.rank).
    pub f: Vec<Vec<String>>,
    /// Row-major matrix of the surjection (m3.rank x m2.rank).
    pub g: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
struct FileBounds {
    n_max: Option<usize>,
    m_max: Option<usize>,
    window: Option<usize>,
    /// `[lo, hi]` inclusive degree window.
    degrees: Option<[i64; 2]>,
    degree_bound: Option<i64>,
    n_list: Option<Vec<usize>>,
}

/// Normalized echo of a validated config; serializing and re-parsing it
/// yields an equivalent configuration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RawConfig {
    pub p: u64,
    pub variables: Vec<String>,
    pub degrees: Vec<i64>,
    pub quotient: Vec<String>,
    pub sequence: Vec<String>,
    pub module: RawModule,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ses: Option<RawSes>,
    pub bounds: RawBounds,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RawBounds {
    pub n_max: usize,
    pub m_max: usize,
    pub window: usize,
    pub degrees: [i64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<i64>,
    pub n_list: Vec<usize>,
}

/// Resolved search/window bounds.
#[derive(Debug, Clone)]
pub struct Bounds {
    pub n_max: usize,
    pub m_max: usize,
    pub window: usize,
    pub degree_lo: i64,
    pub degree_hi: i64,
    pub degree_bound: Option<i64>,
    pub n_list: Vec<usize>,
}

impl Bounds {
    pub fn degree_window(&self) -> std::ops::RangeInclusive<i64> {
        self.degree_lo..=self.degree_hi
    }
}

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub prime: Option<u64>,
    pub degrees: Option<(i64, i64)>,
    pub n_max: Option<usize>,
    pub m_max: Option<usize>,
    pub window: Option<usize>,
    pub degree_bound: Option<i64>,
}

/// A fully validated problem: ring context, sequence, coefficient module,
/// optional short exact sequence, and bounds.
#[derive(Debug)]
pub struct ProblemConfig {
    pub ctx: GradedRingContext,
    pub sequence: Sequence,
    pub module: FPGradedModule,
    pub ses: Option<SESOfModules>,
    pub bounds: Bounds,
    raw: RawConfig,
}

impl ProblemConfig {
    pub fn raw(&self) -> &RawConfig {
        &self.raw
    }

    /// Canonical TOML rendering of the normalized config.
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(&self.raw).expect("config serializes")
    }
}

const DEFAULT_N_MAX: usize = 8;
const DEFAULT_M_MAX: usize = 12;
const DEFAULT_WINDOW: usize = 3;
const DEFAULT_DEGREES: [i64; 2] = [-8, 4];

/// Parses and validates a config file, applying CLI overrides.
pub fn parse_config(text: &str, overrides: &Overrides) -> Result<ProblemConfig, ConfigError> {
    let file: FileConfig = toml::from_str(text).map_err(|e| located(text, e))?;

    let p = overrides.prime.or(file.p).unwrap_or(FieldSpec::DEFAULT_PRIME);
    let field = FieldSpec::new(p).map_err(|e| match e {
        FieldError::NonPrimeModulus(p) | FieldError::ModulusTooLarge(p) => {
            ConfigError::NonPrimeModulus(p)
        }
    })?;

    if file.variables.is_empty() {
        return Err(ConfigError::Invalid("at least one variable required".into()));
    }
    let var_degrees = file
        .degrees
        .clone()
        .unwrap_or_else(|| vec![1; file.variables.len()]);
    let base_ctx = GradedRingContext::polynomial_ring(field, file.variables.clone(), var_degrees)
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;

    let quotient_polys = parse_poly_list(&base_ctx, &file.quotient, "quotient")?;
    let ctx = base_ctx
        .clone()
        .with_quotient(quotient_polys.clone())
        .map_err(|e| match e {
            PolyError::InhomogeneousQuotientGenerator(value) => ConfigError::NonHomogeneousInput {
                field: "quotient".into(),
                value,
            },
            other => ConfigError::Invalid(other.to_string()),
        })?;

    let sequence_polys = parse_poly_list(&ctx, &file.sequence, "sequence")?;
    let sequence = Sequence::new(&ctx, sequence_polys).map_err(|e| match e {
        KoszulError::NonHomogeneousElement { index } | KoszulError::NonPositiveDegree { index } => {
            ConfigError::NonHomogeneousInput {
                field: format!("sequence[{index}]"),
                value: file.sequence[index].clone(),
            }
        }
        other => ConfigError::Invalid(other.to_string()),
    })?;

    let raw_module = file.module.clone().unwrap_or(RawModule {
        generators: vec![0],
        relations: vec![],
    });
    let module = build_module(&ctx, &raw_module, "module")?;

    let ses = match &file.ses {
        None => None,
        Some(raw) => Some(build_ses(&ctx, raw)?),
    };

    let fb = file.bounds.clone().unwrap_or_default();
    let degrees = overrides
        .degrees
        .map(|(lo, hi)| [lo, hi])
        .or(fb.degrees)
        .unwrap_or(DEFAULT_DEGREES);
    if degrees[0] > degrees[1] {
        return Err(ConfigError::Invalid(format!(
            "empty degree window {}..{}",
            degrees[0], degrees[1]
        )));
    }
    let bounds = Bounds {
        n_max: overrides.n_max.or(fb.n_max).unwrap_or(DEFAULT_N_MAX),
        m_max: overrides.m_max.or(fb.m_max).unwrap_or(DEFAULT_M_MAX),
        window: overrides.window.or(fb.window).unwrap_or(DEFAULT_WINDOW),
        degree_lo: degrees[0],
        degree_hi: degrees[1],
        degree_bound: overrides.degree_bound.or(fb.degree_bound),
        n_list: fb.n_list.unwrap_or_else(|| vec![1, 2, 3]),
    };
    if bounds.n_list.is_empty() || bounds.n_list.iter().any(|&n| n == 0) {
        return Err(ConfigError::Invalid(
            "n_list must contain positive levels".into(),
        ));
    }

    let raw = RawConfig {
        p,
        variables: file.variables,
        degrees: ctx.var_degrees().to_vec(),
        quotient: quotient_polys
            .iter()
            .map(|q| display_polynomial(&ctx, q))
            .collect(),
        sequence: sequence
            .elements()
            .iter()
            .map(|a| display_polynomial(&ctx, a))
            .collect(),
        module: normalize_module(&ctx, &module),
        ses: ses.as_ref().map(|s| normalize_ses(&ctx, s)),
        bounds: RawBounds {
            n_max: bounds.n_max,
            m_max: bounds.m_max,
            window: bounds.window,
            degrees,
            degree_bound: bounds.degree_bound,
            n_list: bounds.n_list.clone(),
        },
    };

    Ok(ProblemConfig {
        ctx,
        sequence,
        module,
        ses,
        bounds,
        raw,
    })
}

fn located(text: &str, err: toml::de::Error) -> ConfigError {
    let (line, column) = err
        .span()
        .map(|span| {
            let prefix = &text[..span.start.min(text.len())];
            let line = prefix.matches('\n').count() + 1;
            let column = prefix.chars().rev().take_while(|&c| c != '\n').count() + 1;
            (line, column)
        })
        .unwrap_or((1, 1));
    ConfigError::ParseError {
        line,
        column,
        message: err.message().to_string(),
    }
}

fn parse_poly_list(
    ctx: &GradedRingContext,
    texts: &[String],
    field: &str,
) -> Result<Vec<Polynomial>, ConfigError> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| {
            parse_polynomial(ctx, t).map_err(|e| match e {
                PolyError::Parse { offset, message } => ConfigError::PolyParse {
                    field: format!("{field}[{i}]"),
                    offset,
                    message,
                },
                other => ConfigError::Invalid(other.to_string()),
            })
        })
        .collect()
}

fn parse_poly_matrix(
    ctx: &GradedRingContext,
    rows: &[Vec<String>],
    expected_rows: usize,
    expected_cols: usize,
    field: &str,
) -> Result<PolyMatrix, ConfigError> {
    if rows.len() != expected_rows || rows.iter().any(|r| r.len() != expected_cols) {
        return Err(ConfigError::Invalid(format!(
            "`{field}` must be a {expected_rows}x{expected_cols} matrix"
        )));
    }
    let mut entries = Vec::with_capacity(expected_rows * expected_cols);
    for (i, row) in rows.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            let p = parse_polynomial(ctx, cell).map_err(|e| match e {
                PolyError::Parse { offset, message } => ConfigError::PolyParse {
                    field: format!("{field}[{i}][{j}]"),
                    offset,
                    message,
                },
                other => ConfigError::Invalid(other.to_string()),
            })?;
            entries.push(p);
        }
    }
    Ok(PolyMatrix::from_entries(expected_rows, expected_cols, entries))
}

fn build_module(
    ctx: &GradedRingContext,
    raw: &RawModule,
    field: &str,
) -> Result<FPGradedModule, ConfigError> {
    let rank = raw.generators.len();
    if rank == 0 {
        return Err(ConfigError::Invalid(format!(
            "`{field}` needs at least one generator"
        )));
    }
    // relations arrive as columns; store as rank x ncols matrix
    let ncols = raw.relations.len();
    let mut entries = vec![Polynomial::zero(); rank * ncols];
    for (j, col) in raw.relations.iter().enumerate() {
        if col.len() != rank {
            return Err(ConfigError::Invalid(format!(
                "`{field}` relation {j} has {} entries, expected {rank}",
                col.len()
            )));
        }
        for (i, cell) in col.iter().enumerate() {
            let p = parse_polynomial(ctx, cell).map_err(|e| match e {
                PolyError::Parse { offset, message } => ConfigError::PolyParse {
                    field: format!("{field}.relations[{j}][{i}]"),
                    offset,
                    message,
                },
                other => ConfigError::Invalid(other.to_string()),
            })?;
            entries[i * ncols + j] = p;
        }
    }
    let relations = PolyMatrix::from_entries(rank, ncols, entries);
    FPGradedModule::new(
        ctx,
        GradedFreeModule::new(raw.generators.clone()),
        relations,
    )
    .map_err(|e| match e {
        ComplexError::InhomogeneousEntry { row, col } => ConfigError::NonHomogeneousInput {
            field: format!("{field}.relations[{col}][{row}]"),
            value: raw
                .relations
                .get(col)
                .and_then(|c| c.get(row))
                .cloned()
                .unwrap_or_default(),
        },
        other => ConfigError::Invalid(other.to_string()),
    })
}

fn build_ses(ctx: &GradedRingContext, raw: &RawSes) -> Result<SESOfModules, ConfigError> {
    let m1 = build_module(ctx, &raw.m1, "ses.m1")?;
    let m2 = build_module(ctx, &raw.m2, "ses.m2")?;
    let m3 = build_module(ctx, &raw.m3, "ses.m3")?;
    let f = parse_poly_matrix(
        ctx,
        &raw.f,
        m2.ambient().rank(),
        m1.ambient().rank(),
        "ses.f",
    )?;
    let g = parse_poly_matrix(
        ctx,
        &raw.g,
        m3.ambient().rank(),
        m2.ambient().rank(),
        "ses.g",
    )?;
    SESOfModules::new(ctx, m1, m2, m3, f, g).map_err(|e| ConfigError::Invalid(e.to_string()))
}

fn normalize_module(ctx: &GradedRingContext, module: &FPGradedModule) -> RawModule {
    let rank = module.ambient().rank();
    let rel = module.relations();
    let relations = (0..rel.cols())
        .map(|j| {
            (0..rank)
                .map(|i| display_polynomial(ctx, rel.entry(i, j)))
                .collect()
        })
        .collect();
    RawModule {
        generators: module.ambient().generator_degrees().to_vec(),
        relations,
    }
}

fn normalize_ses(ctx: &GradedRingContext, ses: &SESOfModules) -> RawSes {
    let matrix = |m: &PolyMatrix| -> Vec<Vec<String>> {
        (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| display_polynomial(ctx, m.entry(i, j)))
                    .collect()
            })
            .collect()
    };
    RawSes {
        m1: normalize_module(ctx, ses.m1()),
        m2: normalize_module(ctx, ses.m2()),
        m3: normalize_module(ctx, ses.m3()),
        f: matrix(ses.injection()),
        g: matrix(ses.surjection()),
    }
}

/// The default SES used by `les-check` when the config has none:
/// `0 -> A(shift deg a_1) -> A -> A/(a_1) -> 0`.
pub fn default_ses(
    ctx: &GradedRingContext,
    sequence: &Sequence,
) -> Result<SESOfModules, ConfigError> {
    let a1 = sequence.elements()[0].clone();
    let deg = sequence.degrees()[0];
    let m1 = FPGradedModule::free(GradedFreeModule::new(vec![deg]));
    let m2 = FPGradedModule::ring();
    let m3 = FPGradedModule::cyclic(ctx, vec![a1.clone()])
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let f = PolyMatrix::from_entries(1, 1, vec![a1]);
    let g = PolyMatrix::from_entries(1, 1, vec![Polynomial::one(ctx.nvars())]);
    SESOfModules::new(ctx, m1, m2, m3, f, g).map_err(|e| ConfigError::Invalid(e.to_string()))
}
