//! Error type shared by the rate-table oracle, the curve builder, and
//! the fitter.

use lorentz::LorentzError;
use schrodinger::{HarmonicError, PotentialError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RateLabError {
    #[error(transparent)]
    Lorentz(#[from] LorentzError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
    #[error(transparent)]
    Heat(#[from] heatflow::HeatError),
    #[error("decay exponent {decay} is not below N/2 = {dim}/2")]
    SupercriticalDecay {
        decay: lorentz::Rational,
        dim: u32,
    },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("cannot parse {0:?} as a rational number")]
    BadRational(String),
    #[error("trace does not record the norm series for exponents {0}")]
    MissingObservable(String),
    #[error("family is empty")]
    EmptyFamily,
    #[error("source norm underflows at anchor t = {t} for member {member:?}")]
    DenominatorUnderflow { t: f64, member: String },
    #[error("sample times must be geometric, positive, and increasing: {0}")]
    BadSampleTimes(String),
    #[error("norm estimate at t = {t} is not positive and finite: {value}")]
    BadEstimate { t: f64, value: f64 },
    #[error(
        "fit window [{t_lo}, {t_hi}] too short: need a span of four decades reaching past t = 100"
    )]
    ShortWindow { t_lo: f64, t_hi: f64 },
    #[error("norm series has fewer than {need} usable samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("truncated-boundedness ratio needs a diagonal pair with p > 2, got {0}")]
    BadTruncationExponents(String),
}
