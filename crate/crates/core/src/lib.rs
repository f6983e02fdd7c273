//! Social loss from inflation and unemployment as a variational problem on
//! time scales.
//!
//! The crate covers delta calculus on periodic grids ([`timescale`]), delta
//! exponentials and constant-coefficient dynamic equations ([`dynexp`]), the
//! closed-form minimizers of the economic model ([`elmodel`]), an independent
//! quadratic-programming check of those minimizers ([`oracle`]), and the
//! sampling-period sweep over monthly data ([`pipeline`]).

pub mod cli;
pub mod dynexp;
pub mod elmodel;
pub mod error;
pub mod oracle;
pub mod pipeline;
pub mod timescale;

pub use dynexp::{
    delta_exp, general_solution, ominus, solve_second_order, FundamentalSystem, GeneralSolution,
    Regressive, RootKind,
};
pub use elmodel::{
    el_coefficients, lagrangian, optimal_path_continuous, optimal_path_hz, social_loss_continuous,
    social_loss_hz, ClosedFormPath, ElSystem, ModelParams, PathKind,
};
pub use error::{Error, Result};
pub use oracle::{el_residual, perturbation_check, qp_minimize, PerturbationReport};
pub use pipeline::{
    empirical_loss, expected_inflation, load_series, render_report, sweep_h, synthetic_year, EconSeries,
    ReportFormat, SweepReport,
};
pub use timescale::{GridFunction, JumpOperators, PeriodicScale};
