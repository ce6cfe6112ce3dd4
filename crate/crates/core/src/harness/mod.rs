//! Configuration, ensembles and the reproduction runs behind the CLI.

mod certify;
mod config;
mod ensemble;
mod examples;
mod figures;

pub use certify::{certify_instance, run_certify, Aggregate, BackendRun, CertRecord, CertReport};
pub use config::{ConfigError, RunConfig, DEFAULT_TOLERANCES};
pub use ensemble::{
    candidate, draw, draw_accepted, instance_rng, random_polynomial, unit_disk_point, Draw,
    Instance, Rejection,
};
pub use examples::{
    discontinuity_pair, discontinuity_row, run_examples, sharpness_cofactors, sharpness_pair,
    sharpness_row, unnormalized_row, DiscontinuityRow, ExamplesReport, SharpnessRow,
    UnnormalizedRow, SHARPNESS_DEGREES, SHARPNESS_PARAMS,
};
pub use figures::{figure1_roots, figure4_roots, run_figures, FigureError, FiguresReport};
