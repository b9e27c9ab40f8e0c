//! The asynchronously automatic structure: the normal-form language
//! automaton, its constants, the departure function and the multipliers.

mod ball;
mod constants;
mod departure;
mod language;
mod multiplier;
mod report;
mod verify_language;

pub use ball::{language_words, lift_base_word, prefix_images, GammaBall};
pub use constants::{
    compute_constants, compute_eta, compute_zeta, measure_kappa, KappaReport, StructureConstants,
};
pub use departure::{
    exact_or_empirical, DepartureMethod, DepartureRegistry, DepartureRequest, DepartureTable,
    EmpiricalDeparture, ExactDeparture,
};
pub use language::{Census, LangState, LanguageFsa, LanguageOptions};
pub use multiplier::{
    build_multiplier, build_verified_multiplier, default_k, letter_length, verify_multiplier,
    Multiplier, MultiplierReport,
};
pub use report::{verify_structure, StructureReport, VerifyOptions};
pub use verify_language::{generate_normal_form_words, verify_language, LanguageReport};
