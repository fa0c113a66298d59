//! Random walks: step measures, sampled trajectories, stopping times,
//! and the Monte Carlo experiments built on them.

pub mod coupling;
pub mod excursion;
pub mod experiments;
pub mod lamp_law;
pub mod measure;
pub mod trajectory;

pub use coupling::{coupled_gluing_experiment, exact_escape_probability, CouplingReport};
pub use excursion::{
    excursion_swap_exhaustive, excursion_swap_monte_carlo, SwapExhaustiveReport,
    SwapMonteCarloReport,
};
pub use experiments::{
    escape_before_hitting, exit_time_tail, stopped_value_expectation, ExitTailReport,
    HittingReport, StoppedValueReport,
};
pub use lamp_law::{lamp_law_at_return, LampLawCell, LampLawReport};
pub use measure::{move_or_switch, StepMeasure};
pub use trajectory::{
    base_distance_from_origin, base_position, identity_start, sample_trajectory, stopping_times,
    StoppingRecord, Trajectory,
};
