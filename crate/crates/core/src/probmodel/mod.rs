//! Exact-rational probability objects and information measures.

mod info;
mod joint;
mod problem;
pub mod rational;

pub use info::{
    conditional_mutual_information, entropy, entropy_bits, is_markov_chain, l1_channel_distance,
    Assignment, MarkovCheck, MarkovWitness,
};
pub use joint::{JointPMF, Variable};
pub use problem::{validate_problem, Channel, ProblemSpec, ValidatedProblem};
pub use rational::Rational;
