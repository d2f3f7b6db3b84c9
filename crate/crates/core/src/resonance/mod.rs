//! The combinatorial route: Aomoto complexes of the Orlik-Solomon algebra,
//! residue weights, and checkers for the conditions that tie them to the
//! Milnor fiber.

mod aomoto;
mod conditions;
mod nets;
mod weights;

pub use aomoto::{alpha_components, aomoto_h1, Anchor, AomotoSystem};
pub use conditions::{
    check_condition_02, check_theorem1_hypotheses, search_i_for_02, Branch, Cond02Verdict,
    Theorem1Verdict, Witness, DEFAULT_SEARCH_CAP,
};
pub use nets::{net_detect, PartitionPhi};
pub use weights::{weights_from_k_i, ResidueWeights, WeightSource};
