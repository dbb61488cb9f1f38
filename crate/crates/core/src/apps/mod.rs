//! Problems that reduce to minimal interpolation bases.

mod adversarial;
mod gs;
mod order_basis;
mod shift;

pub use adversarial::{
    adversarial_instance, adversarial_profile, find_generic_adversarial, GenericAdversarial,
};
pub use gs::{gs_instance, GsPoint, GsProblem, MultiplicitySupport};
pub use order_basis::{order_basis, ApproximantProblem};
pub use shift::reduce_shift;
