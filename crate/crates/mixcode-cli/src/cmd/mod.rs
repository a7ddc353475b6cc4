pub mod attack;
pub mod build;
pub mod noise_curve;
pub mod simulate;
pub mod validate;
