pub mod action;
pub mod arith;
pub mod surface;
pub mod modular;
pub mod congruence;
pub mod groups;
pub mod nielsen;
pub mod cusp_comb;
pub mod markoff_z;
pub mod cache;
pub mod cli;
