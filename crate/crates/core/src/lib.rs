pub mod bench;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod multisym;
pub mod recovery;
pub mod representations;
pub mod scalar;
pub mod separation;
pub mod tensors;
pub mod transcendence;
