pub mod cache;
pub mod cochain;
pub mod config;
pub mod embedding;
pub mod error;
pub mod group;
pub mod linalg;
pub mod massey;
pub mod registry;
pub mod report;
pub mod search;
pub mod unitri;
pub mod verification;

pub use error::{Error, Result};
