pub mod acceptance;
pub mod commensurations;
pub mod error;
pub mod freewords;
pub mod geometry;
pub mod group;
pub mod lattices;
pub mod limits;
pub mod matrix;
pub mod prosystems;
pub mod solenoid;
pub mod stallings;
pub mod text;

pub use error::{Error, Result};
