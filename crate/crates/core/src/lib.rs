pub mod arcs;
pub mod construct;
pub mod error;
pub mod geom;
pub mod io;
pub mod nd;
pub mod sampling;
pub mod scene;
pub mod trap;
pub mod verify;

pub use error::{Error, Result};
