pub mod associated;
pub mod axioms;
pub mod choice;
pub mod da;
pub mod decomposition;
pub mod generate;
mod error;
pub mod ids;
pub mod io;
pub mod iso;
pub mod limits;
pub mod market;
pub mod matching;
pub mod prefs;
pub mod render;
pub mod stability;

pub use error::{Error, Result};
