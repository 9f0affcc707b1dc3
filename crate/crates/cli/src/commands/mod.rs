pub mod bound;
pub mod model;
pub mod sweep;
pub mod verify;
