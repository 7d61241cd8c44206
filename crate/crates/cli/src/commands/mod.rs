pub mod fhs;
pub mod flat;
pub mod markoff;
pub mod torus;
