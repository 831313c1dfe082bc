pub mod algebra;
pub mod parser;
pub mod projective;
pub mod puiseux;
pub mod limits;
pub mod graphoid;
pub mod degree;
pub mod cli;
