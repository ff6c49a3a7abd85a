pub mod algebra;
pub mod catalog;
pub mod cone;
pub mod corpus;
pub mod cup;
pub mod dsl;
pub mod report;
pub mod solver;
