pub mod amalgam;
pub mod canon;
pub mod colgraph;
pub mod enumerate;
pub mod json;
pub mod katetov;
pub mod limit;
pub mod metrize;
pub mod morphism;
pub mod ramsey;
pub mod random;
pub mod rational;
pub mod space;
