pub mod corpus;
pub mod envelope;
pub mod expand;
pub mod ffield;
pub mod hahn;
pub mod hasse;
pub mod ore;
pub mod parse;
pub mod ratfun;
