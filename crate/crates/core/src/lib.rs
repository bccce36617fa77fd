pub mod codes;
pub mod css;
pub mod ensembles;
pub mod f2;
pub mod hgp;
pub mod transversal;
