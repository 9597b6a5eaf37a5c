pub mod context;
pub mod error;
pub mod field;
pub mod groebner;
pub mod hilbert;
pub mod ideal;
pub mod length;
pub mod monomial;
pub mod northcott;
pub mod omega;
pub mod oracle;
pub mod poly;
pub mod reduction;
