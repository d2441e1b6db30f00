pub mod chevrep;
pub mod error;
pub mod exactalg;
pub mod existence;
pub mod expr;
pub mod lemmas;
pub mod report;
pub mod rootdata;
pub mod subgrp;
pub mod witness;

pub use error::{Error, Result};
